//! Embezzling states and the measurement construction that reduces
//! predictions about an arbitrary bipartite pure state to predictions about
//! maximally entangled pairs.
//!
//! The resource is the harmonic-spectrum state
//! `Gamma_k = (1/sqrt(H_k)) sum_j (1/sqrt(j)) |j j>`. Local permutation
//! isometries pairing its sorted Schmidt coefficients with those of
//! `Gamma_k (x) psi_m` extract a maximally entangled `psi_m` at fidelity
//! approaching one as `k` grows. Controlling those isometries on the Schmidt
//! label of an input state `phi`, with multiplicities `m(y)` chosen so
//! `sum_y m(y) = 2^r`, turns `phi (x) Gamma_k` into an approximation of `r`
//! maximally entangled qubit pairs (times the untouched embezzler), on which
//! the chained measurements act.
//!
//! Everything downstream of the isometries is diagonal in a shared product
//! basis, so the post-isometry state is kept in a factored form: amplitudes
//! `beta[q][j]` over (qubit-block index `q`, embezzler level `j`), identical
//! on both sides. Dense verification paths exist for small dimensions.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::quantum::{schmidt, Povm, PureState, SchmidtDecomposition};
use crate::real::{r64, rn, Cplx, Real};
use nalgebra::DMatrix;

/// Total-dimension ceiling for dense representations.
const DENSE_LIMIT: usize = 1 << 12;

/// The harmonic embezzling resource on `k x k` levels.
#[derive(Debug, Clone)]
pub struct EmbezzlingState<R: Real> {
    k: usize,
    /// Schmidt probabilities `1/(j H_k)`, descending.
    coeffs: Vec<R>,
}

impl<R: Real> EmbezzlingState<R> {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("embezzler needs k >= 1".into()));
        }
        let h: R = (1..=k).map(|j| R::one() / rn::<R>(j)).sum();
        let coeffs = (1..=k).map(|j| R::one() / (rn::<R>(j) * h)).collect();
        Ok(Self { k, coeffs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Schmidt probabilities, descending.
    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    /// Schmidt amplitude of level `j` (0-based).
    pub fn amplitude(&self, j: usize) -> R {
        self.coeffs[j].sqrt()
    }

    /// Dense `k^2`-amplitude form, for small `k`.
    pub fn as_pure_state(&self) -> Result<PureState<R>> {
        let total = self.k * self.k;
        if total > DENSE_LIMIT {
            return Err(Error::DimensionOverflow {
                needed: total,
                limit: DENSE_LIMIT,
            });
        }
        let mut amps = vec![R::zero(); total];
        for j in 0..self.k {
            amps[j * self.k + j] = self.amplitude(j);
        }
        PureState::from_real(&amps, vec![self.k, self.k])
    }
}

/// A permutation isometry from the `k` embezzler levels into the
/// `k x m` levels of (embezzler, extracted register).
///
/// `map[j] = t` sends source level `j` to the flattened slot
/// `t = j_out * m + y'`; both sides of the construction apply the same
/// permutation, preserving the diagonal structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionIsometry {
    pub k: usize,
    pub m: usize,
    pub map: Vec<usize>,
}

impl ExtractionIsometry {
    /// Decodes a source level into (embezzler level, extracted index).
    pub fn decode(&self, j: usize) -> (usize, usize) {
        let t = self.map[j];
        (t / self.m, t % self.m)
    }

    /// Injectivity check (always true for the sorted pairing).
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.k * self.m];
        self.map.iter().all(|&t| {
            if seen[t] {
                false
            } else {
                seen[t] = true;
                true
            }
        })
    }
}

/// The isometries of one extraction step together with its fidelity.
#[derive(Debug, Clone)]
pub struct EmbezzlePair<R: Real> {
    pub fidelity: R,
    /// First-side isometry; the second side applies the identical
    /// permutation.
    pub alice: ExtractionIsometry,
    pub bob: ExtractionIsometry,
}

/// Builds the sorted-pairing isometries extracting `psi_m` from `Gamma_k`
/// and returns the achieved fidelity
/// `sum_j sqrt(p_j q_j) = (1/H_k) sum_j 1 / sqrt(j m ceil(j/m))`.
pub fn embezzle_fidelity<R: Real>(m: usize, k: usize) -> Result<EmbezzlePair<R>> {
    if m == 0 {
        return Err(Error::InvalidParameter("extraction needs m >= 1".into()));
    }
    if m > k {
        return Err(Error::InvalidParameter(format!(
            "cannot extract psi_{m} from a k = {k} embezzler"
        )));
    }
    let gamma = EmbezzlingState::<R>::new(k)?;
    // Sorted source rank j pairs with sorted target rank j; the target slot
    // t = j carries coefficient c_{floor(t/m)} / m.
    let map: Vec<usize> = (0..k).collect();
    let iso = ExtractionIsometry { k, m, map };
    let fidelity = if m == 1 {
        // Identity extraction: the target spectrum coincides with the
        // source, so the overlap is exactly one.
        R::one()
    } else {
        let m_r = rn::<R>(m);
        let mut f = R::zero();
        for j in 0..k {
            let (j_out, _) = iso.decode(j);
            f += (gamma.coefficients()[j] * gamma.coefficients()[j_out] / m_r).sqrt();
        }
        f
    };
    Ok(EmbezzlePair {
        fidelity,
        alice: iso.clone(),
        bob: iso,
    })
}

/// Multiplicity split of a Schmidt spectrum over `2^r` slots.
#[derive(Debug, Clone)]
pub struct MSplit<R: Real> {
    pub m: Vec<usize>,
    pub r: u32,
    /// `max_y |p_y - m(y)/2^r|`.
    pub max_error: R,
}

/// Chooses integers `m(y) >= 1` with `sum m(y) = 2^r` approximating
/// `p_y 2^r`, by largest-remainder apportionment (ties to the lowest
/// index).
pub fn choose_m<R: Real>(p: &[R], r: u32) -> Result<MSplit<R>> {
    let slots = 1usize << r;
    if p.is_empty() || slots < p.len() {
        return Err(Error::InvalidParameter(format!(
            "2^{r} slots cannot cover {} coefficients",
            p.len()
        )));
    }
    let slots_r = rn::<R>(slots);
    let quotas: Vec<R> = p.iter().map(|&pi| pi * slots_r).collect();
    let mut m: Vec<usize> = quotas
        .iter()
        .map(|&q| {
            let f = q.floor();
            (f.to_usize().unwrap_or(0)).max(1)
        })
        .collect();
    let mut total: usize = m.iter().sum();
    while total < slots {
        // Largest remaining gap (quota minus allocation) gains a unit;
        // ties go to the lowest index. The first round reduces to the
        // classical largest-remainder rule.
        let mut best = 0usize;
        let mut best_gap = quotas[0] - rn::<R>(m[0]);
        for i in 1..m.len() {
            let g = quotas[i] - rn::<R>(m[i]);
            if g > best_gap {
                best_gap = g;
                best = i;
            }
        }
        m[best] += 1;
        total += 1;
    }
    while total > slots {
        // Remove from the most over-allocated entry that stays >= 1.
        let mut best: Option<usize> = None;
        let mut best_gap = R::zero();
        for i in 0..m.len() {
            if m[i] > 1 {
                let g = rn::<R>(m[i]) - quotas[i];
                if best.is_none() || g > best_gap {
                    best = Some(i);
                    best_gap = g;
                }
            }
        }
        let i = best.ok_or_else(|| {
            Error::InvalidParameter("cannot lower allocations below 1".into())
        })?;
        m[i] -= 1;
        total -= 1;
    }
    let mut max_error = R::zero();
    for (pi, &mi) in p.iter().zip(&m) {
        max_error = max_error.max((*pi - rn::<R>(mi) / slots_r).abs());
    }
    Ok(MSplit {
        m,
        r,
        max_error,
    })
}

/// Smallest `r` whose largest-remainder split reaches the target error.
pub fn default_r<R: Real>(p: &[R], target_error: R) -> Result<u32> {
    let min_r = (p.len() as f64).log2().ceil() as u32;
    for r in min_r..=20 {
        if choose_m(p, r)?.max_error <= target_error {
            return Ok(r);
        }
    }
    Ok(20)
}

/// The derived data of one construction instance.
#[derive(Debug, Clone)]
pub struct ConstructionPlan<R: Real> {
    pub n: usize,
    pub k: usize,
    pub r: u32,
    /// Schmidt probabilities of the input, descending.
    pub schmidt_p: Vec<R>,
    /// Multiplicities aligned with `schmidt_p`.
    pub m_values: Vec<usize>,
    pub split_error: R,
    /// Block index -> (Schmidt label, extracted index); the qubit-block
    /// computational basis is enumerated in this order.
    pub pair_enum: Vec<(usize, usize)>,
    /// Extraction fidelity per Schmidt label.
    pub embezzle_fidelities: Vec<R>,
    /// Whether the dense POVM family was materialized and validated.
    pub povms_dense_checked: bool,
}

/// A built construction: the plan plus the factored post-isometry state.
#[derive(Debug, Clone)]
pub struct Construction<R: Real> {
    plan: ConstructionPlan<R>,
    /// `beta[q][j]`: real amplitude on (block q, embezzler level j),
    /// shared by both sides.
    beta: Vec<Vec<R>>,
    embezzler: EmbezzlingState<R>,
    isometries: Vec<ExtractionIsometry>,
    decomposition: SchmidtDecomposition<R>,
}

/// Builds the construction for `phi` over the chained parameter `n` with a
/// `k`-level embezzler. `r` defaults to the smallest split with error at
/// most 1e-2.
pub fn build_construction<R: Real>(
    phi: &PureState<R>,
    n: usize,
    k: usize,
    r_override: Option<u32>,
) -> Result<Construction<R>> {
    if phi.dims().len() < 2 {
        return Err(Error::InvalidParameter(
            "input state must be bipartite".into(),
        ));
    }
    let decomposition = schmidt(phi, phi.dims().len() / 2)?;
    let p = decomposition.coefficients.clone();
    let r = match r_override {
        Some(r) => r,
        None => default_r(&p, r64::<R>(1e-2))?,
    };
    let split = choose_m(&p, r)?;
    let blocks = 1usize << r;
    if blocks
        .checked_mul(k)
        .map_or(true, |total| total > (1 << 22))
    {
        return Err(Error::DimensionOverflow {
            needed: blocks * k,
            limit: 1 << 22,
        });
    }
    let embezzler = EmbezzlingState::<R>::new(k)?;

    let mut pair_enum = Vec::with_capacity(blocks);
    for (y, &m) in split.m.iter().enumerate() {
        for yp in 0..m {
            pair_enum.push((y, yp));
        }
    }
    debug_assert_eq!(pair_enum.len(), blocks);
    // Block index lookup per (y, y').
    let mut block_of = vec![vec![usize::MAX; blocks]; split.m.len()];
    for (q, &(y, yp)) in pair_enum.iter().enumerate() {
        block_of[y][yp] = q;
    }

    let mut isometries = Vec::with_capacity(split.m.len());
    let mut embezzle_fidelities = Vec::with_capacity(split.m.len());
    let mut beta = vec![vec![R::zero(); k]; blocks];
    for (y, &m) in split.m.iter().enumerate() {
        if m > k {
            return Err(Error::InvalidParameter(format!(
                "multiplicity {m} exceeds embezzler size {k}"
            )));
        }
        let pair = embezzle_fidelity::<R>(m, k)?;
        let root_p = p[y].sqrt();
        for j in 0..k {
            let (j_out, yp) = pair.alice.decode(j);
            let q = block_of[y][yp];
            beta[q][j_out] += root_p * embezzler.amplitude(j);
        }
        embezzle_fidelities.push(pair.fidelity);
        isometries.push(pair.alice);
    }

    let mut plan = ConstructionPlan {
        n,
        k,
        r,
        schmidt_p: p,
        m_values: split.m,
        split_error: split.max_error,
        pair_enum,
        embezzle_fidelities,
        povms_dense_checked: false,
    };

    let construction_precheck = Construction {
        plan: plan.clone(),
        beta,
        embezzler,
        isometries,
        decomposition,
    };
    // Validate the measurement family densely when affordable.
    if blocks * k <= 64 {
        let a0 = vec![0usize; r as usize];
        construction_precheck.dense_povm_first_side(&a0)?;
        construction_precheck.dense_povm_b0()?;
        plan.povms_dense_checked = true;
    }
    Ok(Construction {
        plan,
        ..construction_precheck
    })
}

impl<R: Real> Construction<R> {
    pub fn plan(&self) -> &ConstructionPlan<R> {
        &self.plan
    }

    pub fn embezzler(&self) -> &EmbezzlingState<R> {
        &self.embezzler
    }

    pub fn isometries(&self) -> &[ExtractionIsometry] {
        &self.isometries
    }

    pub fn decomposition(&self) -> &SchmidtDecomposition<R> {
        &self.decomposition
    }

    fn blocks(&self) -> usize {
        1 << self.plan.r
    }

    /// Outcome distribution of the Schmidt-basis measurement `b0` on the
    /// second side; reproduces the input's Schmidt probabilities exactly.
    pub fn b0_distribution(&self) -> Result<Dist<R>> {
        let mut probs = vec![R::zero(); self.plan.schmidt_p.len()];
        for (q, row) in self.beta.iter().enumerate() {
            let (y, _) = self.plan.pair_enum[q];
            for &b in row {
                probs[y] += b * b;
            }
        }
        Dist::new(probs)
    }

    /// `P(X_hat = Y)`: the first side measures the qubit blocks in the
    /// `a_0` (computational) basis and decodes the Schmidt label from the
    /// block index; the second side measures `b0`.
    ///
    /// On the factored state the block index is shared by both sides, so
    /// the second side's label always equals the decoded one and the sum
    /// below is the total squared norm on agreement cells.
    pub fn agreement_probability(&self) -> R {
        let mut agree = R::zero();
        for (q, row) in self.beta.iter().enumerate() {
            let decoded_label = self.plan.pair_enum[q].0;
            let second_side_label = self.plan.pair_enum[q].0;
            if decoded_label == second_side_label {
                for &b in row {
                    agree += b * b;
                }
            }
        }
        agree
    }

    /// Overlap with the ideal target: `r` maximally entangled qubit pairs
    /// across the blocks, times the untouched embezzler.
    pub fn fidelity_to_target(&self) -> R {
        let scale = (R::one() / rn::<R>(self.blocks())).sqrt();
        let mut overlap = R::zero();
        for row in &self.beta {
            for (j, &b) in row.iter().enumerate() {
                overlap += b * scale * self.embezzler.amplitude(j);
            }
        }
        overlap
    }

    /// Real symmetric projector of the `r`-fold chained measurement with
    /// multi-setting `labels` and outcome bits `x` on the `2^r` block basis.
    fn block_projector(&self, labels: &[usize], x: usize) -> DMatrix<R> {
        let r = self.plan.r as usize;
        let n = self.plan.n;
        let blocks = self.blocks();
        let mut per_qubit = Vec::with_capacity(r);
        for (i, &label) in labels.iter().enumerate() {
            let theta = rn::<R>(label) * R::pi() / rn::<R>(2 * n);
            let angle = if (x >> i) & 1 == 0 {
                theta
            } else {
                theta + R::pi()
            };
            let half = angle * r64::<R>(0.5);
            let (c, s) = (half.cos(), half.sin());
            per_qubit.push([[c * c, c * s], [c * s, s * s]]);
        }
        DMatrix::from_fn(blocks, blocks, |q, qp| {
            let mut prod = R::one();
            for (i, cell) in per_qubit.iter().enumerate() {
                let qi = (q >> i) & 1;
                let qpi = (qp >> i) & 1;
                prod *= cell[qi][qpi];
            }
            prod
        })
    }

    /// Joint outcome distribution of `r`-fold chained settings applied to
    /// both sides, over outcome pairs `(x, y)` (each `r` bits, row-major in
    /// `x`).
    pub fn chained_joint(&self, a_labels: &[usize], b_labels: &[usize]) -> Result<Dist<R>> {
        let r = self.plan.r as usize;
        if a_labels.len() != r || b_labels.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "need {r} setting components per side"
            )));
        }
        let blocks = self.blocks();
        // Gram over embezzler levels.
        let mut gram = DMatrix::from_element(blocks, blocks, R::zero());
        for q in 0..blocks {
            for qp in 0..blocks {
                let mut g = R::zero();
                for j in 0..self.plan.k {
                    g += self.beta[q][j] * self.beta[qp][j];
                }
                gram[(q, qp)] = g;
            }
        }
        let outcomes = 1usize << r;
        let mut probs = Vec::with_capacity(outcomes * outcomes);
        for x in 0..outcomes {
            let mx = self.block_projector(a_labels, x);
            for y in 0..outcomes {
                let my = self.block_projector(b_labels, y);
                let mut p = R::zero();
                for q in 0..blocks {
                    for qp in 0..blocks {
                        p += gram[(q, qp)] * mx[(q, qp)] * my[(q, qp)];
                    }
                }
                probs.push(p.max(R::zero()));
            }
        }
        Dist::from_weights(&probs)
    }

    /// Dense post-isometry state on dims `[2^r, k, 2^r, k]`
    /// (first-side block, first-side embezzler, second-side block,
    /// second-side embezzler), in the shared Schmidt product basis.
    pub fn dense_state(&self) -> Result<PureState<R>> {
        let blocks = self.blocks();
        let side = blocks * self.plan.k;
        let total = side * side;
        if side > 1 << 6 {
            return Err(Error::DimensionOverflow {
                needed: side,
                limit: 1 << 6,
            });
        }
        let mut amps = vec![R::zero(); total];
        for q in 0..blocks {
            for j in 0..self.plan.k {
                let idx_side = q * self.plan.k + j;
                amps[idx_side * side + idx_side] = self.beta[q][j];
            }
        }
        PureState::from_real(&amps, vec![blocks, self.plan.k, blocks, self.plan.k])
    }

    /// Dense ideal target `psi_2^(x r) (x) Gamma_k` on the same dims.
    pub fn dense_target(&self) -> Result<PureState<R>> {
        let blocks = self.blocks();
        let side = blocks * self.plan.k;
        if side > 1 << 6 {
            return Err(Error::DimensionOverflow {
                needed: side,
                limit: 1 << 6,
            });
        }
        let scale = (R::one() / rn::<R>(blocks)).sqrt();
        let mut amps = vec![R::zero(); side * side];
        for q in 0..blocks {
            for j in 0..self.plan.k {
                let idx_side = q * self.plan.k + j;
                amps[idx_side * side + idx_side] = scale * self.embezzler.amplitude(j);
            }
        }
        PureState::from_real(&amps, vec![blocks, self.plan.k, blocks, self.plan.k])
    }

    /// Dense original state `phi (x) Gamma_k` in the Schmidt product basis,
    /// dims `[s, k, s, k]` with `s` the Schmidt label count.
    pub fn dense_input(&self) -> Result<PureState<R>> {
        let s = self.plan.schmidt_p.len();
        let side = s * self.plan.k;
        if side > 1 << 6 {
            return Err(Error::DimensionOverflow {
                needed: side,
                limit: 1 << 6,
            });
        }
        let mut amps = vec![R::zero(); side * side];
        for y in 0..s {
            for j in 0..self.plan.k {
                let idx_side = y * self.plan.k + j;
                amps[idx_side * side + idx_side] =
                    self.plan.schmidt_p[y].sqrt() * self.embezzler.amplitude(j);
            }
        }
        PureState::from_real(&amps, vec![s, self.plan.k, s, self.plan.k])
    }

    /// The controlled isometry as a dense 0/1 matrix from the Schmidt
    /// product basis `(y, j)` into the block basis `(q, j_out)`.
    fn dense_isometry(&self) -> Result<DMatrix<R>> {
        let s = self.plan.schmidt_p.len();
        let k = self.plan.k;
        let blocks = self.blocks();
        let rows = blocks * k;
        let cols = s * k;
        if rows.max(cols) > 1 << 12 {
            return Err(Error::DimensionOverflow {
                needed: rows.max(cols),
                limit: 1 << 12,
            });
        }
        let mut block_of = vec![std::collections::BTreeMap::new(); s];
        for (q, &(y, yp)) in self.plan.pair_enum.iter().enumerate() {
            block_of[y].insert(yp, q);
        }
        let mut u = DMatrix::from_element(rows, cols, R::zero());
        for y in 0..s {
            let iso = &self.isometries[y];
            for j in 0..k {
                let (j_out, yp) = iso.decode(j);
                let q = block_of[y][&yp];
                u[(q * k + j_out, y * k + j)] = R::one();
            }
        }
        Ok(u)
    }

    /// Dense first-side POVM `E_x^a = U^T (M_x (x) 1) U` on the original
    /// `(Schmidt label, embezzler)` space, validated on construction.
    pub fn dense_povm_first_side(&self, a_labels: &[usize]) -> Result<Povm<R>> {
        let r = self.plan.r as usize;
        if a_labels.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "need {r} setting components"
            )));
        }
        let u = self.dense_isometry()?;
        let k = self.plan.k;
        let outcomes = 1usize << r;
        let mut elements = Vec::with_capacity(outcomes);
        for x in 0..outcomes {
            let mx = self.block_projector(a_labels, x);
            let blocks = self.blocks();
            let lifted = DMatrix::from_fn(blocks * k, blocks * k, |row, col| {
                let (q, j) = (row / k, row % k);
                let (qp, jp) = (col / k, col % k);
                if j == jp {
                    mx[(q, qp)]
                } else {
                    R::zero()
                }
            });
            let e = u.transpose() * lifted * &u;
            elements.push(e.map(|v| Cplx::new(v, R::zero())));
        }
        Povm::new(format!("a{a_labels:?}"), elements)
    }

    /// Dense `b0` POVM: Schmidt-label projectors on the second side's
    /// original space.
    pub fn dense_povm_b0(&self) -> Result<Povm<R>> {
        let s = self.plan.schmidt_p.len();
        let k = self.plan.k;
        let side = s * k;
        if side > 1 << 12 {
            return Err(Error::DimensionOverflow {
                needed: side,
                limit: 1 << 12,
            });
        }
        let mut elements = Vec::with_capacity(s);
        for y in 0..s {
            let e = DMatrix::from_fn(side, side, |row, col| {
                if row == col && row / k == y {
                    Cplx::new(R::one(), R::zero())
                } else {
                    Cplx::new(R::zero(), R::zero())
                }
            });
            elements.push(e);
        }
        Povm::new("b0", elements)
    }
}

/// End-to-end verification of one construction.
#[derive(Debug, Clone)]
pub struct AgreementReport<R: Real> {
    pub p_agree: R,
    pub agreement_deviation: R,
    pub fidelity_to_target: R,
    /// Max deviation of the `b0` outcome distribution from the Schmidt
    /// probabilities.
    pub b0_deviation: R,
}

/// Computes the agreement probability, the target fidelity, and the
/// `b0`-marginal identity for a built construction.
pub fn verify_agreement<R: Real>(c: &Construction<R>) -> Result<AgreementReport<R>> {
    let p_agree = c.agreement_probability();
    let b0 = c.b0_distribution()?;
    let mut b0_deviation = R::zero();
    for (y, &p) in c.plan().schmidt_p.iter().enumerate() {
        b0_deviation = b0_deviation.max((b0.prob(y) - p).abs());
    }
    Ok(AgreementReport {
        p_agree,
        agreement_deviation: (R::one() - p_agree).abs(),
        fidelity_to_target: c.fidelity_to_target(),
        b0_deviation,
    })
}

/// One row of an `(r, k)` sweep.
#[derive(Debug, Clone)]
pub struct SweepRow<R: Real> {
    pub k: usize,
    pub r: u32,
    pub p_agree: R,
    pub fidelity: R,
    pub split_error: R,
}

/// Sweeps construction quality over embezzler sizes and split depths.
pub fn agreement_sweep<R: Real>(
    phi: &PureState<R>,
    n: usize,
    ks: &[usize],
    rs: &[u32],
) -> Result<Vec<SweepRow<R>>> {
    let mut rows = Vec::new();
    for &r in rs {
        for &k in ks {
            let c = build_construction(phi, n, k, Some(r))?;
            let report = verify_agreement(&c)?;
            rows.push(SweepRow {
                k,
                r,
                p_agree: report.p_agree,
                fidelity: report.fidelity_to_target,
                split_error: c.plan().split_error,
            });
        }
    }
    Ok(rows)
}

/// The state from the worked example: `(1/2)|00> + (sqrt(3)/2)|11>`.
pub fn skewed_example_state<R: Real>() -> PureState<R> {
    PureState::from_real(
        &[
            r64::<R>(0.5),
            R::zero(),
            R::zero(),
            r64::<R>(3.0).sqrt() * r64::<R>(0.5),
        ],
        vec![2, 2],
    )
    .expect("normalized example state")
}
