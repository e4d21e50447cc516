//! Hidden-variable analysis over chained scenarios: deterministic strategy
//! enumeration, local-polytope membership, local-causality factorization,
//! the perfect-correlation determinism argument, and the predictive-power
//! bound `<D(P_{X|abz}, uniform)>_z <= I_N / 2`.

use std::collections::BTreeMap;

use crate::chained::{correlation_in, quantum_chain_table, ChainedScenario};
use crate::dist::{distance_from_uniform, Dist};
use crate::error::{Error, Result};
use crate::nosig::{check_no_signalling, NoSignallingReport};
use crate::real::{r64, Real};
use crate::simplex::{FarkasCertificate, FeasibilityVerdict, LinearFeasibility};
use crate::table::{CondTable, VarSpec};

/// A locally deterministic response: one outcome per setting on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub x_of_a: Vec<u8>,
    pub y_of_b: Vec<u8>,
}

const MAX_ENUMERATION_N: usize = 8;

/// All `4^N` deterministic strategies, in lexicographic order (the Y side
/// varies fastest).
pub fn enumerate_strategies(n: usize) -> Result<Vec<DeterministicStrategy>> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::EnumerationTooLarge(n, MAX_ENUMERATION_N));
    }
    let count = 1usize << (2 * n);
    let mut out = Vec::with_capacity(count);
    for xm in 0..(1usize << n) {
        for ym in 0..(1usize << n) {
            out.push(DeterministicStrategy {
                x_of_a: (0..n).map(|i| ((xm >> i) & 1) as u8).collect(),
                y_of_b: (0..n).map(|j| ((ym >> j) & 1) as u8).collect(),
            });
        }
    }
    Ok(out)
}

impl DeterministicStrategy {
    /// The strategy's conditional table (point-mass cells).
    pub fn table<R: Real>(&self, n: usize) -> Result<CondTable<R>> {
        let scenario = ChainedScenario::new(n)?;
        if self.x_of_a.len() != n || self.y_of_b.len() != n {
            return Err(Error::ShapeMismatch("strategy arity".into()));
        }
        let (cond, tgt) = scenario.table_vars();
        CondTable::from_fn(cond, tgt, |key| {
            let x = self.x_of_a[key[0]] as usize;
            let y = self.y_of_b[key[1]] as usize;
            Dist::point_mass(4, x * 2 + y)
        })
    }

    /// `I_N` of the strategy, evaluated combinatorially.
    pub fn in_value<R: Real>(&self, n: usize) -> R {
        let mut defects = 0usize;
        if self.x_of_a[0] == self.y_of_b[n - 1] {
            defects += 1; // wrap term wants disagreement
        }
        for i in 0..n {
            if self.x_of_a[i] != self.y_of_b[i] {
                defects += 1;
            }
            if i > 0 && self.x_of_a[i] != self.y_of_b[i - 1] {
                defects += 1;
            }
        }
        crate::real::rn::<R>(defects)
    }
}

/// Brute-force minimum of `I_N` over all deterministic strategies.
pub fn min_in_deterministic<R: Real>(n: usize) -> Result<(R, DeterministicStrategy)> {
    let strategies = enumerate_strategies(n)?;
    let mut best: Option<(R, DeterministicStrategy)> = None;
    for s in strategies {
        let v = s.in_value::<R>(n);
        if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
            best = Some((v, s));
        }
    }
    Ok(best.expect("at least one strategy"))
}

/// A convex mixture over the enumerated strategy list.
#[derive(Debug, Clone)]
pub struct LocalModel<R: Real> {
    weights: Dist<R>,
}

impl<R: Real> LocalModel<R> {
    pub fn new(weights: Dist<R>, n: usize) -> Result<Self> {
        let expected = 1usize << (2 * n);
        if weights.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} strategies",
                weights.len(),
                expected
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &Dist<R> {
        &self.weights
    }

    /// The mixture's conditional table.
    pub fn induced_table(&self, n: usize) -> Result<CondTable<R>> {
        let strategies = enumerate_strategies(n)?;
        let scenario = ChainedScenario::new(n)?;
        let (cond, tgt) = scenario.table_vars();
        CondTable::from_fn(cond, tgt, |key| {
            let mut probs = vec![R::zero(); 4];
            for (s, w) in strategies.iter().zip(self.weights.iter()) {
                let x = s.x_of_a[key[0]] as usize;
                let y = s.y_of_b[key[1]] as usize;
                probs[x * 2 + y] += w;
            }
            Dist::new(probs).expect("mixture cell")
        })
    }
}

/// Verdict of the local-polytope membership test.
#[derive(Debug, Clone)]
pub enum LhvVerdict<R: Real> {
    Feasible {
        model: LocalModel<R>,
        /// Max cell deviation of the induced table from the input.
        residual: R,
    },
    Infeasible {
        infeasibility: R,
        certificate: FarkasCertificate<R>,
        /// `I_N` of the input table.
        in_value: R,
        /// Whether the chained functional already separates
        /// (`I_N < 1`, below the deterministic floor).
        in_separates: bool,
    },
}

/// Linear feasibility over strategy weights reproducing every cell of
/// `table` within `tol`.
pub fn lhv_membership<R: Real>(
    table: &CondTable<R>,
    n: usize,
    tol: R,
) -> Result<LhvVerdict<R>> {
    if n > 6 {
        return Err(Error::EnumerationTooLarge(n, 6));
    }
    let scenario = ChainedScenario::new(n)?;
    scenario.check_table(table)?;
    let strategies = enumerate_strategies(n)?;
    let n_s = strategies.len();
    let mut lp = LinearFeasibility::<R>::new(n_s);
    lp.equality(vec![R::one(); n_s], R::one());
    for i in 0..n {
        for j in 0..n {
            let cell = table.cell(&[i, j])?;
            for x in 0..2 {
                for y in 0..2 {
                    let coeffs: Vec<R> = strategies
                        .iter()
                        .map(|s| {
                            if s.x_of_a[i] as usize == x && s.y_of_b[j] as usize == y {
                                R::one()
                            } else {
                                R::zero()
                            }
                        })
                        .collect();
                    lp.equality(coeffs, cell.prob(x * 2 + y));
                }
            }
        }
    }
    match lp.solve(tol)? {
        FeasibilityVerdict::Feasible { x, .. } => {
            let model = LocalModel::new(Dist::from_weights(&x)?, n)?;
            let residual = model.induced_table(n)?.max_abs_diff(table)?;
            Ok(LhvVerdict::Feasible { model, residual })
        }
        FeasibilityVerdict::Infeasible {
            infeasibility,
            certificate,
        } => {
            let in_value = correlation_in(table, n)?;
            Ok(LhvVerdict::Infeasible {
                infeasibility,
                certificate,
                in_value,
                in_separates: in_value < R::one() - tol,
            })
        }
    }
}

/// An alternative theory's predictions over a chained scenario: a parameter
/// distribution `P_Z` together with cells `P_{XY | a b z}`.
///
/// The parameter distribution is setting-independent by construction, so
/// `P_{Z|AB} = P_Z` holds structurally.
#[derive(Debug, Clone)]
pub struct Extension<R: Real> {
    pz: Dist<R>,
    table: CondTable<R>,
}

impl<R: Real> Extension<R> {
    /// `table` must condition on `[A, B, Z]` (Z last) with binary targets
    /// `[X, Y]` and carry a cell for every tuple.
    pub fn new(pz: Dist<R>, table: CondTable<R>) -> Result<Self> {
        if table.conditioned().len() != 3 || table.targets().len() != 2 {
            return Err(Error::ShapeMismatch(
                "extension table must be P_{XY | A B Z}".into(),
            ));
        }
        if table.conditioned()[2].range != pz.len() {
            return Err(Error::RangeMismatch(
                table.conditioned()[2].range,
                pz.len(),
            ));
        }
        if !table.has_full_support() {
            return Err(Error::ShapeMismatch("extension missing cells".into()));
        }
        Ok(Self { pz, table })
    }

    pub fn pz(&self) -> &Dist<R> {
        &self.pz
    }

    pub fn table(&self) -> &CondTable<R> {
        &self.table
    }

    pub fn z_count(&self) -> usize {
        self.pz.len()
    }

    pub fn n_a(&self) -> usize {
        self.table.conditioned()[0].range
    }

    pub fn n_b(&self) -> usize {
        self.table.conditioned()[1].range
    }

    pub fn cell(&self, a: usize, b: usize, z: usize) -> Result<&Dist<R>> {
        self.table.cell(&[a, b, z])
    }

    fn target_size(&self) -> usize {
        self.table.targets().iter().map(|v| v.range).product()
    }

    /// `P_{XY|ab} = sum_z P_Z(z) P_{XY|abz}`.
    pub fn recombined(&self) -> Result<CondTable<R>> {
        let mut cells = BTreeMap::new();
        let size = self.target_size();
        for a in 0..self.n_a() {
            for b in 0..self.n_b() {
                let mut probs = vec![R::zero(); size];
                for (z, w) in self.pz.iter().enumerate() {
                    for (acc, p) in probs.iter_mut().zip(self.cell(a, b, z)?.iter()) {
                        *acc += w * p;
                    }
                }
                cells.insert(vec![a, b], Dist::new(probs)?);
            }
        }
        CondTable::new(
            self.table.conditioned()[..2].to_vec(),
            self.table.targets().to_vec(),
            cells,
        )
    }

    /// The slice `P_{XY|AB, Z=z}` as a conditional table.
    pub fn slice_at(&self, z: usize) -> Result<CondTable<R>> {
        let mut cells = BTreeMap::new();
        for a in 0..self.n_a() {
            for b in 0..self.n_b() {
                cells.insert(vec![a, b], self.cell(a, b, z)?.clone());
            }
        }
        CondTable::new(
            self.table.conditioned()[..2].to_vec(),
            self.table.targets().to_vec(),
            cells,
        )
    }

    /// Repackages the extension as `P_{X Y Z | A B}` for no-signalling
    /// checks.
    pub fn as_xyz_table(&self) -> Result<CondTable<R>> {
        let nz = self.z_count();
        let size = self.target_size();
        let mut cells = BTreeMap::new();
        for a in 0..self.n_a() {
            for b in 0..self.n_b() {
                let mut probs = vec![R::zero(); size * nz];
                for (z, w) in self.pz.iter().enumerate() {
                    let cell = self.cell(a, b, z)?;
                    for (xy, p) in cell.iter().enumerate() {
                        probs[xy * nz + z] = w * p;
                    }
                }
                cells.insert(vec![a, b], Dist::new(probs)?);
            }
        }
        let mut targets = self.table.targets().to_vec();
        targets.push(self.table.conditioned()[2].clone());
        CondTable::new(self.table.conditioned()[..2].to_vec(), targets, cells)
    }

    /// `P_{X|abz}` (first-target marginal of a cell).
    pub fn x_given(&self, a: usize, b: usize, z: usize) -> Result<Dist<R>> {
        let cell = self.cell(a, b, z)?;
        let n_y = self.table.targets()[1].range;
        let n_x = self.table.targets()[0].range;
        let mut probs = vec![R::zero(); n_x];
        for x in 0..n_x {
            for y in 0..n_y {
                probs[x] += cell.prob(x * n_y + y);
            }
        }
        Dist::new(probs)
    }

    /// `P_{Y|abz}` (second-target marginal of a cell).
    pub fn y_given(&self, a: usize, b: usize, z: usize) -> Result<Dist<R>> {
        let cell = self.cell(a, b, z)?;
        let n_y = self.table.targets()[1].range;
        let n_x = self.table.targets()[0].range;
        let mut probs = vec![R::zero(); n_y];
        for x in 0..n_x {
            for y in 0..n_y {
                probs[y] += cell.prob(x * n_y + y);
            }
        }
        Dist::new(probs)
    }

    /// No-signalling report for the extension.
    pub fn no_signalling(&self, tol: R) -> Result<NoSignallingReport<R>> {
        check_no_signalling(&self.as_xyz_table()?, tol)
    }
}

/// Max violations of the four local-causality factorization conditions.
#[derive(Debug, Clone)]
pub struct LocalCausalityReport<R: Real> {
    /// `P_{X|ABZ} = P_{X|AZ}` (parameter independence, X side).
    pub param_independence_x: R,
    /// `P_{Y|ABZ} = P_{Y|BZ}` (parameter independence, Y side).
    pub param_independence_y: R,
    /// `P_{X|ABYZ} = P_{X|ABZ}` (outcome independence, X side).
    pub outcome_independence_x: R,
    /// `P_{Y|ABXZ} = P_{Y|ABZ}` (outcome independence, Y side).
    pub outcome_independence_y: R,
    pub tolerance: R,
    pub parameter_independence: bool,
    pub outcome_independence: bool,
}

impl<R: Real> LocalCausalityReport<R> {
    pub fn locally_causal(&self) -> bool {
        self.parameter_independence && self.outcome_independence
    }
}

/// Tests the factorization `P_{XY|ABZ} = P_{X|AZ} P_{Y|BZ}` through its four
/// derived conditions, reporting the worst violation of each.
pub fn check_local_causality<R: Real>(
    ext: &Extension<R>,
    tol: R,
) -> Result<LocalCausalityReport<R>> {
    let (n_a, n_b, n_z) = (ext.n_a(), ext.n_b(), ext.z_count());
    let mut param_x = R::zero();
    let mut param_y = R::zero();
    for z in 0..n_z {
        for a in 0..n_a {
            let reference = ext.x_given(a, 0, z)?;
            for b in 1..n_b {
                param_x = param_x.max(ext.x_given(a, b, z)?.max_abs_diff(&reference)?);
            }
        }
        for b in 0..n_b {
            let reference = ext.y_given(0, b, z)?;
            for a in 1..n_a {
                param_y = param_y.max(ext.y_given(a, b, z)?.max_abs_diff(&reference)?);
            }
        }
    }
    let mut outcome_x = R::zero();
    let mut outcome_y = R::zero();
    let mass_floor = crate::real::normalization_tol::<R>();
    for z in 0..n_z {
        for a in 0..n_a {
            for b in 0..n_b {
                let cell = ext.cell(a, b, z)?;
                let px = ext.x_given(a, b, z)?;
                let py = ext.y_given(a, b, z)?;
                for y in 0..2 {
                    if py.prob(y) > mass_floor {
                        for x in 0..2 {
                            let conditional = cell.prob(x * 2 + y) / py.prob(y);
                            outcome_x = outcome_x.max((conditional - px.prob(x)).abs());
                        }
                    }
                }
                for x in 0..2 {
                    if px.prob(x) > mass_floor {
                        for y in 0..2 {
                            let conditional = cell.prob(x * 2 + y) / px.prob(x);
                            outcome_y = outcome_y.max((conditional - py.prob(y)).abs());
                        }
                    }
                }
            }
        }
    }
    Ok(LocalCausalityReport {
        param_independence_x: param_x,
        param_independence_y: param_y,
        outcome_independence_x: outcome_x,
        outcome_independence_y: outcome_y,
        tolerance: tol,
        parameter_independence: param_x <= tol && param_y <= tol,
        outcome_independence: outcome_x <= tol && outcome_y <= tol,
    })
}

/// Result of the perfect-correlation determinism argument.
#[derive(Debug, Clone)]
pub struct DeterminismReport<R: Real> {
    /// Smallest recombined `P(X = Y | a, b_a)` over the pairing.
    pub pairing_correlation: R,
    /// Set when local causality fails; the determinism conclusion is then
    /// not drawn.
    pub premise_violation: Option<String>,
    /// Max distance of any `P_{X|az}` entry from `{0, 1}`.
    pub max_determinism_defect: R,
    /// `(a, z)` achieving the defect, when stochastic.
    pub counterexample: Option<(usize, usize)>,
    pub deterministic: bool,
}

/// Perfect correlation at paired settings plus local causality forces
/// deterministic single-side predictions `P_{X|az} in {0, 1}`.
///
/// `pairing[i]` names the second-side setting index perfectly correlated
/// with first-side setting `i`. Errors when the pairing is not perfectly
/// correlated in the recombined table; reports (without a verdict) when
/// local causality fails.
pub fn epr_determinism<R: Real>(
    ext: &Extension<R>,
    pairing: &[usize],
    tol: R,
) -> Result<DeterminismReport<R>> {
    if pairing.len() != ext.n_a() {
        return Err(Error::ShapeMismatch("pairing arity".into()));
    }
    let recombined = ext.recombined()?;
    let mut pairing_correlation = R::one();
    for (a, &b) in pairing.iter().enumerate() {
        let cell = recombined.cell(&[a, b])?;
        let agree = cell.prob(0) + cell.prob(3);
        pairing_correlation = pairing_correlation.min(agree);
    }
    if pairing_correlation < R::one() - tol {
        return Err(Error::PremiseViolated(format!(
            "pairing not perfectly correlated: min P(X=Y) = {}",
            pairing_correlation.to_f64_or_nan()
        )));
    }
    let causality = check_local_causality(ext, tol)?;
    if !causality.locally_causal() {
        return Ok(DeterminismReport {
            pairing_correlation,
            premise_violation: Some(format!(
                "local causality fails: parameter independence ({}, {}), \
                 outcome independence ({}, {})",
                causality.param_independence_x.to_f64_or_nan(),
                causality.param_independence_y.to_f64_or_nan(),
                causality.outcome_independence_x.to_f64_or_nan(),
                causality.outcome_independence_y.to_f64_or_nan(),
            )),
            max_determinism_defect: R::zero(),
            counterexample: None,
            deterministic: false,
        });
    }
    let mut max_defect = R::zero();
    let mut counterexample = None;
    for a in 0..ext.n_a() {
        for (z, w) in ext.pz().iter().enumerate() {
            if w <= crate::real::normalization_tol::<R>() {
                continue;
            }
            // Parameter independence holds, so any b gives P_{X|az}.
            let px = ext.x_given(a, pairing[a], z)?;
            for x in 0..px.len() {
                let defect = px.prob(x).min(R::one() - px.prob(x));
                if defect > max_defect {
                    max_defect = defect;
                    counterexample = Some((a, z));
                }
            }
        }
    }
    let deterministic = max_defect <= tol;
    Ok(DeterminismReport {
        pairing_correlation,
        premise_violation: None,
        max_determinism_defect: max_defect,
        counterexample: if deterministic { None } else { counterexample },
        deterministic,
    })
}

trait ToF64OrNan {
    fn to_f64_or_nan(self) -> f64;
}

impl<R: Real> ToF64OrNan for R {
    fn to_f64_or_nan(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Verdict of the predictive-power bound at one setting pair.
#[derive(Debug, Clone)]
pub struct Lemma2Report<R: Real> {
    /// `<D(P_{X|abz}, uniform)>_z`.
    pub lhs: R,
    /// `I_N(P_{XY|AB}) / 2` of the extension's own recombined table.
    pub rhs: R,
    pub holds: bool,
    /// Max cell deviation of the recombined table from the quantum table at
    /// this `N` (compatibility-with-quantum premise).
    pub quantum_deviation: R,
    pub matches_quantum: bool,
    /// Average advantage over the flat quantum single-side prediction; for
    /// the maximally entangled strategy this equals `lhs`.
    pub improvement_over_quantum: R,
}

/// Evaluates the bound `<D(P_{X|abz}, uniform)>_z <= I_N / 2` at the setting
/// pair `(a, b)` (indices). Errors when the extension signals — the bound's
/// premises require the no-signalling conditions.
pub fn lemma2_bound<R: Real>(
    ext: &Extension<R>,
    n: usize,
    a: usize,
    b: usize,
    tol: R,
) -> Result<Lemma2Report<R>> {
    let ns = ext.no_signalling(tol)?;
    if !ns.passes {
        return Err(Error::PremiseViolated(format!(
            "extension signals: X side {}, Y side {}",
            ns.x_side_violation.to_f64_or_nan(),
            ns.y_side_violation.to_f64_or_nan()
        )));
    }
    let mut lhs = R::zero();
    for (z, w) in ext.pz().iter().enumerate() {
        lhs += w * distance_from_uniform(&ext.x_given(a, b, z)?);
    }
    let recombined = ext.recombined()?;
    let rhs = correlation_in(&recombined, n)? * r64::<R>(0.5);
    let quantum = quantum_chain_table::<R>(n)?;
    let quantum_deviation = recombined.max_abs_diff(&quantum)?;
    Ok(Lemma2Report {
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
        quantum_deviation,
        matches_quantum: quantum_deviation <= tol,
        improvement_over_quantum: lhs,
    })
}

/// Gap in the averaging identity
/// `sum_z P_Z(z) I_N(P_{XY|ABz}) = I_N(P_{XY|AB})`, which holds whenever
/// `P_{Z|ab} = P_Z` (structural here).
pub fn averaging_identity_gap<R: Real>(ext: &Extension<R>, n: usize) -> Result<R> {
    let mut avg = R::zero();
    for (z, w) in ext.pz().iter().enumerate() {
        avg += w * correlation_in(&ext.slice_at(z)?, n)?;
    }
    let whole = correlation_in(&ext.recombined()?, n)?;
    Ok((avg - whole).abs())
}

/// A bias-`p` two-value toy extension of the quantum table: `Z` is a fair
/// bit, the anchor setting's single-side prediction is `(p, 1-p)` when
/// `z = 0` and `(1-p, p)` when `z = 1`, and the recombination reproduces the
/// quantum table exactly when the cell-completion LP is feasible.
///
/// The bias lives at the first setting only: pinning it on every setting is
/// provably incompatible with no-signalling recombination to the quantum
/// table. At `N = 2` the feasibility boundary of this LP sits exactly at
/// `p = 1/2 + I_2/2`, so the predictive-power bound is tight here.
#[derive(Debug, Clone)]
pub struct ToyExtension<R: Real> {
    pub extension: Extension<R>,
    pub bias: R,
    /// Whether the recombination matches the quantum table (the LP was
    /// feasible). When false, the fallback product-cell completion is
    /// returned: still no-signalling, but visibly non-quantum.
    pub recombines_to_quantum: bool,
}

/// Builds the toy extension at chained parameter `n` with outcome bias
/// `p` flipped by a fair hidden bit at the first setting.
pub fn toy_extension<R: Real>(n: usize, bias: R) -> Result<ToyExtension<R>> {
    if bias < R::zero() || bias > R::one() {
        return Err(Error::InvalidParameter("bias outside [0, 1]".into()));
    }
    let scenario = ChainedScenario::new(n)?;
    let quantum = quantum_chain_table::<R>(n)?;
    let half = r64::<R>(0.5);
    let bias_at = |z: usize| if z == 0 { bias } else { R::one() - bias };

    // Variables T[(a, b, z, xy)] >= 0.
    let nv = n * n * 2 * 4;
    let idx = |a: usize, b: usize, z: usize, xy: usize| ((a * n + b) * 2 + z) * 4 + xy;
    let mut lp = LinearFeasibility::<R>::new(nv);
    for a in 0..n {
        for b in 0..n {
            let qcell = quantum.cell(&[a, b])?;
            for xy in 0..4 {
                // Recombination to the quantum cell.
                lp.equality_sparse(
                    &[(idx(a, b, 0, xy), half), (idx(a, b, 1, xy), half)],
                    qcell.prob(xy),
                );
            }
            for z in 0..2 {
                // Unit cell mass.
                lp.equality_sparse(
                    &[
                        (idx(a, b, z, 0), R::one()),
                        (idx(a, b, z, 1), R::one()),
                        (idx(a, b, z, 2), R::one()),
                        (idx(a, b, z, 3), R::one()),
                    ],
                    R::one(),
                );
                if a == 0 {
                    // X marginal pinned to the bias at the anchor setting.
                    lp.equality_sparse(
                        &[(idx(a, b, z, 0), R::one()), (idx(a, b, z, 1), R::one())],
                        bias_at(z),
                    );
                } else if b > 0 {
                    // Elsewhere the X marginal is free but must not depend
                    // on the other side's setting.
                    lp.equality_sparse(
                        &[
                            (idx(a, b, z, 0), R::one()),
                            (idx(a, b, z, 1), R::one()),
                            (idx(a, 0, z, 0), -R::one()),
                            (idx(a, 0, z, 1), -R::one()),
                        ],
                        R::zero(),
                    );
                }
                // Y marginal independent of the first-side setting.
                if a > 0 {
                    lp.equality_sparse(
                        &[
                            (idx(a, b, z, 0), R::one()),
                            (idx(a, b, z, 2), R::one()),
                            (idx(0, b, z, 0), -R::one()),
                            (idx(0, b, z, 2), -R::one()),
                        ],
                        R::zero(),
                    );
                }
            }
        }
    }
    let pz = Dist::uniform(2);
    let (cond, tgt) = scenario.table_vars();
    let mut conditioned = cond.clone();
    conditioned.push(VarSpec::new("Z", 2));

    match lp.solve(crate::real::lp_tol::<R>())? {
        FeasibilityVerdict::Feasible { x, .. } => {
            let table = CondTable::from_fn(conditioned, tgt, |key| {
                let weights: Vec<R> = (0..4)
                    .map(|xy| x[idx(key[0], key[1], key[2], xy)].max(R::zero()))
                    .collect();
                Dist::from_weights(&weights).expect("cell mass one")
            })?;
            Ok(ToyExtension {
                extension: Extension::new(pz, table)?,
                bias,
                recombines_to_quantum: true,
            })
        }
        FeasibilityVerdict::Infeasible { .. } => {
            // Product cells: biased X, uniform Y. No-signalling, but the
            // recombination flattens to uniform cells instead of quantum.
            let table = CondTable::from_fn(conditioned, tgt, |key| {
                let p0 = bias_at(key[2]);
                Dist::new(vec![
                    p0 * half,
                    p0 * half,
                    (R::one() - p0) * half,
                    (R::one() - p0) * half,
                ])
                .expect("product cell")
            })?;
            Ok(ToyExtension {
                extension: Extension::new(pz, table)?,
                bias,
                recombines_to_quantum: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_strategies(1).unwrap().len(), 4);
        assert_eq!(enumerate_strategies(2).unwrap().len(), 16);
        assert_eq!(enumerate_strategies(3).unwrap().len(), 64);
        assert!(enumerate_strategies(9).is_err());
    }

    #[test]
    fn strategy_table_matches_combinatorial_in() {
        for s in enumerate_strategies(2).unwrap() {
            let t = s.table::<f64>(2).unwrap();
            let via_table = correlation_in(&t, 2).unwrap();
            assert!((via_table - s.in_value::<f64>(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_floor_is_one() {
        for n in 1..=5 {
            let (v, witness) = min_in_deterministic::<f64>(n).unwrap();
            assert_eq!(v, 1.0, "N = {n}");
            assert!((witness.in_value::<f64>(n) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_strategy_is_feasible_point_mass() {
        let strategies = enumerate_strategies(2).unwrap();
        let t = strategies[5].table::<f64>(2).unwrap();
        match lhv_membership(&t, 2, 1e-7).unwrap() {
            LhvVerdict::Feasible { model, residual } => {
                assert!(residual < 1e-9);
                // Some vertex reproducing the table gets all the weight;
                // the table pins the strategy uniquely here.
                let max_w = model
                    .weights()
                    .iter()
                    .fold(0.0f64, |m, w| m.max(w));
                assert!(max_w > 1.0 - 1e-9);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn uniform_noise_table_is_feasible() {
        let scenario = ChainedScenario::new(2).unwrap();
        let (cond, tgt) = scenario.table_vars();
        let t: CondTable<f64> =
            CondTable::from_fn(cond, tgt, |_| Dist::uniform(4)).unwrap();
        assert!(matches!(
            lhv_membership(&t, 2, 1e-7).unwrap(),
            LhvVerdict::Feasible { .. }
        ));
    }

    #[test]
    fn quantum_table_is_infeasible_with_separating_functional() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        match lhv_membership(&t, 2, 1e-7).unwrap() {
            LhvVerdict::Infeasible {
                certificate,
                in_value,
                in_separates,
                ..
            } => {
                assert!(certificate.verified);
                assert!((in_value - (2.0 - 2.0f64.sqrt())).abs() < 1e-12);
                assert!(in_separates);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    fn deterministic_extension() -> Extension<f64> {
        // Two strategies mixed through Z: cells are products of point
        // masses, so all four factorization conditions hold.
        let strategies = enumerate_strategies(2).unwrap();
        let picks = [&strategies[3], &strategies[12]];
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 2),
                VarSpec::new("B", 2),
                VarSpec::new("Z", 2),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |key| {
                let s = picks[key[2]];
                let x = s.x_of_a[key[0]] as usize;
                let y = s.y_of_b[key[1]] as usize;
                Dist::point_mass(4, x * 2 + y)
            },
        )
        .unwrap();
        Extension::new(Dist::new(vec![0.3, 0.7]).unwrap(), table).unwrap()
    }

    #[test]
    fn deterministic_extension_is_locally_causal() {
        let report = check_local_causality(&deterministic_extension(), 1e-9).unwrap();
        assert!(report.locally_causal());
        assert_eq!(report.outcome_independence_x, 0.0);
    }

    #[test]
    fn toy_extension_recombines_to_quantum_at_three_quarters() {
        let toy = toy_extension::<f64>(2, 0.75).unwrap();
        assert!(toy.recombines_to_quantum);
        let recombined = toy.extension.recombined().unwrap();
        let q = quantum_chain_table::<f64>(2).unwrap();
        assert!(recombined.max_abs_diff(&q).unwrap() < 1e-7);
        assert!(toy.extension.no_signalling(1e-7).unwrap().passes);
        // The anchor setting's X-marginal really is (3/4, 1/4) flipped with z.
        for b in 0..2 {
            let x0 = toy.extension.x_given(0, b, 0).unwrap();
            assert!((x0.prob(0) - 0.75).abs() < 1e-7);
            let x1 = toy.extension.x_given(0, b, 1).unwrap();
            assert!((x1.prob(0) - 0.25).abs() < 1e-7);
        }
    }

    #[test]
    fn toy_extension_parameter_independent_outcome_dependent() {
        let toy = toy_extension::<f64>(2, 0.75).unwrap();
        let report = check_local_causality(&toy.extension, 1e-7).unwrap();
        assert!(report.parameter_independence);
        assert!(!report.outcome_independence);
    }

    #[test]
    fn lemma2_on_toy_extension() {
        let toy = toy_extension::<f64>(2, 0.75).unwrap();
        // At the biased setting the advantage is exactly 1/4.
        for b in 0..2 {
            let report = lemma2_bound(&toy.extension, 2, 0, b, 1e-7).unwrap();
            assert!((report.lhs - 0.25).abs() < 1e-7);
            assert!((report.rhs - 0.5 * (2.0 - 2.0f64.sqrt())).abs() < 1e-7);
            assert!(report.holds);
            assert!(report.matches_quantum);
        }
        // The bound holds at every setting pair.
        for a in 0..2 {
            for b in 0..2 {
                assert!(lemma2_bound(&toy.extension, 2, a, b, 1e-7).unwrap().holds);
            }
        }
    }

    #[test]
    fn overbiased_toy_extension_fails_to_recombine() {
        let toy = toy_extension::<f64>(2, 0.9).unwrap();
        assert!(!toy.recombines_to_quantum);
        let report = lemma2_bound(&toy.extension, 2, 0, 0, 1e-7).unwrap();
        // The bound holds against the extension's own recombination, but the
        // compatibility premise visibly fails and the would-be advantage 0.4
        // exceeds the quantum ceiling 0.2929.
        assert!(report.holds);
        assert!(!report.matches_quantum);
        assert!((report.lhs - 0.4).abs() < 1e-9);
        assert!(report.lhs > 0.5 * (2.0 - 2.0f64.sqrt()));
    }

    #[test]
    fn lemma2_rejects_signalling_extension() {
        // P_{X|abz} depending on b violates the premises.
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 2),
                VarSpec::new("B", 2),
                VarSpec::new("Z", 1),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |key| {
                let p = if key[1] == 0 { 0.8 } else { 0.4 };
                Dist::new(vec![p * 0.5, p * 0.5, (1.0 - p) * 0.5, (1.0 - p) * 0.5]).unwrap()
            },
        )
        .unwrap();
        let ext = Extension::new(Dist::uniform(1), table).unwrap();
        assert!(matches!(
            lemma2_bound(&ext, 2, 0, 0, 1e-9).unwrap_err(),
            Error::PremiseViolated(_)
        ));
    }

    #[test]
    fn averaging_identity_on_toy() {
        let toy = toy_extension::<f64>(2, 0.75).unwrap();
        assert!(averaging_identity_gap(&toy.extension, 2).unwrap() < 1e-9);
    }

    #[test]
    fn trivial_z_lemma2_lhs_is_zero() {
        let q = quantum_chain_table::<f64>(2).unwrap();
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 2),
                VarSpec::new("B", 2),
                VarSpec::new("Z", 1),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |key| q.cell(&[key[0], key[1]]).unwrap().clone(),
        )
        .unwrap();
        let ext = Extension::new(Dist::uniform(1), table).unwrap();
        let report = lemma2_bound(&ext, 2, 0, 0, 1e-9).unwrap();
        assert!(report.lhs < 1e-12);
        assert!(report.holds);
    }

    #[test]
    fn epr_determinism_on_single_cell_fragment() {
        // One setting per side, perfectly correlated deterministic cells.
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 1),
                VarSpec::new("B", 1),
                VarSpec::new("Z", 2),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |key| Dist::point_mass(4, if key[2] == 0 { 0 } else { 3 }),
        )
        .unwrap();
        let ext: Extension<f64> = Extension::new(Dist::uniform(2), table).unwrap();
        let report = epr_determinism(&ext, &[0], 1e-9).unwrap();
        assert!(report.premise_violation.is_none());
        assert!(report.deterministic);
        assert!((report.pairing_correlation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_determinism_flags_outcome_dependence() {
        // Perfectly correlated but stochastic cells: premises (outcome
        // independence) fail, so no determinism verdict is drawn.
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 1),
                VarSpec::new("B", 1),
                VarSpec::new("Z", 1),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |_| Dist::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap(),
        )
        .unwrap();
        let ext = Extension::new(Dist::uniform(1), table).unwrap();
        let report = epr_determinism(&ext, &[0], 1e-9).unwrap();
        assert!(report.premise_violation.is_some());
        assert!(!report.deterministic);
    }

    #[test]
    fn epr_determinism_rejects_uncorrelated_pairing() {
        let table = CondTable::from_fn(
            vec![
                VarSpec::new("A", 1),
                VarSpec::new("B", 1),
                VarSpec::new("Z", 1),
            ],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
            |_| Dist::uniform(4),
        )
        .unwrap();
        let ext = Extension::new(Dist::uniform(1), table).unwrap();
        assert!(matches!(
            epr_determinism(&ext, &[0], 1e-9).unwrap_err(),
            Error::PremiseViolated(_)
        ));
    }
}
