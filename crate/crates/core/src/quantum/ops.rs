//! Born-rule predictions, Schmidt decomposition, measurement purification,
//! tomographic completeness, and fidelity.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::real::{operator_tol, r64, Cplx, Real};

use super::povm::Povm;
use super::state::{DensityOperator, PureState};

/// Born rule for a pure state: `P(x) = <psi|E_x|psi>`.
pub fn born<R: Real>(psi: &PureState<R>, povm: &Povm<R>) -> Result<Dist<R>> {
    if psi.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), povm.dim()));
    }
    let raw: Vec<R> = povm
        .elements()
        .iter()
        .map(|e| psi.amps().dotc(&(e * psi.amps())).real())
        .collect();
    clean_probabilities(raw)
}

/// Born rule for a density operator: `P(x) = tr(E_x rho)`.
pub fn born_density<R: Real>(rho: &DensityOperator<R>, povm: &Povm<R>) -> Result<Dist<R>> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), povm.dim()));
    }
    let raw: Vec<R> = povm
        .elements()
        .iter()
        .map(|e| (e * rho.mat()).trace().real())
        .collect();
    clean_probabilities(raw)
}

/// Clamps rounding-level negatives and renormalizes the (already
/// near-normalized) Born vector so downstream `Dist` invariants hold
/// exactly.
fn clean_probabilities<R: Real>(raw: Vec<R>) -> Result<Dist<R>> {
    let tol = operator_tol::<R>();
    let mut cleaned = Vec::with_capacity(raw.len());
    for (i, &p) in raw.iter().enumerate() {
        if p < -tol {
            return Err(Error::NegativeProbability(p.to_f64().unwrap_or(-1.0), i));
        }
        cleaned.push(p.max(R::zero()));
    }
    let mass: R = cleaned.iter().copied().sum();
    if (mass - R::one()).abs() > tol {
        return Err(Error::NotNormalized(mass.to_f64().unwrap_or(f64::NAN)));
    }
    Dist::from_weights(&cleaned)
}

/// Schmidt decomposition of `psi` across the cut after `left_factors`
/// tensor factors.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition<R: Real> {
    /// Squared Schmidt coefficients (probabilities), descending; ties keep
    /// first-occurrence order.
    pub coefficients: Vec<R>,
    /// Orthonormal left basis vectors, aligned with `coefficients`.
    pub left: Vec<DVector<Cplx<R>>>,
    /// Orthonormal right basis vectors, aligned with `coefficients`.
    pub right: Vec<DVector<Cplx<R>>>,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl<R: Real> SchmidtDecomposition<R> {
    /// `sum_i sqrt(p_i) |l_i> (x) |r_i>` as a state on dims
    /// `[left_dim, right_dim]`.
    pub fn reconstruct(&self) -> Result<PureState<R>> {
        let mut amps = vec![Cplx::new(R::zero(), R::zero()); self.left_dim * self.right_dim];
        for ((p, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left)
            .zip(&self.right)
        {
            let c = Cplx::new(p.sqrt(), R::zero());
            for (li, la) in l.iter().enumerate() {
                for (ri, ra) in r.iter().enumerate() {
                    amps[li * self.right_dim + ri] += c * *la * *ra;
                }
            }
        }
        PureState::new(amps, vec![self.left_dim, self.right_dim])
    }

    /// Count of coefficients above `threshold`.
    pub fn rank(&self, threshold: R) -> usize {
        self.coefficients.iter().filter(|&&p| p > threshold).count()
    }
}

/// Computes the Schmidt decomposition via SVD of the amplitude matrix.
///
/// `left_factors` counts how many leading tensor factors form the left side
/// of the cut. Degenerate coefficients keep their first-occurrence order;
/// each left vector's largest-modulus entry is rotated to the positive real
/// axis (compensated on the right) for reproducibility.
pub fn schmidt<R: Real>(psi: &PureState<R>, left_factors: usize) -> Result<SchmidtDecomposition<R>> {
    if left_factors == 0 || left_factors >= psi.dims().len() {
        return Err(Error::InvalidParameter(format!(
            "cut after {left_factors} factors is not a bipartition of {} factors",
            psi.dims().len()
        )));
    }
    let left_dim: usize = psi.dims()[..left_factors].iter().product();
    let right_dim: usize = psi.dims()[left_factors..].iter().product();
    let m = DMatrix::from_fn(left_dim, right_dim, |l, r| psi.amp(l * right_dim + r));
    let svd = m.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut coefficients = Vec::with_capacity(order.len());
    let mut left = Vec::with_capacity(order.len());
    let mut right = Vec::with_capacity(order.len());
    for &i in &order {
        let sigma = svd.singular_values[i];
        coefficients.push(sigma * sigma);
        let mut l: DVector<Cplx<R>> = u.column(i).into_owned();
        let mut r: DVector<Cplx<R>> = v_t.row(i).transpose();
        // Canonical phase: largest-|entry| of the left vector made real
        // positive, phase moved onto the right vector.
        let (mut best, mut best_mod) = (0usize, R::zero());
        for (j, a) in l.iter().enumerate() {
            let m = a.modulus();
            if m > best_mod {
                best_mod = m;
                best = j;
            }
        }
        if best_mod > R::zero() {
            let phase = l[best] / Cplx::new(best_mod, R::zero());
            let inv = phase.conjugate();
            for a in l.iter_mut() {
                *a *= inv;
            }
            for a in r.iter_mut() {
                *a *= phase;
            }
        }
        left.push(l);
        right.push(r);
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
        left_dim,
        right_dim,
    })
}

/// Unitary dilation of a measurement:
/// `|psi> -> sum_x sqrt(E_x)|psi> (x) |x>_D`, with the device register
/// appended as the last tensor factor.
pub fn purify_measurement<R: Real>(psi: &PureState<R>, povm: &Povm<R>) -> Result<PureState<R>> {
    if psi.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), povm.dim()));
    }
    let n_out = povm.n_outcomes();
    let d = psi.dim();
    let mut amps = vec![Cplx::new(R::zero(), R::zero()); d * n_out];
    for (x, e) in povm.elements().iter().enumerate() {
        let root = super::psd_sqrt(e, operator_tol::<R>())?;
        let branch = &root * psi.amps();
        for (s, a) in branch.iter().enumerate() {
            amps[s * n_out + x] = *a;
        }
    }
    let mut dims = psi.dims().to_vec();
    dims.push(n_out);
    // Completeness of the POVM makes the image normalized up to rounding.
    PureState::normalized(amps, dims)
}

/// Rank of the real span of the POVM elements plus the identity inside the
/// space of Hermitian matrices.
pub fn tomographic_rank<R: Real>(povms: &[Povm<R>], dim: usize) -> Result<usize> {
    let mut rows: Vec<Vec<R>> = vec![hermitian_coords(&DMatrix::identity(dim, dim))];
    for p in povms {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(p.dim(), dim));
        }
        for e in p.elements() {
            rows.push(hermitian_coords(e));
        }
    }
    let mat = DMatrix::from_fn(rows.len(), dim * dim, |i, j| rows[i][j]);
    let svd = mat.svd(false, false);
    let tol = r64::<R>(1e-9);
    Ok(svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count())
}

/// True when outcome statistics of `povms` determine any state on
/// `dim` dimensions uniquely: the span test has full rank `dim^2`.
pub fn is_tomographically_complete<R: Real>(povms: &[Povm<R>], dim: usize) -> Result<bool> {
    Ok(tomographic_rank(povms, dim)? == dim * dim)
}

fn hermitian_coords<R: Real>(m: &DMatrix<Cplx<R>>) -> Vec<R> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(m[(i, i)].real());
    }
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(m[(i, j)].real());
            out.push(m[(i, j)].imaginary());
        }
    }
    out.resize(d * d, R::zero());
    out
}

/// `|<a|b>|` for pure states of equal total dimension.
pub fn fidelity<R: Real>(a: &PureState<R>, b: &PureState<R>) -> Result<R> {
    Ok(a.inner(b)?.modulus())
}

/// Equality up to a global phase, via overlap modulus.
pub fn states_equal_up_to_phase<R: Real>(a: &PureState<R>, b: &PureState<R>, tol: R) -> bool {
    match fidelity(a, b) {
        Ok(f) => f >= R::one() - tol,
        Err(_) => false,
    }
}
