//! Finite-dimensional quantum states, POVMs, and Born-rule predictions.

mod ops;
mod povm;
mod state;

pub use ops::{
    born, born_density, fidelity, is_tomographically_complete, purify_measurement, schmidt,
    states_equal_up_to_phase, tomographic_rank, SchmidtDecomposition,
};
pub use povm::Povm;
pub use state::{DensityOperator, PureState};

use crate::real::{Cplx, Real};
use nalgebra::{ComplexField, DMatrix};

/// Max entrywise modulus of `m - m^dagger`.
pub(crate) fn hermiticity_defect<R: Real>(m: &DMatrix<Cplx<R>>) -> R {
    let adj = m.adjoint();
    let mut worst = R::zero();
    for (a, b) in m.iter().zip(adj.iter()) {
        worst = worst.max((*a - *b).modulus());
    }
    worst
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue<R: Real>(m: &DMatrix<Cplx<R>>) -> R {
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues
        .iter()
        .copied()
        .fold(R::max_value().unwrap_or_else(R::one), |acc, v| acc.min(v))
}

/// Hermitian square root with eigenvalues clamped at zero; small negative
/// eigenvalues within `floor_tol` are treated as rounding.
pub(crate) fn psd_sqrt<R: Real>(
    m: &DMatrix<Cplx<R>>,
    floor_tol: R,
) -> crate::error::Result<DMatrix<Cplx<R>>> {
    let eig = m.clone().symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -floor_tol {
            return Err(crate::error::Error::NotPositiveSemidefinite(
                lambda.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let root = lambda.max(R::zero()).sqrt();
        for cell in scaled.column_mut(i).iter_mut() {
            *cell *= Cplx::new(root, R::zero());
        }
    }
    Ok(&scaled * eig.eigenvectors.adjoint())
}

/// Max entrywise modulus of `m^2 - m` (idempotency defect).
pub(crate) fn idempotency_defect<R: Real>(m: &DMatrix<Cplx<R>>) -> R {
    let sq = m * m;
    let mut worst = R::zero();
    for (a, b) in sq.iter().zip(m.iter()) {
        worst = worst.max((*a - *b).modulus());
    }
    worst
}
