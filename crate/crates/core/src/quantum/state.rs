//! Pure states and density operators with tensor structure.

use nalgebra::{ComplexField, DMatrix, DVector};
use crate::error::{Error, Result};
use crate::real::{normalization_tol, operator_tol, r64, Cplx, Real};

use super::{hermiticity_defect, min_eigenvalue};

/// A normalized pure state with an explicit tensor factorization.
///
/// Amplitudes are stored row-major over the factors (last factor fastest),
/// so `dims = [2, 2]` indexes the basis as |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<R: Real> {
    amps: DVector<Cplx<R>>,
    dims: Vec<usize>,
}

impl<R: Real> PureState<R> {
    pub fn new(amps: Vec<Cplx<R>>, dims: Vec<usize>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if amps.len() != expected || expected == 0 {
            return Err(Error::DimensionMismatch(amps.len(), expected));
        }
        let norm_sq: R = amps.iter().map(|a| a.modulus_squared()).sum();
        if (norm_sq - R::one()).abs() > normalization_tol::<R>() {
            return Err(Error::StateNotNormalized(
                norm_sq.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
            dims,
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amps: &[R], dims: Vec<usize>) -> Result<Self> {
        Self::new(
            amps.iter().map(|&a| Cplx::new(a, R::zero())).collect(),
            dims,
        )
    }

    /// Normalizes arbitrary amplitudes (errors on the zero vector).
    pub fn normalized(amps: Vec<Cplx<R>>, dims: Vec<usize>) -> Result<Self> {
        let norm_sq: R = amps.iter().map(|a| a.modulus_squared()).sum();
        if norm_sq <= R::zero() {
            return Err(Error::StateNotNormalized(0.0));
        }
        let scale = Cplx::new(R::one() / norm_sq.sqrt(), R::zero());
        Self::new(amps.into_iter().map(|a| a * scale).collect(), dims)
    }

    /// The qubit `|theta> = cos(theta/2)|up> + sin(theta/2)|down>`.
    pub fn qubit(theta: R) -> Self {
        let half = theta * r64::<R>(0.5);
        Self {
            amps: DVector::from_vec(vec![
                Cplx::new(half.cos(), R::zero()),
                Cplx::new(half.sin(), R::zero()),
            ]),
            dims: vec![2],
        }
    }

    pub fn up() -> Self {
        Self::qubit(R::zero())
    }

    pub fn down() -> Self {
        Self::qubit(R::pi())
    }

    /// `(|up> + |down>)/sqrt(2)`.
    pub fn plus() -> Self {
        Self::qubit(R::frac_pi_2())
    }

    /// The maximally entangled pair `(|00> + |11>)/sqrt(2)` on dims `[2, 2]`.
    pub fn bell_pair() -> Self {
        Self::maximally_entangled(2)
    }

    /// `(1/sqrt(m)) sum_x |x>|x>` on dims `[m, m]`.
    pub fn maximally_entangled(m: usize) -> Self {
        let amp = R::one() / rn_sqrt::<R>(m);
        let mut amps = vec![Cplx::new(R::zero(), R::zero()); m * m];
        for x in 0..m {
            amps[x * m + x] = Cplx::new(amp, R::zero());
        }
        Self {
            amps: DVector::from_vec(amps),
            dims: vec![m, m],
        }
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amps = vec![Cplx::new(R::zero(), R::zero()); dim];
        amps[index] = Cplx::new(R::one(), R::zero());
        Self {
            amps: DVector::from_vec(amps),
            dims: vec![dim],
        }
    }

    /// Tensor product, concatenating factor lists.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in self.amps.iter() {
            for b in other.amps.iter() {
                amps.push(*a * *b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amps: DVector::from_vec(amps),
            dims,
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Reinterprets the tensor factorization without touching amplitudes.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if expected != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), expected));
        }
        Ok(Self {
            amps: self.amps.clone(),
            dims,
        })
    }

    pub fn amp(&self, index: usize) -> Cplx<R> {
        self.amps[index]
    }

    pub fn amps(&self) -> &DVector<Cplx<R>> {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Cplx<R>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// The projector `|psi><psi|`.
    pub fn projector(&self) -> DMatrix<Cplx<R>> {
        &self.amps * self.amps.adjoint()
    }
}

fn rn_sqrt<R: Real>(n: usize) -> R {
    crate::real::rn::<R>(n).sqrt()
}

/// A density operator with tensor structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<R: Real> {
    mat: DMatrix<Cplx<R>>,
    dims: Vec<usize>,
}

impl<R: Real> DensityOperator<R> {
    /// Validates Hermiticity (1e-10), positivity (eigenvalues >= -1e-10),
    /// and unit trace.
    pub fn new(mat: DMatrix<Cplx<R>>, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(mat.nrows(), d));
        }
        let tol = operator_tol::<R>();
        let herm = hermiticity_defect(&mat);
        if herm > tol {
            return Err(Error::NotHermitian(herm.to_f64().unwrap_or(f64::NAN)));
        }
        let min_eig = min_eigenvalue(&mat);
        if min_eig < -tol {
            return Err(Error::NotPositiveSemidefinite(
                min_eig.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let trace = mat.trace().real();
        if (trace - R::one()).abs() > tol {
            return Err(Error::TraceNotOne(trace.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { mat, dims })
    }

    pub fn from_pure(psi: &PureState<R>) -> Self {
        Self {
            mat: psi.projector(),
            dims: psi.dims().to_vec(),
        }
    }

    /// Convex mixture of pure states over a common space.
    pub fn mixture(components: &[(R, &PureState<R>)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let d = first.1.dim();
        let mut mat: DMatrix<Cplx<R>> = DMatrix::zeros(d, d);
        let mut total = R::zero();
        for (w, psi) in components {
            if psi.dim() != d {
                return Err(Error::DimensionMismatch(psi.dim(), d));
            }
            mat += psi.projector() * Cplx::new(*w, R::zero());
            total += *w;
        }
        if (total - R::one()).abs() > normalization_tol::<R>() {
            return Err(Error::NotNormalized(total.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(mat, first.1.dims().to_vec())
    }

    pub fn mat(&self) -> &DMatrix<Cplx<R>> {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_state() {
        let amps = vec![Cplx::new(1.0, 0.0), Cplx::new(1.0, 0.0)];
        assert!(PureState::<f64>::new(amps, vec![2]).is_err());
    }

    #[test]
    fn qubit_parameterization() {
        let s: PureState<f64> = PureState::qubit(std::f64::consts::FRAC_PI_2);
        assert!((s.amp(0).re - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((s.amp(1).re - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((PureState::<f64>::down().amp(1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_pair_amplitudes() {
        let b: PureState<f64> = PureState::bell_pair();
        let r = (0.5f64).sqrt();
        assert!((b.amp(0).re - r).abs() < 1e-15);
        assert!((b.amp(3).re - r).abs() < 1e-15);
        assert_eq!(b.amp(1).re, 0.0);
    }

    #[test]
    fn tensor_concatenates_dims() {
        let t = PureState::<f64>::up().tensor(&PureState::down());
        assert_eq!(t.dims(), &[2, 2]);
        assert!((t.amp(1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_operator_validation() {
        let rho = DensityOperator::from_pure(&PureState::<f64>::plus());
        assert!((rho.mat()[(0, 1)].re - 0.5).abs() < 1e-15);
        // Non-unit trace rejected.
        let bad = DMatrix::from_diagonal_element(2, 2, Cplx::new(1.0, 0.0));
        assert!(matches!(
            DensityOperator::<f64>::new(bad, vec![2]).unwrap_err(),
            Error::TraceNotOne(_)
        ));
    }

    #[test]
    fn mixture_of_orthogonal_states_is_diagonal() {
        let up = PureState::<f64>::up();
        let down = PureState::<f64>::down();
        let rho = DensityOperator::mixture(&[(0.5, &up), (0.5, &down)]).unwrap();
        assert!((rho.mat()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(rho.mat()[(0, 1)].modulus() < 1e-15);
    }
}
