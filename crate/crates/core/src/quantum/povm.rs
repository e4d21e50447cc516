//! Positive-operator-valued measures.

use nalgebra::{ComplexField, DMatrix};
use crate::error::{Error, Result};
use crate::real::{operator_tol, Cplx, Real};

use super::state::PureState;
use super::{hermiticity_defect, idempotency_defect, min_eigenvalue};

/// A measurement `{E_x}` with outcomes `x = 0, .., n-1`.
///
/// Construction validates positivity of each element and completeness
/// `sum_x E_x = 1` within 1e-10; the `projective` flag records whether every
/// element is idempotent within the same tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<R: Real> {
    label: String,
    elements: Vec<DMatrix<Cplx<R>>>,
    projective: bool,
}

impl<R: Real> Povm<R> {
    pub fn new(label: impl Into<String>, elements: Vec<DMatrix<Cplx<R>>>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidParameter("POVM with no outcomes".into()))?;
        let d = first.nrows();
        let tol = operator_tol::<R>();
        let mut sum: DMatrix<Cplx<R>> = DMatrix::zeros(d, d);
        let mut projective = true;
        for e in &elements {
            if e.nrows() != d || e.ncols() != d {
                return Err(Error::DimensionMismatch(e.nrows(), d));
            }
            let herm = hermiticity_defect(e);
            if herm > tol {
                return Err(Error::NotHermitian(herm.to_f64().unwrap_or(f64::NAN)));
            }
            let min_eig = min_eigenvalue(e);
            if min_eig < -tol {
                return Err(Error::NotPositiveSemidefinite(
                    min_eig.to_f64().unwrap_or(f64::NAN),
                ));
            }
            if idempotency_defect(e) > tol {
                projective = false;
            }
            sum += e;
        }
        let identity: DMatrix<Cplx<R>> = DMatrix::identity(d, d);
        let mut completeness = R::zero();
        for (a, b) in sum.iter().zip(identity.iter()) {
            completeness = completeness.max((*a - *b).modulus());
        }
        if completeness > tol {
            return Err(Error::PovmIncomplete(
                completeness.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            label: label.into(),
            elements,
            projective,
        })
    }

    /// Rank-1 projective measurement onto the given orthonormal states.
    pub fn from_projector_states(
        label: impl Into<String>,
        states: &[PureState<R>],
    ) -> Result<Self> {
        Self::new(label, states.iter().map(|s| s.projector()).collect())
    }

    /// The qubit basis `{|theta>, |theta + pi>}`; outcome 0 projects onto
    /// `|theta>`.
    pub fn projective_qubit(label: impl Into<String>, theta: R) -> Self {
        let zero = PureState::qubit(theta);
        let one = PureState::qubit(theta + R::pi());
        Self::from_projector_states(label, &[zero, one]).expect("qubit basis is complete")
    }

    /// Computational basis measurement in dimension `dim`.
    pub fn computational(label: impl Into<String>, dim: usize) -> Self {
        let states: Vec<PureState<R>> =
            (0..dim).map(|i| PureState::basis_state(dim, i)).collect();
        Self::from_projector_states(label, &states).expect("computational basis is complete")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn element(&self, outcome: usize) -> &DMatrix<Cplx<R>> {
        &self.elements[outcome]
    }

    pub fn elements(&self) -> &[DMatrix<Cplx<R>>] {
        &self.elements
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    /// Joint measurement `{E_x (x) F_y}` with outcome index `x * n_y + y`.
    ///
    /// Positivity and completeness carry over from the factors, so the
    /// elements are not re-validated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut elements = Vec::with_capacity(self.n_outcomes() * other.n_outcomes());
        for e in &self.elements {
            for f in &other.elements {
                elements.push(e.kronecker(f));
            }
        }
        Ok(Self {
            label: format!("{}*{}", self.label, other.label),
            elements,
            projective: self.projective && other.projective,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_basis_is_projective_and_complete() {
        let p: Povm<f64> = Povm::projective_qubit("a0", 0.0);
        assert!(p.is_projective());
        assert_eq!(p.n_outcomes(), 2);
        assert!((p.element(0)[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn incomplete_family_rejected() {
        let e = PureState::<f64>::up().projector();
        assert!(matches!(
            Povm::new("bad", vec![e]).unwrap_err(),
            Error::PovmIncomplete(_)
        ));
    }

    #[test]
    fn non_projective_flagged() {
        let half = DMatrix::from_diagonal_element(2, 2, Cplx::new(0.5, 0.0));
        let p = Povm::<f64>::new("noise", vec![half.clone(), half]).unwrap();
        assert!(!p.is_projective());
    }

    #[test]
    fn tensor_outcome_layout() {
        let a: Povm<f64> = Povm::computational("a", 2);
        let b: Povm<f64> = Povm::computational("b", 2);
        let joint = a.tensor(&b).unwrap();
        assert_eq!(joint.n_outcomes(), 4);
        // outcome 1 = (x=0, y=1) projects onto |01>.
        assert!((joint.element(1)[(1, 1)].re - 1.0).abs() < 1e-15);
    }
}
