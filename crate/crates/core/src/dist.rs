//! Finite discrete probability distributions and the variational distance.

use crate::error::{Error, Result};
use crate::real::{normalization_tol, r64, rn, Real};

/// A probability distribution over the ordered outcome set `{0, .., n-1}`.
///
/// Entries are validated to be in `[0, 1]` and to sum to one within the
/// normalization tolerance (1e-12 at `f64`).
#[derive(Debug, Clone, PartialEq)]
pub struct Dist<R: Real> {
    probs: Vec<R>,
}

impl<R: Real> Dist<R> {
    /// Validates and wraps a probability vector.
    pub fn new(probs: Vec<R>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        let tol = normalization_tol::<R>();
        for (i, &p) in probs.iter().enumerate() {
            if p < -tol {
                return Err(Error::NegativeProbability(p.to_f64().unwrap_or(-1.0), i));
            }
            if p > R::one() + tol {
                return Err(Error::NotNormalized(p.to_f64().unwrap_or(2.0)));
            }
        }
        let mass: R = probs.iter().copied().sum();
        if (mass - R::one()).abs() > tol {
            return Err(Error::NotNormalized(mass.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { probs })
    }

    /// Normalizes arbitrary nonnegative weights into a distribution.
    pub fn from_weights(weights: &[R]) -> Result<Self> {
        let total: R = weights.iter().copied().sum();
        if total <= R::zero() {
            return Err(Error::NotNormalized(total.to_f64().unwrap_or(0.0)));
        }
        for (i, &w) in weights.iter().enumerate() {
            if w < R::zero() {
                return Err(Error::NegativeProbability(w.to_f64().unwrap_or(-1.0), i));
            }
        }
        Ok(Self {
            probs: weights.iter().map(|&w| w / total).collect(),
        })
    }

    /// Uniform distribution on `n` outcomes (the paper's P_X-bar).
    pub fn uniform(n: usize) -> Self {
        let p = R::one() / rn::<R>(n);
        Self {
            probs: vec![p; n],
        }
    }

    /// Point mass on outcome `at`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![R::zero(); n];
        probs[at] = R::one();
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, outcome: usize) -> R {
        self.probs[outcome]
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = R> + '_ {
        self.probs.iter().copied()
    }

    /// Binary-outcome relabelling 0 <-> 1: the distribution of X with its
    /// values interchanged.
    pub fn flipped(&self) -> Result<Self> {
        if self.len() != 2 {
            return Err(Error::OutcomeMismatch(self.len(), 2));
        }
        Ok(Self {
            probs: vec![self.probs[1], self.probs[0]],
        })
    }

    /// Convex mixture of distributions over the same outcome set.
    pub fn mix(components: &[(R, &Dist<R>)]) -> Result<Self> {
        let n = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?
            .1
            .len();
        let mut probs = vec![R::zero(); n];
        for (w, d) in components {
            if d.len() != n {
                return Err(Error::OutcomeMismatch(d.len(), n));
            }
            for (acc, p) in probs.iter_mut().zip(d.iter()) {
                *acc += *w * p;
            }
        }
        Dist::new(probs)
    }

    /// Largest absolute entrywise difference to another distribution.
    pub fn max_abs_diff(&self, other: &Self) -> Result<R> {
        if self.len() != other.len() {
            return Err(Error::OutcomeMismatch(self.len(), other.len()));
        }
        Ok(self
            .iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(R::zero(), |m, d| m.max(d)))
    }
}

/// Variational distance `D(P, Q) = (1/2) sum_x |P(x) - Q(x)|`.
///
/// A metric on distributions over a common outcome set, bounded by 1.
pub fn variational_distance<R: Real>(p: &Dist<R>, q: &Dist<R>) -> Result<R> {
    if p.len() != q.len() {
        return Err(Error::OutcomeMismatch(p.len(), q.len()));
    }
    let sum: R = p
        .iter()
        .zip(q.iter())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(sum * r64::<R>(0.5))
}

/// Distance to the uniform distribution on the same outcome set.
pub fn distance_from_uniform<R: Real>(p: &Dist<R>) -> R {
    let u = Dist::uniform(p.len());
    variational_distance(p, &u).expect("matching lengths")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(Dist::new(vec![0.5, 0.4]).is_err());
        assert!(Dist::new(vec![-0.1, 1.1]).is_err());
        assert!(Dist::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn accepts_within_tolerance() {
        let d = Dist::new(vec![0.5, 0.5 + 1e-13]).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn distance_identity() {
        let p = Dist::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(variational_distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn distance_disjoint_supports_is_one() {
        let p = Dist::new(vec![1.0, 0.0]).unwrap();
        let q = Dist::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(variational_distance(&p, &q).unwrap(), 1.0);
    }

    #[test]
    fn distance_three_quarters_to_uniform_is_quarter() {
        // Direct evaluation of the definitional sum: (1/2)(|3/4-1/2|+|1/4-1/2|) = 1/4.
        let p: Dist<f64> = Dist::new(vec![0.75, 0.25]).unwrap();
        let q = Dist::uniform(2);
        assert!((variational_distance(&p, &q).unwrap() - 0.25).abs() < 1e-15);
        assert!((distance_from_uniform(&p) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn distance_rejects_mismatched_outcomes() {
        let p = Dist::new(vec![1.0]).unwrap();
        let q = Dist::uniform(2);
        assert!(variational_distance(&p, &q).is_err());
    }

    #[test]
    fn mixture_and_flip() {
        let p = Dist::new(vec![0.75, 0.25]).unwrap();
        let f = p.flipped().unwrap();
        assert_eq!(f.probs(), &[0.25, 0.75]);
        let m = Dist::mix(&[(0.5, &p), (0.5, &f)]).unwrap();
        assert!(m.max_abs_diff(&Dist::uniform(2)).unwrap() < 1e-15);
    }

    #[test]
    fn works_at_f32() {
        let p: Dist<f32> = Dist::new(vec![0.25, 0.75]).unwrap();
        assert!((distance_from_uniform(&p) - 0.25).abs() < 1e-6);
    }
}
