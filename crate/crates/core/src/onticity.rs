//! Wave-function onticity: deciding whether the quantum state is a function
//! of an alternative theory's parameter.
//!
//! Given a joint distribution over (parameter `Z`, quantum state `Psi`),
//! per-parameter predictions `P_{X|AZ}`, and a tomographically complete
//! measurement set, either every supported `z` pins down a unique state and
//! the function `f` with `Psi = f(Z)` is extracted, or two distinct states
//! share a parameter value and the overlap is returned as a witness
//! (located at a measurement whose Born statistics distinguish the pair),
//! or the predictions fail to match the Born statistics at all.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::quantum::{born, fidelity, is_tomographically_complete, Povm, PureState};
use crate::real::Real;
use crate::table::{CondTable, JointTable};

/// Inputs of the onticity decision.
#[derive(Debug, Clone)]
pub struct OnticJoint<R: Real> {
    /// Candidate quantum states, indexed by the `Psi` variable.
    pub psi_set: Vec<PureState<R>>,
    /// Joint distribution over `[Z, Psi]` (in that order).
    pub joint: JointTable<R>,
    /// Predictions `P_{X | A Z}` of the alternative theory.
    pub predictions: CondTable<R>,
}

impl<R: Real> OnticJoint<R> {
    pub fn new(
        psi_set: Vec<PureState<R>>,
        joint: JointTable<R>,
        predictions: CondTable<R>,
    ) -> Result<Self> {
        if joint.vars().len() != 2 {
            return Err(Error::ShapeMismatch(
                "joint must range over [Z, Psi]".into(),
            ));
        }
        if joint.vars()[1].range != psi_set.len() {
            return Err(Error::RangeMismatch(joint.vars()[1].range, psi_set.len()));
        }
        if predictions.conditioned().len() != 2 {
            return Err(Error::ShapeMismatch(
                "predictions must condition on [A, Z]".into(),
            ));
        }
        if predictions.conditioned()[1].range != joint.vars()[0].range {
            return Err(Error::RangeMismatch(
                predictions.conditioned()[1].range,
                joint.vars()[0].range,
            ));
        }
        Ok(Self {
            psi_set,
            joint,
            predictions,
        })
    }

    pub fn z_count(&self) -> usize {
        self.joint.vars()[0].range
    }

    /// States with positive joint mass at `z`.
    pub fn supported_states(&self, z: usize) -> Vec<usize> {
        let tol = crate::real::normalization_tol::<R>();
        (0..self.psi_set.len())
            .filter(|&i| self.joint.prob(&[z, i]) > tol)
            .collect()
    }
}

/// Verdict of the onticity check.
#[derive(Debug, Clone)]
pub enum OnticityVerdict<R: Real> {
    /// Every supported parameter value determines the state: `Psi = f(Z)`.
    Function {
        /// `f`: state index per parameter value (`None` for unsupported
        /// values of `z`).
        f: Vec<Option<usize>>,
        /// Groups of parameter values mapped to the same state (removable
        /// degeneracy), listed when more than one value shares a state.
        degeneracies: Vec<Vec<usize>>,
    },
    /// Two distinct states share a parameter value: the epistemic-overlap
    /// witness, with a measurement separating the pair.
    Overlap {
        z: usize,
        psi: usize,
        psi_prime: usize,
        /// Index of a measurement whose Born statistics differ on the pair.
        witness_a: usize,
        /// Variational distance of the two Born distributions there.
        separation: R,
    },
    /// The stated predictions do not match the Born statistics of the
    /// supported state.
    PredictionMismatch {
        z: usize,
        a: usize,
        deviation: R,
    },
}

/// Decides onticity within `tol`. Errors when the measurement set is not
/// tomographically complete (the argument needs statistics that pin states
/// down uniquely).
pub fn check_onticity<R: Real>(
    oj: &OnticJoint<R>,
    povms: &[Povm<R>],
    tol: R,
) -> Result<OnticityVerdict<R>> {
    let dim = oj
        .psi_set
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty state set".into()))?
        .dim();
    if !is_tomographically_complete(povms, dim)? {
        let rank = crate::quantum::tomographic_rank(povms, dim)?;
        return Err(Error::NotTomographicallyComplete(rank, dim * dim));
    }
    let phase_tol = crate::real::scaled_tol::<R>(1e-9);

    // Born statistics per (state, measurement), computed once.
    let mut stats: Vec<Vec<Dist<R>>> = Vec::with_capacity(oj.psi_set.len());
    for psi in &oj.psi_set {
        let per_a: Vec<Dist<R>> = povms
            .iter()
            .map(|p| born(psi, p))
            .collect::<Result<_>>()?;
        stats.push(per_a);
    }

    let mut f: Vec<Option<usize>> = vec![None; oj.z_count()];
    for z in 0..oj.z_count() {
        let supported = oj.supported_states(z);
        if supported.is_empty() {
            continue;
        }
        // Two supported states that are genuinely distinct (not equal up to
        // phase) form an overlap witness; tomographic completeness
        // guarantees a separating measurement.
        for (i, &s1) in supported.iter().enumerate() {
            for &s2 in &supported[i + 1..] {
                if fidelity(&oj.psi_set[s1], &oj.psi_set[s2])? < R::one() - phase_tol {
                    let (witness_a, separation) =
                        best_separating_measurement(&stats[s1], &stats[s2])?;
                    return Ok(OnticityVerdict::Overlap {
                        z,
                        psi: s1,
                        psi_prime: s2,
                        witness_a,
                        separation,
                    });
                }
            }
        }
        let state = supported[0];
        // The predictions at each measurement must equal the Born
        // statistics of the supported state.
        for (a, expected) in stats[state].iter().enumerate() {
            let cell = oj.predictions.cell(&[a, z])?;
            let deviation = cell.max_abs_diff(expected)?;
            if deviation > tol {
                return Ok(OnticityVerdict::PredictionMismatch { z, a, deviation });
            }
        }
        f[z] = Some(state);
    }

    // Group parameter values by assigned state to surface degeneracies.
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); oj.psi_set.len()];
    for (z, assigned) in f.iter().enumerate() {
        if let Some(i) = assigned {
            groups[*i].push(z);
        }
    }
    let degeneracies: Vec<Vec<usize>> =
        groups.into_iter().filter(|g| g.len() > 1).collect();
    Ok(OnticityVerdict::Function { f, degeneracies })
}

fn best_separating_measurement<R: Real>(
    s1: &[Dist<R>],
    s2: &[Dist<R>],
) -> Result<(usize, R)> {
    let mut best = (0usize, R::zero());
    for (a, (d1, d2)) in s1.iter().zip(s2).enumerate() {
        let sep = crate::dist::variational_distance(d1, d2)?;
        if sep > best.1 {
            best = (a, sep);
        }
    }
    Ok(best)
}

/// Quotients the parameter set by an extracted function: parameter values
/// sharing a state merge into one value. The quotient theory's predictions
/// are identical on every (measurement, class) cell, which
/// [`degeneracy_removal_gap`] quantifies.
pub fn degeneracy_removal_gap<R: Real>(
    oj: &OnticJoint<R>,
    f: &[Option<usize>],
) -> Result<R> {
    let mut worst = R::zero();
    let n_a = oj.predictions.conditioned()[0].range;
    for state in 0..oj.psi_set.len() {
        let class: Vec<usize> = (0..oj.z_count())
            .filter(|&z| f[z] == Some(state))
            .collect();
        if class.len() < 2 {
            continue;
        }
        for a in 0..n_a {
            let reference = oj.predictions.cell(&[a, class[0]])?;
            for &z in &class[1..] {
                worst = worst.max(oj.predictions.cell(&[a, z])?.max_abs_diff(reference)?);
            }
        }
    }
    Ok(worst)
}

/// The three-basis qubit measurement set that determines any qubit state
/// uniquely: up/down, the two real superpositions, and the two imaginary
/// superpositions.
pub fn qubit_reference_povms<R: Real>() -> Vec<Povm<R>> {
    let half_sqrt = (R::one() / crate::real::r64::<R>(2.0)).sqrt();
    let i = crate::real::Cplx::new(R::zero(), R::one());
    let r = crate::real::Cplx::new(half_sqrt, R::zero());
    let plus_i = PureState::new(vec![r, r * i], vec![2]).expect("normalized");
    let minus_i = PureState::new(vec![r, -(r * i)], vec![2]).expect("normalized");
    vec![
        Povm::projective_qubit("z", R::zero()),
        Povm::projective_qubit("x", R::frac_pi_2()),
        Povm::from_projector_states("y", &[plus_i, minus_i]).expect("basis"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::VarSpec;

    fn diagonal_joint(
        states: Vec<PureState<f64>>,
        weights: Vec<f64>,
        povms: &[Povm<f64>],
    ) -> OnticJoint<f64> {
        let nz = states.len();
        let joint = JointTable::from_fn(
            vec![VarSpec::new("Z", nz), VarSpec::new("Psi", nz)],
            |key| if key[0] == key[1] { weights[key[0]] } else { 0.0 },
        )
        .unwrap();
        let predictions = CondTable::from_fn(
            vec![VarSpec::new("A", povms.len()), VarSpec::new("Z", nz)],
            vec![VarSpec::new("X", 2)],
            |key| born(&states[key[1]], &povms[key[0]]).unwrap(),
        )
        .unwrap();
        OnticJoint::new(states, joint, predictions).unwrap()
    }

    #[test]
    fn diagonal_joint_extracts_identity_function() {
        let povms = qubit_reference_povms::<f64>();
        let states = vec![
            PureState::<f64>::up(),
            PureState::<f64>::plus(),
            PureState::<f64>::qubit(1.2),
        ];
        let oj = diagonal_joint(states, vec![0.5, 0.3, 0.2], &povms);
        match check_onticity(&oj, &povms, 1e-9).unwrap() {
            OnticityVerdict::Function { f, degeneracies } => {
                assert_eq!(f, vec![Some(0), Some(1), Some(2)]);
                assert!(degeneracies.is_empty());
            }
            other => panic!("expected function, got {other:?}"),
        }
    }

    #[test]
    fn shared_state_reports_removable_degeneracy() {
        let povms = qubit_reference_povms::<f64>();
        // Two z values carry the same state (index 0 repeated).
        let states = vec![PureState::<f64>::up(), PureState::<f64>::plus()];
        let joint = JointTable::new(
            vec![VarSpec::new("Z", 3), VarSpec::new("Psi", 2)],
            vec![0.4, 0.0, 0.3, 0.0, 0.0, 0.3],
        )
        .unwrap();
        let predictions = CondTable::from_fn(
            vec![VarSpec::new("A", 3), VarSpec::new("Z", 3)],
            vec![VarSpec::new("X", 2)],
            |key| {
                let state = if key[1] == 2 { 1 } else { 0 };
                born(&states[state], &povms[key[0]]).unwrap()
            },
        )
        .unwrap();
        let oj = OnticJoint::new(states, joint, predictions).unwrap();
        match check_onticity(&oj, &povms, 1e-9).unwrap() {
            OnticityVerdict::Function { f, degeneracies } => {
                assert_eq!(f, vec![Some(0), Some(0), Some(1)]);
                assert_eq!(degeneracies, vec![vec![0, 1]]);
                assert!(degeneracy_removal_gap(&oj, &f).unwrap() < 1e-12);
            }
            other => panic!("expected degenerate function, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_joint_yields_witness() {
        let povms = qubit_reference_povms::<f64>();
        // z = 0 carries both |up> and |plus>; predictions forced to |up>.
        let states = vec![PureState::<f64>::up(), PureState::<f64>::plus()];
        let joint = JointTable::new(
            vec![VarSpec::new("Z", 2), VarSpec::new("Psi", 2)],
            vec![0.25, 0.25, 0.5, 0.0],
        )
        .unwrap();
        let predictions = CondTable::from_fn(
            vec![VarSpec::new("A", 3), VarSpec::new("Z", 2)],
            vec![VarSpec::new("X", 2)],
            |key| born(&states[0], &povms[key[0]]).unwrap(),
        )
        .unwrap();
        let oj = OnticJoint::new(states, joint, predictions).unwrap();
        match check_onticity(&oj, &povms, 1e-9).unwrap() {
            OnticityVerdict::Overlap {
                z,
                psi,
                psi_prime,
                witness_a,
                separation,
            } => {
                assert_eq!(z, 0);
                assert_eq!((psi, psi_prime), (0, 1));
                // The up/down basis separates |up> from |plus> at distance 1/2.
                assert_eq!(witness_a, 0);
                assert!((separation - 0.5).abs() < 1e-12);
            }
            other => panic!("expected overlap, got {other:?}"),
        }
    }

    #[test]
    fn prediction_mismatch_detected() {
        let povms = qubit_reference_povms::<f64>();
        let states = vec![PureState::<f64>::up()];
        let joint = JointTable::new(
            vec![VarSpec::new("Z", 1), VarSpec::new("Psi", 1)],
            vec![1.0],
        )
        .unwrap();
        let predictions = CondTable::from_fn(
            vec![VarSpec::new("A", 3), VarSpec::new("Z", 1)],
            vec![VarSpec::new("X", 2)],
            |_| Dist::uniform(2),
        )
        .unwrap();
        let oj = OnticJoint::new(states, joint, predictions).unwrap();
        match check_onticity(&oj, &povms, 1e-9).unwrap() {
            OnticityVerdict::PredictionMismatch { z, a, deviation } => {
                assert_eq!(z, 0);
                assert_eq!(a, 0);
                assert!((deviation - 0.5).abs() < 1e-12);
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn incomplete_povms_rejected() {
        let povms = vec![Povm::<f64>::projective_qubit("z", 0.0)];
        let states = vec![PureState::<f64>::up()];
        let joint = JointTable::new(
            vec![VarSpec::new("Z", 1), VarSpec::new("Psi", 1)],
            vec![1.0],
        )
        .unwrap();
        let predictions = CondTable::from_fn(
            vec![VarSpec::new("A", 1), VarSpec::new("Z", 1)],
            vec![VarSpec::new("X", 2)],
            |_| Dist::point_mass(2, 0),
        )
        .unwrap();
        let oj = OnticJoint::new(states, joint, predictions).unwrap();
        assert!(matches!(
            check_onticity(&oj, &povms, 1e-9).unwrap_err(),
            Error::NotTomographicallyComplete(2, 4)
        ));
    }
}
