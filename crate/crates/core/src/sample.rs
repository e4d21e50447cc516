//! Seeded generators for property suites and the self-test harness.
//!
//! All randomness flows through a caller-supplied ChaCha generator so every
//! suite is reproducible from a single `u64` seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::chained::{quantum_chain_table, ChainedScenario};
use crate::dist::Dist;
use crate::error::Result;
use crate::model::{enumerate_strategies, DeterministicStrategy, Extension, LocalModel};
use crate::onticity::{qubit_reference_povms, OnticJoint};
use crate::quantum::{born, Povm, PureState};
use crate::real::{r64, Cplx, Real};
use crate::table::{CondTable, JointTable, VarSpec};

/// The crate's deterministic generator.
pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// A strictly positive uniform draw in (0, 1].
fn positive_unit(rng: &mut ChaCha12Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Random distribution over `n` outcomes (flat Dirichlet via exponential
/// spacings).
pub fn dist<R: Real>(rng: &mut ChaCha12Rng, n: usize) -> Dist<R> {
    let weights: Vec<R> = (0..n)
        .map(|_| r64::<R>(-positive_unit(rng).ln()))
        .collect();
    Dist::from_weights(&weights).expect("positive weights")
}

/// Random joint table over the given variables.
pub fn joint_table<R: Real>(rng: &mut ChaCha12Rng, vars: Vec<VarSpec>) -> JointTable<R> {
    let total: usize = vars.iter().map(|v| v.range).product();
    let d = dist::<R>(rng, total);
    JointTable::new(vars, d.probs().to_vec()).expect("normalized by construction")
}

/// Haar-ish random pure state (normalized complex Gaussian amplitudes).
pub fn pure_state<R: Real>(rng: &mut ChaCha12Rng, dim: usize) -> PureState<R> {
    let amps: Vec<Cplx<R>> = (0..dim)
        .map(|_| {
            let (re, im) = gaussian_pair(rng);
            Cplx::new(r64::<R>(re), r64::<R>(im))
        })
        .collect();
    PureState::normalized(amps, vec![dim]).expect("nonzero with probability one")
}

fn gaussian_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    let u1 = positive_unit(rng);
    let u2 = rng.gen::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Uniformly random deterministic strategy.
pub fn strategy(rng: &mut ChaCha12Rng, n: usize) -> DeterministicStrategy {
    DeterministicStrategy {
        x_of_a: (0..n).map(|_| rng.gen_range(0..2u8)).collect(),
        y_of_b: (0..n).map(|_| rng.gen_range(0..2u8)).collect(),
    }
}

/// Random point of the local polytope: a sparse mixture of deterministic
/// strategies, returned with its induced table.
pub fn local_mixture<R: Real>(
    rng: &mut ChaCha12Rng,
    n: usize,
    support: usize,
) -> Result<(LocalModel<R>, CondTable<R>)> {
    let count = 1usize << (2 * n);
    let mut weights = vec![R::zero(); count];
    let picks = support.min(count);
    let d = dist::<R>(rng, picks);
    for w in d.iter() {
        let index = rng.gen_range(0..count);
        weights[index] += w;
    }
    let model = LocalModel::new(Dist::from_weights(&weights)?, n)?;
    let table = model.induced_table(n)?;
    Ok((model, table))
}

/// Random no-signalling extension over the chained scenario: each parameter
/// value carries either a deterministic strategy's table or the quantum
/// table, so the no-signalling premises hold by construction.
pub fn no_signalling_extension<R: Real>(
    rng: &mut ChaCha12Rng,
    n: usize,
    n_strategy_values: usize,
    include_quantum_value: bool,
) -> Result<Extension<R>> {
    let scenario = ChainedScenario::new(n)?;
    let strategies = enumerate_strategies(n)?;
    let mut cells_per_z: Vec<CondTable<R>> = Vec::new();
    for _ in 0..n_strategy_values {
        let index = rng.gen_range(0..strategies.len());
        cells_per_z.push(strategies[index].table(n)?);
    }
    if include_quantum_value {
        cells_per_z.push(quantum_chain_table::<R>(n)?);
    }
    let nz = cells_per_z.len();
    let pz = dist::<R>(rng, nz);
    let (cond, tgt) = scenario.table_vars();
    let mut conditioned = cond;
    conditioned.push(VarSpec::new("Z", nz));
    let table = CondTable::from_fn(conditioned, tgt, |key| {
        cells_per_z[key[2]]
            .cell(&[key[0], key[1]])
            .expect("full support")
            .clone()
    })?;
    Extension::new(pz, table)
}

/// A diagonal (ontic) parameter-state joint over random qubit states, with
/// Born-rule predictions in the reference bases.
pub fn diagonal_ontic_joint<R: Real>(
    rng: &mut ChaCha12Rng,
    count: usize,
) -> Result<(OnticJoint<R>, Vec<Povm<R>>)> {
    let povms = qubit_reference_povms::<R>();
    let states: Vec<PureState<R>> = (0..count).map(|_| pure_state(rng, 2)).collect();
    let weights = dist::<R>(rng, count);
    let joint = JointTable::from_fn(
        vec![VarSpec::new("Z", count), VarSpec::new("Psi", count)],
        |key| {
            if key[0] == key[1] {
                weights.prob(key[0])
            } else {
                R::zero()
            }
        },
    )?;
    let predictions = CondTable::from_fn(
        vec![VarSpec::new("A", povms.len()), VarSpec::new("Z", count)],
        vec![VarSpec::new("X", 2)],
        |key| born(&states[key[1]], &povms[key[0]]).expect("qubit born"),
    )?;
    Ok((OnticJoint::new(states, joint, predictions)?, povms))
}

/// An epistemic joint: one parameter value carries two visibly distinct
/// states (overlap), the rest are diagonal; predictions follow the first
/// state of the overlapping pair.
pub fn epistemic_ontic_joint<R: Real>(
    rng: &mut ChaCha12Rng,
    count: usize,
) -> Result<(OnticJoint<R>, Vec<Povm<R>>)> {
    let povms = qubit_reference_povms::<R>();
    let n_states = count + 1;
    let mut states: Vec<PureState<R>> = Vec::with_capacity(n_states);
    states.push(pure_state(rng, 2));
    // Partner state kept clearly distinct from the first.
    loop {
        let candidate = pure_state::<R>(rng, 2);
        if crate::quantum::fidelity(&states[0], &candidate)? < r64::<R>(0.95) {
            states.push(candidate);
            break;
        }
    }
    for _ in 2..n_states {
        states.push(pure_state(rng, 2));
    }
    let weights = dist::<R>(rng, n_states);
    // z = 0 carries states 0 and 1; z >= 1 carries state z + 1.
    let joint = JointTable::from_fn(
        vec![VarSpec::new("Z", count), VarSpec::new("Psi", n_states)],
        |key| {
            let (z, psi) = (key[0], key[1]);
            if z == 0 && psi <= 1 {
                // The overlapping value splits its mass evenly over the pair.
                (weights.prob(0) + weights.prob(1)) * r64::<R>(0.5)
            } else if z >= 1 && psi == z + 1 {
                weights.prob(psi)
            } else {
                R::zero()
            }
        },
    )?;
    let predictions = CondTable::from_fn(
        vec![VarSpec::new("A", povms.len()), VarSpec::new("Z", count)],
        vec![VarSpec::new("X", 2)],
        |key| {
            let state = if key[1] == 0 { 0 } else { key[1] + 1 };
            born(&states[state], &povms[key[0]]).expect("qubit born")
        },
    )?;
    Ok((OnticJoint::new(states, joint, predictions)?, povms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a: Dist<f64> = dist(&mut rng(7), 5);
        let b: Dist<f64> = dist(&mut rng(7), 5);
        assert_eq!(a.probs(), b.probs());
        let s1 = pure_state::<f64>(&mut rng(9), 4);
        let s2 = pure_state::<f64>(&mut rng(9), 4);
        assert_eq!(s1.amps(), s2.amps());
    }

    #[test]
    fn sampled_extensions_are_no_signalling() {
        let mut r = rng(11);
        for n in 1..=3 {
            let ext: Extension<f64> =
                no_signalling_extension(&mut r, n, 3, true).unwrap();
            assert!(ext.no_signalling(1e-9).unwrap().passes, "N = {n}");
        }
    }

    #[test]
    fn local_mixtures_stay_in_polytope() {
        let mut r = rng(13);
        let (_, table) = local_mixture::<f64>(&mut r, 2, 4).unwrap();
        match crate::model::lhv_membership(&table, 2, 1e-7).unwrap() {
            crate::model::LhvVerdict::Feasible { residual, .. } => {
                assert!(residual <= 1e-7);
            }
            other => panic!("mixture left the polytope: {other:?}"),
        }
    }

    #[test]
    fn ontic_generators_shape() {
        let mut r = rng(17);
        let (diag, povms) = diagonal_ontic_joint::<f64>(&mut r, 4).unwrap();
        assert_eq!(diag.z_count(), 4);
        assert_eq!(povms.len(), 3);
        let (epi, _) = epistemic_ontic_joint::<f64>(&mut r, 4).unwrap();
        assert_eq!(epi.supported_states(0).len(), 2);
    }
}
