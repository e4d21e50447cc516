//! The chained correlation measure `I_N` and the quantum strategy
//! achieving `2N sin^2(pi/4N)`.
//!
//! Settings live on a cycle: one side uses even labels `{0, 2, .., 2N-2}`,
//! the other odd labels `{1, 3, .., 2N-1}`. `I_N` sums the mismatch
//! probability over the `2N - 1` neighbouring pairs (`|a - b| = 1`) and the
//! match probability on the wrap-around pair `(a, b) = (0, 2N-1)`; strong
//! correlations give small values. Conditional tables index settings by
//! position, so column `i` of the even side carries label `2i` and column
//! `j` of the odd side label `2j + 1`.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::quantum::{born, Povm, PureState};
use crate::real::{r64, rn, Real};
use crate::table::{CondTable, VarSpec};

/// The bipartite measurement layout for a given `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainedScenario {
    pub n: usize,
}

impl ChainedScenario {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("chained scenario needs N >= 1".into()));
        }
        Ok(Self { n })
    }

    /// Even setting labels `{0, 2, .., 2N-2}`.
    pub fn a_labels(&self) -> Vec<usize> {
        (0..self.n).map(|i| 2 * i).collect()
    }

    /// Odd setting labels `{1, 3, .., 2N-1}`.
    pub fn b_labels(&self) -> Vec<usize> {
        (0..self.n).map(|j| 2 * j + 1).collect()
    }

    pub fn a_label(&self, index: usize) -> usize {
        2 * index
    }

    pub fn b_label(&self, index: usize) -> usize {
        2 * index + 1
    }

    /// Measurement angle of the outcome-0 projector for label `l`:
    /// `theta_l = l pi / 2N` in the `|theta>` parameterization.
    pub fn angle<R: Real>(&self, label: usize) -> R {
        rn::<R>(label) * R::pi() / rn::<R>(2 * self.n)
    }

    /// Neighbouring index pairs `(i, j)` with `|a_i - b_j| = 1`.
    pub fn neighbour_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(2 * self.n - 1);
        for i in 0..self.n {
            if i > 0 {
                pairs.push((i, i - 1)); // b = a - 1
            }
            pairs.push((i, i)); // b = a + 1
        }
        pairs
    }

    /// The wrap-around index pair for `(a, b) = (0, 2N-1)`.
    pub fn wrap_pair(&self) -> (usize, usize) {
        (0, self.n - 1)
    }

    /// Variable specs for a conditional table over this scenario.
    pub fn table_vars(&self) -> (Vec<VarSpec>, Vec<VarSpec>) {
        (
            vec![VarSpec::new("A", self.n), VarSpec::new("B", self.n)],
            vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
        )
    }

    /// Checks that `table` is shaped for this scenario.
    pub fn check_table<R: Real>(&self, table: &CondTable<R>) -> Result<()> {
        let cond: Vec<usize> = table.conditioned().iter().map(|v| v.range).collect();
        let tgt: Vec<usize> = table.targets().iter().map(|v| v.range).collect();
        if cond != vec![self.n, self.n] || tgt != vec![2, 2] {
            return Err(Error::ShapeMismatch(format!(
                "expected settings [{n}, {n}] with binary outcomes, got {cond:?} / {tgt:?}",
                n = self.n
            )));
        }
        if !table.has_full_support() {
            return Err(Error::ShapeMismatch("table missing setting cells".into()));
        }
        Ok(())
    }
}

/// The projective qubit measurements of the chained strategy: outcome 0 of
/// setting label `l` projects onto `|l pi / 2N>`.
pub fn chained_povms<R: Real>(n: usize) -> Result<(Vec<Povm<R>>, Vec<Povm<R>>)> {
    let scenario = ChainedScenario::new(n)?;
    let a = scenario
        .a_labels()
        .into_iter()
        .map(|l| Povm::projective_qubit(format!("a{l}"), scenario.angle::<R>(l)))
        .collect();
    let b = scenario
        .b_labels()
        .into_iter()
        .map(|l| Povm::projective_qubit(format!("b{l}"), scenario.angle::<R>(l)))
        .collect();
    Ok((a, b))
}

/// `P(X, Y | a, b)` on the maximally entangled pair, computed through the
/// Born rule on the actual projectors.
pub fn quantum_chain_table<R: Real>(n: usize) -> Result<CondTable<R>> {
    let scenario = ChainedScenario::new(n)?;
    let bell = PureState::bell_pair();
    let (povms_a, povms_b) = chained_povms::<R>(n)?;
    let (cond, tgt) = scenario.table_vars();
    CondTable::from_fn(cond, tgt, |key| {
        let joint = povms_a[key[0]]
            .tensor(&povms_b[key[1]])
            .expect("qubit tensor");
        born(&bell, &joint).expect("born on matching dimensions")
    })
}

/// The same table from the closed-form cell values
/// `P(x, y | a, b) = (1 + (-1)^(x+y) cos(theta_a - theta_b)) / 4`,
/// kept as an independent route for cross-checking the Born path.
pub fn quantum_chain_table_closed_form<R: Real>(n: usize) -> Result<CondTable<R>> {
    let scenario = ChainedScenario::new(n)?;
    let (cond, tgt) = scenario.table_vars();
    CondTable::from_fn(cond, tgt, |key| {
        let delta = scenario.angle::<R>(scenario.a_label(key[0]))
            - scenario.angle::<R>(scenario.b_label(key[1]));
        let c = delta.cos();
        let quarter = r64::<R>(0.25);
        let agree = quarter * (R::one() + c);
        let differ = quarter * (R::one() - c);
        Dist::new(vec![agree, differ, differ, agree]).expect("closed-form cell")
    })
}

/// Mismatch probability `P(X != Y)` of a cell indexed `(i, j)`.
fn cell_mismatch<R: Real>(table: &CondTable<R>, i: usize, j: usize) -> Result<R> {
    let cell = table.cell(&[i, j])?;
    Ok(cell.prob(1) + cell.prob(2))
}

/// The chained correlation measure
/// `I_N = P(X = Y | 0, 2N-1) + sum_{|a-b|=1} P(X != Y | a, b)`.
pub fn correlation_in<R: Real>(table: &CondTable<R>, n: usize) -> Result<R> {
    let scenario = ChainedScenario::new(n)?;
    scenario.check_table(table)?;
    let mut total = R::zero();
    for (i, j) in scenario.neighbour_pairs() {
        total += cell_mismatch(table, i, j)?;
    }
    let (wi, wj) = scenario.wrap_pair();
    total += R::one() - cell_mismatch(table, wi, wj)?;
    Ok(total)
}

/// Closed-form quantum value `2N sin^2(pi / 4N)`.
pub fn quantum_in_value<R: Real>(n: usize) -> R {
    let s = (R::pi() / rn::<R>(4 * n)).sin();
    rn::<R>(2 * n) * s * s
}

/// The upper bound `pi^2 / 8N` on the quantum value.
pub fn quantum_in_bound<R: Real>(n: usize) -> R {
    R::pi() * R::pi() / rn::<R>(8 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_layout() {
        let s = ChainedScenario::new(3).unwrap();
        assert_eq!(s.a_labels(), vec![0, 2, 4]);
        assert_eq!(s.b_labels(), vec![1, 3, 5]);
        assert_eq!(s.neighbour_pairs().len(), 5);
        assert_eq!(s.wrap_pair(), (0, 2));
        assert!(ChainedScenario::new(0).is_err());
    }

    #[test]
    fn povms_at_n1_are_up_down_basis() {
        let (a, _) = chained_povms::<f64>(1).unwrap();
        assert!((a[0].element(0)[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(a[0].is_projective());
    }

    #[test]
    fn povm_at_n2_b1_projects_at_quarter_pi() {
        // Outcome-0 projector of b = 1 at N = 2 is |pi/4><pi/4|.
        let (_, b) = chained_povms::<f64>(2).unwrap();
        let theta = std::f64::consts::FRAC_PI_4;
        let expect = PureState::<f64>::qubit(theta).projector();
        let defect: f64 = b[0]
            .element(0)
            .iter()
            .zip(expect.iter())
            .map(|(x, y)| (*x - *y).norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-15);
    }

    #[test]
    fn born_and_closed_form_tables_agree() {
        for n in [1, 2, 3, 5] {
            let born_path = quantum_chain_table::<f64>(n).unwrap();
            let closed = quantum_chain_table_closed_form::<f64>(n).unwrap();
            assert!(born_path.max_abs_diff(&closed).unwrap() < 1e-13, "N = {n}");
        }
    }

    #[test]
    fn quantum_cell_n2_mismatch_is_sin_squared_eighth_pi() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        let mismatch = cell_mismatch(&t, 0, 0).unwrap(); // (a, b) = (0, 1)
        assert!((mismatch - std::f64::consts::FRAC_PI_8.sin().powi(2)).abs() < 1e-13);
        // (a, b) = (0, 3): angle difference 3pi/8, match probability
        // cos^2(3pi/8) = sin^2(pi/8).
        let cell = t.cell(&[0, 1]).unwrap();
        let agree = cell.prob(0) + cell.prob(3);
        assert!((agree - std::f64::consts::FRAC_PI_8.sin().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn single_party_marginals_are_uniform() {
        let t = quantum_chain_table::<f64>(3).unwrap();
        for key in t.defined_support() {
            let cell = &t.cells()[key];
            let px0 = cell.prob(0) + cell.prob(1);
            let py0 = cell.prob(0) + cell.prob(2);
            assert!((px0 - 0.5).abs() < 1e-13);
            assert!((py0 - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn chsh_anchor_two_minus_sqrt_two() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        let i2 = correlation_in(&t, 2).unwrap();
        assert!((i2 - (2.0 - 2.0f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn perfectly_correlated_table_scores_one() {
        // X = Y always: only the wrap term contributes.
        let s = ChainedScenario::new(4).unwrap();
        let (cond, tgt) = s.table_vars();
        let t: CondTable<f64> = CondTable::from_fn(cond, tgt, |_| {
            Dist::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap()
        })
        .unwrap();
        assert!((correlation_in(&t, 4).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_value_and_bound() {
        for n in 2..=16 {
            let v = quantum_in_value::<f64>(n);
            let t = quantum_chain_table::<f64>(n).unwrap();
            assert!((correlation_in(&t, n).unwrap() - v).abs() < 1e-12);
            assert!(v <= quantum_in_bound::<f64>(n));
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        assert!(correlation_in(&t, 3).is_err());
    }
}
