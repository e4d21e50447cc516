//! Dense linear feasibility and small LPs via two-phase simplex.
//!
//! The problems solved here are tiny (hundreds of variables at most), so the
//! implementation favours robustness over speed: a dense tableau, Bland's
//! rule (lowest index enters, lowest basic index breaks ratio ties) for
//! guaranteed termination, and explicit residual checks on exit.
//!
//! Feasibility means `A x = b, x >= 0`. Infeasibility is certified by a
//! Farkas vector `y` with `y^T A <= 0` and `y^T b > 0`, extracted from the
//! phase-1 reduced costs and re-verified against the caller's data.

use crate::error::{Error, Result};
use crate::real::{r64, Real};

/// Equality-constrained feasibility problem over nonnegative variables.
#[derive(Debug, Clone)]
pub struct LinearFeasibility<R: Real> {
    n_vars: usize,
    rows: Vec<Vec<R>>,
    rhs: Vec<R>,
}

/// Farkas infeasibility certificate: `y^T A <= 0`, `y^T b > 0`.
#[derive(Debug, Clone)]
pub struct FarkasCertificate<R: Real> {
    pub y: Vec<R>,
    /// max_j (y^T A)_j — should be <= tolerance.
    pub max_column_value: R,
    /// y^T b — should be strictly positive.
    pub witness_value: R,
    pub verified: bool,
}

/// Outcome of a feasibility solve.
#[derive(Debug, Clone)]
pub enum FeasibilityVerdict<R: Real> {
    Feasible {
        x: Vec<R>,
        /// Infinity norm of `A x - b`.
        residual: R,
    },
    Infeasible {
        /// Phase-1 optimum (total artificial mass that cannot be removed).
        infeasibility: R,
        certificate: FarkasCertificate<R>,
    },
}

/// Outcome of minimizing a linear objective over the feasible set.
#[derive(Debug, Clone)]
pub enum LpOutcome<R: Real> {
    Optimal { x: Vec<R>, value: R, residual: R },
    Infeasible { infeasibility: R },
    Unbounded,
}

const MAX_PIVOTS: usize = 200_000;

impl<R: Real> LinearFeasibility<R> {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds the constraint `coeffs . x = rhs`.
    pub fn equality(&mut self, coeffs: Vec<R>, rhs: R) {
        assert_eq!(coeffs.len(), self.n_vars, "constraint arity");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    /// Adds a sparse constraint given as (index, coefficient) pairs.
    pub fn equality_sparse(&mut self, terms: &[(usize, R)], rhs: R) {
        let mut coeffs = vec![R::zero(); self.n_vars];
        for &(i, c) in terms {
            coeffs[i] += c;
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    /// Infinity norm of `A x - b`.
    pub fn residual(&self, x: &[R]) -> R {
        let mut worst = R::zero();
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            let lhs: R = row.iter().zip(x).map(|(&a, &v)| a * v).sum();
            worst = worst.max((lhs - b).abs());
        }
        worst
    }

    /// Phase-1 simplex feasibility test.
    pub fn solve(&self, tol: R) -> Result<FeasibilityVerdict<R>> {
        let mut t = Tableau::start(self)?;
        let optimum = t.run_phase1()?;
        if optimum > tol {
            let certificate = t.farkas_certificate(self, tol);
            return Ok(FeasibilityVerdict::Infeasible {
                infeasibility: optimum,
                certificate,
            });
        }
        let x = t.primal_solution();
        let residual = self.residual(&x);
        if residual > tol {
            return Err(Error::SolverFailure(
                "phase-1 solution violates constraints".into(),
                residual.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(FeasibilityVerdict::Feasible { x, residual })
    }

    /// Minimizes `c . x` subject to the constraints (two-phase simplex).
    pub fn minimize(&self, c: &[R], tol: R) -> Result<LpOutcome<R>> {
        assert_eq!(c.len(), self.n_vars, "objective arity");
        let mut t = Tableau::start(self)?;
        let optimum = t.run_phase1()?;
        if optimum > tol {
            return Ok(LpOutcome::Infeasible {
                infeasibility: optimum,
            });
        }
        if !t.run_phase2(c)? {
            return Ok(LpOutcome::Unbounded);
        }
        let x = t.primal_solution();
        let residual = self.residual(&x);
        if residual > tol {
            return Err(Error::SolverFailure(
                "phase-2 solution violates constraints".into(),
                residual.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let value: R = c.iter().zip(&x).map(|(&ci, &xi)| ci * xi).sum();
        Ok(LpOutcome::Optimal { x, value, residual })
    }
}

/// Dense simplex tableau with explicit artificial variables.
struct Tableau<R: Real> {
    n: usize,
    m: usize,
    /// m rows of n + m columns (structural then artificial), plus rhs.
    rows: Vec<Vec<R>>,
    rhs: Vec<R>,
    /// basis[i] = column index basic in row i.
    basis: Vec<usize>,
    /// Sign applied to caller row i to make the rhs nonnegative.
    row_sign: Vec<R>,
    /// Phase-1 reduced cost row over all n + m columns, and objective value.
    obj: Vec<R>,
    obj_value: R,
    in_phase2: bool,
}

impl<R: Real> Tableau<R> {
    fn start(p: &LinearFeasibility<R>) -> Result<Self> {
        let n = p.n_vars;
        let m = p.rows.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for (row, &b) in p.rows.iter().zip(&p.rhs) {
            let sign = if b < R::zero() { -R::one() } else { R::one() };
            let mut full: Vec<R> = row.iter().map(|&a| a * sign).collect();
            full.extend(std::iter::repeat(R::zero()).take(m));
            rows.push(full);
            rhs.push(b * sign);
            row_sign.push(sign);
        }
        let mut basis = Vec::with_capacity(m);
        for (i, row) in rows.iter_mut().enumerate() {
            row[n + i] = R::one();
            basis.push(n + i);
        }
        // Phase-1 objective: minimize the sum of artificials. Reduced costs
        // r_j = c_B B^{-1} A_j - c_j start as the column sums over rows for
        // structural columns and 0 for the (basic) artificials.
        let mut obj = vec![R::zero(); n + m];
        let mut obj_value = R::zero();
        for (row, &b) in rows.iter().zip(&rhs) {
            for (j, cell) in obj.iter_mut().enumerate().take(n) {
                *cell += row[j];
            }
            obj_value += b;
        }
        Ok(Self {
            n,
            m,
            rows,
            rhs,
            basis,
            row_sign,
            obj,
            obj_value,
            in_phase2: false,
        })
    }

    fn pivot_tol() -> R {
        r64::<R>(1e-9)
    }

    /// Bland's rule: smallest-index column with positive reduced cost.
    fn entering(&self) -> Option<usize> {
        let limit = if self.in_phase2 { self.n } else { self.n + self.m };
        (0..limit).find(|&j| {
            !self.basis.contains(&j) && self.obj[j] > Self::pivot_tol()
        })
    }

    /// Ratio test with Bland tie-breaking on the leaving basic index.
    fn leaving(&self, enter: usize) -> Option<usize> {
        let mut best: Option<(R, usize, usize)> = None; // (ratio, basic index, row)
        for i in 0..self.m {
            let a = self.rows[i][enter];
            if a > Self::pivot_tol() {
                let ratio = self.rhs[i] / a;
                let candidate = (ratio, self.basis[i], i);
                best = Some(match best {
                    None => candidate,
                    Some(cur) => {
                        if candidate.0 < cur.0 - Self::pivot_tol()
                            || ((candidate.0 - cur.0).abs() <= Self::pivot_tol()
                                && candidate.1 < cur.1)
                        {
                            candidate
                        } else {
                            cur
                        }
                    }
                });
            }
        }
        best.map(|(_, _, row)| row)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col];
        let inv = R::one() / pivot;
        for cell in self.rows[row].iter_mut() {
            *cell *= inv;
        }
        self.rhs[row] *= inv;
        let prow = self.rows[row].clone();
        let prhs = self.rhs[row];
        for i in 0..self.m {
            if i != row {
                let factor = self.rows[i][col];
                if factor != R::zero() {
                    for (cell, &p) in self.rows[i].iter_mut().zip(&prow) {
                        *cell -= p * factor;
                    }
                    self.rhs[i] -= prhs * factor;
                }
            }
        }
        let factor = self.obj[col];
        if factor != R::zero() {
            for (cell, &p) in self.obj.iter_mut().zip(&prow) {
                *cell -= p * factor;
            }
            self.obj_value -= prhs * factor;
        }
        self.basis[row] = col;
    }

    fn run_phase1(&mut self) -> Result<R> {
        for _ in 0..MAX_PIVOTS {
            match self.entering() {
                None => return Ok(self.obj_value.max(R::zero())),
                Some(col) => match self.leaving(col) {
                    // Phase-1 objective is bounded below by 0, so an
                    // unbounded ray cannot occur with exact arithmetic.
                    None => {
                        return Err(Error::SolverFailure(
                            "phase-1 ratio test failed".into(),
                            self.obj_value.to_f64().unwrap_or(f64::NAN),
                        ))
                    }
                    Some(row) => self.pivot(row, col),
                },
            }
        }
        Err(Error::SolverFailure(
            "phase-1 pivot limit reached".into(),
            self.obj_value.to_f64().unwrap_or(f64::NAN),
        ))
    }

    /// Removes artificials from the basis where possible, installs the
    /// phase-2 objective, and optimizes. Returns false on unboundedness.
    fn run_phase2(&mut self, c: &[R]) -> Result<bool> {
        for i in 0..self.m {
            if self.basis[i] >= self.n {
                if let Some(col) = (0..self.n)
                    .find(|&j| self.rows[i][j].abs() > Self::pivot_tol())
                {
                    self.pivot(i, col);
                }
                // A fully zero row is a redundant constraint; its artificial
                // stays basic at value zero and never re-enters.
            }
        }
        // Reduced costs for minimizing c.x: r_j = c_B B^{-1} A_j - c_j.
        let mut obj = vec![R::zero(); self.n + self.m];
        let mut value = R::zero();
        for j in 0..self.n {
            obj[j] = -c[j];
        }
        for i in 0..self.m {
            let b = self.basis[i];
            let cb = if b < self.n { c[b] } else { R::zero() };
            if cb != R::zero() {
                for j in 0..self.n + self.m {
                    obj[j] += self.rows[i][j] * cb;
                }
                value += self.rhs[i] * cb;
            }
        }
        for (j, cell) in obj.iter_mut().enumerate() {
            if self.basis.contains(&j) {
                *cell = R::zero();
            }
        }
        self.obj = obj;
        self.obj_value = value;
        self.in_phase2 = true;

        for _ in 0..MAX_PIVOTS {
            match self.entering() {
                None => return Ok(true),
                Some(col) => match self.leaving(col) {
                    None => return Ok(false),
                    Some(row) => self.pivot(row, col),
                },
            }
        }
        Err(Error::SolverFailure(
            "phase-2 pivot limit reached".into(),
            self.obj_value.to_f64().unwrap_or(f64::NAN),
        ))
    }

    fn primal_solution(&self) -> Vec<R> {
        let mut x = vec![R::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].max(R::zero());
            }
        }
        x
    }

    /// Farkas vector from the phase-1 reduced costs: the multiplier for
    /// internal row i is r_{artificial i} + 1; caller rows get the sign the
    /// tableau applied undone.
    fn farkas_certificate(&self, p: &LinearFeasibility<R>, tol: R) -> FarkasCertificate<R> {
        let mut y = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let internal = self.obj[self.n + i] + R::one();
            y.push(internal * self.row_sign[i]);
        }
        let mut max_column_value = R::zero();
        for j in 0..p.n_vars {
            let col: R = p.rows.iter().zip(&y).map(|(row, &yi)| row[j] * yi).sum();
            max_column_value = max_column_value.max(col);
        }
        let witness_value: R = p.rhs.iter().zip(&y).map(|(&b, &yi)| b * yi).sum();
        let verified = max_column_value <= tol && witness_value > tol;
        FarkasCertificate {
            y,
            max_column_value,
            witness_value,
            verified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_simplex_point() {
        // x0 + x1 = 1, x0 - x1 = 0 -> x = (1/2, 1/2)
        let mut p = LinearFeasibility::<f64>::new(2);
        p.equality(vec![1.0, 1.0], 1.0);
        p.equality(vec![1.0, -1.0], 0.0);
        match p.solve(1e-7).unwrap() {
            FeasibilityVerdict::Feasible { x, residual } => {
                assert!((x[0] - 0.5).abs() < 1e-9);
                assert!((x[1] - 0.5).abs() < 1e-9);
                assert!(residual < 1e-9);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        // x0 + x1 = 1 and x0 + x1 = 2 cannot both hold.
        let mut p = LinearFeasibility::<f64>::new(2);
        p.equality(vec![1.0, 1.0], 1.0);
        p.equality(vec![1.0, 1.0], 2.0);
        match p.solve(1e-7).unwrap() {
            FeasibilityVerdict::Infeasible {
                infeasibility,
                certificate,
            } => {
                assert!(infeasibility > 0.4);
                assert!(certificate.verified);
                assert!(certificate.witness_value > 1e-7);
                assert!(certificate.max_column_value <= 1e-7);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn negativity_requirement_is_infeasible() {
        // x0 = -1 has no nonnegative solution.
        let mut p = LinearFeasibility::<f64>::new(1);
        p.equality(vec![1.0], -1.0);
        assert!(matches!(
            p.solve(1e-7).unwrap(),
            FeasibilityVerdict::Infeasible { .. }
        ));
    }

    #[test]
    fn redundant_constraints_are_tolerated() {
        let mut p = LinearFeasibility::<f64>::new(2);
        p.equality(vec![1.0, 1.0], 1.0);
        p.equality(vec![2.0, 2.0], 2.0);
        assert!(matches!(
            p.solve(1e-7).unwrap(),
            FeasibilityVerdict::Feasible { .. }
        ));
    }

    #[test]
    fn minimize_linear_objective() {
        // min x0 s.t. x0 + x1 = 1 -> 0 at (0,1); max x0 (min -x0) -> 1.
        let mut p = LinearFeasibility::<f64>::new(2);
        p.equality(vec![1.0, 1.0], 1.0);
        match p.minimize(&[1.0, 0.0], 1e-7).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!(value.abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
        match p.minimize(&[-1.0, 0.0], 1e-7).unwrap() {
            LpOutcome::Optimal { x, value, .. } => {
                assert!((value + 1.0).abs() < 1e-9);
                assert!((x[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        // min -x0 with x0 - x1 = 0 is unbounded below.
        let mut p = LinearFeasibility::<f64>::new(2);
        p.equality(vec![1.0, -1.0], 0.0);
        assert!(matches!(
            p.minimize(&[-1.0, 0.0], 1e-7).unwrap(),
            LpOutcome::Unbounded
        ));
    }

    #[test]
    fn sparse_rows_accumulate() {
        let mut p = LinearFeasibility::<f64>::new(3);
        p.equality_sparse(&[(0, 1.0), (2, 1.0), (0, 1.0)], 2.0);
        p.equality_sparse(&[(1, 1.0)], 0.25);
        match p.solve(1e-7).unwrap() {
            FeasibilityVerdict::Feasible { x, .. } => {
                assert!((2.0 * x[0] + x[2] - 2.0).abs() < 1e-9);
                assert!((x[1] - 0.25).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
