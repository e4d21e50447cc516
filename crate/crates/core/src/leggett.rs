//! The Leggett outcome rules and their exclusion by the predictive-power
//! bound.
//!
//! Each particle carries a unit 3-vector; a projective spin measurement
//! along direction `a` yields outcome 0 with probability `(1 + a.u)/2`.
//! On the maximally entangled pair quantum theory predicts flat single-side
//! marginals, so any carried vector not orthogonal to the measurement gives
//! the model a predictive advantage `<|a.u|>/2` over quantum theory. The
//! chained bound caps that advantage by `N sin^2(pi/4N) -> 0`, so for any
//! positive advantage some `N` certifies exclusion.

use std::collections::BTreeMap;

use nalgebra::Vector3;

use crate::chained::{quantum_in_value, ChainedScenario};
use crate::dist::{distance_from_uniform, Dist};
use crate::error::{Error, Result};
use crate::model::Extension;
use crate::real::{r64, rn, Real};
use crate::table::{CondTable, VarSpec};

/// The pair of carried unit vectors `(u, v)` making up one hidden-parameter
/// value.
#[derive(Debug, Clone, PartialEq)]
pub struct LeggettParams<R: Real> {
    pub u: Vector3<R>,
    pub v: Vector3<R>,
}

fn check_unit<R: Real>(v: &Vector3<R>, tol: R) -> Result<()> {
    use num_traits::ToPrimitive;
    let norm = v.norm();
    if (norm - R::one()).abs() > tol {
        return Err(Error::NotUnitVector(norm.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

impl<R: Real> LeggettParams<R> {
    pub fn new(u: Vector3<R>, v: Vector3<R>) -> Result<Self> {
        let tol = crate::real::scaled_tol::<R>(1e-12);
        check_unit(&u, tol)?;
        check_unit(&v, tol)?;
        Ok(Self { u, v })
    }
}

/// Outcome distribution `P(x) = (1 + (-1)^x dir.carried)/2` for a spin
/// measurement along `dir` on a particle carrying `carried`.
pub fn leggett_marginal<R: Real>(
    dir: &Vector3<R>,
    carried: &Vector3<R>,
) -> Result<Dist<R>> {
    let tol = crate::real::scaled_tol::<R>(1e-9);
    check_unit(dir, tol)?;
    check_unit(carried, tol)?;
    let dot = dir.dot(carried);
    let half = r64::<R>(0.5);
    Dist::new(vec![half * (R::one() + dot), half * (R::one() - dot)])
}

/// Bloch vector of the chained measurement with setting label `l`:
/// the outcome-0 projector of `|theta_l>` points along
/// `(sin theta_l, 0, cos theta_l)` with `theta_l = l pi / 2N`.
pub fn measurement_direction<R: Real>(label: usize, n: usize) -> Vector3<R> {
    let theta = rn::<R>(label) * R::pi() / rn::<R>(2 * n);
    Vector3::new(theta.sin(), R::zero(), theta.cos())
}

/// Fibonacci sphere lattice: `count` near-uniform points, no poles.
pub fn fibonacci_sphere<R: Real>(count: usize) -> Vec<Vector3<R>> {
    let golden = R::pi() * (r64::<R>(3.0) - r64::<R>(5.0).sqrt());
    (0..count)
        .map(|i| {
            let fi = rn::<R>(i);
            let z = R::one() - (fi + r64::<R>(0.5)) * r64::<R>(2.0) / rn::<R>(count);
            let radius = (R::one() - z * z).max(R::zero()).sqrt();
            let phi = golden * fi;
            Vector3::new(radius * phi.cos(), radius * phi.sin(), z)
        })
        .collect()
}

/// Hidden-parameter grid: Fibonacci points for `u`, with `v = -u`
/// (the carried vectors of a singlet-like pair; the exclusion argument only
/// uses `u`).
pub fn leggett_grid<R: Real>(count: usize) -> Vec<LeggettParams<R>> {
    fibonacci_sphere::<R>(count)
        .into_iter()
        .map(|u| LeggettParams { v: -u, u })
        .collect()
}

/// The unique two-outcome joint with the given marginals maximizing the
/// anticorrelation `P(X != Y)` (the lower Frechet bound on agreement).
pub fn max_anticorrelated_joint<R: Real>(px: &Dist<R>, py: &Dist<R>) -> Result<Dist<R>> {
    if px.len() != 2 || py.len() != 2 {
        return Err(Error::OutcomeMismatch(px.len(), py.len()));
    }
    let p = px.prob(0);
    let q = py.prob(0);
    let p00 = (p + q - R::one()).max(R::zero());
    let p11 = (R::one() - p - q).max(R::zero());
    let p01 = p - p00;
    let p10 = q - p00;
    Dist::new(vec![p00, p01, p10, p11])
}

/// Builds the model's predictions over the chained scenario as an
/// [`Extension`]: single-side marginals follow the outcome rules; joint
/// cells use the max-anticorrelation completion (the exclusion argument is
/// marginal-only, so the completion choice is free but fixed for
/// reproducibility).
pub fn leggett_extension<R: Real>(
    n: usize,
    grid: &[LeggettParams<R>],
    pz: &Dist<R>,
) -> Result<Extension<R>> {
    if pz.len() != grid.len() {
        return Err(Error::RangeMismatch(pz.len(), grid.len()));
    }
    let scenario = ChainedScenario::new(n)?;
    let a_dirs: Vec<Vector3<R>> = scenario
        .a_labels()
        .into_iter()
        .map(|l| measurement_direction::<R>(l, n))
        .collect();
    let b_dirs: Vec<Vector3<R>> = scenario
        .b_labels()
        .into_iter()
        .map(|l| measurement_direction::<R>(l, n))
        .collect();
    let mut cells = BTreeMap::new();
    for (ai, a_dir) in a_dirs.iter().enumerate() {
        for (bi, b_dir) in b_dirs.iter().enumerate() {
            for (z, params) in grid.iter().enumerate() {
                let px = leggett_marginal(a_dir, &params.u)?;
                let py = leggett_marginal(b_dir, &params.v)?;
                cells.insert(vec![ai, bi, z], max_anticorrelated_joint(&px, &py)?);
            }
        }
    }
    let table = CondTable::new(
        vec![
            VarSpec::new("A", n),
            VarSpec::new("B", n),
            VarSpec::new("Z", grid.len()),
        ],
        vec![VarSpec::new("X", 2), VarSpec::new("Y", 2)],
        cells,
    )?;
    Extension::new(pz.clone(), table)
}

/// One row of the exclusion scan.
#[derive(Debug, Clone)]
pub struct ExclusionRow<R: Real> {
    pub n: usize,
    pub a_index: usize,
    /// `<D(P_{X|az}, uniform)>_z = <|a.u|>_z / 2`.
    pub gap: R,
    /// `I_N / 2` of the quantum strategy at this `N`.
    pub half_in: R,
    pub excluded: bool,
}

/// Full scan output.
#[derive(Debug, Clone)]
pub struct ExclusionReport<R: Real> {
    pub rows: Vec<ExclusionRow<R>>,
    /// Smallest `N` at which some setting certifies exclusion.
    pub first_excluded_n: Option<usize>,
}

/// Scans `N = 1..=n_max`, comparing each first-side setting's predictive
/// advantage against the quantum ceiling `I_N / 2`.
pub fn leggett_exclusion<R: Real>(
    n_max: usize,
    grid: &[LeggettParams<R>],
    pz: &Dist<R>,
) -> Result<ExclusionReport<R>> {
    if pz.len() != grid.len() {
        return Err(Error::RangeMismatch(pz.len(), grid.len()));
    }
    let half = r64::<R>(0.5);
    let mut rows = Vec::new();
    let mut first_excluded_n = None;
    for n in 1..=n_max {
        let scenario = ChainedScenario::new(n)?;
        let half_in = quantum_in_value::<R>(n) * half;
        for (ai, label) in scenario.a_labels().into_iter().enumerate() {
            let dir = measurement_direction::<R>(label, n);
            let mut gap = R::zero();
            for (params, w) in grid.iter().zip(pz.iter()) {
                gap += w * dir.dot(&params.u).abs() * half;
            }
            let excluded = gap > half_in;
            if excluded && first_excluded_n.is_none() {
                first_excluded_n = Some(n);
            }
            rows.push(ExclusionRow {
                n,
                a_index: ai,
                gap,
                half_in,
                excluded,
            });
        }
    }
    Ok(ExclusionReport {
        rows,
        first_excluded_n,
    })
}

/// The same advantage computed through explicit variational distances on
/// the extension's cells (oracle route for the dot-product formula).
pub fn gap_via_distance<R: Real>(
    ext: &Extension<R>,
    a_index: usize,
) -> Result<R> {
    let mut gap = R::zero();
    for (z, w) in ext.pz().iter().enumerate() {
        gap += w * distance_from_uniform(&ext.x_given(a_index, 0, z)?);
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit<R: Real>(x: f64, y: f64, z: f64) -> Vector3<R> {
        let v = Vector3::new(r64::<R>(x), r64::<R>(y), r64::<R>(z));
        v / v.norm()
    }

    #[test]
    fn marginal_extremes_and_interior() {
        let u = unit::<f64>(0.0, 0.0, 1.0);
        let perp = unit::<f64>(1.0, 0.0, 0.0);
        let d = leggett_marginal(&perp, &u).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);
        let aligned = leggett_marginal(&u, &u).unwrap();
        assert!((aligned.prob(0) - 1.0).abs() < 1e-15);
        // a.u = 1/2 -> (3/4, 1/4).
        let tilted = unit::<f64>((3.0f64).sqrt() / 2.0, 0.0, 0.5);
        let d = leggett_marginal(&u, &tilted).unwrap();
        assert!((d.prob(0) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn marginal_rejects_non_unit() {
        let bad = Vector3::new(1.0, 1.0, 0.0);
        let u = unit::<f64>(0.0, 0.0, 1.0);
        assert!(matches!(
            leggett_marginal(&bad, &u).unwrap_err(),
            Error::NotUnitVector(_)
        ));
    }

    #[test]
    fn fibonacci_points_are_unit_and_balanced() {
        let pts = fibonacci_sphere::<f64>(256);
        assert_eq!(pts.len(), 256);
        let mut mean = Vector3::zeros();
        for p in &pts {
            assert!((p.norm() - 1.0).abs() < 1e-12);
            mean += p;
        }
        mean /= 256.0;
        assert!(mean.norm() < 0.02, "lattice mean {mean:?}");
    }

    #[test]
    fn extension_from_orthogonal_point_mass_is_uniform() {
        // u perpendicular to the whole measurement plane: every marginal
        // flat.
        let grid = vec![LeggettParams::new(
            unit::<f64>(0.0, 1.0, 0.0),
            unit::<f64>(0.0, -1.0, 0.0),
        )
        .unwrap()];
        let ext = leggett_extension(3, &grid, &Dist::uniform(1)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let px = ext.x_given(a, b, 0).unwrap();
                assert!((px.prob(0) - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extension_from_aligned_point_mass_is_deterministic_at_anchor() {
        // u along the a = 0 direction: P_{X|a0,z} = (1, 0).
        let grid =
            vec![LeggettParams::new(unit::<f64>(0.0, 0.0, 1.0), unit::<f64>(0.0, 0.0, -1.0))
                .unwrap()];
        let ext = leggett_extension(2, &grid, &Dist::uniform(1)).unwrap();
        let px = ext.x_given(0, 0, 0).unwrap();
        assert!((px.prob(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leggett_extension_is_no_signalling() {
        let grid = leggett_grid::<f64>(16);
        let pz = Dist::uniform(16);
        let ext = leggett_extension(2, &grid, &pz).unwrap();
        assert!(ext.no_signalling(1e-9).unwrap().passes);
    }

    #[test]
    fn uniform_grid_averages_toward_uniform_marginals() {
        let grid = leggett_grid::<f64>(256);
        let pz = Dist::uniform(256);
        let ext = leggett_extension(2, &grid, &pz).unwrap();
        // Recombined single-side marginal deviation stays lattice-small.
        let recombined = ext.recombined().unwrap();
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let cell = recombined.cell(&[a, b]).unwrap();
                worst = worst.max((cell.prob(0) + cell.prob(1) - 0.5).abs());
            }
        }
        assert!(worst < 0.02, "max deviation {worst}");
    }

    #[test]
    fn gap_formula_matches_distance_route() {
        let grid = leggett_grid::<f64>(32);
        let pz = Dist::uniform(32);
        let n = 2;
        let ext = leggett_extension(n, &grid, &pz).unwrap();
        let report = leggett_exclusion(n, &grid, &pz).unwrap();
        for row in report.rows.iter().filter(|r| r.n == n) {
            let via_distance = gap_via_distance(&ext, row.a_index).unwrap();
            assert!(
                (row.gap - via_distance).abs() < 1e-12,
                "a = {}: {} vs {}",
                row.a_index,
                row.gap,
                via_distance
            );
        }
    }

    #[test]
    fn half_advantage_point_mass_excluded_at_three() {
        // In-plane projection 1/2 aligned with a = 0: gap exactly 1/4 there.
        let grid = vec![LeggettParams::new(
            unit::<f64>(0.0, 3.0f64.sqrt() / 2.0, 0.5),
            unit::<f64>(0.0, -(3.0f64.sqrt()) / 2.0, -0.5),
        )
        .unwrap()];
        let pz = Dist::uniform(1);
        let report = leggett_exclusion(16, &grid, &pz).unwrap();
        assert_eq!(report.first_excluded_n, Some(3));
        let row = report
            .rows
            .iter()
            .find(|r| r.n == 3 && r.excluded)
            .unwrap();
        assert_eq!(row.a_index, 0);
        assert!((row.gap - 0.25).abs() < 1e-12);
    }

    #[test]
    fn small_advantage_excluded_at_thirteen() {
        // In-plane projection 0.1 aligned with a = 0: gap 0.05; the ceiling
        // N sin^2(pi/4N) crosses below it first at N = 13.
        let y = (1.0f64 - 0.01).sqrt();
        let grid =
            vec![LeggettParams::new(unit::<f64>(0.0, y, 0.1), unit::<f64>(0.0, -y, -0.1))
                .unwrap()];
        let report = leggett_exclusion(16, &grid, &Dist::uniform(1)).unwrap();
        assert_eq!(report.first_excluded_n, Some(13));
    }

    #[test]
    fn orthogonal_point_mass_never_excluded() {
        let grid = vec![LeggettParams::new(
            unit::<f64>(0.0, 1.0, 0.0),
            unit::<f64>(0.0, -1.0, 0.0),
        )
        .unwrap()];
        let report = leggett_exclusion(64, &grid, &Dist::uniform(1)).unwrap();
        assert_eq!(report.first_excluded_n, None);
        assert!(report.rows.iter().all(|r| r.gap < 1e-15));
    }
}
