//! Compatibility and relative informativeness of two theories' predictions.
//!
//! Two prediction tables `P_{X|AZ}` and `P_{X|AZ'}` are *compatible* when a
//! joint conditional `Pbar_{X Z Z'|A}` recovers both by marginalization,
//! with the recovered conditionals defined for exactly the same `(a, z)`
//! pairs as the inputs. The first is *(at least) as informative* as the
//! second when additionally `Pbar_{X|a z z'} = Pbar_{X|a z}` wherever the
//! pair `(z, z')` has mass, i.e. the second parameter adds nothing.
//!
//! Table conventions: prediction tables condition on `[A, Z]` and target
//! `[X]`; couplings condition on `[A]` and target `[X, Z, Z']` row-major.

use std::collections::{BTreeMap, BTreeSet};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::real::{lp_tol, r64, Real};
use crate::simplex::{FarkasCertificate, FeasibilityVerdict, LinearFeasibility, LpOutcome};
use crate::table::{CondTable, VarSpec};

/// Which of the two coupled theories to test as the more informative side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The `Z` side (first table).
    First,
    /// The `Z'` side (second table).
    Second,
}

/// Violations of the two marginalization identities of a candidate coupling.
#[derive(Debug, Clone)]
pub struct CompatibilityReport<R: Real> {
    pub first_violation: R,
    pub second_violation: R,
    pub tolerance: R,
    pub compatible: bool,
}

/// Result of a coupling feasibility search.
#[derive(Debug, Clone)]
pub enum CouplingOutcome<R: Real> {
    /// A coupling satisfying the marginal identities with strictly positive
    /// mass on every defined parameter value.
    Feasible {
        coupling: CondTable<R>,
        /// Smallest per-value mass over all defined `z` and `z'`.
        min_defined_mass: R,
    },
    /// The marginal identities are satisfiable, but only with zero mass on
    /// some defined parameter value, so the equal-domain requirement fails.
    SupportDegenerate { coupling: CondTable<R> },
    /// No coupling exists; carries one Farkas certificate per failing
    /// setting.
    Infeasible {
        infeasibility: R,
        certificates: Vec<(usize, FarkasCertificate<R>)>,
    },
}

struct Shapes {
    n_a: usize,
    n_x: usize,
    n_z: usize,
    n_zp: usize,
}

fn validate_shapes<R: Real>(p1: &CondTable<R>, p2: &CondTable<R>) -> Result<Shapes> {
    for (t, which) in [(p1, "first"), (p2, "second")] {
        if t.conditioned().len() != 2 || t.targets().len() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "{which} table must condition on [A, Z] and target [X]"
            )));
        }
    }
    let n_a = p1.conditioned()[0].range;
    if p2.conditioned()[0].range != n_a {
        return Err(Error::RangeMismatch(n_a, p2.conditioned()[0].range));
    }
    let n_x = p1.targets()[0].range;
    if p2.targets()[0].range != n_x {
        return Err(Error::OutcomeMismatch(n_x, p2.targets()[0].range));
    }
    Ok(Shapes {
        n_a,
        n_x,
        n_z: p1.conditioned()[1].range,
        n_zp: p2.conditioned()[1].range,
    })
}

fn defined_values<R: Real>(table: &CondTable<R>, a: usize) -> BTreeSet<usize> {
    table
        .defined_support()
        .filter(|key| key[0] == a)
        .map(|key| key[1])
        .collect()
}

/// Verifies both marginalization identities of a given coupling within
/// `tol`. Errors when the coupling's positive-mass parameter values do not
/// match the tables' defined domains (the equal-domain requirement).
pub fn check_compatibility<R: Real>(
    p1: &CondTable<R>,
    p2: &CondTable<R>,
    coupling: &CondTable<R>,
    tol: R,
) -> Result<CompatibilityReport<R>> {
    let s = validate_shapes(p1, p2)?;
    if coupling.conditioned().len() != 1
        || coupling.conditioned()[0].range != s.n_a
        || coupling.target_ranges() != vec![s.n_x, s.n_z, s.n_zp]
    {
        return Err(Error::ShapeMismatch(
            "coupling must condition on [A] and target [X, Z, Z']".into(),
        ));
    }
    let mut first_violation = R::zero();
    let mut second_violation = R::zero();
    for a in 0..s.n_a {
        let cell = coupling.cell(&[a])?;
        let z_defined = defined_values(p1, a);
        let zp_defined = defined_values(p2, a);
        let entry = |x: usize, z: usize, zp: usize| cell.prob((x * s.n_z + z) * s.n_zp + zp);

        let mut w_z = vec![R::zero(); s.n_z];
        let mut w_zp = vec![R::zero(); s.n_zp];
        for x in 0..s.n_x {
            for z in 0..s.n_z {
                for zp in 0..s.n_zp {
                    let t = entry(x, z, zp);
                    w_z[z] += t;
                    w_zp[zp] += t;
                }
            }
        }
        let positive = |w: R| w > tol;
        let z_support: BTreeSet<usize> = (0..s.n_z).filter(|&z| positive(w_z[z])).collect();
        let zp_support: BTreeSet<usize> = (0..s.n_zp).filter(|&z| positive(w_zp[z])).collect();
        if z_support != z_defined || zp_support != zp_defined {
            return Err(Error::SupportMismatch(format!(
                "at a={a}: coupling mass on z {z_support:?} vs defined {z_defined:?}, \
                 z' {zp_support:?} vs defined {zp_defined:?}"
            )));
        }

        for &z in &z_defined {
            let target = p1.cell(&[a, z])?;
            for x in 0..s.n_x {
                let lhs: R = (0..s.n_zp).map(|zp| entry(x, z, zp)).sum();
                first_violation = first_violation.max((lhs - target.prob(x) * w_z[z]).abs());
            }
        }
        for &zp in &zp_defined {
            let target = p2.cell(&[a, zp])?;
            for x in 0..s.n_x {
                let lhs: R = (0..s.n_z).map(|z| entry(x, z, zp)).sum();
                second_violation = second_violation.max((lhs - target.prob(x) * w_zp[zp]).abs());
            }
        }
    }
    Ok(CompatibilityReport {
        first_violation,
        second_violation,
        tolerance: tol,
        compatible: first_violation <= tol && second_violation <= tol,
    })
}

/// Searches for a coupling witnessing compatibility of the two tables.
///
/// Per setting the marginal identities are a linear feasibility problem over
/// nonnegative coupling entries; among feasible couplings the one
/// maximizing the smallest mass on a defined parameter value is returned, so
/// the equal-domain footnote of the definition is either met
/// ([`CouplingOutcome::Feasible`]) or provably unmeetable
/// ([`CouplingOutcome::SupportDegenerate`]).
pub fn find_coupling<R: Real>(
    p1: &CondTable<R>,
    p2: &CondTable<R>,
) -> Result<CouplingOutcome<R>> {
    let s = validate_shapes(p1, p2)?;
    let tol = lp_tol::<R>();
    let n_t = s.n_x * s.n_z * s.n_zp;
    let mut cells: BTreeMap<Vec<usize>, Dist<R>> = BTreeMap::new();
    let mut min_defined_mass = R::one();
    let mut certificates = Vec::new();
    let mut worst_infeasibility = R::zero();

    for a in 0..s.n_a {
        let z_defined = defined_values(p1, a);
        let zp_defined = defined_values(p2, a);
        let tidx = |x: usize, z: usize, zp: usize| (x * s.n_z + z) * s.n_zp + zp;

        let mut base = LinearFeasibility::<R>::new(n_t);
        // Total mass one.
        base.equality(vec![R::one(); n_t], R::one());
        // Marginal identities on defined values; zero mass elsewhere.
        for z in 0..s.n_z {
            if z_defined.contains(&z) {
                let target = p1.cell(&[a, z])?;
                for x in 0..s.n_x {
                    let mut coeffs = vec![R::zero(); n_t];
                    for zp in 0..s.n_zp {
                        coeffs[tidx(x, z, zp)] += R::one();
                    }
                    for x2 in 0..s.n_x {
                        for zp in 0..s.n_zp {
                            coeffs[tidx(x2, z, zp)] -= target.prob(x);
                        }
                    }
                    base.equality(coeffs, R::zero());
                }
            } else {
                let mut coeffs = vec![R::zero(); n_t];
                for x in 0..s.n_x {
                    for zp in 0..s.n_zp {
                        coeffs[tidx(x, z, zp)] = R::one();
                    }
                }
                base.equality(coeffs, R::zero());
            }
        }
        for zp in 0..s.n_zp {
            if zp_defined.contains(&zp) {
                let target = p2.cell(&[a, zp])?;
                for x in 0..s.n_x {
                    let mut coeffs = vec![R::zero(); n_t];
                    for z in 0..s.n_z {
                        coeffs[tidx(x, z, zp)] += R::one();
                    }
                    for x2 in 0..s.n_x {
                        for z in 0..s.n_z {
                            coeffs[tidx(x2, z, zp)] -= target.prob(x);
                        }
                    }
                    base.equality(coeffs, R::zero());
                }
            } else {
                let mut coeffs = vec![R::zero(); n_t];
                for x in 0..s.n_x {
                    for z in 0..s.n_z {
                        coeffs[tidx(x, z, zp)] = R::one();
                    }
                }
                base.equality(coeffs, R::zero());
            }
        }

        match base.solve(tol)? {
            FeasibilityVerdict::Infeasible {
                infeasibility,
                certificate,
            } => {
                worst_infeasibility = worst_infeasibility.max(infeasibility);
                certificates.push((a, certificate));
                continue;
            }
            FeasibilityVerdict::Feasible { .. } => {}
        }

        // Phase 2: maximize the smallest defined-value mass. Variables are
        // [T, t, slack per defined z, slack per defined z'].
        let n_support = z_defined.len() + zp_defined.len();
        let mut lp = LinearFeasibility::<R>::new(n_t + 1 + n_support);
        let widen = |coeffs: Vec<R>| {
            let mut w = coeffs;
            w.resize(n_t + 1 + n_support, R::zero());
            w
        };
        lp.equality(widen(vec![R::one(); n_t]), R::one());
        // Rebuild marginal constraints (same rows, widened).
        for z in 0..s.n_z {
            if z_defined.contains(&z) {
                let target = p1.cell(&[a, z])?;
                for x in 0..s.n_x {
                    let mut coeffs = vec![R::zero(); n_t];
                    for zp in 0..s.n_zp {
                        coeffs[tidx(x, z, zp)] += R::one();
                    }
                    for x2 in 0..s.n_x {
                        for zp in 0..s.n_zp {
                            coeffs[tidx(x2, z, zp)] -= target.prob(x);
                        }
                    }
                    lp.equality(widen(coeffs), R::zero());
                }
            } else {
                let mut coeffs = vec![R::zero(); n_t];
                for x in 0..s.n_x {
                    for zp in 0..s.n_zp {
                        coeffs[tidx(x, z, zp)] = R::one();
                    }
                }
                lp.equality(widen(coeffs), R::zero());
            }
        }
        for zp in 0..s.n_zp {
            if zp_defined.contains(&zp) {
                let target = p2.cell(&[a, zp])?;
                for x in 0..s.n_x {
                    let mut coeffs = vec![R::zero(); n_t];
                    for z in 0..s.n_z {
                        coeffs[tidx(x, z, zp)] += R::one();
                    }
                    for x2 in 0..s.n_x {
                        for z in 0..s.n_z {
                            coeffs[tidx(x2, z, zp)] -= target.prob(x);
                        }
                    }
                    lp.equality(widen(coeffs), R::zero());
                }
            } else {
                let mut coeffs = vec![R::zero(); n_t];
                for x in 0..s.n_x {
                    for z in 0..s.n_z {
                        coeffs[tidx(x, z, zp)] = R::one();
                    }
                }
                lp.equality(widen(coeffs), R::zero());
            }
        }
        // w_z - t - slack = 0 per defined value.
        let mut slack = n_t + 1;
        for &z in &z_defined {
            let mut coeffs = vec![R::zero(); n_t + 1 + n_support];
            for x in 0..s.n_x {
                for zp in 0..s.n_zp {
                    coeffs[tidx(x, z, zp)] = R::one();
                }
            }
            coeffs[n_t] = -R::one();
            coeffs[slack] = -R::one();
            lp.equality(coeffs, R::zero());
            slack += 1;
        }
        for &zp in &zp_defined {
            let mut coeffs = vec![R::zero(); n_t + 1 + n_support];
            for x in 0..s.n_x {
                for z in 0..s.n_z {
                    coeffs[tidx(x, z, zp)] = R::one();
                }
            }
            coeffs[n_t] = -R::one();
            coeffs[slack] = -R::one();
            lp.equality(coeffs, R::zero());
            slack += 1;
        }
        let mut objective = vec![R::zero(); n_t + 1 + n_support];
        objective[n_t] = -R::one(); // maximize t
        let (x_opt, t_opt) = match lp.minimize(&objective, tol)? {
            LpOutcome::Optimal { x, value, .. } => (x, -value),
            LpOutcome::Infeasible { infeasibility } => {
                return Err(Error::SolverFailure(
                    format!("support-maximizing pass infeasible at a={a}"),
                    infeasibility.to_f64().unwrap_or(f64::NAN),
                ))
            }
            LpOutcome::Unbounded => {
                return Err(Error::SolverFailure(
                    format!("support-maximizing pass unbounded at a={a}"),
                    f64::INFINITY,
                ))
            }
        };
        min_defined_mass = min_defined_mass.min(t_opt);
        let weights: Vec<R> = x_opt[..n_t].iter().map(|&v| v.max(R::zero())).collect();
        cells.insert(vec![a], Dist::from_weights(&weights)?);
    }

    if !certificates.is_empty() {
        return Ok(CouplingOutcome::Infeasible {
            infeasibility: worst_infeasibility,
            certificates,
        });
    }
    let coupling = CondTable::new(
        vec![p1.conditioned()[0].clone()],
        vec![
            p1.targets()[0].clone(),
            VarSpec::new(p1.conditioned()[1].name.clone(), s.n_z),
            VarSpec::new(
                distinct_name(&p1.conditioned()[1].name, &p2.conditioned()[1].name),
                s.n_zp,
            ),
        ],
        cells,
    )?;
    if min_defined_mass > r64::<R>(10.0) * tol {
        Ok(CouplingOutcome::Feasible {
            coupling,
            min_defined_mass,
        })
    } else {
        Ok(CouplingOutcome::SupportDegenerate { coupling })
    }
}

fn distinct_name(first: &str, second: &str) -> String {
    if first == second {
        format!("{second}'")
    } else {
        second.to_string()
    }
}

/// Informativeness verdict for one side of a coupling.
#[derive(Debug, Clone)]
pub struct InformativenessReport<R: Real> {
    pub side: Side,
    pub max_violation: R,
    pub as_informative: bool,
}

/// Tests whether the chosen side of `coupling` is (at least) as informative
/// as the other: conditioning on the other side's parameter must not change
/// the outcome distribution on any positive-mass pair.
pub fn check_as_informative<R: Real>(
    coupling: &CondTable<R>,
    side: Side,
    tol: R,
) -> Result<InformativenessReport<R>> {
    if coupling.conditioned().len() != 1 || coupling.targets().len() != 3 {
        return Err(Error::ShapeMismatch(
            "coupling must condition on [A] and target [X, Z, Z']".into(),
        ));
    }
    let n_x = coupling.targets()[0].range;
    let n_z = coupling.targets()[1].range;
    let n_zp = coupling.targets()[2].range;
    let n_a = coupling.conditioned()[0].range;
    let mut max_violation = R::zero();
    for a in 0..n_a {
        let cell = coupling.cell(&[a])?;
        let entry = |x: usize, z: usize, zp: usize| cell.prob((x * n_z + z) * n_zp + zp);
        for z in 0..n_z {
            for zp in 0..n_zp {
                let pair_mass: R = (0..n_x).map(|x| entry(x, z, zp)).sum();
                if pair_mass <= tol {
                    continue;
                }
                // Outcome distribution given both parameters.
                for x in 0..n_x {
                    let both = entry(x, z, zp) / pair_mass;
                    let single = match side {
                        Side::First => {
                            let w: R =
                                (0..n_x).map(|x2| (0..n_zp).map(|q| entry(x2, z, q)).sum()).sum();
                            let num: R = (0..n_zp).map(|q| entry(x, z, q)).sum();
                            num / w
                        }
                        Side::Second => {
                            let w: R =
                                (0..n_x).map(|x2| (0..n_z).map(|q| entry(x2, q, zp)).sum()).sum();
                            let num: R = (0..n_z).map(|q| entry(x, q, zp)).sum();
                            num / w
                        }
                    };
                    max_violation = max_violation.max((both - single).abs());
                }
            }
        }
    }
    Ok(InformativenessReport {
        side,
        max_violation,
        as_informative: max_violation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{born, born_density, DensityOperator, Povm, PureState};

    /// Predictions table from explicit per-(a, z) distributions.
    fn prediction_table(
        n_a: usize,
        n_z: usize,
        f: impl Fn(usize, usize) -> Option<Dist<f64>>,
    ) -> CondTable<f64> {
        let mut cells = BTreeMap::new();
        for a in 0..n_a {
            for z in 0..n_z {
                if let Some(d) = f(a, z) {
                    cells.insert(vec![a, z], d);
                }
            }
        }
        CondTable::new(
            vec![VarSpec::new("A", n_a), VarSpec::new("Z", n_z)],
            vec![VarSpec::new("X", 2)],
            cells,
        )
        .unwrap()
    }

    /// The isotope structure: Z' in {0..3} fine-grains Z = Z'/2; outcome
    /// statistics depend on Z'.
    fn fine_graining_tables() -> (CondTable<f64>, CondTable<f64>, CondTable<f64>) {
        let pz = [0.55, 0.75, 0.2, 0.4];
        let coarse = prediction_table(1, 2, |_, z| {
            let avg = (pz[2 * z] + pz[2 * z + 1]) / 2.0;
            Some(Dist::new(vec![avg, 1.0 - avg]).unwrap())
        });
        let fine = prediction_table(1, 4, |_, zp| {
            Some(Dist::new(vec![pz[zp], 1.0 - pz[zp]]).unwrap())
        });
        // Coupling: z' uniform, z determined by z', X from the fine rule.
        let mut cells = BTreeMap::new();
        let mut weights = vec![0.0; 2 * 2 * 4];
        for zp in 0..4 {
            let z = zp / 2;
            for x in 0..2 {
                let px = if x == 0 { pz[zp] } else { 1.0 - pz[zp] };
                weights[(x * 2 + z) * 4 + zp] = 0.25 * px;
            }
        }
        cells.insert(vec![0], Dist::new(weights).unwrap());
        let coupling = CondTable::new(
            vec![VarSpec::new("A", 1)],
            vec![
                VarSpec::new("X", 2),
                VarSpec::new("Z", 2),
                VarSpec::new("Z'", 4),
            ],
            cells,
        )
        .unwrap();
        (coarse, fine, coupling)
    }

    #[test]
    fn fine_graining_is_compatible() {
        let (coarse, fine, coupling) = fine_graining_tables();
        let report = check_compatibility(&coarse, &fine, &coupling, 1e-9).unwrap();
        assert!(report.compatible, "{report:?}");
    }

    #[test]
    fn fine_side_is_informative_coarse_side_is_not() {
        let (_, _, coupling) = fine_graining_tables();
        let fine_side = check_as_informative(&coupling, Side::Second, 1e-9).unwrap();
        assert!(fine_side.as_informative);
        let coarse_side = check_as_informative(&coupling, Side::First, 1e-9).unwrap();
        assert!(!coarse_side.as_informative);
        assert!(coarse_side.max_violation > 0.05);
    }

    #[test]
    fn identical_tables_with_diagonal_coupling() {
        let table = prediction_table(2, 2, |a, z| {
            let p = 0.2 + 0.15 * (a as f64) + 0.3 * (z as f64);
            Some(Dist::new(vec![p, 1.0 - p]).unwrap())
        });
        let mut cells = BTreeMap::new();
        for a in 0..2 {
            let mut weights = vec![0.0; 2 * 2 * 2];
            for z in 0..2 {
                let cell = table.cell(&[a, z]).unwrap();
                for x in 0..2 {
                    weights[(x * 2 + z) * 2 + z] = 0.5 * cell.prob(x);
                }
            }
            cells.insert(vec![a], Dist::new(weights).unwrap());
        }
        let coupling = CondTable::new(
            vec![VarSpec::new("A", 2)],
            vec![
                VarSpec::new("X", 2),
                VarSpec::new("Z", 2),
                VarSpec::new("Z'", 2),
            ],
            cells,
        )
        .unwrap();
        let report = check_compatibility(&table, &table, &coupling, 1e-9).unwrap();
        assert!(report.compatible);
        for side in [Side::First, Side::Second] {
            assert!(check_as_informative(&coupling, side, 1e-9)
                .unwrap()
                .as_informative);
        }
    }

    #[test]
    fn find_coupling_on_identical_tables() {
        let table = prediction_table(2, 2, |a, z| {
            let p = 0.3 + 0.2 * (a as f64) + 0.25 * (z as f64);
            Some(Dist::new(vec![p, 1.0 - p]).unwrap())
        });
        match find_coupling(&table, &table).unwrap() {
            CouplingOutcome::Feasible {
                coupling,
                min_defined_mass,
            } => {
                assert!(min_defined_mass > 0.01);
                let report = check_compatibility(&table, &table, &coupling, 1e-7).unwrap();
                assert!(report.compatible);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn find_coupling_relabelled_deterministic_tables() {
        // Z deterministic opposite outcomes; Z' the same with labels swapped.
        let t1 = prediction_table(1, 2, |_, z| Some(Dist::point_mass(2, z)));
        let t2 = prediction_table(1, 2, |_, zp| Some(Dist::point_mass(2, 1 - zp)));
        match find_coupling(&t1, &t2).unwrap() {
            CouplingOutcome::Feasible { coupling, .. } => {
                let report = check_compatibility(&t1, &t2, &coupling, 1e-7).unwrap();
                assert!(report.compatible);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn find_coupling_single_interior_refinement_is_feasible() {
        // Deterministic Z (opposite point masses) against one strictly
        // interior z': reachable by averaging the two z values.
        let t1 = prediction_table(1, 2, |_, z| Some(Dist::point_mass(2, z)));
        let interior = prediction_table(1, 1, |_, _| Some(Dist::new(vec![0.6, 0.4]).unwrap()));
        match find_coupling(&t1, &interior).unwrap() {
            CouplingOutcome::Feasible { coupling, .. } => {
                let report = check_compatibility(&t1, &interior, &coupling, 1e-7).unwrap();
                assert!(report.compatible);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn find_coupling_infeasible_when_one_side_pins_the_outcome() {
        // Both z values force X = 0, so no coupling can put mass on X = 1,
        // yet every z' demands some.
        let t1 = prediction_table(1, 2, |_, _| Some(Dist::point_mass(2, 0)));
        let t2 = prediction_table(1, 2, |_, zp| {
            Some(if zp == 0 {
                Dist::new(vec![0.6, 0.4]).unwrap()
            } else {
                Dist::new(vec![0.9, 0.1]).unwrap()
            })
        });
        match find_coupling(&t1, &t2).unwrap() {
            CouplingOutcome::Infeasible { certificates, .. } => {
                assert!(!certificates.is_empty());
                assert!(certificates[0].1.verified);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn find_coupling_detects_degenerate_support() {
        // The point masses at z = 0 (X = 0) and z' = 0 (X = 1) contradict,
        // and the interior cells can only balance by starving both of all
        // mass: the marginal identities hold, but only on a smaller domain,
        // so the equal-domain requirement fails.
        let t1 = prediction_table(1, 2, |_, z| {
            Some(if z == 0 {
                Dist::point_mass(2, 0)
            } else {
                Dist::uniform(2)
            })
        });
        let t2 = prediction_table(1, 2, |_, zp| {
            Some(if zp == 0 {
                Dist::point_mass(2, 1)
            } else {
                Dist::uniform(2)
            })
        });
        match find_coupling(&t1, &t2).unwrap() {
            CouplingOutcome::SupportDegenerate { .. } => {}
            other => panic!("expected degenerate support, got {other:?}"),
        }
    }

    #[test]
    fn support_mismatch_is_an_error() {
        let (coarse, fine, coupling) = fine_graining_tables();
        // Declare a coarse table with an extra defined z the coupling
        // cannot weight.
        let padded = prediction_table(1, 3, |_, z| {
            if z < 2 {
                Some(coarse.cell(&[0, z]).unwrap().clone())
            } else {
                Some(Dist::uniform(2))
            }
        });
        let padded_coupling = {
            let mut weights = vec![0.0; 2 * 3 * 4];
            let cell = coupling.cell(&[0]).unwrap();
            for x in 0..2 {
                for z in 0..2 {
                    for zp in 0..4 {
                        weights[(x * 3 + z) * 4 + zp] = cell.prob((x * 2 + z) * 4 + zp);
                    }
                }
            }
            let mut cells = BTreeMap::new();
            cells.insert(vec![0], Dist::new(weights).unwrap());
            CondTable::new(
                vec![VarSpec::new("A", 1)],
                vec![
                    VarSpec::new("X", 2),
                    VarSpec::new("Z", 3),
                    VarSpec::new("Z'", 4),
                ],
                cells,
            )
            .unwrap()
        };
        assert!(matches!(
            check_compatibility(&padded, &fine, &padded_coupling, 1e-9).unwrap_err(),
            Error::SupportMismatch(_)
        ));
    }

    #[test]
    fn pure_side_more_informative_than_mixed() {
        // Quantum: Z the mixed state (single value), Z' = C the pure index
        // over |up> and |plus>; predictions from the Born rule in the up/down
        // basis distinguish them.
        let up = PureState::<f64>::up();
        let plus = PureState::<f64>::plus();
        let povm = Povm::projective_qubit("a0", 1.0);
        let rho = DensityOperator::mixture(&[(0.5, &up), (0.5, &plus)]).unwrap();
        let mixed_pred = born_density(&rho, &povm).unwrap();
        let pure_preds = [born(&up, &povm).unwrap(), born(&plus, &povm).unwrap()];

        let t_mixed = prediction_table(1, 1, |_, _| Some(mixed_pred.clone()));
        let t_pure = prediction_table(1, 2, |_, c| Some(pure_preds[c].clone()));
        let mut weights = vec![0.0; 2 * 1 * 2];
        for c in 0..2 {
            for x in 0..2 {
                weights[x * 2 + c] = 0.5 * pure_preds[c].prob(x);
            }
        }
        let mut cells = BTreeMap::new();
        cells.insert(vec![0], Dist::new(weights).unwrap());
        let coupling = CondTable::new(
            vec![VarSpec::new("A", 1)],
            vec![
                VarSpec::new("X", 2),
                VarSpec::new("Z", 1),
                VarSpec::new("C", 2),
            ],
            cells,
        )
        .unwrap();
        let report = check_compatibility(&t_mixed, &t_pure, &coupling, 1e-9).unwrap();
        assert!(report.compatible);
        assert!(check_as_informative(&coupling, Side::Second, 1e-9)
            .unwrap()
            .as_informative);
        assert!(!check_as_informative(&coupling, Side::First, 1e-9)
            .unwrap()
            .as_informative);
    }
}
