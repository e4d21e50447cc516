//! No-signalling conditions on extended conditional tables.
//!
//! For a table `P_{X Y Z | A B}` (conditioned on the two settings, with the
//! extra parameter `Z` carried as the last target variable), the
//! no-signalling conditions are `P_{XZ|AB} = P_{XZ|A}` and
//! `P_{YZ|AB} = P_{YZ|B}`. The report also carries the derived conditions
//! used downstream: `P_{X|ABZ} = P_{X|AZ}`, `P_{Y|ABZ} = P_{Y|BZ}`, and
//! `P_{Z|AB} = P_Z`.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::table::CondTable;

/// Outcome of [`check_no_signalling`]; `passes` compares the two primary
/// marginal conditions against the tolerance.
#[derive(Debug, Clone)]
pub struct NoSignallingReport<R: Real> {
    /// Max violation of `P_{XZ|AB} = P_{XZ|A}` over setting pairs.
    pub x_side_violation: R,
    /// Max violation of `P_{YZ|AB} = P_{YZ|B}`.
    pub y_side_violation: R,
    /// Derived: max violation of `P_{X|ABZ} = P_{X|AZ}`.
    pub x_given_z_violation: R,
    /// Derived: max violation of `P_{Y|ABZ} = P_{Y|BZ}`.
    pub y_given_z_violation: R,
    /// Derived: max violation of `P_{Z|AB} = P_Z`.
    pub z_marginal_violation: R,
    /// Human-readable location of the worst primary violation.
    pub worst_cell: Option<String>,
    pub tolerance: R,
    pub passes: bool,
}

/// Checks the no-signalling marginal conditions on `P_{X Y Z | A B}` within
/// `tol`. Targets are taken positionally: outcome of the first side, outcome
/// of the second side, then the extra parameter.
pub fn check_no_signalling<R: Real>(
    ext: &CondTable<R>,
    tol: R,
) -> Result<NoSignallingReport<R>> {
    if ext.conditioned().len() != 2 || ext.targets().len() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "expected P_{{XYZ|AB}}, got {} conditioning and {} target variables",
            ext.conditioned().len(),
            ext.targets().len()
        )));
    }
    if !ext.has_full_support() {
        let missing = first_missing(ext);
        return Err(Error::MissingCell(missing));
    }
    let n_a = ext.conditioned()[0].range;
    let n_b = ext.conditioned()[1].range;
    let x_name = ext.targets()[0].name.clone();
    let y_name = ext.targets()[1].name.clone();
    let z_name = ext.targets()[2].name.clone();

    let xz = ext.marginal_targets(&[&x_name, &z_name])?;
    let yz = ext.marginal_targets(&[&y_name, &z_name])?;
    let z_only = ext.marginal_targets(&[&z_name])?;

    // P_{XZ|ab} must agree across b for fixed a.
    let mut x_side_violation = R::zero();
    let mut worst: Option<(R, String)> = None;
    for a in 0..n_a {
        for b1 in 0..n_b {
            for b2 in (b1 + 1)..n_b {
                let d = xz.cell(&[a, b1])?.max_abs_diff(xz.cell(&[a, b2])?)?;
                if d > x_side_violation {
                    x_side_violation = d;
                }
                if worst.as_ref().map_or(true, |(w, _)| d > *w) {
                    worst = Some((d, format!("P_{{XZ}} at a={a}, b={b1} vs b={b2}")));
                }
            }
        }
    }
    let mut y_side_violation = R::zero();
    for b in 0..n_b {
        for a1 in 0..n_a {
            for a2 in (a1 + 1)..n_a {
                let d = yz.cell(&[a1, b])?.max_abs_diff(yz.cell(&[a2, b])?)?;
                if d > y_side_violation {
                    y_side_violation = d;
                }
                if worst.as_ref().map_or(true, |(w, _)| d > *w) {
                    worst = Some((d, format!("P_{{YZ}} at b={b}, a={a1} vs a={a2}")));
                }
            }
        }
    }

    // Derived conditions, restricted to cells defined on both sides.
    let x_given = xz.extend_conditioning(&z_name)?; // P_{X | A B Z}
    let y_given = yz.extend_conditioning(&z_name)?;
    let nz = ext.targets()[2].range;
    let mut x_given_z_violation = R::zero();
    let mut y_given_z_violation = R::zero();
    for a in 0..n_a {
        for z in 0..nz {
            for b1 in 0..n_b {
                for b2 in (b1 + 1)..n_b {
                    if let (Ok(c1), Ok(c2)) =
                        (x_given.cell(&[a, b1, z]), x_given.cell(&[a, b2, z]))
                    {
                        x_given_z_violation = x_given_z_violation.max(c1.max_abs_diff(c2)?);
                    }
                }
            }
        }
    }
    for b in 0..n_b {
        for z in 0..nz {
            for a1 in 0..n_a {
                for a2 in (a1 + 1)..n_a {
                    if let (Ok(c1), Ok(c2)) =
                        (y_given.cell(&[a1, b, z]), y_given.cell(&[a2, b, z]))
                    {
                        y_given_z_violation = y_given_z_violation.max(c1.max_abs_diff(c2)?);
                    }
                }
            }
        }
    }
    let mut z_marginal_violation = R::zero();
    let reference = z_only.cell(&[0, 0])?;
    for a in 0..n_a {
        for b in 0..n_b {
            z_marginal_violation =
                z_marginal_violation.max(z_only.cell(&[a, b])?.max_abs_diff(reference)?);
        }
    }

    let passes = x_side_violation <= tol && y_side_violation <= tol;
    Ok(NoSignallingReport {
        x_side_violation,
        y_side_violation,
        x_given_z_violation,
        y_given_z_violation,
        z_marginal_violation,
        worst_cell: worst.filter(|(w, _)| *w > tol).map(|(_, s)| s),
        tolerance: tol,
        passes,
    })
}

fn first_missing<R: Real>(ext: &CondTable<R>) -> Vec<usize> {
    let ranges: Vec<usize> = ext.conditioned().iter().map(|v| v.range).collect();
    for key in crate::table::assignments(&ranges) {
        if ext.cell(&key).is_err() {
            return key;
        }
    }
    Vec::new()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chained::quantum_chain_table;
    use crate::dist::Dist;
    use crate::table::VarSpec;

    /// Wraps a `P_{XY|AB}` table with a trivial one-point Z.
    pub(crate) fn with_trivial_z(table: &CondTable<f64>) -> CondTable<f64> {
        let mut targets = table.targets().to_vec();
        targets.push(VarSpec::new("Z", 1));
        let cells = table
            .cells()
            .iter()
            .map(|(k, d)| (k.clone(), d.clone()))
            .collect();
        CondTable::new(table.conditioned().to_vec(), targets, cells).unwrap()
    }

    #[test]
    fn quantum_table_with_trivial_z_passes() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        let ext = with_trivial_z(&t);
        let report = check_no_signalling(&ext, 1e-9).unwrap();
        assert!(report.passes);
        assert!(report.x_side_violation < 1e-12);
        assert!(report.z_marginal_violation < 1e-12);
        assert!(report.worst_cell.is_none());
    }

    #[test]
    fn signalling_in_x_is_located() {
        // P_{X|a, b} depends on b: x biased toward b's parity.
        let ext: CondTable<f64> = CondTable::from_fn(
            vec![VarSpec::new("A", 2), VarSpec::new("B", 2)],
            vec![
                VarSpec::new("X", 2),
                VarSpec::new("Y", 2),
                VarSpec::new("Z", 1),
            ],
            |key| {
                let px0 = if key[1] == 0 { 0.9 } else { 0.5 };
                Dist::new(vec![px0 * 0.5, px0 * 0.5, (1.0 - px0) * 0.5, (1.0 - px0) * 0.5])
                    .unwrap()
            },
        )
        .unwrap();
        let report = check_no_signalling(&ext, 1e-9).unwrap();
        assert!(!report.passes);
        assert!((report.x_side_violation - 0.4).abs() < 1e-12);
        assert!(report.worst_cell.unwrap().contains("P_{XZ}"));
    }

    #[test]
    fn missing_settings_cell_errors() {
        let mut cells = std::collections::BTreeMap::new();
        cells.insert(vec![0usize, 0usize], Dist::<f64>::uniform(8));
        let ext = CondTable::new(
            vec![VarSpec::new("A", 2), VarSpec::new("B", 2)],
            vec![
                VarSpec::new("X", 2),
                VarSpec::new("Y", 2),
                VarSpec::new("Z", 2),
            ],
            cells,
        )
        .unwrap();
        assert!(matches!(
            check_no_signalling(&ext, 1e-9).unwrap_err(),
            Error::MissingCell(_)
        ));
    }
}
