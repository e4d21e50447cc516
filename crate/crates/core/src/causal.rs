//! Causal orders (preorders on variables) and the free-choice check.
//!
//! A causal order is a reflexive transitive relation `~>` on a variable set.
//! A variable `A` is *free* when it is uncorrelated with everything outside
//! its causal future: `P_{A, Gamma_A} = P_A x P_{Gamma_A}`, where `Gamma_A`
//! collects the variables `V != A` with `A !~> V`.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::table::JointTable;

/// A preorder on a finite set of named variables, stored as a reachability
/// matrix (reflexive and transitively closed by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalOrder {
    vars: Vec<String>,
    reach: Vec<bool>,
}

impl CausalOrder {
    /// Builds the reflexive transitive closure of the given edges.
    pub fn new(vars: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let n = vars.len();
        let idx = |name: &str| -> Result<usize> {
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let mut reach = vec![false; n * n];
        for i in 0..n {
            reach[i * n + i] = true;
        }
        for (from, to) in edges {
            reach[idx(from)? * n + idx(to)?] = true;
        }
        // Floyd-Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if reach[i * n + k] {
                    for j in 0..n {
                        if reach[k * n + j] {
                            reach[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Ok(Self { vars, reach })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// `from ~> to`.
    pub fn leads_to(&self, from: &str, to: &str) -> Result<bool> {
        let n = self.vars.len();
        Ok(self.reach[self.index(from)? * n + self.index(to)?])
    }

    /// `Gamma_A`: all variables outside the causal future of `var`
    /// (excluding `var` itself).
    pub fn non_future(&self, var: &str) -> Result<Vec<String>> {
        let a = self.index(var)?;
        let n = self.vars.len();
        Ok(self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != a && !self.reach[a * n + i])
            .map(|(_, v)| v.clone())
            .collect())
    }

    /// Checks reflexivity and transitivity directly (the constructor closes
    /// relations, so this matters only for hand-built matrices).
    pub fn is_preorder(&self) -> bool {
        let n = self.vars.len();
        for i in 0..n {
            if !self.reach[i * n + i] {
                return false;
            }
        }
        for i in 0..n {
            for k in 0..n {
                if self.reach[i * n + k] {
                    for j in 0..n {
                        if self.reach[k * n + j] && !self.reach[i * n + j] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The bipartite-setup conditions on an order over `A,B,X,Y,Z`:
    /// (i) `A ~> X` and `B ~> Y`;
    /// (ii) `A !~> Z` and `B !~> Z`;
    /// (iii) `A !~> Y` and `B !~> X`.
    pub fn bipartite_conditions_hold(&self) -> Result<bool> {
        Ok(self.leads_to("A", "X")?
            && self.leads_to("B", "Y")?
            && !self.leads_to("A", "Z")?
            && !self.leads_to("B", "Z")?
            && !self.leads_to("A", "Y")?
            && !self.leads_to("B", "X")?)
    }

    /// The bipartite preset orders over `A,B,X,Y,Z`: required arrows
    /// `A ~> X`, `B ~> Y`, with each optional arrow out of `Z` (to `X`, to
    /// `Y`) toggled independently.
    pub fn bipartite_variants() -> Vec<CausalOrder> {
        let vars = ["A", "B", "X", "Y", "Z"];
        let mut out = Vec::new();
        for z_to_x in [false, true] {
            for z_to_y in [false, true] {
                let mut edges = vec![("A", "X"), ("B", "Y")];
                if z_to_x {
                    edges.push(("Z", "X"));
                }
                if z_to_y {
                    edges.push(("Z", "Y"));
                }
                out.push(CausalOrder::new(&vars, &edges).expect("static names"));
            }
        }
        out
    }

    /// A relativistic-style order: `Z` in the common past of both sites,
    /// each setting preceding its own outcome.
    pub fn relativistic() -> CausalOrder {
        CausalOrder::new(
            &["A", "B", "X", "Y", "Z"],
            &[
                ("Z", "A"),
                ("Z", "B"),
                ("Z", "X"),
                ("Z", "Y"),
                ("A", "X"),
                ("B", "Y"),
            ],
        )
        .expect("static names")
    }
}

/// Result of a free-choice factorization test.
#[derive(Debug, Clone)]
pub struct FreeChoiceReport<R: Real> {
    pub variable: String,
    /// The variables `Gamma_A` the factorization was tested against.
    pub non_future: Vec<String>,
    /// Largest entrywise violation of `P_{A,Gamma_A} = P_A x P_{Gamma_A}`.
    pub max_violation: R,
    /// Assignment achieving the violation (over `A` then `Gamma_A`).
    pub worst_assignment: Vec<usize>,
    pub free: bool,
}

/// Tests Definition-style freeness of `var` inside the joint `j` with
/// respect to `order`, within `tol`.
///
/// All of `Gamma_A` must be present in `j`; other variables of `j` are
/// marginalized out first.
pub fn check_free<R: Real>(
    j: &JointTable<R>,
    var: &str,
    order: &CausalOrder,
    tol: R,
) -> Result<FreeChoiceReport<R>> {
    j.var_index(var)?;
    order.index_check(var)?;
    let gamma = order.non_future(var)?;
    let mut keep: Vec<&str> = vec![var];
    for g in &gamma {
        // Fails loudly when Gamma_A is not fully present.
        j.var_index(g)?;
        keep.push(g.as_str());
    }
    let restricted = j.marginal(&keep)?;
    let pa = restricted.marginal(&[var])?;
    let gamma_refs: Vec<&str> = gamma.iter().map(|s| s.as_str()).collect();
    let pg = restricted.marginal(&gamma_refs)?;
    let product = pa.product(&pg)?;

    let ranges = restricted.ranges();
    let mut max_violation = R::zero();
    let mut worst = vec![0usize; ranges.len()];
    for a in crate::table::assignments(&ranges) {
        let diff = (restricted.prob(&a) - product.prob(&a)).abs();
        if diff > max_violation {
            max_violation = diff;
            worst = a;
        }
    }
    Ok(FreeChoiceReport {
        variable: var.to_string(),
        non_future: gamma,
        max_violation,
        worst_assignment: worst,
        free: max_violation <= tol,
    })
}

impl CausalOrder {
    fn index_check(&self, var: &str) -> Result<()> {
        self.index(var).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::VarSpec;

    #[test]
    fn closure_is_transitive() {
        let o = CausalOrder::new(&["Z", "A", "X"], &[("Z", "A"), ("A", "X")]).unwrap();
        assert!(o.leads_to("Z", "X").unwrap());
        assert!(o.leads_to("A", "A").unwrap());
        assert!(!o.leads_to("X", "Z").unwrap());
        assert!(o.is_preorder());
    }

    #[test]
    fn bipartite_variants_satisfy_conditions() {
        let variants = CausalOrder::bipartite_variants();
        assert_eq!(variants.len(), 4);
        for v in &variants {
            assert!(v.bipartite_conditions_hold().unwrap());
            assert_eq!(
                v.non_future("A").unwrap(),
                vec!["B".to_string(), "Y".to_string(), "Z".to_string()]
            );
        }
        assert!(CausalOrder::relativistic().bipartite_conditions_hold().unwrap());
    }

    #[test]
    fn violating_order_fails_conditions() {
        let o = CausalOrder::new(
            &["A", "B", "X", "Y", "Z"],
            &[("A", "X"), ("B", "Y"), ("A", "Z")],
        )
        .unwrap();
        assert!(!o.bipartite_conditions_hold().unwrap());
    }

    #[test]
    fn product_joint_is_free() {
        let order = &CausalOrder::bipartite_variants()[0];
        let pa = JointTable::new(vec![VarSpec::new("A", 2)], vec![0.3, 0.7]).unwrap();
        let rest = JointTable::from_fn(
            vec![VarSpec::new("B", 2), VarSpec::new("Y", 2), VarSpec::new("Z", 2)],
            |_| 0.125,
        )
        .unwrap();
        let j = pa.product(&rest).unwrap();
        let report = check_free(&j, "A", order, 1e-9).unwrap();
        assert!(report.free);
        assert!(report.max_violation < 1e-12);
    }

    #[test]
    fn copied_bit_is_not_free() {
        // A = Z exactly, with A !~> Z in the order.
        let order = &CausalOrder::bipartite_variants()[0];
        let j = JointTable::from_fn(
            vec![
                VarSpec::new("A", 2),
                VarSpec::new("B", 2),
                VarSpec::new("Y", 2),
                VarSpec::new("Z", 2),
            ],
            |a| {
                if a[0] == a[3] {
                    0.5 * 0.25
                } else {
                    0.0
                }
            },
        )
        .unwrap();
        let report = check_free(&j, "A", order, 1e-9).unwrap();
        assert!(!report.free);
        // |P(a==z) - P_A x P_{BYZ}| = 0.125 - 0.0625 on matching cells.
        assert!((report.max_violation - 0.0625_f64).abs() < 1e-12);
    }

    #[test]
    fn missing_gamma_variable_errors() {
        let order = &CausalOrder::bipartite_variants()[0];
        let j = JointTable::from_fn(
            vec![VarSpec::new("A", 2), VarSpec::new("B", 2)],
            |_| 0.25,
        )
        .unwrap();
        assert!(check_free(&j, "A", order, 1e-9).is_err());
    }
}
