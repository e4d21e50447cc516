//! Joint and conditional probability tables over named finite variables.
//!
//! A [`JointTable`] stores `P_{V1 V2 ...}` as a flat row-major vector (last
//! variable fastest). A [`CondTable`] stores `P_{targets | conditioned}` as a
//! map from conditioning tuples to distributions over target tuples; the set
//! of keys is the table's defined support, so partially defined conditionals
//! (undefined where the conditioning event has probability zero) are
//! representable directly.

use std::collections::BTreeMap;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::real::{normalization_tol, Real};

/// A named variable with finite range `{0, .., range-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub range: usize,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, range: usize) -> Self {
        Self {
            name: name.into(),
            range,
        }
    }
}

/// Iterates all assignments of the given ranges in row-major order.
pub fn assignments(ranges: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = ranges.iter().product();
    (0..total).map(move |mut idx| {
        let mut out = vec![0usize; ranges.len()];
        for (slot, &r) in out.iter_mut().zip(ranges).rev() {
            *slot = idx % r;
            idx /= r;
        }
        out
    })
}

fn flat_index(ranges: &[usize], assignment: &[usize]) -> usize {
    let mut idx = 0;
    for (&v, &r) in assignment.iter().zip(ranges) {
        idx = idx * r + v;
    }
    idx
}

/// Joint distribution over an ordered list of finite variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable<R: Real> {
    vars: Vec<VarSpec>,
    probs: Vec<R>,
}

impl<R: Real> JointTable<R> {
    /// Validates total mass 1 (within 1e-12 at `f64`) and nonnegativity.
    pub fn new(vars: Vec<VarSpec>, probs: Vec<R>) -> Result<Self> {
        let expected: usize = vars.iter().map(|v| v.range).product();
        if probs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for {} assignments",
                probs.len(),
                expected
            )));
        }
        let tol = normalization_tol::<R>();
        for (i, &p) in probs.iter().enumerate() {
            if p < -tol {
                return Err(Error::NegativeProbability(p.to_f64().unwrap_or(-1.0), i));
            }
        }
        let mass: R = probs.iter().copied().sum();
        if (mass - R::one()).abs() > tol {
            return Err(Error::NotNormalized(mass.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { vars, probs })
    }

    /// Builds a table by evaluating `f` on every assignment.
    pub fn from_fn(vars: Vec<VarSpec>, f: impl Fn(&[usize]) -> R) -> Result<Self> {
        let ranges: Vec<usize> = vars.iter().map(|v| v.range).collect();
        let probs: Vec<R> = assignments(&ranges).map(|a| f(&a)).collect();
        Self::new(vars, probs)
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn ranges(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.range).collect()
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn prob(&self, assignment: &[usize]) -> R {
        self.probs[flat_index(&self.ranges(), assignment)]
    }

    /// Sums out every variable not listed in `keep`, preserving `keep` order.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointTable<R>> {
        let keep_idx: Vec<usize> = keep
            .iter()
            .map(|n| self.var_index(n))
            .collect::<Result<_>>()?;
        let ranges = self.ranges();
        let out_vars: Vec<VarSpec> = keep_idx.iter().map(|&i| self.vars[i].clone()).collect();
        let out_ranges: Vec<usize> = out_vars.iter().map(|v| v.range).collect();
        let mut out = vec![R::zero(); out_ranges.iter().product()];
        for (a, &p) in assignments(&ranges).zip(self.probs.iter()) {
            let proj: Vec<usize> = keep_idx.iter().map(|&i| a[i]).collect();
            out[flat_index(&out_ranges, &proj)] += p;
        }
        JointTable::new(out_vars, out)
    }

    /// Conditions on the listed assignments and renormalizes, returning the
    /// distribution over the remaining variables.
    ///
    /// Errors with [`Error::ZeroProbabilityConditioning`] when the
    /// conditioning event carries no probability mass.
    pub fn condition(&self, on: &[(&str, usize)]) -> Result<JointTable<R>> {
        let mut fixed: Vec<Option<usize>> = vec![None; self.vars.len()];
        for (name, value) in on {
            let i = self.var_index(name)?;
            if *value >= self.vars[i].range {
                return Err(Error::ValueOutOfRange {
                    name: self.vars[i].name.clone(),
                    value: *value,
                    range: self.vars[i].range,
                });
            }
            fixed[i] = Some(*value);
        }
        let ranges = self.ranges();
        let out_vars: Vec<VarSpec> = self
            .vars
            .iter()
            .zip(&fixed)
            .filter(|(_, f)| f.is_none())
            .map(|(v, _)| v.clone())
            .collect();
        if out_vars.is_empty() {
            return Err(Error::InvalidParameter(
                "conditioning fixes every variable".into(),
            ));
        }
        let out_ranges: Vec<usize> = out_vars.iter().map(|v| v.range).collect();
        let mut out = vec![R::zero(); out_ranges.iter().product()];
        let mut mass = R::zero();
        for (a, &p) in assignments(&ranges).zip(self.probs.iter()) {
            if fixed
                .iter()
                .zip(&a)
                .all(|(f, &v)| f.map_or(true, |fv| fv == v))
            {
                let proj: Vec<usize> = a
                    .iter()
                    .zip(&fixed)
                    .filter(|(_, f)| f.is_none())
                    .map(|(&v, _)| v)
                    .collect();
                out[flat_index(&out_ranges, &proj)] += p;
                mass += p;
            }
        }
        if mass <= normalization_tol::<R>() {
            let desc = on
                .iter()
                .map(|(n, v)| format!("{n}={v}"))
                .collect::<Vec<_>>()
                .join(",");
            return Err(Error::ZeroProbabilityConditioning(desc));
        }
        for p in &mut out {
            *p /= mass;
        }
        JointTable::new(out_vars, out)
    }

    /// `P(X = Y) = sum_x P_{XY}(x, x)` for two variables sharing a range.
    pub fn prob_equal(&self, x: &str, y: &str) -> Result<R> {
        let xi = self.var_index(x)?;
        let yi = self.var_index(y)?;
        if self.vars[xi].range != self.vars[yi].range {
            return Err(Error::RangeMismatch(
                self.vars[xi].range,
                self.vars[yi].range,
            ));
        }
        let ranges = self.ranges();
        let mut total = R::zero();
        for (a, &p) in assignments(&ranges).zip(self.probs.iter()) {
            if a[xi] == a[yi] {
                total += p;
            }
        }
        Ok(total)
    }

    /// `P(X != Y) = 1 - P(X = Y)`.
    pub fn prob_not_equal(&self, x: &str, y: &str) -> Result<R> {
        Ok(R::one() - self.prob_equal(x, y)?)
    }

    /// The table viewed as a distribution over full assignment tuples.
    pub fn as_dist(&self) -> Dist<R> {
        Dist::from_weights(&self.probs).expect("joint table mass is positive")
    }

    /// Largest absolute entrywise difference to another table of identical shape.
    pub fn max_abs_diff(&self, other: &Self) -> Result<R> {
        if self.ranges() != other.ranges() {
            return Err(Error::ShapeMismatch("joint tables differ in shape".into()));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&a, &b)| (a - b).abs())
            .fold(R::zero(), |m, d| m.max(d)))
    }

    /// Product of two joints over disjoint variable lists.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if vars.iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate variable `{}` in product",
                    v.name
                )));
            }
            vars.push(v.clone());
        }
        let mut probs = Vec::with_capacity(self.probs.len() * other.probs.len());
        for &p in &self.probs {
            for &q in &other.probs {
                probs.push(p * q);
            }
        }
        JointTable::new(vars, probs)
    }
}

/// Conditional probability table `P_{targets | conditioned}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondTable<R: Real> {
    conditioned: Vec<VarSpec>,
    targets: Vec<VarSpec>,
    cells: BTreeMap<Vec<usize>, Dist<R>>,
}

impl<R: Real> CondTable<R> {
    pub fn new(
        conditioned: Vec<VarSpec>,
        targets: Vec<VarSpec>,
        cells: BTreeMap<Vec<usize>, Dist<R>>,
    ) -> Result<Self> {
        let target_size: usize = targets.iter().map(|v| v.range).product();
        let cond_ranges: Vec<usize> = conditioned.iter().map(|v| v.range).collect();
        for (key, dist) in &cells {
            if key.len() != conditioned.len() {
                return Err(Error::ShapeMismatch(format!(
                    "conditioning tuple {key:?} has wrong arity"
                )));
            }
            for (slot, (&v, &r)) in key.iter().zip(&cond_ranges).enumerate() {
                if v >= r {
                    return Err(Error::ValueOutOfRange {
                        name: conditioned[slot].name.clone(),
                        value: v,
                        range: r,
                    });
                }
            }
            if dist.len() != target_size {
                return Err(Error::ShapeMismatch(format!(
                    "cell {key:?} has {} entries, expected {target_size}",
                    dist.len()
                )));
            }
        }
        Ok(Self {
            conditioned,
            targets,
            cells,
        })
    }

    /// Builds a fully supported table by evaluating `f` on every
    /// conditioning tuple.
    pub fn from_fn(
        conditioned: Vec<VarSpec>,
        targets: Vec<VarSpec>,
        f: impl Fn(&[usize]) -> Dist<R>,
    ) -> Result<Self> {
        let cond_ranges: Vec<usize> = conditioned.iter().map(|v| v.range).collect();
        let mut cells = BTreeMap::new();
        for key in assignments(&cond_ranges) {
            let dist = f(&key);
            cells.insert(key, dist);
        }
        Self::new(conditioned, targets, cells)
    }

    pub fn conditioned(&self) -> &[VarSpec] {
        &self.conditioned
    }

    pub fn targets(&self) -> &[VarSpec] {
        &self.targets
    }

    pub fn cells(&self) -> &BTreeMap<Vec<usize>, Dist<R>> {
        &self.cells
    }

    pub fn cell(&self, key: &[usize]) -> Result<&Dist<R>> {
        self.cells
            .get(key)
            .ok_or_else(|| Error::MissingCell(key.to_vec()))
    }

    pub fn defined_support(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cells.keys()
    }

    /// True when every conditioning tuple has a cell.
    pub fn has_full_support(&self) -> bool {
        let expected: usize = self.conditioned.iter().map(|v| v.range).product();
        self.cells.len() == expected
    }

    pub fn target_ranges(&self) -> Vec<usize> {
        self.targets.iter().map(|v| v.range).collect()
    }

    /// Row-major index of a target assignment inside a cell.
    pub fn target_index(&self, assignment: &[usize]) -> usize {
        flat_index(&self.target_ranges(), assignment)
    }

    pub fn target_var_index(&self, name: &str) -> Result<usize> {
        self.targets
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn conditioned_var_index(&self, name: &str) -> Result<usize> {
        self.conditioned
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Sums out all target variables not in `keep` (order follows `keep`),
    /// leaving the conditioning untouched.
    pub fn marginal_targets(&self, keep: &[&str]) -> Result<CondTable<R>> {
        let keep_idx: Vec<usize> = keep
            .iter()
            .map(|n| self.target_var_index(n))
            .collect::<Result<_>>()?;
        let out_targets: Vec<VarSpec> = keep_idx.iter().map(|&i| self.targets[i].clone()).collect();
        let out_ranges: Vec<usize> = out_targets.iter().map(|v| v.range).collect();
        let ranges = self.target_ranges();
        let mut cells = BTreeMap::new();
        for (key, dist) in &self.cells {
            let mut out = vec![R::zero(); out_ranges.iter().product()];
            for (a, p) in assignments(&ranges).zip(dist.iter()) {
                let proj: Vec<usize> = keep_idx.iter().map(|&i| a[i]).collect();
                out[flat_index(&out_ranges, &proj)] += p;
            }
            cells.insert(key.clone(), Dist::new(out)?);
        }
        CondTable::new(self.conditioned.clone(), out_targets, cells)
    }

    /// Moves target variable `name` into the conditioning set:
    /// `P_{T | C}` becomes `P_{T \ {V} | C, V}`, defined only where the
    /// marginal of `V` in the cell is positive.
    pub fn extend_conditioning(&self, name: &str) -> Result<CondTable<R>> {
        let vi = self.target_var_index(name)?;
        let v_range = self.targets[vi].range;
        let ranges = self.target_ranges();
        let out_targets: Vec<VarSpec> = self
            .targets
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != vi)
            .map(|(_, v)| v.clone())
            .collect();
        let out_ranges: Vec<usize> = out_targets.iter().map(|v| v.range).collect();
        let out_size: usize = out_ranges.iter().product::<usize>().max(1);
        let mut conditioned = self.conditioned.clone();
        conditioned.push(self.targets[vi].clone());

        let mut cells = BTreeMap::new();
        for (key, dist) in &self.cells {
            let mut buckets = vec![vec![R::zero(); out_size]; v_range];
            let mut masses = vec![R::zero(); v_range];
            for (a, p) in assignments(&ranges).zip(dist.iter()) {
                let v = a[vi];
                let proj: Vec<usize> = a
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != vi)
                    .map(|(_, &x)| x)
                    .collect();
                buckets[v][flat_index(&out_ranges, &proj)] += p;
                masses[v] += p;
            }
            for v in 0..v_range {
                if masses[v] > normalization_tol::<R>() {
                    let mut new_key = key.clone();
                    new_key.push(v);
                    let probs: Vec<R> = buckets[v].iter().map(|&p| p / masses[v]).collect();
                    cells.insert(new_key, Dist::new(probs)?);
                }
            }
        }
        CondTable::new(conditioned, out_targets, cells)
    }

    /// Pairs the table with a distribution over the conditioning tuples,
    /// yielding the joint `P_{C, T}`. Requires cells on the support of
    /// `weights`.
    pub fn to_joint(&self, weights: &JointTable<R>) -> Result<JointTable<R>> {
        let cond_names: Vec<&str> = self.conditioned.iter().map(|v| v.name.as_str()).collect();
        let weight_names: Vec<&str> = weights.vars().iter().map(|v| v.name.as_str()).collect();
        if cond_names != weight_names {
            return Err(Error::ShapeMismatch(format!(
                "weight variables {weight_names:?} do not match conditioning {cond_names:?}"
            )));
        }
        let mut vars = self.conditioned.clone();
        vars.extend(self.targets.iter().cloned());
        let cond_ranges: Vec<usize> = self.conditioned.iter().map(|v| v.range).collect();
        let target_size: usize = self.targets.iter().map(|v| v.range).product();
        let mut probs = Vec::with_capacity(weights.probs().len() * target_size);
        for key in assignments(&cond_ranges) {
            let w = weights.prob(&key);
            if w > normalization_tol::<R>() {
                let cell = self.cell(&key)?;
                probs.extend(cell.iter().map(|p| p * w));
            } else {
                probs.extend(std::iter::repeat(R::zero()).take(target_size));
            }
        }
        JointTable::new(vars, probs)
    }

    /// Largest absolute difference over cells defined in both tables; errors
    /// if the supports differ.
    pub fn max_abs_diff(&self, other: &Self) -> Result<R> {
        if self.target_ranges() != other.target_ranges() {
            return Err(Error::ShapeMismatch(
                "conditional tables differ in target shape".into(),
            ));
        }
        let mine: Vec<&Vec<usize>> = self.cells.keys().collect();
        let theirs: Vec<&Vec<usize>> = other.cells.keys().collect();
        if mine != theirs {
            return Err(Error::SupportMismatch(format!(
                "{} vs {} cells",
                mine.len(),
                theirs.len()
            )));
        }
        let mut worst = R::zero();
        for (key, dist) in &self.cells {
            worst = worst.max(dist.max_abs_diff(&other.cells[key])?);
        }
        Ok(worst)
    }
}
