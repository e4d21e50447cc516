//! JSON wire formats for tables, states, POVMs, and parameter-state joints.
//!
//! Formats are documented in the README. Conditional tables serialize as
//!
//! ```json
//! {"conditioned": [{"name": "A", "range": 4}],
//!  "targets": [{"name": "X", "range": 2}],
//!  "cells": {"a=0": [0.5, 0.5]}}
//! ```
//!
//! with cell keys joining `<lowercased name>=<value>` with commas in
//! conditioned-variable order and probabilities row-major over target
//! tuples (last target fastest). Serialization is deterministic: object
//! keys are emitted in sorted order.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::quantum::{Povm, PureState};
use crate::real::Cplx;
use crate::table::{CondTable, JointTable, VarSpec};

fn bad(msg: impl Into<String>) -> Error {
    Error::Serialization(msg.into())
}

fn vars_to_json(vars: &[VarSpec]) -> Value {
    Value::Array(
        vars.iter()
            .map(|v| json!({"name": v.name, "range": v.range}))
            .collect(),
    )
}

fn vars_from_json(value: &Value) -> Result<Vec<VarSpec>> {
    value
        .as_array()
        .ok_or_else(|| bad("variable list must be an array"))?
        .iter()
        .map(|v| {
            let name = v
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("variable needs a string `name`"))?;
            let range = v
                .get("range")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("variable needs an integer `range`"))?;
            Ok(VarSpec::new(name, range as usize))
        })
        .collect()
}

/// Cell key: `a=0,b=1` in conditioned-variable order, lowercased names.
pub fn cell_key(conditioned: &[VarSpec], key: &[usize]) -> String {
    conditioned
        .iter()
        .zip(key)
        .map(|(v, i)| format!("{}={}", v.name.to_lowercase(), i))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_cell_key(conditioned: &[VarSpec], key: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != conditioned.len() {
        return Err(bad(format!(
            "cell key `{key}` has {} parts, expected {}",
            parts.len(),
            conditioned.len()
        )));
    }
    parts
        .iter()
        .zip(conditioned)
        .map(|(part, var)| {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("cell key part `{part}` is not name=value")))?;
            if name != var.name.to_lowercase() {
                return Err(bad(format!(
                    "cell key names `{name}`, expected `{}`",
                    var.name.to_lowercase()
                )));
            }
            value
                .parse::<usize>()
                .map_err(|_| bad(format!("cell key value `{value}` is not an index")))
        })
        .collect()
}

pub fn cond_table_to_json(table: &CondTable<f64>) -> Value {
    let mut cells = Map::new();
    for (key, dist) in table.cells() {
        cells.insert(
            cell_key(table.conditioned(), key),
            Value::Array(dist.iter().map(|p| json!(p)).collect()),
        );
    }
    json!({
        "conditioned": vars_to_json(table.conditioned()),
        "targets": vars_to_json(table.targets()),
        "cells": Value::Object(cells),
    })
}

pub fn cond_table_from_json(value: &Value) -> Result<CondTable<f64>> {
    let conditioned = vars_from_json(
        value
            .get("conditioned")
            .ok_or_else(|| bad("missing `conditioned`"))?,
    )?;
    let targets = vars_from_json(
        value
            .get("targets")
            .ok_or_else(|| bad("missing `targets`"))?,
    )?;
    let raw = value
        .get("cells")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing `cells` object"))?;
    let mut cells = BTreeMap::new();
    for (key, probs) in raw {
        let index = parse_cell_key(&conditioned, key)?;
        let probs: Vec<f64> = probs
            .as_array()
            .ok_or_else(|| bad("cell must be an array"))?
            .iter()
            .map(|p| p.as_f64().ok_or_else(|| bad("cell entry must be a number")))
            .collect::<Result<_>>()?;
        cells.insert(index, Dist::new(probs)?);
    }
    CondTable::new(conditioned, targets, cells)
}

pub fn joint_table_to_json(table: &JointTable<f64>) -> Value {
    json!({
        "vars": vars_to_json(table.vars()),
        "probs": table.probs(),
    })
}

pub fn joint_table_from_json(value: &Value) -> Result<JointTable<f64>> {
    let vars = vars_from_json(value.get("vars").ok_or_else(|| bad("missing `vars`"))?)?;
    let probs: Vec<f64> = value
        .get("probs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `probs` array"))?
        .iter()
        .map(|p| p.as_f64().ok_or_else(|| bad("probability must be a number")))
        .collect::<Result<_>>()?;
    JointTable::new(vars, probs)
}

/// State format: `{"dims": [2, 2], "amps": [[re, im], ...]}`.
pub fn pure_state_to_json(state: &PureState<f64>) -> Value {
    json!({
        "dims": state.dims(),
        "amps": state
            .amps()
            .iter()
            .map(|a| json!([a.re, a.im]))
            .collect::<Vec<_>>(),
    })
}

pub fn pure_state_from_json(value: &Value) -> Result<PureState<f64>> {
    let dims: Vec<usize> = value
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `dims`"))?
        .iter()
        .map(|d| {
            d.as_u64()
                .map(|d| d as usize)
                .ok_or_else(|| bad("dims must be integers"))
        })
        .collect::<Result<_>>()?;
    let amps: Vec<Cplx<f64>> = value
        .get("amps")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `amps`"))?
        .iter()
        .map(parse_complex)
        .collect::<Result<_>>()?;
    PureState::new(amps, dims)
}

fn parse_complex(value: &Value) -> Result<Cplx<f64>> {
    let pair = value
        .as_array()
        .filter(|p| p.len() == 2)
        .ok_or_else(|| bad("amplitude must be a [re, im] pair"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| bad("amplitude parts must be numbers"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| bad("amplitude parts must be numbers"))?;
    Ok(Cplx::new(re, im))
}

/// POVM format: `{"label": "a0", "dim": 2,
/// "elements": {"0": [[re, im], ...row-major...]}}`.
pub fn povm_to_json(povm: &Povm<f64>) -> Value {
    let mut elements = Map::new();
    for (x, e) in povm.elements().iter().enumerate() {
        let mut flat = Vec::with_capacity(e.len());
        for i in 0..e.nrows() {
            for j in 0..e.ncols() {
                flat.push(json!([e[(i, j)].re, e[(i, j)].im]));
            }
        }
        elements.insert(x.to_string(), Value::Array(flat));
    }
    json!({
        "label": povm.label(),
        "dim": povm.dim(),
        "elements": Value::Object(elements),
    })
}

pub fn povm_from_json(value: &Value) -> Result<Povm<f64>> {
    use nalgebra::DMatrix;
    let label = value
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing `label`"))?;
    let dim = value
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing `dim`"))? as usize;
    let raw = value
        .get("elements")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing `elements` object"))?;
    let mut ordered: Vec<(usize, &Value)> = Vec::with_capacity(raw.len());
    for (k, v) in raw {
        let outcome = k
            .parse::<usize>()
            .map_err(|_| bad(format!("outcome key `{k}` is not an index")))?;
        ordered.push((outcome, v));
    }
    ordered.sort_by_key(|(k, _)| *k);
    let mut elements = Vec::with_capacity(ordered.len());
    for (expected, (outcome, v)) in ordered.into_iter().enumerate() {
        if outcome != expected {
            return Err(bad(format!("outcome keys must be 0.., missing {expected}")));
        }
        let flat: Vec<Cplx<f64>> = v
            .as_array()
            .ok_or_else(|| bad("element must be an array"))?
            .iter()
            .map(parse_complex)
            .collect::<Result<_>>()?;
        if flat.len() != dim * dim {
            return Err(bad(format!(
                "element has {} entries, expected {}",
                flat.len(),
                dim * dim
            )));
        }
        elements.push(DMatrix::from_fn(dim, dim, |i, j| flat[i * dim + j]));
    }
    Povm::new(label, elements)
}

/// Parameter-state joint format: states, the `[Z, Psi]` joint, and the
/// prediction table.
pub fn ontic_joint_to_json(oj: &crate::onticity::OnticJoint<f64>) -> Value {
    json!({
        "psi_set": oj.psi_set.iter().map(pure_state_to_json).collect::<Vec<_>>(),
        "joint": joint_table_to_json(&oj.joint),
        "predictions": cond_table_to_json(&oj.predictions),
    })
}

pub fn ontic_joint_from_json(value: &Value) -> Result<crate::onticity::OnticJoint<f64>> {
    let psi_set: Vec<PureState<f64>> = value
        .get("psi_set")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `psi_set`"))?
        .iter()
        .map(pure_state_from_json)
        .collect::<Result<_>>()?;
    let joint = joint_table_from_json(
        value.get("joint").ok_or_else(|| bad("missing `joint`"))?,
    )?;
    let predictions = cond_table_from_json(
        value
            .get("predictions")
            .ok_or_else(|| bad("missing `predictions`"))?,
    )?;
    crate::onticity::OnticJoint::new(psi_set, joint, predictions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chained::quantum_chain_table;

    #[test]
    fn cond_table_round_trip() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        let v = cond_table_to_json(&t);
        assert!(v["cells"].get("a=0,b=1").is_some());
        let back = cond_table_from_json(&v).unwrap();
        assert!(t.max_abs_diff(&back).unwrap() < 1e-15);
    }

    #[test]
    fn cell_key_format_matches_schema() {
        let t = quantum_chain_table::<f64>(2).unwrap();
        assert_eq!(cell_key(t.conditioned(), &[1, 0]), "a=1,b=0");
    }

    #[test]
    fn state_round_trip() {
        let s = crate::embezzle::skewed_example_state::<f64>();
        let back = pure_state_from_json(&pure_state_to_json(&s)).unwrap();
        assert_eq!(s.dims(), back.dims());
        assert!(crate::quantum::fidelity(&s, &back).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn povm_round_trip() {
        let p: Povm<f64> = Povm::projective_qubit("a0", 0.7);
        let back = povm_from_json(&povm_to_json(&p)).unwrap();
        assert_eq!(back.n_outcomes(), 2);
        assert!(back.is_projective());
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(cond_table_from_json(&json!({"conditioned": []})).is_err());
        assert!(pure_state_from_json(&json!({"dims": [2]})).is_err());
        let t = quantum_chain_table::<f64>(2).unwrap();
        let mut v = cond_table_to_json(&t);
        v["cells"]["a=0,b=0"] = json!([0.9, 0.0, 0.0, 0.0]);
        assert!(cond_table_from_json(&v).is_err());
    }
}
