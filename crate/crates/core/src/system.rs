//! JSON system files: a shift plus named automorphisms.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::builtins;
use crate::code::{infer_inverse, verify_automorphism, Automorphism, SlidingBlockCode};
use crate::error::{Error, Result};
use crate::matrix::NonnegIntMatrix;
use crate::perron::DEFAULT_TOL;
use crate::shift::{kronecker_product, EdgeId, EdgeShift};
use crate::words::DEFAULT_BUDGET;

pub const DEFAULT_R_MAX: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftSpec {
    Matrix(Vec<Vec<i64>>),
    FullShift(u64),
    Builtin(String),
    Kronecker(Box<ShiftSpec>, Box<ShiftSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub window: Vec<EdgeId>,
    pub output: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub memory: usize,
    pub anticipation: usize,
    pub rule: Vec<RuleEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InverseSpec {
    /// Only `"infer"` is accepted.
    Infer(String),
    Code(CodeSpec),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<CodeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<InverseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub shift: ShiftSpec,
    #[serde(default)]
    pub automorphisms: BTreeMap<String, AutomorphismSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct System {
    pub shift: Arc<EdgeShift>,
    pub automorphisms: BTreeMap<String, Automorphism>,
    pub tol: f64,
    pub budget: u64,
}

fn located(path: impl Into<String>, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::NotInverse { .. } | Error::UnknownBuiltin(_) => e,
        other => Error::Parse { path: path.into(), message: other.to_string() },
    }
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse { path: e.path().to_string(), message: e.inner().to_string() })
}

pub fn load_system(path: &Path) -> Result<System> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    build_system(&parse_system(&text)?)
}

pub fn build_shift(spec: &ShiftSpec) -> Result<Arc<EdgeShift>> {
    Ok(match spec {
        ShiftSpec::Matrix(rows) => Arc::new(EdgeShift::new(NonnegIntMatrix::from_signed(rows)?)),
        ShiftSpec::FullShift(n) => builtins::full_shift(*n)?,
        ShiftSpec::Builtin(name) => builtins::builtin_shift(name)?,
        ShiftSpec::Kronecker(a, b) => Arc::new(kronecker_product(&build_shift(a)?, &build_shift(b)?)),
    })
}

fn build_code(shift: &Arc<EdgeShift>, spec: &CodeSpec) -> Result<SlidingBlockCode> {
    let pairs: Vec<(Vec<EdgeId>, EdgeId)> = spec.rule.iter().map(|r| (r.window.clone(), r.output)).collect();
    SlidingBlockCode::from_pairs(shift.clone(), shift.clone(), spec.memory, spec.anticipation, &pairs)
}

pub fn build_automorphism(shift: &Arc<EdgeShift>, name: &str, spec: &AutomorphismSpec) -> Result<Automorphism> {
    let at = format!("automorphisms.{name}");
    match (&spec.builtin, &spec.forward) {
        (Some(b), None) => builtins::make_builtin(b, &spec.params, Some(shift.clone())).map(|(_, a)| a).map_err(|e| located(&at, e)),
        (None, Some(fwd)) => {
            let f = build_code(shift, fwd).map_err(|e| located(format!("{at}.forward"), e))?;
            match &spec.inverse {
                Some(InverseSpec::Code(inv)) => {
                    let g = build_code(shift, inv).map_err(|e| located(format!("{at}.inverse"), e))?;
                    verify_automorphism(&f, &g)
                }
                Some(InverseSpec::Infer(s)) if s == "infer" => {
                    let g = infer_inverse(&f, spec.r_max.unwrap_or(DEFAULT_R_MAX))?;
                    verify_automorphism(&f, &g)
                }
                Some(InverseSpec::Infer(s)) => Err(Error::Parse { path: format!("{at}.inverse"), message: format!("expected \"infer\" or a rule table, got {s:?}") }),
                None => Err(Error::Parse { path: format!("{at}.inverse"), message: "missing inverse (give a rule table or \"infer\")".into() }),
            }
        }
        _ => Err(Error::Parse { path: at, message: "exactly one of \"builtin\" and \"forward\" is required".into() }),
    }
}

pub fn build_system(file: &SystemFile) -> Result<System> {
    let shift = build_shift(&file.shift).map_err(|e| located("shift", e))?;
    let mut automorphisms = BTreeMap::new();
    for (name, spec) in &file.automorphisms {
        automorphisms.insert(name.clone(), build_automorphism(&shift, name, spec)?);
    }
    Ok(System { shift, automorphisms, tol: file.tol.unwrap_or(DEFAULT_TOL), budget: file.budget.unwrap_or(DEFAULT_BUDGET) })
}

fn code_spec(code: &SlidingBlockCode) -> CodeSpec {
    CodeSpec {
        memory: code.memory(),
        anticipation: code.anticipation(),
        rule: code.pairs().into_iter().map(|(window, output)| RuleEntry { window, output }).collect(),
    }
}

/// Explicit rule-table form of an automorphism on its shift's matrix.
pub fn to_system_file(name: &str, auto: &Automorphism) -> SystemFile {
    let rows = auto.shift().matrix().to_i64_rows();
    let spec = AutomorphismSpec {
        forward: Some(code_spec(auto.forward())),
        inverse: Some(InverseSpec::Code(code_spec(auto.inverse_code()))),
        ..AutomorphismSpec::default()
    };
    SystemFile { shift: ShiftSpec::Matrix(rows), automorphisms: BTreeMap::from([(name.to_string(), spec)]), tol: None, budget: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_builtin_shift() {
        let s = build_system(&parse_system(r#"{"shift": {"builtin": "golden_mean"}}"#).unwrap()).unwrap();
        assert_eq!(s.shift.matrix().rows(), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn five_symbol_file() {
        let text = r#"{"shift": {"full_shift": 5}, "automorphisms": {"phi": {"builtin": "five_symbol"}}}"#;
        let s = build_system(&parse_system(text).unwrap()).unwrap();
        assert_eq!(s.automorphisms["phi"].shift().num_edges(), 5);
    }

    #[test]
    fn missing_window_is_located() {
        let text = r#"{"shift": {"full_shift": 2}, "automorphisms": {"f": {"forward": {"memory": 0, "anticipation": 0, "rule": [{"output": 1}]}, "inverse": "infer"}}}"#;
        match parse_system(text).unwrap_err() {
            Error::Parse { path, message } => {
                assert_eq!(path, "automorphisms.f.forward.rule[0]");
                assert!(message.contains("window"), "{message}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn inferred_inverse() {
        let text = r#"{"shift": {"full_shift": 2}, "automorphisms": {"flip": {"forward": {"memory": 0, "anticipation": 0,
            "rule": [{"window": [0], "output": 1}, {"window": [1], "output": 0}]}, "inverse": "infer"}}}"#;
        let s = build_system(&parse_system(text).unwrap()).unwrap();
        assert!(s.automorphisms["flip"].power(2).unwrap().is_identity());
    }

    #[test]
    fn unknown_builtin() {
        let text = r#"{"shift": {"full_shift": 2}, "automorphisms": {"x": {"builtin": "nope"}}}"#;
        assert_eq!(build_system(&parse_system(text).unwrap()).unwrap_err(), Error::UnknownBuiltin("nope".into()));
    }
}
