//! Instance and report files.
//!
//! Both are JSON documents with integer matrices written row by row. See
//! `docs/FORMAT.md` for the grammar.

use cecot_core::{CatParams, Complex, Mat, Module, PrimeField};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const INSTANCE_FORMAT: &str = "cecot-instance/1";
pub const REPORT_FORMAT: &str = "cecot-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub p: u64,
    pub m: usize,
}

/// A complex on degrees `lo .. lo + dims.len()`.
///
/// `actions[k]` is the `dims[k] × dims[k]` matrix of `x` on the entry in
/// degree `lo + k`; `differentials[k]` is `d^(lo+k)`, of shape
/// `dims[k+1] × dims[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub actions: Vec<Vec<Vec<u64>>>,
    pub differentials: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub params: ParamsSpec,
    pub complex: ComplexSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl InstanceFile {
    pub fn from_complex(x: &Complex, metadata: Option<Metadata>) -> Self {
        let params = x.params();
        InstanceFile {
            format: INSTANCE_FORMAT.into(),
            params: ParamsSpec {
                p: params.field().p(),
                m: params.m(),
            },
            complex: ComplexSpec::from_complex(x),
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if inst.format != INSTANCE_FORMAT {
            return Err(CliError::Parse(format!(
                "unsupported format tag {:?}, expected {INSTANCE_FORMAT:?}",
                inst.format
            )));
        }
        Ok(inst)
    }

    pub fn params(&self) -> Result<CatParams, CliError> {
        CatParams::from_ints(self.params.p, self.params.m).map_err(CliError::Invalid)
    }

    /// Builds the complex, re-checking every module and complex invariant.
    pub fn to_complex(&self) -> Result<Complex, CliError> {
        let params = self.params()?;
        self.complex.to_complex(params)
    }

    pub fn to_text(&self) -> String {
        to_text(&serde_json::to_value(self).expect("instance serializes"))
    }
}

impl ComplexSpec {
    pub fn from_complex(x: &Complex) -> Self {
        if x.is_zero() {
            return ComplexSpec {
                lo: 0,
                dims: Vec::new(),
                actions: Vec::new(),
                differentials: Vec::new(),
            };
        }
        ComplexSpec {
            lo: x.lo(),
            dims: x.degrees().map(|n| x.dim(n)).collect(),
            actions: x.degrees().map(|n| x.module(n).action().to_rows()).collect(),
            differentials: (x.lo()..x.hi()).map(|n| x.diff_mat(n).to_rows()).collect(),
        }
    }

    pub fn to_complex(&self, params: CatParams) -> Result<Complex, CliError> {
        let fld = params.field();
        let len = self.dims.len();
        if self.actions.len() != len {
            return Err(CliError::Parse(format!(
                "{} action matrices for {len} degrees",
                self.actions.len()
            )));
        }
        let expected = len.saturating_sub(1);
        if self.differentials.len() != expected {
            return Err(CliError::Parse(format!(
                "{} differentials for {len} degrees, expected {expected}",
                self.differentials.len()
            )));
        }
        let mut modules = Vec::with_capacity(len);
        for (k, (&d, rows)) in self.dims.iter().zip(&self.actions).enumerate() {
            let degree = self.lo + k as i64;
            let a = matrix(fld, rows, d, d).map_err(|e| located(degree, format!("action: {e}")))?;
            let m = Module::new(params, a).map_err(|e| located(degree, e.to_string()))?;
            modules.push(m);
        }
        let mut diffs = Vec::with_capacity(expected);
        for (k, rows) in self.differentials.iter().enumerate() {
            let degree = self.lo + k as i64;
            let d = matrix(fld, rows, self.dims[k + 1], self.dims[k])
                .map_err(|e| located(degree, format!("differential: {e}")))?;
            diffs.push(d);
        }
        if len == 0 {
            return Ok(Complex::zero(params));
        }
        Complex::new(params, self.lo, modules, diffs).map_err(CliError::Invalid)
    }
}

fn located(degree: i64, reason: String) -> CliError {
    CliError::Invalid(cecot_core::Error::InvalidComplex { degree, reason })
}

/// Reads a `rows × cols` matrix with entries in `[0, p)`.
pub fn matrix(fld: PrimeField, data: &[Vec<u64>], rows: usize, cols: usize) -> Result<Mat, String> {
    if data.len() != rows {
        return Err(format!("expected {rows} rows, found {}", data.len()));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (r, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(format!("row {r} has {} entries, expected {cols}", row.len()));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= fld.p()) {
            return Err(format!("entry {v} in row {r} is not reduced mod {}", fld.p()));
        }
        flat.extend_from_slice(row);
    }
    Mat::from_vec(fld, rows, cols, flat).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub command: String,
    /// `sha256:` followed by the hex digest of the input file bytes.
    pub input_digest: String,
    pub parameters: Value,
    pub passed: bool,
    pub checks: Vec<cecot_core::Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
}

impl ReportFile {
    pub fn to_text(&self) -> String {
        to_text(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Writes JSON with two-space indentation, keeping arrays of scalars on one
/// line so that each matrix row is a line. Ends with a newline.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, it) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&it.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, it) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(it, indent + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(val, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
