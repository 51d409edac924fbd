//! Matrix and extension-descriptor files.
//!
//! Matrices are JSON arrays of rows of exact rationals written as strings
//! (`"3"`, `"-1/5"`). Plain JSON integers are accepted; floats are not.
//! Extension descriptors are `{"p": 5, "e": 3, "f": 1, "unit": "1"}` with an
//! optional `"basis"` of coordinate vectors.

use std::fmt;
use std::path::Path;

use ortho_core::ff::FF;
use ortho_core::mat::{MatFF, SymFormFF};
use ortho_core::rat::{format_rat, parse_rat, MatQ, Rat};
use ortho_core::tame::{AlgElem, TameExt};
use serde::Deserialize;
use serde_json::Value;

/// Bad input files or arguments (exit code 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

fn value_to_rat(v: &Value) -> Result<Rat, FormatError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| bad(format!("bad rational {s:?}: {e}"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_integer(i.into())),
            None => Err(bad(format!("{n} is not an integer; write fractions as \"num/den\" strings"))),
        },
        other => Err(bad(format!("expected a rational, found {other}"))),
    }
}

pub fn parse_matrix(text: &str) -> Result<MatQ, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("matrix is not JSON: {e}")))?;
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("each row must be an array"))?
                .iter()
                .map(value_to_rat)
                .collect()
        })
        .collect::<Result<_, _>>()?;
    MatQ::from_rows(rows).map_err(|e| bad(e.to_string()))
}

/// A matrix file, or one of the keywords `identity:N` and `j:N`.
pub fn load_matrix(spec: &str) -> Result<MatQ, FormatError> {
    if let Some(m) = keyword_matrix(spec)? {
        return Ok(m);
    }
    let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| bad(format!("cannot read {spec}: {e}")))?;
    parse_matrix(&text)
}

fn keyword_matrix(spec: &str) -> Result<Option<MatQ>, FormatError> {
    let (word, n) = match spec.split_once(':') {
        Some((w, n)) => (w, Some(n)),
        None => (spec, None),
    };
    let size = |default: usize| -> Result<usize, FormatError> {
        n.map_or(Ok(default), |n| n.parse().map_err(|_| bad(format!("bad size in {spec:?}"))))
    };
    Ok(match word {
        "identity" => Some(MatQ::identity(size(3)?)),
        "j" | "J" => Some(MatQ::j(size(3)?)),
        _ => None,
    })
}

/// Like [`load_matrix`], with `identity` and `j` sized to `n`.
pub fn load_matrix_sized(spec: &str, n: usize) -> Result<MatQ, FormatError> {
    match spec {
        "identity" => Ok(MatQ::identity(n)),
        "j" | "J" => Ok(MatQ::j(n)),
        _ => load_matrix(spec),
    }
}

pub fn matrix_json(m: &MatQ) -> Value {
    Value::Array(
        m.rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(format_rat(x))).collect())).collect(),
    )
}

/// Reduces an integral rational matrix into `F_q`. For prime `q` entries are
/// reduced mod `q`; otherwise each entry is an element code
/// `Σ c_i p^i` in the basis `1, x, …` of `F_q`.
pub fn matrix_over(f: &FF, m: &MatQ) -> Result<MatFF, FormatError> {
    let mut out = MatFF::zero(m.size());
    for i in 0..m.size() {
        for j in 0..m.size() {
            let x = m.get(i, j);
            if !x.is_integer() {
                return Err(bad(format!("entry {} is not an integer", format_rat(x))));
            }
            let n: i64 = x.to_integer().try_into().map_err(|_| bad("entry too large"))?;
            let v = if f.degree() == 1 {
                f.int(n)
            } else {
                if n < 0 || n as u64 >= f.size() {
                    return Err(bad(format!("element code {n} out of range for F_{}", f.size())));
                }
                f.from_code(n as u64)
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

pub fn matrix_ff_json(f: &FF, m: &MatFF) -> Value {
    Value::Array(
        (0..m.size())
            .map(|i| Value::Array((0..m.size()).map(|j| Value::from(m.get(f, i, j).code())).collect()))
            .collect(),
    )
}

pub fn form_over(f: &FF, m: &MatQ) -> Result<SymFormFF, FormatError> {
    SymFormFF::new(f, matrix_over(f, m)?).map_err(|e| bad(format!("form over F_{}: {e}", f.size())))
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionDescriptor {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    #[serde(default)]
    pub unit: Option<Value>,
    #[serde(default)]
    pub basis: Option<Vec<Vec<Value>>>,
}

impl ExtensionDescriptor {
    pub fn parse(text: &str) -> Result<ExtensionDescriptor, FormatError> {
        serde_json::from_str(text).map_err(|e| bad(format!("bad extension descriptor: {e}")))
    }

    pub fn unit(&self) -> Result<Option<Rat>, FormatError> {
        self.unit.as_ref().map(value_to_rat).transpose()
    }

    pub fn basis(&self, ext: &TameExt) -> Result<Option<Vec<AlgElem>>, FormatError> {
        let Some(b) = &self.basis else { return Ok(None) };
        b.iter()
            .map(|v| {
                let coords = v.iter().map(value_to_rat).collect::<Result<Vec<_>, _>>()?;
                ext.element(coords).map_err(|e| bad(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// Comma-separated rationals, e.g. `1,0,-1/3`.
pub fn parse_coords(s: &str) -> Result<Vec<Rat>, FormatError> {
    s.split(',').map(|t| parse_rat(t.trim()).map_err(|e| bad(format!("bad coordinate {t:?}: {e}")))).collect()
}

pub fn elem_json(x: &AlgElem) -> Value {
    Value::Array(x.coords.iter().map(|c| Value::String(format_rat(c))).collect())
}
