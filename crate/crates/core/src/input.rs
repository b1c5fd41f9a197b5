//! The JSON job format shared by every command.
//!
//! ```text
//! {"n": int, "torus_rank": int, "torsion": [int,...], "weights": [[int,...],...],
//!  "M": [[int,...],...]?, "D": [[int,...],...]?, "p": int?,
//!  "caps": {"frontier": int?, "degree": int?}?}
//! ```

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::hilbert::{ExponentVector, Limits};
use crate::repspec::{RepError, RepSpec};

const KEYS: &[&str] = &["n", "torus_rank", "torsion", "weights", "M", "D", "p", "caps"];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Caps {
    pub frontier: Option<usize>,
    pub degree: Option<u64>,
}

impl Caps {
    pub fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_frontier: self.frontier.unwrap_or(d.max_frontier),
            max_degree: self.degree.unwrap_or(d.max_degree),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobInput {
    pub rep: RepSpec,
    pub m: Option<Vec<ExponentVector>>,
    pub d: Option<Vec<ExponentVector>>,
    pub p: Option<BigInt>,
    pub caps: Caps,
}

fn field(path: &str, message: impl Into<String>) -> RepError {
    RepError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

fn int(v: &Value, path: &str) -> Result<BigInt, RepError> {
    match v {
        Value::Number(num) => num
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| field(path, "expected an integer")),
        _ => Err(field(path, "expected an integer")),
    }
}

fn count(v: &Value, path: &str) -> Result<usize, RepError> {
    int(v, path)?
        .to_usize()
        .ok_or_else(|| field(path, "expected a nonnegative integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, RepError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, RepError> {
    obj.get(key).ok_or_else(|| field(key, "missing required key"))
}

fn exponent_list(v: &Value, key: &str, n: usize) -> Result<Vec<ExponentVector>, RepError> {
    let mut out = Vec::new();
    for (i, row) in array(v, key)?.iter().enumerate() {
        let path = format!("{key}[{i}]");
        let entries = array(row, &path)?;
        if entries.len() != n {
            return Err(field(&path, format!("expected {n} entries, got {}", entries.len())));
        }
        let mut coords = Vec::with_capacity(n);
        for (j, x) in entries.iter().enumerate() {
            let p = format!("{path}[{j}]");
            let value = int(x, &p)?;
            coords.push(
                value
                    .to_u32()
                    .ok_or_else(|| field(&p, "exponents must be integers in [0, 2^32)"))?,
            );
        }
        out.push(ExponentVector::new(coords));
    }
    Ok(out)
}

impl JobInput {
    pub fn parse(text: &str) -> Result<Self, RepError> {
        let value: Value = serde_json::from_str(text).map_err(|e| RepError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let obj = value.as_object().ok_or_else(|| field("$", "expected a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(field(k, "unknown key"));
        }
        let n = count(required(obj, "n")?, "n")?;
        let torus_rank = count(required(obj, "torus_rank")?, "torus_rank")?;
        let torsion = array(required(obj, "torsion")?, "torsion")?
            .iter()
            .enumerate()
            .map(|(i, x)| int(x, &format!("torsion[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut weights = Vec::new();
        for (r, row) in array(required(obj, "weights")?, "weights")?.iter().enumerate() {
            let path = format!("weights[{r}]");
            let entries = array(row, &path)?
                .iter()
                .enumerate()
                .map(|(c, x)| int(x, &format!("{path}[{c}]")))
                .collect::<Result<Vec<_>, _>>()?;
            weights.push(entries);
        }
        let rep = RepSpec::new(n, torus_rank, torsion, weights)?;
        let m = obj.get("M").map(|v| exponent_list(v, "M", n)).transpose()?;
        let d = obj.get("D").map(|v| exponent_list(v, "D", n)).transpose()?;
        let p = obj.get("p").map(|v| int(v, "p")).transpose()?;
        let mut caps = Caps::default();
        if let Some(c) = obj.get("caps") {
            let c = c.as_object().ok_or_else(|| field("caps", "expected an object"))?;
            if let Some(k) = c.keys().find(|k| *k != "frontier" && *k != "degree") {
                return Err(field(&format!("caps.{k}"), "unknown key"));
            }
            if let Some(v) = c.get("frontier") {
                let f = count(v, "caps.frontier")?;
                if f == 0 {
                    return Err(field("caps.frontier", "must be positive"));
                }
                caps.frontier = Some(f);
            }
            if let Some(v) = c.get("degree") {
                let d = int(v, "caps.degree")?
                    .to_u64()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| field("caps.degree", "must be a positive integer"))?;
                caps.degree = Some(d);
            }
        }
        Ok(JobInput { rep, m, d, p, caps })
    }
}
