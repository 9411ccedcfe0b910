//! JSON documents tagged by `"kind"`: fan, polytope, divisor and system.
//!
//! Integers may be JSON numbers or decimal strings; rationals are strings such
//! as `"-3/4"` or integers. Output uses numbers below 2^53 and strings above.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use toric_core::{DualVector, Fan, Int, LatticePolytope, LatticeVector, LaurentPolynomial, Rat, TDivisor};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}:{line}: {message}")]
    Invalid { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// An integer given either as a JSON number or as a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn int(&self) -> Result<Int, String> {
        match self {
            Num::Int(n) => Ok(Int::from(*n)),
            Num::Text(s) => Int::from_str(s.trim()).map_err(|_| format!("`{s}` is not an integer")),
        }
    }

    fn rat(&self) -> Result<Rat, String> {
        match self {
            Num::Int(n) => Ok(Rat::from_integer(Int::from(*n))),
            Num::Text(s) => parse_rat(s),
        }
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).map_err(|_| bad())?;
            let d = Int::from_str(d.trim()).map_err(|_| bad())?;
            if d == Int::from(0) {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(Rat::new(n, d))
        }
        None => Int::from_str(s).map(Rat::from_integer).map_err(|_| bad()),
    }
}

pub fn int_json(x: &Int) -> Value {
    const LIMIT: i64 = 1 << 53;
    match i64::try_from(x.clone()) {
        Ok(n) if n.abs() < LIMIT => json!(n),
        _ => json!(x.to_string()),
    }
}

pub fn rat_json(x: &Rat) -> Value {
    if x.is_integer() {
        int_json(x.numer())
    } else {
        json!(x.to_string())
    }
}

fn ints_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Document {
    Fan {
        dim: usize,
        rays: Vec<Vec<Num>>,
        cones: Vec<Vec<usize>>,
    },
    Polytope {
        dim: usize,
        points: Vec<Vec<Num>>,
    },
    Divisor {
        coefficients: Vec<Num>,
        rays: Option<Vec<Vec<Num>>>,
    },
    System {
        dim: usize,
        polynomials: Vec<Vec<Term>>,
        #[serde(default)]
        roots: Vec<Root>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    exponent: Vec<Num>,
    coefficient: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Root {
    point: Vec<Num>,
    #[serde(default = "one")]
    multiplicity: Num,
}

fn one() -> Num {
    Num::Int(1)
}

/// Loaded source text, kept for line numbers in diagnostics.
pub struct Source {
    pub path: String,
    pub text: String,
}

impl Source {
    pub fn read(path: &str) -> Result<Source, FormatError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.into(), message: e.to_string() })?;
        Ok(Source { path: path.into(), text })
    }

    fn document(&self) -> Result<Document, FormatError> {
        serde_json::from_str(&self.text).map_err(|e| FormatError::Parse {
            path: self.path.clone(),
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
        })
    }

    fn invalid(&self, key: &str, index: Option<usize>, message: impl Into<String>) -> FormatError {
        FormatError::Invalid { path: self.path.clone(), line: locate(&self.text, key, index), message: message.into() }
    }

    fn wrong_kind(&self, expected: &str) -> FormatError {
        self.invalid("kind", None, format!("expected a {expected} document"))
    }
}

/// Line of `"key"` in the text, or of its `index`-th array element.
fn locate(text: &str, key: &str, index: Option<usize>) -> usize {
    let needle = format!("\"{key}\"");
    let Some(start) = text.find(&needle) else { return 1 };
    let line_at = |pos: usize| text[..pos].matches('\n').count() + 1;
    let Some(index) = index else { return line_at(start) };
    let bytes = text.as_bytes();
    let mut pos = start + needle.len();
    while pos < bytes.len() && bytes[pos] != b'[' {
        pos += 1;
    }
    let (mut depth, mut count, mut in_string, mut expecting) = (0usize, 0usize, false, true);
    while pos < bytes.len() {
        let c = bytes[pos];
        if in_string {
            if c == b'\\' {
                pos += 1;
            } else if c == b'"' {
                in_string = false;
            }
        } else {
            match c {
                b'[' | b'{' => {
                    if depth == 1 && expecting {
                        if count == index {
                            return line_at(pos);
                        }
                        count += 1;
                        expecting = false;
                    }
                    depth += 1;
                }
                b']' | b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                b',' if depth == 1 => expecting = true,
                b'"' => {
                    if depth == 1 && expecting {
                        if count == index {
                            return line_at(pos);
                        }
                        count += 1;
                        expecting = false;
                    }
                    in_string = true;
                }
                c if depth == 1 && expecting && (c == b'-' || c.is_ascii_digit()) => {
                    if count == index {
                        return line_at(pos);
                    }
                    count += 1;
                    expecting = false;
                }
                _ => {}
            }
        }
        pos += 1;
    }
    line_at(start)
}

fn int_vec(src: &Source, key: &str, index: usize, v: &[Num]) -> Result<Vec<Int>, FormatError> {
    v.iter().map(|n| n.int()).collect::<Result<_, _>>().map_err(|m| src.invalid(key, Some(index), m))
}

fn check_len(src: &Source, key: &str, index: usize, len: usize, dim: usize) -> Result<(), FormatError> {
    if len == dim {
        Ok(())
    } else {
        Err(src.invalid(key, Some(index), format!("expected {dim} coordinates, found {len}")))
    }
}

pub fn load_fan(src: &Source) -> Result<Fan, FormatError> {
    let Document::Fan { dim, rays, cones } = src.document()? else { return Err(src.wrong_kind("fan")) };
    let mut vs = Vec::with_capacity(rays.len());
    for (i, r) in rays.iter().enumerate() {
        check_len(src, "rays", i, r.len(), dim)?;
        vs.push(LatticeVector::new(int_vec(src, "rays", i, r)?));
    }
    Fan::new(dim, vs.clone(), cones.clone()).map_err(|e| {
        use toric_core::Error;
        let (key, index) = match &e {
            Error::ZeroRay(i) | Error::NonPrimitiveRay(i) | Error::UnusedRay(i) => ("rays", Some(*i)),
            Error::DuplicateRay(_, j) => ("rays", Some(*j)),
            Error::RayIndexOutOfRange { index, .. } => ("cones", cones.iter().position(|c| c.contains(index))),
            _ => ("cones", None),
        };
        src.invalid(key, index, e.to_string())
    })
}

pub fn load_polytope(src: &Source) -> Result<LatticePolytope, FormatError> {
    let Document::Polytope { dim, points } = src.document()? else { return Err(src.wrong_kind("polytope")) };
    let mut pts = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        check_len(src, "points", i, p.len(), dim)?;
        pts.push(DualVector::new(int_vec(src, "points", i, p)?));
    }
    LatticePolytope::from_points(dim, pts).map_err(|e| src.invalid("points", None, e.to_string()))
}

pub fn load_divisor(src: &Source, fan: &Fan) -> Result<TDivisor, FormatError> {
    let Document::Divisor { coefficients, rays } = src.document()? else { return Err(src.wrong_kind("divisor")) };
    if let Some(rays) = rays {
        if rays.len() != fan.rays().len() {
            return Err(src.invalid(
                "rays",
                None,
                format!("{} rays listed, the fan has {}", rays.len(), fan.rays().len()),
            ));
        }
        for (i, r) in rays.iter().enumerate() {
            let v = LatticeVector::new(int_vec(src, "rays", i, r)?);
            if &v != fan.ray(i) {
                return Err(src.invalid("rays", Some(i), format!("ray {v} does not match fan ray {}", fan.ray(i))));
            }
        }
    }
    let c = coefficients
        .iter()
        .map(Num::int)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| src.invalid("coefficients", None, m))?;
    TDivisor::new(fan, c).map_err(|e| src.invalid("coefficients", None, e.to_string()))
}

pub struct System {
    pub polynomials: Vec<LaurentPolynomial>,
    pub roots: Vec<(Vec<Rat>, Int)>,
}

pub fn load_system(src: &Source) -> Result<System, FormatError> {
    let Document::System { dim, polynomials, roots } = src.document()? else { return Err(src.wrong_kind("system")) };
    let mut polys = Vec::with_capacity(polynomials.len());
    for (i, terms) in polynomials.iter().enumerate() {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            check_len(src, "polynomials", i, t.exponent.len(), dim)?;
            let m = DualVector::new(int_vec(src, "polynomials", i, &t.exponent)?);
            let c = t.coefficient.rat().map_err(|m| src.invalid("polynomials", Some(i), m))?;
            parsed.push((m, c));
        }
        polys.push(
            LaurentPolynomial::from_terms(dim, parsed)
                .map_err(|e| src.invalid("polynomials", Some(i), e.to_string()))?,
        );
    }
    let mut pts = Vec::with_capacity(roots.len());
    for (i, r) in roots.iter().enumerate() {
        check_len(src, "roots", i, r.point.len(), dim)?;
        let x = r
            .point
            .iter()
            .map(Num::rat)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| src.invalid("roots", Some(i), m))?;
        let mult = r.multiplicity.int().map_err(|m| src.invalid("roots", Some(i), m))?;
        pts.push((x, mult));
    }
    Ok(System { polynomials: polys, roots: pts })
}

pub fn fan_json(fan: &Fan) -> Value {
    json!({
        "kind": "fan",
        "dim": fan.dim(),
        "rays": fan.rays().iter().map(|r| ints_json(r.coords())).collect::<Vec<_>>(),
        "cones": fan.maximal_cones(),
    })
}

pub fn divisor_json(fan: &Fan, d: &TDivisor) -> Value {
    json!({
        "kind": "divisor",
        "rays": fan.rays().iter().map(|r| ints_json(r.coords())).collect::<Vec<_>>(),
        "coefficients": ints_json(d.coefficients()),
    })
}
