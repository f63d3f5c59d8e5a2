//! On-disk cache for precomputed recursion data, so the large G_m sets
//! (p = 17, 19) are computed once.
//!
//! Format: a single JSON document {p, F, G, U} with fixed field order, every
//! coefficient a decimal string, exponents plain integers, no floats:
//!   F: [[e1, e2, "coeff"], ...]
//!   G: [[[e1, ..., er, "coeff"], ...], ...]   (one inner list per G_m)
//!   U: ["...", ...]
//! Term order within each polynomial is the BTreeMap key order, so rebuilding
//! an existing file is byte-identical.

use crate::sympoly::{RecursionSet, SparsePoly};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed cache file: {0}")]
    Malformed(String),
    #[error("cache is for p = {found}, expected p = {expected}")]
    WrongP { found: u32, expected: u32 },
    #[error("cache data fails validation: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
struct CacheDoc {
    p: u32,
    #[serde(rename = "F")]
    f: Vec<Vec<Value>>,
    #[serde(rename = "G")]
    g: Vec<Vec<Vec<Value>>>,
    #[serde(rename = "U")]
    u: Vec<String>,
}

fn poly_to_terms(poly: &SparsePoly) -> Vec<Vec<Value>> {
    poly.terms
        .iter()
        .map(|(e, c)| {
            let mut row: Vec<Value> = e.iter().map(|&x| Value::from(x)).collect();
            row.push(Value::from(c.to_string()));
            row
        })
        .collect()
}

fn terms_to_poly(nvars: usize, terms: &[Vec<Value>]) -> Result<SparsePoly, CacheError> {
    let mut poly = SparsePoly::zero(nvars);
    for row in terms {
        if row.len() != nvars + 1 {
            return Err(CacheError::Malformed(format!(
                "term has {} entries, expected {}",
                row.len(),
                nvars + 1
            )));
        }
        let exp: Vec<u32> = row[..nvars]
            .iter()
            .map(|v| {
                v.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| CacheError::Malformed(format!("bad exponent {v}")))
            })
            .collect::<Result<_, _>>()?;
        let c = row[nvars]
            .as_str()
            .and_then(|s| BigInt::from_str(s).ok())
            .ok_or_else(|| CacheError::Malformed(format!("bad coefficient {}", row[nvars])))?;
        if c.is_zero() {
            return Err(CacheError::Malformed("explicit zero coefficient".into()));
        }
        poly.add_term(exp, c);
    }
    Ok(poly)
}

/// Serialize to the canonical JSON string (deterministic byte-for-byte).
pub fn to_json_string(rs: &RecursionSet) -> String {
    let doc = CacheDoc {
        p: rs.p,
        f: poly_to_terms(&rs.f),
        g: rs.g.iter().map(poly_to_terms).collect(),
        u: rs.u.iter().map(|c| c.to_string()).collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// Parse and validate a cache document.
pub fn from_json_str(data: &str, expected_p: u32) -> Result<RecursionSet, CacheError> {
    let doc: CacheDoc =
        serde_json::from_str(data).map_err(|e| CacheError::Malformed(e.to_string()))?;
    if doc.p != expected_p {
        return Err(CacheError::WrongP { found: doc.p, expected: expected_p });
    }
    let r = ((doc.p - 1) / 2) as usize;
    if doc.g.len() != r || doc.u.len() != r {
        return Err(CacheError::Malformed(format!(
            "expected {r} recursion polynomials and targets, found {} and {}",
            doc.g.len(),
            doc.u.len()
        )));
    }
    let f = terms_to_poly(2, &doc.f)?;
    let g = doc
        .g
        .iter()
        .map(|terms| terms_to_poly(r, terms))
        .collect::<Result<Vec<_>, _>>()?;
    let u = doc
        .u
        .iter()
        .map(|s| {
            BigInt::from_str(s).map_err(|_| CacheError::Malformed(format!("bad target {s}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rs = RecursionSet { p: doc.p, r: r as u32, f, g, u };
    validate(&rs)?;
    Ok(rs)
}

/// Cheap integrity checks against independently recomputed invariants.
fn validate(rs: &RecursionSet) -> Result<(), CacheError> {
    if rs.f != crate::sympoly::power_sum_f(rs.p) {
        return Err(CacheError::Invalid("F does not match the transfer polynomial".into()));
    }
    if rs.u != crate::sympoly::trace_constants(rs.p) {
        return Err(CacheError::Invalid("U does not match the trace constants".into()));
    }
    // one recursion step sends the target tuple U to e_m(2, ..., 2), because
    // F maps each zeta^i + zeta^-i to 2; a cheap full-coefficient smoke test
    let r = rs.r as usize;
    let twos = vec![BigInt::from(2); r];
    for (m, gm) in rs.g.iter().enumerate() {
        let expect = crate::sympoly::elementary_symmetric(r, m + 1).eval(&twos);
        if gm.eval(&rs.u) != expect {
            return Err(CacheError::Invalid(format!("G_{} fails the target-image check", m + 1)));
        }
    }
    Ok(())
}

pub fn save(rs: &RecursionSet, path: &Path) -> Result<(), CacheError> {
    std::fs::write(path, to_json_string(rs))?;
    Ok(())
}

pub fn load(path: &Path, expected_p: u32) -> Result<RecursionSet, CacheError> {
    let data = std::fs::read_to_string(path)?;
    from_json_str(&data, expected_p)
}

/// Load from `path` if present and valid; otherwise compute (and persist when a
/// path is given).
pub fn load_or_compute(p: u32, path: Option<&Path>) -> RecursionSet {
    if let Some(path) = path {
        if path.exists() {
            if let Ok(rs) = load(path, p) {
                return rs;
            }
        }
    }
    let rs = RecursionSet::compute(p);
    if let Some(path) = path {
        let _ = save(&rs, path); // cache write failure is not fatal
    }
    rs
}

/// Conventional cache file name for one p.
pub fn default_file_name(p: u32) -> String {
    format!("recursion_p{p}.json")
}
