//! JSON files describing presheaves on finite posets, and optionally a
//! morphism and a cover.
//!
//! ```json
//! {
//!   "points": ["a", "b"],
//!   "order": [["a", "b"]],
//!   "presheaf": {
//!     "dims": [{ "open": ["a", "b"], "dim": 1 }],
//!     "restrictions": [{ "from": ["a", "b"], "to": ["b"], "matrix": [["1/1"]] }]
//!   },
//!   "target": "sheafification",
//!   "cover": [["b"], ["a", "b"]]
//! }
//! ```
//!
//! `order` lists pairs `p <= q`. Opens are lists of point names. Matrix
//! entries are `"num/den"` strings or integers; `restrictions` from `U` to
//! `V` are `dim V x dim U`. `target` is either another presheaf, in which case
//! `maps` gives the morphism, or the string `"sheafification"` for the unit
//! `F -> F^#`.

use std::collections::BTreeMap;

use rinehart_core::linalg::Matrix;
use rinehart_core::polyring::{parse_rational, Rational};
use rinehart_core::sheafkit::{self, FinitePoset, Open, PresheafFS, PresheafMorphism};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DimSpec {
    open: Vec<String>,
    dim: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictionSpec {
    from: Vec<String>,
    to: Vec<String>,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresheafSpec {
    #[serde(default)]
    dims: Vec<DimSpec>,
    #[serde(default)]
    restrictions: Vec<RestrictionSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    open: Vec<String>,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TargetSpec {
    Named(String),
    Presheaf(PresheafSpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureSpec {
    points: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
    presheaf: PresheafSpec,
    target: Option<TargetSpec>,
    #[serde(default)]
    maps: Vec<MapSpec>,
    cover: Option<Vec<Vec<String>>>,
}

/// A loaded fixture.
#[derive(Debug)]
pub struct Fixture {
    pub poset: FinitePoset,
    pub presheaf: PresheafFS,
    pub morphism: Option<PresheafMorphism>,
    pub cover: Option<Vec<Open>>,
}

fn bad(message: impl Into<String>) -> CliError {
    CliError::user(format!("invalid fixture: {}", message.into()))
}

fn entry(e: &Entry) -> Result<Rational> {
    match e {
        Entry::Int(n) => Ok(Rational::from_integer((*n).into())),
        Entry::Text(s) => parse_rational(s).ok_or_else(|| bad(format!("`{s}` is not a rational number"))),
    }
}

fn matrix(rows: &[Vec<Entry>], rows_expected: usize, cols: usize, what: &str) -> Result<Matrix> {
    if rows.len() != rows_expected || rows.iter().any(|r| r.len() != cols) {
        return Err(bad(format!("{what} should be {rows_expected}x{cols}")));
    }
    let rows = rows.iter().map(|r| r.iter().map(entry).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows_with_cols(rows, cols))
}

fn open(poset: &FinitePoset, names: &[String]) -> Result<Open> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(poset.open_from_names(&refs)?)
}

fn presheaf(poset: &FinitePoset, spec: &PresheafSpec) -> Result<PresheafFS> {
    let mut dims = BTreeMap::new();
    for d in &spec.dims {
        if dims.insert(open(poset, &d.open)?, d.dim).is_some() {
            return Err(bad(format!("dimension of {:?} given twice", d.open)));
        }
    }
    let mut res = BTreeMap::new();
    for r in &spec.restrictions {
        let (u, v) = (open(poset, &r.from)?, open(poset, &r.to)?);
        let (du, dv) = (dims.get(&u).copied().unwrap_or(0), dims.get(&v).copied().unwrap_or(0));
        let m = matrix(&r.matrix, dv, du, &format!("restriction {:?} -> {:?}", r.from, r.to))?;
        if res.insert((u, v), m).is_some() {
            return Err(bad(format!("restriction {:?} -> {:?} given twice", r.from, r.to)));
        }
    }
    Ok(PresheafFS::new(poset.clone(), &dims, &res)?)
}

pub fn parse(text: &str) -> Result<Fixture> {
    let spec: FixtureSpec = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let index = |name: &str| {
        spec.points.iter().position(|p| p == name).ok_or_else(|| CliError::from(rinehart_core::Error::UnknownPoint(name.into())))
    };
    let pairs = spec.order.iter().map(|(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>>>()?;
    let poset = FinitePoset::from_pairs(spec.points.clone(), &pairs)?;
    let f = presheaf(&poset, &spec.presheaf)?;
    let morphism = match &spec.target {
        None => None,
        Some(TargetSpec::Named(n)) if n == "sheafification" => Some(sheafkit::sheafify(&f).unit),
        Some(TargetSpec::Named(n)) => return Err(bad(format!("unknown target `{n}`"))),
        Some(TargetSpec::Presheaf(g)) => {
            let g = presheaf(&poset, g)?;
            let mut maps = BTreeMap::new();
            for m in &spec.maps {
                let u = open(&poset, &m.open)?;
                maps.insert(u, matrix(&m.matrix, g.dim(u), f.dim(u), &format!("map on {:?}", m.open))?);
            }
            Some(PresheafMorphism::new(f.clone(), g, &maps)?)
        }
    };
    let cover = match &spec.cover {
        None => None,
        Some(c) => Some(c.iter().map(|names| open(&poset, names)).collect::<Result<Vec<_>>>()?),
    };
    Ok(Fixture { poset, presheaf: f, morphism, cover })
}

pub fn load(path: &std::path::Path) -> Result<Fixture> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::user(format!("cannot read fixture `{}`: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gluing_fixture() {
        let f = parse(
            r#"{ "points": ["a", "b"],
                 "presheaf": { "dims": [ {"open": ["a"], "dim": 1}, {"open": ["b"], "dim": 1}, {"open": ["a", "b"], "dim": 1} ],
                               "restrictions": [ {"from": ["a","b"], "to": ["a"], "matrix": [[1]]},
                                                 {"from": ["a","b"], "to": ["b"], "matrix": [["1/1"]]} ] },
                 "target": "sheafification",
                 "cover": [["a"], ["b"]] }"#,
        )
        .unwrap();
        assert!(!sheafkit::is_sheaf(&f.presheaf));
        assert_eq!(sheafkit::sheafify(&f.presheaf).sheaf.dim(0b11), 2);
        assert_eq!(f.cover, Some(vec![0b01, 0b10]));
        assert!(f.morphism.is_some());
    }

    #[test]
    fn malformed_fixtures() {
        assert!(parse("{").is_err());
        assert!(parse(r#"{"points": ["a"], "presheaf": {}, "extra": 1}"#).is_err());
        assert!(parse(r#"{"points": ["a"], "order": [["a", "z"]], "presheaf": {}}"#).is_err());
        let e = parse(r#"{"points": ["a","b"], "order": [["a","b"]], "presheaf": {"dims": [{"open": ["a"], "dim": 1}]}}"#);
        assert!(e.unwrap_err().message().contains("not open"));
        let e = parse(
            r#"{"points": ["a"], "presheaf": {"dims": [{"open": ["a"], "dim": 1}],
                "restrictions": [{"from": ["a"], "to": [], "matrix": [[1]]}]}}"#,
        );
        assert!(e.unwrap_err().message().contains("0x1"));
        let e = parse(r#"{"points": ["a"], "presheaf": {"dims": [{"open": ["a"], "dim": 1}]}, "target": "mystery"}"#);
        assert!(e.is_err());
    }
}
