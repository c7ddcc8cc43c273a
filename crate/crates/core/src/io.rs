//! JSON file formats.
//!
//! - poset: `{"labels": ["a", …], "covers": [["a", "b"], …]}`
//! - grid: `{"dim": d, "points": [[i, j, …], …]}`
//! - two-chain: `{"m": m, "n": n, "cross": [[i, j], …]}`

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grid::{is_convex_in_grid, GridShape};
use crate::poset::Poset;
use crate::two_chain::{TwoChainPoset, TwoChainSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub labels: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFile {
    pub dim: usize,
    pub points: Vec<Vec<u32>>,
}

impl From<&Poset> for PosetFile {
    fn from(p: &Poset) -> Self {
        PosetFile {
            labels: p.labels().to_vec(),
            covers: p
                .covers()
                .iter()
                .map(|&(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
                .collect(),
        }
    }
}

impl PosetFile {
    pub fn build(&self) -> Result<Poset> {
        Poset::from_covers(&self.labels, &self.covers)
    }
}

impl From<&GridShape> for GridFile {
    fn from(g: &GridShape) -> Self {
        GridFile {
            dim: g.dim,
            points: g.cells.clone(),
        }
    }
}

impl GridFile {
    pub fn build(&self) -> Result<(GridShape, Poset)> {
        for (index, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::ArityMismatch {
                    index,
                    expected: self.dim,
                    found: p.len(),
                });
            }
        }
        let report = is_convex_in_grid(&self.points)?;
        let shape = GridShape {
            dim: self.dim,
            cells: self.points.clone(),
            kind: report.kind(),
        };
        Ok((shape, report.poset))
    }
}

/// A parsed input file of any supported format.
#[derive(Debug, Clone)]
pub enum Input {
    Poset(Poset),
    Grid(GridShape, Poset),
    TwoChain(TwoChainPoset),
}

impl Input {
    pub fn poset(&self) -> &Poset {
        match self {
            Input::Poset(p) | Input::Grid(_, p) => p,
            Input::TwoChain(t) => &t.poset,
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Detects the format from the top-level keys.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if obj.contains_key("labels") {
        let f: PosetFile = serde_json::from_value(v).map_err(parse_err)?;
        Ok(Input::Poset(f.build()?))
    } else if obj.contains_key("points") {
        let f: GridFile = serde_json::from_value(v).map_err(parse_err)?;
        let (shape, p) = f.build()?;
        Ok(Input::Grid(shape, p))
    } else if obj.contains_key("m") && obj.contains_key("n") {
        let f: TwoChainSpec = serde_json::from_value(v).map_err(parse_err)?;
        Ok(Input::TwoChain(f.build()?))
    } else {
        Err(Error::Parse(
            "unrecognized format: expected labels/covers, dim/points or m/n/cross".into(),
        ))
    }
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string(&PosetFile::from(p)).expect("serializable")
}

pub fn grid_to_json(g: &GridShape) -> String {
    serde_json::to_string(&GridFile::from(g)).expect("serializable")
}

pub fn two_chain_to_json(t: &TwoChainPoset) -> String {
    serde_json::to_string(&TwoChainSpec::from(t)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{chain, young_diagram};

    #[test]
    fn poset_round_trip() {
        let p = chain(3);
        let json = poset_to_json(&p);
        assert_eq!(json, r#"{"labels":["c1","c2","c3"],"covers":[["c1","c2"],["c2","c3"]]}"#);
        assert_eq!(parse_input(&json).unwrap().poset(), &p);
    }

    #[test]
    fn grid_and_two_chain() {
        let (g, p) = young_diagram(&[2, 1]).unwrap();
        let back = parse_input(&grid_to_json(&g)).unwrap();
        assert!(matches!(&back, Input::Grid(s, _) if s.kind == crate::grid::GridKind::Ideal));
        assert_eq!(back.poset(), &p);
        let t = parse_input(r#"{"m":2,"n":3,"cross":[[1,2]]}"#).unwrap();
        assert_eq!(t.poset().len(), 5);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_input("[1]"), Err(Error::Parse(_))));
        assert!(matches!(parse_input("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_input(r#"{"x":1}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_input(r#"{"labels":["a","b"],"covers":[["a","z"]]}"#),
            Err(Error::UnknownElement(_))
        ));
        assert!(matches!(
            parse_input(r#"{"dim":2,"points":[[1,1],[1]]}"#),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_input(r#"{"labels":["a","b"],"covers":[["a","b"],["b","a"]]}"#),
            Err(Error::CycleDetected(_))
        ));
    }
}
