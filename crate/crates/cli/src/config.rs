//! The configuration file format.
//!
//! ```json
//! {"version": "1", "points": [{"x": ["0", "0", "1"], "y": ["1/2", "0", "1"]}, ...]}
//! ```
//!
//! Coordinates are exact rationals written as `"n"` or `"n/d"` with `d > 0`. Points have
//! either three coordinates (pairs in P^2 x P^2) or two (pairs in P^1 x P^1). The `y` entry
//! may be omitted only where a command says so.

use rankdrop::facesplit::{Config, ConfigP1, PointPair, MAX_PAIRS, MIN_PAIRS};
use rankdrop::linalg::{format_rat, parse_rat, Rat};
use rankdrop::projective::{PointP1, PointP2, ProjPoint};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const VERSION: &str = "1";

/// The shipped schema every input file is checked against before it is decoded.
pub const SCHEMA: &str = include_str!("../../../docs/schemas/config.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: String,
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub x: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported version {0:?}, expected \"1\"")]
    Version(String),
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("point {index}: {msg}")]
    Point { index: usize, msg: String },
    #[error("{0}")]
    Shape(String),
}

/// Parsed pairs. `y` is `None` where the file omitted it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pairs {
    P2(Vec<(PointP2, Option<PointP2>)>),
    P1(Vec<(PointP1, Option<PointP1>)>),
}

fn coords<const N: usize>(
    index: usize,
    side: &str,
    v: &[String],
) -> Result<ProjPoint<N>, InputError> {
    let bad = |msg: String| InputError::Point {
        index,
        msg: format!("{side}: {msg}"),
    };
    if v.len() != N {
        return Err(bad(format!("expected {N} coordinates, got {}", v.len())));
    }
    let rats: Vec<Rat> = v
        .iter()
        .map(|s| parse_rat(s).map_err(|e| bad(e.to_string())))
        .collect::<Result<_, _>>()?;
    ProjPoint::<N>::from_slice(&rats).map_err(|e| bad(e.to_string()))
}

fn side<const N: usize>(
    entries: &[PointEntry],
) -> Result<Vec<(ProjPoint<N>, Option<ProjPoint<N>>)>, InputError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let x = coords::<N>(i, "x", &e.x)?;
            let y = e.y.as_ref().map(|y| coords::<N>(i, "y", y)).transpose()?;
            Ok((x, y))
        })
        .collect()
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, InputError> {
        let value: Value = serde_json::from_str(text)?;
        match value.get("version") {
            Some(Value::String(v)) if v != VERSION => return Err(InputError::Version(v.clone())),
            _ => {}
        }
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is JSON");
        let validator = jsonschema::validator_for(&schema).expect("shipped schema compiles");
        if let Some(e) = validator.iter_errors(&value).next() {
            return Err(InputError::Schema {
                path: e.instance_path().to_string(),
                msg: e.to_string(),
            });
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn read(path: &str) -> Result<ConfigFile, InputError> {
        let text = if path == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(path)
        }
        .map_err(|source| InputError::Io {
            path: path.to_string(),
            source,
        })?;
        ConfigFile::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Validates coordinates and shape. Every point has the same dimension (2 or 3) and
    /// either every `y` is present or none is.
    pub fn pairs(&self) -> Result<Pairs, InputError> {
        let k = self.points.len();
        if !(MIN_PAIRS..=MAX_PAIRS).contains(&k) {
            return Err(InputError::Shape(format!(
                "need between {MIN_PAIRS} and {MAX_PAIRS} points, got {k}"
            )));
        }
        let dim = self.points[0].x.len();
        let ys = self.points.iter().filter(|p| p.y.is_some()).count();
        if ys != 0 && ys != k {
            return Err(InputError::Shape(
                "either every point has a y entry or none has".into(),
            ));
        }
        let pairs = match dim {
            3 => Pairs::P2(side::<3>(&self.points)?),
            2 => Pairs::P1(side::<2>(&self.points)?),
            d => {
                return Err(InputError::Shape(format!(
                    "points must have 2 or 3 coordinates, got {d}"
                )))
            }
        };
        Ok(pairs)
    }

    /// Pairs in P^2 x P^2 with both sides present.
    pub fn config(&self) -> Result<Config, InputError> {
        match self.pairs()? {
            Pairs::P2(v) => {
                let pairs = v
                    .into_iter()
                    .map(|(x, y)| y.map(|y| PointPair::new(x, y)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| InputError::Shape("every point needs a y entry".into()))?;
                Ok(Config::new(pairs).expect("size checked"))
            }
            Pairs::P1(_) => Err(InputError::Shape(
                "expected points with 3 coordinates".into(),
            )),
        }
    }

    pub fn config_p1(&self) -> Result<ConfigP1, InputError> {
        match self.pairs()? {
            Pairs::P1(v) => {
                let pairs = v
                    .into_iter()
                    .map(|(x, y)| y.map(|y| (x, y)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| InputError::Shape("every point needs a y entry".into()))?;
                ConfigP1::new(pairs).map_err(|e| InputError::Shape(e.to_string()))
            }
            Pairs::P2(_) => Err(InputError::Shape(
                "expected points with 2 coordinates".into(),
            )),
        }
    }

    /// The x points of a P^2 file, ignoring any y entries.
    pub fn x_points(&self) -> Result<Vec<PointP2>, InputError> {
        match self.pairs()? {
            Pairs::P2(v) => Ok(v.into_iter().map(|(x, _)| x).collect()),
            Pairs::P1(_) => Err(InputError::Shape(
                "expected points with 3 coordinates".into(),
            )),
        }
    }

    pub fn from_config(c: &Config) -> ConfigFile {
        ConfigFile {
            version: VERSION.into(),
            points: c
                .pairs()
                .iter()
                .map(|p| PointEntry {
                    x: point_strings(&p.x),
                    y: Some(point_strings(&p.y)),
                })
                .collect(),
        }
    }
}

/// Canonical integer coordinates as strings.
pub fn point_strings<const N: usize>(p: &ProjPoint<N>) -> Vec<String> {
    p.to_rats().iter().map(format_rat).collect()
}
