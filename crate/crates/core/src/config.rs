//! JSON description of an algebra: symbols, constraints, structure matrices
//! and the parameter Q.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffcalc::{CalculusSpec, DiffCalcError};
use crate::expr::{parse_expression, ParseError};
use crate::matrix::{MatrixError, StructureMatrix};
use crate::plane2d::{solve_q_branches, PlaneError, QBranch, QBranchLabel};
use crate::symring::{Coefficient, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Json(String),
    #[error("{field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("{0}")]
    Shape(String),
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error("unknown branch `{0}`")]
    UnknownBranch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    DiffCalc(#[from] DiffCalcError),
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDecl {
    pub name: String,
    #[serde(default = "yes")]
    pub invertible: bool,
}

/// Matrices are row-major in the pair basis `11, 12, ..., nn`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub symbols: Vec<SymbolDecl>,
    /// Polynomials set to zero.
    #[serde(default)]
    pub constraints: Vec<String>,
    pub dimension: usize,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<String>>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<String>>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<String>>>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// An expression, or a branch label such as `inverse_sqrt_r_plus`.
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
}

/// A parsed configuration. All values live in `ring`.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub ring: Arc<Ring>,
    pub n: usize,
    pub b: Option<StructureMatrix>,
    pub c: Option<StructureMatrix>,
    pub f: Option<StructureMatrix>,
    pub r: Option<StructureMatrix>,
    pub mu: Option<Coefficient>,
    pub lambda: Option<Coefficient>,
    pub q: Option<Coefficient>,
    pub branch: Option<QBranch>,
}

impl AlgebraConfig {
    pub fn from_json(src: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(src).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<Algebra, ConfigError> {
        if self.dimension == 0 || self.dimension > 4 {
            return Err(ConfigError::Shape(format!(
                "dimension must be between 1 and 4, got {}",
                self.dimension
            )));
        }
        let decls: Vec<(&str, bool)> = self
            .symbols
            .iter()
            .map(|s| (s.name.as_str(), s.invertible))
            .collect();
        let free = Ring::new(&decls)?;
        let polys = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, s)| expr(&free, &format!("constraints[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        let ring = if polys.is_empty() {
            free
        } else {
            free.constrained(&polys)?
        };
        let n = self.dimension;
        let matrix = |name: &str,
                      rows: &Option<Vec<Vec<String>>>|
         -> Result<Option<StructureMatrix>, ConfigError> {
            rows.as_ref()
                .map(|rows| parse_matrix(&ring, n, name, rows))
                .transpose()
        };
        let scalar = |name: &str, v: &Option<String>| -> Result<Option<Coefficient>, ConfigError> {
            v.as_ref().map(|s| expr(&ring, name, s)).transpose()
        };
        let mut alg = Algebra {
            ring: ring.clone(),
            n,
            b: matrix("B", &self.b)?,
            c: matrix("C", &self.c)?,
            f: matrix("F", &self.f)?,
            r: matrix("R", &self.r)?,
            mu: scalar("mu", &self.mu)?,
            lambda: scalar("lambda", &self.lambda)?,
            q: None,
            branch: None,
        };
        match self.q.as_deref().map(str::trim) {
            None => {}
            Some(label) if QBranchLabel::parse(label).is_some() => {
                let wanted = QBranchLabel::parse(label).unwrap();
                let c = alg.c.as_ref().ok_or(ConfigError::Missing("C"))?;
                let branch = solve_q_branches(c)?
                    .branches
                    .into_iter()
                    .find(|b| b.label == wanted)
                    .ok_or_else(|| ConfigError::UnknownBranch(label.to_string()))?;
                alg = alg.on_branch(branch)?;
            }
            Some(s) if s.chars().all(|c| c.is_ascii_lowercase() || c == '_') && s.contains('_') => {
                return Err(ConfigError::UnknownBranch(s.to_string()));
            }
            Some(s) => alg.q = Some(expr(&ring, "Q", s)?),
        }
        Ok(alg)
    }
}

fn expr(ring: &Arc<Ring>, field: &str, src: &str) -> Result<Coefficient, ConfigError> {
    parse_expression(ring, src).map_err(|source| ConfigError::Parse {
        field: field.to_string(),
        source,
    })
}

fn parse_matrix(
    ring: &Arc<Ring>,
    n: usize,
    name: &str,
    rows: &[Vec<String>],
) -> Result<StructureMatrix, ConfigError> {
    let d = n * n;
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(ConfigError::Shape(format!(
            "{name} must be {d}x{d} for dimension {n}"
        )));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| expr(ring, &format!("{name}[{i}][{j}]"), s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StructureMatrix::from_rows(n, parsed)?)
}

impl Algebra {
    /// Moves every value into the ring realising `branch` and sets Q.
    pub fn on_branch(self, branch: QBranch) -> Result<Algebra, ConfigError> {
        let (ring, q) = branch.instantiate(&self.ring)?;
        let mv = |m: Option<StructureMatrix>| m.map(|m| m.to_ring(&ring)).transpose();
        let mvc = |c: Option<Coefficient>| c.map(|c| c.to_ring(&ring)).transpose();
        Ok(Algebra {
            b: mv(self.b)?,
            c: mv(self.c)?,
            f: mv(self.f)?,
            r: mv(self.r)?,
            mu: mvc(self.mu)?,
            lambda: mvc(self.lambda)?,
            q: Some(q),
            branch: Some(branch),
            ring,
            n: self.n,
        })
    }

    pub fn calculus(&self) -> Result<CalculusSpec, ConfigError> {
        let b = self.b.clone().ok_or(ConfigError::Missing("B"))?;
        let c = self.c.clone().ok_or(ConfigError::Missing("C"))?;
        let q = self.q.clone().ok_or(ConfigError::Missing("Q"))?;
        Ok(CalculusSpec::assemble(b, c, self.f.clone(), q)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = r#"{
        "symbols": [{"name": "q"}, {"name": "r"}],
        "dimension": 2,
        "B": [["1","0","0","0"],["0","1 - q^-2","q^-1","0"],["0","q^-1","0","0"],["0","0","0","1"]],
        "C": [["r","0","0","0"],["0","r - 1","q","0"],["0","r/q","0","0"],["0","0","0","r"]],
        "Q": "inverse_sqrt_r_plus"
    }"#;

    #[test]
    fn branch_config_adjoins_square_root() {
        let alg = AlgebraConfig::from_json(PLANE).unwrap().build().unwrap();
        assert_eq!(alg.q.unwrap().to_string(), "r^-1*s");
        assert_eq!(alg.branch.unwrap().label, QBranchLabel::InverseSqrtPlus);
        assert!(alg.ring.symbol_index("s").is_some());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            AlgebraConfig::from_json("{"),
            Err(ConfigError::Json(_))
        ));
        let mut cfg = AlgebraConfig::from_json(PLANE).unwrap();
        cfg.q = Some("no_such_branch".into());
        assert!(matches!(cfg.build(), Err(ConfigError::UnknownBranch(_))));
        cfg.q = Some("1/(q+1)".into());
        assert!(matches!(cfg.build(), Err(ConfigError::Parse { .. })));
        cfg.q = None;
        cfg.b.as_mut().unwrap().pop();
        assert!(matches!(cfg.build(), Err(ConfigError::Shape(_))));
    }

    #[test]
    fn json_round_trip() {
        let cfg = AlgebraConfig::from_json(PLANE).unwrap();
        assert_eq!(AlgebraConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
