//! JSON configuration and its validation into engine objects.

use std::fmt;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use toricfano::rational::{self, Rational};
use toricfano::{
    Fan, FlagManifold, Letter, Painting, QMatrix, RootSystem, SimpleType, TauMap, VectorH,
};

/// A rational read from either a JSON integer or a string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::to_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rat(rational::int(n))),
            Raw::Str(s) => rational::parse(&s)
                .map(Rat)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::to_string(&self.0))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub letter: String,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseConfig {
    pub components: Vec<Component>,
    /// 1-based global node indices.
    #[serde(default)]
    pub crossed: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberConfig {
    ProjectiveSpace {
        dim: usize,
    },
    Fan {
        rays: Vec<Vec<i64>>,
        /// 0-based indices into `rays`.
        max_cones: Vec<Vec<usize>>,
    },
    Product {
        parts: Vec<FiberConfig>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScanConfig {
    /// Integer multiples `k·tau` for `k` in the closed range.
    Scales([i64; 2]),
    /// Every integer matrix with entries in `[−N, N]`.
    Box(i64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleConfig {
    pub base: BaseConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zk_basis: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocharacter_basis: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
}

impl BundleConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow!("{path}: {}", e.into_inner())
        })
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        Self::from_json(&text).with_context(|| format!("parsing {path}"))
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        if self.base.components.is_empty() {
            bail!("base.components: at least one simple component is required");
        }
        let mut types = Vec::new();
        for (i, c) in self.base.components.iter().enumerate() {
            let mut chars = c.letter.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(ch), None) => Letter::from_char(ch.to_ascii_uppercase()),
                _ => None,
            }
            .ok_or_else(|| {
                anyhow!(
                    "base.components[{i}].letter: expected one of A..G, got {:?}",
                    c.letter
                )
            })?;
            let ty = SimpleType::new(letter, c.rank)
                .map_err(|e| anyhow!("base.components[{i}]: {e}"))?;
            types.push(ty);
        }
        RootSystem::build(&types).map_err(|e| anyhow!("base.components: {e}"))
    }

    pub fn flag(&self) -> Result<FlagManifold> {
        let rs = self.root_system()?;
        let rank = rs.rank();
        let mut nodes = Vec::new();
        for (i, &node) in self.base.crossed.iter().enumerate() {
            if node == 0 || node > rank {
                bail!("base.crossed[{i}]: node {node} out of range 1..={rank}");
            }
            if nodes.contains(&(node - 1)) {
                bail!("base.crossed[{i}]: node {node} listed twice");
            }
            nodes.push(node - 1);
        }
        FlagManifold::build(rs, Painting::new(nodes)).map_err(|e| anyhow!("base.crossed: {e}"))
    }

    pub fn fan(&self) -> Result<Fan> {
        let fiber = self
            .fiber
            .as_ref()
            .ok_or_else(|| anyhow!("fiber: missing"))?;
        build_fan(fiber, "fiber")
    }

    /// The declared `z(k)` basis, if any, checked against the flag.
    pub fn zk_basis(&self, flag: &FlagManifold) -> Result<Option<Vec<VectorH>>> {
        self.zk_basis
            .as_ref()
            .map(|rows| vectors_in_center(flag, rows, "zk_basis"))
            .transpose()
    }

    pub fn cocharacters(&self, flag: &FlagManifold) -> Result<Option<Vec<VectorH>>> {
        self.cocharacter_basis
            .as_ref()
            .map(|rows| vectors_in_center(flag, rows, "cocharacter_basis"))
            .transpose()
    }

    /// The raw `tau` matrix, checked for shape `m × dim z(k)`.
    pub fn tau_matrix(&self, fiber_rank: usize, center_dim: usize) -> Result<QMatrix> {
        let rows = self.tau.as_ref().ok_or_else(|| anyhow!("tau: missing"))?;
        if rows.len() != fiber_rank {
            bail!(
                "tau: {} rows, but the fiber lattice has rank {fiber_rank}",
                rows.len()
            );
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != center_dim {
                bail!(
                    "tau[{i}]: {} entries, but z(k) has dimension {center_dim}",
                    row.len()
                );
            }
        }
        Ok(QMatrix::from_rows(
            center_dim,
            rows.iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect(),
        ))
    }

    pub fn tau(&self, flag: &FlagManifold, fiber_rank: usize) -> Result<TauMap> {
        if fiber_rank > 0 && flag.center_dim() == 0 {
            bail!("base.crossed: no crossed nodes, no bundle possible (m>0)");
        }
        let matrix = self.tau_matrix(fiber_rank, flag.center_dim())?;
        let basis = self.zk_basis(flag)?;
        TauMap::new(flag, matrix, basis).map_err(|e| anyhow!("tau: {e}"))
    }
}

fn build_fan(fiber: &FiberConfig, at: &str) -> Result<Fan> {
    match fiber {
        FiberConfig::ProjectiveSpace { dim } => {
            Fan::projective_space(*dim).map_err(|e| anyhow!("{at}.dim: {e}"))
        }
        FiberConfig::Fan { rays, max_cones } => {
            let dim = rays.first().map(Vec::len).unwrap_or(0);
            if dim == 0 {
                bail!("{at}.rays: at least one nonzero-dimensional ray is required");
            }
            Fan::new(dim, rays.clone(), max_cones.clone()).map_err(|e| anyhow!("{at}: {e}"))
        }
        FiberConfig::Product { parts } => {
            if parts.is_empty() {
                bail!("{at}.parts: at least one factor is required");
            }
            let mut fan = build_fan(&parts[0], &format!("{at}.parts[0]"))?;
            for (i, p) in parts.iter().enumerate().skip(1) {
                fan = fan.product(&build_fan(p, &format!("{at}.parts[{i}]"))?);
            }
            Ok(fan)
        }
    }
}

fn vectors_in_center(flag: &FlagManifold, rows: &[Vec<Rat>], field: &str) -> Result<Vec<VectorH>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != flag.rank() {
                bail!(
                    "{field}[{i}]: {} coordinates, root system has rank {}",
                    row.len(),
                    flag.rank()
                );
            }
            let v = VectorH(row.iter().map(|x| x.0.clone()).collect());
            flag.ensure_in_center(&v)
                .map_err(|e| anyhow!("{field}[{i}]: {e}"))?;
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_from_strings_and_integers() {
        let c = BundleConfig::from_json(
            r#"{"base": {"components": [{"letter": "A", "rank": 1}], "crossed": [1]},
                "fiber": {"kind": "projective_space", "dim": 1},
                "tau": [["-6/4"]], "zk_basis": [[-2]]}"#,
        )
        .unwrap();
        assert_eq!(c.tau.as_ref().unwrap()[0][0].to_string(), "-3/2");
        assert_eq!(c.zk_basis.as_ref().unwrap()[0][0].to_string(), "-2");
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = BundleConfig::from_json(
            r#"{"base": {"components": [{"letter": "A", "rank": 1}], "crossed": [1]}, "tau": [["1/0"]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("tau[0][0]"), "{err}");
        let err =
            BundleConfig::from_json(r#"{"base": {"components": [], "crosed": [1]}}"#).unwrap_err();
        assert!(err.to_string().contains("crosed"), "{err}");
    }

    #[test]
    fn validation_errors_name_the_field() {
        let c = BundleConfig::from_json(
            r#"{"base": {"components": [{"letter": "D", "rank": 5}], "crossed": [6]}}"#,
        )
        .unwrap();
        let err = c.flag().unwrap_err().to_string();
        assert!(err.starts_with("base.crossed[0]"), "{err}");
        let c =
            BundleConfig::from_json(r#"{"base": {"components": [{"letter": "D", "rank": 2}]}}"#)
                .unwrap();
        let err = c.flag().unwrap_err().to_string();
        assert!(err.starts_with("base.components[0]"), "{err}");
    }
}
