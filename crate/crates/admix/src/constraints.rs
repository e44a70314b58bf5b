//! Constraint files: one JSON object with `N`, `P`, `a`, `phi0` and `phi1`.
//!
//! Each of `a`, `phi0`, `phi1` is either a vector of the right length or a
//! single integer broadcast to every row or locus.

use std::path::Path;

use admix_core::MarginSpec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Vector(Vec<usize>),
    Scalar(usize),
}

impl Field {
    fn expand(&self, len: usize) -> Vec<usize> {
        match self {
            Field::Vector(v) => v.clone(),
            Field::Scalar(s) => vec![*s; len],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub a: Field,
    pub phi0: Field,
    pub phi1: Field,
}

impl ConstraintFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_spec(&self) -> Result<MarginSpec> {
        Ok(MarginSpec::new(
            self.n,
            self.p,
            self.a.expand(self.n),
            self.phi0.expand(self.p),
            self.phi1.expand(self.p),
        )?)
    }
}

impl From<&MarginSpec> for ConstraintFile {
    fn from(spec: &MarginSpec) -> Self {
        Self {
            n: spec.n(),
            p: spec.p(),
            a: Field::Vector(spec.a().to_vec()),
            phi0: Field::Vector(spec.phi0().to_vec()),
            phi1: Field::Vector(spec.phi1().to_vec()),
        }
    }
}
