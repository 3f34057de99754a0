use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::symbolic::SymbolicCurvature;
use crate::expression::{
    format_rational, parse, parse_rational, Coord, ParseError, Poly4, Rational, RationalParseError,
};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("malformed metric file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parameter `{name}`: {source}")]
    Parameter {
        name: String,
        source: RationalParseError,
    },
    #[error("{field}: {source}")]
    Expression { field: String, source: ParseError },
}

/// The on-disk form of a metric: expressions are kept as text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MetricFile {
    pub label: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    pub psi33: String,
    pub psi34: String,
    pub psi44: String,
}

/// A Walker metric on R^4 with `g(∂1,∂3) = g(∂2,∂4) = 1` and
/// `g(∂i,∂j) = ψij` for `i, j ∈ {3, 4}`; all other entries vanish.
#[derive(Clone, Debug)]
pub struct WalkerMetric {
    pub label: String,
    pub parameters: BTreeMap<String, Rational>,
    pub psi33: Poly4,
    pub psi34: Poly4,
    pub psi44: Poly4,
    curvature: OnceLock<Arc<SymbolicCurvature>>,
}

impl PartialEq for WalkerMetric {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.parameters == other.parameters
            && self.psi33 == other.psi33
            && self.psi34 == other.psi34
            && self.psi44 == other.psi44
    }
}

impl WalkerMetric {
    pub fn new(label: impl Into<String>, psi33: Poly4, psi34: Poly4, psi44: Poly4) -> Self {
        WalkerMetric {
            label: label.into(),
            parameters: BTreeMap::new(),
            psi33,
            psi34,
            psi44,
            curvature: OnceLock::new(),
        }
    }

    /// The metric with all three `ψ` zero.
    pub fn flat() -> Self {
        WalkerMetric::new("flat", Poly4::zero(), Poly4::zero(), Poly4::zero())
    }

    /// The Walker metric with only `ψ34` nonzero.
    pub fn psi34_only(label: impl Into<String>, psi34: Poly4) -> Self {
        WalkerMetric::new(label, Poly4::zero(), psi34, Poly4::zero())
    }

    pub fn from_exprs(
        label: impl Into<String>,
        parameters: BTreeMap<String, Rational>,
        psi33: &str,
        psi34: &str,
        psi44: &str,
    ) -> Result<Self, MetricError> {
        let field = |name: &str, text: &str| {
            parse(text, &parameters).map_err(|source| MetricError::Expression {
                field: name.to_string(),
                source,
            })
        };
        let mut m = WalkerMetric::new(
            label,
            field("psi33", psi33)?,
            field("psi34", psi34)?,
            field("psi44", psi44)?,
        );
        m.parameters = parameters;
        Ok(m)
    }

    pub fn from_file(file: &MetricFile) -> Result<Self, MetricError> {
        let mut params = BTreeMap::new();
        for (name, text) in &file.parameters {
            let v = parse_rational(text).map_err(|source| MetricError::Parameter {
                name: name.clone(),
                source,
            })?;
            params.insert(name.clone(), v);
        }
        WalkerMetric::from_exprs(
            file.label.clone(),
            params,
            &file.psi33,
            &file.psi34,
            &file.psi44,
        )
    }

    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        WalkerMetric::from_file(&serde_json::from_str(text)?)
    }

    /// Parameters are already folded into the expressions, so they are
    /// recorded for provenance only.
    pub fn to_file(&self) -> MetricFile {
        MetricFile {
            label: self.label.clone(),
            parameters: self
                .parameters
                .iter()
                .map(|(k, v)| (k.clone(), format_rational(v)))
                .collect(),
            psi33: self.psi33.to_string(),
            psi34: self.psi34.to_string(),
            psi44: self.psi44.to_string(),
        }
    }

    /// `ψij` for `i, j ∈ {3, 4}` (one-based).
    pub fn psi(&self, i: usize, j: usize) -> &Poly4 {
        match (i.min(j), i.max(j)) {
            (3, 3) => &self.psi33,
            (3, 4) => &self.psi34,
            (4, 4) => &self.psi44,
            _ => panic!("ψ{i}{j} is not a free Walker entry"),
        }
    }

    /// True when every `ψ` depends on `x3, x4` only.
    pub fn is_strict(&self) -> bool {
        [&self.psi33, &self.psi34, &self.psi44]
            .iter()
            .all(|p| !p.depends_on(Coord::X1) && !p.depends_on(Coord::X2))
    }

    pub fn psi33_psi44_vanish(&self) -> bool {
        self.psi33.is_zero() && self.psi44.is_zero()
    }

    /// The polynomial curvature pipeline, built on first use and shared by clones.
    pub fn curvature(&self) -> &SymbolicCurvature {
        self.curvature
            .get_or_init(|| Arc::new(SymbolicCurvature::new(self)))
            .as_ref()
    }
}
