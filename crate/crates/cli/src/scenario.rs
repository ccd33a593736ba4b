//! Scenario documents: one JSON file describes a model, its parameters and an
//! optional sweep of overrides.

use std::path::Path;

use fracsis::{CaputoOrdersF64, CfOrderF64, EpidemicParamsF64, GridSpecF64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Caputo,
    CaputoFabrizio,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub beta: f64,
    pub gamma: f64,
    pub s0: f64,
    pub i0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub t_end: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaputoOrdersDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfOrderDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Normalisation `M(α)`; a constant, 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_alpha: Option<f64>,
}

/// Per-member overrides; any field left out falls back to the scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepMember {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub label: String,
    pub model: ModelKind,
    pub params: ParamsDoc,
    pub grid: GridDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caputo_orders: Option<CaputoOrdersDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf_order: Option<CfOrderDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepMember>,
}

/// A fully resolved run: validated parameters for every model it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub label: String,
    pub model: ModelKind,
    pub params: EpidemicParamsF64,
    pub grid: GridSpecF64,
    pub caputo: Option<CaputoOrdersF64>,
    pub cf: Option<CfOrderF64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// Resolves the sweep (or the scenario itself when there is none).
    pub fn members(&self) -> Result<Vec<Member>, CliError> {
        if self.sweep.is_empty() {
            let base = SweepMember {
                label: self.label.clone(),
                ..SweepMember::default()
            };
            return Ok(vec![self.resolve(&base)?]);
        }
        self.sweep.iter().map(|m| self.resolve(m)).collect()
    }

    fn resolve(&self, m: &SweepMember) -> Result<Member, CliError> {
        let fail =
            |e: fracsis::Error| CliError::Input(format!("{} / {}: {e}", self.label, m.label));
        let p = &self.params;
        let params = EpidemicParamsF64::new(
            m.beta.unwrap_or(p.beta),
            m.gamma.unwrap_or(p.gamma),
            m.s0.unwrap_or(p.s0),
            m.i0.unwrap_or(p.i0),
        )
        .map_err(fail)?;
        let grid = GridSpecF64::new(self.grid.t_end, self.grid.n_steps).map_err(fail)?;

        let co = self.caputo_orders.unwrap_or_default();
        let cf = self.cf_order.unwrap_or_default();
        let alpha = m.alpha.or(cf.alpha);
        let missing =
            |what: &str| CliError::Input(format!("{} / {}: missing {what}", self.label, m.label));

        let needs_caputo = matches!(self.model, ModelKind::Caputo | ModelKind::Compare);
        let needs_cf = matches!(self.model, ModelKind::CaputoFabrizio | ModelKind::Compare);

        let caputo = if needs_caputo {
            // Compare runs default to α1 = α, α2 = 1.
            let compare = self.model == ModelKind::Compare;
            let a1 = m
                .alpha1
                .or(co.alpha1)
                .or(if compare { alpha } else { None });
            let a2 = m
                .alpha2
                .or(co.alpha2)
                .or(if compare { Some(1.0) } else { None });
            let (a1, a2) = (
                a1.ok_or_else(|| missing("alpha1"))?,
                a2.ok_or_else(|| missing("alpha2"))?,
            );
            Some(CaputoOrdersF64::new(a1, a2).map_err(fail)?)
        } else {
            None
        };
        let cf = if needs_cf {
            let a = alpha.ok_or_else(|| missing("alpha"))?;
            let order =
                CfOrderF64::new(a, m.m_alpha.or(cf.m_alpha).unwrap_or(1.0)).map_err(fail)?;
            order.validate_with(&params).map_err(fail)?;
            Some(order)
        } else {
            None
        };

        Ok(Member {
            label: m.label.clone(),
            model: self.model,
            params,
            grid,
            caputo,
            cf,
        })
    }
}
