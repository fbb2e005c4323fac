use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::ContextId;
use crate::error::{Error, Result};

/// How often `x` shows up in a context relative to all its mentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Importance {
    /// `n_{i,x} / n_x`, zero when `x` is never mentioned.
    #[default]
    Ratio,
    Constant,
}

impl Importance {
    pub fn factor(self, n_x: u64, n_ix: u64) -> f64 {
        match self {
            Importance::Constant => 1.0,
            Importance::Ratio if n_x == 0 => 0.0,
            Importance::Ratio => n_ix as f64 / n_x as f64,
        }
    }
}

impl FromStr for Importance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RATIO" => Ok(Importance::Ratio),
            "CONSTANT" => Ok(Importance::Constant),
            _ => Err(Error::Config(format!("unknown importance function {s:?}"))),
        }
    }
}

pub const MINOR_CONTEXT_WEIGHT: f64 = 0.25;

/// Weights and switches for every scoring function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasureConfig {
    /// Reserved.
    pub w1: f64,
    /// Reserved.
    pub w2: f64,
    /// Section-title weight on the candidate's title count.
    pub w3: f64,
    /// Section-title weight on the inverse of the query's title count.
    pub w4: f64,
    /// Definition-text weight.
    pub w5: f64,
    /// Overrides keyed by context name. Missing contexts get 1, or
    /// [`MINOR_CONTEXT_WEIGHT`] for minor ones.
    pub context_weights: BTreeMap<String, f64>,
    pub importance: Importance,
    /// Share of the inclusion measure in the final score.
    pub alpha: f64,
    pub eps: f64,
    pub log_smoothing: bool,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            w1: 1.0,
            w2: 1.0,
            w3: 1.0,
            w4: 1.0,
            w5: 1.0,
            context_weights: BTreeMap::new(),
            importance: Importance::Ratio,
            alpha: 0.5,
            eps: 1e-9,
            log_smoothing: true,
        }
    }
}

fn check_weight(name: &str, w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("weight {name} must be finite and >= 0, got {w}")))
    }
}

impl MeasureConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: MeasureConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("w1", self.w1), ("w2", self.w2), ("w3", self.w3), ("w4", self.w4), ("w5", self.w5)] {
            check_weight(name, w)?;
        }
        for (name, &w) in &self.context_weights {
            name.parse::<ContextId>().map_err(Error::Config)?;
            check_weight(name, w)?;
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be > 0, got {}", self.eps)));
        }
        Ok(())
    }

    pub fn default_context_weight(ctx: ContextId) -> f64 {
        match ctx {
            ContextId::General(g) if g.is_minor() => MINOR_CONTEXT_WEIGHT,
            _ => 1.0,
        }
    }

    pub fn context_weight(&self, ctx: ContextId) -> f64 {
        self.context_weights
            .get(ctx.name())
            .copied()
            .unwrap_or_else(|| Self::default_context_weight(ctx))
    }

    /// All context weights indexed by [`ContextId::slot`].
    pub fn context_weight_table(&self) -> [f64; ContextId::COUNT] {
        let mut out = [0.0; ContextId::COUNT];
        for ctx in ContextId::all() {
            out[ctx.slot()] = self.context_weight(ctx);
        }
        out
    }

    /// Sets every context weight explicitly.
    pub fn with_uniform_context_weights(mut self, w: f64) -> Self {
        self.context_weights = ContextId::all().map(|c| (c.name().to_string(), w)).collect();
        self
    }
}

impl fmt::Display for Importance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Importance::Ratio => "RATIO",
            Importance::Constant => "CONSTANT",
        })
    }
}
