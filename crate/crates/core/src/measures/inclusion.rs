//! Distributional inclusion measures over context vectors.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::space::ContextVector;

pub(crate) fn check_nonnegative(v: &ContextVector) -> Result<()> {
    match v.entries().iter().find(|e| e.1.is_nan() || e.1 < 0.0) {
        Some(&(feature, weight)) => Err(Error::NegativeWeight { feature, weight }),
        None => Ok(()),
    }
}

/// `Σ min(vx_c, vy_c)` over shared features, ascending by feature id.
pub(crate) fn min_overlap(vx: &ContextVector, vy: &ContextVector) -> f64 {
    let (a, b) = (vx.entries(), vy.entries());
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a[i].1.min(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

/// Ratio with the empty-vector guard.
pub(crate) fn cde_ratio(overlap: f64, total: f64) -> f64 {
    if total == 0.0 {
        0.0
    } else {
        overlap / total
    }
}

/// ClarkeDE: how much of `vx`'s weight is covered by `vy`.
pub fn clarke_de(vx: &ContextVector, vy: &ContextVector) -> Result<f64> {
    check_nonnegative(vx)?;
    check_nonnegative(vy)?;
    Ok(cde_ratio(min_overlap(vx, vy), vx.sum()))
}

pub(crate) fn inv_cl_from(cde_xy: f64, cde_second: f64) -> f64 {
    (cde_xy * (1.0 - cde_second)).sqrt()
}

/// `sqrt(CDE(x,y) * (1 - CDE(x,y)))`.
pub fn inv_cl(vx: &ContextVector, vy: &ContextVector) -> Result<f64> {
    let c = clarke_de(vx, vy)?;
    Ok(inv_cl_from(c, c))
}

/// `sqrt(CDE(x,y) * (1 - CDE(y,x)))`.
pub fn inv_cl_rev(vx: &ContextVector, vy: &ContextVector) -> Result<f64> {
    Ok(inv_cl_from(clarke_de(vx, vy)?, clarke_de(vy, vx)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InclusionMeasure {
    #[default]
    ClarkeDe,
    InvCl,
    InvClRev,
}

impl InclusionMeasure {
    pub const ALL: [InclusionMeasure; 3] = [InclusionMeasure::ClarkeDe, InclusionMeasure::InvCl, InclusionMeasure::InvClRev];

    pub fn name(self) -> &'static str {
        match self {
            InclusionMeasure::ClarkeDe => "clarkede",
            InclusionMeasure::InvCl => "invcl",
            InclusionMeasure::InvClRev => "invcl-rev",
        }
    }

    /// Evaluates from the two directed CDE values.
    pub fn from_cde(self, cde_xy: f64, cde_yx: f64) -> f64 {
        match self {
            InclusionMeasure::ClarkeDe => cde_xy,
            InclusionMeasure::InvCl => inv_cl_from(cde_xy, cde_xy),
            InclusionMeasure::InvClRev => inv_cl_from(cde_xy, cde_yx),
        }
    }

    pub fn apply(self, vx: &ContextVector, vy: &ContextVector) -> Result<f64> {
        match self {
            InclusionMeasure::ClarkeDe => clarke_de(vx, vy),
            InclusionMeasure::InvCl => inv_cl(vx, vy),
            InclusionMeasure::InvClRev => inv_cl_rev(vx, vy),
        }
    }
}

impl fmt::Display for InclusionMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InclusionMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        InclusionMeasure::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| Error::Config(format!("unknown measure {s:?}; expected clarkede, invcl or invcl-rev")))
    }
}
