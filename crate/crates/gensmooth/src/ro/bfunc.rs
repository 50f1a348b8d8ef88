//! Interpolation parameter functions: positive functions on `(0, ∞)` with
//! `γ(1) = 1` and a finite dilation function.
//!
//! Unlike regularity functions these live on the whole positive half line, and
//! they are not assumed symmetric under `t -> 1/t`: a parameter can behave
//! like `t^0.2` for small arguments and `t^0.8` for large ones. Evaluation is
//! again done in log-log coordinates.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ro::RoFunction;

#[derive(Clone)]
enum Kind {
    /// `t^theta`.
    PowerLaw(f64),
    /// Normalized extension of a regularity function: `alpha(t)/alpha(1)` for
    /// `t >= 1`, reflected as `alpha(1)/alpha(1/t)` below 1.
    Star(Box<RoFunction>),
    /// `t^(-s0/(s1-s0)) * alpha~(t^(1/(s1-s0)))` for `t >= 1`, with the same
    /// reflection below 1; `alpha~` is the normalized `alpha`. This is the
    /// canonical parameter attached to a regularity function whose indices
    /// lie strictly inside `(s0, s1)`.
    FromAlpha {
        alpha: Box<RoFunction>,
        s0: f64,
        s1: f64,
        ln_alpha1: f64,
    },
    /// User-supplied `ln t -> ln γ(t)` map.
    Custom {
        ln_map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        label: String,
    },
}

/// A parameter function for the real interpolation method.
#[derive(Clone)]
pub struct BFunction {
    kind: Kind,
}

impl BFunction {
    /// The pure power `t^theta`.
    pub fn power(theta: f64) -> Self {
        Self {
            kind: Kind::PowerLaw(theta),
        }
    }

    /// Extends a regularity function to `(0, ∞)` by normalizing at 1 and
    /// reflecting: `γ(t) = α(t)/α(1)` for `t >= 1` and `α(1)/α(1/t)` below.
    pub fn star(alpha: &RoFunction) -> Self {
        Self {
            kind: Kind::Star(Box::new(alpha.clone())),
        }
    }

    pub(crate) fn from_alpha_unchecked(alpha: &RoFunction, s0: f64, s1: f64) -> Self {
        Self {
            kind: Kind::FromAlpha {
                alpha: Box::new(alpha.clone()),
                s0,
                s1,
                ln_alpha1: alpha.ln_value(0.0),
            },
        }
    }

    /// Wraps an arbitrary `ln t -> ln γ(t)` map. The map must vanish at 0
    /// (so that `γ(1) = 1`); anything else is rejected.
    pub fn custom<F>(label: impl Into<String>, ln_map: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if ln_map(0.0).abs() > 1e-12 {
            return Err(Error::Domain(
                "parameter function must equal 1 at t = 1".into(),
            ));
        }
        Ok(Self {
            kind: Kind::Custom {
                ln_map: Arc::new(ln_map),
                label: label.into(),
            },
        })
    }

    /// `ln γ(t)` at `w = ln t`, defined for all finite `w`.
    pub fn ln_value(&self, w: f64) -> f64 {
        match &self.kind {
            Kind::PowerLaw(theta) => theta * w,
            Kind::Star(alpha) => {
                if w >= 0.0 {
                    alpha.ln_value(w) - alpha.ln_value(0.0)
                } else {
                    -(alpha.ln_value(-w) - alpha.ln_value(0.0))
                }
            }
            Kind::FromAlpha {
                alpha,
                s0,
                s1,
                ln_alpha1,
            } => {
                let half = |u: f64| {
                    -s0 / (s1 - s0) * u + alpha.ln_value(u / (s1 - s0)) - ln_alpha1
                };
                if w >= 0.0 {
                    half(w)
                } else {
                    -half(-w)
                }
            }
            Kind::Custom { ln_map, .. } => ln_map(w),
        }
    }

    /// Evaluates `γ(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Domain(format!(
                "parameter functions are defined on (0, inf), got t = {t}"
            )));
        }
        Ok(self.ln_value(t.ln()).exp())
    }

    /// The exact power exponent when the parameter is a power law in
    /// disguise. A `star` of a log-power regularity function of power `r`
    /// has dilation exponent `r` on both sides; the canonical `FromAlpha`
    /// parameter shifts and rescales that to `(r - s0)/(s1 - s0)`.
    pub fn exact_power(&self) -> Option<f64> {
        match &self.kind {
            Kind::PowerLaw(theta) => Some(*theta),
            Kind::Star(alpha) => alpha.exact_power_index(),
            Kind::FromAlpha { alpha, s0, s1, .. } => {
                alpha.exact_power_index().map(|r| (r - s0) / (s1 - s0))
            }
            Kind::Custom { .. } => None,
        }
    }
}

impl fmt::Display for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::PowerLaw(theta) => write!(f, "t^{theta}"),
            Kind::Star(alpha) => write!(f, "star({alpha})"),
            Kind::FromAlpha { alpha, s0, s1, .. } => {
                write!(f, "gamma[{alpha}; {s0}, {s1}]")
            }
            Kind::Custom { label, .. } => write!(f, "{label}"),
        }
    }
}

impl fmt::Debug for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BFunction({self})")
    }
}
