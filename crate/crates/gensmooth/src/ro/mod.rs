//! Regularity functions and their calculus.
//!
//! A regularity function is a strictly positive function on `[1, ∞)` whose
//! dilation ratios `α(λt)/α(t)` stay bounded on bounded `λ` ranges. Such
//! functions generalize the power weights `t^s` that grade classical
//! smoothness spaces: products of powers, powers of (clamped) logarithms and
//! iterated logarithms, tabulated functions, and interpolation combinations
//! of all of these.
//!
//! The module provides the function type itself ([`RoFunction`]), parameter
//! functions for the real interpolation method ([`BFunction`]), growth-index
//! estimation, and the parameter calculus that decomposes one space as an
//! interpolation space between others.

mod bfunc;
mod expr;
mod indices;
mod params;

pub use bfunc::BFunction;
pub use indices::{
    boyd_indices, check_ro_membership, dilation_function, matuszewska_indices,
    sampled_boyd_indices, sampled_matuszewska_indices, separation_condition, BoydConfig,
    DilationGrid, IndexGridConfig, IndexPair, RoCheck, SEPARATION_MARGIN,
};
pub use params::{
    decompose_against_l2, decompose_along_q, gamma_from_alpha, interp_alpha, interp_exponents,
    lambda_pn, real_interp_alpha, CompanionExponent, Decomposition, DiagonalDecomposition,
    InterpScalars,
};

use std::fmt;

use crate::error::{Error, Result};
use expr::Expr;

/// A regularity function: positive on `[1, ∞)`, with dilation ratios under
/// control. Construct one by [parsing](RoFunction::parse) an expression like
/// `t^2*log(t)^5`, from tabulated data, or by combining existing functions.
///
/// Values can span thousands of orders of magnitude, so the primitive
/// evaluator is [`ln_value`](RoFunction::ln_value), which works entirely in
/// log coordinates; [`eval`](RoFunction::eval) exponentiates at the end.
#[derive(Clone, Debug)]
pub struct RoFunction {
    expr: Expr,
}

impl RoFunction {
    /// Parses an expression in the factor language: `t^R`, `log(t)^R`,
    /// `loglog(t)^R`, positive constants, `*`, `/`, and parentheses.
    /// `log(t)` denotes `max(ln t, 1)` so that negative log powers stay
    /// finite at `t = 1`.
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self {
            expr: expr::parse(src)?,
        })
    }

    /// `t^r`.
    pub fn power(r: f64) -> Self {
        Self {
            expr: Expr::Power(r),
        }
    }

    /// The constant function `c`, for `c > 0`.
    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Domain(format!(
                "constant regularity function must be positive, got {c}"
            )));
        }
        Ok(Self {
            expr: Expr::Scalar(c),
        })
    }

    /// Log-log linear interpolation through `(t, value)` samples with
    /// `t >= 1` strictly increasing and positive values. End segments
    /// extrapolate.
    pub fn piecewise_from_points(points: &[(f64, f64)]) -> Result<Self> {
        Ok(Self {
            expr: Expr::Piecewise(expr::Piecewise::from_points(points)?),
        })
    }

    /// Same as [`piecewise_from_points`](Self::piecewise_from_points) but
    /// with the samples already in log coordinates, for values too large to
    /// represent directly.
    pub fn piecewise_from_log_points(ln_t: Vec<f64>, ln_value: Vec<f64>) -> Result<Self> {
        Ok(Self {
            expr: Expr::Piecewise(expr::Piecewise::from_log_points(ln_t, ln_value)?),
        })
    }

    /// Pointwise product.
    pub fn product(a: &Self, b: &Self) -> Self {
        Self {
            expr: Expr::Product(Box::new(a.expr.clone()), Box::new(b.expr.clone())),
        }
    }

    /// Pointwise quotient.
    pub fn quotient(a: &Self, b: &Self) -> Self {
        Self {
            expr: Expr::Quotient(Box::new(a.expr.clone()), Box::new(b.expr.clone())),
        }
    }

    /// Pointwise real power.
    pub fn powf(a: &Self, r: f64) -> Self {
        Self {
            expr: Expr::RealPow(Box::new(a.expr.clone()), r),
        }
    }

    pub(crate) fn real_interp(alpha0: &Self, alpha1: &Self, gamma: &BFunction) -> Self {
        Self {
            expr: Expr::RealInterp {
                top: Box::new(alpha0.expr.clone()),
                bottom: Box::new(alpha1.expr.clone()),
                gamma: gamma.clone(),
            },
        }
    }

    /// A stock test function that genuinely oscillates between growth
    /// exponents 1 and 2: the log-log slope alternates over blocks whose
    /// log-length doubles, so chord slopes at every scale see both rates.
    /// Its Matuszewska indices are exactly (1, 2).
    pub fn alternating_slopes() -> Self {
        // Knots at ln t = 0, ln 4, ln 16, ln 256, ... : slope 1 on the
        // first, third, fifth block, slope 2 on the rest.
        let breaks_log2: [f64; 7] = [0.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
        let mut ln_t = Vec::with_capacity(breaks_log2.len());
        let mut ln_v = Vec::with_capacity(breaks_log2.len());
        let mut v = 0.0;
        let mut prev = 0.0;
        for (i, &b) in breaks_log2.iter().enumerate() {
            let s = b * std::f64::consts::LN_2;
            if i > 0 {
                let slope = if i % 2 == 1 { 1.0 } else { 2.0 };
                v += slope * (s - prev);
            }
            ln_t.push(s);
            ln_v.push(v);
            prev = s;
        }
        Self::piecewise_from_log_points(ln_t, ln_v).expect("static knots are valid")
    }

    /// `ln α(t)` at `s = ln t`. Total on finite `s`; below `ln 1 = 0` the
    /// expression extends naturally (power factors keep their slope).
    pub fn ln_value(&self, s: f64) -> f64 {
        self.expr.ln_value(s)
    }

    /// Evaluates `α(t)` for `t >= 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 1.0 {
            return Err(Error::Domain(format!(
                "regularity functions are defined on [1, inf), got t = {t}"
            )));
        }
        Ok(self.ln_value(t.ln()).exp())
    }

    /// Whether the function contains tabulated data (and is therefore only
    /// piecewise smooth).
    pub fn has_tabulated_part(&self) -> bool {
        self.expr.has_tabulated_part()
    }

    /// The common value of both Matuszewska indices when it can be read off
    /// the expression tree exactly (log-power family and combinations whose
    /// parameters are power laws); `None` when estimation is required.
    pub fn exact_power_index(&self) -> Option<f64> {
        self.expr.exact_power_index()
    }
}

impl fmt::Display for RoFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_guards_the_domain() {
        let alpha = RoFunction::parse("t^2").unwrap();
        assert!((alpha.eval(4.0).unwrap() - 16.0).abs() < 1e-12);
        assert_eq!(alpha.eval(1.0).unwrap(), 1.0);
        assert!(alpha.eval(0.5).is_err());
        assert!(alpha.eval(f64::NAN).is_err());
        assert!(alpha.eval(f64::INFINITY).is_err());
    }

    #[test]
    fn log_factor_at_e_is_exact() {
        let alpha = RoFunction::parse("t*log(t)").unwrap();
        let e = std::f64::consts::E;
        assert!((alpha.eval(e).unwrap() - e).abs() < 1e-14);
    }

    #[test]
    fn piecewise_interpolates_in_log_log() {
        let alpha =
            RoFunction::piecewise_from_points(&[(1.0, 1.0), (2.0, 3.0), (4.0, 9.0)]).unwrap();
        let t = 2.0 * std::f64::consts::SQRT_2;
        assert!((alpha.eval(t).unwrap() - 5.196152422706632).abs() < 1e-12);
    }

    #[test]
    fn constant_functions_are_admissible() {
        let c = RoFunction::constant(3.5).unwrap();
        assert!((c.eval(1000.0).unwrap() - 3.5).abs() < 1e-14);
        assert_eq!(c.exact_power_index(), Some(0.0));
        assert!(RoFunction::constant(0.0).is_err());
        assert!(RoFunction::constant(-1.0).is_err());
    }

    #[test]
    fn alternating_function_has_the_advertised_slopes() {
        let f = RoFunction::alternating_slopes();
        // Slope 1 on [1, 4]: f(4) = 4. Slope 2 on [4, 16]: f(16) = 64.
        assert!((f.eval(4.0).unwrap() - 4.0).abs() < 1e-10);
        assert!((f.eval(16.0).unwrap() - 64.0).abs() < 1e-9);
    }
}
