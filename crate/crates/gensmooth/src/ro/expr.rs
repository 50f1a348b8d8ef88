//! Expression trees for regularity functions on `[1, ∞)`.
//!
//! The value of every node is strictly positive, so all evaluation happens in
//! log-log coordinates: [`Expr::ln_value`] maps `ln t` to `ln α(t)`. This
//! keeps ratios of astronomically large values finite (a quotient of two
//! functions is a subtraction of their logs) and makes piecewise-linear
//! instances exact on power laws.
//!
//! `log(t)` in the expression language denotes `max(ln t, 1)`: the clamp
//! makes log-power factors positive and continuous on all of `[1, ∞)` while
//! agreeing with the natural logarithm from `t = e` on. Without it, factors
//! like `log(t)^-2` would blow up at `t = 1`. `loglog(t)` clamps one level
//! deeper (it equals the iterated logarithm from `t = e^e` on).

use std::fmt;

use crate::error::{Error, Result};
use crate::ro::bfunc::BFunction;

/// `max(ln t, 1)` expressed in terms of `s = ln t`.
#[inline]
pub(crate) fn clamped_log(s: f64) -> f64 {
    s.max(1.0)
}

/// `max(ln max(ln t, 1), 1)` expressed in terms of `s = ln t`.
#[inline]
pub(crate) fn clamped_loglog(s: f64) -> f64 {
    clamped_log(s).ln().max(1.0)
}

#[derive(Clone, Debug)]
pub(crate) enum Expr {
    /// Positive constant factor.
    Scalar(f64),
    /// `t^r`.
    Power(f64),
    /// `log(t)^r` with the clamped logarithm.
    LogPower(f64),
    /// `loglog(t)^r` with the doubly clamped logarithm.
    LogLogPower(f64),
    Product(Box<Expr>, Box<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    /// `base^r` for a whole subtree.
    RealPow(Box<Expr>, f64),
    /// Piecewise-linear interpolant in `(ln t, ln value)` coordinates.
    Piecewise(Piecewise),
    /// `top(t) / gamma(top(t)/bottom(t))`, the real-method parameter
    /// combination. Kept as a node so the result is again a regularity
    /// function that can be evaluated and index-estimated.
    RealInterp {
        top: Box<Expr>,
        bottom: Box<Expr>,
        gamma: BFunction,
    },
}

impl Expr {
    /// `ln` of the expression value at the point whose natural log is `s`.
    pub(crate) fn ln_value(&self, s: f64) -> f64 {
        match self {
            Expr::Scalar(c) => c.ln(),
            Expr::Power(r) => r * s,
            Expr::LogPower(r) => r * clamped_log(s).ln(),
            Expr::LogLogPower(r) => r * clamped_loglog(s).ln(),
            Expr::Product(a, b) => a.ln_value(s) + b.ln_value(s),
            Expr::Quotient(a, b) => a.ln_value(s) - b.ln_value(s),
            Expr::RealPow(e, r) => r * e.ln_value(s),
            Expr::Piecewise(pw) => pw.ln_value(s),
            Expr::RealInterp { top, bottom, gamma } => {
                let lt = top.ln_value(s);
                let lb = bottom.ln_value(s);
                lt - gamma.ln_value(lt - lb)
            }
        }
    }

    /// Whether the tree contains a tabulated (piecewise) node.
    pub(crate) fn has_tabulated_part(&self) -> bool {
        match self {
            Expr::Scalar(_) | Expr::Power(_) | Expr::LogPower(_) | Expr::LogLogPower(_) => false,
            Expr::Product(a, b) | Expr::Quotient(a, b) => {
                a.has_tabulated_part() || b.has_tabulated_part()
            }
            Expr::RealPow(e, _) => e.has_tabulated_part(),
            Expr::Piecewise(_) => true,
            Expr::RealInterp { top, bottom, .. } => {
                top.has_tabulated_part() || bottom.has_tabulated_part()
            }
        }
    }

    /// The exact power exponent when the tree lies in the log-power family
    /// (powers, log powers, scalars, products, quotients, real powers, and
    /// real-interpolation nodes whose parameter is an exact power law).
    ///
    /// For these trees both Matuszewska indices equal the returned exponent.
    /// `None` means the tree contains data-driven parts and the indices must
    /// be estimated by sampling.
    pub(crate) fn exact_power_index(&self) -> Option<f64> {
        match self {
            Expr::Scalar(_) | Expr::LogPower(_) | Expr::LogLogPower(_) => Some(0.0),
            Expr::Power(r) => Some(*r),
            Expr::Product(a, b) => Some(a.exact_power_index()? + b.exact_power_index()?),
            Expr::Quotient(a, b) => Some(a.exact_power_index()? - b.exact_power_index()?),
            Expr::RealPow(e, r) => Some(r * e.exact_power_index()?),
            Expr::Piecewise(_) => None,
            Expr::RealInterp { top, bottom, gamma } => {
                let i0 = top.exact_power_index()?;
                let i1 = bottom.exact_power_index()?;
                let th = gamma.exact_power()?;
                Some(i0 - th * (i0 - i1))
            }
        }
    }
}

fn needs_parens_in_denominator(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Product(..) | Expr::Quotient(..) | Expr::RealPow(..)
    )
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Scalar(c) => write!(f, "{c}"),
            Expr::Power(r) if *r == 1.0 => write!(f, "t"),
            Expr::Power(r) => write!(f, "t^{r}"),
            Expr::LogPower(r) if *r == 1.0 => write!(f, "log(t)"),
            Expr::LogPower(r) => write!(f, "log(t)^{r}"),
            Expr::LogLogPower(r) if *r == 1.0 => write!(f, "loglog(t)"),
            Expr::LogLogPower(r) => write!(f, "loglog(t)^{r}"),
            Expr::Product(a, b) => write!(f, "{a}*{b}"),
            Expr::Quotient(a, b) if needs_parens_in_denominator(b) => write!(f, "{a}/({b})"),
            Expr::Quotient(a, b) => write!(f, "{a}/{b}"),
            Expr::RealPow(e, r) => write!(f, "({e})^{r}"),
            Expr::Piecewise(pw) => {
                write!(
                    f,
                    "piecewise[{} pts, ln t in [{:.3}, {:.3}]]",
                    pw.ln_t.len(),
                    pw.ln_t[0],
                    pw.ln_t[pw.ln_t.len() - 1]
                )
            }
            Expr::RealInterp { top, bottom, gamma } => {
                write!(f, "realinterp({top}; {bottom}; {gamma})")
            }
        }
    }
}

/// Piecewise-linear interpolant in `(ln t, ln value)` coordinates.
///
/// Outside the sampled range the end segments extrapolate, so the function
/// behaves like a power law beyond its data (the continuation has the slope
/// of the outermost segment).
#[derive(Clone, Debug)]
pub(crate) struct Piecewise {
    ln_t: Vec<f64>,
    ln_v: Vec<f64>,
}

impl Piecewise {
    pub(crate) fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse(
                "piecewise function needs at least two points".into(),
            ));
        }
        let mut ln_t = Vec::with_capacity(points.len());
        let mut ln_v = Vec::with_capacity(points.len());
        for &(t, v) in points {
            if !t.is_finite() || t < 1.0 {
                return Err(Error::Domain(format!(
                    "piecewise abscissa {t} outside [1, inf)"
                )));
            }
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "piecewise value {v} is not strictly positive"
                )));
            }
            ln_t.push(t.ln());
            ln_v.push(v.ln());
        }
        Self::from_log_points(ln_t, ln_v)
    }

    pub(crate) fn from_log_points(ln_t: Vec<f64>, ln_v: Vec<f64>) -> Result<Self> {
        if ln_t.len() != ln_v.len() {
            return Err(Error::Parse("mismatched piecewise column lengths".into()));
        }
        if ln_t.len() < 2 {
            return Err(Error::Parse(
                "piecewise function needs at least two points".into(),
            ));
        }
        if ln_t.iter().chain(ln_v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite piecewise sample".into()));
        }
        if ln_t[0] < -1e-12 {
            return Err(Error::Domain(
                "piecewise abscissas must start at t >= 1".into(),
            ));
        }
        if ln_t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "piecewise abscissas must be strictly increasing".into(),
            ));
        }
        Ok(Self { ln_t, ln_v })
    }

    fn segment_at(&self, s: f64) -> usize {
        match self
            .ln_t
            .binary_search_by(|x| x.partial_cmp(&s).expect("finite grid"))
        {
            Ok(i) => i.min(self.ln_t.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.ln_t.len() - 2),
        }
    }

    pub(crate) fn ln_value(&self, s: f64) -> f64 {
        let i = self.segment_at(s);
        let slope = (self.ln_v[i + 1] - self.ln_v[i]) / (self.ln_t[i + 1] - self.ln_t[i]);
        self.ln_v[i] + slope * (s - self.ln_t[i])
    }
}

/// Recursive-descent parser for the mini expression language.
///
/// Grammar: factors `t^R`, `log(t)^R`, `loglog(t)^R`, positive numeric
/// constants, and parenthesized subexpressions (optionally raised to a real
/// power), combined with `*` and `/`. Exponents may be negative and may be
/// parenthesized: `t^-2`, `t^(-2)`, `t^1.5` all parse.
pub(crate) fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = Expr::Product(Box::new(acc), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    acc = Expr::Quotient(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        let base = self.parse_base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let r = self.parse_exponent()?;
            Ok(match base {
                Expr::Power(_) => Expr::Power(r),
                Expr::LogPower(_) => Expr::LogPower(r),
                Expr::LogLogPower(_) => Expr::LogLogPower(r),
                other => Expr::RealPow(Box::new(other), r),
            })
        } else {
            Ok(base)
        }
    }

    fn parse_base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.parse_number(false)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(self.err("constant factors must be positive"));
                }
                Ok(Expr::Scalar(v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                match word {
                    b"t" => Ok(Expr::Power(1.0)),
                    b"log" => {
                        self.expect_arg_t()?;
                        Ok(Expr::LogPower(1.0))
                    }
                    b"loglog" => {
                        self.expect_arg_t()?;
                        Ok(Expr::LogLogPower(1.0))
                    }
                    _ => Err(self.err("unknown identifier (expected t, log, loglog)")),
                }
            }
            _ => Err(self.err("expected a factor")),
        }
    }

    fn expect_arg_t(&mut self) -> Result<()> {
        for want in [b'(', b't', b')'] {
            if self.peek() != Some(want) {
                return Err(self.err("expected '(t)'"));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn parse_exponent(&mut self) -> Result<f64> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let v = self.parse_number(true)?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')' after exponent"));
            }
            self.pos += 1;
            Ok(v)
        } else {
            self.parse_number(true)
        }
    }

    fn parse_number(&mut self, allow_sign: bool) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if allow_sign && matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected a number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map_err(|_| self.err("malformed number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(src: &str, t: f64) -> f64 {
        parse(src).unwrap().ln_value(t.ln()).exp()
    }

    #[test]
    fn parses_the_documented_grammar() {
        assert!((v("t^2", 4.0) - 16.0).abs() < 1e-12);
        assert!((v("t", 7.0) - 7.0).abs() < 1e-12);
        assert!((v("t^1.5", 4.0) - 8.0).abs() < 1e-12);
        assert!((v("t^-2", 2.0) - 0.25).abs() < 1e-15);
        assert!((v("t^(-2)", 2.0) - 0.25).abs() < 1e-15);
        assert!((v("2*t", 3.0) - 6.0).abs() < 1e-12);
        assert!((v("t^2*log(t)^5", std::f64::consts::E) - std::f64::consts::E.powi(2)).abs() < 1e-10);
        assert!((v("(t^2*t)^2", 2.0) - 64.0).abs() < 1e-10);
        assert!((v("t/t^2", 8.0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn clamped_log_matches_plain_log_beyond_e() {
        let e = std::f64::consts::E;
        // Inside [1, e] the log factor is pinned to 1.
        assert_eq!(v("log(t)", 1.0), 1.0);
        assert_eq!(v("log(t)", 2.0), 1.0);
        // From t = e on it is the natural logarithm.
        assert!((v("log(t)", e) - 1.0).abs() < 1e-15);
        assert!((v("log(t)", e * e) - 2.0).abs() < 1e-12);
        // loglog clamps one level deeper.
        assert_eq!(v("loglog(t)", 10.0), 1.0);
        let t = (e.powf(e)).powf(1.0);
        assert!((v("loglog(t)", t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "", "x", "t^", "log(s)", "t**2", "(t", "t)", "-2*t", "0*t", "t^2 t",
        ] {
            assert!(parse(bad).is_err(), "expected parse failure for {bad:?}");
        }
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        for src in ["t^2*log(t)^5", "2*t", "t^-1.5/log(t)", "loglog(t)^3", "(t*log(t))^0.5"] {
            let e = parse(src).unwrap();
            let back = parse(&e.to_string()).unwrap();
            for s in [0.0, 0.7, 3.0, 20.0] {
                assert!(
                    (e.ln_value(s) - back.ln_value(s)).abs() < 1e-12,
                    "display of {src} changed the value"
                );
            }
        }
    }

    #[test]
    fn piecewise_is_loglog_linear() {
        let pw = Piecewise::from_points(&[(1.0, 1.0), (2.0, 3.0), (4.0, 9.0)]).unwrap();
        // Slope between (2,3) and (4,9) is log 3 / log 2; halfway in log t the
        // value is 3 * sqrt(3) = sqrt(27).
        let t = 2.0 * std::f64::consts::SQRT_2;
        assert!((pw.ln_value(t.ln()).exp() - 27.0f64.sqrt()).abs() < 1e-12);
        // Beyond the data the last segment extrapolates.
        assert!((pw.ln_value(8.0f64.ln()).exp() - 27.0).abs() < 1e-10);
    }

    #[test]
    fn piecewise_rejects_bad_data() {
        assert!(Piecewise::from_points(&[(1.0, 1.0)]).is_err());
        assert!(Piecewise::from_points(&[(0.5, 1.0), (2.0, 1.0)]).is_err());
        assert!(Piecewise::from_points(&[(1.0, 0.0), (2.0, 1.0)]).is_err());
        assert!(Piecewise::from_points(&[(2.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(Piecewise::from_points(&[(1.0, 1.0), (2.0, -3.0)]).is_err());
    }
}
