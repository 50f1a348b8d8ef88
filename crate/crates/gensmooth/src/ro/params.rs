//! Parameter calculus for interpolation between spaces of generalized
//! smoothness: combining regularity functions and integrability exponents,
//! and decomposing a target space as an interpolation space between simpler
//! ones.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ro::indices::{boyd_indices, matuszewska_indices, separation_condition};
use crate::ro::{BFunction, RoFunction};

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!(
            "interpolation weight must lie in (0, 1), got {theta}"
        )));
    }
    Ok(())
}

fn check_exponent(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "exponent {name} must lie in (0, inf], got {x}"
        )));
    }
    Ok(())
}

/// `1/x` with the convention `1/∞ = 0`.
#[inline]
fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// `α0^(1-θ) α1^θ`, the regularity function of the complex interpolation
/// space between spaces with regularity `α0` and `α1`.
pub fn interp_alpha(alpha0: &RoFunction, alpha1: &RoFunction, theta: f64) -> Result<RoFunction> {
    check_theta(theta)?;
    Ok(RoFunction::product(
        &RoFunction::powf(alpha0, 1.0 - theta),
        &RoFunction::powf(alpha1, theta),
    ))
}

/// The scalar parameters of an interpolation couple.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InterpScalars {
    pub theta: f64,
    pub p0: f64,
    pub p1: f64,
    pub q0: f64,
    pub q1: f64,
    /// Harmonic combination `1/p = (1-θ)/p0 + θ/p1`.
    pub p: f64,
    /// Harmonic combination `1/q = (1-θ)/q0 + θ/q1`.
    pub q: f64,
}

/// Combines integrability exponents along the complex method:
/// `1/p = (1-θ)/p0 + θ/p1` and likewise for `q`, with `1/∞ = 0`.
pub fn interp_exponents(
    p0: f64,
    p1: f64,
    q0: f64,
    q1: f64,
    theta: f64,
) -> Result<InterpScalars> {
    check_theta(theta)?;
    for (name, x) in [("p0", p0), ("p1", p1), ("q0", q0), ("q1", q1)] {
        check_exponent(name, x)?;
    }
    let combine = |a: f64, b: f64| {
        let inv = (1.0 - theta) * recip(a) + theta * recip(b);
        if inv == 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv
        }
    };
    Ok(InterpScalars {
        theta,
        p0,
        p1,
        q0,
        q1,
        p: combine(p0, p1),
        q: combine(q0, q1),
    })
}

/// Which companion exponent is prescribed when decomposing against an
/// L2-anchored couple.
#[derive(Clone, Copy, Debug)]
pub enum CompanionExponent {
    /// Prescribe `p1`; requires `p != 2` and `p1` on the far side of `p`
    /// from 2. The matching `q1` is solved for.
    P1(f64),
    /// Prescribe `q1`; requires `p = 2` and `q1` on the far side of `q`
    /// from 2. The companion `p1` is 2.
    Q1(f64),
}

/// A target space written as an interpolation space between an L2-anchored
/// space and a companion.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub theta: f64,
    pub p1: f64,
    pub q1: f64,
    pub s1: f64,
    /// Regularity of the anchor endpoint: `α0 = (t^(-θ s1) α)^(1/(1-θ))`,
    /// chosen so that `α0^(1-θ) (t^s1)^θ = α`.
    pub alpha0: RoFunction,
}

/// Decomposes the space with regularity `α` and exponents `(p, q)` as a
/// complex interpolation space between a space with exponent 2 and a
/// companion endpoint with power regularity `t^s1`.
///
/// With `p1` prescribed (and `p != 2`), the weight is
/// `θ = (1/p - 1/2)/(1/p1 - 1/2)` and the companion fine exponent solves
/// `1/q = (1-θ)/2 + θ/q1`. The solved `q1` must land in `(1, ∞)`;
/// otherwise the choice of `p1` is reported as infeasible and the caller
/// should move `p1` closer to `p`. With `q1` prescribed the roles of the
/// exponent pairs swap and `p` must equal 2.
pub fn decompose_against_l2(
    alpha: &RoFunction,
    p: f64,
    q: f64,
    choice: CompanionExponent,
    s1: f64,
) -> Result<Decomposition> {
    for (name, x) in [("p", p), ("q", q)] {
        if !(x > 1.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "exponent {name} must lie in (1, inf), got {x}"
            )));
        }
    }
    if !s1.is_finite() {
        return Err(Error::Domain("companion order s1 must be finite".into()));
    }
    let (theta, p1, q1) = match choice {
        CompanionExponent::P1(p1) => {
            if (p - 2.0).abs() < 1e-12 {
                return Err(Error::Infeasible(
                    "p = 2 leaves no room to move p; prescribe q1 instead".into(),
                ));
            }
            let ordered = (1.0 < p1 && p1 < p && p < 2.0) || (2.0 < p && p < p1);
            if !ordered || !p1.is_finite() {
                return Err(Error::Infeasible(format!(
                    "p1 = {p1} must lie strictly beyond p = {p} relative to 2 \
                     (1 < p1 < p < 2 or 2 < p < p1)"
                )));
            }
            let theta = (recip(p) - 0.5) / (recip(p1) - 0.5);
            let inv_q1 = (recip(q) - (1.0 - theta) * 0.5) / theta;
            // The tolerance absorbs rounding when 1/q1 lands exactly on an
            // endpoint (q1 = ∞ or q1 = 1 are both outside the admitted range).
            if !(inv_q1 > 1e-12 && inv_q1 < 1.0 - 1e-12) {
                return Err(Error::Infeasible(format!(
                    "solved companion exponent 1/q1 = {inv_q1:.4} falls outside (0, 1); \
                     move p1 closer to p"
                )));
            }
            (theta, p1, 1.0 / inv_q1)
        }
        CompanionExponent::Q1(q1) => {
            if (p - 2.0).abs() > 1e-12 {
                return Err(Error::Infeasible(format!(
                    "prescribing q1 requires p = 2, got p = {p}"
                )));
            }
            if (q - 2.0).abs() < 1e-12 {
                return Err(Error::Infeasible(
                    "q = 2 leaves no room to move q; the space is already L2-anchored".into(),
                ));
            }
            let ordered = (1.0 < q1 && q1 < q && q < 2.0) || (2.0 < q && q < q1);
            if !ordered || !q1.is_finite() {
                return Err(Error::Infeasible(format!(
                    "q1 = {q1} must lie strictly beyond q = {q} relative to 2 \
                     (1 < q1 < q < 2 or 2 < q < q1)"
                )));
            }
            let theta = (recip(q) - 0.5) / (recip(q1) - 0.5);
            (theta, 2.0, q1)
        }
    };
    check_theta(theta)?;
    let alpha0 = RoFunction::powf(
        &RoFunction::product(&RoFunction::power(-theta * s1), alpha),
        1.0 / (1.0 - theta),
    );
    Ok(Decomposition {
        theta,
        p1,
        q1,
        s1,
        alpha0,
    })
}

/// A target space written as an interpolation space along the secondary
/// exponent: `1/q = (1-θ)/p + θ/r`.
#[derive(Clone, Debug)]
pub struct DiagonalDecomposition {
    pub theta: f64,
    pub alpha0: RoFunction,
}

/// Decomposes the space with regularity `α` and exponents `(p, q)` against
/// a diagonal endpoint with exponent `r` and power regularity `t^s1`.
///
/// The weight `θ = (1/q - 1/p)/(1/r - 1/p)` lies in `(0, 1)` exactly when
/// `q` is strictly between `p` and `r`; any other arrangement is rejected.
pub fn decompose_along_q(
    alpha: &RoFunction,
    p: f64,
    q: f64,
    r: f64,
    s1: f64,
) -> Result<DiagonalDecomposition> {
    for (name, x) in [("p", p), ("q", q), ("r", r)] {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "exponent {name} must lie in [1, inf), got {x}"
            )));
        }
    }
    if !s1.is_finite() {
        return Err(Error::Domain("endpoint order s1 must be finite".into()));
    }
    if (p - q).abs() < 1e-12 {
        return Err(Error::Infeasible(
            "p = q is already a diagonal space; nothing to decompose".into(),
        ));
    }
    let theta = (recip(q) - recip(p)) / (recip(r) - recip(p));
    if !theta.is_finite() || !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Infeasible(format!(
            "r = {r} must be chosen so that q = {q} lies strictly between p = {p} and r \
             (weight came out {theta:.4})"
        )));
    }
    let alpha0 = RoFunction::powf(
        &RoFunction::product(&RoFunction::power(-theta * s1), alpha),
        1.0 / (1.0 - theta),
    );
    Ok(DiagonalDecomposition { theta, alpha0 })
}

/// The real-method regularity combination `α(t) = α0(t) / γ(α0(t)/α1(t))`.
///
/// Requires the couple to be index-separated (the ratio `α0/α1` has
/// Matuszewska indices strictly of one sign) and the parameter to have Boyd
/// indices strictly inside `(0, 1)`. With `γ(t) = t^θ` this reduces to the
/// complex combination `α0^(1-θ) α1^θ`.
pub fn real_interp_alpha(
    alpha0: &RoFunction,
    alpha1: &RoFunction,
    gamma: &BFunction,
) -> Result<RoFunction> {
    if !separation_condition(alpha0, alpha1)? {
        return Err(Error::Inadmissible(
            "regularity functions are not index-separated: the ratio alpha0/alpha1 \
             must have Matuszewska indices strictly of one sign"
                .into(),
        ));
    }
    let boyd = boyd_indices(gamma)?;
    if !(boyd.lower > 0.0 && boyd.upper < 1.0) {
        return Err(Error::Inadmissible(format!(
            "parameter function has Boyd indices [{:.4}, {:.4}] outside (0, 1)",
            boyd.lower, boyd.upper
        )));
    }
    Ok(RoFunction::real_interp(alpha0, alpha1, gamma))
}

/// The canonical parameter function of a regularity function relative to a
/// bracketing pair of orders: `γ(t) = t^(-s0/(s1-s0)) α~(t^(1/(s1-s0)))`
/// for `t >= 1` (normalized, and reflected below 1).
///
/// Requires `s0 < σ0 <= σ1 < s1`, where `σi` are the Matuszewska indices of
/// `α`. Its Boyd indices are then `(σi - s0)/(s1 - s0)`, strictly inside
/// `(0, 1)`, which makes the result admissible for the real method.
pub fn gamma_from_alpha(alpha: &RoFunction, s0: f64, s1: f64) -> Result<BFunction> {
    if !s0.is_finite() || !s1.is_finite() || s0 >= s1 {
        return Err(Error::Domain(format!(
            "need s0 < s1, got s0 = {s0}, s1 = {s1}"
        )));
    }
    let idx = matuszewska_indices(alpha)?;
    if !(s0 < idx.lower && idx.upper < s1) {
        return Err(Error::Inadmissible(format!(
            "orders (s0, s1) = ({s0}, {s1}) do not strictly bracket the Matuszewska \
             indices [{:.4}, {:.4}]",
            idx.lower, idx.upper
        )));
    }
    Ok(BFunction::from_alpha_unchecked(alpha, s0, s1))
}

/// The quasi-norm constant exponent `λ(p, n) = 1/p + max(0, (n-1)(1/p - 1))`
/// governing triangle-inequality constants in `n` dimensions for `p < 1`.
pub fn lambda_pn(p: f64, n: u32) -> Result<f64> {
    if !(p > 0.0) || p.is_nan() {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let inv_p = recip(p);
    Ok(inv_p + ((n - 1) as f64 * (inv_p - 1.0)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn alpha_combination_multiplies_in_log() {
        let a0 = RoFunction::parse("t").unwrap();
        let a1 = RoFunction::parse("t^3").unwrap();
        let a = interp_alpha(&a0, &a1, 0.25).unwrap();
        assert_eq!(a.exact_power_index(), Some(1.5));
        assert_close(a.eval(4.0).unwrap(), 8.0, 1e-12);
        assert!(interp_alpha(&a0, &a1, 0.0).is_err());
        assert!(interp_alpha(&a0, &a1, 1.0).is_err());
    }

    #[test]
    fn exponent_combination_uses_harmonic_means() {
        let s = interp_exponents(2.0, 4.0, 1.0, f64::INFINITY, 0.5).unwrap();
        assert_close(s.p, 8.0 / 3.0, 1e-12);
        assert_close(s.q, 2.0, 1e-12);
        // Both endpoints infinite: the combination stays infinite.
        let s = interp_exponents(f64::INFINITY, f64::INFINITY, 2.0, 2.0, 0.3).unwrap();
        assert!(s.p.is_infinite());
        assert!(interp_exponents(0.0, 2.0, 2.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn l2_decomposition_solves_the_companion_exponent() {
        let alpha = RoFunction::parse("t^1.2").unwrap();
        // 1/3 = (1-θ)/2 + θ/4 solves to θ = 2/3.
        let d = decompose_against_l2(&alpha, 3.0, 3.0, CompanionExponent::P1(4.0), 2.0).unwrap();
        assert_close(d.theta, 2.0 / 3.0, 1e-12);
        assert_close(d.q1, 4.0, 1e-9);
        assert_eq!(d.p1, 4.0);
        // Recombining the endpoints returns the original regularity.
        let back = interp_alpha(&d.alpha0, &RoFunction::power(d.s1), d.theta).unwrap();
        for t in [1.0, 2.5, 100.0, 1e6] {
            let lhs = back.eval(t).unwrap();
            let rhs = alpha.eval(t).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-12, "t = {t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn l2_decomposition_rejects_unsolvable_q() {
        let alpha = RoFunction::parse("t^1.2").unwrap();
        // θ = 2/3 forces 1/q1 = (1/6 - 1/6)/θ = 0: q1 would be infinite.
        let err =
            decompose_against_l2(&alpha, 3.0, 6.0, CompanionExponent::P1(4.0), 2.0).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "got {err:?}");
        // Misordered p1 (wrong side of 2).
        assert!(
            decompose_against_l2(&alpha, 3.0, 3.0, CompanionExponent::P1(1.5), 2.0).is_err()
        );
        // p = 2 must go through the Q1 branch.
        assert!(
            decompose_against_l2(&alpha, 2.0, 3.0, CompanionExponent::P1(4.0), 2.0).is_err()
        );
        let d = decompose_against_l2(&alpha, 2.0, 3.0, CompanionExponent::Q1(4.0), 2.0).unwrap();
        assert_close(d.theta, 2.0 / 3.0, 1e-12);
        assert_eq!(d.p1, 2.0);
    }

    #[test]
    fn diagonal_decomposition_requires_q_between_p_and_r() {
        let alpha = RoFunction::parse("t^0.7").unwrap();
        let d = decompose_along_q(&alpha, 2.0, 3.0, 6.0, 1.0).unwrap();
        assert_close(d.theta, 0.5, 1e-12);
        // q outside the (p, r) interval in harmonic coordinates.
        assert!(decompose_along_q(&alpha, 2.0, 4.0, 3.0, 1.0).is_err());
        assert!(decompose_along_q(&alpha, 2.0, 2.0, 6.0, 1.0).is_err());
    }

    #[test]
    fn real_combination_with_power_parameter_matches_complex() {
        let a0 = RoFunction::parse("t*log(t)").unwrap();
        let a1 = RoFunction::parse("t^3/log(t)").unwrap();
        let real = real_interp_alpha(&a0, &a1, &BFunction::power(0.5)).unwrap();
        let complex = interp_alpha(&a0, &a1, 0.5).unwrap();
        for t in [1.0, 3.0, 50.0, 1e8] {
            let r = real.eval(t).unwrap();
            let c = complex.eval(t).unwrap();
            assert!((r / c - 1.0).abs() < 1e-12, "t = {t}: {r} vs {c}");
        }
        // Logs cancel: t log t and t / log t combine to exactly t.
        let b0 = RoFunction::parse("t^2*log(t)").unwrap();
        let b1 = RoFunction::parse("log(t)").unwrap();
        let mid = real_interp_alpha(&b0, &b1, &BFunction::power(0.5)).unwrap();
        assert_close(mid.eval(100.0).unwrap(), 100.0 * 100.0f64.ln().max(1.0), 1e-9);
    }

    #[test]
    fn real_combination_rejects_inadmissible_input() {
        let a0 = RoFunction::parse("t*log(t)").unwrap();
        let a1 = RoFunction::parse("t").unwrap();
        // Ratio log(t) has both indices 0: not separated.
        let err = real_interp_alpha(&a0, &a1, &BFunction::power(0.5)).unwrap_err();
        assert!(matches!(err, Error::Inadmissible(_)));
        // Boyd indices on the boundary: t^0 and t^1 are both rejected.
        let b1 = RoFunction::parse("t^3").unwrap();
        assert!(real_interp_alpha(&a0, &b1, &BFunction::power(0.0)).is_err());
        assert!(real_interp_alpha(&a0, &b1, &BFunction::power(1.0)).is_err());
    }

    #[test]
    fn canonical_parameter_recovers_the_power_weight() {
        // alpha = t^1.5 bracketed by (1, 2): gamma should be exactly t^0.5.
        let alpha = RoFunction::parse("t^1.5").unwrap();
        let g = gamma_from_alpha(&alpha, 1.0, 2.0).unwrap();
        assert_eq!(g.exact_power(), Some(0.5));
        for t in [0.1, 0.5, 1.0, 7.0, 1e5] {
            assert_close(g.eval(t).unwrap(), t.powf(0.5), 1e-10 * t.powf(0.5));
        }
        // Bracket violations are rejected.
        assert!(gamma_from_alpha(&alpha, 1.6, 2.0).is_err());
        assert!(gamma_from_alpha(&alpha, 1.0, 1.5).is_err());
        assert!(gamma_from_alpha(&alpha, 2.0, 1.0).is_err());
    }

    #[test]
    fn canonical_parameter_shifts_indices_into_unit_interval() {
        let alpha = RoFunction::parse("t^1.5*log(t)^2").unwrap();
        let g = gamma_from_alpha(&alpha, 1.0, 2.0).unwrap();
        // Boyd indices of gamma are (sigma_i - s0)/(s1 - s0) = 0.5.
        let idx = boyd_indices(&g).unwrap();
        assert_close(idx.lower, 0.5, 1e-12);
        assert_close(idx.upper, 0.5, 1e-12);
    }

    #[test]
    fn quasi_norm_exponent() {
        assert_close(lambda_pn(0.5, 1).unwrap(), 2.0, 1e-15);
        assert_close(lambda_pn(0.5, 3).unwrap(), 4.0, 1e-15);
        assert_close(lambda_pn(2.0, 3).unwrap(), 0.5, 1e-15);
        assert_close(lambda_pn(f64::INFINITY, 2).unwrap(), 0.0, 1e-15);
        assert!(lambda_pn(0.0, 2).is_err());
        assert!(lambda_pn(1.0, 0).is_err());
    }
}
