//! Graded norms built on dyadic windows.
//!
//! Three families share one grading function `α`. With `f_j = φ_j * f` the
//! band decomposition of `f`:
//!
//! * the summed family takes `( Σ_j α(2^j)^q ‖f_j‖_p^q )^(1/q)` (band norms
//!   first, then the weighted sequence norm);
//! * the pointwise family takes `‖ ( Σ_j α(2^j)^q |f_j(x)|^q )^(1/q) ‖_p`
//!   (the sequence norm inside, the integral outside);
//! * the multiplier family skips windows entirely and measures
//!   `‖ α(⟨ξ⟩) applied as a Fourier multiplier ‖_p`, with
//!   `⟨ξ⟩ = (1 + |ξ|²)^(1/2)`.
//!
//! At `p = q` the first two coincide up to summation order; at `p = q = 2`
//! all three are equivalent with constants controlled by the window overlap.
//! Sampled equivalence ratios over seeded random ensembles make those
//! constants observable.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{sample_normal, GridFunction, TorusGrid};
use crate::ro::RoFunction;
use crate::window::SpecialSequence;

/// `L^p` norm with the grid quadrature weight `(2π/M)^dim`; `p = ∞` is the
/// max norm. Quasi-norms with `p < 1` are allowed.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(f
            .samples()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max));
    }
    let cell = f.grid().cell_measure();
    let sum: f64 = f.samples().iter().map(|v| v.norm().powf(p)).sum();
    Ok((cell * sum).powf(1.0 / p))
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Domain(format!(
            "integrability exponent must lie in (0, inf], got {p}"
        )));
    }
    Ok(())
}

/// `( Σ w_j^q )^(1/q)` over nonnegative terms; `q = ∞` is the sup.
fn lq(terms: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// Band weights `α(2^j)` for every window of the sequence.
fn band_weights(seq: &SpecialSequence, alpha: &RoFunction) -> Vec<f64> {
    (0..seq.count())
        .map(|j| (alpha.ln_value(j as f64 * std::f64::consts::LN_2)).exp())
        .collect()
}

/// The summed graded norm: band `L^p` norms combined in weighted `l^q`.
pub fn summed_norm(
    seq: &SpecialSequence,
    alpha: &RoFunction,
    p: f64,
    q: f64,
    f: &GridFunction,
) -> Result<f64> {
    check_p(p)?;
    check_p(q)?;
    let weights = band_weights(seq, alpha);
    let mut terms = Vec::with_capacity(seq.count());
    for (j, w) in weights.iter().enumerate() {
        let band = seq.band(f, j)?;
        terms.push(w * lp_norm(&band, p)?);
    }
    Ok(lq(terms.into_iter(), q))
}

/// The pointwise graded norm: the weighted `l^q` sequence norm taken at
/// every grid point, then `L^p` over the torus. Both exponents must be
/// finite.
pub fn pointwise_norm(
    seq: &SpecialSequence,
    alpha: &RoFunction,
    p: f64,
    q: f64,
    f: &GridFunction,
) -> Result<f64> {
    check_p(p)?;
    check_p(q)?;
    if p.is_infinite() || q.is_infinite() {
        return Err(Error::Domain(
            "the pointwise family requires finite exponents".into(),
        ));
    }
    let weights = band_weights(seq, alpha);
    let grid = f.grid();
    let mut stacked: Vec<f64> = vec![0.0; grid.len()];
    for (j, w) in weights.iter().enumerate() {
        let band = seq.band(f, j)?;
        for (acc, v) in stacked.iter_mut().zip(band.samples()) {
            *acc += (w * v.norm()).powf(q);
        }
    }
    let cell = grid.cell_measure();
    let sum: f64 = stacked.iter().map(|s| s.powf(p / q)).sum();
    Ok((cell * sum).powf(1.0 / p))
}

/// The multiplier norm: `α(⟨ξ⟩)` applied on the spectrum, then `L^p`.
pub fn multiplier_norm(alpha: &RoFunction, p: f64, f: &GridFunction) -> Result<f64> {
    check_p(p)?;
    let lifted = f.apply_symbol(|k| {
        let bracket = (1.0 + (k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
        Complex64::new(alpha.ln_value(bracket.ln()).exp(), 0.0)
    })?;
    lp_norm(&lifted, p)
}

/// The three graded families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormFamily {
    /// Band norms first, sequence norm outside.
    Summed,
    /// Sequence norm pointwise, integral outside.
    Pointwise,
    /// Fourier multiplier `α(⟨ξ⟩)`, no windows.
    Multiplier,
}

/// A fully specified graded space: family, grading function, exponents.
#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub family: NormFamily,
    pub alpha: RoFunction,
    pub p: f64,
    pub q: f64,
}

impl SpaceSpec {
    /// Checks the exponent ranges for the family and, for the multiplier
    /// family, that the grading function is smooth enough to act as a
    /// multiplier.
    pub fn validate(&self) -> Result<()> {
        match self.family {
            NormFamily::Summed => {
                check_p(self.p)?;
                check_p(self.q)?;
            }
            NormFamily::Pointwise => {
                check_p(self.p)?;
                check_p(self.q)?;
                if self.p.is_infinite() || self.q.is_infinite() {
                    return Err(Error::Domain(
                        "the pointwise family requires finite exponents".into(),
                    ));
                }
            }
            NormFamily::Multiplier => {
                if !(self.p > 1.0) || !self.p.is_finite() {
                    return Err(Error::Domain(format!(
                        "the multiplier family needs p in (1, inf), got {}",
                        self.p
                    )));
                }
                if self.alpha.has_tabulated_part() {
                    return Err(Error::Domain(
                        "tabulated grading functions are only piecewise smooth; their \
                         multiplier bounds are not guaranteed, use the summed family instead"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Evaluates the norm. The window sequence is ignored by the multiplier
    /// family.
    pub fn norm(&self, seq: &SpecialSequence, f: &GridFunction) -> Result<f64> {
        self.validate()?;
        match self.family {
            NormFamily::Summed => summed_norm(seq, &self.alpha, self.p, self.q, f),
            NormFamily::Pointwise => pointwise_norm(seq, &self.alpha, self.p, self.q, f),
            NormFamily::Multiplier => multiplier_norm(&self.alpha, self.p, f),
        }
    }
}

/// A seeded family of random band-limited trial functions.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub grid: TorusGrid,
    /// Spectrum is supported on `|ξ| <= band_limit`.
    pub band_limit: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Ensemble {
    /// Trial `i`: independent complex Gaussian coefficients inside the band
    /// limit. Deterministic in `(seed, i)`.
    pub fn draw(&self, i: usize) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64 + 1);
        let spectrum: Vec<Complex64> = (0..self.grid.len())
            .map(|flat| {
                if self.grid.freq_norm(flat) <= self.band_limit {
                    Complex64::new(sample_normal(&mut rng), sample_normal(&mut rng))
                } else {
                    Complex64::default()
                }
            })
            .collect();
        GridFunction::from_spectrum(self.grid, spectrum).expect("lengths match by construction")
    }
}

/// Observed spread of the ratio `‖·‖_a / ‖·‖_b` over an ensemble.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EquivalenceStats {
    pub c_min: f64,
    pub c_max: f64,
    pub geo_mean: f64,
    pub trials: usize,
}

/// Samples the ratio of two space norms over a random ensemble. Errors if a
/// denominator norm vanishes on a nonzero trial function (the grading or
/// windows fail to see it), since a ratio is then meaningless.
pub fn norm_equiv_ratio(
    a: &SpaceSpec,
    b: &SpaceSpec,
    seq: &SpecialSequence,
    ensemble: &Ensemble,
) -> Result<EquivalenceStats> {
    if ensemble.trials == 0 {
        return Err(Error::Domain("ensemble needs at least one trial".into()));
    }
    a.validate()?;
    b.validate()?;
    let mut c_min = f64::INFINITY;
    let mut c_max: f64 = 0.0;
    let mut log_sum = 0.0;
    for i in 0..ensemble.trials {
        let f = ensemble.draw(i);
        let na = a.norm(seq, &f)?;
        let nb = b.norm(seq, &f)?;
        if nb == 0.0 {
            return Err(Error::DegenerateNorm(format!(
                "denominator norm vanished on trial {i} while the function is nonzero"
            )));
        }
        let r = na / nb;
        c_min = c_min.min(r);
        c_max = c_max.max(r);
        log_sum += r.ln();
    }
    Ok(EquivalenceStats {
        c_min,
        c_max,
        geo_mean: (log_sum / ensemble.trials as f64).exp(),
        trials: ensemble.trials,
    })
}
