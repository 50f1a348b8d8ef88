//! Periodic grids and discrete Fourier analysis on the torus.
//!
//! Functions live on the uniform grid over `[0, 2π)^dim` with `M` points per
//! axis, `M` a power of two. The Fourier convention puts the `1/M^dim`
//! factor on the analysis side, so the mode `e^{ikx}` has a spectrum that is
//! exactly 1 at frequency `k` and 0 elsewhere; frequencies per axis run over
//! `[-M/2, M/2 - 1]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// A uniform grid on the 1- or 2-dimensional torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid {
    dim: usize,
    m: usize,
}

impl TorusGrid {
    /// `dim` must be 1 or 2 and `m` a power of two, at least 4.
    pub fn new(dim: usize, m: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Domain(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !m.is_power_of_two() || m < 4 {
            return Err(Error::Domain(format!(
                "grid size must be a power of two >= 4, got {m}"
            )));
        }
        Ok(Self { dim, m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Total number of grid points, `M^dim`.
    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed frequency for the FFT bin `n` on one axis.
    #[inline]
    fn axis_freq(&self, n: usize) -> i64 {
        if n < self.m / 2 {
            n as i64
        } else {
            n as i64 - self.m as i64
        }
    }

    /// Frequency vector of the flat spectrum index. The second component is
    /// 0 in one dimension.
    pub fn freq_of(&self, flat: usize) -> [i64; 2] {
        if self.dim == 1 {
            [self.axis_freq(flat), 0]
        } else {
            [self.axis_freq(flat % self.m), self.axis_freq(flat / self.m)]
        }
    }

    /// Flat spectrum index of a frequency vector; frequencies must lie in
    /// `[-M/2, M/2 - 1]` per axis (and `k[1] = 0` in one dimension).
    pub fn flat_of(&self, k: [i64; 2]) -> Result<usize> {
        let half = (self.m / 2) as i64;
        let wrap = |v: i64| -> Result<usize> {
            if v < -half || v >= half {
                return Err(Error::Domain(format!(
                    "frequency {v} outside [{}, {}]",
                    -half,
                    half - 1
                )));
            }
            Ok(v.rem_euclid(self.m as i64) as usize)
        };
        if self.dim == 1 {
            if k[1] != 0 {
                return Err(Error::Domain(format!(
                    "second frequency component must be 0 on a 1-d grid, got {}",
                    k[1]
                )));
            }
            wrap(k[0])
        } else {
            Ok(wrap(k[0])? + self.m * wrap(k[1])?)
        }
    }

    /// Euclidean length of the frequency at a flat index.
    pub fn freq_norm(&self, flat: usize) -> f64 {
        let k = self.freq_of(flat);
        ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt()
    }

    /// `(1 + |k|^2)^(1/2)`, the smoothed frequency magnitude.
    pub fn bracket(&self, flat: usize) -> f64 {
        let k = self.freq_of(flat);
        (1.0 + (k[0] * k[0] + k[1] * k[1]) as f64).sqrt()
    }

    /// Largest frequency magnitude representable without aliasing concerns,
    /// `M/2 - 1` along an axis.
    pub fn max_freq(&self) -> i64 {
        (self.m / 2) as i64 - 1
    }

    /// Quadrature weight of one grid point, `(2π/M)^dim`.
    pub fn cell_measure(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.m as f64).powi(self.dim as i32)
    }
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("plan cache poisoned");
    cache
        .entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Applies the 1-d FFT along both axes of a row-major `m x m` buffer.
fn fft_2d(buf: &mut [Complex64], m: usize, inverse: bool) {
    let fft = plan(m, inverse);
    for row in buf.chunks_exact_mut(m) {
        fft.process(row);
    }
    let mut col = vec![Complex64::default(); m];
    for c in 0..m {
        for r in 0..m {
            col[r] = buf[r * m + c];
        }
        fft.process(&mut col);
        for r in 0..m {
            buf[r * m + c] = col[r];
        }
    }
}

fn analysis(grid: &TorusGrid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    if grid.dim() == 1 {
        plan(grid.m(), false).process(&mut buf);
    } else {
        fft_2d(&mut buf, grid.m(), false);
    }
    let scale = 1.0 / grid.len() as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

fn synthesis(grid: &TorusGrid, spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spectrum.to_vec();
    if grid.dim() == 1 {
        plan(grid.m(), true).process(&mut buf);
    } else {
        fft_2d(&mut buf, grid.m(), true);
    }
    buf
}

/// A complex-valued function on a torus grid, with a lazily computed and
/// cached spectrum.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: TorusGrid,
    samples: Vec<Complex64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl GridFunction {
    pub fn from_samples(grid: TorusGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        Ok(Self {
            grid,
            samples,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_spectrum(grid: TorusGrid, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} spectrum entries, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        let samples = synthesis(&grid, &spectrum);
        let cell = OnceLock::new();
        cell.set(spectrum).expect("fresh cell");
        Ok(Self {
            grid,
            samples,
            spectrum: cell,
        })
    }

    pub fn zero(grid: TorusGrid) -> Self {
        Self {
            grid,
            samples: vec![Complex64::default(); grid.len()],
            spectrum: OnceLock::new(),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Mutable access to the samples; invalidates the cached spectrum.
    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        self.spectrum = OnceLock::new();
        &mut self.samples
    }

    /// Fourier coefficients, indexed by [`TorusGrid::flat_of`]. Computed on
    /// first use and cached.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| analysis(&self.grid, &self.samples))
    }

    /// The pure mode `e^{ik·x}`.
    pub fn mode(grid: TorusGrid, k: [i64; 2]) -> Result<Self> {
        let flat = grid.flat_of(k)?;
        let mut spectrum = vec![Complex64::default(); grid.len()];
        spectrum[flat] = Complex64::new(1.0, 0.0);
        Self::from_spectrum(grid, spectrum)
    }

    /// A periodized Gaussian bump. `center` and `width` are in units of the
    /// period (so `center = 0.5` peaks mid-domain); in two dimensions the
    /// bump is the product of identical profiles per axis.
    pub fn gaussian(grid: TorusGrid, center: f64, width: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 || width > 1.0 {
            return Err(Error::Domain(format!(
                "gaussian width must lie in (0, 1], got {width}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Domain("gaussian center must be finite".into()));
        }
        let m = grid.m();
        let profile: Vec<f64> = (0..m)
            .map(|j| {
                let x = j as f64 / m as f64 - center;
                (-2..=2)
                    .map(|w| {
                        let d = (x + w as f64) / width;
                        (-0.5 * d * d).exp()
                    })
                    .sum()
            })
            .collect();
        let samples = match grid.dim() {
            1 => profile.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            _ => {
                let mut out = Vec::with_capacity(grid.len());
                for r in 0..m {
                    for c in 0..m {
                        out.push(Complex64::new(profile[r] * profile[c], 0.0));
                    }
                }
                out
            }
        };
        Self::from_samples(grid, samples)
    }

    /// Independent complex Gaussian samples (real and imaginary parts each
    /// standard normal), deterministic in the seed.
    pub fn randn(grid: TorusGrid, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..grid.len())
            .map(|_| Complex64::new(sample_normal(&mut rng), sample_normal(&mut rng)))
            .collect();
        Self {
            grid,
            samples,
            spectrum: OnceLock::new(),
        }
    }

    /// Pointwise multiplication of the spectrum by a frequency symbol.
    pub fn apply_symbol(&self, symbol: impl Fn([i64; 2]) -> Complex64) -> Result<Self> {
        let spec = self.spectrum();
        let out: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(i, &v)| symbol(self.grid.freq_of(i)) * v)
            .collect();
        Self::from_spectrum(self.grid, out)
    }

    /// `(Σ |f(x)|^2 dx)^(1/2)` with the grid quadrature weight.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_measure() * self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sqrt()
    }
}

/// Box-Muller transform; two uniforms in, one standard normal out.
pub(crate) fn sample_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TorusGrid::new(1, 64).is_ok());
        assert!(TorusGrid::new(2, 16).is_ok());
        assert!(TorusGrid::new(3, 16).is_err());
        assert!(TorusGrid::new(1, 48).is_err());
        assert!(TorusGrid::new(1, 2).is_err());
    }

    #[test]
    fn frequency_layout_round_trips() {
        let g = TorusGrid::new(1, 8).unwrap();
        let freqs: Vec<i64> = (0..8).map(|i| g.freq_of(i)[0]).collect();
        assert_eq!(freqs, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for k in -4..4 {
            let flat = g.flat_of([k, 0]).unwrap();
            assert_eq!(g.freq_of(flat), [k, 0]);
        }
        assert!(g.flat_of([4, 0]).is_err());
        assert!(g.flat_of([0, 1]).is_err());

        let g2 = TorusGrid::new(2, 8).unwrap();
        for k in [[3, -4], [-1, 2], [0, 0]] {
            let flat = g2.flat_of(k).unwrap();
            assert_eq!(g2.freq_of(flat), k);
        }
    }

    #[test]
    fn mode_has_unit_coefficient() {
        for (dim, k) in [(1, [5, 0]), (2, [3, -2])] {
            let g = TorusGrid::new(dim, 16).unwrap();
            let f = GridFunction::mode(g, k).unwrap();
            let spec = f.spectrum();
            for (i, &v) in spec.iter().enumerate() {
                let want = if g.freq_of(i) == k { 1.0 } else { 0.0 };
                assert!(
                    (v - Complex64::new(want, 0.0)).norm() < 1e-12,
                    "dim {dim} flat {i}: {v}"
                );
            }
        }
    }

    #[test]
    fn analysis_synthesis_round_trip() {
        for dim in [1, 2] {
            let g = TorusGrid::new(dim, 32).unwrap();
            let f = GridFunction::randn(g, 7);
            let back = GridFunction::from_spectrum(g, f.spectrum().to_vec()).unwrap();
            let err: f64 = f
                .samples()
                .iter()
                .zip(back.samples())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "dim {dim}: round-trip error {err}");
        }
    }

    #[test]
    fn parseval_identity_holds() {
        for dim in [1, 2] {
            let g = TorusGrid::new(dim, 16).unwrap();
            let f = GridFunction::randn(g, 3);
            let phys: f64 = g.cell_measure() * f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>();
            let freq: f64 = (2.0 * std::f64::consts::PI).powi(dim as i32)
                * f.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>();
            assert!(
                (phys / freq - 1.0).abs() < 1e-12,
                "dim {dim}: {phys} vs {freq}"
            );
        }
    }

    #[test]
    fn randn_is_deterministic_in_the_seed() {
        let g = TorusGrid::new(1, 64).unwrap();
        let a = GridFunction::randn(g, 42);
        let b = GridFunction::randn(g, 42);
        let c = GridFunction::randn(g, 43);
        assert_eq!(a.samples(), b.samples());
        assert_ne!(a.samples(), c.samples());
    }

    #[test]
    fn gaussian_spectrum_decays() {
        let g = TorusGrid::new(1, 128).unwrap();
        let f = GridFunction::gaussian(g, 0.5, 0.05).unwrap();
        let spec = f.spectrum();
        // Smooth function: coefficients at the top octave are negligible
        // relative to the bulk.
        let dc = spec[g.flat_of([0, 0]).unwrap()].norm();
        let top = spec[g.flat_of([63, 0]).unwrap()].norm();
        assert!(dc > 1e-3);
        assert!(top < dc * 1e-10, "top/dc = {}", top / dc);
    }

    #[test]
    fn symbol_application_is_diagonal() {
        let g = TorusGrid::new(1, 16).unwrap();
        let f = GridFunction::mode(g, [3, 0]).unwrap();
        let lap = f
            .apply_symbol(|k| Complex64::new((k[0] * k[0] + k[1] * k[1]) as f64, 0.0))
            .unwrap();
        // -Δ e^{i3x} = 9 e^{i3x}.
        for (a, b) in lap.samples().iter().zip(f.samples()) {
            assert!((a - b * 9.0).norm() < 1e-10);
        }
    }

    #[test]
    fn samples_mut_invalidates_the_cache() {
        let g = TorusGrid::new(1, 8).unwrap();
        let mut f = GridFunction::mode(g, [1, 0]).unwrap();
        let _ = f.spectrum();
        f.samples_mut()[0] += Complex64::new(1.0, 0.0);
        let dc = f.spectrum()[0];
        assert!((dc.re - 1.0 / 8.0).abs() < 1e-12, "dc = {dc}");
    }
}
