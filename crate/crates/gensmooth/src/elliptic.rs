//! Constant-coefficient operators on the torus, given by Fourier multipliers.
//!
//! A [`MultiplierSymbol`] stores one complex value per lattice frequency and
//! acts diagonally on spectra. Because the operator is diagonal, everything
//! usually computed by functional-analytic argument is available by direct
//! inspection: the kernel is spanned by the modes where the symbol vanishes,
//! the adjoint is the conjugate symbol, solvability of `A u = f` is a finite
//! set of compatibility conditions, and a parametrix is division by the
//! symbol outside a compact frequency set.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, TorusGrid};
use crate::norms::multiplier_norm;
use crate::ro::RoFunction;

/// Relative magnitude below which a symbol value counts as a structural zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Compatibility threshold for [`MultiplierSymbol::solve`], relative to the
/// L2 norm of the right-hand side.
pub const COMPAT_REL_TOL: f64 = 1e-10;

/// A Fourier multiplier on a fixed grid: one value per frequency.
#[derive(Debug, Clone)]
pub struct MultiplierSymbol {
    grid: TorusGrid,
    values: Vec<Complex64>,
    label: String,
}

/// Kernel and cokernel data of a multiplier operator, read off from the
/// zero set of its symbol.
#[derive(Debug, Clone, Serialize)]
pub struct FredholmData {
    /// Frequencies whose modes span the kernel.
    pub kernel_modes: Vec<[i64; 2]>,
    /// Dimension of the kernel.
    pub kernel_dim: usize,
    /// Dimension of the cokernel. The adjoint symbol is the complex
    /// conjugate, which vanishes at the same frequencies, so this always
    /// equals the kernel dimension.
    pub cokernel_dim: usize,
    /// `kernel_dim - cokernel_dim`, always zero for a multiplier.
    pub index: i64,
}

/// Two-sided comparison of a symbol against a regularity weight.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EllipticityBounds {
    /// Infimum of `|a(xi)| / alpha(<xi>)` over frequencies outside the zero
    /// set.
    pub c_lower: f64,
    /// Supremum of the same ratio.
    pub c_upper: f64,
}

impl EllipticityBounds {
    /// True when the lower constant is bounded away from zero, so the symbol
    /// grows like the weight on its whole domain of invertibility.
    pub fn is_elliptic(&self) -> bool {
        self.c_lower > 0.0 && self.c_lower.is_finite() && self.c_upper.is_finite()
    }
}

/// A frequency-truncated inverse together with its smoothing remainder.
#[derive(Debug, Clone)]
pub struct Parametrix {
    /// The approximate inverse: `1 / a` outside the cutoff radius, zero
    /// inside.
    pub inverse: MultiplierSymbol,
    /// Symbol of `R A - I`. By construction it is exactly `-1` inside the
    /// cutoff and exactly `0` outside, so the remainder operator is a
    /// projection-sized smoothing term.
    pub remainder: MultiplierSymbol,
    /// Euclidean frequency radius of the cutoff.
    pub cutoff_radius: f64,
    /// Largest floating-point deviation of `a(xi) / a(xi)` from 1 outside
    /// the cutoff. Zero for real symbols; complex division can leave dust
    /// at the last bit.
    pub cancellation_residual: f64,
}

impl MultiplierSymbol {
    /// Wraps explicit per-frequency values, in flat grid order.
    pub fn from_values(
        grid: TorusGrid,
        values: Vec<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} symbol values for a grid with {} frequencies",
                values.len(),
                grid.len()
            )));
        }
        for (flat, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(format!(
                    "symbol value at frequency {:?} is not finite",
                    grid.freq_of(flat)
                )));
            }
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    /// The (negative) Laplacian: `a(xi) = |xi|^2`. Vanishes at the zero
    /// frequency, so constants are in the kernel.
    pub fn laplacian(grid: TorusGrid) -> Self {
        let values = (0..grid.len())
            .map(|flat| {
                let n = grid.freq_norm(flat);
                Complex64::new(n * n, 0.0)
            })
            .collect();
        Self {
            grid,
            values,
            label: "laplacian".into(),
        }
    }

    /// The shifted Laplacian: `a(xi) = 1 + |xi|^2`. Invertible everywhere.
    pub fn one_minus_laplacian(grid: TorusGrid) -> Self {
        let values = (0..grid.len())
            .map(|flat| {
                let n = grid.freq_norm(flat);
                Complex64::new(1.0 + n * n, 0.0)
            })
            .collect();
        Self {
            grid,
            values,
            label: "one-minus-laplacian".into(),
        }
    }

    /// The positive weight `a(xi) = alpha(<xi>)` for a regularity function
    /// `alpha`: the lift operator of the graded scale.
    pub fn graded(grid: TorusGrid, alpha: &RoFunction) -> Self {
        let values = (0..grid.len())
            .map(|flat| {
                let b = grid.bracket(flat);
                Complex64::new(alpha.ln_value(b.ln()).exp(), 0.0)
            })
            .collect();
        Self {
            grid,
            values,
            label: format!("graded[{alpha}]"),
        }
    }

    /// Grid the symbol lives on.
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Human-readable origin of the symbol.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Per-frequency values in flat grid order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at a given frequency.
    pub fn value_at(&self, k: [i64; 2]) -> Result<Complex64> {
        Ok(self.values[self.grid.flat_of(k)?])
    }

    /// Applies the multiplier to a grid function.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid() != self.grid {
            return Err(Error::GridMismatch(
                "function and symbol live on different grids".into(),
            ));
        }
        let spectrum: Vec<Complex64> = f
            .spectrum()
            .iter()
            .zip(&self.values)
            .map(|(c, a)| c * a)
            .collect();
        GridFunction::from_spectrum(self.grid, spectrum)
    }

    /// The adjoint operator: the complex-conjugate symbol.
    pub fn adjoint(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
            label: format!("adjoint[{}]", self.label),
        }
    }

    fn zero_threshold(&self) -> f64 {
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        ZERO_TOL * max
    }

    /// Frequencies where the symbol vanishes (relative to its largest value).
    pub fn zero_modes(&self) -> Vec<[i64; 2]> {
        let thr = self.zero_threshold();
        (0..self.grid.len())
            .filter(|&flat| self.values[flat].norm() <= thr)
            .map(|flat| self.grid.freq_of(flat))
            .collect()
    }

    /// Kernel, cokernel, and index of the operator.
    pub fn fredholm(&self) -> FredholmData {
        let kernel_modes = self.zero_modes();
        let dim = kernel_modes.len();
        FredholmData {
            kernel_modes,
            kernel_dim: dim,
            cokernel_dim: dim,
            index: 0,
        }
    }

    /// Bounds of `|a(xi)| / alpha(<xi>)` over the invertible frequencies.
    pub fn ellipticity(&self, alpha: &RoFunction) -> Result<EllipticityBounds> {
        let thr = self.zero_threshold();
        let mut c_lower = f64::INFINITY;
        let mut c_upper = 0.0_f64;
        let mut seen = false;
        for flat in 0..self.grid.len() {
            let a = self.values[flat].norm();
            if a <= thr {
                continue;
            }
            let w = alpha.ln_value(self.grid.bracket(flat).ln()).exp();
            let ratio = a / w;
            c_lower = c_lower.min(ratio);
            c_upper = c_upper.max(ratio);
            seen = true;
        }
        if !seen {
            return Err(Error::DegenerateNorm(
                "symbol vanishes identically; no ellipticity ratio exists".into(),
            ));
        }
        Ok(EllipticityBounds { c_lower, c_upper })
    }

    /// L2-scale size of the right-hand side components that obstruct
    /// solvability, together with the acceptance threshold.
    pub fn compatibility_residual(&self, f: &GridFunction) -> Result<(f64, f64)> {
        if f.grid() != self.grid {
            return Err(Error::GridMismatch(
                "function and symbol live on different grids".into(),
            ));
        }
        let thr = self.zero_threshold();
        let spectrum = f.spectrum();
        let blocked: f64 = (0..self.grid.len())
            .filter(|&flat| self.values[flat].norm() <= thr)
            .map(|flat| spectrum[flat].norm_sqr())
            .sum();
        // Pairings against the kernel modes: <f, e_k> = (2 pi)^dim f_hat(k),
        // so an RHS that is constant c has residual c (2 pi)^dim.
        let measure = (2.0 * std::f64::consts::PI).powi(self.grid.dim() as i32);
        let residual = measure * blocked.sqrt();
        let threshold = COMPAT_REL_TOL * f.l2_norm();
        Ok((residual, threshold))
    }

    /// Solves `A u = f` by spectral division.
    ///
    /// The right-hand side must be compatible: its components along the
    /// kernel modes must vanish up to [`COMPAT_REL_TOL`] relative to its own
    /// size, otherwise no solution exists and the call fails with the
    /// measured residual. The returned solution has no component along the
    /// kernel, which makes it the minimal-norm one.
    pub fn solve(&self, f: &GridFunction) -> Result<GridFunction> {
        let (residual, threshold) = self.compatibility_residual(f)?;
        if residual > threshold {
            return Err(Error::Unsolvable {
                residual,
                threshold,
            });
        }
        let thr = self.zero_threshold();
        let spectrum: Vec<Complex64> = f
            .spectrum()
            .iter()
            .zip(&self.values)
            .map(|(c, a)| {
                if a.norm() <= thr {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / a
                }
            })
            .collect();
        GridFunction::from_spectrum(self.grid, spectrum)
    }

    /// Solves `A u = f` and reports how the graded norm of the solution,
    /// measured one order higher, compares against the graded norm of the
    /// data: the ratio `||u||_{alpha * order} / ||f||_{alpha}` in the
    /// multiplier family with exponent `p`.
    ///
    /// For a symbol elliptic of order `order` the ratio is bounded by the
    /// reciprocal of the lower ellipticity constant.
    pub fn a_priori_ratio(
        &self,
        order: &RoFunction,
        alpha: &RoFunction,
        p: f64,
        f: &GridFunction,
    ) -> Result<f64> {
        let u = self.solve(f)?;
        let lifted = RoFunction::product(alpha, order);
        let num = multiplier_norm(&lifted, p, &u)?;
        let den = multiplier_norm(alpha, p, f)?;
        if den == 0.0 {
            return Err(Error::DegenerateNorm(
                "right-hand side has zero norm".into(),
            ));
        }
        Ok(num / den)
    }

    /// Builds the parametrix truncated at the given Euclidean frequency
    /// radius: `R` has symbol `1/a` outside the radius and `0` inside.
    ///
    /// The remainder `R A - I` then has symbol exactly `-1` inside the
    /// radius and exactly `0` outside; the floating-point residual of the
    /// outside cancellation `a / a - 1` is reported as a diagnostic. The
    /// symbol must be invertible outside the radius.
    pub fn parametrix(&self, radius: f64) -> Result<Parametrix> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::Domain(format!(
                "cutoff radius must be a nonnegative number, got {radius}"
            )));
        }
        let thr = self.zero_threshold();
        let mut inverse = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        let mut remainder = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        let mut cancellation_residual = 0.0_f64;
        for flat in 0..self.grid.len() {
            let inside = self.grid.freq_norm(flat) <= radius;
            if inside {
                remainder[flat] = Complex64::new(-1.0, 0.0);
                continue;
            }
            let a = self.values[flat];
            if a.norm() <= thr {
                return Err(Error::Domain(format!(
                    "symbol vanishes at frequency {:?} outside the cutoff radius {radius}",
                    self.grid.freq_of(flat)
                )));
            }
            inverse[flat] = 1.0 / a;
            cancellation_residual = cancellation_residual.max((a / a - 1.0).norm());
        }
        Ok(Parametrix {
            inverse: MultiplierSymbol {
                grid: self.grid,
                values: inverse,
                label: format!("parametrix[{}; radius {radius}]", self.label),
            },
            remainder: MultiplierSymbol {
                grid: self.grid,
                values: remainder,
                label: format!("remainder[{}; radius {radius}]", self.label),
            },
            cutoff_radius: radius,
            cancellation_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;

    fn grid_1d(m: usize) -> TorusGrid {
        TorusGrid::new(1, m).unwrap()
    }

    #[test]
    fn laplacian_multiplies_modes_by_frequency_squared() {
        let grid = grid_1d(32);
        let sym = MultiplierSymbol::laplacian(grid);
        let mode = GridFunction::mode(grid, [5, 0]).unwrap();
        let out = sym.apply(&mode).unwrap();
        let k = grid.flat_of([5, 0]).unwrap();
        assert!((out.spectrum()[k] - Complex64::new(25.0, 0.0)).norm() < 1e-12);
        let others: f64 = out
            .spectrum()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, c)| c.norm())
            .sum();
        assert!(others < 1e-10);
    }

    #[test]
    fn kernel_of_laplacian_is_the_constants() {
        let grid = grid_1d(16);
        let data = MultiplierSymbol::laplacian(grid).fredholm();
        assert_eq!(data.kernel_modes, vec![[0, 0]]);
        assert_eq!(data.kernel_dim, 1);
        assert_eq!(data.cokernel_dim, 1);
        assert_eq!(data.index, 0);

        let shifted = MultiplierSymbol::one_minus_laplacian(grid).fredholm();
        assert_eq!(shifted.kernel_dim, 0);
        assert_eq!(shifted.index, 0);
    }

    #[test]
    fn adjoint_conjugates_the_symbol() {
        let grid = grid_1d(8);
        let values: Vec<Complex64> = (0..grid.len())
            .map(|j| Complex64::new(1.0 + j as f64, 0.5 * j as f64))
            .collect();
        let sym = MultiplierSymbol::from_values(grid, values.clone(), "test").unwrap();
        let adj = sym.adjoint();
        for (v, w) in values.iter().zip(adj.values()) {
            assert_eq!(w.im, -v.im);
            assert_eq!(w.re, v.re);
        }
    }

    #[test]
    fn shifted_laplacian_is_elliptic_of_second_order() {
        let grid = grid_1d(64);
        let sym = MultiplierSymbol::one_minus_laplacian(grid);
        let order = RoFunction::parse("t^2").unwrap();
        let bounds = sym.ellipticity(&order).unwrap();
        assert!(bounds.is_elliptic());
        // 1 + n^2 equals <n>^2 exactly, so both constants collapse to 1.
        assert!((bounds.c_lower - 1.0).abs() < 1e-12);
        assert!((bounds.c_upper - 1.0).abs() < 1e-12);

        // The plain Laplacian dips at frequency 1: 1 / <1>^2 = 1/2.
        let plain = MultiplierSymbol::laplacian(grid).ellipticity(&order).unwrap();
        assert!((plain.c_lower - 0.5).abs() < 1e-12);
        assert!(plain.c_upper < 1.0);
    }

    #[test]
    fn solve_inverts_on_the_orthogonal_complement() {
        let grid = grid_1d(64);
        let sym = MultiplierSymbol::laplacian(grid);
        // Right-hand side with no mean: compatible by construction.
        let f = GridFunction::mode(grid, [3, 0]).unwrap();
        let u = sym.solve(&f).unwrap();
        let k = grid.flat_of([3, 0]).unwrap();
        assert!((u.spectrum()[k] - Complex64::new(1.0 / 9.0, 0.0)).norm() < 1e-14);
        let back = sym.apply(&u).unwrap();
        let err: f64 = back
            .spectrum()
            .iter()
            .zip(f.spectrum())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn incompatible_data_is_refused_with_the_residual() {
        let grid = grid_1d(32);
        let sym = MultiplierSymbol::laplacian(grid);
        // A constant has all its mass on the kernel mode.
        let f = GridFunction::mode(grid, [0, 0]).unwrap();
        match sym.solve(&f) {
            Err(Error::Unsolvable {
                residual,
                threshold,
            }) => {
                assert!(residual > threshold);
                assert!(residual > 1.0);
            }
            other => panic!("expected Unsolvable, got {other:?}"),
        }
    }

    #[test]
    fn a_priori_ratio_is_bounded_by_the_ellipticity_constant() {
        let grid = grid_1d(128);
        let sym = MultiplierSymbol::one_minus_laplacian(grid);
        let order = RoFunction::parse("t^2").unwrap();
        let alpha = RoFunction::parse("t^0.5*log(t)").unwrap();
        let f = GridFunction::randn(grid, 2024);
        let ratio = sym.a_priori_ratio(&order, &alpha, 2.0, &f).unwrap();
        // c_lower = 1 for this symbol, so the lifted norm of the solution
        // cannot exceed the norm of the data.
        assert!(ratio <= 1.0 + 1e-12, "ratio {ratio}");
        assert!(ratio > 0.1);
    }

    #[test]
    fn parametrix_remainder_is_a_sharp_projection() {
        let grid = grid_1d(64);
        let sym = MultiplierSymbol::laplacian(grid);
        let par = sym.parametrix(4.0).unwrap();
        assert_eq!(par.cancellation_residual, 0.0);
        for flat in 0..grid.len() {
            let inside = grid.freq_norm(flat) <= 4.0;
            let r = par.remainder.values()[flat];
            if inside {
                assert_eq!(r, Complex64::new(-1.0, 0.0));
            } else {
                assert_eq!(r, Complex64::new(0.0, 0.0));
            }
        }
        // Operator check: (R A - I) f lives inside the cutoff; A R f - f
        // vanishes outside it.
        let f = GridFunction::randn(grid, 7);
        let ra = par.inverse.apply(&sym.apply(&f).unwrap()).unwrap();
        for flat in 0..grid.len() {
            let diff = (ra.spectrum()[flat] - f.spectrum()[flat]).norm();
            if grid.freq_norm(flat) > 4.0 {
                assert!(diff < 1e-12, "flat {flat}: diff {diff}");
            }
        }
    }

    #[test]
    fn parametrix_requires_invertibility_outside_the_cutoff() {
        let grid = grid_1d(16);
        let sym = MultiplierSymbol::laplacian(grid);
        // Radius 0 leaves the zero frequency outside? No: |0| <= 0, so the
        // kernel mode is inside and the construction succeeds.
        assert!(sym.parametrix(0.0).is_ok());
        // A symbol vanishing away from the origin cannot be truncated below
        // that zero.
        let mut values: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(1.0, 0.0))
            .collect();
        let dead = grid.flat_of([5, 0]).unwrap();
        values[dead] = Complex64::new(0.0, 0.0);
        let broken = MultiplierSymbol::from_values(grid, values, "holed").unwrap();
        assert!(broken.parametrix(2.0).is_err());
        assert!(broken.parametrix(6.0).is_ok());
    }

    #[test]
    fn graded_symbol_matches_bracket_weight() {
        let grid = grid_1d(32);
        let alpha = RoFunction::parse("t^1.5").unwrap();
        let sym = MultiplierSymbol::graded(grid, &alpha);
        let flat = grid.flat_of([4, 0]).unwrap();
        let expected = (1.0_f64 + 16.0).sqrt().powf(1.5);
        assert!((sym.values()[flat].re - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn two_dimensional_solve_round_trips() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let sym = MultiplierSymbol::one_minus_laplacian(grid);
        let f = GridFunction::randn(grid, 99);
        let u = sym.solve(&f).unwrap();
        let back = sym.apply(&u).unwrap();
        let err: f64 = back
            .samples()
            .iter()
            .zip(f.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}
