//! Whole-sequence properties of the dyadic windows: exact reconstruction,
//! verification across configurations, and linearity of the band maps.

use num_complex::Complex64;

use gensmooth::window::verify_special_sequence;
use gensmooth::{GridFunction, SpecialSequence, TorusGrid, WindowProfile};

fn max_sample_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn arbitrary_functions_reconstruct_exactly() {
    for (dim, m) in [(1usize, 128usize), (2, 32)] {
        let grid = TorusGrid::new(dim, m).unwrap();
        for n in [1, 2] {
            let seq = SpecialSequence::new(grid, n).unwrap();
            for trial in 0..10 {
                let f = GridFunction::randn(grid, 1000 + trial);
                let sum = seq.reconstruct(&f).unwrap();
                let scale = f
                    .samples()
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0, f64::max);
                let err = max_sample_diff(&f, &sum);
                assert!(
                    err <= 1e-12 * scale,
                    "dim {dim} m {m} n {n} trial {trial}: error {err:.3e}"
                );
            }
        }
    }
}

#[test]
fn band_sum_equals_reconstruction() {
    let grid = TorusGrid::new(1, 64).unwrap();
    let seq = SpecialSequence::new(grid, 1).unwrap();
    let f = GridFunction::randn(grid, 3);
    let mut acc = GridFunction::zero(grid);
    for j in 0..seq.count() {
        let band = seq.band(&f, j).unwrap();
        for (a, b) in acc.samples_mut().iter_mut().zip(band.samples()) {
            *a += b;
        }
    }
    let direct = seq.reconstruct(&f).unwrap();
    assert!(max_sample_diff(&acc, &direct) < 1e-12);
}

#[test]
fn bands_are_linear() {
    let grid = TorusGrid::new(1, 64).unwrap();
    let seq = SpecialSequence::new(grid, 2).unwrap();
    let f = GridFunction::randn(grid, 5);
    let g = GridFunction::randn(grid, 6);
    let c = Complex64::new(0.7, -1.1);
    let mut combo = GridFunction::zero(grid);
    for ((out, a), b) in combo
        .samples_mut()
        .iter_mut()
        .zip(f.samples())
        .zip(g.samples())
    {
        *out = a + c * b;
    }
    for j in 0..seq.count() {
        let lhs = seq.band(&combo, j).unwrap();
        let fa = seq.band(&f, j).unwrap();
        let fb = seq.band(&g, j).unwrap();
        let err = lhs
            .samples()
            .iter()
            .zip(fa.samples().iter().zip(fb.samples()))
            .map(|(l, (a, b))| (l - (a + c * b)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "band {j}: {err:.3e}");
    }
}

#[test]
fn verification_passes_across_grid_sizes() {
    for (dim, m) in [(1usize, 128usize), (1, 256), (2, 64)] {
        for n in [1u32, 2] {
            let grid = TorusGrid::new(dim, m).unwrap();
            let seq = SpecialSequence::new(grid, n).unwrap();
            let report = verify_special_sequence(&seq);
            assert!(
                report.all_pass,
                "dim {dim} m {m} n {n}: {:?}",
                report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| (c.name, c.detail.clone()))
                    .collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn bump_profile_covers_but_does_not_reconstruct() {
    let grid = TorusGrid::new(1, 128).unwrap();
    let seq = SpecialSequence::with_profile(grid, 1, WindowProfile::SmoothBump).unwrap();
    let f = GridFunction::randn(grid, 9);
    let sum = seq.reconstruct(&f).unwrap();
    // Total weight is positive and bounded, but not 1: the reconstruction
    // differs visibly from the input away from the zero frequency.
    let err = max_sample_diff(&f, &sum);
    assert!(err > 1e-3);
    let report = verify_special_sequence(&seq);
    assert!(report.all_pass);
}
