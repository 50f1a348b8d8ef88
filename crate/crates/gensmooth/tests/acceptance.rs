//! Acceptance gate: twelve end-to-end checks covering the whole library,
//! each printing a single PASS/FAIL line. Tolerances are pinned here and
//! are not to be loosened; a failure means the implementation drifted.
//!
//! Run with `--nocapture` to see the per-check lines.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gensmooth::interp::{
    k_functional, verify_gamma_operator_bound, verify_interp_identity, verify_theta_operator_bound,
};
use gensmooth::norms::{summed_norm, Ensemble, NormFamily, SpaceSpec};
use gensmooth::ro::{
    decompose_against_l2, decompose_along_q, interp_alpha, sampled_matuszewska_indices,
    CompanionExponent, IndexGridConfig,
};
use gensmooth::window::verify_special_sequence;
use gensmooth::{
    BFunction, Error, GridFunction, MultiplierSymbol, RoFunction, SpecialSequence, TorusGrid,
    WeightedCouple,
};

fn gate(number: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPT {number:02} {name}: {status} ({detail})");
    assert!(pass, "ACCEPT {number:02} {name}: FAIL ({detail})");
}

fn log_power(s: f64, r1: f64) -> RoFunction {
    RoFunction::parse(&format!("t^{s}*log(t)^{r1}")).unwrap()
}

fn l2_distance(f: &GridFunction, g: &GridFunction) -> f64 {
    f.samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn l2_size(f: &GridFunction) -> f64 {
    f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// 1: sampled index estimation recovers (s, s) for log-perturbed powers,
/// within 0.05, in under a second per function.
#[test]
fn accept_01_log_power_index_recovery() {
    let mut worst_err: f64 = 0.0;
    let mut worst_time = 0.0_f64;
    for &s in &[-2.0, 0.5, 3.0] {
        for &r1 in &[-3.0, 0.0, 4.0] {
            let alpha = log_power(s, r1);
            let started = Instant::now();
            let idx = sampled_matuszewska_indices(&alpha, &IndexGridConfig::default()).unwrap();
            let elapsed = started.elapsed().as_secs_f64();
            worst_time = worst_time.max(elapsed);
            worst_err = worst_err
                .max((idx.lower - s).abs())
                .max((idx.upper - s).abs());
        }
    }
    gate(
        1,
        "log-power-index-recovery",
        worst_err <= 0.05 && worst_time < 1.0,
        format!("max index error {worst_err:.2e}, max runtime {worst_time:.3}s"),
    );
}

/// 2: both space decompositions reconstruct the original grading exactly
/// through the combination formula, on 20 random feasible draws each.
#[test]
fn accept_02_parameter_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let grid_ts: Vec<f64> = (0..100).map(|k| 2f64.powf(k as f64 * 0.2)).collect();
    let mut worst: f64 = 0.0;
    let reconstruct_err = |alpha: &RoFunction, alpha0: &RoFunction, s1: f64, theta: f64| {
        let combined = interp_alpha(alpha0, &RoFunction::power(s1), theta).unwrap();
        let mut err: f64 = 0.0;
        for &t in &grid_ts {
            let want = alpha.eval(t).unwrap();
            let got = combined.eval(t).unwrap();
            err = err.max((got - want).abs() / want.abs());
        }
        err
    };

    let mut anchored = 0;
    let mut attempts = 0;
    while anchored < 20 && attempts < 10_000 {
        attempts += 1;
        let alpha = log_power(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let s1 = rng.gen_range(-2.0..2.0);
        let q = rng.gen_range(1.3..3.5);
        let choice = match attempts % 3 {
            0 => {
                let p = rng.gen_range(2.2..4.0);
                (p, CompanionExponent::P1(p + rng.gen_range(0.3..3.0)))
            }
            1 => {
                let p = rng.gen_range(1.15..1.9);
                (p, CompanionExponent::P1(rng.gen_range(1.02..p - 0.05)))
            }
            _ => {
                let far = if rng.gen_bool(0.5) {
                    rng.gen_range(2.5..6.0)
                } else {
                    rng.gen_range(1.05..1.7)
                };
                (2.0, CompanionExponent::Q1(far))
            }
        };
        let Ok(d) = decompose_against_l2(&alpha, choice.0, q, choice.1, s1) else {
            continue;
        };
        worst = worst.max(reconstruct_err(&alpha, &d.alpha0, d.s1, d.theta));
        anchored += 1;
    }

    let mut diagonal = 0;
    while diagonal < 20 && attempts < 20_000 {
        attempts += 1;
        let alpha = log_power(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let s1 = rng.gen_range(-2.0..2.0);
        let p: f64 = rng.gen_range(1.0..4.0);
        let q: f64 = rng.gen_range(1.0..4.0);
        if (p - q).abs() < 0.15 {
            continue;
        }
        let r = q + (q - p) * rng.gen_range(0.5..3.0);
        if r < 1.0 {
            continue;
        }
        let Ok(d) = decompose_along_q(&alpha, p, q, r, s1) else {
            continue;
        };
        worst = worst.max(reconstruct_err(&alpha, &d.alpha0, s1, d.theta));
        diagonal += 1;
    }

    gate(
        2,
        "parameter-round-trips",
        anchored == 20 && diagonal == 20 && worst <= 1e-12,
        format!("{anchored}+{diagonal} feasible draws, max relative error {worst:.2e}"),
    );
}

/// 3: window sequences at M=128 pass every structural check, and the bands
/// of arbitrary random functions sum back to the function at 1e-12.
#[test]
fn accept_03_window_verification_and_reconstruction() {
    let grid = TorusGrid::new(1, 128).unwrap();
    let mut worst_rel: f64 = 0.0;
    let mut all_checks = true;
    for n in [1u32, 2] {
        let seq = SpecialSequence::new(grid, n).unwrap();
        let report = verify_special_sequence(&seq);
        all_checks &= report.all_pass;
        for trial in 0..50u64 {
            let f = GridFunction::randn(grid, 300 + 50 * n as u64 + trial);
            let rec = seq.reconstruct(&f).unwrap();
            worst_rel = worst_rel.max(l2_distance(&rec, &f) / l2_size(&f));
        }
    }
    gate(
        3,
        "window-verification-and-reconstruction",
        all_checks && worst_rel <= 1e-12,
        format!("all window checks pass, max relative reconstruction error {worst_rel:.2e}"),
    );
}

/// 4: the summed and pointwise families coincide on the diagonal p = q.
#[test]
fn accept_04_diagonal_families_agree() {
    let grid = TorusGrid::new(1, 128).unwrap();
    let seq = SpecialSequence::new(grid, 1).unwrap();
    let alpha = RoFunction::parse("t^0.8*log(t)").unwrap();
    let ensemble = Ensemble {
        grid,
        band_limit: 40.0,
        trials: 50,
        seed: 404,
    };
    let mut worst: f64 = 0.0;
    for &p in &[1.0, 1.5, 2.0, 3.0] {
        let summed = SpaceSpec {
            family: NormFamily::Summed,
            alpha: alpha.clone(),
            p,
            q: p,
        };
        let pointwise = SpaceSpec {
            family: NormFamily::Pointwise,
            alpha: alpha.clone(),
            p,
            q: p,
        };
        for i in 0..ensemble.trials {
            let f = ensemble.draw(i);
            let a = summed.norm(&seq, &f).unwrap();
            let b = pointwise.norm(&seq, &f).unwrap();
            worst = worst.max((a - b).abs() / a.max(1e-300));
        }
    }
    gate(
        4,
        "diagonal-families-agree",
        worst <= 1e-12,
        format!("max relative gap {worst:.2e} over p = q in {{1, 1.5, 2, 3}}"),
    );
}

/// 5: the window-sum norm at p = q = 2 and the direct multiplier norm are
/// equivalent: all ratios inside one interval, whose endpoints move by less
/// than 10% when the grid doubles.
#[test]
fn accept_05_multiplier_equivalence_stability() {
    let mut worst_drift: f64 = 0.0;
    let mut widest: f64 = 0.0;
    for expr in ["t", "t^2*log(t)", "t^0.5"] {
        let alpha = RoFunction::parse(expr).unwrap();
        let mut endpoints = Vec::new();
        for m in [128usize, 256] {
            let grid = TorusGrid::new(1, m).unwrap();
            let seq = SpecialSequence::new(grid, 1).unwrap();
            let pointwise = SpaceSpec {
                family: NormFamily::Pointwise,
                alpha: alpha.clone(),
                p: 2.0,
                q: 2.0,
            };
            let multiplier = SpaceSpec {
                family: NormFamily::Multiplier,
                alpha: alpha.clone(),
                p: 2.0,
                q: 2.0,
            };
            let ensemble = Ensemble {
                grid,
                band_limit: f64::INFINITY,
                trials: 100,
                seed: 505,
            };
            let stats =
                gensmooth::norms::norm_equiv_ratio(&pointwise, &multiplier, &seq, &ensemble)
                    .unwrap();
            widest = widest.max(stats.c_max / stats.c_min);
            endpoints.push((stats.c_min, stats.c_max));
        }
        let (lo0, hi0) = endpoints[0];
        let (lo1, hi1) = endpoints[1];
        worst_drift = worst_drift
            .max((lo1 - lo0).abs() / lo0)
            .max((hi1 - hi0).abs() / hi0);
    }
    gate(
        5,
        "multiplier-equivalence-stability",
        widest.is_finite() && widest <= 50.0 && worst_drift < 0.10,
        format!(
            "widest ratio interval {widest:.3}, endpoint drift under doubling {:.2}%",
            100.0 * worst_drift
        ),
    );
}

/// 6: norms built from sequences with different overlap counts are
/// equivalent, with ensemble ratio endpoints stable under grid doubling.
#[test]
fn accept_06_window_overlap_independence() {
    let alpha = RoFunction::parse("t^1.1*log(t)^-1").unwrap();
    let (p, q) = (2.5, 1.8);
    let mut endpoints = Vec::new();
    for m in [128usize, 256] {
        let grid = TorusGrid::new(1, m).unwrap();
        let narrow = SpecialSequence::new(grid, 1).unwrap();
        let wide = SpecialSequence::new(grid, 2).unwrap();
        let ensemble = Ensemble {
            grid,
            band_limit: f64::INFINITY,
            trials: 100,
            seed: 606,
        };
        let mut c_min = f64::INFINITY;
        let mut c_max: f64 = 0.0;
        for i in 0..ensemble.trials {
            let f = ensemble.draw(i);
            let a = summed_norm(&narrow, &alpha, p, q, &f).unwrap();
            let b = summed_norm(&wide, &alpha, p, q, &f).unwrap();
            let r = a / b;
            c_min = c_min.min(r);
            c_max = c_max.max(r);
        }
        endpoints.push((c_min, c_max));
    }
    let (lo0, hi0) = endpoints[0];
    let (lo1, hi1) = endpoints[1];
    let drift = ((lo1 - lo0).abs() / lo0).max((hi1 - hi0).abs() / hi0);
    let spread = hi0 / lo0;
    gate(
        6,
        "window-overlap-independence",
        spread.is_finite() && spread <= 50.0 && drift < 0.20,
        format!("ratio spread {spread:.3} at M=128, endpoint drift under doubling {:.2}%", 100.0 * drift),
    );
}

fn weighted_norm(w: &[f64], x: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        w.iter().zip(x).map(|(w, x)| w * x.abs()).fold(0.0, f64::max)
    } else {
        w.iter()
            .zip(x)
            .map(|(w, x)| (w * x.abs()).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Dense scan of a scalar convex function with bracket refinement.
fn refining_scan(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (floor, ceil) = (lo, hi);
    let n = 2000usize;
    let mut best = f64::INFINITY;
    for _ in 0..5 {
        let step = (hi - lo) / n as f64;
        let mut best_u = lo;
        for i in 0..=n {
            let u = lo + step * i as f64;
            let v = g(u);
            if v < best {
                best = v;
                best_u = u;
            }
        }
        lo = (best_u - 2.0 * step).max(floor);
        hi = (best_u + 2.0 * step).min(ceil);
    }
    best
}

/// Independent oracle: exhaustive splitting search on a refining grid. A sup
/// endpoint turns the optimal split into an explicit function of the cap
/// level, so those cases scan the scalar cap instead; product-grid stencils
/// cannot track the irrational ridges a max objective produces.
fn grid_search_k(w0: &[f64], w1: &[f64], q0: f64, q1: f64, omega: &[f64], t: f64) -> f64 {
    let m = omega.len();
    let abs: Vec<f64> = omega.iter().map(|v| v.abs()).collect();

    if q0.is_infinite() && q1.is_infinite() {
        let top = w0
            .iter()
            .zip(&abs)
            .map(|(w, x)| w * x)
            .fold(0.0_f64, f64::max);
        return refining_scan(0.0, top, |cap| {
            let second = w1
                .iter()
                .zip(w0)
                .zip(&abs)
                .map(|((v, w), x)| v * (x - cap / w).max(0.0))
                .fold(0.0_f64, f64::max);
            cap + t * second
        });
    }
    if q0.is_infinite() {
        let top = w0
            .iter()
            .zip(&abs)
            .map(|(w, x)| w * x)
            .fold(0.0_f64, f64::max);
        return refining_scan(0.0, top, |cap| {
            let rest: Vec<f64> = w0
                .iter()
                .zip(&abs)
                .map(|(w, x)| x - x.min(cap / w))
                .collect();
            cap + t * weighted_norm(w1, &rest, q1)
        });
    }
    if q1.is_infinite() {
        let top = w1
            .iter()
            .zip(&abs)
            .map(|(w, x)| w * x)
            .fold(0.0_f64, f64::max);
        return refining_scan(0.0, top, |cap| {
            let rest: Vec<f64> = w1
                .iter()
                .zip(&abs)
                .map(|(w, x)| x - x.min(cap / w))
                .collect();
            weighted_norm(w0, &rest, q0) + t * cap
        });
    }
    let eval = |split: &[f64]| -> f64 {
        let first: Vec<f64> = split.iter().zip(&abs).map(|(s, x)| s * x).collect();
        let second: Vec<f64> = split.iter().zip(&abs).map(|(s, x)| (1.0 - s) * x).collect();
        weighted_norm(w0, &first, q0) + t * weighted_norm(w1, &second, q1)
    };
    let scan = |center: &[f64], radius: f64, steps: usize| -> (f64, Vec<f64>) {
        let mut best = f64::INFINITY;
        let mut best_split = center.to_vec();
        let mut idx = vec![0usize; m];
        loop {
            let split: Vec<f64> = (0..m)
                .map(|d| {
                    (center[d] - radius + 2.0 * radius * idx[d] as f64 / steps as f64)
                        .clamp(0.0, 1.0)
                })
                .collect();
            let v = eval(&split);
            if v < best {
                best = v;
                best_split = split;
            }
            let mut carry = 0;
            while carry < m {
                idx[carry] += 1;
                if idx[carry] <= steps {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == m {
                break;
            }
        }
        (best, best_split)
    };

    let (mut best, mut center) = scan(&vec![0.5; m], 0.5, 20);
    // Shrink the bracket only when no stencil point improves, so the search
    // can follow a narrow valley as far as it goes at each scale.
    let mut radius = 0.1_f64;
    let mut rounds = 0;
    while radius > 1e-8 && rounds < 2000 {
        rounds += 1;
        let (v, s) = scan(&center, radius, 10);
        if v < best {
            best = v;
            center = s;
        } else {
            radius /= 2.0;
        }
    }
    best
}

/// 7: the splitting solver agrees with an independent grid search at
/// 1e-5 absolute-plus-relative, and with the l1 closed form at 1e-9.
#[test]
fn accept_07_k_solver_matches_grid_search() {
    let qs = [1.0, 1.5, 2.0, f64::INFINITY];
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst: f64 = 0.0;
    let mut infeasible = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=3);
        let q0 = qs[rng.gen_range(0..4)];
        let q1 = qs[rng.gen_range(0..4)];
        let w0: Vec<f64> = (0..m).map(|_| rng.gen_range(0.25..4.0)).collect();
        let w1: Vec<f64> = (0..m).map(|_| rng.gen_range(0.25..4.0)).collect();
        let omega: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let t = 2f64.powf(rng.gen_range(-5.0..5.0));
        let couple = WeightedCouple::new(w0.clone(), w1.clone(), q0, q1).unwrap();
        let k = k_functional(&couple, &omega, t).unwrap();
        let oracle = grid_search_k(&w0, &w1, q0, q1, &omega, t);
        worst = worst.max((k - oracle).abs() / (1.0 + oracle));
        if k > oracle + 1e-9 {
            infeasible += 1;
        }
    }

    let mut l1_worst: f64 = 0.0;
    for _ in 0..20 {
        let m = rng.gen_range(1..=3);
        let w0: Vec<f64> = (0..m).map(|_| rng.gen_range(0.25..4.0)).collect();
        let w1: Vec<f64> = (0..m).map(|_| rng.gen_range(0.25..4.0)).collect();
        let omega: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let t = 2f64.powf(rng.gen_range(-5.0..5.0));
        let couple = WeightedCouple::new(w0.clone(), w1.clone(), 1.0, 1.0).unwrap();
        let k = k_functional(&couple, &omega, t).unwrap();
        let closed: f64 = w0
            .iter()
            .zip(&w1)
            .zip(&omega)
            .map(|((&a, &b), &x)| a.min(t * b) * x.abs())
            .sum();
        l1_worst = l1_worst.max((k - closed).abs() / (1.0 + closed));
    }

    gate(
        7,
        "k-solver-matches-grid-search",
        worst <= 1e-5 && infeasible == 0 && l1_worst <= 1e-9,
        format!(
            "max solver/grid gap {worst:.2e}, l1 closed-form gap {l1_worst:.2e}, \
             {infeasible} infeasible values"
        ),
    );
}

/// 8: the sequence-level interpolation identity has stable constants: the
/// observed c_max/c_min moves by less than 25% from m=16 to m=64.
#[test]
fn accept_08_interp_identity_ratio_stability() {
    let alpha0 = RoFunction::power(0.0);
    let alpha1 = RoFunction::power(1.0);
    let gamma = BFunction::power(0.5);
    let ratio_at = |m: usize| {
        let report = verify_interp_identity(&alpha0, &alpha1, &gamma, 1.0, m, 12, 808).unwrap();
        report.c_max / report.c_min
    };
    let r16 = ratio_at(16);
    let r64 = ratio_at(64);
    let drift = (r64 - r16).abs() / r16;
    gate(
        8,
        "interp-identity-ratio-stability",
        drift < 0.25,
        format!("c_max/c_min = {r16:.4} at m=16, {r64:.4} at m=64, drift {:.2}%", 100.0 * drift),
    );
}

/// 9: every random diagonal-operator trial satisfies the interpolation
/// operator bounds, for both the power-weight and the general-parameter
/// forms.
#[test]
fn accept_09_operator_bounds_hold() {
    let qs = [1.0, 1.5, 2.0, f64::INFINITY];
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut violations = 0;
    let mut worst_gamma_constant: f64 = 0.0;
    for trial in 0..100u64 {
        let m = rng.gen_range(2..=6);
        let draw_weights = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..m).map(|_| 2f64.powf(rng.gen_range(-4.0..4.0))).collect()
        };
        let q0 = qs[rng.gen_range(0..4)];
        let q1 = qs[rng.gen_range(0..4)];
        let src = WeightedCouple::new(draw_weights(&mut rng), draw_weights(&mut rng), q0, q1)
            .unwrap();
        let dst = WeightedCouple::new(draw_weights(&mut rng), draw_weights(&mut rng), q0, q1)
            .unwrap();
        let multipliers: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if trial % 2 == 0 {
            let theta = rng.gen_range(0.05..0.95);
            let check = verify_theta_operator_bound(&multipliers, &src, &dst, theta).unwrap();
            if !check.pass {
                violations += 1;
            }
        } else {
            let theta = rng.gen_range(0.2..0.8);
            let gamma = if trial % 4 == 1 {
                BFunction::power(theta)
            } else {
                BFunction::star(&log_power(theta, 0.3))
            };
            let check =
                verify_gamma_operator_bound(&multipliers, &src, &dst, &gamma, 2.0, 4, trial)
                    .unwrap();
            worst_gamma_constant = worst_gamma_constant.max(check.required_constant);
            if !check.pass {
                violations += 1;
            }
        }
    }
    gate(
        9,
        "operator-bounds-hold",
        violations == 0,
        format!("0 of 100 trials violated; largest general-parameter constant {worst_gamma_constant:.3}"),
    );
}

/// 10: the Laplacian's kernel data, the solvability test with its exact
/// residual scale, and the stability of the a-priori ratio under grid
/// doubling.
#[test]
fn accept_10_laplacian_fredholm_data() {
    let mut pass = true;
    let mut notes = Vec::new();

    for (dim, m) in [(1usize, 128usize), (2, 16)] {
        let grid = TorusGrid::new(dim, m).unwrap();
        let lap = MultiplierSymbol::laplacian(grid);
        let data = lap.fredholm();
        let adj_data = lap.adjoint().fredholm();
        pass &= data.kernel_dim == 1 && adj_data.kernel_dim == 1 && data.index == 0;

        // Nonzero-mean data must be rejected, with the residual equal to
        // |mean| times the torus measure.
        let mut f = GridFunction::randn(grid, 1000 + dim as u64);
        let shift = Complex64::new(0.7, -0.3);
        for v in f.samples_mut() {
            *v += shift;
        }
        let mean = f.samples().iter().sum::<Complex64>() / f.samples().len() as f64;
        let measure = (2.0 * std::f64::consts::PI).powi(dim as i32);
        let expected = mean.norm() * measure;
        match lap.solve(&f) {
            Err(Error::Unsolvable { residual, .. }) => {
                let rel = (residual - expected).abs() / expected;
                pass &= rel <= 1e-12;
                notes.push(format!("dim {dim} residual error {rel:.2e}"));
            }
            other => {
                pass = false;
                notes.push(format!("dim {dim} unexpectedly returned {other:?}"));
            }
        }

        // Mean-zero data solves to machine precision.
        let f0 = f
            .apply_symbol(|k| {
                if k == [0, 0] {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .unwrap();
        let scale = 1.0 / l2_size(&f0);
        let f0 = GridFunction::from_samples(
            grid,
            f0.samples().iter().map(|v| v * scale).collect(),
        )
        .unwrap();
        let u = lap.solve(&f0).unwrap();
        let err = l2_distance(&lap.apply(&u).unwrap(), &f0);
        pass &= err < 1e-12;
        notes.push(format!("dim {dim} solve residual {err:.2e}"));
    }

    // Shifted symbol: the a-priori ratio endpoints are stable under grid
    // doubling. The symbol equals the order function evaluated at the
    // weight, so the lifted spectrum of u reproduces the graded spectrum of
    // f and every trial sits at the ellipticity bound exactly; stability
    // here guards the norm plumbing, not a statistical spread.
    let alpha = RoFunction::parse("t^0.5*log(t)").unwrap();
    let order = RoFunction::power(2.0);
    let mut endpoints = Vec::new();
    for m in [128usize, 256] {
        let grid = TorusGrid::new(1, m).unwrap();
        let sym = MultiplierSymbol::one_minus_laplacian(grid);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for trial in 0..20u64 {
            let f = GridFunction::randn(grid, 2000 + trial);
            let r = sym.a_priori_ratio(&order, &alpha, 2.0, &f).unwrap();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        endpoints.push((lo, hi));
    }
    let (lo0, hi0) = endpoints[0];
    let (lo1, hi1) = endpoints[1];
    let drift = ((lo1 - lo0).abs() / lo0).max((hi1 - hi0).abs() / hi0);
    pass &= drift < 0.20;
    notes.push(format!("a-priori endpoint drift {:.2}%", 100.0 * drift));

    gate(10, "laplacian-fredholm-data", pass, notes.join(", "));
}

/// 11: parametrix remainder symbols vanish outside the cutoff exactly, with
/// zero tolerance, on 10 random elliptic symbols. The operator is diagonal,
/// so the left and right remainders share one symbol.
#[test]
fn accept_11_parametrix_vanishes_off_cutoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut checked = 0usize;
    let mut pass = true;
    for (dim, m, count) in [(1usize, 128usize, 5usize), (2, 16, 5)] {
        let grid = TorusGrid::new(dim, m).unwrap();
        for _ in 0..count {
            let values: Vec<Complex64> = (0..grid.len())
                .map(|_| {
                    Complex64::from_polar(
                        rng.gen_range(0.5..3.0),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            let sym = MultiplierSymbol::from_values(grid, values, "random").unwrap();
            let radius = rng.gen_range(1.0..m as f64 / 4.0);
            let par = sym.parametrix(radius).unwrap();
            for flat in 0..grid.len() {
                let v = par.remainder.values()[flat];
                if grid.freq_norm(flat) > radius {
                    pass &= v.re == 0.0 && v.im == 0.0;
                } else {
                    pass &= v.re == -1.0 && v.im == 0.0;
                }
            }
            checked += 1;
        }
    }
    gate(
        11,
        "parametrix-vanishes-off-cutoff",
        pass && checked == 10,
        format!("{checked} random symbols, remainder exactly 0 outside / -1 inside the cutoff"),
    );
}

/// 12: in the quasi-norm regime p = q = 1/2 the powered triangle inequality
/// holds on 100 random pairs.
#[test]
fn accept_12_quasi_triangle_inequality() {
    let grid = TorusGrid::new(1, 128).unwrap();
    let seq = SpecialSequence::new(grid, 1).unwrap();
    let alpha = RoFunction::power(0.7);
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    for trial in 0..100u64 {
        let f = GridFunction::randn(grid, 4000 + 2 * trial);
        let g = GridFunction::randn(grid, 4001 + 2 * trial);
        let sum = GridFunction::from_samples(
            grid,
            f.samples()
                .iter()
                .zip(g.samples())
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        let nf = summed_norm(&seq, &alpha, 0.5, 0.5, &f).unwrap();
        let ng = summed_norm(&seq, &alpha, 0.5, 0.5, &g).unwrap();
        let nfg = summed_norm(&seq, &alpha, 0.5, 0.5, &sum).unwrap();
        worst_excess = worst_excess.max(nfg.sqrt() - nf.sqrt() - ng.sqrt());
    }
    gate(
        12,
        "quasi-triangle-inequality",
        worst_excess <= 1e-9,
        format!("max powered excess {worst_excess:.2e} over 100 pairs"),
    );
}
