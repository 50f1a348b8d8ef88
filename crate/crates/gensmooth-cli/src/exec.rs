//! Subcommand executors. Every command produces a JSON report and an
//! overall verification verdict; SVG and CSV side artifacts are written
//! eagerly and listed in the report.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use gensmooth::interp::{
    k_profile, verify_gamma_operator_bound, verify_interp_identity, verify_theta_operator_bound,
};
use gensmooth::norms::{lp_norm, multiplier_norm, NormFamily, SpaceSpec};
use gensmooth::ro::{
    boyd_indices, check_ro_membership, decompose_against_l2, decompose_along_q, gamma_from_alpha,
    interp_alpha, lambda_pn, sampled_matuszewska_indices, CompanionExponent, IndexGridConfig,
};
use gensmooth::window::verify_special_sequence;
use gensmooth::{
    BFunction, Error, RoFunction, SpecialSequence, TorusGrid, WeightedCouple,
};

use crate::args::*;
use crate::{config, plot, sources};

pub enum Failure {
    /// Malformed invocation or config; exits 2 with a plain message.
    Usage(String),
    /// An operation rejected its inputs or could not finish; exits 3 with a
    /// JSON error envelope carrying a machine-readable code.
    Module {
        code: &'static str,
        message: String,
        output: Option<PathBuf>,
    },
}

pub struct Outcome {
    pub json: Value,
    /// False when a verification-style command found a failing property;
    /// the process then exits 1.
    pub verified: bool,
    pub output: Option<PathBuf>,
}

pub fn error_code(err: &Error) -> &'static str {
    match err {
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::Infeasible(_) => "infeasible",
        Error::GridMismatch(_) => "grid-mismatch",
        Error::BandIndex { .. } => "band-index",
        Error::DegenerateNorm(_) => "degenerate-norm",
        Error::Estimation(_) => "estimation",
        Error::Inadmissible(_) => "inadmissible",
        Error::Unsolvable { .. } => "unsolvable",
    }
}

fn lib<T>(result: gensmooth::Result<T>, output: &Option<PathBuf>) -> Result<T, Failure> {
    result.map_err(|e| Failure::Module {
        code: error_code(&e),
        message: e.to_string(),
        output: output.clone(),
    })
}

fn write_artifact(path: &Path, text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Module {
        code: "io",
        message: format!("cannot write `{}`: {e}", path.display()),
        output: output.clone(),
    })
}

pub fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Ro(RoCommand::Indices(a)) => ro_indices(a),
        Command::Ro(RoCommand::Check(a)) => ro_check(a),
        Command::Ro(RoCommand::Eval(a)) => ro_eval(a),
        Command::Ro(RoCommand::Combine(a)) => ro_combine(a),
        Command::Ro(RoCommand::SplitAnchored(a)) => ro_split_anchored(a),
        Command::Ro(RoCommand::SplitDiagonal(a)) => ro_split_diagonal(a),
        Command::Ro(RoCommand::Gamma(a)) => ro_gamma(a),
        Command::Ro(RoCommand::Lambda(a)) => ro_lambda(a),
        Command::Lp(LpCommand::Verify(a)) => lp_verify(a),
        Command::Norm(a) => norm(a),
        Command::Interp(InterpCommand::Verify(a)) => interp_verify(a),
        Command::Interp(InterpCommand::Kprofile(a)) => interp_kprofile(a),
        Command::Interp(InterpCommand::Opnorm(a)) => interp_opnorm(a),
        Command::Elliptic(a) => elliptic(a),
        Command::Run(a) => run_config(a),
        Command::Report(a) => report(a),
    }
}

/// Log-spaced samples of a regularity function, with its estimated indices.
fn alpha_summary(alpha: &RoFunction, output: &Option<PathBuf>) -> Result<Value, Failure> {
    let mut samples = Vec::new();
    for k in 0..=40 {
        let t = 2f64.powf(k as f64 * 0.5);
        samples.push(json!([t, lib(alpha.eval(t), output)?]));
    }
    let idx = lib(
        sampled_matuszewska_indices(alpha, &IndexGridConfig::default()),
        output,
    )?;
    Ok(json!({
        "exact_power": alpha.exact_power_index(),
        "sigma0": idx.lower,
        "sigma1": idx.upper,
        "samples": samples,
    }))
}

fn ro_indices(a: RoIndicesArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let cfg = IndexGridConfig {
        log2_t_max: a.log2_t_max,
        points_per_decade: a.points_per_decade,
        max_log2_lambda: a.max_log2_lambda,
    };
    let idx = lib(sampled_matuszewska_indices(&alpha, &cfg), &a.output)?;
    let mut json = json!({
        "alpha": a.alpha,
        "sigma0": idx.lower,
        "sigma1": idx.upper,
        "grid": {
            "log2_t_max": a.log2_t_max,
            "points_per_decade": a.points_per_decade,
            "max_log2_lambda": a.max_log2_lambda,
        },
    });
    if a.boyd {
        let nu = lib(boyd_indices(&BFunction::star(&alpha)), &a.output)?;
        json["boyd"] = json!({ "nu0": nu.lower, "nu1": nu.upper });
    }
    Ok(Outcome {
        json,
        verified: true,
        output: a.output,
    })
}

fn ro_check(a: RoCheckArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let check = lib(
        check_ro_membership(&alpha, a.t_max, a.lambda_max),
        &a.output,
    )?;
    let holds = check.holds;
    Ok(Outcome {
        json: json!({
            "alpha": a.alpha,
            "t_max": a.t_max,
            "lambda_max": a.lambda_max,
            "check": check,
        }),
        verified: holds,
        output: a.output,
    })
}

fn ro_eval(a: RoEvalArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    if a.count < 2 || !(a.from >= 1.0) || !(a.to > a.from) {
        return Err(Failure::Usage(format!(
            "need --from >= 1, --to > --from, --count >= 2; got {} {} {}",
            a.from, a.to, a.count
        )));
    }
    let step = (a.to / a.from).ln() / (a.count - 1) as f64;
    let mut points = Vec::with_capacity(a.count);
    for i in 0..a.count {
        let t = a.from * (step * i as f64).exp();
        points.push((t, lib(alpha.eval(t), &a.output)?));
    }
    if let Some(path) = &a.csv {
        let mut table = String::from("t,value\n");
        for &(t, v) in &points {
            table.push_str(&format!("{t},{v}\n"));
        }
        write_artifact(path, &table, &a.output)?;
    }
    Ok(Outcome {
        json: json!({
            "alpha": a.alpha,
            "points": points.iter().map(|&(t, v)| json!([t, v])).collect::<Vec<_>>(),
            "csv": a.csv,
        }),
        verified: true,
        output: a.output,
    })
}

fn ro_combine(a: RoCombineArgs) -> Result<Outcome, Failure> {
    let alpha0 = lib(sources::parse_alpha(&a.alpha0), &a.output)?;
    let alpha1 = lib(sources::parse_alpha(&a.alpha1), &a.output)?;
    let combined = lib(interp_alpha(&alpha0, &alpha1, a.theta), &a.output)?;
    let summary = alpha_summary(&combined, &a.output)?;
    Ok(Outcome {
        json: json!({
            "alpha0": a.alpha0,
            "alpha1": a.alpha1,
            "theta": a.theta,
            "combined": summary,
        }),
        verified: true,
        output: a.output,
    })
}

/// Largest relative gap between the recombined endpoints and the original
/// function over a log grid; the split is only trustworthy when this is at
/// rounding level.
fn reconstruction_error(
    alpha: &RoFunction,
    alpha0: &RoFunction,
    s1: f64,
    theta: f64,
    output: &Option<PathBuf>,
) -> Result<f64, Failure> {
    let combined = lib(
        interp_alpha(alpha0, &RoFunction::power(s1), theta),
        output,
    )?;
    let mut worst = 0.0_f64;
    for k in 0..=100 {
        let t = 2f64.powf(k as f64 * 0.2);
        let want = lib(alpha.eval(t), output)?;
        let got = lib(combined.eval(t), output)?;
        worst = worst.max((got - want).abs() / want.abs());
    }
    Ok(worst)
}

fn ro_split_anchored(a: SplitAnchoredArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let choice = match (a.p1, a.q1) {
        (Some(p1), None) => CompanionExponent::P1(p1),
        (None, Some(q1)) => CompanionExponent::Q1(q1),
        _ => unreachable!("clap enforces exactly one of --p1/--q1"),
    };
    let d = lib(
        decompose_against_l2(&alpha, a.p, a.q, choice, a.s1),
        &a.output,
    )?;
    let error = reconstruction_error(&alpha, &d.alpha0, d.s1, d.theta, &a.output)?;
    let summary = alpha_summary(&d.alpha0, &a.output)?;
    Ok(Outcome {
        json: json!({
            "alpha": a.alpha,
            "p": a.p,
            "q": a.q,
            "theta": d.theta,
            "p1": d.p1,
            "q1": d.q1,
            "s1": d.s1,
            "alpha0": summary,
            "reconstruction_error": error,
        }),
        verified: error <= 1e-9,
        output: a.output,
    })
}

fn ro_split_diagonal(a: SplitDiagonalArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let d = lib(
        decompose_along_q(&alpha, a.p, a.q, a.r, a.s1),
        &a.output,
    )?;
    let error = reconstruction_error(&alpha, &d.alpha0, a.s1, d.theta, &a.output)?;
    let summary = alpha_summary(&d.alpha0, &a.output)?;
    Ok(Outcome {
        json: json!({
            "alpha": a.alpha,
            "p": a.p,
            "q": a.q,
            "r": a.r,
            "s1": a.s1,
            "theta": d.theta,
            "alpha0": summary,
            "reconstruction_error": error,
        }),
        verified: error <= 1e-9,
        output: a.output,
    })
}

fn ro_gamma(a: RoGammaArgs) -> Result<Outcome, Failure> {
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let gamma = lib(gamma_from_alpha(&alpha, a.s0, a.s1), &a.output)?;
    let nu = lib(boyd_indices(&gamma), &a.output)?;
    let mut samples = Vec::new();
    for k in -20..=20 {
        let t = 2f64.powi(k);
        samples.push(json!([t, lib(gamma.eval(t), &a.output)?]));
    }
    Ok(Outcome {
        json: json!({
            "alpha": a.alpha,
            "s0": a.s0,
            "s1": a.s1,
            "exact_power": gamma.exact_power(),
            "nu0": nu.lower,
            "nu1": nu.upper,
            "samples": samples,
        }),
        verified: true,
        output: a.output,
    })
}

fn ro_lambda(a: RoLambdaArgs) -> Result<Outcome, Failure> {
    let lambda = lib(lambda_pn(a.p, a.n), &a.output)?;
    Ok(Outcome {
        json: json!({ "p": a.p, "n": a.n, "lambda": lambda }),
        verified: true,
        output: a.output,
    })
}

fn finite_or_tag(value: f64) -> Value {
    if value.is_finite() {
        json!(value)
    } else {
        json!("unbounded")
    }
}

fn lp_verify(a: LpVerifyArgs) -> Result<Outcome, Failure> {
    let grid = lib(TorusGrid::new(a.dim, a.grid), &a.output)?;
    let seq = lib(SpecialSequence::new(grid, a.seq_n), &a.output)?;
    let report = verify_special_sequence(&seq);
    let mut json = json!({
        "grid": a.grid,
        "dim": a.dim,
        "seq_n": a.seq_n,
        "bands": seq.count(),
        "partition_radius": finite_or_tag(seq.partition_radius()),
        "report": report,
    });
    if let Some(path) = &a.svg {
        let mut series = Vec::new();
        for j in 0..seq.count() {
            let mut points: Vec<(f64, f64)> = (0..grid.len())
                .map(|flat| {
                    let x = if a.dim == 1 {
                        grid.freq_of(flat)[0] as f64
                    } else {
                        grid.freq_norm(flat)
                    };
                    (x, seq.weight(j, flat).expect("band index in range"))
                })
                .collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            series.push(plot::Series {
                label: format!("band {j}"),
                points,
            });
        }
        let svg = plot::line_plot(
            "Window family",
            if a.dim == 1 { "frequency" } else { "|frequency|" },
            "weight",
            &series,
            false,
            false,
        );
        write_artifact(path, &svg, &a.output)?;
        json["svg"] = json!(path);
    }
    let verified = report.all_pass;
    Ok(Outcome {
        json,
        verified,
        output: a.output,
    })
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::B => "B",
        Family::F => "F",
        Family::H => "H",
    }
}

fn family_kind(family: Family) -> NormFamily {
    match family {
        Family::B => NormFamily::Summed,
        Family::F => NormFamily::Pointwise,
        Family::H => NormFamily::Multiplier,
    }
}

/// FNV-1a over the canonical rendering of a window report, so reports can
/// be compared across runs without embedding the whole structure.
fn report_digest(report: &gensmooth::window::WindowReport) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    for check in &report.checks {
        eat(check.name.as_bytes());
        eat(&[check.pass as u8]);
        eat(&check.constant.to_bits().to_le_bytes());
        eat(check.detail.as_bytes());
    }
    format!("{hash:016x}")
}

fn norm(a: NormArgs) -> Result<Outcome, Failure> {
    let grid = lib(TorusGrid::new(a.dim, a.grid), &a.output)?;
    let seq = lib(SpecialSequence::new(grid, a.seq_n), &a.output)?;
    let alpha = lib(sources::parse_alpha(&a.alpha), &a.output)?;
    let f = lib(sources::parse_grid_function(&a.input, grid), &a.output)?;
    let spec = SpaceSpec {
        family: family_kind(a.family),
        alpha: alpha.clone(),
        p: a.p,
        q: a.q,
    };
    let value = lib(spec.norm(&seq, &f), &a.output)?;
    let digest = report_digest(&verify_special_sequence(&seq));
    let mut json = json!({
        "norm": value,
        "grid": { "dim": a.dim, "m": a.grid },
        "spec": {
            "family": family_name(a.family),
            "alpha": a.alpha,
            "p": a.p,
            "q": a.q,
            "seq_n": a.seq_n,
        },
        "input": a.input,
        "seq_report_digest": digest,
    });
    if a.profile {
        let mut bands = Vec::new();
        for j in 0..seq.count() {
            let band = lib(seq.band(&f, j), &a.output)?;
            let weight = lib(alpha.eval(2f64.powi(j as i32)), &a.output)?;
            bands.push(json!({
                "band": j,
                "alpha_weight": weight,
                "band_lp": lib(lp_norm(&band, a.p), &a.output)?,
            }));
        }
        json["bands"] = json!(bands);
    }
    Ok(Outcome {
        json,
        verified: true,
        output: a.output,
    })
}

fn interp_verify(a: InterpVerifyArgs) -> Result<Outcome, Failure> {
    let alpha0 = lib(sources::parse_alpha(&a.alpha0), &a.output)?;
    let alpha1 = lib(sources::parse_alpha(&a.alpha1), &a.output)?;
    let gamma = lib(sources::parse_gamma(&a.gamma), &a.output)?;
    let report = lib(
        verify_interp_identity(&alpha0, &alpha1, &gamma, a.q, a.m, a.trials, a.seed),
        &a.output,
    )?;
    let bounded = report.c_min > 0.0
        && report.c_max.is_finite()
        && report.ratios.iter().all(|r| r.is_finite());
    let mut json = json!({
        "alpha0": a.alpha0,
        "alpha1": a.alpha1,
        "gamma": a.gamma,
        "q": a.q,
        "m": a.m,
        "trials": a.trials,
        "seed": a.seed,
        "report": report,
        "bounded": bounded,
    });
    if let Some(path) = &a.svg {
        let couple = lib(
            WeightedCouple::from_gradings(&alpha0, &alpha1, a.q, a.q, a.m),
            &a.output,
        )?;
        let mut series = Vec::new();
        for draw in 0..3u64 {
            let omega = lib(
                sources::parse_omega(&format!("randn:{}", a.seed.wrapping_add(draw)), a.m),
                &a.output,
            )?;
            let profile = lib(k_profile(&couple, &omega, 8), &a.output)?;
            series.push(plot::Series {
                label: format!("draw {draw}"),
                points: profile.ts.into_iter().zip(profile.values).collect(),
            });
        }
        let svg = plot::line_plot("Splitting functional", "t", "K(t)", &series, true, true);
        write_artifact(path, &svg, &a.output)?;
        json["svg"] = json!(path);
    }
    if let Some(path) = &a.hist {
        let ratios = json["report"]["ratios"]
            .as_array()
            .expect("report carries ratios")
            .iter()
            .filter_map(Value::as_f64)
            .collect::<Vec<_>>();
        let svg = plot::histogram("Norm ratio across trials", "ratio", &ratios, 16);
        write_artifact(path, &svg, &a.output)?;
        json["hist"] = json!(path);
    }
    Ok(Outcome {
        json,
        verified: bounded,
        output: a.output,
    })
}

fn interp_kprofile(a: InterpKprofileArgs) -> Result<Outcome, Failure> {
    let alpha0 = lib(sources::parse_alpha(&a.alpha0), &a.output)?;
    let alpha1 = lib(sources::parse_alpha(&a.alpha1), &a.output)?;
    let couple = lib(
        WeightedCouple::from_gradings(&alpha0, &alpha1, a.q0, a.q1, a.m),
        &a.output,
    )?;
    let omega = lib(sources::parse_omega(&a.omega, a.m), &a.output)?;
    let profile = lib(k_profile(&couple, &omega, a.half_range), &a.output)?;
    let nondecreasing = profile.is_nondecreasing();
    let ratio_nonincreasing = profile.ratio_nonincreasing();
    let concave = profile.is_concave();
    if let Some(path) = &a.svg {
        let series = [plot::Series {
            label: "K(t)".to_owned(),
            points: profile.ts.iter().copied().zip(profile.values.iter().copied()).collect(),
        }];
        let svg = plot::line_plot("Splitting functional", "t", "K(t)", &series, true, true);
        write_artifact(path, &svg, &a.output)?;
    }
    if let Some(path) = &a.csv {
        let mut table = String::from("t,value\n");
        for (t, v) in profile.ts.iter().zip(&profile.values) {
            table.push_str(&format!("{t},{v}\n"));
        }
        write_artifact(path, &table, &a.output)?;
    }
    let verified = nondecreasing && ratio_nonincreasing && concave;
    Ok(Outcome {
        json: json!({
            "alpha0": a.alpha0,
            "alpha1": a.alpha1,
            "q0": a.q0,
            "q1": a.q1,
            "m": a.m,
            "omega": a.omega,
            "ts": profile.ts,
            "values": profile.values,
            "nondecreasing": nondecreasing,
            "ratio_nonincreasing": ratio_nonincreasing,
            "concave": concave,
            "svg": a.svg,
            "csv": a.csv,
        }),
        verified,
        output: a.output,
    })
}

fn interp_opnorm(a: InterpOpnormArgs) -> Result<Outcome, Failure> {
    let multipliers = lib(sources::parse_float_list(&a.multipliers), &a.output)?;
    let m = multipliers.len();
    let alpha0 = lib(sources::parse_alpha(&a.alpha0), &a.output)?;
    let alpha1 = lib(sources::parse_alpha(&a.alpha1), &a.output)?;
    let dst_alpha0 = match &a.dst_alpha0 {
        Some(src) => lib(sources::parse_alpha(src), &a.output)?,
        None => alpha0.clone(),
    };
    let dst_alpha1 = match &a.dst_alpha1 {
        Some(src) => lib(sources::parse_alpha(src), &a.output)?,
        None => alpha1.clone(),
    };
    let src = lib(
        WeightedCouple::from_gradings(&alpha0, &alpha1, a.q0, a.q1, m),
        &a.output,
    )?;
    let dst = lib(
        WeightedCouple::from_gradings(&dst_alpha0, &dst_alpha1, a.q0, a.q1, m),
        &a.output,
    )?;
    let (mode, check_json, pass) = if let Some(theta) = a.theta {
        let check = lib(
            verify_theta_operator_bound(&multipliers, &src, &dst, theta),
            &a.output,
        )?;
        ("theta", json!(check), check.pass)
    } else {
        let gamma_src = a.gamma.as_deref().expect("clap enforces --theta or --gamma");
        let gamma = lib(sources::parse_gamma(gamma_src), &a.output)?;
        let check = lib(
            verify_gamma_operator_bound(&multipliers, &src, &dst, &gamma, a.q, a.trials, a.seed),
            &a.output,
        )?;
        ("gamma", json!(check), check.pass)
    };
    Ok(Outcome {
        json: json!({
            "mode": mode,
            "multipliers": multipliers,
            "alpha0": a.alpha0,
            "alpha1": a.alpha1,
            "q0": a.q0,
            "q1": a.q1,
            "theta": a.theta,
            "gamma": a.gamma,
            "check": check_json,
        }),
        verified: pass,
        output: a.output,
    })
}

fn elliptic(a: EllipticArgs) -> Result<Outcome, Failure> {
    let grid = lib(TorusGrid::new(a.dim, a.grid), &a.output)?;
    let symbol = lib(sources::parse_symbol(&a.symbol, grid), &a.output)?;
    let mut verified = true;
    let mut json = json!({
        "symbol": a.symbol,
        "grid": { "dim": a.dim, "m": a.grid },
        "fredholm": symbol.fredholm(),
    });

    let alpha = match &a.alpha {
        Some(src) => Some(lib(sources::parse_alpha(src), &a.output)?),
        None => None,
    };
    let mut bound = f64::INFINITY;
    if let Some(alpha) = &alpha {
        let bounds = lib(symbol.ellipticity(alpha), &a.output)?;
        if bounds.c_lower > 0.0 {
            bound = 1.0 / bounds.c_lower;
        }
        json["ellipticity"] = json!({
            "c_lower": bounds.c_lower,
            "c_upper": bounds.c_upper,
            "elliptic": bounds.is_elliptic(),
        });
    }

    if a.solve || a.verify_apriori {
        let f = lib(sources::parse_grid_function(&a.rhs, grid), &a.output)?;
        let u = lib(symbol.solve(&f), &a.output)?;
        let back = lib(symbol.apply(&u), &a.output)?;
        let error = back
            .samples()
            .iter()
            .zip(f.samples())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        json["solve"] = json!({
            "rhs": a.rhs,
            "l2_error": error,
            "solution_l2": u.l2_norm(),
        });

        if a.verify_apriori {
            let alpha = alpha.as_ref().expect("clap requires --alpha here");
            let order = lib(RoFunction::parse(&a.order), &a.output)?;
            let lifted = RoFunction::product(alpha, &order);
            let (num, den) = match a.family {
                Family::H => (
                    lib(multiplier_norm(&lifted, a.p, &u), &a.output)?,
                    lib(multiplier_norm(alpha, a.p, &f), &a.output)?,
                ),
                Family::B | Family::F => {
                    let seq = lib(SpecialSequence::new(grid, a.seq_n), &a.output)?;
                    let spec_u = SpaceSpec {
                        family: family_kind(a.family),
                        alpha: lifted,
                        p: a.p,
                        q: a.q,
                    };
                    let spec_f = SpaceSpec {
                        family: family_kind(a.family),
                        alpha: alpha.clone(),
                        p: a.p,
                        q: a.q,
                    };
                    (
                        lib(spec_u.norm(&seq, &u), &a.output)?,
                        lib(spec_f.norm(&seq, &f), &a.output)?,
                    )
                }
            };
            if den == 0.0 {
                return Err(Failure::Module {
                    code: "degenerate-norm",
                    message: "right-hand side has zero norm".into(),
                    output: a.output.clone(),
                });
            }
            let ratio = num / den;
            let pass = ratio <= bound * (1.0 + 1e-9);
            verified &= pass;
            json["apriori"] = json!({
                "family": family_name(a.family),
                "p": a.p,
                "q": a.q,
                "order": a.order,
                "ratio": ratio,
                "bound": finite_or_tag(bound),
                "pass": pass,
            });
        }
    }

    if a.parametrix {
        let cutoff = a.cutoff.expect("clap requires --cutoff here");
        let par = lib(symbol.parametrix(cutoff), &a.output)?;
        let mut inside_ok = true;
        let mut outside_ok = true;
        for flat in 0..grid.len() {
            let v = par.remainder.values()[flat];
            if grid.freq_norm(flat) > cutoff {
                outside_ok &= v.re == 0.0 && v.im == 0.0;
            } else {
                inside_ok &= v.re == -1.0 && v.im == 0.0;
            }
        }
        verified &= inside_ok && outside_ok;
        json["parametrix"] = json!({
            "cutoff": cutoff,
            "cancellation_residual": par.cancellation_residual,
            "remainder_inside_minus_one": inside_ok,
            "remainder_outside_zero": outside_ok,
        });
    }

    Ok(Outcome {
        json,
        verified,
        output: a.output,
    })
}

fn run_config(a: RunArgs) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Failure::Usage(format!("cannot read `{}`: {e}", a.config.display())))?;
    let argv = config::argv_from_config(&text).map_err(Failure::Usage)?;
    let cli = <Cli as clap::Parser>::try_parse_from(&argv)
        .map_err(|e| Failure::Usage(format!("config maps to an invalid invocation: {e}")))?;
    if matches!(cli.command, Command::Run(_)) {
        return Err(Failure::Usage("config files cannot nest `run`".into()));
    }
    dispatch(cli.command)
}

mod harvest;

fn report(a: ReportArgs) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| Failure::Module {
        code: "io",
        message: format!("cannot read `{}`: {e}", a.input.display()),
        output: a.output.clone(),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Module {
        code: "parse",
        message: format!("`{}` is not valid JSON: {e}", a.input.display()),
        output: a.output.clone(),
    })?;
    let stem = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".to_owned());
    let artifacts = harvest::collect(&value);
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Failure::Module {
        code: "io",
        message: format!("cannot create `{}`: {e}", a.out_dir.display()),
        output: a.output.clone(),
    })?;
    let mut written = Vec::new();
    for artifact in &artifacts {
        for (name, text) in artifact.render(&stem) {
            let path = a.out_dir.join(&name);
            write_artifact(&path, &text, &a.output)?;
            written.push(path.display().to_string());
        }
    }
    written.sort();
    Ok(Outcome {
        json: json!({
            "input": a.input.display().to_string(),
            "written": written,
        }),
        verified: true,
        output: a.output,
    })
}
