//! Parsing of the input sources shared across subcommands: regularity
//! functions, parameter functions, grid functions, multiplier symbols, and
//! plain number lists.

use gensmooth::{
    BFunction, Error, GridFunction, MultiplierSymbol, Result, RoFunction, TorusGrid,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Expression in the mini language, or `csv:<file>` with rows `(t, value)`.
pub fn parse_alpha(src: &str) -> Result<RoFunction> {
    match src.strip_prefix("csv:") {
        Some(path) => {
            let rows = read_numeric_rows(path, 2)?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
            RoFunction::piecewise_from_points(&points)
        }
        None => RoFunction::parse(src),
    }
}

/// Parameter function from an expression. A pure power stays exact; any
/// other expression is normalized at 1 and reflected to cover small
/// arguments.
pub fn parse_gamma(src: &str) -> Result<BFunction> {
    let alpha = RoFunction::parse(src)?;
    Ok(match alpha.exact_power_index() {
        Some(theta) => BFunction::power(theta),
        None => BFunction::star(&alpha),
    })
}

/// Grid function from `csv:<file>` with rows `(ix[, iy], re, im)`, or a
/// generator: `gaussian(center, width)`, `mode(k1[, k2])`, `randn(seed)`.
pub fn parse_grid_function(src: &str, grid: TorusGrid) -> Result<GridFunction> {
    if let Some(path) = src.strip_prefix("csv:") {
        let rows = read_numeric_rows(path, grid.dim() + 2)?;
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.len()];
        for row in &rows {
            let ix = index_in_range(row[0], grid.m(), path)?;
            let (flat, re, im) = if grid.dim() == 1 {
                (ix, row[1], row[2])
            } else {
                let iy = index_in_range(row[1], grid.m(), path)?;
                (ix + grid.m() * iy, row[2], row[3])
            };
            samples[flat] = Complex64::new(re, im);
        }
        return GridFunction::from_samples(grid, samples);
    }
    let (name, args) = split_generator(src)?;
    match name {
        "gaussian" => {
            let [center, width] = two_floats(&args, src)?;
            GridFunction::gaussian(grid, center, width)
        }
        "mode" => match args.len() {
            1 => GridFunction::mode(grid, [int_arg(&args[0], src)?, 0]),
            2 => GridFunction::mode(grid, [int_arg(&args[0], src)?, int_arg(&args[1], src)?]),
            n => Err(Error::Parse(format!(
                "mode takes 1 or 2 frequencies, got {n} in `{src}`"
            ))),
        },
        "randn" => {
            let [seed] = one_float(&args, src)?;
            Ok(GridFunction::randn(grid, seed as u64))
        }
        other => Err(Error::Parse(format!(
            "unknown generator `{other}`; expected gaussian, mode, or randn"
        ))),
    }
}

/// Multiplier symbol source: `laplacian`, `one-minus-laplacian`,
/// `jalpha:<expr>` for the graded weight, or `csv:<file>` with rows
/// `(k1[, k2], re, im)` over signed frequencies (absent rows are zero).
pub fn parse_symbol(src: &str, grid: TorusGrid) -> Result<MultiplierSymbol> {
    if let Some(expr) = src.strip_prefix("jalpha:") {
        let alpha = RoFunction::parse(expr)?;
        return Ok(MultiplierSymbol::graded(grid, &alpha));
    }
    if let Some(path) = src.strip_prefix("csv:") {
        let rows = read_numeric_rows(path, grid.dim() + 2)?;
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for row in &rows {
            let (k, re, im) = if grid.dim() == 1 {
                ([signed_int(row[0], path)?, 0], row[1], row[2])
            } else {
                (
                    [signed_int(row[0], path)?, signed_int(row[1], path)?],
                    row[2],
                    row[3],
                )
            };
            values[grid.flat_of(k)?] = Complex64::new(re, im);
        }
        return MultiplierSymbol::from_values(grid, values, src);
    }
    match src {
        "laplacian" => Ok(MultiplierSymbol::laplacian(grid)),
        "one-minus-laplacian" => Ok(MultiplierSymbol::one_minus_laplacian(grid)),
        other => Err(Error::Parse(format!(
            "unknown symbol `{other}`; expected laplacian, one-minus-laplacian, \
             jalpha:<expr>, or csv:<file>"
        ))),
    }
}

/// Comma-separated floats, or `csv:<file>` taking the first column.
pub fn parse_float_list(src: &str) -> Result<Vec<f64>> {
    if let Some(path) = src.strip_prefix("csv:") {
        let rows = read_numeric_rows(path, 1)?;
        return Ok(rows.iter().map(|r| r[0]).collect());
    }
    src.split(',')
        .map(|piece| {
            piece.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!("expected a number, got `{}` in `{src}`", piece.trim()))
            })
        })
        .collect()
}

/// Nonnegative sequence of length `m`: a comma list, `csv:<file>`, or
/// `randn:<seed>` for folded Gaussian draws.
pub fn parse_omega(src: &str, m: usize) -> Result<Vec<f64>> {
    let trimmed = src.trim();
    let seed = trimmed
        .strip_prefix("randn:")
        .map(str::to_owned)
        .or_else(|| {
            split_generator(trimmed)
                .ok()
                .filter(|(name, args)| *name == "randn" && args.len() == 1)
                .map(|(_, args)| args[0].clone())
        });
    if let Some(seed) = seed {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::Parse(format!("bad seed in `{src}`")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..m).map(|_| normal_sample(&mut rng).abs()).collect());
    }
    let values = parse_float_list(trimmed)?;
    if values.len() != m {
        return Err(Error::Parse(format!(
            "sequence has {} entries but the couple has {m} coordinates",
            values.len()
        )));
    }
    Ok(values)
}

fn normal_sample(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Reads a CSV file of numeric rows with exactly `width` fields. A leading
/// row that fails to parse is treated as a header; anything later fails.
fn read_numeric_rows(path: &str, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("`{path}` row {line}: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(row) if row.len() == width => rows.push(row),
            Ok(row) => {
                return Err(Error::Parse(format!(
                    "`{path}` row {line}: expected {width} columns, got {}",
                    row.len()
                )))
            }
            Err(_) if line == 0 => continue,
            Err(e) => {
                return Err(Error::Parse(format!("`{path}` row {line}: {e}")));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("`{path}` has no numeric rows")));
    }
    Ok(rows)
}

fn split_generator(src: &str) -> Result<(&str, Vec<String>)> {
    let open = src
        .find('(')
        .ok_or_else(|| Error::Parse(format!("`{src}` is not a generator call")))?;
    let inner = src[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{src}`")))?;
    let args = inner
        .split(',')
        .map(|a| a.trim().to_owned())
        .filter(|a| !a.is_empty())
        .collect();
    Ok((&src[..open], args))
}

fn one_float(args: &[String], src: &str) -> Result<[f64; 1]> {
    match args {
        [a] => Ok([float_arg(a, src)?]),
        _ => Err(Error::Parse(format!(
            "expected 1 argument, got {} in `{src}`",
            args.len()
        ))),
    }
}

fn two_floats(args: &[String], src: &str) -> Result<[f64; 2]> {
    match args {
        [a, b] => Ok([float_arg(a, src)?, float_arg(b, src)?]),
        _ => Err(Error::Parse(format!(
            "expected 2 arguments, got {} in `{src}`",
            args.len()
        ))),
    }
}

fn float_arg(arg: &str, src: &str) -> Result<f64> {
    arg.parse()
        .map_err(|_| Error::Parse(format!("bad number `{arg}` in `{src}`")))
}

fn int_arg(arg: &str, src: &str) -> Result<i64> {
    arg.parse()
        .map_err(|_| Error::Parse(format!("bad frequency `{arg}` in `{src}`")))
}

fn index_in_range(value: f64, m: usize, path: &str) -> Result<usize> {
    let idx = value as i64;
    if value.fract() != 0.0 || idx < 0 || idx >= m as i64 {
        return Err(Error::Parse(format!(
            "`{path}`: sample index {value} outside 0..{m}"
        )));
    }
    Ok(idx as usize)
}

fn signed_int(value: f64, path: &str) -> Result<i64> {
    if value.fract() != 0.0 {
        return Err(Error::Parse(format!(
            "`{path}`: frequency {value} is not an integer"
        )));
    }
    Ok(value as i64)
}
