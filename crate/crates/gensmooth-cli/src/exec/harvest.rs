//! Recognizes plottable shapes inside a report JSON tree. Reports are
//! nested objects, so each artifact is named by the key path that led to it.

use serde_json::{Map, Value};

use crate::plot;

pub enum Artifact {
    /// Parallel `ts`/`values` arrays: a sampled curve.
    Curve { name: String, ts: Vec<f64>, values: Vec<f64> },
    /// A bag of scalar ratios worth a histogram.
    Ratios { name: String, values: Vec<f64> },
    /// An array of `[x, y]` pairs.
    Points { name: String, pairs: Vec<(f64, f64)> },
    /// Named pass/fail rows with a constant each.
    Checks { name: String, rows: Vec<(String, bool, f64, String)> },
    /// Per-band norm contributions.
    Bands { name: String, rows: Vec<(u64, f64, f64)> },
}

pub fn collect(value: &Value) -> Vec<Artifact> {
    let mut path = Vec::new();
    let mut out = Vec::new();
    walk(value, &mut path, &mut out);
    out
}

fn name_of(path: &[String]) -> String {
    let raw = if path.is_empty() {
        "root".to_owned()
    } else {
        path.join("-")
    };
    let mut name = String::new();
    for c in raw.chars() {
        if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
            name.push(c.to_ascii_lowercase());
        } else if !name.ends_with('-') {
            name.push('-');
        }
    }
    name.trim_matches('-').to_owned()
}

fn num_array(value: Option<&Value>) -> Option<Vec<f64>> {
    let arr = value?.as_array()?;
    let nums: Vec<f64> = arr.iter().filter_map(Value::as_f64).collect();
    (nums.len() == arr.len() && !arr.is_empty()).then_some(nums)
}

fn pair_array(value: &Value) -> Option<Vec<(f64, f64)>> {
    let arr = value.as_array()?;
    let pairs: Vec<(f64, f64)> = arr
        .iter()
        .filter_map(|row| {
            let row = row.as_array()?;
            if row.len() == 2 {
                Some((row[0].as_f64()?, row[1].as_f64()?))
            } else {
                None
            }
        })
        .collect();
    (pairs.len() == arr.len() && pairs.len() >= 2).then_some(pairs)
}

fn check_rows(value: &Value) -> Option<Vec<(String, bool, f64, String)>> {
    let arr = value.as_array()?;
    let rows: Vec<_> = arr
        .iter()
        .filter_map(|row| {
            let row = row.as_object()?;
            Some((
                row.get("name")?.as_str()?.to_owned(),
                row.get("pass")?.as_bool()?,
                row.get("constant").and_then(Value::as_f64).unwrap_or(f64::NAN),
                row.get("detail").and_then(Value::as_str).unwrap_or("").to_owned(),
            ))
        })
        .collect();
    (rows.len() == arr.len() && !rows.is_empty()).then_some(rows)
}

fn band_rows(value: &Value) -> Option<Vec<(u64, f64, f64)>> {
    let arr = value.as_array()?;
    let rows: Vec<_> = arr
        .iter()
        .filter_map(|row| {
            let row = row.as_object()?;
            Some((
                row.get("band")?.as_u64()?,
                row.get("alpha_weight")?.as_f64()?,
                row.get("band_lp")?.as_f64()?,
            ))
        })
        .collect();
    (rows.len() == arr.len() && !rows.is_empty()).then_some(rows)
}

fn walk(value: &Value, path: &mut Vec<String>, out: &mut Vec<Artifact>) {
    match value {
        Value::Object(map) => {
            harvest_object(map, path, out);
            for (key, child) in map {
                path.push(key.clone());
                walk(child, path, out);
                path.pop();
            }
        }
        Value::Array(arr) => {
            for (i, child) in arr.iter().enumerate() {
                path.push(i.to_string());
                walk(child, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

fn harvest_object(map: &Map<String, Value>, path: &mut Vec<String>, out: &mut Vec<Artifact>) {
    if let (Some(ts), Some(values)) = (num_array(map.get("ts")), num_array(map.get("values"))) {
        if ts.len() == values.len() && ts.len() >= 2 {
            out.push(Artifact::Curve {
                name: name_of(path),
                ts,
                values,
            });
        }
    }
    for (key, child) in map {
        path.push(key.clone());
        let name = name_of(path);
        match key.as_str() {
            "ratios" => {
                if let Some(values) = num_array(Some(child)) {
                    if values.len() >= 2 {
                        out.push(Artifact::Ratios { name, values });
                    }
                }
            }
            "points" | "samples" => {
                if let Some(pairs) = pair_array(child) {
                    out.push(Artifact::Points { name, pairs });
                }
            }
            "checks" => {
                if let Some(rows) = check_rows(child) {
                    out.push(Artifact::Checks { name, rows });
                }
            }
            "bands" => {
                if let Some(rows) = band_rows(child) {
                    out.push(Artifact::Bands { name, rows });
                }
            }
            _ => {}
        }
        path.pop();
    }
}

fn log_worthy(values: &[f64]) -> bool {
    if values.iter().any(|&v| v <= 0.0) {
        return false;
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    hi / lo >= 64.0
}

fn csv_of<R>(header: &str, rows: &[R], line: impl Fn(&R) -> String) -> String {
    let mut table = String::from(header);
    table.push('\n');
    for row in rows {
        table.push_str(&line(row));
        table.push('\n');
    }
    table
}

impl Artifact {
    /// Files to write for this artifact: `(file name, contents)` pairs.
    pub fn render(&self, stem: &str) -> Vec<(String, String)> {
        match self {
            Artifact::Curve { name, ts, values } => {
                let pairs: Vec<(f64, f64)> =
                    ts.iter().copied().zip(values.iter().copied()).collect();
                let series = [plot::Series {
                    label: name.clone(),
                    points: pairs.clone(),
                }];
                let svg = plot::line_plot(
                    name,
                    "t",
                    "value",
                    &series,
                    log_worthy(ts),
                    log_worthy(values),
                );
                vec![
                    (
                        format!("{stem}-{name}.csv"),
                        csv_of("t,value", &pairs, |&(t, v)| format!("{t},{v}")),
                    ),
                    (format!("{stem}-{name}.svg"), svg),
                ]
            }
            Artifact::Ratios { name, values } => vec![
                (
                    format!("{stem}-{name}.csv"),
                    csv_of("ratio", values, |v| format!("{v}")),
                ),
                (
                    format!("{stem}-{name}.svg"),
                    plot::histogram(name, "ratio", values, 16),
                ),
            ],
            Artifact::Points { name, pairs } => {
                let series = [plot::Series {
                    label: name.clone(),
                    points: pairs.clone(),
                }];
                let xs: Vec<f64> = pairs.iter().map(|&(x, _)| x).collect();
                let ys: Vec<f64> = pairs.iter().map(|&(_, y)| y).collect();
                let svg = plot::line_plot(
                    name,
                    "x",
                    "y",
                    &series,
                    log_worthy(&xs),
                    log_worthy(&ys),
                );
                vec![
                    (
                        format!("{stem}-{name}.csv"),
                        csv_of("x,y", pairs, |&(x, y)| format!("{x},{y}")),
                    ),
                    (format!("{stem}-{name}.svg"), svg),
                ]
            }
            Artifact::Checks { name, rows } => vec![(
                format!("{stem}-{name}.csv"),
                csv_of("name,pass,constant,detail", rows, |(n, p, c, d)| {
                    format!("{n},{p},{c},{}", d.replace(',', ";"))
                }),
            )],
            Artifact::Bands { name, rows } => vec![(
                format!("{stem}-{name}.csv"),
                csv_of("band,alpha_weight,band_lp", rows, |&(b, w, n)| {
                    format!("{b},{w},{n}")
                }),
            )],
        }
    }
}
