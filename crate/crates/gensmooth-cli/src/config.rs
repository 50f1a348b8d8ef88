//! Config-file execution: a TOML document names a subcommand and carries a
//! section of key-value parameters mirroring that subcommand's flags.
//!
//! ```toml
//! command = "norm"
//! seed = 7              # optional, forwarded where the command takes --seed
//! output = "report.json" # optional, forwarded as --output
//!
//! [norm]
//! family = "B"
//! alpha = "t^1"
//! p = 2.0
//! input = "mode(3)"
//! ```
//!
//! Subcommands with actions name them in the section:
//! `[interp] action = "verify"`.

use toml::Value;

const COMMANDS: [&str; 6] = ["ro", "lp", "norm", "interp", "elliptic", "report"];

/// Commands that accept a --seed flag, as (command, action) pairs.
const SEEDED: [(&str, &str); 2] = [("interp", "verify"), ("interp", "opnorm")];

/// Translates the config text into an argument vector for the regular
/// parser, so config runs and flag runs go down the same path.
pub fn argv_from_config(text: &str) -> Result<Vec<String>, String> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| format!("config is not valid TOML: {e}"))?;
    let command = table
        .get("command")
        .and_then(Value::as_str)
        .ok_or("config needs a top-level string `command`")?;
    if !COMMANDS.contains(&command) {
        return Err(format!(
            "unknown command `{command}`; expected one of {}",
            COMMANDS.join(", ")
        ));
    }

    let mut argv = vec!["gensmooth".to_owned(), command.to_owned()];
    let mut action = String::new();
    let mut has_seed_key = false;
    let mut has_output_key = false;

    if let Some(section) = table.get(command) {
        let section = section
            .as_table()
            .ok_or_else(|| format!("`[{command}]` must be a table"))?;
        if let Some(value) = section.get("action") {
            action = value
                .as_str()
                .ok_or_else(|| format!("`{command}.action` must be a string"))?
                .to_owned();
            argv.push(action.clone());
        }
        for (key, value) in section {
            if key == "action" {
                continue;
            }
            has_seed_key |= key == "seed";
            has_output_key |= key == "output";
            let flag = format!("--{}", key.replace('_', "-"));
            match value {
                Value::String(s) => {
                    argv.push(flag);
                    argv.push(s.clone());
                }
                Value::Integer(i) => {
                    argv.push(flag);
                    argv.push(i.to_string());
                }
                Value::Float(f) => {
                    argv.push(flag);
                    argv.push(f.to_string());
                }
                Value::Boolean(true) => argv.push(flag),
                Value::Boolean(false) => {}
                other => {
                    return Err(format!(
                        "`{command}.{key}` has unsupported type {}",
                        other.type_str()
                    ))
                }
            }
        }
    }

    if let Some(seed) = table.get("seed") {
        let seed = seed
            .as_integer()
            .ok_or("top-level `seed` must be an integer")?;
        if !has_seed_key && SEEDED.contains(&(command, action.as_str())) {
            argv.push("--seed".to_owned());
            argv.push(seed.to_string());
        }
    }
    if let Some(output) = table.get("output") {
        let output = output
            .as_str()
            .ok_or("top-level `output` must be a string")?;
        if !has_output_key {
            argv.push("--output".to_owned());
            argv.push(output.to_owned());
        }
    }
    Ok(argv)
}
