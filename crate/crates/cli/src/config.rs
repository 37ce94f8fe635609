//! `key = value` job files. Keys are the long flag names (`max-digits` or
//! `max_digits`); `command` names the subcommand. Flags given on the
//! command line win over the file.

use std::path::Path;

use anyhow::{bail, Context, Result};

pub const SUBCOMMANDS: &[&str] = &[
    "expand",
    "normalize",
    "universalize",
    "equiv-class",
    "tree",
    "unique",
    "gamma",
    "kl-constant",
    "tm-word",
    "dim-estimate",
    "stats",
    "sample",
];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=').or_else(|| line.split_once(':')) else {
            bail!("config line {}: expected key = value", no + 1);
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() {
            bail!("config line {}: empty key", no + 1);
        }
        out.push((key, value));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| *a == long || a.starts_with(&with_eq))
}

/// Splices the entries of the `--config` file, if any, into `args`.
pub fn merge_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .with_context(|| format!("reading config {path}"))?;
    let entries = parse_config(&text)?;
    let has_command = args.iter().skip(1).any(|a| SUBCOMMANDS.contains(&a.as_str()));
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "command" {
            if !has_command {
                args.push(value);
            }
            continue;
        }
        if has_flag(&args, &key) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => {
                extra.push(format!("--{key}"));
                extra.push(value);
            }
        }
    }
    args.extend(extra);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let e = parse_config("# job\nbeta = 1.9\nmax_digits: 200 # budget\n\n").unwrap();
        assert_eq!(
            e,
            vec![("beta".into(), "1.9".into()), ("max-digits".into(), "200".into())]
        );
        assert!(parse_config("nonsense").is_err());
    }
}
