//! Command-line front end. Every report is JSON with `"schemaVersion": 1`; the
//! table format is rendered from that JSON.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::barlab::dga::BasedDGA;
use crate::barlab::group::FGAbGroup;
use crate::barlab::oracle::oracle_report;
use crate::error::{Error, Result};
use crate::exactring::CoefficientRing;
use crate::formality::zigzag::formality_zigzag;
use crate::functorext::homology::budget;
use crate::functorext::obstruction::{obstruction_report, ObstructionParams};
use crate::hocolim::eml::DiagramSpec;
use crate::hocolim::srep::hocolim_ss;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "emlkit", version, about = "Exact bar constructions, formality zig-zags, homotopy colimits and functor Ext")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the iterated bar construction of a group algebra.
    Homology {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long, default_value_t = 1)]
        height: usize,
        #[arg(long = "N", default_value_t = 8)]
        n_top: usize,
    },
    /// Build and verify the formality zig-zag.
    Formality {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long = "N", default_value_t = 8)]
        n_top: usize,
    },
    /// Spectral sequence of the homotopy colimit of a diagram file.
    Hocolim {
        file: PathBuf,
        #[arg(long = "pmax")]
        p_max: Option<usize>,
    },
    /// Functor-category obstruction to formality.
    Obstruction {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        height: usize,
        #[arg(long = "N", default_value_t = 8)]
        n_top: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long = "tmax", default_value_t = 0)]
        t_max: usize,
    },
    /// Homology of a cyclic group from its periodic resolution.
    Oracle {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long = "N", default_value_t = 8)]
        n_top: usize,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HomologyReport {
    group: String,
    ring: String,
    height: usize,
    #[serde(rename = "N")]
    n_top: usize,
    reliable: usize,
    chain_dims: Vec<usize>,
    /// `H_i` as free rank and torsion, `i ≤ reliable`.
    homology: Vec<Value>,
}

fn check_n(n_top: usize) -> Result<()> {
    if n_top == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    Ok(())
}

fn homology(group: &str, ring: &str, height: usize, n_top: usize) -> Result<Value> {
    check_n(n_top)?;
    let g: FGAbGroup = group.parse()?;
    let k: CoefficientRing = ring.parse()?;
    let bar = BasedDGA::iterated_bar(&g, &k, height, n_top)?;
    let limit = budget();
    if let Some(d) = bar.dims().iter().position(|d| *d > limit) {
        return Err(Error::Budget(format!("degree {d} has dimension {}, over the budget {limit}", bar.dim(d))));
    }
    let c = bar.to_complex();
    let homology = (0..=c.reliable())
        .map(|i| {
            let mut h = c.homology(i)?;
            h.witnesses = None;
            Ok(serde_json::to_value(h)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = HomologyReport { group: g.to_string(), ring: k.to_string(), height, n_top, reliable: c.reliable(), chain_dims: c.dims(), homology };
    Ok(serde_json::to_value(rep)?)
}

/// Runs one command and returns the JSON report.
pub fn report(command: &Command) -> Result<Value> {
    let (name, body) = match command {
        Command::Homology { group, ring, height, n_top } => ("homology", homology(group, ring, *height, *n_top)?),
        Command::Formality { group, ring, height, n_top } => {
            check_n(*n_top)?;
            let z = formality_zigzag(&group.parse()?, &ring.parse()?, *height, *n_top)?;
            ("formality", serde_json::to_value(z.report(*n_top)?)?)
        }
        Command::Hocolim { file, p_max } => {
            let spec = DiagramSpec::parse(&std::fs::read_to_string(file)?)?;
            let d = spec.build()?;
            ("hocolim", serde_json::to_value(hocolim_ss(&d, p_max.or(spec.p_max))?)?)
        }
        Command::Obstruction { q, p, height, n_top, r, t_max } => {
            check_n(*n_top)?;
            let params = ObstructionParams { n: *height, q: *q, p: *p, n_top: *n_top, r: *r, t_max: *t_max };
            ("obstruction", serde_json::to_value(obstruction_report(&params)?)?)
        }
        Command::Oracle { q, ring, n_top } => {
            check_n(*n_top)?;
            ("oracle", serde_json::to_value(oracle_report(*q, &ring.parse()?, *n_top)?)?)
        }
    };
    let mut out = json!({ "schemaVersion": SCHEMA_VERSION, "command": name });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    Ok(out)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(",")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two-column `key  value` table of the report's leaves.
pub fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:width$}  {x}\n")).collect()
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")),
        Format::Table => render_table(v),
    }
}

/// Parses `args`, runs, and returns the exit code with the text for stdout or stderr.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    match report(&cli.command) {
        Ok(v) => (0, render(&v, cli.format)),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, Value) {
        let mut all = vec!["emlkit"];
        all.extend_from_slice(args);
        let (code, out) = run(all);
        (code, serde_json::from_str(&out).unwrap_or(Value::Null))
    }

    #[test]
    fn homology_of_z2() {
        let (code, v) = go(&["homology", "--group", "Z/2", "--ring", "F2", "--height", "2", "--N", "6"]);
        assert_eq!(code, 0);
        assert_eq!(v["schemaVersion"], 1);
        let ranks: Vec<u64> = v["homology"].as_array().unwrap().iter().map(|h| h["freeRank"].as_u64().unwrap()).collect();
        // H_*(K(Z/2,2); F_2) has Poincaré series (1 + t^2 + t^3 + t^4 + 2t^5 + ...)
        assert_eq!(ranks, vec![1, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["emlkit", "homology", "--group", "Z/x"]).0, 1);
        assert_eq!(run(["emlkit", "homology", "--group", "Z/2", "--ring", "nope"]).0, 1);
        assert_eq!(run(["emlkit", "formality", "--group", "Z/2", "--ring", "F2", "--N", "4"]).0, 2);
        assert_eq!(run(["emlkit", "obstruction", "--p", "3"]).0, 2);
        assert_eq!(run(["emlkit", "hocolim", "/nonexistent.json"]).0, 1);
        assert_eq!(run(["emlkit", "bogus"]).0, 1);
    }

    #[test]
    fn table_is_rendered_from_json() {
        let (code, out) = run(["emlkit", "--format", "table", "oracle", "--q", "2", "--N", "3"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("schemaVersion") && l.ends_with(" 1")));
        assert!(out.contains("homology[1].torsion"));
    }
}
