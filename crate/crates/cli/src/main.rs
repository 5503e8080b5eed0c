//! `mixsub`: command-line front end. Reads JSON from `--input` (or stdin)
//! and writes JSON, SVG or text to `--output` (or stdout). Colors, letters
//! and indices are 1-based. Exit status: 0 success, 1 domain error (a JSON
//! diagnostic on stderr), 2 usage error.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use mixsub::json::{
    subdivision_from_json, subdivision_to_json, system_from_json, system_to_json, tiling_from_json, tiling_to_json,
};
use mixsub::lozenge::{self, LozengeTiling};
use mixsub::verify::{self, ScaleLimits};
use mixsub::{Error, FineMixedSubdivision, SimplexPositionList, SystemOfPermutations};
use serde_json::{json, Value};

use render::{RenderFormat, RenderOptions};

#[derive(Parser, Debug)]
#[command(name = "mixsub", version, about = "Fine mixed subdivisions of dilated simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file (default: stdin).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format: `svg` or `ascii` for render, `tiling` or
    /// `subdivision` for realize2d.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads for enumerate and verify (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Largest number of objects written by enumerate.
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Accept every (n, d) up to these caps, as `N,D`.
    #[arg(long, global = true, value_parser = parse_caps)]
    seed_scale: Option<(usize, usize)>,
    /// Color for delete, letter for contract.
    #[arg(long, global = true)]
    index: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a subdivision is a fine mixed subdivision.
    Validate,
    /// System of permutations of a subdivision.
    Perms,
    /// Check that a system is acyclic; exit 1 with a cycle otherwise.
    Acyclic,
    /// Dual of a system or a subdivision.
    Dual,
    /// Delete color `--index` from a system or subdivision.
    Delete,
    /// Contract letter `--index` of a system or subdivision.
    Contract,
    /// Simplex positions and table of positions of an acyclic system.
    Positions,
    /// Check that simplex positions are spread out.
    Spread,
    /// Realize an acyclic system on nΔ_2 as a lozenge tiling.
    Realize2d,
    /// Realize an acyclic system on 3Δ_{d-1} as a subdivision.
    RealizeN3,
    /// List acyclic systems, subdivisions or tilings.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Kind::Subdivisions)]
        kind: Kind,
    },
    /// Run every exhaustive check for (n, d) and print the report.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Include wall time (the report is then not reproducible).
        #[arg(long)]
        timing: bool,
        /// Also run the spread-out positions search and print its report.
        #[arg(long)]
        weak: bool,
    },
    /// Draw a tiling (or a d = 3 subdivision or system) as SVG or text.
    Render {
        /// Pixels per unit edge.
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        /// Comma-separated fill colors, one per color.
        #[arg(long)]
        palette: Option<String>,
        /// Draw each color's path through the rhombi.
        #[arg(long)]
        show_dual: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Systems,
    Subdivisions,
    Tilings,
}

fn parse_caps(s: &str) -> Result<(usize, usize), String> {
    let (n, d) = s.split_once(',').ok_or("expected N,D")?;
    let n = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    let d = d.trim().parse().map_err(|e| format!("bad D: {e}"))?;
    Ok((n, d))
}

enum Failure {
    Domain(Box<Error>, Option<Value>),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(Box::new(e), None)
    }
}

fn usage(kind: ErrorKind, msg: &str) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn read_input(path: &Option<PathBuf>) -> Result<Value, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()).into())
}

enum Input {
    System(SystemOfPermutations),
    Subdivision(FineMixedSubdivision),
    Tiling(LozengeTiling),
}

fn classify(v: &Value) -> Result<Input, Failure> {
    if v.get("rhombi").is_some() {
        Ok(Input::Tiling(tiling_from_json(v)?))
    } else if v.get("cells").is_some() {
        Ok(Input::Subdivision(subdivision_from_json(v)?))
    } else if v.get("perms").is_some() {
        Ok(Input::System(system_from_json(v)?))
    } else {
        Err(Error::Parse("expected a system (\"perms\"), subdivision (\"cells\") or tiling (\"rhombi\")".into()).into())
    }
}

fn system_input(v: &Value) -> Result<SystemOfPermutations, Failure> {
    match classify(v)? {
        Input::System(s) => Ok(s),
        Input::Subdivision(s) => Ok(s.system_of_permutations()?),
        Input::Tiling(t) => Ok(t.system()?),
    }
}

fn subdivision_input(v: &Value) -> Result<FineMixedSubdivision, Failure> {
    match classify(v)? {
        Input::Subdivision(s) => Ok(s),
        Input::Tiling(t) => Ok(t.to_subdivision()?),
        Input::System(_) => Err(Error::Parse("expected a subdivision, got a system".into()).into()),
    }
}

fn need_index(cli: &Cli) -> usize {
    cli.index
        .unwrap_or_else(|| usage(ErrorKind::MissingRequiredArgument, "this subcommand needs --index <K>"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let limits = match cli.seed_scale {
        Some((n, d)) => ScaleLimits::caps(n, d),
        None => ScaleLimits::default(),
    };
    match &cli.command {
        Command::Validate => {
            let s = subdivision_input(&read_input(&cli.input)?)?;
            s.validate().map_err(|e| {
                let detail = serde_json::to_value(&e).ok();
                Failure::Domain(Box::new(Error::Invalid(e)), detail)
            })?;
            Ok(pretty(&json!({
                "valid": true,
                "n": s.n(),
                "d": s.d(),
                "cells": s.cells().len(),
                "volume": s.total_volume().to_string(),
            })))
        }
        Command::Perms => Ok(pretty(&system_to_json(&system_input(&read_input(&cli.input)?)?))),
        Command::Acyclic => {
            let s = system_input(&read_input(&cli.input)?)?;
            match s.acyclicity_witness() {
                None => Ok(pretty(&json!({"acyclic": true, "n": s.n(), "d": s.d()}))),
                Some(w) => Err(Failure::Domain(
                    Box::new(w.into()),
                    Some(json!({"i": w.i, "j": w.j, "cycle": [w.cycle.0, w.cycle.1, w.cycle.2]})),
                )),
            }
        }
        Command::Dual => match classify(&read_input(&cli.input)?)? {
            Input::System(s) => Ok(pretty(&system_to_json(&s.dual()?))),
            Input::Subdivision(s) => Ok(pretty(&subdivision_to_json(&s.dual()?))),
            Input::Tiling(t) => Ok(pretty(&subdivision_to_json(&t.to_subdivision()?.dual()?))),
        },
        Command::Delete | Command::Contract => {
            let k = need_index(cli);
            let delete = matches!(cli.command, Command::Delete);
            let (mut v, labels) = match classify(&read_input(&cli.input)?)? {
                Input::System(s) => {
                    let m = if delete { s.delete(k)? } else { s.contract(k)? };
                    (system_to_json(&m.inner), m.original_labels)
                }
                Input::Subdivision(s) => {
                    let m = if delete { s.delete(k)? } else { s.contract(k)? };
                    (subdivision_to_json(&m.inner), m.original_labels)
                }
                Input::Tiling(t) => {
                    let s = t.to_subdivision()?;
                    let m = if delete { s.delete(k)? } else { s.contract(k)? };
                    (subdivision_to_json(&m.inner), m.original_labels)
                }
            };
            v["original_labels"] = json!(labels);
            Ok(pretty(&v))
        }
        Command::Positions => {
            let s = system_input(&read_input(&cli.input)?)?;
            let table = s.table_of_positions()?;
            let rows: Vec<Vec<String>> = table
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect();
            let mut v = json!({
                "n": s.n(),
                "d": s.d(),
                "positions": table.positions().positions,
                "table": rows,
            });
            if s.d() == 3 {
                let pos = lozenge::positions_from_system(&s)?;
                let pq: Vec<[usize; 2]> = (1..=s.n())
                    .map(|c| {
                        let (p, q) = pos.pq_of_color(c);
                        [p, q]
                    })
                    .collect();
                v["pq"] = json!(pq);
                v["routing_label"] = json!(pos.routing_label);
            }
            Ok(pretty(&v))
        }
        Command::Spread => {
            let v = read_input(&cli.input)?;
            let list = if let Some(p) = v.get("positions") {
                let positions: Vec<Vec<usize>> =
                    serde_json::from_value(p.clone()).map_err(|e| Error::Parse(format!("positions: {e}")))?;
                let d = v
                    .get("d")
                    .and_then(Value::as_u64)
                    .map(|d| d as usize)
                    .or_else(|| positions.first().map(Vec::len))
                    .unwrap_or(1);
                SimplexPositionList::new(d, positions)?
            } else {
                match classify(&v)? {
                    Input::System(s) => s.simplex_positions()?,
                    Input::Subdivision(s) => s.simplices()?.positions,
                    Input::Tiling(t) => t.to_subdivision()?.simplices()?.positions,
                }
            };
            match list.spread_out_violation() {
                None => Ok(pretty(&json!({"spread_out": true, "positions": list.positions}))),
                Some(w) => Err(Failure::Domain(
                    Box::new(Error::DimensionMismatch(format!(
                        "{} positions lie in a subsimplex of size {} at {:?}",
                        w.count, w.k, w.m
                    ))),
                    Some(json!({"spread_out": false, "k": w.k, "m": w.m, "count": w.count})),
                )),
            }
        }
        Command::Realize2d => {
            let s = system_input(&read_input(&cli.input)?)?;
            let t = lozenge::realize(&s)?;
            match cli.format.as_deref() {
                None | Some("tiling") => Ok(pretty(&tiling_to_json(&t))),
                Some("subdivision") => Ok(pretty(&subdivision_to_json(&t.to_subdivision()?))),
                Some(f) => usage(
                    ErrorKind::InvalidValue,
                    &format!("--format {f} is not accepted by realize2d (tiling, subdivision)"),
                ),
            }
        }
        Command::RealizeN3 => {
            let s = system_input(&read_input(&cli.input)?)?;
            Ok(pretty(&subdivision_to_json(&verify::realize_n3(&s)?)))
        }
        Command::Enumerate { n, d, kind } => {
            let (n, d) = (*n, *d);
            let limit = cli.limit.unwrap_or(usize::MAX);
            let items: Vec<Value> = match kind {
                Kind::Systems => {
                    if !limits.allows(n, d) {
                        return Err(Error::InfeasibleScale { n, d }.into());
                    }
                    verify::enumerate_acyclic_systems(n, d, cli.workers)
                        .iter()
                        .map(system_to_json)
                        .collect()
                }
                Kind::Subdivisions => verify::enumerate_subdivisions(n, d, &limits, cli.workers)?
                    .iter()
                    .map(subdivision_to_json)
                    .collect(),
                Kind::Tilings => {
                    if d != 3 {
                        return Err(Error::UnsupportedDimension(d).into());
                    }
                    if !limits.allows(n, 3) {
                        return Err(Error::InfeasibleScale { n, d }.into());
                    }
                    lozenge::enumerate_tilings(n).iter().map(tiling_to_json).collect()
                }
            };
            let count = items.len();
            let items: Vec<Value> = items.into_iter().take(limit).collect();
            Ok(pretty(&json!({"n": n, "d": d, "count": count, "items": items})))
        }
        Command::Verify { n, d, timing, weak } => {
            let mut report = verify::check_all_theorems(*n, *d, &limits, cli.workers)?;
            if !timing {
                report.elapsed_ms = None;
            }
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if *weak {
                let w = verify::weak_conjecture_search(*n, *d, &limits, cli.workers)?;
                v["weak_conjecture_search"] = serde_json::to_value(&w).expect("report serializes");
            }
            if report.all_passed() {
                Ok(pretty(&v))
            } else {
                let failed: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
                Err(Failure::Domain(
                    Box::new(Error::InternalInvariantViolation(format!(
                        "checks failed: {}",
                        failed.join(", ")
                    ))),
                    Some(v),
                ))
            }
        }
        Command::Render {
            scale,
            palette,
            show_dual,
        } => {
            let format = match cli.format.as_deref() {
                None | Some("svg") => RenderFormat::Svg,
                Some("ascii") => RenderFormat::Ascii,
                Some(f) => usage(
                    ErrorKind::InvalidValue,
                    &format!("--format {f} is not accepted by render (svg, ascii)"),
                ),
            };
            let tiling = match classify(&read_input(&cli.input)?)? {
                Input::Tiling(t) => t,
                Input::Subdivision(s) if s.d() == 3 => LozengeTiling::from_subdivision(&s)?,
                Input::System(s) if s.d() == 3 => lozenge::realize(&s)?,
                Input::Subdivision(s) => return Err(Error::UnsupportedDimension(s.d()).into()),
                Input::System(s) => return Err(Error::UnsupportedDimension(s.d()).into()),
            };
            let palette = palette
                .as_ref()
                .map(|p| p.split(',').map(|c| c.trim().to_string()).collect());
            let opts = RenderOptions::new(format, *scale, palette, *show_dual, tiling.n())?;
            Ok(render::render(&tiling, &opts)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let written = match &cli.output {
                Some(p) => fs::write(p, text.as_bytes()).map_err(|e| format!("{}: {e}", p.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{}", json!({"error": "Io", "message": e}));
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Domain(e, detail)) => {
            let mut v = json!({"error": e.kind(), "message": e.to_string()});
            if let Some(d) = detail {
                v["detail"] = d;
            }
            eprintln!("{}", serde_json::to_string_pretty(&v).expect("JSON values serialize"));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", json!({"error": "Io", "message": msg}));
            ExitCode::from(1)
        }
    }
}
