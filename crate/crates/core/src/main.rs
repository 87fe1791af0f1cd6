use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use laxgray::dac::{interval, lambda, tensor, DAComplex};
use laxgray::gray::{
    gray_cylinder, hyperface_cylinder, lax_shuffle_diagram, verify_globular_preservation,
    verify_gluing,
};
use laxgray::nu::{emit_dot, enumerate_cells, NuCells, DEFAULT_CEILING};
use laxgray::pr::pr_counts;
use laxgray::span::verify_span;
use laxgray::theta::{globular_sum, hyperfaces, parse_cell, ThetaCell};
use laxgray::Error;

#[derive(Parser)]
#[command(name = "laxgray", version, about = "Lax Gray cylinders over Θ-cells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Highest dimension to enumerate; defaults to dim T + 1.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Stop enumerating past this many cells.
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Gluing,
    Globular,
    Hyperface,
    Span,
    /// Gluing, globular and hyperface together.
    Gray,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// `λ[1]⊗λT`.
    Cylinder,
    /// `λT`.
    Lambda,
    /// The lax shuffle diagram.
    Shuffle,
    /// The span squares.
    Span,
}

#[derive(Subcommand)]
enum Command {
    /// Print the globular sum decomposition.
    Decompose { cell: String },
    /// Dump the Steiner complex λT.
    Lambda { cell: String },
    /// Dump λ[1]⊗λT.
    Tensor { cell: String },
    /// Enumerate the cells of ν(λT).
    Nu { cell: String },
    /// Enumerate the cells of the Gray cylinder [1]⊗T.
    Gray { cell: String },
    /// Compare cell counts of the cylinder with the product rule.
    Counts { cell: String },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        cell: String,
    },
    /// Check the span through the cartesian cylinder and the suspension.
    Span { cell: String },
    /// Write a DOT graph.
    Emit {
        cell: String,
        #[arg(long, value_enum, default_value_t = Emit::Cylinder)]
        what: Emit,
    },
}

enum Failure {
    Parse(Error),
    Other(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Other(e)
    }
}

struct Run {
    max_dim: Option<usize>,
    ceiling: usize,
    format: Option<Format>,
    output: String,
    failed: Vec<String>,
}

fn cell(s: &str) -> Result<ThetaCell, Failure> {
    parse_cell(s).map_err(Failure::Parse)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn cells_json(cells: &NuCells) -> Value {
    let k = cells.complex();
    json!({
        "counts": cells.counts(),
        "nondegenerate": cells.nondegenerate_counts(),
        "cells": (0..=cells.max_dim())
            .map(|d| cells.cells(d).iter().map(|c| c.to_json(k)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn cells_text(title: &str, cells: &NuCells) -> String {
    let k = cells.complex();
    let mut s = format!("{title}\n");
    for (d, nd) in cells.nondegenerate_counts().into_iter().enumerate() {
        s += &format!("dim {d}: {} cells, {nd} nondegenerate\n", cells.count(d));
        for (i, c) in cells.cells(d).iter().enumerate() {
            s += &format!("  {i}: {}\n", c.display(k));
        }
    }
    s
}

fn complex_text(k: &DAComplex) -> String {
    let mut s = String::new();
    for deg in 0..=k.top_degree() {
        s += &format!("degree {deg}: {}\n", k.basis(deg).join(" "));
        if deg > 0 {
            for g in 0..k.rank(deg) as u32 {
                s += &format!(
                    "  d {} = {}\n",
                    k.name(deg, g),
                    k.display(deg - 1, k.d(deg, g))
                );
            }
        }
    }
    s
}

impl Run {
    fn dims(&self, t: &ThetaCell) -> usize {
        self.max_dim.unwrap_or(t.dimension() + 1)
    }

    fn emit(
        &mut self,
        default: Format,
        json: impl FnOnce() -> Value,
        text: impl FnOnce() -> String,
    ) {
        match self.format.unwrap_or(default) {
            Format::Json => self.output += &pretty(&json()),
            _ => self.output += &text(),
        }
    }

    fn check(&mut self, what: &str, pass: bool) -> bool {
        if !pass {
            self.failed.push(what.to_string());
        }
        pass
    }

    fn gluing(&mut self, t: &ThetaCell) -> Result<(Value, String), Failure> {
        let r = verify_gluing(t)?;
        self.check("gluing", r.pass());
        let text = format!(
            "gluing {t}: {}\n  pieces {}\n",
            verdict(r.pass()),
            r.pieces.join(", ")
        );
        Ok((r.to_json(), text))
    }

    fn globular(&mut self, t: &ThetaCell) -> Result<(Value, String), Failure> {
        let r = verify_globular_preservation(t)?;
        self.check("globular", r.pass());
        let v = json!({
            "covers": r.covers,
            "consecutive": r.consecutive,
            "separated": r.separated,
            "amalgam": r.amalgam,
            "pass": r.pass(),
        });
        Ok((v, format!("globular {t}: {}\n", verdict(r.pass()))))
    }

    fn hyperface(&mut self, t: &ThetaCell) -> Result<(Value, String), Failure> {
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut all = true;
        for face in hyperfaces(t) {
            let h = hyperface_cylinder(&face)?;
            all &= h.agree;
            text += &format!(
                "  {} {}: {}\n",
                face.morphism().source(),
                h.label,
                verdict(h.agree)
            );
            rows.push(json!({
                "face": h.label,
                "source": face.morphism().source().to_string(),
                "consistent": h.consistent,
                "covered": h.covered,
                "agree": h.agree,
            }));
        }
        self.check("hyperface", all);
        Ok((
            json!({ "faces": rows, "pass": all }),
            format!("hyperface {t}: {}\n{text}", verdict(all)),
        ))
    }

    fn span(&mut self, t: &ThetaCell) -> Result<(Value, String), Failure> {
        let r = verify_span(t, self.ceiling)?;
        self.check("span", r.pass());
        let mut text = format!("span {t}: {}\n", verdict(r.pass()));
        for s in &r.squares {
            text += &format!("  ({}) k={}: {}\n", s.sort.numeral(), s.k, verdict(s.pass));
        }
        for (p, ok) in &r.columns {
            text += &format!("  column {p}: {}\n", verdict(*ok));
        }
        text += &format!(
            "  diamonds {} {}, functors κ {} σ {}, objects {}\n",
            verdict(r.diamonds[0]),
            verdict(r.diamonds[1]),
            verdict(r.kappa_functor),
            verdict(r.sigma_functor),
            verdict(r.kappa_objects)
        );
        Ok((r.to_json(), text))
    }

    fn run(&mut self, command: Command) -> Result<(), Failure> {
        match command {
            Command::Decompose { cell: s } => {
                let t = cell(&s)?;
                let g = globular_sum(&t);
                self.emit(
                    Format::Text,
                    || json!({ "cell": t.to_string(), "leaves": g.leaf_dims, "meets": g.meet_dims, "sum": g.to_string() }),
                    || format!("{g}\n"),
                );
            }
            Command::Lambda { cell: s } => {
                let k = lambda(&cell(&s)?);
                self.emit(Format::Json, || k.to_json(), || complex_text(&k));
            }
            Command::Tensor { cell: s } => {
                let k = tensor(&interval(), &lambda(&cell(&s)?));
                self.emit(Format::Json, || k.to_json(), || complex_text(&k));
            }
            Command::Nu { cell: s } => {
                let t = cell(&s)?;
                let cells = enumerate_cells(&Arc::new(lambda(&t)), self.dims(&t), self.ceiling)?;
                self.emit(
                    Format::Json,
                    || cells_json(&cells),
                    || cells_text(&format!("ν(λ{t})"), &cells),
                );
            }
            Command::Gray { cell: s } => {
                let t = cell(&s)?;
                let diagram = lax_shuffle_diagram(&t)?;
                if self.format == Some(Format::Dot) {
                    self.output += &diagram.to_dot();
                    return Ok(());
                }
                let k = Arc::new(tensor(&interval(), &lambda(&t)));
                let cells = enumerate_cells(&k, self.dims(&t), self.ceiling)?;
                let labels = diagram.labels();
                self.emit(
                    Format::Json,
                    || {
                        let mut v = cells_json(&cells);
                        v["cell"] = json!(t.to_string());
                        v["pieces"] = json!(labels);
                        v
                    },
                    || {
                        format!("pieces: {}\n", diagram.labels().join(", "))
                            + &cells_text(&format!("[1]⊗{t}"), &cells)
                    },
                );
            }
            Command::Counts { cell: s } => {
                let t = cell(&s)?;
                let dims = self.dims(&t);
                let nu = gray_cylinder(&t, dims, self.ceiling)?.counts();
                let pr = pr_counts(std::slice::from_ref(&t), dims)?;
                let agree = nu.iter().zip(&pr).all(|(&a, &b)| a as u64 == b);
                self.check("counts", agree);
                self.emit(
                    Format::Text,
                    || {
                        json!({
                            "cell": t.to_string(),
                            "rows": (0..=dims).map(|d| json!({ "dim": d, "nu": nu[d], "pr": pr[d] })).collect::<Vec<_>>(),
                            "agree": agree,
                        })
                    },
                    || {
                        (0..=dims)
                            .map(|d| format!("dim {d}: ν={}, PR={}\n", nu[d], pr[d]))
                            .collect()
                    },
                );
            }
            Command::Verify { suite, cell: s } => {
                let t = cell(&s)?;
                let mut parts: Vec<(&str, (Value, String))> = Vec::new();
                let wants = |x: Suite| {
                    suite == x || suite == Suite::All || (suite == Suite::Gray && x != Suite::Span)
                };
                if wants(Suite::Gluing) {
                    parts.push(("gluing", self.gluing(&t)?));
                }
                if wants(Suite::Globular) {
                    parts.push(("globular", self.globular(&t)?));
                }
                if wants(Suite::Hyperface) {
                    parts.push(("hyperface", self.hyperface(&t)?));
                }
                if wants(Suite::Span) {
                    parts.push(("span", self.span(&t)?));
                }
                let pass = self.failed.is_empty();
                self.emit(
                    Format::Text,
                    || {
                        let mut m = serde_json::Map::new();
                        for (name, (v, _)) in &parts {
                            m.insert(name.to_string(), v.clone());
                        }
                        m.insert("cell".into(), json!(t.to_string()));
                        m.insert("pass".into(), json!(pass));
                        Value::Object(m)
                    },
                    || parts.iter().map(|(_, (_, s))| s.as_str()).collect(),
                );
            }
            Command::Span { cell: s } => {
                let t = cell(&s)?;
                if self.format == Some(Format::Dot) {
                    let r = verify_span(&t, self.ceiling)?;
                    self.check("span", r.pass());
                    self.output += &r.to_dot();
                    return Ok(());
                }
                let (v, text) = self.span(&t)?;
                self.emit(Format::Text, || v, || text);
            }
            Command::Emit { cell: s, what } => {
                let t = cell(&s)?;
                let dot = match what {
                    Emit::Cylinder => {
                        emit_dot(&tensor(&interval(), &lambda(&t)), &format!("[1]⊗{t}"))
                    }
                    Emit::Lambda => emit_dot(&lambda(&t), &t.to_string()),
                    Emit::Shuffle => lax_shuffle_diagram(&t)?.to_dot(),
                    Emit::Span => {
                        let r = verify_span(&t, self.ceiling)?;
                        self.check("span", r.pass());
                        r.to_dot()
                    }
                };
                self.output += &dot;
            }
        }
        Ok(())
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run {
        max_dim: cli.max_dim,
        ceiling: cli.ceiling,
        format: cli.format,
        output: String::new(),
        failed: Vec::new(),
    };
    let result = run.run(cli.command);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &run.output) {
                eprintln!("laxgray: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", run.output),
    }
    match result {
        Err(Failure::Parse(e)) => {
            eprintln!("laxgray: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("laxgray: {e}");
            ExitCode::from(1)
        }
        Ok(()) if !run.failed.is_empty() => {
            eprintln!("laxgray: failed: {}", run.failed.join(", "));
            ExitCode::from(1)
        }
        Ok(()) => ExitCode::SUCCESS,
    }
}
