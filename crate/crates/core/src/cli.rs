//! The `heapkit` command line.
//!
//! Exit codes: 0 on success, 1 on a negative verdict (the witness is part of
//! the printed JSON), 2 on unreadable or invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::{classify, enumerate_heaps, slant_decompose, SlantError};
use crate::io::{self, DocError, HeapPoint, PosetDoc};
use crate::poset::{ColoredPoset, DEFAULT_CAP};
use crate::rep::{carries_upper_minuscule, RepError};
use crate::weyl::{heap_to_words, is_lambda_minuscule, solve_lambda, weyl_length, word_matrix, WeylError};

#[derive(Parser, Debug)]
#[command(name = "heapkit", version, about = "Colored posets, minuscule heaps and their representations")]
struct Cli {
    /// Bound on enumerated splits, linear extensions and heaps.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a poset document.
    Validate { poset: PathBuf },
    /// Print the classification with per-property witnesses.
    Classify { poset: PathBuf },
    /// Connected components and the slant decomposition of each.
    Decompose { poset: PathBuf },
    /// Every dominant minuscule heap over a diagram up to a size.
    Enumerate {
        diagram: PathBuf,
        #[arg(long)]
        max_size: usize,
    },
    #[command(subcommand)]
    Heap(HeapCommand),
    #[command(subcommand)]
    Weyl(WeylCommand),
    #[command(subcommand)]
    Rep(RepCommand),
    /// Write the Hasse diagram as Graphviz DOT.
    Render {
        poset: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// HEAP is a heap document path or `builtin:cycle:N` / `builtin:alternating_a1`.
#[derive(Subcommand, Debug)]
enum HeapCommand {
    /// Finite window on levels LO..=HI.
    Window {
        heap: String,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
    },
    /// Infinite axioms of a filter.
    FilterCheck {
        heap: String,
        #[arg(long)]
        filter: Option<PathBuf>,
    },
    /// Extend a filter downward until it repeats up to a shift.
    Saturate {
        heap: String,
        #[arg(long)]
        filter: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WeylCommand {
    /// Words of all linear extensions, checked against the solved weight.
    Words { poset: PathBuf },
    /// The least dominant weight the heap is minuscule for.
    Lambda { poset: PathBuf },
}

#[derive(Subcommand, Debug)]
enum RepCommand {
    /// Build the split representation and check every relation.
    Verify { poset: PathBuf },
}

enum Outcome {
    Success(Value),
    Negative(Value),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn load_poset(path: &Path) -> Result<ColoredPoset, DocError> {
    let text = io::read_file(path)?;
    io::poset_from_str(&path.display().to_string(), &text)
}

fn input_error(source: impl std::fmt::Display, reason: impl std::fmt::Display) -> DocError {
    DocError {
        source: source.to_string(),
        pointer: String::new(),
        reason: reason.to_string(),
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    match execute(&cli) {
        Ok(Outcome::Success(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            0
        }
        Ok(Outcome::Negative(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            let _ = writeln!(err, "negative verdict; witness printed above");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HEAPKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HEAPKIT_THREADS must be a positive integer, got {v:?}"))?;
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn verdict(ok: bool, v: Value) -> Outcome {
    if ok {
        Outcome::Success(v)
    } else {
        Outcome::Negative(v)
    }
}

fn execute(cli: &Cli) -> Result<Outcome, DocError> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { poset } => {
            let p = load_poset(poset)?;
            Ok(Outcome::Success(json!({
                "valid": true,
                "elements": p.len(),
                "covers": p.covers().len(),
                "colors": p.diagram().len(),
                "symmetrizable": p.diagram().is_symmetrizable(),
                "canonical_key": p.canonical_key_hex(),
            })))
        }
        Command::Classify { poset } => {
            let c = classify(&load_poset(poset)?);
            Ok(verdict(c.is_d_complete, to_value(&c)))
        }
        Command::Decompose { poset } => decompose(&load_poset(poset)?),
        Command::Enumerate { diagram, max_size } => {
            let source = diagram.display().to_string();
            let d = io::diagram_from_str(&source, &io::read_file(diagram)?)?;
            let heaps = enumerate_heaps(&d, *max_size, cap).map_err(|e| input_error(&source, e))?;
            let listed: Vec<Value> = heaps
                .iter()
                .map(|h| json!({"canonical_key": h.canonical_key_hex(), "poset": PosetDoc::of(h)}))
                .collect();
            Ok(Outcome::Success(json!({"count": heaps.len(), "heaps": listed})))
        }
        Command::Heap(h) => heap_command(h),
        Command::Weyl(WeylCommand::Words { poset }) => weyl_words(&load_poset(poset)?, cap),
        Command::Weyl(WeylCommand::Lambda { poset }) => {
            let p = load_poset(poset)?;
            match solve_lambda(&p) {
                Ok(l) => Ok(Outcome::Success(json!({
                    "lambda": io::labelled(p.diagram(), &l.coords),
                    "coords": l.coords,
                }))),
                Err(e) => Ok(Outcome::Negative(json!({"error": e.to_string()}))),
            }
        }
        Command::Rep(RepCommand::Verify { poset }) => {
            let p = load_poset(poset)?;
            match carries_upper_minuscule(&p, cap) {
                Ok(cert) => Ok(verdict(cert.carries, to_value(&cert))),
                Err(e @ RepError::CapExceeded(_)) => Err(input_error(poset.display(), e)),
                Err(e) => Ok(Outcome::Negative(json!({"error": e.to_string()}))),
            }
        }
        Command::Render { poset, output } => {
            let p = load_poset(poset)?;
            let dot = io::to_dot(&p);
            std::fs::write(output, dot).map_err(|e| input_error(output.display(), e))?;
            Ok(Outcome::Success(json!({"written": output.display().to_string()})))
        }
    }
}

fn decompose(p: &ColoredPoset) -> Result<Outcome, DocError> {
    let mut all_heaps = true;
    let mut components = Vec::new();
    for comp in p.components() {
        let slant = match slant_decompose(&comp.poset) {
            Ok(dec) => json!({
                "parts": dec.parts.iter().map(|part| json!({
                    "elements": part.elements,
                    "poset": PosetDoc::of(&part.poset),
                })).collect::<Vec<_>>(),
                "joins": dec.joins,
                "irreducible": dec.irreducible,
            }),
            Err(e @ SlantError::NotAHeap(_)) => {
                all_heaps = false;
                let c = classify(&comp.poset);
                let failed: Vec<_> = c.reports.iter().filter(|r| !r.holds).collect();
                json!({"error": e.to_string(), "failed": to_value(&failed)})
            }
            Err(e) => {
                all_heaps = false;
                json!({"error": e.to_string()})
            }
        };
        components.push(json!({
            "elements": comp.elements,
            "poset": PosetDoc::of(&comp.poset),
            "slant": slant,
        }));
    }
    Ok(verdict(
        all_heaps,
        json!({"component_count": components.len(), "components": components}),
    ))
}

fn weyl_words(p: &ColoredPoset, cap: usize) -> Result<Outcome, DocError> {
    let d = p.diagram();
    let words = match heap_to_words(p, cap) {
        Ok(w) => w,
        Err(WeylError::NotAHeap) => {
            let c = classify(p);
            let failed: Vec<_> = c.reports.iter().filter(|r| !r.holds).collect();
            return Ok(Outcome::Negative(json!({"error": "not a dominant minuscule heap", "failed": to_value(&failed)})));
        }
        Err(e) => return Err(input_error("poset", e)),
    };
    let lambda = match solve_lambda(p) {
        Ok(l) => l,
        Err(e) => return Ok(Outcome::Negative(json!({"error": e.to_string()}))),
    };
    let first = word_matrix(d, &words[0]);
    let checks: Vec<Value> = words
        .iter()
        .map(|w| {
            let m = is_lambda_minuscule(d, w, &lambda);
            json!({
                "word": w.labels(d),
                "lambda_minuscule": m.holds,
                "failing_step": m.failing_step,
                "same_element": word_matrix(d, w) == first,
                "length": weyl_length(d, w),
            })
        })
        .collect();
    let ok = checks.iter().all(|c| {
        c["lambda_minuscule"] == true && c["same_element"] == true && c["length"] == json!(p.len())
    });
    Ok(verdict(
        ok,
        json!({
            "lambda": io::labelled(d, &lambda.coords),
            "element": first.rows(),
            "words": checks,
        }),
    ))
}

fn load_filter(
    source: &str,
    path: &Option<PathBuf>,
) -> Result<(Arc<crate::heap_periodic::PeriodicHeap>, crate::heap_periodic::SemiInfiniteFilter), DocError> {
    let (heap, embedded) = io::heap_from_source(source)?;
    let heap = Arc::new(heap);
    let (doc, from) = match path {
        Some(p) => {
            let s = p.display().to_string();
            (io::parse::<io::FilterDoc>(&s, &io::read_file(p)?)?, s)
        }
        None => (
            embedded.ok_or_else(|| input_error(source, "no filter: pass --filter or add generators to the heap document"))?,
            source.to_string(),
        ),
    };
    let f = doc.build(&from, heap.clone())?;
    Ok((heap, f))
}

fn heap_command(cmd: &HeapCommand) -> Result<Outcome, DocError> {
    match cmd {
        HeapCommand::Window { heap, lo, hi } => {
            let (h, _) = io::heap_from_source(heap)?;
            let w = h.window(*lo, *hi).map_err(|e| input_error(heap, e))?;
            let points: Vec<HeapPoint> = w.elements.iter().map(|&e| HeapPoint::of(&h, e)).collect();
            Ok(Outcome::Success(json!({
                "levels": [lo, hi],
                "validation": h.validation(),
                "elements": points,
                "poset": PosetDoc::of(&w.poset),
            })))
        }
        HeapCommand::FilterCheck { heap, filter } => {
            let (_, f) = load_filter(heap, filter)?;
            let report = f.check_infinite_axioms();
            Ok(verdict(report.d_complete, to_value(&report)))
        }
        HeapCommand::Saturate { heap, filter, max_steps } => {
            let (h, f) = load_filter(heap, filter)?;
            match f.saturate(*max_steps) {
                Ok(s) => {
                    let ok = s.steps.iter().all(|st| st.matches_ambient && st.d_complete);
                    let added: Vec<HeapPoint> = s.steps.iter().map(|st| HeapPoint::of(&h, st.extension.added)).collect();
                    Ok(verdict(ok, json!({"saturation": s, "added": added})))
                }
                Err(e) => Ok(Outcome::Negative(json!({"error": e.to_string()}))),
            }
        }
    }
}
