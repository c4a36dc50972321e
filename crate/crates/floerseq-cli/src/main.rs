//! Command-line front end: validate specs, print E1-pages and filtration
//! chains, run the equivariant layer, and batch-verify the corpus.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use floerseq::equivariant;
use floerseq::index;
use floerseq::model::{self, Severity};
use floerseq::page;
use floerseq::presets;
use floerseq::render::{self, Format};
use floerseq::solver;
use floerseq::{ManifoldSpec, Period};

#[derive(Parser)]
#[command(name = "floerseq", version, about = "E1-pages and φ-filtrations of Morse–Bott–Floer spectral sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec document against every structural invariant.
    Validate { spec: PathBuf },
    /// Assemble and print the E1-page over (0, window].
    E1 {
        spec: PathBuf,
        /// Window λ_max as `N` or `k/m`.
        #[arg(long, default_value = "2")]
        window: String,
        #[arg(long, default_value = "ascii")]
        format: String,
    },
    /// Solve the filtration bookkeeping and print the ideal chain.
    Filtration {
        spec: PathBuf,
        /// Window as `N`, `k/m`, or `auto` (the required window).
        #[arg(long, default_value = "auto")]
        window: String,
        #[arg(long, default_value = "ascii")]
        format: String,
    },
    /// Assemble and print the S¹-equivariant page.
    Equivariant {
        spec: PathBuf,
        #[arg(long, default_value = "2")]
        window: String,
        /// Lowest total degree tracked in the EH*(Σ) solve.
        #[arg(long, default_value_t = -20)]
        cutoff: i64,
        #[arg(long, default_value = "ascii")]
        format: String,
    },
    /// Run every module's invariants on one spec, or on the whole corpus.
    Verify {
        spec: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
    },
    /// List the preset corpus, or write it out as JSON documents.
    Presets {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

// Exit codes: 0 ok, 1 diagnostics, 2 parse error, 3 internal cross-check
// failure.
fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_spec(path: &Path) -> Result<ManifoldSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    render::parse_spec(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_window(s: &str, spec: &ManifoldSpec) -> Result<Period> {
    if s == "auto" {
        return page::required_window(spec).map_err(|e| anyhow!(e.to_string()));
    }
    s.parse::<Period>().map_err(|e| anyhow!(e.to_string()))
}

fn validate_gate(spec: &ManifoldSpec) -> Result<(), ExitCode> {
    let diags = model::validate_spec(spec);
    let mut failed = false;
    for d in &diags {
        eprintln!("{d}");
        failed |= d.severity == Severity::Error;
    }
    if failed {
        Err(ExitCode::from(1))
    } else {
        Ok(())
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Validate { spec } => {
            let spec = load_spec(&spec)?;
            let diags = model::validate_spec(&spec);
            for d in &diags {
                println!("{d}");
            }
            if diags.iter().any(|d| d.severity == Severity::Error) {
                Ok(ExitCode::from(1))
            } else {
                println!("ok: {}", spec.name);
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::E1 {
            spec,
            window,
            format,
        } => {
            let spec = load_spec(&spec)?;
            if let Err(code) = validate_gate(&spec) {
                return Ok(code);
            }
            let window = parse_window(&window, &spec)?;
            let format: Format = format.parse().map_err(|e: String| anyhow!(e))?;
            let page = page::assemble_e1(&spec, window, true).map_err(|e| anyhow!(e.to_string()))?;
            print!("{}", render::render_page(&spec, &page, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Filtration {
            spec,
            window,
            format,
        } => {
            let spec = load_spec(&spec)?;
            if let Err(code) = validate_gate(&spec) {
                return Ok(code);
            }
            let window = parse_window(&window, &spec)?;
            let format: Format = format.parse().map_err(|e: String| anyhow!(e))?;
            let page = page::assemble_e1(&spec, window, true).map_err(|e| anyhow!(e.to_string()))?;
            let report = solver::solve_filtration(&spec, &page, &spec.constraints)
                .map_err(|e| anyhow!(e.to_string()))?;
            print!("{}", render::render_report(&report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Equivariant {
            spec,
            window,
            cutoff,
            format,
        } => {
            let spec = load_spec(&spec)?;
            if let Err(code) = validate_gate(&spec) {
                return Ok(code);
            }
            let window = parse_window(&window, &spec)?;
            let format: Format = format.parse().map_err(|e: String| anyhow!(e))?;
            let page = equivariant::assemble_equivariant(&spec, window, cutoff)
                .map_err(|e| anyhow!(e.to_string()))?;
            print!("{}", render::render_page(&spec, &page, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { spec, corpus } => {
            let specs: Vec<ManifoldSpec> = if corpus {
                presets::all_presets()
            } else {
                let path = spec.ok_or_else(|| anyhow!("verify needs a spec path or --corpus"))?;
                vec![load_spec(&path)?]
            };
            let mut failures = 0usize;
            for s in &specs {
                match verify_one(s) {
                    Ok(()) => println!("ok: {}", s.name),
                    Err(msgs) => {
                        failures += 1;
                        for m in msgs {
                            println!("FAIL [{}]: {m}", s.name);
                        }
                    }
                }
            }
            if failures > 0 {
                eprintln!("{failures} of {} specs failed verification", specs.len());
                Ok(ExitCode::from(3))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Presets { emit } => {
            let specs = presets::all_presets();
            match emit {
                None => {
                    for s in &specs {
                        println!("{}", s.name);
                    }
                }
                Some(dir) => {
                    std::fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                    for s in &specs {
                        let path = dir.join(format!("{}.json", s.name));
                        std::fs::write(&path, render::spec_to_json(s))
                            .with_context(|| format!("writing {}", path.display()))?;
                        println!("wrote {}", path.display());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// All invariants of all modules for one spec; collects human-readable
/// failure messages rather than stopping at the first.
fn verify_one(spec: &ManifoldSpec) -> Result<(), Vec<String>> {
    let mut msgs = Vec::new();
    let diags = model::validate_spec(spec);
    for d in &diags {
        if d.severity == Severity::Error {
            msgs.push(d.to_string());
        }
    }
    if !msgs.is_empty() {
        return Err(msgs);
    }

    let window = match page::required_window(spec) {
        Ok(w) => w,
        Err(e) => return Err(vec![e.to_string()]),
    };
    let window = window.max(Period::integer(2));
    let page = match page::assemble_e1(spec, window, true) {
        Ok(p) => p,
        Err(e) => return Err(vec![e.to_string()]),
    };

    for d in page::verify_central_symmetry(&page, spec) {
        if d.severity == Severity::Error {
            msgs.push(format!("central symmetry: {d}"));
        }
    }
    for d in page::support_bounds(&page, spec) {
        if d.severity == Severity::Error {
            msgs.push(format!("support bounds: {d}"));
        }
    }
    match solver::pairing_consistency(&page, spec, window) {
        Ok(ds) => {
            for d in ds {
                if d.severity == Severity::Error {
                    msgs.push(format!("pairing: {d}"));
                }
            }
        }
        Err(e) => msgs.push(e.to_string()),
    }
    for ct in index::critical_times(spec, window) {
        if ct.families.is_empty() && !ct.period.is_integer() {
            continue;
        }
        match solver::step_consistency(spec, &page, ct.period) {
            Ok(ds) => {
                for d in ds {
                    msgs.push(format!("step consistency: {d}"));
                }
            }
            Err(e) => msgs.push(e.to_string()),
        }
    }
    if let Err(e) = solver::solve_filtration(spec, &page, &spec.constraints) {
        msgs.push(format!("filtration: {e}"));
    }
    if spec.csr_weight.is_some() {
        match equivariant::eq27_identity(spec, -20) {
            Ok(ds) => {
                for d in ds {
                    msgs.push(format!("equivariant identity: {d}"));
                }
            }
            Err(e) => msgs.push(format!("equivariant identity: {e}")),
        }
        match equivariant::assemble_equivariant(spec, Period::integer(1), -20) {
            Ok(p) => {
                for d in equivariant::check_collapse(&p) {
                    msgs.push(format!("collapse: {d}"));
                }
            }
            Err(e) => msgs.push(format!("equivariant page: {e}")),
        }
    }
    if msgs.is_empty() {
        Ok(())
    } else {
        Err(msgs)
    }
}
