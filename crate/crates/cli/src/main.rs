//! `d2p`: command-line driver for dihedral invariant computations.
//!
//! Exit codes: 0 success, 2 counterexample found, 3 exhaustive budget
//! refused, 4 bad input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use d2p_core::invariants::{degree_bound, minimal_generator_degrees};
use d2p_core::rep::{decompose, regular_representation, MatrixRep};
use d2p_core::separating::{
    beta_sep_witness, bound_comparison, parse_set_file, separating_set, verify_separating, Mode,
    SeparatingError, Verdict,
};
use d2p_core::{DihedralModule, Field, ModuleSpec};
use serde_json::json;

const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "d2p",
    version,
    about = "Invariants and separating sets of D_2p in characteristic 2"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Work over GF(2^{k m}) instead of GF(2^m)
    #[arg(long, global = true, default_value_t = 1)]
    field_multiplier: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parameters of the field used for a given p
    Field {
        #[arg(long)]
        p: u32,
    },
    /// Decompose a matrix representation into indecomposables
    Decompose {
        /// MatrixRep JSON file
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the matrices of a representation as JSON
    ExportRep {
        /// Regular representation of D_2p
        #[arg(long, conflicts_with = "spec")]
        regular: Option<u32>,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Degree-by-degree minimal generator counts of the invariant ring
    Gens {
        #[arg(long)]
        spec: String,
        /// Highest degree examined; defaults to s + max(r, p) + 3
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Build the explicit separating set (p prime)
    Sepset {
        #[arg(long)]
        spec: String,
    },
    /// Check that a set of invariants separates orbits over the model field
    VerifySep {
        #[arg(long)]
        spec: String,
        /// Polynomial list, one per line; `#` starts a comment
        #[arg(long, conflicts_with = "builtin")]
        set: Option<PathBuf>,
        /// Use the explicit separating set for the spec
        #[arg(long)]
        builtin: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Degree p+1 separation witness on W_1 + W_0
    BetaSep {
        #[arg(long)]
        p: u32,
    },
    /// Compare generator and separation degree bounds for a spec
    Bounds {
        #[arg(long)]
        spec: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

/// `--spec` accepts inline JSON or a path to a JSON file.
fn load_spec(arg: &str) -> Result<ModuleSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| input(format!("{arg}: {e}")))?
    };
    ModuleSpec::from_json(&text).map_err(input)
}

fn load_module(arg: &str, k: u32) -> Result<DihedralModule, Failure> {
    let spec = load_spec(arg)?;
    let field = Field::for_p_with_multiplier(spec.p, k).map_err(input)?;
    DihedralModule::new(spec, Arc::new(field)).map_err(input)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn only_json_or_text(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(input("csv output is only available for gens"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let format = cli.format;
    let k = cli.field_multiplier;
    match cli.cmd {
        Cmd::Field { p } => {
            only_json_or_text(format)?;
            let field = Field::for_p_with_multiplier(p, k).map_err(input)?;
            let params = field.params();
            let out = match format {
                Format::Text => format!(
                    "p={} m={} modulus={:#x} lambda={}\n",
                    params.p, params.m, params.modulus, params.lambda
                ),
                _ => pretty(params),
            };
            Ok((out, 0))
        }
        Cmd::Decompose { matrix } => {
            only_json_or_text(format)?;
            let text = std::fs::read_to_string(&matrix)
                .map_err(|e| input(format!("{}: {e}", matrix.display())))?;
            let (rep, field) = MatrixRep::from_json(&text).map_err(input)?;
            let d = decompose(&rep, &field).map_err(input)?;
            let out = match format {
                Format::Text => format!("{d}\n"),
                _ => pretty(&d),
            };
            Ok((out, 0))
        }
        Cmd::ExportRep { regular, spec } => {
            let out = match (regular, spec) {
                (Some(p), None) => {
                    let field = Field::for_p_with_multiplier(p, k).map_err(input)?;
                    regular_representation(&field).to_json(&field)
                }
                (None, Some(spec)) => {
                    let module = load_module(&spec, k)?;
                    module.matrices().to_json(module.field())
                }
                _ => return Err(input("pass exactly one of --regular or --spec")),
            };
            Ok((out + "\n", 0))
        }
        Cmd::Gens { spec, dmax } => {
            let module = load_module(&spec, k)?;
            let d_max = dmax.unwrap_or_else(|| degree_bound(&module) + 3);
            let table = minimal_generator_degrees(&module, d_max).map_err(input)?;
            let out = match format {
                Format::Json => pretty(&table.to_json()),
                Format::Csv => table.to_csv(),
                Format::Text => table.to_text(),
            };
            Ok((out, 0))
        }
        Cmd::Sepset { spec } => {
            only_json_or_text(format)?;
            let module = load_module(&spec, k)?;
            let set = separating_set(&module).map_err(input)?;
            let out = match format {
                Format::Text => set.to_text(module.layout()),
                _ => {
                    let items: Vec<_> = set
                        .iter()
                        .map(|(f, origin)| {
                            json!({
                                "polynomial": f.display(module.layout()).to_string(),
                                "provenance": origin.to_string(),
                            })
                        })
                        .collect();
                    pretty(&json!({ "spec": module.spec(), "set": items }))
                }
            };
            Ok((out, 0))
        }
        Cmd::VerifySep {
            spec,
            set,
            builtin,
            mode,
            budget,
            seed,
        } => {
            only_json_or_text(format)?;
            let module = load_module(&spec, k)?;
            let set = match (set, builtin) {
                (Some(path), false) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| input(format!("{}: {e}", path.display())))?;
                    parse_set_file(&text, &module).map_err(input)?
                }
                (None, true) => separating_set(&module).map_err(input)?,
                _ => return Err(input("pass exactly one of --set or --builtin")),
            };
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Sample => Mode::Sampled,
            };
            let report =
                verify_separating(&module, &set, mode, budget, seed).map_err(|e| match e {
                    SeparatingError::BudgetExceeded { .. } => Failure {
                        code: EXIT_BUDGET,
                        message: e.to_string(),
                    },
                    other => input(other),
                })?;
            let code = if report.verdict == Verdict::Counterexample {
                EXIT_COUNTEREXAMPLE
            } else {
                0
            };
            let out = match format {
                Format::Text => {
                    let mut s = String::new();
                    let verdict = serde_json::to_value(report.verdict).expect("verdict");
                    let _ = writeln!(s, "verdict: {}", verdict.as_str().unwrap_or(""));
                    let _ = writeln!(s, "points: {}", report.points);
                    let _ = writeln!(s, "classes: {}", report.classes);
                    if let Some([u, v]) = &report.counterexample {
                        let _ = writeln!(s, "counterexample: {:?} {:?}", u.bits(), v.bits());
                    }
                    if let Some(seed) = report.seed {
                        let _ = writeln!(s, "seed: {seed}");
                    }
                    s
                }
                _ => pretty(&report),
            };
            Ok((out, code))
        }
        Cmd::BetaSep { p } => {
            only_json_or_text(format)?;
            let w = beta_sep_witness(p).map_err(input)?;
            let out = match format {
                Format::Text => format!(
                    "p={} separated_at_p_plus_1={} separated_at_le_p={} distinct_orbits={}\n",
                    w.p, w.separated_at_p_plus_1, w.separated_at_le_p, w.distinct_orbits
                ),
                _ => pretty(&w),
            };
            Ok((out, 0))
        }
        Cmd::Bounds { spec } => {
            only_json_or_text(format)?;
            let spec = load_spec(&spec)?;
            let b = bound_comparison(&spec);
            let out = match format {
                Format::Text => format!(
                    "generator bound {} symonds bound {} separating bound {}\n",
                    b.paper_bound, b.symonds_bound, b.beta_sep_bound
                ),
                _ => pretty(&b),
            };
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
