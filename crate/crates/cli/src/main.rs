use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use blochvec::su_basis::BasisDocument;
use blochvec::Tolerances;
use blochvec_cli::{
    basis_for, read_json, run_check, run_invariants, run_map, run_tangle, run_werner,
    CheckOptions, CheckReport, MapDocument, MatrixDocument,
};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "blochvec", version, about = "Coherence-vector positivity and invariant checks")]
struct Cli {
    /// Positivity tolerance (relative to max |S_k|).
    #[arg(long, global = true, env = "BLOCHVEC_TOL")]
    tol: Option<f64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic-polynomial coefficients and the positivity verdict.
    Check {
        input: PathBuf,
        /// Cross-check against the minimum eigenvalue.
        #[arg(long)]
        verify: bool,
        /// Check the inverted operator (1/N)(b 1 - c n.lambda) instead.
        #[arg(long)]
        invert: bool,
        /// Inversion weight b.
        #[arg(long, default_value_t = 1.0, requires = "invert")]
        weight: f64,
    },
    /// Trace powers by both routes, Casimir invariants and degeneracy pattern.
    Invariants {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// S_3, S_4 of the Werner state and its partial transpose.
    Werner {
        #[arg(long, conflicts_with = "sweep")]
        x: Option<f64>,
        /// Number of equal steps across [0, 1].
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Three-tangle and concurrences of a three-qubit ket.
    Tangle { input: PathBuf },
    /// Apply an affine map to a state and check the image.
    Map {
        map: PathBuf,
        input: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Print a basis as JSON.
    Basis {
        /// Subsystem dimensions, e.g. `3` or `2,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
}

/// Write to stdout, treating a closed pipe as success.
fn write_out(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) -> anyhow::Result<()> {
    if json {
        write_out(&(serde_json::to_string_pretty(value)? + "\n"))
    } else {
        write_out(&text(value))
    }
}

fn check_text(r: &CheckReport) -> String {
    let mut out = String::new();
    if let Some(b) = r.inverted_with {
        out += &format!("inverted with b = {b}\n");
    }
    for (k, s) in r.s.iter().enumerate() {
        out += &format!("S_{} = {s:.12e}\n", k + 1);
    }
    out += &format!("sign changes: {} (positive eigenvalues)\n", r.sign_changes);
    if let (Some(min), Some(ok)) = (r.min_eigenvalue, r.eigen_agrees) {
        out += &format!("min eigenvalue: {min:.12e} ({})\n", if ok { "agrees" } else { "DISAGREES" });
    }
    out += &format!("verdict: {}\n", r.verdict);
    out
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let tol = match cli.tol {
        Some(t) if t > 0.0 => Tolerances::with_pos(t),
        Some(t) => anyhow::bail!("tolerance must be positive, got {t}"),
        None => Tolerances::default(),
    };
    let load = |p: &PathBuf| -> anyhow::Result<MatrixDocument> {
        read_json(p).with_context(|| format!("loading {}", p.display()))
    };
    match cli.command {
        Command::Check {
            input,
            verify,
            invert,
            weight,
        } => {
            let opts = CheckOptions {
                verify,
                invert: invert.then_some(weight),
            };
            let report = run_check(&load(&input)?, &opts, &tol)?;
            emit(cli.json, &report, check_text)?;
            Ok(report.exit_code())
        }
        Command::Invariants { input, max_order } => {
            let report = run_invariants(&load(&input)?, max_order, &tol)?;
            emit(cli.json, &report, |r| {
                let mut out = format!("N = {}\n m  adjoint              closed\n", r.dim);
                for row in &r.traces {
                    out += &format!("{:>2}  {:<20.14} {:<20.14}\n", row.m, row.adjoint, row.closed);
                }
                out += &format!("max discrepancy: {:.3e}\n", r.max_discrepancy);
                for (m, c) in &r.casimirs {
                    out += &format!("c_{m} = {c:.12}\n");
                }
                if let Some(d) = &r.degeneracy {
                    out += &format!("degeneracy: {d}\n");
                }
                out
            })?;
            Ok(0)
        }
        Command::Werner { x, sweep } => {
            let report = run_werner(x, sweep, &tol)?;
            emit(cli.json, &report, |r| {
                let mut out = format!(
                    "{:>8} {:>14} {:>14} {:>14} {:>14}  PPT\n",
                    "x", "S3", "S4", "S3_PT", "S4_PT"
                );
                for row in &r.rows {
                    out += &format!(
                        "{:>8.4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}  {}\n",
                        row.x,
                        row.s3,
                        row.s4,
                        row.s3_pt,
                        row.s4_pt,
                        if row.ppt { "yes" } else { "no" }
                    );
                }
                if let Some(b) = r.ppt_boundary {
                    out += &format!("PPT boundary: x = {b:.10}\n");
                }
                out
            })?;
            Ok(0)
        }
        Command::Tangle { input } => {
            let report = run_tangle(&load(&input)?, &tol)?;
            emit(cli.json, &report, |r| {
                format!(
                    "tau_ABC = {:.12}\nC^2_AB = {:.12}\nC^2_AC = {:.12}\nCKW: {:.12} <= {:.12} ({})\npermutation spread: {:.3e}\n",
                    r.tau,
                    r.concurrence_sq_ab,
                    r.concurrence_sq_ac,
                    r.ckw_lhs,
                    r.ckw_rhs,
                    if r.ckw_holds { "holds" } else { "VIOLATED" },
                    r.permutation_spread
                )
            })?;
            Ok(0)
        }
        Command::Map { map, input, verify } => {
            let map_doc: MapDocument =
                read_json(&map).with_context(|| format!("loading {}", map.display()))?;
            let report = run_map(&map_doc, &load(&input)?, verify, &tol)?;
            emit(cli.json, &report, |r| {
                let image: Vec<String> = r.image.iter().map(|x| format!("{x:.6}")).collect();
                format!("image: [{}]\n{}", image.join(", "), check_text(&r.check))
            })?;
            Ok(report.check.exit_code())
        }
        Command::Basis { dims } => {
            let doc: BasisDocument = basis_for(&dims)?.to_document();
            write_out(&(serde_json::to_string_pretty(&doc)? + "\n"))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // exit code 2 is reserved for a NotPSD verdict
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
