//! Command line front end for the adem-cartan crate: verification sweeps,
//! formal expansions, Adem reduction, Steenrod tables, the structure
//! solver, and secondary operations on finite cochain models.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad
//! usage or input, 3 a resource limit was hit.

mod formats;
mod ops;
mod report;
mod verify;

use std::path::PathBuf;

use adem_cartan::steenrod::SqMode;
use clap::{Parser, Subcommand, ValueEnum};

use ops::CliError;
use report::{Entry, Format, Report};

#[derive(Parser)]
#[command(name = "adem-cartan", version, about = "cochain-level Steenrod operation workbench")]
struct Cli {
    /// Output style; records is one JSON object per line, mirroring text.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for sweeps; 0 picks the rayon default. The report
    /// order does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Seed for the randomized checks; fixed seed, byte-identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one of the verification sweeps.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Render a formal expansion of u, alpha or dG.
    Expand {
        /// One of: u, alpha, dg.
        what: String,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        x: Option<i64>,
        #[arg(long)]
        p: Option<i64>,
    },
    /// Rewrite expressions in the Steenrod algebra.
    Adem {
        #[command(subcommand)]
        action: AdemAction,
    },
    /// Print Sq^r on every class of a model, instability cutoffs marked.
    Sq {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Assemble and solve the boundary constraint system on a model.
    Solve {
        #[arg(long)]
        complex: PathBuf,
        /// Largest cell level in the system.
        #[arg(long)]
        max_n: i64,
        /// Evaluate a named linear functional over the whole solution space.
        #[arg(long)]
        check_functional: Option<String>,
    },
    /// Evaluate the secondary operation of an Adem relation on a cocycle.
    Secondary {
        #[arg(long)]
        complex: PathBuf,
        /// Basis names joined with '+', e.g. "a(x)1" or "a+b".
        #[arg(long)]
        cocycle: String,
        /// The relation, e.g. "Sq^2 Sq^2 + Sq^3 Sq^1".
        #[arg(long)]
        relation: String,
        /// Realizing cell, written m,p.
        #[arg(long)]
        target: String,
        /// Cell level for the solver; defaults to p+1.
        #[arg(long)]
        max_n: Option<i64>,
    },
}

#[derive(Subcommand)]
enum AdemAction {
    /// Reduce an expression to its admissible normal form.
    Reduce {
        expr: String,
        #[arg(long, value_enum, default_value_t = ModeArg::B2)]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    /// Integer exponents, Sq^0 kept.
    B2,
    /// Sq^0 = 1; negative exponents are rejected.
    A2,
}

#[derive(Subcommand)]
enum VerifyKind {
    /// The four structural identities of the u and alpha expansions.
    Identities {
        #[arg(long, default_value_t = 12)]
        max_m: i64,
        #[arg(long, default_value_t = 16)]
        max_n: i64,
        #[arg(long, default_value_t = 6)]
        max_x: i64,
    },
    /// d(dG^m_n) = 0 over the whole triangle.
    D2 {
        #[arg(long, default_value_t = 12)]
        max_n: i64,
    },
    /// Binomial facts near powers of two, exhaustive then sampled.
    Lemma51 {
        #[arg(long, default_value_t = 8)]
        max_p: u32,
        #[arg(long, default_value_t = 20000)]
        samples: u64,
    },
    /// Diagonal coefficients of u, and both expansions of each relation.
    Diagonal {
        #[arg(long, default_value_t = 8)]
        max_m: i64,
        #[arg(long, default_value_t = 16)]
        max_n: i64,
        #[arg(long, default_value_t = 4)]
        max_x: i64,
        /// Bound for the relation pair sweep 0 <= p <= n <= max-p.
        #[arg(long, default_value_t = 24)]
        max_p: i64,
    },
    /// The cochain-level relation suite on a model file.
    Relations {
        #[arg(long)]
        complex: PathBuf,
        /// Random cochain pairs for the coboundary identity.
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let format = cli.format;
    match run(cli) {
        Ok((report, code)) => {
            report.print(format);
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(cli: Cli) -> Result<(Report, i32), CliError> {
    let mut report = Report::default();
    let code = match cli.cmd {
        Cmd::Verify { kind } => {
            let entries = match kind {
                VerifyKind::Identities { max_m, max_n, max_x } => {
                    require_positive("--max-m", max_m)?;
                    verify::identities(max_m, max_n, max_x)
                }
                VerifyKind::D2 { max_n } => {
                    require_positive("--max-n", max_n)?;
                    verify::d2(max_n)
                }
                VerifyKind::Lemma51 { max_p, samples } => {
                    if max_p > 20 {
                        return Err(CliError::Usage(String::from(
                            "--max-p beyond 20 is unreasonably large",
                        )));
                    }
                    verify::lemma51(max_p, samples, cli.seed)
                }
                VerifyKind::Diagonal { max_m, max_n, max_x, max_p } => {
                    require_positive("--max-m", max_m)?;
                    verify::diagonal(max_m, max_n, max_x, max_p)
                }
                VerifyKind::Relations { complex, pairs } => {
                    let a = formats::load_complex(&complex)
                        .map_err(|e| CliError::Usage(format!("{:#}", e)))?;
                    verify::relations(&a, pairs, cli.seed)
                }
            };
            report.extend(entries);
            report.summarize()
        }
        Cmd::Expand { what, m, n, x, p } => {
            let rendered = ops::expand(&what, m, n, x, p)?;
            report.push(Entry::info("expand", rendered));
            0
        }
        Cmd::Adem { action } => match action {
            AdemAction::Reduce { expr, mode } => {
                let mode = match mode {
                    ModeArg::B2 => SqMode::B2,
                    ModeArg::A2 => SqMode::A2,
                };
                let rendered = ops::adem_reduce(&expr, mode)?;
                report.push(Entry::info("normal form", rendered));
                0
            }
        },
        Cmd::Sq { complex } => {
            report.extend(ops::sq_table(&complex)?);
            0
        }
        Cmd::Solve { complex, max_n, check_functional } => {
            let (entries, code) = ops::solve(&complex, max_n, check_functional.as_deref())?;
            report.extend(entries);
            code
        }
        Cmd::Secondary { complex, cocycle, relation, target, max_n } => {
            let (entries, code) =
                ops::secondary(&complex, &cocycle, &relation, &target, max_n)?;
            report.extend(entries);
            code
        }
    };
    Ok((report, code))
}

fn require_positive(flag: &str, v: i64) -> Result<(), CliError> {
    if v < 1 {
        return Err(CliError::Usage(format!("{} must be positive", flag)));
    }
    Ok(())
}
