mod commands;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qca_forge::forms1d::{DEFAULT_B_MAX, DEFAULT_DEGREE_CAP};
use qca_forge::ring::groebner::{set_default_budget, DEFAULT_SPAIR_BUDGET};
use qca_forge::{Error, PolyMatrix, Result, Ring};

use commands::{Loader, Output};
use report::{error_code, exit_code, summary_line, to_json, EXIT_MALFORMED};

/// Verify and synthesize translation-invariant Pauli stabilizer Hamiltonians and Clifford QCAs.
#[derive(Parser)]
#[command(name = "qca-forge", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Write the certificate as JSON to this path; stdout then gets a one-line summary.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Omit the timing section from JSON, making output byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "QCA_FORGE_THREADS", default_value_t = 0)]
    threads: usize,
    /// S-pair budget for each Gröbner computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SPAIR_BUDGET)]
    budget_spairs: u64,
    /// Require inputs over F_p with this p (also the ring for `replay` without a target).
    #[arg(long, global = true)]
    prime: Option<u32>,
    /// Require inputs in this many variables (also the ring for `replay` without a target).
    #[arg(long, global = true)]
    dims: Option<usize>,
    /// Coarse-grain every input matrix by these factors first (one value means every axis).
    #[arg(long, global = true, value_delimiter = ',', value_name = "N")]
    coarse: Option<Vec<usize>>,
    /// Write the computed matrix or gate product to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check σ†λσ = 0.
    VerifyCommuting { file: PathBuf },
    /// Check exactness of the stabilizer map (ker σ†λ = im σ).
    Exactness { file: PathBuf },
    /// Build a separator with the same image, optionally from a candidate.
    Separator {
        file: PathBuf,
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Build a separator and solve for its flippers.
    Flipper {
        file: PathBuf,
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Build a Clifford QCA mapping the Hamiltonian to the trivial one.
    Disentangle {
        file: PathBuf,
        #[arg(long)]
        candidate: Option<PathBuf>,
        /// Keep the QCA real (qubits only).
        #[arg(long)]
        real: bool,
    },
    /// Classify a one-dimensional anti-hermitian form up to coarse-graining and congruence.
    ClassifyForm {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_B_MAX)]
        b_max: usize,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
    },
    /// Apply the coarse-graining map given by --coarse and write the result.
    CoarseGrain { file: PathBuf },
    /// Multiply out a gate list and optionally compare it with a target matrix.
    Replay {
        gates: PathBuf,
        #[arg(long)]
        qudits: usize,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Brute-force checks on a finite torus.
    #[command(subcommand)]
    Oracle(Oracle),
    /// Built-in worked examples.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Args)]
struct Torus {
    /// Torus side lengths; one value means every axis.
    #[arg(long, value_delimiter = ',')]
    size: Vec<usize>,
}

#[derive(Subcommand)]
enum Oracle {
    /// Ground-space degeneracy of the instantiated Hamiltonian.
    Degeneracy {
        file: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Products of terms along relation columns are +I.
    Signs {
        file: PathBuf,
        #[arg(long)]
        relations: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Joint eigenspaces of a separator are one-dimensional.
    Separator {
        file: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Each flipper anticommutes with exactly its own term.
    Flipper {
        file: PathBuf,
        #[arg(long)]
        separator: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Topological spins of the point charges (qubits, two dimensions).
    Spin {
        file: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Mutual braiding of the point charges (qubits, two dimensions).
    Braid {
        file: PathBuf,
        #[command(flatten)]
        torus: Torus,
    },
    /// Match separator terms to qudits within a radius.
    Match {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        radius: usize,
        #[command(flatten)]
        torus: Torus,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Full pipeline on the three-fermion Walker–Wang model.
    WalkerWang {
        #[arg(long)]
        real: bool,
        /// Also write the model files to this directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyCommuting { .. } => "verify-commuting",
            Command::Exactness { .. } => "exactness",
            Command::Separator { .. } => "separator",
            Command::Flipper { .. } => "flipper",
            Command::Disentangle { .. } => "disentangle",
            Command::ClassifyForm { .. } => "classify-form",
            Command::CoarseGrain { .. } => "coarse-grain",
            Command::Replay { .. } => "replay",
            Command::Oracle(o) => match o {
                Oracle::Degeneracy { .. } => "oracle degeneracy",
                Oracle::Signs { .. } => "oracle signs",
                Oracle::Separator { .. } => "oracle separator",
                Oracle::Flipper { .. } => "oracle flipper",
                Oracle::Spin { .. } => "oracle spin",
                Oracle::Braid { .. } => "oracle braid",
                Oracle::Match { .. } => "oracle match",
            },
            Command::Demo(Demo::WalkerWang { .. }) => "demo walker-wang",
        }
    }
}

/// Spin and braiding need room for strings; everything else is cheap at 2.
fn torus_sizes(torus: &Torus, default: usize, d: usize) -> Result<Vec<usize>> {
    let given = if torus.size.is_empty() { vec![default] } else { torus.size.clone() };
    commands::sizes(&given, d)
}

fn optional(ld: &mut Loader, path: Option<&PathBuf>) -> Result<Option<PolyMatrix>> {
    path.map(|p| ld.matrix(p)).transpose()
}

fn dispatch(command: &Command, g: &Global, ld: &mut Loader) -> Result<Output> {
    match command {
        Command::VerifyCommuting { file } => commands::verify_commuting(ld.matrix(file)?),
        Command::Exactness { file } => commands::exactness(ld.matrix(file)?),
        Command::Separator { file, candidate } => {
            let m = ld.matrix(file)?;
            commands::separator(m, optional(ld, candidate.as_ref())?.as_ref())
        }
        Command::Flipper { file, candidate } => {
            let m = ld.matrix(file)?;
            commands::flipper(m, optional(ld, candidate.as_ref())?.as_ref())
        }
        Command::Disentangle { file, candidate, real } => {
            let m = ld.matrix(file)?;
            commands::disentangle(m, optional(ld, candidate.as_ref())?.as_ref(), *real)
        }
        Command::ClassifyForm { file, b_max, degree_cap } => commands::classify(ld.matrix(file)?, *b_max, *degree_cap),
        Command::CoarseGrain { file } => {
            let factors = g.coarse.as_deref().ok_or_else(|| Error::Context("coarse-grain needs --coarse".into()))?;
            commands::coarse_grain(ld.raw_matrix(file)?, factors)
        }
        Command::Replay { gates, qudits, target } => {
            let text = ld.text(gates)?;
            let target = target.as_ref().map(|t| ld.raw_matrix(t)).transpose()?;
            let ring = match (&target, g.prime, g.dims) {
                (Some(t), _, _) => t.ring(),
                (None, Some(p), Some(d)) => Ring::new(p, d)?,
                (None, _, _) => {
                    return Err(Error::Context("replay without --target needs --prime and --dims".into()))
                }
            };
            commands::replay(&text, ring, *qudits, target.as_ref())
        }
        Command::Oracle(o) => match o {
            Oracle::Degeneracy { file, torus } => {
                let m = ld.matrix(file)?;
                commands::oracle_degeneracy(&m, &torus_sizes(torus, 2, m.ring().nvars())?)
            }
            Oracle::Signs { file, relations, torus } => {
                let m = ld.matrix(file)?;
                let k = ld.matrix(relations)?;
                commands::oracle_signs(&m, &k, &torus_sizes(torus, 2, m.ring().nvars())?)
            }
            Oracle::Separator { file, torus } => {
                let m = ld.matrix(file)?;
                commands::oracle_separator(&m, &torus_sizes(torus, 2, m.ring().nvars())?)
            }
            Oracle::Flipper { file, separator, torus } => {
                let f = ld.matrix(file)?;
                let sep = ld.matrix(separator)?;
                commands::oracle_flipper(&f, &sep, &torus_sizes(torus, 2, f.ring().nvars())?)
            }
            Oracle::Spin { file, torus } => {
                let m = ld.matrix(file)?;
                commands::oracle_spin(&m, &torus_sizes(torus, 8, m.ring().nvars())?)
            }
            Oracle::Braid { file, torus } => {
                let m = ld.matrix(file)?;
                commands::oracle_braid(&m, &torus_sizes(torus, 8, m.ring().nvars())?)
            }
            Oracle::Match { file, radius, torus } => {
                let m = ld.matrix(file)?;
                commands::oracle_match(&m, &torus_sizes(torus, 2, m.ring().nvars())?, *radius)
            }
        },
        Command::Demo(Demo::WalkerWang { real, export }) => commands::demo_walker_wang(*real, export.as_deref()),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    set_default_budget(g.budget_spairs);
    rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build_global()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let mut ld = Loader { inputs: Vec::new(), prime: g.prime, dims: g.dims, coarse: g.coarse.clone() };
    let out = dispatch(&cli.command, g, &mut ld)?;
    if let (Some(path), Some(text)) = (&g.out, &out.artifact) {
        write(path, text)?;
    }
    let code = exit_code(&out.cert);
    match &g.json {
        Some(path) => {
            let doc = to_json(&out.cert, cli.command.name(), &ld.inputs, !g.no_timing);
            let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
            text.push('\n');
            write(path, &text)?;
            println!("{}", summary_line(&out.cert));
        }
        None => print!("{}", out.cert),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
