// Copyright 2026 The mermin-bound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `mermin`: analyse single three-qubit states and generate sweep datasets.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mermin_bound::optimizer::OptimizerConfig;
use mermin_bound::qstate::CanonicalParams;
use mermin_cli::emit::{self, Format};
use mermin_cli::record::{analyze, Analysis, AnalysisRecord};
use mermin_cli::sweep::{self, Family, FixedClassConfig};
use mermin_cli::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "mermin",
    version,
    about = "Mermin-operator violation bounds for three-qubit pure states"
)]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Optimizer restarts per state.
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Dataset encoding.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads (0 = all cores). Output does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline on one canonical state.
    Analyze(AnalyzeArgs),
    /// Generate a dataset.
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, default_value_t = 0.0)]
    l0: f64,
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    #[arg(long, default_value_t = 0.0)]
    l3: f64,
    #[arg(long, default_value_t = 0.0)]
    l4: f64,
    /// Relative phase on the |100⟩ amplitude, in [0, π].
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    /// Rescale the λ's to unit norm however far off they are (by default
    /// only near-unit inputs are rescaled).
    #[arg(long)]
    normalize: bool,
    /// Also compute the numerical maximum violation.
    #[arg(long)]
    optimize: bool,
    /// Print the record as JSON after the table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SweepOpts {
    /// Skip the numerical maximization (γ and converged columns left empty).
    #[arg(long)]
    no_optimize: bool,
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Seeded random canonical states.
    Random {
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[command(flatten)]
        opts: SweepOpts,
    },
    /// A single-measure family on a uniform grid.
    Family {
        /// One of e1, e2, e3, ghz.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 200)]
        grid: u64,
        #[command(flatten)]
        opts: SweepOpts,
    },
    /// States whose minimizing flattening has a fixed (γ2, θ).
    FixedClass {
        #[arg(long, default_value_t = -0.0884, allow_hyphen_values = true)]
        gamma2: f64,
        #[arg(long, default_value_t = 0.00238, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
        /// Keep raw within-tolerance samples instead of polishing them onto
        /// the exact targets.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        opts: SweepOpts,
    },
}

/// Typed-in coefficients such as `0.7071` are renormalized when their
/// squared norm is this close to 1; anything further off is rejected
/// unless `--normalize` is given.
const TYPED_NORM_TOL: f64 = 1e-3;

fn optimizer_config(cli: &Cli) -> Result<OptimizerConfig, CliError> {
    let cfg = OptimizerConfig {
        restarts: cli.restarts,
        seed: cli.seed,
        ..OptimizerConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn print_table(r: &AnalysisRecord) {
    println!(
        "state      λ = [{:.6}, {:.6}, {:.6}, {:.6}, {:.6}], φ = {:.6}",
        r.l0, r.l1, r.l2, r.l3, r.l4, r.phi
    );
    println!(
        "tangles    e1² = {:.10}  e2² = {:.10}  e3² = {:.10}",
        r.e1sq, r.e2sq, r.e3sq
    );
    println!(
        "           e4² = {:.10}  e5 = {:.10}  C_T² = {:.10}",
        r.e4sq, r.e5, r.ct_sq
    );
    println!(
        "axis  {:>14} {:>14} {:>14} {:>14} {:>12} {:>14}",
        "alpha1", "alpha2", "alpha3", "gamma2", "theta", "bound"
    );
    for a in &r.axes {
        println!(
            "{:>4}  {:>14.10} {:>14.10} {:>14.10} {:>14.10} {:>12.8} {:>14.10}",
            a.axis, a.alpha1, a.alpha2, a.alpha3, a.gamma2, a.theta, a.bound
        );
    }
    println!("gamma_R    {:.12} (axis {})", r.gamma_r, r.minimizing_axis);
    if let (Some(g), Some(o)) = (r.gamma, &r.optimizer) {
        println!(
            "gamma      {:.12} ({} restarts, {} sweeps, {})",
            g,
            o.restarts,
            o.iterations_used,
            if o.converged {
                "converged"
            } else {
                "not converged"
            }
        );
    }
}

fn report_violations(rows: &[Analysis]) -> Result<(), CliError> {
    let flagged: Vec<_> = rows.iter().filter(|a| !a.violations.is_empty()).collect();
    for a in &flagged {
        eprintln!("row {}: {}", a.record.seed_index, a.violations.join("; "));
    }
    if flagged.is_empty() {
        Ok(())
    } else {
        Err(CliError::Consistency(format!(
            "{} row(s) failed self-checks",
            flagged.len()
        )))
    }
}

fn emit_checked(cli: &Cli, rows: &[Analysis]) -> Result<(), CliError> {
    let records: Vec<AnalysisRecord> = rows.iter().map(|a| a.record.clone()).collect();
    emit::emit(&records, cli.format.into(), cli.out.as_deref())?;
    report_violations(rows)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => {
            let lambda = [a.l0, a.l1, a.l2, a.l3, a.l4];
            let norm_sq: f64 = lambda.iter().map(|l| l * l).sum();
            let params = if a.normalize || (norm_sq - 1.0).abs() <= TYPED_NORM_TOL {
                let p = CanonicalParams::normalized(lambda, a.phi)?;
                if (norm_sq - 1.0).abs() > 1e-12 {
                    eprintln!("note: λ's rescaled to unit norm (input norm² = {norm_sq})");
                }
                p
            } else {
                CanonicalParams::new(lambda, a.phi)?
            };
            let cfg = optimizer_config(cli)?;
            let analysis = analyze(0, &params, a.optimize.then_some(&cfg))?;
            print_table(&analysis.record);
            if a.json {
                let text = serde_json::to_string_pretty(&analysis.record)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                println!("{text}");
            }
            if let Some(path) = &cli.out {
                emit::emit(
                    std::slice::from_ref(&analysis.record),
                    cli.format.into(),
                    Some(path),
                )?;
            }
            report_violations(std::slice::from_ref(&analysis))
        }
        Command::Sweep(s) => {
            let cfg = optimizer_config(cli)?;
            let opt = |o: &SweepOpts| (!o.no_optimize).then_some(&cfg);
            match s {
                SweepCommand::Random { n, opts } => {
                    let rows = sweep::random(*n, cli.seed, opt(opts))?;
                    emit_checked(cli, &rows)
                }
                SweepCommand::Family { family, grid, opts } => {
                    let kind: Family = family.parse()?;
                    let rows = sweep::family(kind, *grid, cli.seed, opt(opts))?;
                    emit_checked(cli, &rows)
                }
                SweepCommand::FixedClass {
                    gamma2,
                    theta,
                    tol,
                    count,
                    max_attempts,
                    no_refine,
                    opts,
                } => {
                    let class = FixedClassConfig {
                        gamma2: *gamma2,
                        theta: *theta,
                        tol: *tol,
                        count: *count,
                        max_attempts: *max_attempts,
                        refine: !no_refine,
                    };
                    let out = sweep::fixed_class(&class, cli.seed, opt(opts))?;
                    eprintln!(
                        "fixed-class: {} state(s) accepted in {} attempt(s); gamma_R decreases along -alpha1: {}",
                        out.rows.len(),
                        out.attempts,
                        out.gamma_r_decreases
                    );
                    if !opts.no_optimize {
                        eprintln!(
                            "fixed-class: gamma strictly decreases at {} of {} adjacent pair(s) (gamma_R is monotone, gamma need not be)",
                            out.gamma_decreases,
                            out.rows.len().saturating_sub(1)
                        );
                    }
                    if !out.rows.is_empty() {
                        emit_checked(cli, &out.rows)?;
                    }
                    if out.gamma_r_decreases > 0 {
                        return Err(CliError::Consistency(
                            "gamma_R is not monotone in -alpha1".into(),
                        ));
                    }
                    if out.exhausted {
                        return Err(CliError::Empty(format!(
                            "attempt budget of {} exhausted with {} of {} state(s){}",
                            class.max_attempts,
                            out.rows.len(),
                            class.count,
                            if out.rows.is_empty() {
                                "; nothing written"
                            } else {
                                "; partial output written"
                            }
                        )));
                    }
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(5);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
