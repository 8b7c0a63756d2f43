use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gmvi::bench::{
    load_suite, run_bench, run_cell, tune, write_report, AlgoKind, BenchCell, InstanceSpec, ReportFormat, TuningGrid,
};
use gmvi::geometry::GeometryChoice;
use gmvi::problems::{Family, WatsonOffset};
use gmvi::solvers::write_trace;
use gmvi::{GmviError, Result};

#[derive(Parser)]
#[command(name = "gmvi", version, about = "Extragradient solvers for variational inequalities over the simplex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Pick (gamma0, lambda) for a family from the 3x3 grid.
    Tune {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value = "negls")]
        algo: AlgoKind,
        #[arg(long)]
        geometry: GeometryChoice,
    },
    /// Run a suite file and write the CSV report.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write a Markdown table here.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Watson offset index (1..=10).
    #[arg(long)]
    index: Option<usize>,
    /// Sign of the Watson offset: plus (e_i) or minus (-e_i).
    #[arg(long, default_value = "plus")]
    offset: WatsonOffset,
    #[arg(long)]
    geometry: GeometryChoice,
    #[arg(long, default_value = "negls")]
    algo: AlgoKind,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Iteration horizon of the Hölder stepsize.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long = "max-prox", default_value_t = 100_000)]
    max_prox: usize,
    /// Per-iteration CSV trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Full run result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn instance_spec(a: &SolveArgs) -> Result<InstanceSpec> {
    let need_n = || a.n.ok_or_else(|| GmviError::InvalidConfig(format!("--n is required for {}", a.instance)));
    Ok(match a.instance {
        Family::KS => InstanceSpec::ks(),
        Family::WAT => {
            let i = a.index.ok_or_else(|| GmviError::InvalidConfig("--index is required for WAT".into()))?;
            InstanceSpec { watson_offset: a.offset, ..InstanceSpec::watson(i) }
        }
        Family::SUN => InstanceSpec::sun(need_n()?),
        Family::MHPH | Family::RG => {
            let seed = a.seed.ok_or_else(|| GmviError::InvalidConfig(format!("--seed is required for {}", a.instance)))?;
            InstanceSpec::seeded(a.instance, need_n()?, seed)
        }
        Family::Custom => return Err(GmviError::InvalidConfig("custom instances are library-only".into())),
    })
}

fn solve(a: SolveArgs) -> Result<()> {
    let mut cell = BenchCell::new(instance_spec(&a)?, a.geometry, a.algo);
    cell.params.gamma0 = a.gamma0;
    cell.params.lambda = a.lambda;
    cell.params.l = a.l;
    cell.params.nu = a.nu;
    cell.params.horizon = a.horizon;
    cell.gap_tol = a.tol;
    cell.max_prox_calls = a.max_prox;
    let out = run_cell(&cell)?;
    let (row, res) = (&out.row, &out.result);
    println!("instance   {} (n = {})", row.instance, row.n);
    println!("solver     {} / {}", row.algorithm, row.geometry);
    if let (Some(g), Some(l)) = (row.gamma0, row.lambda) {
        println!("params     gamma0 = {g}, lambda = {l}");
    }
    println!("status     {}", row.status);
    println!("k          {}", row.k);
    println!("np         {}", row.np);
    println!("gap        {:e}", row.final_gap);
    println!("seconds    {:.4}", row.wall_seconds);
    if let Some(c) = &res.best_certificate {
        println!("certificate eps = {:e}, tilde_gap = {:e}, residual = {:e}", c.eps, c.tilde_gap_value, c.residual_norm);
    }
    if let Some(msg) = &res.message {
        println!("message    {msg}");
    }
    if let Some(path) = &a.trace {
        write_trace(&res.trace, path)?;
    }
    if let Some(path) = &a.json {
        std::fs::write(path, res.to_json()?).map_err(|source| GmviError::Io { path: path.clone(), source })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Tune { family, algo, geometry } => {
            let grid = TuningGrid::for_family(family)?;
            let reps: Vec<String> = grid.representatives.iter().map(|r| r.to_string()).collect();
            println!("representatives: {}", reps.join(", "));
            let report = match tune(&grid, algo, geometry) {
                Ok(r) => r,
                Err(GmviError::AllDiverged { table }) => {
                    for e in &table {
                        println!("({}, {})  np = {:?}  diverged", e.gamma0, e.lambda, e.np);
                    }
                    return Err(GmviError::AllDiverged { table });
                }
                Err(e) => return Err(e),
            };
            println!("gamma0 lambda   total_np  per-instance");
            for e in &report.table {
                let mark = if e.diverged { "  diverged" } else { "" };
                println!("{:<6} {:<6}   {:>8}  {:?}{mark}", e.gamma0, e.lambda, e.total_np, e.np);
            }
            println!("selected gamma0 = {}, lambda = {} (total np {})", report.gamma0, report.lambda, report.total_np);
            Ok(())
        }
        Command::Bench { suite, out, markdown } => {
            let cells = load_suite(&suite)?;
            let rows = run_bench(&cells)?;
            write_report(&rows, ReportFormat::Csv, &out)?;
            if let Some(md) = markdown {
                write_report(&rows, ReportFormat::Markdown, &md)?;
            }
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
