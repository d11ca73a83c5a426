//! Benchmark CLI for multi-agent bandit learning over action-erasure
//! channels.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bandit_core::{seeds, ArmId};
use batch_scheduler::{schedule_end_time_bound, lp_end_time, lp_rounding_end_time, pulls_per_arm};
use bench_harness::accept;
use bench_harness::{run_experiment, write_csv, ExperimentConfig};
use clap::{Args, Parser, Subcommand};
use regret_bounds::{gap_threshold, gap_dependent_bound, gap_free_bound, BoundInputs};

#[derive(Parser)]
#[command(name = "mamab", about = "Multi-agent bandit benchmark over erasure channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write raw + aggregate CSVs.
    Run(RunArgs),
    /// Build one batch schedule and dump it as CSV with a window sidecar.
    Schedule(ScheduleArgs),
    /// Print the end-time and regret bound values for a config.
    Bounds(BoundsArgs),
    /// Execute the oracle-sandwich grid and the scheduler invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's `output`, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides MAMAB_THREADS; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Per-agent repetition budgets, e.g. --alphas 0,2,5 (sorted ascending).
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<u32>,
    /// Number of active arms.
    #[arg(long)]
    arms: usize,
    /// Batch index (1-based).
    #[arg(long)]
    batch: u32,
    #[arg(long)]
    seed: u64,
    /// Output directory for schedule.csv and schedule_windows.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random scheduler instances to check on top of the exhaustive grid.
    #[arg(long, default_value_t = 10_000)]
    cases: usize,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Schedule(args) => cmd_schedule(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn init_threads(cli_threads: Option<usize>) {
    let threads = cli_threads.or_else(|| {
        std::env::var("MAMAB_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool initialized once");
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    init_threads(args.threads);
    let text = fs::read_to_string(&args.config)?;
    let config = ExperimentConfig::from_json(&text)?;
    let out = args
        .out
        .or_else(|| config.output.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let started = std::time::Instant::now();
    let result = run_experiment(&config)?;
    write_csv(&result, &out)?;

    println!(
        "{} policies x {} runs over T={} in {:.1?}",
        config.policies.len(),
        config.runs,
        config.horizon,
        started.elapsed()
    );
    for agg in &result.aggregates {
        let (t, mean, stderr) = *agg.points.last().expect("non-empty series");
        println!("  {:<10} final regret {mean:>12.1} +/- {stderr:>8.1} at t={t}", agg.policy.to_string());
    }
    println!("wrote {} and {}", out.join("raw.csv").display(), out.join("aggregate.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_schedule(args: ScheduleArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if args.alphas.is_empty() {
        return Err("need at least one --alphas entry".into());
    }
    let active: Vec<ArmId> = (0..args.arms).collect();
    let mut rng = seeds::stream(args.seed, "policy", 0);
    let sched = batch_scheduler::schedule(&active, &args.alphas, args.batch, &mut rng)?;

    fs::create_dir_all(&args.out)?;
    let mut grid = String::new();
    for agent in 0..sched.num_agents() {
        let row: Vec<String> =
            (1..=sched.end_time).map(|t| sched.arm_at(agent, t).to_string()).collect();
        grid.push_str(&row.join(","));
        grid.push('\n');
    }
    let grid_path = args.out.join("schedule.csv");
    fs::write(&grid_path, grid)?;

    let mut windows = String::from("arm,agent,start,end\n");
    for w in &sched.windows {
        windows.push_str(&format!("{},{},{},{}\n", w.arm, w.agent, w.start, w.end));
    }
    let windows_path = args.out.join("schedule_windows.csv");
    fs::write(&windows_path, windows)?;

    println!(
        "batch {} over {} agents ends at T={} (stage 1 placed {} arms, {} left to split)",
        args.batch,
        args.alphas.len(),
        sched.end_time,
        sched.stage1_arms,
        sched.k_hat
    );
    println!("wrote {} and {}", grid_path.display(), windows_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(&args.config)?;
    let config = ExperimentConfig::from_json(&text)?;
    let channels = bench_harness::sorted_channels(
        &config.epsilons(),
        config.channel.to_kind(),
        config.horizon,
    )?;
    let alphas: Vec<u32> = channels.iter().map(|c| c.alpha).collect();
    let k = config.instance.means.len();
    let t = config.horizon;

    println!("channels (sorted by repetition budget):");
    for ch in &channels {
        println!("  eps={:<6} alpha={}", ch.epsilon, ch.alpha);
    }

    println!("\nbatch end-time bounds (full active set):");
    println!(
        "  {:>5} {:>14} {:>14} {:>14}",
        "batch", "lp lower", "lp rounding", "upper bound"
    );
    let mut i = 1u32;
    while pulls_per_arm(i) <= t && i <= 12 {
        println!(
            "  {i:>5} {:>14.1} {:>14.1} {:>14.1}",
            lp_end_time(&alphas, k, i),
            lp_rounding_end_time(&alphas, k, i),
            schedule_end_time_bound(&alphas, k, i)
        );
        i += 1;
    }

    let best = config.instance.means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gaps: Vec<f64> = config.instance.means.iter().map(|m| best - m).collect();
    let inputs = BoundInputs::new(gaps, alphas, t)?
        .with_constants(config.constants.c, config.constants.c_prime)?;

    println!("\nregret bounds (constants c={}, c'={}):", config.constants.c, config.constants.c_prime);
    println!("  gap-dependent bound  {:>14.1}", gap_dependent_bound(&inputs));
    println!("  gap threshold        {:>14.6}", gap_threshold(&inputs)?);
    println!("  gap-free bound       {:>14.1}", gap_free_bound(&inputs)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut failed = false;

    match accept::oracle_sandwich_grid() {
        Ok(cases) => println!("oracle sandwich grid: ok ({cases} cases)"),
        Err(e) => {
            println!("oracle sandwich grid: FAILED: {e}");
            failed = true;
        }
    }
    match accept::structural_suite(args.cases, 0xCAFE) {
        Ok(cases) => println!("scheduler structural invariants: ok ({cases} instances)"),
        Err(e) => {
            println!("scheduler structural invariants: FAILED: {e}");
            failed = true;
        }
    }

    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
