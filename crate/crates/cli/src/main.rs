use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ga_harmonic::composite::IdentityReport;
use ga_harmonic::harness::{
    emit_report, load_config, run_suite, sweep_convergence, write_sweep, Profile, ReportFormat, RunConfig, Suite, SweepAxis,
    SweepTable, SweepTarget,
};
use ga_harmonic::par::configure_threads_from_env;

/// Plancherel and convolution identity checks for the chain N ⊂ S ⊂ SL ⊂ GL₊ ⊂ GL ⊂ GA.
///
/// The worker count comes from GA_HARMONIC_THREADS when set; results do not depend on it.
#[derive(Parser)]
#[command(name = "ga-harmonic", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base profile: default, deep or so3 (overrides the file's `profile`).
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Directory for report files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: line-json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write 0 in the seconds field so report files are byte-stable.
    #[arg(long, global = true)]
    no_timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Plancherel residuals and component doubling.
    Plancherel,
    /// Convolution identities on the auxiliary groups.
    Convolution,
    /// Haar invariance of the factor rules and translation equivariance.
    Invariance,
    /// Residuals of one identity on successively refined grids.
    Sweep {
        /// `plancherel:<level>` or a convolution identity such as Lemma5.1.
        #[arg(long, default_value = "plancherel:GA+")]
        target: String,
        /// Comma-separated axes to refine: n, a, t, translation, k.
        #[arg(long, value_delimiter = ',', default_value = "n,a,t,translation,k")]
        axes: Vec<String>,
        #[arg(long, default_value_t = 2)]
        factor: usize,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Every suite.
    All,
}

fn config(common: &Common) -> ga_harmonic::Result<RunConfig> {
    let profile = common.profile.as_deref().map(str::parse::<Profile>).transpose()?;
    let mut cfg = match &common.config {
        Some(path) => load_config(path, profile)?,
        None => RunConfig::profile(profile.unwrap_or(Profile::Default)),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(f) = &common.format {
        cfg.format = f.parse::<ReportFormat>()?;
    }
    if let Some(out) = &common.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn print_report(r: &IdentityReport) {
    let status = match (r.tolerance, r.passed()) {
        (None, _) => "INFO",
        (Some(_), true) => "PASS",
        (Some(_), false) => "FAIL",
    };
    let tol = r.tolerance.map_or("-".to_string(), |t| format!("{t:.0e}"));
    println!(
        "{status} {:<24} {:<4} n={} residual={:.3e} tol={tol} {:.2}s",
        r.identity, r.level, r.n, r.residual, r.seconds
    );
}

fn print_sweep(t: &SweepTable) {
    println!("sweep {}", t.target);
    for (i, row) in t.rows.iter().enumerate() {
        println!("  {i}: residual={:.3e}  {}", row.residual, row.grid);
    }
    if t.flagged {
        println!("FLAG residuals did not decrease under refinement");
    }
}

fn run(cli: &Cli) -> ga_harmonic::Result<bool> {
    let cfg = config(&cli.common)?;
    let suite = match &cli.command {
        Command::Plancherel => Suite::Plancherel,
        Command::Convolution => Suite::Convolution,
        Command::Invariance => Suite::Invariance,
        Command::All => Suite::All,
        Command::Sweep { target, axes, factor, steps } => {
            let target: SweepTarget = target.parse()?;
            let axes = axes.iter().map(|a| a.parse::<SweepAxis>()).collect::<ga_harmonic::Result<Vec<_>>>()?;
            let table = sweep_convergence(&cfg, target, &axes, *factor, *steps)?;
            print_sweep(&table);
            if let Some(dir) = &cfg.output {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!("sweep.{}", cfg.format.extension()));
                write_sweep(std::io::BufWriter::new(std::fs::File::create(&path)?), &table, cfg.format)?;
                println!("wrote {}", path.display());
            }
            return Ok(!table.flagged);
        }
    };
    let reports = run_suite(&cfg, suite)?;
    for r in &reports {
        print_report(r);
    }
    if let Some(dir) = &cfg.output {
        let path = emit_report(dir, &suite.to_string(), &reports, cfg.format, cfg.seed, !cli.common.no_timings)?;
        println!("wrote {}", path.display());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} reports, {failed} failed", reports.len());
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads_from_env();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
