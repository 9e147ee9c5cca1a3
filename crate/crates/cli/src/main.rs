use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cmac_cli::commands::{max_sums, output_dir};
use cmac_cli::{cmd_dm, cmd_gap, cmd_region, cmd_sweep, CliError, GapMode, ScenarioConfig, SchemeName, SweepSpec};

/// Rate regions and gap audits for the compound MAC with conferencing decoders.
#[derive(Parser)]
#[command(name = "cmac", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Write one vertex CSV per scheme and a manifest.
    Region(Common),
    /// Sum-rate support of each scheme along a parameter sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Sweep as `var=min:max:samples` (var: c12, c21, cbar12, cbar21, p).
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Constant-gap audits; exits 1 if any audit fails.
    Gap {
        #[command(flatten)]
        common: Common,
        /// broadcast, symmetric or mux.
        #[arg(long)]
        mode: Option<String>,
        /// Random instances per audit.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Regions of a discrete memoryless channel.
    Dm(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Power-split points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated scheme list.
    #[arg(long)]
    schemes: Option<String>,
}

impl Common {
    fn load(&self) -> Result<(ScenarioConfig, PathBuf), CliError> {
        let mut cfg = ScenarioConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.grid {
            cfg.grid.power_points = n;
        }
        if let Some(list) = &self.schemes {
            cfg.schemes = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse::<SchemeName>)
                .collect::<Result<_, _>>()?;
        }
        let out = output_dir(self.out.clone(), &cfg);
        Ok((cfg, out))
    }
}

fn run(verb: Verb) -> Result<bool, CliError> {
    match verb {
        Verb::Region(common) => {
            let (cfg, out) = common.load()?;
            let manifest = cmd_region(&cfg, &out)?;
            for (name, sum) in max_sums(&manifest.entries) {
                println!("{name:<20} max sum rate {sum:.6}");
            }
            Ok(true)
        }
        Verb::Sweep { common, sweep } => {
            let (cfg, out) = common.load()?;
            let spec = match sweep {
                Some(s) => s.parse::<SweepSpec>()?,
                None => cfg
                    .sweep
                    .ok_or_else(|| CliError::Usage("no sweep given (use --sweep or a `sweep` block)".into()))?,
            };
            let rows = cmd_sweep(&cfg, &spec, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.join("sweep.csv").display());
            Ok(true)
        }
        Verb::Gap { common, mode, samples } => {
            let (mut cfg, out) = common.load()?;
            if let Some(n) = samples {
                cfg.gap.get_or_insert_with(Default::default).samples = n;
            }
            let mode = match mode {
                Some(m) => m.parse::<GapMode>()?,
                None => cfg
                    .gap
                    .as_ref()
                    .and_then(|g| g.mode)
                    .ok_or_else(|| CliError::Usage("no gap mode given (use --mode or gap.mode)".into()))?,
            };
            let report = cmd_gap(&cfg, mode, &out)?;
            for a in &report.audits {
                let s = &a.summary;
                println!("{:<22} {} samples, {} failures, worst gap {:.6}", a.name, s.samples, s.failures, s.worst_gap);
            }
            for row in &report.mux {
                println!(
                    "P={:<10e} C={:.4} sum={:.6} gain={}",
                    row.p,
                    row.c,
                    row.sum_rate,
                    row.gain.map_or("-".into(), |g| format!("{g:.4}"))
                );
            }
            println!("{}", if report.pass { "PASS" } else { "FAIL" });
            Ok(report.pass)
        }
        Verb::Dm(common) => {
            let (cfg, out) = common.load()?;
            let manifest = cmd_dm(&cfg, &out)?;
            for r in &manifest.entries {
                for e in &r.regions {
                    println!("{:<20} max sum rate {:.6}", e.name, e.max_sum_rate);
                }
                println!("compression feasible on {} of {} grid pairs", r.compression.feasible, r.compression.pairs);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
