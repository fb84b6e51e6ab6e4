use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rsscma::scma::CodebookSet;
use rsscma::sim::{analyze, default_degree, emit_csv, format_table, run_sweep, write_csv, SimConfig};

/// RS-SCMA link-level simulator.
#[derive(Debug, Parser)]
#[command(name = "rsscma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; all cores when absent.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the overloading factor and complexity ratio per splitting factor.
    Analyze {
        #[arg(long, default_value_t = 6)]
        users: usize,
        #[arg(long, default_value_t = 4)]
        resources: usize,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        /// Comma-separated splitting factors.
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.25,0.5,0.75,0.9,1")]
        alpha_list: Vec<f64>,
        /// Users per resource; defaults to 2 * users / resources, rounded up.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Parse and validate a codebook file.
    ValidateCodebook {
        #[arg(long)]
        path: String,
    },
}

fn run(cli: Cli) -> rsscma::Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            threads,
        } => {
            let mut cfg = SimConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = threads {
                pool = pool.num_threads(n);
            }
            let pool = pool
                .build()
                .map_err(|e| rsscma::Error::InvalidArgument(e.to_string()))?;
            let report = pool.install(|| run_sweep(&cfg))?;
            for p in &report.points {
                eprintln!(
                    "ebn0={} dB trials={} ser={:.3e} ber={:.3e} bler={:.3e} ({:.1} s)",
                    p.ebn0_db, p.trials, p.ser, p.ber, p.bler, p.wall_time_s
                );
            }
            match out {
                Some(path) => emit_csv(&report, path),
                None => write_csv(&report, std::io::stdout().lock()),
            }
        }
        Command::Analyze {
            users,
            resources,
            alphabet,
            alpha_list,
            degree,
        } => {
            let degree = degree.unwrap_or_else(|| default_degree(users, resources));
            let rows = analyze(users, resources, alphabet, degree, &alpha_list)?;
            print!("{}", format_table(&rows));
            Ok(())
        }
        Command::ValidateCodebook { path } => {
            let cb = CodebookSet::load(&path)?;
            let f = cb.indicator();
            println!(
                "ok: {} users, {} resources, {} codewords, max resource degree {}",
                cb.users(),
                cb.resources(),
                cb.alphabet(),
                f.max_resource_degree()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
