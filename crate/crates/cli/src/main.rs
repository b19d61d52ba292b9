use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use noether_core::criteria::{em_tables, FixtureSets};
use noether_core::cyclotomic::subfields;
use noether_core::normsearch::BackendCommand;
use noether_core::scanner::{
    classify_prime, cross_check, read_records, scan, ScanConfig, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "noether")]
#[command(about = "Classify primes p by rationality of Q(C_p) via norm equations")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// Largest subfield degree to examine; above 2 needs a backend
    #[arg(long, default_value_t = 2)]
    max_degree: u64,

    /// Accept backend answers that are only valid under GRH
    #[arg(long)]
    grh: bool,

    /// Backend command line (program and arguments, whitespace-separated)
    #[arg(long, env = "NOETHER_BACKEND")]
    backend: Option<String>,

    /// Coefficient bound for the full-field certificate search
    #[arg(long, default_value_t = 3)]
    bound: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Commands {
    /// Classify one prime and print the verdict as JSON
    Classify {
        p: u64,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },

    /// Classify every prime in a range
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },

    /// Print the primes below the limit passing each Endo–Miyata criterion
    EmTables {
        #[arg(long, default_value_t = 20000)]
        limit: u64,
    },

    /// Print defining polynomials of the subfields of Q(zeta_n)
    Subfields {
        n: u64,
        #[arg(long, default_value_t = 2)]
        max_degree: u64,
    },

    /// Compare a full scan (primes below 20000) with the reference data
    CrossCheck {
        #[arg(long)]
        results: PathBuf,
    },
}

fn config(args: &PipelineArgs, jobs: Option<usize>) -> Result<ScanConfig> {
    let mut cfg = ScanConfig {
        max_degree: args.max_degree,
        allow_grh: args.grh,
        certificate_bound: args.bound,
        ..ScanConfig::default()
    };
    if let Some(line) = &args.backend {
        cfg.backend = Some(BackendCommand::parse(line).context("empty backend command")?);
    }
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        cfg.parallelism = j;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Commands::Classify { p, pipeline } => {
            let verdict = classify_prime(p, &config(&pipeline, None)?)?;
            println!("{}", serde_json::to_string(&verdict)?);
        }
        Commands::Scan {
            from,
            to,
            jobs,
            pipeline,
            out,
            format,
        } => {
            let cfg = config(&pipeline, jobs)?;
            let mut w: Box<dyn Write> = match &out {
                Some(path) => Box::new(BufWriter::new(
                    File::create(path).with_context(|| format!("creating {}", path.display()))?,
                )),
                None => Box::new(BufWriter::new(io::stdout().lock())),
            };
            if let Format::Csv = format {
                writeln!(w, "{CSV_HEADER}")?;
            }
            let summary = scan(from, to, &cfg, |r| match format {
                Format::Jsonl => writeln!(w, "{}", r.to_json()),
                Format::Csv => writeln!(w, "{}", r.to_csv()),
            })?;
            w.flush()?;
            eprintln!("{}", serde_json::to_string(&summary)?);
        }
        Commands::EmTables { limit } => {
            let (first, second) = em_tables(limit);
            let join = |v: &[u64]| {
                v.iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            println!("{}", join(&first));
            println!();
            println!("{}", join(&second));
        }
        Commands::Subfields { n, max_degree } => {
            for field in subfields(n, max_degree)? {
                println!("{}\t{}", field.degree, field.minpoly);
            }
        }
        Commands::CrossCheck { results } => {
            let file = File::open(&results)
                .with_context(|| format!("opening {}", results.display()))?;
            let records = read_records(BufReader::new(file))?;
            let report = cross_check(&records, FixtureSets::embedded())?;
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
