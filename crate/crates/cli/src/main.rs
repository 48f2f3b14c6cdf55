use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use stratalab::report::{emit_report, Format};
use stratalab::suite::{run_suite, Suite, SuiteConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    DlPartition,
    DlComponents,
    BuildingBall,
    RzQuaternionic,
    RzParamodular,
    WeylEo,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::DlPartition => Suite::DlPartition,
            SuiteArg::DlComponents => Suite::DlComponents,
            SuiteArg::BuildingBall => Suite::BuildingBall,
            SuiteArg::RzQuaternionic => Suite::RzQuaternionic,
            SuiteArg::RzParamodular => Suite::RzParamodular,
            SuiteArg::WeylEo => Suite::WeylEo,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Desk-scale checks of Bruhat-Tits strata over small primes.
#[derive(Parser, Debug)]
#[command(name = "stratalab", version)]
struct Args {
    suite: SuiteArg,
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long = "deg", default_value_t = 1)]
    deg: usize,
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// p-adic precision m; defaults to 2 radius + 4
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// record elapsed_ms (reports are then no longer byte-stable)
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = match SuiteConfig::new(args.suite.into(), args.p, args.deg, args.radius, args.precision) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("stratalab: {e}");
            return ExitCode::from(2);
        }
    };
    cfg.timings = args.timings;
    let report = run_suite(&cfg);
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let bytes = emit_report(&report, format);
    let written = match &args.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("stratalab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
