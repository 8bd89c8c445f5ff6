//! `scst`: load a four-manifold description and run the checkers on it.

mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "scst",
    version,
    about = "Seiberg-Witten series and superconformal simple type checks"
)]
struct Cli {
    /// Emit the JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// `builtin:NAME` or a path to a JSON manifold document
    input: String,
}

#[derive(Args, Debug, Clone)]
struct WArg {
    /// Characteristic class w, comma-separated lattice coordinates
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic numbers, standardness, simple type, table symmetry
    Info(Source),
    /// The polynomials SW^{w,i}
    Sw {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        w: WArg,
        /// Inclusive range `a..b`, or a single index
        #[arg(long)]
        i: Option<String>,
    },
    /// Superconformal simple type verdict
    Scst {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        w: WArg,
    },
    /// Count of basic classes up to sign against c/2
    Bound(Source),
    /// Blow up r times and compare series and verdicts
    Blowup {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        w: WArg,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Donaldson polynomial from the Seiberg-Witten series
    Donaldson {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        w: WArg,
        #[arg(long)]
        delta: i64,
        #[arg(long, default_value_t = 0)]
        m: i64,
    },
    /// Replay the inductive vanishing argument and emit a certificate
    Replay {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        w: WArg,
    },
}

fn run(cli: &Cli) -> Result<(String, String, Outcome), Vec<String>> {
    let (name, source) = match &cli.command {
        Command::Info(s) | Command::Bound(s) => (command_name(&cli.command), s),
        Command::Sw { source, .. }
        | Command::Scst { source, .. }
        | Command::Blowup { source, .. }
        | Command::Donaldson { source, .. }
        | Command::Replay { source, .. } => (command_name(&cli.command), source),
    };
    let loaded = input::load(&source.input)?;
    let m = &loaded.manifold;
    let outcome = match &cli.command {
        Command::Info(_) => commands::info(m),
        Command::Sw { w, i, .. } => commands::sw(m, &input::parse_w(m, w.w.as_deref())?, i.as_deref()),
        Command::Scst { w, .. } => commands::scst(m, &input::parse_w(m, w.w.as_deref())?),
        Command::Bound(_) => commands::bound(m),
        Command::Blowup { w, times, .. } => commands::blowup(m, &input::parse_w(m, w.w.as_deref())?, *times),
        Command::Donaldson { w, delta, m: mm, .. } => {
            commands::donaldson(m, &input::parse_w(m, w.w.as_deref())?, *delta, *mm)
        }
        Command::Replay { w, .. } => commands::replay(m, &input::parse_w(m, w.w.as_deref())?),
    }?;
    Ok((name.to_string(), loaded.digest, outcome))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Info(_) => "info",
        Command::Sw { .. } => "sw",
        Command::Scst { .. } => "scst",
        Command::Bound(_) => "bound",
        Command::Blowup { .. } => "blowup",
        Command::Donaldson { .. } => "donaldson",
        Command::Replay { .. } => "replay",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli) {
        Ok((name, digest, outcome)) => {
            let report = Report::new(name, args, digest, outcome);
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code())
        }
        Err(reasons) => {
            eprintln!("error: invalid input");
            for r in reasons {
                eprintln!("  - {r}");
            }
            ExitCode::from(2)
        }
    }
}
