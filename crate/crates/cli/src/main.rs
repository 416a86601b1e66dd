//! `modcat`: JSON in, exact JSON out.
//!
//! Exit status 0 on success, 1 on a domain error, 2 on malformed input.
//! Errors are written to standard output as {"error": {code, message, context}}.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::Output;
use io::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "modcat", version, about = "Exact metric groups, group cohomology and modular data")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Lower the size cap of the command; values above its hard ceiling are rejected.
    #[arg(long, global = true)]
    max_order: Option<u64>,
    /// Suppress the summary line on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss sum τ± of a metric group.
    Gauss {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
    },
    /// Witt reduction to an anisotropic residue, optionally along a Γ-invariant first step.
    Witt {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// C_p^± verdict for modular data or for the pointed category of a metric group.
    Classify {
        #[arg(long, conflicts_with = "form")]
        data: Option<PathBuf>,
        #[arg(long)]
        form: Option<PathBuf>,
        #[arg(short)]
        p: Option<u64>,
    },
    /// Modular data of a twisted double.
    Double {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
        /// Also compute fusion rules by the Verlinde formula.
        #[arg(long)]
        fusion: bool,
    },
    /// Modular data of the pointed category of a metric group.
    Pointed {
        #[arg(long)]
        form: PathBuf,
    },
    /// Lift a 3-cocycle ω through the induced module to a 2-cocycle f.
    Lift {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: u32,
        #[arg(long)]
        omega: PathBuf,
    },
    /// The group extension defined by a lifted 2-cocycle.
    Extend {
        #[arg(long)]
        lift: PathBuf,
    },
    /// Recover ω′ from an extension and compare it with ω.
    Associator {
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Central extension, ω and β of an outer action on a class-two group.
    Obstruct {
        #[arg(long)]
        outer_action: PathBuf,
    },
    /// Finite model of the fake Heisenberg group over F_{p^m}.
    Heisenberg {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        m: u32,
        /// Include the element list and multiplication table.
        #[arg(long)]
        table: bool,
    },
    /// Hⁿ(Γ, M) with representative cocycles.
    Cohomology {
        #[arg(long)]
        module: PathBuf,
        #[arg(short)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gauss { .. } => "gauss",
            Command::Witt { .. } => "witt",
            Command::Classify { .. } => "classify",
            Command::Double { .. } => "double",
            Command::Pointed { .. } => "pointed",
            Command::Lift { .. } => "lift",
            Command::Extend { .. } => "extend",
            Command::Associator { .. } => "associator",
            Command::Obstruct { .. } => "obstruct",
            Command::Heisenberg { .. } => "heisenberg",
            Command::Cohomology { .. } => "cohomology",
        }
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let max = cli.max_order;
    match &cli.command {
        Command::Gauss { form, sign } => {
            let s = match sign {
                SignArg::Plus => modcat::metric::Sign::Plus,
                SignArg::Minus => modcat::metric::Sign::Minus,
            };
            commands::gauss(form, s, max)
        }
        Command::Witt { form, module } => commands::witt(form, module.as_deref(), max),
        Command::Classify { data, form, p } => commands::classify(data.as_deref(), form.as_deref(), *p, max),
        Command::Double { group, omega, fusion } => commands::double(group, omega.as_deref(), *fusion, max),
        Command::Pointed { form } => commands::pointed(form, max),
        Command::Lift { gamma, p, n, omega } => commands::lift(gamma, *p, *n, omega, max),
        Command::Extend { lift } => commands::extend(lift, max),
        Command::Associator { extension, omega } => commands::associator(extension, omega.as_deref(), max),
        Command::Obstruct { outer_action } => commands::obstruct(outer_action, max),
        Command::Heisenberg { p, m, table } => commands::heisenberg(*p, *m, *table, max),
        Command::Cohomology { module, n } => commands::cohomology(module, *n, max),
    }
}

fn emit(cli: Option<&Cli>, text: &str) -> std::io::Result<()> {
    match cli.and_then(|c| c.output.as_ref()) {
        Some(path) => std::fs::write(path, text),
        None => print_stdout(text),
    }
}

/// A closed pipe downstream is not an error of ours.
fn print_stdout(text: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

fn print_json(v: &serde_json::Value) {
    let _ = print_stdout(&serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = CliError::malformed(e.kind().to_string(), json!({"usage": e.to_string().trim()}));
            print_json(&err.to_json());
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    match run(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.doc).expect("json");
            if let Err(e) = emit(Some(&cli), &text) {
                let err = CliError::malformed(format!("cannot write output: {e}"), json!({"command": name}));
                print_json(&err.to_json());
                return ExitCode::from(2);
            }
            if !cli.quiet {
                eprintln!("{name}: {}", out.summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut doc = e.to_json();
            doc["error"]["context"]["command"] = json!(name);
            print_json(&doc);
            if !cli.quiet {
                eprintln!("{name}: error: {}", doc["error"]["message"].as_str().unwrap_or(""));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
