//! `blo`: encode, corrupt, decode and check B-LO code instances.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blo::codes::corrupt_seeded;
use blo::demos::{describe_plan, Demo};
use blo::io::{
    format_candidate, format_codeword, format_grid_inline, parse_codeword, parse_instance,
    parse_message, parse_plan,
};
use blo::listdecode::{check_plan, list_decode_detailed};
use blo::{build_plan, BloInstance, Error, OracleBudget, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "blo",
    version,
    about = "Bivariate linear operator codes over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message file; prints the codeword (one column per line).
    Encode {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        message: PathBuf,
    },
    /// Replace `errors` random columns of a codeword with different vectors.
    Corrupt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        received: PathBuf,
        #[arg(long)]
        errors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List-decode a received word; prints "distance ; message" per candidate.
    Decode {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        received: PathBuf,
        /// Also print every kernel message, before filtering.
        #[arg(long)]
        emit_kernel: bool,
    },
    /// Report on each decoding condition for an instance and plan.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Run a built-in demo end to end.
    Demo {
        /// One of ppc7, ppc61, ppc61-bivariate, frs13.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum message-space size for the oracle cross-check.
        #[arg(long, default_value_t = 1 << 25)]
        budget: u128,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<BloInstance> {
    parse_instance(&read(path)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode { instance, message } => {
            let inst = load_instance(&instance)?;
            let msg = parse_message(&read(&message)?, &inst)?;
            print!("{}", format_codeword(&inst.encode(&msg)?));
        }
        Command::Corrupt {
            instance,
            received,
            errors,
            seed,
        } => {
            let inst = load_instance(&instance)?;
            let cw = parse_codeword(&read(&received)?, inst.field())?;
            let (bad, _) = corrupt_seeded(&cw, errors, seed)?;
            print!("{}", format_codeword(&bad));
        }
        Command::Decode {
            instance,
            plan,
            received,
            emit_kernel,
        } => {
            let inst = load_instance(&instance)?;
            let spec = parse_plan(&read(&plan)?)?;
            let plan = build_plan(&inst, spec.to_params(inst.field())?)?;
            let cw = parse_codeword(&read(&received)?, inst.field())?;
            let report = list_decode_detailed(&plan, &cw, emit_kernel)?;
            for c in &report.candidates {
                println!("{}", format_candidate(c));
            }
            if let Some(kernel) = &report.kernel {
                println!(
                    "# kernel: dimension {}, {} vectors",
                    report.kernel_dim,
                    kernel.len()
                );
                for m in kernel {
                    println!("# {}", format_grid_inline(m));
                }
            }
        }
        Command::Check { instance, plan } => {
            let inst = load_instance(&instance)?;
            let spec = parse_plan(&read(&plan)?)?;
            let check = check_plan(&inst, spec.to_params(inst.field())?);
            println!(
                "instance: q = {}, s = {}, n = {}, t = {}, k = {}, rate = {}",
                inst.field().size(),
                inst.s(),
                inst.n(),
                inst.t(),
                inst.k(),
                inst.rate()
            );
            for c in &check.conditions {
                match &c.outcome {
                    Ok(detail) => println!("{}: PASS ({detail})", c.label),
                    Err(detail) => println!("{}: FAIL ({detail})", c.label),
                }
            }
            match &check.plan {
                Ok(plan) => println!("plan: {}", describe_plan(plan)),
                Err(e) => {
                    println!("plan: FAIL ({e})");
                    return Err(e.clone());
                }
            }
        }
        Command::Demo { name, seed, budget } => {
            let demo: Demo = name.parse()?;
            let budget = OracleBudget::with_max(budget);
            print!("{}", demo.run(seed, budget)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
