use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use revzeta::error::Error;

mod commands;

/// Fixed-point counts, generating functions and zeta functions of reversal
/// systems over shifts of finite type and sofic shifts.
///
/// SYSTEM is a path to a JSON system document or the name of a built-in
/// system (see `revzeta example --list`).
///
/// Exit status: 0 success, 1 usage error, 2 invalid system, 3 work budget
/// exceeded (raise it with REVZETA_BUDGET), 4 internal consistency failure.
#[derive(Debug, Parser)]
#[command(name = "revzeta", version)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining identities; for sofic systems build the joint
    /// state chain and print its certificate.
    Validate { system: String },
    /// Table of f(m, 2l) from every applicable backend.
    Counts {
        system: String,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
    },
    /// Generating functions g_{2k} and h_{2d}.
    Gf {
        system: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Ordinary)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Also print the ordinary generating functions in closed form.
        #[arg(long)]
        rational: bool,
    },
    /// Zeta functions as truncated series with their factors.
    Zeta {
        system: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ZetaKind::Lind)]
        kind: ZetaKind,
    },
    /// Finite-index subgroups of G_2r.
    Subgroups {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        index_max: usize,
        /// Confirm each index by coset enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Joint state chain of a sofic system and its certificate.
    Jsc { system: String },
    /// Compare every pair of backends and report the first mismatch.
    Crosscheck {
        system: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Print or write a built-in system as a JSON document.
    Example {
        #[arg(default_value = revzeta::fixtures::EXAMPLE_6)]
        name: String,
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
        /// List the built-in names.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Log,
    Ordinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Product,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaKind {
    Lind,
    ArtinMazur,
    Flip,
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
    let json = cli.json;
    match commands::run(cli) {
        Ok(out) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => report_error(&e, json),
    }
}

fn report_error(e: &Error, json: bool) -> ExitCode {
    let code = e.exit_code();
    if json {
        let doc = serde_json::json!({ "error": e.to_string(), "exit_code": code });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
    }
    eprintln!("error: {e}");
    ExitCode::from(code as u8)
}
