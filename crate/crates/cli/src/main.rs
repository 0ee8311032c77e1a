use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k3rigid::{
    cmd_check_map, cmd_classify, cmd_dot, cmd_genus_equal, cmd_lattice, cmd_rigidity, render, CliError, Report,
    RigidityCommand, RigidityReport,
};

#[derive(Parser)]
#[command(name = "k3rigid", version, about = "Exact checks for elliptic K3 surfaces, their automorphisms and curve lattices")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kodaira fibers of a Weierstrass model.
    Classify {
        surface: String,
        /// Remove non-minimal linear places first.
        #[arg(long)]
        minimalize: bool,
    },
    /// Check that a named map is an automorphism and report its action on the 2-form.
    CheckMap { surface: String, map: String },
    /// Actions on a curve configuration.
    Rigidity {
        graph: String,
        #[command(subcommand)]
        command: RigidityCmd,
    },
    /// Lattice invariants and genus comparison.
    Lattice {
        #[command(subcommand)]
        command: LatticeCmd,
    },
}

#[derive(Subcommand)]
enum RigidityCmd {
    /// Weights and fixed locus of a named action.
    Census {
        action: String,
        /// Also write the DOT rendering here.
        #[arg(long)]
        dot: Option<String>,
    },
    /// The m-th power of an action.
    Power {
        action: String,
        m: u64,
        #[arg(long)]
        dot: Option<String>,
    },
    /// `a ∘ b`; either may be written `inv(name)`.
    Compose {
        a: String,
        b: String,
        #[arg(long)]
        dot: Option<String>,
    },
    /// All consistent actions up to graph automorphisms.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        /// Keep only actions with census `N,k`.
        #[arg(long, value_parser = parse_filter)]
        filter: Option<(usize, usize)>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// DOT rendering of the graph, or of an action on it.
    Dot { action: Option<String> },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Invariants of a lattice sum like `U(2)+D4+E8` or of a graph file.
    Show { lattice: String },
    /// Whether two lattices (sums or graph files) have the same genus.
    GenusEqual { left: String, right: String },
}

fn parse_filter(s: &str) -> Result<(usize, usize), String> {
    let (n, k) = s.split_once(',').ok_or("expected N,k")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((num(n)?, num(k)?))
}

fn emit<R: Report>(report: &R, json: bool) -> ExitCode {
    print!("{}", render(report, json));
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_dot(path: &Option<String>, report: &RigidityReport) -> Result<(), CliError> {
    if let (Some(path), RigidityReport::Action(r)) = (path, report) {
        fs::write(path, &r.dot).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Classify { surface, minimalize } => Ok(emit(&cmd_classify(&surface, minimalize)?, json)),
        Command::CheckMap { surface, map } => Ok(emit(&cmd_check_map(&surface, &map)?, json)),
        Command::Rigidity { graph, command } => {
            let (cmd, dot) = match command {
                RigidityCmd::Dot { action } => {
                    print!("{}", cmd_dot(&graph, action.as_deref())?);
                    return Ok(ExitCode::SUCCESS);
                }
                RigidityCmd::Census { action, dot } => (RigidityCommand::Census { action }, dot),
                RigidityCmd::Power { action, m, dot } => (RigidityCommand::Power { action, m }, dot),
                RigidityCmd::Compose { a, b, dot } => (RigidityCommand::Compose { left: a, right: b }, dot),
                RigidityCmd::Enumerate { n, c, filter, jobs } => (RigidityCommand::Enumerate { n, c, filter, jobs }, None),
            };
            let report = cmd_rigidity(&graph, &cmd)?;
            write_dot(&dot, &report)?;
            Ok(emit(&report, json))
        }
        Command::Lattice { command } => match command {
            LatticeCmd::Show { lattice } => Ok(emit(&cmd_lattice(&lattice)?, json)),
            LatticeCmd::GenusEqual { left, right } => Ok(emit(&cmd_genus_equal(&left, &right)?, json)),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
