//! `fusegraph`: command-line front end for the fusion-grammar deciders.

mod commands;
mod error;
mod load;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fusegraph::membership::Affine;

use crate::output::{render_error, Format};

#[derive(Parser, Debug)]
#[command(
    name = "fusegraph",
    version,
    about = "Decision procedures for fusion grammars"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Report wall-clock time of the decision (output is then not reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a grammar, hypergraph or net document.
    Validate {
        file: PathBuf,
        /// Resolve hypergraph labels in this grammar's alphabet.
        #[arg(long)]
        grammar: Option<PathBuf>,
    },
    /// Is the hypergraph a member of the markerless grammar's language?
    Member { grammar: PathBuf, target: PathBuf },
    /// Is the grammar's language non-empty?
    Nonempty { grammar: PathBuf },
    /// Membership for a grammar with affine marker and connector bounds.
    BoundedMember {
        grammar: PathBuf,
        target: PathBuf,
        /// Marker bound `c0,c1`, meaning c0 + c1·|X|; overrides the document.
        #[arg(long, value_parser = parse_affine)]
        fm: Option<Affine>,
        /// Connector bound `c0,c1`; overrides the document.
        #[arg(long, value_parser = parse_affine)]
        fk: Option<Affine>,
    },
    /// Is the vector the Parikh image of some member?
    Parikh {
        grammar: PathBuf,
        /// Terminal counts, e.g. `a=1,b=0`; unnamed terminals count 0.
        #[arg(long)]
        vector: String,
        /// Skip the bounded search for a connection-preservation violation.
        #[arg(long)]
        assume_connection_preserving: bool,
        /// Include the context-free productions in the output.
        #[arg(long)]
        emit_cfg: bool,
    },
    /// Bounded derivation search, for a target or for all members.
    Derive {
        grammar: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_copies: usize,
        #[arg(long, default_value_t = 3)]
        max_pairs: usize,
    },
    /// Graphviz DOT for a hypergraph, a grammar's start graph or a fusion net.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        grammar: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Member { .. } => "member",
            Command::Nonempty { .. } => "nonempty",
            Command::BoundedMember { .. } => "bounded-member",
            Command::Parikh { .. } => "parikh",
            Command::Derive { .. } => "derive",
            Command::ExportDot { .. } => "export-dot",
        }
    }
}

fn parse_affine(s: &str) -> Result<Affine, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [c0, c1] = parts[..] else {
        return Err(format!("expected `c0,c1`, got `{s}`"));
    };
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
    Ok(Affine::new(num(c0)?, num(c1)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = commands::run(&cli);
    let mut stdout = std::io::stdout().lock();
    let code = match result {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            out.code
        }
        Err(e) => {
            let (text, to_stdout) = render_error(name, &e, cli.format);
            if to_stdout {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = std::io::stderr().write_all(text.as_bytes());
            }
            e.exit_code()
        }
    };
    ExitCode::from(code)
}
