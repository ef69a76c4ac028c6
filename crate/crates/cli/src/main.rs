mod commands;
mod inputs;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Semiring logics, BSS machines over semirings, and the compilers between them.
///
/// Exit status: 0 success, 1 negative result, 2 search or step bound
/// exceeded, 3 error. SCL_MAX_CANDIDATES caps every search budget.
#[derive(Parser, Debug)]
#[command(name = "scl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Search {
    /// Search universe: comma-separated literals (`#0,#1/2,#1`) or an
    /// integer range `0..3`. Defaults to the semiring's default universe.
    #[arg(long)]
    universe: Option<String>,
    /// Cap on candidates or search nodes.
    #[arg(long)]
    max_candidates: Option<u128>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Layer {
    Auto,
    Pl,
    Fo,
    Eso,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EsoSearch {
    /// Every literal map with values in the universe.
    Exhaustive,
    /// {0,1}-valued model-defining extensions only.
    ModelDefining,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Pl,
    Fo,
    Interpretation,
    Assignment,
}

#[derive(Subcommand, Debug)]
enum Reduction {
    /// Machine, input and step bound T to a propositional formula.
    Cook {
        machine: String,
        input: Vec<String>,
        #[arg(long)]
        steps: usize,
    },
    /// Machine and exponent z to an ESO sentence; with input values, also
    /// writes the input interpretation to --interpretation-out.
    Fagin {
        machine: String,
        input: Vec<String>,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        interpretation_out: Option<String>,
    },
    /// Propositional formula to an existential sentence over the constants.
    Etk {
        formula: String,
        #[arg(long)]
        semiring: Option<String>,
        /// Constant set X, same syntax as --universe; defaults to {0, 1}.
        #[arg(long)]
        consts: Option<String>,
        /// Also search for a satisfying valuation.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        search: Search,
    },
    /// Propositional formula to an equisatisfiable flat formula.
    Flatten {
        formula: String,
        #[arg(long)]
        semiring: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Semiring laws over a sample (default: the default universe).
    Axioms {
        #[arg(long)]
        semiring: String,
        #[arg(long)]
        sample: Option<String>,
    },
    /// Compares two formulas: propositional ones on every assignment over
    /// the universe, first-order ones on the given interpretation files.
    Equivalence {
        left: String,
        right: String,
        #[arg(long)]
        semiring: Option<String>,
        #[arg(long, value_enum, default_value_t = Layer::Auto)]
        layer: Layer,
        /// Interpretation files for first-order formulas.
        #[arg(long = "on", num_args = 1..)]
        samples: Vec<String>,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of a formula under an assignment or interpretation file.
    Eval {
        formula: String,
        valuation: String,
        #[arg(long)]
        semiring: Option<String>,
        #[arg(long, value_enum, default_value_t = Layer::Auto)]
        layer: Layer,
        /// ESO: interpretation file giving the quantified relations.
        #[arg(long)]
        witness: Option<String>,
        /// ESO without a witness: how to search extensions.
        #[arg(long, value_enum, default_value_t = EsoSearch::Exhaustive)]
        search_mode: EsoSearch,
        #[command(flatten)]
        search: Search,
    },
    /// Bounded search for an assignment with a nonzero value.
    Sat {
        formula: String,
        #[arg(long)]
        semiring: Option<String>,
        /// Also write the assignment found as an assignment file.
        #[arg(long)]
        assignment_out: Option<String>,
        #[command(flatten)]
        search: Search,
    },
    /// Runs a machine on input literals.
    Run {
        machine: String,
        input: Vec<String>,
        #[arg(long)]
        budget: u64,
        /// Print one line per step.
        #[arg(long)]
        trace: bool,
        /// Report add/mul steps with no neutral operand.
        #[arg(long)]
        non_arithmetic: bool,
        /// Report tape values outside this set (same syntax as --universe).
        #[arg(long)]
        closure: Option<String>,
    },
    /// Non-deterministic decision by enumerating guesses.
    DecideNondet {
        machine: String,
        input: Vec<String>,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        universe: Option<String>,
    },
    #[command(subcommand)]
    Reduce(Reduction),
    /// Reads the guess out of a satisfying assignment of a Cook formula.
    DecodeGuess {
        machine: String,
        input: Vec<String>,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        assignment: String,
    },
    /// Wraps a machine with a countdown of t(n) simulated steps.
    WrapClock {
        machine: String,
        /// Polynomial in n, e.g. `2*n^2 + n + 8`.
        #[arg(long)]
        poly: String,
    },
    /// Encodes an object as a string of semiring values.
    Encode {
        #[arg(value_enum)]
        kind: Kind,
        file: String,
        #[arg(long)]
        semiring: Option<String>,
    },
    /// Decodes the output of `encode`.
    Decode {
        #[arg(value_enum)]
        kind: Kind,
        file: String,
    },
    #[command(subcommand)]
    Check(Check),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let status = match commands::execute(cli.command, &mut out) {
        Ok(s) => s as u8,
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e:#}");
            return ExitCode::from(commands::error_status(&e));
        }
    };
    print!("{out}");
    ExitCode::from(status)
}
