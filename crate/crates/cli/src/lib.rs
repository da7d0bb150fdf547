//! Library side of the `sc` binary: command handlers, the experiment runners,
//! and the invariant-check harness, kept callable from integration tests.

pub mod check;
pub mod cli;
pub mod commands;
pub mod experiment;

use sc_core::ScError;

/// Documented exit codes: 0 ok, 1 invariant failure, 2 input error,
/// 3 numerical failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Maps an error to its exit code and one-word kind.
pub fn classify(err: &ScError) -> (i32, &'static str) {
    match err {
        ScError::NotSymmetric(_)
        | ScError::ConvergenceFailure
        | ScError::Numerical(_)
        | ScError::SingularFilter { .. }
        | ScError::ZeroReference => (EXIT_NUMERICAL, "numerical"),
        _ => (EXIT_INPUT, "input"),
    }
}

/// Dispatches a parsed command line, returning the process exit code.
pub fn run(cli: cli::Cli) -> Result<i32, ScError> {
    use cli::{Command, DesignAction, ExperimentAction, FilterAction};
    let outcome = match &cli.command {
        Command::Build(args) => commands::build(args)?,
        Command::Spectrum(args) => commands::spectrum(args)?,
        Command::Filter {
            action: FilterAction::Apply(args),
        } => commands::filter_apply(args)?,
        Command::Decompose(args) => commands::decompose(args)?,
        Command::Design { action } => match action {
            DesignAction::FitResponse(args) => commands::design_fit_response(args)?,
            DesignAction::FitBank(args) => commands::design_fit_bank(args)?,
        },
        Command::Experiment { action } => match action {
            ExperimentAction::Fit(args) => commands::experiment_fit(args)?,
            ExperimentAction::Diffuse(args) => commands::experiment_diffuse(args)?,
        },
        Command::Check(args) => commands::run_check(args)?,
    };
    Ok(match outcome {
        commands::Outcome::Ok => EXIT_OK,
        commands::Outcome::InvariantFailure => EXIT_INVARIANT,
    })
}
