//! Command-line front end: rendering, caching, self-checks and the
//! subcommand implementations behind the `motivic` binary.

pub mod cache;
pub mod checks;
pub mod commands;
pub mod render;

use motivic_core::CoreError;

/// Process exit status for an error: 2 for violated preconditions and bad
/// input, 3 when the working precision ran out, 1 otherwise.
pub fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::PrecisionExhausted { .. } => 3,
        CoreError::Parse(_) => 2,
        e if e.is_precondition() => 2,
        _ => 1,
    }
}
