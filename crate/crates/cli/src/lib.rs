//! Command implementations, configuration handling and the acceptance
//! checks behind the `oscgauss` binary.

pub mod commands;
pub mod config;
pub mod criteria;

use oscgauss::Error;

pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Exit status for a failed command: 3 when a construction broke down, 4 for
/// I/O, 2 for everything else (tolerance failures and rejected inputs).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DegenerateFunctional { .. }
        | Error::IllConditioned { .. }
        | Error::Precision(_)
        | Error::NonConvergence { .. }
        | Error::TraceDiverged { .. }
        | Error::NonFinite(_)
        | Error::Pole(_) => EXIT_CONSTRUCTION,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_TOLERANCE,
    }
}
