//! Command-line driver: single runs, sweeps and slope fits.

pub mod instance;
pub mod run;
pub mod sweep;

pub use instance::{Algo, GenSpec};
pub use run::{run_once, InputError, RunConfig, RunOutcome, RunRecord};
pub use sweep::{fit, run_sweep, FitResult, SweepSpec, VerificationError};

/// Process exit status for an error: 2 for a failed verification, 3 for bad
/// input, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.chain().any(|e| e.is::<VerificationError>()) {
        return 2;
    }
    if err.chain().any(|e| e.is::<InputError>()) {
        return 3;
    }
    match err
        .chain()
        .find_map(|e| e.downcast_ref::<qgraph_core::Error>())
    {
        Some(qgraph_core::Error::Invariant(_)) | None => 1,
        Some(_) => 3,
    }
}
