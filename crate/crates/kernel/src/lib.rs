//! Self-contained mathematical-programming kernel: a bounded revised simplex
//! with dual extraction and warm starts, and a depth-first branch and bound
//! for binary programs.
//!
//! Callers talk to the kernel through [`MipBackend`] so an external solver can
//! be swapped in without touching them.

mod binary;
mod lp_format;
mod problem;
mod simplex;

use std::time::Duration;

pub use binary::{solve_binary, BinaryOptions, BinarySolution, BinaryStatus};
pub use lp_format::to_lp_format;
pub use problem::{Constraint, LinearProgram, Sense, Variable};
pub use simplex::{
    solve_lp, solve_lp_warm, solve_lp_with, Basis, BasisStatus, LpSolution, LpStatus, SimplexOptions,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("numerical stall: {0}")]
    NumericalStall(String),
}

/// Solver backend used by the optimization layers.
pub trait MipBackend: Send + Sync {
    fn name(&self) -> &str;

    fn solve_lp(&self, lp: &LinearProgram, warm: Option<&Basis>) -> Result<LpSolution, KernelError>;

    fn solve_binary(
        &self,
        lp: &LinearProgram,
        time_limit: Option<Duration>,
        opts: &BinaryOptions,
    ) -> Result<BinarySolution, KernelError>;
}

/// The in-crate simplex and branch-and-bound.
#[derive(Debug, Clone, Default)]
pub struct EmbeddedKernel {
    pub simplex: SimplexOptions,
}

impl MipBackend for EmbeddedKernel {
    fn name(&self) -> &str {
        "embedded"
    }

    fn solve_lp(&self, lp: &LinearProgram, warm: Option<&Basis>) -> Result<LpSolution, KernelError> {
        solve_lp_with(lp, warm, &self.simplex)
    }

    fn solve_binary(
        &self,
        lp: &LinearProgram,
        time_limit: Option<Duration>,
        opts: &BinaryOptions,
    ) -> Result<BinarySolution, KernelError> {
        let opts = BinaryOptions {
            time_limit: time_limit.or(opts.time_limit),
            ..opts.clone()
        };
        solve_binary(lp, &opts)
    }
}
