//! Property suites over sampled instances, the finite-model oracle,
//! chain-limit checks, commutation probes and the bounded σ-closure engine.
//! Instances are drawn sequentially from a seeded generator and checked in
//! parallel, so reports depend only on the seed and the configuration.

mod chain;
mod closure;
mod oracle;
mod sample;
mod skeleton;
mod suites;

use rayon::prelude::*;
use thiserror::Error;

use crate::functions::FunctionError;
use crate::mbasis::BasisError;
use crate::ordinal::OrdinalError;
use crate::report::{Case, Report};
use crate::space::SpaceError;

pub use chain::{chain_limit_check, standard_chains, ChainFamily};
pub use closure::{
    bounded_sigma_closure, one_plichko_segment, plichko_suite, reorder_check, repro_mbaze_divna,
    sample_r_trees, ClosureRecord, PlichkoVerdict,
};
pub use oracle::{finite_model_oracle, FiniteModel};
pub use sample::{offset_pool, Sampler};
pub use skeleton::{
    check_nested_commutation, check_skeleton_axioms, commutation_suite, find_noncommuting_pair,
    skeleton_suite, NonCommuting,
};
pub use suites::{basis_suite, duality_suite, oracle_suite, sigma_suite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed chain: {0}")]
    Chain(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// Sampling budgets shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Number of sampled instances per suite.
    pub budget: usize,
    /// Generating intervals per sampled admissible set.
    pub max_atoms: usize,
    /// Generators per sampled step function.
    pub max_terms: usize,
    pub truncation: u64,
    pub depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 0,
            budget: 500,
            max_atoms: 4,
            max_terms: 4,
            truncation: 8,
            depth: 3,
        }
    }
}

impl SuiteConfig {
    fn report(&self, suite: &str, space: &str) -> Report {
        Report::new(suite, self.seed)
            .config("space", space)
            .config("budget", self.budget)
            .config("max_atoms", self.max_atoms)
            .config("max_terms", self.max_terms)
    }
}

fn error_case(e: VerifyError) -> Case {
    Case::judged([], "no error", e.to_string(), false)
}

/// Checks every instance in parallel and appends the cases in order.
fn run_cases<T: Sync>(
    report: &mut Report,
    instances: &[T],
    check: impl Fn(&T) -> Result<Case, VerifyError> + Sync,
) {
    let cases: Vec<Case> = instances
        .par_iter()
        .map(|i| check(i).unwrap_or_else(error_case))
        .collect();
    report.extend(cases);
}
