//! Comparison optimizers sharing the Yi optimizer's budget, bounds and repair
//! contracts.

mod de;
mod pso;
mod random;
mod sa;

use thiserror::Error;

use crate::objectives::ObjectiveError;

pub use de::{de_optimize, DEConfig};
pub use pso::{pso_optimize, PSOConfig};
pub use random::random_search;
pub use sa::{metropolis_acceptance, sa_optimize, SAConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

fn check_budget(max_fe: u64) -> Result<(), BaselineError> {
    if max_fe == 0 {
        return Err(BaselineError::InvalidConfig(
            "max_fe must be at least 1".into(),
        ));
    }
    Ok(())
}
