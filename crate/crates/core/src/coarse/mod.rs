//! Grains, partitions of the real payoff line, and the two maps a player
//! applies to a payoff: coarse-graining (value to grain) and the
//! entropy-maximizing preprocessing (grain to representative value).

mod grain;
mod partition;

use thiserror::Error;

use crate::rational::Rational;

pub use grain::{grain_compare, Endpoint, Grain};
pub use partition::{Coverage, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarseError {
    #[error("value {0} is not covered by any grain of a strict partition")]
    Uncovered(Rational),
    #[error("grain {0} is unbounded and has no midpoint")]
    UnboundedGrain(String),
    #[error("grains {0} and {1} overlap and are not comparable")]
    Incomparable(String, String),
    #[error("grains #{first} {} and #{second} {} overlap", grains.0, grains.1)]
    OverlappingGrains {
        first: usize,
        second: usize,
        grains: (String, String),
    },
    #[error("grain #{index} {grain} is invalid: {reason}")]
    EmptyInterval {
        index: usize,
        grain: String,
        reason: &'static str,
    },
    #[error("grain {grain} is invalid: {reason}")]
    InvalidGrain { grain: String, reason: &'static str },
}

/// The grain of `p` that contains `x`.
pub fn coarsen(p: &Partition, x: &Rational) -> Result<Grain, CoarseError> {
    p.coarsen(x)
}

/// The entropy-maximizing representative of a grain.
pub fn emp(g: &Grain) -> Result<Rational, CoarseError> {
    g.emp()
}

pub fn validate_partition(grains: Vec<Grain>, coverage: Coverage) -> Result<Partition, CoarseError> {
    Partition::new(grains, coverage)
}
