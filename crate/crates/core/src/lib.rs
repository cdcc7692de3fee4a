//! Coarse-grained games in exact rational arithmetic.
//!
//! Players perceive payoffs through partitions of the real line into
//! grains. This crate models those partitions, builds each player's
//! perceived game, finds pure and mixed equilibria, compares the outcome a
//! player expects with the one realized, and analyses cooperation in
//! repeated play.

pub mod coarse;
pub mod document;
pub mod equilibrium;
pub mod game;
pub mod linalg;
pub mod lp;
pub mod perception;
pub mod profile;
pub mod rational;
pub mod repeated;
pub mod report;
pub mod scenarios;

pub use coarse::{Coverage, CoarseError, Endpoint, Grain, Partition};
pub use game::{CoarseGame, Game, GameError, Perspective, Preprocessing};
pub use profile::{MixedProfile, PureProfile};
pub use rational::Rational;
