//! Pure and mixed strategy profiles.

use std::fmt;

use num_traits::{One, Zero};

use crate::game::{Game, GameError};
use crate::rational::{to_literal, Rational};

/// One strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile(Vec<usize>);

impl PureProfile {
    pub fn new(game: &Game, indices: Vec<usize>) -> Result<PureProfile, GameError> {
        if indices.len() != game.num_players() {
            return Err(GameError::DimensionMismatch(format!(
                "profile has {} entries for {} players",
                indices.len(),
                game.num_players()
            )));
        }
        for (k, (&s, &count)) in indices.iter().zip(game.shape()).enumerate() {
            if s >= count {
                return Err(GameError::DimensionMismatch(format!(
                    "strategy index {s} out of range for player {}",
                    game.players()[k]
                )));
            }
        }
        Ok(PureProfile(indices))
    }

    /// Looks strategies up by name, one per player in player order.
    pub fn from_names<S: AsRef<str>>(game: &Game, names: &[S]) -> Result<PureProfile, GameError> {
        if names.len() != game.num_players() {
            return Err(GameError::DimensionMismatch(format!(
                "profile names {} strategies for {} players",
                names.len(),
                game.num_players()
            )));
        }
        let indices = names
            .iter()
            .enumerate()
            .map(|(k, n)| game.strategy_index(k, n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PureProfile(indices))
    }

    pub(crate) fn from_indices(indices: Vec<usize>) -> PureProfile {
        PureProfile(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, player: usize) -> usize {
        self.0[player]
    }

    /// Strategy names in player order.
    pub fn names<'g>(&self, game: &'g Game) -> Vec<&'g str> {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &s)| game.strategies(k)[s].as_str())
            .collect()
    }

    /// The same profile with player `k` switched to strategy `s`.
    pub fn deviate(&self, k: usize, s: usize) -> PureProfile {
        let mut v = self.0.clone();
        v[k] = s;
        PureProfile(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    EmptyVector(usize),
    NegativeProbability(usize),
    BadSum(usize, Rational),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::EmptyVector(k) => write!(f, "player #{k} has an empty probability vector"),
            ProfileError::NegativeProbability(k) => {
                write!(f, "player #{k} has a probability outside [0, 1]")
            }
            ProfileError::BadSum(k, s) => {
                write!(f, "player #{k} probabilities sum to {} instead of 1", to_literal(s))
            }
        }
    }
}

impl std::error::Error for ProfileError {}

/// Per player, a probability vector over that player's strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedProfile(Vec<Vec<Rational>>);

impl MixedProfile {
    pub fn new(vectors: Vec<Vec<Rational>>) -> Result<MixedProfile, ProfileError> {
        for (k, v) in vectors.iter().enumerate() {
            if v.is_empty() {
                return Err(ProfileError::EmptyVector(k));
            }
            if v.iter().any(|p| *p < Rational::zero() || *p > Rational::one()) {
                return Err(ProfileError::NegativeProbability(k));
            }
            let sum: Rational = v.iter().sum();
            if !sum.is_one() {
                return Err(ProfileError::BadSum(k, sum));
            }
        }
        Ok(MixedProfile(vectors))
    }

    /// Point masses on a pure profile.
    pub fn pure(game: &Game, profile: &PureProfile) -> MixedProfile {
        let vectors = game
            .shape()
            .iter()
            .zip(profile.indices())
            .map(|(&count, &s)| point_mass(count, s))
            .collect();
        MixedProfile(vectors)
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.0
    }

    pub fn player(&self, k: usize) -> &[Rational] {
        &self.0[k]
    }

    pub fn num_players(&self) -> usize {
        self.0.len()
    }

    /// Indices with positive probability for player `k`.
    pub fn support(&self, k: usize) -> Vec<usize> {
        self.0[k]
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// The pure profile when every vector is a point mass.
    pub fn as_pure(&self) -> Option<PureProfile> {
        self.0
            .iter()
            .map(|v| v.iter().position(|p| p.is_one()))
            .collect::<Option<Vec<_>>>()
            .map(PureProfile)
    }

    /// Replaces player `k`'s vector.
    pub fn with_player(&self, k: usize, vector: Vec<Rational>) -> Result<MixedProfile, ProfileError> {
        let mut v = self.0.clone();
        v[k] = vector;
        MixedProfile::new(v)
    }

    pub(crate) fn from_vectors_unchecked(vectors: Vec<Vec<Rational>>) -> MixedProfile {
        MixedProfile(vectors)
    }

    pub(crate) fn check_shape(&self, game: &Game) -> Result<(), GameError> {
        if self.0.len() != game.num_players()
            || self.0.iter().zip(game.shape()).any(|(v, &c)| v.len() != c)
        {
            return Err(GameError::DimensionMismatch(format!(
                "mixed profile shape {:?} does not match game shape {:?}",
                self.0.iter().map(Vec::len).collect::<Vec<_>>(),
                game.shape()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (i, p) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", to_literal(p))?;
            }
            write!(f, ")")?;
        }
        write!(f, ")")
    }
}

pub fn point_mass(count: usize, at: usize) -> Vec<Rational> {
    (0..count)
        .map(|i| if i == at { Rational::one() } else { Rational::zero() })
        .collect()
}
