use crate::rational::Rational;

use super::{CoarseError, Grain};

/// How reals outside every listed grain are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Coverage {
    /// Every uncovered real is its own singleton grain.
    #[default]
    ImplicitFinest,
    /// Uncovered reals are an error.
    Strict,
}

/// A player's perception resolution: sorted, pairwise disjoint grains.
///
/// Only the explicitly listed grains are stored. Under
/// [`Coverage::ImplicitFinest`] the gaps between them are filled with
/// singletons, so every real still lies in exactly one grain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    grains: Vec<Grain>,
    coverage: Coverage,
}

impl Partition {
    /// All singletons: the identity perception.
    pub fn finest() -> Partition {
        Partition {
            grains: Vec::new(),
            coverage: Coverage::ImplicitFinest,
        }
    }

    /// The single grain `(-inf, +inf)`.
    pub fn lowest() -> Partition {
        Partition {
            grains: vec![Grain::whole_line()],
            coverage: Coverage::ImplicitFinest,
        }
    }

    /// Validates and sorts a grain list.
    ///
    /// Errors name grains by their position in `grains` as given.
    pub fn new(grains: Vec<Grain>, coverage: Coverage) -> Result<Partition, CoarseError> {
        for (i, g) in grains.iter().enumerate() {
            if let Err(reason) = g.check() {
                return Err(CoarseError::EmptyInterval {
                    index: i,
                    grain: g.to_string(),
                    reason,
                });
            }
        }
        for i in 0..grains.len() {
            for j in i + 1..grains.len() {
                if grains[i].overlaps(&grains[j]) {
                    return Err(CoarseError::OverlappingGrains {
                        first: i,
                        second: j,
                        grains: (grains[i].to_string(), grains[j].to_string()),
                    });
                }
            }
        }
        let mut grains = grains;
        grains.sort_by(|a, b| a.cmp_start(b));
        Ok(Partition { grains, coverage })
    }

    pub fn grains(&self) -> &[Grain] {
        &self.grains
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    /// True for a partition that perceives every value exactly.
    pub fn is_finest(&self) -> bool {
        self.coverage == Coverage::ImplicitFinest
            && self.grains.iter().all(|g| matches!(g, Grain::Singleton(_)))
    }

    /// Index of the listed grain containing `x`, if any.
    pub fn locate(&self, x: &Rational) -> Option<usize> {
        // Grains are sorted by start and disjoint, so only the last grain
        // starting at or before `x` can contain it.
        let candidates = self.grains.partition_point(|g| g.starts_at_or_before(x));
        let idx = candidates.checked_sub(1)?;
        self.grains[idx].contains(x).then_some(idx)
    }

    /// The coarse-graining map: the unique grain holding `x`.
    pub fn coarsen(&self, x: &Rational) -> Result<Grain, CoarseError> {
        match self.locate(x) {
            Some(idx) => Ok(self.grains[idx].clone()),
            None => match self.coverage {
                Coverage::ImplicitFinest => Ok(Grain::Singleton(x.clone())),
                Coverage::Strict => Err(CoarseError::Uncovered(x.clone())),
            },
        }
    }

    /// `emp(coarsen(x))`, the perceived value of `x`.
    pub fn perceive(&self, x: &Rational) -> Result<Rational, CoarseError> {
        self.coarsen(x)?.emp()
    }
}

impl Default for Partition {
    fn default() -> Self {
        Partition::finest()
    }
}
