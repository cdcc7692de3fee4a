//! Grim-trigger cooperation in the infinitely repeated stage game.
//!
//! A player compares cooperating forever with defecting once and being
//! punished forever after. The discount factor at which the two are equal
//! depends on the matrix the comparison is read from, so players with
//! different resolutions can disagree about whether cooperation holds.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::game::{CoarseGame, Game, GameError, Perspective};
use crate::rational::{to_literal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepeatedError {
    #[error("discount factor {} is outside [0, 1)", to_literal(.0))]
    InvalidDiscount(Rational),
    /// Payoffs are kept as exact literals.
    #[error("player {player}: defection payoff {temptation} does not exceed punishment payoff {punishment}")]
    DegenerateRoles {
        player: String,
        temptation: String,
        punishment: String,
    },
    #[error("role label {label:?} is not a strategy of player {player}")]
    RoleLabelMissing { player: String, label: String },
    #[error("repeated-game analysis needs a two-player stage game, got {0} players")]
    NotTwoPlayer(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn check_discount(delta: &Rational) -> Result<(), RepeatedError> {
    if delta.is_negative() || *delta >= Rational::one() {
        Err(RepeatedError::InvalidDiscount(delta.clone()))
    } else {
        Ok(())
    }
}

/// `first + delta * rest / (1 - delta)`: value of receiving `first` now and
/// `rest` in every later period.
pub fn discounted_value(
    first: &Rational,
    rest: &Rational,
    delta: &Rational,
) -> Result<Rational, RepeatedError> {
    check_discount(delta)?;
    Ok(first + delta * rest / (Rational::one() - delta))
}

/// Cooperate and defect strategy indices for each of the two players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub cooperate: [usize; 2],
    pub defect: [usize; 2],
}

impl Roles {
    /// Looks labels up per player: `labels[k] = (cooperate, defect)`.
    pub fn from_labels<S: AsRef<str>>(g: &Game, labels: &[(S, S)]) -> Result<Roles, RepeatedError> {
        if g.num_players() != 2 {
            return Err(RepeatedError::NotTwoPlayer(g.num_players()));
        }
        if labels.len() != 2 {
            return Err(GameError::PerPlayerArity {
                what: "role labels",
                expected: 2,
                found: labels.len(),
            }
            .into());
        }
        let find = |k: usize, label: &str| {
            g.strategies(k)
                .iter()
                .position(|s| s == label)
                .ok_or_else(|| RepeatedError::RoleLabelMissing {
                    player: g.players()[k].clone(),
                    label: label.to_string(),
                })
        };
        Ok(Roles {
            cooperate: [find(0, labels[0].0.as_ref())?, find(1, labels[1].0.as_ref())?],
            defect: [find(0, labels[0].1.as_ref())?, find(1, labels[1].1.as_ref())?],
        })
    }

    /// The same two labels for both players.
    pub fn shared(g: &Game, cooperate: &str, defect: &str) -> Result<Roles, RepeatedError> {
        Roles::from_labels(g, &[(cooperate, defect), (cooperate, defect)])
    }
}

/// The three stage payoffs that decide grim-trigger cooperation for one
/// player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRoles {
    pub player: usize,
    /// Both cooperate.
    pub mutual_cooperation: Rational,
    /// This player defects while the other cooperates.
    pub temptation: Rational,
    /// Both defect.
    pub punishment: Rational,
}

impl StageRoles {
    pub fn read(g: &Game, roles: &Roles, k: usize) -> Result<StageRoles, RepeatedError> {
        if g.num_players() != 2 {
            return Err(RepeatedError::NotTwoPlayer(g.num_players()));
        }
        g.check_player(k)?;
        let at = |own: usize, other: usize| {
            let mut p = [0usize; 2];
            p[k] = own;
            p[1 - k] = other;
            g.payoff(&p, k).clone()
        };
        let (c, d) = (roles.cooperate, roles.defect);
        Ok(StageRoles {
            player: k,
            mutual_cooperation: at(c[k], c[1 - k]),
            temptation: at(d[k], c[1 - k]),
            punishment: at(d[k], d[1 - k]),
        })
    }

    /// Temptation above cooperation above punishment.
    pub fn is_meaningful(&self) -> bool {
        self.temptation > self.mutual_cooperation && self.mutual_cooperation > self.punishment
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdClass {
    /// At or below zero: any patience sustains cooperation.
    AlwaysCooperate,
    Interior,
    /// At or above one: no discount factor sustains cooperation.
    NeverCooperate,
}

impl fmt::Display for ThresholdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdClass::AlwaysCooperate => "always-cooperate",
            ThresholdClass::Interior => "interior",
            ThresholdClass::NeverCooperate => "never-cooperate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    pub value: Rational,
    pub class: ThresholdClass,
}

/// `(temptation - cooperation) / (temptation - punishment)`, unclamped.
pub fn critical_delta(roles: &StageRoles, player_name: &str) -> Result<Threshold, RepeatedError> {
    let denom = &roles.temptation - &roles.punishment;
    if !denom.is_positive() {
        return Err(RepeatedError::DegenerateRoles {
            player: player_name.to_string(),
            temptation: to_literal(&roles.temptation),
            punishment: to_literal(&roles.punishment),
        });
    }
    let value = (&roles.temptation - &roles.mutual_cooperation) / denom;
    let class = if !value.is_positive() {
        ThresholdClass::AlwaysCooperate
    } else if value >= Rational::one() {
        ThresholdClass::NeverCooperate
    } else {
        ThresholdClass::Interior
    };
    Ok(Threshold { value, class })
}

/// True iff a player with discount factor `delta` prefers to keep
/// cooperating.
pub fn cooperation_verdict(threshold: &Rational, delta: &Rational) -> Result<bool, RepeatedError> {
    check_discount(delta)?;
    Ok(delta >= threshold)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdOutcome {
    Threshold(Threshold),
    /// Defection pays no more than punishment in this matrix.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdEntry {
    pub perspective: Perspective,
    pub player: usize,
    pub roles: StageRoles,
    pub outcome: ThresholdOutcome,
}

impl ThresholdEntry {
    pub fn threshold(&self) -> Option<&Rational> {
        match &self.outcome {
            ThresholdOutcome::Threshold(t) => Some(&t.value),
            ThresholdOutcome::Degenerate => None,
        }
    }
}

/// Half-open interval `[lo, hi)` of discount factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscountInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl DiscountInterval {
    pub fn contains(&self, delta: &Rational) -> bool {
        *delta >= self.lo && *delta < self.hi
    }
}

impl fmt::Display for DiscountInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", to_literal(&self.lo), to_literal(&self.hi))
    }
}

/// Critical discount factors for every player, read from the base matrix
/// and from each player's perceived matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscountAnalysis {
    pub roles: Roles,
    /// Perspective-major: base first, then each perceived matrix, each with
    /// one entry per player.
    pub entries: Vec<ThresholdEntry>,
}

impl DiscountAnalysis {
    pub fn entry(&self, perspective: Perspective, player: usize) -> Option<&ThresholdEntry> {
        self.entries
            .iter()
            .find(|e| e.perspective == perspective && e.player == player)
    }

    pub fn perspectives(&self) -> Vec<Perspective> {
        let mut out: Vec<Perspective> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.perspective) {
                out.push(e.perspective);
            }
        }
        out
    }

    /// Whether `perspective` predicts that every player keeps cooperating
    /// at `delta`. `None` when some player's roles are degenerate there.
    pub fn perspective_verdict(
        &self,
        perspective: Perspective,
        delta: &Rational,
    ) -> Result<Option<bool>, RepeatedError> {
        check_discount(delta)?;
        let mut all = true;
        for e in self.entries.iter().filter(|e| e.perspective == perspective) {
            match e.threshold() {
                Some(t) => all &= cooperation_verdict(t, delta)?,
                None => return Ok(None),
            }
        }
        Ok(Some(all))
    }
}

pub fn perspective_thresholds(cg: &CoarseGame, roles: &Roles) -> Result<DiscountAnalysis, RepeatedError> {
    let base = cg.base();
    if base.num_players() != 2 {
        return Err(RepeatedError::NotTwoPlayer(base.num_players()));
    }
    let mut entries = Vec::new();
    for perspective in cg.perspectives() {
        let g = cg.game_for(perspective)?;
        for k in 0..2 {
            let stage = StageRoles::read(&g, roles, k)?;
            let outcome = match critical_delta(&stage, &base.players()[k]) {
                Ok(t) => ThresholdOutcome::Threshold(t),
                Err(RepeatedError::DegenerateRoles { .. }) => ThresholdOutcome::Degenerate,
                Err(e) => return Err(e),
            };
            entries.push(ThresholdEntry {
                perspective,
                player: k,
                roles: stage,
                outcome,
            });
        }
    }
    Ok(DiscountAnalysis {
        roles: roles.clone(),
        entries,
    })
}

/// Discount factors at which perspective `a` says player `k` cooperates but
/// perspective `b` says it does not.
pub fn misalignment(
    analysis: &DiscountAnalysis,
    a: Perspective,
    b: Perspective,
    k: usize,
) -> Option<DiscountInterval> {
    let ta = analysis.entry(a, k)?.threshold()?;
    let tb = analysis.entry(b, k)?.threshold()?;
    let lo = ta.max(&Rational::zero()).clone();
    let hi = tb.min(&Rational::one()).clone();
    (lo < hi).then_some(DiscountInterval { lo, hi })
}
