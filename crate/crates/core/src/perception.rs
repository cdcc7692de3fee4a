//! What each player expects versus what actually happens.
//!
//! Every player solves its own perceived game and plays its component of the
//! equilibrium it picked. The realized profile stitches those components
//! together. Gain-loss differentials then compare, through some player's
//! lens (or the base matrix), a subject's payoff at the realized profile
//! against its payoff at the profile that was expected.

use thiserror::Error;

use crate::equilibrium::{self, mixed_equilibria_2p, verify_mixed, EquilibriumError};
use crate::game::{expected_payoff, CoarseGame, Game, GameError, Perspective};
use crate::profile::{MixedProfile, PureProfile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerceptionError {
    #[error("player {0} has several equilibria in its perceived game; a selection is required")]
    AmbiguousSelection(String),
    #[error("player {player} has no {kind} equilibrium to select in its perceived game")]
    NoEquilibrium { player: String, kind: &'static str },
    #[error("selection {index} for player {player} is out of range ({available} equilibria)")]
    SelectionOutOfRange {
        player: String,
        index: usize,
        available: usize,
    },
    #[error("the base game has {0} equilibria; a base expectation is required")]
    MultipleBaseEquilibria(usize),
    #[error("the base game has no {0} equilibrium")]
    NoBaseEquilibrium(&'static str),
    #[error("profile {profile} is not an equilibrium of the {matrix} matrix")]
    NotAnEquilibrium { profile: String, matrix: String },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// Which equilibrium notion a player solves its perceived game with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionKind {
    #[default]
    Pure,
    /// Two-player games only.
    Mixed,
}

impl SolutionKind {
    fn label(self) -> &'static str {
        match self {
            SolutionKind::Pure => "pure",
            SolutionKind::Mixed => "mixed",
        }
    }
}

/// How one player's expected equilibrium is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Selection {
    /// Only allowed when the equilibrium is unique.
    #[default]
    Auto,
    /// Position in the ordered equilibrium list of that player's game.
    Index(usize),
    /// An explicit profile; it must be an equilibrium of that game.
    Profile(MixedProfile),
}

impl From<Option<usize>> for Selection {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Selection::Auto, Selection::Index)
    }
}

/// Ordered equilibrium list of a matrix under `kind`, plus whether a
/// continuum was flagged (which makes `Auto` ambiguous).
fn candidates(g: &Game, kind: SolutionKind) -> Result<(Vec<MixedProfile>, bool), PerceptionError> {
    Ok(match kind {
        SolutionKind::Pure => (
            equilibrium::pure_equilibria(g)
                .iter()
                .map(|p| MixedProfile::pure(g, p))
                .collect(),
            false,
        ),
        SolutionKind::Mixed => {
            let sol = mixed_equilibria_2p(g)?;
            (sol.equilibria, !sol.degenerate.is_empty())
        }
    })
}

fn check_equilibrium(g: &Game, profile: &MixedProfile, matrix: String) -> Result<(), PerceptionError> {
    if verify_mixed(g, profile)? {
        Ok(())
    } else {
        Err(PerceptionError::NotAnEquilibrium {
            profile: profile.to_string(),
            matrix,
        })
    }
}

/// The equilibrium `perspective`'s matrix predicts, per `selection`.
pub fn select_equilibrium(
    cg: &CoarseGame,
    perspective: Perspective,
    selection: &Selection,
    kind: SolutionKind,
) -> Result<MixedProfile, PerceptionError> {
    let g = cg.game_for(perspective)?;
    let name = perspective.label(cg.base());
    let player = match perspective {
        Perspective::Base => None,
        Perspective::Perceived(k) => Some(cg.base().players()[k].clone()),
    };
    if let Selection::Profile(p) = selection {
        p.check_shape(&g)?;
        check_equilibrium(&g, p, name)?;
        return Ok(p.clone());
    }
    let (list, continuum) = candidates(&g, kind)?;
    match (selection, player) {
        (Selection::Index(i), player) => list.get(*i).cloned().ok_or(PerceptionError::SelectionOutOfRange {
            player: player.unwrap_or(name),
            index: *i,
            available: list.len(),
        }),
        (_, player) => match (list.len(), continuum, player) {
            (1, false, _) => Ok(list[0].clone()),
            (0, false, Some(player)) => Err(PerceptionError::NoEquilibrium {
                player,
                kind: kind.label(),
            }),
            (0, false, None) => Err(PerceptionError::NoBaseEquilibrium(kind.label())),
            (n, _, None) => Err(PerceptionError::MultipleBaseEquilibria(n.max(2))),
            (_, _, Some(player)) => Err(PerceptionError::AmbiguousSelection(player)),
        },
    }
}

/// The joint profile actually played: player `k` plays its own component of
/// the equilibrium it expects in its perceived game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedOutcome {
    /// Per player, the full equilibrium it expected.
    pub expectations: Vec<MixedProfile>,
    /// Per player, whether its component was overridden by hand.
    pub overridden: Vec<bool>,
    pub profile: MixedProfile,
}

impl RealizedOutcome {
    /// Assembles the realized profile from per-player expectations.
    pub fn from_expectations(expectations: Vec<MixedProfile>) -> RealizedOutcome {
        let profile = MixedProfile::from_vectors_unchecked(
            expectations
                .iter()
                .enumerate()
                .map(|(k, e)| e.player(k).to_vec())
                .collect(),
        );
        RealizedOutcome {
            overridden: vec![false; expectations.len()],
            expectations,
            profile,
        }
    }

    /// Replaces what player `k` actually played, flagging the component.
    pub fn with_override(mut self, k: usize, vector: Vec<Rational>) -> Result<RealizedOutcome, PerceptionError> {
        self.profile = self.profile.with_player(k, vector).map_err(GameError::from)?;
        self.overridden[k] = true;
        Ok(self)
    }

    /// The realized profile when every component is pure.
    pub fn pure(&self) -> Option<PureProfile> {
        self.profile.as_pure()
    }
}

/// Builds the realized outcome from per-player selections among that
/// player's perceived equilibria (pure or mixed).
pub fn realize(
    cg: &CoarseGame,
    selections: &[Selection],
    kind: SolutionKind,
) -> Result<RealizedOutcome, PerceptionError> {
    let n = cg.num_players();
    if selections.len() != n {
        return Err(GameError::PerPlayerArity {
            what: "selections",
            expected: n,
            found: selections.len(),
        }
        .into());
    }
    let expectations = (0..n)
        .map(|k| select_equilibrium(cg, Perspective::Perceived(k), &selections[k], kind))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RealizedOutcome::from_expectations(expectations))
}

/// Pure-equilibrium realized profile; `None` means the player's equilibrium
/// must be unique.
pub fn realized_profile(cg: &CoarseGame, selections: &[Option<usize>]) -> Result<RealizedOutcome, PerceptionError> {
    let sel: Vec<Selection> = selections.iter().map(|&s| s.into()).collect();
    realize(cg, &sel, SolutionKind::Pure)
}

/// Mixed-equilibrium realized profile of a two-player game.
pub fn realized_mixed_profile(
    cg: &CoarseGame,
    selections: &[Option<usize>],
) -> Result<RealizedOutcome, PerceptionError> {
    let sel: Vec<Selection> = selections.iter().map(|&s| s.into()).collect();
    realize(cg, &sel, SolutionKind::Mixed)
}

/// One gain-loss number together with the two payoffs behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub perspective: Perspective,
    pub subject: usize,
    pub expected: Rational,
    pub actual: Rational,
}

impl Differential {
    /// `actual - expected`.
    pub fn value(&self) -> Rational {
        &self.actual - &self.expected
    }
}

fn differential(
    cg: &CoarseGame,
    perspective: Perspective,
    subject: usize,
    expectation: &MixedProfile,
    realized: &MixedProfile,
) -> Result<Differential, PerceptionError> {
    let g = cg.game_for(perspective)?;
    g.check_player(subject)?;
    check_equilibrium(&g, expectation, perspective.label(cg.base()))?;
    Ok(Differential {
        perspective,
        subject,
        expected: expected_payoff(&g, expectation, subject)?,
        actual: expected_payoff(&g, realized, subject)?,
    })
}

/// Subject's payoff change seen through `lens`'s perceived matrix.
pub fn incidental_differential(
    cg: &CoarseGame,
    lens: usize,
    subject: usize,
    expectation: &PureProfile,
    realized: &PureProfile,
) -> Result<Differential, PerceptionError> {
    let g = cg.base();
    mixed_incidental_differential(
        cg,
        lens,
        subject,
        &MixedProfile::pure(g, expectation),
        &MixedProfile::pure(g, realized),
    )
}

pub fn mixed_incidental_differential(
    cg: &CoarseGame,
    lens: usize,
    subject: usize,
    expectation: &MixedProfile,
    realized: &MixedProfile,
) -> Result<Differential, PerceptionError> {
    cg.base().check_player(lens)?;
    differential(cg, Perspective::Perceived(lens), subject, expectation, realized)
}

/// Subject's objective payoff change in the base matrix. With no base
/// expectation the base game's pure equilibrium must be unique.
pub fn unrecognized_differential(
    cg: &CoarseGame,
    subject: usize,
    base_expectation: Option<&PureProfile>,
    realized: &PureProfile,
) -> Result<Differential, PerceptionError> {
    let g = cg.base();
    let expectation = base_expectation.map(|p| MixedProfile::pure(g, p));
    mixed_unrecognized_differential_with(
        cg,
        subject,
        expectation.as_ref(),
        &MixedProfile::pure(g, realized),
        SolutionKind::Pure,
    )
}

pub fn mixed_unrecognized_differential(
    cg: &CoarseGame,
    subject: usize,
    base_expectation: Option<&MixedProfile>,
    realized: &MixedProfile,
) -> Result<Differential, PerceptionError> {
    mixed_unrecognized_differential_with(cg, subject, base_expectation, realized, SolutionKind::Mixed)
}

fn mixed_unrecognized_differential_with(
    cg: &CoarseGame,
    subject: usize,
    base_expectation: Option<&MixedProfile>,
    realized: &MixedProfile,
    kind: SolutionKind,
) -> Result<Differential, PerceptionError> {
    let selection = base_expectation.map_or(Selection::Auto, |p| Selection::Profile(p.clone()));
    let expectation = select_equilibrium(cg, Perspective::Base, &selection, kind)?;
    differential(cg, Perspective::Base, subject, &expectation, realized)
}

/// Every differential for every subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialReport {
    pub realized: RealizedOutcome,
    pub base_expectation: MixedProfile,
    pub subjects: Vec<SubjectDifferentials>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectDifferentials {
    pub subject: usize,
    /// One entry per lens player, in player order.
    pub by_lens: Vec<Differential>,
    pub unrecognized: Differential,
}

impl SubjectDifferentials {
    /// The subject's differential through its own lens.
    pub fn incidental(&self) -> &Differential {
        &self.by_lens[self.subject]
    }
}

/// Computes all incidental (every lens) and unrecognized differentials.
/// Each lens's expectation is the one recorded in `realized`.
pub fn differential_report(
    cg: &CoarseGame,
    realized: RealizedOutcome,
    base_expectation: &Selection,
    kind: SolutionKind,
) -> Result<DifferentialReport, PerceptionError> {
    let base_expectation = select_equilibrium(cg, Perspective::Base, base_expectation, kind)?;
    let n = cg.num_players();
    let subjects = (0..n)
        .map(|k| {
            let by_lens = (0..n)
                .map(|l| {
                    differential(
                        cg,
                        Perspective::Perceived(l),
                        k,
                        &realized.expectations[l],
                        &realized.profile,
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let unrecognized = differential(cg, Perspective::Base, k, &base_expectation, &realized.profile)?;
            Ok(SubjectDifferentials {
                subject: k,
                by_lens,
                unrecognized,
            })
        })
        .collect::<Result<Vec<_>, PerceptionError>>()?;
    Ok(DifferentialReport {
        realized,
        base_expectation,
        subjects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::{Coverage, Grain, Partition};
    use crate::rational::{int, ratio};

    fn bimatrix(cells: &[[(i64, i64); 2]; 2], names: [&str; 2]) -> Game {
        Game::bimatrix(
            ["player1", "player2"],
            &names,
            &names,
            cells
                .iter()
                .map(|r| r.iter().map(|&(a, b)| (int(a), int(b))).collect())
                .collect(),
        )
        .unwrap()
    }

    fn pd() -> Game {
        bimatrix(&[[(-1, -1), (-5, 0)], [(0, -5), (-3, -3)]], ["Silent", "Confess"])
    }

    fn width(w: i64, reach: i64) -> Partition {
        let mut grains = vec![Grain::point(int(0))];
        let mut lo = 0;
        while lo < reach {
            grains.push(Grain::open_closed(int(lo), int(lo + w)).unwrap());
            grains.push(Grain::closed_open(int(-lo - w), int(-lo)).unwrap());
            lo += w;
        }
        Partition::new(grains, Coverage::ImplicitFinest).unwrap()
    }

    fn coarse_pd() -> CoarseGame {
        CoarseGame::with_emp(pd(), vec![width(2, 6), width(6, 18)]).unwrap()
    }

    fn named(g: &Game, names: [&str; 2]) -> PureProfile {
        PureProfile::from_names(g, &names).unwrap()
    }

    #[test]
    fn player_two_must_select() {
        let cg = coarse_pd();
        assert_eq!(
            realized_profile(&cg, &[None, None]),
            Err(PerceptionError::AmbiguousSelection("player2".into()))
        );
        // player 2's perceived equilibria in order: (S,C), (C,S), (C,C)
        let r = realized_profile(&cg, &[None, Some(1)]).unwrap();
        assert_eq!(r.pure().unwrap(), named(cg.base(), ["Confess", "Silent"]));
        let r = realized_profile(&cg, &[None, Some(2)]).unwrap();
        assert_eq!(r.pure().unwrap(), named(cg.base(), ["Confess", "Confess"]));
        assert!(matches!(
            realized_profile(&cg, &[None, Some(3)]),
            Err(PerceptionError::SelectionOutOfRange { available: 3, .. })
        ));
    }

    #[test]
    fn finest_needs_no_selection() {
        let cg = CoarseGame::finest(pd());
        let r = realized_profile(&cg, &[None, None]).unwrap();
        assert_eq!(r.pure().unwrap(), named(cg.base(), ["Confess", "Confess"]));
        assert_eq!(r.overridden, vec![false, false]);
    }

    #[test]
    fn coarse_pd_differentials() {
        let cg = coarse_pd();
        let g = cg.base();
        let cc = named(g, ["Confess", "Confess"]);
        let cs = named(g, ["Confess", "Silent"]);
        let d = |lens, subject, exp: &PureProfile| {
            incidental_differential(&cg, lens, subject, exp, &cs).unwrap().value()
        };
        assert_eq!(d(0, 0, &cc), int(3));
        assert_eq!(d(0, 1, &cc), int(-2));
        assert_eq!(d(1, 0, &cs), int(0));
        assert_eq!(d(1, 1, &cs), int(0));
        let u = |subject| unrecognized_differential(&cg, subject, None, &cs).unwrap();
        assert_eq!(u(0).value(), int(3));
        assert_eq!((u(1).actual, u(1).expected, u(1).value()), (int(-5), int(-3), int(-2)));
    }

    #[test]
    fn report_matches_single_calls() {
        let cg = coarse_pd();
        let realized = realized_profile(&cg, &[None, Some(1)]).unwrap();
        let report = differential_report(&cg, realized, &Selection::Auto, SolutionKind::Pure).unwrap();
        let values: Vec<Vec<Rational>> = report
            .subjects
            .iter()
            .map(|s| s.by_lens.iter().map(Differential::value).chain([s.unrecognized.value()]).collect())
            .collect();
        assert_eq!(values, vec![vec![int(3), int(0), int(3)], vec![int(-2), int(0), int(-2)]]);
        assert_eq!(report.subjects[1].incidental().value(), int(0));
    }

    #[test]
    fn expectation_must_be_an_equilibrium() {
        let cg = coarse_pd();
        let g = cg.base();
        let ss = named(g, ["Silent", "Silent"]);
        assert!(matches!(
            incidental_differential(&cg, 0, 0, &ss, &ss),
            Err(PerceptionError::NotAnEquilibrium { .. })
        ));
    }

    #[test]
    fn multiple_base_equilibria_need_expectation() {
        let g = bimatrix(&[[(1, 1), (0, 0)], [(0, 0), (1, 1)]], ["a", "b"]);
        let cg = CoarseGame::finest(g);
        let aa = named(cg.base(), ["a", "a"]);
        assert_eq!(
            unrecognized_differential(&cg, 0, None, &aa),
            Err(PerceptionError::MultipleBaseEquilibria(2))
        );
        assert_eq!(
            unrecognized_differential(&cg, 0, Some(&aa), &aa).unwrap().value(),
            int(0)
        );
    }

    #[test]
    fn override_is_flagged() {
        let cg = CoarseGame::finest(pd());
        let r = realized_profile(&cg, &[None, None])
            .unwrap()
            .with_override(1, vec![int(1), int(0)])
            .unwrap();
        assert_eq!(r.overridden, vec![false, true]);
        assert_eq!(r.pure().unwrap(), named(cg.base(), ["Confess", "Silent"]));
    }

    #[test]
    fn mixed_shift_differential() {
        let g = bimatrix(&[[(5, 3), (1, 4)], [(2, 1), (3, 0)]], ["Coop", "Defect"]);
        let p1 = Partition::new(vec![Grain::open_closed(int(4), int(8)).unwrap()], Coverage::ImplicitFinest).unwrap();
        let cg = CoarseGame::with_emp(g, vec![p1, Partition::finest()]).unwrap();
        let realized = realized_mixed_profile(&cg, &[None, None]).unwrap();
        assert_eq!(realized.profile.player(0), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(realized.profile.player(1), &[ratio(2, 5), ratio(3, 5)]);

        // Oracle: brute-force sum over the perceived matrix ((6,3),(1,4);(2,1),(3,0)).
        let m1 = [[6, 1], [2, 3]];
        let e = |q: Rational| -> Rational {
            let p = ratio(1, 2);
            let probs = [[&p * &q, &p * (int(1) - &q)], [&p * &q, &p * (int(1) - &q)]];
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| &probs[i][j] * int(m1[i][j])).sum()
        };
        let expected_value = e(ratio(2, 5)) - e(ratio(1, 3));
        assert_eq!(expected_value, ratio(2, 15));
        let d = mixed_incidental_differential(&cg, 0, 0, &realized.expectations[0], &realized.profile).unwrap();
        assert_eq!(d.value(), expected_value);
        assert_eq!(d.expected, ratio(8, 3));
    }

    #[test]
    fn mixed_selection_rejects_continuum() {
        let flat = bimatrix(&[[(1, 1), (1, 1)], [(1, 1), (1, 1)]], ["a", "b"]);
        let cg = CoarseGame::finest(flat);
        assert!(matches!(
            realized_mixed_profile(&cg, &[None, None]),
            Err(PerceptionError::AmbiguousSelection(_))
        ));
    }
}
