//! Ready-made coarse games for the standard worked examples, each with a
//! list of expected facts that [`Scenario::verify`] re-derives by running
//! the general solvers.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::coarse::{Coverage, Grain, Partition};
use crate::equilibrium::{self, best_responses, diagnose_uniformity, mixed_equilibria_2p, pure_equilibria};
use crate::game::{CoarseGame, Game, Perspective};
use crate::perception::{differential_report, realize, Selection, SolutionKind};
use crate::profile::{MixedProfile, PureProfile};
use crate::rational::{int, ratio, to_literal, Rational};
use crate::repeated::{misalignment, perspective_thresholds, DiscountInterval, Roles};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}")]
    Unknown(String),
    #[error("invalid lemon-market bounds: need lo <= lemon < peach <= hi, got lo={lo}, lemon={lemon}, peach={peach}, hi={hi}")]
    InvalidBounds {
        lo: String,
        lemon: String,
        peach: String,
        hi: String,
    },
}

/// A named example game plus the facts it is expected to exhibit.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub game: CoarseGame,
    /// Cooperate/defect labels per player, for repeated-game analysis.
    pub roles: Option<Vec<(String, String)>>,
    pub facts: Vec<Fact>,
}

/// One expected property of a scenario.
#[derive(Debug, Clone)]
pub struct Fact {
    pub note: &'static str,
    pub claim: Claim,
}

#[derive(Debug, Clone)]
pub enum Claim {
    /// The full numeric matrix seen from a perspective, cells in profile order.
    Matrix {
        perspective: Perspective,
        cells: Vec<Vec<Rational>>,
    },
    /// One cell of a player's grain matrix.
    CoarseCell {
        perceiver: usize,
        profile: Vec<&'static str>,
        grains: Vec<Grain>,
    },
    /// Exactly these pure equilibria, in order.
    PureEquilibria {
        perspective: Perspective,
        profiles: Vec<Vec<&'static str>>,
    },
    /// Exactly these isolated mixed equilibria and no degenerate supports.
    MixedEquilibria {
        perspective: Perspective,
        profiles: Vec<MixedProfile>,
    },
    /// A flagged full-support continuum in which `pinned` players' vectors
    /// are fixed and `free` players' vectors are not.
    DegenerateSupport {
        perspective: Perspective,
        free: Vec<usize>,
        pinned: Vec<(usize, Vec<Rational>)>,
    },
    Uniformity {
        perceiver: usize,
        subject: usize,
        uniform: bool,
    },
    BestResponses {
        perspective: Perspective,
        player: usize,
        /// Opponent strategy names, in player order without `player`.
        against: Vec<&'static str>,
        expected: Vec<&'static str>,
    },
    /// Differentials after realizing per-player pure selections.
    Differentials {
        selections: Vec<Option<usize>>,
        realized: Vec<&'static str>,
        /// (lens or base, subject, value)
        values: Vec<(Perspective, usize, Rational)>,
    },
    Threshold {
        perspective: Perspective,
        player: usize,
        value: Rational,
    },
    Misalignment {
        cooperates: Perspective,
        defects: Perspective,
        player: usize,
        interval: Option<(Rational, Rational)>,
    },
    Verdict {
        perspective: Perspective,
        delta: Rational,
        cooperate: bool,
    },
    /// Every pure equilibrium of the perspective has this payoff vector.
    EquilibriumPayoffsIdentical {
        perspective: Perspective,
        payoffs: Vec<Rational>,
    },
    /// This pure equilibrium gives every player strictly more than any other
    /// pure equilibrium.
    PayoffDominant {
        perspective: Perspective,
        profile: Vec<&'static str>,
    },
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.note)
    }
}

/// Outcome of re-deriving one fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub note: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl Scenario {
    /// Re-runs the solvers for every fact.
    pub fn verify(&self) -> Vec<FactCheck> {
        self.facts
            .iter()
            .map(|fact| match check(&self.game, self.roles.as_deref(), &fact.claim) {
                Ok(()) => FactCheck {
                    note: fact.note,
                    ok: true,
                    detail: String::new(),
                },
                Err(detail) => FactCheck {
                    note: fact.note,
                    ok: false,
                    detail,
                },
            })
            .collect()
    }

    pub fn is_verified(&self) -> bool {
        self.verify().iter().all(|c| c.ok)
    }

    /// Parsed role labels, if the scenario has them.
    pub fn role_indices(&self) -> Option<Roles> {
        self.roles
            .as_ref()
            .map(|r| Roles::from_labels(self.game.base(), r).expect("scenario roles are valid"))
    }
}

fn names(g: &Game, p: &PureProfile) -> Vec<String> {
    p.names(g).into_iter().map(str::to_string).collect()
}

fn show_rows(rows: &[Vec<Rational>]) -> String {
    rows.iter()
        .map(|c| format!("({})", c.iter().map(to_literal).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn check(cg: &CoarseGame, roles: Option<&[(String, String)]>, claim: &Claim) -> Result<(), String> {
    let err = |e: &dyn std::error::Error| e.to_string();
    let game_for = |p: Perspective| cg.game_for(p).map(|g| g.into_owned()).map_err(|e| err(&e));
    match claim {
        Claim::Matrix { perspective, cells } => {
            let g = game_for(*perspective)?;
            ensure(g.cells() == cells.as_slice(), || {
                format!("matrix is {}", show_rows(g.cells()))
            })
        }
        Claim::CoarseCell {
            perceiver,
            profile,
            grains,
        } => {
            let view = cg.coarse_view(*perceiver).map_err(|e| err(&e))?;
            let p = PureProfile::from_names(cg.base(), profile).map_err(|e| err(&e))?;
            let got = view.cell(p.indices());
            ensure(got == grains.as_slice(), || {
                format!(
                    "cell is ({})",
                    got.iter().map(Grain::to_string).collect::<Vec<_>>().join(", ")
                )
            })
        }
        Claim::PureEquilibria {
            perspective,
            profiles,
        } => {
            let g = game_for(*perspective)?;
            let got: Vec<Vec<String>> = pure_equilibria(&g).iter().map(|p| names(&g, p)).collect();
            ensure(&got == profiles, || format!("pure equilibria are {got:?}"))
        }
        Claim::MixedEquilibria {
            perspective,
            profiles,
        } => {
            let g = game_for(*perspective)?;
            let sol = mixed_equilibria_2p(&g).map_err(|e| err(&e))?;
            ensure(&sol.equilibria == profiles && sol.degenerate.is_empty(), || {
                format!(
                    "mixed equilibria are [{}] with {} degenerate supports",
                    sol.equilibria.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "),
                    sol.degenerate.len()
                )
            })
        }
        Claim::DegenerateSupport {
            perspective,
            free,
            pinned,
        } => {
            let g = game_for(*perspective)?;
            let sol = mixed_equilibria_2p(&g).map_err(|e| err(&e))?;
            let full: Vec<Vec<usize>> = g.shape().iter().map(|&n| (0..n).collect()).collect();
            let d = sol
                .degenerate
                .iter()
                .find(|d| d.supports.as_slice() == full.as_slice())
                .ok_or("no degenerate full support was flagged")?;
            ensure(&d.free_players == free, || format!("free players are {:?}", d.free_players))?;
            for (k, v) in pinned {
                ensure(d.witness.player(*k) == v.as_slice(), || {
                    format!("player {k} witness is {}", d.witness)
                })?;
            }
            ensure(
                equilibrium::verify_mixed(&g, &d.witness).map_err(|e| err(&e))?,
                || "witness does not verify".into(),
            )
        }
        Claim::Uniformity {
            perceiver,
            subject,
            uniform,
        } => {
            let got = diagnose_uniformity(cg, *perceiver, *subject).map_err(|e| err(&e))?;
            ensure(got == *uniform, || format!("uniformity is {got}"))
        }
        Claim::BestResponses {
            perspective,
            player,
            against,
            expected,
        } => {
            let g = game_for(*perspective)?;
            let opponents: Vec<Vec<Rational>> = (0..g.num_players())
                .filter(|k| k != player)
                .zip(against)
                .map(|(k, name)| {
                    g.strategy_index(k, name)
                        .map(|s| crate::profile::point_mass(g.shape()[k], s))
                        .map_err(|e| err(&e))
                })
                .collect::<Result<_, _>>()?;
            let got: Vec<&str> = best_responses(&g, *player, &opponents)
                .map_err(|e| err(&e))?
                .into_iter()
                .map(|s| g.strategies(*player)[s].as_str())
                .collect();
            ensure(&got == expected, || format!("best responses are {got:?}"))
        }
        Claim::Differentials {
            selections,
            realized,
            values,
        } => {
            let sel: Vec<Selection> = selections.iter().map(|&s| s.into()).collect();
            let outcome = realize(cg, &sel, SolutionKind::Pure).map_err(|e| err(&e))?;
            let got = outcome.pure().map(|p| names(cg.base(), &p));
            ensure(got.as_deref() == Some(&realized.iter().map(|s| s.to_string()).collect::<Vec<_>>()[..]), || {
                format!("realized profile is {got:?}")
            })?;
            let report = differential_report(cg, outcome, &Selection::Auto, SolutionKind::Pure)
                .map_err(|e| err(&e))?;
            for (perspective, subject, value) in values {
                let s = &report.subjects[*subject];
                let d = match perspective {
                    Perspective::Base => &s.unrecognized,
                    Perspective::Perceived(l) => &s.by_lens[*l],
                };
                ensure(d.value() == *value, || {
                    format!(
                        "{} differential of {} is {}",
                        perspective.label(cg.base()),
                        cg.base().players()[*subject],
                        to_literal(&d.value())
                    )
                })?;
            }
            Ok(())
        }
        Claim::Threshold {
            perspective,
            player,
            value,
        } => {
            let a = analysis(cg, roles)?;
            let got = a.entry(*perspective, *player).and_then(|e| e.threshold()).cloned();
            ensure(got.as_ref() == Some(value), || format!("threshold is {got:?}"))
        }
        Claim::Misalignment {
            cooperates,
            defects,
            player,
            interval,
        } => {
            let a = analysis(cg, roles)?;
            let got = misalignment(&a, *cooperates, *defects, *player);
            let want = interval.clone().map(|(lo, hi)| DiscountInterval { lo, hi });
            ensure(got == want, || format!("interval is {:?}", got.map(|i| i.to_string())))
        }
        Claim::Verdict {
            perspective,
            delta,
            cooperate,
        } => {
            let a = analysis(cg, roles)?;
            let got = a.perspective_verdict(*perspective, delta).map_err(|e| err(&e))?;
            ensure(got == Some(*cooperate), || format!("verdict is {got:?}"))
        }
        Claim::EquilibriumPayoffsIdentical {
            perspective,
            payoffs,
        } => {
            let g = game_for(*perspective)?;
            let eqs = pure_equilibria(&g);
            ensure(
                !eqs.is_empty() && eqs.iter().all(|p| g.cell(p.indices()) == payoffs.as_slice()),
                || {
                    let cells: Vec<Vec<Rational>> = eqs.iter().map(|p| g.cell(p.indices()).to_vec()).collect();
                    format!("equilibrium payoffs are {}", show_rows(&cells))
                },
            )
        }
        Claim::PayoffDominant {
            perspective,
            profile,
        } => {
            let g = game_for(*perspective)?;
            let target = PureProfile::from_names(&g, profile).map_err(|e| err(&e))?;
            let eqs = pure_equilibria(&g);
            ensure(eqs.contains(&target), || "profile is not an equilibrium".into())?;
            let best = g.cell(target.indices());
            let dominant = eqs.iter().filter(|p| **p != target).all(|p| {
                g.cell(p.indices()).iter().zip(best).all(|(other, mine)| other < mine)
            });
            ensure(dominant, || "profile is not strictly payoff-dominant".into())
        }
    }
}

fn analysis(
    cg: &CoarseGame,
    roles: Option<&[(String, String)]>,
) -> Result<crate::repeated::DiscountAnalysis, String> {
    let labels = roles.ok_or("scenario has no cooperate/defect roles")?;
    let roles = Roles::from_labels(cg.base(), labels).map_err(|e| e.to_string())?;
    perspective_thresholds(cg, &roles).map_err(|e| e.to_string())
}

// ---- builders --------------------------------------------------------------

fn cells(rows: &[&[(Rational, Rational)]]) -> Vec<Vec<(Rational, Rational)>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn ints(rows: &[&[(i64, i64)]]) -> Vec<Vec<(Rational, Rational)>> {
    rows.iter()
        .map(|r| r.iter().map(|&(a, b)| (int(a), int(b))).collect())
        .collect()
}

fn flat(rows: &[Vec<(Rational, Rational)>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .flatten()
        .map(|(a, b)| vec![a.clone(), b.clone()])
        .collect()
}

fn partition(grains: Vec<Grain>) -> Partition {
    Partition::new(grains, Coverage::ImplicitFinest).expect("scenario partition is valid")
}

/// `{0}` plus half-open grains of width `w` on both sides out to `reach`:
/// `[-w,0)` below zero and `(0,w]` above.
pub fn symmetric_width_partition(w: i64, reach: i64) -> Partition {
    let mut grains = vec![Grain::point(int(0))];
    let mut lo = 0;
    while lo < reach {
        grains.push(Grain::open_closed(int(lo), int(lo + w)).expect("positive width"));
        grains.push(Grain::closed_open(int(-lo - w), int(-lo)).expect("positive width"));
        lo += w;
    }
    partition(grains)
}

fn v(xs: &[Rational]) -> Vec<Rational> {
    xs.to_vec()
}

const SILENT: &str = "Silent";
const CONFESS: &str = "Confess";
const COOP: &str = "Cooperation";
const DEFECT: &str = "Defect";

fn prisoners_dilemma() -> Game {
    Game::bimatrix(
        ["player1", "player2"],
        &[SILENT, CONFESS],
        &[SILENT, CONFESS],
        ints(&[&[(-1, -1), (-5, 0)], &[(0, -5), (-3, -3)]]),
    )
    .expect("valid game")
}

fn coop_defect(rows: &[&[(i64, i64)]]) -> Game {
    Game::bimatrix(["player1", "player2"], &[COOP, DEFECT], &[COOP, DEFECT], ints(rows)).expect("valid game")
}

fn fact(note: &'static str, claim: Claim) -> Fact {
    Fact { note, claim }
}

use Perspective::{Base, Perceived};

/// Prisoner's dilemma where player 1 sees width-2 grains and player 2 sees
/// width-6 grains.
pub fn coarse_pd() -> Scenario {
    let base = prisoners_dilemma();
    let cg = CoarseGame::with_emp(
        base.clone(),
        vec![symmetric_width_partition(2, 6), symmetric_width_partition(6, 18)],
    )
    .expect("valid coarse game");
    let m2 = ints(&[&[(-3, -3), (-3, 0)], &[(0, -3), (-3, -3)]]);
    let facts = vec![
        fact(
            "player 1's width-2 grains put both Silent payoffs in [-2,0)",
            Claim::CoarseCell {
                perceiver: 0,
                profile: vec![SILENT, SILENT],
                grains: vec![Grain::closed_open(int(-2), int(0)).unwrap(); 2],
            },
        ),
        fact(
            "player 2's width-6 grains put both Silent payoffs in [-6,0)",
            Claim::CoarseCell {
                perceiver: 1,
                profile: vec![SILENT, SILENT],
                grains: vec![Grain::closed_open(int(-6), int(0)).unwrap(); 2],
            },
        ),
        fact(
            "player 1's perceived matrix equals the base matrix",
            Claim::Matrix {
                perspective: Perceived(0),
                cells: base.cells().to_vec(),
            },
        ),
        fact(
            "player 2 perceives ((-3,-3),(-3,0);(0,-3),(-3,-3))",
            Claim::Matrix {
                perspective: Perceived(1),
                cells: flat(&m2),
            },
        ),
        fact(
            "base game: unique equilibrium (Confess, Confess)",
            Claim::PureEquilibria {
                perspective: Base,
                profiles: vec![vec![CONFESS, CONFESS]],
            },
        ),
        fact(
            "player 1's matrix: unique equilibrium (Confess, Confess)",
            Claim::PureEquilibria {
                perspective: Perceived(0),
                profiles: vec![vec![CONFESS, CONFESS]],
            },
        ),
        fact(
            "player 2's matrix: three equilibria, a selection problem",
            Claim::PureEquilibria {
                perspective: Perceived(1),
                profiles: vec![vec![SILENT, CONFESS], vec![CONFESS, SILENT], vec![CONFESS, CONFESS]],
            },
        ),
        fact(
            "base best reply to Confess is Confess",
            Claim::BestResponses {
                perspective: Base,
                player: 0,
                against: vec![CONFESS],
                expected: vec![CONFESS],
            },
        ),
        fact(
            "player 2 focal on (Confess, Silent): realized (Confess, Silent) with +3/-2 surprises",
            Claim::Differentials {
                selections: vec![None, Some(1)],
                realized: vec![CONFESS, SILENT],
                values: vec![
                    (Perceived(0), 0, int(3)),
                    (Perceived(0), 1, int(-2)),
                    (Perceived(1), 0, int(0)),
                    (Perceived(1), 1, int(0)),
                    (Base, 0, int(3)),
                    (Base, 1, int(-2)),
                ],
            },
        ),
        fact(
            "player 2 focal on (Confess, Confess): expectations met, all differentials zero",
            Claim::Differentials {
                selections: vec![None, Some(2)],
                realized: vec![CONFESS, CONFESS],
                values: vec![
                    (Perceived(0), 0, int(0)),
                    (Perceived(0), 1, int(0)),
                    (Perceived(1), 0, int(0)),
                    (Perceived(1), 1, int(0)),
                    (Base, 0, int(0)),
                    (Base, 1, int(0)),
                ],
            },
        ),
    ];
    Scenario {
        name: "coarse-pd",
        summary: "Prisoner's dilemma seen through width-2 and width-6 payoff grains",
        game: cg,
        roles: Some(vec![(SILENT.into(), CONFESS.into()); 2]),
        facts,
    }
}

fn mixed_shift_game() -> Game {
    coop_defect(&[&[(5, 3), (1, 4)], &[(2, 1), (3, 0)]])
}

/// Player 1 lumps its top payoff into `(4,8]`; the mixed equilibrium moves.
pub fn mixed_shift() -> Scenario {
    let p1 = partition(vec![Grain::open_closed(int(4), int(8)).unwrap()]);
    let cg = CoarseGame::with_emp(mixed_shift_game(), vec![p1, Partition::finest()]).unwrap();
    let half = v(&[ratio(1, 2), ratio(1, 2)]);
    let facts = vec![
        fact(
            "player 1 perceives ((6,3),(1,4);(2,1),(3,0))",
            Claim::Matrix {
                perspective: Perceived(0),
                cells: flat(&ints(&[&[(6, 3), (1, 4)], &[(2, 1), (3, 0)]])),
            },
        ),
        fact(
            "base mixed equilibrium ((1/2,1/2),(2/5,3/5))",
            Claim::MixedEquilibria {
                perspective: Base,
                profiles: vec![MixedProfile::new(vec![half.clone(), v(&[ratio(2, 5), ratio(3, 5)])]).unwrap()],
            },
        ),
        fact(
            "coarse mixed equilibrium ((1/2,1/2),(1/3,2/3)): player 1 unchanged, player 2 shifts",
            Claim::MixedEquilibria {
                perspective: Perceived(0),
                profiles: vec![MixedProfile::new(vec![half, v(&[ratio(1, 3), ratio(2, 3)])]).unwrap()],
            },
        ),
        fact(
            "player 1's matrix has no pure equilibrium",
            Claim::PureEquilibria {
                perspective: Perceived(0),
                profiles: vec![],
            },
        ),
    ];
    Scenario {
        name: "mixed-shift",
        summary: "A single coarse grain moves the mixed equilibrium while pure structure is unchanged",
        game: cg,
        roles: None,
        facts,
    }
}

/// Player 1's two wide grains make every payoff of player 2 look the same.
pub fn uniform_reduction() -> Scenario {
    let p1 = partition(vec![
        Grain::closed(int(0), int(4)).unwrap(),
        Grain::open_closed(int(4), int(8)).unwrap(),
    ]);
    let cg = CoarseGame::with_emp(mixed_shift_game(), vec![p1, Partition::finest()]).unwrap();
    let facts = vec![
        fact(
            "player 1 perceives ((6,2),(2,2);(2,2),(2,2))",
            Claim::Matrix {
                perspective: Perceived(0),
                cells: flat(&ints(&[&[(6, 2), (2, 2)], &[(2, 2), (2, 2)]])),
            },
        ),
        fact(
            "all of player 2's payoffs fall in one grain of player 1's partition",
            Claim::Uniformity {
                perceiver: 0,
                subject: 1,
                uniform: true,
            },
        ),
        fact(
            "player 1's own payoffs are not uniform in its matrix",
            Claim::Uniformity {
                perceiver: 0,
                subject: 0,
                uniform: false,
            },
        ),
        fact(
            "in player 1's matrix, Cooperation is the only best reply to Cooperation",
            Claim::BestResponses {
                perspective: Perceived(0),
                player: 0,
                against: vec![COOP],
                expected: vec![COOP],
            },
        ),
        fact(
            "player 2 is indifferent between its strategies in player 1's matrix",
            Claim::BestResponses {
                perspective: Perceived(0),
                player: 1,
                against: vec![DEFECT],
                expected: vec![COOP, DEFECT],
            },
        ),
    ];
    Scenario {
        name: "uniform-reduction",
        summary: "Coarse grains collapse one player's payoffs to a constant",
        game: cg,
        roles: None,
        facts,
    }
}

/// Player 1 resolves its own payoffs exactly but lumps `[4,6]`, which holds
/// every payoff of player 2.
pub fn uniform_remark() -> Scenario {
    let base = coop_defect(&[&[(10, 4), (8, 5)], &[(0, 6), (11, 4)]]);
    let p1 = partition(vec![
        Grain::point(int(0)),
        Grain::closed(int(4), int(6)).unwrap(),
        Grain::point(int(8)),
        Grain::point(int(10)),
        Grain::point(int(11)),
    ]);
    let cg = CoarseGame::with_emp(base, vec![p1, Partition::finest()]).unwrap();
    let facts = vec![
        fact(
            "player 1 perceives ((10,5),(8,5);(0,5),(11,5))",
            Claim::Matrix {
                perspective: Perceived(0),
                cells: flat(&ints(&[&[(10, 5), (8, 5)], &[(0, 5), (11, 5)]])),
            },
        ),
        fact(
            "base mixed equilibrium ((2/3,1/3),(3/13,10/13)) alongside no pure one",
            Claim::MixedEquilibria {
                perspective: Base,
                profiles: vec![MixedProfile::new(vec![
                    v(&[ratio(2, 3), ratio(1, 3)]),
                    v(&[ratio(3, 13), ratio(10, 13)]),
                ])
                .unwrap()],
            },
        ),
        fact(
            "player 2's payoffs are uniform in player 1's matrix",
            Claim::Uniformity {
                perceiver: 0,
                subject: 1,
                uniform: true,
            },
        ),
        fact(
            "coarse full support is degenerate: player 2 pinned at (3/13,10/13), player 1's mix is free",
            Claim::DegenerateSupport {
                perspective: Perceived(0),
                free: vec![0],
                pinned: vec![(1, v(&[ratio(3, 13), ratio(10, 13)]))],
            },
        ),
    ];
    Scenario {
        name: "uniform-remark",
        summary: "Uniform perception of the opponent turns an isolated mixed equilibrium into a continuum",
        game: cg,
        roles: None,
        facts,
    }
}

/// Prisoner's dilemma where player 1's grains shrink the cooperation gap
/// and so lower its critical discount factor.
pub fn discount_misalignment() -> Scenario {
    // Grain list recovered from the transformed matrix: -1/2 is the
    // midpoint of [-1,0) and -5/2 the midpoint of [-4,-1).
    let p1 = partition(vec![
        Grain::closed_open(int(-6), int(-4)).unwrap(),
        Grain::closed_open(int(-4), int(-1)).unwrap(),
        Grain::closed_open(int(-1), int(0)).unwrap(),
        Grain::point(int(0)),
    ]);
    let cg = CoarseGame::with_emp(prisoners_dilemma(), vec![p1, symmetric_width_partition(2, 6)]).unwrap();
    let m1 = cells(&[
        &[(ratio(-1, 2), ratio(-1, 2)), (int(-5), int(0))],
        &[(int(0), int(-5)), (ratio(-5, 2), ratio(-5, 2))],
    ]);
    let mut facts = vec![
        fact(
            "player 1 perceives ((-1/2,-1/2),(-5,0);(0,-5),(-5/2,-5/2))",
            Claim::Matrix {
                perspective: Perceived(0),
                cells: flat(&m1),
            },
        ),
        fact(
            "player 2 perceives the base matrix",
            Claim::Matrix {
                perspective: Perceived(1),
                cells: prisoners_dilemma().cells().to_vec(),
            },
        ),
    ];
    for (perspective, value, note) in [
        (Base, ratio(1, 3), "base threshold 1/3 for both players"),
        (Perceived(0), ratio(1, 5), "player 1's matrix: threshold 1/5 for both players"),
        (Perceived(1), ratio(1, 3), "player 2's matrix: threshold 1/3 for both players"),
    ] {
        for player in 0..2 {
            facts.push(fact(
                note,
                Claim::Threshold {
                    perspective,
                    player,
                    value: value.clone(),
                },
            ));
        }
    }
    facts.extend([
        fact(
            "discount factors in [1/5,1/3) look sufficient to player 1 but not to player 2",
            Claim::Misalignment {
                cooperates: Perceived(0),
                defects: Perceived(1),
                player: 1,
                interval: Some((ratio(1, 5), ratio(1, 3))),
            },
        ),
        fact(
            "base and player 2's matrix agree",
            Claim::Misalignment {
                cooperates: Base,
                defects: Perceived(1),
                player: 1,
                interval: None,
            },
        ),
        fact(
            "at discount factor 1/4 player 1's matrix predicts cooperation",
            Claim::Verdict {
                perspective: Perceived(0),
                delta: ratio(1, 4),
                cooperate: true,
            },
        ),
        fact(
            "at discount factor 1/4 player 2's matrix predicts defection",
            Claim::Verdict {
                perspective: Perceived(1),
                delta: ratio(1, 4),
                cooperate: false,
            },
        ),
    ]);
    Scenario {
        name: "discount-misalignment",
        summary: "Different payoff grains give different critical discount factors for grim-trigger cooperation",
        game: cg,
        roles: Some(vec![(SILENT.into(), CONFESS.into()); 2]),
        facts,
    }
}

/// Consumer that cannot tell models within one unit of payoff apart, and a
/// firm that sees everything.
pub fn minor_model_change(models: usize) -> Result<Scenario, ScenarioError> {
    let consumer = partition(vec![
        Grain::closed_open(int(5), int(6)).unwrap(),
        Grain::closed_open(int(6), int(7)).unwrap(),
        Grain::closed_open(int(7), int(8)).unwrap(),
    ]);
    let diag = [(int(5), int(6)), (ratio(11, 2), ratio(13, 2)), (int(6), int(7))];
    let (name, summary) = match models {
        2 => ("minor-model-change", "A minor upgrade the consumer cannot perceive"),
        3 => ("minor-model-change-3", "A third, clearly better model restores a focal equilibrium"),
        _ => return Err(ScenarioError::Unknown(format!("minor-model-change with {models} models"))),
    };
    let buy: Vec<String> = (1..=models).map(|m| format!("buy_m{m}")).collect();
    let sell: Vec<String> = (1..=models).map(|m| format!("sell_m{m}")).collect();
    let zero = || (int(0), int(0));
    let rows: Vec<Vec<(Rational, Rational)>> = (0..models)
        .map(|i| (0..models).map(|j| if i == j { diag[i].clone() } else { zero() }).collect())
        .collect();
    let base = Game::bimatrix(["consumer", "firm"], buy.as_slice(), sell.as_slice(), rows).unwrap();
    let cg = CoarseGame::with_emp(base, vec![consumer, Partition::finest()]).unwrap();
    let perceived_diag = [(ratio(11, 2), ratio(13, 2)), (ratio(11, 2), ratio(13, 2)), (ratio(13, 2), ratio(15, 2))];
    let perceived: Vec<Vec<(Rational, Rational)>> = (0..models)
        .map(|i| {
            (0..models)
                .map(|j| if i == j { perceived_diag[i].clone() } else { zero() })
                .collect()
        })
        .collect();
    let mut facts = vec![fact(
        "off-diagonal zeros pass through unchanged; diagonal cells move to grain midpoints",
        Claim::Matrix {
            perspective: Perceived(0),
            cells: flat(&perceived),
        },
    )];
    if models == 2 {
        facts.extend([
            fact(
                "base game: both matched purchases are equilibria",
                Claim::PureEquilibria {
                    perspective: Base,
                    profiles: vec![vec!["buy_m1", "sell_m1"], vec!["buy_m2", "sell_m2"]],
                },
            ),
            fact(
                "base game: the upgrade is the payoff-dominant focal point",
                Claim::PayoffDominant {
                    perspective: Base,
                    profile: vec!["buy_m2", "sell_m2"],
                },
            ),
            fact(
                "consumer's matrix: both equilibria pay (11/2,13/2), so there is no focal point",
                Claim::EquilibriumPayoffsIdentical {
                    perspective: Perceived(0),
                    payoffs: v(&[ratio(11, 2), ratio(13, 2)]),
                },
            ),
        ]);
    } else {
        facts.extend([
            fact(
                "consumer's matrix: all three matched purchases are equilibria",
                Claim::PureEquilibria {
                    perspective: Perceived(0),
                    profiles: vec![
                        vec!["buy_m1", "sell_m1"],
                        vec!["buy_m2", "sell_m2"],
                        vec!["buy_m3", "sell_m3"],
                    ],
                },
            ),
            fact(
                "consumer's matrix: (buy_m3, sell_m3) at (13/2,15/2) dominates the others",
                Claim::PayoffDominant {
                    perspective: Perceived(0),
                    profile: vec!["buy_m3", "sell_m3"],
                },
            ),
        ]);
    }
    Ok(Scenario {
        name,
        summary,
        game: cg,
        roles: None,
        facts,
    })
}

/// Parameters of the used-car market.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemonMarket {
    pub peach_value: Rational,
    pub lemon_value: Rational,
    /// The consumer's single valuation grain `[lo, hi]`; `None` means the
    /// consumer resolves valuations exactly.
    pub perception: Option<(Rational, Rational)>,
}

impl Default for LemonMarket {
    fn default() -> Self {
        LemonMarket {
            peach_value: int(20000),
            lemon_value: int(10000),
            perception: Some((int(10000), int(20000))),
        }
    }
}

impl LemonMarket {
    pub fn finest() -> LemonMarket {
        LemonMarket {
            perception: None,
            ..LemonMarket::default()
        }
    }

    fn consumer_partition(&self) -> Result<Partition, ScenarioError> {
        let bad = |lo: &Rational, hi: &Rational| ScenarioError::InvalidBounds {
            lo: to_literal(lo),
            lemon: to_literal(&self.lemon_value),
            peach: to_literal(&self.peach_value),
            hi: to_literal(hi),
        };
        match &self.perception {
            None => {
                if self.lemon_value >= self.peach_value {
                    let (l, p) = (&self.lemon_value, &self.peach_value);
                    return Err(bad(l, p));
                }
                Ok(Partition::finest())
            }
            Some((lo, hi)) => {
                if !(lo <= &self.lemon_value && self.lemon_value < self.peach_value && &self.peach_value <= hi) {
                    return Err(bad(lo, hi));
                }
                Ok(partition(vec![Grain::closed(lo.clone(), hi.clone()).map_err(|_| bad(lo, hi))?]))
            }
        }
    }

    /// Price the consumer offers for each car: its perceived valuation.
    pub fn prices(&self) -> Result<[Rational; 2], ScenarioError> {
        let p = self.consumer_partition()?;
        let price = |v: &Rational| p.perceive(v).expect("bounded grain");
        Ok([price(&self.peach_value), price(&self.lemon_value)])
    }

    /// Rows: consumer buys the peach / the lemon. Columns: dealer sells the
    /// peach / the lemon. A matched trade gives the consumer its perceived
    /// value minus the price and the dealer the price minus the true value.
    pub fn game(&self) -> Result<Game, ScenarioError> {
        let prices = self.prices()?;
        let values = [&self.peach_value, &self.lemon_value];
        let rows = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        if i == j {
                            // perceived valuation equals the price offered
                            (Rational::zero(), &prices[i] - values[i])
                        } else {
                            (Rational::zero(), Rational::zero())
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Game::bimatrix(
            ["consumer", "dealer"],
            &["buy_peach", "buy_lemon"],
            &["sell_peach", "sell_lemon"],
            rows,
        )
        .expect("valid game"))
    }
}

/// Dealer facing a consumer who cannot tell the cars apart (or, with
/// `perception: None`, one who can).
pub fn lemon_market(params: &LemonMarket) -> Result<Scenario, ScenarioError> {
    let game = params.game()?;
    let prices = params.prices()?;
    let cg = CoarseGame::finest(game);
    let coarse = params.perception.is_some();
    let facts = if coarse {
        let price = prices[0].clone();
        vec![
            fact(
                "the consumer offers the same midpoint price for both cars",
                Claim::Matrix {
                    perspective: Base,
                    cells: vec![
                        vec![int(0), &price - &params.peach_value],
                        vec![int(0), int(0)],
                        vec![int(0), int(0)],
                        vec![int(0), &price - &params.lemon_value],
                    ],
                },
            ),
            fact(
                "the dealer sells the lemon when the consumer asks for the peach",
                Claim::BestResponses {
                    perspective: Base,
                    player: 1,
                    against: vec!["buy_peach"],
                    expected: vec!["sell_lemon"],
                },
            ),
            fact(
                "the dealer sells the lemon when the consumer asks for the lemon",
                Claim::BestResponses {
                    perspective: Base,
                    player: 1,
                    against: vec!["buy_lemon"],
                    expected: vec!["sell_lemon"],
                },
            ),
        ]
    } else {
        vec![
            fact(
                "each car sells at its true value, so the dealer earns nothing either way",
                Claim::Matrix {
                    perspective: Base,
                    cells: vec![vec![int(0), int(0)]; 4],
                },
            ),
            fact(
                "the lemon is no longer the dealer's strict reply to a peach buyer",
                Claim::BestResponses {
                    perspective: Base,
                    player: 1,
                    against: vec!["buy_peach"],
                    expected: vec!["sell_peach", "sell_lemon"],
                },
            ),
        ]
    };
    Ok(Scenario {
        name: if coarse { "lemon-market" } else { "lemon-market-finest" },
        summary: if coarse {
            "A consumer who lumps car valuations together pays the midpoint, so the dealer sells the lemon"
        } else {
            "A consumer who values cars exactly removes the dealer's profit from selling the lemon"
        },
        game: cg,
        roles: None,
        facts,
    })
}

pub const NAMES: &[&str] = &[
    "coarse-pd",
    "mixed-shift",
    "uniform-reduction",
    "uniform-remark",
    "discount-misalignment",
    "minor-model-change",
    "minor-model-change-3",
    "lemon-market",
    "lemon-market-finest",
];

pub fn by_name(name: &str) -> Result<Scenario, ScenarioError> {
    match name {
        "coarse-pd" => Ok(coarse_pd()),
        "mixed-shift" => Ok(mixed_shift()),
        "uniform-reduction" => Ok(uniform_reduction()),
        "uniform-remark" => Ok(uniform_remark()),
        "discount-misalignment" => Ok(discount_misalignment()),
        "minor-model-change" => minor_model_change(2),
        "minor-model-change-3" => minor_model_change(3),
        "lemon-market" => lemon_market(&LemonMarket::default()),
        "lemon-market-finest" => lemon_market(&LemonMarket::finest()),
        other => Err(ScenarioError::Unknown(other.to_string())),
    }
}

pub fn all() -> Vec<Scenario> {
    NAMES.iter().map(|n| by_name(n).expect("listed scenario")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_verifies() {
        for s in all() {
            for c in s.verify() {
                assert!(c.ok, "{}: {} ({})", s.name, c.note, c.detail);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for name in NAMES {
            assert_eq!(by_name(name).unwrap().name, *name);
        }
        assert!(by_name("nope").is_err());
        assert!(minor_model_change(4).is_err());
    }

    #[test]
    fn lemon_prices() {
        assert_eq!(LemonMarket::default().prices().unwrap(), [int(15000), int(15000)]);
        assert_eq!(LemonMarket::finest().prices().unwrap(), [int(20000), int(10000)]);
        let g = LemonMarket::default().game().unwrap();
        assert_eq!(g.payoff(&[1, 1], 1), &int(5000));
        assert_eq!(g.payoff(&[0, 0], 1), &int(-5000));
    }

    #[test]
    fn lemon_bounds_are_checked() {
        let bad = LemonMarket {
            perception: Some((int(12000), int(20000))),
            ..LemonMarket::default()
        };
        assert!(matches!(lemon_market(&bad), Err(ScenarioError::InvalidBounds { .. })));
        let swapped = LemonMarket {
            peach_value: int(5000),
            ..LemonMarket::finest()
        };
        assert!(swapped.game().is_err());
    }

    #[test]
    fn broken_fact_is_reported() {
        let mut s = coarse_pd();
        s.facts.push(fact(
            "deliberately wrong",
            Claim::PureEquilibria {
                perspective: Base,
                profiles: vec![vec![SILENT, SILENT]],
            },
        ));
        let checks = s.verify();
        let last = checks.last().unwrap();
        assert!(!last.ok);
        assert!(last.detail.contains("Confess"));
    }
}
