//! Pure and mixed Nash equilibria, best responses, pure minmax, and the
//! uniformity / competitiveness diagnostics for coarse perception.
//!
//! Mixed equilibria of two-player games are found by support enumeration.
//! For each pair of supports the indifference conditions form an exact
//! linear system. A unique solution is kept when it is strictly positive on
//! the support and no strategy outside the support does better. A support
//! whose system has a continuum of solutions is reported as degenerate,
//! together with one verified witness profile, instead of being enumerated.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::game::{cell_weight, CoarseGame, Game, GameError};
use crate::linalg::{self, Solution};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::profile::{point_mass, MixedProfile, PureProfile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquilibriumError {
    #[error("mixed equilibrium search needs exactly two players, got {0}")]
    NotTwoPlayer(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Every pure profile where no player has a strictly improving unilateral
/// deviation, in lexicographic order.
pub fn pure_equilibria(g: &Game) -> Vec<PureProfile> {
    g.profiles()
        .filter(|p| is_pure_equilibrium(g, p))
        .map(PureProfile::from_indices)
        .collect()
}

pub fn is_pure_equilibrium(g: &Game, profile: &[usize]) -> bool {
    let mut dev = profile.to_vec();
    (0..g.num_players()).all(|k| {
        let current = g.payoff(profile, k).clone();
        let ok = (0..g.shape()[k]).all(|s| {
            dev[k] = s;
            *g.payoff(&dev, k) <= current
        });
        dev[k] = profile[k];
        ok
    })
}

/// Player `k`'s payoff from each of its pure strategies against the other
/// players' vectors in `vectors` (player `k`'s own vector is ignored).
fn pure_payoffs(g: &Game, vectors: &[Vec<Rational>], k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); g.shape()[k]];
    let mut weights = vectors.to_vec();
    weights[k] = vec![Rational::one(); g.shape()[k]];
    for (cell, payoffs) in g.profiles().zip(g.cells()) {
        let w = cell_weight(&weights, &cell);
        if !w.is_zero() {
            out[cell[k]] += w * &payoffs[k];
        }
    }
    out
}

/// Argmax set of player `k`'s pure strategies against `opponents`, which
/// holds one probability vector per other player, in player order.
pub fn best_responses(
    g: &Game,
    k: usize,
    opponents: &[Vec<Rational>],
) -> Result<Vec<usize>, GameError> {
    g.check_player(k)?;
    if opponents.len() + 1 != g.num_players() {
        return Err(GameError::DimensionMismatch(format!(
            "expected {} opponent vectors, got {}",
            g.num_players() - 1,
            opponents.len()
        )));
    }
    let mut vectors = opponents.to_vec();
    vectors.insert(k, vec![Rational::zero(); g.shape()[k]]);
    MixedProfile::from_vectors_unchecked(vectors.clone()).check_shape(g)?;
    let values = pure_payoffs(g, &vectors, k);
    let best = values.iter().max().expect("at least one strategy").clone();
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(s, _)| s)
        .collect())
}

/// True iff no player gains by switching to any pure strategy, with equal
/// payoff across each player's support. Works for any number of players.
pub fn verify_mixed(g: &Game, profile: &MixedProfile) -> Result<bool, GameError> {
    profile.check_shape(g)?;
    for k in 0..g.num_players() {
        let values = pure_payoffs(g, profile.vectors(), k);
        let value: Rational = values.iter().zip(profile.player(k)).map(|(v, p)| v * p).sum();
        let ok = values
            .iter()
            .zip(profile.player(k))
            .all(|(v, p)| *v <= value && (p.is_zero() || *v == value));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pure minmax: the lowest best-reply payoff the opponents can hold player
/// `k` to using pure joint strategies.
pub fn minmax(g: &Game, k: usize) -> Result<Rational, GameError> {
    g.check_player(k)?;
    let worst = g
        .profiles()
        .filter(|p| p[k] == 0)
        .map(|mut p| {
            (0..g.shape()[k])
                .map(|s| {
                    p[k] = s;
                    g.payoff(&p, k).clone()
                })
                .max()
                .expect("at least one strategy")
        })
        .min()
        .expect("at least one profile");
    Ok(worst)
}

/// A support pair whose indifference system has a continuum of solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateSupport {
    /// Support of each player.
    pub supports: [Vec<usize>; 2],
    /// Players whose probability vector is not pinned down by the system.
    pub free_players: Vec<usize>,
    /// One equilibrium with exactly these supports.
    pub witness: MixedProfile,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MixedSolution {
    /// Isolated equilibria, ordered by support then lexicographically.
    pub equilibria: Vec<MixedProfile>,
    pub degenerate: Vec<DegenerateSupport>,
}

impl MixedSolution {
    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty() && self.degenerate.is_empty()
    }
}

/// Non-empty subsets of `0..n`, ordered by size then lexicographically.
fn supports(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// Outcome of solving one player's mixing vector for a support pair.
enum Side {
    Isolated(Vec<Rational>),
    Free(Vec<Rational>),
    Infeasible,
}

/// Finds the mixing vector (over `mix_support`, length `mix_count`) that
/// makes the indifferent player's strategies in `indiff_support` optimal.
/// `payoff(i, j)` is the indifferent player's payoff for own strategy `i`
/// against mixing strategy `j`.
fn solve_side<F>(
    payoff: F,
    indiff_count: usize,
    indiff_support: &[usize],
    mix_count: usize,
    mix_support: &[usize],
) -> Side
where
    F: Fn(usize, usize) -> Rational,
{
    let unknowns = mix_support.len() + 1;
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(indiff_support.len() + 1);
    let mut b = Vec::with_capacity(indiff_support.len() + 1);
    for &i in indiff_support {
        let mut row: Vec<Rational> = mix_support.iter().map(|&j| payoff(i, j)).collect();
        row.push(-Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    let mut sum_row = vec![Rational::one(); unknowns];
    sum_row[unknowns - 1] = Rational::zero();
    a.push(sum_row);
    b.push(Rational::one());

    let off_support: Vec<usize> = (0..indiff_count)
        .filter(|i| !indiff_support.contains(i))
        .collect();

    match linalg::solve(&a, &b) {
        Solution::Inconsistent => Side::Infeasible,
        Solution::Unique(x) => {
            let (probs, value) = x.split_at(mix_support.len());
            let value = &value[0];
            if probs.iter().any(|p| !p.is_positive()) {
                return Side::Infeasible;
            }
            let beaten = off_support.iter().any(|&i| {
                let v: Rational = mix_support
                    .iter()
                    .zip(probs)
                    .map(|(&j, p)| payoff(i, j) * p)
                    .sum();
                v > *value
            });
            if beaten {
                Side::Infeasible
            } else {
                Side::Isolated(spread(mix_count, mix_support, probs))
            }
        }
        Solution::Continuum { .. } => {
            match positive_witness(&payoff, indiff_support, &off_support, mix_support) {
                Some(probs) => Side::Free(spread(mix_count, mix_support, &probs)),
                None => Side::Infeasible,
            }
        }
    }
}

fn spread(count: usize, support: &[usize], probs: &[Rational]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); count];
    for (&j, p) in support.iter().zip(probs) {
        v[j] = p.clone();
    }
    v
}

/// Maximizes the smallest probability on the support subject to the
/// indifference and best-reply constraints; `Some` when it is positive.
///
/// Variables: one probability per support strategy, then `v+`, `v-`
/// (the free indifference value split in two), then `t`.
fn positive_witness<F>(
    payoff: &F,
    indiff_support: &[usize],
    off_support: &[usize],
    mix_support: &[usize],
) -> Option<Vec<Rational>>
where
    F: Fn(usize, usize) -> Rational,
{
    let s = mix_support.len();
    let n = s + 3;
    let value_row = |i: usize| {
        let mut row: Vec<Rational> = mix_support.iter().map(|&j| payoff(i, j)).collect();
        row.push(-Rational::one());
        row.push(Rational::one());
        row.push(Rational::zero());
        row
    };
    let mut lp = LinearProgram {
        objective: {
            let mut c = vec![Rational::zero(); n];
            c[n - 1] = Rational::one();
            c
        },
        ..LinearProgram::default()
    };
    for &i in indiff_support {
        lp.eq.push((value_row(i), Rational::zero()));
    }
    let mut sum = vec![Rational::zero(); n];
    for v in sum.iter_mut().take(s) {
        *v = Rational::one();
    }
    lp.eq.push((sum, Rational::one()));
    for &i in off_support {
        lp.le.push((value_row(i), Rational::zero()));
    }
    for j in 0..s {
        let mut row = vec![Rational::zero(); n];
        row[j] = -Rational::one();
        row[n - 1] = Rational::one();
        lp.le.push((row, Rational::zero()));
    }
    let mut cap = vec![Rational::zero(); n];
    cap[n - 1] = Rational::one();
    lp.le.push((cap, Rational::one()));

    match lp::maximize(&lp) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some(x[..s].to_vec()),
        _ => None,
    }
}

/// Support enumeration over every pair of supports.
pub fn mixed_equilibria_2p(g: &Game) -> Result<MixedSolution, EquilibriumError> {
    if g.num_players() != 2 {
        return Err(EquilibriumError::NotTwoPlayer(g.num_players()));
    }
    let (m, n) = (g.shape()[0], g.shape()[1]);
    let row_payoff = |i: usize, j: usize| g.payoff(&[i, j], 0).clone();
    let col_payoff = |j: usize, i: usize| g.payoff(&[i, j], 1).clone();

    let mut out = MixedSolution::default();
    let row_supports = supports(m);
    let col_supports = supports(n);
    for rows in &row_supports {
        for cols in &col_supports {
            // Column mix keeps the row player indifferent over `rows`, and
            // vice versa.
            let q = solve_side(row_payoff, m, rows, n, cols);
            if matches!(q, Side::Infeasible) {
                continue;
            }
            let p = solve_side(col_payoff, n, cols, m, rows);
            let (p, p_free) = match p {
                Side::Infeasible => continue,
                Side::Isolated(v) => (v, false),
                Side::Free(v) => (v, true),
            };
            let (q, q_free) = match q {
                Side::Infeasible => unreachable!(),
                Side::Isolated(v) => (v, false),
                Side::Free(v) => (v, true),
            };
            let profile = MixedProfile::from_vectors_unchecked(vec![p, q]);
            debug_assert!(verify_mixed(g, &profile).unwrap_or(false));
            if p_free || q_free {
                let free_players = [(0, p_free), (1, q_free)]
                    .into_iter()
                    .filter(|(_, f)| *f)
                    .map(|(k, _)| k)
                    .collect();
                out.degenerate.push(DegenerateSupport {
                    supports: [rows.clone(), cols.clone()],
                    free_players,
                    witness: profile,
                });
            } else {
                out.equilibria.push(profile);
            }
        }
    }
    Ok(out)
}

/// Flags describing an equilibrium set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub multiple_pure: bool,
    /// Players whose payoffs are one constant in this game.
    pub uniform_for: Vec<usize>,
    /// Every player's payoffs are constant.
    pub non_competitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumSet {
    pub pure: Vec<PureProfile>,
    /// Populated for two-player games only.
    pub mixed: Vec<MixedProfile>,
    pub degenerate: Vec<DegenerateSupport>,
    pub diagnostics: Diagnostics,
}

/// Pure equilibria for any game, plus mixed ones when there are two players.
pub fn solve(g: &Game) -> EquilibriumSet {
    let pure = pure_equilibria(g);
    let mixed = if g.num_players() == 2 {
        mixed_equilibria_2p(g).expect("two players")
    } else {
        MixedSolution::default()
    };
    let uniform_for: Vec<usize> = (0..g.num_players()).filter(|&k| g.is_uniform_for(k)).collect();
    let diagnostics = Diagnostics {
        multiple_pure: pure.len() > 1,
        non_competitive: uniform_for.len() == g.num_players(),
        uniform_for,
    };
    EquilibriumSet {
        pure,
        mixed: mixed.equilibria,
        degenerate: mixed.degenerate,
        diagnostics,
    }
}

/// True iff every payoff of `subject` lands in one grain of `perceiver`'s
/// partition, so that `subject` is indifferent everywhere in the perceiver's matrix.
pub fn diagnose_uniformity(
    cg: &CoarseGame,
    perceiver: usize,
    subject: usize,
) -> Result<bool, GameError> {
    cg.base().check_player(perceiver)?;
    cg.base().check_player(subject)?;
    let partition = cg.partition(perceiver);
    let mut cells = cg.base().cells().iter();
    let first = partition.coarsen(&cells.next().expect("non-empty game")[subject])?;
    for c in cells {
        if !first.contains(&c[subject]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Competitiveness {
    /// Per subject player: uniform in the perceiver's matrix.
    pub uniform_for: Vec<bool>,
    /// Every player is uniform: the perceived game has no strategic content.
    pub non_competitive: bool,
}

pub fn diagnose_competitiveness(
    cg: &CoarseGame,
    perceiver: usize,
) -> Result<Competitiveness, GameError> {
    let uniform_for = (0..cg.num_players())
        .map(|subject| diagnose_uniformity(cg, perceiver, subject))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Competitiveness {
        non_competitive: uniform_for.iter().all(|&u| u),
        uniform_for,
    })
}

/// Lifts a pure profile to point masses.
pub fn lift(g: &Game, p: &PureProfile) -> MixedProfile {
    MixedProfile::pure(g, p)
}

/// Point-mass vector helper re-exported for callers building opponents.
pub fn pure_vector(count: usize, at: usize) -> Vec<Rational> {
    point_mass(count, at)
}
