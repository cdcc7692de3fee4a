//! Random generators shared by the property suites and the acceptance run.
#![allow(dead_code)]

use cgg_core::coarse::{Coverage, Endpoint, Grain, Partition};
use cgg_core::game::{CoarseGame, Game};
use cgg_core::profile::MixedProfile;
use cgg_core::rational::{int, ratio, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// A rational `p/q` with `q` in `1..=max_den`, clamped to `[lo, hi]`.
pub fn rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(lo * q..=hi * q);
    ratio(p, q)
}

/// Sorted distinct rationals in `[lo, hi]`.
fn cut_points<R: Rng>(rng: &mut R, count: usize, lo: i64, hi: i64) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = (0..count).map(|_| rational(rng, lo, hi, 3)).collect();
    cuts.sort();
    cuts.dedup();
    cuts
}

/// A valid partition with up to `max_cuts` breakpoints inside `[lo, hi]`.
///
/// Each gap between neighbouring breakpoints is either an interval grain or
/// left to implicit singletons; each breakpoint goes to the left grain, the
/// right grain, its own singleton, or nobody. The outer rays are sometimes
/// unbounded grains.
pub fn partition<R: Rng>(rng: &mut R, max_cuts: usize, lo: i64, hi: i64) -> Partition {
    if rng.gen_range(0..10) == 1 {
        return Partition::lowest();
    }
    build_partition(rng, max_cuts, lo, hi, true)
}

/// Like [`partition`] but without unbounded grains, so that every value in
/// `[lo, hi]` has a midpoint to be perceived as.
pub fn bounded_partition<R: Rng>(rng: &mut R, max_cuts: usize, lo: i64, hi: i64) -> Partition {
    build_partition(rng, max_cuts, lo, hi, false)
}

fn build_partition<R: Rng>(rng: &mut R, max_cuts: usize, lo: i64, hi: i64, rays: bool) -> Partition {
    if rng.gen_range(0..10) == 0 {
        return Partition::finest();
    }
    let n = rng.gen_range(1..=max_cuts);
    let cuts = cut_points(rng, n, lo, hi);
    let m = cuts.len();
    // Gap i lies between cut i-1 and cut i; gap 0 and gap m are the rays.
    let present: Vec<bool> = (0..=m)
        .map(|gap| (rays || (gap != 0 && gap != m)) && rng.gen_bool(0.7))
        .collect();
    let mut owner = Vec::with_capacity(m);
    for i in 0..m {
        let mut options = vec![Owner::Nobody, Owner::Point];
        if present[i] {
            options.push(Owner::Left);
        }
        if present[i + 1] {
            options.push(Owner::Right);
        }
        owner.push(*options.choose(rng).unwrap());
    }
    let mut grains = Vec::new();
    for gap in 0..=m {
        if !present[gap] {
            continue;
        }
        let lo_end = if gap == 0 {
            Endpoint::Unbounded
        } else if owner[gap - 1] == Owner::Right {
            Endpoint::Closed(cuts[gap - 1].clone())
        } else {
            Endpoint::Open(cuts[gap - 1].clone())
        };
        let hi_end = if gap == m {
            Endpoint::Unbounded
        } else if owner[gap] == Owner::Left {
            Endpoint::Closed(cuts[gap].clone())
        } else {
            Endpoint::Open(cuts[gap].clone())
        };
        grains.push(Grain::interval(lo_end, hi_end).expect("cut points are distinct"));
    }
    for (i, o) in owner.iter().enumerate() {
        if *o == Owner::Point {
            grains.push(Grain::point(cuts[i].clone()));
        }
    }
    grains.shuffle(rng);
    let coverage = if grains_cover_line(&present, &owner) && rng.gen_bool(0.5) {
        Coverage::Strict
    } else {
        Coverage::ImplicitFinest
    };
    Partition::new(grains, coverage).expect("generated grains are disjoint")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Nobody,
    Point,
    Left,
    Right,
}

fn grains_cover_line(present: &[bool], owner: &[Owner]) -> bool {
    present.iter().all(|&p| p) && owner.iter().all(|&o| o != Owner::Nobody)
}

/// A value that often sits exactly on a breakpoint of `p`.
pub fn probe<R: Rng>(rng: &mut R, p: &Partition, lo: i64, hi: i64) -> Rational {
    let edges: Vec<Rational> = p
        .grains()
        .iter()
        .flat_map(|g| match g {
            Grain::Singleton(x) => vec![x.clone()],
            Grain::Interval { lo, hi } => lo.value().into_iter().chain(hi.value()).cloned().collect(),
        })
        .collect();
    if !edges.is_empty() && rng.gen_bool(0.3) {
        edges.choose(rng).unwrap().clone()
    } else {
        rational(rng, lo, hi, 6)
    }
}

/// A game with `players` players, up to `max_strategies` strategies each and
/// payoffs in `[-bound, bound]`.
pub fn game<R: Rng>(rng: &mut R, players: usize, max_strategies: usize, bound: i64) -> Game {
    let strategies: Vec<Vec<String>> = (0..players)
        .map(|k| {
            let count = rng.gen_range(1..=max_strategies);
            (0..count).map(|s| format!("s{k}_{s}")).collect()
        })
        .collect();
    let names = (0..players).map(|k| format!("p{k}")).collect();
    // Small payoff alphabets make ties, and hence equilibria, common.
    let den = rng.gen_range(1..=4);
    Game::from_fn(names, strategies, |_| {
        (0..players).map(|_| rational(rng, -bound, bound, den)).collect()
    })
    .expect("generated game is valid")
}

pub fn coarse_game<R: Rng>(rng: &mut R, base: Game) -> CoarseGame {
    let partitions = (0..base.num_players()).map(|_| bounded_partition(rng, 5, -12, 12)).collect();
    CoarseGame::with_emp(base, partitions).expect("one partition per player")
}

/// A random probability vector with small denominators.
pub fn distribution<R: Rng>(rng: &mut R, count: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..count).map(|_| rng.gen_range(0..=6)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        let mut v = vec![int(0); count];
        v[rng.gen_range(0..count)] = int(1);
        return v;
    }
    weights.iter().map(|&w| ratio(w, total)).collect()
}

pub fn mixed_profile<R: Rng>(rng: &mut R, g: &Game) -> MixedProfile {
    MixedProfile::new(g.shape().iter().map(|&c| distribution(rng, c)).collect()).expect("valid distributions")
}

/// Every probability vector over `count` strategies on the grid of step
/// `1/steps`.
pub fn grid(count: usize, steps: i64) -> Vec<Vec<Rational>> {
    fn fill(left: i64, slots: usize, steps: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<Rational>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&w| ratio(w, steps)).collect());
            prefix.pop();
            return;
        }
        for w in 0..=left {
            prefix.push(w);
            fill(left - w, slots - 1, steps, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(steps, count, steps, &mut Vec::new(), &mut out);
    out
}

/// No grid deviation by any single player strictly beats `profile`.
pub fn grid_oracle_agrees(g: &Game, profile: &MixedProfile, steps: i64) -> bool {
    use cgg_core::game::expected_payoff;
    (0..g.num_players()).all(|k| {
        let current = expected_payoff(g, profile, k).unwrap();
        grid(g.shape()[k], steps).into_iter().all(|v| {
            let deviated = profile.with_player(k, v).unwrap();
            expected_payoff(g, &deviated, k).unwrap() <= current
        })
    })
}

/// A random game under random partitions.
pub fn random_coarse_game<R: Rng>(rng: &mut R, players: usize, max_strategies: usize, bound: i64) -> CoarseGame {
    let base = game(rng, players, max_strategies, bound);
    coarse_game(rng, base)
}

/// `first + rest * (d + d^2 + ... + d^(terms-1))` for `d = a/b`, summed over
/// the common denominator `b^(terms-1)` so no intermediate reduction runs.
pub fn geometric_partial_sum(first: &Rational, rest: &Rational, a: i64, b: i64, terms: u32) -> Rational {
    use num_bigint::BigInt;
    let n = terms - 1;
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let mut a_pow = vec![BigInt::from(1)];
    let mut b_pow = vec![BigInt::from(1)];
    for _ in 0..n {
        a_pow.push(a_pow.last().unwrap() * &a);
        b_pow.push(b_pow.last().unwrap() * &b);
    }
    let numer: BigInt = (1..=n as usize).map(|t| &a_pow[t] * &b_pow[n as usize - t]).sum();
    first + rest * Rational::new(numer, b_pow[n as usize].clone())
}
