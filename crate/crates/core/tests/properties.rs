//! Randomized invariants of the perception pipeline, solvers and repeated-game
//! analysis. Each case draws a seed and builds its inputs from a ChaCha
//! stream so the generators can be shared with the acceptance run.

mod common;

use std::cmp::Ordering;

use cgg_core::coarse::{coarsen, emp, grain_compare, Grain, Partition};
use cgg_core::document::{parse_document, serialize_game};
use cgg_core::equilibrium::{diagnose_uniformity, lift, mixed_equilibria_2p, pure_equilibria, verify_mixed};
use cgg_core::game::{expected_payoff, CoarseGame, Perspective};
use cgg_core::perception::{differential_report, incidental_differential, unrecognized_differential, RealizedOutcome, Selection, SolutionKind};
use cgg_core::profile::{MixedProfile, PureProfile};
use cgg_core::rational::{int, ratio, Rational};
use cgg_core::repeated::{critical_delta, cooperation_verdict, discounted_value, perspective_thresholds, Roles, StageRoles};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points inside a grain worth re-querying: endpoints it owns and a few
/// interior values.
fn members(g: &Grain) -> Vec<Rational> {
    match g {
        Grain::Singleton(x) => vec![x.clone()],
        Grain::Interval { lo, hi } => {
            let mut out = Vec::new();
            match (lo.value(), hi.value()) {
                (Some(a), Some(b)) => {
                    out.push((a + b) / int(2));
                    out.push((a * int(3) + b) / int(4));
                }
                (Some(a), None) => out.push(a + int(7)),
                (None, Some(b)) => out.push(b - ratio(1, 3)),
                (None, None) => out.push(int(0)),
            }
            if lo.is_closed() {
                out.push(lo.value().unwrap().clone());
            }
            if hi.is_closed() {
                out.push(hi.value().unwrap().clone());
            }
            out
        }
    }
}

/// Explicit grains plus a few implicit singletons a query can produce.
fn sample_grains(r: &mut ChaCha8Rng, p: &Partition) -> Vec<Grain> {
    let mut gs: Vec<Grain> = p.grains().to_vec();
    for _ in 0..4 {
        if let Ok(g) = coarsen(p, &common::probe(r, p, -15, 15)) {
            gs.push(g);
        }
    }
    gs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn emp_of_coarsen_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::partition(&mut r, 6, -10, 10);
        let a = common::probe(&mut r, &p, -15, 15);
        let b = common::probe(&mut r, &p, -15, 15);
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let (gx, gy) = match (coarsen(&p, &x), coarsen(&p, &y)) {
            (Ok(gx), Ok(gy)) => (gx, gy),
            _ => return Ok(()),
        };
        if let (Ok(ex), Ok(ey)) = (emp(&gx), emp(&gy)) {
            prop_assert!(ex <= ey, "x={x} y={y} gx={gx} gy={gy}");
        }
    }

    #[test]
    fn coarsen_returns_one_grain_stable_under_requery(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::partition(&mut r, 6, -10, 10);
        let x = common::probe(&mut r, &p, -15, 15);
        if let Ok(g) = coarsen(&p, &x) {
            prop_assert!(g.contains(&x));
            let holders = p.grains().iter().filter(|h| h.contains(&x)).count();
            prop_assert!(holders <= 1);
            for y in members(&g) {
                prop_assert!(g.contains(&y), "{y} not in {g}");
                prop_assert_eq!(coarsen(&p, &y).unwrap(), g.clone());
            }
        } else {
            prop_assert!(p.grains().iter().all(|h| !h.contains(&x)));
        }
    }

    #[test]
    fn finest_partition_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = common::rational(&mut r, -1000, 1000, 97);
        prop_assert_eq!(emp(&coarsen(&Partition::finest(), &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn emp_is_injective_on_bounded_grains(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::partition(&mut r, 6, -10, 10);
        let gs = sample_grains(&mut r, &p);
        for a in gs.iter().filter(|g| g.is_bounded()) {
            for b in gs.iter().filter(|g| g.is_bounded()) {
                if a != b {
                    prop_assert_ne!(emp(a).unwrap(), emp(b).unwrap(), "{} vs {}", a, b);
                }
            }
        }
    }

    #[test]
    fn grain_compare_is_a_total_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::partition(&mut r, 6, -10, 10);
        let gs = sample_grains(&mut r, &p);
        let cmp = |a: &Grain, b: &Grain| grain_compare(a, b).expect("grains of one partition compare");
        for a in &gs {
            prop_assert_eq!(cmp(a, a), Ordering::Equal);
            for b in &gs {
                let ab = cmp(a, b);
                prop_assert_eq!(ab, cmp(b, a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                for c in &gs {
                    if ab != Ordering::Greater && cmp(b, c) != Ordering::Greater {
                        prop_assert_ne!(cmp(a, c), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn perception_keeps_shape_and_names(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = common::random_coarse_game(&mut r, players, 3, 10);
        for k in 0..players {
            let view = cg.coarse_view(k).unwrap();
            prop_assert_eq!(view.shape(), cg.base().shape());
            prop_assert!(view.cells().iter().all(|c| c.len() == players));
            let perceived = cg.perceived_game(k).unwrap().game;
            prop_assert_eq!(perceived.shape(), cg.base().shape());
            prop_assert_eq!(perceived.players(), cg.base().players());
            prop_assert_eq!(perceived.all_strategies(), cg.base().all_strategies());
        }
    }

    #[test]
    fn finest_perception_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = CoarseGame::finest(common::game(&mut r, players, 3, 10));
        for k in 0..players {
            prop_assert_eq!(&cg.perceived_game(k).unwrap().game, cg.base());
        }
    }

    #[test]
    fn perception_preserves_cellwise_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = common::random_coarse_game(&mut r, players, 3, 10);
        let base = cg.base();
        for k in 0..players {
            let seen = cg.perceived_game(k).unwrap().game;
            for (a, pa) in base.cells().iter().zip(seen.cells()) {
                for (b, pb) in base.cells().iter().zip(seen.cells()) {
                    for j in 0..players {
                        if a[j] <= b[j] {
                            prop_assert!(pa[j] <= pb[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expected_payoff_is_multilinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let g = common::game(&mut r, players, 3, 10);
        let base = common::mixed_profile(&mut r, &g);
        let j = r.gen_range(0..players);
        let a = common::distribution(&mut r, g.shape()[j]);
        let b = common::distribution(&mut r, g.shape()[j]);
        let t = ratio(r.gen_range(0..=7), 7);
        let blend: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| &t * x + (int(1) - &t) * y).collect();
        for k in 0..players {
            let e = |v: Vec<Rational>| expected_payoff(&g, &base.with_player(j, v).unwrap(), k).unwrap();
            let lhs = e(blend.clone());
            let rhs = &t * e(a.clone()) + (int(1) - &t) * e(b.clone());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn expected_payoff_matches_double_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::game(&mut r, 2, 4, 10);
        let prof = common::mixed_profile(&mut r, &g);
        for k in 0..2 {
            let mut total = int(0);
            for (i, p) in prof.player(0).iter().enumerate() {
                for (j, q) in prof.player(1).iter().enumerate() {
                    total += p * q * g.payoff(&[i, j], k);
                }
            }
            prop_assert_eq!(expected_payoff(&g, &prof, k).unwrap(), total);
        }
    }

    #[test]
    fn base_pure_equilibria_survive_perception(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = common::random_coarse_game(&mut r, players, 3, 10);
        let base = pure_equilibria(cg.base());
        for k in 0..players {
            let seen = pure_equilibria(&cg.perceived_game(k).unwrap().game);
            for e in &base {
                prop_assert!(seen.contains(e), "{:?} lost in player {}'s view", e, k);
            }
        }
    }

    #[test]
    fn uniformity_diagnosis_matches_perceived_matrix(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let g = common::game(&mut r, players, 3, 4);
        // Wide grains make flattening common.
        let partitions = (0..players).map(|_| common::bounded_partition(&mut r, 3, -6, 6)).collect();
        let cg = CoarseGame::with_emp(g, partitions).unwrap();
        for l in 0..players {
            let seen = cg.perceived_game(l).unwrap().game;
            for k in 0..players {
                prop_assert_eq!(diagnose_uniformity(&cg, l, k).unwrap(), seen.is_uniform_for(k));
            }
        }
    }

    #[test]
    fn perceived_games_have_an_equilibrium(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cg = common::random_coarse_game(&mut r, 2, 4, 10);
        for k in 0..2 {
            let seen = cg.perceived_game(k).unwrap().game;
            let sol = mixed_equilibria_2p(&seen).unwrap();
            prop_assert!(!sol.is_empty());
            for e in &sol.equilibria {
                prop_assert!(verify_mixed(&seen, e).unwrap());
            }
            for d in &sol.degenerate {
                prop_assert!(verify_mixed(&seen, &d.witness).unwrap());
                for k in 0..2 {
                    prop_assert_eq!(d.witness.support(k), d.supports[k].clone());
                }
            }
        }
    }

    #[test]
    fn solver_output_verifies(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let g = common::game(&mut r, players, 3, 10);
        for e in pure_equilibria(&g) {
            prop_assert!(verify_mixed(&g, &lift(&g, &e)).unwrap());
        }
        if players == 2 {
            for e in mixed_equilibria_2p(&g).unwrap().equilibria {
                prop_assert!(verify_mixed(&g, &e).unwrap());
            }
        }
    }

    #[test]
    fn differentials_are_lens_free_under_finest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = CoarseGame::finest(common::game(&mut r, players, 3, 10));
        let g = cg.base();
        let eqs = pure_equilibria(g);
        prop_assume!(!eqs.is_empty());
        let expectation = &eqs[r.gen_range(0..eqs.len())];
        let realized = PureProfile::new(g, g.shape().iter().map(|&c| r.gen_range(0..c)).collect()).unwrap();
        for subject in 0..players {
            let objective = unrecognized_differential(&cg, subject, Some(expectation), &realized).unwrap();
            for lens in 0..players {
                let d = incidental_differential(&cg, lens, subject, expectation, &realized).unwrap();
                prop_assert_eq!(d.value(), objective.value());
            }
        }
    }

    #[test]
    fn differentials_vanish_when_expectations_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = common::random_coarse_game(&mut r, players, 3, 10);
        let mut views: Vec<_> = (0..players).map(Perspective::Perceived).collect();
        views.push(Perspective::Base);
        let sets: Vec<_> = views
            .iter()
            .map(|&p| pure_equilibria(&cg.game_for(p).unwrap()))
            .collect();
        prop_assume!(sets.iter().all(|s| s.len() == 1 && s[0] == sets[0][0]));
        let g = cg.base();
        let expectations = vec![lift(g, &sets[0][0]); players];
        let report = differential_report(&cg, RealizedOutcome::from_expectations(expectations), &Selection::Auto, SolutionKind::Pure).unwrap();
        for s in &report.subjects {
            prop_assert_eq!(s.unrecognized.value(), int(0));
            for d in &s.by_lens {
                prop_assert_eq!(d.value(), int(0));
            }
        }
    }

    #[test]
    fn differential_report_reproduces_its_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cg = common::random_coarse_game(&mut r, 2, 3, 10);
        let picks: Vec<_> = (0..2)
            .map(|k| pure_equilibria(&cg.perceived_game(k).unwrap().game))
            .collect();
        let base = pure_equilibria(cg.base());
        prop_assume!(picks.iter().all(|p| !p.is_empty()) && !base.is_empty());
        let g = cg.base();
        let expectations = picks.iter().map(|p| lift(g, &p[0])).collect();
        let report = differential_report(&cg, RealizedOutcome::from_expectations(expectations), &Selection::Profile(lift(g, &base[0])), SolutionKind::Pure).unwrap();
        let realized = &report.realized.profile;
        for s in &report.subjects {
            for (lens, d) in s.by_lens.iter().enumerate() {
                let seen = cg.perceived_game(lens).unwrap().game;
                prop_assert_eq!(&d.actual, &expected_payoff(&seen, realized, s.subject).unwrap());
                prop_assert_eq!(&d.expected, &expected_payoff(&seen, &report.realized.expectations[lens], s.subject).unwrap());
                prop_assert_eq!(d.value(), &d.actual - &d.expected);
            }
            prop_assert_eq!(&s.unrecognized.expected, &expected_payoff(g, &report.base_expectation, s.subject).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_partial_sums(seed in any::<u64>()) {
        let mut r = rng(seed);
        let first = common::rational(&mut r, -10, 10, 8);
        let rest = common::rational(&mut r, -10, 10, 8);
        let k = r.gen_range(0..=19);
        let delta = ratio(k, 20);
        let closed = discounted_value(&first, &rest, &delta).unwrap();
        // Enough terms that the geometric tail is below 2^-41.
        let terms = if k <= 10 { 50 } else { 700 };
        let sum = common::geometric_partial_sum(&first, &rest, k, 20, terms);
        let tolerance = ratio(1, 1 << 40);
        prop_assert!((closed - sum).abs() <= tolerance);
    }

    #[test]
    fn verdict_matches_discounted_comparison(seed in any::<u64>()) {
        let mut r = rng(seed);
        let punishment = common::rational(&mut r, -10, 8, 4);
        let cooperation = &punishment + common::rational(&mut r, 0, 5, 4) + ratio(1, 4);
        let temptation = &cooperation + common::rational(&mut r, 0, 5, 4) + ratio(1, 4);
        let roles = StageRoles { player: 0, mutual_cooperation: cooperation.clone(), temptation: temptation.clone(), punishment: punishment.clone() };
        prop_assert!(roles.is_meaningful());
        let t = critical_delta(&roles, "p0").unwrap();
        prop_assert!(t.value > int(0) && t.value < int(1));
        let delta = ratio(r.gen_range(0..=100), 101);
        let keep = discounted_value(&cooperation, &cooperation, &delta).unwrap();
        let deviate = discounted_value(&temptation, &punishment, &delta).unwrap();
        prop_assert_eq!(cooperation_verdict(&t.value, &delta).unwrap(), keep >= deviate);
    }

    #[test]
    fn finest_thresholds_agree_across_perspectives(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::game(&mut r, 2, 3, 10);
        prop_assume!(g.shape().iter().all(|&c| c >= 2));
        let roles = Roles { cooperate: [0, 0], defect: [1, 1] };
        let analysis = perspective_thresholds(&CoarseGame::finest(g), &roles).unwrap();
        for k in 0..2 {
            let base = analysis.entry(Perspective::Base, k).unwrap().outcome.clone();
            for l in 0..2 {
                prop_assert_eq!(&analysis.entry(Perspective::Perceived(l), k).unwrap().outcome, &base);
            }
        }
    }

    #[test]
    fn subjective_thresholds_are_computable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::game(&mut r, 2, 2, 10);
        prop_assume!(g.shape() == [2, 2]);
        let cg = common::coarse_game(&mut r, g);
        let roles = Roles { cooperate: [0, 0], defect: [1, 1] };
        for l in 0..2 {
            let seen = cg.perceived_game(l).unwrap().game;
            for k in 0..2 {
                let stage = StageRoles::read(&seen, &roles, k).unwrap();
                if stage.is_meaningful() {
                    let t = critical_delta(&stage, "p").unwrap();
                    prop_assert!(t.value >= int(0) && t.value < int(1));
                }
            }
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let players = r.gen_range(2..=3);
        let cg = common::random_coarse_game(&mut r, players, 3, 10);
        let text = serialize_game(&cg, None);
        let doc = parse_document(&text).unwrap();
        prop_assert_eq!(&doc.game, &cg);
        prop_assert_eq!(serialize_game(&doc.game, None), text);
    }
}

#[test]
fn grid_oracle_agrees_with_every_scenario_equilibrium() {
    for s in cgg_core::scenarios::all() {
        let cg = &s.game;
        for p in cg.perspectives() {
            let g = cg.game_for(p).unwrap();
            let mut profiles: Vec<MixedProfile> = pure_equilibria(&g).iter().map(|e| lift(&g, e)).collect();
            if g.num_players() == 2 {
                let sol = mixed_equilibria_2p(&g).unwrap();
                profiles.extend(sol.equilibria);
                profiles.extend(sol.degenerate.into_iter().map(|d| d.witness));
            }
            for e in &profiles {
                assert!(common::grid_oracle_agrees(&g, e, 20), "{} {:?}: {}", s.name, p, e);
            }
        }
    }
}
