mod common;

use common::{chosen_probability, random_bias, random_policy, random_problem};
use gnrpa_core::bias::beta_distance;
use gnrpa_core::{
    adapt_naive, adapt_optimized, code_move, playout, replay, validate_tours, BiasWeights, Policy,
    RouteState,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn codes_are_a_bijection(n in 2usize..150, a in 0usize..150, b in 0usize..150) {
        let (from, to) = (a % n, b % n);
        let code = code_move(from, to, n).unwrap();
        prop_assert!(code < n * n);
        prop_assert_eq!((code % n, code / n), (from, to));
        prop_assert!(code_move(n, to, n).is_err());
    }

    #[test]
    fn softmax_ignores_a_common_shift(seed: u64, shift in -50.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let policy = random_policy(&mut rng, p.n(), 3.0);
        let mut shifted = policy.clone();
        shifted.weights_mut().iter_mut().for_each(|w| *w += shift);
        let root = RouteState::initial(&p);
        prop_assume!(!root.is_terminal(&p));
        let moves = root.legal_moves(&p).unwrap();
        let betas = vec![0.0; moves.len()];
        let a = policy.move_distribution(&moves, &betas).unwrap();
        let b = shifted.move_distribution(&moves, &betas).unwrap();
        prop_assert!((a.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (x, y) in a.probs.iter().zip(&b.probs) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn playouts_are_feasible_and_replayable(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 12);
        let policy = random_policy(&mut rng, p.n(), 2.0);
        let bias = random_bias(&mut rng);
        let rec = playout(&policy, bias.as_ref(), &p, &mut rng);
        rec.check().unwrap();
        prop_assert!(rec.len() <= p.instance.customers() + p.instance.fleet_size);
        let state = replay(&p, &rec.sequence).unwrap();
        prop_assert!(state.is_terminal(&p));
        prop_assert_eq!(state.score(&p).unwrap(), rec.score);
        let checked = validate_tours(&p, &rec.tours()).unwrap();
        prop_assert_eq!(checked, rec.score);
        let mut visited = vec![false; p.n()];
        for m in rec.sequence.iter().filter(|m| !m.is_depot_return()) {
            prop_assert!(!std::mem::replace(&mut visited[m.to], true));
        }
    }

    #[test]
    fn same_seed_same_playout(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let policy = random_policy(&mut rng, p.n(), 2.0);
        let bias = random_bias(&mut rng);
        let a = playout(&policy, bias.as_ref(), &p, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let b = playout(&policy, bias.as_ref(), &p, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn biases_never_reward(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let policy = random_policy(&mut rng, p.n(), 1.0);
        let rec = playout(&policy, Some(&BiasWeights::default()), &p, &mut rng);
        for step in rec.steps() {
            prop_assert!(step.betas.iter().all(|&b| b <= 0.0));
        }
    }

    #[test]
    fn adapt_variants_agree_and_conserve_mass(seed: u64, alpha in 0.01f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let sampler = random_policy(&mut rng, p.n(), 2.0);
        let rec = playout(&sampler, random_bias(&mut rng).as_ref(), &p, &mut rng);
        let policy = random_policy(&mut rng, p.n(), 2.0);
        let (mut naive, mut fast) = (policy.clone(), policy.clone());
        adapt_naive(&mut naive, &rec, alpha).unwrap();
        adapt_optimized(&mut fast, &rec, alpha).unwrap();
        for (a, b) in naive.weights().iter().zip(fast.weights()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let before: f64 = policy.weights().iter().sum();
        let after: f64 = fast.weights().iter().sum();
        prop_assert!((before - after).abs() < 1e-9);
        for i in 0..rec.len() {
            let single = rec.single_step(i);
            let mut q = policy.clone();
            adapt_optimized(&mut q, &single, alpha).unwrap();
            let step = single.step(0);
            let delta: f64 = unique(step.codes).iter().map(|&c| q.weight(c) - policy.weight(c)).sum();
            prop_assert!(delta.abs() < 1e-12);
            let p0 = chosen_probability(&policy, step.codes, step.betas, step.chosen);
            let p1 = chosen_probability(&q, step.codes, step.betas, step.chosen);
            prop_assert!(p1 >= p0 - 1e-12, "{} -> {}", p0, p1);
        }
    }

    #[test]
    fn distance_bias_alone_matches_distance_init(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let nrpad = Policy::distance_init(&p.geometry);
        let distance_only = BiasWeights::new(1.0, 0.0, 0.0).unwrap();
        let root = RouteState::initial(&p);
        prop_assume!(!root.is_terminal(&p));
        let moves = root.legal_moves(&p).unwrap();
        let betas: Vec<f64> = moves.iter().map(|m| beta_distance(m.from, m.to, &p)).collect();
        let a = nrpad.move_distribution(&moves, &vec![0.0; moves.len()]).unwrap();
        let b = Policy::uniform(p.n()).move_distribution(&moves, &betas).unwrap();
        prop_assert_eq!(a.probs, b.probs);
        let x = playout(&nrpad, None, &p, &mut ChaCha8Rng::seed_from_u64(seed));
        let y = playout(&Policy::uniform(p.n()), Some(&distance_only), &p, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(x.sequence, y.sequence);
        prop_assert_eq!(x.score, y.score);
    }

    #[test]
    fn distance_init_weights_are_normalized(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, 10);
        let w = Policy::distance_init(&p.geometry);
        prop_assert!(w.weights().iter().all(|&x| (-1.0..=0.0).contains(&x)));
        prop_assert!(w.weights().iter().any(|&x| x == -1.0) || p.geometry.max_dist == 0.0);
    }
}

fn unique(codes: &[usize]) -> Vec<usize> {
    let mut c = codes.to_vec();
    c.sort_unstable();
    c.dedup();
    c
}
