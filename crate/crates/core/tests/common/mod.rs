#![allow(dead_code)]

use gnrpa_core::{BiasWeights, Instance, Node, Policy, Problem};
use rand::Rng;

/// Random instance with at most `max_nodes` nodes, depot included.
pub fn random_problem<R: Rng>(rng: &mut R, max_nodes: usize) -> Problem {
    let n = rng.gen_range(2..=max_nodes);
    let capacity = rng.gen_range(10..=30);
    let depot_due = rng.gen_range(300.0..800.0f64).round();
    let mut nodes = vec![Node {
        id: 0,
        x: rng.gen_range(0..=100) as f64,
        y: rng.gen_range(0..=100) as f64,
        demand: 0,
        ready: 0.0,
        due: depot_due,
        service: 0.0,
    }];
    for id in 1..n {
        let ready = rng.gen_range(0..200) as f64;
        nodes.push(Node {
            id,
            x: rng.gen_range(0..=100) as f64,
            y: rng.gen_range(0..=100) as f64,
            demand: rng.gen_range(1..=capacity / 2),
            ready,
            due: ready + rng.gen_range(10..150) as f64,
            service: rng.gen_range(0..20) as f64,
        });
    }
    let fleet = rng.gen_range(1..=4);
    Problem::new(Instance::new("synthetic", fleet, capacity, nodes).unwrap())
}

pub fn random_policy<R: Rng>(rng: &mut R, n: usize, spread: f64) -> Policy {
    let mut p = Policy::uniform(n);
    for w in p.weights_mut() {
        *w = rng.gen_range(-spread..=spread);
    }
    p
}

pub fn random_bias<R: Rng>(rng: &mut R) -> Option<BiasWeights> {
    if rng.gen_bool(0.3) {
        None
    } else {
        Some(
            BiasWeights::new(
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..80.0),
                rng.gen_range(0.0..15.0),
            )
            .unwrap(),
        )
    }
}

/// Probability of the chosen move at one step, computed from scratch.
pub fn chosen_probability(policy: &Policy, codes: &[usize], betas: &[f64], chosen: usize) -> f64 {
    let logits: Vec<f64> = codes
        .iter()
        .zip(betas)
        .map(|(&c, &b)| policy.weight(c) / policy.tau() + b)
        .collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logits.iter().map(|l| (l - max).exp()).sum();
    (logits[chosen] - max).exp() / z
}
