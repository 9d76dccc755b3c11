//! Policy weights and the Gibbs (softmax) move distribution.
//!
//! A move from node `i` to node `j` is keyed by `i + n * j`, independent of
//! which vehicle makes it, so the table holds `n * n` weights. The probability
//! of a legal move `m` is proportional to `exp(w[code(m)] / tau + beta(m))`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::state::Move;

/// Policy code of the arc `from -> to`.
pub fn code_move(from: usize, to: usize, n: usize) -> Result<usize> {
    if from >= n || to >= n {
        return Err(Error::contract(format!(
            "arc {from} -> {to} out of range for {n} nodes"
        )));
    }
    Ok(from + n * to)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    n: usize,
    tau: f64,
    weights: Vec<f64>,
}

impl Policy {
    /// All weights zero, temperature one.
    pub fn uniform(n: usize) -> Self {
        Policy {
            n,
            tau: 1.0,
            weights: vec![0.0; n * n],
        }
    }

    /// Weights set to the normalized negative distance of each arc.
    pub fn distance_init(geom: &Geometry) -> Self {
        let n = geom.len();
        let mut policy = Policy::uniform(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    policy.weights[i + n * j] = -geom.dist(i, j) / geom.max_dist;
                }
            }
        }
        policy
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Config(format!(
                "temperature must be positive, got {tau}"
            )));
        }
        self.tau = tau;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn weight(&self, code: usize) -> f64 {
        self.weights[code]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    #[inline]
    pub fn logit(&self, code: usize, beta: f64) -> f64 {
        self.weights[code] / self.tau + beta
    }

    pub fn move_distribution(&self, moves: &[Move], betas: &[f64]) -> Result<MoveDistribution> {
        if moves.is_empty() {
            return Err(Error::contract("move distribution over an empty move list"));
        }
        if moves.len() != betas.len() {
            return Err(Error::contract(format!(
                "{} moves but {} biases",
                moves.len(),
                betas.len()
            )));
        }
        let mut odds: Vec<f64> = moves
            .iter()
            .zip(betas)
            .map(|(m, &b)| self.logit(m.code, b))
            .collect();
        let z = exp_shifted(&mut odds);
        let probs = odds.iter().map(|o| o / z).collect();
        Ok(MoveDistribution {
            moves: moves.to_vec(),
            odds,
            z,
            probs,
        })
    }
}

/// Softmax over a set of legal moves.
///
/// `odds` are the exponentiated logits after subtracting the largest one, so
/// they differ from the raw terms by a common factor that cancels in `probs`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveDistribution {
    pub moves: Vec<Move>,
    pub odds: Vec<f64>,
    pub z: f64,
    pub probs: Vec<f64>,
}

impl MoveDistribution {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.odds, self.z, rng)
    }
}

/// Replaces logits by `exp(logit - max)` in place and returns their sum.
#[inline]
pub(crate) fn exp_shifted(logits: &mut [f64]) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for l in logits.iter_mut() {
        *l = (*l - max).exp();
        z += *l;
    }
    z
}

/// Draws index `k` with probability `odds[k] / z`.
#[inline]
pub(crate) fn sample_index<R: Rng + ?Sized>(odds: &[f64], z: f64, rng: &mut R) -> usize {
    if odds.len() == 1 {
        return 0;
    }
    let mut u = rng.gen::<f64>() * z;
    for (k, &o) in odds.iter().enumerate() {
        u -= o;
        if u < 0.0 {
            return k;
        }
    }
    // rounding left a sliver past the end; fall back to the last move with nonzero odds
    odds.iter()
        .rposition(|&o| o > 0.0)
        .unwrap_or(odds.len() - 1)
}
