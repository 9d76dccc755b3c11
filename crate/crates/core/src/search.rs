//! Nested rollout policy adaptation.
//!
//! Level 0 is one playout: moves are drawn from the softmax of
//! `w[code] / tau + beta` until the routing state is terminal. Level `L`
//! runs `N` searches at level `L - 1`, each from its own copy of the policy,
//! keeps the best sequence seen (ties replace the incumbent) and after every
//! iteration shifts its copy of the policy toward that sequence.
//!
//! Plain NRPA, distance-initialized NRPA and the biased variant differ only
//! in the starting weights and whether the bias is switched on.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bias::{beta_arc, BiasWeights};
use crate::error::{Error, Result};
use crate::geometry::Problem;
use crate::instance::DEPOT;
use crate::policy::{exp_shifted, sample_index, Policy};
use crate::state::{Move, Options, RouteState, ScoreBreakdown};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Zero initial weights, no bias.
    Nrpa,
    /// Weights initialized to normalized negative arc lengths, no bias.
    Nrpad,
    /// Zero initial weights plus the dynamic bias.
    Gnrpa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Nrpa, Algorithm::Nrpad, Algorithm::Gnrpa];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Nrpa => "nrpa",
            Algorithm::Nrpad => "nrpad",
            Algorithm::Gnrpa => "gnrpa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nrpa" => Ok(Algorithm::Nrpa),
            "nrpad" => Ok(Algorithm::Nrpad),
            "gnrpa" => Ok(Algorithm::Gnrpa),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?}, expected nrpa, nrpad or gnrpa"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub level: usize,
    pub iterations: usize,
    pub alpha: f64,
    pub algorithm: Algorithm,
    pub bias_weights: BiasWeights,
    /// Wall-clock limit in seconds, checked before every playout.
    pub time_budget: f64,
    pub seed: u64,
    /// Stop as soon as a playout scores at or below this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            level: 3,
            iterations: 100,
            alpha: 1.0,
            algorithm: Algorithm::Gnrpa,
            bias_weights: BiasWeights::default(),
            time_budget: 1800.0,
            seed: 0,
            target: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.time_budget.is_nan() || self.time_budget <= 0.0 {
            return Err(Error::Config(format!(
                "time budget must be positive, got {}",
                self.time_budget
            )));
        }
        let w = &self.bias_weights;
        BiasWeights::new(w.distance, w.waiting, w.lateness)?;
        Ok(())
    }

    /// The bias used in playouts, if the algorithm has one.
    pub fn bias(&self) -> Option<BiasWeights> {
        match self.algorithm {
            Algorithm::Gnrpa => Some(self.bias_weights),
            Algorithm::Nrpa | Algorithm::Nrpad => None,
        }
    }

    pub fn initial_policy(&self, problem: &Problem) -> Policy {
        match self.algorithm {
            Algorithm::Nrpa | Algorithm::Gnrpa => Policy::uniform(problem.n()),
            Algorithm::Nrpad => Policy::distance_init(&problem.geometry),
        }
    }
}

/// One finished playout with everything Adapt needs.
///
/// For every step the codes and biases of all legal moves are kept, along
/// with the index of the move that was played. Steps are stored back to
/// back; `offsets[i]..offsets[i + 1]` is step `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayoutRecord {
    pub score: ScoreBreakdown,
    pub sequence: Vec<Move>,
    offsets: Vec<usize>,
    codes: Vec<usize>,
    betas: Vec<f64>,
    chosen: Vec<usize>,
}

/// Borrowed view of one step of a [`PlayoutRecord`].
#[derive(Debug, Clone, Copy)]
pub struct Step<'a> {
    pub codes: &'a [usize],
    pub betas: &'a [f64],
    pub chosen: usize,
}

impl Default for PlayoutRecord {
    fn default() -> Self {
        PlayoutRecord {
            score: ScoreBreakdown::new(0, 0, 0.0),
            sequence: Vec::new(),
            offsets: vec![0],
            codes: Vec::new(),
            betas: Vec::new(),
            chosen: Vec::new(),
        }
    }
}

impl PlayoutRecord {
    /// Builds a record from explicit per-step data and checks it is consistent.
    pub fn from_steps(
        score: ScoreBreakdown,
        sequence: Vec<Move>,
        codes: Vec<Vec<usize>>,
        betas: Vec<Vec<f64>>,
        chosen: Vec<usize>,
    ) -> Result<Self> {
        if codes.len() != sequence.len()
            || betas.len() != sequence.len()
            || chosen.len() != sequence.len()
        {
            return Err(Error::contract(
                "record fields have different numbers of steps",
            ));
        }
        let mut rec = PlayoutRecord {
            score,
            ..PlayoutRecord::default()
        };
        for (i, (c, b)) in codes.iter().zip(&betas).enumerate() {
            if c.len() != b.len() || c.is_empty() {
                return Err(Error::contract(format!(
                    "step {i}: {} codes, {} biases",
                    c.len(),
                    b.len()
                )));
            }
            rec.codes.extend_from_slice(c);
            rec.betas.extend_from_slice(b);
            rec.offsets.push(rec.codes.len());
        }
        rec.sequence = sequence;
        rec.chosen = chosen;
        rec.check()?;
        Ok(rec)
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn step(&self, i: usize) -> Step<'_> {
        let range = self.offsets[i]..self.offsets[i + 1];
        Step {
            codes: &self.codes[range.clone()],
            betas: &self.betas[range],
            chosen: self.chosen[i],
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = Step<'_>> + '_ {
        (0..self.len()).map(|i| self.step(i))
    }

    /// Only step `i`, as a record of its own.
    pub fn single_step(&self, i: usize) -> PlayoutRecord {
        let s = self.step(i);
        PlayoutRecord {
            score: self.score,
            sequence: vec![self.sequence[i]],
            offsets: vec![0, s.codes.len()],
            codes: s.codes.to_vec(),
            betas: s.betas.to_vec(),
            chosen: vec![s.chosen],
        }
    }

    pub fn check(&self) -> Result<()> {
        let steps = self.sequence.len();
        if self.chosen.len() != steps || self.offsets.len() != steps + 1 {
            return Err(Error::contract(format!(
                "record has {steps} moves, {} choices and {} step offsets",
                self.chosen.len(),
                self.offsets.len().saturating_sub(1)
            )));
        }
        if self.codes.len() != self.betas.len() || self.offsets.last() != Some(&self.codes.len()) {
            return Err(Error::contract("record codes and biases are misaligned"));
        }
        for (i, s) in self.steps().enumerate() {
            match s.codes.get(s.chosen) {
                Some(&c) if c == self.sequence[i].code => {}
                _ => {
                    return Err(Error::contract(format!(
                        "step {i}: chosen index {} does not hold the played move's code",
                        s.chosen
                    )))
                }
            }
        }
        Ok(())
    }

    /// Customer sequences of the vehicles that left the depot.
    pub fn tours(&self) -> Vec<Vec<usize>> {
        let mut tours = Vec::new();
        let mut current = Vec::new();
        for m in &self.sequence {
            if m.to == DEPOT {
                tours.push(std::mem::take(&mut current));
            } else {
                current.push(m.to);
            }
        }
        if !current.is_empty() {
            tours.push(current);
        }
        tours
    }

    fn clear(&mut self) {
        self.sequence.clear();
        self.offsets.clear();
        self.offsets.push(0);
        self.codes.clear();
        self.betas.clear();
        self.chosen.clear();
    }
}

/// Plays `sequence` from the initial state, checking every move.
pub fn replay(problem: &Problem, sequence: &[Move]) -> Result<RouteState> {
    let mut state = RouteState::initial(problem);
    for &m in sequence {
        state.play(problem, m)?;
    }
    Ok(state)
}

#[derive(Debug, Default)]
struct Scratch {
    customers: Vec<usize>,
    odds: Vec<f64>,
}

/// One playout under `policy`, with the bias switched on iff `bias` is set.
pub fn playout<R: Rng + ?Sized>(
    policy: &Policy,
    bias: Option<&BiasWeights>,
    problem: &Problem,
    rng: &mut R,
) -> PlayoutRecord {
    let mut rec = PlayoutRecord::default();
    playout_into(
        policy,
        bias,
        problem,
        rng,
        &mut rec,
        &mut Scratch::default(),
    );
    rec
}

fn playout_into<R: Rng + ?Sized>(
    policy: &Policy,
    bias: Option<&BiasWeights>,
    problem: &Problem,
    rng: &mut R,
    rec: &mut PlayoutRecord,
    scratch: &mut Scratch,
) {
    rec.clear();
    let n = problem.n();
    let mut state = RouteState::initial(problem);
    loop {
        let from = state.position();
        match state.options(problem, &mut scratch.customers) {
            Options::Terminal => break,
            Options::ForcedReturn => {
                let m = Move::new(from, DEPOT, n);
                rec.codes.push(m.code);
                rec.betas.push(0.0);
                rec.chosen.push(0);
                rec.sequence.push(m);
                state.play_return(problem);
            }
            Options::Customers => {
                let vt = state.clock();
                scratch.odds.clear();
                for &j in &scratch.customers {
                    let code = from + n * j;
                    let beta = match bias {
                        Some(w) => beta_arc(from, j, vt, w, problem),
                        None => 0.0,
                    };
                    rec.codes.push(code);
                    rec.betas.push(beta);
                    scratch.odds.push(policy.logit(code, beta));
                }
                let z = exp_shifted(&mut scratch.odds);
                let k = sample_index(&scratch.odds, z, rng);
                let to = scratch.customers[k];
                rec.chosen.push(k);
                rec.sequence.push(Move::new(from, to, n));
                state.play_customer(problem, to);
            }
        }
        rec.offsets.push(rec.codes.len());
    }
    rec.score = state.score_unchecked(problem);
}

/// Adapt by the book: probabilities come from the unchanged policy while
/// the gradient accumulates in a copy, which then replaces the policy.
pub fn adapt_naive(policy: &mut Policy, record: &PlayoutRecord, alpha: f64) -> Result<()> {
    record.check()?;
    let tau = policy.tau();
    let mut next = policy.clone();
    for step in record.steps() {
        let odds: Vec<f64> = step
            .codes
            .iter()
            .zip(step.betas)
            .map(|(&c, &b)| (policy.weight(c) / tau + b).exp())
            .collect();
        let z: f64 = odds.iter().sum();
        for (m, (&code, &o)) in step.codes.iter().zip(&odds).enumerate() {
            let delta = if m == step.chosen { 1.0 } else { 0.0 };
            next.weights_mut()[code] -= alpha / tau * (o / z - delta);
        }
    }
    *policy = next;
    Ok(())
}

/// Adapt without copying the policy: all step probabilities are computed
/// first, then the gradient is applied in place.
pub fn adapt_optimized(policy: &mut Policy, record: &PlayoutRecord, alpha: f64) -> Result<()> {
    record.check()?;
    adapt_in_place(policy, record, alpha, &mut Vec::new());
    Ok(())
}

fn adapt_in_place(policy: &mut Policy, record: &PlayoutRecord, alpha: f64, probs: &mut Vec<f64>) {
    let tau = policy.tau();
    probs.clear();
    probs.extend(
        record
            .codes
            .iter()
            .zip(&record.betas)
            .map(|(&c, &b)| policy.logit(c, b)),
    );
    for w in record.offsets.windows(2) {
        let step = &mut probs[w[0]..w[1]];
        let z = exp_shifted(step);
        step.iter_mut().for_each(|o| *o /= z);
    }
    let scale = alpha / tau;
    let weights = policy.weights_mut();
    for (i, w) in record.offsets.windows(2).enumerate() {
        let chosen = w[0] + record.chosen[i];
        for k in w[0]..w[1] {
            let delta = if k == chosen { 1.0 } else { 0.0 };
            weights[record.codes[k]] -= scale * (probs[k] - delta);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed: f64,
    pub playouts: u64,
    pub scalar: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_score: ScoreBreakdown,
    pub best_record: PlayoutRecord,
    pub playout_count: u64,
    /// One point per improvement of the best score.
    pub trace: Vec<TracePoint>,
    pub elapsed: f64,
    /// Whether the time budget or the target cut the search short.
    pub truncated: bool,
}

struct Searcher<'a, R> {
    problem: &'a Problem,
    bias: Option<BiasWeights>,
    iterations: usize,
    alpha: f64,
    rng: R,
    start: Instant,
    deadline: Instant,
    target: f64,
    playouts: u64,
    best: f64,
    trace: Vec<TracePoint>,
    stopped: bool,
    scratch: Scratch,
    probs: Vec<f64>,
    // one spare candidate record per level, recycled across iterations
    spares: Vec<PlayoutRecord>,
}

impl<R: Rng> Searcher<'_, R> {
    fn should_stop(&mut self) -> bool {
        if !self.stopped
            && ((self.playouts > 0 && self.best <= self.target) || Instant::now() >= self.deadline)
        {
            self.stopped = true;
        }
        self.stopped
    }

    /// Writes the best record found at `level` into `out`; false if no playout ran.
    fn search(&mut self, level: usize, policy: &Policy, out: &mut PlayoutRecord) -> bool {
        if level == 0 {
            if self.should_stop() {
                return false;
            }
            playout_into(
                policy,
                self.bias.as_ref(),
                self.problem,
                &mut self.rng,
                out,
                &mut self.scratch,
            );
            self.playouts += 1;
            if out.score.scalar < self.best {
                self.best = out.score.scalar;
                self.trace.push(TracePoint {
                    elapsed: self.start.elapsed().as_secs_f64(),
                    playouts: self.playouts,
                    scalar: self.best,
                });
            }
            return true;
        }
        let mut policy = policy.clone();
        let mut candidate = std::mem::take(&mut self.spares[level]);
        let mut found = false;
        for _ in 0..self.iterations {
            if !self.search(level - 1, &policy, &mut candidate) {
                break;
            }
            if !found || candidate.score.scalar <= out.score.scalar {
                std::mem::swap(out, &mut candidate);
                found = true;
            }
            if self.stopped {
                break;
            }
            adapt_in_place(&mut policy, out, self.alpha, &mut self.probs);
        }
        self.spares[level] = candidate;
        found
    }
}

/// Nested search at `config.level` starting from `policy`.
pub fn gnrpa(policy: &Policy, config: &SearchConfig, problem: &Problem) -> Result<SearchResult> {
    config.validate()?;
    if policy.n() != problem.n() {
        return Err(Error::Config(format!(
            "policy is sized for {} nodes, instance has {}",
            policy.n(),
            problem.n()
        )));
    }
    let start = Instant::now();
    let mut searcher = Searcher {
        problem,
        bias: config.bias(),
        iterations: config.iterations,
        alpha: config.alpha,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        start,
        deadline: start + Duration::from_secs_f64(config.time_budget.min(1e9)),
        target: config.target.unwrap_or(f64::NEG_INFINITY),
        playouts: 0,
        best: f64::INFINITY,
        trace: Vec::new(),
        stopped: false,
        scratch: Scratch::default(),
        probs: Vec::new(),
        spares: vec![PlayoutRecord::default(); config.level + 1],
    };
    let mut best = PlayoutRecord::default();
    if !searcher.search(config.level, policy, &mut best) {
        return Err(Error::Config(
            "time budget expired before the first playout".into(),
        ));
    }
    Ok(SearchResult {
        best_score: best.score,
        best_record: best,
        playout_count: searcher.playouts,
        trace: searcher.trace,
        elapsed: start.elapsed().as_secs_f64(),
        truncated: searcher.stopped,
    })
}

/// Runs the configured algorithm from its own fresh starting policy.
pub fn run(config: &SearchConfig, problem: &Problem) -> Result<SearchResult> {
    config.validate()?;
    gnrpa(&config.initial_policy(problem), config, problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, Node};

    fn node(id: usize, x: f64, y: f64, ready: f64, due: f64) -> Node {
        Node {
            id,
            x,
            y,
            demand: u32::from(id != 0),
            ready,
            due,
            service: if id == 0 { 0.0 } else { 1.0 },
        }
    }

    fn two_customers() -> Problem {
        Problem::new(
            Instance::new(
                "toy",
                1,
                10,
                vec![
                    node(0, 0.0, 0.0, 0.0, 100.0),
                    node(1, 1.0, 0.0, 0.0, 50.0),
                    node(2, 0.0, 1.0, 0.0, 50.0),
                ],
            )
            .unwrap(),
        )
    }

    fn record(codes: Vec<Vec<usize>>, chosen: Vec<usize>, n: usize) -> PlayoutRecord {
        let sequence = codes
            .iter()
            .zip(&chosen)
            .map(|(c, &k)| Move::new(c[k] % n, c[k] / n, n))
            .collect();
        let betas = codes.iter().map(|c| vec![0.0; c.len()]).collect();
        PlayoutRecord::from_steps(
            ScoreBreakdown::new(0, 1, 1.0),
            sequence,
            codes,
            betas,
            chosen,
        )
        .unwrap()
    }

    #[test]
    fn algorithm_tags() {
        assert_eq!("GNRPA".parse::<Algorithm>().unwrap(), Algorithm::Gnrpa);
        assert_eq!(Algorithm::Nrpad.to_string(), "nrpad");
        assert!("beam".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = SearchConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SearchConfig {
            iterations: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SearchConfig {
            alpha: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SearchConfig {
            time_budget: 0.0,
            ..ok
        }
        .validate()
        .is_err());
    }

    #[test]
    fn single_move_step_is_unchanged() {
        let mut policy = Policy::uniform(3);
        let rec = record(vec![vec![3]], vec![0], 3);
        adapt_naive(&mut policy, &rec, 1.0).unwrap();
        assert_eq!(policy.weight(3), 0.0);
    }

    #[test]
    fn two_equal_moves() {
        let mut policy = Policy::uniform(3);
        let rec = record(vec![vec![3, 6]], vec![0], 3);
        adapt_naive(&mut policy, &rec, 1.0).unwrap();
        assert_eq!(policy.weight(3), 0.5);
        assert_eq!(policy.weight(6), -0.5);
    }

    #[test]
    fn shared_code_accumulates() {
        // code 3 is legal at both steps: +0.5 when chosen at step 0, -0.5 at step 1
        let rec = record(vec![vec![3, 6], vec![3, 7]], vec![0, 1], 3);
        let mut naive = Policy::uniform(3);
        adapt_naive(&mut naive, &rec, 1.0).unwrap();
        assert_eq!(naive.weight(3), 0.0);
        assert_eq!(naive.weight(6), -0.5);
        assert_eq!(naive.weight(7), 0.5);
        let mut fast = Policy::uniform(3);
        adapt_optimized(&mut fast, &rec, 1.0).unwrap();
        assert_eq!(fast, naive);
    }

    #[test]
    fn empty_record_leaves_policy() {
        let mut policy = Policy::distance_init(&two_customers().geometry);
        let before = policy.clone();
        adapt_optimized(&mut policy, &PlayoutRecord::default(), 1.0).unwrap();
        assert_eq!(policy, before);
    }

    #[test]
    fn malformed_record_rejected() {
        let mut rec = record(vec![vec![3, 6]], vec![0], 3);
        rec.chosen.push(1);
        assert!(adapt_naive(&mut Policy::uniform(3), &rec, 1.0).is_err());
        assert!(adapt_optimized(&mut Policy::uniform(3), &rec, 1.0).is_err());
        let seq = vec![Move::new(0, 1, 3)];
        assert!(PlayoutRecord::from_steps(
            ScoreBreakdown::new(0, 0, 0.0),
            seq,
            vec![vec![6]],
            vec![vec![0.0]],
            vec![0]
        )
        .is_err());
    }

    #[test]
    fn playout_record_is_consistent() {
        let p = two_customers();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rec = playout(
            &Policy::uniform(3),
            Some(&BiasWeights::default()),
            &p,
            &mut rng,
        );
        rec.check().unwrap();
        assert_eq!(rec.len(), 2);
        let state = replay(&p, &rec.sequence).unwrap();
        assert!(state.is_terminal(&p));
        assert_eq!(state.score(&p).unwrap(), rec.score);
        // first step: both customers from the depot
        assert_eq!(rec.step(0).codes, &[3, 6]);
    }

    #[test]
    fn toy_orders_are_equally_likely() {
        // exact enumeration: the only feasible sequences are 1,2 and 2,1
        let p = two_customers();
        let policy = Policy::uniform(3);
        let trials = 20_000;
        let mut first_is_one = 0;
        for seed in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rec = playout(&policy, None, &p, &mut rng);
            let tours = rec.tours();
            assert!(tours == vec![vec![1, 2]] || tours == vec![vec![2, 1]]);
            if tours[0][0] == 1 {
                first_is_one += 1;
            }
        }
        let freq = first_is_one as f64 / trials as f64;
        // 4 standard deviations of a fair coin over 20k trials
        assert!(
            (freq - 0.5).abs() < 4.0 * (0.25f64 / trials as f64).sqrt(),
            "{freq}"
        );
    }

    #[test]
    fn level_zero_is_one_playout() {
        let p = two_customers();
        let cfg = SearchConfig {
            level: 0,
            ..SearchConfig::default()
        };
        let res = run(&cfg, &p).unwrap();
        assert_eq!(res.playout_count, 1);
        assert_eq!(res.trace.len(), 1);
        assert!(!res.truncated);
    }

    #[test]
    fn level_one_adapts_toward_first_best() {
        // level 1, N = 2: the second playout is drawn from the policy adapted once toward the first
        let p = two_customers();
        let cfg = SearchConfig {
            level: 1,
            iterations: 2,
            algorithm: Algorithm::Nrpa,
            seed: 9,
            ..SearchConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut policy = Policy::uniform(3);
        let first = playout(&policy, None, &p, &mut rng);
        adapt_naive(&mut policy, &first, 1.0).unwrap();
        // hand-computed: first step (2 legal moves) moves +-0.5, second step has one move
        let chosen = first.sequence[0].code;
        let other = first
            .step(0)
            .codes
            .iter()
            .copied()
            .find(|&c| c != chosen)
            .unwrap();
        assert_eq!(policy.weight(chosen), 0.5);
        assert_eq!(policy.weight(other), -0.5);
        let second = playout(&policy, None, &p, &mut rng);
        let best = if second.score.scalar <= first.score.scalar {
            &second
        } else {
            &first
        };

        let res = run(&cfg, &p).unwrap();
        assert_eq!(res.playout_count, 2);
        assert_eq!(res.best_record.sequence, best.sequence);
    }

    #[test]
    fn time_budget_truncates() {
        let p = two_customers();
        let cfg = SearchConfig {
            level: 3,
            iterations: 1000,
            time_budget: 0.05,
            ..SearchConfig::default()
        };
        let res = run(&cfg, &p).unwrap();
        assert!(res.truncated);
        assert!(res.playout_count < 1_000_000_000);
        assert!(res.elapsed < 5.0);
    }

    #[test]
    fn target_stops_search() {
        let p = two_customers();
        let cfg = SearchConfig {
            level: 2,
            iterations: 50,
            target: Some(f64::INFINITY),
            ..SearchConfig::default()
        };
        let res = run(&cfg, &p).unwrap();
        assert_eq!(res.playout_count, 1);
        assert!(res.truncated);
    }
}
