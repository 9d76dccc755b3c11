//! Independent solution checker.
//!
//! Walks a set of tours without going through [`RouteState`](crate::state::RouteState)
//! and recomputes the score. Distances are summed leg by leg in tour order,
//! the same order a playout drives them, so the result matches the search
//! bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Problem;
use crate::instance::DEPOT;
use crate::search::SearchConfig;
use crate::state::ScoreBreakdown;

/// Solution file written for every run.
///
/// `tours` lists the customers of each vehicle in visiting order; the depot
/// at either end is implied (and tolerated if present).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub instance: String,
    pub seed: u64,
    pub config: SearchConfig,
    pub tours: Vec<Vec<usize>>,
    pub nv: usize,
    pub km: f64,
    pub unvisited: usize,
}

impl SolutionFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Checks every hard constraint and returns the recomputed score.
pub fn validate_tours(problem: &Problem, tours: &[Vec<usize>]) -> Result<ScoreBreakdown> {
    let inst = &problem.instance;
    let g = &problem.geometry;
    let n = inst.len();
    let depot = inst.depot();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    let mut distance = 0.0;
    let mut vehicles = 0;

    if tours.len() > inst.fleet_size {
        violations.push(format!(
            "{} tours for a fleet of {}",
            tours.len(),
            inst.fleet_size
        ));
    }
    for (t, raw) in tours.iter().enumerate() {
        let tour = strip_depot(raw);
        if tour.is_empty() {
            violations.push(format!("tour {t} serves no customer"));
            continue;
        }
        if let Some(&bad) = tour.iter().find(|&&c| c == DEPOT || c >= n) {
            violations.push(format!("tour {t} visits node {bad}, not a customer"));
            continue;
        }
        vehicles += 1;
        let mut load = 0u32;
        let mut clock = depot.ready;
        let mut prev = DEPOT;
        for &c in tour {
            let node = &inst.nodes[c];
            if std::mem::replace(&mut seen[c], true) {
                violations.push(format!("customer {c} visited twice"));
            }
            let d = g.dist(prev, c);
            distance += d;
            let arrival = clock + d;
            if arrival > node.due {
                violations.push(format!(
                    "tour {t}: customer {c} reached at {arrival}, due {}",
                    node.due
                ));
            }
            clock = arrival.max(node.ready) + node.service;
            load += node.demand;
            prev = c;
        }
        let back = g.dist(prev, DEPOT);
        distance += back;
        if clock + back > depot.due {
            violations.push(format!(
                "tour {t}: back at the depot at {}, depot closes at {}",
                clock + back,
                depot.due
            ));
        }
        if load > inst.capacity {
            violations.push(format!(
                "tour {t}: load {load} exceeds capacity {}",
                inst.capacity
            ));
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidSolution {
            instance: inst.name.clone(),
            violations,
        });
    }
    let unvisited = seen.iter().skip(1).filter(|&&s| !s).count();
    Ok(ScoreBreakdown::new(unvisited, vehicles, distance))
}

/// Validates a stored solution and checks its reported numbers against the recomputation.
pub fn validate_solution(problem: &Problem, sol: &SolutionFile) -> Result<ScoreBreakdown> {
    let score = validate_tours(problem, &sol.tours)?;
    let mut violations = Vec::new();
    if !sol.instance.eq_ignore_ascii_case(&problem.instance.name) {
        violations.push(format!(
            "solution is for {}, not {}",
            sol.instance, problem.instance.name
        ));
    }
    if sol.nv != score.n_vehicles {
        violations.push(format!(
            "reports {} vehicles, tours use {}",
            sol.nv, score.n_vehicles
        ));
    }
    if sol.km.to_bits() != score.distance.to_bits() {
        violations.push(format!(
            "reports {} km, tours drive {}",
            sol.km, score.distance
        ));
    }
    if sol.unvisited != score.unvisited {
        violations.push(format!(
            "reports {} unvisited, tours leave {}",
            sol.unvisited, score.unvisited
        ));
    }
    if violations.is_empty() {
        Ok(score)
    } else {
        Err(Error::InvalidSolution {
            instance: problem.instance.name.clone(),
            violations,
        })
    }
}

fn strip_depot(tour: &[usize]) -> &[usize] {
    let tour = tour.strip_prefix(&[DEPOT]).unwrap_or(tour);
    tour.strip_suffix(&[DEPOT]).unwrap_or(tour)
}
