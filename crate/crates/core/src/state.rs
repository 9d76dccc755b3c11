//! Forward simulation of vehicles leaving the depot one after another.
//!
//! Only the active vehicle moves. It may go to any unvisited customer it can
//! serve within capacity, before the customer's due date, and still get back
//! to the depot before the depot closes. When it can serve nobody, it is sent
//! home and the next vehicle starts; a vehicle never returns early.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Problem;
use crate::instance::DEPOT;
use crate::policy::code_move;

/// A (departure, arrival) arc together with its policy code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub code: usize,
}

impl Move {
    pub fn new(from: usize, to: usize, n: usize) -> Self {
        Move {
            from,
            to,
            code: from + n * to,
        }
    }

    pub fn is_depot_return(&self) -> bool {
        self.to == DEPOT
    }
}

/// Objective of a finished playout. Lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub unvisited: usize,
    pub n_vehicles: usize,
    pub distance: f64,
    pub scalar: f64,
}

pub const UNVISITED_WEIGHT: f64 = 1e6;
pub const VEHICLE_WEIGHT: f64 = 1e3;

impl ScoreBreakdown {
    pub fn new(unvisited: usize, n_vehicles: usize, distance: f64) -> Self {
        ScoreBreakdown {
            unvisited,
            n_vehicles,
            distance,
            scalar: unvisited as f64 * UNVISITED_WEIGHT
                + n_vehicles as f64 * VEHICLE_WEIGHT
                + distance,
        }
    }

    /// Reporting order: unserved customers, then vehicles, then distance.
    pub fn lexicographic_key(&self) -> (usize, usize, f64) {
        (self.unvisited, self.n_vehicles, self.distance)
    }

    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.unvisited
            .cmp(&other.unvisited)
            .then(self.n_vehicles.cmp(&other.n_vehicles))
            .then(self.distance.total_cmp(&other.distance))
    }
}

/// What the active vehicle may do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Options {
    /// The caller's buffer holds the reachable customers, ascending.
    Customers,
    /// Nothing reachable; the vehicle must go home and hand over to the next one.
    ForcedReturn,
    Terminal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteState {
    // bit j set <=> customer j still to serve; bit 0 (depot) is never set
    unvisited: Vec<u64>,
    n_unvisited: usize,
    vehicle_idx: usize,
    position: usize,
    clock: f64,
    load: u32,
    tours: Vec<Vec<usize>>,
    current: Vec<usize>,
    distance: f64,
    vehicles_used: usize,
}

impl RouteState {
    pub fn initial(p: &Problem) -> Self {
        let n = p.n();
        let mut unvisited = vec![0u64; n.div_ceil(64)];
        for j in 1..n {
            unvisited[j / 64] |= 1 << (j % 64);
        }
        RouteState {
            unvisited,
            n_unvisited: n - 1,
            vehicle_idx: 0,
            position: DEPOT,
            clock: p.instance.depot().ready,
            load: 0,
            tours: Vec::new(),
            current: Vec::new(),
            distance: 0.0,
            vehicles_used: 0,
        }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// Instant at which the active vehicle is ready to leave its position.
    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn load(&self) -> u32 {
        self.load
    }

    pub fn vehicle_idx(&self) -> usize {
        self.vehicle_idx
    }

    pub fn vehicles_used(&self) -> usize {
        self.vehicles_used
    }

    pub fn n_unvisited(&self) -> usize {
        self.n_unvisited
    }

    pub fn is_visited(&self, j: usize) -> bool {
        self.unvisited[j / 64] & (1 << (j % 64)) == 0
    }

    /// Tours closed so far (customers only, depot implied at both ends).
    pub fn tours(&self) -> &[Vec<usize>] {
        &self.tours
    }

    /// Distance driven so far, plus the way home of the active vehicle if it left the depot.
    pub fn total_distance(&self, p: &Problem) -> f64 {
        if self.current.is_empty() {
            self.distance
        } else {
            self.distance + p.geometry.dist(self.position, DEPOT)
        }
    }

    /// All tours with at least one customer, the active one included.
    pub fn solution_tours(&self) -> Vec<Vec<usize>> {
        let mut tours = self.tours.clone();
        if !self.current.is_empty() {
            tours.push(self.current.clone());
        }
        tours
    }

    /// Whether the active vehicle can serve customer `j` next.
    #[inline]
    pub fn admits(&self, p: &Problem, j: usize) -> bool {
        let node = &p.instance.nodes[j];
        let g = &p.geometry;
        if self.load + node.demand > p.instance.capacity {
            return false;
        }
        let arrival = self.clock + g.dist(self.position, j);
        if arrival > node.due {
            return false;
        }
        arrival.max(node.ready) + node.service + g.dist(j, DEPOT) <= p.instance.depot().due
    }

    /// Fills `buf` with the customers the active vehicle can reach and says what kind of step comes next.
    pub fn options(&self, p: &Problem, buf: &mut Vec<usize>) -> Options {
        buf.clear();
        if self.n_unvisited == 0 {
            return Options::Terminal;
        }
        for (w, &word) in self.unvisited.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let j = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.admits(p, j) {
                    buf.push(j);
                }
            }
        }
        if !buf.is_empty() {
            Options::Customers
        } else if !self.current.is_empty() && self.vehicle_idx + 1 < p.instance.fleet_size {
            Options::ForcedReturn
        } else {
            // an empty vehicle that can reach nobody means no identical vehicle can either
            Options::Terminal
        }
    }

    pub fn legal_moves(&self, p: &Problem) -> Result<Vec<Move>> {
        let mut buf = Vec::new();
        let n = p.n();
        match self.options(p, &mut buf) {
            Options::Terminal => Err(Error::contract("legal moves requested on a terminal state")),
            Options::ForcedReturn => Ok(vec![Move::new(self.position, DEPOT, n)]),
            Options::Customers => Ok(buf
                .into_iter()
                .map(|j| Move::new(self.position, j, n))
                .collect()),
        }
    }

    pub fn is_terminal(&self, p: &Problem) -> bool {
        self.options(p, &mut Vec::new()) == Options::Terminal
    }

    /// Applies a move after checking that it is legal.
    pub fn play(&mut self, p: &Problem, m: Move) -> Result<()> {
        let n = p.n();
        if m.from != self.position
            || m.from >= n
            || m.to >= n
            || m.code != code_move(m.from, m.to, n)?
        {
            return Err(Error::contract(format!(
                "move {m:?} does not start at node {}",
                self.position
            )));
        }
        let mut buf = Vec::new();
        match self.options(p, &mut buf) {
            Options::Terminal => Err(Error::contract("play on a terminal state")),
            Options::ForcedReturn if m.to == DEPOT => {
                self.play_return(p);
                Ok(())
            }
            Options::Customers if m.to != DEPOT && buf.binary_search(&m.to).is_ok() => {
                self.play_customer(p, m.to);
                Ok(())
            }
            _ => Err(Error::contract(format!(
                "illegal move {} -> {}",
                m.from, m.to
            ))),
        }
    }

    /// Serves customer `j` with the active vehicle. `j` must be admitted.
    #[inline]
    pub(crate) fn play_customer(&mut self, p: &Problem, j: usize) {
        let node = &p.instance.nodes[j];
        let d = p.geometry.dist(self.position, j);
        if self.current.is_empty() {
            self.vehicles_used += 1;
        }
        self.clock = (self.clock + d).max(node.ready) + node.service;
        self.load += node.demand;
        self.distance += d;
        self.position = j;
        self.unvisited[j / 64] &= !(1 << (j % 64));
        self.n_unvisited -= 1;
        self.current.push(j);
    }

    /// Sends the active vehicle home and starts the next one.
    pub(crate) fn play_return(&mut self, p: &Problem) {
        self.distance += p.geometry.dist(self.position, DEPOT);
        self.tours.push(std::mem::take(&mut self.current));
        self.vehicle_idx += 1;
        self.position = DEPOT;
        self.clock = p.instance.depot().ready;
        self.load = 0;
    }

    pub fn score(&self, p: &Problem) -> Result<ScoreBreakdown> {
        if !self.is_terminal(p) {
            return Err(Error::contract("score requested on a non-terminal state"));
        }
        Ok(self.score_unchecked(p))
    }

    pub(crate) fn score_unchecked(&self, p: &Problem) -> ScoreBreakdown {
        ScoreBreakdown::new(self.n_unvisited, self.vehicles_used, self.total_distance(p))
    }
}
