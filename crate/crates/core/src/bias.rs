//! State-dependent move bias built from the Solomon insertion criteria.
//!
//! Three normalized terms, each at most zero, are mixed with positive weights:
//! the arc length, the idle time before the customer's window opens, and the
//! slack left between the start of service and the window's end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Problem;
use crate::instance::DEPOT;
use crate::state::{Move, RouteState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasWeights {
    pub distance: f64,
    pub waiting: f64,
    pub lateness: f64,
}

impl Default for BiasWeights {
    fn default() -> Self {
        BiasWeights {
            distance: 15.0,
            waiting: 75.0,
            lateness: 10.0,
        }
    }
}

impl BiasWeights {
    pub fn new(distance: f64, waiting: f64, lateness: f64) -> Result<Self> {
        for (name, w) in [("w1", distance), ("w2", waiting), ("w3", lateness)] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Config(format!(
                    "bias weight {name} must be a nonnegative number, got {w}"
                )));
            }
        }
        Ok(BiasWeights {
            distance,
            waiting,
            lateness,
        })
    }

    pub fn zero() -> Self {
        BiasWeights {
            distance: 0.0,
            waiting: 0.0,
            lateness: 0.0,
        }
    }
}

pub fn beta_distance(i: usize, j: usize, p: &Problem) -> f64 {
    -p.geometry.dist(i, j) / p.geometry.max_dist
}

/// Idle time before `j` opens, as a fraction of the widest window.
///
/// Leaving the depot, waiting that would happen before the earliest customer
/// window opens anyway is not counted.
pub fn beta_waiting(i: usize, j: usize, vt: f64, p: &Problem) -> f64 {
    let g = &p.geometry;
    let ready = p.instance.nodes[j].ready;
    let arrival = vt + g.dist(i, j);
    if arrival > ready {
        0.0
    } else if i != DEPOT {
        -(ready - arrival) / g.biggest_tw
    } else {
        -(ready - g.ftw.max(arrival)) / g.biggest_tw
    }
}

/// Slack between the start of service at `j` and its due date, as a fraction of the widest window.
pub fn beta_lateness(i: usize, j: usize, vt: f64, p: &Problem) -> f64 {
    let node = &p.instance.nodes[j];
    let arrival = vt + p.geometry.dist(i, j);
    -(node.due - arrival.max(node.ready)) / p.geometry.biggest_tw
}

/// Weighted bias of the arc `i -> j` for a vehicle ready to leave `i` at `vt`.
#[inline]
pub fn beta_arc(i: usize, j: usize, vt: f64, w: &BiasWeights, p: &Problem) -> f64 {
    if j == DEPOT {
        return 0.0;
    }
    w.distance * beta_distance(i, j, p)
        + w.waiting * beta_waiting(i, j, vt, p)
        + w.lateness * beta_lateness(i, j, vt, p)
}

/// Bias of a legal move in `state`. Forced returns to the depot get zero.
pub fn beta_total(m: &Move, state: &RouteState, w: &BiasWeights, p: &Problem) -> f64 {
    beta_arc(m.from, m.to, state.clock(), w, p)
}
