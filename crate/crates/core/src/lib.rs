//! Nested rollout policy adaptation for the capacitated vehicle routing
//! problem with time windows.
//!
//! Three search variants share one engine ([`search`]):
//!
//! - NRPA: softmax playouts over a zero-initialized weight table,
//! - NRPAD: the same with weights initialized from arc lengths,
//! - GNRPA: zero weights plus a state-dependent bias on every move.
//!
//! Instances come in Solomon format ([`instance`]); every reported solution
//! goes through an independent checker ([`validate`]).

pub mod bias;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod instance;
pub mod policy;
pub mod search;
pub mod state;
pub mod validate;

pub use bias::BiasWeights;
pub use error::{Error, Result};
pub use geometry::{Geometry, Problem};
pub use instance::{parse_instance, Instance, Node, DEPOT};
pub use policy::{code_move, MoveDistribution, Policy};
pub use search::{
    adapt_naive, adapt_optimized, gnrpa, playout, replay, run, Algorithm, PlayoutRecord,
    SearchConfig, SearchResult, TracePoint,
};
pub use state::{Move, RouteState, ScoreBreakdown};
pub use validate::{validate_solution, validate_tours, SolutionFile};
