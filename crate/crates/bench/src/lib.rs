//! Shared fixtures for the criterion benchmarks.

use gnrpa_core::experiment::load_bundled;
use gnrpa_core::Problem;

/// A bundled Solomon instance; panics if the data directory is missing.
pub fn fixture(name: &str) -> Problem {
    load_bundled(name).unwrap_or_else(|e| panic!("cannot load {name}: {e}"))
}
