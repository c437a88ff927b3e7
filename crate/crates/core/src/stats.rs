use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

/// Counters collected while solving; safe to share between workers.
#[derive(Debug, Default)]
pub struct Stats {
    reduced_vertices: AtomicUsize,
    decomposition_width: AtomicUsize,
    dp_states: AtomicUsize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatsSnapshot {
    pub reduced_vertices: usize,
    pub decomposition_width: usize,
    pub dp_states: usize,
}

impl Stats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Largest reduced graph seen.
    pub fn record_reduced(&self, n: usize) {
        self.reduced_vertices.fetch_max(n, Ordering::Relaxed);
    }

    /// Largest decomposition width seen.
    pub fn record_width(&self, w: usize) {
        self.decomposition_width.fetch_max(w, Ordering::Relaxed);
    }

    /// Total DP states over all runs.
    pub fn add_states(&self, s: usize) {
        self.dp_states.fetch_add(s, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> StatsSnapshot {
        StatsSnapshot {
            reduced_vertices: self.reduced_vertices.load(Ordering::Relaxed),
            decomposition_width: self.decomposition_width.load(Ordering::Relaxed),
            dp_states: self.dp_states.load(Ordering::Relaxed),
        }
    }
}
