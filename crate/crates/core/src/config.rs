use crate::report::{Error, Result};

/// Enumeration budgets. Every exhaustive search in the crate is bounded by
/// one of these; exceeding a bound is a structural error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    /// Upper bound on candidate object maps when enumerating functors.
    pub max_object_maps: u64,
    /// Upper bound on backtracking nodes visited by a single search.
    pub max_search_nodes: u64,
    /// Upper bound on the morphisms of a materialized finite-set skeleton.
    pub max_skeleton_morphisms: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_object_maps: 1_000_000,
            max_search_nodes: 50_000_000,
            max_skeleton_morphisms: 2_000,
        }
    }
}

impl Guard {
    pub fn with_budget(n: u64) -> Self {
        Guard {
            max_object_maps: n,
            max_search_nodes: n.saturating_mul(50),
            ..Guard::default()
        }
    }

    pub(crate) fn budget(&self, what: &str) -> Budget {
        Budget {
            left: self.max_search_nodes,
            what: what.to_string(),
        }
    }
}

/// A countdown over search nodes.
pub(crate) struct Budget {
    left: u64,
    what: String,
}

impl Budget {
    pub(crate) fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::GuardExceeded(format!(
                "search budget exhausted while enumerating {}",
                self.what
            )));
        }
        self.left -= 1;
        Ok(())
    }
}
