//! Run counters.

use std::fmt;

/// Snapshot of a heap's counters. All fields except `n`, `phi_a` and
/// `phi_l` only grow over the life of a heap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatsReport {
    pub n: u64,
    pub max_rank: u64,
    pub phi_a: u64,
    pub phi_l: u64,
    pub comparisons: u64,
    pub reductions_ca: u64,
    pub reductions_cl: u64,
    pub discards: u64,
    pub parks: u64,
    pub links: u64,
    pub loss_reductions: u64,
    pub structural_mutations: u64,
    pub registry_mutations: u64,
}

impl StatsReport {
    /// Field names and values in their fixed emission order.
    pub fn fields(&self) -> [(&'static str, u64); 13] {
        [
            ("n", self.n),
            ("max_rank", self.max_rank),
            ("phi_a", self.phi_a),
            ("phi_l", self.phi_l),
            ("comparisons", self.comparisons),
            ("reductions_ca", self.reductions_ca),
            ("reductions_cl", self.reductions_cl),
            ("discards", self.discards),
            ("parks", self.parks),
            ("links", self.links),
            ("loss_reductions", self.loss_reductions),
            ("structural_mutations", self.structural_mutations),
            ("registry_mutations", self.registry_mutations),
        ]
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.fields() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
