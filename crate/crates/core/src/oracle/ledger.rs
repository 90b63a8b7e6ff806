//! Query, batch and round counters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Counts are `u128` because dry-run plans at paper-profile constants exceed `u64`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub bis_count: u128,
    pub batch_count: u64,
    pub round_count: u64,
    pub phases: BTreeMap<String, u128>,
}

impl QueryLedger {
    /// `{bis_count, batch_count, round_count, phases}` as a JSON object.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ledger serialises")
    }

    /// `bis_count` minus the per-phase sum; zero for a consistent ledger.
    pub fn phase_gap(&self) -> i128 {
        self.bis_count as i128 - self.phases.values().sum::<u128>() as i128
    }

    /// Counter deltas `self - earlier`, phases included.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        let mut phases = BTreeMap::new();
        for (k, &v) in &self.phases {
            let before = earlier.phases.get(k).copied().unwrap_or(0);
            if v > before {
                phases.insert(k.clone(), v - before);
            }
        }
        QueryLedger {
            bis_count: self.bis_count - earlier.bis_count,
            batch_count: self.batch_count - earlier.batch_count,
            round_count: self.round_count - earlier.round_count,
            phases,
        }
    }
}
