//! Profiles and algorithm constants.
//!
//! The paper profile uses `c_T = 2e⁸` repetitions for neighborhood size
//! estimation and exists mostly for dry-run audits. The fast profile swaps in
//! `c_T = 48`, which is validated empirically by the acceptance suite. Both
//! profiles apply the working-ε scaling in the edge estimator.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Paper,
    #[default]
    Fast,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "fast" => Ok(Profile::Fast),
            other => Err(Error::InvalidParam(format!("unknown profile {other:?}"))),
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Fast => "fast",
        })
    }
}

/// Every tunable constant, carried through each algorithm and echoed in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub profile: Profile,
    /// Degree error constant in the refinement analysis.
    pub c1: f64,
    /// Recovery threshold constant.
    pub c2: f64,
    /// Repetitions per level in neighborhood size estimation: `T = c_T ln(log n / δ) / ε²`.
    pub c_t: f64,
    /// Parts per repetition in degree estimation.
    pub c_lambda: f64,
    /// Recovery repetitions per level: `⌈c_R ln(1/δ)⌉`.
    pub c_r: f64,
    /// Recovery failure budget factor for per-part neighbor draws.
    pub c_delta: f64,
    /// Round-one neighbor draws per vertex in connectivity: `⌈c_nb log² n⌉`.
    pub c_nb: f64,
    /// Round-two superedge draws: `⌈c_se n log² n⌉`.
    pub c_se: f64,
    /// Apply the `ε / (600 log_{1/ε} log n)` working-ε scaling in the edge estimator.
    pub scale_epsilon: bool,
}

pub const PAPER_C_T: f64 = 2.0 * 2_980.957_987_041_728_3; // 2e^8

impl Constants {
    pub fn paper() -> Self {
        Self {
            profile: Profile::Paper,
            c1: 5.0,
            c2: 50.0,
            c_t: PAPER_C_T,
            c_lambda: 1.0,
            c_r: crate::recovery::DEFAULT_C_R,
            c_delta: 1.0,
            c_nb: 4.0,
            c_se: 4.0,
            scale_epsilon: true,
        }
    }

    pub fn fast() -> Self {
        Self { profile: Profile::Fast, c_t: 48.0, ..Self::paper() }
    }

    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Paper => Self::paper(),
            Profile::Fast => Self::fast(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("cT", self.c_t),
            ("clambda", self.c_lambda),
            ("cR", self.c_r),
            ("cdelta", self.c_delta),
            ("cnb", self.c_nb),
            ("cse", self.c_se),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParam(format!("{name} = {v} must be positive and finite")));
            }
        }
        if self.c1 > self.c2 / 10.0 {
            return Err(Error::InvalidParam(format!("c1 = {} must be at most c2 / 10 = {}", self.c1, self.c2 / 10.0)));
        }
        if self.profile == Profile::Paper && self.c_t < PAPER_C_T {
            return Err(Error::InvalidParam("the paper profile fixes cT = 2e^8; use the fast profile to lower it".into()));
        }
        Ok(())
    }
}

/// `log₂ n` with `n` clamped to at least 2.
pub fn log2n(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("epsilon = {epsilon} outside (0, 1/2]")))
    }
}

pub fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("delta = {delta} outside (0, 1/2]")))
    }
}
