//! Finite stand-ins for the asymptotic thresholds of the half-regular case
//! analysis.
//!
//! Every threshold is a polylogarithmic expression in a single surrogate `L`
//! for `log m`. The `paper` mode takes `L = ln m`; the `scaled` mode takes
//! `L = c·log₂ m`. Both clamp `L` to at least 2 so that the type threshold
//! stays above one half.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMode {
    Paper,
    Scaled,
}

impl ProfileMode {
    pub fn name(self) -> &'static str {
        match self {
            ProfileMode::Paper => "paper",
            ProfileMode::Scaled => "scaled",
        }
    }
}

impl std::str::FromStr for ProfileMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ProfileMode::Paper),
            "scaled" => Ok(ProfileMode::Scaled),
            other => Err(Error::Config(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleProfile {
    pub mode: ProfileMode,
    /// Multiplier `c` on `log₂ m` in scaled mode.
    pub log_factor: f64,
    /// Forces `L` regardless of `m`; used to exercise thresholds on small
    /// instances.
    pub log_override: Option<f64>,
    /// Candidate sums kept per set size when ranking equal-sum hypergraphs.
    pub top_candidates: usize,
    pub max_entries: usize,
}

impl Default for ScaleProfile {
    fn default() -> Self {
        Self::scaled()
    }
}

impl ScaleProfile {
    pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

    pub fn scaled() -> Self {
        Self {
            mode: ProfileMode::Scaled,
            log_factor: 1.0,
            log_override: None,
            top_candidates: 8,
            max_entries: Self::DEFAULT_MAX_ENTRIES,
        }
    }

    pub fn paper() -> Self {
        Self {
            mode: ProfileMode::Paper,
            ..Self::scaled()
        }
    }

    pub fn with_mode(mode: ProfileMode) -> Self {
        match mode {
            ProfileMode::Paper => Self::paper(),
            ProfileMode::Scaled => Self::scaled(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.log_factor.is_finite() || self.log_factor <= 0.0 {
            return Err(Error::Config(format!(
                "log factor must be positive, got {}",
                self.log_factor
            )));
        }
        if let Some(l) = self.log_override {
            if !l.is_finite() || l < 2.0 {
                return Err(Error::Config(format!(
                    "log override must be at least 2, got {l}"
                )));
            }
        }
        if self.top_candidates == 0 {
            return Err(Error::Config("top_candidates must be positive".into()));
        }
        if self.max_entries == 0 {
            return Err(Error::Config("max_entries must be positive".into()));
        }
        Ok(())
    }

    /// The `log m` surrogate `L`, never below 2.
    pub fn log_surrogate(&self, m: u64) -> f64 {
        if let Some(l) = self.log_override {
            return l.max(2.0);
        }
        let m = m.max(1) as f64;
        let raw = match self.mode {
            ProfileMode::Paper => m.ln(),
            ProfileMode::Scaled => self.log_factor * m.log2(),
        };
        raw.max(2.0)
    }

    /// Largest equal-sum set size used by the greedy cover.
    pub fn r_max(&self, m: u64) -> usize {
        let m = m.max(1) as f64;
        let r = match self.mode {
            ProfileMode::Paper => m.ln().floor(),
            ProfileMode::Scaled => m.log2().floor(),
        };
        (r as usize).max(1)
    }

    pub fn params(&self, m: u64) -> ScaleParams {
        ScaleParams {
            log: self.log_surrogate(m),
            r_max: self.r_max(m),
            top_candidates: self.top_candidates,
        }
    }
}

/// Thresholds resolved for a particular edge count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub log: f64,
    pub r_max: usize,
    pub top_candidates: usize,
}

impl ScaleParams {
    /// Parameters with an explicit `L`, mainly for tests.
    pub fn with_log(log: f64, r_max: usize) -> Self {
        Self {
            log: log.max(2.0),
            r_max: r_max.max(1),
            top_candidates: 8,
        }
    }

    /// `1 − 1/(2L)`.
    pub fn type_threshold_fraction(&self) -> f64 {
        1.0 - 1.0 / (2.0 * self.log)
    }

    pub fn type_threshold(&self, k: usize) -> f64 {
        k as f64 * self.type_threshold_fraction()
    }

    /// Minimum class size `k/(2L²)` for the two-class construction.
    pub fn two_class_min(&self, k: usize) -> f64 {
        k as f64 / (2.0 * self.log * self.log)
    }

    /// Below `L⁴` the multiples `d, 2d, …, kd` already suffice.
    pub fn d_min(&self) -> f64 {
        self.log.powi(4)
    }

    /// The X side is re-partitioned when `k < √m / L⁴`.
    pub fn second_partition_below(&self, m: u64) -> f64 {
        (m as f64).sqrt() / self.log.powi(4)
    }

    /// At most `d/(2L)` vertices of nonzero type for the sparse case.
    pub fn case1_cutoff(&self, d: u64) -> f64 {
        d as f64 / (2.0 * self.log)
    }

    /// Number of same-type vertices intersected in the dense case.
    pub fn p(&self) -> usize {
        self.log.floor() as usize
    }

    /// Number of deletions `d/(4L)` in the dense case, at least one.
    pub fn q(&self, d: u64) -> usize {
        ((d as f64 / (4.0 * self.log)).floor() as usize).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogate_is_clamped() {
        let p = ScaleProfile::paper();
        assert_eq!(p.log_surrogate(1), 2.0);
        assert!((p.log_surrogate(1_000_000) - 1e6f64.ln()).abs() < 1e-12);
        let s = ScaleProfile::scaled();
        assert!((s.log_surrogate(1024) - 10.0).abs() < 1e-12);
        assert_eq!(s.r_max(1024), 10);
        assert_eq!(p.r_max(1024), 6);
        assert_eq!(s.r_max(1), 1);
    }

    #[test]
    fn thresholds_follow_surrogate() {
        let params = ScaleParams::with_log(4.0, 3);
        assert!((params.type_threshold_fraction() - 0.875).abs() < 1e-12);
        assert!(params.type_threshold_fraction() > 0.5);
        assert_eq!(params.p(), 4);
        assert_eq!(params.q(100), 6);
        assert_eq!(params.q(3), 1);
        assert!((params.case1_cutoff(40) - 5.0).abs() < 1e-12);
        assert!((params.d_min() - 256.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(ScaleProfile::scaled().validate().is_ok());
        let bad = ScaleProfile {
            log_factor: 0.0,
            ..ScaleProfile::scaled()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        assert_eq!("paper".parse::<ProfileMode>().unwrap(), ProfileMode::Paper);
        assert!("other".parse::<ProfileMode>().is_err());
    }
}
