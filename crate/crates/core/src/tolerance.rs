use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every rank, smoothness and colour decision.
///
/// The config is serialized into every report so that a verdict can be
/// reproduced from the report alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Singular values below `rank_rel_tol * sigma_max` count as zero.
    pub rank_rel_tol: f64,
    /// Relative singular-value gap below which a matrix norm is treated as non-smooth.
    pub gap_tol: f64,
    /// Absolute band on factor-norm comparisons inside which an edge is degenerate.
    pub colour_tol: f64,
    /// Absolute entrywise tolerance for space membership and coincident points.
    pub membership_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-9,
            gap_tol: 1e-9,
            colour_tol: 1e-10,
            membership_tol: 1e-12,
        }
    }
}

impl ToleranceConfig {
    pub fn with_rank_rel_tol(mut self, tol: f64) -> Self {
        self.rank_rel_tol = tol;
        self
    }
}
