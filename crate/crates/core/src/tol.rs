//! Numerical tolerances shared across the crate.

/// Tolerance set. All fields are absolute unless noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity/trace checks, scaled by `max(1, max|entry|)`.
    pub herm: f64,
    /// Coherence-vector norm checks (purity, orthogonality).
    pub norm: f64,
    /// Entries of `f`/`d` below this are dropped.
    pub tensor: f64,
    /// Positivity gate, scaled by `max(1, max_k |S_k|)`.
    pub pos: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            norm: 1e-9,
            tensor: 1e-12,
            pos: 1e-9,
        }
    }
}

impl Tolerances {
    /// Same defaults with the positivity tolerance replaced.
    pub fn with_pos(pos: f64) -> Self {
        Self {
            pos,
            ..Self::default()
        }
    }
}
