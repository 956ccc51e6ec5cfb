//! Tolerance constants shared by checks throughout the crate.

/// Central tolerance record. `Default` holds the values used everywhere unless
/// a caller overrides them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities such as `2 l (l + 1) = g`.
    pub identity: f64,
    /// Contour symmetry defects.
    pub contour: f64,
    /// Width of the band around singular contour parameters inside which
    /// evaluation is refused.
    pub singular_guard: f64,
    /// Allowed drift of the monodromy determinant before an evaluation is
    /// reported as ill-conditioned.
    pub monodromy_det: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        TOLERANCES
    }
}

pub const TOLERANCES: Tolerances = Tolerances {
    identity: 1e-12,
    contour: 1e-14,
    singular_guard: 1e-6,
    monodromy_det: 1e-6,
};
