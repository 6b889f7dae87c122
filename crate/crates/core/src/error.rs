//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors raised by state construction, measurement, and evolution.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An operator expected to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian: max |M - M\u{2020}| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// An operator expected to be unitary is not, within tolerance.
    #[error("matrix is not unitary: max |U\u{2020}U - 1| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// A matrix or vector carries a non-finite entry.
    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },

    /// Attempted to build a state from the zero vector.
    #[error("cannot normalize the zero vector")]
    ZeroVector,

    /// A vector expected to be normalized is too far from unit norm.
    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NotNormalized { norm: f64 },

    /// A density matrix failed validation.
    #[error("density matrix invalid: {reason}")]
    InvalidDensity {
        reason: &'static str,
        deviation: f64,
    },

    /// Density-matrix eigenvalue below the negativity clamp window.
    #[error("positivity violation: eigenvalue {eigenvalue:.3e} below tolerance")]
    PositivityViolation { eigenvalue: f64 },

    /// Kraus pair does not satisfy the completeness relation.
    #[error("Kraus completeness violated: max |A\u{2020}\u{2081}A\u{2081} + A\u{2020}\u{2082}A\u{2082} - 1| = {deviation:.3e}")]
    CompletenessViolation { deviation: f64 },

    /// Measurement axis is not a unit 3-vector.
    #[error("Bloch axis has norm {norm}, expected 1")]
    NotUnitAxis { norm: f64 },

    /// The selected measurement branch has vanishing probability.
    #[error("selected outcome has probability {probability:.3e}, below the floor")]
    DegenerateOutcome { probability: f64 },

    /// A probability argument is outside [0, 1].
    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    /// Interaction parameters are out of range.
    #[error("invalid interaction: {reason}")]
    InvalidInteraction { reason: &'static str },

    /// Integrator step size too large for the generator norm.
    #[error("step size {dt} too large: |generator|*dt = {product} >= 0.1")]
    StepTooLarge { dt: f64, product: f64 },

    /// Trace drift of an integrator step exceeded tolerance.
    #[error("trace drift {drift:.3e} per step exceeds tolerance")]
    TraceDrift { drift: f64 },

    /// The interaction does not produce a no-jump/jump Kraus structure.
    #[error("interaction lacks jump structure: |A\u{208a} - c*1| = {deviation:.3e} exceeds epsilon^2 bound {bound:.3e}")]
    NoJumpStructure { deviation: f64, bound: f64 },

    /// The interaction does not produce two equal-probability unitary branches.
    #[error("interaction lacks diffusion structure: |A\u{2020}A - 1/2| = {deviation:.3e} exceeds epsilon^2 bound {bound:.3e}")]
    NoDiffusionStructure { deviation: f64, bound: f64 },

    /// Trajectory records passed to the ensemble reducer disagree on
    /// unraveling, step count, or time grid.
    #[error("inhomogeneous ensemble: {reason}")]
    InhomogeneousEnsemble { reason: &'static str },

    /// Ensemble reduction needs at least one trajectory.
    #[error("empty ensemble")]
    EmptyEnsemble,
}

pub type Result<T> = std::result::Result<T, Error>;
