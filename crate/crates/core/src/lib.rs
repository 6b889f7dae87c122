//! Simulator for a single q-bit decohering through repeated brief
//! interactions with probe q-bits.
//!
//! The crate is organized around the probe picture of open-system
//! dynamics: a probe prepared in a pure state couples to the system
//! through a joint unitary and is then measured (or discarded), which
//! acts on the system through a two-operator Kraus pair. From that one
//! primitive the crate builds projective and generalized measurements
//! with full information accounting ([`qmeas`], [`qinfo`]), the averaged
//! decoherence channel and its weak-coupling Lindblad limit, and the
//! stochastic quantum-trajectory unravelings whose ensemble mean
//! recovers the channel ([`qevolve`]).
//!
//! All numerics are generic over the floating-point [`Scalar`] (`f32` or
//! `f64`); the aliases below fix `f64`, the precision the tolerances are
//! calibrated for.
//!
//! ```
//! use qprobe::qevolve::{channel_evolve, ensemble_average, InteractionSpec, TrajectoryEngine};
//! use qprobe::qlinalg::{sigma_x, sigma_z, tensor_product};
//! use qprobe::qstate::{density_from_pure, plus_state, PureState};
//!
//! // A weak sigma_z probing interaction dephases the system q-bit.
//! let spec = InteractionSpec::new(
//!     tensor_product(&sigma_z::<f64>(), &sigma_x()),
//!     0.1,                   // coupling strength
//!     1.0,                   // probe arrival spacing
//!     PureState::basis(0),   // probe preparation |0>
//! )?;
//!
//! // Unmeasured probes: the off-diagonal decays as cos(2 eps)^t.
//! let kraus = spec.kraus([0.0, 0.0, 1.0])?;
//! let rho0 = density_from_pure(&plus_state::<f64>());
//! let series = channel_evolve(&rho0, &kraus, 50);
//! let expected = 0.5 * (0.2f64).cos().powi(50);
//! assert!((series[50].entry(0, 1).re - expected).abs() < 1e-12);
//!
//! // Measured probes: stochastic jump trajectories whose seeded
//! // ensemble mean recovers the same channel.
//! let engine = TrajectoryEngine::jump(&spec)?;
//! let records = engine.run_ensemble(&plus_state(), 50, 500, 7, 1)?;
//! let mean = ensemble_average(&records)?;
//! let dev = (mean.mean_rho[50].entry(0, 1).re - expected).abs();
//! assert!(dev < 4.0 * mean.stderr[50] + 1e-12);
//! # Ok::<(), qprobe::Error>(())
//! ```

pub mod error;
pub mod qevolve;
pub mod qinfo;
pub mod qlinalg;
pub mod qmeas;
pub mod qstate;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex `f64` amplitude.
pub type C64 = num_complex::Complex<f64>;

/// 2x2 complex matrix over `f64`.
pub type Mat2 = qlinalg::CMat<f64, 2>;
/// 4x4 complex matrix over `f64`.
pub type Mat4 = qlinalg::CMat<f64, 4>;
/// Complex 2-vector over `f64`.
pub type Vec2 = qlinalg::CVec<f64, 2>;
/// Complex 4-vector over `f64`.
pub type Vec4 = qlinalg::CVec<f64, 4>;

/// Single q-bit pure state over `f64`.
pub type State2 = qstate::PureState<f64, 2>;
/// Joint system-probe pure state over `f64`.
pub type State4 = qstate::PureState<f64, 4>;
/// Single q-bit density matrix over `f64`.
pub type Density2 = qstate::DensityMatrix<f64, 2>;
/// Joint density matrix over `f64`.
pub type Density4 = qstate::DensityMatrix<f64, 4>;
