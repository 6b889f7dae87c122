//! State representations: pure states, density matrices, and the Schmidt
//! decomposition of joint system-probe states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qlinalg::{partial_trace, CMat, CVec, CVec2, CVec4, HermEigen, Subsystem, C};
use crate::scalar::Scalar;

/// Normalized pure state of one q-bit (`N = 2`) or of the joint
/// system-probe pair (`N = 4`).
///
/// Renormalization is explicit, never silent: constructors that rescale an
/// input whose norm drifts beyond tolerance set [`PureState::was_renormalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T, const N: usize> {
    amplitudes: CVec<T, N>,
    renormalized: bool,
    label: Option<String>,
}

impl<T: Scalar, const N: usize> PureState<T, N> {
    /// Normalize `amplitudes` and flag if the input norm was off by more
    /// than the state tolerance.
    pub fn new(amplitudes: CVec<T, N>) -> Result<Self> {
        if !amplitudes.is_finite() {
            return Err(Error::NonFinite {
                context: "pure state amplitudes",
            });
        }
        let norm = amplitudes.norm();
        if norm <= T::PROB_FLOOR {
            return Err(Error::ZeroVector);
        }
        let renormalized = (norm - T::one()).abs() > T::TOL_STATE;
        Ok(Self {
            amplitudes: amplitudes.scale_re(norm.recip()),
            renormalized,
            label: None,
        })
    }

    /// Basis state `|k>`.
    pub fn basis(k: usize) -> Self {
        Self {
            amplitudes: CVec::basis(k),
            renormalized: false,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn amplitudes(&self) -> &CVec<T, N> {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> C<T> {
        self.amplitudes.get(k)
    }

    /// True if construction had to rescale by more than the tolerance.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn overlap(&self, other: &Self) -> T {
        self.amplitudes.inner(&other.amplitudes).norm()
    }
}

/// Density matrix of dimension 2 or 4: Hermitian, unit trace, and
/// positive semidefinite within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T, const N: usize> {
    matrix: CMat<T, N>,
}

impl<T: Scalar, const N: usize> DensityMatrix<T, N>
where
    CMat<T, N>: HermEigen<T, N>,
{
    /// Validate hermiticity, trace, and positivity.
    pub fn new(matrix: CMat<T, N>) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite {
                context: "density matrix",
            });
        }
        let herm = matrix.hermiticity_deviation();
        if herm > T::TOL_STATE {
            return Err(Error::InvalidDensity {
                reason: "not Hermitian",
                deviation: herm.to_f64().unwrap_or(f64::NAN),
            });
        }
        let trace_dev = (matrix.trace() - Complex::new(T::one(), T::zero())).norm();
        if trace_dev > T::TOL_STATE {
            return Err(Error::InvalidDensity {
                reason: "trace differs from 1",
                deviation: trace_dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let eig = matrix.eigh();
        for value in eig.values {
            if value < -T::TOL_STATE {
                return Err(Error::PositivityViolation {
                    eigenvalue: value.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { matrix })
    }

    /// Construction for internal paths where hermiticity and positivity
    /// hold by algebra (projectors, convex mixes of validated states).
    pub(crate) fn new_unchecked(matrix: CMat<T, N>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMat<T, N> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> C<T> {
        self.matrix.get(i, j)
    }

    /// `Tr(rho^2)`; 1 exactly for pure states.
    pub fn purity(&self) -> T {
        self.matrix.mul(&self.matrix).trace().re
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [T; N] {
        self.matrix.eigh().values
    }
}

/// Rank-1 projector `|psi><psi|` of a pure state.
pub fn density_from_pure<T: Scalar, const N: usize>(s: &PureState<T, N>) -> DensityMatrix<T, N>
where
    CMat<T, N>: HermEigen<T, N>,
{
    DensityMatrix::new_unchecked(s.amplitudes().outer(s.amplitudes()))
}

/// `1/N` on the requested dimension.
pub fn maximally_mixed<T: Scalar, const N: usize>() -> DensityMatrix<T, N>
where
    CMat<T, N>: HermEigen<T, N>,
{
    DensityMatrix::new_unchecked(CMat::identity().scale_re(T::from_usize(N).recip()))
}

/// Single q-bit state `alpha|0> + beta|1>`, normalized.
pub fn pure_from_amplitudes<T: Scalar>(alpha: C<T>, beta: C<T>) -> Result<PureState<T, 2>> {
    PureState::new(CVec2::new([alpha, beta]))
}

/// `(|0> + |1>)/sqrt(2)`.
pub fn plus_state<T: Scalar>() -> PureState<T, 2> {
    let h = C::new(T::half().sqrt(), T::zero());
    pure_from_amplitudes(h, h).expect("|+> is normalized")
}

/// Joint pure state from four amplitudes in the |00>,|01>,|10>,|11> order.
pub fn joint_from_amplitudes<T: Scalar>(amps: [C<T>; 4]) -> Result<PureState<T, 4>> {
    PureState::new(CVec4::new(amps))
}

/// Product state `|psi> (x) |phi>` with the system on the left.
pub fn product_state<T: Scalar>(
    system: &PureState<T, 2>,
    probe: &PureState<T, 2>,
) -> PureState<T, 4> {
    let amps = crate::qlinalg::tensor_product_vec(system.amplitudes(), probe.amplitudes());
    PureState {
        amplitudes: amps,
        renormalized: false,
        label: None,
    }
}

/// Biorthogonal form of a joint pure state:
/// `|Psi> = sqrt(p+) |+>_s (x) |+>_p + sqrt(p-) |->_s (x) |->_p`.
///
/// `p_plus >= p_minus` by convention. System vectors carry the canonical
/// phase (first nonzero amplitude real non-negative); probe vectors carry
/// whatever phase makes the reconstruction reproduce the source exactly.
#[derive(Debug, Clone)]
pub struct SchmidtForm<T> {
    pub p_plus: T,
    pub p_minus: T,
    pub system_basis: [CVec2<T>; 2],
    pub probe_basis: [CVec2<T>; 2],
}

impl<T: Scalar> SchmidtForm<T> {
    /// Rebuild the joint state vector from the decomposition.
    pub fn reconstruct(&self) -> CVec4<T> {
        let mut out = CVec4::zero();
        for (weight, (sys, probe)) in [self.p_plus, self.p_minus]
            .into_iter()
            .zip(self.system_basis.iter().zip(self.probe_basis.iter()))
        {
            let term = crate::qlinalg::tensor_product_vec(sys, probe)
                .scale_re(weight.max(T::zero()).sqrt());
            out = out.add(&term);
        }
        out
    }
}

/// Schmidt decomposition via the reduced system density matrix: its
/// eigenvectors give the system basis, projection gives the probe basis.
/// For a degenerate spectrum the deterministic 2x2 eigensolver fixes the
/// basis, so outputs are reproducible.
pub fn schmidt_decompose<T: Scalar>(joint: &PureState<T, 4>) -> SchmidtForm<T> {
    let psi = joint.amplitudes();
    let rho_s = partial_trace(&psi.outer(psi), Subsystem::System);
    let eig = rho_s.eigh();
    let p_plus = eig.values[0].max(T::zero()).min(T::one());
    let p_minus = eig.values[1].max(T::zero()).min(T::one());

    // Probe vector for branch k: <k_s| (x) 1 applied to |Psi>, normalized.
    let project = |sys: &CVec2<T>| -> CVec2<T> {
        let mut v = CVec2::zero();
        for p in 0..2 {
            let mut acc = C::new(T::zero(), T::zero());
            for i in 0..2 {
                acc += sys.get(i).conj() * psi.get(2 * i + p);
            }
            v.set(p, acc);
        }
        v
    };

    let probe_plus_raw = project(&eig.vectors[0]);
    let probe_plus = if p_plus > T::TOL_STATE {
        probe_plus_raw.scale_re(probe_plus_raw.norm().recip())
    } else {
        CVec2::basis(0)
    };
    let probe_minus_raw = project(&eig.vectors[1]);
    let probe_minus = if p_minus > T::TOL_STATE {
        probe_minus_raw.scale_re(probe_minus_raw.norm().recip())
    } else {
        // Vanishing branch: any unit vector works; pick the orthogonal
        // complement so the basis stays orthonormal and deterministic.
        probe_plus
            .orthogonal()
            .canonicalize_phase(T::from_f64(1e-6))
    };

    SchmidtForm {
        p_plus,
        p_minus,
        system_basis: [eig.vectors[0], eig.vectors[1]],
        probe_basis: [probe_plus, probe_minus],
    }
}
