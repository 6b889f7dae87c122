//! Gates, projective measurements, and probe-mediated generalized
//! measurements.
//!
//! A probe q-bit prepared in |phi0>, coupled through a joint unitary U and
//! then measured along a Bloch axis, acts on the system through a pair of
//! Kraus operators `A_k = <k|_p U |phi0>_p`. Everything downstream
//! (decoherence channels, trajectories) is built from that pair.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qlinalg::{bloch_dot, identity2, CMat2, CMat4, CVec2, HermEigen, C};
use crate::qstate::{DensityMatrix, PureState};
use crate::scalar::Scalar;

/// Outcome label of a two-outcome measurement. For jump unravelings
/// `Plus` is the no-jump branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Rank-1 projector `(1 +/- n.sigma)/2` onto a Bloch-axis eigenstate.
#[derive(Debug, Clone, Copy)]
pub struct Projector<T> {
    matrix: CMat2<T>,
    bloch_axis: [T; 3],
    sign: Sign,
}

impl<T: Scalar> Projector<T> {
    pub fn matrix(&self) -> &CMat2<T> {
        &self.matrix
    }

    pub fn bloch_axis(&self) -> [T; 3] {
        self.bloch_axis
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

fn require_unit_axis<T: Scalar>(n: [T; 3]) -> Result<()> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - T::one()).abs() > T::TOL_STATE {
        return Err(Error::NotUnitAxis {
            norm: norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// `(1 +/- n.sigma)/2` for a unit 3-vector. The pair for the two signs
/// sums to the identity exactly by construction.
pub fn projector_from_axis<T: Scalar>(n: [T; 3], sign: Sign) -> Result<Projector<T>> {
    require_unit_axis(n)?;
    let dotted = bloch_dot(n);
    let signed = match sign {
        Sign::Plus => dotted,
        Sign::Minus => dotted.scale_re(-T::one()),
    };
    let matrix = identity2().add(&signed).scale_re(T::half());
    Ok(Projector {
        matrix,
        bloch_axis: n,
        sign,
    })
}

/// Eigenvectors of `n.sigma` for eigenvalues +1 and -1, phase-canonical
/// (first nonzero component real non-negative).
pub fn axis_eigenvectors<T: Scalar>(n: [T; 3]) -> Result<(CVec2<T>, CVec2<T>)> {
    require_unit_axis(n)?;
    let eig = bloch_dot(n).eigh();
    Ok((eig.vectors[0], eig.vectors[1]))
}

/// Kraus pair (A+, A-) of a two-outcome generalized measurement,
/// satisfying the completeness relation `A+'A+ + A-'A- = 1`.
#[derive(Debug, Clone)]
pub struct KrausPair<T> {
    a_plus: CMat2<T>,
    a_minus: CMat2<T>,
    provenance: KrausProvenance<T>,
}

/// How a Kraus pair was obtained. Probe provenance keeps enough data to
/// recompute per-step entanglement ledgers.
#[derive(Debug, Clone)]
pub enum KrausProvenance<T> {
    /// Derived from a joint unitary, probe preparation, and probe
    /// measurement axis.
    Probe {
        unitary: CMat4<T>,
        probe_prep: PureState<T, 2>,
        probe_axis: [T; 3],
    },
    /// Supplied directly (projective pairs, test fixtures).
    Direct,
}

impl<T: Scalar> KrausPair<T> {
    /// Validate the completeness relation and wrap the operators.
    pub fn new(
        a_plus: CMat2<T>,
        a_minus: CMat2<T>,
        provenance: KrausProvenance<T>,
    ) -> Result<Self> {
        if !a_plus.is_finite() || !a_minus.is_finite() {
            return Err(Error::NonFinite {
                context: "Kraus operators",
            });
        }
        let sum = a_plus
            .adjoint()
            .mul(&a_plus)
            .add(&a_minus.adjoint().mul(&a_minus));
        let dev = sum.max_diff(&identity2());
        if dev > T::TOL_STATE {
            return Err(Error::CompletenessViolation {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            a_plus,
            a_minus,
            provenance,
        })
    }

    /// Projective pair (P+, P-) from a measurement axis.
    pub fn from_axis(n: [T; 3]) -> Result<Self> {
        let p_plus = projector_from_axis(n, Sign::Plus)?;
        let p_minus = projector_from_axis(n, Sign::Minus)?;
        Self::new(*p_plus.matrix(), *p_minus.matrix(), KrausProvenance::Direct)
    }

    /// Trivial measurement: A+ = 1, A- = 0.
    pub fn identity() -> Self {
        Self {
            a_plus: identity2(),
            a_minus: CMat2::zero(),
            provenance: KrausProvenance::Direct,
        }
    }

    pub fn operator(&self, sign: Sign) -> &CMat2<T> {
        match sign {
            Sign::Plus => &self.a_plus,
            Sign::Minus => &self.a_minus,
        }
    }

    pub fn a_plus(&self) -> &CMat2<T> {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &CMat2<T> {
        &self.a_minus
    }

    pub fn provenance(&self) -> &KrausProvenance<T> {
        &self.provenance
    }

    /// Max-norm deviation of `A+'A+ + A-'A-` from the identity.
    pub fn completeness_deviation(&self) -> T {
        self.a_plus
            .adjoint()
            .mul(&self.a_plus)
            .add(&self.a_minus.adjoint().mul(&self.a_minus))
            .max_diff(&identity2())
    }
}

/// Post-measurement state: pure when the pre-measurement state was pure,
/// mixed otherwise.
#[derive(Debug, Clone)]
pub enum PostState<T> {
    Pure(PureState<T, 2>),
    Mixed(DensityMatrix<T, 2>),
}

/// One sampled measurement outcome: the sign, its Born probability, and
/// the renormalized post-measurement state.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome<T> {
    pub sign: Sign,
    pub probability: T,
    pub post_state: PostState<T>,
}

/// CNOT in the fixed basis, with the system (left factor) as control:
/// `|i j> -> |i (i xor j)>`.
pub fn gate_cnot<T: Scalar>() -> CMat4<T> {
    let mut m = CMat4::zero();
    let one = C::new(T::one(), T::zero());
    m.set(0, 0, one);
    m.set(1, 1, one);
    m.set(2, 3, one);
    m.set(3, 2, one);
    m
}

/// SWAP: `|i j> -> |j i>`.
pub fn gate_swap<T: Scalar>() -> CMat4<T> {
    let mut m = CMat4::zero();
    let one = C::new(T::one(), T::zero());
    m.set(0, 0, one);
    m.set(1, 2, one);
    m.set(2, 1, one);
    m.set(3, 3, one);
    m
}

/// `exp(-i epsilon H)` for a Hermitian two-q-bit coupling. Computed
/// exactly, not by the weak-coupling expansion, so it is valid at any
/// angle.
pub fn weak_unitary<T: Scalar>(h: &CMat4<T>, epsilon: T) -> Result<CMat4<T>> {
    crate::qlinalg::expm_hermitian(h, epsilon)
}

fn select_branch<T: Scalar>(p_plus: T, rand: T) -> Sign {
    // Fixed comparison direction keeps trajectories bit-reproducible.
    if rand < p_plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Projective measurement of a mixed state along a Bloch axis.
///
/// The outcome is `Plus` iff `rand < p_plus`; the post-state is
/// `P rho P / p`. Measuring the post-state on the same axis reproduces
/// the outcome with probability 1.
pub fn projective_measure<T: Scalar>(
    state: &DensityMatrix<T, 2>,
    axis: [T; 3],
    rand: T,
) -> Result<MeasurementOutcome<T>> {
    let p_plus_op = projector_from_axis(axis, Sign::Plus)?;
    let p_plus = p_plus_op.matrix().mul(state.matrix()).trace().re;
    let sign = select_branch(p_plus, rand);
    let probability = match sign {
        Sign::Plus => p_plus,
        Sign::Minus => T::one() - p_plus,
    };
    if probability < T::PROB_FLOOR {
        return Err(Error::DegenerateOutcome {
            probability: probability.to_f64().unwrap_or(f64::NAN),
        });
    }
    let projector = match sign {
        Sign::Plus => p_plus_op,
        Sign::Minus => projector_from_axis(axis, Sign::Minus)?,
    };
    let post = projector
        .matrix()
        .mul(state.matrix())
        .mul(projector.matrix())
        .scale_re(probability.recip());
    Ok(MeasurementOutcome {
        sign,
        probability,
        post_state: PostState::Mixed(DensityMatrix::new_unchecked(post)),
    })
}

/// Projective measurement of a pure state along a Bloch axis, staying in
/// the pure-state representation.
pub fn projective_measure_pure<T: Scalar>(
    state: &PureState<T, 2>,
    axis: [T; 3],
    rand: T,
) -> Result<MeasurementOutcome<T>> {
    let p_plus_op = projector_from_axis(axis, Sign::Plus)?;
    let projected = p_plus_op.matrix().mul_vec(state.amplitudes());
    let p_plus = projected.norm_sqr();
    let sign = select_branch(p_plus, rand);
    let probability = match sign {
        Sign::Plus => p_plus,
        Sign::Minus => T::one() - p_plus,
    };
    if probability < T::PROB_FLOOR {
        return Err(Error::DegenerateOutcome {
            probability: probability.to_f64().unwrap_or(f64::NAN),
        });
    }
    let raw = match sign {
        Sign::Plus => projected,
        Sign::Minus => projector_from_axis(axis, Sign::Minus)?
            .matrix()
            .mul_vec(state.amplitudes()),
    };
    let post = PureState::new(raw.scale_re(raw.norm().recip()))?;
    Ok(MeasurementOutcome {
        sign,
        probability,
        post_state: PostState::Pure(post),
    })
}

/// Derive the Kraus pair `A_k = <k|_p U |phi0>_p` of the generalized
/// measurement realized by coupling a probe through `u` and measuring it
/// along `probe_axis`.
///
/// Only pure probe preparations are supported; a mixed probe would need
/// more than two Kraus operators. The overall phase of each operator
/// follows the phase convention of [`axis_eigenvectors`]; all physical
/// quantities are invariant under it.
///
/// ```
/// use qprobe::qmeas::{gate_cnot, kraus_from_probe};
/// use qprobe::qstate::PureState;
/// use qprobe::Mat2;
///
/// // CNOT copies the system bit into a blank probe; reading the probe
/// // in the computational basis is then a projective measurement.
/// let pair = kraus_from_probe(&gate_cnot(), &PureState::basis(0), [0.0, 0.0, 1.0])?;
/// assert!(pair.a_plus().max_diff(&Mat2::from_re([[1.0, 0.0], [0.0, 0.0]])) < 1e-12);
/// assert!(pair.a_minus().max_diff(&Mat2::from_re([[0.0, 0.0], [0.0, 1.0]])) < 1e-12);
/// # Ok::<(), qprobe::Error>(())
/// ```
pub fn kraus_from_probe<T: Scalar>(
    u: &CMat4<T>,
    probe_prep: &PureState<T, 2>,
    probe_axis: [T; 3],
) -> Result<KrausPair<T>> {
    if !u.is_finite() {
        return Err(Error::NonFinite {
            context: "joint unitary",
        });
    }
    u.require_unitary(T::TOL_STATE)?;
    let (e_plus, e_minus) = axis_eigenvectors(probe_axis)?;
    let phi0 = probe_prep.amplitudes();

    let sandwich = |bra: &CVec2<T>| -> CMat2<T> {
        let mut m = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(T::zero(), T::zero());
                for p in 0..2 {
                    for q in 0..2 {
                        acc += bra.get(p).conj() * u.get(2 * i + p, 2 * j + q) * phi0.get(q);
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    };

    KrausPair::new(
        sandwich(&e_plus),
        sandwich(&e_minus),
        KrausProvenance::Probe {
            unitary: *u,
            probe_prep: probe_prep.clone(),
            probe_axis,
        },
    )
}

/// Generalized measurement of a mixed state: outcome `k` with probability
/// `Tr(A_k rho A_k')`, post-state `A_k rho A_k' / p_k`.
pub fn generalized_measure<T: Scalar>(
    state: &DensityMatrix<T, 2>,
    kraus: &KrausPair<T>,
    rand: T,
) -> Result<MeasurementOutcome<T>> {
    let branch_plus = kraus
        .a_plus
        .mul(state.matrix())
        .mul(&kraus.a_plus.adjoint());
    let p_plus = branch_plus.trace().re;
    let sign = select_branch(p_plus, rand);
    let (probability, branch) = match sign {
        Sign::Plus => (p_plus, branch_plus),
        Sign::Minus => {
            let branch = kraus
                .a_minus
                .mul(state.matrix())
                .mul(&kraus.a_minus.adjoint());
            (branch.trace().re, branch)
        }
    };
    if probability < T::PROB_FLOOR {
        return Err(Error::DegenerateOutcome {
            probability: probability.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(MeasurementOutcome {
        sign,
        probability,
        post_state: PostState::Mixed(DensityMatrix::new_unchecked(
            branch.scale_re(probability.recip()),
        )),
    })
}

/// Generalized measurement of a pure state: `|psi> -> A_k|psi>/sqrt(p_k)`
/// with `p_k = |A_k psi|^2`. This is the fast path trajectories run on.
pub fn generalized_measure_pure<T: Scalar>(
    state: &PureState<T, 2>,
    kraus: &KrausPair<T>,
    rand: T,
) -> Result<MeasurementOutcome<T>> {
    let plus_branch = kraus.a_plus.mul_vec(state.amplitudes());
    let p_plus = plus_branch.norm_sqr();
    let sign = select_branch(p_plus, rand);
    let (probability, raw) = match sign {
        Sign::Plus => (p_plus, plus_branch),
        Sign::Minus => {
            let branch = kraus.a_minus.mul_vec(state.amplitudes());
            (branch.norm_sqr(), branch)
        }
    };
    if probability < T::PROB_FLOOR {
        return Err(Error::DegenerateOutcome {
            probability: probability.to_f64().unwrap_or(f64::NAN),
        });
    }
    let post = PureState::new(raw.scale_re(raw.norm().recip()))?;
    Ok(MeasurementOutcome {
        sign,
        probability,
        post_state: PostState::Pure(post),
    })
}

/// Born probabilities (p+, p-) of a generalized measurement without
/// sampling an outcome.
pub fn branch_probabilities<T: Scalar>(
    state: &DensityMatrix<T, 2>,
    kraus: &KrausPair<T>,
) -> (T, T) {
    let p_plus = kraus
        .a_plus
        .mul(state.matrix())
        .mul(&kraus.a_plus.adjoint())
        .trace()
        .re;
    let p_minus = kraus
        .a_minus
        .mul(state.matrix())
        .mul(&kraus.a_minus.adjoint())
        .trace()
        .re;
    (p_plus, p_minus)
}
