//! Information and randomness accounting, all in bits (log base 2):
//! Shannon entropy of measurement outcomes, von Neumann entropy of
//! states, entropy of entanglement of joint pure states, the average
//! information gain of a generalized measurement, and the alternating
//! z/x randomness pump.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qlinalg::{partial_trace, CMat, HermEigen, Subsystem};
use crate::qmeas::{branch_probabilities, projective_measure_pure, KrausPair, PostState};
use crate::qstate::{density_from_pure, DensityMatrix, PureState};
use crate::scalar::Scalar;

/// Per-step information ledger shared by the randomness pump and the
/// trajectory engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoLedgerEntry<T> {
    pub step: usize,
    /// Outcome entropy of this step's measurement.
    pub shannon_bits: T,
    /// Average decrease of the system's von Neumann entropy.
    pub info_gain_bits: T,
    /// Entropy of entanglement created with the probe before measuring it.
    pub entanglement_bits: T,
    /// Von Neumann entropy of the post-measurement state.
    pub vn_entropy_bits: T,
}

fn xlog2x<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// `-p log2 p - (1-p) log2 (1-p)` with the `0 log 0 = 0` convention.
/// Inputs within the state tolerance of [0, 1] are clamped; anything
/// further out is a probability error.
pub fn shannon_entropy<T: Scalar>(p_plus: T) -> Result<T> {
    if p_plus < -T::TOL_STATE || p_plus > T::one() + T::TOL_STATE {
        return Err(Error::ProbabilityOutOfRange {
            value: p_plus.to_f64().unwrap_or(f64::NAN),
        });
    }
    let p = p_plus.max(T::zero()).min(T::one());
    Ok((-xlog2x(p) - xlog2x(T::one() - p)).max(T::zero()))
}

/// `S(rho) = -Tr(rho log2 rho)` over the eigenvalues, with eigenvalues in
/// `[-tol, 0]` clamped to zero. Eigenvalues below the clamp window are a
/// positivity violation.
pub fn von_neumann_entropy<T: Scalar, const N: usize>(rho: &DensityMatrix<T, N>) -> Result<T>
where
    CMat<T, N>: HermEigen<T, N>,
{
    let mut acc = T::zero();
    for value in rho.eigenvalues() {
        if value < -T::TOL_STATE {
            return Err(Error::PositivityViolation {
                eigenvalue: value.to_f64().unwrap_or(f64::NAN),
            });
        }
        acc -= xlog2x(value.max(T::zero()));
    }
    Ok(acc.max(T::zero()))
}

/// Entropy of entanglement of a joint pure state: the von Neumann
/// entropy of either reduced state. Both sides are computed and must
/// agree within tolerance.
pub fn entanglement_entropy<T: Scalar>(joint: &PureState<T, 4>) -> T {
    let psi = joint.amplitudes();
    let rho = psi.outer(psi);
    let s_sys = von_neumann_entropy(&DensityMatrix::new_unchecked(partial_trace(
        &rho,
        Subsystem::System,
    )))
    .expect("reduced state of a pure state is positive");
    let s_probe = von_neumann_entropy(&DensityMatrix::new_unchecked(partial_trace(
        &rho,
        Subsystem::Probe,
    )))
    .expect("reduced state of a pure state is positive");
    assert!(
        (s_sys - s_probe).abs() <= T::TOL_STATE,
        "reduced entropies disagree: {s_sys} vs {s_probe}"
    );
    s_sys
}

/// Average information gained about the system by one generalized
/// measurement: `S(rho) - sum_k p_k S(rho_k)`.
///
/// With pure probe preparations this is non-negative; branches below the
/// probability floor contribute nothing.
pub fn info_gain<T: Scalar>(rho_before: &DensityMatrix<T, 2>, kraus: &KrausPair<T>) -> Result<T> {
    let s_before = von_neumann_entropy(rho_before)?;
    let (p_plus, p_minus) = branch_probabilities(rho_before, kraus);
    let mut s_after = T::zero();
    for (p, sign) in [
        (p_plus, crate::qmeas::Sign::Plus),
        (p_minus, crate::qmeas::Sign::Minus),
    ] {
        if p < T::PROB_FLOOR {
            continue;
        }
        let a = kraus.operator(sign);
        let branch = a
            .mul(rho_before.matrix())
            .mul(&a.adjoint())
            .scale_re(p.recip());
        s_after += p * von_neumann_entropy(&DensityMatrix::new_unchecked(branch))?;
    }
    Ok(s_before - s_after)
}

/// Post-measurement snapshots plus the per-step ledger of a randomness
/// pump run.
#[derive(Debug, Clone)]
pub struct PumpRecord<T> {
    pub entries: Vec<InfoLedgerEntry<T>>,
    /// States after each measurement; index 0 is the initial state.
    pub states: Vec<PureState<T, 2>>,
}

impl<T: Scalar> PumpRecord<T> {
    /// Total outcome entropy harvested, in bits.
    pub fn total_bits(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.shannon_bits)
            .fold(T::zero(), |a, b| a + b)
    }

    /// Net information gained about the system, in bits.
    pub fn total_info_gain(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.info_gain_bits)
            .fold(T::zero(), |a, b| a + b)
    }
}

/// Alternate projective measurements on the z and x axes, starting from
/// `(|0> + |1>)/sqrt(2)`. Every outcome is an unbiased coin flip: the
/// run harvests one full bit per step while the state stays pure and no
/// information about the system is ever gained.
pub fn randomness_pump<T: Scalar>(n_steps: usize, seed: u64) -> Result<PumpRecord<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = crate::qstate::plus_state::<T>();
    let mut entries = Vec::with_capacity(n_steps);
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(state.clone());

    let z = [T::zero(), T::zero(), T::one()];
    let x = [T::one(), T::zero(), T::zero()];

    for step in 0..n_steps {
        let axis = if step % 2 == 0 { z } else { x };
        let rho_before = density_from_pure(&state);
        let kraus = KrausPair::from_axis(axis)?;

        let u: f64 = rng.gen();
        let outcome = projective_measure_pure(&state, axis, T::from_f64(u))?;
        let post = match outcome.post_state {
            PostState::Pure(s) => s,
            PostState::Mixed(_) => unreachable!("pure measurement returns a pure state"),
        };

        let p_plus = match outcome.sign {
            crate::qmeas::Sign::Plus => outcome.probability,
            crate::qmeas::Sign::Minus => T::one() - outcome.probability,
        };
        entries.push(InfoLedgerEntry {
            step,
            shannon_bits: shannon_entropy(p_plus)?,
            info_gain_bits: info_gain(&rho_before, &kraus)?,
            entanglement_bits: T::zero(),
            vn_entropy_bits: von_neumann_entropy(&density_from_pure(&post))?,
        });
        states.push(post.clone());
        state = post;
    }

    Ok(PumpRecord { entries, states })
}
