//! Time evolution engines.
//!
//! Three views of the same physics, built from one repeated probe
//! interaction:
//!
//! * [`channel_evolve`] iterates the trace-preserving map
//!   `rho -> A+ rho A+' + A- rho A-'` (nobody measures the probes);
//! * [`lindblad_integrate`] integrates the weak-coupling master equation
//!   with parameters derived microscopically by [`derive_lindblad`];
//! * [`TrajectoryEngine`] unravels the channel into stochastic pure-state
//!   trajectories (exact-discrete, jump, or diffusion), whose ensemble
//!   mean recovers the channel.
//!
//! Stochastic steps use the exact per-step Kraus operators rather than
//! the continuum `dN`/`dW` idealizations, so `channel_evolve` is an
//! exact oracle for the trajectory mean: the jump probability is
//! `sin^2(eps)` (which is `eps^2` to leading order) and the diffusion
//! increment `+/-eps` corresponds to `dW = +/-sqrt(dt)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qinfo::{
    entanglement_entropy, info_gain, shannon_entropy, von_neumann_entropy, InfoLedgerEntry,
};
use crate::qlinalg::{CMat2, CMat4, C};
use crate::qmeas::{
    generalized_measure_pure, kraus_from_probe, weak_unitary, KrausPair, KrausProvenance,
    PostState, Sign,
};
use crate::qstate::{density_from_pure, DensityMatrix, PureState};
use crate::scalar::Scalar;

/// One repeated probe interaction: a joint Hermitian coupling `H`, the
/// strength `epsilon` in `U = exp(-i epsilon H)`, the arrival spacing
/// `delta_t` of the probe stream (deterministic arrivals), and the pure
/// probe preparation.
#[derive(Debug, Clone)]
pub struct InteractionSpec<T> {
    hamiltonian: CMat4<T>,
    epsilon: T,
    delta_t: T,
    probe_prep: PureState<T, 2>,
}

impl<T: Scalar> InteractionSpec<T> {
    pub fn new(
        hamiltonian: CMat4<T>,
        epsilon: T,
        delta_t: T,
        probe_prep: PureState<T, 2>,
    ) -> Result<Self> {
        if !hamiltonian.is_finite() {
            return Err(Error::NonFinite {
                context: "interaction Hamiltonian",
            });
        }
        hamiltonian.require_hermitian(T::TOL_EXACT)?;
        if epsilon < T::zero() {
            return Err(Error::InvalidInteraction {
                reason: "epsilon must be non-negative",
            });
        }
        if delta_t <= T::zero() {
            return Err(Error::InvalidInteraction {
                reason: "delta_t must be positive",
            });
        }
        Ok(Self {
            hamiltonian,
            epsilon,
            delta_t,
            probe_prep,
        })
    }

    pub fn hamiltonian(&self) -> &CMat4<T> {
        &self.hamiltonian
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn delta_t(&self) -> T {
        self.delta_t
    }

    pub fn probe_prep(&self) -> &PureState<T, 2> {
        &self.probe_prep
    }

    /// The exact joint unitary `exp(-i epsilon H)`.
    pub fn unitary(&self) -> CMat4<T> {
        weak_unitary(&self.hamiltonian, self.epsilon).expect("validated Hermitian coupling")
    }

    /// Kraus pair for this interaction with a probe measurement along
    /// `axis`.
    pub fn kraus(&self, axis: [T; 3]) -> Result<KrausPair<T>> {
        kraus_from_probe(&self.unitary(), &self.probe_prep, axis)
    }
}

/// Master-equation parameters: effective Hamiltonian (frequency units)
/// and Lindblad operator (units of 1/sqrt(time)).
#[derive(Debug, Clone, Copy)]
pub struct LindbladParams<T> {
    pub h_eff: CMat2<T>,
    pub lindblad_op: CMat2<T>,
}

/// Partial matrix element `<bra|_p M |ket>_p`: a system operator.
fn probe_sandwich<T: Scalar>(
    m: &CMat4<T>,
    bra: &crate::qlinalg::CVec2<T>,
    ket: &crate::qlinalg::CVec2<T>,
) -> CMat2<T> {
    let mut out = CMat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C::new(T::zero(), T::zero());
            for p in 0..2 {
                for q in 0..2 {
                    acc += bra.get(p).conj() * m.get(2 * i + p, 2 * j + q) * ket.get(q);
                }
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Weak-coupling master-equation parameters of the repeated interaction:
/// `H_eff = (eps/dt) <phi0|H|phi0>` and `L = (eps/sqrt(dt)) <phi0bar|H|phi0>`,
/// where `|phi0bar>` is the orthogonal complement of the probe
/// preparation under the fixed convention `(a, b) -> (-conj(b), conj(a))`.
///
/// The prefactors are exactly the ones that make the `O(eps^2)` expansion
/// of the discrete channel match the master equation; the acceptance
/// suite verifies this numerically.
pub fn derive_lindblad<T: Scalar>(spec: &InteractionSpec<T>) -> LindbladParams<T> {
    let phi0 = spec.probe_prep.amplitudes();
    let phi0_bar = phi0.orthogonal();
    let h_eff = probe_sandwich(&spec.hamiltonian, phi0, phi0).scale_re(spec.epsilon / spec.delta_t);
    let lindblad_op = probe_sandwich(&spec.hamiltonian, &phi0_bar, phi0)
        .scale_re(spec.epsilon / spec.delta_t.sqrt());
    LindbladParams { h_eff, lindblad_op }
}

/// Apply the decoherence channel once: `rho -> A+ rho A+' + A- rho A-'`.
pub fn channel_step<T: Scalar>(
    rho: &DensityMatrix<T, 2>,
    kraus: &KrausPair<T>,
) -> DensityMatrix<T, 2> {
    let plus = kraus
        .a_plus()
        .mul(rho.matrix())
        .mul(&kraus.a_plus().adjoint());
    let minus = kraus
        .a_minus()
        .mul(rho.matrix())
        .mul(&kraus.a_minus().adjoint());
    DensityMatrix::new_unchecked(plus.add(&minus))
}

/// Iterate the channel; the series includes the initial state, so its
/// length is `steps + 1`.
pub fn channel_evolve<T: Scalar>(
    rho0: &DensityMatrix<T, 2>,
    kraus: &KrausPair<T>,
    steps: usize,
) -> Vec<DensityMatrix<T, 2>> {
    let mut series = Vec::with_capacity(steps + 1);
    series.push(*rho0);
    let mut rho = *rho0;
    for _ in 0..steps {
        rho = channel_step(&rho, kraus);
        series.push(rho);
    }
    series
}

/// Output of the master-equation integrator.
#[derive(Debug, Clone)]
pub struct LindbladRun<T> {
    /// Time stamps `k * dt`.
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T, 2>>,
    /// Largest per-step trace drift absorbed by renormalization.
    pub max_trace_drift: T,
}

fn lindblad_rhs<T: Scalar>(params: &LindbladParams<T>, rho: &CMat2<T>) -> CMat2<T> {
    let h = &params.h_eff;
    let l = &params.lindblad_op;
    let commutator = h.mul(rho).sub(&rho.mul(h));
    let hop = l.mul(rho).mul(&l.adjoint());
    let ll = l.adjoint().mul(l);
    let anticomm = ll.mul(rho).add(&rho.mul(&ll));
    commutator
        .scale(C::new(T::zero(), -T::one()))
        .add(&hop)
        .sub(&anticomm.scale_re(T::half()))
}

/// Fixed-step classic 4th-order integration of the master equation
/// `drho/dt = -i[H_eff, rho] + L rho L' - (1/2){L'L, rho}`.
///
/// The step must satisfy `|generator| * dt < 0.1` (Frobenius estimate).
/// Each output is trace-renormalized; per-step drift beyond tolerance is
/// an error, and the largest drift is reported.
pub fn lindblad_integrate<T: Scalar>(
    rho0: &DensityMatrix<T, 2>,
    params: &LindbladParams<T>,
    dt: T,
    t_final: T,
) -> Result<LindbladRun<T>> {
    if dt <= T::zero() || t_final < T::zero() {
        return Err(Error::InvalidInteraction {
            reason: "dt must be positive and t_final non-negative",
        });
    }
    let l_norm = params.lindblad_op.frobenius_norm();
    let generator_norm =
        T::from_f64(2.0) * params.h_eff.frobenius_norm() + T::from_f64(2.0) * l_norm * l_norm;
    if generator_norm * dt >= T::from_f64(0.1) {
        return Err(Error::StepTooLarge {
            dt: dt.to_f64().unwrap_or(f64::NAN),
            product: (generator_norm * dt).to_f64().unwrap_or(f64::NAN),
        });
    }

    let n_steps = (t_final / dt).round().to_f64().unwrap_or(0.0) as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut rho = *rho0.matrix();
    let mut max_drift = T::zero();
    times.push(T::zero());
    states.push(*rho0);

    let half = T::half();
    let sixth = T::from_f64(6.0).recip();
    for k in 0..n_steps {
        let k1 = lindblad_rhs(params, &rho);
        let k2 = lindblad_rhs(params, &rho.add(&k1.scale_re(dt * half)));
        let k3 = lindblad_rhs(params, &rho.add(&k2.scale_re(dt * half)));
        let k4 = lindblad_rhs(params, &rho.add(&k3.scale_re(dt)));
        let increment = k1
            .add(&k2.scale_re(T::from_f64(2.0)))
            .add(&k3.scale_re(T::from_f64(2.0)))
            .add(&k4)
            .scale_re(dt * sixth);
        rho = rho.add(&increment);

        let trace = rho.trace().re;
        let drift = (trace - T::one()).abs();
        if drift > T::TOL_STATE {
            return Err(Error::TraceDrift {
                drift: drift.to_f64().unwrap_or(f64::NAN),
            });
        }
        max_drift = max_drift.max(drift);
        rho = rho.scale_re(trace.recip());

        times.push(T::from_usize(k + 1) * dt);
        states.push(DensityMatrix::new_unchecked(rho));
    }

    Ok(LindbladRun {
        times,
        states,
        max_trace_drift: max_drift,
    })
}

/// Which stochastic unraveling produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unraveling {
    /// Generalized measurement with exact Born sampling each step.
    ExactDiscrete,
    /// z-axis probe measurement: rare discrete kicks (`Minus` outcomes).
    Jump,
    /// x-axis probe measurement: an unbiased +/- random walk of weak
    /// unitary kicks.
    Diffusion,
}

impl Unraveling {
    pub fn as_str(self) -> &'static str {
        match self {
            Unraveling::ExactDiscrete => "exact",
            Unraveling::Jump => "jump",
            Unraveling::Diffusion => "diffusion",
        }
    }
}

/// One stochastic pure-state trajectory. Snapshots are stored every
/// `snapshot_stride` steps (plus the initial and final states), while
/// outcomes and the ledger cover every step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    /// Master seed of the run this trajectory belongs to.
    pub seed: u64,
    /// Stream index within the ensemble (0 for single runs).
    pub stream: u64,
    pub unraveling: Unraveling,
    pub outcomes: Vec<Sign>,
    pub states: Vec<PureState<T, 2>>,
    pub times: Vec<T>,
    pub ledger: Vec<InfoLedgerEntry<T>>,
}

impl<T: Scalar> TrajectoryRecord<T> {
    pub fn count(&self, sign: Sign) -> usize {
        self.outcomes.iter().filter(|&&s| s == sign).count()
    }

    /// Number of `Minus` outcomes; for the jump unraveling this is the
    /// jump count.
    pub fn jump_count(&self) -> usize {
        self.count(Sign::Minus)
    }

    pub fn final_state(&self) -> &PureState<T, 2> {
        self.states.last().expect("record holds the initial state")
    }
}

enum StepRule {
    /// Sample both branches by the Born rule.
    Born,
    /// Two equal-probability branches, recorded as exactly one half.
    FixedHalf,
}

/// A prepared trajectory engine: the per-step Kraus pair plus sampling
/// rule for one unraveling of a repeated interaction.
pub struct TrajectoryEngine<T> {
    kraus: KrausPair<T>,
    delta_t: T,
    unraveling: Unraveling,
    rule: StepRule,
}

impl<T: Scalar> TrajectoryEngine<T> {
    /// Exact-discrete unraveling of an arbitrary Kraus pair. `delta_t`
    /// spaces the recorded time stamps.
    pub fn exact(kraus: KrausPair<T>, delta_t: T) -> Result<Self> {
        if delta_t <= T::zero() {
            return Err(Error::InvalidInteraction {
                reason: "delta_t must be positive",
            });
        }
        Ok(Self {
            kraus,
            delta_t,
            unraveling: Unraveling::ExactDiscrete,
            rule: StepRule::Born,
        })
    }

    /// Jump unraveling: probe measured along z. Requires the no-jump
    /// operator to be proportional to the identity to `O(eps^2)`, which
    /// is what makes `Minus` outcomes rare discrete kicks.
    pub fn jump(spec: &InteractionSpec<T>) -> Result<Self> {
        let kraus = spec.kraus([T::zero(), T::zero(), T::one()])?;
        let a_plus = kraus.a_plus();
        let mean = a_plus.trace().scale(T::half());
        let dev = a_plus.max_diff(&CMat2::identity().scale(mean));
        let bound = spec.epsilon * spec.epsilon + T::TOL_EXACT;
        if dev > bound {
            return Err(Error::NoJumpStructure {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                bound: bound.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            kraus,
            delta_t: spec.delta_t,
            unraveling: Unraveling::Jump,
            rule: StepRule::Born,
        })
    }

    /// Diffusion unraveling: probe measured along x. Requires both
    /// branches to be weak unitaries of equal weight,
    /// `A_k' A_k = 1/2` to `O(eps^2)`.
    pub fn diffusion(spec: &InteractionSpec<T>) -> Result<Self> {
        let kraus = spec.kraus([T::one(), T::zero(), T::zero()])?;
        let half_identity = CMat2::identity().scale_re(T::half());
        let bound = spec.epsilon * spec.epsilon + T::TOL_EXACT;
        for sign in [Sign::Plus, Sign::Minus] {
            let a = kraus.operator(sign);
            let dev = a.adjoint().mul(a).max_diff(&half_identity);
            if dev > bound {
                return Err(Error::NoDiffusionStructure {
                    deviation: dev.to_f64().unwrap_or(f64::NAN),
                    bound: bound.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            kraus,
            delta_t: spec.delta_t,
            unraveling: Unraveling::Diffusion,
            rule: StepRule::FixedHalf,
        })
    }

    pub fn kraus(&self) -> &KrausPair<T> {
        &self.kraus
    }

    pub fn unraveling(&self) -> Unraveling {
        self.unraveling
    }

    /// Run one trajectory. The generator stream is derived from
    /// `(master seed, stream index)`, so ensembles are reproducible
    /// independent of scheduling; identical inputs give bit-identical
    /// records.
    pub fn run(
        &self,
        psi0: &PureState<T, 2>,
        steps: usize,
        seed: u64,
        stream: u64,
        snapshot_stride: usize,
    ) -> Result<TrajectoryRecord<T>> {
        let stride = snapshot_stride.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);

        let mut outcomes = Vec::with_capacity(steps);
        let mut ledger = Vec::with_capacity(steps);
        let mut states = Vec::with_capacity(steps / stride + 2);
        let mut times = Vec::with_capacity(steps / stride + 2);
        let mut state = psi0.clone();
        states.push(state.clone());
        times.push(T::zero());

        // Entanglement ledger needs the probe model; a directly supplied
        // Kraus pair has no probe to entangle with.
        let probe_model = match self.kraus.provenance() {
            KrausProvenance::Probe {
                unitary,
                probe_prep,
                ..
            } => Some((*unitary, *probe_prep.amplitudes())),
            KrausProvenance::Direct => None,
        };

        for step in 0..steps {
            let rho_pre = density_from_pure(&state);
            let entanglement_bits = match &probe_model {
                Some((u, phi0)) => {
                    let joint = u.mul_vec(&crate::qlinalg::tensor_product_vec(
                        state.amplitudes(),
                        phi0,
                    ));
                    entanglement_entropy(&PureState::new(joint)?)
                }
                None => T::zero(),
            };
            let info_gain_bits = info_gain(&rho_pre, &self.kraus)?;

            let u: f64 = rng.gen();
            let (sign, probability, post) = match self.rule {
                StepRule::Born => {
                    let outcome = generalized_measure_pure(&state, &self.kraus, T::from_f64(u))?;
                    let post = match outcome.post_state {
                        PostState::Pure(s) => s,
                        PostState::Mixed(_) => unreachable!("pure input yields pure output"),
                    };
                    (outcome.sign, outcome.probability, post)
                }
                StepRule::FixedHalf => {
                    let sign = if T::from_f64(u) < T::half() {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    let raw = self.kraus.operator(sign).mul_vec(state.amplitudes());
                    let post = PureState::new(raw.scale_re(raw.norm().recip()))?;
                    (sign, T::half(), post)
                }
            };

            ledger.push(InfoLedgerEntry {
                step,
                shannon_bits: shannon_entropy(probability)?,
                info_gain_bits,
                entanglement_bits,
                vn_entropy_bits: von_neumann_entropy(&density_from_pure(&post))?,
            });
            outcomes.push(sign);
            state = post;

            if (step + 1) % stride == 0 || step + 1 == steps {
                states.push(state.clone());
                times.push(T::from_usize(step + 1) * self.delta_t);
            }
        }

        Ok(TrajectoryRecord {
            seed,
            stream,
            unraveling: self.unraveling,
            outcomes,
            states,
            times,
            ledger,
        })
    }

    /// Run `n_trajectories` independent trajectories in parallel. Stream
    /// `i` of the master seed drives trajectory `i`, so the result is
    /// deterministic regardless of thread scheduling.
    pub fn run_ensemble(
        &self,
        psi0: &PureState<T, 2>,
        steps: usize,
        n_trajectories: usize,
        seed: u64,
        snapshot_stride: usize,
    ) -> Result<Vec<TrajectoryRecord<T>>> {
        (0..n_trajectories)
            .into_par_iter()
            .map(|i| self.run(psi0, steps, seed, i as u64, snapshot_stride))
            .collect()
    }
}

/// Single exact-discrete trajectory of a Kraus pair with unit time steps.
pub fn trajectory_exact<T: Scalar>(
    psi0: &PureState<T, 2>,
    kraus: &KrausPair<T>,
    steps: usize,
    seed: u64,
) -> Result<TrajectoryRecord<T>> {
    TrajectoryEngine::exact(kraus.clone(), T::one())?.run(psi0, steps, seed, 0, 1)
}

/// Single jump trajectory (z-axis probe measurement).
pub fn trajectory_jump<T: Scalar>(
    psi0: &PureState<T, 2>,
    spec: &InteractionSpec<T>,
    steps: usize,
    seed: u64,
) -> Result<TrajectoryRecord<T>> {
    TrajectoryEngine::jump(spec)?.run(psi0, steps, seed, 0, 1)
}

/// Single diffusion trajectory (x-axis probe measurement).
pub fn trajectory_diffusion<T: Scalar>(
    psi0: &PureState<T, 2>,
    spec: &InteractionSpec<T>,
    steps: usize,
    seed: u64,
) -> Result<TrajectoryRecord<T>> {
    TrajectoryEngine::diffusion(spec)?.run(psi0, steps, seed, 0, 1)
}

/// Ensemble mean of trajectory projectors with a per-snapshot standard
/// error.
#[derive(Debug, Clone)]
pub struct EnsembleResult<T> {
    pub n_trajectories: usize,
    pub times: Vec<T>,
    pub mean_rho: Vec<DensityMatrix<T, 2>>,
    /// Largest entry-wise standard error of the mean at each snapshot.
    pub stderr: Vec<T>,
}

/// Average `|psi><psi|` over trajectories at every stored snapshot.
///
/// All records must share the unraveling, snapshot grid, and master
/// seed layout; the summation runs in trajectory-index order so the
/// reduction is bit-reproducible.
pub fn ensemble_average<T: Scalar>(records: &[TrajectoryRecord<T>]) -> Result<EnsembleResult<T>> {
    let first = records.first().ok_or(Error::EmptyEnsemble)?;
    for r in records {
        if r.unraveling != first.unraveling {
            return Err(Error::InhomogeneousEnsemble {
                reason: "mixed unravelings",
            });
        }
        if r.times != first.times {
            return Err(Error::InhomogeneousEnsemble {
                reason: "mismatched time grids",
            });
        }
        if r.states.len() != first.states.len() {
            return Err(Error::InhomogeneousEnsemble {
                reason: "mismatched snapshot counts",
            });
        }
    }

    let n = records.len();
    let n_t = T::from_usize(n);
    let mut mean_rho = Vec::with_capacity(first.states.len());
    let mut stderr = Vec::with_capacity(first.states.len());

    for idx in 0..first.states.len() {
        let mut sum = CMat2::zero();
        for r in records {
            let psi = r.states[idx].amplitudes();
            sum = sum.add(&psi.outer(psi));
        }
        let mean = sum.scale_re(n_t.recip());

        let se = if n < 2 {
            T::zero()
        } else {
            let mut max_var = T::zero();
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = T::zero();
                    for r in records {
                        let psi = r.states[idx].amplitudes();
                        let entry = psi.get(i) * psi.get(j).conj();
                        acc += (entry - mean.get(i, j)).norm_sqr();
                    }
                    max_var = max_var.max(acc);
                }
            }
            (max_var / (n_t * (n_t - T::one()))).sqrt()
        };

        mean_rho.push(DensityMatrix::new(mean)?);
        stderr.push(se);
    }

    Ok(EnsembleResult {
        n_trajectories: n,
        times: first.times.clone(),
        mean_rho,
        stderr,
    })
}
