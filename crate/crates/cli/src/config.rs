//! Declarative experiment configuration.
//!
//! Configs are JSON with an exhaustive schema: unknown keys are rejected
//! and every referenced field is validated before any computation runs.
//! Defaults: `delta_t = 1`, `seed = 0`, `snapshot_stride = 1`,
//! `ensemble = 1`, `probe_prep = |0>`, `probe_axis = z`,
//! `unraveling = "exact"`, `output_dir = "out"`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use qprobe::qlinalg::{identity2, sigma_x, sigma_z, tensor_product, CVec};
use qprobe::qstate::pure_from_amplitudes;
use qprobe::{Mat2, Mat4, State2};

use crate::CliError;

/// Which experiment the runner executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Channel,
    Lindblad,
    Trajectories,
    RandomnessPump,
    InfoGain,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Channel => "channel",
            Experiment::Lindblad => "lindblad",
            Experiment::Trajectories => "trajectories",
            Experiment::RandomnessPump => "randomness-pump",
            Experiment::InfoGain => "info-gain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnravelingChoice {
    Exact,
    Jump,
    Diffusion,
}

/// Interaction Hamiltonian: a named preset or an explicit 4x4 Hermitian
/// matrix of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteractionChoice {
    Named(String),
    Explicit { matrix: Box<[[[f64; 2]; 4]; 4]> },
}

/// Initial system state: amplitude pair or the string "maximally-mixed".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialChoice {
    Named(String),
    Amplitudes([[f64; 2]; 2]),
}

/// On-disk schema. All optional fields have documented defaults; the
/// effective config after defaulting is echoed next to the artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Experiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interaction: Option<InteractionChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_prep: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_axis: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unraveling: Option<UnravelingChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_stride: Option<usize>,
}

/// Fully validated effective configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub experiment: Experiment,
    pub interaction: InteractionChoice,
    pub epsilon: f64,
    pub delta_t: f64,
    pub probe_prep: [[f64; 2]; 2],
    pub probe_axis: [f64; 3],
    pub initial_state: InitialChoice,
    pub steps: usize,
    pub ensemble: usize,
    pub seed: u64,
    pub unraveling: UnravelingChoice,
    pub output_dir: String,
    pub snapshot_stride: usize,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| config_err(format!("line {} column {}: {}", e.line(), e.column(), e)))?;
    validate(raw)
}

/// Resolve a named interaction preset to its Hamiltonian.
pub fn interaction_matrix(choice: &InteractionChoice) -> Result<Mat4, CliError> {
    match choice {
        InteractionChoice::Named(name) => match name.as_str() {
            // Dephasing coupling of the weak-interaction examples.
            "sigma-z-x" => Ok(tensor_product(&sigma_z(), &sigma_x())),
            // Projector generator whose exponential at epsilon = pi is
            // exactly the CNOT gate: |1><1| (x) (1 - sigma_x)/2.
            "cnot-generator" => {
                let p1 = Mat2::from_re([[0.0, 0.0], [0.0, 1.0]]);
                let half_flip = identity2::<f64>().sub(&sigma_x()).scale_re(0.5);
                Ok(tensor_product(&p1, &half_flip))
            }
            other => Err(config_err(format!(
                "field `interaction`: unknown preset `{other}` (expected \"sigma-z-x\", \"cnot-generator\", or an explicit matrix)"
            ))),
        },
        InteractionChoice::Explicit { matrix } => {
            let mut m = Mat4::zero();
            for (i, row) in matrix.iter().enumerate() {
                for (j, pair) in row.iter().enumerate() {
                    if !pair[0].is_finite() || !pair[1].is_finite() {
                        return Err(config_err(
                            "field `interaction.matrix`: entries must be finite",
                        ));
                    }
                    m.set(i, j, Complex::new(pair[0], pair[1]));
                }
            }
            if m.hermiticity_deviation() > 1e-12 {
                return Err(config_err(
                    "field `interaction.matrix`: matrix is not Hermitian within 1e-12",
                ));
            }
            Ok(m)
        }
    }
}

pub fn probe_prep_state(config: &Config) -> Result<State2, CliError> {
    let p = config.probe_prep;
    pure_from_amplitudes(
        Complex::new(p[0][0], p[0][1]),
        Complex::new(p[1][0], p[1][1]),
    )
    .map_err(|e| config_err(format!("field `probe_prep`: {e}")))
}

pub fn initial_pure_state(config: &Config) -> Result<Option<State2>, CliError> {
    match &config.initial_state {
        InitialChoice::Named(name) if name == "maximally-mixed" => Ok(None),
        InitialChoice::Named(other) => Err(config_err(format!(
            "field `initial_state`: unknown name `{other}` (expected \"maximally-mixed\" or an amplitude pair)"
        ))),
        InitialChoice::Amplitudes(a) => pure_from_amplitudes(
            Complex::new(a[0][0], a[0][1]),
            Complex::new(a[1][0], a[1][1]),
        )
        .map(Some)
        .map_err(|e| config_err(format!("field `initial_state`: {e}"))),
    }
}

fn validated_axis(axis: [f64; 3], field: &str) -> Result<[f64; 3], CliError> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(config_err(format!(
            "field `{field}`: [{}, {}, {}] is not a unit 3-vector",
            axis[0], axis[1], axis[2]
        )));
    }
    // Hand-typed axes are allowed tiny drift; pin them to unit norm so
    // the strict core tolerances hold downstream.
    Ok([axis[0] / norm, axis[1] / norm, axis[2] / norm])
}

fn validate(raw: RawConfig) -> Result<Config, CliError> {
    let experiment = raw.experiment;

    let needs_interaction = !matches!(experiment, Experiment::RandomnessPump);
    let interaction = match (raw.interaction, needs_interaction) {
        (Some(i), _) => i,
        (None, false) => InteractionChoice::Named("sigma-z-x".into()),
        (None, true) => {
            return Err(config_err(format!(
                "field `interaction` is required for experiment `{}`",
                experiment.as_str()
            )))
        }
    };

    let epsilon = match (raw.epsilon, needs_interaction) {
        (Some(e), _) => e,
        (None, false) => 0.0,
        (None, true) => {
            return Err(config_err(format!(
                "field `epsilon` is required for experiment `{}`",
                experiment.as_str()
            )))
        }
    };
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(config_err("field `epsilon` must be finite and >= 0"));
    }

    let delta_t = raw.delta_t.unwrap_or(1.0);
    if !delta_t.is_finite() || delta_t <= 0.0 {
        return Err(config_err("field `delta_t` must be finite and > 0"));
    }

    let needs_steps = !matches!(experiment, Experiment::InfoGain);
    let steps = match (raw.steps, needs_steps) {
        (Some(s), _) => s,
        (None, false) => 1,
        (None, true) => {
            return Err(config_err(format!(
                "field `steps` is required for experiment `{}`",
                experiment.as_str()
            )))
        }
    };
    if experiment == Experiment::RandomnessPump && steps == 0 {
        return Err(config_err("field `steps` must be >= 1 for randomness-pump"));
    }

    let ensemble = raw.ensemble.unwrap_or(1);
    if ensemble == 0 {
        return Err(config_err("field `ensemble` must be >= 1"));
    }

    let snapshot_stride = raw.snapshot_stride.unwrap_or(1);
    if snapshot_stride == 0 {
        return Err(config_err("field `snapshot_stride` must be >= 1"));
    }

    let unraveling = raw.unraveling.unwrap_or(UnravelingChoice::Exact);

    // Jump and diffusion unravelings fix the probe measurement axis; an
    // explicit conflicting axis is a configuration mistake.
    let probe_axis = match (unraveling, experiment, raw.probe_axis) {
        (UnravelingChoice::Jump, Experiment::Trajectories, Some(axis)) => {
            let axis = validated_axis(axis, "probe_axis")?;
            if axis != [0.0, 0.0, 1.0] {
                return Err(config_err(
                    "field `probe_axis`: jump unraveling measures the probe along z; omit the field or set [0, 0, 1]",
                ));
            }
            axis
        }
        (UnravelingChoice::Diffusion, Experiment::Trajectories, Some(axis)) => {
            let axis = validated_axis(axis, "probe_axis")?;
            if axis != [1.0, 0.0, 0.0] {
                return Err(config_err(
                    "field `probe_axis`: diffusion unraveling measures the probe along x; omit the field or set [1, 0, 0]",
                ));
            }
            axis
        }
        (UnravelingChoice::Jump, Experiment::Trajectories, None) => [0.0, 0.0, 1.0],
        (UnravelingChoice::Diffusion, Experiment::Trajectories, None) => [1.0, 0.0, 0.0],
        (_, _, axis) => validated_axis(axis.unwrap_or([0.0, 0.0, 1.0]), "probe_axis")?,
    };

    let probe_prep = raw.probe_prep.unwrap_or([[1.0, 0.0], [0.0, 0.0]]);
    for pair in probe_prep {
        if !pair[0].is_finite() || !pair[1].is_finite() {
            return Err(config_err("field `probe_prep`: entries must be finite"));
        }
    }

    let initial_state = raw
        .initial_state
        .unwrap_or(InitialChoice::Amplitudes([[1.0, 0.0], [0.0, 0.0]]));

    let config = Config {
        experiment,
        interaction,
        epsilon,
        delta_t,
        probe_prep,
        probe_axis,
        initial_state,
        steps,
        ensemble,
        seed: raw.seed.unwrap_or(0),
        unraveling,
        output_dir: raw.output_dir.unwrap_or_else(|| "out".into()),
        snapshot_stride,
    };

    // Eager checks of the derived objects so bad configs fail with exit
    // code 2 before any computation.
    interaction_matrix(&config.interaction)?;
    probe_prep_state(&config)?;
    let initial = initial_pure_state(&config)?;
    if config.experiment == Experiment::Trajectories && initial.is_none() {
        return Err(config_err(
            "field `initial_state`: trajectories require a pure state, not \"maximally-mixed\"",
        ));
    }

    Ok(config)
}

impl Config {
    /// The effective config, every field explicit, in the on-disk schema.
    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            experiment: self.experiment,
            interaction: Some(self.interaction.clone()),
            epsilon: Some(self.epsilon),
            delta_t: Some(self.delta_t),
            probe_prep: Some(self.probe_prep),
            probe_axis: Some(self.probe_axis),
            initial_state: Some(self.initial_state.clone()),
            steps: Some(self.steps),
            ensemble: Some(self.ensemble),
            seed: Some(self.seed),
            unraveling: Some(self.unraveling),
            output_dir: Some(self.output_dir.clone()),
            snapshot_stride: Some(self.snapshot_stride),
        }
    }

    /// CVec form of the initial pure state, if the config has one.
    pub fn initial_amplitudes(&self) -> Option<CVec<f64, 2>> {
        match &self.initial_state {
            InitialChoice::Amplitudes(a) => Some(CVec::new([
                Complex::new(a[0][0], a[0][1]),
                Complex::new(a[1][0], a[1][1]),
            ])),
            InitialChoice::Named(_) => None,
        }
    }
}
