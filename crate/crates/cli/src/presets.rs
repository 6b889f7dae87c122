//! Shipped experiment presets: one command per worked example.

use crate::config::{Config, Experiment, InitialChoice, InteractionChoice, UnravelingChoice};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn base(experiment: Experiment) -> Config {
    Config {
        experiment,
        interaction: InteractionChoice::Named("sigma-z-x".into()),
        epsilon: 0.1,
        delta_t: 1.0,
        probe_prep: [[1.0, 0.0], [0.0, 0.0]],
        probe_axis: [0.0, 0.0, 1.0],
        initial_state: InitialChoice::Amplitudes([[1.0, 0.0], [0.0, 0.0]]),
        steps: 100,
        ensemble: 1,
        seed: 0,
        unraveling: UnravelingChoice::Exact,
        output_dir: "out".into(),
        snapshot_stride: 1,
    }
}

fn dephasing_channel() -> Config {
    Config {
        initial_state: InitialChoice::Amplitudes([[0.6, 0.0], [0.8, 0.0]]),
        steps: 500,
        output_dir: "out/dephasing-channel".into(),
        ..base(Experiment::Channel)
    }
}

fn dephasing_lindblad() -> Config {
    Config {
        initial_state: InitialChoice::Amplitudes([[0.6, 0.0], [0.8, 0.0]]),
        steps: 500,
        output_dir: "out/dephasing-lindblad".into(),
        ..base(Experiment::Lindblad)
    }
}

fn jump_ensemble() -> Config {
    Config {
        initial_state: InitialChoice::Amplitudes([[FRAC_1_SQRT_2, 0.0], [FRAC_1_SQRT_2, 0.0]]),
        steps: 100,
        ensemble: 20_000,
        seed: 1,
        unraveling: UnravelingChoice::Jump,
        snapshot_stride: 10,
        output_dir: "out/jump-ensemble".into(),
        ..base(Experiment::Trajectories)
    }
}

fn diffusion_ensemble() -> Config {
    Config {
        probe_axis: [1.0, 0.0, 0.0],
        initial_state: InitialChoice::Amplitudes([[FRAC_1_SQRT_2, 0.0], [FRAC_1_SQRT_2, 0.0]]),
        steps: 100,
        ensemble: 20_000,
        seed: 2,
        unraveling: UnravelingChoice::Diffusion,
        snapshot_stride: 10,
        output_dir: "out/diffusion-ensemble".into(),
        ..base(Experiment::Trajectories)
    }
}

fn randomness_pump() -> Config {
    Config {
        epsilon: 0.0,
        steps: 1000,
        output_dir: "out/randomness-pump".into(),
        ..base(Experiment::RandomnessPump)
    }
}

fn cnot_info(axis: [f64; 3], dir: &str) -> Config {
    Config {
        interaction: InteractionChoice::Named("cnot-generator".into()),
        epsilon: std::f64::consts::PI,
        probe_axis: axis,
        initial_state: InitialChoice::Named("maximally-mixed".into()),
        steps: 1,
        output_dir: format!("out/{dir}"),
        ..base(Experiment::InfoGain)
    }
}

/// Look up a preset by name.
pub fn find(name: &str) -> Option<Config> {
    match name {
        "dephasing-channel" => Some(dephasing_channel()),
        "dephasing-lindblad" => Some(dephasing_lindblad()),
        "jump-ensemble" => Some(jump_ensemble()),
        "diffusion-ensemble" => Some(diffusion_ensemble()),
        "randomness-pump" => Some(randomness_pump()),
        "cnot-info-z" => Some(cnot_info([0.0, 0.0, 1.0], "cnot-info-z")),
        "cnot-info-x" => Some(cnot_info([1.0, 0.0, 0.0], "cnot-info-x")),
        _ => None,
    }
}

/// Names and descriptions for `presets list`.
pub fn listing() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "dephasing-channel",
            "repeated weak sigma-z probing of (0.6, 0.8): off-diagonal decays as cos(2 eps)^t",
        ),
        (
            "dephasing-lindblad",
            "the same dephasing in the weak-coupling master-equation limit",
        ),
        (
            "jump-ensemble",
            "20k quantum-jump trajectories from |+>; ensemble mean recovers the channel",
        ),
        (
            "diffusion-ensemble",
            "20k state-diffusion trajectories from |+>; same mean, different unraveling",
        ),
        (
            "randomness-pump",
            "1000 alternating z/x measurements of a pure state: one bit per step, zero info gain",
        ),
        (
            "cnot-info-z",
            "CNOT probe of a maximally mixed q-bit, z measurement: one full bit gained",
        ),
        (
            "cnot-info-x",
            "CNOT probe of a maximally mixed q-bit, x measurement: pure randomness, zero gain",
        ),
    ]
}
