//! The whole pipeline compiles and runs at f32 as well as f64; f32 uses
//! the correspondingly looser tolerances.

use num_complex::Complex;

use qprobe::qevolve::{
    channel_evolve, derive_lindblad, lindblad_integrate, trajectory_jump, InteractionSpec,
};
use qprobe::qinfo::von_neumann_entropy;
use qprobe::qlinalg::{sigma_x, sigma_z, tensor_product};
use qprobe::qstate::{density_from_pure, pure_from_amplitudes, PureState};
use qprobe::scalar::Scalar;

fn dephasing_pipeline<T: Scalar>() {
    let half = T::half().sqrt();
    let plus =
        pure_from_amplitudes(Complex::new(half, T::zero()), Complex::new(half, T::zero())).unwrap();
    let eps = T::from_f64(0.1);
    let spec = InteractionSpec::new(
        tensor_product(&sigma_z::<T>(), &sigma_x()),
        eps,
        T::one(),
        PureState::basis(0),
    )
    .unwrap();

    let kraus = spec.kraus([T::zero(), T::zero(), T::one()]).unwrap();
    let series = channel_evolve(&density_from_pure(&plus), &kraus, 50);
    let final_entropy = von_neumann_entropy(series.last().unwrap()).unwrap();
    assert!(final_entropy > T::from_f64(0.3));

    let params = derive_lindblad(&spec);
    let run = lindblad_integrate(
        &density_from_pure(&plus),
        &params,
        T::from_f64(0.1),
        T::from_f64(50.0),
    )
    .unwrap();
    let discrete = series.last().unwrap().entry(0, 1).re;
    let continuous = run.states.last().unwrap().entry(0, 1).re;
    assert!((discrete - continuous).abs() < T::from_f64(0.01));

    let record = trajectory_jump(&plus, &spec, 100, 7).unwrap();
    for s in &record.states {
        let purity = density_from_pure(s).purity();
        assert!((purity - T::one()).abs() <= T::TOL_DRIFT);
    }
}

#[test]
fn pipeline_runs_at_f64() {
    dephasing_pipeline::<f64>();
}

#[test]
fn pipeline_runs_at_f32() {
    dephasing_pipeline::<f32>();
}
