use ncstate::fock::{displacement_matrix, working_dim, FockVector};
use ncstate::generation::*;
use ncstate::special::log_laguerre_negarg;
use ncstate::states::{intermediate_state, photon_added_coherent, IntermediateParams};
use ncstate::C64;

const RATIOS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

fn distance(ratio: f64, m: usize, gt: f64) -> Closeness {
    let drive = DriveParams::new(ratio, 1.0, 1.0, m).unwrap();
    let det = generate_by_detection(&drive, gt, drive.default_dim()).unwrap();
    let target = intermediate_state(&drive.target().unwrap(), m + 1).unwrap();
    closeness(det.field.as_ref().unwrap(), &target)
}

#[test]
fn detection_prepares_predicted_state() {
    let rows = detection_sweep(&RATIOS, 1.0, 1.0, 1e-3, 1).unwrap();
    for (row, ratio) in rows.iter().zip(RATIOS) {
        assert_eq!(row.a_over_omega, ratio);
        assert_eq!(row.predicted_eta, 1.0 / (1.0 + ratio * ratio));
        assert!(row.fidelity > 1.0 - 1e-4, "A/w={ratio}: {}", row.fidelity);
    }
    let half = distance(1.0, 1, 1e-2);
    assert!(half.fidelity > 1.0 - 1e-3);
}

#[test]
fn detection_error_is_second_order() {
    for ratio in [0.5, 1.0, 2.0, 5.0] {
        let r = distance(ratio, 1, 2e-3).distance / distance(ratio, 1, 1e-3).distance;
        assert!((r - 4.0).abs() < 0.8, "A/w={ratio}: ratio {r}");
    }
    // without drive the output is exactly |1>
    assert!(distance(0.0, 1, 1e-3).distance < 1e-15);
}

#[test]
fn two_photon_scheme() {
    for ratio in [0.5, 1.0, 2.0] {
        let c = distance(ratio, 2, 1e-3);
        assert!(c.fidelity > 1.0 - 1e-3, "A/w={ratio}: {}", c.fidelity);
    }
}

#[test]
fn detection_probability_scaling() {
    let drive = DriveParams::new(1.0, 1.0, 1.0, 1).unwrap();
    let ratio = |gt: f64| generate_by_detection(&drive, gt, drive.default_dim()).unwrap().probability / (gt * gt);
    let (a, b, c) = (ratio(1e-2), ratio(1e-3), ratio(1e-4));
    assert!((a - b).abs() > (b - c).abs());
    let limit = log_laguerre_negarg(1, 1.0).to_f64();
    assert!((c / limit - 1.0).abs() < 1e-6);
}

#[test]
fn propagator_is_unitary_on_joint_space() {
    let drive = DriveParams::new(2.0, 1.0, 0.3, 1).unwrap();
    for gt in [0.0, 0.1, 0.7, 2.0, 13.0] {
        let det = generate_by_detection(&drive, gt, drive.default_dim()).unwrap();
        assert!((det.probability + det.excited_probability - 1.0).abs() < 1e-10, "gt={gt}");
    }
    let dim = drive.default_dim();
    let d = displacement_matrix(C64::new(drive.lambda(), 0.0), dim).unwrap();
    let v = photon_added_coherent(0.0, 3, dim).unwrap();
    assert!((d.apply(&v).norm() - 1.0).abs() < 1e-10);
}

#[test]
fn kerr_first_order_component() {
    let lambda = 1.0;
    let params = IntermediateParams::from_lambda(lambda, 2).unwrap();
    let dim = working_dim(2, lambda) + 16;
    let target = intermediate_state(&params, 3).unwrap().resized(dim);
    let l2 = log_laguerre_negarg(2, lambda * lambda).to_f64();
    let mut prev = f64::INFINITY;
    for gamma in [1e-2, 1e-3, 1e-4] {
        let k = KerrParams::new(gamma, lambda, 1).unwrap();
        let out = kerr_output(&k, dim).unwrap();
        let first = out.sub(&FockVector::vacuum(dim));
        let component = target.inner(&first).norm();
        let expect = gamma * lambda * lambda * (2.0 * l2).sqrt() / 2.0;
        let err = (component / expect - 1.0).abs();
        assert!(err < prev);
        prev = err;
    }
    assert!(prev < 0.05);
}

#[test]
fn kerr_matches_first_order_state() {
    let (gamma, lambda) = (1e-3, 1.0);
    let dim = working_dim(2, lambda) + 16;
    let k = KerrParams::new(gamma, lambda, 1).unwrap();
    let out = kerr_output(&k, dim).unwrap();
    let eta2 = intermediate_state(&IntermediateParams::from_lambda(lambda, 2).unwrap(), 3).unwrap().resized(dim);
    let approx = FockVector::vacuum(dim).add(&eta2.scaled(C64::new(0.0, 0.5 * gamma * lambda * lambda))).normalized();
    assert!(approx.fidelity(&out) > 1.0 - 10.0 * gamma * gamma);
}

#[test]
fn higher_order_kerr_starts_at_s_plus_one_photons() {
    // the S = 2 phase n(n-1)(n-2)/6 vanishes below three photons
    let k = KerrParams::new(1e-3, 0.8, 2).unwrap();
    let out = kerr_output(&k, k.default_dim()).unwrap();
    let first = out.sub(&FockVector::vacuum(out.dim()));
    let target = intermediate_state(&IntermediateParams::from_lambda(0.8, 3).unwrap(), 4).unwrap().resized(out.dim());
    let c = target.inner(&first).norm() / first.norm();
    assert!(c > 0.99, "{c}");
}

#[test]
fn free_evolution_identity() {
    let drive = DriveParams::new(0.5, 1.0, 1.0, 1).unwrap();
    let corrected = free_evolution_defect(&drive, 1.0, 96, IdentityForm::DisplacedWithOffset).unwrap();
    assert!(corrected < 1e-8, "{corrected}");
    // the offset-free form misses the constant -A/w
    let literal = free_evolution_defect(&drive, 1.0, 96, IdentityForm::Displaced).unwrap();
    assert!((literal - 0.5).abs() < 1e-8, "{literal}");
}
