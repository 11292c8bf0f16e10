use std::f64::consts::LN_2;

use ncstate::csv::fmt_f64;
use ncstate::fock::{displacement_matrix, ladder_matrices, reliable_block, working_dim, FockVector};
use ncstate::generation::{generate_by_detection, DriveParams};
use ncstate::jcm::{entropy, evolve, field_entropy, photon_distribution, JcmParams};
use ncstate::quasiprob::{husimi_closed, husimi_direct};
use ncstate::special::{laguerre, log_laguerre_negarg};
use ncstate::states::{intermediate_state, lower_k, IntermediateParams};
use ncstate::statistics::{moments_closed, quadratures_closed};
use ncstate::C64;
use proptest::prelude::*;

fn eta() -> impl Strategy<Value = f64> {
    (0.01f64..=1.0).prop_map(|e| e.min(1.0))
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(x, y)| C64::new(x, y))
}

/// Random normalized vector of dimension `len`.
fn low_vector(len: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| {
            let amps: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
            FockVector::new(amps.into()).normalized()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_three_term_recurrence(m in 1usize..100, x in -50.0f64..50.0) {
        let (next, cur, prev) = (laguerre(m + 1, x), laguerre(m, x), laguerre(m - 1, x));
        let terms = [(m + 1) as f64 * next, (2 * m + 1) as f64 * cur - x * cur, m as f64 * prev];
        let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max)
            .max(((2 * m + 1) as f64 * cur).abs())
            .max((x * cur).abs());
        prop_assert!((terms[0] - terms[1] + terms[2]).abs() <= 1e-10 * scale);
    }

    #[test]
    fn log_laguerre_matches_direct(m in 0usize..60, lsq in 0.0f64..30.0) {
        let direct = laguerre(m, -lsq);
        let logged = log_laguerre_negarg(m, lsq);
        prop_assert!(direct.is_finite());
        prop_assert!((logged.to_f64() / direct - 1.0).abs() < 1e-10);
        prop_assert!(logged.to_f64() >= 1.0);
    }

    #[test]
    fn displacement_preserves_norm(alpha in complex(2.0), v in low_vector(6)) {
        let dim = working_dim(5, alpha.norm());
        let v = v.resized(dim);
        let d = displacement_matrix(alpha, dim).unwrap();
        prop_assert!((d.apply(&v).norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn displacement_composition_phase(delta in complex(1.0), gamma in complex(1.0)) {
        let dim = working_dim(8, delta.norm() + gamma.norm()) + 16;
        let block = reliable_block(dim, delta.norm() + gamma.norm());
        let lhs = displacement_matrix(delta, dim).unwrap().dot(&displacement_matrix(gamma, dim).unwrap());
        let phase = C64::from_polar(1.0, (delta * gamma.conj()).im);
        let rhs = displacement_matrix(delta + gamma, dim).unwrap().scale(phase);
        prop_assert!(lhs.sub(&rhs).block(block).max_abs() < 1e-8);
    }

    #[test]
    fn displaced_creation_operator(lambda in 0.0f64..2.5) {
        let dim = working_dim(10, lambda) + 16;
        let block = reliable_block(dim, lambda).min(dim - 1);
        let lad = ladder_matrices(dim);
        let d = |x: f64| displacement_matrix(C64::new(x, 0.0), dim).unwrap();
        let lhs = d(-lambda).dot(&lad.a_dagger).dot(&d(lambda));
        let rhs = lad.a_dagger.add(&ncstate::fock::OperatorMatrix::identity(dim).scale(C64::new(lambda, 0.0)));
        prop_assert!(lhs.sub(&rhs).block(block).max_abs() < 1e-8);
    }

    #[test]
    fn support_and_positivity(eta in eta(), m in 0usize..80) {
        let v = intermediate_state(&IntermediateParams::new(eta, m).unwrap(), m + 6).unwrap();
        for n in 0..v.dim() {
            let c = v.get(n);
            prop_assert_eq!(c.im, 0.0);
            if n > m {
                prop_assert_eq!(c.re, 0.0);
            } else {
                prop_assert!(c.re >= 0.0);
            }
        }
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lowering_matches_matrix_oracle(eta in eta(), m in 0usize..20, k in 0usize..21) {
        let p = IntermediateParams::new(eta, m).unwrap();
        let v = intermediate_state(&p, m + 1).unwrap();
        let a = ladder_matrices(m + 1).a;
        let lowered = (0..k).fold(v, |acc, _| a.apply(&acc));
        let l = lower_k(&p, k);
        let expected = match l.params {
            Some(q) => intermediate_state(&q, m + 1).unwrap().scaled(C64::new(l.coefficient, 0.0)),
            None => FockVector::zeros(m + 1),
        };
        prop_assert!(lowered.sub(&expected).norm() < 1e-10 * (1.0 + l.coefficient));
    }

    #[test]
    fn sub_poissonian_and_snr_bound(eta in eta(), m in 1usize..200) {
        let p = IntermediateParams::new(eta, m).unwrap();
        let r = moments_closed(&p);
        prop_assert!(r.mandel_q.unwrap() < 0.0);
        prop_assert!(r.mandel_q.unwrap() >= -1.0 - 1e-12);
        let snr = quadratures_closed(&p).snr;
        prop_assert!(snr <= 4.0 * r.mean_n * (r.mean_n + 1.0) + 1e-9);
    }

    #[test]
    fn husimi_routes_agree(eta in eta(), m in 0usize..15, beta in complex(4.0)) {
        let p = IntermediateParams::new(eta, m).unwrap();
        let v = intermediate_state(&p, m + 1).unwrap();
        let q = husimi_closed(&p, beta);
        prop_assert!((0.0..=1.0 / std::f64::consts::PI + 1e-15).contains(&q));
        prop_assert!((q - husimi_direct(&v, beta)).abs() < 1e-12);
    }

    #[test]
    fn jcm_conserves_probability(
        eta in eta(), m in 0usize..40, g in 0.1f64..3.0, delta in -3.0f64..3.0, t in 0.0f64..10.0,
    ) {
        let init = intermediate_state(&IntermediateParams::new(eta, m).unwrap(), m + 1).unwrap();
        let joint = evolve(&JcmParams::new(g, delta).unwrap(), &init, t);
        prop_assert!((joint.norm_sqr() - 1.0).abs() < 1e-12);
        let rho = joint.atomic_density();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        let s = entropy(&rho);
        prop_assert!((0.0..=LN_2 + 1e-12).contains(&s));
        prop_assert!((s - field_entropy(&joint)).abs() < 1e-8);
    }

    #[test]
    fn photon_distribution_is_a_distribution(eta in eta(), m in 0usize..80, tau in 0.0f64..4.0) {
        let init = intermediate_state(&IntermediateParams::new(eta, m).unwrap(), m + 1).unwrap();
        let p = photon_distribution(&JcmParams::resonant(1.0).unwrap(), &init, tau).unwrap();
        prop_assert!(p.iter().all(|&v| v >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detection_propagator_is_unitary(ratio in 0.0f64..5.0, gt in 0.0f64..5.0, m in 1usize..3) {
        let drive = DriveParams::new(ratio, 1.0, 1.0, m).unwrap();
        let det = generate_by_detection(&drive, gt, drive.default_dim()).unwrap();
        prop_assert!((det.probability + det.excited_probability - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csv_floats_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let s = fmt_f64(v);
        prop_assert_eq!(s.parse::<f64>().unwrap(), v);
        prop_assert!(!s.contains(',') && !s.contains('\n'));
    }
}
