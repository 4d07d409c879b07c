//! Algebraic identities checked on parameter grids and random inputs.

mod common;

use common::*;
use photon_gain::estimator::REFLECT_RATIO;
use photon_gain::gain::SensorParams;
use proptest::prelude::*;

#[test]
fn hyp2f1_transformations_agree() {
    hyp2f1_transformations().unwrap();
}

#[test]
fn g_and_gtilde_recurrence() {
    g_recurrence().unwrap();
}

#[test]
fn gtilde_reflection_formula() {
    gtilde_reflection().unwrap();
}

#[test]
fn gtilde_boundary_limits() {
    gtilde_boundary_values().unwrap();
}

#[test]
fn gtilde_zeros() {
    gtilde_zero_set().unwrap();
}

#[test]
fn moment_reflection_formula() {
    moment_reflection().unwrap();
}

proptest! {
    // Inside this band both sides use the direct form, so the two evaluations are independent.
    #[test]
    fn t_nu_reflection(
        y1 in 0.05f64..20.0,
        log_q in (1.0 / REFLECT_RATIO).ln()..REFLECT_RATIO.ln(),
        shapes in prop::sample::select(T_SHAPES.to_vec()),
        nu in prop::sample::select(T_NUS.to_vec()),
    ) {
        let r = t_reflection_direct(y1, y1 * log_q.exp(), shapes, nu);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn t_nu_reflection_wide(
        y1 in 0.05f64..20.0,
        y2 in 0.05f64..20.0,
        shapes in prop::sample::select(T_SHAPES.to_vec()),
        nu in prop::sample::select(T_NUS.to_vec()),
    ) {
        let r = t_reflection(y1, y2, shapes, nu);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn cv2_decomposition_holds(
        mu_e in 1.0f64..2000.0,
        sigma_d2 in 1.0f64..50.0,
        g in 0.5f64..8.0,
        n1 in 200u64..5000,
        n2 in 200u64..5000,
        nu in 2.5f64..20.0,
    ) {
        let sp = SensorParams::new(10.0, sigma_d2, mu_e, g, n1, n2).unwrap();
        let r = cv2_decomposition(&sp, nu);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }
}
