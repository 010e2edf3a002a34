//! Closed-form moment values against frozen high-precision references and
//! structural bounds across the configuration grid.

#![allow(clippy::excessive_precision)]

use losmimo::{
    correlation_cf, cov_f_cross, ef11, ef12, expected_trace2, expected_trace3, mu_omega,
    type_a_expectation, type_b_expectation, var_f1, var_f1nt, Axis, Error, MomentConfig,
};

const PI: f64 = std::f64::consts::PI;

fn cfg(n_t: usize, n_r: usize, kd: f64, axis: Axis) -> MomentConfig {
    MomentConfig::new(n_t, n_r, kd, axis).unwrap()
}

fn close(got: f64, want: f64, tol: f64, what: &str) {
    assert!((got - want).abs() <= tol, "{what}: got {got:.17}, want {want:.17}");
}

#[test]
fn frozen_reference_values_y_axis() {
    // mpmath 50-digit evaluations of the Bessel sums, rounded to f64.
    let c22 = cfg(2, 2, PI, Axis::Y);
    close(ef12(&c22).unwrap(), 0.049633222029781038, 1e-16, "ef12(2,2,pi,Y)");
    close(mu_omega(&c22).unwrap(), 2.0992664440595621, 1e-14, "mu_omega(2,2,pi,Y)");
    close(expected_trace2(&c22).unwrap(), 0.76240830550744526, 1e-14, "trace2(2,2,pi,Y)");
    close(type_a_expectation(1, &c22).unwrap(), 0.027113718491198265, 1e-16, "type_a(1,pi)");
    close(var_f1nt(&c22).unwrap(), 0.50182052577038557, 1e-14, "var_f1nT(nR=2,pi)");
    close(cov_f_cross(&c22).unwrap(), 0.049300523524281447, 1e-14, "cov_f_cross(2,2,pi)");

    let c23 = cfg(2, 3, PI, Axis::Y);
    close(type_b_expectation(1, 2, &c23).unwrap(), 0.0030258801786399354, 1e-16, "type_b(1,2,pi)");
}

#[test]
fn frozen_reference_values_z_axis() {
    let c22 = cfg(2, 2, PI, Axis::Z);
    close(ef12(&c22).unwrap(), 0.22278514768669171, 1e-16, "ef12(2,2,pi,Z)");
    close(expected_trace2(&c22).unwrap(), 0.80569628692167293, 1e-14, "trace2(2,2,pi,Z)");
    close(expected_trace3(&c22).unwrap(), 0.70854443038250939, 1e-14, "trace3(2,2,pi,Z)");
}

#[test]
fn degenerate_sizes_are_exactly_coherent() {
    // One transmitter or one element makes W rank-one deterministically.
    for axis in [Axis::Y, Axis::Z] {
        for (n_t, n_r) in [(1, 1), (1, 4), (4, 1), (1, 16)] {
            let c = cfg(n_t, n_r, PI, axis);
            assert_eq!(expected_trace2(&c).unwrap(), 1.0, "trace2({n_t},{n_r})");
            assert_eq!(expected_trace3(&c).unwrap(), 1.0, "trace3({n_t},{n_r})");
        }
    }
}

#[test]
fn trace3_has_no_y_axis_closed_form() {
    assert!(matches!(
        expected_trace3(&cfg(4, 4, PI, Axis::Y)),
        Err(Error::AnalyticUnavailable { .. })
    ));
    // Degeneracy wins over the axis restriction.
    assert_eq!(expected_trace3(&cfg(1, 4, PI, Axis::Y)).unwrap(), 1.0);
}

#[test]
fn small_kd_limits() {
    // kd -> 0 collapses every pair kernel to 1: the array stops resolving
    // directions and W becomes rank-one on average.
    let c = cfg(4, 4, 1e-9, Axis::Y);
    close(ef12(&c).unwrap(), ef11(&c), 1e-12, "ef12 -> ef11");
    close(expected_trace2(&c).unwrap(), 1.0, 1e-12, "trace2 -> 1");
    close(mu_omega(&c).unwrap(), 16.0 * ef11(&c), 1e-9, "mu_omega -> n_T^2 ef11");

    let cz = cfg(4, 4, 1e-9, Axis::Z);
    close(expected_trace3(&cz).unwrap(), 1.0, 1e-12, "trace3 -> 1");

    // Both row sums degenerate to the same constant, so their fluctuation
    // covariance and variance vanish and the correlation ratio goes to 0.
    let tiny = correlation_cf(&cfg(4, 4, 1e-6, Axis::Y)).unwrap();
    assert!(tiny.abs() < 1e-9, "correlation at kd -> 0 should vanish, got {tiny}");
    assert!(var_f1nt(&cfg(4, 4, 1e-6, Axis::Y)).unwrap() < 1e-9);
}

#[test]
fn trace_moment_bounds_across_grid() {
    // 1/n_T <= E{Tr W^2} <= 1 and E{Tr W^3} <= E{Tr W^2}: eigenvalues live
    // on the unit simplex realization by realization.
    for axis in [Axis::Y, Axis::Z] {
        for n_t in [1, 2, 3, 4, 8] {
            for n_r in [1, 2, 4, 8, 16] {
                for kd in [PI / 2.0, PI, 1.5 * PI] {
                    let c = cfg(n_t, n_r, kd, axis);
                    let t2 = expected_trace2(&c).unwrap();
                    assert!(
                        t2 >= 1.0 / n_t as f64 - 1e-12 && t2 <= 1.0 + 1e-12,
                        "trace2 out of range at ({n_t},{n_r},{kd},{axis:?}): {t2}"
                    );
                    if axis == Axis::Z {
                        let t3 = expected_trace3(&c).unwrap();
                        assert!(
                            t3 >= 1.0 / (n_t * n_t) as f64 - 1e-12 && t3 <= t2 + 1e-12,
                            "trace3 out of range at ({n_t},{n_r},{kd}): {t3} vs t2 {t2}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn row_variance_composition() {
    // var_f1 assembles per-row variance and cross-row covariance with
    // weights n_T and n_T(n_T-1)/2; check the composition explicitly.
    for (n_t, n_r) in [(2, 2), (3, 4), (4, 8)] {
        let c = cfg(n_t, n_r, PI, Axis::Y);
        let per_row = var_f1nt(&c).unwrap();
        let cross = cov_f_cross(&c).unwrap() / n_t as f64;
        let want = n_t as f64 * per_row + (n_t * (n_t - 1)) as f64 / 2.0 * cross;
        close(var_f1(&c).unwrap(), want, 1e-12, "var_f1 composition");
    }
}

#[test]
fn correlation_is_a_normalized_covariance() {
    for (n_t, n_r) in [(2, 2), (4, 4), (8, 4)] {
        let c = cfg(n_t, n_r, PI, Axis::Y);
        let num = cov_f_cross(&c).unwrap() / n_t as f64;
        let den = var_f1nt(&c).unwrap() + ef12(&c).unwrap().powi(2);
        close(correlation_cf(&c).unwrap(), num / den, 1e-14, "correlation_cf structure");
        assert!(correlation_cf(&c).unwrap().abs() < 1.0);
    }
}

#[test]
fn single_element_rows_are_degenerate() {
    // n_R = 1 empties every cosine row: variances and covariances are 0 and
    // the correlation ratio has no meaning.
    let c = cfg(4, 1, PI, Axis::Y);
    assert_eq!(var_f1nt(&c).unwrap(), 0.0);
    assert_eq!(cov_f_cross(&c).unwrap(), 0.0);
    assert_eq!(var_f1(&c).unwrap(), 0.0);
    assert!(matches!(correlation_cf(&c), Err(Error::DegenerateConfiguration { .. })));
}
