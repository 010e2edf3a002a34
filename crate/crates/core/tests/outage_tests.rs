//! Small-SNR Taylor capacity statistics and the Gaussian outage
//! approximation, checked against frozen references and the tail
//! function's known values.

#![allow(clippy::excessive_precision)]

mod common;

use losmimo::{
    capacity_stats_taylor, expected_trace2, expected_trace3, mean_capacity_taylor, outage_curve,
    outage_gaussian, second_moment_capacity_taylor, Axis, CapacityStats, Error, MomentConfig,
    MomentSource, OutageMethod, TraceMoments,
};

#[test]
fn coherent_taylor_mean_matches_frozen_reference() {
    // Fully coherent array: every normalized trace power is 1, so the
    // series is (snr - snr^2/2 + snr^3/3) / ln 2 evaluated at snr = 0.1.
    let m = TraceMoments::new(1.0, 1.0, 1.0).unwrap();
    let mean = mean_capacity_taylor(&m, 0.1).unwrap();
    assert_eq!(mean, 0.13753692723141453);
}

#[test]
fn unit_snr_second_moment_specializes_exactly() {
    // At snr = 1 the second-moment series collapses to (1 - t2) / ln2^2
    // with no residual arithmetic; the equality is bitwise.
    let ln2 = std::f64::consts::LN_2;
    for t2 in [0.3, 0.5, 0.76240830550744526, 1.0] {
        let m = TraceMoments::normalized(t2, t2 * t2).unwrap();
        let got = second_moment_capacity_taylor(&m, 1.0).unwrap();
        assert_eq!(got, (1.0 - t2) / (ln2 * ln2), "t2 = {t2}");
    }
}

#[test]
fn truncated_series_reports_invalid_variance_for_incoherent_arrays() {
    // For any t2 < 1 the truncated second moment sits below the squared
    // mean at every positive snr, so the Gaussian variance is negative
    // and the statistics constructor must refuse rather than clamp.
    let cfg = MomentConfig::new(8, 8, std::f64::consts::PI, Axis::Z).unwrap();
    let t2 = expected_trace2(&cfg).unwrap();
    let t3 = expected_trace3(&cfg).unwrap();
    let m = TraceMoments::new(1.0, t2, t3).unwrap();
    for snr in [0.1, 1.0, 10.0] {
        match capacity_stats_taylor(&m, snr) {
            Err(Error::TaylorTruncationInvalid { snr: s, variance }) => {
                assert_eq!(s, snr);
                assert!(variance < 0.0, "variance {variance} should be negative");
            }
            other => panic!("expected truncation failure at snr {snr}, got {other:?}"),
        }
    }
    // The mean and raw second moment are still individually available.
    assert!(mean_capacity_taylor(&m, 0.1).unwrap() > 0.0);
    assert!(second_moment_capacity_taylor(&m, 0.1).unwrap() > 0.0);
}

#[test]
fn coherent_stats_have_zero_variance_and_step_outage() {
    let m = TraceMoments::new(1.0, 1.0, 1.0).unwrap();
    let stats = capacity_stats_taylor(&m, 0.1).unwrap();
    assert_eq!(stats.variance(), 0.0);
    assert_eq!(stats.source(), MomentSource::AnalyticTaylor);
    let mean = stats.mean();
    let below = outage_gaussian(&stats, mean - 1e-3).unwrap();
    let at = outage_gaussian(&stats, mean).unwrap();
    let above = outage_gaussian(&stats, mean + 1e-3).unwrap();
    assert_eq!(below.p_out, 0.0);
    assert_eq!(at.p_out, 0.5);
    assert_eq!(above.p_out, 1.0);
    assert_eq!(below.method, OutageMethod::GaussianAnalytic);
}

#[test]
fn gaussian_outage_hits_known_tail_quantiles() {
    let stats = CapacityStats::new(5.0, 0.04, 10.0, MomentSource::MonteCarloEstimated).unwrap();
    let sigma = 0.2;
    // r_th = mean - 3 sigma: P{C < r_th} = Q(3).
    let p3 = outage_gaussian(&stats, 5.0 - 3.0 * sigma).unwrap();
    assert!((p3.p_out - 0.0013498980316300945).abs() < 1e-15);
    assert_eq!(p3.method, OutageMethod::GaussianMc);
    // Symmetric point above the mean.
    let q3 = outage_gaussian(&stats, 5.0 + 3.0 * sigma).unwrap();
    assert!((q3.p_out - (1.0 - 0.0013498980316300945)).abs() < 1e-12);
    // Median.
    let half = outage_gaussian(&stats, 5.0).unwrap();
    assert!((half.p_out - 0.5).abs() < 1e-15);
}

#[test]
fn outage_curves_are_monotone_on_ascending_grids() {
    let stats = CapacityStats::new(3.0, 0.25, 4.0, MomentSource::MonteCarloEstimated).unwrap();
    let grid: Vec<f64> = (0..121).map(|i| 1.0 + i as f64 * 0.033).collect();
    let curve = outage_curve(&stats, &grid).unwrap();
    assert_eq!(curve.len(), grid.len());
    for pair in curve.windows(2) {
        assert!(pair[1].p_out >= pair[0].p_out);
        assert!(pair[0].p_out >= 0.0 && pair[1].p_out <= 1.0);
    }
    // Descending grids are a caller bug, reported loudly.
    assert!(outage_curve(&stats, &[2.0, 1.0]).is_err());
}

#[test]
fn trace_moment_ordering_is_enforced() {
    assert!(TraceMoments::new(1.0, 0.5, 0.25).is_ok());
    // trace2 above trace1 breaks the power-ordering of a unit-trace PSD
    // spectrum.
    assert!(TraceMoments::new(1.0, 1.2, 0.5).is_err());
    // trace3 above trace2 likewise.
    assert!(TraceMoments::new(1.0, 0.5, 0.6).is_err());
    // trace1 must be the unit normalization.
    assert!(TraceMoments::new(0.9, 0.5, 0.25).is_err());
    assert!(TraceMoments::normalized(0.5, 0.3).is_ok());
}
