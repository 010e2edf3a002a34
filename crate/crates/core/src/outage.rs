//! Gaussian capacity statistics and outage probability.
//!
//! Capacity mean and second moment come from a third-order Taylor expansion
//! of log2(1 + rho lambda) in the trace moments of W (valid for small
//! rho lambda_max), or from Monte Carlo sample statistics when the expansion
//! breaks down. Either way, outage is the Gaussian tail
//! P{C < r_th} = Q((E{C} - r_th) / sqrt(Var{C})).

use crate::error::{Error, Result};
use crate::specfun::gauss_q;

/// Trace moments of the normalized Gram matrix: E{Tr W}, E{Tr W^2},
/// E{Tr W^3}. Tr W = 1 by construction, so the ordering
/// trace3 <= trace2 <= trace1 holds realization by realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceMoments {
    pub trace1: f64,
    pub trace2: f64,
    pub trace3: f64,
}

impl TraceMoments {
    pub fn new(trace1: f64, trace2: f64, trace3: f64) -> Result<Self> {
        if !(trace1.is_finite() && trace2.is_finite() && trace3.is_finite()) {
            return Err(Error::NonFiniteInput { context: "TraceMoments" });
        }
        if (trace1 - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(format!(
                "Tr W must be 1 under the unit-trace normalization, got {trace1}"
            )));
        }
        const SLACK: f64 = 1e-9;
        if trace3 <= 0.0 || trace3 > trace2 + SLACK || trace2 > trace1 + SLACK {
            return Err(Error::invalid(format!(
                "trace moments must satisfy 0 < trace3 <= trace2 <= trace1, \
                 got ({trace1}, {trace2}, {trace3})"
            )));
        }
        Ok(TraceMoments { trace1, trace2, trace3 })
    }

    /// Moments with the unit trace made explicit.
    pub fn normalized(trace2: f64, trace3: f64) -> Result<Self> {
        TraceMoments::new(1.0, trace2, trace3)
    }
}

/// Where a mean/variance pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    AnalyticTaylor,
    MonteCarloEstimated,
}

/// Mean and variance of capacity at a fixed linear SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityStats {
    mean: f64,
    variance: f64,
    snr: f64,
    source: MomentSource,
}

impl CapacityStats {
    pub fn new(mean: f64, variance: f64, snr: f64, source: MomentSource) -> Result<Self> {
        if !(mean.is_finite() && variance.is_finite() && snr.is_finite()) {
            return Err(Error::NonFiniteInput { context: "CapacityStats" });
        }
        if mean < 0.0 {
            return Err(Error::invalid(format!("capacity mean must be >= 0, got {mean}")));
        }
        if variance < 0.0 {
            return Err(Error::invalid(format!("capacity variance must be >= 0, got {variance}")));
        }
        if snr < 0.0 {
            return Err(Error::invalid(format!("snr must be >= 0, got {snr}")));
        }
        Ok(CapacityStats { mean, variance, snr, source })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }
}

/// How an outage probability was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageMethod {
    /// Gaussian tail with closed-form trace moments.
    GaussianAnalytic,
    /// Gaussian tail with Monte Carlo mean/variance.
    GaussianMc,
    /// Direct fraction of capacity samples below threshold.
    Empirical,
}

impl OutageMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutageMethod::GaussianAnalytic => "gaussian-analytic",
            OutageMethod::GaussianMc => "gaussian-mc",
            OutageMethod::Empirical => "empirical",
        }
    }
}

/// One point of an outage curve: P{C < r_th}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutagePoint {
    pub r_th: f64,
    pub p_out: f64,
    pub method: OutageMethod,
}

fn check_snr(snr: f64) -> Result<f64> {
    if !snr.is_finite() {
        return Err(Error::NonFiniteInput { context: "snr" });
    }
    if snr < 0.0 {
        return Err(Error::invalid(format!("snr must be >= 0, got {snr}")));
    }
    Ok(snr)
}

/// Third-order Taylor mean of capacity:
/// E{C} = (1/ln 2) (rho Tr W - rho^2 E{Tr W^2}/2 + rho^3 E{Tr W^3}/3).
///
/// Valid for rho lambda_max well below 1; at larger SNR it undershoots the
/// true log and can even go negative, so downstream consumers should prefer
/// Monte Carlo statistics there.
pub fn mean_capacity_taylor(moments: &TraceMoments, snr: f64) -> Result<f64> {
    let rho = check_snr(snr)?;
    Ok((rho * moments.trace1 - rho.powi(2) * moments.trace2 / 2.0
        + rho.powi(3) * moments.trace3 / 3.0)
        / std::f64::consts::LN_2)
}

/// Third-order Taylor second moment of capacity:
/// E{C^2} = (1/ln 2)^2 (rho^2 - rho^3 E{Tr W^2}).
///
/// Squaring the capacity expansion and discarding powers of rho above 3
/// leaves exactly these two terms; at rho = 1 this is the classical
/// (1 - E{Tr W^2}) / ln^2 2 form.
pub fn second_moment_capacity_taylor(moments: &TraceMoments, snr: f64) -> Result<f64> {
    let rho = check_snr(snr)?;
    Ok((rho.powi(2) - rho.powi(3) * moments.trace2) / std::f64::consts::LN_2.powi(2))
}

/// Capacity statistics from the Taylor route.
///
/// Var{C} = E{C^2} - E{C}^2 under the shared third-order truncation. The
/// difference of truncated series is itself only accurate to O(rho^4), and
/// whenever W has any spectral spread the surviving fourth-order remainder
/// is negative, which cannot parameterize a Gaussian; that surfaces as
/// `TaylorTruncationInvalid` with a pointer to the Monte Carlo source.
/// The one exact case is Tr W^2 = 1 (rank-one W, a single unit eigenvalue):
/// capacity is deterministic and the variance is exactly zero.
pub fn capacity_stats_taylor(moments: &TraceMoments, snr: f64) -> Result<CapacityStats> {
    let mean = mean_capacity_taylor(moments, snr)?;
    let variance = if moments.trace2 == 1.0 {
        0.0
    } else {
        let second = second_moment_capacity_taylor(moments, snr)?;
        let var = second - mean * mean;
        if var < 0.0 {
            return Err(Error::TaylorTruncationInvalid { snr, variance: var });
        }
        var
    };
    CapacityStats::new(mean, variance, snr, MomentSource::AnalyticTaylor)
}

/// Gaussian outage probability P{C < r_th} = Q((mean - r_th)/sigma).
///
/// The zero-variance limit is the step function 1{r_th > mean} with value
/// 1/2 exactly at the step, matching the sigma -> 0 limit of the Q form.
pub fn outage_gaussian(stats: &CapacityStats, r_th: f64) -> Result<OutagePoint> {
    if !r_th.is_finite() {
        return Err(Error::NonFiniteInput { context: "outage threshold r_th" });
    }
    let method = match stats.source {
        MomentSource::AnalyticTaylor => OutageMethod::GaussianAnalytic,
        MomentSource::MonteCarloEstimated => OutageMethod::GaussianMc,
    };
    let p_out = if stats.variance == 0.0 {
        if r_th < stats.mean {
            0.0
        } else if r_th > stats.mean {
            1.0
        } else {
            0.5
        }
    } else {
        let sigma = stats.variance.sqrt();
        let p = gauss_q((stats.mean - r_th) / sigma)?;
        // The cdf and ccdf tails must reassemble to 1; this guards the
        // symmetry of the Q implementation on every evaluation.
        debug_assert!({
            let p_ccdf = gauss_q((r_th - stats.mean) / sigma).unwrap();
            (p + p_ccdf - 1.0).abs() < 1e-12
        });
        p
    };
    Ok(OutagePoint { r_th, p_out, method })
}

/// Pointwise Gaussian outage over an ascending threshold grid.
pub fn outage_curve(stats: &CapacityStats, r_grid: &[f64]) -> Result<Vec<OutagePoint>> {
    for pair in r_grid.windows(2) {
        // Negated form so a NaN grid entry fails as unsorted.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(pair[0] <= pair[1]) {
            return Err(Error::invalid(format!(
                "threshold grid must be sorted ascending, got {} before {}",
                pair[0], pair[1]
            )));
        }
    }
    r_grid.iter().map(|&r| outage_gaussian(stats, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_moments_validate_ordering() {
        assert!(TraceMoments::normalized(0.5, 0.3).is_ok());
        assert!(TraceMoments::normalized(0.3, 0.5).is_err());
        assert!(TraceMoments::normalized(1.2, 0.5).is_err());
        assert!(TraceMoments::normalized(0.5, -0.1).is_err());
        assert!(TraceMoments::new(0.9, 0.5, 0.3).is_err());
        assert!(TraceMoments::new(f64::NAN, 0.5, 0.3).is_err());
    }

    #[test]
    fn taylor_mean_rejects_bad_snr() {
        let m = TraceMoments::normalized(0.5, 0.3).unwrap();
        assert!(mean_capacity_taylor(&m, -1.0).is_err());
        assert!(mean_capacity_taylor(&m, f64::NAN).is_err());
        assert_eq!(mean_capacity_taylor(&m, 0.0).unwrap(), 0.0);
        assert_eq!(second_moment_capacity_taylor(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rank_one_moments_give_zero_variance() {
        let m = TraceMoments::normalized(1.0, 1.0).unwrap();
        let stats = capacity_stats_taylor(&m, 0.1).unwrap();
        assert_eq!(stats.variance(), 0.0);
        assert_eq!(stats.source(), MomentSource::AnalyticTaylor);
    }

    #[test]
    fn spread_moments_report_truncation_failure() {
        let m = TraceMoments::normalized(0.5, 0.3).unwrap();
        match capacity_stats_taylor(&m, 0.1) {
            Err(Error::TaylorTruncationInvalid { variance, .. }) => assert!(variance < 0.0),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn zero_variance_outage_is_a_step() {
        let stats = CapacityStats::new(2.0, 0.0, 1.0, MomentSource::MonteCarloEstimated).unwrap();
        assert_eq!(outage_gaussian(&stats, 1.0).unwrap().p_out, 0.0);
        assert_eq!(outage_gaussian(&stats, 2.0).unwrap().p_out, 0.5);
        assert_eq!(outage_gaussian(&stats, 3.0).unwrap().p_out, 1.0);
        assert_eq!(outage_gaussian(&stats, 3.0).unwrap().method, OutageMethod::GaussianMc);
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        let stats = CapacityStats::new(2.0, 1.0, 1.0, MomentSource::MonteCarloEstimated).unwrap();
        assert!(outage_curve(&stats, &[1.0, 0.5]).is_err());
        let curve = outage_curve(&stats, &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        for pair in curve.windows(2) {
            assert!(pair[0].p_out <= pair[1].p_out);
        }
    }
}
