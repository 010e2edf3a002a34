//! Closed-form Bessel-series expectations of the Gram-matrix trace moments
//! and of the cosine-row statistics that drive the Gaussian capacity
//! approximation.
//!
//! Everything here is a finite sum of J0 products: deterministic, bit-stable,
//! and cross-checked against the Monte Carlo estimators in `montecarlo`.
//!
//! Notation used throughout: for a pair of satellite direction cosines
//! psi_i, psi_j, gamma_ij = psi_i - psi_j, and the per-pair cosine row is
//! T(gamma) = sum_{s=1}^{n_R-1} (n_R - s) cos(s kd gamma). Under the default
//! angular laws, E[cos(s kd gamma)] = J0(s kd/2)^p with p = 4 for a y-axis
//! array and p = 2 for a z-axis array.

use crate::array_geometry::Axis;
use crate::error::{Error, Result};
use crate::specfun::bessel_j0;

/// Configuration for every analytic moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub kd: f64,
    pub axis: Axis,
}

impl MomentConfig {
    pub fn new(n_t: usize, n_r: usize, kd: f64, axis: Axis) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(Error::invalid("n_T and n_R must be >= 1"));
        }
        if !kd.is_finite() {
            return Err(Error::NonFiniteInput { context: "MomentConfig kd" });
        }
        if kd <= 0.0 {
            return Err(Error::invalid(format!("kd must be > 0, got {kd}")));
        }
        Ok(MomentConfig { n_t, n_r, kd, axis })
    }

    /// Pair-kernel exponent: the y-axis law contributes J0(z/2)^2 per
    /// satellite (two i.i.d. angles), the z-axis law |J0(z/2)| per satellite.
    fn kernel_exponent(&self) -> i32 {
        match self.axis {
            Axis::Y => 4,
            Axis::Z => 2,
        }
    }

    /// E[cos(s kd gamma)] = J0(s kd / 2)^p for one ordered pair.
    fn kernel_pair(&self, s: usize) -> Result<f64> {
        Ok(bessel_j0(s as f64 * self.kd / 2.0)?.powi(self.kernel_exponent()))
    }
}

/// E of the diagonal cosine row: T(0) = sum (n_R - s) = n_R(n_R-1)/2.
pub fn ef11(cfg: &MomentConfig) -> f64 {
    (cfg.n_r * (cfg.n_r - 1)) as f64 / 2.0
}

/// E of an off-diagonal cosine row: sum_s (n_R - s) J0(s kd/2)^p.
pub fn ef12(cfg: &MomentConfig) -> Result<f64> {
    let mut acc = 0.0;
    for s in 1..cfg.n_r {
        acc += (cfg.n_r - s) as f64 * cfg.kernel_pair(s)?;
    }
    Ok(acc)
}

/// Mean of Omega = sum over all ordered satellite pairs (i, j), diagonal
/// included, of T(gamma_ij): n_T diagonal rows with mean ef11 plus
/// n_T^2 - n_T off-diagonal rows with mean ef12.
pub fn mu_omega(cfg: &MomentConfig) -> Result<f64> {
    let n_t = cfg.n_t as f64;
    Ok(n_t * ef11(cfg) + (n_t * n_t - n_t) * ef12(cfg)?)
}

/// E{Tr W^2} = (n_R^2 n_T + n_R n_T(n_T-1) + 2 n_T(n_T-1) ef12) / (n_R n_T)^2.
///
/// Always in [1/n_T, 1]; equals 1 exactly when n_T = 1 or n_R = 1.
pub fn expected_trace2(cfg: &MomentConfig) -> Result<f64> {
    let n_t = cfg.n_t as f64;
    let n_r = cfg.n_r as f64;
    let numer = n_r * n_r * n_t + n_r * n_t * (n_t - 1.0) + 2.0 * n_t * (n_t - 1.0) * ef12(cfg)?;
    Ok(numer / (n_r * n_t).powi(2))
}

/// E{Tr W^3} for a z-axis array:
///
/// (n_R^3 n_T + 3 n_R^2 n_T(n_T-1) + 6 n_R n_T(n_T-1) sum_s (n_R-s) J0(s kd/2)^2
///  + n_T(n_T-1)(n_T-2) S3) / (n_R n_T)^3,
///
/// where S3 sums J0(u kd/2) J0(v kd/2) J0((u+v) kd/2) over all signed
/// harmonic pairs (u, v) with their lattice multiplicity N(u, v) (the number
/// of element-index triples realizing those two offsets).
///
/// Degenerate sizes (n_T = 1 or n_R = 1) have deterministic rank-one W and
/// return exactly 1 on both axes. No closed form is implemented for the
/// y-axis: callers get an error pointing at the Monte Carlo estimator.
pub fn expected_trace3(cfg: &MomentConfig) -> Result<f64> {
    if cfg.n_t == 1 || cfg.n_r == 1 {
        return Ok(1.0);
    }
    if cfg.axis == Axis::Y {
        return Err(Error::unavailable(
            "expected_trace3 has no closed form for a y-axis array".to_string(),
        ));
    }
    let n_t = cfg.n_t as f64;
    let n_r = cfg.n_r as f64;
    let mut pair_sum = 0.0;
    for s in 1..cfg.n_r {
        pair_sum += (cfg.n_r - s) as f64 * bessel_j0(s as f64 * cfg.kd / 2.0)?.powi(2);
    }
    let c0 = n_r.powi(3) * n_t;
    let c1 = 3.0 * n_r * n_r * n_t * (n_t - 1.0);
    let c2 = 6.0 * n_r * n_t * (n_t - 1.0) * pair_sum;
    let c3 = n_t * (n_t - 1.0) * (n_t - 2.0) * triple_kernel_sum(cfg)?;
    Ok((c0 + c1 + c2 + c3) / (n_r * n_t).powi(3))
}

/// S3 = sum_{u,v} N(u,v) J0(u kd/2) J0(v kd/2) J0((u+v) kd/2) over
/// u, v in [-(n_R-1), n_R-1], where N(u, v) counts the element-index triples
/// (m1, m2, m3) in [0, n_R)^3 with m1 - m2 = u and m2 - m3 = v.
fn triple_kernel_sum(cfg: &MomentConfig) -> Result<f64> {
    let n = cfg.n_r as i64;
    let half_kd = cfg.kd / 2.0;
    // Cache J0(|k| kd/2) for k in 0..=2(n_R-1).
    let mut j0 = Vec::with_capacity(2 * cfg.n_r - 1);
    for k in 0..=(2 * (cfg.n_r - 1)) {
        j0.push(bessel_j0(k as f64 * half_kd)?);
    }
    let mut acc = 0.0;
    for u in -(n - 1)..=(n - 1) {
        for v in -(n - 1)..=(n - 1) {
            let lo = 0.max(-u).max(v);
            let hi = (n - 1).min(n - 1 - u).min(n - 1 + v);
            if hi < lo {
                continue;
            }
            let count = (hi - lo + 1) as f64;
            acc += count
                * j0[u.unsigned_abs() as usize]
                * j0[v.unsigned_abs() as usize]
                * j0[(u + v).unsigned_abs() as usize];
        }
    }
    Ok(acc)
}

fn require_y_axis(cfg: &MomentConfig, what: &str) -> Result<()> {
    if cfg.axis != Axis::Y {
        return Err(Error::unavailable(format!(
            "{what} has a closed form only for a y-axis array"
        )));
    }
    Ok(())
}

/// E[cos(s kd gamma_1) cos(s kd gamma_2)] for two cosine terms with the same
/// harmonic s whose pairs share exactly one satellite:
/// (1/2) J0(s kd/2)^4 (1 + J0(s kd)^2). Y axis only.
pub fn type_a_expectation(s: usize, cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "type_a_expectation")?;
    if s == 0 || s >= cfg.n_r {
        return Err(Error::invalid(format!("s must satisfy 1 <= s <= n_R-1, got {s}")));
    }
    let j_half = bessel_j0(s as f64 * cfg.kd / 2.0)?;
    let j_full = bessel_j0(s as f64 * cfg.kd)?;
    Ok(0.5 * j_half.powi(4) * (1.0 + j_full.powi(2)))
}

/// E[cos(s1 kd gamma_1) cos(s2 kd gamma_2)] for differing harmonics s1 != s2
/// whose pairs share exactly one satellite:
/// (1/2) J0(s1 kd/2)^2 J0(s2 kd/2)^2 (J0((s1+s2) kd/2)^2 + J0(|s1-s2| kd/2)^2).
/// Symmetric in (s1, s2). Y axis only.
pub fn type_b_expectation(s1: usize, s2: usize, cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "type_b_expectation")?;
    if s1 == 0 || s1 >= cfg.n_r || s2 == 0 || s2 >= cfg.n_r {
        return Err(Error::invalid(format!(
            "s1, s2 must satisfy 1 <= s <= n_R-1, got ({s1}, {s2})"
        )));
    }
    if s1 == s2 {
        return Err(Error::invalid("s1 == s2 is the type-A case".to_string()));
    }
    let j1 = bessel_j0(s1 as f64 * cfg.kd / 2.0)?;
    let j2 = bessel_j0(s2 as f64 * cfg.kd / 2.0)?;
    let j_sum = bessel_j0((s1 + s2) as f64 * cfg.kd / 2.0)?;
    let j_diff = bessel_j0(s1.abs_diff(s2) as f64 * cfg.kd / 2.0)?;
    Ok(0.5 * j1.powi(2) * j2.powi(2) * (j_sum.powi(2) + j_diff.powi(2)))
}

/// Covariance of two cosine rows sharing exactly one satellite:
/// sum_s (n_R-s)^2 type_a(s) + sum_{s1 != s2} (n_R-s1)(n_R-s2) type_b(s1,s2)
/// - ef12^2.
fn row_pair_covariance(cfg: &MomentConfig) -> Result<f64> {
    let mut acc = 0.0;
    for s1 in 1..cfg.n_r {
        for s2 in 1..cfg.n_r {
            let w = ((cfg.n_r - s1) * (cfg.n_r - s2)) as f64;
            let term = if s1 == s2 {
                type_a_expectation(s1, cfg)?
            } else {
                type_b_expectation(s1, s2, cfg)?
            };
            acc += w * term;
        }
    }
    Ok(acc - ef12(cfg)?.powi(2))
}

/// Cov(F1, F2) for the two full cosine-row sums F1, F2 under the
/// one-shared-satellite pairing model: n_T times the single-pair covariance.
/// Y axis only. Zero when n_R < 2 (empty rows).
pub fn cov_f_cross(cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "cov_f_cross")?;
    if cfg.n_t < 2 {
        return Err(Error::invalid("cov_f_cross requires n_T >= 2"));
    }
    if cfg.n_r < 2 {
        return Ok(0.0);
    }
    Ok(cfg.n_t as f64 * row_pair_covariance(cfg)?)
}

/// Variance of a single off-diagonal cosine row T(gamma):
/// sum_s (n_R-s)^2 (1/2)(1 + J0(s kd)^4)
/// + sum_{s1 != s2} (n_R-s1)(n_R-s2) (1/2)(J0((s1+s2) kd/2)^4 + J0(|s1-s2| kd/2)^4)
/// - ef12^2. Y axis only. Zero when n_R < 2.
pub fn var_f1nt(cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "var_f1nt")?;
    if cfg.n_r < 2 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for s1 in 1..cfg.n_r {
        for s2 in 1..cfg.n_r {
            let w = ((cfg.n_r - s1) * (cfg.n_r - s2)) as f64;
            if s1 == s2 {
                let j_full = bessel_j0(s1 as f64 * cfg.kd)?;
                acc += w * 0.5 * (1.0 + j_full.powi(4));
            } else {
                let j_sum = bessel_j0((s1 + s2) as f64 * cfg.kd / 2.0)?;
                let j_diff = bessel_j0(s1.abs_diff(s2) as f64 * cfg.kd / 2.0)?;
                acc += w * 0.5 * (j_sum.powi(4) + j_diff.powi(4));
            }
        }
    }
    Ok(acc - ef12(cfg)?.powi(2))
}

/// Variance of a full cosine-row sum under the pairing model:
/// n_T Var(T) + (n_T(n_T-1)/2) Cov of two rows sharing one satellite.
/// Y axis only.
pub fn var_f1(cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "var_f1")?;
    if cfg.n_t < 2 {
        return Err(Error::invalid("var_f1 requires n_T >= 2"));
    }
    if cfg.n_r < 2 {
        return Ok(0.0);
    }
    let n_t = cfg.n_t as f64;
    Ok(n_t * var_f1nt(cfg)? + n_t * (n_t - 1.0) / 2.0 * row_pair_covariance(cfg)?)
}

/// Correlation ratio of two cosine-row sums: the one-shared-satellite pair
/// covariance over the second moment of a single row,
/// (E[T T'] - E[T]^2) / (Var(T) + E[T]^2). Y axis only.
pub fn correlation_cf(cfg: &MomentConfig) -> Result<f64> {
    require_y_axis(cfg, "correlation_cf")?;
    if cfg.n_t < 2 {
        return Err(Error::invalid("correlation_cf requires n_T >= 2"));
    }
    if cfg.n_r < 2 {
        return Err(Error::DegenerateConfiguration {
            context: "correlation_cf denominator vanishes for n_R < 2".to_string(),
        });
    }
    let denom = var_f1nt(cfg)? + ef12(cfg)?.powi(2);
    if denom.abs() < 1e-300 {
        return Err(Error::DegenerateConfiguration {
            context: "correlation_cf denominator vanishes".to_string(),
        });
    }
    Ok(row_pair_covariance(cfg)? / denom)
}
