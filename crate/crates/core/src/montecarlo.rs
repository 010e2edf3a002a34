//! Deterministic, parallelizable Monte Carlo harness.
//!
//! Every trial derives its own RNG from (master_seed, trial_index), so a run
//! is a pure function of its configuration: results are bitwise identical
//! for any worker count and any scheduling order. Two runs with the same
//! seed also align trial by trial, which is what lets separately produced
//! sample sets of paired statistics be correlated sample-wise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::array_geometry::{direction_cosine, ArrayGeometry, Axis};
use crate::channel::{
    build_channel, capacity, draw_directions, gram_normalized, spectrum, trace_power,
    AngleDistribution,
};
use crate::error::{Error, Result};
use crate::outage::{CapacityStats, MomentSource, OutageMethod, OutagePoint};
use crate::specfun::gauss_q;

/// Name and version of the per-trial generator, recorded in run manifests.
pub const RNG_IDENTIFIER: &str = "chacha8 (rand_chacha 0.3), splitmix64 per-trial keys";

/// One Monte Carlo experiment: channel sizes, geometry, SNR, and the
/// determinism contract (seed, trial count). `workers` is advisory; it
/// never changes results, only scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub kd: f64,
    pub axis: Axis,
    pub snr_db: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_r == 0 {
            return Err(Error::invalid("n_T and n_R must be >= 1"));
        }
        if !self.kd.is_finite() || self.kd <= 0.0 {
            return Err(Error::invalid(format!("kd must be finite and > 0, got {}", self.kd)));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::NonFiniteInput { context: "snr_db" });
        }
        if !self.snr_linear().is_finite() {
            return Err(Error::invalid(format!("snr_db {} overflows linear snr", self.snr_db)));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be >= 1"));
        }
        Ok(())
    }

    /// Linear rho = 10^(snr_db/10). dB exists only at the boundary.
    pub fn snr_linear(&self) -> f64 {
        10.0_f64.powf(self.snr_db / 10.0)
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.n_r, self.kd, self.axis)
    }

    pub fn angle_law(&self) -> AngleDistribution {
        AngleDistribution::default_for_axis(self.axis)
    }

    /// FNV-1a digest of every result-determining field. `workers` is
    /// excluded: it must not affect any output.
    pub fn config_hash(&self) -> u64 {
        let canon = format!(
            "n_t={};n_r={};kd={:?};axis={};snr_db={:?};trials={};master_seed={}",
            self.n_t,
            self.n_r,
            self.kd,
            self.axis.as_str(),
            self.snr_db,
            self.trials,
            self.master_seed
        );
        fnv1a(canon.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Per-trial statistic to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Capacity,
    TraceW2,
    TraceW3,
    F1,
    F2,
    Omega,
}

impl Statistic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statistic::Capacity => "capacity",
            Statistic::TraceW2 => "trace_w2",
            Statistic::TraceW3 => "trace_w3",
            Statistic::F1 => "f1",
            Statistic::F2 => "f2",
            Statistic::Omega => "omega",
        }
    }
}

/// One value per trial, tagged with what was measured and under which
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    config_hash: u64,
    statistic: Statistic,
}

impl SampleSet {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    pub fn config_hash(&self) -> u64 {
        self.config_hash
    }

    /// FNV-1a over the exact sample bits plus the tags: equal digests mean
    /// bitwise-equal runs.
    pub fn digest(&self) -> u64 {
        let mut hash = fnv1a(self.statistic.as_str().as_bytes());
        hash ^= self.config_hash;
        for v in &self.values {
            for b in v.to_le_bytes() {
                hash ^= b as u64;
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        hash
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance (n - 1 denominator).
    pub fn variance(&self) -> Result<f64> {
        let n = self.values.len();
        if n < 2 {
            return Err(Error::DegenerateDistribution {
                context: "variance needs at least 2 samples".to_string(),
            });
        }
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean).powi(2)).sum();
        Ok(ss / (n - 1) as f64)
    }

    /// Standard error of the sample mean.
    pub fn std_error(&self) -> Result<f64> {
        Ok((self.variance()? / self.values.len() as f64).sqrt())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG for one trial: a 256-bit ChaCha8 key expanded by
/// splitmix64 from (master_seed, trial). O(1) per trial, so trials can be
/// evaluated in any order on any number of threads.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut state = master_seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Run `eval` once per trial on its own RNG, in trial-index order.
fn run_trials<F>(cfg: &ExperimentConfig, eval: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let trials = usize::try_from(cfg.trials)
        .map_err(|_| Error::ResourceExhausted { completed: 0, requested: cfg.trials })?;
    // Pre-flight the result allocation so oversized requests fail with a
    // progress report instead of aborting inside the parallel collect.
    let mut probe: Vec<f64> = Vec::new();
    probe
        .try_reserve_exact(trials)
        .map_err(|_| Error::ResourceExhausted { completed: 0, requested: cfg.trials })?;
    drop(probe);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool construction failed: {e}")))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.master_seed, t as u64);
                eval(&mut rng)
            })
            .collect()
    })
}

fn capacity_sample(
    rng: &mut ChaCha8Rng,
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    law: &AngleDistribution,
) -> Result<f64> {
    let draw = draw_directions(rng, cfg.n_t, law)?;
    let h = build_channel(geom, &draw)?;
    let w = gram_normalized(&h);
    let spec = spectrum(&w)?;
    capacity(&spec, cfg.snr_linear())
}

/// Instantaneous capacity per trial.
pub fn run_capacity_mc(cfg: &ExperimentConfig) -> Result<SampleSet> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let law = cfg.angle_law();
    let values = run_trials(cfg, |rng| capacity_sample(rng, cfg, &geom, &law))?;
    Ok(SampleSet { values, config_hash: cfg.config_hash(), statistic: Statistic::Capacity })
}

/// Cosine row T(gamma) = sum_{s=1}^{n_R-1} (n_R - s) cos(s kd gamma).
fn cosine_row(n_r: usize, kd: f64, gamma: f64) -> f64 {
    let mut acc = 0.0;
    for s in 1..n_r {
        acc += (n_r - s) as f64 * (s as f64 * kd * gamma).cos();
    }
    acc
}

/// Direction cosines of one fresh block of n_T satellites.
fn psi_block(
    rng: &mut ChaCha8Rng,
    n_t: usize,
    geom: &ArrayGeometry,
    law: &AngleDistribution,
) -> Result<Vec<f64>> {
    let draw = draw_directions(rng, n_t, law)?;
    Ok(draw.directions.iter().map(|d| direction_cosine(geom, d)).collect())
}

/// F-row sample. Three direction blocks are always drawn, in a fixed order,
/// no matter which row is requested: separate F1 and F2 runs under the same
/// config then consume identical streams and pair up trial by trial, with
/// the shared third block carrying the cross-row dependence.
fn f_row_sample(
    rng: &mut ChaCha8Rng,
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    law: &AngleDistribution,
    which: Statistic,
) -> Result<f64> {
    let block_x = psi_block(rng, cfg.n_t, geom, law)?;
    let block_y = psi_block(rng, cfg.n_t, geom, law)?;
    let block_z = psi_block(rng, cfg.n_t, geom, law)?;
    let lead = match which {
        Statistic::F1 => &block_x,
        Statistic::F2 => &block_y,
        _ => unreachable!("f_row_sample is only called for F1/F2"),
    };
    let mut acc = 0.0;
    for (a, b) in lead.iter().zip(&block_z) {
        acc += cosine_row(cfg.n_r, cfg.kd, a - b);
    }
    Ok(acc)
}

/// Omega sample: sum of T(gamma_ij) over all ordered satellite pairs of one
/// draw, diagonal included (gamma_ii = 0 contributes T(0) per satellite).
fn omega_sample(
    rng: &mut ChaCha8Rng,
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    law: &AngleDistribution,
) -> Result<f64> {
    let psi = psi_block(rng, cfg.n_t, geom, law)?;
    let diag = (cfg.n_r * (cfg.n_r - 1)) as f64 / 2.0;
    let mut acc = cfg.n_t as f64 * diag;
    for i in 0..cfg.n_t {
        for j in (i + 1)..cfg.n_t {
            acc += 2.0 * cosine_row(cfg.n_r, cfg.kd, psi[i] - psi[j]);
        }
    }
    Ok(acc)
}

/// Per-trial evaluation of the named statistic on a fresh angle draw.
pub fn run_statistic_mc(cfg: &ExperimentConfig, statistic: Statistic) -> Result<SampleSet> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let law = cfg.angle_law();
    if matches!(statistic, Statistic::F1 | Statistic::F2) && cfg.n_t < 2 {
        return Err(Error::UnsupportedStatistic {
            context: format!("{} requires n_T >= 2, got {}", statistic.as_str(), cfg.n_t),
        });
    }
    let values = match statistic {
        Statistic::Capacity => run_trials(cfg, |rng| capacity_sample(rng, cfg, &geom, &law))?,
        Statistic::TraceW2 | Statistic::TraceW3 => {
            let k = if statistic == Statistic::TraceW2 { 2 } else { 3 };
            run_trials(cfg, |rng| {
                let draw = draw_directions(rng, cfg.n_t, &law)?;
                let h = build_channel(&geom, &draw)?;
                trace_power(&gram_normalized(&h), k)
            })?
        }
        Statistic::F1 | Statistic::F2 => {
            run_trials(cfg, |rng| f_row_sample(rng, cfg, &geom, &law, statistic))?
        }
        Statistic::Omega => run_trials(cfg, |rng| omega_sample(rng, cfg, &geom, &law))?,
    };
    Ok(SampleSet { values, config_hash: cfg.config_hash(), statistic })
}

/// Empirical outage: p_out(r) = (number of capacity samples < r) / trials.
pub fn empirical_outage(samples: &SampleSet, r_grid: &[f64]) -> Result<Vec<OutagePoint>> {
    if samples.statistic != Statistic::Capacity {
        return Err(Error::invalid(format!(
            "empirical outage needs capacity samples, got {}",
            samples.statistic.as_str()
        )));
    }
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
    let mut sorted = samples.values.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(r_grid
        .iter()
        .map(|&r| {
            let below = sorted.partition_point(|&x| x < r);
            OutagePoint { r_th: r, p_out: below as f64 / n, method: OutageMethod::Empirical }
        })
        .collect())
}

/// Sample mean/variance of a capacity run, packaged for the Gaussian
/// outage approximation.
pub fn capacity_stats_from_samples(samples: &SampleSet, snr: f64) -> Result<CapacityStats> {
    if samples.statistic != Statistic::Capacity {
        return Err(Error::invalid(format!(
            "capacity statistics need capacity samples, got {}",
            samples.statistic.as_str()
        )));
    }
    CapacityStats::new(samples.mean(), samples.variance()?, snr, MomentSource::MonteCarloEstimated)
}

/// Anderson-Darling statistic of the samples against the standard normal,
/// after standardizing with the sample mean and (n-1)-denominator standard
/// deviation:
///
/// A^2 = -n - (1/n) sum_i (2i - 1) [ln Phi(z_(i)) + ln(1 - Phi(z_(n+1-i)))].
pub fn anderson_darling(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::invalid(format!("Anderson-Darling needs >= 2 samples, got {n}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { context: "anderson_darling samples" });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var <= 0.0 {
        return Err(Error::DegenerateDistribution {
            context: "Anderson-Darling samples have zero variance".to_string(),
        });
    }
    let sd = var.sqrt();
    let mut z: Vec<f64> = values.iter().map(|v| (v - mean) / sd).collect();
    z.sort_unstable_by(f64::total_cmp);
    let mut acc = 0.0;
    for i in 0..n {
        let phi_lo = gauss_q(-z[i])?;
        let tail_hi = gauss_q(z[n - 1 - i])?;
        acc += (2 * i + 1) as f64 * (phi_lo.ln() + tail_hi.ln());
    }
    Ok(-nf - acc / nf)
}

/// Anderson-Darling normality check for a Monte Carlo sample set. Requires
/// at least 10^4 trials: below that the statistic has too little power to
/// mean anything.
pub fn normality_check(samples: &SampleSet) -> Result<f64> {
    if samples.len() < 10_000 {
        return Err(Error::invalid(format!(
            "normality check needs >= 10000 samples, got {}",
            samples.len()
        )));
    }
    anderson_darling(&samples.values)
}

/// Standard-normal draws via Box-Muller on the harness RNG; the calibration
/// input for the normality check.
pub fn synthetic_normal(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        // 1 - u in (0, 1] keeps the log finite.
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        out.push(r * c);
        if out.len() < n {
            out.push(r * s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            n_t: 2,
            n_r: 2,
            kd: std::f64::consts::PI,
            axis: Axis::Y,
            snr_db: 10.0,
            trials: 64,
            master_seed: 42,
            workers: 1,
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_cfg();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.kd = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.snr_db = f64::NAN;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.workers = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_hash_ignores_workers() {
        let mut a = small_cfg();
        let h1 = a.config_hash();
        a.workers = 7;
        assert_eq!(h1, a.config_hash());
        a.master_seed = 43;
        assert_ne!(h1, a.config_hash());
    }

    #[test]
    fn worker_count_does_not_change_samples() {
        let mut cfg = small_cfg();
        let one = run_capacity_mc(&cfg).unwrap();
        cfg.workers = 3;
        let three = run_capacity_mc(&cfg).unwrap();
        assert_eq!(one, three);
        assert_eq!(one.digest(), three.digest());
    }

    #[test]
    fn f_rows_need_two_satellites() {
        let mut cfg = small_cfg();
        cfg.n_t = 1;
        assert!(matches!(
            run_statistic_mc(&cfg, Statistic::F1),
            Err(Error::UnsupportedStatistic { .. })
        ));
        assert!(run_statistic_mc(&cfg, Statistic::Omega).is_ok());
    }

    #[test]
    fn empirical_outage_requires_capacity_samples() {
        let cfg = small_cfg();
        let s = run_statistic_mc(&cfg, Statistic::TraceW2).unwrap();
        assert!(empirical_outage(&s, &[0.5]).is_err());
        let c = run_capacity_mc(&cfg).unwrap();
        assert!(empirical_outage(&c, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn anderson_darling_degenerate_and_short() {
        assert!(anderson_darling(&[1.0]).is_err());
        assert!(matches!(anderson_darling(&[2.0; 32]), Err(Error::DegenerateDistribution { .. })));
        let cfg = small_cfg();
        let s = run_capacity_mc(&cfg).unwrap();
        assert!(normality_check(&s).is_err());
    }

    #[test]
    fn synthetic_normal_has_expected_shape() {
        let v = synthetic_normal(7, 10_001);
        assert_eq!(v.len(), 10_001);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.05);
    }
}
