//! Command implementations. Each command resolves its configuration,
//! produces one data file, and writes a run manifest next to it.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use losmimo::{
    anderson_darling, build_channel, capacity_stats_from_samples, capacity_stats_taylor,
    char_poly_from_traces, char_poly_roots, correlation_cf, cov_f_cross, ef11, ef12,
    empirical_outage, expected_trace2, expected_trace3, gauss_q, gram_normalized,
    matrix_trace_sequence, mean_capacity_taylor, mu_omega, outage_curve, run_capacity_mc,
    run_statistic_mc, sample_angles, second_moment_capacity_taylor, spectrum, synthetic_normal,
    trace_power, var_f1, var_f1nt, AngleDistribution, ArrayGeometry, Axis, CapacityStats,
    ExperimentConfig, MomentConfig, OutagePoint, SampleSet, Statistic, TraceMoments,
};

use crate::config::{resolve, Resolved};
use crate::report::{write_json, write_text, RunReport};
use crate::{CliError, CliResult, CommonArgs, MethodArg, OutageArgs, SweepArgs};

/// 1% critical value of the Anderson-Darling statistic for a fitted
/// normal (case 3: mean and variance estimated).
const AD_CRITICAL_1PCT: f64 = 1.092;

fn experiment(r: &Resolved) -> ExperimentConfig {
    ExperimentConfig {
        n_t: r.n_t,
        n_r: r.n_r,
        kd: r.kd,
        axis: r.axis,
        snr_db: r.snr_db,
        trials: r.trials,
        master_seed: r.seed,
        workers: r.workers,
    }
}

fn moment_config(r: &Resolved) -> CliResult<MomentConfig> {
    MomentConfig::new(r.n_t, r.n_r, r.kd, r.axis)
        .map_err(|e| CliError::Usage(format!("bad configuration: {e}")))
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::GaussianAnalytic => "gaussian-analytic",
        MethodArg::GaussianMc => "gaussian-mc",
        MethodArg::Empirical => "empirical",
    }
}

fn dedupe(methods: &[MethodArg]) -> Vec<MethodArg> {
    let mut out = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn sorted_values(samples: &SampleSet) -> Vec<f64> {
    let mut v = samples.values().to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Nearest-rank quantile of an ascending sample vector.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Threshold grid: explicit bounds win, otherwise the central 99.9% of
/// the capacity samples. A degenerate span (deterministic channel) is
/// widened so the step shape of the curves stays visible.
fn threshold_grid(
    sorted: &[f64],
    r_min: Option<f64>,
    r_max: Option<f64>,
    steps: usize,
) -> CliResult<Vec<f64>> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--r-steps must be >= 2, got {steps}")));
    }
    let mut lo = r_min.unwrap_or_else(|| quantile(sorted, 0.0005));
    let mut hi = r_max.unwrap_or_else(|| quantile(sorted, 0.9995));
    if !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!("thresholds must be finite, got [{lo}, {hi}]")));
    }
    if lo > hi {
        return Err(CliError::Usage(format!("empty threshold range: {lo} > {hi}")));
    }
    if hi - lo < 1e-9 {
        lo -= 0.5;
        hi += 0.5;
    }
    let step = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|i| lo + step * i as f64).collect())
}

/// Gaussian statistics from the small-SNR Taylor trace moments. Needs
/// the third trace moment, so it is a runtime error on configurations
/// where that form has no closed expression.
fn taylor_stats(resolved: &Resolved) -> CliResult<CapacityStats> {
    let mc = moment_config(resolved)?;
    let t2 = expected_trace2(&mc)?;
    let t3 = expected_trace3(&mc).map_err(|e| {
        CliError::Runtime(format!("gaussian-analytic needs the third trace moment: {e}"))
    })?;
    let moments = TraceMoments::normalized(t2, t3)?;
    let cfg = experiment(resolved);
    Ok(capacity_stats_taylor(&moments, cfg.snr_linear())?)
}

fn sup_gap(a: &[OutagePoint], b: &[OutagePoint]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.p_out - y.p_out).abs()).fold(0.0, f64::max)
}

/// One outage curve per requested method over a shared grid.
fn method_curves(
    resolved: &Resolved,
    samples: &SampleSet,
    grid: &[f64],
    methods: &[MethodArg],
) -> CliResult<Vec<(MethodArg, Vec<OutagePoint>)>> {
    let cfg = experiment(resolved);
    let mut curves = Vec::with_capacity(methods.len());
    for &m in methods {
        let points = match m {
            MethodArg::Empirical => empirical_outage(samples, grid)?,
            MethodArg::GaussianMc => {
                let stats = capacity_stats_from_samples(samples, cfg.snr_linear())?;
                outage_curve(&stats, grid)?
            }
            MethodArg::GaussianAnalytic => {
                let stats = taylor_stats(resolved)?;
                outage_curve(&stats, grid)?
            }
        };
        curves.push((m, points));
    }
    Ok(curves)
}

fn gap_between(
    curves: &[(MethodArg, Vec<OutagePoint>)],
    a: MethodArg,
    b: MethodArg,
) -> Option<f64> {
    let ca = curves.iter().find(|(m, _)| *m == a)?;
    let cb = curves.iter().find(|(m, _)| *m == b)?;
    Some(sup_gap(&ca.1, &cb.1))
}

fn out_path(common: &CommonArgs, default: &str) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

/// Insert a closed form into a JSON map; unavailable forms become null
/// plus a `<name>_reason` string saying why.
fn insert_form(doc: &mut Map<String, Value>, name: &str, form: losmimo::Result<f64>) {
    match form {
        Ok(v) => {
            doc.insert(name.to_string(), json!(v));
        }
        Err(e) => {
            doc.insert(name.to_string(), Value::Null);
            doc.insert(format!("{name}_reason"), json!(e.to_string()));
        }
    }
}

pub fn moments(args: &CommonArgs) -> CliResult<()> {
    let resolved = resolve(args)?;
    let mut report = RunReport::new("moments", &resolved);
    let mc = moment_config(&resolved)?;

    let mut doc = Map::new();
    doc.insert("ntx".into(), json!(resolved.n_t));
    doc.insert("nrx".into(), json!(resolved.n_r));
    doc.insert("kd".into(), json!(resolved.kd));
    doc.insert("kd_source".into(), json!(resolved.kd_source));
    doc.insert("axis".into(), json!(resolved.axis_name()));
    doc.insert("ef11".into(), json!(ef11(&mc)));
    insert_form(&mut doc, "ef12", ef12(&mc));
    insert_form(&mut doc, "mu_omega", mu_omega(&mc));
    insert_form(&mut doc, "expected_trace2", expected_trace2(&mc));
    insert_form(&mut doc, "expected_trace3", expected_trace3(&mc));
    insert_form(&mut doc, "var_f1nT", var_f1nt(&mc));
    insert_form(&mut doc, "var_f1", var_f1(&mc));
    insert_form(&mut doc, "cov_f_cross", cov_f_cross(&mc));
    insert_form(&mut doc, "correlation_cf", correlation_cf(&mc));

    let out = out_path(args, "moments.json");
    write_json(&out, &Value::Object(doc))?;
    report.record_output(&out);
    report.write(&out)
}

pub fn outage(args: &OutageArgs) -> CliResult<()> {
    let resolved = resolve(&args.common)?;
    let methods = dedupe(&args.methods);
    if methods.is_empty() {
        return Err(CliError::Usage("empty method set: give at least one --methods value".into()));
    }
    let mut report = RunReport::new("outage", &resolved);
    report.set_param("methods", json!(methods.iter().map(|&m| method_name(m)).collect::<Vec<_>>()));
    report.set_param("r_steps", json!(args.r_steps));
    if let Some(v) = args.r_min {
        report.set_param("r_min", json!(v));
    }
    if let Some(v) = args.r_max {
        report.set_param("r_max", json!(v));
    }

    let samples = run_capacity_mc(&experiment(&resolved))?;
    let sorted = sorted_values(&samples);
    let grid = threshold_grid(&sorted, args.r_min, args.r_max, args.r_steps)?;
    let curves = method_curves(&resolved, &samples, &grid, &methods)?;

    if let Some(gap) = gap_between(&curves, MethodArg::GaussianMc, MethodArg::Empirical) {
        report.note("sup_gap_gaussian_mc_vs_empirical", json!(gap));
    }

    let mut csv = String::from("r_th,method,p_out\n");
    for k in 0..grid.len() {
        for (_, points) in &curves {
            let p = points[k];
            let _ = writeln!(csv, "{},{},{}", p.r_th, p.method.as_str(), p.p_out);
        }
    }
    let out = out_path(&args.common, "outage.csv");
    write_text(&out, &csv)?;
    report.record_output(&out);
    report.write(&out)
}

fn parse_pair(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("bad --pairs entry {text:?}: expected like 4x4 or 8x16"));
    let (a, b) = text.split_once('x').ok_or_else(bad)?;
    let n_t: usize = a.trim().parse().map_err(|_| bad())?;
    let n_r: usize = b.trim().parse().map_err(|_| bad())?;
    Ok((n_t, n_r))
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    if args.pairs.is_empty() && args.snr_list.is_empty() {
        return Err(CliError::Usage(
            "empty sweep: give --pairs and/or --snr-list (a single cell is plain `outage`)".into(),
        ));
    }
    let methods = dedupe(&args.methods);
    if methods.is_empty() {
        return Err(CliError::Usage("empty method set: give at least one --methods value".into()));
    }

    // Resolve shared parameters. With --pairs the sizes come from the
    // pair list, so feed resolve() the first pair to satisfy it.
    let mut common = args.common.clone();
    let pairs: Vec<(usize, usize)> = if args.pairs.is_empty() {
        Vec::new()
    } else {
        args.pairs.iter().map(|s| parse_pair(s)).collect::<CliResult<_>>()?
    };
    if let Some(&(n_t, n_r)) = pairs.first() {
        common.ntx.get_or_insert(n_t);
        common.nrx.get_or_insert(n_r);
    }
    let resolved = resolve(&common)?;
    let cells_nt_nr: Vec<(usize, usize)> =
        if pairs.is_empty() { vec![(resolved.n_t, resolved.n_r)] } else { pairs };
    let snrs: Vec<f64> =
        if args.snr_list.is_empty() { vec![resolved.snr_db] } else { args.snr_list.clone() };

    let mut report = RunReport::new("sweep", &resolved);
    report.set_param(
        "pairs",
        json!(cells_nt_nr.iter().map(|(t, r)| format!("{t}x{r}")).collect::<Vec<_>>()),
    );
    report.set_param("snr_list", json!(snrs));
    report.set_param("methods", json!(methods.iter().map(|&m| method_name(m)).collect::<Vec<_>>()));
    report.set_param("r_steps", json!(args.r_steps));
    if let Some(v) = args.r_min {
        report.set_param("r_min", json!(v));
    }
    if let Some(v) = args.r_max {
        report.set_param("r_max", json!(v));
    }

    let mut csv = String::from("n_t,n_r,snr_db,r_th,method,p_out\n");
    let mut gaps = Vec::new();
    for &(n_t, n_r) in &cells_nt_nr {
        for &snr_db in &snrs {
            // Every cell reuses the master seed, so any cell is
            // reproducible on its own via `outage` with the same seed.
            let cell = Resolved { n_t, n_r, snr_db, ..resolved.clone() };
            let samples = run_capacity_mc(&experiment(&cell))?;
            let sorted = sorted_values(&samples);
            let grid = threshold_grid(&sorted, args.r_min, args.r_max, args.r_steps)?;
            let curves = method_curves(&cell, &samples, &grid, &methods)?;
            if let Some(gap) = gap_between(&curves, MethodArg::GaussianMc, MethodArg::Empirical) {
                gaps.push(json!({
                    "n_t": n_t, "n_r": n_r, "snr_db": snr_db, "sup_gap": gap,
                }));
            }
            for k in 0..grid.len() {
                for (_, points) in &curves {
                    let p = points[k];
                    let _ = writeln!(
                        csv,
                        "{n_t},{n_r},{snr_db},{},{},{}",
                        p.r_th,
                        p.method.as_str(),
                        p.p_out
                    );
                }
            }
        }
    }
    if !gaps.is_empty() {
        let max = gaps.iter().filter_map(|g| g["sup_gap"].as_f64()).fold(0.0, f64::max);
        report.note("sup_gap_gaussian_mc_vs_empirical", json!(gaps));
        report.note("max_sup_gap_gaussian_mc_vs_empirical", json!(max));
    }

    let out = out_path(&args.common, "sweep.csv");
    write_text(&out, &csv)?;
    report.record_output(&out);
    report.write(&out)
}

pub fn capacity_mc(args: &CommonArgs) -> CliResult<()> {
    let resolved = resolve(args)?;
    let mut report = RunReport::new("capacity-mc", &resolved);
    let samples = run_capacity_mc(&experiment(&resolved))?;

    let mut csv = String::from("trial,capacity\n");
    for (trial, v) in samples.values().iter().enumerate() {
        let _ = writeln!(csv, "{trial},{v}");
    }
    report.note("mean", json!(samples.mean()));
    if let Ok(se) = samples.std_error() {
        report.note("std_error", json!(se));
    }
    report.note("sample_digest", json!(format!("{:016x}", samples.digest())));

    let out = out_path(args, "capacity_mc.csv");
    write_text(&out, &csv)?;
    report.record_output(&out);
    report.write(&out)
}

/// Sample covariance and Pearson correlation of two paired sample sets.
fn paired_covariance(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    cov /= n - 1.0;
    va /= n - 1.0;
    vb /= n - 1.0;
    (cov, cov / (va * vb).sqrt())
}

pub fn cf(args: &CommonArgs) -> CliResult<()> {
    let resolved = resolve(args)?;
    if !matches!(resolved.axis, Axis::Y) {
        return Err(CliError::Usage(
            "the row-statistic machinery is closed-form on the y axis only; use --axis y".into(),
        ));
    }
    if resolved.n_t < 2 {
        return Err(CliError::Usage("row statistics need --ntx >= 2".into()));
    }
    let mut report = RunReport::new("cf", &resolved);
    let mc = moment_config(&resolved)?;

    let mut analytic = Map::new();
    analytic.insert("mu_omega".into(), json!(mu_omega(&mc)?));
    analytic.insert("var_f1nT".into(), json!(var_f1nt(&mc)?));
    analytic.insert("var_f1".into(), json!(var_f1(&mc)?));
    analytic.insert("cov_f_cross".into(), json!(cov_f_cross(&mc)?));
    analytic.insert("correlation_cf".into(), json!(correlation_cf(&mc)?));

    let cfg = experiment(&resolved);
    let omega = run_statistic_mc(&cfg, Statistic::Omega)?;
    let f1 = run_statistic_mc(&cfg, Statistic::F1)?;
    let f2 = run_statistic_mc(&cfg, Statistic::F2)?;
    let var_f1_hat = f1.variance()?;
    let (cov_hat, pearson_hat) = paired_covariance(f1.values(), f2.values());

    let mut simulated = Map::new();
    simulated.insert("omega_mean".into(), json!(omega.mean()));
    simulated.insert("omega_std_error".into(), json!(omega.std_error()?));
    simulated.insert("var_f1".into(), json!(var_f1_hat));
    simulated.insert("var_f1nT".into(), json!(var_f1_hat / resolved.n_t as f64));
    simulated.insert("cov_f_cross".into(), json!(cov_hat));
    simulated.insert("correlation_cf".into(), json!(pearson_hat));

    let mut doc = Map::new();
    doc.insert("ntx".into(), json!(resolved.n_t));
    doc.insert("nrx".into(), json!(resolved.n_r));
    doc.insert("kd".into(), json!(resolved.kd));
    doc.insert("kd_source".into(), json!(resolved.kd_source));
    doc.insert("axis".into(), json!(resolved.axis_name()));
    doc.insert("trials".into(), json!(resolved.trials));
    doc.insert("seed".into(), json!(resolved.seed));
    doc.insert("analytic".into(), Value::Object(analytic));
    doc.insert("simulated".into(), Value::Object(simulated));

    let out = out_path(args, "cf.json");
    write_json(&out, &Value::Object(doc))?;
    report.record_output(&out);
    report.write(&out)
}

struct CheckList {
    checks: Vec<Value>,
    all_pass: bool,
}

impl CheckList {
    fn new() -> Self {
        CheckList { checks: Vec::new(), all_pass: true }
    }

    fn record(&mut self, name: &str, pass: bool, measured: Value) {
        eprintln!("check {name}: {}", if pass { "PASS" } else { "FAIL" });
        self.checks.push(json!({ "name": name, "pass": pass, "measured": measured }));
        self.all_pass &= pass;
    }
}

/// Mean-vs-formula check: simulated mean within 3 standard errors of
/// the closed form (plus a hair of absolute slack for exact cases).
fn mean_check(list: &mut CheckList, name: &str, analytic: f64, samples: &SampleSet) {
    let mean = samples.mean();
    let se = samples.std_error().unwrap_or(0.0);
    let pass = (mean - analytic).abs() <= 3.0 * se + 1e-9;
    list.record(name, pass, json!({ "analytic": analytic, "simulated": mean, "std_error": se }));
}

/// Standard error of a sample variance via the central fourth moment.
fn variance_std_error(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2).max(0.0) / n).sqrt()
}

pub fn verify(args: &CommonArgs) -> CliResult<()> {
    // Sizes are optional here: the suite has a canonical 4x4 default.
    let mut common = args.clone();
    common.ntx.get_or_insert(4);
    common.nrx.get_or_insert(4);
    let resolved = resolve(&common)?;
    let mut report = RunReport::new("verify", &resolved);
    let trials = resolved.trials;
    let low_power = trials < 100_000;
    let seed = resolved.seed;
    let mut list = CheckList::new();

    let base = |axis: Axis, seed: u64| ExperimentConfig {
        axis,
        master_seed: seed,
        ..experiment(&resolved)
    };
    let cfg_for = |axis: Axis| -> CliResult<MomentConfig> {
        MomentConfig::new(resolved.n_t, resolved.n_r, resolved.kd, axis)
            .map_err(|e| CliError::Usage(format!("bad configuration: {e}")))
    };

    // Trace moments against simulation, both axes.
    let my = cfg_for(Axis::Y)?;
    let mz = cfg_for(Axis::Z)?;
    let t2y = run_statistic_mc(&base(Axis::Y, seed), Statistic::TraceW2)?;
    mean_check(&mut list, "trace2-y-vs-mc", expected_trace2(&my)?, &t2y);
    let t2z = run_statistic_mc(&base(Axis::Z, seed + 1), Statistic::TraceW2)?;
    mean_check(&mut list, "trace2-z-vs-mc", expected_trace2(&mz)?, &t2z);
    let t3z = run_statistic_mc(&base(Axis::Z, seed + 2), Statistic::TraceW3)?;
    mean_check(&mut list, "trace3-z-vs-mc", expected_trace3(&mz)?, &t3z);

    // Row statistics against simulation (need two transmitters).
    let row_nt = resolved.n_t.max(2);
    let row_exp = ExperimentConfig { n_t: row_nt, ..base(Axis::Y, seed + 3) };
    let row_mc = MomentConfig::new(row_nt, resolved.n_r, resolved.kd, Axis::Y)
        .map_err(|e| CliError::Usage(format!("bad configuration: {e}")))?;
    let omega = run_statistic_mc(&row_exp, Statistic::Omega)?;
    mean_check(&mut list, "omega-mean-vs-formula", mu_omega(&row_mc)?, &omega);

    let f1 = run_statistic_mc(&row_exp, Statistic::F1)?;
    let f2 = run_statistic_mc(&row_exp, Statistic::F2)?;
    let var_analytic = row_nt as f64 * var_f1nt(&row_mc)?;
    let var_hat = f1.variance()?;
    let var_se = variance_std_error(f1.values());
    let var_pass = (var_hat - var_analytic).abs() <= 3.0 * var_se + 1e-9;
    list.record(
        "row-variance-vs-formula",
        var_pass,
        json!({ "analytic": var_analytic, "simulated": var_hat, "std_error": var_se }),
    );

    let cov_analytic = cov_f_cross(&row_mc)?;
    let corr_analytic = correlation_cf(&row_mc)?;
    let (cov_hat, pearson_hat) = paired_covariance(f1.values(), f2.values());
    let v1 = var_hat;
    let v2 = f2.variance()?;
    let cov_se = ((v1 * v2 + cov_hat * cov_hat) / f1.len() as f64).sqrt();
    let cov_pass = (cov_hat - cov_analytic).abs() <= 3.0 * cov_se + 1e-9;
    let corr_pass = (pearson_hat - corr_analytic).abs() <= 0.02;
    list.record(
        "row-covariance-and-correlation",
        cov_pass && corr_pass,
        json!({
            "cov_analytic": cov_analytic, "cov_simulated": cov_hat, "cov_std_error": cov_se,
            "corr_analytic": corr_analytic, "corr_simulated": pearson_hat, "corr_band": 0.02,
        }),
    );

    // The normality machinery itself, calibrated on true normal draws.
    let draws = synthetic_normal(seed + 4, (trials as usize).max(10_000));
    let a2 = anderson_darling(&draws)?;
    list.record(
        "normality-calibration",
        a2 < AD_CRITICAL_1PCT,
        json!({ "a2": a2, "critical_1pct": AD_CRITICAL_1PCT }),
    );

    // Characteristic-polynomial round trip through the eigensolver on
    // random unit-trace Gram matrices.
    let mut max_root_gap: f64 = 0.0;
    let mut max_trace_gap: f64 = 0.0;
    for rep in 0..200u64 {
        let n_t = 2 + (rep as usize) % 7;
        let geom = ArrayGeometry::new(n_t + 3, resolved.kd, Axis::Y)?;
        let law = AngleDistribution::default_for_axis(Axis::Y);
        let draw = sample_angles(seed + 100 + rep, n_t, &law)?;
        let w = gram_normalized(&build_channel(&geom, &draw)?);
        let mut eig = spectrum(&w)?.eigenvalues;
        let seq = matrix_trace_sequence(w.as_cmat())?;
        let poly = char_poly_from_traces(&seq)?;
        let mut roots = char_poly_roots(&poly)?;
        eig.sort_unstable_by(f64::total_cmp);
        roots.sort_unstable_by(f64::total_cmp);
        for (r, e) in roots.iter().zip(&eig) {
            max_root_gap = max_root_gap.max((r - e).abs());
        }
        let c = poly.coefficients();
        max_trace_gap = max_trace_gap.max((-c[1] / c[0] - seq.traces()[0]).abs());
    }
    list.record(
        "charpoly-round-trip",
        max_root_gap <= 1e-6 && max_trace_gap <= 1e-12,
        json!({ "max_root_gap": max_root_gap, "max_trace_gap": max_trace_gap }),
    );

    // Taylor capacity moments at small SNR against simulation.
    let taylor_exp = ExperimentConfig {
        n_t: 8,
        n_r: 8,
        axis: Axis::Z,
        snr_db: -10.0,
        ..base(Axis::Z, seed + 5)
    };
    let taylor_mc = MomentConfig::new(8, 8, resolved.kd, Axis::Z)
        .map_err(|e| CliError::Usage(format!("bad configuration: {e}")))?;
    let moments =
        TraceMoments::normalized(expected_trace2(&taylor_mc)?, expected_trace3(&taylor_mc)?)?;
    let rho = taylor_exp.snr_linear();
    let mean_taylor = mean_capacity_taylor(&moments, rho)?;
    let second_taylor = second_moment_capacity_taylor(&moments, rho)?;
    let cap = run_capacity_mc(&taylor_exp)?;
    let mean_hat = cap.mean();
    let second_hat = cap.values().iter().map(|c| c * c).sum::<f64>() / cap.len() as f64;
    let mean_rel = (mean_taylor - mean_hat).abs() / mean_hat;
    let second_rel = (second_taylor - second_hat).abs() / second_hat;
    list.record(
        "taylor-small-snr",
        mean_rel <= 0.02 && second_rel <= 0.05,
        json!({
            "mean_taylor": mean_taylor, "mean_mc": mean_hat, "mean_rel": mean_rel,
            "second_taylor": second_taylor, "second_mc": second_hat, "second_rel": second_rel,
        }),
    );

    // Worker count must not change a single bit of the output.
    let det_trials = trials.min(20_000);
    let d1 = run_capacity_mc(&ExperimentConfig {
        trials: det_trials,
        workers: 1,
        ..base(Axis::Y, seed + 6)
    })?;
    let d2 = run_capacity_mc(&ExperimentConfig {
        trials: det_trials,
        workers: 2,
        ..base(Axis::Y, seed + 6)
    })?;
    list.record(
        "determinism-across-workers",
        d1.digest() == d2.digest() && d1.values() == d2.values(),
        json!({
            "digest_w1": format!("{:016x}", d1.digest()),
            "digest_w2": format!("{:016x}", d2.digest()),
        }),
    );

    // Q(x) + Q(-x) = 1 across the working range.
    let mut max_refl: f64 = 0.0;
    let mut x = -8.0;
    while x <= 8.0 {
        max_refl = max_refl.max((gauss_q(x)? + gauss_q(-x)? - 1.0).abs());
        x += 0.25;
    }
    list.record(
        "tail-function-reflection",
        max_refl <= 1e-12,
        json!({ "max_deviation": max_refl }),
    );

    // Normalized Grams have unit trace and a nonnegative spectrum.
    let mut max_trace_dev: f64 = 0.0;
    for rep in 0..50u64 {
        let geom = ArrayGeometry::new(7, resolved.kd, Axis::Y)?;
        let law = AngleDistribution::default_for_axis(Axis::Y);
        let draw = sample_angles(seed + 300 + rep, 5, &law)?;
        let w = gram_normalized(&build_channel(&geom, &draw)?);
        max_trace_dev = max_trace_dev.max((trace_power(&w, 1)? - 1.0).abs());
        spectrum(&w)?;
    }
    list.record(
        "gram-unit-trace",
        max_trace_dev <= 1e-10,
        json!({ "max_deviation": max_trace_dev }),
    );

    let all_pass = list.all_pass;
    let mut doc = Map::new();
    doc.insert("power".into(), json!(if low_power { "LOW-POWER" } else { "FULL" }));
    doc.insert("trials".into(), json!(trials));
    doc.insert("checks".into(), Value::Array(list.checks));
    doc.insert("all_pass".into(), json!(all_pass));

    let out = out_path(args, "verify.json");
    write_json(&out, &Value::Object(doc))?;
    report.record_output(&out);
    report.write(&out)?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Check("verification failed: see the report for details".into()))
    }
}
