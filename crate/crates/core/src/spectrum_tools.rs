//! Characteristic-polynomial machinery built from trace power sums.
//!
//! A Hermitian matrix's characteristic polynomial is determined by the
//! traces of its first n powers through the Newton-identity recurrence.
//! Root-finding on that polynomial gives an eigenvalue oracle that shares
//! no code with the Householder/QL eigensolver, which is exactly what makes
//! it useful as a cross-check.

use crate::channel::Spectrum;
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Trace power sums T_1..T_n = Tr A, Tr A^2, ..., Tr A^n.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSequence {
    traces: Vec<f64>,
}

impl TraceSequence {
    pub fn new(traces: Vec<f64>) -> Result<Self> {
        if traces.is_empty() {
            return Err(Error::invalid("trace sequence must contain at least T_1"));
        }
        if traces.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFiniteInput { context: "TraceSequence" });
        }
        Ok(TraceSequence { traces })
    }

    pub fn traces(&self) -> &[f64] {
        &self.traces
    }

    /// Matrix order n implied by the sequence length.
    pub fn order(&self) -> usize {
        self.traces.len()
    }
}

/// Tr A^k for k = 1..n of a square matrix, by repeated multiplication.
pub fn matrix_trace_sequence(a: &CMat) -> Result<TraceSequence> {
    if a.n_rows() != a.n_cols() {
        return Err(Error::invalid(format!(
            "trace sequence requires a square matrix, got {}x{}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    let n = a.n_rows();
    if n == 0 {
        return Err(Error::invalid("trace sequence requires n >= 1"));
    }
    let mut traces = Vec::with_capacity(n);
    let mut power = a.clone();
    traces.push(power.trace().re);
    for _ in 1..n {
        power = power.mul(a)?;
        traces.push(power.trace().re);
    }
    TraceSequence::new(traces)
}

/// Characteristic polynomial P(lambda) = b_0 lambda^n + b_1 lambda^{n-1}
/// + ... + b_n in degree-descending coefficients, with b_0 = (-1)^n.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coefficients: Vec<f64>,
}

impl CharPoly {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::invalid("characteristic polynomial needs degree >= 1"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput { context: "CharPoly" });
        }
        let n = coefficients.len() - 1;
        let lead = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        if coefficients[0] != lead {
            return Err(Error::invalid(format!(
                "leading coefficient must be (-1)^n = {lead}, got {}",
                coefficients[0]
            )));
        }
        Ok(CharPoly { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation of P(lambda).
    pub fn eval(&self, lambda: f64) -> f64 {
        eval_poly(&self.coefficients, lambda)
    }
}

/// Newton-identity recurrence from trace power sums:
/// b_0 = (-1)^n, b_k = -(1/k) (b_{k-1} T_1 + b_{k-2} T_2 + ... + b_0 T_k).
pub fn char_poly_from_traces(t: &TraceSequence) -> Result<CharPoly> {
    let n = t.order();
    let traces = t.traces();
    let mut b = Vec::with_capacity(n + 1);
    b.push(if n.is_multiple_of(2) { 1.0 } else { -1.0 });
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += b[k - j] * traces[j - 1];
        }
        b.push(-acc / k as f64);
    }
    CharPoly::new(b)
}

/// Power sums of a spectrum: [sum lambda_i, sum lambda_i^2, ...,
/// sum lambda_i^{k_max}].
pub fn power_sums(spec: &Spectrum, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be >= 1"));
    }
    let mut sums = vec![0.0; k_max];
    for &l in &spec.eigenvalues {
        let mut p = 1.0;
        for s in sums.iter_mut() {
            p *= l;
            *s += p;
        }
    }
    Ok(sums)
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0_f64;
    for &ck in c {
        acc = acc.mul_add(x, ck);
    }
    acc
}

/// Magnitude of the largest Horner term; the natural scale for deciding
/// whether a residual is "zero" at x.
fn eval_scale(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &ck in c {
        acc = acc * x.abs() + ck.abs();
    }
    acc.max(f64::MIN_POSITIVE)
}

fn derivative_poly(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    (0..n).map(|i| c[i] * (n - i) as f64).collect()
}

/// All roots lie within the Cauchy bound 1 + max |c_i / c_0|.
fn cauchy_bound(c: &[f64]) -> f64 {
    let lead = c[0].abs();
    let tail = c[1..].iter().fold(0.0_f64, |m, ck| m.max(ck.abs()));
    1.0 + tail / lead
}

/// Bisection to floating-point resolution; the bracket must change sign.
fn bisect(c: &[f64], mut a: f64, mut fa: f64, mut b: f64) -> f64 {
    loop {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            return mid;
        }
        let fm = eval_poly(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fa > 0.0) != (fm > 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
}

/// Number of consecutive derivatives of P vanishing at x, starting from P
/// itself: the multiplicity of x as a root (0 if x is not a root).
fn local_multiplicity(c: &[f64], x: f64) -> usize {
    let mut d = c.to_vec();
    let mut m = 0;
    while d.len() > 1 {
        if eval_poly(&d, x).abs() > 1e-10 * eval_scale(&d, x) {
            break;
        }
        m += 1;
        d = derivative_poly(&d);
    }
    m
}

/// Ascending real roots of a polynomial whose roots are all real, found by
/// recursive derivative interlacing: the critical points of P partition the
/// line into intervals holding at most one root each, so every simple root
/// is a bisection away; roots sitting exactly on a critical point are
/// detected by residual and counted with their derivative multiplicity.
fn real_roots_interlaced(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    if n == 1 {
        return vec![-c[1] / c[0]];
    }
    let bound = cauchy_bound(c);
    let mut pts = vec![-bound];
    pts.extend(real_roots_interlaced(&derivative_poly(c)).into_iter().filter(|x| x.abs() < bound));
    pts.push(bound);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut roots = Vec::new();
    for bp in &pts[1..pts.len() - 1] {
        let m = local_multiplicity(c, *bp);
        for _ in 0..m {
            roots.push(*bp);
        }
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fa = eval_poly(c, a);
        let fb = eval_poly(c, b);
        // Endpoint roots were already claimed by the multiplicity pass.
        if fa != 0.0 && fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect(c, a, fa, b));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots of a characteristic polynomial of a Hermitian matrix, sorted
/// descending to match the eigensolver's convention. Restricted to n <= 8:
/// monomial-basis roots lose accuracy quickly with degree, and the oracle
/// role never needs more.
pub fn char_poly_roots(p: &CharPoly) -> Result<Vec<f64>> {
    let n = p.degree();
    if n > 8 {
        return Err(Error::invalid(format!("root extraction is restricted to n <= 8, got {n}")));
    }
    let mut roots = real_roots_interlaced(p.coefficients());
    if roots.len() != n {
        return Err(Error::DegenerateConfiguration {
            context: format!(
                "found {} real roots for a degree-{n} spectrum; \
                 root multiplicities exceed the solver's resolution",
                roots.len()
            ),
        });
    }
    roots.reverse();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_sequence_validates() {
        assert!(TraceSequence::new(vec![]).is_err());
        assert!(TraceSequence::new(vec![f64::NAN]).is_err());
        assert_eq!(TraceSequence::new(vec![3.0, 5.0]).unwrap().order(), 2);
    }

    #[test]
    fn char_poly_validates_leading_coefficient() {
        assert!(CharPoly::new(vec![1.0, -3.0, 2.0]).is_ok());
        assert!(CharPoly::new(vec![-1.0, -3.0, 2.0]).is_err());
        assert!(CharPoly::new(vec![1.0]).is_err());
    }

    #[test]
    fn newton_recurrence_small_cases() {
        let t = TraceSequence::new(vec![3.0, 3.0, 3.0]).unwrap();
        let p = char_poly_from_traces(&t).unwrap();
        assert_eq!(p.coefficients(), &[-1.0, 3.0, -3.0, 1.0]);

        let t = TraceSequence::new(vec![3.0, 5.0]).unwrap();
        let p = char_poly_from_traces(&t).unwrap();
        assert_eq!(p.coefficients(), &[1.0, -3.0, 2.0]);
    }

    #[test]
    fn roots_of_known_polynomials() {
        let p = CharPoly::new(vec![1.0, -3.0, 2.0]).unwrap();
        let roots = char_poly_roots(&p).unwrap();
        assert!((roots[0] - 2.0).abs() < 1e-12);
        assert!((roots[1] - 1.0).abs() < 1e-12);

        // Triple root via the multiplicity pass.
        let t = TraceSequence::new(vec![3.0, 3.0, 3.0]).unwrap();
        let p = char_poly_from_traces(&t).unwrap();
        let roots = char_poly_roots(&p).unwrap();
        assert_eq!(roots, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn root_sum_matches_first_trace() {
        let t = TraceSequence::new(vec![2.5, 2.13, 1.901, 1.7]).unwrap();
        let p = char_poly_from_traces(&t).unwrap();
        assert!((-p.coefficients()[1] / p.coefficients()[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn large_degree_rejected_for_roots() {
        let t = TraceSequence::new(vec![1.0; 9]).unwrap();
        let p = char_poly_from_traces(&t).unwrap();
        assert!(char_poly_roots(&p).is_err());
    }

    #[test]
    fn power_sums_of_simple_spectra() {
        let s = Spectrum { eigenvalues: vec![1.0, 0.0, 0.0] };
        assert_eq!(power_sums(&s, 3).unwrap(), vec![1.0, 1.0, 1.0]);
        let s = Spectrum { eigenvalues: vec![0.5, 0.5] };
        assert_eq!(power_sums(&s, 2).unwrap(), vec![1.0, 0.5]);
        assert!(power_sums(&s, 0).is_err());
    }
}
