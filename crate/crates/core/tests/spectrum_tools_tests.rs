//! Characteristic-polynomial machinery checked against independent
//! oracles: a cofactor determinant, the Hermitian eigensolver, and
//! direct matrix powers.

mod common;

use common::{random_hermitian, random_psd, seeded_rng};
use losmimo::{
    char_poly_from_traces, char_poly_roots, matrix_trace_sequence, power_sums, spectrum, CMat,
    Complex64, GramMatrix, TraceSequence,
};

/// det(M) by recursive cofactor expansion along the first row. Exponential
/// in n, used only as an oracle for n <= 5.
fn cofactor_det(m: &CMat) -> Complex64 {
    let n = m.n_rows();
    assert!(n <= 5, "cofactor oracle is for small matrices");
    if n == 1 {
        return m.get(0, 0);
    }
    let mut det = Complex64::new(0.0, 0.0);
    let mut sign = 1.0;
    for col in 0..n {
        let minor =
            CMat::from_fn(n - 1, n - 1, |i, j| m.get(i + 1, if j < col { j } else { j + 1 }));
        det += m.get(0, col) * cofactor_det(&minor) * sign;
        sign = -sign;
    }
    det
}

fn shifted(m: &CMat, lambda: f64) -> CMat {
    CMat::from_fn(m.n_rows(), m.n_cols(), |i, j| {
        let v = m.get(i, j);
        if i == j {
            v - lambda
        } else {
            v
        }
    })
}

/// Normalize an arbitrary PSD matrix to unit trace so it can be wrapped
/// as a GramMatrix.
fn unit_trace_psd(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> GramMatrix {
    let raw = random_psd(n, rng);
    let tr = raw.trace().re;
    let scaled = CMat::from_fn(n, n, |i, j| raw.get(i, j) / tr);
    GramMatrix::from_cmat(scaled).expect("normalized PSD matrix is a valid Gram matrix")
}

#[test]
fn characteristic_polynomial_matches_cofactor_determinant() {
    let mut rng = seeded_rng(11);
    for n in 2..=5 {
        for _ in 0..5 {
            let a = random_hermitian(n, &mut rng);
            let poly = char_poly_from_traces(&matrix_trace_sequence(&a).unwrap()).unwrap();
            for &lambda in &[-1.5, -0.3, 0.0, 0.42, 1.0, 2.75] {
                let det = cofactor_det(&shifted(&a, lambda));
                assert!(
                    det.im.abs() < 1e-9,
                    "Hermitian characteristic determinant should be real, got {det}"
                );
                let want = det.re;
                let got = poly.eval(lambda);
                let scale = want.abs().max(1.0);
                assert!(
                    (got - want).abs() <= 1e-9 * scale,
                    "n={n} lambda={lambda}: poly {got} vs det {want}"
                );
            }
        }
    }
}

#[test]
fn roots_round_trip_against_the_eigensolver() {
    let mut rng = seeded_rng(23);
    for n in 2..=8 {
        for rep in 0..6 {
            let w = unit_trace_psd(n, &mut rng);
            let ev = w.as_cmat().hermitian_eigenvalues().unwrap();
            let poly = char_poly_from_traces(&matrix_trace_sequence(w.as_cmat()).unwrap()).unwrap();
            let roots = char_poly_roots(&poly).unwrap();
            assert_eq!(roots.len(), n);
            for (r, l) in roots.iter().zip(&ev) {
                assert!((r - l).abs() <= 1e-6, "n={n} rep={rep}: root {r} vs eigenvalue {l}");
            }
        }
    }
}

#[test]
fn power_sums_match_repeated_matrix_products() {
    let mut rng = seeded_rng(37);
    for n in [2usize, 4, 6] {
        let w = unit_trace_psd(n, &mut rng);
        let spec = spectrum(&w).unwrap();
        let sums = power_sums(&spec, 4).unwrap();
        let mut acc = CMat::from_fn(n, n, |i, j| w.as_cmat().get(i, j));
        for (k, s) in sums.iter().enumerate() {
            let want = acc.trace().re;
            assert!((s - want).abs() <= 1e-9, "n={n} k={}: power sum {s} vs trace {want}", k + 1);
            acc = acc.mul(w.as_cmat()).unwrap();
        }
    }
}

#[test]
fn leading_coefficients_encode_the_trace() {
    let mut rng = seeded_rng(51);
    for n in 2..=6 {
        let a = random_hermitian(n, &mut rng);
        let t = matrix_trace_sequence(&a).unwrap();
        let t1 = t.traces()[0];
        let poly = char_poly_from_traces(&t).unwrap();
        let b = poly.coefficients();
        assert!(
            (-b[1] / b[0] - t1).abs() <= 1e-12,
            "n={n}: -b1/b0 = {} vs T1 = {t1}",
            -b[1] / b[0]
        );
    }
}

#[test]
fn rank_one_gram_yields_a_multiple_root_at_zero() {
    // W = u u^H with |u| = 1 has spectrum (1, 0, ..., 0); every trace
    // power is exactly 1 and the root finder must report the (n-1)-fold
    // zero without losing count.
    let n = 4;
    let u: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(0.5, 0.9 * k as f64 + 0.2)).collect();
    let w = CMat::from_fn(n, n, |i, j| u[i] * u[j].conj());
    let traces = matrix_trace_sequence(&w).unwrap();
    for t in traces.traces() {
        assert!((t - 1.0).abs() < 1e-14);
    }
    let roots = char_poly_roots(&char_poly_from_traces(&traces).unwrap()).unwrap();
    assert_eq!(roots.len(), n);
    assert!((roots[0] - 1.0).abs() <= 1e-9, "{roots:?}");
    for r in &roots[1..] {
        assert!(r.abs() <= 1e-9, "{roots:?}");
    }
}

#[test]
fn trace_sequences_validate_their_inputs() {
    assert!(TraceSequence::new(vec![]).is_err());
    assert!(TraceSequence::new(vec![1.0, f64::NAN]).is_err());
    let t = TraceSequence::new(vec![1.0, 0.5, 0.3]).unwrap();
    assert_eq!(t.order(), 3);
}
