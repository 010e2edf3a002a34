//! Minimal dense complex linear algebra: a row-major matrix type and a
//! Hermitian eigenvalue solver (Householder tridiagonalization followed by
//! implicit-shift QL iteration, eigenvalues only).
//!
//! The solver targets the sizes this crate actually uses (n <= 256, with
//! n <= 64 in hot Monte Carlo loops); it trades generality for a compact,
//! allocation-light implementation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermitian deviation above this is treated as a caller error rather than
/// rounding noise.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat { n_rows, n_cols, data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols] }
    }

    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                data.push(f(i, j));
            }
        }
        CMat { n_rows, n_cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> Result<CMat> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::invalid(format!(
                "matrix product dimension mismatch: {}x{} * {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut out = CMat::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.n_cols..(k + 1) * rhs.n_cols];
                let dst = &mut out.data[i * rhs.n_cols..(i + 1) * rhs.n_cols];
                for (d, r) in dst.iter_mut().zip(row) {
                    *d += a * r;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.n_rows.min(self.n_cols);
        (0..n).map(|i| self.get(i, i)).sum()
    }

    /// scale * (self^H self): the Gram matrix of the columns. Exactly
    /// Hermitian by construction, with a real diagonal.
    pub fn scaled_gram(&self, scale: f64) -> CMat {
        let (m, n) = (self.n_rows, self.n_cols);
        // Adjoint rows are contiguous copies of the conjugated columns.
        let mut adj = Vec::with_capacity(n * m);
        for j in 0..n {
            for i in 0..m {
                adj.push(self.get(i, j).conj());
            }
        }
        let mut g = CMat::zeros(n, n);
        for i in 0..n {
            let ri = &adj[i * m..(i + 1) * m];
            let diag: f64 = ri.iter().map(|v| v.norm_sqr()).sum();
            g.set(i, i, Complex64::new(diag * scale, 0.0));
            for j in i + 1..n {
                let rj = &adj[j * m..(j + 1) * m];
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in ri.iter().zip(rj) {
                    acc += a * b.conj();
                }
                acc *= scale;
                g.set(i, j, acc);
                g.set(j, i, acc.conj());
            }
        }
        g
    }

    /// max_ij |A_ij - conj(A_ji)|.
    pub fn max_hermitian_deviation(&self) -> f64 {
        if self.n_rows != self.n_cols {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.n_rows {
            for j in i..self.n_cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Eigenvalues of a Hermitian matrix, sorted descending.
    ///
    /// Householder reduction to real-symmetric tridiagonal form (the
    /// off-diagonal phases are unitary-diagonal-similar to their moduli, so
    /// only moduli are kept), then implicit-shift QL on the tridiagonal.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n_rows;
        if n == 0 || self.n_cols != n {
            return Err(Error::invalid("eigenvalues require a nonempty square matrix"));
        }
        let dev = self.max_hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let (mut d, mut e) = tridiagonalize(self);
        // Shift couplings to the (i, i+1) convention used by the QL sweep.
        for i in 1..n {
            e[i - 1] = e[i];
        }
        e[n - 1] = 0.0;
        ql_implicit(&mut d, &mut e)?;
        d.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(d)
    }
}

/// Householder reduction of a Hermitian matrix to tridiagonal form,
/// eigenvalues-only variant: returns (diagonal, subdiagonal moduli) where
/// e[i] is the modulus of the coupling between rows i-1 and i (e[0] = 0).
fn tridiagonalize(a: &CMat) -> (Vec<f64>, Vec<f64>) {
    let n = a.n_rows;
    let mut m = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut q = vec![Complex64::new(0.0, 0.0); n];

    for i in (1..n).rev() {
        d[i] = m[i * n + i].re;
        // The similarity must annihilate column i (rows 0..i), so the
        // reflector is built from that column: the conjugate of row i.
        let mut scale = 0.0;
        for k in 0..i {
            let v = m[i * n + k];
            scale += v.re.abs() + v.im.abs();
        }
        if scale == 0.0 {
            e[i] = 0.0;
            continue;
        }
        let inv_scale = 1.0 / scale;
        let mut sigma = 0.0;
        for k in 0..i {
            let v = m[i * n + k].conj() * inv_scale;
            u[k] = v;
            sigma += v.norm_sqr();
        }
        let f = u[i - 1];
        let g = sigma.sqrt();
        let absf = f.norm();
        // Phase chosen so u_{i-1} = f + phase*g has no cancellation.
        let phase = if absf == 0.0 { Complex64::new(1.0, 0.0) } else { f * (1.0 / absf) };
        let h = sigma + absf * g;
        e[i] = scale * g;
        u[i - 1] = f + phase * g;

        // Rank-2 similarity update of the leading i x i block:
        // B <- B - q u^H - u q^H with p = B u / h, q = p - (u^H p / 2h) u.
        let inv_h = 1.0 / h;
        let mut uph = 0.0;
        for j in 0..i {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &m[j * n..j * n + i];
            for (b, uk) in row.iter().zip(&u[..i]) {
                acc += b * uk;
            }
            let pj = acc * inv_h;
            uph += (u[j].conj() * pj).re;
            q[j] = pj;
        }
        let kappa = 0.5 * uph * inv_h;
        for j in 0..i {
            q[j] -= kappa * u[j];
        }
        for j in 0..i {
            let uj = u[j];
            let qj = q[j];
            let row = &mut m[j * n..j * n + i];
            for ((b, uk), qk) in row.iter_mut().zip(&u[..i]).zip(&q[..i]) {
                *b -= qj * uk.conj() + uj * qk.conj();
            }
        }
    }
    d[0] = m[0].re;
    (d, e)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// d is the diagonal, e[i] couples d[i] and d[i+1] (e[n-1] ignored).
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigenNoConvergence { row: l, iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut pshift = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= pshift;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - pshift;
                r = (d[i] - g) * s + 2.0 * c * b;
                pshift = s * r;
                d[i + 1] = g + pshift;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= pshift;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
