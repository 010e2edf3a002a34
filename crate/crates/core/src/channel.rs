//! Random line-of-sight channel realizations: satellite direction draws, the
//! Vandermonde channel matrix H, the normalized Gram matrix W = H^H H /
//! (n_R n_T), its spectrum, trace powers, and instantaneous capacity.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::array_geometry::{direction_cosine, steering_vector, ArrayGeometry, Axis, Direction};
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Law of the polar angle theta for one satellite direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaLaw {
    /// theta ~ Uniform[0, pi].
    UniformZeroPi,
    /// theta ~ Uniform[0, pi/2].
    UniformZeroHalfPi,
    /// theta = arccos(psi) with psi = cos^2(u/2), u ~ Uniform[0, pi]: the
    /// direction cosine follows the arcsine law on [0, 1]. This is the law
    /// whose characteristic function E[e^{j z cos theta}] has modulus
    /// |J0(z/2)|, matching the z-axis Bessel kernels of `moments`.
    ArcsineDirectionCosine,
}

/// Law of the azimuth angle phi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiLaw {
    /// phi ~ Uniform[0, 2 pi].
    UniformZeroTwoPi,
}

/// Joint i.i.d. angular law for satellite directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleDistribution {
    pub theta_law: ThetaLaw,
    pub phi_law: PhiLaw,
}

impl AngleDistribution {
    /// The law under which the analytic Bessel-series moments for the given
    /// array axis are exact: for Y, E[e^{j z sin(theta) sin(phi)}] = J0(z/2)^2
    /// under theta ~ U[0, pi]; for Z, E[e^{j z cos(theta)}] = e^{jz/2} J0(z/2)
    /// under the arcsine direction-cosine law.
    pub fn default_for_axis(axis: Axis) -> Self {
        match axis {
            Axis::Y => AngleDistribution {
                theta_law: ThetaLaw::UniformZeroPi,
                phi_law: PhiLaw::UniformZeroTwoPi,
            },
            Axis::Z => AngleDistribution {
                theta_law: ThetaLaw::ArcsineDirectionCosine,
                phi_law: PhiLaw::UniformZeroTwoPi,
            },
        }
    }
}

/// One realization of n_T satellite directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleDraw {
    pub directions: Vec<Direction>,
}

impl AngleDraw {
    pub fn n_t(&self) -> usize {
        self.directions.len()
    }
}

/// Draw n_T i.i.d. directions from an explicit RNG.
pub fn draw_directions(
    rng: &mut impl Rng,
    n_t: usize,
    law: &AngleDistribution,
) -> Result<AngleDraw> {
    if n_t == 0 {
        return Err(Error::invalid("n_T must be >= 1"));
    }
    let mut directions = Vec::with_capacity(n_t);
    for _ in 0..n_t {
        let theta = match law.theta_law {
            ThetaLaw::UniformZeroPi => rng.gen::<f64>() * std::f64::consts::PI,
            ThetaLaw::UniformZeroHalfPi => rng.gen::<f64>() * std::f64::consts::FRAC_PI_2,
            ThetaLaw::ArcsineDirectionCosine => {
                let u = rng.gen::<f64>() * std::f64::consts::PI;
                let psi = 0.5 * (1.0 + u.cos());
                psi.clamp(0.0, 1.0).acos()
            }
        };
        let phi = match law.phi_law {
            PhiLaw::UniformZeroTwoPi => rng.gen::<f64>() * std::f64::consts::TAU,
        };
        directions.push(Direction { theta, phi });
    }
    Ok(AngleDraw { directions })
}

/// Draw n_T i.i.d. directions from a fresh deterministic RNG.
pub fn sample_angles(rng_seed: u64, n_t: usize, law: &AngleDistribution) -> Result<AngleDraw> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    draw_directions(&mut rng, n_t, law)
}

/// LoS channel matrix: n_R x n_T, column i the steering vector of
/// direction i. Every entry has unit modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    mat: CMat,
}

impl ChannelMatrix {
    pub fn n_r(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn n_t(&self) -> usize {
        self.mat.n_cols()
    }

    pub fn entry(&self, m: usize, i: usize) -> Complex64 {
        self.mat.get(m, i)
    }
}

/// Build H from a geometry and a direction draw: H[m, i] = e^{j m kd psi_i}.
pub fn build_channel(geom: &ArrayGeometry, draw: &AngleDraw) -> Result<ChannelMatrix> {
    let n_r = geom.n_elements();
    let n_t = draw.n_t();
    let mut mat = CMat::zeros(n_r, n_t);
    for (i, dir) in draw.directions.iter().enumerate() {
        let psi = direction_cosine(geom, dir);
        let col = steering_vector(geom, psi)?;
        for (m, v) in col.into_iter().enumerate() {
            mat.set(m, i, v);
        }
    }
    Ok(ChannelMatrix { mat })
}

/// Normalized Gram matrix W = H^H H / (n_R n_T): Hermitian PSD with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    mat: CMat,
}

impl GramMatrix {
    pub fn n_t(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn as_cmat(&self) -> &CMat {
        &self.mat
    }

    /// Wrap an externally built matrix, enforcing the Hermitian and
    /// unit-trace invariants.
    pub fn from_cmat(mat: CMat) -> Result<Self> {
        if mat.n_rows() != mat.n_cols() || mat.n_rows() == 0 {
            return Err(Error::invalid("Gram matrix must be square and nonempty"));
        }
        let dev = mat.max_hermitian_deviation();
        if dev > crate::linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("Gram trace must be 1, got {}", tr.re)));
        }
        Ok(GramMatrix { mat })
    }
}

/// W = H^H H / (n_R n_T). The diagonal of H^H H is n_R for unit-modulus
/// columns, so this is the unique scalar normalization with Trace(W) = 1.
pub fn gram_normalized(h: &ChannelMatrix) -> GramMatrix {
    let scale = 1.0 / (h.n_r() as f64 * h.n_t() as f64);
    GramMatrix { mat: h.mat.scaled_gram(scale) }
}

/// Eigenvalues clamped to zero when they exceed this rounding allowance
/// below zero; anything more negative is reported as an error.
const EIGENVALUE_CLAMP: f64 = 1e-10;

/// Eigenvalues of W, sorted descending, with tiny negative rounding
/// artifacts clamped to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

/// Spectrum of a Gram matrix. The eigenvalues are real, descending, within
/// [0, 1], and sum to Trace(W) = 1.
pub fn spectrum(w: &GramMatrix) -> Result<Spectrum> {
    let mut ev = w.mat.hermitian_eigenvalues()?;
    for l in ev.iter_mut() {
        if *l < 0.0 {
            if *l < -EIGENVALUE_CLAMP {
                return Err(Error::invalid(format!(
                    "eigenvalue {l} below PSD tolerance -{EIGENVALUE_CLAMP}"
                )));
            }
            *l = 0.0;
        }
    }
    let sum: f64 = ev.iter().sum();
    if (sum - 1.0).abs() > 1e-8 {
        return Err(Error::invalid(format!("eigenvalue sum {sum} deviates from unit trace")));
    }
    Ok(Spectrum { eigenvalues: ev })
}

/// Trace(W^k) for k in {1, 2, 3} by direct entry-product accumulation of the
/// matrix powers (no eigendecomposition).
pub fn trace_power(w: &GramMatrix, k: u32) -> Result<f64> {
    let n = w.n_t();
    match k {
        1 => Ok(w.mat.trace().re),
        2 => {
            // Sum of the diagonal of W*W.
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += (w.mat.get(i, j) * w.mat.get(j, i)).re;
                }
            }
            Ok(acc)
        }
        3 => {
            let w2 = w.mat.mul(&w.mat)?;
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += (w2.get(i, j) * w.mat.get(j, i)).re;
                }
            }
            Ok(acc)
        }
        _ => Err(Error::invalid(format!("trace_power supports k in {{1,2,3}}, got {k}"))),
    }
}

/// Instantaneous capacity C = sum_i log2(1 + snr * lambda_i) in bit/s/Hz,
/// for linear snr >= 0.
pub fn capacity(spec: &Spectrum, snr: f64) -> Result<f64> {
    if !snr.is_finite() {
        return Err(Error::NonFiniteInput { context: "capacity snr" });
    }
    if snr < 0.0 {
        return Err(Error::invalid(format!("snr must be >= 0, got {snr}")));
    }
    let mut c = 0.0;
    for &l in &spec.eigenvalues {
        c += (snr * l).ln_1p();
    }
    Ok(c / std::f64::consts::LN_2)
}
