//! Uniform linear array geometry: direction cosines, steering vectors, and
//! the array factor.
//!
//! The array lies along the y or z axis with `n_elements` isotropic elements
//! at spacing d; only the product kd (wavenumber times spacing, radians per
//! unit direction cosine) enters any formula, so k and d are never stored
//! separately. kd = pi corresponds to half-wavelength spacing.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Axis the receive array lies along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Uniform linear receive array description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    n_elements: usize,
    kd: f64,
    axis: Axis,
}

impl ArrayGeometry {
    /// Requires n_elements >= 1 and finite kd > 0.
    pub fn new(n_elements: usize, kd: f64, axis: Axis) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::invalid("n_elements must be >= 1"));
        }
        if !kd.is_finite() {
            return Err(Error::NonFiniteInput { context: "ArrayGeometry kd" });
        }
        if kd <= 0.0 {
            return Err(Error::invalid(format!("kd must be > 0, got {kd}")));
        }
        Ok(ArrayGeometry { n_elements, kd, axis })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn kd(&self) -> f64 {
        self.kd
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }
}

/// Arrival direction in spherical coordinates (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFiniteInput { context: "Direction angles" });
        }
        Ok(Direction { theta, phi })
    }
}

/// Direction cosine psi: the projection of the unit arrival direction
/// sin(theta)cos(phi) x + sin(theta)sin(phi) y + cos(theta) z
/// onto the array axis. Always in [-1, 1].
pub fn direction_cosine(geom: &ArrayGeometry, dir: &Direction) -> f64 {
    let psi = match geom.axis {
        Axis::Y => dir.theta.sin() * dir.phi.sin(),
        Axis::Z => dir.theta.cos(),
    };
    psi.clamp(-1.0, 1.0)
}

/// Unit-weight steering vector: entry m is exp(j m kd psi), m = 0..n_elements-1.
pub fn steering_vector(geom: &ArrayGeometry, psi: f64) -> Result<Vec<Complex64>> {
    if !psi.is_finite() {
        return Err(Error::NonFiniteInput { context: "steering_vector psi" });
    }
    if psi.abs() > 1.0 {
        return Err(Error::invalid(format!("|psi| must be <= 1, got {psi}")));
    }
    let step = geom.kd * psi;
    Ok((0..geom.n_elements).map(|m| Complex64::from_polar(1.0, m as f64 * step)).collect())
}

/// Weighted array factor: sum_m I_m exp(j m kd psi(dir)).
pub fn array_factor(
    geom: &ArrayGeometry,
    weights: &[Complex64],
    dir: &Direction,
) -> Result<Complex64> {
    if weights.len() != geom.n_elements {
        return Err(Error::invalid(format!(
            "weights length {} != n_elements {}",
            weights.len(),
            geom.n_elements
        )));
    }
    let step = geom.kd * direction_cosine(geom, dir);
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, w) in weights.iter().enumerate() {
        acc += w * Complex64::from_polar(1.0, m as f64 * step);
    }
    Ok(acc)
}
