//! Capacity statistics and outage probability for pure line-of-sight MIMO
//! links between a cluster of transmitters and a uniform linear receive
//! array.
//!
//! The channel model is deterministic given the transmitter directions: each
//! transmitter contributes a unit-modulus steering column, randomness enters
//! only through the direction angles, and every capacity quantity is a
//! function of the normalized Gram matrix W = H^H H / (n_R n_T) with
//! Tr W = 1.
//!
//! The crate has three layers:
//!
//! * closed forms ([`moments`], [`outage`]): Bessel-series expectations of
//!   the trace moments of W and of the cosine-row statistics behind the
//!   Gaussian capacity approximation, plus the Gaussian outage machinery;
//! * simulation ([`montecarlo`]): a deterministic, parallel Monte Carlo
//!   harness producing capacity and statistic samples that every closed
//!   form is validated against;
//! * support ([`specfun`], [`array_geometry`], [`linalg`], [`channel`],
//!   [`spectrum_tools`]): J0/Q evaluation, array geometry, a Hermitian
//!   eigensolver, channel construction, and characteristic-polynomial
//!   cross-checks.
//!
//! Sign conventions worth keeping in mind: SNR is linear everywhere inside
//! the library (decibels are converted at the CLI boundary), and outage is
//! always P{C < r_th}.

pub mod array_geometry;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod montecarlo;
pub mod outage;
pub mod specfun;
pub mod spectrum_tools;

pub use array_geometry::{
    array_factor, direction_cosine, steering_vector, ArrayGeometry, Axis, Direction,
};
pub use channel::{
    build_channel, capacity, draw_directions, gram_normalized, sample_angles, spectrum,
    trace_power, AngleDistribution, AngleDraw, ChannelMatrix, GramMatrix, PhiLaw, Spectrum,
    ThetaLaw,
};
pub use error::{Error, Result};
pub use linalg::{CMat, HERMITIAN_TOL};
pub use moments::{
    correlation_cf, cov_f_cross, ef11, ef12, expected_trace2, expected_trace3, mu_omega,
    type_a_expectation, type_b_expectation, var_f1, var_f1nt, MomentConfig,
};
pub use montecarlo::{
    anderson_darling, capacity_stats_from_samples, empirical_outage, normality_check,
    run_capacity_mc, run_statistic_mc, synthetic_normal, trial_rng, ExperimentConfig, SampleSet,
    Statistic, RNG_IDENTIFIER,
};
pub use num_complex::Complex64;
pub use outage::{
    capacity_stats_taylor, mean_capacity_taylor, outage_curve, outage_gaussian,
    second_moment_capacity_taylor, CapacityStats, MomentSource, OutageMethod, OutagePoint,
    TraceMoments,
};
pub use specfun::{bessel_j0, gauss_q};
pub use spectrum_tools::{
    char_poly_from_traces, char_poly_roots, matrix_trace_sequence, power_sums, CharPoly,
    TraceSequence,
};
