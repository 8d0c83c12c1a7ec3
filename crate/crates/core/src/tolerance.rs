//! Numerical tolerances.
//!
//! Defaults sit roughly one order of magnitude above the rounding error
//! accumulated by dense double-precision arithmetic at dimensions up to 64.
//! Every tolerance can be overridden per call through [`Tolerances`].

/// Maximum entrywise deviation `|M - M^dagger|` accepted for hermitian input.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum `|tr(rho) - 1|` accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_SLACK: f64 = 1e-10;
/// Largest imaginary part tolerated in traces that must be real.
pub const IMAG_TOL: f64 = 1e-10;
/// Most negative raw variance that is clamped to zero instead of rejected.
pub const VARIANCE_CLAMP: f64 = 1e-10;
/// Default gap below which the uncertainty bound counts as reached.
pub const SATURATION_TOL: f64 = 1e-9;
/// Default `1 - purity` below which a state counts as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Bundle of tolerances used by validation and the uncertainty functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub psd_slack: f64,
    pub imag: f64,
    pub variance_clamp: f64,
    pub saturation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: HERMITICITY_TOL,
            trace: TRACE_TOL,
            psd_slack: PSD_SLACK,
            imag: IMAG_TOL,
            variance_clamp: VARIANCE_CLAMP,
            saturation: SATURATION_TOL,
        }
    }
}
