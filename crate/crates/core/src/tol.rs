//! Named tolerances shared across the pipeline. Every knob has a default
//! that the test suite pins; the CLI exposes them as `--tol name=value`.

use serde::{Deserialize, Serialize};

use crate::error::{CdeError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Gradient-residual and Hessian-eigenvalue band for set membership.
    pub constraint: f64,
    /// |det J| below this counts as sitting on the singular locus.
    pub det_zero: f64,
    /// Width of the bisected event bracket in desingularized time.
    pub time_bracket: f64,
    /// Sup-norm of the adjugate field below which a state is an equilibrium.
    pub equilibrium: f64,
    /// Gradient sup-norm at which fast descent declares convergence.
    pub descent_grad: f64,
    /// Slack on positive semidefiniteness at a descent landing.
    pub psd: f64,
    /// Residual target for Newton polishing.
    pub newton: f64,
    /// Distance under which two candidate points are the same point.
    pub dedup: f64,
    /// Relative half-width of the zero band when classifying spectra.
    pub spectrum_zero: f64,
    /// Angle (radians) under which a drift vector counts as tangent.
    pub transversality_angle: f64,
    /// Size of the kick off the singular locus that seeds a jump descent.
    pub perturb: f64,
    /// Step for finite-difference linearizations.
    pub fd_step: f64,
    /// Relative band for the derivative-vanishing chains that decide stratum
    /// membership.
    pub stratum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constraint: 1e-9,
            det_zero: 1e-10,
            time_bracket: 1e-12,
            equilibrium: 1e-9,
            descent_grad: 1e-10,
            psd: 1e-8,
            newton: 1e-12,
            dedup: 1e-6,
            spectrum_zero: 1e-7,
            transversality_angle: 1e-3,
            perturb: 1e-6,
            fd_step: 1e-6,
            stratum: 1e-8,
        }
    }
}

impl Tolerances {
    pub const NAMES: &'static [&'static str] = &[
        "constraint",
        "det_zero",
        "time_bracket",
        "equilibrium",
        "descent_grad",
        "psd",
        "newton",
        "dedup",
        "spectrum_zero",
        "transversality_angle",
        "perturb",
        "fd_step",
        "stratum",
    ];

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(CdeError::Invalid(format!(
                "tolerance `{name}` must be finite and positive, got {value}"
            )));
        }
        match name {
            "constraint" => self.constraint = value,
            "det_zero" => self.det_zero = value,
            "time_bracket" => self.time_bracket = value,
            "equilibrium" => self.equilibrium = value,
            "descent_grad" => self.descent_grad = value,
            "psd" => self.psd = value,
            "newton" => self.newton = value,
            "dedup" => self.dedup = value,
            "spectrum_zero" => self.spectrum_zero = value,
            "transversality_angle" => self.transversality_angle = value,
            "perturb" => self.perturb = value,
            "fd_step" => self.fd_step = value,
            "stratum" => self.stratum = value,
            other => {
                return Err(CdeError::Invalid(format!(
                    "unknown tolerance `{other}` (known: {})",
                    Self::NAMES.join(", ")
                )))
            }
        }
        Ok(())
    }
}
