//! SI ↔ natural-unit conversion for a vortex launched by a diffraction
//! grating, using CODATA 2018 exact and recommended values.
//!
//! The natural length unit at field B is the magnetic length
//! ℓ_B = sqrt(ħ/(|e|B)); with B = 1 in scenario units, ρ_B = 2ℓ_B and a
//! momentum p maps to p ℓ_B/ħ.

use thiserror::Error;

pub const HBAR: f64 = 1.054571817e-34;
pub const PLANCK: f64 = 6.62607015e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
pub const ELECTRON_MASS: f64 = 9.1093837015e-31;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
}

/// Where the transverse momentum comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentumSource {
    /// Grating period d in metres; first order carries p = h/d.
    Grating(f64),
    /// Transverse momentum in kg·m/s.
    Momentum(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiReport {
    pub b_tesla: f64,
    pub grating_m: Option<f64>,
    pub p_c_si: f64,
    /// Orbit radius p_c/(|e|B).
    pub sigma_m: f64,
    /// |e|Bσ²/ħ.
    pub l_cyclo_hbar: f64,
    /// p_c²/2m.
    pub kinetic_energy_mev: f64,
    /// sqrt(4ħ/(|e|B)).
    pub rho_b_m: f64,
    /// Magnetic length ħ-unit of length at this field.
    pub length_unit_m: f64,
    /// p_c in scenario units (B = 1).
    pub p_c_natural: f64,
    pub sigma_natural: f64,
    /// p_c ρ_B/ħ, the kick in units of ħ/ρ_B.
    pub p_c_per_hbar_over_rho_b: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64, UnitsError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(UnitsError::NonPositiveInput { name, value })
    }
}

pub fn si_convert(b_tesla: f64, source: MomentumSource) -> Result<SiReport, UnitsError> {
    let b = positive("B", b_tesla)?;
    let (grating_m, p_c) = match source {
        MomentumSource::Grating(d) => {
            let d = positive("grating period", d)?;
            (Some(d), PLANCK / d)
        }
        MomentumSource::Momentum(p) => (None, positive("p_c", p)?),
    };
    let eb = ELEMENTARY_CHARGE * b;
    let sigma = p_c / eb;
    let length_unit = (HBAR / eb).sqrt();
    let rho_b = 2.0 * length_unit;
    Ok(SiReport {
        b_tesla: b,
        grating_m,
        p_c_si: p_c,
        sigma_m: sigma,
        l_cyclo_hbar: eb * sigma * sigma / HBAR,
        kinetic_energy_mev: p_c * p_c / (2.0 * ELECTRON_MASS) / ELEMENTARY_CHARGE * 1e3,
        rho_b_m: rho_b,
        length_unit_m: length_unit,
        p_c_natural: p_c * length_unit / HBAR,
        sigma_natural: sigma / length_unit,
        p_c_per_hbar_over_rho_b: p_c * rho_b / HBAR,
    })
}

/// Rebuilds (B in tesla, p_c in kg·m/s) from the length unit and the
/// natural-unit momentum.
pub fn from_natural(length_unit_m: f64, p_c_natural: f64) -> Result<(f64, f64), UnitsError> {
    let l = positive("length unit", length_unit_m)?;
    let p = positive("p_c", p_c_natural)?;
    Ok((HBAR / (ELEMENTARY_CHARGE * l * l), p * HBAR / l))
}

impl SiReport {
    /// `key = value` lines, SI first.
    pub fn to_text(&self) -> String {
        let mut out = format!("b_tesla = {:e}\n", self.b_tesla);
        if let Some(d) = self.grating_m {
            out += &format!("grating_m = {d:e}\n");
        }
        for (k, v) in [
            ("p_c_si", self.p_c_si),
            ("sigma_m", self.sigma_m),
            ("l_cyclo_hbar", self.l_cyclo_hbar),
            ("kinetic_energy_mev", self.kinetic_energy_mev),
            ("rho_b_m", self.rho_b_m),
            ("length_unit_m", self.length_unit_m),
            ("p_c_natural", self.p_c_natural),
            ("sigma_natural", self.sigma_natural),
            ("p_c_per_hbar_over_rho_b", self.p_c_per_hbar_over_rho_b),
        ] {
            out += &format!("{k} = {v:.10e}\n");
        }
        out
    }
}
