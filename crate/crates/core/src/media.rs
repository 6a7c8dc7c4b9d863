//! Drude-type metamaterial response and the TM surface mode bound to a
//! dielectric / metamaterial interface.
//!
//! All frequencies are angular (s⁻¹) and all wavevectors are in m⁻¹.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::numerics::{self, complex_sqrt_branch, Bracket, BranchRule, RootOptions};

/// Name of the shipped default parameter set.
pub const PAPER_PRESET: &str = "paper-2012";

/// Bracket searched for the zero-loss frequency of the default preset, s⁻¹.
pub const PAPER_ZERO_LOSS_BRACKET: (f64, f64) = (3e14, 6e14);

const DEGENERACY_REL: f64 = 1e-12;

/// ε(ω) = ε_∞ − ω_e²/(ω(ω + iγ_e)) and the same form for μ(ω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeMedium {
    pub eps_inf: f64,
    pub mu_inf: f64,
    pub omega_e: f64,
    pub omega_m: f64,
    pub gamma_e: f64,
    pub gamma_m: f64,
}

impl DrudeMedium {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 6] = [
            ("eps_inf", self.eps_inf, self.eps_inf > 0.0, "must be > 0"),
            ("mu_inf", self.mu_inf, self.mu_inf > 0.0, "must be > 0"),
            ("omega_e", self.omega_e, self.omega_e > 0.0, "must be > 0"),
            ("omega_m", self.omega_m, self.omega_m >= 0.0, "must be >= 0"),
            ("gamma_e", self.gamma_e, self.gamma_e >= 0.0, "must be >= 0"),
            ("gamma_m", self.gamma_m, self.gamma_m >= 0.0, "must be >= 0"),
        ];
        for (name, value, ok, constraint) in checks {
            if !ok || !value.is_finite() {
                return Err(Error::BadMaterial { name, value, constraint });
            }
        }
        Ok(())
    }

    /// Same medium with both damping rates set to zero.
    pub fn lossless(mut self) -> Self {
        self.gamma_e = 0.0;
        self.gamma_m = 0.0;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dielectric {
    pub eps1: f64,
    pub mu1: f64,
}

impl Dielectric {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("eps1", self.eps1), ("mu1", self.mu1)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::BadMaterial { name, value, constraint: "must be > 0" });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub dielectric: Dielectric,
    pub metamaterial: DrudeMedium,
}

impl Interface {
    /// ε₁ = 1.3, μ₁ = 1 against an Ag-like electric response with a Drude
    /// magnetic response (ω_m = 10¹⁵ s⁻¹, γ_m = 10¹² s⁻¹, ε_∞ = μ_∞ = 5).
    pub fn paper_2012() -> Self {
        Interface {
            dielectric: Dielectric { eps1: 1.3, mu1: 1.0 },
            metamaterial: DrudeMedium {
                eps_inf: 5.0,
                mu_inf: 5.0,
                omega_e: 1.37e16,
                omega_m: 1e15,
                gamma_e: 2.73e13,
                gamma_m: 1e12,
            },
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            PAPER_PRESET => Some(Self::paper_2012()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dielectric.validate()?;
        self.metamaterial.validate()
    }
}

/// Everything known about the surface mode at one frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMode {
    pub omega: f64,
    pub k: Complex64,
    pub k_perp: Complex64,
    /// Confinement length 1/Re k⊥, m.
    pub xi: f64,
    pub v_g: Option<f64>,
    pub valid: bool,
    pub diagnostic: Option<String>,
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::BadFrequency(omega))
    }
}

fn drude(background: f64, plasma: f64, damping: f64, omega: f64) -> Complex64 {
    let denom = Complex64::new(omega * omega, omega * damping);
    Complex64::new(background, 0.0) - plasma * plasma / denom
}

pub fn permittivity(m: &DrudeMedium, omega: f64) -> Result<Complex64> {
    check_frequency(omega)?;
    Ok(drude(m.eps_inf, m.omega_e, m.gamma_e, omega))
}

pub fn permeability(m: &DrudeMedium, omega: f64) -> Result<Complex64> {
    check_frequency(omega)?;
    Ok(drude(m.mu_inf, m.omega_m, m.gamma_m, omega))
}

/// (cK/ω)², the dimensionless radicand of the TM dispersion relation.
pub fn dispersion_radicand(i: &Interface, omega: f64) -> Result<Complex64> {
    let eps2 = permittivity(&i.metamaterial, omega)?;
    let mu2 = permeability(&i.metamaterial, omega)?;
    let Dielectric { eps1, mu1 } = i.dielectric;
    let denom = eps2 * eps2 - eps1 * eps1;
    if denom.norm() < DEGENERACY_REL * eps1 * eps1 {
        return Err(Error::DegenerateDenominator { omega });
    }
    Ok(eps1 * eps2 * (eps2 * mu1 - eps1 * mu2) / denom)
}

/// Complex propagation constant K(ω) of the TM surface mode, Re K ≥ 0.
pub fn surface_wavevector(i: &Interface, omega: f64) -> Result<Complex64> {
    let radicand = dispersion_radicand(i, omega)?;
    Ok(omega / C * complex_sqrt_branch(radicand, BranchRule::NonnegRealPart))
}

/// k⊥ = sqrt(K² − ω²ε₁μ₁/c²), Re k⊥ ≥ 0 so the field decays into the dielectric.
pub fn transverse_wavevector(i: &Interface, omega: f64) -> Result<Complex64> {
    let k = surface_wavevector(i, omega)?;
    let k0 = omega / C;
    let light_line = k0 * k0 * i.dielectric.eps1 * i.dielectric.mu1;
    Ok(complex_sqrt_branch(k * k - light_line, BranchRule::NonnegRealPart))
}

pub fn confinement(i: &Interface, omega: f64) -> Result<f64> {
    let k_perp = transverse_wavevector(i, omega)?;
    if k_perp.re <= 0.0 {
        return Err(Error::Unconfined { omega, re_k_perp: k_perp.re });
    }
    Ok(1.0 / k_perp.re)
}

/// υ_g = (d Re K/dω)⁻¹ from a central difference.
///
/// Fails with `BadDispersion` if the slope is not positive, or the two
/// one-sided slopes disagree in sign (a branch jump inside the stencil).
pub fn group_velocity(i: &Interface, omega: f64) -> Result<f64> {
    group_velocity_with_step(i, omega, numerics::DEFAULT_REL_STEP)
}

pub fn group_velocity_with_step(i: &Interface, omega: f64, rel_step: f64) -> Result<f64> {
    check_frequency(omega)?;
    let re_k = |w: f64| surface_wavevector(i, w).map(|k| k.re).unwrap_or(f64::NAN);
    let bad = |reason: String| Error::BadDispersion { omega, reason };

    let slope = numerics::central_derivative(re_k, omega, rel_step)
        .map_err(|e| bad(format!("stencil evaluation failed: {e}")))?;
    if !(slope > 0.0) {
        return Err(bad(format!("d Re K/d omega = {slope} is not positive")));
    }

    let h = rel_step * omega.abs().max(1.0);
    let (left, mid, right) = (re_k(omega - h), re_k(omega), re_k(omega + h));
    if !mid.is_finite() {
        return Err(bad("Re K not finite at the stencil centre".into()));
    }
    let (slope_l, slope_r) = (mid - left, right - mid);
    if slope_l.signum() != slope_r.signum() {
        return Err(bad("one-sided slopes disagree (branch jump inside the stencil)".into()));
    }
    Ok(1.0 / slope)
}

/// Locates ω₀ where Im K(ω) changes sign.
pub fn find_zero_loss(i: &Interface, bracket: Bracket) -> Result<f64> {
    find_zero_loss_with(i, bracket, RootOptions::for_bracket(&bracket)).map(|r| r.x)
}

pub fn find_zero_loss_with(i: &Interface, bracket: Bracket, opts: RootOptions) -> Result<numerics::RootResult> {
    let loss = |w: f64| surface_wavevector(i, w).map(|k| k.im).unwrap_or(f64::NAN);
    let (f_lo, f_hi) = (loss(bracket.lo), loss(bracket.hi));
    // Identically lossless ends are not a crossing.
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NoSignChange { lo: bracket.lo, hi: bracket.hi, f_lo, f_hi });
    }
    numerics::find_root(loss, bracket, opts.tol_x, opts.tol_f, opts.max_iter)
}

pub fn mode_report(i: &Interface, omega: f64) -> SurfaceMode {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut mode = SurfaceMode { omega, k: nan, k_perp: nan, xi: f64::NAN, v_g: None, valid: false, diagnostic: None };
    let fill = |mode: &mut SurfaceMode| -> Result<()> {
        i.validate()?;
        mode.k = surface_wavevector(i, omega)?;
        mode.k_perp = transverse_wavevector(i, omega)?;
        mode.xi = confinement(i, omega)?;
        mode.v_g = Some(group_velocity(i, omega)?);
        Ok(())
    };
    match fill(&mut mode) {
        Ok(()) => mode.valid = true,
        Err(e) => mode.diagnostic = Some(format!("{}: {e}", e.kind())),
    }
    mode
}
