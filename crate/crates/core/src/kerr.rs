//! Cross-Kerr coefficient of the atom-doped layer, the resulting mutual phase
//! shift φ = χωL/υ_g, and the frequency sweep behind the χ/φ curves.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{BOHR_RADIUS, EPS0, E_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::media::{self, Interface};
use crate::numerics::{self, Bracket, RootOptions};

/// Interaction length used throughout the default configuration, m.
pub const DEFAULT_LENGTH: f64 = 1e-3;

/// Ratio ω_π/ω₀ the shipped calibration is pinned to.
pub const CALIBRATION_RATIO: f64 = 1.24;

/// Field-normalization factor η that puts φ = π at 1.24·ω₀ for the
/// `paper-2012` interface, the ⁸⁷Rb layer, w = 2 μm, L_quant = L = 1 mm.
///
/// Reproduced by [`calibrate_eta`]; see the `shipped_calibration_is_current` test.
pub const SHIPPED_ETA: f64 = 1.138_713_762_066_77e-10;

/// Six-level-atom layer parameters entering the Kerr coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicLayer {
    /// Number density, m⁻³.
    pub n: f64,
    /// Layer thickness, m.
    pub z0: f64,
    /// Control-field Rabi frequency, rad/s.
    pub omega_c_rabi: f64,
    /// Detuning, rad/s.
    pub delta: f64,
    /// Dipole moments, C·m.
    pub d24: f64,
    pub d26: f64,
    /// Control-field wavenumber, m⁻¹.
    pub k_c: f64,
    pub lambda_transition: f64,
}

impl AtomicLayer {
    /// ⁸⁷Rb: n = 2×10¹⁴ cm⁻³, z₀ = 2 μm, Ω_c = 2π·1 MHz, Δ = 2π·1.4 MHz,
    /// |d₂₄| = |d₂₆| = 5ea₀, λ = 780 nm and k_c = 2π/λ.
    pub fn rb87() -> Self {
        let lambda = 780e-9;
        let dipole = 5.0 * E_CHARGE * BOHR_RADIUS;
        AtomicLayer {
            n: 2e20,
            z0: 2e-6,
            omega_c_rabi: 2.0 * PI * 1e6,
            delta: 2.0 * PI * 1.4e6,
            d24: dipole,
            d26: dipole,
            k_c: 2.0 * PI / lambda,
            lambda_transition: lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("n", self.n),
            ("z0", self.z0),
            ("omega_c_rabi", self.omega_c_rabi),
            ("delta", self.delta),
            ("d24", self.d24),
            ("d26", self.d26),
            ("k_c", self.k_c),
            ("lambda_transition", self.lambda_transition),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::BadAtomicParams { name, value });
            }
        }
        Ok(())
    }
}

/// Single-photon field normalization: mode area ξ(ω)·width, quantization
/// length, and the calibration factor η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldNormalization {
    pub width: f64,
    pub quant_length: f64,
    pub eta: f64,
}

impl Default for FieldNormalization {
    fn default() -> Self {
        FieldNormalization { width: 2e-6, quant_length: 1e-3, eta: 1.0 }
    }
}

impl FieldNormalization {
    pub fn shipped() -> Self {
        FieldNormalization { eta: SHIPPED_ETA, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("width", self.width), ("quant_length", self.quant_length), ("eta", self.eta)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::BadNormalization { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KerrPoint {
    pub omega: f64,
    pub k: Complex64,
    pub chi: f64,
    pub phi: f64,
    pub v_g: f64,
    pub xi: f64,
    pub valid: bool,
    pub diagnostic: Option<String>,
}

/// f[x] = e⁻ˣ sinh(x)/x = (1 − e⁻²ˣ)/(2x), with f[0] = 1.
pub fn geometry_factor(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::NegativeArgument(x));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    // -expm1(-2x) keeps full precision for small x.
    Ok(-(-2.0 * x).exp_m1() / (2.0 * x))
}

/// |E₀|² = η ħω / (2ε₀ε₁ ξ(ω) w L_quant), V²/m².
pub fn single_photon_intensity(mode: &media::SurfaceMode, eps1: f64, norm: &FieldNormalization) -> Result<f64> {
    norm.validate()?;
    if !mode.valid || !(mode.xi > 0.0) || !mode.xi.is_finite() {
        return Err(Error::Unconfined { omega: mode.omega, re_k_perp: mode.k_perp.re });
    }
    let area = mode.xi * norm.width;
    Ok(norm.eta * HBAR * mode.omega / (2.0 * EPS0 * eps1 * area * norm.quant_length))
}

struct KerrTerms {
    k: Complex64,
    chi: f64,
    v_g: f64,
    xi: f64,
}

fn kerr_terms(i: &Interface, layer: &AtomicLayer, norm: &FieldNormalization, omega: f64) -> Result<KerrTerms> {
    layer.validate()?;
    norm.validate()?;
    i.validate()?;
    let mode = media::SurfaceMode {
        omega,
        k: media::surface_wavevector(i, omega)?,
        k_perp: media::transverse_wavevector(i, omega)?,
        xi: media::confinement(i, omega)?,
        v_g: Some(media::group_velocity(i, omega)?),
        valid: true,
        diagnostic: None,
    };
    let v_g = mode.v_g.expect("set above");
    let intensity = single_photon_intensity(&mode, i.dielectric.eps1, norm)?;

    let k_probe = mode.k.re;
    let mismatch = (2.0 * k_probe - layer.k_c).abs() * layer.z0;
    let f = geometry_factor(mismatch)?;

    // Orientation average ⟨|d·E|²⟩ = |d|²|E|²/3 for each factor, grouped as
    // squared probe Rabi frequencies to stay well inside f64 range.
    let rabi_a_sq = layer.d24 * layer.d24 * intensity / (HBAR * HBAR) / 3.0;
    let rabi_b_sq = layer.d26 * layer.d26 * intensity / (HBAR * HBAR) / 3.0;
    let prefactor = 2.0 * PI * layer.n * layer.z0 * f;
    let chi = prefactor * rabi_a_sq * rabi_b_sq / (v_g * layer.omega_c_rabi * layer.omega_c_rabi * layer.delta);

    Ok(KerrTerms { k: mode.k, chi, v_g, xi: mode.xi })
}

pub fn kerr_coefficient(i: &Interface, layer: &AtomicLayer, norm: &FieldNormalization, omega: f64) -> Result<f64> {
    kerr_terms(i, layer, norm, omega).map(|t| t.chi)
}

pub fn phase_shift(chi: f64, omega: f64, length: f64, v_g: f64) -> Result<f64> {
    if !(length > 0.0) || !(v_g > 0.0) {
        return Err(Error::BadGeometry { length, v_g });
    }
    Ok(chi * omega * length / v_g)
}

pub fn kerr_point(i: &Interface, layer: &AtomicLayer, norm: &FieldNormalization, length: f64, omega: f64) -> KerrPoint {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let eval = || -> Result<KerrPoint> {
        let t = kerr_terms(i, layer, norm, omega)?;
        let phi = phase_shift(t.chi, omega, length, t.v_g)?;
        Ok(KerrPoint { omega, k: t.k, chi: t.chi, phi, v_g: t.v_g, xi: t.xi, valid: true, diagnostic: None })
    };
    eval().unwrap_or_else(|e| KerrPoint {
        omega,
        k: nan,
        chi: f64::NAN,
        phi: f64::NAN,
        v_g: f64::NAN,
        xi: f64::NAN,
        valid: false,
        diagnostic: Some(format!("{}: {e}", e.kind())),
    })
}

/// Mutual phase shift at one frequency, propagating errors.
pub fn phase_at(i: &Interface, layer: &AtomicLayer, norm: &FieldNormalization, length: f64, omega: f64) -> Result<f64> {
    let t = kerr_terms(i, layer, norm, omega)?;
    phase_shift(t.chi, omega, length, t.v_g)
}

/// Frequency ω_π at which φ(ω) = π inside `bracket`.
pub fn find_pi_frequency(
    i: &Interface,
    layer: &AtomicLayer,
    norm: &FieldNormalization,
    length: f64,
    bracket: Bracket,
) -> Result<f64> {
    let target = |w: f64| phase_at(i, layer, norm, length, w).map(|p| p - PI);
    let (lo, hi) = (target(bracket.lo)?, target(bracket.hi)?);
    if !(lo * hi <= 0.0) {
        return Err(Error::NoSignChange { lo: bracket.lo, hi: bracket.hi, f_lo: lo, f_hi: hi });
    }
    let opts = RootOptions::for_bracket(&bracket);
    let root = numerics::find_root(|w| target(w).unwrap_or(f64::NAN), bracket, opts.tol_x, opts.tol_f, opts.max_iter)?;
    Ok(root.x)
}

/// η that makes φ(omega_target) = π, holding everything else fixed.
///
/// φ is quadratic in η because both probe intensities carry one factor.
pub fn calibrate_eta(
    i: &Interface,
    layer: &AtomicLayer,
    norm: &FieldNormalization,
    length: f64,
    omega_target: f64,
) -> Result<f64> {
    let phi = phase_at(i, layer, norm, length, omega_target)?;
    if !(phi > 0.0) {
        return Err(Error::BadDispersion { omega: omega_target, reason: format!("phase {phi} cannot be calibrated") });
    }
    Ok(norm.eta * (PI / phi).sqrt())
}

/// One [`KerrPoint`] per grid frequency, in grid order. Bad points are
/// flagged, never fatal.
pub fn fig3_sweep(
    i: &Interface,
    layer: &AtomicLayer,
    norm: &FieldNormalization,
    length: f64,
    grid: &[f64],
    exec: Execution,
) -> Vec<KerrPoint> {
    exec::map_ordered(grid, exec, |&w| kerr_point(i, layer, norm, length, w))
}
