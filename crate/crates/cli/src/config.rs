//! Run configuration: a JSON document (all keys optional) overlaid by
//! command-line flags, resolved against the `paper-2012` defaults.
//!
//! Numeric values may be plain SI numbers or strings with a unit suffix:
//! `"440 THz"` (×10¹² s⁻¹), `"1 MHz"` (×2π·10⁶ rad/s, atomic rates),
//! `"2 um"`, `"780 nm"`, `"1 mm"`, `"2e14 cm^-3"`, `"5 ea0"`, `"1 pi"`.

use std::f64::consts::PI;
use std::path::Path;

use nimkerr::constants::{BOHR_RADIUS, E_CHARGE};
use nimkerr::kerr::{self, AtomicLayer, FieldNormalization};
use nimkerr::media::{self, Dielectric, DrudeMedium, Interface};
use nimkerr::numerics::Bracket;
use nimkerr::qsim::QubitState;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// A number in SI units or a string with a unit suffix.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

const SUFFIXES: &[(&str, f64)] = &[
    ("THz", 1e12),
    ("GHz", 1e9),
    ("MHz", 2.0 * PI * 1e6),
    ("kHz", 2.0 * PI * 1e3),
    ("cm^-3", 1e6),
    ("m^-3", 1.0),
    ("um", 1e-6),
    ("nm", 1e-9),
    ("mm", 1e-3),
    ("pi", PI),
    ("s^-1", 1.0),
    ("m", 1.0),
];

/// Parses `"<number> <suffix>"`, `"<number><suffix>"` or a bare number.
pub fn parse_quantity(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if text == "pi" {
        return Ok(PI);
    }
    if let Some(head) = text.strip_suffix("ea0") {
        let v: f64 = head.trim().parse().map_err(|_| format!("cannot parse quantity {text:?}"))?;
        return Ok(v * E_CHARGE * BOHR_RADIUS);
    }
    for (suffix, factor) in SUFFIXES {
        if let Some(head) = text.strip_suffix(suffix) {
            let head = head.trim();
            let value = if head.is_empty() { Ok(1.0) } else { head.parse::<f64>() };
            if let Ok(v) = value {
                return Ok(v * factor);
            }
        }
    }
    text.parse::<f64>().map_err(|_| format!("cannot parse quantity {text:?}"))
}

impl Quantity {
    fn resolve(&self, key: &str) -> Result<f64, CliError> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(t) => parse_quantity(t).map_err(|m| CliError::config(key, m)),
        }
    }
}

/// Complex value: a number, `[re, im]`, or a quantity string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Number(f64),
    Pair([f64; 2]),
    Text(String),
}

impl ComplexValue {
    fn resolve(&self, key: &str) -> Result<Complex64, CliError> {
        match self {
            ComplexValue::Number(v) => Ok(Complex64::new(*v, 0.0)),
            ComplexValue::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            ComplexValue::Text(t) => {
                parse_quantity(t).map(|v| Complex64::new(v, 0.0)).map_err(|m| CliError::config(key, m))
            }
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDielectric {
    pub eps1: Option<Quantity>,
    pub mu1: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMetamaterial {
    pub eps_inf: Option<Quantity>,
    pub mu_inf: Option<Quantity>,
    pub omega_e: Option<Quantity>,
    pub omega_m: Option<Quantity>,
    pub gamma_e: Option<Quantity>,
    pub gamma_m: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLayer {
    pub n: Option<Quantity>,
    pub z0: Option<Quantity>,
    pub omega_c_rabi: Option<Quantity>,
    pub delta: Option<Quantity>,
    pub d24: Option<Quantity>,
    pub d26: Option<Quantity>,
    pub k_c: Option<Quantity>,
    pub lambda_transition: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNormalization {
    pub width: Option<Quantity>,
    pub quant_length: Option<Quantity>,
    pub eta: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub omega_min: Option<Quantity>,
    pub omega_max: Option<Quantity>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBracket {
    pub lo: Option<Quantity>,
    pub hi: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQubit {
    pub c0: Option<ComplexValue>,
    pub c1: Option<ComplexValue>,
}

/// The config file as written; every key optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<String>,
    #[serde(default)]
    pub dielectric: RawDielectric,
    #[serde(default)]
    pub metamaterial: RawMetamaterial,
    #[serde(default)]
    pub layer: RawLayer,
    #[serde(default)]
    pub normalization: RawNormalization,
    pub length: Option<Quantity>,
    #[serde(default)]
    pub grid: RawGrid,
    #[serde(default)]
    pub zero_loss_bracket: RawBracket,
    pub alpha: Option<ComplexValue>,
    pub beta: Option<ComplexValue>,
    pub phi: Option<Quantity>,
    #[serde(default)]
    pub qubit_a: RawQubit,
    #[serde(default)]
    pub qubit_b: RawQubit,
    pub dim: Option<usize>,
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub omega_min: Option<String>,
    pub omega_max: Option<String>,
    pub points: Option<usize>,
    pub bracket_lo: Option<String>,
    pub bracket_hi: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub phi: Option<String>,
    pub qubit_a: Option<String>,
    pub qubit_b: Option<String>,
    pub eta: Option<String>,
    pub length: Option<String>,
    pub dim: Option<usize>,
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

/// Grid bounds before ω₀ is known; `None` means 0.9·ω₀ / 1.4·ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRequest {
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub points: usize,
}

impl GridRequest {
    pub fn resolve(&self, omega0: f64) -> GridSpec {
        GridSpec {
            omega_min: self.omega_min.unwrap_or(0.9 * omega0),
            omega_max: self.omega_max.unwrap_or(1.4 * omega0),
            points: self.points,
        }
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: String,
    pub dielectric: Dielectric,
    pub metamaterial: DrudeMedium,
    pub layer: AtomicLayer,
    pub normalization: FieldNormalization,
    pub length: f64,
    pub grid: GridRequest,
    pub zero_loss_bracket: Bracket,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub phi: f64,
    pub qubit_a: QubitState,
    pub qubit_b: QubitState,
    pub dim: Option<usize>,
    pub seed: u64,
    pub shots: usize,
    pub out: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn interface(&self) -> Interface {
        Interface { dielectric: self.dielectric, metamaterial: self.metamaterial }
    }
}

pub const DEFAULT_POINTS: usize = 501;
pub const DEFAULT_SEED: u64 = 2012;
pub const DEFAULT_SHOTS: usize = 1000;

fn or_default(raw: &Option<Quantity>, key: &str, default: f64) -> Result<f64, CliError> {
    raw.as_ref().map_or(Ok(default), |q| q.resolve(key))
}

fn flag(raw: &mut Option<Quantity>, value: &Option<String>) {
    if let Some(v) = value {
        *raw = Some(Quantity::Text(v.clone()));
    }
}

fn parse_qubit_flag(text: &str, key: &str) -> Result<RawQubit, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::config(key, "expected two comma-separated amplitudes c0,c1"));
    }
    Ok(RawQubit {
        c0: Some(ComplexValue::Text(parts[0].trim().to_string())),
        c1: Some(ComplexValue::Text(parts[1].trim().to_string())),
    })
}

fn resolve_qubit(raw: &RawQubit, key: &str) -> Result<QubitState, CliError> {
    let balanced = QubitState::balanced();
    let c0 = raw.c0.as_ref().map_or(Ok(balanced.c0), |v| v.resolve(&format!("{key}.c0")))?;
    let c1 = raw.c1.as_ref().map_or(Ok(balanced.c1), |v| v.resolve(&format!("{key}.c1")))?;
    QubitState::new(c0, c1).map_err(|_| {
        CliError::config(
            key,
            format!("amplitudes must satisfy |c0|^2 + |c1|^2 = 1 (got {})", c0.norm_sqr() + c1.norm_sqr()),
        )
    })
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(key, format!("must be > 0, got {v}")))
    }
}

/// Maps a domain validation error to the config key it came from.
fn domain_key(section: &str, err: nimkerr::Error) -> CliError {
    use nimkerr::Error as E;
    match err {
        E::BadMaterial { name, value, constraint } => {
            CliError::config(&format!("{section}.{name}"), format!("{constraint}, got {value}"))
        }
        E::BadAtomicParams { name, value } | E::BadNormalization { name, value } => {
            CliError::config(&format!("{section}.{name}"), format!("must be > 0, got {value}"))
        }
        other => CliError::config(section, other.to_string()),
    }
}

pub fn read_raw(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config("<file>", e.to_string()))
}

pub fn load_config(path: Option<&Path>, flags: &Overrides) -> Result<RunConfig, CliError> {
    let raw = match path {
        Some(p) => read_raw(p)?,
        None => RawConfig::default(),
    };
    resolve(raw, flags)
}

pub fn resolve(mut raw: RawConfig, flags: &Overrides) -> Result<RunConfig, CliError> {
    if let Some(p) = &flags.preset {
        raw.preset = Some(p.clone());
    }
    flag(&mut raw.grid.omega_min, &flags.omega_min);
    flag(&mut raw.grid.omega_max, &flags.omega_max);
    flag(&mut raw.zero_loss_bracket.lo, &flags.bracket_lo);
    flag(&mut raw.zero_loss_bracket.hi, &flags.bracket_hi);
    flag(&mut raw.normalization.eta, &flags.eta);
    flag(&mut raw.length, &flags.length);
    flag(&mut raw.phi, &flags.phi);
    if let Some(p) = flags.points {
        raw.grid.points = Some(p);
    }
    if let Some(a) = &flags.alpha {
        raw.alpha = Some(ComplexValue::Text(a.clone()));
    }
    if let Some(b) = &flags.beta {
        raw.beta = Some(ComplexValue::Text(b.clone()));
    }
    if let Some(q) = &flags.qubit_a {
        raw.qubit_a = parse_qubit_flag(q, "qubit_a")?;
    }
    if let Some(q) = &flags.qubit_b {
        raw.qubit_b = parse_qubit_flag(q, "qubit_b")?;
    }
    raw.dim = flags.dim.or(raw.dim);
    raw.seed = flags.seed.or(raw.seed);
    raw.shots = flags.shots.or(raw.shots);
    raw.out = flags.out.clone().or(raw.out);
    raw.format = flags.format.or(raw.format);

    let preset = raw.preset.unwrap_or_else(|| media::PAPER_PRESET.to_string());
    let base = Interface::preset(&preset).ok_or_else(|| {
        CliError::config("preset", format!("unknown preset {preset:?} (known: {})", media::PAPER_PRESET))
    })?;

    let d = &raw.dielectric;
    let dielectric = Dielectric {
        eps1: or_default(&d.eps1, "dielectric.eps1", base.dielectric.eps1)?,
        mu1: or_default(&d.mu1, "dielectric.mu1", base.dielectric.mu1)?,
    };
    dielectric.validate().map_err(|e| domain_key("dielectric", e))?;

    let m = &raw.metamaterial;
    let b = base.metamaterial;
    let metamaterial = DrudeMedium {
        eps_inf: or_default(&m.eps_inf, "metamaterial.eps_inf", b.eps_inf)?,
        mu_inf: or_default(&m.mu_inf, "metamaterial.mu_inf", b.mu_inf)?,
        omega_e: or_default(&m.omega_e, "metamaterial.omega_e", b.omega_e)?,
        omega_m: or_default(&m.omega_m, "metamaterial.omega_m", b.omega_m)?,
        gamma_e: or_default(&m.gamma_e, "metamaterial.gamma_e", b.gamma_e)?,
        gamma_m: or_default(&m.gamma_m, "metamaterial.gamma_m", b.gamma_m)?,
    };
    metamaterial.validate().map_err(|e| domain_key("metamaterial", e))?;

    let l = &raw.layer;
    let rb = AtomicLayer::rb87();
    let lambda_transition = or_default(&l.lambda_transition, "layer.lambda_transition", rb.lambda_transition)?;
    let layer = AtomicLayer {
        n: or_default(&l.n, "layer.n", rb.n)?,
        z0: or_default(&l.z0, "layer.z0", rb.z0)?,
        omega_c_rabi: or_default(&l.omega_c_rabi, "layer.omega_c_rabi", rb.omega_c_rabi)?,
        delta: or_default(&l.delta, "layer.delta", rb.delta)?,
        d24: or_default(&l.d24, "layer.d24", rb.d24)?,
        d26: or_default(&l.d26, "layer.d26", rb.d26)?,
        k_c: or_default(&l.k_c, "layer.k_c", 2.0 * PI / lambda_transition)?,
        lambda_transition,
    };
    layer.validate().map_err(|e| domain_key("layer", e))?;

    let nrm = &raw.normalization;
    let shipped = FieldNormalization::shipped();
    let normalization = FieldNormalization {
        width: or_default(&nrm.width, "normalization.width", shipped.width)?,
        quant_length: or_default(&nrm.quant_length, "normalization.quant_length", shipped.quant_length)?,
        eta: or_default(&nrm.eta, "normalization.eta", shipped.eta)?,
    };
    normalization.validate().map_err(|e| domain_key("normalization", e))?;

    let length = positive("length", or_default(&raw.length, "length", kerr::DEFAULT_LENGTH)?)?;

    let points = raw.grid.points.unwrap_or(DEFAULT_POINTS);
    if points < 2 {
        return Err(CliError::config("grid.points", format!("must be >= 2, got {points}")));
    }
    let omega_min = raw.grid.omega_min.as_ref().map(|q| q.resolve("grid.omega_min")).transpose()?;
    let omega_max = raw.grid.omega_max.as_ref().map(|q| q.resolve("grid.omega_max")).transpose()?;
    if let Some(v) = omega_min {
        positive("grid.omega_min", v)?;
    }
    if let (Some(lo), Some(hi)) = (omega_min, omega_max) {
        if !(lo < hi) {
            return Err(CliError::config("grid", format!("omega_min ({lo}) must be < omega_max ({hi})")));
        }
    }
    let grid = GridRequest { omega_min, omega_max, points };

    let (lo, hi) = media::PAPER_ZERO_LOSS_BRACKET;
    let zb = &raw.zero_loss_bracket;
    let zero_loss_bracket =
        Bracket::new(or_default(&zb.lo, "zero_loss_bracket.lo", lo)?, or_default(&zb.hi, "zero_loss_bracket.hi", hi)?)
            .map_err(|e| CliError::config("zero_loss_bracket", e.to_string()))?;

    let alpha = raw.alpha.as_ref().map_or(Ok(Complex64::new(2.0, 0.0)), |v| v.resolve("alpha"))?;
    let beta = raw.beta.as_ref().map_or(Ok(Complex64::new(2.0, 0.0)), |v| v.resolve("beta"))?;
    let phi = or_default(&raw.phi, "phi", PI)?;
    if !phi.is_finite() {
        return Err(CliError::config("phi", "must be finite"));
    }

    let qubit_a = resolve_qubit(&raw.qubit_a, "qubit_a")?;
    let qubit_b = resolve_qubit(&raw.qubit_b, "qubit_b")?;

    if raw.dim == Some(0) {
        return Err(CliError::config("dim", "must be >= 1"));
    }
    let shots = raw.shots.unwrap_or(DEFAULT_SHOTS);
    if shots < 1 {
        return Err(CliError::config("shots", "must be >= 1"));
    }

    Ok(RunConfig {
        preset,
        dielectric,
        metamaterial,
        layer,
        normalization,
        length,
        grid,
        zero_loss_bracket,
        alpha,
        beta,
        phi,
        qubit_a,
        qubit_b,
        dim: raw.dim,
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        shots,
        out: raw.out,
        format: raw.format.unwrap_or_default(),
    })
}
