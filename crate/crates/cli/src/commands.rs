//! One function per subcommand. Each returns a complete [`Report`] or an
//! error; nothing here writes output.

use std::f64::consts::PI;

use nimkerr::constants::C;
use nimkerr::kerr::{self, KerrPoint};
use nimkerr::media::{self, SurfaceMode};
use nimkerr::numerics::{self, Bracket, RootOptions};
use nimkerr::qsim::{self, Outcome};
use nimkerr::Execution;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{GridSpec, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Metadata, Report, Table};

pub const SWEEP_COLUMNS: [&str; 9] =
    ["omega", "omega_over_omega0", "re_k", "im_k", "xi", "v_g_over_c", "chi_times_1e4", "phi_over_pi", "valid"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub omega: f64,
    pub omega_over_omega0: f64,
    pub re_k: f64,
    pub im_k: f64,
    pub xi: f64,
    pub v_g_over_c: f64,
    pub chi_times_1e4: f64,
    pub phi_over_pi: f64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl SweepRecord {
    pub fn from_point(p: &KerrPoint, omega0: f64) -> Self {
        SweepRecord {
            omega: p.omega,
            omega_over_omega0: p.omega / omega0,
            re_k: p.k.re,
            im_k: p.k.im,
            xi: p.xi,
            v_g_over_c: p.v_g / C,
            chi_times_1e4: p.chi * 1e4,
            phi_over_pi: p.phi / PI,
            valid: p.valid,
            diagnostic: p.diagnostic.clone(),
        }
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Float(self.omega),
            Cell::Float(self.omega_over_omega0),
            Cell::Float(self.re_k),
            Cell::Float(self.im_k),
            Cell::Float(self.xi),
            Cell::Float(self.v_g_over_c),
            Cell::Float(self.chi_times_1e4),
            Cell::Float(self.phi_over_pi),
            Cell::Bool(self.valid),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiCrossing {
    /// Linear interpolation between the two bracketing rows.
    pub omega_interpolated: f64,
    pub omega_over_omega0_interpolated: f64,
    /// Root of φ(ω) − π refined inside the same pair of rows.
    pub omega_refined: Option<f64>,
    pub omega_over_omega0_refined: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroLossResult {
    pub omega0: f64,
    pub omega0_thz: f64,
    pub im_k_residual: f64,
    pub iterations: usize,
    pub bracket: Bracket,
}

pub fn zero_loss(config: &RunConfig) -> Result<ZeroLossResult, CliError> {
    let bracket = config.zero_loss_bracket;
    let root = media::find_zero_loss_with(&config.interface(), bracket, RootOptions::for_bracket(&bracket))?;
    let k = media::surface_wavevector(&config.interface(), root.x)?;
    Ok(ZeroLossResult {
        omega0: root.x,
        omega0_thz: root.x / 1e12,
        im_k_residual: k.im,
        iterations: root.iterations,
        bracket,
    })
}

pub fn cmd_zero_loss(config: &RunConfig) -> Result<Report, CliError> {
    let r = zero_loss(config)?;
    let table = Table {
        header: vec!["omega0", "omega0_thz", "im_k_residual"],
        rows: vec![vec![Cell::Float(r.omega0), Cell::Float(r.omega0_thz), Cell::Float(r.im_k_residual)]],
    };
    let result = serde_json::to_value(&r).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Report { metadata: Metadata::new("zero-loss", config, Some(r.omega0)), result, table })
}

fn grid(config: &RunConfig, omega0: f64) -> Result<(GridSpec, Vec<f64>), CliError> {
    let spec = config.grid.resolve(omega0);
    if !(spec.omega_min > 0.0 && spec.omega_min < spec.omega_max) {
        return Err(CliError::config(
            "grid",
            format!("need 0 < omega_min < omega_max, got [{}, {}]", spec.omega_min, spec.omega_max),
        ));
    }
    let points = numerics::linspace(spec.omega_min, spec.omega_max, spec.points)?;
    Ok((spec, points))
}

pub fn cmd_dispersion(config: &RunConfig, exec: Execution) -> Result<Report, CliError> {
    let omega0 = zero_loss(config)?.omega0;
    let (spec, omegas) = grid(config, omega0)?;
    let interface = config.interface();
    let modes: Vec<SurfaceMode> = nimkerr::exec::map_ordered(&omegas, exec, |&w| media::mode_report(&interface, w));

    let header =
        vec!["omega", "omega_over_omega0", "re_k", "im_k", "re_k_perp", "im_k_perp", "xi", "v_g_over_c", "valid"];
    let rows = modes
        .iter()
        .map(|m| {
            vec![
                Cell::Float(m.omega),
                Cell::Float(m.omega / omega0),
                Cell::Float(m.k.re),
                Cell::Float(m.k.im),
                Cell::Float(m.k_perp.re),
                Cell::Float(m.k_perp.im),
                Cell::Float(m.xi),
                Cell::Float(m.v_g.map_or(f64::NAN, |v| v / C)),
                Cell::Bool(m.valid),
            ]
        })
        .collect();
    let records: Vec<Value> = modes
        .iter()
        .map(|m| {
            json!({
                "omega": m.omega,
                "omega_over_omega0": m.omega / omega0,
                "re_k": m.k.re,
                "im_k": m.k.im,
                "re_k_perp": m.k_perp.re,
                "im_k_perp": m.k_perp.im,
                "xi": m.xi,
                "v_g_over_c": m.v_g.map(|v| v / C),
                "valid": m.valid,
                "diagnostic": m.diagnostic,
            })
        })
        .collect();
    let result = json!({ "omega0": omega0, "grid": spec, "records": records });
    Ok(Report { metadata: Metadata::new("dispersion", config, Some(omega0)), result, table: Table { header, rows } })
}

/// Sign changes of φ/π − 1 between consecutive valid rows.
pub fn pi_crossings(config: &RunConfig, records: &[SweepRecord], omega0: f64) -> Vec<PiCrossing> {
    let interface = config.interface();
    records
        .windows(2)
        .filter(|p| p[0].valid && p[1].valid)
        .filter_map(|p| {
            let (a, b) = (p[0].phi_over_pi - 1.0, p[1].phi_over_pi - 1.0);
            if a == 0.0 && b != 0.0 {
                return None;
            }
            if a * b > 0.0 || (a == 0.0 && b == 0.0) {
                return None;
            }
            let t = if b == 0.0 { 1.0 } else { a / (a - b) };
            let omega = p[0].omega + t * (p[1].omega - p[0].omega);
            let refined = Bracket::new(p[0].omega, p[1].omega).ok().and_then(|br| {
                kerr::find_pi_frequency(&interface, &config.layer, &config.normalization, config.length, br).ok()
            });
            Some(PiCrossing {
                omega_interpolated: omega,
                omega_over_omega0_interpolated: omega / omega0,
                omega_refined: refined,
                omega_over_omega0_refined: refined.map(|w| w / omega0),
            })
        })
        .collect()
}

pub fn fig3_records(config: &RunConfig, exec: Execution) -> Result<(f64, GridSpec, Vec<SweepRecord>), CliError> {
    let omega0 = zero_loss(config)?.omega0;
    let (spec, omegas) = grid(config, omega0)?;
    let points =
        kerr::fig3_sweep(&config.interface(), &config.layer, &config.normalization, config.length, &omegas, exec);
    let records = points.iter().map(|p| SweepRecord::from_point(p, omega0)).collect();
    Ok((omega0, spec, records))
}

pub fn cmd_fig3(config: &RunConfig, exec: Execution) -> Result<Report, CliError> {
    let (omega0, spec, records) = fig3_records(config, exec)?;
    let crossings = pi_crossings(config, &records, omega0);
    let table = Table { header: SWEEP_COLUMNS.to_vec(), rows: records.iter().map(SweepRecord::cells).collect() };
    let result = json!({
        "omega0": omega0,
        "eta": config.normalization.eta,
        "grid": spec,
        "pi_crossings": crossings,
        "records": records,
    });
    Ok(Report { metadata: Metadata::new("fig3", config, Some(omega0)), result, table })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntangleReport {
    pub dim: usize,
    pub entropy_bits: f64,
    pub fidelity_psi_f: f64,
    pub fidelity_entangled_coherent: f64,
    pub tail_mass_alpha: f64,
    pub tail_mass_beta: f64,
    pub norm_sq: f64,
    pub mean_photons: (f64, f64),
}

fn fock_dim(config: &RunConfig, amplitude: f64) -> usize {
    config.dim.unwrap_or_else(|| qsim::default_dim(amplitude))
}

pub fn entangle_coherent(config: &RunConfig) -> Result<EntangleReport, CliError> {
    let (alpha, beta) = (config.alpha, config.beta);
    let dim = fock_dim(config, alpha.norm().max(beta.norm()));
    let tail_a = qsim::coherent_state(alpha, dim, qsim::DEFAULT_TAIL_TOL)?.tail_mass;
    let tail_b = qsim::coherent_state(beta, dim, qsim::DEFAULT_TAIL_TOL)?.tail_mass;
    let state = qsim::evolve_coherent_pair(alpha, beta, config.phi, dim)?;
    let target = qsim::cat_target(alpha, beta, dim)?;
    Ok(EntangleReport {
        dim,
        entropy_bits: qsim::entropy_of_entanglement(&state)?,
        fidelity_psi_f: qsim::fidelity(&state, &target.psi_f),
        fidelity_entangled_coherent: qsim::fidelity(&state, &target.entangled_coherent),
        tail_mass_alpha: tail_a,
        tail_mass_beta: tail_b,
        norm_sq: state.norm_sq(),
        mean_photons: state.mean_photons(),
    })
}

pub fn cmd_entangle_coherent(config: &RunConfig) -> Result<Report, CliError> {
    let r = entangle_coherent(config)?;
    let table = Table {
        header: vec![
            "dim",
            "entropy_bits",
            "fidelity_psi_f",
            "fidelity_entangled_coherent",
            "tail_mass_alpha",
            "tail_mass_beta",
        ],
        rows: vec![vec![
            Cell::Int(r.dim),
            Cell::Float(r.entropy_bits),
            Cell::Float(r.fidelity_psi_f),
            Cell::Float(r.fidelity_entangled_coherent),
            Cell::Float(r.tail_mass_alpha),
            Cell::Float(r.tail_mass_beta),
        ]],
    };
    let result = serde_json::to_value(&r).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Report { metadata: Metadata::new("entangle-coherent", config, None), result, table })
}

pub fn nemoto_munro(config: &RunConfig, exec: Execution) -> Result<qsim::ProtocolRun, CliError> {
    let dim = fock_dim(config, config.alpha.norm());
    Ok(qsim::run_protocol(
        &config.qubit_a,
        &config.qubit_b,
        config.alpha,
        config.phi,
        dim,
        config.seed,
        config.shots,
        exec,
    )?)
}

pub fn cmd_nemoto_munro(config: &RunConfig, exec: Execution) -> Result<Report, CliError> {
    let run = nemoto_munro(config, exec)?;
    let header = vec![
        "shot",
        "x",
        "outcome",
        "probability_density",
        "re_hh",
        "im_hh",
        "re_hv",
        "im_hv",
        "re_vh",
        "im_vh",
        "re_vv",
        "im_vv",
    ];
    let rows = run
        .samples
        .iter()
        .enumerate()
        .map(|(shot, s)| {
            let mut row = vec![
                Cell::Int(shot),
                Cell::Float(s.x),
                Cell::Text(match s.outcome {
                    Outcome::Unshifted => "unshifted".into(),
                    Outcome::Shifted => "shifted".into(),
                }),
                Cell::Float(s.probability_density),
            ];
            for c in s.post_state.iter().flatten() {
                row.push(Cell::Float(c.re));
                row.push(Cell::Float(c.im));
            }
            row
        })
        .collect();
    let result = json!({
        "dim": fock_dim(config, config.alpha.norm()),
        "summary": run.summary,
        "samples": run.samples,
    });
    Ok(Report { metadata: Metadata::new("nemoto-munro", config, None), result, table: Table { header, rows } })
}
