//! Browser bindings: a level table, a kernel profile and a Coulomb orbit,
//! each returned as a JSON string. The plain functions are usable natively;
//! the `#[wasm_bindgen]` wrappers only convert errors to JS strings.

use nalgebra::Vector3;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use propertime::classical::{effective_mass_along, integrate_orbit, CoulombModel, OrbitConfig, PhaseState};
use propertime::spectrum::{relative_level, Theory};
use propertime::sqrt_operator::{kernel_profile as profile, Branch, KernelParams};
use propertime::{BoundState, PhysicalConstants};

#[derive(Debug, Serialize)]
pub struct LevelRow {
    pub state: String,
    pub dirac_ev: f64,
    pub pt_ev: f64,
    pub gap_ev: f64,
}

#[derive(Debug, Serialize)]
pub struct ProfilePoint {
    /// Separation in Compton lengths ħ/mc.
    pub r: f64,
    pub regular: f64,
    pub delta_coeff: f64,
}

#[derive(Debug, Serialize)]
pub struct OrbitPoint {
    pub tau: f64,
    pub x: f64,
    pub y: f64,
    pub b: f64,
    pub k: f64,
    pub mu_bracket: f64,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data always serializes")
}

/// Levels above `reference` for a comma-separated list of states, using
/// CODATA-2018 constants with the given α.
pub fn level_rows(states: &str, reference: &str, alpha: f64) -> Result<Vec<LevelRow>, String> {
    let c = PhysicalConstants::codata_2018().with_alpha(alpha).map_err(|e| e.to_string())?;
    let reference: BoundState = reference.trim().parse().map_err(|e: propertime::Error| e.to_string())?;
    states
        .split(',')
        .map(|label| {
            let s: BoundState = label.trim().parse().map_err(|e: propertime::Error| e.to_string())?;
            let d = relative_level(&s, &reference, Theory::Dirac, &c).map_err(|e| e.to_string())?;
            let p = relative_level(&s, &reference, Theory::ProperTime, &c).map_err(|e| e.to_string())?;
            Ok(LevelRow { state: s.to_string(), dirac_ev: d, pt_ev: p, gap_ev: d - p })
        })
        .collect()
}

/// Free kernel between `r_min` and `r_max` (Compton lengths), normalised by
/// the magnitude of its first point so the curve fits a plot.
pub fn kernel_points(r_min: f64, r_max: f64, points: usize, antiparticle: bool) -> Result<Vec<ProfilePoint>, String> {
    let c = PhysicalConstants::codata_2018();
    let branch = if antiparticle { Branch::Antiparticle } else { Branch::Particle };
    let p = KernelParams::rest_mass(&c, branch);
    let length = 1.0 / p.mu;
    let samples = profile(&p, &c, r_min * length, r_max * length, points).map_err(|e| e.to_string())?;
    let norm = samples.first().map_or(1.0, |s| s.regular.abs());
    Ok(samples
        .iter()
        .map(|s| ProfilePoint { r: s.r / length, regular: s.regular / norm, delta_coeff: s.delta_coeff / norm })
        .collect())
}

/// Planar Coulomb orbit starting at (r0, 0, 0) with momentum (0, p0, 0),
/// thinned to at most `max_points` samples.
pub fn orbit_points(coupling: f64, r0: f64, p0: f64, tau_span: f64, max_points: usize) -> Result<Vec<OrbitPoint>, String> {
    let model = CoulombModel::new(coupling).map_err(|e| e.to_string())?;
    let start = PhaseState::new(Vector3::new(r0, 0.0, 0.0), Vector3::new(0.0, p0, 0.0));
    let cfg = OrbitConfig { max_steps: 200_000, ..OrbitConfig::new(tau_span, 1e-10) };
    let traj = integrate_orbit(&start, &model, &cfg).map_err(|e| e.to_string())?;
    let mu = effective_mass_along(&traj).map_err(|e| e.to_string())?;
    let stride = traj.samples.len().div_ceil(max_points.max(2)).max(1);
    Ok(traj
        .samples
        .iter()
        .zip(&mu)
        .step_by(stride)
        .map(|(s, m)| OrbitPoint { tau: s.tau, x: s.x.x, y: s.x.y, b: s.b, k: s.k, mu_bracket: m.bracket_b })
        .collect())
}

#[wasm_bindgen]
pub fn spectrum_table(states: &str, reference: &str, alpha: f64) -> Result<String, JsValue> {
    level_rows(states, reference, alpha).map(|r| to_json(&r)).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn kernel_profile(r_min: f64, r_max: f64, points: usize, antiparticle: bool) -> Result<String, JsValue> {
    kernel_points(r_min, r_max, points, antiparticle).map(|r| to_json(&r)).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn orbit(coupling: f64, r0: f64, p0: f64, tau_span: f64, max_points: usize) -> Result<String, JsValue> {
    orbit_points(coupling, r0, p0, tau_span, max_points).map(|r| to_json(&r)).map_err(JsValue::from)
}
