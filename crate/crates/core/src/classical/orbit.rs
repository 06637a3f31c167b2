//! Orbit integration with the Dormand–Prince 5(4) embedded pair.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::dynamics::{canonical_k, hamilton_rhs, velocity, CoulombModel, PhaseState};
use super::kinematics::collaborative_speed;

type State = [f64; 6];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub tau_span: f64,
    /// Per-step error tolerance, used both absolutely and relatively.
    pub tol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size; 0 means unbounded.
    pub max_step: f64,
}

impl OrbitConfig {
    pub fn new(tau_span: f64, tol: f64) -> Self {
        Self {
            tau_span,
            tol,
            max_steps: 5_000_000,
            max_step: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub tau: f64,
    pub x: Vector3<f64>,
    pub p: Vector3<f64>,
    pub u: Vector3<f64>,
    pub b: f64,
    /// Canonical Hamiltonian K.
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn taus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.tau).collect()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Largest |K − K₀|/|K₀| over the samples.
    pub fn max_energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| ((s.k - first.k) / first.k).abs())
            .fold(0.0, f64::max)
    }
}

fn pack(ph: &PhaseState) -> State {
    [ph.x.x, ph.x.y, ph.x.z, ph.p.x, ph.p.y, ph.p.z]
}

fn unpack(y: &State) -> PhaseState {
    PhaseState::new(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]))
}

fn rhs(y: &State, model: &CoulombModel) -> Result<State> {
    let (dx, dp) = hamilton_rhs(&unpack(y), model)?;
    Ok([dx.x, dx.y, dx.z, dp.x, dp.y, dp.z])
}

fn sample(tau: f64, y: &State, model: &CoulombModel) -> Result<TrajectorySample> {
    let ph = unpack(y);
    let v = model.potential(&ph.x)?;
    let u = velocity(&ph, v);
    Ok(TrajectorySample {
        tau,
        x: ph.x,
        p: ph.p,
        u,
        b: collaborative_speed(&u),
        k: canonical_k(&ph, v, &Vector3::zeros(), 0.0),
    })
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (coef, k) in terms {
        if *coef != 0.0 {
            for i in 0..6 {
                out[i] += h * coef * k[i];
            }
        }
    }
    out
}

struct Step {
    y: State,
    k_end: State,
    err: f64,
}

fn dopri_step(y: &State, k1: &State, h: f64, tol: f64, model: &CoulombModel) -> Result<Step> {
    let mut ks: [State; 7] = [*k1; 7];
    for s in 1..7 {
        let terms: Vec<(f64, &State)> = (0..s).map(|j| (A[s][j], &ks[j])).collect();
        let ys = axpy(y, h, &terms);
        ks[s] = rhs(&ys, model)?;
    }
    // The last stage is evaluated at the fifth-order solution (FSAL).
    let y_new = axpy(y, h, &(0..6).map(|j| (A[6][j], &ks[j])).collect::<Vec<_>>());
    let mut sum = 0.0;
    for i in 0..6 {
        let e: f64 = (0..7).map(|s| E[s] * ks[s][i]).sum::<f64>() * h;
        let scale = tol + tol * y[i].abs().max(y_new[i].abs());
        sum += (e / scale).powi(2);
    }
    Ok(Step {
        y: y_new,
        k_end: ks[6],
        err: (sum / 6.0).sqrt(),
    })
}

/// Integrates Hamilton's equations over [0, tau_span], recording every
/// accepted step.
pub fn integrate_orbit(initial: &PhaseState, model: &CoulombModel, cfg: &OrbitConfig) -> Result<Trajectory> {
    if !(cfg.tau_span > 0.0 && cfg.tau_span.is_finite()) {
        return Err(Error::domain("tau span must be positive"));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut y = pack(initial);
    let mut traj = Trajectory::default();
    traj.samples.push(sample(0.0, &y, model)?);
    let mut k1 = rhs(&y, model)?;

    let scale = y.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let speed = k1.iter().map(|v| v.abs()).fold(1e-300, f64::max);
    let mut h = (0.01 * scale / speed).min(cfg.tau_span) * cfg.tol.powf(0.2);
    let mut tau = 0.0;

    let fail = |traj: Trajectory, tau: f64, reason: String| Error::IntegrationFailure {
        tau,
        reason,
        partial: Box::new(traj),
    };

    while tau < cfg.tau_span {
        if traj.accepted_steps + traj.rejected_steps >= cfg.max_steps {
            return Err(fail(traj, tau, format!("step budget of {} exhausted", cfg.max_steps)));
        }
        if cfg.max_step > 0.0 {
            h = h.min(cfg.max_step);
        }
        let last = tau + h >= cfg.tau_span;
        if last {
            h = cfg.tau_span - tau;
        }
        if h <= 1e-14 * tau.abs().max(1.0) {
            return Err(fail(traj, tau, format!("step size underflow (h = {h:e})")));
        }
        match dopri_step(&y, &k1, h, cfg.tol, model) {
            Ok(step) if step.err <= 1.0 => {
                tau = if last { cfg.tau_span } else { tau + h };
                y = step.y;
                k1 = step.k_end;
                traj.accepted_steps += 1;
                traj.samples.push(sample(tau, &y, model)?);
                let factor = if step.err == 0.0 { 5.0 } else { 0.9 * step.err.powf(-0.2) };
                h *= factor.clamp(0.2, 5.0);
            }
            Ok(step) => {
                traj.rejected_steps += 1;
                h *= (0.9 * step.err.powf(-0.2)).max(0.1);
            }
            Err(_) => {
                // A stage landed on the singularity; retry with a smaller step.
                traj.rejected_steps += 1;
                h *= 0.1;
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_motion_is_linear() {
        let x0 = Vector3::new(1.0, -2.0, 0.5);
        let p0 = Vector3::new(0.3, 0.1, -0.2);
        let traj = integrate_orbit(&PhaseState::new(x0, p0), &CoulombModel::free(), &OrbitConfig::new(100.0, 1e-10))
            .unwrap();
        for s in &traj.samples {
            assert!((s.x - (x0 + p0 * s.tau)).norm() < 1e-10);
        }
        assert_eq!(traj.last().unwrap().tau, 100.0);
    }

    #[test]
    fn head_on_collision_fails_with_partial_trajectory() {
        let model = CoulombModel::new(1.0).unwrap();
        let ph = PhaseState::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(-1.0, 0.0, 0.0));
        let cfg = OrbitConfig {
            max_steps: 20_000,
            ..OrbitConfig::new(10.0, 1e-12)
        };
        match integrate_orbit(&ph, &model, &cfg) {
            Err(Error::IntegrationFailure { partial, .. }) => assert!(!partial.samples.is_empty()),
            other => panic!("expected integration failure, got {:?}", other.map(|t| t.samples.len())),
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let ph = PhaseState::new(Vector3::new(1.0, 0.0, 0.0), Vector3::zeros());
        assert!(integrate_orbit(&ph, &CoulombModel::free(), &OrbitConfig::new(-1.0, 1e-8)).is_err());
        assert!(integrate_orbit(&ph, &CoulombModel::free(), &OrbitConfig::new(1.0, 0.0)).is_err());
    }
}
