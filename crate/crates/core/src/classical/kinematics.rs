//! Proper-velocity kinematics and the τ-preserving Lorentz transformations.
//!
//! Units have c = 1, so b = √(1 + u²) and |w| < 1.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub tau: f64,
    pub x: Vector3<f64>,
    /// Proper velocity dx/dτ.
    pub u: Vector3<f64>,
}

impl KinematicState {
    pub fn new(tau: f64, x: Vector3<f64>, u: Vector3<f64>) -> Self {
        Self { tau, x, u }
    }

    /// Collaborative speed b = √(c² + u²).
    pub fn b(&self) -> f64 {
        collaborative_speed(&self.u)
    }

    /// Coordinate velocity w = u/b.
    pub fn w(&self) -> Vector3<f64> {
        w_from_u(&self.u)
    }
}

pub fn collaborative_speed(u: &Vector3<f64>) -> f64 {
    (1.0 + u.norm_squared()).sqrt()
}

fn check_subluminal(v: &Vector3<f64>, what: &str) -> Result<f64> {
    let v2 = v.norm_squared();
    if !(v2 < 1.0) || !v2.is_finite() {
        return Err(Error::domain(format!(
            "{what} must be slower than light, got |{what}| = {}",
            v2.sqrt()
        )));
    }
    Ok(v2)
}

pub fn u_from_w(w: &Vector3<f64>) -> Result<Vector3<f64>> {
    let w2 = check_subluminal(w, "w")?;
    Ok(w / (1.0 - w2).sqrt())
}

pub fn w_from_u(u: &Vector3<f64>) -> Vector3<f64> {
    u / collaborative_speed(u)
}

pub fn lorentz_gamma(v: &Vector3<f64>) -> Result<f64> {
    let v2 = check_subluminal(v, "v")?;
    Ok(1.0 / (1.0 - v2).sqrt())
}

// d* = d/γ − (1−γ)[(v·d)/(γv²)]v, written with (γ−1)/v² = γ²/(γ+1) so that
// v → 0 needs no special case.
fn star(d: &Vector3<f64>, v: &Vector3<f64>, gamma: f64) -> Vector3<f64> {
    d / gamma + v * (gamma / (gamma + 1.0) * v.dot(d))
}

/// Boost by v keeping τ fixed. `bbar` is the mean of b over [0, τ], so that
/// b̄τ is the coordinate time of the event.
pub fn pt_boost(state: &KinematicState, v: &Vector3<f64>, bbar: f64) -> Result<KinematicState> {
    let gamma = lorentz_gamma(v)?;
    let b = state.b();
    let x = (star(&state.x, v, gamma) - v * (bbar * state.tau)) * gamma;
    let u = (star(&state.u, v, gamma) - v * b) * gamma;
    Ok(KinematicState::new(state.tau, x, u))
}

/// b′ = γ(v)[b − u·v/c].
pub fn b_transform(b: f64, u: &Vector3<f64>, v: &Vector3<f64>) -> Result<f64> {
    Ok(lorentz_gamma(v)? * (b - u.dot(v)))
}

/// b = γ(v)[b′ + u′·v/c].
pub fn b_inverse(b_prime: f64, u_prime: &Vector3<f64>, v: &Vector3<f64>) -> Result<f64> {
    Ok(lorentz_gamma(v)? * (b_prime + u_prime.dot(v)))
}

/// t(τ) = (1/c)∫b ds by the cumulative trapezoid rule, starting at t = τ₀.
pub fn coordinate_time_along(taus: &[f64], bs: &[f64]) -> Result<Vec<f64>> {
    if taus.len() != bs.len() {
        return Err(Error::Validation("tau and b samples differ in length".into()));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation("tau samples must increase strictly".into()));
    }
    let mut t = Vec::with_capacity(taus.len());
    let Some(&t0) = taus.first() else {
        return Ok(t);
    };
    t.push(t0);
    let mut acc = t0;
    for i in 1..taus.len() {
        acc += 0.5 * (bs[i] + bs[i - 1]) * (taus[i] - taus[i - 1]);
        t.push(acc);
    }
    Ok(t)
}
