//! Canonical proper-time Hamiltonian K = H²/2mc² + mc²/2 and the matching
//! Lagrangian, in units with c = m = 1.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

use super::kinematics::collaborative_speed;

/// Attractive Coulomb potential V = −coupling/r. With c = m = 1 the
/// coupling e² equals the classical radius r₀ in the chosen length unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombModel {
    pub coupling: f64,
}

impl CoulombModel {
    pub fn new(coupling: f64) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::domain(format!(
                "coupling must be finite and non-negative, got {coupling}"
            )));
        }
        Ok(Self { coupling })
    }

    pub fn free() -> Self {
        Self { coupling: 0.0 }
    }

    /// Hydrogen in units of ħ/mc and mc²: the coupling is α.
    pub fn hydrogen(c: &PhysicalConstants) -> Self {
        Self { coupling: c.alpha }
    }

    pub fn classical_radius(&self) -> f64 {
        self.coupling
    }

    fn radius(&self, x: &Vector3<f64>) -> Result<f64> {
        let r = x.norm();
        if r > 0.0 && r.is_finite() {
            Ok(r)
        } else {
            Err(Error::domain(format!("Coulomb singularity: |x| = {r}")))
        }
    }

    pub fn potential(&self, x: &Vector3<f64>) -> Result<f64> {
        Ok(-self.coupling / self.radius(x)?)
    }

    pub fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        let r = self.radius(x)?;
        Ok(x * (self.coupling / (r * r * r)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: Vector3<f64>,
    /// Canonical momentum.
    pub p: Vector3<f64>,
}

impl PhaseState {
    pub fn new(x: Vector3<f64>, p: Vector3<f64>) -> Self {
        Self { x, p }
    }
}

/// H₀ = √(c²π² + m²c⁴).
pub fn free_hamiltonian(pi: &Vector3<f64>) -> f64 {
    (1.0 + pi.norm_squared()).sqrt()
}

/// π²/2m + mc² + V²/2mc² + V·H₀/mc² with π = p − (e/c)A.
pub fn canonical_k(ph: &PhaseState, v: f64, a: &Vector3<f64>, charge: f64) -> f64 {
    let pi = ph.p - a * charge;
    0.5 * pi.norm_squared() + 1.0 + 0.5 * v * v + v * free_hamiltonian(&pi)
}

/// K written in terms of the proper velocity (valid for A = 0 or constant).
pub fn canonical_k_of_velocity(u: &Vector3<f64>, v: f64) -> f64 {
    let u2 = u.norm_squared();
    let b = collaborative_speed(u);
    0.5 * u2 - v * u2 / b + v * v * u2 / (2.0 * b * b) + 1.0 - 0.5 * v * v + v * b
}

/// p = mu − Vu/(cb) + (e/c)A.
pub fn momentum_of_velocity(u: &Vector3<f64>, v: f64, a: &Vector3<f64>, charge: f64) -> Vector3<f64> {
    let b = collaborative_speed(u);
    u - u * (v / b) + a * charge
}

/// ½mu² + (e/c)A·u − mc² − Vb/c + (V²/2mc²)(1 − u²/b²).
pub fn lagrangian(u: &Vector3<f64>, v: f64, a: &Vector3<f64>, charge: f64) -> f64 {
    let u2 = u.norm_squared();
    let b = collaborative_speed(u);
    0.5 * u2 + charge * a.dot(u) - 1.0 - v * b + 0.5 * v * v * (1.0 - u2 / (b * b))
}

/// Proper velocity dx/dτ = [1 + V/H₀]π/m.
pub fn velocity(ph: &PhaseState, v: f64) -> Vector3<f64> {
    let h0 = free_hamiltonian(&ph.p);
    ph.p * (1.0 + v / h0)
}

/// Hamilton's equations for the Coulomb model with A = 0:
/// dx/dτ = ∂K/∂p and dp/dτ = −∂K/∂x = −(H₀ + V)∇V/mc².
pub fn hamilton_rhs(ph: &PhaseState, model: &CoulombModel) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let v = model.potential(&ph.x)?;
    let grad = model.gradient(&ph.x)?;
    let h0 = free_hamiltonian(&ph.p);
    Ok((ph.p * (1.0 + v / h0), -grad * (h0 + v)))
}

/// Reduced Coulomb force −(b/c)∇V[1 + V/(mcb)], which equals the
/// canonical force when H₀ is replaced by mcb.
pub fn reduced_force(x: &Vector3<f64>, b: f64, model: &CoulombModel) -> Result<Vector3<f64>> {
    let v = model.potential(x)?;
    let grad = model.gradient(x)?;
    Ok(-grad * (b * force_factor(v, b)))
}

/// 1 + V/(mcb); vanishes where V = −mcb.
pub fn force_factor(v: f64, b: f64) -> f64 {
    1.0 + v / b
}

/// Radius where the reduced force changes sign: r = e²/(mcb), which is r₀
/// at low speed.
pub fn critical_radius(model: &CoulombModel, b: f64) -> f64 {
    model.coupling / b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_energy() {
        let ph = PhaseState::new(Vector3::new(1.0, 0.0, 0.0), Vector3::zeros());
        assert_eq!(canonical_k(&ph, 0.0, &Vector3::zeros(), 1.0), 1.0);
    }

    #[test]
    fn free_collapse() {
        let p = Vector3::new(0.3, -2.0, 1.1);
        let ph = PhaseState::new(Vector3::zeros(), p);
        assert_eq!(canonical_k(&ph, 0.0, &Vector3::zeros(), 1.0), 0.5 * p.norm_squared() + 1.0);
    }

    #[test]
    fn square_form() {
        let ph = PhaseState::new(Vector3::zeros(), Vector3::new(0.4, 0.1, -0.7));
        let a = Vector3::new(0.2, 0.0, 0.3);
        let (v, e) = (-0.35, 0.8);
        let h0 = free_hamiltonian(&(ph.p - a * e));
        let expected = 0.5 * (h0 + v).powi(2) + 0.5;
        assert!((canonical_k(&ph, v, &a, e) / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lagrangian_limits() {
        let z = Vector3::zeros();
        // The V²/2mc² term survives at rest.
        assert_eq!(lagrangian(&z, -0.25, &z, 1.0), -1.0 + 0.25 + 0.5 * 0.0625);
        let u = Vector3::new(0.5, 0.5, 0.0);
        assert!((lagrangian(&u, 0.0, &z, 1.0) - (0.25 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn free_rhs() {
        let ph = PhaseState::new(Vector3::new(1.0, 2.0, 3.0), Vector3::new(0.1, 0.0, -0.2));
        let (dx, dp) = hamilton_rhs(&ph, &CoulombModel::free()).unwrap();
        assert_eq!(dx, ph.p);
        assert_eq!(dp, Vector3::zeros());
    }

    #[test]
    fn critical_point_at_classical_radius() {
        let m = CoulombModel::new(0.01).unwrap();
        let r0 = m.classical_radius();
        let f = reduced_force(&Vector3::new(r0, 0.0, 0.0), 1.0, &m).unwrap();
        assert_eq!(f, Vector3::zeros());
        let f = reduced_force(&Vector3::new(0.5 * r0, 0.0, 0.0), 1.0, &m).unwrap();
        assert!(f.x > 0.0);
        assert!(reduced_force(&Vector3::zeros(), 1.0, &m).is_err());
        assert_eq!(critical_radius(&m, 1.0), r0);
    }
}
