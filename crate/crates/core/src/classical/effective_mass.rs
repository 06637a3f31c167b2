//! Trajectory effective mass μ = {(ħ²/c²)[b̈/2b³ − 3ḃ²/4b⁴]}^{1/2}, with
//! ħ = c = m = 1. Derivatives come from three-point finite differences on
//! the (possibly non-uniform) τ grid.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::kinematics::collaborative_speed;
use super::orbit::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuSample {
    pub tau: f64,
    /// b̈/2b³ − 3ḃ²/4b⁴ from differences of b.
    pub bracket_b: f64,
    /// (u·ü + u̇²)/2b⁴ − 5(u·u̇)²/4b⁶ from differences of u.
    pub bracket_u: f64,
    /// √|bracket_b|; the bracket's sign says whether μ is real.
    pub mu: f64,
}

// Derivatives at `at` of the parabola through three points.
fn parabola_derivs(t: [f64; 3], f: [f64; 3], at: f64) -> (f64, f64) {
    let d01 = (f[1] - f[0]) / (t[1] - t[0]);
    let d12 = (f[2] - f[1]) / (t[2] - t[1]);
    let second = 2.0 * (d12 - d01) / (t[2] - t[0]);
    // Slope of the chord through t0, t1 is the derivative at their midpoint.
    let first = d01 + 0.5 * second * (2.0 * at - t[0] - t[1]);
    (first, second)
}

fn stencil(n: usize, i: usize) -> usize {
    i.saturating_sub(1).min(n - 3)
}

fn check_grid(taus: &[f64], len: usize) -> Result<()> {
    if taus.len() != len {
        return Err(Error::Validation("sample arrays differ in length".into()));
    }
    if len < 3 {
        return Err(Error::Validation(format!(
            "at least 3 samples are needed for second differences, got {len}"
        )));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation("tau samples must increase strictly".into()));
    }
    Ok(())
}

/// (f′, f″) at every sample.
pub fn scalar_derivatives(taus: &[f64], f: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_grid(taus, f.len())?;
    let n = f.len();
    Ok((0..n)
        .map(|i| {
            let s = stencil(n, i);
            parabola_derivs([taus[s], taus[s + 1], taus[s + 2]], [f[s], f[s + 1], f[s + 2]], taus[i])
        })
        .collect())
}

fn vector_derivatives(taus: &[f64], u: &[Vector3<f64>]) -> Result<Vec<(Vector3<f64>, Vector3<f64>)>> {
    let mut first = vec![Vector3::zeros(); u.len()];
    let mut second = vec![Vector3::zeros(); u.len()];
    for axis in 0..3 {
        let comp: Vec<f64> = u.iter().map(|v| v[axis]).collect();
        for (i, (d1, d2)) in scalar_derivatives(taus, &comp)?.into_iter().enumerate() {
            first[i][axis] = d1;
            second[i][axis] = d2;
        }
    }
    Ok(first.into_iter().zip(second).collect())
}

pub fn bracket_from_b(b: f64, b_dot: f64, b_ddot: f64) -> f64 {
    b_ddot / (2.0 * b.powi(3)) - 3.0 * b_dot * b_dot / (4.0 * b.powi(4))
}

pub fn bracket_from_u(u: &Vector3<f64>, u_dot: &Vector3<f64>, u_ddot: &Vector3<f64>) -> f64 {
    let b = collaborative_speed(u);
    let udu = u.dot(u_dot);
    (u.dot(u_ddot) + u_dot.norm_squared()) / (2.0 * b.powi(4)) - 5.0 * udu * udu / (4.0 * b.powi(6))
}

/// μ along sampled proper velocities.
pub fn effective_mass_from_velocity(taus: &[f64], u: &[Vector3<f64>]) -> Result<Vec<MuSample>> {
    check_grid(taus, u.len())?;
    let bs: Vec<f64> = u.iter().map(collaborative_speed).collect();
    let b_derivs = scalar_derivatives(taus, &bs)?;
    let u_derivs = vector_derivatives(taus, u)?;
    Ok((0..u.len())
        .map(|i| {
            let (bd, bdd) = b_derivs[i];
            let (ud, udd) = u_derivs[i];
            let bracket_b = bracket_from_b(bs[i], bd, bdd);
            MuSample {
                tau: taus[i],
                bracket_b,
                bracket_u: bracket_from_u(&u[i], &ud, &udd),
                mu: bracket_b.abs().sqrt(),
            }
        })
        .collect())
}

pub fn effective_mass_along(traj: &Trajectory) -> Result<Vec<MuSample>> {
    let taus = traj.taus();
    let u: Vec<Vector3<f64>> = traj.samples.iter().map(|s| s.u).collect();
    effective_mass_from_velocity(&taus, &u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_exact_on_quadratics() {
        let f = |t: f64| 3.0 * t * t - 2.0 * t + 1.0;
        let t = [0.1, 0.35, 0.9];
        for at in t {
            let (d1, d2) = parabola_derivs(t, t.map(f), at);
            assert!((d1 - (6.0 * at - 2.0)).abs() < 1e-12);
            assert!((d2 - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_motion_has_no_mass() {
        let taus: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let u = vec![Vector3::new(0.4, -1.0, 2.0); taus.len()];
        for s in effective_mass_from_velocity(&taus, &u).unwrap() {
            assert_eq!(s.mu, 0.0);
            assert_eq!(s.bracket_u, 0.0);
        }
    }

    #[test]
    fn too_few_samples() {
        let err = effective_mass_from_velocity(&[0.0, 1.0], &[Vector3::zeros(); 2]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
