//! Closed-form E and B of a point charge in terms of its proper velocity
//! and acceleration at emission (c = 1). No retardation solve is done: the
//! caller supplies the emission geometry.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::kinematics::collaborative_speed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceEmissionState {
    /// Field point minus retarded source position.
    pub r: Vector3<f64>,
    pub u: Vector3<f64>,
    /// Proper acceleration du/dτ.
    pub a: Vector3<f64>,
}

impl SourceEmissionState {
    pub fn new(r: Vector3<f64>, u: Vector3<f64>, a: Vector3<f64>) -> Self {
        Self { r, u, a }
    }

    pub fn b(&self) -> f64 {
        collaborative_speed(&self.u)
    }

    /// s = r − (r·u)/b.
    pub fn s(&self) -> f64 {
        self.r.norm() - self.r.dot(&self.u) / self.b()
    }

    /// r_u = r − (r/b)u.
    pub fn r_u(&self) -> Vector3<f64> {
        self.r - self.u * (self.r.norm() / self.b())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldValues {
    pub e: Vector3<f64>,
    pub b: Vector3<f64>,
    /// Velocity, acceleration and (u·a) terms of E.
    pub e_terms: [Vector3<f64>; 3],
    pub b_terms: [Vector3<f64>; 3],
}

impl FieldValues {
    /// Component of the (u·a) term of E along the direction of motion.
    pub fn longitudinal(&self, u: &Vector3<f64>) -> f64 {
        let n = u.norm();
        if n == 0.0 {
            0.0
        } else {
            self.e_terms[2].dot(u) / n
        }
    }
}

pub fn retarded_fields(src: &SourceEmissionState, e_charge: f64) -> Result<FieldValues> {
    let r = src.r.norm();
    let s = src.s();
    if !(r > 0.0) || !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "invalid emission geometry: r = {r}, s = {s}"
        )));
    }
    let b = src.b();
    let u = &src.u;
    let a = &src.a;
    let rv = &src.r;
    let ru = src.r_u();
    let s3 = s * s * s;
    let ua = u.dot(a);

    let velocity = 1.0 - u.norm_squared() / (b * b);
    let r_ru_a = rv.cross(&ru.cross(a));
    let e_terms = [
        ru * (e_charge * velocity / s3),
        r_ru_a * (e_charge / (b * b * s3)),
        rv.cross(&u.cross(rv)) * (e_charge * ua / (b.powi(4) * s3)),
    ];
    let b_terms = [
        rv.cross(&ru) * (e_charge * velocity / (r * s3)),
        rv.cross(&r_ru_a) * (e_charge / (r * b * b * s3)),
        rv.cross(u) * (e_charge * r * ua / (b.powi(4) * s3)),
    ];
    Ok(FieldValues {
        e: e_terms.iter().sum(),
        b: b_terms.iter().sum(),
        e_terms,
        b_terms,
    })
}
