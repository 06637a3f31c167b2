//! Pauli and Dirac matrices in the standard (Dirac) representation.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector3, Vector4};
use num_complex::Complex64;

pub type Spinor2 = Vector2<Complex64>;
pub type Spinor4 = Vector4<Complex64>;
pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli() -> [Mat2; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// σ·v for a real vector.
pub fn sigma_dot(v: &Vector3<f64>) -> Mat2 {
    let [s1, s2, s3] = pauli();
    s1 * Complex64::from(v.x) + s2 * Complex64::from(v.y) + s3 * Complex64::from(v.z)
}

fn blocks(tl: &Mat2, tr: &Mat2, bl: &Mat2, br: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(tl);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(tr);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(bl);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(br);
    m
}

/// The constant matrices αᵢ, β and Σᵢ.
#[derive(Debug, Clone)]
pub struct DiracAlgebra {
    pub alpha: [Mat4; 3],
    pub beta: Mat4,
    pub sigma: [Mat4; 3],
}

impl Default for DiracAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl DiracAlgebra {
    pub fn new() -> Self {
        let z = Mat2::zeros();
        let id = Mat2::identity();
        let s = pauli();
        Self {
            alpha: s.map(|si| blocks(&z, &si, &si, &z)),
            beta: blocks(&id, &z, &z, &(-id)),
            sigma: s.map(|si| blocks(&si, &z, &z, &si)),
        }
    }

    pub fn alpha_dot(&self, v: &Vector3<f64>) -> Mat4 {
        self.alpha[0] * Complex64::from(v.x)
            + self.alpha[1] * Complex64::from(v.y)
            + self.alpha[2] * Complex64::from(v.z)
    }

    pub fn sigma_dot(&self, v: &Vector3<f64>) -> Mat4 {
        self.sigma[0] * Complex64::from(v.x)
            + self.sigma[1] * Complex64::from(v.y)
            + self.sigma[2] * Complex64::from(v.z)
    }
}

pub fn join(upper: &Spinor2, lower: &Spinor2) -> Spinor4 {
    Spinor4::new(upper[0], upper[1], lower[0], lower[1])
}

pub fn split(psi: &Spinor4) -> (Spinor2, Spinor2) {
    (Spinor2::new(psi[0], psi[1]), Spinor2::new(psi[2], psi[3]))
}

/// Σ ψᵢ χ̄ᵢ, linear in the first slot.
pub fn pair_inner(a: &Spinor2, b: &Spinor2) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj()
}
