//! Hydrogen eigenvalues for the Dirac equation and its proper-time extension,
//! the truncated perturbation series, and the proper-time Hamiltonians applied
//! to plane-wave spinors.
//!
//! Absolute energies are O(mc²) while the interesting structure sits at
//! α⁴mc² ~ 1e-4 eV, so every formula also exists in an "offset" form
//! (energy − mc²) evaluated without cancellation. Relative levels and the
//! series checks go through the offsets.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{join, sigma_dot, DiracAlgebra, Spinor2, Spinor4};
use crate::constants::{BoundState, PhysicalConstants};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Dirac,
    ProperTime,
}

/// λₙ − mc² for quantum numbers (n, κ) at coupling α.
pub fn dirac_offset(n: u32, kappa: u32, alpha: f64, mc2: f64) -> Result<f64> {
    let (nf, kf) = (n as f64, kappa as f64);
    if kappa == 0 || kappa > n {
        return Err(Error::domain(format!("need 1 <= kappa <= n, got n={n}, kappa={kappa}")));
    }
    if alpha >= kf {
        return Err(Error::domain(format!(
            "alpha = {alpha} >= kappa = {kappa} leaves the real axis"
        )));
    }
    let denom = nf - kf + (kf * kf - alpha * alpha).sqrt();
    let x = alpha * alpha / (denom * denom);
    let root = (1.0 + x).sqrt();
    // (1+x)^(-1/2) - 1 without cancellation
    Ok(-mc2 * x / (root * (1.0 + root)))
}

/// E − mc² for the proper-time map applied to a Dirac level with offset d.
pub fn proper_time_offset(dirac_offset: f64, mc2: f64) -> f64 {
    dirac_offset * (2.0 * mc2 + dirac_offset) / (2.0 * mc2)
}

/// Exact Dirac eigenvalue λₙ in eV.
pub fn dirac_eigenvalue(state: &BoundState, c: &PhysicalConstants) -> Result<f64> {
    Ok(c.mc2_ev + dirac_offset(state.n(), state.kappa(), c.alpha, c.mc2_ev)?)
}

/// Eₙ = λ²/(2mc²) + mc²/2.
pub fn proper_time_eigenvalue(lambda_ev: f64, c: &PhysicalConstants) -> f64 {
    lambda_ev * lambda_ev / (2.0 * c.mc2_ev) + 0.5 * c.mc2_ev
}

/// Level energy minus mc² for the chosen theory.
pub fn level_offset(state: &BoundState, which: Theory, c: &PhysicalConstants) -> Result<f64> {
    let d = dirac_offset(state.n(), state.kappa(), c.alpha, c.mc2_ev)?;
    Ok(match which {
        Theory::Dirac => d,
        Theory::ProperTime => proper_time_offset(d, c.mc2_ev),
    })
}

/// Dirac λ and proper-time E for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPair {
    pub state: BoundState,
    pub lambda_ev: f64,
    pub e_pt_ev: f64,
}

pub fn level_pair(state: &BoundState, c: &PhysicalConstants) -> Result<LevelPair> {
    let lambda_ev = dirac_eigenvalue(state, c)?;
    Ok(LevelPair {
        state: *state,
        lambda_ev,
        e_pt_ev: proper_time_eigenvalue(lambda_ev, c),
    })
}

/// Truncated expansion of λₙ through α⁶, minus mc².
pub fn dirac_series_offset(n: u32, kappa: u32, alpha: f64, mc2: f64) -> f64 {
    let (nf, kf) = (n as f64, kappa as f64);
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    mc2 * (-a2 / (2.0 * nf * nf) - a4 / (2.0 * nf.powi(4)) * (nf / kf - 0.75)
        + a6 / (8.0 * nf.powi(5) * kf) * (nf * nf / (kf * kf) + 3.0))
}

/// Truncated expansion of Eₙ through α⁶, minus mc².
pub fn proper_time_series_offset(n: u32, kappa: u32, alpha: f64, mc2: f64) -> f64 {
    let (nf, kf) = (n as f64, kappa as f64);
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    mc2 * (-a2 / (2.0 * nf * nf) - a4 / (2.0 * nf.powi(4)) * (nf / kf - 1.0)
        + a6 / (4.0 * nf.powi(5) * kf) * (nf / kf + 8.0))
}

pub fn dirac_series(state: &BoundState, c: &PhysicalConstants) -> f64 {
    c.mc2_ev + dirac_series_offset(state.n(), state.kappa(), c.alpha, c.mc2_ev)
}

pub fn proper_time_series(state: &BoundState, c: &PhysicalConstants) -> f64 {
    c.mc2_ev + proper_time_series_offset(state.n(), state.kappa(), c.alpha, c.mc2_ev)
}

/// E(state) − E(reference) for one theory, in eV.
pub fn relative_level(
    state: &BoundState,
    reference: &BoundState,
    which: Theory,
    c: &PhysicalConstants,
) -> Result<f64> {
    if state == reference {
        return Ok(0.0);
    }
    Ok(level_offset(state, which, c)? - level_offset(reference, which, c)?)
}

/// Leading-order λₙ − Eₙ = −α⁴mc²/(8n⁴).
pub fn eigenvalue_gap_leading(state: &BoundState, c: &PhysicalConstants) -> f64 {
    let n4 = (state.n() as f64).powi(4);
    -c.alpha.powi(4) * c.mc2_ev / (8.0 * n4)
}

/// Exact λₙ − Eₙ = −(mc² − λₙ)²/(2mc²).
pub fn eigenvalue_gap_exact(state: &BoundState, c: &PhysicalConstants) -> Result<f64> {
    let d = dirac_offset(state.n(), state.kappa(), c.alpha, c.mc2_ev)?;
    Ok(-d * d / (2.0 * c.mc2_ev))
}

/// Plane-wave four-spinor e^{i(k·x − Et/ħ)}(ψ, φ) in a constant scalar
/// potential. The vector-potential and potential-gradient slots exist so
/// callers can describe backgrounds the plane-wave algebra cannot handle;
/// operators reject them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorPlaneWave {
    /// Wave vector in 1/nm.
    pub k: Vector3<f64>,
    pub upper: Spinor2,
    pub lower: Spinor2,
    pub v0_ev: f64,
    /// eA/ħc in 1/nm.
    pub vector_potential: Vector3<f64>,
    /// ∇V in eV/nm.
    pub potential_gradient: Vector3<f64>,
}

impl SpinorPlaneWave {
    pub fn new(k: Vector3<f64>, upper: Spinor2, lower: Spinor2, v0_ev: f64) -> Self {
        Self {
            k,
            upper,
            lower,
            v0_ev,
            vector_potential: Vector3::zeros(),
            potential_gradient: Vector3::zeros(),
        }
    }

    /// Positive-energy branch: lower = ħc(σ·k)·upper / (E − V₀ + mc²).
    pub fn positive_energy(
        k: Vector3<f64>,
        upper: Spinor2,
        v0_ev: f64,
        c: &PhysicalConstants,
    ) -> Self {
        let ek = free_energy(&k, c);
        let scale = Complex64::from(c.hbar_c_ev_nm / (ek + c.mc2_ev));
        let lower = sigma_dot(&k) * upper * scale;
        Self::new(k, upper, lower, v0_ev)
    }

    /// Negative-energy branch: upper = ħc(σ·k)·lower / (E − V₀ − mc²).
    pub fn negative_energy(
        k: Vector3<f64>,
        lower: Spinor2,
        v0_ev: f64,
        c: &PhysicalConstants,
    ) -> Self {
        let ek = free_energy(&k, c);
        let scale = Complex64::from(-c.hbar_c_ev_nm / (ek + c.mc2_ev));
        let upper = sigma_dot(&k) * lower * scale;
        Self::new(k, upper, lower, v0_ev)
    }

    /// √((ħck)² + (mc²)²).
    pub fn free_energy(&self, c: &PhysicalConstants) -> f64 {
        free_energy(&self.k, c)
    }

    pub fn spinor(&self) -> Spinor4 {
        join(&self.upper, &self.lower)
    }

    fn check_plane_wave_regime(&self) -> Result<()> {
        if self.vector_potential.norm() != 0.0 {
            return Err(Error::Unsupported(
                "nonzero vector potential; only A = 0 plane waves are handled".into(),
            ));
        }
        if self.potential_gradient.norm() != 0.0 {
            return Err(Error::Unsupported(
                "nonconstant scalar potential; only constant V plane waves are handled".into(),
            ));
        }
        let finite = self.k.iter().all(|x| x.is_finite())
            && self.v0_ev.is_finite()
            && self.spinor().iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::Unsupported("non-finite plane-wave data".into()));
        }
        Ok(())
    }
}

pub(crate) fn free_energy(k: &Vector3<f64>, c: &PhysicalConstants) -> f64 {
    (c.hbar_c_ev_nm * k.norm()).hypot(c.mc2_ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PtVariant {
    /// Proper-time Dirac operator, H_D²/2mc² + mc²/2 expanded.
    DiracPt,
    /// Square-root operator with V entering symmetrised next to β√(…).
    SqrtPt1,
    /// Square-root operator with V inside the mass term.
    SqrtPt2,
}

/// K·Ψ for a plane wave with A = 0, constant V and B = 0, where momenta act
/// as ħk and β√(c²π² + m²c⁴) acts as β·E_k.
pub fn apply_pt_hamiltonian(
    variant: PtVariant,
    wave: &SpinorPlaneWave,
    c: &PhysicalConstants,
) -> Result<Spinor4> {
    wave.check_plane_wave_regime()?;
    let mc2 = c.mc2_ev;
    let v = wave.v0_ev;
    let hck = wave.k * c.hbar_c_ev_nm;
    let kinetic = hck.norm_squared() / (2.0 * mc2);
    let psi = wave.spinor();
    let dirac = DiracAlgebra::new();
    let diagonal = Complex64::from(kinetic + mc2 + v * v / (2.0 * mc2));
    let beta_psi = dirac.beta * psi;
    let out = match variant {
        PtVariant::DiracPt => {
            psi * diagonal
                + beta_psi * Complex64::from(v)
                + dirac.alpha_dot(&hck) * psi * Complex64::from(v / mc2)
        }
        PtVariant::SqrtPt1 => {
            let ek = wave.free_energy(c);
            psi * diagonal + beta_psi * Complex64::from(v * ek / mc2)
        }
        PtVariant::SqrtPt2 => psi * diagonal + beta_psi * Complex64::from(v),
    };
    Ok(out)
}

/// H_D·Ψ = (cα·ħk + βmc² + V)Ψ on a plane wave.
pub fn apply_dirac_hamiltonian(wave: &SpinorPlaneWave, c: &PhysicalConstants) -> Result<Spinor4> {
    wave.check_plane_wave_regime()?;
    let dirac = DiracAlgebra::new();
    let psi = wave.spinor();
    let hck = wave.k * c.hbar_c_ev_nm;
    Ok(dirac.alpha_dot(&hck) * psi
        + dirac.beta * psi * Complex64::from(c.mc2_ev)
        + psi * Complex64::from(wave.v0_ev))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codata() -> PhysicalConstants {
        PhysicalConstants::codata_2018()
    }

    fn st(label: &str) -> BoundState {
        label.parse().unwrap()
    }

    #[test]
    fn zero_coupling_limit() {
        assert_eq!(dirac_offset(3, 2, 0.0, 511.0).unwrap(), 0.0);
        assert_eq!(dirac_series_offset(3, 2, 0.0, 511.0), 0.0);
        assert_eq!(proper_time_series_offset(3, 2, 0.0, 511.0), 0.0);
    }

    #[test]
    fn ground_state_closed_form() {
        let c = codata();
        let lam = dirac_eigenvalue(&BoundState::ground(), &c).unwrap();
        let direct = c.mc2_ev * (1.0 - c.alpha * c.alpha).sqrt();
        assert!(((lam - direct) / direct).abs() < 1e-15);
        let e = proper_time_eigenvalue(lam, &c);
        let exact = c.mc2_ev * (1.0 - 0.5 * c.alpha * c.alpha);
        assert!(((e - exact) / exact).abs() < 1e-14);
    }

    #[test]
    fn proper_time_map_fixed_points() {
        let c = codata();
        assert_eq!(proper_time_eigenvalue(c.mc2_ev, &c), c.mc2_ev);
        assert_eq!(proper_time_eigenvalue(0.0, &c), 0.5 * c.mc2_ev);
    }

    #[test]
    fn alpha_not_below_kappa_is_domain_error() {
        assert!(matches!(dirac_offset(2, 1, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(dirac_offset(2, 3, 0.1, 1.0).is_err());
    }

    #[test]
    fn truncated_series_ground_state() {
        let a: f64 = 0.05;
        let d = dirac_series_offset(1, 1, a, 1.0);
        let expected = -a.powi(2) / 2.0 - a.powi(4) / 8.0 + a.powi(6) / 2.0;
        assert!((d - expected).abs() < 1e-18);
        let p = proper_time_series_offset(1, 1, a, 1.0);
        let expected = -a.powi(2) / 2.0 + 2.25 * a.powi(6);
        assert!((p - expected).abs() < 1e-18);
    }

    #[test]
    fn relative_level_to_self_is_zero() {
        let c = codata();
        let s = st("3d(j=5/2)");
        assert_eq!(relative_level(&s, &s, Theory::Dirac, &c).unwrap(), 0.0);
    }

    #[test]
    fn second_level_gap() {
        let c = codata();
        let g = BoundState::ground();
        let d = relative_level(&st("2s"), &g, Theory::Dirac, &c).unwrap();
        let p = relative_level(&st("2s"), &g, Theory::ProperTime, &c).unwrap();
        assert!((d - 10.20439429).abs() < 1e-5);
        assert!((p - 10.20422448).abs() < 1e-5);
        assert!((d - p - 1.6981e-4).abs() < 2e-8);
    }

    #[test]
    fn leading_gap_scaling() {
        let c = codata();
        let g1 = eigenvalue_gap_leading(&st("1s"), &c);
        assert!((g1 + 1.811_304_0e-4).abs() < 1e-11);
        let g2 = eigenvalue_gap_leading(&st("2s"), &c);
        assert!((g1 / g2 - 16.0).abs() < 1e-12);
    }

    #[test]
    fn level_pair_ordering() {
        let c = codata();
        let p = level_pair(&st("4f(j=7/2)"), &c).unwrap();
        assert!(p.e_pt_ev >= p.lambda_ev);
        assert!(p.lambda_ev > 0.0 && p.lambda_ev <= c.mc2_ev);
        assert!(p.e_pt_ev > 0.5 * c.mc2_ev && p.e_pt_ev <= c.mc2_ev);
    }

    #[test]
    fn variants_collapse_without_potential() {
        let c = codata();
        let up = Spinor2::new(Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7));
        let wave = SpinorPlaneWave::positive_energy(Vector3::new(1e3, -2e3, 5e2), up, 0.0, &c);
        let kinetic = (c.hbar_c_ev_nm * wave.k.norm()).powi(2) / (2.0 * c.mc2_ev);
        let expected = wave.spinor() * Complex64::from(kinetic + c.mc2_ev);
        for v in [PtVariant::DiracPt, PtVariant::SqrtPt1, PtVariant::SqrtPt2] {
            let out = apply_pt_hamiltonian(v, &wave, &c).unwrap();
            assert!((out - expected).norm() <= 1e-12 * expected.norm());
        }
    }

    #[test]
    fn rest_frame_gives_rest_energy() {
        let c = codata();
        let up = Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let wave = SpinorPlaneWave::positive_energy(Vector3::zeros(), up, 0.0, &c);
        let out = apply_pt_hamiltonian(PtVariant::DiracPt, &wave, &c).unwrap();
        assert_eq!(out, wave.spinor() * Complex64::from(c.mc2_ev));
    }

    #[test]
    fn non_plane_wave_rejected() {
        let c = codata();
        let up = Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let mut wave = SpinorPlaneWave::positive_energy(Vector3::zeros(), up, 1.0, &c);
        wave.potential_gradient = Vector3::new(0.0, 0.0, 1.0);
        assert!(matches!(
            apply_pt_hamiltonian(PtVariant::SqrtPt2, &wave, &c),
            Err(Error::Unsupported(_))
        ));
        wave.potential_gradient = Vector3::zeros();
        wave.vector_potential = Vector3::new(1.0, 0.0, 0.0);
        assert!(apply_pt_hamiltonian(PtVariant::DiracPt, &wave, &c).is_err());
    }

    #[test]
    fn dirac_pt_equals_squared_hamiltonian() {
        let c = codata();
        let up = Spinor2::new(Complex64::new(0.3, -0.4), Complex64::new(0.5, 0.2));
        let v0 = -0.07 * c.mc2_ev;
        let wave = SpinorPlaneWave::positive_energy(Vector3::new(800.0, 1200.0, -300.0), up, v0, &c);
        let energy = wave.free_energy(&c) + v0;
        // H_D acts as multiplication by the eigenvalue on this branch
        let h_psi = apply_dirac_hamiltonian(&wave, &c).unwrap();
        assert!((h_psi - wave.spinor() * Complex64::from(energy)).norm() < 1e-9 * energy);
        let k_psi = apply_pt_hamiltonian(PtVariant::DiracPt, &wave, &c).unwrap();
        let expected =
            wave.spinor() * Complex64::from(energy * energy / (2.0 * c.mc2_ev) + 0.5 * c.mc2_ev);
        assert!((k_psi - expected).norm() <= 1e-12 * expected.norm());
    }
}
