//! Separation of a Dirac spinor into particle and antiparticle pairs by
//! convolving one pair's history with the free phase propagator.
//!
//! Time is measured in ħ/eV, so every rate below is numerically an energy in
//! eV and the speed of light is ħc in nm per unit time. Only the plane-wave
//! regime (A = 0, V constant) is handled: σ·π then acts as ħ(σ·k).
//!
//! The infinite history integral is regularised by the adiabatic factor
//! e^{−εs} and the ε → 0 limit is taken by Richardson extrapolation over
//! ε, ε/2 and ε/4.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{pair_inner, sigma_dot, Spinor2};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::quadrature::composite_complex;
use crate::spectrum::free_energy;

/// Kronrod panels per period of the fastest oscillation in the integrand.
const PANELS_PER_PERIOD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationContext {
    pub v0_ev: f64,
    /// (V₀ − mc²)/ħ.
    pub b1: f64,
    /// (V₀ + mc²)/ħ.
    pub b2: f64,
    /// Adiabatic damping rate ε.
    pub epsilon: f64,
    /// Length T of the history that is integrated.
    pub history_window: f64,
    /// Largest acceptable e^{−εT} truncation factor.
    pub tolerance: f64,
}

impl SeparationContext {
    pub fn new(
        v0_ev: f64,
        epsilon: f64,
        history_window: f64,
        c: &PhysicalConstants,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(history_window > 0.0 && history_window.is_finite()) {
            return Err(Error::domain(format!(
                "history window must be positive, got {history_window}"
            )));
        }
        if !v0_ev.is_finite() {
            return Err(Error::domain("potential must be finite"));
        }
        Ok(Self {
            v0_ev,
            b1: v0_ev - c.mc2_ev,
            b2: v0_ev + c.mc2_ev,
            epsilon,
            history_window,
            tolerance: 1e-8,
        })
    }

    /// Context whose window satisfies εT = 20 at the smallest extrapolation
    /// rate ε/4.
    pub fn for_extrapolation(v0_ev: f64, epsilon: f64, c: &PhysicalConstants) -> Result<Self> {
        Self::new(v0_ev, epsilon, 80.0 / epsilon, c)
    }
}

/// u(t) = θ(t)e^{−ib₁t}.
pub fn propagator_u(t: f64, ctx: &SeparationContext) -> Complex64 {
    if t < 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(1.0, -ctx.b1 * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistorySample {
    pub t: f64,
    pub amplitudes: Spinor2,
}

/// A two-component amplitude known as a function of time.
pub trait History {
    fn at(&self, t: f64) -> Spinor2;

    /// Closed interval on which `at` is defined; `None` means everywhere.
    fn span(&self) -> Option<(f64, f64)> {
        None
    }
}

impl<F: Fn(f64) -> Spinor2> History for F {
    fn at(&self, t: f64) -> Spinor2 {
        self(t)
    }
}

/// amplitude·e^{−iEt}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveHistory {
    pub amplitude: Spinor2,
    pub energy_ev: f64,
}

impl History for PlaneWaveHistory {
    fn at(&self, t: f64) -> Spinor2 {
        self.amplitude * Complex64::from_polar(1.0, -self.energy_ev * t)
    }
}

/// Tabulated history with four-point Lagrange interpolation. The samples
/// must be sorted by time and dense on the scale of the fastest phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledHistory {
    samples: Vec<HistorySample>,
}

impl SampledHistory {
    pub fn new(samples: Vec<HistorySample>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Validation("a sampled history needs at least 4 samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Validation("history sample times must increase strictly".into()));
        }
        let finite = samples
            .iter()
            .all(|s| s.t.is_finite() && s.amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(Error::Validation("history samples must be finite".into()));
        }
        Ok(Self { samples })
    }
}

impl History for SampledHistory {
    fn at(&self, t: f64) -> Spinor2 {
        let s = &self.samples;
        let idx = s.partition_point(|h| h.t <= t);
        let start = idx.saturating_sub(2).min(s.len() - 4);
        let nodes = &s[start..start + 4];
        let mut out = Spinor2::zeros();
        for (i, ni) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (j, nj) in nodes.iter().enumerate() {
                if i != j {
                    w *= (t - nj.t) / (ni.t - nj.t);
                }
            }
            out += ni.amplitudes * Complex64::from(w);
        }
        out
    }

    fn span(&self) -> Option<(f64, f64)> {
        Some((self.samples[0].t, self.samples[self.samples.len() - 1].t))
    }
}

// ∫₀^T c·e^{−i·rate·s}(σ·k)/i · h(t−s)·e^{−εs} ds
fn damped_convolution<H: History + ?Sized>(
    k: &Vector3<f64>,
    history: &H,
    t_final: f64,
    rate: f64,
    epsilon: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Spinor2> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("damping rate must be positive"));
    }
    let window = ctx.history_window;
    if let Some((lo, hi)) = history.span() {
        if t_final - window < lo || t_final > hi {
            return Err(Error::Validation(format!(
                "history covers [{lo}, {hi}] but [{}, {t_final}] is required",
                t_final - window
            )));
        }
    }
    let tail = (-epsilon * window).exp();
    if tail > ctx.tolerance {
        return Err(Error::NonConvergence {
            what: "history convolution".into(),
            estimate: window,
            residual: tail,
        });
    }
    let sk = sigma_dot(k) * Complex64::new(0.0, -c.hbar_c_ev_nm);
    if k.norm() == 0.0 {
        return Ok(Spinor2::zeros());
    }
    let fastest = rate.abs() + free_energy(k, c) + ctx.v0_ev.abs();
    let panels = (window * fastest / std::f64::consts::TAU * PANELS_PER_PERIOD).ceil() as usize;

    let integrate_component = |comp: usize| {
        composite_complex(
            |s| {
                let h = history.at(t_final - s);
                let weight = Complex64::from_polar((-epsilon * s).exp(), -rate * s);
                weight * h[comp]
            },
            0.0,
            window,
            panels,
        )
        .0
    };
    let conv = Spinor2::new(integrate_component(0), integrate_component(1));
    Ok(sk * conv)
}

/// Lower pair at `t_final` from the upper-pair history, at damping ε.
pub fn separate_lower<H: History + ?Sized>(
    k: &Vector3<f64>,
    upper_history: &H,
    t_final: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Spinor2> {
    damped_convolution(k, upper_history, t_final, ctx.b1, ctx.epsilon, ctx, c)
}

/// Upper pair at `t_final` from the lower-pair history: the same convolution
/// with b₂ in place of b₁.
pub fn separate_upper<H: History + ?Sized>(
    k: &Vector3<f64>,
    lower_history: &H,
    t_final: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Spinor2> {
    damped_convolution(k, lower_history, t_final, ctx.b2, ctx.epsilon, ctx, c)
}

/// Damped results at ε, ε/2, ε/4 and their Richardson limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub epsilons: [f64; 3],
    pub damped: [Spinor2; 3],
    pub limit: Spinor2,
}

fn richardson(d: &[Spinor2; 3]) -> Spinor2 {
    let two = Complex64::from(2.0);
    let r1 = d[1] * two - d[0];
    let r2 = d[2] * two - d[1];
    (r2 * Complex64::from(4.0) - r1) / Complex64::from(3.0)
}

fn extrapolate<H: History + ?Sized>(
    k: &Vector3<f64>,
    history: &H,
    t_final: f64,
    rate: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Extrapolation> {
    let e0 = ctx.epsilon;
    let epsilons = [e0, 0.5 * e0, 0.25 * e0];
    let mut damped = [Spinor2::zeros(); 3];
    for (slot, eps) in damped.iter_mut().zip(epsilons) {
        *slot = damped_convolution(k, history, t_final, rate, eps, ctx, c)?;
    }
    Ok(Extrapolation {
        epsilons,
        limit: richardson(&damped),
        damped,
    })
}

pub fn separate_lower_extrapolated<H: History + ?Sized>(
    k: &Vector3<f64>,
    upper_history: &H,
    t_final: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Extrapolation> {
    extrapolate(k, upper_history, t_final, ctx.b1, ctx, c)
}

pub fn separate_upper_extrapolated<H: History + ?Sized>(
    k: &Vector3<f64>,
    lower_history: &H,
    t_final: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Extrapolation> {
    extrapolate(k, lower_history, t_final, ctx.b2, ctx, c)
}

/// ħc(σ·k)·upper/(E − V₀ + mc²).
pub fn plane_wave_lower_oracle(
    k: &Vector3<f64>,
    e_ev: f64,
    v0_ev: f64,
    upper: &Spinor2,
    c: &PhysicalConstants,
) -> Result<Spinor2> {
    let denom = e_ev - v0_ev + c.mc2_ev;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::domain("E − V₀ + mc² vanishes"));
    }
    Ok(sigma_dot(k) * upper * Complex64::from(c.hbar_c_ev_nm / denom))
}

/// ħc(σ·k)·lower/(E − V₀ − mc²).
pub fn plane_wave_upper_oracle(
    k: &Vector3<f64>,
    e_ev: f64,
    v0_ev: f64,
    lower: &Spinor2,
    c: &PhysicalConstants,
) -> Result<Spinor2> {
    let denom = e_ev - v0_ev - c.mc2_ev;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::domain("E − V₀ − mc² vanishes"));
    }
    Ok(sigma_dot(k) * lower * Complex64::from(c.hbar_c_ev_nm / denom))
}

/// |ψ|² + |φ|² with φ the separated lower pair.
pub fn density_rho(psi_now: &Spinor2, lower: &Spinor2) -> f64 {
    psi_now.norm_squared() + lower.norm_squared()
}

/// (ψ_a, ψ_b) + (A₁ψ_a, A₁ψ_b) at `t_final` in a unit box.
pub fn particle_inner_product<A: History + ?Sized, B: History + ?Sized>(
    psi_a: &A,
    psi_b: &B,
    k: &Vector3<f64>,
    t_final: f64,
    ctx: &SeparationContext,
    c: &PhysicalConstants,
) -> Result<Complex64> {
    let la = separate_lower_extrapolated(k, psi_a, t_final, ctx, c)?.limit;
    let lb = separate_lower_extrapolated(k, psi_b, t_final, ctx, c)?.limit;
    Ok(pair_inner(&psi_a.at(t_final), &psi_b.at(t_final)) + pair_inner(&la, &lb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codata() -> PhysicalConstants {
        PhysicalConstants::codata_2018()
    }

    fn up() -> Spinor2 {
        Spinor2::new(Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7))
    }

    #[test]
    fn propagator_basics() {
        let c = codata();
        let ctx = SeparationContext::new(0.0, 1.0, 100.0, &c).unwrap();
        assert_eq!(propagator_u(-1.0, &ctx), Complex64::new(0.0, 0.0));
        assert!((propagator_u(0.3, &ctx).norm() - 1.0).abs() < 1e-15);
        assert_eq!(ctx.b2 - ctx.b1, 2.0 * c.mc2_ev);
    }

    #[test]
    fn context_validation() {
        let c = codata();
        assert!(SeparationContext::new(0.0, 0.0, 1.0, &c).is_err());
        assert!(SeparationContext::new(0.0, 1.0, -1.0, &c).is_err());
    }

    #[test]
    fn zero_momentum_gives_zero() {
        let c = codata();
        let ctx = SeparationContext::for_extrapolation(0.0, 1e3, &c).unwrap();
        let h = PlaneWaveHistory { amplitude: up(), energy_ev: c.mc2_ev };
        let out = separate_lower(&Vector3::zeros(), &h, 0.0, &ctx, &c).unwrap();
        assert_eq!(out, Spinor2::zeros());
    }

    #[test]
    fn short_window_fails() {
        let c = codata();
        let ctx = SeparationContext::new(0.0, 1e3, 1e-3, &c).unwrap();
        let h = PlaneWaveHistory { amplitude: up(), energy_ev: c.mc2_ev };
        let k = Vector3::new(0.0, 0.0, 0.1 * c.compton_wavenumber());
        let err = separate_lower(&k, &h, 0.0, &ctx, &c).unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn oracle_along_z() {
        let c = codata();
        let kz = 0.5 * c.compton_wavenumber();
        let k = Vector3::new(0.0, 0.0, kz);
        let e = free_energy(&k, &c);
        let lower = plane_wave_lower_oracle(&k, e, 0.0, &up(), &c).unwrap();
        let s = c.hbar_c_ev_nm * kz / (e + c.mc2_ev);
        assert!((lower[0] - up()[0] * s).norm() < 1e-15);
        assert!((lower[1] + up()[1] * s).norm() < 1e-15);
        assert!(s < 1.0);
        assert!(plane_wave_lower_oracle(&k, -c.mc2_ev, 0.0, &up(), &c).is_err());
    }

    #[test]
    fn sampled_history_interpolates_cubics() {
        let f = |t: f64| Spinor2::new(Complex64::new(t * t * t - t, 1.0), Complex64::new(0.0, 2.0 * t));
        let samples = (0..20)
            .map(|i| {
                let t = 0.1 * i as f64;
                HistorySample { t, amplitudes: f(t) }
            })
            .collect();
        let h = SampledHistory::new(samples).unwrap();
        for t in [0.03, 0.77, 1.85] {
            assert!((h.at(t) - f(t)).norm() < 1e-12);
        }
        assert_eq!(h.span(), Some((0.0, 0.1 * 19.0)));
    }
}
