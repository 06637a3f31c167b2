//! Bessel-kernel representation of the square-root energy operator
//! β√(c²π² − eħcΣ·B + m²c⁴) for the free, constant-A and constant-B cases,
//! plus numerical checks of the integral identities behind it.
//!
//! Lengths are in nm, μ in 1/nm and kernel values in eV/nm³. The singular
//! δ(x−y) piece of each kernel is returned as a coefficient and is never
//! added to the regular part.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DiracAlgebra, Mat4};
use crate::bessel::k0_k1;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Which β eigenvalue the kernel is projected on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Particle,
    Antiparticle,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Particle => 1.0,
            Branch::Antiparticle => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    /// Inverse range μ = ω/ħc, 1/nm.
    pub mu: f64,
    pub branch: Branch,
}

impl KernelParams {
    pub fn new(mu: f64, branch: Branch) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!("mu must be finite and positive, got {mu}")));
        }
        Ok(Self { mu, branch })
    }

    /// μ = mc/ħ, the free-particle value.
    pub fn rest_mass(c: &PhysicalConstants, branch: Branch) -> Self {
        Self {
            mu: c.compton_wavenumber(),
            branch,
        }
    }

    /// μ²ħc·β/π², eV/nm.
    pub fn prefactor(&self, c: &PhysicalConstants) -> f64 {
        self.mu * self.mu * c.hbar_c_ev_nm * self.branch.sign() / (std::f64::consts::PI.powi(2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub regular: f64,
    pub delta_coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexKernelValue {
    pub regular: Complex64,
    pub delta_coeff: Complex64,
}

impl From<KernelValue> for ComplexKernelValue {
    fn from(v: KernelValue) -> Self {
        Self {
            regular: v.regular.into(),
            delta_coeff: v.delta_coeff.into(),
        }
    }
}

fn check_separation(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "kernel separation must be finite and positive, got {r}; the coincidence point lives in the delta channel"
        )))
    }
}

// K₀(μr)/r + 2K₁(μr)/(μr²) = K₂(μr)/r
fn bracket(mu: f64, r: f64) -> f64 {
    let u = mu * r;
    let (k0, k1) = k0_k1(u);
    k0 / r + 2.0 * k1 / (mu * r * r)
}

/// Free-particle kernel at separation r > 0.
pub fn free_kernel(r: f64, p: &KernelParams, c: &PhysicalConstants) -> Result<KernelValue> {
    check_separation(r)?;
    let pre = p.prefactor(c);
    let br = bracket(p.mu, r);
    Ok(KernelValue {
        regular: -pre * br / r,
        delta_coeff: pre * FOUR_PI * br,
    })
}

/// Constant vector potential: the free kernel times the phase e^{iā·r}.
/// `a_bar` is eA/ħc in 1/nm.
pub fn constant_a_kernel(
    r_vec: &Vector3<f64>,
    a_bar: &Vector3<f64>,
    p: &KernelParams,
    c: &PhysicalConstants,
) -> Result<ComplexKernelValue> {
    let free = free_kernel(r_vec.norm(), p, c)?;
    let phase = Complex64::from_polar(1.0, a_bar.dot(r_vec));
    Ok(ComplexKernelValue {
        regular: phase * free.regular,
        delta_coeff: free.delta_coeff.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveMassMatrix {
    /// μ² in 1/nm².
    pub m2: Mat4,
    /// Eigenvalues of m2, ascending.
    pub eigenvalues: [f64; 4],
    /// Spectral norm of μ = (μ²)^{1/2}, 1/nm.
    pub norm_mu: f64,
}

/// μ² = (mc/ħ)²I − (e/ħc)Σ·B. `b_field` is in Gaussian units expressed as
/// √(eV/nm³) (see `GAUSS_IN_NATURAL`).
pub fn effective_mass_matrix(b_field: &Vector3<f64>, c: &PhysicalConstants) -> EffectiveMassMatrix {
    let kc2 = c.compton_wavenumber().powi(2);
    let coupling = c.charge() / c.hbar_c_ev_nm;
    let dirac = DiracAlgebra::new();
    let m2 = Mat4::identity() * Complex64::from(kc2) - dirac.sigma_dot(b_field) * Complex64::from(coupling);

    // Both diagonal 2×2 blocks equal kc2·I − coupling·σ·B.
    let block = m2.fixed_view::<2, 2>(0, 0);
    let a = block[(0, 0)].re;
    let d = block[(1, 1)].re;
    let off = block[(0, 1)].norm();
    let mean = 0.5 * (a + d);
    let split = (0.5 * (a - d)).hypot(off);
    let (lo, hi) = (mean - split, mean + split);
    let norm_mu = lo.abs().max(hi.abs()).sqrt();
    EffectiveMassMatrix {
        m2,
        eigenvalues: [lo, lo, hi, hi],
        norm_mu,
    }
}

/// Where the symmetric-gauge a(z) = (e/2ħc)z×B is evaluated for the phase F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePoint {
    #[default]
    Midpoint,
    AtX,
    AtY,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantFieldKernel {
    /// −P(1+iF)K₂ term with its delta channel.
    pub k2_term: ComplexKernelValue,
    /// +P·a²·K₁ term; no delta channel.
    pub a2_term: ComplexKernelValue,
    pub mu: f64,
    pub phase_f: f64,
}

/// Kernel for a constant magnetic field between points x ≠ y. The scalar
/// μ is the spectral norm from `effective_mass_matrix`.
pub fn constant_field_kernel(
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    b_field: &Vector3<f64>,
    branch: Branch,
    policy: PhasePoint,
    c: &PhysicalConstants,
) -> Result<ConstantFieldKernel> {
    let sep = x - y;
    let d = sep.norm();
    check_separation(d)?;
    let mu = effective_mass_matrix(b_field, c).norm_mu;
    let p = KernelParams::new(mu, branch)?;
    let pre = p.prefactor(c);

    let z = match policy {
        PhasePoint::Midpoint => 0.5 * (x + y),
        PhasePoint::AtX => *x,
        PhasePoint::AtY => *y,
    };
    let a = z.cross(b_field) * (c.charge() / (2.0 * c.hbar_c_ev_nm));
    let f = -a.dot(&sep);

    let (k0, k1) = k0_k1(mu * d);
    let k2_over_d = k0 / d + 2.0 * k1 / (mu * d * d);
    let k2_term = ComplexKernelValue {
        regular: Complex64::new(1.0, f) * (-pre * k2_over_d / d),
        delta_coeff: Complex64::from(pre * FOUR_PI * k2_over_d),
    };
    let a2_term = ComplexKernelValue {
        regular: Complex64::from(pre * a.norm_squared() * k1 / d),
        delta_coeff: Complex64::new(0.0, 0.0),
    };
    Ok(ConstantFieldKernel {
        k2_term,
        a2_term,
        mu,
        phase_f: f,
    })
}

/// Both sides of an integral identity and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            abs_diff: (lhs - rhs).abs(),
        }
    }

    pub fn relative_diff(&self) -> f64 {
        self.abs_diff / self.rhs.abs()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and positive, got {v}")))
    }
}

// Integrands are dropped once their exponent falls this far below the peak.
const EXPONENT_CUTOFF: f64 = 80.0;

/// ∫₀^∞ e^{−√(λ+μ²)r}/r · dλ/√λ against 2μK₁(μr)/r.
///
/// With λ = s² the left side is (2/r)∫₀^∞ e^{−r√(s²+μ²)} ds, which is smooth
/// and is integrated adaptively up to where the exponent has dropped by
/// `EXPONENT_CUTOFF` below its value at s = 0.
pub fn verify_resolvent_identity(mu: f64, r: f64, quad_tol: f64) -> Result<IdentityCheck> {
    positive("mu", mu)?;
    positive("r", r)?;
    let s_max = ((mu + EXPONENT_CUTOFF / r).powi(2) - mu * mu).sqrt();
    let shift = mu * r;
    // Factor e^{−μr} out so the quadrature works on O(1) values.
    let scaled = integrate(
        |s| (shift - r * s.hypot(mu)).exp(),
        0.0,
        s_max,
        QuadConfig::relative(quad_tol),
    )?;
    let lhs = 2.0 / r * scaled.value * (-shift).exp();
    let (_, k1) = k0_k1(mu * r);
    Ok(IdentityCheck::new(lhs, 2.0 * mu * k1 / r))
}

/// ∫₀^∞ exp[−d²/4t − (μ²+λ)t] dt/(4πt)^{3/2} against e^{−√(λ+μ²)d}/(4πd).
///
/// Integrated in s = ln t around the saddle t* = d/(2√(λ+μ²)); the window is
/// widened until the log-integrand at both ends is `EXPONENT_CUTOFF` below
/// the peak.
pub fn verify_heat_kernel_identity(
    d: f64,
    mu: f64,
    lambda: f64,
    quad_tol: f64,
) -> Result<IdentityCheck> {
    positive("d", d)?;
    positive("mu", mu)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("lambda must be finite and non-negative, got {lambda}")));
    }
    let m2 = mu * mu + lambda;
    let m = m2.sqrt();
    let log_norm = -1.5 * (4.0 * std::f64::consts::PI).ln();
    // log of integrand·dt/ds with the Gaussian-like peak value m·d removed.
    let log_g = |s: f64| {
        let t = s.exp();
        -d * d / (4.0 * t) - m2 * t - 0.5 * s + m * d
    };
    let s_star = (d / (2.0 * m)).ln();
    let peak = log_g(s_star);
    let mut lo = s_star - 1.0;
    while log_g(lo) > peak - EXPONENT_CUTOFF {
        lo -= 1.0;
    }
    let mut hi = s_star + 1.0;
    while log_g(hi) > peak - EXPONENT_CUTOFF {
        hi += 1.0;
    }
    let scaled = integrate(|s| log_g(s).exp(), lo, hi, QuadConfig::relative(quad_tol))?;
    let lhs = scaled.value * (log_norm - m * d).exp();
    let rhs = (-m * d).exp() / (4.0 * std::f64::consts::PI * d);
    Ok(IdentityCheck::new(lhs, rhs))
}

/// ∫ 4πr²|regular(r)| dr over [r_lo, r_hi]. The regular part grows like
/// r⁻⁴ at the origin, so r_lo must be positive.
pub fn radial_weight(
    p: &KernelParams,
    c: &PhysicalConstants,
    r_lo: f64,
    r_hi: f64,
    quad_tol: f64,
) -> Result<f64> {
    positive("r_lo", r_lo)?;
    if !(r_hi > r_lo) {
        return Err(Error::domain("radial_weight needs r_hi > r_lo"));
    }
    let pre = p.prefactor(c).abs();
    // Integrate in ln r: the integrand spans many decades.
    let res = integrate(
        |s| {
            let r = s.exp();
            FOUR_PI * r * r * r * pre * bracket(p.mu, r) / r
        },
        r_lo.ln(),
        r_hi.ln(),
        QuadConfig::relative(quad_tol),
    )?;
    Ok(res.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub r: f64,
    pub regular: f64,
    pub delta_coeff: f64,
}

/// Free kernel on `points` evenly spaced radii from r_min to r_max.
pub fn kernel_profile(
    p: &KernelParams,
    c: &PhysicalConstants,
    r_min: f64,
    r_max: f64,
    points: usize,
) -> Result<Vec<KernelSample>> {
    positive("r_min", r_min)?;
    if !(r_max >= r_min) || points == 0 {
        return Err(Error::domain("profile needs r_max >= r_min and at least one point"));
    }
    let step = if points > 1 {
        (r_max - r_min) / (points - 1) as f64
    } else {
        0.0
    };
    (0..points)
        .map(|i| {
            let r = r_min + step * i as f64;
            let v = free_kernel(r, p, c)?;
            Ok(KernelSample {
                r,
                regular: v.regular,
                delta_coeff: v.delta_coeff,
            })
        })
        .collect()
}
