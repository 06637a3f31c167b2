//! Modified Bessel functions of the second kind, Kᵥ(u) for ν ∈ {0, ½, 1, 2}.
//!
//! For u ≤ 2 the logarithmic power series is summed directly. Above the
//! crossover Steed's continued fraction for K₁/K₀ (the large-argument
//! branch) gives K₀ and K₁ together. K₂ comes from the recurrence
//! K₂ = K₀ + 2K₁/u, and K_{1/2} is elementary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
const SERIES_CROSSOVER: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselOrder {
    Zero,
    Half,
    One,
    Two,
}

impl BesselOrder {
    pub fn as_f64(self) -> f64 {
        match self {
            BesselOrder::Zero => 0.0,
            BesselOrder::Half => 0.5,
            BesselOrder::One => 1.0,
            BesselOrder::Two => 2.0,
        }
    }
}

/// Kᵥ(u) for u > 0.
pub fn bessel_k(order: BesselOrder, u: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::domain(format!(
            "bessel_k requires a finite positive argument, got {u}"
        )));
    }
    Ok(match order {
        BesselOrder::Half => (std::f64::consts::PI / (2.0 * u)).sqrt() * (-u).exp(),
        BesselOrder::Zero => k0_k1(u).0,
        BesselOrder::One => k0_k1(u).1,
        BesselOrder::Two => {
            let (k0, k1) = k0_k1(u);
            k0 + 2.0 * k1 / u
        }
    })
}

pub fn k0(u: f64) -> Result<f64> {
    bessel_k(BesselOrder::Zero, u)
}

pub fn k1(u: f64) -> Result<f64> {
    bessel_k(BesselOrder::One, u)
}

pub fn k2(u: f64) -> Result<f64> {
    bessel_k(BesselOrder::Two, u)
}

/// (K₀(u), K₁(u)) for u > 0; callers validate the argument.
pub(crate) fn k0_k1(u: f64) -> (f64, f64) {
    if u <= SERIES_CROSSOVER {
        (k0_series(u), k1_series(u))
    } else {
        k0_k1_continued_fraction(u)
    }
}

// Σ (u²/4)^k / (k!)² weighted terms; I₀ and the ψ-weighted companion share
// the same running term.
fn k0_series(u: f64) -> f64 {
    let q = 0.25 * u * u;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut psi_sum = -EULER_GAMMA;
    let mut harmonic = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        let add = term * (harmonic - EULER_GAMMA);
        psi_sum += add;
        if term < 1e-18 * i0 && add.abs() < 1e-18 * psi_sum.abs() {
            break;
        }
    }
    -(0.5 * u).ln() * i0 + psi_sum
}

fn k1_series(u: f64) -> f64 {
    let q = 0.25 * u * u;
    let half = 0.5 * u;
    // term_k = (u²/4)^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut i1_sum = 1.0;
    // ψ(k+1) + ψ(k+2) with ψ(m+1) = H_m − γ
    let mut h_k = 0.0;
    let mut h_k1 = 1.0;
    let mut psi_sum = h_k + h_k1 - 2.0 * EULER_GAMMA;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        h_k += 1.0 / kf;
        h_k1 += 1.0 / (kf + 1.0);
        i1_sum += term;
        let add = term * (h_k + h_k1 - 2.0 * EULER_GAMMA);
        psi_sum += add;
        if term < 1e-18 * i1_sum && add.abs() < 1e-18 * psi_sum.abs() {
            break;
        }
    }
    let i1 = half * i1_sum;
    1.0 / u + half.ln() * i1 - 0.5 * half * psi_sum
}

// Steed's method for the second continued fraction (Temme's normalisation).
fn k0_k1_continued_fraction(u: f64) -> (f64, f64) {
    let mu2 = 0.0;
    let mut b = 2.0 * (1.0 + u);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * u)).sqrt() * (-u).exp() / s;
    let k1 = k0 * (u + 0.5 - h) / u;
    (k0, k1)
}
