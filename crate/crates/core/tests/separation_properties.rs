use nalgebra::Vector3;
use num_complex::Complex64;
use proptest::prelude::*;

use propertime::algebra::Spinor2;
use propertime::separation::{
    density_rho, particle_inner_product, plane_wave_lower_oracle, plane_wave_upper_oracle, propagator_u,
    separate_lower, separate_upper_extrapolated, History, HistorySample, PlaneWaveHistory, SampledHistory,
    SeparationContext,
};
use propertime::PhysicalConstants;

fn codata() -> PhysicalConstants {
    PhysicalConstants::codata_2018()
}

fn spinor() -> impl Strategy<Value = Spinor2> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_map(|v| Spinor2::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

// Wave vector of magnitude ħk/mc ∈ [0.05, 3].
fn wave_vector() -> impl Strategy<Value = Vector3<f64>> {
    (0.05..3.0f64, -1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(m, ct, phi)| {
        let st = (1.0 - ct * ct).sqrt();
        Vector3::new(st * phi.cos(), st * phi.sin(), ct) * (m * codata().compton_wavenumber())
    })
}

fn free_energy(k: &Vector3<f64>, c: &PhysicalConstants) -> f64 {
    (c.hbar_c_ev_nm * k.norm()).hypot(c.mc2_ev)
}

fn quick_ctx(v0: f64, c: &PhysicalConstants) -> SeparationContext {
    // Single damping rate with εT = 20.
    let eps = 1e-3 * c.mc2_ev;
    SeparationContext::new(v0, eps, 20.0 / eps, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn propagator_composes(t in 0.0..1e-3f64, s in 0.0..1e-3f64, v0 in -5e4..5e4f64) {
        let ctx = quick_ctx(v0, &codata());
        let lhs = propagator_u(t + s, &ctx);
        let rhs = propagator_u(t, &ctx) * propagator_u(s, &ctx);
        prop_assert!((lhs - rhs).norm() < 1e-9);
        prop_assert_eq!(propagator_u(-t - 1e-9, &ctx), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn density_dominates_upper_norm(a in spinor(), b in spinor()) {
        let rho = density_rho(&a, &b);
        prop_assert!(rho >= a.norm_squared());
        prop_assert!((rho - a.norm_squared() - b.norm_squared()).abs() <= 1e-15 * rho.max(1.0));
    }

    #[test]
    fn separation_is_linear(k in wave_vector(), a in spinor(), b in spinor(), z in (-2.0..2.0f64, -2.0..2.0f64)) {
        let c = codata();
        let ctx = quick_ctx(0.0, &c);
        let e = free_energy(&k, &c);
        let z = Complex64::new(z.0, z.1);
        let ha = PlaneWaveHistory { amplitude: a, energy_ev: e };
        let hb = PlaneWaveHistory { amplitude: b, energy_ev: 0.7 * e };
        let combined = |t: f64| ha.at(t) * z + hb.at(t);
        let lhs = separate_lower(&k, &combined, 0.0, &ctx, &c).unwrap();
        let rhs = separate_lower(&k, &ha, 0.0, &ctx, &c).unwrap() * z + separate_lower(&k, &hb, 0.0, &ctx, &c).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-300));
    }

    #[test]
    fn separation_commutes_with_time_shift(k in wave_vector(), a in spinor(), shift in 0.0..1e-3f64) {
        let c = codata();
        let ctx = quick_ctx(0.0, &c);
        let h = PlaneWaveHistory { amplitude: a, energy_ev: free_energy(&k, &c) };
        let shifted = |t: f64| h.at(t + shift);
        let lhs = separate_lower(&k, &shifted, 0.0, &ctx, &c).unwrap();
        let rhs = separate_lower(&k, &h, shift, &ctx, &c).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
    }

    #[test]
    fn negative_energy_waves_separate_through_b2(k in wave_vector(), lower in spinor(), v in -0.1..0.1f64) {
        let c = codata();
        let v0 = v * c.mc2_ev;
        let energy = v0 - free_energy(&k, &c);
        let omega = (energy - v0 - c.mc2_ev).abs();
        let ctx = SeparationContext::for_extrapolation(v0, 1e-3 * omega, &c).unwrap();
        let h = PlaneWaveHistory { amplitude: lower, energy_ev: energy };
        let got = separate_upper_extrapolated(&k, &h, 0.0, &ctx, &c).unwrap().limit;
        let want = plane_wave_upper_oracle(&k, energy, v0, &lower, &c).unwrap();
        prop_assert!((got - want).norm() <= 1e-6 * want.norm());
    }

    #[test]
    fn inner_product_is_hermitian(k in wave_vector(), a in spinor(), b in spinor()) {
        let c = codata();
        let e = free_energy(&k, &c);
        let ctx = SeparationContext::for_extrapolation(0.0, 1e-3 * (e + c.mc2_ev), &c).unwrap();
        let ha = PlaneWaveHistory { amplitude: a, energy_ev: e };
        let hb = PlaneWaveHistory { amplitude: b, energy_ev: e };
        let ab = particle_inner_product(&ha, &hb, &k, 0.0, &ctx, &c).unwrap();
        let ba = particle_inner_product(&hb, &ha, &k, 0.0, &ctx, &c).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12 * ab.norm().max(1e-300));
        let aa = particle_inner_product(&ha, &ha, &k, 0.0, &ctx, &c).unwrap();
        prop_assert!(aa.re >= a.norm_squared() && aa.im.abs() <= 1e-12 * aa.re);
    }
}

#[test]
fn sampled_history_reproduces_plane_wave_result() {
    let c = codata();
    let k = Vector3::new(0.0, 0.0, 0.5 * c.compton_wavenumber());
    let e = free_energy(&k, &c);
    let ctx = quick_ctx(0.0, &c);
    let wave = PlaneWaveHistory {
        amplitude: Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)),
        energy_ev: e,
    };
    // 128 samples per period of the upper-pair phase.
    let dt = std::f64::consts::TAU / e / 128.0;
    let n = (ctx.history_window / dt).ceil() as usize + 8;
    let samples = (0..n)
        .map(|i| {
            let t = -ctx.history_window - 4.0 * dt + i as f64 * dt;
            HistorySample { t, amplitudes: wave.at(t) }
        })
        .collect();
    let sampled = SampledHistory::new(samples).unwrap();
    let a = separate_lower(&k, &sampled, 0.0, &ctx, &c).unwrap();
    let b = separate_lower(&k, &wave, 0.0, &ctx, &c).unwrap();
    assert!((a - b).norm() <= 1e-6 * b.norm(), "{a} vs {b}");
    let oracle = plane_wave_lower_oracle(&k, e, 0.0, &wave.amplitude, &c).unwrap();
    assert!((b - oracle).norm() <= 1e-2 * oracle.norm());
}

#[test]
fn short_window_is_reported() {
    let c = codata();
    let eps = 1e-3 * c.mc2_ev;
    let ctx = SeparationContext::new(0.0, eps, 1.0 / eps, &c).unwrap();
    let k = Vector3::new(0.0, 0.0, c.compton_wavenumber());
    let h = PlaneWaveHistory { amplitude: Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)), energy_ev: 1.0 };
    assert!(separate_lower(&k, &h, 0.0, &ctx, &c).is_err());
}
