use nalgebra::Vector3;
use proptest::prelude::*;

use propertime::classical::{
    b_inverse, b_transform, canonical_k, canonical_k_of_velocity, collaborative_speed, coordinate_time_along,
    effective_mass_along, free_hamiltonian, integrate_orbit, lagrangian, momentum_of_velocity, pt_boost,
    u_from_w, w_from_u, CoulombModel, KinematicState, OrbitConfig, PhaseState,
};

fn vec3(scale: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn velocity(max: f64) -> impl Strategy<Value = Vector3<f64>> {
    vec3(max).prop_filter("subluminal", move |v| v.norm() < max)
}

fn close(a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

proptest! {
    #[test]
    fn velocity_maps_invert(u in vec3(50.0)) {
        let w = w_from_u(&u);
        prop_assert!(w.norm() < 1.0);
        prop_assert!(close(&u_from_w(&w).unwrap(), &u, 1e-12));
    }

    #[test]
    fn boost_then_inverse_is_identity(x in vec3(10.0), u in vec3(5.0), tau in 0.1..10.0f64,
                                      bbar in 1.0..4.0f64, v in velocity(0.9)) {
        let s = KinematicState::new(tau, x, u);
        let b = pt_boost(&s, &v, bbar).unwrap();
        prop_assert_eq!(b.tau, tau);
        let gamma = 1.0 / (1.0 - v.norm_squared()).sqrt();
        let bbar_prime = gamma * (bbar * tau - v.dot(&x)) / tau;
        let back = pt_boost(&b, &(-v), bbar_prime).unwrap();
        prop_assert!(close(&back.x, &x, 1e-11) && close(&back.u, &u, 1e-11));
    }

    #[test]
    fn b_transform_round_trips(u in vec3(5.0), v in velocity(0.95)) {
        let b = collaborative_speed(&u);
        let s = pt_boost(&KinematicState::new(1.0, Vector3::zeros(), u), &v, 1.0).unwrap();
        let bp = b_transform(b, &u, &v).unwrap();
        prop_assert!((bp - s.b()).abs() <= 1e-12 * bp);
        prop_assert!((b_inverse(bp, &s.u, &v).unwrap() - b).abs() <= 1e-11 * b);
    }

    #[test]
    fn k_is_a_perfect_square(p in vec3(3.0), a in vec3(1.0), v in -0.5..0.5f64, e in -1.0..1.0f64) {
        let ph = PhaseState::new(Vector3::zeros(), p);
        let h0 = free_hamiltonian(&(p - a * e));
        let want = 0.5 * (h0 + v).powi(2) + 0.5;
        prop_assert!((canonical_k(&ph, v, &a, e) - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn legendre_transform_is_consistent(u in vec3(3.0), v in -0.5..0.5f64) {
        let z = Vector3::zeros();
        let p = momentum_of_velocity(&u, v, &z, 1.0);
        let k = p.dot(&u) - lagrangian(&u, v, &z, 1.0);
        let want = canonical_k_of_velocity(&u, v);
        prop_assert!((k - want).abs() <= 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn coordinate_time_is_exact_for_constant_b(t0 in -5.0..5.0f64, b in 1.0..5.0f64, n in 2usize..50) {
        let taus: Vec<f64> = (0..n).map(|i| t0 + 0.3 * i as f64).collect();
        let t = coordinate_time_along(&taus, &vec![b; n]).unwrap();
        prop_assert_eq!(t[0], t0);
        for (ti, tau) in t.iter().zip(&taus) {
            prop_assert!((ti - (t0 + b * (tau - t0))).abs() <= 1e-12 * ti.abs().max(1.0));
        }
        prop_assert!(t.windows(2).all(|w| w[1] > w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bound_orbits_conserve_k(r in 5.0..20.0f64, frac in 0.6..1.0f64, tilt in -0.2..0.2f64) {
        let model = CoulombModel::new(0.1).unwrap();
        let p_circ = (0.1 / r).sqrt();
        let start = PhaseState::new(Vector3::new(r, 0.0, 0.0), Vector3::new(0.0, frac * p_circ, tilt * p_circ));
        let traj = integrate_orbit(&start, &model, &OrbitConfig::new(2000.0, 1e-12)).unwrap();
        prop_assert!(traj.max_energy_drift() <= 1e-9, "drift {}", traj.max_energy_drift());
    }

    #[test]
    fn reversing_momentum_retraces_the_orbit(r in 5.0..20.0f64, frac in 0.7..1.0f64) {
        let model = CoulombModel::new(0.1).unwrap();
        let p_circ = (0.1 / r).sqrt();
        let x0 = Vector3::new(r, 0.0, 0.0);
        let p0 = Vector3::new(0.0, frac * p_circ, 0.0);
        let cfg = OrbitConfig::new(200.0, 1e-13);
        let out = integrate_orbit(&PhaseState::new(x0, p0), &model, &cfg).unwrap();
        let end = out.last().unwrap();
        let back = integrate_orbit(&PhaseState::new(end.x, -end.p), &model, &cfg).unwrap();
        let fin = back.last().unwrap();
        prop_assert!((fin.x - x0).norm() <= 1e-7 * r, "{}", (fin.x - x0).norm());
        prop_assert!((fin.p + p0).norm() <= 1e-7 * p_circ);
    }
}

#[test]
fn free_orbit_has_zero_effective_mass() {
    let start = PhaseState::new(Vector3::new(0.0, 1.0, 0.0), Vector3::new(0.4, 0.0, 0.2));
    let traj = integrate_orbit(&start, &CoulombModel::free(), &OrbitConfig::new(10.0, 1e-10)).unwrap();
    for s in effective_mass_along(&traj).unwrap() {
        assert!(s.mu.abs() < 1e-8, "{}", s.mu);
    }
}

#[test]
fn circular_orbit_stays_circular() {
    let model = CoulombModel::new(0.05).unwrap();
    let r: f64 = 10.0;
    // Circular when dp/dτ balances: p²(1 + V/H₀)/r = (H₀ + V)·coupling/r².
    let mut p = (0.05 / r).sqrt();
    for _ in 0..50 {
        let h0 = (1.0 + p * p).sqrt();
        let v = -0.05 / r;
        p = ((h0 + v) * 0.05 / r / (1.0 + v / h0)).sqrt();
    }
    let traj = integrate_orbit(
        &PhaseState::new(Vector3::new(r, 0.0, 0.0), Vector3::new(0.0, p, 0.0)),
        &model,
        &OrbitConfig::new(500.0, 1e-12),
    )
    .unwrap();
    for s in &traj.samples {
        assert!((s.x.norm() - r).abs() < 1e-7 * r);
    }
}
