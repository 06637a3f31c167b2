use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use propertime::algebra::Spinor2;
use propertime::classical::{
    effective_mass_along, integrate_orbit, pt_boost, retarded_fields, u_from_w, w_from_u, CoulombModel,
    KinematicState, OrbitConfig, PhaseState, SourceEmissionState,
};
use propertime::nist::{bundled_levels, compare as compare_levels, load_levels, render_report};
use propertime::separation::{plane_wave_lower_oracle, separate_lower_extrapolated, PlaneWaveHistory, SeparationContext};
use propertime::spectrum::{dirac_series, level_offset, proper_time_series, Theory};
use propertime::sqrt_operator::{
    kernel_profile, verify_heat_kernel_identity, verify_resolvent_identity, Branch, KernelParams,
};
use propertime::BoundState;

use crate::report::{Cell, Report};
use crate::{parse_list, BranchArg, Context, Failure, FieldsArgs, KernelArgs, OrbitArgs, Produced, SampleArgs, SeparateArgs, SpectrumArgs, EXIT_NUMERICAL};

fn parse_states(list: &str) -> Result<Vec<BoundState>, Failure> {
    list.split(',')
        .map(|s| s.trim().parse::<BoundState>().map_err(|e| Failure::usage(format!("error: state `{s}`: {e}"))))
        .collect()
}

fn render(ctx: &Context, report: &Report) -> Produced {
    Produced::ok(report.render(ctx.format))
}

pub(crate) fn spectrum(ctx: &Context, args: &SpectrumArgs) -> Result<Produced, Failure> {
    let c = &ctx.constants;
    let states = parse_states(&args.states)?;
    let reference = args.relative_to.as_deref().map(parse_states).transpose()?;
    let reference = match reference.as_deref() {
        None => None,
        Some([one]) => Some(*one),
        Some(_) => return Err(Failure::usage("error: --relative-to takes a single state")),
    };

    // Offsets from mc², optionally shifted by the reference state's offsets.
    let levels = |s: &BoundState| -> Result<[f64; 4], Failure> {
        Ok([
            level_offset(s, Theory::Dirac, c)?,
            level_offset(s, Theory::ProperTime, c)?,
            dirac_series(s, c) - c.mc2_ev,
            proper_time_series(s, c) - c.mc2_ev,
        ])
    };
    let base = reference.as_ref().map(levels).transpose()?.unwrap_or([0.0; 4]);

    let mut report = Report::new(vec!["state", "dirac", "proper_time", "dirac_series", "pt_series", "dirac_minus_pt"]);
    for s in &states {
        let v = levels(s)?;
        let rel: Vec<f64> = v.iter().zip(base).map(|(a, b)| if reference == Some(*s) { 0.0 } else { a - b }).collect();
        report.push(vec![
            Cell::Text(s.to_string()),
            Cell::Energy(rel[0]),
            Cell::Energy(rel[1]),
            Cell::Energy(rel[2]),
            Cell::Energy(rel[3]),
            Cell::Sci(rel[0] - rel[1]),
        ]);
    }
    Ok(render(ctx, &report))
}

pub(crate) fn compare(ctx: &Context, nist_text: Option<&str>) -> Result<Produced, Failure> {
    let levels = match nist_text {
        Some(text) => load_levels(text)?,
        None => bundled_levels(),
    };
    let rows = compare_levels(&levels, &ctx.constants)?;
    Ok(Produced::ok(render_report(&rows, ctx.format)?))
}

pub(crate) fn kernel(ctx: &Context, args: &KernelArgs) -> Result<Produced, Failure> {
    if args.identities {
        return kernel_identities(ctx, args.tol);
    }
    let c = &ctx.constants;
    let branch = match args.branch {
        BranchArg::Particle => Branch::Particle,
        BranchArg::Antiparticle => Branch::Antiparticle,
    };
    let params = KernelParams::new(args.mu.unwrap_or_else(|| c.compton_wavenumber()), branch)?;
    let r_min = args.r_min.unwrap_or(0.1 / params.mu);
    let r_max = args.r_max.unwrap_or(5.0 / params.mu);
    let mut report = Report::new(vec!["r_nm", "mu_r", "regular_ev_per_nm3", "delta_coeff_ev_per_nm2"]);
    for s in kernel_profile(&params, c, r_min, r_max, args.points)? {
        report.push(vec![Cell::Sci(s.r), Cell::Sci(params.mu * s.r), Cell::Sci(s.regular), Cell::Sci(s.delta_coeff)]);
    }
    Ok(render(ctx, &report))
}

const IDENTITY_GRID: [f64; 3] = [0.5, 1.0, 2.0];
const IDENTITY_R: [f64; 3] = [0.3, 1.0, 4.0];
const IDENTITY_LAMBDA: [f64; 3] = [0.0, 1.0, 10.0];

fn kernel_identities(ctx: &Context, tol: f64) -> Result<Produced, Failure> {
    let mut report = Report::new(vec!["identity", "mu", "r", "lambda", "lhs", "rhs", "rel_diff"]);
    let mut push = |name: &str, mu: f64, r: f64, lambda: Option<f64>, chk: propertime::sqrt_operator::IdentityCheck| {
        report.push(vec![
            Cell::Text(name.into()),
            Cell::Sci(mu),
            Cell::Sci(r),
            lambda.map_or(Cell::Text(String::new()), Cell::Sci),
            Cell::Sci(chk.lhs),
            Cell::Sci(chk.rhs),
            Cell::Sci(chk.relative_diff()),
        ]);
    };
    for mu in IDENTITY_GRID {
        for r in IDENTITY_R {
            push("resolvent", mu, r, None, verify_resolvent_identity(mu, r, tol)?);
            for lambda in IDENTITY_LAMBDA {
                push("heat_kernel", mu, r, Some(lambda), verify_heat_kernel_identity(r, mu, lambda, tol)?);
            }
        }
    }
    Ok(render(ctx, &report))
}

pub(crate) fn separate(ctx: &Context, args: &SeparateArgs) -> Result<Produced, Failure> {
    let c = &ctx.constants;
    let ks = parse_list(&args.k).map_err(|e| Failure::usage(format!("error: --k: {e}")))?;
    let vs = parse_list(&args.v0).map_err(|e| Failure::usage(format!("error: --v0: {e}")))?;
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(Failure::usage("error: --epsilon must lie in (0, 1)"));
    }
    let dir = Vector3::new(0.0, 0.0, 1.0);
    let upper = Spinor2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let mut report = Report::new(vec!["hbar_k_mc", "v0_mc2", "stage", "epsilon_ev", "rel_error"]);
    for &hk in &ks {
        for &v in &vs {
            let k = dir * (hk * c.compton_wavenumber());
            let v0 = v * c.mc2_ev;
            let energy = (c.hbar_c_ev_nm * k.norm()).hypot(c.mc2_ev) + v0;
            let omega = energy - v0 + c.mc2_ev;
            let sctx = SeparationContext::for_extrapolation(v0, args.epsilon * omega, c)?;
            let hist = PlaneWaveHistory { amplitude: upper, energy_ev: energy };
            let ex = separate_lower_extrapolated(&k, &hist, 0.0, &sctx, c)?;
            let oracle = plane_wave_lower_oracle(&k, energy, v0, &upper, c)?;
            let scale = oracle.norm();
            let err = |s: &Spinor2| if scale > 0.0 { (s - oracle).norm() / scale } else { s.norm() };
            for (eps, d) in ex.epsilons.iter().zip(&ex.damped) {
                report.push(vec![Cell::Sci(hk), Cell::Sci(v), Cell::Text("damped".into()), Cell::Sci(*eps), Cell::Sci(err(d))]);
            }
            report.push(vec![Cell::Sci(hk), Cell::Sci(v), Cell::Text("richardson".into()), Cell::Sci(0.0), Cell::Sci(err(&ex.limit))]);
        }
    }
    Ok(render(ctx, &report))
}

pub(crate) fn orbit(ctx: &Context, args: &OrbitArgs) -> Result<Produced, Failure> {
    if args.every == 0 {
        return Err(Failure::usage("error: --every must be at least 1"));
    }
    let model = CoulombModel::new(args.coupling)?;
    let cfg = OrbitConfig::new(args.tau_span, args.tol);
    let traj = integrate_orbit(&PhaseState::new(args.x0, args.p0), &model, &cfg)?;
    let mu = effective_mass_along(&traj)?;
    let mut report = Report::new(vec!["tau", "x", "y", "z", "ux", "uy", "uz", "b", "K", "mu_bracket"]);
    let last = traj.samples.len() - 1;
    for (i, (s, m)) in traj.samples.iter().zip(&mu).enumerate() {
        if i % args.every != 0 && i != last {
            continue;
        }
        let mut row = vec![Cell::Sci(s.tau)];
        row.extend(s.x.iter().chain(s.u.iter()).map(|v| Cell::Sci(*v)));
        row.extend([Cell::Sci(s.b), Cell::Sci(s.k), Cell::Sci(m.bracket_b)]);
        report.push(row);
    }
    let mut out = render(ctx, &report);
    out.note = Some(format!(
        "{} accepted / {} rejected steps, max relative K drift {:e}",
        traj.accepted_steps,
        traj.rejected_steps,
        traj.max_energy_drift()
    ));
    Ok(out)
}

struct Check {
    name: &'static str,
    tolerance: f64,
    worst: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, worst: 0.0 }
    }

    fn record(&mut self, residual: f64) {
        // NaN counts as a failure.
        if residual.is_nan() || residual > self.worst {
            self.worst = if residual.is_nan() { f64::INFINITY } else { residual };
        }
    }

    fn pass(&self) -> bool {
        self.worst <= self.tolerance
    }
}

fn check_report(ctx: &Context, samples: usize, checks: &[Check]) -> Produced {
    let mut report = Report::new(vec!["check", "samples", "seed", "max_residual", "tolerance", "pass"]);
    for ch in checks {
        report.push(vec![
            Cell::Text(ch.name.into()),
            Cell::Int(samples as u64),
            Cell::Int(ctx.seed),
            Cell::Sci(ch.worst),
            Cell::Sci(ch.tolerance),
            Cell::Bool(ch.pass()),
        ]);
    }
    let mut out = render(ctx, &report);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
    if !failed.is_empty() {
        out.code = EXIT_NUMERICAL;
        out.note = Some(format!("failed checks: {} (replay with --seed {})", failed.join(", "), ctx.seed));
    }
    out
}

fn random_vec(rng: &mut ChaCha8Rng, scale: f64) -> Vector3<f64> {
    Vector3::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

fn rel_vec(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub(crate) fn boost_check(ctx: &Context, args: &SampleArgs) -> Result<Produced, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut metric = Check::new("metric", 1e-12);
    let mut inverse = Check::new("inverse", 1e-12);
    let mut w_map = Check::new("w_map", 1e-12);
    for _ in 0..args.samples {
        let u = random_vec(&mut rng, 5.0);
        let x = random_vec(&mut rng, 10.0);
        let tau = rng.random_range(0.1..10.0);
        let bbar = rng.random_range(1.0..4.0);
        let v = loop {
            let v = random_vec(&mut rng, 0.95);
            if v.norm() < 0.95 {
                break v;
            }
        };
        let boosted = pt_boost(&KinematicState::new(tau, x, u), &v, bbar)?;
        let bp = boosted.b();
        metric.record((bp * bp - boosted.u.norm_squared() - 1.0).abs() / (bp * bp));

        let gamma = 1.0 / (1.0 - v.norm_squared()).sqrt();
        let bbar_prime = gamma * (bbar * tau - v.dot(&x)) / tau;
        let back = pt_boost(&boosted, &(-v), bbar_prime)?;
        inverse.record(rel_vec(&back.u, &u) + rel_vec(&back.x, &x));

        // Lorentz transformation of the coordinate velocity w = u/b.
        let w = w_from_u(&u);
        let w_prime = (w / gamma - v + v * (gamma / (gamma + 1.0) * w.dot(&v))) / (1.0 - w.dot(&v));
        w_map.record(rel_vec(&boosted.u, &u_from_w(&w_prime)?));
    }
    Ok(check_report(ctx, args.samples, &[metric, inverse, w_map]))
}

pub(crate) fn fields(ctx: &Context, args: &FieldsArgs) -> Result<Produced, Failure> {
    if let Some(r) = args.r {
        let f = retarded_fields(&SourceEmissionState::new(r, args.u, args.a), args.charge)?;
        let mut report = Report::new(vec!["quantity", "x", "y", "z"]);
        let names = ["E", "B", "E_velocity", "E_acceleration", "E_u_dot_a", "B_velocity", "B_acceleration", "B_u_dot_a"];
        let vectors = [f.e, f.b, f.e_terms[0], f.e_terms[1], f.e_terms[2], f.b_terms[0], f.b_terms[1], f.b_terms[2]];
        for (name, v) in names.iter().zip(vectors) {
            report.push(vec![Cell::Text((*name).into()), Cell::Sci(v.x), Cell::Sci(v.y), Cell::Sci(v.z)]);
        }
        return Ok(render(ctx, &report));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut orth = Check::new("e_dot_b", 1e-12);
    let mut longitudinal = Check::new("longitudinal_when_u_perp_a", 1e-14);
    let mut coulomb = Check::new("static_coulomb", 1e-14);
    for _ in 0..args.samples {
        let r = random_vec(&mut rng, 5.0);
        let u = random_vec(&mut rng, 3.0);
        let a = random_vec(&mut rng, 2.0);
        let f = retarded_fields(&SourceEmissionState::new(r, u, a), args.charge)?;
        orth.record(f.e.dot(&f.b).abs() / (f.e.norm() * f.b.norm()));

        let uhat = u.normalize();
        let a_perp = a - uhat * a.dot(&uhat);
        let f = retarded_fields(&SourceEmissionState::new(r, u, a_perp), args.charge)?;
        longitudinal.record(f.longitudinal(&u).abs() / f.e.norm());

        let f = retarded_fields(&SourceEmissionState::new(r, Vector3::zeros(), Vector3::zeros()), args.charge)?;
        let expected = r * (args.charge / r.norm().powi(3));
        coulomb.record((f.e - expected).norm() / expected.norm() + f.b.norm());
    }
    Ok(check_report(ctx, args.samples, &[orth, longitudinal, coulomb]))
}
