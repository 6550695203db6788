//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ratreal_core::matrix::{c, eigenvalues, fro, hermitian_eigen, real_matrix, scalar, zeros, Tolerance};
use ratreal_core::random::Sampler;
use ratreal_core::{
    build_gpe_canonical, build_odd_canonical, canonical_gpe_certificate, classify_axis,
    close_loop, common_spectrum, design_pole_moving_gain, hamiltonian_closed_loop,
    mcmillan_degree, nonminimal_dhat, pbh_controllable, pbh_observable,
    scalar_spectral_factorize, spectral_factorization_feasible, verify_gpe_certificates,
    verify_odd_certificate, verify_product, verify_scalar_product, Complex64, Error, FactorData,
    FunctionClass, GridConfig, ProductCheck, Realization, Region, ScalarRational,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scalar_factor(a: f64, b: f64, cc: f64, d: f64) -> FactorData {
    FactorData::new(
        scalar(c(a, 0.0)),
        scalar(c(b, 0.0)),
        scalar(c(cc, 0.0)),
        scalar(c(d, 0.0)),
    )
    .expect("1x1 blocks")
}

fn canonical_build() -> Outcome {
    let l1 = build_gpe_canonical(&scalar_factor(-1.0, 1.0, 1.0, 1.0)).system_matrix();
    ensure(l1 == common::l1(), || format!("L1 mismatch: {l1}"))?;
    let r5 = 5f64.sqrt();
    let l2p = build_gpe_canonical(&scalar_factor(-2.0, 2.0, r5 - 2.0, 2.0)).system_matrix();
    let err = (&l2p - common::l2_prime()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    ensure(err <= 1e-12, || format!("L2' max entry error {err:.3e}"))?;
    Ok(format!("L1 exact, L2' max entry error {err:.1e}"))
}

fn transfer_reproduction() -> Outcome {
    let l2 = Realization::from_system_matrix(&common::l2(), 2).map_err(|e| e.to_string())?;
    let l2p = Realization::from_system_matrix(&common::l2_prime(), 2).map_err(|e| e.to_string())?;
    let mut rng = Sampler::new(0xacc2);
    let poles = [c(2.0, 0.0), c(-2.0, 0.0)];
    let (mut worst, mut worst_pair) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let s = common::point_away_from(&mut rng, &poles, 4.0);
        let want = common::psi2(s);
        let got = l2.evaluate(s).map_err(|e| e.to_string())?.value[(0, 0)];
        let other = l2p.evaluate(s).map_err(|e| e.to_string())?.value[(0, 0)];
        worst = worst.max((got - want).norm() / want.norm());
        worst_pair = worst_pair.max((other - got).norm() / got.norm());
    }
    ensure(worst <= 1e-10 && worst_pair <= 1e-10, || {
        format!("closed form {worst:.3e}, L2' vs L2 {worst_pair:.3e}")
    })?;
    Ok(format!("20 points, closed form {worst:.1e}, L2' vs L2 {worst_pair:.1e}"))
}

fn certificate_suite() -> Outcome {
    let (h1, h2) = canonical_gpe_certificate(1).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (name, l) in [("L1", common::l1()), ("L2", common::l2())] {
        let certs = verify_gpe_certificates(&l, &h1, &h2, 1, 1, &tol()).map_err(|e| e.to_string())?;
        ensure(certs.valid(), || format!("{name} certificates rejected"))?;
        ensure(certs.axis.residual <= 1e-12, || {
            format!("{name} axis residual {:.3e}", certs.axis.residual)
        })?;
        notes.push(format!("{name} axis residual {:.1e}", certs.axis.residual));
    }
    let certs = verify_gpe_certificates(&common::l1(), &h1, &h2, 1, 1, &tol()).map_err(|e| e.to_string())?;
    let (values, _) = hermitian_eigen(&certs.gp.residual_matrix).map_err(|e| e.to_string())?;
    let want = [0.0, 0.0, 4.0];
    let err = values.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-10, || format!("HL1 + L1*H eigenvalues {values:?}"))?;
    notes.push(format!("HL1+L1*H spectrum {{0,0,4}} to {err:.1e}"));
    Ok(notes.join(", "))
}

fn odd_certificate() -> Outcome {
    let r = Realization::from_system_matrix(&real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]), 1)
        .map_err(|e| e.to_string())?;
    let cert = verify_odd_certificate(&r.system_matrix(), &scalar(c(-1.0, 0.0)), 1, 1, &tol())
        .map_err(|e| e.to_string())?;
    ensure(cert.residual <= 1e-14, || format!("residual {:.3e}", cert.residual))?;
    let rep = classify_axis(&r, &GridConfig::default(), &tol()).map_err(|e| e.to_string())?;
    let needed = [FunctionClass::Odd, FunctionClass::P, FunctionClass::PO];
    ensure(needed.iter().all(|&k| rep.has(k)) && !rep.has(FunctionClass::Even), || {
        format!("classes {:?}", rep.classes)
    })?;
    let names: Vec<&str> = rep.classes.iter().map(|k| k.name()).collect();
    Ok(format!("residual {:.1e}, classes {{{}}}", cert.residual, names.join(",")))
}

fn factorization_chain() -> Outcome {
    let f = scalar_factor(0.0, 1.0, 1.0, 0.0);
    let feas = spectral_factorization_feasible(&f, &tol()).map_err(|e| e.to_string())?;
    ensure(feas.feasible, || "rank test failed".into())?;
    let h = hamiltonian_closed_loop(&f, &scalar(c(-1.0, 0.0)), &tol()).map_err(|e| e.to_string())?;
    let want_a = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    ensure(fro(&(&h.a_cl - want_a)) <= 1e-10, || format!("A_cl = {}", h.a_cl))?;
    let eig_err = h
        .eigenvalues
        .iter()
        .zip([c(-1.0, 0.0), c(1.0, 0.0)])
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    ensure(eig_err <= 1e-10, || format!("eigenvalues {:?}", h.eigenvalues))?;

    // -1/(s² - 1) = -1 / ((s - 1)(s + 1))
    let psi = ScalarRational::new(vec![], vec![c(1.0, 0.0), c(-1.0, 0.0)], c(-1.0, 0.0))
        .map_err(|e| e.to_string())?;
    let g = scalar_spectral_factorize(&psi).map_err(|e| e.to_string())?;
    ensure(g.denominator_roots().len() == 1 && (g.denominator_roots()[0] - c(1.0, 0.0)).norm() <= 1e-12, || {
        format!("G poles {:?}", g.denominator_roots())
    })?;
    let check = ProductCheck { rel_tol: 1e-9, ..ProductCheck::default() };
    let roots = verify_scalar_product(&psi, &g, &check).map_err(|e| e.to_string())?;
    let psi_r = psi.to_realization().map_err(|e| e.to_string())?;
    let g_r = g.to_realization().map_err(|e| e.to_string())?;
    let states = verify_product(&psi_r, &g_r, &check).map_err(|e| e.to_string())?;
    ensure(roots.passed && states.passed, || {
        format!("product errors {:.3e} / {:.3e}", roots.max_rel_error, states.max_rel_error)
    })?;

    let double = ScalarRational::new(vec![], vec![c(0.0, 0.0), c(0.0, 0.0)], c(-1.0, 0.0))
        .map_err(|e| e.to_string())?;
    match scalar_spectral_factorize(&double) {
        Err(Error::PseudoSpectral(_)) => {}
        other => return Err(format!("-1/s² gave {other:?}")),
    }
    Ok(format!(
        "feasible, A_cl eigenvalues ±1 to {eig_err:.1e}, G pole +1, product error {:.1e}, -1/s² pseudo-spectral",
        roots.max_rel_error.max(states.max_rel_error)
    ))
}

fn nonminimal_feedthrough() -> Outcome {
    let f = scalar_factor(1.0, 1.0, 1.0, 0.0);
    let (dhat, lambda) = nonminimal_dhat(&f, &tol()).map_err(|e| e.to_string())?;
    ensure(dhat[(0, 0)] == c(0.5, 0.0), || format!("D̂ = {}", dhat[(0, 0)]))?;
    let g = FactorData::new(f.ahat, f.bhat, f.chat, dhat).map_err(|e| e.to_string())?;
    let r = build_gpe_canonical(&g);
    let deg = mcmillan_degree(&r, &tol()).map_err(|e| e.to_string())?.mcmillan_degree;
    ensure(deg == 0, || format!("McMillan degree {deg}"))?;
    let mut rng = Sampler::new(6);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let s = common::point_away_from(&mut rng, &[c(1.0, 0.0), c(-1.0, 0.0)], 3.0);
        let v = r.evaluate(s).map_err(|e| e.to_string())?.value[(0, 0)];
        worst = worst.max((v - c(0.25, 0.0)).norm());
    }
    ensure(worst <= 1e-10, || format!("deviation from 0.25: {worst:.3e}"))?;
    Ok(format!("λ = {}, D̂ = 0.5, degree 0, value 0.25 ± {worst:.1e}", lambda.re))
}

fn canonical_certificates_property() -> Outcome {
    let mut rng = Sampler::new(0x7e01);
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.index(1, 5);
        let p = rng.index(1, 3);
        let l = build_gpe_canonical(&rng.factor(n, p)).system_matrix();
        let (h1, h2) = canonical_gpe_certificate(n).map_err(|e| e.to_string())?;
        let ok = verify_gpe_certificates(&l, &h1, &h2, n, p, &tol())
            .map(|c| c.valid())
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    ensure(failures == 0, || format!("{failures}/100 builds rejected"))?;
    Ok("100/100 builds certified".into())
}

fn feedback_closure_property() -> Outcome {
    let mut rng = Sampler::new(0x7101);
    let cfg = GridConfig::default();
    let mut gpe_ok = 0;
    for _ in 0..50 {
        let n = rng.index(1, 3);
        let p = rng.index(1, 2);
        let r = build_gpe_canonical(&rng.strictly_proper_factor(n, p));
        let x = rng.matrix(p, p);
        let k = -(&x * x.adjoint());
        let cl = close_loop(&r, &k, &tol()).map_err(|e| e.to_string())?;
        let rep = classify_axis(&cl, &cfg, &tol()).map_err(|e| e.to_string())?;
        gpe_ok += usize::from(rep.has(FunctionClass::GPE));
    }
    let mut odd_ok = 0;
    for _ in 0..50 {
        let nu = rng.index(0, 2);
        let rest = rng.index(1, 2);
        let p = rng.index(1, 2);
        let coupling = rng.matrix(nu, rest);
        let r = build_odd_canonical(
            &rng.skew_hermitian(nu),
            &rng.skew_hermitian(rest),
            &zeros(p, p),
            &rng.matrix(nu, p),
            &rng.matrix(rest, p),
            Some(&coupling),
            &tol(),
        )
        .map_err(|e| e.to_string())?;
        let k = rng.skew_hermitian(p);
        let cl = close_loop(&r, &k, &tol()).map_err(|e| e.to_string())?;
        let rep = classify_axis(&cl, &cfg, &tol()).map_err(|e| e.to_string())?;
        odd_ok += usize::from(rep.has(FunctionClass::Odd));
    }
    ensure(gpe_ok == 50 && odd_ok == 50, || format!("GPE {gpe_ok}/50, Odd {odd_ok}/50"))?;
    Ok("GPE 50/50, Odd 50/50".into())
}

fn hidden_modes_property() -> Outcome {
    let mut rng = Sampler::new(0x4101);
    let mut hits = 0;
    for trial in 0..50 {
        let n = rng.index(1, 4);
        let m = rng.index(1, 2);
        let extra = rng.index(1, 2);
        let (r, _) = rng.nonminimal(n, m, m, extra, trial % 2 == 1);
        for _ in 0..20 {
            let d = rng.matrix(m, m) * c(rng.uniform(0.1, 5.0), 0.0);
            let probe = Realization::new(r.a().clone(), r.b().clone(), r.c().clone(), d)
                .map_err(|e| e.to_string())?;
            let shared = common_spectrum(&probe, 1e-6).map_err(|e| e.to_string())?;
            hits += usize::from(!shared.is_empty());
        }
    }
    ensure(hits == 1000, || format!("{hits}/1000 trials share an eigenvalue"))?;
    Ok("1000/1000 trials share an eigenvalue".into())
}

fn min_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min)
}

fn pole_moving_property() -> Outcome {
    let mut rng = Sampler::new(0x6101);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for i in 0..100 {
        let n = rng.index(1, 6);
        let m = rng.index(1, 3);
        let r = if i % 2 == 0 {
            let k = rng.index(1, m.min(n));
            rng.system_with_ranks(n, m, m, k)
        } else {
            Realization::new(rng.matrix(n, n), rng.matrix(n, m), rng.matrix(m, n), zeros(m, m))
                .map_err(|e| e.to_string())?
        };
        let Ok(design) = design_pole_moving_gain(&r, &tol()) else {
            failures += 1;
            continue;
        };
        if design.beta != design.gamma {
            return Err(format!("case {i}: ranks {} and {}", design.beta, design.gamma));
        }
        let a_cl = r.a() + r.b() * &design.k * r.c();
        let spec_a = eigenvalues(r.a()).map_err(|e| e.to_string())?;
        let spec_cl = eigenvalues(&a_cl).map_err(|e| e.to_string())?;
        let d = min_distance(&spec_a, &spec_cl);
        worst = worst.min(d);
        failures += usize::from(d <= 1e-6);
    }
    ensure(failures == 0, || format!("{failures}/100 designs too close (worst {worst:.3e})"))?;
    Ok(format!("100/100 designs, smallest distance {worst:.2e}"))
}

fn pbh_oracle_equivalence() -> Outcome {
    let mut rng = Sampler::new(0xb411);
    let mut disagreements = 0;
    for i in 0..200 {
        let n = rng.index(1, 6);
        let m = rng.index(1, 3);
        let p = rng.index(1, 3);
        let extra = rng.index(1, 2);
        let r = match i % 3 {
            0 => rng.system(n, m, p),
            1 => rng.nonminimal(n, m, p, 1, false).0,
            _ => rng.nonminimal(n, m, p, extra, true).0,
        };
        let ctrl = pbh_controllable(r.a(), r.b(), Region::AllPlane, &tol()).map_err(|e| e.to_string())?;
        let obs = pbh_observable(r.a(), r.c(), Region::AllPlane, &tol()).map_err(|e| e.to_string())?;
        let full = r.n();
        disagreements += usize::from(ctrl.holds != (common::controllability_rank(r.a(), r.b()) == full));
        disagreements += usize::from(obs.holds != (common::observability_rank(r.a(), r.c()) == full));
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    Ok("200/200 systems agree on both tests".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("canonical build", canonical_build),
        ("transfer reproduction", transfer_reproduction),
        ("certificate suite", certificate_suite),
        ("odd certificate", odd_certificate),
        ("factorization chain", factorization_chain),
        ("non-minimal feedthrough", nonminimal_feedthrough),
        ("canonical builds certified", canonical_certificates_property),
        ("feedback keeps class", feedback_closure_property),
        ("hidden modes persist", hidden_modes_property),
        ("pole-moving gain", pole_moving_property),
        ("PBH vs Krylov rank", pbh_oracle_equivalence),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
