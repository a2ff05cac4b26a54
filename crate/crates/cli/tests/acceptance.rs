//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so criteria execute sequentially and their timings do not overlap.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fnk_core::ndim_automorphism::{
    double_conjugation_roundtrip, is_nd_preserving, phi_n, phi_n_reconstruction, preserving_equivalence,
    representable_conjugation_identity, strict_conjugation_gap,
};
use fnk_core::unit_automorphism::rho_n;
use fnk_core::verify::gen::{self, GenKind};
use fnk_core::verify::{lattice, phi_n_cases, RECON_TOL};
use fnk_core::{NDInterval, NDimAutomorphism, NDimNegation, UnitAutomorphism, UnitNegation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_closed_form_equilibria() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=5u32 {
        for k in 1..=n {
            let want = 0.5f64.powf(1.0 / (n - k + 1) as f64);
            let got = UnitNegation::ck(n, k).unwrap().equilibrium(1e-12);
            let e = *got.point().ok_or(format!("C({n},{k}): no equilibrium"))?;
            worst = worst.max((e - want).abs());
            ensure((e - want).abs() <= 1e-9, || format!("C({n},{k}): {e} vs {want}"))?;
        }
    }
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let e = *UnitNegation::cupk(2).unwrap().equilibrium(1e-12).point().ok_or("CupK(2): no equilibrium")?;
    ensure((e - golden).abs() <= 1e-9 && (1.0 - e * e - e).abs() <= 1e-9, || format!("CupK(2): {e}"))?;
    Ok(format!("15 Ck cases + CupK(2), max error {worst:.1e}"))
}

fn c2_representability() -> Outcome {
    let (mut agree, mut total, mut worst) = (0usize, 0usize, 0.0f64);
    for n in [2usize, 3] {
        let mut rng = gen::rng(2000 + n as u64);
        for _ in 0..50 {
            let neg = gen::gen_negation_with(&mut rng, GenKind::Representable, n).unwrap();
            let v = neg.decide_representability(11);
            total += 1;
            worst = worst.max(v.max_reconstruction_error);
            ensure(v.subset_monotone && v.reconstructs && v.max_reconstruction_error <= RECON_TOL, || {
                format!("representable fixture rejected: {}", neg.to_json())
            })?;
            agree += v.consistent as usize;
        }
        let mut negatives: Vec<NDimNegation> = (0..50)
            .map(|_| gen::gen_negation_with(&mut rng, GenKind::NonRepresentable, n).unwrap())
            .collect();
        negatives.push(NDimNegation::bottom(n).unwrap());
        negatives.push(NDimNegation::top(n).unwrap());
        for neg in negatives {
            let v = neg.decide_representability(11);
            total += 1;
            ensure(!v.subset_monotone && !v.reconstructs && v.witness.is_some(), || {
                format!("non-representable fixture accepted: {}", neg.to_json())
            })?;
            agree += v.consistent as usize;
        }
    }
    ensure(agree == total, || format!("agreement {agree}/{total}"))?;
    Ok(format!("{total} fixtures, agreement 100%, max reconstruction error {worst:.1e}"))
}

fn c3_strong_pipeline() -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let mut rng = gen::rng(3000 + n as u64);
        for _ in 0..50 {
            let neg = gen::gen_negation_with(&mut rng, GenKind::Strong, n).unwrap();
            let nodeg = neg.no_degenerate_image(41).map_err(|e| e.to_string())?;
            for r in [
                neg.is_strong_nd(41),
                neg.check_dp(41),
                neg.check_induced_equal(41),
                neg.check_equals_tilde_induced(41),
                neg.decide_representability(11).to_report(),
                nodeg,
            ] {
                worst = worst.max(r.max_error);
                ensure(r.passed() && r.max_error <= RECON_TOL, || {
                    format!("{} failed for {}: {:?}", r.property_id, neg.to_json(), r.witness)
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} strong negations, max residual {worst:.1e}"))
}

fn c4_lattice_duality() -> Outcome {
    let mut rng = gen::rng(4000);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let neg = gen::gen_negation_with(&mut rng, GenKind::Strong, 2).unwrap();
        let r = neg.lattice_duality(9).map_err(|e| e.to_string())?;
        ensure(r.pairs_tested >= 1035, || format!("only {} pairs tested", r.pairs_tested))?;
        worst = worst.max(r.max_error);
        ensure(r.passed() && r.max_error <= RECON_TOL, || format!("{:?}", r.witness))?;
    }
    Ok(format!("10 negations × 1035 pairs, max deviation {worst:.1e}"))
}

fn c5_conjugation() -> Outcome {
    let mut rng = gen::rng(5000);
    for n in [2usize, 3] {
        for _ in 0..20 {
            let chain = gen::random_chain(&mut rng, n);
            let psi = gen::random_automorphism(&mut rng);
            let r = representable_conjugation_identity(&chain, &psi, 41).map_err(|e| e.to_string())?;
            ensure(r.passed() && r.max_error <= RECON_TOL, || format!("identity: {:?}", r.witness))?;
            let neg = gen::gen_negation_with(&mut rng, GenKind::Random, n).unwrap();
            let phi = NDimAutomorphism::from_unit(gen::random_automorphism(&mut rng), n).unwrap();
            let r = double_conjugation_roundtrip(&neg, &phi, 41).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("double conjugation: {:?}", r.witness))?;
        }
        for i in 0..10 {
            let neg = if i < 6 {
                gen::gen_negation_with(&mut rng, GenKind::Strong, n).unwrap()
            } else {
                NDimNegation::tilde(UnitNegation::cupk(i as u32 - 4).unwrap(), n).unwrap()
            };
            let r = strict_conjugation_gap(&neg, 11).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("strict gap: {:?}", r.witness))?;
        }
    }
    Ok("40 identity pairs, 40 round trips, 20 strict gaps".into())
}

fn c6_phi_n() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        for (phi, neg) in phi_n_cases(6000 + n as u64, n, 20) {
            for r in [
                is_nd_preserving(&phi, &neg, 21),
                is_nd_preserving(&phi.inverse(), &neg, 21),
                phi_n_reconstruction(&phi, &neg, 21),
            ] {
                let r = r.map_err(|e| e.to_string())?;
                worst = worst.max(r.max_error);
                ensure(r.passed() && r.max_error <= RECON_TOL, || format!("{}: {:?}", r.property_id, r.witness))?;
            }
        }
    }
    let psi = UnitAutomorphism::rescaled(UnitAutomorphism::power(2.0).unwrap(), 0.5).unwrap();
    let phi = phi_n(&NDimAutomorphism::from_unit(psi, 2).unwrap(), &NDimNegation::standard(2).unwrap()).unwrap();
    let out = phi.eval(&NDInterval::<f64>::new(vec![0.25, 0.75]).unwrap()).unwrap();
    let err = (out.values()[0] - 0.125).abs().max((out.values()[1] - 0.875).abs());
    ensure(err <= 1e-12, || format!("hand oracle gave {:?}", out.values()))?;
    Ok(format!("40 constructions, max error {worst:.1e}, hand oracle exact"))
}

fn c7_preserving_equivalence() -> Outcome {
    let mut rng = gen::rng(7000);
    let (mut preserving, mut other) = (0, 0);
    for t in 0..20 {
        let n = 2 + t % 2;
        let (psi, negs, built) = if t < 10 {
            let neg = gen::random_strong_negation(&mut rng);
            let e = *neg.equilibrium(1e-12).point().unwrap();
            let rho = UnitAutomorphism::rescaled(gen::random_automorphism(&mut rng), e).unwrap();
            (rho_n(&rho, &neg).map_err(|e| e.to_string())?, vec![neg; n], true)
        } else {
            (gen::random_automorphism(&mut rng), gen::random_chain(&mut rng, n), false)
        };
        let eq = preserving_equivalence(&psi, &negs, 11).map_err(|e| e.to_string())?;
        ensure(eq.unit_level == eq.n_level, || format!("verdicts disagree: {:?}", eq.report.witness))?;
        ensure(!built || eq.n_level, || "ρ^N lift not preserving".into())?;
        if eq.n_level {
            preserving += 1;
        } else {
            other += 1;
        }
    }
    ensure(other > 0, || "no non-preserving case exercised".into())?;
    Ok(format!("20 pairs ({preserving} preserving, {other} not), agreement 100%"))
}

fn c8_core_lattice() -> Outcome {
    for (n, m) in [(2, 5), (3, 4)] {
        for r in [
            lattice::partial_order(n, m),
            lattice::join_meet(n, m),
            lattice::degenerate_dichotomy(n, m),
        ] {
            ensure(r.passed(), || format!("{} on ({n},{m}): {:?}", r.property_id, r.witness))?;
        }
    }
    Ok("n=2,m=5 and n=3,m=4: zero violations".into())
}

fn c9_determinism() -> Outcome {
    let run = || -> Result<(Vec<u8>, Duration), String> {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_fnk"))
            .args(["theorems", "--suite", "all", "--seed", "42", "--redact", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok((out.stdout, start.elapsed()))
    };
    let (a, ta) = run()?;
    let (b, tb) = run()?;
    ensure(a == b, || "reports differ between runs".into())?;
    let report: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    let count = report["reports"].as_array().map_or(0, Vec::len);
    ensure(count >= 20, || format!("only {count} properties"))?;
    ensure(ta.max(tb) < Duration::from_secs(60), || format!("suite took {:?}", ta.max(tb)))?;
    Ok(format!("{count} properties, identical bytes, {:.1} s per run", ta.max(tb).as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed-form equilibria", c1_closed_form_equilibria, 1),
        ("representability iff ⊆-monotone", c2_representability, 30),
        ("strong pipeline", c3_strong_pipeline, 60),
        ("lattice duality", c4_lattice_duality, 10),
        ("conjugation identities", c5_conjugation, 20),
        ("φ^𝒩 construction", c6_phi_n, 30),
        ("preserving equivalence", c7_preserving_equivalence, 10),
        ("core lattice axioms", c8_core_lattice, 5),
        ("determinism", c9_determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}; exceeded {limit} s"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({:.2} s) {detail}", i + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({:.2} s) {detail}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
