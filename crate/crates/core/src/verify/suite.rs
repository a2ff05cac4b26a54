//! Named suites of property checks.
//!
//! Objects are generated sequentially from per-property seed streams, checked
//! in parallel, and merged in generation order, so a suite report depends on
//! the configuration alone.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ndim_automorphism::{
    branch_consistency, conjugation_preserves_strongness, double_conjugation_roundtrip, is_nd_preserving,
    phi_n, phi_n_reconstruction, preserving_equivalence, representable_conjugation_identity,
    strict_conjugation_gap, trillas_roundtrip, NDimAutomorphism,
};
use crate::ndim_negation::NDimNegation;
use crate::simplex::{sup_dist, NDInterval};
use crate::solve::DEFAULT_TOL;
use crate::unit_automorphism::{invert, is_n_preserving, rho_n, UnitAutomorphism};
use crate::unit_negation::{neg_leq, EquilibriumKind, UnitNegation};

use super::gen::{self, GenKind};
use super::{lattice, PropertyReport, SuiteConfig, SuiteReport, EPS, RECON_TOL};

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = [
    "core-lattice",
    "unit-negations",
    "representability",
    "strong",
    "equilibrium",
    "automorphism",
    "phi-n",
    "all",
];

/// Runs a named suite.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    if config.n.is_empty() || config.n.contains(&0) {
        return Err(Error::Argument("suite dimensions must be a nonempty list of positive integers".into()));
    }
    if config.m_pair < 2 || config.m_point < 2 {
        return Err(Error::Argument("grid resolutions must be at least 2".into()));
    }
    let start = Instant::now();
    let reports = match name {
        "core-lattice" => core_lattice(config),
        "unit-negations" => unit_negations(config),
        "representability" => representability(config),
        "strong" => strong(config),
        "equilibrium" => equilibrium(config),
        "automorphism" => automorphism(config),
        "phi-n" => phi_n_suite(config),
        "all" => {
            let mut all = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                all.extend(run_suite(s, config)?.reports);
            }
            all
        }
        other => {
            return Err(Error::Argument(format!(
                "unknown suite '{other}' (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    let mut report = SuiteReport::new(name, config.clone(), reports);
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Independent seed for one property and dimension (FNV-1a over the tag).
fn sub_seed(seed: u64, tag: &str, n: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain(n.to_le_bytes()).chain(seed.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Merges sub-reports under one property id.
fn combine(id: &str, config: &SuiteConfig, m: usize, tol: f64, parts: Vec<PropertyReport>) -> PropertyReport {
    let start = Instant::now();
    let n = config.n.iter().copied().max().unwrap_or(1);
    let mut r = PropertyReport::new(id, n, m, tol)
        .with_seed(config.seed)
        .merge(parts);
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// A failing report for an operation that returned an error.
fn error_report(id: &str, n: usize, m: usize, e: Error) -> PropertyReport {
    PropertyReport::new(id, n, m, 0.0).fail(json!({"error": e.to_string()}))
}

fn flatten(id: &str, n: usize, m: usize, r: Result<PropertyReport>) -> PropertyReport {
    r.unwrap_or_else(|e| error_report(id, n, m, e))
}

/// A boolean expectation as a report.
fn expect(id: &str, n: usize, m: usize, ok: bool, detail: serde_json::Value) -> PropertyReport {
    let r = PropertyReport::new(id, n, m, 0.0);
    if ok {
        r
    } else {
        r.fail(detail)
    }
}

fn par_check<T: Sync>(items: &[T], f: impl Fn(&T) -> PropertyReport + Sync + Send) -> Vec<PropertyReport> {
    items.par_iter().map(f).collect()
}

fn generate(config: &SuiteConfig, tag: &str, n: usize, kind: GenKind) -> Vec<NDimNegation> {
    let mut r = gen::rng(sub_seed(config.seed, tag, n));
    (0..config.trials)
        .map(|_| gen::gen_negation_with(&mut r, kind, n).expect("generator output is valid"))
        .collect()
}

fn catalog(max_n: u32) -> Vec<UnitNegation> {
    let mut v = vec![UnitNegation::standard(), UnitNegation::bottom(), UnitNegation::top()];
    for n in 1..=max_n {
        for k in 1..=n {
            v.push(UnitNegation::ck(n, k).expect("1 ≤ k ≤ n"));
        }
        v.push(UnitNegation::cupk(n).expect("k ≥ 1"));
    }
    v
}

fn core_lattice(c: &SuiteConfig) -> Vec<PropertyReport> {
    let m = c.m_pair;
    let per_n = |f: fn(usize, usize) -> PropertyReport| c.n.iter().map(|&n| f(n, m)).collect::<Vec<_>>();
    vec![
        combine("lattice.partial_order", c, m, 0.0, per_n(lattice::partial_order)),
        combine("lattice.join_meet", c, m, 0.0, per_n(lattice::join_meet)),
        combine("lattice.degenerate_dichotomy", c, m, 0.0, per_n(lattice::degenerate_dichotomy)),
        combine("lattice.subset_antisymmetry", c, m, 0.0, per_n(lattice::subset_antisymmetry)),
        combine("lattice.grid_census", c, m, 0.0, per_n(lattice::grid_census)),
    ]
}

fn unit_negations(c: &SuiteConfig) -> Vec<PropertyReport> {
    let m = c.m_point;
    let mut r = gen::rng(sub_seed(c.seed, "unit", 1));
    let randoms: Vec<UnitNegation> = (0..c.trials).map(|_| gen::random_negation(&mut r)).collect();
    let autos: Vec<UnitAutomorphism> = (0..c.trials).map(|_| gen::random_automorphism(&mut r)).collect();
    let mut all = catalog(5);
    all.extend(randoms.iter().cloned());

    let axioms = par_check(&all, |neg| neg.check_n1().merge([neg.check_n2(m)]));

    let ck: Vec<UnitNegation> = (1..=5u32)
        .flat_map(|n| (1..=n).map(move |k| UnitNegation::ck(n, k).expect("1 ≤ k ≤ n")))
        .collect();
    let ck_strong = par_check(&ck, |neg| neg.is_strong(m));

    let cupk: Vec<u32> = (2..=5).collect();
    let cupk_reports = par_check(&cupk, |&k| {
        let neg = UnitNegation::cupk(k).expect("k ≥ 1");
        let strict = neg.is_strict(m);
        let strong = neg.is_strong(m);
        expect(
            "unit.cupk_strict_not_strong",
            1,
            m,
            strict.passed() && !strong.passed(),
            json!({"k": k, "strict": strict.passed(), "strong": strong.passed()}),
        )
    });

    let chain: Vec<PropertyReport> = (1..5u32)
        .map(|k| {
            neg_leq(
                &UnitNegation::cupk(k).expect("k ≥ 1"),
                &UnitNegation::cupk(k + 1).expect("k ≥ 1"),
                m,
            )
        })
        .collect();

    let bounds = par_check(&all, |neg| {
        neg_leq(&UnitNegation::bottom(), neg, m).merge([neg_leq(neg, &UnitNegation::top(), m)])
    });

    let from_auto = par_check(&autos, |psi| {
        UnitNegation::from_automorphism(psi.clone()).expect("unit domain").is_strong(m)
    });

    let pairs: Vec<(UnitNegation, UnitAutomorphism)> = randoms.iter().cloned().zip(autos.iter().cloned()).collect();
    let conj = par_check(&pairs, |(neg, rho)| {
        let there = UnitNegation::conjugate(neg.clone(), rho.clone()).expect("unit domain");
        let back = UnitNegation::conjugate(there, invert(rho)).expect("unit domain");
        let xs = crate::simplex::unit_grid::<f64>(m);
        let err = xs.iter().map(|&x| (back.eval(x) - neg.eval(x)).abs()).fold(0.0, f64::max);
        let mut rep = PropertyReport::new("unit.conjugate_roundtrip", 1, m, RECON_TOL);
        rep.pairs_tested = xs.len() as u64;
        rep.max_error = err;
        if err <= RECON_TOL {
            rep
        } else {
            rep.fail(json!({"negation": neg, "automorphism": rho, "error": err}))
        }
    });

    let mut r2 = gen::rng(sub_seed(c.seed, "rho_n", 1));
    let rho_inputs: Vec<(UnitNegation, UnitAutomorphism)> = (0..c.trials)
        .map(|_| {
            let neg = gen::random_strong_negation(&mut r2);
            let base = gen::random_automorphism(&mut r2);
            (neg, base)
        })
        .collect();
    let rho = par_check(&rho_inputs, |(neg, base)| {
        let id = "unit.rho_n_preserving";
        let e = match neg.equilibrium(DEFAULT_TOL).kind {
            EquilibriumKind::Point(e) => e,
            _ => return expect(id, 1, m, false, json!({"negation": neg, "reason": "no equilibrium"})),
        };
        let built = UnitAutomorphism::rescaled(base.clone(), e).and_then(|rho| rho_n(&rho, neg));
        match built {
            Ok(a) => a
                .check_automorphism(m)
                .merge([is_n_preserving(&a, neg, m), is_n_preserving(&invert(&a), neg, m)]),
            Err(err) => error_report(id, 1, m, err),
        }
    });

    vec![
        combine("unit.axioms", c, m, EPS, axioms),
        combine("unit.ck_strong", c, m, EPS, ck_strong),
        combine("unit.cupk_strict_not_strong", c, m, EPS, cupk_reports),
        combine("unit.cupk_chain", c, m, EPS, chain),
        combine("unit.bounds", c, m, EPS, bounds),
        combine("unit.from_automorphism_strong", c, m, EPS, from_auto),
        combine("unit.conjugate_roundtrip", c, m, RECON_TOL, conj),
        combine("unit.rho_n_preserving", c, m, EPS, rho),
    ]
}

fn representability(c: &SuiteConfig) -> Vec<PropertyReport> {
    let m = c.m_pair;
    let mut axioms = Vec::new();
    let mut iff = Vec::new();
    let mut by_part = Vec::new();
    let mut bounds = Vec::new();
    let mut induced = Vec::new();
    for &n in &c.n {
        let reps = generate(c, "representable", n, GenKind::Representable);
        let mut negatives = if n > 1 {
            generate(c, "non_representable", n, GenKind::NonRepresentable)
        } else {
            Vec::new()
        };
        if n > 1 {
            negatives.push(NDimNegation::bottom(n).expect("n ≥ 1"));
            negatives.push(NDimNegation::top(n).expect("n ≥ 1"));
        }
        let everything: Vec<&NDimNegation> = reps.iter().chain(&negatives).collect();
        axioms.extend(par_check(&everything, |neg| neg.check_nd_axioms(m)));

        iff.extend(par_check(&reps, |neg| {
            let v = neg.decide_representability(m);
            let ok = v.representable && v.consistent && v.max_reconstruction_error <= RECON_TOL;
            expect("nd.representability_iff", n, m, ok, json!({"expected": true, "verdict": v}))
        }));
        iff.extend(par_check(&negatives, |neg| {
            let v = neg.decide_representability(m);
            let ok = !v.representable && !v.subset_monotone && v.consistent && v.witness.is_some();
            expect("nd.representability_iff", n, m, ok, json!({"expected": false, "negation": neg, "verdict": v}))
        }));

        by_part.extend(par_check(&reps, |neg| neg.is_monotone_by_part(m)));

        bounds.extend(par_check(&reps, |neg| {
            let crate::ndim_negation::NdNegNode::Representable { negs } = neg.node() else {
                unreachable!("generator returns representable negations")
            };
            let lo = NDimNegation::tilde(negs[0].clone(), n).expect("n ≥ 1");
            let hi = NDimNegation::tilde(negs[n - 1].clone(), n).expect("n ≥ 1");
            let parts: Result<Vec<PropertyReport>> = [
                NDimNegation::bottom(n).expect("n ≥ 1").preceq(neg, m),
                neg.preceq(&NDimNegation::top(n).expect("n ≥ 1"), m),
                lo.preceq(neg, m),
                neg.preceq(&hi, m),
            ]
            .into_iter()
            .collect();
            match parts {
                Ok(p) => PropertyReport::new("nd.preceq_bounds", n, m, EPS).merge(p),
                Err(e) => error_report("nd.preceq_bounds", n, m, e),
            }
        }));

        induced.extend(par_check(&reps, |neg| {
            let crate::ndim_negation::NdNegNode::Representable { negs } = neg.node() else {
                unreachable!("generator returns representable negations")
            };
            match neg.induced_negations(c.m_point) {
                Ok(ind) => {
                    let xs = crate::simplex::unit_grid::<f64>(c.m_point);
                    let err = ind
                        .iter()
                        .zip(negs)
                        .flat_map(|(a, b)| xs.iter().map(move |&x| (a.eval(x) - b.eval(x)).abs()))
                        .fold(0.0, f64::max);
                    let mut r = PropertyReport::new("nd.induced_negations", n, c.m_point, EPS)
                        .merge(ind.iter().map(|x| x.check_n1().merge([x.check_n2(c.m_point)])));
                    r.max_error = r.max_error.max(err);
                    if err > EPS {
                        r = r.fail(json!({"negation": neg, "max_deviation": err}));
                    }
                    r
                }
                Err(e) => error_report("nd.induced_negations", n, c.m_point, e),
            }
        }));
    }
    vec![
        combine("nd.axioms", c, m, EPS, axioms),
        combine("nd.representability_iff", c, m, RECON_TOL, iff),
        combine("nd.monotone_by_part", c, m, EPS, by_part),
        combine("nd.preceq_bounds", c, m, EPS, bounds),
        combine("nd.induced_negations", c, c.m_point, EPS, induced),
    ]
}

fn strong(c: &SuiteConfig) -> Vec<PropertyReport> {
    let (mp, mq) = (c.m_point, c.m_pair);
    let mut involution = Vec::new();
    let mut strict = Vec::new();
    let mut dp = Vec::new();
    let mut equal = Vec::new();
    let mut nodeg = Vec::new();
    let mut duality = Vec::new();
    let mut trillas = Vec::new();
    for &n in &c.n {
        let negs = generate(c, "strong", n, GenKind::Strong);
        involution.extend(par_check(&negs, |x| x.is_strong_nd(mp)));
        strict.extend(par_check(&negs, |x| x.is_strict_nd(mq)));
        dp.extend(par_check(&negs, |x| x.check_dp(mp)));
        equal.extend(par_check(&negs, |x| {
            let v = x.decide_representability(mq);
            x.check_induced_equal(mp)
                .merge([x.check_equals_tilde_induced(mp), v.to_report()])
        }));
        nodeg.extend(par_check(&negs, |x| flatten("nd.no_degenerate_image", n, mp, x.no_degenerate_image(mp))));
        duality.extend(par_check(&negs, |x| flatten("nd.lattice_duality", n, mq, x.lattice_duality(mq))));
        trillas.extend(par_check(&negs, |x| flatten("auto.trillas_roundtrip", n, mq, trillas_roundtrip(x, mq))));
    }
    vec![
        combine("nd.strong_involution", c, mp, EPS, involution),
        combine("nd.strong_strict", c, mq, EPS, strict),
        combine("nd.dp", c, mp, EPS, dp),
        combine("nd.strong_representable", c, mp, RECON_TOL, equal),
        combine("nd.no_degenerate_image", c, mp, EPS, nodeg),
        combine("nd.lattice_duality", c, mq, EPS, duality),
        combine("auto.trillas_roundtrip", c, mq, RECON_TOL, trillas),
    ]
}

fn equilibrium(c: &SuiteConfig) -> Vec<PropertyReport> {
    let tol = DEFAULT_TOL;
    let mut ck = Vec::new();
    for n in 1..=5u32 {
        for k in 1..=n {
            let neg = UnitNegation::ck(n, k).expect("1 ≤ k ≤ n");
            let expected = 0.5f64.powf(1.0 / (n - k + 1) as f64);
            let got = neg.equilibrium(tol);
            let err = got.point().map_or(f64::INFINITY, |e| (e - expected).abs());
            let mut r = expect(
                "eq.ck_closed_form",
                1,
                0,
                err <= EPS,
                json!({"n": n, "k": k, "expected": expected, "result": got}),
            );
            r.max_error = err;
            r.pairs_tested = 1;
            ck.push(r);
        }
    }

    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let cup = UnitNegation::cupk(2).expect("k ≥ 1").equilibrium(tol);
    let cup_err = cup.point().map_or(f64::INFINITY, |e| (e - golden).abs());
    let mut cup_report = expect(
        "eq.cupk2_golden",
        1,
        0,
        cup_err <= EPS,
        json!({"expected": golden, "result": cup}),
    );
    cup_report.max_error = cup_err;

    let mut jumps = vec![
        expect(
            "eq.jump_kinds_none",
            1,
            0,
            UnitNegation::bottom().equilibrium(tol).kind == EquilibriumKind::None
                && UnitNegation::top().equilibrium(tol).kind == EquilibriumKind::None,
            json!({"reason": "unit extremes reported an equilibrium"}),
        ),
    ];
    for &n in &c.n {
        let b = NDimNegation::bottom(n).expect("n ≥ 1").nd_equilibrium(tol);
        let t = NDimNegation::top(n).expect("n ≥ 1").nd_equilibrium(tol);
        jumps.push(expect(
            "eq.jump_kinds_none",
            n,
            0,
            b.kind == EquilibriumKind::None && t.kind == EquilibriumKind::None,
            json!({"bottom": b, "top": t}),
        ));
    }

    let mut diagonal = Vec::new();
    for &n in &c.n {
        let s = NDimNegation::standard(n).expect("n ≥ 1").nd_equilibrium(tol);
        diagonal.push(expect(
            "eq.nd_diagonal",
            n,
            0,
            s.point() == Some(&NDInterval::diag(0.5, n).expect("valid diagonal")),
            json!({"negation": "standard", "result": s}),
        ));
        let ck = NDimNegation::tilde(UnitNegation::ck(3, 1).expect("valid"), n)
            .expect("n ≥ 1")
            .nd_equilibrium(tol);
        let want = 0.5f64.powf(1.0 / 3.0);
        diagonal.push(expect(
            "eq.nd_diagonal",
            n,
            0,
            ck.point().is_some_and(|p| p.is_degenerate() && (p.values()[0] - want).abs() <= EPS),
            json!({"negation": "C_1 with n = 3", "result": ck}),
        ));
        let negs = generate(c, "equilibrium", n, GenKind::Strong);
        diagonal.extend(par_check(&negs, |neg| {
            let unit = UnitNegation::from_automorphism(match neg.node() {
                crate::ndim_negation::NdNegNode::StrongFromAuto { phi, .. } => match phi.node() {
                    crate::ndim_automorphism::NdAutoNode::FromUnit { psi, .. } => psi.clone(),
                    _ => unreachable!("generator lifts unit automorphisms"),
                },
                _ => unreachable!("generator returns strong_from_auto"),
            })
            .expect("unit domain");
            let r = neg.nd_equilibrium(tol);
            let e = unit.equilibrium(tol);
            let ok = match (r.point(), e.point()) {
                (Some(p), Some(e)) => p.is_degenerate() && (p.values()[0] - e).abs() <= EPS,
                _ => false,
            };
            let mut rep = expect("eq.nd_diagonal", n, 0, ok, json!({"negation": neg, "result": r, "unit": e}));
            rep.max_error = r.residual;
            rep
        }));
    }

    vec![
        combine("eq.ck_closed_form", c, 0, EPS, ck),
        combine("eq.cupk2_golden", c, 0, EPS, vec![cup_report]),
        combine("eq.jump_kinds_none", c, 0, 0.0, jumps),
        combine("eq.nd_diagonal", c, 0, EPS, diagonal),
    ]
}

fn automorphism(c: &SuiteConfig) -> Vec<PropertyReport> {
    let (mp, mq) = (c.m_point, c.m_pair);
    let mut basics = Vec::new();
    let mut identity = Vec::new();
    let mut double = Vec::new();
    let mut strongness = Vec::new();
    let mut gap = Vec::new();
    let mut equivalence = Vec::new();
    let mut continuity = Vec::new();
    for &n in &c.n {
        let mut r = gen::rng(sub_seed(c.seed, "automorphism", n));
        let autos: Vec<NDimAutomorphism> = (0..c.trials)
            .map(|_| NDimAutomorphism::from_unit(gen::random_automorphism(&mut r), n).expect("n ≥ 1"))
            .collect();
        basics.extend(par_check(&autos, |phi| {
            phi.check_boundary()
                .merge([phi.check_order_isomorphism(mq), phi.check_inverse_roundtrip(mp)])
        }));

        let chains: Vec<(Vec<UnitNegation>, UnitAutomorphism)> = (0..c.trials)
            .map(|_| (gen::random_chain(&mut r, n), gen::random_automorphism(&mut r)))
            .collect();
        identity.extend(par_check(&chains, |(negs, psi)| {
            flatten("auto.conjugation_identity", n, mp, representable_conjugation_identity(negs, psi, mp))
        }));

        let strongs = generate(c, "auto_strong", n, GenKind::Strong);
        let randoms = generate(c, "auto_random", n, GenKind::Random);
        let subjects: Vec<(&NDimNegation, &NDimAutomorphism)> =
            strongs.iter().chain(&randoms).zip(autos.iter().cycle()).collect();
        double.extend(par_check(&subjects, |(neg, phi)| {
            flatten("auto.double_conjugation", n, mp, double_conjugation_roundtrip(neg, phi, mp))
        }));
        strongness.extend(par_check(&subjects, |(neg, phi)| {
            flatten("auto.conjugate_strongness", n, mq, conjugation_preserves_strongness(neg, phi, mq))
        }));
        let mut stricts: Vec<NDimNegation> = strongs.clone();
        stricts.extend((2..=5).map(|k| {
            NDimNegation::tilde(UnitNegation::cupk(k).expect("k ≥ 1"), n).expect("n ≥ 1")
        }));
        gap.extend(par_check(&stricts, |neg| {
            flatten("auto.strict_gap", n, mq, strict_conjugation_gap(neg, mq))
        }));

        let cases: Vec<(UnitAutomorphism, Vec<UnitNegation>, bool)> = (0..c.trials)
            .map(|t| {
                if t % 2 == 0 {
                    let neg = gen::random_strong_negation(&mut r);
                    let base = gen::random_automorphism(&mut r);
                    let e = neg.equilibrium(DEFAULT_TOL).point().copied().unwrap_or(0.5);
                    let psi = UnitAutomorphism::rescaled(base, e)
                        .and_then(|rho| rho_n(&rho, &neg))
                        .expect("strong generated negations admit ρ^N");
                    (psi, vec![neg; n], true)
                } else {
                    (gen::random_automorphism(&mut r), gen::random_chain(&mut r, n), false)
                }
            })
            .collect();
        equivalence.extend(par_check(&cases, |(psi, negs, built_preserving)| {
            match preserving_equivalence(psi, negs, mq) {
                Ok(eq) => {
                    let consistent = !*built_preserving || eq.n_level;
                    eq.report.merge([expect(
                        "auto.rho_n_preserving",
                        n,
                        mq,
                        consistent,
                        json!({"reason": "ρ^N lift failed to preserve Ñ"}),
                    )])
                }
                Err(e) => error_report("auto.preserving_equivalence", n, mq, e),
            }
        }));

        let std = NDimNegation::standard(n).expect("n ≥ 1");
        let square = NDimAutomorphism::from_unit(UnitAutomorphism::power(2.0).expect("p > 0"), n).expect("n ≥ 1");
        let bottom = NDimNegation::bottom(n).expect("n ≥ 1");
        let jump = bottom.discontinuity(crate::ndim_negation::continuity_base(n, mq), 3);
        continuity.push(std.discontinuity(crate::ndim_negation::continuity_base(n, mq), 3));
        continuity.push(square.discontinuity(mq, 3));
        continuity.push(expect(
            "continuity.bottom_flagged",
            n,
            mq,
            !jump.passed(),
            json!({"report": jump}),
        ));
    }
    vec![
        combine("auto.basics", c, mq, EPS, basics),
        combine("auto.conjugation_identity", c, mp, EPS, identity),
        combine("auto.double_conjugation", c, mp, RECON_TOL, double),
        combine("auto.conjugate_strongness", c, mq, EPS, strongness),
        combine("auto.strict_gap", c, mq, EPS, gap),
        combine("auto.preserving_equivalence", c, mq, EPS, equivalence),
        combine("continuity.heuristic", c, mq, 0.9, continuity),
    ]
}

/// `(ψ'', 𝒩)` pairs for the `φ^𝒩` checks: `𝒩` random strong, `ψ''` a random
/// automorphism of `[0,e]` with `/e/` the equilibrium of `𝒩`.
pub fn phi_n_cases(seed: u64, n: usize, count: usize) -> Vec<(NDimAutomorphism, NDimNegation)> {
    let mut r = gen::rng(seed);
    (0..count)
        .map(|_| {
            let neg = gen::gen_negation_with(&mut r, GenKind::Strong, n).expect("valid");
            let e = neg
                .nd_equilibrium(DEFAULT_TOL)
                .point()
                .map(|p| p.values()[0])
                .expect("strong generated negations have a diagonal equilibrium");
            let psi = gen::random_automorphism_on(&mut r, e).expect("e in (0,1)");
            let base = NDimAutomorphism::from_unit(psi, n).expect("n ≥ 1");
            let phi = phi_n(&base, &neg).expect("preconditions hold by construction");
            (phi, neg)
        })
        .collect()
}

fn phi_n_suite(c: &SuiteConfig) -> Vec<PropertyReport> {
    let m = c.m_pair;
    let mut preserving = Vec::new();
    let mut reconstruction = Vec::new();
    let mut branches = Vec::new();
    for &n in &c.n {
        let cases = phi_n_cases(sub_seed(c.seed, "phi_n", n), n, c.trials);
        preserving.extend(par_check(&cases, |(phi, neg)| {
            let fwd = flatten("phin.preserving", n, m, is_nd_preserving(phi, neg, m));
            let inv = flatten("phin.preserving", n, m, is_nd_preserving(&phi.inverse(), neg, m));
            fwd.merge([inv])
        }));
        reconstruction.extend(par_check(&cases, |(phi, neg)| {
            flatten("phin.reconstruction", n, m, phi_n_reconstruction(phi, neg, m))
        }));
        branches.extend(par_check(&cases, |(phi, _)| flatten("phin.branch_consistency", n, m, branch_consistency(phi, m))));
    }

    let hand = (|| -> Result<PropertyReport> {
        let psi = UnitAutomorphism::rescaled(UnitAutomorphism::power(2.0)?, 0.5)?;
        let phi = phi_n(&NDimAutomorphism::from_unit(psi, 2)?, &NDimNegation::standard(2)?)?;
        let out = phi.eval(&NDInterval::new(vec![0.25, 0.75])?)?;
        let err = sup_dist(out.values(), &[0.125, 0.875]);
        let mut r = expect("phin.hand_oracle", 2, 0, err <= 1e-12, json!({"image": out}));
        r.max_error = err;
        Ok(r)
    })();

    vec![
        combine("phin.preserving", c, m, EPS, preserving),
        combine("phin.reconstruction", c, m, RECON_TOL, reconstruction),
        combine("phin.branch_consistency", c, m, EPS, branches),
        combine("phin.hand_oracle", c, 0, 1e-12, vec![flatten("phin.hand_oracle", 2, 0, hand)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            n: vec![2],
            m_pair: 5,
            m_point: 11,
            trials: 3,
            seed: 7,
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_configuration() {
        for name in SUITES {
            let r = run_suite(name, &small()).unwrap();
            let failures: Vec<_> = r.failures().collect();
            assert!(r.passed, "{name}: {failures:#?}");
        }
    }

    #[test]
    fn unknown_suite_is_an_argument_error() {
        assert!(matches!(run_suite("nosuch", &small()), Err(Error::Argument(_))));
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("strong", &small()).unwrap().redacted();
        let b = run_suite("strong", &small()).unwrap().redacted();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn all_has_at_least_twenty_properties() {
        assert!(run_suite("all", &small()).unwrap().reports.len() >= 20);
    }
}
