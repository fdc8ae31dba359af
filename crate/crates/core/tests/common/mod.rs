//! Generators and property suites shared by the property tests and the
//! acceptance run. Every suite uses a fixed seed, printed when it starts.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use pcqe::formula::{eval_qf, sample_quantified, Atom, CFormula, Formula, Quantifier, RelOp, Truth};
use pcqe::matching::{matching_weight, max_weight_matching, max_weight_matching_with, WEdge};
use pcqe::nf::{
    conj_poly, context, is_real_term, term_equiv, to_cartesian_nf,
    to_conjugate_nf, Ctx, QPoly,
};
use pcqe::number::{int, rat, GaussianRational, Rational};
use pcqe::pipeline::purify;
use pcqe::poly::{Monomial, Poly};
use pcqe::real::{eval_real_qf, RFormula, Rel, RealAtom, RealFormula};
use pcqe::realnf::{to_real_nf, RealNf, RealNfOptions};
use pcqe::reinterpret::{
    build_cost_graph, mcpec, real_atom, reinterpret_formula, word_length, CostEdge, CostGraph,
    EqNode, NfStyle,
};
use pcqe::simplify::{normalize, simplify_real};
use pcqe::term::{eval_term, Assignment, Term, Variable};
use pcqe::vs::vs_eliminate;

pub const SEED: u64 = 0x5eed_c0de;

pub type SuiteResult = Result<(), String>;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    }
}

fn run<S>(name: &str, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> SuiteResult
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    println!("suite {name}: {cases} cases, seed {SEED:#x}");
    TestRunner::new(config(cases))
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn lib<T>(r: pcqe::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

// ---------------------------------------------------------------- generators

pub const VARS: &[&str] = &["x", "y", "z"];

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=2).prop_map(|(n, d)| rat(n, d))
}

pub fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

pub fn arb_term(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(vars).prop_map(Term::var),
        2 => (0i64..=3, 1i64..=2).prop_map(|(n, d)| Term::Const(rat(n, d))),
        1 => Just(Term::I),
    ];
    leaf.prop_recursive(4, 24, 2, |t| {
        prop_oneof![
            3 => (t.clone(), t.clone()).prop_map(|(a, b)| Term::add(a, b)),
            3 => (t.clone(), t.clone()).prop_map(|(a, b)| Term::mul(a, b)),
            1 => t.clone().prop_map(Term::neg),
            1 => (t.clone(), 0u32..=2).prop_map(|(a, k)| Term::pow(a, k)),
            1 => t.clone().prop_map(Term::re),
            1 => t.clone().prop_map(Term::im),
            1 => t.prop_map(Term::conj),
        ]
    })
    .boxed()
}

/// Terms that are real-valued by construction.
pub fn arb_real_term(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
    prop_oneof![
        arb_term(vars).prop_map(Term::re),
        arb_term(vars).prop_map(Term::im),
        arb_term(vars).prop_map(|t| Term::mul(t.clone(), Term::conj(t))),
        (0i64..=3).prop_map(Term::int),
    ]
    .boxed()
}

pub fn arb_assignment(vars: &'static [&'static str]) -> impl Strategy<Value = Assignment> {
    vec(arb_gaussian(), vars.len())
        .prop_map(move |vals| vars.iter().map(|v| Variable::new(v)).zip(vals).collect())
}

pub fn arb_atom(vars: &'static [&'static str]) -> BoxedStrategy<Atom> {
    prop_oneof![
        (arb_term(vars), prop_oneof![Just(RelOp::Eq), Just(RelOp::Ne)], arb_term(vars))
            .prop_map(|(l, r, t)| Atom::new(l, r, t)),
        (arb_real_term(vars), prop_oneof![Just(RelOp::Le), Just(RelOp::Lt)], arb_real_term(vars))
            .prop_map(|(l, r, t)| Atom::new(l, r, t)),
        (arb_term(vars), prop_oneof![Just(RelOp::Le), Just(RelOp::Lt)], arb_term(vars))
            .prop_map(|(l, r, t)| Atom::new(l, r, t)),
    ]
    .boxed()
}

pub fn arb_qf_formula(vars: &'static [&'static str]) -> BoxedStrategy<CFormula> {
    arb_atom(vars)
        .prop_map(Formula::Atom)
        .prop_recursive(3, 12, 3, |f| {
            prop_oneof![
                vec(f.clone(), 2..=3).prop_map(Formula::and),
                vec(f.clone(), 2..=3).prop_map(Formula::or),
                f.clone().prop_map(Formula::not),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (f.clone(), f).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
        .boxed()
}

/// Random polynomial of total degree at most 2 in `n` variables.
pub fn arb_qpoly(n: usize) -> impl Strategy<Value = QPoly> {
    let mono = vec(0u32..=2, n).prop_filter("degree <= 2", |e| e.iter().sum::<u32>() <= 2);
    vec((mono, -3i64..=3), 1..=4).prop_map(move |ts| {
        Poly::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial::from_exps(e), int(c))))
    })
}

pub fn arb_rel() -> impl Strategy<Value = Rel> {
    proptest::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge])
}

pub fn arb_real_qf(n: usize) -> BoxedStrategy<RFormula> {
    (arb_qpoly(n), arb_rel())
        .prop_map(|(p, r)| Formula::Atom(RealAtom::new(p, r)))
        .prop_recursive(2, 8, 3, |f| {
            prop_oneof![
                vec(f.clone(), 2..=3).prop_map(Formula::and),
                vec(f.clone(), 2..=3).prop_map(Formula::or),
                f.prop_map(Formula::not),
            ]
        })
        .boxed()
}

pub fn arb_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    vec(arb_rational(), n)
}

// ------------------------------------------------------------------ rewrites

/// Applies semantics-preserving rewrites chosen by `rules`. Expanding rules
/// are limited by `budget` to keep terms small.
pub fn rewrite(t: &Term, rules: &mut impl Iterator<Item = u8>, budget: &mut u32) -> Term {
    let rec = |x: &Term, rules: &mut _, budget: &mut u32| Box::new(rewrite(x, rules, budget));
    let t = match t {
        Term::Add(a, b) => Term::Add(rec(a, rules, budget), rec(b, rules, budget)),
        Term::Mul(a, b) => Term::Mul(rec(a, rules, budget), rec(b, rules, budget)),
        Term::Neg(a) => Term::Neg(rec(a, rules, budget)),
        Term::Pow(a, k) => Term::Pow(rec(a, rules, budget), *k),
        Term::Re(a) => Term::Re(rec(a, rules, budget)),
        Term::Im(a) => Term::Im(rec(a, rules, budget)),
        Term::Conj(a) => Term::Conj(rec(a, rules, budget)),
        leaf => leaf.clone(),
    };
    let rule = rules.next().unwrap_or(0);
    let expand = |budget: &mut u32| {
        if *budget == 0 {
            false
        } else {
            *budget -= 1;
            true
        }
    };
    let half = || Term::Const(rat(1, 2));
    match (rule, t) {
        (1, Term::Add(a, b)) => Term::Add(b, a),
        (1, Term::Mul(a, b)) => Term::Mul(b, a),
        (2, t) if expand(budget) => Term::conj(Term::conj(t)),
        (3, t) if expand(budget) => {
            Term::add(Term::re(t.clone()), Term::mul(Term::I, Term::im(t)))
        }
        (4, Term::Pow(_, 0)) => Term::int(1),
        (4, Term::Pow(b, 1)) => *b,
        (4, Term::Pow(b, 2)) => Term::Mul(b.clone(), b),
        (5, Term::Mul(a, bc)) => match *bc {
            Term::Add(b, c) => Term::add(Term::Mul(a.clone(), b), Term::Mul(a, c)),
            other => Term::Mul(a, Box::new(other)),
        },
        (6, Term::Re(a)) => Term::mul(half(), Term::add((*a).clone(), Term::Conj(a))),
        (6, Term::Im(a)) => Term::mul(
            Term::neg(Term::mul(Term::I, half())),
            Term::add((*a).clone(), Term::neg(Term::Conj(a))),
        ),
        (7, Term::Neg(a)) if matches!(*a, Term::Neg(_)) => match *a {
            Term::Neg(b) => *b,
            _ => unreachable!(),
        },
        (7, t) if expand(budget) => Term::neg(Term::neg(t)),
        (8, Term::Conj(a)) => match *a {
            Term::Add(x, y) => Term::add(Term::Conj(x), Term::Conj(y)),
            Term::Mul(x, y) => Term::mul(Term::Conj(x), Term::Conj(y)),
            other => Term::conj(other),
        },
        (9, t) => Term::add(t, Term::zero()),
        (10, t) => Term::mul(Term::int(1), t),
        (11, t) if expand(budget) => Term::add(Term::mul(Term::I, Term::I), Term::add(t, Term::int(1))),
        (_, t) => t,
    }
}

fn eval_ok(t: &Term, s: &Assignment) -> GaussianRational {
    eval_term(t, s).expect("assignment covers the term")
}

// -------------------------------------------------------------------- suites

pub fn nf_uniqueness(cases: u32) -> SuiteResult {
    let ctx = context(VARS.iter().map(|v| Variable::new(v)));
    run(
        "nf-uniqueness",
        cases,
        (arb_term(VARS), vec(0u8..12, 64)),
        |(t, rules)| {
            let mut budget = 3;
            let u = rewrite(&t, &mut rules.into_iter(), &mut budget);
            check(
                lib(to_conjugate_nf(&t, &ctx))? == lib(to_conjugate_nf(&u, &ctx))?,
                || format!("conjugate NF differs: {t} vs {u}"),
            )?;
            check(
                lib(to_cartesian_nf(&t, &ctx))? == lib(to_cartesian_nf(&u, &ctx))?,
                || format!("Cartesian NF differs: {t} vs {u}"),
            )
        },
    )
}

pub fn nf_soundness(cases: u32) -> SuiteResult {
    let ctx = context(VARS.iter().map(|v| Variable::new(v)));
    run(
        "nf-soundness",
        cases,
        (arb_term(VARS), vec(arb_assignment(VARS), 20)),
        |(t, sigmas)| {
            let c = lib(to_conjugate_nf(&t, &ctx))?.to_term();
            let k = lib(to_cartesian_nf(&t, &ctx))?.to_term();
            for s in &sigmas {
                let v = eval_ok(&t, s);
                check(eval_ok(&c, s) == v, || format!("conjugate NF of {t} is {c}"))?;
                check(eval_ok(&k, s) == v, || format!("Cartesian NF of {t} is {k}"))?;
            }
            Ok(())
        },
    )
}

pub fn real_terms(cases: u32) -> SuiteResult {
    run(
        "real-terms",
        cases,
        (prop_oneof![arb_term(VARS), arb_real_term(VARS)], vec(arb_assignment(VARS), 10)),
        |(t, sigmas)| {
            let real = is_real_term(&t);
            check(real == term_equiv(&Term::im(t.clone()), &Term::zero()), || {
                format!("realness characterizations disagree on {t}")
            })?;
            if real {
                for s in &sigmas {
                    check(eval_ok(&t, s).is_real(), || format!("{t} is not real at a point"))?;
                }
            }
            Ok(())
        },
    )
}

pub fn extension_independence(cases: u32) -> SuiteResult {
    let small = context(VARS.iter().map(|v| Variable::new(v)));
    let big = context(["x", "y", "z", "a", "w9"].iter().map(|v| Variable::new(v)));
    run(
        "extension-independence",
        cases,
        (arb_term(VARS), arb_term(VARS)),
        |(t, u)| {
            let a = lib(to_conjugate_nf(&t, &small))? == lib(to_conjugate_nf(&u, &small))?;
            let b = lib(to_conjugate_nf(&t, &big))? == lib(to_conjugate_nf(&u, &big))?;
            check(a == b && a == term_equiv(&t, &u), || format!("verdict changes for {t}, {u}"))
        },
    )
}

pub fn conjugation_involution(cases: u32) -> SuiteResult {
    let ctx = context(VARS.iter().map(|v| Variable::new(v)));
    run(
        "conjugation-involution",
        cases,
        (arb_term(VARS), arb_term(VARS)),
        |(t, u)| {
            let p = lib(to_conjugate_nf(&t, &ctx))?.poly;
            let q = lib(to_conjugate_nf(&u, &ctx))?.poly;
            check(conj_poly(&conj_poly(&p)) == p, || format!("conj(conj(p)) != p for {t}"))?;
            check(
                conj_poly(&p.mul(&q)) == conj_poly(&p).mul(&conj_poly(&q)),
                || format!("conj is not multiplicative on {t}, {u}"),
            )
        },
    )
}

pub fn real_nf_preservation(cases: u32) -> SuiteResult {
    let ctx = context(VARS.iter().map(|v| Variable::new(v)));
    let lenient = RealNfOptions { lenient: true };
    run(
        "real-nf-preservation",
        cases,
        (arb_qf_formula(VARS), vec(arb_assignment(VARS), 20)),
        |(phi, sigmas)| {
            let r = lib(to_real_nf(&phi, &ctx, lenient))?;
            // Shape: real left-hand sides against 0.
            let shown = r.to_cformula();
            for a in shown.atoms() {
                check(is_real_term(&a.lhs) && a.rhs == Term::zero(), || format!("atom {a} not in real NF"))?;
            }
            let strict = to_real_nf(&phi, &ctx, RealNfOptions::default());
            // Sides replaced by their normal forms.
            let nf_sides = phi.map_atoms(&mut |a: &Atom| {
                let f = |t: &Term| to_conjugate_nf(t, &ctx).expect("vars in context").to_term();
                Formula::Atom(Atom::new(f(&a.lhs), a.rel, f(&a.rhs)))
            });
            for s in &sigmas {
                let v = lib(eval_qf(&phi, s))?;
                check(lib(r.eval_qf(s))? == v, || format!("real NF {r} differs from {phi}"))?;
                check(lib(eval_qf(&nf_sides, s))? == v, || format!("NF sides change {phi}"))?;
                if let Ok(ref st) = strict {
                    check(lib(st.eval_qf(s))? == v, || format!("strict real NF differs for {phi}"))?;
                }
            }
            Ok(())
        },
    )
}

pub fn ordering_falsity(cases: u32) -> SuiteResult {
    run(
        "ordering-falsity",
        cases,
        (arb_term(VARS), prop_oneof![Just(RelOp::Le), Just(RelOp::Lt)], arb_term(VARS), vec(arb_assignment(VARS), 10)),
        |(l, rel, r, sigmas)| {
            if is_real_term(&l) && is_real_term(&r) {
                return Ok(());
            }
            let a = Atom::new(l, rel, r);
            for s in &sigmas {
                check(!lib(a.eval(s))?, || format!("{a} holds somewhere"))?;
            }
            Ok(())
        },
    )
}

/// Number of quantifier alternations in the prefix.
pub fn alternations<A>(phi: &Formula<A>) -> usize {
    let (prefix, _) = phi.prefix();
    prefix.windows(2).filter(|w| w[0].0 != w[1].0).count()
}

pub fn purification(cases: u32) -> SuiteResult {
    let ctx = context(VARS.iter().map(|v| Variable::new(v)));
    let lenient = RealNfOptions { lenient: true };
    run(
        "purification",
        cases,
        (arb_qf_formula(VARS), vec(arb_assignment(VARS), 20)),
        |(phi, sigmas)| {
            let r = lib(to_real_nf(&phi, &ctx, lenient))?;
            let (psi, _) = lib(purify(&r))?;
            for s in &sigmas {
                let point = lib(r.cartesian_point(s))?;
                check(lib(r.eval_qf(s))? == lib(psi.eval_qf(&point))?, || {
                    format!("purification changes {phi}")
                })?;
            }
            Ok(())
        },
    )
}

pub fn quantifier_doubling(cases: u32) -> SuiteResult {
    const ALL: &[&str] = &["a", "b", "x", "y", "z"];
    let ctx = context(ALL.iter().map(|v| Variable::new(v)));
    let lenient = RealNfOptions { lenient: true };
    let prefix = vec((any::<bool>(), proptest::sample::select(vec!["a", "b"])), 0..=4);
    run(
        "quantifier-doubling",
        cases,
        (prefix, arb_qf_formula(&["a", "b", "x"])),
        |(prefix, matrix)| {
            let q: Vec<(Quantifier, Variable)> = prefix
                .iter()
                .map(|&(e, v)| (if e { Quantifier::Exists } else { Quantifier::Forall }, Variable::new(v)))
                .collect();
            let phi = Formula::with_prefix(&q, matrix);
            let r = lib(to_real_nf(&phi, &ctx, lenient))?;
            let (psi, _) = lib(purify(&r))?;
            check(psi.body.quantifier_count() == 2 * r.body.quantifier_count(), || {
                format!("quantifiers not doubled for {phi}")
            })?;
            check(alternations(&psi.body) == alternations(&r.body), || {
                format!("alternations change for {phi}")
            })
        },
    )
}

fn real_ctx(names: &[&str]) -> Ctx {
    names.iter().map(|v| Variable::new(v)).collect::<Vec<_>>().into()
}

/// Quantified real formulas over `u, w` (bound) and `x, y` (free).
fn arb_quantified_real() -> impl Strategy<Value = RealFormula> {
    let prefix = vec((any::<bool>(), 0usize..2), 0..=2).prop_map(|p| {
        let mut seen = BTreeSet::new();
        p.into_iter().filter(|(_, v)| seen.insert(*v)).collect::<Vec<_>>()
    });
    (prefix, arb_real_qf(4)).prop_map(|(prefix, matrix)| {
        let vars = real_ctx(&["u", "w", "x", "y"]);
        let q: Vec<(Quantifier, Variable)> = prefix
            .into_iter()
            .map(|(e, v)| (if e { Quantifier::Exists } else { Quantifier::Forall }, vars[v].clone()))
            .collect();
        RealFormula {
            body: Formula::with_prefix(&q, matrix),
            vars,
        }
    })
}

fn real_grid() -> Vec<GaussianRational> {
    (-6..=6).map(|k| GaussianRational::real(rat(k, 2))).collect()
}

/// Values of `out` at a point given by name.
fn eval_named(out: &RealFormula, names: &Ctx, point: &[Rational]) -> pcqe::Result<bool> {
    let p: Vec<Rational> = out
        .vars
        .iter()
        .map(|v| names.iter().position(|w| w == v).map_or_else(|| int(0), |i| point[i].clone()))
        .collect();
    out.eval_qf(&p)
}

pub fn vs_soundness(cases: u32) -> SuiteResult {
    let grid = real_grid();
    let skipped = AtomicUsize::new(0);
    let conclusive = AtomicUsize::new(0);
    let r = run(
        "vs-soundness",
        cases,
        (arb_quantified_real(), vec(arb_point(2), 20)),
        |(psi, points)| {
            let out = match vs_eliminate(&psi) {
                Ok(o) => o,
                Err(pcqe::Error::DegreeTooHigh { .. }) => {
                    skipped.fetch_add(1, Relaxed);
                    return Ok(());
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            check(out.body.is_quantifier_free(), || format!("{out} has quantifiers"))?;
            // Real variables become `Re(v)` so ordering atoms stay real.
            let gens: Vec<Term> = psi.vars.iter().map(|v| Term::re(Term::Var(v.clone()))).collect();
            let phi = psi.body.map_atoms(&mut |a| Formula::Atom(a.to_atom(&gens)));
            for xy in &points {
                let full = [int(0), int(0), xy[0].clone(), xy[1].clone()];
                let v = lib(eval_named(&out, &psi.vars, &full))?;
                // Unquantified `u`, `w` are free and take the value 0.
                let sigma: Assignment = psi
                    .vars
                    .iter()
                    .zip(&full)
                    .map(|(v, q)| (v.clone(), GaussianRational::real(q.clone())))
                    .collect();
                let t = lib(sample_quantified(&phi, &grid, &sigma))?;
                if t != Truth::Unknown {
                    conclusive.fetch_add(1, Relaxed);
                }
                check(t == Truth::Unknown || (t == Truth::True) == v, || {
                    format!("{psi} gave {out}, sampled {t:?} at x = {}, y = {}", xy[0], xy[1])
                })?;
            }
            Ok(())
        },
    );
    println!(
        "  vs-soundness: {} conclusive sample points, {} cases beyond degree 2",
        conclusive.into_inner(),
        skipped.into_inner()
    );
    r
}

pub fn vs_duality(cases: u32) -> SuiteResult {
    let vars = real_ctx(&["u", "x", "y"]);
    run(
        "vs-duality",
        cases,
        (arb_real_qf(3), vec(arb_point(3), 20)),
        |(matrix, points)| {
            let u = vars[0].clone();
            let all = RealFormula {
                vars: vars.clone(),
                body: Formula::Forall(u.clone(), Box::new(matrix.clone())),
            };
            let ex = RealFormula {
                vars: vars.clone(),
                body: Formula::Exists(u, Box::new(Formula::not(matrix.clone()))),
            };
            let qf = RealFormula {
                vars: vars.clone(),
                body: matrix,
            };
            let (a, b, c) = match (vs_eliminate(&all), vs_eliminate(&ex), vs_eliminate(&qf)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(pcqe::Error::DegreeTooHigh { .. }), ..) | (_, Err(pcqe::Error::DegreeTooHigh { .. }), _) => {
                    return Ok(())
                }
                (a, b, c) => {
                    lib(a)?;
                    lib(b)?;
                    lib(c)?;
                    unreachable!()
                }
            };
            for p in &points {
                check(lib(eval_named(&a, &vars, p))? != lib(eval_named(&b, &vars, p))?, || {
                    format!("duality fails: {a} vs not {b}")
                })?;
                check(lib(eval_named(&c, &vars, p))? == lib(qf.eval_qf(p))?, || {
                    format!("eliminating nothing changed {qf} into {c}")
                })?;
            }
            Ok(())
        },
    )
}

pub fn simplify_preservation(cases: u32) -> SuiteResult {
    let assumption = (0usize..3, arb_rel(), -2i64..=2).prop_map(|(v, r, c)| {
        let p = Poly::var(3, v).sub(&Poly::constant(3, int(c)));
        RealAtom::new(p, r)
    });
    let extra = (arb_qpoly(3), arb_rel()).prop_map(|(p, r)| RealAtom::new(p, r));
    let assumptions = (vec(assumption, 0..=2), proptest::option::of(extra)).prop_map(|(mut a, e)| {
        a.extend(e);
        a
    });
    run(
        "simplify-preservation",
        cases,
        (arb_real_qf(3), assumptions, vec(arb_point(3), 40)),
        |(phi, assumptions, points)| {
            let s = simplify_real(&phi, 3, &assumptions);
            for p in points.iter().filter(|p| assumptions.iter().all(|a| a.eval(p))) {
                check(lib(eval_real_qf(&phi, p))? == lib(eval_real_qf(&s, p))?, || {
                    format!("simplification changed {phi:?} into {s:?} under {assumptions:?}")
                })?;
            }
            Ok(())
        },
    )
}

const XY: &[&str] = &["x", "y"];

fn arb_nonconstant(n: usize) -> impl Strategy<Value = QPoly> {
    arb_qpoly(n).prop_filter("non-constant", |p| !p.is_constant())
}

pub fn reinterpretation(cases: u32) -> SuiteResult {
    let ctx = context(XY.iter().map(|v| Variable::new(v)));
    run(
        "reinterpretation",
        cases,
        (vec(arb_nonconstant(4), 1..=6), vec(arb_assignment(XY), 20)),
        |(polys, sigmas)| {
            let atoms: Vec<RealAtom> = polys.into_iter().map(|p| RealAtom::new(p, Rel::Eq)).collect();
            let body = Formula::and(atoms.iter().cloned().map(Formula::Atom).collect());
            let r = RealNf { ctx: ctx.clone(), body: body.clone() };
            for style in [NfStyle::Conjugate, NfStyle::Cartesian] {
                let out = reinterpret_formula(&body, &ctx, style);
                for s in &sigmas {
                    check(lib(r.eval_qf(s))? == lib(eval_qf(&out, s))?, || {
                        format!("{r} became {out} ({})", style.name())
                    })?;
                }
            }
            // Non-inflation, on the cost graph and on the Cartesian output.
            let shown: Vec<Atom> = atoms.iter().map(|a| real_atom(a, &ctx, NfStyle::Cartesian)).collect();
            let before: usize = shown.iter().map(word_length).sum();
            let g = lib(build_cost_graph(&shown, &ctx, NfStyle::Cartesian))?;
            let cover = mcpec(&g);
            check(cover.cost <= g.cover_cost(&[]) && g.cover_cost(&[]) == before, || {
                format!("cover cost {} exceeds {before}", cover.cost)
            })?;
            let out = reinterpret_formula(&body, &ctx, NfStyle::Cartesian);
            let after: usize = out.atoms().into_iter().map(word_length).sum();
            check(after <= before, || format!("{out} is longer than the input ({after} > {before})"))
        },
    )
}

fn count_rel(f: &CFormula, pred: impl Fn(RelOp) -> bool) -> usize {
    f.atoms().into_iter().filter(|a| pred(a.rel)).count()
}

pub fn no_merging_of_orderings(cases: u32) -> SuiteResult {
    let ctx = context(XY.iter().map(|v| Variable::new(v)));
    let atom = (arb_nonconstant(4), proptest::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le]))
        .prop_map(|(p, r)| RealAtom::new(normalize(&p).0, r));
    run(
        "no-merging-of-orderings",
        cases,
        vec(atom, 1..=6),
        |atoms| {
            let distinct: BTreeSet<String> = atoms.iter().map(|a| format!("{:?}", a.poly)).collect();
            if distinct.len() != atoms.len() {
                return Ok(());
            }
            let body = Formula::and(atoms.iter().cloned().map(Formula::Atom).collect());
            let out = reinterpret_formula(&body, &ctx, NfStyle::Cartesian);
            let ne = atoms.iter().filter(|a| a.rel == Rel::Ne).count();
            let ord = atoms.iter().filter(|a| matches!(a.rel, Rel::Lt | Rel::Le)).count();
            check(count_rel(&out, |r| r == RelOp::Ne) == ne, || format!("disequations merged in {out}"))?;
            check(count_rel(&out, RelOp::is_ordering) == ord, || format!("orderings merged in {out}"))
        },
    )
}

// ------------------------------------------------------- graphs and matching

fn dummy_node(cost: usize) -> EqNode {
    EqNode {
        poly: Poly::zero(0),
        atom: Atom::new(Term::zero(), RelOp::Eq, Term::zero()),
        cost,
    }
}

pub fn graph(vertex_costs: &[usize], edges: &[(usize, usize, usize)]) -> CostGraph {
    CostGraph {
        vertices: vertex_costs.iter().map(|&c| dummy_node(c)).collect(),
        edges: edges
            .iter()
            .map(|&(u, v, cost)| CostEdge {
                u,
                v,
                cost,
                merged: Atom::new(Term::zero(), RelOp::Eq, Term::zero()),
            })
            .collect(),
    }
}

/// Minimum cover cost by dynamic programming over covered vertex sets.
pub fn cover_oracle(g: &CostGraph) -> usize {
    let n = g.vertices.len();
    let full = 1usize << n;
    let mut best = vec![usize::MAX; full];
    best[0] = 0;
    for e in &g.edges {
        let bit = (1 << e.u) | (1 << e.v);
        for mask in (0..full).rev() {
            if best[mask] != usize::MAX {
                let m = mask | bit;
                best[m] = best[m].min(best[mask] + e.cost);
            }
        }
    }
    (0..full)
        .filter(|&m| best[m] != usize::MAX)
        .map(|m| {
            best[m]
                + (0..n)
                    .filter(|v| m & (1 << v) == 0)
                    .map(|v| g.vertices[v].cost)
                    .sum::<usize>()
        })
        .min()
        .unwrap()
}

/// Minimum cover cost over all edge subsets.
pub fn cover_brute_force(g: &CostGraph) -> usize {
    let m = g.edges.len();
    (0..1usize << m)
        .map(|s| {
            let sel: Vec<usize> = (0..m).filter(|k| s & (1 << k) != 0).collect();
            g.cover_cost(&sel)
        })
        .min()
        .unwrap()
}

fn arb_graph(max_n: usize, dominated: bool) -> impl Strategy<Value = CostGraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (vec(1usize..=20, n), vec((any::<bool>(), 0usize..=25), m), Just(pairs))
        })
        .prop_map(move |(costs, choice, pairs)| {
            let edges: Vec<(usize, usize, usize)> = pairs
                .iter()
                .zip(choice)
                .filter(|(_, (keep, _))| *keep)
                .map(|(&(u, v), (_, c))| {
                    let cost = if dominated { costs[u].max(costs[v]) + c } else { c + 1 };
                    (u, v, cost)
                })
                .collect();
            graph(&costs, &edges)
        })
}

pub fn mcpec_oracle(cases: u32) -> SuiteResult {
    run("mcpec-oracle", cases, arb_graph(8, false), |g| {
        let cover = mcpec(&g);
        check(cover.cost == g.cover_cost(&cover.selected), || "reported cost is wrong".into())?;
        let best = cover_oracle(&g);
        check(cover.cost == best, || format!("mcpec cost {} but optimum {best}", cover.cost))?;
        if g.edges.len() <= 12 {
            check(cover_brute_force(&g) == best, || "oracles disagree".into())?;
        }
        Ok(())
    })
}

pub fn matching_reduction(cases: u32) -> SuiteResult {
    run("matching-reduction", cases, arb_graph(8, true), |g| {
        let cover = mcpec(&g);
        let mut seen = BTreeSet::new();
        for &k in &cover.selected {
            let e = &g.edges[k];
            check(seen.insert(e.u) && seen.insert(e.v), || "selection is not a matching".into())?;
        }
        let vertex_sum: usize = g.vertices.iter().map(|v| v.cost).sum();
        let gain: usize = cover
            .selected
            .iter()
            .map(|&k| {
                let e = &g.edges[k];
                g.vertices[e.u].cost + g.vertices[e.v].cost - e.cost
            })
            .sum();
        check(cover.cost == vertex_sum - gain, || "c(M) != sum c_V - c'(M)".into())?;
        check(cover.cost == cover_oracle(&g), || "not optimal".into())
    })
}

fn is_matching(edges: &[WEdge], m: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    m.iter().all(|&k| seen.insert(edges[k].0) && seen.insert(edges[k].1))
}

fn matching_brute_force(edges: &[WEdge]) -> i64 {
    (0..1usize << edges.len())
        .map(|s| (0..edges.len()).filter(|k| s & (1 << k) != 0).collect::<Vec<_>>())
        .filter(|m| is_matching(edges, m))
        .map(|m| matching_weight(edges, &m))
        .max()
        .unwrap_or(0)
}

fn arb_wedges(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, Vec<WEdge>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let e = (0..n, 0..n, -5i64..=30).prop_filter("no loops", |(u, v, _)| u != v);
        (Just(n), vec(e, 0..=max_m))
    })
}

pub fn matching_oracle(cases: u32) -> SuiteResult {
    run("matching-oracle", cases, arb_wedges(10, 12), |(n, edges)| {
        let best = matching_brute_force(&edges);
        for threshold in [usize::MAX, 0] {
            let m = max_weight_matching_with(n, &edges, threshold);
            check(is_matching(&edges, &m), || format!("not a matching: {m:?}"))?;
            check(matching_weight(&edges, &m) == best, || {
                format!("weight {} but optimum {best} (threshold {threshold})", matching_weight(&edges, &m))
            })?;
        }
        Ok(())
    })
}

/// Blossom and branch and bound agree on graphs too large for brute force.
pub fn matching_agreement(cases: u32) -> SuiteResult {
    run("matching-agreement", cases, arb_wedges(16, 40), |(n, edges)| {
        let a = max_weight_matching_with(n, &edges, usize::MAX);
        let b = max_weight_matching_with(n, &edges, 0);
        let c = max_weight_matching(n, &edges);
        check(is_matching(&edges, &b), || "blossom result is not a matching".into())?;
        check(
            matching_weight(&edges, &a) == matching_weight(&edges, &b)
                && matching_weight(&edges, &c) == matching_weight(&edges, &a),
            || "matching weights differ".into(),
        )
    })
}

