use pcqe::corpus::{self, Example};
use pcqe::formula::{eval_qf, sample_quantified, Atom, CFormula, Formula, RelOp, Truth};
use pcqe::number::{rat, GaussianRational};
use pcqe::parse::{parse_atom, parse_formula};
use pcqe::pipeline::{qe, QeJob};
use pcqe::reinterpret::NfStyle;
use pcqe::sample::{equivalent, Sampler};
use pcqe::term::{Term, Variable};

const SEED: u64 = 0x0e2e;

/// Entries the builtin method finishes quickly in a debug build.
fn fast(e: &Example) -> bool {
    e.required && e.key != "orthogonality-10"
}

fn assumptions(e: &Example) -> Vec<Atom> {
    e.assumptions.iter().map(|a| parse_atom(a).unwrap()).collect()
}

fn grid() -> Vec<GaussianRational> {
    let mut g: Vec<GaussianRational> = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]
        .iter()
        .map(|&(a, b)| GaussianRational::from_ints(a, b))
        .collect();
    g.push(GaussianRational::real(rat(1, 2)));
    g
}

fn substitute(t: &Term, real: &[Variable]) -> Term {
    let b = |x: &Term| Box::new(substitute(x, real));
    match t {
        Term::Var(v) if real.contains(v) => Term::re(t.clone()),
        Term::Add(x, y) => Term::Add(b(x), b(y)),
        Term::Mul(x, y) => Term::Mul(b(x), b(y)),
        Term::Neg(x) => Term::Neg(b(x)),
        Term::Pow(x, k) => Term::Pow(b(x), *k),
        Term::Re(x) => Term::Re(b(x)),
        Term::Im(x) => Term::Im(b(x)),
        Term::Conj(x) => Term::Conj(b(x)),
        other => other.clone(),
    }
}

/// The input with `v` replaced by `Re(v)` for every assumption `Im(v) == 0`.
/// Realness of ordering atoms is then syntactic, as it is for the pipeline
/// once the assumptions are applied.
fn with_real_assumptions(phi: &CFormula, a: &[Atom]) -> CFormula {
    let real: Vec<Variable> = a
        .iter()
        .filter_map(|x| match (&x.lhs, x.rel, &x.rhs) {
            (Term::Im(v), RelOp::Eq, z) if *z == Term::zero() => match &**v {
                Term::Var(v) => Some(v.clone()),
                _ => None,
            },
            _ => None,
        })
        .collect();
    phi.map_atoms(&mut |x: &Atom| {
        Formula::Atom(Atom::new(substitute(&x.lhs, &real), x.rel, substitute(&x.rhs, &real)))
    })
}

#[test]
fn output_agrees_with_sampled_truth() {
    println!("seed {SEED:#x}");
    let grid = grid();
    for e in corpus::corpus().into_iter().filter(fast) {
        let input = parse_formula(&e.formula).unwrap();
        let free = input.free_vars();
        if free.is_empty() {
            continue;
        }
        let a = assumptions(&e);
        let out = qe(&mut QeJob::new(input.clone()).assume(a.clone()).output_nf(e.nf)).unwrap();
        let mut sampler = Sampler::new(&free, &a, SEED);
        let (mut conclusive, mut points) = (0, 0);
        let budget = if input.quantifier_count() > 3 { 5 } else { 25 };
        for _ in 0..budget {
            let Some(sigma) = sampler.next() else { break };
            points += 1;
            let truth = sample_quantified(&with_real_assumptions(&input, &a), &grid, &sigma).unwrap();
            if truth == Truth::Unknown {
                continue;
            }
            conclusive += 1;
            assert_eq!(
                eval_qf(&out, &sigma).unwrap(),
                truth == Truth::True,
                "{}: {out} at {sigma:?}",
                e.key
            );
        }
        println!("{}: {conclusive}/{points} conclusive points", e.key);
    }
}

#[test]
fn normal_forms_agree_on_corpus() {
    for e in corpus::corpus().into_iter().filter(fast) {
        let input = parse_formula(&e.formula).unwrap();
        let a = assumptions(&e);
        let run = |style| qe(&mut QeJob::new(input.clone()).assume(a.clone()).output_nf(style)).unwrap();
        let c = run(NfStyle::Conjugate);
        let k = run(NfStyle::Cartesian);
        let eq = equivalent(&c, &k, &a, 300, SEED).unwrap();
        assert!(eq.holds(), "{}: {c} vs {k}", e.key);
    }
}

#[test]
fn qe_of_output_is_a_fixed_point() {
    for e in corpus::corpus().into_iter().filter(fast) {
        let input = parse_formula(&e.formula).unwrap();
        let a = assumptions(&e);
        let once = qe(&mut QeJob::new(input).assume(a.clone()).output_nf(e.nf)).unwrap();
        let mut job = QeJob::new(once.clone()).assume(a.clone()).output_nf(e.nf);
        let twice = qe(&mut job).unwrap();
        assert_eq!(job.stats.backend_calls, 0);
        assert!(
            equivalent(&once, &twice, &a, 300, SEED).unwrap().holds(),
            "{}: {once} vs {twice}",
            e.key
        );
    }
}
