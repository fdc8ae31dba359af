//! Virtual substitution for real quantifier elimination, restricted to
//! quantified variables of degree at most 2.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::nf::QPoly;
use crate::number::Rational;
use crate::poly::Poly;
use crate::real::{nnf, RFormula, Rel, RealAtom, RealFormula};
use crate::simplify::{perfect_square, simplify_in, Context};

/// Largest disjunctive expansion of the dependent part of a conjunction.
const DNF_LIMIT: usize = 64;

/// `(a + b*sqrt(r)) / d`; `b` is zero for rational points.
#[derive(Clone, PartialEq, Debug)]
struct Root {
    a: QPoly,
    b: QPoly,
    r: QPoly,
    d: QPoly,
}

#[derive(Clone, PartialEq, Debug)]
enum TestPoint {
    MinusInf,
    At {
        root: Root,
        eps: bool,
        guard: Vec<RealAtom>,
    },
}

fn atom(p: QPoly, rel: Rel) -> RFormula {
    Formula::Atom(RealAtom::new(p, rel))
}

fn all_zero(cs: &[QPoly]) -> RFormula {
    Formula::and(cs.iter().map(|c| atom(c.clone(), Rel::Eq)).collect())
}

fn any_nonzero(cs: &[QPoly]) -> RFormula {
    Formula::or(cs.iter().map(|c| atom(c.clone(), Rel::Ne)).collect())
}

fn neg_all(cs: &[QPoly]) -> Vec<QPoly> {
    cs.iter().map(QPoly::neg).collect()
}

fn negate(f: &RFormula) -> RFormula {
    nnf(&Formula::not(f.clone()))
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let isqrt = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(isqrt(q.numer())?, isqrt(q.denom())?))
}

/// `P + Q*sqrt(r) rel 0`, assuming `r >= 0`.
fn sqrt_sign(p: &QPoly, q: &QPoly, r: &QPoly, rel: Rel) -> RFormula {
    if q.is_zero() || r.is_zero() {
        return atom(p.clone(), rel);
    }
    let (p, q) = match rel {
        Rel::Gt | Rel::Ge => (p.neg(), q.neg()),
        _ => (p.clone(), q.clone()),
    };
    let disc = p.mul(&p).sub(&q.mul(&q).mul(r));
    match rel {
        Rel::Eq => Formula::and(vec![atom(p.mul(&q), Rel::Le), atom(disc, Rel::Eq)]),
        Rel::Ne => Formula::or(vec![atom(p.mul(&q), Rel::Gt), atom(disc, Rel::Ne)]),
        Rel::Lt | Rel::Gt => Formula::or(vec![
            Formula::and(vec![atom(p.clone(), Rel::Lt), atom(disc.clone(), Rel::Gt)]),
            Formula::and(vec![
                atom(q, Rel::Le),
                Formula::or(vec![atom(p, Rel::Lt), atom(disc, Rel::Lt)]),
            ]),
        ]),
        Rel::Le | Rel::Ge => Formula::or(vec![
            Formula::and(vec![atom(p, Rel::Le), atom(disc.clone(), Rel::Ge)]),
            Formula::and(vec![atom(q, Rel::Le), atom(disc, Rel::Le)]),
        ]),
    }
}

/// `sum cs[k] x^k rel 0` at `x = root`.
fn at_root(cs: &[QPoly], rel: Rel, root: &Root) -> RFormula {
    let n = cs[0].nvars();
    let zero = Poly::zero(n);
    let c = |k: usize| cs.get(k).unwrap_or(&zero);
    let Root { a, b, r, d } = root;
    // Multiplying by d^2 keeps the sign.
    let p = c(0)
        .mul(&d.mul(d))
        .add(&c(1).mul(a).mul(d))
        .add(&c(2).mul(&a.mul(a).add(&b.mul(b).mul(r))));
    let two = Poly::constant(n, Rational::from_integer(2.into()));
    let q = c(1).mul(b).mul(d).add(&two.mul(c(2)).mul(a).mul(b));
    sqrt_sign(&p, &q, r, rel)
}

fn derivative(cs: &[QPoly]) -> Vec<QPoly> {
    cs.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Rational::from_integer(k.into())))
        .collect()
}

/// `g < 0` just right of `root`.
fn lt_eps(cs: &[QPoly], root: &Root) -> RFormula {
    if cs.len() == 1 {
        return atom(cs[0].clone(), Rel::Lt);
    }
    Formula::or(vec![
        at_root(cs, Rel::Lt, root),
        Formula::and(vec![at_root(cs, Rel::Eq, root), lt_eps(&derivative(cs), root)]),
    ])
}

fn at_eps(cs: &[QPoly], rel: Rel, root: &Root) -> RFormula {
    match rel {
        Rel::Eq => all_zero(cs),
        Rel::Ne => any_nonzero(cs),
        Rel::Lt => lt_eps(cs, root),
        Rel::Gt => lt_eps(&neg_all(cs), root),
        Rel::Le => Formula::or(vec![lt_eps(cs, root), all_zero(cs)]),
        Rel::Ge => Formula::or(vec![lt_eps(&neg_all(cs), root), all_zero(cs)]),
    }
}

/// `g < 0` for all sufficiently small `x`.
fn lt_minf(cs: &[QPoly]) -> RFormula {
    Formula::or(
        (0..cs.len())
            .map(|j| {
                let lead = if j % 2 == 0 { cs[j].clone() } else { cs[j].neg() };
                let mut parts = vec![atom(lead, Rel::Lt)];
                parts.extend(cs[j + 1..].iter().map(|c| atom(c.clone(), Rel::Eq)));
                Formula::and(parts)
            })
            .collect(),
    )
}

fn at_minf(cs: &[QPoly], rel: Rel) -> RFormula {
    match rel {
        Rel::Eq => all_zero(cs),
        Rel::Ne => any_nonzero(cs),
        Rel::Lt => lt_minf(cs),
        Rel::Gt => lt_minf(&neg_all(cs)),
        Rel::Le => Formula::or(vec![lt_minf(cs), all_zero(cs)]),
        Rel::Ge => Formula::or(vec![lt_minf(&neg_all(cs)), all_zero(cs)]),
    }
}

fn substitute(phi: &RFormula, x: usize, tp: &TestPoint) -> RFormula {
    phi.map_atoms(&mut |a: &RealAtom| {
        if !a.poly.has_var(x) {
            return Formula::Atom(a.clone());
        }
        let cs = a.poly.coeffs_in(x);
        match tp {
            TestPoint::MinusInf => at_minf(&cs, a.rel),
            TestPoint::At { root, eps: false, .. } => at_root(&cs, a.rel, root),
            TestPoint::At { root, eps: true, .. } => at_eps(&cs, a.rel, root),
        }
    })
}

/// Roots of `cs` as test points, each with its guard.
fn roots(cs: &[QPoly], eps: bool) -> Vec<TestPoint> {
    let n = cs[0].nvars();
    let mut out = Vec::new();
    let mut push = |a: QPoly, b: QPoly, r: QPoly, d: QPoly, guard: Vec<RealAtom>| {
        // Constant denominators are divided out.
        let (a, b, d) = match d.as_constant() {
            Some(k) if !k.is_zero() => {
                let inv = k.recip();
                (a.scale(&inv), b.scale(&inv), Poly::one(n))
            }
            _ => (a, b, d),
        };
        let tp = TestPoint::At {
            root: Root { a, b, r, d },
            eps,
            guard,
        };
        if !out.contains(&tp) {
            out.push(tp);
        }
    };
    let nonzero = |p: &QPoly| -> Vec<RealAtom> {
        if p.as_constant().is_some_and(|c| !c.is_zero()) {
            vec![]
        } else {
            vec![RealAtom::new(p.clone(), Rel::Ne)]
        }
    };
    let zero = Poly::zero(n);
    match cs.len() {
        2 => push(cs[0].neg(), zero.clone(), zero.clone(), cs[1].clone(), nonzero(&cs[1])),
        3 => {
            let (c0, c1, c2) = (&cs[0], &cs[1], &cs[2]);
            let c2_const = c2.as_constant().is_some_and(|c| !c.is_zero());
            if !c2_const && !c1.is_zero() {
                let mut g = vec![RealAtom::new(c2.clone(), Rel::Eq)];
                g.extend(nonzero(c1));
                push(c0.neg(), zero.clone(), zero.clone(), c1.clone(), g);
            }
            let four = Rational::from_integer(4.into());
            let disc = c1.mul(c1).sub(&c0.mul(c2).scale(&four));
            let d = c2.scale(&Rational::from_integer(2.into()));
            let g2 = nonzero(c2);
            match disc.as_constant() {
                Some(k) if k.is_negative() => {}
                Some(k) if k.is_zero() => push(c1.neg(), zero.clone(), zero.clone(), d, g2),
                Some(k) => match rational_sqrt(&k) {
                    Some(s) => {
                        let s = Poly::constant(n, s);
                        push(c1.neg().add(&s), zero.clone(), zero.clone(), d.clone(), g2.clone());
                        push(c1.neg().sub(&s), zero.clone(), zero.clone(), d, g2);
                    }
                    None => {
                        let one = Poly::one(n);
                        push(c1.neg(), one.clone(), disc.clone(), d.clone(), g2.clone());
                        push(c1.neg(), one.neg(), disc, d, g2);
                    }
                },
                None => {
                    let square = perfect_square(&disc)
                        .and_then(|(c, q)| rational_sqrt(&c).map(|s| q.scale(&s)));
                    match square {
                        Some(s) => {
                            push(c1.neg().add(&s), zero.clone(), zero.clone(), d.clone(), g2.clone());
                            push(c1.neg().sub(&s), zero.clone(), zero.clone(), d, g2);
                        }
                        None => {
                            let mut g = g2;
                            g.push(RealAtom::new(disc.clone(), Rel::Ge));
                            let one = Poly::one(n);
                            push(c1.neg(), one.clone(), disc.clone(), d.clone(), g.clone());
                            push(c1.neg(), one.neg(), disc, d, g);
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// `exists x. g rel 0` for a single atom of degree at most 2.
fn exists_single(cs: &[QPoly], rel: Rel) -> RFormula {
    let cs: Vec<QPoly> = match rel {
        Rel::Lt | Rel::Le => neg_all(cs),
        _ => cs.to_vec(),
    };
    let rel = match rel {
        Rel::Lt => Rel::Gt,
        Rel::Le => Rel::Ge,
        r => r,
    };
    if rel == Rel::Ne {
        return any_nonzero(&cs);
    }
    let k = cs.len() - 1;
    let lead_zero = |j: usize| -> Vec<RFormula> {
        cs[j..].iter().map(|c| atom(c.clone(), Rel::Eq)).collect()
    };
    let mut alts = Vec::new();
    if k == 2 {
        let four = Rational::from_integer(4.into());
        let disc = cs[1].mul(&cs[1]).sub(&cs[0].mul(&cs[2]).scale(&four));
        match rel {
            Rel::Eq => alts.push(Formula::and(vec![
                atom(cs[2].clone(), Rel::Ne),
                atom(disc, Rel::Ge),
            ])),
            _ => {
                alts.push(atom(cs[2].clone(), Rel::Gt));
                alts.push(Formula::and(vec![atom(cs[2].clone(), Rel::Lt), atom(disc, rel)]));
            }
        }
    }
    if k >= 1 {
        let mut a = lead_zero(2.min(k + 1));
        a.push(atom(cs[1].clone(), Rel::Ne));
        alts.push(Formula::and(a));
    }
    let mut a = lead_zero(1);
    a.push(atom(cs[0].clone(), rel));
    alts.push(Formula::and(a));
    Formula::or(alts)
}

struct Vs<'a> {
    ctx: &'a Context,
    names: &'a [crate::term::Variable],
}

fn conjuncts(phi: &RFormula) -> Vec<RFormula> {
    match phi {
        Formula::And(v) => v.clone(),
        Formula::Top => vec![],
        f => vec![f.clone()],
    }
}

fn mentions(phi: &RFormula, vars: &[usize]) -> bool {
    let mut found = false;
    phi.visit_atoms(&mut |a: &RealAtom| {
        found = found || vars.iter().any(|&x| a.poly.has_var(x));
    });
    found
}

fn x_atoms(phi: &RFormula, x: usize) -> Vec<RealAtom> {
    let mut out: Vec<RealAtom> = Vec::new();
    phi.visit_atoms(&mut |a: &RealAtom| {
        if a.poly.has_var(x) && !out.contains(a) {
            out.push(a.clone());
        }
    });
    out
}

/// Disjunctive expansion, or `None` if larger than `limit`.
fn dnf(parts: &[RFormula], limit: usize) -> Option<Vec<Vec<RFormula>>> {
    let mut acc: Vec<Vec<RFormula>> = vec![vec![]];
    for p in parts {
        match p {
            Formula::Or(alts) => {
                if acc.len() * alts.len() > limit {
                    return None;
                }
                let mut next = Vec::new();
                for a in &acc {
                    for alt in alts {
                        let mut c = a.clone();
                        c.extend(conjuncts(alt));
                        next.push(c);
                    }
                }
                acc = next;
            }
            f => acc.iter_mut().for_each(|c| c.push(f.clone())),
        }
    }
    Some(acc)
}

impl Vs<'_> {
    fn simplify(&self, phi: &RFormula) -> RFormula {
        simplify_in(phi, self.ctx)
    }

    fn degree_error(&self, x: usize, a: &RealAtom) -> Error {
        let gens = crate::real::RealFormula {
            vars: self.names.to_vec().into(),
            body: Formula::Atom(a.clone()),
        };
        Error::DegreeTooHigh {
            variable: self.names[x].to_string(),
            atom: gens.to_string(),
        }
    }

    fn exists_block(&self, vars: &[usize], phi: &RFormula) -> Result<RFormula> {
        let phi = self.simplify(phi);
        if vars.is_empty() || !mentions(&phi, vars) {
            return Ok(phi);
        }
        if let Formula::Or(alts) = &phi {
            let mut out = Vec::new();
            for a in alts {
                let r = self.exists_block(vars, a)?;
                if r == Formula::Top {
                    return Ok(Formula::Top);
                }
                out.push(r);
            }
            return Ok(self.simplify(&Formula::or(out)));
        }
        let (dep, indep): (Vec<RFormula>, Vec<RFormula>) =
            conjuncts(&phi).into_iter().partition(|c| mentions(c, vars));
        if dep.iter().any(|c| matches!(c, Formula::Or(_))) {
            if let Some(ds) = dnf(&dep, DNF_LIMIT) {
                if ds.len() > 1 {
                    let expanded = Formula::or(ds.into_iter().map(Formula::and).collect());
                    let r = self.exists_block(vars, &expanded)?;
                    let mut all = indep;
                    all.push(r);
                    return Ok(self.simplify(&Formula::and(all)));
                }
            }
        }
        let body = Formula::and(dep);
        let (x, body) = self.choose(vars, &body)?;
        let eliminated = self.eliminate(x, &body)?;
        let rest: Vec<usize> = vars.iter().copied().filter(|&v| v != x).collect();
        let r = self.exists_block(&rest, &eliminated)?;
        let mut all = indep;
        all.push(r);
        Ok(self.simplify(&Formula::and(all)))
    }

    /// Picks the variable to eliminate next; variables occurring only in even
    /// powers beyond degree 2 are replaced by their square.
    fn choose(&self, vars: &[usize], phi: &RFormula) -> Result<(usize, RFormula)> {
        let mut best: Option<(usize, usize, RFormula)> = None;
        let mut failure = None;
        for &x in vars {
            let atoms = x_atoms(phi, x);
            if atoms.is_empty() {
                continue;
            }
            let mut body = phi.clone();
            if let Some(bad) = atoms.iter().find(|a| a.poly.degree_in(x) > 2) {
                match halve(phi, x) {
                    Some(h) if x_atoms(&h, x).iter().all(|a| a.poly.degree_in(x) <= 2) => body = h,
                    _ => {
                        failure.get_or_insert_with(|| self.degree_error(x, bad));
                        continue;
                    }
                }
            }
            let atoms = x_atoms(&body, x);
            let score = if atoms.len() == 1 {
                0
            } else if gauss_equation(&body, x).is_some() {
                1 + atoms.iter().map(|a| a.poly.degree_in(x) as usize).sum::<usize>()
            } else {
                10 + 3 * atoms.len() + atoms.iter().map(|a| a.poly.degree_in(x) as usize).sum::<usize>()
            };
            if best.as_ref().is_none_or(|(s, _, _)| score < *s) {
                best = Some((score, x, body));
            }
        }
        match best {
            Some((_, x, body)) => Ok((x, body)),
            None => Err(failure.expect("some variable occurs")),
        }
    }

    /// `exists x. phi` as a quantifier-free formula.
    fn eliminate(&self, x: usize, phi: &RFormula) -> Result<RFormula> {
        let atoms = x_atoms(phi, x);
        if let Some(bad) = atoms.iter().find(|a| a.poly.degree_in(x) > 2) {
            return Err(self.degree_error(x, bad));
        }
        let parts = conjuncts(phi);
        let (dep, indep): (Vec<RFormula>, Vec<RFormula>) =
            parts.into_iter().partition(|c| mentions(c, &[x]));
        if let [Formula::Atom(a)] = dep.as_slice() {
            let mut all = indep;
            all.push(exists_single(&a.poly.coeffs_in(x), a.rel));
            return Ok(self.simplify(&Formula::and(all)));
        }
        let body = Formula::and(dep.clone());
        let mut out = Vec::new();
        if let Some(k) = gauss_equation(&body, x) {
            let Formula::Atom(f) = &dep[k] else { unreachable!() };
            let cs = f.poly.coeffs_in(x);
            for tp in roots(&cs, false) {
                out.push(self.instance(&body, x, &tp));
                if out.last() == Some(&Formula::Top) {
                    return Ok(Formula::and(indep.into_iter().chain([Formula::Top]).collect()));
                }
            }
            let degenerate = !cs[1..]
                .iter()
                .any(|c| c.as_constant().is_some_and(|c| !c.is_zero()));
            if degenerate {
                let mut rest = dep.clone();
                rest[k] = Formula::and(
                    cs[1..]
                        .iter()
                        .map(|c| atom(c.clone(), Rel::Eq))
                        .chain([atom(cs[0].clone(), Rel::Eq)])
                        .collect(),
                );
                let rest = self.simplify(&Formula::and(rest));
                out.push(self.exists_block(&[x], &rest)?);
            }
        } else {
            let mut points = vec![TestPoint::MinusInf];
            let only_ne = atoms.iter().all(|a| a.rel == Rel::Ne);
            if !only_ne {
                for a in &atoms {
                    let eps = a.rel.is_strict() || a.rel == Rel::Ne;
                    for tp in roots(&a.poly.coeffs_in(x), eps) {
                        if !points.contains(&tp) {
                            points.push(tp);
                        }
                    }
                }
            }
            for tp in &points {
                let r = self.instance(&body, x, tp);
                if r == Formula::Top {
                    return Ok(self.simplify(&Formula::and(indep)));
                }
                out.push(r);
            }
        }
        let mut all = indep;
        all.push(Formula::or(out));
        Ok(self.simplify(&Formula::and(all)))
    }

    fn instance(&self, phi: &RFormula, x: usize, tp: &TestPoint) -> RFormula {
        let mut parts: Vec<RFormula> = match tp {
            TestPoint::MinusInf => vec![],
            TestPoint::At { guard, root, .. } => {
                let mut g: Vec<RFormula> = guard.iter().cloned().map(Formula::Atom).collect();
                if !root.b.is_zero() {
                    g.push(atom(root.r.clone(), Rel::Ge));
                }
                g
            }
        };
        parts.push(substitute(phi, x, tp));
        self.simplify(&Formula::and(parts))
    }
}

/// Index of a top-level equation usable for Gauss elimination of `x`,
/// preferring linear equations with constant leading coefficient.
fn gauss_equation(phi: &RFormula, x: usize) -> Option<usize> {
    let parts = conjuncts(phi);
    let mut best: Option<(u32, usize)> = None;
    for (k, c) in parts.iter().enumerate() {
        let Formula::Atom(a) = c else { continue };
        if a.rel != Rel::Eq || !a.poly.has_var(x) {
            continue;
        }
        let d = a.poly.degree_in(x);
        let cs = a.poly.coeffs_in(x);
        let const_lead = cs[d as usize].is_constant();
        let score = 2 * d + if const_lead { 0 } else { 1 };
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, k));
        }
    }
    best.map(|(_, k)| k)
}

/// `phi[x^2 := x] and x >= 0` when `x` occurs only in even powers.
fn halve(phi: &RFormula, x: usize) -> Option<RFormula> {
    let atoms = x_atoms(phi, x);
    let even = atoms.iter().all(|a| a.poly.terms().all(|(m, _)| m.exp(x) % 2 == 0));
    if !even {
        return None;
    }
    let halved = phi.map_atoms(&mut |a: &RealAtom| {
        if !a.poly.has_var(x) {
            return Formula::Atom(a.clone());
        }
        let cs = a.poly.coeffs_in(x);
        let half: Vec<QPoly> = cs.iter().step_by(2).cloned().collect();
        atom(Poly::from_coeffs_in(a.poly.nvars(), x, &half), a.rel)
    });
    let n = atoms[0].poly.nvars();
    Some(Formula::and(vec![halved, atom(Poly::var(n, x), Rel::Ge)]))
}

/// Eliminates all quantifiers of a prenex real formula.
pub fn vs_eliminate(psi: &RealFormula) -> Result<RealFormula> {
    vs_eliminate_in(psi, &Context::new(psi.vars.len()))
}

/// As [`vs_eliminate`], simplifying under the facts of `ctx`.
pub fn vs_eliminate_in(psi: &RealFormula, ctx: &Context) -> Result<RealFormula> {
    let (prefix, matrix) = psi.body.prefix();
    if !matrix.is_quantifier_free() {
        return Err(Error::Context("expected a prenex formula".into()));
    }
    let vs = Vs {
        ctx,
        names: &psi.vars,
    };
    let index = |v: &crate::term::Variable| {
        psi.index_of(v)
            .ok_or_else(|| Error::Context(format!("unknown variable `{v}`")))
    };
    let mut phi = nnf(matrix);
    let mut i = prefix.len();
    while i > 0 {
        let q = prefix[i - 1].0;
        let mut block = Vec::new();
        while i > 0 && prefix[i - 1].0 == q {
            block.push(index(&prefix[i - 1].1)?);
            i -= 1;
        }
        block.reverse();
        phi = match q {
            Quantifier::Exists => vs.exists_block(&block, &phi)?,
            Quantifier::Forall => negate(&vs.exists_block(&block, &negate(&phi))?),
        };
    }
    Ok(RealFormula {
        vars: psi.vars.clone(),
        body: vs.simplify(&phi),
    })
}
