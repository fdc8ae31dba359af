//! Complex reinterpretation of real results.
//!
//! Pairs of real equations `r1 = 0 and r2 = 0` are merged into single
//! complex equations `r1 + I*r2 = 0` wherever that shortens the formula.
//! Choosing the pairs is a minimum cost partial edge cover problem, solved
//! exactly through maximum weight matching. Disjunctions of disequations are
//! handled dually.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finite::finite_solutions;
use crate::formula::{Atom, CFormula, Formula, RelOp};
use crate::matching::{max_weight_matching, WEdge};
use crate::nf::{
    cart_generators, cart_to_cnf, cnf_generators, join_gaussian, poly_to_term, to_cartesian_nf, Ctx,
    GPoly, PolyCart, QPoly,
};
use crate::number::{GaussianRational, Rational};
use crate::poly::{Monomial, Poly};
use crate::real::{RFormula, Rel, RealAtom};
use crate::simplify::lead_coeff;
use crate::term::Term;

/// Which normal form terms are printed in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub enum NfStyle {
    #[default]
    Conjugate,
    Cartesian,
}

impl NfStyle {
    pub fn name(self) -> &'static str {
        match self {
            NfStyle::Conjugate => "conjugate",
            NfStyle::Cartesian => "cartesian",
        }
    }

    pub fn generators(self, ctx: &Ctx) -> Vec<Term> {
        match self {
            NfStyle::Conjugate => cnf_generators(ctx),
            NfStyle::Cartesian => cart_generators(ctx),
        }
    }
}

impl std::str::FromStr for NfStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conjugate" => Ok(NfStyle::Conjugate),
            "cartesian" => Ok(NfStyle::Cartesian),
            _ => Err(Error::Context(format!("unknown normal form `{s}`"))),
        }
    }
}

fn flatten_add<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Add(a, b) => {
            flatten_add(a, out);
            flatten_add(b, out);
        }
        _ => out.push(t),
    }
}

fn flatten_mul<'a>(t: &'a Term, k: usize, out: &mut Vec<(&'a Term, usize)>) {
    match t {
        Term::Mul(a, b) => {
            flatten_mul(a, k, out);
            flatten_mul(b, k, out);
        }
        Term::Pow(a, e) => flatten_mul(a, k * *e as usize, out),
        _ => out.push((t, k)),
    }
}

/// Symbol count of a term. A chain of `+` or `*` counts as one symbol; a
/// power counts as repeated multiplication.
pub fn term_size(t: &Term) -> usize {
    match t {
        Term::Const(_) | Term::I | Term::Var(_) => 1,
        Term::Add(..) => {
            let mut s = Vec::new();
            flatten_add(t, &mut s);
            1 + s.into_iter().map(term_size).sum::<usize>()
        }
        Term::Mul(..) | Term::Pow(..) => {
            let mut f = Vec::new();
            flatten_mul(t, 1, &mut f);
            1 + f.into_iter().map(|(b, k)| k * term_size(b)).sum::<usize>()
        }
        Term::Neg(a) | Term::Re(a) | Term::Im(a) | Term::Conj(a) => 1 + term_size(a),
    }
}

/// Word length of an atom: both sides plus the relation symbol.
pub fn word_length(a: &Atom) -> usize {
    1 + term_size(&a.lhs) + term_size(&a.rhs)
}

/// Coefficient of the smallest monomial of top degree.
fn lead<C: crate::number::Coeff>(p: &Poly<C>) -> Option<&C> {
    let d = p.total_degree();
    p.terms().find(|(m, _)| m.degree() == d).map(|(_, c)| c)
}

/// Divides by the leading coefficient.
pub fn normalize_equation(p: &GPoly) -> GPoly {
    match lead(p) {
        Some(c) => {
            let inv = c.inv().expect("non-zero leading coefficient");
            p.scale(&inv)
        }
        None => p.clone(),
    }
}

/// Scales by a positive rational to coprime Gaussian integer coefficients.
pub fn normalize_ordering(p: &GPoly) -> GPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(&c.denominator_lcm());
    }
    let scaled = p.scale(&GaussianRational::real(Rational::from_integer(den)));
    let mut g = BigInt::zero();
    for (_, c) in scaled.terms() {
        for q in [&c.re, &c.im] {
            g = g.gcd(&q.to_integer());
        }
    }
    scaled.scale(&GaussianRational::real(Rational::new(BigInt::one(), g.abs())))
}

/// A real polynomial over the Cartesian generators in the chosen style.
pub fn style_poly(p1: &QPoly, p2: &QPoly, ctx: &Ctx, style: NfStyle) -> GPoly {
    match style {
        NfStyle::Cartesian => join_gaussian(p1, p2),
        NfStyle::Conjugate => {
            cart_to_cnf(&PolyCart {
                ctx: ctx.clone(),
                p1: p1.clone(),
                p2: p2.clone(),
            })
            .poly
        }
    }
}

fn relop_atom(t: Term, rel: Rel) -> Atom {
    match rel {
        Rel::Eq => Atom::new(t, RelOp::Eq, Term::zero()),
        Rel::Ne => Atom::new(t, RelOp::Ne, Term::zero()),
        Rel::Lt => Atom::new(t, RelOp::Lt, Term::zero()),
        Rel::Le => Atom::new(t, RelOp::Le, Term::zero()),
        Rel::Gt => Atom::new(Term::zero(), RelOp::Lt, t),
        Rel::Ge => Atom::new(Term::zero(), RelOp::Le, t),
    }
}

/// The printed atom `p rel 0` in normal form.
pub fn nf_atom(p: &GPoly, rel: Rel, ctx: &Ctx, style: NfStyle) -> Atom {
    let p = match rel {
        Rel::Eq | Rel::Ne => normalize_equation(p),
        _ => normalize_ordering(p),
    };
    relop_atom(poly_to_term(&p, &style.generators(ctx)), rel)
}

/// The printed form of a real atom.
/// Ordering atoms are oriented so the real polynomial has a positive
/// leading coefficient.
pub fn real_atom(a: &RealAtom, ctx: &Ctx, style: NfStyle) -> Atom {
    let zero = Poly::zero(a.poly.nvars());
    let flip = !matches!(a.rel, Rel::Eq | Rel::Ne) && lead_coeff(&a.poly).is_negative();
    let (p, rel) = if flip {
        (a.poly.neg(), a.rel.flip())
    } else {
        (a.poly.clone(), a.rel)
    };
    nf_atom(&style_poly(&p, &zero, ctx, style), rel, ctx, style)
}

#[derive(Clone, Debug)]
pub struct EqNode {
    pub poly: QPoly,
    pub atom: Atom,
    pub cost: usize,
}

#[derive(Clone, Debug)]
pub struct CostEdge {
    pub u: usize,
    pub v: usize,
    pub cost: usize,
    /// The cheapest merged atom, `mu(e)`.
    pub merged: Atom,
}

#[derive(Clone, Debug)]
pub struct CostGraph {
    pub vertices: Vec<EqNode>,
    pub edges: Vec<CostEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialEdgeCover {
    /// Indices into the graph's edges, ascending.
    pub selected: Vec<usize>,
    pub cost: usize,
}

/// Real factors `lambda` for which `r1 + I*lambda*r2` cancels a monomial.
fn cancelling_factors(a: &GPoly, b: &GPoly) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for (m, ca) in a.terms() {
        let Some(cb) = b.coeff(m) else { continue };
        // ca + I*lambda*cb = 0
        if let Some(l) = (&GaussianRational::i() * ca).checked_div(cb) {
            if l.im.is_zero() && !l.re.is_zero() && !out.contains(&l.re) {
                out.push(l.re);
            }
        }
    }
    out
}

/// `mu` for the oriented pair: the cheapest `r1 + I*lambda*r2 = 0`.
fn best_merge(
    r1: &QPoly,
    r2: &QPoly,
    rel: Rel,
    ctx: &Ctx,
    style: NfStyle,
) -> (usize, Atom) {
    let zero = Poly::zero(r1.nvars());
    let a = style_poly(r1, &zero, ctx, style);
    let b = style_poly(r2, &zero, ctx, style);
    let mut best: Option<(usize, Atom)> = None;
    for lambda in cancelling_factors(&a, &b) {
        let p = style_poly(r1, &r2.scale(&lambda), ctx, style);
        let atom = nf_atom(&p, rel, ctx, style);
        let c = word_length(&atom);
        // Equal costs go to fewer conjugations, then to the smaller printed
        // text; neither depends on the signs of r1 and r2.
        let key = |c: usize, a: &Atom| {
            let text = a.to_string();
            (c, text.matches("conj(").count(), text)
        };
        let better = best.as_ref().is_none_or(|(bc, ba)| key(c, &atom) < key(*bc, ba));
        if better {
            best = Some((c, atom));
        }
    }
    best.expect("at least one factor")
}

fn build_graph(polys: &[QPoly], rel: Rel, ctx: &Ctx, style: NfStyle) -> CostGraph {
    let vertices: Vec<EqNode> = polys
        .iter()
        .map(|p| {
            let atom = real_atom(&RealAtom::new(p.clone(), rel), ctx, style);
            EqNode {
                poly: p.clone(),
                cost: word_length(&atom),
                atom,
            }
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..polys.len() {
        for v in u + 1..polys.len() {
            let (c1, a1) = best_merge(&polys[u], &polys[v], rel, ctx, style);
            let (c2, a2) = best_merge(&polys[v], &polys[u], rel, ctx, style);
            let (cost, merged) = if c2 < c1 { (c2, a2) } else { (c1, a1) };
            edges.push(CostEdge { u, v, cost, merged });
        }
    }
    CostGraph { vertices, edges }
}

/// Cost graph of a list of real equations given as atoms of the language.
pub fn build_cost_graph(atoms: &[Atom], ctx: &Ctx, style: NfStyle) -> Result<CostGraph> {
    let polys = atoms
        .iter()
        .map(|a| {
            if a.rel != RelOp::Eq {
                return Err(Error::Shape(format!("`{a}` is not an equation")));
            }
            let l = to_cartesian_nf(&a.lhs, ctx)?;
            let r = to_cartesian_nf(&a.rhs, ctx)?;
            if !l.p2.is_zero() || !r.p2.is_zero() {
                return Err(Error::Shape(format!("`{a}` is not a real equation")));
            }
            Ok(l.p1.sub(&r.p1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(build_graph(&polys, Rel::Eq, ctx, style))
}

impl CostGraph {
    /// `c(S)`: uncovered vertex costs plus selected edge costs.
    pub fn cover_cost(&self, selected: &[usize]) -> usize {
        let mut covered = vec![false; self.vertices.len()];
        let mut cost = 0;
        for &k in selected {
            let e = &self.edges[k];
            covered[e.u] = true;
            covered[e.v] = true;
            cost += e.cost;
        }
        cost + self
            .vertices
            .iter()
            .zip(&covered)
            .filter(|(_, &c)| !c)
            .map(|(v, _)| v.cost)
            .sum::<usize>()
    }

    /// For each vertex, its cheapest incident edge; ties go to the lower
    /// opposite vertex.
    pub fn cheapest_incident(&self) -> Vec<Option<usize>> {
        let mut best: Vec<Option<(usize, usize, usize)>> = vec![None; self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                let key = (e.cost, y, k);
                if best[x].is_none_or(|b| key < b) {
                    best[x] = Some(key);
                }
            }
        }
        best.into_iter().map(|b| b.map(|(_, _, k)| k)).collect()
    }
}

/// Minimum cost partial edge cover.
pub fn mcpec(g: &CostGraph) -> PartialEdgeCover {
    let n = g.vertices.len();
    let ev = g.cheapest_incident();
    let reduced: Vec<i64> = (0..n)
        .map(|v| {
            let c = g.vertices[v].cost;
            ev[v].map_or(c, |k| c.min(g.edges[k].cost)) as i64
        })
        .collect();
    let wedges: Vec<WEdge> = g
        .edges
        .iter()
        .map(|e| (e.u, e.v, reduced[e.u] + reduced[e.v] - e.cost as i64))
        .collect();
    let m = max_weight_matching(n, &wedges);
    let mut covered = vec![false; n];
    for &k in &m {
        covered[g.edges[k].u] = true;
        covered[g.edges[k].v] = true;
    }
    let mut selected = m;
    for v in 0..n {
        if covered[v] {
            continue;
        }
        if let Some(k) = ev[v] {
            if g.edges[k].cost < g.vertices[v].cost && !selected.contains(&k) {
                selected.push(k);
            }
        }
    }
    selected.sort_unstable();
    let cost = g.cover_cost(&selected);
    PartialEdgeCover { selected, cost }
}

/// Atoms equivalent to the conjunction (for `Eq`) or disjunction (for `Ne`)
/// of `polys`, merged along a minimum cost partial edge cover.
fn merge(polys: &[QPoly], rel: Rel, ctx: &Ctx, style: NfStyle) -> Vec<Atom> {
    let g = build_graph(polys, rel, ctx, style);
    if g.edges.is_empty() {
        return g.vertices.into_iter().map(|v| v.atom).collect();
    }
    let cover = mcpec(&g);
    let mut covered = vec![false; polys.len()];
    let mut out = Vec::new();
    for &k in &cover.selected {
        let e = &g.edges[k];
        covered[e.u] = true;
        covered[e.v] = true;
        out.push(e.merged.clone());
    }
    for (v, c) in g.vertices.into_iter().zip(covered) {
        if !c {
            out.push(v.atom);
        }
    }
    out
}

/// Rewrites a quantifier-free real formula over the Cartesian generators of
/// `ctx` into the language, merging equations within conjunctions and
/// disequations within disjunctions.
pub fn reinterpret_formula(phi: &RFormula, ctx: &Ctx, style: NfStyle) -> CFormula {
    let points = as_points(phi, ctx);
    let f = reinterpret_rec(points.as_ref().unwrap_or(phi), ctx, style);
    let f = if style == NfStyle::Conjugate {
        split_roots(&f, ctx)
    } else {
        f
    };
    canonical_order(&f)
}

fn has_disjunction(phi: &RFormula) -> bool {
    match phi {
        Formula::Or(_) => true,
        Formula::And(v) => v.iter().any(has_disjunction),
        Formula::Not(a) => has_disjunction(a),
        _ => false,
    }
}

/// A disjunction with a finite rational solution set, restated as the
/// disjunction of its points.
fn as_points(phi: &RFormula, ctx: &Ctx) -> Option<RFormula> {
    if !has_disjunction(phi) {
        return None;
    }
    let n = 2 * ctx.len();
    let points = finite_solutions(phi, n)?;
    Some(Formula::or(
        points
            .into_iter()
            .map(|p| {
                Formula::and(
                    p.into_iter()
                        .enumerate()
                        .filter_map(|(i, v)| {
                            let v = v?;
                            let x: QPoly = Poly::var(n, i);
                            Some(Formula::Atom(RealAtom::new(
                                x.sub(&Poly::constant(n, v)),
                                Rel::Eq,
                            )))
                        })
                        .collect(),
                )
            })
            .collect(),
    ))
}

fn reinterpret_rec(phi: &RFormula, ctx: &Ctx, style: NfStyle) -> CFormula {
    match phi {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Atom(a) => Formula::Atom(real_atom(a, ctx, style)),
        Formula::And(v) | Formula::Or(v) => {
            let conj = matches!(phi, Formula::And(_));
            let target = if conj { Rel::Eq } else { Rel::Ne };
            let mut polys = Vec::new();
            let mut rest = Vec::new();
            for c in v {
                match c {
                    Formula::Atom(a) if a.rel == target => polys.push(a.poly.clone()),
                    other => rest.push(reinterpret_rec(other, ctx, style)),
                }
            }
            let mut parts: Vec<CFormula> =
                merge(&polys, target, ctx, style).into_iter().map(Formula::Atom).collect();
            parts.extend(rest);
            if conj {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Not(a) => Formula::not(reinterpret_rec(a, ctx, style)),
        Formula::Implies(a, b) => {
            Formula::implies(reinterpret_rec(a, ctx, style), reinterpret_rec(b, ctx, style))
        }
        Formula::Iff(a, b) => Formula::iff(reinterpret_rec(a, ctx, style), reinterpret_rec(b, ctx, style)),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(reinterpret_rec(a, ctx, style))),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(reinterpret_rec(a, ctx, style))),
    }
}

fn atom_class(f: &CFormula) -> u8 {
    match f {
        Formula::Atom(a) => match a.rel {
            RelOp::Eq => 0,
            RelOp::Ne => 1,
            _ => 2,
        },
        _ => 3,
    }
}

/// Sorts the arguments of every `And`/`Or`: equations, disequations,
/// orderings, then compound formulas, each group by printed text.
pub fn canonical_order(phi: &CFormula) -> CFormula {
    match phi {
        Formula::And(v) | Formula::Or(v) => {
            let mut parts: Vec<(u8, String, CFormula)> = v
                .iter()
                .map(canonical_order)
                .map(|f| (atom_class(&f), f.to_string(), f))
                .collect();
            parts.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            parts.dedup_by(|a, b| a.1 == b.1);
            let parts = parts.into_iter().map(|(_, _, f)| f).collect();
            if matches!(phi, Formula::And(_)) {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Not(a) => Formula::not(canonical_order(a)),
        _ => phi.clone(),
    }
}

/// Gaussian integer divisors of `g` up to a norm bound.
fn gaussian_divisors(g: &GaussianRational, limit: i64) -> Option<Vec<GaussianRational>> {
    let norm = g.norm().to_integer();
    let norm: i64 = i64::try_from(&norm).ok()?;
    if norm == 0 || norm > limit {
        return None;
    }
    let r = (norm as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let nn = x * x + y * y;
            if nn == 0 || norm % nn != 0 {
                continue;
            }
            let d = GaussianRational::from_ints(x, y);
            let q = g / &d;
            if q.re.is_integer() && q.im.is_integer() {
                out.push(d);
            }
        }
    }
    Some(out)
}

fn eval_univariate(cs: &[GaussianRational], z: &GaussianRational) -> GaussianRational {
    cs.iter()
        .rev()
        .fold(GaussianRational::zero(), |acc, c| &(&acc * z) + c)
}

/// Divides by `z - r`, assuming `r` is a root.
fn deflate(cs: &[GaussianRational], r: &GaussianRational) -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::zero(); cs.len() - 1];
    let mut carry = GaussianRational::zero();
    for k in (1..cs.len()).rev() {
        carry = &(&carry * r) + &cs[k];
        out[k - 1] = carry.clone();
    }
    out
}

/// All roots in `Q(I)` if the polynomial splits into linear factors there.
pub fn gaussian_roots(cs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let mut cs = cs.to_vec();
    while cs.last().is_some_and(Zero::is_zero) {
        cs.pop();
    }
    let mut roots = Vec::new();
    while cs.len() > 2 {
        if cs[0].is_zero() {
            roots.push(GaussianRational::zero());
            cs.remove(0);
            continue;
        }
        // Clear denominators for the divisor candidates.
        let den = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
        let k = Rational::from_integer(den);
        let a0 = cs[0].scale(&k);
        let an = cs[cs.len() - 1].scale(&k);
        let us = gaussian_divisors(&a0, 1 << 14)?;
        let vs = gaussian_divisors(&an, 1 << 14)?;
        let found = us
            .iter()
            .flat_map(|u| vs.iter().map(move |v| u / v))
            .find(|r| eval_univariate(&cs, r).is_zero())?;
        cs = deflate(&cs, &found);
        roots.push(found);
    }
    if cs.len() == 2 {
        roots.push(-(&cs[0] / &cs[1]));
    }
    Some(roots)
}

/// Equations `p(z) = 0` in a single non-conjugated variable that split
/// completely over `Q(I)` become disjunctions of linear equations.
fn split_roots(phi: &CFormula, ctx: &Ctx) -> CFormula {
    match phi {
        Formula::Atom(a) if a.rel == RelOp::Eq => split_atom(a, ctx).unwrap_or_else(|| phi.clone()),
        Formula::And(v) => Formula::and(v.iter().map(|x| split_roots(x, ctx)).collect()),
        Formula::Or(v) => {
            let mut parts = Vec::new();
            for x in v {
                match split_roots(x, ctx) {
                    Formula::Or(inner) => parts.extend(inner),
                    f => parts.push(f),
                }
            }
            Formula::or(parts)
        }
        _ => phi.clone(),
    }
}

fn split_atom(a: &Atom, ctx: &Ctx) -> Option<CFormula> {
    let p = crate::nf::to_conjugate_nf(&Term::sub(a.lhs.clone(), a.rhs.clone()), ctx).ok()?.poly;
    let vars = p.vars();
    let [x] = vars.as_slice() else { return None };
    let x = *x;
    if x >= ctx.len() || p.total_degree() < 2 {
        return None;
    }
    let n = p.nvars();
    let cs: Vec<GaussianRational> = (0..=p.degree_in(x))
        .map(|k| p.coeff(&Monomial::var(n, x, k)).cloned().unwrap_or_default())
        .collect();
    let mut roots = gaussian_roots(&cs)?;
    roots.dedup();
    let mut uniq: BTreeMap<String, GaussianRational> = BTreeMap::new();
    for r in roots {
        uniq.insert(r.to_string(), r);
    }
    let z: GPoly = Poly::var(n, x);
    let atoms = uniq
        .into_values()
        .map(|r| {
            let lin = z.sub(&Poly::constant(n, r));
            Formula::Atom(nf_atom(&lin, Rel::Eq, ctx, NfStyle::Conjugate))
        })
        .collect();
    Some(Formula::or(atoms))
}
