//! Simplification of quantifier-free real formulas.
//!
//! Atoms are normalized to primitive integer polynomials with positive
//! leading coefficient, then decided or split using sign information about
//! variables, even powers, perfect squares and monomial factors. Boolean
//! structure is simplified against a context of facts: inside a conjunction
//! every sibling atom is assumed, inside a disjunction every sibling atom is
//! assumed false. Equations `x = c` are substituted into their siblings.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::formula::Formula;
use crate::nf::QPoly;
use crate::number::Rational;
use crate::poly::{Monomial, Poly};
use crate::real::{nnf, sign, RFormula, Rel, RealAtom};

pub const NEG: u8 = 1;
pub const ZERO: u8 = 2;
pub const POS: u8 = 4;
pub const ANY: u8 = 7;

fn sign_bit(q: &Rational) -> u8 {
    match sign(q) {
        std::cmp::Ordering::Less => NEG,
        std::cmp::Ordering::Equal => ZERO,
        std::cmp::Ordering::Greater => POS,
    }
}

/// Possible signs of a product.
pub fn mul_mask(a: u8, b: u8) -> u8 {
    let mut r = 0;
    for sa in [NEG, ZERO, POS] {
        if a & sa == 0 {
            continue;
        }
        for sb in [NEG, ZERO, POS] {
            if b & sb == 0 {
                continue;
            }
            r |= if sa == ZERO || sb == ZERO {
                ZERO
            } else if sa == sb {
                POS
            } else {
                NEG
            };
        }
    }
    r
}

/// Possible signs of a sum.
pub fn add_mask(a: u8, b: u8) -> u8 {
    if a == ZERO {
        return b;
    }
    if b == ZERO {
        return a;
    }
    let both_zero = a & ZERO != 0 && b & ZERO != 0;
    if a & NEG == 0 && b & NEG == 0 {
        return (if both_zero { ZERO } else { 0 }) | (if (a | b) & POS != 0 { POS } else { 0 });
    }
    if a & POS == 0 && b & POS == 0 {
        return (if both_zero { ZERO } else { 0 }) | (if (a | b) & NEG != 0 { NEG } else { 0 });
    }
    ANY
}

fn power_mask(m: u8, e: u32) -> u8 {
    if e == 0 {
        return POS;
    }
    if e % 2 == 1 {
        return m;
    }
    let mut r = 0;
    if m & ZERO != 0 {
        r |= ZERO;
    }
    if m & (NEG | POS) != 0 {
        r |= POS;
    }
    r
}

fn monomial_mask(m: &Monomial, var_masks: &[u8]) -> u8 {
    m.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(POS, |acc, (i, &e)| mul_mask(acc, power_mask(var_masks[i], e)))
}

/// Signs a polynomial can take given the possible signs of each variable.
pub fn poly_sign_mask(p: &QPoly, var_masks: &[u8]) -> u8 {
    p.terms().fold(ZERO, |acc, (m, c)| {
        add_mask(acc, mul_mask(sign_bit(c), monomial_mask(m, var_masks)))
    })
}

/// Primitive integer polynomial with positive leading coefficient, and
/// whether the input had to be negated to reach it.
pub fn normalize(p: &QPoly) -> (QPoly, bool) {
    if p.is_zero() {
        return (p.clone(), false);
    }
    let c = p.content();
    let neg = lead_coeff(p).is_negative();
    let k = if neg { -c.recip() } else { c.recip() };
    (p.scale(&k), neg)
}

/// Coefficient of the first printed term: the smallest monomial of top degree.
pub fn lead_coeff(p: &QPoly) -> Rational {
    let d = p.total_degree();
    p.terms()
        .find(|(m, _)| m.degree() == d)
        .map_or_else(Rational::zero, |(_, c)| c.clone())
}

/// `p = c * q^2` with `c` rational and `q` of positive degree.
pub fn perfect_square(p: &QPoly) -> Option<(Rational, QPoly)> {
    let (lm, lc) = p.leading_term()?;
    if lm.is_one() || lm.exps().iter().any(|e| e % 2 == 1) {
        return None;
    }
    let c = lc.clone();
    let r = p.scale(&c.recip());
    let n = p.nvars();
    let root_m = Monomial::from_exps(lm.exps().iter().map(|e| e / 2).collect());
    let mut q = Poly::monomial(n, root_m.clone(), Rational::one());
    let mut last = root_m.clone();
    let two = Rational::from_integer(2.into());
    for _ in 0..(2 * p.len() + 4) {
        let rest = r.sub(&q.mul(&q));
        let Some((rm, rc)) = rest.leading_term() else {
            return Some((c, q));
        };
        let tm = rm.div(&root_m)?;
        if tm >= last {
            return None;
        }
        q.add_term(tm.clone(), rc / &two);
        last = tm;
    }
    None
}

/// Sign knowledge and substitutions valid in the current position.
#[derive(Clone, Debug)]
pub struct Context {
    nvars: usize,
    facts: HashMap<QPoly, u8>,
    var_masks: Vec<u8>,
    bindings: Vec<Option<Rational>>,
}

impl Context {
    pub fn new(nvars: usize) -> Self {
        Context {
            nvars,
            facts: HashMap::new(),
            var_masks: vec![ANY; nvars],
            bindings: vec![None; nvars],
        }
    }

    /// Context holding the given atoms as facts.
    pub fn from_assumptions(nvars: usize, assumptions: &[RealAtom]) -> Self {
        let mut ctx = Context::new(nvars);
        let mut pending: Vec<RealAtom> = assumptions.to_vec();
        // Bindings first, so the other facts are stated in substituted form.
        for _ in 0..=assumptions.len() {
            let mut changed = false;
            for a in &pending {
                if a.rel == Rel::Eq {
                    let p = ctx.substitute(&a.poly);
                    if let Some((x, v)) = as_binding(&p) {
                        if ctx.bindings[x].is_none() {
                            ctx.bindings[x] = Some(v);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        pending = pending
            .into_iter()
            .map(|a| RealAtom::new(ctx.substitute(&a.poly), a.rel))
            .collect();
        for a in pending {
            if a.poly.is_constant() {
                continue;
            }
            let (p, neg) = normalize(&a.poly);
            let rel = if neg { a.rel.flip() } else { a.rel };
            ctx.add_fact(p, rel.sign_mask());
        }
        ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn binding(&self, i: usize) -> Option<&Rational> {
        self.bindings[i].as_ref()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.bindings
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.as_ref().map(|v| (i, v)))
    }

    pub fn var_mask(&self, i: usize) -> u8 {
        self.var_masks[i]
    }

    pub fn substitute(&self, p: &QPoly) -> QPoly {
        let mut out = p.clone();
        for (i, v) in self.bindings.iter().enumerate() {
            if let Some(v) = v {
                if out.has_var(i) {
                    out = out.subst_var(i, &Poly::constant(self.nvars, v.clone()));
                }
            }
        }
        out
    }

    fn fact(&self, p: &QPoly) -> u8 {
        self.facts.get(p).copied().unwrap_or(ANY)
    }

    /// Records that the normalized polynomial `p` has a sign in `mask`.
    fn add_fact(&mut self, p: QPoly, mask: u8) {
        let m = self.fact(&p) & mask;
        if let Some((x, lower)) = linear_in_one(&p) {
            // p = x - lower
            let derived = shifted_mask(m, &lower);
            self.var_masks[x] &= derived;
        }
        self.facts.insert(p, m);
    }

    fn bind(&mut self, x: usize, v: Rational) {
        self.var_masks[x] &= sign_bit(&v);
        self.bindings[x] = Some(v);
    }
}

/// `x - c` for the normalized form of a linear univariate polynomial.
fn linear_in_one(p: &QPoly) -> Option<(usize, Rational)> {
    if p.total_degree() != 1 {
        return None;
    }
    let vars = p.vars();
    if vars.len() != 1 {
        return None;
    }
    let x = vars[0];
    let cs = p.coeffs_in(x);
    let a = cs[1].as_constant()?;
    let b = cs[0].as_constant()?;
    Some((x, -b / a))
}

/// Signs `x` can have when `x - c` has a sign in `m`.
fn shifted_mask(m: u8, c: &Rational) -> u8 {
    let cs = sign_bit(c);
    let mut r = 0;
    if m & ZERO != 0 {
        r |= cs;
    }
    if m & POS != 0 {
        // x > c
        r |= match cs {
            NEG => ANY,
            _ => POS,
        };
    }
    if m & NEG != 0 {
        // x < c
        r |= match cs {
            POS => ANY,
            _ => NEG,
        };
    }
    r
}

/// `x = c` for an equation polynomial `a*x + b`.
fn as_binding(p: &QPoly) -> Option<(usize, Rational)> {
    linear_in_one(p)
}

fn atom(p: QPoly, rel: Rel) -> RFormula {
    Formula::Atom(RealAtom::new(p, rel))
}

fn truth(b: bool) -> RFormula {
    if b {
        Formula::Top
    } else {
        Formula::Bot
    }
}

/// Simplifies a single atom in a context.
pub fn simplify_atom(a: &RealAtom, ctx: &Context) -> RFormula {
    simplify_atom_rec(&ctx.substitute(&a.poly), a.rel, ctx, true)
}

fn simplify_atom_rec(p: &QPoly, rel: Rel, ctx: &Context, split: bool) -> RFormula {
    if let Some(c) = p.as_constant() {
        return truth(rel.holds(sign(&c)));
    }
    let (p, neg) = normalize(p);
    let rel = if neg { rel.flip() } else { rel };
    let rm = rel.sign_mask();
    let known = ctx.fact(&p) & poly_sign_mask(&p, &ctx.var_masks);
    if known & rm == known {
        return Formula::Top;
    }
    if known & rm == 0 {
        return Formula::Bot;
    }
    // Only the signs in `known` matter; prefer equations, which split further.
    let want = rm & known;
    let rel = [Rel::Eq, Rel::Ne, Rel::Lt, Rel::Gt, Rel::Le, Rel::Ge]
        .into_iter()
        .find(|r| r.sign_mask() & known == want)
        .unwrap_or(rel);

    if let Some((c, q)) = perfect_square(&p) {
        // p = c q^2 with c > 0 after normalization.
        debug_assert!(c.is_positive());
        let r = match rel {
            Rel::Eq | Rel::Le => Rel::Eq,
            Rel::Ne | Rel::Gt => Rel::Ne,
            Rel::Ge => return Formula::Top,
            Rel::Lt => return Formula::Bot,
        };
        return simplify_atom_rec(&q, r, ctx, split);
    }

    if split {
        if let Some(f) = split_monomial_content(&p, rel, ctx) {
            return f;
        }
        if matches!(rel, Rel::Eq | Rel::Ne) {
            if let Some(f) = split_nonnegative_sum(&p, rel, ctx) {
                return f;
            }
        }
    }
    atom(p, rel)
}

/// `m * q rel 0` with a non-trivial monomial `m`.
fn split_monomial_content(p: &QPoly, rel: Rel, ctx: &Context) -> Option<RFormula> {
    let m = p.monomial_content();
    if m.is_one() {
        return None;
    }
    let n = p.nvars();
    let q = p.div_monomial(&m);
    let mut rel = rel;
    let mut zero_vars = Vec::new();
    let mut even_vars = Vec::new();
    let mut odd = Monomial::one(n);
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let vm = ctx.var_masks[i];
        if vm & ZERO == 0 && (vm == POS || vm == NEG) {
            if vm == NEG && e % 2 == 1 {
                rel = rel.flip();
            }
            continue;
        }
        zero_vars.push(i);
        if e % 2 == 0 {
            even_vars.push(i);
        } else {
            odd = odd.mul(&Monomial::var(n, i, 1));
        }
    }
    let var_atom = |i: usize, r: Rel| simplify_atom_rec(&Poly::var(n, i), r, ctx, false);
    Some(match rel {
        Rel::Eq | Rel::Ne => {
            let r = rel;
            let mut parts: Vec<RFormula> = zero_vars.iter().map(|&i| var_atom(i, r)).collect();
            parts.push(simplify_atom_rec(&q, r, ctx, true));
            if r == Rel::Eq {
                simplify_or_flat(parts)
            } else {
                simplify_and_flat(parts)
            }
        }
        _ => {
            let core = q.mul_monomial(&odd, &Rational::one());
            let core_atom = simplify_atom_rec(&core, rel, ctx, odd.is_one());
            match rel {
                Rel::Gt | Rel::Lt => {
                    let mut parts: Vec<RFormula> =
                        even_vars.iter().map(|&i| var_atom(i, Rel::Ne)).collect();
                    parts.push(core_atom);
                    simplify_and_flat(parts)
                }
                _ => {
                    let mut parts: Vec<RFormula> =
                        even_vars.iter().map(|&i| var_atom(i, Rel::Eq)).collect();
                    parts.push(core_atom);
                    simplify_or_flat(parts)
                }
            }
        }
    })
}

/// `p = 0` for a sum of terms that are all non-negative: every term vanishes.
fn split_nonnegative_sum(p: &QPoly, rel: Rel, ctx: &Context) -> Option<RFormula> {
    let n = p.nvars();
    let masks: Vec<u8> = p
        .terms()
        .map(|(m, c)| mul_mask(sign_bit(c), monomial_mask(m, &ctx.var_masks)))
        .collect();
    if masks.iter().any(|tm| tm & NEG != 0) {
        return None;
    }
    if masks.iter().any(|tm| tm & ZERO == 0) {
        // A strictly positive term: p > 0 everywhere.
        return Some(truth(rel == Rel::Ne));
    }
    let mut conds = Vec::new();
    for (m, _) in p.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        conds.push(vars);
    }
    if conds.len() < 2 {
        return None;
    }
    let parts: Vec<RFormula> = conds
        .into_iter()
        .map(|vars| {
            let alts: Vec<RFormula> = vars
                .into_iter()
                .map(|i| simplify_atom_rec(&Poly::var(n, i), Rel::Eq, ctx, false))
                .collect();
            simplify_or_flat(alts)
        })
        .collect();
    let eq = simplify_and_flat(parts);
    Some(if rel == Rel::Eq {
        eq
    } else {
        negate(&eq)
    })
}

fn negate(f: &RFormula) -> RFormula {
    nnf(&Formula::not(f.clone()))
}

fn simplify_and_flat(parts: Vec<RFormula>) -> RFormula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::Top => {}
            Formula::Bot => return Formula::Bot,
            Formula::And(v) => out.extend(v),
            f => {
                if !out.contains(&f) {
                    out.push(f)
                }
            }
        }
    }
    Formula::and(out)
}

fn simplify_or_flat(parts: Vec<RFormula>) -> RFormula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::Bot => {}
            Formula::Top => return Formula::Top,
            Formula::Or(v) => out.extend(v),
            f => {
                if !out.contains(&f) {
                    out.push(f)
                }
            }
        }
    }
    Formula::or(out)
}

/// Simplifies `phi` (any quantifier-free formula) assuming `ctx`.
pub fn simplify_in(phi: &RFormula, ctx: &Context) -> RFormula {
    let mut f = nnf(phi);
    // A few rounds reach a fixpoint in practice; each round is sound.
    for _ in 0..4 {
        let g = simp(&f, ctx);
        if g == f {
            break;
        }
        f = g;
    }
    f
}

/// Simplifies a quantifier-free formula over `nvars` variables under the
/// assumptions `assumptions`.
pub fn simplify_real(phi: &RFormula, nvars: usize, assumptions: &[RealAtom]) -> RFormula {
    let ctx = Context::from_assumptions(nvars, assumptions);
    simplify_in(phi, &ctx)
}

fn simp(phi: &RFormula, ctx: &Context) -> RFormula {
    match phi {
        Formula::Top | Formula::Bot => phi.clone(),
        Formula::Atom(a) => simplify_atom(a, ctx),
        Formula::And(v) => simp_junction(v, ctx, true),
        Formula::Or(v) => simp_junction(v, ctx, false),
        // Callers pass negation normal forms; anything else is normalized first.
        other => simp(&nnf(other), ctx),
    }
}

/// Shared code for `And` (`conj = true`) and `Or`.
fn simp_junction(children: &[RFormula], outer: &Context, conj: bool) -> RFormula {
    let (unit, zero) = if conj {
        (Formula::Top, Formula::Bot)
    } else {
        (Formula::Bot, Formula::Top)
    };
    // In a disjunction the context learns the complement of each atom.
    let as_fact = |m: u8| if conj { m } else { ANY & !m };
    let mut pending: Vec<RFormula> = children.iter().rev().cloned().collect();
    let mut ctx = outer.clone();
    // Atom masks collected at this level, in order of first appearance.
    let mut local: Vec<(QPoly, u8)> = Vec::new();
    let mut complex: Vec<RFormula> = Vec::new();
    for _round in 0..8 {
        let mut new_binding = false;
        while let Some(f) = pending.pop() {
            let f = match &f {
                Formula::Atom(a) => simplify_atom(a, &ctx),
                _ => f,
            };
            match f {
                f if f == unit => {}
                f if f == zero => return zero,
                Formula::And(v) if conj => pending.extend(v.into_iter().rev()),
                Formula::Or(v) if !conj => pending.extend(v.into_iter().rev()),
                Formula::Atom(a) => {
                    let (p, neg) = normalize(&a.poly);
                    let rel = if neg { a.rel.flip() } else { a.rel };
                    let m = rel.sign_mask();
                    match local.iter_mut().find(|(q, _)| *q == p) {
                        Some(entry) => entry.1 = if conj { entry.1 & m } else { entry.1 | m },
                        None => local.push((p.clone(), m)),
                    }
                    ctx.add_fact(p.clone(), as_fact(m));
                    if ctx.fact(&p) == 0 {
                        return zero;
                    }
                    let binds = if conj { rel == Rel::Eq } else { rel == Rel::Ne };
                    if binds {
                        if let Some((x, v)) = as_binding(&p) {
                            if ctx.bindings[x].is_none() {
                                ctx.bind(x, v);
                                new_binding = true;
                            }
                        }
                    }
                }
                other => {
                    if !complex.contains(&other) {
                        complex.push(other)
                    }
                }
            }
        }
        if new_binding {
            // Restate local atoms under the new bindings, keeping the
            // binding atoms themselves.
            let mut kept = Vec::new();
            for (p, m) in local.drain(..) {
                let sp = ctx.substitute(&p);
                let is_binding = linear_in_one(&p)
                    .is_some_and(|(x, v)| ctx.bindings[x].as_ref() == Some(&v));
                if is_binding || sp == p {
                    kept.push((p, m));
                } else if let Some(r) = Rel::from_mask(m) {
                    pending.push(atom(sp, r));
                }
            }
            ctx = rebuild(outer, &ctx, &kept, conj);
            local = kept;
            if !pending.is_empty() {
                continue;
            }
        }
        // Complex children see every atom of this level.
        let mut again = false;
        let mut out = Vec::new();
        for c in std::mem::take(&mut complex) {
            match simp(&c, &ctx) {
                f if f == unit => {}
                f if f == zero => return zero,
                f @ (Formula::And(_) | Formula::Atom(_)) if conj => {
                    pending.push(f);
                    again = true;
                }
                f @ (Formula::Or(_) | Formula::Atom(_)) if !conj => {
                    pending.push(f);
                    again = true;
                }
                f => {
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
        complex = out;
        if !again {
            break;
        }
    }
    let mut parts: Vec<RFormula> = Vec::new();
    for (p, m) in local {
        let known = outer.fact(&p);
        let m = m & known;
        if conj && m == known || !conj && m == 0 {
            continue;
        }
        match Rel::from_mask(m) {
            Some(r) => parts.push(atom(p, r)),
            None if m == 0 => return zero,
            None => return unit,
        }
    }
    parts.append(&mut complex);
    let f = if conj {
        Formula::and(parts)
    } else {
        Formula::or(parts)
    };
    absorb(f)
}

fn rebuild(outer: &Context, cur: &Context, kept: &[(QPoly, u8)], conj: bool) -> Context {
    let mut ctx = outer.clone();
    for (i, b) in cur.bindings.iter().enumerate() {
        if let Some(v) = b {
            if ctx.bindings[i].is_none() {
                ctx.bind(i, v.clone());
            }
        }
    }
    for (p, m) in kept {
        ctx.add_fact(p.clone(), if conj { *m } else { ANY & !*m });
    }
    ctx
}

/// `a and (a or b)` to `a`, and dually.
fn absorb(f: RFormula) -> RFormula {
    match f {
        Formula::And(v) => {
            let atoms: Vec<RFormula> = v.iter().filter(|x| matches!(x, Formula::Atom(_))).cloned().collect();
            let kept: Vec<RFormula> = v
                .into_iter()
                .filter(|x| match x {
                    Formula::Or(inner) => !inner.iter().any(|y| atoms.contains(y)),
                    _ => true,
                })
                .collect();
            Formula::and(kept)
        }
        Formula::Or(v) => {
            let atoms: Vec<RFormula> = v.iter().filter(|x| matches!(x, Formula::Atom(_))).cloned().collect();
            let kept: Vec<RFormula> = v
                .into_iter()
                .filter(|x| match x {
                    Formula::And(inner) => !inner.iter().any(|y| atoms.contains(y)),
                    _ => true,
                })
                .collect();
            Formula::or(kept)
        }
        f => f,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;
    use crate::real::parse_real;

    fn simp_text(text: &str, assumptions: &[&str]) -> String {
        let all = std::iter::once(text)
            .chain(assumptions.iter().copied())
            .collect::<Vec<_>>()
            .join(" and ");
        // Parse once to get a shared context for the formula and the assumptions.
        let joint = parse_real(&all).unwrap();
        let vars = joint.vars.clone();
        let phi = crate::real::real_formula_from(&crate::parse::parse_formula_with(
            text,
            crate::parse::ParseOptions { allow_reserved: true },
        ).unwrap())
        .unwrap();
        let remap = |f: &crate::real::RealFormula| -> RFormula {
            let map: Vec<usize> = f
                .vars
                .iter()
                .map(|v| vars.iter().position(|w| w == v).unwrap())
                .collect();
            f.body.map_atoms(&mut |a| atom(a.poly.remap(&map, vars.len()), a.rel))
        };
        let body = remap(&phi);
        let assumed: Vec<RealAtom> = assumptions
            .iter()
            .map(|t| {
                let f = parse_real(t).unwrap();
                match remap(&f) {
                    Formula::Atom(a) => a,
                    _ => panic!("assumption must be an atom"),
                }
            })
            .collect();
        let out = simplify_real(&body, vars.len(), &assumed);
        crate::real::RealFormula { vars, body: out }.to_string()
    }

    #[test]
    fn masks() {
        assert_eq!(mul_mask(NEG, NEG), POS);
        assert_eq!(mul_mask(NEG | ZERO, POS), NEG | ZERO);
        assert_eq!(add_mask(POS, ZERO | POS), POS);
        assert_eq!(add_mask(POS, NEG), ANY);
        assert_eq!(power_mask(ANY, 2), ZERO | POS);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(simp_text("x > 0 and T", &[]), "x > 0");
        assert_eq!(simp_text("g^2 - 1 >= 0", &["g > 0"]), "g^2 - 1 >= 0");
        assert_eq!(simp_text("x*y > 0", &["x > 0", "y > 0"]), "T");
    }

    #[test]
    fn normalization_and_ground_atoms() {
        assert_eq!(simp_text("2 - 4*x < 0", &[]), "2*x - 1 > 0");
        assert_eq!(simp_text("1 < 2", &[]), "T");
        assert_eq!(simp_text("x^2 + 1 > 0", &[]), "T");
        assert_eq!(simp_text("x^2 + y^2 == 0", &[]), "x == 0 and y == 0");
        assert_eq!(simp_text("x^2 - 2*x*y + y^2 <= 0", &[]), "x - y == 0");
        assert_eq!(simp_text("x^3*y == 0", &[]), "x == 0 or y == 0");
    }

    #[test]
    fn context_and_bindings() {
        assert_eq!(simp_text("x > 0 and (x < 0 or y == 1)", &[]), "x > 0 and y - 1 == 0");
        assert_eq!(simp_text("x - 2 == 0 and x*y - 4 == 0", &[]), "x - 2 == 0 and y - 2 == 0");
        assert_eq!(simp_text("x != 0 or x*y + 1 == 0", &[]), "x != 0");
        assert_eq!(simp_text("x >= 0 and x <= 0", &[]), "x == 0");
        assert_eq!(simp_text("x > 0 or x <= 0", &[]), "T");
        assert_eq!(simp_text("g__re^2 - 1 >= 0", &["g__im == 0"]), "g__re^2 - 1 >= 0");
    }

    #[test]
    fn perfect_squares() {
        let p = parse_real("x^2 + 2*x*y + y^2 + 2*x + 2*y + 1 == 0").unwrap();
        let Formula::Atom(a) = &p.body else { panic!() };
        let (c, q) = perfect_square(&a.poly).unwrap();
        assert_eq!(c, int(1));
        assert_eq!(q.mul(&q), a.poly);
        let r = parse_real("x^2 + y^2 == 0").unwrap();
        let Formula::Atom(b) = &r.body else { panic!() };
        assert!(perfect_square(&b.poly).is_none());
    }
}
