//! First-order formulas over complex atoms, their semantics and prenex form.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::Result;
use crate::nf::is_real_term;
use crate::number::GaussianRational;
use crate::term::{eval_term, Assignment, Term, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RelOp {
    Eq,
    Ne,
    Le,
    Lt,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
            RelOp::Le => "<=",
            RelOp::Lt => "<",
        }
    }

    pub fn is_ordering(self) -> bool {
        matches!(self, RelOp::Le | RelOp::Lt)
    }
}

/// `lhs rel rhs` over complex terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    pub lhs: Term,
    pub rhs: Term,
    pub rel: RelOp,
}

impl Atom {
    pub fn new(lhs: Term, rel: RelOp, rhs: Term) -> Self {
        Atom { lhs, rhs, rel }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }

    pub fn rename(&self, f: &impl Fn(&Variable) -> Variable) -> Atom {
        Atom::new(self.lhs.rename(f), self.rel, self.rhs.rename(f))
    }

    /// Truth value under `sigma`. Ordering atoms with a non-real side are false.
    pub fn eval(&self, sigma: &Assignment) -> Result<bool> {
        let a = eval_term(&self.lhs, sigma)?;
        let b = eval_term(&self.rhs, sigma)?;
        Ok(match self.rel {
            RelOp::Eq => a == b,
            RelOp::Ne => a != b,
            RelOp::Le | RelOp::Lt => {
                if !is_real_term(&self.lhs) || !is_real_term(&self.rhs) {
                    false
                } else if self.rel == RelOp::Le {
                    a.re <= b.re
                } else {
                    a.re < b.re
                }
            }
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero_left = matches!(&self.lhs, Term::Const(q) if num_traits::Zero::is_zero(q));
        match self.rel {
            RelOp::Le | RelOp::Lt if zero_left => {
                let sym = if self.rel == RelOp::Le { ">=" } else { ">" };
                write!(f, "{} {} 0", self.rhs, sym)
            }
            _ => write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula<A> {
    Top,
    Bot,
    Atom(A),
    Not(Box<Formula<A>>),
    And(Vec<Formula<A>>),
    Or(Vec<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
    Exists(Variable, Box<Formula<A>>),
    Forall(Variable, Box<Formula<A>>),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

impl<A> Formula<A> {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula<A>) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quantifier, v: Variable, body: Formula<A>) -> Self {
        match q {
            Quantifier::Exists => Formula::Exists(v, Box::new(body)),
            Quantifier::Forall => Formula::Forall(v, Box::new(body)),
        }
    }

    /// Conjunction that collapses trivial cases.
    pub fn and(mut fs: Vec<Formula<A>>) -> Self {
        match fs.len() {
            0 => Formula::Top,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    pub fn or(mut fs: Vec<Formula<A>>) -> Self {
        match fs.len() {
            0 => Formula::Bot,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(v) | Formula::Or(v) => v.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// True if all quantifiers sit in an outermost prefix.
    pub fn is_prenex(&self) -> bool {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.is_prenex(),
            f => f.is_quantifier_free(),
        }
    }

    /// Splits off the quantifier prefix.
    pub fn prefix(&self) -> (Vec<(Quantifier, Variable)>, &Formula<A>) {
        let mut out = Vec::new();
        let mut f = self;
        loop {
            match f {
                Formula::Exists(v, b) => {
                    out.push((Quantifier::Exists, v.clone()));
                    f = b;
                }
                Formula::Forall(v, b) => {
                    out.push((Quantifier::Forall, v.clone()));
                    f = b;
                }
                _ => return (out, f),
            }
        }
    }

    pub fn with_prefix(prefix: &[(Quantifier, Variable)], matrix: Formula<A>) -> Self {
        prefix
            .iter()
            .rev()
            .fold(matrix, |acc, (q, v)| Formula::quant(*q, v.clone(), acc))
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => f(a),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit_atoms(f),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| x.visit_atoms(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Rebuilds the formula with every atom replaced by a formula.
    pub fn try_map_atoms<B, E>(
        &self,
        f: &mut impl FnMut(&A) -> std::result::Result<Formula<B>, E>,
    ) -> std::result::Result<Formula<B>, E> {
        Ok(match self {
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Atom(a) => f(a)?,
            Formula::Not(a) => Formula::not(a.try_map_atoms(f)?),
            Formula::And(v) => Formula::And(
                v.iter()
                    .map(|x| x.try_map_atoms(f))
                    .collect::<std::result::Result<_, _>>()?,
            ),
            Formula::Or(v) => Formula::Or(
                v.iter()
                    .map(|x| x.try_map_atoms(f))
                    .collect::<std::result::Result<_, _>>()?,
            ),
            Formula::Implies(a, b) => Formula::implies(a.try_map_atoms(f)?, b.try_map_atoms(f)?),
            Formula::Iff(a, b) => Formula::iff(a.try_map_atoms(f)?, b.try_map_atoms(f)?),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(a.try_map_atoms(f)?)),
            Formula::Forall(v, a) => Formula::Forall(v.clone(), Box::new(a.try_map_atoms(f)?)),
        })
    }

    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        self.try_map_atoms(&mut |a| Ok::<_, std::convert::Infallible>(f(a)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn bound_vars(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<Variable>) {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => {}
            Formula::Not(a) => a.collect_bound(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| x.collect_bound(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                out.push(x.clone());
                a.collect_bound(out);
            }
        }
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        self.bound_vars().len()
    }
}

/// Renders connectives; atoms use their own `Display`.
fn fmt_formula<A: fmt::Display>(
    phi: &Formula<A>,
    f: &mut fmt::Formatter<'_>,
    min: u8,
) -> fmt::Result {
    // Binding strength: <-> 1, -> 2, or 3, and 4, not 5, atoms 6.
    // Quantifiers extend as far right as possible, so they get 0.
    let prec = match phi {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(v) if v.len() >= 2 => 3,
        Formula::And(v) if v.len() >= 2 => 4,
        Formula::Not(_) => 5,
        Formula::Exists(..) | Formula::Forall(..) => 0,
        _ => 6,
    };
    if prec < min {
        f.write_str("(")?;
        fmt_formula(phi, f, 0)?;
        return f.write_str(")");
    }
    match phi {
        Formula::Top => f.write_str("T"),
        Formula::Bot => f.write_str("F"),
        Formula::Atom(a) => write!(f, "{a}"),
        Formula::Not(a) => {
            f.write_str("not ")?;
            fmt_formula(a, f, 5)
        }
        Formula::And(v) | Formula::Or(v) => {
            let (op, empty, p) = if matches!(phi, Formula::And(_)) {
                (" and ", "T", 4)
            } else {
                (" or ", "F", 3)
            };
            match v.len() {
                0 => f.write_str(empty),
                1 => fmt_formula(&v[0], f, min),
                _ => {
                    for (i, x) in v.iter().enumerate() {
                        if i > 0 {
                            f.write_str(op)?;
                        }
                        fmt_formula(x, f, p + 1)?;
                    }
                    Ok(())
                }
            }
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, f, 3)?;
            f.write_str(" -> ")?;
            fmt_formula(b, f, 2)
        }
        Formula::Iff(a, b) => {
            fmt_formula(a, f, 2)?;
            f.write_str(" <-> ")?;
            fmt_formula(b, f, 2)
        }
        Formula::Exists(v, a) => {
            write!(f, "exists {v} . ")?;
            fmt_formula(a, f, 0)
        }
        Formula::Forall(v, a) => {
            write!(f, "forall {v} . ")?;
            fmt_formula(a, f, 0)
        }
    }
}

impl<A: fmt::Display> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f, 0)
    }
}

pub type CFormula = Formula<Atom>;

impl Formula<Atom> {
    /// Variables occurring in atoms but not bound above them, sorted.
    pub fn free_vars(&self) -> Vec<Variable> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        free_rec(self, &mut bound, &mut out);
        out.into_iter().collect()
    }

    /// All variables, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Variable> {
        let mut out: BTreeSet<Variable> = self.bound_vars().into_iter().collect();
        self.visit_atoms(&mut |a| a.collect_vars(&mut out));
        out
    }

    pub fn rename_free(&self, f: &impl Fn(&Variable) -> Variable) -> CFormula {
        self.map_atoms(&mut |a| Formula::Atom(a.rename(f)))
    }
}

fn free_rec(phi: &CFormula, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
    match phi {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(a) => {
            let mut vs = BTreeSet::new();
            a.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        }
        Formula::Not(a) => free_rec(a, bound, out),
        Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| free_rec(x, bound, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            free_rec(a, bound, out);
            free_rec(b, bound, out);
        }
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            bound.push(x.clone());
            free_rec(a, bound, out);
            bound.pop();
        }
    }
}

/// Fresh name `base#k` not contained in `used`.
pub fn fresh_name(base: &Variable, used: &HashSet<Variable>) -> Variable {
    let stem = base.name().split('#').next().unwrap_or(base.name());
    (1..)
        .map(|k| Variable::new(&format!("{stem}#{k}")))
        .find(|v| !used.contains(v))
        .expect("unbounded supply of names")
}

/// Gives every quantifier its own variable, distinct from all free variables.
fn rename_apart(phi: &CFormula, used: &mut HashSet<Variable>) -> CFormula {
    match phi {
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let q = if matches!(phi, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            if used.contains(x) {
                let y = fresh_name(x, used);
                used.insert(y.clone());
                let renamed = substitute_var(body, x, &y);
                Formula::quant(q, y, rename_apart(&renamed, used))
            } else {
                used.insert(x.clone());
                Formula::quant(q, x.clone(), rename_apart(body, used))
            }
        }
        Formula::Not(a) => Formula::not(rename_apart(a, used)),
        Formula::And(v) => Formula::And(v.iter().map(|x| rename_apart(x, used)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|x| rename_apart(x, used)).collect()),
        Formula::Implies(a, b) => {
            let a = rename_apart(a, used);
            Formula::implies(a, rename_apart(b, used))
        }
        Formula::Iff(a, b) => {
            let a = rename_apart(a, used);
            Formula::iff(a, rename_apart(b, used))
        }
        f => f.clone(),
    }
}

/// Replaces free occurrences of `x` by `y`.
fn substitute_var(phi: &CFormula, x: &Variable, y: &Variable) -> CFormula {
    match phi {
        Formula::Exists(z, _) | Formula::Forall(z, _) if z == x => phi.clone(),
        Formula::Exists(z, b) => Formula::Exists(z.clone(), Box::new(substitute_var(b, x, y))),
        Formula::Forall(z, b) => Formula::Forall(z.clone(), Box::new(substitute_var(b, x, y))),
        Formula::Atom(a) => Formula::Atom(a.rename(&|v| if v == x { y.clone() } else { v.clone() })),
        Formula::Not(a) => Formula::not(substitute_var(a, x, y)),
        Formula::And(v) => Formula::And(v.iter().map(|f| substitute_var(f, x, y)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|f| substitute_var(f, x, y)).collect()),
        Formula::Implies(a, b) => Formula::implies(substitute_var(a, x, y), substitute_var(b, x, y)),
        Formula::Iff(a, b) => Formula::iff(substitute_var(a, x, y), substitute_var(b, x, y)),
        Formula::Top | Formula::Bot => phi.clone(),
    }
}

/// Expands `<->` whenever one side contains a quantifier.
fn expand_quantified_iff(phi: &CFormula) -> CFormula {
    match phi {
        Formula::Iff(a, b) => {
            let a = expand_quantified_iff(a);
            let b = expand_quantified_iff(b);
            if a.is_quantifier_free() && b.is_quantifier_free() {
                Formula::iff(a, b)
            } else {
                Formula::And(vec![
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(b, a),
                ])
            }
        }
        Formula::Not(a) => Formula::not(expand_quantified_iff(a)),
        Formula::And(v) => Formula::And(v.iter().map(expand_quantified_iff).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(expand_quantified_iff).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(expand_quantified_iff(a), expand_quantified_iff(b))
        }
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(expand_quantified_iff(a))),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(expand_quantified_iff(a))),
        f => f.clone(),
    }
}

/// Moves all quantifiers outward; bound variables are renamed to
/// `name#k` where they clash with other bound or free variables.
pub fn prenexify(phi: &CFormula) -> CFormula {
    let expanded = expand_quantified_iff(phi);
    let mut used: HashSet<Variable> = expanded.free_vars().into_iter().collect();
    let apart = rename_apart(&expanded, &mut used);
    let (prefix, matrix) = pull(&apart);
    Formula::with_prefix(&prefix, matrix)
}

fn pull(phi: &CFormula) -> (Vec<(Quantifier, Variable)>, CFormula) {
    match phi {
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            let q = if matches!(phi, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let (mut p, m) = pull(b);
            p.insert(0, (q, x.clone()));
            (p, m)
        }
        Formula::Not(a) => {
            let (p, m) = pull(a);
            (dualize(p), Formula::not(m))
        }
        Formula::And(v) | Formula::Or(v) => {
            let mut prefix = Vec::new();
            let mut parts = Vec::new();
            for x in v {
                let (p, m) = pull(x);
                prefix.extend(p);
                parts.push(m);
            }
            let m = if matches!(phi, Formula::And(_)) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            };
            (prefix, m)
        }
        Formula::Implies(a, b) => {
            let (pa, ma) = pull(a);
            let (pb, mb) = pull(b);
            let mut prefix = dualize(pa);
            prefix.extend(pb);
            (prefix, Formula::implies(ma, mb))
        }
        f => (Vec::new(), f.clone()),
    }
}

fn dualize(p: Vec<(Quantifier, Variable)>) -> Vec<(Quantifier, Variable)> {
    p.into_iter().map(|(q, v)| (q.dual(), v)).collect()
}

/// Evaluates a quantifier-free formula.
pub fn eval_qf(phi: &CFormula, sigma: &Assignment) -> Result<bool> {
    Ok(match phi {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(a) => a.eval(sigma)?,
        Formula::Not(a) => !eval_qf(a, sigma)?,
        Formula::And(v) => {
            for x in v {
                if !eval_qf(x, sigma)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(v) => {
            for x in v {
                if eval_qf(x, sigma)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_qf(a, sigma)? || eval_qf(b, sigma)?,
        Formula::Iff(a, b) => eval_qf(a, sigma)? == eval_qf(b, sigma)?,
        Formula::Exists(..) | Formula::Forall(..) => {
            return Err(crate::Error::Context(
                "eval_qf expects a quantifier-free formula".into(),
            ))
        }
    })
}

/// Outcome of a sampling-based evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    fn and(self, o: Truth) -> Truth {
        match (self, o) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    fn or(self, o: Truth) -> Truth {
        self.not().and(o.not()).not()
    }
}

/// Three-valued evaluation instantiating quantified variables from `grid`.
///
/// An existential is `True` once a grid witness is found and a universal is
/// `False` once a grid counterexample is found; every other quantified
/// outcome is `Unknown`, so a conclusive answer is always correct.
pub fn sample_quantified(
    phi: &CFormula,
    grid: &[GaussianRational],
    sigma: &Assignment,
) -> Result<Truth> {
    let mut s = sigma.clone();
    sample_rec(phi, grid, &mut s)
}

fn sample_rec(phi: &CFormula, grid: &[GaussianRational], s: &mut Assignment) -> Result<Truth> {
    Ok(match phi {
        Formula::Top => Truth::True,
        Formula::Bot => Truth::False,
        Formula::Atom(a) => Truth::from_bool(a.eval(s)?),
        Formula::Not(a) => sample_rec(a, grid, s)?.not(),
        Formula::And(v) => {
            let mut acc = Truth::True;
            for x in v {
                acc = acc.and(sample_rec(x, grid, s)?);
                if acc == Truth::False {
                    break;
                }
            }
            acc
        }
        Formula::Or(v) => {
            let mut acc = Truth::False;
            for x in v {
                acc = acc.or(sample_rec(x, grid, s)?);
                if acc == Truth::True {
                    break;
                }
            }
            acc
        }
        Formula::Implies(a, b) => sample_rec(a, grid, s)?.not().or(sample_rec(b, grid, s)?),
        Formula::Iff(a, b) => {
            let (x, y) = (sample_rec(a, grid, s)?, sample_rec(b, grid, s)?);
            match (x, y) {
                (Truth::Unknown, _) | (_, Truth::Unknown) => Truth::Unknown,
                _ => Truth::from_bool(x == y),
            }
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let exists = matches!(phi, Formula::Exists(..));
            let saved = s.get(x).cloned();
            let mut result = Truth::Unknown;
            for c in grid {
                s.insert(x.clone(), c.clone());
                let t = sample_rec(body, grid, s)?;
                if exists && t == Truth::True {
                    result = Truth::True;
                    break;
                }
                if !exists && t == Truth::False {
                    result = Truth::False;
                    break;
                }
            }
            match saved {
                Some(c) => s.insert(x.clone(), c),
                None => s.remove(x),
            };
            result
        }
    })
}
