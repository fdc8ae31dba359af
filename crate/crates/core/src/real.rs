//! Formulas of the ordered ring over real variables: atoms `p rel 0` with
//! `p` a rational polynomial.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Atom, CFormula, Formula, RelOp};
use crate::nf::{context, poly_to_term, Ctx, QPoly};
use crate::number::{GaussianRational, Rational};
use crate::parse::{parse_formula_with, ParseOptions};
use crate::poly::Poly;
use crate::term::{Term, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    /// Relation `rel'` with `p rel 0 <-> -p rel' 0`.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    /// Whether a value with the given sign satisfies `_ rel 0`.
    pub fn holds(self, sign: Ordering) -> bool {
        match self {
            Rel::Eq => sign == Ordering::Equal,
            Rel::Ne => sign != Ordering::Equal,
            Rel::Lt => sign == Ordering::Less,
            Rel::Le => sign != Ordering::Greater,
            Rel::Gt => sign == Ordering::Greater,
            Rel::Ge => sign != Ordering::Less,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Rel::Lt | Rel::Gt | Rel::Ne)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "==",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    /// Set of admissible signs as a bit mask: 1 = negative, 2 = zero, 4 = positive.
    pub fn sign_mask(self) -> u8 {
        match self {
            Rel::Eq => 2,
            Rel::Ne => 5,
            Rel::Lt => 1,
            Rel::Le => 3,
            Rel::Gt => 4,
            Rel::Ge => 6,
        }
    }

    /// Inverse of [`Rel::sign_mask`] for the masks that correspond to a relation.
    pub fn from_mask(mask: u8) -> Option<Rel> {
        Some(match mask {
            1 => Rel::Lt,
            2 => Rel::Eq,
            3 => Rel::Le,
            4 => Rel::Gt,
            5 => Rel::Ne,
            6 => Rel::Ge,
            _ => return None,
        })
    }
}

/// `poly rel 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RealAtom {
    pub poly: QPoly,
    pub rel: Rel,
}

impl RealAtom {
    pub fn new(poly: QPoly, rel: Rel) -> Self {
        RealAtom { poly, rel }
    }

    pub fn negate(&self) -> RealAtom {
        RealAtom::new(self.poly.clone(), self.rel.negate())
    }

    pub fn eval(&self, point: &[Rational]) -> bool {
        let v = self.poly.eval(point);
        self.rel.holds(sign(&v))
    }

    /// Converts to a language atom printing as `p rel 0`, with `>`/`>=`
    /// expressed by swapping sides.
    pub fn to_atom(&self, gens: &[Term]) -> Atom {
        let t = poly_to_term(&self.poly.map_coeffs(|c| GaussianRational::real(c.clone())), gens);
        match self.rel {
            Rel::Eq => Atom::new(t, RelOp::Eq, Term::zero()),
            Rel::Ne => Atom::new(t, RelOp::Ne, Term::zero()),
            Rel::Lt => Atom::new(t, RelOp::Lt, Term::zero()),
            Rel::Le => Atom::new(t, RelOp::Le, Term::zero()),
            Rel::Gt => Atom::new(Term::zero(), RelOp::Lt, t),
            Rel::Ge => Atom::new(Term::zero(), RelOp::Le, t),
        }
    }
}

pub fn sign(q: &Rational) -> Ordering {
    if q.is_zero() {
        Ordering::Equal
    } else if q.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub type RFormula = Formula<RealAtom>;

/// A formula over the real variables `vars`; polynomial generator `i` is `vars[i]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealFormula {
    pub vars: Ctx,
    pub body: RFormula,
}

impl RealFormula {
    pub fn index_of(&self, v: &Variable) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    pub fn generators(&self) -> Vec<Term> {
        self.vars.iter().map(|v| Term::Var(v.clone())).collect()
    }

    pub fn to_cformula(&self) -> CFormula {
        let gens = self.generators();
        self.body.map_atoms(&mut |a| Formula::Atom(a.to_atom(&gens)))
    }

    /// Indices of the variables occurring in atoms.
    pub fn occurring_indices(&self) -> BTreeSet<usize> {
        occurring_indices(&self.body)
    }

    /// Evaluates a quantifier-free body at a point for all of `vars`.
    pub fn eval_qf(&self, point: &[Rational]) -> Result<bool> {
        eval_real_qf(&self.body, point)
    }
}

impl fmt::Display for RealFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cformula())
    }
}

/// Variable indices occurring in the atoms of `phi`.
pub fn occurring_indices(phi: &RFormula) -> BTreeSet<usize> {
    fn rec(phi: &RFormula, out: &mut BTreeSet<usize>) {
        match phi {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => out.extend(a.poly.vars()),
            Formula::Not(a) => rec(a, out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| rec(x, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                rec(a, out);
                rec(b, out);
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => rec(a, out),
        }
    }
    let mut out = BTreeSet::new();
    rec(phi, &mut out);
    out
}

pub fn eval_real_qf(phi: &RFormula, point: &[Rational]) -> Result<bool> {
    Ok(match phi {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(a) => a.eval(point),
        Formula::Not(a) => !eval_real_qf(a, point)?,
        Formula::And(v) => {
            for x in v {
                if !eval_real_qf(x, point)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(v) => {
            for x in v {
                if eval_real_qf(x, point)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_real_qf(a, point)? || eval_real_qf(b, point)?,
        Formula::Iff(a, b) => eval_real_qf(a, point)? == eval_real_qf(b, point)?,
        Formula::Exists(..) | Formula::Forall(..) => {
            return Err(Error::Context("expected a quantifier-free formula".into()))
        }
    })
}

/// Negation normal form: only `And`, `Or`, atoms, constants and quantifiers.
pub fn nnf(phi: &RFormula) -> RFormula {
    nnf_rec(phi, false)
}

fn nnf_rec(phi: &RFormula, neg: bool) -> RFormula {
    match phi {
        Formula::Top => {
            if neg {
                Formula::Bot
            } else {
                Formula::Top
            }
        }
        Formula::Bot => {
            if neg {
                Formula::Top
            } else {
                Formula::Bot
            }
        }
        Formula::Atom(a) => Formula::Atom(if neg { a.negate() } else { a.clone() }),
        Formula::Not(a) => nnf_rec(a, !neg),
        Formula::And(v) | Formula::Or(v) => {
            let parts = v.iter().map(|x| nnf_rec(x, neg)).collect();
            if matches!(phi, Formula::And(_)) != neg {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let f = Formula::Or(vec![Formula::not((**a).clone()), (**b).clone()]);
            nnf_rec(&f, neg)
        }
        Formula::Iff(a, b) => {
            let f = Formula::Or(vec![
                Formula::And(vec![(**a).clone(), (**b).clone()]),
                Formula::And(vec![Formula::not((**a).clone()), Formula::not((**b).clone())]),
            ]);
            nnf_rec(&f, neg)
        }
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let body = Box::new(nnf_rec(a, neg));
            if matches!(phi, Formula::Exists(..)) != neg {
                Formula::Exists(x.clone(), body)
            } else {
                Formula::Forall(x.clone(), body)
            }
        }
    }
}

/// Converts a term without `I`, `Re`, `Im`, `conj` into a polynomial over `ctx`.
pub fn term_to_qpoly(t: &Term, ctx: &Ctx) -> Result<QPoly> {
    let n = ctx.len();
    Ok(match t {
        Term::Const(q) => Poly::constant(n, q.clone()),
        Term::Var(v) => {
            let i = ctx
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::Context(format!("variable `{v}` is not in the context")))?;
            Poly::var(n, i)
        }
        Term::Add(a, b) => term_to_qpoly(a, ctx)?.add(&term_to_qpoly(b, ctx)?),
        Term::Mul(a, b) => term_to_qpoly(a, ctx)?.mul(&term_to_qpoly(b, ctx)?),
        Term::Neg(a) => term_to_qpoly(a, ctx)?.neg(),
        Term::Pow(a, k) => term_to_qpoly(a, ctx)?.pow(*k),
        Term::I | Term::Re(_) | Term::Im(_) | Term::Conj(_) => {
            return Err(Error::Context(format!(
                "`{t}` is not a term of the ordered ring"
            )))
        }
    })
}

/// Converts a formula of the real fragment (no `I`, `Re`, `Im`, `conj`).
pub fn real_formula_from(phi: &CFormula) -> Result<RealFormula> {
    let vars = context(phi.all_vars());
    let body = phi.try_map_atoms(&mut |a: &Atom| -> Result<RFormula> {
        let lhs = term_to_qpoly(&a.lhs, &vars)?;
        let rhs = term_to_qpoly(&a.rhs, &vars)?;
        let rel = match a.rel {
            RelOp::Eq => Rel::Eq,
            RelOp::Ne => Rel::Ne,
            RelOp::Le => Rel::Le,
            RelOp::Lt => Rel::Lt,
        };
        // `0 < t` reads back as `t > 0`.
        let atom = if lhs.is_zero() {
            RealAtom::new(rhs, rel.flip())
        } else {
            RealAtom::new(lhs.sub(&rhs), rel)
        };
        Ok(Formula::Atom(atom))
    })?;
    Ok(RealFormula { vars, body })
}

/// Parses a formula of the real fragment; `__re`/`__im` names are accepted.
pub fn parse_real(text: &str) -> Result<RealFormula> {
    let phi = parse_formula_with(text, ParseOptions { allow_reserved: true })?;
    real_formula_from(&phi)
}
