//! Raw terms of the language: constants, `I`, variables, `+`, unary `-`,
//! `*`, powers, `Re`, `Im` and `conj`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{fmt_rational, GaussianRational, Rational};

/// A variable name. Ordered naturally, so `v2` sorts before `v10`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Variable(Arc<str>);

pub const RE_SUFFIX: &str = "__re";
pub const IM_SUFFIX: &str = "__im";

impl Variable {
    pub fn new(name: &str) -> Self {
        Variable(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for names ending in one of the auxiliary suffixes.
    pub fn is_reserved(&self) -> bool {
        self.0.ends_with(RE_SUFFIX) || self.0.ends_with(IM_SUFFIX)
    }

    pub fn re_part(&self) -> Variable {
        Variable::new(&format!("{}{}", self.0, RE_SUFFIX))
    }

    pub fn im_part(&self) -> Variable {
        Variable::new(&format!("{}{}", self.0, IM_SUFFIX))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (&a[..la], &b[..lb]);
                let ta = trim_zeros(da);
                let tb = trim_zeros(db);
                let o = ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb)).then(la.cmp(&lb));
                if o != Ordering::Equal {
                    return o;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k..]
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    /// A non-negative rational constant.
    Const(Rational),
    I,
    Var(Variable),
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, u32),
    Re(Box<Term>),
    Im(Box<Term>),
    Conj(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Variable::new(name))
    }

    /// A constant; negative values become `Neg(Const(|q|))`.
    pub fn constant(q: Rational) -> Term {
        if q.is_negative() {
            Term::Neg(Box::new(Term::Const(-q)))
        } else {
            Term::Const(q)
        }
    }

    pub fn int(n: i64) -> Term {
        Term::constant(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Term {
        Term::Const(Rational::zero())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term, b: Term) -> Term {
        Term::add(a, Term::neg(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn pow(a: Term, k: u32) -> Term {
        Term::Pow(Box::new(a), k)
    }

    pub fn re(a: Term) -> Term {
        Term::Re(Box::new(a))
    }

    pub fn im(a: Term) -> Term {
        Term::Im(Box::new(a))
    }

    pub fn conj(a: Term) -> Term {
        Term::Conj(Box::new(a))
    }

    /// The constant `re + im*I` as a term of the language.
    pub fn gaussian(c: &GaussianRational) -> Term {
        match (c.re.is_zero(), c.im.is_zero()) {
            (_, true) => Term::constant(c.re.clone()),
            (true, false) => imag_term(&c.im),
            (false, false) => Term::add(Term::constant(c.re.clone()), imag_term(&c.im)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Term::Const(_) | Term::I => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Neg(a) | Term::Pow(a, _) | Term::Re(a) | Term::Im(a) | Term::Conj(a) => {
                a.collect_vars(out)
            }
        }
    }

    /// Renames variables according to `f`.
    pub fn rename(&self, f: &impl Fn(&Variable) -> Variable) -> Term {
        let b = |t: &Term| Box::new(t.rename(f));
        match self {
            Term::Const(_) | Term::I => self.clone(),
            Term::Var(v) => Term::Var(f(v)),
            Term::Add(x, y) => Term::Add(b(x), b(y)),
            Term::Mul(x, y) => Term::Mul(b(x), b(y)),
            Term::Neg(x) => Term::Neg(b(x)),
            Term::Pow(x, k) => Term::Pow(b(x), *k),
            Term::Re(x) => Term::Re(b(x)),
            Term::Im(x) => Term::Im(b(x)),
            Term::Conj(x) => Term::Conj(b(x)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) => 1,
            Term::Neg(..) => 2,
            Term::Mul(..) => 3,
            Term::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn imag_term(im: &Rational) -> Term {
    let mag = im.abs();
    let t = if mag.is_one() {
        Term::I
    } else {
        Term::mul(Term::Const(mag), Term::I)
    };
    if im.is_negative() {
        Term::neg(t)
    } else {
        t
    }
}

/// Variable assignment used for evaluation.
pub type Assignment = HashMap<Variable, GaussianRational>;

pub fn eval_term(t: &Term, sigma: &Assignment) -> Result<GaussianRational> {
    Ok(match t {
        Term::Const(q) => GaussianRational::real(q.clone()),
        Term::I => GaussianRational::i(),
        Term::Var(v) => sigma
            .get(v)
            .cloned()
            .ok_or_else(|| Error::Context(format!("no value for variable `{v}`")))?,
        Term::Add(a, b) => &eval_term(a, sigma)? + &eval_term(b, sigma)?,
        Term::Mul(a, b) => &eval_term(a, sigma)? * &eval_term(b, sigma)?,
        Term::Neg(a) => -eval_term(a, sigma)?,
        Term::Pow(a, k) => {
            let base = eval_term(a, sigma)?;
            let mut acc = GaussianRational::real(Rational::one());
            for _ in 0..*k {
                acc = &acc * &base;
            }
            acc
        }
        Term::Re(a) => GaussianRational::real(eval_term(a, sigma)?.re),
        Term::Im(a) => GaussianRational::real(eval_term(a, sigma)?.im),
        Term::Conj(a) => eval_term(a, sigma)?.conj(),
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, t: &Term, min: u8| -> fmt::Result {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Const(q) => f.write_str(&fmt_rational(q)),
            Term::I => f.write_str("I"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Add(a, b) => {
                wrap(f, a, 1)?;
                match &**b {
                    Term::Neg(inner) => {
                        f.write_str(" - ")?;
                        wrap(f, inner, 3)
                    }
                    _ => {
                        f.write_str(" + ")?;
                        wrap(f, b, 2)
                    }
                }
            }
            Term::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            Term::Mul(a, b) => {
                wrap(f, a, 3)?;
                f.write_str("*")?;
                wrap(f, b, 4)
            }
            Term::Pow(a, k) => {
                wrap(f, a, 5)?;
                write!(f, "^{k}")
            }
            Term::Re(a) => write!(f, "Re({a})"),
            Term::Im(a) => write!(f, "Im({a})"),
            Term::Conj(a) => write!(f, "conj({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    #[test]
    fn natural_variable_order() {
        let mut vs: Vec<Variable> = ["v10", "v2", "a", "v1", "b3", "v02"]
            .iter()
            .map(|s| Variable::new(s))
            .collect();
        vs.sort();
        let names: Vec<&str> = vs.iter().map(Variable::name).collect();
        assert_eq!(names, ["a", "b3", "v1", "v2", "v02", "v10"]);
    }

    #[test]
    fn evaluation() {
        let z = Term::var("z");
        let mut s = Assignment::new();
        s.insert(Variable::new("z"), GaussianRational::from_ints(3, 4));
        let t = Term::mul(z.clone(), Term::conj(z.clone()));
        assert_eq!(eval_term(&t, &s).unwrap(), GaussianRational::from_ints(25, 0));
        let ii = Term::mul(Term::I, Term::I);
        assert_eq!(eval_term(&ii, &Assignment::new()).unwrap(), GaussianRational::from_ints(-1, 0));
        assert!(eval_term(&z, &Assignment::new()).is_err());
    }

    #[test]
    fn display_respects_precedence() {
        let z = Term::var("z");
        let t = Term::mul(Term::add(z.clone(), Term::I), Term::sub(z.clone(), Term::int(1)));
        assert_eq!(t.to_string(), "(z + I)*(z - 1)");
        let p = Term::pow(Term::neg(z.clone()), 2);
        assert_eq!(p.to_string(), "(-z)^2");
        assert_eq!(Term::constant(int(-2)).to_string(), "-2");
    }
}
