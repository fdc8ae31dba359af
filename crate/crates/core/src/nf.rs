//! Conjugate and Cartesian normal forms of terms.
//!
//! For a context `z1 < ... < zn` the conjugate normal form lives in
//! `Q(I)[z1..zn, conj(z1)..conj(zn)]` (generator `i` is `zi`, generator
//! `n + i` is `conj(zi)`). The Cartesian normal form is a pair of rational
//! polynomials in `Re(z1)..Re(zn), Im(z1)..Im(zn)` using the same indexing.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{rat, Coeff, GaussianRational, Rational};
use crate::poly::Poly;
use crate::term::{Term, Variable};

/// Ordered list of the complex variables a normal form is taken over.
pub type Ctx = Arc<[Variable]>;

/// Sorted, deduplicated context from arbitrary variables.
pub fn context<I: IntoIterator<Item = Variable>>(vars: I) -> Ctx {
    let set: BTreeSet<Variable> = vars.into_iter().collect();
    set.into_iter().collect::<Vec<_>>().into()
}

pub type GPoly = Poly<GaussianRational>;
pub type QPoly = Poly<Rational>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyCnf {
    pub ctx: Ctx,
    pub poly: GPoly,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyCart {
    pub ctx: Ctx,
    pub p1: QPoly,
    pub p2: QPoly,
}

fn index_of(ctx: &Ctx, v: &Variable) -> Result<usize> {
    ctx.binary_search(v)
        .ok()
        .or_else(|| ctx.iter().position(|w| w == v))
        .ok_or_else(|| Error::Context(format!("variable `{v}` is not in the context")))
}

/// Conjugation on `Q(I)[z, conj(z)]`: conjugates coefficients and swaps
/// each `zi` with `conj(zi)`.
pub fn conj_poly(p: &GPoly) -> GPoly {
    let n = p.nvars() / 2;
    let map: Vec<usize> = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
    p.map_coeffs(GaussianRational::conj).remap(&map, 2 * n)
}

fn half() -> GaussianRational {
    GaussianRational::real(rat(1, 2))
}

fn minus_half_i() -> GaussianRational {
    GaussianRational::new(Rational::zero(), rat(-1, 2))
}

pub fn to_conjugate_nf(t: &Term, ctx: &Ctx) -> Result<PolyCnf> {
    Ok(PolyCnf {
        ctx: ctx.clone(),
        poly: cnf_rec(t, ctx)?,
    })
}

fn cnf_rec(t: &Term, ctx: &Ctx) -> Result<GPoly> {
    let n2 = 2 * ctx.len();
    Ok(match t {
        Term::Const(q) => Poly::constant(n2, GaussianRational::real(q.clone())),
        Term::I => Poly::constant(n2, GaussianRational::i()),
        Term::Var(v) => Poly::var(n2, index_of(ctx, v)?),
        Term::Add(a, b) => cnf_rec(a, ctx)?.add(&cnf_rec(b, ctx)?),
        Term::Mul(a, b) => cnf_rec(a, ctx)?.mul(&cnf_rec(b, ctx)?),
        Term::Neg(a) => cnf_rec(a, ctx)?.neg(),
        Term::Pow(a, k) => cnf_rec(a, ctx)?.pow(*k),
        Term::Conj(a) => conj_poly(&cnf_rec(a, ctx)?),
        Term::Re(a) => {
            let p = cnf_rec(a, ctx)?;
            p.add(&conj_poly(&p)).scale(&half())
        }
        Term::Im(a) => {
            let p = cnf_rec(a, ctx)?;
            p.sub(&conj_poly(&p)).scale(&minus_half_i())
        }
    })
}

pub fn to_cartesian_nf(t: &Term, ctx: &Ctx) -> Result<PolyCart> {
    let (p1, p2) = cart_rec(t, ctx)?;
    Ok(PolyCart {
        ctx: ctx.clone(),
        p1,
        p2,
    })
}

fn cart_rec(t: &Term, ctx: &Ctx) -> Result<(QPoly, QPoly)> {
    let n = ctx.len();
    let zero = || Poly::zero(2 * n);
    Ok(match t {
        Term::Const(q) => (Poly::constant(2 * n, q.clone()), zero()),
        Term::I => (zero(), Poly::one(2 * n)),
        Term::Var(v) => {
            let i = index_of(ctx, v)?;
            (Poly::var(2 * n, i), Poly::var(2 * n, n + i))
        }
        Term::Add(a, b) => {
            let (a1, a2) = cart_rec(a, ctx)?;
            let (b1, b2) = cart_rec(b, ctx)?;
            (a1.add(&b1), a2.add(&b2))
        }
        Term::Mul(a, b) => {
            let (a1, a2) = cart_rec(a, ctx)?;
            let (b1, b2) = cart_rec(b, ctx)?;
            cart_mul(&a1, &a2, &b1, &b2)
        }
        Term::Neg(a) => {
            let (a1, a2) = cart_rec(a, ctx)?;
            (a1.neg(), a2.neg())
        }
        Term::Pow(a, k) => {
            let (a1, a2) = cart_rec(a, ctx)?;
            let mut acc = (Poly::one(2 * n), zero());
            let mut base = (a1, a2);
            let mut k = *k;
            while k > 0 {
                if k & 1 == 1 {
                    acc = cart_mul(&acc.0, &acc.1, &base.0, &base.1);
                }
                k >>= 1;
                if k > 0 {
                    base = cart_mul(&base.0, &base.1, &base.0, &base.1);
                }
            }
            acc
        }
        Term::Conj(a) => {
            let (a1, a2) = cart_rec(a, ctx)?;
            (a1, a2.neg())
        }
        Term::Re(a) => (cart_rec(a, ctx)?.0, zero()),
        Term::Im(a) => (cart_rec(a, ctx)?.1, zero()),
    })
}

fn cart_mul(a1: &QPoly, a2: &QPoly, b1: &QPoly, b2: &QPoly) -> (QPoly, QPoly) {
    (
        a1.mul(b1).sub(&a2.mul(b2)),
        a1.mul(b2).add(&a2.mul(b1)),
    )
}

/// Splits a polynomial with Gaussian coefficients into real and imaginary parts.
pub fn split_gaussian(p: &GPoly) -> (QPoly, QPoly) {
    (p.map_coeffs(|c| c.re.clone()), p.map_coeffs(|c| c.im.clone()))
}

/// `p1 + I*p2` as one polynomial with Gaussian coefficients.
pub fn join_gaussian(p1: &QPoly, p2: &QPoly) -> GPoly {
    let a: GPoly = p1.map_coeffs(|c| GaussianRational::real(c.clone()));
    let b: GPoly = p2.map_coeffs(|c| GaussianRational::new(Rational::zero(), c.clone()));
    a.add(&b)
}

pub fn cnf_to_cart(p: &PolyCnf) -> PolyCart {
    let n = p.ctx.len();
    let images: Vec<GPoly> = (0..2 * n)
        .map(|g| {
            let i = g % n.max(1);
            let re = Poly::var(2 * n, i);
            let im = Poly::monomial(
                2 * n,
                crate::poly::Monomial::var(2 * n, n + i, 1),
                if g < n {
                    GaussianRational::i()
                } else {
                    -GaussianRational::i()
                },
            );
            re.add(&im)
        })
        .collect();
    let q = p.poly.compose(&images, GaussianRational::clone);
    let (p1, p2) = split_gaussian(&q);
    PolyCart {
        ctx: p.ctx.clone(),
        p1,
        p2,
    }
}

pub fn cart_to_cnf(p: &PolyCart) -> PolyCnf {
    let n = p.ctx.len();
    let images: Vec<GPoly> = (0..2 * n)
        .map(|g| {
            let i = g % n.max(1);
            let z: GPoly = Poly::var(2 * n, i);
            let zb: GPoly = Poly::var(2 * n, n + i);
            if g < n {
                z.add(&zb).scale(&half())
            } else {
                z.sub(&zb).scale(&minus_half_i())
            }
        })
        .collect();
    let conv = |c: &Rational| GaussianRational::real(c.clone());
    let a = p.p1.compose(&images, conv);
    let b = p.p2.compose(&images, conv).scale(&GaussianRational::i());
    PolyCnf {
        ctx: p.ctx.clone(),
        poly: a.add(&b),
    }
}

impl PolyCnf {
    pub fn conj(&self) -> PolyCnf {
        PolyCnf {
            ctx: self.ctx.clone(),
            poly: conj_poly(&self.poly),
        }
    }

    pub fn to_term(&self) -> Term {
        poly_to_term(&self.poly, &cnf_generators(&self.ctx))
    }
}

impl PolyCart {
    pub fn is_real(&self) -> bool {
        self.p2.is_zero()
    }

    /// `p1 + I*p2` over the generators `Re(z)..`, `Im(z)..`.
    pub fn joined(&self) -> GPoly {
        join_gaussian(&self.p1, &self.p2)
    }

    pub fn to_term(&self) -> Term {
        poly_to_term(&self.joined(), &cart_generators(&self.ctx))
    }
}

impl fmt::Display for PolyCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Display for PolyCart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// `z1..zn, conj(z1)..conj(zn)` as terms.
pub fn cnf_generators(ctx: &Ctx) -> Vec<Term> {
    let vars = ctx.iter().map(|v| Term::Var(v.clone()));
    vars.clone().chain(vars.map(Term::conj)).collect()
}

/// `Re(z1)..Re(zn), Im(z1)..Im(zn)` as terms.
pub fn cart_generators(ctx: &Ctx) -> Vec<Term> {
    let re = ctx.iter().map(|v| Term::re(Term::Var(v.clone())));
    let im = ctx.iter().map(|v| Term::im(Term::Var(v.clone())));
    re.chain(im).collect()
}

/// Canonical printing order: by descending degree, within one degree the
/// terms with a non-negative coefficient come first, each group ascending.
pub fn print_order<C: Coeff>(
    p: &Poly<C>,
    is_negative: impl Fn(&C) -> bool,
) -> Vec<(&crate::poly::Monomial, &C)> {
    let mut terms: Vec<_> = p.terms().collect();
    // Stable sort keeps the ascending monomial order inside each group.
    terms.sort_by(|(m1, c1), (m2, c2)| {
        m2.degree()
            .cmp(&m1.degree())
            .then_with(|| is_negative(c1).cmp(&is_negative(c2)))
    });
    terms
}

/// Builds the term that prints a normal-form polynomial.
pub fn poly_to_term(p: &GPoly, gens: &[Term]) -> Term {
    let terms = print_order(p, GaussianRational::is_negative);
    let mut acc: Option<Term> = None;
    for (m, c) in terms {
        let neg = c.is_negative();
        let mag = if neg { -c } else { c.clone() };
        let mut factors: Vec<Term> = Vec::new();
        let is_unit = mag.is_one();
        if !is_unit || m.is_one() {
            factors.push(Term::gaussian(&mag));
        }
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(gens[i].clone()),
                _ => factors.push(Term::pow(gens[i].clone(), e)),
            }
        }
        let mut it = factors.into_iter();
        let first = it.next().expect("at least one factor");
        let summand = it.fold(first, Term::mul);
        acc = Some(match (acc, neg) {
            (None, false) => summand,
            (None, true) => Term::neg(summand),
            (Some(a), false) => Term::add(a, summand),
            (Some(a), true) => Term::sub(a, summand),
        });
    }
    acc.unwrap_or_else(Term::zero)
}

/// Real-valuedness via the Cartesian normal form.
pub fn is_real_term(t: &Term) -> bool {
    let ctx = context(t.vars());
    to_cartesian_nf(t, &ctx)
        .map(|c| c.p2.is_zero())
        .expect("context covers all variables")
}

/// Semantic equivalence, decided by comparing conjugate normal forms.
pub fn term_equiv(t1: &Term, t2: &Term) -> bool {
    let ctx = context(t1.vars().into_iter().chain(t2.vars()));
    let a = to_conjugate_nf(t1, &ctx).expect("context covers all variables");
    let b = to_conjugate_nf(t2, &ctx).expect("context covers all variables");
    a == b
}
