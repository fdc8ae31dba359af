//! Real normal form: every atom is `p rel 0` with `p` a rational polynomial
//! in `Re(z1)..Re(zn), Im(z1)..Im(zn)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Atom, CFormula, Formula, RelOp};
use crate::nf::{cart_generators, to_cartesian_nf, Ctx, QPoly};
use crate::number::{GaussianRational, Rational};
use crate::real::{eval_real_qf, RFormula, Rel, RealAtom};
use crate::term::Assignment;

/// A formula in real normal form. Quantifiers range over the complex
/// variables of `ctx`; polynomial generator `i < n` is `Re(ctx[i])` and
/// generator `n + i` is `Im(ctx[i])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealNf {
    pub ctx: Ctx,
    pub body: RFormula,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RealNfOptions {
    /// Rewrite ordering atoms with a non-real side to `F` instead of failing.
    pub lenient: bool,
}

/// Substitution `generator := polynomial` applied before the realness check.
pub type Bindings = Vec<(usize, QPoly)>;

pub fn apply_bindings(p: &QPoly, bindings: &Bindings) -> QPoly {
    bindings
        .iter()
        .fold(p.clone(), |acc, (i, q)| acc.subst_var(*i, q))
}

/// Rewrites every atom into real polynomial atoms with right-hand side 0.
pub fn to_real_nf(phi: &CFormula, ctx: &Ctx, opts: RealNfOptions) -> Result<RealNf> {
    to_real_nf_with(phi, ctx, opts, &Vec::new())
}

/// As [`to_real_nf`], first substituting `bindings` into both sides.
pub fn to_real_nf_with(
    phi: &CFormula,
    ctx: &Ctx,
    opts: RealNfOptions,
    bindings: &Bindings,
) -> Result<RealNf> {
    let body = phi.try_map_atoms(&mut |a: &Atom| atom_to_real(a, ctx, opts, bindings))?;
    Ok(RealNf {
        ctx: ctx.clone(),
        body,
    })
}

fn atom_to_real(a: &Atom, ctx: &Ctx, opts: RealNfOptions, bindings: &Bindings) -> Result<RFormula> {
    let l = to_cartesian_nf(&a.lhs, ctx)?;
    let r = to_cartesian_nf(&a.rhs, ctx)?;
    let (l1, l2) = (apply_bindings(&l.p1, bindings), apply_bindings(&l.p2, bindings));
    let (r1, r2) = (apply_bindings(&r.p1, bindings), apply_bindings(&r.p2, bindings));
    let f = l1.sub(&r1);
    let g = l2.sub(&r2);
    Ok(match a.rel {
        RelOp::Eq => Formula::and(
            [f, g]
                .into_iter()
                .filter(|p| !p.is_zero())
                .map(|p| Formula::Atom(RealAtom::new(p, Rel::Eq)))
                .collect(),
        ),
        RelOp::Ne => Formula::or(
            [f, g]
                .into_iter()
                .filter(|p| !p.is_zero())
                .map(|p| Formula::Atom(RealAtom::new(p, Rel::Ne)))
                .collect(),
        ),
        RelOp::Le | RelOp::Lt => {
            if !l2.is_zero() || !r2.is_zero() {
                if opts.lenient {
                    Formula::Bot
                } else {
                    return Err(Error::Realness(a.to_string()));
                }
            } else {
                let rel = if a.rel == RelOp::Le { Rel::Le } else { Rel::Lt };
                Formula::Atom(RealAtom::new(f, rel))
            }
        }
    })
}

impl RealNf {
    pub fn to_cformula(&self) -> CFormula {
        let gens = cart_generators(&self.ctx);
        self.body.map_atoms(&mut |a| Formula::Atom(a.to_atom(&gens)))
    }

    /// Point `(Re c1..Re cn, Im c1..Im cn)` for an assignment of the context.
    pub fn cartesian_point(&self, sigma: &Assignment) -> Result<Vec<Rational>> {
        let vals: Vec<GaussianRational> = self
            .ctx
            .iter()
            .map(|v| {
                sigma
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::Context(format!("no value for variable `{v}`")))
            })
            .collect::<Result<_>>()?;
        Ok(vals
            .iter()
            .map(|c| c.re.clone())
            .chain(vals.iter().map(|c| c.im.clone()))
            .collect())
    }

    /// Evaluates a quantifier-free body under a complex assignment.
    pub fn eval_qf(&self, sigma: &Assignment) -> Result<bool> {
        eval_real_qf(&self.body, &self.cartesian_point(sigma)?)
    }
}

impl fmt::Display for RealNf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cformula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::context;
    use crate::parse::parse_formula;

    fn real_nf(text: &str, lenient: bool) -> Result<RealNf> {
        let phi = parse_formula(text).unwrap();
        let ctx = context(phi.all_vars());
        to_real_nf(&phi, &ctx, RealNfOptions { lenient })
    }

    #[test]
    fn equation_splits_into_two() {
        let r = real_nf("z == x + I*y", false).unwrap();
        assert_eq!(
            r.to_string(),
            "Re(z) + Im(y) - Re(x) == 0 and Im(z) - Re(y) - Im(x) == 0"
        );
    }

    #[test]
    fn disequation_splits_into_disjunction() {
        let r = real_nf("z != 0", false).unwrap();
        assert_eq!(r.to_string(), "Re(z) != 0 or Im(z) != 0");
    }

    #[test]
    fn non_real_ordering() {
        assert!(matches!(real_nf("I < 2*I", false), Err(Error::Realness(_))));
        assert_eq!(real_nf("I < 2*I", true).unwrap().body, Formula::Bot);
        let r = real_nf("z*conj(z) < 2", false).unwrap();
        assert_eq!(r.to_string(), "Re(z)^2 + Im(z)^2 - 2 < 0");
    }
}
