//! Recognition of formulas with finitely many rational solutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::formula::Formula;
use crate::nf::QPoly;
use crate::number::Rational;
use crate::poly::Poly;
use crate::real::{eval_real_qf, nnf, occurring_indices, RFormula, Rel, RealAtom};

const BRANCH_LIMIT: usize = 64;
const POINT_LIMIT: usize = 32;
const DIVISOR_LIMIT: u64 = 1_000_000_000;

/// Dense univariate polynomial, lowest coefficient first.
type Dense = Vec<Rational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn rem(a: &[Rational], b: &[Rational]) -> Dense {
    let mut r = a.to_vec();
    let lb = b.last().expect("non-zero divisor");
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let f = r.last().unwrap() / lb;
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn derivative(p: &[Rational]) -> Dense {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect()
}

/// Number of distinct real roots, by a Sturm sequence.
fn real_root_count(p: &[Rational]) -> usize {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<i8>| {
        let s: Vec<i8> = signs.into_iter().filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |c: &Rational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
    let at_pos = seq.iter().map(|q| sign(q.last().unwrap())).collect();
    let at_neg = seq
        .iter()
        .map(|q| {
            let s = sign(q.last().unwrap());
            if (q.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg) - changes(at_pos)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// All real roots, if they are all rational.
fn rational_roots(p: &[Rational]) -> Option<Vec<Rational>> {
    let mut p = trim(p.to_vec());
    let mut roots = Vec::new();
    if p.is_empty() {
        return None;
    }
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if p.len() > 1 {
        let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let us = divisors(&ints[0])?;
        let vs = divisors(ints.last().unwrap())?;
        for u in &us {
            for v in &vs {
                for s in [u.clone(), -u.clone()] {
                    let r = Rational::new(s, v.clone());
                    if !roots.contains(&r) && eval(&p, &r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    // The remaining roots must be non-real.
    let mut rest = p;
    for r in &roots {
        while rest.len() > 1 && eval(&rest, r).is_zero() {
            rest = deflate(&rest, r);
        }
    }
    (real_root_count(&rest) == 0).then_some(roots)
}

fn deflate(p: &[Rational], r: &Rational) -> Dense {
    let mut out = vec![Rational::zero(); p.len() - 1];
    let mut carry = Rational::zero();
    for k in (1..p.len()).rev() {
        carry = &carry * r + &p[k];
        out[k - 1] = carry.clone();
    }
    out
}

fn conjunctive_branches(phi: &RFormula) -> Option<Vec<Vec<RealAtom>>> {
    Some(match phi {
        Formula::Top => vec![vec![]],
        Formula::Bot => vec![],
        Formula::Atom(a) => vec![vec![a.clone()]],
        Formula::Or(v) => {
            let mut out = Vec::new();
            for x in v {
                out.extend(conjunctive_branches(x)?);
                if out.len() > BRANCH_LIMIT {
                    return None;
                }
            }
            out
        }
        Formula::And(v) => {
            let mut acc = vec![vec![]];
            for x in v {
                let bs = conjunctive_branches(x)?;
                if acc.len() * bs.len() > BRANCH_LIMIT {
                    return None;
                }
                let mut next = Vec::new();
                for a in &acc {
                    for b in &bs {
                        let mut c: Vec<RealAtom> = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        _ => return None,
    })
}

fn substitute(p: &QPoly, point: &[Option<Rational>]) -> QPoly {
    let n = p.nvars();
    point.iter().enumerate().fold(p.clone(), |acc, (i, v)| match v {
        Some(v) if acc.has_var(i) => acc.subst_var(i, &Poly::constant(n, v.clone())),
        _ => acc,
    })
}

fn solve_branch(
    atoms: &[RealAtom],
    vars: &[usize],
    point: &mut Vec<Option<Rational>>,
    out: &mut Vec<Vec<Option<Rational>>>,
) -> bool {
    if out.len() > POINT_LIMIT {
        return false;
    }
    let open: Vec<usize> = vars.iter().copied().filter(|&i| point[i].is_none()).collect();
    if open.is_empty() {
        let full: Vec<Rational> = point.iter().map(|v| v.clone().unwrap_or_default()).collect();
        let holds = atoms.iter().all(|a| a.eval(&full));
        if holds && !out.contains(point) {
            out.push(point.clone());
        }
        return true;
    }
    for a in atoms {
        if a.rel != Rel::Eq {
            continue;
        }
        let p = substitute(&a.poly, point);
        let vs = p.vars();
        if vs.is_empty() {
            if !p.is_zero() {
                // The branch is empty.
                return true;
            }
            continue;
        }
        if vs.len() != 1 {
            continue;
        }
        let x = vs[0];
        let cs: Dense = p
            .coeffs_in(x)
            .iter()
            .map(|c| c.as_constant().unwrap_or_default())
            .collect();
        let Some(roots) = rational_roots(&cs) else { return false };
        for r in roots {
            point[x] = Some(r);
            let ok = solve_branch(atoms, vars, point, out);
            point[x] = None;
            if !ok {
                return false;
            }
        }
        return true;
    }
    false
}

/// The solution set of `phi` when it is a finite set of rational points.
/// Points assign every occurring variable; other entries are `None`.
pub fn finite_solutions(phi: &RFormula, nvars: usize) -> Option<Vec<Vec<Option<Rational>>>> {
    let phi = nnf(phi);
    let vars: Vec<usize> = occurring_indices(&phi).into_iter().collect();
    let branches = conjunctive_branches(&phi)?;
    let mut out = Vec::new();
    for b in &branches {
        let mut point = vec![None; nvars];
        if !solve_branch(b, &vars, &mut point, &mut out) {
            return None;
        }
    }
    // Sanity check against the original formula.
    for p in &out {
        let full: Vec<Rational> = p.iter().map(|v| v.clone().unwrap_or_default()).collect();
        if !eval_real_qf(&phi, &full).ok()? {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};
    use crate::real::parse_real;

    #[test]
    fn sturm_counts() {
        // x^2 + 1, x^2 - 2, x^3 - x
        assert_eq!(real_root_count(&[int(1), int(0), int(1)]), 0);
        assert_eq!(real_root_count(&[int(-2), int(0), int(1)]), 2);
        assert_eq!(real_root_count(&[int(0), int(-1), int(0), int(1)]), 3);
    }

    #[test]
    fn rational_root_search() {
        // 4x^4 - 4 = 4(x-1)(x+1)(x^2+1)
        let mut r = rational_roots(&[int(-4), int(0), int(0), int(0), int(4)]).unwrap();
        r.sort();
        assert_eq!(r, vec![int(-1), int(1)]);
        assert_eq!(rational_roots(&[int(-1), int(2)]).unwrap(), vec![rat(1, 2)]);
        assert!(rational_roots(&[int(-2), int(0), int(1)]).is_none());
    }

    #[test]
    fn finite_sets() {
        let f = parse_real("(x^2 - y^2)^2 - 1 == 0 and (x == 0 or y == 0)").unwrap();
        let pts = finite_solutions(&f.body, 2).unwrap();
        assert_eq!(pts.len(), 4);
        let g = parse_real("x^2 + y^2 - 1 == 0").unwrap();
        assert!(finite_solutions(&g.body, 2).is_none());
        let h = parse_real("x > 0 or x == 1").unwrap();
        assert!(finite_solutions(&h.body, 1).is_none());
    }
}
