//! Seeded random assignments and a sampling equivalence check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formula::{eval_qf, Atom, CFormula, Formula};
use crate::nf::{context, Ctx};
use crate::number::{GaussianRational, Rational};
use crate::realnf::{to_real_nf, RealNfOptions};
use crate::simplify::{Context, NEG, POS, ZERO};
use crate::term::{Assignment, Variable};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Component values: small integers and halves, so that special points such
/// as `0`, `1` and `I` are hit often.
fn component(rng: &mut ChaCha8Rng, mask: u8) -> Rational {
    let mut candidates: Vec<Rational> = Vec::new();
    for num in -6i64..=6 {
        for den in [1i64, 2] {
            let q = Rational::new(num.into(), den.into());
            let bit = match q.numer().sign() {
                num_bigint::Sign::Minus => NEG,
                num_bigint::Sign::NoSign => ZERO,
                num_bigint::Sign::Plus => POS,
            };
            if mask & bit != 0 && !candidates.contains(&q) {
                candidates.push(q);
            }
        }
    }
    if candidates.is_empty() {
        return Rational::from_integer(0.into());
    }
    candidates[rng.gen_range(0..candidates.len())].clone()
}

/// Generates assignments for `vars` that satisfy `assumptions`.
pub struct Sampler {
    rng: ChaCha8Rng,
    vars: Ctx,
    assumptions: Vec<Atom>,
    facts: Context,
}

impl Sampler {
    pub fn new(vars: &[Variable], assumptions: &[Atom], seed: u64) -> Self {
        let mut all: Vec<Variable> = vars.to_vec();
        for a in assumptions {
            let mut vs = Default::default();
            a.collect_vars(&mut vs);
            all.extend(vs);
        }
        let vars = context(all);
        let mut real = Vec::new();
        for a in assumptions {
            if let Ok(r) = to_real_nf(&Formula::Atom(a.clone()), &vars, RealNfOptions::default()) {
                match r.body {
                    Formula::Atom(x) => real.push(x),
                    Formula::And(v) => real.extend(v.into_iter().filter_map(|f| match f {
                        Formula::Atom(x) => Some(x),
                        _ => None,
                    })),
                    _ => {}
                }
            }
        }
        let facts = Context::from_assumptions(2 * vars.len(), &real);
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            vars,
            assumptions: assumptions.to_vec(),
            facts,
        }
    }

    pub fn vars(&self) -> &Ctx {
        &self.vars
    }

    fn draw(&mut self) -> Assignment {
        let n = self.vars.len();
        let mut values: Vec<GaussianRational> = Vec::with_capacity(n);
        for i in 0..n {
            // Occasionally tie a value to an earlier one.
            if i > 0 && self.rng.gen_bool(0.25) {
                let j = self.rng.gen_range(0..i);
                let v = match self.rng.gen_range(0..3) {
                    0 => values[j].clone(),
                    1 => values[j].conj(),
                    _ => -values[j].clone(),
                };
                values.push(v);
                continue;
            }
            let part = |k: usize, rng: &mut ChaCha8Rng| match self.facts.binding(k) {
                Some(c) => c.clone(),
                None => component(rng, self.facts.var_mask(k)),
            };
            let re = part(i, &mut self.rng);
            let im = part(n + i, &mut self.rng);
            values.push(GaussianRational::new(re, im));
        }
        self.vars.iter().cloned().zip(values).collect()
    }

}

impl Iterator for Sampler {
    type Item = Assignment;

    /// A random assignment satisfying the assumptions; `None` when 200
    /// draws in a row fail them.
    fn next(&mut self) -> Option<Assignment> {
        for _ in 0..200 {
            let s = self.draw();
            if self
                .assumptions
                .iter()
                .all(|a| a.eval(&s).unwrap_or(false))
            {
                return Some(s);
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub points: usize,
    pub agreed: usize,
    /// First assignment where the formulas differ.
    pub counterexample: Option<Vec<(String, String)>>,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none() && self.points > 0
    }
}

/// Compares two quantifier-free formulas at `points` random assignments
/// satisfying `assumptions`.
pub fn equivalent(
    f: &CFormula,
    g: &CFormula,
    assumptions: &[Atom],
    points: usize,
    seed: u64,
) -> Result<Equivalence> {
    let mut vars: Vec<Variable> = f.free_vars();
    vars.extend(g.free_vars());
    let mut sampler = Sampler::new(&vars, assumptions, seed);
    let mut out = Equivalence {
        points: 0,
        agreed: 0,
        counterexample: None,
    };
    for _ in 0..points {
        let Some(s) = sampler.next() else { break };
        out.points += 1;
        if eval_qf(f, &s)? == eval_qf(g, &s)? {
            out.agreed += 1;
        } else if out.counterexample.is_none() {
            let mut cx: Vec<(String, String)> =
                s.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            cx.sort();
            out.counterexample = Some(cx);
        }
    }
    Ok(out)
}
