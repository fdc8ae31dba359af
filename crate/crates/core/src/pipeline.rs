//! Pseudo-complex quantifier elimination: real normal form, purification,
//! real elimination, back substitution and complex reinterpretation.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::formula::{prenexify, Atom, CFormula, Formula};
use crate::nf::{context, Ctx};
use crate::poly::Poly;
use crate::real::{RFormula, RealAtom, RealFormula};
use crate::realnf::{to_real_nf, to_real_nf_with, Bindings, RealNf, RealNfOptions};
use crate::reinterpret::{reinterpret_formula, NfStyle};
use crate::simplify::{simplify_in, Context};
use crate::term::Variable;

/// `z -> (z__re, z__im)` for every variable of a context. The real variable
/// list is `[z1__re .. zn__re, z1__im .. zn__im]`, matching the generator
/// numbering of [`RealNf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurificationMap {
    pub ctx: Ctx,
    pub real_vars: Ctx,
}

impl PurificationMap {
    pub fn new(ctx: &Ctx) -> Result<Self> {
        if let Some(v) = ctx.iter().find(|v| v.is_reserved()) {
            return Err(Error::NameCollision(v.to_string()));
        }
        let real_vars: Ctx = ctx
            .iter()
            .map(Variable::re_part)
            .chain(ctx.iter().map(Variable::im_part))
            .collect::<Vec<_>>()
            .into();
        Ok(PurificationMap {
            ctx: ctx.clone(),
            real_vars,
        })
    }

    pub fn re(&self, z: &Variable) -> Option<&Variable> {
        let i = self.ctx.iter().position(|w| w == z)?;
        Some(&self.real_vars[i])
    }

    pub fn im(&self, z: &Variable) -> Option<&Variable> {
        let i = self.ctx.iter().position(|w| w == z)?;
        Some(&self.real_vars[self.ctx.len() + i])
    }
}

/// Replaces `Re(z)`, `Im(z)` by real variables and doubles every quantifier.
pub fn purify(phi: &RealNf) -> Result<(RealFormula, PurificationMap)> {
    let m = PurificationMap::new(&phi.ctx)?;
    let body = double_quantifiers(&phi.body, &m)?;
    Ok((
        RealFormula {
            vars: m.real_vars.clone(),
            body,
        },
        m,
    ))
}

fn double_quantifiers(phi: &RFormula, m: &PurificationMap) -> Result<RFormula> {
    let rec = |f: &RFormula| double_quantifiers(f, m);
    Ok(match phi {
        Formula::Exists(z, b) | Formula::Forall(z, b) => {
            let unknown = || Error::Context(format!("quantified variable `{z}` is not in the context"));
            let re = m.re(z).ok_or_else(unknown)?.clone();
            let im = m.im(z).ok_or_else(unknown)?.clone();
            let inner = rec(b)?;
            if matches!(phi, Formula::Exists(..)) {
                Formula::Exists(re, Box::new(Formula::Exists(im, Box::new(inner))))
            } else {
                Formula::Forall(re, Box::new(Formula::Forall(im, Box::new(inner))))
            }
        }
        Formula::Top | Formula::Bot | Formula::Atom(_) => phi.clone(),
        Formula::Not(a) => Formula::Not(Box::new(rec(a)?)),
        Formula::And(v) => Formula::And(v.iter().map(rec).collect::<Result<_>>()?),
        Formula::Or(v) => Formula::Or(v.iter().map(rec).collect::<Result<_>>()?),
        Formula::Implies(a, b) => Formula::Implies(Box::new(rec(a)?), Box::new(rec(b)?)),
        Formula::Iff(a, b) => Formula::Iff(Box::new(rec(a)?), Box::new(rec(b)?)),
    })
}

/// Substitutes `Re(z)`, `Im(z)` back for the real variables.
pub fn unpurify(psi: &RealFormula, m: &PurificationMap) -> Result<RealNf> {
    if !psi.body.is_quantifier_free() {
        return Err(Error::Context("expected a quantifier-free formula".into()));
    }
    let index: HashMap<&Variable, usize> = m.real_vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let map = psi
        .vars
        .iter()
        .map(|v| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::Context(format!("unknown auxiliary variable `{v}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = m.real_vars.len();
    let body = psi
        .body
        .map_atoms(&mut |a| Formula::Atom(RealAtom::new(a.poly.remap(&map, n), a.rel)));
    Ok(RealNf {
        ctx: m.ctx.clone(),
        body,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QeStats {
    pub wall_seconds: f64,
    pub backend_calls: usize,
    /// Quantifiers before and after purification.
    pub quantifiers: usize,
    pub real_quantifiers: usize,
}

/// A quantifier elimination request.
#[derive(Clone, Debug)]
pub struct QeJob {
    pub input: CFormula,
    /// Atoms over free variables, assumed to hold.
    pub assumptions: Vec<Atom>,
    pub backend: Backend,
    pub output_nf: NfStyle,
    pub lenient: bool,
    /// External backend budget; the environment default otherwise.
    pub timeout: Option<Duration>,
    pub stats: QeStats,
}

impl QeJob {
    pub fn new(input: CFormula) -> Self {
        QeJob {
            input,
            assumptions: Vec::new(),
            backend: Backend::Builtin,
            output_nf: NfStyle::Conjugate,
            lenient: false,
            timeout: None,
            stats: QeStats::default(),
        }
    }

    pub fn assume(mut self, atoms: impl IntoIterator<Item = Atom>) -> Self {
        self.assumptions.extend(atoms);
        self
    }

    pub fn backend(mut self, b: Backend) -> Self {
        self.backend = b;
        self
    }

    pub fn output_nf(mut self, s: NfStyle) -> Self {
        self.output_nf = s;
        self
    }

    pub fn lenient(mut self, on: bool) -> Self {
        self.lenient = on;
        self
    }
}

/// Real atoms of the assumptions over the Cartesian generators of `ctx`.
/// Disjunctive pieces (from `!=`) carry no usable fact and are dropped.
fn assumption_atoms(assumptions: &[Atom], ctx: &Ctx, opts: RealNfOptions) -> Result<Vec<RealAtom>> {
    let mut out = Vec::new();
    for a in assumptions {
        let r = to_real_nf(&Formula::Atom(a.clone()), ctx, opts)?;
        match r.body {
            Formula::Atom(x) => out.push(x),
            Formula::And(v) => out.extend(v.into_iter().filter_map(|f| match f {
                Formula::Atom(x) => Some(x),
                _ => None,
            })),
            _ => {}
        }
    }
    Ok(out)
}

/// Eliminates all quantifiers of `job.input`. The result `r` satisfies
/// `A -> (input <-> r)` for the conjunction `A` of the assumptions.
pub fn qe(job: &mut QeJob) -> Result<CFormula> {
    let start = Instant::now();
    let phi = prenexify(&job.input);
    let free = phi.free_vars();
    let bound = phi.bound_vars();
    let mut vars = phi.all_vars();
    for a in &job.assumptions {
        let mut vs = Default::default();
        a.collect_vars(&mut vs);
        if let Some(v) = vs.iter().find(|v| bound.contains(v) && !free.contains(v)) {
            return Err(Error::Context(format!(
                "assumption `{a}` mentions the bound variable `{v}`"
            )));
        }
        vars.extend(vs);
    }
    let ctx = context(vars);
    let opts = RealNfOptions {
        lenient: job.lenient,
    };
    let assumed = assumption_atoms(&job.assumptions, &ctx, opts)?;
    let n = 2 * ctx.len();
    let facts = Context::from_assumptions(n, &assumed);
    let bindings: Bindings = facts
        .bindings()
        .map(|(i, c)| (i, Poly::constant(n, c.clone())))
        .collect();

    let real = to_real_nf_with(&phi, &ctx, opts, &bindings)?;
    let (psi, m) = purify(&real)?;
    job.stats.quantifiers = phi.quantifier_count();
    job.stats.real_quantifiers = psi.body.quantifier_count();

    let eliminated = if psi.body.is_quantifier_free() {
        psi
    } else {
        job.stats.backend_calls += 1;
        job.backend.eliminate(&psi, &facts, job.timeout)?
    };
    let eliminated = RealFormula {
        body: simplify_in(&eliminated.body, &reindexed(&facts, &eliminated, &m)?),
        vars: eliminated.vars,
    };
    let back = unpurify(&eliminated, &m)?;
    let body = simplify_in(&back.body, &facts);
    let out = reinterpret_formula(&body, &ctx, job.output_nf);
    job.stats.wall_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// The facts restated for a backend answer whose variable list may differ.
fn reindexed(facts: &Context, psi: &RealFormula, m: &PurificationMap) -> Result<Context> {
    if psi.vars == m.real_vars {
        return Ok(facts.clone());
    }
    // Unknown variables are reported by `unpurify`; no facts apply to them.
    Ok(Context::new(psi.vars.len()))
}

/// Decides a sentence.
pub fn decide(theta: &CFormula) -> Result<bool> {
    decide_job(&mut QeJob::new(theta.clone()))
}

/// Decides the sentence of `job`, using its backend and options.
pub fn decide_job(job: &mut QeJob) -> Result<bool> {
    let free = job.input.free_vars();
    if !free.is_empty() {
        let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
        return Err(Error::FreeVariable(names.join(", ")));
    }
    match qe(job)? {
        Formula::Top => Ok(true),
        Formula::Bot => Ok(false),
        other => Err(Error::IncompleteSimplification(other.to_string())),
    }
}
