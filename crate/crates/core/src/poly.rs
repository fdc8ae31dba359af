//! Sparse multivariate polynomials in a fixed number of generators.
//!
//! Monomials are ordered degree-lexicographically: first by total degree, then
//! by comparing exponents starting from the highest generator index. With
//! generators listed as `x0 < x1 < ... < x(n-1)` this is the usual deglex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::number::{Coeff, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u32]>,
}

fn checked_deg(a: u32, b: u32) -> u32 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("exponent overflow: degree exceeds {}", u32::MAX))
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn var(nvars: usize, i: usize, k: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = k;
        Monomial {
            deg: k,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        let deg = exps.iter().fold(0, |d, &e| checked_deg(d, e));
        Monomial {
            deg,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| checked_deg(a, b))
            .collect();
        Monomial {
            deg: checked_deg(self.deg, other.deg),
            exps: exps.into_boxed_slice(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(a.checked_sub(b)?);
        }
        Some(Monomial {
            deg: self.deg - other.deg,
            exps: exps.into_boxed_slice(),
        })
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_exps(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    fn with_exp(&self, i: usize, k: u32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = k;
        Monomial::from_exps(exps)
    }

    /// Exponent vector permuted into a context of `nvars` generators.
    fn remap(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                exps[map[i]] += e;
            }
        }
        Monomial::from_exps(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (a, b) in self.exps.iter().rev().zip(other.exps.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Polynomial with coefficients in `C` over `nvars` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i, 1), C::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: C) -> Self {
        assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.terms.len() < other.terms.len() {
            return other.add(self);
        }
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.negated());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|c| c.times(k))
    }

    pub fn mul_monomial(&self, m: &Monomial, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.times(k)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        r
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = f(c);
                    (!d.is_zero()).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn has_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// Indices of the generators that actually occur.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.has_var(i)).collect()
    }

    /// Coefficients `[c0, c1, ..]` with `self = sum ck * x_i^k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let k = m.exp(i) as usize;
            out[k].add_term(m.with_exp(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(nvars: usize, i: usize, coeffs: &[Self]) -> Self {
        let mut r = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::var(nvars, i, k as u32);
            for (m, a) in &c.terms {
                r.add_term(m.mul(&xk), a.clone());
            }
        }
        r
    }

    /// Replaces generator `i` by the polynomial `q`.
    pub fn subst_var(&self, i: usize, q: &Self) -> Self {
        if !self.has_var(i) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(i);
        // Horner evaluation in q.
        let mut r = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            r = r.mul(q).add(c);
        }
        r
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.exp(i);
            if k > 0 {
                let kc = C::from_rational(Rational::from_integer(k.into()));
                r.add_term(m.with_exp(i, k - 1), c.times(&kc));
            }
        }
        r
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "evaluation point arity mismatch");
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps.iter()) {
                for _ in 0..e {
                    t = t.times(x);
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Greatest monomial dividing every term (the unit monomial for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `images[i]` for generator `i`, converting coefficients with `conv`.
    pub fn compose<D: Coeff>(&self, images: &[Poly<D>], conv: impl Fn(&C) -> D) -> Poly<D> {
        assert_eq!(images.len(), self.nvars, "compose arity mismatch");
        let target = images.first().map_or(0, Poly::nvars);
        let mut powers: Vec<Vec<Poly<D>>> = images
            .iter()
            .map(|_| vec![Poly::one(target)])
            .collect();
        let mut r = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, conv(c));
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i]);
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Moves the polynomial into a context of `nvars` generators, generator
    /// `i` becoming generator `map[i]`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars, "remap table arity mismatch");
        let mut r = Self::zero(nvars);
        for (m, c) in &self.terms {
            r.add_term(m.remap(map, nvars), c.clone());
        }
        r
    }
}

impl Poly<Rational> {
    /// `lcm` of the coefficient denominators and `gcd` of the numerators, as a
    /// positive rational `c` with `self / c` integral and primitive.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num.abs(), den)
    }
}
