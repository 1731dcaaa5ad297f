use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::format_rational;
use crate::{Error, Rational, Result};

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographic with variable 0 the most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over ℚ in `nvars` variables. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The image in (ℤ/m)[x] for a prime m; `None` when some coefficient's
    /// denominator is divisible by m.
    pub fn reduce_mod(&self, modulus: u64) -> Option<ModPoly> {
        let terms = self.terms.iter().map(|(m, c)| Some((m.0.clone(), residue(c, modulus)?))).collect::<Option<_>>()?;
        Some(ModPoly { nvars: self.nvars, modulus, terms })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Replaces variable `i` by `images[i]`; all images share one variable set.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map_or(0, Poly::nvars);
        if let Some(q) = images.iter().find(|q| q.nvars != target) {
            return Err(Error::ArityMismatch { expected: target, found: q.nvars });
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|q| vec![Poly::one(target), q.clone()]).collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Moves variable `i` to `map[i]` in a ring of `nvars` variables.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Fixes the variables `var` to rational values, keeping the arity.
    pub fn partial_evaluate(&self, assign: &[(usize, Rational)]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let mut v = c.clone();
            for (i, x) in assign {
                let d = e[*i];
                if d > 0 {
                    v *= num_traits::pow(x.clone(), d as usize);
                    e[*i] = 0;
                }
            }
            out.add_term(Monomial(e), v);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let d = m.0[var];
            if d == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), c * Rational::from_integer(d.into()));
        }
        out
    }

    /// Drops trailing variables that do not occur; errors if one occurs.
    pub fn with_nvars(&self, nvars: usize) -> Result<Poly> {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            if m.0.iter().skip(nvars).any(|&e| e > 0) {
                return Err(Error::ArityMismatch { expected: nvars, found: self.nvars });
            }
            let mut e: Vec<u32> = m.0.iter().copied().take(nvars).collect();
            e.resize(nvars, 0);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Linear coefficients and constant when the total degree is at most 1.
    pub fn as_affine(&self) -> Option<(Vec<Rational>, Rational)> {
        if self.total_degree() > 1 {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); self.nvars];
        let mut constant = Rational::zero();
        for (m, c) in &self.terms {
            match m.0.iter().position(|&e| e == 1) {
                Some(i) => coeffs[i] = c.clone(),
                None => constant = c.clone(),
            }
        }
        Some((coeffs, constant))
    }

    /// Human-readable rendering, leading term first.
    pub fn display_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format_rational(c));
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        out.push('*');
                        out.push_str(&name(i));
                    }
                    e => {
                        out.push('*');
                        out.push_str(&name(i));
                        out.push_str(&alloc::format!("^{e}"));
                    }
                }
            }
        }
        out
    }

    /// 64-bit FNV-1a digest of the canonical rendering.
    pub fn fingerprint(&self) -> u64 {
        let s = self.display_with(&|i| alloc::format!("v{i}"));
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in s.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// A polynomial with coefficients in ℤ/m, for fast nonvanishing tests.
#[derive(Debug, Clone)]
pub struct ModPoly {
    nvars: usize,
    modulus: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    pub fn evaluate(&self, point: &[u64]) -> Option<u64> {
        if point.len() != self.nvars {
            return None;
        }
        let m = self.modulus;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut v = *c;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    v = mul_mod(v, pow_mod(x, k as u64, m), m);
                }
            }
            acc = (acc + v) % m;
        }
        Some(acc)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// `c` in ℤ/m for a prime m, if its denominator is invertible there.
fn residue(c: &Rational, m: u64) -> Option<u64> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let md = BigInt::from(m);
    let reduce = |x: &BigInt| {
        let r = x % &md;
        let r = if r < BigInt::zero() { r + &md } else { r };
        r.to_u64().expect("reduced below the modulus")
    };
    let den = reduce(c.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(reduce(c.numer()), pow_mod(den, m - 2, m), m))
}
