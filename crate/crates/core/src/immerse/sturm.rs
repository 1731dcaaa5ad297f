//! Real root counting for univariate rational polynomials.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::poly::Poly;
use crate::{Error, Rational, Result};

/// Dense coefficients, constant first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: p.nvars() });
        }
        let mut c = alloc::vec![Rational::zero(); p.total_degree() as usize + 1];
        for (m, v) in p.terms() {
            c[m.exponents()[0] as usize] = v.clone();
        }
        Ok(UPoly::new(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect())
    }

    fn rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let q = r.last().expect("nonempty") / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Sign of the value as `x → +∞` (`positive`) or `x → −∞`.
    fn sign_at_infinity(&self, positive: bool) -> Ordering {
        match self.degree() {
            None => Ordering::Equal,
            Some(d) => {
                let s = self.0[d].signum();
                let s = if !positive && d % 2 == 1 { -s } else { s };
                s.cmp(&Rational::zero())
            }
        }
    }
}

/// `p, p′, −rem(p, p′), …` down to a constant.
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = Vec::new();
    if p.is_zero() {
        return seq;
    }
    seq.push(p.clone());
    let mut next = p.derivative();
    while !next.is_zero() {
        let prev = seq.last().expect("nonempty").clone();
        seq.push(next.clone());
        let r = prev.rem(&next);
        next = UPoly::new(r.0.into_iter().map(|c| -c).collect());
    }
    seq
}

/// An endpoint of an open interval; `None` is infinite.
pub type Endpoint = Option<Rational>;

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let nz: Vec<Ordering> = signs.filter(|s| *s != Ordering::Equal).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn variations_at(seq: &[UPoly], x: &Endpoint, upper: bool) -> usize {
    match x {
        Some(v) => variations(seq.iter().map(|q| q.eval(v).cmp(&Rational::zero()))),
        None => variations(seq.iter().map(|q| q.sign_at_infinity(upper))),
    }
}

/// Distinct real roots in the open interval `(lo, hi)`. Finite endpoints
/// must not be roots.
pub fn count_roots(p: &UPoly, lo: &Endpoint, hi: &Endpoint) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Precondition("the zero polynomial has infinitely many roots".into()));
    }
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            return Err(Error::Precondition("empty interval".into()));
        }
    }
    for v in [lo, hi].into_iter().flatten() {
        if p.eval(v).is_zero() {
            return Err(Error::Precondition("interval endpoint is a root".into()));
        }
    }
    let seq = sturm_sequence(p);
    Ok(variations_at(&seq, lo, false) - variations_at(&seq, hi, true))
}
