//! Alephs indexed by ordinals below ω^ω, and the chromatic arithmetic that
//! depends on an explicit value of the continuum.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// An ordinal `ω^{e₁}·c₁ + ⋯ + ω^{e_r}·c_r` in Cantor normal form with
/// strictly descending exponents and positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdinalIndex {
    terms: Vec<(u32, u64)>,
}

impl OrdinalIndex {
    pub fn zero() -> Self {
        OrdinalIndex { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalIndex { terms: alloc::vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        OrdinalIndex { terms: alloc::vec![(1, 1)] }
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self> {
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::Parse("Cantor normal form coefficients must be positive".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Parse("Cantor normal form exponents must strictly descend".into()));
        }
        Ok(OrdinalIndex { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The finite part `c` in `L + c` with `L` zero or a limit.
    pub fn constant_term(&self) -> u64 {
        match self.terms.last() {
            Some(&(0, c)) => c,
            _ => 0,
        }
    }

    /// The limit part `L` in `L + c`.
    pub fn limit_part(&self) -> OrdinalIndex {
        let mut terms = self.terms.clone();
        if matches!(terms.last(), Some(&(0, _))) {
            terms.pop();
        }
        OrdinalIndex { terms }
    }

    pub fn is_successor(&self) -> bool {
        self.constant_term() > 0
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    /// `self + n` for finite `n`.
    pub fn add_finite(&self, n: u64) -> OrdinalIndex {
        let mut out = self.limit_part();
        let c = self.constant_term().checked_add(n).expect("finite index overflow");
        if c > 0 {
            out.terms.push((0, c));
        }
        out
    }

    /// `L + (c − n)` truncated at `L`.
    fn sub_finite_saturating(&self, n: u64) -> OrdinalIndex {
        let c = self.constant_term().saturating_sub(n);
        self.limit_part().add_finite(c)
    }
}

impl Ord for OrdinalIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdinalIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for OrdinalIndex {
    type Err = Error;

    /// Accepts sums of `n`, `w`, `w*c`, `w^e`, `w^e*c` in descending order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(alloc::format!("malformed ordinal index {s:?}"));
        let mut terms = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let term = if let Some(rest) = part.strip_prefix('w') {
                let (exp, coeff) = match rest.split_once('*') {
                    Some((e, c)) => (e, Some(c)),
                    None => (rest, None),
                };
                let exp = if exp.is_empty() {
                    1
                } else {
                    exp.strip_prefix('^').ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?
                };
                let coeff = match coeff {
                    Some(c) => c.parse::<u64>().map_err(|_| bad())?,
                    None => 1,
                };
                (exp, coeff)
            } else {
                (0, part.parse::<u64>().map_err(|_| bad())?)
            };
            terms.push(term);
        }
        OrdinalIndex::from_terms(terms)
    }
}

/// An infinite cardinal `ℵ_α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cardinal {
    index: OrdinalIndex,
}

impl Cardinal {
    pub fn aleph(index: OrdinalIndex) -> Self {
        Cardinal { index }
    }

    pub fn aleph_n(n: u64) -> Self {
        Cardinal { index: OrdinalIndex::finite(n) }
    }

    pub fn aleph_0() -> Self {
        Self::aleph_n(0)
    }

    pub fn index(&self) -> &OrdinalIndex {
        &self.index
    }

    /// `κ^{+n}`, the n-th successor.
    pub fn succ_iter(&self, n: u64) -> Cardinal {
        Cardinal { index: self.index.add_finite(n) }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "aleph:{}", self.index)
    }
}

impl FromStr for Cardinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .trim()
            .strip_prefix("aleph:")
            .ok_or_else(|| Error::Parse(alloc::format!("cardinal {s:?} must start with \"aleph:\"")))?;
        Ok(Cardinal { index: rest.parse()? })
    }
}

pub fn succ_iter(kappa: &Cardinal, n: u64) -> Cardinal {
    kappa.succ_iter(n)
}

pub fn compare(a: &Cardinal, b: &Cardinal) -> Ordering {
    a.cmp(b)
}

/// Depth of a hypergraph: a natural number or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(n) => write!(f, "{n}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Depth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Depth::Infinite),
            n => n
                .parse::<u32>()
                .map(Depth::Finite)
                .map_err(|_| Error::Parse(alloc::format!("depth {s:?} is neither an integer nor \"inf\""))),
        }
    }
}

/// An assumed value `2^ℵ₀ = ℵ_γ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuumSetting {
    pub gamma: OrdinalIndex,
    pub allow_invalid: bool,
}

impl ContinuumSetting {
    /// A setting that must pass [`validate_setting`].
    pub fn new(gamma: OrdinalIndex) -> Result<Self> {
        let s = ContinuumSetting { gamma, allow_invalid: false };
        if validate_setting(&s) {
            Ok(s)
        } else {
            Err(Error::Precondition(alloc::format!(
                "2^aleph_0 = aleph_{} is impossible: the index must be a successor ordinal",
                s.gamma
            )))
        }
    }

    pub fn aleph_n(n: u64) -> Result<Self> {
        Self::new(OrdinalIndex::finite(n))
    }

    pub fn overridden(gamma: OrdinalIndex) -> Self {
        ContinuumSetting { gamma, allow_invalid: true }
    }

    pub fn continuum(&self) -> Cardinal {
        Cardinal::aleph(self.gamma.clone())
    }
}

impl fmt::Display for ContinuumSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^aleph:0=aleph:{}", self.gamma)
    }
}

/// γ must be a successor (which forces γ ≥ 1): every limit below ω^ω has
/// cofinality ω, and the continuum has uncountable cofinality.
pub fn validate_setting(setting: &ContinuumSetting) -> bool {
    setting.allow_invalid || setting.gamma.is_successor()
}

/// Least κ with `κ^{+(e−1)} ≥ x`, the chromatic number of a template
/// hypergraph on a set of size `x` whose template has distinguisher size `e`.
pub fn least_chi(e: u64, x: &Cardinal) -> Cardinal {
    assert!(e >= 1, "distinguisher size is at least 1");
    Cardinal { index: x.index.sub_finite_saturating(e - 1) }
}

/// `χ(H) ≤ κ` for depth `δ`: `κ^{+δ} ≥ 2^ℵ₀`, always true at δ = ∞.
pub fn chi_le(delta: Depth, kappa: &Cardinal, setting: &ContinuumSetting) -> bool {
    match delta {
        Depth::Infinite => true,
        Depth::Finite(d) => kappa.index.add_finite(d as u64) >= setting.gamma,
    }
}

/// Least infinite κ with [`chi_le`]. When the true chromatic number is
/// finite this is still ℵ₀, the least infinite upper bound.
pub fn infinite_chromatic(delta: Depth, setting: &ContinuumSetting) -> Cardinal {
    match delta {
        Depth::Infinite => Cardinal::aleph_0(),
        Depth::Finite(d) => least_chi(d as u64 + 1, &setting.continuum()),
    }
}

/// Least m with `κ^{+m} ≥ 2^ℵ₀`; `None` when no finite m exists.
pub fn successor_gap(kappa: &Cardinal, setting: &ContinuumSetting) -> Option<u64> {
    if kappa.index >= setting.gamma {
        return Some(0);
    }
    if kappa.index.limit_part() == setting.gamma.limit_part() {
        Some(setting.gamma.constant_term() - kappa.index.constant_term())
    } else {
        None
    }
}
