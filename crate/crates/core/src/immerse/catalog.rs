//! The structured catalog of candidate immersions and a resumable sweep over it.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{verify_immersion, verify_injective_per_coordinate, Immersion, ImmersionCertificate, InjectivityCert, Interval};
use crate::poly::{int, ModPoly, Poly, PolyMap, PolySpec};
use crate::templates::{permutations, surjections_up_to_relabeling, Surjection, Template};
use crate::{Rational, Result};

/// Which maps the sweep tries, in this order: user maps, affine maps by
/// coefficient height, then polynomial curves of degree `2..=curve_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCatalog {
    pub affine_height: i64,
    pub curve_degree: u32,
    pub curve_height: i64,
    pub user: Vec<(PolyMap, InjectivityCert)>,
}

impl Default for CandidateCatalog {
    fn default() -> Self {
        CandidateCatalog { affine_height: 2, curve_degree: 3, curve_height: 1, user: Vec::new() }
    }
}

/// Small integers in the order 0, 1, −1, 2, −2, …
fn value(digit: usize) -> i64 {
    let h = digit.div_ceil(2) as i64;
    if digit % 2 == 1 {
        h
    } else {
        -h
    }
}

/// Integer vectors of `[-h, h]^len` with max-norm exactly `h`, lexicographic in [`value`] order.
fn shell(len: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let base = 2 * h as usize + 1;
    let mut digits = vec![0usize; len];
    let mut done = len == 0;
    core::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let v: Vec<i64> = digits.iter().map(|&d| value(d)).collect();
        let mut i = len;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
        }
        if v.iter().any(|x| x.abs() == h) {
            return Some(v);
        }
    })
}

fn affine_maps(m: usize, n: usize, height: i64) -> impl Iterator<Item = (PolyMap, InjectivityCert)> {
    (1..=height).flat_map(move |h| shell(n * (m + 1), h)).filter_map(move |v| {
        let comps = v
            .chunks(m + 1)
            .map(|c| {
                let mut p = Poly::constant(m, int(c[m]));
                for (j, &a) in c[..m].iter().enumerate() {
                    p = &p + &Poly::var(m, j).scale(&int(a));
                }
                p
            })
            .collect();
        let f = PolyMap::new(m, comps).ok()?;
        verify_injective_per_coordinate(&f, &InjectivityCert::AffineColumns).ok()?.then_some((f, InjectivityCert::AffineColumns))
    })
}

/// A component that is monotone on ℝ, else on (0, ∞).
fn curve_certificate(f: &PolyMap) -> Option<InjectivityCert> {
    for interval in [Interval::real_line(), Interval::positive()] {
        for component in 0..f.n() {
            let cert = InjectivityCert::SturmMonotone { component, interval: interval.clone() };
            if verify_injective_per_coordinate(f, &cert).unwrap_or(false) {
                return Some(cert);
            }
        }
    }
    None
}

fn curves(n: usize, degree: u32, height: i64) -> impl Iterator<Item = (PolyMap, InjectivityCert)> {
    let len = n * (degree as usize + 1);
    (1..=height).flat_map(move |h| shell(len, h)).filter_map(move |v| {
        let comps: Vec<Poly> = v
            .chunks(degree as usize + 1)
            .map(|c| {
                let mut p = Poly::zero(1);
                for (e, &a) in c.iter().enumerate() {
                    p = &p + &Poly::var(1, 0).pow(e as u32).scale(&int(a));
                }
                p
            })
            .collect();
        if comps.iter().all(|c| c.total_degree() <= 1) {
            return None;
        }
        let f = PolyMap::new(1, comps).ok()?;
        curve_certificate(&f).map(|c| (f, c))
    })
}

impl CandidateCatalog {
    /// Candidates `ℝ^m → ℝ^n` in sweep order.
    pub fn candidates(&self, m: usize, n: usize) -> Box<dyn Iterator<Item = (PolyMap, InjectivityCert)>> {
        let user: Vec<_> = self.user.iter().filter(|(f, _)| f.m() == m && f.n() == n).cloned().collect();
        let affine = affine_maps(m, n, self.affine_height);
        if m == 1 && self.curve_degree >= 2 {
            Box::new(user.into_iter().chain(affine).chain(curves(n, self.curve_degree, self.curve_height)))
        } else {
            Box::new(user.into_iter().chain(affine))
        }
    }
}

/// The Mersenne prime 2^61 − 1.
const PRIME: u64 = (1 << 61) - 1;

fn sample_point(count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| (i * i * 7919 + i * 104_729 + 1_000_003) % PRIME).collect()
}

/// Whether some ordering vanishes at the sample point, computed modulo a
/// prime. Reduction mod the prime is a ring map, so a composition that is
/// identically zero over ℚ vanishes there too; nonzero residues for every
/// ordering prove that no ordering composes to zero.
fn passes_prefilter(spec: Option<&ModPoly>, f: &PolyMap, pattern: &Template) -> bool {
    let Some(spec) = spec else { return true };
    let Some(components) = f.components().iter().map(|c| c.reduce_mod(PRIME)).collect::<Option<Vec<ModPoly>>>() else {
        return true;
    };
    let offsets: Vec<usize> = pattern
        .partitions()
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.block_count();
            Some(o)
        })
        .collect();
    let total = pattern.partitions().iter().map(|p| p.block_count()).sum();
    let z = sample_point(total);
    let images: Option<Vec<Vec<u64>>> = (0..pattern.k())
        .map(|r| {
            let input: Vec<u64> = pattern.partitions().iter().zip(&offsets).map(|(p, o)| z[o + p.block_of(r)]).collect();
            components.iter().map(|c| c.evaluate(&input)).collect::<Option<Vec<u64>>>()
        })
        .collect();
    let Some(images) = images else { return true };
    permutations(pattern.k()).iter().any(|sigma| {
        let pts: Vec<u64> = sigma.iter().flat_map(|&r| images[r].iter().copied()).collect();
        spec.evaluate(&pts).is_none_or(|v| v == 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ImmersionCertificate),
    /// The whole catalog was tried; this is not a proof of non-immersibility.
    NotFound,
    BudgetExhausted,
}

type Candidates = Box<dyn Iterator<Item = (PolyMap, InjectivityCert)>>;

/// A sweep over all surjections of the template (up to relabeling targets)
/// and all catalog candidates, resumable in slices.
pub struct ImmersionSearch {
    spec: Option<ModPoly>,
    poly: PolySpec,
    params: Vec<Rational>,
    source: Template,
    catalog: CandidateCatalog,
    surjections: Vec<Surjection>,
    next_surjection: usize,
    current: Option<(Surjection, Template, Candidates)>,
    tried: u64,
    found: Option<ImmersionCertificate>,
}

impl ImmersionSearch {
    pub fn new(p: &PolySpec, params: &[Rational], t: &Template, catalog: &CandidateCatalog) -> Result<Self> {
        let spec = p.specialize(params)?.poly().reduce_mod(PRIME);
        if t.k() != p.k() {
            return Err(crate::Error::ArityMismatch { expected: p.k(), found: t.k() });
        }
        Ok(ImmersionSearch {
            spec,
            poly: p.clone(),
            params: params.to_vec(),
            source: t.clone(),
            catalog: catalog.clone(),
            surjections: surjections_up_to_relabeling(t.d()),
            next_surjection: 0,
            current: None,
            tried: 0,
            found: None,
        })
    }

    /// Candidates examined so far.
    pub fn tried(&self) -> u64 {
        self.tried
    }

    pub fn is_exhausted(&self) -> bool {
        self.found.is_none() && self.current.is_none() && self.next_surjection == self.surjections.len()
    }

    /// Examines up to `slice` further candidates. Returns the certificate once one verifies.
    pub fn step(&mut self, slice: u64) -> Result<Option<ImmersionCertificate>> {
        if let Some(c) = &self.found {
            return Ok(Some(c.clone()));
        }
        let mut left = slice;
        while left > 0 {
            if self.current.is_none() {
                let Some(pi) = self.surjections.get(self.next_surjection).cloned() else {
                    return Ok(None);
                };
                self.next_surjection += 1;
                let collapsed = self.source.collapse_labeled(&pi)?;
                let it = self.catalog.candidates(pi.m(), self.poly.n());
                self.current = Some((pi, collapsed, it));
            }
            let (pi, collapsed, it) = self.current.as_mut().expect("set above");
            let Some((f, inj)) = it.next() else {
                self.current = None;
                continue;
            };
            left -= 1;
            self.tried += 1;
            if !passes_prefilter(self.spec.as_ref(), &f, collapsed) {
                continue;
            }
            if let Immersion::Verified(mut cert) = verify_immersion(&f, collapsed, pi, &self.poly, &self.params, &inj)? {
                cert.source = Some(self.source.clone());
                self.found = Some(cert.clone());
                self.current = None;
                return Ok(Some(cert));
            }
        }
        Ok(None)
    }
}

/// Runs the sweep to completion or until `max_candidates` have been tried.
pub fn search_immersion(
    p: &PolySpec,
    params: &[Rational],
    t: &Template,
    catalog: &CandidateCatalog,
    max_candidates: u64,
) -> Result<SearchOutcome> {
    let mut s = ImmersionSearch::new(p, params, t, catalog)?;
    if let Some(c) = s.step(max_candidates)? {
        return Ok(SearchOutcome::Found(c));
    }
    Ok(if s.is_exhausted() { SearchOutcome::NotFound } else { SearchOutcome::BudgetExhausted })
}
