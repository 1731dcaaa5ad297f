//! Polynomial immersions of `L(ℝ^m, P^π)`, certified by exact identity testing.
//!
//! A map `f` is accepted for a collapsed template when one ordering of the
//! generic pattern (a fresh variable per coordinate block) composes with `p`
//! to the zero polynomial. Every edge of `L(ℝ^m, P^π)` is obtained from the
//! generic pattern by identifying variables, and identities survive that.

mod catalog;
pub mod sturm;

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::{compose, PolyMap, PolySpec};
use crate::templates::{permutations, Surjection, Template};
use crate::{Error, Rational, Result};

pub use catalog::{search_immersion, CandidateCatalog, ImmersionSearch, SearchOutcome};
use sturm::{count_roots, Endpoint, UPoly};

/// Open interval with possibly infinite ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Interval {
    pub fn real_line() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn positive() -> Self {
        Interval { lo: Some(Rational::zero()), hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|a| a < x) && self.hi.as_ref().is_none_or(|b| x < b)
    }
}

/// Why a map is one-to-one in each coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityCert {
    /// Affine map whose coefficient column for every input is nonzero.
    AffineColumns,
    /// Curve whose given component has a root-free derivative on the interval.
    SturmMonotone { component: usize, interval: Interval },
}

impl InjectivityCert {
    pub fn kind(&self) -> &'static str {
        match self {
            InjectivityCert::AffineColumns => "affine-columns",
            InjectivityCert::SturmMonotone { .. } => "sturm-monotone",
        }
    }

    /// The open region on which the map is certified.
    pub fn interval(&self) -> Option<&Interval> {
        match self {
            InjectivityCert::AffineColumns => None,
            InjectivityCert::SturmMonotone { interval, .. } => Some(interval),
        }
    }
}

/// Self-contained evidence that `map` immerses `L(ℝ^m, template)` into the
/// zero hypergraph of `poly` at `params`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImmersionCertificate {
    pub poly: PolySpec,
    pub params: Vec<Rational>,
    /// The template that was collapsed, when known.
    pub source: Option<Template>,
    pub pi: Surjection,
    /// The collapsed template `P^π`, with the source's point labels.
    pub template: Template,
    pub map: PolyMap,
    pub injectivity: InjectivityCert,
    /// Pattern point `ordering[i]` fills block `i` of `p`.
    pub ordering: Vec<usize>,
}

/// Why [`verify_immersion`] refused a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    NotInjective,
    /// Every ordering leaves a nonzero residual; fingerprints in ordering order.
    Residuals(Vec<(Vec<usize>, u64)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Immersion {
    Verified(ImmersionCertificate),
    Rejected(Rejection),
}

/// Whether `cert` proves `f` one-to-one in each coordinate.
pub fn verify_injective_per_coordinate(f: &PolyMap, cert: &InjectivityCert) -> Result<bool> {
    match cert {
        InjectivityCert::AffineColumns => {
            if !f.is_affine() {
                return Err(Error::Unsupported("affine-columns needs an affine map".into()));
            }
            Ok((0..f.m()).all(|j| f.components().iter().any(|c| !c.derivative(j).is_zero())))
        }
        InjectivityCert::SturmMonotone { component, interval } => {
            if f.m() != 1 {
                return Err(Error::Unsupported("sturm-monotone needs a curve (one input)".into()));
            }
            let c = f
                .components()
                .get(*component)
                .ok_or_else(|| Error::Precondition(alloc::format!("no component {component}")))?;
            if let (Some(a), Some(b)) = (&interval.lo, &interval.hi) {
                if a >= b {
                    return Ok(false);
                }
            }
            let d = UPoly::from_poly(&c.derivative(0))?;
            if d.is_zero() {
                return Ok(false);
            }
            // A root at a finite end is harmless in principle; we only accept the clean case.
            if [&interval.lo, &interval.hi].into_iter().flatten().any(|x| d.eval(x).is_zero()) {
                return Ok(false);
            }
            Ok(count_roots(&d, &interval.lo, &interval.hi)? == 0)
        }
    }
}

/// Accepts `f` for `collapsed` iff its injectivity certificate holds and some
/// ordering of the generic pattern composes with `p` to the zero polynomial.
pub fn verify_immersion(
    f: &PolyMap,
    collapsed: &Template,
    pi: &Surjection,
    p: &PolySpec,
    params: &[Rational],
    injectivity: &InjectivityCert,
) -> Result<Immersion> {
    if f.m() != collapsed.d() {
        return Err(Error::ArityMismatch { expected: collapsed.d(), found: f.m() });
    }
    if f.n() != p.n() {
        return Err(Error::ArityMismatch { expected: p.n(), found: f.n() });
    }
    if collapsed.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: collapsed.k() });
    }
    if pi.m() != collapsed.d() {
        return Err(Error::ArityMismatch { expected: collapsed.d(), found: pi.m() });
    }
    if !verify_injective_per_coordinate(f, injectivity)? {
        return Ok(Immersion::Rejected(Rejection::NotInjective));
    }
    let spec = p.specialize(params)?;
    let mut residuals = Vec::new();
    for sigma in permutations(p.k()) {
        let q = compose(&spec, f, collapsed, &sigma)?;
        if q.is_zero() {
            return Ok(Immersion::Verified(ImmersionCertificate {
                poly: p.clone(),
                params: params.to_vec(),
                source: None,
                pi: pi.clone(),
                template: collapsed.clone(),
                map: f.clone(),
                injectivity: injectivity.clone(),
                ordering: sigma,
            }));
        }
        residuals.push((sigma, q.fingerprint()));
    }
    Ok(Immersion::Rejected(Rejection::Residuals(residuals)))
}

/// Re-checks every claim of a certificate from its contents alone.
pub fn replay_immersion(cert: &ImmersionCertificate) -> Result<bool> {
    if let Some(src) = &cert.source {
        if src.d() != cert.pi.d() || src.k() != cert.template.k() {
            return Ok(false);
        }
        if !src.collapse_labeled(&cert.pi)?.is_isomorphic(&cert.template) {
            return Ok(false);
        }
    }
    if cert.pi.m() != cert.template.d()
        || cert.map.m() != cert.template.d()
        || cert.map.n() != cert.poly.n()
        || cert.template.k() != cert.poly.k()
        || cert.ordering.len() != cert.poly.k()
        || cert.params.len() != cert.poly.l()
    {
        return Ok(false);
    }
    if !crate::poly::is_permutation(&cert.ordering) {
        return Ok(false);
    }
    if !verify_injective_per_coordinate(&cert.map, &cert.injectivity).unwrap_or(false) {
        return Ok(false);
    }
    let spec = cert.poly.specialize(&cert.params)?;
    Ok(compose(&spec, &cert.map, &cert.template, &cert.ordering)?.is_zero())
}

/// Whether the curve `f` carries a complete `k`-uniform hypergraph: every
/// `k` points of its image (over the certified interval) form an edge.
pub fn complete_curve_check(
    p: &PolySpec,
    params: &[Rational],
    f: &PolyMap,
    injectivity: &InjectivityCert,
) -> Result<bool> {
    if f.m() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: f.m() });
    }
    let line = Template::line(p.k())?;
    let id = Surjection::identity(1);
    Ok(matches!(verify_immersion(f, &line, &id, p, params, injectivity)?, Immersion::Verified(_)))
}

/// The rendered map, for logs.
pub fn describe_map(f: &PolyMap) -> String {
    let names = |i: usize| alloc::format!("t{i}");
    let parts: Vec<String> = f.components().iter().map(|c| c.display_with(&names)).collect();
    alloc::format!("({})", parts.join(", "))
}
