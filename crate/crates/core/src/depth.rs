//! The depth classifier: refutations and immersions dovetailed over every
//! template with `d < k`, summarized as a certified depth interval.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cardinals::{chi_le, infinite_chromatic, successor_gap, Cardinal, ContinuumSetting, Depth};
use crate::embed::{
    refute_embedding_linear, replay_refutation, search_embedding, ExistentialOracle, NonEmbeddingCertificate,
    Refutation, SearchBudget, SearchStrategy, VerdictStatus,
};
use crate::immerse::{replay_immersion, CandidateCatalog, ImmersionCertificate, ImmersionSearch};
use crate::poly::PolySpec;
use crate::templates::{enumerate_templates, EnumerationBudget, Template};
use crate::{Error, Rational, Result};

/// Knobs of [`classify`]; all of them are recorded in the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyBudget {
    /// Largest axis size tried for refutations.
    pub grid_max: usize,
    /// Sub-grids with more points than this are not tried.
    pub max_grid_points: usize,
    /// Node budget of one refutation or rational search.
    pub branches: u64,
    pub catalog: CandidateCatalog,
    /// Catalog candidates examined per template per round.
    pub catalog_slice: u64,
    /// Height of the rational search used as positive evidence for
    /// nonlinear polynomials; 0 disables it.
    pub rational_height: i64,
    pub enumeration: EnumerationBudget,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget {
            grid_max: 8,
            max_grid_points: 16,
            branches: 200_000,
            catalog: CandidateCatalog::default(),
            catalog_slice: 256,
            rational_height: 1,
            enumeration: EnumerationBudget::default(),
        }
    }
}

impl ClassifyBudget {
    fn search(&self) -> SearchBudget {
        SearchBudget { max_nodes: self.branches, enumeration: self.enumeration }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenReason {
    /// Both searches ran to their limits.
    Exhausted,
    /// The search was stopped from outside (time limit).
    Interrupted,
    /// The template cannot move the interval any more, so it was not pursued.
    NotNeeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateStatus {
    /// `L(m^d, P)` does not embed.
    Refuted { m: usize, certificate: NonEmbeddingCertificate },
    /// `L(ℝ^m, P^π)` immerses, so every `L(M^d, P)` embeds.
    Confirmed(ImmersionCertificate),
    /// `max_sat` is the largest cube side shown to embed, if any.
    Open { max_sat: Option<usize>, reason: OpenReason },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateVerdict {
    pub template: Template,
    pub e: usize,
    pub status: TemplateStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KappaVerdict {
    Avoidable,
    Unavoidable,
    /// Avoidable exactly when the depth is at least `threshold`, which lies inside the interval.
    Conditional { threshold: Depth },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Avoidability {
    pub kappa: Cardinal,
    pub setting: ContinuumSetting,
    pub verdict: KappaVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub poly: PolySpec,
    pub params: Vec<Rational>,
    /// In the order of [`classify_order`].
    pub verdicts: Vec<TemplateVerdict>,
    pub depth_lo: Depth,
    pub depth_hi: Depth,
    pub decided: bool,
    pub avoidability: Vec<Avoidability>,
    pub budget: ClassifyBudget,
    pub rounds: u32,
    /// Whether some refutation was taken on an external backend's word.
    pub trusts_oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChromaticBound {
    Exact(Cardinal),
    /// `χ(H)` lies between the two, inclusive.
    Between { lower: Cardinal, upper: Cardinal },
}

/// Templates with `1 ≤ d < k`, ordered by `e` and then canonical order.
pub fn classify_order(k: usize) -> Result<Vec<Template>> {
    let mut all = Vec::new();
    for d in 1..k {
        all.extend(enumerate_templates(k, d)?);
    }
    all.sort_by(|a, b| (a.e(), a.d(), a).cmp(&(b.e(), b.d(), b)));
    Ok(all)
}

/// Size vectors with maximum `m` and at most `max_points` points, by product then lexicographically.
fn sub_grids(d: usize, m: usize, max_points: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v = vec![1usize; d];
    loop {
        if v.iter().max() == Some(&m) && v.iter().product::<usize>() <= max_points {
            out.push(v.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                out.sort_by_key(|s| (s.iter().product::<usize>(), s.clone()));
                return out;
            }
            i -= 1;
            if v[i] < m {
                v[i] += 1;
                break;
            }
            v[i] = 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Refuted,
    Confirmed,
    Open,
}

fn mark(status: Option<&TemplateStatus>) -> Mark {
    match status {
        Some(TemplateStatus::Refuted { .. }) => Mark::Refuted,
        Some(TemplateStatus::Confirmed(_)) => Mark::Confirmed,
        _ => Mark::Open,
    }
}

fn interval(k: usize, marks: &[(usize, Mark)]) -> (Depth, Depth) {
    let hi = marks
        .iter()
        .filter(|(_, m)| *m == Mark::Confirmed)
        .map(|(e, _)| Depth::Finite(*e as u32 - 1))
        .min()
        .unwrap_or(Depth::Infinite);
    if !marks.is_empty() && marks.iter().all(|(_, m)| *m == Mark::Refuted) {
        return (Depth::Infinite, hi);
    }
    let mut lo = 0;
    while lo + 1 < k && marks.iter().filter(|(e, _)| *e <= lo + 1).all(|(_, m)| *m == Mark::Refuted) {
        lo += 1;
    }
    (Depth::Finite(lo as u32), hi)
}

/// The interval implied by a list of verdicts: the upper end is the least
/// `e − 1` over confirmed templates, the lower end the largest `t` such that
/// every template with `e ≤ t` is refuted (∞ when all are).
pub fn derive_interval(k: usize, verdicts: &[TemplateVerdict]) -> (Depth, Depth) {
    let marks: Vec<(usize, Mark)> = verdicts.iter().map(|v| (v.e, mark(Some(&v.status)))).collect();
    interval(k, &marks)
}

fn state_interval(k: usize, states: &[State]) -> (Depth, Depth) {
    let marks: Vec<(usize, Mark)> = states.iter().map(|s| (s.e, mark(s.status.as_ref()))).collect();
    interval(k, &marks)
}

struct State {
    template: Template,
    e: usize,
    next_m: usize,
    max_sat: Option<usize>,
    refuter_done: bool,
    immersion: ImmersionSearch,
    status: Option<TemplateStatus>,
}

/// One refutation step at the next grid size. The step tries sub-grids of
/// `next_m^d`; a non-embedding of a sub-grid is one of the whole cube.
fn refutation_step(
    s: &mut State,
    p: &PolySpec,
    params: &[Rational],
    linear: bool,
    budget: &ClassifyBudget,
    oracle: &mut Option<&mut dyn ExistentialOracle>,
) -> Result<()> {
    let m = s.next_m;
    if m > budget.grid_max {
        s.refuter_done = true;
        return Ok(());
    }
    s.next_m += 1;
    let d = s.template.d();
    for sizes in sub_grids(d, m, budget.max_grid_points) {
        let verdict = if linear {
            refute_embedding_linear(p, params, &s.template, &sizes, budget.search())
        } else if let Some(o) = oracle.as_deref_mut() {
            search_embedding(p, params, &s.template, &sizes, SearchStrategy::ExternalOracle(o), budget.search())
        } else if budget.rational_height > 0 && sizes.iter().all(|&x| x == m) {
            search_embedding(
                p,
                params,
                &s.template,
                &sizes,
                SearchStrategy::RationalSearch { height: budget.rational_height },
                budget.search(),
            )
        } else {
            continue;
        };
        let verdict = match verdict {
            Ok(v) => v,
            Err(Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        match verdict.status {
            VerdictStatus::Unsat(certificate) => {
                s.status = Some(TemplateStatus::Refuted { m, certificate });
                return Ok(());
            }
            VerdictStatus::Sat(_) if sizes.iter().all(|&x| x == m) => s.max_sat = Some(m),
            _ => {}
        }
    }
    Ok(())
}

/// [`classify_with`] without an oracle or a time limit.
pub fn classify(p: &PolySpec, params: &[Rational], budget: &ClassifyBudget) -> Result<DepthReport> {
    classify_with(p, params, budget, None, &mut || false)
}

/// Round-robin over the templates in [`classify_order`]: each round gives
/// every live template one refutation step and one catalog slice. A template
/// leaves the rotation once it is settled or once its `e` exceeds the
/// current upper bound, and the run ends when the interval closes.
/// `stop` is polled between steps.
pub fn classify_with(
    p: &PolySpec,
    params: &[Rational],
    budget: &ClassifyBudget,
    mut oracle: Option<&mut dyn ExistentialOracle>,
    stop: &mut dyn FnMut() -> bool,
) -> Result<DepthReport> {
    let k = p.k();
    if k < 2 {
        return Err(Error::Precondition("classification needs k ≥ 2".into()));
    }
    if params.len() != p.l() {
        return Err(Error::ArityMismatch { expected: p.l(), found: params.len() });
    }
    let linear = p.specialize(params)?.x_degree() <= 1;
    let mut states: Vec<State> = classify_order(k)?
        .into_iter()
        .map(|t| {
            Ok(State {
                e: t.e(),
                immersion: ImmersionSearch::new(p, params, &t, &budget.catalog)?,
                template: t,
                next_m: 2,
                max_sat: None,
                refuter_done: false,
                status: None,
            })
        })
        .collect::<Result<_>>()?;
    let mut rounds = 0;
    let mut interrupted = false;
    'rounds: loop {
        let (lo, hi) = state_interval(k, &states);
        if lo == hi {
            break;
        }
        let mut progressed = false;
        rounds += 1;
        for i in 0..states.len() {
            if stop() {
                interrupted = true;
                break 'rounds;
            }
            let (_, hi) = state_interval(k, &states);
            let s = &mut states[i];
            if s.status.is_some() || Depth::Finite(s.e as u32) > hi {
                continue;
            }
            if !s.refuter_done {
                refutation_step(s, p, params, linear, budget, &mut oracle)?;
                progressed = true;
                if s.status.is_some() {
                    continue;
                }
            }
            if !s.immersion.is_exhausted() {
                if let Some(cert) = s.immersion.step(budget.catalog_slice)? {
                    s.status = Some(TemplateStatus::Confirmed(cert));
                }
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    let (lo, hi) = state_interval(k, &states);
    let verdicts = states
        .iter()
        .map(|s| {
            let reason = if Depth::Finite(s.e as u32) > hi || lo == hi {
                OpenReason::NotNeeded
            } else if interrupted {
                OpenReason::Interrupted
            } else {
                OpenReason::Exhausted
            };
            TemplateVerdict {
                template: s.template.clone(),
                e: s.e,
                status: s.status.clone().unwrap_or(TemplateStatus::Open { max_sat: s.max_sat, reason }),
            }
        })
        .collect::<Vec<_>>();
    let trusts_oracle = verdicts.iter().any(|v| {
        matches!(&v.status, TemplateStatus::Refuted { certificate, .. } if matches!(certificate.refutation, Refutation::Oracle { .. }))
    });
    Ok(DepthReport {
        poly: p.clone(),
        params: params.to_vec(),
        verdicts,
        depth_lo: lo,
        depth_hi: hi,
        decided: lo == hi,
        avoidability: Vec::new(),
        budget: budget.clone(),
        rounds,
        trusts_oracle,
    })
}

/// Problems found while re-checking a report; empty means it checks out.
pub fn verify_report(report: &DepthReport) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let p = &report.poly;
    for (i, v) in report.verdicts.iter().enumerate() {
        if v.e != v.template.e() {
            problems.push(alloc::format!("verdict {i}: recorded e does not match the template"));
        }
        match &v.status {
            TemplateStatus::Refuted { m, certificate } => {
                if certificate.template != v.template || certificate.params != report.params {
                    problems.push(alloc::format!("verdict {i}: certificate is for another instance"));
                } else if certificate.sizes.iter().any(|s| s > m) || certificate.sizes.len() != v.template.d() {
                    problems.push(alloc::format!("verdict {i}: refuted grid is not inside {m}^d"));
                } else if matches!(certificate.refutation, Refutation::LinearBranchExhaustion(_))
                    && !replay_refutation(certificate, p)?
                {
                    problems.push(alloc::format!("verdict {i}: transcript does not replay"));
                }
            }
            TemplateStatus::Confirmed(cert) => {
                let ok = cert.poly == *p
                    && cert.params == report.params
                    && cert.source.as_ref() == Some(&v.template)
                    && replay_immersion(cert)?;
                if !ok {
                    problems.push(alloc::format!("verdict {i}: immersion certificate does not replay"));
                }
            }
            TemplateStatus::Open { .. } => {}
        }
    }
    let expected: Vec<Template> = classify_order(p.k())?;
    if report.verdicts.iter().map(|v| &v.template).ne(expected.iter()) {
        problems.push("verdicts do not cover the templates with d < k".into());
    }
    let (lo, hi) = derive_interval(p.k(), &report.verdicts);
    if (lo, hi) != (report.depth_lo, report.depth_hi) || report.decided != (lo == hi) {
        problems.push(alloc::format!("interval [{lo}, {hi}] does not match the recorded one"));
    }
    for a in &report.avoidability {
        if classify_kappa(report, &a.kappa, &a.setting) != a.verdict {
            problems.push(alloc::format!("avoidability verdict for {} under {} does not follow", a.kappa, a.setting));
        }
    }
    Ok(problems)
}

/// κ-avoidability from the interval: avoidable iff `χ ≤ κ`, which holds
/// iff the depth is at least the successor gap from κ to the continuum.
pub fn classify_kappa(report: &DepthReport, kappa: &Cardinal, setting: &ContinuumSetting) -> KappaVerdict {
    if chi_le(report.depth_lo, kappa, setting) {
        KappaVerdict::Avoidable
    } else if !chi_le(report.depth_hi, kappa, setting) {
        KappaVerdict::Unavoidable
    } else {
        let threshold = successor_gap(kappa, setting).map_or(Depth::Infinite, |m| Depth::Finite(m as u32));
        KappaVerdict::Conditional { threshold }
    }
}

impl DepthReport {
    /// Fills [`DepthReport::avoidability`] for every pair.
    pub fn with_avoidability(mut self, kappas: &[Cardinal], settings: &[ContinuumSetting]) -> Self {
        self.avoidability.clear();
        for setting in settings {
            for kappa in kappas {
                let verdict = classify_kappa(&self, kappa, setting);
                self.avoidability.push(Avoidability { kappa: kappa.clone(), setting: setting.clone(), verdict });
            }
        }
        self
    }
}

/// The least infinite bound on `χ(H)`; a range while the depth is undecided.
pub fn chromatic_report(report: &DepthReport, setting: &ContinuumSetting) -> ChromaticBound {
    // larger depth means fewer colors
    let lower = infinite_chromatic(report.depth_hi, setting);
    let upper = infinite_chromatic(report.depth_lo, setting);
    if lower == upper {
        ChromaticBound::Exact(lower)
    } else {
        ChromaticBound::Between { lower, upper }
    }
}
