//! JSON forms of every object the tool reads or writes.
//!
//! Rationals are `"n"` or `"n/d"` strings. Polynomials list their terms
//! leading term first with exponents keyed by variable name. Evidence
//! documents carry a `kind` tag and a SHA-256 `digest` of their canonical
//! serialization without the digest field.

use std::collections::BTreeMap;

use hyperchrom_core::cardinals::{Cardinal, ContinuumSetting, Depth};
use hyperchrom_core::depth::{
    Avoidability, ClassifyBudget, DepthReport, KappaVerdict, OpenReason, TemplateStatus, TemplateVerdict,
};
use hyperchrom_core::embed::{
    BranchNode, EmbeddingWitness, LinearTranscript, NonEmbeddingCertificate, OracleQuery, Refutation,
};
use hyperchrom_core::immerse::{CandidateCatalog, ImmersionCertificate, InjectivityCert, Interval};
use hyperchrom_core::poly::{format_rational, parse_rational, Poly, PolyMap, PolySpec};
use hyperchrom_core::templates::{EnumerationBudget, FiniteHypergraph, Grid, Partition, Surjection, Template};
use hyperchrom_core::Rational;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{Error, Result};

fn q(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

fn qs(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| q(s)).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateJson {
    pub k: usize,
    pub d: usize,
    pub partitions: Vec<Vec<Vec<usize>>>,
}

impl TemplateJson {
    pub fn from_template(t: &Template) -> Self {
        TemplateJson { k: t.k(), d: t.d(), partitions: t.partitions().iter().map(Partition::blocks).collect() }
    }

    pub fn to_template(&self) -> Result<Template> {
        if self.partitions.len() != self.d {
            return Err(Error::Format(format!("template declares d={} but lists {} partitions", self.d, self.partitions.len())));
        }
        let parts = self.partitions.iter().map(|b| Partition::from_blocks(self.k, b)).collect::<std::result::Result<_, _>>()?;
        Ok(Template::new(self.k, parts)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphJson {
    pub k: usize,
    /// Grid coordinates of each vertex.
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<Vec<usize>>,
}

impl HypergraphJson {
    pub fn from_grid(h: &FiniteHypergraph, grid: &Grid) -> Self {
        HypergraphJson {
            k: h.k(),
            vertices: grid.points().map(|p| p.coords().to_vec()).collect(),
            edges: h.edges().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub exps: BTreeMap<String, u32>,
}

fn terms_of(p: &Poly, name: &dyn Fn(usize) -> String) -> Vec<TermJson> {
    p.terms()
        .rev()
        .map(|(m, c)| TermJson {
            coeff: format_rational(c),
            exps: m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (name(i), e)).collect(),
        })
        .collect()
}

fn poly_of(terms: &[TermJson], nvars: usize, index: &dyn Fn(&str) -> Result<usize>) -> Result<Poly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut e = vec![0u32; nvars];
        for (name, &x) in &t.exps {
            e[index(name)?] += x;
        }
        out.push((e, q(&t.coeff)?));
    }
    Ok(Poly::from_terms(nvars, out)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub k: usize,
    pub n: usize,
    #[serde(default)]
    pub l: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_spec(p: &PolySpec) -> Self {
        PolyJson { k: p.k(), n: p.n(), l: p.l(), terms: terms_of(p.poly(), &|i| p.var_name(i)) }
    }

    pub fn to_spec(&self) -> Result<PolySpec> {
        let shape = PolySpec::new(self.k, self.n, self.l, Poly::zero(self.k * self.n + self.l))?;
        let poly = poly_of(&self.terms, shape.nvars(), &|s| Ok(shape.var_index(s)?))?;
        Ok(PolySpec::new(self.k, self.n, self.l, poly)?)
    }
}

/// A polynomial over named variables, as used by maps and oracle queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPolyJson {
    pub terms: Vec<TermJson>,
}

fn named_index<'a>(names: &'a [String]) -> impl Fn(&str) -> Result<usize> + 'a {
    move |s: &str| names.iter().position(|n| n == s).ok_or_else(|| Error::Format(format!("unknown variable {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub m: usize,
    pub n: usize,
    pub components: Vec<NamedPolyJson>,
}

impl MapJson {
    pub fn from_map(f: &PolyMap) -> Self {
        let comps = f.components().iter().map(|c| NamedPolyJson { terms: terms_of(c, &|i| format!("t{i}")) }).collect();
        MapJson { m: f.m(), n: f.n(), components: comps }
    }

    pub fn to_map(&self) -> Result<PolyMap> {
        if self.components.len() != self.n {
            return Err(Error::Format(format!("map declares n={} but lists {} components", self.n, self.components.len())));
        }
        let names: Vec<String> = (0..self.m).map(|i| format!("t{i}")).collect();
        let comps = self.components.iter().map(|c| poly_of(&c.terms, self.m, &named_index(&names))).collect::<Result<_>>()?;
        Ok(PolyMap::new(self.m, comps)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalJson {
    pub lo: Option<String>,
    pub hi: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InjectivityJson {
    AffineColumns,
    SturmMonotone { component: usize, interval: IntervalJson },
}

impl InjectivityJson {
    fn from_cert(c: &InjectivityCert) -> Self {
        match c {
            InjectivityCert::AffineColumns => InjectivityJson::AffineColumns,
            InjectivityCert::SturmMonotone { component, interval } => InjectivityJson::SturmMonotone {
                component: *component,
                interval: IntervalJson {
                    lo: interval.lo.as_ref().map(format_rational),
                    hi: interval.hi.as_ref().map(format_rational),
                },
            },
        }
    }

    fn to_cert(&self) -> Result<InjectivityCert> {
        Ok(match self {
            InjectivityJson::AffineColumns => InjectivityCert::AffineColumns,
            InjectivityJson::SturmMonotone { component, interval } => InjectivityCert::SturmMonotone {
                component: *component,
                interval: Interval {
                    lo: interval.lo.as_deref().map(q).transpose()?,
                    hi: interval.hi.as_deref().map(q).transpose()?,
                },
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderingsJson {
    pub generic: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImmersionJson {
    pub poly: PolyJson,
    pub params: Vec<String>,
    pub source: Option<TemplateJson>,
    pub pi: Vec<usize>,
    pub template: TemplateJson,
    pub map: MapJson,
    pub injectivity: InjectivityJson,
    pub orderings: OrderingsJson,
}

impl ImmersionJson {
    pub fn from_cert(c: &ImmersionCertificate) -> Self {
        ImmersionJson {
            poly: PolyJson::from_spec(&c.poly),
            params: strs(&c.params),
            source: c.source.as_ref().map(TemplateJson::from_template),
            pi: c.pi.map().to_vec(),
            template: TemplateJson::from_template(&c.template),
            map: MapJson::from_map(&c.map),
            injectivity: InjectivityJson::from_cert(&c.injectivity),
            orderings: OrderingsJson { generic: c.ordering.clone() },
        }
    }

    pub fn to_cert(&self) -> Result<ImmersionCertificate> {
        Ok(ImmersionCertificate {
            poly: self.poly.to_spec()?,
            params: qs(&self.params)?,
            source: self.source.as_ref().map(TemplateJson::to_template).transpose()?,
            pi: Surjection::from_map(self.pi.clone())?,
            template: self.template.to_template()?,
            map: self.map.to_map()?,
            injectivity: self.injectivity.to_cert()?,
            ordering: self.orderings.generic.clone(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub poly: PolyJson,
    pub params: Vec<String>,
    pub template: TemplateJson,
    pub sizes: Vec<usize>,
    /// One vector per grid point, in grid index order.
    pub assignment: Vec<Vec<String>>,
}

impl WitnessJson {
    pub fn from_witness(w: &EmbeddingWitness, p: &PolySpec) -> Self {
        WitnessJson {
            poly: PolyJson::from_spec(p),
            params: strs(&w.params),
            template: TemplateJson::from_template(&w.template),
            sizes: w.sizes.clone(),
            assignment: w.assignment.iter().map(|v| strs(v)).collect(),
        }
    }

    pub fn to_witness(&self) -> Result<(EmbeddingWitness, PolySpec)> {
        let w = EmbeddingWitness {
            template: self.template.to_template()?,
            sizes: self.sizes.clone(),
            assignment: self.assignment.iter().map(|v| qs(v)).collect::<Result<_>>()?,
            params: qs(&self.params)?,
        };
        Ok((w, self.poly.to_spec()?))
    }
}

/// A branch tree node, listed in preorder with a branch's children following it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NodeJson {
    Branch { edge: usize, orders: Vec<Vec<usize>> },
    Inconsistent,
    Collision { pair: [usize; 2] },
}

fn flatten(node: &BranchNode, out: &mut Vec<NodeJson>) {
    match node {
        BranchNode::Inconsistent => out.push(NodeJson::Inconsistent),
        BranchNode::Collision(a, b) => out.push(NodeJson::Collision { pair: [*a, *b] }),
        BranchNode::Branch { edge, children } => {
            out.push(NodeJson::Branch { edge: *edge, orders: children.iter().map(|(s, _)| s.clone()).collect() });
            for (_, c) in children {
                flatten(c, out);
            }
        }
    }
}

fn unflatten(nodes: &[NodeJson], pos: &mut usize) -> Result<BranchNode> {
    let node = nodes.get(*pos).ok_or_else(|| Error::Format("transcript ends inside a branch".into()))?;
    *pos += 1;
    Ok(match node {
        NodeJson::Inconsistent => BranchNode::Inconsistent,
        NodeJson::Collision { pair } => BranchNode::Collision(pair[0], pair[1]),
        NodeJson::Branch { edge, orders } => {
            let mut children = Vec::with_capacity(orders.len());
            for o in orders {
                children.push((o.clone(), unflatten(nodes, pos)?));
            }
            BranchNode::Branch { edge: *edge, children }
        }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptJson {
    pub edges: Vec<Vec<usize>>,
    pub nodes: Vec<NodeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryJson {
    pub vars: Vec<String>,
    pub equalities: Vec<NamedPolyJson>,
    pub disequalities: Vec<NamedPolyJson>,
}

impl QueryJson {
    pub fn from_query(q: &OracleQuery) -> Self {
        let name = |i: usize| q.vars[i].clone();
        let conv = |ps: &[Poly]| ps.iter().map(|p| NamedPolyJson { terms: terms_of(p, &name) }).collect();
        QueryJson { vars: q.vars.clone(), equalities: conv(&q.equalities), disequalities: conv(&q.disequalities) }
    }

    pub fn to_query(&self) -> Result<OracleQuery> {
        let idx = named_index(&self.vars);
        let conv = |ps: &[NamedPolyJson]| ps.iter().map(|p| poly_of(&p.terms, self.vars.len(), &idx)).collect::<Result<Vec<_>>>();
        Ok(OracleQuery { vars: self.vars.clone(), equalities: conv(&self.equalities)?, disequalities: conv(&self.disequalities)? })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RefutationJson {
    LinearBranchExhaustion { transcript: TranscriptJson },
    Oracle { backend: String, query: QueryJson },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonEmbeddingJson {
    pub poly: PolyJson,
    pub params: Vec<String>,
    pub template: TemplateJson,
    pub sizes: Vec<usize>,
    #[serde(flatten)]
    pub refutation: RefutationJson,
}

impl NonEmbeddingJson {
    pub fn from_cert(c: &NonEmbeddingCertificate, p: &PolySpec) -> Self {
        let refutation = match &c.refutation {
            Refutation::LinearBranchExhaustion(tr) => {
                let mut nodes = Vec::new();
                flatten(&tr.root, &mut nodes);
                RefutationJson::LinearBranchExhaustion { transcript: TranscriptJson { edges: tr.edges.clone(), nodes } }
            }
            Refutation::Oracle { backend, query } => {
                RefutationJson::Oracle { backend: backend.clone(), query: QueryJson::from_query(query) }
            }
        };
        NonEmbeddingJson {
            poly: PolyJson::from_spec(p),
            params: strs(&c.params),
            template: TemplateJson::from_template(&c.template),
            sizes: c.sizes.clone(),
            refutation,
        }
    }

    pub fn to_cert(&self) -> Result<(NonEmbeddingCertificate, PolySpec)> {
        let refutation = match &self.refutation {
            RefutationJson::LinearBranchExhaustion { transcript } => {
                let mut pos = 0;
                let root = unflatten(&transcript.nodes, &mut pos)?;
                if pos != transcript.nodes.len() {
                    return Err(Error::Format("trailing nodes after the transcript tree".into()));
                }
                Refutation::LinearBranchExhaustion(LinearTranscript { edges: transcript.edges.clone(), root })
            }
            RefutationJson::Oracle { backend, query } => Refutation::Oracle { backend: backend.clone(), query: query.to_query()? },
        };
        let c = NonEmbeddingCertificate {
            template: self.template.to_template()?,
            sizes: self.sizes.clone(),
            params: qs(&self.params)?,
            refutation,
        };
        Ok((c, self.poly.to_spec()?))
    }
}

fn depth_value(d: Depth) -> Value {
    match d {
        Depth::Finite(n) => Value::from(n),
        Depth::Infinite => Value::from("inf"),
    }
}

fn depth_of(v: &Value) -> Result<Depth> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .map(Depth::Finite)
            .ok_or_else(|| Error::Format(format!("bad depth {v}"))),
        Value::String(s) => Ok(s.parse()?),
        _ => Err(Error::Format(format!("bad depth {v}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetJson {
    pub grid_max: usize,
    pub max_grid_points: usize,
    pub branches: u64,
    pub catalog_height: i64,
    pub curve_degree: u32,
    pub curve_height: i64,
    pub catalog_slice: u64,
    pub rational_height: i64,
    pub max_candidates: u64,
    pub time_budget_seconds: Option<u64>,
}

impl BudgetJson {
    pub fn from_budget(b: &ClassifyBudget, time_budget_seconds: Option<u64>) -> Self {
        BudgetJson {
            grid_max: b.grid_max,
            max_grid_points: b.max_grid_points,
            branches: b.branches,
            catalog_height: b.catalog.affine_height,
            curve_degree: b.catalog.curve_degree,
            curve_height: b.catalog.curve_height,
            catalog_slice: b.catalog_slice,
            rational_height: b.rational_height,
            max_candidates: b.enumeration.max_candidates,
            time_budget_seconds,
        }
    }

    pub fn to_budget(&self) -> ClassifyBudget {
        ClassifyBudget {
            grid_max: self.grid_max,
            max_grid_points: self.max_grid_points,
            branches: self.branches,
            catalog: CandidateCatalog {
                affine_height: self.catalog_height,
                curve_degree: self.curve_degree,
                curve_height: self.curve_height,
                user: Vec::new(),
            },
            catalog_slice: self.catalog_slice,
            rational_height: self.rational_height,
            enumeration: EnumerationBudget { max_candidates: self.max_candidates },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum StatusJson {
    Refuted { m: usize, certificate: NonEmbeddingJson },
    Confirmed { certificate: ImmersionJson },
    Open { max_sat: Option<usize>, reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub template: TemplateJson,
    pub e: usize,
    #[serde(flatten)]
    pub status: StatusJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvoidJson {
    pub kappa: String,
    pub continuum: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Value>,
}

pub fn verdict_name(v: &KappaVerdict) -> &'static str {
    match v {
        KappaVerdict::Avoidable => "avoidable",
        KappaVerdict::Unavoidable => "unavoidable",
        KappaVerdict::Conditional { .. } => "conditional",
    }
}

fn reason_name(r: OpenReason) -> &'static str {
    match r {
        OpenReason::Exhausted => "exhausted",
        OpenReason::Interrupted => "interrupted",
        OpenReason::NotNeeded => "not-needed",
    }
}

fn reason_of(s: &str) -> Result<OpenReason> {
    match s {
        "exhausted" => Ok(OpenReason::Exhausted),
        "interrupted" => Ok(OpenReason::Interrupted),
        "not-needed" => Ok(OpenReason::NotNeeded),
        _ => Err(Error::Format(format!("unknown open reason {s:?}"))),
    }
}

/// The continuum spelled as its aleph; invalid settings are marked with a `!`.
pub fn setting_text(s: &ContinuumSetting) -> String {
    let base = Cardinal::aleph(s.gamma.clone()).to_string();
    if s.allow_invalid && !s.gamma.is_successor() {
        format!("{base}!")
    } else {
        base
    }
}

pub fn setting_of(s: &str) -> Result<ContinuumSetting> {
    match s.strip_suffix('!') {
        Some(rest) => Ok(ContinuumSetting::overridden(rest.parse::<Cardinal>()?.index().clone())),
        None => Ok(ContinuumSetting::new(s.parse::<Cardinal>()?.index().clone())?),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub poly: PolyJson,
    pub params: Vec<String>,
    pub verdicts: Vec<VerdictJson>,
    pub depth_lo: Value,
    pub depth_hi: Value,
    pub decided: bool,
    pub avoidability: Vec<AvoidJson>,
    pub budget: BudgetJson,
    pub rounds: u32,
    pub trusts_oracle: bool,
}

impl ReportJson {
    pub fn from_report(r: &DepthReport, time_budget_seconds: Option<u64>) -> Self {
        let p = &r.poly;
        let verdicts = r
            .verdicts
            .iter()
            .map(|v| VerdictJson {
                template: TemplateJson::from_template(&v.template),
                e: v.e,
                status: match &v.status {
                    TemplateStatus::Refuted { m, certificate } => {
                        StatusJson::Refuted { m: *m, certificate: NonEmbeddingJson::from_cert(certificate, p) }
                    }
                    TemplateStatus::Confirmed(c) => StatusJson::Confirmed { certificate: ImmersionJson::from_cert(c) },
                    TemplateStatus::Open { max_sat, reason } => {
                        StatusJson::Open { max_sat: *max_sat, reason: reason_name(*reason).into() }
                    }
                },
            })
            .collect();
        ReportJson {
            poly: PolyJson::from_spec(p),
            params: strs(&r.params),
            verdicts,
            depth_lo: depth_value(r.depth_lo),
            depth_hi: depth_value(r.depth_hi),
            decided: r.decided,
            avoidability: r
                .avoidability
                .iter()
                .map(|a| AvoidJson {
                    kappa: a.kappa.to_string(),
                    continuum: setting_text(&a.setting),
                    verdict: verdict_name(&a.verdict).into(),
                    threshold: match a.verdict {
                        KappaVerdict::Conditional { threshold } => Some(depth_value(threshold)),
                        _ => None,
                    },
                })
                .collect(),
            budget: BudgetJson::from_budget(&r.budget, time_budget_seconds),
            rounds: r.rounds,
            trusts_oracle: r.trusts_oracle,
        }
    }

    pub fn to_report(&self) -> Result<DepthReport> {
        let poly = self.poly.to_spec()?;
        let mut verdicts = Vec::with_capacity(self.verdicts.len());
        for v in &self.verdicts {
            let status = match &v.status {
                StatusJson::Refuted { m, certificate } => {
                    let (c, cp) = certificate.to_cert()?;
                    if cp != poly {
                        return Err(Error::Format("embedded certificate names another polynomial".into()));
                    }
                    TemplateStatus::Refuted { m: *m, certificate: c }
                }
                StatusJson::Confirmed { certificate } => TemplateStatus::Confirmed(certificate.to_cert()?),
                StatusJson::Open { max_sat, reason } => TemplateStatus::Open { max_sat: *max_sat, reason: reason_of(reason)? },
            };
            verdicts.push(TemplateVerdict { template: v.template.to_template()?, e: v.e, status });
        }
        let avoidability = self
            .avoidability
            .iter()
            .map(|a| {
                let verdict = match a.verdict.as_str() {
                    "avoidable" => KappaVerdict::Avoidable,
                    "unavoidable" => KappaVerdict::Unavoidable,
                    "conditional" => KappaVerdict::Conditional {
                        threshold: depth_of(a.threshold.as_ref().ok_or_else(|| Error::Format("conditional verdict without threshold".into()))?)?,
                    },
                    other => return Err(Error::Format(format!("unknown verdict {other:?}"))),
                };
                Ok(Avoidability { kappa: a.kappa.parse()?, setting: setting_of(&a.continuum)?, verdict })
            })
            .collect::<Result<_>>()?;
        Ok(DepthReport {
            poly,
            params: qs(&self.params)?,
            verdicts,
            depth_lo: depth_of(&self.depth_lo)?,
            depth_hi: depth_of(&self.depth_hi)?,
            decided: self.decided,
            avoidability,
            budget: self.budget.to_budget(),
            rounds: self.rounds,
            trusts_oracle: self.trusts_oracle,
        })
    }
}

/// Evidence documents understood by `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    EmbeddingWitness(WitnessJson),
    NonEmbedding(NonEmbeddingJson),
    Immersion(ImmersionJson),
    DepthReport(ReportJson),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::EmbeddingWitness(_) => "embedding-witness",
            Document::NonEmbedding(_) => "non-embedding",
            Document::Immersion(_) => "immersion",
            Document::DepthReport(_) => "depth-report",
        }
    }
}

fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

fn digest_of(v: &Value) -> String {
    let hash = Sha256::digest(canonical(v).as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Pretty JSON of a document with its digest added.
pub fn seal(doc: &Document) -> String {
    let mut v = serde_json::to_value(doc).expect("documents always serialize");
    let d = digest_of(&v);
    v.as_object_mut().expect("documents are objects").insert("digest".into(), Value::from(d));
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}

/// Outcome of reading an evidence document.
pub enum Unsealed {
    Intact(Document),
    /// A digest is present and does not match the contents.
    Tampered { kind: String },
}

/// Parses a document; a missing digest is accepted, a wrong one is reported.
pub fn unseal(text: &str) -> Result<Unsealed> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v.as_object_mut().ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    let claimed = obj.remove("digest");
    if let Some(c) = claimed {
        let ok = c.as_str() == Some(digest_of(&v).as_str());
        if !ok {
            let kind = v.get("kind").and_then(Value::as_str).unwrap_or("unknown").to_string();
            return Ok(Unsealed::Tampered { kind });
        }
    }
    Ok(Unsealed::Intact(serde_json::from_value(v)?))
}
