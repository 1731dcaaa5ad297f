//! The bundled regression corpus: polynomials with their expected verdicts.

use hyperchrom_core::cardinals::Depth;
use hyperchrom_core::depth::{
    chromatic_report, classify, classify_kappa, verify_report, ChromaticBound, ClassifyBudget, DepthReport,
    TemplateStatus,
};
use hyperchrom_core::poly::PolySpec;
use hyperchrom_core::templates::Template;
use hyperchrom_core::Rational;
use serde::Deserialize;

use crate::format::{setting_of, verdict_name, PolyJson, ReportJson, TemplateJson};
use crate::{Error, Result};

const FILES: &[(&str, &str)] = &[
    ("fox1.json", include_str!("../corpus/fox1.json")),
    ("zero.json", include_str!("../corpus/zero.json")),
    ("difference.json", include_str!("../corpus/difference.json")),
    ("collinearity.json", include_str!("../corpus/collinearity.json")),
    ("isosceles.json", include_str!("../corpus/isosceles.json")),
];

/// Overrides of the default classification budget.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverrides {
    pub grid_max: Option<usize>,
    pub max_grid_points: Option<usize>,
    pub branches: Option<u64>,
    pub catalog_height: Option<i64>,
    pub curve_degree: Option<u32>,
    pub rational_height: Option<i64>,
}

impl BudgetOverrides {
    pub fn apply(&self) -> ClassifyBudget {
        let mut b = ClassifyBudget::default();
        if let Some(x) = self.grid_max {
            b.grid_max = x;
        }
        if let Some(x) = self.max_grid_points {
            b.max_grid_points = x;
        }
        if let Some(x) = self.branches {
            b.branches = x;
        }
        if let Some(x) = self.catalog_height {
            b.catalog.affine_height = x;
        }
        if let Some(x) = self.curve_degree {
            b.catalog.curve_degree = x;
        }
        if let Some(x) = self.rational_height {
            b.rational_height = x;
        }
        b
    }
}

/// Expected state of one template, or of every template with a given `e`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateExpect {
    pub template: Option<TemplateJson>,
    pub e: Option<usize>,
    pub status: String,
    /// For open templates: the largest cube shown to embed is at least this.
    pub min_max_sat: Option<usize>,
    pub basis: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvoidExpect {
    pub kappa: String,
    pub continuum: String,
    pub verdict: String,
    pub basis: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiExpect {
    pub continuum: String,
    pub exact: Option<String>,
    pub lower: Option<String>,
    pub upper: Option<String>,
    pub basis: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub depth_lo: serde_json::Value,
    pub depth_hi: serde_json::Value,
    pub decided: bool,
    pub basis: String,
    #[serde(default)]
    pub templates: Vec<TemplateExpect>,
    #[serde(default)]
    pub avoid: Vec<AvoidExpect>,
    #[serde(default)]
    pub chi: Vec<ChiExpect>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub about: String,
    pub poly: PolyJson,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub budget: BudgetOverrides,
    pub expect: Expect,
}

impl Entry {
    pub fn spec(&self) -> Result<PolySpec> {
        self.poly.to_spec()
    }

    pub fn params(&self) -> Result<Vec<Rational>> {
        self.params.iter().map(|s| Ok(hyperchrom_core::poly::parse_rational(s)?)).collect()
    }
}

pub fn entries() -> Result<Vec<Entry>> {
    FILES
        .iter()
        .map(|(name, text)| serde_json::from_str(text).map_err(|source| Error::Parse { path: format!("corpus/{name}"), source }))
        .collect()
}

pub struct Outcome {
    pub report: DepthReport,
    pub mismatches: Vec<String>,
    pub summary: String,
}

fn depth_of(v: &serde_json::Value) -> Result<Depth> {
    match v {
        serde_json::Value::Number(n) => Ok(Depth::Finite(n.as_u64().ok_or_else(|| Error::Format(format!("bad depth {v}")))? as u32)),
        serde_json::Value::String(s) => Ok(s.parse()?),
        _ => Err(Error::Format(format!("bad depth {v}"))),
    }
}

fn status_name(s: &TemplateStatus) -> &'static str {
    match s {
        TemplateStatus::Refuted { .. } => "refuted",
        TemplateStatus::Confirmed(_) => "confirmed",
        TemplateStatus::Open { .. } => "open",
    }
}

/// Classifies the entry and compares every expectation, also checking that
/// the report verifies and survives a JSON round trip.
pub fn run_entry(entry: &Entry) -> Result<Outcome> {
    let p = entry.spec()?;
    let params = entry.params()?;
    let report = classify(&p, &params, &entry.budget.apply())?;
    let mut miss = Vec::new();
    let mut checks = 0;
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            miss.push(what);
        }
    };
    let ex = &entry.expect;
    let (lo, hi) = (depth_of(&ex.depth_lo)?, depth_of(&ex.depth_hi)?);
    check(report.depth_lo == lo, format!("depth_lo: expected {lo}, got {}", report.depth_lo));
    check(report.depth_hi == hi, format!("depth_hi: expected {hi}, got {}", report.depth_hi));
    check(report.decided == ex.decided, format!("decided: expected {}, got {}", ex.decided, report.decided));
    for t in &ex.templates {
        let wanted: Option<Template> = t.template.as_ref().map(TemplateJson::to_template).transpose()?;
        let selected: Vec<_> = report
            .verdicts
            .iter()
            .filter(|v| wanted.as_ref().is_none_or(|w| w.is_isomorphic(&v.template)) && t.e.is_none_or(|e| v.e == e))
            .collect();
        let label = match (&wanted, t.e) {
            (Some(w), _) => w.to_string(),
            (None, Some(e)) => format!("templates with e={e}"),
            (None, None) => "all templates".into(),
        };
        check(!selected.is_empty(), format!("{label}: no such template in the report"));
        for v in selected {
            let got = status_name(&v.status);
            check(got == t.status, format!("{}: expected {}, got {got}", v.template, t.status));
            if let (Some(min), TemplateStatus::Open { max_sat, .. }) = (t.min_max_sat, &v.status) {
                check(max_sat.is_some_and(|m| m >= min), format!("{}: expected max_sat >= {min}, got {max_sat:?}", v.template));
            }
        }
    }
    for a in &ex.avoid {
        let setting = setting_of(&a.continuum)?;
        let got = classify_kappa(&report, &a.kappa.parse()?, &setting);
        let got = verdict_name(&got);
        check(got == a.verdict, format!("avoid {} under {}: expected {}, got {got}", a.kappa, a.continuum, a.verdict));
    }
    for c in &ex.chi {
        let setting = setting_of(&c.continuum)?;
        let got = chromatic_report(&report, &setting);
        let ok = match (&got, &c.exact) {
            (ChromaticBound::Exact(x), Some(e)) => x.to_string() == *e,
            (ChromaticBound::Between { lower, upper }, None) => {
                c.lower.as_deref() == Some(&lower.to_string()) && c.upper.as_deref() == Some(&upper.to_string())
            }
            _ => false,
        };
        check(ok, format!("chi under {}: got {got:?}", c.continuum));
    }
    let problems = verify_report(&report)?;
    check(problems.is_empty(), format!("report does not verify: {}", problems.join("; ")));
    let round_trip = ReportJson::from_report(&report, None).to_report()?;
    check(round_trip == report, "report changes under a JSON round trip".into());
    let summary = format!("depth [{}, {}], {} rounds, {checks} checks", report.depth_lo, report.depth_hi, report.rounds);
    Ok(Outcome { report, mismatches: miss, summary })
}
