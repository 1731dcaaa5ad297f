use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperchrom_core::cardinals::{Cardinal, ContinuumSetting};
use hyperchrom_core::depth::{
    chromatic_report, classify_with, verify_report, ChromaticBound, ClassifyBudget, DepthReport, KappaVerdict,
    TemplateStatus,
};
use hyperchrom_core::embed::{
    embedding_query, replay_refutation, search_embedding, verify_embedding, ExistentialOracle, NonEmbeddingCertificate,
    OracleAnswer, Refutation, SearchBudget, SearchStrategy, VerdictStatus,
};
use hyperchrom_core::immerse::{
    describe_map, replay_immersion, search_immersion, CandidateCatalog, ImmersionCertificate, SearchOutcome,
};
use hyperchrom_core::poly::{parse_rational, PolySpec};
use hyperchrom_core::templates::{
    enumerate_templates, template_edges, EnumerationBudget, Grid, Surjection, Template,
};
use hyperchrom_core::Rational;
use serde::de::DeserializeOwned;

use crate::exit;
use crate::format::{
    seal, setting_text, unseal, verdict_name, Document, HypergraphJson, ImmersionJson, NonEmbeddingJson, PolyJson,
    ReportJson, TemplateJson, Unsealed, WitnessJson,
};
use crate::oracle::SubprocessOracle;
use crate::{Error, Result};

#[derive(Parser)]
#[command(name = "hyperchrom", version, about = "Certified depth and chromatic verdicts for algebraic hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and inspect templates.
    #[command(subcommand)]
    Template(TemplateCmd),
    /// Classify the depth of a polynomial's zero hypergraph.
    #[command(subcommand)]
    Depth(DepthCmd),
    /// κ-avoidability for every pair of --kappa and --continuum.
    Avoid(AvoidArgs),
    /// The least infinite chromatic bound under each --continuum.
    Chi(ChiArgs),
    /// Replay a witness, certificate or report file.
    Verify(VerifyArgs),
    /// Decide or witness one finite embedding.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Search the immersion catalog for one template.
    #[command(subcommand)]
    Immerse(ImmerseCmd),
    /// The bundled regression corpus.
    #[command(subcommand)]
    Examples(ExamplesCmd),
}

#[derive(Subcommand)]
enum TemplateCmd {
    /// Print one canonical template per line.
    Enum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Print e(P) and the least distinguishing coordinate set.
    Dist {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the π-collapse of a template.
    Collapse {
        #[arg(long = "in")]
        input: PathBuf,
        /// Target coordinate of each source coordinate, e.g. `0,0,1`.
        #[arg(long)]
        pi: String,
    },
    /// Build L(grid, P).
    Hypergraph {
        #[arg(long = "in")]
        input: PathBuf,
        /// Axis sizes, e.g. `3,3`.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Largest cube side tried for refutations.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
    budget_grid_max: u64,
    /// Coefficient height of the affine immersion catalog.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i64).range(0..))]
    budget_catalog_height: i64,
    /// Node budget of a single refutation or rational search.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_branches: u64,
    /// Largest number of grid points in a refutation attempt.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    budget_grid_points: u64,
    /// Highest degree of catalog curves.
    #[arg(long, default_value_t = 3)]
    budget_curve_degree: u32,
    /// Coefficient height of catalog curves.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..))]
    budget_curve_height: i64,
    /// Coordinate height of the rational search; 0 disables it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..))]
    budget_rational_height: i64,
    /// Catalog candidates per template per round.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    budget_catalog_slice: u64,
    /// Stop after this many seconds and report what is known.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    time_budget_seconds: Option<u64>,
}

impl BudgetArgs {
    fn classify_budget(&self) -> ClassifyBudget {
        ClassifyBudget {
            grid_max: self.budget_grid_max as usize,
            max_grid_points: self.budget_grid_points as usize,
            branches: self.budget_branches,
            catalog: CandidateCatalog {
                affine_height: self.budget_catalog_height,
                curve_degree: self.budget_curve_degree,
                curve_height: self.budget_curve_height,
                user: Vec::new(),
            },
            catalog_slice: self.budget_catalog_slice,
            rational_height: self.budget_rational_height,
            enumeration: EnumerationBudget::default(),
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    poly: PathBuf,
    /// Parameter values, e.g. `1,-2/3`.
    #[arg(long, default_value = "")]
    params: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// External ∃ℝ solver command.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record avoidability for these cardinals (needs --continuum).
    #[arg(long, requires = "continuum")]
    kappa: Vec<String>,
    #[arg(long, requires = "kappa")]
    continuum: Vec<String>,
    #[arg(long)]
    allow_invalid_continuum: bool,
}

#[derive(Subcommand)]
enum DepthCmd {
    Classify(ClassifyArgs),
}

/// Where the depth interval comes from: a stored report or a fresh run.
#[derive(Args)]
struct SourceArgs {
    #[arg(long, conflicts_with_all = ["poly", "oracle"], required_unless_present = "poly")]
    report: Option<PathBuf>,
    #[arg(long)]
    poly: Option<PathBuf>,
    #[arg(long, default_value = "")]
    params: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Args)]
struct AvoidArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// A cardinal such as `aleph:0` or `aleph:w+1`; repeatable.
    #[arg(long, required = true)]
    kappa: Vec<String>,
    /// The assumed 2^aleph:0, such as `aleph:1`; repeatable.
    #[arg(long, required = true)]
    continuum: Vec<String>,
    /// Accept continuum values no model of ZFC allows.
    #[arg(long)]
    allow_invalid_continuum: bool,
    /// Write the report with the avoidability table filled in.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChiArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, required = true)]
    continuum: Vec<String>,
    #[arg(long)]
    allow_invalid_continuum: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Ask this solver again about oracle refutations.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    ExactLinear,
    RationalSearch,
    FromImmersion,
    Oracle,
}

#[derive(Subcommand)]
enum EmbedCmd {
    Search {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        sizes: String,
        #[arg(long, value_enum, default_value = "exact-linear")]
        strategy: Strategy,
        /// Coordinate height for rational-search.
        #[arg(long, default_value_t = 1)]
        height: i64,
        /// Immersion certificate for from-immersion.
        #[arg(long, required_if_eq("strategy", "from-immersion"))]
        immersion: Option<PathBuf>,
        #[arg(long, required_if_eq("strategy", "oracle"))]
        oracle: Option<String>,
        #[arg(long, default_value_t = 200_000)]
        budget_branches: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ImmerseCmd {
    Search {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        template: PathBuf,
        #[arg(long, default_value_t = 2)]
        catalog_height: i64,
        #[arg(long, default_value_t = 3)]
        curve_degree: u32,
        #[arg(long, default_value_t = 1)]
        curve_height: i64,
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// Run every corpus entry against its expected verdicts.
    Run {
        /// Only the entry with this name.
        #[arg(long)]
        only: Option<String>,
    },
}

pub(crate) fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit::USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Template(c) => template(c),
        Command::Depth(DepthCmd::Classify(a)) => classify_cmd(a),
        Command::Avoid(a) => avoid(a),
        Command::Chi(a) => chi(a),
        Command::Verify(a) => verify(a),
        Command::Embed(c) => embed(c),
        Command::Immerse(c) => immerse(c),
        Command::Examples(ExamplesCmd::Run { only }) => examples(only),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.display().to_string(), source })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn emit(out: Option<&Path>, doc: &Document) -> Result<()> {
    let text = seal(doc);
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Usage(format!("bad {what} entry {x:?}")))).collect()
}

fn params(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| Ok(parse_rational(x.trim())?)).collect()
}

fn load_template(path: &Path) -> Result<Template> {
    load::<TemplateJson>(path)?.to_template()
}

fn load_poly(path: &Path) -> Result<PolySpec> {
    load::<PolyJson>(path)?.to_spec()
}

fn template(c: TemplateCmd) -> Result<i32> {
    match c {
        TemplateCmd::Enum { k, d } => {
            let all = enumerate_templates(k, d)?;
            let mut out = std::io::stdout().lock();
            for t in &all {
                // a closed pipe (e.g. `| head`) is not an error
                if writeln!(out, "{}", serde_json::to_string(&TemplateJson::from_template(t))?).is_err() {
                    return Ok(exit::OK);
                }
            }
            eprintln!("{} templates", all.len());
        }
        TemplateCmd::Dist { input } => {
            let t = load_template(&input)?;
            let (e, w) = t.min_distinguisher();
            let w: Vec<String> = w.iter().map(usize::to_string).collect();
            println!("e={e} witness {{{}}}", w.join(","));
        }
        TemplateCmd::Collapse { input, pi } => {
            let t = load_template(&input)?;
            let pi = Surjection::from_map(list(&pi, "pi")?)?;
            let c = t.collapse(&pi)?;
            println!("{}", serde_json::to_string(&TemplateJson::from_template(&c))?);
            eprintln!("e={} (source e={})", c.e(), t.e());
        }
        TemplateCmd::Hypergraph { input, sizes, out } => {
            let t = load_template(&input)?;
            let grid = Grid::new(list(&sizes, "size")?)?;
            let h = template_edges(&t, &grid, EnumerationBudget::default())?;
            let text = serde_json::to_string_pretty(&HypergraphJson::from_grid(&h, &grid))? + "\n";
            match out {
                Some(p) => write_text(&p, &text)?,
                None => print!("{text}"),
            }
            eprintln!("{} vertices, {} edges", grid.len(), h.edges().len());
        }
    }
    Ok(exit::OK)
}

fn spawn_oracle(cmd: Option<&str>) -> Result<Option<SubprocessOracle>> {
    cmd.map(SubprocessOracle::spawn).transpose()
}

fn run_classify(poly: &Path, params_text: &str, budget: &BudgetArgs, oracle: Option<&str>) -> Result<DepthReport> {
    let p = load_poly(poly)?;
    let ps = params(params_text)?;
    let mut oracle = spawn_oracle(oracle)?;
    let start = Instant::now();
    let limit = budget.time_budget_seconds.map(Duration::from_secs);
    let mut stop = || limit.is_some_and(|l| start.elapsed() >= l);
    let o = oracle.as_mut().map(|o| o as &mut dyn ExistentialOracle);
    Ok(classify_with(&p, &ps, &budget.classify_budget(), o, &mut stop)?)
}

fn summarize(r: &DepthReport) {
    let (mut refuted, mut confirmed, mut open) = (0, 0, 0);
    for v in &r.verdicts {
        match &v.status {
            TemplateStatus::Refuted { .. } => refuted += 1,
            TemplateStatus::Confirmed(c) => {
                confirmed += 1;
                println!("confirmed {} (e={}) by {}", v.template, v.e, describe_map(&c.map));
            }
            TemplateStatus::Open { .. } => open += 1,
        }
    }
    let state = if r.decided { "decided" } else { "inconclusive" };
    println!("depth [{}, {}] {state} after {} rounds", r.depth_lo, r.depth_hi, r.rounds);
    println!("templates: {refuted} refuted, {confirmed} confirmed, {open} open");
    if r.trusts_oracle {
        println!("note: some refutations rest on an external oracle");
    }
}

fn settings(values: &[String], allow_invalid: bool) -> Result<Vec<ContinuumSetting>> {
    values
        .iter()
        .map(|s| {
            let gamma = s.parse::<Cardinal>()?.index().clone();
            if allow_invalid && !gamma.is_successor() {
                Ok(ContinuumSetting::overridden(gamma))
            } else {
                ContinuumSetting::new(gamma).map_err(|e| Error::Usage(format!("--continuum {s}: {e}")))
            }
        })
        .collect()
}

fn cardinals(values: &[String]) -> Result<Vec<Cardinal>> {
    values.iter().map(|s| Ok(s.parse::<Cardinal>()?)).collect()
}

fn classify_cmd(a: ClassifyArgs) -> Result<i32> {
    let kappas = cardinals(&a.kappa)?;
    let ss = settings(&a.continuum, a.allow_invalid_continuum)?;
    let r = run_classify(&a.poly, &a.params, &a.budget, a.oracle.as_deref())?.with_avoidability(&kappas, &ss);
    summarize(&r);
    if let Some(out) = &a.out {
        emit(Some(out), &Document::DepthReport(ReportJson::from_report(&r, a.budget.time_budget_seconds)))?;
    }
    Ok(if r.decided { exit::OK } else { exit::INCONCLUSIVE })
}

/// A verified stored report, or a fresh classification.
fn source_report(s: &SourceArgs) -> Result<std::result::Result<(DepthReport, Option<u64>), String>> {
    if let Some(path) = &s.report {
        let text = read_text(path)?;
        let doc = match unseal(&text).map_err(|e| locate(path, e))? {
            Unsealed::Intact(Document::DepthReport(r)) => r,
            Unsealed::Intact(other) => return Err(Error::Usage(format!("{} holds a {}, not a depth report", path.display(), other.kind()))),
            Unsealed::Tampered { .. } => return Ok(Err("digest mismatch".into())),
        };
        let time = doc.budget.time_budget_seconds;
        let report = match doc.to_report() {
            Ok(r) => r,
            Err(e) => return Ok(Err(e.to_string())),
        };
        let problems = verify_report(&report)?;
        if !problems.is_empty() {
            return Ok(Err(problems.join("; ")));
        }
        return Ok(Ok((report, time)));
    }
    let poly = s.poly.as_ref().expect("clap requires --report or --poly");
    let r = run_classify(poly, &s.params, &s.budget, s.oracle.as_deref())?;
    Ok(Ok((r, s.budget.time_budget_seconds)))
}

fn locate(path: &Path, e: Error) -> Error {
    match e {
        Error::Json(source) => Error::Parse { path: path.display().to_string(), source },
        other => other,
    }
}

fn avoid(a: AvoidArgs) -> Result<i32> {
    let kappas = cardinals(&a.kappa)?;
    let ss = settings(&a.continuum, a.allow_invalid_continuum)?;
    let (r, time) = match source_report(&a.source)? {
        Ok(r) => r,
        Err(why) => {
            println!("REJECTED report: {why}");
            return Ok(exit::REJECTED);
        }
    };
    let r = r.with_avoidability(&kappas, &ss);
    println!("depth [{}, {}]", r.depth_lo, r.depth_hi);
    let mut all_decided = true;
    for v in &r.avoidability {
        let line = match v.verdict {
            KappaVerdict::Conditional { threshold } => {
                all_decided = false;
                format!("conditional: avoidable iff depth >= {threshold}")
            }
            ref other => verdict_name(other).to_string(),
        };
        println!("kappa={} continuum={} {line}", v.kappa, setting_text(&v.setting));
    }
    if let Some(out) = &a.out {
        emit(Some(out), &Document::DepthReport(ReportJson::from_report(&r, time)))?;
    }
    Ok(if all_decided { exit::OK } else { exit::INCONCLUSIVE })
}

fn chi(a: ChiArgs) -> Result<i32> {
    let ss = settings(&a.continuum, a.allow_invalid_continuum)?;
    let (r, _) = match source_report(&a.source)? {
        Ok(r) => r,
        Err(why) => {
            println!("REJECTED report: {why}");
            return Ok(exit::REJECTED);
        }
    };
    println!("depth [{}, {}]", r.depth_lo, r.depth_hi);
    let mut exact = true;
    for s in &ss {
        match chromatic_report(&r, s) {
            ChromaticBound::Exact(c) => println!("continuum={} chi={c}", setting_text(s)),
            ChromaticBound::Between { lower, upper } => {
                exact = false;
                println!("continuum={} chi between {lower} and {upper}", setting_text(s));
            }
        }
    }
    Ok(if exact { exit::OK } else { exit::INCONCLUSIVE })
}

/// Result of checking one piece of evidence.
enum Check {
    Verified,
    Rejected(String),
    /// Sound only on an external backend's word.
    Trusted(String),
}

fn check_oracle_certificate(c: &NonEmbeddingCertificate, p: &PolySpec, oracle: Option<&str>) -> Result<Check> {
    let Refutation::Oracle { backend, query } = &c.refutation else {
        return Ok(if replay_refutation(c, p)? { Check::Verified } else { Check::Rejected("transcript does not replay".into()) });
    };
    let expected = embedding_query(p, &c.params, &c.template, &c.sizes, SearchBudget::default())?;
    if expected != *query {
        return Ok(Check::Rejected("stored query is not the embedding query of the instance".into()));
    }
    let Some(cmd) = oracle else {
        return Ok(Check::Trusted(format!("refutation taken on the word of {backend}")));
    };
    let mut o = SubprocessOracle::spawn(cmd)?;
    Ok(match o.solve(query)? {
        OracleAnswer::Unsat => Check::Trusted(format!("confirmed unsat by {}", o.backend_id())),
        OracleAnswer::Sat(_) => Check::Rejected(format!("{} found a solution", o.backend_id())),
        OracleAnswer::Unknown => Check::Trusted(format!("{} could not decide; refutation rests on {backend}", o.backend_id())),
    })
}

fn check_document(doc: &Document, oracle: Option<&str>) -> Result<Check> {
    let ok = |b: bool, why: &str| if b { Check::Verified } else { Check::Rejected(why.into()) };
    Ok(match doc {
        Document::EmbeddingWitness(w) => {
            let (w, p) = w.to_witness()?;
            ok(verify_embedding(&w, &p)?, "witness is not an embedding")
        }
        Document::NonEmbedding(c) => {
            let (c, p) = c.to_cert()?;
            check_oracle_certificate(&c, &p, oracle)?
        }
        Document::Immersion(c) => ok(replay_immersion(&c.to_cert()?)?, "immersion does not replay"),
        Document::DepthReport(r) => {
            let r = r.to_report()?;
            let problems = verify_report(&r)?;
            if !problems.is_empty() {
                return Ok(Check::Rejected(problems.join("; ")));
            }
            let mut trusted = Vec::new();
            for v in &r.verdicts {
                if let TemplateStatus::Refuted { certificate, .. } = &v.status {
                    if let Refutation::Oracle { .. } = certificate.refutation {
                        match check_oracle_certificate(certificate, &r.poly, oracle)? {
                            Check::Rejected(why) => return Ok(Check::Rejected(format!("{}: {why}", v.template))),
                            Check::Trusted(why) => trusted.push(format!("{}: {why}", v.template)),
                            Check::Verified => {}
                        }
                    }
                }
            }
            if trusted.is_empty() {
                Check::Verified
            } else {
                Check::Trusted(trusted.join("; "))
            }
        }
    })
}

fn verify(a: VerifyArgs) -> Result<i32> {
    let text = read_text(&a.input)?;
    let doc = match unseal(&text).map_err(|e| locate(&a.input, e))? {
        Unsealed::Intact(d) => d,
        Unsealed::Tampered { kind } => {
            println!("REJECTED {kind}: digest mismatch");
            return Ok(exit::REJECTED);
        }
    };
    let kind = doc.kind();
    // a document that parses but does not describe a valid object is a failed check, not a usage error
    let check = match check_document(&doc, a.oracle.as_deref()) {
        Ok(c) => c,
        Err(e @ (Error::Core(_) | Error::Format(_))) => Check::Rejected(e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(match check {
        Check::Verified => {
            println!("verified {kind}");
            exit::OK
        }
        Check::Rejected(why) => {
            println!("REJECTED {kind}: {why}");
            exit::REJECTED
        }
        Check::Trusted(why) => {
            println!("unverified {kind}: {why}");
            exit::INCONCLUSIVE
        }
    })
}

fn embed(c: EmbedCmd) -> Result<i32> {
    let EmbedCmd::Search { poly, params: ps, template, sizes, strategy, height, immersion, oracle, budget_branches, out } = c;
    let p = load_poly(&poly)?;
    let ps = params(&ps)?;
    let t = load_template(&template)?;
    let sizes: Vec<usize> = list(&sizes, "size")?;
    let budget = SearchBudget { max_nodes: budget_branches, enumeration: EnumerationBudget::default() };
    let cert: Option<ImmersionCertificate> = match &immersion {
        Some(path) => match unseal(&read_text(path)?).map_err(|e| locate(path, e))? {
            Unsealed::Intact(Document::Immersion(c)) => Some(c.to_cert()?),
            _ => return Err(Error::Usage(format!("{} is not an intact immersion certificate", path.display()))),
        },
        None => None,
    };
    let mut sub = spawn_oracle(oracle.as_deref())?;
    let strat = match strategy {
        Strategy::ExactLinear => SearchStrategy::ExactLinear,
        Strategy::RationalSearch => SearchStrategy::RationalSearch { height },
        Strategy::FromImmersion => SearchStrategy::FromImmersion(cert.as_ref().expect("clap requires --immersion")),
        Strategy::Oracle => SearchStrategy::ExternalOracle(sub.as_mut().expect("clap requires --oracle")),
    };
    let v = search_embedding(&p, &ps, &t, &sizes, strat, budget)?;
    let doc = match &v.status {
        VerdictStatus::Sat(w) => {
            println!("sat ({})", v.backend);
            Document::EmbeddingWitness(WitnessJson::from_witness(w, &p))
        }
        VerdictStatus::Unsat(c) => {
            println!("unsat ({}, {})", v.backend, c.method());
            Document::NonEmbedding(NonEmbeddingJson::from_cert(c, &p))
        }
        VerdictStatus::Unknown => {
            println!("unknown ({})", v.backend);
            return Ok(exit::INCONCLUSIVE);
        }
    };
    emit(out.as_deref(), &doc)?;
    Ok(exit::OK)
}

fn immerse(c: ImmerseCmd) -> Result<i32> {
    let ImmerseCmd::Search { poly, params: ps, template, catalog_height, curve_degree, curve_height, max_candidates, out } = c;
    let p = load_poly(&poly)?;
    let ps = params(&ps)?;
    let t = load_template(&template)?;
    let catalog = CandidateCatalog { affine_height: catalog_height, curve_degree, curve_height, user: Vec::new() };
    match search_immersion(&p, &ps, &t, &catalog, max_candidates)? {
        SearchOutcome::Found(c) => {
            println!("found {} through pi={:?}", describe_map(&c.map), c.pi.map());
            emit(out.as_deref(), &Document::Immersion(ImmersionJson::from_cert(&c)))?;
            Ok(exit::OK)
        }
        SearchOutcome::NotFound => {
            println!("catalog exhausted without an immersion");
            Ok(exit::INCONCLUSIVE)
        }
        SearchOutcome::BudgetExhausted => {
            println!("candidate budget exhausted");
            Ok(exit::INCONCLUSIVE)
        }
    }
}

fn examples(only: Option<String>) -> Result<i32> {
    let entries = crate::corpus::entries()?;
    let selected: Vec<_> = entries.iter().filter(|e| only.as_deref().is_none_or(|n| n == e.name)).collect();
    if selected.is_empty() {
        return Err(Error::Usage(format!("no corpus entry named {:?}", only.unwrap_or_default())));
    }
    let mut failed = 0;
    for entry in selected {
        let outcome = crate::corpus::run_entry(entry)?;
        if outcome.mismatches.is_empty() {
            println!("{}: ok ({})", entry.name, outcome.summary);
        } else {
            failed += 1;
            println!("{}: MISMATCH ({})", entry.name, outcome.summary);
            for m in &outcome.mismatches {
                println!("  {m}");
            }
        }
    }
    Ok(if failed == 0 { exit::OK } else { exit::REJECTED })
}
