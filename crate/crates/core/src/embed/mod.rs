//! Finite embeddings of template hypergraphs `L(grid, P)` into the zero
//! hypergraph of a polynomial: witnesses, refutations and the search
//! strategies that produce them.
//!
//! Every positive answer carries an [`EmbeddingWitness`] that
//! [`verify_embedding`] re-checks from scratch. Negative answers carry a
//! [`NonEmbeddingCertificate`]; for linear polynomials it is a complete
//! branch transcript that [`replay_refutation`] re-solves independently.

mod extract;
mod from_immersion;
pub mod linalg;
mod linear;
mod oracle;
mod rational_search;

use alloc::string::String;
use alloc::vec::Vec;

use crate::poly::PolySpec;
use crate::templates::{template_edges, EnumerationBudget, Grid, Template};
use crate::{Error, Rational, Result};

pub use extract::{extract_injective_subgrid, is_injective_on, is_one_to_one_in_each_coordinate};
pub use from_immersion::embedding_from_immersion;
pub use linear::{refute_embedding_linear, replay_refutation, BranchNode, LinearTranscript};
pub use oracle::{embedding_query, ExistentialOracle, OracleAnswer, OracleQuery};
pub use rational_search::rational_search;

/// An injective map from the grid into ℚ^n that sends every edge of
/// `L(grid, template)` to an edge of the zero hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub template: Template,
    pub sizes: Vec<usize>,
    /// Indexed by grid point index (see [`Grid::point`]).
    pub assignment: Vec<Vec<Rational>>,
    pub params: Vec<Rational>,
}

/// How a non-embedding was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    LinearBranchExhaustion(LinearTranscript),
    /// Accepted on the word of an external backend; only that backend can replay it.
    Oracle { backend: String, query: OracleQuery },
}

/// Evidence that `L(sizes, template)` does not embed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonEmbeddingCertificate {
    pub template: Template,
    pub sizes: Vec<usize>,
    pub params: Vec<Rational>,
    pub refutation: Refutation,
}

impl NonEmbeddingCertificate {
    pub fn method(&self) -> &str {
        match &self.refutation {
            Refutation::LinearBranchExhaustion(_) => "linear-branch-exhaustion",
            Refutation::Oracle { .. } => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictStatus {
    Sat(EmbeddingWitness),
    Unsat(NonEmbeddingCertificate),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub status: VerdictStatus,
    pub backend: String,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, VerdictStatus::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self.status, VerdictStatus::Unsat(_))
    }
}

/// Limits shared by the search backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Branch nodes (linear backend) or assignment nodes (rational search).
    pub max_nodes: u64,
    pub enumeration: EnumerationBudget,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 200_000, enumeration: EnumerationBudget::default() }
    }
}

/// Checks injectivity and that each edge of `L(sizes, template)` lands on a
/// zero of the polynomial in some ordering. Independent of how `w` was built.
pub fn verify_embedding(w: &EmbeddingWitness, p: &PolySpec) -> Result<bool> {
    verify_embedding_with(w, p, EnumerationBudget::default())
}

pub fn verify_embedding_with(w: &EmbeddingWitness, p: &PolySpec, budget: EnumerationBudget) -> Result<bool> {
    let grid = Grid::new(w.sizes.clone())?;
    if w.template.d() != grid.dim() {
        return Err(Error::ArityMismatch { expected: w.template.d(), found: grid.dim() });
    }
    if w.template.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: w.template.k() });
    }
    if w.assignment.len() != grid.len() {
        return Err(Error::Precondition(alloc::format!(
            "assignment covers {} of {} grid points",
            w.assignment.len(),
            grid.len()
        )));
    }
    if let Some(v) = w.assignment.iter().find(|v| v.len() != p.n()) {
        return Err(Error::ArityMismatch { expected: p.n(), found: v.len() });
    }
    let mut sorted: Vec<&Vec<Rational>> = w.assignment.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|pair| pair[0] == pair[1]) {
        return Ok(false);
    }
    let h = template_edges(&w.template, &grid, budget)?;
    for e in h.edges() {
        let pts: Vec<Vec<Rational>> = e.iter().map(|&v| w.assignment[v].clone()).collect();
        if !p.edge_predicate(&w.params, &pts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which backend [`search_embedding`] should use.
pub enum SearchStrategy<'a> {
    /// Complete decision for polynomials of degree ≤ 1 in the x-variables.
    ExactLinear,
    /// Positive evidence from a verified immersion of a collapse.
    FromImmersion(&'a crate::immerse::ImmersionCertificate),
    /// Bounded enumeration of integer points with coordinates in `[-height, height]`; never unsat.
    RationalSearch { height: i64 },
    ExternalOracle(&'a mut dyn ExistentialOracle),
}

/// Runs one strategy. A `Sat` answer is always re-verified before it is returned;
/// a witness failing verification is reported as an error.
pub fn search_embedding(
    p: &PolySpec,
    params: &[Rational],
    t: &Template,
    sizes: &[usize],
    strategy: SearchStrategy<'_>,
    budget: SearchBudget,
) -> Result<OracleVerdict> {
    let verdict = match strategy {
        SearchStrategy::ExactLinear => refute_embedding_linear(p, params, t, sizes, budget)?,
        SearchStrategy::FromImmersion(cert) => {
            let w = embedding_from_immersion(cert, t, &cert.pi, sizes, p, params, budget)?;
            OracleVerdict { status: VerdictStatus::Sat(w), backend: "from-immersion".into() }
        }
        SearchStrategy::RationalSearch { height } => rational_search(p, params, t, sizes, height, budget)?,
        SearchStrategy::ExternalOracle(oracle) => oracle::run_oracle(oracle, p, params, t, sizes, budget)?,
    };
    if let VerdictStatus::Sat(w) = &verdict.status {
        if !verify_embedding_with(w, p, budget.enumeration)? {
            return Err(Error::Contract(alloc::format!("backend {} produced a witness that fails verification", verdict.backend)));
        }
    }
    Ok(verdict)
}
