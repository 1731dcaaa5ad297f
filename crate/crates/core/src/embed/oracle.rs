//! The seam for external solvers of existential real arithmetic.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{EmbeddingWitness, NonEmbeddingCertificate, OracleVerdict, Refutation, SearchBudget, VerdictStatus};
use crate::poly::{Poly, PolySpec};
use crate::templates::{permutations, template_edges, Grid, Template};
use crate::{Error, Rational, Result};

/// "Is there a real point where all `equalities` vanish and no
/// `disequality` does?" Polynomials range over `vars`, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleQuery {
    pub vars: Vec<String>,
    pub equalities: Vec<Poly>,
    pub disequalities: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// A rational point, one value per query variable.
    Sat(Vec<Rational>),
    Unsat,
    Unknown,
}

pub trait ExistentialOracle {
    fn backend_id(&self) -> String;
    fn solve(&mut self, query: &OracleQuery) -> Result<OracleAnswer>;
}

/// The query whose solutions are exactly the embeddings of `L(sizes, t)`.
/// Unknown `h{v}.{t}` is coordinate `t` of grid point `v`. Each edge
/// contributes the product of its distinct ordered factors; each pair of
/// grid points contributes its squared distance as a disequality.
pub fn embedding_query(p: &PolySpec, params: &[Rational], t: &Template, sizes: &[usize], budget: SearchBudget) -> Result<OracleQuery> {
    if t.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: t.k() });
    }
    let spec = p.specialize(params)?;
    let grid = Grid::new(sizes.to_vec())?;
    let h = template_edges(t, &grid, budget.enumeration)?;
    let n = p.n();
    let nv = grid.len() * n;
    let var = |v: usize, s: usize| Poly::var(nv, v * n + s);
    let vars = (0..grid.len()).flat_map(|v| (0..n).map(move |s| alloc::format!("h{v}.{s}"))).collect();
    let mut equalities = Vec::with_capacity(h.edges().len());
    for e in h.edges() {
        let mut factors = BTreeSet::new();
        for sigma in permutations(p.k()) {
            let images: Vec<Poly> = sigma.iter().flat_map(|&r| (0..n).map(move |s| (e[r], s))).map(|(v, s)| var(v, s)).collect();
            factors.insert(FactorKey(spec.poly().substitute(&images)?));
        }
        let mut prod = Poly::one(nv);
        for f in factors {
            prod = &prod * &f.0;
        }
        equalities.push(prod);
    }
    let mut disequalities = Vec::new();
    for a in 0..grid.len() {
        for b in a + 1..grid.len() {
            let mut q = Poly::zero(nv);
            for s in 0..n {
                let d = &var(a, s) - &var(b, s);
                q = &q + &(&d * &d);
            }
            disequalities.push(q);
        }
    }
    Ok(OracleQuery { vars, equalities, disequalities })
}

/// Orders polynomials by their term lists so duplicates collapse.
#[derive(PartialEq, Eq)]
struct FactorKey(Poly);

impl Ord for FactorKey {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0.terms().cmp(other.0.terms())
    }
}

impl PartialOrd for FactorKey {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub(super) fn run_oracle(
    oracle: &mut dyn ExistentialOracle,
    p: &PolySpec,
    params: &[Rational],
    t: &Template,
    sizes: &[usize],
    budget: SearchBudget,
) -> Result<OracleVerdict> {
    let query = embedding_query(p, params, t, sizes, budget)?;
    let backend = oracle.backend_id();
    let status = match oracle.solve(&query)? {
        OracleAnswer::Sat(values) => {
            if values.len() != query.vars.len() {
                return Err(Error::ArityMismatch { expected: query.vars.len(), found: values.len() });
            }
            let assignment = values.chunks(p.n()).map(<[Rational]>::to_vec).collect();
            VerdictStatus::Sat(EmbeddingWitness { template: t.clone(), sizes: sizes.to_vec(), assignment, params: params.to_vec() })
        }
        OracleAnswer::Unsat => VerdictStatus::Unsat(NonEmbeddingCertificate {
            template: t.clone(),
            sizes: sizes.to_vec(),
            params: params.to_vec(),
            refutation: Refutation::Oracle { backend: backend.clone(), query },
        }),
        OracleAnswer::Unknown => VerdictStatus::Unknown,
    };
    Ok(OracleVerdict { status, backend })
}
