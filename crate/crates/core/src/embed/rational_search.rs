//! Bounded search for injective integer assignments. It can only ever find
//! embeddings; running out of candidates proves nothing.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{EmbeddingWitness, OracleVerdict, SearchBudget, VerdictStatus};
use crate::poly::{int, PolySpec};
use crate::templates::{template_edges, Grid, Template};
use crate::{Rational, Result};

pub const BACKEND: &str = "rational-search";

/// Every vector of `[-height, height]^n`, ordered by max-norm and then lexicographically.
fn candidates(n: usize, height: i64) -> Vec<Vec<Rational>> {
    let mut all: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        all = all.into_iter().flat_map(|v| (-height..=height).map(move |x| [v.as_slice(), &[x]].concat())).collect();
    }
    all.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    all.into_iter().map(|v| v.into_iter().map(int).collect()).collect()
}

struct Search<'a> {
    spec: &'a PolySpec,
    candidates: &'a [Vec<Rational>],
    /// Edges grouped by their largest vertex.
    closing: Vec<Vec<Vec<usize>>>,
    assignment: Vec<usize>,
    used: BTreeSet<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn run(&mut self) -> Result<Option<bool>> {
        let v = self.assignment.len();
        if v == self.closing.len() {
            return Ok(Some(true));
        }
        for c in 0..self.candidates.len() {
            if self.used.contains(&c) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Ok(None);
            }
            self.assignment.push(c);
            let mut ok = true;
            for e in &self.closing[v] {
                let pts: Vec<Vec<Rational>> = e.iter().map(|&u| self.candidates[self.assignment[u]].clone()).collect();
                if !self.spec.edge_predicate(&[], &pts)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.used.insert(c);
                match self.run()? {
                    Some(false) => {}
                    found => return Ok(found),
                }
                self.used.remove(&c);
            }
            self.assignment.pop();
        }
        Ok(Some(false))
    }
}

/// Depth-first search over integer points of height at most `height`,
/// assigning grid points in index order and checking each edge once its
/// largest vertex is placed.
pub fn rational_search(
    p: &PolySpec,
    params: &[Rational],
    t: &Template,
    sizes: &[usize],
    height: i64,
    budget: SearchBudget,
) -> Result<OracleVerdict> {
    let spec = p.specialize(params)?;
    let grid = Grid::new(sizes.to_vec())?;
    let h = template_edges(t, &grid, budget.enumeration)?;
    let mut closing = vec![Vec::new(); grid.len()];
    for e in h.edges() {
        closing[*e.last().expect("edges are nonempty")].push(e.clone());
    }
    let cands = candidates(p.n(), height.max(0));
    let mut s = Search {
        spec: &spec,
        candidates: &cands,
        closing,
        assignment: Vec::new(),
        used: BTreeSet::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let status = match s.run()? {
        Some(true) => VerdictStatus::Sat(EmbeddingWitness {
            template: t.clone(),
            sizes: sizes.to_vec(),
            assignment: s.assignment.iter().map(|&c| cands[c].clone()).collect(),
            params: params.to_vec(),
        }),
        _ => VerdictStatus::Unknown,
    };
    Ok(OracleVerdict { status, backend: String::from(BACKEND) })
}
