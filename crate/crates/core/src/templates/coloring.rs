use alloc::vec;
use alloc::vec::Vec;

use super::FiniteHypergraph;
use crate::{Error, Result};

/// Exact chromatic number of a finite hypergraph by backtracking, where a
/// coloring is proper when no edge is monochromatic.
///
/// `max_nodes` caps the total number of search nodes over all color counts.
pub fn chromatic_number_finite(h: &FiniteHypergraph, max_nodes: u64) -> Result<usize> {
    let n = h.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("hypergraph has no vertices".into()));
    }
    // edges indexed by their largest vertex: checked once that vertex is colored
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, e) in h.edges().iter().enumerate() {
        closing[*e.last().expect("k ≥ 1")].push(ei);
    }
    let mut nodes = 0u64;
    for colors in 1..=n {
        let mut coloring = vec![usize::MAX; n];
        let mut search = Search { h, closing: &closing, colors, coloring: &mut coloring, nodes: &mut nodes, max_nodes };
        if search.run(0, 0)? {
            return Ok(colors);
        }
    }
    unreachable!("n colors always suffice");
}

struct Search<'a> {
    h: &'a FiniteHypergraph,
    closing: &'a [Vec<usize>],
    colors: usize,
    coloring: &'a mut [usize],
    nodes: &'a mut u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, v: usize, used: usize) -> Result<bool> {
        if v == self.coloring.len() {
            return Ok(true);
        }
        *self.nodes += 1;
        if *self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded { what: "coloring search nodes", limit: self.max_nodes });
        }
        // a fresh color is interchangeable with any other fresh color
        let limit = (used + 1).min(self.colors);
        for c in 0..limit {
            self.coloring[v] = c;
            let ok = self.closing[v].iter().all(|&ei| {
                let e = &self.h.edges()[ei];
                !e.iter().all(|&u| self.coloring[u] == c)
            });
            if ok && self.run(v + 1, used.max(c + 1))? {
                return Ok(true);
            }
        }
        self.coloring[v] = usize::MAX;
        Ok(false)
    }
}
