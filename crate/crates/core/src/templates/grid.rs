use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::{combinations, Partition};
use super::{Surjection, Template};
use crate::{Error, Result};

/// A point of a finite grid `M₀ × ⋯ × M_{d−1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    coords: Vec<usize>,
}

impl GridPoint {
    pub fn new(coords: Vec<usize>) -> Self {
        GridPoint { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// The finite grid with the given axis sizes. Points are indexed in
/// lexicographic order, the last axis varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    sizes: Vec<usize>,
}

impl Grid {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Precondition("grid needs at least one axis".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::Precondition("grid axes must be nonempty".into()));
        }
        Ok(Grid { sizes })
    }

    pub fn cube(m: usize, d: usize) -> Result<Self> {
        Grid::new(vec![m; d])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, mut index: usize) -> GridPoint {
        let mut coords = vec![0; self.dim()];
        for (c, &m) in coords.iter_mut().zip(&self.sizes).rev() {
            *c = index % m;
            index /= m;
        }
        GridPoint { coords }
    }

    pub fn index(&self, p: &GridPoint) -> Option<usize> {
        if p.dim() != self.dim() {
            return None;
        }
        let mut idx = 0;
        for (&c, &m) in p.coords.iter().zip(&self.sizes) {
            if c >= m {
                return None;
            }
            idx = idx * m + c;
        }
        Some(idx)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

/// Cap on the number of candidates an explicit enumeration may examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_candidates: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_candidates: 5_000_000 }
    }
}

/// A finite k-uniform hypergraph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHypergraph {
    k: usize,
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

impl FiniteHypergraph {
    /// Edges are normalized (sorted, deduplicated).
    pub fn new(k: usize, vertex_count: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.len() != k {
                return Err(Error::Precondition(alloc::format!(
                    "edge {e:?} does not have {k} distinct vertices"
                )));
            }
            if e.iter().any(|&v| v >= vertex_count) {
                return Err(Error::Precondition(alloc::format!("edge {e:?} leaves the vertex set")));
            }
            set.insert(e);
        }
        Ok(FiniteHypergraph { k, vertex_count, edges: set.into_iter().collect() })
    }

    pub fn complete(k: usize, vertex_count: usize) -> Self {
        FiniteHypergraph { k, vertex_count, edges: combinations(vertex_count, k) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn has_edge(&self, e: &[usize]) -> bool {
        let mut e = e.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }
}

/// Whether the k distinct points `q` form a homomorphic image of `t`: some
/// bijection from t's points onto `q` keeps every coordinate equality of `t`.
pub fn is_homomorphic_image(t: &Template, q: &[GridPoint]) -> Result<bool> {
    if q.len() != t.k() {
        return Err(Error::ArityMismatch { expected: t.k(), found: q.len() });
    }
    if let Some(p) = q.iter().find(|p| p.dim() != t.d()) {
        return Err(Error::ArityMismatch { expected: t.d(), found: p.dim() });
    }
    for (i, a) in q.iter().enumerate() {
        if q[i + 1..].contains(a) {
            return Err(Error::InvalidTemplate("duplicate tuple in candidate image".into()));
        }
    }
    let q_parts: Vec<Partition> = (0..t.d())
        .map(|i| {
            let col: Vec<usize> = q.iter().map(|p| p.coords[i]).collect();
            Partition::from_labels(&col)
        })
        .collect();
    Ok(has_coarsening_bijection(t.partitions(), &q_parts))
}

/// Search for a bijection `b` with `t_i ≤ q_i ∘ b` for every coordinate.
pub(crate) fn has_coarsening_bijection(t: &[Partition], q: &[Partition]) -> bool {
    if t.iter().zip(q).any(|(a, b)| b.block_count() > a.block_count()) {
        return false;
    }
    let k = t[0].len();
    let mut assign = vec![usize::MAX; k];
    let mut used = vec![false; k];
    extend_bijection(t, q, 0, &mut assign, &mut used)
}

fn extend_bijection(
    t: &[Partition],
    q: &[Partition],
    r: usize,
    assign: &mut [usize],
    used: &mut [bool],
) -> bool {
    let k = assign.len();
    if r == k {
        return true;
    }
    for target in 0..k {
        if used[target] {
            continue;
        }
        let consistent = (0..r).all(|s| {
            t.iter().zip(q).all(|(tp, qp)| !tp.same_block(r, s) || qp.same_block(target, assign[s]))
        });
        if !consistent {
            continue;
        }
        assign[r] = target;
        used[target] = true;
        if extend_bijection(t, q, r + 1, assign, used) {
            return true;
        }
        used[target] = false;
    }
    assign[r] = usize::MAX;
    false
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `L(grid, t)` by scanning every k-subset of the grid.
pub fn template_hypergraph(t: &Template, grid: &Grid, budget: EnumerationBudget) -> Result<FiniteHypergraph> {
    if grid.dim() != t.d() {
        return Err(Error::ArityMismatch { expected: t.d(), found: grid.dim() });
    }
    let n = grid.len();
    if binomial(n, t.k()) > budget.max_candidates {
        return Err(Error::BudgetExceeded { what: "k-subset scan", limit: budget.max_candidates });
    }
    let points: Vec<GridPoint> = grid.points().collect();
    let mut edges = Vec::new();
    for subset in combinations(n, t.k()) {
        let q: Vec<GridPoint> = subset.iter().map(|&i| points[i].clone()).collect();
        if is_homomorphic_image(t, &q)? {
            edges.push(subset);
        }
    }
    FiniteHypergraph::new(t.k(), n, edges)
}

/// `L(grid, t)` by assigning an axis value to every block of every
/// coordinate partition and keeping the assignments whose points are
/// pairwise distinct.
pub fn template_hypergraph_generated(
    t: &Template,
    grid: &Grid,
    budget: EnumerationBudget,
) -> Result<FiniteHypergraph> {
    if grid.dim() != t.d() {
        return Err(Error::ArityMismatch { expected: t.d(), found: grid.dim() });
    }
    let mut total: u128 = 1;
    for (p, &m) in t.partitions().iter().zip(grid.sizes()) {
        total = total.saturating_mul((m as u128).saturating_pow(p.block_count() as u32));
    }
    if total > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded { what: "block assignment scan", limit: budget.max_candidates });
    }
    // one digit per (coordinate, block)
    let slots: Vec<(usize, usize)> = t
        .partitions()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..p.block_count()).map(move |b| (i, b)))
        .collect();
    let mut digits = vec![0usize; slots.len()];
    let mut edges = BTreeSet::new();
    let k = t.k();
    loop {
        let mut pts: Vec<Vec<usize>> = vec![Vec::with_capacity(t.d()); k];
        let mut offset = 0;
        for p in t.partitions() {
            for (r, pt) in pts.iter_mut().enumerate() {
                pt.push(digits[offset + p.block_of(r)]);
            }
            offset += p.block_count();
        }
        let distinct = (0..k).all(|a| (a + 1..k).all(|b| pts[a] != pts[b]));
        if distinct {
            let mut e: Vec<usize> = pts
                .into_iter()
                .map(|c| grid.index(&GridPoint::new(c)).expect("values inside axes"))
                .collect();
            e.sort_unstable();
            edges.insert(e);
        }
        // odometer increment
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return FiniteHypergraph::new(k, grid.len(), edges);
            }
            pos -= 1;
            let axis = slots[pos].0;
            if digits[pos] + 1 < grid.sizes()[axis] {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// `L(grid, t)` by whichever of the two constructions has fewer candidates.
pub fn template_edges(t: &Template, grid: &Grid, budget: EnumerationBudget) -> Result<FiniteHypergraph> {
    let scan = binomial(grid.len(), t.k()) as u128;
    let mut generated: u128 = 1;
    for (p, &m) in t.partitions().iter().zip(grid.sizes()) {
        generated = generated.saturating_mul((m as u128).saturating_pow(p.block_count() as u32));
    }
    if generated <= scan {
        template_hypergraph_generated(t, grid, budget)
    } else {
        template_hypergraph(t, grid, budget)
    }
}

/// The grid `X^m` with `X_j = ∏_{π(i)=j} M_i`, and the bijection sending a
/// point of `grid` to the point whose coordinate j is the mixed-radix index
/// of its coordinates in `π⁻¹(j)` (ascending, last fastest). It maps
/// `L(grid, P)` into `L(X^m, P^π)`.
pub fn collapse_grid(grid: &Grid, pi: &Surjection) -> Result<(Grid, Vec<usize>)> {
    if pi.d() != grid.dim() {
        return Err(Error::ArityMismatch { expected: grid.dim(), found: pi.d() });
    }
    let sizes: Vec<usize> = (0..pi.m()).map(|j| pi.preimage(j).map(|i| grid.sizes()[i]).product()).collect();
    let target = Grid::new(sizes)?;
    let map = grid
        .points()
        .map(|p| {
            let coords = (0..pi.m())
                .map(|j| pi.preimage(j).fold(0, |acc, i| acc * grid.sizes()[i] + p.coords()[i]))
                .collect();
            target.index(&GridPoint::new(coords)).expect("inside target")
        })
        .collect();
    Ok((target, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::Template;

    fn gp(c: &[usize]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    fn grid4() -> Template {
        Template::from_points(&[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn collapse_grid_is_a_bijection() {
        let g = Grid::new(vec![2, 3, 2]).unwrap();
        let pi = Surjection::new(2, vec![0, 1, 0]).unwrap();
        let (x, map) = collapse_grid(&g, &pi).unwrap();
        assert_eq!(x.sizes(), &[4, 3]);
        let mut seen = map.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
        // (1, 2, 1) -> (1*2 + 1, 2)
        assert_eq!(x.point(map[g.index(&gp(&[1, 2, 1])).unwrap()]).coords(), &[3, 2]);
    }

    #[test]
    fn grid_indexing_round_trips() {
        let g = Grid::new(vec![2, 3, 4]).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.index(&g.point(i)), Some(i));
        }
        assert_eq!(g.point(1).coords(), &[0, 0, 1]);
        assert!(Grid::new(vec![2, 0]).is_err());
    }

    #[test]
    fn realization_is_an_image() {
        let t = grid4();
        assert!(is_homomorphic_image(&t, &t.realize()).unwrap());
    }

    #[test]
    fn block_count_cannot_grow() {
        // coordinate 0 is one block in t, but q has two values there
        let t = Template::from_points(&[vec![0, 0], vec![0, 1], vec![0, 2]]).unwrap();
        let q = [gp(&[0, 0]), gp(&[1, 1]), gp(&[0, 2])];
        assert!(!is_homomorphic_image(&t, &q).unwrap());
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let t = grid4();
        let q = [gp(&[0, 0]), gp(&[0, 0]), gp(&[1, 0]), gp(&[1, 1])];
        assert!(matches!(is_homomorphic_image(&t, &q), Err(Error::InvalidTemplate(_))));
    }

    #[test]
    fn line_template_gives_complete_hypergraph() {
        let t = Template::line(3).unwrap();
        let g = Grid::new(vec![5]).unwrap();
        let h = template_hypergraph(&t, &g, EnumerationBudget::default()).unwrap();
        assert_eq!(h, FiniteHypergraph::complete(3, 5));
    }

    #[test]
    fn grid_template_on_two_by_two_has_one_edge() {
        let g = Grid::cube(2, 2).unwrap();
        let h = template_hypergraph(&grid4(), &g, EnumerationBudget::default()).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn too_small_grid_has_no_edges() {
        let t = Template::line(4).unwrap();
        let g = Grid::new(vec![3]).unwrap();
        assert!(template_hypergraph(&t, &g, EnumerationBudget::default()).unwrap().edges().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let t = Template::line(4).unwrap();
        let g = Grid::new(vec![100]).unwrap();
        let tight = EnumerationBudget { max_candidates: 10 };
        assert!(matches!(template_hypergraph(&t, &g, tight), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(template_hypergraph_generated(&t, &g, tight), Err(Error::BudgetExceeded { .. })));
    }
}
