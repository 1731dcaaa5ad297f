//! Sub-grids on which a coordinate-wise one-to-one table is injective.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::templates::{Grid, GridPoint};
use crate::{Error, Result};

fn check_table<T>(sizes: &[usize], table: &[T]) -> Result<Grid> {
    let grid = Grid::new(sizes.to_vec())?;
    if table.len() != grid.len() {
        return Err(Error::Precondition(alloc::format!("table has {} entries for {} grid points", table.len(), grid.len())));
    }
    Ok(grid)
}

/// Whether changing exactly one coordinate always changes the value.
pub fn is_one_to_one_in_each_coordinate<T: Ord>(sizes: &[usize], table: &[T]) -> Result<bool> {
    let grid = check_table(sizes, table)?;
    for axis in 0..grid.dim() {
        let stride: usize = sizes[axis + 1..].iter().product();
        for idx in 0..grid.len() {
            if grid.point(idx).coords()[axis] != 0 {
                continue;
            }
            let mut line = BTreeSet::new();
            for step in 0..sizes[axis] {
                if !line.insert(&table[idx + step * stride]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether the table is injective on the product of the given axis subsets.
pub fn is_injective_on<T: Ord>(sizes: &[usize], table: &[T], subsets: &[Vec<usize>]) -> Result<bool> {
    let grid = check_table(sizes, table)?;
    if subsets.len() != grid.dim() {
        return Err(Error::ArityMismatch { expected: grid.dim(), found: subsets.len() });
    }
    if subsets.iter().zip(sizes).any(|(s, &m)| s.iter().any(|&y| y >= m)) {
        return Err(Error::Precondition("subset value outside its axis".into()));
    }
    let mut seen = BTreeSet::new();
    let mut digits = vec![0usize; subsets.len()];
    if subsets.iter().any(Vec::is_empty) {
        return Ok(true);
    }
    loop {
        let p = GridPoint::new(digits.iter().zip(subsets).map(|(&d, s)| s[d]).collect());
        if !seen.insert(&table[grid.index(&p).expect("inside grid")]) {
            return Ok(false);
        }
        let mut axis = digits.len();
        loop {
            if axis == 0 {
                return Ok(true);
            }
            axis -= 1;
            digits[axis] += 1;
            if digits[axis] < subsets[axis].len() {
                break;
            }
            digits[axis] = 0;
        }
    }
}

struct Extraction<'a, T> {
    grid: Grid,
    table: &'a [T],
    targets: &'a [usize],
    chosen: Vec<Vec<usize>>,
    values: BTreeSet<&'a T>,
    nodes: u64,
    max_nodes: u64,
}

impl<'a, T: Ord> Extraction<'a, T> {
    /// Grid indices of the product in which `axis` is fixed to `y`.
    fn slice(&self, axis: usize, y: usize) -> Vec<usize> {
        let mut out = vec![];
        let mut digits = vec![0usize; self.chosen.len()];
        if (0..self.chosen.len()).any(|i| i != axis && self.chosen[i].is_empty()) {
            return out;
        }
        loop {
            let coords = (0..digits.len()).map(|i| if i == axis { y } else { self.chosen[i][digits[i]] }).collect();
            out.push(self.grid.index(&GridPoint::new(coords)).expect("inside grid"));
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if i == axis {
                    continue;
                }
                digits[i] += 1;
                if digits[i] < self.chosen[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    fn search(&mut self) -> Result<bool> {
        // Grow the axis that is furthest below its target, lowest index first.
        let Some(axis) = (0..self.chosen.len())
            .filter(|&i| self.chosen[i].len() < self.targets[i])
            .min_by_key(|&i| (self.chosen[i].len(), i))
        else {
            return Ok(true);
        };
        let start = self.chosen[axis].last().map_or(0, |&y| y + 1);
        let need = self.targets[axis] - self.chosen[axis].len();
        let size = self.grid.sizes()[axis];
        for y in start..size.saturating_sub(need - 1) {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::BudgetExceeded { what: "injective sub-grid search", limit: self.max_nodes });
            }
            let cells = self.slice(axis, y);
            let mut added = Vec::with_capacity(cells.len());
            let mut ok = true;
            for &c in &cells {
                if self.values.insert(&self.table[c]) {
                    added.push(c);
                } else {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.chosen[axis].push(y);
                if self.search()? {
                    return Ok(true);
                }
                self.chosen[axis].pop();
            }
            for c in added {
                self.values.remove(&self.table[c]);
            }
        }
        Ok(false)
    }
}

/// Axis subsets `Y_i` with `|Y_i| = targets[i]` such that the table is
/// injective on `Y_0 × ⋯ × Y_{d−1}`. Subsets are listed in increasing order
/// and the search is lexicographic, so the answer is deterministic.
pub fn extract_injective_subgrid<T: Ord>(
    sizes: &[usize],
    table: &[T],
    targets: &[usize],
    max_nodes: u64,
) -> Result<Vec<Vec<usize>>> {
    let grid = check_table(sizes, table)?;
    if targets.len() != grid.dim() {
        return Err(Error::ArityMismatch { expected: grid.dim(), found: targets.len() });
    }
    if targets.iter().zip(sizes).any(|(&t, &m)| t > m) {
        return Err(Error::Precondition("target exceeds axis size".into()));
    }
    if !is_one_to_one_in_each_coordinate(sizes, table)? {
        return Err(Error::Contract("table is not one-to-one in each coordinate".into()));
    }
    let mut ex = Extraction {
        grid,
        table,
        targets,
        chosen: vec![Vec::new(); sizes.len()],
        values: BTreeSet::new(),
        nodes: 0,
        max_nodes,
    };
    if ex.search()? {
        debug_assert!(is_injective_on(sizes, table, &ex.chosen).unwrap_or(false));
        Ok(ex.chosen)
    } else {
        Err(Error::BudgetExceeded { what: "injective sub-grid search (exhausted)", limit: max_nodes })
    }
}
