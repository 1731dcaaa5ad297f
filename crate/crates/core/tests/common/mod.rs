//! Brute-force reference implementations the library is checked against.
//! Nothing here calls the code paths it is used to check.

#![allow(dead_code)]

use hyperchrom_core::cardinals::OrdinalIndex;
use hyperchrom_core::embed::EmbeddingWitness;
use hyperchrom_core::poly::PolySpec;
use hyperchrom_core::templates::{Grid, GridPoint, Template};
use hyperchrom_core::Rational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Least number of coordinates on which the points of `t` differ pairwise.
pub fn min_distinguisher_size(t: &Template) -> usize {
    let d = t.d();
    (0u32..1 << d)
        .filter(|&mask| {
            (0..t.k()).all(|r| {
                (r + 1..t.k()).all(|s| (0..d).any(|i| mask >> i & 1 == 1 && !t.partition(i).same_block(r, s)))
            })
        })
        .map(u32::count_ones)
        .min()
        .expect("the full set distinguishes") as usize
}

/// Whether the k distinct points are the image of `t` under a bijection
/// keeping every coordinate equality of `t`, by backtracking over bijections.
pub fn is_edge(t: &Template, pts: &[GridPoint]) -> bool {
    fn extend(t: &Template, pts: &[GridPoint], sigma: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let r = sigma.len();
        if r == t.k() {
            return true;
        }
        for c in 0..t.k() {
            if used[c] {
                continue;
            }
            let fits = (0..r).all(|s| {
                (0..t.d()).all(|i| !t.partition(i).same_block(r, s) || pts[c].coords()[i] == pts[sigma[s]].coords()[i])
            });
            if fits {
                used[c] = true;
                sigma.push(c);
                if extend(t, pts, sigma, used) {
                    return true;
                }
                sigma.pop();
                used[c] = false;
            }
        }
        false
    }
    extend(t, pts, &mut Vec::new(), &mut vec![false; t.k()])
}

/// `L(grid, t)` straight from the definition, edges as sorted index lists.
pub fn edges(t: &Template, grid: &Grid) -> Vec<Vec<usize>> {
    let pts: Vec<GridPoint> = grid.points().collect();
    let mut out: Vec<Vec<usize>> = subsets(pts.len(), t.k())
        .into_iter()
        .filter(|s| {
            let q: Vec<GridPoint> = s.iter().map(|&i| pts[i].clone()).collect();
            is_edge(t, &q)
        })
        .collect();
    out.sort();
    out
}

/// Rank by Gaussian elimination over ℚ.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot;
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// For a polynomial of degree ≤ 1, the equation `row · h = rhs` obtained by
/// putting grid point `e[σ(r)]` into block r.
fn ordering_row(spec: &PolySpec, nv: usize, e: &[usize], sigma: &[usize]) -> (Vec<Rational>, Rational) {
    let n = spec.n();
    let (coeffs, constant) = spec.poly().as_affine().expect("linear polynomial");
    let mut row = vec![Rational::zero(); nv];
    for r in 0..spec.k() {
        for s in 0..n {
            row[e[sigma[r]] * n + s] += &coeffs[spec.x_index(r, s)];
        }
    }
    (row, -constant)
}

/// Whether some injective `h : grid → ℚ^n` sends every edge of `L(grid, t)`
/// onto a zero of the linear `spec`, by trying every choice of vanishing
/// ordering per edge. `None` when there are more than `limit` choices.
pub fn linear_embeds(spec: &PolySpec, t: &Template, grid: &Grid, limit: u64) -> Option<bool> {
    let n = spec.n();
    let nv = grid.len() * n;
    let mut options: Vec<Vec<(Vec<Rational>, Rational)>> = Vec::new();
    for e in edges(t, grid) {
        let mut opts: Vec<(Vec<Rational>, Rational)> =
            permutations(spec.k()).iter().map(|s| ordering_row(spec, nv, &e, s)).collect();
        if opts.iter().any(|(a, b)| a.iter().all(Zero::is_zero) && b.is_zero()) {
            continue;
        }
        opts.sort();
        opts.dedup();
        options.push(opts);
    }
    let total = options.iter().try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64))?;
    if total > limit {
        return None;
    }
    let mut choice = vec![0usize; options.len()];
    loop {
        let rows: Vec<Vec<Rational>> = options
            .iter()
            .zip(&choice)
            .map(|(o, &c)| {
                let (a, b) = &o[c];
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        if feasible(rows, grid.len(), n) {
            return Some(true);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Some(false);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Augmented rows `[a | b]`: consistent, and no pair of points is forced equal.
fn feasible(rows: Vec<Vec<Rational>>, points: usize, n: usize) -> bool {
    let nv = points * n;
    let a: Vec<Vec<Rational>> = rows.iter().map(|r| r[..nv].to_vec()).collect();
    let base = rank(rows.clone());
    if rank(a) < base {
        return false;
    }
    for u in 0..points {
        for v in u + 1..points {
            let forced = (0..n).all(|s| {
                let mut extra = vec![Rational::zero(); nv + 1];
                extra[u * n + s] = Rational::from_integer(1.into());
                extra[v * n + s] = Rational::from_integer((-1).into());
                let mut with = rows.clone();
                with.push(extra);
                rank(with) == base
            });
            if forced {
                return false;
            }
        }
    }
    true
}

/// Every ordinal `ω·a + b` with `a ≤ 2` and `b ≤ max_b`.
pub fn small_ordinals(max_b: u64) -> Vec<OrdinalIndex> {
    let mut out = Vec::new();
    for a in 0..=2u64 {
        for b in 0..=max_b {
            let mut terms = Vec::new();
            if a > 0 {
                terms.push((1, a));
            }
            if b > 0 {
                terms.push((0, b));
            }
            out.push(OrdinalIndex::from_terms(terms).unwrap());
        }
    }
    out
}

/// A table on `sizes` that is one-to-one in each coordinate, filled point by
/// point with values drawn from `0..range` that avoid the values already on
/// the same axis lines. Small ranges give many collisions.
pub fn random_table(rng: &mut StdRng, sizes: &[usize], range: i64) -> Vec<i64> {
    let grid = Grid::new(sizes.to_vec()).unwrap();
    let forbidden_max: usize = sizes.iter().map(|m| m - 1).sum();
    assert!(range as usize > forbidden_max, "range too small to stay one-to-one");
    let mut table: Vec<i64> = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let p = grid.point(idx);
        let used: Vec<i64> = (0..idx)
            .filter(|&j| {
                let q = grid.point(j);
                p.coords().iter().zip(q.coords()).filter(|(a, b)| a != b).count() == 1
            })
            .map(|j| table[j])
            .collect();
        loop {
            let v = rng.random_range(0..range);
            if !used.contains(&v) {
                table.push(v);
                break;
            }
        }
    }
    table
}

/// `Σ wᵢ·πᵢ(cᵢ)` for random axis permutations `πᵢ`: one-to-one in each
/// coordinate, with collisions along every anti-diagonal.
pub fn weighted_sum_table(rng: &mut StdRng, sizes: &[usize], weights: &[i64]) -> Vec<i64> {
    let perms: Vec<Vec<i64>> = sizes
        .iter()
        .map(|&m| {
            let mut p: Vec<i64> = (0..m as i64).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let grid = Grid::new(sizes.to_vec()).unwrap();
    grid.points().map(|p| p.coords().iter().enumerate().map(|(i, &c)| weights[i] * perms[i][c]).sum()).collect()
}

/// Whether the table is injective on the product of the subsets, by listing it.
pub fn injective_on(sizes: &[usize], table: &[i64], subsets: &[Vec<usize>]) -> bool {
    let grid = Grid::new(sizes.to_vec()).unwrap();
    let mut values = Vec::new();
    for (idx, &v) in table.iter().enumerate().take(grid.len()) {
        if grid.point(idx).coords().iter().zip(subsets).all(|(c, s)| s.contains(c)) {
            values.push(v);
        }
    }
    let expected: usize = subsets.iter().map(Vec::len).product();
    let count = values.len();
    values.sort_unstable();
    values.dedup();
    count == expected && values.len() == count
}

/// Whether `w` is an embedding, straight from the definition: the assignment
/// is injective and every edge of `L(grid, t)` vanishes in some ordering.
pub fn witness_holds(spec: &PolySpec, w: &EmbeddingWitness) -> bool {
    let grid = Grid::new(w.sizes.clone()).unwrap();
    if w.assignment.len() != grid.len() || w.assignment.iter().any(|a| a.len() != spec.n()) {
        return false;
    }
    let mut values = w.assignment.clone();
    values.sort();
    values.dedup();
    if values.len() != w.assignment.len() {
        return false;
    }
    edges(&w.template, &grid).iter().all(|e| {
        permutations(spec.k()).iter().any(|sigma| {
            let pts: Vec<Vec<Rational>> = sigma.iter().map(|&s| w.assignment[e[s]].clone()).collect();
            spec.evaluate(&pts, &w.params).unwrap().is_zero()
        })
    })
}
