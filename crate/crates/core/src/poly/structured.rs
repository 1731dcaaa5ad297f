use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::Poly;
use crate::templates::{permutations, Partition, Template};
use crate::{Error, Rational, Result};

/// A ((k,n)+l)-ary polynomial: variables `x_{i,j}` (block `i < k`, slot
/// `j < n`) followed by parameters `y_t` (`t < l`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolySpec {
    k: usize,
    n: usize,
    l: usize,
    poly: Poly,
}

impl PolySpec {
    pub fn new(k: usize, n: usize, l: usize, poly: Poly) -> Result<Self> {
        if k < 1 || n < 1 {
            return Err(Error::Precondition("need k ≥ 1 and n ≥ 1".into()));
        }
        if poly.nvars() != k * n + l {
            return Err(Error::ArityMismatch { expected: k * n + l, found: poly.nvars() });
        }
        Ok(PolySpec { k, n, l, poly })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn nvars(&self) -> usize {
        self.k * self.n + self.l
    }

    pub fn x_index(&self, block: usize, slot: usize) -> usize {
        block * self.n + slot
    }

    pub fn y_index(&self, t: usize) -> usize {
        self.k * self.n + t
    }

    pub fn var_name(&self, idx: usize) -> String {
        if idx < self.k * self.n {
            alloc::format!("x{}.{}", idx / self.n, idx % self.n)
        } else {
            alloc::format!("y{}", idx - self.k * self.n)
        }
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        let bad = || Error::Parse(alloc::format!("unknown variable {name:?}"));
        if let Some(rest) = name.strip_prefix('x') {
            let (b, s) = rest.split_once('.').ok_or_else(bad)?;
            let b: usize = b.parse().map_err(|_| bad())?;
            let s: usize = s.parse().map_err(|_| bad())?;
            if b >= self.k || s >= self.n {
                return Err(bad());
            }
            Ok(self.x_index(b, s))
        } else if let Some(rest) = name.strip_prefix('y') {
            let t: usize = rest.parse().map_err(|_| bad())?;
            if t >= self.l {
                return Err(bad());
            }
            Ok(self.y_index(t))
        } else {
            Err(bad())
        }
    }

    /// Substitutes the parameter vector, leaving a (k,n)-ary polynomial.
    pub fn specialize(&self, params: &[Rational]) -> Result<PolySpec> {
        if params.len() != self.l {
            return Err(Error::ArityMismatch { expected: self.l, found: params.len() });
        }
        let assign: Vec<(usize, Rational)> =
            params.iter().enumerate().map(|(t, c)| (self.y_index(t), c.clone())).collect();
        let poly = self.poly.partial_evaluate(&assign).with_nvars(self.k * self.n)?;
        Ok(PolySpec { k: self.k, n: self.n, l: 0, poly })
    }

    /// Exact value at k points of ℚ^n and the parameters.
    pub fn evaluate(&self, points: &[Vec<Rational>], params: &[Rational]) -> Result<Rational> {
        if points.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, found: points.len() });
        }
        if params.len() != self.l {
            return Err(Error::ArityMismatch { expected: self.l, found: params.len() });
        }
        let mut v = Vec::with_capacity(self.nvars());
        for p in points {
            if p.len() != self.n {
                return Err(Error::ArityMismatch { expected: self.n, found: p.len() });
            }
            v.extend(p.iter().cloned());
        }
        v.extend(params.iter().cloned());
        self.poly.evaluate(&v)
    }

    /// `p(x_{σ(0)}, …, x_{σ(k−1)})`: evaluating it at `(a_0, …)` gives `p(a_{σ(0)}, …)`.
    pub fn permute_blocks(&self, sigma: &[usize]) -> PolySpec {
        let map: Vec<usize> = (0..self.nvars())
            .map(|idx| {
                if idx < self.k * self.n {
                    self.x_index(sigma[idx / self.n], idx % self.n)
                } else {
                    idx
                }
            })
            .collect();
        PolySpec { poly: self.poly.rename(&map, self.nvars()), ..self.clone() }
    }

    /// Every ordering of the blocks gives the same polynomial; checking the
    /// adjacent transpositions suffices since they generate all orderings.
    pub fn is_symmetric(&self) -> bool {
        (0..self.k.saturating_sub(1)).all(|i| {
            let mut sigma: Vec<usize> = (0..self.k).collect();
            sigma.swap(i, i + 1);
            self.permute_blocks(&sigma).poly == self.poly
        })
    }

    /// Vanishes identically whenever two blocks coincide.
    pub fn is_reflexive(&self) -> bool {
        (0..self.k).all(|i| {
            (i + 1..self.k).all(|j| {
                let map: Vec<usize> = (0..self.nvars())
                    .map(|idx| if idx / self.n == j && idx < self.k * self.n { self.x_index(i, idx % self.n) } else { idx })
                    .collect();
                self.poly.rename(&map, self.nvars()).is_zero()
            })
        })
    }

    /// Degree in the x-variables only.
    pub fn x_degree(&self) -> u32 {
        let xs = self.k * self.n;
        self.poly
            .terms()
            .map(|(m, _)| m.exponents()[..xs].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Whether the k distinct points form an edge of the zero hypergraph:
    /// some ordering of them is a zero.
    pub fn edge_predicate(&self, params: &[Rational], pts: &[Vec<Rational>]) -> Result<bool> {
        if pts.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, found: pts.len() });
        }
        for (i, a) in pts.iter().enumerate() {
            if pts[i + 1..].contains(a) {
                return Err(Error::Precondition("edge_predicate needs pairwise distinct points".into()));
            }
        }
        let spec = self.specialize(params)?;
        for sigma in permutations(self.k) {
            let ordered: Vec<Vec<Rational>> = sigma.iter().map(|&r| pts[r].clone()).collect();
            if spec.evaluate(&ordered, &[])?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The symmetric-reflexive closure kept in factored form.
    pub fn symmetrize_reflexivize(&self) -> Closure {
        let permuted = permutations(self.k)
            .into_iter()
            .map(|sigma| {
                let q = self.permute_blocks(&sigma);
                (sigma, q)
            })
            .collect();
        let mut separations = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                let mut s = Poly::zero(self.nvars());
                for t in 0..self.n {
                    let diff = &Poly::var(self.nvars(), self.x_index(i, t)) - &Poly::var(self.nvars(), self.x_index(j, t));
                    s = &s + &(&diff * &diff);
                }
                separations.push(((i, j), s));
            }
        }
        Closure { k: self.k, n: self.n, l: self.l, permuted, separations }
    }
}

/// `∏_σ p(x_{σ(0)}, …) · ∏_{i<j} ‖x_i − x_j‖²`, never expanded.
#[derive(Debug, Clone)]
pub struct Closure {
    k: usize,
    n: usize,
    l: usize,
    /// `(σ, q)` with `q(a_0, …) = p(a_{σ(0)}, …)`.
    pub permuted: Vec<(Vec<usize>, PolySpec)>,
    /// `((i, j), Σ_t (x_{i,t} − x_{j,t})²)`.
    pub separations: Vec<((usize, usize), Poly)>,
}

impl Closure {
    pub fn vanishes_at(&self, points: &[Vec<Rational>], params: &[Rational]) -> Result<bool> {
        if points.len() != self.k || params.len() != self.l {
            return Err(Error::ArityMismatch { expected: self.k, found: points.len() });
        }
        let mut v: Vec<Rational> = points.iter().flat_map(|p| p.iter().cloned()).collect();
        if v.len() != self.k * self.n {
            return Err(Error::ArityMismatch { expected: self.k * self.n, found: v.len() });
        }
        v.extend(params.iter().cloned());
        for (_, s) in &self.separations {
            if s.evaluate(&v)?.is_zero() {
                return Ok(true);
            }
        }
        for (_, q) in &self.permuted {
            if q.poly().evaluate(&v)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A polynomial map ℚ^m → ℚ^n, components in variables `t_0, …, t_{m−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    m: usize,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(m: usize, components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Precondition("a map needs at least one component".into()));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != m) {
            return Err(Error::ArityMismatch { expected: m, found: c.nvars() });
        }
        Ok(PolyMap { m, components })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn apply(&self, input: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.evaluate(input)).collect()
    }

    pub fn is_affine(&self) -> bool {
        self.components.iter().all(|c| c.total_degree() <= 1)
    }
}

/// One fresh variable per (coordinate, block) of the pattern.
#[derive(Debug, Clone)]
pub struct BlockVariables {
    offsets: Vec<usize>,
    total: usize,
}

impl BlockVariables {
    pub fn new(pattern: &Template) -> Self {
        let mut offsets = Vec::with_capacity(pattern.d());
        let mut total = 0;
        for p in pattern.partitions() {
            offsets.push(total);
            total += p.block_count();
        }
        BlockVariables { offsets, total }
    }

    pub fn count(&self) -> usize {
        self.total
    }

    pub fn index(&self, coordinate: usize, block: usize) -> usize {
        self.offsets[coordinate] + block
    }

    /// Variable names `z{coordinate}.{block}`.
    pub fn name(&self, idx: usize) -> String {
        let j = self.offsets.iter().rposition(|&o| o <= idx).expect("offset 0 exists");
        alloc::format!("z{}.{}", j, idx - self.offsets[j])
    }
}

/// `p(f(u_{order[0]}), …, f(u_{order[k−1]}))` where `u_r` is the generic
/// input of pattern point `r`: its j-th entry is the variable of r's block in
/// coordinate j. The result lives in the block variables of the pattern.
pub fn compose(p: &PolySpec, f: &PolyMap, pattern: &Template, order: &[usize]) -> Result<Poly> {
    if p.l() != 0 {
        return Err(Error::Precondition("substitute parameters before composing".into()));
    }
    if f.n() != p.n() {
        return Err(Error::ArityMismatch { expected: p.n(), found: f.n() });
    }
    if pattern.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: pattern.k() });
    }
    if pattern.d() != f.m() {
        return Err(Error::ArityMismatch { expected: f.m(), found: pattern.d() });
    }
    if order.len() != p.k() || !is_permutation(order) {
        return Err(Error::Precondition("order must be a permutation of the points".into()));
    }
    let vars = BlockVariables::new(pattern);
    let images = point_images(f, pattern.partitions(), &vars)?;
    let mut subst = Vec::with_capacity(p.nvars());
    for &r in order {
        subst.extend(images[r].iter().cloned());
    }
    p.poly().substitute(&subst)
}

/// `f(u_r)` for every pattern point r, as polynomials in block variables.
pub(crate) fn point_images(f: &PolyMap, parts: &[Partition], vars: &BlockVariables) -> Result<Vec<Vec<Poly>>> {
    let k = parts[0].len();
    let nv = vars.count();
    (0..k)
        .map(|r| {
            let input: Vec<Poly> =
                parts.iter().enumerate().map(|(j, part)| Poly::var(nv, vars.index(j, part.block_of(r)))).collect();
            f.components().iter().map(|c| c.substitute(&input)).collect()
        })
        .collect()
}

pub(crate) fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    order.iter().all(|&r| r < seen.len() && !core::mem::replace(&mut seen[r], true))
}
