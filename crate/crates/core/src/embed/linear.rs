//! Exact decision of finite embeddings for polynomials of degree at most one.
//!
//! The unknowns are the coordinates `h(α)_t`, numbered `α·n + t`. Each edge
//! must vanish under some ordering, and for linear `p` every ordering is an
//! affine equation in the unknowns; the search branches over the distinct
//! equations of an edge. A branch survives while its system is consistent
//! and no two grid points are forced to coincide. Over an infinite field a
//! nonempty affine subspace is not covered by finitely many proper affine
//! subspaces, so such a leaf always yields an injective solution.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::linalg::{rank, Added, AffineForm, AffineSystem};
use super::{EmbeddingWitness, NonEmbeddingCertificate, OracleVerdict, Refutation, SearchBudget, VerdictStatus};
use crate::poly::{Poly, PolySpec};
use crate::templates::{permutations, template_edges, Grid, Template};
use crate::{Error, Rational, Result};

pub const BACKEND: &str = "exact-linear";

/// A node of the refutation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchNode {
    /// The equations on the path have no common solution.
    Inconsistent,
    /// The equations on the path force `h(a) = h(b)`.
    Collision(usize, usize),
    /// Every ordering of `edges[edge]` either gives a nonzero constant or an
    /// equation proportional to one of the children's orderings.
    Branch { edge: usize, children: Vec<(Vec<usize>, BranchNode)> },
}

impl BranchNode {
    pub fn size(&self) -> usize {
        match self {
            BranchNode::Branch { children, .. } => 1 + children.iter().map(|(_, c)| c.size()).sum::<usize>(),
            _ => 1,
        }
    }
}

/// The full branch log; edges are grid-point indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearTranscript {
    pub edges: Vec<Vec<usize>>,
    pub root: BranchNode,
}

struct Class {
    sigma: Vec<usize>,
    form: AffineForm,
}

struct Search<'a> {
    n: usize,
    vertices: usize,
    edges: &'a [Vec<usize>],
    classes: &'a [Vec<Class>],
    nodes: u64,
    max_nodes: u64,
}

enum Outcome {
    Refuted(BranchNode),
    Feasible(AffineSystem),
    OutOfBudget,
}

/// The specialized x-coefficients of `p` and its constant, or an error when
/// `p` is not affine in the x-variables.
fn affine_part(p: &PolySpec, params: &[Rational]) -> Result<(Vec<Rational>, Rational)> {
    let s = p.specialize(params)?;
    s.poly()
        .as_affine()
        .ok_or_else(|| Error::Unsupported("the exact linear backend needs degree ≤ 1 in the x-variables".into()))
}

/// The equation "ordering `sigma` of `edge` is a zero", with `u_{v·n+t}`
/// receiving the coefficient of `x_{i,t}` where `edge[sigma[i]] = v`.
fn ordering_equation(
    coeffs: &[Rational],
    constant: &Rational,
    n: usize,
    nvars: usize,
    edge: &[usize],
    sigma: &[usize],
) -> AffineForm {
    let mut f = AffineForm::zero(nvars);
    for (i, &r) in sigma.iter().enumerate() {
        let v = edge[r];
        for t in 0..n {
            f.coeffs[v * n + t] += &coeffs[i * n + t];
        }
    }
    f.constant = constant.clone();
    f
}

/// Distinct satisfiable equations of an edge, with the least ordering giving
/// each. `None` means some ordering is identically zero, so the edge never
/// constrains anything.
fn edge_classes(coeffs: &[Rational], constant: &Rational, n: usize, nvars: usize, edge: &[usize]) -> Option<Vec<Class>> {
    let mut seen: BTreeMap<AffineForm, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for sigma in permutations(edge.len()) {
        let f = ordering_equation(coeffs, constant, n, nvars, edge, &sigma);
        if f.is_zero() {
            return None;
        }
        if f.is_constant() {
            continue;
        }
        let norm = f.normalized();
        if seen.insert(norm.clone(), ()).is_none() {
            out.push(Class { sigma, form: norm });
        }
    }
    Some(out)
}

/// Two grid points whose images coincide on the whole solution set, least first.
fn find_collision(sys: &AffineSystem, vertices: usize, n: usize) -> Option<(usize, usize)> {
    let free = sys.free_vars();
    let mut images: Vec<(Vec<AffineForm>, usize)> = (0..vertices)
        .map(|v| ((0..n).map(|t| sys.parametrize(v * n + t, &free)).collect(), v))
        .collect();
    images.sort();
    images
        .windows(2)
        .filter(|w| w[0].0 == w[1].0)
        .map(|w| (w[0].1.min(w[1].1), w[0].1.max(w[1].1)))
        .min()
}

impl Search<'_> {
    fn run(&mut self, sys: AffineSystem, open: Vec<usize>) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Outcome::OutOfBudget;
        }
        // Drop edges already satisfied; pick the most constrained remaining one.
        let mut remaining = Vec::with_capacity(open.len());
        let mut best: Option<(usize, Vec<usize>)> = None;
        'edges: for &e in &open {
            let mut live = Vec::new();
            for (c, class) in self.classes[e].iter().enumerate() {
                match sys.reduce(&class.form) {
                    r if r.is_zero() => continue 'edges,
                    r if r.is_constant() => {}
                    _ => live.push(c),
                }
            }
            remaining.push(e);
            if best.as_ref().is_none_or(|(_, l)| live.len() < l.len()) {
                best = Some((e, live));
            }
        }
        let Some((edge, live)) = best else {
            return Outcome::Feasible(sys);
        };
        remaining.retain(|&e| e != edge);
        let mut children = Vec::new();
        // Orderings whose equation is inconsistent with the path are separate leaves.
        for (c, class) in self.classes[edge].iter().enumerate() {
            if !live.contains(&c) {
                children.push((class.sigma.clone(), BranchNode::Inconsistent));
                continue;
            }
            let mut child = sys.clone();
            match child.add(&class.form) {
                Added::Inconsistent => {
                    children.push((class.sigma.clone(), BranchNode::Inconsistent));
                    continue;
                }
                Added::Redundant => unreachable!("redundant classes satisfy the edge"),
                Added::NewPivot => {}
            }
            if let Some((a, b)) = find_collision(&child, self.vertices, self.n) {
                children.push((class.sigma.clone(), BranchNode::Collision(a, b)));
                continue;
            }
            match self.run(child, remaining.clone()) {
                Outcome::Refuted(node) => children.push((class.sigma.clone(), node)),
                other => return other,
            }
        }
        Outcome::Refuted(BranchNode::Branch { edge, children })
    }
}

/// Free unknowns set to `s, s², s³, …` for the least `s ≥ 1` that keeps all
/// grid points apart. Each difference is a nonzero polynomial in `s`, so this stops.
fn witness_values(sys: &AffineSystem, vertices: usize, n: usize) -> Vec<Vec<Rational>> {
    let free = sys.free_vars();
    let mut s = Rational::one();
    loop {
        let mut values = Vec::with_capacity(free.len());
        let mut pow = s.clone();
        for _ in &free {
            values.push(pow.clone());
            pow = &pow * &s;
        }
        let sol = sys.solution(&free, &values);
        let assignment: Vec<Vec<Rational>> = (0..vertices).map(|v| sol[v * n..(v + 1) * n].to_vec()).collect();
        let mut sorted = assignment.clone();
        sorted.sort();
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            return assignment;
        }
        s += Rational::one();
    }
}

/// Complete decision of whether `L(sizes, t)` embeds into the zero
/// hypergraph of an affine `p`.
pub fn refute_embedding_linear(
    p: &PolySpec,
    params: &[Rational],
    t: &Template,
    sizes: &[usize],
    budget: SearchBudget,
) -> Result<OracleVerdict> {
    let (coeffs, constant) = affine_part(p, params)?;
    if t.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: t.k() });
    }
    let grid = Grid::new(sizes.to_vec())?;
    let h = template_edges(t, &grid, budget.enumeration)?;
    let n = p.n();
    let vertices = grid.len();
    let nvars = vertices * n;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut classes = Vec::new();
    for e in h.edges() {
        if let Some(c) = edge_classes(&coeffs, &constant, n, nvars, e) {
            edges.push(e.clone());
            classes.push(c);
        }
    }
    let mut search = Search { n, vertices, edges: &edges, classes: &classes, nodes: 0, max_nodes: budget.max_nodes };
    let open: Vec<usize> = (0..edges.len()).collect();
    let outcome = search.run(AffineSystem::new(nvars), open);
    let status = match outcome {
        Outcome::OutOfBudget => VerdictStatus::Unknown,
        Outcome::Feasible(sys) => VerdictStatus::Sat(EmbeddingWitness {
            template: t.clone(),
            sizes: sizes.to_vec(),
            assignment: witness_values(&sys, vertices, n),
            params: params.to_vec(),
        }),
        Outcome::Refuted(root) => VerdictStatus::Unsat(NonEmbeddingCertificate {
            template: t.clone(),
            sizes: sizes.to_vec(),
            params: params.to_vec(),
            refutation: Refutation::LinearBranchExhaustion(LinearTranscript { edges: search.edges.to_vec(), root }),
        }),
    };
    Ok(OracleVerdict { status, backend: String::from(BACKEND) })
}

/// `[A | b]` row of an ordering, obtained by substituting the unknowns into `p`.
fn substituted_row(spec: &PolySpec, n: usize, nvars: usize, edge: &[usize], sigma: &[usize]) -> Result<Vec<Rational>> {
    let mut images = Vec::with_capacity(spec.nvars());
    for &r in sigma {
        for t in 0..n {
            images.push(Poly::var(nvars, edge[r] * n + t));
        }
    }
    let q = spec.poly().substitute(&images)?;
    let (mut row, c) = q
        .as_affine()
        .ok_or_else(|| Error::Unsupported("linear transcript for a nonlinear polynomial".into()))?;
    row.push(c);
    Ok(row)
}

fn is_nonzero_constant(row: &[Rational]) -> bool {
    let (c, lin) = row.split_last().expect("row has a constant");
    lin.iter().all(Zero::is_zero) && !c.is_zero()
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    rank(vec![a.to_vec(), b.to_vec()]) <= 1 && (a.iter().all(Zero::is_zero) == b.iter().all(Zero::is_zero))
}

struct Replay<'a> {
    spec: PolySpec,
    n: usize,
    nvars: usize,
    vertices: usize,
    edges: &'a [Vec<usize>],
}

impl Replay<'_> {
    fn check(&self, node: &BranchNode, path: &mut Vec<Vec<Rational>>) -> Result<bool> {
        match node {
            BranchNode::Inconsistent => {
                let lin: Vec<Vec<Rational>> = path.iter().map(|r| r[..self.nvars].to_vec()).collect();
                Ok(!path.is_empty() && rank(lin) < rank(path.clone()))
            }
            BranchNode::Collision(a, b) => {
                if a == b || *a >= self.vertices || *b >= self.vertices {
                    return Ok(false);
                }
                let lin: Vec<Vec<Rational>> = path.iter().map(|r| r[..self.nvars].to_vec()).collect();
                let full = rank(path.clone());
                if rank(lin) < full {
                    return Ok(false);
                }
                for t in 0..self.n {
                    let mut row = vec![Rational::zero(); self.nvars + 1];
                    row[a * self.n + t] = Rational::one();
                    row[b * self.n + t] = -Rational::one();
                    let mut m = path.clone();
                    m.push(row);
                    if rank(m) != full {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            BranchNode::Branch { edge, children } => {
                let Some(e) = self.edges.get(*edge) else { return Ok(false) };
                let k = self.spec.k();
                let mut rows = Vec::with_capacity(children.len());
                for (sigma, _) in children {
                    if sigma.len() != k || !crate::poly::is_permutation(sigma) {
                        return Ok(false);
                    }
                    rows.push(substituted_row(&self.spec, self.n, self.nvars, e, sigma)?);
                }
                for tau in permutations(k) {
                    let row = substituted_row(&self.spec, self.n, self.nvars, e, &tau)?;
                    if !is_nonzero_constant(&row) && !rows.iter().any(|r| proportional(r, &row)) {
                        return Ok(false);
                    }
                }
                for (row, (_, child)) in rows.into_iter().zip(children) {
                    path.push(row);
                    let ok = self.check(child, path)?;
                    path.pop();
                    if !ok {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Re-checks a linear non-embedding certificate without the search: the
/// edges are recomputed from the template, every branch is checked to cover
/// all orderings, and every leaf is re-solved by fresh elimination.
pub fn replay_refutation(cert: &NonEmbeddingCertificate, p: &PolySpec) -> Result<bool> {
    let Refutation::LinearBranchExhaustion(tr) = &cert.refutation else {
        return Err(Error::Unsupported("only linear transcripts can be replayed locally".into()));
    };
    if cert.template.k() != p.k() {
        return Err(Error::ArityMismatch { expected: p.k(), found: cert.template.k() });
    }
    let spec = p.specialize(&cert.params)?;
    if spec.x_degree() > 1 {
        return Ok(false);
    }
    let grid = Grid::new(cert.sizes.clone())?;
    let h = template_edges(&cert.template, &grid, Default::default())?;
    if !tr.edges.iter().all(|e| h.has_edge(e)) {
        return Ok(false);
    }
    let n = p.n();
    let replay = Replay { spec, n, nvars: grid.len() * n, vertices: grid.len(), edges: &tr.edges };
    replay.check(&tr.root, &mut Vec::new())
}
