use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::partition::{all_partitions, combinations, permutations, Partition};
use super::GridPoint;
use crate::{Error, Result};

/// A d-dimensional k-template, kept up to the choice of coordinate values:
/// coordinate `i` is described by the partition of the k points into classes
/// of equal i-th coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Template {
    k: usize,
    partitions: Vec<Partition>,
}

impl Template {
    pub fn new(k: usize, partitions: Vec<Partition>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidTemplate(format!("k must be at least 2, got {k}")));
        }
        if partitions.is_empty() {
            return Err(Error::InvalidTemplate("dimension must be at least 1".into()));
        }
        if let Some(p) = partitions.iter().find(|p| p.len() != k) {
            return Err(Error::InvalidTemplate(format!(
                "partition over {} points in a {k}-template",
                p.len()
            )));
        }
        let t = Template { k, partitions };
        if !t.meet_all().is_singletons() {
            return Err(Error::InvalidTemplate(
                "tuples are not pairwise distinct (meet of coordinates is not discrete)".into(),
            ));
        }
        Ok(t)
    }

    /// The template whose points are the given pairwise-distinct tuples.
    pub fn from_points<T: PartialEq>(points: &[Vec<T>]) -> Result<Self> {
        let k = points.len();
        let d = points.first().map_or(0, Vec::len);
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::ArityMismatch { expected: d, found: p.len() });
        }
        let partitions = (0..d)
            .map(|i| {
                let col: Vec<&T> = points.iter().map(|p| &p[i]).collect();
                Partition::from_labels(&col)
            })
            .collect();
        Template::new(k, partitions)
    }

    /// The unique (up to isomorphism) 1-dimensional k-template.
    pub fn line(k: usize) -> Result<Self> {
        Template::new(k, alloc::vec![Partition::singletons(k)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.partitions.len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.partitions[i]
    }

    fn meet_all(&self) -> Partition {
        meet_of(self.partitions.iter())
    }

    /// Relabels points so that point `r` becomes `perm[r]`.
    pub fn relabel(&self, perm: &[usize]) -> Template {
        Template {
            k: self.k,
            partitions: self.partitions.iter().map(|p| p.relabel(perm)).collect(),
        }
    }

    /// Least representative over all point relabelings, together with the
    /// relabeling that produced it.
    pub fn canonical_with_perm(&self) -> (Template, Vec<usize>) {
        let (parts, perm) = canonical_parts(self.k, &self.partitions);
        (Template { k: self.k, partitions: parts }, perm)
    }

    pub fn canonicalize(&self) -> Template {
        self.canonical_with_perm().0
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    pub fn is_isomorphic(&self, other: &Template) -> bool {
        self.k == other.k && self.d() == other.d() && self.canonicalize() == other.canonicalize()
    }

    /// Least distinguisher size and the lexicographically least witness of that size.
    pub fn min_distinguisher(&self) -> (usize, Vec<usize>) {
        let d = self.d();
        for size in 1..=d {
            for subset in combinations(d, size) {
                if meet_of(subset.iter().map(|&i| &self.partitions[i])).is_singletons() {
                    return (size, subset);
                }
            }
        }
        unreachable!("the full coordinate set always distinguishes")
    }

    pub fn e(&self) -> usize {
        self.min_distinguisher().0
    }

    /// Concrete copy inside ℕ^d: coordinate i of point r is r's block index in partition i.
    pub fn realize(&self) -> Vec<GridPoint> {
        (0..self.k)
            .map(|r| {
                GridPoint::new(self.partitions.iter().map(|p| p.block_of(r)).collect())
            })
            .collect()
    }

    /// π-collapse keeping point labels: coordinate j is the meet of the
    /// coordinates mapped to j.
    pub fn collapse_labeled(&self, pi: &Surjection) -> Result<Template> {
        if pi.d() != self.d() {
            return Err(Error::ArityMismatch { expected: self.d(), found: pi.d() });
        }
        let partitions = (0..pi.m())
            .map(|j| meet_of(pi.preimage(j).map(|i| &self.partitions[i])))
            .collect();
        Template::new(self.k, partitions)
    }

    /// Canonical π-collapse.
    pub fn collapse(&self, pi: &Surjection) -> Result<Template> {
        Ok(self.collapse_labeled(pi)?.canonicalize())
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}x{}[", self.k, self.d())?;
        for (i, p) in self.partitions.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for b in p.rgs() {
                write!(f, "{b}")?;
            }
        }
        f.write_str("]")
    }
}

fn meet_of<'a>(mut parts: impl Iterator<Item = &'a Partition>) -> Partition {
    let first = parts.next().expect("at least one partition");
    parts.fold(first.clone(), |acc, p| acc.meet(p))
}

fn canonical_parts(k: usize, parts: &[Partition]) -> (Vec<Partition>, Vec<usize>) {
    let mut best: Option<(Vec<Partition>, Vec<usize>)> = None;
    for perm in permutations(k) {
        let candidate: Vec<Partition> = parts.iter().map(|p| p.relabel(&perm)).collect();
        match &best {
            Some((b, _)) if *b <= candidate => {}
            _ => best = Some((candidate, perm)),
        }
    }
    best.expect("k! ≥ 1")
}

/// One canonical template per isomorphism class of d-dimensional k-templates,
/// in canonical order.
///
/// Classes are grown one coordinate at a time: the first coordinates of a
/// canonical sequence form a canonical sequence themselves, so extending each
/// canonical prefix by every partition reaches every class.
pub fn enumerate_templates(k: usize, d: usize) -> Result<Vec<Template>> {
    if k < 2 {
        return Err(Error::InvalidTemplate(format!("k must be at least 2, got {k}")));
    }
    if d < 1 {
        return Err(Error::InvalidTemplate("dimension must be at least 1".into()));
    }
    let all = all_partitions(k);
    let mut level: BTreeSet<Vec<Partition>> = BTreeSet::new();
    level.insert(Vec::new());
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for prefix in &level {
            for p in &all {
                let mut seq = prefix.clone();
                seq.push(p.clone());
                next.insert(canonical_parts(k, &seq).0);
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .filter(|parts| meet_of(parts.iter()).is_singletons())
        .map(|partitions| Template { k, partitions })
        .collect())
}

/// A surjection `d → m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Surjection {
    m: usize,
    map: Vec<usize>,
}

impl Surjection {
    pub fn new(m: usize, map: Vec<usize>) -> Result<Self> {
        if m > map.len() {
            return Err(Error::InvalidSurjection(format!(
                "target size {m} exceeds source size {}",
                map.len()
            )));
        }
        let mut hit = alloc::vec![false; m];
        for &v in &map {
            if v >= m {
                return Err(Error::InvalidSurjection(format!("value {v} outside 0..{m}")));
            }
            hit[v] = true;
        }
        if let Some(j) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidSurjection(format!("{j} has no preimage")));
        }
        Ok(Surjection { m, map })
    }

    /// Infers `m` from the largest value.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let m = map.iter().max().map_or(0, |v| v + 1);
        Surjection::new(m, map)
    }

    pub fn identity(d: usize) -> Self {
        Surjection { m: d, map: (0..d).collect() }
    }

    pub fn d(&self) -> usize {
        self.map.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Source coordinates sent to `j`, ascending.
    pub fn preimage(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter(move |(_, &v)| v == j).map(|(i, _)| i)
    }
}

/// Surjections out of `d`, one per partition of the source (targets numbered
/// by least preimage), ordered by restricted-growth string.
pub fn surjections_up_to_relabeling(d: usize) -> Vec<Surjection> {
    all_partitions(d)
        .into_iter()
        .map(|p| {
            let map: Vec<usize> = p.rgs().iter().map(|&b| b as usize).collect();
            Surjection { m: p.block_count(), map }
        })
        .collect()
}

/// Every surjection `d → m` for every `m ≤ d`, target labels included.
pub fn all_surjections(d: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    for m in 1..=d {
        let mut map = alloc::vec![0usize; d];
        loop {
            if let Ok(s) = Surjection::new(m, map.clone()) {
                out.push(s);
            }
            let Some(i) = (0..d).rev().find(|&i| map[i] + 1 < m) else { break };
            map[i] += 1;
            for v in &mut map[i + 1..] {
                *v = 0;
            }
        }
    }
    out
}
