//! Finite embeddings read off a verified immersion.

use alloc::vec::Vec;

use num_traits::One;

use super::{extract_injective_subgrid, verify_embedding_with, EmbeddingWitness, SearchBudget};
use crate::immerse::{replay_immersion, ImmersionCertificate, InjectivityCert};
use crate::poly::{int, PolySpec};
use crate::templates::{collapse_grid, Grid, Surjection, Template};
use crate::{Error, Rational, Result};

/// Doublings of the candidate pool before giving up.
const MAX_DOUBLINGS: u32 = 4;

/// `pool` distinct inputs for axis `axis` inside the certified domain.
fn axis_values(cert: &InjectivityCert, axis: usize, pool: usize, spread: usize) -> Vec<Rational> {
    let one = Rational::one();
    match cert.interval() {
        None => {
            let scale = Rational::from_integer((spread + 1).into()).pow(axis as i32);
            (0..pool).map(|i| int(i as i64) * &scale).collect()
        }
        Some(iv) => (0..pool)
            .map(|i| {
                let i = int(i as i64);
                match (&iv.lo, &iv.hi) {
                    (Some(a), Some(b)) => a + (b - a) * (&i + &one) / int(pool as i64 + 1),
                    (Some(a), None) => a + &i + &one,
                    (None, Some(b)) => b - &i - &one,
                    (None, None) => i,
                }
            })
            .collect(),
    }
}

/// A witness on `sizes` for the template `t`: the grid is sent bijectively
/// onto `X^m` by the collapse map of `pi`, axis values for `X^m` are picked
/// on an oversampled pool so that the immersion is injective on their
/// product, and the immersion is applied.
pub fn embedding_from_immersion(
    cert: &ImmersionCertificate,
    t: &Template,
    pi: &Surjection,
    sizes: &[usize],
    p: &PolySpec,
    params: &[Rational],
    budget: SearchBudget,
) -> Result<EmbeddingWitness> {
    if cert.poly != *p || cert.params != params {
        return Err(Error::Precondition("certificate is for a different polynomial".into()));
    }
    if !replay_immersion(cert)? {
        return Err(Error::Contract("immersion certificate does not replay".into()));
    }
    if !t.collapse_labeled(pi)?.is_isomorphic(&cert.template) {
        return Err(Error::Precondition("the collapse of the template is not the certified one".into()));
    }
    let grid = Grid::new(sizes.to_vec())?;
    let (target, vmap) = collapse_grid(&grid, pi)?;
    let targets = target.sizes().to_vec();
    let mut pools: Vec<usize> = targets.iter().map(|&n| 2 * n).collect();
    for _ in 0..=MAX_DOUBLINGS {
        let spread = *pools.iter().max().expect("at least one axis");
        let values: Vec<Vec<Rational>> =
            pools.iter().enumerate().map(|(j, &n)| axis_values(&cert.injectivity, j, n, spread)).collect();
        let pool_grid = Grid::new(pools.clone())?;
        let table: Vec<Vec<Rational>> = pool_grid
            .points()
            .map(|q| {
                let input: Vec<Rational> = q.coords().iter().enumerate().map(|(j, &c)| values[j][c].clone()).collect();
                cert.map.apply(&input)
            })
            .collect::<Result<_>>()?;
        match extract_injective_subgrid(&pools, &table, &targets, budget.max_nodes) {
            Ok(ys) => {
                let assignment = vmap
                    .iter()
                    .map(|&x| {
                        let input: Vec<Rational> =
                            target.point(x).coords().iter().enumerate().map(|(j, &c)| values[j][ys[j][c]].clone()).collect();
                        cert.map.apply(&input)
                    })
                    .collect::<Result<_>>()?;
                let w = EmbeddingWitness { template: t.clone(), sizes: sizes.to_vec(), assignment, params: params.to_vec() };
                if !verify_embedding_with(&w, p, budget.enumeration)? {
                    return Err(Error::Contract("witness built from an immersion fails verification".into()));
                }
                return Ok(w);
            }
            Err(Error::BudgetExceeded { .. }) => {
                for n in &mut pools {
                    *n *= 2;
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded { what: "immersion sample pool", limit: MAX_DOUBLINGS as u64 })
}
