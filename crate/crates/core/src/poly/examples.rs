//! Polynomials used throughout the tests and the bundled corpus.

use alloc::vec::Vec;

use super::rational::int;
use super::{Poly, PolySpec};

fn xs(k: usize, n: usize) -> impl Fn(usize, usize) -> Poly {
    move |i, j| Poly::var(k * n, i * n + j)
}

/// `x_0 + ⋯ + x_j − x_{j+1} − j·x_{j+2}`, a (j+3,1)-ary polynomial.
pub fn fox(j: usize) -> PolySpec {
    let k = j + 3;
    let x = xs(k, 1);
    let mut p = Poly::zero(k);
    for i in 0..=j {
        p = &p + &x(i, 0);
    }
    p = &p - &x(j + 1, 0);
    p = &p - &x(j + 2, 0).scale(&int(j as i64));
    PolySpec::new(k, 1, 0, p).expect("arity is consistent")
}

fn sq_dist(x: &impl Fn(usize, usize) -> Poly, a: usize, b: usize, n: usize) -> Poly {
    let mut s = Poly::zero(x(0, 0).nvars());
    for t in 0..n {
        let d = &x(a, t) - &x(b, t);
        s = &s + &(&d * &d);
    }
    s
}

/// `‖x₀ − x₁‖² − ‖x₁ − x₂‖²` in ℝ^n.
pub fn isosceles(n: usize) -> PolySpec {
    let x = xs(3, n);
    let p = &sq_dist(&x, 0, 1, n) - &sq_dist(&x, 1, 2, n);
    PolySpec::new(3, n, 0, p).expect("arity is consistent")
}

/// The 3×3 determinant with rows `(x_i, 1)`: zero iff three planar points are collinear.
pub fn collinearity() -> PolySpec {
    let x = xs(3, 2);
    let one = Poly::one(6);
    let m = |i: usize, j: usize| if j == 2 { one.clone() } else { x(i, j) };
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m(1, a) * &m(2, b)) - &(&m(1, c) * &m(2, d));
    let t0 = &m(0, 0) * &minor(1, 2, 2, 1);
    let t1 = &m(0, 1) * &minor(0, 2, 2, 0);
    let t2 = &m(0, 2) * &minor(0, 1, 1, 0);
    PolySpec::new(3, 2, 0, &(&t0 - &t1) + &t2).expect("arity is consistent")
}

/// `x₀ − x₁`, (2,1)-ary.
pub fn difference() -> PolySpec {
    let x = xs(2, 1);
    PolySpec::new(2, 1, 0, &x(0, 0) - &x(1, 0)).expect("arity is consistent")
}

/// The zero polynomial as a (k,n)-ary polynomial.
pub fn zero(k: usize, n: usize) -> PolySpec {
    PolySpec::new(k, n, 0, Poly::zero(k * n)).expect("arity is consistent")
}

/// `∏_{i<j} ‖x_i − x_j‖²`.
pub fn pairwise_distance_product(k: usize, n: usize) -> PolySpec {
    let x = xs(k, n);
    let mut p = Poly::one(k * n);
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    for (i, j) in pairs {
        p = &p * &sq_dist(&x, i, j, n);
    }
    PolySpec::new(k, n, 0, p).expect("arity is consistent")
}
