//! Affine systems over ℚ: an incremental reduced row-echelon form used by
//! the search, and a from-scratch rank computation used by replay.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::Rational;

/// `coeffs · u + constant`, with `coeffs.len()` unknowns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineForm {
    pub fn zero(nvars: usize) -> Self {
        AffineForm { coeffs: vec![Rational::zero(); nvars], constant: Rational::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    /// Scales so the first nonzero coefficient is 1 (or the constant to 1 when
    /// the linear part vanishes), so that proportional equations coincide.
    pub fn normalized(&self) -> AffineForm {
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(|| self.constant.clone());
        if lead.is_zero() {
            return self.clone();
        }
        let inv = lead.recip();
        AffineForm {
            coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
            constant: &self.constant * &inv,
        }
    }

    fn axpy(&mut self, factor: &Rational, other: &AffineForm) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a -= factor * b;
            }
        }
        self.constant -= factor * &other.constant;
    }
}

/// Outcome of adding an equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Added {
    NewPivot,
    Redundant,
    Inconsistent,
}

/// The solution set `{u : form(u) = 0 for all rows}` in reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct AffineSystem {
    nvars: usize,
    rows: Vec<AffineForm>,
    pivot_row: Vec<Option<usize>>,
}

impl AffineSystem {
    pub fn new(nvars: usize) -> Self {
        AffineSystem { nvars, rows: Vec::new(), pivot_row: vec![None; nvars] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, form: &AffineForm) -> AffineForm {
        let mut f = form.clone();
        for (col, row) in self.pivot_row.iter().enumerate() {
            if let Some(r) = row {
                if !f.coeffs[col].is_zero() {
                    let factor = f.coeffs[col].clone();
                    f.axpy(&factor, &self.rows[*r]);
                }
            }
        }
        f
    }

    /// Adds `form = 0`.
    pub fn add(&mut self, form: &AffineForm) -> Added {
        let f = self.reduce(form);
        let Some(col) = f.coeffs.iter().position(|c| !c.is_zero()) else {
            return if f.constant.is_zero() { Added::Redundant } else { Added::Inconsistent };
        };
        let inv = f.coeffs[col].recip();
        let row = AffineForm { coeffs: f.coeffs.iter().map(|c| c * &inv).collect(), constant: &f.constant * &inv };
        for other in &mut self.rows {
            if !other.coeffs[col].is_zero() {
                let factor = other.coeffs[col].clone();
                other.axpy(&factor, &row);
            }
        }
        self.pivot_row[col] = Some(self.rows.len());
        self.rows.push(row);
        Added::NewPivot
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// The value of unknown `var` on the solution set, as an affine function of
    /// the free unknowns (indexed by position in [`Self::free_vars`]).
    pub fn parametrize(&self, var: usize, free: &[usize]) -> AffineForm {
        let mut out = AffineForm::zero(free.len());
        match self.pivot_row[var] {
            None => {
                let pos = free.binary_search(&var).expect("free variable");
                out.coeffs[pos] = Rational::one();
            }
            Some(r) => {
                let row = &self.rows[r];
                for (pos, &fv) in free.iter().enumerate() {
                    out.coeffs[pos] = -row.coeffs[fv].clone();
                }
                out.constant = -row.constant.clone();
            }
        }
        out
    }

    /// A solution with free unknowns set to `values`.
    pub fn solution(&self, free: &[usize], values: &[Rational]) -> Vec<Rational> {
        (0..self.nvars)
            .map(|v| {
                let f = self.parametrize(v, free);
                let mut acc = f.constant.clone();
                for (c, x) in f.coeffs.iter().zip(values) {
                    acc += c * x;
                }
                acc
            })
            .collect()
    }
}

/// Rank of a dense matrix by fresh Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        let pivot: Vec<Rational> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}
