//! Symbolic matrices over the parameter field: fraction-free elimination,
//! linear solving and rank.

use std::sync::Arc;

use super::mono::VarSet;
use super::scalar::ParamScalar;
use super::xpoly::XPoly;
use crate::error::AlgebraError;

/// A rectangular matrix of reduced parameter-field entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ParamScalar>,
}

impl ParamMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ParamScalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix shape mismatch");
        ParamMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(params: Arc<VarSet>, rows: usize, cols: usize) -> Self {
        ParamMatrix {
            rows,
            cols,
            entries: vec![ParamScalar::zero(params); rows * cols],
        }
    }

    pub fn identity(params: Arc<VarSet>, n: usize) -> Self {
        let mut m = Self::zero(params.clone(), n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ParamScalar::one(params.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &ParamScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut ParamScalar {
        &mut self.entries[r * self.cols + c]
    }

    /// Rank over the parameter field: Gaussian elimination on reduced
    /// fractions, with row pivoting and column skipping. Entries stay in
    /// canonical reduced form at every step, which keeps sparse symbolic
    /// matrices cheap (fraction-free sweeps expand minors as products of
    /// pivots and blow up on exactly those inputs).
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<ParamScalar>> = (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&r| !m[r][col].is_zero());
            let r0 = match found {
                Some(r) => r,
                None => continue,
            };
            m.swap(pivot_row, r0);
            let inv = m[pivot_row][col].inverse().expect("pivot is nonzero");
            for r in pivot_row + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].mul(&inv);
                for c in col..self.cols {
                    let t = factor.mul(&m[pivot_row][c]);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }
}

/// Solves `A y = b` for square `A` over the parameter field; `b` entries are
/// polynomials in the concentration variables. Forward elimination on
/// reduced fractions, then back-substitution. Errors when `det(A)` vanishes
/// identically.
pub fn solve_linear(a: &ParamMatrix, b: &[XPoly]) -> Result<Vec<XPoly>, AlgebraError> {
    assert_eq!(a.rows(), a.cols(), "coefficient matrix must be square");
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let params = a.at(0, 0).params().clone();

    let mut m: Vec<Vec<ParamScalar>> = (0..n)
        .map(|r| (0..n).map(|c| a.at(r, c).clone()).collect())
        .collect();
    let mut rhs: Vec<XPoly> = b.to_vec();
    for k in 0..n {
        let r0 = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or(AlgebraError::SingularSystem)?;
        m.swap(k, r0);
        rhs.swap(k, r0);
        let inv = m[k][k].inverse().expect("pivot is nonzero");
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let factor = m[r][k].mul(&inv);
            for c in k..n {
                let t = factor.mul(&m[k][c]);
                m[r][c] = m[r][c].sub(&t);
            }
            let t = rhs[k].scale(&factor);
            rhs[r] = rhs[r].sub(&t);
        }
    }

    // Back-substitution over the field.
    let vars = b[0].vars().clone();
    let mut y = vec![XPoly::zero(vars, params); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for c in k + 1..n {
            acc = acc.sub(&y[c].scale(&m[k][c]));
        }
        y[k] = acc.scale(&m[k][k].inverse().map_err(|_| AlgebraError::SingularSystem)?);
    }
    Ok(y)
}
