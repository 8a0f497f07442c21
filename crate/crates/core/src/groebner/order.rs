//! Monomial orders defined by full-rank integer matrices.
//!
//! `x^a > x^b` iff the first nonzero entry of `M(a-b)` is positive. Lex and
//! grevlex constructors emit the usual matrices; block extension stacks an
//! identity block on top for the intermediate variables.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{Mono, VarSet, XPoly};
use crate::error::GroebnerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    Grevlex,
    Block,
    Custom,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::Grevlex => "grevlex",
            OrderKind::Block => "block",
            OrderKind::Custom => "custom",
        }
    }
}

/// A monomial order on a fixed variable list.
#[derive(Debug, Clone)]
pub struct MonomialOrder {
    vars: Arc<VarSet>,
    matrix: Vec<Vec<i64>>,
    kind: OrderKind,
}

impl MonomialOrder {
    /// Lexicographic order with variables compared in declaration order.
    pub fn lex(vars: Arc<VarSet>) -> Self {
        let n = vars.len();
        Self::lex_by_priority(vars, &(0..n).collect::<Vec<_>>())
    }

    /// Lexicographic order with an explicit priority: `priority[0]` is the
    /// largest variable.
    pub fn lex_by_priority(vars: Arc<VarSet>, priority: &[usize]) -> Self {
        let n = vars.len();
        assert_eq!(priority.len(), n, "priority must list every variable");
        let mut matrix = vec![vec![0i64; n]; n];
        for (row, &v) in priority.iter().enumerate() {
            matrix[row][v] = 1;
        }
        MonomialOrder {
            vars,
            matrix,
            kind: OrderKind::Lex,
        }
    }

    /// Graded reverse-lexicographic order in declaration order.
    pub fn grevlex(vars: Arc<VarSet>) -> Self {
        let n = vars.len();
        Self::grevlex_by_priority(vars, &(0..n).collect::<Vec<_>>())
    }

    /// Grevlex with an explicit variable priority.
    pub fn grevlex_by_priority(vars: Arc<VarSet>, priority: &[usize]) -> Self {
        let n = vars.len();
        assert_eq!(priority.len(), n, "priority must list every variable");
        let mut matrix = vec![vec![0i64; n]; n];
        for &v in priority {
            matrix[0][v] = 1;
        }
        for row in 1..n {
            matrix[row][priority[n - row]] = -1;
        }
        MonomialOrder {
            vars,
            matrix,
            kind: OrderKind::Grevlex,
        }
    }

    /// Builds an order by a custom matrix, validating full rank and that each
    /// unit exponent vector compares above 1.
    pub fn custom(vars: Arc<VarSet>, matrix: Vec<Vec<i64>>) -> Result<Self, GroebnerError> {
        let n = vars.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(GroebnerError::InvalidOrderMatrix(format!(
                "expected a {n}x{n} matrix"
            )));
        }
        for j in 0..n {
            let lead = matrix.iter().map(|r| r[j]).find(|&x| x != 0);
            match lead {
                Some(x) if x > 0 => {}
                _ => {
                    return Err(GroebnerError::InvalidOrderMatrix(format!(
                        "column {j}: first nonzero entry must be positive"
                    )))
                }
            }
        }
        if rational_rank(&matrix) != n {
            return Err(GroebnerError::InvalidOrderMatrix(
                "matrix is rank deficient".into(),
            ));
        }
        Ok(MonomialOrder {
            vars,
            matrix,
            kind: OrderKind::Custom,
        })
    }

    /// A graded elimination order: grevlex on the eliminated variables
    /// dominates grevlex on the kept ones. Any monomial mentioning an
    /// eliminated variable exceeds every kept monomial.
    pub fn block_elimination(vars: Arc<VarSet>, keep: &[bool]) -> Self {
        let n = vars.len();
        assert_eq!(keep.len(), n);
        let elim: Vec<usize> = (0..n).filter(|&i| !keep[i]).collect();
        let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
        let mut matrix = Vec::with_capacity(n);
        for block in [&elim, &kept] {
            if block.is_empty() {
                continue;
            }
            let mut head = vec![0i64; n];
            for &v in block.iter() {
                head[v] = 1;
            }
            matrix.push(head);
            for r in 1..block.len() {
                let mut row = vec![0i64; n];
                row[block[block.len() - r]] = -1;
                matrix.push(row);
            }
        }
        MonomialOrder {
            vars,
            matrix,
            kind: OrderKind::Block,
        }
    }

    /// The block order `diag(Id_m, Q)` on `extended_vars`, whose first `m`
    /// variables are compared lexicographically ahead of everything ordered
    /// by the inner order `Q`.
    pub fn block_extend(inner: &MonomialOrder, m: usize, extended_vars: Arc<VarSet>) -> Self {
        let n = inner.vars.len();
        assert_eq!(extended_vars.len(), m + n, "block order shape mismatch");
        let total = m + n;
        let mut matrix = vec![vec![0i64; total]; total];
        for i in 0..m {
            matrix[i][i] = 1;
        }
        for (r, row) in inner.matrix.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                matrix[m + r][m + c] = v;
            }
        }
        MonomialOrder {
            vars: extended_vars,
            matrix,
            kind: if m == 0 { inner.kind } else { OrderKind::Block },
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        for row in &self.matrix {
            let mut acc: i128 = 0;
            for (j, &w) in row.iter().enumerate() {
                acc += w as i128 * (a.exp(j) as i128 - b.exp(j) as i128);
            }
            match acc.cmp(&0) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// A totally ordered key: comparing keys lexicographically agrees with
    /// [`cmp`]. Handy for heaps and caches.
    pub fn key(&self, m: &Mono) -> Vec<i128> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &w)| w as i128 * m.exp(j) as i128)
                    .sum()
            })
            .collect()
    }

    /// Leading monomial and coefficient of a nonzero polynomial.
    pub fn leading<'p>(&self, f: &'p XPoly) -> Option<(&'p Mono, &'p crate::algebra::ParamScalar)> {
        f.terms().max_by(|(a, _), (b, _)| self.cmp(a, b))
    }

    /// Checks the elimination property for keeping exactly `keep[i]` set:
    /// any monomial containing an eliminated variable must exceed every
    /// monomial in the kept variables.
    ///
    /// Sound criterion: some leading row block is supported on the eliminated
    /// columns only and restricts to a valid order matrix there.
    pub fn is_elimination_for(&self, keep: &[bool]) -> bool {
        let n = self.vars.len();
        assert_eq!(keep.len(), n);
        let elim: Vec<usize> = (0..n).filter(|&i| !keep[i]).collect();
        if elim.is_empty() {
            return true;
        }
        // rows 0..k supported on eliminated columns only
        let mut k = 0;
        while k < self.matrix.len()
            && self.matrix[k]
                .iter()
                .enumerate()
                .all(|(j, &w)| w == 0 || !keep[j])
        {
            k += 1;
        }
        if k == 0 {
            return false;
        }
        let sub: Vec<Vec<i64>> = self.matrix[..k]
            .iter()
            .map(|row| elim.iter().map(|&j| row[j]).collect())
            .collect();
        // each eliminated column's first nonzero entry within the block is positive
        for j in 0..elim.len() {
            match sub.iter().map(|r| r[j]).find(|&x| x != 0) {
                Some(x) if x > 0 => {}
                _ => return false,
            }
        }
        rational_rank(&sub) == elim.len()
    }
}

fn rational_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows).find(|&r| !a[r][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        a.swap(rank, piv);
        let inv = a[rank][c].recip();
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for cc in c..cols {
                let t = &a[rank][cc] * &f;
                a[r][cc] -= t;
            }
        }
        rank += 1;
    }
    rank
}
