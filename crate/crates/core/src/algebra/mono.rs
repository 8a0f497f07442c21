//! Variable sets and exponent-vector monomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An ordered list of symbol names. Shared by reference between all
/// polynomials over the same ring; position in the list is the variable index.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarSet {
    /// Builds a variable set, panicking on duplicate names. Callers that
    /// accept user input must deduplicate first.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            assert!(
                index.insert(n.clone(), i).is_none(),
                "duplicate symbol `{n}` in variable set"
            );
        }
        Arc::new(VarSet { names, index })
    }

    pub fn empty() -> Arc<Self> {
        Self::new(Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// Two variable sets are compatible when they are the same allocation or
/// list the same names in the same order.
pub(crate) fn same_vars(a: &Arc<VarSet>, b: &Arc<VarSet>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// A monomial as a dense exponent vector over some [`VarSet`].
///
/// `Ord` is graded reverse-lexicographic in declaration order; this is the
/// canonical storage and printing order, independent of the monomial order
/// used by any particular Groebner computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(Box<[u32]>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars].into())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Mono(v.into())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Mono(exps.into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Mono) -> Option<Mono> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Box<[u32]>>>()
            .map(Mono)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// True when the supports are disjoint (no shared variable).
    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Graded reverse-lexicographic comparison in declaration order.
    pub fn cmp_grevlex(&self, other: &Mono) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: the monomial whose last nonzero entry of the
        // difference is negative is the larger one.
        for i in (0..self.0.len()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    /// Renders with the given names: `x1^2*x3`, or `1` for the empty monomial.
    pub fn render(&self, vars: &VarSet) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(vars.name(i));
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_within_degree() {
        // x^2 > xy > y^2 for (x, y)
        let x2 = Mono::from_exponents(vec![2, 0]);
        let xy = Mono::from_exponents(vec![1, 1]);
        let y2 = Mono::from_exponents(vec![0, 2]);
        assert!(x2 > xy);
        assert!(xy > y2);
    }

    #[test]
    fn grevlex_degree_dominates() {
        let x = Mono::from_exponents(vec![1, 0]);
        let y2 = Mono::from_exponents(vec![0, 2]);
        assert!(y2 > x);
    }

    #[test]
    fn div_and_lcm() {
        let a = Mono::from_exponents(vec![2, 1]);
        let b = Mono::from_exponents(vec![1, 0]);
        assert_eq!(a.checked_div(&b), Some(Mono::from_exponents(vec![1, 1])));
        assert_eq!(b.checked_div(&a), None);
        assert_eq!(a.lcm(&b), a);
        assert!(b.divides(&a));
    }
}
