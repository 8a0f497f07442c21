//! Sparse multivariate polynomials over arbitrary-precision rationals,
//! used for numerators and denominators of parametric coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mono::{same_vars, Mono, VarSet};

/// A polynomial in the parameter symbols with rational coefficients.
///
/// Terms are kept in a map under the canonical (grevlex) monomial order and
/// never store a zero coefficient, so equal polynomials are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Mono, BigRational>,
}

impl ParamPoly {
    pub fn zero(vars: Arc<VarSet>) -> Self {
        ParamPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Arc<VarSet>) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: Arc<VarSet>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(vars.len()), c);
        }
        ParamPoly { vars, terms }
    }

    pub fn var(vars: Arc<VarSet>, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(vars.len(), i), BigRational::one());
        ParamPoly { vars, terms }
    }

    pub fn from_terms(
        vars: Arc<VarSet>,
        iter: impl IntoIterator<Item = (Mono, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().map(One::is_one).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Mono::is_one)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// Leading term under the canonical order; `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_compatible(&self, other: &ParamPoly) {
        assert!(
            same_vars(&self.vars, &other.vars),
            "parameter symbol lists differ"
        );
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_compatible(other);
        let mut out = Self::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Mono, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        ParamPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        self.mul_term(&Mono::one(self.vars.len()), c)
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut out = Self::one(self.vars.clone());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &ParamPoly) -> Option<ParamPoly> {
        self.assert_compatible(other);
        assert!(!other.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars.clone());
        let (gm, gc) = other.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(&gm)?;
            let qc = rc / &gc;
            let t = other.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
            rem = rem.sub(&t);
        }
        Some(quot)
    }

    /// True when `other` is a nonzero rational multiple of `self`.
    pub fn proportional(&self, other: &ParamPoly) -> bool {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return false;
        }
        let (lm, lc) = self.leading().unwrap();
        let (om, oc) = other.leading().unwrap();
        if lm != om {
            return false;
        }
        let ratio = lc / oc;
        self.terms
            .iter()
            .all(|(m, c)| other.terms.get(m).map(|oc| c == &(oc * &ratio)).unwrap_or(false))
    }

    /// Exponent-wise minimum over all terms: the largest monomial dividing
    /// every term. Returns the empty monomial for the zero polynomial.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Mono::one(self.vars.len()),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// The rational `s > 0` (up to sign) such that `self * s` has coprime
    /// integer coefficients with positive leading coefficient. Returns 1 for
    /// the zero polynomial.
    pub fn primitive_scale(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut s = BigRational::new(den_lcm, num_gcd);
        if self.leading().unwrap().1 * &s < BigRational::zero() {
            s = -s;
        }
        s
    }

    /// Coprime integer coefficients, positive leading coefficient.
    pub fn primitive(&self) -> ParamPoly {
        self.scale(&self.primitive_scale())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^e`, as a polynomial with the exponent of `v` cleared.
    pub fn coeff_of_var_pow(&self, v: usize, e: u32) -> ParamPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) == e)
            .map(|(m, c)| {
                let mut exps = m.exps().to_vec();
                exps[v] = 0;
                (Mono::from_exponents(exps), c.clone())
            })
            .collect();
        ParamPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// All variables with positive degree.
    pub fn support_vars(&self) -> Vec<usize> {
        let n = self.vars.len();
        let mut seen = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    /// Exact evaluation at rational values for every symbol.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Formal partial derivative with respect to symbol `v`.
    pub fn derivative(&self, v: usize) -> ParamPoly {
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[v] = e - 1;
            out.add_term(
                Mono::from_exponents(exps),
                c * BigRational::from(BigInt::from(e)),
            );
        }
        out
    }

    /// True when every coefficient is positive.
    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c > &BigRational::zero())
    }

    /// Evaluates each symbol at a value of type `T` in a commutative ring,
    /// given ring operations. Used to push polynomials through phi.
    pub fn eval_with<T: Clone>(
        &self,
        values: &[T],
        zero: T,
        from_rat: impl Fn(&BigRational) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = from_rat(c);
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = mul(&t, &values[i]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    /// Canonical text form: terms in descending canonical order, explicit `*`,
    /// `^` for powers.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(&self.vars);
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn vs() -> Arc<VarSet> {
        VarSet::new(["a", "b", "c"])
    }

    fn p(vars: &Arc<VarSet>, s: &str) -> ParamPoly {
        crate::algebra::expr::parse_poly_for_tests(s, vars)
    }

    #[test]
    fn arithmetic_basics() {
        let v = vs();
        let ab = p(&v, "a + b");
        let amb = p(&v, "a - b");
        assert_eq!(ab.mul(&amb), p(&v, "a^2 - b^2"));
        assert_eq!(ab.sub(&ab), ParamPoly::zero(v.clone()));
        assert!(ab.add(&amb).proportional(&p(&v, "a")));
    }

    #[test]
    fn exact_division() {
        let v = vs();
        let prod = p(&v, "a^2*b + a*b^2 + a*b*c");
        let f = p(&v, "a + b + c");
        assert_eq!(prod.exact_div(&f), Some(p(&v, "a*b")));
        assert_eq!(prod.exact_div(&p(&v, "a + b")), None);
    }

    #[test]
    fn primitive_normalization() {
        let v = vs();
        let q = p(&v, "a").scale(&rat(-2, 3)).add(&p(&v, "b").scale(&rat(4, 3)));
        let prim = q.primitive();
        // canonical grevlex leading term of -2/3 a + 4/3 b is the a term
        assert_eq!(prim, p(&v, "a - 2*b"));
    }

    #[test]
    fn derivative_and_eval() {
        let v = vs();
        let f = p(&v, "a^2*b + 3*c");
        assert_eq!(f.derivative(0), p(&v, "2*a*b"));
        assert_eq!(f.derivative(2), p(&v, "3"));
        let val = f.eval(&[rat(1, 2), rat(4, 1), rat(1, 3)]);
        assert_eq!(val, rat(2, 1));
    }
}
