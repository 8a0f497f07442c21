//! Polynomials in concentration variables with parametric coefficients.
//! Steady-state polynomials, the H polynomials and Groebner-basis elements
//! all live here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::mono::{same_vars, Mono, VarSet};
use super::poly::ParamPoly;
use super::scalar::ParamScalar;
use crate::error::AlgebraError;

/// A polynomial in the concentration variables over the parameter field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly {
    vars: Arc<VarSet>,
    params: Arc<VarSet>,
    terms: BTreeMap<Mono, ParamScalar>,
}

/// A value substituted for a concentration variable.
#[derive(Debug, Clone)]
pub enum Subst {
    Scalar(ParamScalar),
    Poly(XPoly),
}

impl XPoly {
    pub fn zero(vars: Arc<VarSet>, params: Arc<VarSet>) -> Self {
        XPoly {
            vars,
            params,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Arc<VarSet>, params: Arc<VarSet>) -> Self {
        let mut p = Self::zero(vars, params.clone());
        p.add_term(Mono::one(p.vars.len()), ParamScalar::one(params));
        p
    }

    pub fn var(vars: Arc<VarSet>, params: Arc<VarSet>, i: usize) -> Self {
        let mut p = Self::zero(vars, params.clone());
        p.add_term(Mono::var(p.vars.len(), i), ParamScalar::one(params));
        p
    }

    pub fn from_scalar(vars: Arc<VarSet>, c: ParamScalar) -> Self {
        let params = c.params().clone();
        let mut p = Self::zero(vars, params);
        p.add_term(Mono::one(p.vars.len()), c);
        p
    }

    pub fn from_terms(
        vars: Arc<VarSet>,
        params: Arc<VarSet>,
        iter: impl IntoIterator<Item = (Mono, ParamScalar)>,
    ) -> Self {
        let mut p = Self::zero(vars, params);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn params(&self) -> &Arc<VarSet> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> ParamScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| ParamScalar::zero(self.params.clone()))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn compatible(&self, other: &XPoly) -> bool {
        same_vars(&self.vars, &other.vars) && same_vars(&self.params, &other.params)
    }

    fn assert_compatible(&self, other: &XPoly) {
        assert!(self.compatible(other), "variable lists differ");
    }

    /// Checked arithmetic entry point surfacing the variable-mismatch error.
    pub fn checked_op(&self, other: &XPoly, op: XOp) -> Result<XPoly, AlgebraError> {
        if !self.compatible(other) {
            return Err(AlgebraError::VariableMismatch(format!(
                "{:?} vs {:?}",
                self.vars.names(),
                other.vars.names()
            )));
        }
        Ok(match op {
            XOp::Add => self.add(other),
            XOp::Sub => self.sub(other),
            XOp::Mul => self.mul(other),
        })
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> XPoly {
        XPoly {
            vars: self.vars.clone(),
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        self.assert_compatible(other);
        let mut out = Self::zero(self.vars.clone(), self.params.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &ParamScalar) -> XPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone(), self.params.clone());
        }
        XPoly {
            vars: self.vars.clone(),
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, cc)| (m.clone(), cc.mul(c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &ParamScalar) -> XPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone(), self.params.clone());
        }
        XPoly {
            vars: self.vars.clone(),
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> XPoly {
        let mut out = Self::one(self.vars.clone(), self.params.clone());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact composition: assigned variables are replaced, unassigned pass
    /// through. Replacement polynomials may only mention unassigned variables.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Subst>) -> Result<XPoly, AlgebraError> {
        for (v, s) in assignment {
            if *v >= self.vars.len() {
                return Err(AlgebraError::UnknownSymbol(format!("variable #{v}")));
            }
            if let Subst::Poly(p) = s {
                for (m, _) in p.terms() {
                    if assignment.keys().any(|w| m.exp(*w) > 0) {
                        return Err(AlgebraError::SubstitutionOverlap(
                            self.vars.name(*v).to_string(),
                        ));
                    }
                }
            }
        }
        let mut out = Self::zero(self.vars.clone(), self.params.clone());
        for (m, c) in &self.terms {
            let mut acc = Self::from_scalar(self.vars.clone(), c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match assignment.get(&i) {
                    None => Self::var(self.vars.clone(), self.params.clone(), i).pow(e),
                    Some(Subst::Scalar(s)) => {
                        let mut v = s.clone();
                        for _ in 1..e {
                            v = v.mul(s);
                        }
                        Self::from_scalar(self.vars.clone(), v)
                    }
                    Some(Subst::Poly(p)) => p.pow(e),
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Exact evaluation at rational values for the variables and parameters.
    pub fn eval(
        &self,
        var_values: &[BigRational],
        param_values: &[BigRational],
    ) -> Result<BigRational, AlgebraError> {
        assert_eq!(var_values.len(), self.vars.len());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.eval(param_values)?;
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= &var_values[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Applies a map to every coefficient, dropping terms that map to zero.
    pub fn map_coeffs<E>(
        &self,
        params: Arc<VarSet>,
        mut f: impl FnMut(&ParamScalar) -> Result<ParamScalar, E>,
    ) -> Result<XPoly, E> {
        let mut out = Self::zero(self.vars.clone(), params);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Reinterprets this polynomial over a different variable list through the
    /// index map `to[i] = index of old variable i in the new list`.
    pub fn rename_vars(&self, vars: Arc<VarSet>, to: &[usize]) -> XPoly {
        let mut out = Self::zero(vars, self.params.clone());
        let n = out.vars.len();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps[to[i]] = e;
                }
            }
            out.add_term(Mono::from_exponents(exps), c.clone());
        }
        out
    }

    /// True when only variables from `keep` occur.
    pub fn supported_on(&self, keep: &[bool]) -> bool {
        self.terms.keys().all(|m| {
            m.exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || keep[i])
        })
    }

    /// Clears coefficient denominators and content: the result is a rational-
    /// multiple of `self` whose coefficients are polynomials with coprime
    /// integer coefficients overall, leading (canonical) coefficient positive.
    pub fn integral_normal_form(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        // lcm of denominators
        let mut den_lcm = ParamPoly::one(self.params.clone());
        for c in self.terms.values() {
            let g = poly_gcd(&den_lcm, c.den());
            den_lcm = den_lcm.mul(&c.den().exact_div(&g).unwrap());
        }
        let cleared: Vec<(Mono, ParamPoly)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let p = c.num().mul(&den_lcm.exact_div(c.den()).unwrap());
                (m.clone(), p)
            })
            .collect();
        // polynomial content across coefficients
        let mut content = ParamPoly::zero(self.params.clone());
        for (_, p) in &cleared {
            content = poly_gcd(&content, p);
            if content.is_one() {
                break;
            }
        }
        // rational content across coefficients
        let mut num_gcd = BigInt::zero();
        let mut den_l = BigInt::one();
        let mut coeffs = Vec::with_capacity(cleared.len());
        for (m, p) in cleared {
            let q = p.exact_div(&content).unwrap();
            for (_, c) in q.terms() {
                num_gcd = num_gcd.gcd(c.numer());
                den_l = den_l.lcm(c.denom());
            }
            coeffs.push((m, q));
        }
        let mut s = BigRational::new(den_l, num_gcd);
        // sign: leading coefficient (canonical term order on both levels) positive
        if let Some((_, p)) = coeffs.last() {
            if p.leading().unwrap().1 * &s < BigRational::zero() {
                s = -s;
            }
        }
        XPoly {
            vars: self.vars.clone(),
            params: self.params.clone(),
            terms: coeffs
                .into_iter()
                .map(|(m, p)| (m, ParamScalar::from_poly(p.scale(&s))))
                .collect(),
        }
    }

    /// Canonical text form: terms in descending canonical monomial order.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let (neg, mag) = c.signed_magnitude();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(&self.vars);
            if m.is_one() {
                out.push_str(&mag.render_as_coefficient());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&mag.render_as_coefficient());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

/// Operation selector for [`XPoly::checked_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XOp {
    Add,
    Sub,
    Mul,
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_scalar, parse_xpoly};

    fn ring() -> (Arc<VarSet>, Arc<VarSet>) {
        (VarSet::new(["x1", "x2"]), VarSet::new(["k1", "k2"]))
    }

    #[test]
    fn difference_of_squares() {
        let (x, k) = ring();
        let f = parse_xpoly("x1 + x2", &x, &k).unwrap();
        let g = parse_xpoly("x1 - x2", &x, &k).unwrap();
        assert_eq!(f.mul(&g), parse_xpoly("x1^2 - x2^2", &x, &k).unwrap());
    }

    #[test]
    fn additive_identity() {
        let (x, k) = ring();
        let f = parse_xpoly("k1*x1^2 - k2/(k1 + k2)*x2", &x, &k).unwrap();
        let z = XPoly::zero(x.clone(), k.clone());
        assert_eq!(f.add(&z), f);
    }

    #[test]
    fn var_mismatch_reported() {
        let (x, k) = ring();
        let other = VarSet::new(["y1"]);
        let f = parse_xpoly("x1", &x, &k).unwrap();
        let g = parse_xpoly("y1", &other, &k).unwrap();
        assert!(matches!(
            f.checked_op(&g, XOp::Add),
            Err(AlgebraError::VariableMismatch(_))
        ));
    }

    #[test]
    fn substitution_passthrough() {
        let (x, k) = ring();
        let f = parse_xpoly("k1*x1*x2 + x2^2", &x, &k).unwrap();
        assert_eq!(f.substitute(&BTreeMap::new()).unwrap(), f);
    }

    #[test]
    fn substitution_overlap_rejected() {
        let (x, k) = ring();
        let f = parse_xpoly("x1", &x, &k).unwrap();
        let mut a = BTreeMap::new();
        a.insert(0usize, Subst::Poly(parse_xpoly("x1 + x2", &x, &k).unwrap()));
        assert!(matches!(
            f.substitute(&a),
            Err(AlgebraError::SubstitutionOverlap(_))
        ));
    }

    #[test]
    fn integral_normal_form_clears_fractions() {
        let (x, k) = ring();
        let f = parse_xpoly("x1^2 - k2/(2*k1)*x1*x2", &x, &k).unwrap();
        let g = f.integral_normal_form();
        assert_eq!(g, parse_xpoly("2*k1*x1^2 - k2*x1*x2", &x, &k).unwrap());
        // idempotent up to nothing: already integral stays put
        assert_eq!(g.integral_normal_form(), g);
        let s = parse_scalar("1/(k1 + k2)", &k).unwrap();
        assert_eq!(g.scale(&s).integral_normal_form(), g);
    }
}
