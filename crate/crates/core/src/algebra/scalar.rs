//! The fraction field of the parameter polynomial ring.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::mono::VarSet;
use super::poly::ParamPoly;
use crate::error::AlgebraError;

/// A reduced fraction of parameter polynomials.
///
/// Canonical form: `gcd(num, den)` is a unit, the denominator has coprime
/// integer coefficients and a positive leading coefficient, and zero is `0/1`.
/// Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamScalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamScalar {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: ParamPoly, den: ParamPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return ParamScalar {
                den: ParamPoly::one(num.vars().clone()),
                num,
            };
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() {
            let g = poly_gcd(&num, &den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        let s = den.primitive_scale();
        if !s.is_one() {
            num = num.scale(&s);
            den = den.scale(&s);
        }
        ParamScalar { num, den }
    }

    pub fn zero(params: Arc<VarSet>) -> Self {
        ParamScalar {
            num: ParamPoly::zero(params.clone()),
            den: ParamPoly::one(params),
        }
    }

    pub fn one(params: Arc<VarSet>) -> Self {
        ParamScalar {
            num: ParamPoly::one(params.clone()),
            den: ParamPoly::one(params),
        }
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamScalar {
            den: ParamPoly::one(p.vars().clone()),
            num: p,
        }
    }

    pub fn from_rational(params: Arc<VarSet>, c: BigRational) -> Self {
        Self::from_poly(ParamPoly::constant(params, c))
    }

    pub fn symbol(params: Arc<VarSet>, i: usize) -> Self {
        Self::from_poly(ParamPoly::var(params, i))
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn params(&self) -> &Arc<VarSet> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value if both numerator and denominator are constants.
    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn add(&self, other: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Classic gcd trick to keep intermediate products small.
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            Self::reduced(num, den)
        } else {
            let da = self.den.exact_div(&g).unwrap();
            let db = other.den.exact_div(&g).unwrap();
            let t = self.num.mul(&db).add(&other.num.mul(&da));
            let h = poly_gcd(&t, &g);
            if h.is_one() {
                Self::reduced_coprime(t, self.den.mul(&db))
            } else {
                let num = t.exact_div(&h).unwrap();
                let den = self.den.exact_div(&h).unwrap().mul(&db);
                Self::reduced_coprime(num, den)
            }
        }
    }

    /// Like `reduced` but skips the gcd (caller guarantees coprimality).
    fn reduced_coprime(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return ParamScalar {
                den: ParamPoly::one(num.vars().clone()),
                num,
            };
        }
        let s = den.primitive_scale();
        ParamScalar {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn neg(&self) -> ParamScalar {
        ParamScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &ParamScalar) -> ParamScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamScalar) -> ParamScalar {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.params().clone());
        }
        // Cross-reduce before multiplying.
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let na = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.exact_div(&g1).unwrap()
        };
        let db = if g1.is_one() {
            other.den.clone()
        } else {
            other.den.exact_div(&g1).unwrap()
        };
        let nb = if g2.is_one() {
            other.num.clone()
        } else {
            other.num.exact_div(&g2).unwrap()
        };
        let da = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.exact_div(&g2).unwrap()
        };
        Self::reduced_coprime(na.mul(&nb), da.mul(&db))
    }

    pub fn div(&self, other: &ParamScalar) -> Result<ParamScalar, AlgebraError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn inverse(&self) -> Result<ParamScalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let s = self.num.primitive_scale();
        Ok(ParamScalar {
            num: self.den.scale(&s),
            den: self.num.scale(&s),
        })
    }

    pub fn scale(&self, c: &BigRational) -> ParamScalar {
        if c.is_zero() {
            return Self::zero(self.params().clone());
        }
        ParamScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact evaluation; errors when the denominator vanishes at the point.
    pub fn eval(&self, values: &[BigRational]) -> Result<BigRational, AlgebraError> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return Err(AlgebraError::EvalDivisionByZero);
        }
        Ok(self.num.eval(values) / d)
    }

    /// Formal partial derivative with respect to symbol `v` (quotient rule).
    pub fn derivative(&self, v: usize) -> ParamScalar {
        let num = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        Self::reduced(num, self.den.mul(&self.den))
    }

    /// Syntactic positivity certificate: every coefficient of the reduced
    /// numerator and denominator is positive. A negative answer does not
    /// disprove positivity of the value.
    pub fn is_syntactically_positive(&self) -> bool {
        !self.is_zero() && self.num.all_coeffs_positive() && self.den.all_coeffs_positive()
    }

    /// Substitutes a scalar (over a possibly different symbol set) for every
    /// symbol; used to push coefficients through the phi map.
    pub fn compose(&self, values: &[ParamScalar]) -> Result<ParamScalar, AlgebraError> {
        assert_eq!(values.len(), self.params().len());
        let target = values
            .first()
            .map(|v| v.params().clone())
            .unwrap_or_else(|| self.params().clone());
        let zero = ParamScalar::zero(target.clone());
        let ev = |p: &ParamPoly| {
            p.eval_with(
                values,
                zero.clone(),
                |c| ParamScalar::from_rational(target.clone(), c.clone()),
                |a, b| a.add(b),
                |a, b| a.mul(b),
            )
        };
        ev(&self.num).div(&ev(&self.den))
    }

    /// Canonical text form. A multi-term numerator over a nontrivial
    /// denominator is parenthesized; the denominator is parenthesized unless
    /// it is a bare symbol power, so the output re-parses to the same value.
    pub fn render(&self) -> String {
        if self.den.is_one() {
            return self.num.render();
        }
        format!("{}/{}", render_factor(&self.num), render_den(&self.den))
    }

    /// Text form safe to prefix a `*monomial` factor: like [`render`] but a
    /// multi-term polynomial numerator keeps its parentheses.
    pub(crate) fn render_as_coefficient(&self) -> String {
        if self.den.is_one() {
            return render_factor(&self.num);
        }
        self.render()
    }

    /// Splits off the display sign (the sign of the leading numerator
    /// coefficient). Used when joining terms with `+`/`-`.
    pub(crate) fn signed_magnitude(&self) -> (bool, ParamScalar) {
        let neg = self
            .num
            .leading()
            .map(|(_, c)| c < &BigRational::zero())
            .unwrap_or(false);
        let mag = if neg { self.neg() } else { self.clone() };
        (neg, mag)
    }
}

fn render_factor(p: &ParamPoly) -> String {
    if p.num_terms() > 1 {
        format!("({})", p.render())
    } else {
        p.render()
    }
}

fn render_den(p: &ParamPoly) -> String {
    // A bare power of one symbol with coefficient 1 needs no parentheses.
    let atomic = p.num_terms() == 1
        && p.leading().map(|(m, c)| {
            c.is_one() && m.exps().iter().filter(|&&e| e > 0).count() == 1
        }) == Some(true);
    if atomic {
        p.render()
    } else {
        format!("({})", p.render())
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_scalar;

    fn sc(params: &Arc<VarSet>, s: &str) -> ParamScalar {
        parse_scalar(s, params).unwrap()
    }

    #[test]
    fn common_denominator_addition() {
        let k = VarSet::new(["k1", "k2", "k3"]);
        let a = sc(&k, "k1/(k2 + k3)");
        let b = sc(&k, "k2/(k2 + k3)");
        assert_eq!(a.add(&b), sc(&k, "(k1 + k2)/(k2 + k3)"));
    }

    #[test]
    fn multiplicative_inverse() {
        let k = VarSet::new(["k1", "k2", "k3"]);
        let a = sc(&k, "(k1*k3 + k2)/(k1 + 2*k2)");
        assert!(a.mul(&a.inverse().unwrap()).is_one());
    }

    #[test]
    fn reduction_order_independent() {
        let k = VarSet::new(["k1", "k2", "k3"]);
        // (k1*k3)/(k2+k3) computed as (k1/(k2+k3)) * k3 and as k1 * (k3/(k2+k3))
        let one_way = sc(&k, "k1/(k2 + k3)").mul(&sc(&k, "k3"));
        let other = sc(&k, "k3/(k2 + k3)").mul(&sc(&k, "k1"));
        assert_eq!(one_way, other);
        assert_eq!(one_way, sc(&k, "k1*k3/(k2 + k3)"));
    }

    #[test]
    fn division_by_zero_rejected() {
        let k = VarSet::new(["k1"]);
        let z = ParamScalar::zero(k.clone());
        assert_eq!(
            sc(&k, "k1").div(&z).unwrap_err(),
            AlgebraError::DivisionByZero
        );
    }

    #[test]
    fn canonical_sign_of_denominator() {
        let k = VarSet::new(["k1", "k2"]);
        let a = ParamScalar::new(
            crate::algebra::expr::parse_poly_for_tests("k1", &k),
            crate::algebra::expr::parse_poly_for_tests("-2*k2 + k1", &k),
        )
        .unwrap();
        // canonical leading coefficient of the denominator is positive
        assert!(a.den().leading().unwrap().1 > &BigRational::zero());
        assert_eq!(a.render(), "k1/(k1 - 2*k2)");
    }

    #[test]
    fn derivative_quotient_rule() {
        let k = VarSet::new(["k1", "k2"]);
        let a = sc(&k, "k1/(k1 + k2)");
        assert_eq!(a.derivative(0), sc(&k, "k2/(k1^2 + 2*k1*k2 + k2^2)"));
        assert_eq!(a.derivative(1), sc(&k, "-k1/(k1^2 + 2*k1*k2 + k2^2)"));
    }
}
