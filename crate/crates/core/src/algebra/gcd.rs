//! Multivariate polynomial gcd over the rationals.
//!
//! Primitive pseudo-remainder sequences, variable by variable, with monomial
//! fast paths. Adequate at the scale of parametric coefficients arising from
//! reaction networks; the recursive structure is the swap-in point for a
//! faster algorithm if ever needed.

use num_traits::One;

use super::mono::Mono;
use super::poly::ParamPoly;

/// A gcd of `a` and `b`, normalized to coprime integer coefficients with a
/// positive leading coefficient. `gcd(0, q)` is the normalization of `q`.
pub fn poly_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.proportional(b) {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one(a.vars().clone());
    }
    if a.is_monomial() || b.is_monomial() {
        let m = a.monomial_content().gcd(&b.monomial_content());
        return ParamPoly::from_terms(a.vars().clone(), [(m, One::one())]);
    }

    // Pull out the common monomial factor first; the remaining parts have
    // trivial monomial content which keeps the recursion shallow.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let shared = ma.gcd(&mb);
    let a1 = divide_by_mono(a, &ma);
    let b1 = divide_by_mono(b, &mb);
    let core = gcd_primitive_parts(&a1, &b1);
    core.mul_term(&shared, &One::one()).primitive()
}

fn divide_by_mono(p: &ParamPoly, m: &Mono) -> ParamPoly {
    if m.is_one() {
        return p.clone();
    }
    ParamPoly::from_terms(
        p.vars().clone(),
        p.terms()
            .map(|(mm, c)| (mm.checked_div(m).expect("monomial content divides"), c.clone())),
    )
}

/// Gcd of two polynomials with trivial monomial content, by a primitive PRS
/// in the highest variable occurring in both.
fn gcd_primitive_parts(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    let shared: Vec<usize> = {
        let sa = a.support_vars();
        let sb = b.support_vars();
        sa.into_iter().filter(|v| sb.contains(v)).collect()
    };
    let v = match shared.last() {
        Some(&v) => v,
        // No common variable: the gcd is a constant.
        None => return ParamPoly::one(a.vars().clone()),
    };

    let (ca, pa) = content_in(a, v);
    let (cb, pb) = content_in(b, v);
    let cont = poly_gcd(&ca, &cb);

    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        f = g;
        g = content_in(&r, v).1;
    }
    cont.mul(&g).primitive()
}

/// Content and primitive part with respect to variable `v`: the gcd of the
/// coefficients of the powers of `v`, and the exact quotient by it.
fn content_in(p: &ParamPoly, v: usize) -> (ParamPoly, ParamPoly) {
    let deg = p.degree_in(v);
    let mut cont = ParamPoly::zero(p.vars().clone());
    for e in 0..=deg {
        let c = p.coeff_of_var_pow(v, e);
        if !c.is_zero() {
            cont = poly_gcd(&cont, &c);
            if cont.is_one() {
                break;
            }
        }
    }
    let prim = p.exact_div(&cont).expect("content divides");
    (cont, prim)
}

/// A pseudo-remainder of `f` by `g` in the variable `v` (up to a unit of the
/// coefficient ring, which the primitive PRS discards anyway).
fn pseudo_rem(f: &ParamPoly, g: &ParamPoly, v: usize) -> ParamPoly {
    let dg = g.degree_in(v);
    let lcg = g.coeff_of_var_pow(v, dg);
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < dg {
            break;
        }
        let lcr = r.coeff_of_var_pow(v, dr);
        // r <- lcg * r - lcr * v^(dr-dg) * g
        let shift = Mono::var_pow(f.vars().len(), v, dr - dg);
        r = r.mul(&lcg).sub(&g.mul(&lcr).mul_term(&shift, &One::one()));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarSet;

    fn p(vars: &std::sync::Arc<VarSet>, s: &str) -> ParamPoly {
        crate::algebra::expr::parse_poly_for_tests(s, vars)
    }

    #[test]
    fn monomial_gcd() {
        let v = VarSet::new(["k1", "k2", "k3"]);
        let g = poly_gcd(&p(&v, "k1*k2"), &p(&v, "k1*k3"));
        assert_eq!(g, p(&v, "k1"));
    }

    #[test]
    fn gcd_with_zero() {
        let v = VarSet::new(["k1", "k2"]);
        let q = p(&v, "-2*k1 + 4*k2");
        let g = poly_gcd(&q, &ParamPoly::zero(v.clone()));
        assert_eq!(g, p(&v, "k1 - 2*k2"));
    }

    #[test]
    fn common_factor_recovered() {
        let v = VarSet::new(["a", "b", "c"]);
        let f = p(&v, "a + b");
        let x = f.mul(&p(&v, "a + c"));
        let y = f.mul(&p(&v, "b^2 + c"));
        let g = poly_gcd(&x, &y);
        assert_eq!(g, f);
        // cofactors are coprime
        let cx = x.exact_div(&g).unwrap();
        let cy = y.exact_div(&g).unwrap();
        assert!(poly_gcd(&cx, &cy).is_one());
    }

    #[test]
    fn deeper_multivariate() {
        let v = VarSet::new(["a", "b", "c", "d"]);
        let common = p(&v, "a*b + c*d + 1");
        let x = common.mul(&p(&v, "a^2 + d"));
        let y = common.mul(&p(&v, "b + c^2"));
        assert_eq!(poly_gcd(&x, &y), common);
    }
}
