//! Multivariate division, Buchberger's algorithm, reduced Groebner bases,
//! ideal membership and equality, elimination, and binomiality of a reduced
//! basis — all over the parameter fraction field.

mod order;

pub use order::{MonomialOrder, OrderKind};

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crate::algebra::{Mono, ParamScalar, XPoly};
use crate::error::GroebnerError;

/// A Groebner basis together with the order it was computed under.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub polys: Vec<XPoly>,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// Sort key type: comparing keys lexicographically agrees with the order,
/// and keys are additive under monomial multiplication.
type Key = Vec<i128>;

fn key_add(a: &Key, b: &Key) -> Key {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

/// Working form of a polynomial: terms addressable by order key, so the
/// leading term is the last entry.
struct Work {
    map: BTreeMap<Key, (Mono, ParamScalar)>,
}

impl Work {
    fn new(f: &XPoly, ord: &MonomialOrder) -> Self {
        let map = f
            .terms()
            .map(|(m, c)| (ord.key(m), (m.clone(), c.clone())))
            .collect();
        Work { map }
    }

    fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    fn leading(&self) -> Option<(&Key, &Mono, &ParamScalar)> {
        self.map.iter().next_back().map(|(k, (m, c))| (k, m, c))
    }

    fn pop_leading(&mut self) -> Option<(Mono, ParamScalar)> {
        self.map.pop_last().map(|(_, t)| t)
    }

    fn add_term(&mut self, key: Key, m: Mono, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.map.entry(key) {
            Entry::Vacant(e) => {
                e.insert((m, c));
            }
            Entry::Occupied(mut e) => {
                let s = e.get().1.add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.get_mut().1 = s;
                }
            }
        }
    }

}

/// A divisor with cached leading data and term keys.
struct Divisor {
    lm: Mono,
    lm_key: Key,
    lc: ParamScalar,
    tail: Vec<(Key, Mono, ParamScalar)>,
}

fn prepare_divisors(gs: &[XPoly], ord: &MonomialOrder) -> Vec<Divisor> {
    gs.iter()
        .map(|g| {
            let (lm, lc) = ord.leading(g).expect("divisors must be nonzero");
            let (lm, lc) = (lm.clone(), lc.clone());
            let lm_key = ord.key(&lm);
            let tail = g
                .terms()
                .filter(|(m, _)| **m != lm)
                .map(|(m, c)| (ord.key(m), m.clone(), c.clone()))
                .collect();
            Divisor {
                lm,
                lm_key,
                lc,
                tail,
            }
        })
        .collect()
}

/// Multivariate division of `f` by the list `G` (first divisible divisor in
/// list order wins): returns quotients and the remainder, with
/// `f = sum q_i g_i + rem` and no term of `rem` divisible by any `LM(g_i)`.
pub fn divide(f: &XPoly, gs: &[XPoly], ord: &MonomialOrder) -> (Vec<XPoly>, XPoly) {
    let divisors = prepare_divisors(gs, ord);
    let (quots, rem) = divide_prepared(f, &divisors, ord, false);
    (quots.expect("quotients requested"), rem)
}

/// The remainder only (skips quotient bookkeeping).
pub fn reduce(f: &XPoly, gs: &[XPoly], ord: &MonomialOrder) -> XPoly {
    let divisors = prepare_divisors(gs, ord);
    divide_prepared(f, &divisors, ord, true).1
}

fn divide_prepared(
    f: &XPoly,
    divisors: &[Divisor],
    ord: &MonomialOrder,
    skip_quotients: bool,
) -> (Option<Vec<XPoly>>, XPoly) {
    let mut work = Work::new(f, ord);
    let mut rem = XPoly::zero(f.vars().clone(), f.params().clone());
    let mut quots = if skip_quotients {
        None
    } else {
        Some(vec![XPoly::zero(f.vars().clone(), f.params().clone()); divisors.len()])
    };
    while !work.is_zero() {
        let (lk, lm, lc) = {
            let (k, m, c) = work.leading().unwrap();
            (k.clone(), m.clone(), c.clone())
        };
        let hit = divisors.iter().position(|d| d.lm.divides(&lm));
        match hit {
            Some(gi) => {
                let d = &divisors[gi];
                let qm = lm.checked_div(&d.lm).unwrap();
                let qc = lc.div(&d.lc).expect("leading coefficients are nonzero");
                let qk: Key = lk
                    .iter()
                    .zip(d.lm_key.iter())
                    .map(|(a, b)| a - b)
                    .collect();
                work.pop_leading();
                for (tk, tm, tc) in &d.tail {
                    work.add_term(key_add(tk, &qk), tm.mul(&qm), tc.mul(&qc).neg());
                }
                if let Some(qs) = quots.as_mut() {
                    qs[gi].add_term(qm, qc);
                }
            }
            None => {
                let (m, c) = work.pop_leading().unwrap();
                rem.add_term(m, c);
            }
        }
    }
    (quots, rem)
}

/// The S-polynomial `lcm/LT(f) * f - lcm/LT(g) * g`.
pub fn s_polynomial(f: &XPoly, g: &XPoly, ord: &MonomialOrder) -> XPoly {
    let (fm, fc) = ord.leading(f).expect("nonzero");
    let (gm, gc) = ord.leading(g).expect("nonzero");
    let lcm = fm.lcm(gm);
    let tf = lcm.checked_div(fm).unwrap();
    let tg = lcm.checked_div(gm).unwrap();
    let a = f.mul_term(&tf, &fc.inverse().expect("leading coefficient nonzero"));
    let b = g.mul_term(&tg, &gc.inverse().expect("leading coefficient nonzero"));
    a.sub(&b)
}

fn monic(f: &XPoly, ord: &MonomialOrder) -> XPoly {
    let (_, lc) = ord.leading(f).expect("nonzero");
    if lc.is_one() {
        f.clone()
    } else {
        f.scale(&lc.inverse().expect("leading coefficient nonzero"))
    }
}

/// Buchberger's algorithm with the normal selection strategy (smallest pair
/// lcm under the order, ties by creation index), the coprime-leading-monomial
/// criterion and the chain criterion. Every polynomial entering the basis is
/// made monic. Zero generators are dropped; the zero ideal yields the empty
/// basis.
pub fn buchberger(
    gens: &[XPoly],
    ord: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<GroebnerBasis, GroebnerError> {
    let mut basis: Vec<XPoly> = Vec::new();
    let mut lms: Vec<Mono> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            let g = monic(g, ord);
            lms.push(ord.leading(&g).unwrap().0.clone());
            basis.push(g);
        }
    }

    // Pending pair queue ordered by (lcm key, creation index).
    let mut queue: BTreeMap<(Key, u64), (usize, usize)> = BTreeMap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut creation: u64 = 0;
    let push_pairs = |queue: &mut BTreeMap<(Key, u64), (usize, usize)>,
                          pending: &mut HashSet<(usize, usize)>,
                          creation: &mut u64,
                          lms: &[Mono],
                          t: usize| {
        for i in 0..t {
            let lcm = lms[i].lcm(&lms[t]);
            queue.insert((ord.key(&lcm), *creation), (i, t));
            pending.insert((i, t));
            *creation += 1;
        }
    };
    for t in 0..basis.len() {
        push_pairs(&mut queue, &mut pending, &mut creation, &lms, t);
    }

    while let Some((_, (i, j))) = queue.pop_first() {
        pending.remove(&(i, j));
        if let Some(d) = deadline {
            if Instant::now() > d {
                return Err(GroebnerError::Timeout);
            }
        }
        if lms[i].coprime(&lms[j]) {
            continue;
        }
        // Chain criterion: some k with LM_k | lcm(i,j) and both (i,k), (j,k)
        // no longer pending.
        let lcm = lms[i].lcm(&lms[j]);
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lms[k].divides(&lcm)
                && !pending.contains(&pair(i, k))
                && !pending.contains(&pair(j, k))
        });
        if chained {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], ord);
        let rem = reduce(&s, &basis, ord);
        if rem.is_zero() {
            continue;
        }
        let rem = monic(&rem, ord);
        lms.push(ord.leading(&rem).unwrap().0.clone());
        basis.push(rem);
        push_pairs(
            &mut queue,
            &mut pending,
            &mut creation,
            &lms,
            basis.len() - 1,
        );
    }

    Ok(GroebnerBasis {
        order: ord.clone(),
        polys: basis,
        reduced: false,
    })
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Transforms a Groebner basis into the reduced Groebner basis of the same
/// ideal: monic, no term of any element divisible by the leading monomial of
/// another, sorted by descending leading monomial. Idempotent.
pub fn reduce_basis(gb: &GroebnerBasis) -> GroebnerBasis {
    let ord = &gb.order;
    let mut items: Vec<(Mono, XPoly)> = gb
        .polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let p = monic(p, ord);
            (ord.leading(&p).unwrap().0.clone(), p)
        })
        .collect();
    // ascending by leading monomial so every potential divisor is kept first
    items.sort_by(|(a, _), (b, _)| ord.cmp(a, b));
    let mut kept: Vec<(Mono, XPoly)> = Vec::new();
    for (lm, p) in items {
        if kept.iter().any(|(k, _)| k.divides(&lm)) {
            continue;
        }
        kept.push((lm, p));
    }
    // tail-reduce each against the others until self-stable
    let n = kept.len();
    for i in 0..n {
        let others: Vec<XPoly> = (0..n)
            .filter(|&j| j != i)
            .map(|j| kept[j].1.clone())
            .collect();
        let r = reduce(&kept[i].1, &others, ord);
        kept[i].1 = monic(&r, ord);
    }
    kept.sort_by(|(a, _), (b, _)| ord.cmp(b, a));
    GroebnerBasis {
        order: ord.clone(),
        polys: kept.into_iter().map(|(_, p)| p).collect(),
        reduced: true,
    }
}

/// Computes the reduced Groebner basis of the ideal generated by `gens`.
pub fn reduced_groebner_basis(
    gens: &[XPoly],
    ord: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<GroebnerBasis, GroebnerError> {
    Ok(reduce_basis(&buchberger(gens, ord, deadline)?))
}

/// True iff every S-polynomial of basis pairs reduces to zero modulo the
/// basis (pairs with coprime leading monomials are skipped).
pub fn is_groebner_basis(polys: &[XPoly], ord: &MonomialOrder) -> bool {
    let polys: Vec<XPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let lms: Vec<Mono> = polys
        .iter()
        .map(|p| ord.leading(p).unwrap().0.clone())
        .collect();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if lms[i].coprime(&lms[j]) {
                continue;
            }
            let s = s_polynomial(&polys[i], &polys[j], ord);
            if !reduce(&s, &polys, ord).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Membership test: `f` is in the ideal iff its remainder modulo the
/// Groebner basis vanishes.
pub fn ideal_membership(f: &XPoly, gb: &GroebnerBasis) -> bool {
    reduce(f, &gb.polys, &gb.order).is_zero()
}

/// Ideal equality by comparing reduced Groebner bases (unique per order).
pub fn ideals_equal(
    b1: &[XPoly],
    b2: &[XPoly],
    ord: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<bool, GroebnerError> {
    let g1 = reduced_groebner_basis(b1, ord, deadline)?;
    let g2 = reduced_groebner_basis(b2, ord, deadline)?;
    Ok(g1.polys == g2.polys)
}

/// The subset of a Groebner basis supported on the kept variables, which
/// generates the elimination ideal when the order is of elimination type for
/// the complement of `keep`.
pub fn elimination(gb: &GroebnerBasis, keep: &[bool]) -> Result<Vec<XPoly>, GroebnerError> {
    if !gb.order.is_elimination_for(keep) {
        return Err(GroebnerError::NotEliminationOrder);
    }
    Ok(gb
        .polys
        .iter()
        .filter(|p| p.supported_on(keep))
        .cloned()
        .collect())
}

/// A reduced basis generates a binomial ideal iff every element has at most
/// two terms.
pub fn is_binomial_reduced(gb: &GroebnerBasis) -> bool {
    debug_assert!(gb.reduced);
    gb.polys.iter().all(|p| p.num_terms() <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_xpoly, VarSet};
    use std::sync::Arc;

    fn ring2() -> (Arc<VarSet>, Arc<VarSet>) {
        (VarSet::new(["x1", "x2"]), VarSet::new(["k1", "k2", "k3"]))
    }

    fn xp(s: &str, x: &Arc<VarSet>, k: &Arc<VarSet>) -> XPoly {
        parse_xpoly(s, x, k).unwrap()
    }

    #[test]
    fn divide_by_self() {
        let (x, k) = ring2();
        let ord = MonomialOrder::lex(x.clone());
        let f = xp("k1*x1^2 + x2", &x, &k);
        let (q, r) = divide(&f, &[f.clone()], &ord);
        assert!(r.is_zero());
        assert!(q[0].num_terms() == 1);
    }

    #[test]
    fn division_reconstruction() {
        let (x, k) = ring2();
        let ord = MonomialOrder::grevlex(x.clone());
        let f = xp("x1^3*x2 - k2*x1*x2^2 + x1 + 1", &x, &k);
        let g1 = xp("x1*x2 - 1", &x, &k);
        let g2 = xp("x2^2 - k3*x1", &x, &k);
        let gs = [g1.clone(), g2.clone()];
        let (q, r) = divide(&f, &gs, &ord);
        let recon = q[0].mul(&g1).add(&q[1].mul(&g2)).add(&r);
        assert_eq!(recon, f);
        // no term of r divisible by the leading monomials
        for (m, _) in r.terms() {
            assert!(!ord.leading(&g1).unwrap().0.divides(m));
            assert!(!ord.leading(&g2).unwrap().0.divides(m));
        }
    }

    #[test]
    fn s_poly_of_equal_is_zero() {
        let (x, k) = ring2();
        let ord = MonomialOrder::lex(x.clone());
        let f = xp("x1^2 + k1*x2", &x, &k);
        assert!(s_polynomial(&f, &f, &ord).is_zero());
    }

    #[test]
    fn incomplete_pair_detected() {
        let (x, k) = ring2();
        let ord = MonomialOrder::lex(x.clone());
        // S-poly of x1*x2 - 1 and x1^2 - 1 is x2 - x1, which does not reduce
        let g = [xp("x1*x2 - 1", &x, &k), xp("x1^2 - 1", &x, &k)];
        assert!(!is_groebner_basis(&g, &ord));
        let gb = reduced_groebner_basis(&g, &ord, None).unwrap();
        assert!(is_groebner_basis(&gb.polys, &ord));
        assert!(ideal_membership(&xp("x2 - x1", &x, &k), &gb));
    }

    #[test]
    fn single_generator_is_basis() {
        let (x, k) = ring2();
        let ord = MonomialOrder::grevlex(x.clone());
        let f = xp("x1^2 - k1*x1*x2", &x, &k);
        let gb = buchberger(&[f.clone()], &ord, None).unwrap();
        assert_eq!(gb.polys, vec![f]);
    }

    #[test]
    fn reduce_basis_drops_redundant() {
        let (x, k) = ring2();
        let ord = MonomialOrder::lex(x.clone());
        let gb = GroebnerBasis {
            order: ord.clone(),
            polys: vec![xp("x1", &x, &k), xp("x1^2", &x, &k)],
            reduced: false,
        };
        let red = reduce_basis(&gb);
        assert_eq!(red.polys, vec![xp("x1", &x, &k)]);
        // idempotent
        assert_eq!(reduce_basis(&red).polys, red.polys);
    }

    #[test]
    fn membership_negative() {
        let (x, k) = ring2();
        let ord = MonomialOrder::lex(x.clone());
        let gb = reduced_groebner_basis(&[xp("x1", &x, &k)], &ord, None).unwrap();
        assert!(!ideal_membership(&xp("1", &x, &k), &gb));
        assert!(!ideal_membership(&xp("x2", &x, &k), &gb));
    }

    #[test]
    fn elimination_requires_elimination_order() {
        let (x, k) = ring2();
        let grevlex = MonomialOrder::grevlex(x.clone());
        let gb = reduced_groebner_basis(&[xp("x1 - x2^2", &x, &k)], &grevlex, None).unwrap();
        assert_eq!(
            elimination(&gb, &[false, true]).unwrap_err(),
            GroebnerError::NotEliminationOrder
        );
        let lex = MonomialOrder::lex(x.clone());
        let gb = reduced_groebner_basis(
            &[xp("x1 - x2^2", &x, &k), xp("x1*x2 - k1", &x, &k)],
            &lex,
            None,
        )
        .unwrap();
        let eliminated = elimination(&gb, &[false, true]).unwrap();
        assert!(!eliminated.is_empty());
        for p in &eliminated {
            assert!(p.supported_on(&[false, true]));
        }
    }
}
