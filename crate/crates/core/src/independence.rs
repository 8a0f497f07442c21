//! Algebraic independence of the phi rational functions: overlap equivalence
//! classes, the singleton shortcut, per-class Jacobian rank, and an optional
//! elimination-ideal cross-check.

use std::sync::Arc;

use crate::algebra::{ParamMatrix, ParamPoly, ParamScalar, VarSet, XPoly};
use crate::error::LiftError;
use crate::groebner::{elimination, reduced_groebner_basis, MonomialOrder};
use crate::reduction::{Gate, Reduction};

/// Default cap for the elimination-ideal check (it computes a Groebner basis
/// over the rationals in all rate symbols plus one variable per function).
pub const DEFAULT_ELIM_CAP: usize = 4;

/// The decomposition of the new core reactions into overlap classes.
#[derive(Debug, Clone)]
pub struct OverlapClasses {
    /// Connected components of the intermediate-induced subgraph, as lists of
    /// species indices of the extended network.
    pub components: Vec<Vec<usize>>,
    /// Core reactions absent from the extended network.
    pub r_prime: Vec<usize>,
    /// Partition of `r_prime` by the transitive closure of the overlap
    /// relation, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
}

/// How one class was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassMethod {
    /// A one-reaction class is independent without computation.
    Singleton,
    /// Jacobian rank of the class's phi functions equals the class size.
    Jacobian,
}

#[derive(Debug, Clone)]
pub struct ClassCheck {
    pub reactions: Vec<usize>,
    pub method: ClassMethod,
    /// Computed Jacobian rank (absent for singleton classes).
    pub rank: Option<usize>,
    pub independent: bool,
}

#[derive(Debug, Clone)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub classes: Vec<ClassCheck>,
}

/// Computes the intermediate-induced components and the overlap classes of
/// the core reactions that are not in the extended network. Two such
/// reactions overlap when each has a through-intermediates path whose
/// intermediates lie in one common component.
pub fn overlap_classes(red: &Reduction) -> OverlapClasses {
    let net = red.extended();
    let inter = red.intermediates();
    let m = inter.len();
    let unit_idx: Vec<Option<usize>> = inter
        .iter()
        .map(|&yi| {
            net.complex_index(&crate::network::Complex::from_parts([(yi, 1)]))
        })
        .collect();
    let pos_of_unit = |complex: usize| -> Option<usize> {
        unit_idx.iter().position(|&u| u == Some(complex))
    };

    // undirected connectivity over the directed edges between intermediates
    let mut comp = (0..m).collect::<Vec<usize>>();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
        }
        comp[i]
    }
    for r in net.reactions() {
        if let (Some(a), Some(b)) = (pos_of_unit(r.reactant), pos_of_unit(r.product)) {
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra] = rb;
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut comp_id = vec![usize::MAX; m];
    for i in 0..m {
        let root = find(&mut comp, i);
        match (0..i).find(|&j| find(&mut comp, j) == root) {
            Some(j) => comp_id[i] = comp_id[j],
            None => {
                comp_id[i] = components.len();
                components.push(Vec::new());
            }
        }
        components[comp_id[i]].push(inter[i]);
    }

    let r_prime = red.r_prime();

    // carried-by: component -> reactions of r_prime realizable inside it
    let mut carried: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
    for &ri in &r_prime {
        let info = &red.core_info()[ri];
        for (cid, _) in components.iter().enumerate() {
            if realizable_in_component(red, info.reactant_ext, info.product_ext, cid, &comp_id) {
                carried[cid].push(ri);
            }
        }
    }

    // transitive closure: reactions sharing a carrier component are one class
    let mut class_of: std::collections::HashMap<usize, usize> =
        r_prime.iter().map(|&r| (r, r)).collect();
    fn cfind(map: &mut std::collections::HashMap<usize, usize>, i: usize) -> usize {
        let p = map[&i];
        if p != i {
            let r = cfind(map, p);
            map.insert(i, r);
            return r;
        }
        i
    }
    for group in &carried {
        for w in group.windows(2) {
            let (a, b) = (cfind(&mut class_of, w[0]), cfind(&mut class_of, w[1]));
            if a != b {
                class_of.insert(a, b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_to_class: std::collections::HashMap<usize, usize> = Default::default();
    for &r in &r_prime {
        let root = cfind(&mut class_of, r);
        let idx = *root_to_class.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[idx].push(r);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);

    OverlapClasses {
        components,
        r_prime,
        classes,
    }
}

/// True when there is a path `c -> Y -> ... -> c'` whose intermediates all
/// belong to component `cid`.
fn realizable_in_component(
    red: &Reduction,
    c: usize,
    cprime: usize,
    cid: usize,
    comp_id: &[usize],
) -> bool {
    let net = red.extended();
    let inter = red.intermediates();
    let unit_idx: Vec<usize> = inter
        .iter()
        .map(|&yi| {
            net.complex_index(&crate::network::Complex::from_parts([(yi, 1)]))
                .expect("validated")
        })
        .collect();
    let mut seen = vec![false; inter.len()];
    let mut stack: Vec<usize> = Vec::new();
    for r in net.reactions() {
        if r.reactant != c {
            continue;
        }
        if let Some(p) = unit_idx.iter().position(|&u| u == r.product) {
            if comp_id[p] == cid && !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    while let Some(p) = stack.pop() {
        for r in net.reactions() {
            if r.reactant != unit_idx[p] {
                continue;
            }
            if r.product == cprime {
                return true;
            }
            if let Some(q) = unit_idx.iter().position(|&u| u == r.product) {
                if comp_id[q] == cid && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    false
}

/// Rank of the Jacobian of the given rational functions with respect to
/// every symbol of their parameter list, over the rational-function field.
pub fn jacobian_rank(phis: &[ParamScalar]) -> usize {
    if phis.is_empty() {
        return 0;
    }
    let params = phis[0].params().clone();
    let n = params.len();
    let entries: Vec<ParamScalar> = phis
        .iter()
        .flat_map(|f| (0..n).map(move |j| f.derivative(j)))
        .collect();
    ParamMatrix::new(phis.len(), n, entries).rank()
}

/// Decides algebraic independence of the phi functions class by class:
/// singleton classes pass without computation, larger ones by Jacobian rank.
/// Reactions shared with the extended network need no check (their fresh
/// rate symbol occurs only in their own phi). Sets the reduction's gate.
pub fn check_independence(red: &mut Reduction) -> IndependenceVerdict {
    let classes = overlap_classes(red);
    let mut checks = Vec::with_capacity(classes.classes.len());
    let mut independent = true;
    for class in &classes.classes {
        if class.len() == 1 {
            checks.push(ClassCheck {
                reactions: class.clone(),
                method: ClassMethod::Singleton,
                rank: None,
                independent: true,
            });
            continue;
        }
        let phis: Vec<ParamScalar> = class.iter().map(|&r| red.phi()[r].clone()).collect();
        let rank = jacobian_rank(&phis);
        let ok = rank == class.len();
        independent &= ok;
        checks.push(ClassCheck {
            reactions: class.clone(),
            method: ClassMethod::Jacobian,
            rank: Some(rank),
            independent: ok,
        });
    }
    red.set_gate(if independent {
        Gate::VerifiedIndependent
    } else {
        Gate::VerifiedDependent
    });
    IndependenceVerdict {
        independent,
        classes: checks,
    }
}

/// The Groebner-basis route: the functions `f_i/g_i` are independent iff the
/// ideal `<g_i T_i - f_i, 1 - y g>` meets `Q[T]` in `{0}`, where `g` is the
/// lcm of the denominators (inverting the lcm inverts every `g_i`).
/// Eliminates the rate symbols and the saturation variable by a graded
/// elimination order. Costly; capped.
pub fn independence_elimination_check(
    phis: &[ParamScalar],
    cap: usize,
) -> Result<bool, LiftError> {
    let m = phis.len();
    if m == 0 {
        return Ok(true);
    }
    if m > cap {
        return Err(LiftError::ElimCapExceeded { count: m, cap });
    }
    let params = phis[0].params().clone();
    let s = params.len();

    // ring over the rationals: rate symbols, one saturation variable, then
    // one T per function
    let mut names: Vec<String> = params.names().to_vec();
    let sat = fresh_name("y_sat", &names);
    names.push(sat);
    for i in 0..m {
        let t = fresh_name(&format!("T{}", i + 1), &names);
        names.push(t);
    }
    let vars = VarSet::new(names);
    let no_params = VarSet::empty();

    let to_x = |p: &ParamPoly| -> XPoly {
        XPoly::from_terms(
            vars.clone(),
            no_params.clone(),
            p.terms().map(|(mono, c)| {
                let mut exps = vec![0u32; vars.len()];
                exps[..s].copy_from_slice(mono.exps());
                (
                    crate::algebra::Mono::from_exponents(exps),
                    ParamScalar::from_rational(no_params.clone(), c.clone()),
                )
            }),
        )
    };

    let mut gens: Vec<XPoly> = Vec::with_capacity(m + 1);
    let mut den_lcm = ParamPoly::one(params.clone());
    for (i, phi) in phis.iter().enumerate() {
        let t = XPoly::var(vars.clone(), no_params.clone(), s + 1 + i);
        gens.push(to_x(phi.den()).mul(&t).sub(&to_x(phi.num())));
        let g = crate::algebra::poly_gcd(&den_lcm, phi.den());
        den_lcm = den_lcm.mul(&phi.den().exact_div(&g).expect("gcd divides"));
    }
    let y = XPoly::var(vars.clone(), no_params.clone(), s);
    gens.push(XPoly::one(vars.clone(), no_params.clone()).sub(&y.mul(&to_x(&den_lcm))));

    let keep: Vec<bool> = (0..vars.len()).map(|i| i > s).collect();
    let ord = MonomialOrder::block_elimination(vars.clone(), &keep);
    let gb = reduced_groebner_basis(&gens, &ord, None).expect("no deadline set");
    let j_gens = elimination(&gb, &keep).expect("graded elimination order");
    Ok(j_gens.is_empty())
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    let mut i = 0;
    loop {
        let cand = format!("{base}_{i}");
        if !taken.iter().any(|t| t == &cand) {
            return cand;
        }
        i += 1;
    }
}

/// The parameter symbols occurring in a scalar (union of numerator and
/// denominator support).
pub fn symbol_support(s: &ParamScalar) -> Vec<usize> {
    let mut v = s.num().support_vars();
    for x in s.den().support_vars() {
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v.sort_unstable();
    v
}

/// Helper for building phi-like scalars in tests and benchmarks.
pub fn scalar_over(params: &Arc<VarSet>, text: &str) -> ParamScalar {
    crate::algebra::parse_scalar(text, params).expect("valid scalar expression")
}
