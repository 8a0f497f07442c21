//! The headline pipelines: lifting a core Groebner basis to the extended
//! network by linear algebra, invariants of non-intermediate species by
//! elimination, and binomiality via the core network.

use std::time::Instant;

use crate::algebra::XPoly;
use crate::error::{Error, GroebnerError, LiftError};
use crate::groebner::{
    self, elimination, is_groebner_basis, reduce, reduced_groebner_basis, GroebnerBasis,
    MonomialOrder,
};
use crate::reduction::Reduction;

/// How much of the lifted basis to re-verify. `Quick` checks the core basis
/// and the structural reducedness of the lift; `Full` additionally runs the
/// S-polynomial criterion on the lifted basis (over the extended parameters,
/// which is considerably more expensive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyLevel {
    #[default]
    Quick,
    Full,
}

#[derive(Debug, Clone, Default)]
pub struct LiftOptions {
    pub verify: VerifyLevel,
    pub deadline: Option<Instant>,
    /// Also compute the reduced basis of the extended ideal directly under
    /// the block order and compare (slow; for benchmarks and small cases).
    pub compare_direct: bool,
}

#[derive(Debug, Clone, Default)]
pub struct LiftTimings {
    pub core_gb_ms: f64,
    pub h_ms: f64,
    pub lift_ms: f64,
    pub direct_ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LiftReport {
    /// Reduced basis of the core steady-state ideal (tail ring, core rates).
    pub core_basis: GroebnerBasis,
    /// Reduced basis of the extended steady-state ideal (lifted ring).
    pub lifted_basis: GroebnerBasis,
    pub timings: LiftTimings,
    /// Set when `compare_direct` ran: whether the directly computed reduced
    /// basis is term-for-term identical to the lifted one.
    pub direct_matches: Option<bool>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Computes the reduced core basis under `core_order` (a monomial order on
/// the tail variables) and lifts it to the reduced basis of the extended
/// steady-state ideal under the block order: the phi image of the core basis
/// plus one linear polynomial `y_i - Rem(sum_c mu_{i,c} x^c, Phi(G))` per
/// intermediate.
pub fn lift_groebner(
    red: &Reduction,
    core_order: &MonomialOrder,
    opts: &LiftOptions,
) -> Result<LiftReport, Error> {
    red.gate_open().map_err(Error::Lift)?;
    let mut timings = LiftTimings::default();

    let t = Instant::now();
    let core_basis = reduced_groebner_basis(
        &red.core_ideal_tail(true),
        core_order,
        opts.deadline,
    )
    .map_err(Error::Groebner)?;
    timings.core_gb_ms = ms(t);

    let t = Instant::now();
    let block = red.block_order(core_order);
    let phi_g: Vec<XPoly> = core_basis
        .polys
        .iter()
        .map(|g| red.apply_phi(g).map(|p| red.lift_from_tail(&p)))
        .collect::<Result<_, _>>()
        .map_err(Error::Lift)?;
    timings.h_ms = ms(t);

    let t = Instant::now();
    let m = red.intermediates().len();
    let mut lifted = phi_g.clone();
    for i in 0..m {
        let mu_sum = red.mu_sum_lifted(i);
        let rem = reduce(&mu_sum, &phi_g, &block);
        let y = XPoly::var(
            red.lifted_vars().clone(),
            red.ext_params().clone(),
            i,
        );
        lifted.push(y.sub(&rem));
    }
    // descending leading monomials: the y-rows come first
    lifted.sort_by(|a, b| {
        let la = block.leading(a).unwrap().0;
        let lb = block.leading(b).unwrap().0;
        block.cmp(lb, la)
    });
    let lifted_basis = GroebnerBasis {
        order: block.clone(),
        polys: lifted,
        reduced: true,
    };
    timings.lift_ms = ms(t);

    debug_assert_eq!(lifted_basis.len(), core_basis.len() + m);
    verify_lift(red, &core_basis, core_order, &lifted_basis, opts.verify)?;

    let mut direct_matches = None;
    if opts.compare_direct {
        let t = Instant::now();
        let direct = reduced_groebner_basis(&red.extended_f_lifted(), &block, opts.deadline)
            .map_err(Error::Groebner)?;
        timings.direct_ms = Some(ms(t));
        direct_matches = Some(direct.polys == lifted_basis.polys);
    }

    Ok(LiftReport {
        core_basis,
        lifted_basis,
        timings,
        direct_matches,
    })
}

/// Structural checks on the lift; `Full` adds the S-polynomial criterion on
/// the lifted basis.
fn verify_lift(
    red: &Reduction,
    core_basis: &GroebnerBasis,
    core_order: &MonomialOrder,
    lifted: &GroebnerBasis,
    level: VerifyLevel,
) -> Result<(), Error> {
    // the core basis must pass the S-polynomial criterion (cheap ring)
    if !is_groebner_basis(&core_basis.polys, core_order) {
        return Err(Error::Groebner(GroebnerError::InvalidOrderMatrix(
            "core basis failed the S-polynomial criterion".into(),
        )));
    }
    // structural reducedness of the lifted set
    let lms: Vec<_> = lifted
        .polys
        .iter()
        .map(|p| lifted.order.leading(p).expect("nonzero").0.clone())
        .collect();
    for (i, p) in lifted.polys.iter().enumerate() {
        let (_, lc) = lifted.order.leading(p).unwrap();
        if !lc.is_one() {
            return Err(Error::Groebner(GroebnerError::InvalidOrderMatrix(
                "lifted basis element is not monic".into(),
            )));
        }
        for (m, _) in p.terms() {
            if lms
                .iter()
                .enumerate()
                .any(|(j, lm)| j != i && lm.divides(m))
            {
                return Err(Error::Groebner(GroebnerError::InvalidOrderMatrix(
                    "lifted basis is not reduced".into(),
                )));
            }
        }
    }
    if level == VerifyLevel::Full && !is_groebner_basis(&lifted.polys, &lifted.order) {
        return Err(Error::Groebner(GroebnerError::InvalidOrderMatrix(
            "lifted basis failed the S-polynomial criterion".into(),
        )));
    }
    let _ = red;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct InvariantsReport {
    /// Generators of the elimination ideal of the core network, in integral
    /// normal form (denominator-free, content-free coefficients).
    pub core: Vec<XPoly>,
    /// Their phi images: generators of the elimination ideal of the extended
    /// network on the kept variables.
    pub lifted: Vec<XPoly>,
    /// Kept variable names, in ring order.
    pub keep: Vec<String>,
}

/// Invariants of the extended network supported on the kept non-intermediate
/// variables: computes a core lex basis with the eliminated variables first,
/// intersects with the keep-ring, and applies phi.
pub fn invariants(red: &Reduction, keep_names: &[String]) -> Result<InvariantsReport, Error> {
    red.gate_open().map_err(Error::Lift)?;
    let tail = red.tail_vars();
    let mut keep_mask = vec![false; tail.len()];
    for name in keep_names {
        match tail.position(name) {
            Some(i) => keep_mask[i] = true,
            None => {
                let err = if red.lifted_vars().position(name).is_some() {
                    LiftError::KeepContainsIntermediate(name.clone())
                } else {
                    LiftError::UnknownVariable(name.clone())
                };
                return Err(Error::Lift(err));
            }
        }
    }
    let priority: Vec<usize> = (0..tail.len())
        .filter(|&i| !keep_mask[i])
        .chain((0..tail.len()).filter(|&i| keep_mask[i]))
        .collect();
    let order = MonomialOrder::lex_by_priority(tail.clone(), &priority);
    let gb = reduced_groebner_basis(&red.core_ideal_tail(true), &order, None)
        .map_err(Error::Groebner)?;
    let kept = elimination(&gb, &keep_mask).map_err(Error::Groebner)?;
    let core: Vec<XPoly> = kept.iter().map(XPoly::integral_normal_form).collect();
    let lifted = core
        .iter()
        .map(|p| red.apply_phi(p).map(|q| red.lift_from_tail(&q)))
        .collect::<Result<_, _>>()
        .map_err(Error::Lift)?;
    Ok(InvariantsReport {
        core,
        lifted,
        keep: (0..tail.len())
            .filter(|&i| keep_mask[i])
            .map(|i| tail.name(i).to_string())
            .collect(),
    })
}

/// Which rule decided binomiality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialityRoute {
    /// All intermediates are 1-input, so the core verdict transfers directly.
    OneInput,
    /// Remainders of the mu-sums modulo the phi image of the core basis were
    /// checked term by term.
    FullRemainderCheck,
    /// The core ideal is already not binomial; no remainder check needed.
    None,
}

#[derive(Debug, Clone)]
pub struct BinomialityVerdict {
    pub binomial: bool,
    pub core_binomial: bool,
    /// Term counts of the checked remainders, per intermediate name.
    pub remainder_term_counts: Vec<(String, usize)>,
    /// The first remainder with more than one term, when not binomial.
    pub witness: Option<XPoly>,
    /// The first non-binomial core basis element, when the core fails.
    pub core_witness: Option<XPoly>,
    pub route: BinomialityRoute,
    /// The reduced core basis the verdict was computed from.
    pub core_basis: GroebnerBasis,
}

/// Decides whether the extended steady-state ideal is binomial: the core
/// reduced basis must be binomial and every mu-sum must leave a remainder
/// with at most one term modulo its phi image. When every intermediate is
/// 1-input the remainder condition holds automatically.
pub fn binomiality(red: &Reduction) -> Result<BinomialityVerdict, Error> {
    red.gate_open().map_err(Error::Lift)?;
    let tail = red.tail_vars();
    let order = MonomialOrder::grevlex(tail.clone());
    let core_basis = reduced_groebner_basis(&red.core_ideal_tail(true), &order, None)
        .map_err(Error::Groebner)?;
    let core_binomial = groebner::is_binomial_reduced(&core_basis);
    if !core_binomial {
        let core_witness = core_basis
            .polys
            .iter()
            .find(|p| p.num_terms() > 2)
            .cloned();
        return Ok(BinomialityVerdict {
            binomial: false,
            core_binomial,
            remainder_term_counts: Vec::new(),
            witness: None,
            core_witness,
            route: BinomialityRoute::None,
            core_basis,
        });
    }
    let m = red.intermediates().len();
    if (0..m).all(|i| red.input_count(i) == 1) {
        return Ok(BinomialityVerdict {
            binomial: true,
            core_binomial,
            remainder_term_counts: Vec::new(),
            witness: None,
            core_witness: None,
            route: BinomialityRoute::OneInput,
            core_basis,
        });
    }
    let phi_g: Vec<XPoly> = core_basis
        .polys
        .iter()
        .map(|g| red.apply_phi(g))
        .collect::<Result<_, _>>()
        .map_err(Error::Lift)?;
    let mut counts = Vec::with_capacity(m);
    let mut witness = None;
    for i in 0..m {
        let rem = reduce(&red.mu_sum_tail(i), &phi_g, &order);
        let count = rem.num_terms();
        if count > 1 && witness.is_none() {
            witness = Some(rem.clone());
        }
        let name = red.extended().species()[red.intermediates()[i]].name.clone();
        counts.push((name, count));
    }
    let binomial = counts.iter().all(|(_, c)| *c <= 1);
    Ok(BinomialityVerdict {
        binomial,
        core_binomial,
        remainder_term_counts: counts,
        witness,
        core_witness: None,
        route: BinomialityRoute::FullRemainderCheck,
        core_basis,
    })
}
