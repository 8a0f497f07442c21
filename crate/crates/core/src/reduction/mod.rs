//! Intermediate-species machinery: validation, inputs, the mu-table (linear
//! solve plus a spanning-tree oracle), core-network construction, the phi map
//! and its polynomial extension, and the H polynomials.

mod trees;

pub use trees::mu_spanning_tree;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{solve_linear, ParamMatrix, ParamPoly, ParamScalar, VarSet, XPoly};
use crate::error::{LiftError, ReductionError};
use crate::groebner::{ideals_equal, MonomialOrder};
use crate::network::{concentration_name, Complex, Reaction, ReactionNetwork, Species};

/// Default cap on the number of intermediates for spanning-tree enumeration.
pub const DEFAULT_TREE_CAP: usize = 8;

/// Whether phi may be applied: the algebraic-independence precondition has
/// either been verified, explicitly assumed, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    NotChecked,
    Assumed,
    VerifiedIndependent,
    VerifiedDependent,
}

/// The mu-table: for every intermediate and every non-intermediate complex,
/// the coefficient of `x^c` in the solved intermediate concentration.
#[derive(Debug, Clone)]
pub struct MuTable {
    /// Extended-network complex indices of the non-intermediate complexes,
    /// in appearance order.
    pub non_int_complexes: Vec<usize>,
    /// `entries[i][p]` is mu of intermediate `i` at `non_int_complexes[p]`.
    pub entries: Vec<Vec<ParamScalar>>,
}

impl MuTable {
    pub fn value(&self, intermediate: usize, ext_complex: usize) -> Option<&ParamScalar> {
        let p = self
            .non_int_complexes
            .iter()
            .position(|&c| c == ext_complex)?;
        Some(&self.entries[intermediate][p])
    }
}

/// One core reaction and its relation to the extended network.
#[derive(Debug, Clone)]
pub struct CoreReactionInfo {
    /// Extended-network complex index of the reactant.
    pub reactant_ext: usize,
    /// Extended-network complex index of the product.
    pub product_ext: usize,
    /// Index of the extended reaction when the edge exists directly.
    pub direct: Option<usize>,
}

/// The complete reduction of an extended network by a set of intermediates:
/// the core network, the mu- and phi-tables, the H polynomials, and the rings
/// everything lives in.
#[derive(Debug, Clone)]
pub struct Reduction {
    extended: ReactionNetwork,
    intermediates: Vec<usize>,
    non_intermediates: Vec<usize>,
    core: ReactionNetwork,
    core_info: Vec<CoreReactionInfo>,
    mu: MuTable,
    phi: Vec<ParamScalar>,
    h_polys: Vec<XPoly>,

    lifted_vars: Arc<VarSet>,
    tail_vars: Arc<VarSet>,
    ext_params: Arc<VarSet>,
    core_params: Arc<VarSet>,
    /// species index -> lifted variable index (every species maps)
    lifted_var_of: Vec<Option<usize>>,
    /// species index -> tail variable index (None for intermediates)
    tail_var_of: Vec<Option<usize>>,
    /// core species index -> extended species index
    core_species_ext: Vec<usize>,

    gate: Gate,
    warnings: Vec<String>,
}

/// Checks the intermediate conditions for each member of `names` (each is
/// itself a complex, occurs in no other complex, and has both inflow and
/// outflow) and the joint solvability of the intermediate linear system.
/// Returns species indices in the order given.
pub fn validate_intermediates(
    net: &ReactionNetwork,
    names: &[String],
) -> Result<Vec<usize>, ReductionError> {
    let mut indices = Vec::with_capacity(names.len());
    for n in names {
        let i = net
            .species_index(n)
            .ok_or_else(|| ReductionError::NotAComplex(n.clone()))?;
        indices.push(i);
    }
    for &i in &indices {
        check_intermediate_shape(net, i)?;
    }
    let (a, _) = intermediate_system(net, &indices);
    if a.rank() != indices.len() {
        return Err(ReductionError::SingularIntermediateSystem);
    }
    Ok(indices)
}

fn check_intermediate_shape(net: &ReactionNetwork, i: usize) -> Result<(), ReductionError> {
    let name = net.species()[i].name.clone();
    let unit = Complex::from_parts([(i, 1)]);
    let unit_idx = net
        .complex_index(&unit)
        .ok_or(ReductionError::NotAComplex(name.clone()))?;
    for (ci, c) in net.complexes().iter().enumerate() {
        if ci != unit_idx && c.coeff(i) > 0 {
            return Err(ReductionError::NonzeroCoefficientElsewhere(name));
        }
    }
    if !net.reactions().iter().any(|r| r.product == unit_idx) {
        return Err(ReductionError::NoInflow(name));
    }
    if !net.reactions().iter().any(|r| r.reactant == unit_idx) {
        return Err(ReductionError::NoOutflow(name));
    }
    Ok(())
}

/// The maximal species subset individually satisfying the intermediate
/// conditions and jointly passing solvability; on a singular system, members
/// are removed in ascending species index until it passes.
pub fn detect_intermediates(net: &ReactionNetwork) -> Vec<usize> {
    let mut candidates: Vec<usize> = (0..net.species().len())
        .filter(|&i| check_intermediate_shape(net, i).is_ok())
        .collect();
    while !candidates.is_empty() {
        let (a, _) = intermediate_system(net, &candidates);
        if a.rank() == candidates.len() {
            break;
        }
        candidates.remove(0);
    }
    candidates
}

/// Assembles the linear system of the intermediate steady-state polynomials,
/// `F_Y = A y + c(x)`, over the given tail ring.
fn intermediate_system_in(
    net: &ReactionNetwork,
    intermediates: &[usize],
    tail_vars: &Arc<VarSet>,
    tail_var_of: &[Option<usize>],
) -> (ParamMatrix, Vec<XPoly>) {
    let params = net.rate_params();
    let m = intermediates.len();
    let unit_idx: Vec<usize> = intermediates
        .iter()
        .map(|&y| {
            net.complex_index(&Complex::from_parts([(y, 1)]))
                .expect("validated intermediate is a complex")
        })
        .collect();
    let mut a = ParamMatrix::zero(params.clone(), m, m);
    let mut c = vec![XPoly::zero(tail_vars.clone(), params.clone()); m];
    for (ri, r) in net.reactions().iter().enumerate() {
        let sym = ParamScalar::from_poly(ParamPoly::var(params.clone(), ri));
        if let Some(j) = unit_idx.iter().position(|&u| u == r.reactant) {
            // outflow from intermediate j; inflow to intermediate i when the
            // product is one
            *a.at_mut(j, j) = a.at(j, j).sub(&sym);
            if let Some(i) = unit_idx.iter().position(|&u| u == r.product) {
                *a.at_mut(i, j) = a.at(i, j).add(&sym);
            }
        } else if let Some(i) = unit_idx.iter().position(|&u| u == r.product) {
            let mono = net
                .complex(r.reactant)
                .monomial(tail_vars.len(), tail_var_of);
            c[i].add_term(mono, sym);
        }
    }
    (a, c)
}

fn intermediate_system(
    net: &ReactionNetwork,
    intermediates: &[usize],
) -> (ParamMatrix, Vec<XPoly>) {
    let (tail_vars, tail_var_of) = tail_ring(net, intermediates);
    intermediate_system_in(net, intermediates, &tail_vars, &tail_var_of)
}

fn tail_ring(
    net: &ReactionNetwork,
    intermediates: &[usize],
) -> (Arc<VarSet>, Vec<Option<usize>>) {
    let non_int: Vec<usize> = (0..net.species().len())
        .filter(|i| !intermediates.contains(i))
        .collect();
    let tail_vars = VarSet::new(
        non_int
            .iter()
            .map(|&i| concentration_name(&net.species()[i].name)),
    );
    let mut tail_var_of = vec![None; net.species().len()];
    for (p, &i) in non_int.iter().enumerate() {
        tail_var_of[i] = Some(p);
    }
    (tail_vars, tail_var_of)
}

impl Reduction {
    /// Builds the full reduction for a set of intermediates given by name
    /// (an empty slice gives the trivial reduction, where the core is the
    /// network itself).
    pub fn build(net: &ReactionNetwork, names: &[String]) -> Result<Self, ReductionError> {
        let intermediates = validate_intermediates(net, names)?;
        let mut warnings = Vec::new();

        let non_intermediates: Vec<usize> = (0..net.species().len())
            .filter(|i| !intermediates.contains(i))
            .collect();
        let (tail_vars, tail_var_of) = tail_ring(net, &intermediates);
        let lifted_vars = VarSet::new(
            intermediates
                .iter()
                .chain(non_intermediates.iter())
                .map(|&i| concentration_name(&net.species()[i].name)),
        );
        let mut lifted_var_of = vec![None; net.species().len()];
        let m = intermediates.len();
        for (p, &i) in intermediates.iter().enumerate() {
            lifted_var_of[i] = Some(p);
        }
        for (p, &i) in non_intermediates.iter().enumerate() {
            lifted_var_of[i] = Some(m + p);
        }
        let ext_params = net.rate_params();

        // mu-table by the symbolic linear solve
        let (a, c) = intermediate_system_in(net, &intermediates, &tail_vars, &tail_var_of);
        let minus_c: Vec<XPoly> = c.iter().map(XPoly::neg).collect();
        let y =
            solve_linear(&a, &minus_c).map_err(|_| ReductionError::SingularIntermediateSystem)?;
        let non_int_complexes: Vec<usize> = (0..net.complexes().len())
            .filter(|&ci| !intermediates.iter().any(|&yi| net.complex(ci).is_unit_of(yi)))
            .collect();
        let mut entries = Vec::with_capacity(m);
        for yi in &y {
            let mut row = Vec::with_capacity(non_int_complexes.len());
            for &ci in &non_int_complexes {
                let mono = net.complex(ci).monomial(tail_vars.len(), &tail_var_of);
                row.push(yi.coeff(&mono));
            }
            debug_assert_eq!(
                yi.num_terms(),
                row.iter().filter(|s| !s.is_zero()).count(),
                "solved intermediate concentration has a stray monomial"
            );
            entries.push(row);
        }
        let mu = MuTable {
            non_int_complexes,
            entries,
        };
        for (i, row) in mu.entries.iter().enumerate() {
            for s in row {
                if !s.is_zero() && !s.is_syntactically_positive() {
                    warnings.push(format!(
                        "mu for intermediate {} has a non-positive representation: {}",
                        net.species()[intermediates[i]].name,
                        s.render()
                    ));
                }
            }
        }

        // core network and the correspondence to the extended one
        let (core, core_info, core_species_ext) =
            build_core(net, &intermediates, &mu.non_int_complexes)?;
        let core_params = core.rate_params();

        // phi per core reaction
        let unit_idx: Vec<usize> = intermediates
            .iter()
            .map(|&yi| {
                net.complex_index(&Complex::from_parts([(yi, 1)]))
                    .expect("validated")
            })
            .collect();
        let mut phi = Vec::with_capacity(core_info.len());
        for info in &core_info {
            let mut acc = match info.direct {
                Some(ri) => ParamScalar::from_poly(ParamPoly::var(ext_params.clone(), ri)),
                None => ParamScalar::zero(ext_params.clone()),
            };
            for (i, &u) in unit_idx.iter().enumerate() {
                if let Some(ri) = net
                    .reactions()
                    .iter()
                    .position(|r| r.reactant == u && r.product == info.product_ext)
                {
                    let k = ParamScalar::from_poly(ParamPoly::var(ext_params.clone(), ri));
                    let mu_ic = mu
                        .value(i, info.reactant_ext)
                        .expect("reactant is a non-intermediate complex");
                    acc = acc.add(&k.mul(mu_ic));
                }
            }
            if acc.is_zero() {
                return Err(ReductionError::ZeroPhi(format!(
                    "{} -> {}",
                    net.complex_display(info.reactant_ext),
                    net.complex_display(info.product_ext)
                )));
            }
            if !acc.is_syntactically_positive() {
                warnings.push(format!(
                    "phi for {} -> {} has a non-positive representation",
                    net.complex_display(info.reactant_ext),
                    net.complex_display(info.product_ext)
                ));
            }
            phi.push(acc);
        }

        // H polynomials in the lifted ring
        let mut h_polys = Vec::with_capacity(m);
        for i in 0..m {
            let mut h = XPoly::var(lifted_vars.clone(), ext_params.clone(), i);
            for (p, &ci) in mu.non_int_complexes.iter().enumerate() {
                let s = &mu.entries[i][p];
                if s.is_zero() {
                    continue;
                }
                let mono = net.complex(ci).monomial(lifted_vars.len(), &lifted_var_of);
                h.add_term(mono, s.neg());
            }
            h_polys.push(h);
        }

        let red = Reduction {
            extended: net.clone(),
            intermediates,
            non_intermediates,
            core,
            core_info,
            mu,
            phi,
            h_polys,
            lifted_vars,
            tail_vars,
            ext_params,
            core_params,
            lifted_var_of,
            tail_var_of,
            core_species_ext,
            gate: Gate::NotChecked,
            warnings,
        };
        debug_assert!(red.mu_support_matches_inputs());
        Ok(red)
    }

    pub fn extended(&self) -> &ReactionNetwork {
        &self.extended
    }

    pub fn core(&self) -> &ReactionNetwork {
        &self.core
    }

    pub fn intermediates(&self) -> &[usize] {
        &self.intermediates
    }

    pub fn intermediate_names(&self) -> Vec<&str> {
        self.intermediates
            .iter()
            .map(|&i| self.extended.species()[i].name.as_str())
            .collect()
    }

    pub fn non_intermediates(&self) -> &[usize] {
        &self.non_intermediates
    }

    pub fn core_info(&self) -> &[CoreReactionInfo] {
        &self.core_info
    }

    /// Core reactions absent from the extended network.
    pub fn r_prime(&self) -> Vec<usize> {
        (0..self.core_info.len())
            .filter(|&i| self.core_info[i].direct.is_none())
            .collect()
    }

    pub fn mu(&self) -> &MuTable {
        &self.mu
    }

    pub fn phi(&self) -> &[ParamScalar] {
        &self.phi
    }

    pub fn h_polys(&self) -> &[XPoly] {
        &self.h_polys
    }

    pub fn lifted_vars(&self) -> &Arc<VarSet> {
        &self.lifted_vars
    }

    pub fn tail_vars(&self) -> &Arc<VarSet> {
        &self.tail_vars
    }

    pub fn ext_params(&self) -> &Arc<VarSet> {
        &self.ext_params
    }

    pub fn core_params(&self) -> &Arc<VarSet> {
        &self.core_params
    }

    pub fn core_species_ext(&self) -> &[usize] {
        &self.core_species_ext
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn gate(&self) -> Gate {
        self.gate
    }

    pub fn set_gate(&mut self, gate: Gate) {
        self.gate = gate;
    }

    pub fn assume_independent(&mut self) {
        self.gate = Gate::Assumed;
    }

    pub(crate) fn gate_open(&self) -> Result<(), LiftError> {
        match self.gate {
            Gate::Assumed | Gate::VerifiedIndependent => Ok(()),
            Gate::NotChecked | Gate::VerifiedDependent => Err(LiftError::IndependenceNotVerified),
        }
    }

    /// All non-intermediate complexes with a directed path to the
    /// intermediate through intermediates only, in complex appearance order.
    pub fn inputs_of(&self, intermediate: usize) -> Vec<usize> {
        let net = &self.extended;
        let unit_idx: Vec<usize> = self
            .intermediates
            .iter()
            .map(|&yi| {
                net.complex_index(&Complex::from_parts([(yi, 1)]))
                    .expect("validated")
            })
            .collect();
        let mut seen = vec![false; self.intermediates.len()];
        let mut stack = vec![intermediate];
        seen[intermediate] = true;
        let mut inputs = Vec::new();
        while let Some(cur) = stack.pop() {
            let target = unit_idx[cur];
            for r in net.reactions() {
                if r.product != target {
                    continue;
                }
                match unit_idx.iter().position(|&u| u == r.reactant) {
                    Some(p) => {
                        if !seen[p] {
                            seen[p] = true;
                            stack.push(p);
                        }
                    }
                    None => {
                        if !inputs.contains(&r.reactant) {
                            inputs.push(r.reactant);
                        }
                    }
                }
            }
        }
        inputs.sort_unstable();
        inputs
    }

    /// The input count of an intermediate (`l` for an `l`-input intermediate).
    pub fn input_count(&self, intermediate: usize) -> usize {
        self.inputs_of(intermediate).len()
    }

    fn mu_sum_in(&self, i: usize, vars: &Arc<VarSet>, var_of: &[Option<usize>]) -> XPoly {
        let mut out = XPoly::zero(vars.clone(), self.ext_params.clone());
        for (p, &ci) in self.mu.non_int_complexes.iter().enumerate() {
            let s = &self.mu.entries[i][p];
            if s.is_zero() {
                continue;
            }
            let mono = self.extended.complex(ci).monomial(vars.len(), var_of);
            out.add_term(mono, s.clone());
        }
        out
    }

    /// `sum_c mu_{i,c} x^c` in the tail ring (non-intermediate variables).
    pub fn mu_sum_tail(&self, i: usize) -> XPoly {
        self.mu_sum_in(i, &self.tail_vars, &self.tail_var_of)
    }

    /// `sum_c mu_{i,c} x^c` in the lifted ring.
    pub fn mu_sum_lifted(&self, i: usize) -> XPoly {
        self.mu_sum_in(i, &self.lifted_vars, &self.lifted_var_of)
    }

    /// Steady-state polynomials of the extended network in the lifted ring,
    /// one per species in species order.
    pub fn extended_f_lifted(&self) -> Vec<XPoly> {
        self.extended
            .steady_state_polynomials_in(&self.lifted_vars, &self.lifted_var_of)
    }

    /// Steady-state polynomials of the core network in the tail ring, one per
    /// extended species in species order (zero for intermediates and for
    /// species absent from the core).
    pub fn core_f_tail(&self) -> Vec<XPoly> {
        let mut var_of_core: Vec<Option<usize>> = vec![None; self.core.species().len()];
        for (ci, &ext) in self.core_species_ext.iter().enumerate() {
            var_of_core[ci] = self.tail_var_of[ext];
        }
        let per_core = self
            .core
            .steady_state_polynomials_in(&self.tail_vars, &var_of_core);
        let mut out = vec![
            XPoly::zero(self.tail_vars.clone(), self.core_params.clone());
            self.extended.species().len()
        ];
        for (ci, f) in per_core.into_iter().enumerate() {
            out[self.core_species_ext[ci]] = f;
        }
        out
    }

    /// Generators of the core steady-state ideal in the tail ring (the
    /// selected stoichiometric basis when `minimal`).
    pub fn core_ideal_tail(&self, minimal: bool) -> Vec<XPoly> {
        let fs = self.core_f_tail();
        let keep: Vec<usize> = if minimal {
            let (_, sel) = self.core.stoichiometric_basis();
            sel.into_iter().map(|ci| self.core_species_ext[ci]).collect()
        } else {
            self.core_species_ext.clone()
        };
        keep.into_iter().map(|i| fs[i].clone()).collect()
    }

    /// Applies the polynomial extension of phi: every core rate symbol in
    /// every coefficient is replaced by its phi value. Requires the
    /// independence gate.
    pub fn apply_phi(&self, f: &XPoly) -> Result<XPoly, LiftError> {
        self.gate_open()?;
        self.apply_phi_raw(f)
            .map_err(|_| LiftError::PhiIllDefined)
    }

    /// Phi without the gate. Fails only when a coefficient denominator
    /// vanishes under phi, which algebraic independence rules out; it cannot
    /// happen for polynomial (denominator-free) coefficients.
    pub(crate) fn apply_phi_raw(&self, f: &XPoly) -> Result<XPoly, crate::error::AlgebraError> {
        f.map_coeffs(self.ext_params.clone(), |c| c.compose(&self.phi))
    }

    /// Renames a tail-ring polynomial into the lifted ring.
    pub fn lift_from_tail(&self, f: &XPoly) -> XPoly {
        let m = self.intermediates.len();
        let to: Vec<usize> = (0..self.tail_vars.len()).map(|i| m + i).collect();
        f.rename_vars(self.lifted_vars.clone(), &to)
    }

    /// The support of each mu row equals the input set of its intermediate.
    pub fn mu_support_matches_inputs(&self) -> bool {
        (0..self.intermediates.len()).all(|i| {
            let support: Vec<usize> = self
                .mu
                .non_int_complexes
                .iter()
                .enumerate()
                .filter(|(p, _)| !self.mu.entries[i][*p].is_zero())
                .map(|(_, &ci)| ci)
                .collect();
            let mut sorted = support;
            sorted.sort_unstable();
            sorted == self.inputs_of(i)
        })
    }

    /// Substituting the mu-expressions for the intermediate concentrations
    /// into the extended steady-state polynomial of each non-intermediate
    /// yields exactly the phi image of its core polynomial.
    pub fn substitution_identity_holds(&self) -> bool {
        let f_ext = self.extended_f_lifted();
        let f_core = self.core_f_tail();
        let mut assignment = BTreeMap::new();
        for i in 0..self.intermediates.len() {
            assignment.insert(i, crate::algebra::Subst::Poly(self.mu_sum_lifted(i)));
        }
        self.non_intermediates.iter().all(|&s| {
            let substituted = f_ext[s].substitute(&assignment).expect("valid assignment");
            let phi_f = self
                .apply_phi_raw(&f_core[s])
                .expect("polynomial coefficients");
            let expected = self.lift_from_tail(&phi_f);
            substituted == expected
        })
    }

    /// The extended steady-state polynomials generate the same ideal as the
    /// phi images of the core polynomials together with the H's. Compares
    /// reduced Groebner bases under the block order; intended for small
    /// instances.
    pub fn basis_identity_holds(&self) -> Result<bool, crate::error::GroebnerError> {
        let f_ext = self.extended_f_lifted();
        let f_core = self.core_f_tail();
        let mut rhs: Vec<XPoly> = self
            .non_intermediates
            .iter()
            .map(|&s| {
                let phi_f = self
                    .apply_phi_raw(&f_core[s])
                    .expect("polynomial coefficients");
                self.lift_from_tail(&phi_f)
            })
            .collect();
        rhs.extend(self.h_polys.iter().cloned());
        let ord = self.block_order(&MonomialOrder::grevlex(self.tail_vars.clone()));
        ideals_equal(&f_ext, &rhs, &ord, None)
    }

    /// The block order putting the intermediate variables first (compared
    /// lexicographically) over a core order on the tail variables.
    pub fn block_order(&self, core_order: &MonomialOrder) -> MonomialOrder {
        MonomialOrder::block_extend(
            core_order,
            self.intermediates.len(),
            self.lifted_vars.clone(),
        )
    }
}

/// Verification report for the structural identities of a reduction.
#[derive(Debug, Clone)]
pub struct ReductionChecks {
    pub mu_support_ok: bool,
    pub substitution_ok: bool,
    /// `None` when skipped (more intermediates than the cap).
    pub basis_ok: Option<bool>,
}

impl ReductionChecks {
    pub fn all_pass(&self) -> bool {
        self.mu_support_ok && self.substitution_ok && self.basis_ok.unwrap_or(true)
    }
}

/// Runs the three reduction checks; the ideal-equality check is skipped when
/// there are more intermediates than `basis_cap`.
pub fn verify_reduction(
    red: &Reduction,
    basis_cap: usize,
) -> Result<ReductionChecks, crate::error::GroebnerError> {
    let basis_ok = if red.intermediates().len() <= basis_cap {
        Some(red.basis_identity_holds()?)
    } else {
        None
    };
    Ok(ReductionChecks {
        mu_support_ok: red.mu_support_matches_inputs(),
        substitution_ok: red.substitution_identity_holds(),
        basis_ok,
    })
}

/// Builds the core network: reactions are pairs of distinct non-intermediate
/// complexes joined by a directed path through intermediates only (direct
/// edges included), with fresh rate symbols numbered in (reactant, product)
/// appearance order.
fn build_core(
    net: &ReactionNetwork,
    intermediates: &[usize],
    non_int_complexes: &[usize],
) -> Result<(ReactionNetwork, Vec<CoreReactionInfo>, Vec<usize>), ReductionError> {
    if intermediates.is_empty() {
        let info = net
            .reactions()
            .iter()
            .enumerate()
            .map(|(ri, r)| CoreReactionInfo {
                reactant_ext: r.reactant,
                product_ext: r.product,
                direct: Some(ri),
            })
            .collect();
        let species_map = (0..net.species().len()).collect();
        return Ok((net.clone(), info, species_map));
    }

    let unit_idx: Vec<usize> = intermediates
        .iter()
        .map(|&yi| {
            net.complex_index(&Complex::from_parts([(yi, 1)]))
                .expect("validated")
        })
        .collect();
    let pos_of_complex: std::collections::HashMap<usize, usize> = non_int_complexes
        .iter()
        .enumerate()
        .map(|(p, &c)| (c, p))
        .collect();

    // reachability from each non-intermediate complex through intermediates
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (p, &start) in non_int_complexes.iter().enumerate() {
        let mut targets: Vec<usize> = Vec::new();
        let mut seen_int = vec![false; intermediates.len()];
        let mut stack: Vec<usize> = Vec::new();
        let follow = |from: usize,
                          targets: &mut Vec<usize>,
                          seen_int: &mut Vec<bool>,
                          stack: &mut Vec<usize>| {
            for r in net.reactions() {
                if r.reactant != from {
                    continue;
                }
                match unit_idx.iter().position(|&u| u == r.product) {
                    Some(i) => {
                        if !seen_int[i] {
                            seen_int[i] = true;
                            stack.push(i);
                        }
                    }
                    None => targets.push(r.product),
                }
            }
        };
        follow(start, &mut targets, &mut seen_int, &mut stack);
        while let Some(i) = stack.pop() {
            follow(unit_idx[i], &mut targets, &mut seen_int, &mut stack);
        }
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            if t != start {
                pairs.push((p, pos_of_complex[&t]));
            }
        }
    }
    pairs.sort_unstable();

    // core species: those occurring in the complexes used, in species order
    let mut used: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    for &(p, q) in &pairs {
        used.extend(net.complex(non_int_complexes[p]).support());
        used.extend(net.complex(non_int_complexes[q]).support());
    }
    let species_map: Vec<usize> = used.into_iter().collect();
    let mut species_of: std::collections::HashMap<usize, usize> = Default::default();
    for (p, &ext) in species_map.iter().enumerate() {
        species_of.insert(ext, p);
    }

    let prefix = fresh_symbol_prefix(net, &species_map);
    let reindex =
        |c: &Complex| Complex::from_parts(c.parts().map(|(s, n)| (species_of[&s], n)));
    let mut complexes: Vec<Complex> = Vec::new();
    let mut complex_of: BTreeMap<Complex, usize> = BTreeMap::new();
    let mut reactions = Vec::with_capacity(pairs.len());
    let mut info = Vec::with_capacity(pairs.len());
    for (n, &(p, q)) in pairs.iter().enumerate() {
        let reactant_ext = non_int_complexes[p];
        let product_ext = non_int_complexes[q];
        let mut intern = |c: Complex, complexes: &mut Vec<Complex>| match complex_of.get(&c) {
            Some(&i) => i,
            None => {
                let i = complexes.len();
                complex_of.insert(c.clone(), i);
                complexes.push(c);
                i
            }
        };
        let reactant = intern(reindex(net.complex(reactant_ext)), &mut complexes);
        let product = intern(reindex(net.complex(product_ext)), &mut complexes);
        reactions.push(Reaction {
            reactant,
            product,
            rate_symbol: format!("{prefix}{}", n + 1),
        });
        info.push(CoreReactionInfo {
            reactant_ext,
            product_ext,
            direct: net
                .reactions()
                .iter()
                .position(|r| r.reactant == reactant_ext && r.product == product_ext),
        });
    }
    let species: Vec<Species> = species_map
        .iter()
        .map(|&i| net.species()[i].clone())
        .collect();
    let core = ReactionNetwork::build(species, complexes, reactions, Vec::new())
        .map_err(|e| ReductionError::ZeroPhi(format!("degenerate core network: {e}")))?;
    Ok((core, info, species_map))
}

/// Fresh core rate symbols are `k1, k2, ...` unless that collides with a core
/// concentration variable name.
fn fresh_symbol_prefix(net: &ReactionNetwork, species_map: &[usize]) -> &'static str {
    for prefix in ["k", "kk", "rate"] {
        let collides = species_map.iter().any(|&i| {
            let v = concentration_name(&net.species()[i].name);
            v.strip_prefix(prefix)
                .map(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                .unwrap_or(false)
        });
        if !collides {
            return prefix;
        }
    }
    "corerate"
}
