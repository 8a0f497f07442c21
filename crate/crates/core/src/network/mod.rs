//! The reaction-network data model, steady-state polynomials, the
//! stoichiometric subspace, and enzyme detection. The text format lives in
//! [`parse`].

mod parse;

pub use parse::ParseOptions;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{Mono, ParamPoly, ParamScalar, VarSet, XPoly};
use crate::error::NetworkError;

/// A species, identified by name; its index is its position in the network's
/// species list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
}

/// A complex: a non-negative integer combination of species, stored sparsely
/// with all kept coefficients positive. The zero complex is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Complex(BTreeMap<usize, u32>);

impl Complex {
    pub fn zero() -> Self {
        Complex(BTreeMap::new())
    }

    pub fn from_parts(parts: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (s, c) in parts {
            if c > 0 {
                *m.entry(s).or_insert(0) += c;
            }
        }
        Complex(m)
    }

    pub fn coeff(&self, species: usize) -> u32 {
        self.0.get(&species).copied().unwrap_or(0)
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&s, &c)| (s, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// True when this complex is exactly one unit of the given species.
    pub fn is_unit_of(&self, species: usize) -> bool {
        self.0.len() == 1 && self.coeff(species) == 1
    }

    /// The monomial `x^c` over a variable list aligned by `var_of[species]`.
    pub fn monomial(&self, nvars: usize, var_of: &[Option<usize>]) -> Mono {
        let mut exps = vec![0u32; nvars];
        for (s, c) in self.parts() {
            let v = var_of[s].expect("complex mentions a species outside the ring");
            exps[v] = c;
        }
        Mono::from_exponents(exps)
    }
}

/// A labeled reaction between two complexes (stored as indices into the
/// network's complex list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub reactant: usize,
    pub product: usize,
    pub rate_symbol: String,
}

/// A mass-action reaction network: species, complexes and labeled reactions.
/// The complex set equals the vertex set of the reaction digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
    declared_intermediates: Vec<String>,
}

impl ReactionNetwork {
    /// Parses the text format with default options.
    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        parse::parse_network(text, &ParseOptions::default())
    }

    pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Self, NetworkError> {
        parse::parse_network(text, opts)
    }

    /// Assembles a network from parts, enforcing the structural invariants.
    pub fn build(
        species: Vec<Species>,
        complexes: Vec<Complex>,
        reactions: Vec<Reaction>,
        declared_intermediates: Vec<String>,
    ) -> Result<Self, NetworkError> {
        let net = ReactionNetwork {
            species,
            complexes,
            reactions,
            declared_intermediates,
        };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<(), NetworkError> {
        if self.reactions.is_empty() {
            return Err(NetworkError::EmptyNetwork);
        }
        let mut names = std::collections::HashSet::new();
        let mut vars: std::collections::HashMap<String, &str> = Default::default();
        for s in &self.species {
            if !names.insert(s.name.as_str()) {
                return Err(NetworkError::DuplicateSpecies(s.name.clone()));
            }
            let v = concentration_name(&s.name);
            if let Some(prev) = vars.insert(v.clone(), &s.name) {
                return Err(NetworkError::VariableCollision {
                    one: prev.to_string(),
                    two: s.name.clone(),
                    var: v,
                });
            }
        }
        let mut syms = std::collections::HashSet::new();
        let mut pairs = std::collections::HashSet::new();
        for r in &self.reactions {
            if r.reactant == r.product {
                return Err(NetworkError::SelfLoop(self.reaction_display(r)));
            }
            if !syms.insert(r.rate_symbol.as_str()) {
                return Err(NetworkError::DuplicateRateSymbol(r.rate_symbol.clone()));
            }
            if vars.contains_key(r.rate_symbol.as_str()) {
                return Err(NetworkError::VariableCollision {
                    one: r.rate_symbol.clone(),
                    two: r.rate_symbol.clone(),
                    var: r.rate_symbol.clone(),
                });
            }
            if !pairs.insert((r.reactant, r.product)) {
                return Err(NetworkError::DuplicateReaction(self.reaction_display(r)));
            }
        }
        Ok(())
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn complex(&self, i: usize) -> &Complex {
        &self.complexes[i]
    }

    pub fn complex_index(&self, c: &Complex) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    /// Species listed in an `intermediates:` header, if any.
    pub fn declared_intermediates(&self) -> &[String] {
        &self.declared_intermediates
    }

    /// The concentration-variable list: lowercased species names, in species
    /// order.
    pub fn concentration_vars(&self) -> Arc<VarSet> {
        VarSet::new(self.species.iter().map(|s| concentration_name(&s.name)))
    }

    /// The rate-parameter list, in reaction order.
    pub fn rate_params(&self) -> Arc<VarSet> {
        VarSet::new(self.reactions.iter().map(|r| r.rate_symbol.clone()))
    }

    /// Steady-state polynomials, one per species in species order, over the
    /// network's own ring: for species `i`,
    /// `F_i = sum over reactions (product_i - reactant_i) * rate * x^reactant`.
    pub fn steady_state_polynomials(&self) -> Vec<XPoly> {
        let vars = self.concentration_vars();
        let var_of: Vec<Option<usize>> = (0..self.species.len()).map(Some).collect();
        self.steady_state_polynomials_in(&vars, &var_of)
    }

    /// Steady-state polynomials over an arbitrary ring into which the species
    /// are mapped by `var_of`.
    pub fn steady_state_polynomials_in(
        &self,
        vars: &Arc<VarSet>,
        var_of: &[Option<usize>],
    ) -> Vec<XPoly> {
        let params = self.rate_params();
        let mut out =
            vec![XPoly::zero(vars.clone(), params.clone()); self.species.len()];
        for (ri, r) in self.reactions.iter().enumerate() {
            let reactant = &self.complexes[r.reactant];
            let product = &self.complexes[r.product];
            let mono = reactant.monomial(vars.len(), var_of);
            for i in 0..self.species.len() {
                let delta =
                    product.coeff(i) as i64 - reactant.coeff(i) as i64;
                if delta == 0 {
                    continue;
                }
                let coeff = ParamScalar::from_poly(
                    ParamPoly::var(params.clone(), ri)
                        .scale(&BigRational::from(BigInt::from(delta))),
                );
                out[i].add_term(mono.clone(), coeff);
            }
        }
        out
    }

    /// `s = dim span{product - reactant}` together with `s` species indices,
    /// chosen greedily in species order, whose steady-state polynomials
    /// generate all the others by rational-linear combinations.
    pub fn stoichiometric_basis(&self) -> (usize, Vec<usize>) {
        let rows = self.stoichiometric_rows();
        let mut echelon: Vec<Vec<BigRational>> = Vec::new();
        let mut selected = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let r = reduce_row(row.clone(), &echelon);
            if r.iter().any(|x| !x.is_zero()) {
                echelon.push(normalize_row(r));
                selected.push(i);
            }
        }
        (selected.len(), selected)
    }

    /// Net-stoichiometry rows: `rows[i][j] = product_i - reactant_i` of
    /// reaction `j`.
    pub fn stoichiometric_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.species.len())
            .map(|i| {
                self.reactions
                    .iter()
                    .map(|r| {
                        let d = self.complexes[r.product].coeff(i) as i64
                            - self.complexes[r.reactant].coeff(i) as i64;
                        BigRational::from(BigInt::from(d))
                    })
                    .collect()
            })
            .collect()
    }

    /// Expresses the stoichiometric row of `species` as a rational-linear
    /// combination of the rows of `basis` (species indices); `None` when it
    /// is not in their span.
    pub fn express_in_basis(&self, species: usize, basis: &[usize]) -> Option<Vec<BigRational>> {
        let rows = self.stoichiometric_rows();
        let target = &rows[species];
        let m = basis.len();
        let n = target.len();
        // solve sum_j c_j * rows[basis[j]] = target by elimination
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|col| {
                let mut v: Vec<BigRational> =
                    basis.iter().map(|&b| rows[b][col].clone()).collect();
                v.push(target[col].clone());
                v
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for c in 0..m {
            let piv = (rank..aug.len()).find(|&r| !aug[r][c].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => continue,
            };
            aug.swap(rank, piv);
            let inv = aug[rank][c].clone().recip();
            for x in aug[rank].iter_mut() {
                *x *= &inv;
            }
            for r in 0..aug.len() {
                if r != rank && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for cc in 0..=m {
                        let t = &aug[rank][cc] * &f;
                        aug[r][cc] -= t;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        // consistency: rows beyond the pivots must have zero rhs
        for r in rank..aug.len() {
            if !aug[r][m].is_zero() {
                return None;
            }
        }
        let mut coeffs = vec![BigRational::zero(); m];
        for (r, &c) in pivots.iter().enumerate() {
            coeffs[c] = aug[r][m].clone();
        }
        Some(coeffs)
    }

    /// Generators of the steady-state ideal: all `F_i`, or the selected
    /// stoichiometric basis when `minimal` is set.
    pub fn steady_state_ideal(&self, minimal: bool) -> Vec<XPoly> {
        let all = self.steady_state_polynomials();
        if !minimal {
            return all;
        }
        let (_, idx) = self.stoichiometric_basis();
        idx.into_iter().map(|i| all[i].clone()).collect()
    }

    /// Species whose stoichiometric coefficient agrees on both sides of every
    /// reaction. Their steady-state polynomial is identically zero.
    pub fn detect_enzymes(&self) -> Vec<usize> {
        (0..self.species.len())
            .filter(|&i| {
                self.reactions.iter().all(|r| {
                    self.complexes[r.reactant].coeff(i) == self.complexes[r.product].coeff(i)
                })
            })
            .collect()
    }

    pub fn complex_display(&self, i: usize) -> String {
        self.display_complex(&self.complexes[i])
    }

    pub fn display_complex(&self, c: &Complex) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (s, coeff) in c.parts() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            if coeff > 1 {
                out.push_str(&coeff.to_string());
            }
            out.push_str(&self.species[s].name);
        }
        out
    }

    pub fn reaction_display(&self, r: &Reaction) -> String {
        format!(
            "{} ->[{}] {}",
            self.complex_display(r.reactant),
            r.rate_symbol,
            self.complex_display(r.product)
        )
    }

    /// Canonical text form; reparsing yields an equal network.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("species:");
        for s in &self.species {
            out.push(' ');
            out.push_str(&s.name);
        }
        out.push('\n');
        if !self.declared_intermediates.is_empty() {
            out.push_str("intermediates:");
            for n in &self.declared_intermediates {
                out.push(' ');
                out.push_str(n);
            }
            out.push('\n');
        }
        for r in &self.reactions {
            out.push_str(&self.reaction_display(r));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Concentration variable name of a species: the lowercased species name.
pub fn concentration_name(species: &str) -> String {
    species.to_lowercase()
}

fn reduce_row(mut row: Vec<BigRational>, echelon: &[Vec<BigRational>]) -> Vec<BigRational> {
    for e in echelon {
        let lead = e.iter().position(|x| !x.is_zero()).unwrap();
        if row[lead].is_zero() {
            continue;
        }
        let f = &row[lead] / &e[lead];
        for (r, v) in row.iter_mut().zip(e.iter()) {
            let t = v * &f;
            *r -= t;
        }
    }
    row
}

fn normalize_row(mut row: Vec<BigRational>) -> Vec<BigRational> {
    if let Some(lead) = row.iter().position(|x| !x.is_zero()) {
        let inv = row[lead].clone().recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversible_pair_network() {
        let net = ReactionNetwork::parse("X1 + X3 <=> X4 ; X4 -> X2 + X3").unwrap();
        assert_eq!(net.species().len(), 4);
        assert_eq!(net.complexes().len(), 3);
        assert_eq!(net.reactions().len(), 3);
        let (s, _) = net.stoichiometric_basis();
        assert_eq!(s, 2);
    }

    #[test]
    fn steady_state_polynomials_text() {
        let net = ReactionNetwork::parse(
            "species: X1 X2 X3 X4\nX1 + X3 <=>[k1][k2] X4 ; X4 ->[k3] X2 + X3",
        )
        .unwrap();
        let fs = net.steady_state_polynomials();
        let rendered: Vec<String> = fs.iter().map(|f| f.render()).collect();
        assert_eq!(
            rendered,
            vec![
                "-k1*x1*x3 + k2*x4",
                "k3*x4",
                "-k1*x1*x3 + (k2 + k3)*x4",
                "k1*x1*x3 - (k2 + k3)*x4",
            ]
        );
    }

    #[test]
    fn minimal_ideal_matches_selected_rows() {
        let net = ReactionNetwork::parse(
            "species: X1 X2 X3 X4\nX1 + X3 <=>[k1][k2] X4 ; X4 ->[k3] X2 + X3",
        )
        .unwrap();
        let minimal = net.steady_state_ideal(true);
        assert_eq!(minimal.len(), 2);
        assert_eq!(minimal[0].render(), "-k1*x1*x3 + k2*x4");
        assert_eq!(minimal[1].render(), "k3*x4");
    }

    #[test]
    fn no_reaction_rejected() {
        assert_eq!(
            ReactionNetwork::parse("").unwrap_err(),
            NetworkError::EmptyNetwork
        );
    }

    #[test]
    fn single_species_chain() {
        let net = ReactionNetwork::parse("2X -> 3X ; 3X -> X ; 2X -> X").unwrap();
        assert_eq!(net.species().len(), 1);
        assert_eq!(net.complexes().len(), 3);
        assert_eq!(net.reactions().len(), 3);
    }

    #[test]
    fn unselected_rows_reconstruct() {
        let net = ReactionNetwork::parse(
            "X1 + X3 <=>[k1][k2] X4 ; X4 ->[k3] X2 + X3",
        )
        .unwrap();
        let (_, basis) = net.stoichiometric_basis();
        let fs = net.steady_state_polynomials();
        for i in 0..net.species().len() {
            if basis.contains(&i) {
                continue;
            }
            let coeffs = net.express_in_basis(i, &basis).expect("in span");
            let mut acc = XPoly::zero(fs[i].vars().clone(), fs[i].params().clone());
            for (c, &b) in coeffs.iter().zip(basis.iter()) {
                acc = acc.add(&fs[b].scale(&ParamScalar::from_rational(
                    fs[i].params().clone(),
                    c.clone(),
                )));
            }
            assert_eq!(acc, fs[i]);
        }
    }

    #[test]
    fn enzymes_have_zero_polynomial() {
        let net = ReactionNetwork::parse(
            "X0 + E ->[k1] X1 + E ; X1 + E ->[k2] X2 + E ; X2 + F ->[k3] X1 + F ; X1 + F ->[k4] X0 + F",
        )
        .unwrap();
        let enzymes = net.detect_enzymes();
        let names: Vec<&str> = enzymes
            .iter()
            .map(|&i| net.species()[i].name.as_str())
            .collect();
        assert_eq!(names, vec!["E", "F"]);
        let fs = net.steady_state_polynomials();
        for &e in &enzymes {
            assert!(fs[e].is_zero());
        }
    }
}
