//! Overlap classes, the Jacobian-rank criterion, and the elimination-ideal
//! cross-check.

mod common;

use common::{random_phi, reduction_of, rng, scalar};
use crn_core::algebra::VarSet;
use rand::Rng;
use crn_core::error::LiftError;
use crn_core::independence::{
    check_independence, independence_elimination_check, jacobian_rank, overlap_classes,
    ClassMethod,
};
use crn_core::reduction::Gate;

#[test]
fn branched_overlap_is_one_class() {
    let red = reduction_of("branched_intermediates.crn");
    let classes = overlap_classes(&red);
    assert_eq!(classes.r_prime, vec![0, 1]);
    assert_eq!(classes.classes, vec![vec![0, 1]]);
    // the three intermediates form a single connected component
    assert_eq!(classes.components.len(), 1);
}

#[test]
fn branched_independence_by_jacobian() {
    let mut red = reduction_of("branched_intermediates.crn");
    let verdict = check_independence(&mut red);
    assert!(verdict.independent);
    assert_eq!(verdict.classes.len(), 1);
    assert_eq!(verdict.classes[0].method, ClassMethod::Jacobian);
    assert_eq!(verdict.classes[0].rank, Some(2));
    assert_eq!(red.gate(), Gate::VerifiedIndependent);
    // the full phi triple has Jacobian rank 3
    assert_eq!(jacobian_rank(red.phi()), 3);
}

#[test]
fn branched_elimination_check_agrees() {
    let red = reduction_of("branched_intermediates.crn");
    assert!(independence_elimination_check(red.phi(), 4).unwrap());
}

#[test]
fn mapk_all_singletons() {
    let mut red = reduction_of("mapk.crn");
    let classes = overlap_classes(&red);
    assert_eq!(classes.r_prime.len(), 4);
    assert!(classes.classes.iter().all(|c| c.len() == 1));
    // components: {Y1}, {Y2}, {Y3,Y4}, {Y5,Y6}
    assert_eq!(classes.components.len(), 4);
    let verdict = check_independence(&mut red);
    assert!(verdict.independent);
    assert!(verdict
        .classes
        .iter()
        .all(|c| c.method == ClassMethod::Singleton));
}

#[test]
fn cascade_all_singletons() {
    let net = common::load("multisite_cascade.crn");
    let names: Vec<String> = crn_core::reduction::detect_intermediates(&net)
        .into_iter()
        .map(|i| net.species()[i].name.clone())
        .collect();
    let mut red = crn_core::Reduction::build(&net, &names).unwrap();
    let classes = overlap_classes(&red);
    assert_eq!(classes.r_prime.len(), 15);
    assert!(classes.classes.iter().all(|c| c.len() == 1));
    let verdict = check_independence(&mut red);
    assert!(verdict.independent);
    assert!(verdict
        .classes
        .iter()
        .all(|c| c.method == ClassMethod::Singleton));
}

#[test]
fn no_new_reactions_trivially_independent() {
    let net = common::load("reversible_binding.crn");
    let mut red = crn_core::Reduction::build(&net, &[]).unwrap();
    let classes = overlap_classes(&red);
    assert!(classes.r_prime.is_empty());
    assert!(classes.classes.is_empty());
    assert!(check_independence(&mut red).independent);
}

#[test]
fn obvious_relation_detected() {
    let k = VarSet::new(["kappa1"]);
    let phis = vec![scalar(&k, "kappa1"), scalar(&k, "kappa1^2")];
    assert!(!independence_elimination_check(&phis, 4).unwrap());
    assert_eq!(jacobian_rank(&phis), 1);
}

#[test]
fn elimination_cap() {
    let k = VarSet::new(["kappa1"]);
    let phis = vec![scalar(&k, "kappa1"); 5];
    assert!(matches!(
        independence_elimination_check(&phis, 4),
        Err(LiftError::ElimCapExceeded { count: 5, cap: 4 })
    ));
}

#[test]
fn class_symbols_are_disjoint() {
    for name in ["mapk.crn", "branched_intermediates.crn"] {
        let red = reduction_of(name);
        let classes = overlap_classes(&red);
        let supports: Vec<std::collections::BTreeSet<usize>> = classes
            .classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .flat_map(|&r| crn_core::independence::symbol_support(&red.phi()[r]))
                    .collect()
            })
            .collect();
        for i in 0..supports.len() {
            for j in i + 1..supports.len() {
                assert!(
                    supports[i].is_disjoint(&supports[j]),
                    "{name}: classes {i} and {j} share symbols"
                );
            }
        }
    }
}

#[test]
fn classes_invariant_under_reaction_reordering() {
    let text = std::fs::read_to_string(common::fixture_path("branched_intermediates.crn")).unwrap();
    let mut lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let header: Vec<&str> = lines
        .iter()
        .copied()
        .filter(|l| l.contains(':'))
        .collect();
    lines.retain(|l| !l.contains(':'));
    lines.reverse();
    let shuffled = format!("{}\n{}\n", header.join("\n"), lines.join("\n"));
    let net = crn_core::ReactionNetwork::parse(&shuffled).unwrap();
    let red = crn_core::Reduction::build(&net, &net.declared_intermediates().to_vec()).unwrap();
    let classes = overlap_classes(&red);
    // same partition shape: one class holding both new reactions
    assert_eq!(classes.classes.len(), 1);
    assert_eq!(classes.classes[0].len(), 2);
}

#[test]
fn jacobian_and_elimination_agree_on_random_sets() {
    let mut r = rng(11);
    let mut dependent_seen = 0;
    let mut independent_seen = 0;
    for trial in 0..60 {
        let nsym = r.random_range(1..=3usize);
        let names: Vec<String> = (1..=nsym).map(|i| format!("kappa{i}")).collect();
        let params = VarSet::new(names);
        let m = r.random_range(1..=3usize.min(nsym + 1));
        let mut phis = Vec::with_capacity(m);
        for _ in 0..m {
            phis.push(random_phi(&mut r, &params));
        }
        // sprinkle engineered dependencies
        if trial % 4 == 0 && m >= 2 {
            phis[m - 1] = phis[0].mul(&phis[0]);
        }
        let by_rank = jacobian_rank(&phis) == phis.len();
        let by_elim = independence_elimination_check(&phis, 4).unwrap();
        assert_eq!(by_rank, by_elim, "trial {trial}: {phis:?}");
        if by_rank {
            independent_seen += 1;
        } else {
            dependent_seen += 1;
        }
    }
    assert!(dependent_seen > 0 && independent_seen > 0);
}
