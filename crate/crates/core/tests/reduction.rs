//! Golden tests for the intermediate-reduction machinery against hand-checked
//! values, plus the spanning-tree oracle.

mod common;

use common::{load, reduction_of, scalar};
use crn_core::network::Complex;
use crn_core::reduction::{
    detect_intermediates, mu_spanning_tree, validate_intermediates, verify_reduction, Reduction,
};
use crn_core::algebra::parse_xpoly;
use crn_core::error::ReductionError;

fn complex_idx(net: &crn_core::ReactionNetwork, display: &str) -> usize {
    (0..net.complexes().len())
        .find(|&i| net.complex_display(i) == display)
        .unwrap_or_else(|| panic!("no complex `{display}`"))
}

#[test]
fn branched_mu_table() {
    let red = reduction_of("branched_intermediates.crn");
    let net = red.extended();
    let k = red.ext_params();
    let x1x2 = complex_idx(net, "X1 + X2");
    let two_x1 = complex_idx(net, "2X1");
    let two_x2 = complex_idx(net, "2X2");

    let mu = red.mu();
    let expect = |i: usize, c: usize, s: &str| {
        assert_eq!(mu.value(i, c).unwrap(), &scalar(k, s), "mu[{i}]");
    };
    expect(0, x1x2, "kappa1/(kappa2 + kappa3 + kappa5)");
    expect(1, x1x2, "kappa1*kappa3/(kappa4*(kappa2 + kappa3 + kappa5))");
    expect(
        2,
        x1x2,
        "kappa1*kappa5/((kappa6 + kappa8)*(kappa2 + kappa3 + kappa5))",
    );
    expect(2, two_x1, "kappa7/(kappa6 + kappa8)");
    for (i, c) in [
        (0, two_x1),
        (0, two_x2),
        (1, two_x1),
        (1, two_x2),
        (2, two_x2),
    ] {
        assert!(mu.value(i, c).unwrap().is_zero(), "mu[{i}] at {c}");
    }
}

#[test]
fn branched_core_is_the_triangle() {
    let red = reduction_of("branched_intermediates.crn");
    let core = red.core();
    let shown: Vec<String> = core
        .reactions()
        .iter()
        .map(|r| core.reaction_display(r))
        .collect();
    assert_eq!(
        shown,
        vec![
            "X1 + X2 ->[k1] 2X2",
            "X1 + X2 ->[k2] 2X1",
            "2X1 ->[k3] 2X2",
        ]
    );
    // only the direct reaction 2X1 -> 2X2 exists in the extended network
    assert_eq!(red.r_prime(), vec![0, 1]);
    assert!(red.core_info()[2].direct.is_some());
}

#[test]
fn branched_phi_values() {
    let red = reduction_of("branched_intermediates.crn");
    let k = red.ext_params();
    assert_eq!(
        red.phi()[0],
        scalar(
            k,
            "kappa1*kappa3/(kappa2 + kappa3 + kappa5) + kappa1*kappa5*kappa8/((kappa6 + kappa8)*(kappa2 + kappa3 + kappa5))"
        )
    );
    assert_eq!(
        red.phi()[1],
        scalar(
            k,
            "kappa1*kappa5*kappa6/((kappa6 + kappa8)*(kappa2 + kappa3 + kappa5))"
        )
    );
    assert_eq!(red.phi()[2], scalar(k, "kappa9 + kappa7*kappa8/(kappa6 + kappa8)"));
}

#[test]
fn branched_h_polynomial() {
    let red = reduction_of("branched_intermediates.crn");
    let h3 = &red.h_polys()[2];
    let expected = parse_xpoly(
        "y3 - kappa1*kappa5/((kappa6 + kappa8)*(kappa2 + kappa3 + kappa5))*x1*x2 - kappa7/(kappa6 + kappa8)*x1^2",
        red.lifted_vars(),
        red.ext_params(),
    )
    .unwrap();
    assert_eq!(h3, &expected);
    // a 1-input intermediate has a two-term H
    assert_eq!(red.h_polys()[0].num_terms(), 2);
    assert_eq!(red.h_polys()[1].num_terms(), 2);
}

#[test]
fn branched_inputs() {
    let red = reduction_of("branched_intermediates.crn");
    let net = red.extended();
    let x1x2 = complex_idx(net, "X1 + X2");
    let two_x1 = complex_idx(net, "2X1");
    assert_eq!(red.inputs_of(0), vec![x1x2]);
    assert_eq!(red.inputs_of(1), vec![x1x2]);
    assert_eq!(red.inputs_of(2), vec![x1x2, two_x1]);
    assert_eq!(red.input_count(2), 2);
}

#[test]
fn branched_theorem_checks() {
    let red = reduction_of("branched_intermediates.crn");
    let checks = verify_reduction(&red, 4).unwrap();
    assert!(checks.mu_support_ok);
    assert!(checks.substitution_ok);
    assert_eq!(checks.basis_ok, Some(true));
}

#[test]
fn branched_spanning_tree_agrees() {
    let red = reduction_of("branched_intermediates.crn");
    let net = red.extended();
    for i in 0..3 {
        for &c in &red.mu().non_int_complexes {
            let tree = mu_spanning_tree(net, red.intermediates(), i, c, 8).unwrap();
            assert_eq!(&tree, red.mu().value(i, c).unwrap(), "mu[{i}] at {c}");
        }
    }
}

#[test]
fn mapk_mu_table() {
    let red = reduction_of("mapk.crn");
    let net = red.extended();
    let k = red.ext_params();
    let mu = red.mu();
    let idx = |d: &str| complex_idx(net, d);
    let pairs = [
        (0, "X0 + E", "kappa1/(kappa2 + kappa3)"),
        (1, "X1 + E", "kappa4/(kappa5 + kappa6)"),
        (2, "X2 + F", "kappa7/(kappa8 + kappa9)"),
        (3, "X2 + F", "kappa7*kappa9/((kappa8 + kappa9)*kappa10)"),
        (3, "X1 + F", "kappa11/kappa10"),
        (4, "X1 + F", "kappa12/(kappa13 + kappa14)"),
        (5, "X1 + F", "kappa12*kappa14/((kappa13 + kappa14)*kappa15)"),
        (5, "X0 + F", "kappa16/kappa15"),
    ];
    let mut nonzero = 0;
    for (i, c, s) in pairs {
        assert_eq!(mu.value(i, idx(c)).unwrap(), &scalar(k, s), "mu[{i}] at {c}");
        nonzero += 1;
    }
    let total_nonzero: usize = mu
        .entries
        .iter()
        .map(|row| row.iter().filter(|s| !s.is_zero()).count())
        .sum();
    assert_eq!(total_nonzero, nonzero);
}

#[test]
fn mapk_core_and_phi() {
    let red = reduction_of("mapk.crn");
    let core = red.core();
    let shown: Vec<String> = core
        .reactions()
        .iter()
        .map(|r| core.reaction_display(r))
        .collect();
    assert_eq!(
        shown,
        vec![
            "X0 + E ->[k1] X1 + E",
            "X1 + E ->[k2] X2 + E",
            "X2 + F ->[k3] X1 + F",
            "X1 + F ->[k4] X0 + F",
        ]
    );
    let k = red.ext_params();
    assert_eq!(red.phi()[0], scalar(k, "kappa1*kappa3/(kappa2 + kappa3)"));
    assert_eq!(red.phi()[1], scalar(k, "kappa4*kappa6/(kappa5 + kappa6)"));
    assert_eq!(red.phi()[2], scalar(k, "kappa7*kappa9/(kappa8 + kappa9)"));
    assert_eq!(red.phi()[3], scalar(k, "kappa12*kappa14/(kappa13 + kappa14)"));
}

#[test]
fn mapk_input_classification() {
    let red = reduction_of("mapk.crn");
    let counts: Vec<usize> = (0..6).map(|i| red.input_count(i)).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 1, 2]);
}

#[test]
fn mapk_substitution_identity() {
    let red = reduction_of("mapk.crn");
    assert!(red.mu_support_matches_inputs());
    assert!(red.substitution_identity_holds());
}

#[test]
fn chain_intermediates_are_one_input() {
    let red = reduction_of("isomerization_chain.crn");
    for i in 0..3 {
        assert_eq!(red.input_count(i), 1, "Y{}", i + 1);
    }
    let net = red.extended();
    let x1x2 = complex_idx(net, "X1 + X2");
    assert_eq!(red.inputs_of(2), vec![x1x2]);
}

#[test]
fn reversible_intermediate_is_two_input() {
    let red = reduction_of("two_input.crn");
    assert_eq!(red.input_count(0), 2);
}

#[test]
fn textbook_pattern_detected() {
    let net = crn_core::ReactionNetwork::parse("A + B ->[kappa1] C\nC ->[kappa2] A + B").unwrap();
    let found = detect_intermediates(&net);
    let names: Vec<&str> = found
        .iter()
        .map(|&i| net.species()[i].name.as_str())
        .collect();
    assert_eq!(names, vec!["C"]);
}

#[test]
fn no_unary_complex_no_intermediates() {
    let net = load("reversible_binding.crn");
    // X4 is a unary complex and qualifies; drop to a network without one
    let none = crn_core::ReactionNetwork::parse("A + B ->[k1] 2C\n2C ->[k2] A + B").unwrap();
    assert!(detect_intermediates(&none).is_empty());
    let found = detect_intermediates(&net);
    let names: Vec<&str> = found
        .iter()
        .map(|&i| net.species()[i].name.as_str())
        .collect();
    assert_eq!(names, vec!["X4"]);
}

#[test]
fn cascade_intermediate_detection() {
    let net = load("multisite_cascade.crn");
    let found = detect_intermediates(&net);
    let names: Vec<&str> = found
        .iter()
        .map(|&i| net.species()[i].name.as_str())
        .collect();
    assert_eq!(
        names,
        vec![
            "X3", "X6", "X8", "X10", "X12", "X13", "X15", "X17", "X20", "X21", "X23", "X24",
            "X25", "X27", "X29"
        ]
    );
}

#[test]
fn validation_errors_name_the_species() {
    // B occurs inside A + B, so it cannot be an intermediate
    let net = crn_core::ReactionNetwork::parse("A + B ->[kappa1] B\nB ->[kappa2] A").unwrap();
    assert_eq!(
        validate_intermediates(&net, &["B".into()]).unwrap_err(),
        ReductionError::NonzeroCoefficientElsewhere("B".into())
    );
    // C is consumed but never produced
    let net2 = crn_core::ReactionNetwork::parse("C ->[kappa1] A\nA ->[kappa2] B").unwrap();
    assert_eq!(
        validate_intermediates(&net2, &["C".into()]).unwrap_err(),
        ReductionError::NoInflow("C".into())
    );
    // D is not a complex at all
    let net3 = crn_core::ReactionNetwork::parse("A + D ->[kappa1] B\nB ->[kappa2] A + D").unwrap();
    assert_eq!(
        validate_intermediates(&net3, &["D".into()]).unwrap_err(),
        ReductionError::NotAComplex("D".into())
    );
}

#[test]
fn empty_selection_gives_trivial_reduction() {
    let net = load("reversible_binding.crn");
    let red = Reduction::build(&net, &[]).unwrap();
    assert_eq!(red.core(), &net);
    assert!(red.r_prime().is_empty());
    assert!(red.h_polys().is_empty());
    let checks = verify_reduction(&red, 4).unwrap();
    assert!(checks.all_pass());
}

#[test]
fn spanning_tree_cap_is_honored() {
    let red = reduction_of("mapk.crn");
    let err = mu_spanning_tree(red.extended(), red.intermediates(), 0, 0, 3).unwrap_err();
    assert!(matches!(err, ReductionError::TreeCapExceeded { count: 6, cap: 3 }));
}

#[test]
fn cascade_reduction_builds() {
    let net = load("multisite_cascade.crn");
    let names: Vec<String> = detect_intermediates(&net)
        .into_iter()
        .map(|i| net.species()[i].name.clone())
        .collect();
    let red = Reduction::build(&net, &names).unwrap();
    assert_eq!(red.core().species().len(), 14);
    assert_eq!(red.core().reactions().len(), 16);
    assert!(red.mu_support_matches_inputs());
    assert!(red.substitution_identity_holds());
    // every core reaction is new except the direct X19 -> X28 edge
    assert_eq!(red.r_prime().len(), 15);
    let expected: Vec<String> = (1..=16).map(|i| format!("k{i}")).collect();
    let got: Vec<String> = red
        .core()
        .reactions()
        .iter()
        .map(|r| r.rate_symbol.clone())
        .collect();
    assert_eq!(got, expected);
}
