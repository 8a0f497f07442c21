//! Shared fixtures and generators for the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crn_core::algebra::{parse_scalar, ParamScalar, VarSet};
use crn_core::network::ReactionNetwork;
use crn_core::reduction::Reduction;

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../networks/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load(name: &str) -> ReactionNetwork {
    let text = std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    ReactionNetwork::parse(&text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Builds the reduction using the fixture's declared intermediates.
pub fn reduction_of(name: &str) -> Reduction {
    let net = load(name);
    let decl = net.declared_intermediates().to_vec();
    Reduction::build(&net, &decl).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn scalar(params: &Arc<VarSet>, text: &str) -> ParamScalar {
    parse_scalar(text, params).unwrap_or_else(|e| panic!("scalar `{text}`: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random extended network with up to `max_x` non-intermediate species and
/// exactly `m` intermediates, guaranteed valid: every intermediate has an
/// inflow, and outflows are wired toward later intermediates or complexes so
/// that mass always exits. Extra random edges may add cycles; callers should
/// still validate (and regenerate on the rare singular draw).
pub fn random_network_text(rng: &mut ChaCha8Rng, max_x: usize, m: usize) -> String {
    let nx = rng.random_range(2..=max_x.max(2));
    // pool of distinct non-intermediate complexes, degree <= 2
    let mut pool: Vec<String> = Vec::new();
    let n_complexes = rng.random_range(2..=3);
    while pool.len() < n_complexes {
        let kind = rng.random_range(0..3);
        let c = match kind {
            0 => format!("X{}", rng.random_range(1..=nx)),
            1 => format!("2X{}", rng.random_range(1..=nx)),
            _ => {
                let a = rng.random_range(1..=nx);
                let b = rng.random_range(1..=nx);
                if a == b {
                    format!("2X{a}")
                } else {
                    format!("X{} + X{}", a.min(b), a.max(b))
                }
            }
        };
        if !pool.contains(&c) {
            pool.push(c);
        }
    }

    let mut edges: Vec<(String, String)> = Vec::new();
    let mut push = |edges: &mut Vec<(String, String)>, a: String, b: String| {
        if a != b && !edges.iter().any(|(x, y)| *x == a && *y == b) {
            edges.push((a, b));
        }
    };
    for i in 0..m {
        // one guaranteed inflow
        let src = if i > 0 && rng.random_bool(0.3) {
            format!("Y{}", rng.random_range(1..=i))
        } else {
            pool.choose(rng).unwrap().clone()
        };
        push(&mut edges, src, format!("Y{}", i + 1));
        // one guaranteed outflow, to a later intermediate or a complex
        let dst = if i + 1 < m && rng.random_bool(0.3) {
            format!("Y{}", rng.random_range(i + 2..=m))
        } else {
            pool.choose(rng).unwrap().clone()
        };
        push(&mut edges, format!("Y{}", i + 1), dst);
    }
    // sprinkle extra edges
    let extras = rng.random_range(0..=m + 1);
    for _ in 0..extras {
        let vertex = |rng: &mut ChaCha8Rng, pool: &[String]| {
            if rng.random_bool(0.5) && m > 0 {
                format!("Y{}", rng.random_range(1..=m))
            } else {
                pool.choose(rng).unwrap().clone()
            }
        };
        let a = vertex(rng, &pool);
        let b = vertex(rng, &pool);
        // keep the intermediate shape: an intermediate may not gain edges
        // that put it inside a bigger complex, which plain vertices cannot
        // do here; just avoid self-loops and duplicates
        push(&mut edges, a, b);
    }

    let mut text = String::new();
    text.push_str("intermediates:");
    for i in 0..m {
        text.push_str(&format!(" Y{}", i + 1));
    }
    text.push('\n');
    for (a, b) in edges {
        text.push_str(&format!("{a} -> {b}\n"));
    }
    text
}

/// Draws random valid reductions until `count` are collected.
pub fn random_reductions(
    seed: u64,
    count: usize,
    max_x: usize,
    max_m: usize,
) -> Vec<Reduction> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.random_range(1..=max_m);
        let text = random_network_text(&mut rng, max_x, m);
        let net = match ReactionNetwork::parse(&text) {
            Ok(n) => n,
            Err(_) => continue,
        };
        let decl = net.declared_intermediates().to_vec();
        if let Ok(red) = Reduction::build(&net, &decl) {
            out.push(red);
        }
    }
    out
}

/// A random nonzero scalar: quotient of small positive-coefficient
/// polynomials in the given symbols.
pub fn random_phi(rng: &mut ChaCha8Rng, params: &Arc<VarSet>) -> ParamScalar {
    let poly = |rng: &mut ChaCha8Rng| {
        let terms = rng.random_range(1..=2);
        let mut parts = Vec::new();
        for _ in 0..terms {
            let c = rng.random_range(1..=3);
            let v = rng.random_range(0..params.len());
            let e = rng.random_range(1..=2);
            parts.push(format!("{c}*{}^{e}", params.name(v)));
        }
        parts.join(" + ")
    };
    let num = poly(rng);
    let den = poly(rng);
    scalar(params, &format!("({num})/({den})"))
}
