//! The spanning-tree route to the mu-coefficients.
//!
//! For a non-intermediate complex `c`, build the labeled digraph on the
//! intermediates plus an auxiliary vertex `*`: edges `Y_i -> Y_j` labeled by
//! their rate symbol, `* -> Y_i` labeled by the rate of `c -> Y_i`, and
//! `Y_i -> *` labeled by the sum of the rates of all reactions from `Y_i` to
//! non-intermediate complexes. Then
//! `mu_{i,c} = (sum of rooted-tree products at Y_i) / (sum at *)`,
//! where a spanning tree is rooted at `v` when `v` is the only vertex without
//! an outgoing edge. Labeling `* -> Y_i` with the bare rate symbol absorbs
//! the `x^c` factor, so the ratio is `mu_{i,c}` directly.
//!
//! Enumeration is exponential in the number of intermediates; this route is
//! the independent test oracle for the linear solve, kept behind a cap.


use crate::algebra::{ParamPoly, ParamScalar};
use crate::error::ReductionError;
use crate::network::{Complex, ReactionNetwork};

/// Computes `mu_{i,c}` by rooted-spanning-tree enumeration. `intermediates`
/// are species indices, `i` indexes into them, and `c` is an extended-network
/// complex index. Errors when there are more intermediates than `cap`.
pub fn mu_spanning_tree(
    net: &ReactionNetwork,
    intermediates: &[usize],
    i: usize,
    c: usize,
    cap: usize,
) -> Result<ParamScalar, ReductionError> {
    let m = intermediates.len();
    if m > cap {
        return Err(ReductionError::TreeCapExceeded { count: m, cap });
    }
    let params = net.rate_params();
    let unit_idx: Vec<usize> = intermediates
        .iter()
        .map(|&yi| {
            net.complex_index(&Complex::from_parts([(yi, 1)]))
                .ok_or_else(|| ReductionError::NotAComplex(net.species()[yi].name.clone()))
        })
        .collect::<Result<_, _>>()?;

    // vertices 0..m are the intermediates, m is `*`
    let star = m;
    let mut out_edges: Vec<Vec<(usize, ParamPoly)>> = vec![Vec::new(); m + 1];
    for (ri, r) in net.reactions().iter().enumerate() {
        let sym = ParamPoly::var(params.clone(), ri);
        let from = unit_idx.iter().position(|&u| u == r.reactant);
        let to = unit_idx.iter().position(|&u| u == r.product);
        match (from, to) {
            (Some(a), Some(b)) => out_edges[a].push((b, sym)),
            (Some(a), None) => {
                // outflow to a non-intermediate complex accumulates into beta
                match out_edges[a].iter_mut().find(|(t, _)| *t == star) {
                    Some((_, label)) => *label = label.add(&sym),
                    None => out_edges[a].push((star, sym)),
                }
            }
            (None, Some(b)) => {
                if r.reactant == c {
                    out_edges[star].push((b, sym));
                }
            }
            (None, None) => {}
        }
    }

    let num = tree_sum(&out_edges, i, &params);
    let den = tree_sum(&out_edges, star, &params);
    if den.is_zero() {
        return Err(ReductionError::SingularIntermediateSystem);
    }
    ParamScalar::new(num, den).map_err(|_| ReductionError::SingularIntermediateSystem)
}

/// Sum over all spanning trees rooted at `root` of the product of edge
/// labels: every vertex other than the root picks one outgoing edge and the
/// choice must be cycle-free.
fn tree_sum(
    out_edges: &[Vec<(usize, ParamPoly)>],
    root: usize,
    params: &std::sync::Arc<crate::algebra::VarSet>,
) -> ParamPoly {
    let n = out_edges.len();
    let choosers: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut acc = ParamPoly::zero(params.clone());
    let mut choice = vec![usize::MAX; n];
    enumerate(
        out_edges,
        root,
        &choosers,
        0,
        &mut choice,
        &mut acc,
        params,
    );
    acc
}

fn enumerate(
    out_edges: &[Vec<(usize, ParamPoly)>],
    root: usize,
    choosers: &[usize],
    at: usize,
    choice: &mut Vec<usize>,
    acc: &mut ParamPoly,
    params: &std::sync::Arc<crate::algebra::VarSet>,
) {
    if at == choosers.len() {
        // cycle check: following choices from every vertex must reach the root
        let n = out_edges.len();
        for start in choosers {
            let mut cur = *start;
            let mut steps = 0;
            while cur != root {
                cur = out_edges[cur][choice[cur]].0;
                steps += 1;
                if steps > n {
                    return;
                }
            }
        }
        let mut prod = ParamPoly::one(params.clone());
        for &v in choosers {
            prod = prod.mul(&out_edges[v][choice[v]].1);
        }
        *acc = acc.add(&prod);
        return;
    }
    let v = choosers[at];
    if out_edges[v].is_empty() {
        return;
    }
    for e in 0..out_edges[v].len() {
        choice[v] = e;
        enumerate(out_edges, root, choosers, at + 1, choice, acc, params);
    }
}
