//! Bottleneck distance between barcodes and stability cross-checks.
//!
//! Every matching cost is an endpoint difference or a half-length, so the
//! optimum is found exactly by deciding, for each candidate threshold, whether
//! a perfect matching exists in the usual bipartite graph with diagonal copies.

use std::sync::Arc;

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::Serialize;

use crate::category::{Complex, F2Vec};
use crate::error::{Error, Result};
use crate::invariants::{barcode, homology_interleaving, Bar, Barcode, Death};
use crate::persist::{interleaving_distance, Interleaving, PersistentObject};
use crate::Rational;

/// A pair of matched bars, by index into the two barcodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchedPair {
    pub left: usize,
    pub right: usize,
    pub cost: Rational,
}

/// A partial matching; unmatched bars are deleted to the diagonal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
    pub deleted_left: Vec<usize>,
    pub deleted_right: Vec<usize>,
}

/// Result of [`bottleneck`]: `distance` is `None` when it is infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bottleneck {
    pub distance: Option<Rational>,
    pub matching: Option<Matching>,
}

/// `max(|Δbirth|, |Δdeath|)`; infinite deaths only pair with each other.
pub fn pair_cost(a: &Bar, b: &Bar) -> Option<Rational> {
    let db = (&a.birth - &b.birth).abs();
    match (&a.death, &b.death) {
        (Death::Finite(x), Death::Finite(y)) => Some(db.max((x - y).abs())),
        (Death::Infinite, Death::Infinite) => Some(db),
        _ => None,
    }
}

/// Half the length of a finite bar; infinite bars cannot be deleted.
pub fn deletion_cost(a: &Bar) -> Option<Rational> {
    a.length().map(|l| l.half())
}

/// A perfect matching of the augmented graph at threshold `t`, if any.
fn match_at(left: &[Bar], right: &[Bar], t: &Rational) -> Option<Matching> {
    let (n1, n2) = (left.len(), right.len());
    let side = n1 + n2;
    let mut graph = UnGraph::<(), ()>::with_capacity(2 * side, 0);
    let nodes: Vec<NodeIndex> = (0..2 * side).map(|_| graph.add_node(())).collect();
    // left side: bars of `left`, then diagonal copies of `right`
    // right side: bars of `right`, then diagonal copies of `left`
    let within = |c: Option<Rational>| c.is_some_and(|c| c <= *t);
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if within(pair_cost(a, b)) {
                graph.add_edge(nodes[i], nodes[side + j], ());
            }
        }
        if within(deletion_cost(a)) {
            graph.add_edge(nodes[i], nodes[side + n2 + i], ());
        }
    }
    for (j, b) in right.iter().enumerate() {
        if within(deletion_cost(b)) {
            graph.add_edge(nodes[n1 + j], nodes[side + j], ());
        }
        for i in 0..n1 {
            graph.add_edge(nodes[n1 + j], nodes[side + n2 + i], ());
        }
    }
    let matching = maximum_matching(&graph);
    if matching.len() != side {
        return None;
    }
    let mut out = Matching::default();
    for i in 0..n1 {
        let mate = matching.mate(nodes[i])?.index() - side;
        if mate < n2 {
            let cost = pair_cost(&left[i], &right[mate]).expect("matched bars are comparable");
            out.pairs.push(MatchedPair { left: i, right: mate, cost });
        } else {
            out.deleted_left.push(i);
        }
    }
    for j in 0..n2 {
        if matching.mate(nodes[side + j])?.index() >= n1 {
            out.deleted_right.push(j);
        }
    }
    Some(out)
}

/// Exact bottleneck distance with an optimal matching.
pub fn bottleneck(left: &Barcode, right: &Barcode) -> Bottleneck {
    let infinite = |b: &Barcode| b.bars().iter().filter(|b| b.death == Death::Infinite).count();
    if infinite(left) != infinite(right) {
        return Bottleneck { distance: None, matching: None };
    }
    let (l, r) = (left.bars(), right.bars());
    let mut candidates: Vec<Rational> = vec![Rational::zero()];
    for a in l {
        candidates.extend(deletion_cost(a));
        for b in r {
            candidates.extend(pair_cost(a, b));
        }
    }
    candidates.extend(r.iter().filter_map(deletion_cost));
    candidates.sort();
    candidates.dedup();
    // feasibility is monotone in the threshold
    let first = candidates.partition_point(|t| match_at(l, r, t).is_none());
    let t = candidates[first].clone();
    let matching = match_at(l, r, &t).expect("the largest candidate is feasible");
    Bottleneck { distance: Some(t), matching: Some(matching) }
}

/// Everything computed by [`stability_audit`].
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub dimension: usize,
    /// `max(ε, δ)` of the input certificate.
    pub shift: Rational,
    pub module_certificate: Interleaving<F2Vec>,
    pub module_certificate_valid: bool,
    pub barcode_x: Barcode,
    pub barcode_y: Barcode,
    pub bottleneck: Bottleneck,
    /// `d_B <= max(ε, δ)`.
    pub holds: bool,
}

/// From a valid interleaving of one-parameter persistent complexes, computes
/// `H_n`, the induced module interleaving, both barcodes and their
/// bottleneck distance, and checks `d_B <= max(ε, δ)`.
pub fn stability_audit(cert: &Interleaving<Complex>, n: usize) -> Result<StabilityReport> {
    if cert.x().m() != 1 {
        return Err(Error::Unsupported("the stability audit needs m = 1".into()));
    }
    let report = cert.check()?;
    if !report.valid {
        return Err(Error::InvalidCertificate(format!("input certificate fails: {:?}", report.violation)));
    }
    let shift = cert.epsilon().coord(0).clone().max(cert.delta().coord(0).clone());
    let module_certificate = homology_interleaving(cert, n)?;
    let module_certificate_valid = module_certificate.is_valid()?;
    let barcode_x = barcode(module_certificate.x())?;
    let barcode_y = barcode(module_certificate.y())?;
    let bottleneck = bottleneck(&barcode_x, &barcode_y);
    let holds = bottleneck.distance.as_ref().is_some_and(|d| *d <= shift);
    Ok(StabilityReport {
        dimension: n,
        shift,
        module_certificate,
        module_certificate_valid,
        barcode_x,
        barcode_y,
        bottleneck,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub bottleneck: Bottleneck,
    /// Interleaving distance; `None` is infinity.
    pub interleaving_distance: Option<Rational>,
    pub attained: bool,
    /// `d_B <= d_I`.
    pub holds: bool,
}

/// Compares the bottleneck distance of two modules with their interleaving
/// distance found by exhaustive search.
pub fn module_distance_crosscheck(
    f: &Arc<PersistentObject<F2Vec>>,
    g: &Arc<PersistentObject<F2Vec>>,
    budget: u64,
) -> Result<CrosscheckReport> {
    let bottleneck = bottleneck(&barcode(f)?, &barcode(g)?);
    let search = interleaving_distance(f, g, budget)?;
    let holds = match (&bottleneck.distance, &search.distance) {
        (_, None) => true,
        (Some(b), Some(i)) => b <= i,
        (None, Some(_)) => false,
    };
    Ok(CrosscheckReport { bottleneck, interleaving_distance: search.distance, attained: search.attained, holds })
}
