//! Independent reference implementations used by the integration and
//! acceptance tests. None of them calls the code paths they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use pers_core::category::{Simplex, SimplicialComplex};
use pers_core::filtered::FilteredComplex;
use pers_core::invariants::{Bar, Barcode, Death};
use pers_core::Rational;

/// Component count by breadth-first search over the edge list.
pub fn bfs_components(k: &SimplicialComplex) -> usize {
    let mut adjacent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in k.simplices().filter(|s| s.len() == 2) {
        adjacent.entry(s[0]).or_default().push(s[1]);
        adjacent.entry(s[1]).or_default().push(s[0]);
    }
    let vertices: Vec<usize> = k.simplices().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for v in vertices {
        if !seen.insert(v) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in adjacent.get(&u).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Cost of matching two bars, or of deleting one when `b` is `None`.
fn cost(a: &Bar, b: Option<&Bar>) -> Option<Rational> {
    match b {
        None => match &a.death {
            Death::Finite(d) => Some((d - &a.birth) * Rational::new(1, 2).unwrap()),
            Death::Infinite => None,
        },
        Some(b) => {
            let db = (&a.birth - &b.birth).abs();
            match (&a.death, &b.death) {
                (Death::Finite(x), Death::Finite(y)) => Some(db.max((x - y).abs())),
                (Death::Infinite, Death::Infinite) => Some(db),
                _ => None,
            }
        }
    }
}

/// Bottleneck distance by enumerating every partial matching.
pub fn brute_bottleneck(left: &Barcode, right: &Barcode) -> Option<Rational> {
    fn go(l: &[Bar], r: &[Bar], i: usize, used: &mut Vec<bool>, worst: Rational, best: &mut Option<Rational>) {
        if i == l.len() {
            let mut worst = worst;
            for (j, b) in r.iter().enumerate() {
                if !used[j] {
                    match cost(b, None) {
                        Some(c) => worst = worst.max(c),
                        None => return,
                    }
                }
            }
            if best.as_ref().is_none_or(|b| worst < *b) {
                *best = Some(worst);
            }
            return;
        }
        if let Some(c) = cost(&l[i], None) {
            go(l, r, i + 1, used, worst.clone().max(c), best);
        }
        for j in 0..r.len() {
            if used[j] {
                continue;
            }
            if let Some(c) = cost(&l[i], Some(&r[j])) {
                used[j] = true;
                go(l, r, i + 1, used, worst.clone().max(c), best);
                used[j] = false;
            }
        }
    }
    let mut best = None;
    go(left.bars(), right.bars(), 0, &mut vec![false; right.len()], Rational::zero(), &mut best);
    best
}

/// Barcode of `H_dim` of a one-parameter filtered complex by the standard
/// column reduction of the boundary matrix in filtration order.
pub fn reduction_barcode(k: &FilteredComplex, dim: usize) -> Barcode {
    let mut order: Vec<(&Simplex, &Rational)> = k.grades().iter().map(|(s, g)| (s, g.coord(0))).collect();
    order.sort_by(|a, b| a.1.cmp(b.1).then(a.0.len().cmp(&b.0.len())).then(a.0.cmp(b.0)));
    let position: BTreeMap<&Simplex, usize> = order.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
    let mut columns: Vec<BTreeSet<usize>> = order
        .iter()
        .map(|(s, _)| {
            if s.len() == 1 {
                return BTreeSet::new();
            }
            (0..s.len())
                .map(|skip| {
                    let face: Simplex = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    position[&face]
                })
                .collect()
        })
        .collect();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut paired = BTreeSet::new();
    let mut bars = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].iter().next_back() {
            match owner.get(&low) {
                Some(&i) => {
                    let other = columns[i].clone();
                    columns[j] = columns[j].symmetric_difference(&other).copied().collect();
                }
                None => {
                    owner.insert(low, j);
                    paired.insert(low);
                    paired.insert(j);
                    if order[low].0.len() == dim + 1 && order[low].1 < order[j].1 {
                        bars.push(Bar::new(order[low].1.clone(), Death::Finite(order[j].1.clone())).unwrap());
                    }
                    break;
                }
            }
        }
    }
    for (i, (s, g)) in order.iter().enumerate() {
        if !paired.contains(&i) && s.len() == dim + 1 {
            bars.push(Bar::new((*g).clone(), Death::Infinite).unwrap());
        }
    }
    Barcode::new(bars)
}
