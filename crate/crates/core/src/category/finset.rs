use serde::{Deserialize, Serialize};

use super::{Category, CategoryTag, Enumerable, PullbackCone, Pullbacks};
use crate::error::{Error, Result};

/// Finite sets `{0, .., n-1}`, represented by their cardinality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSet;

/// A function between finite sets, stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    pub codomain: usize,
    pub table: Vec<usize>,
}

impl FinMap {
    pub fn new(codomain: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&v| v >= codomain) {
            return Err(Error::MapType(format!("value {bad} outside codomain of size {codomain}")));
        }
        Ok(FinMap { codomain, table })
    }

    pub fn domain(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_bijective(&self) -> bool {
        self.domain() == self.codomain && self.is_injective()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.codomain];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinMap { codomain: self.domain(), table })
    }
}

impl Category for FinSet {
    type Obj = usize;
    type Map = FinMap;

    const TAG: CategoryTag = CategoryTag::FinSet;

    fn initial() -> usize {
        0
    }

    fn from_initial(target: &usize) -> FinMap {
        FinMap { codomain: *target, table: Vec::new() }
    }

    fn identity(obj: &usize) -> FinMap {
        FinMap { codomain: *obj, table: (0..*obj).collect() }
    }

    fn compose(outer: &FinMap, inner: &FinMap) -> FinMap {
        FinMap { codomain: outer.codomain, table: inner.table.iter().map(|&x| outer.table[x]).collect() }
    }

    fn check_map(map: &FinMap, source: &usize, target: &usize) -> Result<()> {
        if map.domain() != *source || map.codomain != *target {
            return Err(Error::MapType(format!(
                "function {}->{} used as {source}->{target}",
                map.domain(),
                map.codomain
            )));
        }
        if map.table.iter().any(|&v| v >= *target) {
            return Err(Error::MapType("function value outside codomain".into()));
        }
        Ok(())
    }

    fn is_mono(map: &FinMap) -> bool {
        map.is_injective()
    }
}

impl Enumerable for FinSet {
    fn hom_size(source: &usize, target: &usize) -> u128 {
        (*target as u128).checked_pow(*source as u32).unwrap_or(u128::MAX)
    }

    fn all_maps(source: &usize, target: &usize) -> Vec<FinMap> {
        let (n, k) = (*source, *target);
        if n == 0 {
            return vec![FinMap { codomain: k, table: Vec::new() }];
        }
        if k == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut table = vec![0; n];
        loop {
            out.push(FinMap { codomain: k, table: table.clone() });
            // odometer increment, last position fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                table[i] += 1;
                if table[i] < k {
                    break;
                }
                table[i] = 0;
            }
        }
    }
}

/// Pairs `(x, b)` with `f(x) = h(b)`, listed lexicographically.
impl Pullbacks for FinSet {
    type ConeData = Vec<(usize, usize)>;

    fn pullback(f: &FinMap, h: &FinMap, x: &usize, b: &usize) -> PullbackCone<FinSet> {
        let pairs: Vec<(usize, usize)> = (0..*x)
            .flat_map(|i| (0..*b).map(move |j| (i, j)))
            .filter(|&(i, j)| f.apply(i) == h.apply(j))
            .collect();
        let n = pairs.len();
        PullbackCone {
            apex: n,
            to_x: FinMap { codomain: *x, table: pairs.iter().map(|p| p.0).collect() },
            to_b: FinMap { codomain: *b, table: pairs.iter().map(|p| p.1).collect() },
            data: pairs,
        }
    }

    fn lift(cone: &PullbackCone<FinSet>, u: &FinMap, v: &FinMap, t: &usize) -> Result<FinMap> {
        let table = (0..*t)
            .map(|e| {
                let pair = (u.apply(e), v.apply(e));
                cone.data
                    .binary_search(&pair)
                    .map_err(|_| Error::MapType(format!("pair {pair:?} is not in the fiber product")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { codomain: cone.apex, table })
    }
}
