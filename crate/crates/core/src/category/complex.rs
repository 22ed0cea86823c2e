use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Category, CategoryTag};
use crate::error::{Error, Result};

pub type Vertex = usize;

/// A nonempty, strictly ascending list of vertices.
pub type Simplex = Vec<Vertex>;

/// Finite abstract simplicial complexes with simplicial maps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Complex;

/// A face-closed finite set of simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ComplexDoc", into = "ComplexDoc")]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    simplices: Vec<Simplex>,
}

impl TryFrom<ComplexDoc> for SimplicialComplex {
    type Error = Error;
    fn try_from(doc: ComplexDoc) -> Result<Self> {
        SimplicialComplex::new(doc.simplices)
    }
}

impl From<SimplicialComplex> for ComplexDoc {
    fn from(c: SimplicialComplex) -> Self {
        ComplexDoc { simplices: c.simplices_by_dimension() }
    }
}

/// Codimension-one faces of a simplex.
pub fn boundary_faces(s: &[Vertex]) -> impl Iterator<Item = Simplex> + '_ {
    let n = if s.len() > 1 { s.len() } else { 0 };
    (0..n).map(move |i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect())
}

fn check_simplex(s: &[Vertex]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Object("empty simplex".into()));
    }
    if !s.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Object(format!("simplex {s:?} is not strictly ascending")));
    }
    Ok(())
}

impl SimplicialComplex {
    /// Builds a complex, checking that the list is face-closed.
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let simplices: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &simplices {
            check_simplex(s)?;
            if let Some(missing) = boundary_faces(s).find(|f| !simplices.contains(f)) {
                return Err(Error::Object(format!("face {missing:?} of {s:?} is missing")));
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    /// The smallest complex containing every given simplex. Input simplices
    /// are sorted and deduplicated first.
    pub fn closure(generators: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut simplices = BTreeSet::new();
        for mut g in generators {
            g.sort_unstable();
            g.dedup();
            check_simplex(&g)?;
            for k in 1..=g.len() {
                simplices.extend(g.iter().copied().combinations(k));
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn point() -> Self {
        SimplicialComplex { simplices: BTreeSet::from([vec![0]]) }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &[Vertex]) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// Simplices ordered by dimension, then lexicographically.
    pub fn simplices_by_dimension(&self) -> Vec<Simplex> {
        self.simplices.iter().cloned().sorted_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))).collect()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1]))
    }

    /// Simplices of dimension `d` in lexicographic order.
    pub fn of_dimension(&self, d: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.len() == d + 1).collect()
    }

    /// Maximum simplex dimension; `-1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn skeleton(&self, n: usize) -> SimplicialComplex {
        SimplicialComplex { simplices: self.simplices.iter().filter(|s| s.len() <= n + 1).cloned().collect() }
    }

    /// Full subcomplex on the given vertices.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> SimplicialComplex {
        SimplicialComplex { simplices: self.simplices.iter().filter(|s| s.iter().all(|v| keep.contains(v))).cloned().collect() }
    }
}

/// A simplicial map, determined by its action on vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(Vertex, Vertex)>", into = "Vec<(Vertex, Vertex)>")]
pub struct SimplicialMap {
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

impl From<Vec<(Vertex, Vertex)>> for SimplicialMap {
    fn from(pairs: Vec<(Vertex, Vertex)>) -> Self {
        SimplicialMap { vertex_map: pairs.into_iter().collect() }
    }
}

impl From<SimplicialMap> for Vec<(Vertex, Vertex)> {
    fn from(m: SimplicialMap) -> Self {
        m.vertex_map.into_iter().collect()
    }
}

impl SimplicialMap {
    /// The inclusion of `source` as a subcomplex (identity on vertices).
    pub fn inclusion(source: &SimplicialComplex) -> Self {
        SimplicialMap { vertex_map: source.vertices().into_iter().map(|v| (v, v)).collect() }
    }

    /// Collapse every vertex of `source` onto `target`.
    pub fn constant(source: &SimplicialComplex, target: Vertex) -> Self {
        SimplicialMap { vertex_map: source.vertices().into_iter().map(|v| (v, target)).collect() }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.vertex_map[&v]
    }

    /// Image of a simplex: sorted, deduplicated vertex images.
    pub fn image(&self, s: &[Vertex]) -> Simplex {
        let mut out: Simplex = s.iter().map(|v| self.vertex_map[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl Category for Complex {
    type Obj = SimplicialComplex;
    type Map = SimplicialMap;

    const TAG: CategoryTag = CategoryTag::Complex;

    fn initial() -> SimplicialComplex {
        SimplicialComplex::default()
    }

    fn from_initial(_target: &SimplicialComplex) -> SimplicialMap {
        SimplicialMap::default()
    }

    fn identity(obj: &SimplicialComplex) -> SimplicialMap {
        SimplicialMap::inclusion(obj)
    }

    fn compose(outer: &SimplicialMap, inner: &SimplicialMap) -> SimplicialMap {
        SimplicialMap { vertex_map: inner.vertex_map.iter().map(|(&v, w)| (v, outer.vertex_map[w])).collect() }
    }

    fn check_map(map: &SimplicialMap, source: &SimplicialComplex, target: &SimplicialComplex) -> Result<()> {
        let verts = source.vertices();
        if map.vertex_map.len() != verts.len() || verts.iter().any(|v| !map.vertex_map.contains_key(v)) {
            return Err(Error::MapType("vertex map domain differs from the source vertices".into()));
        }
        if let Some(s) = source.simplices().find(|s| !target.contains(&map.image(s))) {
            return Err(Error::MapType(format!("image of simplex {s:?} is not in the target")));
        }
        Ok(())
    }

    /// Injective on vertices, hence on simplices.
    fn is_mono(map: &SimplicialMap) -> bool {
        map.vertex_map.values().all_unique()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_closure_is_enforced() {
        assert!(SimplicialComplex::new(vec![vec![0], vec![1], vec![0, 1]]).is_ok());
        assert!(SimplicialComplex::new(vec![vec![0], vec![0, 1]]).is_err());
        assert!(SimplicialComplex::new(vec![vec![1, 0]]).is_err());
        let tri = SimplicialComplex::closure(vec![vec![2, 0, 1]]).unwrap();
        assert_eq!(tri.len(), 7);
        assert_eq!(tri.dimension(), 2);
        assert_eq!(SimplicialComplex::default().dimension(), -1);
    }

    #[test]
    fn map_typing_and_composition() {
        let edge = SimplicialComplex::closure(vec![vec![0, 1]]).unwrap();
        let pt = SimplicialComplex::point();
        let collapse = SimplicialMap::constant(&edge, 0);
        assert!(Complex::check_map(&collapse, &edge, &pt).is_ok());
        assert!(!Complex::is_mono(&collapse));
        let two_points = SimplicialComplex::new(vec![vec![0], vec![1]]).unwrap();
        let id = SimplicialMap::inclusion(&edge);
        assert!(Complex::check_map(&id, &edge, &two_points).is_err());
        assert_eq!(Complex::compose(&collapse, &id), collapse);
    }

    #[test]
    fn json_shape() {
        let edge = SimplicialComplex::closure(vec![vec![0, 1]]).unwrap();
        let s = serde_json::to_string(&edge).unwrap();
        assert_eq!(s, r#"{"simplices":[[0],[1],[0,1]]}"#);
        assert_eq!(serde_json::from_str::<SimplicialComplex>(&s).unwrap(), edge);
        assert!(serde_json::from_str::<SimplicialComplex>(r#"{"simplices":[[0,1]]}"#).is_err());
        let m = SimplicialMap::constant(&edge, 5);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[0,5],[1,5]]");
    }
}
