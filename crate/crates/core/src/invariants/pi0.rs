use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::category::{Complex, FinMap, FinSet, SimplicialComplex, SimplicialMap, Vertex};
use crate::error::Result;
use crate::persist::{find_partner, DeltaMorphism, Interleaving, PersistentObject};
use crate::Grade;

/// Connected components of a complex, numbered by their least vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    label: BTreeMap<Vertex, usize>,
    count: usize,
}

impl Components {
    pub fn of(k: &SimplicialComplex) -> Self {
        let vertices = k.vertices();
        let index: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::<usize>::new(vertices.len());
        for (a, b) in k.edges() {
            uf.union(index[&a], index[&b]);
        }
        // vertices ascend, so first sight of a root is at its least vertex
        let mut root_label = BTreeMap::new();
        let mut label = BTreeMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            let next = root_label.len();
            let l = *root_label.entry(uf.find(i)).or_insert(next);
            label.insert(v, l);
        }
        Components { label, count: root_label.len() }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.label[&v]
    }

    /// The map on components induced by a simplicial map into `target`.
    pub fn induced(&self, map: &SimplicialMap, target: &Components) -> FinMap {
        let mut table = vec![0; self.count];
        for (&v, &l) in &self.label {
            table[l] = target.label(map.apply(v));
        }
        FinMap { codomain: target.count, table }
    }
}

/// Persistent `π₀`: components at every grid point, with induced maps.
pub fn pi0(x: &PersistentObject<Complex>) -> Result<PersistentObject<FinSet>> {
    let grid = x.grid().clone();
    let comps: Vec<Components> = x.objects().iter().map(Components::of).collect();
    PersistentObject::from_fn(
        grid.clone(),
        |idx| Ok(comps[grid.flat(idx)].count()),
        |idx, a| {
            let mut next = idx.to_vec();
            next[a] += 1;
            Ok(comps[grid.flat(idx)].induced(x.edge(idx, a), &comps[grid.flat(&next)]))
        },
    )
}

/// `π₀(f)` for a δ-morphism of persistent complexes.
pub fn pi0_induced(f: &DeltaMorphism<Complex>) -> Result<DeltaMorphism<FinSet>> {
    f.check_naturality()?;
    let source = Arc::new(pi0(f.source())?);
    let target = Arc::new(pi0(f.target())?);
    DeltaMorphism::from_fn(source, target, f.shift().clone(), |p| {
        let from = Components::of(&*f.source().evaluate(p)?);
        let to = Components::of(&*f.target().evaluate(&p.add(f.shift())?)?);
        Ok(from.induced(&f.component_at(p)?, &to))
    })
}

/// Whether `π₀(f)`, widened to shift `ε`, is one half of an
/// `(ε, δ)`-interleaving of persistent sets; returns the certificate if so.
pub fn induces_interleaving_in_pi0(
    f: &DeltaMorphism<Complex>,
    epsilon: &Grade,
    delta: &Grade,
    budget: u64,
) -> Result<Option<Interleaving<FinSet>>> {
    let f = if f.shift() == epsilon { f.clone() } else { f.shift_to(epsilon)? };
    find_partner(&pi0_induced(&f)?, delta, budget)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, VecDeque};

    use super::*;
    use crate::filtered::{vietoris_rips, MetricInput};
    use crate::Rational;

    /// Breadth-first component count.
    fn bfs_count(k: &SimplicialComplex) -> usize {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for v in k.vertices() {
            if !seen.insert(v) {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for (a, b) in k.edges() {
                    let other = if a == u { b } else if b == u { a } else { continue };
                    if seen.insert(other) {
                        queue.push_back(other);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn collinear_component_counts() {
        let pts: Vec<Vec<Rational>> = [0, 1, 3].iter().map(|&t| vec![Rational::from_int(t)]).collect();
        let x = vietoris_rips(&MetricInput::l1(&pts).unwrap(), 2).unwrap().to_persistent().unwrap();
        let p = pi0(&x).unwrap();
        assert_eq!(p.objects(), &[3, 2, 1, 1]);
        let oracle: Vec<usize> = x.objects().iter().map(bfs_count).collect();
        assert_eq!(p.objects(), oracle.as_slice());
    }

    #[test]
    fn empty_and_point() {
        let empty = PersistentObject::<Complex>::initial(1);
        assert_eq!(pi0(&empty).unwrap().objects(), &[0]);
        let pt = PersistentObject::<Complex>::constant_from(&Grade::from_ints(&[2]), SimplicialComplex::point());
        let p = pi0(&pt).unwrap();
        assert_eq!(*p.evaluate(&Grade::from_ints(&[1])).unwrap(), 0);
        assert_eq!(*p.evaluate(&Grade::from_ints(&[2])).unwrap(), 1);
    }

    #[test]
    fn identity_induces_identity() {
        let pts: Vec<Vec<Rational>> = [0, 2].iter().map(|&t| vec![Rational::from_int(t)]).collect();
        let x = Arc::new(vietoris_rips(&MetricInput::l1(&pts).unwrap(), 1).unwrap().to_persistent().unwrap());
        let induced = pi0_induced(&DeltaMorphism::identity(x.clone())).unwrap();
        assert_eq!(induced, DeltaMorphism::identity(Arc::new(pi0(&x).unwrap())));
        let cert = induces_interleaving_in_pi0(&DeltaMorphism::identity(x), &Grade::zero(1), &Grade::zero(1), 10_000).unwrap();
        assert!(cert.is_some());
    }
}
