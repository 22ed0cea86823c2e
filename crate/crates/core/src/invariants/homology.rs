use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{boundary_faces, Category, Complex, F2Matrix, F2Vec, F2Vector, Reducer, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::persist::{DeltaMorphism, Grid, Interleaving, PersistentObject};
use crate::{Grade, Rational};

/// A basis of `H_n(K; F2)` given by cycle representatives, with the data
/// needed to express any cycle in it.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    index: BTreeMap<Simplex, usize>,
    representatives: Vec<F2Vector>,
    /// Boundaries (tagged zero) followed by representatives (tagged by unit vectors).
    reducer: Reducer,
}

fn boundary_matrix(index_hi: &[&Simplex], index_lo: &BTreeMap<Simplex, usize>) -> Result<F2Matrix> {
    let cols = index_hi
        .iter()
        .map(|s| F2Vector::from_support(index_lo.len(), boundary_faces(s).map(|f| index_lo[&f])))
        .collect();
    F2Matrix::from_columns(index_lo.len(), cols)
}

impl HomologyBasis {
    pub fn new(k: &SimplicialComplex, n: usize) -> Result<Self> {
        let chains = k.of_dimension(n);
        let index: BTreeMap<Simplex, usize> = chains.iter().enumerate().map(|(i, s)| ((*s).clone(), i)).collect();
        let cycles = if n == 0 {
            (0..index.len()).map(|i| F2Vector::unit(index.len(), i)).collect()
        } else {
            let lower: BTreeMap<Simplex, usize> =
                k.of_dimension(n - 1).into_iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
            boundary_matrix(&chains, &lower)?.kernel()
        };
        let upper = boundary_matrix(&k.of_dimension(n + 1), &index)?;
        let boundary_rank = upper.rank();
        let dim = cycles.len() - boundary_rank;
        let mut reducer = Reducer::new(index.len(), dim);
        for b in upper.columns() {
            reducer.insert(b.clone(), F2Vector::zeros(dim));
        }
        let mut representatives = Vec::with_capacity(dim);
        for z in cycles {
            if representatives.len() == dim {
                break;
            }
            if reducer.insert(z.clone(), F2Vector::unit(dim, representatives.len())).is_none() {
                representatives.push(z);
            }
        }
        debug_assert_eq!(representatives.len(), dim);
        Ok(HomologyBasis { index, representatives, reducer })
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of a cycle.
    pub fn coordinates(&self, cycle: F2Vector) -> Result<F2Vector> {
        let (residual, tag) = self.reducer.reduce(cycle);
        if !residual.is_zero() {
            return Err(Error::Unsupported("chain is not a cycle".into()));
        }
        Ok(tag)
    }

    /// The matrix of `H_n(map)` into the homology of the target.
    pub fn induced(&self, map: &SimplicialMap, target: &HomologyBasis) -> Result<F2Matrix> {
        let cols = self
            .representatives
            .iter()
            .map(|z| {
                let mut image = F2Vector::zeros(target.index.len());
                for (s, &i) in &self.index {
                    if z.get(i) {
                        let t = map.image(s);
                        // collapsed simplices vanish in the chain map
                        if t.len() == s.len() {
                            image.flip(target.index[&t]);
                        }
                    }
                }
                target.coordinates(image)
            })
            .collect::<Result<Vec<_>>>()?;
        F2Matrix::from_columns(target.rank(), cols)
    }
}

fn require_one_parameter<C: Category>(x: &PersistentObject<C>) -> Result<()> {
    if x.m() != 1 {
        return Err(Error::Unsupported(format!(
            "homology is computed for one-parameter objects only (m = {}); restrict to a line first",
            x.m()
        )));
    }
    Ok(())
}

/// `H_n(-; F2)` applied pointwise to a one-parameter persistent complex.
pub fn homology(x: &PersistentObject<Complex>, n: usize) -> Result<PersistentObject<F2Vec>> {
    require_one_parameter(x)?;
    let bases: Vec<HomologyBasis> = x.objects().iter().map(|k| HomologyBasis::new(k, n)).collect::<Result<_>>()?;
    let grid = x.grid().clone();
    PersistentObject::from_fn(
        grid,
        |idx| Ok(bases[idx[0]].rank()),
        |idx, a| bases[idx[0]].induced(x.edge(idx, a), &bases[idx[0] + 1]),
    )
}

/// `H_n(f)` for a δ-morphism of one-parameter persistent complexes.
pub fn homology_morphism(f: &DeltaMorphism<Complex>, n: usize) -> Result<DeltaMorphism<F2Vec>> {
    f.check_naturality()?;
    let source = Arc::new(homology(f.source(), n)?);
    let target = Arc::new(homology(f.target(), n)?);
    DeltaMorphism::from_fn(source, target, f.shift().clone(), |p| {
        let from = HomologyBasis::new(&*f.source().evaluate(p)?, n)?;
        let to = HomologyBasis::new(&*f.target().evaluate(&p.add(f.shift())?)?, n)?;
        from.induced(&f.component_at(p)?, &to)
    })
}

/// The induced interleaving of homology modules.
pub fn homology_interleaving(cert: &Interleaving<Complex>, n: usize) -> Result<Interleaving<F2Vec>> {
    Interleaving::new(homology_morphism(cert.f(), n)?, homology_morphism(cert.g(), n)?)
}

/// The one-parameter object `t ↦ X(base with coordinate axis = t)`.
pub fn restrict_to_line<C: Category>(x: &PersistentObject<C>, axis: usize, base: &Grade) -> Result<PersistentObject<C>> {
    if axis >= x.m() || base.m() != x.m() {
        return Err(Error::Dimension { expected: x.m(), found: base.m().max(axis + 1) });
    }
    let values: Vec<Rational> = x.grid().axis(axis).to_vec();
    let at = |t: &Rational| {
        let mut coords = base.coords().to_vec();
        coords[axis] = t.clone();
        Grade::new(coords)
    };
    let grid = Grid::new(vec![values.clone()])?;
    PersistentObject::from_fn(
        grid,
        |idx| Ok(x.evaluate(&at(&values[idx[0]])?)?.into_owned()),
        |idx, _| x.structure_map(&at(&values[idx[0]])?, &at(&values[idx[0] + 1])?),
    )
}
