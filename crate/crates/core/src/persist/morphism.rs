//! δ-morphisms `X -> Y^δ` between persistent objects.
//!
//! Components are stored at the points of the merged grid of the source and
//! the target translated by `-δ`. On each cell of that grid both `X(r)` and
//! `Y(r + δ)` are constant, so one component per point determines the map.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::object::PersistentObject;
use crate::category::Category;
use crate::error::{Error, Result};
use crate::grades::Grade;

#[derive(Clone, Debug)]
pub struct DeltaMorphism<C: Category> {
    source: Arc<PersistentObject<C>>,
    target: Arc<PersistentObject<C>>,
    shift: Grade,
    grid: Grid,
    components: Vec<C::Map>,
}

pub(crate) fn same_object<C: Category>(a: &Arc<PersistentObject<C>>, b: &Arc<PersistentObject<C>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Grid on which components of a `shift`-morphism `source -> target` are stored.
pub fn merged_grid<C: Category>(source: &PersistentObject<C>, target: &PersistentObject<C>, shift: &Grade) -> Result<Grid> {
    let back = Grade::zero(shift.m()).sub(shift)?;
    source.grid().merge(&target.grid().translate(&back)?)
}

impl<C: Category> DeltaMorphism<C> {
    /// Builds a morphism from components listed in row-major order over the
    /// merged grid. Types are checked; naturality is not (see [`Self::check_naturality`]).
    pub fn new(
        source: Arc<PersistentObject<C>>,
        target: Arc<PersistentObject<C>>,
        shift: Grade,
        components: Vec<C::Map>,
    ) -> Result<Self> {
        if source.m() != target.m() || shift.m() != source.m() {
            return Err(Error::Dimension { expected: source.m(), found: shift.m().max(target.m()) });
        }
        if !shift.is_nonnegative() {
            return Err(Error::NegativeShift(shift));
        }
        let grid = merged_grid(&source, &target, &shift)?;
        if components.len() != grid.len() {
            return Err(Error::Object(format!("{} components for {} merged grid points", components.len(), grid.len())));
        }
        let f = DeltaMorphism { source, target, shift, grid, components };
        for (p, comp) in f.grid.points().zip(&f.components) {
            let src = f.source.evaluate(&p)?;
            let tgt = f.target.evaluate(&p.add(&f.shift)?)?;
            C::check_map(comp, &src, &tgt).map_err(|e| Error::MapType(format!("component at {p}: {e}")))?;
        }
        Ok(f)
    }

    /// Builds a morphism by evaluating `component` at every merged grid point.
    pub fn from_fn(
        source: Arc<PersistentObject<C>>,
        target: Arc<PersistentObject<C>>,
        shift: Grade,
        mut component: impl FnMut(&Grade) -> Result<C::Map>,
    ) -> Result<Self> {
        if !shift.is_nonnegative() {
            return Err(Error::NegativeShift(shift));
        }
        let grid = merged_grid(&source, &target, &shift)?;
        let components = grid.points().map(|p| component(&p)).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, shift, components)
    }

    /// `id_X` as a 0-morphism.
    pub fn identity(x: Arc<PersistentObject<C>>) -> Self {
        let m = x.m();
        Self::from_fn(x.clone(), x.clone(), Grade::zero(m), |p| Ok(C::identity(&*x.evaluate(p)?)))
            .expect("identity is well typed")
    }

    /// `S_{0,δ}(id_X)`: the structure maps `X(r) -> X(r + δ)`.
    pub fn shifted_identity(x: Arc<PersistentObject<C>>, delta: &Grade) -> Result<Self> {
        Self::from_fn(x.clone(), x.clone(), delta.clone(), |p| x.structure_map(p, &p.add(delta)?))
    }

    pub fn source(&self) -> &Arc<PersistentObject<C>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PersistentObject<C>> {
        &self.target
    }

    pub fn shift(&self) -> &Grade {
        &self.shift
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[C::Map] {
        &self.components
    }

    /// The component `X(r) -> Y(r + δ)` at an arbitrary grade.
    pub fn component_at(&self, r: &Grade) -> Result<C::Map> {
        Ok(match self.grid.cell(r)? {
            Some(idx) => self.components[self.grid.flat(&idx)].clone(),
            None => C::from_initial(&*self.target.evaluate(&r.add(&self.shift)?)?),
        })
    }

    /// Checks `f_{s} ∘ φ^X_{r,s} = φ^Y_{r+δ,s+δ} ∘ f_r` on every elementary
    /// edge of the merged grid.
    pub fn check_naturality(&self) -> Result<()> {
        for idx in self.grid.indices() {
            let p = self.grid.point(&idx);
            let fp = &self.components[self.grid.flat(&idx)];
            for a in 0..self.grid.m() {
                let mut next = idx.clone();
                next[a] += 1;
                if next[a] >= self.grid.axis(a).len() {
                    continue;
                }
                let q = self.grid.point(&next);
                let fq = &self.components[self.grid.flat(&next)];
                let lhs = C::compose(fq, &self.source.structure_map(&p, &q)?);
                let rhs = C::compose(&self.target.structure_map(&p.add(&self.shift)?, &q.add(&self.shift)?)?, fp);
                if lhs != rhs {
                    return Err(Error::NotNatural { grade: p, detail: format!("square towards {q} does not commute") });
                }
            }
        }
        Ok(())
    }

    /// `S_{ε,δ}(f)`: postcompose each component with `φ^Y_{r+ε, r+δ}`.
    pub fn shift_to(&self, delta: &Grade) -> Result<Self> {
        if !self.shift.leq(delta)? {
            return Err(Error::Order(self.shift.clone(), delta.clone()));
        }
        let eps = self.shift.clone();
        Self::from_fn(self.source.clone(), self.target.clone(), delta.clone(), |p| {
            let y = self.target.structure_map(&p.add(&eps)?, &p.add(delta)?)?;
            Ok(C::compose(&y, &self.component_at(p)?))
        })
    }

    /// `g^ε ∘ f` for `f = self: X ->_ε Y` and `g: Y ->_δ Z`.
    pub fn then(&self, g: &DeltaMorphism<C>) -> Result<Self> {
        if !same_object(&self.target, &g.source) {
            return Err(Error::ObjectMismatch("target of the first morphism differs from source of the second".into()));
        }
        let total = self.shift.add(&g.shift)?;
        Self::from_fn(self.source.clone(), g.target.clone(), total, |p| {
            Ok(C::compose(&g.component_at(&p.add(&self.shift)?)?, &self.component_at(p)?))
        })
    }

    /// First grade at which the two morphisms differ, checked on the common
    /// refinement of their grids. Both must have the same source, target and shift.
    pub fn first_difference(&self, other: &DeltaMorphism<C>) -> Result<Option<Grade>> {
        if !same_object(&self.source, &other.source) || !same_object(&self.target, &other.target) {
            return Err(Error::ObjectMismatch("morphisms have different endpoints".into()));
        }
        if self.shift != other.shift {
            return Err(Error::ObjectMismatch(format!("shifts differ: {} vs {}", self.shift, other.shift)));
        }
        let grid = self.grid.merge(&other.grid)?;
        for p in grid.points() {
            if self.component_at(&p)? != other.component_at(&p)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// Replaces the endpoints with equal objects (used after deserialization
    /// to share one allocation between a certificate's two morphisms).
    pub(crate) fn with_endpoints(mut self, source: Arc<PersistentObject<C>>, target: Arc<PersistentObject<C>>) -> Self {
        debug_assert!(*source == *self.source && *target == *self.target);
        self.source = source;
        self.target = target;
        self
    }

    pub fn component_docs(&self) -> Vec<ComponentDoc<C>> {
        self.grid.points().zip(&self.components).map(|(grade, map)| ComponentDoc { grade, map: map.clone() }).collect()
    }

    /// Rebuilds a morphism from serialized components, which must cover the
    /// merged grid exactly.
    pub fn from_docs(
        source: Arc<PersistentObject<C>>,
        target: Arc<PersistentObject<C>>,
        shift: Grade,
        docs: Vec<ComponentDoc<C>>,
    ) -> Result<Self> {
        let grid = merged_grid(&source, &target, &shift)?;
        if docs.len() != grid.len() {
            return Err(Error::Object(format!("{} components for {} merged grid points", docs.len(), grid.len())));
        }
        let mut components = Vec::with_capacity(docs.len());
        for (expected, doc) in grid.points().zip(docs) {
            if doc.grade != expected {
                return Err(Error::Object(format!("component listed at {} where {} was expected", doc.grade, expected)));
            }
            components.push(doc.map);
        }
        Self::new(source, target, shift, components)
    }
}

impl<C: Category> PartialEq for DeltaMorphism<C> {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }
}

/// One serialized component: the grade and the concrete map at it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct ComponentDoc<C: Category> {
    pub grade: Grade,
    pub map: C::Map,
}
