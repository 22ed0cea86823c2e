//! Pulling an interleaving back along a morphism into one of its ends.
//!
//! Given `f: X ->_ε Y`, `g: Y ->_δ X` and a plain morphism `h: B -> Y`, the
//! object `A(r) = X(r) ×_{Y(r+ε)} B(r+ε)` is `(ε, δ)`-interleaved with `B`:
//! one side is the projection `k: A ->_ε B`, the other is `l: B ->_δ A`,
//! induced by `g ∘ h` and the structure maps of `B`.

use std::sync::Arc;

use super::grid::Grid;
use super::interleaving::Interleaving;
use super::morphism::{same_object, DeltaMorphism};
use super::object::PersistentObject;
use crate::category::{Pullbacks, PullbackCone};
use crate::error::{Error, Result};
use crate::grades::Grade;

/// The pulled-back object with its interleaving and its projection to `X`.
#[derive(Clone, Debug)]
pub struct PulledBack<C: Pullbacks> {
    pub object: Arc<PersistentObject<C>>,
    /// `A ~(ε,δ)~ B`.
    pub interleaving: Interleaving<C>,
    /// The plain projection `A -> X`.
    pub projection: DeltaMorphism<C>,
}

/// Pulls `cert: X ~(ε,δ)~ Y` back along `h: B -> Y`.
pub fn pullback_interleaving<C: Pullbacks>(cert: &Interleaving<C>, h: &DeltaMorphism<C>) -> Result<PulledBack<C>> {
    let (x, y, eps) = (cert.x(), cert.y(), cert.epsilon());
    let b = h.source();
    if !h.shift().coords().iter().all(|c| c.is_zero()) {
        return Err(Error::Precondition(format!("h must be a plain morphism, got shift {}", h.shift())));
    }
    if !same_object(h.target(), y) {
        return Err(Error::ObjectMismatch("h does not land in the target of the interleaving".into()));
    }
    h.check_naturality()?;
    let f = cert.f();
    let neg_eps = Grade::zero(eps.m()).sub(eps)?;
    let grid: Grid = f.grid().merge(&h.grid().translate(&neg_eps)?)?;

    // one fiber product per grid point
    let cones: Vec<PullbackCone<C>> = grid
        .points()
        .map(|p| {
            let q = p.add(eps)?;
            Ok(C::pullback(&f.component_at(&p)?, &h.component_at(&q)?, &*x.evaluate(&p)?, &*b.evaluate(&q)?))
        })
        .collect::<Result<_>>()?;
    let cone_at = |idx: &[usize]| &cones[grid.flat(idx)];

    let object = PersistentObject::from_fn(
        grid.clone(),
        |idx| Ok(cone_at(idx).apex.clone()),
        |idx, a| {
            let mut next = idx.to_vec();
            next[a] += 1;
            let (p, q) = (grid.point(idx), grid.point(&next));
            let (from, to) = (cone_at(idx), cone_at(&next));
            let u = C::compose(&x.structure_map(&p, &q)?, &from.to_x);
            let v = C::compose(&b.structure_map(&p.add(eps)?, &q.add(eps)?)?, &from.to_b);
            C::lift(to, &u, &v, &from.apex)
        },
    )?;
    let a = Arc::new(object);

    let k = DeltaMorphism::from_fn(a.clone(), b.clone(), eps.clone(), |p| {
        let target = p.add(eps)?;
        Ok(match grid.cell(p)? {
            Some(idx) => {
                let base = grid.point(&idx).add(eps)?;
                C::compose(&b.structure_map(&base, &target)?, &cone_at(&idx).to_b)
            }
            None => C::from_initial(&*b.evaluate(&target)?),
        })
    })?;

    let projection = DeltaMorphism::from_fn(a.clone(), x.clone(), Grade::zero(eps.m()), |p| {
        Ok(match grid.cell(p)? {
            Some(idx) => C::compose(&x.structure_map(&grid.point(&idx), p)?, &cone_at(&idx).to_x),
            None => C::from_initial(&*x.evaluate(p)?),
        })
    })?;

    let delta = cert.delta();
    let total = delta.add(eps)?;
    let g = cert.g();
    let l = DeltaMorphism::from_fn(b.clone(), a.clone(), delta.clone(), |r| {
        let landing = r.add(delta)?;
        let source = b.evaluate(r)?;
        match grid.cell(&landing)? {
            // A(r + δ) is the fiber product at the cell containing r + δ, and
            // the grid refines both X and B shifted by -ε, so no further
            // structure maps are needed on either factor.
            Some(idx) => {
                let u = C::compose(&g.component_at(r)?, &h.component_at(r)?);
                let v = b.structure_map(r, &r.add(&total)?)?;
                C::lift(cone_at(&idx), &u, &v, &source)
            }
            None if *source == C::initial() => Ok(C::from_initial(&C::initial())),
            None => Err(Error::InvalidCertificate(format!("B({r}) is not initial but A({landing}) is"))),
        }
    })?;

    Ok(PulledBack { object: a, interleaving: Interleaving::new(k, l)?, projection })
}
