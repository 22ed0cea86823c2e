//! Reindexing one-parameter objects between real and integer grades.
//!
//! A `Z`-indexed object is stored on an integer axis. Because evaluation
//! picks the largest grid value below the query, the stored object already
//! evaluates to `A(⌊r⌋)` at a real grade `r`: extension along the floor
//! functor does not change the representation.

use std::sync::Arc;

use super::grid::Grid;
use super::interleaving::Interleaving;
use super::morphism::DeltaMorphism;
use super::object::PersistentObject;
use crate::category::Category;
use crate::error::{Error, Result};
use crate::grades::{floor_int, Grade, Rational};

fn require_one_parameter<C: Category>(x: &PersistentObject<C>) -> Result<()> {
    if x.m() != 1 {
        return Err(Error::Dimension { expected: 1, found: x.m() });
    }
    Ok(())
}

/// The integer window `⌊min⌋ ..= ⌈max⌉` covering the grid of `x`.
pub fn covering_window<C: Category>(x: &PersistentObject<C>) -> (i64, i64) {
    let axis = x.grid().axis(0);
    let lo = floor_int(&axis[0]);
    let last = &axis[axis.len() - 1];
    let hi = if last.is_integer() { floor_int(last) } else { floor_int(last) + 1 };
    (lo, hi)
}

/// Samples `x` at the integers of its covering window.
pub fn restrict_to_z<C: Category>(x: &PersistentObject<C>) -> Result<PersistentObject<C>> {
    require_one_parameter(x)?;
    let (lo, hi) = covering_window(x);
    let at = |n: i64| Grade::scalar(Rational::from_int(n));
    let objects = (lo..=hi).map(|n| Ok(x.evaluate(&at(n))?.into_owned())).collect::<Result<Vec<_>>>()?;
    let maps = (lo..hi).map(|n| x.structure_map(&at(n), &at(n + 1))).collect::<Result<Vec<_>>>()?;
    PersistentObject::on_window(lo, objects, maps)
}

/// `A ∘ ⌊-⌋` for a `Z`-indexed `A`. Requires an integer-valued axis.
pub fn extend_floor<C: Category>(a: &PersistentObject<C>) -> Result<PersistentObject<C>> {
    require_one_parameter(a)?;
    if !a.grid().axis(0).iter().all(Rational::is_integer) {
        return Err(Error::Grid("a Z-indexed object needs integer grid values".into()));
    }
    Ok(a.clone())
}

/// The 1-interleaving between `x` and the floor extension of its
/// restriction, built from structure maps of `x`:
/// `f_r = φ_{r, ⌊r⌋+1}` and `g_r = φ_{⌊r⌋, r+1}`.
pub fn floor_roundtrip_certificate<C: Category>(x: &Arc<PersistentObject<C>>) -> Result<Interleaving<C>> {
    let e = Arc::new(extend_floor(&restrict_to_z(x)?)?);
    let one = Grade::from_ints(&[1]);
    let floor_of = |r: &Grade| Grade::scalar(Rational::from_int(floor_int(r.coord(0))));
    let f = DeltaMorphism::from_fn(x.clone(), e.clone(), one.clone(), |r| {
        x.structure_map(r, &floor_of(r).add(&one)?)
    })?;
    let g = DeltaMorphism::from_fn(e, x.clone(), one.clone(), |r| x.structure_map(&floor_of(r), &r.add(&one)?))?;
    Interleaving::new(f, g)
}

/// `(M_c)^*(X)`: the object `r ↦ X(c·r)`, whose grid is that of `x` divided by `c`.
pub fn rescale<C: Category>(x: &PersistentObject<C>, c: &Rational) -> Result<PersistentObject<C>> {
    if !c.is_positive() {
        return Err(Error::InvalidScale(c.clone()));
    }
    let grid: Grid = x.grid().scale(&c.recip()?)?;
    PersistentObject::new(grid, x.objects().to_vec(), x.edge_maps().to_vec())
}

/// Rescales a δ-morphism to a `δ/c`-morphism between the rescaled objects.
/// Components are unchanged: the merged grid scales along with everything else.
pub fn rescale_morphism<C: Category>(
    f: &DeltaMorphism<C>,
    source: Arc<PersistentObject<C>>,
    target: Arc<PersistentObject<C>>,
    c: &Rational,
) -> Result<DeltaMorphism<C>> {
    let shift = f.shift().scale(&c.recip()?)?;
    DeltaMorphism::new(source, target, shift, f.components().to_vec())
}

/// Rescales both objects and both morphisms of a (possibly invalid) certificate.
pub fn rescale_interleaving<C: Category>(cert: &Interleaving<C>, c: &Rational) -> Result<Interleaving<C>> {
    let x = Arc::new(rescale(cert.x(), c)?);
    let y = Arc::new(rescale(cert.y(), c)?);
    let f = rescale_morphism(cert.f(), x.clone(), y.clone(), c)?;
    let g = rescale_morphism(cert.g(), y, x, c)?;
    Interleaving::new(f, g)
}
