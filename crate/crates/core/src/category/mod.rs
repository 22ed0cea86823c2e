//! Concrete target categories for persistent objects.
//!
//! A persistent object is a grid of objects of one of these categories, joined
//! by structure maps. Every category supplies identities, composition,
//! equality, an initial object and a typing check for maps; finite sets and
//! F2-vector spaces additionally support hom-set enumeration and pullbacks.

use std::fmt::{self, Debug};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;

mod complex;
mod f2vec;
mod finset;

pub use complex::{boundary_faces, Complex, Simplex, SimplicialComplex, SimplicialMap, Vertex};
pub use f2vec::{F2Matrix, F2Vec, F2Vector, Reducer};
pub use finset::{FinMap, FinSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CategoryTag {
    FinSet,
    F2Vec,
    Complex,
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CategoryTag::FinSet => "FinSet",
            CategoryTag::F2Vec => "F2Vec",
            CategoryTag::Complex => "Complex",
        };
        f.write_str(s)
    }
}

pub trait Category: Sized + Copy + Debug + Default + Send + Sync + 'static {
    type Obj: Clone + PartialEq + Eq + Debug + Send + Sync + Serialize + DeserializeOwned;
    type Map: Clone + PartialEq + Eq + Debug + Send + Sync + Serialize + DeserializeOwned;

    const TAG: CategoryTag;

    fn initial() -> Self::Obj;

    /// The unique map out of the initial object.
    fn from_initial(target: &Self::Obj) -> Self::Map;

    fn identity(obj: &Self::Obj) -> Self::Map;

    /// `outer ∘ inner`.
    fn compose(outer: &Self::Map, inner: &Self::Map) -> Self::Map;

    /// Checks that `map` is a well-typed arrow `source -> target`.
    fn check_map(map: &Self::Map, source: &Self::Obj, target: &Self::Obj) -> Result<()>;

    /// Whether the map is a monomorphism.
    fn is_mono(map: &Self::Map) -> bool;
}

/// Categories whose finite hom-sets can be listed.
pub trait Enumerable: Category {
    /// Number of arrows `source -> target`, saturating at `u128::MAX`.
    fn hom_size(source: &Self::Obj, target: &Self::Obj) -> u128;

    /// All arrows `source -> target` in a fixed deterministic order.
    fn all_maps(source: &Self::Obj, target: &Self::Obj) -> Vec<Self::Map>;
}

/// A chosen pullback `apex = x ×_y b` with its two projections.
#[derive(Clone, Debug)]
pub struct PullbackCone<C: Pullbacks> {
    pub apex: C::Obj,
    pub to_x: C::Map,
    pub to_b: C::Map,
    pub data: C::ConeData,
}

pub trait Pullbacks: Category {
    type ConeData: Clone + Debug;

    /// Pullback of `f: x -> y` along `h: b -> y`.
    fn pullback(f: &Self::Map, h: &Self::Map, x: &Self::Obj, b: &Self::Obj) -> PullbackCone<Self>;

    /// The map `t -> apex` induced by `u: t -> x` and `v: t -> b` with
    /// `f ∘ u = h ∘ v`. Errors if the pair does not land in the fiber product.
    fn lift(cone: &PullbackCone<Self>, u: &Self::Map, v: &Self::Map, t: &Self::Obj) -> Result<Self::Map>;
}
