use std::borrow::Cow;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::grid::{flat_index, Grid};
use crate::category::{Category, CategoryTag};
use crate::error::{Error, Result};
use crate::grades::{Grade, Rational};

pub const OBJECT_FORMAT: &str = "persistent-object/v1";

/// A persistent object presented on a finite grid.
///
/// The value at `r` is the object stored at the largest grid point below `r`
/// (coordinatewise), the initial object if `r` lies below the grid along some
/// axis, and constant above each axis maximum. Structure maps are stored for
/// every elementary edge `p -> p + e_axis`; for `m >= 2` every elementary
/// square commutes.
#[derive(Clone, Debug)]
pub struct PersistentObject<C: Category> {
    grid: Grid,
    objects: Vec<C::Obj>,
    edge_maps: Vec<Vec<C::Map>>,
}

impl<C: Category> PartialEq for PersistentObject<C> {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.objects == other.objects && self.edge_maps == other.edge_maps
    }
}

impl<C: Category> Eq for PersistentObject<C> {}

fn edge_dims(dims: &[usize], axis: usize) -> Vec<usize> {
    let mut d = dims.to_vec();
    d[axis] = d[axis].saturating_sub(1);
    d
}

impl<C: Category> PersistentObject<C> {
    /// Builds an object from row-major objects and per-axis edge maps,
    /// checking map types and that every elementary square commutes.
    pub fn new(grid: Grid, objects: Vec<C::Obj>, edge_maps: Vec<Vec<C::Map>>) -> Result<Self> {
        if objects.len() != grid.len() {
            return Err(Error::Object(format!("{} objects for {} grid points", objects.len(), grid.len())));
        }
        if edge_maps.len() != grid.m() {
            return Err(Error::Object(format!("{} edge-map lists for m = {}", edge_maps.len(), grid.m())));
        }
        let dims = grid.dims();
        for (a, maps) in edge_maps.iter().enumerate() {
            let expected: usize = edge_dims(&dims, a).iter().product();
            if maps.len() != expected {
                return Err(Error::Object(format!("axis {a}: {} edge maps, expected {expected}", maps.len())));
            }
        }
        let x = PersistentObject { grid, objects, edge_maps };
        x.check_edges()?;
        x.check_squares()?;
        Ok(x)
    }

    /// Builds an object by evaluating closures at every grid index and edge.
    pub fn from_fn(
        grid: Grid,
        mut object: impl FnMut(&[usize]) -> Result<C::Obj>,
        mut edge: impl FnMut(&[usize], usize) -> Result<C::Map>,
    ) -> Result<Self> {
        let objects = grid.indices().map(|i| object(&i)).collect::<Result<Vec<_>>>()?;
        let dims = grid.dims();
        let mut edge_maps = Vec::with_capacity(grid.m());
        for a in 0..grid.m() {
            let ed = edge_dims(&dims, a);
            let n: usize = ed.iter().product();
            let maps = (0..n)
                .map(|f| edge(&super::grid::unflat_index(&ed, f), a))
                .collect::<Result<Vec<_>>>()?;
            edge_maps.push(maps);
        }
        Self::new(grid, objects, edge_maps)
    }

    /// A `Z`-indexed object on the window `lo..=hi`; `maps[i]` goes from
    /// `objects[i]` to `objects[i + 1]`.
    pub fn on_window(lo: i64, objects: Vec<C::Obj>, maps: Vec<C::Map>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Object("a window needs at least one object".into()));
        }
        let grid = Grid::integer_window(lo, lo + objects.len() as i64 - 1)?;
        Self::new(grid, objects, vec![maps])
    }

    /// The object that is initial everywhere.
    pub fn initial(m: usize) -> Self {
        let grid = Grid::new(vec![vec![Rational::zero()]; m]).expect("m >= 1");
        PersistentObject { grid, objects: vec![C::initial()], edge_maps: vec![Vec::new(); m] }
    }

    /// The object equal to `obj` at every grade `>= from`.
    pub fn constant_from(from: &Grade, obj: C::Obj) -> Self {
        let grid = Grid::new(from.coords().iter().map(|c| vec![c.clone()]).collect()).expect("m >= 1");
        PersistentObject { grid, objects: vec![obj], edge_maps: vec![Vec::new(); from.m()] }
    }

    fn check_edges(&self) -> Result<()> {
        for idx in self.grid.indices() {
            for a in 0..self.m() {
                if let Some(next) = self.successor(&idx, a) {
                    C::check_map(self.edge(&idx, a), self.object_at(&idx), self.object_at(&next))
                        .map_err(|e| Error::MapType(format!("edge {idx:?} along axis {a}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    fn check_squares(&self) -> Result<()> {
        for idx in self.grid.indices() {
            for a in 0..self.m() {
                for b in a + 1..self.m() {
                    let (Some(pa), Some(pb)) = (self.successor(&idx, a), self.successor(&idx, b)) else {
                        continue;
                    };
                    let via_a = C::compose(self.edge(&pa, b), self.edge(&idx, a));
                    let via_b = C::compose(self.edge(&pb, a), self.edge(&idx, b));
                    if via_a != via_b {
                        return Err(Error::NotFunctorial(format!(
                            "square at {} spanned by axes {a} and {b}",
                            self.grid.point(&idx)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> CategoryTag {
        C::TAG
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.grid.m()
    }

    pub fn objects(&self) -> &[C::Obj] {
        &self.objects
    }

    pub fn object_at(&self, idx: &[usize]) -> &C::Obj {
        &self.objects[self.grid.flat(idx)]
    }

    fn successor(&self, idx: &[usize], axis: usize) -> Option<Vec<usize>> {
        let mut next = idx.to_vec();
        next[axis] += 1;
        (next[axis] < self.grid.axis(axis).len()).then_some(next)
    }

    /// The structure map `idx -> idx + e_axis`. Panics at the top of the axis.
    pub fn edge(&self, idx: &[usize], axis: usize) -> &C::Map {
        let ed = edge_dims(&self.grid.dims(), axis);
        &self.edge_maps[axis][flat_index(&ed, idx)]
    }

    pub fn edge_maps(&self) -> &[Vec<C::Map>] {
        &self.edge_maps
    }

    /// Value at an arbitrary grade.
    pub fn evaluate(&self, r: &Grade) -> Result<Cow<'_, C::Obj>> {
        Ok(match self.grid.cell(r)? {
            Some(idx) => Cow::Borrowed(self.object_at(&idx)),
            None => Cow::Owned(C::initial()),
        })
    }

    /// Structure map between grid cells, composing edge maps along a
    /// monotone path (axis 0 first). `None` stands for the region below the grid.
    pub fn map_between_cells(&self, from: Option<&[usize]>, to: &[usize]) -> C::Map {
        let Some(from) = from else {
            return C::from_initial(self.object_at(to));
        };
        let mut cur = from.to_vec();
        let mut acc = C::identity(self.object_at(&cur));
        for a in 0..self.m() {
            while cur[a] < to[a] {
                acc = C::compose(self.edge(&cur, a), &acc);
                cur[a] += 1;
            }
        }
        acc
    }

    /// `φ_{r,s}` for `r <= s`.
    pub fn structure_map(&self, r: &Grade, s: &Grade) -> Result<C::Map> {
        if !r.leq(s)? {
            return Err(Error::Order(r.clone(), s.clone()));
        }
        let to = match self.grid.cell(s)? {
            Some(to) => to,
            None => return Ok(C::identity(&C::initial())),
        };
        let from = self.grid.cell(r)?;
        Ok(self.map_between_cells(from.as_deref(), &to))
    }

    /// Whether every structure map is a monomorphism.
    pub fn is_monic(&self) -> bool {
        self.edge_maps.iter().flatten().all(C::is_mono)
    }

    /// `X^δ(r) = X(r + δ)`: the grid moves by `-δ`, data is unchanged.
    pub fn shift_left(&self, delta: &Grade) -> Result<Self> {
        if delta.m() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: delta.m() });
        }
        if !delta.is_nonnegative() {
            return Err(Error::NegativeShift(delta.clone()));
        }
        let neg = Grade::zero(self.m()).sub(delta)?;
        Ok(PersistentObject { grid: self.grid.translate(&neg)?, objects: self.objects.clone(), edge_maps: self.edge_maps.clone() })
    }

    /// The same data presented on another grid, by evaluation at its points.
    /// Structure maps are the composites of the original ones.
    pub fn resample(&self, grid: Grid) -> Result<Self> {
        if grid.m() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: grid.m() });
        }
        let cells: Vec<Option<Vec<usize>>> = grid.points().map(|p| self.grid.cell(&p)).collect::<Result<_>>()?;
        let cell_of = |idx: &[usize]| cells[grid.flat(idx)].clone();
        Self::from_fn(
            grid.clone(),
            |idx| Ok(cell_of(idx).map(|c| self.object_at(&c).clone()).unwrap_or_else(C::initial)),
            |idx, a| {
                let mut next = idx.to_vec();
                next[a] += 1;
                let from = cell_of(idx);
                Ok(match cell_of(&next) {
                    Some(to) => self.map_between_cells(from.as_deref(), &to),
                    None => C::identity(&C::initial()),
                })
            },
        )
    }

    /// For a `Z`-indexed object, the integer window it is stored on.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.grid.as_integer_window()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
struct ObjectDoc<C: Category> {
    format: String,
    category: CategoryTag,
    m: usize,
    axes: Grid,
    objects: Vec<C::Obj>,
    edge_maps: Vec<Vec<C::Map>>,
}

impl<C: Category> Serialize for PersistentObject<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ObjectDoc::<C> {
            format: OBJECT_FORMAT.into(),
            category: C::TAG,
            m: self.m(),
            axes: self.grid.clone(),
            objects: self.objects.clone(),
            edge_maps: self.edge_maps.clone(),
        }
        .serialize(s)
    }
}

impl<'de, C: Category> Deserialize<'de> for PersistentObject<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ObjectDoc::<C>::deserialize(d)?;
        if doc.format != OBJECT_FORMAT {
            return Err(D::Error::custom(format!("unsupported format {:?}", doc.format)));
        }
        if doc.category != C::TAG {
            return Err(D::Error::custom(format!("expected category {}, found {}", C::TAG, doc.category)));
        }
        if doc.m != doc.axes.m() {
            return Err(D::Error::custom(format!("m = {} but {} axes", doc.m, doc.axes.m())));
        }
        PersistentObject::new(doc.axes, doc.objects, doc.edge_maps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{F2Matrix, F2Vec, FinMap, FinSet};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    /// `{a}` at 0 growing to `{a, b}` at 1.
    fn two_step() -> PersistentObject<FinSet> {
        let grid = Grid::new(vec![vec![q(0, 1), q(1, 1)]]).unwrap();
        PersistentObject::new(grid, vec![1, 2], vec![vec![FinMap::new(2, vec![0]).unwrap()]]).unwrap()
    }

    #[test]
    fn evaluation_semantics() {
        let x = two_step();
        assert_eq!(*x.evaluate(&Grade::scalar(q(1, 2))).unwrap(), 1);
        assert_eq!(*x.evaluate(&Grade::scalar(q(-1, 1))).unwrap(), 0);
        assert_eq!(*x.evaluate(&Grade::scalar(q(100, 1))).unwrap(), 2);
    }

    #[test]
    fn structure_maps() {
        let x = two_step();
        let r = Grade::scalar(q(1, 3));
        assert_eq!(x.structure_map(&r, &r).unwrap(), FinSet::identity(&1));
        let inc = x.structure_map(&Grade::from_ints(&[0]), &Grade::from_ints(&[1])).unwrap();
        assert_eq!(inc, FinMap::new(2, vec![0]).unwrap());
        assert!(matches!(
            x.structure_map(&Grade::from_ints(&[1]), &Grade::from_ints(&[0])),
            Err(Error::Order(..))
        ));
        let from_below = x.structure_map(&Grade::from_ints(&[-5]), &Grade::from_ints(&[3])).unwrap();
        assert_eq!(from_below, FinSet::from_initial(&2));
    }

    #[test]
    fn shift_left_translates_axes() {
        let x = two_step();
        let y = x.shift_left(&Grade::scalar(q(1, 2))).unwrap();
        assert_eq!(y.grid().axis(0), &[q(-1, 2), q(1, 2)]);
        assert_eq!(x.shift_left(&Grade::zero(1)).unwrap(), x);
        assert!(matches!(x.shift_left(&Grade::from_ints(&[-1])), Err(Error::NegativeShift(_))));
        for k in -4..8 {
            let r = Grade::scalar(q(k, 3));
            let shifted = r.add(&Grade::scalar(q(1, 2))).unwrap();
            assert_eq!(y.evaluate(&r).unwrap(), x.evaluate(&shifted).unwrap());
        }
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        // F2 on a 2x2 grid: the two composites (0,0)->(1,1) differ
        let grid = Grid::new(vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        let id = F2Matrix::identity(1);
        let zero = F2Matrix::zero(1, 1);
        let res = PersistentObject::<F2Vec>::new(grid, vec![1, 1, 1, 1], vec![vec![id.clone(), zero], vec![id.clone(), id]]);
        assert!(matches!(res, Err(Error::NotFunctorial(_))));
    }

    #[test]
    fn json_roundtrip() {
        let x = two_step();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains(r#""format":"persistent-object/v1""#));
        assert!(s.contains(r#""category":"FinSet""#));
        let back: PersistentObject<FinSet> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<PersistentObject<F2Vec>>(&s).is_err());
    }

    #[test]
    fn resample_preserves_values() {
        let x = two_step();
        let fine = Grid::new(vec![vec![q(-1, 1), q(0, 1), q(1, 2), q(1, 1), q(2, 1)]]).unwrap();
        let y = x.resample(fine).unwrap();
        for k in -6..10 {
            let r = Grade::scalar(q(k, 4));
            assert_eq!(y.evaluate(&r).unwrap(), x.evaluate(&r).unwrap());
        }
        assert_eq!(
            y.structure_map(&Grade::from_ints(&[0]), &Grade::from_ints(&[2])).unwrap(),
            x.structure_map(&Grade::from_ints(&[0]), &Grade::from_ints(&[2])).unwrap()
        );
    }
}
