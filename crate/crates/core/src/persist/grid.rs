use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grades::{Grade, Rational};

/// A finite product of strictly increasing axes. Points are addressed by
/// multi-indices and stored in row-major order (last axis fastest).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rational>>", into = "Vec<Vec<Rational>>")]
pub struct Grid {
    axes: Vec<Vec<Rational>>,
}

impl TryFrom<Vec<Vec<Rational>>> for Grid {
    type Error = Error;
    fn try_from(axes: Vec<Vec<Rational>>) -> Result<Self> {
        Grid::new(axes)
    }
}

impl From<Grid> for Vec<Vec<Rational>> {
    fn from(g: Grid) -> Self {
        g.axes
    }
}

impl Grid {
    pub fn new(axes: Vec<Vec<Rational>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Grid("a grid needs at least one axis".into()));
        }
        for (i, axis) in axes.iter().enumerate() {
            if axis.is_empty() {
                return Err(Error::Grid(format!("axis {i} is empty")));
            }
            if !axis.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Grid(format!("axis {i} is not strictly increasing")));
            }
        }
        Ok(Grid { axes })
    }

    /// One axis of consecutive integers `lo..=hi`.
    pub fn integer_window(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Grid(format!("empty window [{lo}, {hi}]")));
        }
        Grid::new(vec![(lo..=hi).map(Rational::from_int).collect()])
    }

    pub fn m(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<Rational>] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &[Rational] {
        &self.axes[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        flat_index(&self.dims(), idx)
    }

    pub fn unflat(&self, flat: usize) -> Vec<usize> {
        unflat_index(&self.dims(), flat)
    }

    pub fn point(&self, idx: &[usize]) -> Grade {
        Grade::new(idx.iter().zip(&self.axes).map(|(&i, a)| a[i].clone()).collect()).expect("grid has m >= 1")
    }

    /// All multi-indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let dims = self.dims();
        (0..self.len()).map(move |f| unflat_index(&dims, f))
    }

    pub fn points(&self) -> impl Iterator<Item = Grade> + '_ {
        self.indices().map(move |i| self.point(&i))
    }

    /// The top corner (maximum of every axis).
    pub fn top(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len() - 1).collect()
    }

    /// Index of the largest axis value `<= value`, or `None` below the axis.
    pub fn axis_cell(&self, axis: usize, value: &Rational) -> Option<usize> {
        let n = self.axes[axis].partition_point(|a| a <= value);
        n.checked_sub(1)
    }

    /// The grid cell containing `r`: per axis, the largest grid value `<= r`.
    /// `None` if `r` lies below the grid along some axis.
    pub fn cell(&self, r: &Grade) -> Result<Option<Vec<usize>>> {
        if r.m() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: r.m() });
        }
        Ok((0..self.m()).map(|i| self.axis_cell(i, r.coord(i))).collect())
    }

    /// Every axis translated by `offset` (coordinatewise addition).
    pub fn translate(&self, offset: &Grade) -> Result<Grid> {
        if offset.m() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: offset.m() });
        }
        Ok(Grid {
            axes: self.axes.iter().zip(offset.coords()).map(|(a, o)| a.iter().map(|v| v + o).collect()).collect(),
        })
    }

    /// Every axis multiplied by a positive factor.
    pub fn scale(&self, c: &Rational) -> Result<Grid> {
        if !c.is_positive() {
            return Err(Error::InvalidScale(c.clone()));
        }
        Ok(Grid { axes: self.axes.iter().map(|a| a.iter().map(|v| v * c).collect()).collect() })
    }

    /// Common refinement: the sorted union of each pair of axes.
    pub fn merge(&self, other: &Grid) -> Result<Grid> {
        if other.m() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: other.m() });
        }
        let axes = self
            .axes
            .iter()
            .zip(&other.axes)
            .map(|(a, b)| {
                let mut v: Vec<Rational> = a.iter().chain(b).cloned().collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        Ok(Grid { axes })
    }

    /// `Some((lo, hi))` when this is a single axis of consecutive integers.
    pub fn as_integer_window(&self) -> Option<(i64, i64)> {
        if self.m() != 1 {
            return None;
        }
        let axis = &self.axes[0];
        if !axis.iter().all(Rational::is_integer) {
            return None;
        }
        let lo = crate::grades::floor_int(&axis[0]);
        let consecutive = axis.iter().enumerate().all(|(i, v)| *v == Rational::from_int(lo + i as i64));
        consecutive.then(|| (lo, lo + axis.len() as i64 - 1))
    }
}

pub(crate) fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&i, &d)| {
        debug_assert!(i < d);
        acc * d + i
    })
}

pub(crate) fn unflat_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (slot, &d) in idx.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    #[test]
    fn cells_and_boundaries() {
        let g = Grid::new(vec![vec![r(0, 1), r(1, 1)]]).unwrap();
        assert_eq!(g.cell(&Grade::scalar(r(1, 2))).unwrap(), Some(vec![0]));
        assert_eq!(g.cell(&Grade::scalar(r(-1, 1))).unwrap(), None);
        assert_eq!(g.cell(&Grade::scalar(r(100, 1))).unwrap(), Some(vec![1]));
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(Grid::new(vec![]).is_err());
        assert!(Grid::new(vec![vec![]]).is_err());
        assert!(Grid::new(vec![vec![r(1, 1), r(1, 1)]]).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let g = Grid::new(vec![vec![r(0, 1), r(1, 1), r(2, 1)], vec![r(0, 1), r(5, 1)]]).unwrap();
        for (f, idx) in g.indices().enumerate() {
            assert_eq!(g.flat(&idx), f);
        }
        assert_eq!(g.unflat(3), vec![1, 1]);
    }

    #[test]
    fn integer_windows() {
        let g = Grid::integer_window(-2, 3).unwrap();
        assert_eq!(g.as_integer_window(), Some((-2, 3)));
        let h = Grid::new(vec![vec![r(0, 1), r(2, 1)]]).unwrap();
        assert_eq!(h.as_integer_window(), None);
    }
}
