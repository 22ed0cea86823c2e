use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::category::{Category, F2Matrix, F2Vec};
use crate::error::{Error, Result};
use crate::persist::PersistentObject;
use crate::Rational;

pub const BARCODE_FORMAT: &str = "barcode/v1";

/// A right endpoint: finite or `inf`. Finite values sort first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(Rational),
    Infinite,
}

impl Death {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Death::Finite(d) => Some(d),
            Death::Infinite => None,
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(d) => d.fmt(f),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Death {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            Ok(Death::Infinite)
        } else {
            s.parse().map(Death::Finite)
        }
    }
}

impl Serialize for Death {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Death {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A half-open interval `[birth, death)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bar {
    pub birth: Rational,
    pub death: Death,
}

impl Bar {
    pub fn new(birth: Rational, death: Death) -> Result<Self> {
        if let Death::Finite(d) = &death {
            if *d <= birth {
                return Err(Error::Parse(format!("empty interval [{birth}, {d})")));
            }
        }
        Ok(Bar { birth, death })
    }

    pub fn finite(birth: i64, death: i64) -> Self {
        Bar::new(Rational::from_int(birth), Death::Finite(Rational::from_int(death))).expect("birth < death")
    }

    pub fn infinite(birth: i64) -> Self {
        Bar { birth: Rational::from_int(birth), death: Death::Infinite }
    }

    /// Length; `None` for an infinite bar.
    pub fn length(&self) -> Option<Rational> {
        self.death.finite().map(|d| d - &self.birth)
    }

    /// Whether `[r, s] ⊆ [birth, death)`.
    pub fn contains_span(&self, r: &Rational, s: &Rational) -> bool {
        self.birth <= *r
            && match &self.death {
                Death::Finite(d) => s < d,
                Death::Infinite => true,
            }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.birth, self.death)
    }
}

/// A finite multiset of bars, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BarcodeDoc", into = "BarcodeDoc")]
pub struct Barcode {
    bars: Vec<Bar>,
}

#[derive(Serialize, Deserialize)]
struct BarcodeDoc {
    #[serde(default = "barcode_format")]
    format: String,
    intervals: Vec<Bar>,
}

fn barcode_format() -> String {
    BARCODE_FORMAT.to_string()
}

impl TryFrom<BarcodeDoc> for Barcode {
    type Error = Error;
    fn try_from(doc: BarcodeDoc) -> Result<Self> {
        if doc.format != BARCODE_FORMAT {
            return Err(Error::Parse(format!("expected format {BARCODE_FORMAT}, found {}", doc.format)));
        }
        let bars = doc.intervals.into_iter().map(|b| Bar::new(b.birth, b.death)).collect::<Result<_>>()?;
        Ok(Barcode::new(bars))
    }
}

impl From<Barcode> for BarcodeDoc {
    fn from(b: Barcode) -> Self {
        BarcodeDoc { format: barcode_format(), intervals: b.bars }
    }
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars containing `[r, s]`.
    pub fn count_containing(&self, r: &Rational, s: &Rational) -> usize {
        self.bars.iter().filter(|b| b.contains_span(r, s)).count()
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bars.iter().map(Bar::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Ranks of `φ_{i,j}` for all grid indices `i <= j`.
fn rank_table(x: &PersistentObject<F2Vec>) -> Vec<Vec<usize>> {
    let n = x.grid().len();
    let mut ranks = vec![vec![0; n]; n];
    for i in 0..n {
        let mut acc = F2Matrix::identity(x.objects()[i]);
        ranks[i][i] = x.objects()[i];
        for j in i + 1..n {
            acc = F2Vec::compose(x.edge(&[j - 1], 0), &acc);
            ranks[i][j] = acc.rank();
        }
    }
    ranks
}

/// The interval decomposition of a one-parameter module, from the ranks of
/// its structure maps: the multiplicity of `[a_i, a_{j+1})` is
/// `r(i,j) - r(i-1,j) - r(i,j+1) + r(i-1,j+1)`.
pub fn barcode(x: &PersistentObject<F2Vec>) -> Result<Barcode> {
    if x.m() != 1 {
        return Err(Error::Unsupported(format!("barcodes need m = 1, found m = {}", x.m())));
    }
    let axis = x.grid().axis(0);
    let n = axis.len();
    let ranks = rank_table(x);
    let r = |i: isize, j: usize| -> isize {
        if i < 0 || j >= n {
            0
        } else {
            ranks[i as usize][j] as isize
        }
    };
    let mut bars = Vec::new();
    for i in 0..n {
        for j in i..n {
            let ii = i as isize;
            let mult = r(ii, j) - r(ii - 1, j) - r(ii, j + 1) + r(ii - 1, j + 1);
            debug_assert!(mult >= 0);
            let death = if j + 1 < n { Death::Finite(axis[j + 1].clone()) } else { Death::Infinite };
            for _ in 0..mult {
                bars.push(Bar { birth: axis[i].clone(), death: death.clone() });
            }
        }
    }
    Ok(Barcode::new(bars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persist::Grid;

    #[test]
    fn zero_and_constant() {
        assert!(barcode(&PersistentObject::initial(1)).unwrap().is_empty());
        let c = PersistentObject::<F2Vec>::constant_from(&crate::Grade::from_ints(&[0]), 1);
        assert_eq!(barcode(&c).unwrap().bars(), &[Bar::infinite(0)]);
    }

    #[test]
    fn rank_formula_on_a_merge() {
        // two classes born at 0 and 1 that merge at 2
        let grid = Grid::new(vec![vec![Rational::from_int(0), Rational::from_int(1), Rational::from_int(2)]]).unwrap();
        let maps = vec![
            F2Matrix::from_rows(2, 1, &[vec![1], vec![0]]).unwrap(),
            F2Matrix::from_rows(1, 2, &[vec![1, 1]]).unwrap(),
        ];
        let x = PersistentObject::<F2Vec>::new(grid, vec![1, 2, 1], vec![maps]).unwrap();
        let b = barcode(&x).unwrap();
        assert_eq!(b.bars(), &[Bar::infinite(0), Bar::finite(1, 2)]);
        assert_eq!(b.count_containing(&Rational::from_int(0), &Rational::from_int(2)), 1);
    }

    #[test]
    fn json_uses_inf() {
        let b = Barcode::new(vec![Bar::finite(0, 1), Bar::infinite(0)]);
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"inf\""));
        assert_eq!(serde_json::from_str::<Barcode>(&s).unwrap(), b);
    }
}
