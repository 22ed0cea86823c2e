//! Filtered simplicial complexes and the persistent complexes they generate.
//!
//! A filtered complex assigns a grade to every simplex, monotonically along
//! faces. Its sublevel complexes form a persistent complex whose structure
//! maps are inclusions. Conversely, [`is_filtered`] decides whether an
//! arbitrary persistent complex arises this way: all structure maps must be
//! injective, and every simplex must have a least grade of appearance.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::category::{boundary_faces, Category, Complex, Simplex, SimplicialComplex, SimplicialMap, Vertex};
use crate::error::{Error, Result};
use crate::grades::{Grade, Rational};
use crate::persist::{DeltaMorphism, Grid, Interleaving, PersistentObject};

pub const FILTERED_FORMAT: &str = "filtered-complex/v1";

/// A simplex together with its grade of appearance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSimplex {
    pub v: Simplex,
    pub grade: Grade,
}

/// A finite simplicial complex with a grade `β(σ) ∈ Q^m` on every simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FilteredDoc", into = "FilteredDoc")]
pub struct FilteredComplex {
    m: usize,
    vertices: Vec<Vertex>,
    grades: BTreeMap<Simplex, Grade>,
}

#[derive(Serialize, Deserialize)]
struct FilteredDoc {
    #[serde(default = "filtered_format")]
    format: String,
    m: usize,
    vertices: Vec<Vertex>,
    simplices: Vec<GradedSimplex>,
}

fn filtered_format() -> String {
    FILTERED_FORMAT.to_string()
}

impl TryFrom<FilteredDoc> for FilteredComplex {
    type Error = Error;
    fn try_from(doc: FilteredDoc) -> Result<Self> {
        if doc.format != FILTERED_FORMAT {
            return Err(Error::Parse(format!("expected format {FILTERED_FORMAT}, found {}", doc.format)));
        }
        FilteredComplex::new(doc.m, doc.vertices, doc.simplices)
    }
}

impl From<FilteredComplex> for FilteredDoc {
    fn from(f: FilteredComplex) -> Self {
        let simplices = f.graded_simplices();
        FilteredDoc { format: filtered_format(), m: f.m, vertices: f.vertices, simplices }
    }
}

/// The first problem found by [`FilteredComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiltrationViolation {
    MissingFace { simplex: Simplex, face: Simplex },
    NotMonotone { simplex: Simplex, face: Simplex, simplex_grade: Grade, face_grade: Grade },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violation: Option<FiltrationViolation>,
}

impl FilteredComplex {
    /// Builds a filtered complex. Structural problems (unsorted simplices,
    /// unknown vertices, grades of the wrong length, duplicates) are errors;
    /// face closure and monotonicity are left to [`Self::validate`].
    pub fn new(m: usize, vertices: Vec<Vertex>, simplices: Vec<GradedSimplex>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidComplex("m must be at least 1".into()));
        }
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidComplex("vertices must be strictly ascending".into()));
        }
        let known: BTreeSet<Vertex> = vertices.iter().copied().collect();
        let mut grades = BTreeMap::new();
        for GradedSimplex { v, grade } in simplices {
            if v.is_empty() || !v.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidComplex(format!("simplex {v:?} is not a nonempty ascending tuple")));
            }
            if let Some(u) = v.iter().find(|u| !known.contains(u)) {
                return Err(Error::InvalidComplex(format!("simplex {v:?} uses unlisted vertex {u}")));
            }
            if grade.m() != m {
                return Err(Error::Dimension { expected: m, found: grade.m() });
            }
            if grades.insert(v.clone(), grade).is_some() {
                return Err(Error::InvalidComplex(format!("simplex {v:?} listed twice")));
            }
        }
        Ok(FilteredComplex { m, vertices, grades })
    }

    /// Builds from `(simplex, grade)` pairs, listing every vertex that occurs.
    pub fn from_grades(m: usize, grades: impl IntoIterator<Item = (Simplex, Grade)>) -> Result<Self> {
        let simplices: Vec<GradedSimplex> = grades.into_iter().map(|(v, grade)| GradedSimplex { v, grade }).collect();
        let vertices = simplices.iter().flat_map(|s| s.v.iter().copied()).sorted().dedup().collect();
        Self::new(m, vertices, simplices)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade(&self, s: &[Vertex]) -> Option<&Grade> {
        self.grades.get(s)
    }

    pub fn grades(&self) -> &BTreeMap<Simplex, Grade> {
        &self.grades
    }

    /// Simplices ordered by dimension, then lexicographically.
    pub fn graded_simplices(&self) -> Vec<GradedSimplex> {
        self.grades
            .iter()
            .sorted_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)))
            .map(|(v, g)| GradedSimplex { v: v.clone(), grade: g.clone() })
            .collect()
    }

    /// Checks face closure and `β(face) <= β(σ)`; reports the first violation
    /// in dimension-then-lexicographic order.
    pub fn validate(&self) -> ValidationReport {
        for GradedSimplex { v, grade } in self.graded_simplices() {
            for face in boundary_faces(&v) {
                let violation = match self.grades.get(&face) {
                    None => Some(FiltrationViolation::MissingFace { simplex: v.clone(), face }),
                    Some(fg) if !fg.leq(&grade).unwrap_or(false) => Some(FiltrationViolation::NotMonotone {
                        simplex: v.clone(),
                        face,
                        simplex_grade: grade.clone(),
                        face_grade: fg.clone(),
                    }),
                    Some(_) => None,
                };
                if violation.is_some() {
                    return ValidationReport { valid: false, violation };
                }
            }
        }
        ValidationReport { valid: true, violation: None }
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate().violation {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!("{v:?}"))),
        }
    }

    /// Maximum simplex dimension; `-1` when there are no simplices.
    pub fn dimension(&self) -> i64 {
        self.grades.keys().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn is_n_skeletal(&self, n: usize) -> bool {
        self.dimension() <= n as i64
    }

    /// Number of cell-attachment stages when simplices are attached in order
    /// of dimension: one stage per dimension `1..=d` after the vertices, so
    /// the complex is `d`-cofibrant.
    pub fn cofibrant_dimension(&self) -> i64 {
        self.dimension()
    }

    /// Simplices of dimension at most `n`, with their grades.
    pub fn skeleton(&self, n: usize) -> FilteredComplex {
        FilteredComplex {
            m: self.m,
            vertices: self.vertices.clone(),
            grades: self.grades.iter().filter(|(s, _)| s.len() <= n + 1).map(|(s, g)| (s.clone(), g.clone())).collect(),
        }
    }

    /// The sublevel complex `{σ : β(σ) <= r}`.
    pub fn sublevel(&self, r: &Grade) -> Result<SimplicialComplex> {
        let mut keep = Vec::new();
        for (s, g) in &self.grades {
            if g.leq(r)? {
                keep.push(s.clone());
            }
        }
        SimplicialComplex::new(keep)
    }

    /// The persistent complex `r ↦ {σ : β(σ) <= r}` on the grid of distinct
    /// grade coordinates, with inclusions as structure maps.
    pub fn to_persistent(&self) -> Result<PersistentObject<Complex>> {
        self.require_valid()?;
        let axes = (0..self.m)
            .map(|a| {
                let mut axis: Vec<Rational> = self.grades.values().map(|g| g.coord(a).clone()).collect();
                axis.sort();
                axis.dedup();
                if axis.is_empty() {
                    axis.push(Rational::zero());
                }
                axis
            })
            .collect();
        let grid = Grid::new(axes)?;
        let complexes: Vec<SimplicialComplex> = grid.points().map(|p| self.sublevel(&p)).collect::<Result<_>>()?;
        PersistentObject::from_fn(
            grid.clone(),
            |idx| Ok(complexes[grid.flat(idx)].clone()),
            |idx, _| Ok(SimplicialMap::inclusion(&complexes[grid.flat(idx)])),
        )
    }
}

/// Outcome of [`is_filtered`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredReport {
    pub filtered: bool,
    /// 1: some structure map is not injective; 2: some simplex has no least grade.
    pub condition: Option<u8>,
    pub simplex: Option<Simplex>,
    pub grade: Option<Grade>,
    pub detail: Option<String>,
    /// On success, the grades of appearance, in the vertex labels of the top grid point.
    pub witness: Option<FilteredComplex>,
}

impl FilteredReport {
    fn failure(condition: u8, simplex: Simplex, grade: Grade, detail: String) -> Self {
        FilteredReport {
            filtered: false,
            condition: Some(condition),
            simplex: Some(simplex),
            grade: Some(grade),
            detail: Some(detail),
            witness: None,
        }
    }
}

/// Decides whether a persistent complex is generated by a filtered complex.
///
/// Condition 1: every structure map is injective on simplices. Condition 2:
/// identifying simplices through the structure maps into the top grid point,
/// every simplex appears on a set of grid points with a least element.
pub fn is_filtered(x: &PersistentObject<Complex>) -> Result<FilteredReport> {
    let grid = x.grid();
    for idx in grid.indices() {
        for a in 0..grid.m() {
            if idx[a] + 1 >= grid.axis(a).len() {
                continue;
            }
            let map = x.edge(&idx, a);
            if !Complex::is_mono(map) {
                let mut seen: HashMap<Vertex, Vertex> = HashMap::new();
                let (u, v) = map
                    .vertex_map
                    .iter()
                    .find_map(|(&v, &w)| seen.insert(w, v).map(|u| (u, v)))
                    .expect("a non-injective map has a collision");
                return Ok(FilteredReport::failure(
                    1,
                    vec![v],
                    grid.point(&idx),
                    format!("vertices {u} and {v} are identified along axis {a}"),
                ));
            }
        }
    }

    // Appearance sets, in the labels of the top complex.
    let top = grid.top();
    let mut appearance: BTreeMap<Simplex, Vec<Vec<usize>>> = BTreeMap::new();
    for idx in grid.indices() {
        let to_top = x.map_between_cells(Some(&idx), &top);
        for s in x.object_at(&idx).simplices() {
            appearance.entry(to_top.image(s)).or_default().push(idx.clone());
        }
    }
    let mut grades = Vec::with_capacity(appearance.len());
    for (s, points) in appearance {
        let meet: Vec<usize> = (0..grid.m()).map(|a| points.iter().map(|p| p[a]).min().unwrap_or(0)).collect();
        let present: HashSet<&Vec<usize>> = points.iter().collect();
        if !present.contains(&meet) {
            let minimal: Vec<String> = points
                .iter()
                .filter(|p| !points.iter().any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b)))
                .map(|p| grid.point(p).to_string())
                .collect();
            return Ok(FilteredReport::failure(
                2,
                s,
                grid.point(&meet),
                format!("appearance set has a minimum: fails, minimal grades are {}", minimal.join(", ")),
            ));
        }
        grades.push((s, grid.point(&meet)));
    }
    let witness = FilteredComplex::from_grades(grid.m(), grades)?;
    Ok(FilteredReport { filtered: true, condition: None, simplex: None, grade: None, detail: None, witness: Some(witness) })
}

/// A symmetric rational dissimilarity matrix with optional vertex values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MetricDoc", into = "MetricDoc")]
pub struct MetricInput {
    matrix: Vec<Vec<Rational>>,
    values: Option<Vec<Rational>>,
}

pub const METRIC_FORMAT: &str = "metric/v1";

#[derive(Serialize, Deserialize)]
struct MetricDoc {
    #[serde(default = "metric_format")]
    format: String,
    matrix: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Rational>>,
}

fn metric_format() -> String {
    METRIC_FORMAT.to_string()
}

impl TryFrom<MetricDoc> for MetricInput {
    type Error = Error;
    fn try_from(doc: MetricDoc) -> Result<Self> {
        if doc.format != METRIC_FORMAT {
            return Err(Error::Parse(format!("expected format {METRIC_FORMAT}, found {}", doc.format)));
        }
        MetricInput::new(doc.matrix, doc.values)
    }
}

impl From<MetricInput> for MetricDoc {
    fn from(m: MetricInput) -> Self {
        MetricDoc { format: metric_format(), matrix: m.matrix, values: m.values }
    }
}

impl MetricInput {
    /// Checks squareness, symmetry, a zero diagonal and nonnegative entries.
    /// The triangle inequality is not required.
    pub fn new(matrix: Vec<Vec<Rational>>, values: Option<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidComplex(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if !row[i].is_zero() {
                return Err(Error::InvalidComplex(format!("diagonal entry {i} is {}", row[i])));
            }
            for (j, d) in row.iter().enumerate() {
                if d.is_negative() {
                    return Err(Error::InvalidComplex(format!("entry ({i}, {j}) is negative")));
                }
                if *d != matrix[j][i] {
                    return Err(Error::InvalidComplex(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        if let Some(v) = &values {
            if v.len() != n {
                return Err(Error::InvalidComplex(format!("{} function values for {n} points", v.len())));
            }
        }
        Ok(MetricInput { matrix, values })
    }

    fn from_coordinates(points: &[Vec<Rational>], norm: impl Fn(&[Rational]) -> Rational) -> Result<Self> {
        let matrix = points
            .iter()
            .map(|p| {
                points
                    .iter()
                    .map(|q| {
                        if p.len() != q.len() {
                            return Err(Error::Dimension { expected: p.len(), found: q.len() });
                        }
                        Ok(norm(&p.iter().zip(q).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrix, None)
    }

    /// L1 distances between rational coordinate vectors.
    pub fn l1(points: &[Vec<Rational>]) -> Result<Self> {
        Self::from_coordinates(points, |d| d.iter().fold(Rational::zero(), |acc, x| &acc + x))
    }

    /// L∞ distances between rational coordinate vectors.
    pub fn linf(points: &[Vec<Rational>]) -> Result<Self> {
        Self::from_coordinates(points, |d| d.iter().fold(Rational::zero(), |acc, x| acc.max(x.clone())))
    }

    pub fn with_values(mut self, values: Vec<Rational>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::InvalidComplex(format!("{} function values for {} points", values.len(), self.len())));
        }
        self.values = Some(values);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn values(&self) -> Option<&[Rational]> {
        self.values.as_deref()
    }

    /// Largest pairwise dissimilarity within `s`; zero for a vertex.
    pub fn diameter(&self, s: &[Vertex]) -> Rational {
        s.iter()
            .tuple_combinations()
            .map(|(&a, &b)| self.matrix[a][b].clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Distinct dissimilarities, including zero, in increasing order.
    pub fn scales(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.matrix.iter().flatten().cloned().chain([Rational::zero()]).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Vertex subsets with at most `d_max + 1` elements.
    fn simplices(&self, d_max: usize) -> impl Iterator<Item = Simplex> + '_ {
        (1..=(d_max + 1).min(self.len())).flat_map(move |k| (0..self.len()).combinations(k))
    }
}

/// The Vietoris–Rips filtration up to dimension `d_max`: each simplex
/// enters at its diameter.
pub fn vietoris_rips(metric: &MetricInput, d_max: usize) -> Result<FilteredComplex> {
    FilteredComplex::from_grades(1, metric.simplices(d_max).map(|s| {
        let g = Grade::scalar(metric.diameter(&s));
        (s, g)
    }))
}

/// The function-Rips bifiltration: grade `(diam σ, max_{v ∈ σ} f(v))`.
pub fn function_rips(metric: &MetricInput, d_max: usize) -> Result<FilteredComplex> {
    let values = metric.values().ok_or_else(|| Error::Precondition("function-Rips needs vertex values".into()))?;
    FilteredComplex::from_grades(
        2,
        metric.simplices(d_max).map(|s| {
            let f = s.iter().map(|&v| values[v].clone()).max().expect("simplices are nonempty");
            let g = Grade::new(vec![metric.diameter(&s), f]).expect("two coordinates");
            (s, g)
        }),
    )
}

/// The degree-Rips persistent complex. At `(r, -k)` it is the Rips complex
/// at scale `r` restricted to the vertices with at least `k` neighbours
/// within distance `r`; the second axis is negated so both axes increase.
pub fn degree_rips(metric: &MetricInput, d_max: usize) -> Result<PersistentObject<Complex>> {
    let n = metric.len() as i64;
    let scales = metric.scales();
    let degrees: Vec<Rational> = (-(n - 1).max(0)..=0).map(Rational::from_int).collect();
    let grid = Grid::new(vec![scales.clone(), degrees])?;
    let rips: Vec<SimplicialComplex> = scales
        .iter()
        .map(|r| SimplicialComplex::new(metric.simplices(d_max).filter(|s| metric.diameter(s) <= *r)))
        .collect::<Result<_>>()?;
    let complexes: Vec<SimplicialComplex> = grid
        .indices()
        .map(|idx| {
            let r = &scales[idx[0]];
            let k = (grid.axis(1).len() - 1 - idx[1]) as usize;
            let keep: BTreeSet<Vertex> = (0..metric.len())
                .filter(|&v| (0..metric.len()).filter(|&u| u != v && metric.distance(u, v) <= r).count() >= k)
                .collect();
            rips[idx[0]].induced(&keep)
        })
        .collect();
    PersistentObject::from_fn(
        grid.clone(),
        |idx| Ok(complexes[grid.flat(idx)].clone()),
        |idx, _| Ok(SimplicialMap::inclusion(&complexes[grid.flat(idx)])),
    )
}

/// The interleaving of two persistent complexes on the same vertex set
/// whose components are all the identity on vertices, e.g. Rips complexes of
/// two metrics on one point set that differ by at most `ε` and `δ`. Fails
/// with a typing error if some component is not simplicial.
pub fn vertex_identity_interleaving(
    x: &Arc<PersistentObject<Complex>>,
    y: &Arc<PersistentObject<Complex>>,
    epsilon: &Grade,
    delta: &Grade,
) -> Result<Interleaving<Complex>> {
    let half = |s: &Arc<PersistentObject<Complex>>, t: &Arc<PersistentObject<Complex>>, shift: &Grade| {
        DeltaMorphism::from_fn(s.clone(), t.clone(), shift.clone(), |p| Ok(SimplicialMap::inclusion(&*s.evaluate(p)?)))
    };
    Interleaving::new(half(x, y, epsilon)?, half(y, x, delta)?)
}

/// A commuting square of complexes `D(i, j)`, `i, j ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDiagram {
    pub d00: SimplicialComplex,
    pub d10: SimplicialComplex,
    pub d01: SimplicialComplex,
    pub d11: SimplicialComplex,
    /// `D(0,0) -> D(1,0)`.
    pub h0: SimplicialMap,
    /// `D(0,1) -> D(1,1)`.
    pub h1: SimplicialMap,
    /// `D(0,0) -> D(0,1)`.
    pub v0: SimplicialMap,
    /// `D(1,0) -> D(1,1)`.
    pub v1: SimplicialMap,
}

impl SquareDiagram {
    pub fn object(&self, i: usize, j: usize) -> &SimplicialComplex {
        match (i, j) {
            (0, 0) => &self.d00,
            (1, 0) => &self.d10,
            (0, 1) => &self.d01,
            _ => &self.d11,
        }
    }

    /// Checks map types and that `v1 ∘ h0 = h1 ∘ v0`.
    pub fn check(&self) -> Result<()> {
        Complex::check_map(&self.h0, &self.d00, &self.d10)?;
        Complex::check_map(&self.h1, &self.d01, &self.d11)?;
        Complex::check_map(&self.v0, &self.d00, &self.d01)?;
        Complex::check_map(&self.v1, &self.d10, &self.d11)?;
        if Complex::compose(&self.v1, &self.h0) != Complex::compose(&self.h1, &self.v0) {
            return Err(Error::NotFunctorial("the square does not commute".into()));
        }
        Ok(())
    }
}

/// The two-parameter object on `{-1, 0, 1, 2, 3}^2` that is empty when a
/// coordinate is negative, `D(⌊r⌋, ⌊s⌋)` on `[0, 2)^2`, and a point once a
/// coordinate reaches 2.
pub fn sq_gadget(d: &SquareDiagram) -> Result<PersistentObject<Complex>> {
    d.check()?;
    let axis: Vec<Rational> = (-1..=3).map(Rational::from_int).collect();
    let grid = Grid::new(vec![axis.clone(), axis])?;
    #[derive(Clone, Copy)]
    enum Region {
        Empty,
        Square(usize, usize),
        Point,
    }
    let region = |idx: &[usize]| {
        let (r, s) = (idx[0] as i64 - 1, idx[1] as i64 - 1);
        if r < 0 || s < 0 {
            Region::Empty
        } else if r >= 2 || s >= 2 {
            Region::Point
        } else {
            Region::Square(r as usize, s as usize)
        }
    };
    let object = |reg: Region| match reg {
        Region::Empty => SimplicialComplex::default(),
        Region::Square(i, j) => d.object(i, j).clone(),
        Region::Point => SimplicialComplex::point(),
    };
    PersistentObject::from_fn(
        grid,
        |idx| Ok(object(region(idx))),
        |idx, a| {
            let mut next = idx.to_vec();
            next[a] += 1;
            Ok(match (region(idx), region(&next)) {
                (Region::Empty, _) => SimplicialMap::default(),
                (Region::Square(i, j), Region::Point) => SimplicialMap::constant(d.object(i, j), 0),
                (Region::Point, _) => SimplicialMap::inclusion(&SimplicialComplex::point()),
                (Region::Square(0, j), Region::Square(1, _)) => if j == 0 { d.h0.clone() } else { d.h1.clone() },
                (Region::Square(i, 0), Region::Square(_, 1)) => if i == 0 { d.v0.clone() } else { d.v1.clone() },
                (Region::Square(..), _) => unreachable!("grid steps move one cell"),
            })
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn collinear() -> MetricInput {
        MetricInput::l1(&[vec![q(0)], vec![q(1)], vec![q(3)]]).unwrap()
    }

    #[test]
    fn validation_reports_first_violation() {
        let ok = FilteredComplex::from_grades(1, [(vec![0], Grade::from_ints(&[0])), (vec![1], Grade::from_ints(&[0])), (vec![0, 1], Grade::from_ints(&[1]))]).unwrap();
        assert!(ok.validate().valid);
        let bad = FilteredComplex::from_grades(1, [(vec![0], Grade::from_ints(&[0])), (vec![1], Grade::from_ints(&[1])), (vec![0, 1], Grade::from_ints(&[0]))]).unwrap();
        let report = bad.validate();
        assert!(matches!(report.violation, Some(FiltrationViolation::NotMonotone { ref face, .. }) if face == &vec![1]));
        let open = FilteredComplex::from_grades(1, [(vec![0], Grade::from_ints(&[0])), (vec![0, 1], Grade::from_ints(&[0]))]).unwrap();
        assert!(matches!(open.validate().violation, Some(FiltrationViolation::MissingFace { .. })));
    }

    #[test]
    fn rips_of_collinear_points() {
        let f = vietoris_rips(&collinear(), 2).unwrap();
        assert_eq!(f.grade(&[0, 1]), Some(&Grade::from_ints(&[1])));
        assert_eq!(f.grade(&[1, 2]), Some(&Grade::from_ints(&[2])));
        assert_eq!(f.grade(&[0, 2]), Some(&Grade::from_ints(&[3])));
        assert_eq!(f.grade(&[0, 1, 2]), Some(&Grade::from_ints(&[3])));
        assert_eq!(f.dimension(), 2);
        assert!(f.validate().valid);
    }

    #[test]
    fn filtered_round_trip() {
        let f = vietoris_rips(&collinear(), 2).unwrap();
        let report = is_filtered(&f.to_persistent().unwrap()).unwrap();
        assert!(report.filtered);
        assert_eq!(report.witness.unwrap(), f);
    }

    #[test]
    fn function_rips_grades() {
        let m = MetricInput::l1(&[vec![q(0)], vec![q(1)]]).unwrap().with_values(vec![q(0), q(2)]).unwrap();
        let f = function_rips(&m, 1).unwrap();
        assert_eq!(f.grade(&[0, 1]), Some(&Grade::from_ints(&[1, 2])));
        assert_eq!(f.grade(&[1]), Some(&Grade::from_ints(&[0, 2])));
    }

    #[test]
    fn degree_rips_is_not_filtered() {
        let x = degree_rips(&collinear(), 1).unwrap();
        assert!(x.is_monic());
        let report = is_filtered(&x).unwrap();
        assert_eq!(report.condition, Some(2));
        let single = MetricInput::new(vec![vec![q(0)]], None).unwrap();
        assert!(is_filtered(&degree_rips(&single, 1).unwrap()).unwrap().filtered);
    }

    #[test]
    fn gadget_evaluation() {
        let edge = SimplicialComplex::closure([vec![0, 1]]).unwrap();
        let pt = SimplicialComplex::point();
        let d = SquareDiagram {
            d00: pt.clone(),
            d10: edge.clone(),
            d01: pt.clone(),
            d11: edge.clone(),
            h0: SimplicialMap::inclusion(&pt),
            h1: SimplicialMap::inclusion(&pt),
            v0: SimplicialMap::inclusion(&pt),
            v1: SimplicialMap::inclusion(&edge),
        };
        let x = sq_gadget(&d).unwrap();
        let at = |a: Rational, b: Rational| x.evaluate(&Grade::new(vec![a, b]).unwrap()).unwrap().into_owned();
        assert!(at(Rational::new(-1, 2).unwrap(), q(1)).is_empty());
        assert_eq!(at(Rational::new(3, 2).unwrap(), Rational::new(1, 2).unwrap()), edge);
        assert_eq!(at(q(2), q(0)), pt);
    }
}
