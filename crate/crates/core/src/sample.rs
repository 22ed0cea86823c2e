//! Seeded random instances: objects, certified interleavings, complexes and
//! barcodes. Used by the property tests and by the CLI `sample` command.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::category::{
    Category, Complex, F2Matrix, F2Vec, F2Vector, FinMap, FinSet, Simplex, SimplicialComplex, SimplicialMap, Vertex,
};
use crate::error::{Error, Result};
use crate::filtered::{FilteredComplex, MetricInput};
use crate::invariants::{Bar, Barcode, Death};
use crate::persist::{DeltaMorphism, Grid, Interleaving, PersistentObject};
use crate::{Grade, Rational};

/// Categories with random objects, maps and automorphisms.
pub trait Sample: Category {
    /// An object of size at most `max`.
    fn random_object<R: Rng>(rng: &mut R, max: usize) -> Self::Obj;

    /// A uniformly random map, or `None` if the hom-set is empty.
    fn random_map<R: Rng>(rng: &mut R, source: &Self::Obj, target: &Self::Obj) -> Option<Self::Map>;

    /// A random automorphism and its inverse.
    fn random_automorphism<R: Rng>(rng: &mut R, obj: &Self::Obj) -> (Self::Map, Self::Map);

    /// Given `h: b -> y`, returns `b' ⊇ b` (up to `extra` new elements), the
    /// inclusion `b -> b'` and an extension `h': b' -> y` of `h`.
    fn extend<R: Rng>(
        rng: &mut R,
        b: &Self::Obj,
        h: &Self::Map,
        y: &Self::Obj,
        extra: usize,
    ) -> (Self::Obj, Self::Map, Self::Map);
}

impl Sample for FinSet {
    fn random_object<R: Rng>(rng: &mut R, max: usize) -> usize {
        rng.gen_range(0..=max)
    }

    fn random_map<R: Rng>(rng: &mut R, source: &usize, target: &usize) -> Option<FinMap> {
        if *source > 0 && *target == 0 {
            return None;
        }
        Some(FinMap { codomain: *target, table: (0..*source).map(|_| rng.gen_range(0..*target)).collect() })
    }

    fn random_automorphism<R: Rng>(rng: &mut R, obj: &usize) -> (FinMap, FinMap) {
        let mut table: Vec<usize> = (0..*obj).collect();
        table.shuffle(rng);
        let p = FinMap { codomain: *obj, table };
        let inv = p.inverse().expect("a permutation");
        (p, inv)
    }

    fn extend<R: Rng>(rng: &mut R, b: &usize, h: &FinMap, y: &usize, extra: usize) -> (usize, FinMap, FinMap) {
        let k = if *y == 0 { 0 } else { rng.gen_range(0..=extra) };
        let mut table = h.table.clone();
        table.extend((0..k).map(|_| rng.gen_range(0..*y)));
        (b + k, FinMap { codomain: b + k, table: (0..*b).collect() }, FinMap { codomain: *y, table })
    }
}

fn random_vector<R: Rng>(rng: &mut R, len: usize) -> F2Vector {
    F2Vector::from_support(len, (0..len).filter(|_| rng.gen_bool(0.5)))
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> F2Matrix {
    F2Matrix::from_columns(rows, (0..cols).map(|_| random_vector(rng, rows)).collect()).expect("columns fit")
}

impl Sample for F2Vec {
    fn random_object<R: Rng>(rng: &mut R, max: usize) -> usize {
        rng.gen_range(0..=max)
    }

    fn random_map<R: Rng>(rng: &mut R, source: &usize, target: &usize) -> Option<F2Matrix> {
        Some(random_matrix(rng, *target, *source))
    }

    fn random_automorphism<R: Rng>(rng: &mut R, obj: &usize) -> (F2Matrix, F2Matrix) {
        loop {
            let a = random_matrix(rng, *obj, *obj);
            if let Some(inv) = a.inverse() {
                return (a, inv);
            }
        }
    }

    fn extend<R: Rng>(rng: &mut R, b: &usize, h: &F2Matrix, y: &usize, extra: usize) -> (usize, F2Matrix, F2Matrix) {
        let k = rng.gen_range(0..=extra);
        let incl = F2Matrix::identity(*b).stack(&F2Matrix::zero(k, *b));
        let mut cols = h.columns().to_vec();
        cols.extend((0..k).map(|_| random_vector(rng, *y)));
        (b + k, incl, F2Matrix::from_columns(*y, cols).expect("columns fit"))
    }
}

fn at(n: i64) -> Grade {
    Grade::from_ints(&[n])
}

/// A random chain `X(a_0) -> X(a_1) -> ..` on the given axis values.
pub fn random_chain<C: Sample, R: Rng>(rng: &mut R, axis: Vec<Rational>, max: usize) -> Result<PersistentObject<C>> {
    let mut objects = vec![C::random_object(rng, max)];
    let mut maps = Vec::new();
    while objects.len() < axis.len() {
        let prev = objects.last().expect("nonempty");
        let next = C::random_object(rng, max);
        if let Some(map) = C::random_map(rng, prev, &next) {
            objects.push(next);
            maps.push(map);
        }
    }
    PersistentObject::new(Grid::new(vec![axis])?, objects, vec![maps])
}

/// A random `Z`-indexed object on the window `lo..=hi`.
pub fn random_z_object<C: Sample, R: Rng>(rng: &mut R, lo: i64, hi: i64, max: usize) -> Result<PersistentObject<C>> {
    random_chain(rng, (lo..=hi).map(Rational::from_int).collect(), max)
}

/// `k` distinct sorted values `p/q` in `[lo, hi]` with `1 <= q <= denom`.
pub fn random_axis<R: Rng>(rng: &mut R, k: usize, lo: i64, hi: i64, denom: i64) -> Vec<Rational> {
    let mut values = BTreeSet::new();
    let mut attempts = 0;
    while values.len() < k && attempts < 100 * k {
        attempts += 1;
        let q = rng.gen_range(1..=denom);
        let p = rng.gen_range(lo * q..=hi * q);
        values.insert(Rational::new(p, q).expect("nonzero denominator"));
    }
    values.into_iter().collect()
}

/// A random object indexed by a random rational axis of at most `k` points.
pub fn random_r_object<C: Sample, R: Rng>(rng: &mut R, k: usize, max: usize) -> Result<PersistentObject<C>> {
    let n = rng.gen_range(1..=k);
    let axis = random_axis(rng, n, -3, 3, 4);
    random_chain(rng, axis, max)
}

/// From a `Z`-indexed `A` on a window, a random `B` with a 1-interleaving.
///
/// `B(n)` is a relabelled copy of `A(h(n))` for a random monotone `h` with
/// `|h(n) - n| <= 1`; both halves of the certificate are relabelled
/// structure maps of `A`.
pub fn reindexed_partner<C: Sample, R: Rng>(rng: &mut R, a: &Arc<PersistentObject<C>>) -> Result<Interleaving<C>> {
    let (lo, hi) = a
        .grid()
        .as_integer_window()
        .ok_or_else(|| Error::Precondition("expected an object on an integer window".into()))?;
    let (blo, bhi) = (lo - 1, hi + 1);
    let mut h = vec![blo - 1];
    for n in blo + 1..=bhi {
        let prev = h.last().expect("nonempty") - (n - 1);
        let choices: Vec<i64> = if n == bhi { vec![0, 1] } else { vec![-1, 0, 1] };
        let choices: Vec<i64> = choices.into_iter().filter(|&d| d >= prev - 1).collect();
        h.push(n + *choices.choose(rng).expect("some offset is monotone"));
    }
    let idx = |n: i64| (n.clamp(blo, bhi) - blo) as usize;
    let hn = |n: i64| h[idx(n)];
    let mut relabel = Vec::new();
    for n in blo..=bhi {
        relabel.push(C::random_automorphism(rng, &*a.evaluate(&at(hn(n)))?));
    }
    let objects = (blo..=bhi).map(|n| Ok(a.evaluate(&at(hn(n)))?.into_owned())).collect::<Result<Vec<_>>>()?;
    let maps = (blo..bhi)
        .map(|n| {
            let phi = a.structure_map(&at(hn(n)), &at(hn(n + 1)))?;
            Ok(C::compose(&relabel[idx(n + 1)].0, &C::compose(&phi, &relabel[idx(n)].1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let b = Arc::new(PersistentObject::on_window(blo, objects, maps)?);
    let one = at(1);
    let f = DeltaMorphism::from_fn(a.clone(), b.clone(), one.clone(), |p| {
        let n = crate::grades::floor_int(p.coord(0));
        let land = hn(n + 1);
        let phi = a.structure_map(&at(n.min(land)), &at(land))?;
        Ok(C::compose(&relabel[idx(n + 1)].0, &phi))
    })?;
    let g = DeltaMorphism::from_fn(b.clone(), a.clone(), one, |p| {
        let n = crate::grades::floor_int(p.coord(0));
        if n < blo {
            return Ok(C::from_initial(&*a.evaluate(&at(n + 1))?));
        }
        let phi = a.structure_map(&at(hn(n)), &at(n + 1))?;
        Ok(C::compose(&phi, &relabel[idx(n)].1))
    })?;
    Interleaving::new(f, g)
}

/// A random partner `Y` of `X` with an `(ε, δ)`-interleaving: `Y` is `X`
/// translated by `t ∈ [-δ, ε]` and relabelled cell by cell.
pub fn translated_partner<C: Sample, R: Rng>(
    rng: &mut R,
    x: &Arc<PersistentObject<C>>,
    epsilon: &Rational,
    delta: &Rational,
) -> Result<Interleaving<C>> {
    if x.m() != 1 {
        return Err(Error::Unsupported("translated partners need m = 1".into()));
    }
    let quarters = |r: &Rational| crate::grades::floor_int(&(r * &Rational::from_int(4)));
    let t = Rational::new(rng.gen_range(-quarters(delta)..=quarters(epsilon)), 4)?;
    let relabel: Vec<(C::Map, C::Map)> = x.objects().iter().map(|o| C::random_automorphism(rng, o)).collect();
    let grid = x.grid().translate(&Grade::scalar(t.clone()))?;
    let y = Arc::new(PersistentObject::from_fn(
        grid,
        |i| Ok(x.object_at(i).clone()),
        |i, _| Ok(C::compose(&relabel[i[0] + 1].0, &C::compose(x.edge(i, 0), &relabel[i[0]].1))),
    )?);
    let cell = |r: &Rational| x.grid().axis_cell(0, r);
    let f = DeltaMorphism::from_fn(x.clone(), y.clone(), Grade::scalar(epsilon.clone()), |p| {
        let land = p.coord(0) + &(epsilon - &t);
        Ok(match cell(&land) {
            Some(c) => C::compose(&relabel[c].0, &x.structure_map(p, &Grade::scalar(land))?),
            None => C::from_initial(&C::initial()),
        })
    })?;
    let g = DeltaMorphism::from_fn(y.clone(), x.clone(), Grade::scalar(delta.clone()), |p| {
        let back = p.coord(0) - &t;
        Ok(match cell(&back) {
            Some(c) => C::compose(
                &x.structure_map(&Grade::scalar(back), &Grade::scalar(p.coord(0) + delta))?,
                &relabel[c].1,
            ),
            None => C::from_initial(&*x.evaluate(&p.add(&Grade::scalar(delta.clone()))?)?),
        })
    })?;
    Interleaving::new(f, g)
}

/// Replaces one random component of `f` or `g` by a random map of the same
/// type. The result may or may not still be an interleaving.
pub fn perturb<C: Sample, R: Rng>(rng: &mut R, cert: &Interleaving<C>) -> Result<Interleaving<C>> {
    let which = rng.gen_bool(0.5);
    let m = if which { cert.f() } else { cert.g() };
    let mut components = m.components().to_vec();
    let i = rng.gen_range(0..components.len());
    let p = m.grid().point(&m.grid().unflat(i));
    let src = m.source().evaluate(&p)?;
    let tgt = m.target().evaluate(&p.add(m.shift())?)?;
    if let Some(map) = C::random_map(rng, &src, &tgt) {
        components[i] = map;
    }
    let m = DeltaMorphism::new(m.source().clone(), m.target().clone(), m.shift().clone(), components)?;
    if which {
        Interleaving::new(m, cert.g().clone())
    } else {
        Interleaving::new(cert.f().clone(), m)
    }
}

/// A random natural 0-morphism `h: B -> Y` into a one-parameter `Y`, with
/// `B` on the grid of `Y`.
pub fn random_morphism_into<C: Sample, R: Rng>(
    rng: &mut R,
    y: &Arc<PersistentObject<C>>,
    extra: usize,
) -> Result<DeltaMorphism<C>> {
    if y.m() != 1 {
        return Err(Error::Unsupported("random morphisms need m = 1".into()));
    }
    let ys = y.objects();
    let (mut b, _, mut h) = C::extend(rng, &C::initial(), &C::from_initial(&ys[0]), &ys[0], extra);
    let mut objects = vec![b.clone()];
    let mut maps = Vec::new();
    let mut components = vec![h.clone()];
    for (i, next) in ys.iter().enumerate().skip(1) {
        let pushed = C::compose(y.edge(&[i - 1], 0), &h);
        let (nb, incl, nh) = C::extend(rng, &b, &pushed, next, extra);
        objects.push(nb.clone());
        maps.push(incl);
        components.push(nh.clone());
        (b, h) = (nb, nh);
    }
    let source = Arc::new(PersistentObject::new(y.grid().clone(), objects, vec![maps])?);
    DeltaMorphism::new(source, y.clone(), Grade::zero(1), components)
}

/// A random filtered complex on `n` vertices: random generators of dimension
/// at most `max_dim`, closed under faces, with integer grades in `m`
/// parameters that grow by random steps from faces to cofaces.
pub fn random_filtered_complex<R: Rng>(rng: &mut R, n: usize, max_dim: usize, m: usize) -> Result<FilteredComplex> {
    let vertices: Vec<Vertex> = (0..n).collect();
    let mut generators: Vec<Simplex> = vertices.iter().map(|&v| vec![v]).collect();
    for _ in 0..rng.gen_range(0..=2 * n) {
        let size = rng.gen_range(2..=max_dim + 1).min(n);
        let mut s: Simplex = vertices.choose_multiple(rng, size).copied().collect();
        s.sort_unstable();
        generators.push(s);
    }
    let k = SimplicialComplex::closure(generators)?;
    let mut grades: Vec<(Simplex, Grade)> = Vec::new();
    for s in k.simplices_by_dimension() {
        let step = Grade::new((0..m).map(|_| Rational::from_int(rng.gen_range(0..=2))).collect())?;
        let mut g = Grade::zero(m);
        if s.len() > 1 {
            for (face, fg) in &grades {
                if face.len() + 1 == s.len() && face.iter().all(|v| s.contains(v)) {
                    g = g.join(fg)?;
                }
            }
        }
        grades.push((s, g.add(&step)?));
    }
    FilteredComplex::from_grades(m, grades)
}

/// Applies a random injective vertex relabelling at every grid point of a
/// one-parameter persistent complex, conjugating the structure maps. The
/// result is isomorphic to the input, so it stays monic, but its structure
/// maps are no longer inclusions.
pub fn relabel_vertices<R: Rng>(rng: &mut R, x: &PersistentObject<Complex>) -> Result<PersistentObject<Complex>> {
    if x.m() != 1 {
        return Err(Error::Unsupported("vertex relabelling needs m = 1".into()));
    }
    let relabels: Vec<SimplicialMap> = x
        .objects()
        .iter()
        .map(|k| {
            let vs = k.vertices();
            let mut labels: Vec<Vertex> = (0..2 * vs.len() + 1).collect();
            labels.shuffle(rng);
            SimplicialMap::from(vs.into_iter().zip(labels).collect::<Vec<_>>())
        })
        .collect();
    let image = |map: &SimplicialMap, k: &SimplicialComplex| SimplicialComplex::new(k.simplices().map(|s| map.image(s)));
    let objects = x.objects().iter().zip(&relabels).map(|(k, r)| image(r, k)).collect::<Result<Vec<_>>>()?;
    let maps = (0..x.objects().len().saturating_sub(1))
        .map(|i| {
            let edge = x.edge(&[i], 0);
            SimplicialMap::from(
                relabels[i]
                    .vertex_map
                    .iter()
                    .map(|(&v, &label)| (label, relabels[i + 1].apply(edge.apply(v))))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    PersistentObject::new(x.grid().clone(), objects, vec![maps])
}

/// `n` random points with integer coordinates in `0..=max` under the `l1` metric.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, dim: usize, max: i64) -> Result<MetricInput> {
    let pts: Vec<Vec<Rational>> =
        (0..n).map(|_| (0..dim).map(|_| Rational::from_int(rng.gen_range(0..=max))).collect()).collect();
    MetricInput::l1(&pts)
}

/// Moves every off-diagonal distance by a random multiple of `1/4` of
/// absolute value at most `delta`, keeping it nonnegative.
pub fn jitter<R: Rng>(rng: &mut R, metric: &MetricInput, delta: &Rational) -> Result<MetricInput> {
    let n = metric.len();
    let q = crate::grades::floor_int(&(delta * &Rational::from_int(4)));
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let moved = metric.distance(i, j) + &Rational::new(rng.gen_range(-q..=q), 4)?;
            let d = moved.max(Rational::zero());
            matrix[i][j] = d.clone();
            matrix[j][i] = d;
        }
    }
    MetricInput::new(matrix, metric.values().map(<[Rational]>::to_vec))
}

/// At most `max_bars` bars with endpoints `p/denom` in `[0, span]`; each bar
/// is infinite with probability `infinite`.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize, span: i64, denom: i64, infinite: f64) -> Barcode {
    let bars = (0..rng.gen_range(0..=max_bars))
        .map(|_| {
            let b = rng.gen_range(0..span * denom);
            let birth = Rational::new(b, denom).expect("nonzero denominator");
            let death = if rng.gen_bool(infinite) {
                Death::Infinite
            } else {
                Death::Finite(Rational::new(rng.gen_range(b + 1..=span * denom), denom).expect("nonzero denominator"))
            };
            Bar::new(birth, death).expect("birth < death")
        })
        .collect();
    Barcode::new(bars)
}
