//! Strict zig-zag rectification of interleavings of `Z`-indexed objects.
//!
//! From an `m`-interleaving `(f, g)` of `A` and `B` we build the diagonal
//! object `C`, which is `A(qm)` on blocks `[qm, (q+1)m)` with `q` even and
//! `B(qm)` on blocks with `q` odd, joined by `f_{qm}` and `g_{qm}`. Its even
//! part equals the even part of `A` and its odd part equals the odd part of
//! `B`, which chains three interleavings into one between `A` and `B`:
//!
//! `A ~(2m-1, 0)~ e*A = e*C ~(m, m)~ o*C = o*B ~(0, 2m-1)~ B`.
//!
//! For `m = 1` the composite is a `(2, 2)`-interleaving.

use std::sync::Arc;

use serde::Serialize;

use crate::category::Category;
use crate::error::{Error, Result};
use crate::grades::{even_reindex, floor_div, floor_int, odd_reindex, Grade, Rational};
use crate::persist::{extend_floor, DeltaMorphism, Grid, Interleaving, PersistentObject};

/// An integer-indexed diagram given by its objects and structure maps.
trait Diagram<C: Category> {
    fn object(&self, n: i64) -> Result<C::Obj>;
    /// The structure map `n -> k` for `n <= k`.
    fn map(&self, n: i64, k: i64) -> Result<C::Map>;
}

fn at(n: i64) -> Grade {
    Grade::scalar(Rational::from_int(n))
}

impl<C: Category> Diagram<C> for PersistentObject<C> {
    fn object(&self, n: i64) -> Result<C::Obj> {
        Ok(self.evaluate(&at(n))?.into_owned())
    }

    fn map(&self, n: i64, k: i64) -> Result<C::Map> {
        self.structure_map(&at(n), &at(k))
    }
}

/// The diagonal zig-zag of an `m`-interleaving, on all of `Z`.
struct Diagonal<'a, C: Category> {
    cert: &'a Interleaving<C>,
    m: i64,
}

impl<C: Category> Diagonal<'_, C> {
    fn block_start(&self, n: i64) -> (i64, bool) {
        let q = floor_div(n, self.m);
        (q * self.m, q.rem_euclid(2) == 0)
    }
}

impl<C: Category> Diagram<C> for Diagonal<'_, C> {
    fn object(&self, n: i64) -> Result<C::Obj> {
        let (start, even) = self.block_start(n);
        let side = if even { self.cert.x() } else { self.cert.y() };
        side.object(start)
    }

    fn map(&self, n: i64, k: i64) -> Result<C::Map> {
        if n > k {
            return Err(Error::Order(at(n), at(k)));
        }
        let (mut start, mut even) = self.block_start(n);
        let (end, _) = self.block_start(k);
        let mut acc = C::identity(&self.object(n)?);
        while start < end {
            // f_{qm}: A(qm) -> B(qm + m) on even blocks, g_{qm} on odd ones
            let step = if even { self.cert.f() } else { self.cert.g() };
            acc = C::compose(&step.component_at(&at(start))?, &acc);
            start += self.m;
            even = !even;
        }
        Ok(acc)
    }
}

/// The object `n ↦ D(ρ(n))` on the window `lo..=hi`.
fn reindexed<C: Category>(d: &dyn Diagram<C>, rho: impl Fn(i64) -> i64, lo: i64, hi: i64) -> Result<PersistentObject<C>> {
    let objects = (lo..=hi).map(|n| d.object(rho(n))).collect::<Result<Vec<_>>>()?;
    let maps = (lo..hi).map(|n| d.map(rho(n), rho(n + 1))).collect::<Result<Vec<_>>>()?;
    PersistentObject::on_window(lo, objects, maps)
}

/// The `s`-morphism `ρ*D -> σ*D` made of structure maps `D(ρ(n)) -> D(σ(n + s))`.
fn reindex_morphism<C: Category>(
    d: &dyn Diagram<C>,
    source: &Arc<PersistentObject<C>>,
    target: &Arc<PersistentObject<C>>,
    rho: impl Fn(i64) -> i64,
    sigma: impl Fn(i64) -> i64,
    s: i64,
) -> Result<DeltaMorphism<C>> {
    DeltaMorphism::from_fn(source.clone(), target.clone(), at(s), |p| {
        let n = floor_int(p.coord(0));
        let (from, to) = (rho(n), sigma(n + s));
        if *source.evaluate(p)? == C::initial() {
            return Ok(C::from_initial(&*target.evaluate(&at(n + s))?));
        }
        d.map(from, to)
    })
}

fn identity_index(n: i64) -> i64 {
    n
}

/// Integer window of a `Z`-indexed object, resampling sparse integer grids.
fn as_window<C: Category>(x: &Arc<PersistentObject<C>>) -> Result<(Arc<PersistentObject<C>>, i64, i64)> {
    if let Some((lo, hi)) = x.window() {
        return Ok((x.clone(), lo, hi));
    }
    let axis = x.grid().axis(0);
    if x.m() != 1 || !axis.iter().all(Rational::is_integer) {
        return Err(Error::Grid("a Z-indexed object needs a single integer axis".into()));
    }
    let (lo, hi) = (floor_int(&axis[0]), floor_int(&axis[axis.len() - 1]));
    Ok((Arc::new(x.resample(Grid::integer_window(lo, hi)?)?), lo, hi))
}

/// The least `s >= 0` with `ρ(n + s) >= n` for every `n`; the reindexings
/// used here are periodic with period `2m`, so one period suffices.
fn forward_constant(rho: impl Fn(i64) -> i64, m: i64) -> i64 {
    (0..=2 * m).find(|&s| (0..2 * m).all(|n| rho(n + s) >= n)).expect("shift 2m always suffices")
}

/// Even and odd parts of a `Z`-indexed object with the `(m, m)`-interleaving between them.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct EvenOdd<C: Category> {
    pub even: Arc<PersistentObject<C>>,
    pub odd: Arc<PersistentObject<C>>,
    pub interleaving: Interleaving<C>,
}

/// `e_m*(X)` and `o_m*(X)`, presented on `lo..=hi + 2m`, and their
/// `m`-interleaving by structure maps of `X`.
pub fn even_odd_restrict<C: Category>(x: &Arc<PersistentObject<C>>, m: i64) -> Result<EvenOdd<C>> {
    if m < 1 {
        return Err(Error::Precondition(format!("block size must be positive, got {m}")));
    }
    let (x, lo, hi) = as_window(x)?;
    let e = move |n| even_reindex(n, m);
    let o = move |n| odd_reindex(n, m);
    let even = Arc::new(reindexed(x.as_ref(), e, lo, hi + 2 * m)?);
    let odd = Arc::new(reindexed(x.as_ref(), o, lo, hi + 2 * m)?);
    let f = reindex_morphism(x.as_ref(), &even, &odd, e, o, m)?;
    let g = reindex_morphism(x.as_ref(), &odd, &even, o, e, m)?;
    Ok(EvenOdd { even, odd, interleaving: Interleaving::new(f, g)? })
}

/// `X ~(s, 0)~ ρ*X` by structure maps, where `ρ(n) <= n <= ρ(n + s)`.
fn toward_reindex<C: Category>(
    x: &Arc<PersistentObject<C>>,
    reindexed: &Arc<PersistentObject<C>>,
    rho: impl Fn(i64) -> i64 + Copy,
    s: i64,
) -> Result<Interleaving<C>> {
    let f = reindex_morphism(x.as_ref(), x, reindexed, identity_index, rho, s)?;
    let g = reindex_morphism(x.as_ref(), reindexed, x, rho, identity_index, 0)?;
    Interleaving::new(f, g)
}

/// Everything produced by [`zigzag`].
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ZigzagResult<C: Category> {
    pub m: i64,
    /// `C` on the window `lo..=hi + 2m`. Beyond the window the true `C`
    /// keeps alternating between the top objects of `A` and `B`; every
    /// certificate below is computed from the true `C`.
    pub c: PersistentObject<C>,
    pub even_part_matches: bool,
    pub odd_part_matches: bool,
    /// `A ~(2m-1, 0)~ e_m*(A)`.
    pub a_to_even: Interleaving<C>,
    /// `e_m*(C) ~(m, m)~ o_m*(C)`.
    pub even_to_odd: Interleaving<C>,
    /// `o_m*(B) ~(0, 2m-1)~ B`.
    pub odd_to_b: Interleaving<C>,
    /// `A ~(3m-1, 3m-1)~ B`.
    pub composite: Interleaving<C>,
    /// Least shifts for which the reindexing pieces exist, found by scanning one period.
    pub measured_piece_shift: i64,
}

/// Rectifies a valid `m`-interleaving of `Z`-indexed objects into the zig-zag
/// composite. Objects are presented on the hull of their windows.
pub fn zigzag<C: Category>(cert: &Interleaving<C>) -> Result<ZigzagResult<C>> {
    let eps = cert.epsilon();
    if eps.m() != 1 || eps != cert.delta() || !eps.coord(0).is_integer() || !eps.coord(0).is_positive() {
        return Err(Error::Precondition(format!(
            "expected an m-interleaving with a positive integer m, got ({}, {})",
            eps,
            cert.delta()
        )));
    }
    let m = floor_int(eps.coord(0));
    let report = cert.check()?;
    if !report.valid {
        return Err(Error::InvalidCertificate(format!("input certificate fails: {:?}", report.violation)));
    }
    let (_, lo_a, hi_a) = as_window(cert.x())?;
    let (_, lo_b, hi_b) = as_window(cert.y())?;
    let (lo, hi) = (lo_a.min(lo_b), hi_a.max(hi_b) + 2 * m);

    let e = move |n| even_reindex(n, m);
    let o = move |n| odd_reindex(n, m);
    let diagonal = Diagonal { cert, m };
    let c = reindexed(&diagonal, identity_index, lo, hi)?;
    let even_c = Arc::new(reindexed(&diagonal, e, lo, hi)?);
    let odd_c = Arc::new(reindexed(&diagonal, o, lo, hi)?);
    let even_a = Arc::new(reindexed(cert.x().as_ref(), e, lo, hi)?);
    let odd_b = Arc::new(reindexed(cert.y().as_ref(), o, lo, hi)?);
    let even_part_matches = even_c == even_a;
    let odd_part_matches = odd_c == odd_b;
    if !even_part_matches || !odd_part_matches {
        return Err(Error::InvalidCertificate("even or odd part of the diagonal differs from the input".into()));
    }

    let piece = 2 * m - 1;
    let a_to_even = toward_reindex(cert.x(), &even_a, e, piece)?;
    let f = reindex_morphism(&diagonal, &even_c, &odd_c, e, o, m)?;
    let g = reindex_morphism(&diagonal, &odd_c, &even_c, o, e, m)?;
    let even_to_odd = Interleaving::new(f, g)?;
    let odd_to_b = toward_reindex(cert.y(), &odd_b, o, piece)?.reversed();
    let composite = a_to_even.compose(&even_to_odd)?.compose(&odd_to_b)?;
    let measured_piece_shift = forward_constant(e, m).max(forward_constant(o, m));

    Ok(ZigzagResult {
        m,
        c,
        even_part_matches,
        odd_part_matches,
        a_to_even,
        even_to_odd,
        odd_to_b,
        composite,
        measured_piece_shift,
    })
}

/// Turns an `r`-interleaving of the floor extensions of `X` and `Y`, with
/// `0 <= r < 3/2`, into a 1-interleaving of `X` and `Y`:
/// `f'_n = φ^Y_{⌊n+r⌋, n+1} ∘ f_n`, and symmetrically for `g`.
pub fn three_halves_check<C: Category>(
    x: &Arc<PersistentObject<C>>,
    y: &Arc<PersistentObject<C>>,
    cert: &Interleaving<C>,
) -> Result<Interleaving<C>> {
    let r = cert.epsilon();
    if r.m() != 1 || r != cert.delta() {
        return Err(Error::Precondition("expected an r-interleaving of one-parameter objects".into()));
    }
    let r = r.coord(0).clone();
    if r.is_negative() || r >= Rational::new(3, 2)? {
        return Err(Error::Precondition(format!("the shift must satisfy 0 <= r < 3/2, got {r}")));
    }
    let (ex, ey) = (extend_floor(x)?, extend_floor(y)?);
    if **cert.x() != ex || **cert.y() != ey {
        return Err(Error::ObjectMismatch("the certificate is not between the floor extensions".into()));
    }
    let report = cert.check()?;
    if !report.valid {
        return Err(Error::InvalidCertificate(format!("input certificate fails: {:?}", report.violation)));
    }
    let lift = |src: &Arc<PersistentObject<C>>, tgt: &Arc<PersistentObject<C>>, h: &DeltaMorphism<C>| {
        DeltaMorphism::from_fn(src.clone(), tgt.clone(), at(1), |p| {
            let n = floor_int(p.coord(0));
            let landing = floor_int(&(p.coord(0) + &r));
            Ok(C::compose(&tgt.map(landing, n + 1)?, &h.component_at(p)?))
        })
    };
    Interleaving::new(lift(x, y, cert.f())?, lift(y, x, cert.g())?)
}
