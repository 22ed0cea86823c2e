//! Exhaustive search for interleavings between small objects.
//!
//! The unknowns are the components of `f` and `g` at the points of their
//! merged grids; the constraints are naturality along grid edges and the two
//! triangle identities. Components are enumerated from the finite hom-sets by
//! backtracking, and each constraint is checked as soon as all of its
//! components are assigned.

use std::sync::Arc;

use serde::Serialize;

use super::grid::Grid;
use super::interleaving::Interleaving;
use super::morphism::{merged_grid, DeltaMorphism};
use super::object::PersistentObject;
use crate::category::{Category, Enumerable};
use crate::error::{Error, Result};
use crate::grades::{Grade, Rational};

/// Documented desk-scale limits for the distance search.
pub const MAX_SET_SIZE: usize = 5;
pub const MAX_DIMENSION: usize = 3;
pub const MAX_CRITICAL_GRADES: usize = 8;

/// Default number of component trials per candidate shift.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    F,
    G,
}

#[derive(Clone, Debug)]
enum Slot<M> {
    Var(usize),
    Fixed(M),
}

#[derive(Clone, Debug)]
enum Constraint<M> {
    /// `to ∘ before = after ∘ from`.
    Natural { from: usize, to: usize, before: M, after: M },
    /// `second ∘ first = expected`.
    Triangle { first: Slot<M>, second: Slot<M>, expected: M },
}

struct Problem<C: Category> {
    domains: Vec<Vec<C::Map>>,
    sides: Vec<(Side, usize)>,
    /// Constraints to check once the variable at this position is assigned.
    checks: Vec<Vec<Constraint<C::Map>>>,
    /// Constraints without variables.
    fixed: Vec<Constraint<C::Map>>,
}

struct Setup<'a, C: Category> {
    x: &'a Arc<PersistentObject<C>>,
    y: &'a Arc<PersistentObject<C>>,
    eps: &'a Grade,
    delta: &'a Grade,
    fixed_f: Option<&'a DeltaMorphism<C>>,
}

fn order_key(p: &Grade) -> (Rational, Grade) {
    let sum = p.coords().iter().fold(Rational::zero(), |acc, c| &acc + c);
    (sum, p.clone())
}

impl<C: Enumerable> Problem<C> {
    fn build(s: &Setup<'_, C>, budget: u64) -> Result<(Self, Grid, Grid, Vec<usize>)> {
        let (x, y, eps, delta) = (s.x, s.y, s.eps, s.delta);
        let f_grid = merged_grid(x, y, eps)?;
        let g_grid = merged_grid(y, x, delta)?;

        // Variables in a linear extension of the product order; f before g on ties.
        let mut order: Vec<(Side, usize, Grade)> = f_grid
            .points()
            .enumerate()
            .map(|(i, p)| (Side::F, i, p))
            .chain(g_grid.points().enumerate().map(|(i, p)| (Side::G, i, p)))
            .collect();
        order.sort_by(|a, b| {
            let (ka, kb) = (order_key(&a.2), order_key(&b.2));
            ka.0.cmp(&kb.0).then_with(|| ka.1.lex_cmp(&kb.1)).then_with(|| (a.0 as u8).cmp(&(b.0 as u8)))
        });
        let mut position = [vec![0; f_grid.len()], vec![0; g_grid.len()]];
        let mut domains = Vec::with_capacity(order.len());
        let mut sides = Vec::with_capacity(order.len());
        for (pos, (side, i, p)) in order.iter().enumerate() {
            let (src, tgt, shift) = match side {
                Side::F => (x, y, eps),
                Side::G => (y, x, delta),
            };
            let a = src.evaluate(p)?.into_owned();
            let b = tgt.evaluate(&p.add(shift)?)?.into_owned();
            let domain = match (side, s.fixed_f) {
                (Side::F, Some(f)) => vec![f.component_at(p)?],
                _ => {
                    if C::hom_size(&a, &b) > budget as u128 {
                        return Err(Error::BudgetExceeded { budget, best_upper_bound: None });
                    }
                    C::all_maps(&a, &b)
                }
            };
            domains.push(domain);
            sides.push((*side, *i));
            position[*side as usize][*i] = pos;
        }
        let var_pos = |side: Side, grid: &Grid, r: &Grade| -> Result<Option<usize>> {
            Ok(grid.cell(r)?.map(|idx| position[side as usize][grid.flat(&idx)]))
        };

        let mut checks: Vec<Vec<Constraint<C::Map>>> = vec![Vec::new(); order.len()];
        let mut fixed = Vec::new();

        // naturality along merged-grid edges
        for (side, grid, src, tgt, shift) in [(Side::F, &f_grid, x, y, eps), (Side::G, &g_grid, y, x, delta)] {
            if side == Side::F && s.fixed_f.is_some() {
                continue;
            }
            for idx in grid.indices() {
                for a in 0..grid.m() {
                    let mut next = idx.clone();
                    next[a] += 1;
                    if next[a] >= grid.axis(a).len() {
                        continue;
                    }
                    let (p, q) = (grid.point(&idx), grid.point(&next));
                    let from = position[side as usize][grid.flat(&idx)];
                    let to = position[side as usize][grid.flat(&next)];
                    let before = src.structure_map(&p, &q)?;
                    let after = tgt.structure_map(&p.add(shift)?, &q.add(shift)?)?;
                    checks[from.max(to)].push(Constraint::Natural { from, to, before, after });
                }
            }
        }

        // triangle identities on a grid fine enough for both sides
        let total = eps.add(delta)?;
        let neg = |g: &Grade| Grade::zero(g.m()).sub(g);
        for (first_side, first_grid, second_grid, start, first_shift) in
            [(Side::F, &f_grid, &g_grid, x, eps), (Side::G, &g_grid, &f_grid, y, delta)]
        {
            let check_grid = first_grid
                .merge(&second_grid.translate(&neg(first_shift)?)?)?
                .merge(&start.grid().translate(&neg(&total)?)?)?;
            let second_side = if first_side == Side::F { Side::G } else { Side::F };
            let (first_tgt, second_tgt) = match first_side {
                Side::F => (y, x),
                Side::G => (x, y),
            };
            for r in check_grid.points() {
                if *start.evaluate(&r)? == C::initial() {
                    continue;
                }
                let mid = r.add(first_shift)?;
                let end = r.add(&total)?;
                let expected = start.structure_map(&r, &end)?;
                let first = match var_pos(first_side, first_grid, &r)? {
                    Some(v) => Slot::Var(v),
                    None => Slot::Fixed(C::from_initial(&*first_tgt.evaluate(&mid)?)),
                };
                let second = match var_pos(second_side, second_grid, &mid)? {
                    Some(v) => Slot::Var(v),
                    None => Slot::Fixed(C::from_initial(&*second_tgt.evaluate(&end)?)),
                };
                let last = [&first, &second]
                    .iter()
                    .filter_map(|s| match s {
                        Slot::Var(v) => Some(*v),
                        Slot::Fixed(_) => None,
                    })
                    .max();
                let c = Constraint::Triangle { first, second, expected };
                match last {
                    Some(v) => checks[v].push(c),
                    None => fixed.push(c),
                }
            }
        }
        let f_positions = position[0].clone();
        Ok((Problem { domains, sides, checks, fixed }, f_grid, g_grid, f_positions))
    }

    fn holds(c: &Constraint<C::Map>, assigned: &[usize], domains: &[Vec<C::Map>]) -> bool {
        let value = |v: usize| &domains[v][assigned[v]];
        match c {
            Constraint::Natural { from, to, before, after } => {
                C::compose(value(*to), before) == C::compose(after, value(*from))
            }
            Constraint::Triangle { first, second, expected } => {
                let pick = |s: &Slot<C::Map>| match s {
                    Slot::Var(v) => value(*v).clone(),
                    Slot::Fixed(m) => m.clone(),
                };
                C::compose(&pick(second), &pick(first)) == *expected
            }
        }
    }

    /// Depth-first search; returns the chosen domain indices.
    fn solve(&self, budget: u64) -> Result<Option<Vec<usize>>> {
        if self.domains.iter().any(Vec::is_empty) {
            return Ok(None);
        }
        if !self.fixed.iter().all(|c| Self::holds(c, &[], &self.domains)) {
            return Ok(None);
        }
        let n = self.domains.len();
        let mut assigned = vec![0usize; n];
        let mut trials: u64 = 0;
        let mut depth = 0usize;
        let mut fresh = true;
        loop {
            if depth == n {
                return Ok(Some(assigned));
            }
            if fresh {
                assigned[depth] = 0;
            } else {
                assigned[depth] += 1;
            }
            fresh = false;
            if assigned[depth] >= self.domains[depth].len() {
                if depth == 0 {
                    return Ok(None);
                }
                depth -= 1;
                continue;
            }
            trials += 1;
            if trials > budget {
                return Err(Error::BudgetExceeded { budget, best_upper_bound: None });
            }
            if self.checks[depth].iter().all(|c| Self::holds(c, &assigned, &self.domains)) {
                depth += 1;
                fresh = true;
            }
        }
    }
}

fn check_setup<C: Category>(x: &PersistentObject<C>, y: &PersistentObject<C>, eps: &Grade, delta: &Grade) -> Result<()> {
    if x.m() != y.m() || eps.m() != x.m() || delta.m() != x.m() {
        return Err(Error::Dimension { expected: x.m(), found: y.m() });
    }
    for s in [eps, delta] {
        if !s.is_nonnegative() {
            return Err(Error::NegativeShift(s.clone()));
        }
    }
    Ok(())
}

/// Searches for an `(ε, δ)`-interleaving of `x` and `y`. `budget` bounds the
/// number of component trials.
pub fn find_interleaving<C: Enumerable>(
    x: &Arc<PersistentObject<C>>,
    y: &Arc<PersistentObject<C>>,
    eps: &Grade,
    delta: &Grade,
    budget: u64,
) -> Result<Option<Interleaving<C>>> {
    check_setup(x, y, eps, delta)?;
    let setup = Setup { x, y, eps, delta, fixed_f: None };
    let (problem, f_grid, g_grid, _) = Problem::build(&setup, budget)?;
    let Some(assigned) = problem.solve(budget)? else {
        return Ok(None);
    };
    let mut f_comps = vec![None; f_grid.len()];
    let mut g_comps = vec![None; g_grid.len()];
    for (pos, &(side, i)) in problem.sides.iter().enumerate() {
        let map = problem.domains[pos][assigned[pos]].clone();
        match side {
            Side::F => f_comps[i] = Some(map),
            Side::G => g_comps[i] = Some(map),
        }
    }
    let f = DeltaMorphism::new(x.clone(), y.clone(), eps.clone(), f_comps.into_iter().map(Option::unwrap).collect())?;
    let g = DeltaMorphism::new(y.clone(), x.clone(), delta.clone(), g_comps.into_iter().map(Option::unwrap).collect())?;
    Ok(Some(Interleaving::new(f, g)?))
}

/// Searches for `g: Y ->_δ X` completing a given `f: X ->_ε Y` to an interleaving.
pub fn find_partner<C: Enumerable>(f: &DeltaMorphism<C>, delta: &Grade, budget: u64) -> Result<Option<Interleaving<C>>> {
    let (x, y, eps) = (f.source(), f.target(), f.shift());
    check_setup(x, y, eps, delta)?;
    f.check_naturality()?;
    let setup = Setup { x, y, eps, delta, fixed_f: Some(f) };
    let (problem, _, g_grid, _) = Problem::build(&setup, budget)?;
    let Some(assigned) = problem.solve(budget)? else {
        return Ok(None);
    };
    let mut g_comps = vec![None; g_grid.len()];
    for (pos, &(side, i)) in problem.sides.iter().enumerate() {
        if side == Side::G {
            g_comps[i] = Some(problem.domains[pos][assigned[pos]].clone());
        }
    }
    let g = DeltaMorphism::new(y.clone(), x.clone(), delta.clone(), g_comps.into_iter().map(Option::unwrap).collect())?;
    Ok(Some(Interleaving::new(f.clone(), g)?))
}

/// Outcome of the interleaving-distance search.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DistanceSearch<C: Category> {
    /// The interleaving distance; `None` stands for infinity.
    pub distance: Option<Rational>,
    /// Whether a `distance`-interleaving exists (the infimum is a minimum).
    pub attained: bool,
    /// A certificate at the least shift found to admit one.
    pub certificate: Option<Interleaving<C>>,
    /// Every shift that was tested, with its outcome.
    pub tested: Vec<(Rational, bool)>,
    pub reason: Option<String>,
}

/// Critical values of a one-parameter object: its axis.
fn critical_values<C: Category>(x: &PersistentObject<C>) -> Vec<Rational> {
    x.grid().axis(0).to_vec()
}

/// The candidate set `{0} ∪ {b − a, (b − a)/2 : a <= b critical}`, sorted.
pub fn distance_candidates<C: Category>(x: &PersistentObject<C>, y: &PersistentObject<C>) -> Vec<Rational> {
    let mut crit = critical_values(x);
    crit.extend(critical_values(y));
    crit.sort();
    crit.dedup();
    let mut out = vec![Rational::zero()];
    for (i, a) in crit.iter().enumerate() {
        for b in &crit[i..] {
            let d = b - a;
            out.push(d.half());
            out.push(d);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Interleaving distance of two one-parameter objects by exhaustive search.
///
/// Whether a δ-interleaving exists depends only on the relative order of the
/// values `a + kδ` (`a` critical, `k ∈ {0, 1, 2}`), which changes only at the
/// candidates; testing the candidates and the midpoints between consecutive
/// ones therefore decides the infimum exactly, including whether it is attained.
/// Above the largest candidate every shift behaves like it, so failure there
/// means the distance is infinite.
pub fn interleaving_distance<C: Enumerable>(
    x: &Arc<PersistentObject<C>>,
    y: &Arc<PersistentObject<C>>,
    budget: u64,
) -> Result<DistanceSearch<C>> {
    if x.m() != 1 || y.m() != 1 {
        return Err(Error::Unsupported("interleaving distance is only searched for m = 1".into()));
    }
    let candidates = distance_candidates(x, y);
    let mut schedule: Vec<(Rational, Option<Rational>)> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if i > 0 {
            let prev = &candidates[i - 1];
            let mid = (prev + c).half();
            schedule.push((mid, Some(prev.clone())));
        }
        schedule.push((c.clone(), None));
    }
    let mut tested = Vec::new();
    let mut unresolved = false;
    for (d, below) in schedule {
        let shift = Grade::scalar(d.clone());
        match find_interleaving(x, y, &shift, &shift, budget) {
            Ok(Some(cert)) => {
                tested.push((d.clone(), true));
                if unresolved {
                    return Err(Error::BudgetExceeded { budget, best_upper_bound: Some(d) });
                }
                let (distance, attained) = match below {
                    Some(prev) => (prev, false),
                    None => (d, true),
                };
                return Ok(DistanceSearch { distance: Some(distance), attained, certificate: Some(cert), tested, reason: None });
            }
            Ok(None) => tested.push((d, false)),
            Err(Error::BudgetExceeded { .. }) => unresolved = true,
            Err(e) => return Err(e),
        }
    }
    if unresolved {
        return Err(Error::BudgetExceeded { budget, best_upper_bound: None });
    }
    Ok(DistanceSearch {
        distance: None,
        attained: false,
        certificate: None,
        tested,
        reason: Some(
            "no shift up to the span of the critical values admits an interleaving, and larger shifts impose the same constraints"
                .into(),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{F2Matrix, F2Vec, FinMap, FinSet};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn point_from(t: Rational) -> Arc<PersistentObject<FinSet>> {
        Arc::new(PersistentObject::constant_from(&Grade::scalar(t), 1))
    }

    #[test]
    fn distance_to_self_is_zero() {
        let grid = Grid::new(vec![vec![q(0, 1), q(1, 1), q(3, 1)]]).unwrap();
        let x = Arc::new(
            PersistentObject::<FinSet>::new(
                grid,
                vec![3, 2, 1],
                vec![vec![FinMap::new(2, vec![0, 0, 1]).unwrap(), FinMap::new(1, vec![0, 0]).unwrap()]],
            )
            .unwrap(),
        );
        let d = interleaving_distance(&x, &x, DEFAULT_BUDGET).unwrap();
        assert_eq!(d.distance, Some(Rational::zero()));
        assert!(d.attained);
        assert!(d.certificate.unwrap().is_valid().unwrap());
    }

    #[test]
    fn empty_versus_point_is_infinite() {
        let empty = Arc::new(PersistentObject::<FinSet>::initial(1));
        let pt = point_from(Rational::zero());
        let d = interleaving_distance(&empty, &pt, DEFAULT_BUDGET).unwrap();
        assert_eq!(d.distance, None);
        assert!(d.reason.is_some());
    }

    #[test]
    fn shifted_points_are_at_distance_t() {
        // brute force over every candidate shift and every component choice
        for t in [q(1, 1), q(5, 2), q(1, 3)] {
            let d = interleaving_distance(&point_from(Rational::zero()), &point_from(t.clone()), DEFAULT_BUDGET).unwrap();
            assert_eq!(d.distance, Some(t.clone()));
            assert!(d.attained);
            for (shift, ok) in &d.tested {
                assert_eq!(*ok, *shift >= t);
            }
        }
    }

    #[test]
    fn interval_modules() {
        // [0,2) versus [0,3): distance 1
        let bar = |d: i64| {
            let grid = Grid::new(vec![vec![q(0, 1), q(d, 1)]]).unwrap();
            Arc::new(PersistentObject::<F2Vec>::new(grid, vec![1, 0], vec![vec![F2Matrix::zero(0, 1)]]).unwrap())
        };
        let d = interleaving_distance(&bar(2), &bar(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(d.distance, Some(q(1, 1)));
        let zero = Arc::new(PersistentObject::<F2Vec>::initial(1));
        let d = interleaving_distance(&bar(2), &zero, DEFAULT_BUDGET).unwrap();
        assert_eq!(d.distance, Some(q(1, 1)));
    }

    #[test]
    fn budget_is_enforced() {
        let big = Arc::new(PersistentObject::<FinSet>::constant_from(&Grade::from_ints(&[0]), 5));
        let err = find_interleaving(&big, &big, &Grade::zero(1), &Grade::zero(1), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn partner_of_identity_is_identity() {
        let x = point_from(Rational::zero());
        let id = DeltaMorphism::identity(x.clone());
        let cert = find_partner(&id, &Grade::zero(1), DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(cert.g(), &id);
    }
}
