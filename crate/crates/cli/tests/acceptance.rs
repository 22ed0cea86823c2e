//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits nonzero if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use pers_core::category::{Complex, F2Vec, FinSet, Pullbacks, SimplicialComplex, SimplicialMap};
use pers_core::distances::{bottleneck, module_distance_crosscheck, stability_audit};
use pers_core::filtered::{
    degree_rips, is_filtered, sq_gadget, vertex_identity_interleaving, vietoris_rips, MetricInput, SquareDiagram,
};
use pers_core::invariants::{barcode, homology, pi0, Barcode};
use pers_core::persist::{
    floor_roundtrip_certificate, pullback_interleaving, rescale_interleaving, Interleaving, InterleavingReport,
};
use pers_core::rectify::{three_halves_check, zigzag};
use pers_core::sample::{
    jitter, perturb, random_axis, random_barcode, random_chain, random_filtered_complex, random_morphism_into,
    random_points, random_r_object, random_z_object, reindexed_partner, relabel_vertices, translated_partner, Sample,
};
use pers_core::{Error, Grade, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Collected) -> Verdict>;

/// Valid certificates met along the way, audited for stability at the end.
#[derive(Default)]
struct Collected {
    modules: Vec<Interleaving<F2Vec>>,
    complexes: Vec<Interleaving<Complex>>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: pers_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn quarter<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=hi), 4).expect("nonzero denominator")
}

fn zigzag_constant() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(1);
    let pairs = 60;
    for i in 0..pairs {
        let a = Arc::new(ok(random_z_object::<FinSet, _>(&mut rng, -4, 4, 5))?);
        let cert = ok(reindexed_partner(&mut rng, &a))?;
        ensure(ok(cert.is_valid())?, || format!("pair {i}: input certificate invalid"))?;
        let z = ok(zigzag(&cert))?;
        ensure(z.even_part_matches && z.odd_part_matches, || format!("pair {i}: e*C != e*A or o*C != o*B"))?;
        let two = Grade::from_ints(&[2]);
        ensure(z.composite.epsilon() == &two && z.composite.delta() == &two, || {
            format!("pair {i}: composite shifts ({}, {})", z.composite.epsilon(), z.composite.delta())
        })?;
        ensure(ok(z.composite.is_valid())?, || format!("pair {i}: composite fails the checker"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} pairs, composite (2, 2) valid, {:.2} s", elapsed.as_secs_f64()))
}

fn floor_roundtrip(collected: &mut Collected) -> Verdict {
    let mut rng = rng(2);
    for i in 0..40 {
        let x = Arc::new(ok(random_r_object::<FinSet, _>(&mut rng, 5, 4))?);
        ensure(ok(ok(floor_roundtrip_certificate(&x))?.is_valid())?, || format!("set object {i}"))?;
    }
    for i in 0..40 {
        let x = Arc::new(ok(random_r_object::<F2Vec, _>(&mut rng, 5, 3))?);
        let cert = ok(floor_roundtrip_certificate(&x))?;
        ensure(ok(cert.is_valid())?, || format!("module {i}"))?;
        collected.modules.push(cert);
    }
    Ok("80 objects (40 sets, 40 modules)".into())
}

fn scaled(report: &InterleavingReport, c: &Rational) -> InterleavingReport {
    let inv = c.recip().expect("positive");
    let mut r = report.clone();
    r.epsilon = r.epsilon.scale(&inv).expect("same arity");
    r.delta = r.delta.scale(&inv).expect("same arity");
    if let Some(v) = r.violation.as_mut() {
        v.grade = v.grade.scale(&inv).expect("same arity");
    }
    r
}

fn rescale_pairs<C: Sample>(rng: &mut ChaCha8Rng, n: usize, found: &mut [usize; 2]) -> Result<Vec<Interleaving<C>>, String> {
    let mut valid = Vec::new();
    for i in 0..n {
        let x = Arc::new(ok(random_r_object::<C, _>(rng, 4, 3))?);
        let delta = quarter(rng, 1, 8);
        let mut cert = ok(translated_partner(rng, &x, &delta, &delta))?;
        if i % 2 == 1 {
            cert = ok(perturb(rng, &cert))?;
        }
        let before = ok(cert.check())?;
        found[before.valid as usize] += 1;
        for m in 1..=3 {
            let c = &delta * &ok(Rational::from_int(m).recip())?;
            let after = ok(rescale_interleaving(&cert, &c))?;
            ensure(after.epsilon() == &Grade::from_ints(&[m]), || format!("pair {i}, m = {m}: shift {}", after.epsilon()))?;
            let got = ok(after.check())?;
            ensure(got == scaled(&before, &c), || format!("pair {i}, m = {m}: {before:?} vs {got:?}"))?;
        }
        if before.valid {
            valid.push(cert);
        }
    }
    Ok(valid)
}

fn rescaling(collected: &mut Collected) -> Verdict {
    let mut rng = rng(3);
    let mut found = [0, 0];
    rescale_pairs::<FinSet>(&mut rng, 40, &mut found)?;
    collected.modules.extend(rescale_pairs::<F2Vec>(&mut rng, 40, &mut found)?);
    ensure(found[0] > 0 && found[1] > 0, || format!("verdicts not mixed: {found:?}"))?;
    Ok(format!("80 pairs x m in {{1,2,3}}, {} valid and {} invalid inputs, verdicts agree", found[1], found[0]))
}

fn pullback_cases<C: Pullbacks + Sample>(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Interleaving<C>>, String> {
    let mut out = Vec::new();
    for i in 0..n {
        let x = Arc::new(ok(random_r_object::<C, _>(rng, 4, 3))?);
        let (e, d) = (quarter(rng, 0, 8), quarter(rng, 0, 8));
        let cert = ok(translated_partner(rng, &x, &e, &d))?;
        let h = ok(random_morphism_into(rng, cert.y(), 2))?;
        let pb = ok(pullback_interleaving(&cert, &h))?;
        let same = pb.interleaving.epsilon() == cert.epsilon() && pb.interleaving.delta() == cert.delta();
        ensure(same, || format!("instance {i}: shifts changed"))?;
        ensure(ok(pb.interleaving.is_valid())?, || format!("instance {i}: {:?}", pb.interleaving.check()))?;
        out.push(cert);
        out.push(pb.interleaving);
    }
    Ok(out)
}

fn pullbacks(collected: &mut Collected) -> Verdict {
    let mut rng = rng(4);
    pullback_cases::<FinSet>(&mut rng, 140)?;
    collected.modules.extend(pullback_cases::<F2Vec>(&mut rng, 60)?);
    Ok("140 set and 60 module instances keep (eps, delta)".into())
}

fn three_halves() -> Verdict {
    let mut rng = rng(5);
    let five_quarters = Grade::scalar(Rational::new(5, 4).expect("nonzero"));
    let three_halves = Grade::scalar(Rational::new(3, 2).expect("nonzero"));
    for i in 0..60 {
        let a = Arc::new(ok(random_z_object::<FinSet, _>(&mut rng, -4, 4, 5))?);
        let cert = ok(reindexed_partner(&mut rng, &a))?;
        let r = ok(cert.widen(&five_quarters, &five_quarters))?;
        ensure(ok(r.is_valid())?, || format!("pair {i}: 5/4 input invalid"))?;
        let one = ok(three_halves_check(cert.x(), cert.y(), &r))?;
        ensure(one.epsilon() == &Grade::from_ints(&[1]) && ok(one.is_valid())?, || format!("pair {i}"))?;
        let rejected = three_halves_check(cert.x(), cert.y(), &ok(cert.widen(&three_halves, &three_halves))?);
        ensure(matches!(rejected, Err(Error::Precondition(_))), || format!("pair {i}: r = 3/2 accepted"))?;
    }
    Ok("60 pairs at r = 5/4 give valid 1-interleavings; r = 3/2 rejected".into())
}

fn collinear() -> Result<MetricInput, String> {
    let pts: Vec<Vec<Rational>> = [0, 1, 3].iter().map(|&t| vec![Rational::from_int(t)]).collect();
    ok(MetricInput::l1(&pts))
}

fn filtered_characterization() -> Verdict {
    let mut rng = rng(6);
    for i in 0..100 {
        let m = 1 + i % 2;
        let k = ok(random_filtered_complex(&mut rng, 1 + i % 5, 3, m))?;
        let report = ok(is_filtered(&ok(k.to_persistent())?))?;
        ensure(report.filtered && report.witness.as_ref() == Some(&k), || format!("complex {i}: {report:?}"))?;
    }
    let has_minimum = |report: pers_core::filtered::FilteredReport| {
        report.condition == Some(2) && report.detail.is_some_and(|d| d.contains("has a minimum"))
    };
    let dr = ok(degree_rips(&collinear()?, 2))?;
    ensure(dr.is_monic() && has_minimum(ok(is_filtered(&dr))?), || "degree-Rips example".into())?;
    let (pt, empty) = (SimplicialComplex::point(), SimplicialComplex::default());
    let (id, none) = (SimplicialMap::inclusion(&pt), SimplicialMap::inclusion(&empty));
    let square = SquareDiagram {
        d00: empty,
        d10: pt.clone(),
        d01: pt.clone(),
        d11: pt,
        h0: none.clone(),
        h1: id.clone(),
        v0: none,
        v1: id,
    };
    ensure(has_minimum(ok(is_filtered(&ok(sq_gadget(&square))?))?), || "(1,0)/(0,1) gadget".into())?;
    for i in 0..100 {
        let k = ok(random_filtered_complex(&mut rng, 1 + i % 5, 2, 1))?;
        let x = ok(relabel_vertices(&mut rng, &ok(k.to_persistent())?))?;
        ensure(x.is_monic() && ok(is_filtered(&x))?.filtered, || format!("monic object {i}"))?;
    }
    Ok("100 round trips recover grades; both counterexamples fail condition 2; 100 monic objects pass".into())
}

fn skeletality() -> Verdict {
    let mut rng = rng(7);
    for n in 0..6 {
        for _ in 0..5 {
            let k = ok(vietoris_rips(&ok(random_points(&mut rng, n + 1, 2, 4))?, 10))?;
            ensure(k.dimension() <= n as i64 && k.is_n_skeletal(n), || format!("{} points: dimension {}", n + 1, k.dimension()))?;
        }
    }
    for i in 0..100 {
        let k = ok(random_filtered_complex(&mut rng, 1 + i % 6, 3, 1 + i % 2))?;
        for d in 0..4 {
            let s = k.skeleton(d);
            let good = s.skeleton(d) == s && s.dimension() == k.dimension().min(d as i64) && s.vertices() == k.vertices();
            ensure(good, || format!("complex {i}, skeleton {d}"))?;
        }
    }
    Ok("Rips of n+1 points has dimension <= n; 100 complexes: skeleta idempotent with the right dimension".into())
}

fn pi0_oracle() -> Verdict {
    let mut rng = rng(8);
    let mut points = 0;
    for i in 0..120 {
        let x = ok(ok(random_filtered_complex(&mut rng, 1 + i % 7, 2, 1))?.to_persistent())?;
        let p = ok(pi0(&x))?;
        let h0 = ok(homology(&x, 0))?;
        for (j, k) in x.objects().iter().enumerate() {
            let bfs = oracles::bfs_components(k);
            ensure(p.objects()[j] == bfs && h0.objects()[j] == bfs, || format!("complex {i}, grid point {j}"))?;
            points += 1;
        }
    }
    Ok(format!("120 complexes, {points} grid points agree with BFS and H_0 rank"))
}

fn pers(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pers")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli_barcode(dir: &Path, name: &str, matrix: &[[i64; 4]], size: usize, dim: usize) -> Result<Barcode, String> {
    let rows: Vec<Vec<String>> = matrix[..size].iter().map(|r| r[..size].iter().map(i64::to_string).collect()).collect();
    let metric = dir.join(format!("{name}.json"));
    let complex = dir.join(format!("{name}-rips.json"));
    let doc = serde_json::json!({ "format": "metric/v1", "matrix": rows });
    std::fs::write(&metric, doc.to_string()).map_err(|e| e.to_string())?;
    let path = |p: &PathBuf| p.to_string_lossy().into_owned();
    let (code, _) = pers(&["rips", &path(&metric), "-o", &path(&complex)])?;
    ensure(code == 0, || format!("rips exited {code}"))?;
    let (code, out) = pers(&["barcode", &path(&complex), "--dim", &dim.to_string()])?;
    ensure(code == 0, || format!("barcode exited {code}"))?;
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn worked_example() -> Verdict {
    let dir = std::env::temp_dir().join(format!("pers-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let line = [[0, 1, 3, 0], [1, 0, 2, 0], [3, 2, 0, 0], [0, 0, 0, 0]];
    let cycle = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
    let h0 = cli_barcode(&dir, "line", &line, 3, 0)?;
    let h1 = cli_barcode(&dir, "line", &line, 3, 1)?;
    let c1 = cli_barcode(&dir, "cycle", &cycle, 4, 1)?;
    std::fs::remove_dir_all(&dir).ok();
    ensure(h0.to_string() == "{[0, 1), [0, 2), [0, inf)}", || format!("H_0 = {h0}"))?;
    ensure(h1.is_empty(), || format!("H_1 = {h1}"))?;
    ensure(c1.to_string() == "{[1, 2)}", || format!("4-cycle H_1 = {c1}"))?;
    Ok(format!("via `pers rips | pers barcode`: H_0 = {h0}, H_1 = {{}}, 4-cycle H_1 = {c1}"))
}

fn bottleneck_oracle() -> Verdict {
    let mut rng = rng(10);
    let draw = |rng: &mut ChaCha8Rng| random_barcode(rng, 5, 4, 2, 0.15);
    for i in 0..150 {
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let ab = bottleneck(&a, &b).distance;
        ensure(ab == oracles::brute_bottleneck(&a, &b), || format!("pair {i}: {a} vs {b}"))?;
        ensure(bottleneck(&a, &a).distance == Some(Rational::zero()), || format!("d(a, a) != 0 for {a}"))?;
        ensure(ab == bottleneck(&b, &a).distance, || format!("asymmetric on pair {i}"))?;
        if let (Some(ab), Some(bc)) = (ab, bottleneck(&b, &c).distance) {
            let ac = bottleneck(&a, &c).distance;
            ensure(ac.is_some_and(|ac| ac <= ab + bc), || format!("triangle fails on triple {i}"))?;
        }
    }
    Ok("150 pairs match enumeration of all matchings; pseudometric axioms hold on 150 triples".into())
}

fn stability(collected: &mut Collected) -> Verdict {
    let mut rng = rng(11);
    for _ in 0..40 {
        let n = rng.gen_range(2..6);
        let metric = ok(random_points(&mut rng, n, 2, 4))?;
        let delta = quarter(&mut rng, 0, 6);
        let moved = ok(jitter(&mut rng, &metric, &delta))?;
        let x = Arc::new(ok(ok(vietoris_rips(&metric, 2))?.to_persistent())?);
        let y = Arc::new(ok(ok(vietoris_rips(&moved, 2))?.to_persistent())?);
        let d = Grade::scalar(delta);
        collected.complexes.push(ok(vertex_identity_interleaving(&x, &y, &d, &d))?);
    }
    let mut audited = 0;
    for (i, cert) in collected.complexes.iter().enumerate() {
        for dim in 0..2 {
            let audit = ok(stability_audit(cert, dim))?;
            ensure(audit.module_certificate_valid && audit.holds, || format!("complex certificate {i}, H_{dim}"))?;
            audited += 1;
        }
    }
    for (i, cert) in collected.modules.iter().enumerate() {
        ensure(ok(cert.is_valid())?, || format!("module certificate {i} invalid"))?;
        let shift = cert.epsilon().coord(0).clone().max(cert.delta().coord(0).clone());
        let d = bottleneck(&ok(barcode(cert.x()))?, &ok(barcode(cert.y()))?).distance;
        ensure(d.is_some_and(|d| d <= shift), || format!("module certificate {i}"))?;
        audited += 1;
    }
    let mut pairs = 0;
    while pairs < 60 {
        let module = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=3);
            let axis = random_axis(rng, k, 0, 3, 2);
            random_chain::<F2Vec, _>(rng, axis, 2).map(Arc::new)
        };
        let (f, g) = (ok(module(&mut rng))?, ok(module(&mut rng))?);
        let report = ok(module_distance_crosscheck(&f, &g, 2_000_000))?;
        ensure(report.holds, || format!("crosscheck {pairs}: {:?} vs {:?}", report.bottleneck.distance, report.interleaving_distance))?;
        pairs += 1;
    }
    Ok(format!("d_B <= shift for {audited} certificate audits; crosscheck d_B <= d_I on {pairs} module pairs"))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut collected = Collected::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("zig-zag constant (m = 1)", Box::new(|_| zigzag_constant())),
        ("floor round trip", Box::new(floor_roundtrip)),
        ("rescaling iff", Box::new(rescaling)),
        ("pullback of interleavings", Box::new(pullbacks)),
        ("three-halves reduction", Box::new(|_| three_halves())),
        ("filtered characterization", Box::new(|_| filtered_characterization())),
        ("skeletality and cofibrancy", Box::new(|_| skeletality())),
        ("pi0 oracle", Box::new(|_| pi0_oracle())),
        ("worked example via CLI", Box::new(|_| worked_example())),
        ("bottleneck oracle", Box::new(|_| bottleneck_oracle())),
        ("algebraic stability", Box::new(stability)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        match run(&mut collected) {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2} s]", i + 1, t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{:.2} s]", i + 1, t.elapsed().as_secs_f64());
            }
        }
    }
    let total = started.elapsed();
    println!("acceptance: {} of 11 passed in {:.2} s", 11 - failed, total.as_secs_f64());
    if failed > 0 || total > Duration::from_secs(120) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
