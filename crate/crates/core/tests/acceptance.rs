//! Acceptance suite. Each criterion prints one PASS or FAIL line; the test
//! fails at the end if any criterion did.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::f64::consts::{LN_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use bakerlab::boundary::{find_periodic_point, periodic_census, PeriodicBudgets, PeriodicSearch, Region};
use bakerlab::branches::{lift_path, newton_preimage, stolz_containment, Disk, SingularData, StepControl};
use bakerlab::catalog::all_maps;
use bakerlab::circle::{
    dw_convergence_fraction, invariant_halves_measure, invariant_halves_monte_carlo, recurrence_fraction,
};
use bakerlab::cowen::{classify_baker_type, CowenDecision, DEFAULT_DEPTH, DEFAULT_PROBE_BUDGET};
use bakerlab::dimension::moran_exponent;
use bakerlab::experiment::{run, ExperimentConfig};
use bakerlab::probe::{julia_on_circle, singularity_preimage_probe};
use bakerlab::{get_map, BoundaryArc, Error, InnerFunctionSpec};
use num_complex::Complex64;
use rand::Rng;

mod common;
use common::chain_family;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn found(s: PeriodicSearch) -> Result<bakerlab::boundary::PeriodicPointResult, String> {
    match s {
        PeriodicSearch::Found(r) => Ok(*r),
        PeriodicSearch::NotFound { best_margin } => Err(format!("not found, best margin {best_margin:.3}")),
    }
}

/// Root of e^x + x − 3 on [0, 1] by plain bisection.
fn bargmann_fixed_point() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid.exp() + mid - 3.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_1() -> Outcome {
    let budgets = PeriodicBudgets::default();
    let t = Instant::now();
    let fatou = get_map("fatou").map_err(|e| e.to_string())?;
    let sd = SingularData::new(&fatou);
    let r = found(find_periodic_point(&fatou, &sd, Disk::new(c(0.0, PI), 0.5), 1, &budgets).map_err(|e| e.to_string())?)?;
    let fatou_time = t.elapsed().as_secs_f64();
    ensure((r.point - c(0.0, PI)).norm() < 1e-9, format!("fatou point {}", r.point))?;
    ensure((r.multiplier - 2.0).norm() <= 1e-8, format!("fatou multiplier {}", r.multiplier))?;
    ensure(fatou_time < 10.0, format!("fatou took {fatou_time:.1}s"))?;

    let zstar = bargmann_fixed_point();
    let t = Instant::now();
    let barg = get_map("bargmann").map_err(|e| e.to_string())?;
    let sd = SingularData::new(&barg);
    let r = found(find_periodic_point(&barg, &sd, Disk::new(c(0.8, 0.0), 0.3), 1, &budgets).map_err(|e| e.to_string())?)?;
    let barg_time = t.elapsed().as_secs_f64();
    ensure((r.point - zstar).norm() < 1e-9, format!("bargmann point {} vs {zstar}", r.point))?;
    ensure((r.multiplier - (5.0 - zstar)).norm() <= 1e-6, format!("bargmann multiplier {}", r.multiplier))?;
    ensure(barg_time < 10.0, format!("bargmann took {barg_time:.1}s"))?;
    Ok(format!(
        "fatou i*pi ({fatou_time:.2}s), bargmann z* = {:.12} multiplier {:.9} ({barg_time:.2}s)",
        r.point.re, r.multiplier.re
    ))
}

fn criterion_2() -> Outcome {
    let map = get_map("baker_abel").map_err(|e| e.to_string())?;
    let sd = SingularData::new(&map);
    let budgets = PeriodicBudgets::default();
    for center in [c(0.0, 1.0), c(-1.0, PI), c(2.0, -2.0), c(-2.0, 4.0)] {
        if let PeriodicSearch::Found(r) =
            find_periodic_point(&map, &sd, Disk::new(center, 0.5), 1, &budgets).map_err(|e| e.to_string())?
        {
            return Err(format!("spurious fixed point {} near {center}", r.point));
        }
    }
    let region = Region { re_min: -3.0, re_max: 3.0, im_min: -8.0, im_max: 8.0 };
    let census = periodic_census(&map, &sd, &region, 20, 1, 0.5, &budgets).map_err(|e| e.to_string())?;
    ensure(census.points.is_empty(), format!("census found {} points", census.points.len()))?;
    Ok(format!("no fixed point in 4 disks, census over {} disks empty", census.probed_disks))
}

fn criterion_3() -> Outcome {
    let mut detail = Vec::new();
    for map in all_maps() {
        let t = Instant::now();
        let cl = classify_baker_type(&map, None, DEFAULT_DEPTH, DEFAULT_PROBE_BUDGET).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        ensure(
            cl.decision == CowenDecision::Decided(map.baker_meta.known_type),
            format!("{}: {} instead of {}", map.id, cl.decision, map.baker_meta.known_type),
        )?;
        ensure(secs < 60.0, format!("{} took {secs:.1}s", map.id))?;
        detail.push(format!("{} {}", map.id, cl.decision));
    }
    Ok(detail.join(", "))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let seed = 42;
    let samples = 10_000;
    let hyper = InnerFunctionSpec::moebius_hyperbolic(2.0);
    let para = InnerFunctionSpec::moebius_parabolic(1.0);
    let blaschke = InnerFunctionSpec::blaschke_baker();
    let e = |e: Error| e.to_string();

    let dh = dw_convergence_fraction(&hyper, samples, 60, 1e-3, seed).map_err(e)?;
    let dp = dw_convergence_fraction(&para, samples, 10_000, 1e-3, seed).map_err(e)?;
    let db = dw_convergence_fraction(&blaschke, samples, 1000, 1e-3, seed).map_err(e)?;
    let mut fails = Vec::new();
    if !(dh.value > 0.99) {
        fails.push(format!("hyperbolic to DW {:.4}", dh.value));
    }
    if !(dp.value > 0.99) {
        fails.push(format!("parabolic to DW {:.4}", dp.value));
    }
    if !(db.value < 0.05) {
        fails.push(format!("blaschke to DW {:.4}", db.value));
    }

    let arc = BoundaryArc::disk(0.30, 0.35);
    let rh = recurrence_fraction(&hyper, &arc, samples, 60, seed + 1).map_err(e)?;
    let rp = recurrence_fraction(&para, &arc, samples, 10_000, seed + 1).map_err(e)?;
    if rh.value != 0.0 || rp.value != 0.0 {
        fails.push(format!("moebius recurrence {} / {}", rh.value, rp.value));
    }
    let rb = recurrence_fraction(&blaschke, &arc, samples, 10_000, seed + 1).map_err(e)?;
    if !(rb.value >= 0.95) {
        let long = recurrence_fraction(&blaschke, &arc, 2000, 100_000, seed + 1).map_err(e)?;
        fails.push(format!(
            "blaschke recurrence {:.4} ± {:.4} at n=1e4 ({:.4} at n=1e5 on 2000 samples)",
            rb.value, rb.stderr, long.value
        ));
    }

    let exact = invariant_halves_measure(&hyper).map_err(e)?;
    let (mp, mn) = invariant_halves_monte_carlo(&hyper, 100_000, seed + 2).map_err(e)?;
    if exact != (0.5, 0.5) || (mp.value - 0.5).abs() > 2.0 * mp.stderr || (mn.value - 0.5).abs() > 2.0 * mn.stderr {
        fails.push(format!("halves {exact:?}, sampled ({:.4}, {:.4})", mp.value, mn.value));
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 120.0 {
        fails.push(format!("took {secs:.0}s"));
    }
    if fails.is_empty() {
        Ok(format!(
            "to DW {:.4} / {:.4} / {:.4}, blaschke returns {:.4}, halves ({:.4}, {:.4}), {secs:.1}s",
            dh.value, dp.value, db.value, rb.value, mp.value, mn.value
        ))
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let m = |a: f64, b: f64| moran_exponent(a, b).map_err(|e| e.to_string());
    ensure(m(0.5, 0.5)? == 1.0, "(1/2, 1/2) is not exactly 1")?;
    let third = m(1.0 / 3.0, 1.0 / 3.0)?;
    ensure((third - LN_2 / 3f64.ln()).abs() <= 1e-10, format!("(1/3, 1/3) -> {third}"))?;
    let golden = m(0.5, 0.25)?;
    let want = ((1.0 + 5f64.sqrt()) / 2.0).ln() / LN_2;
    ensure((golden - want).abs() <= 1e-10, format!("(1/2, 1/4) -> {golden}"))?;
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
    for &a in &grid {
        for w in grid.windows(2) {
            ensure(m(a, w[1])? > m(a, w[0])?, format!("not increasing at ({a}, {})", w[0]))?;
        }
        for &b in &grid {
            ensure(m(a, b)? == m(b, a)?, format!("not symmetric at ({a}, {b})"))?;
        }
    }
    Ok(format!("closed forms exact, {}x{} grid monotone and symmetric", grid.len(), grid.len()))
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let mut rng = bakerlab::rng::substream(6, 0);
    for map in all_maps() {
        let mut done = 0;
        let mut worst: f64 = 0.0;
        while done < 1000 {
            let w = c(rng.gen_range(-5.0..5.0), rng.gen_range(-10.0..10.0));
            if map.derivative(w).map_or(true, |d| d.norm() <= 0.1) {
                continue;
            }
            let target = map.eval(w).map_err(|e| e.to_string())?;
            let back = newton_preimage(&map, target, w, 1e-13).map_err(|e| format!("{}: {e}", map.id))?;
            let image = map.eval(back).map_err(|e| e.to_string())?;
            worst = worst.max((back - w).norm()).max((image - target).norm() / (1.0 + target.norm()));
            done += 1;
        }
        if worst > 1e-9 {
            fails.push(format!("{} round trip off by {worst:.1e}", map.id));
        }
    }

    let mut chains = 0;
    let mut expanding = Vec::new();
    for map in all_maps() {
        let sd = SingularData::new(&map);
        for ch in chain_family(&map, &sd, 1).into_iter().filter(|ch| ch.valid) {
            chains += 1;
            if ch.total_contraction() > 1.0 + 1e-9 {
                expanding.push((map.id.clone(), ch.total_contraction()));
            }
        }
    }
    if !expanding.is_empty() {
        let worst = expanding.iter().map(|e| e.1).fold(0.0, f64::max);
        let mut ids: Vec<&str> = expanding.iter().map(|e| e.0.as_str()).collect();
        ids.dedup();
        fails.push(format!(
            "{} of {chains} valid chains have cumulative contraction above 1 ({}; worst {worst:.4})",
            expanding.len(),
            ids.join(", ")
        ));
    }

    let abel = get_map("baker_abel").map_err(|e| e.to_string())?;
    let cv = abel.critical_value(1);
    let path = [cv - c(0.5, 1e-13), cv + c(0.5, -1e-13)];
    let start = newton_preimage(&abel, path[0], c(-0.3, TAU + 0.5), 1e-13).map_err(|e| e.to_string())?;
    match lift_path(&abel, &path, start, &StepControl::default()) {
        Err(Error::Obstruction { .. }) => {}
        other => fails.push(format!("lift through {cv} gave {other:?}")),
    }

    if fails.is_empty() {
        Ok(format!("round trips within 1e-9, {chains} valid chains contract, obstruction raised at {cv}"))
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_7() -> Outcome {
    let g = InnerFunctionSpec::fatou_inner();
    let r = stolz_containment(&g, PI / 2.0, 0.5, PI / 3.0, 3, 64).map_err(|e| e.to_string())?;
    ensure(
        r.pass && r.samples == 64,
        format!("worst margin {:.4}, inconclusive {:?}", r.worst_margin, r.inconclusive),
    )?;
    Ok(format!("64 samples inside, worst margin {:.4}", r.worst_margin))
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    let s = julia_on_circle(&InnerFunctionSpec::blaschke_baker(), 12, 1 << 16, 0.01).map_err(|e| e.to_string())?;
    if !s.cover.is_eps_dense() {
        fails.push(format!(
            "depth-12 tree has {} points with largest gap {:.4} turns (cover gap {:.4}), not 0.01-dense",
            s.points.len(),
            s.point_gap,
            s.cover.max_gap()
        ));
    }

    let windows = [10.0, 100.0, 1000.0];
    let hits = singularity_preimage_probe(&InnerFunctionSpec::fatou_inner(), 0.3, &windows, 4)
        .map_err(|e| e.to_string())?;
    for r in windows {
        let ok = hits.iter().any(|h| h.window == r && h.eta > r && h.verified && h.residual <= 1e-10);
        if !ok {
            fails.push(format!("no verified solution beyond R = {r}"));
        }
    }
    if hits.iter().any(|h| !(h.residual <= 1e-10)) {
        fails.push("a returned solution misses 1e-10".into());
    }
    if fails.is_empty() {
        Ok(format!("depth 12 gap {:.4}, {} verified solutions beyond 10, 100, 1000", s.point_gap, hits.len()))
    } else {
        Err(fails.join("; "))
    }
}

fn read_outputs(dir: &Path, names: &[String]) -> Vec<(String, Vec<u8>)> {
    names
        .iter()
        .map(|n| (n.clone(), std::fs::read(dir.join(n)).unwrap_or_default()))
        .collect()
}

fn criterion_9() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&root)
        .map_err(|e| format!("{}: {e}", root.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    configs.sort();
    ensure(!configs.is_empty(), "no shipped configs")?;
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    for path in &configs {
        let cfg = ExperimentConfig::load(path, None).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut runs = Vec::new();
        for t in [1, 1, threads] {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let report = run(&cfg, Some(dir.path()), Some(t)).map_err(|e| format!("{}: {e}", path.display()))?;
            let names: Vec<String> = report.artifacts.iter().map(|a| a.name.clone()).collect();
            runs.push((read_outputs(dir.path(), &names), report.manifest.config_hash));
        }
        let name = path.file_name().unwrap().to_string_lossy();
        ensure(runs[0] == runs[1], format!("{name}: two single-thread runs differ"))?;
        ensure(runs[0] == runs[2], format!("{name}: 1 and {threads} threads differ"))?;
    }
    Ok(format!("{} configs identical over two runs and 1 vs {threads} threads", configs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    println!();
    for (n, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(detail) => {
                println!("criterion {n}: FAIL ({detail})");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
