use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, ExperimentKind};
use crate::boundary::{classify_boundary_orbit, julia_boundary_samples, periodic_census, PeriodicBudgets, Region};
use crate::branches::{chain_contraction, BranchChain, ChoiceRule, Disk, SingularData};
use crate::catalog::{all_maps, get_inner, get_map, InnerFunctionSpec, InnerKind};
use crate::circle::{
    dw_convergence_fraction, invariant_halves_measure, invariant_halves_monte_carlo, recurrence_fraction,
    BoundaryArc, MeasureEstimate,
};
use crate::cowen::{classify_baker_type, IncrementSeries};
use crate::dimension::chain_lower_bound;
use crate::dynamics::{render_plane, Budgets, OrbitClass, Window};
use crate::error::{Error, Result};
use crate::probe::{julia_on_circle, singularity_preimage_probe, SingularityHit};

/// One output file, named relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn csv(name: &str, header: &str, body: &str) -> Self {
        Artifact {
            name: name.to_string(),
            bytes: format!("{header}\n{body}").into_bytes(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub kind: String,
    pub config_hash: String,
    pub config: String,
    pub seed: u64,
    pub version: String,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputRecord>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub artifacts: Vec<Artifact>,
    pub manifest: Manifest,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn budgets(cfg: &ExperimentConfig) -> Result<Budgets> {
    let b = Budgets::new(cfg.uint("n_max"), cfg.float("escape_radius"), cfg.float("bounded_radius"));
    if b.n_max == 0 || !(b.bounded_radius > 0.0 && b.escape_radius > b.bounded_radius) {
        return Err(config_error("need n_max >= 1 and 0 < bounded_radius < escape_radius"));
    }
    Ok(b)
}

fn window(cfg: &ExperimentConfig) -> Result<Window> {
    let (x0, x1, y0, y1) = (cfg.float("re_min"), cfg.float("re_max"), cfg.float("im_min"), cfg.float("im_max"));
    if !(x1 > x0 && y1 > y0) {
        return Err(config_error("window needs re_min < re_max and im_min < im_max"));
    }
    Ok(Window::from_bounds(x0, x1, y0, y1))
}

fn raster(cfg: &ExperimentConfig) -> Result<(usize, usize)> {
    let (w, h) = (cfg.uint("width"), cfg.uint("height"));
    if w == 0 || h == 0 {
        return Err(config_error("width and height must be positive"));
    }
    Ok((w, h))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_catalog() -> Vec<Artifact> {
    let mut body = String::new();
    for m in all_maps() {
        let _ = writeln!(
            body,
            "{},{},{},{}",
            m.id,
            csv_field(m.formula_kind.formula()),
            m.baker_meta.known_type,
            m.baker_meta.univalent
        );
    }
    vec![Artifact::csv("catalog.csv", "id,formula,known_type,univalent", &body)]
}

fn run_render(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let map = get_map(cfg.str("map"))?;
    let (w, h) = raster(cfg)?;
    let grid = render_plane(&map, &window(cfg)?, w, h, &budgets(cfg)?)?;
    let mut body = String::new();
    for class in [OrbitClass::Escaping, OrbitClass::Bounded, OrbitClass::Bungee, OrbitClass::Undecided] {
        let _ = writeln!(body, "{},{}", class.name(), grid.count(class));
    }
    Ok(vec![
        Artifact { name: "render.ppm".into(), bytes: grid.to_ppm() },
        Artifact::csv("render_counts.csv", "class,count", &body),
    ])
}

fn run_classify(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let map = get_map(cfg.str("map"))?;
    let c = classify_baker_type(&map, None, cfg.uint("depth"), cfg.uint("probe_budget"))?;
    let mut summary = String::new();
    for (s, l) in c.series.iter().zip(&c.levels) {
        let _ = writeln!(summary, "{},{},{},{:e},{}", map.id, s.start.re, s.start.im, l, c.decision);
    }
    let series: String = c.series.iter().map(|s| s.to_csv(&map.id)).collect();
    Ok(vec![
        Artifact::csv("classify.csv", "map_id,start_re,start_im,tail_level,decision", &summary),
        Artifact::csv("increments.csv", IncrementSeries::CSV_HEADER, &series),
    ])
}

fn inner_from(cfg: &ExperimentConfig) -> Result<InnerFunctionSpec> {
    let inner = get_inner(cfg.str("inner"))?;
    Ok(match inner.kind {
        InnerKind::MoebiusHyperbolic { .. } => InnerFunctionSpec::moebius_hyperbolic(cfg.float("lambda")),
        InnerKind::MoebiusParabolic { .. } => InnerFunctionSpec::moebius_parabolic(cfg.float("shift")),
        _ => inner,
    })
}

fn estimate_row(name: &str, e: &MeasureEstimate) -> String {
    format!("{name},{:e},{:e},{},{},{}\n", e.value, e.stderr, e.samples, e.iterations, e.flagged)
}

fn run_circle_stats(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let inner = inner_from(cfg)?;
    let seed = cfg.seed();
    let (samples, n) = (cfg.uint("samples"), cfg.uint("iterations"));
    let mut body = estimate_row(
        "dw_convergence_fraction",
        &dw_convergence_fraction(&inner, samples, n, cfg.float("arc_eps"), seed)?,
    );
    let arc = BoundaryArc::disk(cfg.float("arc_start"), cfg.float("arc_end"));
    body += &estimate_row(
        "recurrence_fraction",
        &recurrence_fraction(&inner, &arc, samples, n, seed.wrapping_add(1))?,
    );
    if let Ok((pos, neg)) = invariant_halves_measure(&inner) {
        let (mp, mn) = invariant_halves_monte_carlo(&inner, cfg.uint("halves_samples"), seed.wrapping_add(2))?;
        let _ = writeln!(body, "invariant_positive_half_exact,{pos:e},0,0,0,0");
        let _ = writeln!(body, "invariant_negative_half_exact,{neg:e},0,0,0,0");
        body += &estimate_row("invariant_positive_half", &mp);
        body += &estimate_row("invariant_negative_half", &mn);
    }
    Ok(vec![Artifact::csv(
        "circle_stats.csv",
        "statistic,value,stderr,samples,iterations,flagged",
        &body,
    )])
}

fn run_periodic(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let map = get_map(cfg.str("map"))?;
    let region = Region {
        re_min: cfg.float("re_min"),
        re_max: cfg.float("re_max"),
        im_min: cfg.float("im_min"),
        im_max: cfg.float("im_max"),
    };
    let (radius, max_period) = (cfg.float("disk_radius"), cfg.uint("max_period"));
    if !(radius > 0.0) || max_period == 0 {
        return Err(config_error("need disk_radius > 0 and max_period >= 1"));
    }
    let sd = SingularData::new(&map);
    let census = periodic_census(&map, &sd, &region, cfg.uint("count"), max_period, radius, &PeriodicBudgets::default())?;
    let summary = format!("{},{},{},{:e}\n", map.id, census.probed_disks, census.productive_disks, census.coverage);
    Ok(vec![
        Artifact { name: "periodic.csv".into(), bytes: census.to_csv().into_bytes() },
        Artifact::csv("periodic_summary.csv", "map_id,probed_disks,productive_disks,coverage", &summary),
    ])
}

fn run_boundary_class(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let map = get_map(cfg.str("map"))?;
    let (w, h) = raster(cfg)?;
    let b = budgets(cfg)?;
    let samples = julia_boundary_samples(&map, &window(cfg)?, w, h, cfg.uint("label_steps"));
    let horizon = cfg.uint("horizon");
    let rows: Vec<String> = samples
        .par_iter()
        .map(|&x| {
            let c = classify_boundary_orbit(&map, x, horizon, &b);
            format!(
                "{},{},{},{},{},{:e},{},{}\n",
                x.re,
                x.im,
                c.dw_set_member.name(),
                c.caratheodory_member.name(),
                c.evidence.steps,
                c.evidence.sup_radius,
                c.evidence.overflowed,
                c.evidence.cycle.map_or(String::new(), |p| p.to_string())
            )
        })
        .collect();
    Ok(vec![Artifact::csv(
        "boundary_class.csv",
        "re,im,dw_set,caratheodory,steps,sup_radius,overflowed,cycle",
        &rows.concat(),
    )])
}

fn run_dimension(cfg: &ExperimentConfig, notes: &mut Vec<String>) -> Result<Vec<Artifact>> {
    let map = get_map(cfg.str("map"))?;
    let disk = Disk::new(Complex64::new(cfg.float("center_re"), cfg.float("center_im")), cfg.float("radius"));
    if !(disk.radius > 0.0) || cfg.uint("steps") == 0 {
        return Err(config_error("need radius > 0 and steps >= 1"));
    }
    let sd = SingularData::new(&map);
    let anchor = |i: u8| Complex64::new(cfg.float(&format!("anchor{i}_re")), cfg.float(&format!("anchor{i}_im")));
    let chains: Vec<BranchChain> = [anchor(1), anchor(2)]
        .iter()
        .map(|&a| chain_contraction(&map, &sd, disk, cfg.uint("steps"), ChoiceRule::NearestTo(a)))
        .collect::<Result<_>>()?;
    let mut chain_body = String::new();
    for (i, ch) in chains.iter().enumerate() {
        for line in ch.to_csv().lines().skip(1) {
            let _ = writeln!(chain_body, "{},{line}", i + 1);
        }
    }
    let header = "s,b1,b2,b1_raw,b2_raw,disjointness_margin,containment1,containment2,capped";
    let body = match chain_lower_bound(&map, &chains[0], &chains[1]) {
        Ok(d) => {
            notes.extend(d.warning.clone());
            notes.push(d.label.clone());
            format!(
                "{},{},{},{},{},{},{},{},{}\n",
                d.s,
                d.b1,
                d.b2,
                d.b1_raw,
                d.b2_raw,
                d.disjointness_margin,
                d.containment_margins.0,
                d.containment_margins.1,
                d.capped
            )
        }
        // a failed inclusion is a result, not a crash
        Err(Error::Containment(msg)) => {
            notes.push(format!("no bound: {msg}"));
            String::new()
        }
        Err(e) => return Err(e),
    };
    Ok(vec![
        Artifact::csv("dimension.csv", header, &body),
        Artifact::csv("chains.csv", &format!("chain,{}", BranchChain::CSV_HEADER), &chain_body),
    ])
}

fn run_probe(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let inner = get_inner(cfg.str("inner"))?;
    let eps = cfg.float("eps");
    let sample = julia_on_circle(&inner, cfg.uint("depth"), cfg.uint("budget"), eps)?;
    let summary = format!(
        "{},{},{},{:e},{:e},{:e},{},{}\n",
        sample.inner_id,
        sample.depth,
        sample.points.len(),
        sample.point_gap,
        sample.cover.max_gap(),
        eps,
        sample.cover.is_eps_dense(),
        sample.exhausted
    );
    let mut cover = String::new();
    for (a, b) in &sample.cover.arcs {
        let _ = writeln!(cover, "{a:e},{b:e}");
    }
    let hits = if inner.kind == InnerKind::FatouInner {
        singularity_preimage_probe(&inner, cfg.float("target"), cfg.list("windows"), cfg.uint("count"))?
    } else {
        Vec::new()
    };
    let hits: String = hits.iter().map(|h| h.csv_row() + "\n").collect();
    Ok(vec![
        Artifact::csv("probe_points.csv", crate::probe::JuliaSample::CSV_HEADER, &sample.to_csv()),
        Artifact::csv("probe_cover.csv", "arc_start,arc_end", &cover),
        Artifact::csv(
            "probe_summary.csv",
            "inner_id,depth,points,point_gap,cover_gap,eps,eps_dense,exhausted",
            &summary,
        ),
        Artifact::csv("probe_hits.csv", SingularityHit::CSV_HEADER, &hits),
    ])
}

/// Computes the artifacts of `cfg` on the current rayon pool.
pub fn compute(cfg: &ExperimentConfig) -> Result<(Vec<Artifact>, Vec<String>)> {
    let mut notes = Vec::new();
    let artifacts = match cfg.kind {
        ExperimentKind::Catalog => run_catalog(),
        ExperimentKind::Render => run_render(cfg)?,
        ExperimentKind::Classify => run_classify(cfg)?,
        ExperimentKind::CircleStats => run_circle_stats(cfg)?,
        ExperimentKind::Periodic => run_periodic(cfg)?,
        ExperimentKind::BoundaryClass => run_boundary_class(cfg)?,
        ExperimentKind::Dimension => run_dimension(cfg, &mut notes)?,
        ExperimentKind::Probe => run_probe(cfg)?,
    };
    Ok((artifacts, notes))
}

/// Runs `cfg` on a pool of `threads` workers (all cores when `None`) and
/// writes its artifacts and `manifest.json` to `out` or the configured
/// directory.
pub fn run(cfg: &ExperimentConfig, out: Option<&Path>, threads: Option<usize>) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    let started = Instant::now();
    let (artifacts, notes) = pool.install(|| compute(cfg))?;
    let wall = started.elapsed().as_secs_f64();

    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(cfg.str("output_dir")));
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut outputs = Vec::new();
    for a in &artifacts {
        std::fs::write(dir.join(&a.name), &a.bytes).map_err(io)?;
        outputs.push(OutputRecord {
            file: a.name.clone(),
            bytes: a.bytes.len(),
            sha256: hex::encode(Sha256::digest(&a.bytes)),
        });
    }
    let manifest = Manifest {
        kind: cfg.kind.to_string(),
        config_hash: cfg.hash(),
        config: cfg.canonical(),
        seed: cfg.seed(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: pool.current_num_threads(),
        wall_time_seconds: wall,
        outputs,
        notes,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("manifest.json"), json + "\n").map_err(io)?;
    Ok(RunReport { output_dir: dir, artifacts, manifest })
}
