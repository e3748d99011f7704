use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

use symzeta::locator::{count_apoints, locate_apoints, scan_free_right, DEFAULT_T_MIN};
use symzeta::report::{compare_counts, special_delta, tail_density, weighted_sums};
use symzeta::{APoint, ComplexPoint, Error, HoffmanTerm, Rectangle, SymZeta};

use crate::cache::ResultCache;
use crate::config::JobConfig;
use crate::output::{read_apoints, write_apoints, write_csv, write_plot, ReIm};

pub const APOINTS_FILE: &str = "apoints.jsonl";
pub const SUMMARY_FILE: &str = "apoints_summary.csv";

/// Raised when `report` has neither a points file nor a cache entry.
#[derive(Debug, thiserror::Error)]
#[error("no a-points for this job: pass --points or run `locate` first")]
pub struct MissingPoints;

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        // `symzeta eval ... | head`
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Right,
    Left,
    Both,
    None,
}

#[derive(Serialize)]
struct ModelOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<ReIm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unavailable: Option<String>,
}

impl ModelOut {
    fn new(model: symzeta::Result<ComplexPoint>, truth: ComplexPoint) -> Result<Self> {
        match model {
            Ok(m) => Ok(ModelOut {
                value: Some(m.into()),
                relative_deviation: Some((truth / m - 1.0).norm()),
                unavailable: None,
            }),
            Err(e @ Error::OutsideRegime { .. }) => Ok(ModelOut {
                value: None,
                relative_deviation: None,
                unavailable: Some(e.to_string()),
            }),
            Err(e) => Err(e.into()),
        }
    }
}

#[derive(Serialize)]
struct EvalOut {
    weights: Vec<f64>,
    s: ReIm,
    a: ReIm,
    value: ReIm,
    value_err: f64,
    derivative: ReIm,
    derivative_err: f64,
    /// None at (numerically) an a-point
    g: Option<ReIm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right_model: Option<ModelOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_model: Option<ModelOut>,
}

pub fn eval(cfg: &JobConfig, s: ComplexPoint, model: Model) -> Result<()> {
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let e = z.eval_full(s, true)?;
    let g = match z.eval_g(&cfg.a, s) {
        Ok(g) => Some(g.into()),
        Err(Error::AtAPoint { .. }) => None,
        Err(err) => return Err(err.into()),
    };
    let want = |m| model == m || model == Model::Both;
    let right_model = if want(Model::Right) {
        Some(ModelOut::new(z.asymptotic_right(s), e.value)?)
    } else {
        None
    };
    let left_model = if want(Model::Left) {
        Some(ModelOut::new(z.asymptotic_left_strip(s), e.value)?)
    } else {
        None
    };
    print_json(&EvalOut {
        weights: cfg.weights.values().to_vec(),
        s: s.into(),
        a: cfg.a.a.into(),
        value: e.value.into(),
        value_err: e.value_err,
        derivative: e.deriv.into(),
        derivative_err: e.deriv_err,
        g,
        right_model,
        left_model,
    })
}

#[derive(Serialize)]
struct ExpandOut<'a> {
    weights: &'a [f64],
    total: f64,
    b: u64,
    m: f64,
    terms: &'a [HoffmanTerm],
}

pub fn expand(cfg: &JobConfig) -> Result<()> {
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let w = z.weights();
    print_json(&ExpandOut {
        weights: w.values(),
        total: w.total(),
        b: w.b(),
        m: w.m(),
        terms: z.expansion(),
    })
}

#[derive(Serialize)]
struct CountOut {
    weights: Vec<f64>,
    a: ReIm,
    region: Rectangle,
    count: u32,
    raw_integral: ReIm,
    integer_residual: f64,
    perturbation: f64,
}

pub fn count(cfg: &JobConfig) -> Result<()> {
    let region = cfg.require_region()?;
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let w = count_apoints(&z, &cfg.a, &region, &cfg.locator_options())?;
    print_json(&CountOut {
        weights: cfg.weights.values().to_vec(),
        a: cfg.a.a.into(),
        region,
        count: w.count,
        raw_integral: w.raw_integral.into(),
        integer_residual: w.integer_residual,
        perturbation: w.perturbation,
    })
}

/// Located points for the job region, from the cache when possible.
fn located(cfg: &JobConfig, region: &Rectangle) -> Result<Vec<APoint>> {
    let cache = ResultCache::locate(cfg);
    let key = ResultCache::key(cfg, region);
    if let Some(points) = cache.get(&key) {
        log::info!("cache hit {key}");
        return Ok(points);
    }
    log::info!("cache miss {key}; locating");
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let points = locate_apoints(&z, &cfg.a, region, &cfg.locator_options())?;
    if let Err(e) = cache.put(&key, &points) {
        log::warn!("could not write cache entry: {e:#}");
    }
    Ok(points)
}

#[derive(Serialize)]
struct SummaryRow {
    weights: String,
    a_re: f64,
    a_im: f64,
    sigma_min: f64,
    sigma_max: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
    count: u32,
    max_residual: f64,
    max_residual_floor: f64,
    max_newton_iters: u32,
}

fn weights_label(cfg: &JobConfig) -> String {
    cfg.weights
        .values()
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn locate(cfg: &JobConfig) -> Result<()> {
    let region = cfg.require_region()?;
    let points = located(cfg, &region)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_apoints(&cfg.output_dir.join(APOINTS_FILE), &points)?;
    let row = SummaryRow {
        weights: weights_label(cfg),
        a_re: cfg.a.a.re,
        a_im: cfg.a.a.im,
        sigma_min: region.sigma_min,
        sigma_max: region.sigma_max,
        t_min: region.t_min,
        t_max: region.t_max,
        points: points.len(),
        count: points.iter().map(|p| p.multiplicity).sum(),
        max_residual: points.iter().map(|p| p.residual).fold(0.0, f64::max),
        max_residual_floor: points.iter().map(|p| p.residual_floor).fold(0.0, f64::max),
        max_newton_iters: points.iter().map(|p| p.newton_iters).max().unwrap_or(0),
    };
    write_csv(&cfg.output_dir.join(SUMMARY_FILE), &[row])?;
    println!(
        "{} a-points written to {}",
        points.len(),
        cfg.output_dir.join(APOINTS_FILE).display()
    );
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    #[serde(rename = "T")]
    t: f64,
    t_min: f64,
    y: f64,
    x: f64,
    count: u32,
    main_term: f64,
    discrepancy: f64,
    #[serde(rename = "discrepancy_over_logT")]
    discrepancy_over_log_t: f64,
    main_term_in_range: bool,
    flagged: bool,
}

#[derive(Serialize)]
struct SumRow {
    #[serde(rename = "T")]
    t: f64,
    y: f64,
    t_min: f64,
    count: u32,
    sum_half: f64,
    sum_crit: f64,
    sum_littlewood: f64,
    predicted_half: f64,
    predicted_littlewood: f64,
    #[serde(rename = "half_over_TlogT")]
    half_over_t_log_t: f64,
    #[serde(rename = "crit_over_TlogT")]
    crit_over_t_log_t: f64,
}

#[derive(Serialize)]
struct TailRow {
    #[serde(rename = "T")]
    t: f64,
    delta: f64,
    y3: f64,
    tail_count: u32,
    below_y3_count: u32,
    bound_scale: f64,
    normalized: f64,
}

const TAIL_DELTAS: [f64; 4] = [0.1, 0.25, 0.5, 1.0];

pub fn report(cfg: &JobConfig, points_file: Option<&Path>) -> Result<()> {
    let points = match (points_file, cfg.region) {
        (Some(p), _) => read_apoints(p)?,
        (None, Some(region)) => {
            let key = ResultCache::key(cfg, &region);
            match ResultCache::locate(cfg).get(&key) {
                Some(p) => p,
                None => bail!(MissingPoints),
            }
        }
        (None, None) => bail!(MissingPoints),
    };
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let w = z.weights();
    let opts = cfg.locator_options();

    // sums need every point with -y < beta and t_min < gamma < T
    let covered = |t: f64| match cfg.region {
        Some(r) => r.sigma_min <= -cfg.y && r.t_min <= DEFAULT_T_MIN && t <= r.t_max,
        None => true,
    };
    let sum_grid: Vec<f64> = cfg.t_grid.iter().copied().filter(|&t| covered(t)).collect();
    if sum_grid.len() < cfg.t_grid.len() {
        log::warn!(
            "region does not cover every T for y = {}; sum and tail rows skipped there",
            cfg.y
        );
    }

    let counts = compare_counts(&z, &cfg.a, cfg.y, &cfg.t_grid, &opts)?;
    for c in counts.iter().filter(|c| c.flagged) {
        log::warn!(
            "T = {}: |discrepancy| / log T = {:.2} exceeds the flag level",
            c.t,
            c.discrepancy_over_log_t.abs()
        );
    }
    let count_rows: Vec<CountRow> = counts
        .iter()
        .map(|c| CountRow {
            t: c.t,
            t_min: c.t_min,
            y: c.y,
            x: c.x,
            count: c.computed_count,
            main_term: c.main_term,
            discrepancy: c.discrepancy,
            discrepancy_over_log_t: c.discrepancy_over_log_t,
            main_term_in_range: c.main_term_in_range,
            flagged: c.flagged,
        })
        .collect();

    let sums: Vec<_> = sum_grid.iter().map(|&t| weighted_sums(&points, w, cfg.y, t)).collect();
    let sum_rows: Vec<SumRow> = sums
        .iter()
        .map(|s| SumRow {
            t: s.t,
            y: s.y,
            t_min: s.t_min,
            count: s.count,
            sum_half: s.sum_half,
            sum_crit: s.sum_crit,
            sum_littlewood: s.sum_littlewood,
            predicted_half: s.predicted_half,
            predicted_littlewood: s.predicted_littlewood,
            half_over_t_log_t: s.half_over_t_log_t,
            crit_over_t_log_t: s.crit_over_t_log_t,
        })
        .collect();

    let mut tail_rows = Vec::new();
    for &t in &sum_grid {
        for delta in TAIL_DELTAS.into_iter().chain([special_delta(t)]) {
            let r = tail_density(&points, w, delta, t)?;
            tail_rows.push(TailRow {
                t,
                delta,
                y3: r.y3,
                tail_count: r.tail_count,
                below_y3_count: r.below_y3_count,
                bound_scale: r.bound_scale,
                normalized: r.normalized,
            });
        }
    }

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    write_csv(&dir.join("count_report.csv"), &count_rows)?;
    write_csv(&dir.join("sum_report.csv"), &sum_rows)?;
    write_csv(&dir.join("tail_report.csv"), &tail_rows)?;
    write_plot(
        &dir.join("count.dat"),
        counts.iter().map(|c| (c.t, c.computed_count as f64)),
    )?;
    write_plot(
        &dir.join("discrepancy_over_logT.dat"),
        counts.iter().map(|c| (c.t, c.discrepancy_over_log_t)),
    )?;
    write_plot(
        &dir.join("sum_half_over_TlogT.dat"),
        sums.iter().map(|s| (s.t, s.half_over_t_log_t)),
    )?;
    write_plot(
        &dir.join("sum_crit_over_TlogT.dat"),
        sums.iter().map(|s| (s.t, s.crit_over_t_log_t)),
    )?;
    println!("reports written to {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct ScanOut {
    weights: Vec<f64>,
    a: ReIm,
    c1_hat: f64,
    t_lo: f64,
    t_hi: f64,
    certified: Rectangle,
    certificate_count: u32,
    certificate_integer_residual: f64,
}

pub fn scan_free(cfg: &JobConfig, t_lo: f64, t_hi: Option<f64>) -> Result<()> {
    let z = SymZeta::new(cfg.weights.clone(), cfg.precision)?;
    let t_hi = t_hi.unwrap_or_else(|| cfg.t_grid.iter().copied().fold(f64::NAN, f64::max));
    let f = scan_free_right(&z, &cfg.a, t_lo, t_hi, &cfg.locator_options())?;
    print_json(&ScanOut {
        weights: cfg.weights.values().to_vec(),
        a: cfg.a.a.into(),
        c1_hat: f.c1_hat,
        t_lo: f.t_lo,
        t_hi: f.t_hi,
        certified: f.certified,
        certificate_count: f.certificate.count,
        certificate_integer_residual: f.certificate.integer_residual,
    })
}
