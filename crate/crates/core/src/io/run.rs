//! Task runner: executes an [`ExperimentConfig`], writes CSV tables and a
//! manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, SiteRef, Task};
use super::tables::{self, FileEntry, Table};
use crate::curves::{self, CurveLabel};
use crate::disorder::{self, mann_kendall};
use crate::error::{Error, Result};
use crate::greens::analytic::{self, critical_scales, CriticalScales};
use crate::greens::crossover::{crossover_detect, Kink};
use crate::greens::numeric::{numeric_result, resolvent_column_with, SolveOptions};
use crate::greens::{EndpointRule, GreenQuery, GreenResult, Method};
use crate::lattice::{build_hamiltonian, BoundaryKind, DisorderSpec, DisorderTarget, ModelParams};
use crate::spectra;
use crate::winding::{self, Ray};
use crate::{C64, OMEGA_1, OMEGA_2};

/// Defaults shared by the runner and the help text.
pub mod defaults {
    use crate::C64;

    pub const SPECTRUM_SAMPLES: usize = 256;
    pub const CURVE_SAMPLES: usize = 512;
    pub const WINDING_GRID: ([f64; 2], [f64; 2], usize, usize) = ([-2.0, 2.0], [-1.0, 1.0], 81, 41);
    pub const SCAN_TOP: f64 = 1.0;
    pub const SCAN_STEPS: usize = 1000;
    pub const SWEEP_SIZES: [usize; 4] = [40, 60, 80, 100];
    pub const FIG1_SIZES: [usize; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];
    pub const FIG2_SIZES: [usize; 3] = [60, 80, 100];
    /// Frequency ray `0.01i -> 0.5i` in steps of `0.002i`.
    pub const FREQ_ORIGIN: C64 = C64::new(0.0, 0.01);
    pub const FREQ_T_MAX: f64 = 0.49;
    pub const FREQ_STEPS: usize = 245;
    pub const QUADRATURE_SAMPLES: usize = 256;
    pub const DISORDER_OMEGA: C64 = C64::new(0.0, 0.25);
    pub const HALF_WIDTH: f64 = 0.05;
    pub const TRIALS: usize = 100;
    pub const SEED: u64 = 1;
    pub const FIGS1_SIZE: usize = 100;
    pub const FIGS1_OMEGA: C64 = C64::new(0.0, 2.8);
    pub const FIGS1_SITES: [usize; 2] = [10, 90];
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Version string written to manifests: `RESPOND_GIT_DESCRIBE` at build
/// time when set, otherwise `v<crate version>`.
pub fn version() -> String {
    match option_env!("RESPOND_GIT_DESCRIBE") {
        Some(v) => v.to_string(),
        None => format!("v{}", env!("CARGO_PKG_VERSION")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub name: String,
    pub task: Task,
    pub version: String,
    pub inputs: ExperimentConfig,
    /// Seconds.
    pub wall_time: f64,
    pub threads: usize,
    /// `"ok"` or `"failed"`.
    pub status: String,
    pub error: Option<String>,
    pub files: Vec<FileEntry>,
    /// Scalar results of the task (transition frequencies, fitted kinks, ...).
    pub summary: BTreeMap<String, Value>,
}

#[derive(Debug)]
pub enum RunError {
    /// Rejected before anything was written.
    Config(Error),
    /// Failed while running; the partial manifest has been written.
    Numerical { error: Error, manifest: Box<Manifest> },
    /// Artifact could not be written.
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } | RunError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "configuration error: {e}"),
            RunError::Numerical { error, .. } => write!(f, "numerical failure: {error}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Overrides `output_dir` of the config.
    pub out_dir: Option<PathBuf>,
}

/// Collects written tables and summary values.
struct Sink {
    dir: PathBuf,
    files: Vec<FileEntry>,
    summary: BTreeMap<String, Value>,
    io_error: Option<std::io::Error>,
}

impl Sink {
    fn emit(&mut self, t: &Table) -> Result<()> {
        match t.write(&self.dir) {
            Ok(e) => {
                info!("wrote {} ({} rows)", e.path, e.rows);
                self.files.push(e);
                Ok(())
            }
            Err(e) => {
                let msg = format!("writing {}: {e}", t.name);
                self.io_error = Some(e);
                Err(Error::InvalidArgument(msg))
            }
        }
    }

    fn note(&mut self, key: &str, v: Value) {
        self.summary.insert(key.to_string(), v);
    }
}

/// Runs `config` and writes its artifacts plus `manifest.json`.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> std::result::Result<Manifest, RunError> {
    config.validate().map_err(RunError::Config)?;
    if opts.threads == Some(0) {
        return Err(RunError::Config(Error::InvalidArgument(
            "threads must be at least 1".into(),
        )));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| RunError::Config(Error::InvalidArgument(format!("thread pool: {e}"))))?;
    let dir = opts.out_dir.clone().unwrap_or_else(|| config.output_dir.clone());
    std::fs::create_dir_all(&dir).map_err(|e| {
        RunError::Config(Error::InvalidArgument(format!(
            "cannot create {}: {e}",
            dir.display()
        )))
    })?;

    let start = Instant::now();
    let mut sink = Sink {
        dir: dir.clone(),
        files: Vec::new(),
        summary: BTreeMap::new(),
        io_error: None,
    };
    let outcome = pool.install(|| dispatch(config, &mut sink));
    let io_error = sink.io_error.take();
    let manifest = Manifest {
        name: config.name.clone(),
        task: config.task,
        version: version(),
        inputs: config.clone(),
        wall_time: start.elapsed().as_secs_f64(),
        threads: pool.current_num_threads(),
        status: if outcome.is_ok() { "ok" } else { "failed" }.into(),
        error: outcome.as_ref().err().map(|e| e.to_string()),
        files: sink.files,
        summary: sink.summary,
    };
    write_manifest(&dir, &manifest).map_err(RunError::Io)?;
    match (outcome, io_error) {
        (Ok(()), _) => Ok(manifest),
        (Err(_), Some(e)) => Err(RunError::Io(e)),
        (Err(error), None) => Err(RunError::Numerical {
            error,
            manifest: Box::new(manifest),
        }),
    }
}

fn write_manifest(dir: &Path, m: &Manifest) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(m).expect("manifest serializes");
    text.push('\n');
    std::fs::write(dir.join(MANIFEST_NAME), text)
}

fn dispatch(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let ctx = Ctx::new(cfg);
    match cfg.task {
        Task::Spectrum => ctx.spectrum(sink),
        Task::Curves => ctx.curves(sink),
        Task::WindingMap => ctx.winding_map(sink),
        Task::GreensSweep => ctx.greens_sweep(sink),
        Task::FreqSweep => ctx.freq_sweep(sink),
        Task::AnalyticCompare => ctx.analytic_compare(sink),
        Task::Disorder => ctx.disorder(sink),
        Task::Fig1 => ctx.fig1(sink),
        Task::Fig2 => ctx.fig2(sink),
        Task::Fig3 => ctx.fig3(sink),
        Task::FigS1 => ctx.fig_s1(sink),
    }
}

fn pair(z: C64) -> Value {
    json!([z.re, z.im])
}

#[derive(Clone, Copy)]
struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    p: ModelParams,
    bc: BoundaryKind,
    solve: SolveOptions,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            p: cfg.params.params(),
            bc: cfg.params.boundary,
            solve: SolveOptions {
                cond_limit: cfg
                    .options
                    .cond_limit
                    .unwrap_or(crate::greens::numeric::DEFAULT_COND_LIMIT),
            },
        }
    }

    fn o(&self) -> &super::config::TaskOptions {
        &self.cfg.options
    }

    fn sizes_or(&self, d: &[usize]) -> Vec<usize> {
        self.o().sizes.clone().unwrap_or_else(|| d.to_vec())
    }

    fn omegas_or(&self, d: &[C64]) -> Vec<C64> {
        self.o().omega_list().unwrap_or_else(|| d.to_vec())
    }

    fn rules_or(&self, d: &[EndpointRule]) -> Vec<EndpointRule> {
        self.o().rules.clone().unwrap_or_else(|| d.to_vec())
    }

    fn freq_ray(&self) -> Ray {
        self.o().ray.unwrap_or(Ray {
            origin: defaults::FREQ_ORIGIN,
            direction: C64::new(0.0, 1.0),
            t_max: defaults::FREQ_T_MAX,
            steps: defaults::FREQ_STEPS,
        })
    }

    fn has_delta(&self) -> bool {
        self.p.delta.norm() > 0.0
    }

    // ---- building blocks ----

    fn spectra_table(&self, name: &str, sizes: &[usize], m: usize) -> Result<Table> {
        let mut t = Table::new(name, &tables::SPECTRUM_COLUMNS);
        tables::spectrum_rows(&mut t, &spectra::pbc_spectrum(&self.p, m)?);
        tables::spectrum_rows(&mut t, &spectra::obc_spectrum(&self.p, m)?);
        for &n in sizes {
            tables::spectrum_rows(&mut t, &spectra::pobc_spectrum(&self.p.with_sites(n))?);
        }
        Ok(t)
    }

    /// Numeric entries at several sizes; near-singular solves become flagged rows.
    fn size_rows(
        &self,
        t: &mut Table,
        bc: BoundaryKind,
        p: &ModelParams,
        omega: C64,
        sizes: &[usize],
        rule: EndpointRule,
    ) -> Result<()> {
        let rows: Vec<Result<(usize, std::result::Result<GreenResult, f64>)>> = sizes
            .par_iter()
            .map(|&n| {
                let pn = p.with_sites(n);
                let (k, l) = rule.sites(n);
                let h = build_hamiltonian(&pn, bc, None)?;
                match resolvent_column_with(&h, omega, l, &self.solve) {
                    Ok(col) => Ok((n, Ok(numeric_result(&pn, bc, GreenQuery::new(k, l, omega), &col)))),
                    Err(Error::NearSingular { cond }) => Ok((n, Err(cond))),
                    Err(e) => Err(e),
                }
            })
            .collect();
        for r in rows {
            match r? {
                (_, Ok(g)) => tables::greens_row(t, &g),
                (n, Err(cond)) => {
                    let (k, l) = rule.sites(n);
                    tables::near_singular_row(t, n, k, l, omega, bc, cond)
                }
            }
        }
        Ok(())
    }

    fn freq_rows(
        &self,
        t: &mut Table,
        bc: BoundaryKind,
        p: &ModelParams,
        rule: EndpointRule,
        ray: &Ray,
    ) -> Result<Option<C64>> {
        let omegas: Vec<C64> = (0..=ray.steps)
            .map(|j| ray.at(ray.t_max * j as f64 / ray.steps as f64))
            .collect();
        let sweep = crate::greens::numeric::frequency_sweep(p, bc, &omegas, rule, &self.solve)?;
        let (k, l) = rule.sites(p.n_sites);
        for row in &sweep.rows {
            match (&row.result, row.near_singular) {
                (Some(g), _) => tables::greens_row(t, g),
                (None, Some(cond)) => tables::near_singular_row(t, p.n_sites, k, l, row.omega, bc, cond),
                (None, None) => unreachable!("row has either a result or a flag"),
            }
        }
        Ok(sweep.steepest)
    }

    /// Numeric and closed-form profile over `k` for fixed `l`.
    fn profile_rows(&self, t: &mut Table, p: &ModelParams, omega: C64, l: usize, terms: bool) -> Result<()> {
        let scales = critical_scales(p, omega)?;
        let h = build_hamiltonian(p, BoundaryKind::Pobc, None)?;
        let col = resolvent_column_with(&h, omega, l, &self.solve)?;
        let regime = analytic::classify_regime(p, omega)?;
        let rows: Vec<Result<Vec<GreenResult>>> = (1..=p.n_sites)
            .into_par_iter()
            .map(|k| {
                let mut out = vec![numeric_result(
                    p,
                    BoundaryKind::Pobc,
                    GreenQuery::new(k, l, omega),
                    &col,
                )];
                let cf = analytic::closed_form_terms_in(p, regime, omega, k, l)?;
                let base = GreenResult {
                    query: GreenQuery::new(k, l, omega),
                    n_sites: p.n_sites,
                    boundary: BoundaryKind::Pobc,
                    value: cf.total(),
                    method: Method::ClosedForm,
                    regime: Some(regime),
                    cond_estimate: None,
                    dominant: Some(cf.dominant()),
                };
                out.push(base);
                if terms {
                    for (label, v) in &cf.terms {
                        out.push(GreenResult {
                            value: *v,
                            method: Method::ClosedFormTerm(*label),
                            dominant: Some(*label),
                            ..base
                        });
                    }
                }
                Ok(out)
            })
            .collect();
        for r in rows {
            for g in r? {
                tables::analytic_row(t, &g, Some(scales.n_0), Some(scales.n_1));
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn contour_rows(
        &self,
        t: &mut Table,
        p: &ModelParams,
        omega: C64,
        k: usize,
        l: usize,
        q_range: [i32; 2],
        scales: &CriticalScales,
    ) -> Result<()> {
        let m = self
            .o()
            .quadrature_samples
            .unwrap_or(defaults::QUADRATURE_SAMPLES);
        let regime = analytic::classify_regime(p, omega)?;
        let terms: Vec<Result<analytic::ExpansionTerm>> = (q_range[0]..=q_range[1])
            .into_par_iter()
            .map(|q| analytic::expansion_term(p, omega, k, l, q, m))
            .collect();
        for term in terms {
            let term = term?;
            let g = GreenResult {
                query: GreenQuery::new(k, l, omega),
                n_sites: p.n_sites,
                boundary: BoundaryKind::Pobc,
                value: term.value,
                method: Method::ContourQ(term.q),
                regime: Some(regime),
                cond_estimate: None,
                dominant: None,
            };
            tables::analytic_row(t, &g, Some(scales.n_0), Some(scales.n_1));
        }
        Ok(())
    }

    /// Kink of `log10|G_{k,l}|` against the distance `|k - l|` on the side
    /// selected by `towards_start`.
    fn kink(&self, p: &ModelParams, omega: C64, l: usize, towards_start: bool) -> Result<Option<Kink>> {
        let h = build_hamiltonian(p, BoundaryKind::Pobc, None)?;
        let col = resolvent_column_with(&h, omega, l, &self.solve)?;
        let ks: Vec<usize> = if towards_start {
            (1..=l).rev().collect()
        } else {
            (l..=p.n_sites).collect()
        };
        let x: Vec<f64> = ks.iter().map(|&k| k.abs_diff(l) as f64).collect();
        let y: Vec<f64> = ks.iter().map(|&k| col.entry(k).norm().log10()).collect();
        match crossover_detect(&x, &y) {
            Ok(k) => Ok(Some(k)),
            Err(Error::NoKink) | Err(Error::InvalidArgument(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn regime_scan(&self, sink: &mut Sink, ray: &Ray) -> Result<()> {
        if !self.has_delta() {
            return Ok(());
        }
        match winding::regime_boundary_scan(&self.p, ray) {
            Ok(b) => {
                sink.note("omega_c", pair(b.omega_c));
                sink.note("winding_before", json!(b.winding_before));
                sink.note("winding_after", json!(b.winding_after));
            }
            Err(Error::NoTransition) => sink.note("omega_c", Value::Null),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    // ---- tasks ----

    fn spectrum(&self, sink: &mut Sink) -> Result<()> {
        let sizes = self.sizes_or(&[self.p.n_sites]);
        let m = self.o().samples.unwrap_or(defaults::SPECTRUM_SAMPLES);
        let t = self.spectra_table("spectrum.csv", &sizes, m)?;
        sink.emit(&t)?;
        if self.has_delta() {
            sink.note("n_c", json!(self.p.critical_length()?));
        }
        Ok(())
    }

    fn curve_table(&self, name: &str, m: usize, full: bool) -> Result<Table> {
        let mut t = Table::new(name, &tables::CURVE_COLUMNS);
        let (bz, gbz) = curves::standard_curves(&self.p, m)?;
        tables::curve_rows(&mut t, &bz);
        tables::curve_rows(&mut t, &gbz);
        if full {
            if self.has_delta() {
                let (r1, r2) = curves::rgbz_circles(&self.p, m)?;
                tables::curve_rows(&mut t, &r1);
                tables::curve_rows(&mut t, &r2);
                tables::curve_rows(&mut t, &curves::cgbz_curve(&self.p, 1, m)?);
                tables::curve_rows(&mut t, &curves::cgbz_curve(&self.p, 2, m)?);
            } else {
                warn!("delta = 0: rGBZ and cGBZ are undefined and are skipped");
            }
        }
        let f = curves::fgbz_points(&spectra::pobc_spectrum(&self.p)?);
        tables::point_rows(&mut t, CurveLabel::Fgbz1, &f.fgbz1, f.n_sites);
        tables::point_rows(&mut t, CurveLabel::Fgbz2, &f.fgbz2, f.n_sites);
        Ok(t)
    }

    fn curves(&self, sink: &mut Sink) -> Result<()> {
        let m = self.o().samples.unwrap_or(defaults::CURVE_SAMPLES);
        sink.emit(&self.curve_table("curves.csv", m, true)?)
    }

    fn contour(&self, label: CurveLabel, m: usize) -> Result<curves::Curve> {
        match label {
            CurveLabel::Bz => Ok(curves::standard_curves(&self.p, m)?.0),
            CurveLabel::Gbz => Ok(curves::standard_curves(&self.p, m)?.1),
            CurveLabel::Rgbz1 => Ok(curves::rgbz_circles(&self.p, m)?.0),
            CurveLabel::Rgbz2 => Ok(curves::rgbz_circles(&self.p, m)?.1),
            CurveLabel::Cgbz1 => curves::cgbz_curve(&self.p, 1, m),
            CurveLabel::Cgbz2 => curves::cgbz_curve(&self.p, 2, m),
            CurveLabel::Fgbz1 | CurveLabel::Fgbz2 => Err(Error::InvalidArgument(format!(
                "{label} is a finite point set, not a contour"
            ))),
        }
    }

    fn winding_map(&self, sink: &mut Sink) -> Result<()> {
        let m = self.o().samples.unwrap_or(winding::SCAN_SAMPLES);
        let (re, im, n_re, n_im) = defaults::WINDING_GRID;
        let grid = self
            .o()
            .grid
            .unwrap_or(super::config::Grid { re, im, n_re, n_im });
        let labels = self
            .o()
            .contours
            .clone()
            .unwrap_or_else(|| vec![CurveLabel::Cgbz1]);
        let points = grid.points();
        let mut t = Table::new("winding_map.csv", &tables::WINDING_COLUMNS);
        for label in labels {
            let c = self.contour(label, m)?;
            let values: Vec<Result<Option<i64>>> = points
                .par_iter()
                .map(|&w| match winding::winding_number(&c, &self.p, w) {
                    Ok(r) => Ok(Some(r.value)),
                    Err(Error::OmegaOnImage { .. }) | Err(Error::UnresolvedWinding { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect();
            for (w, v) in points.iter().zip(values) {
                tables::winding_row(&mut t, *w, label, v?);
            }
        }
        sink.emit(&t)?;
        let ray = self
            .o()
            .ray
            .unwrap_or(Ray::imaginary_axis(defaults::SCAN_TOP, defaults::SCAN_STEPS));
        self.regime_scan(sink, &ray)
    }

    fn greens_sweep(&self, sink: &mut Sink) -> Result<()> {
        let sizes = self.sizes_or(&defaults::SWEEP_SIZES);
        let mut t = Table::new("greens_sweep.csv", &tables::GREENS_COLUMNS);
        for omega in self.omegas_or(&[OMEGA_1]) {
            for rule in self.rules_or(&[EndpointRule::LastFirst]) {
                self.size_rows(&mut t, self.bc, &self.p, omega, &sizes, rule)?;
            }
        }
        sink.emit(&t)
    }

    fn freq_sweep(&self, sink: &mut Sink) -> Result<()> {
        let ray = self.freq_ray();
        let mut t = Table::new("freq_sweep.csv", &tables::GREENS_COLUMNS);
        for rule in self.rules_or(&[EndpointRule::LastFirst, EndpointRule::FirstLast]) {
            let s = self.freq_rows(&mut t, self.bc, &self.p, rule, &ray)?;
            sink.note(
                &format!("steepest_{}", rule_key(rule)),
                s.map(pair).unwrap_or(Value::Null),
            );
        }
        sink.emit(&t)?;
        self.regime_scan(sink, &ray)
    }

    fn analytic_compare(&self, sink: &mut Sink) -> Result<()> {
        let mut t = Table::new("analytic_compare.csv", &analytic_columns());
        for n in self.sizes_or(&[self.p.n_sites]) {
            let p = self.p.with_sites(n);
            for omega in self.omegas_or(&[OMEGA_1, OMEGA_2]) {
                let l = self.o().l.unwrap_or(SiteRef::Index(1)).resolve(n)?;
                self.profile_rows(&mut t, &p, omega, l, true)?;
                if let Some(q_range) = self.o().q_range {
                    let k = self.o().k.unwrap_or(SiteRef::Last).resolve(n)?;
                    let scales = critical_scales(&p, omega)?;
                    self.contour_rows(&mut t, &p, omega, k, l, q_range, &scales)?;
                }
            }
        }
        sink.emit(&t)
    }

    fn disorder_tables(
        &self,
        sink: &mut Sink,
        prefix: &str,
        omegas: &[C64],
        targets: &[DisorderTarget],
    ) -> Result<()> {
        let o = self.o();
        let l = o.l.unwrap_or(SiteRef::Index(1)).resolve(self.p.n_sites)?;
        let w = o.half_width.unwrap_or(defaults::HALF_WIDTH);
        let trials = o.trials.unwrap_or(defaults::TRIALS);
        let seed = o.seed.unwrap_or(defaults::SEED);
        let mut t = Table::new(&format!("{prefix}.csv"), &tables::DISORDER_COLUMNS);
        let mut single = Table::new(&format!("{prefix}_single.csv"), &tables::DISORDER_SINGLE_COLUMNS);
        let mut trends = serde_json::Map::new();
        for &omega in omegas {
            for &target in targets {
                let spec = DisorderSpec::new(target, w, seed);
                let prof = disorder::error_profile(&self.p, self.bc, omega, l, &spec, trials)?;
                for s in &prof {
                    tables::disorder_row(&mut t, s);
                }
                let tail: Vec<f64> = prof[prof.len() * 3 / 4..]
                    .iter()
                    .map(|s| s.median_abs_err)
                    .collect();
                let mk = mann_kendall(&tail);
                trends.insert(
                    format!("{}_{}", target.as_str(), omega),
                    json!({"omega": pair(omega), "s": mk.s, "z": mk.z, "trend": mk.trend}),
                );
                if let Some(trial) = o.single_trial {
                    let errs = disorder::single_realization(&self.p, self.bc, omega, l, &spec, trial)?;
                    for (k, e) in errs.iter().enumerate() {
                        single.push(vec![
                            (k + 1).to_string(),
                            l.to_string(),
                            tables::num(omega.re),
                            tables::num(omega.im),
                            target.as_str().into(),
                            tables::num(w),
                            trial.to_string(),
                            tables::num(*e),
                        ]);
                    }
                }
            }
        }
        sink.emit(&t)?;
        if o.single_trial.is_some() {
            sink.emit(&single)?;
        }
        sink.note("tail_trend", Value::Object(trends));
        Ok(())
    }

    fn disorder(&self, sink: &mut Sink) -> Result<()> {
        let omegas = self.omegas_or(&[defaults::DISORDER_OMEGA]);
        let targets = self
            .o()
            .targets
            .clone()
            .unwrap_or_else(|| vec![DisorderTarget::Hoppings]);
        self.disorder_tables(sink, "disorder", &omegas, &targets)
    }

    fn fig1(&self, sink: &mut Sink) -> Result<()> {
        sink.emit(&self.spectra_table("fig1_spectra.csv", &[20, 60], defaults::SPECTRUM_SAMPLES)?)?;
        let p60 = self.p.with_sites(60);
        let fig = Ctx { p: p60, ..*self };
        sink.emit(&fig.curve_table("fig1_curves.csv", defaults::SPECTRUM_SAMPLES, false)?)?;

        let sizes = self.sizes_or(&defaults::FIG1_SIZES);
        let obc = self.p.with_delta(0.0);
        let mut t = Table::new("fig1_size_sweep.csv", &tables::GREENS_COLUMNS);
        for (bc, p) in [(BoundaryKind::Pobc, &self.p), (BoundaryKind::Obc, &obc)] {
            for omega in [OMEGA_1, OMEGA_2] {
                for rule in [EndpointRule::FirstLast, EndpointRule::LastFirst] {
                    self.size_rows(&mut t, bc, p, omega, &sizes, rule)?;
                }
            }
        }
        sink.emit(&t)?;

        let ray = self.freq_ray();
        let mut t = Table::new("fig1_freq_sweep.csv", &tables::GREENS_COLUMNS);
        for (bc, p) in [
            (BoundaryKind::Pobc, p60),
            (BoundaryKind::Obc, p60.with_delta(0.0)),
        ] {
            for rule in [EndpointRule::LastFirst, EndpointRule::FirstLast] {
                let s = self.freq_rows(&mut t, bc, &p, rule, &ray)?;
                if bc == BoundaryKind::Pobc {
                    sink.note(
                        &format!("steepest_{}", rule_key(rule)),
                        s.map(pair).unwrap_or(Value::Null),
                    );
                }
            }
        }
        sink.emit(&t)?;
        if self.has_delta() {
            sink.note("n_c", json!(self.p.critical_length()?));
        }
        fig.regime_scan(
            sink,
            &Ray::imaginary_axis(defaults::SCAN_TOP, defaults::SCAN_STEPS),
        )
    }

    fn fig2(&self, sink: &mut Sink) -> Result<()> {
        let p60 = self.p.with_sites(60);
        let mut t = Table::new("fig2_cgbz1.csv", &tables::CURVE_COLUMNS);
        tables::curve_rows(&mut t, &curves::cgbz_curve(&p60, 1, defaults::CURVE_SAMPLES)?);
        let f = curves::fgbz_points(&spectra::pobc_spectrum(&p60)?);
        tables::point_rows(&mut t, CurveLabel::Fgbz1, &f.fgbz1, f.n_sites);
        sink.emit(&t)?;
        for (name, omega) in [("omega_1", OMEGA_1), ("omega_2", OMEGA_2)] {
            let r = crate::roots::bloch_roots(&p60, omega)?;
            let regime = analytic::classify_regime(&p60, omega)?;
            sink.note(
                name,
                json!({"omega": pair(omega), "beta_a": pair(r.beta_a), "beta_b": pair(r.beta_b), "regime": regime}),
            );
        }

        let sizes = self.sizes_or(&defaults::FIG2_SIZES);
        let mut prof = Table::new("fig2_profiles.csv", &analytic_columns());
        let mut kinks = Table::new("fig2_kinks.csv", &tables::KINK_COLUMNS);
        for &n in &sizes {
            let p = self.p.with_sites(n);
            self.profile_rows(&mut prof, &p, OMEGA_1, 1, false)?;
            self.profile_rows(&mut prof, &p, OMEGA_2, n, true)?;
            let scales = critical_scales(&p, OMEGA_2)?;
            let k = self.kink(&p, OMEGA_2, n, true)?;
            tables::kink_row(&mut kinks, n, OMEGA_2, n, "n0", scales.n_0, k.as_ref());
        }
        sink.emit(&prof)?;
        sink.emit(&kinks)
    }

    fn fig3(&self, sink: &mut Sink) -> Result<()> {
        let omegas = self.omegas_or(&[defaults::DISORDER_OMEGA, OMEGA_2]);
        let targets = self
            .o()
            .targets
            .clone()
            .unwrap_or_else(|| vec![DisorderTarget::Hoppings, DisorderTarget::Onsite]);
        let mut cfg = self.cfg.clone();
        cfg.options.single_trial = cfg.options.single_trial.or(Some(0));
        let ctx = Ctx::new(&cfg);
        ctx.disorder_tables(sink, "fig3_disorder", &omegas, &targets)
    }

    fn fig_s1(&self, sink: &mut Sink) -> Result<()> {
        let n = self.o().sizes.as_ref().map_or(defaults::FIGS1_SIZE, |s| s[0]);
        let omega = self.o().omega_list().map_or(defaults::FIGS1_OMEGA, |w| w[0]);
        let p = self.p.with_sites(n);
        let scales = critical_scales(&p, omega)?;
        let mut prof = Table::new("figS1_profiles.csv", &analytic_columns());
        let mut kinks = Table::new("figS1_kinks.csv", &tables::KINK_COLUMNS);
        for l in defaults::FIGS1_SITES {
            if l > n {
                return Err(Error::SiteOutOfRange { site: l, n_sites: n });
            }
            self.profile_rows(&mut prof, &p, omega, l, true)?;
        }
        let (lo, hi) = (defaults::FIGS1_SITES[0], defaults::FIGS1_SITES[1]);
        let k = self.kink(&p, omega, lo, false)?;
        tables::kink_row(&mut kinks, n, omega, lo, "n1", scales.n_1, k.as_ref());
        let k = self.kink(&p, omega, hi, true)?;
        tables::kink_row(&mut kinks, n, omega, hi, "n0", scales.n_0, k.as_ref());
        sink.emit(&prof)?;
        sink.emit(&kinks)?;
        sink.note(
            "critical_scales",
            serde_json::to_value(scales).expect("plain struct"),
        );
        Ok(())
    }
}

fn rule_key(rule: EndpointRule) -> &'static str {
    match rule {
        EndpointRule::LastFirst => "n1",
        EndpointRule::FirstLast => "1n",
    }
}

/// Greens columns followed by `dominant_q, regime, n0, n1`.
pub fn analytic_columns() -> Vec<&'static str> {
    tables::GREENS_COLUMNS
        .iter()
        .chain(tables::ANALYTIC_EXTRA_COLUMNS.iter())
        .copied()
        .collect()
}
