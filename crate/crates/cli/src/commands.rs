use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use stablelike_core::census::{
    concentration_check, double_jump_limsup_census, family_census, grow_tree, probe_grid,
};
use stablelike_core::fractal::{
    g_spectrum, image_dim_bounds, index_range, local_dim, spectrum_envelope, IndexSet, Mode,
    Segment, SpectrumCase, Variant, Window, DEFAULT_GAP_RESOLUTION,
};
use stablelike_core::occupation::OccupationMeasure;
use stablelike_core::ppp::PointProcess;
use stablelike_core::process::{build_stable_like, build_subordinator, JumpPath};
use stablelike_core::rng::trial_seed;

use crate::config::{ExperimentConfig, Format};
use crate::table::{Cell, Table};

/// A validated configuration together with where and how to run it.
pub struct RunContext {
    pub config: ExperimentConfig,
    pub out: PathBuf,
    pub jobs: usize,
}

impl RunContext {
    fn file(&self, stem: &str, trial: u64, ext: &str) -> PathBuf {
        self.out.join(format!("{stem}_{trial:04}.{ext}"))
    }

    fn ext(&self) -> &'static str {
        self.config.format.extension()
    }

    fn sample(&self, seed: u64) -> Result<PointProcess> {
        Ok(PointProcess::sample(self.config.horizon, self.config.z_min, seed)?)
    }

    fn stable_like(&self, seed: u64) -> Result<(PointProcess, JumpPath)> {
        let pp = self.sample(seed)?;
        let path = build_stable_like(&pp, &self.config.beta.build()?);
        Ok((pp, path))
    }

    /// Runs `f(trial, seed)` for every trial and reports the ones that
    /// failed.
    fn trials<F>(&self, f: F) -> Result<()>
    where
        F: Fn(u64, u64) -> Result<()> + Sync,
    {
        let n = self.config.trials;
        if n == 0 {
            return Ok(());
        }
        create_out(&self.out)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .context("starting worker pool")?;
        let base = self.config.seed;
        let mut failed: Vec<(u64, anyhow::Error)> = pool.install(|| {
            (0..n)
                .into_par_iter()
                .filter_map(|i| f(i, trial_seed(base, i)).err().map(|e| (i, e)))
                .collect()
        });
        if failed.is_empty() {
            return Ok(());
        }
        failed.sort_by_key(|f| f.0);
        for (i, e) in &failed {
            eprintln!("trial {i}: {e:#}");
        }
        let ids: Vec<u64> = failed.iter().map(|f| f.0).collect();
        bail!("{} of {n} trials failed: {ids:?}", ids.len())
    }

    fn write_table(&self, path: &Path, table: &Table) -> Result<()> {
        match self.config.format {
            Format::Csv => write_with(path, |w| table.write_csv(w)),
            Format::Json => write_json(path, &table.to_json()),
        }
    }
}

fn create_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProcessKind {
    /// The state-dependent process built from the configured index map.
    StableLike,
    /// The stable subordinator; needs a constant index.
    Subordinator,
}

/// Path files per trial: `path_NNNN.csv` with `path_NNNN.meta.json`, or a
/// single `path_NNNN.json`.
pub fn simulate(ctx: &RunContext, process: ProcessKind) -> Result<()> {
    let alpha = ctx.config.beta.constant_alpha();
    if process == ProcessKind::Subordinator && alpha.is_none() {
        bail!("the subordinator needs a constant index (set --alpha or a constant beta)");
    }
    let version = env!("CARGO_PKG_VERSION");
    // the output directory does not affect the data
    let config = ExperimentConfig {
        out: None,
        ..ctx.config.clone()
    };
    ctx.trials(|i, seed| {
        let pp = ctx.sample(seed)?;
        let path = match process {
            ProcessKind::StableLike => build_stable_like(&pp, &ctx.config.beta.build()?),
            ProcessKind::Subordinator => build_subordinator(&pp, alpha.expect("checked"))?,
        };
        let meta = json!({
            "trial": i,
            "version": version,
            "config": config,
            "path": path.meta(Some(&pp)),
        });
        match ctx.config.format {
            Format::Csv => {
                write_with(&ctx.file("path", i, "csv"), |w| path.write_csv(w))?;
                write_json(&ctx.file("path", i, "meta.json"), &meta)
            }
            Format::Json => {
                let doc = json!({
                    "meta": meta,
                    "t": path.jump_times(),
                    "value_after": path.values_after(),
                });
                write_json(&ctx.file("path", i, "json"), &doc)
            }
        }
    })
}

/// Atoms of the occupation measure of the stable-like path.
pub fn occupation(ctx: &RunContext) -> Result<()> {
    ctx.trials(|i, seed| {
        let (_, path) = ctx.stable_like(seed)?;
        let om = OccupationMeasure::from_path(&path);
        let file = ctx.file("occupation", i, ctx.ext());
        match ctx.config.format {
            Format::Csv => write_with(&file, |w| om.write_csv(w)),
            Format::Json => {
                let durations: Vec<f64> = om.durations().collect();
                write_json(
                    &file,
                    &json!({
                        "total": om.total(),
                        "level": om.levels(),
                        "duration": durations,
                        "cumulative": om.cumulative(),
                    }),
                )
            }
        }
    })
}

/// Local dimension estimates of `μ` at `ℳ_t` for `points` equally spaced
/// times inside `(0, H)`.
pub fn localdim(ctx: &RunContext, points: u32) -> Result<()> {
    let window = ctx.config.estimator.window();
    ctx.trials(|i, seed| {
        let (_, path) = ctx.stable_like(seed)?;
        let om = OccupationMeasure::from_path(&path);
        let mut table = Table::new(&[
            "t",
            "x",
            "lower_est",
            "upper_est",
            "usable_scales",
            "low_confidence",
        ]);
        for k in 1..=points {
            let t = ctx.config.horizon * k as f64 / (points + 1) as f64;
            let x = path.eval(t)?;
            let e = local_dim(&om, x, window)?;
            table.push(vec![
                t.into(),
                x.into(),
                e.lower_est.into(),
                e.upper_est.into(),
                (e.usable_count as u64).into(),
                e.low_confidence.into(),
            ]);
        }
        ctx.write_table(&ctx.file("localdim", i, ctx.ext()), &table)
    })
}

/// Parses `0.3:0.5,0.6` into the closed segment `[0.3, 0.5]` and the point
/// `0.6`.
pub fn parse_index_set(text: &str) -> Result<IndexSet> {
    let mut segments = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let seg = match part.split_once(':') {
            Some((a, b)) => Segment::closed(number(a)?, number(b)?),
            None => Segment::point(number(part)?),
        };
        segments.push(seg);
    }
    Ok(IndexSet::from_segments(segments)?)
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse().with_context(|| format!("not a number: {s:?}"))
}

#[derive(Debug, Clone, clap::Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 0.0)]
    pub h_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub h_max: f64,
    /// Number of grid points, ends included.
    #[arg(long, default_value_t = 201)]
    pub h_steps: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Space)]
    pub mode: ModeArg,
    /// Index set such as `0.3:0.5,0.6`; skips simulation.
    #[arg(long)]
    pub index_set: Option<String>,
    /// Open window of levels (space) or times (time) for simulated paths.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub window_lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub window_hi: f64,
    /// Index jumps narrower than this are not treated as holes.
    #[arg(long, default_value_t = DEFAULT_GAP_RESOLUTION)]
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Space,
    Time,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Space => Mode::Space,
            ModeArg::Time => Mode::Time,
        }
    }
}

fn case_name(case: SpectrumCase) -> String {
    match case {
        SpectrumCase::Regular => "regular".into(),
        SpectrumCase::Empty => "empty".into(),
        SpectrumCase::DoublingBoundary => "doubling_boundary".into(),
        SpectrumCase::Exceptional(k) => format!("exceptional_{k}"),
    }
}

fn h_grid(a: &SpectrumArgs) -> Result<Vec<f64>> {
    if !(a.h_min >= 0.0 && a.h_min <= a.h_max && a.h_max.is_finite()) {
        bail!("need 0 <= h_min <= h_max, got [{}, {}]", a.h_min, a.h_max);
    }
    Ok(match a.h_steps {
        0 => Vec::new(),
        1 => vec![a.h_min],
        n => (0..n)
            .map(|k| a.h_min + (a.h_max - a.h_min) * k as f64 / (n - 1) as f64)
            .collect(),
    })
}

fn envelope_table(grid: &[f64], set: &IndexSet, mode: Mode) -> Table {
    let mut table = Table::new(&["h", "value", "case", "alpha_star"]);
    for &h in grid {
        let v = spectrum_envelope(h, set, mode);
        table.push(vec![
            h.into(),
            v.value.into(),
            Cell::Text(case_name(v.case)),
            v.alpha_star.into(),
        ]);
    }
    table
}

/// `(h, value)` tables of the upper spectrum.
///
/// With `--index-set` the envelope over that set is written once to
/// `spectrum.<ext>`. With a constant index the closed curve `g_α` (or
/// `g_α/α` in time mode) is written once. Otherwise each trial simulates a
/// path, reads off its index range in the window and writes the envelope.
pub fn spectrum(ctx: &RunContext, args: &SpectrumArgs) -> Result<()> {
    let grid = h_grid(args)?;
    let mode = Mode::from(args.mode);
    let single = ctx.out.join(format!("spectrum.{}", ctx.ext()));
    if let Some(text) = &args.index_set {
        let set = parse_index_set(text)?;
        create_out(&ctx.out)?;
        return ctx.write_table(&single, &envelope_table(&grid, &set, mode));
    }
    if let Some(alpha) = ctx.config.beta.constant_alpha() {
        let mut table = Table::new(&["h", "value"]);
        for &h in &grid {
            let g = g_spectrum(alpha, h, Variant::Closed);
            let v = match mode {
                Mode::Space => g,
                Mode::Time => g.scale_down(alpha),
            };
            table.push(vec![h.into(), v.into()]);
        }
        create_out(&ctx.out)?;
        return ctx.write_table(&single, &table);
    }
    let window = Window::new(args.window_lo, args.window_hi)?;
    ctx.trials(|i, seed| {
        let (_, path) = ctx.stable_like(seed)?;
        let beta = ctx.config.beta.build()?;
        let set = index_range(&path, &beta, window, mode, args.resolution)?;
        ctx.write_table(&ctx.file("spectrum", i, ctx.ext()), &envelope_table(&grid, &set, mode))
    })
}

/// Box dimension of `ℳ([a, b])` next to its predicted interval.
pub fn images(ctx: &RunContext, a: f64, b: f64, tol: f64) -> Result<()> {
    let (j_min, j_max) = (ctx.config.estimator.j_min, ctx.config.estimator.j_max);
    ctx.trials(|i, seed| {
        let (_, path) = ctx.stable_like(seed)?;
        let beta = ctx.config.beta.build()?;
        let r = image_dim_bounds(&path, &beta, a, b, j_min, j_max, tol)?;
        let mut table = Table::new(&[
            "a",
            "b",
            "predicted_lo",
            "predicted_hi",
            "slope",
            "slope_se",
            "contained",
        ]);
        table.push(vec![
            a.into(),
            b.into(),
            r.predicted.0.into(),
            r.predicted.1.into(),
            r.measured.slope.into(),
            r.measured.slope_se.into(),
            r.contained.into(),
        ]);
        ctx.write_table(&ctx.file("images", i, ctx.ext()), &table)
    })
}

#[derive(Debug, Clone, clap::Args)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 6)]
    pub n_min: u32,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Also write zero-jump and double-jump counts per ladder level.
    #[arg(long)]
    pub families: bool,
    /// Also grow the nested tree from this level-0 interval.
    #[arg(long)]
    pub tree: Option<u64>,
}

/// `#E_n(γ, ε)` against its expectation for each `n`, with optional family
/// and tree reports on the configured ladder.
pub fn census(ctx: &RunContext, args: &CensusArgs) -> Result<()> {
    if args.n_min > args.n_max {
        bail!("need n_min <= n_max");
    }
    let ladder = ctx.config.ladder.build()?;
    ctx.trials(|i, seed| {
        let pp = ctx.sample(seed)?;
        let mut table = Table::new(&["n", "threshold", "observed", "expected", "sd", "z"]);
        for n in args.n_min..=args.n_max {
            let r = double_jump_limsup_census(&pp, n, args.gamma, args.eps)?;
            table.push(vec![
                (n as u64).into(),
                r.threshold.into(),
                r.observed.into(),
                r.expected.into(),
                r.sd.into(),
                r.z_score().into(),
            ]);
        }
        ctx.write_table(&ctx.file("census", i, ctx.ext()), &table)?;
        if args.families {
            let mut fam = Table::new(&[
                "level",
                "eta",
                "intervals",
                "zero_jump",
                "double_jump",
                "p",
                "q",
            ]);
            for level in 0..=ladder.last() {
                let r = family_census(&pp, &ladder, level, args.gamma)?;
                fam.push(vec![
                    (level as u64).into(),
                    r.eta.into(),
                    r.intervals.into(),
                    r.zero_jump.into(),
                    r.double_jump.into(),
                    r.probabilities.p.into(),
                    r.probabilities.q.into(),
                ]);
            }
            ctx.write_table(&ctx.file("families", i, ctx.ext()), &fam)?;
        }
        if let Some(root) = args.tree {
            let report = grow_tree(&pp, root, &ladder, args.gamma)?;
            write_json(&ctx.file("tree", i, "json"), &report)?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, clap::Args)]
pub struct ConcentrationArgs {
    #[arg(long, default_value_t = 6)]
    pub n_min: u32,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Probe points per window of length `2⁻ⁿ`.
    #[arg(long, default_value_t = 4)]
    pub per_window: u32,
}

/// Scaled compensated small-jump increments against their threshold.
pub fn concentration(ctx: &RunContext, args: &ConcentrationArgs) -> Result<()> {
    if args.n_min > args.n_max {
        bail!("need n_min <= n_max");
    }
    ctx.trials(|i, seed| {
        let pp = ctx.sample(seed)?;
        let beta = ctx.config.beta.build()?;
        let mut table = Table::new(&[
            "n",
            "cutoff",
            "sup_stat",
            "threshold",
            "exceeds",
            "pairs",
            "slack_dropped",
        ]);
        for n in args.n_min..=args.n_max {
            let grid = probe_grid(ctx.config.horizon, n, args.per_window);
            let r = concentration_check(&pp, &beta, n, args.delta, &grid)?;
            table.push(vec![
                (n as u64).into(),
                r.cutoff.into(),
                r.sup_stat.into(),
                r.threshold.into(),
                r.exceeds.into(),
                r.pairs.into(),
                r.slack_dropped.into(),
            ]);
        }
        ctx.write_table(&ctx.file("concentration", i, ctx.ext()), &table)
    })
}
