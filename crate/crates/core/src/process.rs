//! Paths built from one [`PointProcess`]: the stable-like process `ℳ`, the
//! stable subordinators `ℒ^α` and time-changed subordinators `ℒ^f`.
//!
//! Every builder turns an event `(T, Z)` into the jump `Z^{1/index}`, computed
//! as `exp(−ln Z / index)` from the stored `−ln Z`. Because all builders use
//! the same expression, paths with equal indices agree bit for bit.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::ppp::{BlockSampler, PointProcess};

#[inline(always)]
fn jump(neg_log_z: f64, index: f64) -> f64 {
    (-neg_log_z / index).exp()
}

/// Piecewise-linear, non-decreasing stability index map `x ↦ β(x)`.
///
/// Values are clamped to the end knots outside the knot range. A single knot
/// gives a constant map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaFunction {
    epsilon0: f64,
    knots: Vec<(f64, f64)>,
}

impl BetaFunction {
    pub fn new(epsilon0: f64, knots: Vec<(f64, f64)>) -> Result<Self> {
        if !(epsilon0 > 0.0 && epsilon0 <= 0.5) {
            return param("epsilon0", format!("must lie in (0, 1/2], got {epsilon0}"));
        }
        if knots.is_empty() {
            return param("knots", "at least one knot is required");
        }
        for &(x, b) in &knots {
            if !x.is_finite() {
                return param("knots", format!("non-finite state value {x}"));
            }
            if !(b >= epsilon0 && b <= 1.0 - epsilon0) {
                return param(
                    "knots",
                    format!("index {b} outside [{epsilon0}, {}]", 1.0 - epsilon0),
                );
            }
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return param("knots", "state values must be strictly increasing");
            }
            if !(w[1].1 > w[0].1) {
                return param("knots", "index values must be strictly increasing");
            }
        }
        Ok(Self { epsilon0, knots })
    }

    /// Constant map `β ≡ alpha`, with the widest admissible margin.
    pub fn constant(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return param("alpha", format!("must lie in (0, 1), got {alpha}"));
        }
        Self::new(alpha.min(1.0 - alpha), vec![(0.0, alpha)])
    }

    /// Linear ramp from `lo` at `x = 0` to `hi` at `x = x_hi`, with margin
    /// `min(lo, 1 − hi)`.
    pub fn ramp(lo: f64, hi: f64, x_hi: f64) -> Result<Self> {
        Self::new(lo.min(1.0 - hi), vec![(0.0, lo), (x_hi, hi)])
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn is_constant(&self) -> bool {
        self.knots.len() == 1
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        let last = k[k.len() - 1];
        if x >= last.0 {
            return last.1;
        }
        let i = k.partition_point(|&(kx, _)| kx <= x);
        let (x0, b0) = k[i - 1];
        let (x1, b1) = k[i];
        b0 + (b1 - b0) * ((x - x0) / (x1 - x0))
    }

    pub fn min_value(&self) -> f64 {
        self.knots[0].1
    }

    pub fn max_value(&self) -> f64 {
        self.knots[self.knots.len() - 1].1
    }

    /// Largest slope between consecutive knots.
    pub fn lipschitz(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .fold(0.0, f64::max)
    }

    /// Expected mass of the jumps discarded below `z_min` over `[0, H]`, for
    /// the worst admissible index `1 − ε₀`.
    pub fn truncation_bias_bound(&self, horizon: f64, z_min: f64) -> f64 {
        let p = 1.0 / (1.0 - self.epsilon0) - 1.0;
        horizon * z_min.powf(p) / p
    }
}

/// Which recursion produced a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathKind {
    StableLike { beta: BetaFunction },
    Subordinator { alpha: f64 },
    TimeChanged { schedule: String },
    Synthetic,
}

/// Non-decreasing pure-jump step path on `[0, H]` starting at 0.
///
/// Jumps are stored in time order together with the value right after each
/// jump. Jumps far below one ulp of the running value leave it unchanged in
/// floating point, so `values_after` is non-decreasing rather than strictly
/// increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath {
    horizon: f64,
    kind: PathKind,
    jump_times: Vec<f64>,
    jump_sizes: Vec<f64>,
    values_after: Vec<f64>,
}

/// JSON metadata accompanying an exported path.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PathMeta {
    pub seed: Option<u64>,
    pub horizon: f64,
    pub z_min: f64,
    pub jumps: usize,
    pub final_value: f64,
    #[serde(flatten)]
    pub kind: PathKind,
    pub epsilon0: Option<f64>,
    pub truncation_bias_bound: Option<f64>,
}

fn accumulate(sizes: &[f64]) -> Vec<f64> {
    let mut v = 0.0;
    sizes
        .iter()
        .map(|&j| {
            v += j;
            v
        })
        .collect()
}

impl JumpPath {
    /// Builds a path from explicit jumps, e.g. to engineer a configuration.
    pub fn from_jumps(horizon: f64, jumps: &[(f64, f64)]) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return param("horizon", format!("must be finite and > 0, got {horizon}"));
        }
        for w in jumps.windows(2) {
            if !(w[1].0 > w[0].0) {
                return param("jumps", "jump times must be strictly increasing");
            }
        }
        for &(t, j) in jumps {
            if !(0.0..=horizon).contains(&t) {
                return param("jumps", format!("jump time {t} outside [0, {horizon}]"));
            }
            if !(j > 0.0 && j.is_finite()) {
                return param("jumps", format!("jump size {j} must be positive"));
            }
        }
        let jump_sizes: Vec<f64> = jumps.iter().map(|j| j.1).collect();
        Ok(Self {
            horizon,
            kind: PathKind::Synthetic,
            jump_times: jumps.iter().map(|j| j.0).collect(),
            values_after: accumulate(&jump_sizes),
            jump_sizes,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn kind(&self) -> &PathKind {
        &self.kind
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn jump_sizes(&self) -> &[f64] {
        &self.jump_sizes
    }

    pub fn values_after(&self) -> &[f64] {
        &self.values_after
    }

    pub fn len(&self) -> usize {
        self.jump_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jump_times.is_empty()
    }

    /// Value at the end of the horizon.
    pub fn final_value(&self) -> f64 {
        self.values_after.last().copied().unwrap_or(0.0)
    }

    /// Value just before jump `k`.
    pub fn value_before(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.values_after[k - 1]
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.horizon).contains(&t) {
            return param("t", format!("{t} outside [0, {}]", self.horizon));
        }
        Ok(())
    }

    /// Right-continuous value at `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.eval_unchecked(t))
    }

    /// Left limit at `t`.
    pub fn eval_left(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.eval_left_unchecked(t))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&s| s <= t);
        self.value_before(k)
    }

    #[inline]
    pub(crate) fn eval_left_unchecked(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&s| s < t);
        self.value_before(k)
    }

    /// Index range of the jumps with time in `(s, t]`.
    pub fn jumps_in(&self, s: f64, t: f64) -> std::ops::Range<usize> {
        let a = self.jump_times.partition_point(|&x| x <= s);
        let b = self.jump_times.partition_point(|&x| x <= t);
        a..b.max(a)
    }

    /// Increment over `(s, t]`, summed jump by jump.
    pub fn increment(&self, s: f64, t: f64) -> f64 {
        self.jump_sizes[self.jumps_in(s, t)].iter().sum()
    }

    pub fn meta(&self, pp: Option<&PointProcess>) -> PathMeta {
        let (epsilon0, bias) = match &self.kind {
            PathKind::StableLike { beta } => (
                Some(beta.epsilon0()),
                pp.map(|p| beta.truncation_bias_bound(self.horizon, p.z_min())),
            ),
            PathKind::Subordinator { alpha } => (
                None,
                pp.map(|p| {
                    let q = 1.0 / alpha - 1.0;
                    self.horizon * p.z_min().powf(q) / q
                }),
            ),
            _ => (None, None),
        };
        PathMeta {
            seed: pp.and_then(|p| p.seed()),
            horizon: self.horizon,
            z_min: pp.map_or(f64::NAN, |p| p.z_min()),
            jumps: self.len(),
            final_value: self.final_value(),
            kind: self.kind.clone(),
            epsilon0,
            truncation_bias_bound: bias,
        }
    }

    /// Writes `t,value_after` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value_after")?;
        for (t, v) in self.jump_times.iter().zip(&self.values_after) {
            writeln!(w, "{t:.16e},{v:.16e}")?;
        }
        Ok(())
    }
}

/// The stable-like process: jump `Z^{1/β(ℳ_{T−})}` at each event, with `β`
/// read at the pre-jump value.
pub fn build_stable_like(pp: &PointProcess, beta: &BetaFunction) -> JumpPath {
    let nl = pp.neg_log_sizes();
    let mut jump_sizes = Vec::with_capacity(nl.len());
    let mut values_after = Vec::with_capacity(nl.len());
    let mut v = 0.0;
    if beta.is_constant() {
        let a = beta.min_value();
        for &x in nl {
            let j = jump(x, a);
            v += j;
            jump_sizes.push(j);
            values_after.push(v);
        }
    } else {
        for &x in nl {
            let j = jump(x, beta.eval(v));
            v += j;
            jump_sizes.push(j);
            values_after.push(v);
        }
    }
    JumpPath {
        horizon: pp.horizon(),
        kind: PathKind::StableLike { beta: beta.clone() },
        jump_times: pp.times().to_vec(),
        jump_sizes,
        values_after,
    }
}

/// The stable subordinator `ℒ^α`: jump `Z^{1/α}` at each event.
pub fn build_subordinator(pp: &PointProcess, alpha: f64) -> Result<JumpPath> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param("alpha", format!("must lie in (0, 1), got {alpha}"));
    }
    let jump_sizes: Vec<f64> = pp.neg_log_sizes().iter().map(|&x| jump(x, alpha)).collect();
    Ok(JumpPath {
        horizon: pp.horizon(),
        kind: PathKind::Subordinator { alpha },
        jump_times: pp.times().to_vec(),
        values_after: accumulate(&jump_sizes),
        jump_sizes,
    })
}

/// Sum of `Z^{1/α}` over the events in `range`.
pub fn subordinator_sum(pp: &PointProcess, range: std::ops::Range<usize>, alpha: f64) -> f64 {
    pp.neg_log_sizes()[range].iter().map(|&x| jump(x, alpha)).sum()
}

/// A non-decreasing, càdlàg map of time into `(0, 1)` used as a time-varying
/// index.
pub trait IndexSchedule {
    /// `f(t−)`.
    fn left_limit(&self, t: f64) -> f64;
    /// Infimum and supremum of `f` over `[0, H]`.
    fn bounds(&self) -> (f64, f64);
    fn describe(&self) -> String;
}

/// `f ≡ alpha`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantIndex(pub f64);

impl IndexSchedule for ConstantIndex {
    fn left_limit(&self, _t: f64) -> f64 {
        self.0
    }
    fn bounds(&self) -> (f64, f64) {
        (self.0, self.0)
    }
    fn describe(&self) -> String {
        format!("constant {}", self.0)
    }
}

/// Right-continuous step function: `values[i]` on `[breaks[i−1], breaks[i])`,
/// with `values.len() == breaks.len() + 1`.
#[derive(Debug, Clone)]
pub struct StepIndex {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepIndex {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return param("values", "need exactly one more value than breakpoints");
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return param("breaks", "breakpoints must be strictly increasing");
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return param("values", "step values must be non-decreasing");
        }
        Ok(Self { breaks, values })
    }
}

impl IndexSchedule for StepIndex {
    fn left_limit(&self, t: f64) -> f64 {
        self.values[self.breaks.partition_point(|&b| b < t)]
    }
    fn bounds(&self) -> (f64, f64) {
        (self.values[0], self.values[self.values.len() - 1])
    }
    fn describe(&self) -> String {
        format!("step breaks={:?} values={:?}", self.breaks, self.values)
    }
}

/// `f(t) = β(ℳ_t)` for a built stable-like path.
#[derive(Debug, Clone, Copy)]
pub struct PathIndex<'a> {
    pub path: &'a JumpPath,
    pub beta: &'a BetaFunction,
}

impl IndexSchedule for PathIndex<'_> {
    fn left_limit(&self, t: f64) -> f64 {
        self.beta.eval(self.path.eval_left_unchecked(t))
    }
    fn bounds(&self) -> (f64, f64) {
        (
            self.beta.eval(0.0),
            self.beta.eval(self.path.final_value()),
        )
    }
    fn describe(&self) -> String {
        "beta of the stable-like path".to_string()
    }
}

/// The time-changed subordinator `ℒ^f`: jump `Z^{1/f(T−)}` at each event.
pub fn build_time_changed(pp: &PointProcess, f: &dyn IndexSchedule) -> Result<JumpPath> {
    let (lo, hi) = f.bounds();
    if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
        return param("f", format!("range [{lo}, {hi}] must lie inside (0, 1)"));
    }
    let jump_sizes: Vec<f64> = pp
        .times()
        .iter()
        .zip(pp.neg_log_sizes())
        .map(|(&t, &x)| jump(x, f.left_limit(t)))
        .collect();
    Ok(JumpPath {
        horizon: pp.horizon(),
        kind: PathKind::TimeChanged {
            schedule: f.describe(),
        },
        jump_times: pp.times().to_vec(),
        values_after: accumulate(&jump_sizes),
        jump_sizes,
    })
}

/// Relative tolerance of the coupling comparisons.
pub const COUPLING_RTOL: f64 = 1e-12;

#[inline]
fn leq(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + COUPLING_RTOL * lhs.abs().max(rhs.abs())
}

/// How [`check_coupling`] covers the pairs `s ≤ t` of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// Builds both subordinator increments for every pair. `O(G·E)`.
    AllPairs,
    /// Checks the chain on each grid cell together with the monotonicity of
    /// the cell exponents, which implies the chain for every pair. `O(E + G)`.
    Cellwise,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CouplingViolation {
    pub s: f64,
    pub t: f64,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CouplingReport {
    pub mode: CouplingMode,
    pub grid_points: usize,
    /// Pairs `s < t` covered by the check.
    pub pairs: u64,
    pub violations: Vec<CouplingViolation>,
    /// Cells whose exponents broke monotonicity (cellwise mode only).
    pub exponent_violations: Vec<usize>,
}

impl CouplingReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.exponent_violations.is_empty()
    }
}

/// Checks `ℒ^{β(ℳ_s)}(s,t] ≤ ℳ(s,t] ≤ ℒ^{β(ℳ_{t−})}(s,t]` for grid pairs.
pub fn check_coupling(
    pp: &PointProcess,
    beta: &BetaFunction,
    grid: &[f64],
    mode: CouplingMode,
) -> Result<CouplingReport> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return param("grid", "probe times must be sorted");
    }
    if grid
        .iter()
        .any(|&g| !(0.0..=pp.horizon()).contains(&g))
    {
        return param("grid", "probe times must lie in [0, H]");
    }
    let path = build_stable_like(pp, beta);
    let g = grid.len();
    let pairs = (g as u64) * (g as u64).saturating_sub(1) / 2;
    let mut violations = Vec::new();
    let mut exponent_violations = Vec::new();
    let sizes = path.jump_sizes();
    match mode {
        CouplingMode::AllPairs => {
            for i in 0..g {
                let s = grid[i];
                let a = beta.eval(path.eval_unchecked(s));
                for &t in &grid[i + 1..] {
                    let b = beta.eval(path.eval_left_unchecked(t));
                    let r = path.jumps_in(s, t);
                    let middle: f64 = sizes[r.clone()].iter().sum();
                    let lower = subordinator_sum(pp, r.clone(), a);
                    let upper = subordinator_sum(pp, r, b);
                    if !(leq(lower, middle) && leq(middle, upper)) {
                        violations.push(CouplingViolation {
                            s,
                            t,
                            lower,
                            middle,
                            upper,
                        });
                    }
                }
            }
        }
        CouplingMode::Cellwise => {
            let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for (i, w) in grid.windows(2).enumerate() {
                let (s, t) = (w[0], w[1]);
                let a = beta.eval(path.eval_unchecked(s));
                let b = beta.eval(path.eval_left_unchecked(t));
                if a < prev.0 || b < prev.1 || a > b {
                    exponent_violations.push(i);
                }
                prev = (a, b);
                let r = path.jumps_in(s, t);
                let middle: f64 = sizes[r.clone()].iter().sum();
                let nl = &pp.neg_log_sizes()[r];
                let (mut lower, mut upper) = (0.0, 0.0);
                for &x in nl {
                    lower += jump(x, a);
                    upper += jump(x, b);
                }
                if !(leq(lower, middle) && leq(middle, upper)) {
                    violations.push(CouplingViolation {
                        s,
                        t,
                        lower,
                        middle,
                        upper,
                    });
                }
            }
        }
    }
    Ok(CouplingReport {
        mode,
        grid_points: g,
        pairs,
        violations,
        exponent_violations,
    })
}

/// Cellwise coupling check on the realization of `sampler`, regenerated
/// block by block. Memory stays at one block plus one grid cell, and the
/// report equals [`check_coupling`] in cellwise mode on the sampled process.
pub fn check_coupling_streaming(
    sampler: &BlockSampler,
    beta: &BetaFunction,
    grid: &[f64],
) -> Result<CouplingReport> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return param("grid", "probe times must be sorted");
    }
    if grid
        .iter()
        .any(|&g| !(0.0..=sampler.horizon()).contains(&g))
    {
        return param("grid", "probe times must lie in [0, H]");
    }
    let g = grid.len();
    let mut cells = CellState {
        grid,
        beta,
        cell: None,
        open: false,
        edge: grid.first().copied().unwrap_or(f64::INFINITY),
        a: 0.0,
        prev: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        lower: 0.0,
        middle: 0.0,
        pending: Vec::new(),
        violations: Vec::new(),
        exponent_violations: Vec::new(),
    };
    let mut v = 0.0;
    // value before the latest event and that event's time, for M_{t−}
    let mut v_prev = 0.0;
    let mut last_t = f64::NEG_INFINITY;
    for b in 0..sampler.n_blocks() {
        for (t, z) in sampler.block_events(b) {
            let x = -z.ln();
            cells.advance(t, v, v_prev, last_t);
            let j = jump(x, beta.eval(v));
            v_prev = v;
            v += j;
            last_t = t;
            if cells.open {
                cells.middle += j;
                cells.lower += jump(x, cells.a);
                cells.pending.push(x);
            }
        }
    }
    cells.advance(f64::INFINITY, v, v_prev, last_t);
    Ok(CouplingReport {
        mode: CouplingMode::Cellwise,
        grid_points: g,
        pairs: (g as u64) * (g as u64).saturating_sub(1) / 2,
        violations: cells.violations,
        exponent_violations: cells.exponent_violations,
    })
}

struct CellState<'a> {
    grid: &'a [f64],
    beta: &'a BetaFunction,
    /// Index `i` of the open cell `(g_i, g_{i+1}]`, once `g_0` is passed.
    cell: Option<usize>,
    /// Whether events currently fall in a cell.
    open: bool,
    /// Events after this time close at least one cell.
    edge: f64,
    a: f64,
    prev: (f64, f64),
    lower: f64,
    middle: f64,
    pending: Vec<f64>,
    violations: Vec<CouplingViolation>,
    exponent_violations: Vec<usize>,
}

impl CellState<'_> {
    /// Closes every cell ending before `t`, given the path value `v` after
    /// all events so far.
    #[inline(always)]
    fn advance(&mut self, t: f64, v: f64, v_prev: f64, last_t: f64) {
        if t > self.edge {
            self.close(t, v, v_prev, last_t);
        }
    }

    #[inline(never)]
    fn close(&mut self, t: f64, v: f64, v_prev: f64, last_t: f64) {
        let g = self.grid.len();
        if self.cell.is_none() {
            if t <= self.grid[0] {
                return;
            }
            self.cell = Some(0);
            self.a = self.beta.eval(v);
        }
        while let Some(i) = self.cell {
            if i + 1 >= g || t <= self.grid[i + 1] {
                break;
            }
            let end = self.grid[i + 1];
            let b = self.beta.eval(if last_t == end { v_prev } else { v });
            let a = self.a;
            if a < self.prev.0 || b < self.prev.1 || a > b {
                self.exponent_violations.push(i);
            }
            self.prev = (a, b);
            let mut upper = 0.0;
            for &x in &self.pending {
                upper += jump(x, b);
            }
            if !(leq(self.lower, self.middle) && leq(self.middle, upper)) {
                self.violations.push(CouplingViolation {
                    s: self.grid[i],
                    t: end,
                    lower: self.lower,
                    middle: self.middle,
                    upper,
                });
            }
            self.pending.clear();
            self.lower = 0.0;
            self.middle = 0.0;
            self.a = self.beta.eval(v);
            self.cell = Some(i + 1);
        }
        self.open = matches!(self.cell, Some(i) if i + 1 < g);
        self.edge = match self.cell {
            Some(i) if i + 1 < g => self.grid[i + 1],
            _ => f64::INFINITY,
        };
    }
}

/// Mean of `ℒ^α_H` for the truncated measure.
pub fn subordinator_mean(horizon: f64, z_min: f64, alpha: f64) -> f64 {
    let p = 1.0 / alpha - 1.0;
    horizon * (1.0 - z_min.powf(p)) / p
}

impl std::fmt::Display for PathKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathKind::StableLike { .. } => write!(f, "stable_like"),
            PathKind::Subordinator { alpha } => write!(f, "subordinator({alpha})"),
            PathKind::TimeChanged { schedule } => write!(f, "time_changed({schedule})"),
            PathKind::Synthetic => write!(f, "synthetic"),
        }
    }
}
