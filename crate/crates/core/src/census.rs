//! Scale ladders and censuses of jump configurations: enlarged dyadic
//! intervals holding two large jumps, zero-jump and double-jump intervals
//! along a ladder, the random trees the zero-jump intervals span, and the
//! concentration of small-jump increments.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::ppp::{band_mass, poisson_tail_ge2, PointProcess};
use crate::process::{build_stable_like, BetaFunction};

/// Most levels a ladder may need before reaching its floor.
pub const MAX_LADDER_LEVELS: usize = 64;

/// Decreasing scales `η_ℓ = η_{ℓ−1}^{1+ε}`, stopping at the first level at or
/// below the floor.
///
/// Levels are computed on `log₂ η`, where the recursion is a plain product
/// and stays exact far below the smallest positive double.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    pub eta0: f64,
    pub eps: f64,
    pub log2_floor: f64,
    /// `log₂ η_ℓ` for `ℓ = 0..=L`.
    pub log2_levels: Vec<f64>,
    /// `log₂ η_{L+1}`, the level after the last.
    pub log2_next: f64,
}

impl ScaleLadder {
    pub fn new(eta0: f64, eps: f64, floor: f64) -> Result<Self> {
        if !(floor > 0.0) {
            return param("floor", format!("must be positive, got {floor}"));
        }
        if !(floor < eta0) {
            return param("floor", format!("must lie below eta0 = {eta0}, got {floor}"));
        }
        Self::with_log2_floor(eta0, eps, floor.log2())
    }

    /// Ladder whose floor is given as `log₂ floor`, for floors that
    /// underflow a double.
    pub fn with_log2_floor(eta0: f64, eps: f64, log2_floor: f64) -> Result<Self> {
        if !(eta0 > 0.0 && eta0 < 1.0) {
            return param("eta0", format!("must lie in (0, 1), got {eta0}"));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return param("eps", format!("must be positive, got {eps}"));
        }
        let first = eta0.log2();
        if !(log2_floor < first) {
            return param("floor", "must lie below eta0");
        }
        let mut levels = vec![first];
        let mut cur = first;
        while cur > log2_floor {
            if levels.len() > MAX_LADDER_LEVELS {
                return param(
                    "floor",
                    format!(
                        "2^{log2_floor} is not reached within {MAX_LADDER_LEVELS} levels \
                         (level {MAX_LADDER_LEVELS} is 2^{cur})"
                    ),
                );
            }
            cur *= 1.0 + eps;
            levels.push(cur);
        }
        Ok(Self {
            eta0,
            eps,
            log2_floor,
            log2_next: cur * (1.0 + eps),
            log2_levels: levels,
        })
    }

    /// The ladder started at `eta0` with floor `exp(−1/eta0)`.
    pub fn paper(eta0: f64, eps: f64) -> Result<Self> {
        Self::with_log2_floor(eta0, eps, -1.0 / eta0 / std::f64::consts::LN_2)
    }

    /// Desk defaults: `η₀ = 2⁻⁸`, `ε = 0.1`, floor `2⁻²⁰`.
    pub fn desk_default() -> Self {
        Self::new((-8f64).exp2(), 0.1, (-20f64).exp2()).expect("valid defaults")
    }

    /// Index of the last level, `ℓ_n`.
    pub fn last(&self) -> usize {
        self.log2_levels.len() - 1
    }

    /// `η_ℓ` for `ℓ ≤ L + 1`.
    pub fn eta(&self, level: usize) -> f64 {
        self.log2_eta(level).exp2()
    }

    pub fn log2_eta(&self, level: usize) -> f64 {
        if level == self.log2_levels.len() {
            self.log2_next
        } else {
            self.log2_levels[level]
        }
    }

    pub fn levels(&self) -> Vec<f64> {
        self.log2_levels.iter().map(|l| l.exp2()).collect()
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.last() {
            return param("level", format!("{level} exceeds the last level {}", self.last()));
        }
        Ok(())
    }
}

/// Ladder from `eta0` down to the first level at or below `floor`.
pub fn desk_ladder(eta0: f64, eps: f64, floor: f64) -> Result<ScaleLadder> {
    ScaleLadder::new(eta0, eps, floor)
}

/// Counts of a Poisson variable restricted to `0`, `1` and `≥ 2`.
fn poisson_012(lambda: f64) -> [f64; 3] {
    let p0 = (-lambda).exp();
    let p1 = lambda * p0;
    [p0, p1, poisson_tail_ge2(lambda)]
}

fn tail_at_least(lambda: f64, k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => -(-lambda).exp_m1(),
        _ => poisson_tail_ge2(lambda),
    }
}

/// Census of the enlarged intervals `Î_{n,k}` holding at least two jumps of
/// size `≥ 2^{−n/(γ−ε)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: u32,
    pub gamma: f64,
    pub eps: f64,
    pub threshold: f64,
    /// Indices `k` covered by this report.
    pub k_start: u64,
    pub k_end: u64,
    pub observed: u64,
    /// Exact expectation with the empty padding at both ends.
    pub expected: f64,
    /// `2ⁿ · P(Poisson(3·2⁻ⁿ(2^{n/(γ−ε)} − 1)) ≥ 2)`, ignoring the padding.
    pub expected_bulk: f64,
    /// Exact standard deviation of the count.
    pub sd: f64,
    pub members: Vec<u64>,
}

impl CensusReport {
    pub fn z_score(&self) -> f64 {
        (self.observed as f64 - self.expected) / self.sd
    }
}

/// `#E_n(γ, ε)` over all `k`.
pub fn double_jump_limsup_census(
    pp: &PointProcess,
    n: u32,
    gamma: f64,
    eps: f64,
) -> Result<CensusReport> {
    let k_end = ((pp.horizon() * (n as f64).exp2()).ceil() as u64).max(1);
    double_jump_census_range(pp, n, gamma, eps, 0..k_end)
}

/// The census restricted to indices `k ∈ range`. Counts over a partition of
/// the indices add up to the full census.
pub fn double_jump_census_range(
    pp: &PointProcess,
    n: u32,
    gamma: f64,
    eps: f64,
    range: std::ops::Range<u64>,
) -> Result<CensusReport> {
    if !(gamma - eps > 0.0) {
        return param("gamma", "need gamma > eps");
    }
    if n == 0 || n > 40 {
        return param("n", format!("must lie in 1..=40, got {n}"));
    }
    let threshold = (-(n as f64) / (gamma - eps)).exp2();
    if !(threshold > pp.z_min()) {
        return param(
            "n",
            format!("size threshold {threshold} is not above z_min = {}", pp.z_min()),
        );
    }
    let scale = (n as f64).exp2();
    let k_total = ((pp.horizon() * scale).ceil() as u64).max(1);
    if range.end > k_total {
        return param("range", format!("indices stop at {k_total}"));
    }
    let mut big: Vec<u32> = vec![0; k_total as usize];
    for (t, z) in pp.events() {
        if z >= threshold {
            let k = ((t * scale) as u64).min(k_total - 1);
            big[k as usize] += 1;
        }
    }
    let around = |k: u64| -> std::ops::Range<u64> { k.saturating_sub(1)..(k + 2).min(k_total) };
    let members: Vec<u64> = range
        .clone()
        .filter(|&k| around(k).map(|i| big[i as usize]).sum::<u32>() >= 2)
        .collect();

    // one interval of length 2⁻ⁿ carries Poisson(mu) large jumps
    let mu = band_mass(threshold, 1.0) / scale;
    let width = |k: u64| (around(k).end - around(k).start) as f64;
    let prob = |k: u64| poisson_tail_ge2(width(k) * mu);
    let expected: f64 = range.clone().map(prob).sum();
    let mut var = 0.0;
    for k in range.clone() {
        let pk = prob(k);
        var += pk * (1.0 - pk);
        for d in 1..=2u64 {
            let k2 = k + d;
            if k2 >= range.end {
                break;
            }
            let (a, b) = (around(k), around(k2));
            let shared = b.start.max(a.start)..a.end.min(b.end);
            let s = (shared.end.saturating_sub(shared.start)) as f64;
            let only_a = width(k) - s;
            let only_b = width(k2) - s;
            let ps = poisson_012(s * mu);
            let joint: f64 = (0..3)
                .map(|c| ps[c] * tail_at_least(only_a * mu, 2 - c) * tail_at_least(only_b * mu, 2 - c))
                .sum();
            var += 2.0 * (joint - pk * prob(k2));
        }
    }
    Ok(CensusReport {
        n,
        gamma,
        eps,
        threshold,
        k_start: range.start,
        k_end: range.end,
        observed: members.len() as u64,
        expected,
        expected_bulk: scale * poisson_tail_ge2(3.0 * mu),
        sd: var.max(0.0).sqrt(),
        members,
    })
}

/// Closed forms for the zero-jump and double-jump configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigProbabilities {
    /// `𝔭 = 3η(η_next^{−1/γ} − η^{−1/γ})`.
    pub frak_p: f64,
    /// `𝔮 = η^{1−1/γ}`.
    pub frak_q: f64,
    /// `e^{−𝔭}`.
    pub p: f64,
    /// `(𝔮 e^{−𝔮})²`.
    pub q: f64,
    /// Set when `p` or `q` underflowed and was returned as 0.
    pub underflow: bool,
}

pub fn config_probabilities(eta: f64, eta_next: f64, gamma: f64) -> Result<ConfigProbabilities> {
    if !(eta > 0.0 && eta < 1.0) {
        return param("eta", format!("must lie in (0, 1), got {eta}"));
    }
    if !(eta_next > 0.0 && eta_next < eta) {
        return param("eta_next", format!("must lie in (0, eta), got {eta_next}"));
    }
    if !(gamma > 0.0) {
        return param("gamma", format!("must be positive, got {gamma}"));
    }
    let frak_p = 3.0 * eta * (eta_next.powf(-1.0 / gamma) - eta.powf(-1.0 / gamma));
    let frak_q = eta.powf(1.0 - 1.0 / gamma);
    let p = (-frak_p).exp();
    let q = (frak_q * (-frak_q).exp()).powi(2);
    let tiny = |x: f64| x == 0.0 || !x.is_normal();
    let underflow = tiny(p) || tiny(q) || !frak_p.is_finite() || !frak_q.is_finite();
    Ok(ConfigProbabilities {
        frak_p,
        frak_q,
        p: if tiny(p) || !p.is_finite() { 0.0 } else { p },
        q: if tiny(q) || !q.is_finite() { 0.0 } else { q },
        underflow,
    })
}

/// Times of the events with size in `[lo, hi)`.
fn band_times(pp: &PointProcess, lo: f64, hi: f64) -> Vec<f64> {
    pp.events()
        .filter(|&(_, z)| z >= lo && z < hi)
        .map(|(t, _)| t)
        .collect()
}

/// Jumps in the interval family `[k η, (k+1) η)` of one ladder level,
/// checked against a size band.
struct LevelGrid {
    eta: f64,
    /// Largest index `⌊H/η⌋`.
    k_max: u64,
    band: Vec<f64>,
}

impl LevelGrid {
    fn new(pp: &PointProcess, eta: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(lo > pp.z_min()) {
            return param(
                "band",
                format!("size band starts at {lo}, not above z_min = {}", pp.z_min()),
            );
        }
        Ok(Self {
            eta,
            k_max: (pp.horizon() / eta).floor() as u64,
            band: band_times(pp, lo, hi),
        })
    }

    fn lo(&self, k: u64) -> f64 {
        k as f64 * self.eta
    }

    /// Band jumps in `J_{k−1} ∪ J_k ∪ J_{k+1}`, with empty intervals outside
    /// `0..=k_max`.
    fn enlarged_count(&self, k: u64) -> usize {
        let a = self.lo(k.saturating_sub(1));
        let b = self.lo((k + 2).min(self.k_max + 1));
        self.count(a, b)
    }

    fn count(&self, a: f64, b: f64) -> usize {
        self.band.partition_point(|&t| t < b) - self.band.partition_point(|&t| t < a)
    }

    fn single_count(&self, k: i64) -> usize {
        if k < 0 || k as u64 > self.k_max {
            return 0;
        }
        let k = k as u64;
        self.count(self.lo(k), self.lo(k + 1))
    }
}

fn zero_band(ladder: &ScaleLadder, level: usize, gamma: f64) -> (f64, f64) {
    (
        ladder.eta(level + 1).powf(1.0 / gamma),
        ladder.eta(level).powf(1.0 / gamma),
    )
}

/// Indices `k` with `N(Ĵ_{ℓ,k} × [η_{ℓ+1}^{1/γ}, η_ℓ^{1/γ})) = 0`.
pub fn zero_jump_family(
    pp: &PointProcess,
    ladder: &ScaleLadder,
    level: usize,
    gamma: f64,
) -> Result<Vec<u64>> {
    ladder.check_level(level)?;
    let (lo, hi) = zero_band(ladder, level, gamma);
    let grid = LevelGrid::new(pp, ladder.eta(level), lo, hi)?;
    Ok((0..=grid.k_max)
        .filter(|&k| grid.enlarged_count(k) == 0)
        .collect())
}

/// Indices `k` whose neighbours `J_{k−2}` and `J_{k+2}` each hold exactly one
/// jump with size in `[η_ℓ^{1/γ}/2, η_ℓ^{1/γ})`.
pub fn double_jump_family(
    pp: &PointProcess,
    ladder: &ScaleLadder,
    level: usize,
    gamma: f64,
) -> Result<Vec<u64>> {
    ladder.check_level(level)?;
    let top = ladder.eta(level).powf(1.0 / gamma);
    let grid = LevelGrid::new(pp, ladder.eta(level), top / 2.0, top)?;
    Ok((0..=grid.k_max)
        .filter(|&k| {
            let k = k as i64;
            grid.single_count(k - 2) == 1 && grid.single_count(k + 2) == 1
        })
        .collect())
}

/// Zero-jump and double-jump counts at one ladder level next to their
/// closed-form probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub level: usize,
    pub eta: f64,
    pub eta_next: f64,
    pub gamma: f64,
    /// Intervals `k = 0..=⌊H/η⌋`.
    pub intervals: u64,
    pub zero_jump: u64,
    pub double_jump: u64,
    pub probabilities: ConfigProbabilities,
    /// Observed fractions over their closed forms.
    pub zero_ratio: f64,
    pub double_ratio: f64,
}

pub fn family_census(
    pp: &PointProcess,
    ladder: &ScaleLadder,
    level: usize,
    gamma: f64,
) -> Result<FamilyReport> {
    let zero = zero_jump_family(pp, ladder, level, gamma)?.len() as u64;
    let double = double_jump_family(pp, ladder, level, gamma)?.len() as u64;
    let eta = ladder.eta(level);
    let eta_next = ladder.eta(level + 1);
    let probabilities = config_probabilities(eta, eta_next, gamma)?;
    let intervals = (pp.horizon() / eta).floor() as u64 + 1;
    let frac = |c: u64| c as f64 / intervals as f64;
    Ok(FamilyReport {
        level,
        eta,
        eta_next,
        gamma,
        intervals,
        zero_jump: zero,
        double_jump: double,
        probabilities,
        zero_ratio: frac(zero) / probabilities.p,
        double_ratio: frac(double) / probabilities.q,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeLevel {
    pub level: usize,
    pub eta: f64,
    pub survivors: u64,
    /// Closed-form zero-jump probability at this level.
    pub p: f64,
    /// `(1 − log(1/η_{ℓ−1})^{−2}) ⌊η_{ℓ−1}/η_ℓ⌋ p_ℓ`.
    pub a_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeReport {
    pub root: u64,
    pub gamma: f64,
    pub levels: Vec<TreeLevel>,
    pub leaves: u64,
    /// `⌊η_0/(2η_L)⌋`.
    pub leaf_bound: u64,
    /// Interval indices of the survivors, level by level (level 0 is the
    /// root).
    pub survivors: Vec<Vec<u64>>,
}

/// Grows the tree of zero-jump intervals under the root `J_{0,root}`.
///
/// At level `ℓ`, an interval survives when it is a zero-jump interval whose
/// left end lies in a level-`ℓ−1` survivor, its parent. Ladder scales are not
/// multiples of one another, so a child may overhang its parent by less than
/// its own length.
pub fn grow_tree(
    pp: &PointProcess,
    root: u64,
    ladder: &ScaleLadder,
    gamma: f64,
) -> Result<TreeReport> {
    let eta0 = ladder.eta(0);
    if (root as f64 + 1.0) * eta0 > pp.horizon() {
        return param("root", format!("interval {root} does not fit in [0, H]"));
    }
    let mut parents: Vec<(f64, f64)> = vec![(root as f64 * eta0, (root + 1) as f64 * eta0)];
    let mut survivors = vec![vec![root]];
    let mut levels = Vec::new();
    for level in 1..=ladder.last() {
        let eta = ladder.eta(level);
        let (lo, hi) = zero_band(ladder, level, gamma);
        let grid = LevelGrid::new(pp, eta, lo, hi)?;
        let mut kept = Vec::new();
        for &(a, b) in &parents {
            let mut k = (a / eta).floor() as u64;
            while grid.lo(k) < a {
                k += 1;
            }
            while grid.lo(k) < b && k <= grid.k_max {
                if grid.enlarged_count(k) == 0 {
                    kept.push(k);
                }
                k += 1;
            }
        }
        parents = kept.iter().map(|&k| (grid.lo(k), grid.lo(k + 1))).collect();
        let prev = ladder.eta(level - 1);
        let probs = config_probabilities(eta, ladder.eta(level + 1), gamma)?;
        let log_term = (1.0 / prev).ln().powi(-2);
        levels.push(TreeLevel {
            level,
            eta,
            survivors: kept.len() as u64,
            p: probs.p,
            a_factor: (1.0 - log_term) * (prev / eta).floor() * probs.p,
        });
        survivors.push(kept);
    }
    let leaves = survivors.last().map_or(0, |s| s.len() as u64);
    Ok(TreeReport {
        root,
        gamma,
        levels,
        leaves,
        leaf_bound: (eta0 / (2.0 * ladder.eta(ladder.last()))).floor() as u64,
        survivors,
    })
}

/// `M_n(γ) = η_{n+1}^{1−2/(γ+3·2^{−n−1})} η_n³`, reported as a diagnostic.
pub fn cantor_multiplicity(eta_n: f64, eta_next: f64, gamma: f64, n: u32) -> f64 {
    let g = gamma + 3.0 * (-(n as f64) - 1.0).exp2();
    eta_next.powf(1.0 - 2.0 / g) * eta_n.powi(3)
}

/// Values of `n` for which both `(t − 2⁻ⁿ, t]` and `(t, t + 2⁻ⁿ]` hold a jump
/// of size at least `2^{−n/(γ−ε)}`.
pub fn surrounded_points(
    pp: &PointProcess,
    t: f64,
    gamma: f64,
    eps: f64,
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<u32>> {
    if !(gamma - eps > 0.0) {
        return param("gamma", "need gamma > eps");
    }
    let times = pp.times();
    let sizes = pp.sizes();
    let mut out = Vec::new();
    for n in n_range {
        let threshold = (-(n as f64) / (gamma - eps)).exp2();
        if !(threshold > pp.z_min()) {
            return param(
                "n",
                format!("size threshold at n = {n} is not above z_min = {}", pp.z_min()),
            );
        }
        let w = (-(n as f64)).exp2();
        let left = times.partition_point(|&s| s <= t - w)..times.partition_point(|&s| s <= t);
        let right = times.partition_point(|&s| s <= t)..times.partition_point(|&s| s <= t + w);
        let hit = |r: std::ops::Range<usize>| sizes[r].iter().any(|&z| z >= threshold);
        if hit(left) && hit(right) {
            out.push(n);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: u32,
    pub delta: f64,
    /// Jumps below `2^{−n/δ}` enter the increment.
    pub cutoff: f64,
    /// Largest scaled `|compensated increment|` over the grid pairs.
    pub sup_stat: f64,
    pub argmax: (f64, f64),
    /// `6n²`.
    pub threshold: f64,
    pub exceeds: bool,
    pub pairs: u64,
    /// The `2/n` slack in the scale exponent is dropped for constant `β`.
    pub slack_dropped: bool,
}

/// Scaled supremum of the compensated small-jump increments of `ℳ` over grid
/// pairs `s < t` with `t − s ≤ 2⁻ⁿ`.
///
/// The raw part sums `z^{1/β(ℳ_{u−})}` over the events with `z < 2^{−n/δ}`;
/// the compensator integrates the same function against `du dz/z²` over the
/// truncated size range `(z_min, 2^{−n/δ})`, exactly, piece by piece of `ℳ`.
pub fn concentration_check(
    pp: &PointProcess,
    beta: &BetaFunction,
    n: u32,
    delta: f64,
    grid: &[f64],
) -> Result<ConcentrationReport> {
    if !(delta > 0.0) {
        return param("delta", format!("must be positive, got {delta}"));
    }
    if n == 0 {
        return param("n", "must be positive");
    }
    let cutoff = (-(n as f64) / delta).exp2();
    if !(cutoff > pp.z_min()) {
        return param(
            "n",
            format!("cutoff {cutoff} is not above z_min = {}", pp.z_min()),
        );
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return param("grid", "probe times must be strictly increasing");
    }
    if grid.iter().any(|&g| !(0.0..=pp.horizon()).contains(&g)) {
        return param("grid", "probe times must lie in [0, H]");
    }
    let path = build_stable_like(pp, beta);
    let z_min = pp.z_min();
    // ∫_{z_min}^{cutoff} z^{1/b − 2} dz
    let density = |b: f64| {
        let e = 1.0 / b - 1.0;
        (cutoff.powf(e) - z_min.powf(e)) / e
    };
    let times = path.jump_times();
    let sizes = path.jump_sizes();
    let raw_sizes = pp.sizes();

    // prefix values of the raw small-jump sum and the compensator at each
    // grid point, walking the path once
    let mut raw = Vec::with_capacity(grid.len());
    let mut comp = Vec::with_capacity(grid.len());
    let (mut r_acc, mut c_acc) = (0.0, 0.0);
    let mut idx = 0;
    let mut clock = 0.0;
    let mut level = 0.0;
    for &g in grid {
        while idx < times.len() && times[idx] <= g {
            c_acc += (times[idx] - clock) * density(beta.eval(level));
            clock = times[idx];
            if raw_sizes[idx] < cutoff {
                r_acc += sizes[idx];
            }
            level = path.values_after()[idx];
            idx += 1;
        }
        raw.push(r_acc);
        comp.push(c_acc + (g - clock) * density(beta.eval(level)));
    }

    let window = (-(n as f64)).exp2();
    let slack_dropped = beta.is_constant();
    let slack = if slack_dropped { 0.0 } else { 2.0 / n as f64 };
    let h = pp.horizon();
    let mut sup_stat = 0.0;
    let mut argmax = (f64::NAN, f64::NAN);
    let mut pairs = 0u64;
    let mut first = 0;
    for j in 0..grid.len() {
        let t = grid[j];
        while grid[first] < t - window {
            first += 1;
        }
        let b = beta.eval(path.eval_unchecked((t + window).min(h)));
        let scale = (n as f64 / (delta * (b + slack))).exp2();
        for i in first..j {
            let x = (raw[j] - raw[i]) - (comp[j] - comp[i]);
            let stat = scale * x.abs();
            pairs += 1;
            if stat > sup_stat {
                sup_stat = stat;
                argmax = (grid[i], t);
            }
        }
    }
    let threshold = 6.0 * (n as f64).powi(2);
    Ok(ConcentrationReport {
        n,
        delta,
        cutoff,
        sup_stat,
        argmax,
        threshold,
        exceeds: sup_stat >= threshold,
        pairs,
        slack_dropped,
    })
}

/// `k` equally spaced probe times per window of length `2⁻ⁿ` over `[0, H]`.
pub fn probe_grid(horizon: f64, n: u32, per_window: u32) -> Vec<f64> {
    let step = (-(n as f64)).exp2() / per_window.max(1) as f64;
    let count = (horizon / step).floor() as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}
