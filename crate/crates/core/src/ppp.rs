//! Realizations of the Poisson random measure `N(dt, dz)` with intensity
//! `dt ⊗ dz / z²` on `[0, H] × (z_min, 1]`.
//!
//! Events are generated in fixed-size time blocks. Block `b` of a seed is
//! drawn from its own ChaCha8 stream, so any block can be regenerated on its
//! own (see [`BlockSampler`]) and the full realization is the concatenation
//! of all blocks. Inside a block, times come from exponential spacings and
//! sizes from the closed-form inverse distribution function
//! `1/z = 1/z_min − u·(1/z_min − 1)`.
//!
//! Event times are rounded down to multiples of [`time_quantum`]`(H)`, a
//! power of two fine enough that every time in `[0, H]` stays representable.
//! On that grid the difference of any two times is itself an exact double,
//! which keeps durations and occupation masses free of rounding.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng::stream_rng;

/// Expected number of events per generation block.
pub const BLOCK_EVENTS: f64 = 65536.0;

/// Total intensity of the truncated measure per unit time.
pub fn rate(z_min: f64) -> f64 {
    1.0 / z_min - 1.0
}

/// Intensity mass of the size band `[a, b)`, per unit time.
pub fn band_mass(a: f64, b: f64) -> f64 {
    1.0 / a - 1.0 / b
}

/// Spacing of the time grid: `2^{E−53}` with `2^E` the smallest power of two
/// not below `horizon`.
pub fn time_quantum(horizon: f64) -> f64 {
    let mut p = 1.0f64;
    while p < horizon {
        p *= 2.0;
    }
    while p / 2.0 >= horizon && p > f64::MIN_POSITIVE {
        p /= 2.0;
    }
    p * (-53f64).exp2()
}

#[inline]
fn quantize(t: f64, q: f64) -> f64 {
    // t / q lies in [0, 2^53], where truncation is the floor
    ((t / q) as u64) as f64 * q
}

fn check_domain(horizon: f64, z_min: f64) -> Result<()> {
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return param("horizon", format!("must be finite and >= 0, got {horizon}"));
    }
    if !(z_min > 0.0 && z_min < 1.0) {
        return param("z_min", format!("must lie in (0, 1), got {z_min}"));
    }
    Ok(())
}

/// Draws one jump size from `F(z) = (1/z_min − 1/z)/(1/z_min − 1)`.
///
/// Returns `(z, −ln z)`.
#[inline]
fn size_from_uniform(u: f64, inv_min: f64, span: f64, z_floor: f64) -> f64 {
    // u in (0, 1]
    let inv = inv_min - u * span;
    (1.0 / inv).clamp(z_floor, 1.0)
}

/// Events of one generation block, stored column-wise.
#[derive(Debug, Clone, Default)]
pub struct Block {
    pub times: Vec<f64>,
    pub sizes: Vec<f64>,
    pub neg_log_sizes: Vec<f64>,
}

impl Block {
    fn clear(&mut self) {
        self.times.clear();
        self.sizes.clear();
        self.neg_log_sizes.clear();
    }
}

/// Deterministic, random-access generator for the blocks of one realization.
#[derive(Debug, Clone, Copy)]
pub struct BlockSampler {
    horizon: f64,
    z_min: f64,
    seed: u64,
    n_blocks: u64,
    quantum: f64,
}

impl BlockSampler {
    pub fn new(horizon: f64, z_min: f64, seed: u64) -> Result<Self> {
        check_domain(horizon, z_min)?;
        let n_blocks = if horizon == 0.0 {
            0
        } else {
            ((rate(z_min) * horizon / BLOCK_EVENTS).ceil() as u64).max(1)
        };
        Ok(Self {
            horizon,
            z_min,
            seed,
            n_blocks,
            quantum: time_quantum(horizon),
        })
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_blocks
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    /// Time span `[lo, hi)` covered by block `b`. The last block ends at `H`.
    pub fn bounds(&self, b: u64) -> (f64, f64) {
        let n = self.n_blocks as f64;
        let lo = quantize(self.horizon * (b as f64) / n, self.quantum);
        let hi = if b + 1 == self.n_blocks {
            self.horizon
        } else {
            quantize(self.horizon * ((b + 1) as f64) / n, self.quantum)
        };
        (lo, hi)
    }

    /// Index of the block whose span contains `t`.
    pub fn block_of(&self, t: f64) -> u64 {
        if self.n_blocks == 0 {
            return 0;
        }
        let guess = ((t / self.horizon) * self.n_blocks as f64).floor();
        let mut b = (guess.max(0.0) as u64).min(self.n_blocks - 1);
        // correct for rounding in the division
        while b > 0 && self.bounds(b).0 > t {
            b -= 1;
        }
        while b + 1 < self.n_blocks && self.bounds(b).1 <= t {
            b += 1;
        }
        b
    }

    /// Regenerates block `b` into `out`, replacing its contents.
    pub fn fill(&self, b: u64, out: &mut Block) {
        out.clear();
        let (lo, hi) = self.bounds(b);
        let expected = ((hi - lo) * rate(self.z_min)) as usize;
        let cap = expected + expected / 16 + 16;
        out.times.reserve(cap);
        out.sizes.reserve(cap);
        out.neg_log_sizes.reserve(cap);
        self.for_each_in_block(b, |t, z, nl| {
            out.times.push(t);
            out.sizes.push(z);
            out.neg_log_sizes.push(nl);
        });
    }

    /// Calls `f(t, z, −ln z)` for the events of block `b` in time order,
    /// without storing them.
    #[inline]
    pub fn for_each_in_block<F: FnMut(f64, f64, f64)>(&self, b: u64, mut f: F) {
        for (t, z) in self.block_events(b) {
            f(t, z, -z.ln());
        }
    }

    /// The events of block `b` as `(t, z)`, generated lazily. The stored
    /// `−ln z` of a realization is `-z.ln()`.
    pub fn block_events(&self, b: u64) -> BlockEvents {
        let (lo, hi) = self.bounds(b);
        let rate = rate(self.z_min);
        BlockEvents {
            rng: stream_rng(self.seed, b),
            clock: lo,
            last: f64::NEG_INFINITY,
            hi,
            quantum: self.quantum,
            mean_gap: 1.0 / rate,
            inv_min: 1.0 / self.z_min,
            span: rate,
            z_floor: self.z_min.next_up(),
            done: false,
        }
    }

}

/// Lazy generator of one block's events; see [`BlockSampler::block_events`].
#[derive(Debug, Clone)]
pub struct BlockEvents {
    rng: ChaCha8Rng,
    clock: f64,
    last: f64,
    hi: f64,
    quantum: f64,
    mean_gap: f64,
    inv_min: f64,
    span: f64,
    z_floor: f64,
    done: bool,
}

impl Iterator for BlockEvents {
    type Item = (f64, f64);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let e: f64 = self.rng.sample(Exp1);
        self.clock += e * self.mean_gap;
        if self.clock >= self.hi {
            self.done = true;
            return None;
        }
        let q = self.quantum;
        let mut t = quantize(self.clock, q);
        if t <= self.last {
            // keep times strictly increasing when a spacing is below the grid
            t = self.last + q;
            if t >= self.hi {
                self.done = true;
                return None;
            }
        }
        let u = 1.0 - self.rng.random::<f64>();
        let z = size_from_uniform(u, self.inv_min, self.span, self.z_floor);
        self.last = t;
        Some((t, z))
    }
}

/// One realization of the truncated Poisson measure on `[0, H] × (z_min, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointProcess {
    horizon: f64,
    z_min: f64,
    seed: Option<u64>,
    times: Vec<f64>,
    sizes: Vec<f64>,
    neg_log_sizes: Vec<f64>,
}

/// Summary of a realization, suitable for JSON metadata blocks.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointProcessMeta {
    pub horizon: f64,
    pub z_min: f64,
    pub seed: Option<u64>,
    pub events: usize,
}

impl PointProcess {
    /// Samples a realization. The same `(horizon, z_min, seed)` always gives
    /// the same events, bit for bit.
    pub fn sample(horizon: f64, z_min: f64, seed: u64) -> Result<Self> {
        let sampler = BlockSampler::new(horizon, z_min, seed)?;
        let expected = (rate(z_min) * horizon) as usize;
        let cap = expected + 4 * (expected as f64).sqrt() as usize + 16;
        let mut pp = Self {
            horizon,
            z_min,
            seed: Some(seed),
            times: Vec::with_capacity(cap),
            sizes: Vec::with_capacity(cap),
            neg_log_sizes: Vec::with_capacity(cap),
        };
        let mut block = Block::default();
        for b in 0..sampler.n_blocks() {
            sampler.fill(b, &mut block);
            pp.times.extend_from_slice(&block.times);
            pp.sizes.extend_from_slice(&block.sizes);
            pp.neg_log_sizes.extend_from_slice(&block.neg_log_sizes);
        }
        Ok(pp)
    }

    /// Builds a realization from explicit `(t, z)` pairs.
    ///
    /// Times are rounded down to the time grid (see [`time_quantum`]); dyadic
    /// times such as `0.5` or `0.375` are unaffected for `H ≤ 1`. Pairs are
    /// then sorted by time, ties by size descending, and an exact tie in time
    /// is rejected since event times must be distinct.
    pub fn from_events(horizon: f64, z_min: f64, events: &[(f64, f64)]) -> Result<Self> {
        check_domain(horizon, z_min)?;
        let q = time_quantum(horizon);
        let mut ev: Vec<(f64, f64)> = events.iter().map(|&(t, z)| (quantize(t, q), z)).collect();
        for &(t, z) in &ev {
            if !(0.0..=horizon).contains(&t) {
                return param("events", format!("time {t} outside [0, {horizon}]"));
            }
            if !(z > z_min && z <= 1.0) {
                return param("events", format!("size {z} outside ({z_min}, 1]"));
            }
        }
        ev.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        if let Some(w) = ev.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Inconsistent(format!(
                "two events share the time {}",
                w[0].0
            )));
        }
        Ok(Self {
            horizon,
            z_min,
            seed: None,
            times: ev.iter().map(|e| e.0).collect(),
            sizes: ev.iter().map(|e| e.1).collect(),
            neg_log_sizes: ev.iter().map(|e| -e.1.ln()).collect(),
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    /// Seed the realization was sampled from; `None` for hand-built ones.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    /// `−ln z` for every event, used to evaluate `z^{1/β}` as `exp(−ln z/β)`.
    pub fn neg_log_sizes(&self) -> &[f64] {
        &self.neg_log_sizes
    }

    pub fn events(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.sizes.iter().copied())
    }

    pub fn meta(&self) -> PointProcessMeta {
        PointProcessMeta {
            horizon: self.horizon,
            z_min: self.z_min,
            seed: self.seed,
            events: self.len(),
        }
    }

    /// Index range of the events with time in `[t_lo, t_hi)`.
    pub fn time_range(&self, t_lo: f64, t_hi: f64) -> std::ops::Range<usize> {
        let a = self.times.partition_point(|&t| t < t_lo);
        let b = self.times.partition_point(|&t| t < t_hi);
        a..b.max(a)
    }

    /// `N([t_lo, t_hi) × [z_lo, z_hi))`.
    pub fn count_window(&self, t_lo: f64, t_hi: f64, z_lo: f64, z_hi: f64) -> usize {
        if !(t_lo < t_hi && z_lo < z_hi) {
            return 0;
        }
        self.sizes[self.time_range(t_lo, t_hi)]
            .iter()
            .filter(|&&z| z >= z_lo && z < z_hi)
            .count()
    }

    /// Writes `t,z` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,z")?;
        for (t, z) in self.events() {
            writeln!(w, "{t:.16e},{z:.16e}")?;
        }
        Ok(())
    }
}

/// Dyadic band index `j` with `z ∈ [2^{−j−1}, 2^{−j})`, read off the binary
/// exponent so that band edges are exact.
pub fn band_index(z: f64) -> u32 {
    debug_assert!(z > 0.0 && z <= 1.0);
    if z >= 1.0 {
        return 0;
    }
    let exp = ((z.to_bits() >> 52) & 0x7ff) as i64;
    if exp == 0 {
        // subnormal: far below any usable truncation
        return 1074;
    }
    (1022 - exp) as u32
}

/// Per-interval view for [`band_census`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntervalBands {
    /// Smallest band index present (the largest jump), if any.
    pub top_band: Option<u32>,
    /// Jumps with band index `j ≤ J/3`.
    pub coarse: u32,
    /// Jumps with band index `j ≤ J(1 + η)` for the observed `η`.
    pub upto_eta: u32,
    /// Jumps with size at least `2^{−J/3}`.
    pub large: u32,
}

/// Band and per-interval statistics of a realization at depth `J`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BandCensus {
    pub depth: u32,
    pub z_min: f64,
    /// `#𝒫_j` for `j = 0..=J`.
    pub band_counts: Vec<u64>,
    /// Observed slack `|log₂ #𝒫_j / j − 1|`, `None` when the band is empty.
    pub band_eps: Vec<Option<f64>>,
    pub intervals: Vec<IntervalBands>,
    /// Smallest `η ≥ 0` such that every interval holds a jump with
    /// `j ≤ J(1 + η)`. `None` if some interval has no jump at all.
    pub eta_obs: Option<f64>,
    /// Smallest `ε` with `count ≤ 2^{Jε}` for the `j ≤ J(1+η)` counts.
    pub eps_upper_obs: f64,
    /// Largest per-interval count in each resolvable fine band, with the
    /// slack `ε_j` it implies: `(j, max count, ε_j)`.
    pub fine_bands: Vec<(u32, u32, Option<f64>)>,
    /// Intervals holding more than one jump of band `j ≤ J/3`.
    pub coarse_violations: u64,
    /// Intervals holding at least two jumps of size `≥ 2^{−J/3}`.
    pub large_pairs: u64,
}

/// Deepest band `j` whose lower edge `2^{−j−1}` is not below `z_min`.
pub fn deepest_band(z_min: f64) -> u32 {
    let mut j = 0u32;
    while (-(j as f64 + 2.0)).exp2() >= z_min {
        j += 1;
    }
    j
}

/// Band statistics at dyadic depth `J`, over intervals of length `2^{−J}`
/// tiling `[0, H]`.
pub fn band_census(pp: &PointProcess, depth: u32) -> Result<BandCensus> {
    if depth == 0 || depth > 40 {
        return param("J", format!("must lie in 1..=40, got {depth}"));
    }
    let j_max = deepest_band(pp.z_min());
    if depth > j_max {
        return param(
            "J",
            format!(
                "band 2^-{} lies below z_min = {}; deepest usable J is {j_max}",
                depth + 1,
                pp.z_min()
            ),
        );
    }
    let scale = (depth as f64).exp2();
    let n_int = ((pp.horizon() * scale).ceil() as usize).max(1);
    let coarse_cut = depth as f64 / 3.0;
    let large_cut = (-coarse_cut).exp2();

    let mut band_counts = vec![0u64; depth as usize + 1];
    let mut intervals = vec![
        IntervalBands {
            top_band: None,
            coarse: 0,
            upto_eta: 0,
            large: 0
        };
        n_int
    ];
    let interval_of = |t: f64| ((t * scale) as usize).min(n_int - 1);
    for (t, z) in pp.events() {
        let j = band_index(z);
        if (j as usize) < band_counts.len() {
            band_counts[j as usize] += 1;
        }
        let iv = &mut intervals[interval_of(t)];
        iv.top_band = Some(iv.top_band.map_or(j, |b| b.min(j)));
        if (j as f64) <= coarse_cut {
            iv.coarse += 1;
        }
        if z >= large_cut {
            iv.large += 1;
        }
    }

    let band_eps = band_counts
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            (j > 0 && c > 0).then(|| ((c as f64).log2() / j as f64 - 1.0).abs())
        })
        .collect();

    let eta_obs = intervals
        .iter()
        .try_fold(0.0f64, |acc, iv| {
            iv.top_band
                .map(|b| acc.max(b as f64 / depth as f64 - 1.0))
        });
    // Without an observed η the coarse threshold falls back to J itself.
    let cut = depth as f64 * (1.0 + eta_obs.unwrap_or(0.0));
    let fine_lo = cut.ceil().max(depth as f64) as u32;
    let n_fine = j_max.saturating_sub(fine_lo) as usize + 1;
    let mut fine_max = vec![0u32; if fine_lo <= j_max { n_fine } else { 0 }];
    let mut fine_here = vec![0u32; fine_max.len()];

    let mut current = usize::MAX;
    let flush = |here: &mut Vec<u32>, max: &mut Vec<u32>| {
        for (m, h) in max.iter_mut().zip(here.iter_mut()) {
            *m = (*m).max(*h);
            *h = 0;
        }
    };
    for (t, z) in pp.events() {
        let k = interval_of(t);
        if k != current {
            flush(&mut fine_here, &mut fine_max);
            current = k;
        }
        let j = band_index(z);
        if (j as f64) <= cut {
            intervals[k].upto_eta += 1;
        }
        if j >= fine_lo && j <= j_max {
            fine_here[(j - fine_lo) as usize] += 1;
        }
    }
    flush(&mut fine_here, &mut fine_max);

    let eps_upper_obs = intervals
        .iter()
        .filter(|iv| iv.upto_eta > 0)
        .map(|iv| (iv.upto_eta as f64).log2() / depth as f64)
        .fold(0.0, f64::max);
    let fine_bands = fine_max
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let j = fine_lo + i as u32;
            let eps = (c > 0).then(|| ((c as f64).log2() + depth as f64) / j as f64 - 1.0);
            (j, c, eps)
        })
        .collect();
    let coarse_violations = intervals.iter().filter(|iv| iv.coarse > 1).count() as u64;
    let large_pairs = intervals.iter().filter(|iv| iv.large >= 2).count() as u64;

    Ok(BandCensus {
        depth,
        z_min: pp.z_min(),
        band_counts,
        band_eps,
        intervals,
        eta_obs,
        eps_upper_obs,
        fine_bands,
        coarse_violations,
        large_pairs,
    })
}

/// `P(Poisson(λ) ≥ 2)`, accurate for small `λ`.
pub fn poisson_tail_ge2(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        // Σ_{m≥2} (−1)^m (m−1) λ^m / m!, avoiding the cancellation below
        let mut term = lambda * lambda / 2.0;
        let mut sum = 0.0;
        let mut k = 2.0;
        let mut sign = 1.0;
        while term > 1e-300 && k < 40.0 {
            sum += sign * term * (k - 1.0);
            k += 1.0;
            term *= lambda / k;
            sign = -sign;
        }
        return sum;
    }
    -(-lambda).exp_m1() - lambda * (-lambda).exp()
}

/// `P(Poisson(λ) = 0)`.
pub fn poisson_zero(lambda: f64) -> f64 {
    (-lambda).exp()
}
