//! Local dimension estimates `log μ(B(x, r)) / log r` over a scale window.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::occupation::OccupationMeasure;
use crate::ppp::BlockSampler;
use crate::process::{BetaFunction, JumpPath};
use crate::rng::stream_rng;
use crate::stats::median;

/// Balls holding fewer atoms than this are flagged as low-confidence.
pub const MIN_BALL_ATOMS: usize = 8;

/// Radii `r_min · 10^{k/per_decade}` up to `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalDimWindow {
    pub r_min: f64,
    pub r_max: f64,
    pub per_decade: u32,
}

impl Default for LocalDimWindow {
    fn default() -> Self {
        Self {
            r_min: 1e-6,
            r_max: 1e-2,
            per_decade: 4,
        }
    }
}

impl LocalDimWindow {
    pub fn radii(&self) -> Result<Vec<f64>> {
        geometric_radii(self.r_min, self.r_max, self.per_decade)
    }
}

/// Geometric grid from `r_min` to `r_max` (both included when the ratio is a
/// whole number of steps).
pub fn geometric_radii(r_min: f64, r_max: f64, per_decade: u32) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_min < r_max && r_max < 1.0) {
        return param("radii", format!("need 0 < r_min < r_max < 1, got {r_min}, {r_max}"));
    }
    if per_decade == 0 {
        return param("per_decade", "must be positive");
    }
    let steps = ((r_max / r_min).log10() * per_decade as f64 + 1e-9).floor() as u32;
    Ok((0..=steps)
        .map(|k| r_min * 10f64.powf(k as f64 / per_decade as f64))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDimEstimate {
    /// Centre of the balls; `None` when only increments around it are known.
    pub x: Option<f64>,
    pub radii: Vec<f64>,
    pub masses: Vec<f64>,
    /// `log mass / log r` where `0 < mass < total`.
    pub ratios: Vec<Option<f64>>,
    /// Atoms inside each ball.
    pub atoms: Vec<usize>,
    /// Minimum ratio over the finest half of the usable scales.
    pub lower_est: Option<f64>,
    /// Maximum ratio over the finest half of the usable scales.
    pub upper_est: Option<f64>,
    pub usable_count: usize,
    /// Usable scales whose ball holds fewer than [`MIN_BALL_ATOMS`] atoms.
    pub sparse_scales: usize,
    pub low_confidence: bool,
}

impl LocalDimEstimate {
    /// Builds the estimate from ball masses at increasing radii.
    pub fn from_masses(
        x: Option<f64>,
        radii: Vec<f64>,
        masses: Vec<f64>,
        atoms: Vec<usize>,
        total: f64,
    ) -> Self {
        debug_assert_eq!(radii.len(), masses.len());
        debug_assert_eq!(radii.len(), atoms.len());
        let ratios: Vec<Option<f64>> = radii
            .iter()
            .zip(&masses)
            .map(|(&r, &m)| (m > 0.0 && m < total).then(|| m.ln() / r.ln()))
            .collect();
        let usable: Vec<usize> = (0..ratios.len()).filter(|&i| ratios[i].is_some()).collect();
        let finest = &usable[..usable.len().div_ceil(2)];
        let window: Vec<f64> = finest.iter().filter_map(|&i| ratios[i]).collect();
        let lower_est = window.iter().copied().reduce(f64::min);
        let upper_est = window.iter().copied().reduce(f64::max);
        let sparse_scales = usable.iter().filter(|&&i| atoms[i] < MIN_BALL_ATOMS).count();
        let usable_count = usable.len();
        Self {
            x,
            radii,
            masses,
            ratios,
            atoms,
            lower_est,
            upper_est,
            usable_count,
            sparse_scales,
            low_confidence: usable_count < 4 || sparse_scales > 0,
        }
    }
}

/// Local dimension estimate of `om` at level `x`.
pub fn local_dim(om: &OccupationMeasure, x: f64, window: LocalDimWindow) -> Result<LocalDimEstimate> {
    let radii = window.radii()?;
    match om.support_hull() {
        Some((lo, hi)) if x >= lo && x <= hi => {}
        _ => return param("x", format!("{x} lies outside the support hull")),
    }
    let masses = radii.iter().map(|&r| om.mass_ball(x, r)).collect();
    let atoms = radii.iter().map(|&r| om.atoms_in_ball(x, r)).collect();
    Ok(LocalDimEstimate::from_masses(Some(x), radii, masses, atoms, om.total()))
}

/// Ball masses of the occupation measure of `ℒ^α` around `ℒ^α_u`, computed
/// by regenerating only the blocks of the realization that the balls reach.
///
/// Since `ℒ^α` is non-decreasing, the time it spends in `B(ℒ^α_u, r)` is the
/// interval from the last jump `T ≤ u` with `ℒ^α_u − ℒ^α_{T−} ≥ r` (or 0) to
/// the first jump `T > u` with `ℒ^α_T − ℒ^α_u ≥ r` (or `H`). Memory stays at
/// one block whatever the truncation level.
pub fn stream_subordinator_balls(
    sampler: &BlockSampler,
    alpha: f64,
    u: f64,
    radii: &[f64],
) -> Result<LocalDimEstimate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param("alpha", format!("must lie in (0, 1), got {alpha}"));
    }
    let h = sampler.horizon();
    if !(u >= 0.0 && u <= h) || sampler.n_blocks() == 0 {
        return param("u", format!("{u} outside [0, {h}]"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii.first().is_some_and(|&r| r <= 0.0) {
        return param("radii", "must be positive and increasing");
    }
    let n = radii.len();
    let b0 = sampler.block_of(u);
    let mut events: Vec<(f64, f64)> = Vec::new();

    // backward: entry times and the atoms passed before reaching them
    let mut entry = vec![0.0; n];
    let mut back = Crossings::new(alpha, n);
    for b in (0..=b0).rev() {
        events.clear();
        events.extend(sampler.block_events(b));
        let end = if b == b0 {
            events.partition_point(|e| e.0 <= u)
        } else {
            events.len()
        };
        for &(t, z) in events[..end].iter().rev() {
            if back.add(z, radii, |k| entry[k] = t) {
                break;
            }
        }
        if back.k == n {
            break;
        }
    }

    let mut exit = vec![h; n];
    let mut fwd = Crossings::new(alpha, n);
    'fwd: for b in b0..sampler.n_blocks() {
        for (t, z) in sampler.block_events(b) {
            if t <= u {
                continue;
            }
            if fwd.add(z, radii, |k| exit[k] = t) {
                break 'fwd;
            }
        }
    }

    let masses = exit.iter().zip(&entry).map(|(x, e)| x - e).collect();
    let atoms = back
        .finish()
        .iter()
        .zip(fwd.finish())
        .map(|(b, f)| b + f + 1)
        .collect();
    Ok(LocalDimEstimate::from_masses(None, radii.to_vec(), masses, atoms, h))
}

/// Running sum of `z^{1/α}` and the radii it has reached.
struct Crossings {
    alpha: f64,
    sum: f64,
    /// Sizes below this leave `sum` unchanged and are not exponentiated.
    negligible: f64,
    /// `negligible` holds until `sum` reaches this power of two.
    next_binade: f64,
    k: usize,
    seen: usize,
    atoms: Vec<usize>,
}

impl Crossings {
    fn new(alpha: f64, n: usize) -> Self {
        Self {
            alpha,
            sum: 0.0,
            negligible: 0.0,
            next_binade: f64::MIN_POSITIVE,
            k: 0,
            seen: 0,
            atoms: vec![0; n],
        }
    }

    /// Adds one jump; `hit(k)` is called for each radius index reached.
    /// Returns true once every radius is reached.
    #[inline]
    fn add(&mut self, z: f64, radii: &[f64], mut hit: impl FnMut(usize)) -> bool {
        if z >= self.negligible {
            self.sum += (z.ln() / self.alpha).exp();
            while self.k < radii.len() && self.sum >= radii[self.k] {
                hit(self.k);
                self.atoms[self.k] = self.seen;
                self.k += 1;
            }
            if self.k == radii.len() {
                return true;
            }
            if self.sum >= self.next_binade {
                self.rescale();
            }
        }
        self.seen += 1;
        false
    }

    /// Per-radius atom counts; radii never reached count every jump seen.
    fn finish(mut self) -> Vec<usize> {
        for a in &mut self.atoms[self.k..] {
            *a = self.seen;
        }
        self.atoms
    }

    /// A jump below an eighth of the spacing of doubles at `sum` rounds away
    /// exactly, so sizes below `(spacing/8)^α` can be skipped bit-for-bit.
    #[cold]
    fn rescale(&mut self) {
        let binade = f64::from_bits(self.sum.to_bits() & 0x7ff0_0000_0000_0000);
        let spacing = binade * f64::EPSILON;
        self.negligible = (spacing / 8.0).powf(self.alpha) * (1.0 - 1e-9);
        self.next_binade = 2.0 * binade;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalSample {
    pub t: f64,
    pub x: f64,
    pub beta: f64,
    pub lower_est: Option<f64>,
    pub upper_est: Option<f64>,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalBehavior {
    pub samples: Vec<TypicalSample>,
    /// Median of `|lower_est − β(ℳ_t)|`.
    pub median_abs_dev_lower: Option<f64>,
    /// Fraction of samples with `upper_est ≤ 2β(ℳ_t) + tol`.
    pub upper_bracket_fraction: f64,
    pub tol: f64,
}

/// Local dimensions at `ℳ_t` for uniformly drawn times `t`, compared with
/// `β(ℳ_t)`.
pub fn typical_behavior_report(
    path: &JumpPath,
    om: &OccupationMeasure,
    beta: &BetaFunction,
    n_samples: usize,
    seed: u64,
    window: LocalDimWindow,
    tol: f64,
) -> Result<TypicalBehavior> {
    let mut rng = stream_rng(seed, u64::MAX);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let t = rng.random::<f64>() * path.horizon();
        let x = path.eval(t)?;
        let est = local_dim(om, x, window)?;
        samples.push(TypicalSample {
            t,
            x,
            beta: beta.eval(x),
            lower_est: est.lower_est,
            upper_est: est.upper_est,
            low_confidence: est.low_confidence,
        });
    }
    let devs: Vec<f64> = samples
        .iter()
        .filter_map(|s| s.lower_est.map(|l| (l - s.beta).abs()))
        .collect();
    let in_bracket = samples
        .iter()
        .filter(|s| s.upper_est.is_some_and(|u| u <= 2.0 * s.beta + tol))
        .count();
    Ok(TypicalBehavior {
        median_abs_dev_lower: median(&devs),
        upper_bracket_fraction: if n_samples == 0 {
            f64::NAN
        } else {
            in_bracket as f64 / n_samples as f64
        },
        samples,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_seventeen_radii() {
        let r = LocalDimWindow::default().radii().unwrap();
        assert_eq!(r.len(), 17);
        assert_eq!(r[0], 1e-6);
        assert!((r[16] - 1e-2).abs() < 1e-15);
        assert!(geometric_radii(1e-2, 1e-6, 4).is_err());
        assert!(geometric_radii(1e-6, 2.0, 4).is_err());
    }

    #[test]
    fn exact_power_law() {
        let radii = geometric_radii(1e-6, 1e-2, 4).unwrap();
        let d = 0.37;
        let masses: Vec<f64> = radii.iter().map(|r| r.powf(d)).collect();
        let est = LocalDimEstimate::from_masses(Some(0.0), radii.clone(), masses, vec![100; 17], 1.0);
        for r in est.ratios.iter() {
            assert!((r.unwrap() - d).abs() < 1e-12);
        }
        assert!((est.lower_est.unwrap() - d).abs() < 1e-12);
        assert!((est.upper_est.unwrap() - d).abs() < 1e-12);
        assert!(!est.low_confidence);
    }

    #[test]
    fn few_usable_scales_flagged() {
        let radii = vec![1e-3, 1e-2];
        let est = LocalDimEstimate::from_masses(None, radii, vec![0.0, 0.5], vec![0, 20], 1.0);
        assert_eq!(est.usable_count, 1);
        assert!(est.low_confidence);
    }
}
