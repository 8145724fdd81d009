//! Test-side oracles shared by the integration suites.
#![allow(dead_code)]

/// Exactly rounded sum of `xs` (Shewchuk's partials, as in Python's
/// `math.fsum`).
pub fn fsum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    let Some(mut n) = partials.len().checked_sub(1) else {
        return 0.0;
    };
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    // round half to even across the remaining partials
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic two-sided KS critical value at level 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = fsum(xs.iter().copied()) / n;
    let v = fsum(xs.iter().map(|x| (x - m) * (x - m))) / (n - 1.0);
    (m, v.sqrt())
}

/// Poisson upper tail `P(X ≥ 2)` by direct summation of the pmf.
pub fn poisson_ge2_direct(lambda: f64) -> f64 {
    let mut term = (-lambda).exp() * lambda * lambda / 2.0;
    let mut sum = 0.0;
    let mut k = 2.0;
    while term > 1e-300 && k < 1000.0 {
        sum += term;
        k += 1.0;
        term *= lambda / k;
    }
    sum
}

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stablelike_core::fractal::{g_spectrum, IndexSet, Mode, Segment, Variant};
use stablelike_core::process::JumpPath;

/// Pieces `(level, start, end)` read straight off the path.
pub fn pieces(path: &JumpPath) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let mut start = 0.0;
    let mut level = 0.0;
    for (&t, &v) in path.jump_times().iter().zip(path.values_after()) {
        out.push((level, start, t));
        start = t;
        level = v;
    }
    out.push((level, start, path.horizon()));
    out
}

/// Time spent at levels in `(a, b)`, piece by piece.
pub fn scan_mass(pieces: &[(f64, f64, f64)], a: f64, b: f64) -> f64 {
    pieces
        .iter()
        .filter(|p| p.0 > a && p.0 < b)
        .map(|p| p.2 - p.1)
        .sum()
}

/// Up to four disjoint closed segments or points in `(0, 1)`.
pub fn random_index_set(rng: &mut ChaCha8Rng) -> IndexSet {
    let n = rng.random_range(1..=4);
    let mut cuts: Vec<f64> = (0..2 * n).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let segments = cuts
        .chunks(2)
        .map(|c| {
            if rng.random_bool(0.3) {
                Segment::point(c[0])
            } else {
                Segment::closed(c[0], c[1])
            }
        })
        .collect();
    IndexSet::from_segments(segments).unwrap()
}

/// Maximises `ĝ_α(h)` (or `ĝ_α(h)/α`) over a 1e-4 grid of each segment plus
/// its ends.
pub fn envelope_grid_oracle(h: f64, set: &IndexSet, mode: Mode) -> Option<f64> {
    let mut best: Option<f64> = None;
    for s in set.segments() {
        let steps = ((s.hi - s.lo) / 1e-4).floor() as usize;
        let candidates = (0..=steps).map(|k| s.lo + k as f64 * 1e-4).chain([s.hi]);
        for a in candidates {
            if let Some(g) = g_spectrum(a, h, Variant::HalfOpen).finite() {
                let v = match mode {
                    Mode::Space => g,
                    Mode::Time => g / a,
                };
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    }
    best
}
