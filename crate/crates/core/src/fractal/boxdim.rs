//! Box-counting dimension of finite sets of levels.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::process::{BetaFunction, JumpPath};
use crate::stats::linear_fit;

/// Counts occupied dyadic boxes `[k 2^{−j}, (k+1) 2^{−j})` at several depths
/// from values fed in non-decreasing order.
#[derive(Debug, Clone)]
pub struct BoxCounter {
    j_min: u32,
    scales: Vec<f64>,
    last: Vec<Option<f64>>,
    counts: Vec<u64>,
}

impl BoxCounter {
    pub fn new(j_min: u32, j_max: u32) -> Result<Self> {
        if j_min >= j_max || j_max > 1000 {
            return param("j", format!("need j_min < j_max <= 1000, got {j_min}, {j_max}"));
        }
        let n = (j_max - j_min + 1) as usize;
        Ok(Self {
            j_min,
            scales: (j_min..=j_max).map(|j| (j as f64).exp2()).collect(),
            last: vec![None; n],
            counts: vec![0; n],
        })
    }

    /// Adds a value; values must arrive in non-decreasing order.
    #[inline]
    pub fn push(&mut self, v: f64) {
        for ((s, last), count) in self.scales.iter().zip(&mut self.last).zip(&mut self.counts) {
            let b = (v * s).floor();
            if *last != Some(b) {
                *last = Some(b);
                *count += 1;
            }
        }
    }

    pub fn counts(&self) -> Vec<(u32, u64)> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.j_min + i as u32, c))
            .collect()
    }

    pub fn finish(self) -> BoxDimEstimate {
        BoxDimEstimate::from_counts(self.counts())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDimEstimate {
    /// `(j, number of occupied boxes of side 2^{−j})`.
    pub counts: Vec<(u32, u64)>,
    /// Least-squares slope of `log₂ count` against `j`.
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

impl BoxDimEstimate {
    pub fn from_counts(counts: Vec<(u32, u64)>) -> Self {
        let xs: Vec<f64> = counts.iter().map(|c| c.0 as f64).collect();
        let ys: Vec<f64> = counts.iter().map(|c| (c.1.max(1) as f64).log2()).collect();
        let fit = linear_fit(&xs, &ys);
        Self {
            counts,
            slope: fit.map_or(f64::NAN, |f| f.slope),
            intercept: fit.map_or(f64::NAN, |f| f.intercept),
            slope_se: fit.map_or(f64::NAN, |f| f.slope_se),
        }
    }

    /// Slope ± `k` standard errors.
    pub fn band(&self, k: f64) -> (f64, f64) {
        (self.slope - k * self.slope_se, self.slope + k * self.slope_se)
    }
}

/// Box-counting slope of a finite set of levels over depths `j_min..=j_max`.
pub fn box_dimension(values: &[f64], j_min: u32, j_max: u32) -> Result<BoxDimEstimate> {
    let mut counter = BoxCounter::new(j_min, j_max)?;
    if values.windows(2).all(|w| w[0] <= w[1]) {
        values.iter().for_each(|&v| counter.push(v));
    } else {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.iter().for_each(|&v| counter.push(v));
    }
    Ok(counter.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageDimReport {
    pub a: f64,
    pub b: f64,
    /// `[inf β(ℳ_t), sup β(ℳ_{t−})]` over `t ∈ [a, b]`.
    pub predicted: (f64, f64),
    pub measured: BoxDimEstimate,
    pub tol: f64,
    /// `measured.slope` within `predicted` widened by `tol`.
    pub contained: bool,
}

/// Predicted dimension interval of the image `ℳ([a, b])` and its measured
/// box dimension.
///
/// The image of a step path is the finite set `{ℳ_a} ∪ {ℳ_T : a < T ≤ b}`,
/// which is counted exactly rather than through a probe grid.
pub fn image_dim_bounds(
    path: &JumpPath,
    beta: &BetaFunction,
    a: f64,
    b: f64,
    j_min: u32,
    j_max: u32,
    tol: f64,
) -> Result<ImageDimReport> {
    if !(a < b) {
        return param("E", format!("need a < b, got [{a}, {b}]"));
    }
    let start = path.eval(a)?;
    let left_end = path.eval_left(b)?;
    let predicted = (beta.eval(start), beta.eval(left_end));
    let mut counter = BoxCounter::new(j_min, j_max)?;
    counter.push(start);
    let r = path.jumps_in(a, b);
    for &v in &path.values_after()[r] {
        counter.push(v);
    }
    let measured = counter.finish();
    let contained =
        measured.slope >= predicted.0 - tol && measured.slope <= predicted.1 + tol;
    Ok(ImageDimReport {
        a,
        b,
        predicted,
        measured,
        tol,
        contained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_has_slope_zero() {
        let e = box_dimension(&[0.3], 2, 12).unwrap();
        assert_eq!(e.slope, 0.0);
    }

    #[test]
    fn dense_unit_interval_has_slope_one() {
        let values: Vec<f64> = (0..1u32 << 16).map(|k| k as f64 / 65536.0).collect();
        let e = box_dimension(&values, 1, 16).unwrap();
        assert_eq!(e.slope, 1.0);
        for (j, c) in e.counts {
            assert_eq!(c, 1u64 << j);
        }
    }

    #[test]
    fn unsorted_input_is_sorted() {
        let a = box_dimension(&[0.9, 0.1, 0.5], 1, 4).unwrap();
        let b = box_dimension(&[0.1, 0.5, 0.9], 1, 4).unwrap();
        assert_eq!(a, b);
        assert!(box_dimension(&[0.1], 4, 4).is_err());
    }

    #[test]
    fn constant_beta_image_interval_is_degenerate() {
        let p = JumpPath::from_jumps(1.0, &[(0.2, 0.1), (0.6, 0.3)]).unwrap();
        let beta = BetaFunction::constant(0.4).unwrap();
        let r = image_dim_bounds(&p, &beta, 0.0, 1.0, 1, 6, 0.1).unwrap();
        assert_eq!(r.predicted, (0.4, 0.4));
    }
}
