//! The set of indices `β(ℳ_t)` seen over a time or space window.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::process::{BetaFunction, JumpPath};

/// Whether a window is a set of times or a set of levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Space,
    Time,
}

/// Non-trivial open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return param("window", format!("need lo < hi, got ({lo}, {hi})"));
        }
        Ok(Self { lo, hi })
    }
}

/// An interval of indices with explicit end types. A single point is a
/// segment with `lo == hi` and both ends closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Segment {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = x > self.lo || (self.lo_closed && x == self.lo);
        let below = x < self.hi || (self.hi_closed && x == self.hi);
        above && below
    }

    fn is_valid(&self) -> bool {
        self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed)
    }

    /// Supremum of `self ∩ (a, b]`, if the intersection is non-empty.
    fn sup_in(&self, a: f64, b: f64) -> Option<f64> {
        let (l, l_closed) = if a >= self.lo { (a, false) } else { (self.lo, self.lo_closed) };
        let (u, u_closed) = if b < self.hi {
            (b, true)
        } else {
            (self.hi, self.hi_closed)
        };
        (l < u || (l == u && l_closed && u_closed)).then_some(u)
    }
}

/// Finite union of disjoint segments, sorted by position.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    segments: Vec<Segment>,
}

impl IndexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(x: f64) -> Self {
        Self {
            segments: vec![Segment::point(x)],
        }
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if let Some(s) = segments.iter().find(|s| !s.is_valid()) {
            return param("segments", format!("empty or inverted segment {s:?}"));
        }
        for w in segments.windows(2) {
            let touching = w[0].hi == w[1].lo && (w[0].hi_closed || w[1].lo_closed);
            if w[0].hi > w[1].lo || touching {
                return param("segments", "segments must be sorted and disjoint");
            }
        }
        Ok(Self { segments })
    }

    /// Union of closed intervals `[lo, hi]`.
    pub fn closed(intervals: &[(f64, f64)]) -> Result<Self> {
        Self::from_segments(intervals.iter().map(|&(a, b)| Segment::closed(a, b)).collect())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn inf(&self) -> Option<f64> {
        self.segments.first().map(|s| s.lo)
    }

    pub fn sup(&self) -> Option<f64> {
        self.segments.last().map(|s| s.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.segments.partition_point(|s| s.hi < x);
        self.segments.get(i).is_some_and(|s| s.contains(x))
    }

    /// Same segments with every end closed.
    pub fn closure(&self) -> Self {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            match out.last_mut() {
                Some(prev) if prev.hi == s.lo => prev.hi = s.hi,
                _ => out.push(Segment::closed(s.lo, s.hi)),
            }
        }
        Self { segments: out }
    }

    /// `sup(I ∩ (a, b])`, or `None` when the intersection is empty.
    pub fn sup_in(&self, a: f64, b: f64) -> Option<f64> {
        self.segments
            .iter()
            .rev()
            .find_map(|s| s.sup_in(a, b))
    }
}

/// Default width above which a jump of `β(ℳ)` is treated as a hole in the
/// index range rather than as discretisation of a continuum.
pub const DEFAULT_GAP_RESOLUTION: f64 = 1e-3;

/// The indices `β(ℳ_t)` over a window, as a union of segments.
///
/// A truncated path takes finitely many values, so consecutive indices closer
/// than `resolution` are joined into one segment; only wider jumps of the
/// index leave holes `(β(ℳ_{τ−}), β(ℳ_τ))`.
///
/// In space mode the window is a set of levels and the result is closed: the
/// pre-jump values `ℳ_{τ−}` are levels of the occupation measure. In time
/// mode the window is a set of times and only attained values are kept, so
/// the upper end `β(ℳ_{τ−})` of a segment followed by a hole is open.
pub fn index_range(
    path: &JumpPath,
    beta: &BetaFunction,
    window: Window,
    mode: Mode,
    resolution: f64,
) -> Result<IndexSet> {
    if !(resolution >= 0.0) {
        return param("resolution", format!("must be >= 0, got {resolution}"));
    }
    let values = path.values_after();
    let betas: Vec<f64> = match mode {
        Mode::Time => {
            let lo = window.lo.max(0.0);
            let hi = window.hi.min(path.horizon());
            if !(lo < hi) {
                return Ok(IndexSet::empty());
            }
            let r = path.jumps_in(lo, hi);
            // a jump exactly at `hi` is outside the open window
            let end = if r.end > r.start && path.jump_times()[r.end - 1] >= hi {
                r.end - 1
            } else {
                r.end
            };
            std::iter::once(path.eval_unchecked(lo))
                .chain(values[r.start..end].iter().copied())
                .map(|v| beta.eval(v))
                .collect()
        }
        Mode::Space => std::iter::once(0.0)
            .chain(values.iter().copied())
            .filter(|&v| v > window.lo && v < window.hi)
            .map(|v| beta.eval(v))
            .collect(),
    };
    if betas.is_empty() {
        return Ok(IndexSet::empty());
    }
    let mut segments = Vec::new();
    let mut cur = Segment::point(betas[0]);
    for &b in &betas[1..] {
        if b - cur.hi > resolution {
            if mode == Mode::Time && cur.lo < cur.hi {
                cur.hi_closed = false;
            }
            segments.push(cur);
            cur = Segment::point(b);
        } else {
            cur.hi = cur.hi.max(b);
        }
    }
    segments.push(cur);
    IndexSet::from_segments(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_intersections() {
        let s = Segment::closed(0.3, 0.5);
        assert_eq!(s.sup_in(0.3, 0.6), Some(0.5));
        assert_eq!(s.sup_in(0.2, 0.4), Some(0.4));
        assert_eq!(s.sup_in(0.5, 0.9), None);
        assert_eq!(s.sup_in(0.0, 0.3), Some(0.3));
        assert_eq!(Segment::point(0.4).sup_in(0.2, 0.4), Some(0.4));
        assert_eq!(Segment::point(0.4).sup_in(0.4, 0.8), None);
        let open = Segment {
            hi_closed: false,
            ..s
        };
        assert!(!open.contains(0.5));
        assert_eq!(open.sup_in(0.3, 0.9), Some(0.5));
    }

    #[test]
    fn set_validation_and_membership() {
        assert!(IndexSet::closed(&[(0.5, 0.4)]).is_err());
        assert!(IndexSet::closed(&[(0.1, 0.3), (0.3, 0.5)]).is_err());
        let i = IndexSet::closed(&[(0.1, 0.3), (0.5, 0.5), (0.6, 0.7)]).unwrap();
        assert!(i.contains(0.2) && i.contains(0.5) && i.contains(0.7));
        assert!(!i.contains(0.4) && !i.contains(0.55) && !i.contains(0.71));
        assert_eq!(i.sup_in(0.25, 0.55), Some(0.5));
        assert_eq!(i.sup_in(0.31, 0.45), None);
    }

    #[test]
    fn constant_beta_is_a_point() {
        let p = JumpPath::from_jumps(1.0, &[(0.2, 0.1), (0.6, 0.3)]).unwrap();
        let beta = BetaFunction::constant(0.4).unwrap();
        for mode in [Mode::Space, Mode::Time] {
            let w = Window::new(-1.0, 2.0).unwrap();
            let i = index_range(&p, &beta, w, mode, 1e-3).unwrap();
            assert_eq!(i, IndexSet::point(0.4));
        }
    }

    #[test]
    fn window_missing_range_is_empty() {
        let p = JumpPath::from_jumps(1.0, &[(0.5, 0.1)]).unwrap();
        let beta = BetaFunction::constant(0.4).unwrap();
        let w = Window::new(5.0, 6.0).unwrap();
        assert!(index_range(&p, &beta, w, Mode::Space, 1e-3).unwrap().is_empty());
        assert!(Window::new(1.0, 1.0).is_err());
    }
}
