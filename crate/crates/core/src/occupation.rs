//! Occupation measure `μ(A) = ∫₀^H 1_A(X_t) dt` of a step path.
//!
//! A truncated path is a step function, so its occupation measure is atomic:
//! one atom per constant piece, at the piece's level, weighted by the time
//! spent there. Atoms are kept sorted by level together with the end time
//! of each piece, and interval masses are differences of those end times.

use std::io::Write;

use crate::process::JumpPath;

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationMeasure {
    levels: Vec<f64>,
    /// End time of each piece; the prefix sums of the durations.
    ends: Vec<f64>,
    total: f64,
}

impl OccupationMeasure {
    /// One atom per constant piece of `path`, including the initial level 0
    /// and the last piece ending at `H`.
    ///
    /// Consecutive pieces whose levels coincide in floating point are merged
    /// and pieces of zero length (a jump at `t = 0` or at `t = H`) dropped,
    /// so levels are strictly increasing and durations positive.
    pub fn from_path(path: &JumpPath) -> Self {
        let h = path.horizon();
        let mut levels = Vec::with_capacity(path.len() + 1);
        let mut ends: Vec<f64> = Vec::with_capacity(path.len() + 1);
        let mut push = |level: f64, end: f64| {
            let start = ends.last().copied().unwrap_or(0.0);
            if end <= start {
                return;
            }
            match levels.last() {
                Some(&last) if last == level => *ends.last_mut().unwrap() = end,
                _ => {
                    levels.push(level);
                    ends.push(end);
                }
            }
        };
        let times = path.jump_times();
        let values = path.values_after();
        let mut level = 0.0;
        for (&t, &v) in times.iter().zip(values) {
            push(level, t);
            level = v;
        }
        push(level, h);
        Self {
            levels,
            ends,
            total: h,
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Cumulative durations, i.e. the end time of each piece.
    pub fn cumulative(&self) -> &[f64] {
        &self.ends
    }

    /// Duration of atom `i`.
    pub fn duration(&self, i: usize) -> f64 {
        self.ends[i] - self.start(i)
    }

    fn start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.ends[i - 1]
        }
    }

    pub fn durations(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.duration(i))
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.levels.iter().copied().zip(self.durations())
    }

    /// Total mass, equal to the horizon.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Smallest and largest level carrying mass.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        Some((*self.levels.first()?, *self.levels.last()?))
    }

    /// Index range of the atoms with level in the open interval `(a, b)`.
    pub fn atoms_in(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let lo = self.levels.partition_point(|&x| x <= a);
        let hi = self.levels.partition_point(|&x| x < b);
        lo..hi.max(lo)
    }

    /// `μ((a, b))`, open at both ends.
    pub fn mass_interval(&self, a: f64, b: f64) -> f64 {
        let r = self.atoms_in(a, b);
        if r.is_empty() {
            return 0.0;
        }
        self.ends[r.end - 1] - self.start(r.start)
    }

    /// `μ(B(x, r))` for the open ball `(x − r, x + r)`.
    pub fn mass_ball(&self, x: f64, r: f64) -> f64 {
        self.mass_interval(x - r, x + r)
    }

    /// Number of atoms in the open ball `B(x, r)`.
    pub fn atoms_in_ball(&self, x: f64, r: f64) -> usize {
        self.atoms_in(x - r, x + r).len()
    }

    /// Writes `level,duration,cumulative` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "level,duration,cumulative")?;
        for i in 0..self.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.levels[i],
                self.duration(i),
                self.ends[i]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_jumps_single_atom() {
        let p = JumpPath::from_jumps(1.0, &[]).unwrap();
        let om = OccupationMeasure::from_path(&p);
        assert_eq!(om.atoms().collect::<Vec<_>>(), vec![(0.0, 1.0)]);
    }

    #[test]
    fn single_jump_two_atoms() {
        let p = JumpPath::from_jumps(1.0, &[(0.5, 0.3)]).unwrap();
        let om = OccupationMeasure::from_path(&p);
        assert_eq!(om.atoms().collect::<Vec<_>>(), vec![(0.0, 0.5), (0.3, 0.5)]);
        assert_eq!(om.total(), 1.0);
    }

    #[test]
    fn zero_length_pieces_dropped() {
        let p = JumpPath::from_jumps(1.0, &[(0.0, 0.1), (0.5, 0.2), (1.0, 0.3)]).unwrap();
        let om = OccupationMeasure::from_path(&p);
        let levels = om.levels().to_vec();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[0], 0.1);
        assert_eq!(om.cumulative().last(), Some(&1.0));
    }

    #[test]
    fn open_interval_convention() {
        let p = JumpPath::from_jumps(1.0, &[(0.25, 1.0), (0.75, 1.0)]).unwrap();
        let om = OccupationMeasure::from_path(&p);
        assert_eq!(om.mass_interval(0.0, 1.0), 0.0);
        assert_eq!(om.mass_interval(-0.5, 1.0), 0.25);
        assert_eq!(om.mass_interval(-0.5, 1.5), 0.75);
        assert_eq!(om.mass_interval(-1.0, 3.0), 1.0);
        assert_eq!(om.mass_interval(2.5, 3.0), 0.0);
        assert_eq!(om.mass_ball(1.0, 0.5), 0.5);
        assert_eq!(om.mass_ball(1.0, 1.0), 0.5);
        assert_eq!(om.mass_ball(1.0, 1.0 + 1e-9), 1.0);
    }

    #[test]
    fn csv_header() {
        let p = JumpPath::from_jumps(1.0, &[(0.5, 0.3)]).unwrap();
        let mut buf = Vec::new();
        OccupationMeasure::from_path(&p).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("level,duration,cumulative\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
