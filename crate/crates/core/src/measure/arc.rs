use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::CirclePoint;

/// Closed arc traversed counterclockwise from `start`, with normalized
/// length in `[0, 1]` (the full circle has length 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: CirclePoint,
    length: f64,
}

impl Arc {
    /// Arc from `e^{i start_angle}` counterclockwise to `e^{i end_angle}`.
    /// An angular span of `2pi` or more gives the full circle.
    pub fn new(start_angle: f64, end_angle: f64) -> Self {
        let span = (end_angle - start_angle) / TAU;
        let length = if span >= 1.0 { 1.0 } else { span.rem_euclid(1.0) };
        Arc { start: CirclePoint::from_angle(start_angle), length }
    }

    /// Arc starting at `e^{2 pi i start}` of normalized length `length`.
    pub fn from_turns(start: f64, length: f64) -> Self {
        Arc { start: CirclePoint::from_turns(start), length: length.clamp(0.0, 1.0) }
    }

    pub fn full() -> Self {
        Arc { start: CirclePoint::one(), length: 1.0 }
    }

    /// `I(0, t)`: the closed arc from 1 to `e^{2 pi i t}`.
    pub fn initial(t: f64) -> Self {
        Self::from_turns(0.0, t)
    }

    /// Arc of the given normalized length whose midpoint is `center`.
    pub fn centered(center: CirclePoint, length: f64) -> Self {
        let length = length.clamp(0.0, 1.0);
        Self::from_turns(center.turns() - 0.5 * length, length)
    }

    pub fn start(&self) -> CirclePoint {
        self.start
    }

    pub fn end(&self) -> CirclePoint {
        CirclePoint::from_turns(self.start.turns() + self.length)
    }

    pub fn midpoint(&self) -> CirclePoint {
        CirclePoint::from_turns(self.start.turns() + 0.5 * self.length)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full(&self) -> bool {
        self.length >= 1.0
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        self.is_full() || (p.turns() - self.start.turns()).rem_euclid(1.0) <= self.length
    }

    /// The arc as at most two closed intervals of `[0, 1]` (in turns).
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        if self.is_full() {
            return vec![(0.0, 1.0)];
        }
        let s = self.start.turns();
        let e = s + self.length;
        if e <= 1.0 {
            vec![(s, e)]
        } else {
            vec![(s, 1.0), (0.0, e - 1.0)]
        }
    }
}

/// Finite union of closed arcs, stored as sorted disjoint intervals of
/// `[0, 1]` in turns. Boundary points are treated as belonging to the set;
/// every measure-theoretic use assumes the boundary carries no mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcSet {
    intervals: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet { intervals: vec![(0.0, 1.0)] }
    }

    pub fn from_arc(arc: &Arc) -> Self {
        Self::from_intervals(arc.intervals())
    }

    pub fn from_arcs<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> Self {
        Self::from_intervals(arcs.into_iter().flat_map(|a| a.intervals()))
    }

    /// Normalizes arbitrary `(lo, hi)` pairs in turns: clamps to `[0, 1]`,
    /// drops reversed pairs and merges overlaps. Degenerate single-point
    /// intervals are kept.
    pub fn from_intervals(raw: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut v: Vec<(f64, f64)> = raw
            .into_iter()
            .map(|(lo, hi)| (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0)))
            .filter(|(lo, hi)| lo <= hi)
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        ArcSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0] == (0.0, 1.0)
    }

    /// Normalized Lebesgue measure of the set.
    pub fn length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains_turns(&self, x: f64) -> bool {
        let x = x.rem_euclid(1.0);
        // 0 and 1 are the same point of the circle
        self.intervals.iter().any(|&(lo, hi)| (lo <= x && x <= hi) || (x == 0.0 && hi == 1.0))
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        self.contains_turns(p.turns())
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let mut out = Vec::new();
        for &(a, b) in &self.intervals {
            for &(c, d) in &other.intervals {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo <= hi {
                    out.push((lo, hi));
                }
            }
        }
        Self::from_intervals(out)
    }

    /// Closure of the complement.
    pub fn complement(&self) -> ArcSet {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = cursor.max(hi);
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        Self::from_intervals(out)
    }

    /// Length of the overlap of `[lo, hi]` (turns, inside `[0, 1]`) with the set.
    pub fn overlap_length(&self, lo: f64, hi: f64) -> f64 {
        self.intervals.iter().map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0)).sum()
    }
}

impl From<Arc> for ArcSet {
    fn from(arc: Arc) -> Self {
        ArcSet::from_arc(&arc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_from_angles() {
        let a = Arc::new(0.0, std::f64::consts::PI / 2.0);
        assert!((a.length() - 0.25).abs() < 1e-15);
        assert!(Arc::new(0.0, TAU).is_full());
        let wrap = Arc::new(1.5 * std::f64::consts::PI, 0.5 * std::f64::consts::PI);
        assert!((wrap.length() - 0.5).abs() < 1e-15);
        assert!(wrap.contains(CirclePoint::one()));
        assert!(!wrap.contains(CirclePoint::from_angle(3.0)));
        assert_eq!(wrap.intervals(), vec![(0.75, 1.0), (0.0, 0.25)]);
    }

    #[test]
    fn initial_arc_is_closed() {
        let i = Arc::initial(0.25);
        assert!(i.contains(CirclePoint::one()));
        assert!(i.contains(CirclePoint::from_turns(0.25)));
        assert!(!i.contains(CirclePoint::from_turns(0.26)));
        let point = ArcSet::from_arc(&Arc::initial(0.0));
        assert_eq!(point.length(), 0.0);
        assert!(point.contains(CirclePoint::one()));
    }

    #[test]
    fn set_algebra() {
        let a = ArcSet::from_intervals([(0.1, 0.4), (0.3, 0.5), (0.7, 0.8)]);
        assert_eq!(a.intervals(), &[(0.1, 0.5), (0.7, 0.8)]);
        let c = a.complement();
        assert_eq!(c.intervals(), &[(0.0, 0.1), (0.5, 0.7), (0.8, 1.0)]);
        assert!((a.length() + c.length() - 1.0).abs() < 1e-15);
        let b = ArcSet::from_intervals([(0.45, 0.75)]);
        let i = a.intersect(&b);
        assert_eq!(i.intervals(), &[(0.45, 0.5), (0.7, 0.75)]);
        assert!(a.union(&c).is_full());
        assert!(
            ArcSet::full().complement().intervals().iter().all(|(lo, hi)| lo == hi)
                || ArcSet::full().complement().is_empty()
        );
    }

    #[test]
    fn centered_arc_wraps() {
        let a = Arc::centered(CirclePoint::one(), 0.1);
        assert!((a.midpoint().turns() - 0.0).abs() < 1e-12 || (a.midpoint().turns() - 1.0).abs() < 1e-12);
        let s = ArcSet::from_arc(&a);
        assert!((s.length() - 0.1).abs() < 1e-15);
        assert!(s.contains_turns(0.99) && s.contains_turns(0.01) && !s.contains_turns(0.5));
    }
}
