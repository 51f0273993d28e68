//! Exact extrema of a weighted multiplicity function over a rectangle.
//!
//! Inputs are translated copies of stair polygons and scaled standard
//! triangles, with every coordinate already scaled to an integer. Region
//! boundaries lie on lines `x = c`, `y = c` and `x + y = c`. The rectangle is
//! cut into vertical slabs at every `x` where the vertical order of section
//! endpoints can change (breakpoints, and where a diagonal edge meets a
//! horizontal one). Inside an open slab the order is fixed, so one vertical
//! line per slab plus the slab walls reach every face of the arrangement.
//! On each line a sorted sweep evaluates the count at every endpoint and in
//! every gap between endpoints.
//!
//! All inputs are multiples of 4, which keeps slab midpoints even and gap
//! midpoints integral.

use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::multiplicity::Mode;

pub(crate) trait Coord: Clone + Ord + Debug + Add<Output = Self> + Sub<Output = Self> {
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn half(&self) -> Self;
}

impl Coord for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("caller checked the range")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn half(&self) -> Self {
        assert!(self % 2 == 0, "odd midpoint numerator");
        self / 2
    }
}

impl Coord for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn half(&self) -> Self {
        let two = BigInt::from(2);
        assert!((self % &two) == BigInt::from(0), "odd midpoint numerator");
        self / two
    }
}

#[derive(Clone, Debug)]
pub(crate) enum ShapeI<I> {
    Triangle { l: I },
    Stair { breaks: Vec<I>, heights: Vec<I> },
}

#[derive(Clone, Debug)]
pub(crate) struct TermI<I> {
    pub shape: ShapeI<I>,
    pub mode: Mode,
    pub weight: i64,
    pub offsets: Vec<(I, I)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stop {
    Never,
    MaxAbove(i64),
    MinBelow(i64),
    Outside(i64),
}

impl Stop {
    fn hit(self, min: i64, max: i64) -> bool {
        match self {
            Stop::Never => false,
            Stop::MaxAbove(j) => max > j,
            Stop::MinBelow(j) => min < j,
            Stop::Outside(j) => min < j || max > j,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RawReport<I> {
    pub min: i64,
    pub max: i64,
    pub min_at: (I, I),
    pub max_at: (I, I),
}

pub(crate) struct Window<I> {
    pub x_min: I,
    pub x_max: I,
    pub y_min: I,
    pub y_max: I,
}

struct Interval<I> {
    lo: I,
    hi: I,
    lo_closed: bool,
    hi_closed: bool,
    weight: i64,
}

fn section<I: Coord>(shape: &ShapeI<I>, mode: Mode, ox: &I, oy: &I, x0: &I) -> Option<(I, I, bool, bool)> {
    let x = x0.clone() - ox.clone();
    match shape {
        ShapeI::Triangle { l } => {
            let zero = x.clone() - x.clone();
            let top = oy.clone() + l.clone() - x.clone();
            match mode {
                Mode::Closed if x >= zero && x <= *l => Some((oy.clone(), top, true, true)),
                Mode::Interior if x > zero && x < *l => Some((oy.clone(), top, false, false)),
                _ => None,
            }
        }
        ShapeI::Stair { breaks, heights } => {
            let first = &breaks[0];
            let last = &breaks[breaks.len() - 1];
            let i = breaks.partition_point(|b| *b <= x);
            match mode {
                Mode::HalfOpen => {
                    if x < *first || x >= *last {
                        return None;
                    }
                    Some((oy.clone(), oy.clone() + heights[i - 1].clone(), true, false))
                }
                Mode::Interior => {
                    if x <= *first || x >= *last {
                        return None;
                    }
                    Some((oy.clone(), oy.clone() + heights[i - 1].clone(), false, false))
                }
                Mode::Closed => {
                    if x < *first || x > *last {
                        return None;
                    }
                    // on a breakpoint the taller left column bounds the closure
                    let col = if x == breaks[i - 1] && i >= 2 { i - 2 } else { (i - 1).min(heights.len() - 1) };
                    Some((oy.clone(), oy.clone() + heights[col].clone(), true, true))
                }
            }
        }
    }
}

fn critical_xs<I: Coord>(terms: &[TermI<I>], w: &Window<I>) -> Vec<I> {
    let in_x = |x: &I| *x >= w.x_min && *x <= w.x_max;
    let in_y = |y: &I| *y >= w.y_min && *y <= w.y_max;
    let mut xs = vec![w.x_min.clone(), w.x_max.clone()];
    let mut horizontals = vec![w.y_min.clone(), w.y_max.clone()];
    // (c, x_lo, x_hi) for diagonal edges x + y = c
    let mut diagonals = Vec::new();
    for t in terms {
        for (ox, oy) in &t.offsets {
            match &t.shape {
                ShapeI::Triangle { l } => {
                    let right = ox.clone() + l.clone();
                    xs.push(ox.clone());
                    xs.push(right.clone());
                    horizontals.push(oy.clone());
                    diagonals.push((ox.clone() + oy.clone() + l.clone(), ox.clone(), right));
                }
                ShapeI::Stair { breaks, heights } => {
                    xs.extend(breaks.iter().map(|b| ox.clone() + b.clone()));
                    horizontals.push(oy.clone());
                    horizontals.extend(heights.iter().map(|h| oy.clone() + h.clone()));
                }
            }
        }
    }
    horizontals.retain(|y| in_y(y));
    horizontals.sort();
    horizontals.dedup();
    for (c, lo, hi) in &diagonals {
        let lo = lo.clone().max(w.x_min.clone());
        let hi = hi.clone().min(w.x_max.clone());
        if lo > hi {
            continue;
        }
        for y in &horizontals {
            let x = c.clone() - y.clone();
            if x >= lo && x <= hi {
                xs.push(x);
            }
        }
    }
    xs.retain(|x| in_x(x));
    xs.sort();
    xs.dedup();
    xs
}

/// Min and max of `Σ weight · #{offsets o : p ∈ shape + o}` over the closed window.
pub(crate) fn extrema<I: Coord>(terms: &[TermI<I>], w: &Window<I>, stop: Stop) -> RawReport<I> {
    let xs = critical_xs(terms, w);
    let mut lines = Vec::with_capacity(2 * xs.len());
    for (k, x) in xs.iter().enumerate() {
        lines.push(x.clone());
        if let Some(next) = xs.get(k + 1) {
            lines.push((x.clone() + next.clone()).half());
        }
    }

    let mut report = RawReport {
        min: i64::MAX,
        max: i64::MIN,
        min_at: (w.x_min.clone(), w.y_min.clone()),
        max_at: (w.x_min.clone(), w.y_min.clone()),
    };
    let mut intervals: Vec<Interval<I>> = Vec::new();
    let mut events: Vec<(I, i64, i64)> = Vec::new();
    for x0 in &lines {
        intervals.clear();
        for t in terms {
            for (ox, oy) in &t.offsets {
                if let Some((lo, hi, lc, hc)) = section(&t.shape, t.mode, ox, oy, x0) {
                    if lo > hi || (lo == hi && !(lc && hc)) || hi < w.y_min || lo > w.y_max {
                        continue;
                    }
                    intervals.push(Interval { lo, hi, lo_closed: lc, hi_closed: hc, weight: t.weight });
                }
            }
        }
        // (value, change at the value itself, change for the gap above it)
        events.clear();
        events.push((w.y_min.clone(), 0, 0));
        events.push((w.y_max.clone(), 0, 0));
        for iv in &intervals {
            events.push((iv.lo.clone(), if iv.lo_closed { iv.weight } else { 0 }, iv.weight));
            events.push((iv.hi.clone(), if iv.hi_closed { 0 } else { -iv.weight }, -iv.weight));
        }
        events.sort_by(|a, b| a.0.cmp(&b.0));

        let mut gap = 0i64;
        let mut k = 0;
        while k < events.len() {
            let v = events[k].0.clone();
            let mut at = gap;
            let mut next_gap = gap;
            while k < events.len() && events[k].0 == v {
                at += events[k].1;
                next_gap += events[k].2;
                k += 1;
            }
            if v >= w.y_min && v <= w.y_max {
                record(&mut report, at, (x0.clone(), v.clone()));
            }
            if v >= w.y_min && v < w.y_max {
                let next = events[k].0.clone();
                record(&mut report, next_gap, (x0.clone(), (v.clone() + next).half()));
            }
            if stop.hit(report.min, report.max) {
                return report;
            }
            gap = next_gap;
        }
    }
    report
}

fn record<I: Clone>(report: &mut RawReport<I>, value: i64, at: (I, I)) {
    if value < report.min {
        report.min = value;
        report.min_at = at.clone();
    }
    if value > report.max {
        report.max = value;
        report.max_at = at;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(a: i128, b: i128, c: i128, d: i128) -> Window<i128> {
        Window { x_min: a, x_max: b, y_min: c, y_max: d }
    }

    #[test]
    fn single_square_half_open() {
        let t = TermI {
            shape: ShapeI::Stair { breaks: vec![0, 4], heights: vec![4] },
            mode: Mode::HalfOpen,
            weight: 1,
            offsets: vec![(0, 0)],
        };
        let r = extrema(&[t], &window(0, 8, 0, 8), Stop::Never);
        assert_eq!((r.min, r.max), (0, 1));
        assert_eq!(r.max_at, (0, 0));
    }

    #[test]
    fn closed_triangles_touching_at_a_vertex() {
        // two closed triangles sharing only the point (4, 0)
        let t = TermI {
            shape: ShapeI::Triangle { l: 4 },
            mode: Mode::Closed,
            weight: 1,
            offsets: vec![(0, 0), (4, 0)],
        };
        let r = extrema(&[t], &window(0, 8, 0, 4), Stop::Never);
        assert_eq!(r.max, 2);
        assert_eq!(r.max_at, (4, 0));
        let t = TermI {
            shape: ShapeI::Triangle { l: 4 },
            mode: Mode::Interior,
            weight: 1,
            offsets: vec![(0, 0), (4, 0)],
        };
        assert_eq!(extrema(&[t], &window(0, 8, 0, 4), Stop::Never).max, 1);
    }

    #[test]
    fn diagonal_crossing_is_found() {
        // triangle (0,0,l=8) and a thin square [4,8)x[4,8): closures meet only at (4,4)
        let tri = TermI { shape: ShapeI::Triangle { l: 8 }, mode: Mode::Closed, weight: 1, offsets: vec![(0, 0)] };
        let sq = TermI {
            shape: ShapeI::Stair { breaks: vec![0, 4], heights: vec![4] },
            mode: Mode::Closed,
            weight: 1,
            offsets: vec![(4, 4)],
        };
        let r = extrema(&[tri, sq], &window(0, 8, 0, 8), Stop::Never);
        assert_eq!(r.max, 2);
        assert_eq!(r.max_at, (4, 4));
    }

    #[test]
    fn bigint_path_matches() {
        let t = TermI {
            shape: ShapeI::Triangle { l: BigInt::from(8) },
            mode: Mode::Closed,
            weight: 1,
            offsets: vec![(BigInt::from(0), BigInt::from(0)), (BigInt::from(4), BigInt::from(-4))],
        };
        let w = Window {
            x_min: BigInt::from(0),
            x_max: BigInt::from(8),
            y_min: BigInt::from(0),
            y_max: BigInt::from(8),
        };
        let r = extrema(&[t], &w, Stop::Never);
        assert_eq!((r.min, r.max), (0, 2));
    }
}
