//! Half-open stair polygons with floor `y = 0`.

use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Rect};
use crate::rational::Rational;
use crate::Error;

/// `⋃_i [x_i, x_{i+1}) × [0, y_i)` with `x_0 < … < x_{r+1}` and
/// `y_0 > … > y_r > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStair")]
pub struct StairPolygon {
    x_breaks: Vec<Rational>,
    heights: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawStair {
    x_breaks: Vec<Rational>,
    heights: Vec<Rational>,
}

impl TryFrom<RawStair> for StairPolygon {
    type Error = Error;
    fn try_from(raw: RawStair) -> Result<Self, Error> {
        StairPolygon::new(raw.x_breaks, raw.heights)
    }
}

impl StairPolygon {
    /// Rejects degenerate input instead of normalising it.
    pub fn new(x_breaks: Vec<Rational>, heights: Vec<Rational>) -> Result<Self, Error> {
        if heights.is_empty() {
            return Err(Error::InvalidStair("at least one column is required".into()));
        }
        if x_breaks.len() != heights.len() + 1 {
            return Err(Error::InvalidStair(format!(
                "{} breakpoints for {} columns",
                x_breaks.len(),
                heights.len()
            )));
        }
        if let Some(w) = x_breaks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStair(format!(
                "breakpoints not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(w) = heights.windows(2).find(|w| w[0] <= w[1]) {
            return Err(Error::InvalidStair(format!(
                "heights not strictly decreasing at {} <= {}",
                w[0], w[1]
            )));
        }
        if !heights.last().unwrap().is_positive() {
            return Err(Error::InvalidStair("heights must be positive".into()));
        }
        Ok(StairPolygon { x_breaks, heights })
    }

    pub fn from_ints(x_breaks: &[i64], heights: &[i64]) -> Result<Self, Error> {
        StairPolygon::new(
            x_breaks.iter().map(|&v| v.into()).collect(),
            heights.iter().map(|&v| v.into()).collect(),
        )
    }

    /// `S(j) = ⋃_{i=0}^{2j-1} [i, i+1) × [0, 2j − i)`, a (2j−1)-stair of area `j(2j+1)`.
    pub fn canonical(j: u32) -> Result<Self, Error> {
        if j == 0 {
            return Err(Error::InvalidParameter("j must be at least 1".into()));
        }
        let n = 2 * j as i64;
        let breaks: Vec<i64> = (0..=n).collect();
        let heights: Vec<i64> = (0..n).map(|i| n - i).collect();
        StairPolygon::from_ints(&breaks, &heights)
    }

    /// The half-open unit square.
    pub fn unit_square() -> Self {
        StairPolygon::from_ints(&[0, 1], &[1]).expect("valid")
    }

    pub fn x_breaks(&self) -> &[Rational] {
        &self.x_breaks
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    /// Number of steps `r` (columns minus one).
    pub fn steps(&self) -> usize {
        self.heights.len() - 1
    }

    fn column_of(&self, x: &Rational) -> Option<usize> {
        if *x < self.x_breaks[0] || *x >= *self.x_breaks.last().unwrap() {
            return None;
        }
        // last i with x_i <= x
        let i = self.x_breaks.partition_point(|b| b <= x) - 1;
        Some(i)
    }

    /// Half-open membership.
    pub fn contains(&self, p: &Point) -> bool {
        match self.column_of(&p.x) {
            Some(i) => !p.y.is_negative() && p.y < self.heights[i],
            None => false,
        }
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        let first = &self.x_breaks[0];
        let last = self.x_breaks.last().unwrap();
        if p.x <= *first || p.x >= *last || !p.y.is_positive() {
            return false;
        }
        // on an inner breakpoint the lower (right) column bounds the interior
        let i = self.column_of(&p.x).expect("inside x-range");
        p.y < self.heights[i]
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        let first = &self.x_breaks[0];
        let last = self.x_breaks.last().unwrap();
        if p.x < *first || p.x > *last || p.y.is_negative() {
            return false;
        }
        p.y <= self.closed_height_at(&p.x)
    }

    /// Height of the closure's vertical section at `x` (inside the x-range).
    pub(crate) fn closed_height_at(&self, x: &Rational) -> Rational {
        let last = self.x_breaks.len() - 1;
        if *x >= self.x_breaks[last] {
            return self.heights[last - 1].clone();
        }
        let i = self.column_of(x).expect("inside x-range");
        if i > 0 && *x == self.x_breaks[i] {
            self.heights[i - 1].clone()
        } else {
            self.heights[i].clone()
        }
    }

    pub fn area(&self) -> Rational {
        self.x_breaks
            .windows(2)
            .zip(&self.heights)
            .map(|(w, h)| (&w[1] - &w[0]) * h)
            .sum()
    }

    /// Multiplies every breakpoint and height by `c > 0`.
    pub fn scale(&self, c: &Rational) -> Result<Self, Error> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale(c.clone()));
        }
        Ok(StairPolygon {
            x_breaks: self.x_breaks.iter().map(|x| x * c).collect(),
            heights: self.heights.iter().map(|y| y * c).collect(),
        })
    }

    pub fn bbox(&self) -> Rect {
        Rect {
            x_min: self.x_breaks[0].clone(),
            x_max: self.x_breaks.last().unwrap().clone(),
            y_min: Rational::zero(),
            y_max: self.heights[0].clone(),
        }
    }

    /// Inner corners `(x_i, y_i)` for `i = 1..r`.
    pub fn inner_corners(&self) -> Vec<Point> {
        (1..self.heights.len())
            .map(|i| Point::new(self.x_breaks[i].clone(), self.heights[i].clone()))
            .collect()
    }

    /// `(x_0, y_0)` top-left and `(x_{r+1}, 0)` bottom-right extreme corners.
    pub fn extreme_corners(&self) -> (Point, Point) {
        (
            Point::new(self.x_breaks[0].clone(), self.heights[0].clone()),
            Point::new(self.x_breaks.last().unwrap().clone(), Rational::zero()),
        )
    }

    /// Outline as a closed polygon, counter-clockwise from the origin corner.
    pub fn outline(&self) -> Vec<Point> {
        let n = self.heights.len();
        let mut pts = vec![Point::new(self.x_breaks[0].clone(), Rational::zero())];
        pts.push(Point::new(self.x_breaks[n].clone(), Rational::zero()));
        for i in (0..n).rev() {
            pts.push(Point::new(self.x_breaks[i + 1].clone(), self.heights[i].clone()));
            pts.push(Point::new(self.x_breaks[i].clone(), self.heights[i].clone()));
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn contains_examples() {
        let s1 = StairPolygon::canonical(1).unwrap();
        assert_eq!(s1, StairPolygon::from_ints(&[0, 1, 2], &[2, 1]).unwrap());
        assert!(s1.contains(&Point::from_ints(0, 0)));
        assert!(!s1.contains(&Point::from_ints(1, 1)));
        assert!(!s1.contains(&Point::from_ints(0, 2)));
        assert!(!s1.contains(&Point::from_ints(2, 0)));
        assert!(s1.contains(&Point::new(rat(3, 2), rat(1, 2))));
    }

    #[test]
    fn area_examples() {
        assert_eq!(StairPolygon::canonical(1).unwrap().area(), Rational::integer(3));
        assert_eq!(StairPolygon::canonical(2).unwrap().area(), Rational::integer(10));
        assert_eq!(StairPolygon::unit_square().area(), Rational::one());
        // j(2j+1) summation oracle
        for j in 1..8u32 {
            let jj = j as i64;
            let sum: i64 = (1..=2 * jj).sum();
            assert_eq!(StairPolygon::canonical(j).unwrap().area(), Rational::integer(sum));
            assert_eq!(sum, jj * (2 * jj + 1));
        }
    }

    #[test]
    fn area_by_unit_cells() {
        // count unit cells with lower-left corner inside S(3)
        let s = StairPolygon::canonical(3).unwrap();
        let cells = (0..7)
            .flat_map(|x| (0..7).map(move |y| (x, y)))
            .filter(|&(x, y)| s.contains(&Point::from_ints(x, y)))
            .count();
        assert_eq!(Rational::integer(cells as i64), s.area());
    }

    #[test]
    fn scale_examples() {
        let s1 = StairPolygon::canonical(1).unwrap();
        let scaled = s1.scale(&rat(1, 3)).unwrap();
        assert_eq!(
            scaled,
            StairPolygon::new(vec![rat(0, 1), rat(1, 3), rat(2, 3)], vec![rat(2, 3), rat(1, 3)]).unwrap()
        );
        assert_eq!(s1.scale(&Rational::one()).unwrap(), s1);
        let s2 = StairPolygon::canonical(2).unwrap();
        assert_eq!(s2.scale(&rat(1, 4)).unwrap().area(), rat(5, 8));
        assert!(s1.scale(&Rational::zero()).is_err());
        assert!(s1.scale(&rat(-1, 2)).is_err());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(StairPolygon::from_ints(&[0, 0, 1], &[2, 1]).is_err());
        assert!(StairPolygon::from_ints(&[0, 1, 2], &[1, 1]).is_err());
        assert!(StairPolygon::from_ints(&[0, 1, 2], &[1, 2]).is_err());
        assert!(StairPolygon::from_ints(&[0, 1], &[0]).is_err());
        assert!(StairPolygon::from_ints(&[0, 1, 2], &[1]).is_err());
        assert!(StairPolygon::from_ints(&[0], &[]).is_err());
    }

    #[test]
    fn corner_semantics() {
        // closed-left / open-right, closed-bottom / open-top at every corner
        let s = StairPolygon::canonical(2).unwrap();
        for i in 0..=4i64 {
            for y in 0..=5i64 {
                let p = Point::from_ints(i, y);
                let expected = i < 4 && y < 4 - i;
                assert_eq!(s.contains(&p), expected, "{p:?}");
            }
        }
    }

    #[test]
    fn interior_and_closure() {
        let s = StairPolygon::canonical(1).unwrap();
        let on_step = Point::new(Rational::one(), rat(1, 2));
        assert!(s.contains_interior(&on_step));
        assert!(!s.contains_interior(&Point::new(Rational::one(), rat(3, 2))));
        assert!(s.contains_closed(&Point::new(Rational::one(), rat(3, 2))));
        assert!(s.contains_closed(&Point::from_ints(1, 2)));
        assert!(s.contains_closed(&Point::from_ints(2, 1)));
        assert!(!s.contains_closed(&Point::new(rat(3, 2), rat(3, 2))));
        assert!(!s.contains_interior(&Point::new(rat(1, 2), Rational::zero())));
    }

    #[test]
    fn json_round_trip() {
        let s = StairPolygon::canonical(1).unwrap().scale(&rat(1, 3)).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"x_breaks":["0","1/3","2/3"],"heights":["2/3","1/3"]}"#);
        let back: StairPolygon = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<StairPolygon>(r#"{"x_breaks":["0","0"],"heights":["1"]}"#).is_err());
    }

    #[test]
    fn outline_area_by_shoelace() {
        let s = StairPolygon::canonical(2).unwrap().scale(&rat(2, 3)).unwrap();
        let pts = s.outline();
        let twice: Rational = (0..pts.len())
            .map(|i| {
                let a = &pts[i];
                let b = &pts[(i + 1) % pts.len()];
                &a.x * &b.y - &b.x * &a.y
            })
            .sum();
        assert_eq!(twice / Rational::integer(2), s.area());
    }

    fn arb_stair() -> impl Strategy<Value = StairPolygon> {
        (1usize..5)
            .prop_flat_map(|n| {
                (
                    -5i64..5,
                    proptest::collection::vec(1i64..5, n),
                    proptest::collection::vec(1i64..5, n),
                    1i64..4,
                )
            })
            .prop_map(|(x0, widths, drops, den)| {
                let mut xs = vec![rat(x0, den)];
                for w in &widths {
                    let last = xs.last().unwrap().clone();
                    xs.push(last + rat(*w, den));
                }
                let mut hs = Vec::new();
                let mut h: i64 = drops.iter().sum();
                for d in &drops {
                    hs.push(rat(h, den));
                    h -= d;
                }
                StairPolygon::new(xs, hs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn area_scales_quadratically(s in arb_stair(), n in 1i64..9, d in 1i64..9) {
            let c = rat(n, d);
            prop_assert_eq!(s.scale(&c).unwrap().area(), &c * &c * s.area());
        }

        #[test]
        fn corners_follow_half_open_rule(s in arb_stair()) {
            for (i, h) in s.heights().iter().enumerate() {
                let x0 = &s.x_breaks()[i];
                let x1 = &s.x_breaks()[i + 1];
                prop_assert!(s.contains(&Point::new(x0.clone(), Rational::zero())));
                prop_assert!(!s.contains(&Point::new(x0.clone(), h.clone())));
                let next_h = s.heights().get(i + 1).cloned().unwrap_or_else(Rational::zero);
                // bottom-right corner belongs to the next column (or nothing)
                prop_assert_eq!(s.contains(&Point::new(x1.clone(), Rational::zero())), next_h.is_positive());
            }
        }
    }
}
