//! Planar primitives: points with the sum-then-abscissa order, closed
//! axis-aligned rectangles, and dilates of the standard right triangle.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::Error;

/// A point (or vector) of the plane with exact coordinates.
///
/// `Ord` is the "precedes" order: compare `x + y` first, then `x`. It is a
/// total order compatible with translation.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rational::integer(x), Rational::integer(y))
    }

    pub fn origin() -> Self {
        Point::default()
    }

    pub fn scale(&self, c: &Rational) -> Point {
        Point::new(&self.x * c, &self.y * c)
    }

    pub fn coordinate_sum(&self) -> Rational {
        &self.x + &self.y
    }
}

/// `p ≺ q`: `p.x + p.y < q.x + q.y`, or equal sums and `p.x < q.x`.
pub fn prec(p: &Point, q: &Point) -> bool {
    p.cmp(q) == Ordering::Less
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coordinate_sum()
            .cmp(&other.coordinate_sum())
            .then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        &self + &rhs
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        &self - &rhs
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        -&self
    }
}

// Points travel as ["x", "y"] string pairs.
impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(Rational, Rational)>::deserialize(d)?;
        Ok(Point::new(x, y))
    }
}

/// A closed axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: Rational,
    pub x_max: Rational,
    pub y_min: Rational,
    pub y_max: Rational,
}

impl Rect {
    pub fn new(x_min: Rational, x_max: Rational, y_min: Rational, y_max: Rational) -> Result<Self, Error> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::InvalidRect);
        }
        Ok(Rect { x_min, x_max, y_min, y_max })
    }

    pub fn from_ints(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self, Error> {
        Rect::new(x_min.into(), x_max.into(), y_min.into(), y_max.into())
    }

    /// Smallest rectangle holding every point; `None` for an empty slice.
    pub fn bounding(points: &[Point]) -> Option<Rect> {
        let first = points.first()?;
        let mut r = Rect {
            x_min: first.x.clone(),
            x_max: first.x.clone(),
            y_min: first.y.clone(),
            y_max: first.y.clone(),
        };
        for p in &points[1..] {
            if p.x < r.x_min {
                r.x_min = p.x.clone();
            }
            if p.x > r.x_max {
                r.x_max = p.x.clone();
            }
            if p.y < r.y_min {
                r.y_min = p.y.clone();
            }
            if p.y > r.y_max {
                r.y_max = p.y.clone();
            }
        }
        Some(r)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    pub fn translate(&self, v: &Point) -> Rect {
        Rect {
            x_min: &self.x_min + &v.x,
            x_max: &self.x_max + &v.x,
            y_min: &self.y_min + &v.y,
            y_max: &self.y_max + &v.y,
        }
    }

    /// Point reflection through the origin.
    pub fn negate(&self) -> Rect {
        Rect {
            x_min: -&self.x_max,
            x_max: -&self.x_min,
            y_min: -&self.y_max,
            y_max: -&self.y_min,
        }
    }

    /// Minkowski difference `self − other = {p − q}`.
    pub fn minus(&self, other: &Rect) -> Rect {
        Rect {
            x_min: &self.x_min - &other.x_max,
            x_max: &self.x_max - &other.x_min,
            y_min: &self.y_min - &other.y_max,
            y_max: &self.y_max - &other.y_min,
        }
    }

    pub fn inflate(&self, by: &Rational) -> Rect {
        Rect {
            x_min: &self.x_min - by,
            x_max: &self.x_max + by,
            y_min: &self.y_min - by,
            y_max: &self.y_max + by,
        }
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_min.clone(), self.y_min.clone()),
            Point::new(self.x_max.clone(), self.y_min.clone()),
            Point::new(self.x_min.clone(), self.y_max.clone()),
            Point::new(self.x_max.clone(), self.y_max.clone()),
        ]
    }

    pub fn width(&self) -> Rational {
        &self.x_max - &self.x_min
    }

    pub fn height(&self) -> Rational {
        &self.y_max - &self.y_min
    }
}

/// `l·T` where `T` has vertices `(0,0)`, `(1,0)`, `(0,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScaledTriangle {
    l: Rational,
}

impl ScaledTriangle {
    pub fn new(l: Rational) -> Result<Self, Error> {
        if !l.is_positive() {
            return Err(Error::NonPositiveScale(l));
        }
        Ok(ScaledTriangle { l })
    }

    /// The standard triangle itself.
    pub fn standard() -> Self {
        ScaledTriangle { l: Rational::one() }
    }

    pub fn scale(&self) -> &Rational {
        &self.l
    }

    pub fn vertices(&self) -> [Point; 3] {
        [
            Point::origin(),
            Point::new(self.l.clone(), Rational::zero()),
            Point::new(Rational::zero(), self.l.clone()),
        ]
    }

    pub fn area(&self) -> Rational {
        &self.l * &self.l / Rational::integer(2)
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        !p.x.is_negative() && !p.y.is_negative() && p.coordinate_sum() <= self.l
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        p.x.is_positive() && p.y.is_positive() && p.coordinate_sum() < self.l
    }

    pub fn bbox(&self) -> Rect {
        Rect {
            x_min: Rational::zero(),
            x_max: self.l.clone(),
            y_min: Rational::zero(),
            y_max: self.l.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn pt(x: Rational, y: Rational) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn prec_examples() {
        assert!(prec(&Point::from_ints(0, 0), &Point::from_ints(1, 0)));
        assert!(prec(&Point::from_ints(0, 1), &Point::from_ints(1, 0)));
        let h = pt(rat(1, 2), rat(1, 2));
        assert!(!prec(&h, &h));
    }

    #[test]
    fn triangle_membership() {
        let t = ScaledTriangle::standard();
        let corner = Point::from_ints(1, 0);
        assert!(t.contains_closed(&corner));
        assert!(!t.contains_interior(&corner));
        assert!(t.contains_interior(&pt(rat(1, 4), rat(1, 4))));
        assert!(!t.contains_closed(&pt(rat(3, 4), rat(3, 4))));
        assert!(ScaledTriangle::new(Rational::zero()).is_err());
        assert_eq!(ScaledTriangle::new(rat(3, 2)).unwrap().area(), rat(9, 8));
    }

    #[test]
    fn rect_validation() {
        assert!(Rect::from_ints(1, 0, 0, 0).is_err());
        let r = Rect::from_ints(0, 2, -1, 1).unwrap();
        assert!(r.contains(&Point::from_ints(2, -1)));
        assert_eq!(r.negate(), Rect::from_ints(-2, 0, -1, 1).unwrap());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..7).prop_map(|(n, d)| rat(n, d))
    }

    fn small_point() -> impl Strategy<Value = Point> {
        (small_rat(), small_rat()).prop_map(|(x, y)| pt(x, y))
    }

    proptest! {
        #[test]
        fn prec_is_strict_total_order(p in small_point(), q in small_point(), r in small_point()) {
            // trichotomy
            let n = [prec(&p, &q), prec(&q, &p), p == q].iter().filter(|b| **b).count();
            prop_assert_eq!(n, 1);
            // transitivity
            if prec(&p, &q) && prec(&q, &r) {
                prop_assert!(prec(&p, &r));
            }
        }

        #[test]
        fn prec_is_translation_invariant(p in small_point(), q in small_point(), w in small_point()) {
            prop_assert_eq!(prec(&p, &q), prec(&(&p + &w), &(&q + &w)));
        }
    }
}
