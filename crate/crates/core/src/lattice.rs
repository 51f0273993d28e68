//! Planar lattices with exact rational bases.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Rect};
use crate::rational::{common_denominator, Rational};
use crate::Error;

/// The lattice `{a·u1 + b·u2 : a, b ∈ ℤ}` with `det(u1, u2) ≠ 0`.
///
/// Equality, hashing and ordering go through the unique lower-triangular
/// basis `((α, β), (0, γ))`, `α, γ > 0`, `0 ≤ β < γ`, so two lattices compare
/// equal exactly when they are the same point set.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct Lattice {
    u1: Point,
    u2: Point,
    #[serde(skip)]
    det: Rational,
    #[serde(skip)]
    reduced: (Point, Point),
}

#[derive(Deserialize)]
struct RawLattice {
    u1: Point,
    u2: Point,
}

impl TryFrom<RawLattice> for Lattice {
    type Error = Error;
    fn try_from(raw: RawLattice) -> Result<Self, Error> {
        Lattice::new(raw.u1, raw.u2)
    }
}

/// Half-open fundamental parallelogram `{a·u1 + b·u2 : 0 ≤ a, b < 1}`.
#[derive(Clone, Debug)]
pub struct FundamentalDomain<'a> {
    lattice: &'a Lattice,
}

impl FundamentalDomain<'_> {
    pub fn contains(&self, p: &Point) -> bool {
        let (a, b) = self.lattice.coefficients(p);
        let unit = |c: &Rational| !c.is_negative() && *c < Rational::one();
        unit(&a) && unit(&b)
    }

    pub fn area(&self) -> Rational {
        self.lattice.covolume()
    }

    /// The unique representative of `p + Λ` inside the domain.
    pub fn reduce(&self, p: &Point) -> Point {
        let (a, b) = self.lattice.coefficients(p);
        let fa = Rational::from_bigint(a.floor());
        let fb = Rational::from_bigint(b.floor());
        p - &self.lattice.combination(&fa, &fb)
    }
}

impl Lattice {
    pub fn new(u1: Point, u2: Point) -> Result<Self, Error> {
        let det = &u1.x * &u2.y - &u1.y * &u2.x;
        if det.is_zero() {
            return Err(Error::SingularBasis);
        }
        let reduced = gauss_reduce(u1.clone(), u2.clone());
        Ok(Lattice { u1, u2, det, reduced })
    }

    pub fn from_ints(u1: (i64, i64), u2: (i64, i64)) -> Result<Self, Error> {
        Lattice::new(Point::from_ints(u1.0, u1.1), Point::from_ints(u2.0, u2.1))
    }

    /// `ℤ²`.
    pub fn integer() -> Self {
        Lattice::from_ints((1, 0), (0, 1)).expect("unimodular")
    }

    /// `Λ(m, j)`, generated by `(1, m)` and `(0, 2j + 1)`.
    pub fn lambda_mj(m: i64, j: u32) -> Result<Self, Error> {
        if m < 1 || j < 1 {
            return Err(Error::InvalidParameter(format!("Λ(m, j) needs m, j ≥ 1, got m={m}, j={j}")));
        }
        Lattice::from_ints((1, m), (0, 2 * j as i64 + 1))
    }

    pub fn u1(&self) -> &Point {
        &self.u1
    }

    pub fn u2(&self) -> &Point {
        &self.u2
    }

    /// Signed determinant of the basis as given.
    pub fn det(&self) -> &Rational {
        &self.det
    }

    /// `d(Λ) = |det|`, the area of a fundamental domain.
    pub fn covolume(&self) -> Rational {
        self.det.abs()
    }

    pub fn fundamental_domain(&self) -> FundamentalDomain<'_> {
        FundamentalDomain { lattice: self }
    }

    pub fn combination(&self, a: &Rational, b: &Rational) -> Point {
        &self.u1.scale(a) + &self.u2.scale(b)
    }

    pub fn point(&self, a: i64, b: i64) -> Point {
        self.combination(&Rational::integer(a), &Rational::integer(b))
    }

    /// Real coefficients `(a, b)` with `a·u1 + b·u2 = p`.
    pub fn coefficients(&self, p: &Point) -> (Rational, Rational) {
        let a = (&p.x * &self.u2.y - &p.y * &self.u2.x) / &self.det;
        let b = (&self.u1.x * &p.y - &self.u1.y * &p.x) / &self.det;
        (a, b)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let (a, b) = self.coefficients(p);
        a.is_integer() && b.is_integer()
    }

    /// `c·Λ`.
    pub fn scale(&self, c: &Rational) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::SingularBasis);
        }
        Lattice::new(self.u1.scale(c), self.u2.scale(c))
    }

    /// Same lattice as a point set: each basis vector lies in the other.
    pub fn same_points(&self, other: &Lattice) -> bool {
        other.contains(&self.u1)
            && other.contains(&self.u2)
            && self.contains(&other.u1)
            && self.contains(&other.u2)
    }

    /// The lower-triangular basis `((α, β), (0, γ))` with `α, γ > 0`, `0 ≤ β < γ`.
    pub fn canonical_basis(&self) -> (Point, Point) {
        let (alpha, beta, gamma) = self.canonical_triple();
        (Point::new(alpha, beta), Point::new(Rational::zero(), gamma))
    }

    fn canonical_triple(&self) -> (Rational, Rational, Rational) {
        let coords = [&self.u1.x, &self.u1.y, &self.u2.x, &self.u2.y];
        let den = common_denominator(coords.iter().copied());
        let to_int = |r: &Rational| (r.numer() * &den) / r.denom();
        let (x1, y1, x2, y2) = (to_int(coords[0]), to_int(coords[1]), to_int(coords[2]), to_int(coords[3]));
        let egcd = x1.extended_gcd(&x2);
        let (mut g, mut s, mut t) = (egcd.gcd, egcd.x, egcd.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        let det_int = &x1 * &y2 - &y1 * &x2;
        let gamma = det_int.abs() / &g;
        let beta = (&s * &y1 + &t * &y2).mod_floor(&gamma);
        let d = Rational::from_bigint(den);
        (
            Rational::from_bigint(g) / &d,
            Rational::from_bigint(beta) / &d,
            Rational::from_bigint(gamma) / &d,
        )
    }

    /// A Lagrange–Gauss reduced basis of the same lattice.
    pub(crate) fn reduced_basis(&self) -> (Point, Point) {
        self.reduced.clone()
    }

    /// Bounding box of the closed fundamental parallelogram of the reduced basis.
    pub(crate) fn fundamental_box(&self) -> Rect {
        let (a, b) = self.reduced_basis();
        let ab = &a + &b;
        Rect::bounding(&[Point::origin(), a, b, ab]).expect("non-empty")
    }

    /// Every lattice point in the closed rectangle, sorted by `≺`.
    ///
    /// The coefficient ranges come from the exact inverse basis applied to
    /// the four corners, so no point is missed.
    pub fn points_in_box(&self, rect: &Rect) -> Vec<Point> {
        let (a, b) = &self.reduced;
        let reduced = Lattice { u1: a.clone(), u2: b.clone(), det: &a.x * &b.y - &a.y * &b.x, reduced: self.reduced.clone() };
        let coeffs: Vec<(Rational, Rational)> = rect.corners().iter().map(|c| reduced.coefficients(c)).collect();
        let a_lo = coeffs.iter().map(|c| c.0.clone()).min().unwrap().ceil();
        let a_hi = coeffs.iter().map(|c| c.0.clone()).max().unwrap().floor();
        let b_lo = coeffs.iter().map(|c| c.1.clone()).min().unwrap().ceil();
        let b_hi = coeffs.iter().map(|c| c.1.clone()).max().unwrap().floor();
        let (a_lo, a_hi) = (to_i64(&a_lo), to_i64(&a_hi));
        let (b_lo, b_hi) = (to_i64(&b_lo), to_i64(&b_hi));
        let mut out = Vec::new();
        for i in a_lo..=a_hi {
            let base = reduced.u1.scale(&Rational::integer(i));
            for k in b_lo..=b_hi {
                let p = &base + &reduced.u2.scale(&Rational::integer(k));
                if rect.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }
}

fn gauss_reduce(mut a: Point, mut b: Point) -> (Point, Point) {
    let norm = |p: &Point| &p.x * &p.x + &p.y * &p.y;
    let dot = |p: &Point, q: &Point| &p.x * &q.x + &p.y * &q.y;
    loop {
        if norm(&a) > norm(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        let mu = dot(&a, &b) / norm(&a);
        let mu = Rational::from_bigint((mu + Rational::new(1, 2)).floor());
        if mu.is_zero() {
            return (a, b);
        }
        b = &b - &a.scale(&mu);
    }
}

fn to_i64(b: &BigInt) -> i64 {
    b.to_i64().expect("coefficient range out of i64")
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_triple() == other.canonical_triple()
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_triple().hash(state);
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_triple().cmp(&other.canonical_triple())
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice[{}, {}]", self.u1, self.u2)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.u1, self.u2)
    }
}

/// All sublattices of `ℤ²` of index `n`, as `((a, b), (0, c))` with
/// `a·c = n`, `0 ≤ b < c`, ordered by `a` then `b`. There are `σ(n)` of them.
pub fn enumerate_integer_sublattices(n: u64) -> Vec<Lattice> {
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n.is_multiple_of(*a)) {
        let c = n / a;
        for b in 0..c {
            out.push(Lattice::from_ints((a as i64, b as i64), (0, c as i64)).expect("a·c ≠ 0"));
        }
    }
    out
}

/// `(1/q)·Λ` for every lattice and every `q`, lattice-major order.
pub fn rational_dilates(lattices: &[Lattice], denominators: &[u64]) -> Vec<Lattice> {
    lattices
        .iter()
        .flat_map(|l| {
            denominators
                .iter()
                .map(move |&q| l.scale(&Rational::new(1, q as i64)).expect("q ≥ 1"))
        })
        .collect()
}
