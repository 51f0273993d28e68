//! The stair polygon `S_j(Λ)` and the canonical regions around `S(j)`.
//!
//! For a lattice `Λ` with covering scale `λ = λ_j(T, Λ)`, a point `p` of the
//! closed triangle `λT` belongs to `S_j(Λ)` when fewer than `j` points of its
//! residue class `p + Λ` inside `λT` come before it in the `≺` order. Since
//! `p + v ≺ p` iff `v ≺ 0`, the test only needs the lattice vectors below the
//! origin.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::lambda_lower;
use crate::geometry::{Point, Rect, ScaledTriangle};
use crate::lattice::{enumerate_integer_sublattices, Lattice};
use crate::multiplicity::{is_exact_jfold_tiling, Region};
use crate::rational::Rational;
use crate::stair::StairPolygon;
use crate::Error;

/// `S_j(Λ)` with its corners and the covering scale it was cut from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SjResult {
    pub j: u32,
    pub stair: StairPolygon,
    /// Inner corners `Z_j(Λ)`.
    pub corners: Vec<Point>,
    /// `Z*_j(Λ)`: the top-left and bottom-right extreme corners.
    pub extreme_corners: (Point, Point),
    /// `λ_j(T, Λ)`.
    pub scale: Rational,
}

/// Lattice vectors `v ≺ 0` whose translate `λT − v` can meet `λT`.
fn preceding_vectors(lattice: &Lattice, scale: &Rational) -> Vec<Point> {
    let window = Rect::new(-scale, scale.clone(), -scale, scale.clone()).expect("scale > 0");
    let origin = Point::origin();
    lattice.points_in_box(&window).into_iter().filter(|v| *v < origin).collect()
}

fn member(tri: &ScaledTriangle, preceding: &[Point], j: u32, p: &Point) -> bool {
    if !tri.contains_closed(p) {
        return false;
    }
    let mut earlier = 0;
    for v in preceding {
        if tri.contains_closed(&(p + v)) {
            earlier += 1;
            if earlier >= j {
                return false;
            }
        }
    }
    true
}

/// Membership in `S_j(Λ)` with the preceding lattice vectors computed once.
#[derive(Clone, Debug)]
pub struct SjOracle {
    j: u32,
    tri: ScaledTriangle,
    preceding: Vec<Point>,
}

impl SjOracle {
    /// `scale` must be `λ_j(T, Λ)`.
    pub fn new(lattice: &Lattice, j: u32, scale: &Rational) -> Result<Self, Error> {
        if j == 0 {
            return Err(Error::InvalidParameter("j must be at least 1".into()));
        }
        Ok(SjOracle { j, tri: ScaledTriangle::new(scale.clone())?, preceding: preceding_vectors(lattice, scale) })
    }

    pub fn contains(&self, p: &Point) -> bool {
        member(&self.tri, &self.preceding, self.j, p)
    }
}

/// `p ∈ S_j(Λ)` for the covering scale `scale = λ_j(T, Λ)`.
pub fn sj_membership(lattice: &Lattice, j: u32, p: &Point, scale: &Rational) -> Result<bool, Error> {
    Ok(SjOracle::new(lattice, j, scale)?.contains(p))
}

/// Builds `S_j(Λ)` column by column and validates it.
///
/// Vertical edges of `S_j(Λ)` lie on left edges `x = −v_x` of translates and
/// horizontal edges on bottom edges `y = −v_y`, so the column heights only
/// need to be probed at those coordinates.
pub fn construct_sj(lattice: &Lattice, j: u32) -> Result<SjResult, Error> {
    let scale = lambda_lower(lattice, j)?.value;
    let oracle = SjOracle::new(lattice, j, &scale)?;
    let window = Rect::new(-&scale, scale.clone(), -&scale, scale.clone())?;
    let near = lattice.points_in_box(&window);

    let zero = Rational::zero();
    let mut xs = BTreeSet::from([zero.clone(), scale.clone()]);
    let mut ys = BTreeSet::from([zero.clone(), scale.clone(), &scale + Rational::one()]);
    for v in &near {
        for x in [-&v.x, &scale - &v.x] {
            if x >= zero && x <= scale {
                xs.insert(x);
            }
        }
        for y in [-&v.y, &scale - &v.y] {
            if y >= zero && y <= scale {
                ys.insert(y);
            }
        }
    }
    let xs: Vec<Rational> = xs.into_iter().collect();
    let ys: Vec<Rational> = ys.into_iter().collect();

    // the column over [x, next x) has the height of the first y that is not a member
    let heights: Vec<Rational> = xs
        .par_iter()
        .map(|x| {
            let k = ys.partition_point(|y| oracle.contains(&Point::new(x.clone(), y.clone())));
            if k == 0 {
                zero.clone()
            } else {
                ys[k].clone()
            }
        })
        .collect();

    let mut breaks = Vec::new();
    let mut cols: Vec<Rational> = Vec::new();
    for (x, h) in xs.iter().zip(&heights) {
        if cols.last() != Some(h) {
            if let Some(prev) = cols.last() {
                if h > prev {
                    return Err(Error::Validation(format!("S_{j} column height rises at x = {x}")));
                }
            }
            breaks.push(x.clone());
            cols.push(h.clone());
        }
    }
    if cols.last() != Some(&zero) {
        return Err(Error::Validation(format!("S_{j} reaches the right end of the candidate range")));
    }
    cols.pop();
    if breaks.first() != Some(&zero) || cols.is_empty() {
        return Err(Error::Validation(format!("S_{j} is empty at the origin")));
    }
    let stair = StairPolygon::new(breaks, cols)?;

    let area = stair.area();
    let expected = Rational::integer(j as i64) * lattice.covolume();
    if area != expected {
        return Err(Error::Validation(format!("S_{j} has area {area}, expected {expected}")));
    }
    if !is_exact_jfold_tiling(&Region::half_open_stair(stair.clone()), lattice, j)? {
        return Err(Error::Validation(format!("S_{j} is not an exact {j}-fold tile")));
    }
    Ok(SjResult {
        j,
        corners: stair.inner_corners(),
        extreme_corners: stair.extreme_corners(),
        stair,
        scale,
    })
}

/// Half-open integer box `[x0, x1) × [y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBox {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl CellBox {
    fn contains(&self, p: &Point) -> bool {
        p.x >= Rational::integer(self.x0)
            && p.x < Rational::integer(self.x1)
            && p.y >= Rational::integer(self.y0)
            && p.y < Rational::integer(self.y1)
    }

    fn area(&self) -> i64 {
        (self.x1 - self.x0).max(0) * (self.y1 - self.y0).max(0)
    }
}

/// A disjoint union of half-open integer boxes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxUnion(pub Vec<CellBox>);

impl BoxUnion {
    pub fn contains(&self, p: &Point) -> bool {
        self.0.iter().any(|b| b.contains(p))
    }

    pub fn area(&self) -> i64 {
        self.0.iter().map(CellBox::area).sum()
    }

    pub fn bbox(&self) -> Rect {
        let x0 = self.0.iter().map(|b| b.x0).min().unwrap_or(0);
        let x1 = self.0.iter().map(|b| b.x1).max().unwrap_or(0);
        let y0 = self.0.iter().map(|b| b.y0).min().unwrap_or(0);
        let y1 = self.0.iter().map(|b| b.y1).max().unwrap_or(0);
        Rect::from_ints(x0, x1, y0, y1).expect("ordered")
    }
}

/// `S(j)` and its companion regions inside `U(j) = [0, 2j+1)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalRegions {
    pub s: StairPolygon,
    pub s_star: BoxUnion,
    pub d: BoxUnion,
    pub b: BoxUnion,
    pub c: BoxUnion,
    pub u: BoxUnion,
}

pub fn canonical_regions(j: u32) -> Result<CanonicalRegions, Error> {
    let s = StairPolygon::canonical(j)?;
    let n = 2 * j as i64;
    let cell = |x0, x1, y0, y1| CellBox { x0, x1, y0, y1 };
    Ok(CanonicalRegions {
        s,
        s_star: BoxUnion((1..=n).map(|i| cell(i, i + 1, n + 1 - i, n + 1)).collect()),
        d: BoxUnion((0..=n).map(|i| cell(i, i + 1, n - i, n + 1 - i)).collect()),
        b: BoxUnion(vec![cell(0, 1, 0, n + 1)]),
        c: BoxUnion(vec![cell(0, n + 1, 0, 1)]),
        u: BoxUnion(vec![cell(0, n + 1, 0, n + 1)]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    B,
    C,
    D,
    S,
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "B" | "b" => Ok(RegionKind::B),
            "C" | "c" => Ok(RegionKind::C),
            "D" | "d" => Ok(RegionKind::D),
            "S" | "s" => Ok(RegionKind::S),
            _ => Err(Error::Parse(format!("unknown region {s:?}, expected B, C, D or S"))),
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RegionKind::B => "B",
            RegionKind::C => "C",
            RegionKind::D => "D",
            RegionKind::S => "S",
        };
        f.write_str(name)
    }
}

/// `card{Λ(m, j) ∩ ((s, t) + R(j))}` by enumeration.
pub fn count_region(m: i64, j: u32, kind: RegionKind, s: i64, t: i64) -> Result<usize, Error> {
    let lattice = Lattice::lambda_mj(m, j)?;
    let regions = canonical_regions(j)?;
    let shift = Point::from_ints(s, t);
    let (bbox, inside): (Rect, Box<dyn Fn(&Point) -> bool>) = match kind {
        RegionKind::S => (regions.s.bbox(), Box::new(|p: &Point| regions.s.contains(p))),
        RegionKind::B => (regions.b.bbox(), Box::new(|p: &Point| regions.b.contains(p))),
        RegionKind::C => (regions.c.bbox(), Box::new(|p: &Point| regions.c.contains(p))),
        RegionKind::D => (regions.d.bbox(), Box::new(|p: &Point| regions.d.contains(p))),
    };
    Ok(lattice
        .points_in_box(&bbox.translate(&shift))
        .iter()
        .filter(|p| inside(&(*p - &shift)))
        .count())
}

/// `(m, S(j) + Λ(m, j) is an exact j-fold tiling)` for every `m` in `1..=2j+1`.
pub fn stair_tiling_by_parameter(j: u32) -> Result<Vec<(i64, bool)>, Error> {
    let stair = Region::half_open_stair(StairPolygon::canonical(j)?);
    (1..=2 * j as i64 + 1)
        .into_par_iter()
        .map(|m| Ok((m, is_exact_jfold_tiling(&stair, &Lattice::lambda_mj(m, j)?, j)?)))
        .collect()
}

/// `m` in `1..=2j+1` with `gcd(m, 2j+1) = gcd(m+1, 2j+1) = 1`.
pub fn admissible_m(j: u32) -> Vec<i64> {
    let n = 2 * j as i64 + 1;
    (1..=n).filter(|m| m.gcd(&n) == 1 && (m + 1).gcd(&n) == 1).collect()
}

/// Every lattice of determinant `2j+1` inside `(1/q)ℤ²` for some
/// `q ≤ denominator_bound` that tiles `S(j)` exactly j-fold, in canonical order.
pub fn stair_tilers_by_enumeration(j: u32, denominator_bound: u64) -> Result<Vec<Lattice>, Error> {
    if j == 0 || denominator_bound == 0 {
        return Err(Error::InvalidParameter("j and the denominator bound must be at least 1".into()));
    }
    let stair = Region::half_open_stair(StairPolygon::canonical(j)?);
    let n = 2 * j as u64 + 1;
    let mut space = BTreeSet::new();
    for q in 1..=denominator_bound {
        let inv = Rational::new(1, q as i64);
        for l in enumerate_integer_sublattices(n * q * q) {
            space.insert(l.scale(&inv)?);
        }
    }
    let space: Vec<Lattice> = space.into_iter().collect();
    let hits: Result<Vec<Option<Lattice>>, Error> = space
        .par_iter()
        .map(|l| Ok(is_exact_jfold_tiling(&stair, l, j)?.then(|| l.clone())))
        .collect();
    Ok(hits?.into_iter().flatten().collect())
}
