//! j-fold lattice packing and covering densities of triangles.
//!
//! Every triangle is affinely equivalent to `T = conv{(0,0), (1,0), (0,1)}`,
//! and affine maps preserve both the j-fold predicates and the density
//! `|K| / d(Λ)`, so all work happens on `T`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{Point, ScaledTriangle};
use crate::lattice::Lattice;
use crate::multiplicity::{Mode, Predicate, Region};
use crate::rational::Rational;
use crate::stair_theory::admissible_m;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Packing,
    Covering,
}

impl DensityKind {
    pub fn predicate(self) -> Predicate {
        match self {
            DensityKind::Packing => Predicate::Packing,
            DensityKind::Covering => Predicate::Covering,
        }
    }

    /// The standard triangle with the membership this kind counts with.
    pub fn region(self) -> Region {
        let mode = match self {
            DensityKind::Packing => Mode::Interior,
            DensityKind::Covering => Mode::Closed,
        };
        Region::triangle(Rational::one(), mode).expect("unit scale")
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "packing" => Ok(DensityKind::Packing),
            "covering" => Ok(DensityKind::Covering),
            _ => Err(Error::Parse(format!("unknown kind {s:?}, expected packing or covering"))),
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::Packing => "packing",
            DensityKind::Covering => "covering",
        })
    }
}

/// The optimal density together with lattices attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityResult {
    pub value: Rational,
    pub kind: DensityKind,
    pub j: u32,
    pub witness_lattices: Vec<Lattice>,
}

fn check_j(j: u32) -> Result<i64, Error> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    Ok(j as i64)
}

/// `δ_L^j(T) = 2j² / (2j+1)`.
pub fn packing_density(j: u32) -> Result<Rational, Error> {
    let j = check_j(j)?;
    Ok(Rational::new(2 * j * j, 2 * j + 1))
}

/// `ϑ_L^j(T) = (2j+1) / 2`.
pub fn covering_density(j: u32) -> Result<Rational, Error> {
    let j = check_j(j)?;
    Ok(Rational::new(2 * j + 1, 2))
}

pub fn optimal_density(j: u32, kind: DensityKind) -> Result<Rational, Error> {
    match kind {
        DensityKind::Packing => packing_density(j),
        DensityKind::Covering => covering_density(j),
    }
}

/// Lattices generated by `(1/(2j), m/(2j))` and `(0, (2j+1)/(2j))` for admissible `m`.
pub fn optimal_packing_lattices(j: u32) -> Result<Vec<Lattice>, Error> {
    let n = 2 * check_j(j)?;
    admissible_m(j)
        .into_iter()
        .map(|m| Lattice::new(Point::new(Rational::new(1, n), Rational::new(m, n)), Point::new(Rational::zero(), Rational::new(n + 1, n))))
        .collect()
}

/// Lattices generated by `(1/(2j+1), m/(2j+1))` and `(0, 1)` for admissible `m`.
pub fn optimal_covering_lattices(j: u32) -> Result<Vec<Lattice>, Error> {
    let n = 2 * check_j(j)? + 1;
    admissible_m(j)
        .into_iter()
        .map(|m| Lattice::new(Point::new(Rational::new(1, n), Rational::new(m, n)), Point::from_ints(0, 1)))
        .collect()
}

pub fn optimal_lattices(j: u32, kind: DensityKind) -> Result<Vec<Lattice>, Error> {
    match kind {
        DensityKind::Packing => optimal_packing_lattices(j),
        DensityKind::Covering => optimal_covering_lattices(j),
    }
}

/// `|T| / d(Λ)` if `T + Λ` is a j-fold packing (or covering); otherwise the
/// violating point.
pub fn density_of(lattice: &Lattice, j: u32, kind: DensityKind) -> Result<Rational, Error> {
    check_j(j)?;
    let predicate = kind.predicate();
    let verdict = predicate.check(&kind.region(), lattice, j)?;
    if let Some((witness, multiplicity)) = predicate.violation(&verdict, j) {
        return Err(Error::PredicateFailed { kind: predicate.name(), j, witness: Box::new(witness), multiplicity });
    }
    Ok(ScaledTriangle::standard().area() / lattice.covolume())
}

/// The optimal lattices, each checked against the predicate and the closed-form density.
pub fn verified_optimum(j: u32, kind: DensityKind) -> Result<DensityResult, Error> {
    let value = optimal_density(j, kind)?;
    let lattices = optimal_lattices(j, kind)?;
    lattices.par_iter().try_for_each(|l| {
        let d = density_of(l, j, kind)?;
        if d != value {
            return Err(Error::Validation(format!("{l} has {kind} density {d}, expected {value}")));
        }
        Ok(())
    })?;
    Ok(DensityResult { value, kind, j, witness_lattices: lattices })
}

/// `p ↦ M p + t` with an invertible rational matrix `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major.
    pub matrix: [[Rational; 2]; 2],
    pub translation: Point,
}

impl AffineMap {
    pub fn new(matrix: [[Rational; 2]; 2], translation: Point) -> Result<Self, Error> {
        let map = AffineMap { matrix, translation };
        if map.det().is_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        AffineMap {
            matrix: [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]],
            translation: Point::origin(),
        }
    }

    pub fn det(&self) -> Rational {
        let [[a, b], [c, d]] = &self.matrix;
        a * d - b * c
    }

    pub fn apply_linear(&self, p: &Point) -> Point {
        let [[a, b], [c, d]] = &self.matrix;
        Point::new(a * &p.x + b * &p.y, c * &p.x + d * &p.y)
    }

    pub fn apply(&self, p: &Point) -> Point {
        &self.apply_linear(p) + &self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let m = |i: usize, k: usize| &self.matrix[i][0] * &other.matrix[0][k] + &self.matrix[i][1] * &other.matrix[1][k];
        AffineMap {
            matrix: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let [[a, b], [c, d]] = &self.matrix;
        let det = self.det();
        let inv = AffineMap {
            matrix: [[d / &det, -(b / &det)], [-(c / &det), a / &det]],
            translation: Point::origin(),
        };
        let t = -inv.apply_linear(&self.translation);
        AffineMap { translation: t, ..inv }
    }

    /// The image of a lattice under the linear part.
    pub fn map_lattice(&self, lattice: &Lattice) -> Lattice {
        Lattice::new(self.apply_linear(lattice.u1()), self.apply_linear(lattice.u2())).expect("invertible map")
    }
}

/// The affine map sending `a ↦ (0,0)`, `b ↦ (1,0)`, `c ↦ (0,1)`.
pub fn normalize_triangle(a: &Point, b: &Point, c: &Point) -> Result<AffineMap, Error> {
    let e1 = b - a;
    let e2 = c - a;
    let edges = AffineMap {
        matrix: [[e1.x.clone(), e2.x.clone()], [e1.y.clone(), e2.y.clone()]],
        translation: a.clone(),
    };
    if edges.det().is_zero() {
        return Err(Error::Collinear);
    }
    Ok(edges.inverse())
}

/// Area of the triangle `abc`.
pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> Rational {
    let e1 = b - a;
    let e2 = c - a;
    (&e1.x * &e2.y - &e1.y * &e2.x).abs() / Rational::integer(2)
}

/// `density_of` for the triangle `abc`, through its normalising map.
pub fn density_of_triangle(vertices: [&Point; 3], lattice: &Lattice, j: u32, kind: DensityKind) -> Result<Rational, Error> {
    let map = normalize_triangle(vertices[0], vertices[1], vertices[2])?;
    density_of(&map.map_lattice(lattice), j, kind)
}

/// The optimal lattices for the triangle `abc`, pulled back from `T`.
pub fn verified_optimum_for_triangle(vertices: [&Point; 3], j: u32, kind: DensityKind) -> Result<DensityResult, Error> {
    let map = normalize_triangle(vertices[0], vertices[1], vertices[2])?;
    let back = map.inverse();
    let mut result = verified_optimum(j, kind)?;
    result.witness_lattices = result.witness_lattices.iter().map(|l| back.map_lattice(l)).collect();
    Ok(result)
}
