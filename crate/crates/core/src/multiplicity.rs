//! Multiplicity of lattice arrangements `K + Λ`.
//!
//! The multiplicity at `u` is `card{v ∈ Λ : u + v ∈ K}`, the number of
//! translates `K − v` holding `u`. It is `Λ`-periodic, so its extrema over the
//! plane equal its extrema over any closed set that contains a fundamental
//! domain; [`multiplicity_extrema`] uses the bounding box of a reduced
//! fundamental parallelogram and evaluates the count on every face of the
//! line arrangement cut out by the translates.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Rect, ScaledTriangle};
use crate::lattice::Lattice;
use crate::rational::{common_denominator, Rational};
use crate::stair::StairPolygon;
use crate::sweep::{self, Coord, ShapeI, Stop, TermI, Window};
use crate::Error;

/// Boundary convention used for membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Interior,
    Closed,
    HalfOpen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Stair(StairPolygon),
    Triangle(ScaledTriangle),
}

/// A bounded shape together with its membership convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    shape: Shape,
    mode: Mode,
}

impl Region {
    /// Half-open membership is only defined for stair polygons.
    pub fn new(shape: Shape, mode: Mode) -> Result<Self, Error> {
        if mode == Mode::HalfOpen && matches!(shape, Shape::Triangle(_)) {
            return Err(Error::HalfOpenTriangle);
        }
        Ok(Region { shape, mode })
    }

    pub fn stair(stair: StairPolygon, mode: Mode) -> Self {
        Region { shape: Shape::Stair(stair), mode }
    }

    pub fn half_open_stair(stair: StairPolygon) -> Self {
        Region::stair(stair, Mode::HalfOpen)
    }

    pub fn triangle(l: Rational, mode: Mode) -> Result<Self, Error> {
        Region::new(Shape::Triangle(ScaledTriangle::new(l)?), mode)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self, Error> {
        Region::new(self.shape.clone(), mode)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.shape, self.mode) {
            (Shape::Stair(s), Mode::HalfOpen) => s.contains(p),
            (Shape::Stair(s), Mode::Interior) => s.contains_interior(p),
            (Shape::Stair(s), Mode::Closed) => s.contains_closed(p),
            (Shape::Triangle(t), Mode::Interior) => t.contains_interior(p),
            (Shape::Triangle(t), _) => t.contains_closed(p),
        }
    }

    pub fn bbox(&self) -> Rect {
        match &self.shape {
            Shape::Stair(s) => s.bbox(),
            Shape::Triangle(t) => t.bbox(),
        }
    }

    pub fn area(&self) -> Rational {
        match &self.shape {
            Shape::Stair(s) => s.area(),
            Shape::Triangle(t) => t.area(),
        }
    }
}

/// Global minimum and maximum multiplicity with points attaining them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub min_mult: i64,
    pub max_mult: i64,
    pub min_witness: Point,
    pub max_witness: Point,
}

/// `card{v ∈ Λ : u + v ∈ K}` by direct enumeration.
pub fn count_at(lattice: &Lattice, region: &Region, u: &Point) -> usize {
    let window = region.bbox().translate(&-u);
    lattice
        .points_in_box(&window)
        .iter()
        .filter(|v| region.contains(&(u + *v)))
        .count()
}

/// `Σ weight · count_at(Λ, K, u)`.
pub fn weighted_count_at(lattice: &Lattice, terms: &[(&Region, i64)], u: &Point) -> i64 {
    terms
        .iter()
        .map(|(r, w)| w * count_at(lattice, r, u) as i64)
        .sum()
}

/// Exact global extrema of `u ↦ count_at(Λ, K, u)`.
pub fn multiplicity_extrema(lattice: &Lattice, region: &Region) -> MultiplicityReport {
    extrema_with_stop(lattice, &[(region, 1)], Stop::Never)
}

/// Exact global extrema of a signed sum of multiplicities, e.g. the
/// difference of two nested tiles.
pub fn weighted_extrema(lattice: &Lattice, terms: &[(&Region, i64)]) -> MultiplicityReport {
    extrema_with_stop(lattice, terms, Stop::Never)
}

fn extrema_with_stop(lattice: &Lattice, terms: &[(&Region, i64)], stop: Stop) -> MultiplicityReport {
    let window = lattice.fundamental_box();

    // translates K + w meeting the window; K + w holds u iff u − w ∈ K
    let offsets: Vec<Vec<Point>> = terms
        .iter()
        .map(|(r, _)| lattice.points_in_box(&window.minus(&r.bbox())))
        .collect();

    let mut values: Vec<&Rational> = vec![&window.x_min, &window.x_max, &window.y_min, &window.y_max];
    for ((r, _), offs) in terms.iter().zip(&offsets) {
        match &r.shape {
            Shape::Stair(s) => {
                values.extend(s.x_breaks());
                values.extend(s.heights());
            }
            Shape::Triangle(t) => values.push(t.scale()),
        }
        for o in offs {
            values.push(&o.x);
            values.push(&o.y);
        }
    }
    let factor = common_denominator(values.iter().copied()) * BigInt::from(4);
    let to_int = |r: &Rational| r.numer() * (&factor / r.denom());

    let limit = BigInt::from(1u64 << 60);
    let fits = values.iter().all(|v| to_int(v).abs() < limit);
    let to_point = |x: BigInt, y: BigInt| {
        let f = Rational::from_bigint(factor.clone());
        Point::new(Rational::from_bigint(x) / &f, Rational::from_bigint(y) / &f)
    };

    macro_rules! run {
        ($ty:ty) => {{
            let conv = |r: &Rational| <$ty as Coord>::from_big(&to_int(r));
            let terms_i: Vec<TermI<$ty>> = terms
                .iter()
                .zip(&offsets)
                .map(|((r, w), offs)| TermI {
                    shape: match &r.shape {
                        Shape::Stair(s) => ShapeI::Stair {
                            breaks: s.x_breaks().iter().map(conv).collect(),
                            heights: s.heights().iter().map(conv).collect(),
                        },
                        Shape::Triangle(t) => ShapeI::Triangle { l: conv(t.scale()) },
                    },
                    mode: r.mode,
                    weight: *w,
                    offsets: offs.iter().map(|o| (conv(&o.x), conv(&o.y))).collect(),
                })
                .collect();
            let win = Window {
                x_min: conv(&window.x_min),
                x_max: conv(&window.x_max),
                y_min: conv(&window.y_min),
                y_max: conv(&window.y_max),
            };
            let raw = sweep::extrema(&terms_i, &win, stop);
            MultiplicityReport {
                min_mult: raw.min,
                max_mult: raw.max,
                min_witness: to_point(raw.min_at.0.to_big(), raw.min_at.1.to_big()),
                max_witness: to_point(raw.max_at.0.to_big(), raw.max_at.1.to_big()),
            }
        }};
    }

    if fits {
        run!(i128)
    } else {
        run!(BigInt)
    }
}

/// The three j-fold properties of an arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    /// Every point lies in the interiors of at most `j` translates.
    Packing,
    /// Every point lies in at least `j` closed translates.
    Covering,
    /// Every point lies in exactly `j` half-open translates.
    ExactTiling,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::Packing => "packing",
            Predicate::Covering => "covering",
            Predicate::ExactTiling => "exact tiling",
        }
    }

    fn required_mode(self) -> Mode {
        match self {
            Predicate::Packing => Mode::Interior,
            Predicate::Covering => Mode::Closed,
            Predicate::ExactTiling => Mode::HalfOpen,
        }
    }

    /// Decides the predicate. Evaluation stops at the first violating
    /// point, so on failure the report covers only the faces visited so far
    /// and its witness is a violating point.
    pub fn check(self, region: &Region, lattice: &Lattice, j: u32) -> Result<Verdict, Error> {
        if region.mode != self.required_mode() {
            return Err(Error::ModeMismatch { expected: self.required_mode(), found: region.mode });
        }
        let j = j as i64;
        let stop = match self {
            Predicate::Packing => Stop::MaxAbove(j),
            Predicate::Covering => Stop::MinBelow(j),
            Predicate::ExactTiling => Stop::Outside(j),
        };
        let report = extrema_with_stop(lattice, &[(region, 1)], stop);
        let holds = match self {
            Predicate::Packing => report.max_mult <= j,
            Predicate::Covering => report.min_mult >= j,
            Predicate::ExactTiling => report.min_mult == j && report.max_mult == j,
        };
        Ok(Verdict { holds, report })
    }

    /// A point violating the predicate, with its multiplicity.
    pub fn violation(self, verdict: &Verdict, j: u32) -> Option<(Point, i64)> {
        if verdict.holds {
            return None;
        }
        let r = &verdict.report;
        match self {
            Predicate::Covering => Some((r.min_witness.clone(), r.min_mult)),
            Predicate::Packing => Some((r.max_witness.clone(), r.max_mult)),
            Predicate::ExactTiling => {
                if r.min_mult < j as i64 {
                    Some((r.min_witness.clone(), r.min_mult))
                } else {
                    Some((r.max_witness.clone(), r.max_mult))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub report: MultiplicityReport,
}

/// `K + Λ` is a j-fold packing. `K` must use interior membership.
pub fn is_jfold_packing(region: &Region, lattice: &Lattice, j: u32) -> Result<bool, Error> {
    Ok(Predicate::Packing.check(region, lattice, j)?.holds)
}

/// `K + Λ` is a j-fold covering. `K` must use closed membership.
pub fn is_jfold_covering(region: &Region, lattice: &Lattice, j: u32) -> Result<bool, Error> {
    Ok(Predicate::Covering.check(region, lattice, j)?.holds)
}

/// `S + Λ` is an exact j-fold tiling. `S` must be a half-open stair.
pub fn is_exact_jfold_tiling(region: &Region, lattice: &Lattice, j: u32) -> Result<bool, Error> {
    Ok(Predicate::ExactTiling.check(region, lattice, j)?.holds)
}

/// Linear congruential generator (Knuth's MMIX constants) used by the
/// sampling oracle: `s ← 6364136223846793005·s + 1442695040888963407 mod 2⁶⁴`.
/// Each sample coordinate is the top 20 bits of a step divided by 2²⁰.
#[derive(Clone, Debug)]
pub struct SampleLcg {
    state: u64,
}

impl SampleLcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;
    pub const BITS: u32 = 20;

    pub fn new(seed: u64) -> Self {
        SampleLcg { state: seed }
    }

    /// Next value in `[0, 1)` with denominator `2²⁰`.
    pub fn next_unit(&mut self) -> Rational {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        let k = self.state >> (64 - Self::BITS);
        Rational::new(k as i64, 1 << Self::BITS)
    }
}

/// Min and max of `count_at` over `n` pseudo-random points of the
/// fundamental parallelogram of the given basis. A lower bound on the true
/// maximum and an upper bound on the true minimum.
pub fn random_sampling_oracle(lattice: &Lattice, region: &Region, n: usize, seed: u64) -> Result<MultiplicityReport, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("oracle needs at least one sample".into()));
    }
    let mut rng = SampleLcg::new(seed);
    let mut report: Option<MultiplicityReport> = None;
    for _ in 0..n {
        let a = rng.next_unit();
        let b = rng.next_unit();
        let u = lattice.combination(&a, &b);
        let c = count_at(lattice, region, &u) as i64;
        match &mut report {
            None => {
                report = Some(MultiplicityReport { min_mult: c, max_mult: c, min_witness: u.clone(), max_witness: u })
            }
            Some(r) => {
                if c < r.min_mult {
                    r.min_mult = c;
                    r.min_witness = u.clone();
                }
                if c > r.max_mult {
                    r.max_mult = c;
                    r.max_witness = u;
                }
            }
        }
    }
    Ok(report.expect("n ≥ 1"))
}

/// Converts a multiplicity to `u32` for callers that only see non-negative counts.
pub fn as_count(m: i64) -> u32 {
    m.to_u32().unwrap_or(0)
}
