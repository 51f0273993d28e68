//! Brute-force evidence for the optimal densities.
//!
//! [`search_packing`] and [`search_covering`] scan every lattice with a basis
//! `((a/q, b/q), (0, c/q))`, `1 ≤ q ≤ Q`, `0 < a/q, c/q ≤ C`, `0 ≤ b < c`.
//! The stair optimisers work in `f64`; their results are snapped back to
//! small-denominator rationals and compared exactly with the canonical
//! layouts.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{density_of, DensityKind};
use crate::geometry::{Point, ScaledTriangle};
use crate::lattice::Lattice;
use crate::rational::Rational;
use crate::stair::StairPolygon;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub denominator_bound: u32,
    pub coefficient_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: DensityKind,
    pub j: u32,
    /// `None` when no lattice in the space satisfies the predicate.
    pub best_value: Option<Rational>,
    pub best_lattices: Vec<Lattice>,
    /// Distinct lattices in the space.
    pub space_size: usize,
    /// Lattices whose predicate was actually evaluated.
    pub evaluated: usize,
    pub parameters: SearchParams,
}

/// All distinct lattices of the bounded space, in canonical order.
pub fn search_space(denominator_bound: u32, coefficient_bound: u32) -> Vec<Lattice> {
    let mut out = BTreeSet::new();
    for q in 1..=denominator_bound as i64 {
        let top = coefficient_bound as i64 * q;
        for a in 1..=top {
            for c in 1..=top {
                for b in 0..c {
                    let u1 = Point::new(Rational::new(a, q), Rational::new(b, q));
                    let u2 = Point::new(Rational::zero(), Rational::new(c, q));
                    out.insert(Lattice::new(u1, u2).expect("a, c > 0"));
                }
            }
        }
    }
    out.into_iter().collect()
}

fn search(kind: DensityKind, j: u32, denominator_bound: u32, coefficient_bound: u32) -> Result<SearchReport, Error> {
    if j == 0 || denominator_bound == 0 || coefficient_bound == 0 {
        return Err(Error::InvalidParameter("j and both bounds must be at least 1".into()));
    }
    let area = ScaledTriangle::standard().area();
    let jr = Rational::integer(j as i64);
    let space = search_space(denominator_bound, coefficient_bound);
    let space_size = space.len();

    // a j-fold packing has density at most j, a j-fold covering at least j
    let mut graded: Vec<(Rational, Lattice)> = space
        .into_iter()
        .map(|l| (&area / l.covolume(), l))
        .filter(|(v, _)| match kind {
            DensityKind::Packing => *v <= jr,
            DensityKind::Covering => *v >= jr,
        })
        .collect();
    // best first; ties keep canonical order
    match kind {
        DensityKind::Packing => graded.sort_by(|a, b| b.0.cmp(&a.0)),
        DensityKind::Covering => graded.sort_by(|a, b| a.0.cmp(&b.0)),
    }

    let mut evaluated = 0;
    let mut start = 0;
    while start < graded.len() {
        let value = graded[start].0.clone();
        let end = start + graded[start..].iter().take_while(|(v, _)| *v == value).count();
        let group = &graded[start..end];
        evaluated += group.len();
        let passing: Vec<Option<Lattice>> = group
            .par_iter()
            .map(|(_, l)| match density_of(l, j, kind) {
                Ok(_) => Ok(Some(l.clone())),
                Err(Error::PredicateFailed { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<_, Error>>()?;
        let best: Vec<Lattice> = passing.into_iter().flatten().collect();
        if !best.is_empty() {
            return Ok(SearchReport {
                kind,
                j,
                best_value: Some(value),
                best_lattices: best,
                space_size,
                evaluated,
                parameters: SearchParams { denominator_bound, coefficient_bound },
            });
        }
        start = end;
    }
    Ok(SearchReport {
        kind,
        j,
        best_value: None,
        best_lattices: Vec::new(),
        space_size,
        evaluated,
        parameters: SearchParams { denominator_bound, coefficient_bound },
    })
}

/// Largest `|T| / d(Λ)` over j-fold packing lattices of the bounded space.
pub fn search_packing(j: u32, denominator_bound: u32, coefficient_bound: u32) -> Result<SearchReport, Error> {
    search(DensityKind::Packing, j, denominator_bound, coefficient_bound)
}

/// Smallest `|T| / d(Λ)` over j-fold covering lattices of the bounded space.
pub fn search_covering(j: u32, denominator_bound: u32, coefficient_bound: u32) -> Result<SearchReport, Error> {
    search(DensityKind::Covering, j, denominator_bound, coefficient_bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StairFit {
    /// Largest stair inside the closed triangle.
    Inscribed,
    /// Smallest stair containing the open triangle.
    Circumscribed,
}

/// Result of a numeric stair-area optimisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaOptimum {
    pub fit: StairFit,
    pub j: u32,
    pub value: f64,
    pub target: Rational,
    /// `|value − target|`.
    pub gap: f64,
    /// Breakpoints `x_0 = 0 < x_1 < … < x_n`.
    pub corner_layout: Vec<f64>,
    /// Largest amount by which any iterate beat the analytic bound.
    pub max_violation: f64,
    pub iterations: usize,
    /// The best layout snapped to small-denominator rationals, if it stays feasible.
    pub snapped: Option<StairPolygon>,
    pub snapped_area: Option<Rational>,
    /// The layout the closed form predicts: `S(j)/(2j+1)` or `S(j)/(2j)`.
    pub canonical: StairPolygon,
    pub matches_canonical: bool,
}

const DEFAULT_SEED: u64 = 0x5eed;
const SNAP_TOLERANCE: f64 = 1e-6;
const SNAP_MAX_DENOMINATOR: i64 = 256;

/// Area of a stair with breakpoints `xs` (with `xs[0] = 0`) fitted to `T`.
fn stair_area(fit: StairFit, xs: &[f64]) -> f64 {
    xs.windows(2)
        .map(|w| {
            let h = match fit {
                StairFit::Inscribed => 1.0 - w[1],
                StairFit::Circumscribed => 1.0 - w[0],
            };
            (w[1] - w[0]) * h
        })
        .sum()
}

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..80 {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}

struct Run {
    xs: Vec<f64>,
    value: f64,
    max_violation: f64,
}

/// Coordinate ascent from one random start. Inscribed layouts move every
/// breakpoint in `(0, 1]`; circumscribed ones keep the last at 1.
fn ascend(fit: StairFit, n: usize, sweeps: usize, target: f64, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inner: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    inner.sort_by(f64::total_cmp);
    let mut xs = vec![0.0];
    xs.extend(inner);
    if fit == StairFit::Circumscribed {
        xs[n] = 1.0;
    }
    // maximise the inscribed area, minimise the circumscribed one
    let sign = if fit == StairFit::Inscribed { 1.0 } else { -1.0 };
    let violation = |v: f64| (sign * (v - target)).max(0.0);
    let mut max_violation = violation(stair_area(fit, &xs));
    let last = if fit == StairFit::Inscribed { n } else { n - 1 };
    for _ in 0..sweeps {
        for k in 1..=last {
            let lo = xs[k - 1];
            let hi = if k < n { xs[k + 1] } else { 1.0 };
            let mut trial = xs.clone();
            let best = golden_section(
                |x| {
                    trial[k] = x;
                    sign * stair_area(fit, &trial)
                },
                lo,
                hi,
            );
            let before = stair_area(fit, &xs);
            let old = xs[k];
            xs[k] = best;
            let after = stair_area(fit, &xs);
            if sign * after < sign * before {
                xs[k] = old;
            }
            max_violation = max_violation.max(violation(stair_area(fit, &xs)));
        }
    }
    Run { value: stair_area(fit, &xs), xs, max_violation }
}

fn snap(x: f64) -> Option<Rational> {
    (1..=SNAP_MAX_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < SNAP_TOLERANCE).then(|| Rational::new(p as i64, q))
    })
}

fn snapped_stair(fit: StairFit, xs: &[f64]) -> Option<StairPolygon> {
    let breaks: Vec<Rational> = xs.iter().map(|&x| snap(x)).collect::<Option<_>>()?;
    let one = Rational::one();
    let heights: Vec<Rational> = breaks
        .windows(2)
        .map(|w| match fit {
            StairFit::Inscribed => &one - &w[1],
            StairFit::Circumscribed => &one - &w[0],
        })
        .collect();
    StairPolygon::new(breaks, heights).ok()
}

fn optimize(fit: StairFit, j: u32, iterations: usize, seed: u64) -> Result<AreaOptimum, Error> {
    if j == 0 || iterations == 0 {
        return Err(Error::InvalidParameter("j and the iteration count must be at least 1".into()));
    }
    let n = 2 * j as usize;
    let jj = j as i64;
    let (target, canonical) = match fit {
        StairFit::Inscribed => (Rational::new(jj, 2 * jj + 1), StairPolygon::canonical(j)?.scale(&Rational::new(1, 2 * jj + 1))?),
        StairFit::Circumscribed => (Rational::new(2 * jj + 1, 4 * jj), StairPolygon::canonical(j)?.scale(&Rational::new(1, 2 * jj))?),
    };
    let target_f = target.to_f64();
    let restarts = (iterations / 500).clamp(1, 8);
    let sweeps = (iterations / restarts).max(1);
    let runs: Vec<Run> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| ascend(fit, n, sweeps, target_f, seed.wrapping_add(r)))
        .collect();
    let max_violation = runs.iter().map(|r| r.max_violation).fold(0.0, f64::max);
    let best = runs
        .into_iter()
        .reduce(|a, b| {
            let better = match fit {
                StairFit::Inscribed => b.value > a.value,
                StairFit::Circumscribed => b.value < a.value,
            };
            if better {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");

    let snapped = snapped_stair(fit, &best.xs);
    let snapped_area = snapped.as_ref().map(StairPolygon::area);
    let matches_canonical = snapped.as_ref() == Some(&canonical);
    Ok(AreaOptimum {
        fit,
        j,
        value: best.value,
        gap: (best.value - target_f).abs(),
        target,
        corner_layout: best.xs,
        max_violation,
        iterations: restarts * sweeps,
        snapped,
        snapped_area,
        canonical,
        matches_canonical,
    })
}

/// Maximal area of a stair with at most `2j` columns inside the closed triangle.
pub fn optimize_inscribed_stair(j: u32, iterations: usize) -> Result<AreaOptimum, Error> {
    optimize(StairFit::Inscribed, j, iterations, DEFAULT_SEED)
}

/// Minimal area of a stair with at most `2j` columns containing the open triangle.
pub fn optimize_circumscribed_stair(j: u32, iterations: usize) -> Result<AreaOptimum, Error> {
    optimize(StairFit::Circumscribed, j, iterations, DEFAULT_SEED)
}

pub fn optimize_stair_with_seed(fit: StairFit, j: u32, iterations: usize, seed: u64) -> Result<AreaOptimum, Error> {
    optimize(fit, j, iterations, seed)
}
