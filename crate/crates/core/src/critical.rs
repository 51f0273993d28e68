//! Critical scales of the standard triangle for a fixed lattice.
//!
//! `λ_j(T, Λ)` is the least `l` for which `lT + Λ` is a j-fold covering and
//! `λ^j(T, Λ)` the largest `l` for which it is a j-fold packing. Both
//! predicates are monotone in `l` and can only flip where the arrangement
//! of boundary lines degenerates: a triangle vertex meets a line, or a
//! vertical, a horizontal and a diagonal line become concurrent. Those scales
//! have the forms `a_x`, `a_y` and `a_x + b_y` for lattice vectors `a`, `b`,
//! and the search runs over that finite set.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::lattice::Lattice;
use crate::multiplicity::{Mode, Predicate, Region};
use crate::rational::Rational;
use crate::Error;

/// An extremal scale with the predicate evaluated at it and on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleCertificate {
    pub value: Rational,
    pub predicate_at_value: bool,
    pub below: Rational,
    pub predicate_below: bool,
    pub above: Rational,
    pub predicate_above: bool,
}

impl ScaleCertificate {
    /// Re-evaluates the covering (`lower`) or packing predicate at the three
    /// recorded scales and compares with the stored booleans.
    pub fn recheck(&self, lattice: &Lattice, j: u32, lower: bool) -> Result<bool, Error> {
        let eval = |l: &Rational| if lower { covers(lattice, j, l) } else { packs(lattice, j, l) };
        Ok(eval(&self.value)? == self.predicate_at_value
            && eval(&self.below)? == self.predicate_below
            && eval(&self.above)? == self.predicate_above)
    }
}

fn covers(lattice: &Lattice, j: u32, l: &Rational) -> Result<bool, Error> {
    let region = Region::triangle(l.clone(), Mode::Closed)?;
    Ok(Predicate::Covering.check(&region, lattice, j)?.holds)
}

fn packs(lattice: &Lattice, j: u32, l: &Rational) -> Result<bool, Error> {
    let region = Region::triangle(l.clone(), Mode::Interior)?;
    Ok(Predicate::Packing.check(&region, lattice, j)?.holds)
}

/// Every scale in `(0, l_max]` at which the multiplicity extrema of
/// `lT + Λ` can change, ascending and without repeats.
pub fn candidate_scales(lattice: &Lattice, l_max: &Rational) -> Result<Vec<Rational>, Error> {
    if !l_max.is_positive() {
        return Err(Error::NonPositiveScale(l_max.clone()));
    }
    let window = lattice.fundamental_box().inflate(l_max);
    let diffs = lattice.points_in_box(&window.minus(&window));
    let xs: BTreeSet<&Rational> = diffs.iter().map(|p| &p.x).collect();
    let ys: BTreeSet<&Rational> = diffs.iter().map(|p| &p.y).collect();
    let zero = Rational::zero();
    let keep = |v: &Rational| *v > zero && v <= l_max;

    let mut out: BTreeSet<Rational> = BTreeSet::new();
    out.extend(xs.iter().chain(ys.iter()).filter(|v| keep(v)).map(|v| (*v).clone()));
    for x in &xs {
        for y in &ys {
            let s = *x + *y;
            if keep(&s) {
                out.insert(s);
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn check_j(j: u32) -> Result<(), Error> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    Ok(())
}

fn below_probe(cands: &[Rational], i: usize) -> Rational {
    if i == 0 {
        &cands[0] / Rational::integer(2)
    } else {
        cands[i - 1].midpoint(&cands[i])
    }
}

fn above_probe(cands: &[Rational], i: usize) -> Rational {
    match cands.get(i + 1) {
        Some(next) => cands[i].midpoint(next),
        None => &cands[i] * Rational::integer(2),
    }
}

/// `λ_j(T, Λ)`: the least `l` such that the closed triangles `lT + Λ` form a
/// j-fold covering.
pub fn lambda_lower(lattice: &Lattice, j: u32) -> Result<ScaleCertificate, Error> {
    check_j(j)?;
    let mut l_max = Rational::one();
    while !covers(lattice, j, &l_max)? {
        l_max = &l_max * Rational::integer(2);
    }
    let cands = candidate_scales(lattice, &l_max)?;
    // first index whose scale covers; the last candidate is l_max itself
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if covers(lattice, j, &cands[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let below = below_probe(&cands, lo);
    let above = above_probe(&cands, lo);
    let cert = ScaleCertificate {
        value: cands[lo].clone(),
        predicate_at_value: true,
        predicate_below: covers(lattice, j, &below)?,
        below,
        predicate_above: covers(lattice, j, &above)?,
        above,
    };
    if cert.predicate_below || !cert.predicate_above {
        return Err(Error::Certification(format!(
            "covering scale {} does not flip at its neighbours",
            cert.value
        )));
    }
    Ok(cert)
}

/// `λ^j(T, Λ)`: the largest `l` such that the open triangles `lT + Λ` form a
/// j-fold packing.
pub fn lambda_upper(lattice: &Lattice, j: u32) -> Result<ScaleCertificate, Error> {
    check_j(j)?;
    let mut l_max = Rational::one();
    while packs(lattice, j, &l_max)? {
        l_max = &l_max * Rational::integer(2);
    }
    let cands = candidate_scales(lattice, &l_max)?;
    if !packs(lattice, j, &cands[0])? {
        return Err(Error::Certification(format!("packing already fails at the smallest candidate {}", cands[0])));
    }
    // last index whose scale packs
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if packs(lattice, j, &cands[mid])? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let below = below_probe(&cands, lo);
    let above = above_probe(&cands, lo);
    let cert = ScaleCertificate {
        value: cands[lo].clone(),
        predicate_at_value: true,
        predicate_below: packs(lattice, j, &below)?,
        below,
        predicate_above: packs(lattice, j, &above)?,
        above,
    };
    if !cert.predicate_below || cert.predicate_above {
        return Err(Error::Certification(format!(
            "packing scale {} does not flip at its neighbours",
            cert.value
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::rational::rat;

    fn lat(a: (i64, i64, i64), b: (i64, i64, i64)) -> Lattice {
        Lattice::new(Point::new(rat(a.0, a.2), rat(a.1, a.2)), Point::new(rat(b.0, b.2), rat(b.1, b.2))).unwrap()
    }

    #[test]
    fn candidates_examples() {
        let c = candidate_scales(&Lattice::integer(), &Rational::integer(3)).unwrap();
        assert!(c.contains(&Rational::one()) && c.contains(&Rational::integer(2)));
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(c.iter().all(|v| v.is_positive() && *v <= Rational::integer(3)));
        let third = Lattice::lambda_mj(1, 1).unwrap().scale(&rat(1, 3)).unwrap();
        assert!(candidate_scales(&third, &Rational::integer(2)).unwrap().contains(&Rational::one()));
        assert!(candidate_scales(&third, &Rational::zero()).is_err());
    }

    #[test]
    fn integer_lattice_scales() {
        let lo = lambda_lower(&Lattice::integer(), 1).unwrap();
        assert_eq!(lo.value, Rational::integer(2));
        assert!(lo.recheck(&Lattice::integer(), 1, true).unwrap());
        let up = lambda_upper(&Lattice::integer(), 1).unwrap();
        assert_eq!(up.value, Rational::one());
        assert!(up.recheck(&Lattice::integer(), 1, false).unwrap());
    }

    #[test]
    fn family_lattices_are_critical_at_one() {
        assert_eq!(lambda_lower(&lat((1, 1, 3), (0, 3, 3)), 1).unwrap().value, Rational::one());
        assert_eq!(lambda_lower(&lat((1, 1, 5), (0, 5, 5)), 2).unwrap().value, Rational::one());
        assert_eq!(lambda_upper(&lat((1, 1, 2), (0, 3, 2)), 1).unwrap().value, Rational::one());
        assert_eq!(lambda_upper(&lat((1, 1, 4), (0, 5, 4)), 2).unwrap().value, Rational::one());
    }

    #[test]
    fn scaling_covariance() {
        let l = lat((1, 1, 3), (0, 3, 3));
        let c = rat(3, 7);
        let scaled = l.scale(&c).unwrap();
        assert_eq!(lambda_lower(&scaled, 1).unwrap().value, &lambda_lower(&l, 1).unwrap().value * &c);
        assert_eq!(lambda_upper(&scaled, 1).unwrap().value, &lambda_upper(&l, 1).unwrap().value * &c);
    }

    #[test]
    fn rejects_zero_fold() {
        assert!(lambda_lower(&Lattice::integer(), 0).is_err());
        assert!(lambda_upper(&Lattice::integer(), 0).is_err());
    }
}
