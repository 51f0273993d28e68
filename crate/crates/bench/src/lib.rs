//! Shared fixtures for the benchmarks.

use multifold::{rat, Lattice, Mode, Point, Region, StairPolygon};

/// Lattices ranging from the integer grid to a skewed one with mixed denominators.
pub fn lattices() -> Vec<(&'static str, Lattice)> {
    vec![
        ("integer", Lattice::integer()),
        ("lambda_2_2", Lattice::lambda_mj(2, 2).expect("valid parameters")),
        (
            "skewed",
            Lattice::new(Point::new(rat(3, 4), rat(-1, 5)), Point::new(rat(1, 3), rat(2, 3))).expect("nonsingular"),
        ),
    ]
}

pub fn closed_triangle(l: i64) -> Region {
    Region::triangle(rat(l, 1), Mode::Closed).expect("positive scale")
}

pub fn canonical_stair(j: u32) -> Region {
    Region::half_open_stair(StairPolygon::canonical(j).expect("j >= 1"))
}
