//! SVG rendering of lattice arrangements.
//!
//! Coordinates stay exact until serialisation, where they are written as
//! decimals with at most 12 fractional digits. Output is a pure function of
//! the [`RenderSpec`], so identical input gives byte-identical SVG.

use std::fmt::Write as _;

use multifold::{count_at, Error, Lattice, Point, Rational, Rect, Region, Shape};

const DIGITS: usize = 12;
const WIDTH_PX: i64 = 600;
const PALETTE: [&str; 8] = ["#ffffff", "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1"];

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub region: Region,
    pub lattice: Lattice,
    pub j: u32,
    pub viewport: Rect,
    /// Translates `a·u1 + b·u2` with `|a|, |b| < copies` are drawn; 0 draws none.
    pub copies: u32,
}

/// One translate of the region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub offset: Point,
    pub outline: Vec<Point>,
    /// Multiplicity at the tile's anchor point.
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub viewport: Rect,
    pub region: Region,
    pub j: u32,
    pub tiles: Vec<Tile>,
}

fn outline(region: &Region) -> Vec<Point> {
    match region.shape() {
        Shape::Stair(s) => s.outline(),
        Shape::Triangle(t) => t.vertices().to_vec(),
    }
}

/// A point inside the region, used to sample the local multiplicity.
fn anchor(region: &Region) -> Point {
    match region.shape() {
        Shape::Stair(s) => {
            let x = s.x_breaks()[0].midpoint(&s.x_breaks()[1]);
            Point::new(x, &s.heights()[0] / Rational::integer(2))
        }
        Shape::Triangle(t) => {
            let q = t.scale() / Rational::integer(4);
            Point::new(q.clone(), q)
        }
    }
}

fn meets(a: &Rect, b: &Rect) -> bool {
    a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max && b.y_min <= a.y_max
}

impl Scene {
    pub fn build(spec: &RenderSpec) -> Result<Scene, Error> {
        let v = &spec.viewport;
        if v.width().is_zero() || v.height().is_zero() {
            return Err(Error::InvalidParameter("viewport is empty".into()));
        }
        let base = outline(&spec.region);
        let bbox = spec.region.bbox();
        let local = anchor(&spec.region);
        let c = spec.copies as i64 - 1;
        let mut tiles = Vec::new();
        for a in -c..=c {
            for b in -c..=c {
                let w = spec.lattice.point(a, b);
                if !meets(&bbox.translate(&w), v) {
                    continue;
                }
                tiles.push(Tile {
                    outline: base.iter().map(|p| p + &w).collect(),
                    multiplicity: count_at(&spec.lattice, &spec.region, &(&local + &w)),
                    offset: w,
                });
            }
        }
        tiles.sort_by(|x, y| x.offset.cmp(&y.offset));
        Ok(Scene { viewport: spec.viewport.clone(), region: spec.region.clone(), j: spec.j, tiles })
    }

    /// Number of drawn tiles containing `p` under the region's membership rule.
    pub fn coverage(&self, p: &Point) -> usize {
        self.tiles.iter().filter(|t| self.region.contains(&(p - &t.offset))).count()
    }

    pub fn to_svg(&self) -> String {
        let v = &self.viewport;
        let d = |r: &Rational| r.to_decimal_string(DIGITS);
        let (w, h) = (v.width(), v.height());
        let height_px = Rational::integer(WIDTH_PX) * &h / &w;
        let stroke = &w / Rational::integer(WIDTH_PX);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH_PX}" height="{}" viewBox="{} {} {} {}">"#,
            d(&height_px),
            d(&v.x_min),
            d(&-&v.y_max),
            d(&w),
            d(&h)
        );
        let _ = writeln!(s, r##"<g transform="scale(1,-1)" stroke="#222222" stroke-width="{}">"##, d(&stroke));
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#fafafa"/>"##,
            d(&v.x_min),
            d(&v.y_min),
            d(&w),
            d(&h)
        );
        for tile in &self.tiles {
            let pts: Vec<String> = tile.outline.iter().map(|p| format!("{},{}", d(&p.x), d(&p.y))).collect();
            let fill = PALETTE[tile.multiplicity.min(PALETTE.len() - 1)];
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{fill}" fill-opacity="0.4" data-multiplicity="{}"/>"#,
                pts.join(" "),
                tile.multiplicity
            );
        }
        let zero = Rational::zero();
        let axis = &stroke * Rational::integer(2);
        if v.y_min <= zero && zero <= v.y_max {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="0" x2="{}" y2="0" stroke-width="{}"/>"#,
                d(&v.x_min),
                d(&v.x_max),
                d(&axis)
            );
        }
        if v.x_min <= zero && zero <= v.x_max {
            let _ = writeln!(
                s,
                r#"<line x1="0" y1="{}" x2="0" y2="{}" stroke-width="{}"/>"#,
                d(&v.y_min),
                d(&v.y_max),
                d(&axis)
            );
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}
