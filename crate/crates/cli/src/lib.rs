//! Command-line front end for the `multifold` library.
//!
//! [`run`] takes the argument vector and two output streams and returns the
//! process exit code: 0 on success, 1 when an `--expect` assertion fails,
//! 2 on usage or input errors.

pub mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multifold::arith::{phi_k, phi_k_brute};
use multifold::density::{density_of, verified_optimum, verified_optimum_for_triangle, DensityKind};
use multifold::lattice::enumerate_integer_sublattices;
use multifold::multiplicity::{multiplicity_extrema, Predicate};
use multifold::search::{optimize_stair_with_seed, search_covering, search_packing, StairFit};
use multifold::stair_theory::construct_sj;
use multifold::{lambda_lower, lambda_upper, Error, Lattice, Mode, Point, Rational, Region, ScaleCertificate, StairPolygon};
use serde::{Deserialize, Serialize};

use crate::render::{RenderSpec, Scene};

#[derive(Debug, Parser)]
#[command(name = "multifold", version, about = "Exact j-fold lattice packings, coverings and tilings of the plane")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal j-fold density of a triangle, or the density of a given lattice.
    Density(DensityArgs),
    /// Critical covering and packing scales of the standard triangle.
    Lambda(LambdaArgs),
    /// The stair polygon S_j of a lattice.
    Sj(SjArgs),
    /// Multiplicity extrema of a region, optionally asserting a predicate.
    Verify(VerifyArgs),
    /// List sublattices of a given index, or the optimal lattices for j.
    Enumerate(EnumerateArgs),
    /// Generalised Euler function φ^k(n).
    Phi(PhiArgs),
    /// Brute-force search for the best lattice in a bounded space.
    Search(SearchArgs),
    /// Numeric optimisation of stair areas inside or around the triangle.
    StairOpt(StairOptArgs),
    /// Draw an arrangement as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Packing,
    Covering,
}

impl From<KindArg> for DensityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Packing => DensityKind::Packing,
            KindArg::Covering => DensityKind::Covering,
        }
    }
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    j: u32,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Triangle vertices "ax,ay,bx,by,cx,cy".
    #[arg(long)]
    triangle: Option<String>,
    /// Evaluate this lattice "a,b,c,d" (basis (a,b), (c,d)) instead of the optimum.
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// Basis "a,b,c,d" for the vectors (a,b) and (c,d).
    #[arg(long, conflicts_with = "m")]
    basis: Option<String>,
    /// Use Λ(m, j), generated by (1, m) and (0, 2j+1).
    #[arg(long)]
    m: Option<i64>,
}

impl LatticeArgs {
    fn lattice(&self, j: u32) -> Result<Lattice, Error> {
        match (&self.basis, self.m) {
            (Some(b), _) => parse_basis(b),
            (None, Some(m)) => Lattice::lambda_mj(m, j),
            (None, None) => Err(Error::InvalidParameter("give a lattice with --basis or --m".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Bound {
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Args)]
struct LambdaArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long)]
    j: u32,
    #[arg(long, value_enum, default_value = "both")]
    bound: Bound,
}

#[derive(Debug, Args)]
struct SjArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long)]
    j: u32,
    /// Also write an SVG of S_j + Λ to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Tiling,
    Packing,
    Covering,
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// "Sj" for S(j), or a stair "x0,x1,...:h0,h1,...".
    #[arg(long, conflicts_with = "triangle")]
    stair: Option<String>,
    /// Scale l of the triangle lT.
    #[arg(long)]
    triangle: Option<String>,
}

impl RegionArgs {
    fn region(&self, j: u32, mode: Option<Mode>) -> Result<Region, Error> {
        match (&self.stair, &self.triangle) {
            (Some(s), _) => Region::new(multifold::Shape::Stair(parse_stair(s, j)?), mode.unwrap_or(Mode::HalfOpen)),
            (None, Some(l)) => Region::triangle(l.parse()?, mode.unwrap_or(Mode::Closed)),
            (None, None) => Err(Error::InvalidParameter("give a region with --stair or --triangle".into())),
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    region: RegionArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long)]
    j: u32,
    /// Exit with status 1 unless the arrangement has this property.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Index of the integer sublattices to list.
    #[arg(long, conflicts_with_all = ["j", "kind"], required_unless_present = "j")]
    n: Option<u64>,
    /// Dilate each sublattice by 1/q.
    #[arg(long, default_value_t = 1, requires = "n")]
    q: u64,
    /// List the optimal lattices for this j.
    #[arg(long, requires = "kind")]
    j: Option<u32>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: u64,
    /// Cross-check the product formula against the definition.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    j: u32,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Largest denominator q.
    #[arg(long)]
    qmax: u32,
    /// Bound on basis coordinates a/q and c/q.
    #[arg(long)]
    cmax: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitArg {
    In,
    Out,
}

#[derive(Debug, Args)]
struct StairOptArgs {
    #[arg(long)]
    j: u32,
    #[arg(long, value_enum)]
    mode: FitArg,
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    region: RegionArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = 1)]
    j: u32,
    /// Viewport "x_min,x_max,y_min,y_max".
    #[arg(long, default_value = "-3,6,-3,6", allow_hyphen_values = true)]
    viewport: String,
    /// Draw translates a·u1 + b·u2 with |a|, |b| < copies.
    #[arg(long, default_value_t = 12)]
    copies: u32,
    /// Write the SVG here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Both critical scales of a lattice, as printed by `lambda --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub j: u32,
    pub lattice: Lattice,
    pub lower: Option<ScaleCertificate>,
    pub upper: Option<ScaleCertificate>,
}

/// Output of `verify --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub j: u32,
    pub lattice: Lattice,
    pub region: Region,
    pub min_mult: i64,
    pub max_mult: i64,
    pub min_witness: Point,
    pub max_witness: Point,
    pub expected: Option<String>,
    pub holds: Option<bool>,
}

/// Output of `phi --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub k: u64,
    pub n: u64,
    pub value: u64,
    pub enumerated: Option<u64>,
}

enum Failure {
    Usage(String),
    Expectation(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PredicateFailed { .. } => Failure::Expectation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn parse_list(s: &str, len: usize, what: &str) -> Result<Vec<Rational>, Error> {
    let parts: Vec<Rational> = s.split(',').map(str::parse).collect::<Result<_, _>>()?;
    if parts.len() != len {
        return Err(Error::Parse(format!("{what} needs {len} comma-separated rationals, got {}", parts.len())));
    }
    Ok(parts)
}

fn parse_basis(s: &str) -> Result<Lattice, Error> {
    let v = parse_list(s, 4, "a basis")?;
    Lattice::new(Point::new(v[0].clone(), v[1].clone()), Point::new(v[2].clone(), v[3].clone()))
}

fn parse_triangle(s: &str) -> Result<[Point; 3], Error> {
    let v = parse_list(s, 6, "a triangle")?;
    Ok([
        Point::new(v[0].clone(), v[1].clone()),
        Point::new(v[2].clone(), v[3].clone()),
        Point::new(v[4].clone(), v[5].clone()),
    ])
}

fn parse_stair(s: &str, j: u32) -> Result<StairPolygon, Error> {
    if s == "Sj" || s == "S" {
        return StairPolygon::canonical(j);
    }
    let (xs, hs) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("stair {s:?} is not \"Sj\" or \"x0,x1,...:h0,h1,...\"")))?;
    let xs: Vec<Rational> = xs.split(',').map(str::parse).collect::<Result<_, _>>()?;
    let hs: Vec<Rational> = hs.split(',').map(str::parse).collect::<Result<_, _>>()?;
    StairPolygon::new(xs, hs)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Expectation(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Density(a) => density(a, json, out),
        Command::Lambda(a) => lambda(a, json, out),
        Command::Sj(a) => sj(a, json, out),
        Command::Verify(a) => verify(a, json, out),
        Command::Enumerate(a) => enumerate(a, json, out),
        Command::Phi(a) => phi(a, json, out),
        Command::Search(a) => search(a, json, out),
        Command::StairOpt(a) => stair_opt(a, json, out),
        Command::Render(a) => render_cmd(a, out),
    }
}

fn density(a: &DensityArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let kind = DensityKind::from(a.kind);
    if let Some(b) = &a.basis {
        let lattice = parse_basis(b)?;
        let value = match &a.triangle {
            Some(t) => {
                let v = parse_triangle(t)?;
                multifold::density::density_of_triangle([&v[0], &v[1], &v[2]], &lattice, a.j, kind)?
            }
            None => density_of(&lattice, a.j, kind)?,
        };
        if json {
            emit_json(out, &value)?;
        } else {
            writeln!(out, "{value}")?;
        }
        return Ok(());
    }
    let result = match &a.triangle {
        Some(t) => {
            let v = parse_triangle(t)?;
            verified_optimum_for_triangle([&v[0], &v[1], &v[2]], a.j, kind)?
        }
        None => verified_optimum(a.j, kind)?,
    };
    if json {
        emit_json(out, &result)?;
    } else {
        writeln!(out, "{}", result.value)?;
        for l in &result.witness_lattices {
            writeln!(out, "  {l}")?;
        }
    }
    Ok(())
}

fn lambda(a: &LambdaArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let lattice = a.lattice.lattice(a.j)?;
    let lower = matches!(a.bound, Bound::Lower | Bound::Both).then(|| lambda_lower(&lattice, a.j)).transpose()?;
    let upper = matches!(a.bound, Bound::Upper | Bound::Both).then(|| lambda_upper(&lattice, a.j)).transpose()?;
    let report = LambdaReport { j: a.j, lattice, lower, upper };
    if json {
        return emit_json(out, &report);
    }
    if let Some(c) = &report.lower {
        writeln!(out, "lambda_{} = {}  (fails at {}, holds at {})", a.j, c.value, c.below, c.above)?;
    }
    if let Some(c) = &report.upper {
        writeln!(out, "lambda^{} = {}  (holds at {}, fails at {})", a.j, c.value, c.below, c.above)?;
    }
    Ok(())
}

fn sj(a: &SjArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let lattice = a.lattice.lattice(a.j)?;
    let result = construct_sj(&lattice, a.j)?;
    if let Some(path) = &a.svg {
        let bbox = result.stair.bbox().inflate(&(&result.scale * Rational::integer(2)));
        let spec = RenderSpec {
            region: Region::half_open_stair(result.stair.clone()),
            lattice: lattice.clone(),
            j: a.j,
            viewport: bbox,
            copies: 12,
        };
        std::fs::write(path, Scene::build(&spec)?.to_svg())?;
    }
    if json {
        return emit_json(out, &result);
    }
    writeln!(out, "lambda_{} = {}", a.j, result.scale)?;
    writeln!(out, "x_breaks: {}", join(result.stair.x_breaks()))?;
    writeln!(out, "heights:  {}", join(result.stair.heights()))?;
    let corners: Vec<String> = result.corners.iter().map(ToString::to_string).collect();
    writeln!(out, "corners:  {}", corners.join(" "))?;
    writeln!(out, "area:     {}", result.stair.area())?;
    Ok(())
}

fn join(values: &[Rational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn verify(a: &VerifyArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let lattice = a.lattice.lattice(a.j)?;
    let predicate = a.expect.map(|e| match e {
        Expect::Tiling => Predicate::ExactTiling,
        Expect::Packing => Predicate::Packing,
        Expect::Covering => Predicate::Covering,
    });
    let mode = predicate.map(|p| match p {
        Predicate::ExactTiling => Mode::HalfOpen,
        Predicate::Packing => Mode::Interior,
        Predicate::Covering => Mode::Closed,
    });
    let region = a.region.region(a.j, mode)?;
    let report = multiplicity_extrema(&lattice, &region);
    let j = a.j as i64;
    let holds = predicate.map(|p| match p {
        Predicate::ExactTiling => report.min_mult == j && report.max_mult == j,
        Predicate::Packing => report.max_mult <= j,
        Predicate::Covering => report.min_mult >= j,
    });
    let summary = VerifyReport {
        j: a.j,
        lattice,
        region,
        min_mult: report.min_mult,
        max_mult: report.max_mult,
        min_witness: report.min_witness,
        max_witness: report.max_witness,
        expected: predicate.map(|p| p.name().to_string()),
        holds,
    };
    if json {
        emit_json(out, &summary)?;
    } else {
        writeln!(out, "min multiplicity {} at {}", summary.min_mult, summary.min_witness)?;
        writeln!(out, "max multiplicity {} at {}", summary.max_mult, summary.max_witness)?;
        if let (Some(p), Some(h)) = (predicate, holds) {
            writeln!(out, "{}-fold {}: {}", a.j, p.name(), if h { "yes" } else { "no" })?;
        }
    }
    match (predicate, holds) {
        (Some(p), Some(false)) => Err(Failure::Expectation(format!("expected a {}-fold {}, which does not hold", a.j, p.name()))),
        _ => Ok(()),
    }
}

fn enumerate(a: &EnumerateArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let lattices = match (a.n, a.j, a.kind) {
        (Some(n), _, _) => {
            if n == 0 || a.q == 0 {
                return Err(Failure::Usage("--n and --q must be at least 1".into()));
            }
            let inv = Rational::new(1, a.q as i64);
            enumerate_integer_sublattices(n).iter().map(|l| l.scale(&inv)).collect::<Result<Vec<_>, _>>()?
        }
        (None, Some(j), Some(kind)) => multifold::density::optimal_lattices(j, kind.into())?,
        _ => return Err(Failure::Usage("give --n, or --j with --kind".into())),
    };
    if json {
        return emit_json(out, &lattices);
    }
    for l in &lattices {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

fn phi(a: &PhiArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let value = phi_k(a.k, a.n)?;
    let enumerated = if a.verify { Some(phi_k_brute(a.k, a.n)?) } else { None };
    if json {
        emit_json(out, &PhiReport { k: a.k, n: a.n, value, enumerated })?;
    } else {
        writeln!(out, "{value}")?;
        if let Some(e) = enumerated {
            writeln!(out, "by enumeration: {e} ({})", if e == value { "match" } else { "MISMATCH" })?;
        }
    }
    match enumerated {
        Some(e) if e != value => Err(Failure::Expectation(format!("formula gives {value}, enumeration {e}"))),
        _ => Ok(()),
    }
}

fn search(a: &SearchArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let report = match a.kind {
        KindArg::Packing => search_packing(a.j, a.qmax, a.cmax)?,
        KindArg::Covering => search_covering(a.j, a.qmax, a.cmax)?,
    };
    if json {
        return emit_json(out, &report);
    }
    match &report.best_value {
        Some(v) => writeln!(out, "best {} density {v}", report.kind)?,
        None => writeln!(out, "no {} lattice in the space", report.kind)?,
    }
    for l in &report.best_lattices {
        writeln!(out, "  {l}")?;
    }
    writeln!(out, "{} lattices in the space, {} evaluated", report.space_size, report.evaluated)?;
    Ok(())
}

fn stair_opt(a: &StairOptArgs, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let fit = match a.mode {
        FitArg::In => StairFit::Inscribed,
        FitArg::Out => StairFit::Circumscribed,
    };
    let r = optimize_stair_with_seed(fit, a.j, a.iterations, a.seed)?;
    if json {
        return emit_json(out, &r);
    }
    writeln!(out, "area {:.12} (target {} = {:.12}, gap {:.3e})", r.value, r.target, r.target.to_f64(), r.gap)?;
    let layout: Vec<String> = r.corner_layout.iter().map(|x| format!("{x:.9}")).collect();
    writeln!(out, "breakpoints {}", layout.join(" "))?;
    match &r.snapped_area {
        Some(area) => writeln!(out, "snapped area {area}, canonical layout: {}", if r.matches_canonical { "yes" } else { "no" })?,
        None => writeln!(out, "layout does not snap to small-denominator rationals")?,
    }
    Ok(())
}

fn render_cmd(a: &RenderArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let v = parse_list(&a.viewport, 4, "a viewport")?;
    let viewport = multifold::Rect::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())?;
    let spec = RenderSpec {
        region: a.region.region(a.j, None)?,
        lattice: a.lattice.lattice(a.j)?,
        j: a.j,
        viewport,
        copies: a.copies,
    };
    let svg = Scene::build(&spec)?.to_svg();
    match &a.out {
        Some(path) => std::fs::write(path, svg)?,
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(())
}
