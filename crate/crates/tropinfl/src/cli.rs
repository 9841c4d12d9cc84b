//! Argument parsing and the subcommands. `run` never exits the process, so
//! tests can drive it in-process and compare outputs byte for byte.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use tropinfl_core::bounds::{
    degree_bound, expected_dimension, nagata_rhs, quarter_bound, theorem1_bound, theorem1_bound_for_width, uniform_bound,
    BoundReport,
};
use tropinfl_core::codes::{build_code, feasibility, min_distance_bruteforce, polygon_feasibility, CodeError, LinearCode, DEFAULT_CODEWORD_CAP};
use tropinfl_core::field::{Domain, Field, PrimeField, Rationals};
use tropinfl_core::influence::{directional_influence_area, influence_area, influence_set, tangent_cone};
use tropinfl_core::lattice::{pick_counts, Direction, LatticePoint, LatticePolygon};
use tropinfl_core::linalg::{rank, Matrix};
use tropinfl_core::pipeline::{lift_points, run_floor};
use tropinfl_core::poly::Polynomial;
use tropinfl_core::position::{floor_points, PointConfiguration};
use tropinfl_core::puiseux::LaurentRing;
use tropinfl_core::solver::{detropicalize, dimension_report, multiplicity_of, multiplicity_system, solve, Condition, Detropicalization};
use tropinfl_core::tropical::{curve_complex, tropicalize, Location, RatPoint, TropicalCurve, TropicalPolynomial};
use tropinfl_core::Rational;

use crate::dto::{
    parse_tropical, point_dto, tropical_coeffs, ConfigDto, CurveDto, GeneratorDto, MapDto, PolygonDto, PolynomialDto, SCHEMA,
};
use crate::svg::{render, Overlay};
use crate::text::{
    format_field_polynomial, format_rational, parse_big_rational, parse_polynomial_raw, parse_rational, polynomial_over_q, rational_to_f64,
    CoefficientText,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

/// Exact tropical tools for curves with prescribed singular points.
#[derive(Debug, Parser)]
#[command(name = "tropinfl", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 32003, global = true)]
    pub prime: u64,
    /// Accuracy of irrational bound values, e.g. `1e-9` or `1/1000`.
    #[arg(long, default_value = "1e-9", global = true)]
    pub precision: String,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// One way of naming a lattice polygon.
#[derive(Debug, Clone, Default, Args)]
pub struct PolygonArgs {
    /// JSON file `{"vertices": [[x, y], ...]}`.
    #[arg(long)]
    pub polygon: Option<PathBuf>,
    /// Inline points `x,y;x,y;...`; the hull is taken.
    #[arg(long)]
    pub vertices: Option<String>,
    /// Rectangle `[0,d] x [0,N]` given as `d,N`.
    #[arg(long)]
    pub rect: Option<String>,
    /// Triangle with vertices `(0,0), (d,0), (0,d)`.
    #[arg(long)]
    pub triangle: Option<i64>,
}

/// A polynomial as an expression or a file.
#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    /// Expression such as `t^-1*x^2 + 3*x*y - 1`.
    #[arg(long)]
    pub poly: Option<String>,
    /// JSON file with `terms`, `coeffs` or `text`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Points with multiplicities.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// JSON file `{"points": [{"label", "x", "y", "m"}, ...]}`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Inline `x,y,m;x,y,m;...`.
    #[arg(long)]
    pub points: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal lattice width and a direction attaining it.
    Width(PolygonArgs),
    /// Area and lattice point counts.
    Area(PolygonArgs),
    /// Tropical curve and dual subdivision of a polynomial.
    Trop(PolyArgs),
    /// Influence set and area of a point on a tropical curve.
    Infl {
        #[command(flatten)]
        poly: PolyArgs,
        /// `x,y` with rational coordinates.
        #[arg(long)]
        point: String,
        /// Normal `u1,u2` for the single-line variant.
        #[arg(long)]
        direction: Option<String>,
        #[command(flatten)]
        polygon: PolygonArgs,
    },
    /// Points on the almost horizontal line, the lifted system, its
    /// specialization and the certificates.
    Floor {
        #[command(flatten)]
        polygon: PolygonArgs,
        /// Multiplicities `m1,m2,...`.
        #[arg(long)]
        mult: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// All bounds for a multiplicity vector.
    Bounds {
        /// Multiplicities `m1,m2,...`.
        #[arg(long)]
        mult: String,
        #[command(flatten)]
        polygon: PolygonArgs,
        /// Minimal width, when no polygon is given.
        #[arg(long)]
        width: Option<u64>,
        /// Degree for the expected dimension.
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Curves with support in a polygon through points with multiplicities.
    Solve {
        #[command(flatten)]
        polygon: PolygonArgs,
        /// Use the triangle of this degree and report expected dimensions.
        #[arg(long)]
        degree: Option<u64>,
        #[command(flatten)]
        points: PointArgs,
        /// Solve over Q instead of F_p.
        #[arg(long)]
        rational: bool,
    },
    /// Lift lattice points to `(t^-x, t^-y)` and search for `t = a` that
    /// keeps the rank.
    Detrop {
        #[command(flatten)]
        polygon: PolygonArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Jet-evaluation code on `[0,d] x [0,N]`, or re-import of a generator.
    Code {
        #[arg(long)]
        d: Option<i64>,
        #[arg(long = "N")]
        big_n: Option<i64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
        /// Prime for this code; defaults to `--prime`.
        #[arg(long)]
        p: Option<u64>,
        /// Enumerate codewords for the minimum distance.
        #[arg(long)]
        min_distance: bool,
        /// Write the generator matrix (`.json` for JSON, otherwise text).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Read a generator matrix and report its parameters.
        #[arg(long)]
        import: Option<PathBuf>,
    },
}

/// Result of `run`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a failed hypothesis or certificate.
pub const EXIT_HYPOTHESIS: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    /// A mathematical precondition or certificate failed.
    Hypothesis { reason: &'static str, message: String, detail: Value },
    Error(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.into())
    }
}

fn hypothesis(reason: &'static str, message: impl Into<String>, detail: Value) -> Failure {
    Failure::Hypothesis { reason, message: message.into(), detail }
}

pub struct Report {
    pub command: &'static str,
    pub json: Map<String, Value>,
    pub text: String,
    pub svg: Option<String>,
}

impl Report {
    fn new(command: &'static str, json: Value, text: String) -> Self {
        let Value::Object(json) = json else { panic!("report body must be an object") };
        Report { command, json, text, svg: None }
    }
}

pub struct RunContext {
    pub seed: u64,
    pub prime: u64,
    pub precision: Rational,
    pub precision_text: String,
}

impl RunContext {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn field(&self) -> anyhow::Result<PrimeField> {
        self.field_for(self.prime)
    }

    fn field_for(&self, p: u64) -> anyhow::Result<PrimeField> {
        PrimeField::new(p).map_err(|e| anyhow!("--prime {p}: {e}"))
    }

    fn run_json(&self) -> Value {
        json!({ "seed": self.seed, "prime": self.prime, "precision": self.precision_text })
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Width(_) => "width",
        Command::Area(_) => "area",
        Command::Trop(_) => "trop",
        Command::Infl { .. } => "infl",
        Command::Floor { .. } => "floor",
        Command::Bounds { .. } => "bounds",
        Command::Solve { .. } => "solve",
        Command::Detrop { .. } => "detrop",
        Command::Code { .. } => "code",
    }
}

fn envelope(command: &str, ctx: Option<&RunContext>, status: &str, body: Map<String, Value>) -> String {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    out.insert("status".into(), json!(status));
    if let Some(ctx) = ctx {
        out.insert("run".into(), ctx.run_json());
    }
    out.extend(body);
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("serializable");
    s.push('\n');
    s
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let name = command_name(&cli.command);
    let ctx = match parse_rational(&cli.precision) {
        Ok(p) if p > Rational::from_integer(0) => {
            RunContext { seed: cli.seed, prime: cli.prime, precision: p, precision_text: cli.precision.clone() }
        }
        _ => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: --precision {:?} must be a positive number\n", cli.precision) },
    };
    let result = execute(&cli.command, &ctx).and_then(|report| {
        let body = match cli.format {
            Format::Json => envelope(report.command, Some(&ctx), "ok", report.json),
            Format::Text => report.text,
            Format::Svg => report.svg.ok_or_else(|| Failure::Error(anyhow!("{} has no SVG output", report.command)))?,
        };
        Ok(body)
    });
    match result {
        Ok(body) => match &cli.out {
            Some(path) => match fs::write(path, &body) {
                Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: writing {}: {e}\n", path.display()) },
            },
            None => Outcome { code: 0, stdout: body, stderr: String::new() },
        },
        Err(Failure::Hypothesis { reason, message, detail }) => {
            let mut body = Map::new();
            body.insert("reason".into(), json!(reason));
            body.insert("message".into(), json!(message));
            body.insert("detail".into(), detail);
            Outcome { code: EXIT_HYPOTHESIS, stdout: envelope(name, Some(&ctx), "hypothesis_failed", body), stderr: format!("{name}: {message}\n") }
        }
        Err(Failure::Error(e)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

fn execute(command: &Command, ctx: &RunContext) -> Result<Report, Failure> {
    match command {
        Command::Width(p) => cmd_width(&polygon_from(p)?),
        Command::Area(p) => cmd_area(&polygon_from(p)?),
        Command::Trop(p) => cmd_trop(&load_tropical(p)?),
        Command::Infl { poly, point, direction, polygon } => cmd_infl(ctx, poly, point, direction.as_deref(), polygon),
        Command::Floor { polygon, mult, n, m } => cmd_floor(ctx, &polygon_from(polygon)?, &multiplicities(mult.as_deref(), *n, *m)?),
        Command::Bounds { mult, polygon, width, degree } => cmd_bounds(ctx, &parse_mult(mult)?, polygon, *width, *degree),
        Command::Solve { polygon, degree, points, rational } => cmd_solve(ctx, polygon, *degree, points, *rational),
        Command::Detrop { polygon, points } => cmd_detrop(ctx, &polygon_from(polygon)?, &load_config(points)?),
        Command::Code { d, big_n, n, m, p, min_distance, export, import } => match import {
            Some(path) => cmd_code_import(ctx, path, *p),
            None => {
                let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| anyhow!("code needs --{flag} (or --import)"));
                let (d, big_n) = (need(*d, "d")?, need(*big_n, "N")?);
                let n = n.ok_or_else(|| anyhow!("code needs --n"))?;
                let m = m.ok_or_else(|| anyhow!("code needs --m"))?;
                cmd_code(ctx, d, big_n, n, m, p.unwrap_or(ctx.prime), *min_distance, export.as_deref())
            }
        },
    }
}

// ---- inputs ----

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_ints(s: &str, want: usize) -> anyhow::Result<Vec<i64>> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().with_context(|| format!("bad integers {s:?}"))?;
    ensure!(v.len() == want, "expected {want} comma-separated integers in {s:?}");
    Ok(v)
}

pub fn polygon_from(args: &PolygonArgs) -> anyhow::Result<LatticePolygon> {
    polygon_opt(args)?.ok_or_else(|| anyhow!("give a polygon with --polygon, --vertices, --rect or --triangle"))
}

fn polygon_opt(args: &PolygonArgs) -> anyhow::Result<Option<LatticePolygon>> {
    let given = [args.polygon.is_some(), args.vertices.is_some(), args.rect.is_some(), args.triangle.is_some()];
    ensure!(given.iter().filter(|&&b| b).count() <= 1, "give at most one of --polygon, --vertices, --rect, --triangle");
    if let Some(path) = &args.polygon {
        let dto: PolygonDto = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Some(dto.to_polygon()?));
    }
    if let Some(v) = &args.vertices {
        let pts = v
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_ints(s, 2).map(|c| LatticePoint::new(c[0], c[1])))
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(Some(LatticePolygon::from_points(&pts).ok_or_else(|| anyhow!("--vertices is empty"))?));
    }
    if let Some(r) = &args.rect {
        let c = parse_ints(r, 2)?;
        ensure!(c[0] >= 0 && c[1] >= 0, "--rect sides must be nonnegative");
        return Ok(Some(LatticePolygon::rectangle(c[0], c[1])));
    }
    if let Some(d) = args.triangle {
        ensure!(d >= 0, "--triangle degree must be nonnegative");
        return Ok(Some(LatticePolygon::triangle(d)));
    }
    Ok(None)
}

fn parse_mult(s: &str) -> anyhow::Result<Vec<u32>> {
    let m: Vec<u32> = s.split(',').map(|x| x.trim().parse::<u32>()).collect::<Result<_, _>>().with_context(|| format!("bad multiplicities {s:?}"))?;
    ensure!(m.iter().all(|&k| k >= 1), "multiplicities must be positive");
    Ok(m)
}

fn multiplicities(mult: Option<&str>, n: Option<usize>, m: Option<u32>) -> anyhow::Result<Vec<u32>> {
    match (mult, n, m) {
        (Some(s), None, None) => parse_mult(s),
        (None, Some(n), Some(m)) => {
            ensure!(m >= 1 && n >= 1, "--n and --m must be positive");
            Ok(vec![m; n])
        }
        _ => bail!("give either --mult or both --n and --m"),
    }
}

fn load_config(args: &PointArgs) -> anyhow::Result<PointConfiguration> {
    match (&args.config, &args.points) {
        (Some(path), None) => {
            let dto: ConfigDto = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            dto.to_config()
        }
        (None, Some(s)) => {
            let mut pts = Vec::new();
            let mut mult = Vec::new();
            for part in s.split(';').filter(|p| !p.trim().is_empty()) {
                let c = parse_ints(part, 3)?;
                ensure!(c[2] >= 1, "multiplicities must be positive");
                pts.push(LatticePoint::new(c[0], c[1]));
                mult.push(c[2] as u32);
            }
            Ok(PointConfiguration::from_points(&pts, &mult)?)
        }
        _ => bail!("give exactly one of --config or --points"),
    }
}

/// Points with rational coordinates, for solving over a field.
fn load_rational_points(args: &PointArgs) -> anyhow::Result<Vec<(BigRational, BigRational, u32)>> {
    if args.config.is_some() {
        return Ok(load_config(args)?
            .points()
            .iter()
            .map(|p| (BigRational::from_integer(p.point.x.into()), BigRational::from_integer(p.point.y.into()), p.multiplicity))
            .collect());
    }
    let s = args.points.as_ref().ok_or_else(|| anyhow!("give exactly one of --config or --points"))?;
    let mut out = Vec::new();
    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
        let c: Vec<&str> = part.split(',').collect();
        ensure!(c.len() == 3, "expected x,y,m in {part:?}");
        let m: u32 = c[2].trim().parse().with_context(|| format!("bad multiplicity in {part:?}"))?;
        ensure!(m >= 1, "multiplicities must be positive");
        out.push((parse_big_rational(c[0])?, parse_big_rational(c[1])?, m));
    }
    Ok(out)
}

fn parse_point(s: &str) -> anyhow::Result<RatPoint> {
    let (x, y) = s.split_once(',').ok_or_else(|| anyhow!("expected x,y in {s:?}"))?;
    Ok(RatPoint::new(parse_rational(x)?, parse_rational(y)?))
}

fn load_tropical(args: &PolyArgs) -> Result<TropicalPolynomial, Failure> {
    let ring = LaurentRing::new(Rationals);
    let from_text = |s: &str| -> anyhow::Result<TropicalPolynomial> {
        let f = polynomial_over_q(&ring, &parse_polynomial_raw(s)?);
        ensure!(!f.is_zero(), "the polynomial is zero");
        Ok(tropicalize(&ring, &f)?)
    };
    let t = match (&args.poly, &args.input) {
        (Some(s), None) => from_text(s)?,
        (None, Some(path)) => {
            let dto: PolynomialDto = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            dto.check()?;
            if let Some(coeffs) = &dto.coeffs {
                parse_tropical(coeffs)?
            } else if let Some(text) = &dto.text {
                from_text(text)?
            } else {
                let terms = dto.terms.as_ref().expect("checked");
                let expr: Vec<String> = terms.iter().map(|(i, j, c)| format!("({c})*x^{i}*y^{j}")).collect();
                let mut raw = crate::text::RawPolynomial::new();
                for (i, j, c) in terms {
                    let scalar = crate::text::parse_laurent_raw(c)?;
                    let slot = raw.entry(LatticePoint::new(*i, *j)).or_default();
                    for (e, v) in scalar {
                        *slot.entry(e).or_insert_with(|| BigRational::from_integer(0.into())) += v;
                    }
                }
                drop(expr);
                let f = polynomial_over_q(&ring, &raw);
                if f.is_zero() {
                    return Err(anyhow!("the polynomial is zero").into());
                }
                tropicalize(&ring, &f)?
            }
        }
        _ => return Err(anyhow!("give exactly one of --poly or --input").into()),
    };
    Ok(t)
}

fn curve_of(t: &TropicalPolynomial) -> Result<TropicalCurve, Failure> {
    curve_complex(t).map_err(|e| hypothesis("degenerate_newton_polygon", e.to_string(), json!({ "coeffs": tropical_coeffs(t) })))
}

// ---- commands ----

fn dir_json(u: Direction) -> Value {
    json!([u.u1(), u.u2()])
}

fn cmd_width(p: &LatticePolygon) -> Result<Report, Failure> {
    let (w, u) = p.minimal_lattice_width();
    let h = p.width_in_direction(Direction::new(1, 0).expect("primitive"));
    let v = p.width_in_direction(Direction::new(0, 1).expect("primitive"));
    let text = format!(
        "minimal lattice width {w} along ({}, {})\nwidth along (1, 0): {h}\nwidth along (0, 1): {v}\n",
        u.u1(),
        u.u2()
    );
    let body = json!({
        "polygon": PolygonDto::from_polygon(p),
        "width": w,
        "direction": dir_json(u),
        "horizontal_width": h,
        "vertical_width": v,
        "degenerate": p.is_degenerate(),
    });
    Ok(Report::new("width", body, text))
}

fn cmd_area(p: &LatticePolygon) -> Result<Report, Failure> {
    let (interior, boundary) = pick_counts(p);
    let area = format_rational(&p.area());
    let text = format!("area {area}\nlattice points {} ({interior} interior, {boundary} boundary)\n", interior + boundary);
    let body = json!({
        "polygon": PolygonDto::from_polygon(p),
        "area": area,
        "lattice_points": interior + boundary,
        "interior": interior,
        "boundary": boundary,
    });
    Ok(Report::new("area", body, text))
}

fn cmd_trop(t: &TropicalPolynomial) -> Result<Report, Failure> {
    let curve = curve_of(t)?;
    let dto = CurveDto::from_curve(&curve);
    let rays = dto.edges.iter().filter(|e| e.to.is_none()).count();
    let mut text = format!(
        "vertices {}\nbounded edges {}\nrays {}\ncells {}\nbalanced {}\n",
        dto.vertices.len(),
        dto.edges.len() - rays,
        rays,
        dto.cells.len(),
        dto.balanced
    );
    for v in &dto.vertices {
        text.push_str(&format!("vertex {} at ({}, {}) dual area {}\n", v.id, v.position[0], v.position[1], dto.cells[v.cell].area));
    }
    let mut report = Report::new("trop", json!({ "curve": dto }), text);
    report.svg = Some(render(&curve, None));
    Ok(report)
}

fn location_json(curve: &TropicalCurve, loc: &Location) -> Value {
    match *loc {
        Location::Vertex(v) => json!({ "kind": "vertex", "vertex": v }),
        Location::Edge(e) => json!({ "kind": "edge", "edge": e, "from": curve.edges()[e].origin() }),
        Location::Complement(q) => json!({ "kind": "complement", "monomial": [q.x, q.y] }),
    }
}

fn cmd_infl(ctx: &RunContext, poly: &PolyArgs, point: &str, direction: Option<&str>, polygon: &PolygonArgs) -> Result<Report, Failure> {
    let _ = ctx;
    let curve = curve_of(&load_tropical(poly)?)?;
    let p = parse_point(point)?;
    let delta = polygon_opt(polygon)?.unwrap_or_else(|| curve.newton_polygon().clone());
    let set = influence_set(&p, &curve, &delta).map_err(|e| hypothesis("degenerate_polygon", e.to_string(), json!({})))?;
    let area = set.area(&curve);
    debug_assert_eq!(area, influence_area(&p, &curve, &delta).expect("same inputs"));
    let cone = tangent_cone(&p, &delta).expect("checked above");
    let members: Vec<Value> = set
        .members
        .iter()
        .map(|(&v, &m)| {
            json!({
                "vertex": v,
                "position": point_dto(&curve.vertices()[v].position),
                "multiplicity": m,
                "cell_area": format_rational(&curve.dual_area(v)),
            })
        })
        .collect();
    let mut text = format!(
        "apex ({}, {})\nlocation {}\ninfluence vertices {}\ninfluence area {}\n",
        format_rational(&p.x),
        format_rational(&p.y),
        match set.location {
            Location::Vertex(v) => format!("vertex {v}"),
            Location::Edge(e) => format!("edge {e}"),
            Location::Complement(_) => "off the curve".to_string(),
        },
        set.members.len(),
        format_rational(&area)
    );
    let mut body = json!({
        "curve": CurveDto::from_curve(&curve),
        "polygon": PolygonDto::from_polygon(&delta),
        "apex": point_dto(&p),
        "location": location_json(&curve, &set.location),
        "normals": cone.normals.iter().map(|&u| dir_json(u)).collect::<Vec<_>>(),
        "members": members,
        "area": format_rational(&area),
    });
    if let Some(d) = direction {
        let c = parse_ints(d, 2)?;
        let u = Direction::new(c[0], c[1]).ok_or_else(|| anyhow!("--direction must be nonzero"))?;
        let a = directional_influence_area(&p, &curve, u)
            .map_err(|e| hypothesis("point_not_on_curve", e.to_string(), json!({ "apex": point_dto(&p) })))?;
        text.push_str(&format!("directional area along normal ({}, {}) {}\n", u.u1(), u.u2(), format_rational(&a)));
        body["directional"] = json!({ "normal": dir_json(u), "area": format_rational(&a) });
    }
    let overlay = Overlay { apex: p, normals: cone.normals.iter().copied().collect(), members: set.members.clone() };
    let mut report = Report::new("infl", body, text);
    report.svg = Some(render(&curve, Some(&overlay)));
    Ok(report)
}

fn bound_json(b: &BoundReport) -> Value {
    json!({
        "name": b.name,
        "hypotheses": b.hypotheses.iter().map(|h| json!({ "description": h.description, "holds": h.holds })).collect::<Vec<_>>(),
        "value": b.value.as_ref().map(|v| format_rational(&v.value)),
        "exact": b.value.as_ref().map(|v| v.exact),
    })
}

fn bound_text(b: &BoundReport) -> String {
    let value = match &b.value {
        Some(v) if v.exact => format_rational(&v.value),
        Some(v) => format!(">= {:.9}", rational_to_f64(&v.value)),
        None => "withheld".to_string(),
    };
    let hyps: Vec<String> = b.hypotheses.iter().map(|h| format!("{} [{}]", h.description, if h.holds { "ok" } else { "fails" })).collect();
    format!("{:<10} {:<28} {}\n", b.name, value, hyps.join("; "))
}

fn cmd_floor(ctx: &RunContext, delta: &LatticePolygon, m: &[u32]) -> Result<Report, Failure> {
    let field = ctx.field()?;
    if let Err(e) = floor_points(m, delta) {
        let (w, _) = delta.minimal_lattice_width();
        return Err(hypothesis("floor_hypothesis", e.to_string(), json!({ "width": w, "multiplicities": m })));
    }
    let mut rng = ctx.rng();
    let run = run_floor(delta, m, &field, &mut rng).map_err(|e| hypothesis("pipeline", e.to_string(), json!({})))?;
    let floor = &run.floor;
    let theorem1 = &run.theorem1;
    let bound = theorem1.exact_value();
    let area = delta.area();
    let below = bound.is_some_and(|b| area < b);
    let curve_exists = run.run.curve.is_some();
    // a curve below the bound would contradict the area inequality
    let consistent = !(below && curve_exists);
    let ring = LaurentRing::new(field);

    let detrop = match &run.detropicalization {
        Detropicalization::Found { a, tried, rank, minor_span, .. } => json!({
            "found": true, "a": a, "tried": tried, "rank": rank, "minor_span": minor_span,
        }),
        Detropicalization::Exhausted { tried, rank, minor_span } => json!({
            "found": false, "tried": tried, "rank": rank, "minor_span": minor_span,
        }),
    };
    let certificate = run.certificate.as_ref().map(|c| {
        json!({
            "s": c.s.s,
            "path_advance": c.s.path_advance,
            "horizontal_width": c.s.horizontal_width,
            "terms": c.terms.iter().map(format_rational).collect::<Vec<_>>(),
            "lower": format_rational(&c.lower),
            "middle": format_rational(&c.middle),
            "upper": format_rational(&c.upper),
            "lower_holds": c.lower_holds(),
            "upper_holds": c.upper_holds(),
            "widths_hold": c.widths_hold(),
        })
    });
    let budget = run.run.curve.as_ref().map(|c| {
        let terms: Vec<Rational> = floor
            .config
            .points()
            .iter()
            .map(|p| influence_area(&RatPoint::from_lattice(p.point), &c.tropical, &floor.polygon).expect("nondegenerate"))
            .collect();
        let total: Rational = terms.iter().sum();
        let budget = floor.polygon.area() * Rational::from_integer(2);
        json!({
            "general_position": false,
            "terms": terms.iter().map(format_rational).collect::<Vec<_>>(),
            "total": format_rational(&total),
            "budget": format_rational(&budget),
            "holds": total <= budget,
        })
    });
    let points: Vec<Value> = floor
        .config
        .points()
        .iter()
        .map(|p| json!({ "label": p.label, "x": p.point.x, "y": p.point.y, "m": p.multiplicity }))
        .collect();
    let body = json!({
        "polygon": PolygonDto::from_polygon(delta),
        "multiplicities": m,
        "floor": {
            "polygon": PolygonDto::from_polygon(&floor.polygon),
            "map": MapDto::from(&floor.map),
            "height": floor.height,
            "line_direction": [floor.line_direction().x, floor.line_direction().y],
            "valid": floor.is_valid_floor(),
            "points": points,
        },
        "system": {
            "rows": run.run.system.matrix.nrows(),
            "cols": run.run.system.matrix.ncols(),
            "rank": run.run.report.rank,
            "kernel_dim": run.run.report.kernel_dim,
        },
        "detropicalization": detrop,
        "theorem1": bound_json(theorem1),
        "area": format_rational(&area),
        "area_below_bound": below,
        "curve": run.run.curve.as_ref().map(|c| json!({
            "exact": c.exact,
            "polynomial": crate::text::format_polynomial(&ring, &c.polynomial),
            "coeffs": tropical_coeffs(c.tropical.polynomial()),
        })),
        "certificate": certificate,
        "budget": budget,
        "consistent": consistent,
    });
    let mut text = format!(
        "floor points {} on direction ({}, {}), valid {}\nsystem {} x {}, rank {}, kernel {}\n",
        floor.config.len(),
        floor.line_direction().x,
        floor.line_direction().y,
        floor.is_valid_floor(),
        run.run.system.matrix.nrows(),
        run.run.system.matrix.ncols(),
        run.run.report.rank,
        run.run.report.kernel_dim
    );
    match &run.detropicalization {
        Detropicalization::Found { a, tried, .. } => text.push_str(&format!("detropicalization a = {a} after {tried} tries\n")),
        Detropicalization::Exhausted { tried, .. } => text.push_str(&format!("detropicalization exhausted after {tried} tries\n")),
    }
    text.push_str(&format!("area {} vs theorem1 {}", format_rational(&area), bound.map_or("withheld".into(), |b| format_rational(&b))));
    text.push_str(if below { " (below: no curve expected)\n" } else { "\n" });
    text.push_str(&format!("curve {}\n", if curve_exists { "found" } else { "none" }));
    if let Some(c) = &run.certificate {
        text.push_str(&format!(
            "s = {:?}\n{} <= {} <= {}: {}\nsum s <= horizontal width: {}\n",
            c.s.s,
            format_rational(&c.lower),
            format_rational(&c.middle),
            format_rational(&c.upper),
            c.lower_holds() && c.upper_holds(),
            c.widths_hold()
        ));
    }
    if !run.detropicalization.is_found() {
        return Err(hypothesis("detropicalization_exhausted", format!("no a in F_{} keeps the rank", field.modulus()), body));
    }
    if run.certificate.as_ref().is_some_and(|c| !c.holds()) || !consistent {
        return Err(hypothesis("certificate_failed", "a floor certificate does not hold", body));
    }
    Ok(Report::new("floor", body, text))
}

fn cmd_bounds(ctx: &RunContext, m: &[u32], polygon: &PolygonArgs, width: Option<u64>, degree: Option<u64>) -> Result<Report, Failure> {
    let delta = polygon_opt(polygon)?;
    if delta.is_some() && width.is_some() {
        return Err(anyhow!("give a polygon or --width, not both").into());
    }
    let w = match (&delta, width) {
        (Some(p), _) => Some(p.minimal_lattice_width().0 as u64),
        (None, w) => w,
    };
    let n = m.len() as u64;
    let uniform_m = m.iter().all(|&k| k == m[0]).then_some(m[0]);
    let mut rows: Vec<BoundReport> = Vec::new();
    if let Some(w) = w {
        rows.push(match &delta {
            Some(p) => theorem1_bound(m, p),
            None => theorem1_bound_for_width(m, w),
        });
        if let Some(k) = uniform_m {
            rows.push(uniform_bound(n, k, w));
        }
    }
    if let Some(k) = uniform_m {
        rows.push(degree_bound(n, k, ctx.precision));
    }
    let nagata = nagata_rhs(m, ctx.precision);
    let quarter = quarter_bound(m);
    let mut text = format!("multiplicities {:?}\n", m);
    if let Some(w) = w {
        text.push_str(&format!("width {w}\n"));
    }
    text.push_str(&format!("{:<10} {:<28} {}\n", "quarter", format_rational(&quarter), "points in general position [assumed]"));
    for r in &rows {
        text.push_str(&bound_text(r));
    }
    let nagata_value = if nagata.value.exact { format_rational(&nagata.value.value) } else { format!(">= {:.9}", rational_to_f64(&nagata.value.value)) };
    text.push_str(&format!("{:<10} {:<28} {}\n", "nagata", nagata_value, if nagata.flagged { "n <= 9 [flagged]" } else { "n > 9" }));
    let mut body = json!({
        "multiplicities": m,
        "width": w,
        "quarter": format_rational(&quarter),
        "bounds": rows.iter().map(bound_json).collect::<Vec<_>>(),
        "nagata_rhs": {
            "value": format_rational(&nagata.value.value),
            "exact": nagata.value.exact,
            "sqrt_floor": nagata.sqrt.floor,
            "sqrt_remainder": nagata.sqrt.remainder,
            "flagged": nagata.flagged,
        },
    });
    if let Some(p) = &delta {
        body["polygon"] = json!(PolygonDto::from_polygon(p));
        body["area"] = json!(format_rational(&p.area()));
    }
    if let Some(d) = degree {
        let e = expected_dimension(d, m);
        text.push_str(&format!("{:<10} {}\n", "expdim", e));
        body["expected_dimension"] = json!({ "degree": d, "value": e });
    }
    if let Some(bad) = rows.iter().find(|r| !r.hypotheses_hold()) {
        return Err(hypothesis("bound_hypothesis", format!("{} bound hypothesis fails", bad.name), body));
    }
    Ok(Report::new("bounds", body, text))
}

fn kernel_polys<F: Field + CoefficientText>(
    field: &F,
    support: &[LatticePoint],
    conds: &[Condition<F::Elem>],
) -> Result<(Value, String, bool), Failure> {
    let sys = multiplicity_system(field, support, conds).map_err(|e| hypothesis("invalid_points", e.to_string(), json!({})))?;
    let report = solve(field, &sys);
    let mut verified = true;
    let mut polys = Vec::new();
    for v in &report.kernel {
        let f = Polynomial::from_coefficients(field, support, v);
        verified &= conds.iter().all(|c| multiplicity_of(field, &f, &c.point).is_some_and(|k| k >= c.multiplicity));
        polys.push(format_field_polynomial(field, &f));
    }
    let text = format!(
        "system {} x {}, rank {}, kernel {}\n{}",
        sys.matrix.nrows(),
        sys.matrix.ncols(),
        report.rank,
        report.kernel_dim,
        polys.iter().map(|p| format!("  {p}\n")).collect::<String>()
    );
    let body = json!({
        "rows": sys.matrix.nrows(),
        "cols": sys.matrix.ncols(),
        "rank": report.rank,
        "kernel_dim": report.kernel_dim,
        "kernel": polys,
        "multiplicities_verified": verified,
    });
    Ok((body, text, verified))
}

fn cmd_solve(ctx: &RunContext, polygon: &PolygonArgs, degree: Option<u64>, points: &PointArgs, rational: bool) -> Result<Report, Failure> {
    let delta = match (polygon_opt(polygon)?, degree) {
        (Some(p), None) => p,
        (None, Some(d)) => LatticePolygon::triangle(d as i64),
        _ => return Err(anyhow!("give either a polygon or --degree").into()),
    };
    let support = delta.lattice_points();
    let pts = load_rational_points(points)?;
    let m: Vec<u32> = pts.iter().map(|p| p.2).collect();
    let (mut body, mut text, verified) = if rational {
        let conds: Vec<_> = pts.iter().map(|(x, y, k)| Condition::new(x.clone(), y.clone(), *k)).collect();
        let (b, t, v) = kernel_polys(&Rationals, &support, &conds)?;
        if let Some(d) = degree {
            let rep = dimension_report(&Rationals, d, &conds).map_err(|e| hypothesis("invalid_points", e.to_string(), json!({})))?;
            debug_assert_eq!(rep.expected, expected_dimension(d, &m));
        }
        (b, t, v)
    } else {
        let field = ctx.field()?;
        let conds = pts
            .iter()
            .map(|(x, y, k)| {
                let x = field.from_rational(x).ok_or_else(|| anyhow!("{x} is not defined mod {}", field.modulus()))?;
                let y = field.from_rational(y).ok_or_else(|| anyhow!("{y} is not defined mod {}", field.modulus()))?;
                Ok(Condition::new(x, y, *k))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        kernel_polys(&field, &support, &conds)?
    };
    body["field"] = json!(if rational { "Q".to_string() } else { format!("F_{}", ctx.prime) });
    body["polygon"] = json!(PolygonDto::from_polygon(&delta));
    if let Some(d) = degree {
        let kernel = body["kernel_dim"].as_i64().expect("integer");
        let e = expected_dimension(d, &m);
        body["dimension"] = json!({ "degree": d, "actual": kernel - 1, "expected": e });
        text.push_str(&format!("actual dimension {} vs expected {}\n", kernel - 1, e));
    }
    if !verified {
        return Err(hypothesis("multiplicity_check_failed", "a kernel element has lower multiplicity than required", body));
    }
    Ok(Report::new("solve", body, text))
}

fn cmd_detrop(ctx: &RunContext, delta: &LatticePolygon, cfg: &PointConfiguration) -> Result<Report, Failure> {
    let field = ctx.field()?;
    let ring = LaurentRing::new(field);
    let support = delta.lattice_points();
    let sys = multiplicity_system(&ring, &support, &lift_points(&ring, cfg))
        .map_err(|e| hypothesis("invalid_points", e.to_string(), json!({})))?;
    let result = detropicalize(&ring, &sys.matrix);
    let mut body = json!({
        "polygon": PolygonDto::from_polygon(delta),
        "points": ConfigDto::from_config(cfg),
        "rows": sys.matrix.nrows(),
        "cols": sys.matrix.ncols(),
    });
    match result {
        Detropicalization::Found { a, tried, rank, minor_span, report } => {
            let special: Vec<[u64; 2]> = cfg
                .positions()
                .iter()
                .map(|p| [field.pow_signed(&a, -p.x).expect("unit"), field.pow_signed(&a, -p.y).expect("unit")])
                .collect();
            body["found"] = json!(true);
            body["a"] = json!(a);
            body["tried"] = json!(tried);
            body["rank"] = json!(rank);
            body["kernel_dim"] = json!(report.kernel_dim);
            body["minor_span"] = json!(minor_span);
            body["specialized_points"] = json!(special);
            let text = format!(
                "system {} x {} over F_{}(t), rank {rank}\nt = {a} keeps the rank (tried {tried}, at most {minor_span} bad values)\n",
                sys.matrix.nrows(),
                sys.matrix.ncols(),
                field.modulus()
            );
            Ok(Report::new("detrop", body, text))
        }
        Detropicalization::Exhausted { tried, rank, minor_span } => {
            body["found"] = json!(false);
            body["tried"] = json!(tried);
            body["rank"] = json!(rank);
            body["minor_span"] = json!(minor_span);
            Err(hypothesis("detropicalization_exhausted", format!("every nonzero a in F_{} lowers the rank {rank}", field.modulus()), body))
        }
    }
}

fn generator_dto(code: &LinearCode) -> GeneratorDto {
    GeneratorDto {
        schema: Some(SCHEMA.to_string()),
        prime: code.prime,
        rows: code.dimension(),
        cols: code.length(),
        generator: code.generator.rows().to_vec(),
    }
}

fn distance_json(code: &LinearCode, wanted: bool) -> (Value, String) {
    if !wanted {
        return (Value::Null, String::new());
    }
    match min_distance_bruteforce(code, DEFAULT_CODEWORD_CAP) {
        Ok(d) => (json!({ "value": d }), format!("minimum distance {d}\n")),
        Err(e) => (json!({ "value": null, "reason": e.to_string() }), format!("minimum distance not computed: {e}\n")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_code(ctx: &RunContext, d: i64, big_n: i64, n: usize, m: u32, p: u64, min_distance: bool, export: Option<&Path>) -> Result<Report, Failure> {
    if d < 0 || big_n < 0 {
        return Err(anyhow!("--d and --N must be nonnegative").into());
    }
    let field = ctx.field_for(p)?;
    let delta = LatticePolygon::rectangle(d, big_n);
    let feas = feasibility(d as u64, big_n as u64, n as u64, m);
    let (area, bound) = polygon_feasibility(&delta, n as u64, m);
    let feas_json = json!({
        "hypothesis": feas.hypothesis,
        "holds": feas.holds,
        "area": format_rational(&area),
        "bound": bound.map(|b| format_rational(&b)),
    });
    let code = match build_code(&delta, n, m, &field) {
        Ok(c) => c,
        Err(e) => {
            let reason = match e {
                CodeError::Infeasible { .. } => "infeasible",
                CodeError::Exhausted { .. } => "detropicalization_exhausted",
                CodeError::CertificationFailed { .. } => "certification_failed",
                CodeError::Position(_) => "floor_hypothesis",
                _ => "code_construction",
            };
            return Err(hypothesis(reason, e.to_string(), json!({ "feasibility": feas_json })));
        }
    };
    let gen = generator_dto(&code);
    if let Some(path) = export {
        let data = if path.extension().is_some_and(|e| e == "json") {
            let mut s = serde_json::to_string_pretty(&gen).expect("serializable");
            s.push('\n');
            s
        } else {
            gen.to_text()
        };
        fs::write(path, data).with_context(|| format!("writing {}", path.display()))?;
    }
    let prov = code.provenance.as_ref().expect("built codes record provenance");
    let (dist, dist_text) = distance_json(&code, min_distance);
    let body = json!({
        "d": d,
        "N": big_n,
        "n": n,
        "m": m,
        "prime": code.prime,
        "feasibility": feas_json,
        "length": code.length(),
        "dimension": code.dimension(),
        "kernel_trivial": true,
        "a": prov.a,
        "map": MapDto::from(&prov.map),
        "tropical_points": prov.tropical_points.iter().map(|q| [q.x, q.y]).collect::<Vec<_>>(),
        "points": prov.points,
        "min_distance": dist,
        "generator": gen,
    });
    let text = format!(
        "feasibility {} ({} < {})\ncode over F_{}: length {}, dimension {}\nt = {} on points {:?}\n{}",
        feas.holds,
        format_rational(&area),
        bound.map_or("-".to_string(), |b| format_rational(&b)),
        code.prime,
        code.length(),
        code.dimension(),
        prov.a,
        prov.points,
        dist_text
    );
    Ok(Report::new("code", body, text))
}

fn cmd_code_import(ctx: &RunContext, path: &Path, p: Option<u64>) -> Result<Report, Failure> {
    let data = read(path)?;
    let gen = if data.trim_start().starts_with('{') {
        let g: GeneratorDto = serde_json::from_str(&data).with_context(|| format!("parsing {}", path.display()))?;
        g.validate()?;
        g
    } else {
        GeneratorDto::from_text(&data, p.unwrap_or(ctx.prime))?
    };
    let field = ctx.field_for(gen.prime)?;
    let matrix = Matrix::from_rows(gen.generator.clone(), gen.cols);
    let r = rank(&field, &matrix);
    let body = json!({
        "prime": gen.prime,
        "rows": gen.rows,
        "cols": gen.cols,
        "rank": r,
        "full_rank": r == gen.rows,
    });
    let text = format!("imported {} x {} generator over F_{}, rank {}\n", gen.rows, gen.cols, gen.prime, r);
    if r != gen.rows {
        return Err(hypothesis("not_full_rank", format!("generator has rank {r} < {} rows", gen.rows), body));
    }
    Ok(Report::new("code", body, text))
}
