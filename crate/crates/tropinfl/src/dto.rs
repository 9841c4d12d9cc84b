//! JSON shapes read and written by the CLI. Every document carries
//! `"schema": "tropinfl/1"`; inputs may omit it.

use serde::{Deserialize, Serialize};
use tropinfl_core::lattice::{LatticePoint, LatticePolygon, UnimodularMap};
use tropinfl_core::position::{ConfigPoint, PointConfiguration};
use tropinfl_core::tropical::{EdgeKind, RatPoint, TropicalCurve, TropicalPolynomial};

use crate::text::{format_rational, parse_rational, ParseError};

pub const SCHEMA: &str = "tropinfl/1";

fn check_schema(schema: &Option<String>) -> anyhow::Result<()> {
    match schema.as_deref() {
        None | Some(SCHEMA) => Ok(()),
        Some(other) => anyhow::bail!("unsupported schema {other:?}, expected {SCHEMA:?}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub vertices: Vec<[i64; 2]>,
}

impl PolygonDto {
    pub fn from_polygon(p: &LatticePolygon) -> Self {
        PolygonDto { schema: None, vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect() }
    }

    pub fn to_polygon(&self) -> anyhow::Result<LatticePolygon> {
        check_schema(&self.schema)?;
        let pts: Vec<LatticePoint> = self.vertices.iter().map(|&[x, y]| LatticePoint::new(x, y)).collect();
        LatticePolygon::from_points(&pts).ok_or_else(|| anyhow::anyhow!("polygon has no vertices"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub x: i64,
    pub y: i64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub points: Vec<PointDto>,
}

impl ConfigDto {
    pub fn from_config(cfg: &PointConfiguration) -> Self {
        let points = cfg
            .points()
            .iter()
            .map(|p| PointDto { label: Some(p.label.clone()), x: p.point.x, y: p.point.y, m: p.multiplicity })
            .collect();
        ConfigDto { schema: None, points }
    }

    pub fn to_config(&self) -> anyhow::Result<PointConfiguration> {
        check_schema(&self.schema)?;
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| ConfigPoint {
                label: p.label.clone().unwrap_or_else(|| format!("P{}", i + 1)),
                point: LatticePoint::new(p.x, p.y),
                multiplicity: p.m,
            })
            .collect();
        Ok(PointConfiguration::new(points)?)
    }
}

/// A polynomial file: Laurent coefficients as text (`terms`), tropical
/// coefficients (`coeffs`), or a whole expression (`text`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(i64, i64, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<(i64, i64, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl PolynomialDto {
    pub fn check(&self) -> anyhow::Result<()> {
        check_schema(&self.schema)?;
        let given = [self.terms.is_some(), self.coeffs.is_some(), self.text.is_some()].iter().filter(|&&b| b).count();
        anyhow::ensure!(given == 1, "a polynomial file needs exactly one of \"terms\", \"coeffs\", \"text\"");
        Ok(())
    }
}

pub fn tropical_coeffs(t: &TropicalPolynomial) -> Vec<(i64, i64, String)> {
    t.coefficients().iter().map(|(p, v)| (p.x, p.y, format_rational(v))).collect()
}

pub fn parse_tropical(coeffs: &[(i64, i64, String)]) -> anyhow::Result<TropicalPolynomial> {
    let pairs = coeffs
        .iter()
        .map(|(x, y, v)| Ok((LatticePoint::new(*x, *y), parse_rational(v)?)))
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(TropicalPolynomial::from_pairs(pairs)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapDto {
    pub matrix: [[i64; 2]; 2],
    pub shift: [i64; 2],
}

impl From<&UnimodularMap> for MapDto {
    fn from(m: &UnimodularMap) -> Self {
        MapDto { matrix: m.matrix, shift: [m.shift.x, m.shift.y] }
    }
}

pub fn point_dto(p: &RatPoint) -> [String; 2] {
    [format_rational(&p.x), format_rational(&p.y)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDto {
    pub vertices: Vec<[i64; 2]>,
    pub marked: Vec<[i64; 2]>,
    pub area: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexDto {
    pub id: usize,
    pub position: [String; 2],
    pub cell: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDto {
    pub from: usize,
    /// `None` for rays.
    pub to: Option<usize>,
    pub direction: [i64; 2],
    pub weight: i64,
    pub dual_edge: [[i64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveDto {
    pub polygon: PolygonDto,
    pub coeffs: Vec<(i64, i64, String)>,
    pub cells: Vec<CellDto>,
    pub vertices: Vec<VertexDto>,
    pub edges: Vec<EdgeDto>,
    pub balanced: bool,
}

fn pair(p: LatticePoint) -> [i64; 2] {
    [p.x, p.y]
}

impl CurveDto {
    pub fn from_curve(curve: &TropicalCurve) -> Self {
        let sub = curve.subdivision();
        let cells = sub
            .cells
            .iter()
            .map(|c| CellDto {
                vertices: c.vertices.iter().copied().map(pair).collect(),
                marked: c.marked.iter().copied().map(pair).collect(),
                area: format_rational(&c.area()),
            })
            .collect();
        let vertices = curve
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| VertexDto { id, position: point_dto(&v.position), cell: v.cell })
            .collect();
        let edges = curve
            .edges()
            .iter()
            .map(|e| {
                let to = match e.kind {
                    EdgeKind::Bounded { to, .. } => Some(to),
                    EdgeKind::Ray { .. } => None,
                };
                let ends = sub.edges[e.dual_edge].ends;
                EdgeDto { from: e.origin(), to, direction: pair(e.direction), weight: e.weight, dual_edge: [pair(ends[0]), pair(ends[1])] }
            })
            .collect();
        CurveDto {
            polygon: PolygonDto::from_polygon(curve.newton_polygon()),
            coeffs: tropical_coeffs(curve.polynomial()),
            cells,
            vertices,
            edges,
            balanced: curve.is_balanced(),
        }
    }
}

/// Generator matrix export: rows of integers mod `prime`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub prime: u64,
    pub rows: usize,
    pub cols: usize,
    pub generator: Vec<Vec<u64>>,
}

impl GeneratorDto {
    pub fn validate(&self) -> anyhow::Result<()> {
        check_schema(&self.schema)?;
        anyhow::ensure!(self.generator.len() == self.rows, "expected {} rows, found {}", self.rows, self.generator.len());
        for (i, row) in self.generator.iter().enumerate() {
            anyhow::ensure!(row.len() == self.cols, "row {} has {} entries, expected {}", i, row.len(), self.cols);
            anyhow::ensure!(row.iter().all(|&x| x < self.prime), "row {} has an entry outside 0..{}", i, self.prime);
        }
        Ok(())
    }

    /// `# prime p` header, then one line of space-separated entries per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("# prime {}\n# rows {} cols {}\n", self.prime, self.rows, self.cols);
        for row in &self.generator {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str, default_prime: u64) -> anyhow::Result<Self> {
        let mut prime = default_prime;
        let mut generator = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(comment) = line.strip_prefix('#') {
                let words: Vec<&str> = comment.split_whitespace().collect();
                if let ["prime", p] = words.as_slice() {
                    prime = p.parse()?;
                }
                continue;
            }
            generator.push(line.split_whitespace().map(str::parse).collect::<Result<Vec<u64>, _>>()?);
        }
        let cols = generator.first().map_or(0, Vec::len);
        let dto = GeneratorDto { schema: None, prime, rows: generator.len(), cols, generator };
        dto.validate()?;
        Ok(dto)
    }
}
