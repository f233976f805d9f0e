//! Geometric data for the 27 tilings and its self-validation.

mod exact;
mod validate;
mod vertex_type;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix2;

pub use exact::{ExactCoord, QSqrt3};
pub use validate::{validate, CheckOutcome, ValidationReport};
pub use vertex_type::VertexType;

pub type LatticePoint = [Rational64; 2];

/// Vertex count of the minimal torus map E/H for each tiling id.
pub const V0: [usize; 27] = [
    12, 8, 4, 3, 7, 14, 7, 4, 12, 8, 12, 3, 4, 12, 3, 8, 18, 5, 5, 18, 6, 6, 4, 3, 6, 12, 4,
];

/// Expected order of the origin stabilizer, where a reference value exists.
pub fn expected_point_group_order(id: u32) -> Option<usize> {
    match id {
        2 | 5 | 6 | 7 | 11 | 14 | 17 | 20 | 21 | 22 | 24 | 26 => Some(12),
        16 | 27 => Some(8),
        1 | 25 => Some(6),
        3 | 4 | 8 | 12 | 13 | 15 | 18 | 19 | 23 => Some(4),
        _ => None,
    }
}

/// One plane symmetry in lattice coordinates: x ↦ L·x + t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSymmetry {
    pub label: String,
    pub linear: IntMatrix2,
    pub translation: LatticePoint,
}

fn frac_part(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl AffineSymmetry {
    pub fn new(
        label: impl Into<String>,
        linear: IntMatrix2,
        translation: LatticePoint,
    ) -> Result<Self> {
        let label = label.into();
        let det = linear.det();
        if det != 1 && det != -1 {
            return Err(Error::Invariant(format!(
                "symmetry {label}: linear part {linear} has determinant {det}"
            )));
        }
        for t in translation {
            let den = *t.denom();
            if den != 1 && den != 2 {
                return Err(Error::Invariant(format!(
                    "symmetry {label}: translation component {t} has denominator {den}, expected 1 or 2"
                )));
            }
        }
        Ok(AffineSymmetry {
            label,
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        AffineSymmetry {
            label: "id".into(),
            linear: IntMatrix2::IDENTITY,
            translation: [Rational64::zero(); 2],
        }
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let l = &self.linear;
        [
            p[0] * l.m11 + p[1] * l.m12 + self.translation[0],
            p[0] * l.m21 + p[1] * l.m22 + self.translation[1],
        ]
    }

    /// self ∘ other, with the translation reduced modulo the lattice.
    pub fn compose(&self, other: &AffineSymmetry) -> AffineSymmetry {
        let t = self.apply(other.translation);
        AffineSymmetry {
            label: format!("{}*{}", self.label, other.label),
            linear: self.linear.mul(&other.linear),
            translation: [frac_part(t[0]), frac_part(t[1])],
        }
    }

    /// Equality of linear parts and of translations modulo the lattice.
    pub fn same_coset(&self, other: &AffineSymmetry) -> bool {
        self.linear == other.linear
            && frac_part(self.translation[0]) == frac_part(other.translation[0])
            && frac_part(self.translation[1]) == frac_part(other.translation[1])
    }

    pub fn fixes_origin(&self) -> bool {
        frac_part(self.translation[0]).is_zero() && frac_part(self.translation[1]).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub pos: LatticePoint,
    pub vtype: String,
}

/// Vertex i joined to vertex j shifted by offset.0·A + offset.1·B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub offset: (i64, i64),
}

/// Action of one symmetry on the fundamental vertices: vertex i goes to
/// vertex `image.0` translated by `image.1`.
pub type VertexAction = Vec<(usize, (i64, i64))>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSpec {
    pub id: u32,
    pub type_string: String,
    pub basis_a: ExactCoord,
    pub basis_b: ExactCoord,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub point_group: Vec<AffineSymmetry>,
    pub declared_orbit_count: usize,
    pub v0: usize,
}

impl TilingSpec {
    pub fn is_archimedean(&self) -> bool {
        self.id >= 21
    }

    pub fn point_group_order(&self) -> usize {
        self.point_group.len()
    }

    /// Number of point-group elements that fix the origin.
    pub fn origin_stabilizer_order(&self) -> usize {
        self.point_group.iter().filter(|s| s.fixes_origin()).count()
    }

    pub fn symmetry(&self, label: &str) -> Option<&AffineSymmetry> {
        self.point_group.iter().find(|s| s.label == label)
    }

    fn position_index(&self) -> HashMap<LatticePoint, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(k, v)| ([frac_part(v.pos[0]), frac_part(v.pos[1])], k))
            .collect()
    }

    /// Where `sym` sends each fundamental vertex, compared exactly modulo ℤ².
    pub fn vertex_action(&self, sym: &AffineSymmetry) -> Result<VertexAction> {
        let index = self.position_index();
        self.vertex_action_with(sym, &index)
    }

    fn vertex_action_with(
        &self,
        sym: &AffineSymmetry,
        index: &HashMap<LatticePoint, usize>,
    ) -> Result<VertexAction> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let y = sym.apply(v.pos);
                let key = [frac_part(y[0]), frac_part(y[1])];
                let j = *index.get(&key).ok_or_else(|| {
                    Error::Consistency(format!(
                        "E{}: symmetry {} sends vertex {i} to ({}, {}), which is not a vertex",
                        self.id, sym.label, y[0], y[1]
                    ))
                })?;
                let m = [
                    y[0] - self.vertices[j].pos[0],
                    y[1] - self.vertices[j].pos[1],
                ];
                Ok((j, (m[0].to_integer(), m[1].to_integer())))
            })
            .collect()
    }

    /// Vertex actions of every point-group element, in point-group order.
    pub fn all_vertex_actions(&self) -> Result<Vec<VertexAction>> {
        let index = self.position_index();
        self.point_group
            .iter()
            .map(|s| self.vertex_action_with(s, &index))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec::from(self);
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"id\": {},", raw.id);
        let _ = writeln!(s, "  \"type_string\": {},", compact(&raw.type_string));
        let _ = writeln!(s, "  \"v0\": {},", raw.v0);
        let _ = writeln!(
            s,
            "  \"declared_orbit_count\": {},",
            raw.declared_orbit_count
        );
        let _ = writeln!(s, "  \"basis\": {},", compact(&raw.basis));
        let block = |s: &mut String, name: &str, items: Vec<String>, last: bool| {
            let _ = writeln!(s, "  \"{name}\": [");
            let n = items.len();
            for (k, it) in items.into_iter().enumerate() {
                let sep = if k + 1 < n { "," } else { "" };
                let _ = writeln!(s, "    {it}{sep}");
            }
            let _ = writeln!(s, "  ]{}", if last { "" } else { "," });
        };
        block(
            &mut s,
            "vertices",
            raw.vertices.iter().map(compact).collect(),
            false,
        );
        block(
            &mut s,
            "edges",
            raw.edges.iter().map(compact).collect(),
            false,
        );
        block(
            &mut s,
            "point_group",
            raw.point_group.iter().map(compact).collect(),
            true,
        );
        s.push_str("}\n");
        s
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    #[serde(rename = "A")]
    a: [[i64; 4]; 2],
    #[serde(rename = "B")]
    b: [[i64; 4]; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    pos: [String; 2],
    vtype: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymmetry {
    label: String,
    linear: [[i64; 2]; 2],
    translation: [String; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    id: u32,
    type_string: String,
    v0: usize,
    declared_orbit_count: usize,
    basis: RawBasis,
    vertices: Vec<RawVertex>,
    edges: Vec<(usize, usize, [i64; 2])>,
    point_group: Vec<RawSymmetry>,
}

fn fmt_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn coord_encode(c: &ExactCoord) -> [[i64; 4]; 2] {
    [c.x.encode(), c.y.encode()]
}

impl From<&TilingSpec> for RawSpec {
    fn from(s: &TilingSpec) -> Self {
        RawSpec {
            id: s.id,
            type_string: s.type_string.clone(),
            v0: s.v0,
            declared_orbit_count: s.declared_orbit_count,
            basis: RawBasis {
                a: coord_encode(&s.basis_a),
                b: coord_encode(&s.basis_b),
            },
            vertices: s
                .vertices
                .iter()
                .map(|v| RawVertex {
                    pos: [fmt_rational(v.pos[0]), fmt_rational(v.pos[1])],
                    vtype: v.vtype.clone(),
                })
                .collect(),
            edges: s
                .edges
                .iter()
                .map(|e| (e.i, e.j, [e.offset.0, e.offset.1]))
                .collect(),
            point_group: s
                .point_group
                .iter()
                .map(|p| RawSymmetry {
                    label: p.label.clone(),
                    linear: p.linear.rows(),
                    translation: [
                        fmt_rational(p.translation[0]),
                        fmt_rational(p.translation[1]),
                    ],
                })
                .collect(),
        }
    }
}

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        line: 0,
        column: 0,
        msg: msg.into(),
    }
}

/// Parses "n/d" or "n" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Rational64::from_integer),
    }
}

fn parse_coord(path: &str, v: [[i64; 4]; 2]) -> Result<ExactCoord> {
    let x =
        QSqrt3::decode(v[0]).ok_or_else(|| schema(&format!("{path}[0]"), "zero denominator"))?;
    let y =
        QSqrt3::decode(v[1]).ok_or_else(|| schema(&format!("{path}[1]"), "zero denominator"))?;
    Ok(ExactCoord::new(x, y))
}

fn parse_point(path: &str, p: &[String; 2]) -> Result<LatticePoint> {
    let mut out = [Rational64::zero(); 2];
    for (k, s) in p.iter().enumerate() {
        out[k] = parse_rational(s).ok_or_else(|| {
            schema(
                &format!("{path}[{k}]"),
                format!("'{s}' is not a rational n/d"),
            )
        })?;
    }
    Ok(out)
}

/// Parses a tiling document. Validation is a separate step.
pub fn load_spec(text: &str) -> Result<TilingSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Schema {
            path,
            line: inner.line(),
            column: inner.column(),
            msg: inner.to_string(),
        }
    })?;
    let basis_a = parse_coord("basis.A", raw.basis.a)?;
    let basis_b = parse_coord("basis.B", raw.basis.b)?;
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for (k, v) in raw.vertices.iter().enumerate() {
        let pos = parse_point(&format!("vertices[{k}].pos"), &v.pos)?;
        if pos
            .iter()
            .any(|c| *c < Rational64::zero() || *c >= Rational64::one())
        {
            return Err(Error::Invariant(format!(
                "vertices[{k}].pos ({}, {}) lies outside [0,1)^2",
                pos[0], pos[1]
            )));
        }
        vertices.push(Vertex {
            pos,
            vtype: v.vtype.clone(),
        });
    }
    let edges = raw
        .edges
        .iter()
        .map(|&(i, j, m)| Edge {
            i,
            j,
            offset: (m[0], m[1]),
        })
        .collect();
    let mut point_group = Vec::with_capacity(raw.point_group.len());
    for (k, p) in raw.point_group.iter().enumerate() {
        let t = parse_point(&format!("point_group[{k}].translation"), &p.translation)?;
        point_group.push(AffineSymmetry::new(
            p.label.clone(),
            IntMatrix2::from_rows(p.linear),
            t,
        )?);
    }
    Ok(TilingSpec {
        id: raw.id,
        type_string: raw.type_string,
        basis_a,
        basis_b,
        vertices,
        edges,
        point_group,
        declared_orbit_count: raw.declared_orbit_count,
        v0: raw.v0,
    })
}

macro_rules! builtin_sources {
    ($($f:literal),*) => {
        [$(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/tilings/", $f))),*]
    };
}

const BUILTIN_SOURCES: [&str; 27] = builtin_sources!(
    "E01.json", "E02.json", "E03.json", "E04.json", "E05.json", "E06.json", "E07.json", "E08.json",
    "E09.json", "E10.json", "E11.json", "E12.json", "E13.json", "E14.json", "E15.json", "E16.json",
    "E17.json", "E18.json", "E19.json", "E20.json", "E21.json", "E22.json", "E23.json", "E24.json",
    "E25.json", "E26.json", "E27.json"
);

/// The embedded specs for E1 through E27, in id order.
pub fn builtin_specs() -> &'static [TilingSpec] {
    static SPECS: OnceLock<Vec<TilingSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        BUILTIN_SOURCES
            .iter()
            .map(|src| load_spec(src).expect("embedded tiling data parses"))
            .collect()
    })
}

pub fn builtin_spec(id: u32) -> Result<&'static TilingSpec> {
    if !(1..=27).contains(&id) {
        return Err(Error::Domain(format!("tiling id {id} is outside 1..=27")));
    }
    Ok(&builtin_specs()[id as usize - 1])
}

/// The 27 specs in use: the embedded ones, optionally overridden by id.
#[derive(Debug, Clone)]
pub struct Catalog {
    specs: Vec<TilingSpec>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::builtin()
    }
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog {
            specs: builtin_specs().to_vec(),
        }
    }

    /// Loads every `*.json` file in `dir` and replaces the spec with the same id.
    pub fn with_overrides(dir: &Path) -> Result<Self> {
        let mut cat = Catalog::builtin();
        let entries =
            std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let spec = load_spec(&text).map_err(|e| match e {
                Error::Schema {
                    path: p,
                    line,
                    column,
                    msg,
                } => Error::Schema {
                    path: format!("{}: {p}", path.display()),
                    line,
                    column,
                    msg,
                },
                other => other,
            })?;
            cat.replace(spec)?;
        }
        Ok(cat)
    }

    pub fn replace(&mut self, spec: TilingSpec) -> Result<()> {
        if !(1..=27).contains(&spec.id) {
            return Err(Error::Domain(format!(
                "tiling id {} is outside 1..=27",
                spec.id
            )));
        }
        let k = spec.id as usize - 1;
        self.specs[k] = spec;
        Ok(())
    }

    pub fn spec(&self, id: u32) -> Result<&TilingSpec> {
        if !(1..=27).contains(&id) {
            return Err(Error::Domain(format!("tiling id {id} is outside 1..=27")));
        }
        Ok(&self.specs[id as usize - 1])
    }

    pub fn specs(&self) -> &[TilingSpec] {
        &self.specs
    }
}
