//! Counting functions Φ_ℓ(v), the geometric orbit oracle, and table output.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::lattice::{hnf_enumerate, HnfMatrix};
use crate::numtheory::{f1, f2, f3, f4, f5, f6, g, g1, g2, lambda27, lambda27_corrected, sigma};
use crate::symmetry::{classify_up_to_iso, isotropy};
use crate::tilings::{Catalog, TilingSpec, VertexAction, V0};

/// Default limit on the number of cover vertices the oracle will build.
pub const DEFAULT_CAP: u64 = 5000;

/// Types whose published formula differs from the oracle-confirmed one.
pub const AUDIT_WHITELIST: [u32; 4] = [3, 4, 9, 27];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MapTypeId(u32);

impl MapTypeId {
    pub fn new(ell: u32) -> Result<Self> {
        if !(1..=27).contains(&ell) {
            return domain(format!("map type {ell} is outside 1..=27"));
        }
        Ok(MapTypeId(ell))
    }

    pub fn ell(self) -> u32 {
        self.0
    }

    pub fn v0(self) -> u64 {
        V0[self.0 as usize - 1] as u64
    }

    pub fn all() -> impl Iterator<Item = MapTypeId> {
        (1..=27).map(MapTypeId)
    }

    /// Sheet count for v vertices, if v is a multiple of v0.
    pub fn sheets(self, v: u64) -> Option<u64> {
        (v > 0 && v.is_multiple_of(self.v0())).then(|| v / self.v0())
    }
}

fn exact_div(num: i64, den: i64, ell: u32, n: u64) -> Result<u64> {
    if num % den != 0 || num < 0 {
        return Err(Error::FormulaDefect(format!(
            "type {ell} at n = {n}: {num}/{den} is not a nonnegative integer"
        )));
    }
    Ok((num / den) as u64)
}

fn shipped_at(ell: u32, n: u64) -> Result<u64> {
    let s = |f: fn(u64) -> Result<u64>| f(n).map(|x| x as i64);
    match ell {
        1 => f1(n),
        2 | 5 | 7 | 11 | 14 => exact_div(s(f1)? + s(f5)?, 2, ell, n),
        3 | 8 | 12 | 13 => exact_div(s(sigma)? + s(f3)?, 2, ell, n),
        4 | 15 => exact_div(s(sigma)? + s(g)?, 2, ell, n),
        9 => f6(n),
        10 | 18 => g(n),
        19 => f3(n),
        6 | 17 | 20 => f5(n),
        16 => exact_div(s(f2)? + s(f6)?, 2, ell, n),
        21 | 22 | 24 => exact_div(s(f3)? - s(f5)?, 1, ell, n),
        23 => exact_div(s(sigma)? - s(g)? - s(f2)? + s(f3)?, 4, ell, n),
        25 => Ok(0),
        26 => exact_div(s(f1)? - s(f5)?, 2, ell, n),
        27 => lambda27_corrected(n).and_then(|x| exact_div(x, 1, ell, n)),
        _ => domain(format!("map type {ell} is outside 1..=27")),
    }
}

fn published_formula_at(ell: u32, n: u64) -> Result<u64> {
    let s = |f: fn(u64) -> Result<u64>| f(n).map(|x| x as i64);
    match ell {
        3 => exact_div(s(sigma)? + s(g2)?, 2, ell, n),
        4 => exact_div(s(sigma)? + s(g1)?, 2, ell, n),
        9 => g(n),
        27 => lambda27(n).and_then(|x| exact_div(x, 1, ell, n)),
        _ => shipped_at(ell, n),
    }
}

/// Human-readable formula of the shipped closed form, in terms of n = v / v0.
pub fn formula_text(ell: MapTypeId) -> &'static str {
    match ell.0 {
        1 => "f1(n)",
        2 | 5 | 7 | 11 | 14 => "(f1(n) + f5(n))/2",
        3 | 8 | 12 | 13 => "(sigma(n) + f3(n))/2",
        4 | 15 => "(sigma(n) + g(n))/2",
        9 => "f6(n)",
        10 | 18 => "g(n)",
        19 => "f3(n)",
        6 | 17 | 20 => "f5(n)",
        16 => "(f2(n) + f6(n))/2",
        21 | 22 | 24 => "f3(n) - f5(n)",
        23 => "(sigma(n) - g(n) - f2(n) + f3(n))/4",
        25 => "0",
        26 => "(f1(n) - f5(n))/2",
        _ => "(g(n) - f6(n))/2 + (sigma(n) - g(n) - f4(n) - f2(n) + 2 f6(n))/4",
    }
}

/// The originally published formula where it differs from the shipped one.
pub fn published_formula_text(ell: MapTypeId) -> Option<&'static str> {
    match ell.0 {
        3 => Some("(sigma(n) + g2(n))/2"),
        4 => Some("(sigma(n) + g1(n))/2"),
        9 => Some("g(n)"),
        27 => Some("(g(n) - f6(n))/2 + (sigma(n) - g(n) - f4(n) - f2(n) + 2 f6(n))/2"),
        _ => None,
    }
}

/// Closed-form count of 2-uniform maps of type ℓ with v vertices, using the
/// oracle-confirmed formulas.
pub fn phi_closed(ell: MapTypeId, v: u64) -> Result<u64> {
    if v == 0 {
        return domain("vertex count must be positive");
    }
    match ell.sheets(v) {
        Some(n) => shipped_at(ell.0, n),
        None => Ok(0),
    }
}

/// Closed-form count using the originally published formulas. Errors with
/// `FormulaDefect` when a halved or quartered expression is not integral.
pub fn phi_published_formula(ell: MapTypeId, v: u64) -> Result<u64> {
    if v == 0 {
        return domain("vertex count must be positive");
    }
    match ell.sheets(v) {
        Some(n) => published_formula_at(ell.0, n),
        None => Ok(0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representative {
    pub hnf: HnfMatrix,
    pub isotropy: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    #[serde(rename = "type")]
    pub ell: MapTypeId,
    #[serde(rename = "vertices")]
    pub v: u64,
    #[serde(rename = "sheets")]
    pub n: Option<u64>,
    pub count_closed: u64,
    pub count_oracle: Option<u64>,
    pub representatives: Vec<Representative>,
    pub agreement: Option<bool>,
}

/// Orbit oracle for one tiling: vertex actions are computed once.
pub struct Oracle<'a> {
    spec: &'a TilingSpec,
    actions: Vec<VertexAction>,
    cap: u64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }

    fn roots(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

impl<'a> Oracle<'a> {
    pub fn new(spec: &'a TilingSpec, cap: u64) -> Result<Self> {
        Ok(Oracle {
            spec,
            actions: spec.all_vertex_actions()?,
            cap,
        })
    }

    pub fn spec(&self) -> &TilingSpec {
        self.spec
    }

    fn check_cap(&self, n: u64) -> Result<()> {
        let needed = n.saturating_mul(self.spec.v0 as u64);
        if needed > self.cap {
            return Err(Error::CapExceeded {
                needed,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Vertex orbits of E/K, K the column lattice of `m`, under translations
    /// and every point-group element that normalizes K.
    pub fn vertex_orbit_count(&self, m: &HnfMatrix) -> Result<usize> {
        let n = m.det() as u64;
        self.check_cap(n)?;
        let (a, d) = (m.a(), m.d());
        let cells = (a * d) as usize;
        let v0 = self.spec.vertices.len();
        let idx = |i: usize, (x, y): (i64, i64)| i * cells + (x * d + y) as usize;
        let mut uf = UnionFind::new(v0 * cells);
        for i in 0..v0 {
            for x in 0..a {
                for y in 0..d {
                    let here = idx(i, (x, y));
                    uf.union(here, idx(i, m.reduce(x + 1, y)));
                    uf.union(here, idx(i, m.reduce(x, y + 1)));
                }
            }
        }
        for k in isotropy(self.spec, m).members {
            let lin = &self.spec.point_group[k].linear;
            for (i, &(j, shift)) in self.actions[k].iter().enumerate() {
                for x in 0..a {
                    for y in 0..d {
                        let (u, w) = lin.apply((x, y));
                        let image = m.reduce(u + shift.0, w + shift.1);
                        uf.union(idx(i, (x, y)), idx(j, image));
                    }
                }
            }
        }
        Ok(uf.roots())
    }

    /// Isomorphism classes of n-sheeted covers with exactly two vertex orbits.
    pub fn two_orbit_classes(&self, n: u64) -> Result<Vec<Representative>> {
        self.check_cap(n)?;
        let mats = hnf_enumerate(n)?;
        let mut out = Vec::new();
        for class in classify_up_to_iso(self.spec, &mats)? {
            let orbits = self.vertex_orbit_count(&class.representative)?;
            if orbits < self.spec.declared_orbit_count {
                return Err(Error::Consistency(format!(
                    "E{}: cover {} has {orbits} vertex orbits, fewer than the tiling",
                    self.spec.id, class.representative
                )));
            }
            if orbits == 2 {
                out.push(Representative {
                    hnf: class.representative,
                    isotropy: class.isotropy_labels,
                });
            }
        }
        Ok(out)
    }
}

pub fn vertex_orbit_count(spec: &TilingSpec, m: &HnfMatrix) -> Result<usize> {
    Oracle::new(spec, u64::MAX)?.vertex_orbit_count(m)
}

/// Closed-form count only, without running the oracle.
pub fn phi_result(ell: MapTypeId, v: u64) -> Result<EnumerationResult> {
    Ok(EnumerationResult {
        ell,
        v,
        n: ell.sheets(v),
        count_closed: phi_closed(ell, v)?,
        count_oracle: None,
        representatives: Vec::new(),
        agreement: None,
    })
}

/// Enumerates every cover with v vertices, classifies up to isomorphism and
/// keeps the classes with exactly two vertex orbits.
pub fn phi_oracle(
    catalog: &Catalog,
    ell: MapTypeId,
    v: u64,
    cap: u64,
) -> Result<EnumerationResult> {
    let mut res = phi_result(ell, v)?;
    let reps = match res.n {
        Some(n) => Oracle::new(catalog.spec(ell.0)?, cap)?.two_orbit_classes(n)?,
        None => Vec::new(),
    };
    res.count_oracle = Some(reps.len() as u64);
    res.agreement = Some(reps.len() as u64 == res.count_closed);
    res.representatives = reps;
    Ok(res)
}

/// Published column values for n = 1..=10.
pub const PUBLISHED: [(u32, [u64; 10]); 24] = [
    (1, [1, 0, 1, 1, 0, 0, 2, 0, 1, 0]),
    (2, [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]),
    (5, [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]),
    (6, [1, 0, 1, 1, 0, 0, 0, 0, 1, 0]),
    (7, [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]),
    (8, [1, 2, 3, 5, 4, 7, 5, 10, 8, 10]),
    (9, [1, 3, 2, 5, 2, 6, 2, 7, 3, 6]),
    (10, [1, 3, 2, 5, 2, 6, 2, 7, 3, 6]),
    (11, [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]),
    (12, [1, 2, 3, 5, 4, 7, 5, 10, 8, 10]),
    (13, [1, 2, 3, 5, 4, 7, 5, 10, 8, 10]),
    (14, [1, 0, 1, 1, 0, 0, 1, 0, 1, 0]),
    (15, [1, 3, 3, 6, 4, 9, 5, 11, 8, 12]),
    (16, [1, 1, 0, 1, 1, 0, 0, 1, 1, 1]),
    (17, [1, 0, 1, 1, 0, 0, 0, 0, 1, 0]),
    (18, [1, 3, 2, 5, 2, 6, 2, 7, 3, 6]),
    (19, [1, 1, 2, 3, 2, 2, 2, 5, 3, 2]),
    (20, [1, 0, 1, 1, 0, 0, 0, 0, 1, 0]),
    (21, [0, 1, 1, 2, 2, 2, 2, 5, 2, 2]),
    (22, [0, 1, 1, 2, 2, 2, 2, 5, 2, 2]),
    (23, [0, 0, 1, 1, 1, 2, 2, 3, 3, 3]),
    (24, [0, 1, 1, 2, 2, 2, 2, 5, 2, 2]),
    (26, [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
    (27, [0, 0, 0, 0, 0, 2, 2, 2, 4, 4]),
];

pub fn published(ell: MapTypeId, n: u64) -> Option<u64> {
    let (_, col) = PUBLISHED.iter().find(|(l, _)| *l == ell.0)?;
    col.get((n as usize).checked_sub(1)?).copied()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub v: u64,
    pub phi: u64,
    pub published: Option<u64>,
    /// Index into the table's footnotes when the value differs from the
    /// published one.
    pub footnote: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableColumn {
    #[serde(rename = "type")]
    pub ell: MapTypeId,
    pub v0: u64,
    pub formula: &'static str,
    pub cells: Vec<TableCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub rows: u64,
    pub columns: Vec<TableColumn>,
    pub footnotes: Vec<String>,
}

impl Table {
    /// Cells that carry a published value, and how many of them match.
    pub fn published_agreement(&self) -> (usize, usize) {
        let mut total = 0;
        let mut same = 0;
        for c in self.columns.iter().flat_map(|c| &c.cells) {
            if let Some(p) = c.published {
                total += 1;
                same += usize::from(p == c.phi);
            }
        }
        (total, same)
    }

    /// Text layout of (v, Φ) column pairs, seven types per band.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for band in self.columns.chunks(7) {
            let mut header = String::new();
            for c in band {
                let _ = write!(header, "{:>6} {:>7}  ", "v", format!("Phi{}", c.ell.ell()));
            }
            let _ = writeln!(s, "{}", header.trim_end());
            for r in 0..self.rows as usize {
                let mut line = String::new();
                for c in band {
                    let cell = &c.cells[r];
                    let mark = match cell.footnote {
                        Some(k) => format!("{}[{}]", cell.phi, k + 1),
                        None => cell.phi.to_string(),
                    };
                    let _ = write!(line, "{:>6} {:>7}  ", cell.v, mark);
                }
                let _ = writeln!(s, "{}", line.trim_end());
            }
            s.push('\n');
        }
        for (k, f) in self.footnotes.iter().enumerate() {
            let _ = writeln!(s, "[{}] {f}", k + 1);
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["type", "v", "phi", "published", "footnote"])
            .map_err(io)?;
        for c in &self.columns {
            for cell in &c.cells {
                w.write_record([
                    c.ell.ell().to_string(),
                    cell.v.to_string(),
                    cell.phi.to_string(),
                    cell.published.map(|p| p.to_string()).unwrap_or_default(),
                    cell.footnote
                        .map(|k| (k + 1).to_string())
                        .unwrap_or_default(),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn footnote_for(ell: MapTypeId, cells: usize) -> String {
    let mut s = format!(
        "Phi{}: {cells} published value(s) differ from the orbit oracle, which the shipped form {} reproduces",
        ell.ell(),
        formula_text(ell),
    );
    if let Some(p) = published_formula_text(ell) {
        let _ = write!(s, "; the published formula is {p}");
    }
    s.push_str(". Run `verify` for the per-cover audit.");
    s
}

/// Φ_ℓ at the first `rows` multiples of v0 for each requested type.
pub fn table(ells: &[MapTypeId], rows: u64) -> Result<Table> {
    if rows == 0 {
        return domain("table needs at least one row");
    }
    let columns = ells
        .par_iter()
        .map(|&ell| {
            let v0 = ell.v0();
            let cells = (1..=rows)
                .map(|n| {
                    Ok(TableCell {
                        v: n * v0,
                        phi: phi_closed(ell, n * v0)?,
                        published: published(ell, n),
                        footnote: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TableColumn {
                ell,
                v0,
                formula: formula_text(ell),
                cells,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table {
        rows,
        columns,
        footnotes: Vec::new(),
    };
    for col in &mut table.columns {
        let differs = |c: &TableCell| c.published.is_some_and(|p| p != c.phi);
        let count = col.cells.iter().filter(|c| differs(c)).count();
        if count == 0 {
            continue;
        }
        table.footnotes.push(footnote_for(col.ell, count));
        let k = table.footnotes.len() - 1;
        for cell in col.cells.iter_mut().filter(|c| differs(c)) {
            cell.footnote = Some(k);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    #[serde(rename = "type")]
    pub ell: MapTypeId,
    pub sheets: u64,
    pub vertices: u64,
    pub formula: &'static str,
    /// Closed-form value, or the defect message when it is not integral.
    pub closed: std::result::Result<u64, String>,
    pub oracle: u64,
    pub representatives: Vec<Representative>,
    pub whitelisted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityDefect {
    pub expression: &'static str,
    pub sheets: u64,
    pub value: i64,
    pub modulus: i64,
    /// Whether the expression is one of the shipped formulas.
    pub shipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub max_sheets: u64,
    pub pairs_checked: usize,
    /// Shipped closed form against the oracle.
    pub discrepancies: Vec<Discrepancy>,
    /// Published formulas against the oracle.
    pub audits: Vec<Discrepancy>,
    /// Published table values against the oracle.
    pub table_audits: Vec<Discrepancy>,
    pub parity_defects: Vec<ParityDefect>,
}

impl CrosscheckReport {
    /// Disagreements that are not explained by the audit whitelist.
    pub fn unexplained(&self) -> usize {
        self.discrepancies.len()
            + self.audits.iter().filter(|a| !a.whitelisted).count()
            + self.table_audits.iter().filter(|a| !a.whitelisted).count()
            + self.parity_defects.iter().filter(|p| p.shipped).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "checked {} (type, n) pairs with n <= {}",
            self.pairs_checked, self.max_sheets
        );
        let section = |s: &mut String, title: &str, list: &[Discrepancy]| {
            let _ = writeln!(s, "{title}: {}", list.len());
            for d in list {
                let closed = match &d.closed {
                    Ok(x) => x.to_string(),
                    Err(e) => format!("defect ({e})"),
                };
                let reps: Vec<String> = d
                    .representatives
                    .iter()
                    .map(|r| format!("{} {{{}}}", r.hnf, r.isotropy.join(",")))
                    .collect();
                let _ = writeln!(
                    s,
                    "  type {} n={} v={}: {} = {}, oracle {}{}",
                    d.ell.ell(),
                    d.sheets,
                    d.vertices,
                    d.formula,
                    closed,
                    d.oracle,
                    if d.whitelisted { " (whitelisted)" } else { "" }
                );
                if !reps.is_empty() {
                    let _ = writeln!(s, "    representatives: {}", reps.join("; "));
                }
            }
        };
        section(
            &mut s,
            "shipped formula vs oracle discrepancies",
            &self.discrepancies,
        );
        section(&mut s, "published formula vs oracle audits", &self.audits);
        section(
            &mut s,
            "published table vs oracle audits",
            &self.table_audits,
        );
        let _ = writeln!(s, "parity defects: {}", self.parity_defects.len());
        for p in &self.parity_defects {
            let _ = writeln!(
                s,
                "  {} at n={} is {} (not divisible by {}){}",
                p.expression,
                p.sheets,
                p.value,
                p.modulus,
                if p.shipped {
                    ""
                } else {
                    " (published formula only)"
                }
            );
        }
        s
    }
}

type Expr = fn(u64) -> Result<i64>;

fn parity_expressions() -> Vec<(&'static str, i64, bool, Expr)> {
    fn v(f: fn(u64) -> Result<u64>, n: u64) -> Result<i64> {
        f(n).map(|x| x as i64)
    }
    vec![
        ("f1+f5", 2, true, |n| Ok(v(f1, n)? + v(f5, n)?)),
        ("sigma+f3", 2, true, |n| Ok(v(sigma, n)? + v(f3, n)?)),
        ("sigma+g", 2, true, |n| Ok(v(sigma, n)? + v(g, n)?)),
        ("f2+f6", 2, true, |n| Ok(v(f2, n)? + v(f6, n)?)),
        ("f1-f5", 2, true, |n| Ok(v(f1, n)? - v(f5, n)?)),
        ("sigma-g-f2+f3", 4, true, |n| {
            Ok(v(sigma, n)? - v(g, n)? - v(f2, n)? + v(f3, n)?)
        }),
        ("g-f6", 2, true, |n| Ok(v(g, n)? - v(f6, n)?)),
        ("sigma-g-f4-f2+2f6", 4, true, |n| {
            Ok(v(sigma, n)? - v(g, n)? - v(f4, n)? - v(f2, n)? + 2 * v(f6, n)?)
        }),
        ("sigma+g1", 2, false, |n| Ok(v(sigma, n)? + v(g1, n)?)),
        ("sigma+g2", 2, false, |n| Ok(v(sigma, n)? + v(g2, n)?)),
    ]
}

/// Every halved or quartered expression that fails to be integral for n up
/// to `max_n`.
pub fn parity_defects(max_n: u64) -> Result<Vec<ParityDefect>> {
    let mut out = Vec::new();
    for (expression, modulus, shipped, f) in parity_expressions() {
        for n in 1..=max_n {
            let value = f(n)?;
            if value % modulus != 0 {
                out.push(ParityDefect {
                    expression,
                    sheets: n,
                    value,
                    modulus,
                    shipped,
                });
            }
        }
    }
    Ok(out)
}

/// Compares closed forms with the oracle for every type and every n up to
/// `max_sheets`. Disagreements are data, not errors.
pub fn crosscheck(catalog: &Catalog, max_sheets: u64, cap: u64) -> Result<CrosscheckReport> {
    let pairs: Vec<(MapTypeId, u64)> = MapTypeId::all()
        .flat_map(|ell| (1..=max_sheets).map(move |n| (ell, n)))
        .collect();
    let oracles = MapTypeId::all()
        .map(|ell| Oracle::new(catalog.spec(ell.ell())?, cap))
        .collect::<Result<Vec<_>>>()?;
    let results = pairs
        .par_iter()
        .map(|&(ell, n)| {
            let reps = oracles[ell.ell() as usize - 1].two_orbit_classes(n)?;
            let oracle = reps.len() as u64;
            let v = n * ell.v0();
            let make = |closed: Result<u64>, formula, whitelisted| {
                let closed = closed.map_err(|e| e.to_string());
                (closed != Ok(oracle)).then(|| Discrepancy {
                    ell,
                    sheets: n,
                    vertices: v,
                    formula,
                    closed,
                    oracle,
                    representatives: reps.clone(),
                    whitelisted,
                })
            };
            let shipped = make(shipped_at(ell.ell(), n), formula_text(ell), false);
            let audit = published_formula_text(ell).and_then(|text| {
                make(
                    published_formula_at(ell.ell(), n),
                    text,
                    AUDIT_WHITELIST.contains(&ell.ell()),
                )
            });
            let whitelisted = AUDIT_WHITELIST.contains(&ell.ell());
            let cell = published(ell, n).and_then(|p| make(Ok(p), "published table", whitelisted));
            Ok((shipped, audit, cell))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = CrosscheckReport {
        max_sheets,
        pairs_checked: pairs.len(),
        discrepancies: Vec::new(),
        audits: Vec::new(),
        table_audits: Vec::new(),
        parity_defects: parity_defects(200.max(max_sheets))?,
    };
    for (shipped, audit, cell) in results {
        report.discrepancies.extend(shipped);
        report.audits.extend(audit);
        report.table_audits.extend(cell);
    }
    Ok(report)
}
