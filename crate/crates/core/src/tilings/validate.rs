//! Self-validation of tiling data: symmetry closure, face cycles, orbits.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{expected_point_group_order, AffineSymmetry, TilingSpec, VertexType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub id: u32,
    pub checks: Vec<CheckOutcome>,
    pub orbit_count: usize,
    pub point_group_order: usize,
    pub origin_stabilizer_order: usize,
    /// Face sizes around each vertex in counterclockwise order.
    pub face_cycles: Vec<Vec<u32>>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(name: &'static str, failures: Vec<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failures.is_empty(),
        failures,
    }
}

type Dart = (usize, (i64, i64));

fn darts(spec: &TilingSpec) -> Vec<Vec<Dart>> {
    let mut out = vec![Vec::new(); spec.vertices.len()];
    for e in &spec.edges {
        if e.i < out.len() && e.j < out.len() {
            out[e.i].push((e.j, e.offset));
            out[e.j].push((e.i, (-e.offset.0, -e.offset.1)));
        }
    }
    out
}

fn structure(spec: &TilingSpec) -> Vec<String> {
    let mut f = Vec::new();
    let n = spec.vertices.len();
    if n != spec.v0 {
        f.push(format!("{n} vertices listed but v0 = {}", spec.v0));
    }
    for (k, e) in spec.edges.iter().enumerate() {
        if e.i >= n || e.j >= n {
            f.push(format!("edge {k} refers to a missing vertex"));
        }
        if e.i == e.j && e.offset == (0, 0) {
            f.push(format!("edge {k} is a loop"));
        }
    }
    let zero = Rational64::zero();
    let one = Rational64::one();
    for (k, v) in spec.vertices.iter().enumerate() {
        if v.pos.iter().any(|c| *c < zero || *c >= one) {
            f.push(format!("vertex {k} lies outside [0,1)^2"));
        }
    }
    let parts = match VertexType::parse_combined(&spec.type_string) {
        Ok(p) => p,
        Err(e) => {
            f.push(e.to_string());
            return f;
        }
    };
    let mut distinct: Vec<Vec<u32>> = Vec::new();
    for (k, v) in spec.vertices.iter().enumerate() {
        match VertexType::parse(&v.vtype) {
            Ok(t) => {
                if !parts.iter().any(|p| p.equivalent(&t)) {
                    f.push(format!(
                        "vertex {k} type {} is not part of {}",
                        v.vtype, spec.type_string
                    ));
                }
                let c = t.canonical();
                if !distinct.contains(&c) {
                    distinct.push(c);
                }
            }
            Err(e) => f.push(format!("vertex {k}: {e}")),
        }
    }
    let expected = if spec.is_archimedean() {
        1
    } else {
        distinct.len()
    };
    if spec.declared_orbit_count != expected {
        f.push(format!(
            "declared_orbit_count {} but the declared vertex types call for {expected}",
            spec.declared_orbit_count
        ));
    }
    let mut seen = HashSet::new();
    for s in &spec.point_group {
        if !seen.insert(s.label.as_str()) {
            f.push(format!("duplicate symmetry label {}", s.label));
        }
    }
    f
}

fn symmetry_closure(spec: &TilingSpec) -> Vec<String> {
    let mut f = Vec::new();
    let edge_set: HashSet<(usize, usize, (i64, i64))> = spec
        .edges
        .iter()
        .flat_map(|e| [(e.i, e.j, e.offset), (e.j, e.i, (-e.offset.0, -e.offset.1))])
        .collect();
    for sym in &spec.point_group {
        let act = match spec.vertex_action(sym) {
            Ok(a) => a,
            Err(e) => {
                f.push(e.to_string());
                continue;
            }
        };
        for (i, &(j, _)) in act.iter().enumerate() {
            let (a, b) = (&spec.vertices[i].vtype, &spec.vertices[j].vtype);
            let same = match (VertexType::parse(a), VertexType::parse(b)) {
                (Ok(x), Ok(y)) => x.equivalent(&y),
                _ => false,
            };
            if !same {
                f.push(format!(
                    "{} sends vertex {i} ({a}) to vertex {j} ({b})",
                    sym.label
                ));
            }
        }
        let mut images = HashSet::new();
        for (k, e) in spec.edges.iter().enumerate() {
            let (pi, mi) = act[e.i];
            let (pj, mj) = act[e.j];
            let lm = sym.linear.apply(e.offset);
            let off = (mj.0 + lm.0 - mi.0, mj.1 + lm.1 - mi.1);
            if !edge_set.contains(&(pi, pj, off)) {
                f.push(format!(
                    "{} sends edge {k} to ({pi}, {pj}, [{}, {}]), which is not an edge",
                    sym.label, off.0, off.1
                ));
            }
            let key = if (pi, off) <= (pj, (-off.0, -off.1)) {
                (pi, pj, off)
            } else {
                (pj, pi, (-off.0, -off.1))
            };
            images.insert(key);
        }
        if images.len() != spec.edges.len() {
            f.push(format!("{} is not injective on edges", sym.label));
        }
    }
    f
}

fn group_closure(spec: &TilingSpec) -> Vec<String> {
    let mut f = Vec::new();
    let g = &spec.point_group;
    if !g.iter().any(|s| s.same_coset(&AffineSymmetry::identity())) {
        f.push("point group lacks the identity".into());
    }
    for x in g {
        for y in g {
            let c = x.compose(y);
            if !g.iter().any(|z| z.same_coset(&c)) {
                f.push(format!(
                    "{} * {} is not in the point group",
                    x.label, y.label
                ));
            }
        }
    }
    f
}

/// Face sizes around every vertex, walking faces with counterclockwise
/// angular order of the edges in the Euclidean embedding.
fn face_cycles(spec: &TilingSpec, failures: &mut Vec<String>) -> Vec<Vec<u32>> {
    let (ax, ay) = spec.basis_a.to_f64();
    let (bx, by) = spec.basis_b.to_f64();
    let to_f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    let euc = |k: usize, off: (i64, i64)| {
        let p = spec.vertices[k].pos;
        let (u, v) = (to_f(p[0]) + off.0 as f64, to_f(p[1]) + off.1 as f64);
        (u * ax + v * bx, u * ay + v * by)
    };
    let mut nbrs = darts(spec);
    for (i, list) in nbrs.iter_mut().enumerate() {
        let o = euc(i, (0, 0));
        let angle = |d: &Dart| {
            let p = euc(d.0, d.1);
            (p.1 - o.1).atan2(p.0 - o.0).rem_euclid(2.0 * PI)
        };
        list.sort_by(|x, y| angle(x).total_cmp(&angle(y)));
        for w in list.windows(2) {
            if (angle(&w[1]) - angle(&w[0])).abs() < 1e-9 {
                failures.push(format!("vertex {i}: two edges share a direction"));
            }
        }
    }
    let position: Vec<HashMap<Dart, usize>> = nbrs
        .iter()
        .map(|l| l.iter().enumerate().map(|(k, d)| (*d, k)).collect())
        .collect();
    let mut cycles = Vec::with_capacity(nbrs.len());
    for i in 0..nbrs.len() {
        let mut sizes = Vec::new();
        for &(j, m) in &nbrs[i] {
            // dart = (tail, tail offset, head, head offset relative to tail)
            let start = (i, (0i64, 0i64), j, m);
            let mut cur = start;
            let mut len = 0u32;
            loop {
                len += 1;
                let (tail, toff, head, rel) = cur;
                let hoff = (toff.0 + rel.0, toff.1 + rel.1);
                let Some(&k) = position[head].get(&(tail, (-rel.0, -rel.1))) else {
                    failures.push(format!("vertex {head}: missing reverse dart"));
                    break;
                };
                let l = nbrs[head].len();
                let (nj, nm) = nbrs[head][(k + l - 1) % l];
                cur = (head, hoff, nj, nm);
                if cur == start {
                    break;
                }
                if len > 64 {
                    failures.push(format!("vertex {i}: face walk does not close"));
                    break;
                }
            }
            sizes.push(len);
        }
        cycles.push(sizes);
    }
    cycles
}

fn orbit_count(spec: &TilingSpec) -> usize {
    let n = spec.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    if let Ok(actions) = spec.all_vertex_actions() {
        for act in actions {
            for (i, &(j, _)) in act.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Runs every check and collects all failures; never stops early.
pub fn validate(spec: &TilingSpec) -> ValidationReport {
    let mut checks = vec![outcome("structure", structure(spec))];
    checks.push(outcome("symmetry-closure", symmetry_closure(spec)));
    checks.push(outcome("group-closure", group_closure(spec)));

    let mut face_failures = Vec::new();
    let cycles = face_cycles(spec, &mut face_failures);
    for (k, (cyc, v)) in cycles.iter().zip(&spec.vertices).enumerate() {
        let got = VertexType::from_faces(cyc.clone());
        match VertexType::parse(&v.vtype) {
            Ok(t) if t.equivalent(&got) => {}
            _ => face_failures.push(format!(
                "vertex {k}: face cycle {got} but declared {}",
                v.vtype
            )),
        }
    }
    checks.push(outcome("face-cycles", face_failures));

    let orbits = orbit_count(spec);
    let mut orbit_failures = Vec::new();
    if orbits != spec.declared_orbit_count {
        orbit_failures.push(format!(
            "{orbits} vertex orbits but {} declared",
            spec.declared_orbit_count
        ));
    }
    checks.push(outcome("orbit-count", orbit_failures));

    let stab = spec.origin_stabilizer_order();
    let mut order_failures = Vec::new();
    if let Some(expected) = expected_point_group_order(spec.id) {
        if stab != expected {
            order_failures.push(format!(
                "origin stabilizer has order {stab}, expected {expected}"
            ));
        }
    }
    checks.push(outcome("point-group-order", order_failures));

    ValidationReport {
        id: spec.id,
        checks,
        orbit_count: orbits,
        point_group_order: spec.point_group.len(),
        origin_stabilizer_order: stab,
        face_cycles: cycles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tilings::builtin_spec;

    #[test]
    fn first_and_archimedean_examples() {
        let r = validate(builtin_spec(1).unwrap());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.orbit_count, 2);
        let r = validate(builtin_spec(21).unwrap());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.orbit_count, 1);
    }

    #[test]
    fn perturbed_vertex_breaks_symmetry_closure() {
        let mut s = builtin_spec(1).unwrap().clone();
        s.vertices[0].pos[0] += Rational64::new(1, 1000);
        let r = validate(&s);
        assert!(!r.check("symmetry-closure").unwrap().passed);
    }

    #[test]
    fn wrong_declared_type_breaks_face_check() {
        let mut s = builtin_spec(21).unwrap().clone();
        s.vertices[0].vtype = "[3^1,4^2,6^1]".into();
        let r = validate(&s);
        assert!(!r.check("face-cycles").unwrap().passed);
    }

    #[test]
    fn removed_edge_is_detected() {
        let mut s = builtin_spec(24).unwrap().clone();
        s.edges.pop();
        assert!(!validate(&s).passed());
    }

    #[test]
    fn wrong_orbit_count_is_detected() {
        let mut s = builtin_spec(5).unwrap().clone();
        s.point_group.retain(|g| g.label == "id");
        let r = validate(&s);
        assert!(!r.check("orbit-count").unwrap().passed);
    }
}
