//! Isotropy groups of covers and classification of covers up to isomorphism.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::lattice::{conjugation_integral, hnf_reduce, HnfMatrix};
use crate::tilings::TilingSpec;

/// Point-group elements of a tiling that descend to a given cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropyGroup {
    /// Indices into the spec's point group.
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub order: usize,
}

impl IsotropyGroup {
    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }
}

pub fn isotropy(spec: &TilingSpec, m: &HnfMatrix) -> IsotropyGroup {
    let members: Vec<usize> = spec
        .point_group
        .iter()
        .enumerate()
        .filter(|(_, s)| conjugation_integral(&s.linear, m))
        .map(|(k, _)| k)
        .collect();
    IsotropyGroup {
        labels: members
            .iter()
            .map(|&k| spec.point_group[k].label.clone())
            .collect(),
        order: members.len(),
        members,
    }
}

fn sort_canonical(v: &mut Vec<HnfMatrix>) {
    v.sort_by_key(HnfMatrix::canonical_key);
    v.dedup();
}

/// Distinct HNF of S·M over the point group, sorted by (d, b, a).
pub fn orbit_of_matrix(spec: &TilingSpec, m: &HnfMatrix) -> Result<Vec<HnfMatrix>> {
    let mm = m.matrix();
    let mut out = spec
        .point_group
        .iter()
        .map(|s| hnf_reduce(&s.linear.mul(&mm)))
        .collect::<Result<Vec<_>>>()?;
    sort_canonical(&mut out);
    Ok(out)
}

/// One isomorphism class of covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    pub representative: HnfMatrix,
    #[serde(skip)]
    pub members: Vec<HnfMatrix>,
    pub isotropy_order: usize,
    pub isotropy_labels: Vec<String>,
}

/// Partitions `mats` into point-group orbits. Classes are sorted by the
/// (d, b, a) key of their least member, which is also the representative.
pub fn classify_up_to_iso(spec: &TilingSpec, mats: &[HnfMatrix]) -> Result<Vec<IsoClass>> {
    if let Some(first) = mats.first() {
        if let Some(bad) = mats.iter().find(|m| m.det() != first.det()) {
            return domain(format!(
                "classify_up_to_iso: mixed determinants {} and {}",
                first.det(),
                bad.det()
            ));
        }
    }
    let mut sorted = mats.to_vec();
    sort_canonical(&mut sorted);
    let mut class_of: HashMap<HnfMatrix, usize> = HashMap::new();
    let mut classes: Vec<IsoClass> = Vec::new();
    for m in &sorted {
        if class_of.contains_key(m) {
            continue;
        }
        let idx = classes.len();
        let orbit = orbit_of_matrix(spec, m)?;
        let members: Vec<HnfMatrix> = orbit
            .into_iter()
            .filter(|x| {
                sorted
                    .binary_search_by_key(&x.canonical_key(), HnfMatrix::canonical_key)
                    .is_ok()
            })
            .collect();
        for x in &members {
            class_of.insert(*x, idx);
        }
        let iso = isotropy(spec, m);
        classes.push(IsoClass {
            representative: *m,
            members,
            isotropy_order: iso.order,
            isotropy_labels: iso.labels,
        });
    }
    Ok(classes)
}

/// True iff some point-group element carries `m1` to `m2`.
pub fn isomorphic(spec: &TilingSpec, m1: &HnfMatrix, m2: &HnfMatrix) -> Result<bool> {
    Ok(orbit_of_matrix(spec, m1)?.contains(m2))
}
