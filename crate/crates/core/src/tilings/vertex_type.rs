//! Vertex types such as `[3^4,6^1]`: cyclic sequences of face sizes.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexType {
    faces: Vec<u32>,
}

impl VertexType {
    pub fn from_faces(faces: Vec<u32>) -> Self {
        VertexType { faces }
    }

    /// Parses `[p1^k1,p2^k2,...]`; a missing exponent means 1.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("malformed vertex type '{s}'"));
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut faces = Vec::new();
        for part in inner.split(',') {
            let (p, k) = match part.split_once('^') {
                Some((p, k)) => (p, k),
                None => (part, "1"),
            };
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            if p < 3 || k == 0 {
                return Err(bad());
            }
            faces.extend(std::iter::repeat_n(p, k));
        }
        Ok(VertexType { faces })
    }

    /// Splits a combined label such as `[3^6;3^4,6^1]` into its parts.
    pub fn parse_combined(s: &str) -> Result<Vec<Self>> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Domain(format!("malformed type string '{s}'")))?;
        inner
            .split(';')
            .map(|p| VertexType::parse(&format!("[{p}]")))
            .collect()
    }

    pub fn faces(&self) -> &[u32] {
        &self.faces
    }

    /// Lexicographically least rotation of the sequence or its reversal.
    pub fn canonical(&self) -> Vec<u32> {
        let n = self.faces.len();
        let mut best: Option<Vec<u32>> = None;
        let mut rev = self.faces.clone();
        rev.reverse();
        for seq in [&self.faces, &rev] {
            for r in 0..n.max(1) {
                let cand: Vec<u32> = seq.iter().cycle().skip(r).take(n).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Equality up to rotation and reversal.
    pub fn equivalent(&self, other: &VertexType) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.faces.len() {
            let mut j = i;
            while j < self.faces.len() && self.faces[j] == self.faces[i] {
                j += 1;
            }
            parts.push(format!("{}^{}", self.faces[i], j - i));
            i = j;
        }
        write!(f, "[{}]", parts.join(","))
    }
}
