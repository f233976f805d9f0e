//! 2×2 integer matrices, Hermite normal form and sublattice enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Result};
use crate::numtheory::factorize;

/// Column 1 is the image of the basis vector A, column 2 the image of B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub m11: i64,
    pub m12: i64,
    pub m21: i64,
    pub m22: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);

    /// Entries in row-major order.
    pub const fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Self {
        IntMatrix2 { m11, m12, m21, m22 }
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        IntMatrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn det(&self) -> i64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }

    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (
            self.m11 * v.0 + self.m12 * v.1,
            self.m21 * v.0 + self.m22 * v.1,
        )
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Lower-triangular Hermite normal form `[a 0; b d]` with `0 <= b < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HnfMatrix {
    a: i64,
    b: i64,
    d: i64,
}

impl HnfMatrix {
    pub const IDENTITY: HnfMatrix = HnfMatrix { a: 1, b: 0, d: 1 };

    pub fn new(a: i64, b: i64, d: i64) -> Result<Self> {
        if a < 1 || d < 1 || b < 0 || b >= d {
            return domain(format!("[{a}, {b}, {d}] is not in Hermite normal form"));
        }
        if a.checked_mul(d).is_none() {
            return domain(format!("[{a}, {b}, {d}]: determinant overflows 64 bits"));
        }
        Ok(HnfMatrix { a, b, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn det(&self) -> i64 {
        self.a * self.d
    }

    pub fn triple(&self) -> [i64; 3] {
        [self.a, self.b, self.d]
    }

    pub fn matrix(&self) -> IntMatrix2 {
        IntMatrix2::new(self.a, 0, self.b, self.d)
    }

    /// Sort key for the canonical class representative.
    pub fn canonical_key(&self) -> (i64, i64, i64) {
        (self.d, self.b, self.a)
    }

    /// Reduces an integer vector to its coset representative modulo the
    /// column lattice, with x in [0, a) and y in [0, d).
    pub fn reduce(&self, x: i64, y: i64) -> (i64, i64) {
        let k = x.div_euclid(self.a);
        let x = x - k * self.a;
        let y = (y - k * self.b).rem_euclid(self.d);
        (x, y)
    }
}

impl fmt::Display for HnfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.d)
    }
}

impl Serialize for HnfMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.triple().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HnfMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, dd] = <[i64; 3]>::deserialize(d)?;
        HnfMatrix::new(a, b, dd).map_err(serde::de::Error::custom)
    }
}

pub fn hnf_reduce(m: &IntMatrix2) -> Result<HnfMatrix> {
    if m.det() == 0 {
        return domain(format!("hnf_reduce of singular matrix {m}"));
    }
    let mut c1 = [m.m11 as i128, m.m21 as i128];
    let mut c2 = [m.m12 as i128, m.m22 as i128];
    while c2[0] != 0 {
        let q = c1[0].div_euclid(c2[0]);
        c1 = [c1[0] - q * c2[0], c1[1] - q * c2[1]];
        std::mem::swap(&mut c1, &mut c2);
    }
    if c1[0] < 0 {
        c1 = [-c1[0], -c1[1]];
    }
    if c2[1] < 0 {
        c2 = [-c2[0], -c2[1]];
    }
    let (a, d) = (c1[0], c2[1]);
    let b = c1[1].rem_euclid(d);
    HnfMatrix::new(a as i64, b as i64, d as i64)
}

/// All HNF of determinant n, ordered by (d, b).
pub fn hnf_enumerate(n: u64) -> Result<Vec<HnfMatrix>> {
    let divs = factorize(n)?.divisors();
    let mut out = Vec::new();
    for d in divs {
        let a = (n / d) as i64;
        let d = d as i64;
        for b in 0..d {
            out.push(HnfMatrix { a, b, d });
        }
    }
    Ok(out)
}

pub fn unimodular_equal(m1: &IntMatrix2, m2: &IntMatrix2) -> Result<bool> {
    Ok(hnf_reduce(m1)? == hnf_reduce(m2)?)
}

/// adj(M)·S·M; M⁻¹SM equals this divided by det M.
fn conjugate_numerators(s: &IntMatrix2, m: &HnfMatrix) -> [BigInt; 4] {
    let (a, b, d) = (BigInt::from(m.a), BigInt::from(m.b), BigInt::from(m.d));
    let adj = [[d.clone(), BigInt::zero()], [-b.clone(), a.clone()]];
    let mm = [[a, BigInt::zero()], [b, d]];
    let ss = [
        [BigInt::from(s.m11), BigInt::from(s.m12)],
        [BigInt::from(s.m21), BigInt::from(s.m22)],
    ];
    let mul = |x: &[[BigInt; 2]; 2], y: &[[BigInt; 2]; 2]| -> [[BigInt; 2]; 2] {
        let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let r = mul(&mul(&adj, &ss), &mm);
    let [[r11, r12], [r21, r22]] = r;
    [r11, r12, r21, r22]
}

fn conjugate_numerators_small(s: &IntMatrix2, m: &HnfMatrix) -> Option<[i128; 4]> {
    let (a, b, d) = (m.a as i128, m.b as i128, m.d as i128);
    let (s11, s12, s21, s22) = (s.m11 as i128, s.m12 as i128, s.m21 as i128, s.m22 as i128);
    // S·M
    let sm11 = s11.checked_mul(a)?.checked_add(s12.checked_mul(b)?)?;
    let sm12 = s12.checked_mul(d)?;
    let sm21 = s21.checked_mul(a)?.checked_add(s22.checked_mul(b)?)?;
    let sm22 = s22.checked_mul(d)?;
    // adj(M) = [[d, 0], [-b, a]]
    Some([
        d.checked_mul(sm11)?,
        d.checked_mul(sm12)?,
        a.checked_mul(sm21)?.checked_sub(b.checked_mul(sm11)?)?,
        a.checked_mul(sm22)?.checked_sub(b.checked_mul(sm12)?)?,
    ])
}

/// True iff M⁻¹·S·M is an integer matrix.
pub fn conjugation_integral(s: &IntMatrix2, m: &HnfMatrix) -> bool {
    let det = m.det() as i128;
    match conjugate_numerators_small(s, m) {
        Some(x) => x.iter().all(|v| v % det == 0),
        None => {
            let det = BigInt::from(m.det());
            conjugate_numerators(s, m)
                .iter()
                .all(|v| (v % &det).is_zero())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub description: String,
    pub numerator: String,
    pub modulus: i64,
    pub residue: i64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    pub conditions: Vec<Condition>,
}

impl DivisibilityReport {
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }
}

/// Each entry of M⁻¹·S·M as numerator over det M, with its verdict.
pub fn divisibility_report(s: &IntMatrix2, m: &HnfMatrix) -> DivisibilityReport {
    let det = BigInt::from(m.det());
    let names = ["(1,1)", "(1,2)", "(2,1)", "(2,2)"];
    let conditions = conjugate_numerators(s, m)
        .iter()
        .zip(names)
        .map(|(num, name)| {
            let r = ((num % &det) + &det) % &det;
            let residue: i64 = r.try_into().expect("residue below modulus");
            Condition {
                description: format!("entry {name} of M^-1 S M = {num}/{det}"),
                numerator: num.to_string(),
                modulus: m.det(),
                residue,
                satisfied: residue == 0,
            }
        })
        .collect();
    DivisibilityReport { conditions }
}

/// Number of HNF of determinant n satisfying `pred`.
pub fn count_hnf(n: u64, pred: impl Fn(&HnfMatrix) -> bool) -> Result<u64> {
    Ok(hnf_enumerate(n)?.iter().filter(|m| pred(m)).count() as u64)
}

/// Number of HNF of determinant n normalized by the linear map S.
pub fn count_conjugation_integral(s: &IntMatrix2, n: u64) -> Result<u64> {
    count_hnf(n, |m| conjugation_integral(s, m))
}

/// Direct count of HNF with a | 2b and a | 2d.
pub fn g1_filter_count(n: u64) -> Result<u64> {
    count_hnf(n, |m| (2 * m.b) % m.a == 0 && (2 * m.d) % m.a == 0)
}

/// Which third divisibility condition to use when counting HNF fixed by
/// the E3 reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G2Condition {
    /// ad | 3b² + 2ab
    ThreeBSquaredPlusTwoAB,
    /// ad | 3b² + 2bd
    ThreeBSquaredPlusTwoBD,
}

/// Direct count of HNF with a | 3b, a | 3d and the chosen third condition.
pub fn g2_filter_count(n: u64, cond: G2Condition) -> Result<u64> {
    count_hnf(n, |m| {
        let (a, b, d) = (m.a as i128, m.b as i128, m.d as i128);
        let third = match cond {
            G2Condition::ThreeBSquaredPlusTwoAB => 3 * b * b + 2 * a * b,
            G2Condition::ThreeBSquaredPlusTwoBD => 3 * b * b + 2 * b * d,
        };
        (3 * b) % a == 0 && (3 * d) % a == 0 && third % (a * d) == 0
    })
}
