//! Exact numbers of the form p + q·√3 with rational p, q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub rational: Rational64,
    pub surd: Rational64,
}

impl QSqrt3 {
    pub fn new(rational: Rational64, surd: Rational64) -> Self {
        QSqrt3 { rational, surd }
    }

    pub fn from_integer(n: i64) -> Self {
        QSqrt3::new(Rational64::from_integer(n), Rational64::zero())
    }

    pub fn zero() -> Self {
        QSqrt3::from_integer(0)
    }

    /// Encodes as [p, q, r, s] meaning p/q + (r/s)·√3.
    pub fn encode(&self) -> [i64; 4] {
        [
            *self.rational.numer(),
            *self.rational.denom(),
            *self.surd.numer(),
            *self.surd.denom(),
        ]
    }

    pub fn decode(v: [i64; 4]) -> Option<Self> {
        if v[1] == 0 || v[3] == 0 {
            return None;
        }
        Some(QSqrt3::new(
            Rational64::new(v[0], v[1]),
            Rational64::new(v[2], v[3]),
        ))
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN)
            + self.surd.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.rational + o.rational, self.surd + o.surd)
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.rational - o.rational, self.surd - o.surd)
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.rational, -self.surd)
    }
}

impl Mul<i64> for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, k: i64) -> QSqrt3 {
        QSqrt3::new(self.rational * k, self.surd * k)
    }
}

impl Mul<Rational64> for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, k: Rational64) -> QSqrt3 {
        QSqrt3::new(self.rational * k, self.surd * k)
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "({})*sqrt3", self.surd),
            _ => write!(f, "{} + ({})*sqrt3", self.rational, self.surd),
        }
    }
}

/// A plane vector with coordinates in Q(√3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactCoord {
    pub x: QSqrt3,
    pub y: QSqrt3,
}

impl ExactCoord {
    pub fn new(x: QSqrt3, y: QSqrt3) -> Self {
        ExactCoord { x, y }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn scale(&self, k: Rational64) -> ExactCoord {
        ExactCoord::new(self.x * k, self.y * k)
    }
}

impl Add for ExactCoord {
    type Output = ExactCoord;
    fn add(self, o: ExactCoord) -> ExactCoord {
        ExactCoord::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for ExactCoord {
    type Output = ExactCoord;
    fn sub(self, o: ExactCoord) -> ExactCoord {
        ExactCoord::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<i64> for ExactCoord {
    type Output = ExactCoord;
    fn mul(self, k: i64) -> ExactCoord {
        ExactCoord::new(self.x * k, self.y * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> QSqrt3 {
        QSqrt3::new(Rational64::from_integer(p), Rational64::from_integer(r))
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = q(1, 2);
        let b = QSqrt3::new(Rational64::new(1, 2), Rational64::new(-1, 3));
        assert_eq!((a + b) - b, a);
        assert_eq!(a * 3, q(3, 6));
        assert_eq!(-a + a, QSqrt3::zero());
        assert!((b.to_f64() - (0.5 - 3f64.sqrt() / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn encode_round_trip() {
        let b = QSqrt3::new(Rational64::new(-3, 4), Rational64::new(5, 6));
        assert_eq!(QSqrt3::decode(b.encode()), Some(b));
        assert_eq!(QSqrt3::decode([1, 0, 0, 1]), None);
    }
}
