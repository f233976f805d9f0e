//! Growth bounds for the counting functions, evaluated in double precision.

use std::fmt::Write as _;

use serde::Serialize;

use crate::enumerate::{phi_closed, MapTypeId};
use crate::error::{domain, Error, Result};
use crate::numtheory::{sigma_table, tau};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn exp_gamma() -> f64 {
    EULER_GAMMA.exp()
}

/// e^γ · v · ln ln v, for v > e.
pub fn gronwall_bound(v: f64) -> Result<f64> {
    if v.is_nan() || v <= std::f64::consts::E {
        return domain(format!("gronwall_bound needs v > e, got {v}"));
    }
    Ok(exp_gamma() * v * v.ln().ln())
}

/// (e^γ / 8) · v · ln ln(v/4), for v/4 > e.
pub fn bound27(v: f64) -> Result<f64> {
    let q = v / 4.0;
    if q.is_nan() || q <= std::f64::consts::E {
        return domain(format!("bound27 needs v/4 > e, got v = {v}"));
    }
    Ok(exp_gamma() / 8.0 * v * q.ln().ln())
}

/// exp(ln 2 · ln v / ln ln v), for v > e.
pub fn divisor_bound(v: f64) -> Result<f64> {
    if v.is_nan() || v <= std::f64::consts::E {
        return domain(format!("divisor_bound needs ln ln v > 0, got v = {v}"));
    }
    let l = v.ln();
    Ok((std::f64::consts::LN_2 * l / l.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundFamily {
    /// Sum-of-divisors growth, bounded through Gronwall's constant.
    Gronwall,
    /// Divisor-count growth.
    Divisor,
    /// Divisor-count growth with factor 2, for the glide types.
    GlideDivisor,
}

impl BoundFamily {
    pub fn of(ell: MapTypeId) -> BoundFamily {
        match ell.ell() {
            3 | 4 | 8 | 12 | 13 | 15 | 23 | 27 => BoundFamily::Gronwall,
            9 | 10 | 18 => BoundFamily::GlideDivisor,
            _ => BoundFamily::Divisor,
        }
    }
}

fn bound_for(ell: MapTypeId, v: u64) -> Result<(f64, &'static str)> {
    let n = (v / ell.v0()) as f64;
    match (BoundFamily::of(ell), ell.ell()) {
        (BoundFamily::Gronwall, 27) => Ok((bound27(v as f64)?, "(e^gamma/8) v ln ln(v/4)")),
        (BoundFamily::Gronwall, _) => Ok((gronwall_bound(n)?, "e^gamma n ln ln n")),
        (BoundFamily::GlideDivisor, _) => {
            Ok((2.0 * divisor_bound(n)?, "2 exp(ln 2 ln n / ln ln n)"))
        }
        (BoundFamily::Divisor, _) => Ok((divisor_bound(n)?, "exp(ln 2 ln n / ln ln n)")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub v: u64,
    pub phi: u64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    #[serde(rename = "type")]
    pub ell: MapTypeId,
    pub bound_name: String,
    pub samples: Vec<Sample>,
    pub notes: Vec<String>,
}

impl GrowthReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["v", "phi", "bound", "ratio"]).map_err(io)?;
        for s in &self.samples {
            w.write_record([
                s.v.to_string(),
                s.phi.to_string(),
                format!("{:.6}", s.bound),
                format!("{:.6}", s.ratio),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Phi{} against {}", self.ell.ell(), self.bound_name);
        let _ = writeln!(
            s,
            "{:>10} {:>8} {:>14} {:>10}",
            "v", "phi", "bound", "ratio"
        );
        for x in &self.samples {
            let _ = writeln!(
                s,
                "{:>10} {:>8} {:>14.4} {:>10.6}",
                x.v, x.phi, x.bound, x.ratio
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

/// Roughly geometric sample of multiples of v0 up to `max_v`, restricted to
/// the domain of the type's bound.
pub fn default_samples(ell: MapTypeId, max_v: u64) -> Vec<u64> {
    let v0 = ell.v0();
    let mut out = Vec::new();
    let mut n = 1u64;
    while n * v0 <= max_v {
        if bound_for(ell, n * v0).is_ok() {
            out.push(n * v0);
        }
        n = (n * 5 / 4).max(n + 1);
    }
    out
}

/// Smallest valid v ≤ max_v with Φ_ℓ(v) > v, if any.
pub fn search_phi_exceeds_v(ell: MapTypeId, max_v: u64) -> Result<Option<u64>> {
    let v0 = ell.v0();
    for n in 1..=max_v / v0 {
        let v = n * v0;
        if phi_closed(ell, v)? > v {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Pairs each Φ_ℓ(v) with its family's bound.
pub fn growth_report(ell: MapTypeId, v_samples: &[u64]) -> Result<GrowthReport> {
    if v_samples.windows(2).any(|w| w[0] >= w[1]) {
        return domain("growth_report samples must be strictly increasing");
    }
    let mut samples = Vec::with_capacity(v_samples.len());
    let mut name = match BoundFamily::of(ell) {
        BoundFamily::Gronwall if ell.ell() == 27 => "(e^gamma/8) v ln ln(v/4)",
        BoundFamily::Gronwall => "e^gamma n ln ln n",
        BoundFamily::GlideDivisor => "2 exp(ln 2 ln n / ln ln n)",
        BoundFamily::Divisor => "exp(ln 2 ln n / ln ln n)",
    };
    let mut within_tau = true;
    for &v in v_samples {
        let Some(n) = ell.sheets(v) else {
            return domain(format!(
                "{v} is not a multiple of v0 = {} for type {}",
                ell.v0(),
                ell.ell()
            ));
        };
        let (bound, label) = bound_for(ell, v)?;
        name = label;
        let phi = phi_closed(ell, v)?;
        within_tau &= phi <= tau(n)?;
        samples.push(Sample {
            v,
            phi,
            bound,
            ratio: phi as f64 / bound,
        });
    }
    let mut notes = vec![format!(
        "n = v/{}; closed form {}",
        ell.v0(),
        crate::enumerate::formula_text(ell)
    )];
    if BoundFamily::of(ell) == BoundFamily::Divisor {
        notes.push(format!(
            "Phi <= tau(n) at every sample: {}",
            if within_tau { "yes" } else { "no" }
        ));
    }
    if ell.ell() == 27 {
        let max_v = v_samples.last().copied().unwrap_or(0);
        notes.push("uses the oracle-confirmed formula, not the published Lambda".into());
        notes.push(match search_phi_exceeds_v(ell, max_v)? {
            Some(v) => format!("Phi27(v) > v first at v = {v}"),
            None => format!("no v <= {max_v} with Phi27(v) > v"),
        });
    }
    Ok(GrowthReport {
        ell,
        bound_name: name.into(),
        samples,
        notes,
    })
}

/// A violation of Φ_ℓ(v) ≤ k·τ(v/v0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauViolation {
    #[serde(rename = "type")]
    pub ell: MapTypeId,
    pub v: u64,
    pub phi: u64,
    pub limit: u64,
}

pub const TAU_FAMILY: [u32; 15] = [1, 2, 5, 6, 7, 11, 14, 16, 17, 19, 20, 21, 22, 24, 26];
pub const GLIDE_FAMILY: [u32; 3] = [9, 10, 18];

/// Checks Φ_ℓ(v) ≤ τ(n) for the divisor family and ≤ 2τ(n) for the glide
/// family at every valid v ≤ max_v.
pub fn tau_bound_violations(max_v: u64) -> Result<Vec<TauViolation>> {
    let mut out = Vec::new();
    for (family, k) in [(&TAU_FAMILY[..], 1), (&GLIDE_FAMILY[..], 2)] {
        for &l in family {
            let ell = MapTypeId::new(l)?;
            for n in 1..=max_v / ell.v0() {
                let v = n * ell.v0();
                let phi = phi_closed(ell, v)?;
                let limit = k * tau(n)?;
                if phi > limit {
                    out.push(TauViolation { ell, v, phi, limit });
                }
            }
        }
    }
    Ok(out)
}

/// Records of the running maximum of σ(v)/(v ln ln v) for v from `start`
/// (at least 3) to `limit`.
pub fn sigma_ratio_records(start: u64, limit: u64) -> Result<Vec<(u64, f64)>> {
    if start < 3 {
        return domain("sigma ratio needs v >= 3");
    }
    let sig = sigma_table(limit as usize);
    let mut best = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for v in start..=limit {
        let r = sig[v as usize] as f64 / (v as f64 * (v as f64).ln().ln());
        if r > best {
            best = r;
            out.push((v, r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(ell: u32) -> MapTypeId {
        MapTypeId::new(ell).unwrap()
    }

    #[test]
    fn constant_matches_reference() {
        assert!((exp_gamma() - 1.781_072_417_99).abs() < 1e-10);
        assert!((exp_gamma() / 8.0 - 0.2226).abs() < 1e-4);
    }

    #[test]
    fn domains() {
        assert!(gronwall_bound(std::f64::consts::E).is_err());
        assert!(gronwall_bound(3.0).is_ok());
        assert!(bound27(4.0 * std::f64::consts::E).is_err());
        assert!(bound27(11.0).is_ok());
        assert!(divisor_bound(2.0).is_err());
        assert!(divisor_bound(f64::NAN).is_err());
    }

    #[test]
    fn gronwall_is_increasing() {
        let mut prev = gronwall_bound(3.0).unwrap();
        for k in 1..10_000 {
            let b = gronwall_bound(3.0 + k as f64 * 0.37).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn divisor_bound_eventually_increases() {
        let mut prev = divisor_bound(1e4).unwrap();
        for k in 1..1000 {
            let b = divisor_bound(1e4 + k as f64 * 97.0).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn bounds_are_continuous() {
        for f in [gronwall_bound, bound27, divisor_bound] {
            let mut x = 20.0;
            while x < 1e5 {
                let (a, b) = (f(x).unwrap(), f(x + 1e-6).unwrap());
                assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{x}");
                x *= 1.01;
            }
        }
    }

    #[test]
    fn tau_bound_fails_only_where_f3_outgrows_tau() {
        // f3(2^k) = 2k - 1 exceeds tau(2^k) = k + 1 once k >= 3.
        let viol = tau_bound_violations(10_000).unwrap();
        assert!(!viol.is_empty());
        for x in &viol {
            assert!([19, 21, 22, 24].contains(&x.ell.ell()), "{x:?}");
            assert_eq!((x.v / x.ell.v0()) % 8, 0, "{x:?}");
        }
        let first19 = viol.iter().find(|x| x.ell.ell() == 19).unwrap();
        assert_eq!((first19.v, first19.phi, first19.limit), (40, 5, 4));
        assert!(viol.iter().all(|x| !GLIDE_FAMILY.contains(&x.ell.ell())));
    }

    #[test]
    fn tau_against_divisor_bound() {
        let first_miss = (3..=100_000u64)
            .find(|&v| tau(v).unwrap() as f64 > 4.0 * divisor_bound(v as f64).unwrap());
        assert_eq!(first_miss, Some(10_080));
        let first_miss_21 = (6..=100_000u64).step_by(6).find(|&v| {
            phi_closed(t(21), v).unwrap() as f64 > 4.0 * divisor_bound(v as f64).unwrap()
        });
        assert_eq!(first_miss_21, Some(60_480));
    }

    #[test]
    fn phi27_against_bound27() {
        let over: Vec<u64> = (3..=10_000u64)
            .map(|n| 4 * n)
            .filter(|&v| phi_closed(t(27), v).unwrap() as f64 > 1.5 * bound27(v as f64).unwrap())
            .collect();
        assert_eq!(over, vec![12, 16]);
    }

    #[test]
    fn reports() {
        let r = growth_report(t(25), &default_samples(t(25), 6000)).unwrap();
        assert!(r.samples.iter().all(|s| s.phi == 0));
        let r = growth_report(t(1), &default_samples(t(1), 12_000)).unwrap();
        assert!(r.notes.iter().any(|n| n.ends_with("yes")));
        let r = growth_report(t(27), &default_samples(t(27), 40_000)).unwrap();
        assert!(r
            .samples
            .iter()
            .all(|s| s.ratio.is_finite() && s.ratio >= 0.0));
        assert!(r.notes.iter().any(|n| n.contains("Phi27")));
        assert!(r.to_csv().unwrap().starts_with("v,phi,bound,ratio\n"));
        assert!(growth_report(t(1), &[24, 12]).is_err());
        assert!(growth_report(t(1), &[13]).is_err());
    }

    #[test]
    fn sigma_ratio_tail_below_two() {
        let rec = sigma_ratio_records(25, 100_000).unwrap();
        assert!(rec.iter().all(|&(_, r)| r <= 2.0));
        let head = sigma_ratio_records(3, 100_000).unwrap();
        assert!(head[0].1 > 2.0);
    }
}
