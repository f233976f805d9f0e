//! Multiplicative arithmetic functions and quadratic congruence root counts.
//!
//! Every counting function exists in two forms: a closed form evaluated
//! prime power by prime power, and a divisor-sum form built from root
//! counts of a congruence system. The public `fN` functions return the
//! closed form; [`FForm::divisor_sum`] gives the other one.

use crate::error::{domain, Error, Result};

/// Prime powers up to this size are handled by exhaustive residue search.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |&(_, k)| k)
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, k) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n == 0 {
        return domain("factorize requires n >= 1");
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut k = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            k += 1;
        }
        if k > 0 {
            factors.push((p, k));
        }
    };
    push(&mut m, 2);
    push(&mut m, 3);
    let mut p = 5u64;
    while p.saturating_mul(p) <= m {
        push(&mut m, p);
        push(&mut m, p + 2);
        p += 6;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(PrimeFactorization { value: n, factors })
}

fn check_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        domain(format!("{what} requires n >= 1"))
    } else {
        Ok(())
    }
}

fn overflow(what: &str) -> Error {
    Error::Domain(format!("{what} overflows u64"))
}

pub fn sigma(n: u64) -> Result<u64> {
    check_positive(n, "sigma")?;
    let f = factorize(n)?;
    let mut s: u64 = 1;
    for &(p, k) in &f.factors {
        let mut term: u64 = 1;
        let mut pk: u64 = 1;
        for _ in 0..k {
            pk = pk.checked_mul(p).ok_or_else(|| overflow("sigma"))?;
            term = term.checked_add(pk).ok_or_else(|| overflow("sigma"))?;
        }
        s = s.checked_mul(term).ok_or_else(|| overflow("sigma"))?;
    }
    Ok(s)
}

pub fn tau(n: u64) -> Result<u64> {
    check_positive(n, "tau")?;
    Ok(factorize(n)?
        .factors
        .iter()
        .map(|&(_, k)| u64::from(k) + 1)
        .product())
}

/// σ(v) for every v in 0..=limit (index 0 holds 0).
pub fn sigma_table(limit: usize) -> Vec<u64> {
    let mut s = vec![0u64; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            s[m] += d as u64;
        }
    }
    s
}

/// τ(v) for every v in 0..=limit (index 0 holds 0).
pub fn tau_table(limit: usize) -> Vec<u64> {
    let mut t = vec![0u64; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            t[m] += 1;
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceSystem {
    /// x² + i·x + j
    RhoIJ(i64, i64),
    /// x² + 2x and x² − 1
    Rho5,
    /// x² + 1 and x² − 1
    Rho6,
    /// x² + 1 and 2x
    Rho7,
}

impl CongruenceSystem {
    /// Coefficient lists, constant term first.
    pub fn polynomials(&self) -> Vec<Vec<i64>> {
        match *self {
            CongruenceSystem::RhoIJ(i, j) => vec![vec![j, i, 1]],
            CongruenceSystem::Rho5 => vec![vec![0, 2, 1], vec![-1, 0, 1]],
            CongruenceSystem::Rho6 => vec![vec![1, 0, 1], vec![-1, 0, 1]],
            CongruenceSystem::Rho7 => vec![vec![1, 0, 1], vec![0, 2]],
        }
    }

    pub fn name(&self) -> String {
        match *self {
            CongruenceSystem::RhoIJ(i, j) => format!("rho_{i},{j}"),
            CongruenceSystem::Rho5 => "rho5".into(),
            CongruenceSystem::Rho6 => "rho6".into(),
            CongruenceSystem::Rho7 => "rho7".into(),
        }
    }
}

fn eval_mod(poly: &[i64], x: u64, m: u64) -> u64 {
    let m = m as i128;
    let x = x as i128 % m;
    let mut acc: i128 = 0;
    for &c in poly.iter().rev() {
        acc = (acc * x + c as i128).rem_euclid(m);
    }
    acc as u64
}

fn deriv(poly: &[i64]) -> Vec<i64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as i64)
        .collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// Square roots of `a` modulo an odd prime `p` (Tonelli-Shanks).
fn sqrt_mod_prime(a: u64, p: u64) -> Vec<u64> {
    let a = a % p;
    if a == 0 {
        return vec![0];
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return vec![];
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    let mut v = vec![r, p - r];
    v.sort_unstable();
    v.dedup();
    v
}

fn satisfies_all(polys: &[Vec<i64>], x: u64, m: u64) -> bool {
    polys.iter().all(|f| eval_mod(f, x, m) == 0)
}

fn roots_mod_prime(polys: &[Vec<i64>], p: u64) -> Vec<u64> {
    if p <= BRUTE_FORCE_LIMIT {
        return (0..p).filter(|&x| satisfies_all(polys, x, p)).collect();
    }
    // Large odd prime: the leading polynomial is a monic quadratic x² + i x + j.
    let f = &polys[0];
    let (j, i) = (f[0] as i128, f[1] as i128);
    let pi = p as i128;
    let disc = (i * i - 4 * j).rem_euclid(pi) as u64;
    let inv2 = inv_mod(2, p).expect("odd prime");
    let mi = (-i).rem_euclid(pi) as u64;
    let mut roots: Vec<u64> = sqrt_mod_prime(disc, p)
        .into_iter()
        .map(|s| mul_mod((mi + s) % p, inv2, p))
        .filter(|&x| satisfies_all(polys, x, p))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn roots_mod_prime_power(polys: &[Vec<i64>], p: u64, k: u32) -> u64 {
    let q = p.pow(k);
    if q <= BRUTE_FORCE_LIMIT {
        return (0..q).filter(|&x| satisfies_all(polys, x, q)).count() as u64;
    }
    let f = &polys[0];
    let df = deriv(f);
    let mut roots = roots_mod_prime(polys, p);
    let mut pj = p;
    for _ in 1..k {
        let next = pj * p;
        let mut lifted = Vec::new();
        for &r in &roots {
            let d = eval_mod(&df, r, p);
            if d != 0 {
                // unique lift r + t·p^j with f(r) + t·p^j·f'(r) ≡ 0 (mod p^{j+1})
                let fr = eval_mod(f, r, next) / pj;
                let t = mul_mod((p - fr % p) % p, inv_mod(d, p).expect("unit"), p);
                let x = r + t * pj;
                if satisfies_all(polys, x, next) {
                    lifted.push(x);
                }
            } else {
                for t in 0..p {
                    let x = r + t * pj;
                    if satisfies_all(polys, x, next) {
                        lifted.push(x);
                    }
                }
            }
        }
        roots = lifted;
        pj = next;
    }
    roots.len() as u64
}

/// Number of x in 0..m satisfying every polynomial of the system modulo m.
pub fn count_congruence_roots(system: CongruenceSystem, m: u64) -> Result<u64> {
    check_positive(m, "count_congruence_roots")?;
    let polys = system.polynomials();
    let f = factorize(m)?;
    Ok(f.factors
        .iter()
        .map(|&(p, k)| roots_mod_prime_power(&polys, p, k))
        .product())
}

/// Exhaustive count over all residues, used as an independent oracle.
pub fn count_congruence_roots_brute(system: CongruenceSystem, m: u64) -> u64 {
    let polys = system.polynomials();
    (0..m).filter(|&x| satisfies_all(&polys, x, m)).count() as u64
}

/// Σ over d | n with n | d² of the root count of `system` modulo d²/n.
pub fn norm_square_divisor_sum(system: CongruenceSystem, n: u64) -> Result<u64> {
    check_positive(n, "norm_square_divisor_sum")?;
    let mut total = 0;
    for d in factorize(n)?.divisors() {
        let sq = d as u128 * d as u128;
        if sq.is_multiple_of(n as u128) {
            total += count_congruence_roots(system, (sq / n as u128) as u64)?;
        }
    }
    Ok(total)
}

fn multiplicative(n: u64, what: &str, local: impl Fn(u64, u32) -> u64) -> Result<u64> {
    check_positive(n, what)?;
    Ok(factorize(n)?
        .factors
        .iter()
        .map(|&(p, k)| local(p, k))
        .product())
}

fn even_indicator(k: u32) -> u64 {
    u64::from(k.is_multiple_of(2))
}

pub fn f1(n: u64) -> Result<u64> {
    multiplicative(n, "f1", |p, k| match (p, p % 3) {
        (3, _) => 1,
        (_, 1) => u64::from(k) + 1,
        _ => even_indicator(k),
    })
}

pub fn f2(n: u64) -> Result<u64> {
    multiplicative(n, "f2", |p, k| match (p, p % 4) {
        (2, _) => 1,
        (_, 1) => u64::from(k) + 1,
        _ => even_indicator(k),
    })
}

pub fn f3(n: u64) -> Result<u64> {
    multiplicative(n, "f3", |p, k| {
        if p == 2 {
            2 * u64::from(k) - 1
        } else {
            u64::from(k) + 1
        }
    })
}

pub fn f4(n: u64) -> Result<u64> {
    f3(n)
}

pub fn f8(n: u64) -> Result<u64> {
    f3(n)
}

pub fn f5(n: u64) -> Result<u64> {
    multiplicative(n, "f5", |p, k| if p == 3 { 1 } else { even_indicator(k) })
}

pub fn f6(n: u64) -> Result<u64> {
    multiplicative(n, "f6", |p, k| if p == 2 { 1 } else { even_indicator(k) })
}

/// The six functions that have both a closed and a divisor-sum form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FForm {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl FForm {
    pub const ALL: [FForm; 6] = [
        FForm::F1,
        FForm::F2,
        FForm::F3,
        FForm::F4,
        FForm::F5,
        FForm::F6,
    ];

    pub fn system(self) -> CongruenceSystem {
        match self {
            FForm::F1 => CongruenceSystem::RhoIJ(1, 1),
            FForm::F2 => CongruenceSystem::RhoIJ(0, 1),
            FForm::F3 => CongruenceSystem::RhoIJ(2, 0),
            FForm::F4 => CongruenceSystem::RhoIJ(0, -1),
            FForm::F5 => CongruenceSystem::Rho5,
            FForm::F6 => CongruenceSystem::Rho6,
        }
    }

    pub fn closed(self, n: u64) -> Result<u64> {
        match self {
            FForm::F1 => f1(n),
            FForm::F2 => f2(n),
            FForm::F3 => f3(n),
            FForm::F4 => f4(n),
            FForm::F5 => f5(n),
            FForm::F6 => f6(n),
        }
    }

    pub fn divisor_sum(self, n: u64) -> Result<u64> {
        norm_square_divisor_sum(self.system(), n)
    }
}

/// Σ_{d|n} (2 if d is even, else 1).
pub fn g(n: u64) -> Result<u64> {
    check_positive(n, "g")?;
    let sum = factorize(n)?
        .divisors()
        .into_iter()
        .map(|d| if d % 2 == 0 { 2 } else { 1 })
        .sum();
    let remark = g_from_tau(n)?;
    if sum != remark {
        return Err(Error::Consistency(format!(
            "g({n}): divisor sum {sum} differs from 2*tau - tau(odd part) = {remark}"
        )));
    }
    Ok(sum)
}

/// 2τ(n) − τ(n / 2^{v₂(n)}).
pub fn g_from_tau(n: u64) -> Result<u64> {
    check_positive(n, "g")?;
    let odd = n >> n.trailing_zeros();
    Ok(2 * tau(n)? - tau(odd)?)
}

/// Prime-power table for the count of HNF with a | 2b and a | 2d.
pub fn g1(n: u64) -> Result<u64> {
    multiplicative(n, "g1", |p, k| {
        let k = u64::from(k);
        if p == 2 {
            if k % 2 == 1 {
                ((1u64 << (k + 3)) - 1) / 3
            } else {
                2 * ((1u64 << (k + 2)) - 1) / 3
            }
        } else {
            let pp = p * p - 1;
            if k % 2 == 0 {
                (p.pow(k as u32 + 2) - 1) / pp
            } else {
                p * (p.pow(k as u32 + 1) - 1) / pp
            }
        }
    })
}

/// Prime-power table for the count of HNF fixed by the E3 reflection.
pub fn g2(n: u64) -> Result<u64> {
    multiplicative(n, "g2", |p, k| {
        let k = u64::from(k);
        match (p, k % 2) {
            (3, _) => k + 2,
            (_, 0) => k + 2,
            (2, _) => k,
            _ => k + 1,
        }
    })
}

pub fn h(n: u64) -> Result<u64> {
    norm_square_divisor_sum(CongruenceSystem::Rho7, n)
}

pub fn alpha(n: u64) -> Result<i64> {
    Ok(f4(n)? as i64 - h(n)? as i64)
}

fn exact_div(num: i64, den: i64, what: &str, n: u64) -> Result<i64> {
    if num % den != 0 {
        return Err(Error::FormulaDefect(format!(
            "{what} at n = {n}: {num}/{den} is not an integer"
        )));
    }
    Ok(num / den)
}

struct Terms {
    sigma: i64,
    g: i64,
    f2: i64,
    f4: i64,
    f6: i64,
}

fn lambda_terms(n: u64) -> Result<Terms> {
    Ok(Terms {
        sigma: sigma(n)? as i64,
        g: g(n)? as i64,
        f2: f2(n)? as i64,
        f4: f4(n)? as i64,
        f6: f6(n)? as i64,
    })
}

/// The printed form (g − f6)/2 + (σ − g − f4 − f2 + 2 f6)/2.
pub fn lambda27(n: u64) -> Result<i64> {
    let t = lambda_terms(n)?;
    let a = exact_div(t.g - t.f6, 2, "lambda27 first half-sum", n)?;
    let b = exact_div(
        t.sigma - t.g - t.f4 - t.f2 + 2 * t.f6,
        2,
        "lambda27 second half-sum",
        n,
    )?;
    let v = a + b;
    if v < 0 {
        return Err(Error::FormulaDefect(format!(
            "lambda27({n}) = {v} is negative"
        )));
    }
    Ok(v)
}

/// Count of 4.8.8 covers with exactly two vertex orbits:
/// (g − f6)/2 + (σ − g − f4 − f2 + 2 f6)/4.
pub fn lambda27_corrected(n: u64) -> Result<i64> {
    let t = lambda_terms(n)?;
    let a = exact_div(t.g - t.f6, 2, "corrected lambda first term", n)?;
    let b = exact_div(
        t.sigma - t.g - t.f4 - t.f2 + 2 * t.f6,
        4,
        "corrected lambda second term",
        n,
    )?;
    Ok(a + b)
}
