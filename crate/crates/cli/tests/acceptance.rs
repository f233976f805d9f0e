//! One PASS/FAIL line per acceptance criterion, followed by indented detail.
//! Failures listed in `KNOWN` are reported but do not fail the run; any
//! other failure makes the process exit nonzero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tma_core::asymptotics::{
    default_samples, growth_report, sigma_ratio_records, tau_bound_violations,
};
use tma_core::enumerate::{crosscheck, parity_defects, phi_oracle, table, DEFAULT_CAP};
use tma_core::lattice::{conjugation_integral, hnf_enumerate, hnf_reduce};
use tma_core::numtheory::{count_congruence_roots, f3, f4, f8, sigma, FForm};
use tma_core::symmetry::isomorphic;
use tma_core::tilings::{expected_point_group_order, validate};
use tma_core::{Catalog, CongruenceSystem, HnfMatrix, IntMatrix2, MapTypeId};

/// Criteria whose failure is understood and recorded; see README.
const KNOWN: [&str; 2] = ["table", "asymptotics"];

struct Verdict {
    name: &'static str,
    passed: bool,
    detail: Vec<String>,
}

impl Verdict {
    fn new(name: &'static str) -> Self {
        Verdict {
            name,
            passed: true,
            detail: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.detail.push(format!("failed: {}", msg.into()));
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.detail.push(msg.into());
    }

    fn timed(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.check(took < limit, format!("took {took:?}, limit {limit:?}"));
        self.note(format!("runtime {:.2?}", took));
    }
}

fn t(ell: u32) -> MapTypeId {
    MapTypeId::new(ell).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn table_reproduction() -> Verdict {
    let mut v = Verdict::new("table");
    let start = Instant::now();
    let all: Vec<MapTypeId> = MapTypeId::all().collect();
    let tab = match table(&all, 10) {
        Ok(x) => x,
        Err(e) => {
            v.check(false, e.to_string());
            return v;
        }
    };
    v.timed(start, Duration::from_secs(5));
    let (total, same) = tab.published_agreement();
    v.note(format!("{same}/{total} published cells reproduced"));
    let columns = tab
        .columns
        .iter()
        .filter(|c| c.cells.iter().any(|x| x.published.is_some()))
        .count();
    if columns != 26 {
        v.note(format!(
            "the published table has {columns} columns, not 26; types 3 and 4 have none"
        ));
    }
    let report = crosscheck(&Catalog::builtin(), 10, DEFAULT_CAP);
    for col in &tab.columns {
        let differing: Vec<u64> = col
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.published.is_some_and(|p| p != c.phi))
            .map(|(k, _)| k as u64 + 1)
            .collect();
        if differing.is_empty() {
            continue;
        }
        let ell = col.ell.ell();
        v.check(
            col.cells.iter().all(|c| {
                c.published == Some(c.phi) || c.published.is_none() || c.footnote.is_some()
            }),
            format!("type {ell}: a differing cell is not footnoted"),
        );
        if let Ok(r) = &report {
            let unreported: Vec<u64> = differing
                .iter()
                .copied()
                .filter(|&n| {
                    !r.table_audits.iter().any(|a| {
                        a.ell == col.ell && a.sheets == n && Some(a.oracle) == phi_at(col, n)
                    })
                })
                .collect();
            v.check(
                unreported.is_empty(),
                format!("type {ell}: footnoted cells {unreported:?} missing from verify"),
            );
        }
        if ell == 27 {
            v.note(format!(
                "type 27: {} cells overruled by the oracle (permitted, footnoted)",
                differing.len()
            ));
        } else {
            v.check(
                false,
                format!(
                    "type {ell}: published values differ at n = {differing:?}; the orbit oracle agrees with the shipped form, not the published column"
                ),
            );
        }
    }
    v
}

fn phi_at(col: &tma_core::enumerate::TableColumn, n: u64) -> Option<u64> {
    col.cells.get(n as usize - 1).map(|c| c.phi)
}

/// Oracle values for types with no published column, n = 1..=10.
const FIXTURE_3: [u64; 10] = [1, 2, 3, 5, 4, 7, 5, 10, 8, 10];
const FIXTURE_4: [u64; 10] = [1, 3, 3, 6, 4, 9, 5, 11, 8, 12];

fn oracle_crosscheck() -> Verdict {
    let mut v = Verdict::new("oracle-crosscheck");
    let start = Instant::now();
    let cat = Catalog::builtin();
    match crosscheck(&cat, 10, DEFAULT_CAP) {
        Ok(r) => {
            v.timed(start, Duration::from_secs(60));
            v.note(format!("{} (type, n) pairs checked", r.pairs_checked));
            let bad: Vec<_> = r
                .discrepancies
                .iter()
                .filter(|d| d.ell.ell() <= 26)
                .collect();
            v.check(
                bad.is_empty(),
                format!("{} closed/oracle discrepancies for types 1..26", bad.len()),
            );
            for d in &bad {
                v.note(format!(
                    "type {} n={}: closed {:?} oracle {}",
                    d.ell.ell(),
                    d.sheets,
                    d.closed,
                    d.oracle
                ));
            }
        }
        Err(e) => v.check(false, e.to_string()),
    }
    for (ell, fixture) in [(3, FIXTURE_3), (4, FIXTURE_4)] {
        let got: Vec<u64> = (1..=10)
            .map(|n| {
                phi_oracle(&cat, t(ell), n * t(ell).v0(), DEFAULT_CAP)
                    .ok()
                    .and_then(|r| r.count_oracle)
                    .unwrap_or(u64::MAX)
            })
            .collect();
        v.check(
            got == fixture,
            format!("type {ell} oracle {got:?} vs fixture {fixture:?}"),
        );
    }
    v
}

fn worked_example() -> Verdict {
    let mut v = Verdict::new("type-23-examples");
    let cat = Catalog::builtin();
    let spec = cat.spec(23).unwrap();
    match phi_oracle(&cat, t(23), 32, DEFAULT_CAP) {
        Ok(r) => v.check(
            r.count_oracle == Some(3),
            format!("v=32 gives {:?}", r.count_oracle),
        ),
        Err(e) => v.check(false, e.to_string()),
    }
    let listed: Vec<HnfMatrix> = [(1, 1, 9), (1, 2, 9), (1, 3, 9)]
        .iter()
        .map(|&(a, b, d)| HnfMatrix::new(a, b, d).unwrap())
        .collect();
    match phi_oracle(&cat, t(23), 36, DEFAULT_CAP) {
        Ok(r) => {
            v.check(
                r.representatives.len() == 3,
                format!("v=36 gives {} classes", r.representatives.len()),
            );
            let mut hit = BTreeSet::new();
            for rep in &r.representatives {
                for (k, m) in listed.iter().enumerate() {
                    if isomorphic(spec, &rep.hnf, m).unwrap_or(false) {
                        hit.insert(k);
                        v.note(format!("{} ~ {}", rep.hnf, m));
                    }
                }
            }
            v.check(hit.len() == 3, "listed matrices are not matched one-to-one");
        }
        Err(e) => v.check(false, e.to_string()),
    }
    v
}

fn number_theory() -> Verdict {
    let mut v = Verdict::new("number-theory");
    let start = Instant::now();
    for form in FForm::ALL {
        let bad = (1..=10_000u64).find(|&n| form.closed(n).ok() != form.divisor_sum(n).ok());
        v.check(
            bad.is_none(),
            format!("{form:?} closed form differs from divisor sum at {bad:?}"),
        );
    }
    let bad = (1..=10_000u64).find(|&n| !(f3(n).ok() == f4(n).ok() && f4(n).ok() == f8(n).ok()));
    v.check(bad.is_none(), format!("f3 = f4 = f8 fails at {bad:?}"));
    let systems = [
        CongruenceSystem::RhoIJ(1, 1),
        CongruenceSystem::RhoIJ(0, 1),
        CongruenceSystem::RhoIJ(2, 0),
        CongruenceSystem::RhoIJ(0, -1),
        CongruenceSystem::Rho5,
        CongruenceSystem::Rho6,
        CongruenceSystem::Rho7,
    ];
    for sys in systems {
        let rho: Vec<u64> = (0..=200u64)
            .map(|m| {
                if m == 0 {
                    0
                } else {
                    count_congruence_roots(sys, m).unwrap_or(u64::MAX)
                }
            })
            .collect();
        let mut fails = 0;
        for a in 1..=200u64 {
            for b in 1..=200u64 {
                if gcd(a, b) == 1
                    && count_congruence_roots(sys, a * b).ok()
                        != Some(rho[a as usize] * rho[b as usize])
                {
                    fails += 1;
                }
            }
        }
        v.check(
            fails == 0,
            format!("{} not multiplicative on {fails} coprime pairs", sys.name()),
        );
    }
    for k in 1..=20 {
        let r = count_congruence_roots(CongruenceSystem::RhoIJ(1, 1), 1 << k).ok();
        v.check(r == Some(0), format!("rho(1,1)(2^{k}) = {r:?}"));
        if k >= 3 {
            let r = count_congruence_roots(CongruenceSystem::RhoIJ(0, -1), 1 << k).ok();
            v.check(r == Some(4), format!("rho(0,-1)(2^{k}) = {r:?}"));
        }
    }
    v.timed(start, Duration::from_secs(30));
    v
}

fn lattice() -> Verdict {
    let mut v = Verdict::new("lattice");
    let start = Instant::now();
    for n in 1..=500u64 {
        let len = hnf_enumerate(n).map(|x| x.len() as u64).ok();
        if len != sigma(n).ok() {
            v.check(false, format!("|HNF({n})| = {len:?}"));
        }
    }
    let elementary = prop_oneof![
        (-5i64..=5).prop_map(|k| IntMatrix2::new(1, k, 0, 1)),
        (-5i64..=5).prop_map(|k| IntMatrix2::new(1, 0, k, 1)),
        Just(IntMatrix2::new(0, 1, 1, 0)),
        Just(IntMatrix2::new(-1, 0, 0, 1)),
    ];
    let unimodular = proptest::collection::vec(elementary, 1..6)
        .prop_map(|es| es.iter().fold(IntMatrix2::IDENTITY, |u, e| u.mul(e)));
    let nonsingular = (-50i64..=50, -50i64..=50, -50i64..=50, -50i64..=50)
        .prop_map(|(a, b, c, d)| IntMatrix2::new(a, b, c, d))
        .prop_filter("nonsingular", |m| m.det() != 0);
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 200,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    let outcome = runner.run(&(nonsingular, unimodular), |(m, u)| {
        let h = hnf_reduce(&m).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(hnf_reduce(&h.matrix()).unwrap(), h);
        prop_assert_eq!(hnf_reduce(&m.mul(&u)).unwrap(), h);
        Ok(())
    });
    v.check(outcome.is_ok(), format!("random HNF cases: {outcome:?}"));
    v.note("200 random idempotence/right-unimodular cases");
    let rho60 = IntMatrix2::new(0, -1, 1, 1);
    let mut checked = 0;
    for n in 1..=100u64 {
        for m in hnf_enumerate(n).unwrap_or_default() {
            let (a, b, d) = (m.a(), m.b(), m.d());
            let conditions = b % a == 0 && d % a == 0 && (a * a + a * b + b * b) % (a * d) == 0;
            if conjugation_integral(&rho60, &m) != conditions {
                v.check(false, format!("sixty-degree conditions disagree at {m}"));
            }
            checked += 1;
        }
    }
    v.note(format!("sixty-degree conditions checked on {checked} HNF"));
    v.timed(start, Duration::from_secs(10));
    v
}

fn tilings() -> Verdict {
    let mut v = Verdict::new("tilings");
    let start = Instant::now();
    let cat = Catalog::builtin();
    let mut orders = Vec::new();
    for spec in cat.specs() {
        let r = validate(spec);
        for c in r.checks.iter().filter(|c| !c.passed) {
            v.check(
                false,
                format!("E{} {}: {}", spec.id, c.name, c.failures.join("; ")),
            );
        }
        if let Some(k) = expected_point_group_order(spec.id) {
            v.check(
                r.origin_stabilizer_order == k,
                format!(
                    "E{} stabilizer {} vs inventory {k}",
                    spec.id, r.origin_stabilizer_order
                ),
            );
        }
        orders.push(r.point_group_order);
    }
    let distinct: BTreeSet<usize> = orders.iter().copied().collect();
    v.note(format!(
        "{} specs; point-group orders {:?}",
        cat.specs().len(),
        distinct
    ));
    v.timed(start, Duration::from_secs(10));
    v
}

fn parity() -> Verdict {
    let mut v = Verdict::new("parity");
    match parity_defects(200) {
        Ok(defects) => {
            let shipped: Vec<_> = defects.iter().filter(|d| d.shipped).collect();
            v.check(
                shipped.is_empty(),
                format!("{} shipped formula values are not integral", shipped.len()),
            );
            let published: BTreeSet<&str> = defects
                .iter()
                .filter(|d| !d.shipped)
                .map(|d| d.expression)
                .collect();
            if !published.is_empty() {
                v.note(format!(
                    "published-only expressions with odd values (reported by verify): {}",
                    published.into_iter().collect::<Vec<_>>().join(", ")
                ));
            }
        }
        Err(e) => v.check(false, e.to_string()),
    }
    v
}

fn asymptotics() -> Verdict {
    let mut v = Verdict::new("asymptotics");
    let start = Instant::now();
    match tau_bound_violations(10_000) {
        Ok(viol) => {
            let types: BTreeSet<u32> = viol.iter().map(|x| x.ell.ell()).collect();
            v.check(
                viol.is_empty(),
                format!(
                    "{} divisor-bound violations for v <= 10^4, types {types:?}",
                    viol.len()
                ),
            );
            if let Some(first) = viol.first() {
                v.note(format!(
                    "first: Phi{}({}) = {} > {}; f3(2^k) = 2k-1 exceeds tau(2^k) = k+1 once 8 | n",
                    first.ell.ell(),
                    first.v,
                    first.phi,
                    first.limit
                ));
            }
        }
        Err(e) => v.check(false, e.to_string()),
    }
    match sigma_ratio_records(3, 100_000) {
        Ok(records) => {
            if let Some(&(v_max, r_max)) = records.last() {
                v.check(
                    r_max <= 2.0,
                    format!("running max of sigma(v)/(v ln ln v) is {r_max:.4} at v = {v_max}"),
                );
            }
            let tail = sigma_ratio_records(25, 100_000).unwrap_or_default();
            if let Some(m) = tail.last() {
                v.note(format!(
                    "from v = 25 the running max is {:.4} (at v = {})",
                    m.1, m.0
                ));
            }
        }
        Err(e) => v.check(false, e.to_string()),
    }
    for ell in [27, 23, 8] {
        match growth_report(t(ell), &default_samples(t(ell), 10_000)) {
            Ok(r) => {
                let last = r.samples.last().map(|s| (s.v, s.ratio));
                v.note(format!(
                    "trend Phi{ell} vs {}: {} samples, last {:?}",
                    r.bound_name,
                    r.samples.len(),
                    last
                ));
                for line in r.to_csv().unwrap_or_default().lines() {
                    v.note(format!("  {line}"));
                }
            }
            Err(e) => v.check(false, e.to_string()),
        }
    }
    v.timed(start, Duration::from_secs(60));
    v
}

fn main() -> ExitCode {
    let verdicts = [
        table_reproduction(),
        oracle_crosscheck(),
        worked_example(),
        number_theory(),
        lattice(),
        tilings(),
        parity(),
        asymptotics(),
    ];
    let mut unexpected = 0;
    for v in &verdicts {
        let status = match (v.passed, KNOWN.contains(&v.name)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{status} {}", v.name);
        for d in &v.detail {
            println!("    {d}");
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
