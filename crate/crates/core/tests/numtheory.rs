use tma_core::lattice::{
    count_conjugation_integral, g1_filter_count, g2_filter_count, G2Condition,
};
use tma_core::numtheory::*;
use tma_core::IntMatrix2;

const SYSTEMS: [CongruenceSystem; 7] = [
    CongruenceSystem::RhoIJ(1, 1),
    CongruenceSystem::RhoIJ(0, 1),
    CongruenceSystem::RhoIJ(2, 0),
    CongruenceSystem::RhoIJ(0, -1),
    CongruenceSystem::Rho5,
    CongruenceSystem::Rho6,
    CongruenceSystem::Rho7,
];

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn closed_forms_equal_divisor_sums_to_ten_thousand() {
    for form in FForm::ALL {
        for n in 1..=10_000 {
            assert_eq!(
                form.closed(n).unwrap(),
                form.divisor_sum(n).unwrap(),
                "{form:?}({n})"
            );
        }
    }
}

#[test]
fn reflection_counts_coincide() {
    for n in 1..=10_000 {
        let x = f3(n).unwrap();
        assert_eq!(f4(n).unwrap(), x);
        assert_eq!(f8(n).unwrap(), x);
    }
}

#[test]
fn root_counts_are_multiplicative_on_coprime_pairs() {
    for sys in SYSTEMS {
        let table: Vec<u64> = (0..=200)
            .map(|m| {
                if m == 0 {
                    0
                } else {
                    count_congruence_roots(sys, m).unwrap()
                }
            })
            .collect();
        for m1 in 1..=200u64 {
            for m2 in 1..=200u64 {
                if gcd(m1, m2) == 1 {
                    assert_eq!(
                        count_congruence_roots(sys, m1 * m2).unwrap(),
                        table[m1 as usize] * table[m2 as usize],
                        "{} at {m1}*{m2}",
                        sys.name()
                    );
                }
            }
        }
    }
}

#[test]
fn root_counts_match_exhaustive_search() {
    for sys in SYSTEMS {
        for m in 1..=2000 {
            assert_eq!(
                count_congruence_roots(sys, m).unwrap(),
                count_congruence_roots_brute(sys, m)
            );
        }
    }
}

#[test]
fn powers_of_two() {
    for k in 1..=12 {
        assert_eq!(
            count_congruence_roots(CongruenceSystem::RhoIJ(1, 1), 1 << k).unwrap(),
            0
        );
    }
    for k in 3..=20 {
        assert_eq!(
            count_congruence_roots(CongruenceSystem::RhoIJ(0, -1), 1 << k).unwrap(),
            4
        );
    }
}

#[test]
fn glide_count_identities() {
    for n in 1..=10_000 {
        assert_eq!(g(n).unwrap(), g_from_tau(n).unwrap());
        assert!(g(n).unwrap() <= 2 * tau(n).unwrap());
    }
}

#[test]
fn f2_and_divisors_one_mod_four() {
    // The count of divisors ≡ 1 (mod 4) is not f2; the signed count
    // (≡ 1 minus ≡ 3) is.
    let ones = |n: u64| {
        factorize(n)
            .unwrap()
            .divisors()
            .iter()
            .filter(|d| *d % 4 == 1)
            .count() as u64
    };
    let threes = |n: u64| {
        factorize(n)
            .unwrap()
            .divisors()
            .iter()
            .filter(|d| *d % 4 == 3)
            .count() as u64
    };
    let first = (2..=10_000u64).find(|&n| f2(n).unwrap() != ones(n));
    assert_eq!(first, Some(3));
    for n in 2..=10_000u64 {
        assert_eq!(f2(n).unwrap(), ones(n) - threes(n), "{n}");
    }
}

#[test]
fn lattice_filters_reproduce_the_counting_functions() {
    let rho60 = IntMatrix2::new(0, -1, 1, 1);
    let psi90 = IntMatrix2::new(0, -1, 1, 0);
    let refl = IntMatrix2::new(1, 1, 0, -1);
    let swap = IntMatrix2::new(0, 1, 1, 0);
    let glide = IntMatrix2::new(-1, 0, 0, 1);
    for n in 1..=100 {
        assert_eq!(
            count_conjugation_integral(&rho60, n).unwrap(),
            f1(n).unwrap(),
            "f1({n})"
        );
        assert_eq!(
            count_conjugation_integral(&psi90, n).unwrap(),
            f2(n).unwrap(),
            "f2({n})"
        );
        assert_eq!(
            count_conjugation_integral(&refl, n).unwrap(),
            f3(n).unwrap(),
            "f3({n})"
        );
        assert_eq!(
            count_conjugation_integral(&swap, n).unwrap(),
            f4(n).unwrap(),
            "f4({n})"
        );
        assert_eq!(
            count_conjugation_integral(&glide, n).unwrap(),
            g(n).unwrap(),
            "g({n})"
        );
    }
}

#[test]
fn g1_table_agrees_with_its_filter_only_at_odd_n() {
    for n in (1..=99).step_by(2) {
        assert_eq!(g1(n).unwrap(), g1_filter_count(n).unwrap(), "{n}");
    }
    assert_eq!(g1_filter_count(2).unwrap(), 3);
    assert_eq!(g1(2).unwrap(), 5);
    assert_eq!(g1(3).unwrap(), 3);
}

#[test]
fn g2_filters() {
    let ab: Vec<u64> = (1..=60)
        .map(|n| g2_filter_count(n, G2Condition::ThreeBSquaredPlusTwoAB).unwrap())
        .collect();
    let f3v: Vec<u64> = (1..=60).map(|n| f3(n).unwrap()).collect();
    assert_eq!(ab, f3v);
    let bd: Vec<u64> = (1..=60)
        .map(|n| g2_filter_count(n, G2Condition::ThreeBSquaredPlusTwoBD).unwrap())
        .collect();
    let g2v: Vec<u64> = (1..=60).map(|n| g2(n).unwrap()).collect();
    assert_ne!(bd, g2v);
    assert_ne!(ab, g2v);
    assert_eq!(g2(3).unwrap(), 3);
    assert_eq!(g2(2).unwrap(), 1);
}
