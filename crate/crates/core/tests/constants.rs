use mertens_core::ap_constants::{g_star, g_star_deviation, ModulusConstants};
use mertens_core::arith::{gcd, is_prime_u64, totient};
use mertens_core::build_table;
use mertens_core::sieve::ApTarget;

#[test]
fn two_forms_of_g_agree() {
    let table = build_table(1_000_000).unwrap();
    for q in 1..=30 {
        let m = ModulusConstants::new(&table, q, 1_000_000).unwrap();
        for c in m.all_constants().unwrap() {
            assert!((c.big_g - c.big_g_alt).abs() <= 2.0 * c.tail_bound + 1e-8, "{c:?}");
        }
    }
}

#[test]
fn constants_depend_only_on_the_class() {
    let table = build_table(100_000).unwrap();
    for q in [5u64, 12, 21] {
        let m = ModulusConstants::new(&table, q, 100_000).unwrap();
        for a in (1..q).filter(|&a| gcd(a, q) == 1) {
            let base = m.script_l(a).unwrap();
            for k in 1..4 {
                assert_eq!(m.script_l(a + k * q).unwrap(), base);
            }
        }
    }
}

#[test]
fn g_close_to_g_star_for_large_moduli() {
    let cutoff = 1_000_000;
    let table = build_table(cutoff).unwrap();
    let mut cases = Vec::new();
    for a in (2..=50u64).filter(|&a| is_prime_u64(a)) {
        for q in [a + 1, 3 * a + 2, 211, 1000, 4099, 10_000] {
            if q > a && q <= 10_000 && gcd(q, a) == 1 {
                cases.push((q, a));
            }
        }
    }
    cases.sort_unstable();
    cases.dedup();
    let mut by_q: Vec<u64> = cases.iter().map(|&(q, _)| q).collect();
    by_q.dedup();
    for q in by_q {
        let m = ModulusConstants::new(&table, q, cutoff).unwrap();
        for &(_, a) in cases.iter().filter(|c| c.0 == q) {
            let c = m.constants(a).unwrap();
            assert_eq!(c.g_star, g_star(ApTarget::new(q, a).unwrap()));
            let dev = g_star_deviation(&c, totient(q)).unwrap();
            assert!(dev <= 20.0, "q={q} a={a}: {dev}");
        }
    }
}
