use mertens_core::ap_constants::ap_constants;
use mertens_core::build_table;
use mertens_core::chebotarev::{
    class_scan, frobenius_class, g_bruteforce_estimate, g_quadratic_exact, pi_chebotarev, FrobeniusOutcome,
    GaloisSetting, INERT, SPLIT,
};
use mertens_core::sieve::{pi_ap, ApTarget};

#[test]
fn gaussian_split_primes_are_one_mod_four() {
    let table = build_table(1_000_000).unwrap();
    let setting = GaloisSetting::Quadratic(-4);
    for p in table.primes() {
        let split = frobenius_class(&setting, p).unwrap() == FrobeniusOutcome::Class(SPLIT);
        assert_eq!(split, p % 4 == 1, "p = {p}");
    }
}

#[test]
fn cyclotomic_counts_are_progression_counts() {
    let table = build_table(200_000).unwrap();
    for q in [1u64, 3, 8, 10, 12] {
        let setting = GaloisSetting::Cyclotomic(q);
        for class in setting.classes() {
            let a = if q == 1 { 1 } else { class.id };
            let ap = ApTarget::new(q, a).unwrap();
            for t in [10.0, 1e3, 2e5] {
                assert_eq!(pi_chebotarev(&table, t, &setting, class.id).unwrap(), pi_ap(&table, t, ap).unwrap());
            }
        }
    }
}

#[test]
fn quadratic_constants_match_progression_constants() {
    let table = build_table(1_000_000).unwrap();
    for (d, q) in [(-4i64, 4u64), (-3, 3)] {
        let exact = g_quadratic_exact(&table, d, SPLIT, 1_000_000).unwrap();
        let ap = ap_constants(&table, ApTarget::new(q, 1).unwrap(), 1_000_000).unwrap();
        assert!((exact.g - ap.g).abs() <= 1e-8);
        assert!((exact.big_g - ap.big_g).abs() <= 1e-8);
        let inert = g_quadratic_exact(&table, d, INERT, 1_000_000).unwrap();
        let ap = ap_constants(&table, ApTarget::new(q, q - 1).unwrap(), 1_000_000).unwrap();
        assert!((inert.g - ap.g).abs() <= 1e-8);
    }
}

#[test]
fn estimates_track_exact_constants() {
    let table = build_table(1_000_000).unwrap();
    for d in [-4i64, 5, -23] {
        for class in [SPLIT, INERT] {
            let exact = g_quadratic_exact(&table, d, class, 1_000_000).unwrap();
            let est = g_bruteforce_estimate(&table, &GaloisSetting::Quadratic(d), class, 1e6).unwrap();
            assert!((exact.g - est.g).abs() < 2e-2, "D={d} class={class}");
            assert!(est.confidence.unwrap() < 5e-2);
        }
    }
}

#[test]
fn snapshots_are_cumulative() {
    let table = build_table(100_000).unwrap();
    let snaps = class_scan(&table, &GaloisSetting::CubicS3, &[100, 1000, 100_000]).unwrap();
    assert_eq!(snaps[0].counts, vec![1, 14, 9]);
    assert_eq!(snaps[0].ramified_count, 1);
    for w in snaps.windows(2) {
        assert!(w[0].counts.iter().zip(&w[1].counts).all(|(a, b)| a <= b));
    }
    assert_eq!(snaps[2].total_count, 9592);
}
