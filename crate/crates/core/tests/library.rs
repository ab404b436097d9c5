//! Cross-module checks through the public API.

use semithermo::dynamics::{reduce_affine, SemigroupSpec};
use semithermo::periodic::{fix_sum_brute_force, fix_sum_closed_form, mean_fix_growth};
use semithermo::separation::exact_cover_count;
use semithermo::specprobe::{reverify_witness, strong_spec_witness, uniform_exactness_n, Segment, Verdict};
use semithermo::words::Word;

fn s235() -> SemigroupSpec {
    SemigroupSpec::parse("lin:2,lin:3,lin:5").unwrap()
}

#[test]
fn fixed_point_sum_matches_enumeration() {
    let s = s235();
    for n in 1..=5 {
        assert_eq!(fix_sum_closed_form(&s, n), fix_sum_brute_force(&s, n, 1 << 20).unwrap());
    }
    let g = mean_fix_growth(&s, 1, 15).unwrap();
    assert!((g.rate - g.closed_form_limit).abs() < 1e-4);
}

#[test]
fn cover_count_is_degree_over_eps() {
    let s = s235();
    let a = reduce_affine(&Word::new(vec![0, 1, 2]), &s).unwrap();
    assert_eq!(exact_cover_count(&a, 1.0 / 64.0).unwrap(), 30 * 64);
}

#[test]
fn witness_reverifies_exactly() {
    let s = s235();
    let segs = [
        Segment { x: 0.2, word: Word::new(vec![1, 1, 1]) },
        Segment { x: 0.7, word: Word::new(vec![1, 1]) },
    ];
    let bridges = [Word::new(vec![0; 4])];
    let r = strong_spec_witness(&s, &segs, &bridges, 0.05).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.p, Some(u64::from(uniform_exactness_n(&s, 0.05).unwrap())));
    assert!(reverify_witness(&s, &segs, &bridges, &r.exact_point().unwrap(), 0.05).unwrap());
}
