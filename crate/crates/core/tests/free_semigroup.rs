use proptest::prelude::*;
use ualg_core::free::{build_truncated, search_bounded_retraction, SearchStep};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn concatenation_is_associative_and_cancellative(
        g in 1usize..=3,
        words in proptest::collection::vec(proptest::collection::vec(0usize..3, 1..4), 3),
    ) {
        let t = build_truncated(&["a", "b", "c"][..g], 9).unwrap();
        let w: Vec<usize> = words
            .iter()
            .map(|l| t.word_from_letters(&l.iter().map(|c| c % g).collect::<Vec<_>>()).unwrap())
            .collect();
        let (u, v, x) = (w[0], w[1], w[2]);
        let left = t.concat(t.concat(u, v).unwrap(), x).unwrap();
        let right = t.concat(u, t.concat(v, x).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(t.length(left), t.length(u) + t.length(v) + t.length(x));
        let mut letters = t.letters(u);
        letters.extend(t.letters(v));
        prop_assert_eq!(t.letters(t.concat(u, v).unwrap()), letters);
        if t.concat(u, v) == t.concat(u, x) {
            prop_assert_eq!(v, x);
        }
        if t.concat(v, u) == t.concat(x, u) {
            prop_assert_eq!(v, x);
        }
    }

    #[test]
    fn bounds_above_the_image_have_no_retraction(g in 1usize..=2, k in 1usize..=4, extra in 1usize..=3) {
        let bound = if g == 1 { k + extra + 3 } else { (k + extra).min(6) };
        prop_assume!(bound > k);
        let t = build_truncated(&["a", "b"][..g], bound).unwrap();
        let r = search_bounded_retraction(&t, k).unwrap();
        prop_assert!(r.retraction.is_none());
        prop_assert_eq!(r.first_conflict_length, Some(k + 1));
        let conflict = r.transcript.iter().any(|s| matches!(s, SearchStep::Conflict { .. }));
        prop_assert!(conflict);
    }

    #[test]
    fn equal_bounds_admit_only_the_identity(g in 1usize..=2, k in 1usize..=5) {
        let t = build_truncated(&["a", "b"][..g], k).unwrap();
        let map = search_bounded_retraction(&t, k).unwrap().retraction.unwrap();
        prop_assert!(map.iter().all(|(w, r)| w == r));
    }
}

#[test]
fn exhaustive_associativity_and_cancellation() {
    for (gens, bound) in [(&["g"][..], 24), (&["a", "b"][..], 5), (&["a", "b", "c"][..], 3)] {
        let t = build_truncated(gens, bound).unwrap();
        let n = t.len();
        for u in 0..n {
            for v in 0..n {
                let Some(uv) = t.concat(u, v) else { continue };
                for w in 0..n {
                    if let (Some(l), Some(vw)) = (t.concat(uv, w), t.concat(v, w)) {
                        assert_eq!(Some(l), t.concat(u, vw));
                    }
                    if w != v {
                        assert!(t.concat(u, w).is_none() || t.concat(u, w) != Some(uv));
                        assert!(t.concat(w, u).is_none() || t.concat(w, u) != t.concat(v, u));
                    }
                }
            }
        }
    }
}
