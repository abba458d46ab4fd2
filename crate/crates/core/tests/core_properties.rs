mod common;

use std::collections::HashSet;

use common::{multisets, seq};
use davkit::zerosum::{
    atoms_brute, find_proper_zero_subsum, find_proper_zero_subsum_naive, is_minimal, is_minimal_naive,
    zero_sum_subsequences, DEFAULT_NAIVE_CAP,
};
use davkit::{Alphabet, AnySequence, Element, GroundSet, GroupSpec, MixedElement, Sequence};
use proptest::prelude::*;

fn scalar_multiset(max_len: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, 1..=max_len)
}

fn ground_strategy() -> impl Strategy<Value = GroundSet> {
    let interval = (-6i64..=6, 0i64..=6).prop_map(|(lo, w)| GroundSet::interval(lo, lo + w).unwrap());
    let boxed = prop::collection::vec((-4i64..=4, 0i64..=4), 1..=3)
        .prop_map(|axes| GroundSet::boxed(axes.into_iter().map(|(lo, w)| (lo, lo + w)).collect()).unwrap());
    let cube = (1i64..=3, 1usize..=3).prop_map(|(m, d)| GroundSet::hypercube(m, d).unwrap());
    let explicit = (1usize..=3)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-5i64..=5, d), 1..=5))
        .prop_map(|pts| GroundSet::explicit(pts.into_iter().map(|c| Element::new(c).unwrap())).unwrap());
    let lattice = prop_oneof![interval, boxed, cube, explicit];
    let groups = prop_oneof![
        Just(vec![2u64]),
        Just(vec![3]),
        Just(vec![2, 2]),
        Just(vec![2, 4]),
        Just(vec![3, 6]),
    ];
    prop_oneof![
        3 => lattice.clone(),
        1 => (groups, lattice).prop_map(|(g, base)| GroundSet::product(GroupSpec::new(g).unwrap(), base).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonicalize_is_idempotent_and_preserves_length_and_sum(values in scalar_multiset(12, -9, 9)) {
        let s = Sequence::from_elements(values.iter().map(|&v| Element::scalar(v))).unwrap();
        let c = s.canonicalize().unwrap();
        prop_assert_eq!(&c, &s);
        prop_assert_eq!(c.canonicalize().unwrap(), c.clone());
        prop_assert_eq!(c.len(), values.len() as u64);
        prop_assert_eq!(c.sum().unwrap().coords()[0], values.iter().sum::<i64>());
        let mut reversed = values.clone();
        reversed.reverse();
        let r = Sequence::from_elements(reversed.iter().map(|&v| Element::scalar(v))).unwrap();
        prop_assert_eq!(r, s);
    }

    #[test]
    fn dp_agrees_with_subset_scan(values in scalar_multiset(12, -4, 4)) {
        let s = Sequence::from_elements(values.iter().map(|&v| Element::scalar(v))).unwrap();
        let dp = find_proper_zero_subsum(&s).unwrap();
        let naive = find_proper_zero_subsum_naive(&s, DEFAULT_NAIVE_CAP).unwrap();
        prop_assert_eq!(dp.is_some(), naive.is_some());
        if let Some(w) = dp {
            prop_assert!(w.sub.is_zero_sum());
            prop_assert!(!w.sub.is_empty());
            prop_assert!(w.sub.is_proper_subsequence_of(&s));
        }
        prop_assert_eq!(is_minimal(&s).unwrap(), is_minimal_naive(&s, DEFAULT_NAIVE_CAP).unwrap());
    }

    #[test]
    fn minimality_is_invariant_under_negation(values in scalar_multiset(10, -5, 5)) {
        let s = Sequence::from_elements(values.iter().map(|&v| Element::scalar(v))).unwrap();
        prop_assert_eq!(is_minimal(&s).unwrap(), is_minimal(&s.negate().unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ground_text_round_trips(g in ground_strategy()) {
        let text = g.to_string();
        let back = GroundSet::parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text.clone());
        prop_assert_eq!(back.enumerate().unwrap(), g.enumerate().unwrap());
        let spaced: String = text
            .chars()
            .flat_map(|c| if c.is_ascii_digit() { vec![c] } else { vec![' ', c, ' '] })
            .collect();
        prop_assert_eq!(GroundSet::parse(&spaced).unwrap().to_string(), text);
        let json = serde_json::to_string(&g).unwrap();
        let from_json: GroundSet = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(from_json.to_string(), g.to_string());
    }

    #[test]
    fn sequence_text_round_trips(points in prop::collection::vec((-9i64..=9, -9i64..=9, 1u64..=4), 1..=6), plane in any::<bool>()) {
        let s = Sequence::from_counts(points.iter().map(|&(a, b, k)| {
            let e = if plane { Element::new(vec![a, b]).unwrap() } else { Element::scalar(a) };
            (e, k)
        }))
        .unwrap();
        let back = AnySequence::parse(&s.to_string(), None).unwrap();
        prop_assert_eq!(back, AnySequence::from(s));
    }

    #[test]
    fn mixed_sequence_text_round_trips(points in prop::collection::vec((0i64..6, -5i64..=5, 1u64..=3), 1..=5)) {
        let group = GroupSpec::new(vec![2, 6]).unwrap();
        let s = Sequence::from_counts(points.iter().map(|&(r, x, k)| {
            (MixedElement::from_raw(&[r, r + 1], group.factors(), Element::scalar(x)).unwrap(), k)
        }))
        .unwrap();
        let back = AnySequence::parse(&s.to_string(), Some(&group)).unwrap();
        prop_assert_eq!(back, AnySequence::from(s));
    }

    #[test]
    fn enumeration_is_distinct_sorted_and_inside(g in ground_strategy()) {
        let bounds = g.lattice_bounds();
        match g.enumerate().unwrap() {
            Alphabet::Lattice(xs) => {
                prop_assert_eq!(xs.len() as u128, g.cardinality().unwrap());
                prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
                for x in &xs {
                    prop_assert!(g.contains(x));
                    for (c, &(lo, hi)) in x.coords().iter().zip(&bounds) {
                        prop_assert!(lo <= *c && *c <= hi);
                    }
                }
            }
            Alphabet::Mixed(xs) => {
                let group = g.group().unwrap();
                prop_assert_eq!(xs.len() as u128, g.cardinality().unwrap());
                let distinct: HashSet<_> = xs.iter().collect();
                prop_assert_eq!(distinct.len(), xs.len());
                for x in &xs {
                    prop_assert!(g.contains_mixed(x));
                    for (r, &n) in x.residues().iter().zip(group.factors()) {
                        prop_assert!(*r < n);
                    }
                    for (c, &(lo, hi)) in x.lattice_part().coords().iter().zip(&bounds) {
                        prop_assert!(lo <= *c && *c <= hi);
                    }
                }
            }
        }
    }
}

#[test]
fn parse_corpus_round_trips() {
    for text in [
        "[-2,4]",
        "[-1,1]^2",
        "[-3,3]^4",
        "[-1,2]x[-3,0]",
        "[0,0]x[-2,2]x[-1,1]",
        "{-3,-1,2}",
        "{(-1,0),(0,-2),(1,2)}",
        "C2x[-2,2]",
        "C2xC4x[-1,1]^2",
        "C3x{0}",
        "C2x{(-1,-1),(1,1)}",
    ] {
        let g = GroundSet::parse(text).unwrap();
        assert_eq!(g.to_string(), text, "{text}");
    }
    assert_eq!(
        GroundSet::parse("C2 x [-2,2]").unwrap(),
        GroundSet::parse("C2x[-2,2]").unwrap()
    );
}

#[test]
fn atoms_with_zero_or_opposite_pairs() {
    let alphabet: Vec<Element> = (-3..=3).map(Element::scalar).collect();
    let atoms = atoms_brute(&alphabet, 6).unwrap();
    assert!(!atoms.is_empty());
    for a in &atoms {
        let has_zero = a.multiplicity(&Element::scalar(0)) > 0;
        assert_eq!(has_zero, a.len() == 1, "{a}");
        let has_pair =
            (1..=3).any(|x| a.multiplicity(&Element::scalar(x)) > 0 && a.multiplicity(&Element::scalar(-x)) > 0);
        assert_eq!(has_pair, a.len() == 2, "{a}");
        assert!(is_minimal(&a.negate().unwrap()).unwrap());
    }
}

#[test]
fn two_letter_alphabets() {
    for x in -6i64..=-1 {
        for y in 1i64..=6 {
            let g = davkit::arith::gcd(x, y);
            let (a, b) = (y.unsigned_abs() / g, x.unsigned_abs() / g);
            let atom = seq(&[(x, a), (y, b)]);
            let alphabet = [Element::scalar(x), Element::scalar(y)];
            let atoms = atoms_brute(&alphabet, (x.unsigned_abs() + y as u64) as usize).unwrap();
            assert_eq!(atoms, vec![atom.clone()], "x={x} y={y}");
            // every zero-sum sequence over {x, y} is a power of the atom
            for i in 0..=12u64 {
                for j in 0..=12u64 {
                    if i + j == 0 {
                        continue;
                    }
                    let s = seq(&[(x, i), (y, j)]);
                    let is_power = i % a == 0 && j == i / a * b;
                    assert_eq!(s.is_zero_sum(), is_power, "x={x} y={y} i={i} j={j}");
                }
            }
            let square = atom.power(2).unwrap();
            let subs = zero_sum_subsequences(&square, DEFAULT_NAIVE_CAP).unwrap();
            assert_eq!(subs, vec![atom.clone(), square.clone()]);
        }
    }
}

#[test]
fn brute_force_examples() {
    let unit: Vec<Element> = (-1..=1).map(Element::scalar).collect();
    assert_eq!(
        atoms_brute(&unit, 3).unwrap(),
        vec![seq(&[(-1, 1), (1, 1)]), seq(&[(0, 1)])]
    );
    let pair = [Element::scalar(-2), Element::scalar(3)];
    assert_eq!(atoms_brute(&pair, 5).unwrap(), vec![seq(&[(3, 2), (-2, 3)])]);
    assert!(atoms_brute(&[Element::scalar(1)], 8).unwrap().is_empty());
}

#[test]
fn short_sequences_exhaustively() {
    // every multiset of length <= 5 over [-3, 3]: DP and subset scan agree
    let alphabet: Vec<i64> = (-3..=3).collect();
    for len in 1..=5 {
        for s in multisets(&alphabet, len) {
            assert_eq!(
                is_minimal(&s).unwrap(),
                is_minimal_naive(&s, DEFAULT_NAIVE_CAP).unwrap(),
                "{s}"
            );
            assert_eq!(s.negate().unwrap().negate().unwrap(), s);
        }
    }
}
