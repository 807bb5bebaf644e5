use kneser::intalg::{
    iu_boolean, iu_count, iu_sumset, parse_set, BoolOp, Frac, IntervalUnion, Schedule, SegmentSet,
    StructuredSet,
};
use proptest::prelude::*;

fn interval_union(max: u128) -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0..=max, 0u128..40), 0..12).prop_map(move |v| {
        IntervalUnion::new(v.into_iter().map(|(a, l)| (a, (a + l).min(max))).collect())
    })
}

fn bits(u: &IntervalUnion, n: usize) -> Vec<bool> {
    let mut b = vec![false; n];
    for x in u.iter() {
        b[x as usize] = true;
    }
    b
}

fn schedule() -> impl Strategy<Value = Schedule> {
    prop_oneof![
        (2u128..5, 1usize..6).prop_map(|(base, count)| Schedule::Geometric { base, count }),
        (1usize..5).prop_map(|count| Schedule::Superexp { count }),
        (1usize..4).prop_map(|count| Schedule::Tower { count }),
        (1usize..5).prop_map(|count| Schedule::Rec3 { count }),
        prop::collection::btree_set(1u128..3000, 1..5).prop_map(|s| Schedule::List {
            values: s.into_iter().collect()
        }),
    ]
}

fn leaf() -> impl Strategy<Value = StructuredSet> {
    prop_oneof![
        (1u128..13, prop::collection::vec(0u128..13, 0..4)).prop_map(|(m, r)| {
            StructuredSet::Periodic {
                residues: r,
                modulus: m,
            }
        }),
        (schedule(), 0u128..4, 1u128..4, 0u128..3).prop_map(|(s, p, d, extra)| {
            let lo = Frac::new(p, d).unwrap();
            let hi = Frac::new(p + extra * d + d, d).unwrap();
            StructuredSet::blocks(s, lo, hi)
        }),
        (0u128..3000, 0u128..500).prop_map(|(a, l)| StructuredSet::Interval { lo: a, hi: a + l }),
    ]
}

fn structured() -> impl Strategy<Value = StructuredSet> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), -50i128..50).prop_map(|(s, t)| StructuredSet::Shift {
                set: Box::new(s),
                by: t
            }),
            (
                inner.clone(),
                inner,
                prop_oneof![
                    Just(BoolOp::Union),
                    Just(BoolOp::Intersect),
                    Just(BoolOp::Diff)
                ]
            )
                .prop_map(|(a, b, op)| StructuredSet::binary(op, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn materialization_matches_membership(s in structured(), lo in 0u128..4000, len in 0u128..10_000) {
        let hi = lo + len;
        let u = kneser::intalg::to_intervals(&s, lo, hi).unwrap();
        for x in lo..=hi {
            prop_assert_eq!(u.contains(x), s.contains(x).unwrap(), "{} at {}", s, x);
        }
        prop_assert_eq!(s.count(lo, hi).unwrap(), u.count());
    }

    #[test]
    fn print_parse_round_trip(s in structured()) {
        let text = s.to_string();
        prop_assert_eq!(parse_set(&text).unwrap(), s);
    }

    #[test]
    fn interval_sumset_matches_bit_vectors(u in interval_union(2000), v in interval_union(2000)) {
        let cap = 2000u128;
        let s = iu_sumset(&u, &v, cap).unwrap();
        let (bu, bv) = (bits(&u, 2001), bits(&v, 2001));
        let mut direct = vec![false; 2001];
        for i in (0..=2000).filter(|&i| bu[i]) {
            for j in (0..=2000 - i).filter(|&j| bv[j]) {
                direct[i + j] = true;
            }
        }
        prop_assert_eq!(bits(&s, 2001), direct);
    }

    #[test]
    fn count_is_additive(u in interval_union(500), v in interval_union(500), lo in 0u128..300, hi in 0u128..700) {
        let union = iu_boolean(&u, &v, BoolOp::Union);
        let inter = iu_boolean(&u, &v, BoolOp::Intersect);
        prop_assert_eq!(
            iu_count(&union, lo, hi) + iu_count(&inter, lo, hi),
            iu_count(&u, lo, hi) + iu_count(&v, lo, hi)
        );
        let diff = iu_boolean(&u, &v, BoolOp::Diff);
        prop_assert_eq!(diff.count() + inter.count(), u.count());
    }

    #[test]
    fn segment_sumset_matches_brute_force(a in structured(), b in structured(), cap in 0u128..1500) {
        let sa = a.segments(0, cap).unwrap();
        let sb = b.segments(0, cap).unwrap();
        let s = match sa.sumset(&sb, cap) {
            Ok(s) => s,
            Err(kneser::Error::Capacity { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let xs: Vec<u128> = sa.iter().collect();
        let mut direct = vec![false; cap as usize + 1];
        for y in sb.iter() {
            for &x in xs.iter().take_while(|&&x| x + y <= cap) {
                direct[(x + y) as usize] = true;
            }
        }
        for z in 0..=cap {
            prop_assert_eq!(s.contains(z), direct[z as usize], "{} + {} at {}", a, b, z);
        }
    }

    #[test]
    fn periodize_hits_exactly_the_residues(a in structured(), k in 1usize..12) {
        let sa = a.segments(0, 2000).unwrap();
        let p = sa.periodize(k, 0, 100).unwrap();
        let hit: Vec<bool> = (0..k).map(|r| sa.iter().any(|x| x % k as u128 == r as u128)).collect();
        for x in 0..=100u128 {
            prop_assert_eq!(p.contains(x), hit[(x % k as u128) as usize]);
        }
    }
}

#[test]
fn schedule_growth_hypotheses() {
    let s = Schedule::Superexp { count: 12 }.values().unwrap();
    for n in 1..12 {
        assert_eq!(s[n] / s[n - 1], 1 << (n + 1));
        assert_eq!(s[n] % s[n - 1], 0);
    }
    let r = Schedule::Rec3 { count: 12 };
    let (a, b) = (r.companions().unwrap(), r.values().unwrap());
    for n in 0..12 {
        assert_eq!(b[n], (n as u128 + 1).pow(2) * a[n]);
        if n + 1 < 12 {
            assert_eq!(a[n + 1], 3 * b[n]);
        }
    }
}

#[test]
fn huge_windows_count_without_enumeration() {
    let s = parse_set("periodic(0;2) & blocks(superexp(15),1/2,1)").unwrap();
    let top = Schedule::Superexp { count: 15 }.values().unwrap()[14];
    let n = s.count(0, top).unwrap();
    let sched = Schedule::Superexp { count: 15 }.values().unwrap();
    let expected: u128 = sched
        .iter()
        .map(|&v| if v == 2 { 1 } else { v / 4 + 1 })
        .sum();
    assert_eq!(n, expected);
    assert!(SegmentSet::interval(0, top).count() == top + 1);
}
