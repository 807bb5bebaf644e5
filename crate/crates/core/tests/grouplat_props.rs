use kneser::grouplat::{enumerate_subgroups, hnf_reduce, quotient, Ambient, FiniteGroup, GroupRef};
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupRef> {
    prop::collection::vec(1usize..7, 1..4)
        .prop_filter("small", |m| m.iter().product::<usize>() <= 72)
        .prop_map(|m| Ambient::Finite(FiniteGroup::new(&m).unwrap()).into_ref())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..10, 2), 2).prop_filter("nonsingular", |m| {
        m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subgroups_are_closed_and_divide(g in group()) {
        for s in enumerate_subgroups(&g).unwrap() {
            prop_assert!(s.contains(0));
            prop_assert_eq!(g.order() % s.order(), 0);
            for &x in s.elements() {
                prop_assert!(s.contains(g.neg(x)));
                for &y in s.elements() {
                    prop_assert!(s.contains(g.add(x, y)));
                }
            }
        }
    }

    #[test]
    fn quotient_is_a_homomorphism(g in group(), pick in any::<prop::sample::Index>()) {
        let subs = enumerate_subgroups(&g).unwrap();
        let k = &subs[pick.index(subs.len())];
        let q = quotient(&g, k).unwrap();
        prop_assert_eq!(q.order() * k.order(), g.order());
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = q.project_index(g.add(x, y)).unwrap();
                let rhs = q.add(q.project_index(x).unwrap(), q.project_index(y).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn hnf_ignores_unimodular_row_operations(m in matrix(), ops in prop::collection::vec((0usize..2, -3i64..4, any::<bool>()), 0..6)) {
        let base = hnf_reduce(&m).unwrap();
        prop_assert_eq!(hnf_reduce(base.hnf()).unwrap(), base.clone());
        let mut w = m.clone();
        for (r, c, swap) in ops {
            let (src, dst) = (w[1 - r].clone(), &mut w[r]);
            for (d, s) in dst.iter_mut().zip(&src) {
                *d += c * s;
            }
            if swap {
                w.swap(0, 1);
                w[0].iter_mut().for_each(|e| *e = -*e);
            }
        }
        prop_assert_eq!(hnf_reduce(&w).unwrap(), base);
    }
}
