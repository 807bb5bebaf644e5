use kneser::folner::{make_prefix, DensityOptions, FolnerPrefix, PrefixKind, Window};
use kneser::intalg::{BoolOp, Frac, Schedule, StructuredSet};
use kneser::refine::{
    density_gap, kj_stabilizer_periodic, refinement_search, verify_folner_theorem, Instance,
    Period, SearchOptions,
};
use kneser::{Error, Exact};
use proptest::prelude::*;

fn residues(m: u128) -> impl Strategy<Value = Vec<u128>> {
    prop::collection::btree_set(0..m, 1..=m as usize).prop_map(|s| s.into_iter().collect())
}

/// Periodic sets, optionally thinned to half-blocks along a fast schedule.
fn line_set() -> impl Strategy<Value = StructuredSet> {
    (2u128..7)
        .prop_flat_map(|m| (Just(m), residues(m), any::<bool>()))
        .prop_map(|(m, r, thin)| {
            let p = StructuredSet::periodic(&r, m);
            if thin {
                let half = StructuredSet::blocks(
                    Schedule::Superexp { count: 6 },
                    Frac::new(1, 2).unwrap(),
                    Frac::new(1, 1).unwrap(),
                );
                StructuredSet::binary(BoolOp::Intersect, p, half)
            } else {
                p
            }
        })
}

fn prefix() -> FolnerPrefix {
    make_prefix(&PrefixKind::Intervals(Schedule::Superexp { count: 6 })).unwrap()
}

/// Whole periods past `2m`, where sums of `m`-periodic sets are periodic too,
/// so densities are exact on every term.
fn period_prefix(m: u128) -> FolnerPrefix {
    let terms = [1u128, 2, 5, 9]
        .iter()
        .map(|j| Window::interval(2 * m + 1, 2 * m + m * j))
        .collect();
    FolnerPrefix::new(format!("multiples of {m}"), terms).unwrap()
}

fn eps() -> Exact {
    Exact::new(1, 50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn searcher_agrees_with_checker(a in line_set(), b in line_set(), k in 1usize..5) {
        let f = prefix();
        let inst = Instance::Line(&a, &b);
        let delta = density_gap(inst, &f, &DensityOptions::default()).unwrap().delta;
        prop_assume!(delta > Exact::zero());
        let opts = SearchOptions::default();
        let r = refinement_search(inst, &f, k, &delta, &eps(), &opts).unwrap();
        let again = refinement_search(inst, &f, k, &delta, &eps(), &opts).unwrap();
        prop_assert_eq!(&r, &again);
        if r.feasible {
            let c = verify_folner_theorem(inst, &f, &r.psi, k, &delta, &eps(), &opts.density).unwrap();
            prop_assert!(c.pass, "{:?}", c.residuals);
            prop_assert_eq!(c.residuals, r.residuals);
        }
    }

    #[test]
    fn residue_filter_of_the_sumset_closes_exactly(k in 2u128..7, ra in residues(6), rb in residues(6)) {
        let ra: Vec<u128> = ra.into_iter().filter(|&x| x < k).collect();
        let rb: Vec<u128> = rb.into_iter().filter(|&x| x < k).collect();
        prop_assume!(!ra.is_empty() && !rb.is_empty());
        let (a, b) = (StructuredSet::periodic(&ra, k), StructuredSet::periodic(&rb, k));
        let mut sum: Vec<u128> = ra.iter().flat_map(|x| rb.iter().map(move |y| (x + y) % k)).collect();
        sum.sort_unstable();
        sum.dedup();
        let f = period_prefix(k);
        let filter = StructuredSet::periodic(&sum, k);
        let psi_terms = f
            .terms
            .iter()
            .map(|w| Window::Line(filter.segments(2 * k + 1, w.max().unwrap() as u128).unwrap()))
            .collect();
        let psi = FolnerPrefix::new("residue filter", psi_terms).unwrap();
        let c = verify_folner_theorem(
            Instance::Line(&a, &b),
            &f,
            &psi,
            k as usize,
            &Exact::new(1, 1000),
            &Exact::zero(),
            &DensityOptions::default(),
        )
        .unwrap();
        prop_assert_eq!(c.residuals.r2, Exact::zero());
    }

    #[test]
    fn gap_is_bounded_by_densities_and_index(m in 2u128..13, ra in residues(12), rb in residues(12)) {
        let ra: Vec<u128> = ra.into_iter().filter(|&x| x < m).collect();
        let rb: Vec<u128> = rb.into_iter().filter(|&x| x < m).collect();
        prop_assume!(!ra.is_empty() && !rb.is_empty());
        let (a, b) = (StructuredSet::periodic(&ra, m), StructuredSet::periodic(&rb, m));
        let g = density_gap(Instance::Line(&a, &b), &period_prefix(m), &DensityOptions::default()).unwrap();
        prop_assume!(g.delta > Exact::zero());
        match kj_stabilizer_periodic(&a, &b, &Period::Modulus(m)) {
            Ok(kj) => {
                let bound = Exact::new(1, kj.index as i64);
                prop_assert!(g.delta <= g.a.tail_min && g.delta <= g.b.tail_min);
                prop_assert!(g.delta <= bound, "gap {} above 1/{}", g.delta, kj.index);
            }
            Err(e) => prop_assert!(matches!(e, Error::Hypothesis(_)), "{e}"),
        }
    }
}
