//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! straight to stdout, so the lines show up even under output capture.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use kneser::folner::{make_prefix, DensityOptions, PrefixKind};
use kneser::grouplat::{enumerate_sublattices, Ambient, FiniteGroup, GroupRef};
use kneser::intalg::{iu_sumset, parse_set, IntervalUnion, Schedule};
use kneser::refine::{
    density_gap, half_blocks_example, rec3_example, refinement_search, tower_example,
    verify_kneser_lad, Instance, SearchOptions, TOWER_WITNESS_FLOOR,
};
use kneser::rng::SplitMix64;
use kneser::setalg::{sumset, sumset_fft, DenseSet};
use kneser::verify::{sweep_exhaustive, sweep_random, SweepOptions, SweepStats};
use kneser::Exact;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    let tag = if pass { "PASS" } else { "FAIL" };
    writeln!(out, "[acceptance {id}] {tag} {name}: {detail}").unwrap();
    out.flush().unwrap();
}

fn group(spec: &str) -> GroupRef {
    Ambient::Finite(FiniteGroup::parse(spec).unwrap()).into_ref()
}

const SWEEP_GROUPS: [&str; 13] = [
    "2", "3", "4", "5", "6", "7", "8", "9", "10", "2x2", "2x4", "3x3", "2x2x2",
];

/// Criteria 1 and 2 share one pass over every group.
fn sweep_all() -> (Vec<SweepStats>, Duration) {
    let start = Instant::now();
    let stats = SWEEP_GROUPS
        .iter()
        .map(|g| {
            sweep_exhaustive(&group(g), &SweepOptions::default())
                .unwrap()
                .stats
        })
        .collect();
    (stats, start.elapsed())
}

#[test]
fn criterion_1_and_2_exhaustive_sweeps() {
    let (stats, elapsed) = sweep_all();
    let mut pairs = 0;
    let mut deficient = 0;
    let mut kneser = 0;
    let mut lemmas = [0u64; 4];
    let mut sane = true;
    for s in &stats {
        let n = s
            .group
            .split('x')
            .map(|m| m.parse::<u64>().unwrap())
            .product::<u64>();
        sane &= s.pairs_tested == ((1u64 << n) - 1).pow(2);
        sane &= s.two_subgroups_checked == s.pairs_tested;
        sane &= s.stabilizer_histogram.values().sum::<u64>() == s.deficient_pairs;
        sane &= s.jin_min_slack.is_none_or(|m| m >= 0);
        pairs += s.pairs_tested;
        deficient += s.deficient_pairs;
        kneser += s.violations.kneser_equation.count;
        let v = &s.violations;
        for (t, c) in lemmas.iter_mut().zip([
            &v.jin_analog,
            &v.push_analog,
            &v.gap_bound,
            &v.two_subgroups,
        ]) {
            *t += c.count;
        }
    }
    let pass1 = kneser == 0 && sane && elapsed <= Duration::from_secs(600);
    report(
        1,
        "exhaustive Kneser sweep over 13 groups",
        pass1,
        &format!(
            "{pairs} pairs, {deficient} deficient, {kneser} violations, {:.1}s (limit 600s)",
            elapsed.as_secs_f64()
        ),
    );
    let pass2 = lemmas.iter().all(|&c| c == 0) && sane;
    report(
        2,
        "lemma analogs in the same sweep",
        pass2,
        &format!(
            "violations jin={} push={} gap={} two_subgroups={}",
            lemmas[0], lemmas[1], lemmas[2], lemmas[3]
        ),
    );
    assert!(pass1 && pass2);
}

fn bit_sumset(u: &IntervalUnion, v: &IntervalUnion, cap: u128) -> Vec<bool> {
    let mut out = vec![false; cap as usize + 1];
    let (xs, ys): (Vec<u128>, Vec<u128>) = (u.iter().collect(), v.iter().collect());
    for &x in &xs {
        for &y in &ys {
            if x + y <= cap {
                out[(x + y) as usize] = true;
            }
        }
    }
    out
}

fn random_union(rng: &mut SplitMix64, max: u128) -> IntervalUnion {
    let pieces = 1 + rng.next_u64() % 8;
    let v = (0..pieces)
        .map(|_| {
            let a = (rng.next_u64() as u128) % (max + 1);
            let len = (rng.next_u64() as u128) % 120;
            (a, (a + len).min(max))
        })
        .collect();
    IntervalUnion::new(v)
}

#[test]
fn criterion_3_oracle_equivalences() {
    const MODULI: [&str; 12] = [
        "7", "64", "100", "2x2x3", "5x5x5", "4096", "8x8x8", "16x256", "3x1365", "2x2048", "1000",
        "12x12",
    ];
    let start = Instant::now();
    let mut fft_mismatch = 0;
    for i in 0..10_000u64 {
        let g = group(MODULI[(i % MODULI.len() as u64) as usize]);
        let mut rng = SplitMix64::new(SplitMix64::at(3, i));
        let n = g.order();
        let draw = |rng: &mut SplitMix64| {
            let keep = 1 + rng.next_u64() % 8;
            let elems: Vec<usize> = (0..n).filter(|_| rng.next_u64() % 8 < keep).collect();
            DenseSet::from_elements(g.clone(), &elems).unwrap()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        if sumset_fft(&a, &b).unwrap() != sumset(&a, &b).unwrap() {
            fft_mismatch += 1;
        }
    }
    let mut iu_mismatch = 0;
    for i in 0..1_000u64 {
        let mut rng = SplitMix64::new(SplitMix64::at(4, i));
        let (u, v) = (random_union(&mut rng, 2000), random_union(&mut rng, 2000));
        let got = iu_sumset(&u, &v, 4000).unwrap();
        let want = bit_sumset(&u, &v, 4000);
        if (0..=4000u128).any(|x| got.contains(x) != want[x as usize]) {
            iu_mismatch += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = fft_mismatch == 0 && iu_mismatch == 0 && elapsed <= Duration::from_secs(120);
    report(
        3,
        "FFT and interval sumsets match their oracles",
        pass,
        &format!(
            "fft mismatches {fft_mismatch}/10000, interval mismatches {iu_mismatch}/1000, {:.1}s (limit 120s)",
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_half_blocks_refinement() {
    let start = Instant::now();
    let r = half_blocks_example(10, &Exact::new(1, 50)).unwrap();
    let elapsed = start.elapsed();
    let pass = r.pass && elapsed <= Duration::from_secs(10);
    let detail = format!(
        "d(A)={:.4} d(A+A)={:.4} d(A+A+kZ)={} family={} d_Psi(A+A)={:.4} gap={:.4} {:.2}s (limit 10s)",
        r.density_a.tail_min.to_f64(),
        r.density_aa.tail_min.to_f64(),
        r.density_aak.iter().map(|d| d.tail_min.to_string()).collect::<Vec<_>>().join("/"),
        r.refinement.family,
        r.refinement.densities.ab.to_f64(),
        r.refinement.densities.gap.to_f64(),
        elapsed.as_secs_f64()
    );
    report(
        4,
        "half-blocks along superexponential scales",
        pass,
        &detail,
    );
    assert!(pass, "{:#?}", r.criteria);
}

#[test]
fn criterion_5_tower() {
    let t = tower_example(5).unwrap();
    let ok_floor = t.witnesses.iter().all(|(_, w)| {
        w.as_ref()
            .is_some_and(|w| w.parse::<u128>().unwrap() > TOWER_WITNESS_FLOOR)
    });
    let pass = t.pass && ok_floor;
    let detail = format!(
        "d(A)={:.4} d(A+B)={:.4} witnesses {}",
        t.density_a.tail_min.to_f64(),
        t.density_ab.tail_min.to_f64(),
        t.criteria[2].value
    );
    report(5, "tower of doubling intervals", pass, &detail);
    assert!(pass, "{:#?}", t.criteria);
}

#[test]
fn criterion_6_rec3() {
    let c = rec3_example(10).unwrap();
    let detail = format!(
        "d_F(A)={:.4} lower d(A)={:.4} lower d(A+A)={:.4}",
        c.density_a.tail_min.to_f64(),
        c.lower_a.tail_min.to_f64(),
        c.lower_aa.tail_min.to_f64()
    );
    report(
        6,
        "rec3 blocks: prefix density vs lower density",
        c.pass,
        &detail,
    );
    assert!(c.pass, "{:#?}", c.criteria);
}

#[test]
fn criterion_7_periodic_kneser_lad() {
    let a = parse_set("periodic(0,1;5)").unwrap();
    let r = verify_kneser_lad(&a, &a, 5, 1_000_000, &Exact::zero()).unwrap();
    let values_ok = r.d_ab == Exact::new(3, 5)
        && r.d_a_k == Exact::new(2, 5)
        && r.d_b_k == Exact::new(2, 5)
        && r.d_ab == &(&r.d_a_k + &r.d_b_k) - &Exact::new(1, 5);
    let pass = r.pass && r.item1_exact && r.item2_exact && r.threshold == "0" && values_ok;
    let detail = format!(
        "d(A+B)={} d(A+5Z)={} d(B+5Z)={} threshold={}",
        r.d_ab, r.d_a_k, r.d_b_k, r.threshold
    );
    report(7, "periodic density identity with k=5", pass, &detail);
    assert!(pass);
}

/// Subgroups of order `n` in `Z_n × Z_n` by closing every pair of generators.
fn sublattice_oracle(n: i64) -> BTreeSet<Vec<bool>> {
    let mut found = BTreeSet::new();
    let idx = |x: i64, y: i64| (x.rem_euclid(n) * n + y.rem_euclid(n)) as usize;
    for g in 0..n * n {
        for h in g..n * n {
            let mut mem = vec![false; (n * n) as usize];
            for i in 0..n {
                for j in 0..n {
                    mem[idx(i * (g / n) + j * (h / n), i * (g % n) + j * (h % n))] = true;
                }
            }
            if mem.iter().filter(|&&b| b).count() as i64 == n {
                found.insert(mem);
            }
        }
    }
    found
}

#[test]
fn criterion_8_hnf_counts() {
    let want = [1usize, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28];
    let mut got = Vec::new();
    let mut oracle_ok = true;
    for n in 1..=12i64 {
        let lattices = enumerate_sublattices(2, n as u64).unwrap();
        got.push(lattices.len());
        let images: BTreeSet<Vec<bool>> = lattices
            .iter()
            .map(|l| {
                (0..n * n)
                    .map(|p| l.contains(&[p / n, p % n]).unwrap())
                    .collect()
            })
            .collect();
        oracle_ok &= images.len() == lattices.len() && images == sublattice_oracle(n);
    }
    let pass = got == want && oracle_ok;
    report(
        8,
        "sublattices of Z^2 by index 1..12",
        pass,
        &format!(
            "counts {got:?}, brute-force oracle {}",
            if oracle_ok { "agrees" } else { "disagrees" }
        ),
    );
    assert!(pass);
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn criterion_9_determinism() {
    let opts = |t| SweepOptions {
        threads: Some(t),
        ..SweepOptions::default()
    };
    let z8 = group("8");
    let ex: Vec<SweepStats> = [1, 4, 4]
        .iter()
        .map(|&t| sweep_exhaustive(&z8, &opts(t)).unwrap().stats)
        .collect();
    let sampled = group("2x6");
    let sm: Vec<SweepStats> = [1, 4, 4]
        .iter()
        .map(|&t| {
            sweep_exhaustive(
                &sampled,
                &SweepOptions {
                    sample_a: 32,
                    seed: 9,
                    ..opts(t)
                },
            )
            .unwrap()
            .stats
        })
        .collect();
    let z256 = group("256");
    let rnd: Vec<SweepStats> = [1, 4, 4]
        .iter()
        .map(|&t| sweep_random(&z256, 10_000, 42, &opts(t)).unwrap().stats)
        .collect();
    let sweeps_ok = [&ex, &sm, &rnd]
        .iter()
        .all(|v| v[0] == v[1] && v[1] == v[2]);

    let a = parse_set("periodic(0;2) & blocks(superexp(7),1/2,1)").unwrap();
    let f = make_prefix(&PrefixKind::Intervals(Schedule::Superexp { count: 7 })).unwrap();
    let search = |threads| {
        in_pool(threads, || {
            let inst = Instance::Line(&a, &a);
            let delta = density_gap(inst, &f, &DensityOptions::default())
                .unwrap()
                .delta;
            let r = refinement_search(
                inst,
                &f,
                2,
                &delta,
                &Exact::new(1, 50),
                &SearchOptions::default(),
            )
            .unwrap();
            serde_json::to_string(&r).unwrap()
        })
    };
    let runs: Vec<String> = [1, 4, 4].iter().map(|&t| search(t)).collect();
    let search_ok = runs[0] == runs[1] && runs[1] == runs[2];
    let pass = sweeps_ok && search_ok;
    report(
        9,
        "reports identical across thread counts and reruns",
        pass,
        &format!(
            "sweeps (Z8 exhaustive, 2x6 sampled, Z256 random seed 42) {}, refinement search {}",
            if sweeps_ok { "identical" } else { "differ" },
            if search_ok { "identical" } else { "differ" }
        ),
    );
    assert!(pass);
}
