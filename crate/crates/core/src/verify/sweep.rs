use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::grouplat::{enumerate_subgroups, Ambient, GroupRef, Subgroup, SUBGROUP_SWEEP_MAX};
use crate::rng::SplitMix64;
use crate::setalg::DenseSet;

use super::checks::{
    gap_with, jin_slack, jin_with, kneser_with, push_with, two_subgroups_candidates, CheckOutcome,
    PairData, Witness,
};

/// Largest group swept over the full pair space.
pub const EXHAUSTIVE_MAX_ORDER: usize = 10;
/// Largest group swept with a sampled first argument.
pub const SAMPLED_MAX_ORDER: usize = 12;
/// Largest group for random sweeps.
pub const RANDOM_MAX_ORDER: usize = 1 << 16;
/// Witnesses kept per check; counts are always complete.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub count: u64,
    pub witnesses: Vec<Witness>,
}

impl CheckTally {
    fn record(&mut self, outcome: CheckOutcome) {
        if let CheckOutcome::Fail { witness } = outcome {
            self.count += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness);
            }
        }
    }

    fn merge(&mut self, other: CheckTally) {
        self.count += other.count;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses
            .extend(other.witnesses.into_iter().take(room));
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    pub kneser_equation: CheckTally,
    pub jin_analog: CheckTally,
    pub push_analog: CheckTally,
    pub gap_bound: CheckTally,
    pub two_subgroups: CheckTally,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.kneser_equation.count
            + self.jin_analog.count
            + self.push_analog.count
            + self.gap_bound.count
            + self.two_subgroups.count
    }

    fn merge(&mut self, o: Violations) {
        self.kneser_equation.merge(o.kneser_equation);
        self.jin_analog.merge(o.jin_analog);
        self.push_analog.merge(o.push_analog);
        self.gap_bound.merge(o.gap_bound);
        self.two_subgroups.merge(o.two_subgroups);
    }
}

/// Aggregated results of a sweep. Independent of the thread count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub group: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub pairs_tested: u64,
    pub deficient_pairs: u64,
    pub violations: Violations,
    /// `|H(A+B)|` over deficient pairs.
    pub stabilizer_histogram: BTreeMap<usize, u64>,
    /// Smallest slack in the Jin analog over deficient pairs.
    pub jin_min_slack: Option<i64>,
    /// Pairs on which the two-subgroups check ran (it needs subgroup enumeration).
    pub two_subgroups_checked: u64,
}

impl SweepStats {
    fn merge(&mut self, o: SweepStats) {
        self.pairs_tested += o.pairs_tested;
        self.deficient_pairs += o.deficient_pairs;
        self.violations.merge(o.violations);
        for (k, v) in o.stabilizer_histogram {
            *self.stabilizer_histogram.entry(k).or_default() += v;
        }
        self.jin_min_slack = match (self.jin_min_slack, o.jin_min_slack) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        self.two_subgroups_checked += o.two_subgroups_checked;
    }
}

/// A sweep result with its timing.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRun {
    pub stats: SweepStats,
    pub threads: usize,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// First arguments drawn for groups of order 11 and 12.
    pub sample_a: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            threads: None,
            sample_a: 256,
            seed: 0,
        }
    }
}

/// Per-sweep context: the subgroup list and, for small groups, the
/// two-subgroups verdict for every `C`.
struct Context {
    subgroups: Option<Vec<Subgroup>>,
    two_by_mask: Option<Vec<bool>>,
}

impl Context {
    fn new(g: &GroupRef, by_mask: bool) -> Result<Self> {
        let subgroups = if g.order() <= SUBGROUP_SWEEP_MAX {
            Some(enumerate_subgroups(g)?)
        } else {
            None
        };
        let two_by_mask = match (&subgroups, by_mask) {
            (Some(subs), true) => Some(
                (0u64..1 << g.order())
                    .into_par_iter()
                    .map(|m| {
                        m == 0 || {
                            let c = DenseSet::from_mask(g.clone(), m).expect("mask fits");
                            two_subgroups_candidates(&c, subs).len() == 1
                        }
                    })
                    .collect(),
            ),
            _ => None,
        };
        Ok(Context {
            subgroups,
            two_by_mask,
        })
    }

    fn pair(&self, a: &DenseSet, b: &DenseSet, stats: &mut SweepStats) {
        let p = PairData::new(a, b).expect("nonempty sets in one group");
        stats.pairs_tested += 1;
        if p.deficient {
            stats.deficient_pairs += 1;
            *stats.stabilizer_histogram.entry(p.h.order()).or_default() += 1;
            let slack = jin_slack(a, b, &p).0;
            stats.jin_min_slack = Some(stats.jin_min_slack.map_or(slack, |s| s.min(slack)));
        }
        let v = &mut stats.violations;
        v.kneser_equation.record(kneser_with(a, b, &p));
        v.jin_analog.record(jin_with(a, b, &p));
        v.push_analog.record(push_with(a, b, &p));
        v.gap_bound.record(gap_with(a, b, &p));
        let unique = match (&self.two_by_mask, &self.subgroups) {
            (Some(table), _) => Some(table[p.sum.to_mask().expect("small group") as usize]),
            (None, Some(subs)) => Some(two_subgroups_candidates(&p.sum, subs).len() == 1),
            (None, None) => None,
        };
        if let Some(ok) = unique {
            stats.two_subgroups_checked += 1;
            if !ok {
                let w = Witness::new(
                    "two_subgroups",
                    a,
                    b,
                    "C = A+B has no unique qualifying subgroup".into(),
                );
                v.two_subgroups.record(CheckOutcome::Fail { witness: w });
            }
        }
    }
}

fn describe(g: &GroupRef) -> String {
    match g.as_ref() {
        Ambient::Finite(f) => f.spec(),
        q => q.describe(),
    }
}

fn run_in_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<(T, usize)> {
    match threads {
        None => Ok((f(), rayon::current_num_threads())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot build thread pool: {e}")))?;
            let n = pool.current_num_threads();
            Ok((pool.install(f), n))
        }
    }
}

/// Merges shard results in shard order.
fn fold(base: SweepStats, shards: Vec<SweepStats>) -> SweepStats {
    shards.into_iter().fold(base, |mut acc, s| {
        acc.merge(s);
        acc
    })
}

fn random_nonempty(g: &GroupRef, rng: &mut SplitMix64) -> DenseSet {
    let n = g.order();
    loop {
        let mut elems = Vec::new();
        let mut word = 0;
        for x in 0..n {
            if x % 64 == 0 {
                word = rng.next_u64();
            }
            if word >> (x % 64) & 1 == 1 {
                elems.push(x);
            }
        }
        if !elems.is_empty() {
            return DenseSet::from_elements(g.clone(), &elems).expect("elements in range");
        }
    }
}

/// Every nonempty pair `(A, B)` for `|G| ≤ 10`; for `|G| ≤ 12` the first
/// argument runs over `sample_a` seeded random sets instead.
pub fn sweep_exhaustive(g: &GroupRef, opts: &SweepOptions) -> Result<SweepRun> {
    let n = g.order();
    if n > SAMPLED_MAX_ORDER {
        return Err(capacity(
            "group order for exhaustive sweeps",
            n as u128,
            SAMPLED_MAX_ORDER as u128,
        ));
    }
    let start = Instant::now();
    let sampled = n > EXHAUSTIVE_MAX_ORDER;
    let (stats, threads) = run_in_pool(opts.threads, || -> Result<SweepStats> {
        let ctx = Context::new(g, true)?;
        let masks: Vec<u64> = if sampled {
            (0..opts.sample_a as u64)
                .map(|i| {
                    let mut rng = SplitMix64::new(SplitMix64::at(opts.seed, i));
                    random_nonempty(g, &mut rng).to_mask().expect("small group")
                })
                .collect()
        } else {
            (1..1u64 << n).collect()
        };
        let shards: Vec<SweepStats> = masks
            .par_iter()
            .map(|&ma| {
                let a = DenseSet::from_mask(g.clone(), ma).expect("mask fits");
                let mut s = SweepStats::default();
                for mb in 1..1u64 << n {
                    let b = DenseSet::from_mask(g.clone(), mb).expect("mask fits");
                    ctx.pair(&a, &b, &mut s);
                }
                s
            })
            .collect();
        let base = SweepStats {
            group: describe(g),
            mode: if sampled {
                "exhaustive-sampled"
            } else {
                "exhaustive"
            }
            .to_string(),
            seed: sampled.then_some(opts.seed),
            ..SweepStats::default()
        };
        Ok(fold(base, shards))
    })?;
    Ok(SweepRun {
        stats: stats?,
        threads,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `trials` seeded random pairs (each element kept with probability 1/2,
/// empty draws redrawn). Trial `i` uses its own stream, so results do not
/// depend on scheduling.
pub fn sweep_random(g: &GroupRef, trials: u64, seed: u64, opts: &SweepOptions) -> Result<SweepRun> {
    let n = g.order();
    if n > RANDOM_MAX_ORDER {
        return Err(capacity(
            "group order for random sweeps",
            n as u128,
            RANDOM_MAX_ORDER as u128,
        ));
    }
    let start = Instant::now();
    let (stats, threads) = run_in_pool(opts.threads, || -> Result<SweepStats> {
        let ctx = Context::new(g, false)?;
        const SHARD: u64 = 256;
        let shards: Vec<SweepStats> = (0..trials.div_ceil(SHARD))
            .into_par_iter()
            .map(|shard| {
                let mut s = SweepStats::default();
                for i in shard * SHARD..((shard + 1) * SHARD).min(trials) {
                    let mut rng = SplitMix64::new(SplitMix64::at(seed, i));
                    let a = random_nonempty(g, &mut rng);
                    let b = random_nonempty(g, &mut rng);
                    ctx.pair(&a, &b, &mut s);
                }
                s
            })
            .collect();
        let base = SweepStats {
            group: describe(g),
            mode: "random".into(),
            seed: Some(seed),
            ..SweepStats::default()
        };
        Ok(fold(base, shards))
    })?;
    Ok(SweepRun {
        stats: stats?,
        threads,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
