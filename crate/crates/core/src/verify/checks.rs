use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouplat::{enumerate_subgroups, Ambient, Subgroup};
use crate::setalg::DenseSet;

/// A replayable counterexample to one of the checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    pub group: String,
    pub a: String,
    pub b: String,
    pub detail: String,
    /// Command line that reproduces the failing pair.
    pub replay: String,
}

impl Witness {
    pub(crate) fn new(check: &str, a: &DenseSet, b: &DenseSet, detail: String) -> Self {
        let group = match a.group().as_ref() {
            Ambient::Finite(g) => g.spec(),
            q => q.describe(),
        };
        let (la, lb) = (a.to_literal(), b.to_literal());
        Witness {
            check: check.to_string(),
            replay: format!("kneser analyze --group {group} --a '{la}' --b '{lb}'"),
            group,
            a: la,
            b: lb,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    /// The check's hypothesis does not apply to the input.
    Skip {
        reason: String,
    },
    Fail {
        witness: Witness,
    },
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail { .. })
    }
}

/// Quantities shared by the per-pair checks.
pub(crate) struct PairData {
    pub sum: DenseSet,
    pub h: Subgroup,
    pub deficient: bool,
    pub gap: i64,
}

impl PairData {
    pub fn new(a: &DenseSet, b: &DenseSet) -> Result<Self> {
        a.check_same_group(b)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidInput("checks need nonempty sets".into()));
        }
        let sum = a.sumset_unchecked(b);
        let h = sum.stabilizer_unchecked();
        let gap = a.len() as i64 + b.len() as i64 - sum.len() as i64;
        Ok(PairData {
            deficient: gap > 0,
            gap,
            sum,
            h,
        })
    }
}

fn not_deficient() -> CheckOutcome {
    CheckOutcome::Skip {
        reason: "pair is not deficient".into(),
    }
}

/// Kneser's equation and periodicity for a deficient pair.
pub(crate) fn kneser_with(a: &DenseSet, b: &DenseSet, p: &PairData) -> CheckOutcome {
    if !p.deficient {
        return not_deficient();
    }
    let (ah, bh) = (a.plus_subgroup(&p.h).len(), b.plus_subgroup(&p.h).len());
    if p.sum.len() + p.h.order() != ah + bh {
        let detail = format!(
            "|A+B| = {} but |A+H| + |B+H| - |H| = {}",
            p.sum.len(),
            ah + bh - p.h.order()
        );
        return CheckOutcome::Fail {
            witness: Witness::new("kneser_equation", a, b, detail),
        };
    }
    if p.sum.plus_subgroup(&p.h) != p.sum {
        let detail = "A+B+H differs from A+B".to_string();
        return CheckOutcome::Fail {
            witness: Witness::new("kneser_equation", a, b, detail),
        };
    }
    CheckOutcome::Pass
}

/// Smallest `|A ∩ (g+H)| + |A+B| - |A| - |B|` over cosets meeting `A`, and
/// a representative of a coset where it is negative.
pub(crate) fn jin_slack(a: &DenseSet, b: &DenseSet, p: &PairData) -> (i64, Option<usize>) {
    let g = a.group();
    let mut seen = vec![false; a.order()];
    let base = p.sum.len() as i64 - a.len() as i64 - b.len() as i64;
    let mut min = i64::MAX;
    let mut bad = None;
    for x in a.iter() {
        if seen[x] {
            continue;
        }
        let mut hits = 0i64;
        for &e in p.h.elements() {
            let y = g.add(x, e);
            seen[y] = true;
            hits += a.contains(y) as i64;
        }
        let slack = hits + base;
        if slack < min {
            min = slack;
        }
        if slack < 0 && bad.is_none() {
            bad = Some(x);
        }
    }
    (min, bad)
}

pub(crate) fn jin_with(a: &DenseSet, b: &DenseSet, p: &PairData) -> CheckOutcome {
    if !p.deficient {
        return not_deficient();
    }
    match jin_slack(a, b, p).1 {
        None => CheckOutcome::Pass,
        Some(x) => {
            let detail = format!("coset {} + H has too few points of A", a.group().label(x));
            CheckOutcome::Fail {
                witness: Witness::new("jin_analog", a, b, detail),
            }
        }
    }
}

pub(crate) fn push_with(a: &DenseSet, b: &DenseSet, p: &PairData) -> CheckOutcome {
    if !p.deficient {
        return not_deficient();
    }
    let g = a.group();
    let bh = b.plus_subgroup(&p.h);
    for x in 0..a.order() {
        // (a): the bit test and the coset scan must agree.
        let coset: Vec<usize> = p.h.elements().iter().map(|&e| g.add(x, e)).collect();
        let by_scan = coset.iter().any(|&y| a.contains(y));
        let by_count = coset.iter().filter(|&&y| a.contains(y)).count() > 0;
        if by_scan != by_count {
            let detail = format!("coset {} + H: membership tests disagree", g.label(x));
            return CheckOutcome::Fail {
                witness: Witness::new("push_analog", a, b, detail),
            };
        }
        // (b): A + x ⊆ A + B forces x ∈ B + H.
        if a.translate(x).is_subset(&p.sum) && !bh.contains(x) {
            let detail = format!(
                "A + {} lies in A+B but {} is not in B+H",
                g.label(x),
                g.label(x)
            );
            return CheckOutcome::Fail {
                witness: Witness::new("push_analog", a, b, detail),
            };
        }
    }
    CheckOutcome::Pass
}

pub(crate) fn gap_with(a: &DenseSet, b: &DenseSet, p: &PairData) -> CheckOutcome {
    if p.gap <= 0 {
        return CheckOutcome::Pass;
    }
    let bound = a.len().min(b.len()).min(p.h.order()) as i64;
    if p.gap > bound {
        let detail = format!("gap {} exceeds min(|A|, |B|, |H|) = {bound}", p.gap);
        return CheckOutcome::Fail {
            witness: Witness::new("gap_bound", a, b, detail),
        };
    }
    CheckOutcome::Pass
}

/// Subgroups `S` with `H(C+S) = S` and `|C+S| = |C+H(C)|`; exactly one is expected.
pub(crate) fn two_subgroups_candidates(c: &DenseSet, subgroups: &[Subgroup]) -> Vec<usize> {
    let target = c.plus_subgroup(&c.stabilizer_unchecked()).len();
    subgroups
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            let cs = c.plus_subgroup(s);
            cs.len() == target && cs.stabilizer_unchecked() == **s
        })
        .map(|(i, _)| i)
        .collect()
}

/// Finite analog of Jin's lemma: for a deficient pair and `H = H(A+B)`,
/// every coset of `H` meeting `A` satisfies `|A ∩ (g+H)| + |A+B| ≥ |A| + |B|`.
pub fn check_jin_analog(a: &DenseSet, b: &DenseSet) -> Result<CheckOutcome> {
    let p = PairData::new(a, b)?;
    Ok(jin_with(a, b, &p))
}

/// For a deficient pair: `A + g ⊆ A + B` implies `g ∈ B + H(A+B)`.
pub fn check_push_analog(a: &DenseSet, b: &DenseSet) -> Result<CheckOutcome> {
    let p = PairData::new(a, b)?;
    Ok(push_with(a, b, &p))
}

/// `|A| + |B| - |A+B| ≤ min(|A|, |B|, |H(A+B)|)`.
pub fn check_gap_bound(a: &DenseSet, b: &DenseSet) -> Result<CheckOutcome> {
    let p = PairData::new(a, b)?;
    Ok(gap_with(a, b, &p))
}

/// Kneser's equation `|A+B| = |A+H| + |B+H| - |H|` and `A+B+H = A+B`.
pub fn check_kneser(a: &DenseSet, b: &DenseSet) -> Result<CheckOutcome> {
    let p = PairData::new(a, b)?;
    Ok(kneser_with(a, b, &p))
}

/// Exactly one subgroup `S` has `H(C+S) = S` and `|C+S| = |C+H(C)|`.
pub fn check_two_subgroups(c: &DenseSet) -> Result<CheckOutcome> {
    if c.is_empty() {
        return Err(Error::InvalidInput("C must be nonempty".into()));
    }
    let subs = enumerate_subgroups(c.group())?;
    let found = two_subgroups_candidates(c, &subs);
    if found.len() == 1 {
        return Ok(CheckOutcome::Pass);
    }
    let detail = format!("{} subgroups qualify", found.len());
    Ok(CheckOutcome::Fail {
        witness: Witness::new("two_subgroups", c, c, detail),
    })
}
