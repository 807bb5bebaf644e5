use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::{default_tail_from, lad_scan_segments, FolnerPrefix, LadRecord, Window};
use crate::intalg::{SegmentSet, StructuredSet};
use crate::rational::Exact;

use super::kj::{kj_stabilizer_periodic, KjReport, Period};
use super::search::{
    refinement_search, verify_folner_theorem, FolnerCheck, Instance, RefinementResult,
    SearchOptions,
};

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Index used when `A` has no periodic component (default 1).
    pub k: Option<usize>,
    /// Maximum number of prefix terms `[1, b_n]`.
    pub terms: usize,
    pub search: SearchOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            k: None,
            terms: 10,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UbdPipelineReport {
    pub bound: String,
    pub upper_a: LadRecord,
    pub upper_aa: LadRecord,
    /// `2·d̄(A) - d̄(A+A)`.
    pub delta: Exact,
    pub b_values: Vec<String>,
    pub k: usize,
    /// `kj-stabilizer`, `supplied` or `default`.
    pub k_source: String,
    pub kj: Option<KjReport>,
    pub refinement: RefinementResult,
    pub check: FolnerCheck,
    pub notes: Vec<String>,
}

fn ratio(s: &SegmentSet, n: u128) -> Exact {
    Exact::from_counts(s.count_in(1, n), n)
}

/// Picks `b_1 < b_2 < ...` with `|A ∩ [1, b]| / b` within `slack` of the upper
/// density, each at most half the next.
fn select_scales(
    s: &SegmentSet,
    from: u128,
    bound: u128,
    target: &Exact,
    slack: &Exact,
    terms: usize,
) -> Vec<u128> {
    let mut cands = crate::folner::scan_candidates(s, from, bound);
    cands.extend((0..128).map(|j| bound >> j).filter(|&b| b >= from));
    cands.sort_unstable();
    cands.dedup();
    let floor = target - slack;
    let mut out = Vec::new();
    for &b in cands.iter().rev() {
        if out.len() == terms {
            break;
        }
        if out.last().is_some_and(|&last: &u128| 2 * b > last) {
            continue;
        }
        if ratio(s, b) >= floor {
            out.push(b);
        }
    }
    out.reverse();
    out
}

/// The upper-density corollary as a chain: scan `A` and `A+A` up to `N`,
/// take `δ = 2·d̄(A) - d̄(A+A)`, choose `F_n = [1, b_n]` nearly realizing
/// `d̄(A)`, get `k` from the KJ-stabilizer of the periodic part of `A`, then
/// search for `Ψ` and check it independently.
pub fn ubd_pipeline(
    a: &StructuredSet,
    bound: u128,
    eps: &Exact,
    opts: &PipelineOptions,
) -> Result<UbdPipelineReport> {
    if bound < 4 {
        return Err(Error::InvalidInput(
            "the scan bound must be at least 4".into(),
        ));
    }
    let sa = a.segments(0, bound)?;
    let saa = sa.sumset(&sa, bound)?;
    let from = default_tail_from(bound);
    let upper_a = lad_scan_segments(&sa, bound, from)?;
    let upper_aa = lad_scan_segments(&saa, bound, from)?;
    let two = Exact::integer(2);
    let delta = &(&two * &upper_a.tail_max) - &upper_aa.tail_max;
    if delta <= Exact::zero() {
        return Err(Error::Hypothesis(format!(
            "2 d(A) - d(A+A) = 2*{} - {} is not positive at scale {bound}",
            upper_a.tail_max, upper_aa.tail_max
        )));
    }
    let half_eps = &Exact::new(1, 2) * eps;
    let b = select_scales(
        &sa,
        from,
        bound,
        &upper_a.tail_max,
        &half_eps,
        opts.terms.max(1),
    );
    let f = FolnerPrefix::new(
        format!("upper-density scales of {a}"),
        b.iter().map(|&x| Window::interval(1, x)).collect(),
    )?;

    let mut notes = Vec::new();
    let (k, k_source, kj) = match a.periodic_component() {
        Some((m, residues)) => {
            let p = StructuredSet::periodic(&residues, m);
            match kj_stabilizer_periodic(&p, &p, &Period::Modulus(m)) {
                Ok(r) => (r.index, "kj-stabilizer", Some(r)),
                Err(Error::Hypothesis(msg)) => {
                    notes.push(msg);
                    (
                        opts.k.unwrap_or(1),
                        if opts.k.is_some() {
                            "supplied"
                        } else {
                            "default"
                        },
                        None,
                    )
                }
                Err(e) => return Err(e),
            }
        }
        None => (
            opts.k.unwrap_or(1),
            if opts.k.is_some() {
                "supplied"
            } else {
                "default"
            },
            None,
        ),
    };
    let inst = Instance::Line(a, a);
    let refinement = refinement_search(inst, &f, k, &delta, eps, &opts.search)?;
    let check = verify_folner_theorem(
        inst,
        &f,
        &refinement.psi,
        k,
        &delta,
        eps,
        &opts.search.density,
    )?;
    if refinement.feasible && !check.pass {
        return Err(Error::Violation(
            "the searcher and the checker disagree".into(),
        ));
    }
    Ok(UbdPipelineReport {
        bound: bound.to_string(),
        upper_a,
        upper_aa,
        delta,
        b_values: b.iter().map(|x| x.to_string()).collect(),
        k,
        k_source: k_source.to_string(),
        kj,
        refinement,
        check,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intalg::parse_set;

    #[test]
    fn evens() {
        let a = parse_set("periodic(0;2)").unwrap();
        let r = ubd_pipeline(&a, 1 << 20, &Exact::new(1, 50), &PipelineOptions::default()).unwrap();
        assert_eq!(r.delta, Exact::new(1, 2));
        assert_eq!(r.k, 2);
        assert_eq!(r.k_source, "kj-stabilizer");
        assert!(r.refinement.feasible);
        assert!(r.check.pass);
    }

    #[test]
    fn sparse_evens() {
        let a = parse_set("periodic(0;2) & blocks(superexp(8),1/2,1)").unwrap();
        let r = ubd_pipeline(&a, 1 << 36, &Exact::new(1, 50), &PipelineOptions::default()).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.delta > Exact::zero());
        assert!(r.refinement.feasible, "{:?}", r.refinement);
        assert!(r.check.pass);
    }

    #[test]
    fn finite_set_has_no_gap() {
        // Below the scan bound both densities are counts over n: 50/n and 100/n.
        let a = parse_set("periodic(0;2) & interval(0,100)").unwrap();
        assert!(matches!(
            ubd_pipeline(&a, 1 << 20, &Exact::new(1, 50), &PipelineOptions::default()),
            Err(Error::Hypothesis(_))
        ));
    }
}
