use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::folner::{default_tail_from, lad_scan_segments, LadRecord};
use crate::intalg::{BoolOp, SegmentSet, StructuredSet, PATTERN_MAX_MODULUS};
use crate::rational::Exact;

use super::kj::tree_period;

/// Numeric check of the three conclusions of Kneser's density theorem for
/// one `k`, at scale `N` (a multiple of every period involved).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KneserLadReport {
    pub k: usize,
    pub bound: String,
    pub period: String,
    pub lower_a: LadRecord,
    pub lower_b: LadRecord,
    pub lower_ab: LadRecord,
    /// `|X ∩ [1, N]| / N`.
    pub d_a: Exact,
    pub d_b: Exact,
    pub d_ab: Exact,
    pub d_a_k: Exact,
    pub d_b_k: Exact,
    pub d_ab_k: Exact,
    /// `d(A+B+kℤ) - d(A+B)`.
    pub item1_residual: Exact,
    pub item1_exact: bool,
    pub item1_pass: bool,
    /// `d(A+B) - (d(A+kℤ) + d(B+kℤ) - 1/k)`.
    pub item2_residual: Exact,
    pub item2_exact: bool,
    pub item2_pass: bool,
    /// Least `T` with `(A+B+kℤ) ∩ [T, N] ⊆ A+B`.
    pub threshold: String,
    pub item3_pass: bool,
    pub pass: bool,
}

struct Sums {
    ab: SegmentSet,
    ab_k: SegmentSet,
}

fn sums(a: &SegmentSet, b: &SegmentSet, k: usize, hi: u128) -> Result<Sums> {
    let ab = a.sumset(b, hi)?;
    let ab_k = ab.periodize(k, 0, hi)?;
    Ok(Sums { ab, ab_k })
}

fn density_at(s: &SegmentSet, n: u128) -> Exact {
    Exact::from_counts(s.count_in(1, n), n)
}

/// Checks `d(A+B) = d(A+B+kℤ)`, `d(A+B) = d(A+kℤ) + d(B+kℤ) - 1/k` within
/// `eps`, and cofiniteness of `A+B` in `A+B+kℤ` beyond a threshold `T ≤ N/2`.
/// The scale is `N` rounded down to a multiple of the common period, so the
/// densities of eventually periodic sets are exact up to their finite parts.
pub fn verify_kneser_lad(
    a: &StructuredSet,
    b: &StructuredSet,
    k: usize,
    bound: u128,
    eps: &Exact,
) -> Result<KneserLadReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let mut period = num::integer::lcm(tree_period(a)?, tree_period(b)?);
    period = num::integer::lcm(period, k as u128);
    if period > PATTERN_MAX_MODULUS as u128 {
        return Err(capacity(
            "common period",
            period,
            PATTERN_MAX_MODULUS as u128,
        ));
    }
    let n = bound / period * period;
    if n == 0 {
        return Err(Error::InvalidInput(format!(
            "bound {bound} is below the common period {period}"
        )));
    }
    let (sa, sb) = (a.segments(0, n)?, b.segments(0, n)?);
    let Sums { ab, ab_k } = sums(&sa, &sb, k, n)?;
    let tail = default_tail_from(n);
    let lower_a = lad_scan_segments(&sa, n, tail)?;
    let lower_b = lad_scan_segments(&sb, n, tail)?;
    let lower_ab = lad_scan_segments(&ab, n, tail)?;
    if lower_ab.tail_min >= &lower_a.tail_min + &lower_b.tail_min {
        return Err(Error::Hypothesis(format!(
            "lower density of A+B ({}) is not below the sum for A and B ({} + {})",
            lower_ab.tail_min, lower_a.tail_min, lower_b.tail_min
        )));
    }
    let (sak, sbk) = (sa.periodize(k, 0, n)?, sb.periodize(k, 0, n)?);
    let d_a = density_at(&sa, n);
    let d_b = density_at(&sb, n);
    let d_ab = density_at(&ab, n);
    let d_a_k = density_at(&sak, n);
    let d_b_k = density_at(&sbk, n);
    let d_ab_k = density_at(&ab_k, n);
    let item1 = &d_ab_k - &d_ab;
    let inv_k = Exact::new(1, k as u128);
    let item2 = &d_ab - &(&(&d_a_k + &d_b_k) - &inv_k);
    let missing = ab_k.boolean(&ab, BoolOp::Diff)?;
    let threshold = missing.max().map_or(0, |m| m + 1);
    let item1_pass = item1.abs() <= *eps;
    let item2_pass = item2.abs() <= *eps;
    let item3_pass = threshold <= n / 2;
    Ok(KneserLadReport {
        k,
        bound: n.to_string(),
        period: period.to_string(),
        lower_a,
        lower_b,
        lower_ab,
        d_a,
        d_b,
        d_ab,
        d_a_k,
        d_b_k,
        d_ab_k,
        item1_exact: item1 == Exact::zero(),
        item1_residual: item1,
        item1_pass,
        item2_exact: item2 == Exact::zero(),
        item2_residual: item2,
        item2_pass,
        threshold: threshold.to_string(),
        item3_pass,
        pass: item1_pass && item2_pass && item3_pass,
    })
}

/// Least element of `(A+B+kℤ) \ (A+B)` in `[lo, hi]`, a witness that `A+B`
/// is not cofinite in `A+B+kℤ` up to `hi`.
pub fn cofiniteness_witness(
    a: &StructuredSet,
    b: &StructuredSet,
    k: usize,
    lo: u128,
    hi: u128,
) -> Result<Option<u128>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let Sums { ab, ab_k } = sums(&a.segments(0, hi)?, &b.segments(0, hi)?, k, hi)?;
    Ok(ab_k
        .clip(lo, hi)
        .boolean(&ab.clip(lo, hi), BoolOp::Diff)?
        .min())
}
