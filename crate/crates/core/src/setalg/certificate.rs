use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouplat::Subgroup;

use super::dense::DenseSet;

/// Every quantity in Kneser's identity `|A+B| = |A+H| + |B+H| - |H|` for
/// `H = H(A+B)`, plus the verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KneserCertificate {
    pub group_order: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub size_sum: usize,
    pub size_a_plus_h: usize,
    pub size_b_plus_h: usize,
    pub stabilizer_order: usize,
    pub gap: i64,
    /// `|A+B| < |A| + |B|`.
    pub deficient: bool,
    pub equation_holds: bool,
    pub period_holds: bool,
    #[serde(skip)]
    pub stabilizer: Subgroup,
}

impl KneserCertificate {
    pub(crate) fn build(a: &DenseSet, b: &DenseSet, sum: &DenseSet, h: Subgroup) -> Self {
        let a_h = a.plus_subgroup(&h).len();
        let b_h = b.plus_subgroup(&h).len();
        let period_holds = sum.plus_subgroup(&h) == *sum;
        KneserCertificate {
            group_order: a.order(),
            size_a: a.len(),
            size_b: b.len(),
            size_sum: sum.len(),
            size_a_plus_h: a_h,
            size_b_plus_h: b_h,
            stabilizer_order: h.order(),
            gap: a.len() as i64 + b.len() as i64 - sum.len() as i64,
            deficient: sum.len() < a.len() + b.len(),
            equation_holds: sum.len() + h.order() == a_h + b_h,
            period_holds,
            stabilizer: h,
        }
    }

    /// `|A+B| >= |A+H| + |B+H| - |H|`, which holds for every nonempty pair.
    pub fn general_inequality_holds(&self) -> bool {
        self.size_sum + self.stabilizer_order >= self.size_a_plus_h + self.size_b_plus_h
    }

    /// The certificate is consistent with Kneser's theorem.
    pub fn is_valid(&self) -> bool {
        self.period_holds
            && self.general_inequality_holds()
            && (!self.deficient || self.equation_holds)
    }
}

/// Computes the Kneser certificate of a nonempty pair. A deficient pair
/// whose certificate fails the equation is reported as
/// [`Error::Violation`].
pub fn kneser_certificate(a: &DenseSet, b: &DenseSet) -> Result<KneserCertificate> {
    a.check_same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "Kneser certificates need nonempty sets".into(),
        ));
    }
    let sum = a.sumset_unchecked(b);
    let h = sum.stabilizer_unchecked();
    let cert = KneserCertificate::build(a, b, &sum, h);
    if !cert.is_valid() {
        return Err(Error::Violation(format!(
            "Kneser certificate fails for A={{{}}}, B={{{}}} in {}: {cert:?}",
            a.to_literal(),
            b.to_literal(),
            a.group().describe()
        )));
    }
    Ok(cert)
}
