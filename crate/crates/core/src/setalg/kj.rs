use crate::error::{Error, Result};
use crate::grouplat::Subgroup;

use super::dense::DenseSet;

/// KJ reduction: given a deficient pair and a subgroup `K0` with
/// `|A+B+K0| = |A+B|`, returns `K = H(A+B+K0)`.
///
/// The postconditions `K0 <= K`, `A+B+K0 = A+B+K` and
/// `|A+B| = |A+K| + |B+K| - |K|` are checked; a failure is a
/// [`Error::Violation`].
pub fn kj_reduce(a: &DenseSet, b: &DenseSet, k0: &Subgroup) -> Result<Subgroup> {
    a.check_same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    if k0.elements().iter().any(|&e| e >= a.order()) {
        return Err(Error::Precondition(
            "K0 is not a subgroup of the ambient group".into(),
        ));
    }
    let sum = a.sumset_unchecked(b);
    if sum.len() >= a.len() + b.len() {
        return Err(Error::Precondition(format!(
            "deficiency: |A+B| = {} is not below |A| + |B| = {}",
            sum.len(),
            a.len() + b.len()
        )));
    }
    let sum_k0 = sum.plus_subgroup(k0);
    if sum_k0.len() != sum.len() {
        return Err(Error::Precondition(format!(
            "stability: |A+B+K0| = {} differs from |A+B| = {}",
            sum_k0.len(),
            sum.len()
        )));
    }
    let k = sum_k0.stabilizer_unchecked();
    if !k0.is_subgroup_of(&k) {
        return Err(Error::Violation("K0 is not contained in H(A+B+K0)".into()));
    }
    if sum.plus_subgroup(&k) != sum_k0 {
        return Err(Error::Violation("A+B+K0 differs from A+B+K".into()));
    }
    let (ak, bk) = (a.plus_subgroup(&k).len(), b.plus_subgroup(&k).len());
    if sum.len() + k.order() != ak + bk {
        return Err(Error::Violation(format!(
            "|A+B| = {} but |A+K| + |B+K| - |K| = {}",
            sum.len(),
            ak + bk - k.order()
        )));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::tests::{set, z};
    use crate::setalg::{kneser_certificate, stabilizer};

    #[test]
    fn kj_examples() {
        let z12 = z(&[12]);
        let evens = set(&z12, &[0, 2, 4, 6, 8, 10]);
        let k0 = Subgroup::from_elements(&z12, &[0, 6]).unwrap();
        let k = kj_reduce(&evens, &evens, &k0).unwrap();
        assert_eq!(k.elements(), &[0, 2, 4, 6, 8, 10]);
        assert_eq!(k.index_in(&z12), 2);

        let z10 = z(&[10]);
        let a = set(&z10, &[0, 1]);
        let k = kj_reduce(&a, &a, &Subgroup::trivial()).unwrap();
        assert_eq!(k, kneser_certificate(&a, &a).unwrap().stabilizer);

        let z6 = z(&[6]);
        let k0 = Subgroup::from_elements(&z6, &[0, 3]).unwrap();
        let k = kj_reduce(&set(&z6, &[0, 1, 3, 4]), &set(&z6, &[0, 3]), &k0).unwrap();
        assert_eq!(k.elements(), &[0, 3]);
    }

    #[test]
    fn preconditions_are_named() {
        let z7 = z(&[7]);
        let err =
            kj_reduce(&set(&z7, &[0, 1]), &set(&z7, &[0, 2]), &Subgroup::trivial()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.starts_with("deficiency")));

        let z6 = z(&[6]);
        let a = set(&z6, &[0, 1]);
        let k0 = Subgroup::from_elements(&z6, &[0, 3]).unwrap();
        // A+A = {0,1,2}: deficient, but A+A+K0 is all of Z6.
        let err = kj_reduce(&a, &a, &k0).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.starts_with("stability")));
    }

    #[test]
    fn kj_output_is_self_consistent() {
        let g = z(&[12]);
        let subs = crate::grouplat::enumerate_subgroups(&g).unwrap();
        for ma in 1u64..(1 << 12) {
            if ma % 37 != 1 {
                continue;
            }
            for mb in (1u64..(1 << 12)).step_by(91) {
                let a = crate::setalg::DenseSet::from_mask(g.clone(), ma).unwrap();
                let b = crate::setalg::DenseSet::from_mask(g.clone(), mb).unwrap();
                for k0 in &subs {
                    if let Ok(k) = kj_reduce(&a, &b, k0) {
                        assert!(k0.is_subgroup_of(&k));
                        let sum = crate::setalg::sumset(&a, &b).unwrap();
                        assert_eq!(stabilizer(&sum.plus_subgroup(k0)).unwrap(), k);
                    }
                }
            }
        }
    }
}
