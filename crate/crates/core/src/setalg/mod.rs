//! Subset algebra in finite abelian groups.
//!
//! Sets are bit vectors over the mixed-radix element indices of their
//! ambient group. All measure statements use counting measure normalized by
//! the group order, which agrees with every invariant mean on unions of
//! cosets of a finite-index subgroup.

mod bits;
mod certificate;
mod dense;
mod fft;
mod kj;

pub use certificate::{kneser_certificate, KneserCertificate};
pub use dense::DenseSet;
pub use fft::{sumset_fft, FFT_MAX_ORDER};
pub use kj::kj_reduce;

use crate::error::{Error, Result};
use crate::grouplat::{Ambient, GroupRef, Projection, Subgroup};

/// `A + B`, computed as the union of the translates `B + a`.
pub fn sumset(a: &DenseSet, b: &DenseSet) -> Result<DenseSet> {
    a.check_same_group(b)?;
    Ok(a.sumset_unchecked(b))
}

/// The stabilizer `H(C) = {g : C + g = C}`.
pub fn stabilizer(c: &DenseSet) -> Result<Subgroup> {
    if c.is_empty() {
        return Err(Error::InvalidInput(
            "the stabilizer of the empty set is not computed".into(),
        ));
    }
    Ok(c.stabilizer_unchecked())
}

/// Whether `C + K = C`.
pub fn is_periodic(c: &DenseSet, k: &Subgroup) -> bool {
    k.elements().iter().all(|&g| c.translate(g) == *c)
}

/// Image of `C` under the projection of the quotient `q` (which must be a
/// quotient of `C`'s group).
pub fn quotient_image(c: &DenseSet, q: &GroupRef) -> Result<DenseSet> {
    let Ambient::Quotient(qg) = q.as_ref() else {
        return Err(Error::InvalidInput("target is not a quotient group".into()));
    };
    let Projection::Table { ambient, map } = qg.projection() else {
        return Err(Error::InvalidInput(
            "lattice quotients have no finite ambient".into(),
        ));
    };
    if !(std::sync::Arc::ptr_eq(ambient, c.group()) || ambient == c.group()) {
        return Err(Error::GroupMismatch);
    }
    let image: Vec<usize> = c.iter().map(|x| map[x] as usize).collect();
    DenseSet::from_elements(q.clone(), &image)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::grouplat::{quotient, FiniteGroup};

    pub(crate) fn z(moduli: &[usize]) -> GroupRef {
        Ambient::Finite(FiniteGroup::new(moduli).unwrap()).into_ref()
    }

    pub(crate) fn set(g: &GroupRef, elems: &[usize]) -> DenseSet {
        DenseSet::from_elements(g.clone(), elems).unwrap()
    }

    /// Exhaustive pairwise addition.
    pub(crate) fn naive_sumset(a: &DenseSet, b: &DenseSet) -> Vec<usize> {
        let g = a.group();
        let mut out: Vec<usize> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| g.add(x, y)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn sumset_examples() {
        let z6 = z(&[6]);
        assert_eq!(
            sumset(&set(&z6, &[0, 3]), &set(&z6, &[0, 3]))
                .unwrap()
                .elements(),
            vec![0, 3]
        );
        let b = set(&z6, &[1, 2, 5]);
        assert_eq!(sumset(&set(&z6, &[0]), &b).unwrap(), b);
        let z10 = z(&[10]);
        assert_eq!(
            sumset(&set(&z10, &[0, 1]), &set(&z10, &[0, 1]))
                .unwrap()
                .elements(),
            vec![0, 1, 2]
        );
        assert!(sumset(&set(&z6, &[]), &b).unwrap().is_empty());
    }

    #[test]
    fn group_mismatch_is_an_error() {
        let a = set(&z(&[6]), &[0]);
        let b = set(&z(&[2, 3]), &[0]);
        assert_eq!(sumset(&a, &b), Err(Error::GroupMismatch));
        // Structurally equal groups in different allocations are the same group.
        assert!(sumset(&a, &set(&z(&[6]), &[1])).is_ok());
    }

    #[test]
    fn stabilizer_examples() {
        let z6 = z(&[6]);
        assert_eq!(
            stabilizer(&set(&z6, &[0, 1, 3, 4])).unwrap().elements(),
            &[0, 3]
        );
        assert_eq!(stabilizer(&DenseSet::full(z6.clone())).unwrap().order(), 6);
        assert_eq!(stabilizer(&set(&z6, &[4])).unwrap().elements(), &[0]);
        assert!(stabilizer(&set(&z6, &[])).is_err());
    }

    #[test]
    fn periodicity_examples() {
        let z12 = z(&[12]);
        let evens = set(&z12, &[0, 2, 4, 6, 8, 10]);
        let k = Subgroup::from_elements(&z12, &[0, 6]).unwrap();
        assert!(is_periodic(&evens, &k));
        let z6 = z(&[6]);
        let k = Subgroup::from_elements(&z6, &[0, 3]).unwrap();
        assert!(!is_periodic(&set(&z6, &[0, 1]), &k));
        assert!(is_periodic(&set(&z6, &[0, 1]), &Subgroup::trivial()));
    }

    #[test]
    fn quotient_image_examples() {
        let z6 = z(&[6]);
        let k = Subgroup::from_elements(&z6, &[0, 3]).unwrap();
        let q = Ambient::Quotient(quotient(&z6, &k).unwrap()).into_ref();
        let img = quotient_image(&set(&z6, &[0, 1, 3, 4]), &q).unwrap();
        assert_eq!(img.elements(), vec![0, 1]);
        assert_eq!(
            quotient_image(&set(&z6, &[0, 3]), &q).unwrap().elements(),
            vec![0]
        );
        // |image of (C+K)| * |K| = |C+K|
        let c = set(&z6, &[1, 2]);
        let ck = c.plus_subgroup(&k);
        assert_eq!(quotient_image(&ck, &q).unwrap().len() * k.order(), ck.len());
        // wrong ambient
        assert_eq!(
            quotient_image(&set(&z(&[7]), &[0]), &q),
            Err(Error::GroupMismatch)
        );
    }

    #[test]
    fn quotient_image_respects_sumsets() {
        let g = z(&[2, 6]);
        let subs = crate::grouplat::enumerate_subgroups(&g).unwrap();
        let mut rng = crate::rng::SplitMix64::new(3);
        for k in &subs {
            let q = Ambient::Quotient(quotient(&g, k).unwrap()).into_ref();
            for _ in 0..20 {
                let a = DenseSet::from_mask(g.clone(), rng.next_u64() & 0xfff).unwrap();
                let b = DenseSet::from_mask(g.clone(), rng.next_u64() & 0xfff).unwrap();
                let lhs = quotient_image(&sumset(&a, &b).unwrap(), &q).unwrap();
                let rhs = sumset(
                    &quotient_image(&a, &q).unwrap(),
                    &quotient_image(&b, &q).unwrap(),
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
