use std::fmt;

use crate::error::{capacity, Error, Result};

/// Largest index accepted by [`enumerate_sublattices`].
pub const MAX_SUBLATTICE_INDEX: u64 = 4096;

/// A full-rank sublattice of `Z^d` stored in row-style Hermite normal form.
///
/// Conventions: the rows of `hnf` generate the lattice; the matrix is upper
/// triangular with positive diagonal, and every entry above the diagonal in
/// column `j` lies in `[0, hnf[j][j])`. Two generating matrices of the same
/// lattice reduce to the identical matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    hnf: Vec<Vec<i64>>,
    index: u64,
}

impl Sublattice {
    /// Validates a matrix that is already in the canonical form.
    pub fn from_hnf(rows: Vec<Vec<i64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(
                "HNF must be a non-empty square matrix".into(),
            ));
        }
        let mut index: u64 = 1;
        for j in 0..d {
            let p = rows[j][j];
            if p <= 0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry {j} is {p}, must be positive"
                )));
            }
            for (i, row) in rows.iter().enumerate() {
                let e = row[j];
                if (i > j && e != 0) || (i < j && !(0..p).contains(&e)) {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) = {e} violates the HNF convention"
                    )));
                }
            }
            index = index
                .checked_mul(p as u64)
                .ok_or(Error::Overflow("lattice index"))?;
        }
        Ok(Sublattice { hnf: rows, index })
    }

    /// `n Z^d`.
    pub fn scalar(dim: usize, n: i64) -> Result<Self> {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { n } else { 0 }).collect())
            .collect();
        Self::from_hnf(rows)
    }

    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let d = diag.len();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0 }).collect())
            .collect();
        Self::from_hnf(rows)
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    pub fn hnf(&self) -> &[Vec<i64>] {
        &self.hnf
    }

    /// `[Z^d : L]`, the product of the diagonal.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.dim()).map(|j| self.hnf[j][j]).collect()
    }

    /// Row-major serialization.
    pub fn to_row_major(&self) -> Vec<i64> {
        self.hnf.iter().flatten().copied().collect()
    }

    pub fn from_row_major(dim: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, found {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_hnf(entries.chunks(dim).map(|r| r.to_vec()).collect())
    }

    /// Canonical representative of `x + L` in the box
    /// `0 <= v_j < hnf[j][j]`.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<i64>> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::InvalidInput(format!(
                "vector has length {}, lattice dimension {d}",
                x.len()
            )));
        }
        let mut v: Vec<i128> = x.iter().map(|&c| c as i128).collect();
        for j in 0..d {
            let q = v[j].div_euclid(self.hnf[j][j] as i128);
            if q != 0 {
                for (vk, &hk) in v.iter_mut().zip(&self.hnf[j]).skip(j) {
                    *vk -= q * hk as i128;
                }
            }
        }
        v.into_iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("lattice reduction")))
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(|&c| c == 0))
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .hnf
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn checked_row_sub(a: &mut [i128], b: &[i128], q: i128) -> Result<()> {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = q
            .checked_mul(y)
            .and_then(|p| x.checked_sub(p))
            .ok_or(Error::Overflow("HNF row operation"))?;
    }
    Ok(())
}

/// Hermite normal form of the row lattice of a square integer matrix.
pub fn hnf_reduce(m: &[Vec<i64>]) -> Result<Sublattice> {
    let d = m.len();
    if d == 0 || m.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidInput(
            "matrix must be square and non-empty".into(),
        ));
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&e| e as i128).collect())
        .collect();
    for col in 0..d {
        for r in col + 1..d {
            // Euclid on (a[col][col], a[r][col]) by row operations.
            while a[r][col] != 0 {
                let q = a[col][col].div_euclid(a[r][col]);
                let pivot_row = a[r].clone();
                checked_row_sub(&mut a[col], &pivot_row, q)?;
                a.swap(col, r);
            }
        }
        if a[col][col] == 0 {
            return Err(Error::Singular);
        }
        if a[col][col] < 0 {
            for e in a[col].iter_mut() {
                *e = -*e;
            }
        }
        let pivot_row = a[col].clone();
        for r in 0..col {
            let q = a[r][col].div_euclid(pivot_row[col]);
            if q != 0 {
                checked_row_sub(&mut a[r], &pivot_row, q)?;
            }
        }
    }
    let rows = a
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| i64::try_from(e).map_err(|_| Error::Overflow("HNF entry")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Sublattice::from_hnf(rows)
}

fn ordered_factorizations(n: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        if n % first == 0 {
            for mut rest in ordered_factorizations(n / first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

/// All sublattices of `Z^dim` of index exactly `n`, as canonical HNFs in
/// lexicographic order of their row-major entries.
pub fn enumerate_sublattices(dim: usize, n: u64) -> Result<Vec<Sublattice>> {
    if !(1..=3).contains(&dim) {
        return Err(capacity("sublattice dimension", dim as u128, 3u128));
    }
    if n == 0 {
        return Err(Error::InvalidInput("index must be positive".into()));
    }
    if n > MAX_SUBLATTICE_INDEX {
        return Err(capacity("sublattice index", n, MAX_SUBLATTICE_INDEX));
    }
    let mut out = Vec::new();
    for diag in ordered_factorizations(n, dim) {
        // Free slots: (i, j) with i < j, entry in [0, diag[j]).
        let slots: Vec<(usize, usize)> =
            (0..dim).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut counter = vec![0i64; slots.len()];
        loop {
            let mut rows = vec![vec![0i64; dim]; dim];
            for (i, &p) in diag.iter().enumerate() {
                rows[i][i] = p as i64;
            }
            for (&(i, j), &c) in slots.iter().zip(&counter) {
                rows[i][j] = c;
            }
            out.push(Sublattice::from_hnf(rows)?);
            // Odometer over the slots.
            let mut k = 0;
            loop {
                if k == slots.len() {
                    break;
                }
                counter[k] += 1;
                if counter[k] < diag[slots[k].1] as i64 {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
            if k == slots.len() {
                break;
            }
        }
    }
    out.sort_by_key(|l| l.to_row_major());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    fn sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n % d == 0).sum()
    }

    fn det2(a: &[Vec<i64>]) -> i64 {
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// `v` lies in the row lattice of `b` iff `v * adj(b) ≡ 0 (mod det b)`.
    fn in_lattice2(b: &[Vec<i64>], v: [i64; 2]) -> bool {
        let det = det2(b);
        let adj = [[b[1][1], -b[0][1]], [-b[1][0], b[0][0]]];
        let x = v[0] * adj[0][0] + v[1] * adj[1][0];
        let y = v[0] * adj[0][1] + v[1] * adj[1][1];
        x % det == 0 && y % det == 0
    }

    fn same_lattice2(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
        a.iter().all(|r| in_lattice2(b, [r[0], r[1]]))
            && b.iter().all(|r| in_lattice2(a, [r[0], r[1]]))
    }

    /// Distinct lattices among all 2x2 matrices with entries in [-n, n] and
    /// |det| = n, deduplicated by mutual containment (no HNF involved).
    fn brute_force_count2(n: i64) -> usize {
        let mut reps: Vec<Vec<Vec<i64>>> = Vec::new();
        let r = -n..=n;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        let mat = vec![vec![a, b], vec![c, d]];
                        if det2(&mat).abs() != n {
                            continue;
                        }
                        if !reps.iter().any(|q| same_lattice2(q, &mat)) {
                            reps.push(mat);
                        }
                    }
                }
            }
        }
        reps.len()
    }

    #[test]
    fn hnf_examples() {
        let l = hnf_reduce(&m(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(l.hnf(), &m(&[&[2, 0], &[0, 2]])[..]);
        assert_eq!(l.index(), 4);
        let l = hnf_reduce(&m(&[&[1, 1], &[1, -1]])).unwrap();
        assert_eq!(l.hnf(), &m(&[&[1, 1], &[0, 2]])[..]);
        assert_eq!(l.index(), 2);
        let l = hnf_reduce(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(l.hnf(), &m(&[&[1, 0], &[0, 1]])[..]);
        assert_eq!(l.index(), 1);
    }

    #[test]
    fn singular_is_rejected() {
        assert_eq!(hnf_reduce(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
        assert_eq!(
            hnf_reduce(&m(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn hnf_is_idempotent_and_basis_invariant() {
        let base = m(&[&[3, 1, -2], &[0, 4, 5], &[2, -1, 7]]);
        let h = hnf_reduce(&base).unwrap();
        assert_eq!(hnf_reduce(h.hnf()).unwrap(), h);
        // a few unimodular row operations
        let mut b = base.clone();
        for k in 0..3 {
            b[0][k] += 2 * b[1][k];
        }
        b.swap(1, 2);
        for k in 0..3 {
            b[2][k] = -b[2][k] - b[0][k];
        }
        assert_eq!(hnf_reduce(&b).unwrap(), h);
    }

    #[test]
    fn sublattice_examples() {
        assert_eq!(enumerate_sublattices(2, 1).unwrap().len(), 1);
        assert_eq!(enumerate_sublattices(2, 2).unwrap().len(), 3);
        assert_eq!(enumerate_sublattices(2, 6).unwrap().len(), 12);
        assert_eq!(brute_force_count2(2), 3);
        assert_eq!(brute_force_count2(6), 12);
    }

    #[test]
    fn sublattice_counts_equal_sigma() {
        for n in 1..=12u64 {
            let lats = enumerate_sublattices(2, n).unwrap();
            assert_eq!(lats.len() as u64, sigma(n), "n = {n}");
            let mut dedup = lats.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), lats.len());
            for l in &lats {
                assert_eq!(&hnf_reduce(l.hnf()).unwrap(), l);
                assert_eq!(l.index(), n);
            }
        }
    }

    #[test]
    fn sublattice_counts_match_brute_force_oracle() {
        for n in 1..=8 {
            assert_eq!(
                enumerate_sublattices(2, n as u64).unwrap().len(),
                brute_force_count2(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn three_dim_counts() {
        // sum over d1*d2*d3 = n of d2 * d3^2
        for n in 1..=6u64 {
            let mut expect = 0;
            for a in 1..=n {
                for b in 1..=n {
                    if n % (a * b) == 0 {
                        let c = n / (a * b);
                        expect += b * c * c;
                    }
                }
            }
            assert_eq!(enumerate_sublattices(3, n).unwrap().len() as u64, expect);
        }
        assert!(enumerate_sublattices(4, 2).is_err());
        assert!(enumerate_sublattices(2, MAX_SUBLATTICE_INDEX + 1).is_err());
    }

    #[test]
    fn reduce_examples() {
        let l = Sublattice::scalar(2, 2).unwrap();
        assert_eq!(l.reduce(&[5, 0]).unwrap(), vec![1, 0]);
        let l = hnf_reduce(&m(&[&[1, 1], &[1, -1]])).unwrap();
        assert_eq!(l.reduce(&[0, 3]).unwrap(), vec![0, 1]);
        assert_eq!(l.reduce(&[3, -5]).unwrap(), vec![0, 0]);
        assert!(l.contains(&[2, 0]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
    }

    #[test]
    fn row_major_round_trip() {
        let l = hnf_reduce(&m(&[&[1, 1], &[1, -1]])).unwrap();
        assert_eq!(l.to_row_major(), vec![1, 1, 0, 2]);
        assert_eq!(Sublattice::from_row_major(2, &l.to_row_major()).unwrap(), l);
        assert!(Sublattice::from_row_major(2, &[1, 2, 0, 2]).is_err());
    }
}
