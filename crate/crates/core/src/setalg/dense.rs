use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grouplat::{Ambient, GroupRef, Subgroup};

use super::bits;

/// A subset of a finite group stored as a bit vector with cached cardinality.
#[derive(Clone)]
pub struct DenseSet {
    group: GroupRef,
    bits: Vec<u64>,
    card: usize,
}

impl PartialEq for DenseSet {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.same_group(other)
    }
}

impl Eq for DenseSet {}

impl fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DenseSet[{}]{{{}}}",
            self.group.describe(),
            self.to_literal()
        )
    }
}

impl DenseSet {
    pub fn empty(group: GroupRef) -> Self {
        let n = group.order();
        DenseSet {
            group,
            bits: vec![0; bits::words_for(n)],
            card: 0,
        }
    }

    pub fn full(group: GroupRef) -> Self {
        let n = group.order();
        let mut s = Self::empty(group);
        for i in 0..n {
            s.bits[i / 64] |= 1 << (i % 64);
        }
        s.card = n;
        s
    }

    pub fn from_elements(group: GroupRef, elements: &[usize]) -> Result<Self> {
        let n = group.order();
        let mut s = Self::empty(group);
        for &e in elements {
            if e >= n {
                return Err(Error::InvalidInput(format!(
                    "element {e} outside group of order {n}"
                )));
            }
            s.bits[e / 64] |= 1 << (e % 64);
        }
        s.recount();
        Ok(s)
    }

    /// Set whose element `i` is present iff bit `i` of `mask` is (groups of
    /// order at most 64).
    pub fn from_mask(group: GroupRef, mask: u64) -> Result<Self> {
        let n = group.order();
        if n > 64 || (n < 64 && mask >> n != 0) {
            return Err(Error::InvalidInput(format!(
                "mask {mask:#x} does not fit a group of order {n}"
            )));
        }
        let mut s = Self::empty(group);
        s.bits[0] = mask;
        s.recount();
        Ok(s)
    }

    pub fn subgroup(group: GroupRef, h: &Subgroup) -> Self {
        Self::from_elements(group, h.elements()).expect("subgroup elements lie in the group")
    }

    /// Parses `"0,1,3,4"` (element indices) or `"(0,1);(1,3)"` (coordinate
    /// tuples of a product group). An empty literal or `"{}"` is the empty
    /// set.
    pub fn parse(group: GroupRef, literal: &str) -> Result<Self> {
        let text = literal.trim();
        let text = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text)
            .trim();
        if text.is_empty() {
            return Ok(Self::empty(group));
        }
        let mut elements = Vec::new();
        if text.starts_with('(') {
            let Ambient::Finite(g) = group.as_ref() else {
                return Err(Error::InvalidInput(
                    "coordinate tuples need a product group".into(),
                ));
            };
            let mut pos = 0;
            for tuple in text.split(';') {
                let inner = tuple
                    .trim()
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse {
                        pos,
                        msg: format!("expected a tuple like (0,1), found {tuple:?}"),
                    })?;
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse {
                        pos,
                        msg: e.to_string(),
                    })?;
                elements.push(g.index_of(&coords)?);
                pos += tuple.len() + 1;
            }
        } else {
            let mut pos = 0;
            for item in text.split(',') {
                let e = item.trim().parse::<usize>().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("expected an element index, found {item:?}"),
                })?;
                elements.push(e);
                pos += item.len() + 1;
            }
        }
        Self::from_elements(group, &elements)
    }

    fn recount(&mut self) {
        self.card = self.bits.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn len(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    /// The set as a single word (groups of order at most 64).
    pub fn to_mask(&self) -> Option<u64> {
        (self.bits.len() == 1).then(|| self.bits[0])
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.order() && self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.order());
        if !self.contains(x) {
            self.bits[x / 64] |= 1 << (x % 64);
            self.card += 1;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_literal(&self) -> String {
        match self.group.as_ref() {
            Ambient::Finite(g) if g.rank() > 1 => self
                .iter()
                .map(|x| self.group.label(x))
                .collect::<Vec<_>>()
                .join(";"),
            _ => self
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    pub(crate) fn same_group(&self, other: &DenseSet) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group == other.group
    }

    pub(crate) fn check_same_group(&self, other: &DenseSet) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn zip_with(&self, other: &DenseSet, f: impl Fn(u64, u64) -> u64) -> Result<DenseSet> {
        self.check_same_group(other)?;
        let mut out = DenseSet {
            group: self.group.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            card: 0,
        };
        out.recount();
        Ok(out)
    }

    pub fn union(&self, other: &DenseSet) -> Result<DenseSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &DenseSet) -> Result<DenseSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &DenseSet) -> Result<DenseSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &DenseSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(&a, &b)| a & !b == 0)
    }

    /// ORs `self + g` into `dst` (which must have the same length).
    pub(crate) fn translate_or_into(&self, g: usize, dst: &mut [u64]) {
        match self.group.as_ref() {
            Ambient::Finite(fg) => {
                let n = fg.order();
                let inner = *fg.moduli().last().expect("rank >= 1");
                let shift = g % inner;
                let outer_shift = g - shift;
                let mut block = 0;
                while block < n {
                    let dst_block = fg.add(block, outer_shift);
                    if inner <= 64 {
                        let w = bits::get_word(&self.bits, block, inner);
                        if w != 0 {
                            bits::or_word(
                                dst,
                                dst_block,
                                inner,
                                bits::rotate_word(w, inner, shift),
                            );
                        }
                    } else {
                        let src = bits::get_range(&self.bits, block, inner);
                        bits::or_range(
                            dst,
                            dst_block,
                            &bits::rotate_range(&src, inner, shift),
                            inner,
                        );
                    }
                    block += inner;
                }
            }
            Ambient::Quotient(q) => {
                for x in self.iter() {
                    let y = q.add(x, g);
                    dst[y / 64] |= 1 << (y % 64);
                }
            }
        }
    }

    /// `self + g`.
    pub fn translate(&self, g: usize) -> DenseSet {
        let mut bits = vec![0u64; self.bits.len()];
        self.translate_or_into(g, &mut bits);
        DenseSet {
            group: self.group.clone(),
            bits,
            card: self.card,
        }
    }

    pub(crate) fn sumset_unchecked(&self, other: &DenseSet) -> DenseSet {
        let (small, large) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let mut bits = vec![0u64; self.bits.len()];
        for a in small.iter() {
            large.translate_or_into(a, &mut bits);
        }
        let mut out = DenseSet {
            group: self.group.clone(),
            bits,
            card: 0,
        };
        out.recount();
        out
    }

    /// `C + H` for a subgroup `H`.
    pub fn plus_subgroup(&self, h: &Subgroup) -> DenseSet {
        let mut bits = vec![0u64; self.bits.len()];
        for &g in h.elements() {
            self.translate_or_into(g, &mut bits);
        }
        let mut out = DenseSet {
            group: self.group.clone(),
            bits,
            card: 0,
        };
        out.recount();
        out
    }

    /// Tests every translate `C + g`; `g` is skipped early unless it maps the
    /// least element of `C` into `C`.
    pub(crate) fn stabilizer_unchecked(&self) -> Subgroup {
        let c0 = self.min_element().expect("nonempty");
        let mut scratch = vec![0u64; self.bits.len()];
        let mut elems = Vec::new();
        for g in 0..self.order() {
            if !self.contains(self.group.add(c0, g)) {
                continue;
            }
            scratch.iter_mut().for_each(|w| *w = 0);
            self.translate_or_into(g, &mut scratch);
            if scratch == self.bits {
                elems.push(g);
            }
        }
        Subgroup::from_sorted_unchecked(elems)
    }
}
