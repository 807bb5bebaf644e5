//! Word-level helpers for bit ranges inside `u64` slices.

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Bits `off .. off + len` (len <= 64) as the low bits of a word.
#[inline]
pub(crate) fn get_word(words: &[u64], off: usize, len: usize) -> u64 {
    debug_assert!(len <= 64);
    let (w, s) = (off / 64, off % 64);
    let mut v = words[w] >> s;
    if s != 0 && s + len > 64 {
        v |= words[w + 1] << (64 - s);
    }
    v & low_mask(len)
}

/// ORs the low `len` bits of `val` into positions `off .. off + len`.
#[inline]
pub(crate) fn or_word(words: &mut [u64], off: usize, len: usize, val: u64) {
    debug_assert!(len <= 64);
    let val = val & low_mask(len);
    let (w, s) = (off / 64, off % 64);
    words[w] |= val << s;
    if s != 0 && s + len > 64 {
        words[w + 1] |= val >> (64 - s);
    }
}

/// Rotation of a `len`-bit word (len <= 64): bit `i` moves to `(i + r) % len`.
#[inline]
pub(crate) fn rotate_word(v: u64, len: usize, r: usize) -> u64 {
    if r == 0 || len <= 1 {
        return v;
    }
    ((v << r) | (v >> (len - r))) & low_mask(len)
}

/// Bits `off .. off + len` of `words` as a fresh vector starting at bit 0.
pub(crate) fn get_range(words: &[u64], off: usize, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; words_for(len)];
    let mut done = 0;
    while done < len {
        let take = (len - done).min(64);
        out[done / 64] = get_word(words, off + done, take);
        done += take;
    }
    out
}

/// ORs the first `len` bits of `src` into `words` at bit offset `off`.
pub(crate) fn or_range(words: &mut [u64], off: usize, src: &[u64], len: usize) {
    let mut done = 0;
    while done < len {
        let take = (len - done).min(64);
        or_word(words, off + done, take, src[done / 64]);
        done += take;
    }
}

/// Rotation of a `len`-bit vector: bit `i` moves to `(i + r) % len`.
pub(crate) fn rotate_range(src: &[u64], len: usize, r: usize) -> Vec<u64> {
    if r == 0 {
        return src.to_vec();
    }
    let mut out = vec![0u64; words_for(len)];
    // bits [0, len - r) move up by r; bits [len - r, len) wrap to the bottom.
    let hi = get_range(src, 0, len - r);
    or_range(&mut out, r, &hi, len - r);
    let lo = get_range(src, len - r, r);
    or_range(&mut out, 0, &lo, r);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_bools(words: &[u64], len: usize) -> Vec<bool> {
        (0..len)
            .map(|i| words[i / 64] >> (i % 64) & 1 == 1)
            .collect()
    }

    #[test]
    fn rotate_range_matches_index_map() {
        let mut rng = crate::rng::SplitMix64::new(11);
        for len in [1usize, 5, 63, 64, 65, 127, 128, 200] {
            let mut src = vec![0u64; words_for(len)];
            for w in src.iter_mut() {
                *w = rng.next_u64();
            }
            if len % 64 != 0 {
                *src.last_mut().unwrap() &= low_mask(len % 64);
            }
            let b = to_bools(&src, len);
            for r in [0, 1, len / 2, len - 1] {
                let out = to_bools(&rotate_range(&src, len, r), len);
                for i in 0..len {
                    assert_eq!(out[(i + r) % len], b[i]);
                }
            }
        }
    }

    #[test]
    fn word_ops_cross_boundaries() {
        let mut words = vec![0u64; 3];
        or_word(&mut words, 60, 10, 0b11_1111_1111);
        assert_eq!(get_word(&words, 60, 10), 0b11_1111_1111);
        assert_eq!(words[0] >> 60, 0xf);
        assert_eq!(words[1], 0b11_1111);
        assert_eq!(rotate_word(0b0011, 4, 3), 0b1001);
    }
}
