//! Sumsets through floating-point convolution.
//!
//! The indicator vectors are convolved cyclically along every modulus of the
//! group (one batch of 1-D transforms per axis) and the support of the result
//! is read off with threshold 1/2. Convolution values are nonnegative
//! integers at most `min(|A|, |B|) <= 2^20`; with double-precision
//! transforms the absolute error is bounded by roughly
//! `c * 2^-52 * log2(n) * |A| * |B| / n`-scaled terms, below `1e-6` at the cap,
//! so thresholding at 1/2 is exact.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{capacity, Result};
use crate::grouplat::{Ambient, FiniteGroup};

use super::dense::DenseSet;

/// Largest group order accepted by [`sumset_fft`].
pub const FFT_MAX_ORDER: usize = 1 << 20;

fn transform(
    data: &mut [Complex<f64>],
    group: &FiniteGroup,
    planner: &mut FftPlanner<f64>,
    inverse: bool,
) {
    let n = group.order();
    let mut line = Vec::new();
    for (&m, &stride) in group.moduli().iter().zip(group.strides()) {
        if m == 1 {
            continue;
        }
        let fft = if inverse {
            planner.plan_fft_inverse(m)
        } else {
            planner.plan_fft_forward(m)
        };
        let span = m * stride;
        for outer in (0..n).step_by(span) {
            for inner in 0..stride {
                let base = outer + inner;
                line.clear();
                line.extend((0..m).map(|k| data[base + k * stride]));
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// `A + B` as the thresholded support of the cyclic convolution of the
/// indicator vectors. Quotient groups fall back to the direct sumset.
pub fn sumset_fft(a: &DenseSet, b: &DenseSet) -> Result<DenseSet> {
    a.check_same_group(b)?;
    let group = match a.group().as_ref() {
        Ambient::Finite(g) => g,
        Ambient::Quotient(_) => return Ok(a.sumset_unchecked(b)),
    };
    let n = group.order();
    if n > FFT_MAX_ORDER {
        return Err(capacity(
            "group order for FFT sumset",
            n as u128,
            FFT_MAX_ORDER as u128,
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(DenseSet::empty(a.group().clone()));
    }
    let indicator = |s: &DenseSet| {
        let mut v = vec![Complex::new(0.0, 0.0); n];
        for x in s.iter() {
            v[x].re = 1.0;
        }
        v
    };
    let mut planner = FftPlanner::new();
    let mut fa = indicator(a);
    let mut fb = indicator(b);
    transform(&mut fa, group, &mut planner, false);
    transform(&mut fb, group, &mut planner, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    transform(&mut fa, group, &mut planner, true);
    let scale = n as f64;
    let support: Vec<usize> = fa
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re / scale > 0.5)
        .map(|(i, _)| i)
        .collect();
    DenseSet::from_elements(a.group().clone(), &support)
}
