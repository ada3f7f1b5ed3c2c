//! Multidimensional DFT over a product of cyclic groups.
//!
//! The transform runs a 1-D FFT along every axis of the mixed-radix layout.
//! Forward uses the kernel `exp(−2πi k j / n)`, which is the conjugated
//! character sum; the inverse is unnormalised.

use num_complex::Complex;
use rustfft::{FftDirection, FftNum, FftPlanner};

use crate::group::GroupSpec;

pub(crate) fn dft_in_place<T: FftNum>(g: &GroupSpec, data: &mut [Complex<T>], inverse: bool) {
    assert_eq!(data.len(), g.size());
    let direction = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let mut planner = FftPlanner::<T>::new();
    for axis in 0..g.rank() {
        let n = g.orders()[axis] as usize;
        if n == 1 {
            continue;
        }
        let stride = g.stride(axis);
        let fft = planner.plan_fft(n, direction);
        if stride == 1 {
            // Lines along the last axis are contiguous.
            fft.process(data);
            continue;
        }
        let block = n * stride;
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[start + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_character_sum() {
        let g = GroupSpec::new(vec![3, 4, 5]).unwrap();
        let input: Vec<Complex<f64>> = (0..g.size())
            .map(|i| Complex::new((i * 7 % 11) as f64, (i % 3) as f64))
            .collect();
        let mut fast = input.clone();
        dft_in_place(&g, &mut fast, false);
        let e = g.exponent() as f64;
        for (t, got) in fast.iter().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (x, v) in input.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * g.pairing_idx(t, x) as f64 / e;
                acc += v * Complex::from_polar(1.0, ang);
            }
            assert!((acc - got).norm() < 1e-9, "t={t}");
        }
        dft_in_place(&g, &mut fast, true);
        for (a, b) in fast.iter().zip(&input) {
            assert!((a / g.size() as f64 - b).norm() < 1e-9);
        }
    }
}
