//! n-dimensional complex FFTs on row-major cubic arrays, plus lattice helpers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plan = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(len: usize) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(len)
        .or_insert_with(|| {
            let mut p = FftPlanner::new();
            (p.plan_fft_forward(len), p.plan_fft_inverse(len))
        })
        .clone()
}

/// Unnormalized n-D DFT over `len^n` points.
pub struct NdFft {
    n: usize,
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl NdFft {
    pub fn new(n: usize, len: usize) -> Self {
        let (fwd, inv) = plans(len);
        NdFft { n, len, fwd, inv }
    }

    pub fn total(&self) -> usize {
        self.len.pow(self.n as u32)
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd);
    }

    /// Inverse without the 1/len^n factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv);
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.total(), "fft buffer size");
        let len = self.len;
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // last axis is contiguous
        fft.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex64::default(); len];
        for axis in (0..self.n - 1).rev() {
            let stride = len.pow((self.n - 1 - axis) as u32);
            let block = stride * len;
            for start in (0..data.len()).step_by(block) {
                for inner in 0..stride {
                    let base = start + inner;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = data[base + k * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Copies a `src_len^n` array into the corner `offset..offset+src_len` of a zeroed `dst_len^n` array.
pub fn embed(src: &[Complex64], n: usize, src_len: usize, dst_len: usize, offset: usize) -> Vec<Complex64> {
    let mut dst = vec![Complex64::default(); dst_len.pow(n as u32)];
    let mut idx = vec![0usize; n];
    for (j, v) in src.iter().enumerate() {
        unravel(j, src_len, &mut idx);
        let flat = idx.iter().fold(0, |acc, &i| acc * dst_len + i + offset);
        dst[flat] = *v;
    }
    dst
}

/// Inverse of [`embed`].
pub fn extract(src: &[Complex64], n: usize, src_len: usize, dst_len: usize, offset: usize) -> Vec<Complex64> {
    let mut idx = vec![0usize; n];
    (0..dst_len.pow(n as u32))
        .map(|j| {
            unravel(j, dst_len, &mut idx);
            src[idx.iter().fold(0, |acc, &i| acc * src_len + i + offset)]
        })
        .collect()
}

pub fn unravel(mut flat: usize, len: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % len;
        flat /= len;
    }
}

/// Maps centered lattice index k (coordinate (k − N/2)·step) to DFT bin (k − N/2) mod N,
/// together with the sign (−1)^{Σ(k_i − N/2)} that moves the origin from −L to 0.
pub fn centered_bins(n: usize, len: usize) -> Vec<(usize, f64)> {
    let half = len / 2;
    let mut idx = vec![0usize; n];
    (0..len.pow(n as u32))
        .map(|k| {
            unravel(k, len, &mut idx);
            let mut bin = 0;
            let mut parity = 0;
            for &i in &idx {
                bin = bin * len + (i + half) % len;
                parity += i + half;
            }
            (bin, if parity % 2 == 0 { 1.0 } else { -1.0 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_dft() {
        let (n, len) = (2, 6);
        let data: Vec<Complex64> = (0..36)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        NdFft::new(n, len).forward(&mut fast);
        let mut idx = vec![0; 2];
        let mut kdx = vec![0; 2];
        for k in 0..36 {
            unravel(k, len, &mut kdx);
            let mut acc = Complex64::default();
            for (j, v) in data.iter().enumerate() {
                unravel(j, len, &mut idx);
                let ph = -2.0 * std::f64::consts::PI
                    * (idx[0] * kdx[0] + idx[1] * kdx[1]) as f64
                    / len as f64;
                acc += v * Complex64::from_polar(1.0, ph);
            }
            assert!((acc - fast[k]).norm() < 1e-12);
        }
        NdFft::new(n, len).inverse(&mut fast);
        for (a, b) in fast.iter().zip(&data) {
            assert!((a / 36.0 - b).norm() < 1e-14);
        }
    }

    #[test]
    fn embed_extract_round_trip() {
        let src: Vec<Complex64> = (0..64).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let big = embed(&src, 3, 4, 8, 2);
        assert_eq!(extract(&big, 3, 8, 4, 2), src);
    }
}
