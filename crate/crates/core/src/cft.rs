//! Discrete Clifford Fourier transform with the kernel on the right.
//!
//! `F(w_k) = (2π)^{−n/2} Δx^n Σ_j f(x_j) e^{−I w_k·x_j}`. Right multiplication by
//! `e^{−Iφ}` acts on each pseudoscalar pair as a complex phase, so the transform
//! is one complex FFT per pair.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::error::Result;
use crate::fft::{centered_bins, NdFft};
use crate::grid::{Domain, GridSignal, GridSpec};

/// Centered spatial lattice → centered frequency lattice, unscaled.
pub(crate) fn lattice_forward(planes: &mut [Vec<Complex64>], n: usize, len: usize) {
    let fft = NdFft::new(n, len);
    let bins = centered_bins(n, len);
    for z in planes.iter_mut() {
        fft.forward(z);
        let shifted: Vec<Complex64> = bins.iter().map(|&(b, s)| z[b] * s).collect();
        *z = shifted;
    }
}

/// Centered frequency lattice → centered spatial lattice, unscaled.
pub(crate) fn lattice_inverse(planes: &mut [Vec<Complex64>], n: usize, len: usize) {
    let fft = NdFft::new(n, len);
    let bins = centered_bins(n, len);
    for z in planes.iter_mut() {
        let mut g = vec![Complex64::default(); z.len()];
        for (k, &(b, s)) in bins.iter().enumerate() {
            g[b] = z[k] * s;
        }
        fft.inverse(&mut g);
        *z = g;
    }
}

pub(crate) fn forward_scale(spec: &GridSpec) -> f64 {
    (spec.dx() / (2.0 * PI).sqrt()).powi(spec.n as i32)
}

pub(crate) fn inverse_scale(spec: &GridSpec) -> f64 {
    (spec.dw() / (2.0 * PI).sqrt()).powi(spec.n as i32)
}

fn scale_planes(planes: &mut [Vec<Complex64>], s: f64) {
    planes
        .iter_mut()
        .flat_map(|z| z.iter_mut())
        .for_each(|v| *v *= s);
}

pub fn cft_forward(f: &GridSignal) -> Result<GridSignal> {
    f.algebra().require_complex_pseudoscalar()?;
    f.require_domain(Domain::Spatial)?;
    let spec = *f.spec();
    let mut z = f.to_complex();
    lattice_forward(&mut z, spec.n, spec.samples);
    scale_planes(&mut z, forward_scale(&spec));
    Ok(GridSignal::from_complex(spec, Domain::Frequency, f.algebra(), &z))
}

pub fn cft_inverse(f: &GridSignal) -> Result<GridSignal> {
    f.algebra().require_complex_pseudoscalar()?;
    f.require_domain(Domain::Frequency)?;
    let spec = *f.spec();
    let mut z = f.to_complex();
    lattice_inverse(&mut z, spec.n, spec.samples);
    scale_planes(&mut z, inverse_scale(&spec));
    Ok(GridSignal::from_complex(spec, Domain::Spatial, f.algebra(), &z))
}

/// Periodic convolution centered on the origin:
/// `(f*g)(x_j) = Δx^n Σ_τ f(x_τ)·g(x_j − x_τ)`, differences wrapped into [−L, L).
pub fn convolve(f: &GridSignal, g: &GridSignal) -> Result<GridSignal> {
    f.check_compatible(g)?;
    f.require_domain(Domain::Spatial)?;
    let spec = *f.spec();
    let alg = f.algebra().clone();
    let bc = alg.blade_count();
    let m = spec.len();
    let fft = NdFft::new(spec.n, spec.samples);
    let spectra = |s: &GridSignal| -> Vec<Option<Vec<Complex64>>> {
        (0..bc)
            .map(|b| {
                let p = s.plane(b);
                if p.iter().all(|&v| v == 0.0) {
                    return None;
                }
                let mut z: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft.forward(&mut z);
                Some(z)
            })
            .collect()
    };
    let (fs, gs) = (spectra(f), spectra(g));
    // g re-indexed so that index 0 is the origin: a (−1)^{Σk} factor in frequency
    let mut idx = vec![0; spec.n];
    let parity: Vec<f64> = (0..m)
        .map(|k| {
            spec.unravel(k, &mut idx);
            if idx.iter().sum::<usize>() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let mut acc: Vec<Option<Vec<Complex64>>> = vec![None; bc];
    for (a, fa) in fs.iter().enumerate() {
        let Some(fa) = fa else { continue };
        for (b, gb) in gs.iter().enumerate() {
            let Some(gb) = gb else { continue };
            let s = alg.sign(a, b);
            let out = acc[a ^ b].get_or_insert_with(|| vec![Complex64::default(); m]);
            for k in 0..m {
                out[k] += fa[k] * gb[k] * (s * parity[k]);
            }
        }
    }
    let w = spec.dx().powi(spec.n as i32) / m as f64;
    let mut res = GridSignal::zeros(spec, Domain::Spatial, &alg)?;
    for (c, z) in acc.into_iter().enumerate() {
        if let Some(mut z) = z {
            fft.inverse(&mut z);
            for (dst, v) in res.plane_mut(c).iter_mut().zip(&z) {
                *dst = v.re * w;
            }
        }
    }
    Ok(res)
}
