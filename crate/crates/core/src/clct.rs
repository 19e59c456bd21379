//! Clifford linear canonical transform with isotropic parameters M = (A, B, C, D).

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{pseudoscalar_exp, Algebra, Multivector};
use crate::cft::{cft_forward, convolve};
use crate::error::{Error, Result};
use crate::grid::{Domain, GridSignal, GridSpec};

const SYMPLECTIC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LCTParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LCTParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if ![a, b, c, d].iter().all(|v| v.is_finite()) || (det - 1.0).abs() > SYMPLECTIC_TOL {
            return Err(Error::InvalidParams(format!(
                "AD − BC = {det} for M = ({a}, {b}, {c}, {d})"
            )));
        }
        Ok(LCTParams { a, b, c, d })
    }

    /// Completes (A, B, D) with C = (AD − 1)/B.
    pub fn from_abd(a: f64, b: f64, d: f64) -> Result<Self> {
        if b == 0.0 {
            return Err(Error::DegenerateB);
        }
        Self::new(a, b, (a * d - 1.0) / b, d)
    }

    /// M = (0, 1, −1, 0): the plain Fourier/Stockwell case.
    pub fn fourier() -> Self {
        LCTParams {
            a: 0.0,
            b: 1.0,
            c: -1.0,
            d: 0.0,
        }
    }

    pub fn is_fourier(&self) -> bool {
        *self == Self::fourier()
    }

    /// Chirp rate A/(2B) used on both sides of the canonical transforms.
    pub fn chirp_rate(&self) -> Result<f64> {
        if self.b == 0.0 {
            return Err(Error::DegenerateB);
        }
        Ok(self.a / (2.0 * self.b))
    }

    /// C_M = 1/√((2π)^n |B|), real positive root for either sign of B.
    pub fn normalization(&self, n: usize) -> Result<f64> {
        if self.b == 0.0 {
            return Err(Error::DegenerateB);
        }
        Ok(1.0 / ((2.0 * PI).powi(n as i32) * self.b.abs()).sqrt())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// K_M(u, x) = C_M e^{I(A|x|²/2B − x·u/B + D|u|²/2B)}.
pub fn clct_kernel(alg: &Arc<Algebra>, m: &LCTParams, u: &[f64], x: &[f64]) -> Result<Multivector> {
    let cm = m.normalization(alg.n())?;
    let phase = (m.a * dot(x, x) - 2.0 * dot(x, u) + m.d * dot(u, u)) / (2.0 * m.b);
    Ok(pseudoscalar_exp(alg, phase)?.scale(cm))
}

/// Squared radius of every lattice point in `domain`, flat order.
pub(crate) fn radii_sq(spec: &GridSpec, domain: Domain) -> Vec<f64> {
    let mut idx = vec![0; spec.n];
    (0..spec.len())
        .map(|j| {
            spec.unravel(j, &mut idx);
            idx.iter().map(|&k| domain.coord(spec, k).powi(2)).sum()
        })
        .collect()
}

/// L_M f on the canonical lattice u_k = B·w_k (B ≠ 0), evaluated as
/// chirp → CFT → chirp. For B = 0 the output sits on the spatial lattice and
/// needs an integer D.
pub fn clct_forward(f: &GridSignal, m: &LCTParams) -> Result<GridSignal> {
    f.require_domain(Domain::Spatial)?;
    f.algebra().require_complex_pseudoscalar()?;
    let spec = *f.spec();
    if m.b == 0.0 {
        return degenerate_branch(f, m);
    }
    let rate = m.chirp_rate()?;
    let g = cft_forward(&f.chirp_multiply(rate, 1.0)?)?;
    let out_domain = Domain::Canonical { b: m.b };
    let r2 = radii_sq(&spec, out_domain);
    let scale = m.normalization(spec.n)? * (2.0 * PI).powf(spec.n as f64 / 2.0);
    Ok(g
        .with_domain(out_domain)
        .right_phase(|j| m.d * r2[j] / (2.0 * m.b))
        .scale(scale))
}

/// D^{−n/2} e^{−I CD|u|²/2} f(Du), exponential on the left as written.
fn degenerate_branch(f: &GridSignal, m: &LCTParams) -> Result<GridSignal> {
    let spec = *f.spec();
    let n = spec.n;
    let dr = m.d.round();
    if m.d == 0.0 || (m.d - dr).abs() > 1e-12 || (m.d < 0.0 && n % 2 == 1) {
        return Err(Error::ResamplingUnsupported(m.d));
    }
    let di = dr as i64;
    let half = (spec.samples / 2) as i64;
    let mut out = GridSignal::zeros(spec, Domain::Canonical { b: 0.0 }, f.algebra())?;
    let bc = f.algebra().blade_count();
    let mut idx = vec![0; n];
    let mut src = vec![0; n];
    for j in 0..spec.len() {
        spec.unravel(j, &mut idx);
        let inside = idx.iter().zip(src.iter_mut()).all(|(&k, s)| {
            let t = di * (k as i64 - half) + half;
            *s = t.max(0) as usize;
            (0..spec.samples as i64).contains(&t)
        });
        if inside {
            let from = spec.ravel(&src);
            for b in 0..bc {
                let v = f.plane(b)[from];
                out.plane_mut(b)[j] = v;
            }
        }
    }
    let amp = m.d.powf(-(n as f64) / 2.0);
    let r2 = radii_sq(&spec, Domain::Spatial);
    Ok(out.left_phase(|j| -m.c * m.d * r2[j] / 2.0).scale(amp))
}

/// f Θ_M g = [(f·e^{IA|x|²/2B}) * g]·e^{−IA|x|²/2B}, both chirps on the right.
pub fn lct_convolve(f: &GridSignal, g: &GridSignal, m: &LCTParams) -> Result<GridSignal> {
    let rate = m.chirp_rate()?;
    let h = f.chirp_multiply(rate, 1.0)?;
    convolve(&h, g)?.chirp_multiply(rate, -1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cft::cft_forward;

    fn alg2() -> Arc<Algebra> {
        Algebra::for_transforms(2).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(LCTParams::new(1.0, 2.0, 0.0, 1.0).is_ok());
        assert!(LCTParams::new(1.0, 2.0, 1.0, 1.0).is_err());
        assert!(LCTParams::fourier().is_fourier());
    }

    #[test]
    fn kernel_examples() {
        let a = alg2();
        let k = clct_kernel(&a, &LCTParams::fourier(), &[0.4, -1.0], &[2.0, 0.5]).unwrap();
        let want = pseudoscalar_exp(&a, -(0.8 - 0.5)).unwrap().scale(1.0 / (2.0 * PI));
        assert!(k.max_abs_diff(&want) < 1e-15);
        let m = LCTParams { a: 1.0, b: 2.0, c: 0.0, d: 1.0 };
        let k = clct_kernel(&a, &m, &[2.0, 0.0], &[1.0, 0.0]).unwrap();
        let cm = 1.0 / (4.0 * PI * PI * 2.0f64).sqrt();
        let want = pseudoscalar_exp(&a, 0.25).unwrap().scale(cm);
        assert!(k.max_abs_diff(&want) < 1e-15);
        let origin = clct_kernel(&a, &m, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(origin.scalar_part(), cm);
        let deg = LCTParams { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };
        assert!(matches!(clct_kernel(&a, &deg, &[0.0; 2], &[0.0; 2]), Err(Error::DegenerateB)));
    }

    #[test]
    fn fourier_point_reduces_to_cft() {
        let a = alg2();
        let s = GridSpec::default_for(2).unwrap();
        let f = GridSignal::sample(s, &a, |x| {
            Multivector::from_coeffs(&a, vec![(-x[0] * x[0] - 0.5 * x[1] * x[1]).exp(), 0.0, (-x[1] * x[1]).exp() * x[0], 0.0]).unwrap()
        })
        .unwrap();
        let l = clct_forward(&f, &LCTParams::fourier()).unwrap();
        let c = cft_forward(&f).unwrap();
        assert!(l.max_abs_diff(&c) <= 1e-12 * c.max_abs());
        assert_eq!(l.domain(), Domain::Canonical { b: 1.0 });
    }

    #[test]
    fn degenerate_branch_lookup() {
        let a = alg2();
        let s = GridSpec::new(2, 4.0, 16).unwrap();
        let f = GridSignal::sample_scalar(s, &a, |x| x[0] + 10.0 * x[1]).unwrap();
        let m = LCTParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let l = clct_forward(&f, &m).unwrap();
        assert!(l.max_abs_diff(&f) < 1e-15);
        let m = LCTParams::new(-1.0, 0.0, 0.5, -1.0).unwrap();
        let l = clct_forward(&f, &m).unwrap();
        // D = −1: f(−u), amplitude (−1)^{−1} = −1, phase e^{+I|u|²/4}
        let j = s.ravel(&[5, 9]);
        let src = s.ravel(&[11, 7]);
        let mut c = [0.0; 2];
        l.coords(j, &mut c);
        let ph = 0.5 * (c[0] * c[0] + c[1] * c[1]) / 2.0;
        assert!((l.plane(0)[j] + f.plane(0)[src] * ph.cos()).abs() < 1e-12);
        let m = LCTParams::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert!(matches!(clct_forward(&f, &m), Err(Error::ResamplingUnsupported(_))));
    }

    #[test]
    fn delta_is_lct_convolution_identity() {
        let a = alg2();
        let s = GridSpec::default_for(2).unwrap();
        let f = GridSignal::sample(s, &a, |x| {
            Multivector::from_coeffs(&a, vec![(-x[0] * x[0]).exp(), 0.3, x[1].cos(), 0.1]).unwrap()
        })
        .unwrap();
        let mut d = GridSignal::zeros(s, Domain::Spatial, &a).unwrap();
        d.plane_mut(0)[s.ravel(&[32, 32])] = 1.0 / s.dx().powi(2);
        let m = LCTParams::from_abd(1.5, 0.7, 0.5).unwrap();
        assert!(lct_convolve(&f, &d, &m).unwrap().rel_max_diff(&f) < 1e-13);
        let plain = convolve(&f, &f.scale(0.5)).unwrap();
        let lct = lct_convolve(&f, &f.scale(0.5), &LCTParams::fourier()).unwrap();
        assert!(lct.max_abs_diff(&plain) < 1e-15);
    }
}
