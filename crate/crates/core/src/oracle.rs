//! Direct O(N^{2n}) quadratures used as references for the FFT paths.

use rayon::prelude::*;

use crate::algebra::pseudoscalar_exp;
use crate::clct::{clct_kernel, LCTParams};
use crate::error::Result;
use crate::grid::{Domain, GridSignal};

/// Evaluates `Δ^n Σ_j f(x_j)·kernel(y_k, x_j)` at every output point `y_k`.
fn direct_sum<K>(f: &GridSignal, out_domain: Domain, kernel: K) -> Result<GridSignal>
where
    K: Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Sync,
{
    let spec = *f.spec();
    let alg = f.algebra().clone();
    let bc = alg.blade_count();
    let m = spec.len();
    let w = f.cell_volume();
    let out_proto = GridSignal::zeros(spec, out_domain, &alg)?;
    let values: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let mut y = vec![0.0; spec.n];
            let mut x = vec![0.0; spec.n];
            out_proto.coords(k, &mut y);
            let mut acc = vec![0.0; bc];
            let mut fv = vec![0.0; bc];
            let mut prod = vec![0.0; bc];
            for j in 0..m {
                f.coords(j, &mut x);
                for (b, v) in fv.iter_mut().enumerate() {
                    *v = f.plane(b)[j];
                }
                if fv.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let kv = kernel(&y, &x)?;
                alg.mul_into(&fv, &kv, &mut prod);
                acc.iter_mut().zip(&prod).for_each(|(a, p)| *a += p);
            }
            Ok(acc.into_iter().map(|v| v * w).collect())
        })
        .collect::<Result<_>>()?;
    let mut out = out_proto;
    for (k, v) in values.iter().enumerate() {
        for (b, c) in v.iter().enumerate() {
            out.plane_mut(b)[k] = *c;
        }
    }
    Ok(out)
}

/// CFT straight from the definition: `(2π)^{−n/2} Δx^n Σ f(x) e^{−I w·x}`.
pub fn cft_direct(f: &GridSignal) -> Result<GridSignal> {
    let alg = f.algebra().clone();
    let c = (2.0 * std::f64::consts::PI).powf(-(f.spec().n as f64) / 2.0);
    direct_sum(f, Domain::Frequency, |w, x| {
        let ph: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
        Ok(pseudoscalar_exp(&alg, -ph)?.scale(c).into_coeffs())
    })
}

/// CLCT by direct quadrature of the kernel, on the lattice u_k = B·w_k.
pub fn clct_direct(f: &GridSignal, m: &LCTParams) -> Result<GridSignal> {
    let alg = f.algebra().clone();
    direct_sum(f, Domain::Canonical { b: m.b }, |u, x| {
        Ok(clct_kernel(&alg, m, u, x)?.into_coeffs())
    })
}
