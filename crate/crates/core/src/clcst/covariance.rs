//! Covariance properties checked on shared lattices: linearity, window
//! anti-linearity, translation, dilation and parity.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{clcst_direct, clcst_three_step, dot, BSelection, CLCSTVolume, Sampling, ThetaList, UList};
use crate::algebra::{pseudoscalar_exp, Algebra, Multivector};
use crate::clct::LCTParams;
use crate::error::{Error, Result};
use crate::grid::{relative, GridSignal, GridSpec};
use crate::windows::{CliffordWindow, WindowSpec};

/// Analytic multivector-valued signal.
pub type SignalFn<'a> = &'a (dyn Fn(&[f64]) -> Multivector + Sync);

#[derive(Clone, Debug)]
pub struct CovarianceParams {
    pub alpha: Multivector,
    pub beta: Multivector,
    /// Second window for the anti-linearity check.
    pub second_window: WindowSpec,
    /// Window weights; they must commute with the pseudoscalar.
    pub window_alpha: Multivector,
    pub window_beta: Multivector,
    /// Translation in lattice steps per axis.
    pub shift: Vec<i64>,
    /// Integer dilation factor.
    pub lambda: u32,
    pub u: UList,
    pub theta: ThetaList,
}

impl CovarianceParams {
    /// k = (Δx, 0, …), λ = 2, a handful of (u, θ) and even-grade weights.
    pub fn default_for(alg: &Arc<Algebra>, spec: &GridSpec) -> Result<Self> {
        let n = alg.n();
        let mut alpha = vec![0.0; alg.blade_count()];
        let mut beta = vec![0.0; alg.blade_count()];
        alpha[0] = 0.7;
        alpha[alg.blade_count() - 1] = -0.4;
        beta[0] = -1.3;
        beta[1] = 0.25;
        beta[3] = 0.5;
        let mut wa = vec![0.0; alg.blade_count()];
        wa[0] = 1.1;
        wa[3] = 0.6;
        let mut shift = vec![0; n];
        shift[0] = 1;
        let dw = spec.dw();
        let u = UList::new(
            vec![
                (0..n).map(|i| dw * (1.0 + i as f64)).collect(),
                (0..n).map(|i| -dw * (3.0 - i as f64)).collect(),
                (0..n).map(|i| if i % 2 == 0 { 2.0 * dw } else { -dw }).collect(),
            ],
            dw.powi(n as i32),
        )?;
        Ok(CovarianceParams {
            alpha: Multivector::from_coeffs(alg, alpha)?,
            beta: Multivector::from_coeffs(alg, beta)?,
            second_window: WindowSpec::gaussian(n, 0.6)?,
            window_alpha: Multivector::from_coeffs(alg, wa)?,
            window_beta: Multivector::scalar(alg, -0.8),
            shift,
            lambda: 2,
            u,
            theta: ThetaList::new(vec![0.0, 0.9])?,
        })
    }
}

/// Maximum relative deviation between both sides of each identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub linearity: f64,
    pub anti_linearity: f64,
    pub translation: f64,
    pub dilation: f64,
    pub parity: f64,
}

impl CovarianceReport {
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("linearity", self.linearity),
            ("anti-linearity", self.anti_linearity),
            ("translation", self.translation),
            ("dilation", self.dilation),
            ("parity", self.parity),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, (_, v)| m.max(*v))
    }
}

fn deviation(lhs: &[Multivector], rhs: &[Multivector]) -> f64 {
    let diff = lhs
        .iter()
        .zip(rhs)
        .fold(0.0f64, |m, (a, b)| m.max(a.max_abs_diff(b)));
    let scale = rhs
        .iter()
        .flat_map(|v| v.coeffs().iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    relative(diff, scale)
}

fn values(vol: &CLCSTVolume) -> Vec<Multivector> {
    let mut out = Vec::with_capacity(vol.nb() * vol.nu() * vol.ntheta());
    for ui in 0..vol.nu() {
        for ti in 0..vol.ntheta() {
            for bi in 0..vol.nb() {
                out.push(vol.value(bi, ui, ti));
            }
        }
    }
    out
}

/// Interior lattice points at least `margin` samples from every edge, thinned.
fn interior_b(spec: &GridSpec, margin: usize, step: usize) -> Vec<usize> {
    let mut idx = vec![0; spec.n];
    (0..spec.len())
        .filter(|&j| {
            spec.unravel(j, &mut idx);
            idx.iter()
                .all(|&k| k >= margin && k + margin < spec.samples && k % step == 0)
        })
        .collect()
}

pub fn covariance_suite(
    f: SignalFn<'_>,
    g: SignalFn<'_>,
    alg: &Arc<Algebra>,
    spec: GridSpec,
    psi: &WindowSpec,
    m: &LCTParams,
    p: &CovarianceParams,
) -> Result<CovarianceReport> {
    let n = spec.n;
    if p.shift.len() != n || p.lambda == 0 {
        return Err(Error::NonLattice("shift or dilation does not map the lattice".into()));
    }
    let rate = m.chirp_rate()?;
    let step = (spec.samples / 16).max(1);
    let margin = p.shift.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0) + 1;
    let bidx = interior_b(&spec, margin, step);
    let sampling = Sampling {
        b: BSelection::Indices(bidx.clone()),
        u: p.u.clone(),
        theta: p.theta.clone(),
    };
    let fs = GridSignal::sample(spec, alg, f)?;
    let gs = GridSignal::sample(spec, alg, g)?;
    let sf = clcst_three_step(&fs, psi, m, &sampling)?;

    // (1) left-linear in the signal
    let h = GridSignal::sample(spec, alg, |x| &(&p.alpha * &f(x)) + &(&p.beta * &g(x)))?;
    let sg = clcst_three_step(&gs, psi, m, &sampling)?;
    let lhs = values(&clcst_three_step(&h, psi, m, &sampling)?);
    let rhs: Vec<Multivector> = values(&sf)
        .iter()
        .zip(values(&sg))
        .map(|(a, b)| &(&p.alpha * a) + &(&p.beta * &b))
        .collect();
    let linearity = deviation(&lhs, &rhs);

    // (2) combined window, conjugated weights on the right
    let combo = CliffordWindow::new(vec![
        (p.window_alpha.clone(), *psi),
        (p.window_beta.clone(), p.second_window),
    ])?;
    let few = Sampling {
        b: BSelection::Indices(bidx.iter().step_by(7).copied().collect()),
        ..sampling.clone()
    };
    let lhs = values(&clcst_direct(&fs, &combo, m, &few)?);
    let s1 = values(&clcst_direct(&fs, psi, m, &few)?);
    let s2 = values(&clcst_direct(&fs, &p.second_window, m, &few)?);
    let (ca, cb) = (p.window_alpha.conjugate(), p.window_beta.conjugate());
    let rhs: Vec<Multivector> = s1
        .iter()
        .zip(&s2)
        .map(|(a, b)| &(a * &ca) + &(b * &cb))
        .collect();
    let anti_linearity = deviation(&lhs, &rhs);

    // (3) f(x − k) against f·e^{I(A/B)k·x} at b − k
    let k: Vec<f64> = p.shift.iter().map(|&s| s as f64 * spec.dx()).collect();
    let shifted = GridSignal::sample(spec, alg, |x| {
        let y: Vec<f64> = x.iter().zip(&k).map(|(a, b)| a - b).collect();
        f(&y)
    })?;
    let mut xs = vec![0.0; n];
    let phases: Vec<f64> = (0..spec.len())
        .map(|j| {
            fs.coords(j, &mut xs);
            2.0 * rate * dot(&k, &xs)
        })
        .collect();
    let modulated = fs.right_phase(|j| phases[j]);
    let offset = p.shift.iter().fold(0i64, |acc, &s| acc * spec.samples as i64 + s);
    let moved: Vec<usize> = bidx.iter().map(|&j| (j as i64 - offset) as usize).collect();
    let lhs = values(&clcst_three_step(&shifted, psi, m, &sampling)?);
    let base = clcst_three_step(
        &modulated,
        psi,
        m,
        &Sampling {
            b: BSelection::Indices(moved),
            ..sampling.clone()
        },
    )?;
    let coords = BSelection::Indices(bidx.clone()).coords(&spec);
    let kk = dot(&k, &k);
    let mut rhs = Vec::new();
    for (ui, u) in p.u.points.iter().enumerate() {
        for ti in 0..p.theta.len() {
            for (bi, b) in coords.iter().enumerate() {
                let ph = -dot(u, &k) + 2.0 * rate * (kk - dot(&k, b));
                rhs.push(&base.value(bi, ui, ti) * &pseudoscalar_exp(alg, ph)?);
            }
        }
    }
    let translation = deviation(&lhs, &rhs);

    // (4) f(λx) on (L, N) against f on (λL, N) with M′ = (A, λ²B), u/λ, λb
    let lam = p.lambda as f64;
    let wide = GridSpec::new(n, spec.half_width * lam, spec.samples)?;
    let squeezed = GridSignal::sample(spec, alg, |x| {
        let y: Vec<f64> = x.iter().map(|v| v * lam).collect();
        f(&y)
    })?;
    let fw = GridSignal::sample(wide, alg, f)?;
    let mp = LCTParams::new(m.a, lam * lam * m.b, (m.a * m.d - 1.0) / (lam * lam * m.b), m.d)?;
    let scaled_u = UList::new(
        p.u.points
            .iter()
            .map(|u| u.iter().map(|v| v / lam).collect())
            .collect(),
        p.u.weight,
    )?;
    let lhs = values(&clcst_three_step(&squeezed, psi, m, &sampling)?);
    let rhs = values(&clcst_three_step(
        &fw,
        psi,
        &mp,
        &Sampling {
            u: scaled_u,
            ..sampling.clone()
        },
    )?);
    let dilation = deviation(&lhs, &rhs);

    // (5) f(−x) against f at (−b, −u)
    let flipped = GridSignal::sample(spec, alg, |x| {
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        f(&y)
    })?;
    let mut idx = vec![0; n];
    let mirrored: Vec<usize> = bidx
        .iter()
        .map(|&j| {
            spec.unravel(j, &mut idx);
            idx.iter_mut().for_each(|k| *k = spec.samples - *k);
            spec.ravel(&idx)
        })
        .collect();
    let neg_u = UList::new(
        p.u.points
            .iter()
            .map(|u| u.iter().map(|v| -v).collect())
            .collect(),
        p.u.weight,
    )?;
    let lhs = values(&clcst_three_step(&flipped, psi, m, &sampling)?);
    let rhs = values(&clcst_three_step(
        &fs,
        psi,
        m,
        &Sampling {
            b: BSelection::Indices(mirrored),
            u: neg_u,
            theta: p.theta.clone(),
        },
    )?);
    let parity = deviation(&lhs, &rhs);

    Ok(CovarianceReport {
        linearity,
        anti_linearity,
        translation,
        dilation,
        parity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signals(alg: &Arc<Algebra>) -> (impl Fn(&[f64]) -> Multivector + Sync + '_, impl Fn(&[f64]) -> Multivector + Sync + '_) {
        let f = move |x: &[f64]| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let e = (-r2 + 0.3 * x[0]).exp();
            let mut c = vec![0.0; alg.blade_count()];
            c[0] = e;
            c[1] = 0.5 * e * x[1];
            c[alg.blade_count() - 1] = -0.2 * e;
            Multivector::from_coeffs(alg, c).unwrap()
        };
        let g = move |x: &[f64]| {
            let r2: f64 = x.iter().map(|v| (v - 0.4) * (v - 0.4)).sum();
            Multivector::blade(alg, 2, (-1.5 * r2).exp())
        };
        (f, g)
    }

    #[test]
    fn all_identities_hold_in_two_dimensions() {
        let a = Algebra::for_transforms(2).unwrap();
        let s = GridSpec::new(2, 6.0, 32).unwrap();
        let (f, g) = signals(&a);
        let w = WindowSpec::gaussian(2, 1.0).unwrap();
        let m = LCTParams::from_abd(1.0, 2.0, 0.5).unwrap();
        let p = CovarianceParams::default_for(&a, &s).unwrap();
        let r = covariance_suite(&f, &g, &a, s, &w, &m, &p).unwrap();
        assert!(r.max() < 1e-10, "{r:?}");
    }

    #[test]
    fn odd_window_weight_breaks_anti_linearity_in_two_dimensions() {
        let a = Algebra::for_transforms(2).unwrap();
        let s = GridSpec::new(2, 6.0, 32).unwrap();
        let (f, g) = signals(&a);
        let w = WindowSpec::gaussian(2, 1.0).unwrap();
        let m = LCTParams::from_abd(1.0, 2.0, 0.5).unwrap();
        let mut p = CovarianceParams::default_for(&a, &s).unwrap();
        p.window_alpha = Multivector::basis_vector(&a, 1);
        let r = covariance_suite(&f, &g, &a, s, &w, &m, &p).unwrap();
        assert!(r.anti_linearity > 1e-3);
        assert!(r.translation < 1e-10);
    }

    #[test]
    fn rejects_bad_shift() {
        let a = Algebra::for_transforms(2).unwrap();
        let s = GridSpec::new(2, 6.0, 32).unwrap();
        let (f, g) = signals(&a);
        let w = WindowSpec::gaussian(2, 1.0).unwrap();
        let mut p = CovarianceParams::default_for(&a, &s).unwrap();
        p.shift = vec![1];
        assert!(matches!(
            covariance_suite(&f, &g, &a, s, &w, &LCTParams::fourier(), &p),
            Err(Error::NonLattice(_))
        ));
    }
}
