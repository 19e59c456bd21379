//! Admissibility, orthogonality, reconstruction and the reproducing kernel.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dot, offset_window, separable_window, BSelection, CLCSTVolume, Path, Sampling, ThetaList, UList};
use crate::algebra::{Algebra, Multivector};
use crate::cft::{cft_forward, cft_inverse, lattice_forward};
use crate::clct::LCTParams;
use crate::error::{Error, Result};
use crate::fft::{embed, extract, NdFft};
use crate::grid::{inner_product, Domain, GridSignal, GridSpec};
use crate::stockwell::{ScalingMatrix, WindowMap};
use crate::windows::WindowSpec;

/// Summary statistics of a profile restricted to a frequency band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// (max − min)/mean
    pub rel_variation: f64,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityProfile {
    /// Scalar signal on the frequency lattice.
    pub profile: GridSignal,
    /// Over the whole lattice.
    pub full: ProfileStats,
    /// Over |w_i| ≤ (N/8)Δw; `band.mean` is the constant used for reconstruction.
    pub band: ProfileStats,
}

impl AdmissibilityProfile {
    pub fn constant(&self) -> f64 {
        self.band.mean
    }
}

fn stats(values: impl Iterator<Item = f64>) -> ProfileStats {
    let (mut min, mut max, mut sum, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        count += 1;
    }
    let mean = sum / count.max(1) as f64;
    ProfileStats {
        min,
        max,
        mean,
        rel_variation: if mean == 0.0 { 0.0 } else { (max - min) / mean },
    }
}

/// Raw Fourier integral of e^{I u·y} ψ(R_−θ A_u y) on the centered frequency lattice.
/// θ is accepted for symmetry with the transforms; radial windows ignore it.
pub fn window_spectrum(
    psi: &WindowSpec,
    spec: &GridSpec,
    u: &[f64],
    _theta: f64,
) -> Result<Vec<Complex64>> {
    ScalingMatrix::new(u)?;
    let axis: Vec<f64> = (0..spec.samples).map(|k| spec.x(k)).collect();
    let mut k = vec![separable_window(psi, &axis, spec.n, u, true)];
    lattice_forward(&mut k, spec.n, spec.samples);
    let dxn = spec.dx().powi(spec.n as i32);
    Ok(k.pop().unwrap().into_iter().map(|v| v * dxn).collect())
}

/// C_ψ(w) = (2π)^{−n} Σ_{u,θ} Δu Δθ |det A_u|² |F[e^{I u·y} ψ(R_−θ A_u y)](w)|².
pub fn admissibility_profile(
    psi: &WindowSpec,
    spec: GridSpec,
    alg: &Arc<Algebra>,
    u: &UList,
    theta: &ThetaList,
) -> Result<AdmissibilityProfile> {
    if u.is_empty() || theta.is_empty() {
        return Err(Error::EmptyQuadrature);
    }
    let slices: Vec<(usize, usize)> = (0..u.len())
        .flat_map(|ui| (0..theta.len()).map(move |ti| (ui, ti)))
        .collect();
    let weight = u.weight * theta.weight / (2.0 * PI).powi(spec.n as i32);
    let acc = slices
        .par_iter()
        .map(|&(ui, ti)| -> Result<Vec<f64>> {
            let up = &u.points[ui];
            let det: f64 = up.iter().map(|v| v.abs()).product();
            let k = window_spectrum(psi, &spec, up, theta.angles[ti])?;
            Ok(k.iter().map(|v| v.norm_sqr() * det * det * weight).collect())
        })
        .try_reduce(
            || vec![0.0; spec.len()],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let band_edge = (spec.samples / 8) as f64 * spec.dw() + 1e-12;
    let mut idx = vec![0; spec.n];
    let in_band: Vec<f64> = acc
        .iter()
        .enumerate()
        .filter(|&(j, _)| {
            spec.unravel(j, &mut idx);
            idx.iter().all(|&k| spec.w(k).abs() <= band_edge)
        })
        .map(|(_, &v)| v)
        .collect();
    let full = stats(acc.iter().copied());
    let band = stats(in_band.into_iter());
    let mut planes = vec![0.0; alg.blade_count() * spec.len()];
    planes[..spec.len()].copy_from_slice(&acc);
    Ok(AdmissibilityProfile {
        profile: GridSignal::from_planes(spec, Domain::Frequency, alg, planes)?,
        full,
        band,
    })
}

/// Both sides of the per-(u, θ) orthogonality relation.
#[derive(Clone, Debug)]
pub struct Orthogonality {
    /// Δb^n Σ_b S_f(b)·conj(S_g(b))
    pub lhs: Multivector,
    /// (2π)^{−n}|det A_u|² Δw^n Σ_w F[f·chirp]·|K|²·conj(F[g·chirp])
    pub rhs: Multivector,
}

impl Orthogonality {
    pub fn scalar_deviation(&self) -> f64 {
        let scale = self.lhs.scalar_part().abs().max(self.rhs.scalar_part().abs());
        crate::grid::relative((self.lhs.scalar_part() - self.rhs.scalar_part()).abs(), scale)
    }
}

pub fn orthogonality_check(
    f: &GridSignal,
    g: &GridSignal,
    psi: &WindowSpec,
    m: &LCTParams,
    u: &[f64],
    theta: f64,
) -> Result<Orthogonality> {
    f.check_compatible(g)?;
    let spec = *f.spec();
    let alg = f.algebra().clone();
    let sampling = Sampling {
        b: BSelection::Lattice,
        u: UList::single(u)?,
        theta: ThetaList::single(theta),
    };
    let sf = super::clcst_three_step(f, psi, m, &sampling)?;
    let sg = super::clcst_three_step(g, psi, m, &sampling)?;
    let db = spec.dx().powi(spec.n as i32);
    let mut lhs = Multivector::zero(&alg);
    for bi in 0..sf.nb() {
        let p = sf.value(bi, 0, 0).geometric_product(&sg.value(bi, 0, 0).conjugate())?;
        lhs += &p;
    }
    let lhs = lhs.scale(db);

    // the spectral side lives on the doubled lattice so the correlation is linear
    let padded = spec.padded();
    let lift = |s: &GridSignal| -> Result<GridSignal> {
        let z: Vec<Vec<Complex64>> = s
            .chirp_multiply(m.chirp_rate()?, 1.0)?
            .to_complex()
            .iter()
            .map(|p| embed(p, spec.n, spec.samples, padded.samples, spec.samples / 2))
            .collect();
        cft_forward(&GridSignal::from_complex(padded, Domain::Spatial, &alg, &z))
    };
    let (ff, fg) = (lift(f)?, lift(g)?);
    let k = window_spectrum(psi, &padded, u, theta)?;
    let det: f64 = u.iter().map(|v| v.abs()).product();
    let w2: Vec<f64> = k.iter().map(|v| v.norm_sqr()).collect();
    let weighted = GridSignal::from_complex(
        padded,
        Domain::Frequency,
        &alg,
        &ff.to_complex()
            .iter()
            .map(|p| p.iter().zip(&w2).map(|(a, b)| a * b).collect())
            .collect::<Vec<_>>(),
    );
    // inner_product carries the Δw^n weight
    let rhs = inner_product(&weighted, &fg)?.scale(det * det / (2.0 * PI).powi(spec.n as i32));
    Ok(Orthogonality { lhs, rhs })
}

fn require_window(vol: &CLCSTVolume) -> Result<WindowSpec> {
    vol.meta()
        .window
        .ok_or(Error::AnalyticWindowRequired)
}

fn require_full_b(vol: &CLCSTVolume) -> Result<()> {
    if vol.meta().sampling.b != BSelection::Lattice {
        return Err(Error::MissingCoverage(
            "reconstruction needs the volume on the full b lattice".into(),
        ));
    }
    Ok(())
}

/// Resolution-of-identity synthesis
/// f̂(x) = (2π)^{−n/2} Σ_{b,u,θ} Δb^n Δu Δθ S(b,u,θ)·ψ^θ_{M,b,u}(x)·C^{−1},
/// accumulated one volume (u chunk) at a time.
pub struct ResolutionSynthesis {
    spec: GridSpec,
    alg: Arc<Algebra>,
    lct: LCTParams,
    window: WindowSpec,
    c_psi: f64,
    acc: Vec<Vec<Complex64>>,
}

impl ResolutionSynthesis {
    pub fn new(
        spec: GridSpec,
        alg: &Arc<Algebra>,
        lct: LCTParams,
        window: WindowSpec,
        c_psi: f64,
    ) -> Result<Self> {
        if !(c_psi > 0.0) {
            return Err(Error::NonPositiveAdmissibility(c_psi));
        }
        alg.require_complex_pseudoscalar()?;
        Ok(ResolutionSynthesis {
            spec,
            alg: alg.clone(),
            lct,
            window,
            c_psi,
            acc: vec![vec![Complex64::default(); spec.len()]; alg.pseudo_pairs().len()],
        })
    }

    pub fn add(&mut self, vol: &CLCSTVolume) -> Result<()> {
        require_full_b(vol)?;
        let meta = vol.meta();
        meta.grid.check_same(&self.spec)?;
        if meta.lct != self.lct || require_window(vol)? != self.window {
            return Err(Error::InvalidParams("volume does not match the synthesis setup".into()));
        }
        let spec = self.spec;
        let n = spec.n;
        let len = spec.samples;
        let plen = 2 * len;
        let rate = self.lct.chirp_rate()?;
        let fft = NdFft::new(n, plen);
        let coords = BSelection::Lattice.coords(&spec);
        let (db, du, dt) = meta.weights();
        let norm = db * du * dt / (plen.pow(n as u32) as f64);
        let slices: Vec<(usize, usize)> = (0..vol.nu())
            .flat_map(|ui| (0..vol.ntheta()).map(move |ti| (ui, ti)))
            .collect();
        let window = self.window;
        let part = slices
            .par_iter()
            .map(|&(ui, ti)| -> Result<Vec<Vec<Complex64>>> {
                let u = &meta.sampling.u.points[ui];
                let det: f64 = u.iter().map(|v| v.abs()).product();
                let mut k = offset_window(&window, &spec, u, true)?;
                fft.forward(&mut k);
                Ok(vol
                    .slice_complex(ui, ti)
                    .iter()
                    .map(|z| {
                        // S(b)·e^{I(u·b + A|b|²/2B)}, then Σ_b s(b)·k(x − b)
                        let s: Vec<Complex64> = z
                            .iter()
                            .zip(&coords)
                            .map(|(v, b)| v * Complex64::from_polar(1.0, dot(u, b) + rate * dot(b, b)))
                            .collect();
                        let mut a = embed(&s, n, len, plen, 0);
                        fft.forward(&mut a);
                        a.iter_mut().zip(&k).for_each(|(x, kk)| *x *= kk);
                        fft.inverse(&mut a);
                        extract(&a, n, plen, len, 0)
                            .into_iter()
                            .map(|v| v * (norm * det))
                            .collect()
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        for planes in part {
            for (acc, p) in self.acc.iter_mut().zip(planes) {
                acc.iter_mut().zip(p).for_each(|(a, v)| *a += v);
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<GridSignal> {
        let s = (2.0 * PI).powf(-(self.spec.n as f64) / 2.0) / self.c_psi;
        let planes: Vec<Vec<Complex64>> = self
            .acc
            .into_iter()
            .map(|p| p.into_iter().map(|v| v * s).collect())
            .collect();
        GridSignal::from_complex(self.spec, Domain::Spatial, &self.alg, &planes)
            .chirp_multiply(self.lct.chirp_rate()?, -1.0)
    }
}

pub fn reconstruct_resolution(vol: &CLCSTVolume, c_psi: f64) -> Result<GridSignal> {
    let meta = vol.meta();
    let mut s = ResolutionSynthesis::new(
        meta.grid,
        vol.algebra(),
        meta.lct,
        require_window(vol)?,
        c_psi,
    )?;
    s.add(vol)?;
    s.finish()
}

/// |det A_u| Δx^n Σ_k ψ(R_−θ A_u kΔx) over lattice offsets; → 1 for unit-integral ψ.
pub fn discrete_window_mass(psi: &WindowSpec, spec: &GridSpec, u: &[f64], theta: f64) -> Result<f64> {
    let map = WindowMap::new(&vec![0.0; spec.n], u, theta)?;
    let half = (spec.samples / 2) as f64;
    let mut idx = vec![0; spec.n];
    let mut d = vec![0.0; spec.n];
    let mut y = vec![0.0; spec.n];
    let sum: f64 = (0..spec.len())
        .map(|j| {
            spec.unravel(j, &mut idx);
            d.iter_mut()
                .zip(&idx)
                .for_each(|(di, &k)| *di = (k as f64 - half) * spec.dx());
            map.apply(&d, &mut y);
            psi.eval(&y)
        })
        .sum();
    Ok(map.scale.det_abs() * spec.dx().powi(spec.n as i32) * sum)
}

/// e^{I A|b|²/2B}-weighted b-sum of one (u, θ) slice divided by the discrete
/// window mass: the CFT of f·e^{I A|x|²/2B} at u.
pub fn marginal_bsum(vol: &CLCSTVolume, ui: usize, ti: usize) -> Result<Multivector> {
    require_full_b(vol)?;
    let meta = vol.meta();
    let spec = meta.grid;
    let rate = meta.lct.chirp_rate()?;
    let psi = require_window(vol)?;
    let u = &meta.sampling.u.points[ui];
    let mass = discrete_window_mass(&psi, &spec, u, meta.sampling.theta.angles[ti])?;
    let coords = BSelection::Lattice.coords(&spec);
    let db = spec.dx().powi(spec.n as i32);
    let sums: Vec<Vec<Complex64>> = vol
        .slice_complex(ui, ti)
        .iter()
        .map(|z| {
            vec![z
                .iter()
                .zip(&coords)
                .map(|(v, b)| v * Complex64::from_polar(1.0, rate * dot(b, b)))
                .sum::<Complex64>()
                * (db / mass)]
        })
        .collect();
    let alg = vol.algebra();
    let mut c = vec![0.0; alg.blade_count()];
    for (p, s) in alg.pseudo_pairs().iter().zip(&sums) {
        c[p.lo] = s[0].re;
        c[p.hi] = p.sign * s[0].im;
    }
    Multivector::from_coeffs(alg, c)
}

#[derive(Clone, Debug)]
pub struct MarginalResult {
    pub signal: GridSignal,
    /// Number of frequency bins with a zero component, filled from the support constraint.
    pub filled_bins: usize,
    /// Share of the reconstructed spectrum's energy carried by the filled bins.
    pub filled_energy_fraction: f64,
}

/// Marginal reconstruction f = e^{−I A|x|²/2B} F^{-1}[G] where G(u) is the
/// b-sum of the volume. The u lists of the added volumes must jointly cover
/// every frequency-lattice bin with nonzero components.
pub struct MarginalSynthesis {
    spec: GridSpec,
    alg: Arc<Algebra>,
    lct: LCTParams,
    theta: f64,
    strict: bool,
    spectrum: Vec<Vec<Complex64>>,
    have: Vec<bool>,
}

impl MarginalSynthesis {
    pub fn new(spec: GridSpec, alg: &Arc<Algebra>, lct: LCTParams, theta: f64, strict: bool) -> Result<Self> {
        alg.require_complex_pseudoscalar()?;
        lct.chirp_rate()?;
        Ok(MarginalSynthesis {
            spec,
            alg: alg.clone(),
            lct,
            theta,
            strict,
            spectrum: vec![vec![Complex64::default(); spec.len()]; alg.pseudo_pairs().len()],
            have: vec![false; spec.len()],
        })
    }

    fn frequency_index(&self, u: &[f64]) -> Option<usize> {
        let dw = self.spec.dw();
        let half = (self.spec.samples / 2) as f64;
        let mut flat = 0;
        for &v in u {
            let t = v / dw + half;
            let r = t.round();
            if (t - r).abs() > 1e-9 || r < 0.0 || r >= self.spec.samples as f64 {
                return None;
            }
            flat = flat * self.spec.samples + r as usize;
        }
        Some(flat)
    }

    pub fn add(&mut self, vol: &CLCSTVolume) -> Result<()> {
        let meta = vol.meta();
        meta.grid.check_same(&self.spec)?;
        if meta.lct != self.lct {
            return Err(Error::InvalidParams("volume LCT parameters differ".into()));
        }
        let psi = require_window(vol)?;
        if self.strict && !psi.is_unit_integral() {
            return Err(Error::NotNormalized(psi.integral()));
        }
        let ti = meta
            .sampling
            .theta
            .angles
            .iter()
            .position(|&t| (t - self.theta).abs() < 1e-12)
            .ok_or_else(|| Error::MissingCoverage(format!("θ = {} not in volume", self.theta)))?;
        let pairs = self.alg.pseudo_pairs().to_vec();
        for ui in 0..vol.nu() {
            let u = &meta.sampling.u.points[ui];
            let k = self
                .frequency_index(u)
                .ok_or_else(|| Error::NonLattice(format!("u = {u:?} is not a frequency-lattice point")))?;
            let g = marginal_bsum(vol, ui, ti)?;
            for (z, p) in self.spectrum.iter_mut().zip(&pairs) {
                z[k] = Complex64::new(g.coeffs()[p.lo], p.sign * g.coeffs()[p.hi]);
            }
            self.have[k] = true;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<MarginalResult> {
        let spec = self.spec;
        let half = spec.samples / 2;
        let mut idx = vec![0; spec.n];
        for j in 0..spec.len() {
            spec.unravel(j, &mut idx);
            if !self.have[j] && idx.iter().all(|&k| k != half) {
                return Err(Error::MissingCoverage(format!("frequency bin {idx:?}")));
            }
        }
        let filled: Vec<usize> = (0..spec.len()).filter(|&j| !self.have[j]).collect();
        for z in self.spectrum.iter_mut() {
            fill_zero_bins(z, &spec);
        }
        let total: f64 = self.spectrum.iter().flatten().map(|v| v.norm_sqr()).sum();
        let fill: f64 = self
            .spectrum
            .iter()
            .flat_map(|z| filled.iter().map(move |&j| z[j].norm_sqr()))
            .sum();
        let g = GridSignal::from_complex(spec, Domain::Frequency, &self.alg, &self.spectrum);
        let signal = cft_inverse(&g)?.chirp_multiply(self.lct.chirp_rate()?, -1.0)?;
        Ok(MarginalResult {
            signal,
            filled_bins: filled.len(),
            filled_energy_fraction: crate::grid::relative(fill, total),
        })
    }
}

/// Fills bins with a zero frequency component axis by axis. Along each 1-D
/// line the missing w = 0 value only adds a constant to the partial inverse
/// transform, so it is chosen to cancel the mean over |x_i| ≥ 3L/4, where the
/// signal is assumed to have decayed.
fn fill_zero_bins(z: &mut [Complex64], spec: &GridSpec) {
    let n = spec.n;
    let len = spec.samples;
    let half = len / 2;
    let outer: Vec<usize> = (0..len)
        .filter(|&j| spec.x(j).abs() >= 0.75 * spec.half_width)
        .collect();
    // e^{i w_k x_j} for the outer rows only
    let phase: Vec<Vec<Complex64>> = outer
        .iter()
        .map(|&j| {
            (0..len)
                .map(|k| Complex64::from_polar(1.0, spec.w(k) * spec.x(j)))
                .collect()
        })
        .collect();
    let stride = |axis: usize| len.pow((n - 1 - axis) as u32);
    let mut idx = vec![0; n];
    for axis in 0..n {
        let st = stride(axis);
        for j in 0..spec.len() {
            spec.unravel(j, &mut idx);
            // one representative per line: the w_axis = 0 entry
            if idx[axis] != half || idx[axis + 1..].iter().any(|&k| k == half) {
                continue;
            }
            let base = j - half * st;
            let mut mean = Complex64::default();
            for row in &phase {
                let mut v = Complex64::default();
                for (k, e) in row.iter().enumerate() {
                    if k != half {
                        v += z[base + k * st] * e;
                    }
                }
                mean += v;
            }
            z[j] = -mean / outer.len() as f64;
        }
    }
}

/// K = ⟨ψ_{p1}·C^{−1}, ψ_{p2}⟩ for analysis points p = (b, u, θ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisPoint {
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: f64,
}

#[derive(Clone, Debug)]
pub struct KernelValue {
    pub value: Multivector,
    /// |(|det A_u|^{1−n}|det A_u'|^{1−n}/C)|^{1/2}·‖ψ‖_{L¹}
    pub bound: f64,
}

impl KernelValue {
    pub fn within_bound(&self) -> bool {
        self.value.norm() <= self.bound
    }
}

pub fn reproducing_kernel(
    psi: &WindowSpec,
    m: &LCTParams,
    spec: GridSpec,
    alg: &Arc<Algebra>,
    c_psi: f64,
    p1: &AnalysisPoint,
    p2: &AnalysisPoint,
) -> Result<KernelValue> {
    if !(c_psi > 0.0) {
        return Err(Error::NonPositiveAdmissibility(c_psi));
    }
    let k1 = super::clcst_kernel(psi, m, spec, alg, &p1.b, &p1.u, p1.theta)?;
    let k2 = super::clcst_kernel(psi, m, spec, alg, &p2.b, &p2.u, p2.theta)?;
    let value = inner_product(&k1.scale(1.0 / c_psi), &k2)?;
    let e = 1.0 - spec.n as f64;
    let det = |u: &[f64]| u.iter().map(|v| v.abs()).product::<f64>();
    let bound = ((det(&p1.u).powf(e) * det(&p2.u).powf(e)) / c_psi).abs().sqrt() * psi.l1_norm(&spec);
    Ok(KernelValue { value, bound })
}

/// Resynthesizes a volume and analyses the result again with the same sampling.
pub fn reanalyse(vol: &CLCSTVolume, c_psi: f64) -> Result<CLCSTVolume> {
    let f = reconstruct_resolution(vol, c_psi)?;
    let meta = vol.meta();
    let psi = require_window(vol)?;
    super::clcst(&f, &psi, &meta.lct, &meta.sampling, Path::ThreeStep, false)
}
