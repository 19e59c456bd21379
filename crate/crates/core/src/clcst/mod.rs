//! Clifford linear canonical Stockwell transform.
//!
//! `S(b,u,θ) = |det A_u| (2π)^{−n/2} Δx^n Σ_x f(x)·conj(ψ(R_−θ A_u (x−b)))·e^{−I(x·u + A|b|²/2B − A|x|²/2B)}`
//!
//! Three evaluation paths share this definition: a direct sum, the
//! chirp → Stockwell → chirp factorization, and the spectral (Fourier-domain)
//! product form. All phases multiply from the right.

pub mod covariance;
pub mod theory;

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Metric, Multivector};
use crate::cft::lattice_forward;
use crate::cft::lattice_inverse;
use crate::clct::LCTParams;
use crate::error::{Error, Result};
use crate::fft::{embed, extract, NdFft};
use crate::grid::{relative, Domain, GridSignal, GridSpec, DEFAULT_BOUNDARY_THRESHOLD};
use crate::stockwell::{ScalingMatrix, WindowMap};
use crate::windows::{Window, WindowSpec};

/// Scale vectors with a uniform quadrature weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UList {
    pub points: Vec<Vec<f64>>,
    pub weight: f64,
}

impl UList {
    pub fn new(points: Vec<Vec<f64>>, weight: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyQuadrature);
        }
        let n = points[0].len();
        for p in &points {
            if p.len() != n || p.iter().any(|&v| v == 0.0 || !v.is_finite()) {
                return Err(Error::ZeroScale(p.clone()));
            }
        }
        Ok(UList { points, weight })
    }

    /// Tensor grid over per-axis values, weight Π steps.
    pub fn tensor(axes: &[Vec<f64>], steps: &[f64]) -> Result<Self> {
        let mut points = vec![vec![]];
        for axis in axes {
            points = points
                .into_iter()
                .flat_map(|p: Vec<f64>| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        Self::new(points, steps.iter().product())
    }

    /// ±{1, …, count}·step on every axis.
    pub fn symmetric(n: usize, step: f64, count: usize) -> Result<Self> {
        let axis: Vec<f64> = (1..=count)
            .rev()
            .map(|k| -(k as f64) * step)
            .chain((1..=count).map(|k| k as f64 * step))
            .collect();
        Self::tensor(&vec![axis; n], &vec![step; n])
    }

    /// ±{Δw, …, (N/4)Δw} per axis.
    pub fn default_for(spec: &GridSpec) -> Result<Self> {
        Self::symmetric(spec.n, spec.dw(), (spec.samples / 4).max(1))
    }

    pub fn single(u: &[f64]) -> Result<Self> {
        Self::new(vec![u.to_vec()], 1.0)
    }

    /// Every frequency-lattice point w_k with no zero component, weight Δw^n.
    pub fn frequency_lattice(spec: &GridSpec) -> Result<Self> {
        let axis: Vec<f64> = (0..spec.samples)
            .filter(|&k| k != spec.samples / 2)
            .map(|k| spec.w(k))
            .collect();
        Self::tensor(&vec![axis; spec.n], &vec![spec.dw(); spec.n])
    }

    /// Splits into lists of at most `size` points sharing the weight.
    pub fn chunks(&self, size: usize) -> Vec<UList> {
        self.points
            .chunks(size.max(1))
            .map(|c| UList {
                points: c.to_vec(),
                weight: self.weight,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaList {
    pub angles: Vec<f64>,
    pub weight: f64,
}

impl ThetaList {
    /// Uniform spacing is the weight; a single angle has weight 1.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::EmptyQuadrature);
        }
        let weight = if angles.len() == 1 {
            1.0
        } else {
            ((angles[angles.len() - 1] - angles[0]) / (angles.len() - 1) as f64).abs()
        };
        Ok(ThetaList { angles, weight })
    }

    /// {0, π/4, π/2} with Δθ = π/(2(3 − 1)).
    pub fn default_list() -> Self {
        ThetaList {
            angles: vec![0.0, PI / 4.0, PI / 2.0],
            weight: PI / 4.0,
        }
    }

    pub fn single(theta: f64) -> Self {
        ThetaList {
            angles: vec![theta],
            weight: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Translation parameters b at which a volume is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BSelection {
    /// Every spatial lattice point.
    Lattice,
    /// A subset of lattice points by flat index.
    Indices(Vec<usize>),
    /// Arbitrary coordinates; only the direct path accepts off-lattice points.
    Points(Vec<Vec<f64>>),
}

impl BSelection {
    pub fn len(&self, spec: &GridSpec) -> usize {
        match self {
            BSelection::Lattice => spec.len(),
            BSelection::Indices(v) => v.len(),
            BSelection::Points(v) => v.len(),
        }
    }

    pub fn coords(&self, spec: &GridSpec) -> Vec<Vec<f64>> {
        let mut idx = vec![0; spec.n];
        let at = |j: usize, idx: &mut Vec<usize>| {
            spec.unravel(j, idx);
            idx.iter().map(|&k| spec.x(k)).collect()
        };
        match self {
            BSelection::Lattice => (0..spec.len()).map(|j| at(j, &mut idx)).collect(),
            BSelection::Indices(v) => v.iter().map(|&j| at(j, &mut idx)).collect(),
            BSelection::Points(v) => v.clone(),
        }
    }

    pub fn lattice_indices(&self, spec: &GridSpec) -> Result<Vec<usize>> {
        match self {
            BSelection::Lattice => Ok((0..spec.len()).collect()),
            BSelection::Indices(v) => {
                if let Some(&bad) = v.iter().find(|&&j| j >= spec.len()) {
                    return Err(Error::NonLattice(format!("b index {bad}")));
                }
                Ok(v.clone())
            }
            BSelection::Points(v) => v
                .iter()
                .map(|p| {
                    spec.lattice_index(p)
                        .ok_or_else(|| Error::NonLattice(format!("b = {p:?}")))
                })
                .collect(),
        }
    }
}

/// (b, u, θ) parameter sets of one analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub b: BSelection,
    pub u: UList,
    pub theta: ThetaList,
}

impl Sampling {
    pub fn default_for(spec: &GridSpec) -> Result<Self> {
        Ok(Sampling {
            b: BSelection::Lattice,
            u: UList::default_for(spec)?,
            theta: ThetaList::default_list(),
        })
    }

    pub fn slices(&self) -> usize {
        self.u.len() * self.theta.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Direct,
    ThreeStep,
    Spectral,
    Cst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeMeta {
    pub grid: GridSpec,
    pub metric: Metric,
    pub sampling: Sampling,
    pub lct: LCTParams,
    pub window: Option<WindowSpec>,
    pub path: Path,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl VolumeMeta {
    /// Δb^n, the u weight and Δθ.
    pub fn weights(&self) -> (f64, f64, f64) {
        (
            self.grid.dx().powi(self.grid.n as i32),
            self.sampling.u.weight,
            self.sampling.theta.weight,
        )
    }
}

/// Multivector values over (b, u, θ), blade-major then (u, θ, b) with b fastest.
#[derive(Clone, Debug)]
pub struct CLCSTVolume {
    meta: VolumeMeta,
    alg: Arc<Algebra>,
    nb: usize,
    values: Vec<f64>,
}

impl CLCSTVolume {
    pub fn from_parts(meta: VolumeMeta, alg: &Arc<Algebra>, values: Vec<f64>) -> Result<Self> {
        let nb = meta.sampling.b.len(&meta.grid);
        let expect = alg.blade_count() * nb * meta.sampling.slices();
        if values.len() != expect || alg.n() != meta.grid.n || alg.metric() != meta.metric {
            return Err(Error::Format(format!(
                "volume payload {} values for {} expected",
                values.len(),
                expect
            )));
        }
        Ok(CLCSTVolume {
            meta,
            alg: alg.clone(),
            nb,
            values,
        })
    }

    pub fn meta(&self) -> &VolumeMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut VolumeMeta {
        &mut self.meta
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn nu(&self) -> usize {
        self.meta.sampling.u.len()
    }

    pub fn ntheta(&self) -> usize {
        self.meta.sampling.theta.len()
    }

    fn plane_len(&self) -> usize {
        self.nb * self.meta.sampling.slices()
    }

    pub fn slot(&self, bi: usize, ui: usize, ti: usize) -> usize {
        (ui * self.ntheta() + ti) * self.nb + bi
    }

    pub fn value(&self, bi: usize, ui: usize, ti: usize) -> Multivector {
        let s = self.slot(bi, ui, ti);
        let m = self.plane_len();
        let c = (0..self.alg.blade_count())
            .map(|k| self.values[k * m + s])
            .collect();
        Multivector::from_coeffs(&self.alg, c).expect("blade count")
    }

    /// Blade `k` of slice (u, θ) over all b.
    pub fn slice_plane(&self, k: usize, ui: usize, ti: usize) -> &[f64] {
        let s = self.slot(0, ui, ti) + k * self.plane_len();
        &self.values[s..s + self.nb]
    }

    /// Slice (u, θ) as complex pseudoscalar-pair planes.
    pub fn slice_complex(&self, ui: usize, ti: usize) -> Vec<Vec<Complex64>> {
        self.alg
            .pseudo_pairs()
            .iter()
            .map(|p| {
                self.slice_plane(p.lo, ui, ti)
                    .iter()
                    .zip(self.slice_plane(p.hi, ui, ti))
                    .map(|(&a, &b)| Complex64::new(a, p.sign * b))
                    .collect()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &CLCSTVolume) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// max|self − reference| / max|reference|.
    pub fn rel_max_diff(&self, reference: &CLCSTVolume) -> f64 {
        relative(self.max_abs_diff(reference), reference.max_abs())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Σ |S|² weighted by Δb^n·Δu·Δθ.
    pub fn weighted_energy(&self) -> f64 {
        let (db, du, dt) = self.meta.weights();
        self.values.iter().map(|v| v * v).sum::<f64>() * db * du * dt
    }

    fn assemble(
        meta: VolumeMeta,
        alg: &Arc<Algebra>,
        slices: Vec<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        let nb = meta.sampling.b.len(&meta.grid);
        let total = nb * slices.len();
        let mut values = vec![0.0; alg.blade_count() * total];
        for (s, planes) in slices.iter().enumerate() {
            for (p, z) in alg.pseudo_pairs().iter().zip(planes) {
                for (bi, v) in z.iter().enumerate() {
                    values[p.lo * total + s * nb + bi] = v.re;
                    values[p.hi * total + s * nb + bi] = p.sign * v.im;
                }
            }
        }
        Self::from_parts(meta, alg, values)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn validate(f: &GridSignal, n_window: usize, sampling: &Sampling) -> Result<()> {
    f.require_domain(Domain::Spatial)?;
    f.algebra().require_complex_pseudoscalar()?;
    let n = f.spec().n;
    if n_window != n {
        return Err(Error::InvalidWindow(format!(
            "window dimension {n_window} for an n = {n} signal"
        )));
    }
    if sampling.u.points.iter().any(|u| u.len() != n) {
        return Err(Error::InvalidParams("u vector dimension".into()));
    }
    UList::new(sampling.u.points.clone(), sampling.u.weight)?;
    if sampling.theta.is_empty() {
        return Err(Error::EmptyQuadrature);
    }
    if let BSelection::Points(ps) = &sampling.b {
        if ps.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidParams("b point dimension".into()));
        }
    }
    Ok(())
}

fn make_meta(
    f: &GridSignal,
    window: Option<WindowSpec>,
    m: &LCTParams,
    sampling: &Sampling,
    path: Path,
) -> VolumeMeta {
    let mut warnings = Vec::new();
    if let Some(w) = f.boundary_warning(DEFAULT_BOUNDARY_THRESHOLD) {
        warnings.push(w);
    }
    if let Some(w) = window {
        if !w.is_unit_integral() {
            warnings.push(format!(
                "window integral is {:.6e}, not 1",
                w.integral()
            ));
        }
    }
    VolumeMeta {
        grid: *f.spec(),
        metric: f.algebra().metric(),
        sampling: sampling.clone(),
        lct: *m,
        window,
        path,
        warnings,
    }
}

/// |det A_u| e^{I(x·u + A|b|²/2B − A|x|²/2B)} ψ(R_−θ A_u (x − b)) on the lattice.
#[allow(clippy::too_many_arguments)]
pub fn clcst_kernel(
    psi: &WindowSpec,
    m: &LCTParams,
    spec: GridSpec,
    alg: &Arc<Algebra>,
    b: &[f64],
    u: &[f64],
    theta: f64,
) -> Result<GridSignal> {
    alg.require_complex_pseudoscalar()?;
    let rate = m.chirp_rate()?;
    let map = WindowMap::new(b, u, theta)?;
    let det = map.scale.det_abs();
    let mut y = vec![0.0; spec.n];
    let base = GridSignal::sample_scalar(spec, alg, |x| {
        map.apply(x, &mut y);
        det * psi.eval(&y)
    })?;
    let bb = dot(b, b);
    let mut x = vec![0.0; spec.n];
    let phases: Vec<f64> = (0..spec.len())
        .map(|j| {
            base.coords(j, &mut x);
            dot(&x, u) + rate * (bb - dot(&x, &x))
        })
        .collect();
    Ok(base.right_phase(|j| phases[j]))
}

/// Direct quadrature of the defining sum at arbitrary b points.
pub fn clcst_direct<W: Window + ?Sized>(
    f: &GridSignal,
    psi: &W,
    m: &LCTParams,
    sampling: &Sampling,
) -> Result<CLCSTVolume> {
    validate(f, psi.dim(), sampling)?;
    let rate = m.chirp_rate()?;
    let spec = *f.spec();
    let n = spec.n;
    let alg = f.algebra().clone();
    let bc = alg.blade_count();
    let pairs = alg.pseudo_pairs().to_vec();
    let npts = spec.len();

    // nonzero lattice points of f with their coordinates and chirp phase
    let mut xs = Vec::new();
    let mut idx = vec![0; n];
    for j in 0..npts {
        if (0..bc).any(|k| f.plane(k)[j] != 0.0) {
            spec.unravel(j, &mut idx);
            let x: Vec<f64> = idx.iter().map(|&k| spec.x(k)).collect();
            xs.push((j, x));
        }
    }
    let zf = f.to_complex();
    let bpts = sampling.b.coords(&spec);
    let slices: Vec<(usize, usize)> = (0..sampling.u.len())
        .flat_map(|ui| (0..sampling.theta.len()).map(move |ti| (ui, ti)))
        .collect();
    let cx = spec.dx().powi(n as i32) / (2.0 * PI).powf(n as f64 / 2.0);
    let scalar = psi.is_scalar();
    let signs = alg.conj_signs().to_vec();

    let out: Vec<Vec<Vec<Complex64>>> = slices
        .par_iter()
        .map(|&(ui, ti)| -> Result<Vec<Vec<Complex64>>> {
            let u = &sampling.u.points[ui];
            let theta = sampling.theta.angles[ti];
            let mut planes = vec![vec![Complex64::default(); bpts.len()]; pairs.len()];
            let mut y = vec![0.0; n];
            let mut wv = vec![0.0; bc];
            let mut fv = vec![0.0; bc];
            let mut prod = vec![0.0; bc];
            for (bi, b) in bpts.iter().enumerate() {
                let map = WindowMap::new(b, u, theta)?;
                let det = map.scale.det_abs();
                let bphase = rate * dot(b, b);
                let mut acc = vec![Complex64::default(); pairs.len()];
                for (j, x) in &xs {
                    map.apply(x, &mut y);
                    let ph = -(dot(x, u) + bphase - rate * dot(x, x));
                    let e = Complex64::from_polar(1.0, ph);
                    if scalar {
                        psi.eval_into(&y, &mut wv);
                        let w = wv[0] * e;
                        for (a, z) in acc.iter_mut().zip(&zf) {
                            *a += z[*j] * w;
                        }
                    } else {
                        psi.eval_into(&y, &mut wv);
                        wv.iter_mut().zip(&signs).for_each(|(v, s)| *v *= s);
                        for (k, v) in fv.iter_mut().enumerate() {
                            *v = f.plane(k)[*j];
                        }
                        alg.mul_into(&fv, &wv, &mut prod);
                        for (a, p) in acc.iter_mut().zip(&pairs) {
                            *a += Complex64::new(prod[p.lo], p.sign * prod[p.hi]) * e;
                        }
                    }
                }
                for (pl, a) in planes.iter_mut().zip(acc) {
                    pl[bi] = a * (cx * det);
                }
            }
            Ok(planes)
        })
        .collect::<Result<_>>()?;
    let meta = make_meta(f, psi.analytic_spec(), m, sampling, Path::Direct);
    CLCSTVolume::assemble(meta, &alg, out)
}

/// chirp → Stockwell transform via zero-padded FFT correlation → chirp.
pub fn clcst_three_step(
    f: &GridSignal,
    psi: &WindowSpec,
    m: &LCTParams,
    sampling: &Sampling,
) -> Result<CLCSTVolume> {
    fft_path(f, psi, m, sampling, Path::ThreeStep)
}

/// Radial windows make every θ slice of a given u identical.
fn replicate_over_theta<T: Clone>(per_u: Vec<T>, slices: &[(usize, usize)]) -> Vec<T> {
    slices.iter().map(|&(ui, _)| per_u[ui].clone()).collect()
}

/// ψ(R A_u y)·e^{I u·y} (phase only when `modulate`) on the product lattice
/// `axis`^n. The windows are radial, so the rotation drops out and each
/// Gaussian term factors over the axes.
pub(crate) fn separable_window(
    psi: &WindowSpec,
    axis: &[f64],
    n: usize,
    u: &[f64],
    modulate: bool,
) -> Vec<Complex64> {
    let len = axis.len();
    let tables: Vec<(f64, Vec<Vec<Complex64>>)> = psi
        .gaussian_terms()
        .into_iter()
        .map(|(a, c)| {
            let t = u
                .iter()
                .map(|&ui| {
                    axis.iter()
                        .map(|&d| {
                            let y = ui * d;
                            Complex64::from_polar((-c * y * y).exp(), if modulate { y } else { 0.0 })
                        })
                        .collect()
                })
                .collect();
            (a, t)
        })
        .collect();
    let mut idx = vec![0; n];
    (0..len.pow(n as u32))
        .map(|p| {
            crate::fft::unravel(p, len, &mut idx);
            tables
                .iter()
                .map(|(a, t)| {
                    idx.iter()
                        .zip(t)
                        .fold(Complex64::new(*a, 0.0), |acc, (&k, row)| acc * row[k])
                })
                .sum()
        })
        .collect()
}

/// Samples ψ(R A_u d), times e^{I u·d} when `modulate`, at every offset d of
/// the doubled lattice in DFT order.
pub(crate) fn offset_window(
    psi: &WindowSpec,
    spec: &GridSpec,
    u: &[f64],
    modulate: bool,
) -> Result<Vec<Complex64>> {
    ScalingMatrix::new(u)?;
    let len = 2 * spec.samples;
    let axis: Vec<f64> = (0..len)
        .map(|k| {
            let s = if k < spec.samples { k as f64 } else { k as f64 - len as f64 };
            s * spec.dx()
        })
        .collect();
    Ok(separable_window(psi, &axis, spec.n, u, modulate))
}

pub(crate) fn fft_path(
    f: &GridSignal,
    psi: &WindowSpec,
    m: &LCTParams,
    sampling: &Sampling,
    path: Path,
) -> Result<CLCSTVolume> {
    validate(f, psi.n, sampling)?;
    let rate = m.chirp_rate()?;
    let spec = *f.spec();
    let n = spec.n;
    let len = spec.samples;
    let plen = 2 * len;
    let alg = f.algebra().clone();
    let bidx = sampling.b.lattice_indices(&spec)?;
    let fft = NdFft::new(n, plen);
    // spectra of f̂ = f·chirp on the doubled lattice, shared by every slice
    let spectra: Vec<Vec<Complex64>> = f
        .chirp_multiply(rate, 1.0)?
        .to_complex()
        .iter()
        .map(|z| {
            let mut a = embed(z, n, len, plen, 0);
            fft.forward(&mut a);
            a
        })
        .collect();
    let coords: Vec<Vec<f64>> = BSelection::Lattice.coords(&spec);
    // flat index of each requested b inside the doubled lattice
    let mut idx = vec![0; n];
    let padded_at: Vec<usize> = bidx
        .iter()
        .map(|&j| {
            spec.unravel(j, &mut idx);
            idx.iter().fold(0, |acc, &i| acc * plen + i)
        })
        .collect();
    let cx = spec.dx().powi(n as i32) / (2.0 * PI).powf(n as f64 / 2.0);
    let norm = 1.0 / (plen.pow(n as u32) as f64);
    let slices: Vec<(usize, usize)> = (0..sampling.u.len())
        .flat_map(|ui| (0..sampling.theta.len()).map(move |ti| (ui, ti)))
        .collect();

    // Σ_x f̂(x)e^{−I x·u}ψ(A(x−b)) = e^{−I b·u} Σ_x f̂(x)·conj(H(x−b)), H(d) = e^{I d·u}ψ(A d)
    let per_u: Vec<Vec<Vec<Complex64>>> = sampling
        .u
        .points
        .par_iter()
        .map(|u| -> Result<Vec<Vec<Complex64>>> {
            let det: f64 = u.iter().map(|v| v.abs()).product();
            let mut h = offset_window(psi, &spec, u, true)?;
            fft.forward(&mut h);
            let s = cx * det * norm;
            let phase: Vec<Complex64> = bidx
                .iter()
                .map(|&j| {
                    let b = &coords[j];
                    Complex64::from_polar(s, -dot(b, u) - rate * dot(b, b))
                })
                .collect();
            let mut planes = Vec::with_capacity(spectra.len());
            for fz in &spectra {
                let mut a: Vec<Complex64> = fz.iter().zip(&h).map(|(x, w)| x * w.conj()).collect();
                fft.inverse(&mut a);
                planes.push(padded_at.iter().zip(&phase).map(|(&p, e)| a[p] * e).collect());
            }
            Ok(planes)
        })
        .collect::<Result<_>>()?;
    let out = replicate_over_theta(per_u, &slices);
    let meta = make_meta(f, Some(*psi), m, sampling, path);
    CLCSTVolume::assemble(meta, &alg, out)
}

/// Fourier-domain product form: per slice, F[f·chirp]·conj(F_raw[e^{I u·y} ψ(R A_u y)])
/// is inverted over w, then the b phases are applied.
pub fn clcst_spectral(
    f: &GridSignal,
    psi: &WindowSpec,
    m: &LCTParams,
    sampling: &Sampling,
) -> Result<CLCSTVolume> {
    validate(f, psi.n, sampling)?;
    let rate = m.chirp_rate()?;
    let spec = *f.spec();
    let n = spec.n;
    let len = spec.samples;
    let padded = spec.padded();
    let plen = padded.samples;
    let alg = f.algebra().clone();
    let bidx = sampling.b.lattice_indices(&spec)?;

    // F[f·chirp] on the doubled lattice (same spacing, twice the extent)
    let mut fhat: Vec<Vec<Complex64>> = f
        .chirp_multiply(rate, 1.0)?
        .to_complex()
        .iter()
        .map(|z| embed(z, n, len, plen, len / 2))
        .collect();
    lattice_forward(&mut fhat, n, plen);
    let fscale = crate::cft::forward_scale(&padded);
    let dxn = spec.dx().powi(n as i32);
    let paxis: Vec<f64> = (0..plen).map(|k| padded.x(k)).collect();
    let coords = BSelection::Lattice.coords(&spec);
    let slices: Vec<(usize, usize)> = (0..sampling.u.len())
        .flat_map(|ui| (0..sampling.theta.len()).map(move |ti| (ui, ti)))
        .collect();
    let inv = crate::cft::inverse_scale(&padded) * (2.0 * PI).powf(n as f64 / 2.0);

    let per_u: Vec<Vec<Vec<Complex64>>> = sampling
        .u
        .points
        .par_iter()
        .map(|u| -> Result<Vec<Vec<Complex64>>> {
            let det = ScalingMatrix::new(u)?.det_abs();
            // raw Fourier integral of e^{I u·y} ψ(R A_u y)
            let mut k = vec![separable_window(psi, &paxis, n, u, true)];
            lattice_forward(&mut k, n, plen);
            let kraw: Vec<Complex64> = k[0].iter().map(|v| v * dxn).collect();
            let mut prod: Vec<Vec<Complex64>> = fhat
                .iter()
                .map(|fz| {
                    fz.iter()
                        .zip(&kraw)
                        .map(|(a, b)| a * fscale * b.conj())
                        .collect()
                })
                .collect();
            lattice_inverse(&mut prod, n, plen);
            // S(b) = |det| (2π)^{−n} ∫ … dw = |det| (2π)^{−n/2} F^{-1}[…](b)
            let s = det * inv / (2.0 * PI).powf(n as f64);
            Ok(prod
                .iter()
                .map(|z| {
                    let inner = extract(z, n, plen, len, len / 2);
                    bidx.iter()
                        .map(|&j| {
                            let b = &coords[j];
                            let ph = -(rate * dot(b, b) + dot(b, u));
                            inner[j] * s * Complex64::from_polar(1.0, ph)
                        })
                        .collect()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let out = replicate_over_theta(per_u, &slices);
    let meta = make_meta(f, Some(*psi), m, sampling, Path::Spectral);
    CLCSTVolume::assemble(meta, &alg, out)
}

/// Runs one path; `strict` turns a non-unit-integral window into an error.
pub fn clcst(
    f: &GridSignal,
    psi: &WindowSpec,
    m: &LCTParams,
    sampling: &Sampling,
    path: Path,
    strict: bool,
) -> Result<CLCSTVolume> {
    if strict && !psi.is_unit_integral() {
        return Err(Error::NotNormalized(psi.integral()));
    }
    match path {
        Path::Direct => clcst_direct(f, psi, m, sampling),
        Path::ThreeStep => clcst_three_step(f, psi, m, sampling),
        Path::Spectral => clcst_spectral(f, psi, m, sampling),
        Path::Cst => crate::stockwell::cst(f, psi, sampling),
    }
}
