//! Uniform lattices over [−L, L)^n and multivector-valued samples on them.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Multivector};
use crate::error::{Error, Result};

/// Share of L² mass allowed in the boundary shell before a warning is raised.
pub const DEFAULT_BOUNDARY_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub half_width: f64,
    pub samples: usize,
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64, samples: usize) -> Result<Self> {
        if n == 0 || n > Algebra::MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width {half_width}")));
        }
        if samples < 2 || samples % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "samples per axis must be even and >= 2 (got {samples})"
            )));
        }
        Ok(GridSpec {
            n,
            half_width,
            samples,
        })
    }

    /// Desk-scale defaults: L = 6, N = 64 for n = 2; L = 4, N = 32 for n = 3.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Self::new(2, 6.0, 64),
            3 => Self::new(3, 4.0, 32),
            _ => Self::new(n, 4.0, 16),
        }
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.samples as f64
    }

    pub fn dw(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    pub fn len(&self) -> usize {
        self.samples.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn w(&self, k: usize) -> f64 {
        (k as f64 - (self.samples / 2) as f64) * self.dw()
    }

    /// Lattice twice as wide with the same spacing; used for linear correlations.
    pub fn padded(&self) -> GridSpec {
        GridSpec {
            n: self.n,
            half_width: 2.0 * self.half_width,
            samples: 2 * self.samples,
        }
    }

    pub fn unravel(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.samples;
            flat /= self.samples;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.samples + i)
    }

    /// Flat index of the lattice point nearest to `x`, if `x` is a lattice point.
    pub fn lattice_index(&self, x: &[f64]) -> Option<usize> {
        let mut flat = 0;
        for &xi in x {
            let t = (xi + self.half_width) / self.dx();
            let r = t.round();
            if (t - r).abs() > 1e-9 || r < 0.0 || r >= self.samples as f64 {
                return None;
            }
            flat = flat * self.samples + r as usize;
        }
        Some(flat)
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Which lattice a signal's samples sit on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Domain {
    /// x_j = −L + jΔx
    Spatial,
    /// w_k = (k − N/2)Δw
    Frequency,
    /// u_k = B·w_k; for B = 0 the spatial lattice.
    Canonical { b: f64 },
}

impl Domain {
    pub fn coord(&self, spec: &GridSpec, k: usize) -> f64 {
        match *self {
            Domain::Spatial => spec.x(k),
            Domain::Frequency => spec.w(k),
            Domain::Canonical { b } if b == 0.0 => spec.x(k),
            Domain::Canonical { b } => b * spec.w(k),
        }
    }

    pub fn spacing(&self, spec: &GridSpec) -> f64 {
        match *self {
            Domain::Spatial => spec.dx(),
            Domain::Frequency => spec.dw(),
            Domain::Canonical { b } if b == 0.0 => spec.dx(),
            Domain::Canonical { b } => b.abs() * spec.dw(),
        }
    }

    fn label(&self) -> String {
        format!("{self:?}")
    }
}

/// Multivector samples stored as one real plane per blade (blade-major,
/// row-major lattice inside each plane).
#[derive(Clone, Debug)]
pub struct GridSignal {
    spec: GridSpec,
    domain: Domain,
    alg: Arc<Algebra>,
    data: Vec<f64>,
}

impl GridSignal {
    pub fn zeros(spec: GridSpec, domain: Domain, alg: &Arc<Algebra>) -> Result<Self> {
        if alg.n() != spec.n {
            return Err(Error::DimensionMismatch {
                left: alg.label(),
                right: format!("grid dimension {}", spec.n),
            });
        }
        Ok(GridSignal {
            spec,
            domain,
            alg: alg.clone(),
            data: vec![0.0; alg.blade_count() * spec.len()],
        })
    }

    pub fn from_planes(
        spec: GridSpec,
        domain: Domain,
        alg: &Arc<Algebra>,
        data: Vec<f64>,
    ) -> Result<Self> {
        let mut s = Self::zeros(spec, domain, alg)?;
        if data.len() != s.data.len() {
            return Err(Error::GridMismatch(format!(
                "payload has {} values, expected {}",
                data.len(),
                s.data.len()
            )));
        }
        s.data = data;
        Ok(s)
    }

    /// Samples `f` at every spatial lattice point; `f` writes coefficients into its buffer.
    pub fn sample_with<F>(spec: GridSpec, alg: &Arc<Algebra>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let mut s = Self::zeros(spec, Domain::Spatial, alg)?;
        let npts = spec.len();
        let bc = alg.blade_count();
        let mut idx = vec![0; spec.n];
        let mut x = vec![0.0; spec.n];
        let mut buf = vec![0.0; bc];
        for j in 0..npts {
            spec.unravel(j, &mut idx);
            for (xi, &k) in x.iter_mut().zip(&idx) {
                *xi = spec.x(k);
            }
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(&x, &mut buf);
            for (b, &v) in buf.iter().enumerate() {
                s.data[b * npts + j] = v;
            }
        }
        Ok(s)
    }

    pub fn sample<F>(spec: GridSpec, alg: &Arc<Algebra>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Multivector,
    {
        Self::sample_with(spec, alg, |x, out| out.copy_from_slice(f(x).coeffs()))
    }

    pub fn sample_scalar<F>(spec: GridSpec, alg: &Arc<Algebra>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> f64,
    {
        Self::sample_with(spec, alg, |x, out| out[0] = f(x))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn plane(&self, blade: usize) -> &[f64] {
        let m = self.spec.len();
        &self.data[blade * m..(blade + 1) * m]
    }

    pub fn plane_mut(&mut self, blade: usize) -> &mut [f64] {
        let m = self.spec.len();
        &mut self.data[blade * m..(blade + 1) * m]
    }

    pub fn value(&self, j: usize) -> Multivector {
        let m = self.spec.len();
        let c = (0..self.alg.blade_count())
            .map(|b| self.data[b * m + j])
            .collect();
        Multivector::from_coeffs(&self.alg, c).expect("blade count")
    }

    pub fn set_value(&mut self, j: usize, v: &Multivector) {
        let m = self.spec.len();
        for (b, &c) in v.coeffs().iter().enumerate() {
            self.data[b * m + j] = c;
        }
    }

    /// Coordinates of lattice point `j` in this signal's domain.
    pub fn coords(&self, j: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.spec.n];
        self.spec.unravel(j, &mut idx);
        for (o, &k) in out.iter_mut().zip(&idx) {
            *o = self.domain.coord(&self.spec, k);
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.domain.spacing(&self.spec).powi(self.spec.n as i32)
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn require_domain(&self, expected: Domain) -> Result<()> {
        if self.domain == expected {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                expected: expected.label(),
                found: self.domain.label(),
            })
        }
    }

    pub fn check_compatible(&self, other: &GridSignal) -> Result<()> {
        self.spec.check_same(&other.spec)?;
        if !self.alg.same_as(&other.alg) {
            return Err(Error::DimensionMismatch {
                left: self.alg.label(),
                right: other.alg.label(),
            });
        }
        if self.domain != other.domain {
            return Err(Error::LatticeMismatch {
                expected: self.domain.label(),
                found: other.domain.label(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn axpy(&self, a: f64, other: &GridSignal) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(x, y)| *x += a * y);
        Ok(out)
    }

    /// Pointwise `c · f(x)`.
    pub fn left_mul(&self, c: &Multivector) -> Result<Self> {
        self.pointwise(|v, out| self.alg.mul_into(c.coeffs(), v, out))
    }

    /// Pointwise `f(x) · c`.
    pub fn right_mul(&self, c: &Multivector) -> Result<Self> {
        self.pointwise(|v, out| self.alg.mul_into(v, c.coeffs(), out))
    }

    /// Pointwise geometric product `f(x) · g(x)`.
    pub fn product(&self, other: &GridSignal) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.spec.len();
        let bc = self.alg.blade_count();
        let mut out = self.clone();
        let (mut a, mut b, mut c) = (vec![0.0; bc], vec![0.0; bc], vec![0.0; bc]);
        for j in 0..m {
            for k in 0..bc {
                a[k] = self.data[k * m + j];
                b[k] = other.data[k * m + j];
            }
            self.alg.mul_into(&a, &b, &mut c);
            for k in 0..bc {
                out.data[k * m + j] = c[k];
            }
        }
        Ok(out)
    }

    fn pointwise(&self, f: impl Fn(&[f64], &mut [f64])) -> Result<Self> {
        let m = self.spec.len();
        let bc = self.alg.blade_count();
        let mut out = self.clone();
        let (mut a, mut c) = (vec![0.0; bc], vec![0.0; bc]);
        for j in 0..m {
            for k in 0..bc {
                a[k] = self.data[k * m + j];
            }
            f(&a, &mut c);
            for k in 0..bc {
                out.data[k * m + j] = c[k];
            }
        }
        Ok(out)
    }

    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        let signs = self.alg.conj_signs().to_vec();
        for (b, s) in signs.iter().enumerate() {
            out.plane_mut(b).iter_mut().for_each(|v| *v *= s);
        }
        out
    }

    /// Σ_j |f_j|² times the cell volume.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &GridSignal) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// max|self − other| / max|other|.
    pub fn rel_max_diff(&self, reference: &GridSignal) -> f64 {
        relative(self.max_abs_diff(reference), reference.max_abs())
    }

    /// ‖self − other‖ / ‖other‖ in the lattice L² norm.
    pub fn rel_l2_error(&self, reference: &GridSignal) -> f64 {
        let num: f64 = self
            .data
            .iter()
            .zip(&reference.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let den: f64 = reference.data.iter().map(|v| v * v).sum();
        relative(num.sqrt(), den.sqrt())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Share of L² mass within `width` samples of the lattice boundary.
    pub fn boundary_mass_fraction(&self, width: usize) -> f64 {
        let m = self.spec.len();
        let n = self.spec.samples;
        let mut idx = vec![0; self.spec.n];
        let (mut shell, mut total) = (0.0, 0.0);
        for j in 0..m {
            self.spec.unravel(j, &mut idx);
            let e: f64 = (0..self.alg.blade_count())
                .map(|b| self.data[b * m + j].powi(2))
                .sum();
            total += e;
            if idx.iter().any(|&k| k < width || k >= n - width) {
                shell += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            shell / total
        }
    }

    /// Warning text when the boundary shell (N/16 samples wide) carries too much mass.
    pub fn boundary_warning(&self, threshold: f64) -> Option<String> {
        let frac = self.boundary_mass_fraction((self.spec.samples / 16).max(1));
        (frac > threshold).then(|| {
            format!("boundary shell holds {frac:.3e} of the L2 mass (threshold {threshold:.1e})")
        })
    }

    /// Pointwise right multiplication by `exp(I·sign·rate·|x|²)`.
    pub fn chirp_multiply(&self, rate: f64, sign: f64) -> Result<Self> {
        self.alg.require_complex_pseudoscalar()?;
        if rate == 0.0 {
            return Ok(self.clone());
        }
        let spec = self.spec;
        let domain = self.domain;
        let mut idx = vec![0; spec.n];
        let phases: Vec<f64> = (0..spec.len())
            .map(|j| {
                spec.unravel(j, &mut idx);
                let r2: f64 = idx
                    .iter()
                    .map(|&k| domain.coord(&spec, k).powi(2))
                    .sum();
                sign * rate * r2
            })
            .collect();
        Ok(self.right_phase(|j| phases[j]))
    }

    /// Pointwise right multiplication by `exp(I·phase(j))`.
    pub fn right_phase(&self, phase: impl Fn(usize) -> f64) -> Self {
        let mut z = self.to_complex();
        for plane in z.iter_mut() {
            for (j, v) in plane.iter_mut().enumerate() {
                *v *= Complex64::from_polar(1.0, phase(j));
            }
        }
        Self::from_complex(self.spec, self.domain, &self.alg, &z)
    }

    /// Pointwise left multiplication by `exp(I·phase(j))`. Blades that
    /// anticommute with I see the conjugate phase.
    pub fn left_phase(&self, phase: impl Fn(usize) -> f64) -> Self {
        let mut z = self.to_complex();
        for (plane, p) in z.iter_mut().zip(self.alg.pseudo_pairs()) {
            let s = if p.commutes { 1.0 } else { -1.0 };
            for (j, v) in plane.iter_mut().enumerate() {
                *v *= Complex64::from_polar(1.0, s * phase(j));
            }
        }
        Self::from_complex(self.spec, self.domain, &self.alg, &z)
    }

    /// Splits into one complex plane per pseudoscalar pair:
    /// `z = m_lo + i·s·m_hi` where `e_lo·I = s·e_hi`. Right multiplication by
    /// `a + b·I` becomes multiplication of every plane by `a + ib`.
    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.alg
            .pseudo_pairs()
            .iter()
            .map(|p| {
                self.plane(p.lo)
                    .iter()
                    .zip(self.plane(p.hi))
                    .map(|(&a, &b)| Complex64::new(a, p.sign * b))
                    .collect()
            })
            .collect()
    }

    pub fn from_complex(
        spec: GridSpec,
        domain: Domain,
        alg: &Arc<Algebra>,
        planes: &[Vec<Complex64>],
    ) -> Self {
        let mut s = Self::zeros(spec, domain, alg).expect("matching algebra");
        for (p, z) in alg.pseudo_pairs().iter().zip(planes) {
            for (j, v) in z.iter().enumerate() {
                s.data[p.lo * spec.len() + j] = v.re;
                s.data[p.hi * spec.len() + j] = p.sign * v.im;
            }
        }
        s
    }
}

pub(crate) fn relative(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Δ^n Σ_j f(x_j)·conj(g(x_j)).
pub fn inner_product(f: &GridSignal, g: &GridSignal) -> Result<Multivector> {
    f.check_compatible(g)?;
    let alg = f.algebra();
    let bc = alg.blade_count();
    let signs = alg.conj_signs();
    let mut acc = vec![0.0; bc];
    for a in 0..bc {
        let fa = f.plane(a);
        for b in 0..bc {
            let gb = g.plane(b);
            let dot: f64 = fa.iter().zip(gb).map(|(x, y)| x * y).sum();
            if dot != 0.0 {
                acc[a ^ b] += alg.sign(a, b) * signs[b] * dot;
            }
        }
    }
    let w = f.cell_volume();
    acc.iter_mut().for_each(|v| *v *= w);
    Multivector::from_coeffs(alg, acc)
}
