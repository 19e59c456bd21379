//! Analytic analysis windows.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Multivector};
use crate::error::{Error, Result};
use crate::grid::{GridSignal, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WindowKind {
    /// e^{−|y|²/2σ²}
    Gaussian { sigma: f64 },
    /// λ^{−2} e^{−|y|²/2λ²} − e^{−|y|²/2}
    Dog { lambda: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    UnitIntegral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub normalization: Normalization,
    pub n: usize,
}

pub fn dog_eval(lambda: f64, y: &[f64]) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(dog_profile(lambda, y.iter().map(|v| v * v).sum()))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidWindow(format!("DOG needs 0 < λ < 1 (got {lambda})")))
    }
}

#[inline]
fn dog_profile(lambda: f64, r2: f64) -> f64 {
    (-r2 / (2.0 * lambda * lambda)).exp() / (lambda * lambda) - (-r2 / 2.0).exp()
}

impl WindowSpec {
    pub fn gaussian(n: usize, sigma: f64) -> Result<Self> {
        WindowSpec {
            kind: WindowKind::Gaussian { sigma },
            normalization: Normalization::Raw,
            n,
        }
        .validated()
    }

    pub fn dog(n: usize, lambda: f64) -> Result<Self> {
        WindowSpec {
            kind: WindowKind::Dog { lambda },
            normalization: Normalization::Raw,
            n,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::InvalidWindow("dimension 0".into()));
        }
        match self.kind {
            WindowKind::Gaussian { sigma } if !(sigma.is_finite() && sigma > 0.0) => {
                return Err(Error::InvalidWindow(format!("Gaussian needs σ > 0 (got {sigma})")))
            }
            WindowKind::Dog { lambda } => check_lambda(lambda)?,
            _ => {}
        }
        if self.normalization == Normalization::UnitIntegral {
            self.check_integral()?;
        }
        Ok(self)
    }

    /// Closed-form ∫ of the unscaled profile.
    pub fn raw_integral(&self) -> f64 {
        let n = self.n as i32;
        match self.kind {
            WindowKind::Gaussian { sigma } => (2.0 * PI * sigma * sigma).powf(n as f64 / 2.0),
            WindowKind::Dog { lambda } => {
                (2.0 * PI).powf(n as f64 / 2.0) * (lambda.powi(n - 2) - 1.0)
            }
        }
    }

    fn check_integral(&self) -> Result<()> {
        let i = self.raw_integral();
        if i.abs() < 1e-12 {
            return Err(Error::ZeroIntegral(format!(
                "{:?} in n = {} integrates to zero; unit-integral normalization is impossible",
                self.kind, self.n
            )));
        }
        Ok(())
    }

    pub fn normalize_unit_integral(self) -> Result<Self> {
        self.check_integral()?;
        Ok(WindowSpec {
            normalization: Normalization::UnitIntegral,
            ..self
        })
    }

    pub fn scale(&self) -> f64 {
        match self.normalization {
            Normalization::Raw => 1.0,
            Normalization::UnitIntegral => 1.0 / self.raw_integral(),
        }
    }

    pub fn integral(&self) -> f64 {
        self.raw_integral() * self.scale()
    }

    pub fn is_unit_integral(&self) -> bool {
        (self.integral() - 1.0).abs() < 1e-12
    }

    /// Value at squared radius `r2`.
    #[inline]
    pub fn profile(&self, r2: f64) -> f64 {
        let v = match self.kind {
            WindowKind::Gaussian { sigma } => (-r2 / (2.0 * sigma * sigma)).exp(),
            WindowKind::Dog { lambda } => dog_profile(lambda, r2),
        };
        v * self.scale()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.profile(y.iter().map(|v| v * v).sum())
    }

    /// ψ(y) = Σ a_k e^{−c_k|y|²} as (a_k, c_k), normalization included.
    pub fn gaussian_terms(&self) -> Vec<(f64, f64)> {
        let s = self.scale();
        match self.kind {
            WindowKind::Gaussian { sigma } => vec![(s, 1.0 / (2.0 * sigma * sigma))],
            WindowKind::Dog { lambda } => vec![
                (s / (lambda * lambda), 1.0 / (2.0 * lambda * lambda)),
                (-s, 0.5),
            ],
        }
    }

    /// Radius beyond which |ψ| < tol·|ψ(0)| (upper estimate).
    pub fn support_radius(&self, tol: f64) -> f64 {
        let s = match self.kind {
            WindowKind::Gaussian { sigma } => sigma,
            WindowKind::Dog { .. } => 1.0,
        };
        s * (2.0 * (1.0 / tol).ln()).sqrt()
    }

    pub fn sample(&self, spec: GridSpec, alg: &Arc<Algebra>) -> Result<GridSignal> {
        GridSignal::sample_scalar(spec, alg, |y| self.eval(y))
    }

    /// ‖ψ‖_{L¹} by lattice quadrature.
    pub fn l1_norm(&self, spec: &GridSpec) -> f64 {
        self.quadrature(spec, f64::abs)
    }

    /// ‖ψ‖²_{L²} by lattice quadrature.
    pub fn l2_norm_sq(&self, spec: &GridSpec) -> f64 {
        self.quadrature(spec, |v| v * v)
    }

    pub fn quadrature_integral(&self, spec: &GridSpec) -> f64 {
        self.quadrature(spec, |v| v)
    }

    fn quadrature(&self, spec: &GridSpec, g: impl Fn(f64) -> f64) -> f64 {
        let mut idx = vec![0; spec.n];
        let sum: f64 = (0..spec.len())
            .map(|j| {
                spec.unravel(j, &mut idx);
                g(self.profile(idx.iter().map(|&k| spec.x(k).powi(2)).sum()))
            })
            .sum();
        sum * spec.dx().powi(spec.n as i32)
    }
}

/// Anything the direct CLCST sum can evaluate at transformed coordinates.
pub trait Window: Sync {
    fn dim(&self) -> usize;
    /// Multivector value at `y`, written into `out` (length 2^n).
    fn eval_into(&self, y: &[f64], out: &mut [f64]);
    /// True when every value is a real multiple of 1.
    fn is_scalar(&self) -> bool;
    fn analytic_spec(&self) -> Option<WindowSpec> {
        None
    }
}

impl Window for WindowSpec {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval_into(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[0] = self.eval(y);
    }

    fn is_scalar(&self) -> bool {
        true
    }

    fn analytic_spec(&self) -> Option<WindowSpec> {
        Some(*self)
    }
}

/// Σ_k c_k ψ_k(y) with constant multivector weights.
#[derive(Clone, Debug)]
pub struct CliffordWindow {
    pub terms: Vec<(Multivector, WindowSpec)>,
}

impl CliffordWindow {
    pub fn new(terms: Vec<(Multivector, WindowSpec)>) -> Result<Self> {
        let n = terms
            .first()
            .map(|(c, _)| c.algebra().n())
            .ok_or_else(|| Error::InvalidWindow("empty combination".into()))?;
        if terms.iter().any(|(c, w)| c.algebra().n() != n || w.n != n) {
            return Err(Error::InvalidWindow("mixed dimensions".into()));
        }
        Ok(CliffordWindow { terms })
    }
}

impl Window for CliffordWindow {
    fn dim(&self) -> usize {
        self.terms[0].1.n
    }

    fn eval_into(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (c, w) in &self.terms {
            let v = w.eval(y);
            out.iter_mut()
                .zip(c.coeffs())
                .for_each(|(o, ck)| *o += ck * v);
        }
    }

    fn is_scalar(&self) -> bool {
        self.terms
            .iter()
            .all(|(c, _)| c.coeffs()[1..].iter().all(|&v| v == 0.0))
    }
}
