//! Scaling matrices, rotations, the Stockwell window family and the CST.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::clcst::{self, CLCSTVolume, Path, Sampling};
use crate::clct::LCTParams;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridSignal, GridSpec};
use crate::windows::WindowSpec;

/// A_u = diag(u_1, …, u_n) with every u_i ≠ 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingMatrix {
    u: Vec<f64>,
}

impl ScalingMatrix {
    pub fn new(u: &[f64]) -> Result<Self> {
        if u.is_empty() || u.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::ZeroScale(u.to_vec()));
        }
        Ok(ScalingMatrix { u: u.to_vec() })
    }

    pub fn diag(&self) -> &[f64] {
        &self.u
    }

    /// |det A_u| = Π|u_i|.
    pub fn det_abs(&self) -> f64 {
        self.u.iter().map(|v| v.abs()).product()
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), ui) in out.iter_mut().zip(x).zip(&self.u) {
            *o = xi * ui;
        }
    }

    pub fn apply_inverse(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), ui) in out.iter_mut().zip(x).zip(&self.u) {
            *o = xi / ui;
        }
    }
}

/// Proper rotation [[cos θ, −sin θ], [sin θ, cos θ]] on axes (1, 2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub theta: f64,
}

impl Rotation {
    pub fn new(theta: f64) -> Self {
        Rotation { theta }
    }

    pub fn apply(&self, y: &mut [f64]) {
        if y.len() < 2 || self.theta == 0.0 {
            return;
        }
        let (s, c) = self.theta.sin_cos();
        let (a, b) = (y[0], y[1]);
        y[0] = c * a - s * b;
        y[1] = s * a + c * b;
    }

    pub fn matrix(&self, n: usize) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; n]; n];
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            self.apply(&mut e);
            for (r, v) in e.into_iter().enumerate() {
                m[r][c] = v;
            }
        }
        m
    }
}

/// y = R_−θ A_u (x − b).
#[derive(Clone, Debug)]
pub struct WindowMap {
    pub scale: ScalingMatrix,
    pub rotation: Rotation,
    pub b: Vec<f64>,
}

impl WindowMap {
    pub fn new(b: &[f64], u: &[f64], theta: f64) -> Result<Self> {
        Ok(WindowMap {
            scale: ScalingMatrix::new(u)?,
            rotation: Rotation::new(theta),
            b: b.to_vec(),
        })
    }

    #[inline]
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (((o, xi), bi), ui) in out.iter_mut().zip(x).zip(&self.b).zip(self.scale.diag()) {
            *o = (xi - bi) * ui;
        }
        self.rotation.apply(out);
    }
}

/// The window an analysis is built from.
#[derive(Clone, Copy, Debug)]
pub enum WindowSource<'a> {
    Analytic(&'a WindowSpec),
    Sampled(&'a GridSignal),
}

/// |det A_u| e^{I x·u} ψ(R_−θ A_u (x − b)) on the spatial lattice.
pub fn window_family(
    psi: WindowSource<'_>,
    spec: GridSpec,
    alg: &Arc<Algebra>,
    b: &[f64],
    u: &[f64],
    theta: f64,
) -> Result<GridSignal> {
    let map = WindowMap::new(b, u, theta)?;
    let det = map.scale.det_abs();
    let base = match psi {
        WindowSource::Analytic(w) => {
            let mut y = vec![0.0; spec.n];
            GridSignal::sample_scalar(spec, alg, |x| {
                map.apply(x, &mut y);
                w.eval(&y)
            })?
        }
        WindowSource::Sampled(s) => {
            let trivial = theta == 0.0
                && u.iter().all(|&v| v == 1.0)
                && b.iter().all(|&v| v == 0.0);
            if !trivial {
                return Err(Error::AnalyticWindowRequired);
            }
            s.check_compatible(&GridSignal::zeros(spec, Domain::Spatial, alg)?)?;
            s.clone()
        }
    };
    let mut x = vec![0.0; spec.n];
    let phases: Vec<f64> = (0..spec.len())
        .map(|j| {
            base.coords(j, &mut x);
            x.iter().zip(u).map(|(a, b)| a * b).sum()
        })
        .collect();
    Ok(base.left_phase(|j| phases[j]).scale(det))
}

/// Clifford Stockwell transform through the FFT correlation path.
pub fn cst(f: &GridSignal, psi: &WindowSpec, sampling: &Sampling) -> Result<CLCSTVolume> {
    clcst::fft_path(f, psi, &LCTParams::fourier(), sampling, Path::Cst)
}
