//! Clifford-valued linear canonical Stockwell transforms on uniform lattices.

pub mod algebra;
pub mod cft;
pub mod clcst;
pub mod clct;
pub mod config;
pub mod error;
pub mod fft;
pub mod grid;
pub mod io;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod stockwell;
#[cfg(feature = "oracle")]
pub mod verify;
pub mod windows;

pub use algebra::{pseudoscalar_exp, Algebra, Metric, Multivector};
pub use cft::{cft_forward, cft_inverse, convolve};
pub use clcst::{
    clcst, clcst_direct, clcst_kernel, clcst_spectral, clcst_three_step, BSelection, CLCSTVolume,
    Path, Sampling, ThetaList, UList, VolumeMeta,
};
pub use clct::{clct_forward, clct_kernel, lct_convolve, LCTParams};
pub use error::{Error, Result};
pub use grid::{inner_product, Domain, GridSignal, GridSpec};
pub use stockwell::{cst, window_family, Rotation, ScalingMatrix, WindowMap, WindowSource};
pub use windows::{CliffordWindow, Normalization, Window, WindowKind, WindowSpec};
