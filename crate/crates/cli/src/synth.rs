//! Test signals for the `synthesize` subcommand.

use anyhow::{bail, Context, Result};
use clcst::{io, Algebra, GridSignal, GridSpec};

use crate::{SignalKind, SynthArgs};

/// (weight, blade, center, σ) terms of the mixture; blades beyond 2^n − 1 are skipped.
const MIXTURE: [(f64, usize, [f64; 3], f64); 4] = [
    (1.0, 0, [-1.0, 0.5, 0.0], 0.8),
    (0.5, 1, [1.0, -1.0, 0.5], 0.6),
    (-0.7, 3, [0.5, 1.0, -0.5], 1.0),
    (0.3, 2, [0.0, 0.0, 0.0], 0.5),
];

pub fn signal(args: &SynthArgs) -> Result<GridSignal> {
    let spec = grid(args.n, args.half_width, args.samples)?;
    let alg = Algebra::for_transforms(args.n)?;
    let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let s = match args.kind {
        SignalKind::Gaussian => {
            let sigma = args.sigma.unwrap_or(1.0);
            if !(sigma > 0.0) {
                bail!("sigma must be positive");
            }
            GridSignal::sample_scalar(spec, &alg, |x| (-r2(x) / (2.0 * sigma * sigma)).exp())?
        }
        SignalKind::GaussianMixture => {
            let bc = alg.blade_count();
            GridSignal::sample_with(spec, &alg, |x, out| {
                for &(w, blade, c, s) in MIXTURE.iter().filter(|t| t.1 < bc) {
                    let d: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
                    out[blade] += w * (-d / (2.0 * s * s)).exp();
                }
            })?
        }
        SignalKind::Chirp => {
            let top = alg.pseudoscalar_blade();
            let env = args.sigma;
            GridSignal::sample_with(spec, &alg, |x, out| {
                let a = env.map_or(1.0, |s| (-r2(x) / (2.0 * s * s)).exp());
                let (sn, cs) = (args.rate * r2(x)).sin_cos();
                out[0] = a * cs;
                out[top] = a * sn;
            })?
        }
        SignalKind::Example1 => {
            if args.n != 2 {
                bail!("example1 is defined for n = 2");
            }
            GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] * x[0] + x[1] * x[1])).exp())?
        }
    };
    Ok(s)
}

pub fn grid(n: usize, half_width: Option<f64>, samples: Option<usize>) -> Result<GridSpec> {
    if !(2..=3).contains(&n) {
        bail!("n must be 2 or 3");
    }
    let d = GridSpec::default_for(n)?;
    Ok(GridSpec::new(
        n,
        half_width.unwrap_or(d.half_width),
        samples.unwrap_or(d.samples),
    )?)
}

pub fn run(args: &SynthArgs) -> Result<()> {
    let s = signal(args)?;
    io::write_signal(&args.output, &s)
        .with_context(|| format!("writing {}", args.output.display()))?;
    if let Some(w) = s.boundary_warning(1e-10) {
        eprintln!("warning: {w}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn args(kind: SignalKind) -> SynthArgs {
        SynthArgs {
            kind,
            n: 2,
            half_width: None,
            samples: None,
            sigma: None,
            rate: 0.0,
            output: PathBuf::new(),
        }
    }

    fn origin(s: &GridSignal) -> usize {
        let n = s.spec().samples / 2;
        s.spec().ravel(&[n, n])
    }

    #[test]
    fn example1_is_one_at_origin() {
        let s = signal(&args(SignalKind::Example1)).unwrap();
        assert_eq!(s.plane(0)[origin(&s)], 1.0);
        let mut a = args(SignalKind::Example1);
        a.n = 3;
        assert!(signal(&a).is_err());
    }

    #[test]
    fn gaussian_peak_and_flat_chirp() {
        let mut a = args(SignalKind::Gaussian);
        a.sigma = Some(0.7);
        let s = signal(&a).unwrap();
        assert_eq!(s.plane(0)[origin(&s)], 1.0);
        assert_eq!(s.max_abs(), 1.0);
        let c = signal(&args(SignalKind::Chirp)).unwrap();
        assert!(c.plane(0).iter().all(|&v| v == 1.0));
        assert!(c.plane(3).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mixture_fills_several_blades() {
        let mut a = args(SignalKind::GaussianMixture);
        a.n = 3;
        let s = signal(&a).unwrap();
        assert!((0..4).all(|b| s.plane(b).iter().any(|&v| v != 0.0)));
    }
}
