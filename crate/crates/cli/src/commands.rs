//! transform, verify, reconstruct and kernel-dump.

use std::fs;
use std::path::Path as FsPath;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use clcst::clcst::theory::{
    admissibility_profile, reproducing_kernel, AnalysisPoint, MarginalSynthesis, ProfileStats,
    ResolutionSynthesis,
};
use clcst::config::{RunConfig, UListConfig};
use clcst::{
    io, verify, Algebra, GridSignal, GridSpec, LCTParams, Normalization, Path, WindowKind,
};

use crate::{
    ConfigArgs, KernelArgs, Method, NormArg, PathArg, ReconstructArgs, TransformArgs, VerifyArgs,
    WindowArg,
};

/// Flags on top of the defaults for `grid`, or the `--config` document alone.
pub fn build_config(args: &ConfigArgs, grid: GridSpec) -> Result<RunConfig> {
    if let Some(p) = &args.config {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let c = RunConfig::from_json(&text).with_context(|| format!("config {}", p.display()))?;
        return Ok(c);
    }
    let mut c = RunConfig::default_for(grid.n)?;
    c.grid.half_width = grid.half_width;
    c.grid.samples = grid.samples;
    if args.m_a.is_some() || args.m_b.is_some() || args.m_c.is_some() || args.m_d.is_some() {
        let a = args.m_a.unwrap_or(c.lct.a);
        let b = args.m_b.unwrap_or(c.lct.b);
        let d = args.m_d.unwrap_or(c.lct.d);
        c.lct = match args.m_c {
            Some(cc) => LCTParams::new(a, b, cc, d)?,
            None => LCTParams::from_abd(a, b, d)?,
        };
    }
    if let Some(w) = args.window {
        c.window.kind = match w {
            WindowArg::Gaussian => WindowKind::Gaussian {
                sigma: args.sigma.unwrap_or(1.0),
            },
            WindowArg::Dog => WindowKind::Dog {
                lambda: args.lambda.unwrap_or(0.5),
            },
        };
        c.window.normalization = match w {
            WindowArg::Gaussian => Normalization::UnitIntegral,
            WindowArg::Dog => Normalization::Raw,
        };
    } else if let Some(s) = args.sigma {
        c.window.kind = WindowKind::Gaussian { sigma: s };
    }
    if let Some(nm) = args.normalization {
        c.window.normalization = match nm {
            NormArg::Raw => Normalization::Raw,
            NormArg::UnitIntegral => Normalization::UnitIntegral,
        };
    }
    if let Some(count) = args.u_count {
        c.u_list = UListConfig::Symmetric { count, step: None };
    }
    if let Some(t) = &args.theta {
        c.theta_list = t.clone();
    }
    if let Some(p) = args.path {
        c.path = match p {
            PathArg::Direct => Path::Direct,
            PathArg::ThreeStep => Path::ThreeStep,
            PathArg::Spectral => Path::Spectral,
        };
    }
    c.strict = args.strict;
    c.validate()?;
    Ok(c)
}

#[derive(Serialize)]
struct Timings {
    read_s: f64,
    transform_s: f64,
    profile_s: f64,
    write_s: f64,
}

#[derive(Serialize)]
struct Admissibility {
    full: ProfileStats,
    band: ProfileStats,
}

#[derive(Serialize)]
struct TransformReport {
    input: String,
    output: String,
    path: Path,
    n: usize,
    grid: GridSpec,
    lct: LCTParams,
    slices: usize,
    flags: Vec<String>,
    timings: Timings,
    admissibility: Admissibility,
    warnings: Vec<String>,
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

pub fn transform(args: &TransformArgs) -> Result<()> {
    let t = Instant::now();
    let f = io::read_signal(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let read_s = secs(t);
    let cfg = build_config(&args.config, *f.spec())?;
    let spec = cfg.grid_spec()?;
    if spec != *f.spec() {
        bail!("configured grid {spec:?} differs from the input grid {:?}", f.spec());
    }
    let out = args
        .output
        .clone()
        .or_else(|| cfg.output.volume.clone())
        .ok_or_else(|| anyhow!("no output path: pass --output or set output.volume"))?;
    let psi = cfg.window_spec()?;
    let sampling = cfg.sampling()?;

    let t = Instant::now();
    let vol = clcst::clcst(&f, &psi, &cfg.lct, &sampling, cfg.path, cfg.strict)?;
    let transform_s = secs(t);

    let t = Instant::now();
    let prof = admissibility_profile(&psi, spec, f.algebra(), &sampling.u, &sampling.theta)?;
    let profile_s = secs(t);

    let t = Instant::now();
    io::write_volume(&out, &vol).with_context(|| format!("writing {}", out.display()))?;
    if let Some(p) = args.spectrogram.clone().or_else(|| cfg.output.spectrogram.clone()) {
        fs::write(&p, io::spectrogram_csv(&vol, args.slice.0, args.slice.1)?)?;
    }
    let write_s = secs(t);

    let mut flags = Vec::new();
    if f.is_zero() {
        flags.push("zero input".to_string());
    }
    if cfg.lct.is_fourier() {
        flags.push("degenerates to CST".to_string());
    }
    let report = TransformReport {
        input: args.input.display().to_string(),
        output: out.display().to_string(),
        path: cfg.path,
        n: spec.n,
        grid: spec,
        lct: cfg.lct,
        slices: sampling.slices(),
        flags,
        timings: Timings {
            read_s,
            transform_s,
            profile_s,
            write_s,
        },
        admissibility: Admissibility {
            full: prof.full,
            band: prof.band,
        },
        warnings: vol.meta().warnings.clone(),
    };
    let text = serde_json::to_string_pretty(&report)?;
    match args.report.clone().or_else(|| cfg.output.report.clone()) {
        Some(p) => fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<bool> {
    let suite: verify::Suite = args.suite.parse()?;
    let report = verify::run(suite)?;
    let text = serde_json::to_string_pretty(&json!({
        "suite": suite,
        "passed": report.passed(),
        "checks": report.checks,
    }))?;
    if args.json {
        println!("{text}");
    } else {
        for c in &report.checks {
            println!("{c}");
        }
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        println!("{} checks, {failed} failed", report.checks.len());
    }
    if let Some(p) = &args.output {
        fs::write(p, text + "\n")?;
    }
    Ok(report.passed())
}

fn reference_error(rec: &GridSignal, reference: Option<&FsPath>) -> Result<Option<f64>> {
    reference
        .map(|p| -> Result<f64> {
            let f = io::read_signal(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(rec.rel_l2_error(&f))
        })
        .transpose()
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<()> {
    let vol = io::read_volume(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let meta = vol.meta();
    let psi = meta
        .window
        .ok_or_else(|| anyhow!("the volume does not record an analytic window"))?;
    let summary = match args.method {
        Method::Resolution => {
            let prof = admissibility_profile(&psi, meta.grid, vol.algebra(), &meta.sampling.u, &meta.sampling.theta)?;
            let mut syn = ResolutionSynthesis::new(meta.grid, vol.algebra(), meta.lct, psi, prof.constant())?;
            syn.add(&vol)?;
            let rec = syn.finish()?;
            io::write_signal(&args.output, &rec)?;
            json!({
                "method": "resolution",
                "c_psi": prof.constant(),
                "band_variation": prof.band.rel_variation,
                "relative_l2_error": reference_error(&rec, args.reference.as_deref())?,
            })
        }
        Method::Marginal => {
            let theta = meta.sampling.theta.angles[0];
            let mut syn = MarginalSynthesis::new(meta.grid, vol.algebra(), meta.lct, theta, false)?;
            syn.add(&vol)?;
            let res = syn.finish()?;
            io::write_signal(&args.output, &res.signal)?;
            json!({
                "method": "marginal",
                "theta": theta,
                "filled_bins": res.filled_bins,
                "filled_energy_fraction": res.filled_energy_fraction,
                "relative_l2_error": reference_error(&res.signal, args.reference.as_deref())?,
            })
        }
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

pub fn kernel_dump(args: &KernelArgs) -> Result<()> {
    let cfg = build_config(&args.config, GridSpec::default_for(args.n)?)?;
    let spec = cfg.grid_spec()?;
    let alg = Algebra::for_transforms(spec.n)?;
    let psi = cfg.window_spec()?;
    let n = spec.n;
    let b = if args.b.is_empty() { vec![0.0; n] } else { args.b.clone() };
    let u = if args.u.is_empty() { vec![1.0; n] } else { args.u.clone() };
    if b.len() != n || u.len() != n {
        bail!("b and u need {n} components");
    }
    let k = clcst::clcst_kernel(&psi, &cfg.lct, spec, &alg, &b, &u, args.at_theta)?;
    io::write_signal(&args.output, &k)?;
    if args.b2.is_some() || args.u2.is_some() || args.theta2.is_some() {
        let sampling = cfg.sampling()?;
        let prof = admissibility_profile(&psi, spec, &alg, &sampling.u, &sampling.theta)?;
        let p1 = AnalysisPoint { b: b.clone(), u: u.clone(), theta: args.at_theta };
        let p2 = AnalysisPoint {
            b: args.b2.clone().unwrap_or(b),
            u: args.u2.clone().unwrap_or(u),
            theta: args.theta2.unwrap_or(args.at_theta),
        };
        let kv = reproducing_kernel(&psi, &cfg.lct, spec, &alg, prof.constant(), &p1, &p2)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "c_psi": prof.constant(),
                "value": kv.value.coeffs(),
                "norm": kv.value.norm(),
                "bound": kv.bound,
                "within_bound": kv.within_bound(),
            }))?
        );
    }
    Ok(())
}
