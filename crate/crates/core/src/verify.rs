//! Desk-scale property suites behind `clcst verify`.
//!
//! Every check carries the measured deviation and the tolerance it is held
//! to. Failures are results, not errors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Multivector};
use crate::cft::{cft_forward, cft_inverse, convolve};
use crate::clcst::covariance::{covariance_suite, CovarianceParams};
use crate::clcst::theory::{
    admissibility_profile, marginal_bsum, orthogonality_check, MarginalSynthesis,
    ResolutionSynthesis,
};
use crate::clcst::{
    clcst_direct, clcst_kernel, clcst_spectral, clcst_three_step, BSelection, Sampling, ThetaList,
    UList,
};
use crate::clct::{clct_forward, lct_convolve, LCTParams};
use crate::error::{Error, Result};
use crate::grid::{inner_product, Domain, GridSignal, GridSpec};
use crate::oracle::{cft_direct, clct_direct};
use crate::stockwell::{cst, window_family, WindowSource};
use crate::windows::WindowSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Cft,
    Clct,
    Cst,
    Clcst,
    Reconstruction,
    Example1,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Cft,
        Suite::Clct,
        Suite::Cst,
        Suite::Clcst,
        Suite::Reconstruction,
        Suite::Example1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Cft => "cft",
            Suite::Clct => "clct",
            Suite::Cst => "cst",
            Suite::Clcst => "clcst",
            Suite::Reconstruction => "reconstruction",
            Suite::Example1 => "example1",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain(&[Suite::All])
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} (deviation {:.3e}, tolerance {:.1e}",
            self.suite,
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.deviation,
            self.tolerance
        )?;
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, suite: Suite, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.checks.push(Check {
            suite,
            name: name.into(),
            deviation,
            tolerance,
            // NaN never passes
            pass: deviation <= tolerance,
            note: None,
        });
    }

    fn note(&mut self, note: String) {
        if let Some(c) = self.checks.last_mut() {
            c.note = Some(note);
        }
    }
}

pub fn run(suite: Suite) -> Result<VerifyReport> {
    let mut r = VerifyReport::default();
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::ALL.to_vec()
    } else {
        vec![suite]
    };
    for s in suites {
        match s {
            Suite::Algebra => algebra(&mut r)?,
            Suite::Cft => cft(&mut r)?,
            Suite::Clct => clct(&mut r)?,
            Suite::Cst => cst_suite(&mut r)?,
            Suite::Clcst => clcst_suite(&mut r)?,
            Suite::Reconstruction => reconstruction(&mut r)?,
            Suite::Example1 => example1(&mut r)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(r)
}

fn random_mv(alg: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Multivector {
    let c = (0..alg.blade_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(alg, c).expect("length matches")
}

fn random_signal(spec: GridSpec, alg: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Result<GridSignal> {
    let d = (0..alg.blade_count() * spec.len())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    GridSignal::from_planes(spec, Domain::Spatial, alg, d)
}

/// Multivector-valued Gaussian packet with an off-center bump per blade.
fn packet(spec: GridSpec, alg: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Result<GridSignal> {
    let bc = alg.blade_count();
    let params: Vec<(f64, Vec<f64>, f64)> = (0..bc)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                (0..spec.n).map(|_| rng.gen_range(-0.8..0.8)).collect(),
                rng.gen_range(0.6..1.4),
            )
        })
        .collect();
    GridSignal::sample_with(spec, alg, |x, out| {
        for (o, (a, c, w)) in out.iter_mut().zip(&params) {
            let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
            *o = a * (-w * r2).exp();
        }
    })
}

fn algebra(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut anti, mut sq) = (0.0f64, 0.0f64);
    for n in [2, 3] {
        let alg = Algebra::negative(n)?;
        let e = |i: usize| Multivector::basis_vector(&alg, i + 1);
        for i in 0..n {
            for j in 0..n {
                let sum = &(&e(i) * &e(j)) + &(&e(j) * &e(i));
                let want = Multivector::scalar(&alg, if i == j { -2.0 } else { 0.0 });
                anti = anti.max(sum.max_abs_diff(&want));
            }
            sq = sq.max((&e(i) * &e(i)).max_abs_diff(&Multivector::scalar(&alg, -1.0)));
        }
    }
    r.push(s, "e_i e_j + e_j e_i = −2δ_ij", anti, 1e-14);
    r.note("Cl(0,2) and Cl(0,3)".into());
    r.push(s, "e_i² = −1", sq, 1e-14);
    r.note("Cl(0,2) and Cl(0,3)".into());
    for alg in [Algebra::negative(2)?, Algebra::negative(3)?, Algebra::for_transforms(3)?] {
        let bc = alg.blade_count();
        let blade = |k: usize| Multivector::blade(&alg, k, 1.0);
        let (mut assoc, mut conj) = (0.0f64, 0.0f64);
        for a in 0..bc {
            for b in 0..bc {
                let (x, y) = (blade(a), blade(b));
                let lhs = (&x * &y).conjugate();
                let rhs = &y.conjugate() * &x.conjugate();
                conj = conj.max(lhs.max_abs_diff(&rhs));
                for c in 0..bc {
                    let z = blade(c);
                    assoc = assoc.max((&(&x * &y) * &z).max_abs_diff(&(&x * &(&y * &z))));
                }
            }
        }
        r.push(s, format!("associativity on all blade triples of {}", alg.label()), assoc, 1e-14);
        r.push(s, format!("conj(xy) = conj(y)conj(x) on blades of {}", alg.label()), conj, 1e-14);
        let mut pd = 0.0f64;
        for _ in 0..50 {
            let m = random_mv(&alg, &mut rng);
            let sp = (&m * &m.conjugate()).scalar_part();
            pd = pd.max((sp - m.norm_sq()).abs() / m.norm_sq());
        }
        r.push(s, format!("scalar_part(m·conj m) = Σ m_A² > 0 in {}", alg.label()), pd, 1e-14);
    }
    for n in [2, 3] {
        let alg = Algebra::for_transforms(n)?;
        r.push(
            s,
            format!("pseudoscalar² = −1 in {}", alg.label()),
            (alg.pseudoscalar_square() + 1.0).abs(),
            0.0,
        );
    }
    Ok(())
}

fn cft(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Cft;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2, 3] {
        let alg = Algebra::for_transforms(n)?;
        let spec = GridSpec::new(n, 3.0, 8)?;
        let (mut rt, mut pl) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let f = random_signal(spec, &alg, &mut rng)?;
            let g = random_signal(spec, &alg, &mut rng)?;
            let (ff, fg) = (cft_forward(&f)?, cft_forward(&g)?);
            rt = rt.max(cft_inverse(&ff)?.rel_max_diff(&f));
            let l = inner_product(&f, &g)?.scalar_part();
            let rr = inner_product(&ff, &fg)?.scalar_part();
            pl = pl.max((l - rr).abs() / (f.norm() * g.norm()));
        }
        r.push(s, format!("forward∘inverse round trip, n = {n}"), rt, 1e-12);
        r.push(s, format!("Plancherel scalar part, 20 random signals, n = {n}"), pl, 1e-10);

        let f = random_signal(spec, &alg, &mut rng)?;
        r.push(s, format!("FFT vs direct quadrature, n = {n}"), cft_forward(&f)?.rel_max_diff(&cft_direct(&f)?), 1e-12);

        let mut g = random_signal(spec, &alg, &mut rng)?;
        for b in 1..alg.blade_count() {
            g.plane_mut(b).iter_mut().for_each(|v| *v = 0.0);
        }
        let lhs = cft_forward(&convolve(&f, &g)?)?;
        let rhs = cft_forward(&f)?
            .product(&cft_forward(&g)?)?
            .scale((2.0 * PI).powf(n as f64 / 2.0));
        r.push(s, format!("convolution theorem, scalar g, n = {n}"), lhs.rel_max_diff(&rhs), 1e-10);
    }
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let g = GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp())?;
    let fg = cft_forward(&g)?;
    let mut w = [0.0; 2];
    let mut dev = 0.0f64;
    for j in 0..spec.len() {
        fg.coords(j, &mut w);
        let want = (-(w[0] * w[0] + w[1] * w[1]) / 2.0).exp();
        dev = dev.max((fg.plane(0)[j] - want).abs()).max(fg.plane(3)[j].abs());
    }
    r.push(s, "e^{−|x|²/2} is a fixed point", dev, 1e-8);
    Ok(())
}

fn random_lct(rng: &mut ChaCha8Rng) -> Result<LCTParams> {
    let a = rng.gen_range(-1.5..1.5);
    let b = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let d = rng.gen_range(-1.5..1.5);
    LCTParams::from_abd(a, b, d)
}

fn clct(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Clct;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::new(2, 4.0, 16)?;
    let mut dev = 0.0f64;
    for _ in 0..5 {
        let f = packet(spec, &alg, &mut rng)?;
        let m = random_lct(&mut rng)?;
        dev = dev.max(clct_forward(&f, &m)?.rel_max_diff(&clct_direct(&f, &m)?));
    }
    r.push(s, "chirp–FFT–chirp vs direct quadrature, 5 signal/M pairs", dev, 1e-10);

    let f = packet(GridSpec::default_for(2)?, &alg, &mut rng)?;
    let l = clct_forward(&f, &LCTParams::fourier())?.with_domain(Domain::Frequency);
    r.push(s, "M = (0, 1, −1, 0) reduces to the CFT", l.rel_max_diff(&cft_forward(&f)?), 1e-12);

    let spec = GridSpec::default_for(2)?;
    let mut dev = 0.0f64;
    for _ in 0..3 {
        let f = random_signal(spec, &alg, &mut rng)?;
        let g = GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] * x[0] + 0.5 * x[1] * x[1])).exp())?;
        let m = random_lct(&mut rng)?;
        let lhs = clct_forward(&lct_convolve(&f, &g, &m)?, &m)?;
        let cg = cft_forward(&g)?.with_domain(Domain::Canonical { b: m.b });
        let rhs = clct_forward(&f, &m)?
            .product(&cg)?
            .scale((2.0 * PI).powf(1.0));
        dev = dev.max(lhs.rel_max_diff(&rhs));
    }
    r.push(s, "L_M[f Θ_M g](u) = (2π)^{n/2} L_M[f](u)·F[g](u/B), 3 random M", dev, 1e-10);
    Ok(())
}

fn cst_suite(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Cst;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [2, 3] {
        let alg = Algebra::for_transforms(n)?;
        let spec = GridSpec::new(n, 4.0, if n == 2 { 32 } else { 16 })?;
        let f = packet(spec, &alg, &mut rng)?;
        let psi = WindowSpec::gaussian(n, 0.8)?;
        let smp = Sampling {
            b: BSelection::Lattice,
            u: UList::symmetric(n, spec.dw(), 2)?,
            theta: ThetaList::new(vec![0.0, 0.6])?,
        };
        let c = cst(&f, &psi, &smp)?;
        let l = clcst_three_step(&f, &psi, &LCTParams::fourier(), &smp)?;
        r.push(s, format!("CLCST at M = (0, 1, −1, 0) equals the CST, n = {n}"), l.rel_max_diff(&c), 1e-12);

        let bi = spec.len() / 2 + 3;
        let b = BSelection::Lattice.coords(&spec).swap_remove(bi);
        let u = &smp.u.points[1];
        let fam = window_family(WindowSource::Analytic(&psi), spec, &alg, &b, u, 0.6)?;
        let want = inner_product(&f, &fam)?.scale((2.0 * PI).powf(-(n as f64) / 2.0));
        let got = c.value(bi, 1, 1);
        r.push(
            s,
            format!("CST(b, u, θ) = (2π)^{{−n/2}}⟨f, ψ^θ_{{b,u}}⟩, n = {n}"),
            got.max_abs_diff(&want) / want.norm(),
            1e-12,
        );
    }
    Ok(())
}

fn clcst_suite(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Clcst;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2, 3] {
        let alg = Algebra::for_transforms(n)?;
        let spec = GridSpec::new(n, 4.0, if n == 2 { 16 } else { 8 })?;
        let f = packet(spec, &alg, &mut rng)?;
        let (mut three, mut spectral) = (0.0f64, 0.0f64);
        let windows = [
            WindowSpec::gaussian(n, 0.9)?,
            WindowSpec::gaussian(n, 0.5)?.normalize_unit_integral()?,
            WindowSpec::dog(n, 0.5)?,
        ];
        for psi in &windows {
            for _ in 0..3 {
                let m = random_lct(&mut rng)?;
                let smp = Sampling {
                    b: BSelection::Lattice,
                    u: UList::symmetric(n, spec.dw(), 1)?,
                    theta: ThetaList::default_list(),
                };
                let d = clcst_direct(&f, psi, &m, &smp)?;
                three = three.max(clcst_three_step(&f, psi, &m, &smp)?.rel_max_diff(&d));
                spectral = spectral.max(clcst_spectral(&f, psi, &m, &smp)?.rel_max_diff(&d));
            }
        }
        r.push(s, format!("direct = three-step, 3 windows × 3 M, n = {n}"), three, 1e-12);
        r.push(s, format!("direct = spectral, 3 windows × 3 M, n = {n}"), spectral, 1e-8);

        let z = GridSignal::zeros(spec, Domain::Spatial, &alg)?;
        let smp = Sampling::default_for(&spec)?;
        let m = LCTParams::from_abd(0.8, 1.3, 0.4)?;
        let v = clcst_three_step(&z, &windows[0], &m, &smp)?;
        r.push(s, format!("zero signal gives a zero volume, n = {n}"), v.max_abs(), 0.0);

        let wide = GridSpec::new(n, 6.0, if n == 2 { 32 } else { 16 })?;
        let narrow = WindowSpec::gaussian(n, 0.5)?;
        let mut dev = 0.0f64;
        for _ in 0..5 {
            let f = packet(wide, &alg, &mut rng)?;
            let g = packet(wide, &alg, &mut rng)?;
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(2..6) as f64 * wide.dw()).collect();
            let o = orthogonality_check(&f, &g, &narrow, &random_lct(&mut rng)?, &u, rng.gen_range(0.0..PI))?;
            dev = dev.max(o.scalar_deviation());
        }
        r.push(s, format!("per-(u, θ) orthogonality, scalar part, 5 draws, n = {n}"), dev, 1e-8);
    }

    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::new(2, 6.0, 32)?;
    let psi = WindowSpec::gaussian(2, 1.0)?;
    let m = LCTParams::from_abd(0.5, 1.5, 1.0)?;
    let p = CovarianceParams::default_for(&alg, &spec)?;
    let f = |x: &[f64]| {
        let g = (-(x[0] - 0.4).powi(2) - 0.8 * (x[1] + 0.2).powi(2)).exp();
        Multivector::from_coeffs(&alg, vec![g, 0.3 * g, -0.5 * g, x[0] * g]).expect("four blades")
    };
    let g = |x: &[f64]| Multivector::scalar(&alg, (-(x[0] * x[0] + x[1] * x[1]) / 1.5).exp());
    for (name, dev) in covariance_suite(&f, &g, &alg, spec, &psi, &m, &p)?.entries() {
        r.push(s, format!("covariance: {name}"), dev, 1e-10);
    }
    let zero = |_: &[f64]| Multivector::zero(&alg);
    let rep = covariance_suite(&zero, &zero, &alg, spec, &psi, &m, &p)?;
    r.push(s, "covariance identities on the zero signal", rep.max(), 0.0);
    Ok(())
}

fn reconstruction(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Reconstruction;
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::new(2, 6.0, 32)?;
    let f = GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] - 0.3).powi(2) - 0.8 * x[1] * x[1]).exp())?;
    let m = LCTParams::from_abd(1.0, 2.0, 1.0)?;

    let psi = WindowSpec::gaussian(2, 0.2)?.normalize_unit_integral()?;
    let u_all = UList::frequency_lattice(&spec)?;
    let mut syn = MarginalSynthesis::new(spec, &alg, m, 0.0, true)?;
    let mut ident = 0.0f64;
    let chirped = cft_forward(&f.chirp_multiply(m.chirp_rate()?, 1.0)?)?;
    for chunk in u_all.chunks(256) {
        let smp = Sampling {
            b: BSelection::Lattice,
            u: chunk,
            theta: ThetaList::single(0.0),
        };
        let v = clcst_three_step(&f, &psi, &m, &smp)?;
        for (ui, u) in smp.u.points.iter().enumerate().step_by(37) {
            let k: Vec<usize> = u
                .iter()
                .map(|w| ((w / spec.dw()).round() as i64 + (spec.samples / 2) as i64) as usize)
                .collect();
            let j = spec.ravel(&k);
            let want = chirped.value(j);
            ident = ident.max(marginal_bsum(&v, ui, 0)?.max_abs_diff(&want) / chirped.max_abs());
        }
        syn.add(&v)?;
    }
    let out = syn.finish()?;
    r.push(s, "b-sum equals F[f·chirp](u)", ident, 1e-6);
    r.push(s, "marginal reconstruction, relative L² error", out.signal.rel_l2_error(&f), 1e-3);
    r.note(format!("zero-component bins filled: {} ({:.2e} of energy)", out.filled_bins, out.filled_energy_fraction));

    let psi = WindowSpec::gaussian(2, 0.2)?;
    let u = UList::default_for(&spec)?;
    let theta = ThetaList::single(0.0);
    let prof = admissibility_profile(&psi, spec, &alg, &u, &theta)?;
    let mut syn = ResolutionSynthesis::new(spec, &alg, m, psi, prof.constant())?;
    let smp = Sampling {
        b: BSelection::Lattice,
        u,
        theta,
    };
    syn.add(&clcst_three_step(&f, &psi, &m, &smp)?)?;
    let rec = syn.finish()?;
    r.push(s, "resolution-of-identity reconstruction, relative L² error", rec.rel_l2_error(&f), 0.05);
    r.note(format!("admissibility band variation {:.3e}", prof.band.rel_variation));
    Ok(())
}

/// Closed form of the worked example at b = 0, θ = π/2 for the raw DOG with λ = 1/2:
/// |u₁u₂|/(2π)·[4Π√(π/α_i)e^{−u_i²/4α_i} − Π√(π/β_i)e^{−u_i²/4β_i}],
/// α_i = 1 + 2u_i² − iA/2B, β_i = 1 + u_i²/2 − iA/2B.
pub fn example1_closed_form(u: [f64; 2], m: &LCTParams) -> Complex64 {
    let rate = m.a / (2.0 * m.b);
    let gauss = |c: f64| -> Complex64 {
        u.iter()
            .map(|&ui| {
                let a = Complex64::new(1.0 + c * ui * ui, -rate);
                (Complex64::from(PI) / a).sqrt() * (-(ui * ui) / (4.0 * a)).exp()
            })
            .product()
    };
    (4.0 * gauss(2.0) - gauss(0.5)) * ((u[0] * u[1]).abs() / (2.0 * PI))
}

fn example1(r: &mut VerifyReport) -> Result<()> {
    let s = Suite::Example1;
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let f = GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] * x[0] + x[1] * x[1])).exp())?;
    let psi = WindowSpec::dog(2, 0.5)?;
    let m = LCTParams::from_abd(0.5, 2.0, 1.0)?;
    let axis = [-1.5, -0.75, 0.5, 1.0, 2.0];
    let u = UList::tensor(&[axis.to_vec(), axis.to_vec()], &[1.0, 1.0])?;
    let smp = Sampling {
        b: BSelection::Points(vec![vec![0.0, 0.0]]),
        u,
        theta: ThetaList::single(PI / 2.0),
    };
    let v = clcst_direct(&f, &psi, &m, &smp)?;
    let mut dev = 0.0f64;
    for (ui, p) in smp.u.points.iter().enumerate() {
        let want = example1_closed_form([p[0], p[1]], &m);
        let got = v.value(0, ui, 0);
        let c = got.coeffs();
        let err = Complex64::new(c[0] - want.re, c[3] - want.im).norm() + c[1].abs() + c[2].abs();
        dev = dev.max(err / want.norm());
    }
    r.push(s, "worked example vs closed form on a 5 × 5 (u₁, u₂) grid", dev, 1e-6);

    let k = clcst_kernel(&psi, &m, spec, &alg, &[0.0, 0.0], &[1.0, 2.0], PI / 2.0)?;
    let ip = inner_product(&f, &k)?.scale(1.0 / (2.0 * PI));
    let want = example1_closed_form([1.0, 2.0], &m);
    r.push(
        s,
        "kernel inner product at u = (1, 2)",
        Complex64::new(ip.coeffs()[0] - want.re, ip.coeffs()[3] - want.im).norm() / want.norm(),
        1e-6,
    );
    Ok(())
}
