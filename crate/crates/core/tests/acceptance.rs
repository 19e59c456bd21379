//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines are printed even when cargo
//! captures test output. The process fails if a criterion fails without a
//! documented reason.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ::clcst::clcst::covariance::{covariance_suite, CovarianceParams};
use ::clcst::clcst::theory::{
    admissibility_profile, marginal_bsum, orthogonality_check, reproducing_kernel, AnalysisPoint,
    MarginalSynthesis, ResolutionSynthesis,
};
use ::clcst::{
    cft_forward, cft_inverse, clcst_direct, clcst_spectral, clcst_three_step, clct_forward, convolve,
    clcst_kernel, cst, inner_product, lct_convolve, Algebra, BSelection, CLCSTVolume, Domain, GridSignal,
    GridSpec, LCTParams, Multivector, Sampling, ThetaList, UList, WindowSpec,
};

type Res<T> = Result<T, Box<dyn std::error::Error>>;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when a failure is expected and explained in the decision log.
    known_gap: Option<&'static str>,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, known_gap: None }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_signal(spec: GridSpec, alg: &Arc<Algebra>, r: &mut ChaCha8Rng) -> Res<GridSignal> {
    let d = (0..alg.blade_count() * spec.len()).map(|_| r.gen_range(-1.0..1.0)).collect();
    Ok(GridSignal::from_planes(spec, Domain::Spatial, alg, d)?)
}

/// Gaussian bump per blade, compact enough to vanish at the lattice edge.
fn packet(spec: GridSpec, alg: &Arc<Algebra>, r: &mut ChaCha8Rng) -> Res<GridSignal> {
    let params: Vec<(f64, Vec<f64>, f64)> = (0..alg.blade_count())
        .map(|_| {
            (
                r.gen_range(-1.0..1.0),
                (0..spec.n).map(|_| r.gen_range(-0.5..0.5)).collect(),
                r.gen_range(2.0..3.0),
            )
        })
        .collect();
    Ok(GridSignal::sample_with(spec, alg, |x, out| {
        for (o, (a, c, w)) in out.iter_mut().zip(&params) {
            let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
            *o = a * (-w * r2).exp();
        }
    })?)
}

fn random_lct(r: &mut ChaCha8Rng) -> Res<LCTParams> {
    let a = r.gen_range(-1.5..1.5);
    let b = r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    let d = r.gen_range(-1.5..1.5);
    Ok(LCTParams::from_abd(a, b, d)?)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Blade product sign in Cl(0,n) by counting transpositions: moving each
/// factor of `b` left past the higher factors of `a`, then e_i e_i = −1.
fn oracle_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0;
    for i in 0..usize::BITS {
        if b >> i & 1 == 1 {
            swaps += (a >> (i + 1)).count_ones();
        }
    }
    if (swaps + (a & b).count_ones()) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// c·e^{e₁₂ φ} in Cl(0,2), coefficients ordered (1, e₁, e₂, e₁₂), worked out by hand.
fn right_phase_cl02(c: [f64; 4], phi: f64) -> [f64; 4] {
    let (s, k) = phi.sin_cos();
    [
        c[0] * k - c[3] * s,
        c[1] * k + c[2] * s,
        c[2] * k - c[1] * s,
        c[0] * s + c[3] * k,
    ]
}

fn coeffs4(f: &GridSignal, j: usize) -> [f64; 4] {
    [f.plane(0)[j], f.plane(1)[j], f.plane(2)[j], f.plane(3)[j]]
}

fn lattice_coords(spec: &GridSpec, j: usize) -> Vec<f64> {
    let mut idx = vec![0; spec.n];
    spec.unravel(j, &mut idx);
    idx.iter().map(|&k| spec.x(k)).collect()
}

// 1 ------------------------------------------------------------------------

fn algebra_axioms() -> Res<Outcome> {
    let mut worst = 0.0f64;
    let mut r = rng(11);
    for n in [2usize, 3] {
        let alg = Algebra::negative(n)?;
        let bc = alg.blade_count();
        for a in 0..bc {
            for b in 0..bc {
                let (s, k) = alg.product(a, b);
                worst = worst.max((s - oracle_sign(a, b)).abs());
                worst = worst.max(if k == a ^ b { 0.0 } else { 1.0 });
            }
        }
        let e = |i: usize| Multivector::basis_vector(&alg, i + 1);
        for i in 0..n {
            for j in 0..n {
                let sum = &(&e(i) * &e(j)) + &(&e(j) * &e(i));
                let want = Multivector::scalar(&alg, if i == j { -2.0 } else { 0.0 });
                worst = worst.max(sum.max_abs_diff(&want));
            }
        }
        let blade = |k: usize| Multivector::blade(&alg, k, 1.0);
        for a in 0..bc {
            worst = worst.max(((&blade(a) * &blade(a).conjugate()).scalar_part() - 1.0).abs());
            for b in 0..bc {
                let (x, y) = (blade(a), blade(b));
                worst = worst.max((&x * &y).conjugate().max_abs_diff(&(&y.conjugate() * &x.conjugate())));
                for c in 0..bc {
                    let z = blade(c);
                    worst = worst.max((&(&x * &y) * &z).max_abs_diff(&(&x * &(&y * &z))));
                }
            }
        }
        for _ in 0..100 {
            let c: Vec<f64> = (0..bc).map(|_| r.gen_range(-1.0..1.0)).collect();
            let sq: f64 = c.iter().map(|v| v * v).sum();
            let m = Multivector::from_coeffs(&alg, c)?;
            let sp = (&m * &m.conjugate()).scalar_part();
            if !(sp > 0.0) {
                worst = f64::INFINITY;
            }
            worst = worst.max((sp - sq).abs() / sq);
        }
    }
    Ok(Outcome::check(
        worst <= 1e-14,
        format!("max deviation {worst:.1e} over sign table, anticommutation, e_i², associativity, conj, positivity; Cl(0,2) and Cl(0,3)"),
    ))
}

// 2 ------------------------------------------------------------------------

fn cft_unitarity() -> Res<Outcome> {
    let mut r = rng(12);
    let (mut rt, mut pl, mut fixed) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2usize, 3] {
        let alg = Algebra::for_transforms(n)?;
        let spec = GridSpec::default_for(n)?;
        for _ in 0..20 {
            let f = random_signal(spec, &alg, &mut r)?;
            let g = random_signal(spec, &alg, &mut r)?;
            let (ff, fg) = (cft_forward(&f)?, cft_forward(&g)?);
            rt = rt.max(cft_inverse(&ff)?.rel_max_diff(&f));
            let lhs = inner_product(&f, &g)?.scalar_part();
            let rhs = inner_product(&ff, &fg)?.scalar_part();
            pl = pl.max((lhs - rhs).abs() / (f.norm() * g.norm()));
        }
    }
    // the fixed point is checked where the lattice holds the Gaussian to rounding
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let g = GridSignal::sample_scalar(spec, &alg, |x| (-dot(x, x) / 2.0).exp())?;
    let fg = cft_forward(&g)?;
    let mut w = [0.0; 2];
    for j in 0..spec.len() {
        fg.coords(j, &mut w);
        let want = (-dot(&w, &w) / 2.0).exp();
        fixed = fixed.max((fg.plane(0)[j] - want).abs()).max(fg.plane(3)[j].abs());
    }
    Ok(Outcome::check(
        rt <= 1e-12 && pl <= 1e-10 && fixed <= 1e-8,
        format!("round trip {rt:.1e}, Plancherel {pl:.1e} (20 signals, n = 2, 3), Gaussian fixed point {fixed:.1e}"),
    ))
}

// 3 ------------------------------------------------------------------------

fn convolution_theorems() -> Res<Outcome> {
    let mut r = rng(13);
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let n = 2;

    // periodic convolution against a brute-force sum at a few points
    let f = random_signal(spec, &alg, &mut r)?;
    let g = GridSignal::sample_scalar(spec, &alg, |x| (-(x[0] * x[0] + 0.5 * x[1] * x[1])).exp())?;
    let c = convolve(&f, &g)?;
    let len = spec.samples;
    let half = len / 2;
    let mut brute = 0.0f64;
    for &(j0, j1) in &[(3usize, 5usize), (31, 40), (60, 2)] {
        let mut acc = [0.0; 4];
        for t0 in 0..len {
            for t1 in 0..len {
                let d0 = (j0 + len + half - t0) % len;
                let d1 = (j1 + len + half - t1) % len;
                let gv = g.plane(0)[d0 * len + d1];
                for (k, a) in acc.iter_mut().enumerate() {
                    *a += f.plane(k)[t0 * len + t1] * gv;
                }
            }
        }
        let j = j0 * len + j1;
        for (k, a) in acc.iter().enumerate() {
            brute = brute.max((a * spec.dx().powi(2) - c.plane(k)[j]).abs() / c.max_abs());
        }
    }

    let lhs = cft_forward(&c)?;
    let rhs = cft_forward(&f)?.product(&cft_forward(&g)?)?.scale((2.0 * PI).powf(n as f64 / 2.0));
    let eq17 = lhs.rel_max_diff(&rhs);

    let mut eq19 = 0.0f64;
    for _ in 0..3 {
        let f = random_signal(spec, &alg, &mut r)?;
        let m = random_lct(&mut r)?;
        let lhs = clct_forward(&lct_convolve(&f, &g, &m)?, &m)?;
        let cg = cft_forward(&g)?.with_domain(Domain::Canonical { b: m.b });
        let rhs = clct_forward(&f, &m)?.product(&cg)?.scale((2.0 * PI).powf(n as f64 / 2.0));
        eq19 = eq19.max(lhs.rel_max_diff(&rhs));
    }
    Ok(Outcome::check(
        brute <= 1e-12 && eq17 <= 1e-10 && eq19 <= 1e-10,
        format!("convolution vs brute sum {brute:.1e}; F[f*g] = (2π)^(n/2) F[f]F[g] {eq17:.1e}; LCT convolution, 3 random M {eq19:.1e} (with the (2π)^(n/2) factor)"),
    ))
}

// 4 ------------------------------------------------------------------------

/// Direct quadrature of the canonical transform on u_k = B·w_k, Cl(0,2).
fn clct_quadrature(f: &GridSignal, m: &LCTParams) -> Vec<[f64; 4]> {
    let spec = *f.spec();
    // C_M = 1/√((2π)^n B), real root for B < 0
    let cm = 1.0 / ((2.0 * PI).powi(2) * m.b.abs()).sqrt();
    let dx2 = spec.dx().powi(2);
    let xs: Vec<Vec<f64>> = (0..spec.len()).map(|j| lattice_coords(&spec, j)).collect();
    let mut idx = [0; 2];
    (0..spec.len())
        .map(|k| {
            spec.unravel(k, &mut idx);
            let u = [m.b * spec.w(idx[0]), m.b * spec.w(idx[1])];
            let mut acc = [0.0; 4];
            for (j, x) in xs.iter().enumerate() {
                let ph = (m.a * dot(x, x) - 2.0 * dot(x, &u) + m.d * dot(&u, &u)) / (2.0 * m.b);
                let t = right_phase_cl02(coeffs4(f, j), ph);
                acc.iter_mut().zip(t).for_each(|(a, v)| *a += v);
            }
            acc.map(|v| v * cm * dx2)
        })
        .collect()
}

fn clct_consistency() -> Res<Outcome> {
    let mut r = rng(14);
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let mut dev = 0.0f64;
    for _ in 0..5 {
        let f = random_signal(spec, &alg, &mut r)?;
        let m = random_lct(&mut r)?;
        let fast = clct_forward(&f, &m)?;
        let slow = clct_quadrature(&f, &m);
        let scale = slow.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        let diff = slow
            .iter()
            .enumerate()
            .flat_map(|(j, s)| (0..4).map(move |k| (j, k, s[k])))
            .fold(0.0f64, |a, (j, k, v)| a.max((fast.plane(k)[j] - v).abs()));
        dev = dev.max(rel(diff, scale));
    }
    let f = random_signal(spec, &alg, &mut r)?;
    let l = clct_forward(&f, &LCTParams::fourier())?.with_domain(Domain::Frequency);
    let red = l.rel_max_diff(&cft_forward(&f)?);
    Ok(Outcome::check(
        dev <= 1e-10 && red <= 1e-12,
        format!("chirp-FFT-chirp vs direct quadrature {dev:.1e} (5 signal/M pairs); Fourier reduction {red:.1e}"),
    ))
}

// 5 ------------------------------------------------------------------------

/// One CLCST value by direct summation, scalar radial window, Cl(0,2).
fn clcst_point(f: &GridSignal, psi: &WindowSpec, m: &LCTParams, b: &[f64], u: &[f64], theta: f64) -> [f64; 4] {
    let spec = *f.spec();
    let rate = m.a / (2.0 * m.b);
    let (s, c) = theta.sin_cos();
    let det = (u[0] * u[1]).abs();
    let mut acc = [0.0; 4];
    for j in 0..spec.len() {
        let x = lattice_coords(&spec, j);
        let y0 = u[0] * (x[0] - b[0]);
        let y1 = u[1] * (x[1] - b[1]);
        let w = psi.eval(&[c * y0 - s * y1, s * y0 + c * y1]);
        let ph = -(dot(&x, u) + rate * dot(b, b) - rate * dot(&x, &x));
        let t = right_phase_cl02(coeffs4(f, j).map(|v| v * w), ph);
        acc.iter_mut().zip(t).for_each(|(a, v)| *a += v);
    }
    acc.map(|v| v * det * spec.dx().powi(2) / (2.0 * PI))
}

fn path_equivalence() -> Res<Outcome> {
    let mut r = rng(15);
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let f = packet(spec, &alg, &mut r)?;
    let windows = [
        WindowSpec::gaussian(2, 1.0)?,
        WindowSpec::gaussian(2, 0.5)?.normalize_unit_integral()?,
        WindowSpec::dog(2, 0.5)?,
    ];
    let ms = [LCTParams::fourier(), random_lct(&mut r)?, LCTParams::from_abd(0.7, -1.3, 1.1)?];
    // b near the packet so the volume values are not all negligible
    let h = spec.samples / 2;
    let bidx: Vec<usize> = (0..4)
        .map(|_| spec.ravel(&[r.gen_range(h - 6..h + 6), r.gen_range(h - 6..h + 6)]))
        .collect();
    let smp = Sampling {
        b: BSelection::Indices(bidx.clone()),
        u: UList::default_for(&spec)?,
        theta: ThetaList::default_list(),
    };
    let (mut three, mut spectral, mut vs_cst, mut spot) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for psi in &windows {
        for m in &ms {
            let d = clcst_direct(&f, psi, m, &smp)?;
            three = three.max(clcst_three_step(&f, psi, m, &smp)?.rel_max_diff(&d));
            spectral = spectral.max(clcst_spectral(&f, psi, m, &smp)?.rel_max_diff(&d));
            if m.is_fourier() {
                vs_cst = vs_cst.max(cst(&f, psi, &smp)?.rel_max_diff(&d));
            }
            // the library direct sum against a hand-rolled one at a few points
            for (bi, ui, ti) in [(0, 0, 0), (2, 517, 1), (3, 1023, 2)] {
                let b = lattice_coords(&spec, bidx[bi]);
                let want = clcst_point(&f, psi, m, &b, &smp.u.points[ui], smp.theta.angles[ti]);
                let got = d.value(bi, ui, ti);
                let diff = (0..4).fold(0.0f64, |a, k| a.max((got.coeffs()[k] - want[k]).abs()));
                spot = spot.max(rel(diff, d.max_abs()));
            }
        }
    }
    Ok(Outcome::check(
        three <= 1e-12 && spectral <= 1e-8 && vs_cst <= 1e-12 && spot <= 1e-12,
        format!(
            "3 windows × 3 M × {} (u, θ) × 4 b: three-step {three:.1e}, spectral {spectral:.1e}, CST {vs_cst:.1e}; direct vs hand sum {spot:.1e}",
            smp.slices()
        ),
    ))
}

// 6 ------------------------------------------------------------------------

fn volume_pairs(a: &CLCSTVolume, b: &CLCSTVolume, factor: f64) -> f64 {
    let diff = a
        .values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - factor * y).abs()));
    rel(diff, a.max_abs())
}

/// Both sides of the dilation and parity identities with no extra factors.
fn dilation_and_parity(n: usize, spec: GridSpec, m: &LCTParams) -> Res<(f64, f64, f64, f64)> {
    let alg = Algebra::for_transforms(n)?;
    let psi = WindowSpec::gaussian(n, 1.0)?;
    let f = |x: &[f64]| -> f64 {
        let r2: f64 = x.iter().enumerate().map(|(i, v)| (v - 0.2 * i as f64).powi(2)).sum();
        (-2.0 * r2).exp() * (1.0 + 0.3 * x[0])
    };
    let lam = 2.0;
    let dw = spec.dw();
    let u = UList::new(
        vec![(0..n).map(|i| dw * (1.0 + i as f64)).collect(), (0..n).map(|i| -dw * (3.0 - i as f64)).collect()],
        1.0,
    )?;
    let bidx: Vec<usize> = (0..spec.len()).step_by(spec.len() / 13).collect();
    let smp = Sampling {
        b: BSelection::Indices(bidx.clone()),
        u: u.clone(),
        theta: ThetaList::new(vec![0.0, 0.9])?,
    };

    let squeezed = GridSignal::sample_scalar(spec, &alg, |x| f(&x.iter().map(|v| lam * v).collect::<Vec<_>>()))?;
    let wide = GridSpec::new(n, lam * spec.half_width, spec.samples)?;
    let fw = GridSignal::sample_scalar(wide, &alg, f)?;
    let mp = LCTParams::from_abd(m.a, lam * lam * m.b, m.d)?;
    let lhs = clcst_three_step(&squeezed, &psi, m, &smp)?;
    let scaled = UList::new(u.points.iter().map(|p| p.iter().map(|v| v / lam).collect()).collect(), 1.0)?;
    let rhs = clcst_three_step(&fw, &psi, &mp, &Sampling { u: scaled, ..smp.clone() })?;
    let dil = volume_pairs(&lhs, &rhs, 1.0);
    let dil_printed = volume_pairs(&lhs, &rhs, lam.powi(-(n as i32)));

    let flipped = GridSignal::sample_scalar(spec, &alg, |x| f(&x.iter().map(|v| -v).collect::<Vec<_>>()))?;
    let fs = GridSignal::sample_scalar(spec, &alg, f)?;
    let mut idx = vec![0; n];
    let mirrored: Vec<usize> = bidx
        .iter()
        .map(|&j| {
            spec.unravel(j, &mut idx);
            idx.iter_mut().for_each(|k| *k = (spec.samples - *k) % spec.samples);
            spec.ravel(&idx)
        })
        .collect();
    let neg = UList::new(u.points.iter().map(|p| p.iter().map(|v| -v).collect()).collect(), 1.0)?;
    // index 0 has no mirror image on the lattice; skip it if drawn
    let keep: Vec<usize> = (0..bidx.len())
        .filter(|&i| {
            spec.unravel(bidx[i], &mut idx);
            idx.iter().all(|&k| k != 0)
        })
        .collect();
    let lhs = clcst_three_step(
        &flipped,
        &psi,
        m,
        &Sampling { b: BSelection::Indices(keep.iter().map(|&i| bidx[i]).collect()), ..smp.clone() },
    )?;
    let rhs = clcst_three_step(
        &fs,
        &psi,
        m,
        &Sampling {
            b: BSelection::Indices(keep.iter().map(|&i| mirrored[i]).collect()),
            u: neg,
            theta: smp.theta.clone(),
        },
    )?;
    let par = volume_pairs(&lhs, &rhs, 1.0);
    let par_printed = volume_pairs(&lhs, &rhs, (-1.0f64).powi(n as i32));
    Ok((dil, dil_printed, par, par_printed))
}

fn covariance() -> Res<Outcome> {
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let psi = WindowSpec::gaussian(2, 1.0)?;
    let m = LCTParams::from_abd(0.5, 1.5, 1.0)?;
    let p = CovarianceParams::default_for(&alg, &spec)?;
    let f = |x: &[f64]| {
        let g = (-(x[0] - 0.4).powi(2) - 0.8 * (x[1] + 0.2).powi(2)).exp();
        Multivector::from_coeffs(&alg, vec![g, 0.3 * g, -0.5 * g, x[0] * g]).expect("four blades")
    };
    let g = |x: &[f64]| Multivector::scalar(&alg, (-dot(x, x) / 1.5).exp());
    let rep = covariance_suite(&f, &g, &alg, spec, &psi, &m, &p)?;
    let listed: Vec<String> = rep.entries().iter().map(|(k, v)| format!("{k} {v:.1e}")).collect();

    let (d2, d2p, p2, p2p) = dilation_and_parity(2, spec, &m)?;
    let (d3, d3p, p3, p3p) = dilation_and_parity(3, GridSpec::default_for(3)?, &m)?;
    let corrected = rep.max().max(d2).max(p2).max(d3).max(p3);
    let printed = d2p.max(p2p).max(d3p).max(p3p);
    let detail = format!(
        "n = 2: {}; n = 3 dilation {d3:.1e}, parity {p3:.1e}. As printed (λ^-n on dilation, (-1)^n on parity): n = 2 dilation {d2p:.2}, parity {p2p:.1e}; n = 3 dilation {d3p:.2}, parity {p3p:.2}",
        listed.join(", ")
    );
    let pass = printed <= 1e-10 && corrected <= 1e-10;
    Ok(Outcome {
        pass,
        detail,
        known_gap: (!pass && corrected <= 1e-10)
            .then_some("the printed λ^-n and (-1)^n factors do not hold for the transform as defined; the factor-free identities pass"),
    })
}

// 7 ------------------------------------------------------------------------

fn orthogonality() -> Res<Outcome> {
    let mut r = rng(17);
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let alg = Algebra::for_transforms(n)?;
        let spec = GridSpec::default_for(n)?;
        let psi = WindowSpec::gaussian(n, 0.5)?;
        let mut dev = 0.0f64;
        for _ in 0..10 {
            let f = packet(spec, &alg, &mut r)?;
            let g = packet(spec, &alg, &mut r)?;
            let u: Vec<f64> = (0..n).map(|_| r.gen_range(2..6) as f64 * spec.dw() * if r.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let o = orthogonality_check(&f, &g, &psi, &random_lct(&mut r)?, &u, r.gen_range(0.0..PI))?;
            dev = dev.max(o.scalar_deviation());
        }
        worst = worst.max(dev);
        out.push(format!("n = {n}: {dev:.1e}"));
    }
    Ok(Outcome::check(worst <= 1e-8, format!("scalar-part agreement over 10 draws, {}", out.join(", "))))
}

// 8 ------------------------------------------------------------------------

fn gaussian_signal(spec: GridSpec, alg: &Arc<Algebra>) -> Res<GridSignal> {
    Ok(GridSignal::sample_scalar(spec, alg, |x| (-(x[0] - 0.3).powi(2) - 0.8 * x[1] * x[1]).exp())?)
}

fn marginal() -> Res<Outcome> {
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let f = gaussian_signal(spec, &alg)?;
    let m = LCTParams::from_abd(1.0, 2.0, 1.0)?;
    let psi = WindowSpec::gaussian(2, 0.2)?.normalize_unit_integral()?;
    let chirped = cft_forward(&f.chirp_multiply(m.chirp_rate()?, 1.0)?)?;
    let mut syn = MarginalSynthesis::new(spec, &alg, m, 0.0, true)?;
    let mut ident = 0.0f64;
    for chunk in UList::frequency_lattice(&spec)?.chunks(512) {
        let smp = Sampling { b: BSelection::Lattice, u: chunk, theta: ThetaList::single(0.0) };
        let v = clcst_three_step(&f, &psi, &m, &smp)?;
        for (ui, u) in smp.u.points.iter().enumerate().step_by(29) {
            let k: Vec<usize> = u.iter().map(|w| ((w / spec.dw()).round() as i64 + (spec.samples / 2) as i64) as usize).collect();
            ident = ident.max(marginal_bsum(&v, ui, 0)?.max_abs_diff(&chirped.value(spec.ravel(&k))) / chirped.max_abs());
        }
        syn.add(&v)?;
    }
    let res = syn.finish()?;
    let err = res.signal.rel_l2_error(&f);
    Ok(Outcome::check(
        err < 1e-3 && ident <= 1e-6,
        format!(
            "relative L² error {err:.2e}; b-sum vs F[f·chirp] {ident:.1e}; {} zero-component bins filled from the support constraint",
            res.filled_bins
        ),
    ))
}

// 9 ------------------------------------------------------------------------

fn resolution() -> Res<Outcome> {
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let f = gaussian_signal(spec, &alg)?;
    let m = LCTParams::from_abd(1.0, 2.0, 1.0)?;
    let psi = WindowSpec::gaussian(2, 0.2)?;
    let u = UList::default_for(&spec)?;
    let theta = ThetaList::single(0.0);
    let prof = admissibility_profile(&psi, spec, &alg, &u, &theta)?;
    let mut syn = ResolutionSynthesis::new(spec, &alg, m, psi, prof.constant())?;
    for chunk in u.chunks(256) {
        let smp = Sampling { b: BSelection::Lattice, u: chunk, theta: theta.clone() };
        syn.add(&clcst_three_step(&f, &psi, &m, &smp)?)?;
    }
    let err = syn.finish()?.rel_l2_error(&f);
    Ok(Outcome::check(
        err < 0.05,
        format!(
            "relative L² error {err:.2e} with {} u points; admissibility band variation {:.2e}, full-lattice variation {:.2e}",
            u.len(),
            prof.band.rel_variation,
            prof.full.rel_variation
        ),
    ))
}

// 10 -----------------------------------------------------------------------

fn reproducing() -> Res<Outcome> {
    let mut r = rng(20);
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let psi = WindowSpec::gaussian(2, 0.5)?;
    let m = LCTParams::from_abd(0.8, 1.2, 0.5)?;
    let smp = Sampling::default_for(&spec)?;
    let c = admissibility_profile(&psi, spec, &alg, &smp.u, &smp.theta)?.constant();
    let draw = |r: &mut ChaCha8Rng| AnalysisPoint {
        b: lattice_coords(&spec, r.gen_range(0..spec.len())),
        u: smp.u.points[r.gen_range(0..smp.u.len())].clone(),
        theta: smp.theta.angles[r.gen_range(0..smp.theta.len())],
    };
    // Cauchy-Schwarz on the lattice: |K| ≤ ‖ψ_{p1}‖‖ψ_{p2}‖/C with discrete norms
    let knorm = |p: &AnalysisPoint| -> Res<f64> {
        let k = clcst_kernel(&psi, &m, spec, &alg, &p.b, &p.u, p.theta)?;
        Ok(inner_product(&k, &k)?.scalar_part().sqrt())
    };
    let cs_bound = |p1: &AnalysisPoint, p2: &AnalysisPoint| -> Res<f64> { Ok(knorm(p1)? * knorm(p2)? / c) };
    let mut violations = 0;
    let mut ratio = 0.0f64;
    let mut cs = 0.0f64;
    for _ in 0..100 {
        let (p1, p2) = (draw(&mut r), draw(&mut r));
        let k = reproducing_kernel(&psi, &m, spec, &alg, c, &p1, &p2)?;
        ratio = ratio.max(k.value.norm() / k.bound);
        cs = cs.max(k.value.norm() / cs_bound(&p1, &p2)?);
        if !k.within_bound() {
            violations += 1;
        }
    }

    // far pairs: same (u, θ), |A_u(b − b′)| ≥ 8σ
    let sigma = 0.5;
    let mut far = 0.0f64;
    let mut count = 0;
    while count < 20 {
        let p1 = draw(&mut r);
        if p1.u.iter().any(|v| v.abs() < 4.0 * spec.dw()) {
            continue;
        }
        let p2 = AnalysisPoint { b: lattice_coords(&spec, r.gen_range(0..spec.len())), ..p1.clone() };
        let sep: f64 = p1.b.iter().zip(&p2.b).zip(&p1.u).map(|((a, b), u)| ((a - b) * u).powi(2)).sum::<f64>().sqrt();
        let inside = p1.b.iter().chain(&p2.b).all(|v| v.abs() < 0.75 * spec.half_width);
        if sep < 8.0 * sigma || !inside {
            continue;
        }
        let k = reproducing_kernel(&psi, &m, spec, &alg, c, &p1, &p2)?;
        far = far.max(k.value.norm() / k.bound);
        count += 1;
    }

    // coincident points are where the printed bound is weakest
    let mut self_excess = 0.0f64;
    for _ in 0..20 {
        let p = draw(&mut r);
        let k = reproducing_kernel(&psi, &m, spec, &alg, c, &p, &p)?;
        self_excess = self_excess.max(k.value.norm() / k.bound);
        cs = cs.max(k.value.norm() / cs_bound(&p, &p)?);
    }
    let pass = violations == 0 && far < 1e-8;
    Ok(Outcome {
        pass,
        detail: format!(
            "{violations}/100 random pairs exceed the bound (max |K|/bound {ratio:.2e}); far pairs max |K|/bound {far:.1e}; coincident points reach |K|/bound {self_excess:.2e}; against the Cauchy-Schwarz bound ‖ψ_p‖‖ψ_p'‖/C max ratio {cs:.3}"
        ),
        known_gap: (!pass && far < 1e-8 && cs <= 1.0 + 1e-12)
            .then_some("the printed bound scales as |det A_u|^((1-n)/2) and fails for nearby points at large |u|; the Cauchy-Schwarz bound holds"),
    })
}

// 11 -----------------------------------------------------------------------

/// ∫exp(−αx² − iβx)dx = √(π/α)·exp(−β²/(4α)), with β = u_i and
/// α = c·u_i² + 1 − iA/(2B) for the two Gaussians of the DOG.
fn example1_oracle(u: [f64; 2], m: &LCTParams) -> C64 {
    let rate = m.a / (2.0 * m.b);
    let gauss = |c: f64| -> C64 {
        u.iter()
            .map(|&ui| {
                let alpha = C64::new(1.0 + c * ui * ui, -rate);
                (C64::new(PI, 0.0) / alpha).sqrt() * (-(ui * ui) / (4.0 * alpha)).exp()
            })
            .product()
    };
    // λ = 1/2: ψ(y) = 4e^{−2|y|²} − e^{−|y|²/2}, y = A_u x
    (gauss(2.0) * 4.0 - gauss(0.5)) * ((u[0] * u[1]).abs() / (2.0 * PI))
}

fn example1() -> Res<Outcome> {
    let alg = Algebra::for_transforms(2)?;
    let spec = GridSpec::default_for(2)?;
    let f = GridSignal::sample_scalar(spec, &alg, |x| (-dot(x, x)).exp())?;
    let psi = WindowSpec::dog(2, 0.5)?;
    let axis = vec![-1.5, -0.75, 0.5, 1.0, 2.0];
    let u = UList::tensor(&[axis.clone(), axis], &[1.0, 1.0])?;
    let smp = Sampling { b: BSelection::Points(vec![vec![0.0, 0.0]]), u, theta: ThetaList::single(PI / 2.0) };
    let mut worst = 0.0f64;
    for m in [LCTParams::from_abd(0.5, 2.0, 1.0)?, LCTParams::from_abd(-1.2, -0.8, 0.3)?] {
        let v = clcst_direct(&f, &psi, &m, &smp)?;
        for (ui, p) in smp.u.points.iter().enumerate() {
            let want = example1_oracle([p[0], p[1]], &m);
            let c = v.value(0, ui, 0).into_coeffs();
            let err = (C64::new(c[0], c[3]) - want).norm() + c[1].abs() + c[2].abs();
            worst = worst.max(err / want.norm());
        }
    }
    Ok(Outcome::check(worst <= 1e-6, format!("max relative deviation {worst:.1e} over 5×5 u points, M = (0.5, 2, ·, 1) and (−1.2, −0.8, ·, 0.3)")))
}

// 12 -----------------------------------------------------------------------

fn fastest<T>(reps: usize, mut f: impl FnMut() -> Res<T>) -> Res<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let t = Instant::now();
        f()?;
        best = best.min(t.elapsed().as_secs_f64());
    }
    Ok(best)
}

fn performance() -> Res<Outcome> {
    let alg = Algebra::for_transforms(2)?;
    let psi = WindowSpec::gaussian(2, 0.5)?;
    let m = LCTParams::from_abd(1.0, 2.0, 1.0)?;
    let run = |samples: usize| -> Res<(GridSignal, Sampling)> {
        let spec = GridSpec::new(2, 6.0, samples)?;
        let f = gaussian_signal(spec, &alg)?;
        let smp = Sampling { b: BSelection::Lattice, u: UList::single(&[3.0 * spec.dw(), -2.0 * spec.dw()])?, theta: ThetaList::single(0.4) };
        Ok((f, smp))
    };
    let (f64_, s64) = run(64)?;
    let (f128, s128) = run(128)?;
    let t64 = fastest(7, || Ok(clcst_three_step(&f64_, &psi, &m, &s64)?))?;
    let t128 = fastest(7, || Ok(clcst_three_step(&f128, &psi, &m, &s128)?))?;
    let direct = fastest(1, || Ok(clcst_direct(&f128, &psi, &m, &s128)?))?;
    let speedup = direct / t128;
    let growth = t128 / t64;
    Ok(Outcome::check(
        speedup >= 5.0 && growth <= 6.0,
        format!("N = 128: three-step {:.2} ms, direct {:.2} s, speedup {speedup:.0}×; N = 64 → 128 growth {growth:.2}×", t128 * 1e3, direct),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Res<Outcome>); 12] = [
        ("algebra axioms", algebra_axioms),
        ("CFT unitarity", cft_unitarity),
        ("convolution theorems", convolution_theorems),
        ("CLCT consistency", clct_consistency),
        ("CLCST path equivalence", path_equivalence),
        ("covariance suite", covariance),
        ("orthogonality", orthogonality),
        ("marginal reconstruction", marginal),
        ("resolution-of-identity reconstruction", resolution),
        ("reproducing kernel", reproducing),
        ("worked example closed form", example1),
        ("performance sanity", performance),
    ];
    // ACCEPTANCE_ONLY=4,6 runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut unexplained = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let t = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome::check(false, format!("error: {e}")));
        let secs = t.elapsed().as_secs_f64();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}  {name} [{secs:.1} s]: {}", i + 1, outcome.detail);
        if !outcome.pass {
            match outcome.known_gap {
                Some(why) => println!("             known gap: {why}"),
                None => unexplained.push(i + 1),
            }
        }
    }
    if !unexplained.is_empty() {
        eprintln!("unexplained failures: {unexplained:?}");
        std::process::exit(1);
    }
}
