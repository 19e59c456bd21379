//! Real Clifford algebras with a diagonal metric.
//!
//! Blades are bitmasks: bit `i` set means factor `e_{i+1}` is present, factors
//! in ascending order. Coefficient `k` of a [`Multivector`] belongs to blade `k`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of the basis-vector squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Cl(0,n): e_i² = −1.
    Negative,
    /// Cl(n,0): e_i² = +1.
    Positive,
}

impl Metric {
    fn square(self) -> f64 {
        match self {
            Metric::Negative => -1.0,
            Metric::Positive => 1.0,
        }
    }
}

/// One orbit of right multiplication by the pseudoscalar: `e_lo · I = sign · e_hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoPair {
    pub lo: usize,
    pub hi: usize,
    pub sign: f64,
    /// Whether `e_lo` (and `e_hi`) commute with I.
    pub commutes: bool,
}

/// Precomputed product table for one algebra.
#[derive(Debug)]
pub struct Algebra {
    n: usize,
    metric: Metric,
    blade_count: usize,
    signs: Vec<f64>,
    conj: Vec<f64>,
    pairs: Vec<PseudoPair>,
}

fn reorder_sign(a: usize, b: usize) -> f64 {
    // transpositions needed to sort the concatenated factor list
    let mut swaps = 0u32;
    let mut a = a >> 1;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Algebra {
    pub const MAX_DIM: usize = 8;

    pub fn new(n: usize, metric: Metric) -> Result<Arc<Self>> {
        if n == 0 || n > Self::MAX_DIM {
            return Err(Error::UnsupportedDimension {
                n,
                reason: format!("supported range is 1..={}", Self::MAX_DIM),
            });
        }
        let bc = 1usize << n;
        let sq = metric.square();
        let mut signs = vec![0.0; bc * bc];
        for a in 0..bc {
            for b in 0..bc {
                let rep = (a & b).count_ones() as i32;
                signs[a * bc + b] = reorder_sign(a, b) * sq.powi(rep);
            }
        }
        let conj = (0..bc)
            .map(|k| {
                let r = k.count_ones() as i64;
                let e = match metric {
                    Metric::Negative => r * (r + 1) / 2,
                    Metric::Positive => r * (r - 1) / 2,
                };
                if e % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        let mut alg = Algebra {
            n,
            metric,
            blade_count: bc,
            signs,
            conj,
            pairs: Vec::new(),
        };
        let full = bc - 1;
        alg.pairs = (0..bc)
            .filter(|&k| k < (k ^ full))
            .map(|lo| PseudoPair {
                lo,
                hi: lo ^ full,
                sign: alg.sign(lo, full),
                commutes: alg.sign(lo, full) == alg.sign(full, lo),
            })
            .collect();
        Ok(Arc::new(alg))
    }

    /// Cl(0,n), the algebra named by the e_i e_j + e_j e_i = −2δ_ij rule.
    pub fn negative(n: usize) -> Result<Arc<Self>> {
        Self::new(n, Metric::Negative)
    }

    /// The algebra used by the transforms in dimension `n`: one whose
    /// pseudoscalar squares to −1. Cl(0,n) is preferred, Cl(n,0) is the
    /// fallback (n = 3).
    pub fn for_transforms(n: usize) -> Result<Arc<Self>> {
        let a = Self::new(n, Metric::Negative)?;
        if a.pseudoscalar_square() < 0.0 {
            return Ok(a);
        }
        let b = Self::new(n, Metric::Positive)?;
        if b.pseudoscalar_square() < 0.0 {
            return Ok(b);
        }
        Err(Error::UnsupportedDimension {
            n,
            reason: "the pseudoscalar squares to +1 in both metrics".into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn blade_count(&self) -> usize {
        self.blade_count
    }

    pub fn pseudoscalar_blade(&self) -> usize {
        self.blade_count - 1
    }

    /// Sign of `e_a e_b`; the resulting blade is `a ^ b`.
    #[inline]
    pub fn sign(&self, a: usize, b: usize) -> f64 {
        self.signs[a * self.blade_count + b]
    }

    pub fn product(&self, a: usize, b: usize) -> (f64, usize) {
        (self.sign(a, b), a ^ b)
    }

    pub fn pseudoscalar_square(&self) -> f64 {
        let i = self.pseudoscalar_blade();
        self.sign(i, i)
    }

    /// Per-blade sign of the norm-inducing conjugate.
    pub fn conj_signs(&self) -> &[f64] {
        &self.conj
    }

    pub fn pseudo_pairs(&self) -> &[PseudoPair] {
        &self.pairs
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        self.n == other.n && self.metric == other.metric
    }

    fn check(&self, other: &Algebra) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.label(),
                right: other.label(),
            })
        }
    }

    pub fn label(&self) -> String {
        match self.metric {
            Metric::Negative => format!("Cl(0,{})", self.n),
            Metric::Positive => format!("Cl({},0)", self.n),
        }
    }

    pub fn require_complex_pseudoscalar(&self) -> Result<()> {
        if self.pseudoscalar_square() < 0.0 {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension {
                n: self.n,
                reason: format!("pseudoscalar of {} squares to +1", self.label()),
            })
        }
    }

    /// `out = a · b` on raw coefficient slices.
    #[inline]
    pub fn mul_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let bc = self.blade_count;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            let row = &self.signs[i * bc..(i + 1) * bc];
            for (j, &bj) in b.iter().enumerate() {
                out[i ^ j] += row[j] * ai * bj;
            }
        }
    }
}

/// Element of an [`Algebra`].
#[derive(Clone)]
pub struct Multivector {
    alg: Arc<Algebra>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.alg.label(), self.coeffs)
    }
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.coeffs == other.coeffs
    }
}

impl Multivector {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Multivector {
            alg: alg.clone(),
            coeffs: vec![0.0; alg.blade_count()],
        }
    }

    pub fn scalar(alg: &Arc<Algebra>, v: f64) -> Self {
        let mut m = Self::zero(alg);
        m.coeffs[0] = v;
        m
    }

    pub fn blade(alg: &Arc<Algebra>, blade: usize, v: f64) -> Self {
        let mut m = Self::zero(alg);
        m.coeffs[blade] = v;
        m
    }

    /// Basis vector `e_i`, 1-based as in the usual notation.
    pub fn basis_vector(alg: &Arc<Algebra>, i: usize) -> Self {
        assert!(i >= 1 && i <= alg.n(), "basis index {i} out of range");
        Self::blade(alg, 1 << (i - 1), 1.0)
    }

    pub fn pseudoscalar(alg: &Arc<Algebra>) -> Self {
        Self::blade(alg, alg.pseudoscalar_blade(), 1.0)
    }

    pub fn from_coeffs(alg: &Arc<Algebra>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != alg.blade_count() {
            return Err(Error::DimensionMismatch {
                left: alg.label(),
                right: format!("{} coefficients", coeffs.len()),
            });
        }
        Ok(Multivector {
            alg: alg.clone(),
            coeffs,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_signs(|_| s)
    }

    fn map_signs(&self, f: impl Fn(usize) -> f64) -> Self {
        Multivector {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * f(k))
                .collect(),
        }
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        self.alg.check(&other.alg)?;
        let mut out = Self::zero(&self.alg);
        self.alg.mul_into(&self.coeffs, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector> {
        self.alg.check(&other.alg)?;
        let mut out = self.clone();
        out.coeffs
            .iter_mut()
            .zip(&other.coeffs)
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn grade_project(&self, r: usize) -> Result<Multivector> {
        if r > self.alg.n() {
            return Err(Error::GradeOutOfRange {
                grade: r,
                n: self.alg.n(),
            });
        }
        Ok(self.map_signs(|k| if k.count_ones() as usize == r { 1.0 } else { 0.0 }))
    }

    /// Grade involution: sign (−1)^r.
    pub fn grade_involution(&self) -> Multivector {
        self.map_signs(|k| if k.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Reversion: sign (−1)^{r(r−1)/2}.
    pub fn reversion(&self) -> Multivector {
        self.map_signs(|k| {
            let r = k.count_ones();
            if (r * r.saturating_sub(1) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Clifford conjugation: sign (−1)^{r(r+1)/2}.
    pub fn clifford_conjugate(&self) -> Multivector {
        self.map_signs(|k| {
            let r = k.count_ones();
            if (r * (r + 1) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// The anti-automorphism with `e_A · conj(e_A) = 1` for every blade:
    /// Clifford conjugation in Cl(0,n), reversion in Cl(n,0). This is the
    /// overline used by every inner product.
    pub fn conjugate(&self) -> Multivector {
        let signs = self.alg.conj_signs();
        self.map_signs(|k| signs[k])
    }

    /// Σ coeffs², equal to `scalar_part(m · conj(m))`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `cos φ + I sin φ`. Fails unless I² = −1.
pub fn pseudoscalar_exp(alg: &Arc<Algebra>, phase: f64) -> Result<Multivector> {
    alg.require_complex_pseudoscalar()?;
    let mut m = Multivector::zero(alg);
    let (s, c) = phase.sin_cos();
    m.coeffs[0] = c;
    m.coeffs[alg.pseudoscalar_blade()] = s;
    Ok(m)
}

pub fn geometric_product(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.geometric_product(b)
}

impl Mul for &Multivector {
    type Output = Multivector;
    /// Panics on mismatched algebras; use [`Multivector::geometric_product`] to get an error instead.
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("geometric product across algebras")
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("sum across algebras")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_add(&rhs.scale(-1.0)).expect("difference across algebras")
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        self.alg.check(&rhs.alg).expect("sum across algebras");
        self.coeffs
            .iter_mut()
            .zip(&rhs.coeffs)
            .for_each(|(a, b)| *a += b);
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}
