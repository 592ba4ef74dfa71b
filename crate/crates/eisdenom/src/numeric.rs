//! Floating-point oracle: truncated q-expansions of Eisenstein series and
//! adaptive Gauss–Kronrod integration of E(z) P(z,1) dz along straight segments.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{int, zeta_neg, Rational};
use crate::modsym::{PointRef, SymbolChain};
use crate::sympoly::{HomPoly, Mat2};

pub const DEFAULT_TERMS: usize = 150;
pub const DEFAULT_TOLERANCE: f64 = 1e-11;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("endpoint {0} is a cusp; only interior points can be integrated")]
    CuspEndpoint(String),
    #[error("basepoint must lie in the upper half plane")]
    NotUpperHalfPlane,
    #[error("quadrature error {achieved:e} exceeds tolerance {requested:e}")]
    Tolerance { achieved: f64, requested: f64 },
    #[error("weight must be even and at least 2, got {0}")]
    Weight(usize),
}

/// Exact q-expansion coefficients c_0..c_T of E_(n+2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub weight: usize,
    pub coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn divisor_power_sum(k: u64, e: u32) -> Rational {
    let mut s = num_bigint::BigInt::from(0);
    let mut d = 1u64;
    while d * d <= k {
        if k.is_multiple_of(d) {
            s += num_bigint::BigInt::from(d).pow(e);
            let other = k / d;
            if other != d {
                s += num_bigint::BigInt::from(other).pow(e);
            }
        }
        d += 1;
    }
    Rational::from_integer(s)
}

/// c_0 = 1, c_k = 2 sigma_(n+1)(k) / zeta(-1-n).
pub fn eisenstein_q(n: usize, terms: usize) -> Result<QSeries, NumericError> {
    if n < 2 || n % 2 == 1 {
        return Err(NumericError::Weight(n));
    }
    let lead = int(2) / zeta_neg(n + 2);
    let mut coeffs = vec![int(1)];
    coeffs.extend((1..=terms as u64).map(|k| &lead * divisor_power_sum(k, n as u32 + 1)));
    Ok(QSeries {
        weight: n + 2,
        coeffs,
    })
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().expect("finite rational")
}

/// Precomputed float evaluator for one weight and truncation.
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub n: usize,
    coeffs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl NumericValue {
    fn from_parts(v: Complex64, error: f64) -> Self {
        NumericValue {
            re: v.re,
            im: v.im,
            error,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Distance to an exact rational.
    pub fn distance_to(&self, exact: &Rational) -> f64 {
        (self.value() - Complex64::new(to_f64(exact), 0.0)).norm()
    }
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

impl Evaluator {
    pub fn new(n: usize, terms: usize) -> Result<Self, NumericError> {
        let q = eisenstein_q(n, terms)?;
        Ok(Evaluator {
            n,
            coeffs: q.coeffs.iter().map(to_f64).collect(),
        })
    }

    /// E(z) with compensated summation over the q-expansion.
    pub fn eisenstein(&self, z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        let mut qk = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            let y = qk * *c - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            qk *= q;
        }
        sum
    }

    fn integrand(&self, z: Complex64, poly: &[f64]) -> Complex64 {
        // P(z, 1) = sum_mu c_mu z^mu
        let mut p = Complex64::new(0.0, 0.0);
        for c in poly.iter().rev() {
            p = p * z + *c;
        }
        self.eisenstein(z) * p
    }

    fn gk15(&self, a: Complex64, b: Complex64, poly: &[f64]) -> (Complex64, f64) {
        let center = (a + b) * 0.5;
        let half = (b - a) * 0.5;
        let fc = self.integrand(center, poly);
        let mut kron = fc * WGK[7];
        let mut gauss = fc * WG[3];
        for (i, x) in XGK.iter().take(7).enumerate() {
            let f1 = self.integrand(center - half * *x, poly);
            let f2 = self.integrand(center + half * *x, poly);
            kron += (f1 + f2) * WGK[i];
            if i % 2 == 1 {
                gauss += (f1 + f2) * WG[i / 2];
            }
        }
        let k = kron * half;
        let g = gauss * half;
        (k, (k - g).norm())
    }

    fn adaptive(
        &self,
        a: Complex64,
        b: Complex64,
        poly: &[f64],
        tol: f64,
        depth: u32,
    ) -> (Complex64, f64) {
        let (v, err) = self.gk15(a, b, poly);
        if err <= tol || depth >= MAX_DEPTH {
            return (v, err);
        }
        let mid = (a + b) * 0.5;
        let (v1, e1) = self.adaptive(a, mid, poly, tol / 2.0, depth + 1);
        let (v2, e2) = self.adaptive(mid, b, poly, tol / 2.0, depth + 1);
        (v1 + v2, e1 + e2)
    }

    /// Integral of E(z) P(z,1) dz along the segment a -> b.
    pub fn segment(&self, a: Complex64, b: Complex64, poly: &HomPoly, tol: f64) -> NumericValue {
        let coeffs: Vec<f64> = poly.coeffs().iter().map(to_f64).collect();
        let (v, err) = self.adaptive(a, b, &coeffs, tol, 0);
        NumericValue::from_parts(v, err)
    }

    /// Sum over the terms of a chain with every formal point g H evaluated at tau.
    pub fn chain(
        &self,
        ch: &SymbolChain,
        tau: Complex64,
        tol: f64,
    ) -> Result<NumericValue, NumericError> {
        if tau.im <= 0.0 {
            return Err(NumericError::NotUpperHalfPlane);
        }
        let per_term = tol / ch.len().max(1) as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for t in &ch.terms {
            let a = point_at(&t.from, tau)?;
            let b = point_at(&t.to, tau)?;
            let c = to_f64(&t.coeff);
            let v = self.segment(a, b, &t.poly, per_term / c.abs().max(1.0));
            total += v.value() * c;
            error += v.error * c.abs();
        }
        Ok(NumericValue::from_parts(total, error))
    }
}

pub fn mobius(g: &Mat2, z: Complex64) -> Complex64 {
    let [a, b, c, d] = g.entries().map(|x| x.to_f64().expect("finite entry"));
    (z * a + b) / (z * c + d)
}

fn point_at(p: &PointRef, tau: Complex64) -> Result<Complex64, NumericError> {
    match p {
        PointRef::Formal(f) => Ok(mobius(&f.matrix(), tau)),
        PointRef::Cusp { .. } => Err(NumericError::CuspEndpoint(p.label())),
    }
}

/// Integral of E_(n+2)(z) P(z,1) dz from tau to gamma tau.
pub fn numeric_pair(
    n: usize,
    gamma: &Mat2,
    poly: &HomPoly,
    tau: Complex64,
    terms: usize,
    tol: f64,
) -> Result<NumericValue, NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotUpperHalfPlane);
    }
    let ev = Evaluator::new(n, terms)?;
    let v = ev.segment(tau, mobius(gamma, tau), poly, tol);
    if v.error > tol * 100.0 {
        return Err(NumericError::Tolerance {
            achieved: v.error,
            requested: tol,
        });
    }
    Ok(v)
}

/// Numeric pairing of a whole chain.
pub fn numeric_chain(
    ch: &SymbolChain,
    tau: Complex64,
    terms: usize,
    tol: f64,
) -> Result<NumericValue, NumericError> {
    Evaluator::new(ch.weight, terms)?.chain(ch, tau, tol)
}

/// Lowest imaginary part among the endpoints of a chain at tau.
pub fn min_height(ch: &SymbolChain, tau: Complex64) -> Result<f64, NumericError> {
    let mut best = f64::INFINITY;
    for t in &ch.terms {
        best = best
            .min(point_at(&t.from, tau)?.im)
            .min(point_at(&t.to, tau)?.im);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use crate::modsym::{basic_cycle, build_lift, path_from_basepoint};
    use crate::sympoly::Basis;

    #[test]
    fn q_expansion_examples() {
        let q = eisenstein_q(2, 5).unwrap();
        assert_eq!(q.coeffs[0], int(1));
        assert_eq!(q.coeffs[1], int(240));
        assert_eq!(q.coeffs[2], int(2160));
        assert_eq!(q.truncation(), 5);
        let q = eisenstein_q(10, 2).unwrap();
        assert_eq!(q.coeffs[1], frac(65520, 691));
        assert!(eisenstein_q(3, 2).is_err());
    }

    #[test]
    fn modularity_of_series() {
        // E_4(-1/z) = z^4 E_4(z)
        let ev = Evaluator::new(2, DEFAULT_TERMS).unwrap();
        let z = Complex64::new(0.3, 1.1);
        let lhs = ev.eisenstein(-z.inv());
        let rhs = ev.eisenstein(z) * z.powi(4);
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
    }

    #[test]
    fn constant_term_integral() {
        let p = HomPoly::basis_vec(2, 0, Basis::Primary);
        let v = numeric_pair(
            2,
            &Mat2::t(),
            &p,
            Complex64::new(0.0, 1.0),
            DEFAULT_TERMS,
            1e-12,
        )
        .unwrap();
        assert!(v.distance_to(&int(1)) < 1e-10);
    }

    #[test]
    fn basic_cycle_matches_exact() {
        let ch = basic_cycle(2, 1).unwrap();
        let v = numeric_chain(&ch, Complex64::new(0.5, 1.0), DEFAULT_TERMS, 1e-11).unwrap();
        assert!(v.distance_to(&int(1)) < 1e-8, "{v:?}");
        let ch = path_from_basepoint(
            &Mat2::t_pow(3.into()),
            HomPoly::basis_vec(4, 0, Basis::Primary),
        )
        .unwrap();
        let v = numeric_chain(&ch, Complex64::new(0.2, 1.0), DEFAULT_TERMS, 1e-11).unwrap();
        assert!(v.distance_to(&int(3)) < 1e-8);
    }

    #[test]
    fn lift_matches_exact() {
        let ch = build_lift(2, 2, 1, 1).unwrap();
        let tau = Complex64::new(0.1, 1.0);
        assert!(min_height(&ch, tau).unwrap() >= 0.25);
        let v = numeric_chain(&ch, tau, DEFAULT_TERMS, 1e-11).unwrap();
        assert!(v.distance_to(&int(9)) < 1e-8, "{v:?}");
    }

    #[test]
    fn refinement_stability() {
        let ch = basic_cycle(4, 1).unwrap();
        let tau = Complex64::new(0.5, 1.0);
        let a = numeric_chain(&ch, tau, DEFAULT_TERMS, 1e-10).unwrap();
        let b = numeric_chain(&ch, tau, 2 * DEFAULT_TERMS, 1e-12).unwrap();
        assert!((a.value() - b.value()).norm() <= a.error.max(1e-12) * 10.0);
        assert!(numeric_chain(&ch, Complex64::new(0.5, -1.0), 10, 1e-8).is_err());
    }
}
