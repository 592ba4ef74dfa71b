//! Truncated p-adic numbers, the Teichmüller character, Kubota–Leopoldt values
//! at negative integers and the irregularity index.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{
    bernoulli_number, bernoulli_poly, big_rat, frac, int, ipow, is_prime, padic_val, rpow,
    zeta_neg, Rational,
};

pub const DEFAULT_PRECISION: u32 = 6;
/// Digits demanded beyond the depth of any asserted congruence.
pub const GUARD_DIGITS: i64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("{a} is divisible by {p}")]
    NotUnit { a: BigInt, p: u64 },
    #[error("precision exhausted: need {needed} p-adic digits, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("division by a value indistinguishable from zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn check_odd_prime(p: u64) -> Result<(), PadicError> {
    if p >= 3 && is_prime(p) {
        Ok(())
    } else {
        Err(PadicError::BadPrime(p))
    }
}

/// An element of Z/p^r, read as a p-adic integer known to precision r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicInt {
    pub p: u64,
    pub precision: u32,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub residue: BigInt,
}

impl PadicInt {
    pub fn new(value: &BigInt, p: u64, precision: u32) -> Self {
        let modulus = ipow(p, precision);
        PadicInt {
            p,
            precision,
            residue: value.mod_floor(&modulus),
        }
    }

    pub fn modulus(&self) -> BigInt {
        ipow(self.p, self.precision)
    }

    fn combine(&self, other: &PadicInt, value: BigInt) -> PadicInt {
        assert_eq!(self.p, other.p, "mixed primes");
        PadicInt::new(&value, self.p, self.precision.min(other.precision))
    }

    pub fn add(&self, other: &PadicInt) -> PadicInt {
        self.combine(other, &self.residue + &other.residue)
    }

    pub fn sub(&self, other: &PadicInt) -> PadicInt {
        self.combine(other, &self.residue - &other.residue)
    }

    pub fn mul(&self, other: &PadicInt) -> PadicInt {
        self.combine(other, &self.residue * &other.residue)
    }

    pub fn pow(&self, e: &BigInt) -> PadicInt {
        PadicInt {
            p: self.p,
            precision: self.precision,
            residue: self.residue.modpow(e, &self.modulus()),
        }
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p).is_zero()
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Result<PadicInt, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotUnit {
                a: self.residue.clone(),
                p: self.p,
            });
        }
        let m = self.modulus();
        let e = self.residue.extended_gcd(&m);
        Ok(PadicInt::new(&e.x, self.p, self.precision))
    }

    pub fn to_padic_num(&self) -> PadicNum {
        PadicNum::approx(big_rat(self.residue.clone()), self.p, self.precision as i64)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.precision)
    }
}

/// omega(a) = a^(p^(r-1)) mod p^r.
pub fn teichmuller(a: &BigInt, p: u64, r: u32) -> Result<PadicInt, PadicError> {
    check_odd_prime(p)?;
    if r == 0 {
        return Err(PadicError::InvalidArgument(
            "precision must be positive".into(),
        ));
    }
    if (a % p).is_zero() {
        return Err(PadicError::NotUnit { a: a.clone(), p });
    }
    Ok(PadicInt::new(a, p, r).pow(&ipow(p, r - 1)))
}

/// A p-adic number known modulo p^abs_prec Z_p, or exactly when abs_prec is None.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNum {
    pub p: u64,
    pub value: Rational,
    pub abs_prec: Option<i64>,
}

/// Reduces q modulo p^prec to a canonical representative p^e * r with 0 <= r < p^(prec-e).
fn reduce(q: &Rational, p: u64, prec: i64) -> Rational {
    let Some(e) = padic_val(q, p) else {
        return Rational::zero();
    };
    if e >= prec {
        return Rational::zero();
    }
    let unit = q / rpow(&int(p as i64), e);
    let m = ipow(p, (prec - e) as u32);
    let den_inv = unit.denom().extended_gcd(&m).x;
    let r = (unit.numer() * den_inv).mod_floor(&m);
    big_rat(r) * rpow(&int(p as i64), e)
}

impl PadicNum {
    pub fn exact(value: Rational, p: u64) -> Self {
        PadicNum {
            p,
            value,
            abs_prec: None,
        }
    }

    pub fn approx(value: Rational, p: u64, abs_prec: i64) -> Self {
        PadicNum {
            p,
            value: reduce(&value, p, abs_prec),
            abs_prec: Some(abs_prec),
        }
    }

    fn build(value: Rational, p: u64, abs_prec: Option<i64>) -> Self {
        match abs_prec {
            None => PadicNum::exact(value, p),
            Some(r) => PadicNum::approx(value, p, r),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.abs_prec.is_none()
    }

    /// Valuation of the stored approximation, capped at the precision.
    pub fn val_lower(&self) -> Option<i64> {
        match (padic_val(&self.value, self.p), self.abs_prec) {
            (Some(v), Some(r)) => Some(v.min(r)),
            (None, Some(r)) => Some(r),
            (v, None) => v,
        }
    }

    /// The valuation if it is determined by the known digits.
    pub fn valuation(&self) -> Result<Option<i64>, PadicError> {
        let v = padic_val(&self.value, self.p);
        match (v, self.abs_prec) {
            (_, None) => Ok(v),
            (Some(v), Some(r)) if v < r => Ok(Some(v)),
            (_, Some(r)) => Err(PadicError::PrecisionExhausted {
                needed: r + 1,
                available: r,
            }),
        }
    }

    fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, o: &PadicNum) -> PadicNum {
        PadicNum::build(
            &self.value + &o.value,
            self.p,
            Self::min_prec(self.abs_prec, o.abs_prec),
        )
    }

    pub fn sub(&self, o: &PadicNum) -> PadicNum {
        PadicNum::build(
            &self.value - &o.value,
            self.p,
            Self::min_prec(self.abs_prec, o.abs_prec),
        )
    }

    pub fn mul(&self, o: &PadicNum) -> PadicNum {
        // (a + p^ra x)(b + p^rb y): error valuation >= min(v(a)+rb, v(b)+ra)
        let from_self = self
            .abs_prec
            .map(|r| r + o.val_lower().unwrap_or(i64::MAX / 4));
        let from_other = o
            .abs_prec
            .map(|r| r + self.val_lower().unwrap_or(i64::MAX / 4));
        PadicNum::build(
            &self.value * &o.value,
            self.p,
            Self::min_prec(from_self, from_other),
        )
    }

    pub fn div(&self, o: &PadicNum) -> Result<PadicNum, PadicError> {
        let vb = o.valuation().map_err(|_| PadicError::DivisionByZero)?;
        let vb = vb.ok_or(PadicError::DivisionByZero)?;
        let from_self = self.abs_prec.map(|r| r - vb);
        let from_other = o
            .abs_prec
            .map(|r| r + self.val_lower().unwrap_or(i64::MAX / 4) - 2 * vb);
        Ok(PadicNum::build(
            &self.value / &o.value,
            self.p,
            Self::min_prec(from_self, from_other),
        ))
    }

    /// Whether the value lies in p^depth Z_p, demanding guard digits beyond depth.
    pub fn in_pow_zp(&self, depth: i64) -> Result<bool, PadicError> {
        if let Some(r) = self.abs_prec {
            if r < depth + GUARD_DIGITS {
                return Err(PadicError::PrecisionExhausted {
                    needed: depth + GUARD_DIGITS,
                    available: r,
                });
            }
        }
        Ok(padic_val(&self.value, self.p).is_none_or(|v| v >= depth))
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.abs_prec {
            None => write!(f, "{}", crate::arith::fmt_rat(&self.value)),
            Some(r) => write!(
                f,
                "{} + O({}^{})",
                crate::arith::fmt_rat(&self.value),
                self.p,
                r
            ),
        }
    }
}

/// L_p(1-m, omega^a) for m >= 1. Exact when a = m mod p-1, otherwise truncated.
pub fn lp_neg(m: u32, a: i64, p: u64, r: u32) -> Result<PadicNum, PadicError> {
    check_odd_prime(p)?;
    if m == 0 {
        return Err(PadicError::InvalidArgument("m must be positive".into()));
    }
    let order = p as i64 - 1;
    let twist = (a - m as i64).rem_euclid(order);
    if twist == 0 {
        let v = (Rational::one() - rpow(&int(p as i64), m as i64 - 1)) * zeta_neg(m as usize);
        return Ok(PadicNum::exact(v, p));
    }
    // B_{m,eta} = p^(m-1) sum_c eta(c) B_m(c/p), with eta = omega^twist of conductor p
    let vm = padic_val(&int(m as i64), p).unwrap_or(0);
    let work = r as i64 + 1 + vm + GUARD_DIGITS;
    let bm = bernoulli_poly(m as usize);
    let scale = rpow(&int(p as i64), m as i64 - 1);
    let mut total = PadicNum::exact(Rational::zero(), p);
    for c in 1..p {
        let eta = teichmuller(&BigInt::from(c), p, work as u32)?.pow(&BigInt::from(twist));
        let term = PadicNum::exact(&scale * bm.eval(&frac(c as i64, p as i64)), p);
        total = total.add(&eta.to_padic_num().mul(&term));
    }
    let res = total.mul(&PadicNum::exact(frac(-1, m as i64), p));
    Ok(res)
}

fn trivial_l(x: i64, p: u64, r: u32) -> Result<PadicNum, PadicError> {
    if x < 1 {
        return Err(PadicError::InvalidArgument(format!(
            "arguments must be positive, got {x}"
        )));
    }
    lp_neg(x as u32, 0, p, r)
}

/// L_p(1-y, 1) (L_p(1-x, omega^x) - L_p(1-x-y, omega^x)) in Z_p, the cleared form of the
/// membership ratio in L_p(1-y, 1) + Z_p / L_p(1-x-y, omega^x).
pub fn congruence_case1(x: i64, y: i64, p: u64, r: u32) -> Result<bool, PadicError> {
    check_odd_prime(p)?;
    if x.rem_euclid(p as i64 - 1) == 0 {
        return Err(PadicError::InvalidArgument(format!(
            "x = {x} must be nonzero mod {}",
            p - 1
        )));
    }
    if x < 1 || y < 1 {
        return Err(PadicError::InvalidArgument(
            "x and y must be positive".into(),
        ));
    }
    let ly = trivial_l(y, p, r)?;
    let lx = lp_neg(x as u32, x, p, r)?;
    let lxy = lp_neg((x + y) as u32, x, p, r)?;
    ly.mul(&lx.sub(&lxy)).in_pow_zp(0)
}

/// Residues modulo Z_p appearing in the second congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case2Report {
    pub p: u64,
    pub x: i64,
    pub y: i64,
    /// L_p(1-x) L_p(1-y) / L_p(1-x-y) mod Z_p
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub ratio_mod_zp: Rational,
    /// L_p(1-x) + L_p(1-y) mod Z_p
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub sum_mod_zp: Rational,
    /// -(p-1)/(px) - (p-1)/(py) mod Z_p
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub polar_mod_zp: Rational,
    pub holds: bool,
}

/// Fractional part of a p-adic number: the representative in Z[1/p] ∩ [0, 1).
fn frac_part(q: &PadicNum) -> Result<Rational, PadicError> {
    if let Some(r) = q.abs_prec {
        if r < GUARD_DIGITS {
            return Err(PadicError::PrecisionExhausted {
                needed: GUARD_DIGITS,
                available: r,
            });
        }
    }
    let v = padic_val(&q.value, q.p).unwrap_or(0);
    if v >= 0 {
        return Ok(Rational::zero());
    }
    let m = ipow(q.p, (-v) as u32);
    let scaled = &q.value * big_rat(m.clone());
    let den_inv = scaled.denom().extended_gcd(&m).x;
    let r = (scaled.numer() * den_inv).mod_floor(&m);
    Ok(Rational::new(r, m))
}

pub fn congruence_case2_report(x: i64, y: i64, p: u64, r: u32) -> Result<Case2Report, PadicError> {
    check_odd_prime(p)?;
    let lx = trivial_l(x, p, r)?;
    let ly = trivial_l(y, p, r)?;
    let lxy = trivial_l(x + y, p, r)?;
    let ratio = lx.mul(&ly).div(&lxy)?;
    let sum = lx.add(&ly);
    let pm1 = int(p as i64 - 1);
    let polar = -(&pm1 / int(p as i64 * x)) - (&pm1 / int(p as i64 * y));
    let ratio_mod_zp = frac_part(&ratio)?;
    let sum_mod_zp = frac_part(&sum)?;
    let polar_mod_zp = frac_part(&PadicNum::exact(polar, p))?;
    let holds = ratio_mod_zp == sum_mod_zp && ratio_mod_zp == polar_mod_zp;
    Ok(Case2Report {
        p,
        x,
        y,
        ratio_mod_zp,
        sum_mod_zp,
        polar_mod_zp,
        holds,
    })
}

pub fn congruence_case2(x: i64, y: i64, p: u64, r: u32) -> Result<bool, PadicError> {
    Ok(congruence_case2_report(x, y, p, r)?.holds)
}

/// B_t mod p for even t <= p-3 from the recurrence sum_{j<=t} C(t+1, j) B_j = 0.
fn bernoulli_mod_p(p: u64) -> Vec<u64> {
    let tmax = (p - 3) as usize;
    let pb = p as u128;
    let inv = |a: u128| -> u128 {
        let e = BigInt::from(a).extended_gcd(&BigInt::from(pb));
        e.x.mod_floor(&BigInt::from(pb)).try_into().expect("fits")
    };
    // binomial rows mod p
    let mut row: Vec<u128> = vec![1];
    let mut b: Vec<u128> = Vec::with_capacity(tmax + 1);
    for t in 0..=tmax {
        // row = C(t+1, .)
        let mut next = vec![1u128; t + 2];
        for j in 1..=t {
            next[j] = (row[j - 1] + row[j]) % pb;
        }
        row = next;
        if t == 0 {
            b.push(1);
            continue;
        }
        let s: u128 = (0..t).map(|j| row[j] * b[j] % pb).sum::<u128>() % pb;
        let val = (pb - s) % pb * inv((t as u128 + 1) % pb) % pb;
        b.push(val);
    }
    b.into_iter().map(|x| x as u64).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrregularReport {
    pub p: u64,
    pub index: usize,
    pub indices: Vec<usize>,
    pub skula_bound_ok: bool,
}

/// Even t <= p-3 with p | B_t.
pub fn irregular_pairs(p: u64) -> Result<Vec<usize>, PadicError> {
    if p < 5 || !is_prime(p) {
        return Err(PadicError::BadPrime(p));
    }
    let b = bernoulli_mod_p(p);
    Ok((2..=(p as usize - 3))
        .step_by(2)
        .filter(|&t| b[t] == 0)
        .collect())
}

pub fn irregular_index(p: u64) -> Result<usize, PadicError> {
    Ok(irregular_pairs(p)?.len())
}

/// Exact-arithmetic scan, used to cross-check the modular recurrence.
pub fn irregular_index_exact(p: u64) -> Result<usize, PadicError> {
    if p < 5 || !is_prime(p) {
        return Err(PadicError::BadPrime(p));
    }
    Ok((2..=(p as usize - 3))
        .step_by(2)
        .filter(|&t| padic_val(&bernoulli_number(t), p).is_none_or(|v| v > 0))
        .collect::<Vec<_>>()
        .len())
}

/// Rational bracket [lo, hi] for log(x), x >= 1, from 2 artanh((x-1)/(x+1)).
fn log_bracket(x: &Rational, terms: usize) -> (Rational, Rational) {
    let z = (x - Rational::one()) / (x + Rational::one());
    let z2 = &z * &z;
    let mut pow = z.clone();
    let mut sum = Rational::zero();
    for k in 0..terms {
        sum += &pow / int(2 * k as i64 + 1);
        pow *= &z2;
    }
    // remaining terms are bounded by pow / ((2K+1)(1 - z^2))
    let tail = &pow / (int(2 * terms as i64 + 1) * (Rational::one() - &z2));
    (int(2) * &sum, int(2) * (sum + tail))
}

/// Brackets log 2 / log p with logs reduced via p = 2^e * x, 1 <= x < 2.
fn log_ratio_bracket(p: u64, terms: usize) -> (Rational, Rational) {
    let e = 63 - p.leading_zeros() as i64;
    let x = Rational::new(BigInt::from(p), ipow(2, e as u32));
    let (l2lo, l2hi) = log_bracket(&int(2), terms);
    let (lxlo, lxhi) = log_bracket(&x, terms);
    let lplo = lxlo + int(e) * &l2lo;
    let lphi = lxhi + int(e) * &l2hi;
    (l2lo / lphi, l2hi / lplo)
}

/// d(p) < (p+3)/4 - (log 2 / log p) (p-1)/4, decided with rational brackets.
pub fn skula_bound_ok(p: u64) -> Result<bool, PadicError> {
    let d = int(irregular_index(p)? as i64);
    let base = frac(p as i64 + 3, 4);
    let w = frac(p as i64 - 1, 4);
    let mut terms = 8;
    loop {
        let (lo, hi) = log_ratio_bracket(p, terms);
        if d < &base - &hi * &w {
            return Ok(true);
        }
        if d >= &base - &lo * &w {
            return Ok(false);
        }
        terms *= 2;
        if terms > 4096 {
            return Err(PadicError::PrecisionExhausted {
                needed: terms as i64,
                available: 4096,
            });
        }
    }
}

pub fn irregular_report(p: u64) -> Result<IrregularReport, PadicError> {
    let indices = irregular_pairs(p)?;
    Ok(IrregularReport {
        p,
        index: indices.len(),
        indices,
        skula_bound_ok: skula_bound_ok(p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(&b(1), 7, 4).unwrap().residue, b(1));
        let w = teichmuller(&b(2), 5, 2).unwrap();
        assert_eq!(w.residue, b(7));
        assert_eq!(w.to_string(), "7 + O(5^2)");
        assert_eq!(w.pow(&b(4)).residue, b(1));
        assert!(teichmuller(&b(10), 5, 3).is_err());
        assert!(teichmuller(&b(3), 2, 3).is_err());
    }

    proptest! {
        #[test]
        fn teichmuller_properties(a in -500i64..500, pi in 0usize..5, r in 1u32..7) {
            let p = [3u64, 5, 7, 11, 13][pi];
            prop_assume!(a.rem_euclid(p as i64) != 0);
            let w = teichmuller(&b(a), p, r).unwrap();
            prop_assert_eq!((&w.residue - b(a)).mod_floor(&b(p as i64)), b(0));
            prop_assert_eq!(w.pow(&b(p as i64 - 1)).residue, b(1));
            prop_assert_eq!(teichmuller(&w.residue, p, r).unwrap(), w);
        }
    }

    #[test]
    fn padic_int_arithmetic() {
        let x = PadicInt::new(&b(7), 5, 3);
        let y = PadicInt::new(&b(-3), 5, 2);
        assert_eq!(x.add(&y).residue, b(4));
        assert_eq!(x.mul(&y).precision, 2);
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv).residue, b(1));
        assert!(PadicInt::new(&b(10), 5, 3).inverse().is_err());
    }

    #[test]
    fn lp_exact_examples() {
        assert_eq!(lp_neg(4, 4, 5, 6).unwrap().value, frac(-31, 30));
        assert_eq!(lp_neg(2, 2, 5, 6).unwrap().value, frac(1, 3));
        let v = lp_neg(4, 0, 5, 6).unwrap();
        assert!(v.is_exact());
        let scaled = &v.value * int(20);
        assert_eq!(scaled, frac(-62, 3));
        let one = PadicNum::exact(scaled - int(1), 5);
        assert!(one.in_pow_zp(1).unwrap());
    }

    #[test]
    fn interpolation_consistency() {
        for p in [5u64, 7] {
            for m in (2..=20u32).step_by(2) {
                if m % (p as u32 - 1) == 0 {
                    let v = lp_neg(m, 0, p, 6).unwrap();
                    let expect = (Rational::one() - rpow(&int(p as i64), m as i64 - 1))
                        * zeta_neg(m as usize);
                    assert_eq!(v.value, expect);
                }
            }
        }
    }

    #[test]
    fn truncated_values_match_exact_twists() {
        // Kummer-type congruence for truncated values: m = m' mod p-1
        let p = 5;
        for (m, mp) in [(2u32, 6u32), (6, 10), (3, 7)] {
            for a in 1..4i64 {
                let l1 = lp_neg(m, a, p, 6).unwrap();
                let l2 = lp_neg(mp, a, p, 6).unwrap();
                assert!(l1.sub(&l2).in_pow_zp(1).unwrap(), "m={m} m'={mp} a={a}");
            }
        }
    }

    #[test]
    fn kummer_spot_check() {
        let p = 5;
        for m in [2u32, 6] {
            for mp in [m + 4, m + 8] {
                let a = m as i64;
                let d = lp_neg(m, a, p, 2)
                    .unwrap()
                    .sub(&lp_neg(mp, a, p, 2).unwrap());
                assert!(d.in_pow_zp(1).unwrap());
            }
        }
    }

    #[test]
    fn generalized_bernoulli_truncation_agrees_with_exact_sum() {
        // B_{1, omega} mod 5^4 against the exact teichmuller sum: L_p(0, omega^2) with m=1, a=2
        let v = lp_neg(1, 2, 5, 4).unwrap();
        assert!(v.abs_prec.unwrap() >= 4);
        let w = lp_neg(1, 2, 5, 8).unwrap();
        assert!(v.sub(&w).in_pow_zp(2).unwrap());
    }

    #[test]
    fn congruence_examples() {
        assert!(congruence_case2(4, 4, 5, 6).unwrap());
        let rep = congruence_case2_report(4, 4, 5, 6).unwrap();
        assert_eq!(rep.ratio_mod_zp, frac(3, 5));
        assert_eq!(rep.sum_mod_zp, frac(3, 5));
        assert!(congruence_case1(2, 4, 5, 6).unwrap());
        for (x, y) in [(1i64, 3i64), (2, 2), (3, 8), (3, 5)] {
            assert!(congruence_case1(x, y, 5, 6).unwrap());
            assert!(congruence_case2(x, y, 5, 6).unwrap(), "x={x} y={y}");
            assert!(congruence_case2(x, y, 7, 6).unwrap(), "x={x} y={y}");
        }
        assert!(congruence_case1(4, 4, 5, 6).is_err());
    }

    #[test]
    fn precision_exhaustion_is_distinct() {
        let q = PadicNum::approx(frac(1, 25), 5, 1);
        assert!(matches!(
            q.in_pow_zp(0),
            Err(PadicError::PrecisionExhausted { .. })
        ));
        let z = PadicNum::approx(int(25), 5, 2);
        assert_eq!(z.div(&z), Err(PadicError::DivisionByZero));
    }

    #[test]
    fn irregular_examples() {
        assert_eq!(irregular_index(5).unwrap(), 0);
        assert_eq!(irregular_index(37).unwrap(), 1);
        assert_eq!(irregular_pairs(37).unwrap(), vec![32]);
        assert_eq!(irregular_pairs(691).unwrap(), vec![12, 200]);
        assert!(skula_bound_ok(37).unwrap());
        assert!(irregular_index(3).is_err());
        for p in crate::arith::primes_up_to(100)
            .into_iter()
            .filter(|&p| p >= 5)
        {
            assert_eq!(
                irregular_index(p).unwrap(),
                irregular_index_exact(p).unwrap(),
                "p={p}"
            );
        }
    }

    #[test]
    fn skula_bound_small_primes() {
        for p in crate::arith::primes_up_to(400)
            .into_iter()
            .filter(|&p| p >= 5)
        {
            assert!(skula_bound_ok(p).unwrap(), "p={p}");
        }
    }

    #[test]
    fn log_bracket_contains_float() {
        for p in [3u64, 5, 37, 1009] {
            let (lo, hi) = log_ratio_bracket(p, 20);
            let f = 2f64.ln() / (p as f64).ln();
            let lo_f = lo.numer().to_string().parse::<f64>().unwrap()
                / lo.denom().to_string().parse::<f64>().unwrap();
            let hi_f = hi.numer().to_string().parse::<f64>().unwrap()
                / hi.denom().to_string().parse::<f64>().unwrap();
            assert!(lo_f <= f + 1e-15 && f <= hi_f + 1e-15);
            assert!(hi_f - lo_f < 1e-9);
        }
    }
}
