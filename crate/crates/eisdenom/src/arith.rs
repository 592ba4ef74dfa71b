//! Exact rationals, Bernoulli numbers and polynomials, zeta values at negative
//! integers, quadratic Dirichlet L-values and p-adic valuations.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("discriminant {0} is not a positive fundamental discriminant")]
    NotFundamental(i64),
    #[error("argument out of range: {0}")]
    Range(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `base^exp` for a possibly negative exponent.
pub fn rpow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn ipow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Formats a rational as "a/b", or "a" when integral.
pub fn fmt_rat(q: &Rational) -> String {
    q.to_string()
}

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// B_t with B_1 = -1/2, memoized through the binomial recurrence.
pub fn bernoulli_number(t: usize) -> Rational {
    {
        let table = bernoulli_table().read().expect("bernoulli table poisoned");
        if t < table.len() {
            return table[t].clone();
        }
    }
    let mut table = bernoulli_table().write().expect("bernoulli table poisoned");
    while table.len() <= t {
        let m = table.len();
        let value = if m > 1 && m % 2 == 1 {
            Rational::zero()
        } else {
            let mut acc = Rational::zero();
            for (j, bj) in table.iter().enumerate() {
                if !bj.is_zero() {
                    acc += big_rat(binomial(m as i64 + 1, j as i64)) * bj;
                }
            }
            -acc / int(m as i64 + 1)
        };
        table.push(value);
    }
    table[t].clone()
}

/// Dense univariate polynomial with rational coefficients, index = degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn monomial(deg: usize) -> Self {
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = Rational::one();
        UniPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// p(x + 1).
    pub fn shift_one(&self) -> UniPoly {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                *slot += c * big_rat(binomial(i as i64, j as i64));
            }
        }
        UniPoly::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> UniPoly {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / int(i as i64 + 1)),
        );
        UniPoly::new(out)
    }
}

pub fn bernoulli_poly(t: usize) -> UniPoly {
    UniPoly::new(
        (0..=t)
            .map(|mu| big_rat(binomial(t as i64, mu as i64)) * bernoulli_number(t - mu))
            .collect(),
    )
}

/// (B_t(x) - B_t)/t; for integer x >= 0 this is the power sum 0^{t-1} + ... + (x-1)^{t-1}.
pub fn btilde(t: usize, x: &Rational) -> Rational {
    assert!(t >= 1, "btilde needs t >= 1");
    (bernoulli_poly(t).eval(x) - bernoulli_number(t)) / int(t as i64)
}

/// zeta(1 - m) = -B_m / m.
pub fn zeta_neg(m: usize) -> Rational {
    assert!(m >= 1, "zeta_neg needs m >= 1");
    -bernoulli_number(m) / int(m as i64)
}

/// Positive numerator N_m of zeta(1 - m) (zero when the value vanishes).
pub fn zeta_numerator(m: usize) -> BigInt {
    zeta_neg(m).numer().abs()
}

/// Denominator J_m of zeta(1 - m).
pub fn zeta_denominator(m: usize) -> BigInt {
    zeta_neg(m).denom().clone()
}

/// ord_p of an integer; `None` for zero.
pub fn int_val(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// ord_p of a rational; `None` stands for +infinity (q = 0).
pub fn padic_val(q: &Rational, p: u64) -> Option<i64> {
    let num = int_val(q.numer(), p)?;
    let den = int_val(q.denom(), p).unwrap_or(0);
    Some(num - den)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d <= 1 {
        return false;
    }
    let du = d as u64;
    match du % 4 {
        1 => is_squarefree(du),
        0 => {
            let m = du / 4;
            (m % 4 == 2 || m % 4 == 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Kronecker symbol (a/n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Generalized Bernoulli number B_{k,chi_D} for the Kronecker character of a
/// positive fundamental discriminant.
pub fn gen_bernoulli_quadratic(k: usize, disc: i64) -> Result<Rational, ArithError> {
    if !is_fundamental_discriminant(disc) {
        return Err(ArithError::NotFundamental(disc));
    }
    if k == 0 {
        return Err(ArithError::Range("k must be positive".into()));
    }
    let poly = bernoulli_poly(k);
    let mut acc = Rational::zero();
    for a in 1..=disc {
        let chi = kronecker(disc, a);
        if chi != 0 {
            acc += poly.eval(&frac(a, disc)) * int(chi as i64);
        }
    }
    Ok(acc * rpow(&int(disc), k as i64 - 1))
}

/// L(1 - k, chi_D) = -B_{k,chi_D}/k.
pub fn dirichlet_l_neg(k: usize, disc: i64) -> Result<Rational, ArithError> {
    Ok(-gen_bernoulli_quadratic(k, disc)? / int(k as i64))
}

/// Integer square root of a non-negative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), frac(-1, 2));
        assert_eq!(bernoulli_number(12), frac(-691, 2730));
        assert_eq!(bernoulli_number(13), int(0));
    }

    #[test]
    fn recurrence_consistency() {
        for t in 1..=60usize {
            let s: Rational = (0..=t)
                .map(|j| big_rat(binomial(t as i64 + 1, j as i64)) * bernoulli_number(j))
                .sum();
            assert!(s.is_zero(), "t={t}");
        }
    }

    #[test]
    fn von_staudt_clausen() {
        for t in (2..=60usize).step_by(2) {
            let b = bernoulli_number(t);
            for p in primes_up_to(100) {
                let v = padic_val(&b, p).unwrap();
                assert!(v >= -1);
                assert_eq!(v == -1, (t as u64).is_multiple_of(p - 1), "t={t} p={p}");
            }
        }
    }

    #[test]
    fn poly_examples() {
        assert_eq!(bernoulli_poly(1).coeffs(), &[frac(-1, 2), int(1)]);
        assert_eq!(bernoulli_poly(2).coeffs(), &[frac(1, 6), int(-1), int(1)]);
        assert_eq!(bernoulli_poly(2).eval(&frac(1, 5)), frac(1, 150));
    }

    #[test]
    fn translation_identity() {
        for t in 1..=30usize {
            let b = bernoulli_poly(t);
            let diff = b.shift_one().sub(&b);
            let expect = UniPoly::monomial(t - 1).scale(&int(t as i64));
            assert_eq!(diff, expect, "t={t}");
        }
    }

    #[test]
    fn btilde_examples() {
        assert_eq!(btilde(2, &int(0)), int(0));
        assert_eq!(btilde(2, &int(5)), int(10));
        assert_eq!(btilde(4, &int(3)), int(9));
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_neg(2), frac(-1, 12));
        assert_eq!(zeta_numerator(2), BigInt::from(1));
        assert_eq!(zeta_denominator(2), BigInt::from(12));
        assert_eq!(zeta_neg(4), frac(1, 120));
        assert_eq!(zeta_denominator(4), BigInt::from(120));
        assert_eq!(zeta_neg(12), frac(691, 32760));
        assert_eq!(zeta_numerator(12), BigInt::from(691));
    }

    #[test]
    fn denominator_law() {
        for k in 1..=20u64 {
            let primes: BigInt = primes_up_to(2 * k + 1)
                .into_iter()
                .filter(|p| (2 * k) % (p - 1) == 0)
                .map(BigInt::from)
                .product();
            assert_eq!(bernoulli_number(2 * k as usize).denom(), &primes, "k={k}");
            let j = (bernoulli_number(2 * k as usize) / int(2 * k as i64))
                .denom()
                .clone();
            assert_eq!(zeta_denominator(2 * k as usize), j, "k={k}");
        }
        assert_eq!(zeta_denominator(2), BigInt::from(12));
        assert_eq!(zeta_denominator(4), BigInt::from(120));
    }

    #[test]
    fn quadratic_l_values() {
        assert_eq!(gen_bernoulli_quadratic(2, 5).unwrap(), frac(4, 5));
        assert_eq!(dirichlet_l_neg(2, 5).unwrap(), frac(-2, 5));
        assert_eq!(gen_bernoulli_quadratic(2, 8).unwrap(), int(2));
        assert_eq!(dirichlet_l_neg(2, 8).unwrap(), int(-1));
        assert_eq!(gen_bernoulli_quadratic(2, 12).unwrap(), int(4));
        assert_eq!(dirichlet_l_neg(2, 12).unwrap(), int(-2));
        assert!(gen_bernoulli_quadratic(2, 20).is_err());
        assert!(gen_bernoulli_quadratic(2, -4).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_val(&frac(-24, 31), 5), Some(0));
        assert_eq!(padic_val(&frac(691, 32760), 691), Some(1));
        assert_eq!(padic_val(&int(0), 7), None);
        assert_eq!(padic_val(&frac(3, 40), 2), Some(-3));
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(12, 5), -1);
        assert_eq!(kronecker(12, 11), 1);
        assert_eq!(kronecker(13, 3), 1);
    }
}
