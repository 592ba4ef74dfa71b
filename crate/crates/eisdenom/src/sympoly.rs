//! Homogeneous polynomials of even weight n in X1, X2, the adjugate action of
//! integer matrices with positive determinant, the dual pairing and the
//! Bernoulli dagger maps used to close Hecke-translated paths.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{bernoulli_number, big_rat, binomial, int, ipow, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("matrix determinant must be positive")]
    NonPositiveDet,
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(usize, usize),
    #[error("expected a {0:?} polynomial")]
    WrongBasis(Basis),
    #[error("polynomial has a nonzero X1^n term")]
    TopDegree,
    #[error("invalid lift parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Monomials e_mu = X1^mu X2^(n-mu).
    Primary,
    /// Coordinates against the dual basis with <e_nu^flat, e_mu> = delta.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomPoly {
    coeffs: Vec<Rational>,
    basis: Basis,
}

impl HomPoly {
    pub fn zero(n: usize, basis: Basis) -> Self {
        HomPoly {
            coeffs: vec![Rational::zero(); n + 1],
            basis,
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>, basis: Basis) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a weight-n polynomial has n+1 coefficients"
        );
        HomPoly { coeffs, basis }
    }

    pub fn from_ints(coeffs: &[i64], basis: Basis) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect(), basis)
    }

    /// Basis vector e_mu (or its dual) of weight n.
    pub fn basis_vec(n: usize, mu: usize, basis: Basis) -> Self {
        let mut p = Self::zero(n, basis);
        p.coeffs[mu] = Rational::one();
        p
    }

    pub fn weight(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, mu: usize) -> &Rational {
        &self.coeffs[mu]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add_assign_scaled(&mut self, other: &HomPoly, s: &Rational) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &HomPoly) -> HomPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, s: &Rational) -> HomPoly {
        HomPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            basis: self.basis,
        }
    }

    pub fn neg(&self) -> HomPoly {
        self.scale(&-Rational::one())
    }

    /// Product of two primary polynomials (weights add).
    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HomPoly::from_coeffs(out, Basis::Primary)
    }

    pub fn pow(&self, e: usize) -> HomPoly {
        let mut acc = HomPoly::from_coeffs(vec![Rational::one()], Basis::Primary);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates P(x, 1).
    pub fn eval_dehomogenized(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for HomPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HomPoly", 3)?;
        st.serialize_field("weight", &self.weight())?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("coeffs", &self.coeff_strings())?;
        st.end()
    }
}

/// 2x2 integer matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    /// [[0, -1], [1, 0]].
    pub fn s() -> Self {
        Mat2::from_i64(0, -1, 1, 0)
    }

    /// [[1, 1], [0, 1]].
    pub fn t() -> Self {
        Mat2::from_i64(1, 1, 0, 1)
    }

    pub fn t_pow(q: BigInt) -> Self {
        Mat2::new(BigInt::one(), q, BigInt::zero(), BigInt::one())
    }

    pub fn diag(x: BigInt, y: BigInt) -> Self {
        Mat2::new(x, BigInt::zero(), BigInt::zero(), y)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn adj(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn is_sl2(&self) -> bool {
        self.det().is_one()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Coefficients of (x X1 + y X2)^e, indexed by the power of X1.
fn linear_power(x: &BigInt, y: &BigInt, e: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..e {
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c * x;
            next[i] += c * y;
        }
        out = next;
    }
    out
}

/// Integer matrix of the primary action of g on weight n:
/// `m[i][j]` is the coefficient of e_i in g e_j.
pub fn action_matrix(g: &Mat2, n: usize) -> Vec<Vec<BigInt>> {
    // g e_mu = (d X1 - b X2)^mu (-c X1 + a X2)^(n-mu)
    let first: Vec<Vec<BigInt>> = (0..=n).map(|e| linear_power(&g.d, &-&g.b, e)).collect();
    let second: Vec<Vec<BigInt>> = (0..=n).map(|e| linear_power(&-&g.c, &g.a, e)).collect();
    let mut m = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for mu in 0..=n {
        let f = &first[mu];
        let s = &second[n - mu];
        for (i, x) in f.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, y) in s.iter().enumerate() {
                m[i + k][mu] += x * y;
            }
        }
    }
    m
}

/// Primary action (gP)(X1, X2) = P(d X1 - b X2, -c X1 + a X2) for det g > 0.
pub fn act(g: &Mat2, p: &HomPoly) -> Result<HomPoly, SymError> {
    if !g.det().is_positive() {
        return Err(SymError::NonPositiveDet);
    }
    if p.basis != Basis::Primary {
        return Err(SymError::WrongBasis(Basis::Primary));
    }
    Ok(act_unchecked(g, p))
}

pub(crate) fn act_unchecked(g: &Mat2, p: &HomPoly) -> HomPoly {
    let n = p.weight();
    let m = action_matrix(g, n);
    let mut out = vec![Rational::zero(); n + 1];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() && !p.coeffs[j].is_zero() {
                out[i] += &p.coeffs[j] * big_rat(x.clone());
            }
        }
    }
    HomPoly::from_coeffs(out, p.basis)
}

/// Dual action, characterized by <g w, Q> = <w, adj(g) Q>.
pub fn act_dual(g: &Mat2, w: &HomPoly) -> Result<HomPoly, SymError> {
    if !g.det().is_positive() {
        return Err(SymError::NonPositiveDet);
    }
    if w.basis != Basis::Dual {
        return Err(SymError::WrongBasis(Basis::Dual));
    }
    Ok(act_dual_unchecked(g, w))
}

pub(crate) fn act_dual_unchecked(g: &Mat2, w: &HomPoly) -> HomPoly {
    let n = w.weight();
    let m = action_matrix(&g.adj(), n);
    let mut out = vec![Rational::zero(); n + 1];
    for (i, row) in m.iter().enumerate() {
        if w.coeffs[i].is_zero() {
            continue;
        }
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                out[j] += &w.coeffs[i] * big_rat(x.clone());
            }
        }
    }
    HomPoly::from_coeffs(out, Basis::Dual)
}

/// <w, Q> for w dual and Q primary.
pub fn pair_dual(w: &HomPoly, q: &HomPoly) -> Result<Rational, SymError> {
    if w.weight() != q.weight() {
        return Err(SymError::WeightMismatch(w.weight(), q.weight()));
    }
    if w.basis != Basis::Dual {
        return Err(SymError::WrongBasis(Basis::Dual));
    }
    if q.basis != Basis::Primary {
        return Err(SymError::WrongBasis(Basis::Primary));
    }
    Ok(w.coeffs
        .iter()
        .zip(&q.coeffs)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .map(|(a, b)| a * b)
        .sum())
}

/// Converts a dual element written in monomials, `a[nu]` being the coefficient
/// of X1^(n-nu) X2^nu, into coordinates against the e_nu^flat basis, where
/// e_nu^flat = (-1)^(n-nu) binom(n, nu) X1^(n-nu) X2^nu.
pub fn dual_from_monomials(a: &[Rational]) -> HomPoly {
    let n = a.len() - 1;
    let coeffs = a
        .iter()
        .enumerate()
        .map(|(nu, c)| {
            let sign = if (n - nu).is_multiple_of(2) { 1 } else { -1 };
            c / big_rat(binomial(n as i64, nu as i64) * sign)
        })
        .collect();
    HomPoly::from_coeffs(coeffs, Basis::Dual)
}

fn check_top(p: &HomPoly) -> Result<(), SymError> {
    if p.basis != Basis::Primary {
        return Err(SymError::WrongBasis(Basis::Primary));
    }
    if !p.coeffs[p.weight()].is_zero() {
        return Err(SymError::TopDegree);
    }
    Ok(())
}

/// X1^mu X2^(n-mu) maps to X2^n (B_{mu+1}(X1/X2) - B_{mu+1})/(mu+1).
pub fn dagger(p: &HomPoly) -> Result<HomPoly, SymError> {
    check_top(p)?;
    let n = p.weight();
    let mut out = vec![Rational::zero(); n + 1];
    for mu in 0..n {
        let c = &p.coeffs[mu];
        if c.is_zero() {
            continue;
        }
        let t = mu + 1;
        for (i, slot) in out.iter_mut().enumerate().take(t + 1).skip(1) {
            let b = bernoulli_number(t - i);
            if !b.is_zero() {
                *slot += c * big_rat(binomial(t as i64, i as i64)) * b / int(t as i64);
            }
        }
    }
    Ok(HomPoly::from_coeffs(out, Basis::Primary))
}

/// X1^mu X2^(n-mu) maps to X2^n ((X1/X2)^(mu+1) - B_{mu+1})/(mu+1).
pub fn ddagger(p: &HomPoly) -> Result<HomPoly, SymError> {
    check_top(p)?;
    let n = p.weight();
    let mut out = vec![Rational::zero(); n + 1];
    for mu in 0..n {
        let c = &p.coeffs[mu];
        if c.is_zero() {
            continue;
        }
        let t = mu + 1;
        out[t] += c / int(t as i64);
        out[0] -= c * bernoulli_number(t) / int(t as i64);
    }
    Ok(HomPoly::from_coeffs(out, Basis::Primary))
}

/// Parameters (p, nu, k, j) of one lifted path together with the derived
/// l = min(ord_p j, k), j' = j/p^l and the pair (d, b) with j'd - p^(k-l) b = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftParams {
    pub p: u64,
    pub nu: usize,
    pub k: u32,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub j: BigInt,
    pub l: u32,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub j_prime: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub d: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub b: BigInt,
}

impl LiftParams {
    pub fn new(n: usize, p: u64, nu: usize, k: u32, j: BigInt) -> Result<Self, SymError> {
        if nu < 1 || nu + 1 > n {
            return Err(SymError::InvalidParams(format!(
                "nu={nu} outside 1..={}",
                n.saturating_sub(1)
            )));
        }
        if p < 2 || !crate::arith::is_prime(p) {
            return Err(SymError::InvalidParams(format!("{p} is not prime")));
        }
        let pk = ipow(p, k);
        if j.is_negative() || j >= pk {
            return Err(SymError::InvalidParams(format!("j={j} outside 0..p^k")));
        }
        let pb = BigInt::from(p);
        let l = if k == 0 {
            0
        } else if j.is_zero() {
            k
        } else {
            let mut l = 0;
            let mut jj = j.clone();
            while l < k && (&jj % &pb).is_zero() {
                jj /= &pb;
                l += 1;
            }
            l
        };
        let j_prime = &j / ipow(p, l);
        let (d, b) = if k > l {
            let modulus = ipow(p, k - l);
            let e = j_prime.extended_gcd(&modulus);
            let d = e.x.mod_floor(&modulus);
            let b = (&j_prime * &d - BigInt::one()) / &modulus;
            (d, b)
        } else {
            (BigInt::zero(), -BigInt::one())
        };
        Ok(LiftParams {
            p,
            nu,
            k,
            j,
            l,
            j_prime,
            d,
            b,
        })
    }

    /// Checks j'd - p^(k-l) b = 1 whenever k > l.
    pub fn bezout_holds(&self) -> bool {
        if self.k == self.l {
            return self.d.is_zero() && self.b == -BigInt::one();
        }
        &self.j_prime * &self.d - ipow(self.p, self.k - self.l) * &self.b == BigInt::one()
    }
}

/// The boundary polynomials E1, E0 and their dagger images P1, P0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftPolys {
    pub e1: HomPoly,
    pub e0: HomPoly,
    pub p1: HomPoly,
    pub p0: HomPoly,
}

pub fn lift_polys(n: usize, params: &LiftParams) -> Result<LiftPolys, SymError> {
    let nu = params.nu;
    if nu < 1 || nu + 1 > n {
        return Err(SymError::InvalidParams(format!("nu={nu} outside 1..n-1")));
    }
    let pk = ipow(params.p, params.k);
    // E1 = (p^k X1 - j X2)^nu X2^(n-nu)
    let lin = linear_power(&pk, &-&params.j, nu);
    let mut e1 = vec![Rational::zero(); n + 1];
    for (i, c) in lin.into_iter().enumerate() {
        e1[i] = big_rat(c);
    }
    // E0 = (-1)^(nu+1) (p^l X2)^nu (p^(k-l) X1 + d X2)^(n-nu)
    let sign = if (nu + 1).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let scale = sign * num_traits::pow(ipow(params.p, params.l), nu);
    let lin0 = linear_power(&ipow(params.p, params.k - params.l), &params.d, n - nu);
    let mut e0 = vec![Rational::zero(); n + 1];
    for (i, c) in lin0.into_iter().enumerate() {
        e0[i] = big_rat(c * &scale);
    }
    let e1 = HomPoly::from_coeffs(e1, Basis::Primary);
    let e0 = HomPoly::from_coeffs(e0, Basis::Primary);
    let p1 = dagger(&e1)?;
    let p0 = dagger(&e0)?;
    Ok(LiftPolys { e1, e0, p1, p0 })
}
