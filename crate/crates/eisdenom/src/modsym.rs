//! Modular symbols {alpha, beta} (x) P with polynomial coefficients, Hecke
//! operators, Manin decomposition, Gamma-coinvariant boundaries and the
//! lifted cycles built from Hecke translates of the basic path.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{big_rat, binomial, ipow, padic_val, Rational};
use crate::sympoly::{act_unchecked, lift_polys, HomPoly, LiftParams, Mat2, SymError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModSymError {
    #[error("cusp endpoint not allowed in an absolute chain")]
    CuspEndpoint,
    #[error("matrix determinant must be positive")]
    NonPositiveDet,
    #[error("weight mismatch in chain")]
    WeightMismatch,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Upper triangular primitive matrix [[a, b], [0, d]] with a, d > 0 and 0 <= b < d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hnf {
    #[serde(serialize_with = "crate::report::ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub d: BigInt,
}

impl Hnf {
    pub fn identity() -> Self {
        Hnf {
            a: BigInt::one(),
            b: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(
            self.a.clone(),
            self.b.clone(),
            BigInt::zero(),
            self.d.clone(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.d.is_one()
    }
}

/// The point M(tau) for the generic basepoint tau, stored as transport * hnf
/// with transport in SL2(Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalPoint {
    pub transport: Mat2,
    pub hnf: Hnf,
}

impl FormalPoint {
    pub fn basepoint() -> Self {
        FormalPoint {
            transport: Mat2::identity(),
            hnf: Hnf::identity(),
        }
    }

    /// Canonical form of M(tau) for an integer matrix with positive determinant.
    pub fn from_matrix(m: &Mat2) -> Result<Self, ModSymError> {
        if !m.det().is_positive() {
            return Err(ModSymError::NonPositiveDet);
        }
        Ok(canonicalize(m))
    }

    pub fn matrix(&self) -> Mat2 {
        self.transport.mul(&self.hnf.to_mat())
    }

    pub fn apply(&self, g: &Mat2) -> Result<Self, ModSymError> {
        Self::from_matrix(&g.mul(&self.matrix()))
    }
}

fn canonicalize(m: &Mat2) -> FormalPoint {
    let g = m.a.gcd(&m.b).gcd(&m.c).gcd(&m.d);
    let (a, b, c, d) = (&m.a / &g, &m.b / &g, &m.c / &g, &m.d / &g);
    let e = a.extended_gcd(&c);
    let (mut gg, mut x, mut y) = (e.gcd, e.x, e.y);
    if gg.is_negative() {
        gg = -gg;
        x = -x;
        y = -y;
    }
    // h (a, c)^T = (gg, 0)^T with h in SL2(Z)
    let h = Mat2::new(x, y, -(&c / &gg), &a / &gg);
    let upper = h.mul(&Mat2::new(a, b, c, d));
    let q = upper.b.div_floor(&upper.d);
    let hnf = Hnf {
        a: upper.a.clone(),
        b: &upper.b - &q * &upper.d,
        d: upper.d.clone(),
    };
    let transport = h.adj().mul(&Mat2::t_pow(q));
    FormalPoint { transport, hnf }
}

/// Endpoint of a modular symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointRef {
    /// a/c in lowest terms with c >= 0; infinity is (1 : 0).
    Cusp {
        num: BigInt,
        den: BigInt,
    },
    Formal(FormalPoint),
}

impl PointRef {
    pub fn cusp(num: BigInt, den: BigInt) -> Self {
        let g = num.gcd(&den);
        assert!(!g.is_zero(), "(0 : 0) is not a cusp");
        let (mut a, mut c) = (num / &g, den / &g);
        if c.is_negative() || (c.is_zero() && a.is_negative()) {
            a = -a;
            c = -c;
        }
        PointRef::Cusp { num: a, den: c }
    }

    pub fn infinity() -> Self {
        PointRef::Cusp {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn formal(m: &Mat2) -> Result<Self, ModSymError> {
        Ok(PointRef::Formal(FormalPoint::from_matrix(m)?))
    }

    pub fn apply(&self, g: &Mat2) -> Result<Self, ModSymError> {
        match self {
            PointRef::Cusp { num, den } => Ok(PointRef::cusp(
                &g.a * num + &g.b * den,
                &g.c * num + &g.d * den,
            )),
            PointRef::Formal(f) => Ok(PointRef::Formal(f.apply(g)?)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointRef::Cusp { num, den } => format!("{num}/{den}"),
            PointRef::Formal(f) => format!("{}*({},{},{})", f.transport, f.hnf.a, f.hnf.b, f.hnf.d),
        }
    }
}

impl Serialize for PointRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        match self {
            PointRef::Cusp { num, den } => {
                map.serialize_entry("cusp", &format!("{num}/{den}"))?;
            }
            PointRef::Formal(f) => {
                let t = &f.transport;
                map.serialize_entry(
                    "hnf",
                    &[
                        f.hnf.a.to_string(),
                        f.hnf.b.to_string(),
                        f.hnf.d.to_string(),
                    ],
                )?;
                map.serialize_entry(
                    "transport",
                    &[
                        t.a.to_string(),
                        t.b.to_string(),
                        t.c.to_string(),
                        t.d.to_string(),
                    ],
                )?;
            }
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub from: PointRef,
    pub to: PointRef,
    pub poly: HomPoly,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub coeff: Rational,
}

/// Formal rational combination of modular symbols of a fixed weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolChain {
    pub weight: usize,
    pub terms: Vec<Term>,
}

impl SymbolChain {
    pub fn new(weight: usize) -> Self {
        SymbolChain {
            weight,
            terms: Vec::new(),
        }
    }

    pub fn single(from: PointRef, to: PointRef, poly: HomPoly) -> Self {
        let mut ch = SymbolChain::new(poly.weight());
        ch.push(from, to, poly, Rational::one());
        ch
    }

    pub fn push(&mut self, from: PointRef, to: PointRef, poly: HomPoly, coeff: Rational) {
        assert_eq!(poly.weight(), self.weight, "weight mismatch in chain");
        if coeff.is_zero() || poly.is_zero() {
            return;
        }
        self.terms.push(Term {
            from,
            to,
            poly,
            coeff,
        });
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn extend_scaled(&mut self, other: &SymbolChain, s: &Rational) {
        assert_eq!(self.weight, other.weight, "weight mismatch in chain");
        if s.is_zero() {
            return;
        }
        for t in &other.terms {
            self.terms.push(Term {
                from: t.from.clone(),
                to: t.to.clone(),
                poly: t.poly.clone(),
                coeff: &t.coeff * s,
            });
        }
    }

    pub fn scale(&self, s: &Rational) -> SymbolChain {
        let mut out = SymbolChain::new(self.weight);
        out.extend_scaled(self, s);
        out
    }

    /// Swaps the endpoints of every term, negating its coefficient.
    pub fn reversed_orientation(&self) -> SymbolChain {
        SymbolChain {
            weight: self.weight,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    from: t.to.clone(),
                    to: t.from.clone(),
                    poly: t.poly.clone(),
                    coeff: -&t.coeff,
                })
                .collect(),
        }
    }

    /// g acting on endpoints and coefficients.
    pub fn apply(&self, g: &Mat2) -> Result<SymbolChain, ModSymError> {
        if !g.det().is_positive() {
            return Err(ModSymError::NonPositiveDet);
        }
        let mut out = SymbolChain::new(self.weight);
        for t in &self.terms {
            out.push(
                t.from.apply(g)?,
                t.to.apply(g)?,
                act_unchecked(g, &t.poly),
                t.coeff.clone(),
            );
        }
        Ok(out)
    }
}

fn hecke_v_mat(p: u64) -> Mat2 {
    Mat2::diag(BigInt::from(p), BigInt::one())
}

fn hecke_u_mat(p: u64, j: u64) -> Mat2 {
    Mat2::new(
        BigInt::one(),
        BigInt::from(j),
        BigInt::zero(),
        BigInt::from(p),
    )
}

/// V_p: translate by diag(p, 1).
pub fn hecke_vp(ch: &SymbolChain, p: u64) -> Result<SymbolChain, ModSymError> {
    ch.apply(&hecke_v_mat(p))
}

/// U_p: sum over the matrices [[1, j], [0, p]], 0 <= j < p.
pub fn hecke_up(ch: &SymbolChain, p: u64) -> Result<SymbolChain, ModSymError> {
    let mut out = SymbolChain::new(ch.weight);
    for j in 0..p {
        out.extend_scaled(&ch.apply(&hecke_u_mat(p, j))?, &Rational::one());
    }
    Ok(out)
}

/// T_p = V_p + U_p.
pub fn hecke_tp(ch: &SymbolChain, p: u64) -> Result<SymbolChain, ModSymError> {
    let mut out = hecke_vp(ch, p)?;
    out.extend_scaled(&hecke_up(ch, p)?, &Rational::one());
    Ok(out)
}

/// W_m = sum_{k=0}^{m} U_p^k V_p^(m-k).
pub fn hecke_wm(ch: &SymbolChain, p: u64, m: u32) -> Result<SymbolChain, ModSymError> {
    let mut out = SymbolChain::new(ch.weight);
    let mut vpow = vec![ch.clone()];
    for _ in 0..m {
        let next = hecke_vp(vpow.last().expect("nonempty"), p)?;
        vpow.push(next);
    }
    for k in 0..=m {
        let mut cur = vpow[(m - k) as usize].clone();
        for _ in 0..k {
            cur = hecke_up(&cur, p)?;
        }
        out.extend_scaled(&cur, &Rational::one());
    }
    Ok(out)
}

/// C(A, B) = binom(A+B, B) - binom(A+B, B-1).
pub fn hecke_power_coeff(a: u32, b: u32) -> BigInt {
    let s = (a + b) as i64;
    binomial(s, b as i64) - binomial(s, b as i64 - 1)
}

/// Unimodular paths g_i {0, infinity} whose concatenation is {alpha, beta}.
pub fn manin_decompose(alpha: &PointRef, beta: &PointRef) -> Vec<Mat2> {
    if alpha == beta {
        return Vec::new();
    }
    let mut out: Vec<Mat2> = from_infinity(alpha)
        .into_iter()
        .rev()
        .map(|g| sign_normalize(g.mul(&Mat2::s())))
        .collect();
    out.extend(from_infinity(beta));
    out
}

fn sign_normalize(g: Mat2) -> Mat2 {
    if g.c.is_negative() || (g.c.is_zero() && g.a.is_negative()) {
        g.neg()
    } else {
        g
    }
}

/// Paths from infinity to the cusp along consecutive continued fraction convergents.
fn from_infinity(cusp: &PointRef) -> Vec<Mat2> {
    let PointRef::Cusp { num, den } = cusp else {
        panic!("Manin decomposition needs cusp endpoints");
    };
    let (mut x, mut y) = (num.clone(), den.clone());
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p_cur, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    while !y.is_zero() {
        let a = x.div_floor(&y);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        // g(0) = p_prev/q_prev and g(infinity) = p_cur/q_cur
        let g = if (&p_cur * &q_prev - &p_prev * &q_cur).is_one() {
            Mat2::new(p_cur.clone(), p_prev.clone(), q_cur.clone(), q_prev.clone())
        } else {
            Mat2::new(p_cur.clone(), -&p_prev, q_cur.clone(), -&q_prev)
        };
        out.push(sign_normalize(g));
        let r = &x - &a * &y;
        x = std::mem::replace(&mut y, r);
    }
    out
}

fn formal_of(p: &PointRef) -> Result<&FormalPoint, ModSymError> {
    match p {
        PointRef::Formal(f) => Ok(f),
        PointRef::Cusp { .. } => Err(ModSymError::CuspEndpoint),
    }
}

/// The boundary pushed to Gamma-coinvariants: each point g H(tau) contributes
/// its polynomial transported by g^(-1) at the key H.
pub fn boundary_class(ch: &SymbolChain) -> Result<BTreeMap<Hnf, HomPoly>, ModSymError> {
    let mut acc: BTreeMap<Hnf, HomPoly> = BTreeMap::new();
    for t in &ch.terms {
        for (pt, sign) in [(&t.to, Rational::one()), (&t.from, -Rational::one())] {
            let f = formal_of(pt)?;
            let moved = act_unchecked(&f.transport.adj(), &t.poly);
            acc.entry(f.hnf.clone())
                .or_insert_with(|| HomPoly::zero(ch.weight, moved.basis()))
                .add_assign_scaled(&moved, &(&t.coeff * sign));
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

pub fn is_cycle(ch: &SymbolChain) -> Result<bool, ModSymError> {
    Ok(boundary_class(ch)?.is_empty())
}

fn primitive_up_to_sign(m: &Mat2) -> Mat2 {
    let g = m.a.gcd(&m.b).gcd(&m.c).gcd(&m.d);
    let r = Mat2::new(&m.a / &g, &m.b / &g, &m.c / &g, &m.d / &g);
    if r.a.is_negative() || (r.a.is_zero() && r.c.is_negative()) {
        r.neg()
    } else {
        r
    }
}

/// Normal form of a chain of Formal symbols in Gamma-coinvariants. Each term
/// {g1 H1 tau, M2 tau} (x) P is moved to {H1 tau, g1^(-1) M2 tau} (x) g1^(-1) P;
/// orientation is fixed by choosing the smaller of the two possible keys.
pub fn coinvariant_form(ch: &SymbolChain) -> Result<BTreeMap<(Hnf, Mat2), HomPoly>, ModSymError> {
    let mut acc: BTreeMap<(Hnf, Mat2), HomPoly> = BTreeMap::new();
    for t in &ch.terms {
        let x = formal_of(&t.from)?;
        let y = formal_of(&t.to)?;
        let fwd_key = (
            x.hnf.clone(),
            primitive_up_to_sign(&x.transport.adj().mul(&y.matrix())),
        );
        let back_key = (
            y.hnf.clone(),
            primitive_up_to_sign(&y.transport.adj().mul(&x.matrix())),
        );
        let (key, g_inv, sign) = if fwd_key <= back_key {
            (fwd_key, x.transport.adj(), Rational::one())
        } else {
            (back_key, y.transport.adj(), -Rational::one())
        };
        let moved = act_unchecked(&g_inv, &t.poly);
        acc.entry(key)
            .or_insert_with(|| HomPoly::zero(ch.weight, moved.basis()))
            .add_assign_scaled(&moved, &(&t.coeff * sign));
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

/// The three-term cycle built from the path {(S tau0 + j)/p^k, (tau1 + j)/p^k} (x) E1
/// closed off by the two dagger polynomials; tau0 and tau1 are given as matrices.
pub fn build_ctilde(
    n: usize,
    params: &LiftParams,
    tau0: &Mat2,
    tau1: &Mat2,
) -> Result<SymbolChain, ModSymError> {
    let polys = lift_polys(n, params)?;
    let pk = ipow(params.p, params.k);
    let shift = Mat2::new(BigInt::one(), params.j.clone(), BigInt::zero(), pk);
    let start = shift.mul(&Mat2::s()).mul(tau0);
    let end = shift.mul(tau1);
    let x0 = Mat2::new(
        ipow(params.p, params.l),
        -&params.d,
        BigInt::zero(),
        ipow(params.p, params.k - params.l),
    )
    .mul(tau0);
    let t = Mat2::t();
    let mut ch = SymbolChain::new(n);
    ch.push(
        PointRef::formal(&start)?,
        PointRef::formal(&end)?,
        polys.e1,
        Rational::one(),
    );
    ch.push(
        PointRef::formal(&end)?,
        PointRef::formal(&t.mul(&end))?,
        polys.p1,
        -Rational::one(),
    );
    ch.push(
        PointRef::formal(&x0)?,
        PointRef::formal(&t.mul(&x0))?,
        polys.p0,
        -Rational::one(),
    );
    Ok(ch)
}

/// The basic cycle C~_nu(tau) built at the basepoint.
pub fn basic_cycle(n: usize, nu: usize) -> Result<SymbolChain, ModSymError> {
    let params = LiftParams::new(n, 2, nu, 0, BigInt::zero())?;
    build_ctilde(n, &params, &Mat2::identity(), &Mat2::identity())
}

/// The cycle for (k, j) with tau0 = tau/p^M and tau1 = p^M tau.
pub fn ctilde_at_depth(
    n: usize,
    p: u64,
    nu: usize,
    k: u32,
    j: BigInt,
    depth: u32,
) -> Result<SymbolChain, ModSymError> {
    let params = LiftParams::new(n, p, nu, k, j)?;
    let pm = ipow(p, depth);
    let tau0 = Mat2::diag(BigInt::one(), pm.clone());
    let tau1 = Mat2::diag(pm, BigInt::one());
    build_ctilde(n, &params, &tau0, &tau1)
}

/// Integral lift of T_p^m applied to the basic cycle: the sum over A, k, j of
/// C(m-A, A) p^((n+1)A) p^((n-nu)(m-2A-k)) C~_{nu,k,j}(tau/p^M, p^M tau), M = m-2A-k.
pub fn build_lift(n: usize, p: u64, nu: usize, m: u32) -> Result<SymbolChain, ModSymError> {
    // validates nu and p once
    LiftParams::new(n, p, nu, 0, BigInt::zero())?;
    let mut jobs = Vec::new();
    for a in 0..=m / 2 {
        let outer = big_rat(hecke_power_coeff(m - a, a) * ipow(p, (n as u32 + 1) * a));
        for k in 0..=(m - 2 * a) {
            let depth = m - 2 * a - k;
            let scale = &outer * big_rat(ipow(p, (n - nu) as u32 * depth));
            let count: u64 = p.pow(k);
            for j in 0..count {
                jobs.push((k, j, depth, scale.clone()));
            }
        }
    }
    let parts: Result<Vec<SymbolChain>, ModSymError> = jobs
        .par_iter()
        .map(|(k, j, depth, scale)| {
            Ok(ctilde_at_depth(n, p, nu, *k, BigInt::from(*j), *depth)?.scale(scale))
        })
        .collect();
    let mut out = SymbolChain::new(n);
    for part in parts? {
        out.terms.extend(part.terms);
    }
    Ok(out)
}

/// Minimum ord_p over all coefficient-times-polynomial entries; `None` for the empty chain.
pub fn integrality_report(ch: &SymbolChain, p: u64) -> Option<i64> {
    ch.terms
        .iter()
        .flat_map(|t| {
            t.poly
                .coeffs()
                .iter()
                .map(move |c| padic_val(&(c * &t.coeff), p))
        })
        .flatten()
        .min()
}

/// Convenience: the chain {tau, g tau} (x) P.
pub fn path_from_basepoint(g: &Mat2, poly: HomPoly) -> Result<SymbolChain, ModSymError> {
    Ok(SymbolChain::single(
        PointRef::formal(&Mat2::identity())?,
        PointRef::formal(g)?,
        poly,
    ))
}
