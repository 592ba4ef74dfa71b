//! Real quadratic orders: narrow classes through cycles of reduced indefinite
//! forms, totally positive units, the cycles attached to classes, partial zeta
//! values at negative integers and higher Rademacher symbols.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{
    big_rat, frac, int, is_fundamental_discriminant, padic_val, zeta_denominator, zeta_neg,
    zeta_numerator, Rational,
};
use crate::eis_eval::{cocycle_cached, pair_cycle, EisError};
use crate::modsym::{path_from_basepoint, SymbolChain};
use crate::sympoly::{act_unchecked, Basis, HomPoly, Mat2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("{0} is not a valid discriminant (need D > 0, D = 0 or 1 mod 4, not a square)")]
    InvalidDiscriminant(i64),
    #[error("k must be at least 2, got {0}")]
    WeightTooSmall(usize),
    #[error("trace zero or scalar matrix has no attached form")]
    DegenerateTrace,
    #[error("matrix is not in SL2(Z)")]
    NotSl2,
    #[error("basis does not give an integral automorph")]
    BadBasis,
    #[error("class index {index} out of range ({count} classes)")]
    ClassIndex { index: usize, count: usize },
    #[error(transparent)]
    Eis(#[from] EisError),
}

/// x + y sqrt(D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadNum {
    pub x: Rational,
    pub y: Rational,
    pub disc: i64,
}

impl QuadNum {
    pub fn new(x: Rational, y: Rational, disc: i64) -> Self {
        QuadNum { x, y, disc }
    }

    pub fn rational(x: Rational, disc: i64) -> Self {
        QuadNum::new(x, Rational::zero(), disc)
    }

    pub fn add(&self, o: &QuadNum) -> QuadNum {
        QuadNum::new(&self.x + &o.x, &self.y + &o.y, self.disc)
    }

    pub fn sub(&self, o: &QuadNum) -> QuadNum {
        QuadNum::new(&self.x - &o.x, &self.y - &o.y, self.disc)
    }

    pub fn mul(&self, o: &QuadNum) -> QuadNum {
        let d = int(self.disc);
        QuadNum::new(
            &self.x * &o.x + &d * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
            self.disc,
        )
    }

    pub fn scale(&self, s: &Rational) -> QuadNum {
        QuadNum::new(&self.x * s, &self.y * s, self.disc)
    }

    pub fn conj(&self) -> QuadNum {
        QuadNum::new(self.x.clone(), -self.y.clone(), self.disc)
    }

    pub fn norm(&self) -> Rational {
        &self.x * &self.x - int(self.disc) * &self.y * &self.y
    }

    pub fn trace(&self) -> Rational {
        int(2) * &self.x
    }

    /// Sign of the real embedding with sqrt(D) > 0.
    pub fn signum(&self) -> i32 {
        let sign = |q: &Rational| {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        };
        let (sx, sy) = (sign(&self.x), sign(&self.y));
        if sx * sy >= 0 {
            return if sx != 0 { sx } else { sy };
        }
        if &self.x * &self.x > int(self.disc) * &self.y * &self.y {
            sx
        } else {
            sy
        }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            crate::arith::fmt_rat(&self.x),
            crate::arith::fmt_rat(&self.y),
            self.disc
        )
    }
}

/// a X^2 + b XY + c Y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let a2 = 2 * self.a.abs();
        self.b > 0
            && self.b * self.b < d
            && (a2 + self.b) * (a2 + self.b) > d
            && (a2 - self.b <= 0 || (a2 - self.b) * (a2 - self.b) < d)
    }

    pub fn inverse(&self) -> QForm {
        QForm::new(self.a, -self.b, self.c)
    }

    /// One reduction step (a,b,c) -> (c, b', (b'^2 - D)/4c) with b' = -b mod 2|c|
    /// in the window (sqrt D - 2|c|, sqrt D), plus the SL2 substitution used.
    pub fn rho(&self) -> (QForm, Mat2) {
        let d = self.disc();
        let s = d.isqrt();
        let m = 2 * self.c.abs();
        let bp = s - (s + self.b).rem_euclid(m);
        let t = (bp + self.b) / (2 * self.c);
        let next = QForm::new(self.c, bp, (bp * bp - d) / (4 * self.c));
        (next, Mat2::from_i64(0, -1, 1, t))
    }

    /// f(g (X, Y)) for a matrix acting on column vectors.
    pub fn transform(&self, g: &Mat2) -> QForm {
        let (a, b, c) = (
            BigInt::from(self.a),
            BigInt::from(self.b),
            BigInt::from(self.c),
        );
        let (p, q, r, s) = (&g.a, &g.b, &g.c, &g.d);
        let na = &a * p * p + &b * p * r + &c * r * r;
        let nb = BigInt::from(2) * &a * p * q + &b * (p * s + q * r) + BigInt::from(2) * &c * r * s;
        let nc = &a * q * q + &b * q * s + &c * s * s;
        let v = |x: BigInt| x.to_i64().expect("form coefficients fit in i64");
        QForm::new(v(na), v(nb), v(nc))
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadOrder {
    pub disc: i64,
    pub fundamental_disc: i64,
    pub conductor: i64,
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self, QuadError> {
        if !valid_discriminant(disc) {
            return Err(QuadError::InvalidDiscriminant(disc));
        }
        let mut f = (disc as f64).sqrt() as i64 + 1;
        while f >= 1 {
            if disc % (f * f) == 0 && is_fundamental_discriminant(disc / (f * f)) {
                return Ok(QuadOrder {
                    disc,
                    fundamental_disc: disc / (f * f),
                    conductor: f,
                });
            }
            f -= 1;
        }
        Err(QuadError::InvalidDiscriminant(disc))
    }
}

pub fn valid_discriminant(d: i64) -> bool {
    d > 0 && (d % 4 == 0 || d % 4 == 1) && d.isqrt().pow(2) != d
}

/// Minimal t, u > 0 with t^2 - D u^2 = 4.
pub fn fundamental_unit_tp(disc: i64) -> Result<(BigInt, BigInt), QuadError> {
    if !valid_discriminant(disc) {
        return Err(QuadError::InvalidDiscriminant(disc));
    }
    if disc <= 16 {
        return Ok(pell4_brute(disc, 1000).expect("small discriminant"));
    }
    let d = BigInt::from(disc);
    let a0 = BigInt::from(disc.isqrt());
    // continued fraction of sqrt D with convergents p/q
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut stop_at: Option<BigInt> = None;
    loop {
        let val = &p * &p - &d * &q * &q;
        let cand = if val == BigInt::from(4) {
            Some((p.clone(), q.clone()))
        } else if val.is_one() {
            if stop_at.is_none() {
                stop_at = Some(&q * 2);
            }
            Some((&p * 2, &q * 2))
        } else {
            None
        };
        if let Some((t, u)) = cand {
            if best.as_ref().is_none_or(|(_, bu)| &u < bu) {
                best = Some((t, u));
            }
        }
        if let Some(limit) = &stop_at {
            if &q >= limit {
                break;
            }
        }
        m = &den * &a - &m;
        den = (&d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok(best.expect("a +1 solution always appears"))
}

fn pell4_brute(disc: i64, max_u: i64) -> Option<(BigInt, BigInt)> {
    (1..=max_u).find_map(|u| {
        let t2 = disc * u * u + 4;
        let t = t2.isqrt();
        (t * t == t2).then(|| (BigInt::from(t), BigInt::from(u)))
    })
}

/// All primitive reduced forms of discriminant D.
pub fn reduced_forms(disc: i64) -> Vec<QForm> {
    let s = disc.isqrt();
    let mut out = Vec::new();
    for a in -s..=s {
        if a == 0 {
            continue;
        }
        for b in 1..=s {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QForm::new(a, b, num / (4 * a));
            if f.is_primitive() && f.is_reduced() {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NarrowClass {
    pub index: usize,
    pub representative: QForm,
    pub cycle: Vec<QForm>,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub unit_t: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub unit_u: BigInt,
    #[serde(serialize_with = "ser_mat")]
    pub automorph: Mat2,
}

fn ser_mat<S: serde::Serializer>(m: &Mat2, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    m.entries()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .serialize(s)
}

impl NarrowClass {
    /// Ideal basis (alpha1, alpha2) = ((-b + sqrt D)/2, a) of the representative.
    pub fn basis(&self) -> (QuadNum, QuadNum) {
        form_basis(&self.representative)
    }
}

fn form_basis(f: &QForm) -> (QuadNum, QuadNum) {
    let d = f.disc();
    (
        QuadNum::new(frac(-f.b, 2), frac(1, 2), d),
        QuadNum::rational(int(f.a), d),
    )
}

/// gamma0 = [[(t - bu)/2, -cu], [au, (t + bu)/2]] for a form (a,b,c).
pub fn form_automorph(f: &QForm, t: &BigInt, u: &BigInt) -> Mat2 {
    let (a, b, c) = (BigInt::from(f.a), BigInt::from(f.b), BigInt::from(f.c));
    Mat2::new((t - &b * u) / 2, -(&c * u), &a * u, (t + &b * u) / 2)
}

/// One class per cycle of reduced forms, ordered by the smallest form of each cycle.
pub fn narrow_classes(disc: i64) -> Result<Vec<NarrowClass>, QuadError> {
    if !valid_discriminant(disc) {
        return Err(QuadError::InvalidDiscriminant(disc));
    }
    let (t, u) = fundamental_unit_tp(disc)?;
    let mut pending: std::collections::BTreeSet<QForm> = reduced_forms(disc).into_iter().collect();
    let mut out = Vec::new();
    while let Some(&start) = pending.iter().next() {
        let mut cycle = vec![start];
        let mut cur = start.rho().0;
        while cur != start {
            cycle.push(cur);
            cur = cur.rho().0;
        }
        for f in &cycle {
            pending.remove(f);
        }
        let representative = *cycle.iter().find(|f| f.a > 0).expect("signs alternate");
        out.push(NarrowClass {
            index: out.len(),
            representative,
            automorph: form_automorph(&representative, &t, &u),
            cycle,
            unit_t: t.clone(),
            unit_u: u.clone(),
        });
    }
    Ok(out)
}

/// Product of the reduction substitutions around a cycle: an automorph of its first form.
pub fn cycle_automorph(cycle: &[QForm]) -> Mat2 {
    cycle
        .iter()
        .fold(Mat2::identity(), |acc, f| acc.mul(&f.rho().1))
}

/// -(1/Na)(alpha2 X1 - alpha1 X2)(alpha2' X1 - alpha1' X2) as a weight-2 polynomial.
pub fn norm_form_poly(alpha1: &QuadNum, alpha2: &QuadNum, norm_ideal: &Rational) -> HomPoly {
    let x2sq = -alpha1.mul(&alpha1.conj()).x.clone() / norm_ideal;
    let mixed = alpha1.mul(&alpha2.conj()).add(&alpha1.conj().mul(alpha2)).x / norm_ideal;
    let x1sq = -alpha2.mul(&alpha2.conj()).x.clone() / norm_ideal;
    HomPoly::from_coeffs(vec![x2sq, mixed, x1sq], Basis::Primary)
}

/// The integer matrix with gamma (alpha1, alpha2)^T = eps (alpha1, alpha2)^T.
pub fn automorph_for_basis(
    alpha1: &QuadNum,
    alpha2: &QuadNum,
    eps: &QuadNum,
) -> Result<Mat2, QuadError> {
    let det = &alpha1.x * &alpha2.y - &alpha2.x * &alpha1.y;
    if det.is_zero() {
        return Err(QuadError::BadBasis);
    }
    let solve_row = |target: &QuadNum| -> (Rational, Rational) {
        let m1 = (&target.x * &alpha2.y - &alpha2.x * &target.y) / &det;
        let m2 = (&alpha1.x * &target.y - &target.x * &alpha1.y) / &det;
        (m1, m2)
    };
    let (a, b) = solve_row(&eps.mul(alpha1));
    let (c, d) = solve_row(&eps.mul(alpha2));
    if [&a, &b, &c, &d].iter().any(|x| !x.is_integer()) {
        return Err(QuadError::BadBasis);
    }
    Ok(Mat2::new(
        a.to_integer(),
        b.to_integer(),
        c.to_integer(),
        d.to_integer(),
    ))
}

pub fn unit_quadnum(disc: i64, t: &BigInt, u: &BigInt) -> QuadNum {
    QuadNum::new(
        Rational::new(t.clone(), BigInt::from(2)),
        Rational::new(u.clone(), BigInt::from(2)),
        disc,
    )
}

/// {tau, gamma0 tau} (x) N^(k-1) for an oriented basis of an ideal of norm norm_ideal.
pub fn basis_cycle(
    alpha1: &QuadNum,
    alpha2: &QuadNum,
    norm_ideal: &Rational,
    t: &BigInt,
    u: &BigInt,
    k: usize,
) -> Result<(SymbolChain, Mat2), QuadError> {
    if k < 2 {
        return Err(QuadError::WeightTooSmall(k));
    }
    let disc = alpha1.disc;
    let gamma0 = automorph_for_basis(alpha1, alpha2, &unit_quadnum(disc, t, u))?;
    let norm_poly = norm_form_poly(alpha1, alpha2, norm_ideal);
    debug_assert_eq!(act_unchecked(&gamma0, &norm_poly), norm_poly);
    let chain = path_from_basepoint(&gamma0, norm_poly.pow(k - 1))
        .map_err(|e| QuadError::Eis(EisError::ModSym(e)))?;
    Ok((chain, gamma0))
}

/// The cycle attached to a class: the one-term chain {tau, gamma0 tau} (x) N^(k-1).
pub fn zclass_cycle(class: &NarrowClass, k: usize) -> Result<SymbolChain, QuadError> {
    if k < 2 {
        return Err(QuadError::WeightTooSmall(k));
    }
    let norm_poly = norm_form_poly(
        &class.basis().0,
        &class.basis().1,
        &int(class.representative.a),
    );
    if q_gamma(&class.automorph)? != norm_poly {
        return Err(QuadError::BadBasis);
    }
    path_from_basepoint(&class.automorph, norm_poly.pow(k - 1))
        .map_err(|e| QuadError::Eis(EisError::ModSym(e)))
}

fn zeta_from_pairing(pairing: Rational, k: usize) -> Rational {
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    sign * zeta_neg(2 * k) * pairing
}

/// zeta_O(A, 1-k) from any positively oriented basis of an ideal in the class of A^-1.
pub fn partial_zeta_from_basis(
    alpha1: &QuadNum,
    alpha2: &QuadNum,
    norm_ideal: &Rational,
    t: &BigInt,
    u: &BigInt,
    k: usize,
) -> Result<Rational, QuadError> {
    let (chain, _) = basis_cycle(alpha1, alpha2, norm_ideal, t, u, k)?;
    let c = cocycle_cached(2 * k - 2)?;
    Ok(zeta_from_pairing(pair_cycle(&c, &chain)?, k))
}

/// zeta_O(A, 1-k) through a form (a,b,c) with a > 0 representing A.
pub fn partial_zeta_for_form(f: &QForm, k: usize) -> Result<Rational, QuadError> {
    if f.a <= 0 {
        return Err(QuadError::BadBasis);
    }
    let (t, u) = fundamental_unit_tp(f.disc())?;
    let inv = f.inverse();
    let (a1, a2) = form_basis(&inv);
    partial_zeta_from_basis(&a1, &a2, &int(inv.a), &t, &u, k)
}

pub fn partial_zeta_neg(class: &NarrowClass, k: usize) -> Result<Rational, QuadError> {
    if k < 2 {
        return Err(QuadError::WeightTooSmall(k));
    }
    let inv = class.representative.inverse();
    let (a1, a2) = form_basis(&inv);
    partial_zeta_from_basis(&a1, &a2, &int(inv.a), &class.unit_t, &class.unit_u, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialZetaRow {
    #[serde(rename = "D")]
    pub disc: i64,
    pub conductor: i64,
    pub class_index: usize,
    pub form: String,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub zeta: Rational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub j_times_zeta: Rational,
}

pub fn partial_zeta_table(disc: i64, k: usize) -> Result<Vec<PartialZetaRow>, QuadError> {
    let order = QuadOrder::new(disc)?;
    let j = big_rat(zeta_denominator(2 * k));
    narrow_classes(disc)?
        .iter()
        .map(|cl| {
            let z = partial_zeta_neg(cl, k)?;
            Ok(PartialZetaRow {
                disc,
                conductor: order.conductor,
                class_index: cl.index,
                form: cl.representative.to_string(),
                k,
                j_times_zeta: &j * &z,
                zeta: z,
            })
        })
        .collect()
}

/// Q_gamma = -sgn(a+d)/gcd(c, a-d, b) (c X1^2 - (a-d) X1 X2 - b X2^2).
pub fn q_gamma(g: &Mat2) -> Result<HomPoly, QuadError> {
    if !g.is_sl2() {
        return Err(QuadError::NotSl2);
    }
    let tr = g.trace();
    let amd = &g.a - &g.d;
    let gcd = g.c.gcd(&amd).gcd(&g.b);
    if tr.is_zero() || gcd.is_zero() {
        return Err(QuadError::DegenerateTrace);
    }
    let s = Rational::new(-tr.signum(), gcd);
    Ok(HomPoly::from_coeffs(
        vec![
            -big_rat(g.b.clone()) * &s,
            -big_rat(amd) * &s,
            big_rat(g.c.clone()) * &s,
        ],
        Basis::Primary,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RademacherReport {
    pub k: usize,
    #[serde(serialize_with = "ser_mat")]
    pub gamma: Mat2,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub value: Rational,
    pub integral: bool,
}

/// Psi_k(gamma) = N_2k <Eis_(2k-2), {tau, gamma tau} (x) Q_gamma^(k-1)>.
pub fn rademacher(k: usize, g: &Mat2) -> Result<RademacherReport, QuadError> {
    if k < 2 {
        return Err(QuadError::WeightTooSmall(k));
    }
    let q = q_gamma(g)?;
    let chain =
        path_from_basepoint(g, q.pow(k - 1)).map_err(|e| QuadError::Eis(EisError::ModSym(e)))?;
    let c = cocycle_cached(2 * k - 2)?;
    let value = big_rat(zeta_numerator(2 * k)) * pair_cycle(&c, &chain)?;
    Ok(RademacherReport {
        k,
        gamma: g.clone(),
        integral: value.is_integer(),
        value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpnessWitness {
    #[serde(rename = "D")]
    pub disc: i64,
    pub class_index: usize,
    pub form: String,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub j_times_zeta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub k: usize,
    pub p: u64,
    pub max_disc: i64,
    pub witness: Option<SharpnessWitness>,
    pub exhausted: bool,
}

fn witness_for(disc: i64, k: usize, p: u64) -> Result<Option<SharpnessWitness>, QuadError> {
    let j = big_rat(zeta_denominator(2 * k));
    for cl in narrow_classes(disc)? {
        let v = &j * partial_zeta_neg(&cl, k)?;
        if padic_val(&v, p) == Some(0) {
            return Ok(Some(SharpnessWitness {
                disc,
                class_index: cl.index,
                form: cl.representative.to_string(),
                j_times_zeta: v,
            }));
        }
    }
    Ok(None)
}

/// First (D, class) with ord_p(J_2k zeta_O(A, 1-k)) = 0, smallest D first.
pub fn sharpness_search(k: usize, p: u64, max_disc: i64) -> Result<SharpnessReport, QuadError> {
    if k < 2 {
        return Err(QuadError::WeightTooSmall(k));
    }
    let discs: Vec<i64> = (5..=max_disc).filter(|&d| valid_discriminant(d)).collect();
    let found = discs
        .par_iter()
        .map(|&d| witness_for(d, k, p))
        .find_map_first(|r| match r {
            Ok(Some(w)) => Some(Ok(w)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?;
    Ok(SharpnessReport {
        k,
        p,
        max_disc,
        exhausted: found.is_none(),
        witness: found,
    })
}
