//! End-to-end acceptance checks, shared by the test suite and the CLI self-test.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    bernoulli_number, big_rat, dirichlet_l_neg, fmt_rat, frac, int, ipow,
    is_fundamental_discriminant, padic_val, primes_up_to, zeta_neg, Rational,
};
use crate::eis_eval::{
    cocycle_cached, d_value, denominator_eis, eisenstein_cocycle, hecke_eigen_check, lift_limit,
    pair_cycle, pair_lift, sigma_k,
};
use crate::modsym::{
    basic_cycle, build_lift, coinvariant_form, ctilde_at_depth, hecke_up, hecke_vp,
    integrality_report, is_cycle, path_from_basepoint, PointRef, SymbolChain,
};
use crate::numeric::{min_height, numeric_chain, DEFAULT_TERMS};
use crate::padic::{
    congruence_case1, congruence_case2, irregular_index, lp_neg, skula_bound_ok, teichmuller,
};
use crate::quadfield::{
    narrow_classes, partial_zeta_neg, partial_zeta_table, q_gamma, rademacher, sharpness_search,
    valid_discriminant, zclass_cycle,
};
use crate::sympoly::{act, act_dual, dagger, ddagger, pair_dual, Basis, HomPoly, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An empirical search that missed within budget; recorded, not failed.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Reported => "REPORTED",
        };
        format!("[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "denominator theorem"),
    (2, "rational pairing values"),
    (3, "hecke eigen property"),
    (4, "p-adic limit"),
    (5, "lift integrality"),
    (6, "rademacher integrality"),
    (7, "partial zeta integrality"),
    (8, "class-sum oracle"),
    (9, "sharpness witnesses"),
    (10, "numeric oracle"),
    (11, "property suites"),
];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn denominator_theorem() -> Check {
    let rows: Vec<Result<String, String>> = (2..=20usize)
        .step_by(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let r = denominator_eis(n, 1000).map_err(err)?;
            let bad: Vec<u64> = r
                .per_prime
                .iter()
                .filter(|x| !x.matches)
                .map(|x| x.p)
                .collect();
            ensure(bad.is_empty(), || {
                format!("n={n}: mismatch at p in {bad:?}")
            })?;
            Ok(format!("{}", r.numerator))
        })
        .collect();
    let nums: Vec<String> = rows.into_iter().collect::<Result<_, _>>()?;
    ensure(nums[4] == "691" && nums[6] == "3617", || {
        format!("unexpected numerators {} and {}", nums[4], nums[6])
    })?;
    Ok("n=2..20, p<=1000 all match; N_12=691, N_16=3617".to_string())
}

fn rational_pairings() -> Check {
    for (n, nu, expect) in [(2usize, 1usize, int(1)), (4, 1, frac(1, 4))] {
        let closed = d_value(n, nu).map_err(err)?;
        let c = eisenstein_cocycle(n).map_err(err)?;
        let via_chain = pair_cycle(&c, &basic_cycle(n, nu).map_err(err)?).map_err(err)?;
        let deeper = pair_cycle(
            &c,
            &ctilde_at_depth(n, 3, nu, 0, BigInt::zero(), 2).map_err(err)?,
        )
        .map_err(err)?;
        ensure(
            closed == expect && via_chain == expect && deeper == expect,
            || format!("D({n},{nu}): closed {closed}, chain {via_chain}, deeper chain {deeper}"),
        )?;
    }
    Ok("D(2,1)=1 and D(4,1)=1/4 by closed form and by chains".into())
}

fn hecke_eigen() -> Check {
    for n in (2..=12).step_by(2) {
        let c = cocycle_cached(n).map_err(err)?;
        ensure(hecke_eigen_check(&c, 2).map_err(err)?, || {
            format!("n={n}: defect is not a coboundary")
        })?;
    }
    Ok("n=2..12: phi|T'_2 - (1+2^(n+1)) phi is a coboundary".into())
}

/// Along M = 1!, ..., 5! the defect valuations must not drop, must grow whenever
/// ord_5(M) grows, and keep growing at M = 125 where ord_5(M) = 3.
fn padic_limit() -> Check {
    let (n, p, nu) = (2usize, 5u64, 1usize);
    let limit = lift_limit(n, nu, p).map_err(err)?;
    let ord_at = |m: u32| -> Result<i64, String> {
        let diff = pair_lift(n, p, nu, m).map_err(err)? - &limit;
        Ok(padic_val(&diff, p).unwrap_or(i64::MAX))
    };
    let steps = [1u32, 2, 6, 24, 120];
    let vals = steps
        .iter()
        .map(|&m| ord_at(m))
        .collect::<Result<Vec<_>, _>>()?;
    let shown: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    ensure(vals.windows(2).all(|w| w[0] <= w[1]), || {
        format!("valuations drop: {}", shown.join(","))
    })?;
    ensure(vals[4] > vals[3] && vals[4] > vals[0], || {
        format!("no growth at 5!: {}", shown.join(","))
    })?;
    let deeper = ord_at(125)?;
    ensure(deeper > vals[4], || {
        format!("ord at M=125 is {deeper}, not above {}", vals[4])
    })?;
    Ok(format!(
        "ord_5 along M=1,2,6,24,120: {}; M=125: {deeper} (limit {})",
        shown.join(","),
        fmt_rat(&limit)
    ))
}

fn lift_integrality() -> Check {
    let mut jobs = Vec::new();
    for n in [2usize, 4] {
        for p in [2u64, 3, 5] {
            for m in [n as u32, n as u32 + 1, n as u32 + 2] {
                for nu in 1..n {
                    jobs.push((n, p, m, nu));
                }
            }
        }
    }
    let worst = jobs
        .par_iter()
        .map(|&(n, p, m, nu)| -> Result<i64, String> {
            let lift = build_lift(n, p, nu, m).map_err(err)?;
            ensure(is_cycle(&lift).map_err(err)?, || {
                format!("lift n={n} p={p} nu={nu} m={m} is not a cycle")
            })?;
            let v = integrality_report(&lift, p).unwrap_or(i64::MAX);
            ensure(v >= 0, || {
                format!("lift n={n} p={p} nu={nu} m={m} has ord {v}")
            })?;
            Ok(v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(format!(
        "{} lifts are p-integral cycles (min ord {})",
        worst.len(),
        worst.iter().min().unwrap_or(&0)
    ))
}

/// Pseudo-random SL2(Z) matrices with entries bounded by `bound` and nonzero trace.
pub fn sample_sl2(seed: u64, count: usize, bound: i64) -> Vec<Mat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(-bound..=bound);
        let b = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        if a == 0 || (1 + b * c) % a != 0 {
            continue;
        }
        let d = (1 + b * c) / a;
        if d.abs() > bound || a + d == 0 {
            continue;
        }
        out.push(Mat2::from_i64(a, b, c, d));
    }
    out
}

fn rademacher_integrality() -> Check {
    let gammas = sample_sl2(2024, 200, 100);
    let bad: Vec<String> = gammas
        .par_iter()
        .flat_map_iter(|g| {
            (2..=5usize).filter_map(move |k| match rademacher(k, g) {
                Ok(r) if r.integral => None,
                Ok(r) => Some(format!("k={k} {g}: {}", fmt_rat(&r.value))),
                Err(e) => Some(format!("k={k} {g}: {e}")),
            })
        })
        .collect();
    ensure(bad.is_empty(), || {
        format!("non-integral values: {}", bad.join("; "))
    })?;
    let psi_t = rademacher(2, &Mat2::t()).map_err(err)?.value;
    ensure(psi_t == int(1), || format!("Psi_2(T) = {psi_t}"))?;
    let c = cocycle_cached(2).map_err(err)?;
    for a in -5i64..=5 {
        let x2 = HomPoly::basis_vec(2, 0, Basis::Primary);
        let ch = path_from_basepoint(&Mat2::t_pow(a.into()), x2).map_err(err)?;
        let v = pair_cycle(&c, &ch).map_err(err)?;
        ensure(v == int(a), || format!("pairing with T^{a} path gave {v}"))?;
        if a != 0 {
            let psi = rademacher(2, &Mat2::t_pow(a.into())).map_err(err)?.value;
            ensure(psi == int(a.abs()), || format!("Psi_2(T^{a}) = {psi}"))?;
        }
    }
    Ok("800 values integral; Psi_2(T)=1; T^a paths pair to a".into())
}

fn partial_zeta_integrality() -> Check {
    let discs: Vec<i64> = (5..=200).filter(|&d| valid_discriminant(d)).collect();
    let bad: Vec<String> = discs
        .par_iter()
        .flat_map_iter(|&d| {
            [2usize, 3, 4]
                .into_iter()
                .flat_map(move |k| match partial_zeta_table(d, k) {
                    Ok(rows) => rows
                        .into_iter()
                        .filter(|r| !r.j_times_zeta.is_integer())
                        .map(|r| format!("D={d} k={k} class {}", r.class_index))
                        .collect::<Vec<_>>(),
                    Err(e) => vec![format!("D={d} k={k}: {e}")],
                })
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let z5 = partial_zeta_neg(&narrow_classes(5).map_err(err)?[0], 2).map_err(err)?;
    let z8 = partial_zeta_neg(&narrow_classes(8).map_err(err)?[0], 2).map_err(err)?;
    ensure(z5 == frac(1, 30) && z8 == frac(1, 12), || {
        format!("D=5: {z5}, D=8: {z8}")
    })?;
    Ok(format!(
        "{} discriminants, k=2,3,4 integral; D=5 -> 1/30, D=8 -> 1/12",
        discs.len()
    ))
}

fn class_sum() -> Check {
    let discs: Vec<i64> = (5..=100)
        .filter(|&d| is_fundamental_discriminant(d))
        .collect();
    let bad: Vec<String> = discs
        .par_iter()
        .flat_map_iter(|&d| {
            [2usize, 3].into_iter().filter_map(move |k| {
                let classes = narrow_classes(d).ok()?;
                let total: Result<Rational, _> =
                    classes.iter().map(|c| partial_zeta_neg(c, k)).sum();
                let rhs = dirichlet_l_neg(k, d).map(|l| zeta_neg(k) * l);
                match (total, rhs) {
                    (Ok(t), Ok(r)) if t == r => None,
                    (t, r) => Some(format!("D={d} k={k}: {t:?} vs {r:?}")),
                }
            })
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} fundamental discriminants, k=2,3", discs.len()))
}

/// Witnesses per prime; misses within the budget are reported.
pub fn sharpness_outcome() -> (Status, String) {
    let mut parts = Vec::new();
    let mut missed = false;
    for p in [2u64, 3, 5] {
        match sharpness_search(2, p, 400) {
            Ok(r) => match r.witness {
                Some(w) => parts.push(format!(
                    "p={p}: D={} class {} J*zeta={}",
                    w.disc,
                    w.class_index,
                    fmt_rat(&w.j_times_zeta)
                )),
                None => {
                    missed = true;
                    parts.push(format!("p={p}: none with D<=400"));
                }
            },
            Err(e) => return (Status::Fail, format!("p={p}: {e}")),
        }
    }
    let status = if missed {
        Status::Reported
    } else {
        Status::Pass
    };
    (status, parts.join("; "))
}

/// The designated integrals: label, chain, basepoint.
pub fn designated_integrals() -> Result<Vec<(String, SymbolChain, Complex64)>, String> {
    let x2 = |n: usize| HomPoly::basis_vec(n, 0, Basis::Primary);
    let golden = Mat2::from_i64(2, 1, 1, 1);
    let q = q_gamma(&golden).map_err(err)?;
    let d5 = &narrow_classes(5).map_err(err)?[0];
    let mut inv = d5.clone();
    inv.representative = d5.representative.inverse();
    inv.automorph = crate::quadfield::form_automorph(&inv.representative, &d5.unit_t, &d5.unit_u);
    Ok(vec![
        (
            "{tau, T tau} (x) X2^2".into(),
            path_from_basepoint(&Mat2::t(), x2(2)).map_err(err)?,
            Complex64::new(0.0, 1.0),
        ),
        (
            "C_1 weight 2".into(),
            basic_cycle(2, 1).map_err(err)?,
            Complex64::new(0.5, 1.0),
        ),
        (
            "C_1 weight 4".into(),
            basic_cycle(4, 1).map_err(err)?,
            Complex64::new(0.5, 1.0),
        ),
        (
            "C_3 weight 4".into(),
            basic_cycle(4, 3).map_err(err)?,
            Complex64::new(0.5, 1.0),
        ),
        (
            "Rademacher k=2 [[2,1],[1,1]]".into(),
            path_from_basepoint(&golden, q.clone()).map_err(err)?,
            Complex64::new(0.0, 1.0),
        ),
        (
            "Rademacher k=3 [[2,1],[1,1]]".into(),
            path_from_basepoint(&golden, q.pow(2)).map_err(err)?,
            Complex64::new(0.0, 1.0),
        ),
        (
            "{tau, T^3 tau} (x) X2^4".into(),
            path_from_basepoint(&Mat2::t_pow(3.into()), x2(4)).map_err(err)?,
            Complex64::new(0.2, 1.0),
        ),
        (
            "W^(1) n=2 p=2".into(),
            build_lift(2, 2, 1, 1).map_err(err)?,
            Complex64::new(0.1, 1.0),
        ),
        (
            "D=5 class cycle k=2".into(),
            zclass_cycle(&inv, 2).map_err(err)?,
            Complex64::new(-2.0, 2.0),
        ),
        (
            "W^(1) n=4 p=2 nu=1".into(),
            build_lift(4, 2, 1, 1).map_err(err)?,
            Complex64::new(0.1, 1.0),
        ),
    ])
}

fn exact_pair(ch: &SymbolChain) -> Result<Rational, String> {
    let c = cocycle_cached(ch.weight).map_err(err)?;
    pair_cycle(&c, ch).map_err(err)
}

fn numeric_oracle() -> Check {
    let cases = designated_integrals()?;
    let mut worst = 0f64;
    for (label, ch, tau) in &cases {
        ensure(min_height(ch, *tau).map_err(err)? >= 0.25, || {
            format!("{label}: path too low")
        })?;
        let exact = exact_pair(ch)?;
        let num = numeric_chain(ch, *tau, DEFAULT_TERMS, 1e-11).map_err(err)?;
        let dist = num.distance_to(&exact);
        worst = worst.max(dist);
        ensure(dist < 1e-8, || {
            format!(
                "{label}: numeric {:?} vs exact {}",
                num.value(),
                fmt_rat(&exact)
            )
        })?;
    }
    let checks = [
        (&cases[0], int(1)),
        (&cases[1], int(1)),
        (&cases[2], frac(1, 4)),
        (&cases[3], frac(1, 4)),
        (&cases[6], int(3)),
        (&cases[7], int(9)),
        (&cases[8], int(4)),
    ];
    for ((label, ch, _), expect) in checks {
        let exact = exact_pair(ch)?;
        ensure(exact == expect, || {
            format!("{label}: exact {exact}, expected {expect}")
        })?;
    }
    let w = pair_lift(4, 2, 1, 1).map_err(err)?;
    let exact = exact_pair(&cases[9].1)?;
    ensure(w == exact, || {
        format!("n=4 lift: closed {w}, chain {exact}")
    })?;
    Ok(format!(
        "{} integrals, max deviation {worst:.1e}",
        cases.len()
    ))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    // discrete antiderivatives
    let shift = Mat2::from_i64(1, -1, 0, 1);
    for n in (2..=20usize).step_by(2) {
        for mu in 0..n {
            let e = HomPoly::basis_vec(n, mu, Basis::Primary);
            let pd = dagger(&e).map_err(err)?;
            ensure(act(&shift, &pd).map_err(err)?.sub(&pd) == e, || {
                format!("dagger n={n} mu={mu}")
            })?;
            let pdd = ddagger(&e).map_err(err)?;
            ensure(pdd.coeff(mu + 1) * int(mu as i64 + 1) == int(1), || {
                format!("ddagger n={n} mu={mu}")
            })?;
        }
    }
    // V_p U_p = p^(n+1) on coinvariants
    for trial in 0..30 {
        let n = 2 * rng.gen_range(1..=3usize);
        let p = [2u64, 3, 5][trial % 3];
        let m = Mat2::from_i64(
            rng.gen_range(1..=9),
            rng.gen_range(-9..=9),
            0,
            rng.gen_range(1..=9),
        )
        .mul(&Mat2::from_i64(1, 0, rng.gen_range(-9..=9), 1));
        let poly = HomPoly::from_coeffs(
            (0..=n).map(|_| int(rng.gen_range(-5..=5))).collect(),
            Basis::Primary,
        );
        let ch = SymbolChain::single(
            PointRef::formal(&Mat2::identity()).map_err(err)?,
            PointRef::formal(&m).map_err(err)?,
            poly,
        );
        let vu = hecke_vp(&hecke_up(&ch, p).map_err(err)?, p).map_err(err)?;
        let scaled = ch.scale(&big_rat(ipow(p, n as u32 + 1)));
        ensure(
            coinvariant_form(&vu).map_err(err)? == coinvariant_form(&scaled).map_err(err)?,
            || format!("V_pU_p not scalar (p={p}, n={n})"),
        )?;
    }
    // pairing equivariance <g w, g P> = <w, P>
    for g in sample_sl2(5, 20, 30) {
        let n = 4;
        let w = HomPoly::from_coeffs(
            (0..=n).map(|_| int(rng.gen_range(-5..=5))).collect(),
            Basis::Dual,
        );
        let p = HomPoly::from_coeffs(
            (0..=n).map(|_| int(rng.gen_range(-5..=5))).collect(),
            Basis::Primary,
        );
        let lhs =
            pair_dual(&act_dual(&g, &w).map_err(err)?, &act(&g, &p).map_err(err)?).map_err(err)?;
        ensure(lhs == pair_dual(&w, &p).map_err(err)?, || {
            format!("equivariance fails for {g}")
        })?;
    }
    // von Staudt–Clausen
    for t in (2..=60usize).step_by(2) {
        for p in primes_up_to(100) {
            let v = padic_val(&bernoulli_number(t), p).unwrap_or(0);
            ensure(
                (v == -1) == (t as u64).is_multiple_of(p - 1) && v >= -1,
                || format!("von Staudt t={t} p={p}"),
            )?;
        }
    }
    // coboundary invariance
    for n in [2usize, 4, 6, 8, 10] {
        let c = eisenstein_cocycle(n).map_err(err)?;
        let b = HomPoly::from_coeffs(
            (0..=n)
                .map(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect(),
            Basis::Dual,
        );
        let c2 = c.with_coboundary(&b);
        for _ in 0..10 {
            let nu = rng.gen_range(1..n);
            let p = [2u64, 3][rng.gen_range(0..2)];
            let k = rng.gen_range(0..=2u32);
            let j = rng.gen_range(0..p.pow(k));
            let ch = ctilde_at_depth(n, p, nu, k, j.into(), rng.gen_range(0..=2)).map_err(err)?;
            ensure(
                pair_cycle(&c, &ch).map_err(err)? == pair_cycle(&c2, &ch).map_err(err)?,
                || format!("coboundary changes pairing at n={n}"),
            )?;
        }
        let _ = sigma_k(n, 2, 1, 1).map_err(err)?;
    }
    // Teichmüller and interpolation
    for p in [3u64, 5, 7, 11] {
        for a in 1..(p as i64) {
            let w = teichmuller(&BigInt::from(a), p, 6).map_err(err)?;
            ensure(teichmuller(&w.residue, p, 6).map_err(err)? == w, || {
                format!("teichmuller idempotence a={a} p={p}")
            })?;
            ensure(w.pow(&BigInt::from(p - 1)).residue.is_one(), || {
                format!("teichmuller order a={a} p={p}")
            })?;
            ensure(
                (&w.residue - a).mod_floor(&BigInt::from(p)).is_zero(),
                || format!("teichmuller residue a={a}"),
            )?;
        }
    }
    for p in [5u64, 7] {
        for m in (2..=20u32).step_by(2).filter(|m| m % (p as u32 - 1) == 0) {
            let v = lp_neg(m, 0, p, 6).map_err(err)?;
            let expect = (Rational::one() - crate::arith::rpow(&int(p as i64), m as i64 - 1))
                * zeta_neg(m as usize);
            ensure(v.value == expect, || format!("interpolation p={p} m={m}"))?;
        }
    }
    // congruence corollaries on 20 samples
    let mut sampled = 0;
    while sampled < 20 {
        let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
        let x = rng.gen_range(1..=12i64);
        let y = rng.gen_range(1..=12i64);
        if x % (p as i64 - 1) != 0 {
            ensure(congruence_case1(x, y, p, 6).map_err(err)?, || {
                format!("case1 x={x} y={y} p={p}")
            })?;
        }
        ensure(congruence_case2(x, y, p, 6).map_err(err)?, || {
            format!("case2 x={x} y={y} p={p}")
        })?;
        sampled += 1;
    }
    // irregularity
    ensure(irregular_index(37).map_err(err)? == 1, || {
        "d(37) != 1".into()
    })?;
    let skula_bad: Vec<u64> = primes_up_to(1000)
        .into_par_iter()
        .filter(|&p| p >= 5)
        .filter(|&p| !skula_bound_ok(p).unwrap_or(false))
        .collect();
    ensure(skula_bad.is_empty(), || {
        format!("Skula bound fails at {skula_bad:?}")
    })?;
    Ok("dagger, V_pU_p, equivariance, von Staudt, coboundary, Teichmuller, interpolation, congruences, d(37)=1, Skula p<=1000".into())
}

pub fn run_criterion(id: u8) -> Outcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let (status, detail) = match id {
        9 => sharpness_outcome(),
        _ => {
            let res = match id {
                1 => denominator_theorem(),
                2 => rational_pairings(),
                3 => hecke_eigen(),
                4 => padic_limit(),
                5 => lift_integrality(),
                6 => rademacher_integrality(),
                7 => partial_zeta_integrality(),
                8 => class_sum(),
                10 => numeric_oracle(),
                11 => property_suites(),
                _ => Err(format!("no criterion {id}")),
            };
            match res {
                Ok(d) => (Status::Pass, d),
                Err(d) => (Status::Fail, d),
            }
        }
    };
    Outcome {
        id,
        name,
        status,
        detail,
    }
}

/// All criteria, evaluated in parallel and returned in order.
pub fn run_all() -> Vec<Outcome> {
    CRITERIA
        .par_iter()
        .map(|(id, _)| run_criterion(*id))
        .collect()
}
