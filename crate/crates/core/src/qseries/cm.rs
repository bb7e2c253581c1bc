//! Coefficients of the weight-k CM form attached to an elliptic curve with
//! complex multiplication by an order of ℚ(√−ℓ), ℓ ≡ 3 mod 4 prime.

use super::{Coeffs, Form, FormId, FormSource};
use crate::arith;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Largest n for which CM coefficients are produced.
pub const CM_BUDGET: usize = 60_000_000;

/// Primes below this bound are always counted naively, and cross-check the fast path.
pub const NAIVE_BOUND: u64 = 2000;

/// Weierstrass model y² + a1xy + a3y = x³ + a2x² + a4x + a6 with CM by ℚ(√−ℓ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCurve {
    pub a: [i64; 5],
    pub conductor: u64,
    pub bad_primes: Vec<u64>,
    /// ℓ, with CM field ℚ(√−ℓ).
    pub cm_ell: u64,
}

impl CmCurve {
    /// y² + y = x³ − x² − 7x + 10.
    pub fn conductor_121() -> Self {
        CmCurve { a: [0, -1, 1, -7, 10], conductor: 121, bad_primes: vec![11], cm_ell: 11 }
    }

    /// (b2, b4, b6) so that (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6.
    fn b_invariants(&self) -> (i64, i64, i64) {
        let [a1, a2, a3, a4, a6] = self.a;
        (a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6)
    }

    /// d_p = p + 1 − #E(𝔽_p) by direct counting.
    pub fn trace_naive(&self, p: u64) -> i64 {
        if p == 2 {
            let [a1, a2, a3, a4, a6] = self.a.map(|c| c.rem_euclid(2));
            let mut count = 1;
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs - rhs) % 2 == 0 {
                        count += 1;
                    }
                }
            }
            return 3 - count;
        }
        let (b2, b4, b6) = self.b_invariants();
        let pi = p as i64;
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..p {
            chi[(x * x % p) as usize] = 1;
        }
        let (c2, c1, c0) = (b2.rem_euclid(pi), (2 * b4).rem_euclid(pi), b6.rem_euclid(pi));
        let mut s = 0i64;
        for x in 0..pi {
            let v = ((((4 * x % pi) + c2) % pi * x % pi + c1) % pi * x % pi + c0) % pi;
            s += chi[v as usize] as i64;
        }
        -s
    }
}

/// Solves x² + ℓy² = 4p (ℓ ≡ 3 mod 4), returning |x|.
pub fn cornacchia4(ell: u64, p: u64) -> Option<u64> {
    if p == 2 {
        return None;
    }
    let r = arith::sqrt_mod((p - ell % p) % p, p)?;
    // work modulo 4p with a root of the right parity (−ℓ ≡ 1 mod 4)
    let mut x0 = if r % 2 == ell % 2 { r } else { p - r };
    if x0 == 0 {
        return None;
    }
    let mut a = 2 * p;
    let limit = arith::isqrt(4 * p);
    while x0 > limit {
        (a, x0) = (x0, a % x0);
    }
    let rest = 4 * p - x0 * x0;
    if rest % ell != 0 {
        return None;
    }
    let y = arith::isqrt(rest / ell);
    (y * y == rest / ell).then_some(x0)
}

fn jacobi_prime(a: i64, ell: u64) -> i64 {
    arith::legendre(a, ell) as i64
}

/// Traces d_p for every prime p ≤ n; bad primes get 0.
fn traces(curve: &CmCurve, primes: &[u32]) -> Result<Vec<i64>> {
    let ell = curve.cm_ell;
    let sign = sign_constant(curve)?;
    let out: Vec<i64> = primes
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            if curve.bad_primes.contains(&p) {
                0
            } else if p < NAIVE_BOUND {
                curve.trace_naive(p)
            } else {
                fast_trace(ell, sign, p)
            }
        })
        .collect();
    // the fast path must agree with every naive count below the bound
    for (&p, &d) in primes.iter().zip(&out) {
        let p = p as u64;
        if p >= NAIVE_BOUND {
            break;
        }
        if p > 2 && !curve.bad_primes.contains(&p) && fast_trace(ell, sign, p) != d {
            return Err(Error::Internal(format!("CM fast trace disagrees with point count at p = {p}")));
        }
    }
    Ok(out)
}

fn fast_trace(ell: u64, sign: i64, p: u64) -> i64 {
    match cornacchia4(ell, p) {
        Some(x) => sign * jacobi_prime(x as i64, ell) * x as i64,
        None => 0,
    }
}

/// Fixes s in d_p = s·(x/ℓ)·x from the first split good prime.
fn sign_constant(curve: &CmCurve) -> Result<i64> {
    for p in arith::primes_up_to(NAIVE_BOUND as usize) {
        let p = p as u64;
        if p == 2 || curve.bad_primes.contains(&p) {
            continue;
        }
        if let Some(x) = cornacchia4(curve.cm_ell, p) {
            let d = curve.trace_naive(p);
            let base = jacobi_prime(x as i64, curve.cm_ell) * x as i64;
            return match d {
                _ if d == base => Ok(1),
                _ if d == -base => Ok(-1),
                _ => Err(Error::InvalidInput(format!(
                    "curve does not have CM by Q(sqrt(-{})): d_{p} = {d}",
                    curve.cm_ell
                ))),
            };
        }
    }
    Err(Error::Internal("no split prime found".into()))
}

/// Sum of the (k−1)-th powers of the roots of X² − dX + p.
fn power_trace(d: i128, p: i128, e: u32) -> i128 {
    let (mut s0, mut s1) = (2i128, d);
    if e == 0 {
        return 2;
    }
    for _ in 1..e {
        (s0, s1) = (s1, d * s1 - p * s0);
    }
    s1
}

/// The CM form of weight k to n_max coefficients.
pub fn cm_coefficients(curve: &CmCurve, k: u32, n_max: usize) -> Result<Form> {
    if k != 4 {
        return Err(Error::Unsupported(format!("CM forms are built in weight 4 only, got {k}")));
    }
    if *curve != CmCurve::conductor_121() {
        return Err(Error::Unsupported("only the conductor-121 CM curve is wired to a form id".into()));
    }
    if n_max > CM_BUDGET {
        return Err(Error::Resource { what: "CM coefficients".into(), demand: n_max as u64, budget: CM_BUDGET as u64 });
    }
    let primes = arith::primes_up_to(n_max);
    let d = traces(curve, &primes)?;
    let mut a = vec![0i128; n_max + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    for (&p, &dp) in primes.iter().zip(&d) {
        let q = p as i128;
        let pk = q.pow(k - 1);
        let bad = curve.bad_primes.contains(&(p as u64));
        a[p as usize] = if bad { 0 } else { power_trace(dp as i128, q, k - 1) };
        let (mut prev, mut cur) = (1i128, a[p as usize]);
        let mut qe = p as usize;
        while let Some(next) = qe.checked_mul(p as usize).filter(|&x| x <= n_max) {
            let val = if bad { 0 } else { a[p as usize] * cur - pk * prev };
            a[next] = val;
            (prev, cur) = (cur, val);
            qe = next;
        }
    }
    fill_multiplicative(&mut a);
    let id = FormId::F121w4;
    let form = Form {
        level: curve.conductor,
        weight: k,
        source: FormSource::Cm(curve.clone()),
        id,
        coeffs: Coeffs::from_i128(a),
    };
    form.validate()?;
    Ok(form)
}

/// Fills composite indices from prime-power entries: a_n = a_{q^e}·a_{n/q^e}.
pub(crate) fn fill_multiplicative(a: &mut [i128]) {
    let n_max = a.len() - 1;
    let spf = arith::spf_sieve(n_max);
    for n in 2..=n_max {
        let q = spf[n] as usize;
        let mut rest = n;
        let mut qe = 1;
        while rest % q == 0 {
            rest /= q;
            qe *= q;
        }
        if rest > 1 {
            a[n] = a[qe] * a[rest];
        }
    }
}
