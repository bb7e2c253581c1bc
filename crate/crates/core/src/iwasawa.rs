//! Places of ℚ(μ_{p^∞}) above q, the sets 𝒫₁ and 𝒫₂, and the λ-invariant
//! transition formula.

use crate::arith;
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::lfunc::euler::{frobenius_trace_bv, twisted_euler_factor};
use crate::qseries::Form;
use rug::ops::Pow;
use rug::{Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Membership {
    None,
    P1,
    P2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceClass {
    pub q: u64,
    /// Order of q mod p.
    pub r_q: u64,
    /// Places of ℚ(μ_{p^∞}) above q.
    pub place_count: u64,
    /// α_q^r + β_q^r when q ∤ N, a_q^r when q ∥ N, absent otherwise.
    pub b_v: Option<Integer>,
    pub membership: Membership,
}

/// ((p−1)/r)·p^{c−1} with r the order of q mod p and c = ord_p(q^r − 1).
pub fn place_count(p: u64, q: u64) -> u64 {
    let r = arith::mult_order(q % p, p);
    let qr = Integer::from(q).pow(r as u32) - 1u32;
    let c = arith::ord_integer(&qr, p).expect("q^r ≠ 1");
    (p - 1) / r * p.pow(c - 1)
}

/// Places above q in ℚ(μ_{p^level}): φ(p^level)/ord(q mod p^level).
pub fn places_at_level(p: u64, q: u64, level: u32) -> u64 {
    let pl = p.pow(level);
    arith::totient(pl) / arith::mult_order(q % pl, pl)
}

pub fn classify_place(form: &Form, p: u64, q: u64, m: u64) -> Result<PlaceClass> {
    if q == p || m % q != 0 || !arith::is_prime(q) {
        return Err(Error::InvalidInput(format!("need a prime q ≠ {p} dividing m = {m}, got {q}")));
    }
    let r = arith::mult_order(q % p, p);
    let ord_n = arith::ord(form.level, q);
    let pz = Integer::from(p);
    let (b_v, membership) = match ord_n {
        0 => {
            let b = frobenius_trace_bv(form, q, r as u32)?;
            let two_minus = Integer::from(2) - &b;
            let p2 = two_minus.is_divisible(&pz);
            (Some(b), if p2 { Membership::P2 } else { Membership::None })
        }
        1 => {
            let b = form.a(q as usize).pow(r as u32);
            let p1 = Integer::from(&b - 1u32).is_divisible(&pz);
            (Some(b), if p1 { Membership::P1 } else { Membership::None })
        }
        _ => (None, Membership::None),
    };
    Ok(PlaceClass { q, r_q: r, place_count: place_count(p, q), b_v, membership })
}

/// p·λ_base + Σ_{𝒫₂} 2(p−1) + Σ_{𝒫₁} (p−1), each prime weighted by its place count.
pub fn lambda_transition(lambda_base: u64, classified: &[PlaceClass], p: u64) -> u64 {
    let mut out = p * lambda_base;
    for c in classified {
        out += match c.membership {
            Membership::P2 => 2 * (p - 1) * c.place_count,
            Membership::P1 => (p - 1) * c.place_count,
            Membership::None => 0,
        };
    }
    out
}

/// ord_p P_q(f,σ,q^{−n}) for n in the range.
pub fn sigma_euler_valuations(form: &Form, p: u64, q: u64, ns: &[u32]) -> Result<Vec<Option<i64>>> {
    let sigma = ArtinRep::sigma(p)?;
    let factor = twisted_euler_factor(form, &sigma, q, false)?;
    Ok(ns
        .iter()
        .map(|&n| {
            let x = Rational::from((1, Integer::from(q).pow(n)));
            arith::ord_rational(&factor.eval(&x), p)
        })
        .collect())
}

/// Membership in 𝒫₁ ∪ 𝒫₂ agrees with p | P_q(f,σ,q^{−n}) for every n given.
pub fn euler_divisibility_crosscheck(form: &Form, p: u64, q: u64, ns: &[u32]) -> Result<bool> {
    let class = classify_place(form, p, q, q)?;
    let degenerate = class.membership != Membership::None;
    let vals = sigma_euler_valuations(form, p, q, ns)?;
    Ok(vals.iter().all(|v| match v {
        None => degenerate,
        Some(v) => (*v > 0) == degenerate,
    }))
}

/// (P_v(f/𝒦, q^{−rn}) mod p, (2 − b_v) mod p) for q ∤ Np.
pub fn eq44_residues(form: &Form, p: u64, q: u64, n: u32) -> Result<(Integer, Integer)> {
    if form.level % q == 0 || q == p {
        return Err(Error::InvalidInput(format!("q = {q} must be prime to Np")));
    }
    let r = arith::mult_order(q % p, p) as u32;
    let b = frobenius_trace_bv(form, q, r)?;
    let x = Rational::from((1, Integer::from(q).pow(r * n)));
    let big_q = Integer::from(q).pow(r * (form.weight - 1));
    let val = Rational::from(1) - Rational::from(&b * &x) + Rational::from(big_q * Rational::from(x.square_ref()));
    let pz = Integer::from(p);
    let (num, den) = val.into_numer_denom();
    let inv = den.invert(&pz).map_err(|_| Error::Internal("non-unit denominator".into()))?;
    let lhs = Integer::from(num * inv) % &pz;
    let lhs = if lhs < 0 { lhs + &pz } else { lhs };
    let rhs = (Integer::from(2) - b) % &pz;
    let rhs = if rhs < 0 { rhs + &pz } else { rhs };
    Ok((lhs, rhs))
}
