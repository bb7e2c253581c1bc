//! Local Euler factors of f and of f ⊗ φ, and the conductor N(f,φ).

use crate::arith;
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::poly::LocalFactor;
use crate::qseries::Form;
use rug::ops::Pow;
use rug::Integer;

/// P_q(f,X).
pub fn euler_factor_f(form: &Form, q: u64) -> LocalFactor {
    let a = form.a(q as usize);
    match arith::ord(form.level, q) {
        0 => LocalFactor::new(vec![Integer::from(1), -a, Integer::from(q).pow(form.weight - 1)]),
        1 => LocalFactor::new(vec![Integer::from(1), -a]),
        _ => LocalFactor::one(),
    }
}

/// t_r = α^r + β^r for q ∤ N.
pub fn frobenius_trace_bv(form: &Form, q: u64, r: u32) -> Result<Integer> {
    if form.level % q == 0 {
        return Err(Error::InvalidInput(format!("q = {q} divides the level")));
    }
    Ok(power_traces(&form.a(q as usize), &Integer::from(q).pow(form.weight - 1), r as usize).swap_remove(r as usize))
}

/// [t_0, …, t_r] for the roots of X² − aX + Q.
fn power_traces(a: &Integer, big_q: &Integer, r: usize) -> Vec<Integer> {
    let mut t = vec![Integer::from(2), a.clone()];
    while t.len() <= r {
        let n = t.len();
        let next = Integer::from(a * &t[n - 1]) - Integer::from(big_q * &t[n - 2]);
        t.push(next);
    }
    t.truncate(r + 1);
    t
}

/// P_q(f,φ,X).
///
/// Writing A(T) = det(1 − Frob_q T | φ^{I_q}), the factor is A(αX)·A(βX) when
/// q ∤ N and A(a_q X) when q ∥ N. Both are expanded with power traces of α, β.
pub fn twisted_euler_factor(form: &Form, rep: &ArtinRep, q: u64, h2_override: bool) -> Result<LocalFactor> {
    let ord = arith::ord(form.level, q);
    if ord >= 2 {
        if rep.ramified_at(q) && !h2_override {
            return Err(Error::H2Violation(q));
        }
        return Ok(LocalFactor::one());
    }
    let art = rep.artin_local_factor(q);
    let a_q = form.a(q as usize);
    if ord == 1 {
        return Ok(art.scale(&a_q));
    }
    let c = art.coeffs();
    let deg = art.degree();
    let big_q = Integer::from(q).pow(form.weight - 1);
    let t = power_traces(&a_q, &big_q, deg);
    let q_pows: Vec<Integer> = (0..=deg).map(|i| Integer::from((&big_q).pow(i as u32))).collect();
    let mut out = vec![Integer::new(); 2 * deg + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        for i in 0..=n / 2 {
            let j = n - i;
            if j > deg {
                continue;
            }
            let term = Integer::from(&c[i] * &c[j]) * &q_pows[i];
            if i == j {
                *slot += term;
            } else {
                *slot += term * &t[j - i];
            }
        }
    }
    Ok(LocalFactor::new(out))
}

/// N(f,φ) from the local exponent rules; `h2_override` uses d·ord_q N at H2 violations.
pub fn conductor_twisted(form: &Form, rep: &ArtinRep, h2_override: bool) -> Result<Integer> {
    let big_n = form.level;
    let cond = rep.conductor()?;
    let d = rep.dim() as u64;
    let p = rep.p;
    let mut primes = arith::prime_divisors(big_n * cond * p);
    primes.dedup();
    let mut out = Integer::from(1);
    for q in primes {
        let ord_n = arith::ord(big_n, q) as u64;
        let ramified = cond % q == 0;
        let e = if !ramified {
            d * ord_n
        } else if ord_n == 0 {
            2 * arith::ord(cond, q) as u64
        } else if ord_n == 1 {
            if q == p {
                return Err(Error::Unsupported(format!("twisted conductor with {p} | N")));
            }
            2 * d
        } else if h2_override {
            d * ord_n
        } else {
            return Err(Error::H2Violation(q));
        };
        out *= Integer::from(q).pow(e as u32);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{build_form, FormId};

    #[test]
    fn untwisted_factors() {
        let f = build_form(&FormId::F5w4, 10).unwrap();
        assert_eq!(euler_factor_f(&f, 2), LocalFactor::from_i64(&[1, 4, 8]));
        assert_eq!(euler_factor_f(&f, 5), LocalFactor::from_i64(&[1, 5]));
        assert_eq!(frobenius_trace_bv(&f, 2, 1).unwrap(), -4);
        assert_eq!(frobenius_trace_bv(&f, 2, 2).unwrap(), 0);
        assert_eq!(frobenius_trace_bv(&f, 2, 0).unwrap(), 2);
        assert!(frobenius_trace_bv(&f, 5, 1).is_err());
        let g = build_form(&FormId::F121w4, 20).unwrap();
        assert!(euler_factor_f(&g, 11).is_one());
    }

    #[test]
    fn twisted_factors() {
        let f = build_form(&FormId::F5w4, 10).unwrap();
        let s = ArtinRep::sigma(3).unwrap();
        let r2 = ArtinRep::rho(3, 2).unwrap();
        assert_eq!(
            twisted_euler_factor(&f, &s, 2, false).unwrap(),
            LocalFactor::from_i64(&[1, 4, 8]).mul(&LocalFactor::from_i64(&[1, -4, 8]))
        );
        assert!(twisted_euler_factor(&f, &r2, 2, false).unwrap().is_one());
        assert!(twisted_euler_factor(&f, &r2, 3, false).unwrap().is_one());
        assert_eq!(twisted_euler_factor(&f, &s, 3, false).unwrap(), euler_factor_f(&f, 3));
        assert_eq!(twisted_euler_factor(&f, &s, 5, false).unwrap(), LocalFactor::from_i64(&[1, 0, -25]));
    }

    #[test]
    fn twisted_conductors() {
        let f = build_form(&FormId::F5w4, 10).unwrap();
        let g = build_form(&FormId::F121w4, 20).unwrap();
        let c = |f: &Form, m: u64| conductor_twisted(f, &ArtinRep::rho(3, m).unwrap(), false).unwrap();
        assert_eq!(c(&f, 2), 16 * 729 * 25);
        assert_eq!(c(&f, 17), Integer::from(9 * 25) * 17u32.pow(4));
        assert_eq!(c(&g, 2), Integer::from(16 * 729) * 11u32.pow(4));
        assert_eq!(conductor_twisted(&f, &ArtinRep::sigma(3).unwrap(), false).unwrap(), 225);
        assert!(matches!(
            conductor_twisted(&g, &ArtinRep::rho(3, 11).unwrap(), false),
            Err(Error::H2Violation(11))
        ));
        assert_eq!(conductor_twisted(&f, &ArtinRep::trivial(3).unwrap(), false).unwrap(), 5);
    }
}
