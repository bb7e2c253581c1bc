//! Independent oracles shared by the property suites and the acceptance target.
//!
//! Nothing here calls the code path it checks: coefficients come from
//! schoolbook products of divisor sums and from brute-force point counts,
//! Euler factors from eigenvalue products and root counts of x³ − m.

#![allow(dead_code)]

use lcong::arith::{is_prime, primes_up_to};
use lcong::lfunc::afe::{lambda_at, TwistedLData};
use lcong::lfunc::euler::twisted_euler_factor;
use lcong::qseries::twist::twisted_dirichlet_coeffs;
use lcong::{build_form, ArtinRep, Form, FormId};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Terms printed in the q-expansion table, (n, a_n); unlisted n up to the last are zero.
pub fn printed_expansion(id: &FormId) -> &'static [(usize, i64)] {
    match id {
        FormId::F5w4 => &[(1, 1), (2, -4), (3, 2), (4, 8), (5, -5)],
        FormId::F7w4 => &[(1, 1), (2, -1), (3, -2), (4, -7), (5, 16)],
        FormId::F5w6 => &[(1, 1), (2, 2), (3, -4), (4, -28), (5, 25)],
        FormId::F121w4 => &[(1, 1), (3, 8), (4, -8), (5, 18), (9, 37), (12, -64), (15, 144), (16, 64)],
        _ => &[],
    }
}

fn sigma_k(k: u32, n: usize) -> Integer {
    (1..=n).filter(|d| n % d == 0).map(|d| Integer::from(d).pow(k)).sum()
}

/// E_k(q^t) to q^len, constant term −B_k/(2k).
fn eis(k: u32, t: usize, len: usize) -> Vec<Rational> {
    let c0 = match k {
        2 => Rational::from((-1, 24)),
        4 => Rational::from((1, 240)),
        6 => Rational::from((-1, 504)),
        _ => unreachable!(),
    };
    let mut out = vec![Rational::new(); len + 1];
    out[0] = c0;
    for n in 1..=len / t {
        out[n * t] = Rational::from(sigma_k(k - 1, n));
    }
    out
}

/// E₂(q) − t·E₂(q^t).
fn e2star(t: usize, len: usize) -> Vec<Rational> {
    let (a, b) = (eis(2, 1, len), eis(2, t, len));
    a.iter().zip(&b).map(|(x, y)| Rational::from(x - Rational::from(y * t as u32))).collect()
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len();
    let mut out = vec![Rational::new(); len];
    for i in 0..len {
        for j in 0..len - i {
            out[i + j] += Rational::from(&a[i] * &b[j]);
        }
    }
    out
}

fn lin(terms: &[(Rational, Vec<Rational>)]) -> Vec<Rational> {
    let len = terms[0].1.len();
    (0..len)
        .map(|i| terms.iter().map(|(c, s)| Rational::from(c * &s[i])).sum())
        .collect()
}

/// a_1..=a_len of the Eisenstein combinations, by schoolbook products.
pub fn eisenstein_oracle(id: &FormId, len: usize) -> Vec<Integer> {
    let r = |a: i64, b: i64| Rational::from((a, b));
    let s = match id {
        FormId::F5w4 => {
            let e = e2star(5, len);
            lin(&[(r(-250, 3), eis(4, 5, len)), (r(-10, 3), eis(4, 1, len)), (r(13, 1), mul(&e, &e))])
        }
        FormId::F7w4 => {
            let e = e2star(7, len);
            lin(&[(r(-147, 2), eis(4, 7, len)), (r(-3, 2), eis(4, 1, len)), (r(5, 1), mul(&e, &e))])
        }
        FormId::F5w6 => lin(&[
            (r(521, 6), eis(6, 5, len)),
            (r(-1, 30), eis(6, 1, len)),
            (r(248, 1), mul(&e2star(5, len), &eis(4, 5, len))),
        ]),
        _ => panic!("not an Eisenstein form"),
    };
    assert_eq!(s[0], 0, "constant term must vanish");
    s[1..]
        .iter()
        .map(|x| {
            assert_eq!(*x.denom(), 1, "non-integral coefficient");
            x.numer().clone()
        })
        .collect()
}

/// Trace of Frobenius of y² + y = x³ − x² − 7x + 10 at p, by counting all (x, y) mod p.
pub fn cm_trace_brute(p: i64) -> i64 {
    let mut count = 1;
    for x in 0..p {
        let rhs = (x * x * x - x * x - 7 * x + 10).rem_euclid(p);
        count += (0..p).filter(|y| (y * y + y).rem_euclid(p) == rhs).count() as i64;
    }
    p + 1 - count
}

/// a_1..=a_len of the CM form: a_p = d³ − 3pd, a_11 = 0, Hecke recursion and multiplicativity.
pub fn cm_oracle(len: usize) -> Vec<Integer> {
    let mut a = vec![Integer::new(); len + 1];
    a[1] = Integer::from(1);
    for n in 2..=len {
        let p = (2..=n).find(|d| n % d == 0).unwrap();
        let mut m = n;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if m > 1 {
            a[n] = Integer::from(&a[n / m] * &a[m]);
            continue;
        }
        let d = Integer::from(cm_trace_brute(p as i64));
        let ap = if p == 11 { Integer::new() } else { Integer::from(d.clone().pow(3)) - 3 * p as u64 * d };
        a[n] = if e == 1 {
            ap
        } else if p == 11 {
            Integer::new()
        } else {
            Integer::from(&ap * &a[n / p]) - Integer::from((p as u64).pow(3)) * &a[n / (p * p)]
        };
    }
    a.split_off(1)
}

pub fn coefficient_oracle(id: &FormId, len: usize) -> Vec<Integer> {
    match id {
        FormId::F121w4 => cm_oracle(len),
        other => eisenstein_oracle(other, len),
    }
}

/// Hecke relations on the pair (m, n).
pub fn hecke_pair(form: &Form, m: usize, n: usize) -> Result<(), String> {
    let g = lcong::arith::gcd(m as u64, n as u64) as usize;
    if g == 1 {
        if form.a(m * n) != Integer::from(form.a(m) * form.a(n)) {
            return Err(format!("{}: a({m}·{n}) ≠ a({m})a({n})", form.id));
        }
        return Ok(());
    }
    // a_m a_n = Σ_{d | (m,n), (d,N)=1} d^{k−1} a_{mn/d²}
    let mut rhs = Integer::new();
    for d in (1..=g).filter(|d| g % d == 0 && lcong::arith::gcd(*d as u64, form.level) == 1) {
        rhs += Integer::from(d).pow(form.weight - 1) * form.a(m * n / (d * d));
    }
    if Integer::from(form.a(m) * form.a(n)) != rhs {
        return Err(format!("{}: Hecke relation fails at ({m}, {n})", form.id));
    }
    Ok(())
}

fn poly(c: &[Integer]) -> Vec<Integer> {
    let mut v = c.to_vec();
    while v.len() > 1 && v.last().is_some_and(|x| *x == 0) {
        v.pop();
    }
    v
}

fn pmul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    poly(&out)
}

fn i(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

/// Roots of x³ ≡ m mod q, by search.
pub fn cube_roots(m: u64, q: u64) -> usize {
    (0..q).filter(|x| (x * x % q) * x % q == m % q).count()
}

/// det(1 − ρ_{3,m}(Frob_q)X) for q ∤ 3m from the splitting of x³ − m.
pub fn artin_factor_oracle(m: u64, q: u64) -> Vec<Integer> {
    if q % 3 == 2 {
        i(&[1, 0, -1])
    } else if cube_roots(m, q) == 3 {
        i(&[1, -2, 1])
    } else {
        i(&[1, 1, 1])
    }
}

/// Local factor of ζ_K, K = ℚ(m^{1/3}), at q ∤ 3m from the degrees of the factors of x³ − m.
pub fn dedekind_factor_oracle(m: u64, q: u64) -> Vec<Integer> {
    match cube_roots(m, q) {
        3 => i(&[1, -3, 3, -1]),
        1 => i(&[1, -1, -1, 1]),
        0 => i(&[1, 0, 0, -1]),
        r => panic!("x³ − m has {r} roots mod {q}"),
    }
}

/// 1 − a_qX + q^{k−1}X² for q ∤ N, 1 − a_qX for q ∥ N, 1 for q² | N.
pub fn f_factor(form: &Form, q: u64) -> Vec<Integer> {
    let a = form.a(q as usize);
    if form.level % q != 0 {
        vec![Integer::from(1), -a, Integer::from(q).pow(form.weight - 1)]
    } else if form.level % (q * q) == 0 {
        vec![Integer::from(1)]
    } else {
        poly(&[Integer::from(1), -a])
    }
}

/// P_q(f, λX) for each eigenvalue λ of ρ(Frob_q), multiplied out.
pub fn twisted_factor_oracle(form: &Form, m: u64, q: u64) -> Vec<Integer> {
    let a = form.a(q as usize);
    let big_q = Integer::from(q).pow(form.weight - 1);
    let f = f_factor(form, q);
    let twist = |sign: i64| -> Vec<Integer> {
        f.iter().enumerate().map(|(j, c)| Integer::from(c * sign.pow(j as u32))).collect()
    };
    if m % q == 0 {
        return i(&[1]);
    }
    if q % 3 == 2 {
        return pmul(&twist(1), &twist(-1));
    }
    if cube_roots(m, q) == 3 {
        return pmul(&f, &f);
    }
    // eigenvalues ζ, ζ²: expand by hand
    match f.len() {
        1 => i(&[1]),
        2 => vec![Integer::from(1), a.clone(), Integer::from(a.square_ref())],
        _ => poly(&[
            Integer::from(1),
            a.clone(),
            Integer::from(a.square_ref()) - &big_q,
            Integer::from(&a * &big_q),
            Integer::from(big_q.square_ref()),
        ]),
    }
}

/// Euler factors of σ and ρ_{3,m} against the oracles, and the ζ_K factorisation, at every prime q < bound, q ≠ 3.
pub fn euler_oracles(form: &Form, m: u64, bound: u64) -> Result<(), String> {
    let sigma = ArtinRep::sigma(3).map_err(|e| e.to_string())?;
    let rho = ArtinRep::rho(3, m).map_err(|e| e.to_string())?;
    for q in (2..bound).filter(|&q| is_prime(q) && q != 3) {
        let f = f_factor(form, q);
        let chi: i32 = if q % 3 == 1 { 1 } else { -1 };
        let f_chi: Vec<Integer> = f.iter().enumerate().map(|(j, c)| Integer::from(c * chi.pow(j as u32) as i32)).collect();
        let got = twisted_euler_factor(form, &sigma, q, false).map_err(|e| e.to_string())?;
        if poly(got.coeffs()) != pmul(&f, &f_chi) {
            return Err(format!("{} sigma q={q}: {:?}", form.id, got.coeffs()));
        }
        let got = twisted_euler_factor(form, &rho, q, false).map_err(|e| e.to_string())?;
        let want = twisted_factor_oracle(form, m, q);
        if poly(got.coeffs()) != want {
            return Err(format!("{} rho m={m} q={q}: {:?} vs {:?}", form.id, got.coeffs(), want));
        }
        if m % q != 0 {
            let art = poly(rho.artin_local_factor(q).coeffs());
            if art != artin_factor_oracle(m, q) {
                return Err(format!("Artin factor m={m} q={q}: {art:?}"));
            }
            if pmul(&i(&[1, -1]), &art) != dedekind_factor_oracle(m, q) {
                return Err(format!("zeta_K factorisation m={m} q={q}"));
            }
        }
    }
    Ok(())
}

/// b(σ) = b(1) ⋆ b(χ₋₃) up to n_max, with b(χ) formed from a_n χ(n) directly.
pub fn sigma_product(form: &Form, n_max: usize) -> Result<(), String> {
    let sigma = ArtinRep::sigma(3).map_err(|e| e.to_string())?;
    let b = twisted_dirichlet_coeffs(form, &sigma, n_max).map_err(|e| e.to_string())?;
    let a: Vec<i128> = (0..=n_max).map(|n| if n == 0 { 0 } else { form.a_i128(n) }).collect();
    let chi = |n: usize| match n % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    };
    let mut conv = vec![0i128; n_max + 1];
    for d in 1..=n_max {
        for e in 1..=n_max / d {
            conv[d * e] += a[d] * a[e] * chi(e);
        }
    }
    match (1..=n_max).find(|&n| conv[n] != b[n]) {
        Some(n) => Err(format!("{}: b_{n}(sigma) = {} but product gives {}", form.id, b[n], conv[n])),
        None => Ok(()),
    }
}

/// Λ(s) from split points t = 1 and 1.1 agree within the sum of certified errors.
pub fn fe_residual(data: &TwistedLData, w: i32, s: f64, digits: u32) -> Result<(f64, f64), String> {
    let a = lambda_at(data, s, w, 1.0, digits).map_err(|e| e.to_string())?;
    let b = lambda_at(data, s, w, 1.1, digits).map_err(|e| e.to_string())?;
    let diff = rug::Float::with_val(a.lambda.prec(), &a.lambda - &b.lambda).abs().to_f64();
    let bound = a.lambda_err + b.lambda_err;
    if diff < bound {
        Ok((diff, bound))
    } else {
        Err(format!("{} s={s}: residual {diff:.3e} ≥ bound {bound:.3e}", data.label))
    }
}

/// Forms with enough coefficients for property checks.
pub fn forms(n: usize) -> Vec<Form> {
    FormId::TABULATED.iter().map(|id| build_form(id, n).expect("form")).collect()
}

pub fn primes_below(n: u64) -> Vec<u64> {
    primes_up_to(n as usize).into_iter().map(u64::from).filter(|&q| q < n).collect()
}
