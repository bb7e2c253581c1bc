//! Factored display of rationals, e.g. `-2^5*5^3*7*13` or `2^3*5^5/3*7^2`.
//!
//! Everything after `/` is the denominator product.

use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::integer::IsPrime;
use rug::{Integer, Rational};

const TRIAL_BOUND: u32 = 1 << 20;

/// Prime factorization of |n| (n != 0), primes ascending.
pub fn factor_integer(n: &Integer) -> Vec<(Integer, u32)> {
    let mut x = Integer::from(n.abs_ref());
    let mut out: Vec<(Integer, u32)> = Vec::new();
    if x <= 1 {
        return out;
    }
    let mut d = 2u32;
    while d < TRIAL_BOUND {
        if x.is_divisible_u(d) {
            let mut e = 0;
            while x.is_divisible_u(d) {
                x /= d;
                e += 1;
            }
            out.push((Integer::from(d), e));
        }
        if Integer::from(d) * d > x {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if x > 1 {
        let mut rest = Vec::new();
        split_large(x, &mut rest);
        rest.sort();
        for p in rest {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += 1,
                None => out.push((p, 1)),
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn split_large(n: Integer, out: &mut Vec<Integer>) {
    if n == 1 {
        return;
    }
    if n.is_probably_prime(30) != IsPrime::No {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let other = Integer::from(&n / &d);
    split_large(d, out);
    split_large(other, out);
}

// Brent's variant with batched gcds.
fn pollard_rho(n: &Integer) -> Integer {
    let mut c = Integer::from(1);
    loop {
        let f = |x: &Integer| -> Integer { (Integer::from(x * x) + &c) % n };
        let mut y = Integer::from(2);
        let mut r = 1u64;
        let mut q = Integer::from(1);
        let mut g = Integer::from(1);
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == 1 {
            x.clone_from(&y);
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys.clone_from(&y);
                for _ in 0..128.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = Integer::from(q.gcd_ref(n));
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = Integer::from(Integer::from(&x - &ys).abs().gcd_ref(n));
                if g > 1 {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

fn product_string(f: &[(Integer, u32)]) -> String {
    f.iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Render a rational in factored form; integers ±1 render as `1`, `-1`.
pub fn format_factored(x: &Rational) -> String {
    if *x == 0 {
        return "0".into();
    }
    let sign = if *x < 0 { "-" } else { "" };
    let num = factor_integer(x.numer());
    let den = factor_integer(x.denom());
    let num_s = if num.is_empty() { "1".to_string() } else { product_string(&num) };
    if den.is_empty() {
        format!("{sign}{num_s}")
    } else {
        format!("{sign}{num_s}/{}", product_string(&den))
    }
}

fn parse_product(s: &str) -> Result<Integer> {
    let mut acc = Integer::from(1);
    for factor in s.split('*') {
        let factor = factor.trim();
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad(s))?),
            None => (factor, 1),
        };
        let b: Integer = base.parse().map_err(|_| bad(s))?;
        acc *= b.pow(exp);
    }
    Ok(acc)
}

fn bad(s: &str) -> Error {
    Error::InvalidInput(format!("cannot parse factored value `{s}`"))
}

/// Inverse of [`format_factored`].
pub fn parse_factored(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (parse_product(n)?, parse_product(d)?),
        None => (parse_product(body)?, Integer::from(1)),
    };
    if den == 0 {
        return Err(bad(s));
    }
    let r = Rational::from((num, den));
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_table_values() {
        for s in ["-2^5*5^3*7*13", "2*5^2/3", "-2^8*5^3*13*23*41/7", "1", "0", "2^3*5^5/3*7^2"] {
            let r = parse_factored(s).unwrap();
            assert_eq!(format_factored(&r), s);
        }
    }

    #[test]
    fn large_prime_factors() {
        let n = Integer::from(14230919u64) * Integer::from(59147190533u64) * 1009u32;
        let f = factor_integer(&n);
        assert_eq!(
            f,
            vec![
                (Integer::from(1009), 1),
                (Integer::from(14230919u64), 1),
                (Integer::from(59147190533u64), 1)
            ]
        );
    }
}
