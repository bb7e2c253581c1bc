//! Elementary number theory on machine integers plus a few exact helpers.

use rug::{Integer, Rational};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest prime factor of every integer up to `n` (entries 0 and 1 are 0).
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > n {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

/// Factorization by trial division; fine for the conductors and twists used here.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Exponent of `p` in `n` (n > 0).
pub fn ord(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn ord_integer(n: &Integer, p: u64) -> Option<u32> {
    if *n == 0 {
        return None;
    }
    let mut e = 0;
    let mut x = n.clone();
    while x.is_divisible_u(p as u32) {
        x /= p as u32;
        e += 1;
    }
    Some(e)
}

/// p-adic valuation of a rational, `None` for zero.
pub fn ord_rational(x: &Rational, p: u64) -> Option<i64> {
    let a = ord_integer(x.numer(), p)? as i64;
    let b = ord_integer(x.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

/// Multiplicative order of `a` modulo `m`, with gcd(a, m) = 1.
pub fn mult_order(a: u64, m: u64) -> u64 {
    assert!(gcd(a % m, m) == 1, "mult_order needs a unit");
    let phi = totient(m);
    let mut r = phi;
    for (q, _) in factor(phi) {
        while r % q == 0 && pow_mod(a, r / q, m) == 1 {
            r /= q;
        }
    }
    r
}

pub fn totient(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// True when no p-th power > 1 divides m.
pub fn is_pth_power_free(m: u64, p: u32) -> bool {
    factor(m).iter().all(|&(_, e)| e < p)
}

/// Product of the distinct primes of `m` other than `p`.
pub fn radical_without(m: u64, p: u64) -> u64 {
    prime_divisors(m).into_iter().filter(|&q| q != p).product()
}

/// Bernoulli number B_k with B_1 = -1/2.
pub fn bernoulli(k: u32) -> Rational {
    let k = k as usize;
    let mut b: Vec<Rational> = Vec::with_capacity(k + 1);
    b.push(Rational::from(1));
    for n in 1..=k {
        // sum_{j<=n} C(n+1, j) B_j = 0
        let mut s = Rational::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(&binom * bj.clone());
            binom *= (n + 1 - j) as u32;
            binom /= (j + 1) as u32;
        }
        b.push(-s / Rational::from(n as u32 + 1));
    }
    b.pop().unwrap()
}

/// Divisor power sums sigma_e(n) for n = 0..=n_max (sigma_e(0) = 0).
pub fn divisor_sums(e: u32, n_max: usize) -> Vec<i128> {
    let mut s = vec![0i128; n_max + 1];
    for d in 1..=n_max {
        let de = (d as i128).pow(e);
        let mut j = d;
        while j <= n_max {
            s[j] += de;
            j += d;
        }
    }
    s
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(6), Rational::from((1, 42)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn sieve_agrees_with_miller_rabin() {
        let spf = spf_sieve(5000);
        for n in 2..=5000u64 {
            assert_eq!(spf[n as usize] as u64 == n, is_prime(n), "n = {n}");
        }
        assert!(is_prime(2013265921));
        assert!(!is_prime(2013265921u64 * 3));
    }

    #[test]
    fn orders_and_symbols() {
        assert_eq!(mult_order(2, 3), 2);
        assert_eq!(mult_order(7, 3), 1);
        assert_eq!(mult_order(17 * 17 % 27, 27), 3);
        assert_eq!(mult_order(2, 27), 18);
        assert_eq!(legendre(5, 3), -1);
        assert_eq!(legendre(-11, 3), 1);
        assert_eq!(legendre(-11, 7), -1);
        for p in [7u64, 13, 17, 97, 193] {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn divisor_sums_small() {
        let s = divisor_sums(3, 4);
        assert_eq!(&s[1..], &[1, 9, 28, 73]);
    }

    #[test]
    fn radicals() {
        assert_eq!(radical_without(12, 3), 2);
        assert_eq!(radical_without(18, 3), 2);
        assert_eq!(radical_without(3, 3), 1);
        assert!(is_pth_power_free(12, 3));
        assert!(!is_pth_power_free(24, 3));
    }
}
