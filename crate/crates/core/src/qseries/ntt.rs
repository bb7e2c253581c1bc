//! Exact integer convolution through number-theoretic transforms over several
//! 31-bit primes, recombined by Garner's algorithm.

use rug::Integer;

/// NTT-friendly primes, 2-adicity ≥ 24, ordered by preference.
const PRIMES: [u32; 8] = [
    2013265921, 1811939329, 2113929217, 1711276033, 469762049, 754974721, 167772161, 998244353,
];

struct Mont {
    p: u32,
    pinv_neg: u32,
    r2: u32,
}

impl Mont {
    fn new(p: u32) -> Self {
        // Newton iteration for p^{-1} mod 2^32.
        let mut inv = 1u32;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u64 << 32) % p as u64) as u64;
        let r2 = (r * r % p as u64) as u32;
        Mont { p, pinv_neg: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn reduce(&self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u64 * self.p as u64) >> 32) as u32;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    fn to_mont(&self, a: u32) -> u32 {
        self.mul(a, self.r2)
    }

    fn from_mont(&self, a: u32) -> u32 {
        self.reduce(a as u64)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut r = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}

fn generator(p: u32) -> u32 {
    let phi = (p - 1) as u64;
    let factors = crate::arith::prime_divisors(phi);
    (2..)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| crate::arith::pow_mod(g, phi / q, p as u64) != 1)
        })
        .unwrap() as u32
}

#[inline(always)]
fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline(always)]
fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// In-place transform of a Montgomery-form vector whose length is a power of two.
fn transform(a: &mut [u32], mont: &Mont, g: u32, invert: bool) {
    let n = a.len();
    let p = mont.p;
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let gm = mont.to_mont(g);
    let mut twiddles = vec![0u32; n / 2];
    let mut len = 2;
    while len <= n {
        let mut w = mont.pow(gm, (p as u64 - 1) / len as u64);
        if invert {
            w = mont.pow(w, p as u64 - 2);
        }
        let half = len / 2;
        twiddles[0] = mont.to_mont(1);
        for k in 1..half {
            twiddles[k] = mont.mul(twiddles[k - 1], w);
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mont.mul(hi[k], twiddles[k]);
                lo[k] = add(u, v, p);
                hi[k] = sub(u, v, p);
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = mont.pow(mont.to_mont(n as u32 % p), p as u64 - 2);
        for x in a.iter_mut() {
            *x = mont.mul(*x, ninv);
        }
    }
}

fn residues(a: &[Integer], mont: &Mont, size: usize) -> Vec<u32> {
    let mut out = vec![0u32; size];
    for (o, x) in out.iter_mut().zip(a) {
        *o = mont.to_mont(x.mod_u(mont.p));
    }
    out
}

fn max_abs_bits(a: &[Integer]) -> u32 {
    a.iter().map(|x| x.significant_bits()).max().unwrap_or(0)
}

/// First `n_out` coefficients of a·b, exact.
///
/// The moduli are chosen so that their product exceeds twice the bound
/// min(len a, len b)·max|a|·max|b| on any coefficient of the product.
pub fn convolve(a: &[Integer], b: &[Integer], n_out: usize) -> Vec<Integer> {
    let n_out = n_out.min((a.len() + b.len()).saturating_sub(1));
    if a.is_empty() || b.is_empty() || n_out == 0 {
        return vec![Integer::new(); n_out];
    }
    let a = &a[..a.len().min(n_out)];
    let b = &b[..b.len().min(n_out)];
    if a.len().min(b.len()) <= 32 {
        return schoolbook(a, b, n_out);
    }
    let square = std::ptr::eq(a.as_ptr(), b.as_ptr()) && a.len() == b.len();
    let bound_bits =
        max_abs_bits(a) + max_abs_bits(b) + (usize::BITS - a.len().min(b.len()).leading_zeros()) + 2;
    let size = (a.len() + b.len() - 1).next_power_of_two();
    let mut moduli = Vec::new();
    let mut product = Integer::from(1);
    for &p in PRIMES.iter() {
        if product.significant_bits() > bound_bits {
            break;
        }
        if ((p - 1) as usize) % size != 0 {
            continue;
        }
        moduli.push(p);
        product *= p;
    }
    assert!(
        product.significant_bits() > bound_bits,
        "convolution exceeds the modulus budget ({bound_bits} bits)"
    );

    let mut per_prime: Vec<Vec<u32>> = Vec::with_capacity(moduli.len());
    for &p in &moduli {
        let mont = Mont::new(p);
        let g = generator(p);
        let mut fa = residues(a, &mont, size);
        transform(&mut fa, &mont, g, false);
        if square {
            for x in fa.iter_mut() {
                *x = mont.mul(*x, *x);
            }
        } else {
            let mut fb = residues(b, &mont, size);
            transform(&mut fb, &mont, g, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = mont.mul(*x, *y);
            }
        }
        transform(&mut fa, &mont, g, true);
        fa.truncate(n_out);
        for x in fa.iter_mut() {
            *x = mont.from_mont(*x);
        }
        per_prime.push(fa);
    }
    garner(&moduli, &per_prime, n_out)
}

fn garner(moduli: &[u32], res: &[Vec<u32>], n_out: usize) -> Vec<Integer> {
    let k = moduli.len();
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    let inv: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            (0..i)
                .map(|j| {
                    let pi = moduli[i] as u64;
                    crate::arith::pow_mod(moduli[j] as u64 % pi, pi - 2, pi)
                })
                .collect()
        })
        .collect();
    let mut modulus = Integer::from(1);
    for &p in moduli {
        modulus *= p;
    }
    let half = Integer::from(&modulus >> 1);
    let mut out = Vec::with_capacity(n_out);
    let mut digits = vec![0u64; k];
    for idx in 0..n_out {
        for i in 0..k {
            let pi = moduli[i] as u64;
            let mut x = res[i][idx] as u64;
            for j in 0..i {
                x = (x + pi - digits[j] % pi) % pi;
                x = x * inv[i][j] % pi;
            }
            digits[i] = x;
        }
        let mut v = Integer::from(digits[k - 1]);
        for i in (0..k - 1).rev() {
            v *= moduli[i];
            v += digits[i];
        }
        if v > half {
            v -= &modulus;
        }
        out.push(v);
    }
    out
}

/// Quadratic reference product, also used for short inputs.
pub fn schoolbook(a: &[Integer], b: &[Integer], n_out: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); n_out];
    for (i, x) in a.iter().enumerate().take(n_out) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n_out - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}
