//! Multiprecision K₀, K₁ and the incomplete Mellin transforms of the
//! kernels e^{−x} (one Γ factor) and 2K₀(2√x) (two Γ factors).
//!
//! Φ_s(x) = x^{−s} ∫_x^∞ φ(v) v^{s−1} dv. With Z = 2√x and two Γ factors,
//! Φ_s(x) = 4·J_{2s−1}(Z) where J_ν(Z) = Z^{−ν−1} ∫_Z^∞ K₀(u) u^ν du.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

/// K₀(z), K₁(z) from the ascending series (any z > 0, cost grows with z).
pub fn k0k1_series(z: &Float, prec: u32) -> (Float, Float) {
    let zf = z.to_f64();
    let wp = prec + (2.9 * zf) as u32 + 24;
    let z = Float::with_val(wp, z);
    let half = Float::with_val(wp, &z / 2u32);
    let t = Float::with_val(wp, half.square_ref());
    let lg = Float::with_val(wp, half.ln_ref()) + euler_gamma(wp);
    // term_j = t^j/(j!)², term1_j = t^j/(j!(j+1)!)
    let mut term = Float::with_val(wp, 1);
    let mut term1 = Float::with_val(wp, 1);
    let mut h = Float::with_val(wp, 0);
    let mut i0 = Float::with_val(wp, 0);
    let mut i1s = Float::with_val(wp, 0);
    let mut sk0 = Float::with_val(wp, 0);
    let mut sk1 = Float::with_val(wp, 0);
    let mut j = 0u32;
    loop {
        let h_next = Float::with_val(wp, &h + Float::with_val(wp, 1u32) / (j + 1));
        i0 += &term;
        i1s += &term1;
        sk0 += Float::with_val(wp, &term * &h);
        sk1 += Float::with_val(wp, &term1 * Float::with_val(wp, &h + &h_next));
        j += 1;
        term *= &t;
        term /= j * j;
        term1 *= &t;
        term1 /= j * (j + 1);
        h = h_next;
        if j > 2 && term.is_zero()
            || (term.get_exp().unwrap_or(i32::MIN) < i0.get_exp().unwrap_or(0) - wp as i32 - 4 && j as f64 > zf)
        {
            break;
        }
    }
    let i1 = Float::with_val(wp, &half * &i1s);
    let k0 = Float::with_val(wp, &sk0 - Float::with_val(wp, &lg * &i0));
    let quarter_z = Float::with_val(wp, &z / 4u32);
    let k1 = Float::with_val(wp, z.recip_ref()) + Float::with_val(wp, &lg * &i1) - quarter_z * sk1;
    (Float::with_val(prec, k0), Float::with_val(prec, k1))
}

/// True when the asymptotic expansion reaches `prec` bits at z.
pub fn asymptotic_ok(z: f64, prec: u32) -> bool {
    2.88 * z > prec as f64 + 20.0
}

/// K₀(z), K₁(z) from the asymptotic expansion; requires [`asymptotic_ok`].
pub fn k0k1_asymptotic(z: &Float, prec: u32) -> (Float, Float) {
    let wp = prec + 16;
    let z = Float::with_val(wp, z);
    let inv8z = Float::with_val(wp, Float::with_val(wp, &z * 8u32).recip_ref());
    let mut s0 = Float::with_val(wp, 1);
    let mut s1 = Float::with_val(wp, 1);
    let mut a0 = Float::with_val(wp, 1);
    let mut a1 = Float::with_val(wp, 1);
    let stop = -(wp as i32) - 4;
    for k in 1..(4 * wp) {
        let odd = (2 * k - 1) as i64;
        let next0 = Float::with_val(wp, &a0 * &inv8z) * (-odd * odd) / k;
        let next1 = Float::with_val(wp, &a1 * &inv8z) * (4 - odd * odd) / k;
        if next0.clone().abs() > a0.clone().abs() {
            break;
        }
        a0 = next0;
        a1 = next1;
        s0 += &a0;
        s1 += &a1;
        if a0.get_exp().unwrap_or(i32::MIN) < stop && a1.get_exp().unwrap_or(i32::MIN) < stop {
            break;
        }
    }
    let pi = Float::with_val(wp, Constant::Pi);
    let pref = Float::with_val(wp, pi / Float::with_val(wp, &z * 2u32)).sqrt() * Float::with_val(wp, (-z).exp_ref());
    (Float::with_val(prec, &pref * &s0), Float::with_val(prec, &pref * &s1))
}

/// K₀, K₁ by whichever direct method is cheaper.
pub fn k0k1(z: &Float, prec: u32) -> (Float, Float) {
    if asymptotic_ok(z.to_f64(), prec) {
        k0k1_asymptotic(z, prec)
    } else {
        k0k1_series(z, prec)
    }
}

struct Centre {
    c: Float,
    /// Taylor coefficients of K₀ about c.
    t: Vec<Float>,
}

/// Taylor expansions of K₀ on a grid of centres, propagated by the Bessel ODE
/// z·y″ + y′ − z·y = 0. Evaluation costs one Horner pass instead of a series.
pub struct BesselGrid {
    prec: u32,
    z0: f64,
    h: f64,
    centres: Vec<Centre>,
}

/// Below this argument the direct series is used.
const GRID_START: f64 = 1.0;
const GRID_STEP: f64 = 0.25;

impl BesselGrid {
    /// Grid covering [1, z_max].
    pub fn new(z_max: f64, prec: u32) -> Self {
        let h = GRID_STEP;
        let count = (((z_max - GRID_START) / h).ceil() as usize + 2).max(1);
        let wp = prec + 32;
        let centres = (0..count)
            .into_par_iter()
            .map(|i| {
                let c = Float::with_val(wp, GRID_START + i as f64 * h);
                let (k0, k1) = k0k1(&c, wp);
                Centre { t: taylor_coeffs(&c, k0, k1, h / 2.0, prec, wp), c: Float::with_val(prec + 8, &c) }
            })
            .collect();
        BesselGrid { prec, z0: GRID_START, h, centres }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn z_max(&self) -> f64 {
        self.z0 + (self.centres.len() - 1) as f64 * self.h
    }

    /// (K₀(z), K₁(z)).
    pub fn eval(&self, z: &Float) -> (Float, Float) {
        let zf = z.to_f64();
        if zf < self.z0 {
            return k0k1_series(z, self.prec);
        }
        let idx = ((zf - self.z0) / self.h).round() as usize;
        assert!(idx < self.centres.len(), "argument {zf} beyond the Bessel grid");
        let cen = &self.centres[idx];
        let p = self.prec + 8;
        let delta = Float::with_val(p, z - &cen.c);
        let n = cen.t.len();
        let mut y = Float::with_val(p, &cen.t[n - 1]);
        let mut dy = Float::with_val(p, 0);
        for j in (0..n - 1).rev() {
            dy *= &delta;
            dy += &y;
            y *= &delta;
            y += &cen.t[j];
        }
        (Float::with_val(self.prec, y), Float::with_val(self.prec, -dy))
    }
}

fn taylor_coeffs(c: &Float, k0: Float, k1: Float, radius: f64, prec: u32, wp: u32) -> Vec<Float> {
    let mut t: Vec<Float> = vec![k0, -k1];
    let scale = t[0].to_f64().abs();
    let tol = scale * 2f64.powi(-(prec as i32) - 12);
    let mut small_run = 0;
    let cf = Float::with_val(wp, c);
    while small_run < 3 && t.len() < 400 {
        // c(j+2)(j+1)T_{j+2} = cT_j + T_{j−1} − (j+1)²T_{j+1}
        let j = t.len() - 2;
        let mut rhs = Float::with_val(wp, &cf * &t[j]);
        if j >= 1 {
            rhs += &t[j - 1];
        }
        rhs -= Float::with_val(wp, &t[j + 1] * ((j + 1) * (j + 1)) as u64);
        let den = Float::with_val(wp, &cf * ((j + 2) * (j + 1)) as u64);
        let next = rhs / den;
        let n = t.len();
        let mag = next.to_f64().abs() * radius.powi(n as i32 - 1) * n as f64;
        small_run = if mag < tol { small_run + 1 } else { 0 };
        t.push(next);
    }
    t.into_iter().map(|x| Float::with_val(prec + 8, x)).collect()
}

/// Φ_s(x) for s = 1..=s_max with two Γ factors, from K₀, K₁ at Z = 2√x.
pub fn phi_two_gamma(z: &Float, k0: &Float, k1: &Float, s_max: usize, out: &mut Vec<Float>) {
    let prec = k0.prec();
    out.clear();
    let inv_z = Float::with_val(prec, z.recip_ref());
    let inv_z2 = Float::with_val(prec, inv_z.square_ref());
    let a = Float::with_val(prec, k1 * &inv_z);
    let b = Float::with_val(prec, k0 * &inv_z2);
    // J_1 = K₁/Z, J_ν = K₁/Z + (ν−1)K₀/Z² + (ν−1)²J_{ν−2}/Z²
    let mut j = a.clone();
    out.push(Float::with_val(prec, &j * 4u32));
    for s in 2..=s_max {
        let nu1 = (2 * s - 2) as u64;
        let mut next = Float::with_val(prec, &b * nu1);
        next += &a;
        next += Float::with_val(prec, &j * &inv_z2) * (nu1 * nu1);
        j = next;
        out.push(Float::with_val(prec, &j * 4u32));
    }
}

/// Φ_s(x) = x^{−s}Γ(s,x) for s = 1..=s_max (one Γ factor).
pub fn phi_one_gamma(x: &Float, s_max: usize, out: &mut Vec<Float>) {
    let prec = x.prec();
    out.clear();
    let e = Float::with_val(prec, (-x.clone()).exp_ref());
    let inv_x = Float::with_val(prec, x.recip_ref());
    // Φ_1 = e^{−x}/x, Φ_{s+1} = (sΦ_s + e^{−x})/x
    let mut phi = Float::with_val(prec, &e * &inv_x);
    out.push(phi.clone());
    for s in 1..s_max {
        phi = (Float::with_val(prec, &phi * s as u64) + &e) * &inv_x;
        out.push(phi.clone());
    }
}

/// Φ_s(x) for real s and one Γ factor.
pub fn phi_one_gamma_real(s: &Float, x: &Float) -> Float {
    let prec = x.prec();
    let g = Float::with_val(prec + 16, s.gamma_inc_ref(x));
    let xs = Float::with_val(prec + 16, x.pow(s));
    Float::with_val(prec, g / xs)
}

/// Φ_s(x) for real s and two Γ factors: 4Z^{−2s}(C_ν − ∫_0^Z K₀u^ν du) with ν = 2s − 1.
///
/// The ascending series cancels about 2.9·Z bits; intended for moderate Z.
pub fn phi_two_gamma_real(s: &Float, x: &Float) -> Float {
    let prec = x.prec();
    let xf = x.to_f64();
    let wp = prec + (5.8 * xf.sqrt()) as u32 + 40;
    let x = Float::with_val(wp, x);
    let z = Float::with_val(wp, x.sqrt_ref()) * 2u32;
    let nu = Float::with_val(wp, s * 2u32) - 1u32;
    let half = Float::with_val(wp, &z / 2u32);
    let ln_half = Float::with_val(wp, half.ln_ref());
    let gamma = euler_gamma(wp);
    let t = Float::with_val(wp, half.square_ref());
    // Σ_j t^j/(j!)² · Z^{ν+1} [ (H_j − γ − ln(Z/2))/μ + 1/μ² ],  μ = ν + 2j + 1
    let z_pow = Float::with_val(wp, (&z).pow(&Float::with_val(wp, &nu + 1u32)));
    let mut coef = Float::with_val(wp, 1);
    let mut h = Float::with_val(wp, 0);
    let mut sum = Float::with_val(wp, 0);
    let mut j = 0u32;
    loop {
        let mu = Float::with_val(wp, &nu + (2 * j + 1));
        let inv_mu = Float::with_val(wp, mu.recip_ref());
        let bracket = Float::with_val(wp, &h - &gamma) - &ln_half;
        let term = Float::with_val(wp, &coef * (bracket * &inv_mu + Float::with_val(wp, inv_mu.square_ref())));
        sum += &term;
        j += 1;
        h += Float::with_val(wp, 1u32) / j;
        coef *= &t;
        coef /= j * j;
        if j as f64 > xf && term.get_exp().unwrap_or(i32::MIN) < sum.get_exp().unwrap_or(0) - wp as i32 {
            break;
        }
    }
    let inner = Float::with_val(wp, &sum * &z_pow);
    // C_ν = 2^{ν−1} Γ((ν+1)/2)²
    let g = Float::with_val(wp, Float::with_val(wp, &nu + 1u32) / 2u32).gamma();
    let c_nu = Float::with_val(wp, g.square_ref()) * Float::with_val(wp, Float::with_val(wp, 2u32).pow(Float::with_val(wp, &nu - 1u32)));
    let tail = c_nu - inner;
    let zs = Float::with_val(wp, (&z).pow(Float::with_val(wp, s * 2u32)));
    Float::with_val(prec, tail / zs * 4u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, rel: f64) -> bool {
        ((a.to_f64() - b) / b).abs() < rel
    }

    #[test]
    fn reference_values() {
        let one = Float::with_val(200, 1);
        let (k0, k1) = k0k1_series(&one, 200);
        assert!(close(&k0, 0.42102443824070833, 1e-15));
        assert!(close(&k1, 0.60190723019723457, 1e-15));
        let ten = Float::with_val(120, 10);
        let (a0, a1) = k0k1_series(&ten, 120);
        let (b0, b1) = k0k1_asymptotic(&Float::with_val(120, 60), 120);
        assert!(close(&a0, 1.7780062316167652e-5, 1e-14));
        assert!(close(&a1, 1.8648773453825585e-5, 1e-14));
        let (c0, c1) = k0k1_series(&Float::with_val(120, 60), 120);
        let d0 = Float::with_val(120, &b0 - &c0).abs() / &c0;
        let d1 = Float::with_val(120, &b1 - &c1).abs() / &c1;
        assert!(d0.to_f64() < 1e-33 && d1.to_f64() < 1e-33);
    }

    #[test]
    fn grid_matches_series() {
        let prec = 140;
        let grid = BesselGrid::new(40.0, prec);
        for zf in [0.3, 1.0, 1.13, 2.71, 7.77, 19.4, 39.9] {
            let z = Float::with_val(prec, zf);
            let (g0, g1) = grid.eval(&z);
            let (s0, s1) = k0k1_series(&z, prec);
            let e0 = Float::with_val(prec, &g0 - &s0).abs() / &s0;
            let e1 = Float::with_val(prec, &g1 - &s1).abs() / &s1;
            assert!(e0.to_f64() < 1e-38 && e1.to_f64() < 1e-38, "z = {zf}: {e0} {e1}");
        }
    }

    #[test]
    fn integer_and_real_kernels_agree() {
        let prec = 128;
        for xf in [0.05, 0.7, 3.0, 12.5] {
            let x = Float::with_val(prec, xf);
            let z = Float::with_val(prec, x.sqrt_ref()) * 2u32;
            let (k0, k1) = k0k1(&z, prec);
            let mut out = Vec::new();
            phi_two_gamma(&z, &k0, &k1, 5, &mut out);
            let mut out1 = Vec::new();
            phi_one_gamma(&x, 5, &mut out1);
            for s in 1..=5u32 {
                let sf = Float::with_val(prec, s);
                let r2 = phi_two_gamma_real(&sf, &x);
                let r1 = phi_one_gamma_real(&sf, &x);
                let e2 = Float::with_val(prec, &r2 - &out[s as usize - 1]).abs() / &r2;
                let e1 = Float::with_val(prec, &r1 - &out1[s as usize - 1]).abs() / &r1;
                assert!(e2.to_f64() < 1e-30, "two gamma x={xf} s={s}: {e2}");
                assert!(e1.to_f64() < 1e-30, "one gamma x={xf} s={s}: {e1}");
            }
        }
    }

    #[test]
    fn mellin_normalization() {
        // Φ_s(0⁺) → Γ(s)^d, checked through x^s Φ_s(x) at small x
        let prec = 128;
        let x = Float::with_val(prec, 1e-12);
        let s = Float::with_val(prec, 2.5);
        let v = phi_one_gamma_real(&s, &x) * Float::with_val(prec, (&x).pow(&s));
        assert!(close(&v, 1.329340388179137, 1e-10));
        let v2 = phi_two_gamma_real(&s, &x) * Float::with_val(prec, (&x).pow(&s));
        assert!(close(&v2, 1.329340388179137f64.powi(2), 1e-8));
    }
}
