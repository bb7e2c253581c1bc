//! Smoothed approximate functional equation.
//!
//! With A = √N/(2π)^d and Λ(s) = A^s Γ(s)^d L(s) = w·Λ(k−s),
//! Λ(s) = Σ b_n [ t^s Φ_s(nt/A) + w·t^{s−k} Φ_{k−s}(n/(tA)) ] for every t > 0.

use super::bessel::{self, BesselGrid};
use super::tail;
use crate::artin::{self, ArtinRep};
use crate::error::{Error, Result};
use crate::lfunc::euler::conductor_twisted;
use crate::qseries::twist::twisted_dirichlet_coeffs_opts;
use crate::qseries::Form;
use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Integer};
use std::f64::consts::PI;

/// Analytic shape of a twisted L-function.
#[derive(Clone, Debug, PartialEq)]
pub struct LShape {
    pub weight: u32,
    /// Number of Γ(s) factors, the dimension of φ.
    pub gamma_d: u32,
    /// Degree of the Euler product, used in the divisor bound.
    pub roots: u32,
    pub conductor: Integer,
}

fn gamma_f64(x: f64) -> f64 {
    Float::with_val(64, x).gamma().to_f64()
}

impl LShape {
    pub fn new(weight: u32, gamma_d: u32, conductor: Integer) -> Self {
        LShape { weight, gamma_d, roots: 2 * gamma_d, conductor }
    }

    pub fn a_f64(&self) -> f64 {
        self.conductor.to_f64().sqrt() / (2.0 * PI).powi(self.gamma_d as i32)
    }

    pub fn a(&self, prec: u32) -> Float {
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
        Float::with_val(prec, Float::with_val(prec, &self.conductor).sqrt() / two_pi.pow(self.gamma_d))
    }

    /// A^m Γ(m)^d with m = max(s, k−s); errors are measured against this.
    pub fn lambda_scale(&self, s: f64) -> f64 {
        let m = s.max(self.weight as f64 - s);
        self.a_f64().powf(m) * gamma_f64(m).powi(self.gamma_d as i32)
    }

    /// Tail of the smoothed sum for Λ(s) at split point t, cut after X terms.
    pub fn lambda_tail(&self, s: f64, t: f64, x_cut: f64) -> f64 {
        let a = self.a_f64();
        let k = self.weight as f64;
        let b = |s: f64, c: f64| tail::tail_bound(self.gamma_d, self.roots, self.weight, s, c, x_cut);
        t.powf(s) * b(s, t / a) + t.powf(s - k) * b(k - s, 1.0 / (t * a))
    }

    pub fn critical_points(&self) -> Vec<u32> {
        (1..self.weight).collect()
    }

    /// Number of coefficients needed for `digits` at the given split points.
    pub fn demand(&self, digits: u32, s_values: &[f64], ts: &[f64]) -> Result<usize> {
        let mut need = 1.0f64;
        let limit = 1e15;
        for &s in s_values {
            let target = 0.5 * 10f64.powi(-(digits as i32)) * self.lambda_scale(s);
            for &t in ts {
                let x = tail::truncation_point(limit, target, |x| self.lambda_tail(s, t, x)).ok_or_else(|| {
                    Error::Resource { what: "coefficients".into(), demand: u64::MAX, budget: limit as u64 }
                })?;
                need = need.max(x);
            }
        }
        Ok(need as usize)
    }

    fn initial_prec(&self, digits: u32) -> u32 {
        (digits as f64 * 3.3219).ceil() as u32 + 24 + (0.5 * self.a_f64().max(1.0).log2()).ceil() as u32
    }
}

/// Dirichlet coefficients and shape of L(f,φ,s).
#[derive(Clone, Debug)]
pub struct TwistedLData {
    pub label: String,
    pub shape: LShape,
    /// Closed-form root number when available.
    pub root_number: Option<i32>,
    /// b_0 = 0, b_1, …
    pub coeffs: Vec<i128>,
}

impl TwistedLData {
    pub fn shape_of(form: &Form, rep: &ArtinRep, h2_override: bool) -> Result<LShape> {
        Ok(LShape::new(form.weight, rep.dim(), conductor_twisted(form, rep, h2_override)?))
    }

    /// Uses b_n for n ≤ `n_terms`; the form must have at least that many coefficients.
    pub fn from_form(form: &Form, rep: &ArtinRep, n_terms: usize, h2_override: bool) -> Result<Self> {
        let shape = Self::shape_of(form, rep, h2_override)?;
        let coeffs = twisted_dirichlet_coeffs_opts(form, rep, n_terms, h2_override)?;
        let root_number = match artin::global_root_number(form, rep, h2_override) {
            Ok(w) => Some(w),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(TwistedLData { label: format!("{} x {}", form.id, rep.label()), shape, root_number, coeffs })
    }

    pub fn n_terms(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn check_terms(&self, need: usize) -> Result<()> {
        if need > self.n_terms() {
            return Err(Error::InsufficientCoefficients { have: self.n_terms(), need });
        }
        Ok(())
    }
}

/// Λ(s) and L(s) with absolute error bounds.
#[derive(Clone, Debug)]
pub struct LambdaValue {
    pub s: f64,
    pub lambda: Float,
    pub lambda_err: f64,
    pub l: Float,
    pub l_err: f64,
}

/// Σ_{n≤X} b_n Φ_s(n·c) for s = 1..=s_max, with Σ|b_n Φ_s(n·c)| for rounding control.
struct Pass {
    sums: Vec<Float>,
    abs: Vec<f64>,
}

const CHUNK: usize = 1 << 12;

fn integer_pass(coeffs: &[i128], d: u32, c: &Float, s_max: usize, n_cut: usize, grid: Option<&BesselGrid>) -> Pass {
    let prec = c.prec();
    let starts: Vec<usize> = (1..=n_cut).step_by(CHUNK).collect();
    let parts: Vec<Pass> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + CHUNK - 1).min(n_cut);
            let mut sums = vec![Float::with_val(prec, 0); s_max];
            let mut abs = vec![0f64; s_max];
            let mut x = Float::new(prec);
            let mut z = Float::new(prec);
            let mut bf = Float::new(prec);
            let mut out = Vec::with_capacity(s_max);
            for n in lo..=hi {
                let b = coeffs[n];
                if b == 0 {
                    continue;
                }
                x.assign(c * n as u64);
                if d == 2 {
                    z.assign(x.sqrt_ref());
                    z *= 2u32;
                    let (k0, k1) = grid.expect("grid").eval(&z);
                    bessel::phi_two_gamma(&z, &k0, &k1, s_max, &mut out);
                } else {
                    bessel::phi_one_gamma(&x, s_max, &mut out);
                }
                bf.assign(b);
                let bab = (b as f64).abs();
                for (i, phi) in out.iter().enumerate() {
                    abs[i] += bab * phi.to_f64();
                    sums[i] += Float::with_val(prec, &bf * phi);
                }
            }
            Pass { sums, abs }
        })
        .collect();
    let mut total = Pass { sums: vec![Float::with_val(prec, 0); s_max], abs: vec![0f64; s_max] };
    for p in parts {
        for i in 0..s_max {
            total.sums[i] += &p.sums[i];
            total.abs[i] += p.abs[i];
        }
    }
    total
}

fn real_pass(coeffs: &[i128], d: u32, c: &Float, s: &Float, n_cut: usize) -> (Float, f64) {
    let prec = c.prec();
    let parts: Vec<(Float, f64)> = (1..=n_cut)
        .collect::<Vec<_>>()
        .par_chunks(256)
        .map(|ns| {
            let mut acc = Float::with_val(prec, 0);
            let mut abs = 0f64;
            for &n in ns {
                let b = coeffs[n];
                if b == 0 {
                    continue;
                }
                let x = Float::with_val(prec, c * n as u64);
                let phi = if d == 2 { bessel::phi_two_gamma_real(s, &x) } else { bessel::phi_one_gamma_real(s, &x) };
                abs += (b as f64).abs() * phi.to_f64();
                acc += Float::with_val(prec, phi * b);
            }
            (acc, abs)
        })
        .collect();
    let mut acc = Float::with_val(prec, 0);
    let mut abs = 0f64;
    for (a, b) in parts {
        acc += a;
        abs += b;
    }
    (acc, abs)
}

fn rounding_bound(prec: u32, n_cut: usize, abs: f64) -> f64 {
    (1024.0 + (n_cut as f64).log2()) * 2f64.powi(-(prec as i32)) * abs
}

fn grid_for(shape: &LShape, n_cut: usize, c_max: f64, prec: u32) -> Option<BesselGrid> {
    (shape.gamma_d == 2).then(|| BesselGrid::new(2.0 * (n_cut as f64 * c_max).sqrt() + 1.0, prec))
}

fn check_gamma_d(shape: &LShape) -> Result<()> {
    if shape.gamma_d == 0 || shape.gamma_d > 2 {
        return Err(Error::Unsupported(format!("{} Gamma factors", shape.gamma_d)));
    }
    Ok(())
}

fn to_l(shape: &LShape, s: f64, lambda: &Float, lambda_err: f64) -> (Float, f64) {
    let prec = lambda.prec();
    let sf = Float::with_val(prec, s);
    let gamma = Float::with_val(prec, sf.gamma_ref()).pow(shape.gamma_d);
    let denom = Float::with_val(prec, shape.a(prec).pow(&sf)) * gamma;
    let l = Float::with_val(prec, lambda / &denom);
    (l, lambda_err / denom.to_f64())
}

/// Λ(s), L(s) at s = 1..k−1 with the split point t = 1, given the root number w.
///
/// Each Λ(s) carries an error bound at most 10^{−digits}·A^m Γ(m)^d, m = max(s, k−s).
pub fn critical_lambda(data: &TwistedLData, w: i32, digits: u32) -> Result<Vec<LambdaValue>> {
    let shape = &data.shape;
    check_gamma_d(shape)?;
    let k = shape.weight as usize;
    let s_list: Vec<f64> = (1..k).map(|s| s as f64).collect();
    let n_cut = shape.demand(digits, &s_list, &[1.0])?;
    data.check_terms(n_cut)?;
    let mut prec = shape.initial_prec(digits);
    for _ in 0..4 {
        let grid = grid_for(shape, n_cut, 1.0 / shape.a_f64(), prec);
        let a = shape.a(prec);
        let c = Float::with_val(prec, a.recip_ref());
        let pass = integer_pass(&data.coeffs, shape.gamma_d, &c, k - 1, n_cut, grid.as_ref());
        let mut out = Vec::with_capacity(k - 1);
        let mut deficit = 0f64;
        for s in 1..k {
            let (i, j) = (s - 1, k - s - 1);
            let lambda = Float::with_val(prec, &pass.sums[i] + Float::with_val(prec, &pass.sums[j] * w));
            let target = 10f64.powi(-(digits as i32)) * shape.lambda_scale(s as f64);
            let round = rounding_bound(prec, n_cut, pass.abs[i] + pass.abs[j]);
            deficit = deficit.max(round / (0.25 * target));
            let err = round + shape.lambda_tail(s as f64, 1.0, n_cut as f64);
            let (l, l_err) = to_l(shape, s as f64, &lambda, err);
            out.push(LambdaValue { s: s as f64, lambda, lambda_err: err, l, l_err });
        }
        if deficit <= 1.0 {
            return Ok(out);
        }
        prec += deficit.log2().ceil() as u32 + 8;
    }
    Err(Error::PrecisionUnderflow(format!("{}: rounding bound not met", data.label)))
}

/// Λ(s) at a real point s and split point t, given the root number w.
pub fn lambda_at(data: &TwistedLData, s: f64, w: i32, t: f64, digits: u32) -> Result<LambdaValue> {
    let shape = &data.shape;
    check_gamma_d(shape)?;
    let k = shape.weight as f64;
    let n_cut = shape.demand(digits, &[s], &[t])?;
    data.check_terms(n_cut)?;
    let mut prec = shape.initial_prec(digits);
    for _ in 0..4 {
        let a = shape.a(prec);
        let tf = Float::with_val(prec, t);
        let c1 = Float::with_val(prec, &tf / &a);
        let c2 = Float::with_val(prec, Float::with_val(prec, &tf * &a).recip_ref());
        let s1 = Float::with_val(prec, s);
        let s2 = Float::with_val(prec, k - s);
        let (u, u_abs) = real_pass(&data.coeffs, shape.gamma_d, &c1, &s1, n_cut);
        let (v, v_abs) = real_pass(&data.coeffs, shape.gamma_d, &c2, &s2, n_cut);
        let tu = Float::with_val(prec, (&tf).pow(&s1));
        let tv = Float::with_val(prec, (&tf).pow(Float::with_val(prec, s - k)));
        let lambda = Float::with_val(prec, &u * &tu) + Float::with_val(prec, &v * &tv) * w;
        let round = rounding_bound(prec, n_cut, u_abs * t.powf(s) + v_abs * t.powf(s - k));
        let target = 10f64.powi(-(digits as i32)) * shape.lambda_scale(s);
        if round > 0.25 * target {
            prec += (round / (0.25 * target)).log2().ceil() as u32 + 8;
            continue;
        }
        let err = round + shape.lambda_tail(s, t, n_cut as f64);
        let (l, l_err) = to_l(shape, s, &lambda, err);
        return Ok(LambdaValue { s, lambda, lambda_err: err, l, l_err });
    }
    Err(Error::PrecisionUnderflow(format!("{}: rounding bound not met", data.label)))
}

/// Numerically determined root number.
#[derive(Clone, Debug)]
pub struct RootNumberFit {
    /// Unrounded fit.
    pub w: f64,
    /// Nearest sign.
    pub sign: i32,
    /// Critical point used for the fit.
    pub s: u32,
}

const SPLIT: f64 = 1.1;
const ROOT_TOL: f64 = 1e-10;

/// Solves U(t₀) + wV(t₀) = U(t₁) + wV(t₁) for w with t₀ = 1, t₁ = 1.1.
pub fn solve_root_number(data: &TwistedLData, digits: u32) -> Result<RootNumberFit> {
    let shape = &data.shape;
    check_gamma_d(shape)?;
    let k = shape.weight as usize;
    let s_list: Vec<f64> = (1..k).map(|s| s as f64).collect();
    let n_cut = shape.demand(digits, &s_list, &[1.0, SPLIT])?;
    data.check_terms(n_cut)?;
    let prec = shape.initial_prec(digits) + 16;
    let a = shape.a(prec);
    let grid = grid_for(shape, n_cut, SPLIT / shape.a_f64(), prec);
    let t1 = Float::with_val(prec, SPLIT);
    let c0 = Float::with_val(prec, a.recip_ref());
    let c_up = Float::with_val(prec, &t1 / &a);
    let c_dn = Float::with_val(prec, Float::with_val(prec, &t1 * &a).recip_ref());
    let d = shape.gamma_d;
    let p0 = integer_pass(&data.coeffs, d, &c0, k - 1, n_cut, grid.as_ref());
    let p_up = integer_pass(&data.coeffs, d, &c_up, k - 1, n_cut, grid.as_ref());
    let p_dn = integer_pass(&data.coeffs, d, &c_dn, k - 1, n_cut, grid.as_ref());
    let mut best: Option<(Float, Float, u32)> = None;
    for s in 1..k {
        let (i, j) = (s - 1, k - s - 1);
        let u0 = &p0.sums[i];
        let v0 = &p0.sums[j];
        let u1 = Float::with_val(prec, &p_up.sums[i] * Float::with_val(prec, (&t1).pow(s as u32)));
        let v1 = Float::with_val(prec, &p_dn.sums[j] / Float::with_val(prec, (&t1).pow((k - s) as u32)));
        let num = u1 - u0;
        let den = Float::with_val(prec, v0 - &v1);
        let better = match &best {
            None => true,
            Some((_, bden, _)) => den.clone().abs() > bden.clone().abs(),
        };
        if better {
            best = Some((num, den, s as u32));
        }
    }
    let (num, den, s) = best.ok_or_else(|| Error::Internal("weight below 2".into()))?;
    let w = Float::with_val(prec, &num / &den).to_f64();
    let sign = if w >= 0.0 { 1 } else { -1 };
    if (w - sign as f64).abs() >= ROOT_TOL {
        return Err(Error::FunctionalEquation(format!("{}: fitted root number {w:.3e}", data.label)));
    }
    Ok(RootNumberFit { w, sign, s })
}

/// Root number from the closed form, cross-checked numerically.
pub fn checked_root_number(data: &TwistedLData, digits: u32) -> Result<i32> {
    let fit = solve_root_number(data, digits)?;
    if let Some(w) = data.root_number {
        if w != fit.sign {
            return Err(Error::FunctionalEquation(format!(
                "{}: closed form gives {w}, numerics give {}",
                data.label, fit.sign
            )));
        }
    }
    Ok(fit.sign)
}
