//! Normalised critical values L*(f,φ,n) and their rational reconstruction.

use super::afe::LambdaValue;
use super::periods::Periods;
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// L*(f,φ,n) with its numerical error and, when recognised, exact value.
#[derive(Clone, Debug)]
pub struct CriticalValue {
    pub n: u32,
    pub numeric: Float,
    pub error: f64,
    pub exact: Option<Rational>,
    /// A factor √p from ε_p(φ) was multiplied in numerically.
    pub sqrt_p_absorbed: bool,
}

/// Continued-fraction recognition of x with absolute error `err`.
///
/// Accepts the first convergent p/q with |x − p/q| ≤ 10·err and q² ≤ 10^{−10}/err.
pub fn reconstruct(x: &Float, err: f64) -> Option<Rational> {
    if !x.is_finite() || !(err > 0.0) {
        return None;
    }
    if x.to_f64().abs() <= 10.0 * err {
        return Some(Rational::new());
    }
    let q_max = (1e-10 / err).sqrt();
    let mut rest = x.to_rational()?;
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let xr = x.to_rational()?;
    for _ in 0..200 {
        let a = rest.clone().floor().into_numer_denom().0;
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2.to_f64() > q_max {
            return None;
        }
        let cand = Rational::from((h2.clone(), k2.clone()));
        let diff = Rational::from(&xr - &cand).abs();
        if diff.to_f64() <= 10.0 * err {
            return Some(cand);
        }
        let frac = rest.clone() - Rational::from(a);
        if frac == 0 {
            return None;
        }
        rest = frac.recip();
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    None
}

/// L* = L(n)·ε_p(φ)·i^{−nd}·(2π)^{−nd}·(Ω₊^{d⁺}|Ω₋|^{d⁻})^{−1}.
///
/// The phase i^{−nd} is real only for even nd; odd nd is rejected.
pub fn lstar(value: &LambdaValue, rep: &ArtinRep, periods: &Periods) -> Result<CriticalValue> {
    let n = value.s as u32;
    if value.s != n as f64 {
        return Err(Error::InvalidInput(format!("non-integer critical point {}", value.s)));
    }
    let d = rep.dim();
    if n * d % 2 == 1 {
        return Err(Error::Unsupported(format!("L* at n = {n} for a character of odd parity pairing")));
    }
    let prec = value.l.prec();
    let eps = rep.epsilon_p()?;
    let eps_val = Float::with_val(prec, eps.p).pow(Float::with_val(prec, eps.num) / eps.den);
    let (dp, dm) = rep.d_plus_minus(n);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut den = two_pi.pow(n * d);
    den *= Float::with_val(prec, (&periods.omega_plus).pow(dp));
    den *= Float::with_val(prec, periods.abs_minus().pow(dm));
    let phase = if (n * d / 2) % 2 == 0 { 1 } else { -1 };
    let scale = Float::with_val(prec, &eps_val / &den) * phase as i32;
    let numeric = Float::with_val(prec, &value.l * &scale);
    let rel = dp as f64 * periods.omega_plus_err / periods.omega_plus.to_f64().abs()
        + dm as f64 * periods.omega_minus_err / periods.omega_minus_im.to_f64().abs();
    let error = value.l_err * scale.to_f64().abs() + numeric.to_f64().abs() * rel * 1.01;
    let exact = reconstruct(&numeric, error);
    Ok(CriticalValue { n, numeric, error, exact, sqrt_p_absorbed: eps.has_sqrt() })
}

/// Central value vanishing: |L(k/2)| below 10^{−digits/4} with a certified error.
pub fn central_vanishing(central: &LambdaValue, digits: u32) -> Result<bool> {
    let threshold = 10f64.powf(-(digits as f64) / 4.0);
    if central.l_err * 10.0 > threshold {
        return Err(Error::PrecisionUnderflow(format!("central value error {:.2e} too large", central.l_err)));
    }
    Ok(central.l.to_f64().abs() < threshold)
}
