//! Periods Ω± of f from untwisted critical values.
//!
//! Ω₋ = i·w(f)·L(f,1)/(2π) and Ω₊ = w(f)·L(f,2)/(2π)².

use super::afe::{critical_lambda, solve_root_number, LShape, TwistedLData};
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::qseries::{Form, FormId};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Which normalisation of Ω± is in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodChoice {
    Numerical,
    Canonical,
}

/// Ω₊ (real) and Ω₋ = i·`omega_minus_im`, with absolute error bounds.
#[derive(Clone, Debug)]
pub struct Periods {
    pub omega_plus: Float,
    pub omega_plus_err: f64,
    pub omega_minus_im: Float,
    pub omega_minus_err: f64,
    /// w(f) from the numerical fit.
    pub root_number: i32,
    pub choice: PeriodChoice,
}

impl Periods {
    pub fn abs_minus(&self) -> Float {
        self.omega_minus_im.clone().abs()
    }

    /// Relative error of Ω₊·|Ω₋|.
    pub fn rel_err(&self) -> f64 {
        self.omega_plus_err / self.omega_plus.to_f64().abs() + self.omega_minus_err / self.omega_minus_im.to_f64().abs()
    }
}

/// Untwisted L-data of f (trivial character, one Γ factor).
pub fn untwisted_shape(form: &Form) -> Result<LShape> {
    TwistedLData::shape_of(form, &ArtinRep::trivial(3)?, false)
}

/// Coefficients needed for the periods at `digits` (including the root-number fit).
pub fn period_demand(form: &Form, digits: u32) -> Result<usize> {
    let shape = untwisted_shape(form)?;
    let s: Vec<f64> = (1..form.weight).map(f64::from).collect();
    let a = shape.demand(digits, &s, &[1.0])?;
    let b = shape.demand(ROOT_DIGITS, &s, &[1.0, 1.1])?;
    Ok(a.max(b))
}

const ROOT_DIGITS: u32 = 20;

/// Numerical Ω± of f at `digits`.
pub fn compute_periods(form: &Form, digits: u32) -> Result<Periods> {
    let n = period_demand(form, digits)?;
    let data = TwistedLData::from_form(form, &ArtinRep::trivial(3)?, n, false)?;
    let w = solve_root_number(&data, ROOT_DIGITS)?.sign;
    let vals = critical_lambda(&data, w, digits)?;
    let prec = vals[0].l.prec();
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let l1 = &vals[0];
    let l2 = &vals[1];
    let threshold = 10f64.powi(-(digits as i32) / 4);
    if l1.l.to_f64().abs() < threshold || l2.l.to_f64().abs() < threshold {
        return Err(Error::H1Failure);
    }
    let tp2 = Float::with_val(prec, two_pi.square_ref());
    let omega_plus = Float::with_val(prec, &l2.l * w) / &tp2;
    let omega_minus_im = Float::with_val(prec, &l1.l * w) / &two_pi;
    Ok(Periods {
        omega_plus,
        omega_plus_err: l2.l_err / tp2.to_f64(),
        omega_minus_im,
        omega_minus_err: l1.l_err / two_pi.to_f64(),
        root_number: w,
        choice: PeriodChoice::Numerical,
    })
}

/// Θ³/(2π)⁹ with Θ = Γ(1/11)Γ(3/11)Γ(4/11)Γ(5/11)Γ(9/11).
fn cm_base(prec: u32) -> Float {
    let mut theta = Float::with_val(prec, 1);
    for a in [1u32, 3, 4, 5, 9] {
        theta *= Float::with_val(prec, Float::with_val(prec, a) / 11u32).gamma();
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    Float::with_val(prec, theta.pow(3u32)) / two_pi.pow(9u32)
}

/// Canonical Ω± of the CM form of level 121: Ω₊ = √11·Θ³/(2π)⁹, Ω₋ = i·Θ³/(2π)⁹.
pub fn canonical_cm_periods(prec: u32) -> Periods {
    let base = cm_base(prec);
    let sqrt11 = Float::with_val(prec, 11u32).sqrt();
    let eps = 2f64.powi(-(prec as i32) + 8);
    Periods {
        omega_plus_err: base.to_f64() * 3.4 * eps,
        omega_plus: Float::with_val(prec, &base * &sqrt11),
        omega_minus_err: base.to_f64() * eps,
        omega_minus_im: base,
        root_number: 1,
        choice: PeriodChoice::Canonical,
    }
}

/// c± with Ω±^can = c±·Ω±, and the nearest simple rationals.
#[derive(Clone, Debug)]
pub struct CanonicalRatios {
    pub c_plus: Float,
    pub c_minus: Float,
    pub c_plus_exact: Option<rug::Rational>,
    pub c_minus_exact: Option<rug::Rational>,
}

pub fn canonical_ratios(numerical: &Periods) -> Result<CanonicalRatios> {
    let prec = numerical.omega_plus.prec();
    let can = canonical_cm_periods(prec + 16);
    let c_plus = Float::with_val(prec, &can.omega_plus / &numerical.omega_plus);
    let c_minus = Float::with_val(prec, &can.omega_minus_im / &numerical.omega_minus_im);
    let rel = numerical.rel_err() + 1e-25;
    let c_plus_exact = super::lstar::reconstruct(&c_plus, rel * c_plus.to_f64().abs());
    let c_minus_exact = super::lstar::reconstruct(&c_minus, rel * c_minus.to_f64().abs());
    Ok(CanonicalRatios { c_plus, c_minus, c_plus_exact, c_minus_exact })
}

/// Periods per `choice`; canonical periods exist only for the CM form.
pub fn periods_for(form: &Form, choice: PeriodChoice, digits: u32) -> Result<Periods> {
    match choice {
        PeriodChoice::Numerical => compute_periods(form, digits),
        PeriodChoice::Canonical if form.id == FormId::F121w4 => {
            Ok(canonical_cm_periods((digits as f64 * 3.33) as u32 + 64))
        }
        PeriodChoice::Canonical => {
            Err(Error::Unsupported(format!("canonical periods for {}", form.id)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::build_form;
    use rug::Rational;

    #[test]
    fn cm_canonical_ratios() {
        let probe = build_form(&FormId::F121w4, 10).unwrap();
        let n = period_demand(&probe, 30).unwrap();
        let f = build_form(&FormId::F121w4, n).unwrap();
        let p = compute_periods(&f, 30).unwrap();
        let r = canonical_ratios(&p).unwrap();
        assert_eq!(r.c_plus_exact, Some(Rational::from(22)));
        assert_eq!(r.c_minus_exact, Some(Rational::from((1, 3))));
    }

    #[test]
    fn eisenstein_periods_are_finite() {
        let probe = build_form(&FormId::F5w4, 10).unwrap();
        let n = period_demand(&probe, 30).unwrap();
        let f = build_form(&FormId::F5w4, n).unwrap();
        let p = compute_periods(&f, 30).unwrap();
        assert!(p.omega_plus.to_f64() > 0.0 && p.omega_minus_im.to_f64() > 0.0);
        assert!(p.rel_err() < 1e-28);
    }
}
