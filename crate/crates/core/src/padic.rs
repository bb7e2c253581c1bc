//! p-adic numbers with tracked precision, the unit root α, and the
//! normalised values M_p, ℒ_p, ℒ_p^can together with congruence verdicts.

use crate::arith;
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::factored::format_factored;
use crate::lfunc::euler::twisted_euler_factor;
use crate::qseries::Form;
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::fmt;

/// Default relative precision in p-adic digits.
pub const DEFAULT_PREC: u32 = 24;

/// p^v·u + O(p^{v+prec}) with u a unit mod p^prec, or a zero known to O(p^v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    pub p: u64,
    /// Valuation; for zeros, the absolute precision (i64::MAX when exact).
    pub valuation: i64,
    pub unit: Integer,
    /// Relative precision of `unit` in digits.
    pub prec: u32,
    zero: bool,
}

fn reduce(x: Integer, md: &Integer) -> Integer {
    let r = x % md;
    if r < 0 {
        r + md
    } else {
        r
    }
}

fn modulus(p: u64, prec: u32) -> Integer {
    Integer::from(p).pow(prec)
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PadicNumber { p, valuation: i64::MAX, unit: Integer::new(), prec: 0, zero: true }
    }

    /// O(p^abs).
    pub fn zero_to(p: u64, abs: i64) -> Self {
        PadicNumber { p, valuation: abs, unit: Integer::new(), prec: 0, zero: true }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_exact_zero(&self) -> bool {
        self.zero && self.valuation == i64::MAX
    }

    /// Absolute precision: the value is known modulo p^{abs_prec}.
    pub fn abs_prec(&self) -> i64 {
        if self.zero {
            self.valuation
        } else {
            self.valuation + self.prec as i64
        }
    }

    pub fn from_rational(x: &Rational, p: u64, prec: u32) -> Self {
        if *x == 0 {
            return Self::exact_zero(p);
        }
        let v = arith::ord_rational(x, p).expect("nonzero");
        let pv = Rational::from(p);
        let scaled = if v >= 0 {
            Rational::from(x / pv.pow(v as i32))
        } else {
            Rational::from(x * pv.pow((-v) as i32))
        };
        let md = modulus(p, prec);
        let (num, den) = scaled.into_numer_denom();
        let inv = den.invert(&md).expect("unit denominator");
        let unit = reduce(num * inv, &md);
        PadicNumber { p, valuation: v, unit, prec, zero: false }
    }

    pub fn from_integer(x: &Integer, p: u64, prec: u32) -> Self {
        Self::from_rational(&Rational::from(x), p, prec)
    }

    fn normalised(p: u64, v: i64, raw: Integer, abs: i64) -> Self {
        let span = abs - v;
        if span <= 0 {
            return Self::zero_to(p, abs.min(v));
        }
        let md = modulus(p, span as u32);
        let mut u = reduce(raw, &md);
        if u == 0 {
            return Self::zero_to(p, abs);
        }
        let mut vv = v;
        let pz = Integer::from(p);
        while u.is_divisible(&pz) {
            u /= &pz;
            vv += 1;
        }
        let prec = (abs - vv) as u32;
        let u = reduce(u, &modulus(p, prec));
        PadicNumber { p, valuation: vv, unit: u, prec, zero: false }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let abs = self.abs_prec().min(other.abs_prec());
        let lift = |x: &Self, v: i64| -> Integer {
            if x.zero {
                Integer::new()
            } else {
                Integer::from(&x.unit * Integer::from(p).pow((x.valuation - v) as u32))
            }
        };
        let v = [self, other].iter().filter(|x| !x.zero).map(|x| x.valuation).min().unwrap_or(abs).min(abs);
        Self::normalised(p, v, lift(self, v) + lift(other, v), abs)
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return self.clone();
        }
        let md = modulus(self.p, self.prec);
        PadicNumber { unit: reduce(Integer::from(&md - &self.unit), &md), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        match (self.zero, other.zero) {
            (true, _) if self.is_exact_zero() => return Self::exact_zero(p),
            (_, true) if other.is_exact_zero() => return Self::exact_zero(p),
            (true, true) => return Self::zero_to(p, self.valuation.saturating_add(other.valuation)),
            (true, false) => return Self::zero_to(p, self.valuation.saturating_add(other.valuation)),
            (false, true) => return Self::zero_to(p, self.valuation.saturating_add(other.valuation)),
            _ => {}
        }
        let prec = self.prec.min(other.prec);
        let md = modulus(p, prec);
        let unit = reduce(Integer::from(&self.unit * &other.unit), &md);
        PadicNumber { p, valuation: self.valuation + other.valuation, unit, prec, zero: false }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.zero {
            return Err(Error::PadicZeroDivision);
        }
        let md = modulus(self.p, self.prec);
        let unit = self.unit.clone().invert(&md).map_err(|_| Error::Internal("non-unit".into()))?;
        Ok(PadicNumber { p: self.p, valuation: -self.valuation, unit, prec: self.prec, zero: false })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::from_rational(&Rational::from(1), self.p, self.prec.max(1));
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Leading digit of the unit part.
    pub fn leading_digit(&self) -> Option<u64> {
        if self.zero || self.prec == 0 {
            return None;
        }
        Some(Integer::from(&self.unit % self.p).to_u64().expect("digit"))
    }

    /// Value mod p^j when known, as an integer in [0, p^j).
    pub fn residue_mod(&self, j: i64) -> Option<Integer> {
        if self.abs_prec() < j {
            return None;
        }
        if self.zero || self.valuation >= j {
            return Some(Integer::new());
        }
        if self.valuation < 0 {
            return None;
        }
        let md = modulus(self.p, j as u32);
        Some(reduce(Integer::from(&self.unit * Integer::from(self.p).pow(self.valuation as u32)), &md))
    }

    /// Table notation: "d+O(p)", "d*p^v+O(p^{v+1})", or "0" for an exact zero.
    pub fn display_digits(&self, digits: u32) -> String {
        if self.is_exact_zero() {
            return "0".into();
        }
        if self.zero {
            return format!("O({}^{})", self.p, self.valuation);
        }
        let p = self.p;
        let r = digits.min(self.prec);
        let u = Integer::from(&self.unit % Integer::from(p).pow(r));
        let v = self.valuation;
        let head = if v == 0 { u.to_string() } else { format!("{u}*{p}^{v}") };
        let tail = v + r as i64;
        if tail == 1 {
            format!("{head}+O({p})")
        } else {
            format!("{head}+O({p}^{tail})")
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_digits(1))
    }
}

/// The unit root α of X² − a_pX + p^{k−1}, by Hensel lifting from α ≡ a_p.
pub fn unit_root(form: &Form, p: u64, prec: u32) -> Result<PadicNumber> {
    let a = form.a(p as usize);
    if form.level % p == 0 || a.is_divisible(&Integer::from(p)) {
        return Err(Error::NonOrdinary(p));
    }
    let work = prec + 2;
    let md = modulus(p, work);
    let c = Integer::from(p).pow(form.weight - 1);
    let mut x = reduce(a.clone(), &md);
    for _ in 0..(2 * work as usize + 4) {
        let fx = Integer::from(&x * &x) - Integer::from(&a * &x) + &c;
        let dfx = Integer::from(&x * 2u32) - &a;
        let inv = dfx.invert(&md).map_err(|_| Error::NonOrdinary(p))?;
        x = reduce(x - fx * inv, &md);
    }
    let alpha = PadicNumber::from_integer(&x, p, work);
    Ok(PadicNumber { prec, unit: reduce(alpha.unit.clone(), &modulus(p, prec)), ..alpha })
}

fn eval_padic(poly: &crate::poly::LocalFactor, x: &PadicNumber) -> PadicNumber {
    let p = x.p;
    let prec = x.prec.max(1);
    let mut acc = PadicNumber::exact_zero(p);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul(x).add(&PadicNumber::from_integer(c, p, prec + 8));
    }
    acc
}

/// ℒ_p(f,φ,n) and the pieces of its defining product.
#[derive(Clone, Debug)]
pub struct ScriptL {
    pub value: PadicNumber,
    pub m_p: PadicNumber,
    /// 𝒫_p(f,φ,n) = ∏_{q | pm} P_q(f,φ,q^{−n}).
    pub euler_product: Rational,
    /// Valuations of each factor, in order: Γ(n)^d, L*, 𝒫, P(φ̂, p^{n−1}/α), 1/P(φ, α/p^n), (p^{n−1}/α)^e.
    pub ledger: Vec<i64>,
}

/// 𝒫_p(f,φ,n) over the primes dividing p·m.
pub fn euler_product_at(form: &Form, rep: &ArtinRep, m: u64, n: u32, h2_override: bool) -> Result<Rational> {
    let p = rep.p;
    let mut primes = arith::prime_divisors(m * p);
    primes.dedup();
    let mut out = Rational::from(1);
    for q in primes {
        let x = Rational::from((1, Integer::from(q).pow(n)));
        out *= twisted_euler_factor(form, rep, q, h2_override)?.eval(&x);
    }
    Ok(out)
}

/// ℒ_p(f,φ,n) from an exact L*. `m` fixes the primes of 𝒫 (for ρ it is ρ's own m).
pub fn script_l(form: &Form, rep: &ArtinRep, m: u64, n: u32, lstar: &Rational, prec: u32, h2_override: bool) -> Result<ScriptL> {
    let p = rep.p;
    let euler_product = euler_product_at(form, rep, m, n, h2_override)?;
    if *lstar == 0 {
        let z = PadicNumber::exact_zero(p);
        return Ok(ScriptL { value: z.clone(), m_p: z, euler_product, ledger: vec![] });
    }
    let alpha = unit_root(form, p, prec)?;
    let wp = prec + 8;
    let gamma = PadicNumber::from_integer(&arith::factorial(n - 1).pow(rep.dim()), p, wp);
    let ls = PadicNumber::from_rational(lstar, p, wp);
    let ep_local = euler_product_at(form, rep, 1, n, h2_override)?;
    let ep_local_p = PadicNumber::from_rational(&ep_local, p, wp);
    let ep_rest = PadicNumber::from_rational(&Rational::from(&euler_product / &ep_local), p, wp);
    let art = rep.artin_local_factor(p);
    let pn1 = PadicNumber::from_rational(&Rational::from(Integer::from(p).pow(n - 1)), p, wp);
    let pn = PadicNumber::from_rational(&Rational::from(Integer::from(p).pow(n)), p, wp);
    let x1 = pn1.div(&alpha)?;
    let x2 = alpha.div(&pn)?;
    let num = eval_padic(&art.clone(), &x1);
    let den = eval_padic(&art, &x2);
    if den.is_zero() {
        return Err(Error::PadicZeroDivision);
    }
    let den_inv = den.inv()?;
    let e = rep.e_p()? as i64;
    let twist = x1.pow(e)?;
    let m_p = gamma.mul(&ls).mul(&ep_local_p).mul(&num).mul(&den_inv).mul(&twist);
    let value = m_p.mul(&ep_rest);
    let val = |x: &PadicNumber| x.valuation;
    let ledger = vec![
        val(&gamma),
        val(&ls),
        arith::ord_rational(&euler_product, p).unwrap_or(i64::MAX),
        val(&num),
        val(&den_inv),
        val(&twist),
    ];
    Ok(ScriptL { value, m_p, euler_product, ledger })
}

/// ℒ^can = c₊^{−d⁺}·c₋^{−d⁻}·ℒ.
pub fn script_l_can(value: &PadicNumber, rep: &ArtinRep, n: u32, c_plus: &Rational, c_minus: &Rational) -> Result<PadicNumber> {
    if *c_plus == 0 || *c_minus == 0 {
        return Err(Error::InvalidInput("zero period ratio".into()));
    }
    let (dp, dm) = rep.d_plus_minus(n);
    let p = value.p;
    let prec = value.prec.max(1) + 8;
    let cp = PadicNumber::from_rational(c_plus, p, prec).pow(-(dp as i64))?;
    let cm = PadicNumber::from_rational(c_minus, p, prec).pow(-(dm as i64))?;
    Ok(value.mul(&cp).mul(&cm))
}

/// Three-valued verdict; precision shortfalls never produce a false claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// ℒ_σ ≡ ℒ_ρ mod p^j.
pub fn congruent_mod(a: &PadicNumber, b: &PadicNumber, j: i64) -> Verdict {
    let d = a.sub(b);
    if !d.is_zero() {
        return Verdict::from_bool(d.valuation >= j);
    }
    if d.valuation >= j {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    }
}

/// Per-n comparison of σ and ρ.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CongruenceReport {
    pub form: String,
    pub m: u64,
    pub n: u32,
    pub residue_sigma: String,
    pub residue_rho: String,
    pub verdict_mod_p: Verdict,
    pub verdict_mod_p2: Verdict,
    pub central_vanishing: bool,
}

pub fn verify_congruence(
    form: &Form,
    m: u64,
    n: u32,
    l_sigma: &PadicNumber,
    l_rho: &PadicNumber,
    central_vanishing: bool,
) -> CongruenceReport {
    let mod_p = congruent_mod(l_sigma, l_rho, 1);
    let mod_p2 = if central_vanishing { congruent_mod(l_sigma, l_rho, 2) } else { Verdict::NotApplicable };
    CongruenceReport {
        form: form.id.to_string(),
        m,
        n,
        residue_sigma: l_sigma.display_digits(1),
        residue_rho: l_rho.display_digits(1),
        verdict_mod_p: mod_p,
        verdict_mod_p2: mod_p2,
        central_vanishing,
    }
}

/// With L(f,σ,k/2) = 0 every ℒ^can(f,σ,n) lies in pℤ_p; vacuous otherwise.
pub fn manin_divisibility_check(central_vanishing: bool, values: &[PadicNumber]) -> Verdict {
    if !central_vanishing {
        return Verdict::Holds;
    }
    let mut out = Verdict::Holds;
    for v in values {
        if v.is_zero() {
            if v.valuation < 1 {
                out = Verdict::Inconclusive;
            }
        } else if v.valuation < 1 {
            return Verdict::Fails;
        }
    }
    out
}

/// Normalisation of A_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnFormula {
    /// |L*|·M·𝒩(ρ)^{n−1}/4, which reproduces the tables.
    Reconciled,
    /// |L*|·M^n·3^{e(ρ)(n−1)}/4 as displayed alongside the tables.
    Literal,
}

/// A_n for ρ_{p,m}.
pub fn a_n(rep: &ArtinRep, n: u32, lstar: &Rational, formula: AnFormula) -> Result<Rational> {
    let m = rep.m().ok_or_else(|| Error::InvalidInput("A_n needs a rho representation".into()))?;
    let big_m = Integer::from(arith::radical_without(m, rep.p));
    let abs = Rational::from(lstar.abs_ref());
    let factor = match formula {
        AnFormula::Reconciled => big_m * Integer::from(rep.conductor()?).pow(n - 1),
        AnFormula::Literal => {
            big_m.pow(n) * Integer::from(rep.p).pow(rep.e_p()? * (n - 1))
        }
    };
    Ok(abs * factor / 4u32)
}

/// Divisors defining B_n from A_n for the four tabulated forms.
pub fn b_divisor(form: &crate::qseries::FormId, n: u32) -> Option<Rational> {
    use crate::qseries::FormId::*;
    let r = |a: i64, b: i64| Rational::from((a, b));
    match (form, n) {
        (F5w4, 1) => Some(r(4 * 125 * 13, 1)),
        (F5w4, 2) => Some(r(25 * 13, 1)),
        (F7w4, 1) => Some(r(343 * 5, 1)),
        (F5w6, 1) => Some(r(64 * 31 * 25, 1)),
        (F5w6, 2) => Some(r(16 * 31, 1)),
        (F5w6, 3) => Some(r(16 * 31, 5)),
        (F121w4, 1) => Some(r(4 * 11, 1)),
        _ => None,
    }
}

/// Columns of the B-tables: which n appear, and whether as √B_n.
pub fn b_columns(form: &crate::qseries::FormId) -> &'static [(u32, bool)] {
    use crate::qseries::FormId::*;
    match form {
        F5w4 => &[(1, false), (2, true)],
        F7w4 => &[(1, false)],
        F5w6 => &[(1, false), (2, false), (3, true)],
        F121w4 => &[(1, false)],
        _ => &[],
    }
}

/// One B-table entry: B_n, or √B_n where the table prints the root.
#[derive(Clone, Debug, PartialEq)]
pub struct BValue {
    pub n: u32,
    pub b: Rational,
    pub root: bool,
    /// Printed value: B_n or its exact square root; None when B_n is not a rational square.
    pub shown: Option<Rational>,
}

pub fn table_b_value(form: &crate::qseries::FormId, rep: &ArtinRep, n: u32, lstar: &Rational, formula: AnFormula) -> Result<BValue> {
    let div = b_divisor(form, n).ok_or_else(|| Error::Unsupported(format!("no B_{n} for {form}")))?;
    let root = b_columns(form).iter().any(|&(k, r)| k == n && r);
    let b = a_n(rep, n, lstar, formula)? / div;
    let shown = if root { rational_sqrt(&b) } else { Some(b.clone()) };
    Ok(BValue { n, b, root, shown })
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if *x < 0 {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// Factored display of a B-table value.
pub fn show_b(v: &BValue) -> String {
    match &v.shown {
        Some(x) => format_factored(x),
        None => format!("sqrt({})", format_factored(&v.b)),
    }
}
