//! Exact q-expansions: Eisenstein series, products, the four concrete forms,
//! CM coefficients and twisted Dirichlet coefficients.

pub mod cache;
pub mod cm;
pub mod ntt;
pub mod twist;

use crate::arith;
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::fmt;
use std::str::FromStr;

pub use cm::{cm_coefficients, CmCurve};
pub use twist::twisted_dirichlet_coeffs;

/// Truncated power series with rational coefficients stored as integers over one
/// shared positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    num: Vec<Integer>,
    den: Integer,
}

impl PowerSeries {
    pub fn from_parts(num: Vec<Integer>, den: Integer) -> Self {
        let mut s = PowerSeries { num, den };
        s.normalize();
        s
    }

    pub fn from_rationals(c: &[Rational]) -> Self {
        let mut den = Integer::from(1);
        for x in c {
            den.lcm_mut(x.denom());
        }
        let num = c
            .iter()
            .map(|x| Integer::from(x.numer() * Integer::from(&den / x.denom())))
            .collect();
        Self::from_parts(num, den)
    }

    fn normalize(&mut self) {
        if self.den < 0 {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g == 1 {
                break;
            }
            g.gcd_mut(c);
        }
        if g > 1 {
            for c in self.num.iter_mut() {
                c.div_exact_mut(&g);
            }
            self.den.div_exact_mut(&g);
        }
    }

    pub fn n_max(&self) -> usize {
        self.num.len() - 1
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    pub fn numerators(&self) -> &[Integer] {
        &self.num
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::from((self.num[i].clone(), self.den.clone()))
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    /// q -> q^t, truncated at `n_max`.
    pub fn dilate(&self, t: usize, n_max: usize) -> Self {
        let mut num = vec![Integer::new(); n_max + 1];
        for (i, c) in self.num.iter().enumerate() {
            if i * t > n_max {
                break;
            }
            num[i * t] = c.clone();
        }
        assert!(self.n_max() * t >= n_max || self.num.len() * t > n_max, "dilation would truncate");
        PowerSeries { num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self, n_max: usize) -> Self {
        assert!(self.n_max() >= n_max && other.n_max() >= n_max, "product would truncate");
        let num = if std::ptr::eq(self, other) {
            ntt::convolve(&self.num[..=n_max], &self.num[..=n_max], n_max + 1)
        } else {
            ntt::convolve(&self.num[..=n_max], &other.num[..=n_max], n_max + 1)
        };
        Self::from_parts(num, Integer::from(&self.den * &other.den))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let num = self.num.iter().map(|x| Integer::from(x * c.numer())).collect();
        Self::from_parts(num, Integer::from(&self.den * c.denom()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.n_max().min(other.n_max());
        let l = Integer::from(self.den.lcm_ref(&other.den));
        let fa = Integer::from(&l / &self.den);
        let fb = Integer::from(&l / &other.den);
        let num = (0..=n)
            .map(|i| Integer::from(&self.num[i] * &fa) + Integer::from(&other.num[i] * &fb))
            .collect();
        Self::from_parts(num, l)
    }
}

/// Divisor sums σ_e(n), 0..=n_max, exact.
fn sigma_series(e: u32, n_max: usize) -> Vec<Integer> {
    let fits = (n_max.max(2) as f64).ln() * (e as f64 + 1.0) < 80.0;
    if fits {
        arith::divisor_sums(e, n_max).into_iter().map(Integer::from).collect()
    } else {
        let mut s = vec![Integer::new(); n_max + 1];
        for d in 1..=n_max {
            let de = Integer::from(d).pow(e);
            let mut j = d;
            while j <= n_max {
                s[j] += &de;
                j += d;
            }
        }
        s
    }
}

/// E_k = −B_k/(2k) + Σ σ_{k−1}(n) qⁿ.
pub fn eisenstein(k: u32, n_max: usize) -> Result<PowerSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidInput(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    let c0 = -arith::bernoulli(k) / Rational::from(2 * k);
    let den = c0.denom().clone();
    let mut num = sigma_series(k - 1, n_max);
    for c in num.iter_mut().skip(1) {
        *c *= &den;
    }
    num[0] = c0.numer().clone();
    Ok(PowerSeries::from_parts(num, den))
}

/// E₂*(q^t) = E₂(q) − t·E₂(q^t), holomorphic of weight 2 and level t.
pub fn e2star(t: usize, n_max: usize) -> Result<PowerSeries> {
    if t < 2 {
        return Err(Error::InvalidInput(format!("e2star needs t >= 2, got {t}")));
    }
    let s = sigma_series(1, n_max);
    let mut num = vec![Integer::new(); n_max + 1];
    num[0] = Integer::from(t - 1);
    for n in 1..=n_max {
        let mut c = Integer::from(&s[n] * 24u32);
        if n % t == 0 {
            c -= Integer::from(&s[n / t] * (24 * t as u64));
        }
        num[n] = c;
    }
    Ok(PowerSeries::from_parts(num, Integer::from(24)))
}

/// One factor of an Eisenstein product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// E_k(q^t)
    E { k: u32, t: usize },
    /// E₂*(q^t)
    E2Star { t: usize },
}

impl Atom {
    fn weight(&self) -> u32 {
        match self {
            Atom::E { k, .. } => *k,
            Atom::E2Star { .. } => 2,
        }
    }

    fn series(&self, n_max: usize) -> Result<PowerSeries> {
        match *self {
            Atom::E { k, t } => Ok(eisenstein(k, n_max / t)?.dilate(t, n_max)),
            Atom::E2Star { t } => e2star(t, n_max),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::E { k, t: 1 } => write!(f, "E{k}(q)"),
            Atom::E { k, t } => write!(f, "E{k}(q^{t})"),
            Atom::E2Star { t } => write!(f, "E2*(q^{t})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComboTerm {
    pub coef: Rational,
    pub atoms: Vec<Atom>,
}

/// A rational combination of products of Eisenstein series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinCombo {
    pub terms: Vec<ComboTerm>,
}

impl EisensteinCombo {
    /// Parses e.g. `-250/3*E4(q^5) - 10/3*E4(q) + 13*E2*(q^5)^2`.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { c: &chars, i: 0, src: s };
        let mut terms = Vec::new();
        while p.i < chars.len() {
            terms.push(p.term(terms.is_empty())?);
        }
        if terms.is_empty() {
            return Err(p.err());
        }
        Ok(EisensteinCombo { terms })
    }

    pub fn weight(&self) -> Result<u32> {
        let ws: Vec<u32> = self.terms.iter().map(|t| t.atoms.iter().map(Atom::weight).sum()).collect();
        if ws.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidInput("terms of mixed weight".into()));
        }
        Ok(ws[0])
    }

    /// Evaluates the combination exactly up to q^n_max.
    pub fn series(&self, n_max: usize) -> Result<PowerSeries> {
        let mut total: Option<PowerSeries> = None;
        for term in &self.terms {
            let mut prod: Option<PowerSeries> = None;
            let mut i = 0;
            while i < term.atoms.len() {
                let s = term.atoms[i].series(n_max)?;
                // repeated atoms are squared with a single transform
                let (factor, used) = if term.atoms.get(i + 1) == Some(&term.atoms[i]) {
                    (s.mul(&s, n_max), 2)
                } else {
                    (s, 1)
                };
                prod = Some(match prod {
                    None => factor,
                    Some(p) => p.mul(&factor, n_max),
                });
                i += used;
            }
            let term_series = prod.expect("term without atoms").scale(&term.coef);
            total = Some(match total {
                None => term_series,
                Some(t) => t.add(&term_series),
            });
        }
        Ok(total.expect("combination without terms"))
    }
}

impl fmt::Display for EisensteinCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef < 0;
            let mag = Rational::from(t.coef.abs_ref());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{mag}")?;
            for a in &t.atoms {
                write!(f, "*{a}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    c: &'a [char],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::InvalidInput(format!("cannot parse Eisenstein combination `{}` near offset {}", self.src, self.i))
    }

    fn peek(&self) -> Option<char> {
        self.c.get(self.i).copied()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        let s: String = self.c[start..self.i].iter().collect();
        s.parse().map_err(|_| self.err())
    }

    fn term(&mut self, first: bool) -> Result<ComboTerm> {
        let mut sign = 1i64;
        if self.eat('-') {
            sign = -1;
        } else if !self.eat('+') && !first {
            return Err(self.err());
        }
        let mut coef = Rational::from(sign);
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.int()?;
            let d = if self.eat('/') { self.int()? } else { 1 };
            if d == 0 {
                return Err(self.err());
            }
            coef *= Rational::from((n, d));
            if !self.eat('*') {
                return Ok(ComboTerm { coef, atoms: Vec::new() }).and_then(|_| Err(self.err()));
            }
        }
        let mut atoms = Vec::new();
        loop {
            let atom = self.atom()?;
            let power = if self.eat('^') { self.int()? } else { 1 };
            for _ in 0..power {
                atoms.push(atom.clone());
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok(ComboTerm { coef, atoms })
    }

    fn atom(&mut self) -> Result<Atom> {
        self.expect('E')?;
        let k = self.int()? as u32;
        let star = self.eat('*');
        self.expect('(')?;
        self.expect('q')?;
        let t = if self.eat('^') { self.int()? as usize } else { 1 };
        self.expect(')')?;
        if t == 0 {
            return Err(self.err());
        }
        match (star, k) {
            (true, 2) => Ok(Atom::E2Star { t }),
            (true, _) => Err(self.err()),
            (false, _) => Ok(Atom::E { k, t }),
        }
    }
}

/// Identifier of a form: one of the four tabulated ones or a custom
/// Eisenstein descriptor `eis:LEVEL:WEIGHT:EXPR`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormId {
    F5w4,
    F7w4,
    F5w6,
    F121w4,
    Custom { level: u64, weight: u32, expr: String },
}

impl FormId {
    pub const TABULATED: [FormId; 4] = [FormId::F5w4, FormId::F7w4, FormId::F5w6, FormId::F121w4];

    pub fn level(&self) -> u64 {
        match self {
            FormId::F5w4 | FormId::F5w6 => 5,
            FormId::F7w4 => 7,
            FormId::F121w4 => 121,
            FormId::Custom { level, .. } => *level,
        }
    }

    pub fn weight(&self) -> u32 {
        match self {
            FormId::F5w6 => 6,
            FormId::Custom { weight, .. } => *weight,
            _ => 4,
        }
    }

    pub fn source(&self) -> Result<FormSource> {
        Ok(match self {
            FormId::F5w4 => FormSource::Eisenstein(EisensteinCombo::parse(
                "-250/3*E4(q^5) - 10/3*E4(q) + 13*E2*(q^5)^2",
            )?),
            FormId::F7w4 => FormSource::Eisenstein(EisensteinCombo::parse(
                "-147/2*E4(q^7) - 3/2*E4(q) + 5*E2*(q^7)^2",
            )?),
            FormId::F5w6 => FormSource::Eisenstein(EisensteinCombo::parse(
                "521/6*E6(q^5) - 1/30*E6(q) + 248*E2*(q^5)*E4(q^5)",
            )?),
            FormId::F121w4 => FormSource::Cm(CmCurve::conductor_121()),
            FormId::Custom { expr, .. } => FormSource::Eisenstein(EisensteinCombo::parse(expr)?),
        })
    }

    /// File-name friendly tag.
    pub fn tag(&self) -> String {
        match self {
            FormId::Custom { level, weight, expr } => {
                let clean: String = expr
                    .chars()
                    .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                    .collect();
                format!("eis{level}w{weight}_{clean}")
            }
            other => other.to_string(),
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormId::F5w4 => write!(f, "5w4"),
            FormId::F7w4 => write!(f, "7w4"),
            FormId::F5w6 => write!(f, "5w6"),
            FormId::F121w4 => write!(f, "121w4"),
            FormId::Custom { level, weight, expr } => write!(f, "eis:{level}:{weight}:{expr}"),
        }
    }
}

impl FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "5w4" => Ok(FormId::F5w4),
            "7w4" => Ok(FormId::F7w4),
            "5w6" => Ok(FormId::F5w6),
            "121w4" => Ok(FormId::F121w4),
            _ => {
                let parts: Vec<&str> = s.splitn(4, ':').collect();
                match parts.as_slice() {
                    ["eis", level, weight, expr] => {
                        let level = level.parse().map_err(|_| bad_id(s))?;
                        let weight = weight.parse().map_err(|_| bad_id(s))?;
                        let combo = EisensteinCombo::parse(expr)?;
                        if combo.weight()? != weight {
                            return Err(Error::InvalidInput(format!("descriptor weight {weight} does not match terms")));
                        }
                        Ok(FormId::Custom { level, weight, expr: expr.to_string() })
                    }
                    _ => Err(bad_id(s)),
                }
            }
        }
    }
}

fn bad_id(s: &str) -> Error {
    Error::InvalidInput(format!("unknown form `{s}` (expected 5w4, 7w4, 5w6, 121w4 or eis:N:k:EXPR)"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSource {
    Eisenstein(EisensteinCombo),
    Cm(CmCurve),
}

/// Integer coefficient storage: 64-bit while everything fits, arbitrary precision otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeffs {
    Small(Vec<i64>),
    Big(Vec<Integer>),
}

impl Coeffs {
    pub fn from_integers(v: Vec<Integer>) -> Self {
        if v.iter().all(|x| x.to_i64().is_some()) {
            Coeffs::Small(v.iter().map(|x| x.to_i64().unwrap()).collect())
        } else {
            Coeffs::Big(v)
        }
    }

    /// Builds from 128-bit values, promoting when any entry leaves the 64-bit range.
    pub fn from_i128(v: Vec<i128>) -> Self {
        if v.iter().all(|&x| i64::try_from(x).is_ok()) {
            Coeffs::Small(v.into_iter().map(|x| x as i64).collect())
        } else {
            Coeffs::Big(v.into_iter().map(Integer::from).collect())
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Coeffs::Small(v) => v.len(),
            Coeffs::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> Integer {
        match self {
            Coeffs::Small(v) => Integer::from(v[n]),
            Coeffs::Big(v) => v[n].clone(),
        }
    }

    pub fn get_i128(&self, n: usize) -> Option<i128> {
        match self {
            Coeffs::Small(v) => Some(v[n] as i128),
            Coeffs::Big(v) => v[n].to_i128(),
        }
    }

    fn truncate(&mut self, len: usize) {
        match self {
            Coeffs::Small(v) => v.truncate(len),
            Coeffs::Big(v) => v.truncate(len),
        }
    }
}

/// A primitive cusp form with cached coefficients a_0 = 0, a_1, …, a_{n_max}.
#[derive(Clone, Debug)]
pub struct Form {
    pub id: FormId,
    pub level: u64,
    pub weight: u32,
    pub source: FormSource,
    coeffs: Coeffs,
}

impl Form {
    /// Wraps precomputed coefficients (index 0 must hold 0) after validation.
    pub fn from_coeffs(id: FormId, coeffs: Coeffs) -> Result<Self> {
        let source = id.source()?;
        let form = Form { level: id.level(), weight: id.weight(), id, source, coeffs };
        form.validate()?;
        Ok(form)
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn a(&self, n: usize) -> Integer {
        self.coeffs.get(n)
    }

    pub fn a_i128(&self, n: usize) -> i128 {
        self.coeffs.get_i128(n).expect("coefficient beyond 128 bits")
    }

    /// Copy truncated to a_{n_max}.
    pub fn truncated(&self, n_max: usize) -> Form {
        let mut f = self.clone();
        f.coeffs.truncate(n_max + 1);
        f
    }

    /// Normalization, integrality and the Ramanujan sentinel at primes.
    fn validate(&self) -> Result<()> {
        if self.coeffs.len() < 2 {
            return Err(Error::InvalidInput("a form needs at least a_1".into()));
        }
        if self.coeffs.get(0) != 0 || self.coeffs.get(1) != 1 {
            return Err(Error::NotEigenform("a_0 must vanish and a_1 must be 1".into()));
        }
        let n = self.n_max();
        for q in arith::primes_up_to(n.min(2000)) {
            let q = q as u64;
            if self.level % q == 0 {
                continue;
            }
            let bound = 2.0 * (q as f64).powf((self.weight as f64 - 1.0) / 2.0);
            if self.a(q as usize).to_f64().abs() > bound + 1e-6 {
                return Err(Error::NotEigenform(format!("a_{q} violates the Ramanujan bound")));
            }
        }
        Ok(())
    }

    /// Checks multiplicativity and the Hecke recursion at prime powers up to `upto`.
    pub fn check_hecke(&self, upto: usize) -> Result<()> {
        let upto = upto.min(self.n_max());
        let spf = arith::spf_sieve(upto);
        for n in 2..=upto {
            let q = spf[n] as usize;
            let mut rest = n;
            let mut qe = 1;
            while rest % q == 0 {
                rest /= q;
                qe *= q;
            }
            let expect = if rest > 1 {
                self.a(qe) * self.a(rest)
            } else if qe == q {
                continue;
            } else {
                let prev = qe / q;
                let ord = arith::ord(self.level, q as u64);
                match ord {
                    0 => {
                        self.a(q) * self.a(prev)
                            - Integer::from(q).pow(self.weight - 1) * self.a(prev / q)
                    }
                    1 => self.a(q) * self.a(prev),
                    _ => Integer::new(),
                }
            };
            if self.a(n) != expect {
                return Err(Error::NotEigenform(format!("Hecke relation fails at n = {n}")));
            }
        }
        Ok(())
    }
}

/// Builds a form to `n_max` terms from its descriptor.
pub fn build_form(id: &FormId, n_max: usize) -> Result<Form> {
    let n_max = n_max.max(1);
    match id.source()? {
        FormSource::Cm(curve) => cm_coefficients(&curve, id.weight(), n_max),
        FormSource::Eisenstein(combo) => {
            if combo.weight()? != id.weight() {
                return Err(Error::InvalidInput("combination weight differs from the form weight".into()));
            }
            let s = combo.series(n_max)?;
            if *s.denominator() != 1 {
                let bad = (0..=n_max)
                    .find(|&i| !s.numerators()[i].is_divisible(s.denominator()))
                    .unwrap_or(0);
                return Err(Error::NotEigenform(format!(
                    "coefficient of q^{bad} is {} (not integral)",
                    s.coeff(bad)
                )));
            }
            Form::from_coeffs(id.clone(), Coeffs::from_integers(s.numerators().to_vec()))
        }
    }
}
