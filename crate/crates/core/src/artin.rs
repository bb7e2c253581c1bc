//! The Artin representations σ_p (regular representation of Gal(ℚ(μ_p)/ℚ)),
//! ρ_{p,m} (the (p−1)-dimensional irreducible of Gal(ℚ(μ_p, m^{1/p})/ℚ)) and
//! real Dirichlet characters.

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::LocalFactor;
use crate::qseries::Form;
use rug::Integer;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RepKind {
    Sigma,
    Rho { m: u64 },
    /// Real character given by its values on 0..modulus.
    Dirichlet { modulus: u64, values: Vec<i8> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArtinRep {
    pub p: u64,
    pub kind: RepKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrobLabel {
    Identity,
    PCycle,
    /// Frobenius acts on μ_p with order r > 1.
    Reflection(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrobClass {
    pub q: u64,
    pub label: FrobLabel,
}

/// An exact p^{num/den} with den ∈ {1, 2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Epsilon {
    pub p: u64,
    pub num: i64,
    pub den: u32,
}

impl Epsilon {
    pub fn has_sqrt(&self) -> bool {
        self.den == 2 && self.num % 2 != 0
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}^{}", self.p, self.num)
        } else {
            write!(f, "{}^({}/{})", self.p, self.num, self.den)
        }
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::InvalidInput(format!("p must be an odd prime, got {p}")));
    }
    Ok(())
}

impl ArtinRep {
    pub fn sigma(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        Ok(ArtinRep { p, kind: RepKind::Sigma })
    }

    pub fn rho(p: u64, m: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if m < 2 {
            return Err(Error::InvalidInput(format!("m must exceed 1, got {m}")));
        }
        if !arith::is_pth_power_free(m, p as u32) {
            return Err(Error::InvalidInput(format!("m = {m} is divisible by a {p}-th power")));
        }
        Ok(ArtinRep { p, kind: RepKind::Rho { m } })
    }

    /// A real character mod `modulus`; `p` is only carried for bookkeeping.
    pub fn dirichlet(p: u64, modulus: u64, values: Vec<i8>) -> Result<Self> {
        check_odd_prime(p)?;
        if modulus == 0 || values.len() as u64 != modulus {
            return Err(Error::InvalidInput("character table must have one value per residue".into()));
        }
        for a in 0..modulus {
            let v = values[a as usize];
            let unit = arith::gcd(a, modulus) == 1;
            if (unit && v.abs() != 1) || (!unit && v != 0) {
                return Err(Error::InvalidInput(format!("value at {a} is not a real character value")));
            }
            for b in 0..modulus {
                if values[(a * b % modulus) as usize] != v * values[b as usize] {
                    return Err(Error::InvalidInput("character table is not multiplicative".into()));
                }
            }
        }
        Ok(ArtinRep { p, kind: RepKind::Dirichlet { modulus, values } })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::dirichlet(p, 1, vec![1])
    }

    /// The quadratic character (·/p)·(−1)^{(p−1)/2}, i.e. χ_{−p} for p ≡ 3 mod 4.
    pub fn legendre_char(p: u64) -> Result<Self> {
        let values = (0..p).map(|a| arith::legendre(a as i64, p) as i8).collect();
        Self::dirichlet(p, p, values)
    }

    pub fn dim(&self) -> u32 {
        match self.kind {
            RepKind::Dirichlet { .. } => 1,
            _ => (self.p - 1) as u32,
        }
    }

    /// All three kinds are self-dual.
    pub fn dual(&self) -> Self {
        self.clone()
    }

    pub fn m(&self) -> Option<u64> {
        match self.kind {
            RepKind::Rho { m } => Some(m),
            _ => None,
        }
    }

    /// m^{p−1} ≡ 1 mod p².
    fn m_is_local_pth_power(&self) -> bool {
        let p = self.p;
        match self.kind {
            RepKind::Rho { m } => m % p != 0 && arith::pow_mod(m, p - 1, p * p) == 1,
            _ => false,
        }
    }

    fn dirichlet_conductor(modulus: u64, values: &[i8]) -> u64 {
        let divisors = (1..=modulus).filter(|d| modulus % d == 0);
        for d in divisors {
            let ok = (0..modulus).all(|a| {
                if arith::gcd(a, modulus) != 1 {
                    return true;
                }
                (0..modulus)
                    .filter(|b| b % d == a % d && arith::gcd(*b, modulus) == 1)
                    .all(|b| values[b as usize] == values[a as usize])
            });
            if ok {
                return d;
            }
        }
        modulus
    }

    /// Value of the primitive character inducing χ at q (q prime to the conductor).
    fn primitive_value(modulus: u64, values: &[i8], q: u64) -> i8 {
        let c = Self::dirichlet_conductor(modulus, values);
        if q % c == 0 && c > 1 {
            return 0;
        }
        let mut b = q % c;
        while arith::gcd(b, modulus) != 1 {
            b += c;
        }
        values[(b % modulus) as usize]
    }

    pub fn ramified_at(&self, q: u64) -> bool {
        match &self.kind {
            RepKind::Sigma => q == self.p,
            RepKind::Rho { m } => q == self.p || m % q == 0,
            RepKind::Dirichlet { modulus, values } => Self::dirichlet_conductor(*modulus, values) % q == 0,
        }
    }

    pub fn frobenius_class(&self, q: u64) -> Result<FrobClass> {
        let p = self.p;
        if self.ramified_at(q) || q == p {
            return Err(Error::Ramified(q));
        }
        let r = arith::mult_order(q % p, p);
        let label = if r > 1 {
            FrobLabel::Reflection(r)
        } else {
            match self.kind {
                RepKind::Rho { m } => {
                    if arith::pow_mod(m % q, (q - 1) / p, q) == 1 {
                        FrobLabel::Identity
                    } else {
                        FrobLabel::PCycle
                    }
                }
                _ => FrobLabel::Identity,
            }
        };
        Ok(FrobClass { q, label })
    }

    /// det(1 − Frob_q·T) on the inertia invariants.
    pub fn artin_local_factor(&self, q: u64) -> LocalFactor {
        let p = self.p;
        let one_minus_t = LocalFactor::from_i64(&[1, -1]);
        match &self.kind {
            RepKind::Dirichlet { modulus, values } => {
                let v = Self::primitive_value(*modulus, values, q);
                LocalFactor::from_i64(&[1, -(v as i64)])
            }
            RepKind::Sigma if q == p => one_minus_t,
            RepKind::Rho { .. } if q == p => {
                if self.m_is_local_pth_power() {
                    one_minus_t
                } else {
                    LocalFactor::one()
                }
            }
            RepKind::Rho { m } if m % q == 0 => LocalFactor::one(),
            _ => {
                let class = self.frobenius_class(q).expect("unramified prime");
                match class.label {
                    FrobLabel::Identity => one_minus_t.pow((p - 1) as u32),
                    FrobLabel::PCycle => LocalFactor::from_i64(&vec![1; p as usize]),
                    FrobLabel::Reflection(r) => {
                        one_minus_t.substitute_power(r as usize).pow(((p - 1) / r) as u32)
                    }
                }
            }
        }
    }

    /// Trace of Frob_q on the inertia invariants, without building the factor.
    pub fn frobenius_trace(&self, q: u64) -> i64 {
        let p = self.p;
        match &self.kind {
            RepKind::Sigma if q == p => 1,
            RepKind::Sigma => {
                if q % p == 1 {
                    (p - 1) as i64
                } else {
                    0
                }
            }
            RepKind::Rho { m } => {
                if q == p {
                    self.m_is_local_pth_power() as i64
                } else if m % q == 0 || q % p != 1 {
                    0
                } else if arith::pow_mod(m % q, (q - 1) / p, q) == 1 {
                    (p - 1) as i64
                } else {
                    -1
                }
            }
            RepKind::Dirichlet { modulus, values } => Self::primitive_value(*modulus, values, q) as i64,
        }
    }

    /// Artin conductor 𝒩(φ).
    pub fn conductor(&self) -> Result<u64> {
        let p = self.p;
        match &self.kind {
            RepKind::Sigma => Ok(p.pow((p - 2) as u32)),
            RepKind::Rho { m } => {
                if p != 3 {
                    return Err(Error::Unsupported(format!("conductor of rho for p = {p}")));
                }
                let big_m = arith::radical_without(*m, p);
                Ok(big_m * big_m * 3u64.pow(self.e_p()?))
            }
            RepKind::Dirichlet { modulus, values } => Ok(Self::dirichlet_conductor(*modulus, values)),
        }
    }

    /// e_p(φ) = ord_p 𝒩(φ).
    pub fn e_p(&self) -> Result<u32> {
        let p = self.p;
        match self.kind {
            RepKind::Rho { m } => {
                if p != 3 {
                    return Err(Error::Unsupported(format!("conductor of rho for p = {p}")));
                }
                Ok(if m % 3 == 0 {
                    5
                } else if m % 9 == 1 || m % 9 == 8 {
                    1
                } else {
                    3
                })
            }
            _ => Ok(arith::ord(self.conductor()?, p)),
        }
    }

    /// ε_p(φ) as an exact power of p.
    pub fn epsilon_p(&self) -> Result<Epsilon> {
        let p = self.p;
        if p != 3 {
            return Err(Error::Unsupported(format!("epsilon factor for p = {p}")));
        }
        match &self.kind {
            RepKind::Sigma => Ok(Epsilon { p, num: 1, den: 2 }),
            RepKind::Rho { .. } => Ok(Epsilon { p, num: self.e_p()? as i64, den: 2 }),
            RepKind::Dirichlet { .. } if self.conductor()? == 1 => Ok(Epsilon { p, num: 0, den: 1 }),
            RepKind::Dirichlet { .. } => Err(Error::Unsupported("epsilon factor of a nontrivial character".into())),
        }
    }

    /// (d⁺_n, d⁻_n), the multiplicities of the ±1 eigenvalues of complex
    /// conjugation after the parity swap for odd n.
    pub fn d_plus_minus(&self, n: u32) -> (u32, u32) {
        let (dp, dm) = match &self.kind {
            RepKind::Dirichlet { modulus, values } => {
                let even = *modulus <= 2 || values[(*modulus - 1) as usize] == 1;
                if even {
                    (1, 0)
                } else {
                    (0, 1)
                }
            }
            _ => {
                let h = ((self.p - 1) / 2) as u32;
                (h, h)
            }
        };
        if n % 2 == 0 {
            (dp, dm)
        } else {
            (dm, dp)
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            RepKind::Sigma => format!("sigma_{}", self.p),
            RepKind::Rho { m } => format!("rho_{}_{}", self.p, m),
            RepKind::Dirichlet { modulus, .. } if *modulus == 1 => "trivial".into(),
            RepKind::Dirichlet { modulus, .. } => format!("chi_mod_{modulus}"),
        }
    }
}

impl fmt::Display for ArtinRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn sgn(x: &Integer) -> i32 {
    x.cmp0() as i32
}

/// Bracketed local factor of w_q(f,ρ) (the w_q(ρ)² part cancels globally).
///
/// With `h2_override`, primes with q² | N and q | mp are accepted and contribute 1.
pub fn local_root_number(form: &Form, rep: &ArtinRep, q: u64, h2_override: bool) -> Result<i32> {
    let p = rep.p;
    let n = form.level;
    let m = match rep.kind {
        RepKind::Rho { m } => m,
        RepKind::Sigma => 1,
        RepKind::Dirichlet { .. } => return Err(Error::Unsupported("local root numbers of Dirichlet twists".into())),
    };
    let ord = arith::ord(n, q);
    if ord >= 2 && (m * p) % q == 0 {
        if !h2_override {
            return Err(Error::H2Violation(q));
        }
        return Ok(1);
    }
    if (m * p) % q != 0 {
        let leg = arith::legendre(q as i64, p);
        return Ok(if ord % 2 == 0 { 1 } else { leg });
    }
    if q == p && ord == 1 && rep.m_is_local_pth_power() {
        return Ok(-sgn(&form.a(p as usize)));
    }
    Ok(1)
}

/// Closed-form global root number of f ⊗ σ or f ⊗ ρ.
pub fn global_root_number(form: &Form, rep: &ArtinRep, h2_override: bool) -> Result<i32> {
    let p = rep.p;
    let arch = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
    match rep.kind {
        RepKind::Sigma => {
            if form.level % p == 0 {
                return Err(Error::Unsupported("sigma twist with p | N".into()));
            }
            Ok(arch * arith::legendre((form.level % p) as i64, p))
        }
        RepKind::Rho { m } => {
            let mut primes = arith::prime_divisors(form.level * m * p);
            primes.dedup();
            let mut w = arch;
            for q in primes {
                w *= local_root_number(form, rep, q, h2_override)?;
            }
            Ok(w)
        }
        RepKind::Dirichlet { .. } => Err(Error::Unsupported("closed-form root number of Dirichlet twists".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{build_form, FormId};

    #[test]
    fn frobenius_classes() {
        let r = ArtinRep::rho(3, 2).unwrap();
        assert_eq!(r.frobenius_class(7).unwrap().label, FrobLabel::PCycle);
        assert_eq!(r.frobenius_class(5).unwrap().label, FrobLabel::Reflection(2));
        assert_eq!(r.frobenius_class(31).unwrap().label, FrobLabel::Identity);
        assert!(matches!(r.frobenius_class(2), Err(Error::Ramified(2))));
        assert!(matches!(r.frobenius_class(3), Err(Error::Ramified(3))));
    }

    #[test]
    fn local_factors() {
        let r = ArtinRep::rho(3, 2).unwrap();
        assert_eq!(r.artin_local_factor(5), LocalFactor::from_i64(&[1, 0, -1]));
        assert_eq!(r.artin_local_factor(3), LocalFactor::one());
        assert_eq!(r.artin_local_factor(2), LocalFactor::one());
        assert_eq!(ArtinRep::rho(3, 17).unwrap().artin_local_factor(3), LocalFactor::from_i64(&[1, -1]));
        assert_eq!(ArtinRep::sigma(3).unwrap().artin_local_factor(3), LocalFactor::from_i64(&[1, -1]));
        assert_eq!(ArtinRep::sigma(3).unwrap().artin_local_factor(7), LocalFactor::from_i64(&[1, -2, 1]));
    }

    #[test]
    fn conductors_and_epsilons() {
        assert_eq!(ArtinRep::sigma(3).unwrap().conductor().unwrap(), 3);
        assert_eq!(ArtinRep::rho(3, 2).unwrap().conductor().unwrap(), 108);
        assert_eq!(ArtinRep::rho(3, 17).unwrap().conductor().unwrap(), 17 * 17 * 3);
        assert_eq!(ArtinRep::sigma(3).unwrap().epsilon_p().unwrap(), Epsilon { p: 3, num: 1, den: 2 });
        assert_eq!(ArtinRep::rho(3, 6).unwrap().epsilon_p().unwrap().num, 5);
        assert_eq!(ArtinRep::rho(3, 19).unwrap().epsilon_p().unwrap().num, 1);
        assert!(ArtinRep::rho(5, 2).unwrap().conductor().is_err());
        assert!(ArtinRep::rho(3, 24).is_err());
        assert_eq!(ArtinRep::legendre_char(3).unwrap().conductor().unwrap(), 3);
        assert_eq!(ArtinRep::trivial(3).unwrap().conductor().unwrap(), 1);
    }

    #[test]
    fn parity_swap() {
        assert_eq!(ArtinRep::sigma(3).unwrap().d_plus_minus(1), (1, 1));
        assert_eq!(ArtinRep::rho(3, 5).unwrap().d_plus_minus(2), (1, 1));
        assert_eq!(ArtinRep::trivial(3).unwrap().d_plus_minus(2), (1, 0));
        assert_eq!(ArtinRep::trivial(3).unwrap().d_plus_minus(1), (0, 1));
    }

    #[test]
    fn root_numbers() {
        let f5 = build_form(&FormId::F5w4, 10).unwrap();
        let f7 = build_form(&FormId::F7w4, 10).unwrap();
        let r2 = ArtinRep::rho(3, 2).unwrap();
        assert_eq!(local_root_number(&f5, &r2, 5, false).unwrap(), -1);
        assert_eq!(local_root_number(&f5, &r2, 7, false).unwrap(), 1);
        assert_eq!(local_root_number(&f7, &r2, 7, false).unwrap(), 1);
        for m in [2u64, 3, 6, 7, 11, 12] {
            assert_eq!(global_root_number(&f5, &ArtinRep::rho(3, m).unwrap(), false).unwrap(), 1);
        }
        for m in [5u64, 10] {
            assert_eq!(global_root_number(&f5, &ArtinRep::rho(3, m).unwrap(), false).unwrap(), -1);
        }
        for m in [2u64, 3, 5, 7, 10] {
            assert_eq!(global_root_number(&f7, &ArtinRep::rho(3, m).unwrap(), false).unwrap(), -1);
        }
        let s = ArtinRep::sigma(3).unwrap();
        assert_eq!(global_root_number(&f5, &s, false).unwrap(), 1);
        assert_eq!(global_root_number(&f7, &s, false).unwrap(), -1);
    }
}
