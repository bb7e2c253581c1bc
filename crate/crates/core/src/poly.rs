//! Integer polynomials used as inverse Euler factors P_q(X).

use crate::error::{Error, Result};
use rug::{Integer, Rational};
use serde::Serialize;
use std::fmt;

/// An integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LocalFactor {
    coeffs: Vec<Integer>,
}

impl LocalFactor {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        LocalFactor { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// X -> X^r.
    pub fn substitute_power(&self, r: usize) -> Self {
        let mut out = vec![Integer::new(); self.degree() * r + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * r] = c.clone();
        }
        Self::new(out)
    }

    /// X -> c·X.
    pub fn scale(&self, c: &Integer) -> Self {
        let mut pw = Integer::from(1);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(Integer::from(a * &pw));
            pw *= c;
        }
        Self::new(out)
    }

    /// Exact division; fails if a remainder is left.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let lead = d.coeffs.first().ok_or_else(|| Error::Internal("division by zero polynomial".into()))?;
        if *lead != 1 && *lead != -1 {
            return Err(Error::Internal("divisor must have constant term ±1".into()));
        }
        // Power-series division from the constant term, then check the remainder vanishes.
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return if rem.is_empty() { Ok(Self::default()) } else { Err(inexact()) };
        }
        let qlen = rem.len() - d.coeffs.len() + 1;
        let mut q = vec![Integer::new(); qlen];
        for i in 0..qlen {
            let c = Integer::from(&rem[i] * lead);
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= Integer::from(&c * dj);
            }
            q[i] = c;
        }
        if rem.iter().any(|c| *c != 0) {
            return Err(inexact());
        }
        Ok(Self::new(q))
    }

    /// Coefficients 0..=n of the formal inverse 1/P(X) (P(0) = 1).
    pub fn inverse_series(&self, n: usize) -> Vec<Integer> {
        debug_assert!(self.coeffs.first().is_some_and(|c| *c == 1));
        let mut out = vec![Integer::new(); n + 1];
        out[0] = Integer::from(1);
        for j in 1..=n {
            let mut s = Integer::new();
            for i in 1..=j.min(self.degree()) {
                s -= Integer::from(&self.coeffs[i] * &out[j - i]);
            }
            out[j] = s;
        }
        out
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

fn inexact() -> Error {
    Error::Internal("inexact polynomial division".into())
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let a = Integer::from(c.abs_ref());
            let body = match (i, a == 1) {
                (0, _) => a.to_string(),
                (1, true) => "X".into(),
                (1, false) => format!("{a}X"),
                (_, true) => format!("X^{i}"),
                (_, false) => format!("{a}X^{i}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for LocalFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}
