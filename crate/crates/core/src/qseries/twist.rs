//! Dirichlet coefficients b_n of L(f,φ,s) = Π_q P_q(f,φ,q^{−s})^{−1}.

use super::Form;
use crate::arith;
use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::lfunc::euler::twisted_euler_factor;
use rayon::prelude::*;

/// b_0..=b_{n_max} (b_0 = 0), rejecting H2 violations.
pub fn twisted_dirichlet_coeffs(form: &Form, rep: &ArtinRep, n_max: usize) -> Result<Vec<i128>> {
    twisted_dirichlet_coeffs_opts(form, rep, n_max, false)
}

/// As [`twisted_dirichlet_coeffs`], optionally accepting H2 violations with trivial factors.
pub fn twisted_dirichlet_coeffs_opts(
    form: &Form,
    rep: &ArtinRep,
    n_max: usize,
    h2_override: bool,
) -> Result<Vec<i128>> {
    if form.n_max() < n_max {
        return Err(Error::InsufficientCoefficients { have: form.n_max(), need: n_max });
    }
    let mut b = vec![0i128; n_max + 1];
    if n_max == 0 {
        return Ok(b);
    }
    b[1] = 1;
    let primes = arith::primes_up_to(n_max);
    let special = |q: u64| form.level % q == 0 || rep.ramified_at(q) || q == rep.p;

    // Primes whose square is in range, or with nonstandard local data: full inverse factor.
    for &q in &primes {
        let q = q as u64;
        let small = (q as u128) * (q as u128) <= n_max as u128;
        if !small && !special(q) {
            continue;
        }
        let factor = twisted_euler_factor(form, rep, q, h2_override)?;
        let mut e = 0;
        let mut qe = 1usize;
        while qe.checked_mul(q as usize).is_some_and(|x| x <= n_max) {
            qe *= q as usize;
            e += 1;
        }
        let inv = factor.inverse_series(e);
        let mut idx = 1usize;
        for c in inv.iter().skip(1) {
            idx *= q as usize;
            b[idx] = c.to_i128().ok_or_else(|| Error::Internal(format!("b_{idx} exceeds 128 bits")))?;
        }
    }

    // Remaining primes only need the linear coefficient a_q·tr φ(Frob_q).
    let linear: Vec<(usize, i128)> = primes
        .par_iter()
        .filter_map(|&q| {
            let q = q as u64;
            if (q as u128) * (q as u128) <= n_max as u128 || special(q) {
                return None;
            }
            Some((q as usize, form.a_i128(q as usize) * rep.frobenius_trace(q) as i128))
        })
        .collect();
    for (q, v) in linear {
        b[q] = v;
    }
    super::cm::fill_multiplicative(&mut b);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LocalFactor;
    use crate::qseries::{build_form, FormId};

    #[test]
    fn first_coefficients() {
        let f = build_form(&FormId::F5w4, 200).unwrap();
        let s = ArtinRep::sigma(3).unwrap();
        let b = twisted_dirichlet_coeffs(&f, &s, 200).unwrap();
        assert_eq!(b[1], 1);
        assert_eq!(b[2], 0);
        let r = ArtinRep::rho(3, 2).unwrap();
        let b = twisted_dirichlet_coeffs(&f, &r, 200).unwrap();
        assert_eq!(b[2], 0);
    }

    #[test]
    fn fast_linear_path_matches_full_factor() {
        let f = build_form(&FormId::F7w4, 3000).unwrap();
        for rep in [ArtinRep::sigma(3).unwrap(), ArtinRep::rho(3, 10).unwrap(), ArtinRep::legendre_char(3).unwrap()] {
            let b = twisted_dirichlet_coeffs(&f, &rep, 3000).unwrap();
            for q in arith::primes_up_to(3000) {
                let full: LocalFactor = twisted_euler_factor(&f, &rep, q as u64, false).unwrap();
                assert_eq!(b[q as usize], -full.coeff(1).to_i128().unwrap(), "{rep} q = {q}");
            }
        }
    }

    #[test]
    fn insufficient_coefficients() {
        let f = build_form(&FormId::F5w4, 10).unwrap();
        let s = ArtinRep::sigma(3).unwrap();
        assert!(matches!(
            twisted_dirichlet_coeffs(&f, &s, 11),
            Err(Error::InsufficientCoefficients { .. })
        ));
    }
}
