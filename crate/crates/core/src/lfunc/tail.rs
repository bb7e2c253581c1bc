//! Rigorous f64 bounds for the tails of the smoothed sums.
//!
//! With |b_n| ≤ d_r(n)·n^w, w = (k−1)/2, and Σ_{n≤u} d_r(n) ≤ u(1 + ln u)^{r−1},
//! partial summation gives
//! Σ_{n>X} |b_n|Φ_s(nc) ≤ D(X)g(X) + ∫_X^∞ D′(u)g(u) du
//! for any decreasing majorant g(u) ≥ u^w Φ_s(uc).

use std::f64::consts::PI;

/// Majorant of Φ_s(x) for `d` Γ factors; ∞ outside its range of validity.
pub fn phi_bound(d: u32, s: f64, x: f64) -> f64 {
    match d {
        1 => {
            let den = 1.0 - (s - 1.0).max(0.0) / x;
            if den <= 0.1 {
                return f64::INFINITY;
            }
            (-x).exp() / (x * den)
        }
        2 => {
            let z = 2.0 * x.sqrt();
            let den = 1.0 - (2.0 * s - 1.5).max(0.0) / z;
            if den <= 0.1 {
                return f64::INFINITY;
            }
            4.0 * (PI / 2.0).sqrt() * z.powf(-1.5) * (-z).exp() / den
        }
        _ => f64::INFINITY,
    }
}

fn divisor_mass(u: f64, r: u32) -> f64 {
    u * (1.0 + u.ln()).powi(r as i32 - 1)
}

fn divisor_mass_deriv(u: f64, r: u32) -> f64 {
    let l = 1.0 + u.ln();
    let r = r as i32;
    l.powi(r - 1) + if r >= 2 { (r - 1) as f64 * l.powi(r - 2) } else { 0.0 }
}

/// Bound for Σ_{n>X} |b_n| Φ_s(n·c).
pub fn tail_bound(d: u32, r: u32, weight: u32, s: f64, c: f64, x_cut: f64) -> f64 {
    let w = (weight as f64 - 1.0) / 2.0;
    let g = |u: f64| u.powf(w) * phi_bound(d, s, u * c);
    // u ↦ u^w Φ_s(uc) is decreasing once the kernel dominates the polynomial factor
    let v0 = if d == 1 { x_cut * c } else { 2.0 * (x_cut * c).sqrt() };
    if v0 < 4.0 * (w + s) + 8.0 {
        return f64::INFINITY;
    }
    let head = divisor_mass(x_cut, r) * g(x_cut);
    // Simpson in the kernel variable v (x for one Γ factor, Z = 2√x for two)
    let u_of = |v: f64| if d == 1 { v / c } else { v * v / (4.0 * c) };
    let du = |v: f64| if d == 1 { 1.0 / c } else { v / (2.0 * c) };
    let f = |v: f64| {
        let u = u_of(v);
        divisor_mass_deriv(u, r) * g(u) * du(v)
    };
    let steps = 4000;
    let span = 120.0;
    let h = span / steps as f64;
    let mut acc = f(v0) + f(v0 + span);
    for i in 1..steps {
        let v = v0 + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(v);
    }
    let integral = acc * h / 3.0;
    // safety factor covers quadrature error and the truncated range
    1.25 * (head + integral)
}

/// Smallest X (up to `limit`) with tail_bound(X) ≤ target, found by bisection.
pub fn truncation_point(limit: f64, target: f64, bound: impl Fn(f64) -> f64) -> Option<f64> {
    if bound(limit) > target {
        return None;
    }
    let mut lo = 1.0f64;
    let mut hi = limit;
    while hi - lo > 1.0 && hi / lo > 1.0 + 1e-6 {
        let mid = (lo * hi).sqrt().max(lo + 0.5);
        let mid = if hi - lo < 1e4 { (lo + hi) / 2.0 } else { mid };
        if bound(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi.ceil())
}
