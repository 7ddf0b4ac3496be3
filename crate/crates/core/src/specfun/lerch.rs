//! The ₂F₁(1, b; b+1; −w) family on the whole half line w ≥ 0.
//!
//! Every hypergeometric factor in the closed forms has the shape
//! ₂F₁(1, b; b+1; −w) = b·Φ₁(w, b) with the Lerch-type sum
//!
//! ```text
//! Φ₁(w, c) = Σ_{m≥0} (−w)^m / (c+m)            = ∫₀¹ t^{c−1} / (1+wt) dt
//! A(w, c)  = Σ_{m≥0} (−w)^m (m+1) / (c+m)      = ∫₀¹ t^{c−1} / (1+wt)² dt
//! B(w, c)  = Σ_{m≥0} (−w)^m (m+1) / (c+m)²     = ∫₀¹ t^{c−1} (−ln t) / (1+wt)² dt
//! ```
//!
//! (integral forms for c > 0; elsewhere by continuation in c). A and B carry
//! the derivative factors: ₂F₁(2, c; c+1; −w) = c·A(w, c) and
//! ₃F₂(2, c, c; c+1, c+1; −w) = c²·B(w, c), with B = −∂A/∂c.
//!
//! Three regimes:
//! * w ≤ 0.5: the defining series.
//! * 0.5 < w ≤ 1.6: Pfaff transformation, u = w/(1+w).
//! * w > 1.6: expansion in 1/w obtained from
//!   ∫₀^w t^{c−1}/(1+t) dt = π/sin(πc) − Σₙ (−1)ⁿ w^{c−1−n}/(n+1−c),
//!   with the pole of π/sin(πc) at a positive integer N paired against the
//!   n = N−1 term so the sum stays finite and accurate as c → N.

use super::{cos_pi, sin_pi};
use crate::{Error, Result};
use core::f64::consts::PI;
use num_traits::Float;

const SERIES_MAX: f64 = 0.5;
const PFAFF_MAX: f64 = 1.6;
const MAX_TERMS: u32 = 4000;

/// Φ₁, A and B evaluated together at one (w, c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LerchFamily {
    pub phi1: f64,
    pub a: f64,
    pub b: f64,
    pub terms: u32,
}

fn near_pole(c: f64) -> bool {
    c <= 0.0 && (c - c.round()).abs() < 1e-13
}

fn small_w(w: f64, c: f64) -> Result<LerchFamily> {
    let mut phi1 = 0.0;
    let mut a = 0.0;
    let mut b = 0.0;
    let mut pow = 1.0;
    let settle = (-c).max(0.0) as u32 + 2;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        let d = c + mf;
        let t1 = pow / d;
        let ta = t1 * (mf + 1.0);
        let tb = ta / d;
        phi1 += t1;
        a += ta;
        b += tb;
        if m >= settle
            && ta.abs() <= 1e-17 * a.abs().max(1e-300)
            && tb.abs() <= 1e-17 * b.abs().max(1e-300)
        {
            return Ok(LerchFamily { phi1, a, b, terms: m + 1 });
        }
        pow *= -w;
        if pow == 0.0 {
            return Ok(LerchFamily { phi1, a, b, terms: m + 1 });
        }
    }
    Err(Error::NoConvergence { terms: MAX_TERMS as u64, bound: pow.abs() })
}

fn pfaff(w: f64, c: f64) -> Result<LerchFamily> {
    let u = w / (1.0 + w);
    let inv = 1.0 / (1.0 + w);
    // τ_k = k!/(c)_{k+1} u^k, H_k = Σ_{j≤k} 1/(c+j).
    let mut tau = 1.0 / c;
    let mut h = 1.0 / c;
    let mut s_phi = 0.0;
    let mut s_a = 0.0;
    let mut s_b = 0.0;
    let settle = (-c).max(0.0) as u32 + 2;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ta = (kf + 1.0) * tau;
        let tb = ta * h;
        s_phi += tau;
        s_a += ta;
        s_b += tb;
        if k >= settle
            && ta.abs() <= 1e-17 * s_a.abs().max(1e-300)
            && tb.abs() <= 1e-17 * s_b.abs().max(1e-300)
        {
            return Ok(LerchFamily {
                phi1: inv * s_phi,
                a: inv * inv * s_a,
                b: inv * inv * s_b,
                terms: k + 1,
            });
        }
        let next = c + kf + 1.0;
        tau *= (kf + 1.0) * u / next;
        h += 1.0 / next;
    }
    Err(Error::NoConvergence { terms: MAX_TERMS as u64, bound: tau.abs() })
}

/// e^{x}−1 over x, and its derivative, accurate near x = 0.
fn expm1_ratio(x: f64) -> (f64, f64) {
    if x.abs() < 0.5 {
        // Σ x^k/(k+1)!, Σ k x^{k−1}/(k+1)!.
        let mut v = 0.0;
        let mut dv = 0.0;
        let mut coeff = 1.0; // 1/(k+1)!
        let mut pow = 1.0; // x^k
        let mut dpow = 0.0; // k x^{k−1}
        for k in 0..30 {
            v += coeff * pow;
            dv += coeff * dpow;
            let kf = k as f64;
            dpow = (kf + 1.0) * pow;
            pow *= x;
            coeff /= kf + 2.0;
        }
        (v, dv)
    } else {
        let e = x.exp();
        ((e - 1.0) / x, (1.0 + (x - 1.0) * e) / (x * x))
    }
}

/// q(δ) = π/sin(πδ) − 1/δ and q'(δ), for |δ| ≤ ½.
fn reciprocal_sine_defect(delta: f64) -> (f64, f64) {
    let x = PI * delta;
    if x.abs() < 1.0 {
        let x2 = x * x;
        // (x − sin x)/x³ and (sin²x − x² cos x)/x⁴ as power series in x².
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        let mut pow = 1.0;
        let mut fact_odd = 6.0; // (2k+1)! starting at k = 1
        let mut fact_even = 24.0; // (2k)! starting at k = 2
        let mut fact_even_m2 = 2.0; // (2k−2)!
        let mut two_pow = 8.0; // 2^{2k−1}
        for k in 1..14 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            s1 += sign * pow / fact_odd;
            let kf = k as f64;
            fact_odd *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
            if k >= 1 {
                // k here plays the role of k+1 in the even series.
                let sign2 = if (k + 1) % 2 == 1 { 1.0 } else { -1.0 };
                s2 += sign2 * (two_pow / fact_even - 1.0 / fact_even_m2) * pow;
                let k2 = kf + 1.0;
                fact_even *= (2.0 * k2 + 1.0) * (2.0 * k2 + 2.0);
                fact_even_m2 *= (2.0 * k2 - 1.0) * (2.0 * k2);
                two_pow *= 4.0;
            }
            pow *= x2;
        }
        let ratio = if x == 0.0 { 1.0 } else { x / x.sin() };
        (PI * x * s1 * ratio, PI * PI * s2 * ratio * ratio)
    } else {
        let s = x.sin();
        let q = PI / s - 1.0 / delta;
        let dq = 1.0 / (delta * delta) - PI * PI * x.cos() / (s * s);
        (q, dq)
    }
}

/// h(δ) = w^{−δ} π/sin(πδ) − 1/δ and h'(δ), finite at δ = 0.
fn paired_pole(delta: f64, log_w: f64) -> (f64, f64) {
    let x = -log_w * delta;
    let (psi, dpsi) = expm1_ratio(x);
    let e = -log_w * psi;
    let de = log_w * log_w * dpsi;
    let (q, dq) = reciprocal_sine_defect(delta);
    let ex = x.exp();
    (e + ex * q, de + ex * (dq - log_w * q))
}

fn reflection(w: f64, c: f64) -> Result<LerchFamily> {
    let log_w = w.ln();
    let inv_w = 1.0 / w;
    let pair = if c >= 0.5 { Some(c.round()) } else { None };

    let mut phi1 = 0.0;
    let mut a = 0.0;
    let mut b = 0.0;

    match pair {
        Some(n_int) => {
            let delta = c - n_int;
            let (h, dh) = paired_pole(delta, log_w);
            let sign = if (n_int as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let scale = sign * (-n_int * log_w).exp();
            phi1 += scale * h;
            a -= scale * ((c - 1.0) * h + 1.0);
            b += scale * (h + (c - 1.0) * dh);
        }
        None => {
            let p = PI / sin_pi(c);
            let cot = cos_pi(c) / sin_pi(c);
            let wc = (-c * log_w).exp();
            phi1 += wc * p;
            a -= (c - 1.0) * wc * p;
            b += wc * p * (1.0 - (c - 1.0) * (log_w + PI * cot));
        }
    }

    let skip = pair.map(|n| n as i64 - 1);
    let mut pow = inv_w; // w^{−1−n}
    let mut n: u32 = 0;
    loop {
        if Some(n as i64) != skip {
            let nf = n as f64;
            let d = nf + 1.0 - c;
            let sgn = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let t1 = sgn * pow / d;
            let ta = t1 * nf;
            phi1 -= t1;
            a += ta;
            b -= ta / d;
            if nf > c + 2.0 && pow <= 1e-18 * phi1.abs().max(1e-300) * d.abs() {
                break;
            }
        }
        pow *= inv_w;
        n += 1;
        if n >= MAX_TERMS || pow == 0.0 {
            break;
        }
    }
    if !(phi1.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(Error::NoConvergence { terms: n as u64, bound: f64::INFINITY });
    }
    Ok(LerchFamily { phi1, a, b, terms: n + 1 })
}

/// Φ₁(w, c), A(w, c) and B(w, c) for w ≥ 0 and c not a nonpositive integer.
pub fn lerch_family(w: f64, c: f64) -> Result<LerchFamily> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(Error::Domain("lerch family requires finite w >= 0"));
    }
    if near_pole(c) || !c.is_finite() {
        return Err(Error::Pole(c));
    }
    if w <= SERIES_MAX {
        small_w(w, c)
    } else if w <= PFAFF_MAX {
        pfaff(w, c)
    } else {
        reflection(w, c)
    }
}

/// Φ₁(w, c) = Σ (−w)^m/(c+m), continued to all w ≥ 0.
pub fn lerch_phi1(w: f64, c: f64) -> Result<f64> {
    Ok(lerch_family(w, c)?.phi1)
}

/// ₂F₁(1, b; b+1; −w) for w ≥ 0.
pub fn hyp2f1_unit(b: f64, w: f64) -> Result<f64> {
    Ok(b * lerch_phi1(w, b)?)
}

/// ₂F₁(2, 1+b; 2+b; −w) for w ≥ 0.
pub fn hyp2f1_unit_shift2(b: f64, w: f64) -> Result<f64> {
    let c = 1.0 + b;
    Ok(c * lerch_family(w, c)?.a)
}

/// ₃F₂(2, 1+b, 1+b; 2+b, 2+b; −w) for w ≥ 0.
pub fn hyp3f2_unit_shift2(b: f64, w: f64) -> Result<f64> {
    let c = 1.0 + b;
    Ok(c * c * lerch_family(w, c)?.b)
}

/// Derivative of a ↦ ₂F₁(1, h₁(a); 1+h₁(a); h₂(a)) given h₁, h₁', h₂ ≤ 0, h₂':
///
/// ```text
/// h₂'·h₁/(1+h₁)·₂F₁(2, 1+h₁; 2+h₁; h₂)
///   + h₁'·h₂/(1+h₁)²·₃F₂(2, 1+h₁, 1+h₁; 2+h₁, 2+h₁; h₂)
/// ```
pub fn hyp2f1_unit_derivative(h1: f64, dh1: f64, h2: f64, dh2: f64) -> Result<f64> {
    if h2 > 0.0 {
        return Err(Error::Domain("h2 must be nonpositive"));
    }
    let w = -h2;
    let c = 1.0 + h1;
    let fam = lerch_family(w, c)?;
    let f21 = c * fam.a;
    let f32 = c * c * fam.b;
    Ok(dh2 * h1 / c * f21 + dh1 * h2 / (c * c) * f32)
}
