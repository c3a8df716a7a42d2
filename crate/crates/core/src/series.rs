//! Truncated power series in one complex variable.

use num_complex::Complex64;

type C = Complex64;

/// Cauchy product truncated to `n` terms.
pub fn mul(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `a^p` for real `p`, principal branch at the constant term.
///
/// Uses the J.C.P. Miller recurrence; requires `a[0] != 0`.
pub fn pow(a: &[C], p: f64, n: usize) -> Vec<C> {
    let mut b = vec![C::new(0.0, 0.0); n];
    if n == 0 {
        return b;
    }
    b[0] = a[0].powf(p);
    for k in 1..n {
        let mut acc = C::new(0.0, 0.0);
        for j in 1..=k.min(a.len() - 1) {
            acc += a[j] * b[k - j] * ((p + 1.0) * j as f64 - k as f64);
        }
        b[k] = acc / (a[0] * k as f64);
    }
    b
}

/// Values of the series and its first `order` derivatives at `s` (Horner).
pub fn eval_derivs(a: &[C], s: C, order: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); order + 1];
    let n = a.len();
    for (d, slot) in out.iter_mut().enumerate() {
        if d >= n {
            break;
        }
        let mut acc = C::new(0.0, 0.0);
        for k in (d..n).rev() {
            acc = acc * s + a[k] * falling(k, d);
        }
        *slot = acc;
    }
    out
}

pub fn eval(a: &[C], s: C) -> C {
    a.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * s + c)
}

fn falling(k: usize, d: usize) -> f64 {
    (0..d).fold(1.0, |acc, i| acc * (k - i) as f64)
}

/// Coefficient magnitude of the last `tail` terms relative to the largest, used
/// to judge whether the truncation radius covers `|s| <= r`.
pub fn tail_ratio(a: &[C], r: f64, tail: usize) -> f64 {
    let mut head: f64 = 0.0;
    let mut tl: f64 = 0.0;
    let n = a.len();
    let mut rk = 1.0;
    for (k, c) in a.iter().enumerate() {
        let v = c.norm() * rk;
        if k + tail >= n {
            tl = tl.max(v);
        } else {
            head = head.max(v);
        }
        rk *= r;
    }
    if head == 0.0 {
        0.0
    } else {
        tl / head
    }
}
