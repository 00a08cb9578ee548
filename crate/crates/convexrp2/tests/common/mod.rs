//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::{LN_2, PI};

pub const ZETA3: f64 = 1.202_056_903_159_594;
pub const ZETA5: f64 = 1.036_927_755_143_37;

/// Dirichlet eta at 1..=5.
pub fn eta(n: u32) -> f64 {
    match n {
        1 => LN_2,
        2 => PI * PI / 12.0,
        3 => 0.75 * ZETA3,
        4 => 7.0 * PI.powi(4) / 720.0,
        5 => 15.0 / 16.0 * ZETA5,
        _ => panic!("eta({n}) not tabulated"),
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `sum_k (-e^{-m})^k / k^n`; only used for `m >= 0.5`, where it converges
/// geometrically.
fn series(n: u32, m: f64) -> f64 {
    assert!(m >= 0.5, "series oracle needs m >= 0.5");
    let x = -(-m).exp();
    let mut p = 1.0;
    let mut s = 0.0;
    for k in 1..2000 {
        p *= x;
        let term = p / f64::from(k).powi(n as i32);
        s += term;
        if term.abs() < 1e-20 * s.abs() {
            break;
        }
    }
    s
}

/// `Li_n(-e^t)`: the defining series for `t < 0`, eta values at zero and the
/// inversion relation for `t > 0`. Requires `|t| >= 0.5` or `t = 0`.
pub fn li_neg_exp(n: u32, t: f64) -> f64 {
    if t < 0.0 {
        return series(n, -t);
    }
    if t == 0.0 {
        return -eta(n);
    }
    let mut rhs = -t.powi(n as i32) / factorial(n);
    for k in 1..=n / 2 {
        rhs -= 2.0 * t.powi((n - 2 * k) as i32) / factorial(n - 2 * k) * eta(2 * k);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    rhs - sign * series(n, t)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn sigma(u: f64) -> f64 {
    if u > 0.0 {
        let e = (-u).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + u.exp())
    }
}

/// `1/(1+e^{(x+y)/2}) + 1/(1+e^{(x-y)/2})`, written out independently.
pub fn h(x: f64, y: f64) -> f64 {
    sigma(0.5 * (x + y)) + sigma(0.5 * (x - y))
}

/// `log (e^{a/2} + e^{(b+c)/2}) / (e^{-a/2} + e^{(b+c)/2})` by direct
/// evaluation, for moderate arguments.
pub fn d_direct(a: f64, b: f64, c: f64) -> f64 {
    let m = (0.5 * (b + c)).exp();
    ((0.5 * a).exp() + m).ln() - ((-0.5 * a).exp() + m).ln()
}

/// Relative error, measured against `max(|want|, 1e-300)`.
pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}
