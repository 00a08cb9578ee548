//! Summands of the generalized McShane identity and truncated sums over
//! simple closed curves of the one-holed torus.

use serde::Serialize;

use crate::curves::{enumerate_slopes, inverse, mul, SimpleCurve, BOUNDARY};
use crate::error::{Error, Result};
use crate::holonomy::{unipotent_flag, EigenFrame, Representation, Surface};
use crate::projective_core::{edge_function, edge_function_exact, Flag, Mat3, Vec3};

fn log_add_exp(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + (-(x - y).abs()).exp().ln_1p()
}

/// `1 / (1 + e^u)` without overflow.
pub fn logistic(u: f64) -> f64 {
    if u > 0.0 {
        let e = (-u).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + u.exp())
    }
}

/// `log (e^{a/2} + e^{(b+c)/2}) / (e^{-a/2} + e^{(b+c)/2})`.
pub fn d_func(a: f64, b: f64, c: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    // log1p(2 sinh(|a|/2) / (e^{-|a|/2} + e^m)), odd in `a`, with the ratio
    // kept in log form so tiny values keep their relative precision.
    let m = 0.5 * (b + c);
    let h = 0.5 * a.abs();
    let x = h + (-(-a.abs()).exp_m1()).ln() - log_add_exp(-h, m);
    let softplus = if x > 0.0 { x + (-x).exp().ln_1p() } else { x.exp().ln_1p() };
    a.signum() * softplus
}

pub fn h_func(x: f64, y: f64) -> f64 {
    logistic(0.5 * (x + y)) + logistic(0.5 * (x - y))
}

/// Inputs of one `D`-term: `phi`, then `tau` and `l1` of `beta` and `gamma`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PantsTerm {
    pub phi: f64,
    pub tau_beta: f64,
    pub l1_beta: f64,
    pub tau_gamma: f64,
    pub l1_gamma: f64,
}

impl PantsTerm {
    fn eval(&self, l1_alpha: f64) -> f64 {
        d_func(l1_alpha, self.phi + self.tau_beta + self.l1_beta, self.phi + self.tau_gamma + self.l1_gamma)
    }
}

/// `D(alpha, beta, gamma)`: the interior pants summand, one term for each
/// orientation. `fwd` carries `phi_1(beta, gamma)` and `bwd` carries
/// `phi_1(beta^{-1}, gamma^{-1})` with the inverse curves' data.
pub fn summand_d(l1_alpha: f64, l1_alpha_inv: f64, fwd: &PantsTerm, bwd: &PantsTerm) -> f64 {
    fwd.eval(l1_alpha) + bwd.eval(l1_alpha_inv)
}

/// `R(alpha, beta, gamma)` for pants meeting a second boundary `gamma`.
/// Here `fwd.phi` is `phi_1'(beta, gamma)` and `fwd.tau_gamma`,
/// `fwd.l1_gamma` are `tau(gamma^{-1})`, `l1(gamma^{-1})`.
pub fn summand_r(l1_alpha: f64, l1_alpha_inv: f64, fwd: &PantsTerm, bwd: &PantsTerm) -> f64 {
    let first = d_func(l1_alpha, fwd.phi + fwd.tau_beta + fwd.l1_beta, fwd.phi - fwd.tau_gamma - fwd.l1_gamma);
    first + bwd.eval(l1_alpha_inv)
}

fn log_cosh_ratio(q: [&Flag; 4]) -> Result<f64> {
    log_cosh_ratio_with(edge_function, q)
}

fn log_cosh_ratio_with(d: fn(u8, &Flag, &Flag, &Flag, &Flag) -> Result<f64>, q: [&Flag; 4]) -> Result<f64> {
    let half_log = |i| -> Result<f64> {
        let d = -d(i, q[0], q[1], q[2], q[3])?;
        if d > 0.0 {
            Ok(0.5 * d.ln())
        } else {
            Err(Error::NotPositive { key: format!("-D{i}"), value: d })
        }
    };
    let (a, b) = (half_log(2)?, half_log(1)?);
    // log cosh(a) - log cosh(b) with the e^{|x|} factors pulled out.
    let lc = |x: f64| x.abs() + (-2.0 * x.abs()).exp().ln_1p();
    Ok(lc(a) - lc(b))
}

/// `phi_1` on the flags `(alpha^-, gamma alpha^-, beta^+, gamma^+)`.
pub fn phi1(alpha_minus: &Flag, gamma: &Mat3, beta_plus: &Flag, gamma_plus: &Flag) -> Result<f64> {
    log_cosh_ratio([alpha_minus, &alpha_minus.transform(gamma), beta_plus, gamma_plus])
}

/// `phi_1'` on the flags `(alpha^-, gamma alpha^-, beta^+, gamma^-)`.
pub fn phi1_prime(alpha_minus: &Flag, gamma: &Mat3, beta_plus: &Flag, gamma_minus: &Flag) -> Result<f64> {
    log_cosh_ratio([alpha_minus, &alpha_minus.transform(gamma), beta_plus, gamma_minus])
}

/// Dominant eigenvector of `diag(d) m`, where `d[lead] = 1` and the other
/// entries may be tiny; each small component keeps full relative precision.
fn graded_dominant(m: &Mat3, d: [f64; 3], lead: usize) -> Vec3 {
    let mut v = Vec3::zeros();
    v[lead] = 1.0;
    for _ in 0..10_000 {
        let mv = m * v;
        let lambda = mv[lead];
        let next = Vec3::from_fn(|i, _| if i == lead { 1.0 } else { d[i] * mv[i] / lambda });
        let done = (0..3).all(|i| (next[i] - v[i]).abs() <= 1e-16 * next[i].abs());
        v = next;
        if done {
            break;
        }
    }
    v
}

/// `phi_1(beta, gamma)` for the torus pants, where `beta = gamma alpha`. All
/// four flags are written in the eigenbasis of `gamma`, so the clustering of
/// `gamma alpha^-` and `beta^+` around `gamma^+` costs no precision.
pub fn phi1_in_frame(alpha: &Mat3, alpha_minus: &Flag, gamma: &EigenFrame) -> Result<f64> {
    let am = gamma.coordinates(alpha_minus);
    let d = gamma.scaled_eigenvalues();
    let gam = Flag::unchecked(
        Vec3::new(am.point.x, am.point.y * d[1], am.point.z * d[2]),
        Vec3::new(am.line.x * d[2], am.line.y * d[2] / d[1], am.line.z),
    );
    let ae = gamma.matrix_coordinates(alpha);
    let aei = ae.try_inverse().ok_or(Error::NonGenericFlags)?;
    // beta^+: top right eigenvector of diag(d) ae; its line is the top left
    // eigenvector of ae^{-1} diag(d)^{-1}.
    let bp_point = graded_dominant(&ae, d, 0);
    let bp_line = graded_dominant(&aei.transpose(), [d[2], d[2] / d[1], 1.0], 2);
    let bp = Flag::unchecked(bp_point, bp_line);
    let gp = Flag::unchecked(Vec3::x(), Vec3::z());
    log_cosh_ratio_with(edge_function_exact, [&am, &gam, &bp, &gp])
}

/// `tau = log T(q, W q, W^+)` for the element named by `word`.
pub fn tau(rep: &Representation, q: &Flag, word: &str) -> Result<f64> {
    rep.frame(word)?.log_triple_with_translate(q)
}

/// The words `beta`, `gamma` of the pants cut off by a simple curve with
/// partner `y`, marked so that `alpha beta^{-1} gamma = 1` for
/// `alpha = [x, y]`.
pub fn pants_words(c: &SimpleCurve) -> (String, String) {
    let xi = inverse(&c.x);
    (mul(&[&c.y, &xi, &inverse(&c.y)]), xi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummandRecord {
    pub slope: (i64, i64),
    pub word: String,
    pub l1: f64,
    pub l2: f64,
    pub tau: f64,
    pub term: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McShaneReport {
    pub sum: f64,
    /// The value the full series should reach: 1 for a cusp, `l1` of the
    /// boundary otherwise.
    pub target: f64,
    /// Largest term among slopes on the outermost level.
    pub last_level_max_term: f64,
    pub records: Vec<SummandRecord>,
}

impl McShaneReport {
    fn build(target: f64, depth: i64, terms: Vec<(SimpleCurve, f64, f64, f64, f64)>) -> Self {
        let mut sum = 0.0;
        let mut last = 0.0f64;
        let mut records = Vec::with_capacity(terms.len());
        for (c, l1, l2, tau, term) in terms {
            sum += term;
            if c.slope.0.abs().max(c.slope.1.abs()) == depth {
                last = last.max(term);
            }
            records.push(SummandRecord { slope: c.slope, word: c.x, l1, l2, tau, term, partial_sum: sum });
        }
        McShaneReport { sum, target, last_level_max_term: last, records }
    }

    /// Partial sums over the slopes of height at most `n`, for each `n`.
    pub fn convergence(&self) -> Vec<(i64, f64)> {
        let depth = self.records.iter().map(|r| r.slope.0.abs().max(r.slope.1.abs())).max().unwrap_or(0);
        let mut by_level = vec![0.0; depth as usize + 1];
        for r in &self.records {
            by_level[r.slope.0.abs().max(r.slope.1.abs()) as usize] += r.term;
        }
        let mut acc = 0.0;
        (1..=depth)
            .map(|n| {
                acc += by_level[n as usize];
                (n, acc)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,word,l1,l2,tau,term,partial_sum\n");
        for r in &self.records {
            s += &format!(
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.slope.0, r.slope.1, r.word, r.l1, r.l2, r.tau, r.term, r.partial_sum
            );
        }
        s
    }
}

fn check_torus(rep: &Representation) -> Result<()> {
    if rep.surface != Surface::OnceHoledTorus {
        return Err(Error::Config("McShane sums are provided for the one-holed torus".into()));
    }
    Ok(())
}

/// `sum 1/(1 + e^{l1(gamma) + tau(gamma)})` over oriented simple curves up to
/// `depth`, for a torus with unipotent boundary.
pub fn mcshane_sum_unipotent(rep: &Representation, depth: i64) -> Result<McShaneReport> {
    check_torus(rep)?;
    let p = unipotent_flag(&rep.matrix(BOUNDARY))?;
    let mut terms = Vec::new();
    for c in enumerate_slopes(depth) {
        let f = rep.frame(&c.x)?;
        let t = f.log_triple_with_translate(&p)?;
        let term = logistic(f.l1 + t);
        terms.push((c, f.l1, f.l2, t, term));
    }
    Ok(McShaneReport::build(1.0, depth, terms))
}

/// `sum D(l1(alpha), phi + tau(beta) + l1(beta), phi + tau(gamma) + l1(gamma))`
/// over oriented simple curves up to `depth`, for a torus with loxodromic
/// boundary `alpha = abAB`, where `phi = phi_1(beta, gamma)`. Records carry
/// `l1`, `l2`, `tau` of `gamma`.
pub fn mcshane_sum_boundary(rep: &Representation, depth: i64) -> Result<McShaneReport> {
    check_torus(rep)?;
    let alpha = rep.frame(BOUNDARY)?;
    let am = alpha.minus();
    let a = rep.matrix(BOUNDARY);
    let mut terms = Vec::new();
    for c in enumerate_slopes(depth) {
        let (beta, gamma) = pants_words(&c);
        let fb = rep.frame(&beta)?;
        let fg = rep.frame(&gamma)?;
        let (tb, tg) = (fb.log_triple_with_translate(&am)?, fg.log_triple_with_translate(&am)?);
        let phi = phi1_in_frame(&a, &am, &fg)?;
        let term = PantsTerm { phi, tau_beta: tb, l1_beta: fb.l1, tau_gamma: tg, l1_gamma: fg.l1 }.eval(alpha.l1);
        terms.push((c, fg.l1, fg.l2, tg, term));
    }
    Ok(McShaneReport::build(alpha.l1, depth, terms))
}

/// `phi_1(beta, gamma)` for the pants cut off by `c`, with `alpha = abAB`.
pub fn phi1_torus(rep: &Representation, c: &SimpleCurve) -> Result<f64> {
    let alpha = rep.frame(BOUNDARY)?;
    let (_, gamma) = pants_words(c);
    phi1_in_frame(&rep.matrix(BOUNDARY), &alpha.minus(), &rep.frame(&gamma)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{fuchsian_torus, twist_flow, TwistWeights};

    #[test]
    fn d_func_values() {
        assert_eq!(d_func(0.0, 0.3, -1.0), 0.0);
        assert!((d_func(2.0, 0.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((d_func(3.0, -400.0, -400.0) - 3.0).abs() < 1e-12);
        assert!(d_func(1e3, 2e3, 2e3).is_finite());
    }

    #[test]
    fn h_func_values() {
        assert_eq!(h_func(0.0, 0.0), 1.0);
        assert_eq!(h_func(0.4, 1.3), h_func(0.4, -1.3));
        assert!(h_func(-1e4, 3.0) <= 2.0 && h_func(1e4, 3.0) >= 0.0);
    }

    #[test]
    fn summands_reduce_to_d_func() {
        let t = PantsTerm { phi: 0.0, tau_beta: 0.1, l1_beta: 1.0, tau_gamma: -0.2, l1_gamma: 2.0 };
        assert_eq!(summand_d(1.5, 1.5, &t, &t), 2.0 * d_func(1.5, 1.1, 1.8));
        assert_eq!(summand_r(1.5, 0.0, &t, &t), d_func(1.5, 1.1, -1.8));
    }

    #[test]
    fn phi1_vanishes_on_fuchsian_tori() {
        for l in [0.5, 2.0] {
            let rep = fuchsian_torus(l);
            for curve in enumerate_slopes(4) {
                let v = phi1_torus(&rep, &curve).unwrap();
                assert!(v.abs() < 1e-9, "{l} {:?} {v}", curve.slope);
            }
        }
    }

    #[test]
    fn phi1_matches_the_direct_evaluation() {
        let rep = twist_flow(&fuchsian_torus(1.5), 'a', 1.0, TwistWeights::bulge()).unwrap();
        let alpha = rep.frame(BOUNDARY).unwrap();
        let mut largest = 0.0f64;
        for c in enumerate_slopes(1) {
            let (beta, gamma) = pants_words(&c);
            let g = rep.matrix(&gamma);
            let direct = phi1(&alpha.minus(), &g, &rep.frame(&beta).unwrap().plus(), &rep.frame(&gamma).unwrap().plus());
            let v = phi1_torus(&rep, &c).unwrap();
            assert!((v - direct.unwrap()).abs() < 1e-9);
            largest = largest.max(v.abs());
        }
        assert!(largest > 1e-3);
    }

    #[test]
    fn short_boundary_sum_is_below_the_length() {
        let rep = fuchsian_torus(1.0);
        let r = mcshane_sum_boundary(&rep, 3).unwrap();
        assert!(r.sum < r.target && (r.target - 1.0).abs() < 1e-9);
        assert!(r.records.iter().all(|x| x.term > 0.0 && x.term < 1.0));
    }
}
