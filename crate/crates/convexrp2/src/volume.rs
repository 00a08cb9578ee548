//! Polylogarithms on the negative axis, complete Fermi–Dirac integrals, the
//! polynomial sandwich for `-Li_d(-e^t)`, the Goldman volume coordinates and
//! a Monte-Carlo check of the volume bound chain for the one-holed torus.

use std::f64::consts::LN_2;

use quadrature::double_exponential::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::configurations::{parametrize, reconstruct, PolygonTriangulation};
use crate::curves::{enumerate_slopes, inverse, mul, BOUNDARY};
use crate::error::{Error, Result};
use crate::holonomy::{
    pants_invariants, simple_root_lengths, unipotent_flag, PantsInvariants, Representation, Surface,
    TorusCoordinates, TORUS_DIAGONALS,
};
use crate::mcshane::{h_func, logistic};
use crate::projective_core::Flag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolylogMethod {
    Series,
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolylogValue {
    pub order: u32,
    pub x: f64,
    pub value: f64,
    pub method: PolylogMethod,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn polylog_series(k: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = x;
    for n in 1..200 {
        let term = pow / f64::from(n).powi(k as i32);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= x;
    }
    sum
}

/// `Li_k(x)` for `x <= 0`, with the method used.
pub fn polylog_value(k: u32, x: f64) -> Result<PolylogValue> {
    if x > 0.0 || x.is_nan() || k == 0 {
        return Err(Error::UnsupportedArgument(x));
    }
    if x.abs() <= 0.5 {
        return Ok(PolylogValue { order: k, x, value: polylog_series(k, x), method: PolylogMethod::Series });
    }
    let d = k - 1;
    let value = -fermi_dirac(d, (-x).ln()) / factorial(d);
    Ok(PolylogValue { order: k, x, value, method: PolylogMethod::Quadrature })
}

pub fn polylog(k: u32, x: f64) -> Result<f64> {
    polylog_value(k, x).map(|p| p.value)
}

/// `a_k = -Li_k(-1)`.
pub fn a_coefficient(k: u32) -> f64 {
    -polylog(k, -1.0).expect("-1 is in the domain")
}

/// `int_0^inf x^d / (1 + e^{x - t}) dx`, by double-exponential quadrature on
/// `[0, t + 60 d + 60]`, split at `t`.
pub fn fermi_dirac(d: u32, t: f64) -> f64 {
    let b = t.max(0.0) + 60.0 * f64::from(d) + 60.0;
    let f = |x: f64| {
        let v = x.powi(d as i32) * logistic(x - t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let scale = if t > 0.0 { t.powi(d as i32 + 1) / f64::from(d + 1) + factorial(d) } else { factorial(d) * t.exp() };
    let tol = 1e-15 * scale;
    let mut cuts = vec![0.0];
    if t > 0.0 {
        cuts.push(t);
    }
    cuts.push(t.max(0.0) + 40.0);
    cuts.push(b);
    cuts.windows(2).map(|w| integrate(f, w[0], w[1], tol).integral).sum()
}

/// `P_d(t)` and the same polynomial without its `log 2` term.
fn sandwich_polys(d: u32, t: f64) -> (f64, f64) {
    let lower = t.powi(d as i32) / factorial(d)
        + (2..=d).map(|k| a_coefficient(k) * t.powi((d - k) as i32) / factorial(d - k)).sum::<f64>();
    (lower, lower + LN_2 * t.powi(d as i32 - 1) / factorial(d - 1))
}

pub fn p_poly(d: u32, t: f64) -> f64 {
    sandwich_polys(d, t).1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sandwich {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

/// Bounds `lower <= -Li_d(-e^t) <= P_d(t)` for `d >= 2`, `t >= 0`.
pub fn sandwich_bounds(d: u32, t: f64) -> Result<Sandwich> {
    if d < 2 || t < 0.0 {
        return Err(Error::UnsupportedArgument(t));
    }
    let (lower, upper) = sandwich_polys(d, t);
    Ok(Sandwich { lower, value: -polylog(d, -t.exp())?, upper })
}

/// Lebesgue coordinates of the volume form for one pair of pants and one
/// gluing curve: `(X_P, Y_P, l1, l2, theta2 - theta1, (theta1 + theta2)/2)`.
pub fn goldman_coordinates(p: &PantsInvariants, l1: f64, l2: f64, theta1: f64, theta2: f64) -> [f64; 6] {
    let x = (p.sigma_a.1 - p.sigma_a.0 + p.sigma_b.1 - p.sigma_b.0 + p.sigma_c.1 - p.sigma_c.0) / 12.0;
    [x, p.t_prime - p.t, l1, l2, theta2 - theta1, 0.5 * (theta1 + theta2)]
}

/// Goldman coordinates of a pants representation with zero gluing data.
pub fn pants_goldman_coordinates(rep: &Representation) -> Result<[f64; 6]> {
    Ok(goldman_coordinates(&pants_invariants(rep)?, 0.0, 0.0, 0.0, 0.0))
}

/// Upper bound `2 t^2` for the `(X_P, Y_P)` box of a pair of pants.
pub fn v03_bound(t: f64) -> f64 {
    2.0 * t * t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainValue {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub t: f64,
    #[serde(rename = "L")]
    pub l: (f64, f64),
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub analytic_bound: f64,
    pub chain_values: Vec<ChainValue>,
}

const CHUNK: usize = 4096;

/// Pairwise summation of per-sample values, for a reduction order fixed by
/// the sample index alone.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Monte-Carlo integral of the relaxed majorant of `V_{1,1}^t(L)`
/// (of `d/dL (L V)` when `L_1 > 0`) over `X_P, Y_P, theta2 - theta1` in their
/// boxes and `(l1, l2)` in `{0 <= l2 <= t l1}`, with `l1` drawn from an
/// exponential proposal of rate `1 / (t + 1)`.
///
/// The chain values are, in order: the same integrand over the cone
/// `{l1 / t <= l2 <= t l1}` from the same samples, the Fermi–Dirac
/// quadrature of the relaxed integral, its polylog closed form, and the
/// polynomial bound.
pub fn mc_volume_upper_s11(t: f64, l: (f64, f64), samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples < 1000 {
        return Err(Error::InsufficientSamples { min: 1000, got: samples });
    }
    if t <= 0.0 {
        return Err(Error::UnsupportedArgument(t));
    }
    let l1b = l.0;
    let kernel = |x: f64| 0.5 * (logistic(x - t - 0.5 * l1b) + logistic(x - t + 0.5 * l1b));
    let rate = 1.0 / (t + 1.0);
    // Box volume of (X_P, Y_P, theta2 - theta1) times the factor 1/2 of the
    // integrand.
    let box_factor = (t / 2.0) * (4.0 * t) * (2.0 * t) * 0.5;
    let mut relaxed = Vec::with_capacity(samples);
    let mut cone = Vec::with_capacity(samples);
    for chunk in 0..samples.div_ceil(CHUNK) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let n = CHUNK.min(samples - chunk * CHUNK);
        for _ in 0..n {
            let u: f64 = rng.gen();
            let x1 = -(1.0 - u).ln() / rate;
            let x2 = t * x1 * rng.gen::<f64>();
            let weight = t * x1 * (rate * x1).exp() / rate;
            // The two orientations contribute equally over the symmetrized
            // relaxed region.
            relaxed.push(box_factor * weight * 2.0 * (x1 + x2) * kernel(x1));
            let inside = x1 <= t * x2;
            cone.push(if inside { box_factor * weight * (x1 + x2) * (kernel(x1) + kernel(x2)) } else { 0.0 });
        }
    }
    let n = samples as f64;
    let mean = pairwise_sum(&relaxed) / n;
    let var = pairwise_sum(&relaxed.iter().map(|v| (v - mean) * (v - mean)).collect::<Vec<_>>()) / (n - 1.0);
    let cone_mean = pairwise_sum(&cone) / n;
    let prefactor = 2.0 * t.powi(5) + 4.0 * t.powi(4);
    let quad = prefactor * (0.5 * fermi_dirac(2, t + 0.5 * l1b) + 0.5 * fermi_dirac(2, t - 0.5 * l1b));
    let closed = if l1b == 0.0 {
        -(4.0 * t.powi(5) + 8.0 * t.powi(4)) * polylog(3, -t.exp())?
    } else {
        prefactor * (-polylog(3, -(t + 0.5 * l1b).exp())? - polylog(3, -(t - 0.5 * l1b).exp())?)
    };
    let poly = if l1b == 0.0 {
        (4.0 * t.powi(5) + 8.0 * t.powi(4)) * p_poly(3, t)
    } else {
        prefactor * (p_poly(3, t + 0.5 * l1b) + p_poly(3, t - 0.5 * l1b))
    };
    let chain_values = vec![
        ChainValue { label: "cone integral (MC)".into(), value: cone_mean },
        ChainValue { label: "relaxed integral (Fermi-Dirac quadrature)".into(), value: quad },
        ChainValue { label: "polylog closed form".into(), value: closed },
        ChainValue { label: "polynomial bound".into(), value: poly },
    ];
    Ok(VolumeEstimate {
        t,
        l,
        samples,
        seed,
        estimate: mean,
        stderr: (var / n).sqrt(),
        analytic_bound: closed,
        chain_values,
    })
}

/// Closed form of `int int l1^i l2^j H(l1 - l2(gamma) - 5t, L) dl2 dl1` over
/// `{0 <= l2 <= t l1}`.
pub fn kernel_r(i: u32, j: u32, t: f64, l: f64, l2_gamma: f64) -> Result<f64> {
    let n = i + j + 2;
    let c = 5.0 * t + l2_gamma;
    let pre = 2f64.powi(n as i32) * t.powi(j as i32 + 1) / f64::from(j + 1) * factorial(n - 1);
    Ok(pre * (-polylog(n, -(0.5 * (c + l)).exp())? - polylog(n, -(0.5 * (c - l)).exp())?))
}

/// Closed form of the four-fold integral of
/// `l1(b)^i l2(b)^j l1(g)^k l2(g)^l H(l1(b) + l1(g) - 5t, L)` over
/// `{0 <= l2 <= t l1}` for both curves.
pub fn kernel_d(i: u32, j: u32, k: u32, l: u32, t: f64, big_l: f64) -> Result<f64> {
    let n = i + j + k + l + 4;
    let pre = 2f64.powi(n as i32) * factorial(i + j + 1) * factorial(k + l + 1) * t.powi((j + l + 2) as i32)
        / f64::from((j + 1) * (l + 1));
    Ok(pre * (-polylog(n, -(0.5 * (5.0 * t - big_l)).exp())? - polylog(n, -(0.5 * (5.0 * t + big_l)).exp())?))
}

/// The defining one-dimensional integral of [`kernel_r`] by quadrature.
pub fn kernel_r_quadrature(i: u32, j: u32, t: f64, l: f64, l2_gamma: f64) -> f64 {
    let c = 5.0 * t + l2_gamma;
    let f = |x: f64| x.powi((i + j + 1) as i32) * h_func(x - c, l);
    let b = c + l.abs() + 80.0 + 40.0 * f64::from(i + j);
    let mid = c.max(0.0);
    t.powi(j as i32 + 1) / f64::from(j + 1)
        * (integrate(f, 0.0, mid, 1e-13).integral + integrate(f, mid, b, 1e-13).integral)
}

/// The defining integral of [`kernel_d`], reduced to two dimensions and
/// evaluated by nested quadrature.
pub fn kernel_d_quadrature(i: u32, j: u32, k: u32, l: u32, t: f64, big_l: f64) -> f64 {
    let c = 5.0 * t;
    let b = c + big_l.abs() + 80.0 + 40.0 * f64::from(i + j + k + l);
    let inner = |x: f64| {
        let g = |y: f64| y.powi((k + l + 1) as i32) * h_func(x + y - c, big_l);
        let cut = (c - x).clamp(0.0, b);
        let v = integrate(g, 0.0, cut, 1e-13).integral + integrate(g, cut, b, 1e-13).integral;
        x.powi((i + j + 1) as i32) * v
    };
    let outer = integrate(inner, 0.0, c, 1e-12).integral + integrate(inner, c, b, 1e-12).integral;
    t.powi((j + l + 2) as i32) / f64::from((j + 1) * (l + 1)) * outer
}

/// Truncated estimators of the boundedness constants of a representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundScan {
    pub level: i64,
    pub m_t: f64,
    pub m_d: f64,
    pub m_l: f64,
    pub m_b: Option<f64>,
    /// `max(m_t, m_d, m_l)`: a lower bound for the smallest admissible `t`.
    pub t_lower: f64,
    pub triangles: usize,
    pub edges: usize,
    pub curves: usize,
    pub note: String,
}

/// Coordinates of a basis together with the slopes of its two curves.
type Node = (TorusCoordinates, (i64, i64), (i64, i64));

const SCAN_NOTE: &str = "finite scan: each estimator is a lower bound on the supremum over all ideal triangulations and curves";

fn boundary_flag(rep: &Representation) -> Result<Flag> {
    if let Some(p) = &rep.params {
        let f = reconstruct(p, &PolygonTriangulation::new(6, &TORUS_DIAGONALS)?)?;
        return Ok(f[2]);
    }
    match unipotent_flag(&rep.matrix(BOUNDARY)) {
        Ok(f) => Ok(f),
        Err(_) => Ok(rep.frame(BOUNDARY)?.plus()),
    }
}

/// Coordinates of the ideal triangulation dual to the basis `(x, y)`, where
/// `[x, y] = u [a, b] u^{-1}`, read off the hexagon over its fundamental
/// domain. Words should be short: the flags are images of one fixed flag.
pub fn torus_coordinates(rep: &Representation, x: &str, y: &str, u: &str) -> Result<TorusCoordinates> {
    let p = boundary_flag(rep)?;
    let (xi, yi) = (inverse(x), inverse(y));
    let on = |w: &[&str]| p.transform(&rep.matrix(&mul(&[&mul(w), u])));
    let yx = mul(&[&yi, &xi]);
    let flags = [on(&[&xi]), on(&[y]), on(&[]), on(&[x]), on(&[x, &yx]), on(&[&yx])];
    let conf = parametrize(&flags, &PolygonTriangulation::new(6, &TORUS_DIAGONALS)?)?;
    let edge = |e: (usize, usize)| conf.edges[&e];
    Ok(TorusCoordinates {
        t: [conf.triangles[&[0, 2, 5]], conf.triangles[&[2, 4, 5]]],
        edges: [edge(TORUS_DIAGONALS[0]), edge(TORUS_DIAGONALS[1]), edge(TORUS_DIAGONALS[2])],
    })
}

/// Coordinates for the bases `(a, ab)` and `(ab, b)`. Both are flips of one
/// edge followed by a relabeling, written subtraction-free so that deep
/// nodes keep full relative precision.
pub fn stern_brocot_children(c: &TorusCoordinates) -> [TorusCoordinates; 2] {
    let [t1, t2] = c.t;
    let [(b1, c1), (b2, c2), (b3, c3)] = c.edges;
    let first = {
        let (b, c) = (b2, c2);
        let p = 1.0 + b + b * t2 + b * t2 * c;
        let q = 1.0 + c + c * t1 + c * t1 * b;
        TorusCoordinates {
            t: [t2 * q / p, t1 * p / q],
            edges: [
                ((1.0 + c) / (t1 * c * (1.0 + b)), (1.0 + b) / (t2 * b * (1.0 + c))),
                (b1 * (1.0 + b) * q / (1.0 + c), c1 * (1.0 + c) * p / (1.0 + b)),
                (t2 * b * b * b3 * (1.0 + c) / ((1.0 + b) * p), t1 * c * c * c3 * (1.0 + b) / ((1.0 + c) * q)),
            ],
        }
    };
    let second = {
        let (b, c) = (b3, c3);
        let p = 1.0 + b + b * t1 + b * t1 * c;
        let q = 1.0 + c + c * t2 + c * t2 * b;
        TorusCoordinates {
            t: [t1 * q / p, t2 * p / q],
            edges: [
                ((1.0 + c) / (t2 * c * (1.0 + b)), (1.0 + b) / (t1 * b * (1.0 + c))),
                (b2 * (1.0 + b) * q / (1.0 + c), c2 * (1.0 + c) * p / (1.0 + b)),
                (t1 * c1 * b * b * (1.0 + c) / ((1.0 + b) * p), t2 * b1 * c * c * (1.0 + b) / ((1.0 + c) * q)),
            ],
        }
    };
    [first, second]
}

/// Scans the ideal triangulations of the torus along the Stern–Brocot flip
/// tree down to slope height `level`, rebuilding the surface from the
/// coordinates at each node, or the hexagon invariants of a pair of pants.
pub fn bound_scan(rep: &Representation, level: i64) -> Result<BoundScan> {
    let (mut m_t, mut m_d, mut m_l) = (0.0f64, 0.0f64, 1.0f64);
    let (mut triangles, mut edges, mut curves) = (0, 0, 0);
    match rep.surface {
        Surface::PairOfPants => {
            let p = pants_invariants(rep)?;
            m_t = p.t.abs().max(p.t_prime.abs());
            for s in [p.sigma_a, p.sigma_b, p.sigma_c] {
                m_d = m_d.max((s.1 - s.0).abs());
            }
            for g in &rep.generators {
                let r = simple_root_lengths(g)?;
                m_l = m_l.max(r.l2 / r.l1).max(r.l1 / r.l2);
            }
            triangles = 2;
            edges = 3;
            curves = 3;
        }
        Surface::OnceHoledTorus => {
            let root = torus_coordinates(rep, "a", "b", "")?;
            let mut stack: Vec<Node> = vec![(root, (1, 0), (0, 1))];
            if level >= 1 {
                stack.push((torus_coordinates(rep, "B", "a", "B")?, (0, -1), (1, 0)));
            }
            while let Some((c, sx, sy)) = stack.pop() {
                for t in c.t {
                    m_t = m_t.max(t.ln().abs());
                }
                triangles += 2;
                for (d1, d2) in c.edges {
                    m_d = m_d.max((d1.ln() - d2.ln()).abs());
                }
                edges += 3;
                let m = (sx.0 + sy.0, sx.1 + sy.1);
                if m.0.abs().max(m.1.abs()) > level {
                    continue;
                }
                let [first, second] = stern_brocot_children(&c);
                stack.push((first, sx, m));
                stack.push((second, m, sy));
            }
            for c in enumerate_slopes(level) {
                let (l1, l2) = rep.lengths(&c.x)?;
                m_l = m_l.max(l2 / l1);
                curves += 1;
            }
        }
    }
    Ok(BoundScan {
        level,
        m_t,
        m_d,
        m_l,
        m_b: None,
        t_lower: m_t.max(m_d).max(m_l),
        triangles,
        edges,
        curves,
        note: SCAN_NOTE.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{fuchsian_pants, torus_from_coordinates, TorusCoordinates};

    #[test]
    fn polylog_branches_agree() {
        for k in 1..=5 {
            for x in [-0.3, -0.4, -0.5] {
                let s = polylog_series(k, x);
                let q = -fermi_dirac(k - 1, (-x).ln()) / factorial(k - 1);
                assert!((s - q).abs() < 1e-10 * s.abs(), "{k} {x} {s} {q}");
            }
        }
        assert!((polylog(1, -1.0).unwrap() + LN_2).abs() < 1e-12);
        assert_eq!(polylog(2, 0.5), Err(Error::UnsupportedArgument(0.5)));
    }

    #[test]
    fn fermi_dirac_small_cases() {
        assert!((fermi_dirac(0, 0.0) - LN_2).abs() < 1e-12);
        assert!((fermi_dirac(0, 3.0) - 3f64.exp().ln_1p()).abs() < 1e-12);
        assert!((fermi_dirac(2, 0.0) - 1.5 * 1.2020569031595942).abs() < 1e-10);
    }

    #[test]
    fn sandwich_collapses_at_zero() {
        let s = sandwich_bounds(3, 0.0).unwrap();
        assert!((s.lower - s.value).abs() < 1e-14 && (s.upper - s.value).abs() < 1e-14);
        let s = sandwich_bounds(2, 10.0).unwrap();
        assert!(s.lower < s.value && s.value < s.upper);
        assert!((s.lower - 50.0 - a_coefficient(2)).abs() < 1e-12);
    }

    #[test]
    fn v03() {
        assert_eq!(v03_bound(1.0), 2.0);
        assert_eq!(v03_bound(0.5), 0.5);
    }

    #[test]
    fn fuchsian_pants_coordinates_vanish() {
        let c = pants_goldman_coordinates(&fuchsian_pants(1.0, 1.5, 2.0)).unwrap();
        assert!(c[0].abs() < 1e-9 && c[1].abs() < 1e-9, "{c:?}");
    }

    #[test]
    fn mc_is_seeded() {
        let a = mc_volume_upper_s11(1.0, (0.0, 0.0), 5000, 7).unwrap();
        let b = mc_volume_upper_s11(1.0, (0.0, 0.0), 5000, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr > 0.0);
        assert!(mc_volume_upper_s11(1.0, (0.0, 0.0), 10, 7).is_err());
    }

    #[test]
    fn kernel_r_base_case() {
        let closed = kernel_r(0, 0, 1.0, 0.0, 0.0).unwrap();
        let expected = 4.0 * -2.0 * polylog(2, -(2.5f64).exp()).unwrap();
        assert!((closed - expected).abs() < 1e-12 * expected);
        assert!((closed - kernel_r_quadrature(0, 0, 1.0, 0.0, 0.0)).abs() < 1e-6 * closed);
    }

    #[test]
    fn root_coordinates_round_trip() {
        let c = TorusCoordinates { t: [1.3, 0.8], edges: [(1.1, 0.9), (0.7, 1.4), (1.2, 1.05)] };
        let rep = torus_from_coordinates(&c).unwrap();
        let mut plain = rep.clone();
        plain.params = None;
        for r in [&rep, &plain] {
            let d = torus_coordinates(r, "a", "b", "").unwrap();
            assert!((d.t[0] - c.t[0]).abs() < 1e-9 && (d.t[1] - c.t[1]).abs() < 1e-9, "{d:?}");
            for (x, y) in d.edges.iter().zip(&c.edges) {
                assert!((x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9, "{d:?}");
            }
        }
    }

    #[test]
    fn children_match_flag_computation() {
        let c = TorusCoordinates { t: [1.3, 0.8], edges: [(1.1, 0.9), (0.7, 1.4), (1.2, 1.05)] };
        let rep = torus_from_coordinates(&c).unwrap();
        let expected = [torus_coordinates(&rep, "a", "ab", "a").unwrap(), torus_coordinates(&rep, "ab", "b", "").unwrap()];
        for (got, want) in stern_brocot_children(&c).iter().zip(&expected) {
            let g = [got.t[0], got.t[1], got.edges[0].0, got.edges[0].1, got.edges[1].0, got.edges[1].1, got.edges[2].0, got.edges[2].1];
            let w = [want.t[0], want.t[1], want.edges[0].0, want.edges[0].1, want.edges[1].0, want.edges[1].1, want.edges[2].0, want.edges[2].1];
            for (x, y) in g.iter().zip(&w) {
                assert!((x / y - 1.0).abs() < 1e-9, "{got:?} {want:?}");
            }
        }
    }

    #[test]
    fn fuchsian_scan_is_trivial() {
        let rep = torus_from_coordinates(&TorusCoordinates::fuchsian()).unwrap();
        let s = bound_scan(&rep, 3).unwrap();
        assert!(s.m_t < 1e-8 && s.m_d < 1e-8 && (s.m_l - 1.0).abs() < 1e-8, "{s:?}");
    }
}
