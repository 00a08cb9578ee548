//! Hilbert geometry of properly convex domains: the analytic unit disk and
//! tangent polygons circumscribed about sampled limit-set flags.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;
use quadrature::double_exponential::integrate;
use serde::Serialize;

use crate::curves::{inverse, mul, BOUNDARY};
use crate::error::{Error, Result};
use crate::holonomy::{unipotent_flag, Representation, Surface};
use crate::projective_core::{normalize_det, Flag, Mat3, Vec3};

pub type Vec2 = Vector2<f64>;

/// `E_B`, the Euclidean area of the unit disk.
pub const E_B: f64 = PI;

#[derive(Clone, Debug)]
enum Shape {
    Disk,
    /// Half-planes `n . x + c > 0` in counter-clockwise order and the
    /// vertices `v_k` where lines `k` and `k + 1` meet.
    Polygon { lines: Vec<(Vec2, f64)>, vertices: Vec<Vec2> },
}

/// A properly convex domain written in an affine chart.
#[derive(Clone, Debug)]
pub struct ConvexDomain {
    shape: Shape,
    /// Homogeneous coordinates to chart coordinates; the last row is the
    /// line at infinity.
    chart: Mat3,
    /// Boundary samples with their tangent directions, in chart coordinates.
    pub samples: Vec<(Vec2, Vec2)>,
    pub base: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityValue {
    pub position: (f64, f64),
    pub leb: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaReport {
    pub area: f64,
    /// `(target error, estimate)` for each quadrature refinement.
    pub convergence: Vec<(f64, f64)>,
}

fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn meet(l: &(Vec2, f64), m: &(Vec2, f64)) -> Option<Vec2> {
    let d = cross2(&l.0, &m.0);
    if d.abs() < 1e-300 {
        return None;
    }
    Some(Vec2::new(l.0.y * m.1 - m.0.y * l.1, m.0.x * l.1 - l.0.x * m.1) / d)
}

impl ConvexDomain {
    /// The Klein model: the unit disk in the chart `z = 1`.
    pub fn unit_disk() -> Self {
        let samples = (0..360)
            .map(|k| {
                let t = TAU * k as f64 / 360.0;
                (Vec2::new(t.cos(), t.sin()), Vec2::new(-t.sin(), t.cos()))
            })
            .collect();
        ConvexDomain { shape: Shape::Disk, chart: Mat3::identity(), samples, base: Vec2::zeros() }
    }

    /// The tangent polygon of a positive family of flags: the intersection
    /// of the half-planes bounded by the flag lines that contain the points.
    pub fn from_flags(flags: &[Flag]) -> Result<Self> {
        if flags.len() < 3 {
            return Err(Error::InsufficientSamples { min: 3, got: flags.len() });
        }
        // Sign-normalize so that every line is positive on every other point.
        let p0 = flags[0].point;
        let mut lines: Vec<Vec3> = flags.iter().map(|f| f.line).collect();
        for (i, l) in lines.iter_mut().enumerate() {
            let r = if i == 0 { flags[1].point } else { p0 };
            if l.dot(&r) < 0.0 {
                *l = -*l;
            }
        }
        let points: Vec<Vec3> =
            flags.iter().enumerate().map(|(i, f)| if i > 0 && lines[0].dot(&f.point) < 0.0 { -f.point } else { f.point }).collect();
        let phi = lines.iter().map(|l| l.normalize()).sum::<Vec3>().normalize();
        let e1 = phi.cross(&if phi.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() }).normalize();
        let e2 = phi.cross(&e1);
        let chart = Mat3::from_rows(&[e1.transpose(), e2.transpose(), phi.transpose()]);
        let cinv_t = chart.try_inverse().ok_or(Error::NonGenericFlags)?.transpose();
        let mut dom = ConvexDomain { shape: Shape::Disk, chart, samples: Vec::new(), base: Vec2::zeros() };
        let pts: Vec<Vec2> = points.iter().map(|p| dom.to_chart(p)).collect();
        let centroid = pts.iter().sum::<Vec2>() / pts.len() as f64;
        let mut items: Vec<(f64, Vec2, (Vec2, f64))> = pts
            .iter()
            .zip(&lines)
            .map(|(p, l)| {
                let m = cinv_t * l;
                let n = Vec2::new(m.x, m.y);
                let s = n.norm();
                let d = p - centroid;
                (d.y.atan2(d.x), *p, (n / s, m.z / s))
            })
            .collect();
        items.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        items.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-9);
        if items.len() > 2 && (items[0].0 + TAU - items[items.len() - 1].0) < 1e-9 {
            items.pop();
        }
        if items.len() < 3 {
            return Err(Error::InsufficientSamples { min: 3, got: items.len() });
        }
        // Drop tangent lines made redundant by round-off among clustered samples.
        loop {
            let n = items.len();
            if n < 3 {
                return Err(Error::InsufficientSamples { min: 3, got: n });
            }
            let lines: Vec<(Vec2, f64)> = items.iter().map(|x| x.2).collect();
            let mut keep = vec![true; n];
            let mut k = 0;
            while k < n {
                let (a, b, c) = (lines[(k + n - 1) % n], lines[k], lines[(k + 1) % n]);
                let (u, v) = (meet(&a, &b), meet(&b, &c));
                let ok = matches!((u, v), (Some(u), Some(v)) if cross2(&b.0, &(v - u)) <= 0.0);
                if !ok {
                    keep[k] = false;
                    k += 1;
                }
                k += 1;
            }
            if keep.iter().all(|&x| x) {
                break;
            }
            let mut it = keep.iter();
            items.retain(|_| *it.next().unwrap());
        }
        let n = items.len();
        let lines: Vec<(Vec2, f64)> = items.iter().map(|x| x.2).collect();
        let vertices: Vec<Vec2> = (0..n).map(|k| meet(&lines[k], &lines[(k + 1) % n]).unwrap()).collect();
        dom.samples = items.iter().map(|x| (x.1, Vec2::new(-x.2 .0.y, x.2 .0.x))).collect();
        dom.base = centroid;
        dom.shape = Shape::Polygon { lines, vertices };
        Ok(dom)
    }

    pub fn to_chart(&self, p: &Vec3) -> Vec2 {
        let q = self.chart * p;
        Vec2::new(q.x / q.z, q.y / q.z)
    }

    pub fn vertex_count(&self) -> usize {
        match &self.shape {
            Shape::Disk => 0,
            Shape::Polygon { vertices, .. } => vertices.len(),
        }
    }

    pub fn contains(&self, x: &Vec2) -> bool {
        match &self.shape {
            Shape::Disk => x.norm_squared() < 1.0,
            Shape::Polygon { lines, .. } => lines.iter().all(|(n, c)| n.dot(x) + c > 0.0),
        }
    }

    fn check(&self, x: &Vec2) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain)
        }
    }

    /// Distance from an interior `x` to the boundary along the unit vector `u`.
    pub fn exit_distance(&self, x: &Vec2, u: &Vec2) -> f64 {
        match &self.shape {
            Shape::Disk => {
                let b = x.dot(u);
                -b + (b * b - x.norm_squared() + 1.0).max(0.0).sqrt()
            }
            Shape::Polygon { lines, .. } => lines
                .iter()
                .filter_map(|(n, c)| {
                    let s = n.dot(u);
                    (s < 0.0).then(|| (n.dot(x) + c) / -s)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn hilbert_distance(&self, x: &Vec2, y: &Vec2) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        let v = y - x;
        let len = v.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let u = v / len;
        let a = self.exit_distance(x, &u);
        let b = self.exit_distance(x, &-u);
        // Order on the line: x - b u, x, y = x + len u, x + a u.
        Ok(0.5 * ((a * (b + len)) / ((a - len) * b)).ln())
    }

    /// `|v|_x = (1/|x - x^-| + 1/|x - x^+|) |v| / 2`.
    pub fn finsler_norm(&self, x: &Vec2, v: &Vec2) -> Result<f64> {
        self.check(x)?;
        let len = v.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let u = v / len;
        Ok(0.5 * (1.0 / self.exit_distance(x, &u) + 1.0 / self.exit_distance(x, &-u)) * len)
    }

    /// Lebesgue area of the Finsler unit ball at `x`. For polygons the
    /// radial function is `2 / (w . u)` with `w` constant between angular
    /// breakpoints, so the area is a finite sum of tangent differences; the
    /// disk uses the periodic trapezoid rule, doubled until the relative
    /// change is below `tol`.
    pub fn unit_ball_area(&self, x: &Vec2, tol: f64) -> Result<f64> {
        self.check(x)?;
        match &self.shape {
            Shape::Disk => Ok(self.unit_ball_area_trapezoid(x, tol)),
            Shape::Polygon { lines, vertices } => Ok(polygon_ball_area(x, lines, vertices)),
        }
    }

    fn unit_ball_area_trapezoid(&self, x: &Vec2, tol: f64) -> f64 {
        let r2 = |t: f64| {
            let u = Vec2::new(t.cos(), t.sin());
            let r = 2.0 / (1.0 / self.exit_distance(x, &u) + 1.0 / self.exit_distance(x, &-u));
            r * r
        };
        // Leb = int_0^pi r^2 by central symmetry of the ball.
        let mut m = 32;
        let mut sum: f64 = (0..m).map(|i| r2(PI * i as f64 / m as f64)).sum();
        let mut prev = PI * sum / m as f64;
        while m < 1 << 16 {
            sum += (0..m).map(|i| r2(PI * (2 * i + 1) as f64 / (2 * m) as f64)).sum::<f64>();
            m *= 2;
            let cur = PI * sum / m as f64;
            if (cur - prev).abs() <= tol * cur {
                return cur;
            }
            prev = cur;
        }
        prev
    }

    pub fn busemann_density(&self, x: &Vec2) -> Result<DensityValue> {
        let leb = self.unit_ball_area(x, 1e-7)?;
        Ok(DensityValue { position: (x.x, x.y), leb, h: E_B / leb })
    }

    fn h(&self, x: &Vec2, tol: f64) -> f64 {
        if !self.contains(x) {
            return 0.0;
        }
        self.unit_ball_area(x, tol).map(|l| E_B / l).unwrap_or(0.0)
    }

    fn check_region(&self, region: &[Vec2]) -> Result<()> {
        let scale = 1e-9;
        for p in region {
            let inside = match &self.shape {
                Shape::Disk => p.norm() <= 1.0 + scale,
                Shape::Polygon { lines, .. } => lines.iter().all(|(n, c)| n.dot(p) + c >= -scale),
            };
            if !inside {
                return Err(Error::RegionOutsideDomain);
            }
        }
        Ok(())
    }

    /// Hilbert area of a triangle whose vertices lie in the closure of the
    /// domain. The triangle is split at its centroid and each piece is
    /// integrated in polar-like coordinates by nested double-exponential
    /// quadrature, which absorbs the integrable singularities at ideal
    /// vertices.
    pub fn triangle_area(&self, tri: [Vec2; 3], target: f64) -> Result<f64> {
        self.check_region(&tri)?;
        let g = (tri[0] + tri[1] + tri[2]) / 3.0;
        let density_tol = (target * 1e-2).clamp(1e-9, 1e-5);
        let mut total = 0.0;
        for k in 0..3 {
            let (p, q) = (tri[k] - g, tri[(k + 1) % 3] - g);
            let jac = cross2(&p, &q).abs();
            let inner = |u: f64| {
                integrate(|w| u * self.h(&(g + (p * (1.0 - w) + q * w) * u), density_tol), 0.0, 1.0, target).integral
            };
            total += jac * integrate(inner, 0.0, 1.0, target).integral;
        }
        Ok(total)
    }

    /// Area of a triangle at a sequence of decreasing quadrature targets;
    /// fails if the last two estimates disagree beyond the coarser target.
    pub fn area(&self, tri: [Vec2; 3], targets: &[f64]) -> Result<AreaReport> {
        let mut convergence = Vec::new();
        for &t in targets {
            convergence.push((t, self.triangle_area(tri, t)?));
        }
        let n = convergence.len();
        if n >= 2 {
            let (t, a) = convergence[n - 2];
            let b = convergence[n - 1].1;
            if (a - b).abs() > (100.0 * t).max(1e-3 * b.abs()) {
                return Err(Error::NoConvergence(format!("area estimates {a} and {b}")));
            }
        }
        let area = convergence.last().map(|c| c.1).ok_or(Error::NoConvergence("no targets".into()))?;
        Ok(AreaReport { area, convergence })
    }

    /// Boundary samples and tangent directions as CSV.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,tx,ty\n");
        for (p, t) in &self.samples {
            s += &format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", p.x, p.y, t.x, t.y);
        }
        s
    }

    /// Algebraic conic fit of the boundary samples: the smallest singular
    /// value of the normalized design matrix.
    pub fn conic_fit_residual(&self) -> f64 {
        let n = self.samples.len();
        let c = self.samples.iter().map(|s| s.0).sum::<Vec2>() / n as f64;
        let scale = self.samples.iter().map(|s| (s.0 - c).norm()).fold(0.0, f64::max);
        let rows: Vec<f64> = self
            .samples
            .iter()
            .flat_map(|s| {
                let p = (s.0 - c) / scale;
                let r = [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0];
                let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                r.map(|v| v / norm)
            })
            .collect();
        let m = nalgebra::DMatrix::from_row_slice(n, 6, &rows);
        m.singular_values().min() / (n as f64).sqrt()
    }
}

fn polygon_ball_area(x: &Vec2, lines: &[(Vec2, f64)], vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    // Directions between the angles of v_{k-1} and v_k exit through line k.
    let mut ang: Vec<(f64, usize)> = vertices
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let d = v - x;
            (d.y.atan2(d.x).rem_euclid(TAU), k)
        })
        .collect();
    ang.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let exit_line = |t: f64| {
        let i = ang.partition_point(|a| a.0 < t.rem_euclid(TAU));
        ang[i % n].1
    };
    let mut breaks: Vec<f64> = ang.iter().map(|a| a.0 % PI).collect();
    breaks.push(0.0);
    breaks.push(PI);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let inv = |k: usize| {
        let (nv, c) = lines[k % n];
        nv / (nv.dot(x) + c)
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (s, e) = (w[0], w[1]);
        if e - s < 1e-15 {
            continue;
        }
        let mid = 0.5 * (s + e);
        let wv = -inv(exit_line(mid)) + inv(exit_line(mid + PI));
        let phi = wv.y.atan2(wv.x);
        total += 4.0 * ((e - phi).tan() - (s - phi).tan()) / wv.norm_squared();
    }
    total
}

/// All freely reduced words in `a, b, A, B` of length `1..=n`.
pub fn reduced_words(n: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut level: Vec<String> = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &level {
            for c in ['a', 'b', 'A', 'B'] {
                let last = w.chars().last();
                if last.map(|l| l != c && l.eq_ignore_ascii_case(&c)).unwrap_or(false) {
                    continue;
                }
                next.push(format!("{w}{c}"));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn attracting_flag(rep: &Representation, w: &str) -> Option<Flag> {
    match unipotent_flag(&rep.matrix(w)) {
        Ok(f) => Some(f),
        Err(_) => rep.frame(w).ok().map(|f| f.plus()),
    }
}

/// The tangent polygon of the attracting flags of all reduced words of
/// length at most `n`.
pub fn limit_set(rep: &Representation, n: usize) -> Result<ConvexDomain> {
    let flags: Vec<Flag> = reduced_words(n).iter().filter_map(|w| attracting_flag(rep, w)).collect();
    ConvexDomain::from_flags(&flags)
}

/// Cusp words of the standard ideal triangulation of the once-punctured
/// torus: `p` is fixed by `abAB`, and the two triangles are
/// `(Ap, p, BAp)` and `(p, aBAp, BAp)`.
const CUSP_TRANSLATES: [&str; 4] = ["", "A", "BA", "aBA"];

/// Hilbert area of the two ideal triangles of the standard triangulation
/// inside the limit-set domain of a torus with unipotent boundary. The
/// domain samples the attracting flags of words up to `n_limit` together
/// with parabolic orbits accumulating at the four cusp vertices.
pub fn canonical_area_s11_unipotent(rep: &Representation, n_limit: usize, targets: &[f64]) -> Result<(AreaReport, ConvexDomain)> {
    if rep.surface != Surface::OnceHoledTorus {
        return Err(Error::Config("canonical area is provided for the once-punctured torus".into()));
    }
    let p = unipotent_flag(&rep.matrix(BOUNDARY))?;
    let mut flags: Vec<Flag> = reduced_words(n_limit).iter().filter_map(|w| attracting_flag(rep, w)).collect();
    let verts: Vec<Flag> = CUSP_TRANSLATES.iter().map(|u| p.transform(&rep.matrix(u))).collect();
    flags.extend(verts.iter().copied());
    for (i, u) in CUSP_TRANSLATES.iter().enumerate() {
        let stab = rep.matrix(&mul(&[u, BOUNDARY, &inverse(u)]));
        let nil = normalize_det(&stab) - Mat3::identity();
        let nil2 = nil * nil;
        let other = verts[(i + 1) % 4];
        let mut k = 1.0f64;
        while k < 1e6 {
            for s in [k, -k] {
                let pow = |s: f64| Mat3::identity() + nil * s + nil2 * (0.5 * s * (s - 1.0));
                flags.push(Flag::unchecked(pow(s) * other.point, pow(-s).transpose() * other.line));
            }
            k = (k * 1.1).ceil();
        }
    }
    let dom = ConvexDomain::from_flags(&flags)?;
    let v: Vec<Vec2> = verts.iter().map(|f| dom.to_chart(&f.point)).collect();
    let first = dom.area([v[1], v[0], v[2]], targets)?;
    let second = dom.area([v[0], v[3], v[2]], targets)?;
    let convergence = first.convergence.iter().zip(&second.convergence).map(|(a, b)| (a.0, a.1 + b.1)).collect();
    Ok((AreaReport { area: first.area + second.area, convergence }, dom))
}
