//! Flags in the projective plane and their basic invariants.
//!
//! Points are vectors and lines are covectors of `R^3`, both stored at unit
//! length. Determinants are tested against [`TOL`] after that normalization,
//! which makes every genericity check scale free.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Threshold below which a normalized determinant counts as zero.
pub const TOL: f64 = 1e-10;

pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.cross(b).dot(c)
}

fn unit(v: &Vec3) -> Vec3 {
    v / v.norm()
}

/// Covector whose kernel is `span(u, v)`.
pub fn wedge2(u: &Vec3, v: &Vec3) -> Result<Vec3> {
    let w = u.cross(v);
    if w.norm() <= TOL * u.norm() * v.norm() {
        return Err(Error::DegenerateSpan);
    }
    Ok(w)
}

/// Inverse transpose up to scale, used to push covectors forward.
pub fn cofactor(m: &Mat3) -> Mat3 {
    let (c1, c2, c3) = (m.column(0), m.column(1), m.column(2));
    Mat3::from_columns(&[c2.cross(&c3), c3.cross(&c1), c1.cross(&c2)])
}

/// Rescale to determinant one (sign absorbed, since PGL(3) has odd dimension).
pub fn normalize_det(m: &Mat3) -> Mat3 {
    let d = m.determinant();
    m / (d.signum() * d.abs().cbrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flag {
    pub point: Vec3,
    pub line: Vec3,
}

/// An ordered basis adapted to a flag: `f1` spans the point and `f1, f2`
/// span the line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlagBasis(pub [Vec3; 3]);

impl Flag {
    pub fn new(point: Vec3, line: Vec3) -> Result<Flag> {
        if point.norm() == 0.0 || line.norm() == 0.0 {
            return Err(Error::NonGenericFlags);
        }
        let f = Flag::unchecked(point, line);
        if f.line.dot(&f.point).abs() > 1e-8 {
            return Err(Error::NonGenericFlags);
        }
        Ok(f)
    }

    /// Normalizes without testing incidence.
    pub fn unchecked(point: Vec3, line: Vec3) -> Flag {
        Flag { point: unit(&point), line: unit(&line) }
    }

    /// Tangent flag of the conic `y^2 = xz` at `v(t) = (1, t, t^2)`; an
    /// infinite `t` gives the flag at `(0, 0, 1)`.
    pub fn conic(t: f64) -> Flag {
        if t.is_infinite() {
            return Flag::unchecked(Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0));
        }
        Flag::unchecked(Vec3::new(1.0, t, t * t), Vec3::new(t * t, -2.0 * t, 1.0))
    }

    pub fn transform(&self, m: &Mat3) -> Flag {
        Flag::unchecked(m * self.point, cofactor(m) * self.line)
    }

    pub fn basis(&self) -> FlagBasis {
        let f2 = unit(&self.line.cross(&self.point));
        FlagBasis([self.point, f2, self.line])
    }

    /// Euclidean discrepancy between two flags as projective objects.
    pub fn distance(&self, other: &Flag) -> f64 {
        let a = self.point.cross(&other.point).norm();
        let b = self.line.cross(&other.line).norm();
        a.max(b)
    }
}

fn factor(x: f64) -> Result<f64> {
    if x.abs() < TOL {
        Err(Error::NonGenericFlags)
    } else {
        Ok(x)
    }
}

/// `T(F,G,H)`, the ratio of the six determinants `<f2, g1>` and friends.
pub fn triple_ratio(f: &Flag, g: &Flag, h: &Flag) -> Result<f64> {
    let num = factor(f.line.dot(&g.point))? * factor(g.line.dot(&h.point))? * factor(h.line.dot(&f.point))?;
    let den = factor(f.line.dot(&h.point))? * factor(g.line.dot(&f.point))? * factor(h.line.dot(&g.point))?;
    Ok(num / den)
}

/// Edge function `D_i(X,Y,Z,W)` for `i` in `{1, 2}`.
pub fn edge_function(i: u8, x: &Flag, y: &Flag, z: &Flag, w: &Flag) -> Result<f64> {
    edge_function_with(factor, i, x, y, z, w)
}

/// Edge function that only rejects exactly vanishing factors, for flags in
/// adapted coordinates where tiny entries are exact.
pub fn edge_function_exact(i: u8, x: &Flag, y: &Flag, z: &Flag, w: &Flag) -> Result<f64> {
    let nonzero = |v: f64| if v == 0.0 || !v.is_finite() { Err(Error::NonGenericFlags) } else { Ok(v) };
    edge_function_with(nonzero, i, x, y, z, w)
}

fn edge_function_with(f: impl Fn(f64) -> Result<f64>, i: u8, x: &Flag, y: &Flag, z: &Flag, w: &Flag) -> Result<f64> {
    let xyz = f(det3(&x.point, &y.point, &z.point))?;
    let xyw = f(det3(&x.point, &y.point, &w.point))?;
    match i {
        1 => Ok(f(x.line.dot(&z.point))? / f(x.line.dot(&w.point))? * xyw / xyz),
        2 => Ok(f(y.line.dot(&w.point))? / f(y.line.dot(&z.point))? * xyz / xyw),
        _ => panic!("edge function index must be 1 or 2"),
    }
}

/// `CR(a,b,c,d) = (a-c)/(a-d) * (b-d)/(b-c)` on the extended real line.
///
/// Infinite arguments are handled by the projective limit of the formula,
/// so `CR(0, 1, inf, x) = (x - 1) / x`.
pub fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let h = |x: f64| if x.is_infinite() { Vector2::new(1.0, 0.0) } else { Vector2::new(x, 1.0) };
    cross_ratio_homogeneous(&h(a), &h(b), &h(c), &h(d))
}

fn det2(u: &Vector2<f64>, v: &Vector2<f64>) -> f64 {
    u.x * v.y - u.y * v.x
}

fn cross_ratio_homogeneous(a: &Vector2<f64>, b: &Vector2<f64>, c: &Vector2<f64>, d: &Vector2<f64>) -> Result<f64> {
    let ad = det2(a, d);
    let bc = det2(b, c);
    if ad == 0.0 || bc == 0.0 {
        return Err(Error::DegenerateCrossRatio);
    }
    Ok(det2(a, c) * det2(b, d) / (ad * bc))
}

/// Cross ratio of four collinear points, or dually of four concurrent lines.
pub fn cross_ratio_pencil(v: [Vec3; 4]) -> Result<f64> {
    let mut axis = Vec3::zeros();
    for i in 0..4 {
        for j in i + 1..4 {
            let c = v[i].cross(&v[j]);
            if c.norm() > axis.norm() {
                axis = c;
            }
        }
    }
    if axis.norm() == 0.0 {
        return Err(Error::DegenerateCrossRatio);
    }
    let e1 = unit(&axis.cross(&v[0]).cross(&axis));
    let e2 = unit(&axis).cross(&e1);
    let h: Vec<Vector2<f64>> = v.iter().map(|p| Vector2::new(e1.dot(p), e2.dot(p))).collect();
    cross_ratio_homogeneous(&h[0], &h[1], &h[2], &h[3])
}

/// `psi(a,b,c,d) = |xc|/|ax| * |ay|/|cy|`, where `y = b* ∩ d*` and
/// `x = ac ∩ bd`. The point `a` is supplied. The value is the absolute cross
/// ratio of `x, y, c, a` on the line `ac`, so no affine chart is needed.
pub fn harmonic_cross_ratio_with(a: &Vec3, b: &Flag, c: &Flag, d: &Flag) -> Result<f64> {
    let y = wedge2(&b.line, &d.line).map_err(|_| Error::NonGenericFlags)?;
    let ac = wedge2(a, &c.point).map_err(|_| Error::NonGenericFlags)?;
    let bd = wedge2(&b.point, &d.point).map_err(|_| Error::NonGenericFlags)?;
    let x = ac.cross(&bd);
    if ac.dot(&y).abs() > 1e-8 * ac.norm() * y.norm() {
        return Err(Error::NonGenericFlags);
    }
    let r = cross_ratio_pencil([x, y, c.point, *a]).map_err(|_| Error::NonGenericFlags)?.abs();
    if !r.is_finite() || r == 0.0 {
        return Err(Error::NonGenericFlags);
    }
    Ok(r)
}

/// Harmonic cross ratio of the triple `(b, c, d)` with `a` taken on the conic
/// through `b, c, d` tangent to `b*` and `d*`.
pub fn harmonic_cross_ratio(b: &Flag, c: &Flag, d: &Flag) -> Result<f64> {
    if !is_generic(&[*b, *c, *d]) {
        return Err(Error::NonGenericFlags);
    }
    // Frame: b -> (1,0,0), d -> (0,0,1), y -> (0,1,0). The conic is then
    // y^2 = k xz, fixed by c.
    let y = b.line.cross(&d.line);
    let m = Mat3::from_columns(&[b.point, y, d.point]);
    let mi = m.try_inverse().ok_or(Error::NonGenericFlags)?;
    let cc = mi * c.point;
    // The line through (0,1,0) and c meets the conic again at (x, -y, z).
    let a = m * Vec3::new(cc.x, -cc.y, cc.z);
    harmonic_cross_ratio_with(&a, b, c, d)
}

/// Pairwise transversality plus independence of every point triple.
pub fn is_generic(flags: &[Flag]) -> bool {
    let n = flags.len();
    if n < 2 {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && flags[i].line.dot(&flags[j].point).abs() < TOL {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(&flags[i].point, &flags[j].point, &flags[k].point).abs() < TOL {
                    return false;
                }
            }
        }
    }
    true
}
