//! Holonomy of the one-holed torus and the pair of pants from
//! Fock–Goncharov coordinates, together with spectra, canonical flags, pants
//! invariants and twist flows.

use nalgebra::Matrix2;

use crate::curves::{cyclic_split, inverse};
use crate::configurations::{reconstruct, ConfParams, PolygonTriangulation};
use crate::error::{Error, Result};
use crate::projective_core::{cofactor, edge_function, normalize_det, triple_ratio, Flag, Mat3, Vec3};

/// Smallest log-gap between eigenvalues accepted as loxodromic.
pub const LOX_GAP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleRootLengths {
    /// Eigenvalues `l1 > l2 > l3 > 0`.
    pub eigenvalues: [f64; 3],
    pub l1: f64,
    pub l2: f64,
}

impl SimpleRootLengths {
    pub fn hilbert_length(&self) -> f64 {
        self.l1 + self.l2
    }
}

fn char_poly(m: &Mat3) -> (f64, f64, f64) {
    let c1 = m.trace();
    let c2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    (c1, c2, m.determinant())
}

fn newton(c: (f64, f64, f64), mut x: f64, steps: usize) -> f64 {
    for _ in 0..steps {
        let p = ((x - c.0) * x + c.1) * x - c.2;
        let dp = (3.0 * x - 2.0 * c.0) * x + c.1;
        if dp == 0.0 {
            break;
        }
        let next = x - p / dp;
        if next == x || !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// Sorted real eigenvalues by the trigonometric Cardano formula, each
/// polished by Newton steps.
pub fn eigen3(m: &Mat3) -> Result<[f64; 3]> {
    let s = m.amax();
    if s == 0.0 {
        return Err(Error::NotLoxodromic);
    }
    let c = char_poly(&(m / s));
    let h = c.0 / 3.0;
    let p = c.1 - c.0 * c.0 / 3.0;
    let q = -2.0 * c.0.powi(3) / 27.0 + c.0 * c.1 / 3.0 - c.2;
    if p >= 0.0 || 4.0 * p.powi(3) + 27.0 * q * q >= 0.0 {
        return Err(Error::NotLoxodromic);
    }
    let r = 2.0 * (-p / 3.0).sqrt();
    let phi = (3.0 * q / (p * r)).clamp(-1.0, 1.0).acos() / 3.0;
    let mut ev = [0.0; 3];
    for (k, e) in ev.iter_mut().enumerate() {
        let x = r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + h;
        *e = newton(c, x, 3) * s;
    }
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if ev[2] <= 0.0 || (ev[0] / ev[1]).ln() < LOX_GAP || (ev[1] / ev[2]).ln() < LOX_GAP {
        return Err(Error::NotLoxodromic);
    }
    Ok(ev)
}

pub fn simple_root_lengths(m: &Mat3) -> Result<SimpleRootLengths> {
    let ev = eigen3(m)?;
    Ok(SimpleRootLengths { eigenvalues: ev, l1: (ev[0] / ev[1]).ln(), l2: (ev[1] / ev[2]).ln() })
}

/// Right null vector of a rank-two matrix.
fn kernel(n: &Mat3) -> Vec3 {
    let rows = [n.row(0).transpose(), n.row(1).transpose(), n.row(2).transpose()];
    let mut best = Vec3::zeros();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let c = rows[i].cross(&rows[j]);
        if c.norm() > best.norm() {
            best = c;
        }
    }
    best.normalize()
}

pub fn eigenvector(m: &Mat3, lambda: f64) -> Vec3 {
    kernel(&(m - Mat3::identity() * lambda))
}

/// Symmetric square of an `SL(2)` matrix acting on `(x^2, xy, y^2)`.
pub fn fuchsian_lift(m: &Matrix2<f64>) -> Mat3 {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    Mat3::new(a * a, a * b, b * b, 2.0 * a * c, a * d + b * c, 2.0 * b * d, c * c, c * d, d * d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Plus,
    Minus,
}

/// Attracting (`Plus`) or repelling (`Minus`) flag of a loxodromic matrix, or
/// the fixed flag of a unipotent one.
pub fn canonical_flag(m: &Mat3, end: End) -> Result<Flag> {
    match eigen3(m) {
        Ok(ev) => {
            let v: Vec<Vec3> = ev.iter().map(|&l| eigenvector(m, l)).collect();
            Ok(match end {
                End::Plus => Flag::unchecked(v[0], v[0].cross(&v[1])),
                End::Minus => Flag::unchecked(v[2], v[2].cross(&v[1])),
            })
        }
        Err(_) => unipotent_flag(m),
    }
}

/// Fixed flag of a unipotent matrix with a single Jordan block.
pub fn unipotent_flag(m: &Mat3) -> Result<Flag> {
    let n = normalize_det(m) - Mat3::identity();
    let svd = n.svd(true, true);
    let sv = svd.singular_values;
    let mut order = [0, 1, 2];
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap());
    let (mid, low) = (order[1], order[2]);
    if sv[low] > 1e-6 * (1.0 + sv[order[0]]) || sv[mid] < 1e-6 {
        return Err(Error::NotLoxodromic);
    }
    // N^2 = point * line^T has relative round-off far below that of the
    // null vectors of N.
    let n2 = n * n;
    if (n2 * n).norm() > 1e-6 * (1.0 + n.norm().powi(3)) {
        return Err(Error::NotLoxodromic);
    }
    let svd2 = n2.svd(true, true);
    let top = svd2.singular_values.imax();
    Ok(Flag::unchecked(svd2.u.unwrap().column(top).into_owned(), svd2.v_t.unwrap().row(top).transpose()))
}

/// A matrix stored as `exp(log_scale) * m` with `max |m_ij| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledMat {
    pub m: Mat3,
    pub log_scale: f64,
}

impl ScaledMat {
    pub fn new(m: Mat3) -> Self {
        ScaledMat { m, log_scale: 0.0 }.renormalized()
    }

    pub fn identity() -> Self {
        ScaledMat { m: Mat3::identity(), log_scale: 0.0 }
    }

    fn renormalized(self) -> Self {
        let s = self.m.amax();
        ScaledMat { m: self.m / s, log_scale: self.log_scale + s.ln() }
    }

    fn mul_raw(&self, other: &ScaledMat) -> Self {
        ScaledMat { m: self.m * other.m, log_scale: self.log_scale + other.log_scale }
    }

    pub fn mul(&self, other: &ScaledMat) -> Self {
        self.mul_raw(other).renormalized()
    }
}

/// Dominant eigenpair of a matrix with real, simple top eigenvalue, by
/// Newton iteration on the characteristic cubic started above all roots.
fn dominant(m: &Mat3) -> (f64, Vec3) {
    let c = char_poly(m);
    let bound = 1.0 + c.0.abs().max(c.1.abs()).max(c.2.abs());
    let top = newton(c, bound, 200);
    let neg = newton(c, -bound, 200);
    let lambda = if neg.abs() > top.abs() { neg } else { top };
    (lambda, eigenvector(m, lambda))
}

/// Eigen-data of a loxodromic element from its stable evaluation and that of
/// its inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenFrame {
    /// Right eigenvectors for the top and bottom eigenvalues.
    pub v1: Vec3,
    pub v3: Vec3,
    /// Left eigenvectors for the top and bottom eigenvalues.
    pub w1: Vec3,
    pub w3: Vec3,
    pub l1: f64,
    pub l2: f64,
}

impl EigenFrame {
    /// `x` and `xi` represent `X` and `X^{-1}`, with `det X = 1`.
    pub fn new(x: &ScaledMat, xi: &ScaledMat) -> Result<Self> {
        let (a, v1) = dominant(&x.m);
        let (b, v3) = dominant(&xi.m);
        let (_, w1) = dominant(&x.m.transpose());
        let (_, w3) = dominant(&xi.m.transpose());
        let log1 = a.abs().ln() + x.log_scale;
        let log3 = -(b.abs().ln() + xi.log_scale);
        let log2 = -log1 - log3;
        let (l1, l2) = (log1 - log2, log2 - log3);
        if !(l1 > LOX_GAP && l2 > LOX_GAP) {
            return Err(Error::NotLoxodromic);
        }
        Ok(EigenFrame { v1, v3, w1, w3, l1, l2 })
    }

    /// Frame of `g X g^{-1}` given `g` and `g^{-1}` up to scale.
    pub fn conjugated(&self, g: &Mat3, gi: &Mat3) -> Self {
        let git = gi.transpose();
        EigenFrame {
            v1: (g * self.v1).normalize(),
            v3: (g * self.v3).normalize(),
            w1: (git * self.w1).normalize(),
            w3: (git * self.w3).normalize(),
            ..*self
        }
    }

    /// Eigenbasis `(v1, v2, v3)` as columns and its dual basis as rows.
    fn bases(&self) -> (Mat3, Mat3) {
        let (v2, w2) = (self.w1.cross(&self.w3), self.v1.cross(&self.v3));
        let vs = [self.v1, v2, self.v3];
        let ws = [self.w1, w2, self.w3];
        let dual = Mat3::from_fn(|i, j| ws[i][j] / ws[i].dot(&vs[i]));
        (Mat3::from_columns(&vs), dual)
    }

    /// A flag in the eigenbasis, lines in the dual basis.
    pub fn coordinates(&self, q: &Flag) -> Flag {
        let (p, d) = self.bases();
        Flag::unchecked(d * q.point, p.transpose() * q.line)
    }

    /// A matrix written in the eigenbasis.
    pub fn matrix_coordinates(&self, m: &Mat3) -> Mat3 {
        let (p, d) = self.bases();
        d * m * p
    }

    /// Diagonal of the element in its eigenbasis, scaled so the top entry is one.
    pub fn scaled_eigenvalues(&self) -> [f64; 3] {
        [1.0, (-self.l1).exp(), (-self.l1 - self.l2).exp()]
    }

    /// Action of the element on flags given in eigen-coordinates.
    pub fn act_on_coordinates(&self, q: &Flag) -> Flag {
        let (a, b) = ((-self.l1).exp(), (-self.l2).exp());
        let p = Vec3::new(q.point.x, q.point.y * a, q.point.z * a * b);
        let l = Vec3::new(q.line.x * a * b, q.line.y * b, q.line.z);
        Flag::unchecked(p, l)
    }

    pub fn plus(&self) -> Flag {
        Flag::unchecked(self.v1, self.w3)
    }

    pub fn minus(&self) -> Flag {
        Flag::unchecked(self.v3, self.w1)
    }

    /// `log T(q, Xq, X^+)`, evaluated through the eigen-decomposition of
    /// `q` so that no large power of `X` is ever applied.
    pub fn log_triple_with_translate(&self, q: &Flag) -> Result<f64> {
        let a = q.line.dot(&self.v1) * self.w1.dot(&q.point) / self.w1.dot(&self.v1);
        let c = q.line.dot(&self.v3) * self.w3.dot(&q.point) / self.w3.dot(&self.v3);
        let b = -a - c;
        let num = a + b * (-self.l1).exp() + c * (-self.l1 - self.l2).exp();
        let den = c + b * (-self.l2).exp() + a * (-self.l1 - self.l2).exp();
        let r = num / den;
        if r > 0.0 && r.is_finite() {
            Ok(r.ln())
        } else {
            Err(Error::NotPositive { key: "T(q, Xq, X+)".into(), value: r })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    OnceHoledTorus,
    PairOfPants,
}

impl Surface {
    pub fn name(&self) -> &'static str {
        match self {
            Surface::OnceHoledTorus => "torus",
            Surface::PairOfPants => "pants",
        }
    }
}

/// Generator matrices, normalized to determinant one. Letters `a, b, ...`
/// name the generators and `A, B, ...` their inverses. For the torus the
/// generators are `a, b` with boundary `abAB`; for the pants they are
/// `alpha, beta, gamma` (letters `a, b, c`) with `alpha gamma beta = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub surface: Surface,
    pub generators: Vec<Mat3>,
    inverses: Vec<Mat3>,
    pub relator_residual: f64,
    pub params: Option<ConfParams>,
}

impl Representation {
    pub fn new(surface: Surface, generators: Vec<Mat3>) -> Result<Self> {
        let need = match surface {
            Surface::OnceHoledTorus => 2,
            Surface::PairOfPants => 3,
        };
        if generators.len() != need {
            return Err(Error::Config(format!("{} needs {need} generators", surface.name())));
        }
        let mut gens = Vec::new();
        let mut inverses = Vec::new();
        for g in &generators {
            if g.determinant().abs() < 1e-12 * g.amax().powi(3) {
                return Err(Error::Config("singular generator".into()));
            }
            let n = normalize_det(g);
            inverses.push(cofactor(&n).transpose());
            gens.push(n);
        }
        let mut rep = Representation { surface, generators: gens, inverses, relator_residual: 0.0, params: None };
        if surface == Surface::PairOfPants {
            let r = rep.matrix("acb");
            rep.relator_residual = (normalize_det(&r) - Mat3::identity()).amax();
        }
        Ok(rep)
    }

    fn letter(&self, ch: char) -> ScaledMat {
        let i = ch.to_ascii_lowercase() as usize - 'a' as usize;
        let m = if ch.is_ascii_lowercase() { self.generators[i] } else { self.inverses[i] };
        ScaledMat::new(m)
    }

    /// Product of the letters of `word`, renormalized every eight factors.
    pub fn eval(&self, word: &str) -> ScaledMat {
        let mut acc = ScaledMat::identity();
        for (n, ch) in word.chars().enumerate() {
            acc = acc.mul_raw(&self.letter(ch));
            if n % 8 == 7 {
                acc = acc.renormalized();
            }
        }
        acc.renormalized()
    }

    /// The matrix of a short word, with determinant one.
    pub fn matrix(&self, word: &str) -> Mat3 {
        word.chars().fold(Mat3::identity(), |acc, ch| {
            let i = ch.to_ascii_lowercase() as usize - 'a' as usize;
            acc * if ch.is_ascii_lowercase() { self.generators[i] } else { self.inverses[i] }
        })
    }

    /// Eigen-data of `word`, computed on its cyclically reduced core and
    /// carried back by the conjugator, which keeps the flags accurate for
    /// heavily conjugated words.
    pub fn frame(&self, word: &str) -> Result<EigenFrame> {
        let (u, core) = cyclic_split(word);
        let f = EigenFrame::new(&self.eval(core), &self.eval(&inverse(core)))?;
        if u.is_empty() {
            return Ok(f);
        }
        Ok(f.conjugated(&self.eval(u).m, &self.eval(&inverse(u)).m))
    }

    pub fn lengths(&self, word: &str) -> Result<(f64, f64)> {
        self.frame(word).map(|f| (f.l1, f.l2))
    }
}

/// Projective map carrying three generic flags to three others, fixed by
/// the points and the intersection of the first two lines.
pub fn map_flags(src: [&Flag; 3], dst: [&Flag; 3]) -> Result<Mat3> {
    let frame = |f: [&Flag; 3]| -> Result<Mat3> {
        let m = Mat3::from_columns(&[f[0].point, f[1].point, f[2].point]);
        let c = m.try_inverse().ok_or(Error::NonGenericFlags)? * f[0].line.cross(&f[1].line);
        Ok(Mat3::from_columns(&[f[0].point * c[0], f[1].point * c[1], f[2].point * c[2]]))
    };
    let s = frame(src)?.try_inverse().ok_or(Error::NonGenericFlags)?;
    Ok(normalize_det(&(frame(dst)? * s)))
}

pub const TORUS_DIAGONALS: [(usize, usize); 3] = [(2, 5), (2, 4), (0, 2)];
pub const PANTS_DIAGONALS: [(usize, usize); 3] = [(0, 2), (2, 4), (0, 4)];

/// Coordinates of the torus: triple ratios of the two triangles and the
/// edge pairs `(-D1, -D2)` of the three edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusCoordinates {
    pub t: [f64; 2],
    pub edges: [(f64, f64); 3],
}

impl TorusCoordinates {
    /// The modular torus.
    pub fn fuchsian() -> Self {
        TorusCoordinates { t: [1.0, 1.0], edges: [(1.0, 1.0); 3] }
    }

    /// Hexagon parameters of a fundamental domain, triangles
    /// `(0,2,5), (2,3,4)` carrying `t[0]` and `(2,4,5), (0,1,2)` carrying `t[1]`.
    pub fn to_conf(&self) -> ConfParams {
        let mut p = ConfParams::default();
        for (tri, v) in [([0, 2, 5], self.t[0]), ([2, 3, 4], self.t[0]), ([2, 4, 5], self.t[1]), ([0, 1, 2], self.t[1])] {
            p.triangles.insert(tri, v);
        }
        for (e, v) in TORUS_DIAGONALS.iter().zip(self.edges) {
            p.edges.insert(*e, v);
        }
        p
    }

    /// The boundary is unipotent exactly when both products are one.
    pub fn cusp_defect(&self) -> (f64, f64) {
        let t = (self.t[0] * self.t[1]).ln();
        let s: f64 = self.edges.iter().map(|(b, c)| (b * c).ln()).sum();
        (t, s)
    }
}

/// Coordinates of the pants in log form: `t(Delta)`, `t(Delta')` and the
/// `(sigma_1, sigma_2)` pairs of the three edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PantsCoordinates {
    pub t: f64,
    pub t_prime: f64,
    pub sigma_a: (f64, f64),
    pub sigma_b: (f64, f64),
    pub sigma_c: (f64, f64),
}

impl PantsCoordinates {
    pub fn to_conf(&self) -> ConfParams {
        let e = |x: f64| x.exp();
        let mut p = ConfParams::default();
        p.triangles.insert([0, 2, 4], e(self.t));
        for tri in [[0, 4, 5], [2, 3, 4], [0, 1, 2]] {
            p.triangles.insert(tri, e(self.t_prime));
        }
        p.edges.insert((0, 4), (e(self.sigma_b.0), e(self.sigma_b.1)));
        p.edges.insert((2, 4), (e(self.sigma_c.1), e(self.sigma_c.0)));
        p.edges.insert((0, 2), (e(self.sigma_a.1), e(self.sigma_a.0)));
        p
    }
}

fn glued_equal(p: &ConfParams, a: [usize; 3], b: [usize; 3]) -> Result<()> {
    let (x, y) = (p.triangles.get(&a), p.triangles.get(&b));
    match (x, y) {
        (Some(x), Some(y)) if ((x / y).ln()).abs() < 1e-12 => Ok(()),
        (Some(x), Some(y)) => Err(Error::GluingInconsistent((x / y).ln().abs())),
        _ => Err(Error::Config("missing triangle parameter".into())),
    }
}

/// Builds the holonomy by reconstructing a hexagon of flags over a
/// fundamental domain and solving for the side pairings.
pub fn holonomy_from_fg(params: &ConfParams, surface: Surface) -> Result<Representation> {
    params.check_positive()?;
    let (mats, checks) = match surface {
        Surface::OnceHoledTorus => {
            glued_equal(params, [0, 2, 5], [2, 3, 4])?;
            glued_equal(params, [2, 4, 5], [0, 1, 2])?;
            let tri = PolygonTriangulation::new(6, &TORUS_DIAGONALS)?;
            let f = reconstruct(params, &tri)?;
            let a = map_flags([&f[0], &f[2], &f[5]], [&f[2], &f[3], &f[4]])?;
            let b = map_flags([&f[2], &f[4], &f[5]], [&f[1], &f[2], &f[0]])?;
            let checks = [f[5].transform(&a).distance(&f[4]), f[5].transform(&b).distance(&f[0])];
            (vec![a, b], checks)
        }
        Surface::PairOfPants => {
            glued_equal(params, [0, 4, 5], [2, 3, 4])?;
            glued_equal(params, [0, 4, 5], [0, 1, 2])?;
            let tri = PolygonTriangulation::new(6, &PANTS_DIAGONALS)?;
            let f = reconstruct(params, &tri)?;
            let al = map_flags([&f[4], &f[5], &f[0]], [&f[4], &f[2], &f[3]])?;
            let ga = map_flags([&f[0], &f[1], &f[2]], [&f[0], &f[4], &f[5]])?;
            let be = (al * ga).try_inverse().ok_or(Error::NonGenericFlags)?;
            let checks = [f[0].transform(&al).distance(&f[3]), f[2].transform(&ga).distance(&f[5])];
            (vec![al, be, ga], checks)
        }
    };
    let mut rep = Representation::new(surface, mats)?;
    rep.relator_residual = rep.relator_residual.max(checks[0]).max(checks[1]);
    if rep.relator_residual > 1e-8 {
        return Err(Error::GluingInconsistent(rep.relator_residual));
    }
    rep.params = Some(params.clone());
    Ok(rep)
}

pub fn torus_from_coordinates(c: &TorusCoordinates) -> Result<Representation> {
    holonomy_from_fg(&c.to_conf(), Surface::OnceHoledTorus)
}

pub fn pants_from_coordinates(c: &PantsCoordinates) -> Result<Representation> {
    holonomy_from_fg(&c.to_conf(), Surface::PairOfPants)
}

/// Lift of a hyperbolic one-holed torus whose boundary has length `l`
/// (`l = 0` gives the modular torus).
pub fn fuchsian_torus(l: f64) -> Representation {
    // Equal traces x solve x^3 - 3x^2 + 2 - 2 cosh(l/2) = 0 (Markov-type).
    let k = 2.0 - 2.0 * (l / 2.0).cosh();
    let x = newton((3.0, 0.0, -k), 4.0 + l, 100);
    let lam = (x + (x * x - 4.0).sqrt()) / 2.0;
    let a = Matrix2::new(lam, 0.0, 0.0, 1.0 / lam);
    let p = (x - x / lam) / (lam - 1.0 / lam);
    let s = x - p;
    let b = Matrix2::new(p, 1.0, p * s - 1.0, s);
    Representation::new(Surface::OnceHoledTorus, vec![fuchsian_lift(&a), fuchsian_lift(&b)]).unwrap()
}

/// Lift of the hyperbolic pants with the given boundary lengths.
pub fn fuchsian_pants(la: f64, lb: f64, lc: f64) -> Representation {
    let (x, y, z) = (2.0 * (la / 2.0).cosh(), 2.0 * (lb / 2.0).cosh(), 2.0 * (lc / 2.0).cosh());
    let lam = (la / 2.0).exp();
    let al = Matrix2::new(lam, 0.0, 0.0, 1.0 / lam);
    // tr(alpha gamma) = -y makes beta = (alpha gamma)^{-1} the third cuff.
    let p = (-y - z / lam) / (lam - 1.0 / lam);
    let s = z - p;
    let _ = x;
    let ga = Matrix2::new(p, 1.0, p * s - 1.0, s);
    let be = (al * ga).try_inverse().unwrap();
    Representation::new(Surface::PairOfPants, vec![fuchsian_lift(&al), fuchsian_lift(&be), fuchsian_lift(&ga)]).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PantsInvariants {
    pub sigma_a: (f64, f64),
    pub sigma_b: (f64, f64),
    pub sigma_c: (f64, f64),
    pub t: f64,
    pub t_prime: f64,
    pub x: f64,
    pub y: f64,
}

fn sigmas(q: [&Flag; 4]) -> Result<(f64, f64)> {
    let s = |i| -> Result<f64> {
        let d = -edge_function(i, q[0], q[1], q[2], q[3])?;
        if d > 0.0 {
            Ok(d.ln())
        } else {
            Err(Error::NotPositive { key: format!("-D{i}"), value: d })
        }
    };
    Ok((s(1)?, s(2)?))
}

fn log_positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v.ln())
    } else {
        Err(Error::NotPositive { key: key.into(), value: v })
    }
}

/// Edge and triangle invariants read off the repelling flags of the cuffs.
pub fn pants_invariants(rep: &Representation) -> Result<PantsInvariants> {
    if rep.surface != Surface::PairOfPants {
        return Err(Error::Config("pants invariants need a pair of pants".into()));
    }
    let [al, be, ga] = [rep.generators[0], rep.generators[1], rep.generators[2]];
    let am = canonical_flag(&al, End::Minus)?;
    let bm = canonical_flag(&be, End::Minus)?;
    let gm = canonical_flag(&ga, End::Minus)?;
    let sigma_b = sigmas([&gm, &am, &bm.transform(&ga), &bm])?;
    let sigma_c = sigmas([&am, &bm, &gm.transform(&al), &gm])?;
    let sigma_a = sigmas([&bm, &gm, &am.transform(&be), &am])?;
    let t = log_positive("T(Delta)", triple_ratio(&am, &gm, &bm)?)?;
    let t_prime = log_positive("T(Delta')", triple_ratio(&am, &bm.transform(&ga), &gm)?)?;
    let x = (sigma_a.1 - sigma_a.0 + sigma_b.1 - sigma_b.0 + sigma_c.1 - sigma_c.0) / 12.0;
    Ok(PantsInvariants { sigma_a, sigma_b, sigma_c, t, t_prime, x, y: t_prime - t })
}

/// Residuals of the six identities expressing `l1, l2` of each cuff through
/// the pants invariants, in the order `alpha, beta, gamma`.
pub fn verify_length_identities(rep: &Representation) -> Result<[f64; 6]> {
    let p = pants_invariants(rep)?;
    let (a, b, c, t, tp) = (p.sigma_a, p.sigma_b, p.sigma_c, p.t, p.t_prime);
    let len = |i: usize| simple_root_lengths(&rep.generators[i]);
    let (la, lb, lc) = (len(0)?, len(1)?, len(2)?);
    Ok([
        (la.l1 - (c.0 + b.1)).abs(),
        (la.l2 - (c.1 + t + b.0 + tp)).abs(),
        (lb.l1 - (a.0 + c.1)).abs(),
        (lb.l2 - (a.1 + t + c.0 + tp)).abs(),
        (lc.l1 - (b.0 + a.1)).abs(),
        (lc.l2 - (b.1 + t + a.0 + tp)).abs(),
    ])
}

/// Exponents `(a, b, c)`, `a + b + c = 0`, of the diagonal twist generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TwistWeights {
    pub fn new(a: f64, b: f64) -> Self {
        TwistWeights { a, b, c: -a - b }
    }

    pub fn theta1() -> Self {
        TwistWeights::new(2.0 / 3.0, -1.0 / 3.0)
    }

    pub fn theta2() -> Self {
        TwistWeights::new(1.0 / 3.0, 1.0 / 3.0)
    }

    /// The twist-bulging combination `theta2 - theta1`.
    pub fn bulge() -> Self {
        TwistWeights::new(-1.0 / 3.0, 2.0 / 3.0)
    }
}

/// Flow along the generator `curve` (`'a'` or `'b'`) of the torus: the other
/// generator is multiplied on the right by `g_s`, diagonal in the eigenbasis
/// of the curve.
pub fn twist_flow(rep: &Representation, curve: char, s: f64, w: TwistWeights) -> Result<Representation> {
    if rep.surface != Surface::OnceHoledTorus {
        return Err(Error::Config("twist flow is provided for the torus".into()));
    }
    let (i, j) = match curve {
        'a' => (0, 1),
        'b' => (1, 0),
        _ => return Err(Error::Config(format!("unknown curve {curve}"))),
    };
    let g = rep.generators[i];
    let ev = eigen3(&g)?;
    let v = Mat3::from_columns(&[eigenvector(&g, ev[0]), eigenvector(&g, ev[1]), eigenvector(&g, ev[2])]);
    let d = Mat3::from_diagonal(&Vec3::new((w.a * s).exp(), (w.b * s).exp(), (w.c * s).exp()));
    let gs = v * d * v.try_inverse().ok_or(Error::NotLoxodromic)?;
    let mut gens = rep.generators.clone();
    gens[j] *= gs;
    let mut out = Representation::new(rep.surface, gens)?;
    out.relator_residual = rep.relator_residual;
    Ok(out)
}
