//! Positive configurations of flags over a triangulated polygon.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::projective_core::{det3, edge_function, triple_ratio, Flag, Vec3};

#[derive(Clone, Debug, PartialEq)]
pub struct PolygonTriangulation {
    pub d: usize,
    /// Diagonals `(i, j)` with `i < j`.
    pub diagonals: Vec<(usize, usize)>,
    /// Triangles as increasing (hence anticlockwise) vertex triples.
    pub triangles: Vec<[usize; 3]>,
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |v: usize, e: (usize, usize)| e.0 < v && v < e.1;
    let shared = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    !shared && inside(b.0, a) != inside(b.1, a)
}

impl PolygonTriangulation {
    pub fn new(d: usize, diagonals: &[(usize, usize)]) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("triangulation: {msg}"));
        if d < 3 {
            return Err(bad("need at least three vertices"));
        }
        let diagonals: Vec<(usize, usize)> = diagonals.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        if diagonals.len() != d - 3 {
            return Err(bad("a triangulation has d - 3 diagonals"));
        }
        for (n, &(i, j)) in diagonals.iter().enumerate() {
            if j >= d || j - i < 2 || (i == 0 && j == d - 1) {
                return Err(bad("diagonal is a side or out of range"));
            }
            if diagonals[..n].iter().any(|&e| e == (i, j) || crosses(e, (i, j))) {
                return Err(bad("diagonals repeat or cross"));
            }
        }
        let is_edge = |i: usize, j: usize| j == i + 1 || (i == 0 && j == d - 1) || diagonals.contains(&(i, j));
        let mut triangles = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    if is_edge(i, j) && is_edge(j, k) && is_edge(i, k) {
                        triangles.push([i, j, k]);
                    }
                }
            }
        }
        Ok(PolygonTriangulation { d, diagonals, triangles })
    }

    /// All diagonals from vertex 0.
    pub fn fan(d: usize) -> Self {
        let diags: Vec<(usize, usize)> = (2..d - 1).map(|j| (0, j)).collect();
        PolygonTriangulation::new(d, &diags).expect("fan triangulation")
    }

    /// The two apexes of a diagonal: `k` outside the arc `i..j`, `l` inside.
    pub fn apexes(&self, (i, j): (usize, usize)) -> (usize, usize) {
        let mut k = None;
        let mut l = None;
        for t in &self.triangles {
            if t.contains(&i) && t.contains(&j) {
                let o = t.iter().copied().find(|&v| v != i && v != j).unwrap();
                if i < o && o < j {
                    l = Some(o);
                } else {
                    k = Some(o);
                }
            }
        }
        (k.expect("diagonal bounds two triangles"), l.expect("diagonal bounds two triangles"))
    }
}

/// Triple ratio per triangle and `(-D1, -D2)` per diagonal oriented from the
/// smaller vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfParams {
    pub triangles: BTreeMap<[usize; 3], f64>,
    pub edges: BTreeMap<(usize, usize), (f64, f64)>,
}

impl ConfParams {
    /// Flat map with keys `T:i-j-k`, `D1:i-j`, `D2:i-j`.
    pub fn to_text_map(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for (t, v) in &self.triangles {
            out.insert(format!("T:{}-{}-{}", t[0], t[1], t[2]), *v);
        }
        for ((i, j), (b, c)) in &self.edges {
            out.insert(format!("D1:{i}-{j}"), *b);
            out.insert(format!("D2:{i}-{j}"), *c);
        }
        out
    }

    pub fn from_text_map(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut p = ConfParams::default();
        let idx = |s: &str| -> Result<Vec<usize>> {
            s.split('-').map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad index in {s}")))).collect()
        };
        for (k, &v) in map {
            let (kind, rest) = k.split_once(':').ok_or_else(|| Error::Config(format!("bad key {k}")))?;
            let ix = idx(rest)?;
            match (kind, ix.as_slice()) {
                ("T", &[i, j, l]) => {
                    p.triangles.insert([i, j, l], v);
                }
                ("D1", &[i, j]) => p.edges.entry((i, j)).or_insert((f64::NAN, f64::NAN)).0 = v,
                ("D2", &[i, j]) => p.edges.entry((i, j)).or_insert((f64::NAN, f64::NAN)).1 = v,
                _ => return Err(Error::Config(format!("bad key {k}"))),
            }
        }
        Ok(p)
    }

    pub fn check_positive(&self) -> Result<()> {
        for (k, v) in self.to_text_map() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NotPositive { key: k, value: v });
            }
        }
        Ok(())
    }
}

/// `(A, B, C, D) = (T(X,W,Y), -D1(X,Y,Z,W), -D2(X,Y,Z,W), T(X,Y,Z))` for a
/// quadrilateral `X, W, Y, Z` with diagonal `XY`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl QuadParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        QuadParams { a, b, c, d }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// As polygon parameters with `X, W, Y, Z = 0, 1, 2, 3`.
    pub fn to_conf(&self) -> (ConfParams, PolygonTriangulation) {
        let tri = PolygonTriangulation::new(4, &[(0, 2)]).unwrap();
        let mut p = ConfParams::default();
        p.triangles.insert([0, 1, 2], self.a);
        p.triangles.insert([0, 2, 3], self.d);
        p.edges.insert((0, 2), (self.b, self.c));
        (p, tri)
    }
}

pub fn parametrize(flags: &[Flag], tri: &PolygonTriangulation) -> Result<ConfParams> {
    if flags.len() != tri.d {
        return Err(Error::Config("flag count does not match the polygon".into()));
    }
    let mut p = ConfParams::default();
    for t in &tri.triangles {
        p.triangles.insert(*t, triple_ratio(&flags[t[0]], &flags[t[1]], &flags[t[2]])?);
    }
    for &(i, j) in &tri.diagonals {
        let (k, l) = tri.apexes((i, j));
        let (x, y, z, w) = (&flags[i], &flags[j], &flags[k], &flags[l]);
        p.edges.insert((i, j), (-edge_function(1, x, y, z, w)?, -edge_function(2, x, y, z, w)?));
    }
    p.check_positive()?;
    Ok(p)
}

/// Flag `(h, line)` through the point `h` with `T(F, G, H) = target`.
fn solve_line(f: &Flag, g: &Flag, h: Vec3, target: f64) -> Flag {
    let r = target * f.line.dot(&h) * g.line.dot(&f.point) / (f.line.dot(&g.point) * g.line.dot(&h));
    Flag::unchecked(h, h.cross(&(f.point - r * g.point)))
}

/// Point `z` with `-D1(X,Y,Z,W) = b` and `-D2(X,Y,Z,W) = c`.
fn solve_point(x: &Flag, y: &Flag, w: &Flag, b: f64, c: f64) -> Vec3 {
    let xyw = det3(&x.point, &y.point, &w.point);
    let cxy = x.point.cross(&y.point);
    let l1 = x.line * xyw + cxy * (b * x.line.dot(&w.point));
    let l2 = cxy * y.line.dot(&w.point) + y.line * (c * xyw);
    l1.cross(&l2)
}

/// Inverse of [`parametrize`]. The first triangle `(i, j, k)` is placed on the
/// points `e1, e3, e2` with lines `(0,1,1)` at `i` and `(1,0,1)` at `k`.
pub fn reconstruct(params: &ConfParams, tri: &PolygonTriangulation) -> Result<Vec<Flag>> {
    params.check_positive()?;
    let missing = || Error::Config("parameters do not match the triangulation".into());
    let mut flags: Vec<Option<Flag>> = vec![None; tri.d];
    let first = tri.triangles[0];
    let [i, j, k] = first;
    flags[i] = Some(Flag::unchecked(Vec3::x(), Vec3::new(0.0, 1.0, 1.0)));
    flags[k] = Some(Flag::unchecked(Vec3::y(), Vec3::new(1.0, 0.0, 1.0)));
    let t0 = *params.triangles.get(&first).ok_or_else(missing)?;
    flags[j] = Some(solve_line(&flags[k].unwrap(), &flags[i].unwrap(), Vec3::z(), t0));
    let mut done = vec![first];
    while done.len() < tri.triangles.len() {
        let before = done.len();
        for t in &tri.triangles {
            if done.contains(t) {
                continue;
            }
            let known: Vec<usize> = t.iter().copied().filter(|&v| flags[v].is_some()).collect();
            if known.len() != 2 {
                continue;
            }
            let new = t.iter().copied().find(|&v| flags[v].is_none()).unwrap();
            let (p, q) = (known[0], known[1]);
            let other = done
                .iter()
                .find(|s| s.contains(&p) && s.contains(&q))
                .and_then(|s| s.iter().copied().find(|&v| v != p && v != q))
                .ok_or_else(missing)?;
            let (b, c) = *params.edges.get(&(p, q)).ok_or_else(missing)?;
            let (fp, fq, fo) = (flags[p].unwrap(), flags[q].unwrap(), flags[other].unwrap());
            let z = if p < new && new < q { solve_point(&fq, &fp, &fo, c, b) } else { solve_point(&fp, &fq, &fo, b, c) };
            let pos = t.iter().position(|&v| v == new).unwrap();
            let (r0, r1) = (t[(pos + 1) % 3], t[(pos + 2) % 3]);
            let tv = *params.triangles.get(t).ok_or_else(missing)?;
            flags[new] = Some(solve_line(&flags[r0].unwrap(), &flags[r1].unwrap(), z, tv));
            done.push(*t);
        }
        if done.len() == before {
            return Err(missing());
        }
    }
    Ok(flags.into_iter().map(|f| f.unwrap()).collect())
}

/// Coordinates after switching the diagonal of the quadrilateral.
pub fn flip(q: QuadParams) -> QuadParams {
    let QuadParams { a, b, c, d } = q;
    let s = 1.0 + c + c * a + c * a * b;
    let u = 1.0 + b + b * d + b * d * c;
    QuadParams {
        a: (1.0 + c) / (a * c * (1.0 + b)),
        b: d * s / u,
        c: a * u / s,
        d: (1.0 + b) / (d * b * (1.0 + c)),
    }
}

/// Inverse of [`flip`]: the flip formula applied in the labeling induced on
/// the other diagonal.
pub fn unflip(q: QuadParams) -> QuadParams {
    let r = flip(QuadParams::new(q.b, q.d, q.a, q.c));
    QuadParams::new(r.c, r.a, r.d, r.b)
}
