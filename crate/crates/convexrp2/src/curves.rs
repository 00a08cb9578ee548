//! Words in the free group `<a, b>` (inverses written `A`, `B`) and the
//! enumeration of simple closed curves on the one-holed torus by slope.

use std::collections::VecDeque;

fn inv_letter(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn inverse(w: &str) -> String {
    w.chars().rev().map(inv_letter).collect()
}

/// Free reduction.
pub fn reduce(w: &str) -> String {
    let mut out: Vec<char> = Vec::with_capacity(w.len());
    for c in w.chars() {
        if out.last() == Some(&inv_letter(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn mul(ws: &[&str]) -> String {
    reduce(&ws.concat())
}

pub fn commutator(x: &str, y: &str) -> String {
    mul(&[x, y, &inverse(x), &inverse(y)])
}

/// Splits a reduced word as `u c u^{-1}` with `c` cyclically reduced,
/// returning `(u, c)`.
pub fn cyclic_split(w: &str) -> (&str, &str) {
    let b = w.as_bytes();
    let mut k = 0;
    while 2 * (k + 1) < b.len() && inv_letter(b[k] as char) == b[b.len() - 1 - k] as char {
        k += 1;
    }
    (&w[..k], &w[k..w.len() - k])
}

/// Exponent sums of `a` and `b`.
pub fn abelianization(w: &str) -> (i64, i64) {
    w.chars().fold((0, 0), |(p, q), c| match c {
        'a' => (p + 1, q),
        'A' => (p - 1, q),
        'b' => (p, q + 1),
        'B' => (p, q - 1),
        _ => (p, q),
    })
}

/// The boundary word.
pub const BOUNDARY: &str = "abAB";

/// Christoffel word of slope `(p, q)` with `gcd(|p|, |q|) = 1`: a cyclically
/// reduced representative of the simple curve with abelianization `(p, q)`.
pub fn christoffel_word(p: i64, q: i64) -> String {
    let (x, y) = (if p >= 0 { 'a' } else { 'A' }, if q >= 0 { 'b' } else { 'B' });
    let (p, q) = (p.abs(), q.abs());
    let n = p + q;
    (1..=n)
        .map(|i| if (i * q).div_euclid(n) == ((i - 1) * q).div_euclid(n) { x } else { y })
        .collect()
}

/// An oriented simple closed curve `x` together with a partner `y` such that
/// `[x, y] = abAB` as reduced words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCurve {
    pub slope: (i64, i64),
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug)]
struct Node {
    x: String,
    y: String,
    g: String,
    sx: (i64, i64),
    sy: (i64, i64),
}

fn conjugated(slope: (i64, i64), x: &str, y: &str, g: &str) -> SimpleCurve {
    let gi = inverse(g);
    SimpleCurve { slope, x: mul(&[&gi, x, g]), y: mul(&[&gi, y, g]) }
}

fn emit(out: &mut Vec<SimpleCurve>, slope: (i64, i64), x: &str, y: &str, g: &str) {
    out.push(conjugated(slope, x, y, g));
    let (xi, yi) = (inverse(x), inverse(y));
    let g2 = mul(&[&inverse(&mul(&[y, x])), g]);
    out.push(conjugated((-slope.0, -slope.1), &xi, &yi, &g2));
}

/// All oriented simple closed curves whose slope has max-norm at most
/// `depth`, breadth first along the Stern–Brocot tree, each with its
/// partner so that the commutator is exactly the boundary word.
pub fn enumerate_slopes(depth: i64) -> Vec<SimpleCurve> {
    let mut out = Vec::new();
    if depth < 1 {
        return out;
    }
    emit(&mut out, (1, 0), "a", "b", "");
    emit(&mut out, (0, -1), "B", "a", "B");
    let mut queue = VecDeque::from([
        Node { x: "a".into(), y: "b".into(), g: String::new(), sx: (1, 0), sy: (0, 1) },
        Node { x: "B".into(), y: "a".into(), g: "B".into(), sx: (0, -1), sy: (1, 0) },
    ]);
    while let Some(n) = queue.pop_front() {
        let m = (n.sx.0 + n.sy.0, n.sx.1 + n.sy.1);
        if m.0.abs().max(m.1.abs()) > depth {
            continue;
        }
        let xy = mul(&[&n.x, &n.y]);
        emit(&mut out, m, &xy, &n.y, &n.g);
        queue.push_back(Node { x: n.x.clone(), y: xy.clone(), g: mul(&[&n.x, &n.g]), sx: n.sx, sy: m });
        queue.push_back(Node { x: xy, y: n.y, g: n.g, sx: m, sy: n.sy });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        assert_eq!(reduce("abBAab"), "ab");
        assert_eq!(inverse("abAB"), "baBA");
        assert_eq!(mul(&["ab", "BA"]), "");
        assert_eq!(cyclic_split("baBBBabAB"), ("baB", "BBa"));
        assert_eq!(cyclic_split("aA"), ("", "aA"));
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel_word(1, 0), "a");
        assert_eq!(christoffel_word(0, 1), "b");
        assert_eq!(christoffel_word(1, 1), "ab");
        assert_eq!(christoffel_word(2, 1), "aab");
        assert_eq!(christoffel_word(-1, 2), "Abb");
        assert_eq!(abelianization(&christoffel_word(3, -5)), (3, -5));
    }

    #[test]
    fn depth_one_has_eight_curves() {
        let c = enumerate_slopes(1);
        assert_eq!(c.len(), 8);
        let mut s: Vec<_> = c.iter().map(|c| c.slope).collect();
        s.sort();
        assert_eq!(s, vec![(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]);
    }

    #[test]
    fn count_has_coprime_density() {
        // Primitive vectors in [-N, N]^2: about (2N)^2 * 6 / pi^2.
        let n = 100;
        let ratio = enumerate_slopes(n).len() as f64 / (n * n) as f64;
        let want = 24.0 / std::f64::consts::PI.powi(2);
        assert!((ratio / want - 1.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn partners_give_the_boundary() {
        for c in enumerate_slopes(6) {
            assert_eq!(commutator(&c.x, &c.y), BOUNDARY);
            assert_eq!(abelianization(&c.x), c.slope);
        }
    }
}
