//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; the process fails if any does.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use convexrp2::configurations::{flip, parametrize, reconstruct, unflip, ConfParams, PolygonTriangulation, QuadParams};
use convexrp2::curves::BOUNDARY;
use convexrp2::hilbert_geometry::{canonical_area_s11_unipotent, ConvexDomain, Vec2};
use convexrp2::holonomy::{fuchsian_torus, pants_from_coordinates, torus_from_coordinates, verify_length_identities};
use convexrp2::holonomy::{PantsCoordinates, TorusCoordinates};
use convexrp2::mcshane::{d_func, h_func, mcshane_sum_boundary, mcshane_sum_unipotent};
use convexrp2::projective_core::{edge_function, triple_ratio, Flag, Mat3};
use convexrp2::volume::{
    a_coefficient, bound_scan, fermi_dirac, kernel_d, kernel_r, mc_volume_upper_s11, sandwich_bounds,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{h, li_neg_exp, rel, simpson};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.2}s", e.as_secs_f64()))
}

fn pants_length_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut u = || rng.gen_range(-2.0..2.0);
        let c = PantsCoordinates { t: u(), t_prime: u(), sigma_a: (u(), u()), sigma_b: (u(), u()), sigma_c: (u(), u()) };
        let res = match pants_from_coordinates(&c).and_then(|r| verify_length_identities(&r)) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{c:?}: {e}")),
        };
        worst = res.iter().copied().fold(worst, f64::max);
    }
    let (fast, time) = within(start, Duration::from_secs(10));
    outcome(worst < 1e-8 && fast, format!("max residual {worst:.2e}, {time}"))
}

fn flip_consistency() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let other = PolygonTriangulation::new(4, &[(1, 3)]).unwrap();
    let (mut geo, mut round) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let mut g = || rng.gen_range(-2.0f64..2.0).exp();
        let q = QuadParams::new(g(), g(), g(), g());
        let (p, tri) = q.to_conf();
        let flags = reconstruct(&p, &tri).unwrap();
        let o = parametrize(&flags, &other).unwrap();
        let (e1, e2) = o.edges[&(1, 3)];
        let oracle = [e1, o.triangles[&[0, 1, 3]], o.triangles[&[1, 2, 3]], e2];
        let f = flip(q);
        for (x, y) in f.as_array().iter().zip(oracle) {
            geo = geo.max(rel(*x, y));
        }
        for (x, y) in unflip(f).as_array().iter().zip(q.as_array()) {
            round = round.max(rel(*x, y));
        }
    }
    let (fast, time) = within(start, Duration::from_secs(5));
    outcome(geo < 1e-9 && round < 1e-12 && fast, format!("oracle {geo:.2e}, round trip {round:.2e}, {time}"))
}

fn mcshane_modular() -> Outcome {
    let start = Instant::now();
    let rep = torus_from_coordinates(&TorusCoordinates::fuchsian()).unwrap();
    let r = mcshane_sum_unipotent(&rep, 50).unwrap();
    let tau = r.records.iter().map(|x| x.tau.abs()).fold(0.0, f64::max);
    let (fast, time) = within(start, Duration::from_secs(30));
    let err = (r.sum - 1.0).abs();
    outcome(err < 1e-3 && tau < 1e-8 && fast, format!("|sum - 1| = {err:.2e}, max |tau| = {tau:.2e}, {time}"))
}

/// Cusped torus coordinates within `e^{0.3}` of the modular torus.
fn perturbed_cusped(rng: &mut ChaCha8Rng) -> TorusCoordinates {
    let mut u: Vec<f64> = (0..6).map(|_| rng.gen_range(-0.3..0.3)).collect();
    let mean = u.iter().sum::<f64>() / 6.0;
    u.iter_mut().for_each(|x| *x -= mean);
    let m = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m > 0.3 {
        u.iter_mut().for_each(|x| *x *= 0.3 / m);
    }
    let s = rng.gen_range(-0.3..0.3f64);
    let e = |x: f64| x.exp();
    TorusCoordinates { t: [e(s), e(-s)], edges: [(e(u[0]), e(u[1])), (e(u[2]), e(u[3])), (e(u[4]), e(u[5]))] }
}

fn mcshane_perturbed() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut detail = Vec::new();
    let mut ok = true;
    for _ in 0..3 {
        let c = perturbed_cusped(&mut rng);
        let rep = torus_from_coordinates(&c).unwrap();
        let r = mcshane_sum_unipotent(&rep, 80).unwrap();
        let conv = r.convergence();
        let monotone = r.records.windows(2).all(|w| w[1].partial_sum >= w[0].partial_sum)
            && conv.windows(2).all(|w| w[1].1 >= w[0].1);
        let err = (r.sum - 1.0).abs();
        ok &= err < 1e-2 && monotone;
        detail.push(format!("{err:.2e}{}", if monotone { "" } else { " (not monotone)" }));
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    outcome(ok && fast, format!("|sum - 1| = [{}], {time}", detail.join(", ")))
}

fn mcshane_boundary() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for l in [1.0, 2.0] {
        let r = mcshane_sum_boundary(&fuchsian_torus(l), 50).unwrap();
        let err = (r.sum - l).abs();
        ok &= err < 1e-3 && (r.target - l).abs() < 1e-9;
        detail.push(format!("L={l}: {err:.2e}"));
    }
    outcome(ok, detail.join(", "))
}

fn fermi_dirac_values() -> Outcome {
    let mut worst = 0.0f64;
    for d in 0..=4u32 {
        let fact: f64 = (1..=d).map(f64::from).product();
        for t in [-5.0, 0.0, 1.0, 5.0, 20.0] {
            worst = worst.max(rel(fermi_dirac(d, t), -fact * li_neg_exp(d + 1, t)));
        }
    }
    let a2 = (a_coefficient(2) - 0.822_467_03).abs();
    let a3 = (a_coefficient(3) - 0.901_542_68).abs();
    outcome(worst < 1e-8 && a2 < 1e-8 && a3 < 1e-8, format!("max rel {worst:.2e}, a2 {a2:.1e}, a3 {a3:.1e}"))
}

fn sandwich() -> Outcome {
    let mut ok = true;
    let mut oracle = 0.0f64;
    for d in 2..=4u32 {
        for k in 0..=40 {
            let t = 0.5 * f64::from(k);
            let s = sandwich_bounds(d, t).unwrap();
            oracle = oracle.max(rel(s.value, -li_neg_exp(d, t)));
            ok &= if k == 0 { s.lower <= s.value && s.value <= s.upper } else { s.lower < s.value && s.value < s.upper };
        }
    }
    outcome(ok && oracle < 1e-10, format!("ordering {}, value vs oracle {oracle:.2e}", if ok { "holds" } else { "violated" }))
}

/// `(t^{j+1}/(j+1)) int x^{i+j+1} H(x - c, L) dx` by Simpson's rule.
fn kernel_r_oracle(i: u32, j: u32, t: f64, l: f64, l2g: f64) -> f64 {
    let c = 5.0 * t + l2g;
    let p = (i + j + 1) as i32;
    t.powi(j as i32 + 1) / f64::from(j + 1) * simpson(|x| x.powi(p) * h(x - c, l), 0.0, c + l + 200.0, 40_000)
}

/// Two-dimensional Simpson over `(l1(b), l1(g))` after integrating the
/// second lengths out by hand.
fn kernel_d_oracle(i: u32, j: u32, k: u32, l: u32, t: f64, big_l: f64) -> f64 {
    let top = 5.0 * t + big_l + 120.0;
    let n = 1600;
    let (p, q) = ((i + j + 1) as i32, (k + l + 1) as i32);
    let inner = |x: f64| simpson(|y| x.powi(p) * y.powi(q) * h(x + y - 5.0 * t, big_l), 0.0, top, n);
    t.powi((j + l + 2) as i32) / f64::from((j + 1) * (l + 1)) * simpson(inner, 0.0, top, n)
}

fn volume_chain() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for t in [1.0, 2.0] {
        let e = mc_volume_upper_s11(t, (0.0, 0.0), 100_000, 2024).unwrap();
        let chain = e.chain_values[1].value;
        let bound = -(4.0 * t.powi(5) + 8.0 * t.powi(4)) * li_neg_exp(3, t);
        let z = (e.estimate - chain) / e.stderr;
        ok &= e.estimate <= chain + 3.0 * e.stderr && chain <= bound * (1.0 + 1e-12);
        detail.push(format!("t={t}: est {:.4} +- {:.4}, chain {chain:.4}, bound {bound:.4}, z {z:.2}", e.estimate, e.stderr));
    }
    let mut kern = 0.0f64;
    for (t, l) in [(1.0, 0.0), (1.0, 1.5), (2.0, 0.7)] {
        for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 1)] {
            kern = kern.max(rel(kernel_r(i, j, t, l, 0.7).unwrap(), kernel_r_oracle(i, j, t, l, 0.7)));
        }
        for (i, j, k, m) in [(0, 0, 0, 0), (1, 0, 0, 1)] {
            kern = kern.max(rel(kernel_d(i, j, k, m, t, l).unwrap(), kernel_d_oracle(i, j, k, m, t, l)));
        }
    }
    ok &= kern < 1e-6;
    detail.push(format!("kernels {kern:.2e}"));
    outcome(ok, detail.join("; "))
}

fn hilbert_geometry() -> Outcome {
    let disk = ConvexDomain::unit_disk();
    let o = Vec2::zeros();
    let d = disk.hilbert_distance(&o, &Vec2::new(0.5, 0.0)).unwrap();
    let dens = disk.busemann_density(&Vec2::new(0.5, 0.0)).unwrap().h;
    let s3 = 3f64.sqrt() / 2.0;
    let tri = [Vec2::new(1.0, 0.0), Vec2::new(-0.5, s3), Vec2::new(-0.5, -s3)];
    let ideal = disk.area(tri, &[1e-4]).unwrap().area;
    let rep = torus_from_coordinates(&TorusCoordinates::fuchsian()).unwrap();
    let torus = canonical_area_s11_unipotent(&rep, 5, &[1e-3]).unwrap().0.area;
    let errs = [
        (d - 0.549_306).abs() < 1e-6,
        (dens - 0.75f64.powf(-1.5)).abs() < 1e-4,
        (ideal - PI).abs() < 1e-2,
        (torus / (2.0 * PI) - 1.0).abs() < 0.02,
    ];
    outcome(
        errs.iter().all(|x| *x),
        format!("distance {d:.7}, density {dens:.6}, ideal triangle {ideal:.5}, torus {:.5} x 2pi", torus / (2.0 * PI)),
    )
}

fn derivative_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let step = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (a, b, c) = (rng.gen_range(0.0..6.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let fd = (d_func(a + step, b, c) - d_func(a - step, b, c)) / (2.0 * step);
        let want = 0.5 * h(b + c, a);
        worst = worst.max((fd - want).abs()).max((0.5 * h_func(b + c, a) - want).abs());
        worst = worst.max((d_func(a, b, c) - common::d_direct(a, b, c)).abs());
    }
    outcome(worst < 1e-6, format!("max error {worst:.2e}"))
}

fn random_positive_hexagon(rng: &mut ChaCha8Rng) -> Vec<Flag> {
    let tri = PolygonTriangulation::fan(6);
    let mut p = ConfParams::default();
    for t in &tri.triangles {
        p.triangles.insert(*t, rng.gen_range(-1.0f64..1.0).exp());
    }
    for e in &tri.diagonals {
        p.edges.insert(*e, (rng.gen_range(-1.0f64..1.0).exp(), rng.gen_range(-1.0f64..1.0).exp()));
    }
    reconstruct(&p, &tri).unwrap()
}

fn invariants(f: &[Flag]) -> Vec<f64> {
    let mut v = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                v.push(triple_ratio(&f[i], &f[j], &f[k]).unwrap());
            }
        }
    }
    for (x, y, z, w) in [(0, 2, 3, 1), (0, 3, 4, 2), (1, 4, 5, 2), (2, 5, 0, 3)] {
        for i in [1, 2] {
            v.push(edge_function(i, &f[x], &f[y], &f[z], &f[w]).unwrap());
        }
    }
    v
}

fn invariance_and_fuchsian_scan() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst = 0.0f64;
    let mut tried = 0;
    while tried < 50 {
        let g = Mat3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let s = g.singular_values();
        if s.min() < 1e-2 * s.max() {
            continue;
        }
        tried += 1;
        let f = random_positive_hexagon(&mut rng);
        let moved: Vec<Flag> = f.iter().map(|x| x.transform(&g)).collect();
        for (x, y) in invariants(&f).iter().zip(invariants(&moved)) {
            worst = worst.max(rel(y, *x));
        }
    }
    let mut scan_ok = true;
    let mut detail = vec![format!("invariants {worst:.2e}")];
    for rep in [torus_from_coordinates(&TorusCoordinates::fuchsian()).unwrap(), fuchsian_torus(1.0)] {
        let s = bound_scan(&rep, 6).unwrap();
        scan_ok &= s.m_t < 1e-8 && s.m_d < 1e-8 && (s.m_l - 1.0).abs() < 1e-8 && s.note.contains("lower bound");
        detail.push(format!("scan mT {:.1e} mD {:.1e} mL-1 {:.1e}", s.m_t, s.m_d, s.m_l - 1.0));
    }
    let cusp = torus_from_coordinates(&TorusCoordinates::fuchsian()).unwrap();
    scan_ok &= cusp.lengths(BOUNDARY).is_err() || cusp.lengths(BOUNDARY).map(|l| l.0 < 1e-4).unwrap_or(false);
    outcome(worst < 1e-8 && scan_ok, detail.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    // libtest flags such as --nocapture or a name filter are accepted and ignored.
    let criteria: [Criterion; 11] = [
        ("pants length identities", pants_length_identities),
        ("flip consistency", flip_consistency),
        ("McShane cusped Fuchsian", mcshane_modular),
        ("McShane cusped perturbed", mcshane_perturbed),
        ("McShane geodesic boundary", mcshane_boundary),
        ("Fermi-Dirac and polylog", fermi_dirac_values),
        ("sandwich bounds", sandwich),
        ("volume bound chain", volume_chain),
        ("Hilbert geometry", hilbert_geometry),
        ("derivative identity", derivative_identity),
        ("invariance and Fuchsian scan", invariance_and_fuchsian_scan),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.ok);
        println!("{} criterion {:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, n + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
