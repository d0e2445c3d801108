//! Acceptance criteria, one verdict line each. Runs without the test harness:
//! `cargo test --test acceptance`.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::Instant;

use billiard_caustics::axis::{
    fixed_point_analysis, iterate_axis_cusps, mobius_g, Axis, AxisCoord, MobiusClass,
};
use billiard_caustics::cusp::{
    analyze, circle_inflection_residual, circle_quadratics, find_cusps, Cusp, CLASSIFY_TOL,
};
use billiard_caustics::family::{caustic, external_caustic};
use billiard_caustics::geometry::angle_distance_mod_pi;
use billiard_caustics::refraction::{refraction_caustic, RefractionSetup};
use billiard_caustics::{ConicTable, EnvelopePoint, Point, Ray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn lambda(a: f64, b: f64, r: Ray) -> f64 {
    (a * r.alpha.sin()).powi(2) + (b * r.alpha.cos()).powi(2) - r.p * r.p
}

fn c1_lambda_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for (a, b) in [(1.0, 1.0), (2.0, 1.0), (5.0, 1.0)] {
        let t = ConicTable::new(a, b).unwrap();
        for _ in 0..10_000 {
            let alpha = rng.gen_range(0.0..TAU);
            let reach = ((a * alpha.sin()).powi(2) + (b * alpha.cos()).powi(2)).sqrt();
            let ray = Ray::new(alpha, rng.gen_range(-0.999..0.999) * reach);
            let image = t.reflect(ray).unwrap();
            worst = worst.max((lambda(a, b, image) - lambda(a, b, ray)).abs());
        }
    }
    verdict(
        worst < 1e-9,
        format!("max |lambda(T r) - lambda(r)| = {worst:.2e} over 3 x 10^4 rays"),
    )
}

const CIRCLE_DS: [f64; 5] = [0.1, 0.25, 0.4, 0.7, 0.9];
const ELLIPSE_SOURCES: [(f64, f64); 5] =
    [(0.8, 0.3), (0.5, -0.6), (1.2, 0.1), (0.2, 0.0), (0.0, 0.4)];

/// A cusp on the x-axis: finite with `|y| < 1e-6`, or at infinity along it.
fn on_x_axis(c: &Cusp) -> bool {
    match c.location {
        EnvelopePoint::Finite(q) => q.y.abs() < 1e-6,
        EnvelopePoint::AtInfinity { direction } => angle_distance_mod_pi(direction, 0.0) < 1e-9,
    }
}

fn c2_circle(cusps: &mut Vec<Vec<Cusp>>) -> Verdict {
    let t = ConicTable::circle(1.0).unwrap();
    let mut bad = Vec::new();
    for d in CIRCLE_DS {
        for n in 1..=8 {
            let found = find_cusps(&caustic(&t, Point::new(d, 0.0), n, 4096).unwrap()).unwrap();
            let line = found.iter().filter(|c| on_x_axis(c)).count();
            let circle = found
                .iter()
                .filter(|c| !on_x_axis(c))
                .filter_map(|c| c.location.finite())
                .filter(|q| (q.norm() - d).abs() < 1e-5)
                .count();
            let ordinary = found.iter().all(|c| c.order.is_ordinary());
            if found.len() != 4 || line != 2 || circle != 2 || !ordinary {
                bad.push(format!(
                    "d={d} n={n}: {} cusps, {line} on line, {circle} on circle",
                    found.len()
                ));
            }
            cusps.push(found);
        }
    }
    let detail = if bad.is_empty() {
        "40 caustics: 4 ordinary cusps each, 2 on the center line, 2 on |x| = d".to_string()
    } else {
        bad.join("; ")
    };
    verdict(bad.is_empty(), detail)
}

fn c3_ellipse(cusps: &mut Vec<Vec<Cusp>>) -> Verdict {
    let t = ConicTable::new(2.0, 1.0).unwrap();
    let tol = 1e-5 * t.a();
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    let mut counts = std::collections::BTreeMap::new();
    for (x, y) in ELLIPSE_SOURCES {
        for n in 1..=5 {
            let a = analyze(&t, Point::new(x, y), n, 4096, tol, CLASSIFY_TOL).unwrap();
            for m in &a.matches {
                match m {
                    Some(m) => worst = worst.max(m.distance),
                    None => bad.push(format!("O=({x},{y}) n={n}")),
                }
            }
            *counts.entry(a.cusps.len()).or_insert(0) += 1;
            cusps.push(a.cusps);
        }
    }
    let detail = format!(
        "25 caustics, 100 predictions, worst match {worst:.2e}; cusp counts {counts:?}{}",
        if bad.is_empty() {
            String::new()
        } else {
            format!("; unmatched: {}", bad.join(", "))
        }
    );
    verdict(bad.is_empty(), detail)
}

fn c4_quadratic() -> Verdict {
    let mut ok = true;
    for n in 1..=10_000u32 {
        let (x, a) = circle_quadratics(n);
        let m = n as i128;
        let expected = 12 * (1 - m * m);
        ok &= x.discriminant == expected && a.discriminant == expected;
        if n == 1 {
            // 3x^2 - 6x + 3 = 3 (x - 1)^2
            ok &= x.roots == vec![1.0] && a.roots == vec![1.0];
        } else {
            ok &= x.roots.is_empty() && a.roots.is_empty();
        }
    }
    verdict(
        ok,
        "discriminant 12(1 - n^2) for n <= 10^4; n = 1 root x = a = 1; none for n >= 2",
    )
}

fn c5_grid() -> Verdict {
    let mut interior_zero = false;
    let mut min_abs = f64::INFINITY;
    let mut axis = 0.0f64;
    let k = 500;
    let step = (1.0 - 1e-3) / k as f64;
    for n in 1..=10 {
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (
                    1e-3 + step * (i as f64 + 0.5),
                    1e-3 + step * (j as f64 + 0.5),
                );
                if a * a + b * b >= 1.0 - 1e-3 {
                    continue;
                }
                let r = circle_inflection_residual(a, b, n);
                interior_zero |= !(r > 0.0);
                min_abs = min_abs.min(r.abs());
            }
            let u = -0.999 + 1.998 * i as f64 / (k - 1) as f64;
            axis = axis
                .max(circle_inflection_residual(0.0, u, n).abs())
                .max(circle_inflection_residual(u, 0.0, n).abs());
        }
    }
    verdict(
        !interior_zero && axis < 1e-14,
        format!("grid residual > 0 everywhere (min {min_abs:.2e}); max on axes {axis:.1e}"),
    )
}

/// Accuracy of an axis iterate once it has converged: a few hundred ulps of
/// the table scale, from the conditioning of a near rank-one matrix power.
const ROUNDING_FLOOR: f64 = 1e-12;

/// `O_n` of a unit circle from the closed form `1 / h^n(x) = 1 / x - 2n`.
fn circle_axis_oracle(x0: f64, n: u32) -> Option<f64> {
    let den = 1.0 - 2.0 * n as f64 * x0;
    (den != 0.0).then(|| if n.is_multiple_of(2) { 1.0 } else { -1.0 } * x0 / den)
}

fn c6_mobius() -> Verdict {
    let t = ConicTable::new(2.0, 1.0).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    let mut worst = 0.0f64;
    for x0 in [0.1, 0.2, 1.0, 1.8] {
        for n in 1..=6 {
            let (fwd, back) = iterate_axis_cusps(&t, x0, n, Axis::Major).unwrap();
            let found = find_cusps(&caustic(&t, Point::new(x0, 0.0), n, 4096).unwrap()).unwrap();
            for p in [fwd, back] {
                let gap = found
                    .iter()
                    .map(|c| c.location.distance(p))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(gap);
                if gap > 1e-5 * t.a() {
                    ok = false;
                    notes.push(format!("x0={x0} n={n} gap {gap:.1e}"));
                }
            }
        }
        // O_2n -> -F: strictly closer each step until the distance reaches
        // the rounding floor of the normalized matrix power, then stays there
        let focus = -t.c();
        let mut last = f64::INFINITY;
        for n in 1..=10 {
            let (fwd, _) = iterate_axis_cusps(&t, x0, 2 * n, Axis::Major).unwrap();
            let d = fwd.finite().map_or(f64::INFINITY, |q| (q.x - focus).abs());
            let settled = last < ROUNDING_FLOOR && d < ROUNDING_FLOOR;
            if !(d < last || settled) {
                ok = false;
                notes.push(format!("x0={x0}: O_{} moves away from -F", 2 * n));
            }
            last = d;
        }
        if last > 1e-6 {
            ok = false;
            notes.push(format!("x0={x0}: O_20 still {last:.1e} from -F"));
        }
    }
    // unit circle: O_n -> 0 with |O_n| eventually decreasing
    let circle = ConicTable::circle(1.0).unwrap();
    for x0 in [0.1, 0.3, 0.7] {
        let norms: Vec<f64> = (1..=2000)
            .map(|n| {
                let (fwd, _) = iterate_axis_cusps(&circle, x0, n, Axis::Major).unwrap();
                let oracle = circle_axis_oracle(x0, n);
                let got = fwd.finite().map(|q| q.x);
                match (got, oracle) {
                    (Some(g), Some(o)) if (g - o).abs() <= 1e-12 * (1.0 + o.abs()) => g.abs(),
                    (None, None) => f64::INFINITY,
                    _ => f64::NAN,
                }
            })
            .collect();
        let n0 = (2.0 / x0).ceil() as usize;
        let decreasing = norms[n0..].windows(2).all(|w| w[1] < w[0]);
        if norms.iter().any(|v| v.is_nan()) || !decreasing || norms[1999] > 1e-3 {
            ok = false;
            notes.push(format!("circle x0={x0}: not decreasing to 0"));
        }
    }
    let detail = if ok {
        format!("48 iterates match detected cusps (worst {worst:.1e}); O_2n -> -F monotonically; circle O_n -> 0")
    } else {
        notes.join("; ")
    };
    verdict(ok, detail)
}

fn c7_rotation() -> Verdict {
    let t = ConicTable::new(2.0, 1.0).unwrap();
    let g = mobius_g(&t);
    let fp = fixed_point_analysis(&g);
    let angle = fp.rotation_angle.unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let y = rng.gen_range(-1.0..1.0);
        let mut v = AxisCoord::Finite(y);
        for _ in 0..3 {
            v = g.apply(v);
        }
        worst = worst.max(v.finite().map_or(f64::INFINITY, |z| (z - y).abs()));
    }
    let ok =
        fp.class == MobiusClass::Elliptic && (angle - TAU / 3.0).abs() < 1e-10 && worst < 1e-10;
    verdict(
        ok,
        format!(
            "g {:?}, rotation angle - 2pi/3 = {:.1e}, max |g^3(y) - y| = {worst:.1e}",
            fp.class,
            angle - TAU / 3.0
        ),
    )
}

fn c8_external() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    let circle = ConicTable::circle(1.0).unwrap();
    for n in 1..=2 {
        let [fwd, back] = external_caustic(&circle, Point::new(2.0, 0.0), n, 4096).unwrap();
        let mut on_line: Vec<f64> = Vec::new();
        for c in [&fwd, &back] {
            for k in find_cusps(c).unwrap() {
                if let Some(q) = k.location.finite().filter(|q| q.y.abs() < 1e-6) {
                    on_line.push(q.x);
                }
            }
        }
        on_line.sort_by(f64::total_cmp);
        let mut expected = [
            circle_axis_oracle(2.0, n).unwrap(),
            -circle_axis_oracle(-2.0, n).unwrap(),
        ];
        expected.sort_by(f64::total_cmp);
        let agree = on_line.len() == 2
            && on_line
                .iter()
                .zip(&expected)
                .all(|(x, e)| (x - e).abs() < 1e-5);
        ok &= agree;
        notes.push(format!("circle n={n}: on-line cusps {on_line:.6?}"));
    }
    // confocal hyperbola through O: roots of the quadratic in lambda
    let (a, b, o) = (2.0f64, 1.0f64, Point::new(3.0, 0.5));
    let s = a * a + b * b - o.x * o.x - o.y * o.y;
    let p = a * a * b * b - o.x * o.x * b * b - o.y * o.y * a * a;
    let lam = 0.5 * (s + (s * s - 4.0 * p).sqrt());
    let hyperbola = if lam > b * b && lam < a * a {
        lam
    } else {
        0.5 * (s - (s * s - 4.0 * p).sqrt())
    };
    let residual = |q: Point| {
        let f = q.x * q.x / (a * a - hyperbola) + q.y * q.y / (b * b - hyperbola) - 1.0;
        let grad = Point::new(
            2.0 * q.x / (a * a - hyperbola),
            2.0 * q.y / (b * b - hyperbola),
        );
        f.abs() / grad.norm()
    };
    let t = ConicTable::new(a, b).unwrap();
    let families = external_caustic(&t, o, 1, 4096).unwrap();
    let on_hyperbola = families
        .iter()
        .flat_map(|c| find_cusps(c).unwrap())
        .filter_map(|k| k.location.finite())
        .filter(|q| residual(*q) < 1e-5)
        .count();
    ok &= on_hyperbola == 2;
    notes.push(format!(
        "ellipse: {on_hyperbola} cusps on the hyperbola lambda = {hyperbola:.6}"
    ));
    verdict(ok, notes.join("; "))
}

fn c9_refraction() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for mu in [1.5, 2.0, 3.0] {
        let rc = refraction_caustic(&RefractionSetup::new(mu, 1.0).unwrap(), 4096).unwrap();
        let radii = rc.off_axis_radii();
        ok &= radii.len() == 2 && radii.iter().all(|r| (r - 1.0 / mu).abs() < 1e-5);
        notes.push(format!("mu={mu}: {radii:.8?}"));
    }
    verdict(ok, notes.join("; "))
}

fn cusp_shift(a: &[Cusp], b: &[Cusp]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .map(|c| {
            b.iter()
                .map(|k| k.location.distance(c.location))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn c10_robustness(circle: &[Vec<Cusp>], ellipse: &[Vec<Cusp>]) -> Verdict {
    let mut worst = 0.0f64;
    let unit = ConicTable::circle(1.0).unwrap();
    let mut k = 0;
    for d in CIRCLE_DS {
        for n in 1..=8 {
            let fine = find_cusps(&caustic(&unit, Point::new(d, 0.0), n, 8192).unwrap()).unwrap();
            worst = worst.max(cusp_shift(&circle[k], &fine));
            k += 1;
        }
    }
    let t = ConicTable::new(2.0, 1.0).unwrap();
    k = 0;
    for (x, y) in ELLIPSE_SOURCES {
        for n in 1..=5 {
            let fine = find_cusps(&caustic(&t, Point::new(x, y), n, 8192).unwrap()).unwrap();
            worst = worst.max(cusp_shift(&ellipse[k], &fine));
            k += 1;
        }
    }
    let identical = ["0.4,0", "0.8,0.3"].iter().all(|source| {
        let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
            .map(|_| {
                let dir = tempfile::TempDir::new().unwrap();
                let status = Command::new(env!("CARGO_BIN_EXE_caustics"))
                    .current_dir(dir.path())
                    .args([
                        "caustic", "--a", "2", "--b", "1", "--source", source, "--n", "3",
                    ])
                    .status()
                    .unwrap();
                assert!(status.success());
                (
                    std::fs::read(dir.path().join("caustic.csv")).unwrap(),
                    std::fs::read(dir.path().join("cusps.json")).unwrap(),
                )
            })
            .collect();
        runs[0] == runs[1]
    });
    verdict(
        worst < 1e-6 && identical,
        format!(
            "max cusp shift 4096 -> 8192 samples {worst:.1e}; CSV/JSON byte-identical: {identical}"
        ),
    )
}

fn main() {
    let mut circle = Vec::new();
    let mut ellipse = Vec::new();
    let mut failed = 0;
    let mut report =
        |k: usize, name: &str, limit: Option<f64>, run: &mut dyn FnMut() -> Verdict| {
            let start = Instant::now();
            let v = run();
            let secs = start.elapsed().as_secs_f64();
            let timing = match limit {
                Some(l) => format!("{secs:.2}s, budget {l}s"),
                None => format!("{secs:.2}s"),
            };
            let pass = v.pass && limit.is_none_or(|l| secs < l);
            if !pass {
                failed += 1;
            }
            println!(
                "criterion {k:>2} {:<4} {name}: {} ({timing})",
                if pass { "PASS" } else { "FAIL" },
                v.detail
            );
        };
    report(1, "lambda invariance", Some(1.0), &mut c1_lambda_invariance);
    report(2, "circle cusp count", Some(30.0), &mut || {
        c2_circle(&mut circle)
    });
    report(3, "ellipse predicted cusps", Some(120.0), &mut || {
        c3_ellipse(&mut ellipse)
    });
    report(4, "quadratic root structure", None, &mut c4_quadratic);
    report(5, "inflection residual grid", Some(10.0), &mut c5_grid);
    report(6, "Mobius cross-validation", None, &mut c6_mobius);
    report(7, "rotation of g", None, &mut c7_rotation);
    report(8, "exterior source", None, &mut c8_external);
    report(9, "refraction cusp radius", Some(5.0), &mut c9_refraction);
    report(10, "numerical robustness", None, &mut || {
        c10_robustness(&circle, &ellipse)
    });
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
