//! Cusps of caustics: detection, classification and the predicted cusps
//! carried by the rays tangent to the confocal conics through the source.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::axis::{axis_cusps, Axis};
use crate::family::{
    caustic, external_arc, external_caustic, local_jet, neighbours, Caustic, Domain,
};
use crate::geometry::{wrap, ConfocalParam, ConicTable, EnvelopePoint, Point, Ray};
use crate::roots::{bisect, rescan, sign_changes, touching_zeros, Rescan, ROOT_WIDTH};
use crate::{CausticError, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative tolerance of the cusp classification tests.
pub const CLASSIFY_TOL: f64 = 1e-6;
/// Classification stencil step as a fraction of the parameter domain.
pub const CLASSIFY_STEP: f64 = 1e-4;
/// Default match distance between predicted and detected cusps, per unit of
/// the semi-major axis.
pub const MATCH_TOL: f64 = 1e-5;
/// Relative level below which the cusp function counts as identically zero.
const FLAT_TOL: f64 = 1e-12;
/// Relative level below which a sampled zero of `H` is too close to a double
/// zero to be resolved.
const ROOT_TOUCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CuspOrder {
    /// A semicubical (2-)cusp.
    Ordinary,
    /// The tests failed; the measured quantities are kept. For a finite cusp
    /// these are `|G'|`, `|G''|` and `det(G'', G''')`; for a cusp at infinity
    /// `alpha_s`, `d2alpha/dp2` and `d3alpha/dp3`.
    Unresolved { first: f64, second: f64, third: f64 },
}

impl CuspOrder {
    /// `Some(2)` for an ordinary cusp.
    pub fn order(&self) -> Option<u32> {
        match self {
            CuspOrder::Ordinary => Some(2),
            CuspOrder::Unresolved { .. } => None,
        }
    }

    pub fn is_ordinary(&self) -> bool {
        matches!(self, CuspOrder::Ordinary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp {
    pub s: f64,
    pub location: EnvelopePoint,
    pub order: CuspOrder,
    /// The confocal conic of a prediction this cusp was matched to.
    pub lambda_tag: Option<ConfocalParam>,
    pub predicted: bool,
    pub match_distance: Option<f64>,
}

fn normalize(domain: Domain, s: f64) -> f64 {
    match domain {
        Domain::Periodic { start, period } => start + wrap(s - start, period),
        Domain::Interval { .. } => s,
    }
}

/// All cusps of a caustic: the sign changes of the cusp function, refined by
/// bisection on locally computed derivatives and classified.
pub fn find_cusps(caustic: &Caustic) -> Result<Vec<Cusp>> {
    find_cusps_with(caustic, CLASSIFY_TOL)
}

/// [`find_cusps`] with an explicit classification tolerance.
pub fn find_cusps_with(caustic: &Caustic, tol: f64) -> Result<Vec<Cusp>> {
    if caustic.n == 0 {
        return Err(CausticError::DegeneratePencil);
    }
    let samples = caustic.family.samples();
    let h = &caustic.cusp_function;
    let closed = caustic.is_closed();
    let size = samples
        .iter()
        .map(|f| {
            let j = f.jet;
            (j.ray.p * j.alpha_s.powi(3)).abs()
                + (j.p_ss * j.alpha_s).abs()
                + (j.p_s * j.alpha_ss).abs()
        })
        .fold(0.0f64, f64::max);
    let peak = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak <= FLAT_TOL * size || peak == 0.0 {
        return Err(CausticError::DegeneratePencil);
    }
    let domain = caustic.family.generator().domain();
    let count = samples.len();
    let spacing = match domain {
        Domain::Periodic { period, .. } => period / count as f64,
        Domain::Interval { start, end } => (end - start) / (count - 1) as f64,
    };
    let within = |s: f64| match domain {
        Domain::Periodic { .. } => true,
        Domain::Interval { start, end } => s >= start && s <= end,
    };
    let value = |s: f64| caustic.evaluate(s).map(|(_, v)| v);
    let mut brackets: Vec<(f64, f64)> = sign_changes(h, closed)
        .into_iter()
        .map(|i| {
            let hi = if i + 1 < count {
                samples[i + 1].s
            } else {
                samples[0].s + domain.length()
            };
            (samples[i].s, hi)
        })
        .collect();
    for i in touching_zeros(h, closed, ROOT_TOUCH_TOL) {
        let (lo, hi) = neighbours(caustic, i);
        match rescan(value, lo, hi, ROOT_TOUCH_TOL * peak)? {
            Rescan::Brackets(b) => brackets.extend(b.into_iter().map(|(lo, hi, _)| (lo, hi))),
            Rescan::Clear => {}
            Rescan::Touch => return Err(CausticError::UnresolvedRoot { s: samples[i].s }),
        }
    }
    let mut roots: Vec<f64> = Vec::new();
    for (mut lo, mut hi) in brackets {
        let mut f_lo = value(lo)?;
        let mut f_hi = value(hi)?;
        let mut widen = 0;
        while (f_lo >= 0.0) == (f_hi >= 0.0) {
            widen += 1;
            if widen > 3 || !within(lo - spacing) || !within(hi + spacing) {
                return Err(CausticError::UnresolvedRoot {
                    s: normalize(domain, 0.5 * (lo + hi)),
                });
            }
            lo -= spacing;
            hi += spacing;
            f_lo = value(lo)?;
            f_hi = value(hi)?;
        }
        let root = normalize(domain, bisect(value, lo, hi, f_lo, ROOT_WIDTH)?);
        let duplicate = roots.iter().any(|&r| {
            let d = (r - root).abs();
            let d = match domain {
                Domain::Periodic { period, .. } => d.min(period - d),
                Domain::Interval { .. } => d,
            };
            d < 10.0 * ROOT_WIDTH
        });
        if !duplicate {
            roots.push(root);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
        .into_iter()
        .map(|s| {
            let (location, _) = caustic.evaluate(s)?;
            let mut cusp = Cusp {
                s,
                location,
                order: CuspOrder::Unresolved {
                    first: f64::NAN,
                    second: f64::NAN,
                    third: f64::NAN,
                },
                lambda_tag: None,
                predicted: false,
                match_distance: None,
            };
            cusp.order = classify_cusp_with(caustic, &cusp, tol);
            Ok(cusp)
        })
        .collect()
}

/// Length scale of a caustic, used to make the classification thresholds
/// dimensionless.
fn length_scale(caustic: &Caustic) -> f64 {
    match caustic.table {
        Some(t) => t.a(),
        None => 1.0,
    }
}

/// Ordinary-cusp test with the default tolerance.
pub fn classify_cusp(caustic: &Caustic, cusp: &Cusp) -> CuspOrder {
    classify_cusp_with(caustic, cusp, CLASSIFY_TOL)
}

/// Ordinary-cusp test.
///
/// A finite cusp is ordinary when, with `G` the envelope, `|G'| < tol |G''| L`
/// (`L` the parameter domain length) up to the estimated discretization error
/// of `G'`, `|G''| > tol` in units of the table,
/// and `|det(G'', G''')| > tol |G''| |G'''|`. The derivatives come from
/// five-point stencils with step `CLASSIFY_STEP * L` and one Richardson
/// halving.
///
/// A cusp at infinity is tested in the chart `alpha(p)` of the family curve,
/// where it is ordinary when `alpha` has a simple inflection:
/// `d2alpha/dp2 = 0` and `d3alpha/dp3 != 0`.
pub fn classify_cusp_with(caustic: &Caustic, cusp: &Cusp, tol: f64) -> CuspOrder {
    let result = match cusp.location {
        EnvelopePoint::Finite(_) => classify_finite(caustic, cusp.s, tol),
        EnvelopePoint::AtInfinity { .. } => classify_at_infinity(caustic, cusp.s, tol),
    };
    result.unwrap_or(CuspOrder::Unresolved {
        first: f64::NAN,
        second: f64::NAN,
        third: f64::NAN,
    })
}

struct Derivs {
    d1: Point,
    d2: Point,
    d3: Point,
}

fn stencil<F>(f: &F, s: f64, h: f64) -> Result<Derivs>
where
    F: Fn(f64) -> Result<Point>,
{
    let m2 = f(s - 2.0 * h)?;
    let m1 = f(s - h)?;
    let c = f(s)?;
    let p1 = f(s + h)?;
    let p2 = f(s + 2.0 * h)?;
    let comb = |w: [f64; 5], k: f64| {
        Point::new(
            (w[0] * m2.x + w[1] * m1.x + w[2] * c.x + w[3] * p1.x + w[4] * p2.x) / k,
            (w[0] * m2.y + w[1] * m1.y + w[2] * c.y + w[3] * p1.y + w[4] * p2.y) / k,
        )
    };
    Ok(Derivs {
        d1: comb([1.0, -8.0, 0.0, 8.0, -1.0], 12.0 * h),
        d2: comb([-1.0, 16.0, -30.0, 16.0, -1.0], 12.0 * h * h),
        d3: comb([-1.0, 2.0, 0.0, -2.0, 1.0], 2.0 * h * h * h),
    })
}

fn extrapolate(coarse: Point, fine: Point, order: i32) -> Point {
    let k = 2f64.powi(order);
    Point::new(
        (k * fine.x - coarse.x) / (k - 1.0),
        (k * fine.y - coarse.y) / (k - 1.0),
    )
}

fn classify_finite(caustic: &Caustic, s: f64, tol: f64) -> Result<CuspOrder> {
    let domain = caustic.family.generator().domain();
    let len = domain.length();
    let h = CLASSIFY_STEP * len;
    let gamma = |t: f64| match caustic.evaluate(t)?.0 {
        EnvelopePoint::Finite(q) => Ok(q),
        EnvelopePoint::AtInfinity { .. } => Err(CausticError::UnresolvedRoot { s: t }),
    };
    let coarse = stencil(&gamma, s, h)?;
    let fine = stencil(&gamma, s, 0.5 * h)?;
    let d1 = extrapolate(coarse.d1, fine.d1, 4);
    let d2 = extrapolate(coarse.d2, fine.d2, 4);
    let d3 = extrapolate(coarse.d3, fine.d3, 2);
    let scale = length_scale(caustic);
    let first = d1.norm();
    let second = d2.norm();
    let det = d2.x * d3.y - d2.y * d3.x;
    // discretization error of the first derivative, estimated from the halving
    let slack = Point::new(fine.d1.x - coarse.d1.x, fine.d1.y - coarse.d1.y).norm();
    let ordinary = first < tol * second * len + slack
        && second > tol * scale
        && det.abs() > tol * second * d3.norm();
    Ok(if ordinary {
        CuspOrder::Ordinary
    } else {
        CuspOrder::Unresolved {
            first,
            second,
            third: det,
        }
    })
}

fn classify_at_infinity(caustic: &Caustic, s: f64, tol: f64) -> Result<CuspOrder> {
    let generator = caustic.family.generator().as_ref();
    let h = CLASSIFY_STEP * caustic.family.generator().domain().length();
    let jet = local_jet(generator, s)?;
    let lo = local_jet(generator, s - h)?;
    let hi = local_jet(generator, s + h)?;
    let alpha_sss = (hi.alpha_ss - lo.alpha_ss) / (2.0 * h);
    let scale = length_scale(caustic);
    let p_s = jet.p_s;
    // with alpha_s = 0: d2alpha/dp2 = alpha_ss / p_s^2, d3alpha/dp3 = alpha_sss / p_s^3
    let second = jet.alpha_ss / (p_s * p_s) * scale * scale;
    let third = alpha_sss / (p_s * p_s * p_s) * scale * scale * scale;
    let first = jet.alpha_s;
    // the residual second derivative left by locating the root to ROOT_WIDTH
    let slack = alpha_sss.abs() * ROOT_WIDTH / (p_s * p_s) * scale * scale;
    let ordinary = p_s.abs() > tol * scale
        && second.abs() <= slack + tol.sqrt() * third.abs()
        && third.abs() > tol;
    Ok(if ordinary {
        CuspOrder::Ordinary
    } else {
        CuspOrder::Unresolved {
            first,
            second,
            third,
        }
    })
}

/// A cusp predicted by the tangent-ray construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedCusp {
    /// The initial ray from the source, tangent to `conic`.
    pub initial: Ray,
    /// The same ray after `n` reflections.
    pub ray: Ray,
    pub point: EnvelopePoint,
    pub conic: ConfocalParam,
}

fn rotate(point: EnvelopePoint, angle: f64) -> EnvelopePoint {
    match point {
        EnvelopePoint::Finite(q) => {
            let (s, c) = angle.sin_cos();
            EnvelopePoint::Finite(Point::new(c * q.x - s * q.y, s * q.x + c * q.y))
        }
        EnvelopePoint::AtInfinity { direction } => EnvelopePoint::AtInfinity {
            direction: wrap(direction + angle, PI),
        },
    }
}

/// Cusp carried by a ray along a symmetry line: the mirror-equation iterate.
/// `positive` selects the ray leaving along the line direction.
fn axis_prediction(
    table: &ConicTable,
    o: Point,
    direction: f64,
    positive: bool,
    n: u32,
) -> EnvelopePoint {
    let (fwd, back) = if table.is_circle() {
        // rotate the source onto the positive x-axis
        let d = o.x * direction.cos() + o.y * direction.sin();
        let (f, b) = axis_cusps(table, d, n, Axis::Major);
        (rotate(f, direction), rotate(b, direction))
    } else if direction == 0.0 {
        axis_cusps(table, o.x, n, Axis::Major)
    } else {
        axis_cusps(table, o.y, n, Axis::Minor)
    };
    if positive {
        fwd
    } else {
        back
    }
}

fn predict(
    table: &ConicTable,
    o: Point,
    initial: Ray,
    conic: ConfocalParam,
    positive: bool,
    n: u32,
) -> Result<PredictedCusp> {
    let ray = table.reflect_n(initial, n)?;
    let point = match conic.axis_direction() {
        Some(direction) => axis_prediction(table, o, direction, positive, n),
        None => table.tangency_point(&ray, &conic)?,
    };
    Ok(PredictedCusp {
        initial,
        ray,
        point,
        conic,
    })
}

/// The four cusps of the `n`-th caustic from an interior source carried by
/// the rays tangent to the confocal ellipse and hyperbola through it.
/// Ellipse predictions come first.
pub fn predicted_cusps(table: &ConicTable, o: Point, n: u32) -> Result<[PredictedCusp; 4]> {
    let rays = table.tangent_rays_at(o)?;
    let mut out = [None; 4];
    for (i, t) in rays.iter().enumerate() {
        out[i] = Some(predict(table, o, t.ray, t.conic, i % 2 == 0, n)?);
    }
    Ok(out.map(|p| p.expect("four predictions")))
}

/// A pairing of prediction `predicted` with detected cusp `detected`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspMatch {
    pub predicted: usize,
    pub detected: usize,
    pub distance: f64,
}

/// Mutually unique nearest matching: pairs are taken in order of increasing
/// distance, then increasing `s`, and each side is used at most once.
pub fn match_cusps(
    predicted: &[EnvelopePoint],
    detected: &[Cusp],
    tol: f64,
) -> Vec<Option<CuspMatch>> {
    let mut pairs: Vec<CuspMatch> = Vec::new();
    for (i, p) in predicted.iter().enumerate() {
        for (j, d) in detected.iter().enumerate() {
            let distance = p.distance(d.location);
            if distance <= tol {
                pairs.push(CuspMatch {
                    predicted: i,
                    detected: j,
                    distance,
                });
            }
        }
    }
    pairs.sort_by(|x, y| {
        x.distance
            .total_cmp(&y.distance)
            .then(detected[x.detected].s.total_cmp(&detected[y.detected].s))
    });
    let mut out = alloc::vec![None; predicted.len()];
    let mut used = alloc::vec![false; detected.len()];
    for m in pairs {
        if out[m.predicted].is_none() && !used[m.detected] {
            out[m.predicted] = Some(m);
            used[m.detected] = true;
        }
    }
    out
}

fn tag(detected: &mut [Cusp], matches: &[Option<CuspMatch>], conics: &[ConfocalParam]) {
    for m in matches.iter().flatten() {
        let c = &mut detected[m.detected];
        c.predicted = true;
        c.lambda_tag = Some(conics[m.predicted]);
        c.match_distance = Some(m.distance);
    }
}

/// Outcome of checking the predicted cusps against a computed caustic.
#[derive(Debug, Clone)]
pub struct PredictionReport {
    pub predicted: Vec<PredictedCusp>,
    pub detected: Vec<Cusp>,
    /// One entry per prediction.
    pub matches: Vec<Option<CuspMatch>>,
    /// For a circle: whether exactly four cusps were detected, all ordinary.
    pub circle_count: Option<bool>,
    pub error: Option<CausticError>,
    pub pass: bool,
}

impl PredictionReport {
    fn failed(error: CausticError) -> Self {
        PredictionReport {
            predicted: Vec::new(),
            detected: Vec::new(),
            matches: Vec::new(),
            circle_count: None,
            error: Some(error),
            pass: false,
        }
    }
}

/// A caustic from an interior source with its cusps matched to the four
/// predictions.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub caustic: Caustic,
    pub predicted: [PredictedCusp; 4],
    /// Detected cusps, tagged with the prediction they match.
    pub cusps: Vec<Cusp>,
    pub matches: Vec<Option<CuspMatch>>,
}

/// Computes the `n`-th caustic from `o`, finds and classifies its cusps with
/// tolerance `classify_tol`, and matches them to the predictions within
/// `match_tol`.
pub fn analyze(
    table: &ConicTable,
    o: Point,
    n: u32,
    samples: usize,
    match_tol: f64,
    classify_tol: f64,
) -> Result<Analysis> {
    let c = caustic(table, o, n, samples)?;
    let predicted = predicted_cusps(table, o, n)?;
    let mut cusps = find_cusps_with(&c, classify_tol)?;
    let points: Vec<EnvelopePoint> = predicted.iter().map(|p| p.point).collect();
    let conics: Vec<ConfocalParam> = predicted.iter().map(|p| p.conic).collect();
    let matches = match_cusps(&points, &cusps, match_tol);
    tag(&mut cusps, &matches, &conics);
    Ok(Analysis {
        caustic: c,
        predicted,
        cusps,
        matches,
    })
}

/// Computes the `n`-th caustic from `o`, finds its cusps and matches the four
/// predictions within `tol`. Passes when all four are matched and, for a
/// circle, exactly four ordinary cusps are found. Extra cusps on a
/// non-circular table are reported but do not fail the check.
pub fn verify_predictions(
    table: &ConicTable,
    o: Point,
    n: u32,
    samples: usize,
    tol: f64,
) -> PredictionReport {
    match analyze(table, o, n, samples, tol, CLASSIFY_TOL) {
        Ok(a) => {
            let circle_count = table
                .is_circle()
                .then(|| a.cusps.len() == 4 && a.cusps.iter().all(|c| c.order.is_ordinary()));
            let pass = a.matches.iter().all(Option::is_some) && circle_count != Some(false);
            PredictionReport {
                predicted: a.predicted.to_vec(),
                detected: a.cusps,
                matches: a.matches,
                circle_count,
                error: None,
                pass,
            }
        }
        Err(e) => PredictionReport::failed(e),
    }
}

/// For a source outside the table, the cusps carried by the lines through it
/// tangent to the confocal hyperbola through it, one per orientation family
/// (forward first). `None` where that line misses the table.
pub fn predicted_external_cusps(
    table: &ConicTable,
    o: Point,
    n: u32,
) -> Result<[Option<PredictedCusp>; 2]> {
    let (start, end) = external_arc(table, o)?;
    let (_, hyperbola) = table.confocal_pair(o)?;
    let [r1, r2] = table.rays_tangent_to(o, hyperbola);
    let mut out = [None, None];
    for (k, t) in [r1, r2].iter().enumerate() {
        let offset = |alpha: f64| wrap(alpha - start, 2.0 * PI);
        let slot = if offset(t.ray.alpha) < end - start {
            0
        } else if offset(t.ray.alpha - PI) < end - start {
            1
        } else {
            continue;
        };
        out[slot] = Some(predict(table, o, t.ray, t.conic, k == 0, n)?);
    }
    Ok(out)
}

/// Outcome of the exterior-source check: per orientation family, the cusps
/// found and their match with the prediction of that family.
#[derive(Debug, Clone)]
pub struct ExternalReport {
    pub predicted: [Option<PredictedCusp>; 2],
    pub detected: [Vec<Cusp>; 2],
    pub matches: [Option<CuspMatch>; 2],
    pub error: Option<CausticError>,
    pub pass: bool,
}

/// The two caustics of an exterior source with their cusps matched to the
/// per-family predictions.
#[derive(Debug, Clone)]
pub struct ExternalAnalysis {
    pub caustics: [Caustic; 2],
    pub predicted: [Option<PredictedCusp>; 2],
    pub cusps: [Vec<Cusp>; 2],
    pub matches: [Option<CuspMatch>; 2],
}

pub fn analyze_external(
    table: &ConicTable,
    o: Point,
    n: u32,
    samples: usize,
    match_tol: f64,
    classify_tol: f64,
) -> Result<ExternalAnalysis> {
    let caustics = external_caustic(table, o, n, samples)?;
    let predicted = predicted_external_cusps(table, o, n)?;
    let mut cusps = [
        find_cusps_with(&caustics[0], classify_tol)?,
        find_cusps_with(&caustics[1], classify_tol)?,
    ];
    let mut matches = [None, None];
    for k in 0..2 {
        if let Some(p) = predicted[k] {
            let m = match_cusps(&[p.point], &cusps[k], match_tol);
            tag(&mut cusps[k], &m, &[p.conic]);
            matches[k] = m[0];
        }
    }
    Ok(ExternalAnalysis {
        caustics,
        predicted,
        cusps,
        matches,
    })
}

/// Exterior analogue of [`verify_predictions`]: every existing prediction must
/// be matched by a detected cusp of its family.
pub fn verify_external(
    table: &ConicTable,
    o: Point,
    n: u32,
    samples: usize,
    tol: f64,
) -> ExternalReport {
    match analyze_external(table, o, n, samples, tol, CLASSIFY_TOL) {
        Ok(a) => {
            let pass = a.predicted.iter().any(Option::is_some)
                && (0..2).all(|k| a.predicted[k].is_none() || a.matches[k].is_some());
            ExternalReport {
                predicted: a.predicted,
                detected: a.cusps,
                matches: a.matches,
                error: None,
                pass,
            }
        }
        Err(e) => ExternalReport {
            predicted: [None, None],
            detected: [Vec::new(), Vec::new()],
            matches: [None, None],
            error: Some(e),
            pass: false,
        },
    }
}

/// Inflection residual of the image of a pencil in a circular table, in the
/// normalized position where the source ray is `(alpha, p) = (0, -b)` with
/// slope `a`:
///
/// ```text
/// b - b (1 - 2an / sqrt(1 - b^2))^3 - 2 a^3 b n / (1 - b^2)^(3/2)
/// ```
pub fn circle_inflection_residual(a: f64, b: f64, n: u32) -> f64 {
    let n = n as f64;
    let w2 = 1.0 - b * b;
    let w = w2.sqrt();
    let k = 1.0 - 2.0 * a * n / w;
    b - b * k * k * k - 2.0 * a * a * a * b * n / (w2 * w)
}

/// Real roots of `(4n^2 - 1) x^2 - 6n x + 3 = 0`, the quadratic governing
/// both the off-axis inflections and the on-axis degenerate cusps of a circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleQuadratic {
    pub n: u32,
    /// `36 n^2 - 12 (4 n^2 - 1) = 12 (1 - n^2)`, computed exactly.
    pub discriminant: i128,
    pub roots: Vec<f64>,
}

pub fn circle_quadratic(n: u32) -> CircleQuadratic {
    let m = n as i128;
    let qa = 4 * m * m - 1;
    let qb = -6 * m;
    let qc = 3;
    let discriminant = qb * qb - 4 * qa * qc;
    let (fa, fb) = (qa as f64, qb as f64);
    let roots = match discriminant.signum() {
        0 => alloc::vec![-fb / (2.0 * fa)],
        1 => {
            let r = (discriminant as f64).sqrt();
            let (x1, x2) = ((-fb - r) / (2.0 * fa), (-fb + r) / (2.0 * fa));
            alloc::vec![x1.min(x2), x1.max(x2)]
        }
        _ => Vec::new(),
    };
    CircleQuadratic {
        n,
        discriminant,
        roots,
    }
}

/// The quadratic in the normalized off-axis slope `x = a / sqrt(1 - b^2)` and
/// the one in the on-axis source distance `a`; they coincide.
pub fn circle_quadratics(n: u32) -> (CircleQuadratic, CircleQuadratic) {
    (circle_quadratic(n), circle_quadratic(n))
}

/// Inflection residual of the image `(alpha + phi(p), p)` of a curve
/// `p(alpha)` with 2-jets `(p0, p1, p2)` and `(phi0, phi1, phi2)`:
/// `p2 + p0 (1 + p1 phi1)^3 - p1^3 phi2`. It vanishes exactly when the image
/// point is an inflection.
pub fn inflection_condition(p0: f64, p1: f64, p2: f64, _phi0: f64, phi1: f64, phi2: f64) -> f64 {
    let k = 1.0 + p1 * phi1;
    p2 + p0 * k * k * k - p1 * p1 * p1 * phi2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Derivatives, LineFamily, RayFamily, RayJet};
    use alloc::sync::Arc;
    use core::f64::consts::TAU;

    fn unit() -> ConicTable {
        ConicTable::circle(1.0).unwrap()
    }

    fn ellipse() -> ConicTable {
        ConicTable::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn circle_first_caustic_four_ordinary_cusps() {
        let c = caustic(&unit(), Point::new(0.4, 0.0), 1, 4096).unwrap();
        let cusps = find_cusps(&c).unwrap();
        assert_eq!(cusps.len(), 4);
        let mut on_axis = 0;
        let mut on_circle = 0;
        for k in &cusps {
            assert!(k.order.is_ordinary(), "{:?}", k);
            let q = k.location.finite().unwrap();
            if q.y.abs() < 1e-6 {
                on_axis += 1;
            }
            if (q.norm() - 0.4).abs() < 1e-5 {
                on_circle += 1;
            }
        }
        assert_eq!((on_axis, on_circle), (2, 2));
    }

    #[test]
    fn circle_predictions_on_axis() {
        let p = predicted_cusps(&unit(), Point::new(0.4, 0.0), 1).unwrap();
        let h_pos = p[2].point.finite().unwrap();
        let h_neg = p[3].point.finite().unwrap();
        assert!(h_pos.distance(Point::new(-2.0, 0.0)) < 1e-12);
        assert!(h_neg.distance(Point::new(-2.0 / 9.0, 0.0)) < 1e-12);
        for e in &p[..2] {
            assert!((e.point.finite().unwrap().norm() - 0.4).abs() < 1e-10);
        }
    }

    #[test]
    fn rotated_circle_source_predictions() {
        let th = 0.7f64;
        let o = Point::new(0.4 * th.cos(), 0.4 * th.sin());
        let p = predicted_cusps(&unit(), o, 1).unwrap();
        let q = p[2].point.finite().unwrap();
        assert!(q.distance(Point::new(-2.0 * th.cos(), -2.0 * th.sin())) < 1e-12);
    }

    #[test]
    fn ellipse_predictions_lie_on_their_conics() {
        let t = ellipse();
        for n in 1..6 {
            for p in predicted_cusps(&t, Point::new(0.8, 0.3), n).unwrap() {
                let q = p.point.finite().unwrap();
                assert!(t.conic_residual(&p.conic, q).abs() < 1e-8);
                assert!(p.ray.residual(q).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn predictions_hold_on_ellipse() {
        let t = ellipse();
        let r = verify_predictions(&t, Point::new(0.8, 0.3), 2, 4096, MATCH_TOL * t.a());
        assert!(r.pass, "{:?}", r);
        let r = verify_predictions(&t, Point::new(0.0, 0.4), 3, 4096, MATCH_TOL * t.a());
        assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn predictions_reject_focus() {
        let t = ellipse();
        assert_eq!(
            predicted_cusps(&t, t.foci()[1], 1).unwrap_err(),
            CausticError::FocusPoint
        );
    }

    #[test]
    fn matching_is_mutually_unique() {
        let mk = |x: f64, s: f64| Cusp {
            s,
            location: EnvelopePoint::Finite(Point::new(x, 0.0)),
            order: CuspOrder::Ordinary,
            lambda_tag: None,
            predicted: false,
            match_distance: None,
        };
        let detected = [mk(0.0, 1.0), mk(0.1, 2.0)];
        let predicted = [
            EnvelopePoint::Finite(Point::new(0.01, 0.0)),
            EnvelopePoint::Finite(Point::new(0.02, 0.0)),
        ];
        let m = match_cusps(&predicted, &detected, 0.5);
        assert_eq!(m[0].unwrap().detected, 0);
        assert_eq!(m[1].unwrap().detected, 1);
    }

    #[test]
    fn residual_vanishes_on_axes() {
        for n in 1..=10 {
            for k in 0..100 {
                let t = k as f64 / 101.0;
                assert_eq!(circle_inflection_residual(0.0, t, n), 0.0);
                assert_eq!(circle_inflection_residual(t, 0.0, n), 0.0);
            }
        }
    }

    #[test]
    fn residual_factorizes() {
        // 2nbx ((4n^2-1) x^2 - 6nx + 3) with x = a / sqrt(1-b^2)
        for &(a, b, n) in &[(0.3, 0.4, 1u32), (0.1, 0.9, 3), (0.6, 0.2, 7)] {
            let x = a / (1.0f64 - b * b).sqrt();
            let m = n as f64;
            let expect = 2.0 * m * b * x * ((4.0 * m * m - 1.0) * x * x - 6.0 * m * x + 3.0);
            let got = circle_inflection_residual(a, b, n);
            assert!((got - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn quadratic_roots() {
        let q1 = circle_quadratic(1);
        assert_eq!(q1.discriminant, 0);
        assert_eq!(q1.roots, alloc::vec![1.0]);
        for n in 2..50 {
            let q = circle_quadratic(n);
            let m = n as i128;
            assert_eq!(q.discriminant, 12 * (1 - m * m));
            assert!(q.roots.is_empty());
        }
    }

    #[test]
    fn inflection_condition_reduces() {
        for &(a, b, n) in &[(0.3, 0.4, 1u32), (0.1, 0.9, 3), (0.6, 0.2, 7)] {
            let w2 = 1.0f64 - b * b;
            let m = n as f64;
            let r = inflection_condition(
                -b,
                a,
                b,
                0.0,
                -2.0 * m / w2.sqrt(),
                2.0 * b * m / (w2 * w2.sqrt()),
            );
            assert!((r - circle_inflection_residual(a, b, n)).abs() < 1e-12);
        }
        assert_eq!(inflection_condition(0.3, 0.5, -0.3, 0.0, 0.0, 0.0), 0.0);
    }

    /// Brute-force inflection test: map points of the 2-jet curve, re-express
    /// the image as a graph over the new angle and measure `p'' + p` there.
    fn mapped_inflection(p: [f64; 3], phi: [f64; 3]) -> f64 {
        let pc = |e: f64| p[0] + p[1] * e + 0.5 * p[2] * e * e;
        let ph = |d: f64| phi[0] + phi[1] * d + 0.5 * phi[2] * d * d;
        let image = |e: f64| {
            let q = pc(e);
            (e + ph(q - p[0]), q)
        };
        // invert the image angle by Newton's method
        let p_at = |target: f64| {
            let mut e = target - phi[0];
            for _ in 0..60 {
                let (a, _) = image(e);
                let h = 1e-7;
                let slope = (image(e + h).0 - image(e - h).0) / (2.0 * h);
                e -= (a - target) / slope;
            }
            image(e).1
        };
        let h = 1e-4;
        let a0 = phi[0];
        let second = (p_at(a0 + h) - 2.0 * p_at(a0) + p_at(a0 - h)) / (h * h);
        second + p_at(a0)
    }

    #[test]
    fn inflection_condition_matches_jet_composition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let phi = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let k = 1.0 + p[1] * phi[1];
            if f64::abs(k) < 0.2 {
                continue;
            }
            let residual = inflection_condition(p[0], p[1], p[2], phi[0], phi[1], phi[2]);
            let brute = mapped_inflection(p, phi);
            assert!(
                (residual / (k * k * k) - brute).abs() < 1e-5,
                "{} vs {}",
                residual / (k * k * k),
                brute
            );
        }
    }

    struct Degenerate;

    impl RayFamily for Degenerate {
        fn domain(&self) -> Domain {
            Domain::Periodic {
                start: 0.0,
                period: TAU,
            }
        }

        fn ray(&self, s: f64) -> Result<Ray> {
            Ok(Ray::new(s, 1.0 + (2.0 * s).cos() / 3.0))
        }

        fn exact_jet(&self, s: f64) -> Option<Result<RayJet>> {
            let c = (2.0 * s).cos();
            let sn = (2.0 * s).sin();
            Some(Ok(RayJet {
                ray: Ray::new(s, 1.0 + c / 3.0),
                alpha_s: 1.0,
                p_s: -2.0 * sn / 3.0,
                alpha_ss: 0.0,
                p_ss: -4.0 * c / 3.0,
            }))
        }
    }

    #[test]
    fn degenerate_inflection_is_not_ordinary() {
        // p + p'' = 2 sin^2 s: double zeros at 0 and pi
        let family = LineFamily::sample(Arc::new(Degenerate), 1024, Derivatives::Auto).unwrap();
        let c = Caustic::from_family(family, EnvelopePoint::Finite(Point::ORIGIN), 1, None);
        assert!(matches!(
            find_cusps(&c),
            Err(CausticError::UnresolvedRoot { .. })
        ));
        let (location, h) = c.evaluate(0.0).unwrap();
        assert!(h.abs() < 1e-15);
        let cusp = Cusp {
            s: 0.0,
            location,
            order: CuspOrder::Ordinary,
            lambda_tag: None,
            predicted: false,
            match_distance: None,
        };
        assert_eq!(classify_cusp(&c, &cusp).order(), None);
    }

    #[test]
    fn cusp_at_infinity_is_ordinary() {
        // 1 - 2nd = 0 puts an on-axis cusp at infinity
        let c = caustic(&unit(), Point::new(0.25, 0.0), 2, 4096).unwrap();
        let cusps = find_cusps(&c).unwrap();
        assert_eq!(cusps.len(), 4);
        assert_eq!(
            cusps.iter().filter(|k| k.location.is_at_infinity()).count(),
            1
        );
        assert!(cusps.iter().all(|k| k.order.is_ordinary()), "{:?}", cusps);
    }

    #[test]
    fn external_circle_predictions_on_axis() {
        let p = predicted_external_cusps(&unit(), Point::new(2.0, 0.0), 1).unwrap();
        let pts: Vec<Point> = p
            .iter()
            .map(|x| x.unwrap().point.finite().unwrap())
            .collect();
        for q in &pts {
            assert!(q.y.abs() < 1e-12);
        }
        let mut xs: Vec<f64> = pts.iter().map(|q| q.x).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 0.4).abs() < 1e-12 && (xs[1] - 2.0 / 3.0).abs() < 1e-12);
    }
}
