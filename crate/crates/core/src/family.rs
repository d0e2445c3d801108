//! One-parameter families of rays and their envelopes.
//!
//! A family is a curve `s -> (alpha(s), p(s))` in the space of oriented lines.
//! Its envelope point at `s` is where the line meets its infinitesimal
//! neighbour; it runs off to infinity where `alpha_s` vanishes. Cusps of the
//! envelope sit at zeros of the cusp function
//!
//! ```text
//! H(s) = p * alpha_s^3 + p_ss * alpha_s - p_s * alpha_ss,
//! ```
//!
//! which is `(p + d^2p/dalpha^2) * alpha_s^3` written so that it stays finite at
//! vertical tangents.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use crate::geometry::{wrap, ConicTable, EnvelopePoint, Point, Ray};
use crate::jet::Jet2;
use crate::roots::{rescan, sign_changes, touching_zeros, Rescan};
use crate::{CausticError, ReflectFailure, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Default number of samples per family.
pub const DEFAULT_SAMPLES: usize = 4096;
/// Fewest samples accepted by [`caustic`].
pub const MIN_SAMPLES: usize = 512;
/// `|alpha_s|` below this turns an envelope point into a point at infinity.
pub const INFINITY_TOL: f64 = 1e-9;
/// Step of the five-point stencils used away from the sampling grid.
pub const STENCIL_STEP: f64 = 1e-3;
/// Parameter margin kept clear of the grazing ends of an external pencil.
pub const EXTERNAL_MARGIN: f64 = 1e-3;
/// Relative level at which a sampled function is said to touch zero.
pub const TOUCH_TOL: f64 = 1e-9;

/// A ray together with its first and second derivatives in the family parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayJet {
    pub ray: Ray,
    pub alpha_s: f64,
    pub p_s: f64,
    pub alpha_ss: f64,
    pub p_ss: f64,
}

impl RayJet {
    pub fn cusp_function(&self) -> f64 {
        let a1 = self.alpha_s;
        self.ray.p * a1 * a1 * a1 + self.p_ss * a1 - self.p_s * self.alpha_ss
    }

    /// `dp/dalpha`, or `None` at a vertical tangent.
    pub fn p_prime(&self) -> Option<f64> {
        (self.alpha_s.abs() >= INFINITY_TOL).then(|| self.p_s / self.alpha_s)
    }

    pub fn envelope(&self) -> EnvelopePoint {
        match self.p_prime() {
            Some(pp) => EnvelopePoint::Finite(envelope_point(self.ray.alpha, self.ray.p, pp)),
            None => EnvelopePoint::AtInfinity {
                direction: wrap(self.ray.alpha, PI),
            },
        }
    }
}

/// The envelope point of a family in support form: the solution of
/// `x sin a - y cos a = p` and `x cos a + y sin a = p'`.
pub fn envelope_point(alpha: f64, p: f64, p_prime: f64) -> Point {
    let (s, c) = alpha.sin_cos();
    Point::new(p * s + p_prime * c, -p * c + p_prime * s)
}

/// Parameter range of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `s` and `s + period` give the same line; `alpha` gains `winding * 2pi`.
    Periodic {
        start: f64,
        period: f64,
    },
    Interval {
        start: f64,
        end: f64,
    },
}

impl Domain {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Domain::Periodic { .. })
    }

    pub fn length(&self) -> f64 {
        match *self {
            Domain::Periodic { period, .. } => period,
            Domain::Interval { start, end } => end - start,
        }
    }

    /// `count` sample positions: uniform over one period, or including both
    /// ends of an interval.
    pub fn samples(&self, count: usize) -> Vec<f64> {
        match *self {
            Domain::Periodic { start, period } => (0..count)
                .map(|i| start + period * i as f64 / count as f64)
                .collect(),
            Domain::Interval { start, end } => {
                let last = (count.max(2) - 1) as f64;
                (0..count)
                    .map(|i| start + (end - start) * i as f64 / last)
                    .collect()
            }
        }
    }
}

/// A smooth one-parameter family of rays that can be evaluated anywhere in
/// its domain.
pub trait RayFamily: Send + Sync {
    fn domain(&self) -> Domain;

    fn ray(&self, s: f64) -> Result<Ray>;

    /// Closed-form derivatives, when the family has them.
    fn exact_jet(&self, _s: f64) -> Option<Result<RayJet>> {
        None
    }
}

impl fmt::Debug for dyn RayFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RayFamily")
            .field("domain", &self.domain())
            .finish_non_exhaustive()
    }
}

/// Second-order central differences with step `h`.
pub fn central_jet(family: &dyn RayFamily, s: f64, h: f64) -> Result<RayJet> {
    let lo = family.ray(s - h)?;
    let mid = family.ray(s)?;
    let hi = family.ray(s + h)?;
    Ok(RayJet {
        ray: mid,
        alpha_s: (hi.alpha - lo.alpha) / (2.0 * h),
        p_s: (hi.p - lo.p) / (2.0 * h),
        alpha_ss: (hi.alpha - 2.0 * mid.alpha + lo.alpha) / (h * h),
        p_ss: (hi.p - 2.0 * mid.p + lo.p) / (h * h),
    })
}

/// Fourth-order five-point stencils with step `h`.
pub fn stencil_jet(family: &dyn RayFamily, s: f64, h: f64) -> Result<RayJet> {
    let m2 = family.ray(s - 2.0 * h)?;
    let m1 = family.ray(s - h)?;
    let mid = family.ray(s)?;
    let p1 = family.ray(s + h)?;
    let p2 = family.ray(s + 2.0 * h)?;
    let d1 = |v: [f64; 5]| (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let d2 =
        |v: [f64; 5]| (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    let rays = [m2, m1, mid, p1, p2];
    let alpha = rays.map(|r| r.alpha - mid.alpha);
    let p = rays.map(|r| r.p);
    Ok(RayJet {
        ray: mid,
        alpha_s: d1(alpha),
        p_s: d1(p),
        alpha_ss: d2(alpha),
        p_ss: d2(p),
    })
}

/// The most accurate jet available at an arbitrary `s`: closed form if the
/// family has one, five-point stencils otherwise.
pub fn local_jet(family: &dyn RayFamily, s: f64) -> Result<RayJet> {
    match family.exact_jet(s) {
        Some(jet) => jet,
        None => stencil_jet(family, s, STENCIL_STEP),
    }
}

/// The pencil of rays through a point: `alpha = s`, `p = x sin s - y cos s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pencil {
    pub source: Point,
}

impl RayFamily for Pencil {
    fn domain(&self) -> Domain {
        Domain::Periodic {
            start: 0.0,
            period: TAU,
        }
    }

    fn ray(&self, s: f64) -> Result<Ray> {
        Ok(Ray::through(self.source, s))
    }

    fn exact_jet(&self, s: f64) -> Option<Result<RayJet>> {
        let (sn, cs) = s.sin_cos();
        let (x, y) = (self.source.x, self.source.y);
        let p = x * sn - y * cs;
        Some(Ok(RayJet {
            ray: Ray::new(s, p),
            alpha_s: 1.0,
            p_s: x * cs + y * sn,
            alpha_ss: 0.0,
            p_ss: -p,
        }))
    }
}

/// The lines through an exterior point that cross the table, all oriented
/// along `s` (`forward`) or all along `s + pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExternalPencil {
    pub source: Point,
    pub start: f64,
    pub end: f64,
    pub forward: bool,
}

impl RayFamily for ExternalPencil {
    fn domain(&self) -> Domain {
        Domain::Interval {
            start: self.start,
            end: self.end,
        }
    }

    fn ray(&self, s: f64) -> Result<Ray> {
        let alpha = if self.forward { s } else { s + PI };
        Ok(Ray::through(self.source, alpha))
    }

    fn exact_jet(&self, s: f64) -> Option<Result<RayJet>> {
        let jet = Pencil {
            source: self.source,
        }
        .exact_jet(s)?
        .ok()?;
        if self.forward {
            return Some(Ok(jet));
        }
        Some(Ok(RayJet {
            ray: jet.ray.reversed(),
            alpha_s: jet.alpha_s,
            p_s: -jet.p_s,
            alpha_ss: jet.alpha_ss,
            p_ss: -jet.p_ss,
        }))
    }
}

/// The image of a family after `n` reflections.
pub struct ImageFamily {
    pub table: ConicTable,
    pub base: Arc<dyn RayFamily>,
    pub n: u32,
}

impl RayFamily for ImageFamily {
    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn ray(&self, s: f64) -> Result<Ray> {
        let r = self.base.ray(s)?;
        self.table.reflect_n(r, self.n).map_err(|e| e.at_sample(s))
    }

    /// On a circle `alpha -> alpha + 2n acos(p/R)` with `p` fixed, so the
    /// derivatives follow from the chain rule. Other tables push the jet
    /// through each reflection.
    fn exact_jet(&self, s: f64) -> Option<Result<RayJet>> {
        let base = match self.base.exact_jet(s)? {
            Ok(j) => j,
            Err(e) => return Some(Err(e)),
        };
        if self.n == 0 {
            return Some(Ok(base));
        }
        if !self.table.is_circle() {
            let mut jet = base;
            for step in 1..=self.n {
                jet = match reflect_jet(&self.table, &jet) {
                    Ok(j) => j,
                    Err(CausticError::Reflect { failure, .. }) => {
                        return Some(Err(CausticError::Reflect {
                            failure,
                            step,
                            sample: Some(s),
                        }))
                    }
                    Err(e) => return Some(Err(e)),
                };
            }
            return Some(Ok(jet));
        }
        let n = self.n as f64;
        let r = self.table.a();
        let p = base.ray.p;
        let w2 = (r - p) * (r + p);
        if w2 < crate::geometry::GRAZE_TOL * r * r / 4.0 {
            let failure = if w2 < 0.0 {
                ReflectFailure::NoIntersection
            } else {
                ReflectFailure::Tangential
            };
            return Some(Err(CausticError::Reflect {
                failure,
                step: 1,
                sample: Some(s),
            }));
        }
        let w = w2.sqrt();
        Some(Ok(RayJet {
            ray: Ray::new(base.ray.alpha + 2.0 * n * (p / r).acos(), p),
            alpha_s: base.alpha_s - 2.0 * n * base.p_s / w,
            p_s: base.p_s,
            alpha_ss: base.alpha_ss
                - 2.0 * n * (base.p_ss / w + p * base.p_s * base.p_s / (w * w2)),
            p_ss: base.p_ss,
        }))
    }
}

/// One reflection of a ray together with its first and second derivatives,
/// following the exit point and the boundary normal through the chain rule.
pub fn reflect_jet(table: &ConicTable, jet: &RayJet) -> Result<RayJet> {
    let out = table.reflect(jet.ray)?;
    let (a2, b2) = (table.a() * table.a(), table.b() * table.b());
    let alpha = Jet2::new(jet.ray.alpha, jet.alpha_s, jet.alpha_ss);
    let p = Jet2::new(jet.ray.p, jet.p_s, jet.p_ss);
    let (sn, cs) = alpha.sin_cos();
    let fx = p * sn;
    let fy = -(p * cs);
    let qa = cs * cs / a2 + sn * sn / b2;
    let qb = (fx * cs / a2 + fy * sn / b2) * 2.0;
    let qc = fx * fx / a2 + fy * fy / b2 - 1.0;
    let root = (qb * qb - qa * qc * 4.0).sqrt();
    let t = if qb.v >= 0.0 {
        qc * 2.0 / (-qb - root)
    } else {
        (root - qb) / (qa * 2.0)
    };
    let qx = fx + t * cs;
    let qy = fy + t * sn;
    let (nx, ny) = (qx / a2, qy / b2);
    let norm = (nx * nx + ny * ny).sqrt();
    let (nx, ny) = (nx / norm, ny / norm);
    let dn = cs * nx + sn * ny;
    let turned = Jet2::atan2(sn - dn * ny * 2.0, cs - dn * nx * 2.0);
    // keep the unwrapped angle of the value, derivatives of the jet
    let alpha_out = Jet2::new(out.alpha, turned.d1, turned.d2);
    let (so, co) = alpha_out.sin_cos();
    let p_out = qx * so - qy * co;
    Ok(RayJet {
        ray: out,
        alpha_s: alpha_out.d1,
        p_s: p_out.d1,
        alpha_ss: alpha_out.d2,
        p_ss: p_out.d2,
    })
}

/// How derivatives of a sampled family are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivatives {
    /// Closed form when available, otherwise central differences with the
    /// sampling step.
    Auto,
    /// Central differences with the given step, even when a closed form exists.
    Central { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySample {
    pub s: f64,
    pub jet: RayJet,
}

/// A sampled family of rays with derivative estimates at every sample.
#[derive(Clone)]
pub struct LineFamily {
    generator: Arc<dyn RayFamily>,
    samples: Vec<FamilySample>,
    derivatives: Derivatives,
}

impl fmt::Debug for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineFamily")
            .field("domain", &self.generator.domain())
            .field("samples", &self.samples.len())
            .field("derivatives", &self.derivatives)
            .finish()
    }
}

impl LineFamily {
    pub fn sample(
        generator: Arc<dyn RayFamily>,
        count: usize,
        derivatives: Derivatives,
    ) -> Result<Self> {
        if count < 3 {
            return Err(CausticError::InvalidParameter(
                "a family needs at least 3 samples",
            ));
        }
        let domain = generator.domain();
        let spacing = domain.length()
            / match domain {
                Domain::Periodic { .. } => count as f64,
                Domain::Interval { .. } => (count - 1) as f64,
            };
        let samples = domain
            .samples(count)
            .into_iter()
            .map(|s| {
                let jet = match derivatives {
                    Derivatives::Auto => match generator.exact_jet(s) {
                        Some(j) => j?,
                        None => central_jet(generator.as_ref(), s, spacing)?,
                    },
                    Derivatives::Central { step } => central_jet(generator.as_ref(), s, step)?,
                };
                Ok(FamilySample { s, jet })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LineFamily {
            generator,
            samples,
            derivatives,
        })
    }

    pub fn generator(&self) -> &Arc<dyn RayFamily> {
        &self.generator
    }

    pub fn samples(&self) -> &[FamilySample] {
        &self.samples
    }

    pub fn derivatives(&self) -> Derivatives {
        self.derivatives
    }

    pub fn is_closed(&self) -> bool {
        self.generator.domain().is_periodic()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// The pencil through `source`, with exact derivatives.
pub fn pencil(source: Point, samples: usize) -> Result<LineFamily> {
    LineFamily::sample(Arc::new(Pencil { source }), samples, Derivatives::Auto)
}

/// The image of `family` after `n` reflections in `table`, sampled at the
/// same parameters with the same derivative scheme.
pub fn image_family(table: &ConicTable, family: &LineFamily, n: u32) -> Result<LineFamily> {
    if n == 0 {
        return Ok(family.clone());
    }
    let generator: Arc<dyn RayFamily> = Arc::new(ImageFamily {
        table: *table,
        base: family.generator.clone(),
        n,
    });
    LineFamily::sample(generator, family.len(), family.derivatives)
}

/// Endpoints `(start, end)` of the arc of line directions through an exterior
/// point `o` that cross the table. Both ends are tangent lines.
pub fn external_arc(table: &ConicTable, o: Point) -> Result<(f64, f64)> {
    if table.implicit(o) <= 0.0 {
        return Err(CausticError::InsidePoint);
    }
    // lambda(s) = mean + amp * cos(2s - phase) along the pencil through o
    let u = table.a() * table.a() - o.x * o.x;
    let v = table.b() * table.b() - o.y * o.y;
    let mean = 0.5 * (u + v);
    let cos_coeff = 0.5 * (v - u);
    let sin_coeff = o.x * o.y;
    let amp = cos_coeff.hypot(sin_coeff);
    let phase = sin_coeff.atan2(cos_coeff);
    let half_width = (-mean / amp).clamp(-1.0, 1.0).acos();
    Ok((0.5 * (phase - half_width), 0.5 * (phase + half_width)))
}

/// The two families of billiard trajectories started along lines through an
/// exterior point, one per orientation, kept `EXTERNAL_MARGIN` away from the
/// grazing lines.
pub fn external_pencil(table: &ConicTable, o: Point, samples: usize) -> Result<[LineFamily; 2]> {
    let (start, end) = external_arc(table, o)?;
    let make = |forward| {
        LineFamily::sample(
            Arc::new(ExternalPencil {
                source: o,
                start: start + EXTERNAL_MARGIN,
                end: end - EXTERNAL_MARGIN,
                forward,
            }),
            samples,
            Derivatives::Auto,
        )
    };
    Ok([make(true)?, make(false)?])
}

/// The envelope of a sampled family together with its cusp function.
#[derive(Debug, Clone)]
pub struct Caustic {
    pub family: LineFamily,
    pub points: Vec<EnvelopePoint>,
    pub cusp_function: Vec<f64>,
    /// Number of passages through infinity, `None` when a vertical tangent
    /// could not be resolved at sampling resolution.
    pub infinity_count: Option<usize>,
    /// The light source; a parallel beam is a source at infinity.
    pub source: EnvelopePoint,
    pub n: u32,
    pub table: Option<ConicTable>,
}

impl Caustic {
    pub fn from_family(
        family: LineFamily,
        source: EnvelopePoint,
        n: u32,
        table: Option<ConicTable>,
    ) -> Self {
        let points = family.samples.iter().map(|s| s.jet.envelope()).collect();
        let cusp_function = family
            .samples
            .iter()
            .map(|s| s.jet.cusp_function())
            .collect();
        let mut caustic = Caustic {
            family,
            points,
            cusp_function,
            infinity_count: None,
            source,
            n,
            table,
        };
        caustic.infinity_count = infinity_crossings(&caustic).ok();
        caustic
    }

    pub fn alpha_s(&self) -> Vec<f64> {
        self.family.samples.iter().map(|s| s.jet.alpha_s).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.family.is_closed()
    }

    /// Envelope point and cusp function at an arbitrary parameter, from the
    /// most accurate local derivatives available.
    pub fn evaluate(&self, s: f64) -> Result<(EnvelopePoint, f64)> {
        let jet = local_jet(self.family.generator.as_ref(), s)?;
        Ok((jet.envelope(), jet.cusp_function()))
    }
}

/// The `n`-th caustic by reflection from an interior source.
pub fn caustic(table: &ConicTable, source: Point, n: u32, samples: usize) -> Result<Caustic> {
    if samples < MIN_SAMPLES {
        return Err(CausticError::InvalidParameter(
            "at least 512 samples are required",
        ));
    }
    if n == 0 {
        return Err(CausticError::DegeneratePencil);
    }
    if table.is_focal(source) {
        return Err(CausticError::DegenerateSource);
    }
    if !table.contains(source) {
        return Err(CausticError::OutsidePoint);
    }
    let base = pencil(source, samples)?;
    let family = image_family(table, &base, n)?;
    Ok(Caustic::from_family(
        family,
        EnvelopePoint::Finite(source),
        n,
        Some(*table),
    ))
}

/// The `n`-th caustics of the two families of an exterior source.
pub fn external_caustic(
    table: &ConicTable,
    source: Point,
    n: u32,
    samples: usize,
) -> Result<[Caustic; 2]> {
    if samples < MIN_SAMPLES {
        return Err(CausticError::InvalidParameter(
            "at least 512 samples are required",
        ));
    }
    if n == 0 {
        return Err(CausticError::DegeneratePencil);
    }
    let [fwd, back] = external_pencil(table, source, samples)?;
    let build = |f: LineFamily| -> Result<Caustic> {
        let img = image_family(table, &f, n)?;
        Ok(Caustic::from_family(
            img,
            EnvelopePoint::Finite(source),
            n,
            Some(*table),
        ))
    };
    Ok([build(fwd)?, build(back)?])
}

/// Number of passages of the caustic through infinity: the sign changes of
/// `alpha_s` over the family.
pub fn infinity_crossings(caustic: &Caustic) -> Result<usize> {
    let alpha_s = caustic.alpha_s();
    let closed = caustic.is_closed();
    let samples = &caustic.family.samples;
    let scale = alpha_s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let generator = caustic.family.generator.as_ref();
    let mut count = sign_changes(&alpha_s, closed).len();
    for i in touching_zeros(&alpha_s, closed, TOUCH_TOL) {
        let (lo, hi) = neighbours(caustic, i);
        let value = |s: f64| local_jet(generator, s).map(|j| j.alpha_s);
        match rescan(value, lo, hi, TOUCH_TOL * scale)? {
            Rescan::Brackets(b) => count += b.len(),
            Rescan::Clear => {}
            Rescan::Touch => return Err(CausticError::UnresolvedCrossing { s: samples[i].s }),
        }
    }
    Ok(count)
}

/// Parameters of the samples on either side of sample `i`, unwrapped so that
/// `lo < hi` on a closed family.
pub(crate) fn neighbours(caustic: &Caustic, i: usize) -> (f64, f64) {
    let samples = &caustic.family.samples;
    let n = samples.len();
    let period = caustic.family.generator.domain().length();
    let here = samples[i].s;
    let lo = if i == 0 {
        samples[n - 1].s - period
    } else {
        samples[i - 1].s
    };
    let hi = if i + 1 == n {
        samples[0].s + period
    } else {
        samples[i + 1].s
    };
    debug_assert!(lo < here && here < hi);
    (lo, hi)
}
