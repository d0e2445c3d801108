//! Rays, conic tables, the billiard map and the confocal family.

use core::f64::consts::{PI, TAU};

use crate::{CausticError, ReflectFailure, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A point within `FOCUS_TOL * a` of a focus is treated as the focus.
pub const FOCUS_TOL: f64 = 1e-8;
/// Squared chord length below `GRAZE_TOL * a^2` counts as a grazing hit.
pub const GRAZE_TOL: f64 = 1e-12;
/// Coordinates below `AXIS_TOL * a` in magnitude put a point on an axis.
pub const AXIS_TOL: f64 = 1e-12;
/// Squared half-chord tolerance (relative to `a^2`) for tangency with a conic.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// A point of a caustic, which may escape to infinity.
///
/// Points at infinity are kept as a direction (angle mod pi) rather than as a
/// huge coordinate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopePoint {
    Finite(Point),
    AtInfinity { direction: f64 },
}

impl EnvelopePoint {
    pub fn finite(self) -> Option<Point> {
        match self {
            EnvelopePoint::Finite(p) => Some(p),
            EnvelopePoint::AtInfinity { .. } => None,
        }
    }

    pub fn is_at_infinity(self) -> bool {
        matches!(self, EnvelopePoint::AtInfinity { .. })
    }

    /// Distance between two envelope points. Two points at infinity are at
    /// distance zero when their directions agree mod pi (within `1e-9` rad)
    /// and infinitely far apart otherwise.
    pub fn distance(self, other: EnvelopePoint) -> f64 {
        match (self, other) {
            (EnvelopePoint::Finite(p), EnvelopePoint::Finite(q)) => p.distance(q),
            (
                EnvelopePoint::AtInfinity { direction: u },
                EnvelopePoint::AtInfinity { direction: v },
            ) => {
                if angle_distance_mod_pi(u, v) < 1e-9 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        }
    }
}

/// `x` reduced to `[0, m)`.
pub fn wrap(x: f64, m: f64) -> f64 {
    let r = x % m;
    if r < 0.0 {
        r + m
    } else {
        r
    }
}

/// Distance between two line directions, modulo pi, in `[0, pi/2]`.
pub fn angle_distance_mod_pi(u: f64, v: f64) -> f64 {
    let d = wrap(u - v, PI);
    d.min(PI - d)
}

/// An oriented line in support coordinates.
///
/// `alpha` is never wrapped: composed reflections keep adding turning angles
/// so that families of rays stay continuous in their parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub alpha: f64,
    pub p: f64,
}

impl Ray {
    pub const fn new(alpha: f64, p: f64) -> Self {
        Ray { alpha, p }
    }

    /// The ray through `point` with direction angle `alpha`.
    pub fn through(point: Point, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Ray::new(alpha, point.x * s - point.y * c)
    }

    pub fn direction(&self) -> Point {
        let (s, c) = self.alpha.sin_cos();
        Point::new(c, s)
    }

    /// Closest point of the line to the origin.
    pub fn foot(&self) -> Point {
        let (s, c) = self.alpha.sin_cos();
        Point::new(self.p * s, -self.p * c)
    }

    /// Signed distance of `point` from the line, positive on the right-hand side.
    pub fn residual(&self, point: Point) -> f64 {
        let (s, c) = self.alpha.sin_cos();
        point.x * s - point.y * c - self.p
    }

    /// Same line, opposite orientation.
    pub fn reversed(&self) -> Self {
        Ray::new(self.alpha + PI, -self.p)
    }

    pub fn point_at(&self, t: f64) -> Point {
        let f = self.foot();
        let d = self.direction();
        Point::new(f.x + t * d.x, f.y + t * d.y)
    }
}

/// The confocal conic `x^2/(a^2-l) + y^2/(b^2-l) = 1` and its type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfocalKind {
    Ellipse,
    Hyperbola,
    /// `l = b^2`: the segment joining the foci (rays along the major axis).
    FociSegment,
    /// A symmetry line playing the role of a conic. For an ellipse this is the
    /// major axis outside the foci (`l = b^2`) or the minor axis (`l = a^2`);
    /// for a circle it is the line through the center and the source.
    Axis {
        direction: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfocalParam {
    pub lambda: f64,
    pub kind: ConfocalKind,
}

impl ConfocalParam {
    /// Direction of the line that replaces a degenerate conic, if any.
    pub fn axis_direction(&self) -> Option<f64> {
        match self.kind {
            ConfocalKind::FociSegment => Some(0.0),
            ConfocalKind::Axis { direction } => Some(direction),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.axis_direction().is_some()
    }
}

/// A ray from the source tangent to one of the two confocal conics through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentRay {
    pub ray: Ray,
    pub conic: ConfocalParam,
}

/// The billiard table `x^2/a^2 + y^2/b^2 = 1` with `0 < b <= a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicTable {
    a: f64,
    b: f64,
}

impl ConicTable {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && b <= a) {
            return Err(CausticError::InvalidTable { a, b });
        }
        Ok(ConicTable { a, b })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        ConicTable::new(radius, radius)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Focal distance `c = sqrt(a^2 - b^2)`.
    pub fn c(&self) -> f64 {
        ((self.a - self.b) * (self.a + self.b)).sqrt()
    }

    pub fn is_circle(&self) -> bool {
        self.a == self.b
    }

    /// `x^2/a^2 + y^2/b^2 - 1`: negative inside, zero on the boundary.
    pub fn implicit(&self, q: Point) -> f64 {
        (q.x / self.a).powi(2) + (q.y / self.b).powi(2) - 1.0
    }

    pub fn contains(&self, q: Point) -> bool {
        self.implicit(q) < 0.0
    }

    pub fn foci(&self) -> [Point; 2] {
        let c = self.c();
        [Point::new(c, 0.0), Point::new(-c, 0.0)]
    }

    /// Whether `q` is within the focus tolerance of a focus (the center, for a circle).
    pub fn is_focal(&self, q: Point) -> bool {
        self.foci()
            .iter()
            .any(|f| f.distance(q) <= FOCUS_TOL * self.a)
    }

    /// The billiard invariant `(a sin alpha)^2 + (b cos alpha)^2 - p^2`.
    ///
    /// A ray is tangent to the confocal conic with this parameter, and so is
    /// every reflection of it.
    pub fn lambda_of(&self, ray: &Ray) -> f64 {
        let (s, c) = ray.alpha.sin_cos();
        (self.a * s).powi(2) + (self.b * c).powi(2) - ray.p * ray.p
    }

    /// One billiard reflection.
    ///
    /// Circles use the closed form `(alpha + 2 acos(p/R), p)`; other tables go
    /// through [`ConicTable::reflect_geometric`].
    pub fn reflect(&self, ray: Ray) -> Result<Ray> {
        if !self.is_circle() {
            return self.reflect_geometric(ray);
        }
        let r = self.a;
        let chord2 = 4.0 * (r - ray.p) * (r + ray.p);
        check_chord(chord2, r)?;
        Ok(Ray::new(ray.alpha + 2.0 * (ray.p / r).acos(), ray.p))
    }

    /// Reflection computed from the exit point and the boundary normal,
    /// valid for every table including circles.
    pub fn reflect_geometric(&self, ray: Ray) -> Result<Ray> {
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let d = ray.direction();
        let f = ray.foot();
        let qa = d.x * d.x / a2 + d.y * d.y / b2;
        let qb = 2.0 * (f.x * d.x / a2 + f.y * d.y / b2);
        let qc = f.x * f.x / a2 + f.y * f.y / b2 - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        check_chord(disc / (qa * qa), self.a)?;
        // larger root = exit point along the orientation
        let sq = disc.sqrt();
        let t = if qb >= 0.0 {
            (2.0 * qc) / (-qb - sq)
        } else {
            (-qb + sq) / (2.0 * qa)
        };
        let q = Point::new(f.x + t * d.x, f.y + t * d.y);
        let (nx, ny) = (q.x / a2, q.y / b2);
        let nn = nx.hypot(ny);
        let (nx, ny) = (nx / nn, ny / nn);
        let dn = d.x * nx + d.y * ny;
        let out = Point::new(d.x - 2.0 * dn * nx, d.y - 2.0 * dn * ny);
        let turn = wrap(out.y.atan2(out.x) - ray.alpha, TAU);
        Ok(Ray::through(q, ray.alpha + turn))
    }

    /// `n` successive reflections. Errors carry the 1-based failing step.
    pub fn reflect_n(&self, ray: Ray, n: u32) -> Result<Ray> {
        let mut r = ray;
        for step in 1..=n {
            r = self.reflect(r).map_err(|e| match e {
                CausticError::Reflect {
                    failure, sample, ..
                } => CausticError::Reflect {
                    failure,
                    step,
                    sample,
                },
                other => other,
            })?;
        }
        Ok(r)
    }

    /// The two confocal conics through `o` (ellipse first), for any non-focal
    /// point of the plane. Outside the table the ellipse has `lambda < 0`.
    pub fn confocal_pair(&self, o: Point) -> Result<(ConfocalParam, ConfocalParam)> {
        if self.is_focal(o) {
            return Err(CausticError::FocusPoint);
        }
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let axis_tol = AXIS_TOL * self.a;
        if self.is_circle() {
            let r2 = o.x * o.x + o.y * o.y;
            return Ok((
                ConfocalParam {
                    lambda: a2 - r2,
                    kind: ConfocalKind::Ellipse,
                },
                ConfocalParam {
                    lambda: a2,
                    kind: ConfocalKind::Axis {
                        direction: o.y.atan2(o.x),
                    },
                },
            ));
        }
        let on_major = o.y.abs() <= axis_tol;
        let on_minor = o.x.abs() <= axis_tol;
        if on_major {
            let c = self.c();
            if o.x.abs() < c {
                return Ok((
                    ConfocalParam {
                        lambda: b2,
                        kind: ConfocalKind::FociSegment,
                    },
                    if on_minor {
                        ConfocalParam {
                            lambda: a2,
                            kind: ConfocalKind::Axis {
                                direction: PI / 2.0,
                            },
                        }
                    } else {
                        ConfocalParam {
                            lambda: a2 - o.x * o.x,
                            kind: ConfocalKind::Hyperbola,
                        }
                    },
                ));
            }
            return Ok((
                ConfocalParam {
                    lambda: a2 - o.x * o.x,
                    kind: ConfocalKind::Ellipse,
                },
                ConfocalParam {
                    lambda: b2,
                    kind: ConfocalKind::Axis { direction: 0.0 },
                },
            ));
        }
        if on_minor {
            return Ok((
                ConfocalParam {
                    lambda: b2 - o.y * o.y,
                    kind: ConfocalKind::Ellipse,
                },
                ConfocalParam {
                    lambda: a2,
                    kind: ConfocalKind::Axis {
                        direction: PI / 2.0,
                    },
                },
            ));
        }
        // l^2 - (u+v) l + uv - x^2 y^2 = 0 with u = a^2 - x^2, v = b^2 - y^2
        let u = a2 - o.x * o.x;
        let v = b2 - o.y * o.y;
        let sum = u + v;
        let root = ((u - v).powi(2) + 4.0 * (o.x * o.y).powi(2)).sqrt();
        let hi = 0.5 * (sum + root);
        // product of the roots is uv - x^2 y^2
        let lo = if hi != 0.0 {
            (u * v - (o.x * o.y).powi(2)) / hi
        } else {
            0.5 * (sum - root)
        };
        Ok((
            ConfocalParam {
                lambda: lo,
                kind: ConfocalKind::Ellipse,
            },
            ConfocalParam {
                lambda: hi,
                kind: ConfocalKind::Hyperbola,
            },
        ))
    }

    /// The confocal ellipse and hyperbola through an interior, non-focal point.
    pub fn confocal_through(&self, o: Point) -> Result<(ConfocalParam, ConfocalParam)> {
        if !self.contains(o) {
            return Err(CausticError::OutsidePoint);
        }
        self.confocal_pair(o)
    }

    /// Residual of the incidence equation of `conic` at `q`, scaled to be
    /// dimensionless. Degenerate conics use the distance to their line.
    pub fn conic_residual(&self, conic: &ConfocalParam, q: Point) -> f64 {
        match conic.axis_direction() {
            Some(dir) => Ray::new(dir, 0.0).residual(q).abs() / self.a,
            None => {
                let l = conic.lambda;
                q.x * q.x / (self.a * self.a - l) + q.y * q.y / (self.b * self.b - l) - 1.0
            }
        }
    }

    /// The four rays from `o` tangent to the confocal ellipse and hyperbola
    /// through it, ellipse rays first. A degenerate conic contributes the two
    /// rays along its line.
    pub fn tangent_rays_at(&self, o: Point) -> Result<[TangentRay; 4]> {
        let (e, h) = self.confocal_through(o)?;
        let [e1, e2] = self.rays_tangent_to(o, e);
        let [h1, h2] = self.rays_tangent_to(o, h);
        Ok([e1, e2, h1, h2])
    }

    /// Both orientations of the line through `o` tangent to `conic`, which
    /// must pass through `o`.
    pub(crate) fn rays_tangent_to(&self, o: Point, conic: ConfocalParam) -> [TangentRay; 2] {
        let alpha = match conic.axis_direction() {
            Some(dir) => dir,
            None => {
                let gx = o.x / (self.a * self.a - conic.lambda);
                let gy = o.y / (self.b * self.b - conic.lambda);
                gx.atan2(-gy)
            }
        };
        [
            TangentRay {
                ray: Ray::through(o, alpha),
                conic,
            },
            TangentRay {
                ray: Ray::through(o, alpha + PI),
                conic,
            },
        ]
    }

    /// Where `ray` touches the confocal conic `conic`: the double root of the
    /// ray/conic intersection. Rays along an asymptote touch at infinity.
    pub fn tangency_point(&self, ray: &Ray, conic: &ConfocalParam) -> Result<EnvelopePoint> {
        if conic.is_degenerate() {
            return Err(CausticError::DegenerateConic);
        }
        let da = self.a * self.a - conic.lambda;
        let db = self.b * self.b - conic.lambda;
        let d = ray.direction();
        let f = ray.foot();
        let qa = d.x * d.x / da + d.y * d.y / db;
        let qb = 2.0 * (f.x * d.x / da + f.y * d.y / db);
        let qc = f.x * f.x / da + f.y * f.y / db - 1.0;
        let scale = self.a * self.a;
        if qa.abs() <= 1e-14 * (1.0 / da.abs() + 1.0 / db.abs()) {
            // direction of an asymptote: the line meets the hyperbola at most once
            if qb.abs() <= 1e-10 * (f.norm() + self.a) / da.abs().min(db.abs()) {
                return Ok(EnvelopePoint::AtInfinity {
                    direction: wrap(ray.alpha, PI),
                });
            }
            return Err(CausticError::NotTangent {
                discriminant: f64::INFINITY,
            });
        }
        let half_chord2 = (qb * qb - 4.0 * qa * qc) / (4.0 * qa * qa);
        if half_chord2.abs() > TANGENCY_TOL * scale {
            return Err(CausticError::NotTangent {
                discriminant: half_chord2 / scale,
            });
        }
        let t = -qb / (2.0 * qa);
        Ok(EnvelopePoint::Finite(ray.point_at(t)))
    }

    /// Curvature of the boundary at the vertices `(a, 0)` and `(0, b)`.
    pub fn vertex_curvatures(&self) -> (f64, f64) {
        (self.a / (self.b * self.b), self.b / (self.a * self.a))
    }
}

fn check_chord(chord2: f64, scale: f64) -> Result<()> {
    let tol = GRAZE_TOL * scale * scale;
    if chord2.is_nan() || chord2 < -tol {
        Err(CausticError::Reflect {
            failure: ReflectFailure::NoIntersection,
            step: 1,
            sample: None,
        })
    } else if chord2 < tol {
        Err(CausticError::Reflect {
            failure: ReflectFailure::Tangential,
            step: 1,
            sample: None,
        })
    } else {
        Ok(())
    }
}
