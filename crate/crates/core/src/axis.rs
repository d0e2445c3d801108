//! On-axis cusps from the mirror equation.
//!
//! For a source on a symmetry axis, the cusp carried by the ray along the
//! axis moves by a fractional-linear map each reflection: `f` on the major
//! axis and `g` on the minor axis. Iterates are computed with 2x2 matrix
//! powers.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::geometry::{wrap, ConicTable, EnvelopePoint, Point};
use crate::{CausticError, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A coordinate on the projective line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisCoord {
    Finite(f64),
    Infinite,
}

impl AxisCoord {
    pub fn finite(self) -> Option<f64> {
        match self {
            AxisCoord::Finite(x) => Some(x),
            AxisCoord::Infinite => None,
        }
    }

    fn neg(self) -> Self {
        match self {
            AxisCoord::Finite(x) => AxisCoord::Finite(-x),
            AxisCoord::Infinite => AxisCoord::Infinite,
        }
    }
}

/// Relative size of a denominator below which the image is at infinity.
const POLE_TOL: f64 = 1e-13;

/// `x -> (m11 x + m12) / (m21 x + m22)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = MobiusMap { m11, m12, m21, m22 };
        let scale = m.max_entry();
        if !(scale.is_finite() && m.det().abs() > 1e-14 * scale * scale) {
            return Err(CausticError::InvalidParameter("singular Mobius matrix"));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    fn max_entry(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    fn normalized(self) -> Self {
        let k = self.max_entry();
        MobiusMap {
            m11: self.m11 / k,
            m12: self.m12 / k,
            m21: self.m21 / k,
            m22: self.m22 / k,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }

    /// `n`-fold iterate by repeated squaring. The matrix is rescaled to unit
    /// largest entry after every product, which leaves the map unchanged.
    pub fn power(&self, n: u32) -> MobiusMap {
        let mut result = MobiusMap::IDENTITY;
        let mut base = self.normalized();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).normalized();
            }
            base = base.compose(&base).normalized();
            k >>= 1;
        }
        result
    }

    pub fn apply(&self, x: AxisCoord) -> AxisCoord {
        let (num, den) = match x {
            AxisCoord::Finite(x) => (self.m11 * x + self.m12, self.m21 * x + self.m22),
            AxisCoord::Infinite => (self.m11, self.m21),
        };
        if den.abs() <= POLE_TOL * num.abs() {
            AxisCoord::Infinite
        } else {
            AxisCoord::Finite(num / den)
        }
    }

    pub fn eval(&self, x: f64) -> AxisCoord {
        self.apply(AxisCoord::Finite(x))
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        let den = x * self.m21 + self.m22;
        Complex64::new(self.det(), 0.0) / (den * den)
    }
}

/// Image distance `d'` from the mirror equation `1/d + 1/d' = 2k`. An object
/// at the focal distance `1/(2k)` images to infinity.
pub fn mirror_image(d: f64, k: f64) -> Result<AxisCoord> {
    if d == 0.0 {
        return Err(CausticError::ZeroDistance);
    }
    let inv = 2.0 * k - 1.0 / d;
    if inv.abs() <= POLE_TOL * (2.0 * k).abs().max(1.0 / d.abs()) {
        return Ok(AxisCoord::Infinite);
    }
    Ok(AxisCoord::Finite(1.0 / inv))
}

/// The major-axis map `f(x) = ((a^2+c^2) x - 2ac^2) / (-2a x + a^2 + c^2)`.
pub fn mobius_f(table: &ConicTable) -> MobiusMap {
    let (a, c) = (table.a(), table.c());
    let s = a * a + c * c;
    MobiusMap {
        m11: s,
        m12: -2.0 * a * c * c,
        m21: -2.0 * a,
        m22: s,
    }
}

/// The minor-axis map `g(y) = ((c^2-b^2) y - 2bc^2) / (2b y + c^2 - b^2)`.
pub fn mobius_g(table: &ConicTable) -> MobiusMap {
    let (b, c) = (table.b(), table.c());
    let d = c * c - b * b;
    MobiusMap {
        m11: d,
        m12: -2.0 * b * c * c,
        m21: 2.0 * b,
        m22: d,
    }
}

/// One step of `f` (or `g`) computed directly from the mirror equation at the
/// vertex `(a, 0)` (or `(0, b)`): the step is `d' - a` where `d'` is the image
/// distance of an object at distance `a - x` from the vertex.
pub fn mirror_step(table: &ConicTable, axis: Axis, x: AxisCoord) -> Result<AxisCoord> {
    let (k_major, k_minor) = table.vertex_curvatures();
    let (half, k) = match axis {
        Axis::Major => (table.a(), k_major),
        Axis::Minor => (table.b(), k_minor),
    };
    let image = match x {
        AxisCoord::Finite(x) => mirror_image(half - x, k)?,
        // an object at infinity images at the focal distance
        AxisCoord::Infinite => AxisCoord::Finite(1.0 / (2.0 * k)),
    };
    Ok(match image {
        AxisCoord::Finite(d) => AxisCoord::Finite(d - half),
        AxisCoord::Infinite => AxisCoord::Infinite,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Major,
    Minor,
}

/// The two on-axis cusps `(O_n, O'_n)` of the `n`-th caustic from a source at
/// coordinate `coord` on `axis`: `O_n` follows the ray leaving in the
/// positive direction, `O'_n` the one leaving in the negative direction.
///
/// `O_n = (-1)^n h^n(coord)` and `O'_n = (-1)^(n+1) h^n(-coord)` with `h = f`
/// or `g`. Landing on the pole gives a cusp at infinity.
pub fn iterate_axis_cusps(
    table: &ConicTable,
    coord: f64,
    n: u32,
    axis: Axis,
) -> Result<(EnvelopePoint, EnvelopePoint)> {
    let half = match axis {
        Axis::Major => table.a(),
        Axis::Minor => table.b(),
    };
    if !(coord.abs() < half) {
        return Err(CausticError::OutsidePoint);
    }
    let source = match axis {
        Axis::Major => Point::new(coord, 0.0),
        Axis::Minor => Point::new(0.0, coord),
    };
    if table.is_focal(source) {
        return Err(CausticError::FocusPoint);
    }
    Ok(axis_cusps(table, coord, n, axis))
}

/// The same iteration for any coordinate, including sources outside the
/// table whose axis lines cross it.
pub(crate) fn axis_cusps(
    table: &ConicTable,
    coord: f64,
    n: u32,
    axis: Axis,
) -> (EnvelopePoint, EnvelopePoint) {
    let (map, direction) = match axis {
        Axis::Major => (mobius_f(table), 0.0),
        Axis::Minor => (mobius_g(table), PI / 2.0),
    };
    let power = map.power(n);
    let to_point = |v: AxisCoord| match v {
        AxisCoord::Finite(t) => EnvelopePoint::Finite(match axis {
            Axis::Major => Point::new(t, 0.0),
            Axis::Minor => Point::new(0.0, t),
        }),
        AxisCoord::Infinite => EnvelopePoint::AtInfinity { direction },
    };
    let forward = power.eval(coord);
    let backward = power.eval(-coord).neg();
    let (forward, backward) = if n.is_multiple_of(2) {
        (forward, backward)
    } else {
        (forward.neg(), backward.neg())
    };
    (to_point(forward), to_point(backward))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// `None` for the point at infinity.
    pub location: Option<Complex64>,
    pub multiplier: Complex64,
}

impl FixedPoint {
    /// Attracting (`Some(true)`), repelling (`Some(false)`) or neutral.
    pub fn stable(&self) -> Option<bool> {
        let m = self.multiplier.norm();
        if (m - 1.0).abs() <= 1e-12 {
            None
        } else {
            Some(m < 1.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointAnalysis {
    pub class: MobiusClass,
    /// Two entries; a parabolic map repeats its single fixed point.
    pub fixed_points: [FixedPoint; 2],
    /// For elliptic maps: the angle of the conjugate rotation in `[0, 2pi)`,
    /// the argument of the multiplier at the fixed point in the lower
    /// half-plane.
    pub rotation_angle: Option<f64>,
    /// Smallest `q <= MAX_PERIOD` with `q * angle` within `q * 1e-9` of a
    /// multiple of `2pi`.
    pub period: Option<u32>,
}

pub const MAX_PERIOD: u32 = 1000;

/// Fixed points, multipliers and type of a real Mobius map.
///
/// With matrix eigenvalues `mu1, mu2` the multiplier at the fixed point
/// belonging to `mu1` is `mu2 / mu1`.
pub fn fixed_point_analysis(map: &MobiusMap) -> FixedPointAnalysis {
    let m = map.normalized();
    let tr = m.trace();
    let det = m.det();
    let disc = tr * tr - 4.0 * det;
    let class = if disc.abs() <= 1e-12 * (tr * tr).max(det.abs()) {
        MobiusClass::Parabolic
    } else if disc > 0.0 {
        MobiusClass::Hyperbolic
    } else {
        MobiusClass::Elliptic
    };
    let root = match class {
        MobiusClass::Parabolic => Complex64::new(0.0, 0.0),
        MobiusClass::Hyperbolic => Complex64::new(disc.sqrt(), 0.0),
        MobiusClass::Elliptic => Complex64::new(0.0, (-disc).sqrt()),
    };
    let mu_plus = (Complex64::new(tr, 0.0) + root) * 0.5;
    let mu_minus = (Complex64::new(tr, 0.0) - root) * 0.5;
    let location = |sqrt_disc: Complex64| -> Option<Complex64> {
        if m.m21.abs() > 1e-15 {
            Some((Complex64::new(m.m11 - m.m22, 0.0) + sqrt_disc) / (2.0 * m.m21))
        } else if sqrt_disc.re * (m.m11 - m.m22) >= 0.0 && sqrt_disc.norm() > 0.0 {
            // affine map: one fixed point is infinity
            None
        } else {
            Some(Complex64::new(m.m12 / (m.m22 - m.m11), 0.0))
        }
    };
    let fixed_points = [
        FixedPoint {
            location: location(root),
            multiplier: mu_minus / mu_plus,
        },
        FixedPoint {
            location: location(-root),
            multiplier: mu_plus / mu_minus,
        },
    ];
    let (rotation_angle, period) = if class == MobiusClass::Elliptic {
        let lower = fixed_points
            .iter()
            .find(|f| f.location.is_some_and(|z| z.im < 0.0))
            .unwrap_or(&fixed_points[1]);
        let angle = wrap(lower.multiplier.arg(), TAU);
        (Some(angle), finite_order(angle))
    } else {
        (None, None)
    };
    FixedPointAnalysis {
        class,
        fixed_points,
        rotation_angle,
        period,
    }
}

fn finite_order(angle: f64) -> Option<u32> {
    (1..=MAX_PERIOD).find(|&q| {
        let turns = angle * q as f64 / TAU;
        (turns - turns.round()).abs() * TAU <= 1e-9 * q as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse() -> ConicTable {
        ConicTable::new(2.0, 1.0).unwrap()
    }

    fn unit() -> ConicTable {
        ConicTable::circle(1.0).unwrap()
    }

    #[test]
    fn mirror_focal_and_center() {
        assert_eq!(mirror_image(0.5, 1.0).unwrap(), AxisCoord::Infinite);
        let d = mirror_image(2.0, 0.5).unwrap().finite().unwrap();
        assert!((d - 2.0).abs() < 1e-15);
        let d = mirror_image(0.6, 1.0).unwrap().finite().unwrap();
        assert!((d - 3.0).abs() < 1e-12);
        assert_eq!(mirror_image(0.0, 1.0), Err(CausticError::ZeroDistance));
    }

    #[test]
    fn f_matches_mirror_equation() {
        // d' = a + f(x): 1 + f(0.4) = 3 on the unit circle
        let f = mobius_f(&unit());
        assert!((f.eval(0.4).finite().unwrap() - 2.0).abs() < 1e-12);
        let t = ellipse();
        let f = mobius_f(&t);
        for k in 0..40 {
            let x = -1.9 + 0.095 * k as f64;
            let direct = mirror_step(&t, Axis::Major, AxisCoord::Finite(x)).unwrap();
            match (f.eval(x), direct) {
                (AxisCoord::Finite(u), AxisCoord::Finite(v)) => {
                    assert!((u - v).abs() < 1e-9 * (1.0 + u.abs()))
                }
                (u, v) => assert_eq!(u, v),
            }
        }
    }

    #[test]
    fn g_matches_mirror_equation() {
        let t = ellipse();
        let g = mobius_g(&t);
        for k in 0..40 {
            let y = -0.95 + 0.0475 * k as f64;
            let direct = mirror_step(&t, Axis::Minor, AxisCoord::Finite(y)).unwrap();
            match (g.eval(y), direct) {
                (AxisCoord::Finite(u), AxisCoord::Finite(v)) => {
                    assert!((u - v).abs() < 1e-9 * (1.0 + u.abs()))
                }
                (u, v) => assert_eq!(u, v),
            }
        }
    }

    #[test]
    fn f_coefficients_and_foci() {
        let f = mobius_f(&ellipse());
        assert!((f.m11 - 7.0).abs() < 1e-12 && (f.m12 + 12.0).abs() < 1e-12);
        assert!((f.m21 + 4.0).abs() < 1e-12 && (f.m22 - 7.0).abs() < 1e-12);
        let c = 3f64.sqrt();
        assert!((f.eval(c).finite().unwrap() - c).abs() < 1e-12);
        assert!((f.eval(-c).finite().unwrap() + c).abs() < 1e-12);
    }

    #[test]
    fn circle_f_is_parabolic() {
        let f = mobius_f(&unit());
        let an = fixed_point_analysis(&f);
        assert_eq!(an.class, MobiusClass::Parabolic);
        for fp in an.fixed_points {
            assert!(fp.location.unwrap().norm() < 1e-12);
            assert!((fp.multiplier - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn ellipse_f_is_hyperbolic() {
        let an = fixed_point_analysis(&mobius_f(&ellipse()));
        assert_eq!(an.class, MobiusClass::Hyperbolic);
        let c = 3f64.sqrt();
        let big = ((2.0 + c) / (2.0 - c)).powi(2);
        for fp in an.fixed_points {
            let x = fp.location.unwrap().re;
            let m = fp.multiplier.re;
            if x > 0.0 {
                assert!((x - c).abs() < 1e-12);
                assert!((m - big).abs() < 1e-9 * big);
                assert_eq!(fp.stable(), Some(false));
            } else {
                assert!((x + c).abs() < 1e-12);
                assert!((m - 1.0 / big).abs() < 1e-12);
                assert_eq!(fp.stable(), Some(true));
            }
        }
        assert!((big - 193.99).abs() < 0.01);
    }

    #[test]
    fn ellipse_g_rotates_by_two_thirds_pi() {
        let an = fixed_point_analysis(&mobius_g(&ellipse()));
        assert_eq!(an.class, MobiusClass::Elliptic);
        assert!((an.rotation_angle.unwrap() - TAU / 3.0).abs() < 1e-10);
        assert_eq!(an.period, Some(3));
        let upper = an
            .fixed_points
            .iter()
            .find(|f| f.location.unwrap().im > 0.0)
            .unwrap();
        assert!((upper.location.unwrap() - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
        let cube = mobius_g(&ellipse()).power(3);
        assert!(cube.m12.abs() < 1e-12 && cube.m21.abs() < 1e-12);
        assert!((cube.m11 - cube.m22).abs() < 1e-12);
    }

    #[test]
    fn power_matches_repeated_application() {
        let f = mobius_f(&ellipse());
        let mut x = AxisCoord::Finite(0.3);
        for n in 1..12 {
            x = f.apply(x);
            let y = f.power(n).eval(0.3);
            match (x, y) {
                (AxisCoord::Finite(u), AxisCoord::Finite(v)) => assert!((u - v).abs() < 1e-10),
                (u, v) => assert_eq!(u, v),
            }
        }
    }

    #[test]
    fn circle_axis_cusps_first_reflection() {
        let (on, off) = iterate_axis_cusps(&unit(), 0.4, 1, Axis::Major).unwrap();
        assert!(on.finite().unwrap().distance(Point::new(-2.0, 0.0)) < 1e-12);
        assert!(off.finite().unwrap().distance(Point::new(-2.0 / 9.0, 0.0)) < 1e-12);
    }

    #[test]
    fn circle_pole_gives_cusp_at_infinity() {
        // f^2(0.25) = f(0.5) = pole
        let (on, _) = iterate_axis_cusps(&unit(), 0.25, 2, Axis::Major).unwrap();
        assert!(on.is_at_infinity());
    }

    #[test]
    fn ellipse_axis_cusps_approach_foci() {
        let c = 3f64.sqrt();
        let t = ellipse();
        let (even, _) = iterate_axis_cusps(&t, 0.2, 20, Axis::Major).unwrap();
        let (odd, _) = iterate_axis_cusps(&t, 0.2, 21, Axis::Major).unwrap();
        assert!(even.finite().unwrap().distance(Point::new(-c, 0.0)) < 1e-10);
        assert!(odd.finite().unwrap().distance(Point::new(c, 0.0)) < 1e-10);
    }

    #[test]
    fn circle_axis_cusps_approach_center() {
        let (far, _) = iterate_axis_cusps(&unit(), 0.3, 5000, Axis::Major).unwrap();
        assert!(far.finite().unwrap().norm() < 1e-3);
    }

    #[test]
    fn axis_errors() {
        let t = ellipse();
        assert_eq!(
            iterate_axis_cusps(&t, 3f64.sqrt(), 1, Axis::Major),
            Err(CausticError::FocusPoint)
        );
        assert_eq!(
            iterate_axis_cusps(&t, 1.5, 1, Axis::Minor),
            Err(CausticError::OutsidePoint)
        );
        assert_eq!(
            iterate_axis_cusps(&unit(), 0.0, 1, Axis::Major),
            Err(CausticError::FocusPoint)
        );
        assert!(MobiusMap::new(1.0, 2.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn g_cube_identity_on_points() {
        let g = mobius_g(&ellipse()).power(3);
        for k in 0..100 {
            let y = -0.99 + 0.02 * k as f64;
            assert!((g.eval(y).finite().unwrap() - y).abs() < 1e-10);
        }
    }
}
