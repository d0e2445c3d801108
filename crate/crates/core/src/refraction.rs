//! Refraction of a parallel beam entering a circular lens.
//!
//! The beam travels along `+x`. A beam line meeting the circle of radius `R`
//! at `R (cos u, sin u)` refracts into the line
//!
//! ```text
//! alpha(u) = u + pi + asin(sin u / mu),   p(u) = -(R / mu) sin u.
//! ```
//!
//! The illuminated half is `cos u < 0`. The formula extends analytically to
//! the whole circle, and the caustic is computed on that closed family: its
//! cusps sit at the grazing parameters `u = +-pi/2`, which the open half only
//! reaches in the limit.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::cusp::{find_cusps, Cusp};
use crate::family::{Caustic, Derivatives, Domain, LineFamily, RayFamily, RayJet};
use crate::geometry::{ConicTable, EnvelopePoint, Point, Ray};
use crate::{CausticError, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Parameter margin kept clear of the grazing ends of the illuminated half.
pub const GRAZING_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractionSetup {
    mu: f64,
    radius: f64,
}

impl RefractionSetup {
    pub fn new(mu: f64, radius: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 1.0) {
            return Err(CausticError::InvalidParameter(
                "refraction index must exceed 1",
            ));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(CausticError::InvalidParameter("radius must be positive"));
        }
        Ok(RefractionSetup { mu, radius })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Entry point, incidence and refraction angles and refracted ray for the
    /// beam line entering at angle `u`.
    pub fn refract(&self, u: f64) -> Refraction {
        let (su, cu) = u.sin_cos();
        let entry = Point::new(self.radius * cu, self.radius * su);
        // angle between the beam and the inward normal -(cos u, sin u)
        let incidence = (-cu).clamp(-1.0, 1.0).acos();
        let deviation = (su / self.mu).asin();
        Refraction {
            u,
            entry,
            incidence,
            refraction: deviation.abs(),
            ray: Ray::through(entry, u + PI + deviation),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refraction {
    pub u: f64,
    pub entry: Point,
    pub incidence: f64,
    pub refraction: f64,
    pub ray: Ray,
}

impl Refraction {
    /// `|sin i - mu sin r|`.
    pub fn snell_residual(&self, mu: f64) -> f64 {
        (self.incidence.sin() - mu * self.refraction.sin()).abs()
    }
}

/// The refracted beam as a family in the entry angle `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractedBeam {
    pub setup: RefractionSetup,
    pub domain: Domain,
}

impl RayFamily for RefractedBeam {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn ray(&self, u: f64) -> Result<Ray> {
        Ok(self.exact(u).ray)
    }

    fn exact_jet(&self, u: f64) -> Option<Result<RayJet>> {
        Some(Ok(self.exact(u)))
    }
}

impl RefractedBeam {
    fn exact(&self, u: f64) -> RayJet {
        let (mu, r) = (self.setup.mu, self.setup.radius);
        let (su, cu) = u.sin_cos();
        let w = (mu * mu - su * su).sqrt();
        RayJet {
            ray: Ray::new(u + PI + (su / mu).asin(), -r / mu * su),
            alpha_s: 1.0 + cu / w,
            p_s: -r / mu * cu,
            alpha_ss: su * (1.0 - mu * mu) / (w * w * w),
            p_ss: r / mu * su,
        }
    }
}

/// The refracted rays of the illuminated half, `u` in
/// `(pi/2, 3pi/2)` shrunk by `GRAZING_MARGIN`.
pub fn refract_parallel_beam(setup: &RefractionSetup, samples: usize) -> Result<LineFamily> {
    let beam = RefractedBeam {
        setup: *setup,
        domain: Domain::Interval {
            start: FRAC_PI_2 + GRAZING_MARGIN,
            end: 3.0 * FRAC_PI_2 - GRAZING_MARGIN,
        },
    };
    LineFamily::sample(Arc::new(beam), samples, Derivatives::Auto)
}

/// Refraction data at every sample of the illuminated half.
pub fn refraction_samples(setup: &RefractionSetup, samples: usize) -> Vec<Refraction> {
    let domain = Domain::Interval {
        start: FRAC_PI_2 + GRAZING_MARGIN,
        end: 3.0 * FRAC_PI_2 - GRAZING_MARGIN,
    };
    domain
        .samples(samples)
        .into_iter()
        .map(|u| setup.refract(u))
        .collect()
}

#[derive(Debug, Clone)]
pub struct RefractionCaustic {
    pub caustic: Caustic,
    pub cusps: Vec<Cusp>,
    /// Distance of each cusp from the lens center, `None` at infinity.
    pub radii: Vec<Option<f64>>,
}

impl RefractionCaustic {
    /// Radii of the cusps off the beam axis.
    pub fn off_axis_radii(&self) -> Vec<f64> {
        self.cusps
            .iter()
            .filter_map(|c| c.location.finite())
            .filter(|q| q.y.abs() > 1e-6 * self.caustic.table.map_or(1.0, |t| t.a()))
            .map(|q| q.norm())
            .collect()
    }
}

/// Caustic and cusps of the refracted beam, over the closed analytic family.
pub fn refraction_caustic(setup: &RefractionSetup, samples: usize) -> Result<RefractionCaustic> {
    let beam = RefractedBeam {
        setup: *setup,
        domain: Domain::Periodic {
            start: 0.0,
            period: TAU,
        },
    };
    let family = LineFamily::sample(Arc::new(beam), samples, Derivatives::Auto)?;
    let caustic = Caustic::from_family(
        family,
        EnvelopePoint::AtInfinity { direction: 0.0 },
        1,
        Some(ConicTable::circle(setup.radius)?),
    );
    let cusps = find_cusps(&caustic)?;
    let radii = cusps
        .iter()
        .map(|c| c.location.finite().map(Point::norm))
        .collect();
    Ok(RefractionCaustic {
        caustic,
        cusps,
        radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::wrap;

    fn setup(mu: f64) -> RefractionSetup {
        RefractionSetup::new(mu, 1.0).unwrap()
    }

    #[test]
    fn head_on_ray_goes_straight() {
        let r = setup(2.0).refract(PI);
        assert!(r.incidence.abs() < 1e-15 && r.refraction.abs() < 1e-15);
        assert!(r.ray.p.abs() < 1e-15);
        assert!(wrap(r.ray.alpha, TAU).min(TAU - wrap(r.ray.alpha, TAU)) < 1e-15);
    }

    #[test]
    fn grazing_limit() {
        let r = setup(2.0).refract(FRAC_PI_2 + 1e-9);
        assert!((r.incidence - FRAC_PI_2).abs() < 1e-8);
        assert!((r.refraction - (0.5f64).asin()).abs() < 1e-8);
    }

    #[test]
    fn refracted_ray_passes_through_entry_point() {
        let s = setup(1.5);
        for k in 1..100 {
            let u = FRAC_PI_2 + PI * k as f64 / 100.0;
            let r = s.refract(u);
            assert!(r.ray.residual(r.entry).abs() < 1e-14);
            assert!(r.snell_residual(1.5) < 1e-12);
            // the refracted ray points into the disc
            let inward = -(r.entry.x * r.ray.direction().x + r.entry.y * r.ray.direction().y);
            assert!(inward > 0.0);
        }
    }

    #[test]
    fn beam_is_symmetric() {
        let f = refract_parallel_beam(&setup(2.0), 513).unwrap();
        let s = f.samples();
        for i in 0..s.len() {
            let a = s[i].jet.ray;
            let b = s[s.len() - 1 - i].jet.ray;
            assert!((a.p + b.p).abs() < 1e-12);
            assert!(
                (wrap(a.alpha + b.alpha, TAU) - 2.0 * PI).abs() < 1e-9
                    || wrap(a.alpha + b.alpha, TAU) < 1e-9
            );
        }
    }

    #[test]
    fn exact_jet_matches_differences() {
        let beam = RefractedBeam {
            setup: setup(1.5),
            domain: Domain::Periodic {
                start: 0.0,
                period: TAU,
            },
        };
        for k in 0..20 {
            let u = 0.1 + 0.3 * k as f64;
            let exact = beam.exact(u);
            let approx = crate::family::stencil_jet(&beam, u, 1e-3).unwrap();
            assert!((exact.alpha_s - approx.alpha_s).abs() < 1e-9);
            assert!((exact.alpha_ss - approx.alpha_ss).abs() < 1e-7);
        }
    }

    #[test]
    fn off_axis_cusps_on_reduced_circle() {
        for mu in [1.5, 2.0, 3.0] {
            let rc = refraction_caustic(&setup(mu), 4096).unwrap();
            let radii = rc.off_axis_radii();
            assert_eq!(radii.len(), 2, "{:?}", rc.cusps);
            for r in radii {
                assert!((r - 1.0 / mu).abs() < 1e-5, "{} {}", mu, r);
            }
        }
    }

    #[test]
    fn caustic_scales_with_radius() {
        let a = refraction_caustic(&RefractionSetup::new(2.0, 1.0).unwrap(), 1024).unwrap();
        let b = refraction_caustic(&RefractionSetup::new(2.0, 2.0).unwrap(), 1024).unwrap();
        for (p, q) in a.caustic.points.iter().zip(&b.caustic.points) {
            if let (Some(p), Some(q)) = (p.finite(), q.finite()) {
                assert!(p.scale(2.0).distance(q) < 1e-9 * (1.0 + q.norm()));
            }
        }
    }

    #[test]
    fn rejects_bad_index() {
        assert!(RefractionSetup::new(1.0, 1.0).is_err());
        assert!(RefractionSetup::new(2.0, 0.0).is_err());
    }
}
