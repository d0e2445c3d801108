use core::fmt;

/// Why a single reflection could not be carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectFailure {
    /// The line misses the open interior of the table.
    NoIntersection,
    /// The line grazes the boundary.
    Tangential,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CausticError {
    /// A reflection failed. `step` is 1-based within a composed reflection,
    /// `sample` is the family parameter when the ray came from a family.
    Reflect {
        failure: ReflectFailure,
        step: u32,
        sample: Option<f64>,
    },
    InvalidTable {
        a: f64,
        b: f64,
    },
    InvalidParameter(&'static str),
    /// The point is (numerically) a focus of the table; for a circle, its center.
    FocusPoint,
    /// The operation needs a point strictly inside the table.
    OutsidePoint,
    /// The operation needs a point strictly outside the table.
    InsidePoint,
    /// The ray is not tangent to the requested confocal conic.
    NotTangent {
        discriminant: f64,
    },
    /// Degenerate confocal conic (an axis or the segment between the foci).
    DegenerateConic,
    /// The source is a focus: every caustic collapses to a point.
    DegenerateSource,
    /// The family is a pencil (`n = 0`): the envelope is a point and cusps are undefined.
    DegeneratePencil,
    /// Object distance zero in the mirror equation.
    ZeroDistance,
    /// `alpha_s` touches zero without changing sign near `s`.
    UnresolvedCrossing {
        s: f64,
    },
    /// The cusp function touches zero without changing sign near `s`.
    UnresolvedRoot {
        s: f64,
    },
}

impl CausticError {
    pub(crate) fn at_sample(self, s: f64) -> Self {
        match self {
            CausticError::Reflect { failure, step, .. } => CausticError::Reflect {
                failure,
                step,
                sample: Some(s),
            },
            other => other,
        }
    }
}

impl fmt::Display for ReflectFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflectFailure::NoIntersection => f.write_str("ray misses the table"),
            ReflectFailure::Tangential => f.write_str("ray grazes the boundary"),
        }
    }
}

impl fmt::Display for CausticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CausticError::Reflect {
                failure,
                step,
                sample: Some(s),
            } => write!(f, "{failure} at reflection {step} (sample s={s})"),
            CausticError::Reflect { failure, step, .. } => {
                write!(f, "{failure} at reflection {step}")
            }
            CausticError::InvalidTable { a, b } => {
                write!(f, "invalid table a={a}, b={b}: need 0 < b <= a")
            }
            CausticError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            CausticError::FocusPoint => f.write_str("point is a focus of the table"),
            CausticError::OutsidePoint => f.write_str("point is not strictly inside the table"),
            CausticError::InsidePoint => f.write_str("point is not strictly outside the table"),
            CausticError::NotTangent { discriminant } => {
                write!(
                    f,
                    "ray is not tangent to the conic (discriminant {discriminant:e})"
                )
            }
            CausticError::ZeroDistance => f.write_str("object distance is zero"),
            CausticError::DegenerateConic => f.write_str("confocal conic is degenerate"),
            CausticError::DegenerateSource => {
                f.write_str("source is a focus; the caustic degenerates to a point")
            }
            CausticError::DegeneratePencil => {
                f.write_str("pencil of rays (n = 0) has no cusps; its envelope is a point")
            }
            CausticError::UnresolvedCrossing { s } => {
                write!(f, "vertical tangent without sign change near s={s}")
            }
            CausticError::UnresolvedRoot { s } => {
                write!(f, "even-contact zero of the cusp function near s={s}")
            }
        }
    }
}

impl core::error::Error for CausticError {}
