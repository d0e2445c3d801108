//! Sign-change scanning and bisection on sampled functions.

use alloc::vec::Vec;

use crate::Result;

/// Width (in the family parameter) to which roots are bisected.
pub const ROOT_WIDTH: f64 = 1e-10;

#[inline]
fn positive(v: f64) -> bool {
    v >= 0.0
}

/// Indices `i` such that `values[i]` and `values[i + 1]` differ in sign. For a
/// periodic sequence the pair `(last, first)` is also checked and reported as
/// `len - 1`. Zero counts as positive.
pub fn sign_changes(values: &[f64], periodic: bool) -> Vec<usize> {
    let n = values.len();
    if n < 2 {
        return Vec::new();
    }
    let pairs = if periodic { n } else { n - 1 };
    (0..pairs)
        .filter(|&i| positive(values[i]) != positive(values[(i + 1) % n]))
        .collect()
}

/// Indices of local minima of `|values|` where the sequence approaches zero
/// without changing sign: the parabola through the three neighbouring samples
/// has its extremum within `rel_tol * max|values|` of zero, or crosses zero.
pub fn touching_zeros(values: &[f64], periodic: bool, rel_tol: f64) -> Vec<usize> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let range = if periodic { 0..n } else { 1..n - 1 };
    let mut out = Vec::new();
    for i in range {
        let prev = values[(i + n - 1) % n];
        let here = values[i];
        let next = values[(i + 1) % n];
        if positive(prev) != positive(here) || positive(here) != positive(next) {
            continue;
        }
        let sgn = if positive(here) { 1.0 } else { -1.0 };
        let (u, v, w) = (sgn * prev, sgn * here, sgn * next);
        if v > u || v > w {
            continue;
        }
        let curv = u - 2.0 * v + w;
        let vertex = if curv > 0.0 {
            v - (w - u) * (w - u) / (8.0 * curv)
        } else {
            v
        };
        if vertex <= rel_tol * scale {
            out.push(i);
        }
    }
    out
}

/// Subintervals used to rescan a near-touch.
pub const RESCAN_POINTS: usize = 64;

/// Outcome of rescanning a near-touch on a finer grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Rescan {
    /// Sign changes the coarse samples stepped over, as `(lo, hi, f(lo))`.
    Brackets(Vec<(f64, f64, f64)>),
    /// The function stays clear of zero.
    Clear,
    /// The function touches zero without changing sign.
    Touch,
}

/// Re-samples `f` on `[lo, hi]`. Without a sign change, the parabola through
/// the fine minimum of `|f|` and its neighbours decides between a near miss
/// and a touch within `floor`.
pub fn rescan<F>(mut f: F, lo: f64, hi: f64, floor: f64) -> Result<Rescan>
where
    F: FnMut(f64) -> Result<f64>,
{
    let step = (hi - lo) / RESCAN_POINTS as f64;
    let mut xs = Vec::with_capacity(RESCAN_POINTS + 1);
    let mut vs = Vec::with_capacity(RESCAN_POINTS + 1);
    for k in 0..=RESCAN_POINTS {
        let x = lo + step * k as f64;
        xs.push(x);
        vs.push(f(x)?);
    }
    let changes = sign_changes(&vs, false);
    if !changes.is_empty() {
        return Ok(Rescan::Brackets(
            changes
                .into_iter()
                .map(|i| (xs[i], xs[i + 1], vs[i]))
                .collect(),
        ));
    }
    let sgn = if positive(vs[0]) { 1.0 } else { -1.0 };
    let (k, _) = vs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, v)| {
            if sgn * v < best.1 {
                (k, sgn * v)
            } else {
                best
            }
        });
    let mut vertex = sgn * vs[k];
    if k > 0 && k < RESCAN_POINTS {
        let (u, v, w) = (sgn * vs[k - 1], sgn * vs[k], sgn * vs[k + 1]);
        let curv = u - 2.0 * v + w;
        if curv > 0.0 {
            vertex = v - (w - u) * (w - u) / (8.0 * curv);
        }
    }
    Ok(if vertex <= floor {
        Rescan::Touch
    } else {
        Rescan::Clear
    })
}

/// Bisection of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have different
/// signs (zero counting as positive), down to an interval of `width`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, f_lo: f64, width: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let lo_pos = positive(f_lo);
    for _ in 0..200 {
        if (hi - lo).abs() <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if positive(f(mid)?) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
