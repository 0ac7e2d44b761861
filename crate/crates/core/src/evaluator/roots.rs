use super::{cauchy_derivative_real, cauchy_real, EvalError, RealPoint};
use crate::spectral::SpectralData;

#[derive(Clone, Copy, Debug)]
enum End {
    Node(usize),
    Value(f64),
    NegInf,
    PosInf,
}

fn coeff(c: &[f64], k: usize) -> f64 {
    c.get(k).copied().unwrap_or(0.0)
}

/// Signed difference `p − q`, exact when `q` is anchored at `p`'s anchor.
fn diff(data: &SpectralData, p: &RealPoint, q: &RealPoint) -> f64 {
    match (p.anchor, q.anchor) {
        (_, Some(a)) => p.minus_node(data, a) - q.offset,
        (Some(a), None) => -(q.minus_node(data, a) - p.offset),
        (None, None) => p.value - q.value,
    }
}

fn midpoint(data: &SpectralData, lo: &RealPoint, hi: &RealPoint) -> RealPoint {
    if lo.anchor == hi.anchor {
        let off = 0.5 * (lo.offset + hi.offset);
        return match lo.anchor {
            Some(a) => RealPoint::near(data, a, off),
            None => RealPoint::plain(off),
        };
    }
    let half = 0.5 * diff(data, hi, lo);
    match lo.anchor {
        Some(a) if half.abs() <= (hi.value - data.t[a]).abs() => RealPoint::near(data, a, lo.offset + half),
        _ => match hi.anchor {
            Some(b) => RealPoint::near(data, b, hi.offset - half),
            None => RealPoint::plain(lo.value + half),
        },
    }
}

fn end_point(data: &SpectralData, e: End, frac_from: f64, width: f64, from_left: bool) -> RealPoint {
    let off = if from_left { frac_from * width } else { -frac_from * width };
    match e {
        End::Node(k) => RealPoint::near(data, k, off),
        End::Value(x) => RealPoint::plain(x + off),
        _ => unreachable!(),
    }
}

/// Ordered sample points strictly inside the interval `(l, r)`.
fn samples(data: &SpectralData, l: End, r: End) -> Vec<RealPoint> {
    let pos = |e: End| match e {
        End::Node(k) => data.t[k],
        End::Value(x) => x,
        End::NegInf => f64::NEG_INFINITY,
        End::PosInf => f64::INFINITY,
    };
    let (xl, xr) = (pos(l), pos(r));
    let mut out = Vec::new();
    match (l, r) {
        (End::NegInf, End::PosInf) => {
            for j in (-60..1020).rev() {
                out.push(RealPoint::plain(-(2f64).powi(j)));
            }
            out.push(RealPoint::plain(0.0));
            for j in -60..1020 {
                out.push(RealPoint::plain((2f64).powi(j)));
            }
        }
        (End::NegInf, _) => {
            let s = xr.abs().max(1.0);
            for j in (-60..1020).rev() {
                let w = s * (2f64).powi(j);
                if w.is_finite() && (xr - w).is_finite() {
                    out.push(end_point(data, r, w, 1.0, false));
                }
            }
        }
        (_, End::PosInf) => {
            let s = xl.abs().max(1.0);
            for j in -60..1020 {
                let w = s * (2f64).powi(j);
                if w.is_finite() && (xl + w).is_finite() {
                    out.push(end_point(data, l, w, 1.0, true));
                }
            }
        }
        _ => {
            let w = match (l, r) {
                (End::Node(a), _) => RealPoint::near(data, a, 0.0),
                (End::Value(x), _) => RealPoint::plain(x),
                _ => unreachable!(),
            };
            let width = match r {
                End::Node(b) => -w.minus_node(data, b),
                End::Value(x) => x - w.value,
                _ => unreachable!(),
            };
            for j in (7..63).rev() {
                out.push(end_point(data, l, (2f64).powi(-j), width, true));
            }
            for i in 1..64 {
                let f = i as f64 / 64.0;
                if f <= 0.5 {
                    out.push(end_point(data, l, f, width, true));
                } else {
                    out.push(end_point(data, r, 1.0 - f, width, false));
                }
            }
            for j in 7..63 {
                out.push(end_point(data, r, (2f64).powi(-j), width, false));
            }
        }
    }
    out
}

/// Adds samples ever closer to a pole endpoint until the sign matches the
/// pole's one-sided limit, so roots hugging a node are bracketed.
fn extend_towards_poles(
    data: &SpectralData,
    c: &[f64],
    l: End,
    r: End,
    mut pts: Vec<RealPoint>,
    mut vals: Vec<f64>,
) -> (Vec<RealPoint>, Vec<f64>) {
    let eval = |p: &RealPoint| cauchy_real(data, c, p).map(|x| x.0).unwrap_or(f64::NAN);
    if let (End::Node(k), Some(first)) = (l, pts.first().copied()) {
        let limit = coeff(c, k).signum();
        let mut off = first.minus_node(data, k);
        let mut pre = Vec::new();
        let mut v = vals[0];
        while v.signum() != limit && off > 0.0 {
            off *= 2f64.powi(-8);
            let p = RealPoint::near(data, k, off);
            v = eval(&p);
            pre.push((p, v));
        }
        if !pre.is_empty() {
            pre.reverse();
            let (mut p2, mut v2): (Vec<_>, Vec<_>) = pre.into_iter().unzip();
            p2.extend(pts);
            v2.extend(vals);
            pts = p2;
            vals = v2;
        }
    }
    if let (End::Node(k), Some(last)) = (r, pts.last().copied()) {
        let limit = -coeff(c, k).signum();
        let mut off = last.minus_node(data, k);
        let mut v = *vals.last().unwrap();
        while v.signum() != limit && off < 0.0 {
            off *= 2f64.powi(-8);
            let p = RealPoint::near(data, k, off);
            v = eval(&p);
            pts.push(p);
            vals.push(v);
        }
    }
    (pts, vals)
}

/// A few Newton steps past the stopping rule, kept only while `|f|` decreases.
fn polish(data: &SpectralData, c: &[f64], mut x: RealPoint, mut fx: f64) -> RealPoint {
    for _ in 0..3 {
        if fx == 0.0 {
            break;
        }
        let d = cauchy_derivative_real(data, c, &x);
        let step = fx / d;
        if !step.is_finite() {
            break;
        }
        let cand = match x.anchor {
            Some(a) => RealPoint::near(data, a, x.offset - step),
            None => RealPoint::plain(x.value - step),
        };
        let Ok((fc, _)) = cauchy_real(data, c, &cand) else { break };
        if fc.abs() >= fx.abs() {
            break;
        }
        x = cand;
        fx = fc;
    }
    x
}

/// Refines a sign-change bracket by bisection with safeguarded Newton steps.
fn refine(data: &SpectralData, c: &[f64], mut lo: RealPoint, mut hi: RealPoint, s_lo: f64) -> RealPoint {
    let eval = |p: &RealPoint| cauchy_real(data, c, p).unwrap_or((f64::NAN, f64::NAN));
    let mut x = midpoint(data, &lo, &hi);
    let mut last_width = diff(data, &hi, &lo);
    for _ in 0..400 {
        let (fx, scale) = eval(&x);
        if fx == 0.0 || fx.abs() <= 1e-12 * scale {
            return polish(data, c, x, fx);
        }
        if fx.signum() == s_lo {
            lo = x;
        } else {
            hi = x;
        }
        let width = diff(data, &hi, &lo);
        let rel = if x.anchor.is_some() { x.offset.abs() } else { x.value.abs() };
        if width <= 1e-14 * rel || width <= f64::MIN_POSITIVE {
            return x;
        }
        let d = cauchy_derivative_real(data, c, &x);
        let step = fx / d;
        let cand = match x.anchor {
            Some(a) => RealPoint::near(data, a, x.offset - step),
            None => RealPoint::plain(x.value - step),
        };
        let inside = diff(data, &cand, &lo) > 0.0 && diff(data, &hi, &cand) > 0.0;
        let next = if d != 0.0 && step.is_finite() && inside && step.abs() < 0.5 * last_width {
            cand
        } else {
            midpoint(data, &lo, &hi)
        };
        last_width = width;
        if diff(data, &next, &lo) <= 0.0 || diff(data, &hi, &next) <= 0.0 {
            return x;
        }
        x = next;
    }
    x
}

/// All real zeros of `Σ c_n/(x − t_n)` in `(u, v)`; infinite endpoints are allowed.
///
/// Zeros are located through sign changes on a grid that is dyadically refined
/// towards every pole, so clusters of roots within one sub-interval closer than
/// the grid spacing can be missed.
/// Value of the sum exceeds its rounding floor.
fn resolved(data: &SpectralData, c: &[f64], p: &RealPoint) -> bool {
    cauchy_real(data, c, p).is_ok_and(|(v, m)| m >= f64::MIN_POSITIVE / f64::EPSILON && v.abs() > 64.0 * f64::EPSILON * m)
}

pub fn find_real_roots(data: &SpectralData, c: &[f64], u: f64, v: f64) -> Result<Vec<RealPoint>, EvalError> {
    // roots are scale invariant; unit weights keep the sums out of the subnormal range
    let top = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let normalized: Vec<f64>;
    let c = if top > 0.0 && top.is_finite() {
        normalized = c.iter().map(|x| x / top).collect();
        &normalized[..]
    } else {
        c
    };
    let mut ends = vec![if u == f64::NEG_INFINITY { End::NegInf } else { End::Value(u) }];
    for k in 0..data.len() {
        if data.t[k] > u && data.t[k] < v && coeff(c, k) != 0.0 {
            ends.push(End::Node(k));
        }
    }
    ends.push(if v == f64::INFINITY { End::PosInf } else { End::Value(v) });
    if let (End::Value(a), End::Value(b)) = (ends[0], ends[ends.len() - 1]) {
        if let Some(k) = data.node_index(a) {
            ends[0] = End::Node(k);
        }
        let last = ends.len() - 1;
        if let Some(k) = data.node_index(b) {
            ends[last] = End::Node(k);
        }
    }
    let mut roots = Vec::new();
    for w in ends.windows(2) {
        let pts = samples(data, w[0], w[1]);
        let vals: Vec<f64> = pts
            .iter()
            .map(|p| cauchy_real(data, c, p).map(|x| x.0).unwrap_or(f64::NAN))
            .collect();
        let (pts, vals) = extend_towards_poles(data, c, w[0], w[1], pts, vals);
        let mut prev: Option<usize> = None;
        for i in 0..pts.len() {
            let fi = vals[i];
            if !fi.is_finite() || !resolved(data, c, &pts[i]) {
                continue;
            }
            if fi == 0.0 {
                roots.push(pts[i]);
                prev = None;
                continue;
            }
            if let Some(p) = prev {
                if vals[p].signum() != fi.signum() {
                    roots.push(refine(data, c, pts[p], pts[i], vals[p].signum()));
                }
            }
            prev = Some(i);
        }
    }
    if roots.is_empty() {
        return Err(EvalError::NoSignChange { lo: u, hi: v });
    }
    Ok(roots)
}

/// Number of sign changes of `Σ c_n/(x − t_n)` over `n` samples strictly inside `(lo, hi)`.
///
/// Half of the samples are uniform; the rest are geometrically graded towards
/// both ends, down to relative distance `2^-1000`.
pub fn count_sign_changes(data: &SpectralData, c: &[f64], lo: &RealPoint, hi: &RealPoint, n: usize) -> usize {
    let width = diff(data, hi, lo);
    let graded = n / 4;
    let uniform = n - 2 * graded;
    // (from_left, fraction of the width measured from that end)
    let mut left: Vec<f64> = Vec::new();
    let mut right: Vec<f64> = Vec::new();
    for i in 1..=uniform {
        let f = i as f64 / (uniform + 1) as f64;
        if f <= 0.5 {
            left.push(f);
        } else {
            right.push(1.0 - f);
        }
    }
    for i in 0..graded {
        let e = -1.0 - 999.0 * i as f64 / graded.saturating_sub(1).max(1) as f64;
        left.push(e.exp2());
        right.push(e.exp2());
    }
    left.sort_by(f64::total_cmp);
    left.dedup();
    right.sort_by(|a, b| b.total_cmp(a));
    right.dedup();
    let pts = left
        .into_iter()
        .map(|f| match lo.anchor {
            Some(a) => RealPoint::near(data, a, lo.offset + f * width),
            None => RealPoint::plain(lo.value + f * width),
        })
        .chain(right.into_iter().filter(|&f| f < 0.5).map(|f| match hi.anchor {
            Some(b) => RealPoint::near(data, b, hi.offset - f * width),
            None => RealPoint::plain(hi.value - f * width),
        }));
    let mut prev = 0.0;
    let mut changes = 0;
    for p in pts {
        let Ok((val, _)) = cauchy_real(data, c, &p) else { continue };
        if val != 0.0 {
            if prev != 0.0 && val.signum() != prev {
                changes += 1;
            }
            prev = val.signum();
        }
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TailModel;

    fn data(t: &[f64]) -> SpectralData {
        SpectralData::new(t.to_vec(), vec![1.0; t.len()], TailModel::none()).unwrap()
    }

    #[test]
    fn symmetric_pair() {
        let d = data(&[1.0, 3.0]);
        let r = find_real_roots(&d, &[1.0, 1.0], 1.0, 3.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_case() {
        // 1/x + 4/(x−5) = 0 shifted by one, since 0 is not a legal node
        let d = data(&[1.0, 6.0]);
        let r = find_real_roots(&d, &[1.0, 4.0], 1.0, 6.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn interlacing_for_positive_coefficients() {
        let t: Vec<f64> = (1..=12).map(|n| (n as f64).powf(1.5)).collect();
        let d = data(&t);
        let c: Vec<f64> = (0..12).map(|n| 1.0 + n as f64 * 0.3).collect();
        let r = find_real_roots(&d, &c, t[0], t[11]).unwrap();
        assert_eq!(r.len(), 11);
        for (k, p) in r.iter().enumerate() {
            assert!(p.value > t[k] && p.value < t[k + 1]);
        }
    }

    #[test]
    fn root_extremely_close_to_a_node() {
        // c = (1, 1e-20): the root sits at distance ~1e-20 from the second node
        let d = data(&[1.0, 1e8]);
        let r = find_real_roots(&d, &[1.0, 1e-20], 1.0, 1e8).unwrap();
        assert_eq!(r.len(), 1);
        let off = r[0].minus_node(&d, 1);
        let expect = -1e-20 * (1e8 - 1.0);
        assert!((off - expect).abs() < 1e-10 * expect.abs(), "{off}");
    }

    #[test]
    fn no_sign_change_is_reported() {
        let d = data(&[1.0, 2.0]);
        assert!(matches!(
            find_real_roots(&d, &[1.0, -1.0], 1.0, 2.0),
            Err(EvalError::NoSignChange { .. })
        ));
    }
}
