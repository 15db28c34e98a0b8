//! Exact planar backend. In the plane every nontrivial convex cone is an
//! angular sector, so memberships, point-to-cone distances, infima of linear
//! functionals over C ∩ S_X, and hull gaps all have closed forms. The other
//! modules route their 2-D cases here; higher dimensions use mesh-certified
//! sampling instead.

use crate::space::{pnorm, Norm};

pub(crate) const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Angular tolerance for sector boundary tests. Inputs are normalized before
/// angles are taken, so this only absorbs `atan2` rounding.
pub(crate) const ANG_EPS: f64 = 1e-12;

/// A nontrivial cone in the plane.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Planar {
    Ray(f64),
    /// Closed angular sector `[lo, lo + width]`, `0 < width < 2π`.
    Sector {
        lo: f64,
        width: f64,
    },
    Line(f64),
    Plane,
}

impl Planar {
    pub fn sector(lo: f64, width: f64) -> Planar {
        if width <= 0.0 {
            Planar::Ray(norm_angle(lo))
        } else if width >= TAU {
            Planar::Plane
        } else {
            Planar::Sector {
                lo: norm_angle(lo),
                width,
            }
        }
    }

    pub fn contains_angle(&self, theta: f64, ang_tol: f64) -> bool {
        match *self {
            Planar::Plane => true,
            Planar::Ray(a) => circ_dist(theta, a) <= ang_tol,
            Planar::Line(a) => {
                circ_dist(theta, a) <= ang_tol
                    || circ_dist(theta, a + std::f64::consts::PI) <= ang_tol
            }
            Planar::Sector { lo, width } => {
                let off = norm_angle(theta - lo);
                off <= width + ang_tol || off >= TAU - ang_tol
            }
        }
    }

    pub fn negated(&self) -> Planar {
        match *self {
            Planar::Ray(a) => Planar::Ray(norm_angle(a + std::f64::consts::PI)),
            Planar::Line(a) => Planar::Line(a),
            Planar::Sector { lo, width } => Planar::sector(lo + std::f64::consts::PI, width),
            Planar::Plane => Planar::Plane,
        }
    }

    pub fn is_pointed(&self) -> bool {
        match *self {
            Planar::Ray(_) => true,
            Planar::Sector { width, .. } => width < std::f64::consts::PI - ANG_EPS,
            Planar::Line(_) | Planar::Plane => false,
        }
    }

    /// Strict interior containment of a direction (empty for rays and lines).
    pub fn interior_contains_angle(&self, theta: f64, ang_tol: f64) -> bool {
        match *self {
            Planar::Plane => true,
            Planar::Ray(_) | Planar::Line(_) => false,
            Planar::Sector { lo, width } => {
                let off = norm_angle(theta - lo);
                off > ang_tol && off < width - ang_tol
            }
        }
    }
}

pub(crate) fn norm_angle(a: f64) -> f64 {
    let mut x = a % TAU;
    if x < 0.0 {
        x += TAU;
    }
    if x >= TAU {
        x = 0.0;
    }
    x
}

/// Circular distance in [0, π].
pub(crate) fn circ_dist(a: f64, b: f64) -> f64 {
    let d = norm_angle(a - b);
    d.min(TAU - d)
}

pub(crate) fn angle_of(x: &[f64]) -> f64 {
    norm_angle(x[1].atan2(x[0]))
}

/// The point of the unit sphere (of the given norm) in direction `theta`.
pub(crate) fn unit2(norm: Norm, theta: f64) -> [f64; 2] {
    let d = [theta.cos(), theta.sin()];
    let n = pnorm(norm, &d);
    [d[0] / n, d[1] / n]
}

pub(crate) fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Corners of the unit ball of a polyhedral norm, counterclockwise.
pub(crate) fn ball_corners(norm: Norm) -> &'static [[f64; 2]] {
    match norm {
        Norm::Linf => &[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
        Norm::L1 => &[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        Norm::L2 => &[],
    }
}

/// Convex cone generated by nonzero vectors, as a planar sector.
pub(crate) fn sector_from_generators(gens: &[[f64; 2]]) -> Planar {
    let mut angles: Vec<f64> = gens.iter().map(|g| angle_of(g)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| circ_dist(*a, *b) <= ANG_EPS);
    if angles.len() >= 2 && circ_dist(angles[0], *angles.last().unwrap()) <= ANG_EPS {
        angles.pop();
    }
    if angles.len() == 1 {
        return Planar::Ray(angles[0]);
    }
    // Largest circular gap between consecutive directions decides the shape.
    let n = angles.len();
    let mut gap_at = 0;
    let mut gap = -1.0;
    for i in 0..n {
        let next = angles[(i + 1) % n] + if i + 1 == n { TAU } else { 0.0 };
        let g = next - angles[i];
        if g > gap {
            gap = g;
            gap_at = i;
        }
    }
    let pi = std::f64::consts::PI;
    if gap > pi + ANG_EPS {
        let lo = angles[(gap_at + 1) % n];
        Planar::sector(lo, TAU - gap)
    } else if gap >= pi - ANG_EPS {
        // Width exactly π: a half-plane if some generator lies strictly
        // inside the complement interval, otherwise just the line.
        let lo = angles[(gap_at + 1) % n];
        let interior = angles.iter().any(|&a| {
            let off = norm_angle(a - lo);
            off > ANG_EPS && off < pi - ANG_EPS
        });
        if interior {
            Planar::sector(lo, pi)
        } else {
            Planar::Line(lo)
        }
    } else {
        Planar::Plane
    }
}

/// The Bishop-Phelps-style set `{x : f(x) >= alpha * |x|}` as a sector.
/// Requires `0 <= alpha <= |f|_dual` and `f != 0`.
pub(crate) fn sector_from_bp(norm: Norm, f: [f64; 2], alpha: f64) -> Planar {
    match norm {
        Norm::L2 => {
            let r = (f[0] * f[0] + f[1] * f[1]).sqrt();
            let phi = angle_of(&f);
            let c = (alpha / r).clamp(-1.0, 1.0);
            let beta = c.acos();
            if beta <= ANG_EPS {
                Planar::Ray(phi)
            } else {
                Planar::sector(phi - beta, 2.0 * beta)
            }
        }
        Norm::L1 | Norm::Linf => {
            let corners = ball_corners(norm);
            let fv = |p: [f64; 2]| f[0] * p[0] + f[1] * p[1];
            let mut entry = None;
            let mut exit = None;
            for i in 0..4 {
                let a = corners[i];
                let b = corners[(i + 1) % 4];
                let (fa, fb) = (fv(a), fv(b));
                let ina = fa >= alpha;
                let inb = fb >= alpha;
                if !ina && inb {
                    let t = (alpha - fa) / (fb - fa);
                    entry = Some([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                } else if ina && !inb {
                    let t = (alpha - fa) / (fb - fa);
                    exit = Some([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                }
            }
            match (entry, exit) {
                (Some(e), Some(x)) => {
                    let lo = angle_of(&e);
                    let hi = angle_of(&x);
                    let width = norm_angle(hi - lo);
                    Planar::sector(lo, width)
                }
                // No crossings: alpha above the sphere maximum leaves only
                // the maximizing direction (or nothing; callers guard).
                _ => {
                    let best = (0..4)
                        .map(|i| corners[i])
                        .max_by(|a, b| fv(*a).total_cmp(&fv(*b)))
                        .unwrap();
                    Planar::Ray(angle_of(&best))
                }
            }
        }
    }
}

/// Exact distance from a point to a ray `{t * u(theta) : t >= 0}`.
pub(crate) fn dist_to_ray(norm: Norm, x: [f64; 2], theta: f64) -> f64 {
    let u = [theta.cos(), theta.sin()];
    match norm {
        Norm::L2 => {
            let t = dot2(x, u).max(0.0);
            pnorm(norm, &[x[0] - t * u[0], x[1] - t * u[1]])
        }
        Norm::L1 | Norm::Linf => {
            let mut cands = vec![0.0];
            for i in 0..2 {
                if u[i].abs() > 1e-300 {
                    let t = x[i] / u[i];
                    if t > 0.0 {
                        cands.push(t);
                    }
                }
            }
            if norm == Norm::Linf {
                for (s0, s1) in [(1.0, 1.0), (1.0, -1.0)] {
                    let den = s0 * u[0] + s1 * u[1];
                    if den.abs() > 1e-300 {
                        let t = (s0 * x[0] + s1 * x[1]) / den;
                        if t > 0.0 {
                            cands.push(t);
                        }
                    }
                }
            }
            cands
                .iter()
                .map(|&t| pnorm(norm, &[x[0] - t * u[0], x[1] - t * u[1]]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Exact distance from a point to a planar cone in the given norm.
pub(crate) fn dist_to_planar(norm: Norm, cone: &Planar, x: [f64; 2]) -> f64 {
    if x[0] == 0.0 && x[1] == 0.0 {
        return 0.0;
    }
    match *cone {
        Planar::Plane => 0.0,
        Planar::Ray(a) => dist_to_ray(norm, x, a),
        Planar::Line(a) => {
            dist_to_ray(norm, x, a).min(dist_to_ray(norm, x, a + std::f64::consts::PI))
        }
        Planar::Sector { lo, width } => {
            if cone.contains_angle(angle_of(&x), 0.0) {
                0.0
            } else {
                dist_to_ray(norm, x, lo).min(dist_to_ray(norm, x, lo + width))
            }
        }
    }
}

/// Vertices of the polygonal chain `sector ∩ S_X` for a polyhedral norm,
/// ordered counterclockwise. Not defined for ℓ2 (that case is an arc).
pub(crate) fn chain_points(norm: Norm, lo: f64, width: f64) -> Vec<[f64; 2]> {
    debug_assert!(norm != Norm::L2);
    let mut pts = vec![(0.0, unit2(norm, lo))];
    for c in ball_corners(norm) {
        let off = norm_angle(angle_of(c) - lo);
        if off > ANG_EPS && off < width - ANG_EPS {
            pts.push((off, *c));
        }
    }
    if width > ANG_EPS {
        pts.push((width, unit2(norm, lo + width)));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.into_iter().map(|(_, p)| p).collect()
}

/// Minimum of a functional over `sector ∩ S_X`, with the minimizer.
/// `width` may be 2π to mean the full sphere.
pub(crate) fn min_pairing(norm: Norm, f: [f64; 2], lo: f64, width: f64) -> (f64, [f64; 2]) {
    match norm {
        Norm::L2 => {
            let r = (f[0] * f[0] + f[1] * f[1]).sqrt();
            if r == 0.0 {
                return (0.0, unit2(norm, lo));
            }
            let phi = angle_of(&f);
            // The minimum of f·u(θ) = r·cos(θ-φ) sits at the sector point
            // angularly farthest from φ, capped at the antipode.
            let anti = norm_angle(phi + std::f64::consts::PI);
            let off = norm_angle(anti - lo);
            if width >= TAU - ANG_EPS || off <= width {
                return (-r, unit2(norm, anti));
            }
            let d_lo = circ_dist(phi, lo);
            let d_hi = circ_dist(phi, lo + width);
            if d_lo >= d_hi {
                (r * d_lo.cos(), unit2(norm, lo))
            } else {
                (r * d_hi.cos(), unit2(norm, lo + width))
            }
        }
        Norm::L1 | Norm::Linf => {
            let pts = if width >= TAU - ANG_EPS {
                ball_corners(norm).to_vec()
            } else {
                chain_points(norm, lo, width)
            };
            pts.into_iter()
                .map(|p| (f[0] * p[0] + f[1] * p[1], p))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap()
        }
    }
}

/// Unit points of `bd(K) ∩ S_X` for a planar cone.
pub(crate) fn boundary_unit_points(norm: Norm, k: &Planar) -> Vec<[f64; 2]> {
    match *k {
        Planar::Plane => vec![],
        Planar::Ray(a) => vec![unit2(norm, a)],
        Planar::Line(a) => vec![unit2(norm, a), unit2(norm, a + std::f64::consts::PI)],
        Planar::Sector { lo, width } => vec![unit2(norm, lo), unit2(norm, lo + width)],
    }
}

/// Result of an exact planar hull-gap computation.
#[derive(Debug, Clone)]
pub(crate) struct PlanarGap {
    pub gap: f64,
    /// Nearest point in co(C ∩ S_X).
    pub p: [f64; 2],
    /// Nearest point in co((bd K ∩ S_X) ∪ {0}).
    pub q: [f64; 2],
}

/// Exact distance between `co(C ∩ S_X)` and `co((bd K ∩ S_X) ∪ {0})` in the
/// space norm, with a nearest pair.
#[cfg(test)]
pub(crate) fn hull_gap(norm: Norm, c: &Planar, k: &Planar) -> PlanarGap {
    let mut t_pts = boundary_unit_points(norm, k);
    t_pts.push([0.0, 0.0]);
    hull_gap_points(norm, c, &t_pts)
}

/// Exact distance between `co(C ∩ S_X)` and the hull of an explicit point
/// list (the K-side boundary points together with the origin).
pub(crate) fn hull_gap_points(norm: Norm, c: &Planar, t_pts: &[[f64; 2]]) -> PlanarGap {
    let zero = PlanarGap {
        gap: 0.0,
        p: [0.0, 0.0],
        q: [0.0, 0.0],
    };
    let (lo, width) = match *c {
        Planar::Plane | Planar::Line(_) => return zero,
        Planar::Sector { lo, width } => {
            if width >= std::f64::consts::PI - ANG_EPS {
                // The chord of a half-circle or wider passes through 0, and
                // 0 always belongs to the other hull.
                return zero;
            }
            (lo, width)
        }
        Planar::Ray(a) => (a, 0.0),
    };
    match norm {
        Norm::L2 => hull_gap_l2(lo, width, t_pts),
        Norm::L1 | Norm::Linf => {
            let u_pts = chain_points(norm, lo, width);
            hull_gap_polyhedral(norm, &u_pts, t_pts)
        }
    }
}

/// ℓ2 case: maximize over unit directions d the separation
/// `min_{u in arc} <d,u> - max_{t} <d,t>`; each piece is a sinusoid, so a
/// scan plus golden refinement of every local maximum reaches the exact value
/// to machine precision.
fn hull_gap_l2(lo: f64, width: f64, t_pts: &[[f64; 2]]) -> PlanarGap {
    let arc_min = |psi: f64| -> (f64, f64) {
        // min over θ in [lo, lo+width] of cos(psi - θ), with the argmin angle.
        let anti = norm_angle(psi + std::f64::consts::PI);
        let off = norm_angle(anti - lo);
        if off <= width {
            (-1.0, anti)
        } else {
            let d_lo = circ_dist(psi, lo);
            let d_hi = circ_dist(psi, lo + width);
            if d_lo >= d_hi {
                (d_lo.cos(), lo)
            } else {
                (d_hi.cos(), norm_angle(lo + width))
            }
        }
    };
    let g = |psi: f64| -> f64 {
        let d = [psi.cos(), psi.sin()];
        let (m, _) = arc_min(psi);
        let tmax = t_pts
            .iter()
            .map(|t| dot2(d, *t))
            .fold(f64::NEG_INFINITY, f64::max);
        m - tmax
    };
    let (best, psi) = maximize_circular(&g, 8192);
    if best <= 0.0 {
        return PlanarGap {
            gap: 0.0,
            p: [0.0, 0.0],
            q: [0.0, 0.0],
        };
    }
    // Recover the nearest pair from the minimizing faces at the optimal
    // direction. The U-side face is an arc point or the whole chord (on
    // ties); the T-side face is a vertex or an edge of the triangle.
    let d = [psi.cos(), psi.sin()];
    let face_u: ([f64; 2], [f64; 2]) = {
        let anti = norm_angle(psi + std::f64::consts::PI);
        if norm_angle(anti - lo) <= width {
            let p = [anti.cos(), anti.sin()];
            (p, p)
        } else {
            let d_lo = circ_dist(psi, lo);
            let d_hi = circ_dist(psi, lo + width);
            let p_lo = [lo.cos(), lo.sin()];
            let hi = lo + width;
            let p_hi = [hi.cos(), hi.sin()];
            if (d_lo - d_hi).abs() <= 1e-9 {
                (p_lo, p_hi)
            } else if d_lo > d_hi {
                (p_lo, p_lo)
            } else {
                (p_hi, p_hi)
            }
        }
    };
    let tmax = t_pts
        .iter()
        .map(|t| dot2(d, *t))
        .fold(f64::NEG_INFINITY, f64::max);
    let t_face: Vec<[f64; 2]> = t_pts
        .iter()
        .copied()
        .filter(|t| dot2(d, *t) >= tmax - 1e-12)
        .collect();
    let face_t = if t_face.len() >= 2 {
        (t_face[0], t_face[1])
    } else {
        (t_face[0], t_face[0])
    };
    let (p, q) = closest_segment_pair(face_u, face_t);
    PlanarGap { gap: best, p, q }
}

/// Closest pair of points between two segments under the Euclidean norm.
fn closest_segment_pair(a: ([f64; 2], [f64; 2]), b: ([f64; 2], [f64; 2])) -> ([f64; 2], [f64; 2]) {
    let u = [a.1[0] - a.0[0], a.1[1] - a.0[1]];
    let v = [b.1[0] - b.0[0], b.1[1] - b.0[1]];
    let w = [a.0[0] - b.0[0], a.0[1] - b.0[1]];
    let (uu, uv, vv) = (dot2(u, u), dot2(u, v), dot2(v, v));
    let (uw, vw) = (dot2(u, w), dot2(v, w));
    let det = uu * vv - uv * uv;
    let mut cands: Vec<(f64, f64)> = vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)];
    if det > 1e-18 {
        cands.push((
            ((uv * vw - vv * uw) / det).clamp(0.0, 1.0),
            ((uu * vw - uv * uw) / det).clamp(0.0, 1.0),
        ));
    }
    // Clamped single-variable optima for each fixed endpoint of the other.
    if uu > 1e-18 {
        for t in [0.0, 1.0] {
            let s = ((uv * t - uw) / uu).clamp(0.0, 1.0);
            cands.push((s, t));
        }
    }
    if vv > 1e-18 {
        for s in [0.0, 1.0] {
            let t = ((uv * s + vw) / vv).clamp(0.0, 1.0);
            cands.push((s, t));
        }
    }
    let scored: Vec<(f64, f64, f64)> = cands
        .into_iter()
        .map(|(s, t)| {
            let p = [a.0[0] + s * u[0], a.0[1] + s * u[1]];
            let q = [b.0[0] + t * v[0], b.0[1] + t * v[1]];
            let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
            (d2, s, t)
        })
        .collect();
    let best = scored.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    // Parallel faces admit a continuum of nearest pairs; average the tied
    // parameters to return the symmetric representative.
    let ties: Vec<&(f64, f64, f64)> = scored
        .iter()
        .filter(|c| c.0 <= best + 1e-12 * (1.0 + best))
        .collect();
    let s = ties.iter().map(|c| c.1).sum::<f64>() / ties.len() as f64;
    let t = ties.iter().map(|c| c.2).sum::<f64>() / ties.len() as f64;
    (
        [a.0[0] + s * u[0], a.0[1] + s * u[1]],
        [b.0[0] + t * v[0], b.0[1] + t * v[1]],
    )
}

/// Polyhedral-norm case: the two hulls are polygons, so the gap is the exact
/// p-norm distance from the origin to the difference polygon.
fn hull_gap_polyhedral(norm: Norm, u_pts: &[[f64; 2]], t_pts: &[[f64; 2]]) -> PlanarGap {
    // Tagged difference points u_i - t_j.
    let mut diff: Vec<([f64; 2], usize, usize)> = Vec::with_capacity(u_pts.len() * t_pts.len());
    for (i, u) in u_pts.iter().enumerate() {
        for (j, t) in t_pts.iter().enumerate() {
            diff.push(([u[0] - t[0], u[1] - t[1]], i, j));
        }
    }
    let hull = convex_hull(&mut diff);
    if hull.len() >= 3 && polygon_contains_origin(&hull) {
        return PlanarGap {
            gap: 0.0,
            p: [0.0, 0.0],
            q: [0.0, 0.0],
        };
    }
    let mut best = f64::INFINITY;
    let mut best_pair = ([0.0, 0.0], [0.0, 0.0]);
    let n = hull.len();
    for e in 0..n.max(1) {
        let a = hull[e % n];
        let b = hull[(e + 1) % n];
        let (d, t) = dist_origin_segment(norm, a.0, b.0);
        if d < best {
            best = d;
            let lerp2 =
                |x: [f64; 2], y: [f64; 2]| [x[0] + t * (y[0] - x[0]), x[1] + t * (y[1] - x[1])];
            best_pair = (lerp2(u_pts[a.1], u_pts[b.1]), lerp2(t_pts[a.2], t_pts[b.2]));
        }
        if n == 1 {
            break;
        }
    }
    PlanarGap {
        gap: best.max(0.0),
        p: best_pair.0,
        q: best_pair.1,
    }
}

type Tagged = ([f64; 2], usize, usize);

/// Andrew monotone chain; returns the hull counterclockwise.
pub(crate) fn convex_hull(pts: &mut Vec<Tagged>) -> Vec<Tagged> {
    pts.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.0[1].total_cmp(&b.0[1])));
    pts.dedup_by(|a, b| a.0 == b.0);
    let n = pts.len();
    if n <= 2 {
        return pts.clone();
    }
    let turn = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Tagged> = Vec::new();
    for p in pts.iter() {
        while lower.len() >= 2
            && turn(lower[lower.len() - 2].0, lower[lower.len() - 1].0, p.0) <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Tagged> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && turn(upper[upper.len() - 2].0, upper[upper.len() - 1].0, p.0) <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon_contains_origin(hull: &[Tagged]) -> bool {
    let n = hull.len();
    let scale = hull
        .iter()
        .map(|p| p.0[0].abs().max(p.0[1].abs()))
        .fold(1.0_f64, f64::max);
    for i in 0..n {
        let a = hull[i].0;
        let b = hull[(i + 1) % n].0;
        let c = (b[0] - a[0]) * (0.0 - a[1]) - (b[1] - a[1]) * (0.0 - a[0]);
        if c < -1e-12 * scale {
            return false;
        }
    }
    true
}

/// Exact p-norm distance from the origin to a segment, with the parameter of
/// the minimizer. Candidates are the endpoints plus every kink of the
/// piecewise-linear objective.
pub(crate) fn dist_origin_segment(norm: Norm, a: [f64; 2], b: [f64; 2]) -> (f64, f64) {
    let d = [b[0] - a[0], b[1] - a[1]];
    let mut cands = vec![0.0, 1.0];
    match norm {
        Norm::L2 => {
            let dd = dot2(d, d);
            if dd > 0.0 {
                cands.push((-dot2(a, d) / dd).clamp(0.0, 1.0));
            }
        }
        Norm::L1 | Norm::Linf => {
            for i in 0..2 {
                if d[i].abs() > 1e-300 {
                    let t = -a[i] / d[i];
                    if t > 0.0 && t < 1.0 {
                        cands.push(t);
                    }
                }
            }
            if norm == Norm::Linf {
                for (s0, s1) in [(1.0, 1.0), (1.0, -1.0_f64)] {
                    let den = s0 * d[0] + s1 * d[1];
                    if den.abs() > 1e-300 {
                        let t = -(s0 * a[0] + s1 * a[1]) / den;
                        if t > 0.0 && t < 1.0 {
                            cands.push(t);
                        }
                    }
                }
            }
        }
    }
    cands
        .into_iter()
        .map(|t| (pnorm(norm, &[a[0] + t * d[0], a[1] + t * d[1]]), t))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .unwrap()
}

/// Global maximum of a circular function: dense scan, then golden-section
/// refinement of every scan-local maximum.
pub(crate) fn maximize_circular(f: &dyn Fn(f64) -> f64, n_scan: usize) -> (f64, f64) {
    let vals: Vec<f64> = (0..n_scan)
        .map(|k| f(TAU * k as f64 / n_scan as f64))
        .collect();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..n_scan {
        let prev = vals[(k + n_scan - 1) % n_scan];
        let next = vals[(k + 1) % n_scan];
        if vals[k] >= prev && vals[k] >= next {
            let lo = TAU * (k as f64 - 1.0) / n_scan as f64;
            let hi = TAU * (k as f64 + 1.0) / n_scan as f64;
            let (v, x) = golden_max(f, lo, hi);
            if v > best.0 {
                best = (v, norm_angle(x));
            }
        }
    }
    best
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (f(mid), mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn generator_sectors() {
        // {y >= |x|} from its two boundary rays.
        let s = sector_from_generators(&[[1.0, 1.0], [-1.0, 1.0]]);
        match s {
            Planar::Sector { lo, width } => {
                assert!((lo - PI / 4.0).abs() < 1e-12);
                assert!((width - PI / 2.0).abs() < 1e-12);
            }
            other => panic!("expected sector, got {other:?}"),
        }
        assert_eq!(sector_from_generators(&[[2.0, 0.0]]), Planar::Ray(0.0));
        assert!(matches!(
            sector_from_generators(&[[1.0, 0.0], [-1.0, 0.0]]),
            Planar::Line(_)
        ));
        assert!(matches!(
            sector_from_generators(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]),
            Planar::Sector { .. }
        ));
        assert_eq!(
            sector_from_generators(&[[1.0, 0.0], [-0.5, 0.9], [-0.5, -0.9]]),
            Planar::Plane
        );
    }

    #[test]
    fn bp_sector_l2_is_symmetric_cap() {
        // f=(0,1), alpha = cos(π/4): the 45-degree cone {y >= |x|}.
        let s = sector_from_bp(Norm::L2, [0.0, 1.0], (0.5_f64).sqrt());
        match s {
            Planar::Sector { lo, width } => {
                assert!((lo - PI / 4.0).abs() < 1e-9);
                assert!((width - PI / 2.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bp_sector_linf_top_edge() {
        // f=(0,1), alpha = 1 under ℓ∞: exactly the cone over the top edge.
        let s = sector_from_bp(Norm::Linf, [0.0, 1.0], 1.0);
        match s {
            Planar::Sector { lo, width } => {
                assert!((lo - PI / 4.0).abs() < 1e-9);
                assert!((width - PI / 2.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ray_distances() {
        assert!((dist_to_ray(Norm::L2, [0.0, 1.0], 0.0) - 1.0).abs() < 1e-12);
        assert!((dist_to_ray(Norm::L2, [-1.0, 0.0], 0.0) - 1.0).abs() < 1e-12);
        assert!(dist_to_ray(Norm::L2, [3.0, 0.0], 0.0) < 1e-12);
        assert!((dist_to_ray(Norm::Linf, [0.0, 2.0], 0.0) - 2.0).abs() < 1e-12);
        assert!((dist_to_ray(Norm::L1, [-1.0, -1.0], 0.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sector_distance_inside_and_out() {
        let s = Planar::sector(PI / 4.0, PI / 2.0);
        assert_eq!(dist_to_planar(Norm::L2, &s, [0.0, 1.0]), 0.0);
        // Distance from (1,0) to the ray at 45 degrees is sin(45°).
        let d = dist_to_planar(Norm::L2, &s, [1.0, 0.0]);
        assert!((d - (PI / 4.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn min_pairing_on_arc() {
        // f=(0,1) over {y>=|x|} ∩ S_2: minimum cos(π/4) at the edge rays.
        let (m, arg) = min_pairing(Norm::L2, [0.0, 1.0], PI / 4.0, PI / 2.0);
        assert!((m - (0.5_f64).sqrt()).abs() < 1e-12);
        assert!((arg[1] - (0.5_f64).sqrt()).abs() < 1e-9);
        // Antipode inside a wide sector.
        let (m, _) = min_pairing(Norm::L2, [0.0, 1.0], 0.0, TAU);
        assert!((m + 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_gap_norm_sensitive_pair_l2() {
        // C = {y >= √3 |x|}, K = {y >= |x|}: gap (√3 - √2)/2.
        let c = sector_from_generators(&[[1.0, 3.0_f64.sqrt()], [-1.0, 3.0_f64.sqrt()]]);
        let k = sector_from_generators(&[[1.0, 1.0], [-1.0, 1.0]]);
        let g = hull_gap(Norm::L2, &c, &k);
        let expect = (3.0_f64.sqrt() - 2.0_f64.sqrt()) / 2.0;
        assert!(
            (g.gap - expect).abs() < 1e-9,
            "gap={} expect={}",
            g.gap,
            expect
        );
        assert!(g.p[0].abs() < 1e-6 && (g.p[1] - 3.0_f64.sqrt() / 2.0).abs() < 1e-6);
        assert!(g.q[0].abs() < 1e-6 && (g.q[1] - 2.0_f64.sqrt() / 2.0).abs() < 1e-6);
    }

    #[test]
    fn hull_gap_norm_sensitive_pair_linf_fails() {
        let c = sector_from_generators(&[[1.0, 3.0_f64.sqrt()], [-1.0, 3.0_f64.sqrt()]]);
        let k = sector_from_generators(&[[1.0, 1.0], [-1.0, 1.0]]);
        let g = hull_gap(Norm::Linf, &c, &k);
        assert_eq!(g.gap, 0.0);
    }

    #[test]
    fn hull_gap_nested_bp() {
        // Nested Bishop-Phelps cones: gap is exactly alpha2 - alpha1.
        let f = [0.0, 1.0];
        let c = sector_from_bp(Norm::L2, f, 0.6);
        let k = sector_from_bp(Norm::L2, f, 0.3);
        let g = hull_gap(Norm::L2, &c, &k);
        assert!((g.gap - 0.3).abs() < 1e-9, "gap={}", g.gap);
    }

    #[test]
    fn origin_segment_distance() {
        let (d, _) = dist_origin_segment(Norm::L2, [-1.0, 2.0], [1.0, 2.0]);
        assert!((d - 2.0).abs() < 1e-12);
        let (d, _) = dist_origin_segment(Norm::L1, [2.0, -1.0], [2.0, 1.0]);
        assert!((d - 2.0).abs() < 1e-12);
        let (d, _) = dist_origin_segment(Norm::Linf, [3.0, -5.0], [3.0, 5.0]);
        assert!((d - 3.0).abs() < 1e-12);
    }
}
