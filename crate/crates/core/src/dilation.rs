//! The two dilating-cone families: ε-conic neighborhoods C_ε = cone(S_ε) and
//! Henig dilating cones C_(B,ε) = cone(B_ε), with membership tests and the
//! inclusion-chain checks relating them.

use crate::cones::{bounded_base, BasePolytope, Cone};
use crate::error::{Error, Result};
use crate::planar::{self, Planar};
use crate::sampling::cone_sphere_sample;
use crate::space::{pnorm, scl, Norm, Point, Space, SphereSample};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Union of planar sectors; the exact 2-D form of a (possibly non-convex)
/// dilated cone.
#[derive(Debug, Clone)]
pub(crate) struct SectorSet {
    pub sectors: Vec<Planar>,
}

impl SectorSet {
    pub fn dist(&self, norm: Norm, x: [f64; 2]) -> f64 {
        self.sectors
            .iter()
            .map(|s| planar::dist_to_planar(norm, s, x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, norm: Norm, x: [f64; 2], tol: f64) -> bool {
        self.dist(norm, x) <= tol
    }
}

/// An ε-conic neighborhood of a cone: the cone generated by the closed
/// ε-thickening of C ∩ S_X. Carries a mesh sample of the section for the
/// sampled membership backend and the exact sector description in 2-D.
#[derive(Debug, Clone)]
pub struct EpsNeighborhood {
    pub base_cone: Cone,
    pub eps: f64,
    pub sphere_sample: SphereSample,
    pub(crate) planar: Option<SectorSet>,
}

impl EpsNeighborhood {
    /// Build the neighborhood. `eps` in (0,1) is the theory's range; `eps = 1`
    /// is accepted operationally and yields the whole space (the thickening
    /// then reaches the origin).
    pub fn build(s: &Space, base_cone: Cone, eps: f64, mesh: f64, seed: u64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::invalid("eps", "must lie in (0, 1]"));
        }
        let sphere_sample = cone_sphere_sample(s, &base_cone, mesh, seed)?;
        let planar = if s.dim == 2 {
            Some(eps_sectors(s.norm, &base_cone.planar(s)?, eps))
        } else {
            None
        };
        Ok(EpsNeighborhood {
            base_cone,
            eps,
            sphere_sample,
            planar,
        })
    }
}

/// Exact sector description of cone(S_ε) in the plane.
fn eps_sectors(norm: Norm, base: &Planar, eps: f64) -> SectorSet {
    if eps >= 1.0 {
        return SectorSet {
            sectors: vec![Planar::Plane],
        };
    }
    let widen_l2 = |lo: f64, width: f64| {
        let d = eps.asin();
        Planar::sector(lo - d, width + 2.0 * d)
    };
    let widen_poly = |lo: f64, width: f64| {
        // Angular extremes of (chain ⊕ eps·ball) are attained at chain
        // vertices plus ball corners; angles vary monotonically along edges.
        let chain = planar::chain_points(norm, lo, width);
        let hi = lo + width;
        let mut lo_shift = 0.0_f64;
        let mut hi_shift = 0.0_f64;
        for v in &chain {
            for c in planar::ball_corners(norm) {
                let p = [v[0] + eps * c[0], v[1] + eps * c[1]];
                if p[0] == 0.0 && p[1] == 0.0 {
                    return Planar::Plane;
                }
                let a = planar::angle_of(&p);
                lo_shift = lo_shift.min(signed_diff(a, lo));
                hi_shift = hi_shift.max(signed_diff(a, hi));
            }
        }
        Planar::sector(lo + lo_shift, width - lo_shift + hi_shift)
    };
    let widen = |lo: f64, width: f64| match norm {
        Norm::L2 => widen_l2(lo, width),
        Norm::L1 | Norm::Linf => widen_poly(lo, width),
    };
    let sectors = match *base {
        Planar::Plane => vec![Planar::Plane],
        Planar::Ray(a) => vec![widen(a, 0.0)],
        Planar::Sector { lo, width } => vec![widen(lo, width)],
        Planar::Line(a) => vec![widen(a, 0.0), widen(a + std::f64::consts::PI, 0.0)],
    };
    SectorSet { sectors }
}

fn signed_diff(a: f64, b: f64) -> f64 {
    let d = planar::norm_angle(a - b);
    if d > std::f64::consts::PI {
        d - planar::TAU
    } else {
        d
    }
}

/// Membership in an ε-conic neighborhood: exact sector containment in 2-D;
/// otherwise a search over the scaling λ in [|x|/(1+ε), |x|/(1-ε)] of the
/// sampled section distance, with the covering radius added as slack.
pub fn eps_membership(s: &Space, n: &EpsNeighborhood, x: &Point, tol: f64) -> Result<bool> {
    s.check_dim(x.dim())?;
    let nx = pnorm(s.norm, &x.coords);
    if nx == 0.0 {
        return Ok(true);
    }
    if let Some(sectors) = &n.planar {
        let xhat = scl(&x.coords, 1.0 / nx);
        return Ok(sectors.contains(s.norm, [xhat[0], xhat[1]], tol));
    }
    if n.eps >= 1.0 {
        return Ok(true);
    }
    let slack = if n.sphere_sample.certified {
        n.sphere_sample.covering
    } else {
        0.0
    };
    let accept_at = n.eps + slack + tol;
    let d = min_scaled_sample_dist(
        s,
        &n.sphere_sample.points,
        &x.coords,
        n.eps,
        Some(accept_at),
    );
    Ok(d <= accept_at)
}

/// min over t = 1/λ in [(1-eps)/|x|, (1+eps)/|x|] of d(t·x, section sample):
/// every sample term is convex in t, so a grid plus golden refinement around
/// the best bracket settles the minimum to well below membership tolerances.
/// `early_exit_at` short-circuits as soon as the decision threshold is met.
fn min_scaled_sample_dist(
    s: &Space,
    sample: &[Point],
    x: &[f64],
    eps: f64,
    early_exit_at: Option<f64>,
) -> f64 {
    let nx = pnorm(s.norm, x);
    let t_lo = (1.0 - eps) / nx;
    let t_hi = (1.0 + eps) / nx;
    // Fast accept: scan the normalized point against the raw sample first.
    if let Some(cutoff) = early_exit_at {
        let p0 = scl(x, 1.0 / nx);
        for sp in sample {
            let d = pnorm(s.norm, &crate::space::sub(&p0, &sp.coords));
            if d <= cutoff {
                return d;
            }
        }
    }
    let f = |t: f64| -> f64 {
        sample
            .iter()
            .map(|sp| pnorm(s.norm, &crate::space::sub(&scl(x, t), &sp.coords)))
            .fold(f64::INFINITY, f64::min)
    };
    let grid = 48;
    let mut best = (f64::INFINITY, t_lo);
    for k in 0..=grid {
        let t = t_lo + (t_hi - t_lo) * k as f64 / grid as f64;
        let v = f(t);
        if v < best.0 {
            best = (v, t);
        }
        if let Some(cutoff) = early_exit_at {
            if v <= cutoff {
                return v;
            }
        }
    }
    let h = (t_hi - t_lo) / grid as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(t_lo), (best.1 + h).min(t_hi));
    for _ in 0..70 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi)).min(best.0)
}

/// A Henig dilating cone cone(B_ε) for a bounded base B and
/// 0 < ε < min(1, δ_B). Closed and convex in this range.
#[derive(Debug, Clone)]
pub struct HenigDilation {
    pub base: BasePolytope,
    pub eps: f64,
    pub(crate) planar: Option<Planar>,
}

impl HenigDilation {
    pub fn build(s: &Space, base: BasePolytope, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < base.delta_b.min(1.0)) {
            return Err(Error::invalid("eps", "must lie in (0, min(1, delta_B))"));
        }
        let planar = if s.dim == 2 {
            Some(henig_sector(s.norm, &base, eps))
        } else {
            None
        };
        Ok(HenigDilation { base, eps, planar })
    }
}

/// Exact sector of cone(B ⊕ ε·ball) in the plane: angular extremes are
/// attained on the vertex thickenings.
fn henig_sector(norm: Norm, base: &BasePolytope, eps: f64) -> Planar {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut ref_angle = None;
    for v in &base.vertices {
        let va = [v.coords[0], v.coords[1]];
        let r = ref_angle.get_or_insert(planar::angle_of(&va));
        match norm {
            Norm::L2 => {
                let n2 = pnorm(Norm::L2, &v.coords);
                let d = (eps / n2).clamp(-1.0, 1.0).asin();
                let c = signed_diff(planar::angle_of(&va), *r);
                lo = lo.min(c - d);
                hi = hi.max(c + d);
            }
            Norm::L1 | Norm::Linf => {
                for corner in planar::ball_corners(norm) {
                    let p = [va[0] + eps * corner[0], va[1] + eps * corner[1]];
                    let c = signed_diff(planar::angle_of(&p), *r);
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
            }
        }
    }
    let r = ref_angle.unwrap();
    Planar::sector(r + lo, hi - lo)
}

/// Membership in a Henig dilating cone: exact sector containment in 2-D;
/// otherwise minimize the convex map μ ↦ d(μx, conv B) by ternary search and
/// compare against ε.
pub fn henig_membership(s: &Space, h: &HenigDilation, x: &Point, tol: f64) -> Result<bool> {
    s.check_dim(x.dim())?;
    let nx = pnorm(s.norm, &x.coords);
    if nx == 0.0 {
        return Ok(true);
    }
    if let Some(sector) = &h.planar {
        let xhat = scl(&x.coords, 1.0 / nx);
        return Ok(planar::dist_to_planar(s.norm, sector, [xhat[0], xhat[1]]) <= tol);
    }
    Ok(henig_base_distance(s, h, &x.coords) <= h.eps + tol)
}

/// min over μ > 0 of d(μx, conv B); the violation margin of the membership
/// test is this value minus ε.
pub(crate) fn henig_base_distance(s: &Space, h: &HenigDilation, x: &[f64]) -> f64 {
    let nx = pnorm(s.norm, x);
    if nx == 0.0 {
        return 0.0;
    }
    let verts: Vec<&[f64]> = h
        .base
        .vertices
        .iter()
        .map(|p| p.coords.as_slice())
        .collect();
    let d_at = |mu: f64| crate::space::dist_to_polytope_raw(s.norm, &scl(x, mu), &verts);
    let mut lo = 0.0_f64;
    let mut hi = (h.base.m + h.eps + 1.0) / nx;
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if d_at(m1) <= d_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    d_at(0.5 * (lo + hi))
}

/// Rescale a bounded base so δ_B >= 1 (divide by the minimal norm).
pub fn normalize_base(s: &Space, c: &Cone) -> Result<BasePolytope> {
    let base = bounded_base(s, c)?.ok_or(Error::NoBoundedBase)?;
    if base.delta_b >= 1.0 {
        return Ok(base);
    }
    base.scaled(s, (1.0 + 1e-9) / base.delta_b)
}

/// Report of the inclusion-chain verification between the two dilation
/// families.
#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub eps: f64,
    pub eps_prime: f64,
    pub henig_in_eps_failures: usize,
    pub alpha_in_henig_failures: usize,
    pub min_henig_slack: f64,
    pub samples_checked: usize,
}

/// Verify, on seeded samples, that C_(B,ε) ⊂ C_ε and that members of
/// C_α \ {0} for α = ε'/2 (ε' = ε/(2M)) lie strictly inside C_(B,ε).
pub fn inclusion_check(
    s: &Space,
    c: &Cone,
    eps: f64,
    mesh: f64,
    seed: u64,
) -> Result<InclusionReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", "must lie in (0,1)"));
    }
    let base = normalize_base(s, c)?;
    let eps_prime = eps / (2.0 * base.m);
    let henig = HenigDilation::build(s, base.clone(), eps)?;
    let neighborhood = EpsNeighborhood::build(s, c.clone(), eps, mesh, seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let n_probes = 200;
    let mut henig_in_eps_failures = 0;
    let mut alpha_in_henig_failures = 0;
    let mut min_henig_slack = f64::INFINITY;

    // (a) members of C_(B,eps) must pass eps_membership.
    for _ in 0..n_probes {
        let probe = random_henig_member(s, &henig, &mut rng);
        if !eps_membership(s, &neighborhood, &probe, 1e-9)? {
            henig_in_eps_failures += 1;
        }
    }

    // (b) members of C_α \ {0}, α = ε'/2, must sit strictly inside C_(B,eps).
    let section = crate::sampling::cone_probes(s, c, 400, seed ^ 0x51ab)?;
    let alpha = eps_prime / 2.0;
    for _ in 0..n_probes {
        let idx = rng.random_range(0..section.len());
        let w = random_ball(s, &mut rng);
        let mut p = section[idx].coords.clone();
        for (pi, wi) in p.iter_mut().zip(&w) {
            *pi += alpha * wi;
        }
        let mu: f64 = 0.1 + 5.0 * rng.random::<f64>();
        let probe = scl(&p, mu);
        let slack = if s.dim == 2 {
            let sector = henig.planar.as_ref().unwrap();
            let nx = pnorm(s.norm, &probe);
            let xhat = scl(&probe, 1.0 / nx);
            let theta = planar::angle_of(&[xhat[0], xhat[1]]);
            if sector.interior_contains_angle(theta, 1e-12) {
                // Interior in angle: slack measured through the base map.
                henig.eps - henig_base_distance(s, &henig, &probe)
            } else {
                -1.0
            }
        } else {
            henig.eps - henig_base_distance(s, &henig, &probe)
        };
        if slack <= 0.0 {
            alpha_in_henig_failures += 1;
        }
        min_henig_slack = min_henig_slack.min(slack);
    }

    Ok(InclusionReport {
        eps,
        eps_prime,
        henig_in_eps_failures,
        alpha_in_henig_failures,
        min_henig_slack,
        samples_checked: 2 * n_probes,
    })
}

fn random_henig_member(s: &Space, h: &HenigDilation, rng: &mut ChaCha8Rng) -> Point {
    let k = h.base.vertices.len();
    let mut lambda: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
    let total: f64 = lambda.iter().sum();
    for l in lambda.iter_mut() {
        *l /= total.max(1e-12);
    }
    let mut p = vec![0.0; s.dim];
    for (l, v) in lambda.iter().zip(&h.base.vertices) {
        for (pi, vi) in p.iter_mut().zip(&v.coords) {
            *pi += l * vi;
        }
    }
    // Stay strictly inside the thickening to keep the probe a true member.
    let w = random_ball(s, rng);
    for (pi, wi) in p.iter_mut().zip(&w) {
        *pi += 0.999 * h.eps * wi;
    }
    let mu: f64 = 0.1 + 5.0 * rng.random::<f64>();
    Point::new(scl(&p, mu))
}

fn random_ball(s: &Space, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dir = crate::space::random_unit(rng, s.dim, s.norm);
    let r: f64 = rng.random::<f64>().powf(1.0 / s.dim as f64);
    scl(&dir, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp2() -> Space {
        Space::new(2, Norm::L2).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec())
    }

    fn cone45(s: &Space) -> Cone {
        Cone::polyhedral(s, vec![pt(&[1.0, 1.0]), pt(&[-1.0, 1.0])]).unwrap()
    }

    #[test]
    fn eps_neighborhood_half_plane() {
        // C = {y >= |x|} with ε = √2/2 dilates to the closed upper half-plane.
        let s = sp2();
        let n = EpsNeighborhood::build(&s, cone45(&s), 0.5_f64.sqrt(), 0.01, 42).unwrap();
        assert!(eps_membership(&s, &n, &pt(&[5.0, 0.1]), 1e-9).unwrap());
        assert!(eps_membership(&s, &n, &pt(&[5.0, 0.0]), 1e-9).unwrap());
        assert!(!eps_membership(&s, &n, &pt(&[0.0, -1.0]), 1e-9).unwrap());
        assert!(eps_membership(&s, &n, &pt(&[0.0, 0.0]), 0.0).unwrap());
    }

    #[test]
    fn eps_monotone_in_eps() {
        let s = sp2();
        let n1 = EpsNeighborhood::build(&s, cone45(&s), 0.1, 0.01, 42).unwrap();
        let n2 = EpsNeighborhood::build(&s, cone45(&s), 0.3, 0.01, 42).unwrap();
        for x in [[1.0, 0.5], [1.0, 0.2], [-1.0, 0.9], [0.4, -0.1]] {
            let m1 = eps_membership(&s, &n1, &pt(&x), 1e-9).unwrap();
            let m2 = eps_membership(&s, &n2, &pt(&x), 1e-9).unwrap();
            assert!(!m1 || m2, "monotonicity broken at {x:?}");
        }
    }

    #[test]
    fn eps_nonconvex_counterexample() {
        // The ε-neighborhood of a closed half-plane cone is never pointed:
        // x and -x both belong for x on the widened boundary.
        let s = sp2();
        let half =
            Cone::polyhedral(&s, vec![pt(&[0.0, 1.0]), pt(&[1.0, 0.0]), pt(&[0.0, -1.0])]).unwrap();
        let n = EpsNeighborhood::build(&s, half, 0.3, 0.01, 42).unwrap();
        let x = pt(&[0.0, 1.0]);
        let neg = pt(&[0.0, -1.0]);
        assert!(eps_membership(&s, &n, &x, 1e-9).unwrap());
        assert!(eps_membership(&s, &n, &neg, 1e-9).unwrap());
    }

    #[test]
    fn eps_pointed_at_small_eps() {
        let s = sp2();
        let n = EpsNeighborhood::build(&s, cone45(&s), 0.05, 0.005, 42).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = crate::space::random_unit(&mut rng, 2, Norm::L2);
            let both = eps_membership(&s, &n, &Point::new(u.clone()), 0.0).unwrap()
                && eps_membership(&s, &n, &Point::new(scl(&u, -1.0)), 0.0).unwrap();
            assert!(!both);
        }
    }

    #[test]
    fn henig_membership_examples() {
        let s = sp2();
        let base = BasePolytope::new(&s, vec![pt(&[1.0, 1.0]), pt(&[-1.0, 1.0])]).unwrap();
        let h = HenigDilation::build(&s, base, 0.05).unwrap();
        assert!(henig_membership(&s, &h, &pt(&[0.0, 1.0]), 0.0).unwrap());
        assert!(!henig_membership(&s, &h, &pt(&[1.0, -1.0]), 1e-9).unwrap());
        // d((1.05, 1), conv B) = 0.05: boundary member.
        assert!(henig_membership(&s, &h, &pt(&[1.05, 1.0]), 1e-9).unwrap());
        assert!(!henig_membership(&s, &h, &pt(&[1.12, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn henig_membership_3d_matches_base_distance() {
        let s = Space::new(3, Norm::L2).unwrap();
        let base = BasePolytope::new(
            &s,
            vec![
                pt(&[1.0, 0.0, 1.0]),
                pt(&[-1.0, 0.0, 1.0]),
                pt(&[0.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        let h = HenigDilation::build(&s, base, 0.1).unwrap();
        assert!(henig_membership(&s, &h, &pt(&[0.0, 0.5, 2.0]), 1e-9).unwrap());
        assert!(!henig_membership(&s, &h, &pt(&[0.0, 0.0, -1.0]), 1e-9).unwrap());
        // Scale invariance.
        let d1 = henig_membership(&s, &h, &pt(&[0.3, 0.2, 1.0]), 1e-9).unwrap();
        let d2 = henig_membership(&s, &h, &pt(&[3.0, 2.0, 10.0]), 1e-9).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn henig_convexity_on_random_members() {
        let s = sp2();
        let base = BasePolytope::new(&s, vec![pt(&[1.0, 1.0]), pt(&[-1.0, 1.0])]).unwrap();
        let h = HenigDilation::build(&s, base, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let a = random_henig_member(&s, &h, &mut rng);
            let b = random_henig_member(&s, &h, &mut rng);
            let t: f64 = rng.random();
            let mix = Point::new(
                a.coords
                    .iter()
                    .zip(&b.coords)
                    .map(|(x, y)| t * x + (1.0 - t) * y)
                    .collect(),
            );
            assert!(henig_membership(&s, &h, &mix, 1e-9).unwrap());
        }
    }

    #[test]
    fn normalize_base_scales_to_unit_delta() {
        let s = sp2();
        let c = cone45(&s);
        let b = normalize_base(&s, &c).unwrap();
        assert!(b.delta_b >= 1.0);
        // {y >= |x|} already has delta_B = 1 at height one.
        assert!((b.delta_b - 1.0).abs() < 1e-6);

        let ray = Cone::polyhedral(&s, vec![pt(&[2.0, 0.0])]).unwrap();
        let b = normalize_base(&s, &ray).unwrap();
        assert!((b.delta_b - 1.0).abs() < 1e-6);

        let line = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0]), pt(&[-1.0, 0.0])]).unwrap();
        assert!(normalize_base(&s, &line).is_err());
    }

    #[test]
    fn inclusion_check_examples() {
        let s = sp2();
        let r = inclusion_check(&s, &cone45(&s), 0.2, 0.01, 42).unwrap();
        assert_eq!(r.henig_in_eps_failures, 0);
        assert_eq!(r.alpha_in_henig_failures, 0);
        assert!(r.min_henig_slack > 0.0);

        let ray = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0])]).unwrap();
        let r = inclusion_check(&s, &ray, 0.1, 0.01, 42).unwrap();
        assert_eq!(r.henig_in_eps_failures, 0);
        assert_eq!(r.alpha_in_henig_failures, 0);

        assert!(inclusion_check(&s, &cone45(&s), 1.0, 0.01, 42).is_err());
    }

    #[test]
    fn cone_itself_inside_both_dilations() {
        let s = sp2();
        let c = cone45(&s);
        let n = EpsNeighborhood::build(&s, c.clone(), 0.1, 0.01, 42).unwrap();
        let base = normalize_base(&s, &c).unwrap();
        let h = HenigDilation::build(&s, base, 0.1).unwrap();
        let section = cone_sphere_sample(&s, &c, 0.02, 42).unwrap();
        for p in &section.points {
            assert!(eps_membership(&s, &n, p, 1e-9).unwrap());
            assert!(henig_membership(&s, &h, p, 1e-9).unwrap());
        }
    }
}
