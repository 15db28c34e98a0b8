//! The strict-separation-property gap engine, the Bishop-Phelps hull-bound
//! checks, and search/verification of separation witnesses interpolating a
//! Bishop-Phelps structure between a cone and its dilation.

use crate::cones::{classify_aug_pair, infimum_on_sphere, AugClass, Cone};
use crate::dilation::{
    eps_membership, henig_base_distance, henig_membership, EpsNeighborhood, HenigDilation,
};
use crate::error::{Error, Result};
use crate::planar::{self, Planar};
use crate::qp::{dot, min_norm_point};
use crate::sampling::{boundary_sphere_sample, cone_sphere_sample};
use crate::space::{
    dist_to_polytope_raw, dual_norm, pnorm, sample_unit_sphere, scl, sub, Functional, Norm, Point,
    Space,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Verdict of an SSP test. `holds_certified` requires a positive lower bound
/// after covering-radius slack; `fails_certified` means the sampled hulls
/// already touch (sampled hulls sit inside the true ones, so their gap can
/// only over-estimate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    HoldsCertified,
    FailsCertified,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::HoldsCertified => "holds_certified",
            Verdict::FailsCertified => "fails_certified",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

pub const FAIL_TOL: f64 = 1e-7;

/// Result of the hull-gap computation behind the strict separation property.
#[derive(Debug, Clone)]
pub struct SspReport {
    pub gap_sampled: f64,
    pub covering_radius: f64,
    pub gap_lower_bound: f64,
    pub verdict: Verdict,
    /// Nearest pair: first in co(C ∩ S_X), second in co((bd K ∩ S_X)_0).
    pub nearest_pair: (Point, Point),
    /// Normalized difference of the nearest pair, oriented second-minus-first
    /// so that its negation is positive on C.
    pub separating_functional: Functional,
    /// Whether the exact planar path produced this report.
    pub exact: bool,
}

/// Either an ordinary cone or one of the two dilation families, wherever the
/// separation machinery accepts both.
#[derive(Clone, Copy)]
pub enum ConeLikeRef<'a> {
    Cone(&'a Cone),
    Eps(&'a EpsNeighborhood),
    Henig(&'a HenigDilation),
}

impl<'a> From<&'a Cone> for ConeLikeRef<'a> {
    fn from(c: &'a Cone) -> Self {
        ConeLikeRef::Cone(c)
    }
}
impl<'a> From<&'a EpsNeighborhood> for ConeLikeRef<'a> {
    fn from(c: &'a EpsNeighborhood) -> Self {
        ConeLikeRef::Eps(c)
    }
}
impl<'a> From<&'a HenigDilation> for ConeLikeRef<'a> {
    fn from(c: &'a HenigDilation) -> Self {
        ConeLikeRef::Henig(c)
    }
}

impl<'a> ConeLikeRef<'a> {
    pub fn member(&self, s: &Space, x: &Point, tol: f64) -> Result<bool> {
        match self {
            ConeLikeRef::Cone(c) => crate::cones::membership(s, c, x, tol),
            ConeLikeRef::Eps(n) => eps_membership(s, n, x, tol),
            ConeLikeRef::Henig(h) => henig_membership(s, h, x, tol),
        }
    }

    /// Sectors of the planar form (singleton except for line dilations).
    pub(crate) fn planar_sectors(&self, s: &Space) -> Result<Vec<Planar>> {
        Ok(match self {
            ConeLikeRef::Cone(c) => vec![c.planar(s)?],
            ConeLikeRef::Eps(n) => n.planar.as_ref().expect("planar backend").sectors.clone(),
            ConeLikeRef::Henig(h) => vec![h.planar.clone().expect("planar backend")],
        })
    }

    /// Strict interior test for a unit vector, conservative in n-D: a point
    /// is declared interior only with slack beyond the sampling resolution.
    fn interior_unit(&self, s: &Space, u: &[f64], buffer: f64) -> Result<bool> {
        if s.dim == 2 {
            let theta = planar::angle_of(&[u[0], u[1]]);
            return Ok(self
                .planar_sectors(s)?
                .iter()
                .any(|sec| sec.interior_contains_angle(theta, 1e-12)));
        }
        match self {
            ConeLikeRef::Henig(h) => Ok(henig_base_distance(s, h, u) < h.eps - buffer - 1e-9),
            ConeLikeRef::Eps(n) => {
                let slack = if n.sphere_sample.certified {
                    n.sphere_sample.covering
                } else {
                    return Ok(false);
                };
                let d = sampled_scaled_dist(s, n, u);
                Ok(d < n.eps - slack - buffer - 1e-9)
            }
            ConeLikeRef::Cone(c) => match &c.repr {
                crate::cones::ConeRepr::BishopPhelps { f, alpha } => {
                    Ok(f.apply_raw(u) - alpha > buffer + 1e-9)
                }
                crate::cones::ConeRepr::Sublevel { f, alpha } => {
                    Ok(f.apply_raw(u) + alpha < -buffer - 1e-9)
                }
                _ => Err(Error::precondition(
                    "interior test unsupported for this cone in n-D".to_string(),
                )),
            },
        }
    }
}

fn sampled_scaled_dist(s: &Space, n: &EpsNeighborhood, u: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    let grid = 48;
    let nx = pnorm(s.norm, u);
    let t_lo = (1.0 - n.eps).max(0.0) / nx;
    let t_hi = (1.0 + n.eps) / nx;
    for k in 0..=grid {
        let t = t_lo + (t_hi - t_lo) * k as f64 / grid as f64;
        let p = scl(u, t);
        for sp in &n.sphere_sample.points {
            let d = pnorm(s.norm, &sub(&p, &sp.coords));
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Quantify the strict separation property of (C, K): the distance between
/// co(C ∩ S_X) and co((bd K ∩ S_X) ∪ {0}) in the space norm. Exact in the
/// plane; mesh-sampled with covering-radius correction elsewhere.
pub fn ssp_gap(s: &Space, c: &Cone, k: ConeLikeRef<'_>, mesh: f64, seed: u64) -> Result<SspReport> {
    if s.dim == 2 {
        return ssp_gap_planar(s, c, k);
    }
    let p_sample = cone_sphere_sample(s, c, mesh, seed)?;
    if p_sample.points.is_empty() {
        return Err(Error::DegenerateCone("empty C ∩ S_X".to_string()));
    }
    let q_sample = boundary_sample(s, k, mesh, seed)?;
    let mut q_points = q_sample.points;
    q_points.push(Point::origin(s.dim));

    let (gap_sampled, qp_gap, p_best, q_best) = hull_distance(s, &p_sample.points, &q_points);
    let covering = p_sample.covering.max(q_sample.covering);
    // Discount both the covering slack and the solver's own duality gap.
    let solved_lower = (gap_sampled * gap_sampled - qp_gap).max(0.0).sqrt();
    let gap_lower_bound = solved_lower - 2.0 * covering;
    let verdict = if gap_sampled <= FAIL_TOL {
        Verdict::FailsCertified
    } else if gap_lower_bound > 0.0 {
        Verdict::HoldsCertified
    } else {
        Verdict::Inconclusive
    };
    let sep = separating_from_pair(s, &p_best, &q_best, gap_sampled);
    Ok(SspReport {
        gap_sampled,
        covering_radius: covering,
        gap_lower_bound,
        verdict,
        nearest_pair: (Point::new(p_best), Point::new(q_best)),
        separating_functional: sep,
        exact: false,
    })
}

fn ssp_gap_planar(s: &Space, c: &Cone, k: ConeLikeRef<'_>) -> Result<SspReport> {
    let c_planar = c.planar(s)?;
    let mut t_pts: Vec<[f64; 2]> = vec![[0.0, 0.0]];
    for sec in k.planar_sectors(s)? {
        t_pts.extend(planar::boundary_unit_points(s.norm, &sec));
    }
    let gap = planar::hull_gap_points(s.norm, &c_planar, &t_pts);
    let verdict = if gap.gap <= FAIL_TOL {
        Verdict::FailsCertified
    } else {
        Verdict::HoldsCertified
    };
    let p = vec![gap.p[0], gap.p[1]];
    let q = vec![gap.q[0], gap.q[1]];
    let sep = separating_from_pair(s, &p, &q, gap.gap);
    Ok(SspReport {
        gap_sampled: gap.gap,
        covering_radius: 0.0,
        gap_lower_bound: gap.gap,
        verdict,
        nearest_pair: (Point::new(p), Point::new(q)),
        separating_functional: sep,
        exact: true,
    })
}

fn separating_from_pair(s: &Space, p: &[f64], q: &[f64], gap: f64) -> Functional {
    if gap <= 0.0 {
        return Functional::new(vec![0.0; s.dim]);
    }
    let d = sub(q, p);
    let n = dual_norm(s, &Functional::new(d.clone())).unwrap_or(0.0);
    if n == 0.0 {
        return Functional::new(vec![0.0; s.dim]);
    }
    Functional::new(scl(&d, 1.0 / n))
}

fn boundary_sample(
    s: &Space,
    k: ConeLikeRef<'_>,
    mesh: f64,
    seed: u64,
) -> Result<crate::space::SphereSample> {
    match k {
        ConeLikeRef::Cone(c) => boundary_sphere_sample(s, c, mesh, seed),
        _ => dilation_boundary_bisect(s, k, mesh, seed),
    }
}

/// Boundary of a dilated cone sampled by bisecting between an interior axis
/// direction and outside directions; covering is not certified.
fn dilation_boundary_bisect(
    s: &Space,
    k: ConeLikeRef<'_>,
    mesh: f64,
    seed: u64,
) -> Result<crate::space::SphereSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd_1234);
    let axis = match k {
        ConeLikeRef::Henig(h) => {
            let mut m = vec![0.0; s.dim];
            for v in &h.base.vertices {
                for (mi, vi) in m.iter_mut().zip(&v.coords) {
                    *mi += vi;
                }
            }
            m
        }
        ConeLikeRef::Eps(n) => {
            let mut m = vec![0.0; s.dim];
            for p in &n.sphere_sample.points {
                for (mi, pi) in m.iter_mut().zip(&p.coords) {
                    *mi += pi;
                }
            }
            m
        }
        ConeLikeRef::Cone(_) => unreachable!(),
    };
    let axis = scl(&axis, 1.0 / pnorm(s.norm, &axis).max(1e-12));
    let count = ((2.0 / mesh).powi(s.dim as i32 - 1) as usize).clamp(100, 4000);
    let mut points = Vec::new();
    for _ in 0..count {
        let v = crate::space::random_unit(&mut rng, s.dim, s.norm);
        if k.member(s, &Point::new(v.clone()), 0.0)? {
            continue;
        }
        let mut lo = axis.clone();
        let mut hi = v;
        for _ in 0..60 {
            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
            let n = pnorm(s.norm, &mid);
            if n < 1e-9 {
                break;
            }
            let mid = scl(&mid, 1.0 / n);
            if k.member(s, &Point::new(mid.clone()), 0.0)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(Point::new(lo));
    }
    Ok(crate::space::SphereSample {
        points,
        covering: f64::INFINITY,
        certified: false,
    })
}

/// Distance between conv(P) and conv(Q) with a nearest pair: min-norm point
/// of the implicit difference hull under ℓ2, barycentric linear program on
/// the materialized difference set under ℓ1/ℓ∞.
fn hull_distance(s: &Space, p: &[Point], q: &[Point]) -> (f64, f64, Vec<f64>, Vec<f64>) {
    match s.norm {
        Norm::L2 => {
            let mut log: Vec<(Vec<f64>, usize, usize)> = Vec::new();
            let start = sub(&p[0].coords, &q[0].coords);
            log.push((start.clone(), 0, 0));
            let mut lmo = |d: &[f64]| {
                let (ip, _) = p
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i, dot(d, &v.coords)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                let (iq, _) = q
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i, dot(d, &v.coords)))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                let v = sub(&p[ip].coords, &q[iq].coords);
                log.push((v.clone(), ip, iq));
                v
            };
            let res = min_norm_point(&mut lmo, start, 1e-12, 300);
            let mut p_best = vec![0.0; s.dim];
            let mut q_best = vec![0.0; s.dim];
            for (vertex, w) in &res.weights {
                let (ip, iq) = log
                    .iter()
                    .find(|(v, _, _)| {
                        v.iter()
                            .zip(vertex.iter())
                            .all(|(a, b)| (a - b).abs() <= 1e-12)
                    })
                    .map(|(_, ip, iq)| (*ip, *iq))
                    .unwrap_or((0, 0));
                for (pb, pc) in p_best.iter_mut().zip(&p[ip].coords) {
                    *pb += w * pc;
                }
                for (qb, qc) in q_best.iter_mut().zip(&q[iq].coords) {
                    *qb += w * qc;
                }
            }
            debug_assert!(
                sub(&p_best, &q_best)
                    .iter()
                    .zip(&res.point)
                    .all(|(a, b)| (a - b).abs() < 1e-6),
                "corral decomposition drifted from the solver iterate"
            );
            (res.norm, res.gap, p_best, q_best)
        }
        Norm::L1 | Norm::Linf => {
            let cap = 150_000usize;
            let stride = (p.len() * q.len()).div_ceil(cap).max(1);
            let mut diffs: Vec<Vec<f64>> = Vec::new();
            let mut tags: Vec<(usize, usize)> = Vec::new();
            let mut counter = 0usize;
            for (ip, pp) in p.iter().enumerate() {
                for (iq, qq) in q.iter().enumerate() {
                    if counter.is_multiple_of(stride) {
                        diffs.push(sub(&pp.coords, &qq.coords));
                        tags.push((ip, iq));
                    }
                    counter += 1;
                }
            }
            let refs: Vec<&[f64]> = diffs.iter().map(|v| v.as_slice()).collect();
            let zero = vec![0.0; s.dim];
            let d = dist_to_polytope_raw(s.norm, &zero, &refs);
            let (best_idx, _) = diffs
                .iter()
                .enumerate()
                .map(|(i, v)| (i, pnorm(s.norm, v)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let (ip, iq) = tags[best_idx];
            // The LP backend is exact for polyhedral norms.
            (d, 0.0, p[ip].coords.clone(), q[iq].coords.clone())
        }
    }
}

/// Report of the Bishop-Phelps hull-bound lemma check: the cone-side hull
/// stays in {f >= alpha}, the boundary-side hull in {f <= alpha}.
#[derive(Debug, Clone)]
pub struct BpHullReport {
    pub alpha: f64,
    pub min_f_cone_hull: f64,
    pub max_f_boundary_hull: f64,
    pub violations: usize,
    pub cone_samples: usize,
    pub boundary_samples: usize,
}

impl BpHullReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

/// Sample both hulls of the lemma and assert the two functional bounds
/// pointwise (a linear functional attains its hull extremes at the points).
pub fn bp_hull_bounds_check(
    s: &Space,
    f: &Functional,
    alpha: f64,
    mesh: f64,
    seed: u64,
) -> Result<BpHullReport> {
    let nf = dual_norm(s, f)?;
    if nf == 0.0 {
        return Err(Error::invalid("f", "must be nonzero"));
    }
    let fhat = Functional::new(scl(&f.coeffs, 1.0 / nf));
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", "must lie in (0,1)"));
    }
    let cone = Cone::bishop_phelps(s, fhat.clone(), alpha)?;
    let cone_pts = cone_sphere_sample(s, &cone, mesh, seed)?;
    let bd_pts = boundary_sphere_sample(s, &cone, mesh, seed)?;
    let tol = 1e-9;
    let mut violations = 0usize;
    let mut min_f = f64::INFINITY;
    for p in &cone_pts.points {
        let v = fhat.apply(p);
        min_f = min_f.min(v);
        if v < alpha - tol {
            violations += 1;
        }
    }
    let mut max_f = 0.0_f64; // the adjoined origin contributes f = 0
    for p in &bd_pts.points {
        let v = fhat.apply(p);
        max_f = max_f.max(v);
        if v > alpha + tol {
            violations += 1;
        }
    }
    Ok(BpHullReport {
        alpha,
        min_f_cone_hull: min_f,
        max_f_boundary_hull: max_f,
        violations,
        cone_samples: cone_pts.points.len(),
        boundary_samples: bd_pts.points.len(),
    })
}

/// The three margins of a separation witness: (f,α) strictly in the
/// augmented dual; strict negativity of f + α|·| on -C \ {0}; strict
/// positivity outside int(-K).
#[derive(Debug, Clone)]
pub struct WitnessChecks {
    pub aug_margin: f64,
    pub neg_cone_margin: f64,
    pub outside_margin: f64,
}

impl WitnessChecks {
    pub fn valid(&self) -> bool {
        self.aug_margin > 0.0 && self.neg_cone_margin > 0.0 && self.outside_margin > 0.0
    }
}

/// A Bishop-Phelps witness interpolating between C and its dilation:
/// int S(f,α) nests between -C \ {0} and -K for every α in (delta1, delta2).
#[derive(Debug, Clone)]
pub struct Witness {
    pub f: Functional,
    pub alpha: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub checks: WitnessChecks,
}

/// Verify a witness candidate on mesh samples (exact sector analysis in the
/// plane): (1) (f,α) ∈ C^{a#}_+, (2) f + α|·| < 0 on sampled -C \ {0},
/// (3) f + α|·| > 0 on sampled unit vectors outside int(-K).
pub fn verify_witness(
    s: &Space,
    c: &Cone,
    k: ConeLikeRef<'_>,
    f: &Functional,
    alpha: f64,
    mesh: f64,
    seed: u64,
) -> Result<WitnessChecks> {
    let pair = classify_aug_pair(s, c, f, alpha, mesh)?;
    let aug_margin = if alpha > 0.0 && pair.class == AugClass::SharpPlus {
        pair.margin
    } else {
        pair.margin.min(0.0)
    };

    let neg_cone_margin = if s.dim == 2 {
        let (inf_sampled, _) = infimum_on_sphere(s, c, f, mesh)?;
        inf_sampled - alpha
    } else {
        let section = cone_sphere_sample(s, c, mesh, seed)?;
        let m = section
            .points
            .iter()
            .map(|p| {
                let neg: Vec<f64> = scl(&p.coords, -1.0);
                -(f.apply_raw(&neg) + alpha)
            })
            .fold(f64::INFINITY, f64::min);
        if section.certified {
            m - dual_norm(s, f)? * section.covering
        } else {
            f64::NEG_INFINITY
        }
    };

    let outside_margin = outside_margin(s, k, f, alpha, mesh, seed)?;
    Ok(WitnessChecks {
        aug_margin,
        neg_cone_margin,
        outside_margin,
    })
}

/// min of f(x) + α over unit x outside int(-K); +∞ when the complement is
/// empty. Exact complement-sector minimization in the plane.
fn outside_margin(
    s: &Space,
    k: ConeLikeRef<'_>,
    f: &Functional,
    alpha: f64,
    mesh: f64,
    seed: u64,
) -> Result<f64> {
    if s.dim == 2 {
        let fa = [f.coeffs[0], f.coeffs[1]];
        let neg_sectors: Vec<Planar> = k
            .planar_sectors(s)?
            .iter()
            .map(|sec| sec.negated())
            .collect();
        let mut best = f64::INFINITY;
        for (lo, width) in complement_intervals(&neg_sectors) {
            let (m, _) = planar::min_pairing(s.norm, fa, lo, width);
            best = best.min(m + alpha);
        }
        return Ok(best);
    }
    let sphere = sample_unit_sphere(s, mesh, seed)?;
    let mut best = f64::INFINITY;
    for u in &sphere.points {
        if !k.interior_unit(s, &scl(&u.coords, -1.0), sphere.covering)? {
            best = best.min(f.apply(u) + alpha);
        }
    }
    if sphere.certified {
        Ok(best - (dual_norm(s, f)? + alpha) * sphere.covering)
    } else {
        Ok(f64::NEG_INFINITY)
    }
}

/// Closed complement intervals of a union of sectors on the circle.
fn complement_intervals(sectors: &[Planar]) -> Vec<(f64, f64)> {
    use planar::TAU;
    let mut ivals: Vec<(f64, f64)> = Vec::new();
    for sec in sectors {
        match *sec {
            Planar::Plane => return vec![],
            Planar::Sector { lo, width } => ivals.push((planar::norm_angle(lo), width)),
            // Rays and lines have empty interior: they remove nothing.
            Planar::Ray(_) | Planar::Line(_) => {}
        }
    }
    if ivals.is_empty() {
        return vec![(0.0, TAU)];
    }
    ivals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, w) in ivals {
        if let Some(last) = merged.last_mut() {
            if lo <= last.0 + last.1 + 1e-15 {
                let hi = (lo + w).max(last.0 + last.1);
                last.1 = hi - last.0;
                continue;
            }
        }
        merged.push((lo, w));
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if last.0 + last.1 >= first.0 + TAU - 1e-15 {
            let hi = (last.0 + last.1).max(first.0 + TAU);
            merged[0] = (last.0, hi - last.0);
            merged.pop();
        }
    }
    if merged.len() == 1 && merged[0].1 >= TAU - 1e-15 {
        return vec![];
    }
    let mut out = Vec::new();
    for i in 0..merged.len() {
        let (lo, w) = merged[i];
        let next_lo = if i + 1 < merged.len() {
            merged[i + 1].0
        } else {
            merged[0].0 + TAU
        };
        let start = lo + w;
        if next_lo > start {
            out.push((planar::norm_angle(start), next_lo - start));
        }
    }
    out
}

/// Search for a witness: the candidate functional is the negated separating
/// direction of a certified gap report, and α is scanned over a grid in
/// (0, inf_C f). Returns the maximal contiguous passing subinterval with its
/// midpoint as α, or None when fewer than two grid points pass.
pub fn find_witness(
    s: &Space,
    c: &Cone,
    k: ConeLikeRef<'_>,
    report: &SspReport,
    alpha_grid_size: usize,
    mesh: f64,
    seed: u64,
) -> Result<Option<Witness>> {
    if report.verdict != Verdict::HoldsCertified {
        return Err(Error::precondition(
            "find_witness requires a holds_certified report".to_string(),
        ));
    }
    let f_raw = Functional::new(scl(&report.separating_functional.coeffs, -1.0));
    let nf = dual_norm(s, &f_raw)?;
    if nf == 0.0 {
        return Ok(None);
    }
    let f = Functional::new(scl(&f_raw.coeffs, 1.0 / nf));

    // Both witness margins are affine in α: conditions (1)/(2) require
    // α < inf_C f, condition (3) requires α > -min_outside f.
    let (_, inf_lower) = infimum_on_sphere(s, c, &f, mesh)?;
    let minc = outside_margin(s, k, &f, 0.0, mesh, seed)?;
    let alpha_max = inf_lower;
    if alpha_max <= 0.0 {
        return Ok(None);
    }
    let n = alpha_grid_size.max(2);
    let pass = |a: f64| a > 0.0 && a < inf_lower && a + minc > 0.0;
    let grid = |j: usize| alpha_max * j as f64 / (n as f64 + 1.0);
    let mut first = None;
    let mut last = None;
    for j in 1..=n {
        if pass(grid(j)) {
            if first.is_none() {
                first = Some(j);
            }
            last = Some(j);
        } else if first.is_some() {
            break; // the passing set is an interval; the run has ended
        }
    }
    let (Some(j1), Some(j2)) = (first, last) else {
        return Ok(None);
    };
    if j1 == j2 {
        return Ok(None);
    }
    let delta1 = grid(j1);
    let delta2 = grid(j2);
    let alpha = 0.5 * (delta1 + delta2);
    let checks = verify_witness(s, c, k, &f, alpha, mesh, seed)?;
    if !checks.valid() {
        return Ok(None);
    }
    Ok(Some(Witness {
        f,
        alpha,
        delta1,
        delta2,
        checks,
    }))
}

/// Report of the SSP monotonicity check along a sampled inclusion K1 ⊂ K2.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    pub inclusion_violations: usize,
    pub gap1: SspReport,
    pub gap2: SspReport,
    pub consistent: bool,
}

/// Verify on samples that K1 ⊂ K2 and that the SSP verdict propagates from
/// the smaller to the larger dilation.
pub fn ssp_monotone_check(
    s: &Space,
    c: &Cone,
    k1: ConeLikeRef<'_>,
    k2: ConeLikeRef<'_>,
    mesh: f64,
    seed: u64,
) -> Result<MonotoneReport> {
    let sphere = sample_unit_sphere(s, mesh.max(5e-3), seed)?;
    let mut violations = 0usize;
    for u in &sphere.points {
        if k1.member(s, u, 0.0)? && !k2.member(s, u, 1e-9)? {
            violations += 1;
        }
    }
    if violations > 0 {
        return Err(Error::precondition(format!(
            "sampled inclusion K1 ⊂ K2 fails at {violations} points"
        )));
    }
    let gap1 = ssp_gap(s, c, k1, mesh, seed)?;
    let gap2 = ssp_gap(s, c, k2, mesh, seed)?;
    let consistent =
        !(gap1.verdict == Verdict::HoldsCertified && gap2.verdict == Verdict::FailsCertified);
    Ok(MonotoneReport {
        inclusion_violations: violations,
        gap1,
        gap2,
        consistent,
    })
}
