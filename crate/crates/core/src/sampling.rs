//! Sphere sections of cones and of their boundaries. Planar cases and the
//! lattice constructions carry certified covering radii; seeded fallbacks
//! report an uncertified estimate instead.

use crate::cones::{polyhedral_base, positive_functional, Cone, ConeRepr};
use crate::error::{Error, Result};
use crate::planar::{self, Planar};
use crate::space::{
    pnorm, random_unit, scl, sphere_lattice_2d, sub, Norm, Point, Space, SphereSample,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_SAMPLE: usize = 120_000;

/// Mesh sample of `C ∩ S_X`.
pub fn cone_sphere_sample(s: &Space, c: &Cone, mesh: f64, seed: u64) -> Result<SphereSample> {
    if mesh <= 0.0 {
        return Err(Error::invalid("mesh", "must be positive"));
    }
    if s.dim == 2 {
        return planar_section_sample(s, &c.planar(s)?, mesh);
    }
    match &c.repr {
        ConeRepr::BishopPhelps { f, alpha } => bp_cap_sample(s, &f.coeffs, *alpha, mesh, seed),
        ConeRepr::Sublevel { f, alpha } => {
            bp_cap_sample(s, &scl(&f.coeffs, -1.0), *alpha, mesh, seed)
        }
        ConeRepr::Negated { inner } => {
            let inner_sample = cone_sphere_sample(s, inner, mesh, seed)?;
            Ok(SphereSample {
                points: inner_sample
                    .points
                    .iter()
                    .map(|p| Point::new(scl(&p.coords, -1.0)))
                    .collect(),
                covering: inner_sample.covering,
                certified: inner_sample.certified,
            })
        }
        ConeRepr::Polyhedral { .. } => polyhedral_section_sample(s, c, mesh, seed),
    }
}

/// Cheap uncertified probe points of `C ∩ S_X` (genuine members, no covering
/// claim): random positive generator combinations, or rejection sampling for
/// the functional representations.
pub(crate) fn cone_probes(s: &Space, c: &Cone, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    match &c.repr {
        ConeRepr::Polyhedral { generators } => {
            use rand::Rng;
            for _ in 0..count {
                let mut p = vec![0.0; s.dim];
                for g in generators {
                    let w: f64 = rng.random();
                    for (pi, gi) in p.iter_mut().zip(&g.coords) {
                        *pi += w * gi;
                    }
                }
                let n = pnorm(s.norm, &p);
                if n > 1e-12 {
                    out.push(Point::new(scl(&p, 1.0 / n)));
                }
            }
        }
        ConeRepr::Negated { inner } => {
            out = cone_probes(s, inner, count, seed)?
                .into_iter()
                .map(|p| Point::new(scl(&p.coords, -1.0)))
                .collect();
        }
        _ => {
            let mut tries = 0;
            while out.len() < count && tries < count * 400 {
                tries += 1;
                let u = random_unit(&mut rng, s.dim, s.norm);
                if crate::cones::membership_unit(s, c, &u, 0.0)? {
                    out.push(Point::new(u));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::DegenerateCone(
            "no probe directions found".to_string(),
        ));
    }
    Ok(out)
}

/// Mesh sample of `bd(C) ∩ S_X`.
pub fn boundary_sphere_sample(s: &Space, c: &Cone, mesh: f64, seed: u64) -> Result<SphereSample> {
    if mesh <= 0.0 {
        return Err(Error::invalid("mesh", "must be positive"));
    }
    if s.dim == 2 {
        let pts = planar::boundary_unit_points(s.norm, &c.planar(s)?);
        return Ok(SphereSample {
            points: pts.into_iter().map(|p| Point::new(p.to_vec())).collect(),
            covering: 0.0,
            certified: true,
        });
    }
    match &c.repr {
        ConeRepr::BishopPhelps { f, alpha } => bp_ring_sample(s, &f.coeffs, *alpha, mesh, seed),
        ConeRepr::Sublevel { f, alpha } => {
            bp_ring_sample(s, &scl(&f.coeffs, -1.0), *alpha, mesh, seed)
        }
        ConeRepr::Negated { inner } => {
            let inner_sample = boundary_sphere_sample(s, inner, mesh, seed)?;
            Ok(SphereSample {
                points: inner_sample
                    .points
                    .iter()
                    .map(|p| Point::new(scl(&p.coords, -1.0)))
                    .collect(),
                covering: inner_sample.covering,
                certified: inner_sample.certified,
            })
        }
        ConeRepr::Polyhedral { generators } => {
            if s.dim == 3 && s.norm == Norm::L2 {
                polyhedral_boundary_3d(s, generators, mesh)
            } else {
                boundary_by_bisection(s, c, mesh, seed)
            }
        }
    }
}

/// 2-D: lattice along the arc or polygonal chain of the sector.
fn planar_section_sample(s: &Space, sector: &Planar, mesh: f64) -> Result<SphereSample> {
    let mut points = Vec::new();
    let push_arc = |lo: f64, width: f64, points: &mut Vec<Point>| match s.norm {
        Norm::L2 => {
            let steps = (width / mesh).ceil().max(1.0) as usize;
            for k in 0..=steps {
                let t = lo + width * k as f64 / steps as f64;
                points.push(Point::new(planar::unit2(s.norm, t).to_vec()));
            }
        }
        Norm::L1 | Norm::Linf => {
            let chain = planar::chain_points(s.norm, lo, width);
            for w in chain.windows(2) {
                let (a, b) = (w[0], w[1]);
                let len = pnorm(s.norm, &sub(&b, &a));
                let steps = (len / mesh).ceil().max(1.0) as usize;
                for k in 0..steps {
                    let t = k as f64 / steps as f64;
                    points.push(Point::new(vec![
                        a[0] + t * (b[0] - a[0]),
                        a[1] + t * (b[1] - a[1]),
                    ]));
                }
            }
            let last = *chain.last().unwrap();
            points.push(Point::new(last.to_vec()));
        }
    };
    match *sector {
        Planar::Ray(a) => points.push(Point::new(planar::unit2(s.norm, a).to_vec())),
        Planar::Line(a) => {
            points.push(Point::new(planar::unit2(s.norm, a).to_vec()));
            points.push(Point::new(
                planar::unit2(s.norm, a + std::f64::consts::PI).to_vec(),
            ));
        }
        Planar::Sector { lo, width } => push_arc(lo, width, &mut points),
        Planar::Plane => {
            return Ok(sphere_lattice_2d(s.norm, mesh));
        }
    }
    Ok(SphereSample {
        points,
        covering: mesh / 2.0,
        certified: true,
    })
}

/// Cap {u ∈ S_X : f(u) >= alpha} for dual-unit f. Certified lat-long lattice
/// for Euclidean 3-space, seeded in-cap directions elsewhere.
fn bp_cap_sample(s: &Space, f: &[f64], alpha: f64, mesh: f64, seed: u64) -> Result<SphereSample> {
    if s.norm == Norm::L2 && s.dim == 3 {
        let beta = alpha.clamp(-1.0, 1.0).acos();
        let basis = complete_basis(f);
        let step = 0.9 * mesh;
        let nring = ((beta / step).ceil() as usize).max(1);
        let mut points = Vec::new();
        for k in 0..=nring {
            let t = beta * k as f64 / nring as f64;
            let r = t.sin();
            let m = ((2.0 * std::f64::consts::PI * r / step).ceil() as usize).max(1);
            for j in 0..m {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let mut p = scl(f, t.cos());
                for (pi, bi) in p
                    .iter_mut()
                    .zip(combine2(&basis, r * phi.cos(), r * phi.sin()))
                {
                    *pi += bi;
                }
                points.push(Point::new(p));
            }
        }
        return Ok(SphereSample {
            points,
            covering: mesh,
            certified: true,
        });
    }
    // Seeded fallback: rejection-sample the sphere into the cap.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = sample_count(s.dim, mesh);
    let mut points = Vec::new();
    let mut tries = 0usize;
    while points.len() < target && tries < target * 200 {
        tries += 1;
        let u = random_unit(&mut rng, s.dim, s.norm);
        if crate::qp::dot(f, &u) >= alpha {
            points.push(Point::new(u));
        }
    }
    if points.is_empty() {
        // Extremely thin cap: fall back to the functional direction itself.
        let n = pnorm(s.norm, f);
        points.push(Point::new(scl(f, 1.0 / n)));
    }
    Ok(SphereSample {
        points,
        covering: f64::INFINITY,
        certified: false,
    })
}

/// Ring {u ∈ S_2 : f(u) = alpha} for dual-unit f under the Euclidean norm:
/// alpha f + sqrt(1-alpha^2) w over unit w ⊥ f. The w-sphere has a lattice in
/// dimensions 3 and 4, giving a certified covering.
fn bp_ring_sample(s: &Space, f: &[f64], alpha: f64, mesh: f64, seed: u64) -> Result<SphereSample> {
    if s.norm != Norm::L2 {
        // Boundary {f(u) = alpha |u|} of a polyhedral-norm cap: bisection.
        let c = Cone::bishop_phelps(
            s,
            crate::space::Functional::new(f.to_vec()),
            alpha.max(1e-9),
        )?;
        return boundary_by_bisection(s, &c, mesh, seed);
    }
    let r = (1.0 - alpha * alpha).max(0.0).sqrt();
    let basis = complete_basis(f);
    let mut points = Vec::new();
    let mut certified = true;
    match s.dim {
        3 => {
            let steps = ((2.0 * std::f64::consts::PI * r / mesh).ceil() as usize).max(1);
            for j in 0..steps {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / steps as f64;
                let mut p = scl(f, alpha);
                for (pi, bi) in p
                    .iter_mut()
                    .zip(combine2(&basis, r * phi.cos(), r * phi.sin()))
                {
                    *pi += bi;
                }
                points.push(Point::new(p));
            }
        }
        4 => {
            // w ranges over a 2-sphere inside f-perp; reuse the lat-long idea.
            let step = 0.9 * mesh / r.max(1e-9);
            let nring = ((std::f64::consts::PI / step).ceil() as usize).max(1);
            for k in 0..=nring {
                let theta = std::f64::consts::PI * k as f64 / nring as f64;
                let rr = theta.sin();
                let m = ((2.0 * std::f64::consts::PI * rr / step).ceil() as usize).max(1);
                for j in 0..m {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    let w = combine3(&basis, rr * phi.cos(), rr * phi.sin(), theta.cos());
                    let mut p = scl(f, alpha);
                    for (pi, wi) in p.iter_mut().zip(scl(&w, r)) {
                        *pi += wi;
                    }
                    points.push(Point::new(p));
                }
            }
        }
        _ => {
            certified = false;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let target = sample_count(s.dim, mesh);
            for _ in 0..target {
                let mut w = random_unit(&mut rng, s.dim, Norm::L2);
                // Project w onto f-perp and renormalize.
                let proj = crate::qp::dot(&w, f);
                for (wi, fi) in w.iter_mut().zip(f) {
                    *wi -= proj * fi;
                }
                let n = pnorm(Norm::L2, &w);
                if n < 1e-9 {
                    continue;
                }
                let w = scl(&w, r / n);
                let mut p = scl(f, alpha);
                for (pi, wi) in p.iter_mut().zip(w) {
                    *pi += wi;
                }
                points.push(Point::new(p));
            }
        }
    }
    Ok(SphereSample {
        points,
        covering: if certified { mesh } else { f64::INFINITY },
        certified,
    })
}

/// Pointed polyhedral section sampled through a barycentric lattice on a
/// bounded base: normalizing base grid points onto the sphere covers
/// C ∩ S_X with radius 2·(grid fineness)/delta_B, in any norm.
fn polyhedral_section_sample(s: &Space, c: &Cone, mesh: f64, seed: u64) -> Result<SphereSample> {
    let Some(f) = positive_functional(s, c)? else {
        // Not pointed: filter a seeded sphere sample by membership.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = sample_count(s.dim, mesh);
        let mut points = Vec::new();
        for _ in 0..target * 4 {
            let u = random_unit(&mut rng, s.dim, s.norm);
            if crate::cones::membership_unit(s, c, &u, 1e-9)? {
                points.push(Point::new(u));
                if points.len() >= target {
                    break;
                }
            }
        }
        return Ok(SphereSample {
            points,
            covering: f64::INFINITY,
            certified: false,
        });
    };
    let base = polyhedral_base(s, c, &f)?;
    let k = base.vertices.len();
    let target_grid = mesh * base.delta_b / 2.0;
    let mut steps = ((k as f64 * base.m) / target_grid).ceil() as usize;
    // Cap the lattice size; the covering bound below reports what was achieved.
    while steps > 1 && simplex_grid_size(steps, k) > MAX_SAMPLE {
        steps -= 1;
    }
    let achieved_grid = k as f64 * base.m / steps as f64;
    let mut points = Vec::new();
    let mut weights = vec![0usize; k];
    simplex_grid(&mut weights, 0, steps, &mut |w| {
        let mut p = vec![0.0; s.dim];
        for (i, v) in base.vertices.iter().enumerate() {
            let lam = w[i] as f64 / steps as f64;
            for (pj, vj) in p.iter_mut().zip(&v.coords) {
                *pj += lam * vj;
            }
        }
        let n = pnorm(s.norm, &p);
        if n > 1e-12 {
            points.push(Point::new(scl(&p, 1.0 / n)));
        }
    });
    Ok(SphereSample {
        points,
        covering: 2.0 * achieved_grid / base.delta_b,
        certified: true,
    })
}

fn simplex_grid_size(steps: usize, k: usize) -> usize {
    // C(steps + k - 1, k - 1), saturating.
    let mut n: usize = 1;
    for i in 0..k - 1 {
        n = n.saturating_mul(steps + i + 1);
        n /= i + 1;
        if n > 100 * MAX_SAMPLE {
            return n;
        }
    }
    n
}

fn simplex_grid(
    weights: &mut Vec<usize>,
    pos: usize,
    remaining: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos + 1 == weights.len() {
        weights[pos] = remaining;
        f(weights);
        return;
    }
    for w in 0..=remaining {
        weights[pos] = w;
        simplex_grid(weights, pos + 1, remaining - w, f);
    }
}

/// Facets of a pointed 3-D polyhedral cone sampled as exact great-circle
/// arcs between adjacent generators.
fn polyhedral_boundary_3d(_s: &Space, generators: &[Point], mesh: f64) -> Result<SphereSample> {
    let ghat: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| scl(&g.coords, 1.0 / pnorm(Norm::L2, &g.coords)))
        .collect();
    let mut points = Vec::new();
    let n = ghat.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let nvec = cross3(&ghat[i], &ghat[j]);
            if pnorm(Norm::L2, &nvec) < 1e-12 {
                continue;
            }
            let mut pos = false;
            let mut neg_side = false;
            for (k, g) in ghat.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let d = crate::qp::dot(&nvec, g);
                if d > 1e-10 {
                    pos = true;
                } else if d < -1e-10 {
                    neg_side = true;
                }
            }
            if pos && neg_side {
                continue; // interior pair, not a facet
            }
            points.extend(slerp_arc(&ghat[i], &ghat[j], mesh));
        }
    }
    if points.is_empty() {
        // Single generator: the boundary is the ray itself.
        points.extend(ghat.iter().map(|g| Point::new(g.clone())));
    }
    Ok(SphereSample {
        points,
        covering: mesh / 2.0,
        certified: true,
    })
}

fn slerp_arc(a: &[f64], b: &[f64], mesh: f64) -> Vec<Point> {
    let cosw = crate::qp::dot(a, b).clamp(-1.0, 1.0);
    let w = cosw.acos();
    if w < 1e-12 {
        return vec![Point::new(a.to_vec())];
    }
    let steps = ((w / mesh).ceil() as usize).max(1);
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            let (sa, sb) = (((1.0 - t) * w).sin() / w.sin(), (t * w).sin() / w.sin());
            let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| sa * x + sb * y).collect();
            let n = pnorm(Norm::L2, &p);
            Point::new(scl(&p, 1.0 / n))
        })
        .collect()
}

/// Generic boundary sampler: walk seeded sphere directions, and for each
/// in/out pair bisect along the connecting segment (renormalized) until the
/// crossing is bracketed to 1e-12.
fn boundary_by_bisection(s: &Space, c: &Cone, mesh: f64, seed: u64) -> Result<SphereSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inside = find_interior_direction(s, c, &mut rng)?;
    let target = sample_count(s.dim, mesh).min(4000);
    let mut points = Vec::new();
    for _ in 0..target {
        let v = random_unit(&mut rng, s.dim, s.norm);
        if crate::cones::membership_unit(s, c, &v, 1e-9)? {
            continue;
        }
        let mut lo = inside.clone();
        let mut hi = v;
        for _ in 0..60 {
            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
            let n = pnorm(s.norm, &mid);
            if n < 1e-9 {
                break;
            }
            let mid = scl(&mid, 1.0 / n);
            if crate::cones::membership_unit(s, c, &mid, 0.0)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(Point::new(lo));
    }
    Ok(SphereSample {
        points,
        covering: f64::INFINITY,
        certified: false,
    })
}

fn find_interior_direction(s: &Space, c: &Cone, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if let ConeRepr::Polyhedral { generators } = &c.repr {
        let mut sum = vec![0.0; s.dim];
        for g in generators {
            let gh = scl(&g.coords, 1.0 / pnorm(s.norm, &g.coords));
            for (si, gi) in sum.iter_mut().zip(&gh) {
                *si += gi;
            }
        }
        let n = pnorm(s.norm, &sum);
        if n > 1e-9 {
            return Ok(scl(&sum, 1.0 / n));
        }
    }
    for _ in 0..10_000 {
        let u = random_unit(rng, s.dim, s.norm);
        if crate::cones::membership_unit(s, c, &u, 0.0)? {
            return Ok(u);
        }
    }
    Err(Error::DegenerateCone(
        "could not find an interior direction".to_string(),
    ))
}

fn sample_count(dim: usize, mesh: f64) -> usize {
    let per_axis = (2.0 / mesh).ceil();
    (per_axis.powi(dim as i32 - 1) as usize).clamp(100, 20_000)
}

/// Orthonormal completion of a unit vector to a full basis (Gram-Schmidt on
/// the standard basis); returns the complement vectors only.
fn complete_basis(f: &[f64]) -> Vec<Vec<f64>> {
    let dim = f.len();
    let mut basis: Vec<Vec<f64>> = vec![scl(f, 1.0 / pnorm(Norm::L2, f))];
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        for b in &basis {
            let p = crate::qp::dot(&e, b);
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= p * bi;
            }
        }
        let n = pnorm(Norm::L2, &e);
        if n > 1e-9 {
            basis.push(scl(&e, 1.0 / n));
        }
        if basis.len() == dim {
            break;
        }
    }
    basis.remove(0);
    basis
}

fn combine2(basis: &[Vec<f64>], a: f64, b: f64) -> Vec<f64> {
    basis[0]
        .iter()
        .zip(&basis[1])
        .map(|(x, y)| a * x + b * y)
        .collect()
}

fn combine3(basis: &[Vec<f64>], a: f64, b: f64, c: f64) -> Vec<f64> {
    (0..basis[0].len())
        .map(|i| a * basis[0][i] + b * basis[1][i] + c * basis[2][i])
        .collect()
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Functional;

    #[test]
    fn planar_cone_sample_is_inside_and_unit() {
        let s = Space::new(2, Norm::L2).unwrap();
        let c = Cone::polyhedral(
            &s,
            vec![Point::new(vec![1.0, 1.0]), Point::new(vec![-1.0, 1.0])],
        )
        .unwrap();
        let sample = cone_sphere_sample(&s, &c, 0.01, 42).unwrap();
        assert!(sample.certified);
        assert!(sample.points.len() > 100);
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-12);
            assert!(crate::cones::membership(&s, &c, p, 1e-9).unwrap());
        }
    }

    #[test]
    fn cap_sample_3d_certified() {
        let s = Space::new(3, Norm::L2).unwrap();
        let c = Cone::bishop_phelps(&s, Functional::new(vec![0.0, 0.0, 1.0]), 0.6).unwrap();
        let sample = cone_sphere_sample(&s, &c, 0.05, 42).unwrap();
        assert!(sample.certified);
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-9);
            assert!(p.coords[2] >= 0.6 - 1e-9);
        }
    }

    #[test]
    fn ring_sample_sits_on_boundary() {
        let s = Space::new(3, Norm::L2).unwrap();
        let c = Cone::bishop_phelps(&s, Functional::new(vec![0.0, 0.0, 1.0]), 0.5).unwrap();
        let sample = boundary_sphere_sample(&s, &c, 0.05, 42).unwrap();
        assert!(sample.certified);
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-9);
            assert!((p.coords[2] - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn polyhedral_section_3d_certified_covering() {
        let s = Space::new(3, Norm::L2).unwrap();
        let c = Cone::polyhedral(
            &s,
            vec![
                Point::new(vec![1.0, 0.0, 1.0]),
                Point::new(vec![-1.0, 0.0, 1.0]),
                Point::new(vec![0.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        let sample = cone_sphere_sample(&s, &c, 0.05, 42).unwrap();
        assert!(sample.certified);
        assert!(sample.covering <= 0.05 + 1e-12);
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-9);
            assert!(crate::cones::membership(&s, &c, p, 1e-8).unwrap());
        }
    }

    #[test]
    fn facet_boundary_3d() {
        let s = Space::new(3, Norm::L2).unwrap();
        let gens = vec![
            Point::new(vec![1.0, 0.0, 1.0]),
            Point::new(vec![-1.0, 0.0, 1.0]),
            Point::new(vec![0.0, 1.0, 1.0]),
        ];
        let c = Cone::polyhedral(&s, gens).unwrap();
        let sample = boundary_sphere_sample(&s, &c, 0.05, 42).unwrap();
        assert!(sample.certified);
        for p in &sample.points {
            // Boundary points are members but not interior: nearby outward
            // perturbation leaves the cone. Membership check suffices here.
            assert!(crate::cones::membership(&s, &c, p, 1e-8).unwrap());
        }
    }
}
