//! Normed-space primitives: the three supported norms, their duals, distances
//! to finite sets and polytopes, and unit-sphere sampling.

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpStatus};
use crate::qp::{dot, min_norm_point};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which ℓp norm the space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    /// The conjugate norm: dual of ℓ1 is ℓ∞, of ℓ2 is ℓ2, of ℓ∞ is ℓ1.
    pub fn conjugate(self) -> Norm {
        match self {
            Norm::L1 => Norm::Linf,
            Norm::L2 => Norm::L2,
            Norm::Linf => Norm::L1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

/// A finite-dimensional space together with its norm. All geometry in the
/// crate is parameterized by one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub dim: usize,
    pub norm: Norm,
}

impl Space {
    pub fn new(dim: usize, norm: Norm) -> Result<Space> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        Ok(Space { dim, norm })
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }
}

/// A point of the space, stored as raw coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Point {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn origin(dim: usize) -> Point {
        Point {
            coords: vec![0.0; dim],
        }
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Point {
        Point { coords }
    }
}

/// A linear functional acting by the standard pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub coeffs: Vec<f64>,
}

impl Functional {
    pub fn new(coeffs: Vec<f64>) -> Functional {
        Functional { coeffs }
    }

    pub fn apply(&self, x: &Point) -> f64 {
        dot(&self.coeffs, &x.coords)
    }

    pub fn apply_raw(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }
}

// --- raw slice helpers shared across the crate ---

/// Raw slice norm; the checked entry point is [`norm`].
pub fn pnorm(norm: Norm, x: &[f64]) -> f64 {
    match norm {
        Norm::L1 => x.iter().map(|v| v.abs()).sum(),
        Norm::L2 => dot(x, x).sqrt(),
        Norm::Linf => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

/// Norm of a - b without materializing the difference.
pub(crate) fn pnorm_diff(norm: Norm, a: &[f64], b: &[f64]) -> f64 {
    match norm {
        Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        Norm::L2 => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        Norm::Linf => a
            .iter()
            .zip(b)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())),
    }
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn scl(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub(crate) fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

/// The ℓp norm of a point; zero exactly when the point is the origin.
pub fn norm(s: &Space, x: &Point) -> Result<f64> {
    s.check_dim(x.dim())?;
    Ok(pnorm(s.norm, &x.coords))
}

/// The dual ℓq norm of a functional, q conjugate to the space's p.
pub fn dual_norm(s: &Space, f: &Functional) -> Result<f64> {
    s.check_dim(f.coeffs.len())?;
    Ok(pnorm(s.norm.conjugate(), &f.coeffs))
}

/// Exact distance from a point to a finite point set.
pub fn dist_to_cloud(s: &Space, x: &Point, cloud: &[Point]) -> Result<f64> {
    s.check_dim(x.dim())?;
    if cloud.is_empty() {
        return Err(Error::EmptyInput("dist_to_cloud needs a nonempty set"));
    }
    let mut best = f64::INFINITY;
    for a in cloud {
        s.check_dim(a.dim())?;
        let d = pnorm(s.norm, &sub(&x.coords, &a.coords));
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

/// Membership in the closed thickening `A + eps·B_X`, which equals
/// `{x : d(x,A) <= eps}` for every positive eps.
pub fn thickened_set_membership(s: &Space, x: &Point, cloud: &[Point], eps: f64) -> Result<bool> {
    if eps <= 0.0 {
        return Err(Error::invalid("eps", "must be positive"));
    }
    Ok(dist_to_cloud(s, x, cloud)? <= eps)
}

/// Duality-gap stop for the Euclidean support-point descent; also scales the
/// feasibility tolerances of the polyhedral-norm linear programs.
pub const TOL_QP: f64 = 1e-9;

/// Distance from a point to the convex hull of a finite vertex set, in the
/// space norm. Euclidean spaces run support-point descent with a duality-gap
/// stop; ℓ1/ℓ∞ solve a small linear program over barycentric weights, which
/// is exact for polyhedral norms.
pub fn dist_to_polytope(s: &Space, x: &Point, vertices: &[Point]) -> Result<f64> {
    s.check_dim(x.dim())?;
    if vertices.is_empty() {
        return Err(Error::EmptyInput("dist_to_polytope needs vertices"));
    }
    for v in vertices {
        s.check_dim(v.dim())?;
    }
    let verts: Vec<&[f64]> = vertices.iter().map(|p| p.coords.as_slice()).collect();
    Ok(dist_to_polytope_raw(s.norm, &x.coords, &verts))
}

pub(crate) fn dist_to_polytope_raw(norm: Norm, x: &[f64], vertices: &[&[f64]]) -> f64 {
    match norm {
        Norm::L2 => {
            let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| sub(v, x)).collect();
            let start = shifted
                .iter()
                .min_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
                .unwrap()
                .clone();
            let mut lmo = |d: &[f64]| {
                shifted
                    .iter()
                    .min_by(|a, b| dot(d, a).total_cmp(&dot(d, b)))
                    .unwrap()
                    .clone()
            };
            min_norm_point(&mut lmo, start, TOL_QP, 500).norm
        }
        Norm::L1 | Norm::Linf => dist_polyhedral_lp(norm, x, vertices),
    }
}

/// LP formulation of the hull distance for polyhedral norms: minimize the
/// bounding slack(s) `t` subject to `|sum λ_i v_i - x| <= t` coordinatewise,
/// `λ` in the simplex.
fn dist_polyhedral_lp(norm: Norm, x: &[f64], vertices: &[&[f64]]) -> f64 {
    let k = vertices.len();
    let d = x.len();
    let nt = match norm {
        Norm::L1 => d,
        Norm::Linf => 1,
        Norm::L2 => unreachable!(),
    };
    // Variables: λ (k) | t (nt) | s+ (d) | s- (d).
    let n = k + nt + 2 * d;
    let mut a = Vec::with_capacity(2 * d + 1);
    let mut b = Vec::with_capacity(2 * d + 1);
    for j in 0..d {
        let tj = k + if nt == 1 { 0 } else { j };
        let mut row = vec![0.0; n];
        for (i, v) in vertices.iter().enumerate() {
            row[i] = v[j];
        }
        row[tj] = -1.0;
        row[k + nt + j] = 1.0;
        a.push(row);
        b.push(x[j]);
        let mut row = vec![0.0; n];
        for (i, v) in vertices.iter().enumerate() {
            row[i] = -v[j];
        }
        row[tj] = -1.0;
        row[k + nt + d + j] = 1.0;
        a.push(row);
        b.push(-x[j]);
    }
    let mut row = vec![0.0; n];
    for cell in row.iter_mut().take(k) {
        *cell = 1.0;
    }
    a.push(row);
    b.push(1.0);
    let mut c = vec![0.0; n];
    for cj in c.iter_mut().skip(k).take(nt) {
        *cj = 1.0;
    }
    let sol = solve_lp(&a, &b, &c);
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    sol.value.max(0.0)
}

/// A unit-sphere sample along with the covering radius it achieves. The bound
/// is certified by construction in 2-D and for Euclidean 3-space; elsewhere it
/// is a seeded post-hoc estimate (`certified` says which).
#[derive(Debug, Clone)]
pub struct SphereSample {
    pub points: Vec<Point>,
    pub covering: f64,
    pub certified: bool,
}

/// Sample the unit sphere with covering radius at most `mesh` (certified in
/// 2-D and Euclidean 3-D; estimated otherwise). Deterministic for fixed seed.
pub fn sample_unit_sphere(s: &Space, mesh: f64, seed: u64) -> Result<SphereSample> {
    if !(mesh > 0.0 && mesh < 1.0) {
        return Err(Error::invalid("mesh", "must lie in (0,1)"));
    }
    match (s.dim, s.norm) {
        (1, _) => Ok(SphereSample {
            points: vec![Point::new(vec![1.0]), Point::new(vec![-1.0])],
            covering: 0.0,
            certified: true,
        }),
        (2, _) => Ok(sphere_lattice_2d(s.norm, mesh)),
        (3, Norm::L2) => Ok(sphere_latlong_3d(mesh)),
        _ => Ok(sphere_seeded(s, mesh, seed)),
    }
}

/// Exact angular lattice on the 2-D unit sphere of any of the three norms.
pub(crate) fn sphere_lattice_2d(norm: Norm, mesh: f64) -> SphereSample {
    match norm {
        Norm::L2 => {
            let n = (2.0 * std::f64::consts::PI / mesh).ceil() as usize;
            let points = (0..n)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
                    Point::new(vec![t.cos(), t.sin()])
                })
                .collect();
            // Worst point sits half a step from a sample; chord <= arc.
            let covering = 2.0 * (std::f64::consts::PI / (2.0 * n as f64)).sin();
            SphereSample {
                points,
                covering,
                certified: true,
            }
        }
        Norm::L1 | Norm::Linf => {
            let corners: Vec<[f64; 2]> = match norm {
                Norm::Linf => vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
                Norm::L1 => vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
                Norm::L2 => unreachable!(),
            };
            let mut points = Vec::new();
            for i in 0..4 {
                let a = corners[i];
                let b = corners[(i + 1) % 4];
                let edge = [b[0] - a[0], b[1] - a[1]];
                let len = pnorm(norm, &edge);
                let steps = (len / mesh).ceil().max(1.0) as usize;
                for t in 0..steps {
                    let f = t as f64 / steps as f64;
                    points.push(Point::new(vec![a[0] + f * edge[0], a[1] + f * edge[1]]));
                }
            }
            SphereSample {
                points,
                covering: mesh / 2.0,
                certified: true,
            }
        }
    }
}

/// Latitude/longitude lattice on the Euclidean 2-sphere; geodesic spacing at
/// most `0.9*mesh` in each direction keeps the chordal covering under `mesh`.
fn sphere_latlong_3d(mesh: f64) -> SphereSample {
    let step = 0.9 * mesh;
    let nring = (std::f64::consts::PI / step).ceil() as usize;
    let mut points = Vec::new();
    for k in 0..=nring {
        let theta = std::f64::consts::PI * k as f64 / nring as f64;
        let r = theta.sin();
        let m = ((2.0 * std::f64::consts::PI * r / step).ceil() as usize).max(1);
        for j in 0..m {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            points.push(Point::new(vec![r * phi.cos(), r * phi.sin(), theta.cos()]));
        }
    }
    SphereSample {
        points,
        covering: mesh,
        certified: true,
    }
}

/// Seeded directions with a post-hoc covering estimate for the cases without
/// a deterministic lattice.
fn sphere_seeded(s: &Space, mesh: f64, seed: u64) -> SphereSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_axis = (3.0 / mesh).ceil();
    let count = (per_axis.powi(s.dim as i32 - 1) as usize).clamp(200, 120_000);
    let points: Vec<Point> = (0..count)
        .map(|_| Point::new(random_unit(&mut rng, s.dim, s.norm)))
        .collect();
    let probes: Vec<Vec<f64>> = (0..count * 2)
        .map(|_| random_unit(&mut rng, s.dim, s.norm))
        .collect();
    let mut worst = 0.0_f64;
    for p in &probes {
        let mut best = f64::INFINITY;
        for q in &points {
            let d = pnorm(s.norm, &sub(p, &q.coords));
            if d < best {
                best = d;
            }
        }
        worst = worst.max(best);
    }
    SphereSample {
        points,
        covering: 1.5 * worst,
        certified: false,
    }
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, dim: usize, norm: Norm) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| {
                // Box-Muller from two uniforms.
                let u1: f64 = rng.random::<f64>().max(1e-12);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = pnorm(norm, &v);
        if n > 1e-9 {
            return scl(&v, 1.0 / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(dim: usize, norm: Norm) -> Space {
        Space::new(dim, norm).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec())
    }

    #[test]
    fn norms_on_known_points() {
        assert_eq!(norm(&sp(2, Norm::L2), &pt(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(norm(&sp(2, Norm::Linf), &pt(&[1.0, -2.0])).unwrap(), 2.0);
        assert_eq!(
            norm(&sp(3, Norm::L1), &pt(&[0.5, -0.25, 0.25])).unwrap(),
            1.0
        );
    }

    #[test]
    fn dual_norms() {
        let f = Functional::new(vec![0.0, 1.0]);
        assert_eq!(dual_norm(&sp(2, Norm::L2), &f).unwrap(), 1.0);
        let f = Functional::new(vec![1.0, 1.0]);
        assert_eq!(dual_norm(&sp(2, Norm::Linf), &f).unwrap(), 2.0);
        let f = Functional::new(vec![2.0, -3.0]);
        assert_eq!(dual_norm(&sp(2, Norm::L1), &f).unwrap(), 3.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(norm(&sp(3, Norm::L2), &pt(&[1.0, 2.0])).is_err());
        assert!(dual_norm(&sp(2, Norm::L2), &Functional::new(vec![1.0])).is_err());
    }

    #[test]
    fn cloud_distances() {
        let s = sp(2, Norm::L2);
        let a = vec![pt(&[1.0, 0.0]), pt(&[0.0, 2.0])];
        assert_eq!(dist_to_cloud(&s, &pt(&[0.0, 0.0]), &a).unwrap(), 1.0);
        assert_eq!(
            dist_to_cloud(&s, &pt(&[1.0, 0.0]), &[pt(&[1.0, 0.0])]).unwrap(),
            0.0
        );
        let s = sp(2, Norm::Linf);
        let a = vec![pt(&[2.0, 1.0]), pt(&[1.0, 3.0])];
        assert_eq!(dist_to_cloud(&s, &pt(&[0.0, 0.0]), &a).unwrap(), 2.0);
        assert!(dist_to_cloud(&s, &pt(&[0.0, 0.0]), &[]).is_err());
    }

    #[test]
    fn thickening_matches_distance_threshold() {
        let s = sp(2, Norm::L2);
        let a = vec![pt(&[1.0, 0.0])];
        assert!(thickened_set_membership(&s, &pt(&[1.5, 0.0]), &a, 0.5).unwrap());
        assert!(!thickened_set_membership(&s, &pt(&[2.0, 0.0]), &a, 0.5).unwrap());
        let s = sp(2, Norm::Linf);
        assert!(thickened_set_membership(&s, &pt(&[1.4, 0.4]), &a, 0.5).unwrap());
        assert!(thickened_set_membership(&s, &pt(&[1.0, 0.0]), &a, -1.0).is_err());
    }

    #[test]
    fn polytope_distance_examples() {
        let s = sp(2, Norm::L2);
        let seg = vec![pt(&[-1.0, 0.0]), pt(&[1.0, 0.0])];
        assert!((dist_to_polytope(&s, &pt(&[0.0, 2.0]), &seg).unwrap() - 2.0).abs() < 1e-9);
        let v = vec![pt(&[0.0, 0.0]), pt(&[1.0, 1.0])];
        assert!(dist_to_polytope(&s, &pt(&[0.0, 0.0]), &v).unwrap() < 1e-9);
        let tri = vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])];
        let d = dist_to_polytope(&s, &pt(&[2.0, 1.0]), &tri).unwrap();
        assert!((d - 0.5_f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn polytope_distance_polyhedral_norms() {
        let tri = vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])];
        let d1 = dist_to_polytope(&sp(2, Norm::L1), &pt(&[2.0, 1.0]), &tri).unwrap();
        assert!((d1 - 1.0).abs() < 1e-9);
        let dinf = dist_to_polytope(&sp(2, Norm::Linf), &pt(&[2.0, 1.0]), &tri).unwrap();
        assert!((dinf - 0.5).abs() < 1e-9);
        let d0 = dist_to_polytope(&sp(2, Norm::Linf), &pt(&[0.5, 0.5]), &tri).unwrap();
        assert!(d0 < 1e-9);
    }

    /// Brute-force barycentric grid minimization, the independent oracle for
    /// hull distances in low dimension.
    fn grid_oracle(s: &Space, x: &Point, verts: &[Point], steps: usize) -> f64 {
        let k = verts.len();
        let mut best = f64::INFINITY;
        let mut idx = vec![0usize; k.saturating_sub(1)];
        loop {
            let total: usize = idx.iter().sum();
            if total <= steps {
                let mut y = vec![0.0; s.dim];
                for (i, v) in verts.iter().take(k - 1).enumerate() {
                    let w = idx[i] as f64 / steps as f64;
                    for (yj, vj) in y.iter_mut().zip(&v.coords) {
                        *yj += w * vj;
                    }
                }
                let w0 = 1.0 - total as f64 / steps as f64;
                for (yj, vj) in y.iter_mut().zip(&verts[k - 1].coords) {
                    *yj += w0 * vj;
                }
                let d = pnorm(s.norm, &sub(&x.coords, &y));
                if d < best {
                    best = d;
                }
            }
            let mut carry = true;
            for slot in idx.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot > steps {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry || idx.is_empty() {
                return best;
            }
        }
    }

    #[test]
    fn polytope_distance_agrees_with_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            for dim in 2..=3 {
                let s = sp(dim, norm);
                for _ in 0..5 {
                    let nv = 2 + (rng.random::<u32>() % 4) as usize;
                    let verts: Vec<Point> = (0..nv)
                        .map(|_| {
                            Point::new((0..dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect())
                        })
                        .collect();
                    let x = Point::new((0..dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect());
                    let fast = dist_to_polytope(&s, &x, &verts).unwrap();
                    let slow = grid_oracle(&s, &x, &verts, 60);
                    // The oracle grid is only 1/60-fine; allow its resolution error.
                    assert!(
                        fast <= slow + 1e-9 && slow - fast <= 0.2,
                        "norm={norm:?} dim={dim} fast={fast} slow={slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn fine_grid_oracle_within_1e6() {
        let s = sp(2, Norm::L2);
        let verts = vec![pt(&[0.3, -0.2]), pt(&[1.4, 0.7]), pt(&[-0.5, 1.1])];
        let x = pt(&[1.2, -0.9]);
        let fast = dist_to_polytope(&s, &x, &verts).unwrap();
        let slow = grid_oracle(&s, &x, &verts, 4000);
        assert!((fast - slow).abs() < 1e-6, "fast={fast} slow={slow}");
    }

    #[test]
    fn polytope_never_farther_than_cloud() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = sp(3, Norm::L2);
        for _ in 0..20 {
            let verts: Vec<Point> = (0..4)
                .map(|_| Point::new((0..3).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()))
                .collect();
            let x = Point::new((0..3).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect());
            let dp = dist_to_polytope(&s, &x, &verts).unwrap();
            let dc = dist_to_cloud(&s, &x, &verts).unwrap();
            assert!(dp <= dc + 1e-9);
        }
        let single = vec![pt(&[0.4, 0.5, 0.6])];
        let x = pt(&[1.0, 1.0, 1.0]);
        assert!(
            (dist_to_polytope(&s, &x, &single).unwrap() - dist_to_cloud(&s, &x, &single).unwrap())
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn sphere_sampling_2d() {
        let s = sp(2, Norm::L2);
        let sample = sample_unit_sphere(&s, 0.1, 42).unwrap();
        assert!(sample.points.len() >= 63);
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-12);
        }
        assert!(sample.certified);

        let s = sp(2, Norm::Linf);
        let sample = sample_unit_sphere(&s, 0.5, 42).unwrap();
        for p in &sample.points {
            assert!((pnorm(Norm::Linf, &p.coords) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_sampling_3d_unit_norm() {
        let s = sp(3, Norm::L2);
        let sample = sample_unit_sphere(&s, 0.2, 42).unwrap();
        for p in &sample.points {
            assert!((pnorm(Norm::L2, &p.coords) - 1.0).abs() < 1e-12);
        }
        assert!(sample.certified);
    }

    #[test]
    fn sphere_mesh_out_of_range() {
        let s = sp(2, Norm::L2);
        assert!(sample_unit_sphere(&s, 0.0, 42).is_err());
        assert!(sample_unit_sphere(&s, 1.0, 42).is_err());
    }

    #[test]
    fn dual_norm_matches_sphere_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            let s = sp(2, norm);
            let sample = sample_unit_sphere(&s, 0.01, 42).unwrap();
            for _ in 0..10 {
                let f = Functional::new(vec![
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                ]);
                let exact = dual_norm(&s, &f).unwrap();
                let sampled = sample
                    .points
                    .iter()
                    .map(|p| f.apply(p))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(sampled <= exact + 1e-12);
                assert!(exact - sampled <= exact.max(1.0) * 0.01 + 1e-12);
            }
        }
    }
}
