//! Cone representations, membership, bases, dual and augmented dual cones,
//! and the sublevel cone S(f,α) = {x : f(x) + α|x| <= 0}.

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpStatus};
use crate::planar::{self, Planar};
use crate::space::{dist_to_polytope_raw, dual_norm, neg, pnorm, scl, Functional, Point, Space};

/// Tagged cone representation. Bishop-Phelps and sublevel functionals are
/// normalized to dual norm one at construction, so `alpha` is always on the
/// unit scale.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeRepr {
    /// cone(co(generators)) for nonzero generators.
    Polyhedral {
        generators: Vec<Point>,
    },
    /// C(f,α) = {x : f(x) - α|x| >= 0}, 0 < α < 1.
    BishopPhelps {
        f: Functional,
        alpha: f64,
    },
    /// S(f,α) = {x : f(x) + α|x| <= 0}, 0 <= α <= 1.
    Sublevel {
        f: Functional,
        alpha: f64,
    },
    Negated {
        inner: Box<Cone>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub repr: ConeRepr,
    pub convexity_hint: bool,
}

impl Cone {
    pub fn polyhedral(s: &Space, generators: Vec<Point>) -> Result<Cone> {
        if generators.is_empty() {
            return Err(Error::EmptyInput("polyhedral cone needs generators"));
        }
        for g in &generators {
            s.check_dim(g.dim())?;
            if pnorm(s.norm, &g.coords) == 0.0 {
                return Err(Error::invalid("generators", "must be nonzero"));
            }
        }
        Ok(Cone {
            repr: ConeRepr::Polyhedral { generators },
            convexity_hint: true,
        })
    }

    pub fn bishop_phelps(s: &Space, f: Functional, alpha: f64) -> Result<Cone> {
        let nf = dual_norm(s, &f)?;
        if nf == 0.0 {
            return Err(Error::invalid("f", "must be nonzero"));
        }
        let alpha = alpha / nf;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(
                "alpha",
                "Bishop-Phelps requires 0 < alpha < dual_norm(f)",
            ));
        }
        Ok(Cone {
            repr: ConeRepr::BishopPhelps {
                f: Functional::new(scl(&f.coeffs, 1.0 / nf)),
                alpha,
            },
            convexity_hint: true,
        })
    }

    pub fn sublevel(s: &Space, f: Functional, alpha: f64) -> Result<Cone> {
        let nf = dual_norm(s, &f)?;
        if nf == 0.0 {
            return Err(Error::invalid("f", "must be nonzero"));
        }
        let alpha = alpha / nf;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(
                "alpha",
                "sublevel cone requires 0 <= alpha <= dual_norm(f)",
            ));
        }
        Ok(Cone {
            repr: ConeRepr::Sublevel {
                f: Functional::new(scl(&f.coeffs, 1.0 / nf)),
                alpha,
            },
            convexity_hint: true,
        })
    }

    pub fn negated(inner: Cone) -> Cone {
        let hint = inner.convexity_hint;
        Cone {
            repr: ConeRepr::Negated {
                inner: Box::new(inner),
            },
            convexity_hint: hint,
        }
    }

    /// The planar sector of this cone; only defined in dimension two.
    pub(crate) fn planar(&self, s: &Space) -> Result<Planar> {
        s.check_dim(2).map_err(|_| {
            Error::precondition("planar reduction only exists in dimension 2".to_string())
        })?;
        Ok(match &self.repr {
            ConeRepr::Polyhedral { generators } => {
                let gens: Vec<[f64; 2]> = generators
                    .iter()
                    .map(|g| [g.coords[0], g.coords[1]])
                    .collect();
                planar::sector_from_generators(&gens)
            }
            ConeRepr::BishopPhelps { f, alpha } => {
                planar::sector_from_bp(s.norm, [f.coeffs[0], f.coeffs[1]], *alpha)
            }
            ConeRepr::Sublevel { f, alpha } => {
                planar::sector_from_bp(s.norm, [-f.coeffs[0], -f.coeffs[1]], *alpha)
            }
            ConeRepr::Negated { inner } => inner.planar(s)?.negated(),
        })
    }

    /// Whether (-C) ∩ C = {0}. Exact in 2-D; polyhedral cones elsewhere use
    /// the strictly positive functional search.
    pub fn is_pointed(&self, s: &Space) -> Result<bool> {
        if s.dim == 2 {
            return Ok(self.planar(s)?.is_pointed());
        }
        Ok(match &self.repr {
            ConeRepr::Polyhedral { .. } => positive_functional(s, self)?.is_some(),
            ConeRepr::BishopPhelps { .. } => true,
            ConeRepr::Sublevel { alpha, .. } => *alpha > 0.0,
            ConeRepr::Negated { inner } => inner.is_pointed(s)?,
        })
    }
}

/// Cone membership at tolerance `tol`, measured on the normalized point so
/// the test is scale invariant. Every representation contains the origin.
pub fn membership(s: &Space, c: &Cone, x: &Point, tol: f64) -> Result<bool> {
    s.check_dim(x.dim())?;
    let nx = pnorm(s.norm, &x.coords);
    if nx == 0.0 {
        return Ok(true);
    }
    let xhat = scl(&x.coords, 1.0 / nx);
    membership_unit(s, c, &xhat, tol)
}

/// Membership of a unit-normalized point.
pub(crate) fn membership_unit(s: &Space, c: &Cone, xhat: &[f64], tol: f64) -> Result<bool> {
    if s.dim == 2 {
        let sector = c.planar(s)?;
        let d = planar::dist_to_planar(s.norm, &sector, [xhat[0], xhat[1]]);
        return Ok(d <= tol);
    }
    match &c.repr {
        ConeRepr::BishopPhelps { f, alpha } => Ok(f.apply_raw(xhat) - alpha >= -tol),
        ConeRepr::Sublevel { f, alpha } => Ok(f.apply_raw(xhat) + alpha <= tol),
        ConeRepr::Negated { inner } => membership_unit(s, inner, &neg(xhat), tol),
        ConeRepr::Polyhedral { generators } => Ok(polyhedral_member_nd(s, generators, xhat, tol)),
    }
}

/// n-D polyhedral membership: distance from the normalized point to the
/// truncated cone conv({0} ∪ generators/d0), which contains the projection of
/// every unit vector onto the cone. Cones containing a line fall back to a
/// conic-combination feasibility LP.
fn polyhedral_member_nd(s: &Space, generators: &[Point], xhat: &[f64], tol: f64) -> bool {
    let ghat: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| scl(&g.coords, 1.0 / pnorm(s.norm, &g.coords)))
        .collect();
    let refs: Vec<&[f64]> = ghat.iter().map(|v| v.as_slice()).collect();
    let zero = vec![0.0; s.dim];
    let d0 = dist_to_polytope_raw(s.norm, &zero, &refs);
    if d0 <= 1e-9 {
        return conic_combination_feasible(&ghat, xhat);
    }
    let scale = 1.0 / d0;
    let mut verts: Vec<Vec<f64>> = vec![zero];
    verts.extend(ghat.iter().map(|g| scl(g, scale)));
    let vrefs: Vec<&[f64]> = verts.iter().map(|v| v.as_slice()).collect();
    dist_to_polytope_raw(s.norm, xhat, &vrefs) <= tol
}

/// Feasibility of x = Σ λ_i g_i with λ >= 0, via phase-1 simplex.
fn conic_combination_feasible(gens: &[Vec<f64>], x: &[f64]) -> bool {
    let d = x.len();
    let k = gens.len();
    let a: Vec<Vec<f64>> = (0..d)
        .map(|j| (0..k).map(|i| gens[i][j]).collect())
        .collect();
    let c = vec![0.0; k];
    solve_lp(&a, x, &c).status == LpStatus::Optimal
}

/// Strict interior membership of a sublevel cone: f(x) + α|x| < 0. The
/// interior formula requires 0 < α < dual_norm(f).
pub fn interior_membership(s: &Space, c: &Cone, x: &Point) -> Result<bool> {
    s.check_dim(x.dim())?;
    let ConeRepr::Sublevel { f, alpha } = &c.repr else {
        return Err(Error::precondition(
            "interior_membership expects a sublevel cone".to_string(),
        ));
    };
    if !(*alpha > 0.0 && *alpha < 1.0) {
        return Err(Error::invalid(
            "alpha",
            "interior formula needs 0 < alpha < dual_norm(f)",
        ));
    }
    Ok(f.apply(x) + alpha * pnorm(s.norm, &x.coords) < 0.0)
}

/// A bounded polytopal base of a cone, with its certified norm extremes:
/// `delta_b` is the hull distance from the origin, `m` the largest vertex
/// norm (the norm maximum over the hull for convex norms).
#[derive(Debug, Clone)]
pub struct BasePolytope {
    pub vertices: Vec<Point>,
    pub delta_b: f64,
    pub m: f64,
}

impl BasePolytope {
    pub fn new(s: &Space, vertices: Vec<Point>) -> Result<BasePolytope> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("base polytope needs vertices"));
        }
        let refs: Vec<&[f64]> = vertices.iter().map(|p| p.coords.as_slice()).collect();
        let delta_b = dist_to_polytope_raw(s.norm, &vec![0.0; s.dim], &refs);
        if delta_b <= 0.0 {
            return Err(Error::precondition(
                "origin lies in the candidate base".to_string(),
            ));
        }
        let m = vertices
            .iter()
            .map(|v| pnorm(s.norm, &v.coords))
            .fold(0.0_f64, f64::max);
        Ok(BasePolytope {
            vertices,
            delta_b,
            m,
        })
    }

    pub fn scaled(&self, s: &Space, factor: f64) -> Result<BasePolytope> {
        BasePolytope::new(
            s,
            self.vertices
                .iter()
                .map(|v| Point::new(scl(&v.coords, factor)))
                .collect(),
        )
    }
}

/// The base {x ∈ S(f,α) : -f(x) = 1} of a sublevel cone, described by the
/// certified norm bound 1/α together with a finite sample of base points.
#[derive(Debug, Clone)]
pub struct SublevelBase {
    pub f: Functional,
    pub alpha: f64,
    pub norm_bound: f64,
    pub sample: Vec<Point>,
}

/// Base description of S(f,α) for 0 < α <= dual_norm(f); every base point has
/// norm at most 1/α.
pub fn sublevel_base(s: &Space, f: &Functional, alpha: f64) -> Result<SublevelBase> {
    let nf = dual_norm(s, f)?;
    if nf == 0.0 {
        return Err(Error::invalid("f", "must be nonzero"));
    }
    if alpha <= 0.0 || alpha > nf {
        return Err(Error::invalid("alpha", "need 0 < alpha <= dual_norm(f)"));
    }
    let cone = Cone::sublevel(s, f.clone(), alpha)?;
    let alpha_unit = alpha / nf;
    let fhat = Functional::new(scl(&f.coeffs, 1.0 / nf));
    // Scale sphere samples of S(f,α) onto the level set -f = 1. On the unit
    // sphere -f(s) >= α there, so the rescaled points obey |x| <= 1/α.
    let sample_pts = crate::sampling::cone_sphere_sample(s, &cone, 0.05, 42)?;
    let sample = sample_pts
        .points
        .iter()
        .filter_map(|p| {
            let denom = -fhat.apply(p);
            if denom > 1e-12 {
                Some(Point::new(scl(&p.coords, 1.0 / denom)))
            } else {
                None
            }
        })
        .collect();
    Ok(SublevelBase {
        f: fhat,
        alpha: alpha_unit,
        norm_bound: 1.0 / alpha_unit,
        sample,
    })
}

/// The base {x ∈ C : f(x) = 1} of a polyhedral cone, for f strictly positive
/// on the generators.
pub fn polyhedral_base(s: &Space, c: &Cone, f: &Functional) -> Result<BasePolytope> {
    let ConeRepr::Polyhedral { generators } = &c.repr else {
        return Err(Error::precondition(
            "polyhedral_base expects a polyhedral cone".to_string(),
        ));
    };
    s.check_dim(f.coeffs.len())?;
    let mut vertices = Vec::with_capacity(generators.len());
    for g in generators {
        let v = f.apply(g);
        if v <= 0.0 {
            return Err(Error::precondition(format!(
                "functional is not strictly positive on generator {:?}",
                g.coords
            )));
        }
        vertices.push(Point::new(scl(&g.coords, 1.0 / v)));
    }
    BasePolytope::new(s, vertices)
}

/// A strictly positive functional for a polyhedral cone, normalized to dual
/// norm one; None when the cone is not pointed. Tries the normalized
/// generator sum first, then a small feasibility LP maximizing the minimum
/// pairing.
pub fn positive_functional(s: &Space, c: &Cone) -> Result<Option<Functional>> {
    let ConeRepr::Polyhedral { generators } = &c.repr else {
        return Err(Error::precondition(
            "positive_functional expects a polyhedral cone".to_string(),
        ));
    };
    let ghat: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| scl(&g.coords, 1.0 / pnorm(s.norm, &g.coords)))
        .collect();
    let mut sum = vec![0.0; s.dim];
    for g in &ghat {
        for (si, gi) in sum.iter_mut().zip(g) {
            *si += gi;
        }
    }
    let ok = |f: &[f64]| {
        ghat.iter()
            .all(|g| crate::qp::dot(f, g) > 1e-9 * pnorm(s.norm.conjugate(), f))
    };
    let candidate = if pnorm(s.norm.conjugate(), &sum) > 1e-12 && ok(&sum) {
        Some(sum)
    } else {
        chebyshev_functional(&ghat, s.dim).filter(|f| ok(f))
    };
    Ok(candidate.map(|f| {
        let n = pnorm(s.norm.conjugate(), &f);
        Functional::new(scl(&f, 1.0 / n))
    }))
}

/// LP: maximize delta subject to <f, g_i> >= delta, |f|_inf <= 1.
fn chebyshev_functional(ghat: &[Vec<f64>], dim: usize) -> Option<Vec<f64>> {
    let k = ghat.len();
    // Variables: f+ (d) | f- (d) | delta+ | delta- | slack s (k) | box r (2d).
    let n = 2 * dim + 2 + k + 2 * dim;
    let rows = k + 2 * dim;
    let mut a = vec![vec![0.0; n]; rows];
    let mut b = vec![0.0; rows];
    for (i, g) in ghat.iter().enumerate() {
        for j in 0..dim {
            a[i][j] = g[j];
            a[i][dim + j] = -g[j];
        }
        a[i][2 * dim] = -1.0;
        a[i][2 * dim + 1] = 1.0;
        a[i][2 * dim + 2 + i] = -1.0;
        b[i] = 0.0;
    }
    for j in 0..2 * dim {
        a[k + j][j] = 1.0;
        a[k + j][2 * dim + 2 + k + j] = 1.0;
        b[k + j] = 1.0;
    }
    let mut c = vec![0.0; n];
    c[2 * dim] = -1.0;
    c[2 * dim + 1] = 1.0;
    let sol = solve_lp(&a, &b, &c);
    if sol.status != LpStatus::Optimal || -sol.value <= 1e-9 {
        return None;
    }
    Some(
        (0..dim)
            .map(|j| sol.x[j] - sol.x[dim + j])
            .collect::<Vec<f64>>(),
    )
}

/// A bounded base for a polyhedral cone if one exists (equivalent to
/// pointedness); absence is a valid answer, not an error.
pub fn bounded_base(s: &Space, c: &Cone) -> Result<Option<BasePolytope>> {
    match positive_functional(s, c)? {
        Some(f) => Ok(Some(polyhedral_base(s, c, &f)?)),
        None => Ok(None),
    }
}

/// Membership classes of an augmented pair (f, α) against the four augmented
/// dual cones, ordered from sharpest to none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugClass {
    SharpPlus,
    StarPlus,
    Sharp,
    Star,
    None,
}

impl AugClass {
    pub fn name(self) -> &'static str {
        match self {
            AugClass::SharpPlus => "a_sharp_plus",
            AugClass::StarPlus => "a_star_plus",
            AugClass::Sharp => "a_sharp",
            AugClass::Star => "a_star",
            AugClass::None => "none",
        }
    }
}

/// A functional/scalar pair classified against the augmented dual cones of a
/// cone. `margin` is a certified lower bound on inf {f(x) - α : x ∈ C ∩ S_X};
/// `margin_sampled` is the best value actually observed (the two coincide on
/// the exact 2-D path).
#[derive(Debug, Clone)]
pub struct AugPair {
    pub f: Functional,
    pub alpha: f64,
    pub class: AugClass,
    pub margin: f64,
    pub margin_sampled: f64,
}

const CLASS_EPS: f64 = 1e-12;

/// Classify (f, α) against the augmented dual cones of `c`: compute the
/// certified infimum of f - α over C ∩ S_X (exact sinusoid/vertex analysis in
/// 2-D, mesh sample with dual-norm slack elsewhere) and assign the tightest
/// class consistent with it. `none` is assigned only when a sampled point
/// itself violates the defining inequality.
pub fn classify_aug_pair(
    s: &Space,
    c: &Cone,
    f: &Functional,
    alpha: f64,
    mesh: f64,
) -> Result<AugPair> {
    s.check_dim(f.coeffs.len())?;
    if alpha < 0.0 {
        return Err(Error::invalid("alpha", "must be nonnegative"));
    }
    let (inf_sampled, inf_lower) = infimum_on_sphere(s, c, f, mesh)?;
    let margin_sampled = inf_sampled - alpha;
    let margin = inf_lower - alpha;
    let class = if margin_sampled < -CLASS_EPS {
        AugClass::None
    } else if margin > CLASS_EPS {
        if alpha > 0.0 {
            AugClass::SharpPlus
        } else {
            AugClass::Sharp
        }
    } else if alpha > 0.0 {
        AugClass::StarPlus
    } else if inf_sampled > CLASS_EPS {
        // α = 0 and f does not vanish on the sampled cone: f ∈ C^#.
        AugClass::Star
    } else {
        AugClass::None
    };
    Ok(AugPair {
        f: f.clone(),
        alpha,
        class,
        margin,
        margin_sampled,
    })
}

/// (sampled value, certified lower bound) of inf {f(x) : x ∈ C ∩ S_X}.
pub(crate) fn infimum_on_sphere(
    s: &Space,
    c: &Cone,
    f: &Functional,
    mesh: f64,
) -> Result<(f64, f64)> {
    if s.dim == 2 {
        let fa = [f.coeffs[0], f.coeffs[1]];
        let m = match c.planar(s)? {
            Planar::Plane => planar::min_pairing(s.norm, fa, 0.0, planar::TAU).0,
            Planar::Line(a) => {
                let u1 = planar::unit2(s.norm, a);
                let u2 = planar::unit2(s.norm, a + std::f64::consts::PI);
                f.apply_raw(&u1).min(f.apply_raw(&u2))
            }
            Planar::Ray(a) => f.apply_raw(&planar::unit2(s.norm, a)),
            Planar::Sector { lo, width } => planar::min_pairing(s.norm, fa, lo, width).0,
        };
        return Ok((m, m));
    }
    let sample = crate::sampling::cone_sphere_sample(s, c, mesh, 42)?;
    if sample.points.is_empty() {
        return Err(Error::DegenerateCone(
            "empty sphere section while classifying".to_string(),
        ));
    }
    let m = sample
        .points
        .iter()
        .map(|p| f.apply(p))
        .fold(f64::INFINITY, f64::min);
    let slack = dual_norm(s, f)? * sample.covering;
    Ok((m, m - slack))
}

/// The constructive direction of the bounded-base equivalence: a pointed
/// polyhedral cone with base functional f and δ = inf f over C ∩ S_X yields
/// the pair (f, δ/2) in the strict positive augmented dual.
pub fn augmented_witness_search(s: &Space, c: &Cone) -> Result<Option<AugPair>> {
    let Some(f) = positive_functional(s, c)? else {
        return Ok(None);
    };
    let (_, delta_lower) = infimum_on_sphere(s, c, &f, 0.01)?;
    if delta_lower <= 0.0 {
        return Ok(None);
    }
    let pair = classify_aug_pair(s, c, &f, delta_lower / 2.0, 0.01)?;
    if pair.class == AugClass::SharpPlus {
        Ok(Some(pair))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Norm;

    fn sp2() -> Space {
        Space::new(2, Norm::L2).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec())
    }

    fn cone_y_ge_abs_x(s: &Space) -> Cone {
        Cone::polyhedral(s, vec![pt(&[1.0, 1.0]), pt(&[-1.0, 1.0])]).unwrap()
    }

    #[test]
    fn bp_membership_45_degree_cone() {
        let s = sp2();
        // C(f, √2/2) with f=(0,1) is exactly {y >= |x|}.
        let c = Cone::bishop_phelps(&s, Functional::new(vec![0.0, 1.0]), 0.5_f64.sqrt()).unwrap();
        assert!(membership(&s, &c, &pt(&[1.0, 2.0]), 0.0).unwrap());
        assert!(!membership(&s, &c, &pt(&[2.0, 1.0]), 0.0).unwrap());
        assert!(membership(&s, &c, &pt(&[0.0, 0.0]), 0.0).unwrap());
    }

    #[test]
    fn membership_matches_between_representations() {
        let s = sp2();
        let poly = cone_y_ge_abs_x(&s);
        let bp = Cone::bishop_phelps(&s, Functional::new(vec![0.0, 1.0]), 0.5_f64.sqrt()).unwrap();
        for x in [
            [1.0, 2.0],
            [2.0, 1.0],
            [0.3, 0.3],
            [-5.0, 5.0],
            [0.0, -1.0],
            [1.4, 1.3],
        ] {
            assert_eq!(
                membership(&s, &poly, &pt(&x), 1e-12).unwrap(),
                membership(&s, &bp, &pt(&x), 1e-12).unwrap(),
                "x={x:?}"
            );
        }
    }

    #[test]
    fn membership_scale_invariance() {
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        for x in [[0.7, 0.9], [1.0, 0.99], [-0.4, 0.4]] {
            let m1 = membership(&s, &c, &pt(&x), 1e-9).unwrap();
            let m2 = membership(&s, &c, &pt(&[x[0] * 37.0, x[1] * 37.0]), 1e-9).unwrap();
            assert_eq!(m1, m2);
        }
    }

    #[test]
    fn polyhedral_membership_3d() {
        let s = Space::new(3, Norm::L2).unwrap();
        let c = Cone::polyhedral(
            &s,
            vec![
                pt(&[1.0, 0.0, 1.0]),
                pt(&[0.0, 1.0, 1.0]),
                pt(&[-1.0, 0.0, 1.0]),
                pt(&[0.0, -1.0, 1.0]),
            ],
        )
        .unwrap();
        assert!(membership(&s, &c, &pt(&[0.0, 0.0, 2.0]), 1e-9).unwrap());
        assert!(membership(&s, &c, &pt(&[0.5, 0.5, 1.0]), 1e-9).unwrap());
        assert!(!membership(&s, &c, &pt(&[1.5, 0.0, 1.0]), 1e-9).unwrap());
        assert!(!membership(&s, &c, &pt(&[0.0, 0.0, -1.0]), 1e-9).unwrap());
        // Non-pointed: the whole x-axis line plus z.
        let line = Cone::polyhedral(
            &s,
            vec![
                pt(&[1.0, 0.0, 0.0]),
                pt(&[-1.0, 0.0, 0.0]),
                pt(&[0.0, 0.0, 1.0]),
            ],
        )
        .unwrap();
        assert!(membership(&s, &line, &pt(&[-3.0, 0.0, 1.0]), 1e-9).unwrap());
        assert!(!membership(&s, &line, &pt(&[0.0, 1.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn interior_membership_examples() {
        let s = sp2();
        let c = Cone::sublevel(&s, Functional::new(vec![0.0, 1.0]), 0.5).unwrap();
        assert!(interior_membership(&s, &c, &pt(&[0.0, -1.0])).unwrap());
        assert!(!interior_membership(&s, &c, &pt(&[2.0, -1.0])).unwrap());
        assert!(!interior_membership(&s, &c, &pt(&[0.0, 0.0])).unwrap());
        let alpha_out = Cone::sublevel(&s, Functional::new(vec![0.0, 1.0]), 1.0).unwrap();
        assert!(interior_membership(&s, &alpha_out, &pt(&[0.0, -1.0])).is_err());
    }

    #[test]
    fn sublevel_base_bounds() {
        let s = sp2();
        let f = Functional::new(vec![0.0, 1.0]);
        let base = sublevel_base(&s, &f, 0.5).unwrap();
        assert_eq!(base.norm_bound, 2.0);
        assert!(!base.sample.is_empty());
        for x in &base.sample {
            assert!((-base.f.apply(x) - 1.0).abs() < 1e-9);
            assert!(pnorm(s.norm, &x.coords) <= 2.0 + 1e-9);
        }

        let base = sublevel_base(&s, &f, 0.99).unwrap();
        assert!((base.norm_bound - 1.0 / 0.99).abs() < 1e-12);
        for x in &base.sample {
            assert!(pnorm(s.norm, &x.coords) <= base.norm_bound + 1e-9);
        }

        // alpha = dual_norm(f): the base degenerates to {-f}.
        let base = sublevel_base(&s, &f, 1.0).unwrap();
        for x in &base.sample {
            assert!((x.coords[0]).abs() < 1e-9);
            assert!((x.coords[1] + 1.0).abs() < 1e-9);
        }
        assert!(sublevel_base(&s, &f, 1.01).is_err());
    }

    #[test]
    fn polyhedral_base_examples() {
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        let b = polyhedral_base(&s, &c, &Functional::new(vec![0.0, 1.0])).unwrap();
        assert!((b.delta_b - 1.0).abs() < 1e-9);
        assert!((b.m - 2.0_f64.sqrt()).abs() < 1e-12);

        let b2 = polyhedral_base(&s, &c, &Functional::new(vec![0.0, 2.0])).unwrap();
        assert!((b2.delta_b - 0.5).abs() < 1e-9);

        let ray = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0])]).unwrap();
        let b3 = polyhedral_base(&s, &ray, &Functional::new(vec![1.0, 0.0])).unwrap();
        assert!((b3.delta_b - 1.0).abs() < 1e-12);
        assert!((b3.m - 1.0).abs() < 1e-12);

        assert!(polyhedral_base(&s, &c, &Functional::new(vec![1.0, 0.0])).is_err());
    }

    #[test]
    fn bounded_base_search() {
        let s = sp2();
        assert!(bounded_base(&s, &cone_y_ge_abs_x(&s)).unwrap().is_some());
        let line = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0]), pt(&[-1.0, 0.0])]).unwrap();
        assert!(bounded_base(&s, &line).unwrap().is_none());
        let ray = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0])]).unwrap();
        assert!(bounded_base(&s, &ray).unwrap().is_some());
    }

    #[test]
    fn classify_examples() {
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        let f = Functional::new(vec![0.0, 1.0]);
        let p = classify_aug_pair(&s, &c, &f, 0.5, 0.01).unwrap();
        assert_eq!(p.class, AugClass::SharpPlus);
        assert!((p.margin - (0.5_f64.sqrt() - 0.5)).abs() < 1e-12);

        let p = classify_aug_pair(&s, &c, &f, 0.5_f64.sqrt(), 0.01).unwrap();
        assert_eq!(p.class, AugClass::StarPlus);
        assert!(p.margin.abs() < 1e-12);

        let p = classify_aug_pair(&s, &c, &Functional::new(vec![1.0, 0.0]), 0.0, 0.01).unwrap();
        assert_eq!(p.class, AugClass::None);
    }

    #[test]
    fn witness_search_examples() {
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        let w = augmented_witness_search(&s, &c).unwrap().unwrap();
        assert_eq!(w.class, AugClass::SharpPlus);
        assert!((w.alpha - 2.0_f64.sqrt() / 4.0).abs() < 1e-9);

        let line = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0]), pt(&[-1.0, 0.0])]).unwrap();
        assert!(augmented_witness_search(&s, &line).unwrap().is_none());

        let ray = Cone::polyhedral(&s, vec![pt(&[1.0, 0.0])]).unwrap();
        let w = augmented_witness_search(&s, &ray).unwrap().unwrap();
        assert!((w.alpha - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sublevel_contains_negated_cone_for_star_pairs() {
        // Lemma: -C ⊂ S(f,α) whenever (f,α) ∈ C^{a*} and α <= dual_norm(f).
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        let f = Functional::new(vec![0.0, 1.0]);
        let pair = classify_aug_pair(&s, &c, &f, 0.6, 0.01).unwrap();
        assert_eq!(pair.class, AugClass::SharpPlus);
        let sub = Cone::sublevel(&s, f, 0.6).unwrap();
        for x in [[0.5, -1.0], [-0.2, -0.2], [0.0, -3.0], [1.0, -1.0]] {
            assert!(membership(&s, &sub, &pt(&[-x[0], x[1]]), 1e-9).unwrap());
        }
    }

    #[test]
    fn exact_classifier_agrees_with_sampled_path() {
        // The certified 2-D margin and the mesh-sampled margin of the n-D
        // path agree up to the covering slack, over 100 random planar cones.
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let s = sp2();
        let mesh = 1e-3;
        for case in 0..100 {
            let lo = rng.random::<f64>() * std::f64::consts::TAU;
            let width = 0.1 + (std::f64::consts::PI - 0.2) * rng.random::<f64>();
            let c = Cone::polyhedral(
                &s,
                vec![
                    pt(&[lo.cos(), lo.sin()]),
                    pt(&[(lo + width).cos(), (lo + width).sin()]),
                ],
            )
            .unwrap();
            let phi = lo + width * rng.random::<f64>();
            let f = Functional::new(vec![phi.cos(), phi.sin()]);
            let (exact, _) = infimum_on_sphere(&s, &c, &f, mesh).unwrap();
            // Sampled route, written out the way the n-D classifier works.
            let sample = crate::sampling::cone_sphere_sample(&s, &c, mesh, 42).unwrap();
            let sampled = sample
                .points
                .iter()
                .map(|p| f.apply(p))
                .fold(f64::INFINITY, f64::min);
            let slack = sample.covering; // dual norm of f is 1
            assert!(
                sampled >= exact - 1e-12 && sampled - exact <= slack + 1e-12,
                "case {case}: exact {exact} sampled {sampled} slack {slack}"
            );
        }
    }

    #[test]
    fn smaller_alpha_stays_sharp_plus() {
        let s = sp2();
        let c = cone_y_ge_abs_x(&s);
        let f = Functional::new(vec![0.0, 1.0]);
        let p1 = classify_aug_pair(&s, &c, &f, 0.5, 0.01).unwrap();
        assert_eq!(p1.class, AugClass::SharpPlus);
        for alpha in [0.4, 0.25, 0.1, 1e-6] {
            let p = classify_aug_pair(&s, &c, &f, alpha, 0.01).unwrap();
            assert_eq!(p.class, AugClass::SharpPlus);
        }
    }
}
