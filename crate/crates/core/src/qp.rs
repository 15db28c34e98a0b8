//! Minimum-norm point in a convex hull (Wolfe's method), driven by a linear
//! minimization oracle so hulls of implicit difference sets never have to be
//! materialized.

// Index loops over tableau rows/columns mirror the written algorithms.
#![allow(clippy::needless_range_loop)]

/// Result of a min-norm-point run. `norm` is an upper bound on the true
/// distance; `gap` is the final Frank-Wolfe duality gap, so the true squared
/// distance lies in `[norm^2 - gap, norm^2]`.
#[derive(Debug, Clone)]
pub(crate) struct MnpResult {
    pub point: Vec<f64>,
    pub norm: f64,
    pub gap: f64,
    pub weights: Vec<(Vec<f64>, f64)>,
}

/// Support-point descent for `min { |y| : y in conv(V) }` where `V` is exposed
/// through `lmo(d) = argmin_{v in V} <d, v>`. Each major cycle inserts the
/// support point for the current iterate and re-minimizes over the affine hull
/// of the corral, dropping vertices whose weights go negative.
pub(crate) fn min_norm_point(
    lmo: &mut dyn FnMut(&[f64]) -> Vec<f64>,
    start: Vec<f64>,
    gap_tol: f64,
    max_iter: usize,
) -> MnpResult {
    let dim = start.len();
    let mut corral: Vec<Vec<f64>> = vec![start.clone()];
    let mut weights: Vec<f64> = vec![1.0];
    let mut y = start;
    let mut gap = f64::INFINITY;

    for _ in 0..max_iter {
        let ynorm2 = dot(&y, &y);
        let v = lmo(&y);
        gap = ynorm2 - dot(&y, &v);
        let scale = corral
            .iter()
            .chain(std::iter::once(&v))
            .map(|w| dot(w, w))
            .fold(1.0_f64, f64::max);
        if gap <= gap_tol * scale {
            break;
        }
        // Stall guard: the support point is already in the corral.
        if corral.iter().any(|c| sq_dist(c, &v) <= 1e-28 * scale) {
            break;
        }
        corral.push(v);
        weights.push(0.0);

        // Minor cycles: affine minimization over the corral, then pull the
        // weights back into the simplex along the segment to the old weights.
        for _ in 0..(dim + 2) * 4 {
            let Some(alpha) = affine_min_weights(&corral) else {
                // Affinely dependent corral the solver could not resolve;
                // drop the oldest vertex and retry.
                corral.remove(0);
                weights.remove(0);
                renormalize(&mut weights);
                continue;
            };
            if alpha.iter().all(|&a| a >= -1e-12) {
                weights = alpha;
                break;
            }
            let mut theta = 1.0_f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if a < w {
                    let t = w / (w - a);
                    if t < theta {
                        theta = t;
                    }
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w += theta * (a - *w);
            }
            let mut i = 0;
            while i < weights.len() {
                if weights[i] <= 1e-12 {
                    weights.remove(i);
                    corral.remove(i);
                } else {
                    i += 1;
                }
            }
            renormalize(&mut weights);
            if corral.len() <= 1 {
                break;
            }
        }
        y = combine(&corral, &weights, dim);
    }

    let norm = dot(&y, &y).max(0.0).sqrt();
    MnpResult {
        point: y,
        norm,
        gap: gap.max(0.0),
        weights: corral.into_iter().zip(weights).collect(),
    }
}

/// Solve `min |sum a_i s_i|` over `sum a_i = 1` via the bordered normal
/// equations; returns None when the Gram system is numerically singular.
fn affine_min_weights(corral: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = corral.len();
    let mut m = vec![vec![0.0; k + 2]; k + 1];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(&corral[i], &corral[j]);
        }
        m[i][k] = 1.0;
        m[i][k + 1] = 0.0;
    }
    for j in 0..k {
        m[k][j] = 1.0;
    }
    m[k][k] = 0.0;
    m[k][k + 1] = 1.0;
    solve_dense(&mut m, k + 1).map(|sol| sol[..k].to_vec())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(m: &mut [Vec<f64>], n: usize) -> Option<Vec<f64>> {
    let scale = m
        .iter()
        .flat_map(|r| r[..n].iter().map(|v| v.abs()))
        .fold(1.0_f64, f64::max);
    for col in 0..n {
        let (pivot, mag) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if mag <= 1e-13 * scale {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for j in col..=n {
                        m[r][j] -= f * m[col][j];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn renormalize(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for v in w.iter_mut() {
            *v /= s;
        }
    }
}

fn combine(corral: &[Vec<f64>], weights: &[f64], dim: usize) -> Vec<f64> {
    let mut y = vec![0.0; dim];
    for (c, &w) in corral.iter().zip(weights) {
        for (yi, ci) in y.iter_mut().zip(c) {
            *yi += w * ci;
        }
    }
    y
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mnp_over(vertices: &[Vec<f64>], tol: f64) -> MnpResult {
        let verts = vertices.to_vec();
        let start = verts
            .iter()
            .min_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
            .unwrap()
            .clone();
        let mut lmo = move |d: &[f64]| {
            verts
                .iter()
                .min_by(|a, b| dot(d, a).total_cmp(&dot(d, b)))
                .unwrap()
                .clone()
        };
        min_norm_point(&mut lmo, start, tol, 200)
    }

    #[test]
    fn segment_projection() {
        // conv{(-1,2),(1,2)}: nearest point to origin is (0,2).
        let r = mnp_over(&[vec![-1.0, 2.0], vec![1.0, 2.0]], 1e-12);
        assert!((r.norm - 2.0).abs() < 1e-9);
        assert!(r.point[0].abs() < 1e-9);
    }

    #[test]
    fn hull_containing_origin() {
        let r = mnp_over(&[vec![1.0, 0.0], vec![-1.0, 1.0], vec![-1.0, -1.0]], 1e-12);
        assert!(r.norm < 1e-7);
    }

    #[test]
    fn vertex_optimum() {
        let r = mnp_over(&[vec![3.0, 4.0], vec![5.0, 5.0]], 1e-12);
        assert!((r.norm - 5.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_face_optimum_3d() {
        // Distance from origin to the plane x+y+z=3 within the triangle.
        let r = mnp_over(
            &[
                vec![3.0, 0.0, 0.0],
                vec![0.0, 3.0, 0.0],
                vec![0.0, 0.0, 3.0],
            ],
            1e-12,
        );
        assert!((r.norm - 3.0 / 3f64.sqrt()).abs() < 1e-9);
    }
}
