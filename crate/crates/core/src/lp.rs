//! Dense two-phase simplex for the small linear programs that back
//! polyhedral-norm polytope distances and base-functional searches.

// Index loops over tableau rows/columns mirror the written algorithms.
#![allow(clippy::needless_range_loop)]

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
}

const EPS: f64 = 1e-11;

/// Minimize `c·x` subject to `a x = b`, `x >= 0`.
///
/// Standard two-phase tableau simplex with Bland's rule, adequate for the
/// problem sizes in this crate (tens of rows, up to a few thousand columns).
pub(crate) fn solve_lp(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpSolution {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau with artificial variables appended: columns [x | artificials | rhs].
    let total = n + m;
    let mut t = vec![vec![0.0; total + 1]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[i][j] = flip * v;
        }
        t[i][n + i] = 1.0;
        t[i][total] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; total + 1];
    for j in 0..=total {
        let mut s = 0.0;
        for row in t.iter() {
            s += row[j];
        }
        obj[j] = -s;
    }
    for j in n..total {
        obj[j] += 1.0;
    }
    if !run_simplex(&mut t, &mut obj, &mut basis, total) {
        // Phase 1 is bounded below by 0; unboundedness signals a numerical breakdown.
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            value: f64::NAN,
        };
    }
    if -obj[total] > 1e-7 {
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            value: f64::NAN,
        };
    }

    // Pivot remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > 1e-8) {
                pivot(&mut t, &mut obj, i, j);
                basis[i] = j;
            }
        }
    }

    // Phase 2: rebuild the reduced objective for c over the current basis.
    let mut obj2 = vec![0.0; total + 1];
    for (j, &cj) in c.iter().enumerate() {
        obj2[j] = cj;
    }
    for j in n..total {
        obj2[j] = f64::INFINITY; // block artificials from re-entering
    }
    for i in 0..m {
        if basis[i] < n {
            let cb = c[basis[i]];
            if cb != 0.0 {
                for j in 0..=total {
                    if obj2[j].is_finite() {
                        obj2[j] -= cb * t[i][j];
                    }
                }
            }
        }
    }
    if !run_simplex(&mut t, &mut obj2, &mut basis, total) {
        return LpSolution {
            status: LpStatus::Unbounded,
            x: vec![0.0; n],
            value: f64::NEG_INFINITY,
        };
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][total];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
    }
}

/// Bland-rule simplex loop; returns false if the problem is unbounded.
fn run_simplex(t: &mut [Vec<f64>], obj: &mut [f64], basis: &mut [usize], total: usize) -> bool {
    let m = t.len();
    loop {
        let enter = (0..total).find(|&j| obj[j].is_finite() && obj[j] < -EPS);
        let Some(e) = enter else {
            return true;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][e] > EPS {
                let ratio = t[i][total] / t[i][e];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS || (ratio < lr + EPS && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            return false;
        };
        pivot_obj(t, obj, l, e);
        basis[l] = e;
    }
}

fn pivot(t: &mut [Vec<f64>], obj: &mut [f64], row: usize, col: usize) {
    pivot_obj(t, obj, row, col);
}

fn pivot_obj(t: &mut [Vec<f64>], obj: &mut [f64], row: usize, col: usize) {
    let m = t.len();
    let width = t[0].len();
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    for i in 0..m {
        if i != row {
            let f = t[i][col];
            if f != 0.0 {
                for j in 0..width {
                    t[i][j] -= f * t[row][j];
                }
            }
        }
    }
    let f = obj[col];
    if f != 0.0 && f.is_finite() {
        for j in 0..width {
            if obj[j].is_finite() {
                obj[j] -= f * t[row][j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_basic_lp() {
        // min -x - y  s.t.  x + y + s = 1
        let a = vec![vec![1.0, 1.0, 1.0]];
        let b = vec![1.0];
        let c = vec![-1.0, -1.0, 0.0];
        let sol = solve_lp(&a, &b, &c);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        // x = -1 with x >= 0
        let a = vec![vec![1.0]];
        let b = vec![-1.0];
        let c = vec![0.0];
        let sol = solve_lp(&a, &b, &c);
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x  s.t.  x - s = 0
        let a = vec![vec![1.0, -1.0]];
        let b = vec![0.0];
        let c = vec![-1.0, 0.0];
        let sol = solve_lp(&a, &b, &c);
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_degenerate_rows() {
        // min x1 s.t. x1 + x2 = 2, x1 - x2 = 0  => x1 = x2 = 1
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = vec![2.0, 0.0];
        let c = vec![1.0, 0.0];
        let sol = solve_lp(&a, &b, &c);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
    }
}
