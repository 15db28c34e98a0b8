//! The four built-in problem fixtures: the norm-dependent separation pair,
//! the nested Bishop-Phelps pair, and the sine-curve efficiency sets (full
//! and clipped), discretized on a deterministic grid.

use crate::cones::Cone;
use crate::efficiency::PointCloud;
use crate::error::{Error, Result};
use crate::space::{Functional, Norm, Point, Space};

pub const FIXTURE_NAMES: &[&str] = &[
    "example-3-ssp",
    "example-3-bp",
    "example-4-curve",
    "example-4-clipped",
];

/// Default parameters a fixture ships with.
#[derive(Debug, Clone)]
pub struct FixtureDefaults {
    pub h: f64,
    pub mesh: f64,
    pub tol: f64,
    pub seed: u64,
    pub eps: f64,
    pub delta: f64,
    pub eps_ladder: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub n_max: usize,
    pub alpha_grid_size: usize,
    pub x0: Option<Point>,
}

/// A materialized fixture: cones, optional point cloud, defaults.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub space: Space,
    pub cone: Cone,
    pub cone2: Option<Cone>,
    pub cloud: Option<PointCloud>,
    pub defaults: FixtureDefaults,
}

fn defaults_2d() -> FixtureDefaults {
    FixtureDefaults {
        h: 0.01,
        mesh: 1e-3,
        tol: 1e-9,
        seed: 42,
        eps: 0.05,
        delta: 0.5_f64.sqrt(),
        eps_ladder: vec![0.05],
        eps_list: vec![0.2, 0.1, 0.05],
        // The shrink index grows like 24/eps^2 on the sine fixture, so the
        // density runs need far more than the generic default of 200.
        n_max: 20_000,
        alpha_grid_size: 600,
        x0: Some(Point::new(vec![0.0, 0.0])),
    }
}

/// Build a named fixture. `h` is the grid step for the curve fixtures; the
/// norm applies to the separation fixtures (the curve examples live in the
/// Euclidean plane).
pub fn fixture(name: &str, h: f64, norm: Norm) -> Result<Fixture> {
    if h <= 0.0 || h > 1.0 {
        return Err(Error::invalid("h", "grid step must lie in (0,1]"));
    }
    match name {
        "example-3-ssp" => {
            let s = Space::new(2, norm)?;
            let c = Cone::polyhedral(
                &s,
                vec![
                    Point::new(vec![1.0, 3.0_f64.sqrt()]),
                    Point::new(vec![-1.0, 3.0_f64.sqrt()]),
                ],
            )?;
            let k = Cone::polyhedral(
                &s,
                vec![Point::new(vec![1.0, 1.0]), Point::new(vec![-1.0, 1.0])],
            )?;
            Ok(Fixture {
                name: name.to_string(),
                space: s,
                cone: c,
                cone2: Some(k),
                cloud: None,
                defaults: FixtureDefaults { h, ..defaults_2d() },
            })
        }
        "example-3-bp" => {
            let s = Space::new(2, norm)?;
            let f = Functional::new(vec![0.0, 1.0]);
            let c = Cone::bishop_phelps(&s, f.clone(), 0.6)?;
            let k = Cone::bishop_phelps(&s, f, 0.3)?;
            Ok(Fixture {
                name: name.to_string(),
                space: s,
                cone: c,
                cone2: Some(k),
                cloud: None,
                defaults: FixtureDefaults { h, ..defaults_2d() },
            })
        }
        "example-4-curve" | "example-4-clipped" => {
            let s = Space::new(2, Norm::L2)?;
            let c = Cone::polyhedral(
                &s,
                vec![Point::new(vec![1.0, 1.0]), Point::new(vec![-1.0, 1.0])],
            )?;
            let cap = if name == "example-4-clipped" {
                1.0
            } else {
                2.0
            };
            let cloud = curve_region_cloud(h, cap, name);
            Ok(Fixture {
                name: name.to_string(),
                space: s,
                cone: c,
                cone2: None,
                cloud: Some(cloud),
                defaults: FixtureDefaults { h, ..defaults_2d() },
            })
        }
        other => Err(Error::invalid(
            "fixture",
            format!("unknown fixture {other}"),
        )),
    }
}

/// Grid discretization of {(x, y) : |x| <= π/2, sin(-|x|) <= y <= cap}: the
/// curve points (x_i, sin(-|x_i|)) on the lattice x_i = i·h plus the region
/// lattice strictly above the curve.
pub fn curve_region_cloud(h: f64, cap: f64, label: &str) -> PointCloud {
    let k = (std::f64::consts::FRAC_PI_2 / h + 1e-9).floor() as i64;
    let mut points = Vec::new();
    for i in -k..=k {
        let x = i as f64 * h;
        let y0 = (-x.abs()).sin();
        points.push(Point::new(vec![x, y0]));
        let mut j = (y0 / h).floor() as i64;
        while (j as f64) * h <= cap + 1e-12 {
            let y = j as f64 * h;
            if y > y0 + 1e-12 {
                points.push(Point::new(vec![x, y]));
            }
            j += 1;
        }
    }
    PointCloud::new(points, label)
}

/// Just the curve points of the fixture lattice (the analytic efficient set).
pub fn curve_points(h: f64) -> Vec<Point> {
    let k = (std::f64::consts::FRAC_PI_2 / h + 1e-9).floor() as i64;
    (-k..=k)
        .map(|i| {
            let x = i as f64 * h;
            Point::new(vec![x, (-x.abs()).sin()])
        })
        .collect()
}
