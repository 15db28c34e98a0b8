//! The problem-specification file format: line-oriented `key = value` pairs
//! with a strict key set, a canonical serializer (byte-stable round trips),
//! and resolution into core objects.

use anyhow::{anyhow, bail, Context, Result};
use conesep::cones::{Cone, ConeRepr};
use conesep::efficiency::PointCloud;
use conesep::fixtures;
use conesep::{Functional, Norm, Point, Space};

#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec {
    Polyhedral(Vec<Vec<f64>>),
    BishopPhelps(Vec<f64>, f64),
    Sublevel(Vec<f64>, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    Fixture(String),
    Points(Vec<Vec<f64>>),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    pub mesh: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub eps: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub h: Option<f64>,
    pub eps_ladder: Option<Vec<f64>>,
    pub n_max: Option<usize>,
    pub alpha_grid: Option<usize>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub dim: usize,
    pub norm: Norm,
    pub cone: Option<ConeSpec>,
    pub cone2: Option<ConeSpec>,
    pub set: Option<SetSpec>,
    pub params: Params,
}

pub fn parse_norm(text: &str) -> Result<Norm> {
    match text {
        "l1" => Ok(Norm::L1),
        "l2" => Ok(Norm::L2),
        "linf" => Ok(Norm::Linf),
        other => bail!("unknown norm {other:?} (expected l1, l2, or linf)"),
    }
}

/// Parse a problem file. Unknown keys are rejected with their line number.
pub fn parse(text: &str) -> Result<ProblemSpec> {
    let mut dim = None;
    let mut norm = None;
    let mut cone_kind: Option<(usize, String)> = None;
    let mut cone_gens = None;
    let mut cone_f = None;
    let mut cone_alpha = None;
    let mut cone2_kind: Option<(usize, String)> = None;
    let mut cone2_gens = None;
    let mut cone2_f = None;
    let mut cone2_alpha = None;
    let mut set_kind: Option<(usize, String)> = None;
    let mut set_fixture = None;
    let mut set_points = None;
    let mut set_file = None;
    let mut params = Params::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let no = lineno + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {no}: expected `key = value`, got {line:?}"))?;
        let key = key.trim();
        let value = value.trim();
        let ctx = |what: &str| format!("line {no}, field {key}: bad {what}");
        match key {
            "dim" => dim = Some(value.parse::<usize>().with_context(|| ctx("integer"))?),
            "norm" => norm = Some(parse_norm(value).with_context(|| ctx("norm"))?),
            "cone.kind" => cone_kind = Some((no, value.to_string())),
            "cone.generators" => {
                cone_gens = Some(parse_vec_list(value).with_context(|| ctx("vector list"))?)
            }
            "cone.f" => cone_f = Some(parse_vec(value).with_context(|| ctx("vector"))?),
            "cone.alpha" => cone_alpha = Some(value.parse::<f64>().with_context(|| ctx("number"))?),
            "cone2.kind" => cone2_kind = Some((no, value.to_string())),
            "cone2.generators" => {
                cone2_gens = Some(parse_vec_list(value).with_context(|| ctx("vector list"))?)
            }
            "cone2.f" => cone2_f = Some(parse_vec(value).with_context(|| ctx("vector"))?),
            "cone2.alpha" => {
                cone2_alpha = Some(value.parse::<f64>().with_context(|| ctx("number"))?)
            }
            "set.kind" => set_kind = Some((no, value.to_string())),
            "set.fixture" => set_fixture = Some(value.to_string()),
            "set.points" => {
                set_points = Some(parse_vec_list(value).with_context(|| ctx("vector list"))?)
            }
            "set.file" => set_file = Some(value.to_string()),
            "mesh" => params.mesh = Some(value.parse().with_context(|| ctx("number"))?),
            "tol" => params.tol = Some(value.parse().with_context(|| ctx("number"))?),
            "seed" => params.seed = Some(value.parse().with_context(|| ctx("integer"))?),
            "eps" => params.eps = Some(parse_num_list(value).with_context(|| ctx("number list"))?),
            "delta" => params.delta = Some(value.parse().with_context(|| ctx("number"))?),
            "h" => params.h = Some(value.parse().with_context(|| ctx("number"))?),
            "eps_ladder" => {
                params.eps_ladder = Some(parse_num_list(value).with_context(|| ctx("number list"))?)
            }
            "n_max" => params.n_max = Some(value.parse().with_context(|| ctx("integer"))?),
            "alpha_grid" => {
                params.alpha_grid = Some(value.parse().with_context(|| ctx("integer"))?)
            }
            "x0" => params.x0 = Some(parse_vec(value).with_context(|| ctx("vector"))?),
            other => bail!("line {no}: unknown field {other:?}"),
        }
    }

    let dim = dim.ok_or_else(|| anyhow!("missing field: dim"))?;
    let norm = norm.ok_or_else(|| anyhow!("missing field: norm"))?;
    let cone = build_cone_spec(cone_kind, cone_gens, cone_f, cone_alpha, "cone")?;
    let cone2 = build_cone_spec(cone2_kind, cone2_gens, cone2_f, cone2_alpha, "cone2")?;
    let set = match set_kind {
        None => {
            if set_fixture.is_some() || set_points.is_some() || set_file.is_some() {
                bail!("set.* fields given without set.kind");
            }
            None
        }
        Some((no, kind)) => Some(match kind.as_str() {
            "fixture" => SetSpec::Fixture(
                set_fixture
                    .ok_or_else(|| anyhow!("line {no}: set.kind=fixture needs set.fixture"))?,
            ),
            "points" => SetSpec::Points(
                set_points.ok_or_else(|| anyhow!("line {no}: set.kind=points needs set.points"))?,
            ),
            "file" => SetSpec::File(
                set_file.ok_or_else(|| anyhow!("line {no}: set.kind=file needs set.file"))?,
            ),
            other => bail!("line {no}: unknown set kind {other:?}"),
        }),
    };
    Ok(ProblemSpec {
        dim,
        norm,
        cone,
        cone2,
        set,
        params,
    })
}

fn build_cone_spec(
    kind: Option<(usize, String)>,
    gens: Option<Vec<Vec<f64>>>,
    f: Option<Vec<f64>>,
    alpha: Option<f64>,
    label: &str,
) -> Result<Option<ConeSpec>> {
    match kind {
        None => {
            if gens.is_some() || f.is_some() || alpha.is_some() {
                bail!("{label}.* fields given without {label}.kind");
            }
            Ok(None)
        }
        Some((no, kind)) => Ok(Some(match kind.as_str() {
            "polyhedral" => {
                ConeSpec::Polyhedral(gens.ok_or_else(|| {
                    anyhow!("line {no}: polyhedral cone needs {label}.generators")
                })?)
            }
            "bishop_phelps" => ConeSpec::BishopPhelps(
                f.ok_or_else(|| anyhow!("line {no}: bishop_phelps cone needs {label}.f"))?,
                alpha
                    .ok_or_else(|| anyhow!("line {no}: bishop_phelps cone needs {label}.alpha"))?,
            ),
            "sublevel" => ConeSpec::Sublevel(
                f.ok_or_else(|| anyhow!("line {no}: sublevel cone needs {label}.f"))?,
                alpha.ok_or_else(|| anyhow!("line {no}: sublevel cone needs {label}.alpha"))?,
            ),
            other => bail!("line {no}: unknown cone kind {other:?}"),
        })),
    }
}

fn parse_vec(text: &str) -> Result<Vec<f64>> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| anyhow!("expected (a, b, ...), got {text:?}"))?;
    inner
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("{e}: {t:?}")))
        .collect()
}

fn parse_vec_list(text: &str) -> Result<Vec<Vec<f64>>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| anyhow!("expected [(..), (..)], got {text:?}"))?;
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            ')' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    let s = start.take().ok_or_else(|| anyhow!("unbalanced parens"))?;
                    out.push(parse_vec(&inner[s..=i])?);
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        bail!("unbalanced parens in {text:?}");
    }
    Ok(out)
}

fn parse_num_list(text: &str) -> Result<Vec<f64>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .unwrap_or(text);
    inner
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("{e}: {t:?}")))
        .collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn fmt_vec_list(vs: &[Vec<f64>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| fmt_vec(v)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_num_list(vs: &[f64]) -> String {
    let parts: Vec<String> = vs.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical serialization: fixed key order, shortest round-trip floats.
/// parse(serialize(s)) == s, and serialize(parse(t)) is byte-stable.
pub fn serialize(spec: &ProblemSpec) -> String {
    let mut out = String::from("# conesep problem\n");
    out.push_str(&format!("dim = {}\n", spec.dim));
    out.push_str(&format!("norm = {}\n", spec.norm.name()));
    for (label, cone) in [("cone", &spec.cone), ("cone2", &spec.cone2)] {
        if let Some(cone) = cone {
            match cone {
                ConeSpec::Polyhedral(gens) => {
                    out.push_str(&format!("{label}.kind = polyhedral\n"));
                    out.push_str(&format!("{label}.generators = {}\n", fmt_vec_list(gens)));
                }
                ConeSpec::BishopPhelps(f, alpha) => {
                    out.push_str(&format!("{label}.kind = bishop_phelps\n"));
                    out.push_str(&format!("{label}.f = {}\n", fmt_vec(f)));
                    out.push_str(&format!("{label}.alpha = {alpha}\n"));
                }
                ConeSpec::Sublevel(f, alpha) => {
                    out.push_str(&format!("{label}.kind = sublevel\n"));
                    out.push_str(&format!("{label}.f = {}\n", fmt_vec(f)));
                    out.push_str(&format!("{label}.alpha = {alpha}\n"));
                }
            }
        }
    }
    match &spec.set {
        Some(SetSpec::Fixture(name)) => {
            out.push_str("set.kind = fixture\n");
            out.push_str(&format!("set.fixture = {name}\n"));
        }
        Some(SetSpec::Points(points)) => {
            out.push_str("set.kind = points\n");
            out.push_str(&format!("set.points = {}\n", fmt_vec_list(points)));
        }
        Some(SetSpec::File(path)) => {
            out.push_str("set.kind = file\n");
            out.push_str(&format!("set.file = {path}\n"));
        }
        None => {}
    }
    let p = &spec.params;
    if let Some(v) = p.mesh {
        out.push_str(&format!("mesh = {v}\n"));
    }
    if let Some(v) = p.tol {
        out.push_str(&format!("tol = {v}\n"));
    }
    if let Some(v) = p.seed {
        out.push_str(&format!("seed = {v}\n"));
    }
    if let Some(v) = &p.eps {
        out.push_str(&format!("eps = {}\n", fmt_num_list(v)));
    }
    if let Some(v) = p.delta {
        out.push_str(&format!("delta = {v}\n"));
    }
    if let Some(v) = p.h {
        out.push_str(&format!("h = {v}\n"));
    }
    if let Some(v) = &p.eps_ladder {
        out.push_str(&format!("eps_ladder = {}\n", fmt_num_list(v)));
    }
    if let Some(v) = p.n_max {
        out.push_str(&format!("n_max = {v}\n"));
    }
    if let Some(v) = p.alpha_grid {
        out.push_str(&format!("alpha_grid = {v}\n"));
    }
    if let Some(v) = &p.x0 {
        out.push_str(&format!("x0 = {}\n", fmt_vec(v)));
    }
    out
}

/// Materialize a named fixture into a problem spec carrying its defaults.
pub fn fixture_spec(name: &str, h: f64, norm: Norm) -> Result<ProblemSpec> {
    let fx = fixtures::fixture(name, h, norm).map_err(|e| anyhow!("{e}"))?;
    let cone_to_spec = |c: &Cone| -> ConeSpec {
        match &c.repr {
            ConeRepr::Polyhedral { generators } => {
                ConeSpec::Polyhedral(generators.iter().map(|g| g.coords.clone()).collect())
            }
            ConeRepr::BishopPhelps { f, alpha } => ConeSpec::BishopPhelps(f.coeffs.clone(), *alpha),
            ConeRepr::Sublevel { f, alpha } => ConeSpec::Sublevel(f.coeffs.clone(), *alpha),
            ConeRepr::Negated { .. } => unreachable!("fixtures carry direct cones"),
        }
    };
    let d = &fx.defaults;
    Ok(ProblemSpec {
        dim: fx.space.dim,
        norm: fx.space.norm,
        cone: Some(cone_to_spec(&fx.cone)),
        cone2: fx.cone2.as_ref().map(cone_to_spec),
        set: fx
            .cloud
            .as_ref()
            .map(|_| SetSpec::Fixture(name.to_string())),
        params: Params {
            mesh: Some(d.mesh),
            tol: Some(d.tol),
            seed: Some(d.seed),
            eps: Some(vec![d.eps]),
            delta: Some(d.delta),
            h: Some(d.h),
            eps_ladder: Some(d.eps_ladder.clone()),
            n_max: Some(d.n_max),
            alpha_grid: Some(d.alpha_grid_size),
            x0: d.x0.as_ref().map(|p| p.coords.clone()),
        },
    })
}

/// Everything a command needs, resolved from the spec plus overrides.
pub struct Resolved {
    pub space: Space,
    pub cone: Option<Cone>,
    pub cone2: Option<Cone>,
    pub cloud: Option<PointCloud>,
    pub mesh: f64,
    pub tol: f64,
    pub seed: u64,
    pub eps: Vec<f64>,
    pub delta: f64,
    pub eps_ladder: Vec<f64>,
    pub n_max: usize,
    pub alpha_grid: usize,
    pub x0: Option<Point>,
}

pub fn resolve(spec: &ProblemSpec) -> Result<Resolved> {
    let space = Space::new(spec.dim, spec.norm).map_err(|e| anyhow!("{e}"))?;
    let build = |cs: &ConeSpec| -> Result<Cone> {
        Ok(match cs {
            ConeSpec::Polyhedral(gens) => {
                Cone::polyhedral(&space, gens.iter().map(|g| Point::new(g.clone())).collect())
                    .map_err(|e| anyhow!("{e}"))?
            }
            ConeSpec::BishopPhelps(f, alpha) => {
                Cone::bishop_phelps(&space, Functional::new(f.clone()), *alpha)
                    .map_err(|e| anyhow!("{e}"))?
            }
            ConeSpec::Sublevel(f, alpha) => {
                Cone::sublevel(&space, Functional::new(f.clone()), *alpha)
                    .map_err(|e| anyhow!("{e}"))?
            }
        })
    };
    let cone = spec.cone.as_ref().map(&build).transpose()?;
    let cone2 = spec.cone2.as_ref().map(&build).transpose()?;

    let h = spec.params.h.unwrap_or(0.01);
    let cloud = match &spec.set {
        None => None,
        Some(SetSpec::Fixture(name)) => {
            let fx = fixtures::fixture(name, h, spec.norm).map_err(|e| anyhow!("{e}"))?;
            fx.cloud
        }
        Some(SetSpec::Points(points)) => {
            if points.is_empty() {
                bail!("set.points is empty");
            }
            Some(PointCloud::new(
                points.iter().map(|p| Point::new(p.clone())).collect(),
                "inline",
            ))
        }
        Some(SetSpec::File(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading point file {path}"))?;
            let mut pts = Vec::new();
            for (no, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let coords: Vec<f64> = line
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .with_context(|| format!("{path}:{}: bad point row", no + 1))?;
                pts.push(Point::new(coords));
            }
            if pts.is_empty() {
                bail!("point file {path} holds no points");
            }
            Some(PointCloud::new(pts, path.as_str()))
        }
    };
    if let Some(cloud) = &cloud {
        for p in &cloud.points {
            if p.dim() != spec.dim {
                bail!(
                    "point {:?} has dimension {}, spec says {}",
                    p.coords,
                    p.dim(),
                    spec.dim
                );
            }
        }
    }

    let two_d = spec.dim == 2;
    Ok(Resolved {
        space,
        cone,
        cone2,
        cloud,
        mesh: spec.params.mesh.unwrap_or(if two_d { 1e-3 } else { 5e-2 }),
        tol: spec.params.tol.unwrap_or(1e-9),
        seed: spec.params.seed.unwrap_or(42),
        eps: spec.params.eps.clone().unwrap_or_else(|| vec![0.05]),
        delta: spec.params.delta.unwrap_or(0.5_f64.sqrt()),
        eps_ladder: spec
            .params
            .eps_ladder
            .clone()
            .unwrap_or_else(|| (0..=10).map(|k| 0.2 * 0.5_f64.powi(k)).collect()),
        n_max: spec.params.n_max.unwrap_or(200),
        alpha_grid: spec.params.alpha_grid.unwrap_or(512),
        x0: spec.params.x0.as_ref().map(|v| Point::new(v.clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        let spec = fixture_spec("example-3-ssp", 0.01, Norm::L2).unwrap();
        let text = serialize(&spec);
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed, spec);
        assert_eq!(serialize(&parsed), text);
    }

    #[test]
    fn unknown_field_rejected_with_line() {
        let err = parse("dim = 2\nnorm = l2\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn vector_parsing() {
        assert_eq!(parse_vec("(1, -2.5)").unwrap(), vec![1.0, -2.5]);
        assert_eq!(
            parse_vec_list("[(1, 2), (3, 4)]").unwrap(),
            vec![vec![1.0, 2.0], vec![3.0, 4.0]]
        );
        assert!(parse_vec("1, 2").is_err());
    }
}
