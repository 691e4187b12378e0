//! Recipe-driven experiments.
//!
//! A recipe names one of the built-in experiments, the graph (or point-cloud)
//! family it runs on, a parameter grid and the seeds. Everything is validated
//! before any work starts, results are a function of the recipe alone, and
//! the CSV, JSON sidecar and optional SVG are written together at the end.

mod recipes;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::generators;
use crate::graph::PlanarGraph;
use crate::pack::{Point, PointCloud};
use crate::rng;

/// Library version recorded in every sidecar.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecipeName {
    /// Cumulative annulus resistance of a packed disk against `log r`.
    LogResistance,
    /// `phi(T) log T` across horizons.
    PhiScaling,
    /// Energy of star-tree lifted flows against the original.
    StartreeEnergy,
    /// Supported-point counts against `|C| δ^-2 log(1/δ) / s`.
    SupportedCount,
    /// Bounded resistance and stretched-exponential degree tail of the sharpness family.
    Sharpness,
}

/// Instance family. Random families draw a fresh instance per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    Grid { n: usize },
    Cycle { n: usize },
    TriangularDisk { radius: usize },
    FlipTriangulation {
        n: usize,
        steps: Option<u64>,
        degree_cap: Option<usize>,
    },
    RandomPlanar { n: usize, keep: f64 },
    UniformCloud { size: usize },
    ClusteredCloud { size: usize, clusters: usize },
    Sharpness { alpha: f64 },
}

/// Parameter axes; each recipe reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<usize>>,
    /// Truncation depths for star-tree flows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub json: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecipe {
    pub name: RecipeName,
    pub family: Family,
    pub grid: ParamGrid,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Monte Carlo trials per point (`phi-scaling`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Allowed ratio `max / min` of `phi(T) log T` (`phi-scaling`, default 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// `phi-scaling`: the escape column looks at radius `k = ceil(T^c)` (default `c = 1/3`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_exponent: Option<f64>,
    /// Required coefficient of determination of the headline fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_r2: Option<f64>,
    /// `supported-count`: fit the constant on this δ only and check the rest against it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_delta: Option<f64>,
    /// `sharpness`: smallest degree used in the tail fit (default 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_k_min: Option<usize>,
    pub output: OutputPaths,
}

/// Built instance of a family.
pub(crate) enum Instance {
    Graph(PlanarGraph),
    Cloud(PointCloud),
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Grid { n } => format!("grid({n})"),
            Family::Cycle { n } => format!("cycle({n})"),
            Family::TriangularDisk { radius } => format!("triangular-disk({radius})"),
            Family::FlipTriangulation { n, .. } => format!("flip-triangulation({n})"),
            Family::RandomPlanar { n, keep } => format!("random-planar({n},{keep})"),
            Family::UniformCloud { size } => format!("uniform-cloud({size})"),
            Family::ClusteredCloud { size, clusters } => format!("clustered-cloud({size},{clusters})"),
            Family::Sharpness { alpha } => format!("sharpness({alpha})"),
        }
    }

    /// Whether instances depend on the seed.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Family::FlipTriangulation { .. }
                | Family::RandomPlanar { .. }
                | Family::UniformCloud { .. }
                | Family::ClusteredCloud { .. }
        )
    }

    fn is_graph(&self) -> bool {
        !matches!(
            self,
            Family::UniformCloud { .. } | Family::ClusteredCloud { .. } | Family::Sharpness { .. }
        )
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: usize, min: usize| {
            if v < min {
                Err(param(name, format!("must be at least {min}")))
            } else {
                Ok(())
            }
        };
        match *self {
            Family::Grid { n } => positive("family.n", n, 2),
            Family::Cycle { n } => positive("family.n", n, 3),
            Family::TriangularDisk { radius } => positive("family.radius", radius, 1),
            Family::FlipTriangulation { n, degree_cap, .. } => {
                positive("family.n", n, 4)?;
                degree_cap.map_or(Ok(()), |cap| positive("family.degree_cap", cap, 6))
            }
            Family::RandomPlanar { n, keep } => {
                positive("family.n", n, 2)?;
                if !(0.0..=1.0).contains(&keep) {
                    return Err(param("family.keep", "must lie in [0, 1]"));
                }
                Ok(())
            }
            Family::UniformCloud { size } => positive("family.size", size, 2),
            Family::ClusteredCloud { size, clusters } => {
                positive("family.size", size, 2)?;
                positive("family.clusters", clusters, 1)
            }
            Family::Sharpness { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(param("family.alpha", "must lie in (0, 1)"));
                }
                Ok(())
            }
        }
    }

    pub(crate) fn build(&self, seed: u64) -> Result<Instance> {
        Ok(match *self {
            Family::Grid { n } => Instance::Graph(generators::grid(n)?),
            Family::Cycle { n } => Instance::Graph(generators::cycle(n)?),
            Family::TriangularDisk { radius } => Instance::Graph(generators::triangular_disk(radius)?),
            Family::FlipTriangulation { n, steps, degree_cap } => Instance::Graph(
                generators::flip_mcmc_triangulation_capped(n, steps.unwrap_or(20 * n as u64), seed, degree_cap)?,
            ),
            Family::RandomPlanar { n, keep } => Instance::Graph(generators::random_planar(n, keep, seed)?),
            Family::UniformCloud { size } => {
                let mut r = rng::stream(seed, 0);
                let pts: Vec<Point> = (0..size).map(|_| [r.gen(), r.gen()]).collect();
                Instance::Cloud(PointCloud::new(pts)?)
            }
            Family::ClusteredCloud { size, clusters } => {
                let mut r = rng::stream(seed, 0);
                let centers: Vec<Point> = (0..clusters).map(|_| [r.gen(), r.gen()]).collect();
                let pts: Vec<Point> = (0..size)
                    .map(|_| {
                        let c = centers[r.gen_range(0..clusters)];
                        // Uniform point in a disk of radius 0.05 around the cluster center.
                        let (rad, ang) = (0.05 * r.gen::<f64>().sqrt(), std::f64::consts::TAU * r.gen::<f64>());
                        [c[0] + rad * ang.cos(), c[1] + rad * ang.sin()]
                    })
                    .collect();
                Instance::Cloud(PointCloud::new(pts)?)
            }
            Family::Sharpness { .. } => {
                return Err(Error::Precondition("sharpness instances are built per height".into()))
            }
        })
    }
}

fn nonempty<'a, T>(axis: &'a Option<Vec<T>>, name: &'static str) -> Result<&'a [T]> {
    match axis {
        Some(v) if !v.is_empty() => Ok(v),
        Some(_) => Err(param(name, "parameter grid is empty")),
        None => Err(param(name, "missing from the parameter grid")),
    }
}

impl ExperimentRecipe {
    pub fn from_json(text: &str) -> Result<Self> {
        let recipe: Self = serde_json::from_str(text).map_err(|e| Error::Parse(format!("recipe: {e}")))?;
        recipe.validate()?;
        Ok(recipe)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks every field the named experiment reads; nothing runs before this passes.
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(param("seeds", "need at least one seed"));
        }
        self.family.validate()?;
        if let Some(r2) = self.min_r2 {
            if !(0.0..=1.0).contains(&r2) {
                return Err(param("min_r2", "must lie in [0, 1]"));
            }
        }
        let wrong_family = || param("family", format!("{} does not apply to {:?}", self.family.label(), self.name));
        match self.name {
            RecipeName::LogResistance => {
                if !matches!(self.family, Family::TriangularDisk { .. }) {
                    return Err(wrong_family());
                }
                let radii = nonempty(&self.grid.radii, "grid.radii")?;
                if radii.len() < 3 {
                    return Err(param("grid.radii", "need at least three radii for a fit"));
                }
                if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(param("grid.radii", "must be positive and strictly increasing"));
                }
            }
            RecipeName::PhiScaling => {
                if !self.family.is_graph() {
                    return Err(wrong_family());
                }
                let t = nonempty(&self.grid.horizons, "grid.T")?;
                if t.iter().any(|&t| t < 2) {
                    return Err(param("grid.T", "horizons must be at least 2"));
                }
                match self.trials {
                    None => return Err(param("trials", "required")),
                    Some(0) => return Err(param("trials", "must be positive")),
                    _ => {}
                }
                if let Some(c) = self.coupling_exponent {
                    if !(c > 0.0 && c < 1.0) {
                        return Err(param("coupling_exponent", "must lie in (0, 1)"));
                    }
                }
                if let Some(w) = self.window {
                    if !(w >= 1.0) {
                        return Err(param("window", "must be at least 1"));
                    }
                }
            }
            RecipeName::StartreeEnergy => {
                if !self.family.is_graph() {
                    return Err(wrong_family());
                }
                let d = nonempty(&self.grid.depth, "grid.depth")?;
                if d.contains(&0) {
                    return Err(param("grid.depth", "depths must be positive"));
                }
            }
            RecipeName::SupportedCount => {
                if !matches!(self.family, Family::UniformCloud { .. } | Family::ClusteredCloud { .. }) {
                    return Err(wrong_family());
                }
                let delta = nonempty(&self.grid.delta, "grid.delta")?;
                if delta.iter().any(|&d| !(d > 0.0 && d < 0.5)) {
                    return Err(param("grid.delta", "values must lie in (0, 1/2)"));
                }
                let s = nonempty(&self.grid.s, "grid.s")?;
                if s.iter().any(|&s| s < 2) {
                    return Err(param("grid.s", "values must be at least 2"));
                }
                if let Some(fd) = self.fit_delta {
                    if !delta.contains(&fd) {
                        return Err(param("fit_delta", "must be one of grid.delta"));
                    }
                }
            }
            RecipeName::Sharpness => {
                if !matches!(self.family, Family::Sharpness { .. }) {
                    return Err(wrong_family());
                }
                let h = nonempty(&self.grid.h, "grid.h")?;
                if h.iter().any(|&h| !(1..=40).contains(&h)) {
                    return Err(param("grid.h", "heights must lie in 1..=40"));
                }
            }
        }
        Ok(())
    }
}

/// Result of one recipe run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub recipe: ExperimentRecipe,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Fits and aggregate numbers for the sidecar.
    pub summary: serde_json::Value,
    /// Named invariant checks; the run passes only if all hold.
    pub audits: BTreeMap<String, bool>,
    pub svg: Option<String>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    name: RecipeName,
    version: &'static str,
    recipe: &'a ExperimentRecipe,
    rows: usize,
    summary: &'a serde_json::Value,
    audits: &'a BTreeMap<String, bool>,
    pass: bool,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.audits.values().all(|&ok| ok)
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn sidecar_json(&self) -> String {
        let doc = Sidecar {
            name: self.recipe.name,
            version: VERSION,
            recipe: &self.recipe,
            rows: self.rows.len(),
            summary: &self.summary,
            audits: &self.audits,
            pass: self.pass(),
        };
        serde_json::to_string_pretty(&doc).expect("sidecar serializes") + "\n"
    }

    /// Writes every output to a temporary sibling first, then renames them all into place.
    /// Missing parent directories are created.
    pub fn write(&self) -> Result<()> {
        let out = &self.recipe.output;
        let mut files = vec![(out.csv.clone(), self.csv()), (out.json.clone(), self.sidecar_json())];
        if let (Some(path), Some(svg)) = (&out.svg, &self.svg) {
            files.push((path.clone(), svg.clone()));
        }
        let io = |p: &Path, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
        let mut staged: Vec<(PathBuf, &PathBuf)> = Vec::new();
        let discard = |staged: &[(PathBuf, &PathBuf)]| {
            for (tmp, _) in staged {
                let _ = fs::remove_file(tmp);
            }
        };
        for (path, body) in &files {
            let mut tmp = path.clone().into_os_string();
            tmp.push(format!(".tmp{}", std::process::id()));
            let tmp = PathBuf::from(tmp);
            let written = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
                Some(dir) => fs::create_dir_all(dir).map_err(|e| io(dir, e)),
                None => Ok(()),
            }
            .and_then(|_| fs::write(&tmp, body).map_err(|e| io(&tmp, e)));
            if let Err(e) = written {
                discard(&staged);
                return Err(e);
            }
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            fs::rename(&tmp, path).map_err(|e| io(path, e))?;
        }
        Ok(())
    }
}

/// Validates and runs a recipe without touching the filesystem.
pub fn execute(recipe: &ExperimentRecipe) -> Result<Report> {
    recipe.validate()?;
    match recipe.name {
        RecipeName::LogResistance => recipes::log_resistance(recipe),
        RecipeName::PhiScaling => recipes::phi_scaling(recipe),
        RecipeName::StartreeEnergy => recipes::startree_energy(recipe),
        RecipeName::SupportedCount => recipes::supported_count(recipe),
        RecipeName::Sharpness => recipes::sharpness(recipe),
    }
}

/// Runs a recipe and writes its CSV, JSON sidecar and optional SVG.
pub fn run_experiment(recipe: &ExperimentRecipe) -> Result<Report> {
    let report = execute(recipe)?;
    report.write()?;
    Ok(report)
}
