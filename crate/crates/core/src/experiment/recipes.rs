use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use super::{ExperimentRecipe, Family, Instance, Report};
use crate::electric::{effective_resistance, unit_current_flow, Network};
use crate::error::{Error, Result};
use crate::generators::{
    sharpness_degree_census, sharpness_multiplicity, sharpness_spine, sharpness_vertex_count, triangular_disk_boundary,
};
use crate::graph::{ball_of, PlanarGraph};
use crate::limits::{sample_root, sample_roots, DegreeTail, RootMode, TailScale};
use crate::pack::{pack_triangulation, supported_bound_shape, support_depths, to_svg, Region, SvgOptions};
use crate::startree::{lift_flow, star_tree_transform};
use crate::stats::linear_fit;
use crate::walks::{avoidance_exact_curve, avoidance_probability, EXACT_HORIZON_CAP, EXACT_VERTEX_CAP};

/// Largest packing drawn with its tangency edges.
const SVG_EDGE_CAP: usize = 5_000;

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// Seeds that yield distinct instances: all of them for random families, one otherwise.
fn instance_seeds(recipe: &ExperimentRecipe) -> &[u64] {
    if recipe.family.is_random() {
        &recipe.seeds
    } else {
        &recipe.seeds[..1]
    }
}

fn graph_of(recipe: &ExperimentRecipe, seed: u64) -> Result<PlanarGraph> {
    match recipe.family.build(seed)? {
        Instance::Graph(g) => Ok(g),
        Instance::Cloud(_) => Err(Error::Precondition("expected a graph family".into())),
    }
}

fn report(
    recipe: &ExperimentRecipe,
    cols: &[&str],
    rows: Vec<Vec<String>>,
    summary: serde_json::Value,
    audits: BTreeMap<String, bool>,
    svg: Option<String>,
) -> Report {
    Report {
        recipe: recipe.clone(),
        header: header(cols),
        rows,
        summary,
        audits,
        svg,
    }
}

pub(super) fn log_resistance(recipe: &ExperimentRecipe) -> Result<Report> {
    let Family::TriangularDisk { radius } = recipe.family else {
        unreachable!("validated")
    };
    let radii = recipe.grid.radii.as_deref().expect("validated");
    let g = graph_of(recipe, recipe.seeds[0])?;
    let boundary: Vec<(usize, f64)> = triangular_disk_boundary(radius).into_iter().map(|v| (v, 1.0)).collect();
    let packing = pack_triangulation(&g, &boundary)?.normalize_at_root(0)?;
    let net = Network::unit(g);
    let center = [0.0, 0.0];
    let inside = |r: f64| packing.vertices_in_region(&Region::Disk { center, radius: r });
    let outside = |r: f64| packing.vertices_in_region(&Region::ComplementDisk { center, radius: r });
    let core = inside(radii[0]);
    let values: Vec<(f64, f64)> = radii[1..]
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let cumulative = effective_resistance(&net, &core, &outside(r))?;
            let annulus = effective_resistance(&net, &inside(radii[i]), &outside(r))?;
            Ok((cumulative, annulus))
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = radii[1..].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.0).collect();
    let fit = linear_fit(&xs, &ys)?;
    let rows = radii[1..]
        .iter()
        .zip(&values)
        .map(|(r, (c, a))| {
            vec![
                recipe.family.label(),
                recipe.seeds[0].to_string(),
                r.to_string(),
                r.ln().to_string(),
                c.to_string(),
                a.to_string(),
            ]
        })
        .collect();
    let min_r2 = recipe.min_r2.unwrap_or(0.99);
    let audits = BTreeMap::from([
        ("angle-sums".to_string(), packing.angle_error <= 1e-8),
        ("tangency".to_string(), packing.tangency_error() <= 1e-6),
        ("positive-slope".to_string(), fit.slope > 0.0),
        ("r2".to_string(), fit.r2 >= min_r2),
    ]);
    let svg = recipe.output.svg.as_ref().map(|_| {
        to_svg(
            &packing,
            &SvgOptions {
                root: Some(0),
                edges: packing.radii.len() <= SVG_EDGE_CAP,
            },
        )
    });
    Ok(report(
        recipe,
        &["instance", "seed", "r", "log_r", "reff_cumulative", "reff_annulus"],
        rows,
        json!({
            "fit": fit,
            "min_r2": min_r2,
            "core_radius": radii[0],
            "packing": {
                "iterations": packing.iterations,
                "angle_error": packing.angle_error,
                "tangency_error": packing.tangency_error(),
            },
        }),
        audits,
        svg,
    ))
}

/// Roots averaged over in the escape column of `phi-scaling`.
const ESCAPE_ROOTS: usize = 32;

/// Mean over sampled uniform roots of `P_ρ(reach distance k + 1 before returning)`;
/// `None` when some sampled ball already covers its component.
fn mean_escape(g: &PlanarGraph, k: usize, seed: u64) -> Result<Option<f64>> {
    let roots = sample_roots(g, RootMode::Uniform, ESCAPE_ROOTS, seed)?;
    let escapes: Vec<Option<f64>> = roots
        .par_iter()
        .map(|&root| {
            let ball = ball_of(g, root, k + 1);
            let dist = ball.graph.bfs_distances(0);
            let far: Vec<usize> = (0..dist.len()).filter(|&v| dist[v] == k + 1).collect();
            if far.is_empty() {
                return Ok(None);
            }
            let reff = effective_resistance(&Network::unit(ball.graph.clone()), &[0], &far)?;
            Ok(Some(1.0 / (g.degree(root) as f64 * reff)))
        })
        .collect::<Result<_>>()?;
    Ok(escapes
        .into_iter()
        .sum::<Option<f64>>()
        .map(|total| total / ESCAPE_ROOTS as f64))
}

pub(super) fn phi_scaling(recipe: &ExperimentRecipe) -> Result<Report> {
    let horizons = recipe.grid.horizons.as_deref().expect("validated");
    let trials = recipe.trials.expect("validated");
    let window = recipe.window.unwrap_or(3.0);
    let exponent = recipe.coupling_exponent.unwrap_or(1.0 / 3.0);
    let t_max = *horizons.iter().max().expect("nonempty");
    let mut rows = Vec::new();
    let mut scaled = Vec::new();
    let mut exact_ok = true;
    for &seed in &recipe.seeds {
        let g = graph_of(recipe, seed)?;
        let exact = (g.vertex_count() <= EXACT_VERTEX_CAP && t_max <= EXACT_HORIZON_CAP)
            .then(|| avoidance_exact_curve(&Network::unit(g.clone()), t_max))
            .transpose()?;
        for &t in horizons {
            let est = avoidance_probability(&g, t, trials, seed)?;
            let log_t = (t as f64).ln();
            scaled.push(est.phi * log_t);
            let exact_t = exact.as_ref().map(|c| c[t - 1]);
            let k = (t as f64).powf(exponent).ceil() as usize;
            let escape = mean_escape(&g, k, seed)?;
            if let Some(p) = exact_t {
                let se = (p * (1.0 - p) / trials as f64).sqrt();
                exact_ok &= (est.phi - p).abs() <= 3.0 * se + 1e-12;
            }
            rows.push(vec![
                recipe.family.label(),
                seed.to_string(),
                t.to_string(),
                trials.to_string(),
                est.phi.to_string(),
                est.ci.0.to_string(),
                est.ci.1.to_string(),
                (est.phi * log_t).to_string(),
                exact_t.map_or(String::new(), |p| p.to_string()),
                k.to_string(),
                escape.map_or(String::new(), |p| p.to_string()),
            ]);
        }
    }
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().cloned().fold(0.0, f64::max);
    let mut audits = BTreeMap::from([("window".to_string(), lo > 0.0 && hi <= window * lo)]);
    let exact_checked = rows.iter().any(|r| !r[8].is_empty());
    if exact_checked {
        audits.insert("exact-within-3se".to_string(), exact_ok);
    }
    Ok(report(
        recipe,
        &["instance", "seed", "T", "trials", "phi", "ci_low", "ci_high", "phi_log_t", "phi_exact", "k", "escape_k"],
        rows,
        json!({
            "phi_log_t_min": lo,
            "phi_log_t_max": hi,
            "ratio": hi / lo,
            "window": window,
            "coupling_exponent": exponent,
            "escape_roots": ESCAPE_ROOTS,
        }),
        audits,
        None,
    ))
}

pub(super) fn startree_energy(recipe: &ExperimentRecipe) -> Result<Report> {
    let depths = recipe.grid.depth.as_deref().expect("validated");
    let mut points = Vec::new();
    for &seed in instance_seeds(recipe) {
        let g = graph_of(recipe, seed)?;
        let root = sample_root(&g, RootMode::Uniform, seed)?;
        for &depth in depths {
            points.push((seed, root, depth, g.clone()));
        }
    }
    let results: Vec<(Vec<String>, [bool; 4], f64)> = points
        .par_iter()
        .map(|(seed, root, depth, g)| {
            // Unit current flow from the root to the farthest sphere of its ball.
            let ball = ball_of(g, *root, *depth);
            let bg = &ball.graph;
            let dist = bg.bfs_distances(0);
            let reach = dist.iter().copied().max().unwrap_or(0);
            if reach == 0 {
                return Err(Error::Precondition(format!("root {root} has no neighbors")));
            }
            let sinks: Vec<usize> = (0..bg.vertex_count()).filter(|&v| dist[v] == reach).collect();
            let net = Network::unit(bg.clone());
            let theta = unit_current_flow(&net, &[0], &sinks)?;
            let st = star_tree_transform(bg);
            let lifted = lift_flow(bg, &theta, &st)?;
            let scale = lifted.energy.max(1.0);
            let doubled = (lifted.energy_subdivided - 2.0 * lifted.energy).abs() <= 1e-12 * scale;
            let bounded = lifted.energy_lifted <= 4.0 * lifted.energy * (1.0 + 1e-12);
            let max_deg = st.graph().max_degree();
            let structure = st.audit(bg).is_ok() && max_deg <= 3;
            let ratio = lifted.energy_lifted / lifted.energy;
            let row = vec![
                recipe.family.label(),
                seed.to_string(),
                depth.to_string(),
                reach.to_string(),
                bg.vertex_count().to_string(),
                bg.edge_count().to_string(),
                lifted.energy.to_string(),
                lifted.energy_subdivided.to_string(),
                lifted.energy_lifted.to_string(),
                ratio.to_string(),
                max_deg.to_string(),
                lifted.exact_conservation.to_string(),
            ];
            Ok((row, [lifted.exact_conservation, doubled, bounded, structure], ratio))
        })
        .collect::<Result<_>>()?;
    let all = |i: usize| results.iter().all(|r| r.1[i]);
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let audits = BTreeMap::from([
        ("exact-conservation".to_string(), all(0)),
        ("subdivided-energy-doubles".to_string(), all(1)),
        ("lifted-energy-at-most-4x".to_string(), all(2)),
        ("max-degree-3".to_string(), all(3)),
    ]);
    Ok(report(
        recipe,
        &[
            "instance",
            "seed",
            "depth",
            "reach",
            "vertices",
            "edges",
            "energy",
            "energy_subdivided",
            "energy_lifted",
            "lifted_ratio",
            "max_degree_dagger",
            "exact_conservation",
        ],
        results.into_iter().map(|r| r.0).collect(),
        json!({ "max_lifted_ratio": worst }),
        audits,
        None,
    ))
}

pub(super) fn supported_count(recipe: &ExperimentRecipe) -> Result<Report> {
    let deltas = recipe.grid.delta.as_deref().expect("validated");
    let ss = recipe.grid.s.as_deref().expect("validated");
    // (seed, size, delta, s, count, shape)
    let mut points = Vec::new();
    for &seed in instance_seeds(recipe) {
        let Instance::Cloud(cloud) = recipe.family.build(seed)? else {
            unreachable!("validated")
        };
        for &delta in deltas {
            let depths = support_depths(&cloud, delta)?;
            for &s in ss {
                let count = depths.iter().filter(|&&d| d >= s).count();
                points.push((seed, cloud.len(), delta, s, count, supported_bound_shape(cloud.len(), delta, s)));
            }
        }
    }
    let in_fit = |delta: f64| recipe.fit_delta.is_none_or(|fd| fd == delta);
    let a = points
        .iter()
        .filter(|p| in_fit(p.2))
        .map(|p| p.4 as f64 / p.5)
        .fold(0.0, f64::max);
    let holds = points.iter().all(|p| p.4 as f64 <= a * p.5 * (1.0 + 1e-12));
    let rows = points
        .iter()
        .map(|p| {
            vec![
                recipe.family.label(),
                p.0.to_string(),
                p.1.to_string(),
                p.2.to_string(),
                p.3.to_string(),
                p.4.to_string(),
                p.5.to_string(),
                (p.4 as f64 / p.5).to_string(),
            ]
        })
        .collect();
    Ok(report(
        recipe,
        &["instance", "seed", "size", "delta", "s", "count", "bound_shape", "ratio"],
        rows,
        json!({ "fitted_constant": a, "fit_delta": recipe.fit_delta }),
        BTreeMap::from([("bound-with-fitted-constant".to_string(), holds)]),
        None,
    ))
}

/// `zeta(s)` for `s > 1` by a truncated sum with an Euler–Maclaurin tail.
fn zeta(s: f64) -> f64 {
    const N: usize = 1000;
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    let n = N as f64;
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
}

pub(super) fn sharpness(recipe: &ExperimentRecipe) -> Result<Report> {
    let Family::Sharpness { alpha } = recipe.family else {
        unreachable!("validated")
    };
    let mut heights = recipe.grid.h.clone().expect("validated");
    heights.sort_unstable();
    heights.dedup();
    let bound = 2.0 * zeta(1.0 / alpha);
    let results: Vec<(usize, f64, f64)> = heights
        .par_iter()
        .map(|&h| {
            let (net, leaf, top) = sharpness_spine(h, alpha)?;
            let reff = effective_resistance(&net, &[leaf], &[top])?;
            let series: f64 = (1..=h).map(|k| 2.0 / sharpness_multiplicity(k, alpha) as f64).sum();
            Ok((h, reff, series))
        })
        .collect::<Result<_>>()?;
    let agree = results.iter().all(|r| (r.1 - r.2).abs() <= 1e-9);
    let increasing = results.windows(2).all(|w| w[1].1 > w[0].1);
    let bounded = results.iter().all(|r| r.1 < bound);

    let h_max = *heights.last().expect("nonempty");
    let census = sharpness_degree_census(h_max, alpha)?;
    let k_min = recipe.tail_k_min.unwrap_or(3);
    let scale = TailScale::Power(alpha);
    let uniform = DegreeTail::from_degree_census(RootMode::Uniform, &census)?;
    let stationary = DegreeTail::from_degree_census(RootMode::Stationary, &census)?;
    let fit = uniform.fit(scale, k_min)?;
    let fit_stationary = stationary.fit(scale, k_min)?;
    let min_r2 = recipe.min_r2.unwrap_or(0.98);

    let rows = results
        .iter()
        .map(|&(h, reff, series)| {
            vec![
                recipe.family.label(),
                h.to_string(),
                sharpness_vertex_count(h, alpha).to_string(),
                reff.to_string(),
                series.to_string(),
                (reff - series).abs().to_string(),
            ]
        })
        .collect();
    let tail: Vec<_> = uniform
        .attained
        .iter()
        .map(|&k| json!({ "k": k, "uniform": uniform.exceedance_at(k), "stationary": stationary.exceedance_at(k) }))
        .collect();
    let audits = BTreeMap::from([
        ("reff-matches-series".to_string(), agree),
        ("reff-increasing".to_string(), increasing),
        ("reff-bounded".to_string(), bounded),
        ("tail-r2".to_string(), fit.r2 >= min_r2),
    ]);
    Ok(report(
        recipe,
        &["instance", "h", "vertices", "reff", "series", "abs_error"],
        rows,
        json!({
            "bound": bound,
            "tail_height": h_max,
            "tail_k_min": k_min,
            "tail_fit_uniform": fit,
            "tail_fit_stationary": fit_stationary,
            "min_r2": min_r2,
            "tail": tail,
        }),
        audits,
        None,
    ))
}
