//! Empirical local limits: random rootings, ball-code histograms, degree tails.
//!
//! A histogram is either a *census* (every vertex weighted by the root law,
//! so the result is the exact law of `B(ρ, r)`) or a Monte Carlo sample of
//! roots. Both are stored as code → probability maps, and TV distances are
//! always taken at one fixed radius.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::graph::{ball_of, canonical_code, CanonicalCode, PlanarGraph};
use crate::rng;
use crate::stats::{linear_fit, LinearFit};

/// How the root of a finite graph is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootMode {
    Uniform,
    /// Probability proportional to degree.
    Stationary,
}

impl fmt::Display for RootMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootMode::Uniform => "uniform",
            RootMode::Stationary => "stationary",
        })
    }
}

impl FromStr for RootMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(RootMode::Uniform),
            "stationary" => Ok(RootMode::Stationary),
            other => Err(param("mode", format!("unknown root mode `{other}`"))),
        }
    }
}

/// Probability of each vertex under `mode`.
pub fn root_law(g: &PlanarGraph, mode: RootMode) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidGraph("graph is empty".into()));
    }
    match mode {
        RootMode::Uniform => Ok(vec![1.0 / n as f64; n]),
        RootMode::Stationary => {
            if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
                return Err(Error::Disconnected(format!(
                    "vertex {v} is isolated; the stationary root is undefined"
                )));
            }
            let total = 2.0 * g.edge_count() as f64;
            Ok((0..n).map(|v| g.degree(v) as f64 / total).collect())
        }
    }
}

struct RootSampler {
    n: usize,
    /// Cumulative degrees for stationary sampling.
    cumulative: Option<Vec<usize>>,
}

impl RootSampler {
    fn new(g: &PlanarGraph, mode: RootMode) -> Result<Self> {
        root_law(g, mode)?; // validates
        let cumulative = (mode == RootMode::Stationary).then(|| {
            (0..g.vertex_count())
                .scan(0, |acc, v| {
                    *acc += g.degree(v);
                    Some(*acc)
                })
                .collect()
        });
        Ok(Self {
            n: g.vertex_count(),
            cumulative,
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        match &self.cumulative {
            None => rng.gen_range(0..self.n),
            // Integer weights: a uniform dart picks its tail with probability deg(v) / 2m.
            Some(cum) => {
                let x = rng.gen_range(0..cum[self.n - 1]);
                cum.partition_point(|&c| c <= x)
            }
        }
    }
}

/// One root drawn exactly from `mode`.
pub fn sample_root(g: &PlanarGraph, mode: RootMode, seed: u64) -> Result<usize> {
    let sampler = RootSampler::new(g, mode)?;
    Ok(sampler.sample(&mut rng::stream(seed, 0)))
}

/// `count` independent roots; root `i` uses stream `i` under `seed`.
pub fn sample_roots(g: &PlanarGraph, mode: RootMode, count: usize, seed: u64) -> Result<Vec<usize>> {
    let sampler = RootSampler::new(g, mode)?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| sampler.sample(&mut rng::stream(seed, i)))
        .collect())
}

/// Law (exact or sampled) of the canonical code of `B(ρ, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallHistogram {
    pub radius: usize,
    pub mode: RootMode,
    /// Number of sampled roots, or the vertex count for a census.
    pub samples: u64,
    pub census: bool,
    pub probabilities: BTreeMap<CanonicalCode, f64>,
}

#[derive(serde::Serialize)]
struct HistogramJson {
    radius: usize,
    mode: RootMode,
    samples: u64,
    census: bool,
    distinct: usize,
    probabilities: BTreeMap<String, f64>,
}

impl BallHistogram {
    pub fn probability(&self, code: &CanonicalCode) -> f64 {
        self.probabilities.get(code).copied().unwrap_or(0.0)
    }

    /// Binomial standard error of the probability of `code` under this histogram's sample size.
    pub fn standard_error(&self, code: &CanonicalCode) -> f64 {
        let p = self.probability(code);
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    pub fn to_json(&self) -> String {
        let doc = HistogramJson {
            radius: self.radius,
            mode: self.mode,
            samples: self.samples,
            census: self.census,
            distinct: self.probabilities.len(),
            probabilities: self.probabilities.iter().map(|(c, p)| (c.to_hex(), *p)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("histogram serializes")
    }
}

fn merge(mut a: BTreeMap<CanonicalCode, f64>, b: BTreeMap<CanonicalCode, f64>) -> BTreeMap<CanonicalCode, f64> {
    for (code, w) in b {
        *a.entry(code).or_insert(0.0) += w;
    }
    a
}

fn code_at(g: &PlanarGraph, v: usize, r: usize) -> Result<CanonicalCode> {
    canonical_code(&ball_of(g, v, r))
}

fn weighted_codes(
    g: &PlanarGraph,
    r: usize,
    items: impl IndexedParallelIterator<Item = (usize, f64)>,
) -> Result<BTreeMap<CanonicalCode, f64>> {
    items
        .map(|(v, w)| code_at(g, v, r).map(|c| BTreeMap::from([(c, w)])))
        .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))
}

/// Ball histogram from `samples` random roots, or the exact law when `samples` is `None`.
pub fn ball_histogram(
    g: &PlanarGraph,
    r: usize,
    samples: Option<u64>,
    mode: RootMode,
    seed: u64,
) -> Result<BallHistogram> {
    let probabilities = match samples {
        None => {
            let law = root_law(g, mode)?;
            weighted_codes(g, r, law.into_par_iter().enumerate())?
        }
        Some(0) => return Err(param("samples", "need at least one sample")),
        Some(count) => {
            let roots = sample_roots(g, mode, count as usize, seed)?;
            let w = 1.0 / count as f64;
            // Codes are computed once per distinct root.
            let mut multiplicity: BTreeMap<usize, u64> = BTreeMap::new();
            for v in roots {
                *multiplicity.entry(v).or_insert(0) += 1;
            }
            let items: Vec<(usize, f64)> = multiplicity.into_iter().map(|(v, k)| (v, k as f64 * w)).collect();
            weighted_codes(g, r, items.into_par_iter())?
        }
    };
    Ok(BallHistogram {
        radius: r,
        mode,
        samples: samples.unwrap_or(g.vertex_count() as u64),
        census: samples.is_none(),
        probabilities,
    })
}

/// Exact ball law: every vertex weighted by the root law.
pub fn ball_census(g: &PlanarGraph, r: usize, mode: RootMode) -> Result<BallHistogram> {
    ball_histogram(g, r, None, mode, 0)
}

/// Total variation distance between two ball laws at the same radius.
pub fn tv_distance(a: &BallHistogram, b: &BallHistogram) -> Result<f64> {
    if a.radius != b.radius {
        return Err(Error::Precondition(format!(
            "histograms have radii {} and {}",
            a.radius, b.radius
        )));
    }
    let mut sum = 0.0;
    for (code, p) in &a.probabilities {
        sum += (p - b.probability(code)).abs();
    }
    for (code, q) in &b.probabilities {
        if !a.probabilities.contains_key(code) {
            sum += q;
        }
    }
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

/// Root statistic whose tail is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailStatistic {
    /// `deg(ρ)`.
    Degree,
    /// `max_{u ~ ρ} deg(u)`: the largest tree mark a star-tree vertex can carry.
    NeighborMax,
}

/// Abscissa used when fitting `log P(X >= k)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum TailScale {
    /// Exponential tail: `log P` linear in `k`.
    Linear,
    /// Stretched exponential: `log P` linear in `k^beta`.
    Power(f64),
}

impl TailScale {
    fn apply(self, k: usize) -> f64 {
        match self {
            TailScale::Linear => k as f64,
            TailScale::Power(beta) => (k as f64).powf(beta),
        }
    }
}

/// Exceedance curve of a root statistic.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DegreeTail {
    pub mode: RootMode,
    pub statistic: TailStatistic,
    /// `(k, P(X >= k), #{v : X(v) >= k})` for `k = 1..=max`.
    pub exceedance: Vec<(usize, f64, u64)>,
    /// Values of the statistic that occur.
    pub attained: Vec<usize>,
}

/// Minimum number of vertices behind a tail point used in a fit.
pub const TAIL_MIN_COUNT: u64 = 10;

impl DegreeTail {
    /// Builds the curve from `(value, vertex count, probability weight)` triples.
    pub fn from_weights(mode: RootMode, statistic: TailStatistic, entries: &[(usize, u64, f64)]) -> Result<Self> {
        let mut table: BTreeMap<usize, (u64, f64)> = BTreeMap::new();
        for &(k, c, w) in entries {
            let e = table.entry(k).or_insert((0, 0.0));
            e.0 += c;
            e.1 += w;
        }
        let total: f64 = table.values().map(|e| e.1).sum();
        if !(total > 0.0) {
            return Err(param("entries", "no probability mass"));
        }
        let max = table.keys().next_back().copied().unwrap_or(0);
        let mut exceedance = Vec::with_capacity(max);
        let (mut count, mut weight) = (0u64, 0.0);
        let mut above = table.iter().rev().peekable();
        for k in (1..=max).rev() {
            while let Some((_, &(c, w))) = above.next_if(|(&v, _)| v >= k) {
                count += c;
                weight += w;
            }
            exceedance.push((k, (weight / total).min(1.0), count));
        }
        exceedance.reverse();
        Ok(Self {
            mode,
            statistic,
            exceedance,
            attained: table.keys().copied().filter(|&k| k >= 1).collect(),
        })
    }

    /// Uniform or stationary degree tail from a degree census `(degree, count)`.
    pub fn from_degree_census(mode: RootMode, census: &[(usize, u64)]) -> Result<Self> {
        let entries: Vec<(usize, u64, f64)> = census
            .iter()
            .map(|&(d, c)| {
                let w = match mode {
                    RootMode::Uniform => c as f64,
                    RootMode::Stationary => (d as u64 * c) as f64,
                };
                (d, c, w)
            })
            .collect();
        Self::from_weights(mode, TailStatistic::Degree, &entries)
    }

    pub fn exceedance_at(&self, k: usize) -> f64 {
        match k {
            0 => 1.0,
            _ => self.exceedance.get(k - 1).map_or(0.0, |e| e.1),
        }
    }

    /// Least-squares fit of `log P(X >= k)` against `scale(k)` over attained values
    /// `k >= k_min` backed by at least [`TAIL_MIN_COUNT`] vertices.
    pub fn fit(&self, scale: TailScale, k_min: usize) -> Result<LinearFit> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .attained
            .iter()
            .filter(|&&k| k >= k_min.max(1))
            .map(|&k| &self.exceedance[k - 1])
            .filter(|e| e.2 >= TAIL_MIN_COUNT && e.1 > 0.0)
            .map(|e| (scale.apply(e.0), e.1.ln()))
            .unzip();
        linear_fit(&xs, &ys)
    }
}

/// Exact exceedance curve of `statistic` at a root drawn from `mode`.
pub fn degree_tail(g: &PlanarGraph, mode: RootMode, statistic: TailStatistic) -> Result<DegreeTail> {
    let law = root_law(g, mode)?;
    let entries: Vec<(usize, u64, f64)> = (0..g.vertex_count())
        .map(|v| {
            let x = match statistic {
                TailStatistic::Degree => g.degree(v),
                TailStatistic::NeighborMax => g.neighbors(v).iter().map(|&u| g.degree(u)).max().unwrap_or(0),
            };
            (x, 1, law[v])
        })
        .collect();
    DegreeTail::from_weights(mode, statistic, &entries)
}

/// Outcome of comparing uniform and stationary ball laws code by code.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReweightingCheck {
    pub max_degree: usize,
    /// `max_A P_uniform(A) / P_stationary(A)` over singleton code events.
    pub worst_ratio: f64,
    pub codes: usize,
    pub violations: usize,
}

impl ReweightingCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `P_u(A) <= D · P_π(A)` for every ball code at radius `r`, exactly.
///
/// Any event is a disjoint union of codes, so singletons suffice.
pub fn reweighting_check(g: &PlanarGraph, r: usize) -> Result<ReweightingCheck> {
    let uniform = ball_census(g, r, RootMode::Uniform)?;
    let stationary = ball_census(g, r, RootMode::Stationary)?;
    let d = g.max_degree() as f64;
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for (code, &pu) in &uniform.probabilities {
        let ps = stationary.probability(code);
        worst = worst.max(pu / ps);
        if pu > d * ps * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    Ok(ReweightingCheck {
        max_degree: g.max_degree(),
        worst_ratio: worst,
        codes: uniform.probabilities.len(),
        violations,
    })
}
