//! Seeded perturbation experiments over a set of materials.

use rayon::prelude::*;

use super::format::MaterialRecord;
use crate::bounds::{self, SLACK};
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::spectral::{self, SolverConfig};
use crate::tensor::{PiezoTensor, SymmetryMode};

/// Sign convention for perturbation entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Perturbation {
    /// Entries drawn from `[0, ε)`.
    #[default]
    Nonnegative,
    /// Entries drawn from `[−ε, ε)`.
    Signed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    pub perturbation: Perturbation,
    /// Reuse one perturbation direction per (material, trial) across all ε
    /// instead of drawing a fresh one for every ε.
    pub shared_direction: bool,
    /// Worker threads; 0 uses rayon's default.
    pub workers: usize,
}

pub const DEFAULT_EPSILONS: [f64; 6] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            epsilons: DEFAULT_EPSILONS.to_vec(),
            trials: 1,
            seed: 1,
            solver: SolverConfig::default(),
            perturbation: Perturbation::Nonnegative,
            shared_direction: false,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(eps) = self.epsilons.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be finite and nonnegative, got {eps}"
            )));
        }
        self.solver.validate()
    }
}

/// One (material, ε, trial) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub material: String,
    pub epsilon: f64,
    pub trial: usize,
    pub true_lambda: f64,
    pub lo21: f64,
    pub hi21: f64,
    pub lo24: f64,
    pub hi24: f64,
    pub lo25: f64,
    pub hi25: f64,
    pub nested: bool,
    pub contained: bool,
}

/// Draws `n³` uniforms in `(i, j, k)` order, scales by `epsilon`, and
/// symmetrizes over the last two indices.
pub fn gen_perturbation(
    n: usize,
    epsilon: f64,
    kind: Perturbation,
    stream: &mut Stream,
) -> Result<PiezoTensor> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::NegativeInput {
            name: "epsilon",
            value: epsilon,
        });
    }
    let raw: Vec<f64> = (0..n * n * n)
        .map(|_| {
            let u = rng::uniform(stream);
            match kind {
                Perturbation::Nonnegative => epsilon * u,
                Perturbation::Signed => epsilon * (2.0 * u - 1.0),
            }
        })
        .collect();
    PiezoTensor::new(n, &raw, SymmetryMode::AutoSymmetrize)
}

/// Per-cell stream seed. Materials are keyed by name and ε by its bit
/// pattern, so adding materials or ε values leaves other cells' draws alone.
pub fn cell_seed(seed: u64, material: &str, epsilon: Option<f64>, trial: usize) -> u64 {
    let eps_key = epsilon.map_or(u64::MAX, f64::to_bits);
    rng::derive_seed(seed, &[rng::fnv1a(material.as_bytes()), eps_key, trial as u64])
}

/// Runs every (material, ε, trial) cell and checks containment and nesting.
///
/// Rows come back ordered by material (input order), ε descending, then
/// trial, independent of the worker count.
pub fn run_experiment(materials: &[MaterialRecord], cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let Some(first) = materials.first() else {
        return Ok(Vec::new());
    };
    let n = first.tensor.n();
    if let Some(bad) = materials.iter().find(|m| m.tensor.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.tensor.n(),
        }
        .context(format!("material {}", bad.name)));
    }
    if let Some(bad) = materials.iter().find(|m| m.name.is_empty()) {
        return Err(Error::InvalidInput(format!(
            "material with empty name (n = {})",
            bad.tensor.n()
        )));
    }

    let mut epsilons = cfg.epsilons.clone();
    epsilons.sort_by(|a, b| b.total_cmp(a));

    let cells: Vec<(&MaterialRecord, f64, usize)> = materials
        .iter()
        .flat_map(|m| {
            epsilons
                .iter()
                .flat_map(move |&eps| (0..cfg.trials).map(move |t| (m, eps, t)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let rows: Vec<Result<ResultRow>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(m, eps, trial)| run_cell(m, eps, trial, cfg))
            .collect()
    });
    rows.into_iter().collect()
}

fn run_cell(m: &MaterialRecord, epsilon: f64, trial: usize, cfg: &ExperimentConfig) -> Result<ResultRow> {
    let ctx = || format!("{} at epsilon {epsilon:e}, trial {trial}", m.name);
    let seed = cell_seed(
        cfg.seed,
        &m.name,
        (!cfg.shared_direction).then_some(epsilon),
        trial,
    );
    let mut stream = rng::stream(seed);
    let e = gen_perturbation(m.tensor.n(), epsilon, cfg.perturbation, &mut stream)?;
    let report = bounds::full_report(&m.tensor, &e, &cfg.solver).map_err(|err| err.context(ctx()))?;
    let perturbed = m.tensor.add(&e)?;
    let true_lambda = spectral::c_max_via_lift(&perturbed, &cfg.solver)
        .map_err(|err| err.context(ctx()))?
        .lambda;

    let contained = report.contains(true_lambda, SLACK);
    let nested = bounds::check_nesting(&report);
    if !(contained && nested) {
        return Err(Error::PropertyViolation {
            material: m.name.clone(),
            epsilon,
            trial,
            detail: format!(
                "contained = {contained}, nested = {nested}, true = {true_lambda:.12}, report = {report:?}"
            ),
        });
    }
    Ok(ResultRow {
        material: m.name.clone(),
        epsilon,
        trial,
        true_lambda,
        lo21: report.interval_21.lo,
        hi21: report.interval_21.hi,
        lo24: report.interval_24.lo,
        hi24: report.interval_24.hi,
        lo25: report.interval_25.lo,
        hi25: report.interval_25.hi,
        nested,
        contained,
    })
}
