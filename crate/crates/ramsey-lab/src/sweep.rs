//! Monte Carlo arrow-probability estimation on binomial and typed random
//! graphs, and threshold sweeps over the grid p = C * n^(-1/m2(F1, F2)).
//!
//! All randomness is derived from the master seed through [`mix_seed`], so a
//! sweep's output is a pure function of its spec, whatever the worker count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrow::{arrow_decide, typed_arrow_decide, ArrowError};
use crate::balance::WeightFunction;
use crate::density::{m2, m2_asym, DensityError};
use crate::graph::Graph;
use crate::ratio::to_f64;
use crate::sample::{mix_seed, sample, sample_gnp, SampleError, TypedModelParams};

/// Cells whose indeterminate rate exceeds this fraction are flagged unusable.
pub const INDETERMINATE_TOLERANCE: f64 = 0.02;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum SweepError {
    #[error("no target graphs given")]
    NoTargets,
    #[error("empty n or C grid")]
    EmptyGrid,
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("C value {0} is not positive and finite")]
    BadC(f64),
    #[error("typed sweep weight function has {found} entries for a pattern with {expected} edges")]
    WeightMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
}

/// Typed-model configuration for a sweep: the pattern H (colour 1) and the
/// edge weights of the G(n, p, w) sampler.
#[derive(Debug, Clone)]
pub struct TypedSweepConfig {
    pub pattern: Graph,
    pub weights: WeightFunction,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub targets: Vec<Graph>,
    pub n_values: Vec<usize>,
    pub c_values: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub budget: u64,
    /// `Some` switches to the typed model: colour 1 is constrained by typed
    /// pattern copies and `targets` occupy colours 2..
    pub typed: Option<TypedSweepConfig>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.targets.is_empty() {
            return Err(SweepError::NoTargets);
        }
        if self.n_values.is_empty() || self.c_values.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        if self.trials == 0 {
            return Err(SweepError::ZeroTrials);
        }
        for &c in &self.c_values {
            if !(c > 0.0 && c.is_finite()) {
                return Err(SweepError::BadC(c));
            }
        }
        if let Some(cfg) = &self.typed {
            if cfg.weights.len() != cfg.pattern.edge_count() {
                return Err(SweepError::WeightMismatch {
                    expected: cfg.pattern.edge_count(),
                    found: cfg.weights.len(),
                });
            }
        }
        Ok(())
    }

    /// The threshold exponent -1/m2(F1, F2): the pair is (pattern, first
    /// target) for typed sweeps, the first two targets otherwise (a single
    /// target pairs with itself).
    pub fn exponent(&self) -> Result<f64, SweepError> {
        let (f1, f2) = match &self.typed {
            Some(cfg) => (&cfg.pattern, self.targets.first().unwrap_or(&cfg.pattern)),
            None => (&self.targets[0], self.targets.get(1).unwrap_or(&self.targets[0])),
        };
        let m2a = if std::ptr::eq(f1, f2) || f1 == f2 {
            m2(f1)?.value
        } else {
            m2_asym(f1, f2)?.value
        };
        Ok(-1.0 / to_f64(&m2a))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    /// True when C * n^(-1/m2) reached 1 and the cell ran at p = 1.
    pub clamped: bool,
    pub trials: u64,
    pub arrows: u64,
    pub non_arrows: u64,
    pub indeterminate: u64,
    /// Arrow proportion among decided trials.
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
    /// Indeterminate rate above [`INDETERMINATE_TOLERANCE`].
    pub unusable: bool,
}

/// Wilson score interval at 95% for `successes` out of `total`.
pub fn wilson_interval(successes: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let n = total as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = phat + z2 / (2.0 * n);
    let spread = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    (((centre - spread) / denom).max(0.0), ((centre + spread) / denom).min(1.0))
}

#[derive(Clone, Copy)]
enum Outcome {
    Arrow,
    NonArrow,
    Indeterminate,
}

fn aggregate(
    n: usize,
    c: f64,
    p: f64,
    clamped: bool,
    seed: u64,
    outcomes: impl IntoIterator<Item = Outcome>,
) -> SweepCell {
    let (mut arrows, mut non_arrows, mut indeterminate) = (0u64, 0u64, 0u64);
    for o in outcomes {
        match o {
            Outcome::Arrow => arrows += 1,
            Outcome::NonArrow => non_arrows += 1,
            Outcome::Indeterminate => indeterminate += 1,
        }
    }
    let trials = arrows + non_arrows + indeterminate;
    let decided = arrows + non_arrows;
    let p_hat = if decided == 0 { 0.0 } else { arrows as f64 / decided as f64 };
    let (wilson_lo, wilson_hi) = wilson_interval(arrows, decided);
    let unusable = indeterminate as f64 > INDETERMINATE_TOLERANCE * trials as f64;
    SweepCell {
        n,
        c,
        p,
        clamped,
        trials,
        arrows,
        non_arrows,
        indeterminate,
        p_hat,
        wilson_lo,
        wilson_hi,
        seed,
        unusable,
    }
}

/// Estimates Pr(G(n, p) -> (F1, ..., Fr)) over `trials` independent samples.
/// Per-trial seed is mix(seed, trial index); indeterminate decisions are
/// reported separately, never folded into either side.
pub fn estimate_arrow_probability(
    n: usize,
    p: f64,
    targets: &[Graph],
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<SweepCell, SweepError> {
    if targets.is_empty() {
        return Err(SweepError::NoTargets);
    }
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = sample_gnp(n, p, mix_seed(&[seed, t]))?;
            let res = arrow_decide(&g, targets, budget)?;
            Ok(match res.arrows() {
                Some(true) => Outcome::Arrow,
                Some(false) => Outcome::NonArrow,
                None => Outcome::Indeterminate,
            })
        })
        .collect::<Result<_, SweepError>>()?;
    Ok(aggregate(n, f64::NAN, p, false, seed, outcomes))
}

/// Typed counterpart: samples G(n, p, w) and decides the typed arrow.
pub fn estimate_typed_arrow_probability(
    n: usize,
    p: f64,
    cfg: &TypedSweepConfig,
    targets: &[Graph],
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<SweepCell, SweepError> {
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let params = TypedModelParams {
                n,
                p,
                pattern: cfg.pattern.clone(),
                weights: cfg.weights.clone(),
                seed: mix_seed(&[seed, t]),
            };
            let g = sample(&params)?;
            let res = typed_arrow_decide(&g, targets, budget)?;
            Ok(match res.arrows() {
                Some(true) => Outcome::Arrow,
                Some(false) => Outcome::NonArrow,
                None => Outcome::Indeterminate,
            })
        })
        .collect::<Result<_, SweepError>>()?;
    Ok(aggregate(n, f64::NAN, p, false, seed, outcomes))
}

/// Runs the full (n, C) grid. Cell seed = mix(master, n index, C index);
/// output sorted by (n, C).
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>, SweepError> {
    spec.validate()?;
    let exponent = spec.exponent()?;
    let mut cells = Vec::new();
    for (ni, &n) in spec.n_values.iter().enumerate() {
        for (ci, &c) in spec.c_values.iter().enumerate() {
            let raw_p = c * (n as f64).powf(exponent);
            let (p, clamped) = if raw_p >= 1.0 { (1.0, true) } else { (raw_p, false) };
            let seed = mix_seed(&[spec.master_seed, ni as u64, ci as u64]);
            let mut cell = match &spec.typed {
                Some(cfg) => estimate_typed_arrow_probability(
                    n,
                    p,
                    cfg,
                    &spec.targets,
                    spec.trials,
                    seed,
                    spec.budget,
                )?,
                None => {
                    estimate_arrow_probability(n, p, &spec.targets, spec.trials, seed, spec.budget)?
                }
            };
            cell.c = c;
            cell.clamped = clamped;
            cells.push(cell);
        }
    }
    cells.sort_by(|a, b| (a.n, a.c).partial_cmp(&(b.n, b.c)).expect("finite C values"));
    Ok(cells)
}

/// CSV rendering with the stable column set.
pub fn cells_to_csv(cells: &[SweepCell]) -> String {
    let mut out =
        String::from("n,C,p,trials,arrows,non_arrows,indeterminate,p_hat,wilson_lo,wilson_hi,seed\n");
    for cell in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            cell.n,
            cell.c,
            cell.p,
            cell.trials,
            cell.arrows,
            cell.non_arrows,
            cell.indeterminate,
            cell.p_hat,
            cell.wilson_lo,
            cell.wilson_hi,
            cell.seed,
        ));
    }
    out
}

/// Linear interpolation of the smallest C where the estimate crosses 1/2,
/// scanning the (sorted) cells of one n. `None` when the estimates never
/// reach 1/2.
pub fn crossing_point(cells: &[SweepCell]) -> Option<f64> {
    let mut prev: Option<&SweepCell> = None;
    for cell in cells {
        if cell.p_hat >= 0.5 {
            return Some(match prev {
                Some(q) if cell.p_hat > q.p_hat => {
                    q.c + (cell.c - q.c) * (0.5 - q.p_hat) / (cell.p_hat - q.p_hat)
                }
                _ => cell.c,
            });
        }
        prev = Some(cell);
    }
    None
}
