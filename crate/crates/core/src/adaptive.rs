//! The adaptive outer loop.
//!
//! Each iteration builds the truncated Hamiltonian of the current basis,
//! optimizes the QAOA angle once, then samples until a measured coefficient
//! vector passes the substitution rule or the retry budget runs out.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{build_hamiltonian, Encoding};
use crate::lattice::{self, apply_transform, random_unimodular, Basis};
use crate::qaoa::{optimize_gamma, qaoa_state, Sampler, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE};
use crate::rng::{self, Rng};
use crate::{stats, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub max_qaoa_retries: usize,
    pub shots_per_attempt: usize,
    pub grid_points: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            k: 2,
            max_iterations: 50,
            max_qaoa_retries: 100,
            shots_per_attempt: 1,
            grid_points: DEFAULT_GRID_POINTS,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.k >= 1, "k must be at least 1"),
            (self.max_iterations >= 1, "max_iterations must be at least 1"),
            (self.max_qaoa_retries >= 1, "max_qaoa_retries must be at least 1"),
            (self.shots_per_attempt >= 1, "shots_per_attempt must be at least 1"),
            (self.grid_points >= 8, "grid_points must be at least 8"),
            (self.tolerance > 0.0, "tolerance must be positive"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::InvalidArgument((*msg).into())),
            None => Ok(()),
        }
    }
}

/// One line of a run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationEntry {
    pub iteration: usize,
    /// Squared lengths of the basis after this iteration, ascending.
    pub sorted_squared_lengths: Vec<i64>,
    pub accepted: bool,
    pub replaced_index: Option<usize>,
    pub accepted_coefficients: Option<Vec<i64>>,
    pub qaoa_attempts: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub initial_basis: Basis,
    pub entries: Vec<IterationEntry>,
    pub final_basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordViolation {
    #[error("iteration {iteration}: logged update fails the substitution criteria")]
    Criteria { iteration: usize },
    #[error("iteration {iteration}: logged lengths differ from the replayed basis")]
    LengthsMismatch { iteration: usize },
    #[error("iteration {iteration}: sorted length at rank {rank} increased")]
    LengthIncreased { iteration: usize, rank: usize },
    #[error("iteration {iteration}: lattice determinant changed")]
    DeterminantChanged { iteration: usize },
    #[error("replayed basis differs from the recorded final basis")]
    FinalMismatch,
}

impl RunRecord {
    pub fn final_sorted_squared_lengths(&self) -> Vec<i64> {
        self.final_basis.sorted_squared_lengths()
    }

    /// Sorted squared lengths before the first iteration and after each one.
    pub fn trajectory(&self) -> Vec<Vec<i64>> {
        std::iter::once(self.initial_basis.sorted_squared_lengths())
            .chain(self.entries.iter().map(|e| e.sorted_squared_lengths.clone()))
            .collect()
    }

    /// Re-applies every logged update to the initial basis, re-checking the
    /// substitution criteria, the logged lengths and the determinant at each
    /// step, and returns the reconstructed final basis.
    pub fn replay(&self) -> std::result::Result<Basis, RecordViolation> {
        let det = self.initial_basis.determinant().abs();
        let mut basis = self.initial_basis.clone();
        let mut prev = basis.sorted_squared_lengths();
        for e in &self.entries {
            let iteration = e.iteration;
            match (&e.accepted_coefficients, e.accepted) {
                (Some(n), true) => {
                    if n.len() != basis.dim() {
                        return Err(RecordViolation::Criteria { iteration });
                    }
                    let m = e.replaced_index.ok_or(RecordViolation::Criteria { iteration })?;
                    let g = basis.gram();
                    let len = lattice::squared_length(&g, n);
                    // criteria 1 and 2 for the logged index
                    if m >= basis.dim() || n[m].abs() != 1 || len >= g.get(m, m) {
                        return Err(RecordViolation::Criteria { iteration });
                    }
                    let update = lattice::update_basis(&basis, n);
                    if update.replaced_index != Some(m) {
                        return Err(RecordViolation::Criteria { iteration });
                    }
                    basis = update.basis;
                }
                (None, false) if e.replaced_index.is_none() => {}
                _ => return Err(RecordViolation::Criteria { iteration }),
            }
            if basis.determinant().abs() != det {
                return Err(RecordViolation::DeterminantChanged { iteration });
            }
            let lengths = basis.sorted_squared_lengths();
            if lengths != e.sorted_squared_lengths {
                return Err(RecordViolation::LengthsMismatch { iteration });
            }
            if let Some(rank) = (0..lengths.len()).find(|&r| lengths[r] > prev[r]) {
                return Err(RecordViolation::LengthIncreased { iteration, rank: rank + 1 });
            }
            prev = lengths;
        }
        Ok(basis)
    }

    /// Checks every loop invariant the log can witness.
    pub fn verify(&self) -> std::result::Result<(), RecordViolation> {
        if self.replay()? != self.final_basis {
            return Err(RecordViolation::FinalMismatch);
        }
        Ok(())
    }
}

/// Tests sampled candidates in order until one is accepted. `source` yields
/// one measured coefficient vector per call; `attempts · shots` draws at most.
pub fn iterate_with_source(
    basis: &Basis,
    iteration: usize,
    gamma: f64,
    max_attempts: usize,
    shots_per_attempt: usize,
    mut source: impl FnMut() -> Vec<i64>,
) -> (Basis, IterationEntry) {
    for attempt in 1..=max_attempts {
        for _ in 0..shots_per_attempt {
            let n = source();
            let update = lattice::update_basis(basis, &n);
            if update.accepted {
                let entry = IterationEntry {
                    iteration,
                    sorted_squared_lengths: update.basis.sorted_squared_lengths(),
                    accepted: true,
                    replaced_index: update.replaced_index,
                    accepted_coefficients: Some(n),
                    qaoa_attempts: attempt,
                    gamma,
                };
                return (update.basis, entry);
            }
        }
    }
    let entry = IterationEntry {
        iteration,
        sorted_squared_lengths: basis.sorted_squared_lengths(),
        accepted: false,
        replaced_index: None,
        accepted_coefficients: None,
        qaoa_attempts: max_attempts,
        gamma,
    };
    (basis.clone(), entry)
}

/// Hamiltonian-dependent state of an iteration; reusable while the basis is
/// unchanged.
struct Prepared {
    gamma: f64,
    sampler: Sampler,
}

fn prepare(basis: &Basis, config: &IterationConfig) -> Result<Prepared> {
    let encoding = Encoding::new(basis.dim(), config.k)?;
    let h = build_hamiltonian(&basis.gram(), &encoding)?;
    let opt = optimize_gamma(&h, config.grid_points, config.tolerance)?;
    let state = qaoa_state(&h, opt.gamma)?;
    Ok(Prepared { gamma: opt.gamma, sampler: Sampler::new(&state, &encoding)? })
}

pub fn iterate_once(
    basis: &Basis,
    config: &IterationConfig,
    iteration: usize,
    rng: &mut Rng,
) -> Result<(Basis, IterationEntry)> {
    config.validate()?;
    let prepared = prepare(basis, config)?;
    Ok(step(basis, config, iteration, &prepared, rng))
}

fn step(
    basis: &Basis,
    config: &IterationConfig,
    iteration: usize,
    prepared: &Prepared,
    rng: &mut Rng,
) -> (Basis, IterationEntry) {
    iterate_with_source(
        basis,
        iteration,
        prepared.gamma,
        config.max_qaoa_retries,
        config.shots_per_attempt,
        || prepared.sampler.draw(rng).into_inner(),
    )
}

/// Runs `max_iterations` iterations. Iteration `t` (1-based) draws from the
/// stream `(seed, t)`.
pub fn run(basis: &Basis, config: &IterationConfig) -> Result<RunRecord> {
    config.validate()?;
    let mut current = basis.clone();
    let mut prepared = prepare(&current, config)?;
    let mut entries = Vec::with_capacity(config.max_iterations);
    for t in 1..=config.max_iterations {
        let mut rng = rng::stream(config.seed, &[t as u64]);
        let (next, entry) = step(&current, config, t, &prepared, &mut rng);
        let changed = entry.accepted;
        entries.push(entry);
        current = next;
        if changed && t < config.max_iterations {
            prepared = prepare(&current, config)?;
        }
    }
    Ok(RunRecord { initial_basis: basis.clone(), entries, final_basis: current })
}

/// Runs `n_runs` independent runs per basis. Run `r` on basis `b` uses the
/// seed derived from `(template.seed, b, r)`; records come back in
/// basis-major order.
pub fn ensemble(bases: &[Basis], template: &IterationConfig, n_runs: usize) -> Result<Vec<RunRecord>> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be at least 1".into()));
    }
    template.validate()?;
    let jobs: Vec<(usize, usize)> = (0..bases.len()).flat_map(|b| (0..n_runs).map(move |r| (b, r))).collect();
    jobs.par_iter()
        .map(|&(b, r)| {
            let config = IterationConfig { seed: rng::subseed(template.seed, &[b as u64, r as u64]), ..template.clone() };
            run(&bases[b], &config)
        })
        .collect()
}

/// Per-iteration, per-rank summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankStats {
    /// 0 is the initial basis.
    pub iteration: usize,
    /// 1-based rank in the ascending order of basis lengths.
    pub rank: usize,
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub points: Vec<RankStats>,
}

/// How basis lengths are scaled before summarizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Plain Euclidean lengths.
    None,
    /// Rank-`j` length divided by `j` times the shortest-vector length.
    ByRank,
    /// Rank-`j` length divided by the `j`-th known successive minimum.
    ByMinimum,
}

impl EnsembleStats {
    /// `minima[r]` holds the known squared successive minima of run `r`'s
    /// lattice; it is ignored for [`Normalization::None`].
    pub fn from_records(records: &[RunRecord], minima: &[Vec<i64>], norm: Normalization) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidArgument("no runs to summarize".into()));
        }
        if norm != Normalization::None && minima.len() != records.len() {
            return Err(Error::DimensionMismatch { expected: records.len(), got: minima.len() });
        }
        let trajectories: Vec<Vec<Vec<f64>>> = records
            .iter()
            .enumerate()
            .map(|(r, rec)| {
                rec.trajectory()
                    .iter()
                    .map(|lengths| {
                        lengths
                            .iter()
                            .enumerate()
                            .map(|(j, &sq)| {
                                let len = (sq as f64).sqrt();
                                match norm {
                                    Normalization::None => len,
                                    Normalization::ByRank => len / ((j + 1) as f64 * (minima[r][0] as f64).sqrt()),
                                    Normalization::ByMinimum => len / (minima[r][j] as f64).sqrt(),
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::from_trajectories(&trajectories)
    }

    /// `trajectories[run][iteration][rank]`; all runs must share a shape.
    pub fn from_trajectories(trajectories: &[Vec<Vec<f64>>]) -> Result<Self> {
        let first = trajectories.first().ok_or_else(|| Error::InvalidArgument("no runs to summarize".into()))?;
        let (iters, ranks) = (first.len(), first.first().map_or(0, Vec::len));
        if trajectories.iter().any(|t| t.len() != iters || t.iter().any(|row| row.len() != ranks)) {
            return Err(Error::InvalidArgument("runs differ in length or dimension".into()));
        }
        let mut points = Vec::with_capacity(iters * ranks);
        for iteration in 0..iters {
            for j in 0..ranks {
                let mut values: Vec<f64> = trajectories.iter().map(|t| t[iteration][j]).collect();
                values.sort_by(f64::total_cmp);
                points.push(RankStats {
                    iteration,
                    rank: j + 1,
                    median: stats::nearest_rank_sorted(&values, 0.5),
                    q10: stats::nearest_rank_sorted(&values, 0.1),
                    q90: stats::nearest_rank_sorted(&values, 0.9),
                });
            }
        }
        Ok(EnsembleStats { points })
    }

    pub fn at(&self, iteration: usize, rank: usize) -> Option<&RankStats> {
        self.points.iter().find(|p| p.iteration == iteration && p.rank == rank)
    }

    pub fn last_iteration(&self) -> usize {
        self.points.iter().map(|p| p.iteration).max().unwrap_or(0)
    }
}

/// Fractions of runs whose final basis contains a shortest vector, and whose
/// final basis reaches every known successive minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessRates {
    pub contains_shortest: f64,
    pub fully_reduced: f64,
}

pub fn success_rates(records: &[RunRecord], minima: &[Vec<i64>]) -> SuccessRates {
    assert_eq!(records.len(), minima.len(), "one minima list per run");
    let total = records.len().max(1) as f64;
    let (mut shortest, mut full) = (0usize, 0usize);
    for (rec, min) in records.iter().zip(minima) {
        let fin = rec.final_sorted_squared_lengths();
        shortest += usize::from(fin[0] == min[0]);
        full += usize::from(&fin == min);
    }
    SuccessRates { contains_shortest: shortest as f64 / total, fully_reduced: full as f64 / total }
}

/// A scrambled orthogonal lattice with known successive minima.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedLattice {
    pub basis: Basis,
    pub diagonal: Vec<i64>,
    /// Squared successive minima (the sorted squared diagonal).
    pub minima: Vec<i64>,
}

/// Draws a diagonal basis with entries uniform in `1..=max_diagonal` and
/// scrambles it with [`random_unimodular`].
pub fn random_lattice<R: rand::Rng + ?Sized>(
    d: usize,
    max_diagonal: i64,
    entry_range: i64,
    rng: &mut R,
) -> Result<GeneratedLattice> {
    if max_diagonal < 1 {
        return Err(Error::InvalidArgument(format!("max diagonal must be at least 1, got {max_diagonal}")));
    }
    let diagonal: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=max_diagonal)).collect();
    let rows = (0..d)
        .map(|i| (0..d).map(|j| if i == j { diagonal[i] } else { 0 }).collect())
        .collect();
    let good = Basis::new(rows)?;
    let w = random_unimodular(d, entry_range, rng)?;
    let basis = apply_transform(&w, &good)?;
    let mut minima: Vec<i64> = diagonal.iter().map(|x| x * x).collect();
    minima.sort_unstable();
    Ok(GeneratedLattice { basis, diagonal, minima })
}
