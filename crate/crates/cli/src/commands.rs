use iqoap_core::adaptive::{self, EnsembleStats, GeneratedLattice, Normalization, RunRecord};
use iqoap_core::encoding::{self, Encoding};
use iqoap_core::rng;

use crate::config::{ExperimentConfig, LabeledBasis};
use crate::error::CliError;
use crate::output::{Csv, Outputs};

/// Files to write plus the lines to print once they are written.
pub struct Report {
    pub outputs: Outputs,
    pub summary: Vec<String>,
}

pub fn spectrum(config: &ExperimentConfig) -> Result<Report, CliError> {
    let k = config.single_k(2)?;
    let mut outputs = Outputs::default();
    let mut summary = Vec::new();
    for LabeledBasis { label, basis, .. } in config.bases(&["a", "b", "c"])? {
        let enc = Encoding::new(basis.dim(), k)?;
        let levels = encoding::truncated_spectrum(&basis.gram(), &enc)?;
        let mut csv = Csv::new(&["basis_label", "eigenvalue"]);
        for e in &levels {
            csv.row(&[label.clone(), e.to_string()]);
        }
        let lowest = levels.iter().find(|&&e| e != 0).map_or("none".into(), i64::to_string);
        summary.push(format!("basis {label}: {} levels, lowest nonzero {lowest}", levels.len()));
        outputs.add(format!("spectrum_{label}.csv"), csv.into_string());
    }
    Ok(Report { outputs, summary })
}

pub fn scaling(config: &ExperimentConfig) -> Result<Report, CliError> {
    let k_values = config.k_values(&[1, 2, 3, 4, 5])?;
    let basis = single_basis(config, "a")?;
    let trials = config.trials.unwrap_or(100);
    let entry_range = config.entry_range.unwrap_or(10);
    let rows = encoding::scaling_experiment(&basis.basis, &k_values, trials, entry_range, config.seed())?;
    let mut csv = Csv::new(&["k", "median", "q75"]);
    let mut summary = Vec::new();
    for r in &rows {
        csv.row(&[r.k.to_string(), r.median.to_string(), r.q75.to_string()]);
        summary.push(format!("k={}: median {}, q75 {}", r.k, r.median, r.q75));
    }
    let mut outputs = Outputs::default();
    outputs.add("scaling.csv", csv.into_string());
    Ok(Report { outputs, summary })
}

pub fn converge(config: &ExperimentConfig) -> Result<Report, CliError> {
    let (basis, records) = converge_records(config)?;

    let mut outputs = Outputs::default();
    let stats = EnsembleStats::from_records(&records, &[], Normalization::None)?;
    outputs.add("converge_stats.csv", stats_csv(&[&stats]));
    for (i, rec) in records.iter().enumerate() {
        outputs.add(format!("runs/run_{i}.jsonl"), jsonl(rec)?);
    }

    let mut summary = vec![final_medians_line(&stats)];
    match &basis.minima {
        Some(m) => {
            let minima = vec![m.clone(); records.len()];
            let rates = adaptive::success_rates(&records, &minima);
            summary.push(format!(
                "success: {:.2} of runs contain a shortest vector, {:.2} reach all minima",
                rates.contains_shortest, rates.fully_reduced
            ));
        }
        None => summary.push("success: minima unknown, rates not computed".into()),
    }
    Ok(Report { outputs, summary })
}

pub fn ensemble(config: &ExperimentConfig) -> Result<Report, CliError> {
    let EnsembleRuns { lattices, runs_per_lattice: runs, records, minima } = ensemble_records(config)?;

    let plain = EnsembleStats::from_records(&records, &minima, Normalization::None)?;
    let by_rank = EnsembleStats::from_records(&records, &minima, Normalization::ByRank)?;
    let by_min = EnsembleStats::from_records(&records, &minima, Normalization::ByMinimum)?;
    let mut outputs = Outputs::default();
    outputs.add("ensemble_stats.csv", stats_csv(&[&plain, &by_rank, &by_min]));

    let rates = adaptive::success_rates(&records, &minima);
    let last = by_min.last_iteration();
    let rank1 = by_min.at(last, 1).map_or(f64::NAN, |p| p.median);
    let summary = vec![
        format!("{} lattices, {} runs each", lattices.len(), runs),
        format!("final rank-1 median length / shortest: {rank1}"),
        format!(
            "success: {:.2} of runs contain a shortest vector, {:.2} reach all minima",
            rates.contains_shortest, rates.fully_reduced
        ),
    ];
    Ok(Report { outputs, summary })
}

/// The runs behind `converge`: `runs` seeded runs on one basis.
pub fn converge_records(config: &ExperimentConfig) -> Result<(LabeledBasis, Vec<RunRecord>), CliError> {
    let k = config.single_k(2)?;
    let basis = single_basis(config, "c")?;
    let runs = config.runs.unwrap_or(50);
    let template = config.iteration_config(k, config.seed())?;
    let records = adaptive::ensemble(std::slice::from_ref(&basis.basis), &template, runs)?;
    Ok((basis, records))
}

pub struct EnsembleRuns {
    pub lattices: Vec<GeneratedLattice>,
    pub runs_per_lattice: usize,
    /// Lattice-major: runs of lattice `i` occupy `i*runs_per_lattice..`.
    pub records: Vec<RunRecord>,
    /// Known minima aligned with `records`.
    pub minima: Vec<Vec<i64>>,
}

/// The runs behind `ensemble`. Lattice `i` is drawn from the stream
/// `(seed, 0, i)`; the runs use the root seed derived from `(seed, 1)`.
pub fn ensemble_records(config: &ExperimentConfig) -> Result<EnsembleRuns, CliError> {
    let k = config.single_k(2)?;
    let params = config.random.clone().unwrap_or_default();
    if params.lattices == 0 {
        return Err(CliError::Usage("lattices must be at least 1".into()));
    }
    let seed = config.seed();
    let lattices = (0..params.lattices)
        .map(|i| {
            let mut r = rng::stream(seed, &[0, i as u64]);
            adaptive::random_lattice(params.dimension, params.max_diagonal, params.entry_range, &mut r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bases: Vec<_> = lattices.iter().map(|g| g.basis.clone()).collect();
    let runs = config.runs.unwrap_or(1);
    let template = config.iteration_config(k, rng::subseed(seed, &[1]))?;
    let records = adaptive::ensemble(&bases, &template, runs)?;
    let minima = lattices
        .iter()
        .flat_map(|g| std::iter::repeat_n(g.minima.clone(), runs))
        .collect();
    Ok(EnsembleRuns { lattices, runs_per_lattice: runs, records, minima })
}

fn single_basis(config: &ExperimentConfig, default: &str) -> Result<LabeledBasis, CliError> {
    let mut bases = config.bases(&[default])?;
    if bases.len() != 1 {
        return Err(CliError::Usage(format!("this experiment takes one basis, got {}", bases.len())));
    }
    Ok(bases.remove(0))
}

/// One row per (iteration, rank). The first table supplies the plain
/// columns; further tables add their median/q10/q90 to the right.
fn stats_csv(tables: &[&EnsembleStats]) -> String {
    const SUFFIXES: [&str; 3] = ["", "_by_rank", "_by_minimum"];
    let mut header = vec!["iteration".to_string(), "rank".to_string()];
    for suffix in &SUFFIXES[..tables.len()] {
        for col in ["median", "q10", "q90"] {
            header.push(format!("{col}{suffix}"));
        }
    }
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, p) in tables[0].points.iter().enumerate() {
        let mut row = vec![p.iteration.to_string(), p.rank.to_string()];
        for t in tables {
            let q = &t.points[i];
            row.extend([q.median, q.q10, q.q90].map(|v| v.to_string()));
        }
        csv.row(&row);
    }
    csv.into_string()
}

fn jsonl(record: &RunRecord) -> Result<String, CliError> {
    let mut out = String::new();
    for entry in &record.entries {
        let line = serde_json::to_string(entry).map_err(|e| CliError::Usage(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn final_medians_line(stats: &EnsembleStats) -> String {
    let last = stats.last_iteration();
    let medians: Vec<String> = stats
        .points
        .iter()
        .filter(|p| p.iteration == last)
        .map(|p| (p.median * p.median).round().to_string())
        .collect();
    format!("final median squared lengths: {}", medians.join(" "))
}
