//! Qubit encoding of integer coefficients and the truncated problem
//! Hamiltonian.
//!
//! Each lattice coordinate `n_i` is carried by `k` qubits through
//! `Q_i = ½(Σ_j 2^(j-1) Z_ij + 1)`, which has the non-degenerate spectrum
//! `[-2^(k-1)+1, 2^(k-1)]`. Qubit `j` of block `i` sits at bit position
//! `i·k + j` of the computational-basis index (little-endian), and bit value 0
//! is the `Z = +1` eigenstate.

use std::ops::Deref;

use rayon::prelude::*;

use crate::lattice::{random_unimodular, apply_transform, squared_length, Basis, GramMatrix, UnimodularMatrix};
use crate::{rng, stats, Error, Result};

/// Dense state arrays are refused above this many qubits.
pub const MAX_DENSE_QUBITS: usize = 24;

/// Largest coefficient box [`lowest_nonzero`] will enumerate.
pub const MAX_BOX_SIZE: u128 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Encoding {
    d: usize,
    k: usize,
}

impl Encoding {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if !(1..=31).contains(&k) {
            return Err(Error::InvalidArgument(format!("qubits per dimension must be in 1..=31, got {k}")));
        }
        if d.checked_mul(k).is_none_or(|q| q > 63) {
            return Err(Error::InvalidArgument(format!("{d}x{k} qubits do not fit a 64-bit index")));
        }
        Ok(Encoding { d, k })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn qubits_per_dim(&self) -> usize {
        self.k
    }

    pub fn n_qubits(&self) -> usize {
        self.d * self.k
    }

    /// Smallest representable coefficient, `-2^(k-1) + 1`.
    pub fn lo(&self) -> i64 {
        1 - self.half()
    }

    /// Largest representable coefficient, `2^(k-1)`.
    pub fn hi(&self) -> i64 {
        self.half()
    }

    fn half(&self) -> i64 {
        1i64 << (self.k - 1)
    }

    fn block_mask(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    pub fn n_states(&self) -> u64 {
        1u64 << self.n_qubits()
    }

    /// Decodes a computational basis index. With bits `x_j` of a block,
    /// `Σ_j 2^(j-1) (1 - 2x_j) = 2^k - 1 - 2·block`, so `n_i = 2^(k-1) - block`.
    pub fn decode(&self, index: u64) -> Result<CoefficientVector> {
        if index >= self.n_states() {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index as i64,
                lo: 0,
                hi: self.n_states() as i64 - 1,
            });
        }
        Ok(CoefficientVector(self.decode_unchecked(index)))
    }

    pub(crate) fn decode_unchecked(&self, index: u64) -> Vec<i64> {
        (0..self.d)
            .map(|i| self.half() - ((index >> (i * self.k)) & self.block_mask()) as i64)
            .collect()
    }

    pub fn encode(&self, n: &[i64]) -> Result<u64> {
        if n.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: n.len() });
        }
        let mut index = 0u64;
        for (i, &x) in n.iter().enumerate() {
            if x < self.lo() || x > self.hi() {
                return Err(Error::OutOfRange { what: "coefficient", value: x, lo: self.lo(), hi: self.hi() });
            }
            index |= ((self.half() - x) as u64) << (i * self.k);
        }
        Ok(index)
    }

    /// Iterator over every coefficient value one register can hold.
    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }
}

/// Integer expansion coefficients decoded from a measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector(Vec<i64>);

impl CoefficientVector {
    pub fn new(n: Vec<i64>, encoding: &Encoding) -> Result<Self> {
        encoding.encode(&n)?;
        Ok(CoefficientVector(n))
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for CoefficientVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// The truncated problem Hamiltonian as a dense diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalHamiltonian {
    encoding: Encoding,
    energies: Vec<i64>,
}

impl DiagonalHamiltonian {
    /// Wraps an arbitrary integer diagonal. Used for synthetic test operators.
    pub fn from_energies(encoding: Encoding, energies: Vec<i64>) -> Result<Self> {
        if energies.len() as u64 != encoding.n_states() {
            return Err(Error::DimensionMismatch { expected: encoding.n_states() as usize, got: energies.len() });
        }
        Ok(DiagonalHamiltonian { encoding, energies })
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn energies(&self) -> &[i64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn mean_energy(&self) -> f64 {
        self.energies.iter().map(|&e| e as f64).sum::<f64>() / self.energies.len() as f64
    }
}

fn check_dims(g: &GramMatrix, encoding: &Encoding) -> Result<()> {
    if g.dim() != encoding.dim() {
        return Err(Error::DimensionMismatch { expected: encoding.dim(), got: g.dim() });
    }
    Ok(())
}

pub fn build_hamiltonian(g: &GramMatrix, encoding: &Encoding) -> Result<DiagonalHamiltonian> {
    build_hamiltonian_with_budget(g, encoding, MAX_DENSE_QUBITS)
}

pub fn build_hamiltonian_with_budget(
    g: &GramMatrix,
    encoding: &Encoding,
    max_qubits: usize,
) -> Result<DiagonalHamiltonian> {
    check_dims(g, encoding)?;
    if encoding.n_qubits() > max_qubits {
        return Err(Error::BudgetExceeded {
            what: "dense Hamiltonian qubits",
            needed: encoding.n_qubits() as u128,
            budget: max_qubits as u128,
        });
    }
    let energies = (0..encoding.n_states())
        .map(|idx| squared_length(g, &encoding.decode_unchecked(idx)))
        .collect();
    Ok(DiagonalHamiltonian { encoding: *encoding, energies })
}

/// Distinct eigenvalues of the truncated Hamiltonian, ascending.
pub fn truncated_spectrum(g: &GramMatrix, encoding: &Encoding) -> Result<Vec<i64>> {
    let h = build_hamiltonian(g, encoding)?;
    let mut values = h.energies;
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

/// Smallest nonzero squared length reachable with coefficients in the
/// encoding range, by direct enumeration of the `(2^k)^d` box.
pub fn lowest_nonzero(g: &GramMatrix, encoding: &Encoding) -> Result<i64> {
    check_dims(g, encoding)?;
    let d = encoding.dim();
    let width = 1u128 << encoding.qubits_per_dim();
    let size = width.checked_pow(d as u32).unwrap_or(u128::MAX);
    if size > MAX_BOX_SIZE {
        return Err(Error::BudgetExceeded { what: "coefficient box", needed: size, budget: MAX_BOX_SIZE });
    }
    let (lo, hi) = (encoding.lo(), encoding.hi());
    let mut best = i64::MAX;
    // Odometer over n_1..n_{d-1}; the innermost coordinate n_0 is swept with
    // q(n) = G00 n0² + 2 n0 (Σ_{j>0} G0j nj) + q(0, n_1, ...).
    let mut rest = vec![lo; d];
    rest[0] = 0;
    loop {
        let tail_len = squared_length(g, &rest);
        let cross: i64 = (1..d).map(|j| g.get(0, j) * rest[j]).sum();
        let tail_zero = rest[1..].iter().all(|&x| x == 0);
        for n0 in lo..=hi {
            if n0 == 0 && tail_zero {
                continue;
            }
            let q = g.get(0, 0) * n0 * n0 + 2 * n0 * cross + tail_len;
            best = best.min(q);
        }
        let mut pos = 1;
        loop {
            if pos == d {
                return Ok(best);
            }
            if rest[pos] < hi {
                rest[pos] += 1;
                break;
            }
            rest[pos] = lo;
            pos += 1;
        }
    }
}

/// Median and 75th nearest-rank percentile of [`lowest_nonzero`] at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalingRow {
    pub k: usize,
    pub median: i64,
    pub q75: i64,
}

/// Scrambles `seed_basis` with `trials` random unimodular matrices and
/// reports lowest-nonzero statistics per `k`. Trial `t` draws its matrix from
/// the stream `(seed, t)`, so results do not depend on scheduling.
pub fn scaling_experiment(
    seed_basis: &Basis,
    k_values: &[usize],
    trials: usize,
    entry_range: i64,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let transforms = (0..trials)
        .map(|t| random_unimodular(seed_basis.dim(), entry_range, &mut rng::stream(seed, &[t as u64])))
        .collect::<Result<Vec<_>>>()?;
    scaling_with_transforms(seed_basis, k_values, &transforms)
}

/// [`scaling_experiment`] over explicitly given scrambling matrices.
pub fn scaling_with_transforms(
    seed_basis: &Basis,
    k_values: &[usize],
    transforms: &[UnimodularMatrix],
) -> Result<Vec<ScalingRow>> {
    if transforms.is_empty() {
        return Err(Error::InvalidArgument("at least one transform is required".into()));
    }
    let d = seed_basis.dim();
    let encodings = k_values.iter().map(|&k| Encoding::new(d, k)).collect::<Result<Vec<_>>>()?;
    // rows: trial, columns: k
    let per_trial: Vec<Vec<i64>> = transforms
        .par_iter()
        .map(|w| {
            let g = apply_transform(w, seed_basis)?.gram();
            encodings.iter().map(|e| lowest_nonzero(&g, e)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(k_values
        .iter()
        .enumerate()
        .map(|(col, &k)| {
            let mut values: Vec<i64> = per_trial.iter().map(|row| row[col]).collect();
            values.sort_unstable();
            ScalingRow {
                k,
                median: stats::nearest_rank_sorted(&values, 0.5),
                q75: stats::nearest_rank_sorted(&values, 0.75),
            }
        })
        .collect())
}
