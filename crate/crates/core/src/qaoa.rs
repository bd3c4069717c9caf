//! Depth-1 QAOA on a diagonal problem Hamiltonian.
//!
//! The circuit is `exp(-iβ H_D) exp(-iγ H_P) |+⟩^⊗n` with `H_D = Σ_j X_j` and
//! `β = γ`. The statevector path is authoritative; [`analytic_expectation`]
//! is a closed-form fast path checked against it.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::encoding::{CoefficientVector, DiagonalHamiltonian, Encoding, MAX_DENSE_QUBITS};
use crate::lattice::GramMatrix;
use crate::{Error, Result};

/// Default number of grid points for [`optimize_gamma`].
pub const DEFAULT_GRID_POINTS: usize = 256;
/// Default golden-section tolerance for [`optimize_gamma`].
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition `|+⟩^⊗n`, the top eigenstate of the driver.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let len = 1usize << n_qubits;
        let a = (len as f64).sqrt().recip();
        Ok(StateVector { n_qubits, amps: vec![Complex64::new(a, 0.0); len] })
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let len = 1usize << n_qubits;
        if index >= len {
            return Err(Error::OutOfRange { what: "basis index", value: index as i64, lo: 0, hi: len as i64 - 1 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn reset_uniform(&mut self) {
        let a = (self.amps.len() as f64).sqrt().recip();
        self.amps.fill(Complex64::new(a, 0.0));
    }

    /// Multiplies each amplitude by `exp(-iγE)`.
    pub fn apply_phase(&mut self, h: &DiagonalHamiltonian, gamma: f64) {
        assert_eq!(h.len(), self.amps.len(), "Hamiltonian and state sizes differ");
        // integer energies: only γ mod 2π matters, and reducing first keeps
        // γ·E small
        let gamma = gamma.rem_euclid(TAU);
        for (a, &e) in self.amps.iter_mut().zip(h.energies()) {
            let (s, c) = (gamma * e as f64).sin_cos();
            *a *= Complex64::new(c, -s);
        }
    }

    /// Applies `exp(-iβX)` to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.n_qubits {
            let stride = 1usize << q;
            for block in self.amps.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c + x1 * mis;
                    *a1 = x0 * mis + x1 * c;
                }
            }
        }
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::BudgetExceeded {
            what: "statevector qubits",
            needed: n_qubits as u128,
            budget: MAX_DENSE_QUBITS as u128,
        });
    }
    Ok(())
}

pub fn uniform_state(n_qubits: usize) -> Result<StateVector> {
    StateVector::uniform(n_qubits)
}

/// The depth-1 QAOA state with `β = γ`.
pub fn qaoa_state(h: &DiagonalHamiltonian, gamma: f64) -> Result<StateVector> {
    let mut state = StateVector::uniform(h.encoding().n_qubits())?;
    state.apply_phase(h, gamma);
    state.apply_mixer(gamma);
    Ok(state)
}

/// `⟨ψ|H|ψ⟩` for a diagonal `H`.
pub fn expectation(state: &StateVector, h: &DiagonalHamiltonian) -> f64 {
    assert_eq!(h.len(), state.amps.len(), "Hamiltonian and state sizes differ");
    state
        .amps
        .iter()
        .zip(h.energies())
        .map(|(a, &e)| a.norm_sqr() * e as f64)
        .sum()
}

/// Ising form of the problem Hamiltonian,
/// `H = c + Σ_p h_p Z_p + Σ_{p<q} J_pq Z_p Z_q`,
/// with every coefficient stored exactly as a multiple of `1/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingCoefficients {
    n_qubits: usize,
    constant: i64,
    fields: Vec<i64>,
    // symmetric, zero diagonal
    couplings: Vec<i64>,
}

impl IsingCoefficients {
    /// All stored numerators are over this denominator.
    pub const DENOMINATOR: i64 = 4;

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn constant_numerator(&self) -> i64 {
        self.constant
    }

    pub fn field_numerator(&self, p: usize) -> i64 {
        self.fields[p]
    }

    pub fn coupling_numerator(&self, p: usize, q: usize) -> i64 {
        self.couplings[p * self.n_qubits + q]
    }

    pub fn constant(&self) -> f64 {
        self.constant as f64 / Self::DENOMINATOR as f64
    }

    pub fn field(&self, p: usize) -> f64 {
        self.fields[p] as f64 / Self::DENOMINATOR as f64
    }

    pub fn coupling(&self, p: usize, q: usize) -> f64 {
        self.coupling_numerator(p, q) as f64 / Self::DENOMINATOR as f64
    }

    /// `4·H(z)` for the assignment encoded in `index` (bit 0 ↦ `Z = +1`).
    pub fn energy_numerator(&self, index: u64) -> i64 {
        let z: Vec<i64> = (0..self.n_qubits).map(|p| 1 - 2 * ((index >> p) & 1) as i64).collect();
        let mut e = self.constant;
        for p in 0..self.n_qubits {
            e += self.fields[p] * z[p];
            for q in p + 1..self.n_qubits {
                e += self.coupling_numerator(p, q) * z[p] * z[q];
            }
        }
        e
    }
}

/// Expands `H = Σ_il G_il Q_i Q_l` with `Q_i = ½(S_i + 1)`,
/// `S_i = Σ_j 2^j Z_(i,j)`, so that
/// `4H = Σ_il G_il (S_i S_l + S_i + S_l + 1)` and `Z² = 1`.
pub fn ising_coefficients(g: &GramMatrix, encoding: &Encoding) -> Result<IsingCoefficients> {
    if g.dim() != encoding.dim() {
        return Err(Error::DimensionMismatch { expected: encoding.dim(), got: g.dim() });
    }
    let (d, k) = (encoding.dim(), encoding.qubits_per_dim());
    let n = encoding.n_qubits();
    let weight = |j: usize| 1i64 << j;

    let mut constant = 0i64;
    for i in 0..d {
        for l in 0..d {
            constant += g.get(i, l);
        }
        let squares: i64 = (0..k).map(|j| weight(j) * weight(j)).sum();
        constant += g.get(i, i) * squares;
    }

    let mut fields = vec![0i64; n];
    for i in 0..d {
        let row_sum: i64 = (0..d).map(|l| g.get(i, l)).sum();
        for j in 0..k {
            fields[i * k + j] = 2 * row_sum * weight(j);
        }
    }

    let mut couplings = vec![0i64; n * n];
    for p in 0..n {
        for q in 0..n {
            if p != q {
                let (i, a) = (p / k, p % k);
                let (l, b) = (q / k, q % k);
                couplings[p * n + q] = 2 * g.get(i, l) * weight(a) * weight(b);
            }
        }
    }
    Ok(IsingCoefficients { n_qubits: n, constant, fields, couplings })
}

/// Closed-form `⟨ψ(γ)|H|ψ(γ)⟩` for the depth-1 circuit with `β = γ`.
pub fn analytic_expectation(coeffs: &IsingCoefficients, gamma: f64) -> f64 {
    analytic_expectation_with_beta(coeffs, gamma, gamma)
}

/// Closed form for independent angles. With `c_x = cos(2γx)`:
///
/// `⟨Z_u⟩ = sin 2β · sin(2γ h_u) · Π_{w≠u} c_{J_uw}`
///
/// `⟨Z_u Z_v⟩ = ½ sin 4β · sin(2γ J_uv) · [c_{h_u} Π_{w≠u,v} c_{J_uw} + c_{h_v} Π_{w≠u,v} c_{J_vw}]
///   − ½ sin² 2β · [c_{h_u+h_v} Π c_{J_uw+J_vw} − c_{h_u−h_v} Π c_{J_uw−J_vw}]`
pub fn analytic_expectation_with_beta(coeffs: &IsingCoefficients, gamma: f64, beta: f64) -> f64 {
    let n = coeffs.n_qubits;
    let h: Vec<f64> = (0..n).map(|p| coeffs.field(p)).collect();
    let j = |p: usize, q: usize| coeffs.coupling(p, q);
    let c = |x: f64| (2.0 * gamma * x).cos();
    let s2b = (2.0 * beta).sin();
    let s4b = (4.0 * beta).sin();

    let mut energy = coeffs.constant();
    for u in 0..n {
        if h[u] == 0.0 {
            continue;
        }
        let prod: f64 = (0..n).filter(|&w| w != u).map(|w| c(j(u, w))).product();
        energy += h[u] * s2b * (2.0 * gamma * h[u]).sin() * prod;
    }
    for u in 0..n {
        for v in u + 1..n {
            let juv = j(u, v);
            if juv == 0.0 {
                continue;
            }
            let others = || (0..n).filter(move |&w| w != u && w != v);
            let pu: f64 = others().map(|w| c(j(u, w))).product();
            let pv: f64 = others().map(|w| c(j(v, w))).product();
            let plus: f64 = others().map(|w| c(j(u, w) + j(v, w))).product();
            let minus: f64 = others().map(|w| c(j(u, w) - j(v, w))).product();
            let zz = 0.5 * s4b * (2.0 * gamma * juv).sin() * (c(h[u]) * pu + c(h[v]) * pv)
                - 0.5 * s2b * s2b * (c(h[u] + h[v]) * plus - c(h[u] - h[v]) * minus);
            energy += juv * zz;
        }
    }
    energy
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaOptimum {
    pub gamma: f64,
    pub expectation: f64,
}

/// Minimizes the QAOA energy over `γ ∈ [0, 2π)`: a uniform grid, then
/// golden-section refinement within one grid step of the best point. The
/// refined point is kept only if it strictly improves on the grid, so the
/// result never exceeds the `γ = 0` (mean energy) value.
pub fn optimize_gamma(h: &DiagonalHamiltonian, grid_points: usize, tolerance: f64) -> Result<GammaOptimum> {
    if grid_points < 8 {
        return Err(Error::InvalidArgument(format!("at least 8 grid points required, got {grid_points}")));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let mut state = StateVector::uniform(h.encoding().n_qubits())?;
    let mut energy = |gamma: f64| {
        state.reset_uniform();
        state.apply_phase(h, gamma);
        state.apply_mixer(gamma);
        expectation(&state, h)
    };

    // rounding noise must not count as an improvement
    let improves = |e: f64, best: f64| e < best - 1e-12 * best.abs().max(1.0);
    let step = TAU / grid_points as f64;
    let mut best = GammaOptimum { gamma: 0.0, expectation: energy(0.0) };
    for i in 1..grid_points {
        let gamma = step * i as f64;
        let e = energy(gamma);
        if improves(e, best.expectation) {
            best = GammaOptimum { gamma, expectation: e };
        }
    }

    let refined = golden_section(&mut energy, best.gamma - step, best.gamma + step, tolerance);
    if improves(refined.expectation, best.expectation) {
        best = GammaOptimum { gamma: refined.gamma.rem_euclid(TAU), expectation: refined.expectation };
    }
    Ok(best)
}

fn golden_section(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> GammaOptimum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        GammaOptimum { gamma: x1, expectation: f1 }
    } else {
        GammaOptimum { gamma: x2, expectation: f2 }
    }
}

/// Inverse-CDF sampler over the measurement distribution of a state.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
    encoding: Encoding,
}

impl Sampler {
    pub fn new(state: &StateVector, encoding: &Encoding) -> Result<Self> {
        if encoding.n_qubits() != state.n_qubits {
            return Err(Error::DimensionMismatch { expected: encoding.n_qubits(), got: state.n_qubits });
        }
        let cdf = state
            .amps
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a.norm_sqr();
                Some(*acc)
            })
            .collect();
        Ok(Sampler { cdf, encoding: *encoding })
    }

    pub fn draw_index<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cdf.last().expect("nonempty state");
        let u = rng.gen::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as u64
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> CoefficientVector {
        self.encoding
            .decode(self.draw_index(rng))
            .expect("sampled index lies in the register")
    }
}

/// Draws `shots` measurement outcomes and decodes them.
pub fn sample<R: Rng + ?Sized>(
    state: &StateVector,
    encoding: &Encoding,
    rng: &mut R,
    shots: usize,
) -> Result<Vec<CoefficientVector>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let sampler = Sampler::new(state, encoding)?;
    Ok((0..shots).map(|_| sampler.draw(rng)).collect())
}
