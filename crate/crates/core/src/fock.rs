//! Truncated Fock-space oracle.
//!
//! States are built from first principles: coherent amplitudes are expanded
//! in the number basis, beam splitters act exactly on coherent labels, and
//! every expectation value, eigenvalue, and Fisher information is obtained by
//! summing over the truncated basis. None of the closed forms in
//! [`crate::ecs`], [`crate::loss`] or [`crate::intensity`] are used here
//! apart from the coherent-state inner product for the environment trace.
//!
//! A density matrix of this model has rank at most two, so it is kept as
//! `ρ = Σ_ab W_ab |v_a⟩⟨v_b|` over the materialized branch vectors `v_a`,
//! and densified only on request.

use std::f64::consts::FRAC_1_SQRT_2;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ecs::{coherent_overlap, EcsParams, PhotonStatistics};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, HermitianEigen};
use crate::loss::LossChannel;

/// Target truncation tail (discarded probability weight).
pub const TAIL_TOL: f64 = 1e-12;
pub const MIN_CUTOFF: usize = 8;
pub const MAX_CUTOFF: usize = 160;
/// Largest two-mode dimension [`DensityMatrix::to_dense`] will build.
pub const MAX_DENSE_DIM: usize = 4096;
/// Eigenvalue-sum threshold below which SLD pairs are skipped.
pub const SLD_EPS: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Smallest cutoff `d` with Poisson tail `P(n ≥ d) < TAIL_TOL` for the given mean,
/// clamped to `[MIN_CUTOFF, MAX_CUTOFF]`.
pub fn poisson_cutoff(mean: f64) -> usize {
    if mean <= 0.0 {
        return MIN_CUTOFF;
    }
    // pmf by recurrence, tail = 1 − cdf summed from the top to avoid cancellation
    let len = MAX_CUTOFF + 1;
    let mut pmf = Vec::with_capacity(len);
    let mut p = (-mean).exp();
    pmf.push(p);
    for n in 1..len {
        p *= mean / n as f64;
        pmf.push(p);
    }
    // tail beyond what we tabulate: bounded by the last term's geometric continuation
    let last = pmf[len - 1];
    let ratio = mean / len as f64;
    let mut tail = if ratio < 1.0 {
        last * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let mut best = MAX_CUTOFF;
    for d in (1..len).rev() {
        tail += pmf[d];
        if tail < TAIL_TOL {
            best = d;
        } else {
            break;
        }
    }
    best.clamp(MIN_CUTOFF, MAX_CUTOFF)
}

/// Cutoff from the tail rule for the largest of the given coherent amplitudes.
pub fn tail_rule_cutoff(amplitudes: &[Complex64]) -> usize {
    let mean = amplitudes.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    poisson_cutoff(mean)
}

/// Single-mode expansion `e^{−|a|²/2} aⁿ/√(n!)`, `n < cutoff`.
pub fn coherent_fock(amp: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    if cutoff == 0 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    let mut out = Vec::with_capacity(cutoff);
    let mut c = Complex64::new((-0.5 * amp.norm_sqr()).exp(), 0.0);
    out.push(c);
    for n in 1..cutoff {
        c = c * amp / (n as f64).sqrt();
        out.push(c);
    }
    let kept: f64 = out.iter().map(|z| z.norm_sqr()).sum();
    let tail = 1.0 - kept;
    if tail > TAIL_TOL {
        warn!("coherent amplitude {amp} truncated at {cutoff} levels discards {tail:.3e} of the weight");
    }
    Ok(out)
}

/// Two-mode vector over occupations `(n₁, n₂)`, stored row-major in `n₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            cutoff,
            amps: vec![ZERO; cutoff * cutoff],
        }
    }

    /// `|a⟩ ⊗ |b⟩` from two single-mode arrays of equal length.
    pub fn product(mode1: &[Complex64], mode2: &[Complex64]) -> Self {
        assert_eq!(mode1.len(), mode2.len());
        let cutoff = mode1.len();
        let mut amps = Vec::with_capacity(cutoff * cutoff);
        for &a in mode1 {
            for &b in mode2 {
                amps.push(a * b);
            }
        }
        Self { cutoff, amps }
    }

    /// Product coherent state `|b₁⟩|b₂⟩`.
    pub fn coherent(b1: Complex64, b2: Complex64, cutoff: usize) -> Result<Self> {
        Ok(Self::product(
            &coherent_fock(b1, cutoff)?,
            &coherent_fock(b2, cutoff)?,
        ))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of `|n₁, n₂⟩`.
    pub fn get(&self, n1: usize, n2: usize) -> Complex64 {
        self.amps[n1 * self.cutoff + n2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    pub fn add_scaled(&mut self, scale: Complex64, other: &Self) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += scale * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// `⟨self| f(n₁, n₂) |other⟩` for an operator diagonal in the number basis.
    pub fn diagonal_element<F: Fn(usize, usize) -> f64>(&self, other: &Self, f: F) -> Complex64 {
        let d = self.cutoff;
        let mut acc = ZERO;
        for n1 in 0..d {
            for n2 in 0..d {
                let i = n1 * d + n2;
                acc += self.amps[i].conj() * other.amps[i] * f(n1, n2);
            }
        }
        acc
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Multiplies by the mode-2 occupation `n₂`.
fn apply_n2(cutoff: usize, psi: &[Complex64]) -> Vec<Complex64> {
    psi.iter()
        .enumerate()
        .map(|(i, z)| z * (i % cutoff) as f64)
        .collect()
}

/// Normalized ECS vector `N(|α⟩|kα⟩ + |−α⟩|−kα⟩)` and its numerically found `N`.
pub fn ecs_vector(params: &EcsParams, cutoff: usize) -> Result<(FockVector, f64)> {
    let a = params.alpha();
    let b = a * params.k();
    let mut v = FockVector::coherent(a, b, cutoff)?;
    v.add_scaled(
        Complex64::new(1.0, 0.0),
        &FockVector::coherent(-a, -b, cutoff)?,
    );
    let n = v.norm_sqr().sqrt().recip();
    v.scale(n);
    Ok((v, n))
}

/// Default cutoff for the input state.
pub fn ecs_cutoff(params: &EcsParams) -> usize {
    let a = params.alpha();
    tail_rule_cutoff(&[a, a * params.k()])
}

/// Photon-number moments of the input state from its truncated expansion.
pub fn photon_statistics_numeric(params: &EcsParams, cutoff: usize) -> Result<PhotonStatistics> {
    let (v, _) = ecs_vector(params, cutoff)?;
    let m = |f: &dyn Fn(f64, f64) -> f64| v.diagonal_element(&v, |a, b| f(a as f64, b as f64)).re;
    let n1 = m(&|a, _| a);
    let n2 = m(&|_, b| b);
    let n_total = m(&|a, b| a + b);
    let n_total_sq = m(&|a, b| (a + b) * (a + b));
    Ok(PhotonStatistics {
        n1,
        n2,
        n_total,
        n1_sq: m(&|a, _| a * a),
        n2_sq: m(&|_, b| b * b),
        n_total_sq,
        var_total: m(&|a, b| {
            let d = a + b - n_total;
            d * d
        }),
    })
}

/// Rank-limited density matrix on the two sensor modes.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    cutoff: usize,
    /// Coherent labels `(mode 1, mode 2)` of each branch.
    labels: Vec<(Complex64, Complex64)>,
    vectors: Vec<FockVector>,
    /// `ρ = Σ_ab weights[(a, b)] |v_a⟩⟨v_b|`
    weights: DMatrix<Complex64>,
}

/// Eigenpairs of a density matrix restricted to its range, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct RangeEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl DensityMatrix {
    /// Mixture of coherent-product branches with the given weight matrix.
    pub fn from_branches(
        labels: Vec<(Complex64, Complex64)>,
        weights: DMatrix<Complex64>,
        cutoff: usize,
    ) -> Result<Self> {
        assert_eq!(labels.len(), weights.nrows());
        assert!(weights.is_square());
        let vectors = labels
            .iter()
            .map(|&(b1, b2)| FockVector::coherent(b1, b2, cutoff))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            cutoff,
            labels,
            vectors,
            weights,
        })
    }

    /// `|b₁⟩⟨b₁| ⊗ |b₂⟩⟨b₂|`
    pub fn coherent_product(b1: Complex64, b2: Complex64, cutoff: usize) -> Result<Self> {
        Self::from_branches(
            vec![(b1, b2)],
            DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
            cutoff,
        )
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn labels(&self) -> &[(Complex64, Complex64)] {
        &self.labels
    }

    /// `G[(b, a)] = ⟨v_b|v_a⟩` over the truncated vectors.
    fn gram(&self) -> DMatrix<Complex64> {
        let r = self.vectors.len();
        DMatrix::from_fn(r, r, |b, a| self.vectors[b].inner(&self.vectors[a]))
    }

    /// `ρ|ψ⟩`
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let proj: Vec<Complex64> = self.vectors.iter().map(|v| inner(&v.amps, psi)).collect();
        let mut out = vec![ZERO; psi.len()];
        for (a, v) in self.vectors.iter().enumerate() {
            let coeff: Complex64 = (0..proj.len())
                .map(|b| self.weights[(a, b)] * proj[b])
                .sum();
            if coeff != ZERO {
                for (o, x) in out.iter_mut().zip(&v.amps) {
                    *o += coeff * x;
                }
            }
        }
        out
    }

    /// `Tr ρ`, summed over the diagonal of the truncated basis.
    pub fn trace(&self) -> f64 {
        let mut acc = ZERO;
        for i in 0..self.dim() {
            for (a, va) in self.vectors.iter().enumerate() {
                for (b, vb) in self.vectors.iter().enumerate() {
                    acc += self.weights[(a, b)] * va.amps[i] * vb.amps[i].conj();
                }
            }
        }
        acc.re
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        let g = self.gram();
        let wg = &self.weights * g;
        (&wg * &wg).trace().re
    }

    /// `Tr(ρ f(n₁, n₂))` for an observable diagonal in the number basis.
    pub fn expectation_diagonal<F: Fn(usize, usize) -> f64 + Copy>(&self, f: F) -> f64 {
        let mut acc = ZERO;
        for (a, va) in self.vectors.iter().enumerate() {
            for (b, vb) in self.vectors.iter().enumerate() {
                acc += self.weights[(a, b)] * vb.diagonal_element(va, f);
            }
        }
        acc.re
    }

    /// Dense `dim × dim` matrix.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        if n > MAX_DENSE_DIM {
            return Err(Error::TooLarge(n, MAX_DENSE_DIM));
        }
        let mut m = DMatrix::zeros(n, n);
        for (a, va) in self.vectors.iter().enumerate() {
            for (b, vb) in self.vectors.iter().enumerate() {
                let w = self.weights[(a, b)];
                if w == ZERO {
                    continue;
                }
                for i in 0..n {
                    let wi = w * va.amps[i];
                    for j in 0..n {
                        m[(i, j)] += wi * vb.amps[j].conj();
                    }
                }
            }
        }
        Ok(m)
    }

    /// Full dense eigendecomposition (ascending).
    pub fn dense_eigen(&self) -> Result<HermitianEigen> {
        Ok(hermitian_eigen(&self.to_dense()?))
    }

    /// Eigenpairs on the span of the branch vectors.
    ///
    /// The branches are orthonormalized (modified Gram-Schmidt, nearly
    /// dependent directions dropped), `ρ` is projected onto that basis, and
    /// the small Hermitian block is diagonalized densely.
    pub fn range_eigen(&self) -> RangeEigen {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in &self.vectors {
            let mut w = v.amps.clone();
            let orig = norm_sqr(&w).sqrt();
            for _ in 0..2 {
                for q in &basis {
                    let p = inner(q, &w);
                    for (x, y) in w.iter_mut().zip(q) {
                        *x -= p * y;
                    }
                }
            }
            let nrm = norm_sqr(&w).sqrt();
            if orig > 0.0 && nrm > 1e-10 * orig {
                for x in &mut w {
                    *x /= nrm;
                }
                basis.push(w);
            }
        }

        let r = basis.len();
        let images: Vec<Vec<Complex64>> = basis.iter().map(|q| self.apply(q)).collect();
        let mut h = DMatrix::from_fn(r, r, |i, j| inner(&basis[i], &images[j]));
        // symmetrize rounding noise
        h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = hermitian_eigen(&h);

        let mut values = Vec::with_capacity(r);
        let mut vectors = Vec::with_capacity(r);
        for col in (0..r).rev() {
            let mut full = vec![ZERO; self.dim()];
            for (i, q) in basis.iter().enumerate() {
                let c = eig.vectors[(i, col)];
                for (f, x) in full.iter_mut().zip(q) {
                    *f += c * x;
                }
            }
            values.push(eig.values[col]);
            vectors.push(full);
        }
        RangeEigen { values, vectors }
    }

    /// Output state of a 50:50 beam splitter `a₁† → (a₁† + i a₂†)/√2`,
    /// `a₂† → (i a₁† + a₂†)/√2`, applied exactly on the coherent labels.
    pub fn after_beam_splitter(&self) -> Result<Self> {
        let i = Complex64::new(0.0, 1.0);
        let labels = self
            .labels
            .iter()
            .map(|&(b1, b2)| ((b1 + i * b2) * FRAC_1_SQRT_2, (i * b1 + b2) * FRAC_1_SQRT_2))
            .collect();
        Self::from_branches(labels, self.weights.clone(), self.cutoff)
    }
}

/// Branch labels of the four-mode state after loss and phase shift:
/// `(sensor₁, sensor₂, env₁, env₂)` for the `+` branch; the `−` branch is the negative.
fn four_mode_labels(params: &EcsParams, channel: &LossChannel, phi: f64) -> [Complex64; 4] {
    let t = channel.transmission().sqrt();
    let r = channel.loss().sqrt();
    let i = Complex64::new(0.0, 1.0);
    let a = params.alpha();
    let ka = a * params.k() * Complex64::from_polar(1.0, phi);
    [a * t, ka * t, i * a * r, i * ka * r]
}

/// Default oracle cutoff for a state, covering both the sensor branches
/// and the modes after the final 50:50 splitter.
pub fn oracle_cutoff(params: &EcsParams, channel: &LossChannel) -> usize {
    let [b1, b2, _, _] = four_mode_labels(params, channel, 0.0);
    let mixed = Complex64::new((b1.norm() + b2.norm()) * FRAC_1_SQRT_2, 0.0);
    tail_rule_cutoff(&[b1, b2, mixed])
}

/// Reduced sensor-mode state after loss and phase shift.
///
/// The environment is traced out through coherent inner products; the sensor
/// branches are materialized in the truncated basis. The pure four-mode
/// state is normalized with untruncated branch overlaps, so `Tr ρ` measures
/// the truncation loss.
pub fn build_density_matrix(
    params: &EcsParams,
    channel: &LossChannel,
    phi: f64,
    cutoff: Option<usize>,
) -> Result<DensityMatrix> {
    let cutoff = cutoff.unwrap_or_else(|| oracle_cutoff(params, channel));
    let [s1, s2, e1, e2] = four_mode_labels(params, channel, phi);
    let sensor = [(s1, s2), (-s1, -s2)];
    let env = [(e1, e2), (-e1, -e2)];

    // ⟨e_b|e_a⟩ and ⟨s_b|s_a⟩
    let env_gram = DMatrix::from_fn(2, 2, |a, b| {
        coherent_overlap(env[b].0, env[a].0) * coherent_overlap(env[b].1, env[a].1)
    });
    let sensor_gram = DMatrix::from_fn(2, 2, |a, b| {
        coherent_overlap(sensor[b].0, sensor[a].0) * coherent_overlap(sensor[b].1, sensor[a].1)
    });
    let norm_sq: Complex64 = env_gram.component_mul(&sensor_gram).sum();
    let weights = env_gram / norm_sq;
    DensityMatrix::from_branches(sensor.to_vec(), weights, cutoff)
}

/// SLD quantum Fisher information for the phase generator `n₂`.
///
/// `∂ρ = i[n₂, ρ]` is formed exactly from the materialized state. The sum
/// `2 Σ |⟨i|∂ρ|j⟩|²/(λᵢ+λⱼ)` over pairs with `λᵢ+λⱼ > SLD_EPS` runs over the
/// numerical range of `ρ`; pairs with one index in the kernel are summed in
/// closed form through `‖∂ρ|i⟩‖²`.
pub fn qfi_numeric<B>(rho_builder: B, phi: f64) -> Result<f64>
where
    B: Fn(f64) -> Result<DensityMatrix>,
{
    let rho = rho_builder(phi)?;
    Ok(qfi_of(&rho))
}

/// [`qfi_numeric`] for an already built state.
pub fn qfi_of(rho: &DensityMatrix) -> f64 {
    let d = rho.cutoff();
    let eig = rho.range_eigen();
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > SLD_EPS)
        .collect();

    // ∂ρ|i⟩ = i(λᵢ n₂|i⟩ − ρ n₂|i⟩)
    let i_unit = Complex64::new(0.0, 1.0);
    let derivs: Vec<Vec<Complex64>> = support
        .iter()
        .map(|&i| {
            let v = &eig.vectors[i];
            let n2v = apply_n2(d, v);
            let rho_n2v = rho.apply(&n2v);
            n2v.iter()
                .zip(&rho_n2v)
                .map(|(a, b)| i_unit * (a * eig.values[i] - b))
                .collect()
        })
        .collect();

    let mut qfi = 0.0;
    for (si, &i) in support.iter().enumerate() {
        let li = eig.values[i];
        let mut in_range = 0.0;
        for &j in &support {
            let lj = eig.values[j];
            let m = inner(&eig.vectors[j], &derivs[si]).norm_sqr();
            in_range += m;
            qfi += 2.0 * m / (li + lj);
        }
        // pairs (i, kernel) and (kernel, i), each weighted 2/λᵢ
        let outside = (norm_sqr(&derivs[si]) - in_range).max(0.0);
        qfi += 4.0 * outside / li;
    }
    qfi
}

/// Reference SLD QFI from a full dense eigendecomposition; small cutoffs only.
pub fn qfi_dense(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.cutoff();
    let dense = rho.to_dense()?;
    let n = dense.nrows();
    let i_unit = Complex64::new(0.0, 1.0);
    let drho = DMatrix::from_fn(n, n, |x, y| {
        i_unit * ((x % d) as f64 - (y % d) as f64) * dense[(x, y)]
    });
    let eig = hermitian_eigen(&dense);
    let rotated = eig.vectors.adjoint() * drho * &eig.vectors;
    let mut qfi = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = eig.values[i] + eig.values[j];
            if s > SLD_EPS {
                qfi += 2.0 * rotated[(i, j)].norm_sqr() / s;
            }
        }
    }
    Ok(qfi)
}

/// `(⟨S_z⟩, ⟨S_z²⟩)` with `S_z = (n_a − n_b)/2` measured after the final 50:50 splitter.
///
/// `rho` is the sensor state before that splitter, already carrying the phase.
pub fn observable_moments_numeric(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let out = rho.after_beam_splitter()?;
    let mean = out.expectation_diagonal(|a, b| 0.5 * (a as f64 - b as f64));
    let second = out.expectation_diagonal(|a, b| {
        let sz = 0.5 * (a as f64 - b as f64);
        sz * sz
    });
    Ok((mean, second))
}
