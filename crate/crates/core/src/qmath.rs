//! Dense state vectors over ordered d-level registers, plus the handful of
//! linear-algebra operations the protocol needs: tensor products, inner
//! products, partial projections, and seeded projective measurement.
//!
//! Amplitudes are stored flat in Kronecker order with register 0 most
//! significant, so `tensor(&[a, b])` lays out `a` outermost. All sampling is
//! driven by [`SeededRng`], a counter-mode generator that hands out
//! independent streams for the same seed; identical (seed, stream) pairs
//! reproduce identical draw sequences bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Tolerance for structural invariants (normalization, orthonormality).
pub const INVARIANT_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities evaluated at double precision.
pub const IDENTITY_TOL: f64 = 1e-12;

/// A pure state over an ordered list of registers.
///
/// `dims` lists the level count of each register (each at least 2); `amps`
/// holds `dims.iter().product()` complex amplitudes. A zero-register state
/// (`dims` empty, one amplitude) is permitted and acts as a scalar, which is
/// what a full contraction returns.
#[derive(Clone, Debug)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from explicit amplitudes. Rejects non-finite entries and
    /// length mismatches; does not require normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::DimensionTooSmall(d));
        }
        let expected: usize = dims.iter().product();
        if amps.len() != expected {
            return Err(Error::AmplitudeCount {
                got: amps.len(),
                expected,
            });
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        Ok(Self { dims, amps })
    }

    /// The canonical unit vector |labels...> over the given registers.
    pub fn basis_state(dims: &[usize], labels: &[usize]) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                left: dims.to_vec(),
                right: vec![labels.len()],
            });
        }
        for (&l, &d) in labels.iter().zip(dims) {
            if l >= d {
                return Err(Error::LabelOutOfRange { label: l, d });
            }
        }
        let len: usize = dims.iter().product();
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[flat_index(dims, labels)] = Complex64::new(1.0, 0.0);
        Self::new(dims.to_vec(), amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_registers(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, flat: usize) -> Complex64 {
        self.amps[flat]
    }

    /// Flat amplitude index of a per-register label tuple.
    pub fn index_of(&self, labels: &[usize]) -> usize {
        flat_index(&self.dims, labels)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// True when the squared norm is within [`INVARIANT_TOL`] of one.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < INVARIANT_TOL
    }

    /// Returns the unit-norm rescaling of this state.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(Error::ZeroNormState);
        }
        let amps = self.amps.iter().map(|a| a / n).collect();
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Entrywise complex conjugate.
    pub fn conjugated(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }
}

pub(crate) fn flat_index(dims: &[usize], labels: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), labels.len());
    labels
        .iter()
        .zip(dims)
        .fold(0, |acc, (&l, &d)| acc * d + l)
}

/// Kronecker product of the given states, in register order.
pub fn tensor(parts: &[StateVector]) -> Result<StateVector> {
    if parts.is_empty() {
        return Err(Error::EmptyInput("tensor of no states"));
    }
    let mut dims = Vec::new();
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for part in parts {
        dims.extend_from_slice(&part.dims);
        let mut next = Vec::with_capacity(amps.len() * part.amps.len());
        for a in &amps {
            for b in &part.amps {
                next.push(a * b);
            }
        }
        amps = next;
    }
    StateVector::new(dims, amps)
}

/// Inner product <bra|ket> = sum conj(bra_i) ket_i over states of equal shape.
pub fn inner(bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
    if bra.dims != ket.dims {
        return Err(Error::DimensionMismatch {
            left: bra.dims.clone(),
            right: ket.dims.clone(),
        });
    }
    Ok(bra
        .amps
        .iter()
        .zip(&ket.amps)
        .map(|(b, k)| b.conj() * k)
        .sum())
}

/// Contracts single-register bras against the given registers of `state` and
/// returns the (generally unnormalized) residual on the remaining registers,
/// in ascending register order. The squared norm of the residual is the joint
/// outcome probability of the projections.
pub fn partial_inner(bras: &[(usize, &StateVector)], state: &StateVector) -> Result<StateVector> {
    let n = state.num_registers();
    let mut contracted: Vec<Option<&StateVector>> = vec![None; n];
    for &(register, bra) in bras {
        if register >= n {
            return Err(Error::RegisterOutOfRange {
                register,
                registers: n,
            });
        }
        if contracted[register].is_some() {
            return Err(Error::DuplicateRegister(register));
        }
        if bra.dims.len() != 1 || bra.dims[0] != state.dims[register] {
            return Err(Error::DimensionMismatch {
                left: bra.dims.clone(),
                right: vec![state.dims[register]],
            });
        }
        contracted[register] = Some(bra);
    }

    let residual_dims: Vec<usize> = (0..n)
        .filter(|&r| contracted[r].is_none())
        .map(|r| state.dims[r])
        .collect();
    let residual_len: usize = residual_dims.iter().product();
    let mut residual = vec![Complex64::new(0.0, 0.0); residual_len];

    let mut labels = vec![0usize; n];
    for (flat, amp) in state.amps.iter().enumerate() {
        let mut rem = flat;
        for r in (0..n).rev() {
            labels[r] = rem % state.dims[r];
            rem /= state.dims[r];
        }
        let mut coef = *amp;
        let mut res_idx = 0usize;
        for r in 0..n {
            match contracted[r] {
                Some(bra) => coef *= bra.amps[labels[r]].conj(),
                None => res_idx = res_idx * state.dims[r] + labels[r],
            }
        }
        residual[res_idx] += coef;
    }
    StateVector::new(residual_dims, residual)
}

/// Checks that `basis` is a complete orthonormal basis for a register of
/// dimension `d`; returns the worst Gram deviation on success.
pub fn basis_gram_deviation(basis: &[StateVector], d: usize) -> Result<f64> {
    if basis.len() != d {
        return Err(Error::NonOrthonormalBasis {
            deviation: f64::INFINITY,
        });
    }
    let mut worst = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        if u.dims.len() != 1 || u.dims[0] != d {
            return Err(Error::DimensionMismatch {
                left: u.dims.clone(),
                right: vec![d],
            });
        }
        for (j, v) in basis.iter().enumerate().skip(i) {
            let g = inner(u, v)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// Projective measurement of one register in the given orthonormal basis.
///
/// Outcome k is drawn with the Born probability of `basis[k]` by inverse-CDF
/// sampling in ascending outcome order; the returned state is the normalized
/// residual re-tensored with the measured basis vector at `register`.
pub fn born_measure(
    state: &StateVector,
    register: usize,
    basis: &[StateVector],
    rng: &mut SeededRng,
) -> Result<(usize, StateVector)> {
    let n = state.num_registers();
    if register >= n {
        return Err(Error::RegisterOutOfRange {
            register,
            registers: n,
        });
    }
    let d = state.dims[register];
    let deviation = basis_gram_deviation(basis, d)?;
    if deviation > INVARIANT_TOL {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    let total = state.norm_sqr();
    if total < 1e-12 {
        return Err(Error::ZeroNormState);
    }

    let mut residuals = Vec::with_capacity(d);
    let mut probs = Vec::with_capacity(d);
    for vector in basis {
        let residual = partial_inner(&[(register, vector)], state)?;
        probs.push(residual.norm_sqr());
        residuals.push(residual);
    }

    // Inverse-CDF walk in ascending outcome order; the draw is scaled by the
    // state norm so slightly unnormalized inputs still sample correctly.
    let u = rng.uniform() * total;
    let mut outcome = d - 1;
    let mut cum = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            outcome = k;
            break;
        }
    }

    let residual = residuals[outcome].normalized()?;
    let measured = &basis[outcome];

    // Re-tensor the measured vector back into place.
    let mut amps = vec![Complex64::new(0.0, 0.0); state.len()];
    let mut labels = vec![0usize; n];
    for (flat, slot) in amps.iter_mut().enumerate() {
        let mut rem = flat;
        for r in (0..n).rev() {
            labels[r] = rem % state.dims[r];
            rem /= state.dims[r];
        }
        let mut res_idx = 0usize;
        for r in 0..n {
            if r != register {
                res_idx = res_idx * state.dims[r] + labels[r];
            }
        }
        *slot = measured.amps[labels[register]] * residual.amps[res_idx];
    }
    let collapsed = StateVector::new(state.dims.clone(), amps)?;
    Ok((outcome, collapsed))
}

/// Born probabilities of every outcome of measuring `register` in `basis`,
/// without sampling. Useful for exhaustive distribution checks.
pub fn outcome_distribution(
    state: &StateVector,
    register: usize,
    basis: &[StateVector],
) -> Result<Vec<f64>> {
    let d = state
        .dims
        .get(register)
        .copied()
        .ok_or(Error::RegisterOutOfRange {
            register,
            registers: state.num_registers(),
        })?;
    let deviation = basis_gram_deviation(basis, d)?;
    if deviation > INVARIANT_TOL {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    basis
        .iter()
        .map(|v| partial_inner(&[(register, v)], state).map(|r| r.norm_sqr()))
        .collect()
}

/// Deterministic counter-mode generator with per-stream splitting.
///
/// The same (seed, stream) pair always reproduces the same draw sequence, and
/// distinct streams of one seed are independent, so per-round streams can be
/// consumed in parallel without losing reproducibility.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// A fresh generator on the same seed but a different stream.
    pub fn substream(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw from [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform draw from 0..n.
    pub fn pick(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}
