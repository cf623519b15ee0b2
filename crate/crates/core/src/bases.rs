//! Measurement bases for a single d-level register.
//!
//! Four kinds are supported: the canonical basis, the Fourier basis, the
//! quadratic-phase family (d bases for odd prime d, pairwise unbiased with
//! constant cross-overlap modulus 1/sqrt(d)), and the near-flat family
//! (d bases for any d >= 2, built by tagging the Fourier basis with a phase
//! on the j = 0 component; cross overlaps vary with the labels).
//!
//! Family bases carry labels 0..d-1. In both families label 0 with row
//! phase 0 is exactly the Fourier basis. Cross overlaps inside each family
//! admit closed forms, exposed by [`analytic_overlap`] and verified against
//! numeric inner products in the tests.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DimensionReason, Error, Result};
use crate::qmath::StateVector;

/// Which measurement basis (or family) a label refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Computational basis |0>, ..., |d-1>.
    Canonical,
    /// Discrete Fourier transform of the canonical basis.
    Fourier,
    /// Mutually unbiased quadratic-phase family (odd prime d).
    Mub,
    /// Mutually biased near-flat family (any d >= 2).
    Mbb,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisKind::Canonical => "canonical",
            BasisKind::Fourier => "fourier",
            BasisKind::Mub => "mub",
            BasisKind::Mbb => "mbb",
        };
        f.write_str(s)
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(BasisKind::Canonical),
            "fourier" => Ok(BasisKind::Fourier),
            "mub" => Ok(BasisKind::Mub),
            "mbb" => Ok(BasisKind::Mbb),
            other => Err(Error::InvalidConfig(format!("unknown basis kind {other:?}"))),
        }
    }
}

/// One concrete basis: a kind, a dimension, and a family label.
///
/// For `Canonical` and `Fourier` the label is always 0; the constructor
/// coerces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub d: usize,
    pub basis: usize,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, d: usize, basis: usize) -> Result<Self> {
        validate_dimension(d, kind)?;
        let basis = match kind {
            BasisKind::Canonical | BasisKind::Fourier => 0,
            _ => {
                if basis >= d {
                    return Err(Error::LabelOutOfRange { label: basis, d });
                }
                basis
            }
        };
        Ok(Self { kind, d, basis })
    }
}

/// Checks that dimension `d` supports basis kind `kind`.
///
/// The quadratic-phase construction needs every nonzero residue invertible
/// and the squaring map well behaved, so it is restricted to odd primes.
/// d = 2 is rejected as even, other composites (even or odd) as composite,
/// and odd prime powers with their own reason since a Galois-field variant
/// exists but is not built here. Other kinds accept any d >= 2.
pub fn validate_dimension(d: usize, kind: BasisKind) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if kind != BasisKind::Mub {
        return Ok(());
    }
    if d == 2 {
        return Err(Error::InvalidDimension {
            d,
            kind,
            reason: DimensionReason::Even,
        });
    }
    if is_odd_prime(d) {
        return Ok(());
    }
    let reason = if odd_prime_power_base(d).is_some() {
        DimensionReason::PrimePowerUnsupported
    } else {
        DimensionReason::Composite
    };
    Err(Error::InvalidDimension { d, kind, reason })
}

fn is_odd_prime(d: usize) -> bool {
    if d < 3 || d % 2 == 0 {
        return false;
    }
    let mut f = 3;
    while f * f <= d {
        if d % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// If `d = p^k` for an odd prime p and k >= 2, returns p.
fn odd_prime_power_base(d: usize) -> Option<usize> {
    let mut p = 3;
    while p * p <= d {
        if d % p == 0 {
            let mut m = d;
            while m % p == 0 {
                m /= p;
            }
            return (m == 1).then_some(p);
        }
        p += 2;
    }
    None
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse mod an odd prime p (Fermat).
fn mod_inv(a: usize, p: usize) -> usize {
    debug_assert!(a % p != 0);
    mod_pow(a as u64 % p as u64, p as u64 - 2, p as u64) as usize
}

/// Legendre symbol of a mod odd prime p, via the Euler criterion: +1 for
/// nonzero squares, -1 for non-squares, 0 for multiples of p.
fn legendre(a: usize, p: usize) -> i32 {
    let r = mod_pow(a as u64 % p as u64, (p as u64 - 1) / 2, p as u64);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        -1
    }
}

/// The d-th roots of unity indexed by exponent, `table[k] = exp(2 pi i k/d)`.
///
/// Phase exponents elsewhere are reduced mod d and looked up here, so equal
/// exponents always produce bit-identical amplitudes.
pub fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect()
}

/// Canonical unit vector |index> in dimension d.
pub fn canonical_vector(d: usize, index: usize) -> Result<StateVector> {
    if index >= d {
        return Err(Error::LabelOutOfRange { label: index, d });
    }
    StateVector::basis_state(&[d], &[index])
}

/// Fourier vector with row phase `index`: amplitudes zeta^(index j)/sqrt(d).
pub fn fourier_vector(d: usize, index: usize) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if index >= d {
        return Err(Error::LabelOutOfRange { label: index, d });
    }
    let roots = roots_of_unity(d);
    let scale = 1.0 / (d as f64).sqrt();
    let amps = (0..d).map(|j| roots[index * j % d] * scale).collect();
    StateVector::new(vec![d], amps)
}

/// Quadratic-phase vector: amplitudes zeta^(basis j^2 + index j)/sqrt(d).
///
/// `basis` 0 reduces to the Fourier basis (the quadratic term vanishes in
/// the exponent only when its coefficient is 0 mod d, and the family labels
/// run over residues, so the Fourier member sits at label 0).
pub fn mub_vector(d: usize, basis: usize, index: usize) -> Result<StateVector> {
    validate_dimension(d, BasisKind::Mub)?;
    if basis >= d {
        return Err(Error::LabelOutOfRange { label: basis, d });
    }
    if index >= d {
        return Err(Error::LabelOutOfRange { label: index, d });
    }
    let roots = roots_of_unity(d);
    let scale = 1.0 / (d as f64).sqrt();
    let amps = (0..d)
        .map(|j| roots[(basis * j * j + index * j) % d] * scale)
        .collect();
    StateVector::new(vec![d], amps)
}

/// Near-flat vector: the Fourier vector with its j = 0 amplitude re-phased,
/// amplitude zeta^basis/sqrt(d) at j = 0 and zeta^(index j)/sqrt(d) at j > 0.
pub fn mbb_vector(d: usize, basis: usize, index: usize) -> Result<StateVector> {
    validate_dimension(d, BasisKind::Mbb)?;
    if basis >= d {
        return Err(Error::LabelOutOfRange { label: basis, d });
    }
    if index >= d {
        return Err(Error::LabelOutOfRange { label: index, d });
    }
    let roots = roots_of_unity(d);
    let scale = 1.0 / (d as f64).sqrt();
    let amps = (0..d)
        .map(|j| {
            if j == 0 {
                roots[basis] * scale
            } else {
                roots[index * j % d] * scale
            }
        })
        .collect();
    StateVector::new(vec![d], amps)
}

/// Vector `index` of the basis described by `spec`.
pub fn basis_vector(spec: &BasisSpec, index: usize) -> Result<StateVector> {
    match spec.kind {
        BasisKind::Canonical => canonical_vector(spec.d, index),
        BasisKind::Fourier => fourier_vector(spec.d, index),
        BasisKind::Mub => mub_vector(spec.d, spec.basis, index),
        BasisKind::Mbb => mbb_vector(spec.d, spec.basis, index),
    }
}

/// Closed-form inner product <a_ia | b_ib> between two same-kind, same-d
/// family members, including phase.
///
/// Within one basis this is the Kronecker delta. Across quadratic-phase
/// bases the Gauss sum evaluates to a unit phase times 1/sqrt(d); across
/// near-flat bases the overlap is delta_(ia,ib) + (zeta^(Pb-Pa) - 1)/d.
pub fn analytic_overlap(
    a: &BasisSpec,
    index_a: usize,
    b: &BasisSpec,
    index_b: usize,
) -> Result<Complex64> {
    if a.kind != b.kind || a.d != b.d {
        return Err(Error::InvalidConfig(format!(
            "overlap of {}(d={}) against {}(d={}) has no closed form here",
            a.kind, a.d, b.kind, b.d
        )));
    }
    let d = a.d;
    if index_a >= d {
        return Err(Error::LabelOutOfRange { label: index_a, d });
    }
    if index_b >= d {
        return Err(Error::LabelOutOfRange { label: index_b, d });
    }
    let delta_kron = |eq: bool| {
        if eq {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    match a.kind {
        BasisKind::Canonical | BasisKind::Fourier => Ok(delta_kron(index_a == index_b)),
        BasisKind::Mub => {
            validate_dimension(d, BasisKind::Mub)?;
            if a.basis == b.basis {
                return Ok(delta_kron(index_a == index_b));
            }
            // Sum_j zeta^(Delta j^2 + b j)/d with Delta = Pb - Pa, b = pb - pa.
            // Completing the square gives the quadratic Gauss sum
            //   zeta^(-b^2/(4 Delta)) (Delta|d) eps_d sqrt(d),
            // with eps_d = 1 for d = 1 mod 4 and i for d = 3 mod 4.
            let delta = (d + b.basis - a.basis) % d;
            let bdiff = (d + index_b - index_a) % d;
            let inv4delta = mod_inv(4 * delta % d, d);
            let exponent = (d - bdiff * bdiff % d * inv4delta % d) % d;
            let roots = roots_of_unity(d);
            let eps = if d % 4 == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 1.0)
            };
            let sign = legendre(delta, d) as f64;
            Ok(roots[exponent] * eps * sign / (d as f64).sqrt())
        }
        BasisKind::Mbb => {
            // Only the j = 0 component differs between bases, so
            // <a|b> = delta(pa, pb) + (zeta^(Pb-Pa) - 1)/d exactly, any d.
            let roots = roots_of_unity(d);
            let phase = roots[(d + b.basis - a.basis) % d];
            Ok(delta_kron(index_a == index_b) + (phase - Complex64::new(1.0, 0.0)) / d as f64)
        }
    }
}

/// A full family of bases of one kind: d bases for the two families, a
/// single basis for canonical/Fourier.
#[derive(Clone, Debug)]
pub struct BasisFamily {
    kind: BasisKind,
    d: usize,
    bases: Vec<Vec<StateVector>>,
}

impl BasisFamily {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, label: usize) -> Result<&[StateVector]> {
        self.bases
            .get(label)
            .map(Vec::as_slice)
            .ok_or(Error::LabelOutOfRange {
                label,
                d: self.bases.len(),
            })
    }

    pub fn vector(&self, label: usize, index: usize) -> Result<&StateVector> {
        self.basis(label)?
            .get(index)
            .ok_or(Error::LabelOutOfRange {
                label: index,
                d: self.d,
            })
    }

    pub fn spec(&self, label: usize) -> Result<BasisSpec> {
        if label >= self.bases.len() {
            return Err(Error::LabelOutOfRange {
                label,
                d: self.bases.len(),
            });
        }
        BasisSpec::new(self.kind, self.d, label)
    }
}

/// Builds the full family for `kind` in dimension `d`.
pub fn basis_family(kind: BasisKind, d: usize) -> Result<BasisFamily> {
    validate_dimension(d, kind)?;
    let labels = match kind {
        BasisKind::Canonical | BasisKind::Fourier => 1,
        BasisKind::Mub | BasisKind::Mbb => d,
    };
    let mut bases = Vec::with_capacity(labels);
    for label in 0..labels {
        let spec = BasisSpec::new(kind, d, label)?;
        let basis = (0..d)
            .map(|index| basis_vector(&spec, index))
            .collect::<Result<Vec<_>>>()?;
        bases.push(basis);
    }
    Ok(BasisFamily { kind, d, bases })
}
