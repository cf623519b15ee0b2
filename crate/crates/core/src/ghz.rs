//! The shared n-party GHZ resource state and the structure of the states it
//! collapses to under per-party family measurements.
//!
//! A round is *consistent* when the basis labels sum to 0 mod d and the
//! outcome labels sum to 0 mod d. Consistent collapse products have a fixed
//! geometry relative to the GHZ state: every diagonal canonical component is
//! the same real positive number, every non-diagonal canonical overlap has
//! the same modulus, and all diagonal Fourier rows other than the flat one
//! are orthogonal to the product. [`verify_uniqueness`] measures all of this
//! exhaustively and reports the extremes.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{self, BasisKind, BasisSpec};
use crate::error::{Error, Result};
use crate::qmath::{tensor, StateVector, INVARIANT_TOL};

/// Hard cap on simulated joint dimension d^n.
pub const STATE_SIZE_CAP: usize = 1_000_000;

/// Dimension and party count of a GHZ resource state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GhzSpec {
    pub d: usize,
    pub n: usize,
}

impl GhzSpec {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 parties, got {n}"
            )));
        }
        let mut size = 1usize;
        for _ in 0..n {
            size = size
                .checked_mul(d)
                .filter(|&s| s <= STATE_SIZE_CAP)
                .ok_or(Error::StateTooLarge {
                    d,
                    n,
                    cap: STATE_SIZE_CAP,
                })?;
        }
        Ok(Self { d, n })
    }

    pub fn joint_len(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.d; self.n]
    }

    /// Flat index of the diagonal string |j j ... j>.
    pub fn diagonal_index(&self, j: usize) -> usize {
        let mut idx = 0usize;
        for _ in 0..self.n {
            idx = idx * self.d + j;
        }
        idx
    }
}

/// The state (1/sqrt(d)) sum_j |j>^(x n).
pub fn ghz_state(spec: &GhzSpec) -> Result<StateVector> {
    let len = spec.joint_len();
    let mut amps = vec![Complex64::new(0.0, 0.0); len];
    let w = Complex64::new(1.0 / (spec.d as f64).sqrt(), 0.0);
    for j in 0..spec.d {
        amps[spec.diagonal_index(j)] = w;
    }
    StateVector::new(spec.dims(), amps)
}

/// True when the labels sum to 0 mod d.
fn labels_sum_to_zero(labels: &[usize], d: usize) -> bool {
    labels.iter().fold(0usize, |acc, &l| (acc + l) % d) == 0
}

/// Basis-label consistency: the round contributes a usable key symbol only
/// if the chosen basis labels cancel mod d.
pub fn bases_consistent(bases: &[usize], d: usize) -> bool {
    labels_sum_to_zero(bases, d)
}

/// Outcome-label consistency: on a consistent-basis round, honest outcomes
/// cancel mod d; a residue signals disturbance.
pub fn outcomes_consistent(outcomes: &[usize], d: usize) -> bool {
    labels_sum_to_zero(outcomes, d)
}

/// Both consistency checks for one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Consistency {
    pub bases_ok: bool,
    pub outcomes_ok: bool,
}

impl Consistency {
    pub fn both(&self) -> bool {
        self.bases_ok && self.outcomes_ok
    }
}

pub fn consistent(bases: &[usize], outcomes: &[usize], d: usize) -> Consistency {
    Consistency {
        bases_ok: bases_consistent(bases, d),
        outcomes_ok: outcomes_consistent(outcomes, d),
    }
}

/// One row of the dealer's completion table: given the participants' basis
/// choices, the dealer basis that makes the round consistent.
#[derive(Clone, Debug, Serialize)]
pub struct LookupRow {
    pub participant_bases: Vec<usize>,
    pub dealer_basis: usize,
    pub outcome_rule: &'static str,
}

/// The full completion table for an (n-1)-participant session: one row per
/// participant basis tuple, lexicographic order.
#[derive(Clone, Debug, Serialize)]
pub struct LookupTable {
    pub d: usize,
    pub n: usize,
    pub kind: BasisKind,
    pub rows: Vec<LookupRow>,
}

pub fn lookup_table(d: usize, n: usize, kind: BasisKind) -> Result<LookupTable> {
    bases::validate_dimension(d, kind)?;
    let spec = GhzSpec::new(d, n)?;
    let participants = spec.n - 1;
    let mut rows = Vec::new();
    let mut tuple = vec![0usize; participants];
    loop {
        let sum: usize = tuple.iter().sum();
        rows.push(LookupRow {
            participant_bases: tuple.clone(),
            dealer_basis: (d - sum % d) % d,
            outcome_rule: "outcome labels sum to 0 mod d",
        });
        // Lexicographic increment.
        let mut pos = participants;
        loop {
            if pos == 0 {
                return Ok(LookupTable {
                    d,
                    n,
                    kind,
                    rows,
                });
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Per-party measurement record: one basis and one outcome per register, all
/// of the same kind and dimension.
#[derive(Clone, Debug)]
pub struct ConditionalState {
    entries: Vec<(BasisSpec, usize)>,
}

impl ConditionalState {
    /// `pairs` lists (basis label, outcome index) per register.
    pub fn new(kind: BasisKind, d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput("conditional state with no registers"));
        }
        let mut entries = Vec::with_capacity(pairs.len());
        for &(basis, outcome) in pairs {
            if outcome >= d {
                return Err(Error::LabelOutOfRange { label: outcome, d });
            }
            entries.push((BasisSpec::new(kind, d, basis)?, outcome));
        }
        Ok(Self { entries })
    }

    pub fn d(&self) -> usize {
        self.entries[0].0.d
    }

    pub fn entries(&self) -> &[(BasisSpec, usize)] {
        &self.entries
    }

    pub fn basis_labels(&self) -> Vec<usize> {
        self.entries.iter().map(|(s, _)| s.basis).collect()
    }

    pub fn outcome_labels(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, o)| o).collect()
    }

    pub fn consistency(&self) -> Consistency {
        consistent(&self.basis_labels(), &self.outcome_labels(), self.d())
    }

    /// The tensor product of the recorded basis vectors, with no consistency
    /// requirement. Useful for auditing inconsistent collapse products.
    pub fn product_state(&self) -> Result<StateVector> {
        let parts = self
            .entries
            .iter()
            .map(|(spec, outcome)| bases::basis_vector(spec, *outcome))
            .collect::<Result<Vec<_>>>()?;
        tensor(&parts)
    }

    /// The collapse product of a consistent round. Errors when either label
    /// sum has a nonzero residue.
    pub fn state(&self) -> Result<StateVector> {
        if !self.consistency().both() {
            return Err(Error::InconsistentLabels);
        }
        self.product_state()
    }
}

/// Cap on joint dimension for materializing the explicit complement basis;
/// it stores about d^n vectors of d^n amplitudes each.
pub const VPERP_SIZE_CAP: usize = 1024;

/// An orthonormal basis of the orthogonal complement of the GHZ state,
/// split by structure.
///
/// `off_diagonal` holds the d^n - d canonical strings with at least two
/// distinct letters; `diagonal_rows` holds the d - 1 non-flat Fourier
/// combinations of the diagonal strings. Together with the GHZ state they
/// form an orthonormal basis of the full joint space.
#[derive(Clone, Debug)]
pub struct VperpBasis {
    pub off_diagonal: Vec<StateVector>,
    pub diagonal_rows: Vec<StateVector>,
}

impl VperpBasis {
    pub fn len(&self) -> usize {
        self.off_diagonal.len() + self.diagonal_rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &StateVector> {
        self.off_diagonal.iter().chain(self.diagonal_rows.iter())
    }
}

pub fn vperp_basis(spec: &GhzSpec) -> Result<VperpBasis> {
    let len = spec.joint_len();
    if len > VPERP_SIZE_CAP {
        return Err(Error::StateTooLarge {
            d: spec.d,
            n: spec.n,
            cap: VPERP_SIZE_CAP,
        });
    }
    let dims = spec.dims();
    let diag: Vec<usize> = (0..spec.d).map(|j| spec.diagonal_index(j)).collect();

    let mut off_diagonal = Vec::with_capacity(len - spec.d);
    for flat in 0..len {
        if diag.binary_search(&flat).is_err() {
            let mut amps = vec![Complex64::new(0.0, 0.0); len];
            amps[flat] = Complex64::new(1.0, 0.0);
            off_diagonal.push(StateVector::new(dims.clone(), amps)?);
        }
    }

    let roots = bases::roots_of_unity(spec.d);
    let scale = 1.0 / (spec.d as f64).sqrt();
    let mut diagonal_rows = Vec::with_capacity(spec.d - 1);
    for k in 1..spec.d {
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        for (j, &idx) in diag.iter().enumerate() {
            amps[idx] = roots[k * j % spec.d] * scale;
        }
        diagonal_rows.push(StateVector::new(dims.clone(), amps)?);
    }

    Ok(VperpBasis {
        off_diagonal,
        diagonal_rows,
    })
}

/// Enumerates all n-tuples over 0..d with sum 0 mod d, lexicographic in the
/// first n-1 coordinates (the last coordinate is determined).
pub(crate) fn zero_sum_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let free = n - 1;
    let count = d.pow(free as u32);
    let mut out = Vec::with_capacity(count);
    for mut code in 0..count {
        let mut tuple = vec![0usize; n];
        for slot in (0..free).rev() {
            tuple[slot] = code % d;
            code /= d;
        }
        let sum: usize = tuple[..free].iter().sum();
        tuple[free] = (d - sum % d) % d;
        out.push(tuple);
    }
    out
}

/// Exhaustive audit of the collapse-product geometry for one (d, n, kind).
///
/// Two overlap conventions for the product-GHZ overlap are listed: the
/// derived value d^((1-n)/2), which the audit asserts, and the rival
/// exponent reading d^(1-n/2), reported alongside so the measured value
/// visibly discriminates between them.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub d: usize,
    pub n: usize,
    pub kind: BasisKind,
    /// Number of consistent collapse products examined: d^(2(n-1)).
    pub lambda_count: usize,
    /// Extremes of |<x|product>| over non-diagonal canonical strings x.
    pub min_off_diagonal_overlap: f64,
    pub max_off_diagonal_overlap: f64,
    /// The value both extremes must equal: d^(-n/2).
    pub expected_off_diagonal_overlap: f64,
    /// Largest |<row_k|product>| over non-flat diagonal Fourier rows.
    pub max_diagonal_row_overlap: f64,
    /// Worst deviation of <product|j...j> from the real positive d^(-n/2).
    pub max_diagonal_component_deviation: f64,
    /// Extremes of |<product|GHZ>|.
    pub min_ghz_overlap: f64,
    pub max_ghz_overlap: f64,
    /// Asserted overlap value d^((1-n)/2).
    pub derived_ghz_overlap: f64,
    /// Rival exponent reading d^(1-n/2); not asserted.
    pub rival_ghz_overlap: f64,
    pub violations: usize,
    pub pass: bool,
}

pub fn verify_uniqueness(spec: &GhzSpec, kind: BasisKind) -> Result<UniquenessReport> {
    bases::validate_dimension(spec.d, kind)?;
    let d = spec.d;
    let n = spec.n;
    let bases_tuples = zero_sum_tuples(d, n);
    let outcome_tuples = zero_sum_tuples(d, n);
    let diag: Vec<usize> = (0..d).map(|j| spec.diagonal_index(j)).collect();
    let expected_component = (d as f64).powf(-(n as f64) / 2.0);
    let derived_ghz = (d as f64).powf((1.0 - n as f64) / 2.0);
    let roots = bases::roots_of_unity(d);

    #[derive(Clone)]
    struct Extremes {
        min_off: f64,
        max_off: f64,
        max_row: f64,
        max_diag_dev: f64,
        min_ghz: f64,
        max_ghz: f64,
        violations: usize,
    }

    let identity = Extremes {
        min_off: f64::INFINITY,
        max_off: 0.0,
        max_row: 0.0,
        max_diag_dev: 0.0,
        min_ghz: f64::INFINITY,
        max_ghz: 0.0,
        violations: 0,
    };

    let merged = bases_tuples
        .par_iter()
        .map(|basis_tuple| {
            let mut acc = identity.clone();
            for outcome_tuple in &outcome_tuples {
                let pairs: Vec<(usize, usize)> = basis_tuple
                    .iter()
                    .zip(outcome_tuple)
                    .map(|(&b, &o)| (b, o))
                    .collect();
                let product = ConditionalState::new(kind, d, &pairs)
                    .and_then(|c| c.state())
                    .expect("consistent tuples collapse cleanly");

                let mut diag_cursor = 0usize;
                for (flat, amp) in product.amps().iter().enumerate() {
                    if diag_cursor < diag.len() && diag[diag_cursor] == flat {
                        diag_cursor += 1;
                        continue;
                    }
                    let m = amp.norm();
                    acc.min_off = acc.min_off.min(m);
                    acc.max_off = acc.max_off.max(m);
                    if (m - expected_component).abs() > INVARIANT_TOL {
                        acc.violations += 1;
                    }
                }

                // <product|j...j> = conj of the diagonal amplitude.
                let mut ghz_overlap = Complex64::new(0.0, 0.0);
                for &idx in &diag {
                    let comp = product.amp(idx).conj();
                    let dev = (comp - Complex64::new(expected_component, 0.0)).norm();
                    acc.max_diag_dev = acc.max_diag_dev.max(dev);
                    if dev > INVARIANT_TOL {
                        acc.violations += 1;
                    }
                    ghz_overlap += comp;
                }
                ghz_overlap /= (d as f64).sqrt();
                let g = ghz_overlap.norm();
                acc.min_ghz = acc.min_ghz.min(g);
                acc.max_ghz = acc.max_ghz.max(g);
                if (ghz_overlap - Complex64::new(derived_ghz, 0.0)).norm() > INVARIANT_TOL {
                    acc.violations += 1;
                }

                for k in 1..d {
                    let mut row = Complex64::new(0.0, 0.0);
                    for (j, &idx) in diag.iter().enumerate() {
                        // Bra side of the Fourier row conjugates the phase.
                        row += roots[(d - k * j % d) % d] * product.amp(idx);
                    }
                    row /= (d as f64).sqrt();
                    let m = row.norm();
                    acc.max_row = acc.max_row.max(m);
                    if m > INVARIANT_TOL {
                        acc.violations += 1;
                    }
                }
            }
            acc
        })
        .reduce(
            || identity.clone(),
            |a, b| Extremes {
                min_off: a.min_off.min(b.min_off),
                max_off: a.max_off.max(b.max_off),
                max_row: a.max_row.max(b.max_row),
                max_diag_dev: a.max_diag_dev.max(b.max_diag_dev),
                min_ghz: a.min_ghz.min(b.min_ghz),
                max_ghz: a.max_ghz.max(b.max_ghz),
                violations: a.violations + b.violations,
            },
        );

    let lambda_count = bases_tuples.len() * outcome_tuples.len();
    Ok(UniquenessReport {
        d,
        n,
        kind,
        lambda_count,
        min_off_diagonal_overlap: merged.min_off,
        max_off_diagonal_overlap: merged.max_off,
        expected_off_diagonal_overlap: expected_component,
        max_diagonal_row_overlap: merged.max_row,
        max_diagonal_component_deviation: merged.max_diag_dev,
        min_ghz_overlap: merged.min_ghz,
        max_ghz_overlap: merged.max_ghz,
        derived_ghz_overlap: derived_ghz,
        rival_ghz_overlap: (d as f64).powf(1.0 - n as f64 / 2.0),
        violations: merged.violations,
        pass: merged.violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{inner, IDENTITY_TOL};

    #[test]
    fn ghz_state_is_flat_on_the_diagonal() {
        let spec = GhzSpec::new(3, 3).unwrap();
        let ghz = ghz_state(&spec).unwrap();
        assert!(ghz.is_normalized());
        let w = 1.0 / 3f64.sqrt();
        for j in 0..3 {
            let idx = spec.diagonal_index(j);
            assert!((ghz.amp(idx) - Complex64::new(w, 0.0)).norm() < IDENTITY_TOL);
        }
        let nonzero = ghz.amps().iter().filter(|a| a.norm() > 0.0).count();
        assert_eq!(nonzero, 3);
    }

    #[test]
    fn spec_rejects_oversized_registers() {
        assert!(GhzSpec::new(10, 6).is_ok()); // exactly at the cap
        assert!(matches!(
            GhzSpec::new(10, 7),
            Err(Error::StateTooLarge { .. })
        ));
        assert!(matches!(GhzSpec::new(1, 3), Err(Error::DimensionTooSmall(1))));
        assert!(GhzSpec::new(3, 1).is_err());
    }

    #[test]
    fn consistency_is_sum_mod_d() {
        assert!(bases_consistent(&[1, 2, 0], 3));
        assert!(bases_consistent(&[2, 2, 2], 3));
        assert!(!bases_consistent(&[1, 2, 1], 3));
        assert!(outcomes_consistent(&[0, 0, 0], 3));
        assert!(!outcomes_consistent(&[0, 0, 1], 3));
        let c = consistent(&[1, 2, 0], &[0, 1, 1], 3);
        assert!(c.bases_ok);
        assert!(!c.outcomes_ok);
        assert!(!c.both());
    }

    #[test]
    fn lookup_table_rows_complete_every_tuple() {
        let table = lookup_table(3, 3, BasisKind::Mub).unwrap();
        assert_eq!(table.rows.len(), 9);
        // Lexicographic order of participant tuples.
        assert_eq!(table.rows[0].participant_bases, vec![0, 0]);
        assert_eq!(table.rows[1].participant_bases, vec![0, 1]);
        assert_eq!(table.rows[8].participant_bases, vec![2, 2]);
        for row in &table.rows {
            let mut labels = row.participant_bases.clone();
            labels.push(row.dealer_basis);
            assert!(bases_consistent(&labels, 3), "{row:?}");
        }
        // Specific completions.
        assert_eq!(table.rows[1].dealer_basis, 2); // (0,1) -> 2
        assert_eq!(table.rows[4].dealer_basis, 1); // (1,1) -> 1
        assert!(lookup_table(4, 3, BasisKind::Mub).is_err());
        assert!(lookup_table(4, 3, BasisKind::Mbb).is_ok());
    }

    #[test]
    fn zero_sum_tuples_enumerate_exactly_the_consistent_tuples() {
        let tuples = zero_sum_tuples(3, 3);
        assert_eq!(tuples.len(), 9);
        for t in &tuples {
            assert!(bases_consistent(t, 3));
        }
        // All distinct.
        let mut sorted = tuples.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
    }

    #[test]
    fn consistent_collapse_product_has_flat_diagonal() {
        // Bases (1,2,0), outcomes (2,2,2): both sums are 0 mod 3.
        let cond = ConditionalState::new(BasisKind::Mub, 3, &[(1, 2), (2, 2), (0, 2)]).unwrap();
        assert!(cond.consistency().both());
        let product = cond.state().unwrap();
        let spec = GhzSpec::new(3, 3).unwrap();
        let expected = 3f64.powf(-1.5);
        for j in 0..3 {
            let comp = product.amp(spec.diagonal_index(j)).conj();
            assert!(
                (comp - Complex64::new(expected, 0.0)).norm() < INVARIANT_TOL,
                "j={j} comp={comp}"
            );
        }
        let ghz = ghz_state(&spec).unwrap();
        let overlap = inner(&product, &ghz).unwrap();
        assert!((overlap - Complex64::new(1.0 / 3.0, 0.0)).norm() < INVARIANT_TOL);
    }

    #[test]
    fn inconsistent_labels_are_refused_by_state() {
        let cond = ConditionalState::new(BasisKind::Mub, 3, &[(1, 0), (1, 0), (0, 0)]).unwrap();
        assert!(!cond.consistency().bases_ok);
        assert!(matches!(cond.state(), Err(Error::InconsistentLabels)));
        // product_state still works for audits.
        let p = cond.product_state().unwrap();
        assert!(p.is_normalized());
    }

    #[test]
    fn inconsistent_product_overlaps_are_uniform_but_never_aligned() {
        // With a nonzero basis residue, every product-bra component along the
        // diagonal keeps modulus d^(-3/2), so the product never matches a
        // single canonical string and never reaches the consistent overlap.
        let spec = GhzSpec::new(3, 3).unwrap();
        let ghz = ghz_state(&spec).unwrap();
        let expected = 3f64.powf(-1.5);
        for bases_tuple in [[1usize, 1, 0], [2, 0, 0], [1, 2, 1]] {
            for outcome in 0..3usize {
                let cond = ConditionalState::new(
                    BasisKind::Mub,
                    3,
                    &[(bases_tuple[0], outcome), (bases_tuple[1], 0), (bases_tuple[2], 0)],
                )
                .unwrap();
                assert!(!cond.consistency().bases_ok);
                let product = cond.product_state().unwrap();
                for j in 0..3 {
                    let comp = product.amp(spec.diagonal_index(j));
                    assert!((comp.norm() - expected).abs() < INVARIANT_TOL);
                }
                let overlap = inner(&product, &ghz).unwrap();
                // Nonzero quadratic residue: the three diagonal phases form a
                // full quadratic Gauss sum of modulus sqrt(3), giving overlap
                // modulus exactly d^(-1) * d^(-1/2) * sqrt(d) = 1/3 here, but
                // never the real positive 1/3 of a consistent round.
                assert!(
                    (overlap - Complex64::new(1.0 / 3.0, 0.0)).norm() > 0.1,
                    "overlap {overlap}"
                );
            }
        }
    }

    #[test]
    fn complement_basis_is_orthonormal_and_orthogonal_to_ghz() {
        let spec = GhzSpec::new(3, 3).unwrap();
        let ghz = ghz_state(&spec).unwrap();
        let vperp = vperp_basis(&spec).unwrap();
        assert_eq!(vperp.off_diagonal.len(), 27 - 3);
        assert_eq!(vperp.diagonal_rows.len(), 2);
        assert_eq!(vperp.len(), 26); // d^n - 1: a full complement basis
        let all: Vec<&StateVector> = vperp.iter_all().collect();
        for (i, u) in all.iter().enumerate() {
            assert!((inner(u, &ghz).unwrap()).norm() < IDENTITY_TOL);
            for v in all.iter().skip(i + 1) {
                assert!((inner(u, v).unwrap()).norm() < IDENTITY_TOL);
            }
            assert!(u.is_normalized());
        }
    }

    #[test]
    fn complement_basis_respects_size_cap() {
        let spec = GhzSpec::new(11, 3).unwrap();
        assert!(matches!(
            vperp_basis(&spec),
            Err(Error::StateTooLarge { .. })
        ));
    }

    #[test]
    fn uniqueness_audit_passes_for_small_cases() {
        for (d, n, kind) in [
            (3usize, 3usize, BasisKind::Mub),
            (5, 3, BasisKind::Mub),
            (3, 4, BasisKind::Mub),
            (2, 3, BasisKind::Mbb),
            (3, 3, BasisKind::Mbb),
            (4, 3, BasisKind::Mbb),
        ] {
            let spec = GhzSpec::new(d, n).unwrap();
            let report = verify_uniqueness(&spec, kind).unwrap();
            assert!(report.pass, "{report:?}");
            assert_eq!(report.violations, 0);
            assert_eq!(
                report.lambda_count,
                d.pow(2 * (n as u32 - 1)),
                "lambda count for d={d} n={n}"
            );
            let expected = (d as f64).powf(-(n as f64) / 2.0);
            assert!((report.min_off_diagonal_overlap - expected).abs() < INVARIANT_TOL);
            assert!((report.max_off_diagonal_overlap - expected).abs() < INVARIANT_TOL);
            assert!(report.max_diagonal_row_overlap < INVARIANT_TOL);
            let derived = (d as f64).powf((1.0 - n as f64) / 2.0);
            assert!((report.min_ghz_overlap - derived).abs() < INVARIANT_TOL);
            assert!((report.max_ghz_overlap - derived).abs() < INVARIANT_TOL);
        }
    }

    #[test]
    fn the_two_ghz_overlap_conventions_differ_measurably() {
        // At d = 3, n = 3 the derived overlap is 1/3 and the rival reading
        // is 3^(-1/2); the audit's measured extremes land on the former.
        let spec = GhzSpec::new(3, 3).unwrap();
        let report = verify_uniqueness(&spec, BasisKind::Mub).unwrap();
        assert!((report.derived_ghz_overlap - 1.0 / 3.0).abs() < IDENTITY_TOL);
        assert!((report.rival_ghz_overlap - 1.0 / 3f64.sqrt()).abs() < IDENTITY_TOL);
        assert!((report.max_ghz_overlap - report.derived_ghz_overlap).abs() < INVARIANT_TOL);
        assert!((report.max_ghz_overlap - report.rival_ghz_overlap).abs() > 0.2);
    }
}
