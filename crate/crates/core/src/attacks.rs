//! Adversary models and detection-rate benchmarks.
//!
//! Three attacks are modeled. An outsider intercept-resend adversary
//! captures the two participant particles in transit, measures them in a
//! correlated pair basis built from a guessed dealer basis, and resends the
//! observed pair state; the induced error rate has a closed form per basis
//! kind, reproduced here three independent ways (closed-form evaluation,
//! numeric overlap summation, and exact rational summation) plus full Monte
//! Carlo. An outsider entangled-probe adversary is defeated by the
//! uniqueness geometry of the shared state, which [`outsider_probe_audit`]
//! checks exhaustively. An insider adversary replaces the distributed
//! particles with halves of maximally entangled pairs and defers
//! measurement; against the announce-bases variant this recovers the
//! dealer's key perfectly and undetectably, while the chained variant cuts
//! the success rate to a blind guess.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{self, BasisKind, BasisSpec};
use crate::error::{Error, Result};
use crate::ghz::{self, GhzSpec};
use crate::protocol::{
    eavesdrop_test, AdversaryNote, RoundTranscript, SessionConfig, Variant,
    TEST_DESIGNATION_STREAM,
};
use crate::qmath::{
    born_measure, inner, partial_inner, SeededRng, StateVector, INVARIANT_TOL,
};

mod exact;

/// Outcome-check statistics over the test rounds of a session.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DetectionStats {
    pub sifted_rounds: usize,
    pub test_rounds: usize,
    pub mismatches: usize,
    pub rate: f64,
    pub stderr: f64,
}

impl DetectionStats {
    pub fn from_counts(sifted_rounds: usize, test_rounds: usize, mismatches: usize) -> Self {
        let (rate, stderr) = if test_rounds == 0 {
            (0.0, 0.0)
        } else {
            let rate = mismatches as f64 / test_rounds as f64;
            (rate, (rate * (1.0 - rate) / test_rounds as f64).sqrt())
        };
        Self {
            sifted_rounds,
            test_rounds,
            mismatches,
            rate,
            stderr,
        }
    }
}

/// Closed-form intercept-resend detection rate: ((d-1)/d)^2 for the
/// quadratic-phase family, (4d^2-10d+6)/d^3 for the near-flat family.
pub fn analytic_detection_rate(d: usize, kind: BasisKind) -> Result<Ratio<i128>> {
    bases::validate_dimension(d, kind)?;
    let m = d as i128;
    match kind {
        BasisKind::Mub => Ok(Ratio::new((m - 1) * (m - 1), m * m)),
        BasisKind::Mbb => Ok(Ratio::new(4 * m * m - 10 * m + 6, m * m * m)),
        other => Err(Error::InvalidConfig(format!(
            "no detection-rate closed form for the {other} basis"
        ))),
    }
}

/// The closed form as a float.
pub fn analytic_detection_rate_f64(d: usize, kind: BasisKind) -> Result<f64> {
    let r = analytic_detection_rate(d, kind)?;
    Ok(r.to_f64().expect("rate is a small rational"))
}

/// One summand of the detection sum: x(1 - x) with
/// x = |<basis_a, outcome_a | basis_g, outcome_g>|^2, computed from the
/// constructed vectors, not from any closed form.
pub fn weighted_error_term(
    d: usize,
    kind: BasisKind,
    basis_a: usize,
    outcome_a: usize,
    basis_g: usize,
    outcome_g: usize,
) -> Result<f64> {
    let va = bases::basis_vector(&BasisSpec::new(kind, d, basis_a)?, outcome_a)?;
    let vg = bases::basis_vector(&BasisSpec::new(kind, d, basis_g)?, outcome_g)?;
    let x = inner(&va, &vg)?.norm_sqr();
    Ok(x * (1.0 - x))
}

/// Numeric evaluation of the full detection sum: basis offsets 1..d-1 at
/// weight 1/d, all resend outcomes, reference labels fixed at (0, 0) (the
/// sum is label-independent within a family).
pub fn overlap_sum_rate(d: usize, kind: BasisKind) -> Result<f64> {
    bases::validate_dimension(d, kind)?;
    let mut total = 0.0;
    for offset in 1..d {
        for outcome_g in 0..d {
            total += weighted_error_term(d, kind, 0, 0, offset, outcome_g)?;
        }
    }
    Ok(total / d as f64)
}

/// The same detection sum in exact rational arithmetic, by lattice counting
/// (quadratic-phase) or cyclic-polynomial reduction (near-flat). Shares no
/// code with [`analytic_detection_rate`], so agreement between the two is an
/// independent derivation check.
pub fn overlap_sum_rate_exact(d: usize, kind: BasisKind) -> Result<Ratio<i128>> {
    bases::validate_dimension(d, kind)?;
    match kind {
        BasisKind::Mub => Ok(exact::quadratic_phase_rate(d)),
        BasisKind::Mbb => Ok(exact::near_flat_rate(d)),
        other => Err(Error::InvalidConfig(format!(
            "no detection sum for the {other} basis"
        ))),
    }
}

/// The correlated pair basis for a guessed dealer basis label: vector a' is
/// sum_j conj(u_(label,a')(j)) |jj>, the (unit-norm) conditional pair state
/// matching dealer outcome a'. The d vectors are orthonormal and span the
/// diagonal subspace, which carries all the probability when the pair came
/// from the shared state; the off-diagonal complement is the abort space.
///
/// Vectors are returned over a single register of dimension d^2 (flat index
/// j*d + k).
pub fn correlated_pair_basis(kind: BasisKind, d: usize, label: usize) -> Result<Vec<StateVector>> {
    let spec = BasisSpec::new(kind, d, label)?;
    let mut out = Vec::with_capacity(d);
    for outcome in 0..d {
        let u = bases::basis_vector(&spec, outcome)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
        for j in 0..d {
            amps[j * d + j] = u.amp(j).conj();
        }
        out.push(StateVector::new(vec![d * d], amps)?);
    }
    Ok(out)
}

/// Projective measurement restricted to the span of the given orthonormal
/// vectors. Returns the sampled index and the leaked probability outside the
/// span (the abort probability, expected to be ~0 here). Outcomes are drawn
/// by inverse CDF in index order after renormalizing within the span.
fn measure_in_span(
    state: &StateVector,
    vectors: &[StateVector],
    rng: &mut SeededRng,
) -> Result<(usize, f64)> {
    let mut probs = Vec::with_capacity(vectors.len());
    let mut total = 0.0;
    for v in vectors {
        let p = inner(v, state)?.norm_sqr();
        probs.push(p);
        total += p;
    }
    if total < 1e-12 {
        return Err(Error::ZeroNormState);
    }
    let leak = (state.norm_sqr() - total).max(0.0);
    let u = rng.uniform() * total;
    let mut outcome = vectors.len() - 1;
    let mut cum = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            outcome = k;
            break;
        }
    }
    Ok((outcome, leak))
}

/// A finished intercept-resend run: per-round transcripts (every sifted
/// round is checked) and the aggregate stats.
#[derive(Clone, Debug, Serialize)]
pub struct InterceptResendRun {
    pub stats: DetectionStats,
    pub transcripts: Vec<RoundTranscript>,
}

/// Simulates the intercept-resend attack against three-party announce-bases
/// sessions by full state-vector evolution. Per round: the dealer measures
/// her register; the adversary, holding both participant particles, guesses
/// the dealer basis, measures the pair in the correlated basis for the
/// guess, and resends a fresh pair in the observed pair state; both
/// participant registers are then measured in uniformly chosen announced
/// bases. Rounds sift on basis consistency and every sifted round's outcome
/// check is evaluated (benchmark semantics, tightest standard error).
///
/// Per-round draws come from stream r of the rng's seed: dealer basis, Bob
/// basis, Charlie basis, adversary guess, then the four measurements in
/// order.
pub fn intercept_resend_run(
    cfg: &SessionConfig,
    rounds: usize,
    rng: &SeededRng,
) -> Result<InterceptResendRun> {
    if cfg.variant != Variant::Original {
        return Err(Error::InvalidConfig(
            "intercept-resend targets the announce-bases variant".into(),
        ));
    }
    if cfg.n != 3 {
        return Err(Error::InvalidConfig(format!(
            "intercept-resend model is three-party, got n={}",
            cfg.n
        )));
    }
    bases::validate_dimension(cfg.d, cfg.kind)?;
    if rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be positive".into()));
    }
    let d = cfg.d;
    let family = bases::basis_family(cfg.kind, d)?;
    let pair_bases: Vec<Vec<StateVector>> = (0..d)
        .map(|label| correlated_pair_basis(cfg.kind, d, label))
        .collect::<Result<_>>()?;
    let ghz = ghz::ghz_state(&GhzSpec::new(d, 3)?)?;

    let transcripts = (0..rounds)
        .into_par_iter()
        .map(|round| -> Result<RoundTranscript> {
            let mut draw = rng.substream(round as u64);
            let dealer_basis = draw.pick(d);
            let bob_basis = draw.pick(d);
            let charlie_basis = draw.pick(d);
            let guess = draw.pick(d);

            // Dealer measurement on register 0.
            let (a, collapsed) =
                born_measure(&ghz, 0, family.basis(dealer_basis)?, &mut draw)?;

            // Residual pair state, reshaped to one d^2 register.
            let dealer_vector = family.vector(dealer_basis, a)?;
            let residual = partial_inner(&[(0, dealer_vector)], &collapsed)?;
            let pair = StateVector::new(vec![d * d], residual.amps().to_vec())?;

            // Adversary pair measurement in the guessed correlated basis;
            // the abort space carries no probability here.
            let (pair_outcome, leak) = measure_in_span(&pair, &pair_bases[guess], &mut draw)?;
            debug_assert!(leak < INVARIANT_TOL, "abort leak {leak}");

            // Resend: a fresh pair in the observed correlated state.
            let resent = StateVector::new(
                vec![d, d],
                pair_bases[guess][pair_outcome].amps().to_vec(),
            )?;

            let (b, after_bob) = born_measure(&resent, 0, family.basis(bob_basis)?, &mut draw)?;
            let (c, _) = born_measure(&after_bob, 1, family.basis(charlie_basis)?, &mut draw)?;

            let bases_tuple = vec![dealer_basis, bob_basis, charlie_basis];
            let valid = ghz::bases_consistent(&bases_tuple, d);
            let outcomes = vec![a, b, c];
            let check_passed = valid.then(|| ghz::outcomes_consistent(&outcomes, d));
            Ok(RoundTranscript {
                round,
                bases: bases_tuple,
                outcomes,
                announced: vec![None, Some(bob_basis), Some(charlie_basis)],
                valid,
                test: valid,
                check_passed,
                adversary: Some(AdversaryNote::InterceptResend {
                    basis_guess: guess,
                    pair_outcome,
                }),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sifted = transcripts.iter().filter(|t| t.valid).count();
    let mismatches = transcripts
        .iter()
        .filter(|t| t.check_passed == Some(false))
        .count();
    Ok(InterceptResendRun {
        stats: DetectionStats::from_counts(sifted, sifted, mismatches),
        transcripts,
    })
}

/// Stats-only wrapper over [`intercept_resend_run`].
pub fn simulate_intercept_resend(
    cfg: &SessionConfig,
    rounds: usize,
    rng: &SeededRng,
) -> Result<DetectionStats> {
    Ok(intercept_resend_run(cfg, rounds, rng)?.stats)
}

/// The insider's substituted resource: two maximally entangled pairs,
/// dealer register paired with the insider's first private register and the
/// honest participant's register with the second,
/// (1/d) sum_(j,k) |j k j k> over registers (dealer, participant, ins1, ins2).
pub fn build_participant_attack_state(d: usize) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    GhzSpec::new(d, 4)?; // enforce the size cap
    let len = d * d * d * d;
    let mut amps = vec![Complex64::new(0.0, 0.0); len];
    let w = Complex64::new(1.0 / d as f64, 0.0);
    for j in 0..d {
        for k in 0..d {
            let flat = ((j * d + k) * d + j) * d + k;
            amps[flat] = w;
        }
    }
    StateVector::new(vec![d; 4], amps)
}

/// Bounds on the Schmidt coefficients of the attack state across the
/// (dealer, participant) | (ins1, ins2) cut, derived without an
/// eigensolver: the Gram matrix of the cut is compared against the scaled
/// identity in Frobenius norm, which bounds every eigenvalue displacement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SchmidtSpread {
    /// Frobenius deviation of the Gram matrix from (1/d^2) I.
    pub gram_deviation: f64,
    /// Certified interval containing every Schmidt coefficient.
    pub lower: f64,
    pub upper: f64,
    /// The claimed common value 1/d.
    pub target: f64,
}

pub fn participant_state_schmidt_spread(d: usize) -> Result<SchmidtSpread> {
    let state = build_participant_attack_state(d)?;
    let dim = d * d;
    // Gram of the cut matrix M[(jk),(lm)] = amp(j,k,l,m):
    // G = M M^dagger, entry (r, s) = sum_c M[r,c] conj(M[s,c]).
    let amp = |r: usize, c: usize| state.amp(r * dim + c);
    let mut deviation_sq = 0.0;
    for r in 0..dim {
        for s in 0..dim {
            let mut g = Complex64::new(0.0, 0.0);
            for c in 0..dim {
                g += amp(r, c) * amp(s, c).conj();
            }
            let target = if r == s {
                Complex64::new(1.0 / (dim as f64), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            deviation_sq += (g - target).norm_sqr();
        }
    }
    let deviation = deviation_sq.sqrt();
    // Every Gram eigenvalue lies within `deviation` of 1/d^2 (spectral norm
    // is bounded by Frobenius); Schmidt coefficients are their square roots.
    let base = 1.0 / (dim as f64);
    Ok(SchmidtSpread {
        gram_deviation: deviation,
        lower: (base - deviation).max(0.0).sqrt(),
        upper: (base + deviation).sqrt(),
        target: 1.0 / d as f64,
    })
}

/// Entrywise conjugate of every vector: the basis in which the insider's
/// halves are perfectly correlated with the honest measurements.
pub fn conjugate_basis(vectors: &[StateVector]) -> Vec<StateVector> {
    vectors.iter().map(StateVector::conjugated).collect()
}

/// Reads the dealer and participant outcomes off the insider's two private
/// registers, given the announced (or inferred) bases: each register is
/// measured in the conjugate of the corresponding basis, which reproduces
/// the honest outcome with certainty.
pub fn extract_participant(
    insider_pair: &StateVector,
    dealer_basis: &BasisSpec,
    participant_basis: &BasisSpec,
    rng: &mut SeededRng,
) -> Result<(usize, usize)> {
    let d = dealer_basis.d;
    let family_a = bases::basis_family(dealer_basis.kind, d)?;
    let family_b = bases::basis_family(participant_basis.kind, participant_basis.d)?;
    let conj_a = conjugate_basis(family_a.basis(dealer_basis.basis)?);
    let conj_b = conjugate_basis(family_b.basis(participant_basis.basis)?);
    let (a, collapsed) = born_measure(insider_pair, 0, &conj_a, rng)?;
    let (b, _) = born_measure(&collapsed, 1, &conj_b, rng)?;
    Ok((a, b))
}

/// Aggregate result of an insider attack simulation.
#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub variant: Variant,
    pub kind: BasisKind,
    pub d: usize,
    pub rounds: usize,
    /// Rounds that survived sifting (all rounds in the chained variant).
    pub valid_rounds: usize,
    /// Valid rounds where the insider's inferred dealer outcome was right.
    pub recovered: usize,
    pub key_recovery_rate: f64,
    pub recovery_stderr: f64,
    pub detection: DetectionStats,
}

/// A finished insider run with its transcripts.
#[derive(Clone, Debug, Serialize)]
pub struct ParticipantAttackRun {
    pub report: AttackReport,
    pub transcripts: Vec<RoundTranscript>,
}

/// Simulates the entanglement-assisted insider attack (three parties, the
/// insider is the last participant and controls particle distribution).
///
/// Announce-bases variant: the insider distributes the two-pair state,
/// announces an arbitrary basis label last (rushing order), and on each
/// valid round infers the dealer basis from the validity broadcast, reads
/// both honest outcomes out of his private registers in the conjugate
/// bases, and reports the outcome that completes the check sum. Expected:
/// perfect recovery, zero detection.
///
/// Chained variant: no labels are ever announced, so the conjugate
/// extraction has no basis to target; the insider guesses the dealer and
/// participant outcomes uniformly and fabricates accordingly. Expected:
/// recovery 1/d, per-test-round detection (d-1)/d.
pub fn participant_attack_run(
    cfg: &SessionConfig,
    rounds: usize,
    rng: &SeededRng,
) -> Result<ParticipantAttackRun> {
    if cfg.n != 3 {
        return Err(Error::InvalidConfig(format!(
            "insider attack model is three-party, got n={}",
            cfg.n
        )));
    }
    bases::validate_dimension(cfg.d, cfg.kind)?;
    if rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be positive".into()));
    }
    let d = cfg.d;
    let family = bases::basis_family(cfg.kind, d)?;
    let attack_state = build_participant_attack_state(d)?;

    let mut transcripts = match cfg.variant {
        Variant::Original => (0..rounds)
            .into_par_iter()
            .map(|round| -> Result<RoundTranscript> {
                let mut draw = rng.substream(round as u64);
                let dealer_basis = draw.pick(d);
                let bob_basis = draw.pick(d);
                let insider_label = draw.pick(d);

                // Honest measurements on the substituted state.
                let (a, after_a) =
                    born_measure(&attack_state, 0, family.basis(dealer_basis)?, &mut draw)?;
                let (b, after_b) =
                    born_measure(&after_a, 1, family.basis(bob_basis)?, &mut draw)?;

                let bases_tuple = vec![dealer_basis, bob_basis, insider_label];
                let valid = ghz::bases_consistent(&bases_tuple, d);

                let (note, reported_c) = if valid {
                    // Validity broadcast pins the dealer basis; read both
                    // honest outcomes from the private registers.
                    let inferred_basis = (2 * d - bob_basis - insider_label) % d;
                    debug_assert_eq!(inferred_basis, dealer_basis);
                    let pair =
                        extract_insider_pair(&after_b, &family, dealer_basis, a, bob_basis, b)?;
                    let (a_ext, b_ext) = extract_participant(
                        &pair,
                        &BasisSpec::new(cfg.kind, d, inferred_basis)?,
                        &BasisSpec::new(cfg.kind, d, bob_basis)?,
                        &mut draw,
                    )?;
                    let fabricated = (2 * d - (a_ext + b_ext) % d) % d;
                    (
                        AdversaryNote::Participant {
                            inferred_dealer_outcome: Some(a_ext),
                            recovered: Some(a_ext == a),
                            fabricated_outcome: fabricated,
                        },
                        fabricated,
                    )
                } else {
                    // Discarded round; nothing worth extracting.
                    let junk = draw.pick(d);
                    (
                        AdversaryNote::Participant {
                            inferred_dealer_outcome: None,
                            recovered: None,
                            fabricated_outcome: junk,
                        },
                        junk,
                    )
                };

                Ok(RoundTranscript {
                    round,
                    bases: bases_tuple,
                    outcomes: vec![a, b, reported_c],
                    announced: vec![None, Some(bob_basis), Some(insider_label)],
                    valid,
                    test: false,
                    check_passed: None,
                    adversary: Some(note),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        Variant::Modified => {
            let mut bootstrap_rng =
                SeededRng::with_stream(rng.seed(), crate::protocol::BOOTSTRAP_STREAM);
            let mut chained = crate::protocol::qkd_bootstrap(cfg, &mut bootstrap_rng);
            let mut out = Vec::with_capacity(rounds);
            for round in 0..rounds {
                let mut draw = rng.substream(round as u64);
                let dealer_basis = chained[0];
                let bob_basis = chained[1];
                let insider_label = chained[2];

                let (a, after_a) =
                    born_measure(&attack_state, 0, family.basis(dealer_basis)?, &mut draw)?;
                let (b, _) =
                    born_measure(&after_a, 1, family.basis(bob_basis)?, &mut draw)?;

                // No announcements ever happen, so the conjugate extraction
                // has no target; the insider guesses blind.
                let a_guess = draw.pick(d);
                let b_guess = draw.pick(d);
                let fabricated = (2 * d - (a_guess + b_guess) % d) % d;

                out.push(RoundTranscript {
                    round,
                    bases: vec![dealer_basis, bob_basis, insider_label],
                    outcomes: vec![a, b, fabricated],
                    announced: vec![None, None, None],
                    valid: true,
                    test: false,
                    check_passed: None,
                    adversary: Some(AdversaryNote::Participant {
                        inferred_dealer_outcome: Some(a_guess),
                        recovered: Some(a_guess == a),
                        fabricated_outcome: fabricated,
                    }),
                });
                // Each party chains on its own (reported) outcome.
                chained = vec![a, b, fabricated];
            }
            out
        }
    };

    let mut test_rng = SeededRng::with_stream(rng.seed(), TEST_DESIGNATION_STREAM);
    let detection = eavesdrop_test(&mut transcripts, d, cfg.test_fraction, &mut test_rng)?;

    let valid_rounds = transcripts.iter().filter(|t| t.valid).count();
    let recovered = transcripts
        .iter()
        .filter(|t| {
            matches!(
                t.adversary,
                Some(AdversaryNote::Participant {
                    recovered: Some(true),
                    ..
                })
            ) && t.valid
        })
        .count();
    let rate = recovered as f64 / valid_rounds as f64;
    let report = AttackReport {
        variant: cfg.variant,
        kind: cfg.kind,
        d,
        rounds,
        valid_rounds,
        recovered,
        key_recovery_rate: rate,
        recovery_stderr: (rate * (1.0 - rate) / valid_rounds as f64).sqrt(),
        detection,
    };
    Ok(ParticipantAttackRun {
        report,
        transcripts,
    })
}

/// Report-only wrapper over [`participant_attack_run`].
pub fn simulate_participant_attack(
    cfg: &SessionConfig,
    rounds: usize,
    rng: &SeededRng,
) -> Result<AttackReport> {
    Ok(participant_attack_run(cfg, rounds, rng)?.report)
}

/// Residual state of the insider's two private registers after the honest
/// parties measured theirs.
fn extract_insider_pair(
    state: &StateVector,
    family: &bases::BasisFamily,
    dealer_basis: usize,
    dealer_outcome: usize,
    bob_basis: usize,
    bob_outcome: usize,
) -> Result<StateVector> {
    let va = family.vector(dealer_basis, dealer_outcome)?;
    let vb = family.vector(bob_basis, bob_outcome)?;
    let residual = partial_inner(&[(0, va), (1, vb)], state)?;
    residual.normalized()
}

/// Exhaustive audit of the outsider entangled-probe attack surface.
///
/// Candidates are the orthonormal complement basis vectors of the shared
/// state. A candidate survives only if it could masquerade as key material:
/// it must put nonzero weight on some consistent collapse product and zero
/// weight on every outcome-inconsistent one (anything else trips the
/// outcome check). The audit records why each candidate is excluded;
/// survivors should be none, which is what makes the probe useless.
#[derive(Clone, Debug, Serialize)]
pub struct FakeKeyAudit {
    pub d: usize,
    pub n: usize,
    pub kind: BasisKind,
    pub candidates_examined: usize,
    /// Descriptions of candidates that satisfied every constraint.
    pub survivors: Vec<String>,
    pub uniqueness: ghz::UniquenessReport,
}

impl FakeKeyAudit {
    pub fn pass(&self) -> bool {
        self.survivors.is_empty() && self.uniqueness.pass
    }
}

pub fn outsider_probe_audit(d: usize, n: usize, kind: BasisKind) -> Result<FakeKeyAudit> {
    let spec = GhzSpec::new(d, n)?;
    bases::validate_dimension(d, kind)?;
    let vperp = ghz::vperp_basis(&spec)?;
    let uniqueness = ghz::verify_uniqueness(&spec, kind)?;

    let candidates: Vec<(String, StateVector)> = vperp
        .off_diagonal
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("off-diagonal string #{i}"), v.clone()))
        .chain(
            vperp
                .diagonal_rows
                .iter()
                .enumerate()
                .map(|(k, v)| (format!("diagonal row k={}", k + 1), v.clone())),
        )
        .collect();

    let mut has_valid_support = vec![false; candidates.len()];
    let mut violates_check = vec![false; candidates.len()];

    // All basis-consistent rounds, all outcome tuples.
    let basis_tuples = ghz::zero_sum_tuples(d, n);
    let mut outcome_tuple = vec![0usize; n];
    for basis_tuple in &basis_tuples {
        loop {
            let pairs: Vec<(usize, usize)> = basis_tuple
                .iter()
                .zip(&outcome_tuple)
                .map(|(&p, &o)| (p, o))
                .collect();
            let product = ghz::ConditionalState::new(kind, d, &pairs)?.product_state()?;
            let outcome_ok = ghz::outcomes_consistent(&outcome_tuple, d);
            for (idx, (_, cand)) in candidates.iter().enumerate() {
                let overlap = inner(&product, cand)?.norm();
                if overlap > INVARIANT_TOL {
                    if outcome_ok {
                        has_valid_support[idx] = true;
                    } else {
                        violates_check[idx] = true;
                    }
                }
            }
            // Odometer increment over outcome tuples.
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                outcome_tuple[pos] += 1;
                if outcome_tuple[pos] < d {
                    break;
                }
                outcome_tuple[pos] = 0;
            }
            if outcome_tuple.iter().all(|&o| o == 0) {
                break;
            }
        }
    }

    let survivors = candidates
        .iter()
        .enumerate()
        .filter(|(i, _)| has_valid_support[*i] && !violates_check[*i])
        .map(|(_, (label, _))| label.clone())
        .collect();

    Ok(FakeKeyAudit {
        d,
        n,
        kind,
        candidates_examined: candidates.len(),
        survivors,
        uniqueness,
    })
}
