//! Multi-party secret-sharing protocol engine.
//!
//! Two variants share one round shape. In the *original* variant every party
//! independently picks a basis, the non-dealer parties announce their labels,
//! and rounds whose labels fail the consistency condition are discarded, so
//! roughly a 1/d fraction survives. In the *modified* variant a trusted
//! bootstrap hands out one consistent basis tuple, after which each party
//! silently uses its own previous outcome as its next basis label; nothing is
//! announced and every round is kept.
//!
//! Sessions are reproducible: round r draws from stream r of the session
//! seed, the bootstrap and the test-round designation use reserved streams,
//! so parallel and sequential execution produce identical transcripts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::DetectionStats;
use crate::bases::{self, BasisKind};
use crate::error::{Error, Result};
use crate::ghz::{self, GhzSpec};
use crate::qmath::{born_measure, SeededRng, StateVector};

/// Reserved rng stream for the modified variant's trusted basis bootstrap.
pub const BOOTSTRAP_STREAM: u64 = u64::MAX;
/// Reserved rng stream for designating test rounds after sifting.
pub const TEST_DESIGNATION_STREAM: u64 = u64::MAX - 1;
/// Fraction of sifted rounds revealed for the eavesdropping check unless
/// configured otherwise.
pub const DEFAULT_TEST_FRACTION: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Modified,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Original => "original",
            Variant::Modified => "modified",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "original" => Ok(Variant::Original),
            "modified" => Ok(Variant::Modified),
            other => Err(Error::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

/// How basis announcements are collected in the original variant.
///
/// `Simultaneous` models honest commitment: the dealer reads all
/// announcements at once. `AdversaryLast` models a rushing insider who sees
/// everyone else's announcement (and the dealer's validity broadcast) before
/// acting; the insider attack simulation runs under this ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnouncementOrder {
    Simultaneous,
    AdversaryLast,
}

/// Parameters of one protocol session.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionConfig {
    pub d: usize,
    pub n: usize,
    pub kind: BasisKind,
    pub variant: Variant,
    pub rounds: usize,
    pub test_fraction: f64,
    pub seed: u64,
    pub announcement_order: AnnouncementOrder,
}

impl SessionConfig {
    pub fn new(d: usize, n: usize, kind: BasisKind, variant: Variant, rounds: usize, seed: u64) -> Self {
        Self {
            d,
            n,
            kind,
            variant,
            rounds,
            test_fraction: DEFAULT_TEST_FRACTION,
            seed,
            announcement_order: AnnouncementOrder::Simultaneous,
        }
    }

    pub fn validate(&self) -> Result<()> {
        bases::validate_dimension(self.d, self.kind)?;
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!(
                "secret sharing needs a dealer and at least two participants, got n={}",
                self.n
            )));
        }
        GhzSpec::new(self.d, self.n)?;
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be positive".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test fraction must lie strictly between 0 and 1, got {}",
                self.test_fraction
            )));
        }
        Ok(())
    }

    pub fn ghz_spec(&self) -> Result<GhzSpec> {
        GhzSpec::new(self.d, self.n)
    }
}

/// Adversary-side annotation attached to a transcript row by an attack
/// simulation. Absent on honest rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum AdversaryNote {
    InterceptResend {
        basis_guess: usize,
        pair_outcome: usize,
    },
    Participant {
        inferred_dealer_outcome: Option<usize>,
        recovered: Option<bool>,
        fabricated_outcome: usize,
    },
}

/// Full record of one round. Registers are ordered dealer first; `announced`
/// is the public view (None where a party announced nothing).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundTranscript {
    pub round: usize,
    pub bases: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub announced: Vec<Option<usize>>,
    pub valid: bool,
    pub test: bool,
    pub check_passed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<AdversaryNote>,
}

impl RoundTranscript {
    /// Outcome consistency of this round's recorded outcomes.
    pub fn outcomes_consistent(&self, d: usize) -> bool {
        ghz::outcomes_consistent(&self.outcomes, d)
    }
}

/// One honest original-variant round on the given rng: uniform basis picks,
/// sequential projective measurements dealer-first, announcements from every
/// non-dealer party.
pub fn run_round_original(
    cfg: &SessionConfig,
    round: usize,
    rng: &mut SeededRng,
) -> Result<RoundTranscript> {
    let bases_tuple: Vec<usize> = (0..cfg.n).map(|_| rng.pick(cfg.d)).collect();
    run_round_original_with_bases(cfg, round, &bases_tuple, rng)
}

/// Original-variant round with the basis tuple forced (test hook; the draws
/// then cover only the measurements).
pub fn run_round_original_with_bases(
    cfg: &SessionConfig,
    round: usize,
    bases_tuple: &[usize],
    rng: &mut SeededRng,
) -> Result<RoundTranscript> {
    if bases_tuple.len() != cfg.n {
        return Err(Error::InvalidConfig(format!(
            "expected {} basis labels, got {}",
            cfg.n,
            bases_tuple.len()
        )));
    }
    let outcomes = measure_all(cfg, bases_tuple, rng)?;
    let announced: Vec<Option<usize>> = bases_tuple
        .iter()
        .enumerate()
        .map(|(party, &b)| if party == 0 { None } else { Some(b) })
        .collect();
    Ok(RoundTranscript {
        round,
        bases: bases_tuple.to_vec(),
        outcomes,
        announced,
        valid: ghz::bases_consistent(bases_tuple, cfg.d),
        test: false,
        check_passed: None,
        adversary: None,
    })
}

/// Prepares the shared state and measures every register in order under the
/// given basis labels.
fn measure_all(cfg: &SessionConfig, bases_tuple: &[usize], rng: &mut SeededRng) -> Result<Vec<usize>> {
    let family = bases::basis_family(cfg.kind, cfg.d)?;
    let mut state: StateVector = ghz::ghz_state(&cfg.ghz_spec()?)?;
    let mut outcomes = Vec::with_capacity(cfg.n);
    for (register, &label) in bases_tuple.iter().enumerate() {
        let (outcome, collapsed) = born_measure(&state, register, family.basis(label)?, rng)?;
        outcomes.push(outcome);
        state = collapsed;
    }
    Ok(outcomes)
}

/// Runs all original-variant rounds; rounds are independent, executed in
/// parallel on disjoint rng streams (stream r for round r).
pub fn run_session_original(cfg: &SessionConfig) -> Result<Vec<RoundTranscript>> {
    cfg.validate()?;
    (0..cfg.rounds)
        .into_par_iter()
        .map(|round| {
            let mut rng = SeededRng::with_stream(cfg.seed, round as u64);
            run_round_original(cfg, round, &mut rng)
        })
        .collect()
}

/// Trusted-setup draw of a consistent basis tuple: the first n-1 labels are
/// uniform, the last completes the sum to 0 mod d. The adversary model has
/// no read access to the values.
pub fn qkd_bootstrap(cfg: &SessionConfig, rng: &mut SeededRng) -> Vec<usize> {
    let mut tuple: Vec<usize> = (0..cfg.n - 1).map(|_| rng.pick(cfg.d)).collect();
    let sum: usize = tuple.iter().sum();
    tuple.push((cfg.d - sum % cfg.d) % cfg.d);
    tuple
}

/// Runs a modified-variant session: bootstrap tuple for round 0, then each
/// party's previous outcome becomes its next basis label. Nothing is
/// announced and no round is discarded. Rounds chain, so execution is
/// sequential; determinism still holds (round r draws from stream r).
pub fn run_session_modified(cfg: &SessionConfig) -> Result<Vec<RoundTranscript>> {
    cfg.validate()?;
    let mut bootstrap_rng = SeededRng::with_stream(cfg.seed, BOOTSTRAP_STREAM);
    let mut bases_tuple = qkd_bootstrap(cfg, &mut bootstrap_rng);
    let mut transcripts = Vec::with_capacity(cfg.rounds);
    for round in 0..cfg.rounds {
        let mut rng = SeededRng::with_stream(cfg.seed, round as u64);
        let outcomes = measure_all(cfg, &bases_tuple, &mut rng)?;
        let next_bases = outcomes.clone();
        transcripts.push(RoundTranscript {
            round,
            bases: bases_tuple,
            outcomes,
            announced: vec![None; cfg.n],
            valid: true,
            test: false,
            check_passed: None,
            adversary: None,
        });
        bases_tuple = next_bases;
    }
    Ok(transcripts)
}

/// Keeps the rounds whose announced bases passed the consistency condition,
/// preserving order.
pub fn sift(transcripts: &[RoundTranscript]) -> Vec<RoundTranscript> {
    transcripts.iter().filter(|t| t.valid).cloned().collect()
}

/// Designates a random subset of the valid rounds as test rounds (Bernoulli
/// at `test_fraction` per round), reveals their outcomes, and checks the
/// outcome consistency condition on each. Flags are written back into the
/// transcript slice; the returned stats cover only the test rounds.
pub fn eavesdrop_test(
    transcripts: &mut [RoundTranscript],
    d: usize,
    test_fraction: f64,
    rng: &mut SeededRng,
) -> Result<DetectionStats> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let mut sifted = 0usize;
    let mut test_rounds = 0usize;
    let mut mismatches = 0usize;
    for t in transcripts.iter_mut() {
        if !t.valid {
            continue;
        }
        sifted += 1;
        if rng.bernoulli(test_fraction) {
            t.test = true;
            test_rounds += 1;
            let ok = t.outcomes_consistent(d);
            t.check_passed = Some(ok);
            if !ok {
                mismatches += 1;
            }
        }
    }
    if sifted == 0 {
        return Err(Error::EmptyInput("no valid rounds to test"));
    }
    Ok(DetectionStats::from_counts(sifted, test_rounds, mismatches))
}

/// Per-party outcome sequences on the valid, non-test rounds: the dealer's
/// sequence is the shared secret, the participants' sequences are the shares.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KeyRecord {
    pub round_indices: Vec<usize>,
    pub dealer_key: Vec<usize>,
    /// One row per non-dealer party, aligned with `round_indices`.
    pub participant_outcomes: Vec<Vec<usize>>,
}

impl KeyRecord {
    pub fn len(&self) -> usize {
        self.dealer_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dealer_key.is_empty()
    }
}

/// Extracts the key record from a tested transcript list.
pub fn key_record(transcripts: &[RoundTranscript]) -> KeyRecord {
    let mut round_indices = Vec::new();
    let mut dealer_key = Vec::new();
    let mut participant_outcomes: Vec<Vec<usize>> = Vec::new();
    for t in transcripts {
        if !t.valid || t.test {
            continue;
        }
        if participant_outcomes.is_empty() {
            participant_outcomes = vec![Vec::new(); t.outcomes.len().saturating_sub(1)];
        }
        round_indices.push(t.round);
        dealer_key.push(t.outcomes[0]);
        for (row, &outcome) in participant_outcomes.iter_mut().zip(&t.outcomes[1..]) {
            row.push(outcome);
        }
    }
    KeyRecord {
        round_indices,
        dealer_key,
        participant_outcomes,
    }
}

/// Collaborative reconstruction: per key round the participants pool their
/// outcomes and recover the dealer symbol as the completion to 0 mod d.
pub fn reconstruct_secret(record: &KeyRecord, d: usize) -> Result<Vec<usize>> {
    if record.participant_outcomes.is_empty() {
        return Err(Error::MissingPartyData("no participant outcomes".into()));
    }
    for (party, row) in record.participant_outcomes.iter().enumerate() {
        if row.len() != record.round_indices.len() {
            return Err(Error::MissingPartyData(format!(
                "participant {} holds {} outcomes for {} key rounds",
                party + 1,
                row.len(),
                record.round_indices.len()
            )));
        }
    }
    Ok((0..record.round_indices.len())
        .map(|i| {
            let sum: usize = record
                .participant_outcomes
                .iter()
                .map(|row| row[i])
                .sum();
            (d - sum % d) % d
        })
        .collect())
}

/// A finished session: transcripts with test flags resolved, detection stats
/// over the test rounds, and the surviving key material.
#[derive(Clone, Debug, Serialize)]
pub struct Session {
    pub config: SessionConfig,
    pub transcripts: Vec<RoundTranscript>,
    pub stats: DetectionStats,
    pub key: KeyRecord,
}

/// Compact session digest for machine consumption.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionSummary {
    pub config: SessionConfig,
    pub sifted_count: usize,
    pub test_count: usize,
    pub detection_rate: f64,
    pub stderr: f64,
    pub key_length: usize,
}

impl Session {
    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            config: self.config.clone(),
            sifted_count: self.stats.sifted_rounds,
            test_count: self.stats.test_rounds,
            detection_rate: self.stats.rate,
            stderr: self.stats.stderr,
            key_length: self.key.len(),
        }
    }
}

/// Runs a full honest session of the configured variant: rounds, sifting,
/// eavesdropping test, key extraction.
pub fn run_session(cfg: &SessionConfig) -> Result<Session> {
    cfg.validate()?;
    let mut transcripts = match cfg.variant {
        Variant::Original => run_session_original(cfg)?,
        Variant::Modified => run_session_modified(cfg)?,
    };
    let mut test_rng = SeededRng::with_stream(cfg.seed, TEST_DESIGNATION_STREAM);
    let stats = eavesdrop_test(&mut transcripts, cfg.d, cfg.test_fraction, &mut test_rng)?;
    let key = key_record(&transcripts);
    Ok(Session {
        config: cfg.clone(),
        transcripts,
        stats,
        key,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(d: usize, kind: BasisKind, variant: Variant, rounds: usize) -> SessionConfig {
        SessionConfig::new(d, 3, kind, variant, rounds, 0xBEEF)
    }

    #[test]
    fn config_validation_rules() {
        assert!(config(3, BasisKind::Mub, Variant::Original, 10).validate().is_ok());
        assert!(config(4, BasisKind::Mub, Variant::Original, 10).validate().is_err());
        assert!(config(4, BasisKind::Mbb, Variant::Original, 10).validate().is_ok());
        let mut c = config(3, BasisKind::Mub, Variant::Original, 10);
        c.n = 2;
        assert!(c.validate().is_err());
        let mut c = config(3, BasisKind::Mub, Variant::Original, 0);
        c.rounds = 0;
        assert!(c.validate().is_err());
        for bad in [0.0, 1.0, -0.5, 1.5] {
            let mut c = config(3, BasisKind::Mub, Variant::Original, 10);
            c.test_fraction = bad;
            assert!(c.validate().is_err(), "fraction {bad}");
        }
    }

    #[test]
    fn forced_consistent_bases_yield_consistent_outcomes() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 1);
        for stream in 0..50 {
            let mut rng = SeededRng::with_stream(11, stream);
            let t = run_round_original_with_bases(&cfg, 0, &[1, 1, 1], &mut rng).unwrap();
            assert!(t.valid);
            assert!(t.outcomes_consistent(3), "outcomes {:?}", t.outcomes);
        }
    }

    #[test]
    fn forced_inconsistent_bases_are_flagged_invalid() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 1);
        let mut rng = SeededRng::with_stream(12, 0);
        let t = run_round_original_with_bases(&cfg, 0, &[1, 1, 0], &mut rng).unwrap();
        assert!(!t.valid);
    }

    #[test]
    fn every_valid_round_has_consistent_outcomes_for_both_kinds() {
        for (d, kind) in [(3usize, BasisKind::Mub), (3, BasisKind::Mbb), (4, BasisKind::Mbb)] {
            let cfg = config(d, kind, Variant::Original, 400);
            let transcripts = run_session_original(&cfg).unwrap();
            for t in transcripts.iter().filter(|t| t.valid) {
                assert!(
                    t.outcomes_consistent(d),
                    "d={d} kind={kind} round {} outcomes {:?}",
                    t.round,
                    t.outcomes
                );
            }
        }
    }

    #[test]
    fn original_announcements_cover_exactly_the_non_dealers() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 20);
        for t in run_session_original(&cfg).unwrap() {
            assert_eq!(t.announced.len(), 3);
            assert!(t.announced[0].is_none());
            assert_eq!(t.announced[1], Some(t.bases[1]));
            assert_eq!(t.announced[2], Some(t.bases[2]));
        }
    }

    #[test]
    fn original_sessions_are_reproducible_and_parallel_safe() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 200);
        let a = run_session_original(&cfg).unwrap();
        let b = run_session_original(&cfg).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
        // Sequential execution of the same per-round streams matches too.
        let seq: Vec<RoundTranscript> = (0..cfg.rounds)
            .map(|round| {
                let mut rng = SeededRng::with_stream(cfg.seed, round as u64);
                run_round_original(&cfg, round, &mut rng).unwrap()
            })
            .collect();
        assert_eq!(ja, serde_json::to_string(&seq).unwrap());
    }

    #[test]
    fn bootstrap_tuple_is_always_consistent() {
        for d in [2usize, 3, 4, 5, 7] {
            let mut cfg = config(d, BasisKind::Mbb, Variant::Modified, 1);
            cfg.n = 4;
            for stream in 0..100 {
                let mut rng = SeededRng::with_stream(5, stream);
                let tuple = qkd_bootstrap(&cfg, &mut rng);
                assert_eq!(tuple.len(), 4);
                assert!(ghz::bases_consistent(&tuple, d), "d={d} tuple {tuple:?}");
                assert!(tuple.iter().all(|&b| b < d));
            }
        }
    }

    #[test]
    fn modified_sessions_chain_bases_and_stay_valid() {
        for (d, kind) in [(3usize, BasisKind::Mub), (4, BasisKind::Mbb)] {
            let cfg = config(d, kind, Variant::Modified, 60);
            let transcripts = run_session_modified(&cfg).unwrap();
            assert_eq!(transcripts.len(), 60);
            for pair in transcripts.windows(2) {
                assert_eq!(pair[1].bases, pair[0].outcomes, "chaining broken");
            }
            for t in &transcripts {
                assert!(t.valid);
                // Chained bases inherit consistency from the outcome law.
                assert!(ghz::bases_consistent(&t.bases, d));
                assert!(t.outcomes_consistent(d));
                assert!(t.announced.iter().all(Option::is_none));
            }
        }
    }

    #[test]
    fn sift_keeps_only_valid_rounds_in_order() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 300);
        let transcripts = run_session_original(&cfg).unwrap();
        let sifted = sift(&transcripts);
        assert!(sifted.iter().all(|t| t.valid));
        let rounds: Vec<usize> = sifted.iter().map(|t| t.round).collect();
        let mut sorted = rounds.clone();
        sorted.sort_unstable();
        assert_eq!(rounds, sorted);
        let valid_count = transcripts.iter().filter(|t| t.valid).count();
        assert_eq!(sifted.len(), valid_count);
    }

    #[test]
    fn eavesdrop_test_marks_only_valid_rounds_and_counts_mismatches() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 500);
        let mut transcripts = run_session_original(&cfg).unwrap();
        let mut rng = SeededRng::with_stream(cfg.seed, TEST_DESIGNATION_STREAM);
        let stats = eavesdrop_test(&mut transcripts, 3, 0.5, &mut rng).unwrap();
        assert_eq!(stats.mismatches, 0, "honest run must not trip detection");
        assert_eq!(stats.rate, 0.0);
        for t in &transcripts {
            if t.test {
                assert!(t.valid);
                assert_eq!(t.check_passed, Some(true));
            } else {
                assert_eq!(t.check_passed, None);
            }
        }
        assert!(stats.test_rounds > 0);
        assert!(stats.test_rounds < stats.sifted_rounds);
    }

    #[test]
    fn eavesdrop_test_requires_valid_rounds() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 1);
        let mut rng = SeededRng::with_stream(9, 0);
        let t = run_round_original_with_bases(&cfg, 0, &[1, 1, 0], &mut rng).unwrap();
        let mut transcripts = vec![t];
        let mut test_rng = SeededRng::with_stream(9, 1);
        assert!(matches!(
            eavesdrop_test(&mut transcripts, 3, 0.5, &mut test_rng),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn reconstruction_recovers_the_dealer_key_exactly() {
        for (d, kind, variant) in [
            (3usize, BasisKind::Mub, Variant::Original),
            (5, BasisKind::Mub, Variant::Original),
            (4, BasisKind::Mbb, Variant::Modified),
        ] {
            let cfg = config(d, kind, variant, 600);
            let session = run_session(&cfg).unwrap();
            assert!(!session.key.is_empty(), "d={d} produced no key");
            let rebuilt = reconstruct_secret(&session.key, d).unwrap();
            assert_eq!(rebuilt, session.key.dealer_key, "d={d} kind={kind}");
        }
    }

    #[test]
    fn reconstruction_examples() {
        let record = KeyRecord {
            round_indices: vec![0, 1],
            dealer_key: vec![0, 0],
            participant_outcomes: vec![vec![1, 0], vec![2, 0]],
        };
        assert_eq!(reconstruct_secret(&record, 3).unwrap(), vec![0, 0]);
        let record = KeyRecord {
            round_indices: vec![0],
            dealer_key: vec![0],
            participant_outcomes: vec![vec![0], vec![0]],
        };
        assert_eq!(reconstruct_secret(&record, 5).unwrap(), vec![0]);
    }

    #[test]
    fn reconstruction_rejects_missing_party_data() {
        let record = KeyRecord {
            round_indices: vec![0, 1],
            dealer_key: vec![0, 1],
            participant_outcomes: vec![vec![1], vec![2, 0]],
        };
        assert!(matches!(
            reconstruct_secret(&record, 3),
            Err(Error::MissingPartyData(_))
        ));
        let record = KeyRecord {
            round_indices: vec![],
            dealer_key: vec![],
            participant_outcomes: vec![],
        };
        assert!(reconstruct_secret(&record, 3).is_err());
    }

    #[test]
    fn session_summary_reflects_the_run() {
        let cfg = config(3, BasisKind::Mub, Variant::Modified, 80);
        let session = run_session(&cfg).unwrap();
        let summary = session.summary();
        assert_eq!(summary.sifted_count, 80, "modified keeps every round");
        assert_eq!(summary.detection_rate, 0.0);
        assert_eq!(
            summary.key_length,
            session.transcripts.iter().filter(|t| !t.test).count()
        );
        assert_eq!(summary.test_count + summary.key_length, 80);
    }

    #[test]
    fn transcript_jsonl_schema_is_stable() {
        let cfg = config(3, BasisKind::Mub, Variant::Original, 5);
        let session = run_session(&cfg).unwrap();
        let line = serde_json::to_string(&session.transcripts[0]).unwrap();
        let value: serde_json::Value = serde_json::from_str(&line).unwrap();
        let obj = value.as_object().unwrap();
        for key in ["round", "bases", "outcomes", "announced", "valid", "test", "check_passed"] {
            assert!(obj.contains_key(key), "missing key {key} in {line}");
        }
        assert!(!obj.contains_key("adversary"), "honest rounds carry no adversary note");
        let round_trip: RoundTranscript = serde_json::from_str(&line).unwrap();
        assert_eq!(round_trip.round, session.transcripts[0].round);
        assert_eq!(round_trip.bases, session.transcripts[0].bases);
    }
}
