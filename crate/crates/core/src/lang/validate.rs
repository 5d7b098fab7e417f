use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::PaddableLanguage;
use crate::error::{Error, Result};
use crate::rng::{SeededRng, DEFAULT_SEED};
use crate::sigma::{enumerate_ball, SymString, DEFAULT_ENUMERATION_BUDGET};

pub const CHECK_WITNESSES: &str = "witnesses";
pub const CHECK_DEC_PAD: &str = "dec∘pad = id";
pub const CHECK_LENGTH: &str = "|pad(x,y)| > |x|+|y|";
pub const CHECK_MEMBERSHIP: &str = "pad(x,y) ∈ L ⟺ x ∈ L";

/// Length cap on inputs handed to a decider outside exhaustive regions.
pub const DEFAULT_DECIDE_LEN: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    pub exhaustive_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub enumeration_budget: u64,
    pub decide_len: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            exhaustive_len: 5,
            samples: 1000,
            seed: DEFAULT_SEED,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            decide_len: DEFAULT_DECIDE_LEN,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub x: SymString,
    pub y: SymString,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl InvariantCheck {
    fn new(name: &'static str) -> Self {
        InvariantCheck {
            name,
            passed: true,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, failure: Option<Counterexample>) {
        self.checked += 1;
        if let Some(c) = failure {
            if self.passed {
                self.passed = false;
                self.counterexample = Some(c);
            }
        }
    }

    fn merge(&mut self, other: InvariantCheck) {
        self.checked += other.checked;
        if !other.passed && self.passed {
            self.passed = false;
            self.counterexample = other.counterexample;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub language: String,
    pub k: u8,
    pub exhaustive_len: usize,
    pub exhaustive_pairs: u64,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct PairChecks {
    dec_pad: InvariantCheck,
    length: InvariantCheck,
    membership: InvariantCheck,
}

impl PairChecks {
    fn new() -> Self {
        PairChecks {
            dec_pad: InvariantCheck::new(CHECK_DEC_PAD),
            length: InvariantCheck::new(CHECK_LENGTH),
            membership: InvariantCheck::new(CHECK_MEMBERSHIP),
        }
    }

    fn merge(mut self, other: PairChecks) -> Self {
        self.dec_pad.merge(other.dec_pad);
        self.length.merge(other.length);
        self.membership.merge(other.membership);
        self
    }

    /// `x_member` is `None` when the decider is out of budget for this pair.
    fn run(
        &mut self,
        lang: &PaddableLanguage,
        x: &SymString,
        y: &SymString,
        x_member: Option<bool>,
        decide_len: usize,
    ) {
        let padded = lang.pad(x, y);
        let cx = |detail: String| Counterexample {
            x: x.clone(),
            y: y.clone(),
            detail,
        };

        let decoded = lang.dec(&padded);
        self.dec_pad.record(
            (decoded != *y).then(|| cx(format!("dec(pad(x,y)) = {decoded:?}, expected {y:?}"))),
        );

        self.length
            .record((padded.len() <= x.len() + y.len()).then(|| {
                cx(format!(
                    "|pad(x,y)| = {} but |x|+|y| = {}",
                    padded.len(),
                    x.len() + y.len()
                ))
            }));

        if let Some(member) = x_member {
            if padded.len() <= decide_len {
                let padded_member = lang.decide(&padded);
                self.membership.record((padded_member != member).then(|| {
                    cx(format!(
                        "decide(pad(x,y)) = {padded_member} but decide(x) = {member}"
                    ))
                }));
            }
        }
    }
}

/// Checks the plugin contract exhaustively for `|x|, |y| <= exhaustive_len`,
/// then on `samples` seeded random longer pairs.
pub fn validate_language(
    lang: &PaddableLanguage,
    options: &ValidationOptions,
) -> Result<ValidationReport> {
    let alphabet = lang.alphabet();
    let ball_size: BigUint = (0..=options.exhaustive_len)
        .map(|n| alphabet.sphere_size(n))
        .sum();
    let pairs = &ball_size * &ball_size;
    if pairs > BigUint::from(options.enumeration_budget) {
        return Err(Error::budget(
            "exhaustive validation pairs",
            pairs,
            options.enumeration_budget,
        ));
    }
    let ball = enumerate_ball(alphabet, options.exhaustive_len, options.enumeration_budget)?;

    let mut witnesses = InvariantCheck::new(CHECK_WITNESSES);
    let w_empty = SymString::empty(alphabet);
    witnesses.record((!lang.decide(lang.w1())).then(|| Counterexample {
        x: lang.w1().clone(),
        y: w_empty.clone(),
        detail: "w1 is not a member".into(),
    }));
    witnesses.record(lang.decide(lang.w0()).then(|| Counterexample {
        x: lang.w0().clone(),
        y: w_empty.clone(),
        detail: "w0 is a member".into(),
    }));

    let exhaustive = ball
        .par_iter()
        .map(|x| {
            let member = lang.decide(x);
            let mut checks = PairChecks::new();
            for y in &ball {
                checks.run(lang, x, y, Some(member), usize::MAX);
            }
            checks
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(PairChecks::new(), PairChecks::merge);

    let lo = options.exhaustive_len + 1;
    let hi = 2 * options.exhaustive_len + 16;
    let sampled = (0..options.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::for_task(options.seed, 0x7661_6c69, i as u64);
            let x_len = rng.length_between(lo, hi);
            let y_len = rng.length_between(lo, hi);
            let x = rng.string(alphabet, x_len);
            let y = rng.string(alphabet, y_len);
            let member = (x.len() <= options.decide_len).then(|| lang.decide(&x));
            let mut checks = PairChecks::new();
            checks.run(lang, &x, &y, member, options.decide_len);
            checks
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(PairChecks::new(), PairChecks::merge);

    let combined = exhaustive.merge(sampled);
    let checks = vec![
        witnesses,
        combined.dec_pad,
        combined.length,
        combined.membership,
    ];
    Ok(ValidationReport {
        language: lang.name().to_string(),
        k: alphabet.k(),
        exhaustive_len: options.exhaustive_len,
        exhaustive_pairs: (ball.len() * ball.len()) as u64,
        samples: options.samples,
        seed: options.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lang::{wrap_core, wrap_core_with, IdentityPadding, NullDecPadding, ParityOdd};
    use crate::sigma::Alphabet;

    fn parity() -> crate::lang::CorePredicate {
        ParityOdd::predicate(Alphabet::BINARY)
    }

    #[test]
    fn parity_wrapper_passes() {
        let lang = wrap_core(&parity()).unwrap();
        let opts = ValidationOptions {
            exhaustive_len: 5,
            samples: 200,
            ..Default::default()
        };
        let report = validate_language(&lang, &opts).unwrap();
        assert!(report.passed, "{report:#?}");
        assert_eq!(report.exhaustive_pairs, 63 * 63);
        assert_eq!(report.check(CHECK_DEC_PAD).unwrap().checked, 63 * 63 + 200);
    }

    #[test]
    fn null_dec_is_flagged() {
        let lang = wrap_core_with(&parity(), Arc::new(NullDecPadding)).unwrap();
        let report = validate_language(&lang, &ValidationOptions::default()).unwrap();
        assert!(!report.passed);
        let check = report.check(CHECK_DEC_PAD).unwrap();
        assert!(!check.passed);
        let c = check.counterexample.as_ref().unwrap();
        assert_eq!(c.x.to_string(), "");
        assert_eq!(c.y.to_string(), "0");
        assert!(report.check(CHECK_LENGTH).unwrap().passed);
        assert!(report.check(CHECK_MEMBERSHIP).unwrap().passed);
    }

    #[test]
    fn identity_pad_is_flagged_for_length() {
        let lang = wrap_core_with(&parity(), Arc::new(IdentityPadding)).unwrap();
        let report = validate_language(&lang, &ValidationOptions::default()).unwrap();
        let check = report.check(CHECK_LENGTH).unwrap();
        assert!(!check.passed);
        let c = check.counterexample.as_ref().unwrap();
        assert_eq!((c.x.len(), c.y.len()), (0, 0));
    }

    #[test]
    fn budget_is_enforced() {
        let lang = wrap_core(&parity()).unwrap();
        let opts = ValidationOptions {
            exhaustive_len: 12,
            ..Default::default()
        };
        assert!(matches!(
            validate_language(&lang, &opts),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn report_is_deterministic() {
        let lang = wrap_core(&parity()).unwrap();
        let opts = ValidationOptions {
            exhaustive_len: 3,
            samples: 50,
            seed: 99,
            ..Default::default()
        };
        let a = serde_json::to_string(&validate_language(&lang, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&validate_language(&lang, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
