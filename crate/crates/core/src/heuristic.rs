//! The errorless heuristic and the α-sphere failure scanner.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::IsoEngine;
use crate::lang::{PaddableLanguage, DEFAULT_DECIDE_LEN};
use crate::report::biguint_string;
use crate::rng::{SeededRng, DEFAULT_SEED};
use crate::sigma::{Alphabet, Sphere, SymString, DEFAULT_ENUMERATION_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
    Unknown,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Unknown => "unknown",
        })
    }
}

/// Reads the answer off `phi(x)`: odd weight means `phi(x) ∈ H`, an even
/// asymmetric image means `phi(x) ∉ H`, and a symmetric image is undecided.
pub fn decision_for_image(image: &SymString) -> Decision {
    if image.has_odd_weight() {
        Decision::Accept
    } else if image.is_symmetric() {
        Decision::Unknown
    } else {
        Decision::Reject
    }
}

pub fn classify(engine: &IsoEngine, x: &SymString) -> Result<Decision> {
    Ok(decision_for_image(&engine.phi(x)?))
}

/// `k^(-n/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub k: u8,
    pub n: usize,
}

impl Bound {
    pub fn value(self) -> f64 {
        f64::from(self.k).powf(-(self.n as f64) / 2.0)
    }

    /// `1 / k^(n/2)` as `(numerator, denominator)` when `n` is even.
    pub fn as_rational(self) -> Option<(BigUint, BigUint)> {
        self.n.is_multiple_of(2).then(|| {
            (
                BigUint::from(1u8),
                BigUint::from(self.k).pow((self.n / 2) as u32),
            )
        })
    }

    /// Exact test of `failures / total <= k^(-n/2)`, i.e.
    /// `failures² · k^n <= total²`.
    pub fn admits(self, failures: &BigUint, total: &BigUint) -> bool {
        let kn = BigUint::from(self.k).pow(self.n as u32);
        failures * failures * kn <= total * total
    }
}

pub fn bound(n: usize, k: u8) -> Bound {
    Bound { k, n }
}

/// Number of symmetric strings of length `n`.
pub fn symmetric_count(alphabet: Alphabet, n: usize) -> BigUint {
    if n.is_multiple_of(2) {
        alphabet.sphere_size(n / 2)
    } else {
        BigUint::from(0u8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanMode::Exhaustive => "exhaustive",
            ScanMode::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub mode: ScanMode,
    pub samples: u64,
    pub seed: u64,
    pub enumeration_budget: u64,
    /// Skip decider cross-checks on encoded strings longer than this.
    pub decide_len: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            mode: ScanMode::Exhaustive,
            samples: 10_000,
            seed: DEFAULT_SEED,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            decide_len: DEFAULT_DECIDE_LEN,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureStats {
    pub n: usize,
    pub k: u8,
    #[serde(serialize_with = "biguint_string")]
    pub sphere_size: BigUint,
    pub mode: ScanMode,
    /// Strings examined: the whole sphere, or the sample count.
    pub examined: u64,
    pub failures: u64,
    /// `k^(n/2)` for even `n`, else 0; exhaustive mode only.
    pub expected_failures: Option<u64>,
    pub rate: f64,
    /// Wilson 95% interval; sampled mode only.
    pub ci: Option<(f64, f64)>,
    pub bound: f64,
    pub within_bound: bool,
    pub correctness_checked: u64,
    pub correctness_skipped: u64,
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) / n) + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Default)]
struct Tally {
    failures: u64,
    checked: u64,
    skipped: u64,
}

impl Tally {
    fn add(mut self, other: Tally) -> Tally {
        self.failures += other.failures;
        self.checked += other.checked;
        self.skipped += other.skipped;
        self
    }
}

fn visit(
    engine: &IsoEngine,
    z: &SymString,
    checker: Option<&PaddableLanguage>,
    decide_len: usize,
    tally: &mut Tally,
) -> Result<()> {
    let x = engine.alpha(z)?;
    let decision = classify(engine, &x)?;
    if decision == Decision::Unknown {
        tally.failures += 1;
        return Ok(());
    }
    if let Some(lang) = checker {
        if x.len() > decide_len {
            tally.skipped += 1;
            return Ok(());
        }
        let member = lang.decide(&x);
        tally.checked += 1;
        if member != (decision == Decision::Accept) {
            return Err(Error::CorrectnessViolation {
                input: x.to_string(),
                decision: decision.to_string(),
                member,
            });
        }
    }
    Ok(())
}

/// Classifies every `alpha(z)` with `|z| = n` (or a seeded sample of them)
/// and counts the undecided answers. With `checker`, every accept/reject is
/// cross-checked against the decider.
pub fn scan_alpha_sphere(
    engine: &IsoEngine,
    n: usize,
    options: &ScanOptions,
    checker: Option<&PaddableLanguage>,
) -> Result<FailureStats> {
    let alphabet = engine.context().base().alphabet();
    let sphere_size = alphabet.sphere_size(n);
    let bound = bound(n, alphabet.k());

    let (examined, tally) = match options.mode {
        ScanMode::Exhaustive => {
            let sphere = Sphere::new(alphabet, n, options.enumeration_budget)?;
            let parts = (rayon::current_num_threads() * 8)
                .min(sphere.len() as usize)
                .max(1);
            let tallies: Vec<Result<Tally>> = (0..parts)
                .into_par_iter()
                .map(|i| {
                    let mut tally = Tally::default();
                    for z in sphere.chunk(i, parts) {
                        visit(engine, &z, checker, options.decide_len, &mut tally)?;
                    }
                    Ok(tally)
                })
                .collect();
            let mut total = Tally::default();
            for t in tallies {
                total = total.add(t?);
            }
            (sphere.len(), total)
        }
        ScanMode::Sampled => {
            let tallies: Vec<Result<Tally>> = (0..options.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = SeededRng::for_task(options.seed, n as u64, i);
                    let z = rng.string(alphabet, n);
                    let mut tally = Tally::default();
                    visit(engine, &z, checker, options.decide_len, &mut tally)?;
                    Ok(tally)
                })
                .collect();
            let mut total = Tally::default();
            for t in tallies {
                total = total.add(t?);
            }
            (options.samples, total)
        }
    };

    let rate = if examined == 0 {
        0.0
    } else {
        tally.failures as f64 / examined as f64
    };
    let (expected_failures, ci, within_bound) = match options.mode {
        ScanMode::Exhaustive => {
            let expected =
                u64::try_from(symmetric_count(alphabet, n)).expect("fits: k^n within budget");
            if tally.failures != expected {
                return Err(Error::FailureLaw {
                    n,
                    expected,
                    found: tally.failures,
                });
            }
            let ok = bound.admits(&BigUint::from(tally.failures), &sphere_size);
            (Some(expected), None, ok)
        }
        ScanMode::Sampled => {
            let ci = wilson_interval(tally.failures, examined);
            (None, Some(ci), ci.0 <= bound.value())
        }
    };

    Ok(FailureStats {
        n,
        k: alphabet.k(),
        sphere_size,
        mode: options.mode,
        examined,
        failures: tally.failures,
        expected_failures,
        rate,
        ci,
        bound: bound.value(),
        within_bound,
        correctness_checked: tally.checked,
        correctness_skipped: tally.skipped,
    })
}
