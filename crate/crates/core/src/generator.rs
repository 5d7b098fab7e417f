//! Certified instance generator.
//!
//! For size parameter `n`: draw a uniform `z` of odd length
//! `m = 4⌊n/2⌋ + 3`, repair its weight parity with a single random
//! opposite-parity substitution when it disagrees with the requested sign,
//! and output `alpha(z)`. Odd length means `z` is never symmetric, so
//! `z ∈ H` exactly when its weight is odd, and `alpha` carries that to
//! membership in `L`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::iso::IsoEngine;
use crate::lang::PaddableLanguage;
use crate::report::biguint_string;
use crate::rng::SeededRng;
use crate::sigma::{Alphabet, Sphere, SymString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    /// Weight parity of `z` that yields this sign.
    pub fn wants_odd_weight(self) -> bool {
        self == Sign::Pos
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Pos => "pos",
            Sign::Neg => "neg",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(Sign::Pos),
            "neg" => Ok(Sign::Neg),
            other => Err(Error::Config(format!(
                "sign must be pos or neg, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenRequest {
    pub n: usize,
    pub sign: Sign,
    pub count: usize,
    pub seed: u64,
}

/// `m = 4⌊n/2⌋ + 3`: `2n + 3` for even `n`, `2n + 1` for odd `n`.
pub fn source_length(n: usize) -> usize {
    4 * (n / 2) + 3
}

fn task_domain(n: usize, sign: Sign) -> u64 {
    0x6765_6e00_0000_0000 ^ ((n as u64) << 1) ^ u64::from(sign == Sign::Neg)
}

/// Replaces one uniformly chosen position by a uniform symbol of the
/// opposite parity.
pub fn flip_parity(z: &SymString, rng: &mut SeededRng) -> SymString {
    let k = u64::from(z.alphabet().k());
    let mut symbols = z.symbols().to_vec();
    let pos = rng.below(symbols.len() as u64) as usize;
    let target_parity = u64::from(symbols[pos].is_multiple_of(2));
    // symbols with parity p are p, p+2, ..., ceil((k - p) / 2) of them
    let choices = (k - target_parity).div_ceil(2);
    symbols[pos] = (target_parity + 2 * rng.below(choices)) as u8;
    SymString::new(z.alphabet(), symbols).expect("replacement below k")
}

/// The source string `z` before the final encoding.
pub fn draw_source(alphabet: Alphabet, n: usize, sign: Sign, rng: &mut SeededRng) -> SymString {
    let z = rng.string(alphabet, source_length(n));
    if z.has_odd_weight() == sign.wants_odd_weight() {
        z
    } else {
        flip_parity(&z, rng)
    }
}

/// Instance `index` of a request; independent of every other index.
pub fn generate_one(
    engine: &IsoEngine,
    n: usize,
    sign: Sign,
    seed: u64,
    index: u64,
) -> Result<SymString> {
    let alphabet = engine.context().base().alphabet();
    let mut rng = SeededRng::for_task(seed, task_domain(n, sign), index);
    let z = draw_source(alphabet, n, sign, &mut rng);
    engine.alpha(&z)
}

pub fn generate(engine: &IsoEngine, req: &GenRequest) -> Result<Vec<SymString>> {
    (0..req.count as u64)
        .into_par_iter()
        .map(|i| generate_one(engine, req.n, req.sign, req.seed, i))
        .collect()
}

/// Runs the decider on every output. Outputs longer than `decide_len` are
/// left unverified (`None`); a wrong sign is an error naming the instance.
pub fn verify_outputs(
    lang: &PaddableLanguage,
    outputs: &[SymString],
    sign: Sign,
    seed: u64,
    decide_len: usize,
) -> Result<Vec<Option<bool>>> {
    let verdicts: Vec<Option<bool>> = outputs
        .par_iter()
        .map(|x| (x.len() <= decide_len).then(|| lang.decide(x) == (sign == Sign::Pos)))
        .collect();
    if let Some(index) = verdicts.iter().position(|v| *v == Some(false)) {
        return Err(Error::SignViolation {
            index,
            seed,
            expected: if sign == Sign::Pos {
                "a member"
            } else {
                "a non-member"
            },
            instance: outputs[index].to_string(),
        });
    }
    Ok(verdicts)
}

/// Number of length-`m` strings whose weight has the given parity,
/// by dynamic programming over positions.
pub fn parity_count(alphabet: Alphabet, m: usize, odd: bool) -> BigUint {
    let k = u32::from(alphabet.k());
    let evens = BigUint::from(k.div_ceil(2));
    let odds = BigUint::from(k / 2);
    let mut even_count = BigUint::from(1u8);
    let mut odd_count = BigUint::from(0u8);
    for _ in 0..m {
        let next_even = &even_count * &evens + &odd_count * &odds;
        let next_odd = &even_count * &odds + &odd_count * &evens;
        even_count = next_even;
        odd_count = next_odd;
    }
    if odd {
        odd_count
    } else {
        even_count
    }
}

/// Size `M` of the output support for `(n, sign)`. Always at least
/// `⌊k^m / 2⌋ >= k^(2n)`.
pub fn support_size(alphabet: Alphabet, n: usize, sign: Sign) -> BigUint {
    let m = source_length(n);
    let count = parity_count(alphabet, m, sign.wants_odd_weight());
    let half = alphabet.sphere_size(m) / 2u8;
    assert!(count >= half && half >= alphabet.sphere_size(2 * n));
    count
}

/// Exact distribution of the substitution step applied to a uniform string
/// of length `m` with the given starting parity, by enumerating every
/// `(z, position, replacement)` triple.
pub fn exact_flip_distribution(
    alphabet: Alphabet,
    m: usize,
    start_odd: bool,
    budget: u64,
) -> Result<BTreeMap<SymString, Ratio<u64>>> {
    let k = alphabet.k();
    let starts: Vec<SymString> = Sphere::new(alphabet, m, budget)?
        .iter()
        .filter(|z| z.has_odd_weight() == start_odd)
        .collect();
    let mut dist: BTreeMap<SymString, Ratio<u64>> = BTreeMap::new();
    let per_start = Ratio::new(1, starts.len() as u64);
    for z in &starts {
        for pos in 0..m {
            let current = z.symbols()[pos];
            let replacements: Vec<u8> = (0..k).filter(|s| s % 2 != current % 2).collect();
            let weight = per_start / Ratio::from_integer((m * replacements.len()) as u64);
            for &r in &replacements {
                let mut symbols = z.symbols().to_vec();
                symbols[pos] = r;
                let z2 = SymString::new(alphabet, symbols)?;
                *dist.entry(z2).or_insert_with(|| Ratio::from_integer(0)) += weight;
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub k: u8,
    pub n: usize,
    pub m: usize,
    pub sign: Sign,
    pub support: u64,
    pub samples: u64,
    pub chi_square: f64,
    pub dof: u64,
    pub p_value: f64,
    pub passed: bool,
}

pub const UNIFORMITY_P_THRESHOLD: f64 = 0.001;

/// Enumerates the support `{alpha(z) : |z| = m, parity(z) = sign}`, draws
/// `samples` outputs and runs a chi-square test against the uniform law.
pub fn uniformity_test(
    engine: &IsoEngine,
    n: usize,
    sign: Sign,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<UniformityReport> {
    let alphabet = engine.context().base().alphabet();
    let m = source_length(n);
    let sphere = Sphere::new(alphabet, m, budget)?;
    let mut index: HashMap<SymString, usize> = HashMap::new();
    for z in sphere
        .iter()
        .filter(|z| z.has_odd_weight() == sign.wants_odd_weight())
    {
        let x = engine.alpha(&z)?;
        let next = index.len();
        index.insert(x, next);
    }
    let support = index.len() as u64;
    let expected_support = u64::try_from(support_size(alphabet, n, sign)).expect("within budget");
    if support != expected_support {
        return Err(Error::SupportMismatch {
            distinct: support,
            expected: expected_support,
        });
    }

    let req = GenRequest {
        n,
        sign,
        count: samples as usize,
        seed,
    };
    let mut counts = vec![0u64; index.len()];
    for x in generate(engine, &req)? {
        match index.get(&x) {
            Some(&i) => counts[i] += 1,
            None => {
                return Err(Error::OutsideSupport {
                    instance: x.to_string(),
                })
            }
        }
    }
    let expected = samples as f64 / support as f64;
    let chi_square: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = support - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .sf(chi_square);
    Ok(UniformityReport {
        k: alphabet.k(),
        n,
        m,
        sign,
        support,
        samples,
        chi_square,
        dof,
        p_value,
        passed: p_value >= UNIFORMITY_P_THRESHOLD,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthReport {
    pub n: usize,
    pub k: u8,
    pub samples: usize,
    pub undersized: usize,
    pub fraction: f64,
    /// `k^(-n)`
    pub bound: f64,
    /// Three binomial standard deviations at the bound.
    pub allowance: f64,
    pub passed: bool,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: f64,
}

pub fn length_bounds_check(outputs: &[SymString], n: usize, alphabet: Alphabet) -> LengthReport {
    let samples = outputs.len();
    let undersized = outputs.iter().filter(|x| x.len() < n).count();
    let fraction = if samples == 0 {
        0.0
    } else {
        undersized as f64 / samples as f64
    };
    let bound = f64::from(alphabet.k()).powi(-(n as i32));
    let allowance = if samples == 0 {
        0.0
    } else {
        3.0 * (bound * (1.0 - bound) / samples as f64).sqrt()
    };
    let lens = outputs.iter().map(SymString::len);
    LengthReport {
        n,
        k: alphabet.k(),
        samples,
        undersized,
        fraction,
        bound,
        allowance,
        passed: fraction <= bound + allowance,
        min_len: lens.clone().min().unwrap_or(0),
        max_len: lens.clone().max().unwrap_or(0),
        mean_len: if samples == 0 {
            0.0
        } else {
            lens.sum::<usize>() as f64 / samples as f64
        },
    }
}

/// Least-squares slope of `log(len)` against `log(n)`: the empirical degree
/// of the length polynomial. Points with `n = 0` are ignored.
pub fn fit_degree(points: &[(usize, usize)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, len)| *n > 0 && *len > 0)
        .map(|&(n, len)| ((n as f64).ln(), (len as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub instance: SymString,
    pub len: usize,
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenReport {
    pub language: String,
    pub k: u8,
    pub n: usize,
    pub m: usize,
    pub sign: Sign,
    pub seed: u64,
    pub count: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: f64,
    /// Outputs with `|x| < n`.
    pub undersized: usize,
    #[serde(serialize_with = "biguint_string")]
    pub support_size: BigUint,
    /// `a^n` with `a = k²`.
    #[serde(serialize_with = "biguint_string")]
    pub support_lower_bound: BigUint,
    pub fit_exponent: Option<f64>,
    pub instances: Vec<InstanceRecord>,
}

impl GenReport {
    pub fn new(
        language: &str,
        alphabet: Alphabet,
        req: &GenRequest,
        outputs: &[SymString],
        verified: Option<&[Option<bool>]>,
    ) -> Self {
        let lengths = length_bounds_check(outputs, req.n, alphabet);
        let instances = outputs
            .iter()
            .enumerate()
            .map(|(i, x)| InstanceRecord {
                instance: x.clone(),
                len: x.len(),
                verified: verified.and_then(|v| v[i]),
            })
            .collect();
        GenReport {
            language: language.to_string(),
            k: alphabet.k(),
            n: req.n,
            m: source_length(req.n),
            sign: req.sign,
            seed: req.seed,
            count: outputs.len(),
            min_len: lengths.min_len,
            max_len: lengths.max_len,
            mean_len: lengths.mean_len,
            undersized: lengths.undersized,
            support_size: support_size(alphabet, req.n, req.sign),
            support_lower_bound: alphabet.sphere_size(2 * req.n),
            fit_exponent: None,
            instances,
        }
    }
}
