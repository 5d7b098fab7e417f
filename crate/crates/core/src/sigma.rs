//! Strings over the alphabet `{0, …, k-1}` and the primitives every other
//! module builds on: weight, symmetry, sphere enumeration and the
//! self-delimiting block codec.

use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the number of strings a single exhaustive scan may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

/// Alphabet of `k` symbols, identified with `0..k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(k: u32) -> Result<Self> {
        if (2..=255).contains(&k) {
            Ok(Alphabet(k as u8))
        } else {
            Err(Error::InvalidAlphabet(k))
        }
    }

    pub fn k(self) -> u8 {
        self.0
    }

    pub fn contains(self, symbol: u8) -> bool {
        symbol < self.0
    }

    /// Exact number of strings of length `n`.
    pub fn sphere_size(self, n: usize) -> BigUint {
        BigUint::from(self.0).pow(n as u32)
    }

    /// `k^n` if it fits into a `u64`.
    pub fn sphere_size_u64(self, n: usize) -> Option<u64> {
        u64::from(self.0).checked_pow(u32::try_from(n).ok()?)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite string over an [`Alphabet`]. The empty string is a valid value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymString {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl SymString {
    pub fn empty(alphabet: Alphabet) -> Self {
        SymString {
            alphabet,
            symbols: Vec::new(),
        }
    }

    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::InvalidSymbol {
                symbol: bad.into(),
                k: alphabet.k(),
            });
        }
        Ok(SymString { alphabet, symbols })
    }

    /// Caller guarantees every symbol is below `k`.
    pub(crate) fn from_raw(alphabet: Alphabet, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        SymString { alphabet, symbols }
    }

    /// Parses the textual form: one digit per symbol when `k <= 10`,
    /// comma-separated integers otherwise. The empty text is λ.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            input: text.to_string(),
            k: alphabet.k(),
            reason,
        };
        let text = text.trim();
        let mut symbols = Vec::new();
        if text.is_empty() {
            return Ok(SymString::empty(alphabet));
        }
        if alphabet.k() <= 10 {
            for ch in text.chars() {
                let digit = ch
                    .to_digit(10)
                    .ok_or_else(|| parse_err(format!("{ch:?} is not a digit")))?;
                if digit >= u32::from(alphabet.k()) {
                    return Err(parse_err(format!("symbol {digit} is not below k")));
                }
                symbols.push(digit as u8);
            }
        } else {
            for part in text.split(',') {
                let value: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("{part:?} is not an integer")))?;
                if value >= u32::from(alphabet.k()) {
                    return Err(parse_err(format!("symbol {value} is not below k")));
                }
                symbols.push(value as u8);
            }
        }
        Ok(SymString { alphabet, symbols })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Sum of the symbol values.
    pub fn weight(&self) -> u64 {
        weight(&self.symbols)
    }

    pub fn has_odd_weight(&self) -> bool {
        self.weight() % 2 == 1
    }

    /// True iff the string is `uu` for some `u`. λ is symmetric.
    pub fn is_symmetric(&self) -> bool {
        half_if_symmetric(&self.symbols).is_some()
    }

    /// The `u` of a symmetric string `uu`.
    pub fn symmetric_half(&self) -> Option<SymString> {
        half_if_symmetric(&self.symbols).map(|h| SymString::from_raw(self.alphabet, h.to_vec()))
    }

    pub fn concat(&self, other: &SymString) -> SymString {
        debug_assert_eq!(self.alphabet, other.alphabet);
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        SymString::from_raw(self.alphabet, symbols)
    }

    /// `self · self`
    pub fn doubled(&self) -> SymString {
        self.concat(self)
    }

    pub fn suffix(&self, start: usize) -> SymString {
        SymString::from_raw(self.alphabet, self.symbols[start..].to_vec())
    }
}

impl fmt::Display for SymString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.k() <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"/k{}", self.alphabet.k())
    }
}

impl Serialize for SymString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn weight(symbols: &[u8]) -> u64 {
    symbols.iter().map(|&s| u64::from(s)).sum()
}

fn half_if_symmetric(symbols: &[u8]) -> Option<&[u8]> {
    if !symbols.len().is_multiple_of(2) {
        return None;
    }
    let (a, b) = symbols.split_at(symbols.len() / 2);
    (a == b).then_some(a)
}

/// All `k^n` strings of length `n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Sphere {
    alphabet: Alphabet,
    n: usize,
    size: u64,
}

impl Sphere {
    /// Fails with a budget error when `k^n` exceeds `budget`.
    pub fn new(alphabet: Alphabet, n: usize, budget: u64) -> Result<Self> {
        match alphabet.sphere_size_u64(n) {
            Some(size) if size <= budget => Ok(Sphere { alphabet, n, size }),
            _ => Err(Error::budget(
                "sphere enumeration",
                alphabet.sphere_size(n),
                budget,
            )),
        }
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self) -> usize {
        self.n
    }

    /// The string at lexicographic rank `index`.
    pub fn nth(&self, index: u64) -> SymString {
        assert!(index < self.size, "rank {index} out of range");
        SymString::from_raw(self.alphabet, unrank(self.alphabet.k(), self.n, index))
    }

    pub fn iter(&self) -> SphereIter {
        self.range(0, self.size)
    }

    /// The `i`-th of `parts` disjoint contiguous chunks; the chunks cover the
    /// sphere in order.
    pub fn chunk(&self, i: usize, parts: usize) -> SphereIter {
        assert!(parts > 0 && i < parts);
        let parts = parts as u64;
        let i = i as u64;
        let lo = self.size * i / parts;
        let hi = self.size * (i + 1) / parts;
        self.range(lo, hi)
    }

    fn range(&self, lo: u64, hi: u64) -> SphereIter {
        SphereIter {
            alphabet: self.alphabet,
            current: unrank(
                self.alphabet.k(),
                self.n,
                lo.min(self.size.saturating_sub(1)),
            ),
            remaining: hi - lo,
        }
    }
}

fn unrank(k: u8, n: usize, mut index: u64) -> Vec<u8> {
    let mut symbols = vec![0u8; n];
    for slot in symbols.iter_mut().rev() {
        *slot = (index % u64::from(k)) as u8;
        index /= u64::from(k);
    }
    symbols
}

pub struct SphereIter {
    alphabet: Alphabet,
    current: Vec<u8>,
    remaining: u64,
}

impl Iterator for SphereIter {
    type Item = SymString;

    fn next(&mut self) -> Option<SymString> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = SymString::from_raw(self.alphabet, self.current.clone());
        if self.remaining > 0 {
            // odometer increment
            for slot in self.current.iter_mut().rev() {
                *slot += 1;
                if *slot < self.alphabet.k() {
                    break;
                }
                *slot = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Convenience wrapper over [`Sphere`].
pub fn enumerate_sphere(alphabet: Alphabet, n: usize, budget: u64) -> Result<SphereIter> {
    Ok(Sphere::new(alphabet, n, budget)?.iter())
}

/// Every string of length at most `max_len`, shortest first.
pub fn enumerate_ball(alphabet: Alphabet, max_len: usize, budget: u64) -> Result<Vec<SymString>> {
    let total: BigUint = (0..=max_len).map(|n| alphabet.sphere_size(n)).sum();
    if total > BigUint::from(budget) {
        return Err(Error::budget("ball enumeration", total, budget));
    }
    let mut out = Vec::new();
    for n in 0..=max_len {
        out.extend(Sphere::new(alphabet, n, budget)?.iter());
    }
    Ok(out)
}

const TERMINATOR: [u8; 2] = [0, 1];

/// Self-delimiting block: every symbol doubled, then the pair `(0, 1)`.
pub fn encode_block(y: &SymString) -> SymString {
    let mut symbols = Vec::with_capacity(2 * y.len() + 2);
    for &s in y.symbols() {
        symbols.push(s);
        symbols.push(s);
    }
    symbols.extend_from_slice(&TERMINATOR);
    SymString::from_raw(y.alphabet(), symbols)
}

/// Reads one block from the front of `symbols`. Returns the decoded payload
/// and the number of symbols consumed.
pub(crate) fn decode_block_prefix(symbols: &[u8]) -> Option<(Vec<u8>, usize)> {
    let mut payload = Vec::new();
    for (i, pair) in symbols.chunks_exact(2).enumerate() {
        match (pair[0], pair[1]) {
            (a, b) if a == b => payload.push(a),
            (0, 1) => return Some((payload, 2 * i + 2)),
            _ => return None,
        }
    }
    None
}

/// Inverse of [`encode_block`]: splits `z` into `(y, rest)` when `z` starts
/// with a well-formed block, otherwise `None`.
pub fn decode_block(z: &SymString) -> Option<(SymString, SymString)> {
    let (payload, used) = decode_block_prefix(z.symbols())?;
    Some((SymString::from_raw(z.alphabet(), payload), z.suffix(used)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str, k: u32) -> SymString {
        SymString::parse(text, Alphabet::new(k).unwrap()).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(s("", 2).weight(), 0);
        assert_eq!(s("101", 2).weight(), 2);
        assert_eq!(s("1203", 4).weight(), 6);
    }

    #[test]
    fn symmetry_examples() {
        assert!(s("0101", 2).is_symmetric());
        assert!(!s("01", 2).is_symmetric());
        assert!(s("", 2).is_symmetric());
        assert_eq!(s("0101", 2).symmetric_half(), Some(s("01", 2)));
    }

    #[test]
    fn sphere_examples() {
        let b = Alphabet::BINARY;
        let got: Vec<String> = enumerate_sphere(b, 2, 100)
            .unwrap()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(got, ["00", "01", "10", "11"]);

        let empty: Vec<SymString> = enumerate_sphere(b, 0, 100).unwrap().collect();
        assert_eq!(empty, vec![SymString::empty(b)]);

        let three: Vec<SymString> = enumerate_sphere(Alphabet::new(3).unwrap(), 2, 100)
            .unwrap()
            .collect();
        assert_eq!(three.len(), 9);
        assert_eq!(three[0].to_string(), "00");
        assert_eq!(three[8].to_string(), "22");
    }

    #[test]
    fn sphere_budget_refuses() {
        assert!(matches!(
            Sphere::new(Alphabet::BINARY, 23, DEFAULT_ENUMERATION_BUDGET),
            Err(Error::Budget { .. })
        ));
        assert!(Sphere::new(Alphabet::BINARY, 22, DEFAULT_ENUMERATION_BUDGET).is_ok());
        assert!(Sphere::new(Alphabet::BINARY, 200, u64::MAX).is_err());
    }

    #[test]
    fn chunks_partition_the_sphere() {
        let sphere = Sphere::new(Alphabet::new(3).unwrap(), 5, 1 << 20).unwrap();
        let whole: Vec<SymString> = sphere.iter().collect();
        for parts in [1, 2, 7, 243, 300] {
            let joined: Vec<SymString> = (0..parts).flat_map(|i| sphere.chunk(i, parts)).collect();
            assert_eq!(joined, whole, "parts={parts}");
        }
        for (i, x) in whole.iter().enumerate() {
            assert_eq!(&sphere.nth(i as u64), x);
        }
    }

    #[test]
    fn codec_examples() {
        assert_eq!(encode_block(&s("01", 2)).to_string(), "001101");
        assert_eq!(encode_block(&s("", 2)).to_string(), "01");
        assert_eq!(encode_block(&s("2", 3)).to_string(), "2201");

        assert_eq!(decode_block(&s("001101", 2)), Some((s("01", 2), s("", 2))));
        assert_eq!(decode_block(&s("00010", 2)), Some((s("0", 2), s("0", 2))));
        assert_eq!(decode_block(&s("10", 2)), None);
        assert_eq!(decode_block(&s("", 2)), None);
        assert_eq!(decode_block(&s("0011", 2)), None);
    }

    /// Independent brute-force codec: a string is `encode(y)·r` iff some
    /// split point makes the prefix equal to the doubled payload plus `01`.
    fn brute_decode(z: &SymString) -> Option<(SymString, SymString)> {
        let sym = z.symbols();
        (0..)
            .map(|len| 2 * len + 2)
            .take_while(|&end| end <= sym.len())
            .find_map(|end| {
                let body = &sym[..end - 2];
                let pairs_ok = body.chunks(2).all(|p| p[0] == p[1]);
                (pairs_ok && sym[end - 2..end] == [0, 1]).then(|| {
                    let y: Vec<u8> = body.chunks(2).map(|p| p[0]).collect();
                    (
                        SymString::from_raw(z.alphabet(), y),
                        SymString::from_raw(z.alphabet(), sym[end..].to_vec()),
                    )
                })
            })
    }

    #[test]
    fn decode_agrees_with_brute_force_up_to_length_8() {
        for k in [2, 3] {
            let a = Alphabet::new(k).unwrap();
            for z in enumerate_ball(a, 8, 1 << 20).unwrap() {
                assert_eq!(decode_block(&z), brute_decode(&z), "z={z:?}");
            }
        }
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for k in [2, 3] {
            let a = Alphabet::new(k).unwrap();
            let limit = if k == 2 { 8 } else { 5 };
            let ball = enumerate_ball(a, limit, 1 << 20).unwrap();
            for y in &ball {
                for r in ball.iter().filter(|r| r.len() <= 4) {
                    let z = encode_block(y).concat(r);
                    assert_eq!(decode_block(&z), Some((y.clone(), r.clone())));
                }
            }
        }
    }

    fn arb_string(k: u8, max: usize) -> impl Strategy<Value = SymString> {
        proptest::collection::vec(0..k, 0..max)
            .prop_map(move |v| SymString::new(Alphabet::new(k.into()).unwrap(), v).unwrap())
    }

    proptest! {
        #[test]
        fn weight_is_additive(x in arb_string(4, 12), y in arb_string(4, 12)) {
            prop_assert_eq!(x.concat(&y).weight(), x.weight() + y.weight());
        }

        #[test]
        fn symmetric_strings_have_twice_the_half_weight(u in arb_string(3, 10), x in arb_string(3, 20)) {
            let uu = u.doubled();
            prop_assert!(uu.is_symmetric());
            prop_assert_eq!(uu.weight(), 2 * u.weight());
            if x.is_symmetric() {
                prop_assert_eq!(x.weight() % 2, 0);
                prop_assert_eq!(x.weight(), 2 * weight(&x.symbols()[..x.len() / 2]));
            }
        }

        #[test]
        fn codec_round_trip(y in arb_string(5, 40), r in arb_string(5, 40)) {
            prop_assert_eq!(decode_block(&encode_block(&y).concat(&r)), Some((y, r)));
        }
    }

    #[test]
    fn textual_form() {
        let big = Alphabet::new(12).unwrap();
        let x = SymString::parse("3,11,0", big).unwrap();
        assert_eq!(x.symbols(), &[3, 11, 0]);
        assert_eq!(x.to_string(), "3,11,0");
        assert!(SymString::parse("12", big).is_err());
        assert!(SymString::parse("3", Alphabet::BINARY).is_err());
        assert!(SymString::parse("1x", Alphabet::BINARY).is_err());
        assert!(SymString::new(Alphabet::BINARY, vec![0, 2]).is_err());
        assert!(Alphabet::new(1).is_err());
    }
}
