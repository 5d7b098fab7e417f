//! Turns any total core predicate into a paddable language.
//!
//! Membership is `eval(strip(x))`, padding prepends one self-delimiting block
//! and decoding reads it back. Since `strip` removes every leading block,
//! `strip(pad(x, y)) = strip(x)` and membership is padding-invariant.

use std::fmt;
use std::sync::Arc;

use super::{Membership, PaddableLanguage, PaddingScheme};
use crate::error::Result;
use crate::sigma::{decode_block, decode_block_prefix, encode_block, Alphabet, SymString};

/// Removes valid leading blocks for as long as one exists.
pub fn strip(x: &SymString) -> SymString {
    let mut start = 0;
    while let Some((_, used)) = decode_block_prefix(&x.symbols()[start..]) {
        start += used;
    }
    x.suffix(start)
}

pub trait CoreEval: Send + Sync {
    fn eval(&self, core: &SymString) -> bool;
}

impl<F> CoreEval for F
where
    F: Fn(&SymString) -> bool + Send + Sync,
{
    fn eval(&self, core: &SymString) -> bool {
        self(core)
    }
}

#[derive(Clone)]
pub struct CorePredicate {
    pub name: String,
    pub alphabet: Alphabet,
    pub eval: Arc<dyn CoreEval>,
    pub suggested_w0: SymString,
    pub suggested_w1: SymString,
}

impl CorePredicate {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        eval: impl CoreEval + 'static,
        suggested_w0: SymString,
        suggested_w1: SymString,
    ) -> Self {
        CorePredicate {
            name: name.into(),
            alphabet,
            eval: Arc::new(eval),
            suggested_w0,
            suggested_w1,
        }
    }

    pub fn eval(&self, core: &SymString) -> bool {
        self.eval.eval(core)
    }
}

impl fmt::Debug for CorePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorePredicate")
            .field("name", &self.name)
            .field("k", &self.alphabet.k())
            .finish_non_exhaustive()
    }
}

struct StripMembership(Arc<dyn CoreEval>);

impl Membership for StripMembership {
    fn decide(&self, x: &SymString) -> bool {
        self.0.eval(&strip(x))
    }
}

/// `pad(x, y) = encode_block(y) · x`; `dec` returns the first block or λ.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockPrefixPadding;

impl PaddingScheme for BlockPrefixPadding {
    fn pad(&self, x: &SymString, y: &SymString) -> SymString {
        encode_block(y).concat(x)
    }

    fn dec(&self, z: &SymString) -> SymString {
        decode_block(z)
            .map(|(y, _)| y)
            .unwrap_or_else(|| SymString::empty(z.alphabet()))
    }
}

/// Negative control: `pad(x, y) = x`, `dec ≡ λ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityPadding;

impl PaddingScheme for IdentityPadding {
    fn pad(&self, x: &SymString, _y: &SymString) -> SymString {
        x.clone()
    }

    fn dec(&self, z: &SymString) -> SymString {
        SymString::empty(z.alphabet())
    }
}

/// Negative control: block-prefix padding with `dec ≡ λ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullDecPadding;

impl PaddingScheme for NullDecPadding {
    fn pad(&self, x: &SymString, y: &SymString) -> SymString {
        BlockPrefixPadding.pad(x, y)
    }

    fn dec(&self, z: &SymString) -> SymString {
        SymString::empty(z.alphabet())
    }
}

/// Wraps a core predicate with the block-prefix padding.
pub fn wrap_core(predicate: &CorePredicate) -> Result<PaddableLanguage> {
    wrap_core_with(predicate, Arc::new(BlockPrefixPadding))
}

/// Same as [`wrap_core`] with a caller-chosen padding scheme.
pub fn wrap_core_with(
    predicate: &CorePredicate,
    padding: Arc<dyn PaddingScheme>,
) -> Result<PaddableLanguage> {
    PaddableLanguage::new(
        predicate.name.clone(),
        predicate.alphabet,
        Arc::new(StripMembership(Arc::clone(&predicate.eval))),
        padding,
        predicate.suggested_w0.clone(),
        predicate.suggested_w1.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::lang::ParityOdd;
    use crate::sigma::enumerate_ball;

    fn b(text: &str) -> SymString {
        SymString::parse(text, Alphabet::BINARY).unwrap()
    }

    /// Strip by searching for the shortest prefix that is literally some
    /// `encode_block(y)`, with `y` read off the even positions.
    fn strip_by_search(x: &SymString) -> SymString {
        let mut rest = x.symbols().to_vec();
        loop {
            let hit = (0..=rest.len().saturating_sub(2) / 2).find_map(|j| {
                let end = 2 * j + 2;
                if end > rest.len() {
                    return None;
                }
                let y: Vec<u8> = rest[..2 * j].iter().step_by(2).copied().collect();
                let enc = encode_block(&SymString::new(x.alphabet(), y).unwrap());
                (enc.symbols() == &rest[..end]).then_some(end)
            });
            match hit {
                Some(end) => rest.drain(..end).for_each(drop),
                None => return SymString::new(x.alphabet(), rest).unwrap(),
            }
        }
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip(&b("0011011")), b("1"));
        assert_eq!(strip(&b("1")), b("1"));
        assert_eq!(strip(&b("01010")), b("0"));
        assert_eq!(strip(&b("")), b(""));
    }

    #[test]
    fn strip_matches_search_oracle_and_is_idempotent() {
        for k in [2, 3] {
            let a = Alphabet::new(k).unwrap();
            let limit = if k == 2 { 12 } else { 7 };
            for x in enumerate_ball(a, limit, 1 << 22).unwrap() {
                let s = strip(&x);
                assert_eq!(s, strip_by_search(&x), "x={x:?}");
                assert_eq!(strip(&s), s);
            }
        }
    }

    #[test]
    fn parity_wrapper_examples() {
        let lang = wrap_core(&ParityOdd::predicate(Alphabet::BINARY)).unwrap();
        assert_eq!(lang.pad(&b("1"), &b("01")), b("0011011"));
        assert_eq!(lang.dec(&b("0011011")), b("01"));
        assert!(lang.decide(&b("11011")));
        assert!(!lang.decide(&b("0101")));
        assert_eq!(lang.dec(&b("10")), b(""));
    }

    #[test]
    fn iterated_padding_keeps_membership() {
        let lang = wrap_core(&ParityOdd::predicate(Alphabet::BINARY)).unwrap();
        let ball = enumerate_ball(Alphabet::BINARY, 3, 1 << 10).unwrap();
        for x in &ball {
            for y1 in &ball {
                for y2 in &ball {
                    let z = lang.pad(&lang.pad(x, y1), y2);
                    assert_eq!(lang.decide(&z), lang.decide(x));
                    assert_eq!(z.len(), x.len() + 2 * y1.len() + 2 * y2.len() + 4);
                }
            }
        }
    }

    #[test]
    fn bad_witnesses_are_rejected() {
        let a = Alphabet::BINARY;
        let swapped = CorePredicate::new(
            "swapped",
            a,
            |c: &SymString| c.has_odd_weight(),
            b("1"),
            b("0"),
        );
        assert!(matches!(
            wrap_core(&swapped),
            Err(Error::WitnessRejected { .. })
        ));
    }
}
