//! The paddable-language plugin contract.
//!
//! A [`PaddableLanguage`] bundles a membership decider with a padding scheme
//! and two witnesses. The decider and the padding live behind separate
//! handles: [`PaddableLanguage::padding_view`] hands out the padding half
//! alone, and that is all the isomorphism engine and the heuristic ever see.

mod predicates;
mod registry;
mod validate;
mod wrapper;

use std::fmt;
use std::sync::Arc;

pub use predicates::{
    binary_block, structured_core, CnfSat, ParityOdd, PredicateBudgets, SubsetSum, Substring11,
    Triangle, STRUCTURED_HEADER,
};
pub use registry::{LanguageEntry, PaddingKind, Parameters, PredicateKind, Registry, RegistryFile};
pub use validate::{
    validate_language, Counterexample, InvariantCheck, ValidationOptions, ValidationReport,
    CHECK_DEC_PAD, CHECK_LENGTH, CHECK_MEMBERSHIP, CHECK_WITNESSES, DEFAULT_DECIDE_LEN,
};
pub use wrapper::{
    strip, wrap_core, wrap_core_with, BlockPrefixPadding, CoreEval, CorePredicate, IdentityPadding,
    NullDecPadding,
};

use crate::error::{Error, Result};
use crate::sigma::{Alphabet, SymString};

/// `pad` / `dec` half of a paddable language.
pub trait PaddingScheme: Send + Sync {
    fn pad(&self, x: &SymString, y: &SymString) -> SymString;

    /// Must invert `pad` in its second argument. Total: non-images map to
    /// some string (λ for the built-in schemes).
    fn dec(&self, z: &SymString) -> SymString;
}

/// Membership oracle. May be exponential in the input length.
pub trait Membership: Send + Sync {
    fn decide(&self, x: &SymString) -> bool;
}

impl<F> Membership for F
where
    F: Fn(&SymString) -> bool + Send + Sync,
{
    fn decide(&self, x: &SymString) -> bool {
        self(x)
    }
}

#[derive(Clone)]
pub struct PaddableLanguage {
    name: String,
    alphabet: Alphabet,
    membership: Arc<dyn Membership>,
    padding: Arc<dyn PaddingScheme>,
    w0: SymString,
    w1: SymString,
}

impl PaddableLanguage {
    /// Rejects the plugin when `decide(w1)` is false or `decide(w0)` is true.
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        membership: Arc<dyn Membership>,
        padding: Arc<dyn PaddingScheme>,
        w0: SymString,
        w1: SymString,
    ) -> Result<Self> {
        let name = name.into();
        for w in [&w0, &w1] {
            if w.alphabet() != alphabet {
                return Err(Error::WitnessRejected {
                    language: name,
                    detail: format!("witness {w:?} is not over k={alphabet}"),
                });
            }
        }
        if !membership.decide(&w1) {
            return Err(Error::WitnessRejected {
                language: name,
                detail: format!("w1 = {w1} is not a member"),
            });
        }
        if membership.decide(&w0) {
            return Err(Error::WitnessRejected {
                language: name,
                detail: format!("w0 = {w0} is a member"),
            });
        }
        Ok(PaddableLanguage {
            name,
            alphabet,
            membership,
            padding,
            w0,
            w1,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn decide(&self, x: &SymString) -> bool {
        self.membership.decide(x)
    }

    pub fn pad(&self, x: &SymString, y: &SymString) -> SymString {
        self.padding.pad(x, y)
    }

    pub fn dec(&self, z: &SymString) -> SymString {
        self.padding.dec(z)
    }

    pub fn w0(&self) -> &SymString {
        &self.w0
    }

    pub fn w1(&self) -> &SymString {
        &self.w1
    }

    pub fn padding_view(&self) -> PaddingView {
        PaddingView {
            name: self.name.clone(),
            alphabet: self.alphabet,
            padding: Arc::clone(&self.padding),
            w0: self.w0.clone(),
            w1: self.w1.clone(),
        }
    }
}

impl fmt::Debug for PaddableLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PaddableLanguage")
            .field("name", &self.name)
            .field("k", &self.alphabet.k())
            .field("w0", &self.w0)
            .field("w1", &self.w1)
            .finish_non_exhaustive()
    }
}

/// A language with its decider removed: padding, decoding and witnesses only.
#[derive(Clone)]
pub struct PaddingView {
    name: String,
    alphabet: Alphabet,
    padding: Arc<dyn PaddingScheme>,
    w0: SymString,
    w1: SymString,
}

impl PaddingView {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn pad(&self, x: &SymString, y: &SymString) -> SymString {
        self.padding.pad(x, y)
    }

    pub fn dec(&self, z: &SymString) -> SymString {
        self.padding.dec(z)
    }

    pub fn w0(&self) -> &SymString {
        &self.w0
    }

    pub fn w1(&self) -> &SymString {
        &self.w1
    }
}

impl fmt::Debug for PaddingView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PaddingView")
            .field("name", &self.name)
            .field("k", &self.alphabet.k())
            .finish_non_exhaustive()
    }
}
