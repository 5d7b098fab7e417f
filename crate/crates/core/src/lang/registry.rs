//! Named languages: the five built-ins plus entries from a JSON config file.
//!
//! ```json
//! {
//!   "languages": {
//!     "parity-odd-k3": { "predicate": "parity-odd", "k": 3 },
//!     "sat-small": {
//!       "predicate": "cnf-sat",
//!       "budgets": { "sat_vars": 12 },
//!       "parameters": { "w1": "10110101" }
//!     }
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::predicates::{CnfSat, ParityOdd, PredicateBudgets, SubsetSum, Substring11, Triangle};
use super::wrapper::{
    wrap_core_with, BlockPrefixPadding, CorePredicate, IdentityPadding, NullDecPadding,
};
use super::{PaddableLanguage, PaddingScheme};
use crate::error::{Error, Result};
use crate::sigma::{Alphabet, SymString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateKind {
    ParityOdd,
    Substring11,
    Triangle,
    SubsetSum,
    CnfSat,
}

/// `identity` and `null-dec` are deliberately broken schemes that exist to
/// exercise the validator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaddingKind {
    #[default]
    BlockPrefix,
    Identity,
    NullDec,
}

impl PaddingKind {
    fn scheme(self) -> Arc<dyn PaddingScheme> {
        match self {
            PaddingKind::BlockPrefix => Arc::new(BlockPrefixPadding),
            PaddingKind::Identity => Arc::new(IdentityPadding),
            PaddingKind::NullDec => Arc::new(NullDecPadding),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    pub padding: PaddingKind,
    pub w0: Option<String>,
    pub w1: Option<String>,
}

fn default_k() -> u32 {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageEntry {
    pub predicate: PredicateKind,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub budgets: PredicateBudgets,
}

impl LanguageEntry {
    pub fn builtin(predicate: PredicateKind) -> Self {
        LanguageEntry {
            predicate,
            k: 2,
            parameters: Parameters::default(),
            budgets: PredicateBudgets::default(),
        }
    }

    pub fn build(&self, name: &str) -> Result<PaddableLanguage> {
        let alphabet = Alphabet::new(self.k)?;
        let mut predicate: CorePredicate = match self.predicate {
            PredicateKind::ParityOdd => ParityOdd::predicate(alphabet),
            PredicateKind::Substring11 => Substring11::predicate(alphabet),
            PredicateKind::Triangle => Triangle::predicate(alphabet),
            PredicateKind::SubsetSum => SubsetSum::predicate(alphabet, self.budgets),
            PredicateKind::CnfSat => CnfSat::predicate(alphabet, self.budgets),
        };
        predicate.name = name.to_string();
        if let Some(w0) = &self.parameters.w0 {
            predicate.suggested_w0 = SymString::parse(w0, alphabet)?;
        }
        if let Some(w1) = &self.parameters.w1 {
            predicate.suggested_w1 = SymString::parse(w1, alphabet)?;
        }
        wrap_core_with(&predicate, self.parameters.padding.scheme())
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryFile {
    pub languages: BTreeMap<String, LanguageEntry>,
}

#[derive(Clone, Debug)]
pub struct Registry {
    entries: BTreeMap<String, LanguageEntry>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Registry {
    pub fn builtin() -> Self {
        let entries = [
            ("parity-odd", PredicateKind::ParityOdd),
            ("substring-11", PredicateKind::Substring11),
            ("triangle", PredicateKind::Triangle),
            ("subset-sum", PredicateKind::SubsetSum),
            ("cnf-sat", PredicateKind::CnfSat),
        ]
        .into_iter()
        .map(|(name, kind)| (name.to_string(), LanguageEntry::builtin(kind)))
        .collect();
        Registry { entries }
    }

    pub const BUILTIN_NAMES: [&'static str; 5] = [
        "parity-odd",
        "substring-11",
        "triangle",
        "subset-sum",
        "cnf-sat",
    ];

    /// Built-ins plus the file's entries; file entries win on name clashes.
    pub fn with_config_str(json: &str) -> Result<Self> {
        let file: RegistryFile =
            serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
        let mut registry = Self::builtin();
        for (name, entry) in file.languages {
            Alphabet::new(entry.k)?;
            registry.entries.insert(name, entry);
        }
        Ok(registry)
    }

    pub fn with_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::with_config_str(&text)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn entry(&self, name: &str) -> Option<&LanguageEntry> {
        self.entries.get(name)
    }

    pub fn lookup(&self, name: &str) -> Result<PaddableLanguage> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownLanguage {
                name: name.to_string(),
                available: self.names(),
            })?
            .build(name)
    }
}
