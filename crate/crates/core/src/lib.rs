//! Errorless heuristics and certified test-instance generators for paddable
//! languages.
//!
//! Given a language `L` with a padding function, the crate builds the
//! auxiliary language `H = { xx : x ∈ L } ∪ { odd-weight strings }`, a
//! polynomial-time bijection `phi` with `x ∈ L ⟺ phi(x) ∈ H`, and from it
//!
//! * an errorless heuristic that answers accept / reject / unknown and is
//!   undecided on exactly `k^(n/2)` strings of each even-radius α-sphere;
//! * a generator of uniformly distributed instances whose membership is
//!   known by construction.
//!
//! ```
//! use roughp::{classify, Decision, IsoEngine, Registry, SymString};
//!
//! let lang = Registry::builtin().lookup("parity-odd").unwrap();
//! let engine = IsoEngine::for_language(&lang);
//! let x = SymString::parse("11011", lang.alphabet()).unwrap();
//! assert_eq!(classify(&engine, &x).unwrap(), Decision::Accept);
//! ```

pub mod aux_h;
pub mod config;
pub mod error;
pub mod generator;
pub mod heuristic;
pub mod iso;
pub mod lang;
pub mod report;
pub mod rng;
pub mod sigma;

pub use aux_h::{decide_h, HContext};
pub use config::{Budgets, OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use generator::{
    generate, support_size, uniformity_test, verify_outputs, GenReport, GenRequest, Sign,
};
pub use heuristic::{classify, scan_alpha_sphere, Decision, FailureStats, ScanMode, ScanOptions};
pub use iso::{ChainTrace, IsoEngine};
pub use lang::{wrap_core, CorePredicate, PaddableLanguage, PaddingView, Registry};
pub use rng::{SeededRng, DEFAULT_SEED};
pub use sigma::{decode_block, encode_block, Alphabet, SymString};
