//! The p-isomorphism `phi: L → H` and its inverse `alpha`, built from two
//! length-increasing invertible reductions by the ancestor-chain rule.
//!
//! `F(x) = pad'(xx, x)` reduces `L` to `H`; `G(z) = pad(u(z), z)` reduces `H`
//! to `L`. Both are injective with inverses found by decoding and
//! re-encoding. For an input on the `L` side, walk backwards through
//! `G⁻¹, F⁻¹, G⁻¹, …` until an inverse fails: if the chain dies on an `L`-side
//! string, `phi = F`, otherwise `phi = G⁻¹`. Every backward step strictly
//! shortens the string, so chains are at most as long as the input.
//!
//! Nothing in here can reach a membership decider: the engine is built from a
//! [`PaddingView`].

use std::fmt;

use serde::Serialize;

use crate::aux_h::HContext;
use crate::error::{Error, Result};
use crate::lang::{PaddableLanguage, PaddingView};
use crate::sigma::SymString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseKind {
    GInverse,
    FInverse,
}

impl InverseKind {
    fn other(self) -> Self {
        match self {
            InverseKind::GInverse => InverseKind::FInverse,
            InverseKind::FInverse => InverseKind::GInverse,
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseKind::GInverse => "G⁻¹",
            InverseKind::FInverse => "F⁻¹",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalRule {
    ApplyF,
    ApplyGInverse,
    ApplyG,
    ApplyFInverse,
}

impl fmt::Display for TerminalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminalRule::ApplyF => "apply F",
            TerminalRule::ApplyGInverse => "apply G⁻¹",
            TerminalRule::ApplyG => "apply G",
            TerminalRule::ApplyFInverse => "apply F⁻¹",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub direction: InverseKind,
    pub value: SymString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainTrace {
    pub start: SymString,
    pub steps: Vec<ChainStep>,
    /// The inverse whose attempt ended the chain.
    pub failed: InverseKind,
    pub terminal_rule: TerminalRule,
    pub output: SymString,
}

impl fmt::Display for ChainTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", show(&self.start))?;
        for (depth, step) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{:indent$}{} -> {}",
                "",
                step.direction,
                show(&step.value),
                indent = 2 * (depth + 1)
            )?;
        }
        writeln!(
            f,
            "{:indent$}{} undefined",
            "",
            self.failed,
            indent = 2 * (self.steps.len() + 1)
        )?;
        write!(f, "rule {} => {}", self.terminal_rule, show(&self.output))
    }
}

fn show(x: &SymString) -> String {
    if x.is_empty() {
        "λ".to_string()
    } else {
        x.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct IsoEngine {
    ctx: HContext,
    max_chain: Option<usize>,
}

impl IsoEngine {
    pub fn new(base: PaddingView) -> Self {
        IsoEngine {
            ctx: HContext::new(base),
            max_chain: None,
        }
    }

    /// Uses only the padding half of `lang`.
    pub fn for_language(lang: &PaddableLanguage) -> Self {
        Self::new(lang.padding_view())
    }

    /// Hard cap on chain steps, on top of the `|input|` bound that the
    /// length-increasing reductions guarantee.
    pub fn with_max_chain(mut self, max_chain: usize) -> Self {
        self.max_chain = Some(max_chain);
        self
    }

    pub fn context(&self) -> &HContext {
        &self.ctx
    }

    pub fn big_f(&self, x: &SymString) -> SymString {
        self.ctx.pad_h(&self.ctx.f(x), x)
    }

    pub fn big_f_inv(&self, z: &SymString) -> Option<SymString> {
        let y = self.ctx.dec_h(z);
        (self.big_f(&y) == *z).then_some(y)
    }

    pub fn big_g(&self, z: &SymString) -> SymString {
        self.ctx.base().pad(&self.ctx.g(z), z)
    }

    pub fn big_g_inv(&self, x: &SymString) -> Option<SymString> {
        let z = self.ctx.base().dec(x);
        (self.big_g(&z) == *x).then_some(z)
    }

    fn invert(&self, kind: InverseKind, s: &SymString) -> Option<SymString> {
        match kind {
            InverseKind::GInverse => self.big_g_inv(s),
            InverseKind::FInverse => self.big_f_inv(s),
        }
    }

    /// Walks back from `start`, alternating inverses beginning with `first`.
    fn walk(&self, start: &SymString, first: InverseKind) -> Result<(Vec<ChainStep>, InverseKind)> {
        let limit = self.max_chain.map_or(start.len(), |m| m.min(start.len()));
        let mut steps: Vec<ChainStep> = Vec::new();
        let mut kind = first;
        let mut current = start.clone();
        loop {
            let Some(prev) = self.invert(kind, &current) else {
                return Ok((steps, kind));
            };
            if prev.len() >= current.len() || steps.len() >= limit {
                return Err(Error::ChainGuard {
                    input: start.to_string(),
                    steps: steps.len() + 1,
                    detail: format!(
                        "{kind} took {} (length {}) to {} (length {}); reductions must be length-increasing",
                        current,
                        current.len(),
                        prev,
                        prev.len()
                    ),
                });
            }
            steps.push(ChainStep {
                direction: kind,
                value: prev.clone(),
            });
            current = prev;
            kind = kind.other();
        }
    }

    pub fn phi_trace(&self, x: &SymString) -> Result<ChainTrace> {
        let (steps, failed) = self.walk(x, InverseKind::GInverse)?;
        let (terminal_rule, output) = match failed {
            InverseKind::GInverse => (TerminalRule::ApplyF, self.big_f(x)),
            InverseKind::FInverse => (TerminalRule::ApplyGInverse, steps[0].value.clone()),
        };
        Ok(ChainTrace {
            start: x.clone(),
            steps,
            failed,
            terminal_rule,
            output,
        })
    }

    pub fn alpha_trace(&self, z: &SymString) -> Result<ChainTrace> {
        let (steps, failed) = self.walk(z, InverseKind::FInverse)?;
        let (terminal_rule, output) = match failed {
            InverseKind::FInverse => (TerminalRule::ApplyG, self.big_g(z)),
            InverseKind::GInverse => (TerminalRule::ApplyFInverse, steps[0].value.clone()),
        };
        Ok(ChainTrace {
            start: z.clone(),
            steps,
            failed,
            terminal_rule,
            output,
        })
    }

    /// `x ∈ L ⟺ phi(x) ∈ H`.
    pub fn phi(&self, x: &SymString) -> Result<SymString> {
        Ok(self.phi_trace(x)?.output)
    }

    /// The encoding `alpha = phi⁻¹`.
    pub fn alpha(&self, z: &SymString) -> Result<SymString> {
        Ok(self.alpha_trace(z)?.output)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::sync::Arc;

    use super::*;
    use crate::lang::{wrap_core, CorePredicate, Membership, PaddingScheme, ParityOdd};
    use crate::sigma::{enumerate_ball, Alphabet};

    fn b(t: &str) -> SymString {
        SymString::parse(t, Alphabet::BINARY).unwrap()
    }

    fn engine() -> IsoEngine {
        IsoEngine::for_language(&wrap_core(&ParityOdd::predicate(Alphabet::BINARY)).unwrap())
    }

    #[test]
    fn forward_reductions() {
        let e = engine();
        assert_eq!(e.big_f(&b("1")), b("1101111011"));
        assert_eq!(e.big_f(&b("")), b("0101"));
        assert_eq!(e.big_g(&b("0")), b("00010"));
        assert_eq!(e.big_g(&b("111")), b("111111011"));
    }

    #[test]
    fn inverses() {
        let e = engine();
        assert_eq!(e.big_f_inv(&b("1101111011")), Some(b("1")));
        assert_eq!(e.big_f_inv(&b("0")), None);
        assert_eq!(e.big_g_inv(&b("00010")), Some(b("0")));
        assert_eq!(e.big_g_inv(&b("0")), None);
        for x in enumerate_ball(Alphabet::BINARY, 6, 1 << 10).unwrap() {
            assert_eq!(e.context().dec_h(&e.big_f(&x)), x);
            assert_eq!(e.big_f_inv(&e.big_f(&x)), Some(x.clone()));
            assert_eq!(e.context().base().dec(&e.big_g(&x)), x);
            assert_eq!(e.big_g_inv(&e.big_g(&x)), Some(x.clone()));
            assert!(e.big_f(&x).len() > x.len());
            assert!(e.big_g(&x).len() > x.len());
        }
    }

    /// Range enumeration: `z` has an `F`-preimage iff it equals `F(x)` for
    /// some short `x`; `F` at least doubles length, so `|x| <= 4` covers
    /// every `|z| <= 8`.
    #[test]
    fn inverse_domains_match_range_enumeration() {
        let e = engine();
        let short = enumerate_ball(Alphabet::BINARY, 4, 1 << 10).unwrap();
        let f_range: HashSet<SymString> = short.iter().map(|x| e.big_f(x)).collect();
        let g_range: HashSet<SymString> = short.iter().map(|x| e.big_g(x)).collect();
        for z in enumerate_ball(Alphabet::BINARY, 5, 1 << 10).unwrap() {
            assert_eq!(e.big_f_inv(&z).is_some(), f_range.contains(&z), "F z={z:?}");
            assert_eq!(e.big_g_inv(&z).is_some(), g_range.contains(&z), "G z={z:?}");
        }
    }

    #[test]
    fn phi_alpha_examples() {
        let e = engine();
        let t = e.phi_trace(&b("00010")).unwrap();
        assert_eq!(t.output, b("0"));
        assert_eq!(t.terminal_rule, TerminalRule::ApplyGInverse);
        assert_eq!(t.steps.len(), 1);

        let t = e.phi_trace(&b("0")).unwrap();
        assert_eq!(t.output, b("0001000010"));
        assert_eq!(t.terminal_rule, TerminalRule::ApplyF);
        assert!(t.steps.is_empty());

        assert_eq!(e.alpha(&b("0")).unwrap(), b("00010"));
        assert_eq!(e.alpha(&b("1")).unwrap(), b("11011"));
        assert_eq!(
            e.alpha_trace(&b("1")).unwrap().terminal_rule,
            TerminalRule::ApplyG
        );
    }

    #[test]
    fn bijection_on_small_balls() {
        let e = engine();
        for z in enumerate_ball(Alphabet::BINARY, 10, 1 << 12).unwrap() {
            let x = e.alpha(&z).unwrap();
            assert_eq!(e.phi(&x).unwrap(), z);
            let w = e.phi(&z).unwrap();
            assert_eq!(e.alpha(&w).unwrap(), z);
            let trace = e.phi_trace(&z).unwrap();
            assert!(trace.steps.len() <= z.len());
            let mut last = z.len();
            for step in &trace.steps {
                assert!(step.value.len() < last);
                last = step.value.len();
            }
        }
    }

    #[test]
    fn trace_renders() {
        let e = engine();
        let text = e.phi_trace(&b("00010")).unwrap().to_string();
        assert!(text.contains("G⁻¹ -> 0"), "{text}");
        assert!(text.contains("apply G⁻¹"));
        let json = serde_json::to_value(e.phi_trace(&b("00010")).unwrap()).unwrap();
        assert_eq!(json["terminal_rule"], "apply-g-inverse");
        assert_eq!(json["steps"][0]["value"], "0");
    }

    /// A plugin whose padding shrinks strings makes chains non-decreasing.
    struct Shrinking;

    impl PaddingScheme for Shrinking {
        fn pad(&self, x: &SymString, _y: &SymString) -> SymString {
            x.clone()
        }
        fn dec(&self, z: &SymString) -> SymString {
            z.clone()
        }
    }

    #[test]
    fn guard_trips_on_non_increasing_plugin() {
        let a = Alphabet::BINARY;
        let p = CorePredicate::new("odd", a, |c: &SymString| c.has_odd_weight(), b("0"), b("1"));
        let member: Arc<dyn Membership> = Arc::new(move |x: &SymString| p.eval(x));
        let lang = PaddableLanguage::new("shrink", a, member, Arc::new(Shrinking), b("0"), b("1"))
            .unwrap();
        let e = IsoEngine::for_language(&lang);
        // G(z) = u(z) here, so "1" is its own G-preimage
        assert!(matches!(e.phi(&b("1")), Err(Error::ChainGuard { .. })));
    }
}
