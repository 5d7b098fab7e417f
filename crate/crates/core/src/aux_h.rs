//! The auxiliary language `H = { xx : x ∈ L } ∪ { x : weight(x) odd }` and
//! the functions that make it interreducible with `L` and paddable.

use crate::error::{Error, Result};
use crate::lang::{validate_language, PaddableLanguage, PaddingView, ValidationOptions};
use crate::sigma::SymString;

/// Padding half of the base language `L`, with its witnesses.
#[derive(Clone, Debug)]
pub struct HContext {
    base: PaddingView,
}

impl HContext {
    pub fn new(base: PaddingView) -> Self {
        HContext { base }
    }

    /// Validates `lang` first and keeps only its padding half.
    pub fn validated(lang: &PaddableLanguage, options: &ValidationOptions) -> Result<Self> {
        let report = validate_language(lang, options)?;
        if let Some(failed) = report.failures().next() {
            return Err(Error::InvalidLanguage {
                language: lang.name().to_string(),
                detail: match &failed.counterexample {
                    Some(c) => format!("{}: x={} y={} ({})", failed.name, c.x, c.y, c.detail),
                    None => failed.name.to_string(),
                },
            });
        }
        Ok(Self::new(lang.padding_view()))
    }

    pub fn base(&self) -> &PaddingView {
        &self.base
    }

    /// `x` for `z = xx`, else `w0` for even weight, else `w1`.
    pub fn u(&self, z: &SymString) -> SymString {
        if let Some(half) = z.symmetric_half() {
            half
        } else if z.has_odd_weight() {
            self.base.w1().clone()
        } else {
            self.base.w0().clone()
        }
    }

    /// Reduction `L → H`: `x ↦ xx`.
    pub fn f(&self, x: &SymString) -> SymString {
        x.doubled()
    }

    /// Reduction `H → L`.
    pub fn g(&self, z: &SymString) -> SymString {
        self.u(z)
    }

    /// Padding for `H`: `q·q` with `q = pad(u(z), y)`.
    pub fn pad_h(&self, z: &SymString, y: &SymString) -> SymString {
        self.base.pad(&self.u(z), y).doubled()
    }

    pub fn dec_h(&self, z: &SymString) -> SymString {
        self.base.dec(&self.u(z))
    }
}

/// Membership in `H`, computed straight from its definition. Test oracle only.
pub fn decide_h(lang: &PaddableLanguage, z: &SymString, decide_len: usize) -> Result<bool> {
    if z.has_odd_weight() {
        return Ok(true);
    }
    match z.symmetric_half() {
        Some(x) if x.len() > decide_len => {
            Err(Error::budget("decide_h", x.len(), decide_len as u64))
        }
        Some(x) => Ok(lang.decide(&x)),
        None => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{wrap_core, ParityOdd, Registry};
    use crate::sigma::{enumerate_ball, Alphabet};

    fn b(t: &str) -> SymString {
        SymString::parse(t, Alphabet::BINARY).unwrap()
    }

    fn parity() -> PaddableLanguage {
        wrap_core(&ParityOdd::predicate(Alphabet::BINARY)).unwrap()
    }

    #[test]
    fn u_f_g_examples() {
        let ctx = HContext::new(parity().padding_view());
        assert_eq!(ctx.u(&b("0101")), b("01"));
        assert_eq!(ctx.u(&b("011")), b("0"));
        assert_eq!(ctx.u(&b("1")), b("1"));
        assert_eq!(ctx.u(&b("")), b(""));
        assert_eq!(ctx.f(&b("01")), b("0101"));
        assert_eq!(ctx.f(&b("")), b(""));
        let k3 = Alphabet::new(3).unwrap();
        assert_eq!(ctx.f(&SymString::parse("2", k3).unwrap()).to_string(), "22");
        for z in ["0101", "011", "1"] {
            assert_eq!(ctx.g(&b(z)), ctx.u(&b(z)));
        }
    }

    #[test]
    fn pad_h_and_dec_h_examples() {
        let lang = parity();
        let ctx = HContext::new(lang.padding_view());
        // oracle: compose the validated base pad with u by hand
        let q = lang.pad(lang.w1(), &b("0"));
        assert_eq!(q, b("00011"));
        assert_eq!(ctx.pad_h(&b("1"), &b("0")), b("0001100011"));
        assert_eq!(ctx.pad_h(&b(""), &b("")), b("0101"));
        assert_eq!(ctx.dec_h(&b("0001100011")), b("0"));
        assert_eq!(ctx.dec_h(&b("1")), b(""));
    }

    #[test]
    fn decide_h_examples() {
        let lang = parity();
        assert!(decide_h(&lang, &b("1"), 100).unwrap());
        assert!(!decide_h(&lang, &b("0101"), 100).unwrap());
        assert!(decide_h(&lang, &lang.w1().doubled(), 100).unwrap());
        assert!(matches!(
            decide_h(&lang, &b("00000000"), 3),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn reductions_and_padding_hold_for_every_builtin() {
        let registry = Registry::builtin();
        for name in Registry::BUILTIN_NAMES {
            let lang = registry.lookup(name).unwrap();
            let ctx = HContext::new(lang.padding_view());
            let ball = enumerate_ball(lang.alphabet(), 6, 1 << 12).unwrap();
            for x in &ball {
                assert_eq!(
                    lang.decide(x),
                    decide_h(&lang, &ctx.f(x), usize::MAX).unwrap()
                );
                assert_eq!(
                    decide_h(&lang, x, usize::MAX).unwrap(),
                    lang.decide(&ctx.g(x))
                );
            }
            let small = enumerate_ball(lang.alphabet(), 4, 1 << 12).unwrap();
            for z in &small {
                let z_in_h = decide_h(&lang, z, usize::MAX).unwrap();
                for y in &small {
                    let p = ctx.pad_h(z, y);
                    assert_eq!(ctx.dec_h(&p), *y, "{name}: z={z:?} y={y:?}");
                    assert_eq!(decide_h(&lang, &p, usize::MAX).unwrap(), z_in_h);
                    assert!(p.is_symmetric());
                    assert!(p.len() > 2 * y.len());
                    assert_eq!(p.len(), 2 * lang.pad(&ctx.u(z), y).len());
                }
            }
        }
    }

    #[test]
    fn validated_context_rejects_broken_plugins() {
        let r = Registry::with_config_str(
            r#"{"languages": {"broken": {"predicate": "parity-odd", "parameters": {"padding": "identity"}}}}"#,
        )
        .unwrap();
        let opts = ValidationOptions {
            exhaustive_len: 3,
            samples: 10,
            ..Default::default()
        };
        assert!(HContext::validated(&r.lookup("parity-odd").unwrap(), &opts).is_ok());
        assert!(matches!(
            HContext::validated(&r.lookup("broken").unwrap(), &opts),
            Err(Error::InvalidLanguage { .. })
        ));
    }
}
