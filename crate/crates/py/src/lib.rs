//! Python bindings. Strings cross the boundary in their textual form
//! (digits for k ≤ 10, comma-separated symbols above that).

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use roughp::lang::{validate_language, ValidationOptions};
use roughp::{
    classify, generate, scan_alpha_sphere, verify_outputs, Alphabet, GenRequest, IsoEngine,
    PaddableLanguage, Registry, ScanMode, ScanOptions, Sign, SymString, DEFAULT_SEED,
};
use serde::Serialize;

create_exception!(
    roughp_py,
    RoughpError,
    PyValueError,
    "Raised for any roughp failure."
);

fn err(e: roughp::Error) -> PyErr {
    RoughpError::new_err(e.to_string())
}

/// Serializes through JSON so reports arrive as plain dicts and lists.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| RoughpError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn alphabet(k: u32) -> PyResult<Alphabet> {
    Alphabet::new(k).map_err(err)
}

fn parse(text: &str, a: Alphabet) -> PyResult<SymString> {
    SymString::parse(text, a).map_err(err)
}

fn sign(text: &str) -> PyResult<Sign> {
    text.parse().map_err(err)
}

#[pyclass(name = "Language", frozen)]
struct PyLanguage {
    lang: PaddableLanguage,
    engine: IsoEngine,
}

#[pymethods]
impl PyLanguage {
    /// Looks `name` up among the built-ins, or in a registry JSON file.
    #[new]
    #[pyo3(signature = (name, config=None))]
    fn new(name: &str, config: Option<PathBuf>) -> PyResult<Self> {
        let registry = match config {
            Some(path) => Registry::with_config_file(&path).map_err(err)?,
            None => Registry::builtin(),
        };
        let lang = registry.lookup(name).map_err(err)?;
        let engine = IsoEngine::for_language(&lang);
        Ok(PyLanguage { lang, engine })
    }

    #[getter]
    fn name(&self) -> &str {
        self.lang.name()
    }

    #[getter]
    fn k(&self) -> u8 {
        self.lang.alphabet().k()
    }

    #[getter]
    fn w0(&self) -> String {
        self.lang.w0().to_string()
    }

    #[getter]
    fn w1(&self) -> String {
        self.lang.w1().to_string()
    }

    fn decide(&self, x: &str) -> PyResult<bool> {
        Ok(self.lang.decide(&self.parse(x)?))
    }

    fn pad(&self, x: &str, y: &str) -> PyResult<String> {
        Ok(self.lang.pad(&self.parse(x)?, &self.parse(y)?).to_string())
    }

    fn dec(&self, z: &str) -> PyResult<String> {
        Ok(self.lang.dec(&self.parse(z)?).to_string())
    }

    fn phi(&self, x: &str) -> PyResult<String> {
        Ok(self.engine.phi(&self.parse(x)?).map_err(err)?.to_string())
    }

    fn alpha(&self, z: &str) -> PyResult<String> {
        Ok(self.engine.alpha(&self.parse(z)?).map_err(err)?.to_string())
    }

    /// One of "accept", "reject", "unknown".
    fn classify(&self, x: &str) -> PyResult<String> {
        Ok(classify(&self.engine, &self.parse(x)?)
            .map_err(err)?
            .to_string())
    }

    #[pyo3(signature = (x, apply="phi"))]
    fn trace<'py>(&self, py: Python<'py>, x: &str, apply: &str) -> PyResult<Bound<'py, PyAny>> {
        let x = self.parse(x)?;
        let chain = match apply {
            "phi" => self.engine.phi_trace(&x),
            "alpha" => self.engine.alpha_trace(&x),
            other => {
                return Err(PyValueError::new_err(format!(
                    "apply must be phi or alpha, got {other:?}"
                )))
            }
        }
        .map_err(err)?;
        to_python(py, &chain)
    }

    #[pyo3(signature = (exhaustive_len=5, samples=1000, seed=DEFAULT_SEED))]
    fn validate<'py>(
        &self,
        py: Python<'py>,
        exhaustive_len: usize,
        samples: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let options = ValidationOptions {
            exhaustive_len,
            samples,
            seed,
            ..Default::default()
        };
        let report = py
            .detach(|| validate_language(&self.lang, &options))
            .map_err(err)?;
        to_python(py, &report)
    }

    /// Instances of the requested sign ("pos" or "neg"). With `verify`, every
    /// instance is re-checked by the decider and a wrong sign raises.
    #[pyo3(signature = (n, sign, count, seed=DEFAULT_SEED, verify=false))]
    fn generate(
        &self,
        py: Python<'_>,
        n: usize,
        sign: &str,
        count: usize,
        seed: u64,
        verify: bool,
    ) -> PyResult<Vec<String>> {
        let sign = self::sign(sign)?;
        let req = GenRequest {
            n,
            sign,
            count,
            seed,
        };
        let outputs = py
            .detach(|| -> roughp::Result<Vec<SymString>> {
                let outputs = generate(&self.engine, &req)?;
                if verify {
                    verify_outputs(&self.lang, &outputs, sign, seed, usize::MAX)?;
                }
                Ok(outputs)
            })
            .map_err(err)?;
        Ok(outputs.iter().map(ToString::to_string).collect())
    }

    /// Failure statistics for the image sphere of length `n`.
    #[pyo3(signature = (n, mode="exhaustive", samples=10_000, seed=DEFAULT_SEED, check_correctness=false))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        mode: &str,
        samples: u64,
        seed: u64,
        check_correctness: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mode = match mode {
            "exhaustive" => ScanMode::Exhaustive,
            "sample" | "sampled" => ScanMode::Sampled,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown scan mode {other:?}"
                )))
            }
        };
        let options = ScanOptions {
            mode,
            samples,
            seed,
            ..Default::default()
        };
        let checker = check_correctness.then_some(&self.lang);
        let stats = py
            .detach(|| scan_alpha_sphere(&self.engine, n, &options, checker))
            .map_err(err)?;
        to_python(py, &stats)
    }

    fn __repr__(&self) -> String {
        format!(
            "Language({:?}, k={})",
            self.lang.name(),
            self.lang.alphabet().k()
        )
    }
}

impl PyLanguage {
    fn parse(&self, text: &str) -> PyResult<SymString> {
        parse(text, self.lang.alphabet())
    }
}

#[pyfunction]
fn builtin_languages() -> Vec<&'static str> {
    Registry::BUILTIN_NAMES.to_vec()
}

#[pyfunction]
#[pyo3(signature = (x, k=2))]
fn weight(x: &str, k: u32) -> PyResult<u64> {
    Ok(parse(x, alphabet(k)?)?.weight())
}

#[pyfunction]
#[pyo3(signature = (x, k=2))]
fn is_symmetric(x: &str, k: u32) -> PyResult<bool> {
    Ok(parse(x, alphabet(k)?)?.is_symmetric())
}

#[pyfunction]
#[pyo3(signature = (y, k=2))]
fn encode_block(y: &str, k: u32) -> PyResult<String> {
    Ok(roughp::encode_block(&parse(y, alphabet(k)?)?).to_string())
}

/// `(block, rest)` when `z` starts with a well-formed block, else None.
#[pyfunction]
#[pyo3(signature = (z, k=2))]
fn decode_block(z: &str, k: u32) -> PyResult<Option<(String, String)>> {
    let z = parse(z, alphabet(k)?)?;
    Ok(roughp::decode_block(&z).map(|(y, rest)| (y.to_string(), rest.to_string())))
}

#[pymodule]
fn roughp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLanguage>()?;
    m.add("RoughpError", m.py().get_type::<RoughpError>())?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    m.add_function(wrap_pyfunction!(builtin_languages, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(is_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(encode_block, m)?)?;
    m.add_function(wrap_pyfunction!(decode_block, m)?)?;
    Ok(())
}
