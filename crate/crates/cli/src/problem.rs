use serde::{Deserialize, Serialize};
use teleport_core::spectrum::Rational;
use teleport_core::{ComplexVec, InputQudit, SchmidtSpectrum, C64};

use crate::error::CliError;

/// Sum tolerance for decimal spectra and input states; within it the values
/// are renormalized before use.
pub const DECIMAL_TOLERANCE: f64 = 1e-9;

/// A probability as written in a problem file: a JSON number, or a string
/// holding either `"num/den"` or a decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probability {
    Number(f64),
    Text(String),
}

enum Parsed {
    Exact(Rational),
    Float(f64),
}

impl Probability {
    fn parse(&self, index: usize) -> Result<Parsed, CliError> {
        let bad = |why: &str| CliError::Parse(format!("spectrum[{index}]: {why}"));
        match self {
            Self::Number(x) => Ok(Parsed::Float(*x)),
            Self::Text(text) => {
                let text = text.trim();
                if let Some((num, den)) = text.split_once('/') {
                    let num: i128 = num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
                    let den: i128 = den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
                    if den == 0 {
                        return Err(bad("zero denominator"));
                    }
                    Ok(Parsed::Exact(Rational::new(num, den)))
                } else {
                    text.parse()
                        .map(Parsed::Float)
                        .map_err(|_| bad("expected a number or \"num/den\""))
                }
            }
        }
    }
}

/// Builds a spectrum, taking the exact path when every entry is a rational
/// string.
pub fn parse_spectrum(entries: &[Probability]) -> Result<SchmidtSpectrum, CliError> {
    if entries.is_empty() {
        return Err(CliError::Input("spectrum: empty".into()));
    }
    let parsed = entries
        .iter()
        .enumerate()
        .map(|(i, p)| p.parse(i))
        .collect::<Result<Vec<_>, _>>()?;
    let exact: Option<Vec<Rational>> = parsed
        .iter()
        .map(|p| match p {
            Parsed::Exact(r) => Some(*r),
            Parsed::Float(_) => None,
        })
        .collect();
    if let Some(exact) = exact {
        return SchmidtSpectrum::from_rationals(exact).map_err(|e| CliError::Input(format!("spectrum: {e}")));
    }
    let probs: Vec<f64> = parsed
        .iter()
        .map(|p| match p {
            Parsed::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Parsed::Float(x) => *x,
        })
        .collect();
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
        return Err(CliError::Input(format!(
            "spectrum[{i}]: probability must be positive, got {p}"
        )));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > DECIMAL_TOLERANCE {
        return Err(CliError::Input(format!("spectrum: entries sum to {sum}, not 1")));
    }
    SchmidtSpectrum::from_probs(probs.iter().map(|p| p / sum).collect())
        .map_err(|e| CliError::Input(format!("spectrum: {e}")))
}

/// Parses a comma-separated spectrum such as `1/2,1/3,1/6`.
pub fn spectrum_entries(list: &str) -> Vec<Probability> {
    list.split(',')
        .map(|s| Probability::Text(s.trim().to_owned()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProblemSpec {
    pub d: usize,
    pub spectrum: Vec<Probability>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_state: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Parse(format!("{path}: {}", e.into_inner()))
        })
    }

    pub fn spectrum(&self) -> Result<SchmidtSpectrum, CliError> {
        if self.d == 0 {
            return Err(CliError::Input("d: must be at least 1".into()));
        }
        parse_spectrum(&self.spectrum)
    }

    pub fn input(&self) -> Result<Option<InputQudit>, CliError> {
        let Some(amps) = &self.input_state else { return Ok(None) };
        if amps.len() != self.d {
            return Err(CliError::Input(format!(
                "inputState: {} amplitudes for d = {}",
                amps.len(),
                self.d
            )));
        }
        let v: ComplexVec = amps.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        if (v.norm_sqr() - 1.0).abs() > DECIMAL_TOLERANCE {
            return Err(CliError::Input(format!(
                "inputState: squared norm {} is not 1",
                v.norm_sqr()
            )));
        }
        let v = v
            .normalized()
            .map_err(|e| CliError::Input(format!("inputState: {e}")))?;
        InputQudit::new(v)
            .map(Some)
            .map_err(|e| CliError::Input(format!("inputState: {e}")))
    }
}
