//! Problem-file parsing: JSON with integer exponent vectors and complex
//! coefficients given as [re, im] pairs, each entry a number or an exact
//! rational string "p/q".

use std::collections::HashMap;
use std::path::Path;

use coamoeba::{Complex64, ExpPoly};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub terms: Vec<TermSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mc_samples: Option<usize>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: HashMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<i64>,
    pub c: [CoeffEntry; 2],
}

/// A real number in the input: a JSON number or an exact rational "p/q".
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Number(f64),
    Rational(String),
}

impl CoeffEntry {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            CoeffEntry::Number(x) => Ok(*x),
            CoeffEntry::Rational(s) => {
                let parse_err = || format!("cannot parse rational coefficient entry {s:?}");
                match s.split_once('/') {
                    Some((p, q)) => {
                        let p: i64 = p.trim().parse().map_err(|_| parse_err())?;
                        let q: i64 = q.trim().parse().map_err(|_| parse_err())?;
                        if q == 0 {
                            return Err(format!("zero denominator in {s:?}"));
                        }
                        Ok(p as f64 / q as f64)
                    }
                    None => s.trim().parse().map_err(|_| parse_err()),
                }
            }
        }
    }
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&raw).map_err(|e| format!("malformed problem file: {e}"))
    }

    pub fn to_poly(&self) -> Result<ExpPoly, String> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let re = t.c[0].value()?;
            let im = t.c[1].value()?;
            terms.push((t.alpha.clone(), Complex64::new(re, im)));
        }
        ExpPoly::new(self.n, terms).map_err(|e| e.to_string())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
