//! Suite configuration and its flat `key = value` file format.
//!
//! ```text
//! # comment
//! suite = nightly
//! tau = 2i, 0.3+1.5i, 8i
//! pairs = 1:2, 2:3, 3:4      # or: pairs_max = 5
//! cases = 1010, 1110          # digits i j m n
//! n_max = 2
//! samples = 16
//! tol_elliptic = 1e-9
//! format = json
//! out = report.json
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::identity::{CoprimePair, IdentityCase, FAMILIES};
use crate::theta::TauParameter;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub elliptic_identity: f64,
    pub dedekind: f64,
    pub derivative: f64,
    pub degeneration: f64,
    pub classical: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            elliptic_identity: 1e-9,
            dedekind: 1e-9,
            derivative: 1e-7,
            degeneration: 1e-8,
            classical: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            elliptic_identity: tol,
            dedekind: tol,
            derivative: tol,
            degeneration: tol,
            classical: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub name: String,
    pub taus: Vec<Complex64>,
    pub pairs: Vec<CoprimePair>,
    pub cases: Vec<IdentityCase>,
    pub n_max: usize,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            name: "default".to_string(),
            taus: vec![
                Complex64::new(0.0, 2.0),
                Complex64::new(0.3, 1.5),
                Complex64::new(0.0, 8.0),
            ],
            pairs: CoprimePair::all_up_to(5),
            cases: FAMILIES.to_vec(),
            n_max: 2,
            samples: 16,
            tolerances: Tolerances::default(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.taus.is_empty() || self.pairs.is_empty() || self.cases.is_empty() {
            return Err(Error::Config("tau, pairs and cases must be non-empty".into()));
        }
        for &tau in &self.taus {
            TauParameter::new(tau).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        let t = &self.tolerances;
        for tol in [t.elliptic_identity, t.dedekind, t.derivative, t.degeneration, t.classical] {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parse the flat text format; unspecified keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = |v: &str| v.parse::<f64>().map_err(|_| Error::Config(format!("`{v}` is not a number")));
        let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Config(format!("`{v}` is not an integer")));
        match key {
            "suite" => self.name = value.to_string(),
            "tau" => self.taus = list(value).map(parse_complex).collect::<Result<_>>()?,
            "pairs" => self.pairs = list(value).map(parse_pair).collect::<Result<_>>()?,
            "pairs_max" => self.pairs = CoprimePair::all_up_to(int(value)? as u64),
            "cases" => self.cases = list(value).map(parse_case).collect::<Result<_>>()?,
            "n_max" => self.n_max = int(value)?,
            "samples" => self.samples = int(value)?,
            "tol" => self.tolerances = Tolerances::uniform(float(value)?),
            "tol_elliptic" => self.tolerances.elliptic_identity = float(value)?,
            "tol_dedekind" => self.tolerances.dedekind = float(value)?,
            "tol_derivative" => self.tolerances.derivative = float(value)?,
            "tol_degeneration" => self.tolerances.degeneration = float(value)?,
            "tol_classical" => self.tolerances.classical = float(value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// `a:b` (also accepts `a/b`).
pub fn parse_pair(s: &str) -> Result<CoprimePair> {
    let (a, b) = s
        .split_once([':', '/'])
        .ok_or_else(|| Error::Config(format!("pair `{s}` should look like `a:b`")))?;
    let num = |v: &str| v.trim().parse::<u64>().map_err(|_| Error::Config(format!("bad pair `{s}`")));
    CoprimePair::new(num(a)?, num(b)?).map_err(|e| Error::Config(e.to_string()))
}

/// Four digits `ijmn`, e.g. `1110`.
pub fn parse_case(s: &str) -> Result<IdentityCase> {
    let digits: Vec<u8> = s
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
        .map(|c| c.to_digit(10).map(|d| d as u8))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Config(format!("bad case `{s}`")))?;
    let digits: [u8; 4] = digits
        .try_into()
        .map_err(|_| Error::Config(format!("case `{s}` needs four digits")))?;
    IdentityCase::from_digits(digits).map_err(|e| Error::Config(e.to_string()))
}

/// Parses `a+bi`, `a-bi`, `bi`, `a`, `i`, `-i`; exponents like `1e-3` are fine.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("`{s}` is not a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_part.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("0.3+1.5i").unwrap(), c(0.3, 1.5));
        assert_eq!(parse_complex("0.25-0.1i").unwrap(), c(0.25, -0.1));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("-3").unwrap(), c(-3.0, 0.0));
        assert_eq!(parse_complex("1e-3+2.5e+1i").unwrap(), c(1e-3, 25.0));
        assert_eq!(parse_complex(" 0 ").unwrap(), c(0.0, 0.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn default_config() {
        let cfg = SuiteConfig::default();
        assert_eq!(cfg.pairs.len(), 19);
        assert_eq!(cfg.cases.len(), 6);
        cfg.validate().unwrap();
    }

    #[test]
    fn parse_file_text() {
        let cfg = SuiteConfig::parse(
            "# smoke\nsuite = smoke\ntau = 2i, 0.3+1.5i\npairs = 1:2, 2:3\ncases = 1010, 1110\nn_max = 1\nformat = csv\n",
        )
        .unwrap();
        assert_eq!(cfg.name, "smoke");
        assert_eq!(cfg.taus, vec![c(0.0, 2.0), c(0.3, 1.5)]);
        assert_eq!(cfg.pairs.len(), 2);
        assert_eq!(cfg.cases[1].digits(), [1, 1, 1, 0]);
        assert_eq!(cfg.format, OutputFormat::Csv);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(matches!(SuiteConfig::parse("pairs = 2:4"), Err(Error::Config(_))));
        assert!(matches!(SuiteConfig::parse("tau = -1i"), Err(Error::Config(_))));
        assert!(matches!(SuiteConfig::parse("colour = red"), Err(Error::Config(_))));
        assert!(matches!(SuiteConfig::parse("samples"), Err(Error::Config(_))));
    }
}
