//! Flat `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, lists are comma-separated.
//! Relative paths are resolved against the directory holding the file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use zip3::simulation::{CovariateGenerator, ScenarioConfig};
use zip3::{FitOptions, Link};

use crate::error::{CliError, CliResult};

/// Parsed key/value pairs with the line each came from.
#[derive(Debug)]
pub struct KeyValues {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
    used: BTreeSet<String>,
}

impl KeyValues {
    pub fn parse(path: &Path, text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}: line {line_no}: expected 'key = value', got '{line}'",
                    path.display()
                )));
            };
            let key = key.trim().to_string();
            if let Some((first, _)) = entries.insert(key.clone(), (line_no, value.trim().to_string())) {
                return Err(CliError::Config(format!(
                    "{}: line {line_no}: key '{key}' already set on line {first}",
                    path.display()
                )));
            }
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
            used: BTreeSet::new(),
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: cannot read config: {e}", path.display())))?;
        Self::parse(path, &text)
    }

    fn err(&self, key: &str, msg: impl fmt::Display) -> CliError {
        match self.entries.get(key) {
            Some((line, _)) => {
                CliError::Config(format!("{}: line {line}: {key}: {msg}", self.path.display()))
            }
            None => CliError::Config(format!("{}: {key}: {msg}", self.path.display())),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.to_string());
        self.entries.get(key).map(|(_, v)| v.clone())
    }

    fn required(&mut self, key: &str) -> CliResult<String> {
        match self.take(key) {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(self.err(key, "required setting is missing")),
        }
    }

    fn parsed<T: FromStr>(&mut self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| self.err(key, format!("cannot parse '{v}': {e}"))),
        }
    }

    fn list(&mut self, key: &str) -> Vec<String> {
        self.take(key).map(|v| split_list(&v)).unwrap_or_default()
    }

    fn parsed_list<T: FromStr>(&mut self, key: &str) -> CliResult<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let items = self.list(key);
        items
            .iter()
            .map(|v| {
                v.parse()
                    .map_err(|e| self.err(key, format!("cannot parse '{v}': {e}")))
            })
            .collect()
    }

    fn path(&mut self, key: &str) -> Option<PathBuf> {
        let v = self.take(key)?;
        let p = PathBuf::from(v);
        Some(if p.is_absolute() {
            p
        } else {
            self.path.parent().unwrap_or(Path::new("")).join(p)
        })
    }

    /// Fails on any key that was never read.
    fn finish(self) -> CliResult<()> {
        for (key, (line, _)) in &self.entries {
            if !self.used.contains(key) {
                return Err(CliError::Config(format!(
                    "{}: line {line}: unknown key '{key}'",
                    self.path.display()
                )));
            }
        }
        Ok(())
    }
}

/// Comma-separated items outside parentheses, trimmed, empties dropped.
fn split_list(v: &str) -> Vec<String> {
    let mut items = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in v.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    items.push(cur);
    items
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Submodel {
    Mu,
    Phi,
}

impl fmt::Display for Submodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Submodel::Mu => "mu",
            Submodel::Phi => "phi",
        })
    }
}

impl FromStr for Submodel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "mu" => Ok(Submodel::Mu),
            "phi" => Ok(Submodel::Phi),
            other => Err(format!("unknown submodel '{other}' (expected mu or phi)")),
        }
    }
}

/// A term of one submodel, written `mu:age`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRef {
    pub submodel: Submodel,
    pub term: String,
}

impl FromStr for TermRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (sub, term) = s
            .split_once(':')
            .ok_or_else(|| format!("expected submodel:term, got '{s}'"))?;
        Ok(TermRef {
            submodel: sub.parse()?,
            term: term.trim().to_string(),
        })
    }
}

/// A categorical column with an optional declared reference level, written `age:15-24`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Categorical {
    pub column: String,
    pub reference: Option<String>,
}

impl FromStr for Categorical {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.split_once(':') {
            Some((c, r)) => Categorical {
                column: c.trim().to_string(),
                reference: Some(r.trim().to_string()),
            },
            None => Categorical {
                column: s.trim().to_string(),
                reference: None,
            },
        })
    }
}

/// Everything needed to fit and diagnose one model.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data_path: PathBuf,
    pub response: String,
    pub mu_terms: Vec<String>,
    pub phi_terms: Vec<String>,
    pub link_mu: Link,
    pub link_phi: Link,
    pub categorical: Vec<Categorical>,
    pub options: FitOptions,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub lr_tests: Vec<TermRef>,
    pub n_sim: usize,
    pub coverage: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let mut kv = KeyValues::read(path)?;
        let defaults = FitOptions::default();
        let config = RunConfig {
            data_path: kv.path("data").ok_or_else(|| kv.err("data", "required setting is missing"))?,
            response: kv.required("response")?,
            mu_terms: kv.list("mu_terms"),
            phi_terms: kv.list("phi_terms"),
            link_mu: kv.parsed("link_mu", Link::Log)?,
            link_phi: kv.parsed("link_phi", Link::Log)?,
            categorical: kv.parsed_list("categorical")?,
            options: FitOptions {
                max_iter: kv.parsed("max_iter", defaults.max_iter)?,
                tol_loglik: kv.parsed("tol_loglik", defaults.tol_loglik)?,
                tol_score: kv.parsed("tol_score", defaults.tol_score)?,
                start: None,
            },
            seed: kv.parsed("seed", 0)?,
            output_path: kv.path("output"),
            lr_tests: kv.parsed_list("lr_tests")?,
            n_sim: kv.parsed("nsim", 100)?,
            coverage: kv.parsed("coverage", 0.95)?,
        };
        config.validate(&kv)?;
        kv.finish()?;
        Ok(config)
    }

    fn terms(&self, submodel: Submodel) -> &[String] {
        match submodel {
            Submodel::Mu => &self.mu_terms,
            Submodel::Phi => &self.phi_terms,
        }
    }

    fn validate(&self, kv: &KeyValues) -> CliResult<()> {
        for (key, terms) in [("mu_terms", &self.mu_terms), ("phi_terms", &self.phi_terms)] {
            if terms.contains(&self.response) {
                return Err(kv.err(key, format!("response '{}' cannot also be a term", self.response)));
            }
            for (i, t) in terms.iter().enumerate() {
                if terms[..i].contains(t) {
                    return Err(kv.err(key, format!("term '{t}' listed twice")));
                }
            }
        }
        for t in &self.lr_tests {
            if !self.terms(t.submodel).contains(&t.term) {
                return Err(kv.err(
                    "lr_tests",
                    format!("'{}' is not a term of the {} submodel", t.term, t.submodel),
                ));
            }
        }
        if self.n_sim == 0 {
            return Err(kv.err("nsim", "must be at least 1"));
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return Err(kv.err("coverage", "must lie strictly between 0 and 1"));
        }
        if self.options.max_iter == 0 {
            return Err(kv.err("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

/// A Monte Carlo scenario and where to write its table.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub scenario: ScenarioConfig,
    pub output_path: Option<PathBuf>,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let mut kv = KeyValues::read(path)?;
        let beta_true: Vec<f64> = kv.parsed_list("beta_true")?;
        let gamma_true: Vec<f64> = kv.parsed_list("gamma_true")?;
        let x_generators: Vec<CovariateGenerator> = kv.parsed_list("x_generators")?;
        let z_generators: Vec<CovariateGenerator> = kv.parsed_list("z_generators")?;
        let n_list: Vec<usize> = kv.parsed_list("n_list")?;
        for key in ["beta_true", "gamma_true", "x_generators", "z_generators", "n_list"] {
            if !kv.entries.contains_key(key) {
                return Err(kv.err(key, "required setting is missing"));
            }
        }
        let scenario = ScenarioConfig {
            beta_true,
            gamma_true,
            x_generators,
            z_generators,
            n_list,
            n_reps: kv.parsed("n_reps", 1000)?,
            seed: kv.parsed("seed", 0)?,
            link_mu: kv.parsed("link_mu", Link::Log)?,
            link_phi: kv.parsed("link_phi", Link::Log)?,
        };
        scenario
            .validate()
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let output_path = kv.path("output");
        kv.finish()?;
        Ok(Self {
            scenario,
            output_path,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(text: &str) -> KeyValues {
        KeyValues::parse(Path::new("/tmp/x.conf"), text).unwrap()
    }

    #[test]
    fn lists_keep_parenthesized_commas() {
        assert_eq!(split_list("a, b ,, c"), vec!["a", "b", "c"]);
        assert_eq!(
            split_list("constant1, bernoulli(0.5), f(1,2)"),
            vec!["constant1", "bernoulli(0.5)", "f(1,2)"]
        );
        assert!(split_list("  ").is_empty());
    }

    #[test]
    fn comments_and_duplicates() {
        let mut k = kv("# header\nseed = 4 # trailing\n\nresponse=y\n");
        assert_eq!(k.parsed("seed", 0u64).unwrap(), 4);
        assert_eq!(k.required("response").unwrap(), "y");
        assert!(k.finish().is_ok());
        let dup = KeyValues::parse(Path::new("c.conf"), "a = 1\na = 2\n").unwrap_err();
        assert!(dup.to_string().contains("line 2"));
    }

    #[test]
    fn unknown_keys_are_reported_with_line() {
        let mut k = kv("seed = 1\ncolour = red\n");
        k.parsed("seed", 0u64).unwrap();
        let e = k.finish().unwrap_err();
        assert!(e.to_string().contains("line 2") && e.to_string().contains("colour"));
    }

    #[test]
    fn bad_values_name_the_key() {
        let mut k = kv("max_iter = lots\n");
        let e = k.parsed("max_iter", 1usize).unwrap_err();
        assert!(e.to_string().contains("max_iter") && e.to_string().contains("lots"));
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn term_and_categorical_syntax() {
        let t: TermRef = "phi: residence".parse().unwrap();
        assert_eq!(t.submodel, Submodel::Phi);
        assert_eq!(t.term, "residence");
        assert!("age".parse::<TermRef>().is_err());
        assert!("beta:age".parse::<TermRef>().is_err());
        let c: Categorical = "age:15-24".parse().unwrap();
        assert_eq!(c.reference.as_deref(), Some("15-24"));
        let c: Categorical = "age".parse().unwrap();
        assert_eq!(c.reference, None);
    }
}
