//! Run configuration: presets plus a flat `key = value` override format.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rug::Integer;

use crate::error::{Error, Result};
use crate::presets;
use crate::relations::AnchorSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum FormSource {
    /// One of the shipped coefficient files.
    Builtin(String),
    /// The level-1 weight-18 form built from Eisenstein series.
    Level1Weight18,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSetting {
    /// Pick the truncation from each evaluation height.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TSetting {
    Auto,
    Fixed(u32),
}

/// Smallest positive root unless overridden per discriminant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RootPolicy {
    pub overrides: BTreeMap<i64, i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiReference {
    /// Compare with the published table only.
    PrintedTable,
    /// theta_1^5 theta_2^3 theta_3 / eta^3 (index 13).
    Index13,
    /// theta_1^2 eta^18 (index 1, weight 10).
    Index1Weight10,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub label: String,
    pub form: FormSource,
    pub level: u64,
    pub weight: u32,
    pub digits: u32,
    pub terms: TermSetting,
    pub generators: GeneratorSource,
    pub anchor: AnchorSpec,
    pub t: TSetting,
    /// Discriminants with |D| < disc_bound are tabulated.
    pub disc_bound: i64,
    /// Skip D with gcd(D, N) > 1.
    pub coprime_only: bool,
    pub roots: RootPolicy,
    /// Apply the 1/3, 1/2 weights at D = -3, -4.
    pub weighted: bool,
    pub reference_disc: Option<i64>,
    pub waldspurger_tol: f64,
    /// Precision of the central L-values; `None` means min(digits, 30).
    pub l_digits: Option<u32>,
    pub height_bound: Option<Integer>,
    pub jacobi: JacobiReference,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn preset(label: &str) -> Result<Self> {
        presets::preset(label).ok_or_else(|| Error::Config(format!("unknown preset {label:?}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base_dir)
    }

    /// Parses `key = value` lines; `preset` (if present) supplies defaults
    /// that the remaining keys override. Relative paths resolve against
    /// `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", idx + 1)))?;
            pairs.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
        }
        let mut config = match pairs.iter().find(|(_, k, _)| k == "preset") {
            Some((_, _, name)) => Self::preset(name)?,
            None => Self::blank(),
        };
        for (line, key, value) in &pairs {
            config
                .apply(key, value, base_dir)
                .map_err(|e| Error::Config(format!("line {line}: {e}")))?;
        }
        config.validate()?;
        Ok(config)
    }

    fn blank() -> Self {
        Self {
            label: "custom".into(),
            form: FormSource::File(PathBuf::new()),
            level: 0,
            weight: 0,
            digits: 30,
            terms: TermSetting::Auto,
            generators: GeneratorSource::File(PathBuf::new()),
            anchor: AnchorSpec {
                disc: 0,
                root: None,
                divisor: 1,
            },
            t: TSetting::Auto,
            disc_bound: 200,
            coprime_only: false,
            roots: RootPolicy::default(),
            weighted: true,
            reference_disc: None,
            waldspurger_tol: 1e-3,
            l_digits: None,
            height_bound: None,
            jacobi: JacobiReference::PrintedTable,
            output: None,
        }
    }

    fn apply(&mut self, key: &str, value: &str, base_dir: &Path) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value.parse().map_err(|_| format!("`{key}` expects a number, got {value:?}"))
        }
        fn flag(key: &str, value: &str) -> std::result::Result<bool, String> {
            match value {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("`{key}` expects true/false, got {value:?}")),
            }
        }
        let path = |v: &str| base_dir.join(v);
        if let Some(disc) = key.strip_prefix("root.") {
            let disc: i64 = num(key, disc)?;
            self.roots.overrides.insert(disc, num(key, value)?);
            return Ok(());
        }
        match key {
            "preset" => {}
            "label" => self.label = value.to_string(),
            "form" => {
                self.form = match value.split_whitespace().collect::<Vec<_>>()[..] {
                    ["builtin", "level1-weight18"] => FormSource::Level1Weight18,
                    ["builtin", name] => FormSource::Builtin(name.to_string()),
                    _ => FormSource::File(path(value)),
                }
            }
            "generators" => {
                self.generators = match value.split_whitespace().collect::<Vec<_>>()[..] {
                    ["builtin", name] => GeneratorSource::Builtin(name.to_string()),
                    _ => GeneratorSource::File(path(value)),
                }
            }
            "level" => self.level = num(key, value)?,
            "weight" => self.weight = num(key, value)?,
            "digits" => self.digits = num(key, value)?,
            "terms" => {
                self.terms = if value == "auto" {
                    TermSetting::Auto
                } else {
                    TermSetting::Fixed(num(key, value)?)
                }
            }
            "anchor" => {
                // D0[:r0][/s]
                let (head, divisor) = match value.split_once('/') {
                    Some((h, s)) => (h, num::<u32>(key, s)?),
                    None => (value, 1),
                };
                let (disc, root) = match head.split_once(':') {
                    Some((d, r)) => (num(key, d)?, Some(num(key, r)?)),
                    None => (num(key, head)?, None),
                };
                self.anchor = AnchorSpec { disc, root, divisor };
            }
            "t" => {
                self.t = if value == "auto" {
                    TSetting::Auto
                } else {
                    TSetting::Fixed(num(key, value)?)
                }
            }
            "disc_bound" => self.disc_bound = num(key, value)?,
            "coprime_only" => self.coprime_only = flag(key, value)?,
            "weighted" => self.weighted = flag(key, value)?,
            "reference" => self.reference_disc = Some(num(key, value)?),
            "waldspurger_tol" => self.waldspurger_tol = num(key, value)?,
            "l_digits" => self.l_digits = Some(num(key, value)?),
            "height_bound" => {
                self.height_bound = Some(value.parse().map_err(|_| format!("bad height bound {value:?}"))?)
            }
            "jacobi" => {
                self.jacobi = match value {
                    "table" => JacobiReference::PrintedTable,
                    "index13" => JacobiReference::Index13,
                    "index1-weight10" => JacobiReference::Index1Weight10,
                    _ => return Err(format!("unknown jacobi reference {value:?}")),
                }
            }
            "output" => self.output = Some(path(value)),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn l_digits(&self) -> u32 {
        self.l_digits.unwrap_or(self.digits.min(30))
    }

    pub fn validate(&self) -> Result<()> {
        if self.level == 0 || self.weight < 2 || !self.weight.is_multiple_of(2) {
            return Err(Error::Config("`level` and an even `weight` are required".into()));
        }
        if let FormSource::File(p) = &self.form {
            if !p.is_file() {
                return Err(Error::Config(format!("coefficient file {} does not exist", p.display())));
            }
        }
        if let GeneratorSource::File(p) = &self.generators {
            if !p.is_file() {
                return Err(Error::Config(format!("generator file {} does not exist", p.display())));
            }
        }
        if !crate::arith::is_fundamental(self.anchor.disc) {
            return Err(Error::Config(format!("anchor discriminant {} is not fundamental", self.anchor.disc)));
        }
        let modulus = 4 * self.level as i64;
        for (&disc, &r) in &self.roots.overrides {
            if (r * r - disc).rem_euclid(modulus) != 0 {
                return Err(Error::BadRoot { disc, r, modulus });
            }
        }
        Ok(())
    }
}
