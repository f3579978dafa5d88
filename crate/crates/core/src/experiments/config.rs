//! Scenario configuration files.
//!
//! The format is line oriented: `# comments`, `[section]` headers and
//! `key = value` pairs. Lists are separated by commas or whitespace. Explicit
//! matrices are written row-major as whitespace-separated `re,im` pairs, e.g.
//! `0.5,0 0,0 0,0 0.5,0`.
//!
//! ```text
//! [scenario]
//! id = s1
//!
//! [model]
//! family = rotating_qubit   # rotating_qubit | diagonal_qubit | explicit
//! grid_size = 8
//! radius = 0.8
//! mixing = 0.1
//! n = 2
//! m = 1
//!
//! [prior]
//! kind = uniform            # uniform | explicit (with `weights = ...`)
//!
//! [povm]
//! kind = computational      # computational | x | bell | trivial | explicit
//!
//! [run]
//! alphas = -1, 0, 0.5, 1
//! seed = 42
//! ```
//!
//! An explicit family lists one `[state]` section per grid point
//! (`matrix = ...`, optional `theta = ...`); an explicit POVM lists one
//! `[element]` section per outcome (`matrix = ...`, optional `label = ...`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::divergence::Alpha;
use crate::error::{Error, Result};
use crate::families::{diagonal_qubit, rotating_qubit};
use crate::model::{ParametricModel, Prior};
use crate::operator::{HermitianOperator, DEFAULT_MAX_DIM};
use crate::povm::{bell_basis, computational_basis, trivial, validate_povm, x_basis, Povm};
use crate::risk::{ZooOptions, DEFAULT_N_PERTURB, DEFAULT_PERTURB_RATES, DEFAULT_SEED};
use crate::scenario::Scenario;
use crate::state::DensityOperator;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    RotatingQubit {
        grid_size: usize,
        radius: f64,
        mixing: f64,
    },
    DiagonalQubit {
        grid_size: usize,
    },
    Explicit {
        grid: Vec<Vec<f64>>,
        states: Vec<DensityOperator>,
    },
}

impl ModelSpec {
    pub fn grid_size(&self) -> usize {
        match self {
            ModelSpec::RotatingQubit { grid_size, .. } | ModelSpec::DiagonalQubit { grid_size } => {
                *grid_size
            }
            ModelSpec::Explicit { states, .. } => states.len(),
        }
    }

    pub fn system_dim(&self) -> usize {
        match self {
            ModelSpec::Explicit { states, .. } => states.first().map_or(0, DensityOperator::dim),
            _ => 2,
        }
    }

    fn build(&self) -> Result<(Vec<Vec<f64>>, Vec<DensityOperator>)> {
        match self {
            ModelSpec::RotatingQubit {
                grid_size,
                radius,
                mixing,
            } => rotating_qubit(*grid_size, *radius, *mixing),
            ModelSpec::DiagonalQubit { grid_size } => diagonal_qubit(*grid_size),
            ModelSpec::Explicit { grid, states } => Ok((grid.clone(), states.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PriorSpec {
    Uniform,
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug)]
pub enum PovmSpec {
    Computational,
    XBasis,
    Bell,
    Trivial,
    Explicit(Povm),
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub id: String,
    pub model: ModelSpec,
    pub prior: PriorSpec,
    pub n_copies: usize,
    pub m_copies: usize,
    pub povm: PovmSpec,
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub max_dim: usize,
    pub n_perturb: usize,
    pub rates: Vec<f64>,
}

/// Keys that [`ScenarioConfig::with_value`] can vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKey {
    Alpha,
    N,
    K,
}

impl std::str::FromStr for SweepKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepKey::Alpha),
            "N" | "n" => Ok(SweepKey::N),
            "K" | "k" | "grid_size" => Ok(SweepKey::K),
            other => Err(Error::Validation(format!(
                "cannot sweep over '{other}' (expected alpha, N or K)"
            ))),
        }
    }
}

impl std::fmt::Display for SweepKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepKey::Alpha => "alpha",
            SweepKey::N => "N",
            SweepKey::K => "K",
        })
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

impl ScenarioConfig {
    /// Checks the invariants that do not need the scenario to be built, then builds it.
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::Validation("alpha list is empty".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !a.is_finite()) {
            return Err(Error::Validation(format!("alpha {a} is not finite")));
        }
        if self.n_copies == 0 || self.m_copies == 0 {
            return Err(Error::Validation("n and m must be at least 1".into()));
        }
        let k = self.model.grid_size();
        if k == 0 {
            return Err(Error::Validation("grid size must be at least 1".into()));
        }
        let d = self.model.system_dim();
        for (name, copies) in [("n", self.n_copies), ("m", self.m_copies)] {
            match checked_pow(d, copies) {
                Some(dim) if dim <= self.max_dim => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "{d}^{name} with {name} = {copies} exceeds max_dim = {}",
                        self.max_dim
                    )))
                }
            }
        }
        if let PriorSpec::Explicit(w) = &self.prior {
            if w.len() != k {
                return Err(Error::Validation(format!(
                    "prior has {} weights but the grid has {k} points",
                    w.len()
                )));
            }
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(Error::Validation(format!(
                "perturbation rate {r} is outside (0, 1]"
            )));
        }
        self.build_scenario().map(|_| ()).map_err(|e| match e {
            Error::Validation(_) => e,
            other => Error::Validation(other.to_string()),
        })
    }

    pub fn alphas(&self) -> Result<Vec<Alpha>> {
        self.alphas.iter().map(|&a| Alpha::new(a)).collect()
    }

    pub fn zoo_options(&self) -> ZooOptions {
        ZooOptions {
            seed: self.seed,
            n_perturb: self.n_perturb,
            rates: self.rates.clone(),
        }
    }

    fn build_povm(&self) -> Result<Povm> {
        let d = self.model.system_dim();
        let measured = checked_pow(d, self.n_copies).unwrap_or(usize::MAX);
        let povm = match &self.povm {
            PovmSpec::Computational => computational_basis(d, self.n_copies)?,
            PovmSpec::XBasis => {
                if d != 2 {
                    return Err(Error::Validation(format!(
                        "x-basis readout needs qubits, found dimension {d}"
                    )));
                }
                x_basis(self.n_copies)?
            }
            PovmSpec::Bell => {
                if (d, self.n_copies) != (2, 2) {
                    return Err(Error::Validation(format!(
                        "Bell readout needs two qubits, found {} systems of dimension {d}",
                        self.n_copies
                    )));
                }
                bell_basis()
            }
            PovmSpec::Trivial => trivial(measured),
            PovmSpec::Explicit(p) => p.clone(),
        };
        if povm.dim() != measured {
            return Err(Error::Validation(format!(
                "POVM acts on dimension {} but the measured systems have dimension {measured}",
                povm.dim()
            )));
        }
        Ok(povm)
    }

    pub fn build_scenario(&self) -> Result<Scenario> {
        let (grid, states) = self.model.build()?;
        let prior = match &self.prior {
            PriorSpec::Uniform => Prior::uniform(states.len())?,
            PriorSpec::Explicit(w) => Prior::new(w.clone())?,
        };
        let model = ParametricModel::new(grid, states, self.n_copies, self.m_copies, self.max_dim)?;
        Scenario::new(self.id.clone(), model, prior, self.build_povm()?)
    }

    /// A copy with one key replaced; the id gains a `_<key><value>` suffix for `N` and `K`.
    pub fn with_value(&self, key: SweepKey, value: f64) -> Result<Self> {
        let mut next = self.clone();
        let as_count = || -> Result<usize> {
            if value.fract() != 0.0 || value < 1.0 || value > u32::MAX as f64 {
                return Err(Error::Validation(format!(
                    "{key} must be a positive integer, got {value}"
                )));
            }
            Ok(value as usize)
        };
        match key {
            SweepKey::Alpha => next.alphas = vec![value],
            SweepKey::N => {
                next.n_copies = as_count()?;
                next.id = format!("{}_N{}", self.id, next.n_copies);
            }
            SweepKey::K => {
                let k = as_count()?;
                match &mut next.model {
                    ModelSpec::RotatingQubit { grid_size, .. }
                    | ModelSpec::DiagonalQubit { grid_size } => *grid_size = k,
                    ModelSpec::Explicit { .. } => {
                        return Err(Error::Validation(
                            "grid size of an explicit family cannot be varied".into(),
                        ))
                    }
                }
                if matches!(next.prior, PriorSpec::Explicit(_)) {
                    return Err(Error::Validation(
                        "grid size cannot be varied with explicit prior weights".into(),
                    ));
                }
                next.id = format!("{}_K{k}", self.id);
            }
        }
        next.validate()?;
        Ok(next)
    }
}

/// Command-line replacements applied before validation.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_dim: Option<usize>,
    pub output: Option<PathBuf>,
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    parse_config_with(path, &Overrides::default())
}

pub fn parse_config_with(path: impl AsRef<Path>, overrides: &Overrides) -> Result<ScenarioConfig> {
    parse_config_str_with(&read_file(path.as_ref())?, overrides)
}

pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    parse_config_str_with(text, &Overrides::default())
}

pub fn parse_config_str_with(text: &str, overrides: &Overrides) -> Result<ScenarioConfig> {
    let doc = Document::parse(text)?;
    let mut config = doc.into_config()?;
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(max_dim) = overrides.max_dim {
        config.max_dim = max_dim;
    }
    if let Some(output) = &overrides.output {
        config.output = Some(output.clone());
    }
    config.validate()?;
    Ok(config)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::ReadFile {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// A value with its 1-based source position.
#[derive(Clone, Debug)]
struct Value {
    text: String,
    line: usize,
    column: usize,
}

impl Value {
    fn err(&self, message: impl Into<String>) -> Error {
        parse_error(self.line, self.column, message)
    }

    /// Splits on commas and whitespace, keeping each token's column.
    fn tokens(&self, separators: &[char]) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            if separators.contains(&c) || c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((s, &self.text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((s, &self.text[s..]));
        }
        out.into_iter()
            .map(|(i, t)| (self.column + self.text[..i].chars().count(), t))
            .collect()
    }

    fn number_at<T: std::str::FromStr>(&self, column: usize, token: &str, what: &str) -> Result<T> {
        token.parse().map_err(|_| {
            parse_error(
                self.line,
                column,
                format!("expected {what}, found '{token}'"),
            )
        })
    }

    fn f64(&self) -> Result<f64> {
        self.number_at(self.column, &self.text, "a number")
    }

    fn usize(&self) -> Result<usize> {
        self.number_at(self.column, &self.text, "a nonnegative integer")
    }

    fn u64(&self) -> Result<u64> {
        let t = self.text.replace('_', "");
        match t.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16)
                .map_err(|_| self.err(format!("expected a 64-bit seed, found '{}'", self.text))),
            None => self.number_at(self.column, &t, "a 64-bit seed"),
        }
    }

    fn f64_list(&self) -> Result<Vec<f64>> {
        self.tokens(&[','])
            .into_iter()
            .map(|(col, t)| self.number_at(col, t, "a number"))
            .collect()
    }

    fn complex_entries(&self) -> Result<Vec<Complex64>> {
        self.tokens(&[])
            .into_iter()
            .map(|(col, t)| {
                let (re_text, im_text) = t.split_once(',').ok_or_else(|| {
                    parse_error(self.line, col, format!("expected 're,im', found '{t}'"))
                })?;
                let re = self.number_at(col, re_text, "a real part")?;
                let im_col = col + re_text.chars().count() + 1;
                let im = self.number_at(im_col, im_text, "an imaginary part")?;
                Ok(Complex64::new(re, im))
            })
            .collect()
    }

    fn matrix(&self) -> Result<HermitianOperator> {
        let entries = self.complex_entries()?;
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(self.err(format!(
                "matrix has {} entries, which is not a nonzero square",
                entries.len()
            )));
        }
        HermitianOperator::from_rows(dim, &entries).map_err(|e| self.err(e.to_string()))
    }
}

/// One `[section]`; each key remembers its position for error reporting.
#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, (usize, Value)>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn require(&mut self, key: &str) -> Result<Value> {
        self.take(key).ok_or_else(|| {
            parse_error(
                self.line,
                1,
                format!("section [{}] is missing key '{key}'", self.name),
            )
        })
    }

    /// Rejects whatever keys were not consumed.
    fn finish(self) -> Result<()> {
        match self
            .entries
            .into_iter()
            .min_by_key(|(_, (order, _))| *order)
        {
            None => Ok(()),
            Some((key, (_, v))) => Err(parse_error(
                v.line,
                1,
                format!("unknown key '{key}' in section [{}]", self.name),
            )),
        }
    }
}

const SECTIONS: [&str; 7] = [
    "scenario", "model", "state", "prior", "povm", "element", "run",
];
const REPEATABLE: [&str; 2] = ["state", "element"];

struct Document {
    sections: Vec<Section>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let col_of = |byte: usize| content[..byte].chars().count() + 1;
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| {
                    parse_error(line, col_of(indent + trimmed.len()), "expected ']'")
                })?;
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(parse_error(
                        line,
                        col_of(indent + 1),
                        format!("unknown section [{name}]"),
                    ));
                }
                if !REPEATABLE.contains(&name) && sections.iter().any(|s| s.name == name) {
                    return Err(parse_error(
                        line,
                        col_of(indent),
                        format!("duplicate section [{name}]"),
                    ));
                }
                sections.push(Section {
                    name: name.into(),
                    line,
                    entries: BTreeMap::new(),
                });
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(parse_error(
                    line,
                    col_of(indent),
                    "expected 'key = value' or '[section]'",
                ));
            };
            let key = content[..eq].trim();
            if key.is_empty() || key.chars().any(char::is_whitespace) {
                return Err(parse_error(line, col_of(indent), "malformed key"));
            }
            let value_part = &content[eq + 1..];
            let lead = value_part.len() - value_part.trim_start().len();
            let text = value_part.trim().to_string();
            let value_col = col_of(eq + 1 + lead);
            if text.is_empty() {
                return Err(parse_error(
                    line,
                    value_col,
                    format!("key '{key}' has no value"),
                ));
            }
            let Some(section) = sections.last_mut() else {
                return Err(parse_error(
                    line,
                    col_of(indent),
                    format!("key '{key}' appears before any [section]"),
                ));
            };
            let order = section.entries.len();
            let value = Value {
                text,
                line,
                column: value_col,
            };
            if section
                .entries
                .insert(key.to_string(), (order, value))
                .is_some()
            {
                return Err(parse_error(
                    line,
                    col_of(indent),
                    format!("duplicate key '{key}' in section [{}]", section.name),
                ));
            }
        }
        Ok(Self { sections })
    }

    fn take_section(&mut self, name: &str) -> Option<Section> {
        let pos = self.sections.iter().position(|s| s.name == name)?;
        Some(self.sections.remove(pos))
    }

    fn take_all(&mut self, name: &str) -> Vec<Section> {
        let (taken, kept) = std::mem::take(&mut self.sections)
            .into_iter()
            .partition(|s| s.name == name);
        self.sections = kept;
        taken
    }

    fn into_config(mut self) -> Result<ScenarioConfig> {
        let id = match self.take_section("scenario") {
            Some(mut s) => {
                let id = s.require("id")?.text;
                s.finish()?;
                id
            }
            None => return Err(parse_error(1, 1, "missing [scenario] section")),
        };

        let mut model = self
            .take_section("model")
            .ok_or_else(|| parse_error(1, 1, "missing [model] section"))?;
        let family = model.require("family")?;
        let n_copies = model.require("n")?.usize()?;
        let m_copies = match model.take("m") {
            Some(v) => v.usize()?,
            None => 1,
        };
        let state_sections = self.take_all("state");
        let first_state_line = state_sections.first().map(|s| s.line);
        let model_spec = match family.text.as_str() {
            "rotating_qubit" => {
                let grid_size = model.require("grid_size")?.usize()?;
                let radius = model.require("radius")?.f64()?;
                let mixing = match model.take("mixing") {
                    Some(v) => v.f64()?,
                    None => 0.0,
                };
                ModelSpec::RotatingQubit {
                    grid_size,
                    radius,
                    mixing,
                }
            }
            "diagonal_qubit" => ModelSpec::DiagonalQubit {
                grid_size: model.require("grid_size")?.usize()?,
            },
            "explicit" => {
                if let Some(v) = model.take("grid_size") {
                    let k = v.usize()?;
                    if k != state_sections.len() {
                        return Err(v.err(format!(
                            "grid_size = {k} but {} [state] sections are given",
                            state_sections.len()
                        )));
                    }
                }
                let mut grid = Vec::new();
                let mut states = Vec::new();
                for (i, mut sec) in state_sections.into_iter().enumerate() {
                    let m = sec.require("matrix")?;
                    let op = m.matrix()?;
                    states.push(DensityOperator::new(op).map_err(|e| m.err(e.to_string()))?);
                    grid.push(match sec.take("theta") {
                        Some(t) => t.f64_list()?,
                        None => vec![i as f64],
                    });
                    sec.finish()?;
                }
                if states.is_empty() {
                    return Err(family.err("explicit family needs at least one [state] section"));
                }
                ModelSpec::Explicit { grid, states }
            }
            other => return Err(family.err(format!("unknown family '{other}'"))),
        };
        if !matches!(model_spec, ModelSpec::Explicit { .. }) {
            if let Some(line) = first_state_line {
                return Err(parse_error(
                    line,
                    1,
                    "[state] sections require family = explicit",
                ));
            }
        }
        model.finish()?;

        let prior = match self.take_section("prior") {
            None => PriorSpec::Uniform,
            Some(mut s) => {
                let kind = s.require("kind")?;
                let p = match kind.text.as_str() {
                    "uniform" => PriorSpec::Uniform,
                    "explicit" => PriorSpec::Explicit(s.require("weights")?.f64_list()?),
                    other => return Err(kind.err(format!("unknown prior kind '{other}'"))),
                };
                s.finish()?;
                p
            }
        };

        let element_sections = self.take_all("element");
        let first_element_line = element_sections.first().map(|s| s.line);
        let mut povm_section = self
            .take_section("povm")
            .ok_or_else(|| parse_error(1, 1, "missing [povm] section"))?;
        let kind = povm_section.require("kind")?;
        let povm = match kind.text.as_str() {
            "computational" => PovmSpec::Computational,
            "x" => PovmSpec::XBasis,
            "bell" => PovmSpec::Bell,
            "trivial" => PovmSpec::Trivial,
            "explicit" => {
                let mut elements = Vec::new();
                let mut labels = Vec::new();
                for (i, mut sec) in element_sections.into_iter().enumerate() {
                    elements.push(sec.require("matrix")?.matrix()?);
                    labels.push(match sec.take("label") {
                        Some(l) => l.text,
                        None => i.to_string(),
                    });
                    sec.finish()?;
                }
                let povm = validate_povm(elements)
                    .and_then(|p| p.with_labels(labels))
                    .map_err(|e| kind.err(e.to_string()))?;
                PovmSpec::Explicit(povm)
            }
            other => return Err(kind.err(format!("unknown POVM kind '{other}'"))),
        };
        if !matches!(povm, PovmSpec::Explicit(_)) {
            if let Some(line) = first_element_line {
                return Err(parse_error(
                    line,
                    1,
                    "[element] sections require kind = explicit",
                ));
            }
        }
        povm_section.finish()?;

        let mut run = self
            .take_section("run")
            .ok_or_else(|| parse_error(1, 1, "missing [run] section"))?;
        let alphas = run.require("alphas")?.f64_list()?;
        let seed = match run.take("seed") {
            Some(v) => v.u64()?,
            None => DEFAULT_SEED,
        };
        let output = run.take("output").map(|v| PathBuf::from(v.text));
        let max_dim = match run.take("max_dim") {
            Some(v) => v.usize()?,
            None => DEFAULT_MAX_DIM,
        };
        let n_perturb = match run.take("perturbations") {
            Some(v) => v.usize()?,
            None => DEFAULT_N_PERTURB,
        };
        let rates = match run.take("rates") {
            Some(v) => v.f64_list()?,
            None => DEFAULT_PERTURB_RATES.to_vec(),
        };
        run.finish()?;

        Ok(ScenarioConfig {
            id,
            model: model_spec,
            prior,
            n_copies,
            m_copies,
            povm,
            alphas,
            seed,
            output,
            max_dim,
            n_perturb,
            rates,
        })
    }
}

/// Reads a density matrix written as row-major `re,im` pairs (newlines allowed, `#` comments).
pub fn parse_state_str(text: &str) -> Result<DensityOperator> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let v = Value {
            text: content.to_string(),
            line: idx + 1,
            column: 1,
        };
        entries.extend(v.complex_entries()?);
    }
    let dim = (entries.len() as f64).sqrt().round() as usize;
    if dim == 0 || dim * dim != entries.len() {
        return Err(parse_error(
            1,
            1,
            format!(
                "state has {} entries, which is not a nonzero square",
                entries.len()
            ),
        ));
    }
    DensityOperator::new(HermitianOperator::from_rows(dim, &entries)?)
}

pub fn parse_state(path: impl AsRef<Path>) -> Result<DensityOperator> {
    parse_state_str(&read_file(path.as_ref())?)
}
