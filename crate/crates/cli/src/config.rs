//! Job configuration: one TOML document with nested tables, overridable from the command line.

use std::fmt;
use std::path::{Path, PathBuf};

use evanslab::riccati_evans::{EvansOptions, DEFAULT_RETRY_SEED};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Catalog,
    ProfileCheck,
    Essential,
    EvansScan,
    Winding,
    SummaryTables,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Catalog => "catalog",
            Task::ProfileCheck => "profile-check",
            Task::Essential => "essential",
            Task::EvansScan => "evans-scan",
            Task::Winding => "winding",
            Task::SummaryTables => "summary-tables",
        }
    }

    fn needs_wave(self) -> bool {
        !matches!(self, Task::Catalog | Task::SummaryTables)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub wave: WaveConfig,
    pub evans: EvansConfig,
    pub profile: ProfileConfig,
    pub essential: EssentialConfig,
    pub scan: ScanConfig,
    pub contour: ContourConfig,
    pub output: OutputConfig,
}

/// Wave selection. Unset parameters take the catalog entry's own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<u8>,
    /// Reaction term and profile as a TOML document, instead of a catalog entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<PathBuf>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Plateau half-width of the piecewise standing pulse.
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvansConfig {
    pub z0: f64,
    /// Truncation of the real line.
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "L_cap")]
    pub l_cap: f64,
    pub decay_floor: bool,
    #[serde(rename = "refine_L")]
    pub refine_l: bool,
    /// Seed of the unitary chart used after a blow-up.
    pub seed: u64,
    /// `default`, `identity`, `complex3`, `pulse4`, `front4` or `unitary-<seed>`.
    pub chart: String,
}

impl Default for EvansConfig {
    fn default() -> Self {
        let o = EvansOptions::default();
        Self { z0: o.z0, l: o.l, l_cap: o.l_cap, decay_floor: o.decay_floor, refine_l: o.refine_l, seed: DEFAULT_RETRY_SEED, chart: "default".into() }
    }
}

impl EvansConfig {
    pub fn options(&self) -> EvansOptions {
        EvansOptions {
            z0: self.z0,
            l: self.l,
            l_cap: self.l_cap,
            decay_floor: self.decay_floor,
            refine_l: self.refine_l,
            seed: self.seed,
            ..EvansOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub interval: [f64; 2],
    pub points: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { interval: [-20.0, 20.0], points: 4001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EssentialConfig {
    /// Border samples per branch and side.
    pub samples: usize,
    /// Wavenumber range `[-k_max, k_max]`; per-side default when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    pub region_re: [f64; 2],
    pub region_im: [f64; 2],
    pub region_points: [usize; 2],
}

impl Default for EssentialConfig {
    fn default() -> Self {
        Self { samples: 2001, k_max: None, region_re: [-10.0, 2.0], region_im: [-10.0, 10.0], region_points: [121, 201] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub interval: [f64; 2],
    pub points: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { interval: [0.01, 20.0], points: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    /// Outer radius of the right half-annulus; derived from the far fields when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    pub inner: f64,
    /// Initial samples before adaptive refinement.
    pub samples: usize,
    /// Box `[re_min, re_max, im_min, im_max]` searched for poles, together with its mirror image.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pole_search: Option<[f64; 4]>,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self { outer: None, inner: 1e-2, samples: 512, pole_search: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub fail_on_unstable: bool,
}

/// A configuration problem, located at a line of the source document when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub source: Option<PathBuf>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn plain(message: impl Into<String>) -> Self {
        Self { source: None, line: None, column: None, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, self.line) {
            (Some(p), Some(l)) => write!(f, "{}:{}:{}: {}", p.display(), l, self.column.unwrap_or(1), self.message),
            (Some(p), None) => write!(f, "{}: {}", p.display(), self.message),
            (None, _) => write!(f, "{}", self.message),
        }
    }
}

/// Line and column (1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

/// Line of `key` inside `[table]` (the root table when `table` is empty).
fn key_line(text: &str, table: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            continue;
        }
        if current == table {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl JobConfig {
    pub fn parse(text: &str, source: &Path) -> Result<Self, Vec<Diagnostic>> {
        toml::from_str(text).map_err(|e: toml::de::Error| {
            let (line, column) = match e.span() {
                Some(span) => {
                    let (l, c) = position(text, span.start);
                    (Some(l), Some(c))
                }
                None => (None, None),
            };
            vec![Diagnostic { source: Some(source.to_path_buf()), line, column, message: e.message().trim().to_string() }]
        })
    }

    pub fn load(path: &Path) -> Result<(Self, String), Vec<Diagnostic>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| vec![Diagnostic { source: Some(path.to_path_buf()), line: None, column: None, message: e.to_string() }])?;
        let cfg = Self::parse(&text, path)?;
        Ok((cfg, text))
    }

    /// Defaults as a TOML document, with the unset optional keys listed as comments.
    pub fn defaults_document() -> String {
        let body = toml::to_string(&JobConfig::default()).expect("defaults serialize");
        format!(
            "# evanslab job configuration defaults\n\
             # task = \"evans-scan\"          # or pass the task as a subcommand\n\
             # Optional keys without a fixed default:\n\
             #   wave.example, wave.document, wave.D, wave.c, wave.gamma, wave.delta, wave.beta, wave.L\n\
             #   essential.k_max, contour.outer, contour.pole_search, output.dir, output.threads\n\n{body}"
        )
    }

    /// Semantic checks for `task`; each problem is located in `text` when it came from the file.
    pub fn validate(&self, task: Task, source: Option<(&Path, &str)>) -> Result<(), Vec<Diagnostic>> {
        let mut problems: Vec<(&str, &str, String)> = Vec::new();
        let w = &self.wave;
        if task.needs_wave() {
            match (w.example, &w.document) {
                (None, None) => problems.push(("wave", "example", format!("task `{}` needs wave.example or wave.document", task.name()))),
                (Some(_), Some(_)) => problems.push(("wave", "document", "wave.example and wave.document are mutually exclusive".into())),
                (Some(id), None) if !(1..=10).contains(&id) => problems.push(("wave", "example", format!("unknown example {id}; expected 1-10"))),
                _ => {}
            }
        }
        for (key, v) in [("D", w.d), ("c", w.c), ("gamma", w.gamma), ("delta", w.delta), ("beta", w.beta), ("L", w.l)] {
            if v.is_some_and(|x| !x.is_finite()) {
                problems.push(("wave", key, format!("wave.{key} must be finite")));
            }
        }
        let e = &self.evans;
        if !(e.l > 0.0 && e.l.is_finite()) {
            problems.push(("evans", "L", format!("evans.L must be positive, got {}", e.l)));
        }
        if !(e.l_cap >= e.l) {
            problems.push(("evans", "L_cap", format!("evans.L_cap ({}) must be at least evans.L ({})", e.l_cap, e.l)));
        }
        if e.l > 0.0 && (!e.z0.is_finite() || e.z0.abs() >= e.l) {
            problems.push(("evans", "z0", format!("evans.z0 must lie inside (-L, L), got {}", e.z0)));
        }
        if !valid_chart_name(&e.chart) {
            problems.push(("evans", "chart", format!("unknown chart `{}`", e.chart)));
        }
        let p = &self.profile;
        if !(p.interval[1] > p.interval[0]) || p.points < 2 {
            problems.push(("profile", "interval", "profile.interval must be increasing and profile.points >= 2".into()));
        }
        let s = &self.scan;
        if !(s.interval[1] > s.interval[0]) {
            problems.push(("scan", "interval", format!("scan.interval must be increasing, got {:?}", s.interval)));
        }
        if s.points < 2 {
            problems.push(("scan", "points", "scan.points must be at least 2".into()));
        }
        let es = &self.essential;
        if es.samples < 2 {
            problems.push(("essential", "samples", "essential.samples must be at least 2".into()));
        }
        if es.k_max.is_some_and(|k| !(k > 0.0)) {
            problems.push(("essential", "k_max", "essential.k_max must be positive".into()));
        }
        if !(es.region_re[1] > es.region_re[0]) || !(es.region_im[1] > es.region_im[0]) {
            problems.push(("essential", "region_re", "region bounds must be increasing".into()));
        }
        if es.region_points.iter().any(|&n| n < 2) {
            problems.push(("essential", "region_points", "essential.region_points must be at least 2 each".into()));
        }
        let c = &self.contour;
        if !(c.inner > 0.0) || c.outer.is_some_and(|o| !(o > c.inner)) {
            problems.push(("contour", "inner", "contour radii must satisfy 0 < inner < outer".into()));
        }
        if c.samples < 8 {
            problems.push(("contour", "samples", "contour.samples must be at least 8".into()));
        }
        if let Some(b) = c.pole_search {
            if !(b[1] > b[0] && b[3] > b[2]) {
                problems.push(("contour", "pole_search", "contour.pole_search must be [re_min, re_max, im_min, im_max] with increasing bounds".into()));
            }
        }
        if self.output.threads == Some(0) {
            problems.push(("output", "threads", "output.threads must be positive".into()));
        }
        if problems.is_empty() {
            return Ok(());
        }
        Err(problems
            .into_iter()
            .map(|(table, key, message)| match source {
                Some((path, text)) => Diagnostic { source: Some(path.to_path_buf()), line: key_line(text, table, key), column: None, message },
                None => Diagnostic::plain(message),
            })
            .collect())
    }
}

/// Chart names accepted by `evans.chart`.
pub fn valid_chart_name(name: &str) -> bool {
    matches!(name, "default" | "identity" | "complex3" | "pulse4" | "front4")
        || name.strip_prefix("unitary-").is_some_and(|s| s.parse::<u64>().is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let text = JobConfig::defaults_document();
        assert_eq!(JobConfig::parse(&text, Path::new("d.toml")).unwrap(), JobConfig::default());
    }

    #[test]
    fn unknown_keys_are_located() {
        let text = "[wave]\nexample = 8\n\n[scan]\npoints = 10\nbogus = 1\n";
        let err = JobConfig::parse(text, Path::new("job.toml")).unwrap_err();
        assert_eq!(err[0].line, Some(6), "{}", err[0]);
        assert!(err[0].to_string().starts_with("job.toml:6:"));
    }

    #[test]
    fn semantic_errors_point_at_their_key() {
        let text = "[wave]\nexample = 12\n\n[evans]\nL = -3.0\n";
        let cfg = JobConfig::parse(text, Path::new("job.toml")).unwrap();
        let err = cfg.validate(Task::EvansScan, Some((Path::new("job.toml"), text))).unwrap_err();
        let lines: Vec<_> = err.iter().map(|d| d.line).collect();
        assert!(lines.contains(&Some(2)) && lines.contains(&Some(5)), "{err:?}");
    }

    #[test]
    fn catalog_needs_no_wave() {
        assert!(JobConfig::default().validate(Task::Catalog, None).is_ok());
        assert!(JobConfig::default().validate(Task::Winding, None).is_err());
    }
}
