//! Scenario files: one `key = value` per line with dotted keys.
//!
//! ```text
//! # row g
//! freq.eta = 0
//! freq.components.0.weight = 1
//! freq.components.0.k = 1
//! phase1.kind = zigzag
//! phase1.alpha = 5
//! phase2.kind = constant
//! phase2.theta0 = 0
//! amplitudes.a = 0.5, 0
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Amplitudes take
//! `re, im` or a bare real part. Everything except the components and the
//! two phase kinds has a default; [`ScenarioFile::to_text`] writes every key.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use mempart_core::analytic::SeriesControl;
use mempart_core::engine::{EngineMode, EngineSettings};
use mempart_core::oracle::QuadratureControl;
use mempart_core::partition::DEFAULT_REVIVAL_THRESHOLD;
use mempart_core::{
    AmplitudeVector, ClassifierControl, Error, FrequencySpec, GaussianComponent, PhaseProfile,
    ScenarioConfig, TimeGrid,
};
use num_complex::Complex64;

/// Position-tagged problem with a scenario file. Line and column are
/// 1-based; problems with a missing key point one line past the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub eta: f64,
    pub components: Vec<GaussianComponent>,
    pub phase1: PhaseProfile,
    pub phase2: PhaseProfile,
    pub amplitudes: [Complex64; 4],
    pub tau_max: f64,
    pub step: f64,
    pub threshold: f64,
    pub mode: EngineMode,
    pub max_terms: u32,
    pub nodes: usize,
    pub nodes_2d: usize,
}

const AMPLITUDE_KEYS: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Debug, Clone)]
struct Entry<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
    key_col: usize,
    value_col: usize,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.value_col,
            message: format!("{}: {}", self.key, message.into()),
        }
    }

    fn number(&self) -> Result<f64, ParseError> {
        parse_number(self.value).map_err(|m| self.err(m))
    }

    fn integer<T: std::str::FromStr>(&self) -> Result<T, ParseError> {
        self.value.parse().map_err(|_| {
            self.err(format!(
                "expected a non-negative integer, got '{}'",
                self.value
            ))
        })
    }

    fn complex(&self) -> Result<Complex64, ParseError> {
        let mut parts = self.value.split(',');
        let re = parse_number(parts.next().unwrap_or("")).map_err(|m| self.err(m))?;
        let im = match parts.next() {
            Some(s) => parse_number(s).map_err(|m| self.err(m))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(self.err("expected 're, im'"));
        }
        Ok(Complex64::new(re, im))
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("'{s}' is not finite")),
        Err(_) => Err(format!("expected a number, got '{s}'")),
    }
}

fn tokenize(text: &str) -> Result<Vec<Entry<'_>>, ParseError> {
    let mut out = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim_start();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let indent = raw.len() - body.len();
        let key_col = raw[..indent].chars().count() + 1;
        let Some(eq) = raw.find('=') else {
            return Err(ParseError {
                line,
                column: key_col,
                message: "expected 'key = value'".into(),
            });
        };
        let key = raw[..eq].trim();
        let rest = &raw[eq + 1..];
        let value = rest.trim();
        let value_col = raw[..eq + 1 + (rest.len() - rest.trim_start().len())]
            .chars()
            .count()
            + 1;
        if key.is_empty() {
            return Err(ParseError {
                line,
                column: key_col,
                message: "missing key before '='".into(),
            });
        }
        if let Some(first) = seen.insert(key, line) {
            return Err(ParseError {
                line,
                column: key_col,
                message: format!("duplicate key '{key}' (first set on line {first})"),
            });
        }
        out.push(Entry {
            key,
            value,
            line,
            key_col,
            value_col,
        });
    }
    Ok(out)
}

#[derive(Default)]
struct PhaseKeys<'a> {
    kind: Option<Entry<'a>>,
    params: Vec<Entry<'a>>,
}

fn build_phase(name: &str, keys: PhaseKeys<'_>, eof: usize) -> Result<PhaseProfile, ParseError> {
    let kind = keys.kind.ok_or_else(|| ParseError {
        line: eof,
        column: 1,
        message: format!("missing key '{name}.kind'"),
    })?;
    let wanted = match kind.value {
        "constant" => "theta0",
        "zigzag" => "alpha",
        "parabola" => "beta",
        other => {
            return Err(kind.err(format!(
                "unknown phase kind '{other}' (expected constant, zigzag or parabola)"
            )))
        }
    };
    let mut value = None;
    for p in &keys.params {
        let param = p.key.rsplit('.').next().unwrap_or("");
        if param != wanted {
            return Err(ParseError {
                line: p.line,
                column: p.key_col,
                message: format!("'{}' does not apply to kind {}", p.key, kind.value),
            });
        }
        value = Some(p.number()?);
    }
    let missing = || ParseError {
        line: eof,
        column: 1,
        message: format!("missing key '{name}.{wanted}'"),
    };
    Ok(match wanted {
        "theta0" => PhaseProfile::Constant(value.unwrap_or(0.0)),
        "alpha" => PhaseProfile::Zigzag(value.ok_or_else(missing)?),
        _ => PhaseProfile::Parabola(value.ok_or_else(missing)?),
    })
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let entries = tokenize(text)?;
        let eof = text.lines().count() + 1;
        let mut file = ScenarioFile::defaults();
        let mut components: BTreeMap<usize, [Option<(f64, Entry)>; 2]> = BTreeMap::new();
        let mut phases: [PhaseKeys; 2] = Default::default();
        let mut positions: HashMap<&str, Entry> = HashMap::new();

        for e in &entries {
            let parts: Vec<&str> = e.key.split('.').collect();
            match parts.as_slice() {
                ["freq", "eta"] => file.eta = e.number()?,
                ["freq", "components", idx, field @ ("weight" | "k")] => {
                    let idx: usize = idx.parse().map_err(|_| ParseError {
                        line: e.line,
                        column: e.key_col,
                        message: format!("component index '{idx}' is not an integer"),
                    })?;
                    let slot = usize::from(*field == "k");
                    components.entry(idx).or_default()[slot] = Some((e.number()?, e.clone()));
                }
                [p @ ("phase1" | "phase2"), rest @ ..] => {
                    let keys = &mut phases[usize::from(*p == "phase2")];
                    match rest {
                        ["kind"] => keys.kind = Some(e.clone()),
                        ["theta0" | "alpha" | "beta"] => keys.params.push(e.clone()),
                        _ => return Err(unknown(e)),
                    }
                }
                ["amplitudes", name] => {
                    let Some(i) = AMPLITUDE_KEYS.iter().position(|k| k == name) else {
                        return Err(unknown(e));
                    };
                    file.amplitudes[i] = e.complex()?;
                }
                ["grid", "tau_max"] => file.tau_max = e.number()?,
                ["grid", "step"] => file.step = e.number()?,
                ["classifier", "threshold"] => file.threshold = e.number()?,
                ["engine", "mode"] => {
                    file.mode = e
                        .value
                        .parse()
                        .map_err(|err: Error| e.err(err.to_string()))?
                }
                ["engine", "series", "max_terms"] => file.max_terms = e.integer()?,
                ["engine", "quad", "nodes"] => file.nodes = e.integer()?,
                ["engine", "quad", "nodes_2d"] => file.nodes_2d = e.integer()?,
                _ => return Err(unknown(e)),
            }
            positions.insert(e.key, e.clone());
        }

        if components.is_empty() {
            return Err(ParseError {
                line: eof,
                column: 1,
                message: "no frequency components (freq.components.0.weight / .k)".into(),
            });
        }
        file.components.clear();
        for (expected, (idx, [w, k])) in components.into_iter().enumerate() {
            let present = w.as_ref().or(k.as_ref()).map(|p| p.1.clone()).unwrap();
            if idx != expected {
                return Err(ParseError {
                    line: present.line,
                    column: present.key_col,
                    message: format!("component indices must count up from 0; missing {expected}"),
                });
            }
            let (Some((weight, we)), Some((kval, ke))) = (w, k) else {
                return Err(ParseError {
                    line: present.line,
                    column: present.key_col,
                    message: format!("component {idx} needs both weight and k"),
                });
            };
            let c = GaussianComponent { weight, k: kval };
            c.validate().map_err(|err| match err {
                Error::WeightViolation(m) => we.err(m),
                other => ke.err(other.to_string()),
            })?;
            file.components.push(c);
        }
        let [p1, p2] = phases;
        file.phase1 = build_phase("phase1", p1, eof)?;
        file.phase2 = build_phase("phase2", p2, eof)?;

        // Semantic checks, reported at the key that carries the value.
        let at = |key: &str, err: Error| match positions.get(key) {
            Some(e) => e.err(err.to_string()),
            None => ParseError {
                line: eof,
                column: 1,
                message: format!("{key} (default): {err}"),
            },
        };
        file.classifier_control().map_err(|err| match err {
            Error::GridViolation(_) => at(
                if positions.contains_key("grid.step") && !positions.contains_key("grid.tau_max") {
                    "grid.step"
                } else {
                    "grid.tau_max"
                },
                err,
            ),
            _ => at("classifier.threshold", err),
        })?;
        file.settings().map_err(|err| {
            let key = if file.max_terms < 1 {
                "engine.series.max_terms"
            } else if file.nodes < 8 {
                "engine.quad.nodes"
            } else {
                "engine.quad.nodes_2d"
            };
            at(key, err)
        })?;
        file.config(None, None).map_err(|err| match err {
            Error::NormViolation { .. } => {
                let key = AMPLITUDE_KEYS
                    .iter()
                    .map(|k| format!("amplitudes.{k}"))
                    .find(|k| positions.contains_key(k.as_str()))
                    .unwrap_or_else(|| "amplitudes.a".into());
                at(&key, err)
            }
            Error::WeightViolation(_) => at("freq.components.0.weight", err),
            other => ParseError {
                line: eof,
                column: 1,
                message: other.to_string(),
            },
        })?;
        Ok(file)
    }

    /// Defaults for every optional key. Components and phases are
    /// placeholders that parsing always replaces.
    fn defaults() -> Self {
        let q = QuadratureControl::default();
        ScenarioFile {
            eta: 0.0,
            components: vec![GaussianComponent {
                weight: 1.0,
                k: 0.0,
            }],
            phase1: PhaseProfile::Constant(0.0),
            phase2: PhaseProfile::Constant(0.0),
            amplitudes: AmplitudeVector::plus_plus().as_array(),
            tau_max: 10.0,
            step: 0.01,
            threshold: DEFAULT_REVIVAL_THRESHOLD,
            mode: EngineMode::Analytic,
            max_terms: SeriesControl::default().max_terms,
            nodes: q.nodes_1d,
            nodes_2d: q.nodes_2d,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("freq.eta", self.eta.to_string());
        for (i, c) in self.components.iter().enumerate() {
            put(&format!("freq.components.{i}.weight"), c.weight.to_string());
            put(&format!("freq.components.{i}.k"), c.k.to_string());
        }
        for (name, p) in [("phase1", self.phase1), ("phase2", self.phase2)] {
            let (kind, param, v) = match p {
                PhaseProfile::Constant(v) => ("constant", "theta0", v),
                PhaseProfile::Zigzag(v) => ("zigzag", "alpha", v),
                PhaseProfile::Parabola(v) => ("parabola", "beta", v),
            };
            put(&format!("{name}.kind"), kind.into());
            put(&format!("{name}.{param}"), v.to_string());
        }
        for (k, z) in AMPLITUDE_KEYS.iter().zip(self.amplitudes) {
            put(&format!("amplitudes.{k}"), format!("{}, {}", z.re, z.im));
        }
        put("grid.tau_max", self.tau_max.to_string());
        put("grid.step", self.step.to_string());
        put("classifier.threshold", self.threshold.to_string());
        put("engine.mode", self.mode.to_string());
        put("engine.series.max_terms", self.max_terms.to_string());
        put("engine.quad.nodes", self.nodes.to_string());
        put("engine.quad.nodes_2d", self.nodes_2d.to_string());
        s
    }

    /// The scenario, optionally on a different grid.
    pub fn config(
        &self,
        tau_max: Option<f64>,
        step: Option<f64>,
    ) -> mempart_core::Result<ScenarioConfig> {
        let [a, b, c, d] = self.amplitudes;
        ScenarioConfig::new(
            FrequencySpec::from_eta(self.components.clone(), self.eta)?,
            self.phase1,
            self.phase2,
            AmplitudeVector::new(a, b, c, d)?,
            TimeGrid::uniform(tau_max.unwrap_or(self.tau_max), step.unwrap_or(self.step))?,
        )
    }

    pub fn classifier_control(&self) -> mempart_core::Result<ClassifierControl> {
        ClassifierControl::new(self.threshold, TimeGrid::uniform(self.tau_max, self.step)?)
    }

    pub fn settings(&self) -> mempart_core::Result<EngineSettings> {
        let settings = EngineSettings {
            mode: self.mode,
            series: SeriesControl {
                max_terms: self.max_terms,
                ..SeriesControl::default()
            },
            quadrature: QuadratureControl {
                nodes_1d: self.nodes,
                nodes_2d: self.nodes_2d,
                ..QuadratureControl::default()
            },
            ..EngineSettings::default()
        };
        settings.validate()?;
        Ok(settings)
    }
}

fn unknown(e: &Entry) -> ParseError {
    ParseError {
        line: e.line,
        column: e.key_col,
        message: format!("unknown key '{}'", e.key),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROW_K: &str = "\
# row k
freq.eta = 0
freq.components.0.weight = 0.5
freq.components.0.k = 1
freq.components.1.weight = 0.5
freq.components.1.k = -1
phase1.kind = parabola
phase1.beta = 3
phase2.kind = constant
";

    #[test]
    fn minimal_file_takes_defaults() {
        let f = ScenarioFile::parse(ROW_K).unwrap();
        assert_eq!(f.components.len(), 2);
        assert_eq!(f.phase1, PhaseProfile::Parabola(3.0));
        assert_eq!(f.phase2, PhaseProfile::Constant(0.0));
        assert_eq!(f.amplitudes, AmplitudeVector::plus_plus().as_array());
        assert_eq!(f.mode, EngineMode::Analytic);
        assert_eq!(f.config(None, None).unwrap().grid.len(), 1001);
    }

    #[test]
    fn text_round_trips() {
        let f = ScenarioFile::parse(ROW_K).unwrap();
        assert_eq!(ScenarioFile::parse(&f.to_text()).unwrap(), f);
    }

    fn error_at(text: &str) -> (usize, usize) {
        let e = ScenarioFile::parse(text).unwrap_err();
        (e.line, e.column)
    }

    #[test]
    fn unknown_key_points_at_key() {
        let text = format!("{ROW_K}  grid.tau_mx = 3\n");
        let e = ScenarioFile::parse(&text).unwrap_err();
        assert_eq!((e.line, e.column), (10, 3));
        assert!(e.message.contains("grid.tau_mx"));
    }

    #[test]
    fn bad_value_points_at_value() {
        assert_eq!(error_at(&ROW_K.replace("beta = 3", "beta = x3")), (8, 15));
        assert_eq!(error_at(&ROW_K.replace("beta = 3", "beta = inf")), (8, 15));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(error_at(&format!("{ROW_K}phase1.beta = 2\n")), (10, 1));
        assert_eq!(error_at(&format!("{ROW_K}no equals sign\n")), (10, 1));
        assert_eq!(error_at(&format!("{ROW_K}phase2.alpha = 2\n")), (10, 1));
        assert_eq!(
            error_at(&ROW_K.replace("components.1", "components.2")),
            (5, 1)
        );
        let no_kind = ROW_K.replace("phase2.kind = constant\n", "");
        assert_eq!(error_at(&no_kind), (9, 1));
    }

    #[test]
    fn semantic_errors_point_at_their_key() {
        let bad_k = ROW_K.replace("k = -1", "k = -1.5");
        assert_eq!(error_at(&bad_k).0, 6);
        let weights = ROW_K.replace("1.weight = 0.5", "1.weight = 0.25");
        assert_eq!(error_at(&weights).0, 3);
        let norm = format!("{ROW_K}amplitudes.b = 0.1\n");
        assert_eq!(error_at(&norm).0, 10);
        let grid = format!("{ROW_K}grid.tau_max = 0\n");
        let e = ScenarioFile::parse(&grid).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(e.message.contains("grid"), "{e}");
        let nodes = format!("{ROW_K}engine.quad.nodes = 4\n");
        assert_eq!(error_at(&nodes).0, 10);
    }

    #[test]
    fn complex_amplitudes() {
        let text = format!(
            "{ROW_K}amplitudes.a = 0, 0.5\namplitudes.b = -0.5\namplitudes.c = 0.5, 0\namplitudes.d = 0.5,0\n"
        );
        let f = ScenarioFile::parse(&text).unwrap();
        assert_eq!(f.amplitudes[0], Complex64::new(0.0, 0.5));
        assert_eq!(f.amplitudes[1], Complex64::new(-0.5, 0.0));
        assert_eq!(
            error_at(&format!("{ROW_K}amplitudes.a = 1, 2, 3\n")),
            (10, 16)
        );
    }

    #[test]
    fn engine_keys() {
        let text = format!(
            "{ROW_K}engine.mode = cross-check\nengine.series.max_terms = 32\nengine.quad.nodes = 100\n"
        );
        let s = ScenarioFile::parse(&text).unwrap().settings().unwrap();
        assert_eq!(s.mode, EngineMode::CrossCheck);
        assert_eq!(s.series.max_terms, 32);
        assert_eq!(s.quadrature.nodes_1d, 100);
        assert_eq!(error_at(&format!("{ROW_K}engine.mode = exact\n")), (10, 15));
        assert_eq!(
            error_at(&format!("{ROW_K}engine.quad.nodes = -3\n")),
            (10, 21)
        );
    }
}
