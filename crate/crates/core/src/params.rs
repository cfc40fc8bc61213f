//! Dispatch parameters and their on-disk tuning file.
//!
//! The file is line-oriented `key=value` text with exactly the keys
//! `format_version`, `source`, `host`, `created_at` and `p1`..`p8`. Floats are
//! written as the shortest decimal that parses back to the same `f64`, so a
//! file round-trips bit for bit. Blank lines and lines starting with `#` are
//! ignored.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

const PARAM_KEYS: [&str; 8] = ["p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"];

static DEFAULT_FILE: &str = include_str!("../tuning/default.tuning");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuningSource {
    Default,
    MachineTuned,
}

impl TuningSource {
    pub fn as_str(self) -> &'static str {
        match self {
            TuningSource::Default => "default",
            TuningSource::MachineTuned => "machine-tuned",
        }
    }
}

impl fmt::Display for TuningSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("line {line}: expected key=value, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid value for `{key}`: `{value}`")]
    InvalidValue { key: &'static str, value: String },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(String),
    #[error("invalid tuning parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The eight parameters of the dispatcher plus provenance.
///
/// `p1..p3` define the small-regime plane `h1 = p1*r + p2*n + p3` (positive
/// selects the combinatoric algorithm, otherwise Glynn), `p4` is the largest
/// square order always computed by enumeration, `p5..p7` define the
/// large-regime plane `h2` (positive selects Glynn, otherwise Ryser) and `p8`
/// is the largest column count treated as the small regime.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
    pub p6: f64,
    pub p7: f64,
    pub p8: f64,
    pub source: TuningSource,
    pub created_at: String,
    pub host: String,
}

impl Default for TuningParams {
    /// The compiled-in parameters shipped with the crate.
    fn default() -> Self {
        static DEFAULTS: OnceLock<TuningParams> = OnceLock::new();
        DEFAULTS
            .get_or_init(|| TuningParams::parse(DEFAULT_FILE).expect("bundled default tuning file is valid"))
            .clone()
    }
}

impl TuningParams {
    pub fn values(&self) -> [f64; 8] {
        [self.p1, self.p2, self.p3, self.p4, self.p5, self.p6, self.p7, self.p8]
    }

    fn set(&mut self, index: usize, v: f64) {
        match index {
            0 => self.p1 = v,
            1 => self.p2 = v,
            2 => self.p3 = v,
            3 => self.p4 = v,
            4 => self.p5 = v,
            5 => self.p6 = v,
            6 => self.p7 = v,
            _ => self.p8 = v,
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let invalid = |msg: String| Err(ParamsError::Invalid(msg));
        if let Some(i) = self.values().iter().position(|v| !v.is_finite()) {
            return invalid(format!("{} is not finite", PARAM_KEYS[i]));
        }
        if self.p8 < 2.0 {
            return invalid(format!("p8 = {} must be at least 2", self.p8));
        }
        if self.p4 > self.p8 {
            return invalid(format!("p4 = {} exceeds p8 = {}", self.p4, self.p8));
        }
        if self.p1 == 0.0 && self.p2 == 0.0 {
            return invalid("first plane has a zero normal (p1 = p2 = 0)".into());
        }
        if self.p5 == 0.0 && self.p6 == 0.0 {
            return invalid("second plane has a zero normal (p5 = p6 = 0)".into());
        }
        for (key, text) in [("host", &self.host), ("created_at", &self.created_at)] {
            if text.contains('\n') || text.contains('\r') {
                return invalid(format!("{key} contains a line break"));
            }
        }
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "format_version={FORMAT_VERSION}\nsource={}\nhost={}\ncreated_at={}\n",
            self.source, self.host, self.created_at
        );
        for (key, v) in PARAM_KEYS.iter().zip(self.values()) {
            out.push_str(&format!("{key}={v:?}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParamsError> {
        let mut version: Option<String> = None;
        let mut source: Option<TuningSource> = None;
        let mut host: Option<String> = None;
        let mut created_at: Option<String> = None;
        let mut values: [Option<f64>; 8] = [None; 8];

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ParamsError::Malformed {
                    line: lineno + 1,
                    text: raw.to_owned(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let dup = || ParamsError::DuplicateKey(key.to_owned());
            match key {
                "format_version" => {
                    if version.replace(value.to_owned()).is_some() {
                        return Err(dup());
                    }
                }
                "source" => {
                    let s = match value {
                        "default" => TuningSource::Default,
                        "machine-tuned" => TuningSource::MachineTuned,
                        _ => {
                            return Err(ParamsError::InvalidValue {
                                key: "source",
                                value: value.to_owned(),
                            })
                        }
                    };
                    if source.replace(s).is_some() {
                        return Err(dup());
                    }
                }
                "host" => {
                    if host.replace(value.to_owned()).is_some() {
                        return Err(dup());
                    }
                }
                "created_at" => {
                    if created_at.replace(value.to_owned()).is_some() {
                        return Err(dup());
                    }
                }
                _ => {
                    let Some(i) = PARAM_KEYS.iter().position(|k| *k == key) else {
                        return Err(ParamsError::UnknownKey(key.to_owned()));
                    };
                    let v: f64 = value.parse().map_err(|_| ParamsError::InvalidValue {
                        key: PARAM_KEYS[i],
                        value: value.to_owned(),
                    })?;
                    if values[i].replace(v).is_some() {
                        return Err(dup());
                    }
                }
            }
        }

        let version = version.ok_or(ParamsError::MissingKey("format_version"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(ParamsError::UnsupportedVersion(version));
        }
        let mut params = TuningParams {
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
            p4: 0.0,
            p5: 0.0,
            p6: 0.0,
            p7: 0.0,
            p8: 0.0,
            source: source.ok_or(ParamsError::MissingKey("source"))?,
            created_at: created_at.ok_or(ParamsError::MissingKey("created_at"))?,
            host: host.ok_or(ParamsError::MissingKey("host"))?,
        };
        for (i, v) in values.iter().enumerate() {
            params.set(i, v.ok_or(ParamsError::MissingKey(PARAM_KEYS[i]))?);
        }
        params.validate()?;
        Ok(params)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ParamsError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ParamsError> {
        self.validate()?;
        fs::write(path, self.to_file_string())?;
        Ok(())
    }

    /// Loads `path` when given, otherwise returns the compiled-in defaults.
    pub fn discover(path: Option<&Path>) -> Result<Self, ParamsError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }
}

/// A short description of the current machine for the `host` field.
pub fn host_descriptor() -> String {
    let name = fs::read_to_string("/etc/hostname")
        .ok()
        .map(|s| s.trim().to_owned())
        .filter(|s| !s.is_empty())
        .or_else(|| std::env::var("HOSTNAME").ok())
        .unwrap_or_else(|| "unknown".into());
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{name} {}-{} {cpus}cpu",
        std::env::consts::ARCH,
        std::env::consts::OS
    )
    .replace(['\n', '\r', '='], " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TuningParams {
        TuningParams {
            p1: -1.25,
            p2: -0.1,
            p3: 0.1 + 0.2,
            p4: 4.0,
            p5: 20.0,
            p6: -1.0 / 3.0,
            p7: -3.0,
            p8: 13.0,
            source: TuningSource::MachineTuned,
            created_at: "2026-01-01T00:00:00Z".into(),
            host: "box x86_64-linux 8cpu".into(),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let p = sample();
        let text = p.to_file_string();
        let q = TuningParams::parse(&text).unwrap();
        assert_eq!(p, q);
        for (a, b) in p.values().iter().zip(q.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for key in PARAM_KEYS {
            assert!(text.contains(&format!("\n{key}=")));
        }
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tuning");
        sample().save(&path).unwrap();
        assert_eq!(TuningParams::load(&path).unwrap(), sample());
        assert!(matches!(
            TuningParams::load(dir.path().join("missing")),
            Err(ParamsError::Io(_))
        ));
    }

    #[test]
    fn missing_key_is_named() {
        let text: String = sample()
            .to_file_string()
            .lines()
            .filter(|l| !l.starts_with("p6="))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = TuningParams::parse(&text).unwrap_err();
        assert!(matches!(err, ParamsError::MissingKey("p6")));
        assert_eq!(err.to_string(), "missing key `p6`");
    }

    #[test]
    fn unknown_and_duplicate_keys_rejected() {
        let text = sample().to_file_string();
        assert!(matches!(
            TuningParams::parse(&format!("{text}p9=1\n")),
            Err(ParamsError::UnknownKey(k)) if k == "p9"
        ));
        assert!(matches!(
            TuningParams::parse(&format!("{text}p1=1\n")),
            Err(ParamsError::DuplicateKey(_))
        ));
        assert!(matches!(
            TuningParams::parse(&text.replace("format_version=1", "format_version=2")),
            Err(ParamsError::UnsupportedVersion(_))
        ));
        assert!(matches!(
            TuningParams::parse(&text.replace("p3=", "p3:")),
            Err(ParamsError::Malformed { .. })
        ));
        assert!(matches!(
            TuningParams::parse(&text.replace("p2=-0.1", "p2=abc")),
            Err(ParamsError::InvalidValue { key: "p2", .. })
        ));
    }

    #[test]
    fn invariants_enforced() {
        let mut p = sample();
        p.p4 = 14.0;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.p8 = 1.0;
        p.p4 = 1.0;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.p5 = 0.0;
        p.p6 = 0.0;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.p1 = 0.0;
        p.p2 = 0.0;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.p3 = f64::NAN;
        assert!(p.validate().is_err());
        let mut p = sample();
        p.host = "a\nb".into();
        assert!(p.validate().is_err());
    }

    #[test]
    fn defaults_parse() {
        let d = TuningParams::default();
        assert_eq!(d.source, TuningSource::Default);
        assert_eq!(d.p8, 13.0);
        d.validate().unwrap();
        assert_eq!(TuningParams::discover(None).unwrap(), d);
    }
}
