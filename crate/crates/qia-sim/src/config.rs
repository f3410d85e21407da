//! Experiment configuration with flag > config-file > default precedence.

use num_complex::Complex64;
use qia_core::adversary::ProtocolId;
use qia_core::analysis::AttackKind;
use qia_core::runtime::Thresholds;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum ConfigError {
    Invalid(String),
    Io(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            ConfigError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Fully resolved configuration of one `run` invocation.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub protocol: ProtocolId,
    pub attack: AttackKind,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
    pub coefficients: Option<([Complex64; 4], Option<[Complex64; 4]>)>,
    pub out_path: Option<PathBuf>,
    pub deterministic: bool,
}

/// The unresolved flag/file layer: every field optional.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub protocol: Option<u8>,
    pub attack: Option<String>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub qber_threshold: Option<f64>,
    pub auth_threshold: Option<f64>,
    pub coeffs: Option<String>,
    pub out: Option<PathBuf>,
    pub deterministic: Option<bool>,
}

impl PartialConfig {
    /// Values from `self` win over values from `fallback`.
    pub fn or(self, fallback: PartialConfig) -> PartialConfig {
        PartialConfig {
            protocol: self.protocol.or(fallback.protocol),
            attack: self.attack.or(fallback.attack),
            n: self.n.or(fallback.n),
            trials: self.trials.or(fallback.trials),
            seed: self.seed.or(fallback.seed),
            qber_threshold: self.qber_threshold.or(fallback.qber_threshold),
            auth_threshold: self.auth_threshold.or(fallback.auth_threshold),
            coeffs: self.coeffs.or(fallback.coeffs),
            out: self.out.or(fallback.out),
            deterministic: self.deterministic.or(fallback.deterministic),
        }
    }

    /// Parses a flat `key=value` file (one pair per line, `#` comments).
    pub fn from_file(path: &Path) -> Result<PartialConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::Invalid(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut cfg = PartialConfig::default();
        let parse_err = |key: &str, v: &str| {
            ConfigError::Invalid(format!("bad value {v:?} for key {key:?}"))
        };
        for (key, value) in map {
            match key.as_str() {
                "protocol" => cfg.protocol = Some(value.parse().map_err(|_| parse_err(&key, &value))?),
                "attack" => cfg.attack = Some(value),
                "n" => cfg.n = Some(value.parse().map_err(|_| parse_err(&key, &value))?),
                "trials" => cfg.trials = Some(value.parse().map_err(|_| parse_err(&key, &value))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| parse_err(&key, &value))?),
                "qber-threshold" => {
                    cfg.qber_threshold = Some(value.parse().map_err(|_| parse_err(&key, &value))?)
                }
                "auth-threshold" => {
                    cfg.auth_threshold = Some(value.parse().map_err(|_| parse_err(&key, &value))?)
                }
                "coeffs" => cfg.coeffs = Some(value),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "deterministic" => {
                    cfg.deterministic = Some(value.parse().map_err(|_| parse_err(&key, &value))?)
                }
                other => {
                    return Err(ConfigError::Invalid(format!("unknown config key {other:?}")));
                }
            }
        }
        Ok(cfg)
    }

    pub fn resolve(self) -> Result<ExperimentConfig, ConfigError> {
        let protocol = match self.protocol.unwrap_or(1) {
            1 => ProtocolId::P1,
            2 => ProtocolId::P2,
            3 => ProtocolId::P3,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "protocol must be 1, 2 or 3, got {other}"
                )))
            }
        };
        let attack = parse_attack(self.attack.as_deref().unwrap_or("none"))?;
        let n = self.n.unwrap_or(3);
        let trials = self.trials.unwrap_or(10_000);
        if trials == 0 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        if n == 0 {
            return Err(ConfigError::Invalid("n must be at least 1".into()));
        }
        let thresholds = Thresholds {
            qber: self.qber_threshold.unwrap_or(0.0),
            auth_mismatch: self.auth_threshold.unwrap_or(0.0),
        };
        for t in [thresholds.qber, thresholds.auth_mismatch] {
            if !(0.0..=1.0).contains(&t) {
                return Err(ConfigError::Invalid(format!(
                    "thresholds must lie in [0,1], got {t}"
                )));
            }
        }
        let coefficients = self.coeffs.as_deref().map(parse_coeffs).transpose()?;
        if attack == AttackKind::AncillaForge && protocol != ProtocolId::P3 {
            return Err(ConfigError::Invalid(
                "the ancilla-forge attack applies to protocol 3 only".into(),
            ));
        }
        if attack == AttackKind::Forge && protocol == ProtocolId::P3 {
            return Err(ConfigError::Invalid(
                "the forge attack applies to protocols 1 and 2; use ancilla-forge for protocol 3"
                    .into(),
            ));
        }
        Ok(ExperimentConfig {
            protocol,
            attack,
            n,
            trials,
            seed: self.seed.unwrap_or(42),
            thresholds,
            coefficients,
            out_path: self.out,
            deterministic: self.deterministic.unwrap_or(false),
        })
    }
}

pub fn parse_attack(name: &str) -> Result<AttackKind, ConfigError> {
    match name {
        "none" => Ok(AttackKind::None),
        "impersonation" => Ok(AttackKind::Impersonation),
        "measure-resend" => Ok(AttackKind::MeasureResend),
        "forge" => Ok(AttackKind::Forge),
        "ancilla-forge" => Ok(AttackKind::AncillaForge),
        other => Err(ConfigError::Invalid(format!("unknown attack {other:?}"))),
    }
}

/// Parses `a0,b0,c0,d0[,a1,b1,c1,d1]` with entries `re` or `re+imi`.
pub fn parse_coeffs(
    text: &str,
) -> Result<([Complex64; 4], Option<[Complex64; 4]>), ConfigError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 8 {
        return Err(ConfigError::Invalid(format!(
            "--coeffs needs 4 or 8 comma-separated values, got {}",
            parts.len()
        )));
    }
    let mut values = Vec::with_capacity(parts.len());
    for p in &parts {
        let v: f64 = p
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("bad coefficient {p:?}")))?;
        values.push(Complex64::new(v, 0.0));
    }
    let branch0 = [values[0], values[1], values[2], values[3]];
    let branch1 = if values.len() == 8 {
        Some([values[4], values[5], values[6], values[7]])
    } else {
        None
    };
    Ok((branch0, branch1))
}
