//! Physical parameters, system-kind and wave-speed classification.

use crate::error::{BresseError, Result};

/// Relative tolerance for the equal-wave-speed classification.
///
/// The dichotomy rho1/rho2 = k/b and k = k0 is exact in the analysis;
/// floating-point inputs need a deterministic rule.
pub const SPEED_CLASS_TOL: f64 = 1e-12;

/// Which thermal coupling the beam carries.
///
/// Type I couples first-order heat equations; Type III couples
/// second-order equations with the extra `alpha1`, `alpha2` damping
/// coefficients. The per-mode state has 8 respectively 10 complex
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    TypeI,
    TypeIII,
}

impl SystemKind {
    /// Dimension of the complex mode state vector.
    pub fn dim(self) -> usize {
        match self {
            SystemKind::TypeI => 8,
            SystemKind::TypeIII => 10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SystemKind::TypeI => "type1",
            SystemKind::TypeIII => "type3",
        }
    }
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "type1" | "typei" | "i" | "1" => Ok(SystemKind::TypeI),
            "type3" | "typeiii" | "iii" | "3" => Ok(SystemKind::TypeIII),
            other => Err(format!(
                "unknown system kind `{other}` (use type1 or type3)"
            )),
        }
    }
}

/// Wave-speed dichotomy that selects the decay envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpeedClass {
    /// rho1/rho2 = k/b and k = k0: the faster `s1` envelope applies.
    Equal,
    /// Any other coefficient combination: the `s2` envelope applies.
    Distinct,
}

impl SpeedClass {
    pub fn label(self) -> &'static str {
        match self {
            SpeedClass::Equal => "equal",
            SpeedClass::Distinct => "distinct",
        }
    }
}

impl std::fmt::Display for SpeedClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// All physical coefficients of both systems.
///
/// `alpha1`, `alpha2` are only read for Type III; Type I validation and
/// assembly never touch them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub rho1: f64,
    pub rho2: f64,
    pub b: f64,
    pub k: f64,
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub l: f64,
    pub gamma: f64,
    pub m1: f64,
    pub m2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Default for Parameters {
    /// Unit coefficients; an equal-wave-speed configuration.
    fn default() -> Self {
        Parameters {
            rho1: 1.0,
            rho2: 1.0,
            b: 1.0,
            k: 1.0,
            k0: 1.0,
            k1: 1.0,
            k2: 1.0,
            l: 1.0,
            gamma: 1.0,
            m1: 1.0,
            m2: 1.0,
            alpha1: 1.0,
            alpha2: 1.0,
        }
    }
}

/// Field accessors used by the config parser and the CLI overrides.
pub const PARAMETER_NAMES: [&str; 13] = [
    "rho1", "rho2", "b", "k", "k0", "k1", "k2", "l", "gamma", "m1", "m2", "alpha1", "alpha2",
];

impl Parameters {
    /// Unit parameters except `b`, which is bumped to 2: the standard
    /// distinct-wave-speed configuration used throughout the tests.
    pub fn distinct_unit() -> Self {
        Parameters {
            b: 2.0,
            ..Parameters::default()
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "rho1" => self.rho1,
            "rho2" => self.rho2,
            "b" => self.b,
            "k" => self.k,
            "k0" => self.k0,
            "k1" => self.k1,
            "k2" => self.k2,
            "l" => self.l,
            "gamma" => self.gamma,
            "m1" => self.m1,
            "m2" => self.m2,
            "alpha1" => self.alpha1,
            "alpha2" => self.alpha2,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> bool {
        match name {
            "rho1" => self.rho1 = value,
            "rho2" => self.rho2 = value,
            "b" => self.b = value,
            "k" => self.k = value,
            "k0" => self.k0 = value,
            "k1" => self.k1 = value,
            "k2" => self.k2 = value,
            "l" => self.l = value,
            "gamma" => self.gamma = value,
            "m1" => self.m1 = value,
            "m2" => self.m2 = value,
            "alpha1" => self.alpha1 = value,
            "alpha2" => self.alpha2 = value,
            _ => return false,
        }
        true
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(BresseError::NonPositiveCoefficient(name))
    }
}

/// Check that every coefficient the given kind reads is strictly
/// positive and finite.
///
/// With `allow_degenerate` the thermal coupling `gamma` may be zero;
/// that configuration conserves the energy exactly and serves as a
/// free conservation oracle.
pub fn validate_with(p: &Parameters, kind: SystemKind, allow_degenerate: bool) -> Result<()> {
    positive("rho1", p.rho1)?;
    positive("rho2", p.rho2)?;
    positive("b", p.b)?;
    positive("k", p.k)?;
    positive("k0", p.k0)?;
    positive("k1", p.k1)?;
    positive("k2", p.k2)?;
    positive("l", p.l)?;
    if allow_degenerate {
        if !(p.gamma.is_finite() && p.gamma >= 0.0) {
            return Err(BresseError::NonPositiveCoefficient("gamma"));
        }
    } else {
        positive("gamma", p.gamma)?;
    }
    positive("m1", p.m1)?;
    positive("m2", p.m2)?;
    if kind == SystemKind::TypeIII {
        positive("alpha1", p.alpha1)?;
        positive("alpha2", p.alpha2)?;
    }
    Ok(())
}

/// Strict validation: every required coefficient strictly positive.
pub fn validate(p: &Parameters, kind: SystemKind) -> Result<()> {
    validate_with(p, kind, false)
}

fn relative_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Classify the wave speeds: `Equal` iff rho1/rho2 = k/b and k = k0 up
/// to [`SPEED_CLASS_TOL`] relative.
///
/// The ratio test is done on the cross products rho1*b vs rho2*k so a
/// common rescaling of (rho1, rho2) cannot flip the class.
pub fn classify_speeds(p: &Parameters) -> SpeedClass {
    let ratios = relative_eq(p.rho1 * p.b, p.rho2 * p.k, SPEED_CLASS_TOL);
    let stiffness = relative_eq(p.k, p.k0, SPEED_CLASS_TOL);
    if ratios && stiffness {
        SpeedClass::Equal
    } else {
        SpeedClass::Distinct
    }
}

/// Parse a plain-text configuration of `key = value` lines.
///
/// Unknown keys are returned to the caller untouched (the CLI layer
/// consumes experiment-level keys); `#` starts a comment.
pub fn parse_parameter_file(text: &str) -> Result<(Parameters, Vec<(String, String)>)> {
    let mut params = Parameters::default();
    let mut rest = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(BresseError::InvalidInput(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if PARAMETER_NAMES.contains(&key) {
            let parsed: f64 = value.parse().map_err(|_| {
                BresseError::InvalidInput(format!(
                    "config line {}: `{key}` is not a number: `{value}`",
                    lineno + 1
                ))
            })?;
            params.set(key, parsed);
        } else {
            rest.push((key.to_string(), value.to_string()));
        }
    }
    Ok((params, rest))
}
