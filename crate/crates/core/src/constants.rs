//! Physical constants, unit conventions and hydrogen quantum numbers.
//!
//! Spectral code works in eV and nm. Charges are Gaussian, so `e2_ev_nm`
//! is e² = α·ħc and a magnetic field carries units of √(eV/nm³).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA-2018 fine-structure constant.
pub const CODATA_2018_ALPHA: f64 = 7.297_352_569_3e-3;
/// CODATA-2018 electron rest energy in eV.
pub const CODATA_2018_MC2_EV: f64 = 510_998.950_00;
/// CODATA-2018 ħc in eV·nm.
pub const CODATA_2018_HBAR_C_EV_NM: f64 = 197.326_980_4;

/// One gauss expressed in √(eV/nm³).
pub const GAUSS_IN_NATURAL: f64 = 2.498_301_7e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub alpha: f64,
    pub mc2_ev: f64,
    pub hbar_c_ev_nm: f64,
    pub e2_ev_nm: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata_2018()
    }
}

impl PhysicalConstants {
    pub fn codata_2018() -> Self {
        Self::new(CODATA_2018_ALPHA, CODATA_2018_MC2_EV, CODATA_2018_HBAR_C_EV_NM)
            .expect("CODATA defaults are valid")
    }

    /// Builds a constant set, deriving e² from α and ħc.
    pub fn new(alpha: f64, mc2_ev: f64, hbar_c_ev_nm: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        if alpha >= 1.0 {
            return Err(Error::Config {
                key: "alpha".into(),
                reason: format!("must be below 1, got {alpha}"),
            });
        }
        check_positive("mc2_ev", mc2_ev)?;
        check_positive("hbar_c_ev_nm", hbar_c_ev_nm)?;
        Ok(Self {
            alpha,
            mc2_ev,
            hbar_c_ev_nm,
            e2_ev_nm: alpha * hbar_c_ev_nm,
        })
    }

    /// Same ħc and mc², different coupling.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.mc2_ev, self.hbar_c_ev_nm)
    }

    /// Inverse reduced Compton wavelength mc/ħ in 1/nm.
    pub fn compton_wavenumber(&self) -> f64 {
        self.mc2_ev / self.hbar_c_ev_nm
    }

    /// Gaussian elementary charge in √(eV·nm).
    pub fn charge(&self) -> f64 {
        self.e2_ev_nm.sqrt()
    }
}

fn check_positive(key: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Config {
            key: key.into(),
            reason: format!("must be finite and positive, got {value}"),
        })
    }
}

/// Parses `key = value` lines (keys `alpha`, `mc2_ev`, `hbar_c_ev_nm`) on top
/// of the CODATA-2018 defaults. `#` starts a comment.
pub fn load_constants(config_text: Option<&str>) -> Result<PhysicalConstants> {
    let mut alpha = CODATA_2018_ALPHA;
    let mut mc2 = CODATA_2018_MC2_EV;
    let mut hbar_c = CODATA_2018_HBAR_C_EV_NM;
    let Some(text) = config_text else {
        return PhysicalConstants::new(alpha, mc2, hbar_c);
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config {
                key: line.to_string(),
                reason: format!("line {} is not of the form `key = value`", idx + 1),
            });
        };
        let key = key.trim();
        let slot = match key {
            "alpha" => &mut alpha,
            "mc2_ev" => &mut mc2,
            "hbar_c_ev_nm" => &mut hbar_c,
            other => {
                return Err(Error::Config {
                    key: other.to_string(),
                    reason: "unknown key".into(),
                })
            }
        };
        let parsed: f64 = value.trim().parse().map_err(|_| Error::Config {
            key: key.to_string(),
            reason: format!("cannot parse `{}` as a number", value.trim()),
        })?;
        check_positive(key, parsed)?;
        *slot = parsed;
    }
    PhysicalConstants::new(alpha, mc2, hbar_c)
}

/// r₀ = e²/mc² in nm.
pub fn classical_radius_nm(c: &PhysicalConstants) -> f64 {
    c.e2_ev_nm / c.mc2_ev
}

/// Hydrogen level labelled by n, j (stored doubled) and ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBoundState", into = "RawBoundState")]
pub struct BoundState {
    n: u32,
    two_j: u32,
    ell: u32,
}

#[derive(Serialize, Deserialize)]
struct RawBoundState {
    n: u32,
    two_j: u32,
    ell: u32,
}

impl TryFrom<RawBoundState> for BoundState {
    type Error = Error;
    fn try_from(raw: RawBoundState) -> Result<Self> {
        BoundState::new(raw.n, raw.two_j, raw.ell)
    }
}

impl From<BoundState> for RawBoundState {
    fn from(s: BoundState) -> Self {
        RawBoundState {
            n: s.n,
            two_j: s.two_j,
            ell: s.ell,
        }
    }
}

const ORBITAL_LETTERS: &[u8] = b"spdfghik";

impl BoundState {
    pub fn new(n: u32, two_j: u32, ell: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        if two_j.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "two_j must be odd, got {two_j}"
            )));
        }
        if ell >= n {
            return Err(Error::Validation(format!("ell = {ell} requires n > {ell}")));
        }
        if two_j != 2 * ell + 1 && two_j + 1 != 2 * ell {
            return Err(Error::Validation(format!(
                "two_j = {two_j} incompatible with ell = {ell}"
            )));
        }
        let state = Self { n, two_j, ell };
        if state.kappa() > n {
            return Err(Error::Validation(format!(
                "kappa = {} exceeds n = {n}",
                state.kappa()
            )));
        }
        Ok(state)
    }

    /// The ground state 1s(j=1/2).
    pub fn ground() -> Self {
        Self { n: 1, two_j: 1, ell: 0 }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// κ = j + 1/2.
    pub fn kappa(&self) -> u32 {
        self.two_j.div_ceil(2)
    }
}

impl fmt::Display for BoundState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = ORBITAL_LETTERS
            .get(self.ell as usize)
            .map(|&b| b as char)
            .unwrap_or('?');
        if self.ell == 0 {
            write!(f, "{}{}", self.n, letter)
        } else {
            write!(f, "{}{}(j={}/2)", self.n, letter, self.two_j)
        }
    }
}

impl FromStr for BoundState {
    type Err = Error;

    /// Accepts `2s`, `3p(j=3/2)`, `3p (j=3/2)` and `2s(j=1/2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("cannot parse state label `{s}`"));
        let s = s.trim();
        let digits = s.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(bad());
        }
        let n: u32 = s[..digits].parse().map_err(|_| bad())?;
        let rest = &s[digits..];
        let letter = rest.chars().next().ok_or_else(bad)?;
        let ell = ORBITAL_LETTERS
            .iter()
            .position(|&b| b as char == letter.to_ascii_lowercase())
            .ok_or_else(bad)? as u32;
        let tail = rest[letter.len_utf8()..].trim();
        let two_j = if tail.is_empty() {
            if ell != 0 {
                return Err(Error::Validation(format!(
                    "state `{s}` needs an explicit j, e.g. `{n}{letter}(j={}/2)`",
                    2 * ell + 1
                )));
            }
            1
        } else {
            let inner = tail
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(bad)?
                .trim();
            let frac = inner.strip_prefix("j").ok_or_else(bad)?.trim_start();
            let frac = frac.strip_prefix('=').ok_or_else(bad)?.trim();
            let num = frac.strip_suffix("/2").ok_or_else(bad)?.trim();
            num.parse().map_err(|_| bad())?
        };
        BoundState::new(n, two_j, ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_codata_2018() {
        let c = load_constants(None).unwrap();
        assert_eq!(c.alpha, 7.2973525693e-3);
        assert_eq!(c.mc2_ev, 510998.95);
        assert_eq!(c.hbar_c_ev_nm, 197.3269804);
        assert!((c.e2_ev_nm / (c.alpha * c.hbar_c_ev_nm) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn override_alpha() {
        let c = load_constants(Some("# test\nalpha = 0.01\n")).unwrap();
        assert_eq!(c.alpha, 0.01);
        assert!((c.e2_ev_nm - 0.01 * 197.3269804).abs() < 1e-15);
        assert_eq!(c.mc2_ev, CODATA_2018_MC2_EV);
    }

    #[test]
    fn negative_alpha_rejected() {
        match load_constants(Some("alpha = -1")) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "alpha"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(load_constants(Some("alpha 0.01")).is_err());
        assert!(load_constants(Some("alpha = abc")).is_err());
        assert!(load_constants(Some("beta = 1")).is_err());
        assert!(load_constants(Some("mc2_ev = 0")).is_err());
        assert!(load_constants(Some("alpha = 1.5")).is_err());
    }

    #[test]
    fn deterministic_parse() {
        let text = "alpha=0.0073\nmc2_ev = 511000 # rounded\n";
        assert_eq!(
            load_constants(Some(text)).unwrap(),
            load_constants(Some(text)).unwrap()
        );
    }

    #[test]
    fn classical_radius_codata() {
        let c = PhysicalConstants::codata_2018();
        assert!((classical_radius_nm(&c) - 2.8179403e-6).abs() < 1e-12);
        let doubled = c.with_alpha(2.0 * c.alpha).unwrap();
        let r = classical_radius_nm(&c);
        assert!((classical_radius_nm(&doubled) / r - 2.0).abs() < 1e-14);
        let heavy = PhysicalConstants::new(c.alpha, 2.0 * c.mc2_ev, c.hbar_c_ev_nm).unwrap();
        assert!((classical_radius_nm(&heavy) / r - 0.5).abs() < 1e-14);
    }

    #[test]
    fn state_labels_round_trip() {
        for label in ["1s", "2s", "2p(j=1/2)", "3p(j=3/2)", "3d(j=5/2)", "4f(j=7/2)"] {
            let s: BoundState = label.parse().unwrap();
            assert_eq!(s.to_string(), label);
        }
        let spaced: BoundState = "3d (j=3/2)".parse().unwrap();
        assert_eq!((spaced.n(), spaced.two_j(), spaced.ell()), (3, 3, 2));
        assert_eq!(spaced.kappa(), 2);
    }

    #[test]
    fn invalid_states() {
        assert!(BoundState::new(2, 2, 0).is_err());
        assert!(BoundState::new(0, 1, 0).is_err());
        assert!(BoundState::new(2, 5, 1).is_err());
        assert!(BoundState::new(2, 1, 2).is_err());
        assert!("2p".parse::<BoundState>().is_err());
        assert!("xs".parse::<BoundState>().is_err());
        assert!("2s(j=1/3)".parse::<BoundState>().is_err());
    }
}
