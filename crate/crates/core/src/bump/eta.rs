//! Bump profiles used to indent a sphere.

use serde::{Deserialize, Serialize};

/// Identifier of a compactly supported bump profile on (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum EtaKind {
    /// exp(1 - 1/(1 - u^2)) on |u| < 1, zero outside.
    #[default]
    #[serde(rename = "std_bump")]
    StdBump,
}

impl EtaKind {
    pub fn name(self) -> &'static str {
        match self {
            EtaKind::StdBump => "std_bump",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "std_bump" => Some(EtaKind::StdBump),
            _ => None,
        }
    }

    /// Value and first two derivatives at `u`.
    pub fn eval(self, u: f64) -> (f64, f64, f64) {
        match self {
            EtaKind::StdBump => eta_std(u),
        }
    }
}

/// The standard bump η(u) = exp(1 − 1/(1−u²)) with η′ and η″.
///
/// η(0) = 1, η vanishes with all derivatives at |u| = 1.
pub fn eta_std(u: f64) -> (f64, f64, f64) {
    let d = 1.0 - u * u;
    if d <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let expo = 1.0 - 1.0 / d;
    // exp underflows long before the polynomial factors overflow
    if expo < -700.0 {
        return (0.0, 0.0, 0.0);
    }
    let e = expo.exp();
    let d2 = d * d;
    let f1 = -2.0 * u / d2;
    let f2 = -2.0 / d2 - 8.0 * u * u / (d2 * d);
    (e, e * f1, e * (f1 * f1 + f2))
}
