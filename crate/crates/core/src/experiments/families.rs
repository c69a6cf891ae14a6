use serde::Serialize;

use crate::analytic::Theta;
use crate::error::{Error, Result};

/// Ring-size rule for the sparse family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum KRule {
    Constant {
        k: u64,
    },
    /// `K_n = ceil(a · n^b)`
    Power {
        a: f64,
        b: f64,
    },
}

impl KRule {
    fn ring_size(&self, n: u64) -> u64 {
        match *self {
            KRule::Constant { k } => k,
            KRule::Power { a, b } => (a * (n as f64).powf(b)).ceil() as u64,
        }
    }
}

/// A scaling `n ↦ θ_n = (K_n, P_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalingFamily {
    /// `K_n = ceil(c·ln n)`, `P_n = round(n·K_n² / (c·ln n))`, so that
    /// `K_n²/P_n ≈ c·ln n / n`.
    Connectivity { c: f64 },
    /// `P_n = round(n·K_n² / c)`, so that `K_n²/P_n ≈ c/n`.
    Sparse { c: f64, k_rule: KRule },
    /// Tabulated `(n, K, P)` triples.
    Explicit { table: Vec<(u64, u64, u64)> },
}

impl ScalingFamily {
    pub fn theta(&self, n: u64) -> Result<Theta> {
        let (k, p) = match self {
            ScalingFamily::Connectivity { c } => {
                check_scale(*c)?;
                if n < 2 {
                    return Err(Error::InvalidFamily(format!(
                        "connectivity family needs n >= 2, got {n}"
                    )));
                }
                let scale = c * (n as f64).ln();
                let k = scale.ceil().max(1.0) as u64;
                (k, round_half_up(n as f64 * (k * k) as f64 / scale))
            }
            ScalingFamily::Sparse { c, k_rule } => {
                check_scale(*c)?;
                let k = k_rule.ring_size(n);
                (k, round_half_up(n as f64 * (k * k) as f64 / c))
            }
            ScalingFamily::Explicit { table } => {
                let &(_, k, p) = table
                    .iter()
                    .find(|row| row.0 == n)
                    .ok_or_else(|| Error::InvalidFamily(format!("no explicit entry for n={n}")))?;
                return Theta::new(k, p);
            }
        };
        if k == 0 {
            return Err(Error::InvalidFamily(format!("ring size 0 at n={n}")));
        }
        Theta::new(k, p.max(k))
    }

    /// Parses an explicit family: one `n,K,P` triple per line. Blank lines,
    /// `#` comments and a `n,K,P` header are skipped.
    pub fn explicit_from_csv(text: &str) -> Result<Self> {
        let mut table = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') || line.eq_ignore_ascii_case("n,k,p") {
                continue;
            }
            let fields: Vec<_> = line.split(',').map(|f| f.trim().parse::<u64>()).collect();
            match fields.as_slice() {
                [Ok(n), Ok(k), Ok(p)] => {
                    Theta::new(*k, *p)?;
                    table.push((*n, *k, *p));
                }
                _ => return Err(Error::InvalidFamily(format!("bad family line {line:?}"))),
            }
        }
        if table.is_empty() {
            return Err(Error::InvalidFamily("empty explicit family".into()));
        }
        Ok(ScalingFamily::Explicit { table })
    }
}

fn check_scale(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidFamily(format!(
            "scale c must be positive, got {c}"
        )))
    }
}

fn round_half_up(x: f64) -> u64 {
    (x + 0.5).floor().max(1.0) as u64
}
