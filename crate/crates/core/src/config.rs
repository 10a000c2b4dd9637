//! Runtime configuration shared by the numerical modules and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    /// Gauss-Legendre node count for period quadrature.
    pub quadrature_nodes: usize,
    /// Base continuation step in the u-plane.
    pub cont_step: f64,
    /// Minimum distance continuation paths keep from the singular values 0, 1.
    pub clearance: f64,
    /// Width tie tolerance, in half-turn units.
    pub tie_tol: f64,
    /// Tolerance for rounding measured transition matrices to integers.
    pub int_tol: f64,
    /// Output directory for CLI artifacts.
    pub output_dir: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature_nodes: 256,
            cont_step: 0.05,
            clearance: 0.02,
            tie_tol: 1e-9,
            int_tol: 1e-6,
            output_dir: "out".to_string(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if self.quadrature_nodes < 16 {
            return Err("quadrature_nodes must be at least 16".into());
        }
        for (name, v) in [
            ("cont_step", self.cont_step),
            ("clearance", self.clearance),
            ("tie_tol", self.tie_tol),
            ("int_tol", self.int_tol),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(())
    }

    /// Parses a simple `key = value` text (one pair per line, `#` comments).
    pub fn apply_kv_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |k: &str, v: &str| format!("invalid value `{v}` for `{k}`");
        match key {
            "quadrature_nodes" => {
                self.quadrature_nodes = value.parse().map_err(|_| bad(key, value))?
            }
            "cont_step" => self.cont_step = value.parse().map_err(|_| bad(key, value))?,
            "clearance" => self.clearance = value.parse().map_err(|_| bad(key, value))?,
            "tie_tol" => self.tie_tol = value.parse().map_err(|_| bad(key, value))?,
            "int_tol" => self.int_tol = value.parse().map_err(|_| bad(key, value))?,
            "output_dir" => self.output_dir = value.to_string(),
            _ => return Err(format!("unknown config key `{key}`")),
        }
        Ok(())
    }

    /// Applies `STABA2_*` environment overrides.
    pub fn apply_env(&mut self) -> Result<(), String> {
        for key in [
            "quadrature_nodes",
            "cont_step",
            "clearance",
            "tie_tol",
            "int_tol",
            "output_dir",
        ] {
            let env_key = format!("STABA2_{}", key.to_uppercase());
            if let Ok(v) = std::env::var(&env_key) {
                self.set(key, &v)?;
            }
        }
        Ok(())
    }
}
