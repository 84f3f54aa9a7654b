//! Run configuration: one strict JSON document drives every subcommand.
//!
//! ```json
//! {
//!   "potential": { "kind": "single_site", "kappa": 2.23606797749979, "sign": "repulsive" },
//!   "m": 1.0,
//!   "p": 3,
//!   "lattice": { "half_width": 60 },
//!   "solver": { "delta": 0.05 },
//!   "sweep": { "lo": 0.01, "hi": 0.1, "count": 8 },
//!   "validation": { "steps_per_period": [250, 500, 1000, 2000, 4000] },
//!   "output": "out"
//! }
//! ```
//!
//! Omitted blocks take their defaults; unknown keys are errors.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use breather_core::{Potential, SolverOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: Potential,
    pub m: f64,
    pub p: u32,
    #[serde(default)]
    pub lattice: LatticeBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    #[serde(default)]
    pub validation: ValidationBlock,
    #[serde(default)]
    pub decay: DecayBlock,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeBlock {
    pub half_width: usize,
}

impl Default for LatticeBlock {
    fn default() -> Self {
        Self { half_width: 60 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverBlock {
    pub n_max: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub tail_check: bool,
    /// Single amplitude for `solve`.
    pub delta: Option<f64>,
    /// Several amplitudes for `solve`; takes precedence over `delta`.
    pub deltas: Option<Vec<f64>>,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            n_max: o.n_max,
            tol: o.tol,
            max_iter: o.max_iter,
            a: o.a,
            r: o.r,
            tail_check: o.tail_check,
            delta: Some(0.05),
            deltas: None,
        }
    }
}

impl SolverBlock {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            n_max: self.n_max,
            tol: self.tol,
            max_iter: self.max_iter,
            a: self.a,
            r: self.r,
            tail_check: self.tail_check,
        }
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        match (&self.deltas, self.delta) {
            (Some(list), _) => list.clone(),
            (None, Some(d)) => vec![d],
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Allowed shortfall of each fitted exponent below its target.
    pub slope_margin: f64,
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self {
            lo: 0.01,
            hi: 0.1,
            count: 8,
            slope_margin: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationBlock {
    /// Verlet runs use `dt = T / steps` for each entry.
    pub steps_per_period: Vec<usize>,
    /// Residual sample count; `None` means `4·p·N + 1`.
    pub n_samples: Option<usize>,
    pub max_residual: f64,
    pub min_naive_ratio: f64,
    pub max_return_error: f64,
}

impl Default for ValidationBlock {
    fn default() -> Self {
        Self {
            steps_per_period: vec![250, 500, 1000, 2000, 4000],
            n_samples: None,
            max_residual: 1e-9,
            min_naive_ratio: 1e3,
            max_return_error: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayBlock {
    /// Conjugation weight; `None` means half the fitted rate.
    pub a: Option<f64>,
    pub max_eigen_shift: f64,
}

impl Default for DecayBlock {
    fn default() -> Self {
        Self {
            a: None,
            max_eigen_shift: 1e-8,
        }
    }
}

/// Sets `path` (dot separated) to `raw`, parsed as JSON when possible and
/// as a string otherwise. Missing intermediate objects are created.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("override {assignment:?} is not key=value"))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let keys: Vec<&str> = path.split('.').collect();
    for (k, key) in keys.iter().enumerate() {
        if key.is_empty() {
            bail!("override {assignment:?} has an empty path segment");
        }
        let obj = match node {
            Value::Object(map) => map,
            Value::Null => {
                *node = Value::Object(Default::default());
                node.as_object_mut().expect("just created")
            }
            _ => bail!(
                "override {path:?}: {:?} is not an object",
                keys[..k].join(".")
            ),
        };
        if k + 1 == keys.len() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj.entry(key.to_string()).or_insert(Value::Null);
    }
    unreachable!("split always yields a segment")
}

impl RunConfig {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut doc: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let config: RunConfig = if overrides.is_empty() {
            serde_json::from_str(text).context("config does not match the schema")?
        } else {
            serde_json::from_value(doc)
                .context("config (after overrides) does not match the schema")?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text, overrides).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, field: &str, msg: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(anyhow!("field `{field}`: {msg}"))
            }
        }
        check(self.m.is_finite() && self.m > 0.0, "m", "must be positive")?;
        check(self.p >= 2, "p", "must be an integer >= 2")?;
        check(
            self.lattice.half_width >= 1,
            "lattice.half_width",
            "must be >= 1",
        )?;
        let s = &self.solver;
        check(
            s.tol > 0.0 && s.tol < 1.0,
            "solver.tol",
            "must lie in (0, 1)",
        )?;
        check(s.max_iter >= 1, "solver.max_iter", "must be >= 1")?;
        check(
            s.n_max.is_none_or(|n| n >= 1),
            "solver.n_max",
            "must be >= 1",
        )?;
        check(s.a.is_none_or(|a| a >= 0.0), "solver.a", "must be >= 0")?;
        check(s.r.is_none_or(|r| r > 0.0), "solver.r", "must be positive")?;
        let amps = s.amplitudes();
        check(
            amps.iter().all(|d| d.is_finite() && *d >= 0.0),
            "solver.delta",
            "amplitudes must be finite and >= 0",
        )?;
        let w = &self.sweep;
        check(w.lo > 0.0 && w.hi > w.lo, "sweep", "need 0 < lo < hi")?;
        check(w.count >= 2, "sweep.count", "must be >= 2")?;
        check(w.slope_margin >= 0.0, "sweep.slope_margin", "must be >= 0")?;
        let v = &self.validation;
        check(
            !v.steps_per_period.is_empty() && v.steps_per_period.iter().all(|n| *n >= 1),
            "validation.steps_per_period",
            "must be a non-empty list of positive step counts",
        )?;
        check(
            v.n_samples.is_none_or(|n| n >= 1),
            "validation.n_samples",
            "must be >= 1",
        )?;
        check(
            v.max_residual > 0.0,
            "validation.max_residual",
            "must be positive",
        )?;
        check(
            v.max_return_error > 0.0,
            "validation.max_return_error",
            "must be positive",
        )?;
        check(
            self.decay.a.is_none_or(|a| a >= 0.0),
            "decay.a",
            "must be >= 0",
        )?;
        if let Potential::SingleSite { kappa, .. } = &self.potential {
            check(
                kappa.is_finite() && *kappa >= 0.0,
                "potential.kappa",
                "must be finite and >= 0",
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"potential": {"kind": "single_site", "kappa": 2.0, "sign": "repulsive"}, "m": 1.0, "p": 3}"#;

    #[test]
    fn defaults_fill_missing_blocks() {
        let c = RunConfig::parse(MINIMAL, &[]).unwrap();
        assert_eq!(c.lattice.half_width, 60);
        assert_eq!(c.solver.amplitudes(), vec![0.05]);
        assert_eq!(c.solver.tol, 1e-12);
        assert_eq!(c.output, PathBuf::from("out"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"p\": 3", "\"p\": 3, \"mass\": 2");
        let err = format!("{:#}", RunConfig::parse(&text, &[]).unwrap_err());
        assert!(err.contains("unknown field `mass`"), "{err}");
        assert!(err.contains("line 1"), "{err}");
        let err = format!(
            "{:#}",
            RunConfig::parse(MINIMAL, &["solver.tolerance=1e-9".into()]).unwrap_err()
        );
        assert!(err.contains("tolerance"), "{err}");
    }

    #[test]
    fn out_of_range_values_name_the_field() {
        let err = format!(
            "{:#}",
            RunConfig::parse(MINIMAL, &["m=-1".into()]).unwrap_err()
        );
        assert!(err.contains("`m`"), "{err}");
        let err = format!(
            "{:#}",
            RunConfig::parse(MINIMAL, &["solver.tol=0".into()]).unwrap_err()
        );
        assert!(err.contains("solver.tol"), "{err}");
        let err = format!(
            "{:#}",
            RunConfig::parse(MINIMAL, &["p=1".into()]).unwrap_err()
        );
        assert!(err.contains("`p`"), "{err}");
    }

    #[test]
    fn overrides_use_dotted_paths() {
        let c = RunConfig::parse(
            MINIMAL,
            &[
                "lattice.half_width=80".into(),
                "solver.deltas=[0.01,0.02]".into(),
                "potential.sign=attractive".into(),
                "output=elsewhere".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.lattice.half_width, 80);
        assert_eq!(c.solver.amplitudes(), vec![0.01, 0.02]);
        assert_eq!(c.potential, Potential::attractive(2.0));
        assert_eq!(c.output, PathBuf::from("elsewhere"));
        assert!(RunConfig::parse(MINIMAL, &["novalue".into()]).is_err());
        assert!(RunConfig::parse(MINIMAL, &["m.x=1".into()]).is_err());
    }
}
