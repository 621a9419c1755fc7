use std::path::{Path, PathBuf};

use serde::Deserialize;

use skeinlab::curves::DEFAULT_STATE_CAP;

pub const DEFAULT_ORBIT_CAP: usize = 10_000;
pub const THREADS_ENV: &str = "SKEINLAB_THREADS";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Paths {
    /// base directory for relative input files
    pub inputs: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Caps {
    pub states: Option<usize>,
    pub orbit: Option<usize>,
}

/// Settings shared by every subcommand; flags override the config file,
/// which overrides the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub cyclotomic_order: Option<u32>,
    pub genus: Option<usize>,
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub caps: Caps,
    pub threads: Option<usize>,
}

impl SessionConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: SessionConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(n) = self.n {
            check_n(n)?;
        }
        if self.caps.states == Some(0) || self.caps.orbit == Some(0) || self.threads == Some(0) {
            return Err("caps and thread counts must be positive".into());
        }
        if self.cyclotomic_order == Some(0) {
            return Err("cyclotomic order must be positive".into());
        }
        Ok(())
    }

    pub fn n(&self, flag: Option<u64>) -> Result<u64, String> {
        let n = flag.or(self.n).ok_or("N is required (--N or config)")?;
        check_n(n)?;
        Ok(n)
    }

    pub fn genus(&self, flag: Option<usize>) -> usize {
        flag.or(self.genus).unwrap_or(1)
    }

    pub fn order(&self, flag: Option<u32>) -> u32 {
        flag.or(self.cyclotomic_order).unwrap_or(4)
    }

    pub fn state_cap(&self, flag: Option<usize>) -> usize {
        flag.or(self.caps.states).unwrap_or(DEFAULT_STATE_CAP)
    }

    pub fn orbit_cap(&self, flag: Option<usize>) -> usize {
        flag.or(self.caps.orbit).unwrap_or(DEFAULT_ORBIT_CAP)
    }

    /// Thread count from the flag, then the environment, then the config.
    pub fn threads(&self, flag: Option<usize>) -> Result<Option<usize>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        if let Ok(v) = std::env::var(THREADS_ENV) {
            let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV}={v} is not a thread count"))?;
            if n == 0 {
                return Err(format!("{THREADS_ENV} must be positive"));
            }
            return Ok(Some(n));
        }
        Ok(self.threads)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.paths.inputs {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }
}

pub fn check_n(n: u64) -> Result<(), String> {
    if n < 3 || n % 2 == 0 {
        return Err(format!("N must be odd and at least 3, got {n}"));
    }
    Ok(())
}
