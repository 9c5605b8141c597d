//! Quadrature configuration assembly: defaults, then a `key = value` config
//! file (from `--config` or the `JENFI_CONFIG` environment variable), then
//! command-line flags, each layer overriding the previous one.

use std::path::{Path, PathBuf};

use jenfi::QuadConfig;

use crate::CliError;

pub fn resolve_quad_config(
    config_flag: Option<&Path>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> Result<QuadConfig, CliError> {
    let mut cfg = QuadConfig::default();

    let path = config_flag
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("JENFI_CONFIG").map(PathBuf::from));
    if let Some(path) = path {
        apply_file(&mut cfg, &path)?;
    }

    if let Some(v) = abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = rel_tol {
        cfg.rel_tol = v;
    }
    if !(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0) {
        return Err(CliError::Validation(
            "tolerances must be positive".to_string(),
        ));
    }
    Ok(cfg)
}

fn apply_file(cfg: &mut QuadConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Validation(format!("cannot read config {}: {e}", path.display()))
    })?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| {
            CliError::Validation(format!("config {}:{}: {msg}", path.display(), idx + 1))
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got `{raw}`")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "abs_tol" => cfg.abs_tol = value.parse().map_err(|e| bad(format!("{e}")))?,
            "rel_tol" => cfg.rel_tol = value.parse().map_err(|e| bad(format!("{e}")))?,
            "max_subdivisions" => {
                cfg.max_subdivisions = value.parse().map_err(|e| bad(format!("{e}")))?
            }
            "divergence_cap" => {
                cfg.divergence_cap = value.parse().map_err(|e| bad(format!("{e}")))?
            }
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join("jenfi_cli_cfg");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("quad.cfg");
        std::fs::write(&path, "# comment\nabs_tol = 1e-6\nrel_tol=1e-5\nmax_subdivisions=500\n")
            .unwrap();
        let cfg = resolve_quad_config(Some(&path), Some(1e-9), None).unwrap();
        assert_eq!(cfg.abs_tol, 1e-9);
        assert_eq!(cfg.rel_tol, 1e-5);
        assert_eq!(cfg.max_subdivisions, 500);

        std::fs::write(&path, "bogus_key = 1\n").unwrap();
        assert!(resolve_quad_config(Some(&path), None, None).is_err());
    }
}
