//! The compact density grammar: `family:key=value[,key=value]`.
//!
//! Examples: `sinusoidal:n=10`, `gamma:beta=2.5`, `hermite:n=3`,
//! `gaussian:mean=0,sigma=1`, `grid:path=data.csv,renormalize=true`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use jenfi::density::{
    load_grid_density, make_gamma_like, make_gaussian, make_rakhmanov_hermite, make_sinusoidal,
    GammaLikeParams, HermiteParams, SinusoidalParams,
};
use jenfi::DensityRef;

use crate::CliError;

pub fn parse_density(spec: &str) -> Result<DensityRef, CliError> {
    let bad = |msg: String| CliError::Validation(format!("density spec `{spec}`: {msg}"));

    let (family, rest) = match spec.split_once(':') {
        Some((f, r)) => (f.trim(), r),
        None => return Err(bad("expected `family:key=value[,key=value]`".into()))?,
    };

    let mut params = BTreeMap::new();
    for field in rest.split(',') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| bad(format!("field `{field}` is not key=value")))?;
        if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(bad(format!("duplicate key `{}`", k.trim())));
        }
    }

    let take = |params: &mut BTreeMap<String, String>, key: &str| -> Result<String, CliError> {
        params
            .remove(key)
            .ok_or_else(|| bad(format!("missing `{key}`")))
    };
    let parse_f64 = |key: &str, v: &str| -> Result<f64, CliError> {
        v.parse::<f64>()
            .map_err(|e| bad(format!("`{key}` must be a number: {e}")))
    };
    let parse_u32 = |key: &str, v: &str| -> Result<u32, CliError> {
        v.parse::<u32>()
            .map_err(|e| bad(format!("`{key}` must be a non-negative integer: {e}")))
    };

    let density: DensityRef = match family {
        "sinusoidal" => {
            let n = parse_u32("n", &take(&mut params, "n")?)?;
            std::sync::Arc::new(
                make_sinusoidal(SinusoidalParams { n }).map_err(|e| bad(e.to_string()))?,
            )
        }
        "gamma" => {
            let beta = parse_f64("beta", &take(&mut params, "beta")?)?;
            std::sync::Arc::new(
                make_gamma_like(GammaLikeParams { beta }).map_err(|e| bad(e.to_string()))?,
            )
        }
        "hermite" => {
            let n = parse_u32("n", &take(&mut params, "n")?)?;
            std::sync::Arc::new(
                make_rakhmanov_hermite(HermiteParams { n }).map_err(|e| bad(e.to_string()))?,
            )
        }
        "gaussian" => {
            let mean = parse_f64("mean", &take(&mut params, "mean")?)?;
            let sigma = parse_f64("sigma", &take(&mut params, "sigma")?)?;
            std::sync::Arc::new(make_gaussian(mean, sigma).map_err(|e| bad(e.to_string()))?)
        }
        "grid" => {
            let path = PathBuf::from(take(&mut params, "path")?);
            let renormalize = match params.remove("renormalize").as_deref() {
                None => false,
                Some("true") => true,
                Some("false") => false,
                Some(other) => return Err(bad(format!("renormalize must be true/false, got `{other}`"))),
            };
            std::sync::Arc::new(
                load_grid_density(&path, renormalize).map_err(|e| bad(e.to_string()))?,
            )
        }
        other => {
            return Err(bad(format!(
                "unknown family `{other}` (expected sinusoidal, gamma, hermite, gaussian, grid)"
            )))
        }
    };

    if let Some(key) = params.keys().next() {
        return Err(bad(format!("unexpected key `{key}` for family `{family}`")));
    }
    Ok(density)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        assert!(parse_density("sinusoidal:n=3").is_ok());
        assert!(parse_density("gamma:beta=2.5").is_ok());
        assert!(parse_density("hermite:n=0").is_ok());
        assert!(parse_density("gaussian:mean=0,sigma=1").is_ok());
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_density("sinusoidal").is_err());
        assert!(parse_density("sinusoidal:n=0").is_err());
        assert!(parse_density("sinusoidal:m=3").is_err());
        assert!(parse_density("sinusoidal:n=3,n=4").is_err());
        assert!(parse_density("gaussian:mean=0,sigma=1,extra=2").is_err());
        assert!(parse_density("cauchy:gamma=1").is_err());
        assert!(parse_density("gamma:beta=-1").is_err());
        assert!(parse_density("grid:path=/definitely/not/a/file.csv").is_err());
    }
}
