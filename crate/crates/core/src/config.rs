//! JSON configuration of the path experiments.
//!
//! Every field of [`PathConfig`] is optional; missing fields take their
//! defaults and unknown keys are rejected. A minimal document is
//! `{"t_grid": [0, 1]}`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::path::PathConfig;

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<PathConfig> {
    if text.trim().is_empty() {
        return Err(Error::Config("line 1, column 1: empty configuration".into()));
    }
    let cfg: PathConfig = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<PathConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(r#"{"t_grid": [0, 1]}"#).unwrap();
        assert_eq!(cfg.t_grid, vec![0.0, 1.0]);
        assert_eq!((cfg.n, cfg.alpha_grid, cfg.generation), (128, 256, 12));
        assert_eq!(cfg.clark, PathConfig::default().clark);
    }

    #[test]
    fn nested_overrides() {
        let cfg = parse_config(r#"{"n": 64, "clark": {"weak_star": {"k_max": 10}}}"#).unwrap();
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.clark.weak_star.k_max, 10);
        assert_eq!(cfg.clark.weak_star.k_min, 4);
    }

    #[test]
    fn rejected_documents() {
        let empty = parse_config("  \n").unwrap_err();
        assert_eq!(empty.kind(), "config");
        assert!(empty.to_string().contains("line 1"));
        assert_eq!(parse_config(r#"{"t_grid": [0, 1.5]}"#).unwrap_err().kind(), "domain");
        let unknown = parse_config("{\n  \"t_grid\": [0],\n  \"bogus\": 1\n}").unwrap_err();
        assert_eq!(unknown.kind(), "config");
        assert!(unknown.to_string().contains("line 3"), "{unknown}");
        assert!(unknown.to_string().contains("bogus"));
        assert_eq!(parse_config(r#"{"t_grid": [1, 0]}"#).unwrap_err().kind(), "config");
        assert_eq!(parse_config("{\"n\": -1}").unwrap_err().kind(), "config");
    }

    #[test]
    fn round_trip() {
        let cfg = PathConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn missing_file() {
        assert_eq!(load_config(Path::new("/nonexistent/cfg.json")).unwrap_err().kind(), "config");
    }
}
