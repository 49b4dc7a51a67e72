//! Flat `key = value` config files with `[section]` headers.
//!
//! Sections are named after subcommands (`[density]`, `[mc-density]`, ...);
//! keys before any header are top-level and serve as fallbacks for every
//! section, which is where the global settings (`zeros_dir`, `out_dir`,
//! `threads`) live.  CLI flags always override file values.  Lines starting
//! with `#` or `;` are comments; inline comments are not supported so values
//! may contain `#` freely.

use std::collections::HashMap;
use std::path::Path;

/// Parsed config: a flat map from `section.key` (or bare `key` for
/// top-level entries) to the raw value string.
#[derive(Debug, Default)]
pub struct Config {
    map: HashMap<String, String>,
}

/// Normalizes a key so `x-max` and `x_max` address the same entry.
fn norm_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('-', "_")
}

impl Config {
    /// The empty config (no file given).
    pub fn empty() -> Self {
        Config::default()
    }

    /// Loads and parses a config file.  Errors are usage-class: they name
    /// the offending line so the user can fix the file.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut map = HashMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(format!(
                        "{}: line {}: unterminated [section] header",
                        path.display(),
                        idx + 1
                    ));
                };
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}: line {}: expected `key = value`, got `{line}`",
                    path.display(),
                    idx + 1
                ));
            };
            let key = norm_key(key);
            if key.is_empty() {
                return Err(format!("{}: line {}: empty key", path.display(), idx + 1));
            }
            let full = if section.is_empty() {
                key
            } else {
                format!("{section}.{key}")
            };
            map.insert(full, value.trim().to_string());
        }
        Ok(Config { map })
    }

    /// Looks up `section.key`, falling back to the top-level `key`.
    /// An empty `section` skips straight to the top level.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        let key = norm_key(key);
        if !section.is_empty() {
            let scoped = format!("{}.{key}", section.to_ascii_lowercase());
            if let Some(v) = self.map.get(&scoped) {
                return Some(v.as_str());
            }
        }
        self.map.get(&key).map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_sections_and_top_level() {
        let f = write_tmp(
            "# comment\nzeros_dir = /tmp/z\n\n[density]\neps = 0.05\nproduct-cutoff = 9999\n\n[sieve]\nx_max = 1e6\n",
        );
        let cfg = Config::load(f.path()).unwrap();
        assert_eq!(cfg.get("density", "eps"), Some("0.05"));
        // hyphen/underscore equivalence both in file and lookup
        assert_eq!(cfg.get("density", "product_cutoff"), Some("9999"));
        assert_eq!(cfg.get("sieve", "x-max"), Some("1e6"));
        // top-level fallback visible from any section and from none
        assert_eq!(cfg.get("density", "zeros_dir"), Some("/tmp/z"));
        assert_eq!(cfg.get("", "zeros_dir"), Some("/tmp/z"));
        assert_eq!(cfg.get("density", "missing"), None);
    }

    #[test]
    fn section_overrides_top_level() {
        let f = write_tmp("q = 5\n[scan]\nq = 13\n");
        let cfg = Config::load(f.path()).unwrap();
        assert_eq!(cfg.get("scan", "q"), Some("13"));
        assert_eq!(cfg.get("sieve", "q"), Some("5"));
    }

    #[test]
    fn rejects_malformed_lines() {
        let f = write_tmp("[density\neps = 0.05\n");
        let err = Config::load(f.path()).unwrap_err();
        assert!(err.contains("line 1"), "{err}");

        let f = write_tmp("just words\n");
        let err = Config::load(f.path()).unwrap_err();
        assert!(err.contains("key = value"), "{err}");

        let f = write_tmp("= naked value\n");
        let err = Config::load(f.path()).unwrap_err();
        assert!(err.contains("empty key"), "{err}");
    }
}
