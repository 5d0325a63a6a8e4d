//! Run configuration: flags > config file > defaults, over a fixed
//! per-command key schema. Unknown keys are usage errors.

use std::collections::BTreeMap;

pub struct Schema {
    pub command: &'static str,
    /// (key, default, help)
    pub keys: &'static [(&'static str, &'static str, &'static str)],
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
    /// keys that affect computation (everything except output routing)
    compute_keys: Vec<String>,
}

/// Keys that never feed the computation (excluded from the cache key).
const ROUTING_KEYS: &[&str] = &["out", "summary", "cache-dir", "config"];

impl RunConfig {
    pub fn build(schema: &Schema, args: &[String]) -> Result<RunConfig, String> {
        let mut values: BTreeMap<String, String> = schema
            .keys
            .iter()
            .map(|(k, d, _)| (k.to_string(), d.to_string()))
            .collect();
        for r in ROUTING_KEYS {
            values.insert(r.to_string(), String::new());
        }
        let known = |k: &str| {
            schema.keys.iter().any(|(s, _, _)| *s == k) || ROUTING_KEYS.contains(&k)
        };

        // first pass: pull --config so the file sits below the flags
        let mut flat: Vec<(String, String)> = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            let Some(stripped) = a.strip_prefix("--") else {
                return Err(format!("unexpected positional argument '{a}'"));
            };
            let (key, val) = if let Some((k, v)) = stripped.split_once('=') {
                (k.to_string(), v.to_string())
            } else {
                let v = args
                    .get(i + 1)
                    .ok_or_else(|| format!("flag --{stripped} needs a value"))?;
                i += 1;
                (stripped.to_string(), v.clone())
            };
            if !known(&key) {
                return Err(format!("unknown flag --{key} for '{}'", schema.command));
            }
            flat.push((key, val));
            i += 1;
        }

        if let Some((_, path)) = flat.iter().find(|(k, _)| k == "config") {
            for (k, v) in parse_config_file(path)? {
                if !known(&k) {
                    return Err(format!("unknown key '{k}' in config file {path}"));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in flat {
            values.insert(k, v);
        }

        let compute_keys = schema.keys.iter().map(|(k, _, _)| k.to_string()).collect();
        Ok(RunConfig { command: schema.command.to_string(), values, compute_keys })
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(|s| s.as_str()).unwrap_or("")
    }

    pub fn f64(&self, key: &str) -> Result<f64, String> {
        self.get(key)
            .parse()
            .map_err(|_| format!("--{key}: expected a number, got '{}'", self.get(key)))
    }

    pub fn usize(&self, key: &str) -> Result<usize, String> {
        self.get(key)
            .parse()
            .map_err(|_| format!("--{key}: expected an integer, got '{}'", self.get(key)))
    }

    pub fn u64(&self, key: &str) -> Result<u64, String> {
        self.get(key)
            .parse()
            .map_err(|_| format!("--{key}: expected an integer, got '{}'", self.get(key)))
    }

    /// Comma-separated (optionally bracketed) integer list.
    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, String> {
        let raw = self.get(key).trim().trim_start_matches('[').trim_end_matches(']');
        raw.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| format!("--{key}: bad list entry '{t}'"))
            })
            .collect()
    }

    /// Canonical text of the computational fields, for hashing.
    pub fn canonical(&self) -> String {
        let mut s = format!("command={}\n", self.command);
        for k in &self.compute_keys {
            s.push_str(&format!("{k}={}\n", self.get(k)));
        }
        s
    }

    pub fn cache_dir(&self) -> Option<String> {
        let flag = self.get("cache-dir");
        if !flag.is_empty() {
            return Some(flag.to_string());
        }
        std::env::var("SOFTEDGE_CACHE_DIR").ok().filter(|s| !s.is_empty())
    }
}

fn parse_config_file(path: &str) -> Result<Vec<(String, String)>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected 'key = value'", lineno + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: Schema = Schema {
        command: "demo",
        keys: &[("alpha", "1.5", "the alpha"), ("steps", "10", "grid steps")],
    };

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn defaults_and_flags() {
        let c = RunConfig::build(&SCHEMA, &s(&[])).unwrap();
        assert_eq!(c.f64("alpha").unwrap(), 1.5);
        let c = RunConfig::build(&SCHEMA, &s(&["--alpha", "2.5", "--steps=7"])).unwrap();
        assert_eq!(c.f64("alpha").unwrap(), 2.5);
        assert_eq!(c.usize("steps").unwrap(), 7);
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(RunConfig::build(&SCHEMA, &s(&["--bogus", "1"])).is_err());
    }

    #[test]
    fn file_below_flags() {
        let dir = std::env::temp_dir().join("softedge-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.conf");
        std::fs::write(&path, "# comment\nalpha = 9\nsteps = 3\n").unwrap();
        let c = RunConfig::build(
            &SCHEMA,
            &s(&["--config", path.to_str().unwrap(), "--alpha", "2"]),
        )
        .unwrap();
        assert_eq!(c.f64("alpha").unwrap(), 2.0); // flag wins
        assert_eq!(c.usize("steps").unwrap(), 3); // file beats default
    }

    #[test]
    fn canonical_excludes_routing() {
        let a = RunConfig::build(&SCHEMA, &s(&["--out", "x.csv"])).unwrap();
        let b = RunConfig::build(&SCHEMA, &s(&["--out", "y.csv"])).unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
