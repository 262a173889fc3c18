//! Flat key=value batch configuration files.
//!
//! Keys mirror the CLI flags; `data`, `methods` and `seeds` take
//! comma-separated lists. Lines starting with `#` are comments. Unknown
//! keys abort with an error so typos cannot silently fall back to
//! defaults.

use asofs::data::LabelColumn;
use asofs::error::Error;
use asofs::search::{Method, OptimizerConfig};
use asofs::transfer::FlipPolicy;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

const KNOWN_KEYS: &[&str] = &[
    "data",
    "methods",
    "seeds",
    "num-seeds",
    "label-col",
    "pop",
    "iters",
    "omega",
    "k",
    "alpha",
    "beta",
    "u",
    "g0",
    "stop-temp",
    "flip-mode",
    "train-fraction",
    "stratified",
    "parallel",
];

#[derive(Debug)]
pub struct BatchConfig {
    pub data: Vec<PathBuf>,
    entries: BTreeMap<String, String>,
}

impl BatchConfig {
    pub fn load(path: &Path) -> Result<BatchConfig, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {}", path.display(), e)))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {}", path.display(), msg)),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<BatchConfig, Error> {
        let mut entries = BTreeMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", line_no + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::config(format!(
                    "line {}: unknown key {:?}",
                    line_no + 1,
                    key
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        let data = entries
            .get("data")
            .map(|v| v.split(',').map(|s| PathBuf::from(s.trim())).collect())
            .unwrap_or_default();
        Ok(BatchConfig { data, entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::config(format!("bad value for {:?}: {:?}", key, raw))),
        }
    }

    pub fn label_column(&self) -> LabelColumn {
        match self.get("label-col") {
            Some(s) => LabelColumn::parse(s),
            None => LabelColumn::Last,
        }
    }

    /// Methods list; all four when unspecified.
    pub fn methods(&self) -> Result<Vec<Method>, Error> {
        match self.get("methods") {
            None => Ok(Method::ALL.to_vec()),
            Some(raw) => raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    Method::parse(s).ok_or_else(|| Error::config(format!("unknown method {:?}", s)))
                })
                .collect(),
        }
    }

    /// Explicit `seeds` list, else `0..num-seeds` (default 10 seeds).
    pub fn seeds(&self) -> Vec<u64> {
        if let Some(raw) = self.get("seeds") {
            let list: Vec<u64> = raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .filter_map(|s| s.parse().ok())
                .collect();
            if !list.is_empty() {
                return list;
            }
        }
        let n = self
            .get("num-seeds")
            .and_then(|s| s.parse::<u64>().ok())
            .unwrap_or(10);
        (0..n).collect()
    }

    /// Fold the file's optimizer keys into `cfg`.
    pub fn apply_tuning(&self, cfg: &mut OptimizerConfig) -> Result<(), Error> {
        if let Some(v) = self.parse_value::<usize>("pop")? {
            cfg.population_size = v;
        }
        if let Some(v) = self.parse_value::<usize>("iters")? {
            cfg.dynamics.iterations = v;
        }
        if let Some(v) = self.parse_value::<f64>("omega")? {
            cfg.weights.omega = v;
        }
        if let Some(v) = self.parse_value::<usize>("k")? {
            cfg.knn_k = v;
        }
        if let Some(v) = self.parse_value::<f64>("alpha")? {
            cfg.dynamics.alpha = v;
        }
        if let Some(v) = self.parse_value::<f64>("beta")? {
            cfg.dynamics.beta = v;
        }
        if let Some(v) = self.parse_value::<f64>("u")? {
            cfg.dynamics.u = v;
        }
        if let Some(v) = self.parse_value::<f64>("g0")? {
            cfg.dynamics.g0 = v;
        }
        if let Some(v) = self.parse_value::<f64>("stop-temp")? {
            cfg.stop_temp = v;
        }
        match self.get("flip-mode") {
            None => {}
            Some("fixed") => cfg.flip = FlipPolicy::Fixed(0.5),
            Some("sampled") => cfg.flip = FlipPolicy::Sampled,
            Some(other) => {
                return Err(Error::config(format!("bad value for \"flip-mode\": {other:?}")))
            }
        }
        if let Some(v) = self.parse_value::<f64>("train-fraction")? {
            cfg.train_fraction = v;
        }
        if let Some(v) = self.parse_value::<bool>("stratified")? {
            cfg.stratified = v;
        }
        if let Some(v) = self.parse_value::<bool>("parallel")? {
            cfg.parallel = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_scalars() {
        let text = "\
# demo
data = a.csv , b.csv
methods = asos, asov-sa
seeds = 3,1,4
pop = 12
omega = 0.95
flip-mode = sampled
";
        let cfg = BatchConfig::parse(text).unwrap();
        assert_eq!(cfg.data, vec![PathBuf::from("a.csv"), PathBuf::from("b.csv")]);
        assert_eq!(cfg.methods().unwrap(), vec![Method::Asos, Method::AsovSa]);
        assert_eq!(cfg.seeds(), vec![3, 1, 4]);

        let mut oc = OptimizerConfig::default();
        cfg.apply_tuning(&mut oc).unwrap();
        assert_eq!(oc.population_size, 12);
        assert_eq!(oc.weights.omega, 0.95);
        assert_eq!(oc.flip, FlipPolicy::Sampled);
    }

    #[test]
    fn defaults_when_keys_absent() {
        let cfg = BatchConfig::parse("data = x.csv\n").unwrap();
        assert_eq!(cfg.methods().unwrap().len(), 4);
        assert_eq!(cfg.seeds(), (0..10).collect::<Vec<u64>>());
    }

    #[test]
    fn num_seeds_expands_a_range() {
        let cfg = BatchConfig::parse("data = x.csv\nnum-seeds = 3\n").unwrap();
        assert_eq!(cfg.seeds(), vec![0, 1, 2]);
    }

    #[test]
    fn unknown_keys_and_bad_values_error() {
        assert!(BatchConfig::parse("bogus = 1\n").is_err());
        assert!(BatchConfig::parse("pop\n").is_err());
        let cfg = BatchConfig::parse("pop = abc\n").unwrap();
        let mut oc = OptimizerConfig::default();
        assert!(cfg.apply_tuning(&mut oc).is_err());

        let cfg = BatchConfig::parse("methods = asos, nope\n").unwrap();
        assert!(cfg.methods().is_err());
    }
}
