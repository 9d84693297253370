//! Flat `key = value` experiment configuration files.
//!
//! One experiment per file. Blank lines and lines starting with `#` are
//! ignored; list values are comma separated. Example:
//!
//! ```text
//! family   = q-frobenius
//! network  = sbm
//! sizes    = 400, 600
//! theta_out = 0.05
//! theta_in = 0.6, 0.55, 0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15
//! seed     = 1
//! output   = fig1a.csv
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::LfrParams;
use crate::objectives::SigmaChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    QFrobenius,
    DFrobenius,
    QKl,
    QRbKl,
    QAfgKl,
    Benchmark,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::QFrobenius => "q-frobenius",
            Family::DFrobenius => "d-frobenius",
            Family::QKl => "q-kl",
            Family::QRbKl => "q-rb-kl",
            Family::QAfgKl => "q-afg-kl",
            Family::Benchmark => "benchmark",
        }
    }

    pub fn is_equivalence(self) -> bool {
        self != Family::Benchmark
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "q-frobenius" => Family::QFrobenius,
            "d-frobenius" => Family::DFrobenius,
            "q-kl" => Family::QKl,
            "q-rb-kl" => Family::QRbKl,
            "q-afg-kl" => Family::QAfgKl,
            "benchmark" => Family::Benchmark,
            other => return Err(format!("unknown family {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    QNmf,
    DNmf,
    FastGreedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::QNmf, Algorithm::DNmf, Algorithm::FastGreedy];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::QNmf => "q-nmf",
            Algorithm::DNmf => "d-nmf",
            Algorithm::FastGreedy => "fast-greedy",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "q-nmf" => Algorithm::QNmf,
            "d-nmf" => Algorithm::DNmf,
            "fast-greedy" => Algorithm::FastGreedy,
            other => return Err(format!("unknown algorithm {other:?}")),
        })
    }
}

/// Which networks the sweep visits. Each variant carries the swept values.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSpec {
    /// Planted SBM; sweeps the within-block probability.
    Sbm {
        sizes: Vec<usize>,
        theta_out: f64,
        theta_in: Vec<f64>,
    },
    /// Girvan-Newman networks; sweeps `z_out`.
    Gn { z_out: Vec<f64> },
    /// Simplified LFR; sweeps `mu`. `template.mu` is overwritten per point.
    Lfr { template: LfrParams, mu: Vec<f64> },
    /// Pre-generated `network.dat` / `community.dat` pairs.
    LfrFiles {
        pairs: Vec<(PathBuf, PathBuf)>,
        sweep: Vec<f64>,
    },
}

impl NetworkSpec {
    pub fn sweep_values(&self) -> Vec<f64> {
        match self {
            NetworkSpec::Sbm { theta_in, .. } => theta_in.clone(),
            NetworkSpec::Gn { z_out } => z_out.clone(),
            NetworkSpec::Lfr { mu, .. } => mu.clone(),
            NetworkSpec::LfrFiles { sweep, .. } => sweep.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub network: NetworkSpec,
    /// Networks generated per sweep value.
    pub repeats: usize,
    pub seed: u64,
    /// Reuse the same network seeds at every sweep value (common random
    /// numbers), so that only the swept parameter changes between points.
    pub common_seed: bool,
    /// Diagonal shifts for `d-frobenius` and the `d-nmf` detector.
    pub sigma: Vec<SigmaChoice>,
    /// Resolution values for `q-rb-kl`.
    pub gamma: Vec<f64>,
    /// Self-loop weights for `q-afg-kl`.
    pub r: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    /// Independent detections averaged per network (benchmark).
    pub runs: usize,
    /// Best-of restarts inside each detection (benchmark).
    pub restarts: usize,
    pub iters: usize,
    /// Columns of `S`; `None` uses the planted community count.
    pub communities: Option<usize>,
    /// Recompute `Q` from scratch for every record and flag mismatches.
    pub audit: bool,
    /// Also write a gnuplot-ready `.dat` file next to the CSV.
    pub plot_data: bool,
    pub output: Option<PathBuf>,
}

struct Entries {
    values: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.values.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse().map(Some).map_err(|e| Error::Config {
                line,
                message: format!("{key}: {e}"),
            }),
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((line, raw)) => raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse().map_err(|e| Error::Config {
                        line,
                        message: format!("{key}: {s:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    fn required<T>(value: Option<T>, key: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing required key {key:?}"),
        })
    }
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut cfg = Self::parse(&text)?;
        // relative data paths resolve against the config's directory
        if let NetworkSpec::LfrFiles { pairs, .. } = &mut cfg.network {
            let base = path.as_ref().parent().unwrap_or(Path::new(""));
            for (net, com) in pairs.iter_mut() {
                *net = base.join(&net);
                *com = base.join(&com);
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                message: format!("expected key = value, got {line:?}"),
            })?;
            let key = key.trim().to_string();
            if values.contains_key(&key) {
                return Err(Error::Config {
                    line: i + 1,
                    message: format!("duplicate key {key:?}"),
                });
            }
            values.insert(key, (i + 1, value.trim().to_string()));
        }
        let mut e = Entries { values };

        let family: Family = Entries::required(e.parse("family")?, "family")?;
        let network_kind: String = Entries::required(e.parse("network")?, "network")?;
        let network = match network_kind.as_str() {
            "sbm" => NetworkSpec::Sbm {
                sizes: Entries::required(e.list("sizes")?, "sizes")?,
                theta_out: Entries::required(e.parse("theta_out")?, "theta_out")?,
                theta_in: Entries::required(e.list("theta_in")?, "theta_in")?,
            },
            "gn" => NetworkSpec::Gn {
                z_out: Entries::required(e.list("z_out")?, "z_out")?,
            },
            "lfr" => {
                let n = Entries::required(e.parse("lfr_n")?, "lfr_n")?;
                let k = Entries::required(e.parse("lfr_k")?, "lfr_k")?;
                let maxk = Entries::required(e.parse("lfr_maxk")?, "lfr_maxk")?;
                let minc = Entries::required(e.parse("lfr_minc")?, "lfr_minc")?;
                let maxc = Entries::required(e.parse("lfr_maxc")?, "lfr_maxc")?;
                let mu: Vec<f64> = Entries::required(e.list("mu")?, "mu")?;
                let template = LfrParams::new(n, 0.0, k, maxk, minc, maxc)?;
                NetworkSpec::Lfr { template, mu }
            }
            "lfr-files" => {
                let raw: Vec<String> = Entries::required(e.list("lfr_files")?, "lfr_files")?;
                let pairs = raw
                    .iter()
                    .map(|pair| {
                        pair.split_once('|')
                            .map(|(a, b)| (PathBuf::from(a.trim()), PathBuf::from(b.trim())))
                            .ok_or_else(|| Error::Config {
                                line: 0,
                                message: format!(
                                    "lfr_files entry {pair:?} is not network|community"
                                ),
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let sweep = e
                    .list("sweep")?
                    .unwrap_or_else(|| (0..pairs.len()).map(|i| i as f64).collect());
                if sweep.len() != pairs.len() {
                    return Err(Error::Config {
                        line: 0,
                        message: "sweep must have one value per lfr_files entry".into(),
                    });
                }
                NetworkSpec::LfrFiles { pairs, sweep }
            }
            other => {
                return Err(Error::Config {
                    line: 0,
                    message: format!(
                        "unknown network {other:?}; expected sbm, gn, lfr or lfr-files"
                    ),
                })
            }
        };

        let cfg = ExperimentConfig {
            family,
            network,
            repeats: e.parse("repeats")?.unwrap_or(1),
            seed: e.parse("seed")?.unwrap_or(0),
            common_seed: e.parse("common_seed")?.unwrap_or(false),
            sigma: e.list("sigma")?.unwrap_or_else(|| vec![SigmaChoice::Auto]),
            gamma: e.list("gamma")?.unwrap_or_else(|| vec![0.5, 2.0]),
            r: e.list("r")?.unwrap_or_else(|| vec![1.0, 2.0]),
            algorithms: e
                .list("algorithms")?
                .unwrap_or_else(|| Algorithm::ALL.to_vec()),
            runs: e.parse("runs")?.unwrap_or(10),
            restarts: e.parse("restarts")?.unwrap_or(1),
            iters: e.parse("iters")?.unwrap_or(500),
            communities: e.parse("communities")?,
            audit: e.parse("audit")?.unwrap_or(false),
            plot_data: e.parse("plot_data")?.unwrap_or(false),
            output: e.parse::<String>("output")?.map(PathBuf::from),
        };
        if let Some((key, (line, _))) = e.values.into_iter().next() {
            return Err(Error::Config {
                line,
                message: format!("unknown key {key:?}"),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |message: &str| {
            Err(Error::Config {
                line: 0,
                message: message.to_string(),
            })
        };
        if self.network.sweep_values().is_empty() {
            return fail("the sweep is empty");
        }
        if self.repeats == 0 || self.runs == 0 || self.restarts == 0 || self.iters == 0 {
            return fail("repeats, runs, restarts and iters must be >= 1");
        }
        match self.family {
            Family::DFrobenius if self.sigma.is_empty() => fail("sigma list is empty"),
            Family::QRbKl if self.gamma.is_empty() => fail("gamma list is empty"),
            Family::QAfgKl if self.r.is_empty() => fail("r list is empty"),
            Family::QKl | Family::QRbKl | Family::QAfgKl
                if !matches!(self.network, NetworkSpec::Gn { .. }) =>
            {
                fail("KL families need network = gn (constant null models assume regular degrees)")
            }
            Family::Benchmark if self.algorithms.is_empty() => fail("algorithms list is empty"),
            _ => Ok(()),
        }
    }
}
