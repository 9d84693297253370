//! Records, summaries and their on-disk formats.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::{Algorithm, Family};
use crate::error::Result;

pub const CSV_HEADER: &str = "family,index,sweep,repeat,param,seed,n,m,q,d,frobenius,kl,residual,\
nmi_q_nmf,nmi_d_nmf,nmi_fast_greedy,status";

/// One network (and one parameter value, where the family sweeps one).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub family: Family,
    pub index: usize,
    pub sweep: f64,
    pub repeat: usize,
    pub param: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub q: Option<f64>,
    pub d: Option<f64>,
    pub frobenius: Option<f64>,
    pub kl: Option<f64>,
    pub residual: Option<f64>,
    /// Indexed like [`Algorithm::ALL`].
    pub nmi: [Option<f64>; 3],
    /// `None` on success, otherwise the error message.
    pub status: Option<String>,
}

impl Default for ExperimentRecord {
    fn default() -> Self {
        Self {
            family: Family::QFrobenius,
            index: 0,
            sweep: 0.0,
            repeat: 0,
            param: String::new(),
            seed: 0,
            n: 0,
            m: 0,
            q: None,
            d: None,
            frobenius: None,
            kl: None,
            residual: None,
            nmi: [None; 3],
            status: None,
        }
    }
}

fn slot(algorithm: Algorithm) -> usize {
    Algorithm::ALL.iter().position(|&a| a == algorithm).unwrap()
}

impl ExperimentRecord {
    pub fn nmi(&self, algorithm: Algorithm) -> Option<f64> {
        self.nmi[slot(algorithm)]
    }

    pub fn set_nmi(&mut self, algorithm: Algorithm, value: f64) {
        self.nmi[slot(algorithm)] = Some(value);
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_none()
    }

    fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_real).unwrap_or_default();
        let status = match &self.status {
            None => "ok".to_string(),
            Some(msg) => format!("error: {}", sanitize(msg)),
        };
        let mut fields = vec![
            self.family.to_string(),
            self.index.to_string(),
            format_real(self.sweep),
            self.repeat.to_string(),
            sanitize(&self.param),
            self.seed.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            opt(self.q),
            opt(self.d),
            opt(self.frobenius),
            opt(self.kl),
            opt(self.residual),
        ];
        fields.extend(self.nmi.iter().map(|&v| opt(v)));
        fields.push(status);
        fields.join(",")
    }
}

/// A named aggregate, e.g. a correlation over the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryLine {
    pub metric: String,
    pub key: String,
    pub value: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentOutput {
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<SummaryLine>,
}

/// Round-trippable float formatting (17 significant digits).
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn sanitize(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

impl ExperimentOutput {
    /// Failed records plus summary entries that could not be computed.
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.is_ok()).count()
            + self.summary.iter().filter(|s| s.value.is_err()).count()
    }

    pub fn summary_value(&self, metric: &str, key: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.metric == metric && s.key == key)
            .and_then(|s| s.value.clone().ok())
    }

    pub fn records_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for rec in &self.records {
            out.push_str(&rec.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("metric,key,value\n");
        for line in &self.summary {
            let value = match &line.value {
                Ok(v) => format_real(*v),
                Err(e) => format!("missing ({})", sanitize(e)),
            };
            let _ = writeln!(out, "{},{},{}", line.metric, sanitize(&line.key), value);
        }
        out
    }

    /// Whitespace-separated columns for gnuplot. Equivalence families emit
    /// one block per parameter value (quality, objective); the benchmark
    /// emits one row per network with the three NMI columns.
    pub fn plot_data(&self) -> String {
        let mut out = String::new();
        let Some(first) = self.records.first() else {
            return out;
        };
        let cell = |v: Option<f64>| v.map(format_real).unwrap_or_else(|| "NaN".into());
        if first.family == Family::Benchmark {
            out.push_str("# sweep repeat nmi_q_nmf nmi_d_nmf nmi_fast_greedy\n");
            for r in &self.records {
                let _ = write!(out, "{} {}", format_real(r.sweep), r.repeat);
                for v in r.nmi {
                    let _ = write!(out, " {}", cell(v));
                }
                out.push('\n');
            }
            return out;
        }
        let mut params: Vec<&str> = Vec::new();
        for r in &self.records {
            if !params.contains(&r.param.as_str()) {
                params.push(&r.param);
            }
        }
        for (i, param) in params.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# {} {param}", first.family);
            out.push_str("# sweep quality objective\n");
            for r in self
                .records
                .iter()
                .filter(|r| r.param == *param && r.is_ok())
            {
                let (quality, objective) = match first.family {
                    Family::DFrobenius => (r.d, r.frobenius),
                    Family::QFrobenius => (r.q, r.frobenius),
                    _ => (r.q, r.kl),
                };
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    format_real(r.sweep),
                    cell(quality),
                    cell(objective)
                );
            }
        }
        out
    }

    /// Writes `path`, `<stem>.summary.csv` and, if asked, `<stem>.dat`.
    /// Returns the paths written.
    pub fn write(&self, path: &Path, plot_data: bool) -> Result<Vec<PathBuf>> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let summary = path.with_extension("summary.csv");
        std::fs::write(path, self.records_csv())?;
        std::fs::write(&summary, self.summary_csv())?;
        let mut written = vec![path.to_path_buf(), summary];
        if plot_data {
            let dat = path.with_extension("dat");
            std::fs::write(&dat, self.plot_data())?;
            written.push(dat);
        }
        Ok(written)
    }
}
