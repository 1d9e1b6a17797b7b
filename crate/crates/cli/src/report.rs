//! Report envelopes and file output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hilbert_core::BodySpec;
use serde::Serialize;

use crate::CliError;

pub const SCHEMA: u32 = 1;

/// Run configuration echoed at the top of every report.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub body: BodySpec,
    pub tolerances: BTreeMap<String, f64>,
    pub samples: BTreeMap<String, usize>,
    pub params: BTreeMap<String, f64>,
}

impl Header {
    pub fn new(command: &str, seed: u64, body: &BodySpec) -> Self {
        Self {
            schema: SCHEMA,
            tool: "hilbert",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            body: body.clone(),
            tolerances: BTreeMap::new(),
            samples: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn tol(mut self, key: &str, v: f64) -> Self {
        self.tolerances.insert(key.into(), v);
        self
    }

    pub fn samples(mut self, key: &str, v: usize) -> Self {
        self.samples.insert(key.into(), v);
        self
    }

    pub fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.into(), v);
        self
    }

    /// `# key: value` lines for CSV files.
    fn comment_lines(&self) -> String {
        let mut out = format!(
            "# tool: {} {}\n# schema: {}\n# command: {}\n# seed: {}\n# body: {}\n",
            self.tool,
            self.version,
            self.schema,
            self.command,
            self.seed,
            self.body.to_json()
        );
        for (k, v) in &self.tolerances {
            out.push_str(&format!("# tol.{k}: {v:e}\n"));
        }
        for (k, v) in &self.samples {
            out.push_str(&format!("# samples.{k}: {v}\n"));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("# param.{k}: {v}\n"));
        }
        out
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    header: &'a Header,
    report: &'a T,
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self(dir.to_path_buf()))
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.0.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn json<T: Serialize>(&self, name: &str, header: &Header, report: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(&Envelope { header, report })
            .map_err(|e| CliError::Io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn csv<R: Serialize>(&self, name: &str, header: &Header, rows: &[R]) -> Result<PathBuf, CliError> {
        let mut buf = header.comment_lines().into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(format!("cannot write {name}: {e}")))?;
            }
            w.flush().map_err(|e| CliError::Io(format!("cannot write {name}: {e}")))?;
        }
        self.write(name, &buf)
    }

    pub fn text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        self.write(name, text.as_bytes())
    }
}
