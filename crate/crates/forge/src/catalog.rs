//! Persistent catalog of verified artifacts.
//!
//! A single JSON document plus a directory of content-addressed object
//! files. Entries reference their parents by id, forming a DAG that is
//! checked on insert. A lock file serializes writers; readers share.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CATALOG_DIR_ENV: &str = "UF_CATALOG_DIR";
const CATALOG_FILE: &str = "catalog.json";
const LOCK_FILE: &str = "catalog.lock";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Array,
    Scheme,
    State,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Provenance {
    /// Shipped with the tool.
    Builtin { name: String },
    /// Produced by an operation from existing entries.
    Constructed {
        operation: String,
        parents: Vec<String>,
    },
    /// Loaded from a user file.
    Imported { file_hash: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verification {
    pub status: String,
    pub detail: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: Kind,
    pub signature: String,
    pub k: u32,
    /// Minimum Hamming distance for arrays/schemes, support for states.
    pub metric: Option<u64>,
    pub provenance: Provenance,
    pub verification: Verification,
    pub path: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CatalogFile {
    version: u32,
    entries: Vec<CatalogEntry>,
}

pub struct Catalog {
    dir: PathBuf,
    entries: Vec<CatalogEntry>,
    _lock: Lock,
}

struct Lock {
    path: PathBuf,
}

impl Lock {
    fn acquire(dir: &Path) -> Result<Lock> {
        let path = dir.join(LOCK_FILE);
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(_) => Ok(Lock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(anyhow!(
                "catalog is locked; remove {} if no other process is running",
                path.display()
            )),
            Err(e) => Err(e).context("acquiring catalog lock"),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

pub fn content_id(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn catalog_dir() -> PathBuf {
    std::env::var_os(CATALOG_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".uniformity-forge"))
}

impl Catalog {
    /// Open (creating and seeding on first use) the catalog in `dir`.
    pub fn open(dir: &Path) -> Result<Catalog> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating catalog directory {}", dir.display()))?;
        let lock = Lock::acquire(dir)?;
        let file = dir.join(CATALOG_FILE);
        let entries = if file.exists() {
            let text = fs::read_to_string(&file)?;
            let parsed: CatalogFile =
                serde_json::from_str(&text).context("catalog file is corrupt")?;
            parsed.entries
        } else {
            Vec::new()
        };
        Ok(Catalog {
            dir: dir.to_path_buf(),
            entries,
            _lock: lock,
        })
    }

    pub fn objects_dir(&self) -> PathBuf {
        self.dir.join("objects")
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Unique prefix lookup.
    pub fn resolve(&self, prefix: &str) -> Result<&CatalogEntry> {
        let matches: Vec<&CatalogEntry> = self
            .entries
            .iter()
            .filter(|e| e.id.starts_with(prefix))
            .collect();
        match matches.len() {
            0 => bail!("no catalog entry matches {prefix:?}"),
            1 => Ok(matches[0]),
            n => bail!("{n} entries match {prefix:?}; use a longer prefix"),
        }
    }

    /// Insert an entry, enforcing that parents exist and that no provenance
    /// cycle forms. Content addressing makes inserts idempotent: an id
    /// already present keeps its original entry.
    pub fn insert(&mut self, entry: CatalogEntry) -> Result<()> {
        if self.get(&entry.id).is_some() {
            return Ok(());
        }
        if let Provenance::Constructed { parents, .. } = &entry.provenance {
            let by_id: HashMap<&str, &CatalogEntry> =
                self.entries.iter().map(|e| (e.id.as_str(), e)).collect();
            for parent in parents {
                if !by_id.contains_key(parent.as_str()) {
                    bail!("parent {parent} is not in the catalog");
                }
            }
            // content addressing makes a cycle only possible through an
            // identical object; walk ancestors to be sure
            let mut stack: Vec<&str> = parents.iter().map(String::as_str).collect();
            let mut seen = std::collections::HashSet::new();
            while let Some(id) = stack.pop() {
                if id == entry.id {
                    bail!("provenance cycle: output is its own ancestor");
                }
                if !seen.insert(id.to_string()) {
                    continue;
                }
                if let Some(Provenance::Constructed { parents, .. }) =
                    by_id.get(id).map(|e| &e.provenance)
                {
                    stack.extend(parents.iter().map(String::as_str));
                }
            }
        }
        self.entries.push(entry);
        self.save()
    }

    /// Drop entries whose files have vanished; returns the removed ids.
    pub fn gc(&mut self) -> Result<Vec<String>> {
        let (kept, gone): (Vec<_>, Vec<_>) = self
            .entries
            .drain(..)
            .partition(|e| Path::new(&e.path).exists());
        self.entries = kept;
        self.save()?;
        Ok(gone.into_iter().map(|e| e.id).collect())
    }

    fn save(&self) -> Result<()> {
        let file = CatalogFile {
            version: 1,
            entries: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file)?;
        fs::write(self.dir.join(CATALOG_FILE), text)?;
        Ok(())
    }

}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
