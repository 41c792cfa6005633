//! Store directory: `graph.ogt` snapshot, `graph.oglog` mutation log and a
//! `LOCK` file held by the single writer process.

use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use onegraph::persist::{self, append_log, save_snapshot};
use onegraph::{Diagnostic, Graph};

use crate::fail::{Failure, ResultExt};

pub const SNAPSHOT_FILE: &str = "graph.ogt";
pub const LOG_FILE: &str = "graph.oglog";
pub const LOCK_FILE: &str = "LOCK";

/// The log is folded into a fresh snapshot once it holds more than
/// `max(MIN_COMPACT_ENTRIES, triples / 2)` entries, which keeps replay short
/// and the amortized cost of snapshot rewrites linear.
const MIN_COMPACT_ENTRIES: usize = 1024;

pub struct Store {
    dir: PathBuf,
    pub graph: Graph,
    pub diagnostics: Vec<Diagnostic>,
    log_entries: usize,
    _lock: Option<File>,
}

fn read_optional(path: &Path) -> io::Result<Option<Vec<u8>>> {
    match fs::read(path) {
        Ok(b) => Ok(Some(b)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e),
    }
}

impl Store {
    /// Opens the store for reading. A missing directory is an empty store;
    /// nothing is created.
    pub fn open_read(dir: &Path) -> Result<Self, Failure> {
        Self::load(dir, None)
    }

    /// Opens the store for writing, creating it if needed and taking the
    /// writer lock.
    pub fn open_write(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir).io_context(|| format!("cannot create store {}", dir.display()))?;
        let lock_path = dir.join(LOCK_FILE);
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .io_context(|| format!("cannot open {}", lock_path.display()))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => {
                return Err(Failure::io(format!(
                    "store {} is locked by another writer",
                    dir.display()
                )))
            }
            Err(TryLockError::Error(e)) => {
                return Err(e).io_context(|| format!("cannot lock {}", lock_path.display()))
            }
        }
        Self::load(dir, Some(lock))
    }

    fn load(dir: &Path, lock: Option<File>) -> Result<Self, Failure> {
        let snapshot_path = dir.join(SNAPSHOT_FILE);
        let log_path = dir.join(LOG_FILE);
        // Log first: compaction renames the new snapshot into place before
        // truncating the log, so a concurrent reader always pairs the log it
        // read with a snapshot at least as new as that log's base.
        let log = read_optional(&log_path).io_context(|| format!("cannot read {}", log_path.display()))?;
        let snapshot =
            read_optional(&snapshot_path).io_context(|| format!("cannot read {}", snapshot_path.display()))?;
        let log_entries = log
            .as_deref()
            .map_or(0, |b| b.iter().filter(|&&c| c == b'\n').count());
        let loaded = persist::load(snapshot.as_deref(), log.as_deref())
            .io_context(|| format!("cannot load store {}", dir.display()))?;
        Ok(Store {
            dir: dir.to_owned(),
            graph: loaded.graph,
            diagnostics: loaded.diagnostics,
            log_entries,
            _lock: lock,
        })
    }

    /// Appends the graph's pending mutations to the log, compacting when it
    /// has grown long.
    pub fn commit(&mut self) -> Result<(), Failure> {
        debug_assert!(self._lock.is_some(), "commit needs the writer lock");
        let entries = self.graph.log();
        if entries.is_empty() {
            return Ok(());
        }
        let log_path = self.dir.join(LOG_FILE);
        let write = || -> io::Result<()> {
            let mut file = OpenOptions::new().create(true).append(true).open(&log_path)?;
            append_log(&mut file, entries)?;
            file.sync_data()
        };
        write().io_context(|| format!("cannot append to {}", log_path.display()))?;
        self.log_entries += entries.len();
        self.graph.clear_log();
        if self.log_entries > MIN_COMPACT_ENTRIES.max(self.graph.len() / 2) {
            self.compact()?;
        }
        Ok(())
    }

    /// Writes a fresh snapshot and empties the log. Replaying a stale log
    /// over the new snapshot is harmless, so a crash between the two steps
    /// loses nothing.
    pub fn compact(&mut self) -> Result<(), Failure> {
        let snapshot_path = self.dir.join(SNAPSHOT_FILE);
        let tmp_path = self.dir.join(format!("{SNAPSHOT_FILE}.tmp"));
        let write = || -> io::Result<()> {
            let mut file = File::create(&tmp_path)?;
            save_snapshot(&self.graph, &mut file)?;
            file.sync_all()?;
            fs::rename(&tmp_path, &snapshot_path)?;
            let log = OpenOptions::new().create(true).truncate(true).write(true).open(self.dir.join(LOG_FILE))?;
            log.sync_all()
        };
        write().io_context(|| format!("cannot compact store {}", self.dir.display()))?;
        self.log_entries = 0;
        Ok(())
    }
}

/// Writes `text` to stdout, treating a closed pipe as success.
pub fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).io_context(|| "cannot write to stdout".into()),
        _ => Ok(()),
    }
}
