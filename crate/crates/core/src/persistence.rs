//! File-backed sessions: an append-only JSONL event log plus periodic
//! snapshots of the derived state.
//!
//! Layout of one session directory:
//!
//! ```text
//! <root>/<id>/session.json    header: config, resource directory
//! <root>/<id>/corpus.json     input corpus, copied at creation
//! <root>/<id>/seeds.json      input seeds, copied at creation
//! <root>/<id>/reference.json  optional evaluation reference
//! <root>/<id>/events.jsonl    one Event per line
//! <root>/<id>/snapshot.json   SessionState after the first `events` events
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::annotation::{load_corpus, load_seeds_with, save_corpus, save_seeds, AnnotatedSentence, Seed};
use crate::error::{Error, Result};
use crate::feedback::ReviewDecision;
use crate::metrics::Reference;
use crate::orchestration::{Event, Session, SessionConfig, SessionContext, SessionState};
use crate::resources::Resources;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SNAPSHOT_EVERY: usize = 16;

const HEADER: &str = "session.json";
const CORPUS: &str = "corpus.json";
const SEEDS: &str = "seeds.json";
const REFERENCE: &str = "reference.json";
const EVENTS: &str = "events.jsonl";
const SNAPSHOT: &str = "snapshot.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionHeader {
    pub schema_version: u32,
    pub id: String,
    pub config: SessionConfig,
    /// Resource directory; built-in defaults when absent.
    #[serde(default)]
    pub resources_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub schema_version: u32,
    /// Number of log events folded into `state`.
    pub events: usize,
    pub state: SessionState,
}

fn json_err(path: &Path, e: serde_json::Error) -> Error {
    Error::Json {
        path: path.to_path_buf(),
        source: e,
    }
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| json_err(path, e))
}

/// Writes through a temporary file and a rename so readers never see a
/// partial document.
fn write_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(value).map_err(|e| json_err(path, e))?;
    let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Serialized state, the unit of bit-exact comparison.
pub fn state_bytes(state: &SessionState) -> Vec<u8> {
    serde_json::to_vec(state).expect("session state serializes")
}

/// Reads an event log. A final line without its newline is a torn write and
/// is dropped; any other malformed line is an error.
pub fn read_events(path: &Path) -> Result<Vec<Event>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let mut events = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(e) => events.push(e),
            Err(_) if i + 1 == lines.len() && !complete => {
                warn!("{}: dropping torn final line", path.display());
            }
            Err(e) => return Err(json_err(path, e)),
        }
    }
    Ok(events)
}

/// Rewrites the log with exactly `events`, used to cut a torn tail before
/// appending again.
fn rewrite_events(path: &Path, events: &[Event]) -> Result<()> {
    let mut text = String::new();
    for e in events {
        text.push_str(&serde_json::to_string(e).map_err(|err| json_err(path, err))?);
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// A directory of sessions.
#[derive(Debug, Clone)]
pub struct SessionStore {
    root: PathBuf,
}

impl SessionStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        Ok(SessionStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn list(&self) -> Result<Vec<String>> {
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.root).map_err(|e| Error::io(&self.root, e))? {
            let entry = entry.map_err(|e| Error::io(&self.root, e))?;
            if entry.path().join(HEADER).is_file() {
                ids.push(entry.file_name().to_string_lossy().into_owned());
            }
        }
        ids.sort();
        Ok(ids)
    }

    fn dir(&self, id: &str) -> Result<PathBuf> {
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::NotFound(format!("session `{id}`")));
        }
        Ok(self.root.join(id))
    }

    /// Persists the inputs, starts the session and logs its first event.
    pub fn create(
        &self,
        corpus: Vec<AnnotatedSentence>,
        seeds: Vec<Seed>,
        reference: Option<Reference>,
        resources_dir: Option<PathBuf>,
        config: SessionConfig,
    ) -> Result<PersistentSession> {
        if let Some(r) = &reference {
            r.check_ids(corpus.iter().map(|s| s.id.as_str()))?;
        }
        let resources = match &resources_dir {
            Some(d) => Resources::load_dir(d)?,
            None => Resources::default(),
        };
        let ctx = Arc::new(SessionContext::new(corpus, seeds, Arc::new(resources), config)?);
        let (session, started) = Session::start(ctx.clone())?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let dir = self.dir(&id)?;
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        save_corpus(dir.join(CORPUS), &ctx.corpus)?;
        save_seeds(dir.join(SEEDS), &ctx.seeds)?;
        if let Some(r) = &reference {
            r.save(dir.join(REFERENCE))?;
        }
        let header = SessionHeader {
            schema_version: SCHEMA_VERSION,
            id: id.clone(),
            config: ctx.config.clone(),
            resources_dir,
        };
        let mut ps = PersistentSession {
            header,
            dir,
            session,
            events: 0,
            snapshot_every: DEFAULT_SNAPSHOT_EVERY,
        };
        ps.append(&started)?;
        ps.snapshot()?;
        // The header goes last: a directory without it is not a session.
        write_atomic(&ps.dir.join(HEADER), &ps.header)?;
        Ok(ps)
    }

    /// Loads a session: the latest snapshot plus the events after it.
    pub fn load(&self, id: &str) -> Result<PersistentSession> {
        let dir = self.dir(id)?;
        let header_path = dir.join(HEADER);
        if !header_path.is_file() {
            return Err(Error::NotFound(format!("session `{id}`")));
        }
        let header: SessionHeader = read(&header_path)?;
        if header.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: header.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let ctx = Arc::new(load_context(&dir, &header)?);
        let log_path = dir.join(EVENTS);
        let events = read_events(&log_path)?;
        let on_disk = fs::read_to_string(&log_path).map(|t| t.lines().count()).unwrap_or(0);
        if on_disk != events.len() {
            rewrite_events(&log_path, &events)?;
        }
        let snapshot: Option<Snapshot> = match dir.join(SNAPSHOT) {
            p if p.is_file() => Some(read(&p)?),
            _ => None,
        };
        let session = match snapshot {
            Some(s) if s.events >= 1 && s.events <= events.len() => {
                let mut session = Session::resume(ctx, s.state);
                for e in &events[s.events..] {
                    session.apply(e)?;
                }
                session
            }
            _ => Session::replay(ctx, &events)?,
        };
        Ok(PersistentSession {
            header,
            dir,
            session,
            events: events.len(),
            snapshot_every: DEFAULT_SNAPSHOT_EVERY,
        })
    }
}

fn load_context(dir: &Path, header: &SessionHeader) -> Result<SessionContext> {
    let corpus = load_corpus(dir.join(CORPUS))?;
    let seeds = load_seeds_with(dir.join(SEEDS), &corpus, &header.config.wh_words)?;
    let resources = match &header.resources_dir {
        Some(d) => Resources::load_dir(d)?,
        None => Resources::default(),
    };
    SessionContext::new(corpus, seeds, Arc::new(resources), header.config.clone())
}

/// A session whose every state change is logged before it is acknowledged.
#[derive(Debug)]
pub struct PersistentSession {
    pub header: SessionHeader,
    dir: PathBuf,
    session: Session,
    events: usize,
    snapshot_every: usize,
}

impl PersistentSession {
    pub fn id(&self) -> &str {
        &self.header.id
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The reference stored with the session, if any.
    pub fn reference(&self) -> Result<Option<Reference>> {
        let path = self.dir.join(REFERENCE);
        if path.is_file() {
            Reference::load(path).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn event_count(&self) -> usize {
        self.events
    }

    pub fn set_snapshot_every(&mut self, n: usize) {
        self.snapshot_every = n.max(1);
    }

    fn append(&mut self, e: &Event) -> Result<()> {
        let path = self.dir.join(EVENTS);
        let mut line = serde_json::to_string(e).map_err(|err| json_err(&path, err))?;
        line.push('\n');
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|err| Error::io(&path, err))?;
        f.write_all(line.as_bytes()).map_err(|err| Error::io(&path, err))?;
        f.sync_data().map_err(|err| Error::io(&path, err))?;
        self.events += 1;
        Ok(())
    }

    /// Installs `next` once `e` is durably logged. A failed snapshot only
    /// costs replay time, so it is logged and ignored.
    fn commit(&mut self, next: Session, e: &Event) -> Result<()> {
        self.append(e)?;
        self.session = next;
        if self.events.is_multiple_of(self.snapshot_every) {
            if let Err(err) = self.snapshot() {
                warn!("snapshot of session {}: {err}", self.header.id);
            }
        }
        Ok(())
    }

    pub fn snapshot(&self) -> Result<()> {
        write_atomic(
            &self.dir.join(SNAPSHOT),
            &Snapshot {
                schema_version: SCHEMA_VERSION,
                events: self.events,
                state: self.session.state().clone(),
            },
        )
    }

    /// Applies a decision on a copy, logs it, then commits.
    pub fn submit(&mut self, decision: ReviewDecision) -> Result<Option<Event>> {
        let mut next = self.session.clone();
        let Some(e) = next.submit(decision)? else {
            return Ok(None);
        };
        self.commit(next, &e)?;
        Ok(Some(e))
    }

    pub fn advance(&mut self) -> Result<Event> {
        let mut next = self.session.clone();
        let e = next.advance()?;
        self.commit(next, &e)?;
        Ok(e)
    }
}
