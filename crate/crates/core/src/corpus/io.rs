use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{default_windows, Corpus, RawTriplet, RawTweet, RawWindow, TimeWindow};
use crate::error::{Error, Result};

/// Supplies raw corpus records. Implement this to ingest formats other than JSONL.
pub trait CorpusSource {
    fn windows(&self) -> Result<Vec<TimeWindow>>;
    fn tweets(&self) -> Result<Vec<RawTweet>>;
    fn triplets(&self) -> Result<Vec<RawTriplet>>;
}

/// Directory holding `tweets.jsonl`, `triplets.jsonl` and optionally `windows.json`.
#[derive(Clone, Debug)]
pub struct JsonlSource {
    dir: PathBuf,
}

impl JsonlSource {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        JsonlSource { dir: dir.into() }
    }
}

impl CorpusSource for JsonlSource {
    fn windows(&self) -> Result<Vec<TimeWindow>> {
        let path = self.dir.join("windows.json");
        if !path.exists() {
            return Ok(default_windows());
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let raw: Vec<RawWindow> = serde_json::from_str(&text).map_err(|e| Error::Malformed {
            file: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })?;
        Ok(raw
            .into_iter()
            .enumerate()
            .map(|(id, w)| TimeWindow {
                id,
                name: w.name,
                start: w.start,
                end: w.end,
            })
            .collect())
    }

    fn tweets(&self) -> Result<Vec<RawTweet>> {
        read_jsonl(&self.dir.join("tweets.jsonl"))
    }

    fn triplets(&self) -> Result<Vec<RawTriplet>> {
        read_jsonl(&self.dir.join("triplets.jsonl"))
    }
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let src = JsonlSource::new(path.as_ref());
    Corpus::assemble(src.windows()?, src.tweets()?, src.triplets()?)
}

pub(crate) fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            file: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub(crate) fn write_jsonl<T: Serialize>(path: &Path, records: impl IntoIterator<Item = T>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a corpus in the JSONL interchange layout.
pub fn write_corpus(dir: impl AsRef<Path>, corpus: &Corpus) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let windows: Vec<RawWindow> = corpus.windows.iter().map(RawWindow::from).collect();
    let path = dir.join("windows.json");
    fs::write(&path, serde_json::to_string_pretty(&windows)? + "\n").map_err(|e| Error::io(&path, e))?;
    write_jsonl(
        &dir.join("tweets.jsonl"),
        corpus.tweets.values().map(|t| RawTweet {
            tweet_id: t.tweet_id.clone(),
            user_id: t.user_id.clone(),
            text: t.text.clone(),
            timestamp: t.timestamp,
        }),
    )?;
    write_jsonl(
        &dir.join("triplets.jsonl"),
        corpus.triplets.iter().map(|t| RawTriplet {
            user_id: t.user_id.clone(),
            window: Some(t.window),
            tweet_ids: t.tweet_ids.to_vec(),
            judgments: t.judgments.clone(),
            confidence: t.confidence,
        }),
    )
}
