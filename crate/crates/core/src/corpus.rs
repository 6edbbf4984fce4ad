//! Question-bank ingestion, deterministic permutation and prefixes.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// One question record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    /// Full record text, byte-identical to the ingested input.
    pub raw_text: String,
    /// Normalized terms; empty until preprocessing.
    pub tokens: Vec<String>,
    /// Names of tag rules that fired on this document.
    pub applied_tags: BTreeSet<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, raw_text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            raw_text: raw_text.into(),
            tokens: Vec::new(),
            applied_tags: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    /// One record per block of lines; blocks separated by blank lines.
    PlainText,
    /// CSV with an `id,text` header.
    DelimitedTable,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain_text" | "txt" => Ok(InputFormat::PlainText),
            "delimited_table" | "csv" => Ok(InputFormat::DelimitedTable),
            other => Err(Error::InvalidArgument(format!(
                "unknown corpus format {other:?} (expected plain_text or delimited_table)"
            ))),
        }
    }
}

/// An ordered, non-empty collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub name: String,
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, documents: Vec<Document>) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Self {
            name: name.into(),
            documents,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.documents.iter().map(|d| d.id.as_str())
    }

    /// Applies `f` to every document, keeping order.
    pub fn map_documents(&self, f: impl Fn(&Document) -> Document) -> Corpus {
        Corpus {
            name: self.name.clone(),
            documents: self.documents.iter().map(f).collect(),
        }
    }

    /// Uniform random reordering driven only by `seed`.
    pub fn permute(&self, seed: u64) -> Corpus {
        let order = rng::permutation(self.documents.len(), seed);
        Corpus {
            name: self.name.clone(),
            documents: order.iter().map(|&i| self.documents[i].clone()).collect(),
        }
    }

    /// The first `n` documents.
    pub fn prefix(&self, n: usize) -> Result<Corpus> {
        if n == 0 || n > self.documents.len() {
            return Err(Error::PrefixOutOfRange {
                n,
                size: self.documents.len(),
            });
        }
        Ok(Corpus {
            name: self.name.clone(),
            documents: self.documents[..n].to_vec(),
        })
    }
}

/// Reads a question bank from disk.
///
/// Records without an id get `<id_prefix><1-based index>`.
pub fn load_corpus(path: impl AsRef<Path>, format: InputFormat, id_prefix: &str) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let records = match format {
        InputFormat::PlainText => split_blocks(&text)
            .into_iter()
            .map(|block| (None, block.to_owned()))
            .collect(),
        InputFormat::DelimitedTable => parse_table(path, &text)?,
    };
    let documents = records
        .into_iter()
        .enumerate()
        .map(|(i, (id, text))| {
            let id = id.unwrap_or_else(|| format!("{id_prefix}{}", i + 1));
            Document::new(id, text)
        })
        .collect::<Vec<_>>();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Corpus::new(name, documents)
}

/// Splits on runs of blank (whitespace-only) lines. Each block is a slice
/// of the input from its first line's start to its last line's end.
fn split_blocks(text: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.trim_end_matches(['\n', '\r']);
        if content.trim().is_empty() {
            if let Some(s) = start.take() {
                blocks.push(&text[s..end]);
            }
        } else {
            if start.is_none() {
                start = Some(offset);
            }
            end = offset + content.len();
        }
        offset += line.len();
    }
    if let Some(s) = start {
        blocks.push(&text[s..end]);
    }
    blocks
}

fn parse_table(path: &Path, text: &str) -> Result<Vec<(Option<String>, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .comment(None)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| parse_err(csv_line(&e).unwrap_or(1), e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (id_col, text_col) = match (column("id"), column("text")) {
        (Some(i), Some(t)) => (i, t),
        _ => {
            return Err(parse_err(
                1,
                format!(
                    "expected header `id,text`, found `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            ))
        }
    };
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = csv_line(&e).unwrap_or(0);
            let message = match e.kind() {
                csv::ErrorKind::UnequalLengths {
                    expected_len, len, ..
                } => format!("expected {expected_len} columns, found {len}"),
                _ => e.to_string(),
            };
            parse_err(line, message)
        })?;
        let id = row.get(id_col).unwrap_or_default();
        let id = (!id.is_empty()).then(|| id.to_owned());
        records.push((id, row.get(text_col).unwrap_or_default().to_owned()));
    }
    Ok(records)
}

/// Writes `id,text` rows that [`load_corpus`] reads back unchanged.
pub fn write_table<W: std::io::Write>(corpus: &Corpus, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["id", "text"])?;
    for doc in corpus.documents() {
        writer.write_record([doc.id.as_str(), doc.raw_text.as_str()])?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_line(e: &csv::Error) -> Option<u64> {
    e.position().map(|p| p.line())
}
