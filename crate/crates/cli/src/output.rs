//! CSV tables and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tagcluster_core::Assignment;

use crate::error::CliError;

/// Writes `#`-prefixed comment lines, then a header row, then `rows`.
pub fn write_csv<I, R>(
    path: &Path,
    comments: &[String],
    header: &[&str],
    rows: I,
) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut file = fs::File::create(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    for line in comments {
        writeln!(file, "# {line}").map_err(|e| CliError::Io(path.to_owned(), e))?;
    }
    let mut writer = csv::Writer::from_writer(file);
    let csv_err = |e| CliError::Csv(path.to_owned(), e);
    writer.write_record(header).map_err(csv_err)?;
    for row in rows {
        writer.write_record(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Reads an `id,topic,...` table, skipping comment lines.
pub fn read_assignment(path: &Path) -> Result<Assignment, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Csv(path.to_owned(), e))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Csv(path.to_owned(), e))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("{}: no `{name}` column", path.display())))
    };
    let (id_col, topic_col) = (col("id")?, col("topic")?);
    let mut assignment = Assignment::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::Csv(path.to_owned(), e))?;
        let line = row.position().map_or(0, |p| p.line());
        let topic = row[topic_col].trim().parse().map_err(|_| {
            CliError::Config(format!(
                "{}:{line}: bad topic {:?}",
                path.display(),
                &row[topic_col]
            ))
        })?;
        if assignment.get(&row[id_col]).is_some() {
            return Err(CliError::Config(format!(
                "{}:{line}: duplicate id {:?}",
                path.display(),
                &row[id_col]
            )));
        }
        assignment.insert(&row[id_col], topic);
    }
    Ok(assignment)
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub subcommand: String,
    pub version: String,
    pub config: C,
    pub stages: Vec<StageTiming>,
    pub outputs: Vec<OutputDigest>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn digests(dir: &Path, files: &[PathBuf]) -> Result<Vec<OutputDigest>, CliError> {
    files
        .iter()
        .map(|f| {
            Ok(OutputDigest {
                file: f.strip_prefix(dir).unwrap_or(f).display().to_string(),
                sha256: sha256_file(f)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_precede_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        let rows = vec![
            vec!["Q1".to_string(), "3".into(), "0.5".into()],
            vec!["Q,2".into(), "0".into(), "1".into()],
        ];
        write_csv(
            &path,
            &["seed=4".into()],
            &["id", "topic", "top_topic_prob"],
            rows,
        )
        .unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "# seed=4\nid,topic,top_topic_prob\nQ1,3,0.5\n\"Q,2\",0,1\n"
        );
        let a = read_assignment(&path).unwrap();
        assert_eq!(a.get("Q1"), Some(3));
        assert_eq!(a.get("Q,2"), Some(0));
    }

    #[test]
    fn digest_of_known_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x");
        fs::write(&path, b"abc").unwrap();
        assert_eq!(
            sha256_file(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
