//! Reading documents and term dictionaries from disk.

use std::fs;
use std::path::{Path, PathBuf};

use eqsim_core::{
    apply_phrase_exclusions, parse_document_bytes, Document, ParseOptions, TermDictionary,
};

use crate::error::{Error, Result};

/// Environment variable naming the default term dictionary.
pub const TERMS_ENV: &str = "EQSIM_TERMS";

pub fn load_document(path: &Path, options: &ParseOptions) -> Result<Document> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_document_bytes(&bytes, options)
        .map(|d| d.with_source_id(path.display().to_string()))
        .map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })
}

/// Load a document and apply the dictionary's exclusions to it.
pub fn load_with_terms(
    path: &Path,
    options: &ParseOptions,
    terms: &TermDictionary,
) -> Result<Document> {
    let doc = load_document(path, options)?;
    Ok(if terms.is_empty() {
        doc
    } else {
        apply_phrase_exclusions(&doc, terms)
    })
}

/// The dictionary at `path`, else the one named by `EQSIM_TERMS`, else an
/// empty dictionary.
pub fn load_terms(path: Option<&Path>) -> Result<TermDictionary> {
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => match std::env::var_os(TERMS_ENV) {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => return Ok(TermDictionary::default()),
        },
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(TermDictionary::parse(&text))
}

/// Regular files directly inside `dir`, sorted by name.
pub fn list_documents(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.file_type().map(|t| t.is_file()).unwrap_or(false) {
            out.push(entry.path());
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(Error::EmptyDir(dir.to_path_buf()));
    }
    Ok(out)
}
