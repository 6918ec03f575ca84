//! Text and word2vec-binary vector file formats.

use std::io::{BufRead, ErrorKind, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use super::VecStore;
use crate::error::{Error, Result};

/// Whether a text vector file starts with a `vocabsize dim` line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Header {
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorFormat {
    /// Headerless text, GloVe style.
    Text,
    /// Text with a `vocabsize dim` first line, word2vec style.
    TextHeader,
    /// word2vec binary.
    Binary,
}

impl VectorFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" | "glove" => Some(VectorFormat::Text),
            "text-header" | "word2vec-text" => Some(VectorFormat::TextHeader),
            "binary" | "word2vec-binary" | "bin" => Some(VectorFormat::Binary),
            _ => None,
        }
    }

    pub fn load<R: BufRead>(self, reader: R) -> Result<VecStore> {
        match self {
            VectorFormat::Text => load_text_embeddings(reader, Header::Absent),
            VectorFormat::TextHeader => load_text_embeddings(reader, Header::Present),
            VectorFormat::Binary => load_binary_embeddings(reader),
        }
    }

    pub fn load_path(self, path: impl AsRef<std::path::Path>) -> Result<VecStore> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::in_file(path, e.into()))?;
        self.load(std::io::BufReader::new(file))
            .map_err(|e| Error::in_file(path, e))
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let (Some(n), Some(d), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(Error::parse(lineno, format!("expected \"vocabsize dim\" header, got {line:?}")));
    };
    let n = n
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad vocabulary size {n:?}")))?;
    let d = d
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad dimension {d:?}")))?;
    Ok((n, d))
}

/// Reads whitespace-separated `word v1 v2 … vD` lines.
pub fn load_text_embeddings<R: BufRead>(reader: R, header: Header) -> Result<VecStore> {
    let mut words = Vec::new();
    let mut data = Vec::new();
    let mut dim: Option<usize> = None;
    let mut declared_len = None;
    let mut seen = std::collections::HashSet::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if header == Header::Present && lineno == 1 {
            let (n, d) = parse_header(&line, lineno)?;
            if d == 0 {
                return Err(Error::parse(lineno, "dimension must be positive"));
            }
            dim = Some(d);
            declared_len = Some(n);
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-blank line has a field");
        let start = data.len();
        for f in fields {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad number {f:?}")))?;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("line {lineno}: {f}")));
            }
            data.push(v);
        }
        let found = data.len() - start;
        let expected = *dim.get_or_insert(found);
        if found != expected || found == 0 {
            return Err(Error::DimensionMismatch {
                line: lineno,
                expected,
                found,
            });
        }
        if !seen.insert(word.to_string()) {
            return Err(Error::DuplicateWord {
                line: lineno,
                word: word.to_string(),
            });
        }
        words.push(word.to_string());
    }

    if words.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(n) = declared_len {
        if n != words.len() {
            return Err(Error::SizeMismatch(format!(
                "header declares {n} words, file has {}",
                words.len()
            )));
        }
    }
    VecStore::from_rows(words, data, dim.unwrap_or(0))
}

/// Writes `word v1 … vD` lines, optionally preceded by a header.
///
/// Values use the shortest representation that parses back to the same `f64`.
pub fn store_text_embeddings<W: Write>(store: &VecStore, header: Header, mut sink: W) -> Result<()> {
    if header == Header::Present {
        writeln!(sink, "{} {}", store.len(), store.dim())?;
    }
    for (word, row) in store.words().iter().zip(store.rows()) {
        check_word(word)?;
        sink.write_all(word.as_bytes())?;
        for v in row {
            write!(sink, " {v}")?;
        }
        sink.write_all(b"\n")?;
    }
    Ok(())
}

fn check_word(word: &str) -> Result<()> {
    if word.is_empty() || word.bytes().any(|b| b == b' ' || b == b'\n') {
        return Err(Error::InvalidWord(word.to_string()));
    }
    Ok(())
}

fn read_until_byte<R: BufRead>(reader: &mut R, delim: u8, what: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    reader.read_until(delim, &mut buf)?;
    if buf.last() != Some(&delim) {
        return Err(Error::Truncated(format!("stream ended inside {what}")));
    }
    buf.pop();
    Ok(buf)
}

/// Reads the word2vec binary format: an ASCII `vocabsize dim\n` header, then
/// per word the word bytes, one space, and `dim` little-endian `f32`s.
pub fn load_binary_embeddings<R: BufRead>(mut reader: R) -> Result<VecStore> {
    let header = read_until_byte(&mut reader, b'\n', "header")?;
    let header = String::from_utf8(header).map_err(|_| Error::parse(1, "header is not UTF-8"))?;
    let (n, dim) = parse_header(&header, 1)?;
    if n == 0 {
        return Err(Error::Empty);
    }
    if dim == 0 {
        return Err(Error::parse(1, "dimension must be positive"));
    }

    let mut words = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        // Tolerate the newline some writers put after each vector.
        loop {
            let buf = reader.fill_buf()?;
            match buf.first() {
                Some(b'\n') => reader.consume(1),
                Some(_) => break,
                None => {
                    return Err(Error::Truncated(format!(
                        "expected {n} words, stream ended after {i}"
                    )))
                }
            }
        }
        let word = read_until_byte(&mut reader, b' ', "a word")?;
        let word = String::from_utf8(word)
            .map_err(|_| Error::parse(i + 2, format!("word {} is not UTF-8", i + 1)))?;
        for _ in 0..dim {
            let v = reader.read_f32::<LittleEndian>().map_err(|e| {
                if e.kind() == ErrorKind::UnexpectedEof {
                    Error::Truncated(format!("stream ended inside the vector of {word:?}"))
                } else {
                    e.into()
                }
            })?;
            data.push(f64::from(v));
        }
        words.push(word);
    }

    let mut rest = Vec::new();
    reader.read_to_end(&mut rest)?;
    if rest.iter().any(|&b| b != b'\n') {
        return Err(Error::SizeMismatch(format!(
            "{} unexpected bytes after {n} declared words",
            rest.len()
        )));
    }
    VecStore::from_rows(words, data, dim)
}

/// Writes the word2vec binary format read by [`load_binary_embeddings`].
///
/// Values are narrowed to `f32`. Each vector is followed by `\n`.
pub fn store_binary_embeddings<W: Write>(store: &VecStore, mut sink: W) -> Result<()> {
    for word in store.words() {
        check_word(word)?;
    }
    writeln!(sink, "{} {}", store.len(), store.dim())?;
    for (word, row) in store.words().iter().zip(store.rows()) {
        sink.write_all(word.as_bytes())?;
        sink.write_all(b" ")?;
        for &v in row {
            sink.write_f32::<LittleEndian>(v as f32)?;
        }
        sink.write_all(b"\n")?;
    }
    Ok(())
}
