//! Append-only text cache of exact records.
//!
//! One record per line, tab-separated: kind, parameters, lower, upper,
//! status, witness (`;`-separated little-endian hex vectors, or `-`), trace
//! (`,`-separated tags). The last trace tag is `sha256=<hex>` over the
//! preceding fields, so any edit to a line is detected.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::record::{ConstantRecord, Quantity, Status, TraceStep};

const DIGEST_PREFIX: &str = "sha256=";

fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn trace_tags(trace: &[TraceStep]) -> Vec<String> {
    let mut tags: Vec<String> = Vec::new();
    for t in trace {
        if !tags.contains(&t.tag) {
            tags.push(t.tag.clone());
        }
    }
    if tags.is_empty() {
        tags.push("unspecified".into());
    }
    tags
}

/// The cache line for `record`, without a trailing newline.
#[must_use]
pub fn encode(record: &ConstantRecord) -> String {
    let witness = record.witness.as_ref().map_or_else(
        || "-".to_string(),
        |w| w.iter().map(BitVector::to_hex_le).collect::<Vec<_>>().join(";"),
    );
    let body = format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        record.quantity.kind(),
        record.quantity.params(),
        record.lower,
        record.upper,
        record.status,
        witness,
        trace_tags(&record.trace).join(","),
    );
    let sum = digest(&body);
    format!("{body},{DIGEST_PREFIX}{sum}")
}

/// Parses one line and checks its digest; the witness is not revalidated.
pub fn decode(line: &str) -> Result<ConstantRecord> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 7 {
        return Err(Error::Parse(format!("expected 7 fields, found {}", fields.len())));
    }
    let (body, sum) = line
        .rsplit_once(&format!(",{DIGEST_PREFIX}"))
        .ok_or_else(|| Error::Parse("missing digest tag".into()))?;
    if digest(body) != sum {
        return Err(Error::Parse("digest mismatch: the line was modified".into()));
    }
    let quantity = Quantity::from_kind_params(fields[0], fields[1])?;
    let num = |s: &str| s.parse::<u64>().map_err(|e| Error::Parse(format!("bound {s:?}: {e}")));
    let (lower, upper) = (num(fields[2])?, num(fields[3])?);
    let status: Status = fields[4].parse()?;
    let witness = if fields[5] == "-" {
        None
    } else {
        let dim = quantity
            .witness_dim()
            .ok_or_else(|| Error::Parse(format!("{} records carry no witness", quantity.kind())))?;
        Some(
            fields[5]
                .split(';')
                .map(|h| BitVector::from_hex_le(dim, h))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let trace = fields[6]
        .split(',')
        .filter(|t| !t.starts_with(DIGEST_PREFIX))
        .map(TraceStep::tag_only)
        .collect();
    if lower > upper {
        return Err(Error::Parse(format!("lower {lower} exceeds upper {upper}")));
    }
    Ok(ConstantRecord {
        quantity,
        lower,
        upper,
        status,
        witness,
        trace,
    })
}

/// Outcome of reading one cache line.
#[derive(Clone, Debug)]
pub struct CacheLine {
    /// 1-based line number in the file.
    pub line: usize,
    pub record: Result<ConstantRecord>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    #[must_use]
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    #[must_use]
    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends `record` if it is exact; returns whether it was written.
    pub fn append(&self, record: &ConstantRecord) -> Result<bool> {
        if !record.is_exact() {
            return Ok(false);
        }
        record.validate()?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{}", encode(record))?;
        Ok(true)
    }

    /// Reads and fully revalidates every line. A missing file is empty.
    pub fn read(&self) -> Result<Vec<CacheLine>> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record = decode(&line)
                .and_then(|r| r.validate().map(|()| r))
                .map_err(|e| Error::Cache {
                    line: i + 1,
                    reason: e.to_string(),
                });
            out.push(CacheLine { line: i + 1, record });
        }
        Ok(out)
    }

    /// Records that passed revalidation.
    pub fn trusted(&self) -> Result<Vec<ConstantRecord>> {
        Ok(self.read()?.into_iter().filter_map(|l| l.record.ok()).collect())
    }

    /// The trusted record for `q`, if any.
    pub fn lookup(&self, q: &Quantity) -> Result<Option<ConstantRecord>> {
        Ok(self.trusted()?.into_iter().find(|r| &r.quantity == q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerosum::WeightSet;

    fn sample() -> ConstantRecord {
        let e = |v| BitVector::from_u64(2, v);
        ConstantRecord::exact(
            Quantity::beta(WeightSet::single(2), 2),
            3,
            Some(vec![e(0), e(1), e(2)]),
            vec![TraceStep::new("search", "x"), TraceStep::new("search", "y")],
        )
    }

    #[test]
    fn round_trip() {
        let line = encode(&sample());
        assert!(line.starts_with("beta\tW=4;d=2\t3\t3\texact\t00;01;02\tsearch,sha256="));
        let back = decode(&line).unwrap();
        assert_eq!(back.quantity, sample().quantity);
        assert_eq!(back.witness, sample().witness);
        assert!(back.validate().is_ok());
    }

    #[test]
    fn tampering_is_detected() {
        let line = encode(&sample());
        let tampered = line.replacen("00;01;02", "00;01;03", 1);
        assert!(decode(&tampered).is_err());
        assert!(decode("beta\tW=4;d=2").is_err());
    }
}
