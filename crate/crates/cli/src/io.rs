// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mcsort::{Trit, TritVec};

/// Write `text` to `out`, or to stdout when `out` is `None`. Files are
/// written through a temporary in the same directory and renamed into
/// place, so readers never see a partial artifact.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        return Ok(stdout.flush()?);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot write to directory {:?}", dir.display().to_string()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| anyhow!("cannot write {:?}: {}", path.display().to_string(), e.error))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {:?}", path.display().to_string()))
}

/// Trits of a `0`/`1`/`M` literal of any length.
pub fn parse_trits(tok: &str) -> Result<Vec<Trit>> {
    if tok.is_empty() {
        bail!("malformed trit literal \"\": empty");
    }
    tok.chars()
        .map(|c| {
            Trit::from_char(c).map_err(|_| anyhow!("malformed trit literal {tok:?}: {c:?} is not 0, 1 or M"))
        })
        .collect()
}

pub fn parse_vec(tok: &str) -> Result<TritVec> {
    let t = parse_trits(tok)?;
    TritVec::from_trits(&t).map_err(|e| anyhow!("trit literal {tok:?}: {e}"))
}

pub fn render(trits: &[Trit]) -> String {
    trits.iter().map(|t| t.to_char()).collect()
}
