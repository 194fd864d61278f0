//! On-disk Adem cache.
//!
//! ```text
//! ADEMCACHE 1
//! 1 1 :
//! 1 2 : 3 0
//! 2 2 : 3 1
//! 2 3 : 5 0 ; 4 1
//! ```
//!
//! Each record is the expansion of `Sq^a Sq^b` as admissible pairs `k l`,
//! with `l = 0` for a single square. Records are sorted by `(a, b)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use steenrod::serre_cartan::adem::{adem_memo_entries, seed_adem_memo};
use steenrod::serre_cartan::{AdmissibleSeq, Element};

pub const HEADER: &str = "ADEMCACHE 1";

pub fn render(entries: &[((u32, u32), Element)]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for ((a, b), e) in entries {
        let pairs: Vec<String> = e
            .terms()
            .map(|t| match t.entries() {
                [k] => format!("{k} 0"),
                [k, l] => format!("{k} {l}"),
                other => unreachable!("Adem term of length {}", other.len()),
            })
            .collect();
        let _ = if pairs.is_empty() {
            writeln!(out, "{a} {b} :")
        } else {
            writeln!(out, "{a} {b} : {}", pairs.join(" ; "))
        };
    }
    out
}

pub fn parse(text: &str) -> Result<Vec<((u32, u32), Element)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        Some(h) => bail!("unsupported header {h:?}"),
        None => bail!("empty file"),
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = n + 2;
        let (key, body) = line
            .split_once(':')
            .with_context(|| format!("line {lineno}: missing ':'"))?;
        let key: Vec<u32> = numbers(key).with_context(|| format!("line {lineno}"))?;
        let [a, b] = key[..] else {
            bail!("line {lineno}: expected two key entries");
        };
        let mut terms = Vec::new();
        for pair in body.split(';').filter(|p| !p.trim().is_empty()) {
            let v = numbers(pair).with_context(|| format!("line {lineno}"))?;
            let entries = match v[..] {
                [k, 0] => vec![k],
                [k, l] => vec![k, l],
                _ => bail!("line {lineno}: expected pairs `k l`"),
            };
            terms.push(AdmissibleSeq::new(&entries).with_context(|| format!("line {lineno}"))?);
        }
        let e = Element::from_terms(a + b, terms).with_context(|| format!("line {lineno}"))?;
        out.push(((a, b), e));
    }
    if !out.windows(2).all(|w| w[0].0 < w[1].0) {
        bail!("records are not sorted by (a, b)");
    }
    Ok(out)
}

fn numbers(s: &str) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .with_context(|| format!("bad number {t:?}"))
        })
        .collect()
}

/// Seeds the Adem table from `path`. A missing file is silent; an unreadable,
/// corrupt or mismatched one is reported and ignored. Returns the number of
/// records loaded.
pub fn load(path: &Path) -> usize {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return 0,
        Err(e) => {
            eprintln!("warning: ignoring Adem cache {}: {e}", path.display());
            return 0;
        }
    };
    match parse(&text).and_then(|entries| Ok(seed_adem_memo(entries)?)) {
        Ok(n) => n,
        Err(e) => {
            eprintln!(
                "warning: ignoring Adem cache {}: {e:#}; it will be rebuilt",
                path.display()
            );
            0
        }
    }
}

/// Writes the current Adem table to `path` if it grew past `loaded` records.
pub fn store(path: &Path, loaded: usize) -> Result<()> {
    let entries = adem_memo_entries();
    if entries.len() <= loaded {
        return Ok(());
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, render(&entries))?;
    fs::rename(&tmp, path)?;
    Ok(())
}
