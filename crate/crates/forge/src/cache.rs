//! On-disk cache of discrete-log tables.
//!
//! File layout, all integers little-endian u32: magic `GFTB`, p, n, the
//! number of modulus coefficients followed by the coefficients (constant
//! term first), q−1 followed by the exponent table, q followed by the log
//! table (`u32::MAX` at zero).

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use unital_core::{Elem, Field, GfError};

const MAGIC: &[u8; 4] = b"GFTB";

#[derive(Debug)]
pub enum CacheError {
    Io(io::Error),
    Format(&'static str),
    Field(GfError),
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache io: {e}"),
            CacheError::Format(what) => write!(f, "malformed table file: {what}"),
            CacheError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<io::Error> for CacheError {
    fn from(e: io::Error) -> Self {
        CacheError::Io(e)
    }
}

impl From<GfError> for CacheError {
    fn from(e: GfError) -> Self {
        CacheError::Field(e)
    }
}

pub fn encode(field: &Field) -> Vec<u8> {
    let q = field.order();
    let mut words = vec![field.characteristic(), field.degree(), field.modulus().len() as u32];
    words.extend_from_slice(field.modulus());
    words.push(q - 1);
    words.extend_from_slice(field.exp_table());
    words.push(q);
    words.extend((0..q).map(|x| field.log(Elem(x)).map_or(u32::MAX, |l| l as u32)));
    let mut out = MAGIC.to_vec();
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn word(&mut self) -> Result<u32, CacheError> {
        let (head, rest) = self.0.split_first_chunk::<4>().ok_or(CacheError::Format("truncated"))?;
        self.0 = rest;
        Ok(u32::from_le_bytes(*head))
    }

    fn words(&mut self, n: usize) -> Result<Vec<u32>, CacheError> {
        if self.0.len() < 4 * n {
            return Err(CacheError::Format("truncated"));
        }
        (0..n).map(|_| self.word()).collect()
    }
}

pub fn decode(bytes: &[u8]) -> Result<Field, CacheError> {
    let body = bytes.strip_prefix(MAGIC).ok_or(CacheError::Format("bad magic"))?;
    let mut r = Reader(body);
    let (p, n) = (r.word()?, r.word()?);
    let m = r.word()? as usize;
    let modulus = r.words(m)?;
    let e = r.word()? as usize;
    let exp = r.words(e)?;
    let l = r.word()? as usize;
    let log = r.words(l)?;
    if !r.0.is_empty() {
        return Err(CacheError::Format("trailing bytes"));
    }
    let field = Field::from_tables(p, n, modulus, exp)?;
    let consistent = log.len() == field.order() as usize
        && (0..field.order()).all(|x| field.log(Elem(x)).map_or(u32::MAX, |v| v as u32) == log[x as usize]);
    if !consistent {
        return Err(CacheError::Format("log table disagrees with exponent table"));
    }
    Ok(field)
}

/// Directory of table files. Loading is verified, and a damaged file is
/// rebuilt, so results never depend on the cache.
pub struct TableCache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<TableCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(TableCache { dir, hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, p: u32, n: u32) -> PathBuf {
        self.dir.join(format!("gf-{p}-{n}.gftb"))
    }

    pub fn field(&self, p: u32, n: u32) -> Result<Field, CacheError> {
        let path = self.path(p, n);
        if let Ok(bytes) = fs::read(&path) {
            if let Ok(field) = decode(&bytes) {
                if field.characteristic() == p && field.degree() == n {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(field);
                }
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let field = Field::new(p, n)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, encode(&field))?;
        fs::rename(&tmp, &path)?;
        Ok(field)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}
