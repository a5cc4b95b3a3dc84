//! Append-only on-disk cache for integer factorizations and `x^n - 1`
//! factor counts.
//!
//! One record per line:
//!
//! ```text
//! 4095,3^2,5^1,7^1,13^1,true     factorization (value, prime powers, complete)
//! 2,3,2                          factor count of x^3 - 1 over F_2
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::integer::IntFactorization;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "MMFORGE_CACHE";

#[derive(Default)]
pub struct Cache {
    factors: RwLock<HashMap<BigUint, IntFactorization>>,
    cyclo: RwLock<HashMap<(u64, u64), u64>>,
    writer: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl std::fmt::Debug for Cache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cache").field("path", &self.path).finish()
    }
}

fn parse_u64(s: &str, line: usize) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Cache(format!("line {line}: bad integer `{s}`")))
}

fn parse_big(s: &str, line: usize) -> Result<BigUint> {
    s.trim().parse().map_err(|_| Error::Cache(format!("line {line}: bad integer `{s}`")))
}

impl Cache {
    /// An in-memory cache that never touches disk.
    pub fn in_memory() -> Self {
        Cache::default()
    }

    /// Loads `path` (creating it if missing) and appends new records to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cache = Cache::default();
        if path.exists() {
            let file = File::open(path).map_err(|e| Error::Cache(e.to_string()))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| Error::Cache(e.to_string()))?;
                cache.load_line(&line, i + 1)?;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        cache.writer = Some(Mutex::new(file));
        cache.path = Some(path.to_path_buf());
        Ok(cache)
    }

    /// Opens the file named by `explicit`, falling back to `$MMFORGE_CACHE`.
    /// The environment variable wins when both are set.
    pub fn from_config(explicit: Option<&Path>) -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Cache::open(PathBuf::from(p)).map(Some),
            _ => explicit.map(Cache::open).transpose(),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    fn load_line(&mut self, line: &str, lineno: usize) -> Result<()> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(());
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let last = *fields.last().unwrap();
        if last == "true" || last == "false" {
            let value = parse_big(fields[0], lineno)?;
            let mut primes = Vec::new();
            for pe in &fields[1..fields.len() - 1] {
                let (p, e) = pe
                    .split_once('^')
                    .ok_or_else(|| Error::Cache(format!("line {lineno}: expected p^e, got `{pe}`")))?;
                let e = u32::try_from(parse_u64(e, lineno)?)
                    .map_err(|_| Error::Cache(format!("line {lineno}: exponent too large")))?;
                primes.push((parse_big(p, lineno)?, e));
            }
            let complete = last == "true";
            let known = primes.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            if known.bits() == 0 || &value % &known != BigUint::default() {
                return Err(Error::Cache(format!("line {lineno}: factors do not divide {value}")));
            }
            let cofactor = &value / &known;
            if complete != cofactor.is_one() {
                return Err(Error::Cache(format!("line {lineno}: inconsistent completeness flag")));
            }
            if complete {
                let f = IntFactorization { value: value.clone(), primes, cofactor, complete };
                self.factors.get_mut().unwrap().insert(value, f);
            }
        } else if fields.len() == 3 {
            let q = parse_u64(fields[0], lineno)?;
            let n = parse_u64(fields[1], lineno)?;
            let count = parse_u64(fields[2], lineno)?;
            self.cyclo.get_mut().unwrap().insert((q, n), count);
        } else {
            return Err(Error::Cache(format!("line {lineno}: unrecognized record `{line}`")));
        }
        Ok(())
    }

    fn append(&self, record: &str) -> Result<()> {
        if let Some(w) = &self.writer {
            let mut file = w.lock().unwrap();
            writeln!(file, "{record}").map_err(|e| Error::Cache(e.to_string()))?;
        }
        Ok(())
    }

    pub fn factorization(&self, m: &BigUint) -> Option<IntFactorization> {
        self.factors.read().unwrap().get(m).cloned()
    }

    /// Stores a complete factorization; incomplete ones are ignored.
    pub fn record_factorization(&self, f: &IntFactorization) -> Result<()> {
        if !f.complete {
            return Ok(());
        }
        let fresh = self.factors.write().unwrap().insert(f.value.clone(), f.clone()).is_none();
        if fresh {
            let mut rec = f.value.to_string();
            for (p, e) in &f.primes {
                rec.push_str(&format!(",{p}^{e}"));
            }
            rec.push_str(",true");
            self.append(&rec)?;
        }
        Ok(())
    }

    pub fn cyclo_count(&self, q: u64, n: u64) -> Option<u64> {
        self.cyclo.read().unwrap().get(&(q, n)).copied()
    }

    pub fn record_cyclo_count(&self, q: u64, n: u64, count: u64) -> Result<()> {
        let fresh = self.cyclo.write().unwrap().insert((q, n), count).is_none();
        if fresh {
            self.append(&format!("{q},{n},{count}"))?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.factors.read().unwrap().len() + self.cyclo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
