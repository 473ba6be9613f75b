//! On-disk cache of poset dumps and Betti vectors.
//!
//! Entries are keyed by a SHA-256 of the generators, `p`, the reduction
//! pipeline and the homology options. The key depends on the generating
//! set as written, so the same group given by different generators gets a
//! separate entry. Each record starts with a version stamp; records from
//! another version are ignored and overwritten.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use quillen_core::analysis::Pipeline;
use quillen_core::homology::{BettiOptions, BettiResult};
use quillen_core::permgroup::PermGroup;
use quillen_core::{Error, Result};

const STAMP: &str = concat!("quillen-cache 1 ", env!("CARGO_PKG_VERSION"));

/// What a command needs from a poset computation, without the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub f_vector: Vec<u64>,
    pub betti: BettiResult,
    pub p_rank: u32,
    pub components: usize,
    pub chi_classes: Option<BigInt>,
}

pub fn key(group: &PermGroup, p: u32, pipeline: Pipeline, options: &BettiOptions) -> String {
    let mut h = Sha256::new();
    h.update(STAMP.as_bytes());
    h.update(format!("\ndegree {}\n", group.degree()).as_bytes());
    for g in group.generators() {
        h.update(g.to_cycle_string().as_bytes());
        h.update(b"\n");
    }
    h.update(
        format!(
            "p {p}\ncore {}\ncone {}\nbackend {:?}\nprimes {}\nseed {}\nfallback {}\n",
            pipeline.core,
            pipeline.cone,
            options.backend,
            options.primes,
            options.seed,
            options.exact_fallback
        )
        .as_bytes(),
    );
    h.finalize().iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Result<Cache> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Io(format!("cache directory {}: {e}", dir.display())))?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn path(&self, key: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{key}.{ext}"))
    }

    /// The stored record, if present and written by this version.
    pub fn load(&self, key: &str) -> Option<Record> {
        let text = std::fs::read_to_string(self.path(key, "betti")).ok()?;
        parse_record(&text)
    }

    pub fn store(&self, key: &str, record: &Record, dump: &str) -> Result<()> {
        let write = |path: PathBuf, text: &str| {
            std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        };
        write(self.path(key, "poset"), dump)?;
        write(self.path(key, "betti"), &format_record(record))
    }

    pub fn dump(&self, key: &str) -> Option<String> {
        std::fs::read_to_string(self.path(key, "poset")).ok()
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn format_record(r: &Record) -> String {
    format!(
        "{STAMP}\nf_vector {}\nreduced {}\nminus_one {}\nbackend {}\np_rank {}\ncomponents {}\nchi_classes {}\n",
        join(&r.f_vector),
        join(&r.betti.reduced),
        r.betti.minus_one,
        r.betti.backend,
        r.p_rank,
        r.components,
        r.chi_classes
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_else(|| "-".into())
    )
}

fn parse_record(text: &str) -> Option<Record> {
    let mut lines = text.lines();
    if lines.next()? != STAMP {
        return None;
    }
    let mut field = |name: &str| -> Option<String> {
        let line = lines.next()?;
        line.strip_prefix(name)?
            .strip_prefix(' ')
            .map(str::to_string)
    };
    let list = |s: String| -> Option<Vec<u64>> {
        if s.is_empty() {
            return Some(Vec::new());
        }
        s.split(';').map(|x| x.parse().ok()).collect()
    };
    let f_vector = list(field("f_vector")?)?;
    let reduced = list(field("reduced")?)?;
    let minus_one = field("minus_one")?.parse().ok()?;
    let backend = field("backend")?.parse().ok()?;
    let p_rank = field("p_rank")?.parse().ok()?;
    let components = field("components")?.parse().ok()?;
    let chi = field("chi_classes")?;
    let chi_classes = if chi == "-" {
        None
    } else {
        Some(chi.parse().ok()?)
    };
    Some(Record {
        f_vector,
        betti: BettiResult {
            reduced,
            minus_one,
            backend,
            consistent: true,
        },
        p_rank,
        components,
        chi_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use quillen_core::homology::BackendUsed;

    #[test]
    fn record_round_trips() {
        let r = Record {
            f_vector: vec![20, 15],
            betti: BettiResult {
                reduced: vec![4, 0],
                minus_one: 0,
                backend: BackendUsed::Modular(vec![1073741827, 2147483629]),
                consistent: true,
            },
            p_rank: 2,
            components: 5,
            chi_classes: Some(BigInt::from(4)),
        };
        assert_eq!(parse_record(&format_record(&r)), Some(r.clone()));
        let empty = Record {
            f_vector: vec![],
            betti: BettiResult {
                reduced: vec![],
                minus_one: 1,
                backend: BackendUsed::Exact,
                consistent: true,
            },
            chi_classes: None,
            ..r
        };
        assert_eq!(parse_record(&format_record(&empty)), Some(empty));
    }

    #[test]
    fn stale_records_are_ignored() {
        assert_eq!(parse_record("quillen-cache 0\nf_vector 1\n"), None);
    }
}
