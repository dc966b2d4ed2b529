//! On-disk cache of Bruhat tables and reduced-word counts.
//!
//! Each file carries a sha256 checksum of its payload. A loaded file is
//! accepted only if the checksum matches and the tables equal the ones of
//! the freshly enumerated group; otherwise it is rewritten.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wwl_core::WeylGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    #[serde(rename = "type")]
    pub type_letter: char,
    pub rank: usize,
    pub order: usize,
    pub words: Vec<Vec<usize>>,
    /// Lower Bruhat interval of each element, bit-packed and hex encoded.
    pub below: Vec<String>,
    pub reduced_word_counts: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    checksum: String,
    tables: Tables,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Written,
    Rebuilt(String),
}

impl Tables {
    pub fn from_group(g: &WeylGroup) -> Self {
        let rs = g.root_system();
        let below = g
            .ids()
            .map(|w| {
                let mut bytes = vec![0u8; g.order().div_ceil(8)];
                for i in g.below_set(w).ones() {
                    bytes[i / 8] |= 1 << (i % 8);
                }
                hex::encode(bytes)
            })
            .collect();
        Tables {
            type_letter: rs.type_letter().as_char(),
            rank: rs.rank(),
            order: g.order(),
            words: g.ids().map(|w| g.word(w).to_vec()).collect(),
            below,
            reduced_word_counts: g.reduced_word_counts(),
        }
    }

    pub fn checksum(&self) -> String {
        let payload = serde_json::to_vec(self).expect("tables serialize");
        hex::encode(Sha256::digest(&payload))
    }
}

pub fn cache_path(dir: &Path, g: &WeylGroup) -> PathBuf {
    let rs = g.root_system();
    dir.join(format!("tables-{}{}.json", rs.type_letter(), rs.rank()))
}

/// Verifies or (re)writes the cached tables for `g`.
pub fn sync(dir: &Path, g: &WeylGroup) -> io::Result<CacheStatus> {
    let fresh = Tables::from_group(g);
    let path = cache_path(dir, g);
    let status = match fs::read(&path) {
        Ok(bytes) => match serde_json::from_slice::<CacheFile>(&bytes) {
            Ok(file) if file.checksum != file.tables.checksum() => {
                CacheStatus::Rebuilt("checksum mismatch".into())
            }
            Ok(file) if file.tables != fresh => CacheStatus::Rebuilt("stale tables".into()),
            Ok(_) => return Ok(CacheStatus::Hit),
            Err(e) => CacheStatus::Rebuilt(format!("unreadable cache: {e}")),
        },
        Err(e) if e.kind() == io::ErrorKind::NotFound => CacheStatus::Written,
        Err(e) => return Err(e),
    };
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        checksum: fresh.checksum(),
        tables: fresh,
    };
    fs::write(&path, serde_json::to_vec(&file).expect("cache serializes"))?;
    Ok(status)
}
