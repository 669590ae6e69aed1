//! On-disk cache of decomposed propagators, gzip-compressed JSON.

use super::config::Tolerances;
use crate::quantize::propagator::egorov_residual;
use crate::quantize::serialize::PropagatorRecord;
use crate::quantize::{solve_and_decompose, Propagator};
use crate::symplectic::{FrequencyVector, SymplecticMatrix};
use crate::Result;
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use sha2::{Digest, Sha256};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

/// Largest `N^g` written to disk; bigger operators are recomputed.
pub const CACHE_MAX_DIM: usize = 1024;

pub fn cache_key(a: &SymplecticMatrix, n: u64, r: u64, tol: &Tolerances) -> String {
    let mut h = Sha256::new();
    for row in a.entries() {
        for x in row {
            h.update(x.to_string().as_bytes());
            h.update(b",");
        }
        h.update(b";");
    }
    h.update(format!("N={n};r={r};tol={}", tol.profile()).as_bytes());
    hex::encode(h.finalize())
}

#[derive(Clone, Debug)]
pub struct PropagatorCache {
    dir: PathBuf,
    tol: Tolerances,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub rejected: usize,
}

impl PropagatorCache {
    pub fn new(dir: &Path, tol: Tolerances) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(PropagatorCache { dir: dir.to_path_buf(), tol })
    }

    pub fn path(&self, a: &SymplecticMatrix, n: u64, r: u64) -> PathBuf {
        self.dir.join(format!("{}.json.gz", cache_key(a, n, r, &self.tol)))
    }

    /// A cached propagator, accepted only if its Egorov residuals on the unit
    /// frequencies are still within tolerance.
    pub fn load(&self, a: &SymplecticMatrix, n: u64, r: u64) -> Option<Propagator> {
        let file = std::fs::File::open(self.path(a, n, r)).ok()?;
        let rec: PropagatorRecord = serde_json::from_reader(GzDecoder::new(BufReader::new(file))).ok()?;
        let p = rec.into_propagator().ok()?;
        if p.n != n || p.r != r || &p.a != a || !self.accepts(&p) {
            return None;
        }
        Some(p)
    }

    fn accepts(&self, p: &Propagator) -> bool {
        let g = p.genus();
        (0..2 * g).all(|i| {
            egorov_residual(p, &FrequencyVector::unit(g, i).0).is_ok_and(|res| res <= self.tol.egorov)
        })
    }

    pub fn store(&self, p: &Propagator) -> Result<bool> {
        if p.dim() > CACHE_MAX_DIM {
            return Ok(false);
        }
        let path = self.path(&p.a, p.n, p.r);
        let tmp = path.with_extension("tmp");
        {
            let file = std::fs::File::create(&tmp)?;
            let mut enc = GzEncoder::new(BufWriter::new(file), Compression::fast());
            serde_json::to_writer(&mut enc, &PropagatorRecord::from_propagator(p)?)?;
            enc.finish()?;
        }
        std::fs::rename(tmp, path)?;
        Ok(true)
    }

    /// Load from the cache or solve and store.
    pub fn get_or_solve(&self, a: &SymplecticMatrix, n: u64, r: i64, stats: &mut CacheStats) -> Result<Propagator> {
        let rr = crate::quantize::translation::reduce_twist(r, n)?;
        if let Some(p) = self.load(a, n, rr) {
            stats.hits += 1;
            return Ok(p);
        }
        if self.path(a, n, rr).exists() {
            stats.rejected += 1;
        }
        stats.misses += 1;
        let p = solve_and_decompose(a, n, r)?;
        self.store(&p)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::catalog::a1;

    #[test]
    fn roundtrip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PropagatorCache::new(dir.path(), Tolerances::default()).unwrap();
        let mut stats = CacheStats::default();
        let p = cache.get_or_solve(&a1(), 15, 1, &mut stats).unwrap();
        let q = cache.get_or_solve(&a1(), 15, 1, &mut stats).unwrap();
        assert_eq!((stats.hits, stats.misses), (1, 1));
        assert_eq!(p.matrix(), q.matrix());
        assert_ne!(cache_key(&a1(), 15, 1, &Tolerances::default()), cache_key(&a1(), 15, 3, &Tolerances::default()));

        // a cache written under a looser profile is not consulted under a stricter one
        let strict = PropagatorCache::new(dir.path(), Tolerances::uniform(1e-30)).unwrap();
        assert!(strict.load(&a1(), 15, 1).is_none());

        // corrupted files are rejected and recomputed
        std::fs::write(cache.path(&a1(), 7, 1), b"junk").unwrap();
        let mut stats = CacheStats::default();
        cache.get_or_solve(&a1(), 7, 1, &mut stats).unwrap();
        assert_eq!((stats.rejected, stats.misses), (1, 1));
    }
}
