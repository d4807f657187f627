//! On-disk slice cache.
//!
//! One file per `(ring, s, f, w)` holds the basis labels and the outgoing
//! differential. Layout, little-endian:
//!
//! ```text
//! magic "STEMSLC\0" | version u32 | ring u8 | s i32 | f u32 | w i32
//! | basis count u64 | words | rows u64 | cols u64 | packed matrix words
//! | sha256 of everything above
//! ```
//!
//! Each word is a coefficient (tag u8, two u32 exponents) followed by `f`
//! letters (τ mask u16, ξ exponents). Writes go to a temporary file in the
//! same directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::cobar::CobarWord;
use crate::coeff::{CoeffMonomial, GroundRing};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::grading::Tridegree;
use crate::steenrod::{AbarMonomial, GENS};

const MAGIC: &[u8; 8] = b"STEMSLC\0";

/// Bumped whenever the layout or the meaning of stored data changes.
pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "STEMS_CACHE_DIR";

/// The contents of one cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFile {
    pub ring: GroundRing,
    pub tridegree: Tridegree,
    pub basis: Vec<CobarWord>,
    pub d_out: BitMatrix,
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        if self.pos + n > self.buf.len() {
            return Err("truncated file".into());
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> std::result::Result<u8, String> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> std::result::Result<u16, String> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> std::result::Result<i32, String> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> std::result::Result<u64, String> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

impl SliceFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        b.push(self.ring.tag());
        b.extend_from_slice(&self.tridegree.s.to_le_bytes());
        b.extend_from_slice(&self.tridegree.f.to_le_bytes());
        b.extend_from_slice(&self.tridegree.w.to_le_bytes());
        b.extend_from_slice(&(self.basis.len() as u64).to_le_bytes());
        for w in &self.basis {
            let (tag, x, y) = match w.coeff {
                CoeffMonomial::Pos { tau, rho } => (0u8, tau, rho),
                CoeffMonomial::Neg { rho, tau } => (1u8, rho, tau),
            };
            b.push(tag);
            b.extend_from_slice(&x.to_le_bytes());
            b.extend_from_slice(&y.to_le_bytes());
            for z in &w.letters {
                let (tau, xi) = z.raw();
                b.extend_from_slice(&tau.to_le_bytes());
                b.extend_from_slice(&xi);
            }
        }
        b.extend_from_slice(&(self.d_out.rows() as u64).to_le_bytes());
        b.extend_from_slice(&(self.d_out.cols() as u64).to_le_bytes());
        for w in self.d_out.words() {
            b.extend_from_slice(&w.to_le_bytes());
        }
        let digest = Sha256::digest(&b);
        b.extend_from_slice(&digest);
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Self, String> {
        if bytes.len() < MAGIC.len() + 32 {
            return Err("file too short".into());
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err("checksum mismatch".into());
        }
        let mut r = Reader { buf: body, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err("bad magic".into());
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(format!("format version {version}, expected {FORMAT_VERSION}"));
        }
        let ring = GroundRing::from_tag(r.u8()?).ok_or("unknown ring tag")?;
        let tridegree = Tridegree::new(r.i32()?, r.u32()?, r.i32()?);
        let n = r.u64()? as usize;
        let mut basis = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            let tag = r.u8()?;
            let (x, y) = (r.u32()?, r.u32()?);
            let coeff = match tag {
                0 => CoeffMonomial::pos(x, y),
                1 => CoeffMonomial::neg(x, y),
                _ => return Err(format!("bad coefficient tag {tag}")),
            };
            let mut letters = Vec::with_capacity(tridegree.f as usize);
            for _ in 0..tridegree.f {
                let tau = r.u16()?;
                let xi: [u8; GENS] = r.take(GENS)?.try_into().unwrap();
                letters.push(AbarMonomial::from_raw(tau, xi));
            }
            basis.push(CobarWord::new(coeff, letters));
        }
        let rows = r.u64()? as usize;
        let cols = r.u64()? as usize;
        let count = rows * cols.div_ceil(64);
        let mut words = Vec::with_capacity(count);
        for _ in 0..count {
            words.push(r.u64()?);
        }
        if r.pos != body.len() {
            return Err("trailing bytes".into());
        }
        let d_out = BitMatrix::from_words(rows, cols, words).map_err(|e| e.to_string())?;
        Ok(SliceFile {
            ring,
            tridegree,
            basis,
            d_out,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Self::from_bytes(&bytes).map_err(|message| Error::Cache {
            path: path.display().to_string(),
            message,
        })
    }

    /// Writes atomically: a temporary file in the target directory is
    /// renamed over `path`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let dir = path.parent().unwrap_or(Path::new("."));
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&self.to_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

/// A directory of slice files.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// The cache named by the environment, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(DiskCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, ring: GroundRing, deg: Tridegree) -> PathBuf {
        self.dir.join(format!(
            "{}_s{}_f{}_w{}.slice",
            ring.name(),
            deg.s,
            deg.f,
            deg.w
        ))
    }

    /// Loads a slice; `Ok(None)` if absent. Files that fail validation or
    /// describe another slice are errors.
    pub fn load(&self, ring: GroundRing, deg: Tridegree) -> Result<Option<SliceFile>> {
        let path = self.path_for(ring, deg);
        if !path.exists() {
            return Ok(None);
        }
        let file = SliceFile::read(&path)?;
        if file.ring != ring || file.tridegree != deg {
            return Err(Error::Cache {
                path: path.display().to_string(),
                message: format!(
                    "holds {} {} instead of {ring} {deg}",
                    file.ring, file.tridegree
                ),
            });
        }
        Ok(Some(file))
    }

    pub fn store(&self, file: &SliceFile) -> Result<()> {
        file.write(&self.path_for(file.ring, file.tridegree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobar::cobar_basis;

    fn sample() -> SliceFile {
        let basis = cobar_basis(GroundRing::Z2, 0, 2, 2);
        let mut d = BitMatrix::zeros(3, basis.len());
        d.set(1, 0, true);
        SliceFile {
            ring: GroundRing::Z2,
            tridegree: Tridegree::new(0, 2, 2),
            basis,
            d_out: d,
        }
    }

    #[test]
    fn round_trip() {
        let f = sample();
        assert!(!f.basis.is_empty());
        assert_eq!(SliceFile::from_bytes(&f.to_bytes()).unwrap(), f);
    }

    #[test]
    fn corruption_detected() {
        let mut b = sample().to_bytes();
        let k = b.len() / 2;
        b[k] ^= 1;
        assert_eq!(SliceFile::from_bytes(&b).unwrap_err(), "checksum mismatch");
        assert!(SliceFile::from_bytes(&b[..10]).is_err());
    }

    #[test]
    fn atomic_store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let f = sample();
        assert!(cache.load(f.ring, f.tridegree).unwrap().is_none());
        cache.store(&f).unwrap();
        assert_eq!(cache.load(f.ring, f.tridegree).unwrap(), Some(f.clone()));
        // A file renamed to the wrong slot is rejected.
        let other = Tridegree::new(1, 2, 2);
        fs::copy(cache.path_for(f.ring, f.tridegree), cache.path_for(f.ring, other)).unwrap();
        assert!(cache.load(f.ring, other).is_err());
    }
}
