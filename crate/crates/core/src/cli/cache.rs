//! Binary cache for sieved tables.
//!
//! ```text
//! offset  size        field
//! 0       4           magic "APS1"
//! 4       1           version 0x01
//! 5       1           source tag: 0x00 Liouville, 0x01 Moebius, 0x02 CM, 0x03 literal
//! 6       4           assignment blob length L (u32 LE), 0 unless tag = 0x02
//! 10      L           assignment blob
//! 10+L    8           N (u64 LE)
//! 18+L    ceil(N/4)   2-bit codes, n = 1 in the lowest bits of the first byte
//! ...     8           CRC-64/XZ of every preceding byte (u64 LE)
//! ```
//!
//! Assignment blob: default sign byte (0x01 for +1, 0xFF for −1), exception
//! count (u32 LE), then per exception in increasing prime order the prime
//! (u64 LE) and its sign byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use crc::{Crc, CRC_64_XZ};

use crate::arith_sieve::{ArithSequence, PrimeAssignment, Sign, Source};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"APS1";
pub const VERSION: u8 = 0x01;

const CHECKSUM: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

fn sign_byte(s: Sign) -> u8 {
    match s {
        Sign::Plus => 0x01,
        Sign::Minus => 0xFF,
    }
}

fn parse_sign(b: u8) -> Result<Sign> {
    match b {
        0x01 => Ok(Sign::Plus),
        0xFF => Ok(Sign::Minus),
        other => Err(Error::CorruptCache(format!("invalid sign byte {other:#04x}"))),
    }
}

fn encode_assignment(a: &PrimeAssignment) -> Vec<u8> {
    let mut out = vec![sign_byte(a.default_sign())];
    out.extend_from_slice(&(a.exceptions().len() as u32).to_le_bytes());
    for (&p, &s) in a.exceptions() {
        out.extend_from_slice(&p.to_le_bytes());
        out.push(sign_byte(s));
    }
    out
}

/// Serialized bytes of a sequence, checksum included.
pub fn encode(seq: &ArithSequence) -> Vec<u8> {
    let (tag, blob) = match seq.source() {
        Source::Liouville => (0x00, Vec::new()),
        Source::Moebius => (0x01, Vec::new()),
        Source::CompletelyMultiplicative(a) => (0x02, encode_assignment(a)),
        Source::Literal => (0x03, Vec::new()),
    };
    let mut out = Vec::with_capacity(26 + blob.len() + seq.packed().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(tag);
    out.extend_from_slice(&(blob.len() as u32).to_le_bytes());
    out.extend_from_slice(&blob);
    out.extend_from_slice(&(seq.len() as u64).to_le_bytes());
    out.extend_from_slice(seq.packed());
    let crc = CHECKSUM.checksum(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::CorruptCache(format!("truncated while reading {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

fn decode_assignment(blob: &[u8]) -> Result<PrimeAssignment> {
    let mut r = Reader { bytes: blob, pos: 0 };
    let default = parse_sign(r.take(1, "default sign")?[0])?;
    let count = r.u32("exception count")? as usize;
    let mut ex = Vec::with_capacity(count.min(1 << 16));
    let mut last = 0u64;
    for _ in 0..count {
        let p = r.u64("exception prime")?;
        if p <= last {
            return Err(Error::CorruptCache("exceptions not in increasing order".into()));
        }
        last = p;
        ex.push((p, parse_sign(r.take(1, "exception sign")?[0])?));
    }
    if r.pos != blob.len() {
        return Err(Error::CorruptCache("trailing bytes in assignment blob".into()));
    }
    PrimeAssignment::new(default, ex).map_err(|e| Error::CorruptCache(e.to_string()))
}

pub fn decode(bytes: &[u8]) -> Result<ArithSequence> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(Error::CorruptCache("bad magic".into()));
    }
    let version = r.take(1, "version")?[0];
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    if bytes.len() < 8 + r.pos {
        return Err(Error::CorruptCache("truncated before checksum".into()));
    }
    let body = &bytes[..bytes.len() - 8];
    let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap());
    if CHECKSUM.checksum(body) != stored {
        return Err(Error::CorruptCache("checksum mismatch".into()));
    }
    let mut r = Reader { bytes: body, pos: r.pos };
    let tag = r.take(1, "source tag")?[0];
    let blob_len = r.u32("assignment length")? as usize;
    let blob = r.take(blob_len, "assignment blob")?;
    let source = match tag {
        0x00 | 0x01 | 0x03 if !blob.is_empty() => {
            return Err(Error::CorruptCache("assignment blob on a non-CM source".into()));
        }
        0x00 => Source::Liouville,
        0x01 => Source::Moebius,
        0x02 => Source::CompletelyMultiplicative(decode_assignment(blob)?),
        0x03 => Source::Literal,
        other => return Err(Error::CorruptCache(format!("unknown source tag {other:#04x}"))),
    };
    let n = r.u64("N")?;
    let n = usize::try_from(n).map_err(|_| Error::CorruptCache("N too large".into()))?;
    let payload = r.take(n.div_ceil(4), "payload")?;
    if r.pos != body.len() {
        return Err(Error::CorruptCache("trailing bytes after payload".into()));
    }
    ArithSequence::from_packed(source, n, payload.to_vec()).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::CorruptCache(m),
        e => e,
    })
}

/// Writes via a temporary file in the same directory, then renames.
pub fn cache_write(seq: &ArithSequence, path: &Path) -> Result<()> {
    let bytes = encode(seq);
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "cache".into());
    let tmp = dir.join(format!(".{name}.tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn cache_read(path: &Path) -> Result<ArithSequence> {
    decode(&fs::read(path)?)
}
