//! Binary sieve cache.
//!
//! Layout: `b"RFSV1"`, little-endian `u64` limit, then `spf[n]` as
//! little-endian `u32` for every `n` in `2..=limit`, then a little-endian
//! `u64` FNV-1a checksum of all preceding bytes.

use std::io::{Read, Write};

use super::FactorSieve;
use crate::error::{Error, Result};

pub const SIEVE_MAGIC: &[u8; 5] = b"RFSV1";

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

pub fn save_sieve<W: Write>(sieve: &FactorSieve, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::resource(format!("sieve cache write ({e})"), "writable sink");
    let mut hash = Fnv::new();
    let mut put = |bytes: &[u8], out: &mut W| -> Result<()> {
        hash.update(bytes);
        out.write_all(bytes).map_err(io)
    };
    put(SIEVE_MAGIC, &mut out)?;
    put(&sieve.limit().to_le_bytes(), &mut out)?;
    let mut buf = Vec::with_capacity(1 << 16);
    for chunk in sieve.raw()[2..].chunks(1 << 14) {
        buf.clear();
        for v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        put(&buf, &mut out)?;
    }
    let sum = hash.0;
    out.write_all(&sum.to_le_bytes()).map_err(io)?;
    Ok(())
}

/// Reads a cache, checking magic, the expected limit (when given) and the checksum.
pub fn load_sieve<R: Read>(mut input: R, expect_limit: Option<u64>) -> Result<FactorSieve> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| Error::Format(format!("sieve cache read: {e}")))?;
    if bytes.len() < 5 + 8 + 8 || &bytes[..5] != SIEVE_MAGIC {
        return Err(Error::Format("not an RFSV1 sieve cache".into()));
    }
    let limit = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    if let Some(want) = expect_limit {
        if want != limit {
            return Err(Error::Format(format!("cache limit {limit} != requested {want}")));
        }
    }
    if limit < 2 {
        return Err(Error::Format(format!("cache limit {limit} < 2")));
    }
    let body = (limit - 1)
        .checked_mul(4)
        .and_then(|b| usize::try_from(b).ok())
        .ok_or_else(|| Error::Format("cache limit too large".into()))?;
    if bytes.len() != 13 + body + 8 {
        return Err(Error::Format(format!(
            "cache length {} does not match limit {limit}",
            bytes.len()
        )));
    }
    let (payload, tail) = bytes.split_at(13 + body);
    let mut hash = Fnv::new();
    hash.update(payload);
    if hash.0 != u64::from_le_bytes(tail.try_into().unwrap()) {
        return Err(Error::Format("sieve cache checksum mismatch".into()));
    }
    let mut spf = vec![0u32; limit as usize + 1];
    for (i, w) in payload[13..].chunks_exact(4).enumerate() {
        spf[i + 2] = u32::from_le_bytes(w.try_into().unwrap());
    }
    // structural check so a forged checksum still cannot yield a bogus table
    for n in 2..=limit {
        let q = spf[n as usize] as u64;
        if q < 2 || n % q != 0 || (q != n && spf[q as usize] as u64 != q) {
            return Err(Error::Format(format!("invalid spf entry at {n}")));
        }
    }
    Ok(FactorSieve::from_raw(limit, spf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let s = FactorSieve::new(5000).unwrap();
        let mut buf = Vec::new();
        save_sieve(&s, &mut buf).unwrap();
        assert_eq!(&buf[..5], b"RFSV1");
        assert_eq!(buf.len(), 5 + 8 + 4 * 4999 + 8);
        let back = load_sieve(&buf[..], Some(5000)).unwrap();
        assert_eq!(back, s);

        assert!(matches!(load_sieve(&buf[..], Some(4000)), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[100] ^= 1;
        assert!(matches!(load_sieve(&bad[..], None), Err(Error::Format(_))));
        assert!(matches!(load_sieve(&b"RFSV0"[..], None), Err(Error::Format(_))));
    }
}
