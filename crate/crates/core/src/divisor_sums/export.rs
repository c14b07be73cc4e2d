//! Weight-table serialization.
//!
//! CSV: header `n,value`, one row per `n`, values in shortest round-trip
//! decimal form.
//!
//! Binary (all integers and reals little-endian):
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 8    | magic `TSIEVEWT`                        |
//! | 8      | 4    | format version (u32, currently 1)       |
//! | 12     | 4    | kind tag (u32, see `WeightKind::tag`)   |
//! | 16     | 8    | start (u64)                             |
//! | 24     | 8    | end (u64)                               |
//! | 32     | 8    | R (f64)                                 |
//! | 40     | 8·n  | values for `start+1 ..= end` (f64 each) |

use std::io::{self, Read, Write};

use super::WeightTable;

pub const BINARY_MAGIC: [u8; 8] = *b"TSIEVEWT";
pub const BINARY_VERSION: u32 = 1;

pub fn write_csv<W: Write>(table: &WeightTable, mut out: W) -> io::Result<()> {
    writeln!(out, "n,value")?;
    for (n, v) in table.iter() {
        writeln!(out, "{n},{v:?}")?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(table: &WeightTable, mut out: W) -> io::Result<()> {
    out.write_all(&BINARY_MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&table.kind.tag().to_le_bytes())?;
    out.write_all(&table.start.to_le_bytes())?;
    out.write_all(&table.end.to_le_bytes())?;
    out.write_all(&table.r.to_le_bytes())?;
    for v in &table.values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Header fields and values of a binary dump.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDump {
    pub version: u32,
    pub kind_tag: u32,
    pub start: u64,
    pub end: u64,
    pub r: f64,
    pub values: Vec<f64>,
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

pub fn read_binary<R: Read>(mut input: R) -> io::Result<BinaryDump> {
    let mut head = [0u8; 40];
    input.read_exact(&mut head)?;
    if head[..8] != BINARY_MAGIC {
        return Err(bad("not a weight-table dump"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(head[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(head[i..i + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != BINARY_VERSION {
        return Err(bad("unsupported weight-table version"));
    }
    let (start, end) = (u64_at(16), u64_at(24));
    if end < start {
        return Err(bad("end before start"));
    }
    let mut values = Vec::with_capacity((end - start) as usize);
    let mut buf = [0u8; 8];
    for _ in start..end {
        input.read_exact(&mut buf)?;
        values.push(f64::from_le_bytes(buf));
    }
    Ok(BinaryDump { version, kind_tag: u32_at(12), start, end, r: f64::from_bits(u64_at(32)), values })
}
