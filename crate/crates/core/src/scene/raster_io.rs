//! PRAS byte-raster files and binary PGM interchange.
//!
//! PRAS layout: `b"PRAS"`, width as u32 LE, height as u32 LE, one byte giving the
//! value width (always 1 here), then `width * height` bytes row-major from row 0.
//! The file carries no resolution; readers supply it.
//!
//! PGM files are written north-up (first image row = highest raster row) so they
//! look right in an image viewer, and flipped back on import.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{ByteRaster, GridGeometry, LabelImage, OccupancyGrid, SceneImage};
use crate::error::{Error, Result};

pub const PRAS_MAGIC: &[u8; 4] = b"PRAS";
const HEADER_LEN: usize = 4 + 4 + 4 + 1;

pub fn write_pras<W: Write>(mut w: W, raster: &ByteRaster) -> Result<()> {
    let width = u32::try_from(raster.width()).map_err(|_| Error::Format("width exceeds u32".into()))?;
    let height = u32::try_from(raster.height()).map_err(|_| Error::Format("height exceeds u32".into()))?;
    w.write_all(PRAS_MAGIC)?;
    w.write_all(&width.to_le_bytes())?;
    w.write_all(&height.to_le_bytes())?;
    w.write_all(&[1u8])?;
    w.write_all(raster.data())?;
    Ok(())
}

pub fn read_pras<R: Read>(mut r: R, resolution: f64) -> Result<ByteRaster> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_pras(&bytes, resolution)
}

pub fn decode_pras(bytes: &[u8], resolution: f64) -> Result<ByteRaster> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("PRAS header truncated ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != PRAS_MAGIC {
        return Err(Error::Format(format!("bad PRAS magic {:?}", &bytes[..4])));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let value_width = bytes[12];
    if value_width != 1 {
        return Err(Error::Format(format!("unsupported PRAS value width {value_width}")));
    }
    let payload = &bytes[HEADER_LEN..];
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("PRAS dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "PRAS payload is {} bytes, header says {width}x{height}",
            payload.len()
        )));
    }
    let geometry = GridGeometry::new(width, height, resolution).map_err(|e| Error::Format(e.to_string()))?;
    ByteRaster::new(geometry, payload.to_vec())
}

pub fn save_pras(path: impl AsRef<Path>, raster: &ByteRaster) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pras(&mut w, raster)?;
    w.flush()?;
    Ok(())
}

pub fn load_pras(path: impl AsRef<Path>, resolution: f64) -> Result<ByteRaster> {
    read_pras(BufReader::new(File::open(path)?), resolution)
}

pub fn load_occupancy(path: impl AsRef<Path>) -> Result<OccupancyGrid> {
    OccupancyGrid::from_raster(load_pras(path, GridGeometry::PARKING_LOT.resolution)?)
}

pub fn load_scene_image(path: impl AsRef<Path>) -> Result<SceneImage> {
    SceneImage::from_raster(load_pras(path, GridGeometry::PARKING_LOT.resolution)?)
}

pub fn load_label_image(path: impl AsRef<Path>) -> Result<LabelImage> {
    LabelImage::from_raster(load_pras(path, GridGeometry::PARKING_LOT.resolution)?)
}

/// Binary PGM (P5), north-up. `maxval` goes into the header verbatim; values above it are rejected.
pub fn write_pgm<W: Write>(mut w: W, raster: &ByteRaster, maxval: u8) -> Result<()> {
    if maxval == 0 {
        return Err(Error::Format("PGM maxval must be positive".into()));
    }
    if let Some(v) = raster.data().iter().find(|&&v| v > maxval) {
        return Err(Error::Validation(format!("value {v} exceeds PGM maxval {maxval}")));
    }
    write!(w, "P5\n{} {}\n{}\n", raster.width(), raster.height(), maxval)?;
    for row in raster.data().chunks(raster.width()).rev() {
        w.write_all(row)?;
    }
    Ok(())
}

/// Parsed PGM: raster in crate row order plus the header maxval.
pub fn read_pgm<R: Read>(mut r: R, resolution: f64) -> Result<(ByteRaster, u8)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() {
            match bytes[pos] {
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("PGM header truncated".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if fields[0] != "P5" {
        return Err(Error::Format(format!("not a binary PGM (magic {:?})", fields[0])));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Format(format!("bad PGM header field {s:?}")));
    let (width, height, maxval) = (parse(&fields[1])?, parse(&fields[2])?, parse(&fields[3])?);
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!("unsupported PGM maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the payload
    pos += 1;
    let payload = bytes.get(pos..).unwrap_or_default();
    if payload.len() != width * height {
        return Err(Error::Format(format!(
            "PGM payload is {} bytes, expected {}",
            payload.len(),
            width * height
        )));
    }
    let data: Vec<u8> = payload.chunks(width).rev().flatten().copied().collect();
    let geometry = GridGeometry::new(width, height, resolution).map_err(|e| Error::Format(e.to_string()))?;
    Ok((ByteRaster::new(geometry, data)?, maxval as u8))
}

pub fn save_pgm(path: impl AsRef<Path>, raster: &ByteRaster, maxval: u8) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pgm(&mut w, raster, maxval)?;
    w.flush()?;
    Ok(())
}

pub fn load_pgm(path: impl AsRef<Path>, resolution: f64) -> Result<(ByteRaster, u8)> {
    read_pgm(BufReader::new(File::open(path)?), resolution)
}
