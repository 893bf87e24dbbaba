//! Trajectory-distribution maps (Dmaps) and the threshold predicate that gates expansion.
//!
//! DMAP file layout: `b"DMAP"`, width as u32 LE, height as u32 LE, then
//! `width * height` f32 LE values row-major from row 0 (south). Every value must
//! be finite and within [0, 1].

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scene::raster_io::write_pgm;
use crate::scene::{ByteRaster, GridGeometry, Pose};
use crate::search::Trajectory;

pub const DMAP_MAGIC: &[u8; 4] = b"DMAP";

/// Raster of trajectory likelihoods in [0, 1], same geometry as the occupancy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmap {
    geometry: GridGeometry,
    values: Vec<f32>,
}

impl Dmap {
    pub fn new(geometry: GridGeometry, values: Vec<f32>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::Format(format!(
                "dmap has {} values, expected {}",
                values.len(),
                geometry.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v))) {
            return Err(Error::Validation(format!("dmap value {v} at index {i} is outside [0, 1]")));
        }
        Ok(Self { geometry, values })
    }

    pub fn filled(geometry: GridGeometry, value: f32) -> Result<Self> {
        Self::new(geometry, vec![value; geometry.len()])
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> f32 {
        self.values[self.geometry.index(col, row)]
    }

    /// Value at the pixel containing (x, y).
    #[inline]
    pub fn value_at(&self, x: f64, y: f64) -> Option<f32> {
        self.geometry.pixel_of(x, y).map(|(c, r)| self.get(c, r))
    }

    /// 8-bit rendering, value × 255 rounded.
    pub fn to_bytes(&self) -> ByteRaster {
        let data = self.values.iter().map(|v| (v * 255.0).round() as u8).collect();
        ByteRaster::new(self.geometry, data).expect("same geometry")
    }
}

/// Expansion gate settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceConfig {
    /// Dmap values strictly below this prune a successor.
    pub threshold: f64,
    /// Probability that a successor is checked against the map at all.
    pub p_guided: f64,
    pub seed: u64,
}

impl Default for GuidanceConfig {
    fn default() -> Self {
        Self {
            threshold: 0.1,
            p_guided: 0.8,
            seed: 0,
        }
    }
}

impl GuidanceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("threshold", self.threshold), ("p_guided", self.p_guided)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// True means "off the predicted distribution, prune": the map value at the
/// state's pixel is below `threshold`, or the state is off the map.
#[inline]
pub fn check_dist_map(state: &Pose, dmap: &Dmap, threshold: f64) -> bool {
    match dmap.value_at(state.x(), state.y()) {
        Some(v) => (v as f64) < threshold,
        None => true,
    }
}

/// Stand-in for a learned map: 1 within `radius` of any reference pose, falling
/// linearly to 0 at twice the radius.
pub fn synthetic_oracle(reference: &Trajectory, radius: f64, geometry: GridGeometry) -> Result<Dmap> {
    if reference.is_empty() {
        return Err(Error::InvalidInput("reference trajectory is empty".into()));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius {radius} must be positive")));
    }
    let points: Vec<(f64, f64)> = reference.poses().map(|p| (p.x(), p.y())).collect();
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !geometry.contains(*x, *y)) {
        return Err(Error::OutOfBounds { x, y });
    }
    let mut values = vec![0f32; geometry.len()];
    let reach = 2.0 * radius;
    // Only pixels within 2r of some pose can be non-zero; visit those boxes.
    for &(px, py) in &points {
        let lo = geometry.pixel_of((px - reach).max(0.0), (py - reach).max(0.0)).unwrap_or((0, 0));
        let (w, h) = geometry.extent();
        let hi = geometry
            .pixel_of((px + reach).min(w - 1e-9), (py + reach).min(h - 1e-9))
            .unwrap_or((geometry.width - 1, geometry.height - 1));
        for row in lo.1..=hi.1 {
            for col in lo.0..=hi.0 {
                let (cx, cy) = geometry.center(col, row);
                let d = (cx - px).hypot(cy - py);
                let v = if d <= radius {
                    1.0
                } else if d >= reach {
                    0.0
                } else {
                    (reach - d) / radius
                };
                let slot = &mut values[geometry.index(col, row)];
                *slot = slot.max(v as f32);
            }
        }
    }
    Dmap::new(geometry, values)
}

pub fn write_dmap<W: Write>(mut w: W, dmap: &Dmap) -> Result<()> {
    let g = dmap.geometry();
    let width = u32::try_from(g.width).map_err(|_| Error::Format("width exceeds u32".into()))?;
    let height = u32::try_from(g.height).map_err(|_| Error::Format("height exceeds u32".into()))?;
    w.write_all(DMAP_MAGIC)?;
    w.write_all(&width.to_le_bytes())?;
    w.write_all(&height.to_le_bytes())?;
    let mut payload = Vec::with_capacity(g.len() * 4);
    for v in dmap.values() {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&payload)?;
    Ok(())
}

pub fn decode_dmap(bytes: &[u8], resolution: f64) -> Result<Dmap> {
    if bytes.len() < 12 {
        return Err(Error::Format(format!("DMAP header truncated ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != DMAP_MAGIC {
        return Err(Error::Format(format!("bad DMAP magic {:?}", &bytes[..4])));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let payload = &bytes[12..];
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Format("DMAP dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "DMAP payload is {} bytes, header says {width}x{height}",
            payload.len()
        )));
    }
    let geometry = GridGeometry::new(width, height, resolution).map_err(|e| Error::Format(e.to_string()))?;
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Dmap::new(geometry, values)
}

pub fn read_dmap<R: Read>(mut r: R, resolution: f64) -> Result<Dmap> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_dmap(&bytes, resolution)
}

pub fn save_dmap(path: impl AsRef<Path>, dmap: &Dmap) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dmap(&mut w, dmap)?;
    w.flush()?;
    Ok(())
}

/// Load a DMAP file at the lot's 0.1 m resolution.
pub fn load_dmap(path: impl AsRef<Path>) -> Result<Dmap> {
    read_dmap(BufReader::new(File::open(path)?), GridGeometry::PARKING_LOT.resolution)
}

pub fn save_dmap_pgm(path: impl AsRef<Path>, dmap: &Dmap) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pgm(&mut w, &dmap.to_bytes(), 255)?;
    w.flush()?;
    Ok(())
}
