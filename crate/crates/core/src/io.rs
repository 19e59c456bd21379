//! Binary grid/volume files with JSON sidecars, and CSV spectrogram export.
//!
//! Layout: `"CLCG"` | version u16 | n u16 | axis count u16 | sizes u32… |
//! blade count u32 | little-endian f64 payload, blade-major then row-major.
//! Signals use axes (x_1 … x_n); volumes use (u, θ, b) where b is either
//! the n lattice axes or a single point axis.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Metric};
use crate::clcst::{BSelection, CLCSTVolume, VolumeMeta};
use crate::error::{Error, Result};
use crate::grid::{Domain, GridSignal, GridSpec};

pub const MAGIC: &[u8; 4] = b"CLCG";
pub const VERSION: u16 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub n: u16,
    pub sizes: Vec<u32>,
    pub blades: u32,
}

impl Header {
    pub fn payload_len(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).product::<usize>() * self.blades as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sidecar {
    Signal {
        grid: GridSpec,
        domain: Domain,
        metric: Metric,
    },
    Volume {
        meta: VolumeMeta,
    },
}

pub fn encode(header: &Header, payload: &[f64]) -> Result<Vec<u8>> {
    if payload.len() != header.payload_len() {
        return Err(Error::Format(format!(
            "payload has {} values, header implies {}",
            payload.len(),
            header.payload_len()
        )));
    }
    let axes = u16::try_from(header.sizes.len())
        .map_err(|_| Error::Format("too many axes".into()))?;
    let mut out = Vec::with_capacity(14 + 4 * header.sizes.len() + 8 * payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&header.n.to_le_bytes());
    out.extend_from_slice(&axes.to_le_bytes());
    for s in &header.sizes {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out.extend_from_slice(&header.blades.to_le_bytes());
    for v in payload {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.pos + k;
        if end > self.buf.len() {
            return Err(Error::Format("truncated file".into()));
        }
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<(Header, Vec<f64>)> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = r.u16()?;
    let axes = r.u16()? as usize;
    let sizes = (0..axes).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let blades = r.u32()?;
    let header = Header { n, sizes, blades };
    let body = r.take(8 * header.payload_len())?;
    if r.pos != bytes.len() {
        return Err(Error::Format("trailing bytes".into()));
    }
    let payload = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((header, payload))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_pair(path: &Path, bytes: &[u8], sidecar: &Sidecar) -> Result<()> {
    fs::write(path, bytes)?;
    let mut f = fs::File::create(sidecar_path(path))?;
    serde_json::to_writer_pretty(&mut f, sidecar)?;
    f.write_all(b"\n")?;
    Ok(())
}

fn read_sidecar(path: &Path) -> Result<Sidecar> {
    Ok(serde_json::from_slice(&fs::read(sidecar_path(path))?)?)
}

pub fn signal_header(s: &GridSignal) -> Header {
    let spec = s.spec();
    Header {
        n: spec.n as u16,
        sizes: vec![spec.samples as u32; spec.n],
        blades: s.algebra().blade_count() as u32,
    }
}

pub fn encode_signal(s: &GridSignal) -> Result<Vec<u8>> {
    encode(&signal_header(s), s.data())
}

pub fn write_signal(path: &Path, s: &GridSignal) -> Result<()> {
    let sidecar = Sidecar::Signal {
        grid: *s.spec(),
        domain: s.domain(),
        metric: s.algebra().metric(),
    };
    write_pair(path, &encode_signal(s)?, &sidecar)
}

pub fn read_signal(path: &Path) -> Result<GridSignal> {
    let (header, payload) = decode(&fs::read(path)?)?;
    let Sidecar::Signal {
        grid,
        domain,
        metric,
    } = read_sidecar(path)?
    else {
        return Err(Error::Format(format!("{} holds a volume, not a signal", path.display())));
    };
    let alg = Algebra::new(grid.n, metric)?;
    let expect = Header {
        n: grid.n as u16,
        sizes: vec![grid.samples as u32; grid.n],
        blades: alg.blade_count() as u32,
    };
    if header != expect {
        return Err(Error::Format(format!("header {header:?} disagrees with sidecar")));
    }
    GridSignal::from_planes(grid, domain, &alg, payload)
}

pub fn volume_header(v: &CLCSTVolume) -> Header {
    let meta = v.meta();
    let mut sizes = vec![v.nu() as u32, v.ntheta() as u32];
    match meta.sampling.b {
        BSelection::Lattice => sizes.extend(vec![meta.grid.samples as u32; meta.grid.n]),
        _ => sizes.push(v.nb() as u32),
    }
    Header {
        n: meta.grid.n as u16,
        sizes,
        blades: v.algebra().blade_count() as u32,
    }
}

pub fn encode_volume(v: &CLCSTVolume) -> Result<Vec<u8>> {
    encode(&volume_header(v), v.values())
}

pub fn write_volume(path: &Path, v: &CLCSTVolume) -> Result<()> {
    write_pair(path, &encode_volume(v)?, &Sidecar::Volume { meta: v.meta().clone() })
}

pub fn read_volume(path: &Path) -> Result<CLCSTVolume> {
    let (header, payload) = decode(&fs::read(path)?)?;
    let Sidecar::Volume { meta } = read_sidecar(path)? else {
        return Err(Error::Format(format!("{} holds a signal, not a volume", path.display())));
    };
    let alg = Algebra::new(meta.grid.n, meta.metric)?;
    let v = CLCSTVolume::from_parts(meta, &alg, payload)?;
    if volume_header(&v) != header {
        return Err(Error::Format(format!("header {header:?} disagrees with sidecar")));
    }
    Ok(v)
}

/// One row per b: coordinates, scalar part and multivector norm of S(b, u, θ).
pub fn spectrogram_csv(v: &CLCSTVolume, ui: usize, ti: usize) -> Result<String> {
    if ui >= v.nu() || ti >= v.ntheta() {
        return Err(Error::InvalidParams(format!("slice ({ui}, {ti}) out of range")));
    }
    let meta = v.meta();
    let n = meta.grid.n;
    let mut out = String::new();
    let head: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
    out.push_str(&head.join(","));
    out.push_str(",scalar,norm\n");
    for (bi, b) in meta.sampling.b.coords(&meta.grid).iter().enumerate() {
        let s = v.value(bi, ui, ti);
        let cols: Vec<String> = b.iter().map(|x| format!("{x}")).collect();
        out.push_str(&format!("{},{:e},{:e}\n", cols.join(","), s.scalar_part(), s.norm()));
    }
    Ok(out)
}
