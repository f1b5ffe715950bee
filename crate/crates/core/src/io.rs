//! Snapshot files: a flat little-endian binary layout for 2-D fields and CSV
//! for one-dimensional data.
//!
//! Binary layout (all integers and floats little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `QCPS` |
//! | 4     | version `u32` |
//! | 16    | `nu`, `nv` as `u64` |
//! | 32    | `u0`, `du`, `v0`, `dv` as `f64` |
//! | 16    | `h`, frame log-scale `a` as `f64` |
//! | 2     | kind code `u8`, complex flag `u8` |
//! | rest  | row-major `f64` payload, `u` slow; complex entries as `(re, im)` |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldKind, PhaseSpaceField};
use crate::frame::AffineFrame;
use crate::grid::Grid;
use crate::momentum::MomentumDistribution;
use crate::oracles::{DensityMatrixField, TrajectoryEnsemble};

pub const MAGIC: &[u8; 4] = b"QCPS";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 16 + 32 + 16 + 2;

/// Decoded binary header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub nu: usize,
    pub nv: usize,
    pub u0: f64,
    pub du: f64,
    pub v0: f64,
    pub dv: f64,
    pub h: f64,
    pub frame: AffineFrame,
    pub kind: FieldKind,
    pub complex: bool,
}

impl SnapshotHeader {
    fn encode(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(HEADER_LEN);
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.extend_from_slice(&(self.nu as u64).to_le_bytes());
        b.extend_from_slice(&(self.nv as u64).to_le_bytes());
        for x in [self.u0, self.du, self.v0, self.dv, self.h, self.frame.a] {
            b.extend_from_slice(&x.to_le_bytes());
        }
        b.push(self.kind.code());
        b.push(self.complex as u8);
        b
    }

    fn decode(b: &[u8; HEADER_LEN]) -> Result<Self> {
        if &b[..4] != MAGIC {
            return Err(Error::Format("bad magic, not a snapshot file".into()));
        }
        let version = u32::from_le_bytes(b[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let word = |k: usize| -> [u8; 8] { b[8 + 8 * k..16 + 8 * k].try_into().unwrap() };
        let f = |k: usize| f64::from_le_bytes(word(k));
        let complex = match b[HEADER_LEN - 1] {
            0 => false,
            1 => true,
            c => return Err(Error::Format(format!("bad complex flag {c}"))),
        };
        Ok(Self {
            nu: u64::from_le_bytes(word(0)) as usize,
            nv: u64::from_le_bytes(word(1)) as usize,
            u0: f(2),
            du: f(3),
            v0: f(4),
            dv: f(5),
            h: f(6),
            frame: AffineFrame::new(f(7)),
            kind: FieldKind::from_code(b[HEADER_LEN - 2])?,
            complex,
        })
    }

    fn payload_len(&self) -> Result<usize> {
        self.nu
            .checked_mul(self.nv)
            .and_then(|n| n.checked_mul(if self.complex { 2 } else { 1 }))
            .ok_or_else(|| Error::Format("payload size overflows".into()))
    }
}

fn read_header<R: Read>(r: &mut R) -> Result<SnapshotHeader> {
    let mut b = [0u8; HEADER_LEN];
    r.read_exact(&mut b)?;
    SnapshotHeader::decode(&b)
}

fn read_payload<R: Read>(r: &mut R, n: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; n * 8];
    r.read_exact(&mut bytes).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated payload".into()),
        _ => Error::Io(e),
    })?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn write_field<W: Write>(w: &mut W, field: &PhaseSpaceField) -> Result<()> {
    let g = field.grid;
    let header = SnapshotHeader {
        nu: g.nu,
        nv: g.nv,
        u0: g.u0,
        du: g.du,
        v0: g.v0,
        dv: g.dv,
        h: field.h,
        frame: field.frame,
        kind: field.kind,
        complex: false,
    };
    w.write_all(&header.encode())?;
    for x in &field.values {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<PhaseSpaceField> {
    let hd = read_header(r)?;
    if hd.complex {
        return Err(Error::Format("complex snapshot, expected a real field".into()));
    }
    let values = read_payload(r, hd.payload_len()?)?;
    Ok(PhaseSpaceField {
        kind: hd.kind,
        frame: hd.frame,
        grid: Grid {
            nu: hd.nu,
            nv: hd.nv,
            u0: hd.u0,
            du: hd.du,
            v0: hd.v0,
            dv: hd.dv,
        },
        h: hd.h,
        values,
    })
}

/// Density matrix `rho(u, u')` with both axes on the same nodes.
pub fn write_density_matrix<W: Write>(w: &mut W, rho: &DensityMatrixField) -> Result<()> {
    let header = SnapshotHeader {
        nu: rho.n,
        nv: rho.n,
        u0: rho.u0,
        du: rho.du,
        v0: rho.u0,
        dv: rho.du,
        h: rho.h,
        frame: rho.frame,
        kind: FieldKind::QuantumWigner,
        complex: true,
    };
    w.write_all(&header.encode())?;
    for z in &rho.values {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_density_matrix<R: Read>(r: &mut R) -> Result<DensityMatrixField> {
    let hd = read_header(r)?;
    if !hd.complex || hd.nu != hd.nv {
        return Err(Error::Format("expected a square complex snapshot".into()));
    }
    let raw = read_payload(r, hd.payload_len()?)?;
    Ok(DensityMatrixField {
        frame: hd.frame,
        h: hd.h,
        n: hd.nu,
        u0: hd.u0,
        du: hd.du,
        values: raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
    })
}

pub fn save_field(path: &Path, field: &PhaseSpaceField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<PhaseSpaceField> {
    read_field(&mut BufReader::new(File::open(path)?))
}

pub fn save_density_matrix(path: &Path, rho: &DensityMatrixField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_density_matrix(&mut w, rho)?;
    w.flush()?;
    Ok(())
}

pub fn load_density_matrix(path: &Path) -> Result<DensityMatrixField> {
    read_density_matrix(&mut BufReader::new(File::open(path)?))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        k => Error::Format(format!("{k:?}")),
    }
}

/// Two-column CSV `p,density`.
pub fn write_marginal_csv<W: Write>(w: W, dist: &MomentumDistribution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p", "density"]).map_err(csv_err)?;
    for (p, q) in dist.points() {
        out.write_record([p.to_string(), q.to_string()]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_marginal_csv`]; the abscissae must be uniform.
pub fn read_marginal_csv<R: Read>(r: R) -> Result<MomentumDistribution> {
    let mut rd = csv::Reader::from_reader(r);
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Format(format!("bad number in column {k}")))
        };
        ps.push(num(0)?);
        qs.push(num(1)?);
    }
    if ps.len() < 2 {
        return Err(Error::Format("marginal needs at least two rows".into()));
    }
    let dp = (ps[ps.len() - 1] - ps[0]) / (ps.len() - 1) as f64;
    for (j, p) in ps.iter().enumerate() {
        if (p - (ps[0] + j as f64 * dp)).abs() > 1e-9 * dp.abs().max(1.0) {
            return Err(Error::Format("abscissae are not uniform".into()));
        }
    }
    MomentumDistribution::new(ps[0], dp, qs)
}

/// Two-column CSV `x,p`.
pub fn write_ensemble_csv<W: Write>(w: W, ens: &TrajectoryEnsemble) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "p"]).map_err(csv_err)?;
    for (x, p) in ens.x.iter().zip(&ens.p) {
        out.write_record([x.to_string(), p.to_string()]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}
