//! Trajectory persistence: a JSON manifest plus one little-endian binary
//! file of `(re, im)` f64 pairs per snapshot, component-major, with the
//! FFT-order index triple `(i, j, l)` in lexicographic order.

use super::{SpectralField, Trajectory};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub grid: usize,
    pub times: Vec<f64>,
    pub viscosity: f64,
    pub horizon: f64,
    pub dt: f64,
    pub endianness: String,
    pub layout: String,
    pub files: Vec<String>,
}

const LAYOUT: &str = "component-major, k-order lexicographic";

pub fn save_trajectory(traj: &Trajectory, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(traj.fields.len());
    for (i, f) in traj.fields.iter().enumerate() {
        let name = format!("snap_{i:05}.bin");
        let mut bytes = Vec::with_capacity(48 * f.len());
        for comp in &f.coeffs {
            for z in comp {
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        fs::write(dir.join(&name), bytes)?;
        files.push(name);
    }
    let manifest = Manifest {
        grid: traj.grid(),
        times: traj.times.clone(),
        viscosity: traj.viscosity,
        horizon: traj.horizon,
        dt: traj.dt,
        endianness: "little".into(),
        layout: LAYOUT.into(),
        files,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

pub fn load_trajectory(dir: &Path) -> Result<Trajectory> {
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.endianness != "little" || manifest.layout != LAYOUT {
        return Err(Error::Io(format!("unsupported dump format {} / {}", manifest.endianness, manifest.layout)));
    }
    if manifest.files.len() != manifest.times.len() || manifest.files.is_empty() {
        return Err(Error::Io("manifest lists mismatched files and times".into()));
    }
    let m = manifest.grid;
    let n = m * m * m;
    let mut fields = Vec::with_capacity(manifest.files.len());
    for name in &manifest.files {
        let bytes = fs::read(dir.join(name))?;
        if bytes.len() != 48 * n {
            return Err(Error::Io(format!("{name}: expected {} bytes, found {}", 48 * n, bytes.len())));
        }
        let mut f = SpectralField::zeros(m);
        let word = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        for c in 0..3 {
            for idx in 0..n {
                let base = 2 * (c * n + idx);
                f.coeffs[c][idx] = Complex64::new(word(base), word(base + 1));
            }
        }
        f.divergence_free = f.divergence_defect() < 1e-12;
        fields.push(f);
    }
    Ok(Trajectory {
        times: manifest.times,
        fields,
        viscosity: manifest.viscosity,
        horizon: manifest.horizon,
        dt: manifest.dt,
    })
}
