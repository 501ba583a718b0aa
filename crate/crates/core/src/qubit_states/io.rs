//! JSON/CSV exchange formats for states and density matrices.
//!
//! State file:
//!
//! ```json
//! {"pairs": [{"p1": [px, py, pz], "p2": [px, py, pz], "weight": w,
//!             "amplitudes": [re_uu, im_uu, re_ud, im_ud, re_du, im_du, re_dd, im_dd]}]}
//! ```
//!
//! Momenta are unit-mass 3-momenta.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MomentumPair, SpinDensityMatrix, TwoQubitState, BASIS};
use crate::error::{Error, Result};
use crate::kinematics::OnShellMomentum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    pub weight: f64,
    pub amplitudes: [f64; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub pairs: Vec<PairRecord>,
}

impl StateFile {
    pub fn into_state(self) -> Result<TwoQubitState> {
        let pairs = self
            .pairs
            .into_iter()
            .map(|r| {
                let a = r.amplitudes;
                MomentumPair::new(
                    OnShellMomentum::unit_mass(r.p1)?,
                    OnShellMomentum::unit_mass(r.p2)?,
                    r.weight,
                    [
                        Complex64::new(a[0], a[1]),
                        Complex64::new(a[2], a[3]),
                        Complex64::new(a[4], a[5]),
                        Complex64::new(a[6], a[7]),
                    ],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        TwoQubitState::new(pairs)
    }

    pub fn from_state(state: &TwoQubitState) -> Self {
        Self {
            pairs: state
                .pairs()
                .iter()
                .map(|p| {
                    let z = &p.amplitudes;
                    PairRecord {
                        p1: p.p1.momentum().0,
                        p2: p.p2.momentum().0,
                        weight: p.weight,
                        amplitudes: [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im, z[3].re, z[3].im],
                    }
                })
                .collect(),
        }
    }
}

pub fn read_state<R: Read>(reader: R) -> Result<TwoQubitState> {
    let file: StateFile = serde_json::from_reader(reader).map_err(|e| Error::Format(e.to_string()))?;
    file.into_state()
}

pub fn write_state<W: Write>(state: &TwoQubitState, writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, &StateFile::from_state(state)).map_err(|e| Error::Io(e.to_string()))
}

/// 16 complex entries, row-major, as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixRecord {
    pub basis: Vec<String>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&SpinDensityMatrix> for DensityMatrixRecord {
    fn from(rho: &SpinDensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            basis: BASIS.iter().map(|s| s.to_string()).collect(),
            entries: (0..4)
                .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }
}

pub fn write_density_json<W: Write>(rho: &SpinDensityMatrix, writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, &DensityMatrixRecord::from(rho)).map_err(|e| Error::Io(e.to_string()))
}

/// `row,col,re,im`, row-major.
pub fn write_density_csv<W: Write>(rho: &SpinDensityMatrix, mut writer: W) -> Result<()> {
    writeln!(writer, "row,col,re,im")?;
    let m = rho.matrix();
    for i in 0..4 {
        for j in 0..4 {
            writeln!(
                writer,
                "{},{},{:e},{:e}",
                BASIS[i],
                BASIS[j],
                m[(i, j)].re,
                m[(i, j)].im
            )?;
        }
    }
    Ok(())
}
