//! JSON state and density files.
//!
//! Mode indices are 1-based in files and 0-based in memory. Occupation
//! indices are counts and are not shifted.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{MixedState, OccupationVector, PureState, SlaterIndex, STATE_TOL};
use crate::tensor::{Amplitudes, ParticleKind, SystemShape, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    ProductTensor,
    Occupation,
    Slater,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub basis: Basis,
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// A parsed input: either file format.
#[derive(Clone, Debug)]
pub enum Input {
    State(PureState),
    Density(MixedState),
}

impl Input {
    /// Pure inputs become rank-one density matrices.
    pub fn into_mixed(self) -> MixedState {
        match self {
            Input::State(psi) => MixedState::from_pure(&psi),
            Input::Density(rho) => rho,
        }
    }
}

fn to_zero_based(index: &[usize], modes: usize) -> Result<Vec<usize>> {
    index
        .iter()
        .map(|&i| {
            if i == 0 || i > modes {
                Err(Error::Validation(format!(
                    "mode index {i} outside 1..={modes}"
                )))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

impl StateFile {
    pub fn into_state(self) -> Result<PureState> {
        let shape = SystemShape::new(self.kind, self.particles, self.modes)?;
        let mut seen = HashSet::new();
        for entry in &self.amplitudes {
            if !seen.insert(entry.index.clone()) {
                return Err(Error::Validation(format!(
                    "duplicate index {:?}",
                    entry.index
                )));
            }
        }
        let norm: f64 = self
            .amplitudes
            .iter()
            .map(|e| e.re * e.re + e.im * e.im)
            .sum::<f64>()
            .sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        let amp = |e: &AmplitudeEntry| C64::new(e.re, e.im);
        match self.basis {
            Basis::ProductTensor => {
                let mut amps = Amplitudes::zeros(self.modes, self.particles)?;
                for e in &self.amplitudes {
                    if e.index.len() != self.particles {
                        return Err(Error::Validation(format!(
                            "index {:?} needs {} entries",
                            e.index, self.particles
                        )));
                    }
                    let idx = amps.index_of(&to_zero_based(&e.index, self.modes)?)?;
                    amps.as_mut_slice()[idx] = amp(e);
                }
                PureState::new(shape, amps)
            }
            Basis::Occupation => {
                if self.kind != ParticleKind::Boson {
                    return Err(Error::Validation(
                        "occupation basis needs kind boson".into(),
                    ));
                }
                let terms = self
                    .amplitudes
                    .iter()
                    .map(|e| {
                        if e.index.len() != self.modes {
                            return Err(Error::Validation(format!(
                                "occupation {:?} needs {} entries",
                                e.index, self.modes
                            )));
                        }
                        Ok((
                            OccupationVector::new(e.index.clone(), self.particles)?,
                            amp(e),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PureState::bosonic_state(shape, &terms)
            }
            Basis::Slater => {
                if self.kind != ParticleKind::Fermion {
                    return Err(Error::Validation("slater basis needs kind fermion".into()));
                }
                let terms = self
                    .amplitudes
                    .iter()
                    .map(|e| {
                        Ok((
                            SlaterIndex::new(to_zero_based(&e.index, self.modes)?, &shape)?,
                            amp(e),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PureState::slater_state(shape, &terms)
            }
        }
    }

    /// Product-tensor listing of the nonzero amplitudes, exact in every bit.
    pub fn from_state(psi: &PureState) -> Self {
        let shape = psi.shape();
        let amps = psi.amplitudes();
        let amplitudes = amps
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(i, z)| AmplitudeEntry {
                index: amps.digits_of(i).into_iter().map(|d| d + 1).collect(),
                re: z.re,
                im: z.im,
            })
            .collect();
        Self {
            kind: shape.kind(),
            particles: shape.particles(),
            modes: shape.modes(),
            basis: Basis::ProductTensor,
            amplitudes,
        }
    }
}

impl DensityFile {
    pub fn into_state(self) -> Result<MixedState> {
        let shape = SystemShape::new(self.kind, self.particles, self.modes)?;
        let d = shape.hilbert_dim();
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(Error::Validation(format!("density matrix must be {d}x{d}")));
        }
        let rho = DMatrix::from_fn(d, d, |i, j| {
            C64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        MixedState::new(shape, rho)
    }

    pub fn from_state(rho: &MixedState) -> Self {
        let shape = rho.shape();
        let m = rho.matrix();
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            kind: shape.kind(),
            particles: shape.particles(),
            modes: shape.modes(),
            matrix,
        }
    }
}

pub fn parse_state(text: &str) -> Result<PureState> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn parse_density(text: &str) -> Result<MixedState> {
    serde_json::from_str::<DensityFile>(text)?.into_state()
}

/// Either format, told apart by the `matrix` field.
pub fn parse_input(text: &str) -> Result<Input> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("matrix").is_some() {
        Ok(Input::Density(
            serde_json::from_value::<DensityFile>(value)?.into_state()?,
        ))
    } else {
        Ok(Input::State(
            serde_json::from_value::<StateFile>(value)?.into_state()?,
        ))
    }
}

pub fn read_input(path: &Path) -> Result<Input> {
    parse_input(&fs::read_to_string(path)?)
}

pub fn state_to_json(psi: &PureState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from_state(psi))?)
}

pub fn density_to_json(rho: &MixedState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DensityFile::from_state(rho))?)
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Validation(format!("{} has no file name", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::concurrence_pure;
    use crate::state::named;

    const BELL: &str = r#"{"kind":"distinguishable","L":2,"N":2,"basis":"product-tensor",
        "amplitudes":[{"index":[1,1],"re":0.7071067811865476,"im":0.0},
                      {"index":[2,2],"re":0.7071067811865476,"im":0.0}]}"#;

    #[test]
    fn bell_file() {
        let psi = parse_state(BELL).unwrap();
        assert!((concurrence_pure(&psi).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slater_and_occupation_files() {
        let s = r#"{"kind":"fermion","L":2,"N":4,"basis":"slater",
            "amplitudes":[{"index":[1,2],"re":0.7071067811865476,"im":0},
                          {"index":[3,4],"re":0.7071067811865476,"im":0}]}"#;
        let psi = parse_state(s).unwrap();
        let pair = named::fermion_pair_superposition();
        assert!(psi.amplitudes().distance(pair.amplitudes()) < 1e-14);
        let w = r#"{"kind":"boson","L":3,"N":2,"basis":"occupation",
            "amplitudes":[{"index":[2,1],"re":1,"im":0}]}"#;
        let psi = parse_state(w).unwrap();
        assert!(psi.amplitudes().distance(named::w_state(3).amplitudes()) < 1e-14);
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_state("{not json"), Err(Error::Json(_))));
        let unnormalized = BELL.replace("0.7071067811865476", "0.7");
        assert!(matches!(
            parse_state(&unnormalized),
            Err(Error::Validation(_))
        ));
        let zero_index = BELL.replace("[1,1]", "[0,1]");
        assert!(matches!(
            parse_state(&zero_index),
            Err(Error::Validation(_))
        ));
        let dup = BELL.replace("[2,2]", "[1,1]");
        assert!(matches!(parse_state(&dup), Err(Error::Validation(_))));
        // a product-tensor file declared bosonic but not symmetric
        let asym = r#"{"kind":"boson","L":2,"N":2,"basis":"product-tensor",
            "amplitudes":[{"index":[1,2],"re":1,"im":0}]}"#;
        assert!(matches!(parse_state(asym), Err(Error::Kind(_))));
        let wrong_basis = r#"{"kind":"distinguishable","L":2,"N":2,"basis":"slater",
            "amplitudes":[{"index":[1,2],"re":1,"im":0}]}"#;
        assert!(matches!(
            parse_state(wrong_basis),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn round_trips_are_exact() {
        for kind in [
            ParticleKind::Distinguishable,
            ParticleKind::Boson,
            ParticleKind::Fermion,
        ] {
            let psi = PureState::random(SystemShape::new(kind, 2, 4).unwrap(), 7).unwrap();
            let back = parse_state(&state_to_json(&psi).unwrap()).unwrap();
            assert_eq!(back, psi);
        }
        let rho = MixedState::random(SystemShape::new(ParticleKind::Fermion, 2, 4).unwrap(), 3, 1)
            .unwrap();
        let back = parse_density(&density_to_json(&rho).unwrap()).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn input_detection() {
        assert!(matches!(parse_input(BELL).unwrap(), Input::State(_)));
        let rho = named::werner(0.8).unwrap();
        let text = density_to_json(&rho).unwrap();
        assert!(matches!(parse_input(&text).unwrap(), Input::Density(_)));
    }

    #[test]
    fn support_violation_in_density_file() {
        // |01⟩⟨01| declared bosonic
        let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
        rows[1][1] = [1.0, 0.0];
        let f = DensityFile {
            kind: ParticleKind::Boson,
            particles: 2,
            modes: 2,
            matrix: rows,
        };
        assert!(matches!(f.into_state(), Err(Error::Support(_))));
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, b"{}").unwrap();
        write_atomic(&p, b"[]").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "[]");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
