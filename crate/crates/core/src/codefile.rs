//! JSON storage for codes. Amplitudes are written as [re, im] pairs with
//! shortest round-trip float formatting, so a saved code reloads bit-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::SpinCode;
use crate::error::{Error, Result};
use crate::group::{GroupLabel, IrrepLabel};
use crate::linalg::C64;
use crate::su2::SpinJ;

pub const FORMAT_VERSION: u32 = 1;
pub const PHASE_CONVENTION: &str = "highest-m-real-positive";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format_version: u32,
    pub spin: SpinJ,
    pub group: GroupLabel,
    pub irrep: IrrepLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub ket0: Vec<[f64; 2]>,
    pub ket1: Vec<[f64; 2]>,
    pub phase_convention: String,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complex(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

impl From<&SpinCode> for CodeFile {
    fn from(code: &SpinCode) -> Self {
        CodeFile {
            format_version: FORMAT_VERSION,
            spin: code.spin,
            group: code.group,
            irrep: code.irrep,
            phi: code.phi,
            ket0: pairs(&code.ket0),
            ket1: pairs(&code.ket1),
            phase_convention: PHASE_CONVENTION.to_string(),
        }
    }
}

impl CodeFile {
    /// Validates the document and builds the code; normalization and
    /// orthogonality are checked to 1e-10.
    pub fn into_code(self) -> Result<SpinCode> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidCode(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        if self.phase_convention != PHASE_CONVENTION {
            return Err(Error::InvalidCode(format!(
                "unknown phase_convention {:?}",
                self.phase_convention
            )));
        }
        SpinCode::new(
            self.spin,
            self.group,
            self.irrep,
            self.phi,
            complex(&self.ket0),
            complex(&self.ket1),
        )
    }
}

pub fn code_to_json(code: &SpinCode) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CodeFile::from(code))?)
}

pub fn code_from_json(text: &str) -> Result<SpinCode> {
    let file: CodeFile = serde_json::from_str(text)?;
    file.into_code()
}

pub fn save_code(code: &SpinCode, path: &Path) -> Result<()> {
    fs::write(path, code_to_json(code)? + "\n")?;
    Ok(())
}

pub fn load_code(path: &Path) -> Result<SpinCode> {
    code_from_json(&fs::read_to_string(path)?)
}
