//! JSON file formats. All indices in files are 1-based.
//!
//! * design: `{"v":7,"k":4,"lambda":2,"blocks":[[1,2,3,4],...]}`, blocks
//!   sorted and listed in lexicographic order on output.
//! * group: `{"degree":16,"generators":["(1,2)(3,4)",...]}`.
//! * cartesian decomposition: `{"partitions":[[[1,2],[3,4]],[[1,3],[2,4]]]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aut::AutResult;
use crate::design::{Design, DesignParams};
use crate::perm::PermGroup;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub blocks: Vec<Vec<usize>>,
}

impl DesignFile {
    pub fn from_design(d: &Design) -> Self {
        let p = d.params();
        DesignFile {
            v: p.v,
            k: p.k,
            lambda: p.lambda,
            blocks: d.sorted_blocks().into_iter().map(|b| b.into_iter().map(|x| x + 1).collect()).collect(),
        }
    }

    pub fn into_design(self) -> Result<Design> {
        let params = DesignParams::new(self.v, self.k, self.lambda)?;
        let blocks = self
            .blocks
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|x| x.checked_sub(1).ok_or_else(|| Error::input("point 0 in a 1-based design file")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Design::new(params, blocks)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupFile {
    pub fn from_group(g: &PermGroup) -> Self {
        GroupFile { degree: g.degree(), generators: g.generators().iter().map(|x| x.to_cycle_string()).collect() }
    }

    pub fn into_group(self) -> Result<PermGroup> {
        PermGroup::from_cycle_strings(self.degree, &self.generators)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub partitions: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutFile {
    pub order: u128,
    pub generators: Vec<String>,
}

impl From<&AutResult> for AutFile {
    fn from(a: &AutResult) -> Self {
        AutFile { order: a.order, generators: a.generator_strings() }
    }
}

pub fn design_to_json(d: &Design) -> String {
    serde_json::to_string(&DesignFile::from_design(d)).expect("serialisable")
}

pub fn design_from_json(text: &str) -> Result<Design> {
    serde_json::from_str::<DesignFile>(text).map_err(|e| Error::input(format!("design file: {e}")))?.into_design()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn read_design(path: &Path) -> Result<Design> {
    design_from_json(&read(path)?)
}

pub fn write_design(path: &Path, d: &Design) -> Result<()> {
    fs::write(path, design_to_json(d) + "\n")?;
    Ok(())
}

pub fn read_group(path: &Path) -> Result<PermGroup> {
    serde_json::from_str::<GroupFile>(&read(path)?).map_err(|e| Error::input(format!("group file: {e}")))?.into_group()
}

/// Reads a decomposition and converts it to 0-based points.
pub fn read_decomposition(path: &Path) -> Result<Vec<Vec<Vec<usize>>>> {
    let f: DecompositionFile =
        serde_json::from_str(&read(path)?).map_err(|e| Error::input(format!("decomposition file: {e}")))?;
    decomposition_from_one_based(f.partitions)
}

pub fn decomposition_from_one_based(parts: Vec<Vec<Vec<usize>>>) -> Result<Vec<Vec<Vec<usize>>>> {
    parts
        .into_iter()
        .map(|gamma| {
            gamma
                .into_iter()
                .map(|part| {
                    part.into_iter()
                        .map(|x| x.checked_sub(1).ok_or_else(|| Error::input("point 0 in a 1-based file")))
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_round_trip() {
        let text = r#"{"v":7,"k":4,"lambda":2,"blocks":[[4,5,6,7],[2,3,6,7],[2,3,4,5],[1,3,5,7],[1,3,4,6],[1,2,5,6],[1,2,4,7]]}"#;
        let d = design_from_json(text).unwrap();
        let out = design_to_json(&d);
        assert!(out.starts_with(r#"{"v":7,"k":4,"lambda":2,"blocks":[[1,2,4,7],"#));
        assert_eq!(design_from_json(&out).unwrap().sorted_blocks(), d.sorted_blocks());
    }

    #[test]
    fn malformed_files_are_input_errors() {
        assert!(design_from_json(r#"{"v":7,"k":4,"lambda":2,"blocks":[[0,1,2,3]]}"#).is_err());
        assert!(design_from_json(r#"{"v":7,"k":4}"#).is_err());
        assert!(design_from_json(r#"{"v":7,"k":4,"lambda":2,"blocks":[],"x":1}"#).is_err());
    }
}
