//! Fault models of test purposes extracted from a leveled multigraph.

mod multigraph;
mod purpose;

pub use multigraph::{build_multigraph, enumerate_fault_paths, Multigraph, Node};
pub use purpose::{path_to_test_purpose, verify_tp_invariants, TestPurpose, TpInvariants};

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{Action, Word};
use crate::error::{Error, Result};

/// Path limit used when none is given.
pub const DEFAULT_LIMIT: usize = 1000;

/// Generation parameters and extracted paths, stored as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub m: usize,
    pub n: usize,
    pub levels: usize,
    pub limit: usize,
    /// More fault paths exist than `limit`; the model is not exhaustive.
    pub truncated: bool,
    pub inputs: Vec<Action>,
    /// `L_U` without δ.
    pub outputs: Vec<Action>,
    pub paths: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultModel {
    pub manifest: Manifest,
    pub purposes: Vec<TestPurpose>,
}

impl FaultModel {
    pub fn len(&self) -> usize {
        self.purposes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.purposes.is_empty()
    }

    pub fn is_exhaustive(&self) -> bool {
        !self.manifest.truncated
    }

    /// Writes `tp-0000.iolts`, `tp-0001.iolts`, … and `manifest.json`
    /// into `dir`, creating it if needed.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (i, tp) in self.purposes.iter().enumerate() {
            fs::write(dir.join(tp_file_name(i)), tp.to_text())?;
        }
        fs::write(
            dir.join("manifest.json"),
            serde_json::to_string_pretty(&self.manifest)? + "\n",
        )?;
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<FaultModel> {
        let manifest: Manifest =
            serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
        let purposes = (0..manifest.paths.len())
            .map(|i| {
                let file = tp_file_name(i);
                let tp = TestPurpose::parse(&fs::read_to_string(dir.join(&file))?)
                    .map_err(|e| Error::MalformedTestPurpose(format!("{file}: {e}")))?;
                if tp.path() != &manifest.paths[i] {
                    return Err(Error::MalformedTestPurpose(format!(
                        "{file}: path differs from manifest"
                    )));
                }
                Ok(tp)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FaultModel { manifest, purposes })
    }
}

fn tp_file_name(i: usize) -> String {
    format!("tp-{i:04}.iolts")
}

/// Builds the multigraph for `spec` and bound `m` and turns up to `limit`
/// shortest fault paths into test purposes. With a limit above the number
/// of fault paths the model is exhaustive.
pub fn generate_fault_model(spec: &crate::Iolts, m: usize, limit: usize) -> Result<FaultModel> {
    if limit < 1 {
        return Err(Error::InvalidParameter(
            "path limit must be at least 1".into(),
        ));
    }
    let g = build_multigraph(spec, m)?;
    let mut paths = multigraph::fault_paths(&g, limit.saturating_add(1));
    let truncated = paths.len() > limit;
    paths.truncate(limit);
    log::debug!(
        "multigraph: {} levels, {} nodes, {} paths",
        g.levels(),
        g.node_count(),
        paths.len()
    );

    let inputs = g.inputs().to_vec();
    let outputs: Vec<Action> = g
        .outputs()
        .iter()
        .filter(|a| !a.is_quiescence())
        .cloned()
        .collect();
    let purposes = paths
        .par_iter()
        .map(|p| path_to_test_purpose(p, &inputs, &outputs))
        .collect::<Result<Vec<_>>>()?;
    Ok(FaultModel {
        manifest: Manifest {
            m,
            n: g.n(),
            levels: g.levels(),
            limit,
            truncated,
            inputs,
            outputs,
            paths,
        },
        purposes,
    })
}
