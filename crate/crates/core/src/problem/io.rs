//! Problem directories: `E.mtx A.mtx B.mtx C.mtx Eh.mtx Ah.mtx Bh.mtx Ch.mtx meta.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{NareProblem, ProblemKind, ProblemMetadata};
use crate::error::{Error, Result};
use crate::linalg::mm::{mm_write_dense, mm_write_sparse, read_dense, read_sparse};

#[derive(Debug, Serialize, Deserialize)]
struct MetaFile {
    kind: ProblemKind,
    seed: Option<u64>,
    n: usize,
    nh: usize,
    m: usize,
    p: usize,
    #[serde(default)]
    note: String,
}

impl NareProblem {
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        mm_write_sparse(&dir.join("E.mtx"), &self.e)?;
        mm_write_sparse(&dir.join("A.mtx"), &self.a)?;
        mm_write_dense(&dir.join("B.mtx"), self.b.as_ref())?;
        mm_write_dense(&dir.join("C.mtx"), self.c.as_ref())?;
        mm_write_sparse(&dir.join("Eh.mtx"), &self.eh)?;
        mm_write_sparse(&dir.join("Ah.mtx"), &self.ah)?;
        mm_write_dense(&dir.join("Bh.mtx"), self.bh.as_ref())?;
        mm_write_dense(&dir.join("Ch.mtx"), self.ch.as_ref())?;
        let meta = MetaFile {
            kind: self.meta.kind,
            seed: self.meta.seed,
            n: self.n(),
            nh: self.nh(),
            m: self.m(),
            p: self.p(),
            note: self.meta.note.clone(),
        };
        let path = dir.join("meta.json");
        let text = serde_json::to_string_pretty(&meta).map_err(|e| Error::Json { path: path.clone(), source: e })?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }

    /// Load and validate a problem directory. A missing `meta.json` is treated as a plain NARE.
    pub fn load(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::InvalidInput(format!("problem directory {} does not exist", dir.display())));
        }
        let meta_path = dir.join("meta.json");
        let meta = if meta_path.exists() {
            let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
            let m: MetaFile =
                serde_json::from_str(&text).map_err(|e| Error::Json { path: meta_path.clone(), source: e })?;
            ProblemMetadata { kind: m.kind, seed: m.seed, note: m.note }
        } else {
            ProblemMetadata::default()
        };
        let p = NareProblem {
            e: read_sparse(&dir.join("E.mtx"))?,
            a: read_sparse(&dir.join("A.mtx"))?,
            b: read_dense(&dir.join("B.mtx"))?,
            c: read_dense(&dir.join("C.mtx"))?,
            eh: read_sparse(&dir.join("Eh.mtx"))?,
            ah: read_sparse(&dir.join("Ah.mtx"))?,
            bh: read_dense(&dir.join("Bh.mtx"))?,
            ch: read_dense(&dir.join("Ch.mtx"))?,
            meta,
        };
        p.validate()?;
        Ok(p)
    }
}
