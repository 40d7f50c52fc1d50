use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use ribbon_moduli::enumerate::{enumerate_trivalent, GraphClass};
use ribbon_moduli::permgraph::{GraphFile, StableRibbonGraph};

pub const CACHE_ENV: &str = "RIBBON_CACHE_DIR";

fn cache_path(genus: u32, faces: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("trivalent-g{genus}-n{faces}.json")))
}

/// Trivalent classes, read from and written to the cache directory when one is set.
/// Cached graphs are canonical representatives; keys and automorphisms are recomputed.
pub fn trivalent_classes(genus: u32, faces: usize) -> Result<Vec<GraphClass>> {
    let path = cache_path(genus, faces);
    if let Some(path) = path.as_ref().filter(|p| p.exists()) {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let files: Vec<GraphFile> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let mut classes = files
            .iter()
            .map(|f| Ok(GraphClass::of(&StableRibbonGraph::from_file(f)?)))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("rebuilding classes from {}", path.display()))?;
        classes.sort_by(|a, b| a.key.cmp(&b.key));
        return Ok(classes);
    }
    let classes = enumerate_trivalent(genus, faces)?;
    if let Some(path) = path {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let files: Vec<GraphFile> = classes.iter().map(|c| c.graph.to_file()).collect();
        fs::write(&path, serde_json::to_string(&files)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(classes)
}
