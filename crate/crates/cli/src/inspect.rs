use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use ribbon_moduli::enumerate::{automorphisms, canonical_key};
use ribbon_moduli::permgraph::StableRibbonGraph;
use serde_json::json;

use crate::{Format, Status};

/// Human-readable summary; the stability verdict comes from `validate`.
pub fn digest(g: &StableRibbonGraph) -> String {
    let mut s = String::new();
    let verdict = match g.validate() {
        Ok(()) => "stable".to_string(),
        Err(v) => format!("not stable: {v}"),
    };
    let _ = writeln!(s, "V={} E={} F={} genus {}", g.vertices().len(), g.edge_count(), g.face_count(), g.genus());
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = writeln!(s, "  vertex {i}: degree {} cycles {:?} defect {}", v.degree(), v.cycles, v.defect);
    }
    for f in g.faces() {
        let _ = writeln!(s, "  face {}: edges {:?}", f.label, f.edges());
    }
    if g.validate().is_ok() {
        let _ = writeln!(s, "|Aut| = {}", automorphisms(g).order);
    }
    let _ = writeln!(s, "{verdict}");
    s
}

pub fn run(path: &Path, format: Format) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = StableRibbonGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let valid = g.validate();
    match format {
        Format::Dot => print!("{}", g.to_dot()),
        Format::Json => {
            let v = json!({
                "graph": g.to_file(),
                "vertices": g.vertices().len(),
                "edges": g.edge_count(),
                "faces": g.faces().iter().map(|f| json!({"label": f.label, "edges": f.edges()})).collect::<Vec<_>>(),
                "genus": g.genus(),
                "degrees": g.vertices().iter().map(|v| v.degree()).collect::<Vec<_>>(),
                "defects": g.vertices().iter().map(|v| v.defect).collect::<Vec<_>>(),
                "aut_order": valid.is_ok().then(|| automorphisms(&g).order),
                "key": valid.is_ok().then(|| canonical_key(&g).short_hex()),
                "stable": valid.is_ok(),
                "violation": valid.as_ref().err().map(ToString::to_string),
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Text => print!("{}", digest(&g)),
    }
    Ok(if valid.is_ok() { Status::Ok } else { Status::PropertyFailed })
}
