use std::path::PathBuf;

use sha2::{Digest, Sha256};

use scst_core::lattice::CohClass;
use scst_core::manifold::{builtin, load_document, FourManifold, ManifoldError};

/// Directory searched for `NAME.json` before the compiled-in fixtures.
pub const FIXTURE_DIR_ENV: &str = "SCST_FIXTURE_DIR";

pub struct Loaded {
    pub manifold: FourManifold,
    /// sha256 of the canonical document
    pub digest: String,
}

fn itemize(e: ManifoldError) -> Vec<String> {
    match e {
        ManifoldError::Invalid(v) => v.into_iter().map(|x| x.to_string()).collect(),
        other => vec![other.to_string()],
    }
}

fn read_document(path: &PathBuf) -> Result<FourManifold, Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    load_document(&text).map_err(itemize)
}

pub fn load(source: &str) -> Result<Loaded, Vec<String>> {
    let manifold = if let Some(name) = source.strip_prefix("builtin:") {
        let override_path = std::env::var_os(FIXTURE_DIR_ENV)
            .map(|d| PathBuf::from(d).join(format!("{name}.json")))
            .filter(|p| p.is_file());
        match override_path {
            Some(p) => read_document(&p)?,
            None => builtin(name).ok_or_else(|| vec![format!("unknown builtin fixture {name:?}")])?,
        }
    } else {
        read_document(&PathBuf::from(source))?
    };
    let digest = hex::encode(Sha256::digest(manifold.to_canonical_json().as_bytes()));
    Ok(Loaded { manifold, digest })
}

/// Parses `--w`; without it, the document's w or the 0/1 lift of w₂.
pub fn parse_w(m: &FourManifold, w: Option<&str>) -> Result<CohClass, Vec<String>> {
    let Some(text) = w else {
        return Ok(m.default_w());
    };
    let coords: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|e| vec![format!("--w: {e}")])?;
    let rank = m.lattice().rank();
    if coords.len() != rank {
        return Err(vec![format!(
            "--w has {} entries, lattice rank is {rank}",
            coords.len()
        )]);
    }
    let w = CohClass::from_ints(&coords);
    if !m.lattice().is_characteristic(&w) {
        return Err(vec![format!("--w {w} is not characteristic")]);
    }
    Ok(w)
}
