//! Complex descriptions on disk. Three JSON shapes are accepted:
//!
//! ```text
//! {"type":"simplicial", "vertices":N, "facets":[[v,...],...]}
//! {"type":"cup_algebra", "basis":[{"name":s,"degree":k},...],
//!  "d":[[src,[dst,...]],...], "e":[{"i":k,"args":[s,s],"value":[s,...]},...]}
//! {"type":"tensor", "factors":[path, path]}
//! ```
//!
//! Unlisted `e` entries are zero; tensor factor paths are resolved relative
//! to the referencing file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use adem_cartan::cochain::{cochain_algebra, tensor_algebra, CupAlgebra, EKey, SimplicialComplex};
use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ComplexFile {
    Simplicial { vertices: usize, facets: Vec<Vec<u32>> },
    CupAlgebra {
        basis: Vec<BasisEntry>,
        #[serde(default)]
        d: Vec<(String, Vec<String>)>,
        #[serde(default)]
        e: Vec<ETableEntry>,
    },
    Tensor { factors: Vec<PathBuf> },
}

#[derive(Deserialize)]
struct BasisEntry {
    name: String,
    degree: i64,
}

#[derive(Deserialize)]
struct ETableEntry {
    i: i64,
    args: (String, String),
    value: Vec<String>,
}

pub fn load_complex(path: &Path) -> Result<CupAlgebra> {
    load_with_depth(path, 0)
}

fn load_with_depth(path: &Path, depth: usize) -> Result<CupAlgebra> {
    if depth > 8 {
        bail!("tensor factors nest deeper than 8 files; is there a reference cycle?");
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read complex file {}", path.display()))?;
    let parsed: ComplexFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    match parsed {
        ComplexFile::Simplicial { vertices, facets } => {
            let k = SimplicialComplex::new(vertices, facets)
                .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
            let top = k.simplices().len().saturating_sub(1) as i64;
            // i_max = 2*top covers every e_i with a plausible target degree.
            Ok(cochain_algebra(&k, 2 * top))
        }
        ComplexFile::CupAlgebra { basis, d, e } => {
            build_cup_algebra(basis, d, e).with_context(|| format!("in {}", path.display()))
        }
        ComplexFile::Tensor { factors } => {
            if factors.len() != 2 {
                bail!("{}: tensor files take exactly two factors", path.display());
            }
            let dir = path.parent().unwrap_or_else(|| Path::new("."));
            let a = load_with_depth(&dir.join(&factors[0]), depth + 1)?;
            let b = load_with_depth(&dir.join(&factors[1]), depth + 1)?;
            tensor_algebra(&a, &b)
                .map_err(|e| anyhow::anyhow!("{}: tensor structure failed: {}", path.display(), e))
        }
    }
}

fn build_cup_algebra(
    basis: Vec<BasisEntry>,
    d: Vec<(String, Vec<String>)>,
    e: Vec<ETableEntry>,
) -> Result<CupAlgebra> {
    if basis.is_empty() {
        bail!("a cup_algebra needs at least one basis element");
    }
    let top = basis.iter().map(|b| b.degree).max().unwrap();
    let mut names: Vec<Vec<String>> = vec![Vec::new(); (top + 1) as usize];
    let mut index: BTreeMap<String, (i64, usize)> = BTreeMap::new();
    for b in basis {
        if b.degree < 0 {
            bail!("basis element {} has negative degree {}", b.name, b.degree);
        }
        let bucket = &mut names[b.degree as usize];
        if index.insert(b.name.clone(), (b.degree, bucket.len())).is_some() {
            bail!("basis name {} appears twice", b.name);
        }
        bucket.push(b.name);
    }
    let locate = |name: &str| -> Result<(i64, usize)> {
        index.get(name).copied().with_context(|| format!("unknown basis name {}", name))
    };

    let mut d_map: Vec<Vec<BTreeSet<usize>>> =
        names.iter().map(|bucket| vec![BTreeSet::new(); bucket.len()]).collect();
    for (src, dsts) in d {
        let (p, j) = locate(&src)?;
        let entry = &mut d_map[p as usize][j];
        if !entry.is_empty() {
            bail!("differential of {} is listed twice", src);
        }
        for dst in dsts {
            let (q, k) = locate(&dst)?;
            if q != p + 1 {
                bail!("d({}) hits {} of degree {}, expected degree {}", src, dst, q, p + 1);
            }
            if !entry.insert(k) {
                bail!("d({}) lists {} twice", src, dst);
            }
        }
    }

    let mut e_map: BTreeMap<EKey, BTreeSet<usize>> = BTreeMap::new();
    for entry in e {
        if entry.i < 0 {
            bail!("e_{} is not a valid structure map", entry.i);
        }
        let (p, j) = locate(&entry.args.0)?;
        let (q, k) = locate(&entry.args.1)?;
        let target = p + q - entry.i;
        let mut value = BTreeSet::new();
        for name in &entry.value {
            let (t, idx) = locate(name)?;
            if t != target {
                bail!(
                    "e_{}({},{}) value {} has degree {}, expected {}",
                    entry.i, entry.args.0, entry.args.1, name, t, target
                );
            }
            if !value.insert(idx) {
                bail!("e_{}({},{}) lists {} twice", entry.i, entry.args.0, entry.args.1, name);
            }
        }
        if e_map.insert((entry.i, p, j, q, k), value).is_some() {
            bail!("e_{}({},{}) is listed twice", entry.i, entry.args.0, entry.args.1);
        }
    }

    // Unlisted entries are zero, so the table is total: take i_max large
    // enough that no plausible e_i falls outside it.
    Ok(CupAlgebra::from_parts(names, d_map, e_map, 2 * top))
}
