//! JSON algebra files.
//!
//! ```json
//! { "dim": 3,
//!   "mul": { "1,1": ["0", "0", "1"] },
//!   "W": [["1", "0"]],
//!   "complement": ["0", "1"] }
//! ```
//!
//! `mul` keys are basis indices `i,j` with `1 <= i, j < dim`; each value
//! lists the product coordinates, either all `dim` of them or only the
//! `dim - 1` maximal-ideal ones. Missing products are zero. A key `i,j`
//! without its mirror `j,i` sets both. `W` and `complement` use
//! maximal-ideal coordinates and must appear together; without them the
//! file describes a bare algebra. An optional `name` labels the algebra.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::algebra::{Element, LocalAlgebra, PointedPair, StructureTable};
use crate::catalog::{self, CatalogEntry};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Environment variable naming a directory of extra `<name>.json` entries.
pub const CATALOG_DIR_VAR: &str = "ADDAX_CATALOG_DIR";

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn scalar_list(v: &Value, what: &str) -> Result<Vec<Scalar>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array of scalar strings")))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => s.parse(),
            Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().unwrap())),
            _ => Err(schema(format!("{what} holds a non-scalar value {x}"))),
        })
        .collect()
}

fn ideal_vector(v: &Value, n: usize, what: &str) -> Result<Element> {
    let coords = scalar_list(v, what)?;
    if coords.len() != n - 1 {
        return Err(schema(format!(
            "{what} needs {} maximal-ideal coordinates, got {}",
            n - 1,
            coords.len()
        )));
    }
    Ok(Element::from_ideal_coords(&coords))
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || schema(format!("mul key {key:?} is not \"i,j\" with 1 <= i, j < {n}"));
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i >= n || j >= n {
        return Err(bad());
    }
    Ok((i, j))
}

/// Parses a JSON value into an algebra or a pointed pair.
pub fn entry_from_json(value: &Value) -> Result<CatalogEntry> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("top level must be an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "dim" | "mul" | "W" | "complement" | "name") {
            return Err(schema(format!("unknown field {key:?}")));
        }
    }
    let n = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("\"dim\" must be a positive integer"))? as usize;
    if n == 0 {
        return Err(schema("\"dim\" must be a positive integer"));
    }
    let mut products: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    if let Some(mul) = obj.get("mul") {
        let mul = mul
            .as_object()
            .ok_or_else(|| schema("\"mul\" must be an object"))?;
        for (key, v) in mul {
            let (i, j) = parse_key(key, n)?;
            let mut coords = scalar_list(v, &format!("mul[{key:?}]"))?;
            if coords.len() == n - 1 {
                coords.insert(0, Scalar::zero());
            }
            if coords.len() != n {
                return Err(schema(format!(
                    "mul[{key:?}] needs {} or {} coordinates, got {}",
                    n - 1,
                    n,
                    coords.len()
                )));
            }
            if products.insert((i, j), coords).is_some() {
                return Err(schema(format!("duplicate product {key:?}")));
            }
        }
    }
    let mut table = StructureTable::new(n);
    for (&(i, j), coords) in &products {
        table.set(i, j, coords.clone())?;
        if !products.contains_key(&(j, i)) {
            table.set(j, i, coords.clone())?;
        }
    }
    let mut alg = LocalAlgebra::validate(table).map_err(Error::InvalidAlgebra)?;
    if let Some(name) = obj.get("name") {
        let name = name.as_str().ok_or_else(|| schema("\"name\" must be a string"))?;
        alg = alg.with_name(name);
    }
    match (obj.get("W"), obj.get("complement")) {
        (None, None) => Ok(CatalogEntry::Algebra(alg)),
        (Some(w), Some(c)) => {
            let w = w
                .as_array()
                .ok_or_else(|| schema("\"W\" must be an array of vectors"))?
                .iter()
                .enumerate()
                .map(|(k, v)| ideal_vector(v, n, &format!("W[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let c = ideal_vector(c, n, "complement")?;
            Ok(CatalogEntry::Pair(PointedPair::new(alg, w, c)?))
        }
        _ => Err(schema("\"W\" and \"complement\" must be given together")),
    }
}

pub fn entry_from_str(text: &str) -> Result<CatalogEntry> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    entry_from_json(&value)
}

fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

/// Serializes in the format read by [`entry_from_json`], listing each
/// nonzero product once with `i <= j`.
pub fn entry_to_json(entry: &CatalogEntry) -> Value {
    let alg = entry.algebra();
    let n = alg.dim();
    let mut mul = Map::new();
    for i in 1..n {
        for j in i..n {
            let p = alg.basis_product(i, j);
            if p.iter().any(|c| !c.is_zero()) {
                mul.insert(format!("{i},{j}"), scalars_json(&p[1..]));
            }
        }
    }
    let mut out = Map::new();
    if let Some(name) = alg.name() {
        out.insert("name".into(), json!(name));
    }
    out.insert("dim".into(), json!(n));
    out.insert("mul".into(), Value::Object(mul));
    if let Some(p) = entry.pair() {
        out.insert(
            "W".into(),
            Value::Array(p.w_basis().iter().map(|w| scalars_json(&w.coords()[1..])).collect()),
        );
        out.insert("complement".into(), scalars_json(&p.complement().coords()[1..]));
    }
    Value::Object(out)
}

pub fn read_entry(path: &Path) -> Result<CatalogEntry> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    entry_from_str(&text)
}

/// Names of the `<name>.json` files in a user catalog directory, sorted.
pub fn user_catalog_names(dir: &Path) -> Result<Vec<String>> {
    let rd = fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("cannot list {}: {e}", dir.display())))?;
    let mut names: Vec<String> = rd
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    names.sort();
    Ok(names)
}

/// Resolves a catalog query against the built-in families, then against
/// `<user_dir>/<query>.json`.
pub fn resolve_catalog(query: &str, user_dir: Option<&Path>) -> Result<CatalogEntry> {
    match catalog::lookup(query) {
        Err(Error::UnknownCatalog(_)) => {}
        other => return other,
    }
    if let Some(dir) = user_dir {
        let valid_name = !query.is_empty()
            && query
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.');
        let path = dir.join(format!("{query}.json"));
        if valid_name && path.is_file() {
            return read_entry(&path);
        }
    }
    Err(Error::UnknownCatalog(query.to_string()))
}
