//! On-disk formats: binary node-content files and plain-text symbol files.

use std::fs;
use std::path::Path;

use blocksec_core::{AnyCode, DssCode, FieldElement, FieldSpec, NodeContent, NodeData};

use crate::Failure;

const MAGIC: &[u8; 4] = b"DSSC";
const VERSION: u8 = 0x01;

/// Writes a node-content file: magic "DSSC", version 0x01, then q, element
/// count, and each element as 4-byte little-endian words.
pub fn write_node_content(path: &Path, field: FieldSpec, values: &[FieldElement]) -> Result<(), Failure> {
    let mut buf = Vec::with_capacity(13 + 4 * values.len());
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.extend_from_slice(&(field.q() as u32).to_le_bytes());
    buf.extend_from_slice(&(values.len() as u32).to_le_bytes());
    for v in values {
        buf.extend_from_slice(&(v.value() as u32).to_le_bytes());
    }
    fs::write(path, buf)?;
    Ok(())
}

/// Reads a node-content file, checking magic, version, and field.
pub fn read_node_content(path: &Path, field: FieldSpec) -> Result<Vec<FieldElement>, Failure> {
    let buf = fs::read(path)?;
    let fail = |msg: &str| Failure::Domain(format!("{}: {msg}", path.display()));
    if buf.len() < 13 || &buf[0..4] != MAGIC {
        return Err(fail("not a node-content file"));
    }
    if buf[4] != VERSION {
        return Err(fail(&format!("unsupported version {}", buf[4])));
    }
    let q = u32::from_le_bytes(buf[5..9].try_into().unwrap()) as u64;
    if q != field.q() {
        return Err(fail(&format!("field mismatch: file has q={q}, expected q={}", field.q())));
    }
    let count = u32::from_le_bytes(buf[9..13].try_into().unwrap()) as usize;
    if buf.len() != 13 + 4 * count {
        return Err(fail("truncated node-content file"));
    }
    let mut values = Vec::with_capacity(count);
    for i in 0..count {
        let raw = u32::from_le_bytes(buf[13 + 4 * i..17 + 4 * i].try_into().unwrap()) as u64;
        if raw >= q {
            return Err(fail(&format!("element {raw} out of range for q={q}")));
        }
        values.push(field.elem(raw));
    }
    Ok(values)
}

pub fn node_file_name(node: usize) -> String {
    format!("node_{node}.dssc")
}

/// The flat element list a node-content file stores for one node.
pub fn values_of(data: &NodeData) -> Vec<FieldElement> {
    match data {
        NodeData::Graph(nc) => nc.units.iter().map(|(_, v)| *v).collect(),
        NodeData::Pm(row) => row.clone(),
    }
}

/// Rebuilds typed node content from a flat element list; the graph family
/// keys values by the node's incident edges, in placement order.
pub fn data_from_values(
    code: &AnyCode,
    node: usize,
    values: Vec<FieldElement>,
) -> Result<NodeData, Failure> {
    if values.len() != code.d() {
        return Err(Failure::Domain(format!(
            "node {node}: expected {} elements, got {}",
            code.d(),
            values.len()
        )));
    }
    match code {
        AnyCode::Graph(c) => {
            let edges = c.placement(node)?;
            Ok(NodeData::Graph(NodeContent {
                node,
                units: edges.iter().copied().zip(values).collect(),
            }))
        }
        AnyCode::Pm(_) => Ok(NodeData::Pm(values)),
    }
}

/// Reads a symbol file: one decimal integer per line (blank lines and
/// `#` comments skipped), reduced mod q. Returns the symbols and how many
/// lines needed reduction.
pub fn read_symbols(path: &Path, field: FieldSpec) -> Result<(Vec<FieldElement>, usize), Failure> {
    let text = fs::read_to_string(path)?;
    let mut symbols = Vec::new();
    let mut reduced = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: u64 = line.parse().map_err(|_| {
            Failure::Usage(format!(
                "{}:{}: not a decimal integer: {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        if value >= field.q() {
            reduced += 1;
        }
        symbols.push(field.elem(value));
    }
    Ok((symbols, reduced))
}

pub fn format_symbols(values: &[FieldElement]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.value().to_string());
        out.push('\n');
    }
    out
}
