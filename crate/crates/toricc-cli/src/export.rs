//! Circuit interchange formats: compact json and the `H`/`CX`/`TICK` subset
//! of stim's text format.

use serde::{Deserialize, Serialize};
use toricc_core::{Circuit, Coord, CxGate, Encoder, Lattice, Layer, SiteIndexMap};

use crate::error::{CliError, CliResult};

#[derive(Serialize, Deserialize)]
struct GateJson {
    c: [usize; 2],
    t: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    #[serde(rename = "L")]
    l: usize,
    cx_layers: Vec<Vec<GateJson>>,
    h_sites: Vec<[usize; 2]>,
}

fn pair(c: Coord) -> [usize; 2] {
    [c.x, c.y]
}

fn coord(lat: &Lattice, [x, y]: [usize; 2]) -> CliResult<Coord> {
    let c = Coord::new(x, y);
    if lat.is_qubit(c) {
        Ok(c)
    } else {
        Err(CliError::Format(format!("{c} is not a qubit site")))
    }
}

/// Compact json with layers in the order stored in `c`.
pub fn circuit_to_json(c: &Circuit) -> String {
    let doc = CircuitJson {
        l: c.l,
        cx_layers: c
            .cx_layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| GateJson {
                        c: pair(g.control),
                        t: pair(g.target),
                    })
                    .collect()
            })
            .collect(),
        h_sites: c.h_sites.iter().map(|&s| pair(s)).collect(),
    };
    serde_json::to_string(&doc).expect("plain structs serialize")
}

pub fn circuit_from_json(text: &str) -> CliResult<Circuit> {
    let doc: CircuitJson = serde_json::from_str(text)?;
    let lat = Lattice::new(doc.l)?;
    let mut cx_layers = Vec::with_capacity(doc.cx_layers.len());
    for layer in doc.cx_layers {
        let mut gates = Vec::with_capacity(layer.len());
        for g in layer {
            gates.push(CxGate::new(coord(&lat, g.c)?, coord(&lat, g.t)?));
        }
        cx_layers.push(Layer::new(gates));
    }
    let h_sites = doc
        .h_sites
        .into_iter()
        .map(|s| coord(&lat, s))
        .collect::<CliResult<_>>()?;
    Ok(Circuit {
        l: doc.l,
        cx_layers,
        h_sites,
    })
}

fn index(map: &SiteIndexMap, c: Coord) -> usize {
    map.index(c).expect("circuit sites are qubit sites")
}

/// Encoder order: one `H` line, then one `CX` line per layer, blocks
/// separated by `TICK`. Empty blocks are omitted.
pub fn encoder_to_stim(enc: &Encoder) -> String {
    let map = SiteIndexMap::new(enc.l);
    let mut blocks = Vec::new();
    if !enc.h_sites.is_empty() {
        let mut idx: Vec<usize> = enc.h_sites.iter().map(|&s| index(&map, s)).collect();
        idx.sort_unstable();
        let line: Vec<String> = idx.iter().map(usize::to_string).collect();
        blocks.push(format!("H {}", line.join(" ")));
    }
    for layer in enc.cx_layers.iter().filter(|l| !l.is_empty()) {
        let mut pairs: Vec<(usize, usize)> = layer
            .iter()
            .map(|g| (index(&map, g.control), index(&map, g.target)))
            .collect();
        pairs.sort_unstable();
        let line: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} {b}")).collect();
        blocks.push(format!("CX {}", line.join(" ")));
    }
    let mut out = blocks.join("\nTICK\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Parses the dialect written by [`encoder_to_stim`]. An `H` line must come
/// before any `CX` line.
pub fn encoder_from_stim(l: usize, text: &str) -> CliResult<Encoder> {
    let lat = Lattice::new(l)?;
    let map = lat.index_map();
    let site = |tok: &str, line: usize| -> CliResult<Coord> {
        tok.parse::<usize>()
            .ok()
            .and_then(|i| map.coord(i))
            .ok_or_else(|| CliError::Format(format!("line {line}: bad qubit index {tok:?}")))
    };
    let mut enc = Encoder {
        l,
        h_sites: Vec::new(),
        cx_layers: Vec::new(),
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("TICK") => {}
            Some("H") => {
                if !enc.cx_layers.is_empty() {
                    return Err(CliError::Format(format!("line {line}: H after CX")));
                }
                for t in toks {
                    enc.h_sites.push(site(t, line)?);
                }
            }
            Some("CX") => {
                let idx: Vec<Coord> = toks.map(|t| site(t, line)).collect::<CliResult<_>>()?;
                if !idx.len().is_multiple_of(2) {
                    return Err(CliError::Format(format!(
                        "line {line}: odd CX target count"
                    )));
                }
                let gates = idx.chunks(2).map(|p| CxGate::new(p[0], p[1])).collect();
                enc.cx_layers.push(Layer::new(gates));
            }
            Some(other) => {
                return Err(CliError::Format(format!(
                    "line {line}: unknown instruction {other}"
                )))
            }
        }
    }
    enc.h_sites.sort_unstable();
    Ok(enc)
}
