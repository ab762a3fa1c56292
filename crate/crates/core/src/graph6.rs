//! graph6 encoding (McKay's format) for graphs of up to 64 vertices.
//!
//! The size header is one byte `63 + n` for `n <= 62` and `~` followed by
//! three 6-bit groups otherwise. The body lists the upper triangle column by
//! column, `x(0,1) x(0,2) x(1,2) x(0,3) ...`, six bits per byte, offset by 63
//! and zero-padded.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const OFFSET: u8 = 63;

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(OFFSET + n as u8);
    } else {
        out.push(b'~');
        for shift in [12, 6, 0] {
            out.push(OFFSET + ((n >> shift) & 0x3f) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(OFFSET + (acc << (6 - filled)));
    }
    // every byte is in 63..=126, so this is ASCII
    String::from_utf8(out).expect("graph6 output is ASCII")
}

pub fn decode(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b:#04x} outside 63..=126")));
    }
    let (n, body) = match bytes.first() {
        None => return Err(Error::Graph6("empty input".into())),
        Some(b'~') => {
            if bytes.get(1) == Some(&b'~') {
                return Err(Error::Graph6("8-byte size header not supported".into()));
            }
            if bytes.len() < 4 {
                return Err(Error::Graph6("truncated size header".into()));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| acc << 6 | (b - OFFSET) as usize);
            (n, &bytes[4..])
        }
        Some(&b) => ((b - OFFSET) as usize, &bytes[1..]),
    };
    if n > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "graph6 vertex count",
            limit: MAX_VERTICES,
            got: n,
        });
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let want = nbits.div_ceil(6);
    if body.len() != want {
        return Err(Error::Graph6(format!(
            "body has {} bytes, {want} expected for n={n}",
            body.len()
        )));
    }
    let mut g = Graph::new(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - OFFSET;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 {
        let last = body[want - 1] - OFFSET;
        if last & ((1 << (6 - nbits % 6)) - 1) != 0 {
            return Err(Error::Graph6("non-zero padding bits".into()));
        }
    }
    Ok(g)
}
