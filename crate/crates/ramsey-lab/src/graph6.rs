//! graph6 encoding and decoding for graphs with at most 64 vertices.
//!
//! The format packs the upper triangle of the adjacency matrix in column
//! order (for each v, bits x(0,v)..x(v-1,v)) into 6-bit groups offset by 63.

use thiserror::Error;

use crate::graph::{Graph, GraphError, MAX_VERTICES};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    EmptyInput,
    #[error("malformed header byte {0:#x}")]
    BadHeader(u8),
    #[error("vertex count {0} out of range (max {MAX_VERTICES})")]
    VertexCountOutOfRange(usize),
    #[error("expected {expected} body bytes, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("byte {0:#x} outside the graph6 alphabet")]
    BadByte(u8),
    #[error("trailing padding bits are nonzero")]
    TrailingBits,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2 + 5) / 6
}

/// Decodes a graph6 string into a graph. Inverse of [`emit_graph6`].
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::EmptyInput);
    }
    let (n, rest) = if bytes[0] == b'~' {
        // Long form: '~' then three bytes encoding an 18-bit vertex count.
        if bytes.len() < 4 {
            return Err(Graph6Error::BadHeader(b'~'));
        }
        if bytes[1] == b'~' {
            return Err(Graph6Error::BadHeader(b'~'));
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::BadByte(b));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, &bytes[4..])
    } else {
        let b = bytes[0];
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadHeader(b));
        }
        ((b - 63) as usize, &bytes[1..])
    };
    if n > MAX_VERTICES {
        return Err(Graph6Error::VertexCountOutOfRange(n));
    }
    let expected = body_len(n);
    if rest.len() != expected {
        return Err(Graph6Error::BadLength { expected, found: rest.len() });
    }
    let mut bits = Vec::with_capacity(rest.len() * 6);
    for &b in rest {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte(b));
        }
        let x = b - 63;
        for k in (0..6).rev() {
            bits.push(x >> k & 1 == 1);
        }
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if bits[idx] {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    if bits[idx..].iter().any(|&b| b) {
        return Err(Graph6Error::TrailingBits);
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Encodes a graph as a graph6 string.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(b'~');
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut bits = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(false);
    }
    for chunk in bits.chunks(6) {
        let mut x = 0u8;
        for &b in chunk {
            x = (x << 1) | b as u8;
        }
        out.push(63 + x);
    }
    String::from_utf8(out).expect("graph6 alphabet is ASCII")
}
