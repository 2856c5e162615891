//! graph6 and sparse6 text formats.
//!
//! Both are the widely used 6-bit ASCII encodings: graph6 stores the upper
//! triangle of the adjacency matrix, sparse6 stores an edge stream with
//! k-bit vertex numbers. Readers accept the optional `>>graph6<<` and
//! `>>sparse6<<` headers and reject trailing garbage; writers emit the
//! headerless canonical byte string.

use super::Graph;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("byte {byte:#04x} at position {pos} is outside the printable 6-bit range")]
    BadChar { pos: usize, byte: u8 },
    #[error("input ends inside the {what}")]
    Truncated { what: &'static str },
    #[error("{extra} unexpected bytes after the encoded graph")]
    TrailingData { extra: usize },
    #[error("graphs on more than {max} vertices are not supported (got {n})")]
    GraphTooLarge { n: u64, max: u64 },
    #[error("padding bits are not {expected}")]
    BadPadding { expected: &'static str },
    #[error("sparse6 input must start with ':'")]
    MissingColon,
    #[error("sparse6 stream contains a self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
}

/// Largest vertex count either format can express in the 4-byte size field.
pub const MAX_N: u64 = 258_047;

fn strip_header<'a>(text: &'a str, header: &str) -> &'a str {
    text.strip_prefix(header).unwrap_or(text)
}

/// Decodes the leading size field; returns (n, bytes consumed).
fn read_size(data: &[u8]) -> Result<(usize, usize), FormatError> {
    let b0 = *data.first().ok_or(FormatError::Empty)?;
    if b0 == 126 {
        let b1 = *data.get(1).ok_or(FormatError::Truncated { what: "size field" })?;
        if b1 == 126 {
            return Err(FormatError::GraphTooLarge { n: 0, max: MAX_N });
        }
        let mut n: u64 = 0;
        for i in 1..4 {
            let b = *data.get(i).ok_or(FormatError::Truncated { what: "size field" })?;
            if !(63..=126).contains(&b) {
                return Err(FormatError::BadChar { pos: i, byte: b });
            }
            n = n << 6 | (b - 63) as u64;
        }
        if n > MAX_N {
            return Err(FormatError::GraphTooLarge { n, max: MAX_N });
        }
        Ok((n as usize, 4))
    } else {
        if !(63..=126).contains(&b0) {
            return Err(FormatError::BadChar { pos: 0, byte: b0 });
        }
        Ok(((b0 - 63) as usize, 1))
    }
}

fn write_size(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        debug_assert!(n as u64 <= MAX_N);
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
}

/// Bit reader over 6-bit bytes.
struct Bits<'a> {
    data: &'a [u8],
    pos: usize, // bit position
}

impl<'a> Bits<'a> {
    fn new(data: &'a [u8], offset: usize) -> Result<Bits<'a>, FormatError> {
        for (i, &b) in data.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(FormatError::BadChar { pos: offset + i, byte: b });
            }
        }
        Ok(Bits { data, pos: 0 })
    }

    fn remaining(&self) -> usize {
        self.data.len() * 6 - self.pos
    }

    fn take(&mut self, k: usize) -> Option<u64> {
        if self.remaining() < k {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..k {
            let byte = self.data[self.pos / 6] - 63;
            let bit = byte >> (5 - self.pos % 6) & 1;
            v = v << 1 | bit as u64;
            self.pos += 1;
        }
        Some(v)
    }
}

struct BitWriter {
    bytes: Vec<u8>,
    nbits: usize,
}

impl BitWriter {
    fn new() -> BitWriter {
        BitWriter { bytes: Vec::new(), nbits: 0 }
    }

    fn push(&mut self, bit: u64) {
        if self.nbits % 6 == 0 {
            self.bytes.push(0);
        }
        let last = self.bytes.last_mut().unwrap();
        *last |= ((bit & 1) as u8) << (5 - self.nbits % 6);
        self.nbits += 1;
    }

    fn push_bits(&mut self, v: u64, k: usize) {
        for i in (0..k).rev() {
            self.push(v >> i);
        }
    }

    fn finish(mut self, pad: u64) -> Vec<u8> {
        while self.nbits % 6 != 0 {
            self.push(pad);
        }
        for b in &mut self.bytes {
            *b += 63;
        }
        self.bytes
    }
}

pub fn read_graph6(text: &str) -> Result<Graph, FormatError> {
    let body = strip_header(text.trim_end_matches(['\n', '\r']), ">>graph6<<");
    let data = body.as_bytes();
    let (n, used) = read_size(data)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expect = nbits.div_ceil(6);
    let rest = &data[used..];
    if rest.len() < expect {
        return Err(FormatError::Truncated { what: "adjacency bits" });
    }
    if rest.len() > expect {
        return Err(FormatError::TrailingData { extra: rest.len() - expect });
    }
    let mut bits = Bits::new(rest, used)?;
    let mut g = Graph::new(n);
    for j in 1..n {
        for i in 0..j {
            if bits.take(1).unwrap() == 1 {
                g.add_edge(i, j).expect("i < j < n");
            }
        }
    }
    if bits.take(bits.remaining()).unwrap_or(0) != 0 {
        return Err(FormatError::BadPadding { expected: "zero" });
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    write_size(&mut out, n);
    let mut w = BitWriter::new();
    for j in 1..n {
        for i in 0..j {
            w.push(g.is_edge(i, j) as u64);
        }
    }
    out.extend(w.finish(0));
    String::from_utf8(out).unwrap()
}

pub fn read_sparse6(text: &str) -> Result<Graph, FormatError> {
    let body = strip_header(text.trim_end_matches(['\n', '\r']), ">>sparse6<<");
    let data = body.as_bytes();
    let data = data.strip_prefix(b":").ok_or(FormatError::MissingColon)?;
    let (n, used) = read_size(data)?;
    let k = vertex_bits(n);
    let mut bits = Bits::new(&data[used..], used + 1)?;
    let mut g = Graph::new(n);
    let mut v: usize = 0;
    while let (Some(b), Some(x)) = (bits.take(1), bits.take(k)) {
        if b == 1 {
            v += 1;
        }
        let x = x as usize;
        // Trailing 1-padding decodes as out-of-range entries; stop there.
        if x >= n || v >= n {
            break;
        }
        if x > v {
            v = x;
        } else if x == v {
            return Err(FormatError::SelfLoop { vertex: v });
        } else {
            g.add_edge(x, v).expect("x < v < n");
        }
    }
    Ok(g)
}

pub fn write_sparse6(g: &Graph) -> String {
    let n = g.n();
    let k = vertex_bits(n);
    let mut out = vec![b':'];
    write_size(&mut out, n);
    let mut w = BitWriter::new();
    let mut cur: usize = 0;
    for v in 0..n {
        for u in 0..v {
            if !g.is_edge(u, v) {
                continue;
            }
            if v == cur {
                w.push(0);
                w.push_bits(u as u64, k);
            } else if v == cur + 1 {
                cur += 1;
                w.push(1);
                w.push_bits(u as u64, k);
            } else {
                cur = v;
                w.push(1);
                w.push_bits(v as u64, k);
                w.push(0);
                w.push_bits(u as u64, k);
            }
        }
    }
    // When n is a power of two and the stream stops short of vertex n-1,
    // all-ones padding could parse as one more edge group and plant a loop
    // on n-1; a single zero bit turns it into a harmless skip.
    let pad = (6 - w.nbits % 6) % 6;
    if k < 6 && n == 1usize << k && pad >= k && cur < n - 1 {
        w.push(0);
    }
    out.extend(w.finish(1));
    String::from_utf8(out).unwrap()
}

fn vertex_bits(n: usize) -> usize {
    match n.saturating_sub(1) {
        0 => 1,
        m => (usize::BITS - m.leading_zeros()) as usize,
    }
}

/// Dispatches on the leading ':' or format header.
pub fn read_auto(text: &str) -> Result<Graph, FormatError> {
    let t = text.trim_end_matches(['\n', '\r']);
    if t.starts_with(':') || t.starts_with(">>sparse6<<") {
        read_sparse6(t)
    } else {
        read_graph6(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_graph6_strings() {
        // K2 = "A_", triangle = "Bw", K4 = "C~"
        assert_eq!(write_graph6(&Graph::from_edges(2, &[(0, 1)]).unwrap()), "A_");
        let tri = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(write_graph6(&tri), "Bw");
        assert_eq!(read_graph6("Bw").unwrap(), tri);
        assert_eq!(read_graph6(">>graph6<<Bw\n").unwrap(), tri);
    }

    #[test]
    fn documented_sparse6_example() {
        let g = read_sparse6(":Fa@x^").unwrap();
        assert_eq!(g.n(), 7);
        let mut edges = Vec::new();
        for v in 0..7 {
            for u in 0..v {
                if g.is_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (5, 6)]);
        assert_eq!(write_sparse6(&g), ":Fa@x^");
    }

    #[test]
    fn golden_corpus_round_trips_byte_exact() {
        let corpus = include_str!("../../tests/data/g6_corpus.txt");
        let mut checked = 0;
        for line in corpus.lines() {
            let mut parts = line.split_ascii_whitespace();
            let name = parts.next().unwrap();
            let g6 = parts.next().unwrap();
            let s6 = parts.next().unwrap();
            let from_g6 = read_graph6(g6).unwrap_or_else(|e| panic!("{name}: {e}"));
            let from_s6 = read_sparse6(s6).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(from_g6, from_s6, "{name}: formats disagree");
            assert_eq!(write_graph6(&from_g6), g6, "{name}: graph6 bytes");
            assert_eq!(write_sparse6(&from_s6), s6, "{name}: sparse6 bytes");
            checked += 1;
        }
        assert!(checked >= 70);
    }

    #[test]
    fn long_size_boundary() {
        let g62 = Graph::new(62);
        let g63 = Graph::new(63);
        assert_eq!(write_graph6(&g62).len(), 1 + 62 * 61 / 2 / 6 + 1);
        assert!(write_graph6(&g63).starts_with('~'));
        assert_eq!(read_graph6(&write_graph6(&g63)).unwrap().n(), 63);
        assert_eq!(read_sparse6(&write_sparse6(&g63)).unwrap().n(), 63);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(read_graph6(""), Err(FormatError::Empty));
        assert_eq!(read_graph6("Bw~"), Err(FormatError::TrailingData { extra: 1 }));
        assert_eq!(read_graph6("B"), Err(FormatError::Truncated { what: "adjacency bits" }));
        assert!(matches!(read_graph6("B\x20"), Err(FormatError::BadChar { .. })));
        assert_eq!(read_sparse6("Fa@x^"), Err(FormatError::MissingColon));
        // sparse6 with an explicit loop: n=2, k=1, group (b=0,x=0) twice
        // encodes edge (0,0).
        assert!(matches!(read_sparse6(":A?"), Err(FormatError::SelfLoop { .. })));
    }

    #[test]
    fn graph6_rejects_nonzero_padding() {
        // triangle needs 3 bits; "Bw" has pad 000. Flip a padding bit: 'w'
        // is 56+63; 0b111000 -> 0b111001 = 57+63 = 'x'.
        assert_eq!(read_graph6("Bx"), Err(FormatError::BadPadding { expected: "zero" }));
    }
}
