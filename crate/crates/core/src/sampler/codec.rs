use crate::error::{Error, Result};
use crate::fraisse::{GraphPrefix, GraphPresentation};

/// Colex rank of the pair `{i, j}`: `j(j−1)/2 + i` for `i < j`.
pub fn pair_rank(i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    j * (j - 1) / 2 + i
}

/// Inverse of [`pair_rank`].
pub fn pair_unrank(r: usize) -> (usize, usize) {
    let mut j = (((8 * r + 1) as f64).sqrt() as usize).div_ceil(2);
    while j * (j - 1) / 2 > r {
        j -= 1;
    }
    while (j + 1) * j / 2 <= r {
        j += 1;
    }
    (r - j * (j - 1) / 2, j)
}

/// Least `n ≥ 1` whose `n(n−1)/2` pairs hold `len` bits.
pub fn vertices_for_bits(len: usize) -> usize {
    let mut n: usize = 1;
    while n * n.saturating_sub(1) / 2 < len {
        n += 1;
    }
    n
}

/// Graph whose edge `{i, j}` is present iff bit `pair_rank(i, j)` is set.
///
/// Inputs whose length is not of the form `n(n−1)/2` are read as if padded
/// with zeros to the next such length.
pub fn graph_from_bits(bits: &[bool]) -> GraphPrefix {
    let n = vertices_for_bits(bits.len());
    let edges = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(r, _)| pair_unrank(r));
    GraphPrefix::from_edges(n, edges).expect("pairs lie below n")
}

/// The `n(n−1)/2` bits of a graph on `n` vertices.
pub fn bits_from_graph(g: &GraphPrefix) -> Vec<bool> {
    let n = g.vertex_count();
    (0..n * n.saturating_sub(1) / 2)
        .map(|r| {
            let (i, j) = pair_unrank(r);
            g.adjacent(i, j)
        })
        .collect()
}

/// Reads bits from text. Text made only of `0`, `1` and whitespace is read
/// one bit per digit; anything else is hexadecimal (optional `0x`), four bits
/// per digit, most significant first.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.chars().all(|c| c == '0' || c == '1') {
        return Ok(s.chars().map(|c| c == '1').collect());
    }
    let offset = if s.starts_with("0x") || s.starts_with("0X") {
        2
    } else {
        0
    };
    let mut out = Vec::with_capacity(4 * s.len());
    for (i, c) in s[offset..].char_indices() {
        let d = c.to_digit(16).ok_or_else(|| Error::Syntax {
            position: offset + i,
            message: format!("'{c}' is neither a bit nor a hex digit"),
        })?;
        out.extend((0..4).rev().map(|b| d >> b & 1 == 1));
    }
    Ok(out)
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
