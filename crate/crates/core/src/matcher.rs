//! Greedy string tiling over arbitrary token streams.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Granularity {
    Word,
    MathSymbol,
    Letter,
}

/// A matched run `a[a_start..a_start + a_len] == b[b_start..b_start + a_len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MatchTile {
    pub a_start: usize,
    pub a_len: usize,
    pub b_start: usize,
    pub granularity: Granularity,
}

impl MatchTile {
    pub fn a_end(&self) -> usize {
        self.a_start + self.a_len
    }

    pub fn b_end(&self) -> usize {
        self.b_start + self.a_len
    }
}

/// Greedy string tiling.
///
/// Repeatedly takes the longest common run of tokens not yet covered in
/// either stream, ties going to the smallest `a_start` and then the smallest
/// `b_start`, until the longest remaining run is shorter than `min_match`.
/// A `min_match` of zero is treated as one.
///
/// Each round is an O(n·m) dynamic program over run lengths; all runs of the
/// maximal length are tiled in the same round, in tie-break order, skipping
/// those that collide with a tile taken earlier in the round. That is the
/// same result as taking one tile per round.
pub fn greedy_string_tiling<T: PartialEq>(
    a: &[T],
    b: &[T],
    min_match: usize,
    granularity: Granularity,
) -> Vec<MatchTile> {
    let min_match = min_match.max(1);
    let mut tiles = Vec::new();
    if a.len() < min_match || b.len() < min_match {
        return tiles;
    }
    let mut marked_a = vec![false; a.len()];
    let mut marked_b = vec![false; b.len()];
    // run lengths for rows i+1 (`next`) and i (`row`); the extra column stays 0
    let mut next = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    let mut starts: Vec<(usize, usize)> = Vec::new();

    loop {
        let mut best = 0;
        starts.clear();
        next.iter_mut().for_each(|v| *v = 0);
        for i in (0..a.len()).rev() {
            for j in (0..b.len()).rev() {
                let len = if !marked_a[i] && !marked_b[j] && a[i] == b[j] {
                    next[j + 1] + 1
                } else {
                    0
                };
                row[j] = len;
                if len == 0 || len < best {
                    continue;
                }
                if len > best {
                    best = len;
                    starts.clear();
                }
                starts.push((i, j));
            }
            core::mem::swap(&mut row, &mut next);
        }
        if best < min_match {
            break;
        }
        starts.sort_unstable();
        for &(i, j) in &starts {
            let free = marked_a[i..i + best].iter().all(|m| !m)
                && marked_b[j..j + best].iter().all(|m| !m);
            if !free {
                continue;
            }
            marked_a[i..i + best].iter_mut().for_each(|m| *m = true);
            marked_b[j..j + best].iter_mut().for_each(|m| *m = true);
            tiles.push(MatchTile {
                a_start: i,
                a_len: best,
                b_start: j,
                granularity,
            });
        }
    }
    tiles
}

/// Covered fraction of a stream of `stream_len` tokens; 0 for an empty stream.
pub fn coverage(tiles: &[MatchTile], stream_len: usize) -> f64 {
    if stream_len == 0 {
        return 0.0;
    }
    let covered: usize = tiles.iter().map(|t| t.a_len).sum();
    covered as f64 / stream_len as f64
}

/// Per-position coverage flags for stream A.
pub(crate) fn covered_a(tiles: &[MatchTile], len: usize) -> Vec<bool> {
    let mut out = vec![false; len];
    for t in tiles {
        out[t.a_start..t.a_end()].iter_mut().for_each(|c| *c = true);
    }
    out
}

/// Per-position coverage flags for stream B.
pub(crate) fn covered_b(tiles: &[MatchTile], len: usize) -> Vec<bool> {
    let mut out = vec![false; len];
    for t in tiles {
        out[t.b_start..t.b_end()].iter_mut().for_each(|c| *c = true);
    }
    out
}
