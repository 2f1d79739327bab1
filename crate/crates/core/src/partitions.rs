//! Integer partitions and the Young-diagram combinatorics built on them.
//!
//! Nodes are `(row, col)` pairs, both 1-based. A node is "below" another when
//! its row index is strictly larger; every module that counts nodes below or
//! above a given node uses this convention.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }

    /// Content `col - row` reduced into `0..e`.
    pub fn residue(&self, e: usize) -> usize {
        let c = self.col as i64 - self.row as i64;
        c.rem_euclid(e as i64) as usize
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = HeckeError;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts
    /// increase anywhere or a zero is followed by a positive part.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        for (i, w) in parts.windows(2).enumerate() {
            if w[0] < w[1] {
                return Err(HeckeError::Invalid(format!(
                    "parts must be weakly decreasing (part {} < part {})",
                    i + 1,
                    i + 2
                )));
            }
        }
        if parts.contains(&0) {
            return Err(HeckeError::Invalid("zero part inside a partition".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&x| x > 0));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    /// Part `i` (1-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let Some(&first) = self.0.first() else {
            return Partition::empty();
        };
        let mut out = Vec::with_capacity(first as usize);
        for c in 1..=first {
            out.push(self.0.iter().take_while(|&&x| x >= c).count() as u32);
        }
        Partition(out)
    }

    /// Dominance order: `self ⊵ other`.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(HeckeError::IncomparableSizes(self.size(), other.size()));
        }
        Ok(self.dominates_unchecked(other))
    }

    /// Dominance test for partitions already known to have the same size.
    pub fn dominates_unchecked(&self, other: &Partition) -> bool {
        let (mut a, mut b) = (0u64, 0u64);
        let n = self.len().max(other.len());
        for i in 1..=n {
            a += self.part(i) as u64;
            b += other.part(i) as u64;
            if a < b {
                return false;
            }
        }
        true
    }

    /// Strict dominance `self ⊳ other`.
    pub fn strictly_dominates(&self, other: &Partition) -> bool {
        self != other && self.size() == other.size() && self.dominates_unchecked(other)
    }

    /// No part is repeated `e` or more times.
    pub fn is_e_regular(&self, e: usize) -> bool {
        let mut run = 0usize;
        let mut prev = 0u32;
        for &x in &self.0 {
            if x == prev {
                run += 1;
            } else {
                prev = x;
                run = 1;
            }
            if run >= e {
                return false;
            }
        }
        true
    }

    /// Every addable node, ordered by row.
    pub fn addable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for r in 1..=self.len() + 1 {
            let here = self.part(r);
            if r == 1 || self.part(r - 1) > here {
                out.push(Node::new(r, here as usize + 1));
            }
        }
        out
    }

    /// Every removable node, ordered by row.
    pub fn removable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for r in 1..=self.len() {
            let here = self.part(r);
            if self.part(r + 1) < here {
                out.push(Node::new(r, here as usize));
            }
        }
        out
    }

    /// Addable and removable nodes of residue `i`, each list ordered by row.
    pub fn boundary_nodes(&self, e: usize, i: usize) -> (Vec<Node>, Vec<Node>) {
        let add = self
            .addable_nodes()
            .into_iter()
            .filter(|n| n.residue(e) == i)
            .collect();
        let rem = self
            .removable_nodes()
            .into_iter()
            .filter(|n| n.residue(e) == i)
            .collect();
        (add, rem)
    }

    /// Adds a node; the caller guarantees it is addable.
    pub fn with_node(&self, node: Node) -> Partition {
        let mut parts = self.0.clone();
        if node.row > parts.len() {
            debug_assert_eq!(node.row, parts.len() + 1);
            debug_assert_eq!(node.col, 1);
            parts.push(1);
        } else {
            debug_assert_eq!(parts[node.row - 1] as usize + 1, node.col);
            parts[node.row - 1] += 1;
        }
        Partition::from_parts_unchecked(parts)
    }

    /// Removes a node; the caller guarantees it is removable.
    pub fn without_node(&self, node: Node) -> Partition {
        let mut parts = self.0.clone();
        debug_assert_eq!(parts[node.row - 1] as usize, node.col);
        parts[node.row - 1] -= 1;
        if parts[node.row - 1] == 0 {
            parts.pop();
        }
        Partition::from_parts_unchecked(parts)
    }

    /// Hook length of every node, keyed by node.
    pub fn hook_lengths(&self) -> BTreeMap<Node, usize> {
        let conj = self.conjugate();
        let mut out = BTreeMap::new();
        for (ri, &len) in self.0.iter().enumerate() {
            let r = ri + 1;
            for c in 1..=len as usize {
                let h = len as usize - c + conj.part(c) as usize - r + 1;
                out.insert(Node::new(r, c), h);
            }
        }
        out
    }

    /// Nodes in row order.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(ri, &len)| (1..=len as usize).map(move |c| Node::new(ri + 1, c)))
    }

    /// Drops the first row.
    pub fn without_first_row(&self) -> Partition {
        Partition(self.0.iter().skip(1).copied().collect())
    }

    /// Drops the first column.
    pub fn without_first_column(&self) -> Partition {
        Partition(self.0.iter().map(|&x| x - 1).filter(|&x| x > 0).collect())
    }

    /// Prepends a row of the given length, which must be at least the first part.
    pub fn with_first_row(&self, len: u32) -> Partition {
        assert!(len >= self.part(1));
        let mut parts = Vec::with_capacity(self.len() + 1);
        parts.push(len);
        parts.extend_from_slice(&self.0);
        Partition::from_parts_unchecked(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = HeckeError;

    /// Accepts `"4,2^2"`, `"(4,2,2)"`, `"∅"`, `"-"` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        parse_partition_at(s, 0)
    }
}

fn parse_partition_at(s: &str, offset: usize) -> Result<Partition> {
    let trimmed = s.trim();
    let lead = s.len() - s.trim_start().len();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(trimmed);
    let inner_start = offset + lead + usize::from(inner.len() != trimmed.len());
    if inner.trim().is_empty() || inner.trim() == "∅" || inner.trim() == "-" {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    let mut pos = inner_start;
    for tok in inner.split(',') {
        let t = tok.trim();
        let tpos = pos + (tok.len() - tok.trim_start().len());
        let (base, exp) = match t.split_once('^') {
            Some((b, x)) => (b.trim(), Some(x.trim())),
            None => (t, None),
        };
        let value: u32 = base.parse().map_err(|_| HeckeError::Parse {
            pos: tpos,
            msg: format!("expected a nonnegative integer, found {base:?}"),
        })?;
        let count: usize = match exp {
            Some(x) => x.parse().map_err(|_| HeckeError::Parse {
                pos: tpos,
                msg: format!("bad exponent {x:?}"),
            })?,
            None => 1,
        };
        parts.extend(std::iter::repeat_n(value, count));
        pos += tok.len() + 1;
    }
    Partition::new(parts).map_err(|e| HeckeError::Parse {
        pos: inner_start,
        msg: e.to_string(),
    })
}

/// Parses a `;`-separated list of partitions, e.g. `"7,1;6,2;4^2"`.
pub fn parse_partition_list(s: &str) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for chunk in s.split(';') {
        out.push(parse_partition_at(chunk, pos)?);
        pos += chunk.len() + 1;
    }
    Ok(out)
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::from_parts_unchecked(cur.clone()));
            return;
        }
        for x in (1..=max.min(rem)).rev() {
            cur.push(x as u32);
            rec(rem - x, x, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}
