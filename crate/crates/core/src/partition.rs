//! Vertex partitions and the boundary layers that guard blockwise reductions.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId, NONE};

/// Default allowed imbalance of [`partition_internal`].
pub const DEFAULT_IMBALANCE: f64 = 0.1;
const PROPAGATION_ROUNDS: usize = 10;

/// A k-way assignment of vertex ids to blocks `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<u32>,
    k: usize,
}

impl Partition {
    pub fn new(block_of: Vec<u32>, k: usize) -> Result<Partition> {
        if let Some(b) = block_of.iter().find(|&&b| b as usize >= k) {
            return Err(KernelError::malformed(format!("block id {b} outside 0..{k}")));
        }
        Ok(Partition { block_of, k })
    }

    /// Every vertex in block 0.
    pub fn single(n: usize) -> Partition {
        Partition {
            block_of: vec![0; n],
            k: 1,
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn block(&self, v: VertexId) -> u32 {
        self.block_of.get(v as usize).copied().unwrap_or(NONE)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.block_of
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    /// Assigns block `b` to vertex `v`, growing the table if needed.
    pub fn assign(&mut self, v: VertexId, b: u32) {
        assert!((b as usize) < self.k, "block {b} outside 0..{}", self.k);
        if v as usize >= self.block_of.len() {
            self.block_of.resize(v as usize + 1, 0);
        }
        self.block_of[v as usize] = b;
    }

    pub(crate) fn resize(&mut self, n: usize) {
        self.block_of.resize(n, 0);
    }

    /// Live vertex count per block.
    pub fn block_sizes(&self, g: &Graph) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for v in g.live_vertices() {
            sizes[self.block(v) as usize] += 1;
        }
        sizes
    }

    /// Number of live edges whose endpoints lie in different blocks.
    pub fn cut_edges(&self, g: &Graph) -> usize {
        g.edges()
            .into_iter()
            .filter(|&(u, v)| self.block(u) != self.block(v))
            .count()
    }
}

/// Balanced k-way partition of the live vertices: BFS-grown regions from k
/// spread-out seeds, then size-constrained label propagation.
///
/// The output depends only on `(g, k, seed)`. When `k` exceeds the number of
/// live vertices each live vertex gets its own block and the rest stay empty.
pub fn partition_internal(g: &Graph, k: usize, seed: u64) -> Result<Partition> {
    partition_with_imbalance(g, k, seed, DEFAULT_IMBALANCE)
}

pub fn partition_with_imbalance(g: &Graph, k: usize, seed: u64, epsilon: f64) -> Result<Partition> {
    if k == 0 {
        return Err(KernelError::usage("a partition needs at least one block"));
    }
    let c = g.compact();
    let h = &c.graph;
    let n = h.capacity();
    let local = if k == 1 || n == 0 {
        vec![0; n]
    } else if k >= n {
        (0..n as u32).collect()
    } else {
        let cap = ((1.0 + epsilon) * n as f64 / k as f64).ceil() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut block = grow_regions(h, k, cap, &mut rng);
        propagate_labels(h, k, cap, &mut block, &mut rng);
        block
    };
    let mut block_of = vec![0; g.capacity()];
    for (i, &v) in c.new_to_old.iter().enumerate() {
        block_of[v as usize] = local[i];
    }
    Ok(Partition { block_of, k })
}

fn pick_seeds(h: &Graph, k: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    let n = h.capacity();
    let mut dist = vec![usize::MAX; n];
    let mut seeds = Vec::with_capacity(k);
    let mut queue = VecDeque::new();
    // start from a vertex far from a random one, which tends to lie on the periphery
    let start = rng.gen_range(0..n) as VertexId;
    dist[start as usize] = 0;
    queue.push_back(start);
    let mut next = start;
    while let Some(v) = queue.pop_front() {
        next = v;
        for u in h.neighbors(v) {
            if dist[u as usize] == usize::MAX {
                dist[u as usize] = dist[v as usize] + 1;
                queue.push_back(u);
            }
        }
    }
    dist.fill(usize::MAX);
    loop {
        seeds.push(next);
        dist[next as usize] = 0;
        queue.push_back(next);
        while let Some(v) = queue.pop_front() {
            for u in h.neighbors(v) {
                if dist[u as usize] > dist[v as usize] + 1 {
                    dist[u as usize] = dist[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        if seeds.len() == k {
            return seeds;
        }
        // unreached vertices (other components) first, then the farthest one
        let unreached: Vec<VertexId> =
            (0..n as VertexId).filter(|&v| dist[v as usize] == usize::MAX).collect();
        next = if unreached.is_empty() {
            let far = *dist.iter().max().unwrap();
            (0..n as VertexId).find(|&v| dist[v as usize] == far).unwrap()
        } else {
            unreached[rng.gen_range(0..unreached.len())]
        };
        if dist[next as usize] == 0 {
            // fewer distinct positions than blocks
            next = (0..n as VertexId).find(|v| !seeds.contains(v)).unwrap();
        }
    }
}

fn grow_regions(h: &Graph, k: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let n = h.capacity();
    let mut block = vec![NONE; n];
    let mut size = vec![0usize; k];
    let mut queue = VecDeque::new();
    for (b, s) in pick_seeds(h, k, rng).into_iter().enumerate() {
        block[s as usize] = b as u32;
        size[b] += 1;
        queue.push_back(s);
    }
    let grow = |queue: &mut VecDeque<VertexId>, block: &mut Vec<u32>, size: &mut Vec<usize>| {
        while let Some(v) = queue.pop_front() {
            let b = block[v as usize];
            for u in h.neighbors(v) {
                if block[u as usize] == NONE && size[b as usize] < cap {
                    block[u as usize] = b;
                    size[b as usize] += 1;
                    queue.push_back(u);
                }
            }
        }
    };
    grow(&mut queue, &mut block, &mut size);
    for v in 0..n as VertexId {
        if block[v as usize] == NONE {
            let b = (0..k).min_by_key(|&b| (size[b], b)).unwrap();
            block[v as usize] = b as u32;
            size[b] += 1;
            queue.push_back(v);
            grow(&mut queue, &mut block, &mut size);
        }
    }
    block
}

fn propagate_labels(h: &Graph, k: usize, cap: usize, block: &mut [u32], rng: &mut ChaCha8Rng) {
    let n = h.capacity();
    let mut size = vec![0usize; k];
    for &b in block.iter() {
        size[b as usize] += 1;
    }
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    let mut count = vec![0usize; k];
    let mut touched = Vec::new();
    for _ in 0..PROPAGATION_ROUNDS {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
            let cur = block[v as usize];
            for u in h.neighbors(v) {
                let b = block[u as usize];
                if count[b as usize] == 0 {
                    touched.push(b);
                }
                count[b as usize] += 1;
            }
            let mut best = cur;
            for &b in &touched {
                let better = count[b as usize] > count[best as usize]
                    || (count[b as usize] == count[best as usize] && b < best && best != cur);
                if b != cur && better && size[b as usize] < cap {
                    best = b;
                }
            }
            if best != cur && count[best as usize] > count[cur as usize] {
                size[cur as usize] -= 1;
                size[best as usize] += 1;
                block[v as usize] = best;
                moved = true;
            }
            for b in touched.drain(..) {
                count[b as usize] = 0;
            }
        }
        if !moved {
            break;
        }
    }
}

/// Parses a partition file: one base-10 block id per line, line `i` for vertex `i`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let mut block_of = Vec::with_capacity(n);
    for (i, line) in text.lines().enumerate() {
        if i >= n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(KernelError::malformed(format!(
                "partition line {}: more lines than the {n} vertices",
                i + 1
            )));
        }
        let b: u32 = line.trim().parse().map_err(|_| {
            KernelError::malformed(format!("partition line {}: {:?} is not a block id", i + 1, line))
        })?;
        block_of.push(b);
    }
    if block_of.len() < n {
        return Err(KernelError::malformed(format!(
            "partition line {}: expected {n} lines, file ends after {}",
            block_of.len() + 1,
            block_of.len()
        )));
    }
    let k = block_of.iter().max().map_or(1, |&b| b as usize + 1);
    Ok(Partition { block_of, k })
}

pub fn load_partition(path: impl AsRef<Path>, n: usize) -> Result<Partition> {
    let text = fs::read_to_string(path)?;
    parse_partition(&text, n)
}

/// The boundary layers of a partition: `b0` marks live vertices with a live
/// neighbor in another block, `b1` the live closed neighborhood of `b0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryIndex {
    pub b0: Vec<bool>,
    pub b1: Vec<bool>,
}

impl BoundaryIndex {
    #[inline]
    pub fn in_b0(&self, v: VertexId) -> bool {
        self.b0.get(v as usize).copied().unwrap_or(false)
    }

    #[inline]
    pub fn in_b1(&self, v: VertexId) -> bool {
        self.b1.get(v as usize).copied().unwrap_or(false)
    }

    pub fn b0_vertices(&self) -> Vec<VertexId> {
        flagged(&self.b0)
    }

    pub fn b1_vertices(&self) -> Vec<VertexId> {
        flagged(&self.b1)
    }
}

fn flagged(flags: &[bool]) -> Vec<VertexId> {
    (0..flags.len() as VertexId).filter(|&v| flags[v as usize]).collect()
}

fn is_boundary(g: &Graph, p: &Partition, v: VertexId) -> bool {
    g.is_alive(v) && g.neighbors(v).any(|u| p.block(u) != p.block(v))
}

fn in_closed_b0(g: &Graph, b0: &[bool], v: VertexId) -> bool {
    g.is_alive(v) && (b0[v as usize] || g.neighbors(v).any(|u| b0[u as usize]))
}

pub fn boundary_sets(g: &Graph, p: &Partition) -> BoundaryIndex {
    let n = g.capacity();
    let b0: Vec<bool> = (0..n as VertexId).map(|v| is_boundary(g, p, v)).collect();
    let b1 = (0..n as VertexId).map(|v| in_closed_b0(g, &b0, v)).collect();
    BoundaryIndex { b0, b1 }
}

/// Brings `bi` up to date after the vertices in `touched` changed liveness or adjacency.
pub fn refresh_boundary(g: &Graph, p: &Partition, bi: &mut BoundaryIndex, touched: &[VertexId]) {
    let n = g.capacity();
    bi.b0.resize(n, false);
    bi.b1.resize(n, false);
    // raw lists also reach neighbors of vertices that were just hidden
    let mut first = Vec::new();
    for &t in touched {
        first.push(t);
        first.extend_from_slice(g.raw_neighbors(t));
    }
    first.sort_unstable();
    first.dedup();
    for &v in &first {
        bi.b0[v as usize] = is_boundary(g, p, v);
    }
    let mut second = first.clone();
    for &v in &first {
        second.extend_from_slice(g.raw_neighbors(v));
    }
    second.sort_unstable();
    second.dedup();
    for &v in &second {
        bi.b1[v as usize] = in_closed_b0(g, &bi.b0, v);
    }
}
