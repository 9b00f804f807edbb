//! Bipartite matching on the bi-double graph.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicUsize, Ordering};
use std::thread;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId, NONE};

/// The bipartite graph B(G) with a left and a right copy of every live
/// vertex and edges `l_u r_v`, `l_v r_u` for each live edge `uv`.
///
/// Both copies share the dense index `0..n`; the right neighbors of `l_i`
/// and the left neighbors of `r_i` are the same list.
#[derive(Clone, Debug)]
pub struct BiDoubleGraph {
    /// Dense index to graph vertex id.
    pub ids: Vec<VertexId>,
    /// Graph vertex id to dense index, or [`NONE`].
    pub index: Vec<u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl BiDoubleGraph {
    pub fn build(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.live_vertices().collect();
        let mut index = vec![NONE; g.capacity()];
        for (i, &v) in ids.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(ids.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in &ids {
            targets.extend(g.neighbors(v).map(|u| index[u as usize]));
            offsets.push(targets.len());
        }
        BiDoubleGraph { ids, index, offsets, targets }
    }

    /// Number of vertices on each side.
    #[inline]
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn neighbors(&self, i: u32) -> &[u32] {
        &self.targets[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// All edges as (left index, right index).
    pub fn edges(&self) -> Vec<(u32, u32)> {
        (0..self.n() as u32)
            .flat_map(|i| self.neighbors(i).iter().map(move |&j| (i, j)))
            .collect()
    }
}

/// A matching of a [`BiDoubleGraph`], by dense index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub ids: Vec<VertexId>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

impl Matching {
    pub fn empty(bd: &BiDoubleGraph) -> Self {
        Matching {
            ids: bd.ids.clone(),
            left: vec![NONE; bd.n()],
            right: vec![NONE; bd.n()],
        }
    }

    pub fn size(&self) -> usize {
        self.left.iter().filter(|&&r| r != NONE).count()
    }

    /// Checks symmetry of the mate arrays and that matched pairs are edges.
    pub fn is_valid(&self, bd: &BiDoubleGraph) -> bool {
        self.left.len() == bd.n()
            && self.right.len() == bd.n()
            && (0..bd.n()).all(|i| {
                let r = self.left[i];
                r == NONE || (self.right[r as usize] == i as u32 && bd.neighbors(i as u32).contains(&r))
            })
            && (0..bd.n()).all(|j| {
                let l = self.right[j];
                l == NONE || self.left[l as usize] == j as u32
            })
    }

    /// Whether no edge joins two unmatched vertices.
    pub fn is_maximal(&self, bd: &BiDoubleGraph) -> bool {
        (0..bd.n() as u32).all(|i| {
            self.left[i as usize] != NONE
                || bd.neighbors(i).iter().all(|&j| self.right[j as usize] != NONE)
        })
    }

    /// Matched pairs as graph ids (left vertex, right vertex).
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.left
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != NONE)
            .map(|(i, &r)| (self.ids[i], self.ids[r as usize]))
            .collect()
    }
}

/// Keeps the pairs of `prev` whose endpoints are still live and still adjacent.
pub fn reuse_matching(prev: &Matching, g: &Graph, bd: &BiDoubleGraph) -> Matching {
    let mut m = Matching::empty(bd);
    for (u, v) in prev.pairs() {
        if !g.has_edge(u, v) {
            continue;
        }
        let (i, j) = (bd.index[u as usize], bd.index[v as usize]);
        if i != NONE && j != NONE {
            m.left[i as usize] = j;
            m.right[j as usize] = i;
        }
    }
    m
}

/// Karp–Sipser: match degree-one vertices first, otherwise a random edge.
pub fn karp_sipser(bd: &BiDoubleGraph, seed: u64) -> Matching {
    let n = bd.n();
    let mut m = Matching::empty(bd);
    // nodes 0..n are left, n..2n right; degree counts unmatched neighbors
    let mut deg: Vec<u32> = (0..n).map(|i| bd.neighbors(i as u32).len() as u32).collect();
    deg.extend_from_within(..);
    let matched = |m: &Matching, x: usize| {
        if x < n {
            m.left[x] != NONE
        } else {
            m.right[x - n] != NONE
        }
    };
    let mut ones: Vec<usize> = (0..2 * n).filter(|&x| deg[x] == 1).collect();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut cursor = 0;

    let side_neighbors = |x: usize| -> Vec<usize> {
        let i = if x < n { x } else { x - n };
        let shift = if x < n { n } else { 0 };
        bd.neighbors(i as u32).iter().map(|&j| j as usize + shift).collect()
    };

    loop {
        let (x, y) = if let Some(x) = ones.pop() {
            if matched(&m, x) || deg[x] != 1 {
                continue;
            }
            let y = side_neighbors(x).into_iter().find(|&y| !matched(&m, y)).unwrap();
            (x, y)
        } else {
            while cursor < n && (m.left[order[cursor] as usize] != NONE || deg[order[cursor] as usize] == 0) {
                cursor += 1;
            }
            if cursor == n {
                break;
            }
            let x = order[cursor] as usize;
            let free: Vec<usize> = side_neighbors(x).into_iter().filter(|&y| !matched(&m, y)).collect();
            (x, free[rng.gen_range(0..free.len())])
        };
        let (l, r) = if x < n { (x, y - n) } else { (y, x - n) };
        m.left[l] = r as u32;
        m.right[r] = l as u32;
        for z in [x, y] {
            for w in side_neighbors(z) {
                if !matched(&m, w) {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        ones.push(w);
                    }
                }
            }
        }
    }
    m
}

/// Sequential Hopcroft–Karp from the given matching; the reference result.
pub fn hopcroft_karp(bd: &BiDoubleGraph, mut m: Matching) -> Matching {
    let n = bd.n();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut stack: Vec<(u32, usize)> = Vec::new();
    let mut pos = vec![0usize; n];
    loop {
        // layer the left vertices by alternating distance from free ones
        queue.clear();
        for i in 0..n {
            if m.left[i] == NONE {
                dist[i] = 0;
                queue.push_back(i as u32);
            } else {
                dist[i] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in bd.neighbors(l) {
                let next = m.right[r as usize];
                if next == NONE {
                    found = true;
                } else if dist[next as usize] == u32::MAX {
                    dist[next as usize] = dist[l as usize] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            return m;
        }
        pos.fill(0);
        for root in 0..n as u32 {
            if m.left[root as usize] != NONE {
                continue;
            }
            stack.clear();
            stack.push((root, NONE as usize));
            while let Some(&(l, _)) = stack.last() {
                let nb = bd.neighbors(l);
                let p = &mut pos[l as usize];
                if *p == nb.len() {
                    dist[l as usize] = u32::MAX;
                    stack.pop();
                    continue;
                }
                let r = nb[*p];
                *p += 1;
                let next = m.right[r as usize];
                if next == NONE {
                    stack.last_mut().unwrap().1 = r as usize;
                    augment(&mut m.left, &mut m.right, &stack);
                    for &(l, _) in &stack {
                        dist[l as usize] = u32::MAX;
                    }
                    break;
                }
                if dist[next as usize] == dist[l as usize] + 1 {
                    stack.last_mut().unwrap().1 = r as usize;
                    stack.push((next, NONE as usize));
                }
            }
        }
    }
}

/// Flips the matching along a stack of (left, right-taken) frames.
fn augment(left: &mut [u32], right: &mut [u32], stack: &[(u32, usize)]) {
    for &(l, r) in stack {
        left[l as usize] = r as u32;
        right[r] = l;
    }
}

/// Augments to a maximum matching. With more than one worker, rounds of
/// concurrent vertex-disjoint searches run first; a sequential
/// Hopcroft–Karp pass then certifies maximality.
pub fn augment_to_maximum(bd: &BiDoubleGraph, m: Matching, workers: usize) -> Matching {
    let m = if workers > 1 { parallel_rounds(bd, m, workers) } else { m };
    hopcroft_karp(bd, m)
}

fn parallel_rounds(bd: &BiDoubleGraph, m: Matching, workers: usize) -> Matching {
    let n = bd.n();
    let left: Vec<AtomicU32> = m.left.iter().map(|&r| AtomicU32::new(r)).collect();
    let right: Vec<AtomicU32> = m.right.iter().map(|&l| AtomicU32::new(l)).collect();
    let visited: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    loop {
        let roots: Vec<u32> = (0..n as u32)
            .filter(|&i| left[i as usize].load(Ordering::Relaxed) == NONE && !bd.neighbors(i).is_empty())
            .collect();
        if roots.is_empty() {
            break;
        }
        let next = AtomicUsize::new(0);
        let found = AtomicUsize::new(0);
        thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| {
                    let mut stack: Vec<(u32, usize, u32)> = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&root) = roots.get(k) else { break };
                        if search(bd, root, &left, &right, &visited, &mut stack) {
                            found.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                });
            }
        });
        visited.iter().for_each(|v| v.store(false, Ordering::Relaxed));
        // few successes: the sequential pass finishes faster
        if found.load(Ordering::Relaxed) * 64 < roots.len() {
            break;
        }
    }
    Matching {
        ids: m.ids,
        left: left.into_iter().map(AtomicU32::into_inner).collect(),
        right: right.into_iter().map(AtomicU32::into_inner).collect(),
    }
}

/// Depth-first search for an augmenting path from a free left vertex. Right
/// vertices are claimed on first visit, so concurrent searches are vertex
/// disjoint and each path is flipped by its owner alone.
fn search(
    bd: &BiDoubleGraph,
    root: u32,
    left: &[AtomicU32],
    right: &[AtomicU32],
    visited: &[AtomicBool],
    stack: &mut Vec<(u32, usize, u32)>,
) -> bool {
    // frames: (left vertex, next neighbor position, right vertex taken)
    stack.clear();
    stack.push((root, 0, NONE));
    while let Some(top) = stack.last_mut() {
        let (l, p, _) = *top;
        let nb = bd.neighbors(l);
        if p == nb.len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let r = nb[p];
        if visited[r as usize].swap(true, Ordering::Relaxed) {
            continue;
        }
        top.2 = r;
        let mate = right[r as usize].load(Ordering::Relaxed);
        if mate == NONE {
            for &(l, _, r) in stack.iter() {
                left[l as usize].store(r, Ordering::Relaxed);
                right[r as usize].store(l, Ordering::Relaxed);
            }
            return true;
        }
        stack.push((mate, 0, NONE));
    }
    false
}
