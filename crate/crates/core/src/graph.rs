//! Dynamic undirected simple graph with lazy vertex deletion.
//!
//! Removing a vertex only clears its liveness flag and decrements the live
//! degree of its neighbors; the neighbors' adjacency lists keep a stale entry
//! that every query filters out. Adjacency lists are rewritten only when a
//! reduction contracts vertices or inserts a gadget vertex.

use std::fmt;
use std::marker::PhantomData;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicUsize, Ordering};

use crate::error::{KernelError, Result};

pub type VertexId = u32;

/// Sentinel for "no vertex" in dense id maps.
pub const NONE: VertexId = u32::MAX;

pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    alive: Vec<AtomicBool>,
    degree: Vec<AtomicU32>,
    live: AtomicUsize,
}

/// Result of [`Graph::compact`].
#[derive(Clone, Debug)]
pub struct Compaction {
    pub graph: Graph,
    /// `old_to_new[v]` is the new id of live vertex `v`, or [`NONE`].
    pub old_to_new: Vec<VertexId>,
    /// `new_to_old[i]` is the old id of new vertex `i`.
    pub new_to_old: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Mirrored and repeated pairs are merged.
    pub fn build(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(KernelError::malformed(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(KernelError::malformed(format!("self-loop at vertex {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph::from_sorted_adjacency(adj))
    }

    /// Wraps adjacency lists that are already sorted, deduplicated and symmetric.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<VertexId>>) -> Graph {
        let n = adj.len();
        let degree = adj.iter().map(|l| AtomicU32::new(l.len() as u32)).collect();
        Graph {
            adj,
            alive: (0..n).map(|_| AtomicBool::new(true)).collect(),
            degree,
            live: AtomicUsize::new(n),
        }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_sorted_adjacency(vec![Vec::new(); n])
    }

    /// Largest vertex id plus one, including hidden and gadget vertices.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn live_count(&self) -> usize {
        self.live.load(Ordering::Relaxed)
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive
            .get(v as usize)
            .is_some_and(|a| a.load(Ordering::Relaxed))
    }

    /// Number of live neighbors of `v`.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v as usize].load(Ordering::Relaxed) as usize
    }

    /// Live neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v as usize]
            .iter()
            .copied()
            .filter(move |&u| self.is_alive(u))
    }

    /// The raw adjacency list of `v`, including entries of hidden vertices.
    pub fn raw_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.is_alive(u)
            && self.is_alive(v)
            && self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.capacity() as VertexId).filter(move |&v| self.is_alive(v))
    }

    /// Number of edges between live vertices.
    pub fn edge_count(&self) -> usize {
        self.live_vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Live edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in self.live_vertices() {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Removes `v` from the live graph. Neighbor adjacency lists are left as they are.
    pub fn hide_vertex(&mut self, v: VertexId) -> Result<()> {
        if !self.is_alive(v) {
            return Err(KernelError::usage(format!("vertex {v} is already hidden")));
        }
        self.hide_unchecked(v);
        Ok(())
    }

    fn hide_unchecked(&mut self, v: VertexId) {
        self.alive[v as usize].store(false, Ordering::Relaxed);
        self.live.fetch_sub(1, Ordering::Relaxed);
        for &u in &self.adj[v as usize] {
            if self.alive[u as usize].load(Ordering::Relaxed) {
                self.degree[u as usize].fetch_sub(1, Ordering::Relaxed);
            }
        }
    }

    /// Appends a fresh vertex adjacent to `neighbors` and returns its id.
    pub fn add_gadget_vertex(&mut self, neighbors: &[VertexId]) -> Result<VertexId> {
        if let Some(&u) = neighbors.iter().find(|&&u| !self.is_alive(u)) {
            return Err(KernelError::usage(format!(
                "gadget neighbor {u} is not a live vertex"
            )));
        }
        let mut list = neighbors.to_vec();
        list.sort_unstable();
        list.dedup();
        let w = self.capacity() as VertexId;
        for &u in &list {
            let l = &mut self.adj[u as usize];
            let pos = l.binary_search(&w).unwrap_err();
            l.insert(pos, w);
            self.degree[u as usize].fetch_add(1, Ordering::Relaxed);
        }
        self.degree.push(AtomicU32::new(list.len() as u32));
        self.alive.push(AtomicBool::new(true));
        self.adj.push(list);
        self.live.fetch_add(1, Ordering::Relaxed);
        Ok(w)
    }

    /// Replaces the live neighborhood of `v` and repairs symmetry on both sides.
    pub fn rewrite_neighborhood(&mut self, v: VertexId, new_neighbors: &[VertexId]) -> Result<()> {
        if !self.is_alive(v) {
            return Err(KernelError::usage(format!("vertex {v} is hidden")));
        }
        if new_neighbors.contains(&v) {
            return Err(KernelError::usage(format!("rewrite would create a self-loop at {v}")));
        }
        if let Some(&u) = new_neighbors.iter().find(|&&u| !self.is_alive(u)) {
            return Err(KernelError::usage(format!("new neighbor {u} is hidden")));
        }
        let mut new: Vec<VertexId> = new_neighbors.to_vec();
        new.sort_unstable();
        new.dedup();
        let old: Vec<VertexId> = self.neighbors(v).collect();
        for &u in &old {
            if new.binary_search(&u).is_err() {
                let l = &mut self.adj[u as usize];
                if let Ok(pos) = l.binary_search(&v) {
                    l.remove(pos);
                }
                self.degree[u as usize].fetch_sub(1, Ordering::Relaxed);
            }
        }
        for &u in &new {
            if old.binary_search(&u).is_err() {
                let l = &mut self.adj[u as usize];
                if let Err(pos) = l.binary_search(&v) {
                    l.insert(pos, v);
                }
                self.degree[u as usize].fetch_add(1, Ordering::Relaxed);
            }
        }
        self.degree[v as usize].store(new.len() as u32, Ordering::Relaxed);
        self.adj[v as usize] = new;
        Ok(())
    }

    /// Adds the edge `{u, v}` between two live vertices; no-op if present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(KernelError::usage(format!("self-loop at {u}")));
        }
        if !self.is_alive(u) || !self.is_alive(v) {
            return Err(KernelError::usage(format!("edge ({u}, {v}) touches a hidden vertex")));
        }
        if self.has_edge(u, v) {
            return Ok(());
        }
        for (a, b) in [(u, v), (v, u)] {
            let l = &mut self.adj[a as usize];
            if let Err(pos) = l.binary_search(&b) {
                l.insert(pos, b);
            }
            self.degree[a as usize].fetch_add(1, Ordering::Relaxed);
        }
        Ok(())
    }

    /// Drops stale entries from every adjacency list.
    pub fn purge_hidden_entries(&mut self) {
        let alive: Vec<bool> = self.alive.iter().map(|a| a.load(Ordering::Relaxed)).collect();
        for (v, list) in self.adj.iter_mut().enumerate() {
            if alive[v] {
                list.retain(|&u| alive[u as usize]);
            } else {
                list.clear();
            }
        }
    }

    /// Copies the live part of the graph into a densely numbered graph.
    pub fn compact(&self) -> Compaction {
        let mut old_to_new = vec![NONE; self.capacity()];
        let mut new_to_old = Vec::with_capacity(self.live_count());
        for v in self.live_vertices() {
            old_to_new[v as usize] = new_to_old.len() as VertexId;
            new_to_old.push(v);
        }
        // the id map is monotone, so mapped lists stay sorted
        let adj = new_to_old
            .iter()
            .map(|&v| self.neighbors(v).map(|u| old_to_new[u as usize]).collect())
            .collect();
        Compaction {
            graph: Graph::from_sorted_adjacency(adj),
            old_to_new,
            new_to_old,
        }
    }

    /// Recomputes every derived quantity from scratch and compares.
    pub fn check_invariants(&self) -> Result<()> {
        let mut live = 0;
        for v in 0..self.capacity() as VertexId {
            if !self.is_alive(v) {
                continue;
            }
            live += 1;
            let list = &self.adj[v as usize];
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(KernelError::invariant(format!("adjacency of {v} not strictly sorted")));
            }
            let mut deg = 0;
            for u in self.neighbors(v) {
                deg += 1;
                if u == v {
                    return Err(KernelError::invariant(format!("self-loop at {v}")));
                }
                if self.adj[u as usize].binary_search(&v).is_err() {
                    return Err(KernelError::invariant(format!("edge {v}->{u} has no mirror")));
                }
            }
            if deg != self.degree(v) {
                return Err(KernelError::invariant(format!(
                    "vertex {v}: cached degree {} but {deg} live neighbors",
                    self.degree(v)
                )));
            }
        }
        if live != self.live_count() {
            return Err(KernelError::invariant(format!(
                "live counter {} but {live} live vertices",
                self.live_count()
            )));
        }
        Ok(())
    }

    /// Appends `extra` hidden slots that a concurrent phase may turn into gadgets.
    pub(crate) fn reserve_slots(&mut self, extra: usize) {
        for _ in 0..extra {
            self.adj.push(Vec::new());
            self.alive.push(AtomicBool::new(false));
            self.degree.push(AtomicU32::new(0));
        }
    }

    /// Drops reserved slots at and above `used_end`.
    pub(crate) fn release_slots(&mut self, used_end: usize) {
        debug_assert!(self.alive[used_end..].iter().all(|a| !a.load(Ordering::Relaxed)));
        self.adj.truncate(used_end);
        self.alive.truncate(used_end);
        self.degree.truncate(used_end);
    }

    /// Shared view for a concurrent phase. Slots `first_free..capacity` are
    /// handed out as gadget ids.
    pub(crate) fn share(&mut self, first_free: usize) -> SharedGraph<'_> {
        let len = self.adj.len();
        SharedGraph {
            adj: self.adj.as_mut_ptr(),
            len,
            alive: &self.alive,
            degree: &self.degree,
            live: &self.live,
            next_slot: AtomicU32::new(first_free as u32),
            _marker: PhantomData,
        }
    }
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            adj: self.adj.clone(),
            alive: self
                .alive
                .iter()
                .map(|a| AtomicBool::new(a.load(Ordering::Relaxed)))
                .collect(),
            degree: self
                .degree
                .iter()
                .map(|d| AtomicU32::new(d.load(Ordering::Relaxed)))
                .collect(),
            live: AtomicUsize::new(self.live_count()),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("capacity", &self.capacity())
            .field("live", &self.live_count())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Concurrent view of a [`Graph`] used during blockwise phases.
///
/// Liveness flags and live degrees are atomics and may be touched by any
/// worker. An adjacency list may only be read or written by the worker that
/// owns the vertex's block; the scheduler guarantees that ownership, which is
/// why the list accessors are `unsafe`.
pub(crate) struct SharedGraph<'g> {
    adj: *mut Vec<VertexId>,
    len: usize,
    alive: &'g [AtomicBool],
    degree: &'g [AtomicU32],
    live: &'g AtomicUsize,
    next_slot: AtomicU32,
    _marker: PhantomData<&'g mut [Vec<VertexId>]>,
}

// SAFETY: the raw adjacency pointer is only dereferenced through `list` and
// `list_mut`, whose callers guarantee exclusive per-vertex access.
unsafe impl Send for SharedGraph<'_> {}
unsafe impl Sync for SharedGraph<'_> {}

impl<'g> SharedGraph<'g> {
    #[inline]
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive
            .get(v as usize)
            .is_some_and(|a| a.load(Ordering::Relaxed))
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v as usize].load(Ordering::Relaxed) as usize
    }

    /// # Safety
    /// No other thread may hold a mutable reference to the list of `v`.
    #[inline]
    pub unsafe fn list(&self, v: VertexId) -> &Vec<VertexId> {
        assert!((v as usize) < self.len);
        &*self.adj.add(v as usize)
    }

    /// # Safety
    /// The caller must have exclusive access to the list of `v` for the
    /// lifetime of the returned reference.
    #[inline]
    #[allow(clippy::mut_from_ref)]
    pub unsafe fn list_mut(&self, v: VertexId) -> &mut Vec<VertexId> {
        assert!((v as usize) < self.len);
        &mut *self.adj.add(v as usize)
    }

    /// Clears the liveness flag of `v` and decrements its live neighbors.
    ///
    /// # Safety
    /// The caller must own the list of `v`.
    pub unsafe fn hide(&self, v: VertexId) {
        let was = self.alive[v as usize].swap(false, Ordering::Relaxed);
        debug_assert!(was, "hiding dead vertex {v}");
        self.live.fetch_sub(1, Ordering::Relaxed);
        for &u in self.list(v) {
            if self.alive[u as usize].load(Ordering::Relaxed) {
                self.degree[u as usize].fetch_sub(1, Ordering::Relaxed);
            }
        }
    }

    #[inline]
    pub fn add_degree(&self, v: VertexId, delta: u32) {
        self.degree[v as usize].fetch_add(delta, Ordering::Relaxed);
    }

    /// Claims a reserved slot and makes it a live vertex with an empty list.
    pub fn claim_slot(&self) -> Option<VertexId> {
        let id = self
            .next_slot
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |s| {
                ((s as usize) < self.len).then_some(s + 1)
            })
            .ok()?;
        self.alive[id as usize].store(true, Ordering::Relaxed);
        self.live.fetch_add(1, Ordering::Relaxed);
        Some(id)
    }

    pub fn live_count(&self) -> usize {
        self.live.load(Ordering::Relaxed)
    }

    /// First slot that was never claimed.
    pub fn used_end(&self) -> usize {
        self.next_slot.load(Ordering::Relaxed) as usize
    }
}
