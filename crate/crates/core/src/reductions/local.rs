//! Local reduction rules applied inside one block of a partition.
//!
//! A worker may read and write the adjacency lists of the vertices it owns
//! and may clear liveness flags of owned vertices. It never touches the lists
//! of other blocks' vertices, and every rule checks that the state it depends
//! on is owned before committing.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::graph::{Graph, SharedGraph, VertexId, NONE};
use crate::partition::{boundary_sets, BoundaryIndex, Partition};
use crate::reductions::{ReductionRecord, RuleConfig, RuleCounts};

/// Outcome of the unconfined test for one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Confinement {
    /// Some maximum independent set avoids the vertex.
    Unconfined,
    /// The test stopped with confining set `s` and its open neighborhood `ns`.
    Confined { s: Vec<VertexId>, ns: Vec<VertexId> },
}

/// Everything a block pass produced, merged by the driver at the barrier.
#[derive(Debug, Default)]
pub(crate) struct BlockOutcome {
    pub records: Vec<ReductionRecord>,
    pub offset: usize,
    pub counts: RuleCounts,
    /// Candidates left in the queue because the pass was stopped.
    pub queue: Vec<VertexId>,
    /// Vertices of other blocks whose neighborhood changed.
    pub deferred: Vec<VertexId>,
    pub gadgets: Vec<VertexId>,
    /// Where a sweep cut short by `stop` should resume, or 0.
    pub sweep_resume: VertexId,
    pub audit_checks: usize,
    pub audit_failures: usize,
}

pub(crate) struct BlockWorker<'a, 'g> {
    g: &'a SharedGraph<'g>,
    part: &'a Partition,
    boundary: &'a BoundaryIndex,
    block: u32,
    whole: bool,
    rules: &'a RuleConfig,
    in_d: &'a [AtomicBool],
    members: &'a [VertexId],
    /// Re-run every unconfined removal without the block restriction.
    pub audit: bool,
    /// Sweeps start at the first member with an id at least this large.
    pub sweep_from: VertexId,
    out: BlockOutcome,
    in_s: Vec<u32>,
    in_ns: Vec<u32>,
    stamp: u32,
}

impl<'a, 'g> BlockWorker<'a, 'g> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g: &'a SharedGraph<'g>,
        part: &'a Partition,
        boundary: &'a BoundaryIndex,
        block: u32,
        whole: bool,
        rules: &'a RuleConfig,
        in_d: &'a [AtomicBool],
        members: &'a [VertexId],
        queue: Vec<VertexId>,
    ) -> Self {
        BlockWorker {
            g,
            part,
            boundary,
            block,
            whole,
            rules,
            in_d,
            members,
            audit: false,
            sweep_from: 0,
            out: BlockOutcome { queue, ..BlockOutcome::default() },
            in_s: Vec::new(),
            in_ns: Vec::new(),
            stamp: 0,
        }
    }

    pub fn finish(self) -> BlockOutcome {
        self.out
    }

    #[inline]
    fn owns(&self, x: VertexId) -> bool {
        self.whole
            || if (x as usize) < self.part.len() {
                self.part.block(x) == self.block
            } else {
                // slots past the partition are gadgets claimed in this pass,
                // and only their creator can reach them
                debug_assert!(self.out.gadgets.contains(&x));
                true
            }
    }

    #[inline]
    fn alive(&self, x: VertexId) -> bool {
        self.g.is_alive(x)
    }

    /// Live neighbors of an owned vertex, sorted. Compacts the list when
    /// stale entries dominate.
    fn nbrs(&self, x: VertexId) -> Vec<VertexId> {
        debug_assert!(self.owns(x));
        let deg = self.g.degree(x);
        // SAFETY: x is owned by this worker.
        let list = unsafe { self.g.list_mut(x) };
        if list.len() > 2 * deg + 8 {
            list.retain(|&y| self.g.is_alive(y));
        }
        list.iter().copied().filter(|&y| self.g.is_alive(y)).collect()
    }

    fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        debug_assert!(self.owns(a));
        // SAFETY: a is owned.
        self.alive(b) && unsafe { self.g.list(a) }.binary_search(&b).is_ok()
    }

    /// Whether an owned vertex has a live neighbor in another block.
    fn touches_foreign(&self, x: VertexId) -> bool {
        if self.whole || !self.boundary.in_b0(x) {
            return false;
        }
        // SAFETY: x is owned.
        unsafe { self.g.list(x) }
            .iter()
            .any(|&y| self.alive(y) && !self.owns(y))
    }

    fn push(&mut self, x: VertexId) {
        if !self.alive(x) {
            return;
        }
        if self.owns(x) {
            if !self.in_d[x as usize].swap(true, Ordering::Relaxed) {
                self.out.queue.push(x);
            }
        } else {
            self.out.deferred.push(x);
        }
    }

    fn push_neighbors(&mut self, x: VertexId) {
        let g = self.g;
        // SAFETY: x is owned; the list is only read.
        let list = unsafe { g.list(x) };
        for &y in list {
            self.push(y);
        }
    }

    fn hide(&mut self, x: VertexId) {
        debug_assert!(self.owns(x));
        // SAFETY: x is owned.
        unsafe { self.g.hide(x) };
        self.push_neighbors(x);
    }

    fn insert_entry(&self, x: VertexId, y: VertexId) -> bool {
        // SAFETY: callers pass owned x.
        let list = unsafe { self.g.list_mut(x) };
        match list.binary_search(&y) {
            Ok(_) => false,
            Err(pos) => {
                list.insert(pos, y);
                true
            }
        }
    }

    fn commit(&mut self, record: ReductionRecord, removed: usize) {
        self.out.offset += record.offset();
        self.out.counts.add(record.rule(), removed);
        self.out.records.push(record);
    }

    pub fn degree_zero_one(&mut self, v: VertexId) -> bool {
        if self.g.degree(v) > 1 {
            return false;
        }
        let nb = self.nbrs(v);
        match nb[..] {
            [] => {
                self.hide(v);
                self.commit(ReductionRecord::DegreeZero { v }, 1);
                true
            }
            [u] if self.rules.degree_one && self.owns(u) => {
                self.hide(v);
                self.hide(u);
                self.commit(ReductionRecord::DegreeOne { v, u }, 2);
                true
            }
            _ => false,
        }
    }

    pub fn isolated_clique(&mut self, v: VertexId) -> bool {
        if !self.rules.isolated_clique || self.g.degree(v) > self.rules.clique_cap {
            return false;
        }
        let nb = self.nbrs(v);
        if nb.len() > self.rules.clique_cap || nb.iter().any(|&u| !self.owns(u)) {
            return false;
        }
        for (i, &a) in nb.iter().enumerate() {
            if nb[i + 1..].iter().any(|&b| !self.adjacent(a, b)) {
                return false;
            }
        }
        self.hide(v);
        for &u in &nb {
            self.hide(u);
        }
        let removed = nb.len() + 1;
        self.commit(ReductionRecord::IsolatedClique { v, clique: nb }, removed);
        true
    }

    pub fn fold(&mut self, v: VertexId) -> bool {
        if !self.rules.fold || self.g.degree(v) != 2 {
            return false;
        }
        let nb = self.nbrs(v);
        let [u, w] = nb[..] else { return false };
        if !self.owns(u) || !self.owns(w) || self.adjacent(u, w) {
            return false;
        }
        match (self.touches_foreign(u), self.touches_foreign(w)) {
            (false, false) => self.fold_into_v(v, u, w),
            (true, false) => self.fold_into_neighbor(v, u, w),
            (false, true) => self.fold_into_neighbor(v, w, u),
            (true, true) => return false,
        }
        true
    }

    /// Both neighbors are interior: `v` becomes the folded vertex.
    fn fold_into_v(&mut self, v: VertexId, u: VertexId, w: VertexId) {
        let mut merged = self.nbrs(u);
        merged.extend(self.nbrs(w));
        merged.sort_unstable();
        merged.dedup();
        merged.retain(|&x| x != v);
        self.hide(u);
        self.hide(w);
        for &x in &merged {
            if self.insert_entry(x, v) {
                self.g.add_degree(x, 1);
            }
        }
        self.g.add_degree(v, merged.len() as u32);
        // SAFETY: v is owned.
        *unsafe { self.g.list_mut(v) } = merged;
        self.push(v);
        self.commit(ReductionRecord::Fold { v, u, w, site: v }, 2);
    }

    /// `s` touches another block: it survives and absorbs the neighbors of `o`.
    fn fold_into_neighbor(&mut self, v: VertexId, s: VertexId, o: VertexId) {
        let extra: Vec<VertexId> = self.nbrs(o).into_iter().filter(|&x| x != v).collect();
        self.hide(v);
        self.hide(o);
        let mut added = 0;
        for &x in &extra {
            if self.insert_entry(s, x) {
                self.insert_entry(x, s);
                self.g.add_degree(x, 1);
                added += 1;
            }
        }
        self.g.add_degree(s, added);
        self.push(s);
        self.push_neighbors(s);
        self.commit(ReductionRecord::Fold { v, u: s, w: o, site: s }, 2);
    }

    pub fn twin(&mut self, u: VertexId) -> bool {
        if !self.rules.twin || self.g.degree(u) != 3 {
            return false;
        }
        let nb = self.nbrs(u);
        if nb.len() != 3 || nb.iter().any(|&x| !self.owns(x)) {
            return false;
        }
        let twin = self.nbrs(nb[0]).into_iter().find(|&v| {
            v != u && self.owns(v) && self.g.degree(v) == 3 && self.nbrs(v) == nb
        });
        let Some(v) = twin else { return false };
        let nbrs = [nb[0], nb[1], nb[2]];
        let has_edge = self.adjacent(nbrs[0], nbrs[1])
            || self.adjacent(nbrs[0], nbrs[2])
            || self.adjacent(nbrs[1], nbrs[2]);
        if has_edge {
            for x in [u, v, nbrs[0], nbrs[1], nbrs[2]] {
                self.hide(x);
            }
            self.commit(ReductionRecord::TwinIncluded { u, v, nbrs }, 5);
            return true;
        }
        if nbrs.iter().any(|&x| self.touches_foreign(x)) {
            return false;
        }
        let mut two: Vec<VertexId> = nbrs.iter().flat_map(|&x| self.nbrs(x)).collect();
        two.sort_unstable();
        two.dedup();
        two.retain(|&x| x != u && x != v);
        let Some(w) = self.g.claim_slot() else { return false };
        self.out.gadgets.push(w);
        for x in [u, v, nbrs[0], nbrs[1], nbrs[2]] {
            self.hide(x);
        }
        for &x in &two {
            self.insert_entry(x, w);
            self.g.add_degree(x, 1);
        }
        self.g.add_degree(w, two.len() as u32);
        // SAFETY: w was just claimed by this worker.
        *unsafe { self.g.list_mut(w) } = two;
        self.push(w);
        self.commit(ReductionRecord::TwinFolded { u, v, nbrs, w }, 4);
        true
    }

    fn next_stamp(&mut self) -> u32 {
        let cap = self.g.capacity();
        if self.in_s.len() < cap {
            self.in_s.resize(cap, 0);
            self.in_ns.resize(cap, 0);
        }
        if self.stamp == u32::MAX {
            self.in_s.fill(0);
            self.in_ns.fill(0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }

    /// Grows the confining set of `v`. With `restricted`, only owned vertices
    /// may enter `S` or serve as the child `u`.
    fn confine(&mut self, v: VertexId, restricted: bool) -> Confinement {
        let g = self.g;
        let st = self.next_stamp();
        let usable = |me: &Self, x: VertexId| !restricted || me.owns(x);
        // in_ns marks N[S]; in_s marks S
        self.in_s[v as usize] = st;
        self.in_ns[v as usize] = st;
        let mut s = vec![v];
        let mut ns = Vec::new();
        // SAFETY (all list reads below): restricted mode reads owned lists only;
        // unrestricted mode runs while no other worker is active.
        for &y in unsafe { g.list(v) } {
            if self.alive(y) && self.in_ns[y as usize] != st {
                self.in_ns[y as usize] = st;
                ns.push(y);
            }
        }
        loop {
            // (outside count, u, w)
            let mut best: Option<(usize, VertexId, VertexId)> = None;
            for &u in &ns {
                if !self.alive(u) || !usable(self, u) {
                    continue;
                }
                let mut hits = 0;
                let mut outside = 0;
                let mut w = NONE;
                for &y in unsafe { g.list(u) } {
                    if !self.alive(y) {
                        continue;
                    }
                    if self.in_s[y as usize] == st {
                        hits += 1;
                        if hits > 1 {
                            break;
                        }
                    } else if self.in_ns[y as usize] != st {
                        outside += 1;
                        w = y;
                    }
                }
                if hits != 1 {
                    continue;
                }
                if outside == 0 {
                    return Confinement::Unconfined;
                }
                let cand = (outside, u, w);
                if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
            match best {
                Some((1, _, w)) if usable(self, w) => {
                    self.in_s[w as usize] = st;
                    // w was outside N[S]
                    self.in_ns[w as usize] = st;
                    s.push(w);
                    for &y in unsafe { g.list(w) } {
                        if self.alive(y) && self.in_ns[y as usize] != st {
                            self.in_ns[y as usize] = st;
                            ns.push(y);
                        }
                    }
                }
                _ => {
                    ns.retain(|&x| self.in_s[x as usize] != st);
                    return Confinement::Confined { s, ns };
                }
            }
        }
    }

    pub fn unconfined_test(&mut self, v: VertexId) -> Confinement {
        self.confine(v, !self.whole)
    }

    /// Runs the unconfined test on `v` and removes it if it is unconfined.
    pub fn unconfined(&mut self, v: VertexId) -> Result<(), Confinement> {
        match self.unconfined_test(v) {
            Confinement::Unconfined => {
                if self.audit {
                    self.out.audit_checks += 1;
                    if self.confine(v, false) != Confinement::Unconfined {
                        self.out.audit_failures += 1;
                    }
                }
                self.hide(v);
                self.commit(ReductionRecord::Unconfined { v }, 1);
                Ok(())
            }
            confined => Err(confined),
        }
    }

    /// Diamond check on a vertex whose confinement ended with `s`, `ns`.
    pub fn diamond(&mut self, v: VertexId, s: &[VertexId], ns: &[VertexId]) -> bool {
        if !self.rules.diamond || ns.len() > self.rules.diamond_cap || !self.alive(v) {
            return false;
        }
        let g = self.g;
        let st = self.next_stamp();
        for &x in s {
            self.in_s[x as usize] = st;
        }
        for &x in ns {
            self.in_ns[x as usize] = st;
        }
        // (v1, v2, u) with N(u) \ N(S) = {v1, v2} ⊆ S
        let mut cands: Vec<(VertexId, VertexId, VertexId)> = Vec::new();
        for &u in ns {
            if !self.alive(u) || !self.owns(u) {
                continue;
            }
            let mut rest = [NONE; 2];
            let mut n = 0;
            // SAFETY: u is owned.
            for &y in unsafe { g.list(u) } {
                if !self.alive(y) || self.in_ns[y as usize] == st {
                    continue;
                }
                if n == 2 || self.in_s[y as usize] != st {
                    n = 3;
                    break;
                }
                rest[n] = y;
                n += 1;
            }
            if n == 2 {
                cands.push((rest[0], rest[1], u));
            }
        }
        cands.sort_unstable();
        for group in cands.chunk_by(|a, b| (a.0, a.1) == (b.0, b.1)) {
            for (i, a) in group.iter().enumerate() {
                if group[i + 1..].iter().any(|b| !self.adjacent(a.2, b.2)) {
                    self.hide(v);
                    self.commit(ReductionRecord::Diamond { v }, 1);
                    return true;
                }
            }
        }
        false
    }

    fn reduce_candidate(&mut self, v: VertexId) -> bool {
        self.degree_zero_one(v) || self.isolated_clique(v) || self.fold(v) || self.twin(v)
    }

    /// Drains the candidate queue, then sweeps the block with the unconfined
    /// and diamond rules, until a sweep removes nothing or `stop` is raised.
    /// Without `force_sweep` an empty queue ends the pass immediately.
    pub fn run(&mut self, stop: &AtomicBool, force_sweep: bool) {
        if self.out.queue.is_empty() && !force_sweep {
            return;
        }
        loop {
            while let Some(v) = self.out.queue.pop() {
                if stop.load(Ordering::Relaxed) {
                    self.out.queue.push(v);
                    return;
                }
                self.in_d[v as usize].store(false, Ordering::Relaxed);
                if self.alive(v) && self.owns(v) {
                    self.reduce_candidate(v);
                }
            }
            if !self.rules.unconfined || !self.sweep(stop) {
                return;
            }
        }
    }

    /// One unconfined/diamond pass over the block; reports whether anything was removed.
    fn sweep(&mut self, stop: &AtomicBool) -> bool {
        let before = self.out.records.len();
        let gadgets = self.out.gadgets.clone();
        let members = self.members;
        let (head, tail) = members.split_at(members.partition_point(|&v| v < self.sweep_from));
        for (i, &v) in tail.iter().chain(head).chain(gadgets.iter()).enumerate() {
            if i % 64 == 0 && stop.load(Ordering::Relaxed) {
                self.out.sweep_resume = v;
                break;
            }
            if !self.alive(v) || !self.owns(v) {
                continue;
            }
            if let Err(Confinement::Confined { s, ns }) = self.unconfined(v) {
                self.diamond(v, &s, &ns);
            }
        }
        self.out.records.len() > before
    }
}

/// Gadget slots a [`Reducer`] call reserves beyond one per four live vertices.
const REDUCER_SLOTS: usize = 8;

/// Applies local rules one call at a time, on the whole graph or on one block
/// of a partition as a blockwise worker would.
pub struct Reducer<'g> {
    graph: &'g mut Graph,
    part: Partition,
    boundary: BoundaryIndex,
    block: u32,
    whole: bool,
    rules: RuleConfig,
    records: Vec<ReductionRecord>,
    offset: usize,
    counts: RuleCounts,
}

impl<'g> Reducer<'g> {
    /// Reducer owning the whole graph.
    pub fn new(graph: &'g mut Graph, rules: RuleConfig) -> Self {
        let part = Partition::single(graph.capacity());
        Reducer {
            graph,
            part,
            boundary: BoundaryIndex::default(),
            block: 0,
            whole: true,
            rules,
            records: Vec::new(),
            offset: 0,
            counts: RuleCounts::default(),
        }
    }

    /// Reducer restricted to `block` of `part`. The boundary layers are
    /// computed once, here.
    pub fn for_block(graph: &'g mut Graph, part: Partition, block: u32, rules: RuleConfig) -> Self {
        let boundary = boundary_sets(graph, &part);
        Reducer {
            graph,
            part,
            boundary,
            block,
            whole: false,
            rules,
            records: Vec::new(),
            offset: 0,
            counts: RuleCounts::default(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn boundary(&self) -> &BoundaryIndex {
        &self.boundary
    }

    pub fn records(&self) -> &[ReductionRecord] {
        &self.records
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn counts(&self) -> RuleCounts {
        self.counts
    }

    pub fn into_records(self) -> Vec<ReductionRecord> {
        self.records
    }

    fn with_worker<R>(
        &mut self,
        queue: Vec<VertexId>,
        f: impl FnOnce(&mut BlockWorker<'_, '_>) -> R,
    ) -> (R, Vec<VertexId>) {
        let first_free = self.graph.capacity();
        if self.part.len() < first_free {
            self.part.resize(first_free);
        }
        let members: Vec<VertexId> = self
            .graph
            .live_vertices()
            .filter(|&v| self.whole || self.part.block(v) == self.block)
            .collect();
        let slots = self.graph.live_count() / 4 + REDUCER_SLOTS;
        self.graph.reserve_slots(slots);
        let in_d: Vec<AtomicBool> = (0..first_free + slots)
            .map(|_| AtomicBool::new(false))
            .collect();
        for &v in &queue {
            in_d[v as usize].store(true, Ordering::Relaxed);
        }
        let sg = self.graph.share(first_free);
        let mut worker = BlockWorker::new(
            &sg,
            &self.part,
            &self.boundary,
            self.block,
            self.whole,
            &self.rules,
            &in_d,
            &members,
            queue,
        );
        let r = f(&mut worker);
        let out = worker.finish();
        let used = sg.used_end();
        self.graph.release_slots(used);
        for &w in &out.gadgets {
            self.part.assign(w, self.block);
        }
        self.records.extend(out.records);
        self.offset += out.offset;
        self.counts += out.counts;
        (r, out.queue)
    }

    fn apply(&mut self, v: VertexId, f: impl FnOnce(&mut BlockWorker<'_, '_>) -> bool) -> usize {
        if !self.graph.is_alive(v) {
            return 0;
        }
        let before = self.graph.live_count();
        self.with_worker(Vec::new(), f);
        before - self.graph.live_count()
    }

    /// Each rule returns the net number of live vertices it removed.
    pub fn degree_zero_one(&mut self, v: VertexId) -> usize {
        self.apply(v, |w| w.degree_zero_one(v))
    }

    pub fn isolated_clique(&mut self, v: VertexId) -> usize {
        self.apply(v, |w| w.isolated_clique(v))
    }

    pub fn fold(&mut self, v: VertexId) -> usize {
        self.apply(v, |w| w.fold(v))
    }

    pub fn twin(&mut self, u: VertexId) -> usize {
        self.apply(u, |w| w.twin(u))
    }

    /// Runs the unconfined test and removes `v` if it is unconfined.
    pub fn unconfined(&mut self, v: VertexId) -> Confinement {
        if !self.graph.is_alive(v) {
            return Confinement::Confined { s: Vec::new(), ns: Vec::new() };
        }
        self.with_worker(Vec::new(), |w| match w.unconfined(v) {
            Ok(()) => Confinement::Unconfined,
            Err(c) => c,
        })
        .0
    }

    pub fn diamond(&mut self, v: VertexId, state: &Confinement) -> usize {
        let Confinement::Confined { s, ns } = state else { return 0 };
        self.apply(v, |w| w.diamond(v, s, ns))
    }

    /// Processes the candidates in `d` as a block pass would. Returns the
    /// number of removed vertices and the candidates left when `stop` cut the
    /// pass short.
    pub fn process(&mut self, d: &[VertexId], stop: &AtomicBool) -> (usize, Vec<VertexId>) {
        let before = self.graph.live_count();
        let mut queue: Vec<VertexId> = d.iter().rev().copied().collect();
        queue.sort_unstable_by(|a, b| b.cmp(a));
        queue.dedup();
        let ((), left) = self.with_worker(queue, |w| w.run(stop, false));
        (before - self.graph.live_count(), left)
    }

    /// Runs every local rule on the block until none applies.
    pub fn exhaust(&mut self) -> usize {
        let d: Vec<VertexId> = self
            .graph
            .live_vertices()
            .filter(|&v| self.whole || self.part.block(v) == self.block)
            .collect();
        self.process(&d, &AtomicBool::new(false)).0
    }
}
