//! Sequential preprocessing: degree-0/1 removal and contraction of maximal
//! paths of degree-two vertices.

use crate::graph::{Graph, VertexId};
use crate::reductions::{PathCase, ReductionRecord, RuleConfig, RuleCounts};

#[derive(Clone, Debug, Default)]
pub struct PreprocessOutcome {
    pub records: Vec<ReductionRecord>,
    pub offset: usize,
    pub counts: RuleCounts,
}

impl PreprocessOutcome {
    fn push(&mut self, record: ReductionRecord, removed: usize) {
        self.offset += record.offset();
        self.counts.add(record.rule(), removed);
        self.records.push(record);
    }

    pub fn removed(&self) -> usize {
        self.counts.total()
    }
}

struct Pass<'a> {
    g: &'a mut Graph,
    rules: &'a RuleConfig,
    low: Vec<VertexId>,
    two: Vec<VertexId>,
    out: PreprocessOutcome,
}

impl Pass<'_> {
    fn touch(&mut self, v: VertexId) {
        if self.g.is_alive(v) {
            match self.g.degree(v) {
                0 | 1 => self.low.push(v),
                2 => self.two.push(v),
                _ => {}
            }
        }
    }

    fn touch_neighbors(&mut self, v: VertexId) {
        let list: Vec<VertexId> = self.g.raw_neighbors(v).to_vec();
        for u in list {
            self.touch(u);
        }
    }

    fn hide(&mut self, v: VertexId) {
        self.g.hide_vertex(v).expect("preprocessing hides live vertices only");
        self.touch_neighbors(v);
    }

    fn drain_low(&mut self) {
        while let Some(v) = self.low.pop() {
            if !self.g.is_alive(v) {
                continue;
            }
            match self.g.degree(v) {
                0 => {
                    self.hide(v);
                    self.out.push(ReductionRecord::DegreeZero { v }, 1);
                }
                1 if self.rules.degree_one => {
                    let u = self.g.neighbors(v).next().unwrap();
                    self.hide(v);
                    self.hide(u);
                    self.out.push(ReductionRecord::DegreeOne { v, u }, 2);
                }
                _ => {}
            }
        }
    }

    fn other_neighbor(&self, v: VertexId, prev: VertexId) -> VertexId {
        self.g.neighbors(v).find(|&x| x != prev).unwrap()
    }

    /// Walks from `start` through degree-two vertices away from `prev`.
    /// Returns the walked vertices and the first vertex of other degree, or
    /// `None` as the end when the walk came back to `start`.
    fn walk(&self, start: VertexId, first: VertexId) -> (Vec<VertexId>, Option<VertexId>) {
        let mut seq = Vec::new();
        let (mut prev, mut cur) = (start, first);
        while cur != start && self.g.degree(cur) == 2 {
            seq.push(cur);
            let next = self.other_neighbor(cur, prev);
            prev = cur;
            cur = next;
        }
        (seq, (cur != start).then_some(cur))
    }

    fn contract(&mut self, start: VertexId) {
        if !self.g.is_alive(start) || self.g.degree(start) != 2 {
            return;
        }
        let nb: Vec<VertexId> = self.g.neighbors(start).collect();
        let (x, y) = (nb[0], nb[1]);
        let (left, a) = self.walk(start, x);
        let Some(a) = a else {
            let mut cycle = vec![start];
            cycle.extend(left);
            for &v in &cycle {
                self.g.hide_vertex(v).unwrap();
            }
            let removed = cycle.len();
            self.out.push(
                ReductionRecord::PathContraction { case: PathCase::Cycle, a: start, b: start, path: cycle },
                removed,
            );
            return;
        };
        let (right, b) = self.walk(start, y);
        let b = b.expect("a walk that reached an endpoint cannot close a cycle");
        let mut path: Vec<VertexId> = left.into_iter().rev().collect();
        path.push(start);
        path.extend(right);
        let k = path.len();

        if a == b || (k % 2 == 1 && self.g.has_edge(a, b)) {
            let ends = if a == b { vec![a] } else { vec![a, b] };
            for &e in &ends {
                self.hide(e);
            }
            let removed = ends.len();
            self.out.push(ReductionRecord::PathContraction { case: PathCase::ExcludeEndpoints, a, b, path: Vec::new() }, removed);
        } else if k.is_multiple_of(2) {
            for &v in &path {
                self.g.hide_vertex(v).unwrap();
            }
            self.g.add_edge(a, b).unwrap();
            self.touch(a);
            self.touch(b);
            self.out.push(ReductionRecord::PathContraction { case: PathCase::Bridge, a, b, path }, k);
        } else {
            for &v in &path {
                self.g.hide_vertex(v).unwrap();
            }
            let mut merged: Vec<VertexId> = self.g.neighbors(a).collect();
            merged.extend(self.g.neighbors(b));
            self.g.hide_vertex(b).unwrap();
            merged.retain(|&x| x != b);
            self.g.rewrite_neighborhood(a, &merged).unwrap();
            self.touch(a);
            self.touch_neighbors(a);
            self.touch_neighbors(b);
            self.out.push(ReductionRecord::PathContraction { case: PathCase::Merge, a, b, path }, k + 1);
        }
    }
}

/// Exhaustively removes degree-0 and degree-1 vertices.
pub fn reduce_low_degree(g: &mut Graph, rules: &RuleConfig) -> PreprocessOutcome {
    let low = g.live_vertices().filter(|&v| g.degree(v) <= 1).collect();
    let mut pass = Pass { g, rules, low, two: Vec::new(), out: PreprocessOutcome::default() };
    pass.drain_low();
    pass.out
}

/// Degree-0/1 removal interleaved with contraction of maximal degree-two
/// paths, until neither applies. Runs on the whole graph, sequentially.
pub fn reduce_degree_two_paths(g: &mut Graph, rules: &RuleConfig) -> PreprocessOutcome {
    let mut low = Vec::new();
    let mut two = Vec::new();
    for v in g.live_vertices() {
        match g.degree(v) {
            0 | 1 => low.push(v),
            2 => two.push(v),
            _ => {}
        }
    }
    two.reverse();
    let mut pass = Pass { g, rules, low, two, out: PreprocessOutcome::default() };
    loop {
        pass.drain_low();
        if !rules.degree_two_paths {
            break;
        }
        match pass.two.pop() {
            Some(v) => pass.contract(v),
            None => break,
        }
    }
    pass.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_mis;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n as usize, &edges).unwrap()
    }

    fn path(n: u32) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::build(n as usize, &edges).unwrap()
    }

    fn check_preserves(g0: &Graph) -> PreprocessOutcome {
        let before = brute_force_mis(g0).unwrap().size;
        let mut g = g0.clone();
        let out = reduce_degree_two_paths(&mut g, &RuleConfig::default());
        g.check_invariants().unwrap();
        let after = brute_force_mis(&g).unwrap().size;
        assert_eq!(out.offset + after, before, "{g0:?}");
        assert_eq!(out.removed(), g0.live_count() - g.live_count());
        out
    }

    #[test]
    fn c5_collapses() {
        let mut g = cycle(5);
        let out = reduce_degree_two_paths(&mut g, &RuleConfig::default());
        assert_eq!(out.offset, 2);
        assert_eq!(g.live_count(), 0);
    }

    #[test]
    fn p4_collapses() {
        let mut g = path(4);
        let out = reduce_degree_two_paths(&mut g, &RuleConfig::default());
        assert_eq!(out.offset, 2);
        assert_eq!(g.live_count(), 0);
    }

    #[test]
    fn k4_untouched() {
        let edges: Vec<_> = (0..4u32).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let mut g = Graph::build(4, &edges).unwrap();
        let out = reduce_degree_two_paths(&mut g, &RuleConfig::default());
        assert!(out.records.is_empty());
        assert_eq!(g.live_count(), 4);
    }

    #[test]
    fn low_degree_star() {
        let mut g = Graph::build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let out = reduce_low_degree(&mut g, &RuleConfig::default());
        assert_eq!(out.offset, 4);
        assert_eq!(g.live_count(), 0);
    }

    #[test]
    fn path_cases_preserve_mis() {
        // endpoints of degree three built from two K4s joined by a path
        let k4 = |o: u32| (0..4u32).flat_map(move |i| (i + 1..4).map(move |j| (o + i, o + j)));
        for len in 1..7u32 {
            for adjacent in [false, true] {
                let mut edges: Vec<_> = k4(0).chain(k4(4)).collect();
                let mut prev = 0;
                for i in 0..len {
                    edges.push((prev, 8 + i));
                    prev = 8 + i;
                }
                edges.push((prev, 4));
                if adjacent {
                    edges.push((0, 4));
                }
                let g = Graph::build(8 + len as usize, &edges).unwrap();
                check_preserves(&g);
            }
            // path returning to the same endpoint
            let mut edges: Vec<_> = k4(0).collect();
            let mut prev = 0;
            for i in 0..len.max(2) {
                edges.push((prev, 4 + i));
                prev = 4 + i;
            }
            edges.push((prev, 0));
            let g = Graph::build(4 + len.max(2) as usize, &edges).unwrap();
            check_preserves(&g);
        }
    }

    #[test]
    fn cycles_and_paths_preserve_mis() {
        for n in 3..12 {
            let out = check_preserves(&cycle(n));
            assert_eq!(out.offset, n as usize / 2);
            check_preserves(&path(n));
        }
    }
}
