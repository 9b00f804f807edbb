//! The LP-relaxation reduction through a maximum matching of the
//! bi-double graph.

pub mod matching;

pub use matching::{augment_to_maximum, hopcroft_karp, karp_sipser, reuse_matching, BiDoubleGraph, Matching};

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId, NONE};
use crate::reductions::ReductionRecord;

pub fn build_bi_double(g: &Graph) -> BiDoubleGraph {
    BiDoubleGraph::build(g)
}

const UNSET: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// A closed set of the residual digraph over `l_0..l_n, r_0..r_n` (nodes
/// `0..n` and `n..2n`). A left copy in the set is outside the vertex cover
/// of B(G); a right copy in the set is inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityMarks {
    pub ids: Vec<VertexId>,
    state: Vec<u8>,
}

impl ReachabilityMarks {
    pub fn left_marked(&self, i: usize) -> bool {
        self.state[i] == IN
    }

    pub fn right_marked(&self, i: usize) -> bool {
        self.state[self.ids.len() + i] == IN
    }
}

/// Residual digraph of B(G) with mirrored matching arcs: `l_u -> r_v` for
/// each edge, `r_v -> l_u` and `r_u -> l_v` for each matched `(l_u, r_v)`.
/// The mirror map `l_i <-> r_i` reverses every arc.
struct Residual<'a> {
    bd: &'a BiDoubleGraph,
    m: &'a Matching,
}

impl Residual<'_> {
    fn for_each_succ(&self, x: usize, mut f: impl FnMut(usize)) {
        let n = self.bd.n();
        if x < n {
            for &j in self.bd.neighbors(x as u32) {
                f(n + j as usize);
            }
        } else {
            let i = x - n;
            if self.m.right[i] != NONE {
                f(self.m.right[i] as usize);
            }
            if self.m.left[i] != NONE {
                f(self.m.left[i] as usize);
            }
        }
    }

    fn succ_at(&self, x: usize, k: usize) -> Option<usize> {
        let n = self.bd.n();
        if x < n {
            self.bd.neighbors(x as u32).get(k).map(|&j| n + j as usize)
        } else {
            let i = x - n;
            [self.m.right[i], self.m.left[i]]
                .into_iter()
                .filter(|&t| t != NONE)
                .nth(k)
                .map(|t| t as usize)
        }
    }
}

#[inline]
fn mirror(x: usize, n: usize) -> usize {
    if x < n {
        x + n
    } else {
        x - n
    }
}

/// Marks the residual digraph of a maximum matching.
///
/// Every unmatched left copy and the left twin of every unmatched right copy
/// lies outside all minimum vertex covers; their closure is forced in and
/// its mirror forced out. The remaining strongly connected components are
/// decided sinks first, each decision fixing the mirrored component the
/// other way, which leaves ½ only where `l_v` and `r_v` are tied.
pub fn alternating_reachability(bd: &BiDoubleGraph, m: &Matching) -> Result<ReachabilityMarks> {
    let n = bd.n();
    let res = Residual { bd, m };
    let mut state = vec![UNSET; 2 * n];

    let mut stack: Vec<usize> = (0..n).filter(|&i| m.left[i] == NONE || m.right[i] == NONE).collect();
    for &x in &stack {
        state[x] = IN;
    }
    while let Some(x) = stack.pop() {
        res.for_each_succ(x, |y| {
            if state[y] == UNSET {
                state[y] = IN;
                stack.push(y);
            }
        });
    }
    for x in 0..2 * n {
        if state[x] == IN {
            if state[mirror(x, n)] == IN {
                return Err(KernelError::invariant("matching is not maximum: forced sets overlap"));
            }
            state[mirror(x, n)] = OUT;
        }
    }

    // iterative Tarjan over the undecided nodes; components come out sinks first
    let mut index = vec![u32::MAX; 2 * n];
    let mut low = vec![0u32; 2 * n];
    let mut on_stack = vec![false; 2 * n];
    let mut comp: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next = 0u32;
    let decided: Vec<bool> = state.iter().map(|&s| s != UNSET).collect();
    for root in 0..2 * n {
        if decided[root] || index[root] != u32::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        comp.push(root);
        on_stack[root] = true;
        while let Some(&mut (x, ref mut k)) = call.last_mut() {
            if let Some(y) = res.succ_at(x, *k) {
                *k += 1;
                if decided[y] {
                    continue;
                }
                if index[y] == u32::MAX {
                    index[y] = next;
                    low[y] = next;
                    next += 1;
                    comp.push(y);
                    on_stack[y] = true;
                    call.push((y, 0));
                } else if on_stack[y] {
                    low[x] = low[x].min(index[y]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[x]);
            }
            if low[x] == index[x] {
                let start = comp.iter().rposition(|&y| y == x).unwrap();
                let members: Vec<usize> = comp.drain(start..).collect();
                for &y in &members {
                    on_stack[y] = false;
                }
                decide(&res, &mut state, &members, n);
            }
        }
    }
    Ok(ReachabilityMarks { ids: bd.ids.clone(), state })
}

fn decide(res: &Residual<'_>, state: &mut [u8], members: &[usize], n: usize) {
    let mut out = members.iter().any(|&y| state[y] == OUT);
    if !out {
        for &y in members {
            res.for_each_succ(y, |z| out |= state[z] == OUT);
        }
    }
    if out {
        for &y in members {
            state[y] = OUT;
        }
        return;
    }
    for &y in members {
        state[y] = IN;
    }
    for &y in members {
        let z = mirror(y, n);
        if state[z] == UNSET {
            state[z] = OUT;
        }
    }
}

/// Vertex labels in doubled units: 0, 1 (for ½) or 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegralSolution {
    pub ids: Vec<VertexId>,
    pub x2: Vec<u8>,
}

impl HalfIntegralSolution {
    /// Doubled objective `2 Σ x_v`.
    pub fn objective2(&self) -> usize {
        self.x2.iter().map(|&x| x as usize).sum()
    }

    fn with_value(&self, value: u8) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.ids.iter().zip(&self.x2).filter(|(_, &x)| x == value).map(|(&v, _)| v).collect();
        out.sort_unstable();
        out
    }

    pub fn ones(&self) -> Vec<VertexId> {
        self.with_value(2)
    }

    pub fn halves(&self) -> Vec<VertexId> {
        self.with_value(1)
    }

    pub fn zeros(&self) -> Vec<VertexId> {
        self.with_value(0)
    }

    /// Doubled value of graph vertex `v`, if it was live.
    pub fn value2(&self, v: VertexId) -> Option<u8> {
        self.ids.iter().position(|&u| u == v).map(|i| self.x2[i])
    }

    pub fn is_feasible(&self, g: &Graph) -> bool {
        let mut x = vec![0u8; g.capacity()];
        for (&v, &val) in self.ids.iter().zip(&self.x2) {
            x[v as usize] = val;
        }
        g.edges().iter().all(|&(u, v)| x[u as usize] + x[v as usize] <= 2)
    }
}

pub fn extract_half_integral(marks: &ReachabilityMarks) -> HalfIntegralSolution {
    let x2 = (0..marks.ids.len())
        .map(|i| marks.left_marked(i) as u8 + !marks.right_marked(i) as u8)
        .collect();
    HalfIntegralSolution { ids: marks.ids.clone(), x2 }
}

/// Runs the whole LP pipeline across rounds, reusing the previous matching.
#[derive(Clone, Debug)]
pub struct LpSolver {
    pub workers: usize,
    pub seed: u64,
    previous: Option<Matching>,
    round: u64,
}

impl LpSolver {
    pub fn new(workers: usize, seed: u64) -> Self {
        LpSolver { workers: workers.max(1), seed, previous: None, round: 0 }
    }

    pub fn solve(&mut self, g: &Graph) -> Result<HalfIntegralSolution> {
        let bd = BiDoubleGraph::build(g);
        let mut start = match &self.previous {
            Some(prev) => reuse_matching(prev, g, &bd),
            None => Matching::empty(&bd),
        };
        if start.size() == 0 {
            start = karp_sipser(&bd, self.seed.wrapping_add(self.round));
        }
        self.round += 1;
        let m = augment_to_maximum(&bd, start, self.workers);
        let marks = alternating_reachability(&bd, &m)?;
        self.previous = Some(m);
        Ok(extract_half_integral(&marks))
    }
}

/// One-shot LP solve of the live graph.
pub fn solve_lp(g: &Graph, workers: usize, seed: u64) -> Result<HalfIntegralSolution> {
    LpSolver::new(workers, seed).solve(g)
}

/// Hides every vertex at 1 together with its neighbors, which must be at 0.
/// Returns the undo record, or `None` when nothing is decided.
pub fn apply_lp(g: &mut Graph, x: &HalfIntegralSolution) -> Result<Option<ReductionRecord>> {
    let ones = x.ones();
    let mut is_one = vec![false; g.capacity()];
    for &v in &ones {
        is_one[v as usize] = true;
    }
    let mut zeros = Vec::new();
    let mut is_zero = vec![false; g.capacity()];
    for &v in &ones {
        for u in g.neighbors(v) {
            if is_one[u as usize] {
                return Err(KernelError::invariant(format!("LP vertices {v} and {u} are both at 1 and adjacent")));
            }
            if !is_zero[u as usize] {
                is_zero[u as usize] = true;
                zeros.push(u);
            }
        }
    }
    if ones.is_empty() {
        return Ok(None);
    }
    zeros.sort_unstable();
    for &v in ones.iter().chain(&zeros) {
        g.hide_vertex(v)?;
    }
    Ok(Some(ReductionRecord::LpRemoval { ones, zeros }))
}
