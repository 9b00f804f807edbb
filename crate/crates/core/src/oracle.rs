//! Exact reference solvers for small graphs.

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId};

/// Largest live vertex count accepted by [`brute_force_mis`].
pub const BRUTE_FORCE_LIMIT: usize = 40;
/// Largest live vertex count accepted by [`lp_oracle`].
pub const LP_ORACLE_LIMIT: usize = 12;
/// Largest live vertex count accepted by [`mis_by_enumeration`].
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub size: usize,
    /// A maximum independent set, as sorted ids of the input graph.
    pub witness: Vec<VertexId>,
}

/// Live graph as bitmask rows over dense indices, plus the id map back.
fn bitmasks(g: &Graph, limit: usize) -> Result<(Vec<u64>, Vec<VertexId>)> {
    let n = g.live_count();
    if n > limit {
        return Err(KernelError::TooLarge { size: n, limit });
    }
    let c = g.compact();
    let rows = (0..n as VertexId)
        .map(|v| c.graph.neighbors(v).fold(0u64, |m, u| m | 1 << u))
        .collect();
    Ok((rows, c.new_to_old))
}

fn unmask(mask: u64, ids: &[VertexId]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = (0..ids.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
    out.sort_unstable();
    out
}

struct Search<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: u32,
}

impl Search<'_> {
    fn run(&mut self, cand: u64, chosen: u64) {
        let size = chosen.count_ones();
        if size + cand.count_ones() <= self.best_size {
            return;
        }
        if cand == 0 {
            self.best = chosen;
            self.best_size = size;
            return;
        }
        let mut min_v = 0;
        let mut min_d = u32::MAX;
        let mut max_v = 0;
        let mut max_d = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & cand).count_ones();
            if d < min_d {
                min_d = d;
                min_v = v;
            }
            if d > max_d {
                max_d = d;
                max_v = v;
            }
        }
        if min_d <= 1 {
            // a vertex of degree at most one is always in some maximum set
            self.run(cand & !self.adj[min_v] & !(1 << min_v), chosen | 1 << min_v);
            return;
        }
        let v = max_v;
        self.run(cand & !self.adj[v] & !(1 << v), chosen | 1 << v);
        self.run(cand & !(1 << v), chosen);
    }
}

/// Maximum independent set of the live graph by branch and reduce.
pub fn brute_force_mis(g: &Graph) -> Result<OracleResult> {
    let (adj, ids) = bitmasks(g, BRUTE_FORCE_LIMIT)?;
    let all = if ids.is_empty() { 0 } else { u64::MAX >> (64 - ids.len()) };
    let mut s = Search { adj: &adj, best: 0, best_size: 0 };
    s.run(all, 0);
    Ok(OracleResult { size: s.best_size as usize, witness: unmask(s.best, &ids) })
}

/// Maximum independent set size by checking every subset.
pub fn mis_by_enumeration(g: &Graph) -> Result<usize> {
    let (adj, ids) = bitmasks(g, ENUMERATION_LIMIT)?;
    let n = ids.len();
    let mut best = 0;
    for mask in 0u64..1 << n {
        let size = mask.count_ones();
        if size <= best {
            continue;
        }
        let mut rest = mask;
        let mut ok = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & mask != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            best = size;
        }
    }
    Ok(best as usize)
}

/// Optimal value of the half-integral LP relaxation, doubled, and the set of
/// vertices at ½ in every optimal half-integral solution. Exhaustive over all
/// `3^n` assignments.
pub fn lp_oracle(g: &Graph) -> Result<(usize, Vec<VertexId>)> {
    let (adj, ids) = bitmasks(g, LP_ORACLE_LIMIT)?;
    let n = ids.len();
    let mut x = vec![0u8; n];
    let mut best = 0usize;
    let mut half_all = 0u64;
    fn rec(i: usize, sum: usize, x: &mut [u8], adj: &[u64], best: &mut usize, half_all: &mut u64) {
        let n = x.len();
        if sum + 2 * (n - i) < *best {
            return;
        }
        if i == n {
            let half = (0..n).filter(|&v| x[v] == 1).fold(0u64, |m, v| m | 1 << v);
            if sum > *best {
                *best = sum;
                *half_all = half;
            } else {
                *half_all &= half;
            }
            return;
        }
        for val in 0..=2u8 {
            let ok = (0..i).all(|u| adj[i] >> u & 1 == 0 || x[u] + val <= 2);
            if ok {
                x[i] = val;
                rec(i + 1, sum + val as usize, x, adj, best, half_all);
            }
        }
    }
    rec(0, 0, &mut x, &adj, &mut best, &mut half_all);
    Ok((best, unmask(half_all, &ids)))
}

/// Whether `s` is independent in `g0`, looking at all edges between live vertices.
pub fn validate_independent(g0: &Graph, s: &[VertexId]) -> Result<bool> {
    let mut member = vec![false; g0.capacity()];
    for &v in s {
        match member.get_mut(v as usize) {
            Some(m) => *m = true,
            None => {
                return Err(KernelError::malformed(format!(
                    "vertex {v} outside 0..{}",
                    g0.capacity()
                )))
            }
        }
    }
    Ok(s.iter().all(|&v| g0.neighbors(v).all(|u| !member[u as usize])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n as usize, &edges).unwrap()
    }

    pub(crate) fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::build(10, &edges).unwrap()
    }

    fn complete(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::build(n as usize, &edges).unwrap()
    }

    #[test]
    fn known_values() {
        let r = brute_force_mis(&cycle(5)).unwrap();
        assert_eq!(r.size, 2);
        assert!(validate_independent(&cycle(5), &r.witness).unwrap());
        assert_eq!(mis_by_enumeration(&cycle(5)).unwrap(), 2);
        assert_eq!(brute_force_mis(&petersen()).unwrap().size, 4);
        for n in 1..8 {
            assert_eq!(brute_force_mis(&complete(n)).unwrap().size, 1);
        }
        assert_eq!(brute_force_mis(&Graph::empty(0)).unwrap().size, 0);
        assert_eq!(brute_force_mis(&Graph::empty(3)).unwrap().size, 3);
    }

    #[test]
    fn refuses_large() {
        let g = Graph::empty(41);
        assert!(matches!(brute_force_mis(&g), Err(KernelError::TooLarge { .. })));
        assert!(lp_oracle(&Graph::empty(13)).is_err());
    }

    #[test]
    fn witness_uses_original_ids() {
        let mut g = cycle(6);
        g.hide_vertex(0).unwrap();
        let r = brute_force_mis(&g).unwrap();
        assert_eq!(r.size, 3);
        assert_eq!(r.witness, vec![1, 3, 5]);
    }

    #[test]
    fn lp_examples() {
        // optima of an edge: (1,0), (0,1), (½,½); no vertex is ½ in all of them
        let edge = Graph::build(2, &[(0, 1)]).unwrap();
        assert_eq!(lp_oracle(&edge).unwrap(), (2, vec![]));
        let p3 = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(lp_oracle(&p3).unwrap(), (4, vec![]));
        assert_eq!(lp_oracle(&Graph::empty(1)).unwrap(), (2, vec![]));
        assert_eq!(lp_oracle(&cycle(5)).unwrap(), (5, vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn validate_examples() {
        let k3 = complete(3);
        assert!(validate_independent(&k3, &[0]).unwrap());
        assert!(!validate_independent(&k3, &[0, 1]).unwrap());
        assert!(validate_independent(&k3, &[]).unwrap());
        assert!(validate_independent(&k3, &[3]).is_err());
    }
}
