//! Lifting a kernel solution back to the input graph.

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId};
use crate::kernelizer::KernelResult;
use crate::reductions::{PathCase, ReductionLog, ReductionRecord};

pub use crate::oracle::validate_independent;

fn set_alternate(is: &mut [bool], path: &[VertexId], first: usize, end: usize) {
    for &p in path[..end].iter().skip(first).step_by(2) {
        is[p as usize] = true;
    }
}

fn undo(record: &ReductionRecord, is: &mut [bool]) {
    let sel = |is: &[bool], v: VertexId| is[v as usize];
    match record {
        ReductionRecord::DegreeZero { v } => is[*v as usize] = true,
        ReductionRecord::DegreeOne { v, u } => {
            if !sel(is, *u) {
                is[*v as usize] = true;
            }
        }
        ReductionRecord::IsolatedClique { v, clique } => {
            if !clique.iter().any(|&c| sel(is, c)) {
                is[*v as usize] = true;
            }
        }
        ReductionRecord::Fold { v, u, w, site } => {
            if sel(is, *site) {
                is[*site as usize] = false;
                is[*u as usize] = true;
                is[*w as usize] = true;
            } else {
                is[*v as usize] = true;
            }
        }
        ReductionRecord::PathContraction { case, a, b, path } => {
            let k = path.len();
            match case {
                PathCase::Cycle => set_alternate(is, path, 0, k - k % 2),
                PathCase::ExcludeEndpoints => {}
                PathCase::Bridge if sel(is, *a) => set_alternate(is, path, 1, k),
                PathCase::Bridge => set_alternate(is, path, 0, k),
                PathCase::Merge if sel(is, *a) => {
                    is[*b as usize] = true;
                    set_alternate(is, path, 1, k);
                }
                PathCase::Merge => set_alternate(is, path, 0, k),
            }
        }
        ReductionRecord::TwinIncluded { u, v, .. } => {
            is[*u as usize] = true;
            is[*v as usize] = true;
        }
        ReductionRecord::TwinFolded { u, v, nbrs, w } => {
            if sel(is, *w) {
                is[*w as usize] = false;
                for &x in nbrs {
                    is[x as usize] = true;
                }
            } else {
                is[*u as usize] = true;
                is[*v as usize] = true;
            }
        }
        ReductionRecord::Unconfined { .. } | ReductionRecord::Diamond { .. } => {}
        ReductionRecord::LpRemoval { ones, .. } => {
            for &v in ones {
                is[v as usize] = true;
            }
        }
    }
}

/// Replays `log` newest-first on top of `kernel_is` (kernel ids, mapped to
/// working ids through `vertex_map`). Returns the selected ids below
/// `input_vertices`, sorted.
pub fn undo_all(
    log: &ReductionLog,
    kernel: &Graph,
    kernel_is: &[VertexId],
    vertex_map: &[VertexId],
    working_capacity: usize,
    input_vertices: usize,
) -> Result<Vec<VertexId>> {
    if !validate_independent(kernel, kernel_is)? {
        return Err(KernelError::malformed("kernel solution is not independent"));
    }
    let mut is = vec![false; working_capacity];
    for &v in kernel_is {
        let Some(&w) = vertex_map.get(v as usize) else {
            return Err(KernelError::malformed(format!("kernel vertex {v} has no mapping")));
        };
        is[w as usize] = true;
    }
    for record in log.records().rev() {
        undo(record, &mut is);
    }
    if let Some(g) = (input_vertices..working_capacity).find(|&g| is[g]) {
        return Err(KernelError::invariant(format!("gadget {g} left in the lifted solution")));
    }
    Ok((0..input_vertices as VertexId).filter(|&v| is[v as usize]).collect())
}

impl KernelResult {
    /// Lifts an independent set of [`KernelResult::kernel`] to the input graph.
    pub fn lift(&self, kernel_is: &[VertexId]) -> Result<Vec<VertexId>> {
        undo_all(&self.log, &self.kernel, kernel_is, &self.vertex_map, self.working_capacity, self.input_vertices)
    }
}
