//! Browser demo bindings. Every call builds a seeded random geometric graph
//! and returns a JSON string for the page to draw.

use miskernel::generators::random_geometric;
use miskernel::lp::solve_lp;
use miskernel::partition::{boundary_sets, partition_internal};
use miskernel::{kernelize, Graph, KernelizerConfig, Mode, VertexId};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest graph the page asks for; drawing gets slow beyond this.
pub const MAX_VERTICES: usize = 20_000;

#[derive(Serialize)]
struct Layout {
    points: Vec<(f32, f32)>,
    edges: Vec<(VertexId, VertexId)>,
}

fn layout(n: usize, avg_degree: f64, seed: u64) -> Result<(Graph, Layout), String> {
    if n == 0 || n > MAX_VERTICES {
        return Err(format!("vertex count must be in 1..={MAX_VERTICES}"));
    }
    if !(0.0..=64.0).contains(&avg_degree) {
        return Err("average degree must be in 0..=64".into());
    }
    let (g, pts) = random_geometric(n, avg_degree, seed);
    let points = pts.iter().map(|&(x, y)| (x as f32, y as f32)).collect();
    let edges = g.edges();
    Ok((g, Layout { points, edges }))
}

#[derive(Serialize)]
struct KernelView {
    #[serde(flatten)]
    layout: Layout,
    /// Rule that removed each input vertex, or null if it is in the kernel.
    removed_by: Vec<Option<&'static str>>,
    offset: usize,
    kernel_vertices: usize,
    kernel_edges: usize,
    rounds: usize,
    removals: miskernel::reductions::RuleCounts,
}

pub fn kernel_view(n: usize, avg_degree: f64, seed: u64, blocks: usize, full: bool) -> Result<String, String> {
    let (g, layout) = layout(n, avg_degree, seed)?;
    let cfg = KernelizerConfig {
        blocks,
        tracking: false,
        seed,
        mode: if full { Mode::Full } else { Mode::Quasi },
        ..KernelizerConfig::default()
    };
    let r = kernelize(&g, &cfg).map_err(|e| e.to_string())?;
    let removed_by = r
        .log
        .removal_attribution(n)
        .into_iter()
        .map(|rule| rule.map(|r| r.name()))
        .collect();
    let view = KernelView {
        layout,
        removed_by,
        offset: r.offset,
        kernel_vertices: r.kernel.live_count(),
        kernel_edges: r.kernel.edge_count(),
        rounds: r.stats.rounds,
        removals: r.stats.removals,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LpView {
    #[serde(flatten)]
    layout: Layout,
    /// Twice the LP value of each vertex: 0, 1 or 2.
    x2: Vec<u8>,
    objective2: usize,
    ones: usize,
    halves: usize,
    zeros: usize,
}

pub fn lp_view(n: usize, avg_degree: f64, seed: u64) -> Result<String, String> {
    let (g, layout) = layout(n, avg_degree, seed)?;
    let x = solve_lp(&g, 1, seed).map_err(|e| e.to_string())?;
    let view = LpView {
        layout,
        x2: (0..n as VertexId).map(|v| x.value2(v).unwrap_or(0)).collect(),
        objective2: x.objective2(),
        ones: x.ones().len(),
        halves: x.halves().len(),
        zeros: x.zeros().len(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct PartitionView {
    #[serde(flatten)]
    layout: Layout,
    block: Vec<u32>,
    /// 2 for boundary vertices, 1 for their other neighbors, 0 otherwise.
    layer: Vec<u8>,
    block_sizes: Vec<usize>,
    cut_edges: usize,
}

pub fn partition_view(n: usize, avg_degree: f64, seed: u64, blocks: usize) -> Result<String, String> {
    let (g, layout) = layout(n, avg_degree, seed)?;
    if blocks == 0 || blocks > 64 {
        return Err("block count must be in 1..=64".into());
    }
    let p = partition_internal(&g, blocks, seed).map_err(|e| e.to_string())?;
    let bi = boundary_sets(&g, &p);
    let view = PartitionView {
        layout,
        block: p.as_slice()[..n].to_vec(),
        layer: (0..n as VertexId).map(|v| bi.in_b0(v) as u8 + bi.in_b1(v) as u8).collect(),
        block_sizes: p.block_sizes(&g),
        cut_edges: p.cut_edges(&g),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = kernelView)]
pub fn kernel_view_js(n: usize, avg_degree: f64, seed: u32, blocks: usize, full: bool) -> Result<String, JsError> {
    kernel_view(n, avg_degree, seed as u64, blocks, full).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = lpView)]
pub fn lp_view_js(n: usize, avg_degree: f64, seed: u32) -> Result<String, JsError> {
    lp_view(n, avg_degree, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = partitionView)]
pub fn partition_view_js(n: usize, avg_degree: f64, seed: u32, blocks: usize) -> Result<String, JsError> {
    partition_view(n, avg_degree, seed as u64, blocks).map_err(|e| JsError::new(&e))
}
