//! Seeded random graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// Erdős–Rényi graph G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::build(n, &edges).expect("generated edges are in range")
}

/// Random geometric graph in the unit square with the radius chosen for the
/// given expected average degree. Returns the graph and the point coordinates.
pub fn random_geometric(n: usize, avg_degree: f64, seed: u64) -> (Graph, Vec<(f64, f64)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let r = if n > 1 { (avg_degree / ((n - 1) as f64 * std::f64::consts::PI)).sqrt() } else { 1.0 };
    let cells = ((1.0 / r).floor() as usize).clamp(1, 1 << 12);
    let cell_of = |c: f64| ((c * cells as f64) as usize).min(cells - 1);
    let mut grid: Vec<Vec<VertexId>> = vec![Vec::new(); cells * cells];
    for (i, &(x, y)) in pts.iter().enumerate() {
        grid[cell_of(y) * cells + cell_of(x)].push(i as VertexId);
    }
    let r2 = r * r;
    let mut edges = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = (cell_of(x), cell_of(y));
        for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &grid[gy * cells + gx] {
                    if (j as usize) > i {
                        let (px, py) = pts[j as usize];
                        if (px - x).powi(2) + (py - y).powi(2) <= r2 {
                            edges.push((i as VertexId, j));
                        }
                    }
                }
            }
        }
    }
    (Graph::build(n, &edges).expect("generated edges are in range"), pts)
}
