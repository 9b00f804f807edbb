//! METIS graph files and kernel output.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId};
use crate::kernelizer::{KernelResult, KernelizerConfig, PartitionSource};
use crate::stats::RunStats;

/// Parses a METIS graph. Vertex weights and edge weights, if the format
/// field announces them, are read and ignored.
pub fn parse_metis(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| KernelError::malformed("missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 4 {
        return Err(KernelError::malformed(format!("line {hline}: header must be \"n m [fmt [ncon]]\"")));
    }
    let num = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| KernelError::malformed(format!("line {hline}: bad {what} {s:?}")))
    };
    let n = num(fields[0], "vertex count")?;
    let m = num(fields[1], "edge count")?;
    let fmt = fields.get(2).copied().unwrap_or("0");
    let (vertex_weights, edge_weights) = match fmt {
        "0" | "00" | "000" => (false, false),
        "1" | "001" => (false, true),
        "10" | "010" => (true, false),
        "11" | "011" => (true, true),
        _ => return Err(KernelError::malformed(format!("line {hline}: unsupported format {fmt:?}"))),
    };
    let ncon = match fields.get(3) {
        Some(s) => num(s, "constraint count")?,
        None => vertex_weights as usize,
    };
    if n > VertexId::MAX as usize {
        return Err(KernelError::malformed(format!("line {hline}: {n} vertices exceed the id range")));
    }

    let mut adj: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut line_of = Vec::with_capacity(n);
    for (lno, line) in lines {
        if adj.len() == n {
            if line.is_empty() {
                continue;
            }
            return Err(KernelError::malformed(format!("line {lno}: more than {n} vertex lines")));
        }
        let mut tokens = line.split_whitespace();
        for _ in 0..ncon {
            tokens.next();
        }
        let mut list = Vec::new();
        while let Some(tok) = tokens.next() {
            let u: usize = tok
                .parse()
                .map_err(|_| KernelError::malformed(format!("line {lno}: bad neighbor {tok:?}")))?;
            if u == 0 || u > n {
                return Err(KernelError::malformed(format!("line {lno}: neighbor {u} outside 1..={n}")));
            }
            if u - 1 == adj.len() {
                return Err(KernelError::malformed(format!("line {lno}: self-loop on vertex {u}")));
            }
            if edge_weights {
                tokens.next();
            }
            list.push((u - 1) as VertexId);
        }
        list.sort_unstable();
        list.dedup();
        adj.push(list);
        line_of.push(lno);
    }
    if adj.len() < n {
        return Err(KernelError::malformed(format!("header announces {n} vertices but the body has {}", adj.len())));
    }
    let mut entries = 0usize;
    for v in 0..n {
        for &u in &adj[v] {
            if adj[u as usize].binary_search(&(v as VertexId)).is_err() {
                return Err(KernelError::malformed(format!(
                    "edge {}-{} on line {} is missing from line {}",
                    v + 1,
                    u + 1,
                    line_of[v],
                    line_of[u as usize]
                )));
            }
        }
        entries += adj[v].len();
    }
    if entries / 2 != m {
        return Err(KernelError::malformed(format!("header announces {m} edges but the body has {}", entries / 2)));
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

pub fn read_metis(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_metis(&text)
}

/// METIS text of the live graph, with live vertices renumbered densely.
pub fn write_metis(g: &Graph, out: &mut impl Write) -> std::io::Result<()> {
    let c = g.compact();
    let k = &c.graph;
    writeln!(out, "{} {}", k.live_count(), k.edge_count())?;
    for v in 0..k.capacity() as VertexId {
        let mut first = true;
        for u in k.neighbors(v) {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{}", u + 1)?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn io_err(path: &Path, e: std::io::Error) -> KernelError {
    KernelError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    workers: usize,
    blocks: usize,
    mode: &'static str,
    tracking: bool,
    tracking_threshold: f64,
    sample_interval_ms: f64,
    seed: u64,
    partition: &'a str,
    disabled_rules: Vec<&'static str>,
}

#[derive(Serialize)]
struct StatsFile<'a> {
    offset: usize,
    is_quasi: bool,
    config: ConfigEcho<'a>,
    stats: &'a RunStats,
}

pub fn stats_json(result: &KernelResult, cfg: &KernelizerConfig) -> String {
    let r = &cfg.rules;
    let disabled = [
        ("degree_one", r.degree_one),
        ("degree_two_path", r.degree_two_paths),
        ("isolated_clique", r.isolated_clique),
        ("fold", r.fold),
        ("twin", r.twin),
        ("unconfined", r.unconfined),
        ("diamond", r.diamond),
        ("lp", r.lp),
    ]
    .into_iter()
    .filter(|(_, on)| !on)
    .map(|(name, _)| name)
    .collect();
    let file = StatsFile {
        offset: result.offset,
        is_quasi: result.is_quasi,
        config: ConfigEcho {
            workers: cfg.workers,
            blocks: result.stats.blocks,
            mode: cfg.mode.name(),
            tracking: cfg.tracking,
            tracking_threshold: cfg.tracking_threshold,
            sample_interval_ms: cfg.sample_interval.as_secs_f64() * 1e3,
            seed: cfg.seed,
            partition: match cfg.partition {
                PartitionSource::Internal => "internal",
                PartitionSource::Given(_) => "file",
            },
            disabled_rules: disabled,
        },
        stats: &result.stats,
    };
    serde_json::to_string_pretty(&file).expect("stats serialize")
}

/// Writes `<prefix>.graph`, `<prefix>.map` and `<prefix>.stats.json`.
pub fn write_kernel(result: &KernelResult, cfg: &KernelizerConfig, prefix: impl AsRef<Path>) -> Result<()> {
    let prefix = prefix.as_ref();
    write_file(&with_suffix(prefix, ".graph"), |w| write_metis(&result.kernel, w))?;
    write_file(&with_suffix(prefix, ".map"), |w| {
        result.vertex_map.iter().try_for_each(|v| writeln!(w, "{v}"))
    })?;
    let json = stats_json(result, cfg);
    write_file(&with_suffix(prefix, ".stats.json"), |w| w.write_all(json.as_bytes()))
}

/// Writes sorted ids, one per line, to `<prefix>.mis`.
pub fn write_mis(set: &[VertexId], prefix: impl AsRef<Path>) -> Result<PathBuf> {
    let path = with_suffix(prefix.as_ref(), ".mis");
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    write_file(&path, |w| sorted.iter().try_for_each(|v| writeln!(w, "{v}")))?;
    Ok(path)
}
