//! The round-based driver: preprocessing, partitioning, blockwise local
//! reductions under reduction tracking, and the LP reduction.

use std::sync::atomic::{AtomicBool, AtomicU8, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use web_time::Instant;

use crate::error::{KernelError, Result};
use crate::graph::{Graph, VertexId};
use crate::lp::{apply_lp, LpSolver};
use crate::partition::{boundary_sets, partition_internal, Partition};
use crate::reductions::{
    reduce_degree_two_paths, reduce_low_degree, BlockOutcome, BlockWorker, Phase, PreprocessOutcome, Reducer,
    ReductionLog, Rule, RuleConfig, RuleCounts,
};
use crate::stats::{RoundStats, RunStats, SizeSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Stop when a round removes nothing; tracking may leave rules applicable.
    Quasi,
    /// Follow the rounds with an exhaustive sequential pass.
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Quasi => "quasi",
            Mode::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionSource {
    Internal,
    /// Block ids over the input vertex ids.
    Given(Partition),
}

#[derive(Clone, Debug)]
pub struct KernelizerConfig {
    pub workers: usize,
    pub blocks: usize,
    pub tracking: bool,
    pub tracking_threshold: f64,
    pub sample_interval: Duration,
    pub mode: Mode,
    pub seed: u64,
    pub partition: PartitionSource,
    pub rules: RuleConfig,
    /// Re-check every blockwise unconfined removal with the unrestricted
    /// test. Blocks are then processed one at a time.
    pub audit: bool,
}

impl Default for KernelizerConfig {
    fn default() -> Self {
        KernelizerConfig {
            workers: 1,
            blocks: 1,
            tracking: true,
            tracking_threshold: 0.05,
            sample_interval: Duration::from_millis(10),
            mode: Mode::Quasi,
            seed: 0,
            partition: PartitionSource::Internal,
            rules: RuleConfig::default(),
            audit: false,
        }
    }
}

impl KernelizerConfig {
    /// `p` workers on `p` blocks.
    pub fn with_workers(p: usize) -> Self {
        KernelizerConfig { workers: p, blocks: p, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(KernelError::usage("workers must be at least 1"));
        }
        if self.blocks == 0 {
            return Err(KernelError::usage("blocks must be at least 1"));
        }
        if !(self.tracking_threshold > 0.0 && self.tracking_threshold < 1.0) {
            return Err(KernelError::usage(format!(
                "tracking threshold {} outside (0, 1)",
                self.tracking_threshold
            )));
        }
        if self.sample_interval.is_zero() {
            return Err(KernelError::usage("sample interval must be positive"));
        }
        Ok(())
    }
}

/// Rate-based early stop of a local phase.
///
/// Raises when the removal rate over the last interval falls below
/// `threshold` times the average rate since the phase started, or when
/// nothing at all has been removed since the phase started.
#[derive(Clone, Debug)]
pub struct ReductionTracker {
    threshold: f64,
    start: (f64, usize),
    last: Option<(f64, usize)>,
}

impl ReductionTracker {
    pub fn new(threshold: f64, t0: f64, size0: usize) -> Self {
        ReductionTracker { threshold, start: (t0, size0), last: None }
    }

    /// Feeds a sample taken at time `t` (seconds); returns whether to stop.
    pub fn observe(&mut self, t: f64, size: usize) -> bool {
        let raise = match self.last {
            Some((tl, sl)) if t > tl && t > self.start.0 => {
                let recent = (sl as f64 - size as f64) / (t - tl);
                let average = (self.start.1 as f64 - size as f64) / (t - self.start.0);
                recent < self.threshold * average || (recent <= 0.0 && average <= 0.0)
            }
            _ => false,
        };
        self.last = Some((t, size));
        raise
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Tracking,
    External,
}

/// Shared flag telling block workers to return.
#[derive(Debug, Default)]
pub struct StopSignal {
    raised: AtomicBool,
    reason: AtomicU8,
}

impl StopSignal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn raise(&self, reason: StopReason) {
        if !self.raised.swap(true, Ordering::AcqRel) {
            self.reason.store(reason as u8 + 1, Ordering::Release);
        }
    }

    pub fn is_raised(&self) -> bool {
        self.raised.load(Ordering::Acquire)
    }

    pub fn reason(&self) -> Option<StopReason> {
        match self.reason.load(Ordering::Acquire) {
            1 => Some(StopReason::Tracking),
            2 => Some(StopReason::External),
            _ => None,
        }
    }

    pub(crate) fn flag(&self) -> &AtomicBool {
        &self.raised
    }
}

/// Vertices whose neighborhood changed since a rule last looked at them,
/// queued per block.
#[derive(Debug)]
pub struct CandidateSet {
    flags: Vec<AtomicBool>,
    queues: Vec<Vec<VertexId>>,
}

impl CandidateSet {
    /// Every live vertex, each in its block's queue.
    pub fn new(g: &Graph, part: &Partition) -> Self {
        let flags = (0..g.capacity()).map(|v| AtomicBool::new(g.is_alive(v as VertexId))).collect();
        let mut queues = vec![Vec::new(); part.k()];
        for v in g.live_vertices() {
            queues[part.block(v) as usize].push(v);
        }
        // workers pop from the back; start with the smallest ids
        queues.iter_mut().for_each(|q| q.reverse());
        CandidateSet { flags, queues }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.flags.get(v as usize).is_some_and(|f| f.load(Ordering::Relaxed))
    }

    pub fn push(&mut self, v: VertexId, block: u32) {
        if (v as usize) >= self.flags.len() {
            self.resize(v as usize + 1);
        }
        if !self.flags[v as usize].swap(true, Ordering::Relaxed) {
            self.queues[block as usize].push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.queues.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn resize(&mut self, n: usize) {
        self.flags.resize_with(n, || AtomicBool::new(false));
    }
}

#[derive(Clone, Debug)]
pub struct KernelResult {
    pub kernel: Graph,
    /// Kernel vertex id to the id in the working graph: an input id, or a
    /// gadget id at or above the input vertex count.
    pub vertex_map: Vec<VertexId>,
    pub offset: usize,
    pub log: ReductionLog,
    pub stats: RunStats,
    pub is_quasi: bool,
    pub input_vertices: usize,
    /// Capacity of the working graph, gadgets included.
    pub working_capacity: usize,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn preprocess(g: &mut Graph, rules: &RuleConfig) -> PreprocessOutcome {
    if rules.degree_two_paths {
        reduce_degree_two_paths(g, rules)
    } else {
        reduce_low_degree(g, rules)
    }
}

struct Driver<'c> {
    cfg: &'c KernelizerConfig,
    g: Graph,
    part: Partition,
    cand: CandidateSet,
    log: ReductionLog,
    offset: usize,
    stats: RunStats,
    lp: LpSolver,
    /// Per block, the vertex where the last cut-short sweep stopped.
    sweep_from: Vec<VertexId>,
}

impl Driver<'_> {
    /// Runs every block once, under tracking. Returns the net number of
    /// removed vertices and whether tracking stopped the phase.
    fn local_phase(&mut self, round: usize) -> (usize, bool) {
        let cfg = self.cfg;
        let k = self.part.k();
        let boundary = boundary_sets(&self.g, &self.part);
        let first_free = self.g.capacity();
        let slots = self.g.live_count() / 4 + 16;
        self.g.reserve_slots(slots);
        self.cand.resize(first_free + slots);
        let mut members = vec![Vec::new(); k];
        for v in self.g.live_vertices() {
            members[self.part.block(v) as usize].push(v);
        }
        let queues: Vec<Mutex<Vec<VertexId>>> =
            std::mem::take(&mut self.cand.queues).into_iter().map(Mutex::new).collect();
        let live_before = self.g.live_count();
        let stop = StopSignal::new();
        let next = AtomicUsize::new(0);
        let done = AtomicUsize::new(0);
        let outcomes: Mutex<Vec<(u32, BlockOutcome)>> = Mutex::new(Vec::new());
        let phase_over = AtomicBool::new(false);
        let start = Instant::now();
        let mut samples = Vec::new();

        let sg = self.g.share(first_free);
        let (part, flags) = (&self.part, &self.cand.flags);
        let whole = k == 1;
        self.sweep_from.resize(k, 0);
        let sweep_from = &self.sweep_from;
        let work = || loop {
            let b = next.fetch_add(1, Ordering::Relaxed);
            if b >= k || stop.is_raised() {
                break;
            }
            let queue = std::mem::take(&mut *queues[b].lock().unwrap());
            let mut w =
                BlockWorker::new(&sg, part, &boundary, b as u32, whole, &cfg.rules, flags, &members[b], queue);
            w.audit = cfg.audit;
            w.sweep_from = sweep_from[b];
            w.run(stop.flag(), true);
            outcomes.lock().unwrap().push((b as u32, w.finish()));
            done.fetch_add(1, Ordering::Release);
        };
        let monitor = || {
            // parallel runs start sampling once the first block is done
            let mut tracker: Option<ReductionTracker> = None;
            let mut out = Vec::new();
            loop {
                thread::park_timeout(cfg.sample_interval);
                if phase_over.load(Ordering::Acquire) {
                    return out;
                }
                if cfg.workers > 1 && done.load(Ordering::Acquire) == 0 {
                    continue;
                }
                let t = start.elapsed().as_secs_f64();
                let live = sg.live_count();
                out.push(SizeSample { round, elapsed_ms: t * 1e3, live });
                let tr = tracker.get_or_insert_with(|| ReductionTracker::new(cfg.tracking_threshold, 0.0, live_before));
                if tr.observe(t, live) {
                    stop.raise(StopReason::Tracking);
                    return out;
                }
            }
        };
        let inline_workers = cfg.workers == 1 || cfg.audit;
        if inline_workers && !cfg.tracking {
            work();
        } else {
            thread::scope(|s| {
                let m = cfg.tracking.then(|| s.spawn(monitor));
                if inline_workers {
                    work();
                } else {
                    let handles: Vec<_> = (0..cfg.workers.min(k)).map(|_| s.spawn(work)).collect();
                    for h in handles {
                        h.join().expect("block worker panicked");
                    }
                }
                phase_over.store(true, Ordering::Release);
                if let Some(m) = m {
                    m.thread().unpark();
                    samples = m.join().expect("tracking monitor panicked");
                }
            });
        }
        let used = sg.used_end();
        self.g.release_slots(used);
        self.cand.resize(used);
        self.cand.queues = queues.into_iter().map(|q| q.into_inner().unwrap()).collect();

        let mut outcomes = outcomes.into_inner().unwrap();
        outcomes.sort_by_key(|(b, _)| *b);
        let mut deferred = Vec::new();
        for (b, out) in outcomes {
            for &w in &out.gadgets {
                self.part.assign(w, b);
            }
            self.offset += out.offset;
            self.stats.removals += out.counts;
            self.stats.audit_checks += out.audit_checks;
            self.stats.audit_failures += out.audit_failures;
            self.log.push_segment(Phase::Local { round, block: b }, out.records);
            self.cand.queues[b as usize] = out.queue;
            self.sweep_from[b as usize] = out.sweep_resume;
            deferred.extend(out.deferred);
        }
        for x in deferred {
            if self.g.is_alive(x) {
                self.cand.push(x, self.part.block(x));
            }
        }
        self.stats.size_samples.extend(samples);
        (live_before.saturating_sub(self.g.live_count()), stop.is_raised())
    }

    fn lp_phase(&mut self, round: usize) -> Result<usize> {
        if !self.cfg.rules.lp || self.g.live_count() == 0 {
            return Ok(0);
        }
        let x = self.lp.solve(&self.g)?;
        let Some(record) = apply_lp(&mut self.g, &x)? else { return Ok(0) };
        let removed = record.removed_vertices();
        for &v in &removed {
            for i in 0..self.g.raw_neighbors(v).len() {
                let u = self.g.raw_neighbors(v)[i];
                if self.g.is_alive(u) {
                    self.cand.push(u, self.part.block(u));
                }
            }
        }
        self.offset += record.offset();
        self.stats.removals.add(Rule::Lp, removed.len());
        self.log.push_segment(Phase::Lp { round }, vec![record]);
        Ok(removed.len())
    }
}

/// Runs the full pipeline on a copy of `g`.
pub fn kernelize(input: &Graph, cfg: &KernelizerConfig) -> Result<KernelResult> {
    cfg.validate()?;
    let t_total = Instant::now();
    let mut stats = RunStats {
        input_vertices: input.live_count(),
        input_edges: input.edge_count(),
        mode: cfg.mode.name().to_string(),
        workers: cfg.workers,
        tracking: cfg.tracking,
        ..RunStats::default()
    };
    let mut work = input.clone();
    let mut log = ReductionLog::new();

    let t = Instant::now();
    let pre = preprocess(&mut work, &cfg.rules);
    let offset = pre.offset;
    stats.removals += pre.counts;
    log.push_segment(Phase::Preprocess, pre.records);
    stats.preprocessed_vertices = work.live_count();
    stats.timings.preprocess_ms = ms(t);

    let t = Instant::now();
    let mut part = match &cfg.partition {
        PartitionSource::Internal if cfg.blocks == 1 => Partition::single(work.capacity()),
        PartitionSource::Internal => partition_internal(&work, cfg.blocks, cfg.seed)?,
        PartitionSource::Given(p) => {
            if p.len() != input.capacity() {
                return Err(KernelError::malformed(format!(
                    "partition has {} entries for {} vertices",
                    p.len(),
                    input.capacity()
                )));
            }
            p.clone()
        }
    };
    part.resize(work.capacity());
    stats.blocks = part.k();
    stats.cut_edges = part.cut_edges(&work);
    stats.timings.partition_ms = ms(t);

    let cand = CandidateSet::new(&work, &part);
    let mut d = Driver {
        cfg,
        g: work,
        part,
        cand,
        log,
        offset,
        stats,
        lp: LpSolver::new(cfg.workers, cfg.seed),
        sweep_from: Vec::new(),
    };
    let mut round = 0;
    loop {
        let live_before = d.g.live_count();
        let t = Instant::now();
        let (local_removed, stopped) = d.local_phase(round);
        d.stats.timings.local_ms += ms(t);
        let t = Instant::now();
        let lp_removed = d.lp_phase(round)?;
        d.stats.timings.lp_ms += ms(t);
        d.stats.round_log.push(RoundStats { round, live_before, local_removed, lp_removed, stopped });
        d.stats.tracking_stops += stopped as usize;
        round += 1;
        if local_removed + lp_removed == 0 {
            break;
        }
    }
    d.stats.rounds = round;

    let Driver { mut g, mut log, mut stats, mut offset, .. } = d;
    if cfg.mode == Mode::Full {
        let t = Instant::now();
        let fin = finish_full_kernel(&mut g, &mut log, &cfg.rules, cfg.seed)?;
        offset += fin.offset;
        stats.removals += fin.counts;
        stats.timings.finish_ms = ms(t);
    }

    let c = g.compact();
    stats.kernel_vertices = c.graph.live_count();
    stats.kernel_edges = c.graph.edge_count();
    stats.offset = offset;
    stats.timings.total_ms = ms(t_total);
    Ok(KernelResult {
        kernel: c.graph,
        vertex_map: c.new_to_old,
        offset,
        log,
        stats,
        is_quasi: cfg.mode == Mode::Quasi,
        input_vertices: input.capacity(),
        working_capacity: g.capacity(),
    })
}

/// Totals of a [`finish_full_kernel`] call.
#[derive(Clone, Debug, Default)]
pub struct FinishOutcome {
    pub removed: usize,
    pub offset: usize,
    pub counts: RuleCounts,
}

/// Applies every rule on the whole graph, sequentially and without
/// tracking, until none fires.
pub fn finish_full_kernel(g: &mut Graph, log: &mut ReductionLog, rules: &RuleConfig, seed: u64) -> Result<FinishOutcome> {
    let mut fin = FinishOutcome::default();
    let mut lp = LpSolver::new(1, seed);
    let start = g.live_count();
    let never = AtomicBool::new(false);
    loop {
        let before = g.live_count();
        let pre = preprocess(g, rules);
        fin.offset += pre.offset;
        fin.counts += pre.counts;
        log.push_segment(Phase::Finish, pre.records);

        let all: Vec<VertexId> = g.live_vertices().collect();
        let mut r = Reducer::new(g, rules.clone());
        r.process(&all, &never);
        fin.offset += r.offset();
        fin.counts += r.counts();
        log.push_segment(Phase::Finish, r.into_records());

        if rules.lp && g.live_count() > 0 {
            let x = lp.solve(g)?;
            if let Some(record) = apply_lp(g, &x)? {
                fin.offset += record.offset();
                fin.counts.add(Rule::Lp, record.removed_vertices().len());
                log.push_segment(Phase::Finish, vec![record]);
            }
        }
        if g.live_count() == before {
            break;
        }
    }
    fin.removed = start - g.live_count();
    Ok(fin)
}

/// The same pipeline with one worker and one block.
pub fn sequential_kernelize(g: &Graph, cfg: &KernelizerConfig) -> Result<KernelResult> {
    let cfg = KernelizerConfig { workers: 1, blocks: 1, partition: PartitionSource::Internal, ..cfg.clone() };
    kernelize(g, &cfg)
}
