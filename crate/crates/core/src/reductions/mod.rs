//! Reduction rules, their undo records and the reduction log.

mod local;
mod paths;

use std::fmt;
use std::ops::AddAssign;

use serde::Serialize;

use crate::graph::VertexId;

pub use local::{Confinement, Reducer};
pub(crate) use local::{BlockOutcome, BlockWorker};
pub use paths::{reduce_degree_two_paths, reduce_low_degree, PreprocessOutcome};

/// How a maximal path of degree-two vertices was contracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathCase {
    /// Whole component was a cycle; every other vertex is taken.
    Cycle,
    /// The endpoints were excluded from the solution and hidden.
    ExcludeEndpoints,
    /// Even path: removed and replaced by the edge `{a, b}`.
    Bridge,
    /// Odd path between nonadjacent endpoints: `b` merged into `a`.
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionRecord {
    DegreeZero {
        v: VertexId,
    },
    DegreeOne {
        v: VertexId,
        u: VertexId,
    },
    PathContraction {
        case: PathCase,
        a: VertexId,
        b: VertexId,
        path: Vec<VertexId>,
    },
    /// `site` is the vertex that carries the fold: `v` itself or the surviving neighbor `u`.
    Fold {
        v: VertexId,
        u: VertexId,
        w: VertexId,
        site: VertexId,
    },
    IsolatedClique {
        v: VertexId,
        clique: Vec<VertexId>,
    },
    TwinIncluded {
        u: VertexId,
        v: VertexId,
        nbrs: [VertexId; 3],
    },
    TwinFolded {
        u: VertexId,
        v: VertexId,
        nbrs: [VertexId; 3],
        w: VertexId,
    },
    Unconfined {
        v: VertexId,
    },
    Diamond {
        v: VertexId,
    },
    LpRemoval {
        ones: Vec<VertexId>,
        zeros: Vec<VertexId>,
    },
}

impl ReductionRecord {
    pub fn rule(&self) -> Rule {
        match self {
            ReductionRecord::DegreeZero { .. } => Rule::DegreeZero,
            ReductionRecord::DegreeOne { .. } => Rule::DegreeOne,
            ReductionRecord::PathContraction { .. } => Rule::DegreeTwoPath,
            ReductionRecord::Fold { .. } => Rule::Fold,
            ReductionRecord::IsolatedClique { .. } => Rule::IsolatedClique,
            ReductionRecord::TwinIncluded { .. } | ReductionRecord::TwinFolded { .. } => Rule::Twin,
            ReductionRecord::Unconfined { .. } => Rule::Unconfined,
            ReductionRecord::Diamond { .. } => Rule::Diamond,
            ReductionRecord::LpRemoval { .. } => Rule::Lp,
        }
    }

    /// Vertices this record took out of the live graph.
    pub fn removed_vertices(&self) -> Vec<VertexId> {
        match self {
            ReductionRecord::DegreeZero { v }
            | ReductionRecord::Unconfined { v }
            | ReductionRecord::Diamond { v } => vec![*v],
            ReductionRecord::DegreeOne { v, u } => vec![*v, *u],
            ReductionRecord::PathContraction { case, a, b, path } => match case {
                PathCase::ExcludeEndpoints if a == b => vec![*a],
                PathCase::ExcludeEndpoints => vec![*a, *b],
                PathCase::Merge => {
                    let mut out = path.clone();
                    out.push(*b);
                    out
                }
                PathCase::Cycle | PathCase::Bridge => path.clone(),
            },
            ReductionRecord::Fold { v, u, w, site } => {
                if site == v {
                    vec![*u, *w]
                } else {
                    vec![*v, *w]
                }
            }
            ReductionRecord::IsolatedClique { v, clique } => {
                let mut out = vec![*v];
                out.extend_from_slice(clique);
                out
            }
            ReductionRecord::TwinIncluded { u, v, nbrs } | ReductionRecord::TwinFolded { u, v, nbrs, .. } => {
                vec![*u, *v, nbrs[0], nbrs[1], nbrs[2]]
            }
            ReductionRecord::LpRemoval { ones, zeros } => {
                let mut out = ones.clone();
                out.extend_from_slice(zeros);
                out
            }
        }
    }

    /// Solution vertices this record committed to the offset.
    pub fn offset(&self) -> usize {
        match self {
            ReductionRecord::DegreeZero { .. }
            | ReductionRecord::DegreeOne { .. }
            | ReductionRecord::Fold { .. }
            | ReductionRecord::IsolatedClique { .. } => 1,
            ReductionRecord::PathContraction { case, path, .. } => match case {
                PathCase::Cycle | PathCase::Bridge => path.len() / 2,
                PathCase::Merge => path.len().div_ceil(2),
                PathCase::ExcludeEndpoints => 0,
            },
            ReductionRecord::TwinIncluded { .. } | ReductionRecord::TwinFolded { .. } => 2,
            ReductionRecord::Unconfined { .. } | ReductionRecord::Diamond { .. } => 0,
            ReductionRecord::LpRemoval { ones, .. } => ones.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    DegreeZero,
    DegreeOne,
    DegreeTwoPath,
    IsolatedClique,
    Fold,
    Twin,
    Unconfined,
    Diamond,
    Lp,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::DegreeZero,
        Rule::DegreeOne,
        Rule::DegreeTwoPath,
        Rule::IsolatedClique,
        Rule::Fold,
        Rule::Twin,
        Rule::Unconfined,
        Rule::Diamond,
        Rule::Lp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::DegreeZero => "degree_zero",
            Rule::DegreeOne => "degree_one",
            Rule::DegreeTwoPath => "degree_two_path",
            Rule::IsolatedClique => "isolated_clique",
            Rule::Fold => "fold",
            Rule::Twin => "twin",
            Rule::Unconfined => "unconfined",
            Rule::Diamond => "diamond",
            Rule::Lp => "lp",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Net number of live vertices each rule took out of the graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleCounts {
    pub degree_zero: usize,
    pub degree_one: usize,
    pub degree_two_path: usize,
    pub isolated_clique: usize,
    pub fold: usize,
    pub twin: usize,
    pub unconfined: usize,
    pub diamond: usize,
    pub lp: usize,
}

impl RuleCounts {
    pub fn get_mut(&mut self, rule: Rule) -> &mut usize {
        match rule {
            Rule::DegreeZero => &mut self.degree_zero,
            Rule::DegreeOne => &mut self.degree_one,
            Rule::DegreeTwoPath => &mut self.degree_two_path,
            Rule::IsolatedClique => &mut self.isolated_clique,
            Rule::Fold => &mut self.fold,
            Rule::Twin => &mut self.twin,
            Rule::Unconfined => &mut self.unconfined,
            Rule::Diamond => &mut self.diamond,
            Rule::Lp => &mut self.lp,
        }
    }

    pub fn get(&self, rule: Rule) -> usize {
        let mut copy = *self;
        *copy.get_mut(rule)
    }

    pub fn add(&mut self, rule: Rule, n: usize) {
        *self.get_mut(rule) += n;
    }

    pub fn total(&self) -> usize {
        Rule::ALL.iter().map(|&r| self.get(r)).sum()
    }
}

impl AddAssign for RuleCounts {
    fn add_assign(&mut self, other: RuleCounts) {
        for r in Rule::ALL {
            self.add(r, other.get(r));
        }
    }
}

/// Which rules run, and their size caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleConfig {
    pub degree_one: bool,
    pub degree_two_paths: bool,
    pub isolated_clique: bool,
    pub fold: bool,
    pub twin: bool,
    pub unconfined: bool,
    pub diamond: bool,
    pub lp: bool,
    /// Largest neighborhood of a vertex tested for being simplicial.
    pub clique_cap: usize,
    /// Largest `|N(S)|` searched for a diamond.
    pub diamond_cap: usize,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            degree_one: true,
            degree_two_paths: true,
            isolated_clique: true,
            fold: true,
            twin: true,
            unconfined: true,
            diamond: true,
            lp: true,
            clique_cap: 2,
            diamond_cap: 64,
        }
    }
}

/// Where a run of records came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Preprocess,
    Local { round: usize, block: u32 },
    Lp { round: usize },
    Finish,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSegment {
    pub phase: Phase,
    pub records: Vec<ReductionRecord>,
}

/// Undo records grouped into segments in creation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    pub segments: Vec<LogSegment>,
}

impl ReductionLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a segment; empty ones are dropped.
    pub fn push_segment(&mut self, phase: Phase, records: Vec<ReductionRecord>) {
        if !records.is_empty() {
            self.segments.push(LogSegment { phase, records });
        }
    }

    pub fn records(&self) -> impl DoubleEndedIterator<Item = &ReductionRecord> {
        self.segments.iter().flat_map(|s| s.records.iter())
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.records.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn offset(&self) -> usize {
        self.records().map(ReductionRecord::offset).sum()
    }

    /// For each id below `capacity`, the rule that removed it, if any.
    pub fn removal_attribution(&self, capacity: usize) -> Vec<Option<Rule>> {
        let mut out = vec![None; capacity];
        for r in self.records() {
            for v in r.removed_vertices() {
                if let Some(slot) = out.get_mut(v as usize) {
                    *slot = Some(r.rule());
                }
            }
        }
        out
    }
}
