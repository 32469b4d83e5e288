//! Concordance/discordance outranking with iterative kernel extraction.
//!
//! `a` outranks `b` at levels `(c*, d*)` when `c(a, b) >= c*` and
//! `d(a, b) <= d*`. Each schedule step restricts the relation to the current
//! survivors, collapses outranking cycles into tied groups, and keeps the
//! kernel of the resulting acyclic relation. Later steps use lower levels, so
//! the survivor sets shrink.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::decision::ScoreMatrix;
use crate::error::{Error, Result};
use crate::weighting::WeightVector;

/// Slack applied when comparing indices against threshold levels, so that
/// sums such as 0.1 + 0.2 + 0.3 meet a level of 0.6.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

/// Square alternatives x alternatives matrix with an undefined diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairMatrixDoc")]
pub struct PairMatrix {
    alternatives: Vec<String>,
    values: Vec<Vec<Option<f64>>>,
}

#[derive(Deserialize)]
struct PairMatrixDoc {
    alternatives: Vec<String>,
    values: Vec<Vec<Option<f64>>>,
}

impl TryFrom<PairMatrixDoc> for PairMatrix {
    type Error = Error;

    fn try_from(doc: PairMatrixDoc) -> Result<Self> {
        PairMatrix::new(doc.alternatives, doc.values)
    }
}

impl PairMatrix {
    /// Validates shape and `[0, 1]` range; diagonal entries are discarded.
    pub fn new(alternatives: Vec<String>, mut values: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let n = alternatives.len();
        if n < 2 {
            return Err(Error::TooFewAlternatives { required: 2, found: n });
        }
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("expected a {n}x{n} matrix")));
        }
        for (a, row) in values.iter_mut().enumerate() {
            row[a] = None;
            for (b, v) in row.iter().enumerate() {
                if a == b {
                    continue;
                }
                match v {
                    Some(x) if (0.0..=1.0).contains(x) => {}
                    Some(x) => {
                        return Err(Error::InvalidMatrix(format!(
                            "({}, {}) = {x} is outside [0, 1]",
                            alternatives[a], alternatives[b]
                        )))
                    }
                    None => {
                        return Err(Error::InvalidMatrix(format!(
                            "({}, {}) is undefined",
                            alternatives[a], alternatives[b]
                        )))
                    }
                }
            }
        }
        Ok(PairMatrix { alternatives, values })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    /// Off-diagonal value; panics on the diagonal.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a][b].expect("diagonal is undefined")
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.values
    }

    pub fn row_max(&self, a: usize) -> f64 {
        self.values[a].iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Rows rendered with two decimals, `None` on the diagonal.
    pub fn rendered(&self) -> Vec<Vec<Option<String>>> {
        self.values
            .iter()
            .map(|row| row.iter().map(|v| v.map(|x| format!("{x:.2}"))).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConcordanceMatrix(pub PairMatrix);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordanceMatrix {
    #[serde(flatten)]
    pub matrix: PairMatrix,
    /// Criteria left out because their score range is zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded_criteria: Vec<String>,
}

impl DiscordanceMatrix {
    pub fn from_matrix(matrix: PairMatrix) -> Self {
        DiscordanceMatrix {
            matrix,
            excluded_criteria: Vec::new(),
        }
    }

    /// The alternative whose largest discordance is strictly smallest.
    pub fn least_discordant(&self) -> Option<usize> {
        let maxima: Vec<f64> = (0..self.matrix.len()).map(|a| self.matrix.row_max(a)).collect();
        let best = maxima.iter().copied().fold(f64::INFINITY, f64::min);
        let mut at_best = maxima
            .iter()
            .enumerate()
            .filter(|(_, m)| (**m - best).abs() <= THRESHOLD_TOLERANCE);
        match (at_best.next(), at_best.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }
}

impl ConcordanceMatrix {
    /// Pairs `(a, b)` with `c(a, b) + c(b, a) < 1`. Empty for complete data
    /// under weak-inequality concordance.
    pub fn pair_sum_violations(&self) -> Vec<(String, String, f64)> {
        let m = &self.0;
        let mut out = Vec::new();
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                let sum = m.get(a, b) + m.get(b, a);
                if sum < 1.0 - THRESHOLD_TOLERANCE {
                    out.push((m.alternatives[a].clone(), m.alternatives[b].clone(), sum));
                }
            }
        }
        out
    }
}

fn require_pairs(scores: &ScoreMatrix) -> Result<()> {
    let n = scores.alternatives().len();
    if n < 2 {
        return Err(Error::TooFewAlternatives { required: 2, found: n });
    }
    Ok(())
}

/// `c(a, b)`: total weight of criteria on which `a` scores at least as well
/// as `b`. Criteria with a MISSING cell on either side count for neither.
pub fn concordance_matrix(scores: &ScoreMatrix, weights: &WeightVector) -> Result<ConcordanceMatrix> {
    let w = weights.aligned(scores.criterion_ids())?;
    require_pairs(scores)?;
    let rows = scores.rows();
    let n = rows.len();
    let values = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (a != b).then(|| {
                        let total: f64 = rows[a]
                            .iter()
                            .zip(&rows[b])
                            .zip(&w)
                            .filter_map(|((x, y), w)| match (x, y) {
                                (Some(x), Some(y)) if x >= y => Some(*w),
                                _ => None,
                            })
                            .fold(0.0, |acc, w| acc + w);
                        total.clamp(0.0, 1.0)
                    })
                })
                .collect()
        })
        .collect();
    Ok(ConcordanceMatrix(PairMatrix::new(
        scores.alternatives().to_vec(),
        values,
    )?))
}

/// `d(a, b)`: the largest gap by which `b` beats `a` on one criterion,
/// divided by that criterion's score range.
pub fn discordance_matrix(scores: &ScoreMatrix) -> Result<DiscordanceMatrix> {
    require_pairs(scores)?;
    let ranges: Vec<f64> = scores.criteria().iter().map(|c| c.range()).collect();
    let excluded_criteria = scores
        .criteria()
        .iter()
        .zip(&ranges)
        .filter(|(_, r)| **r <= 0.0)
        .map(|(c, _)| c.id.clone())
        .collect();
    let rows = scores.rows();
    let n = rows.len();
    let values = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (a != b).then(|| {
                        rows[a]
                            .iter()
                            .zip(&rows[b])
                            .zip(&ranges)
                            .filter_map(|((x, y), range)| match (x, y) {
                                (Some(x), Some(y)) if *range > 0.0 && y > x => Some(((y - x) / range).min(1.0)),
                                _ => None,
                            })
                            .fold(0.0, f64::max)
                    })
                })
                .collect()
        })
        .collect();
    Ok(DiscordanceMatrix {
        matrix: PairMatrix::new(scores.alternatives().to_vec(), values)?,
        excluded_criteria,
    })
}

/// Per-alternative weight of criteria on which its cell is MISSING.
pub fn missing_weight(scores: &ScoreMatrix, weights: &WeightVector) -> Result<Vec<(String, f64)>> {
    let w = weights.aligned(scores.criterion_ids())?;
    Ok(scores
        .alternatives()
        .iter()
        .zip(scores.rows())
        .map(|(a, row)| {
            let lost = row
                .iter()
                .zip(&w)
                .filter(|(x, _)| x.is_none())
                .fold(0.0, |acc, (_, w)| acc + w);
            (a.clone(), lost)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdLevel {
    pub concordance: f64,
    pub discordance: f64,
}

impl ThresholdLevel {
    pub fn new(concordance: f64, discordance: f64) -> Self {
        ThresholdLevel {
            concordance,
            discordance,
        }
    }
}

/// Levels to apply in order: concordance non-increasing, discordance
/// non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ThresholdLevel>", into = "Vec<ThresholdLevel>")]
pub struct ThresholdSchedule {
    levels: Vec<ThresholdLevel>,
}

impl TryFrom<Vec<ThresholdLevel>> for ThresholdSchedule {
    type Error = Error;

    fn try_from(levels: Vec<ThresholdLevel>) -> Result<Self> {
        ThresholdSchedule::new(levels)
    }
}

impl From<ThresholdSchedule> for Vec<ThresholdLevel> {
    fn from(s: ThresholdSchedule) -> Self {
        s.levels
    }
}

impl Default for ThresholdSchedule {
    /// Concordance from 0.9 down to 0.5 in steps of 0.1, discordance `1 - c`.
    fn default() -> Self {
        ThresholdSchedule {
            levels: [(0.9, 0.1), (0.8, 0.2), (0.7, 0.3), (0.6, 0.4), (0.5, 0.5)]
                .into_iter()
                .map(|(c, d)| ThresholdLevel::new(c, d))
                .collect(),
        }
    }
}

impl ThresholdSchedule {
    pub fn new(levels: Vec<ThresholdLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSchedule("no levels".into()));
        }
        for l in &levels {
            for x in [l.concordance, l.discordance] {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::InvalidThreshold(x));
                }
            }
        }
        for pair in levels.windows(2) {
            if pair[1].concordance > pair[0].concordance || pair[1].discordance < pair[0].discordance {
                return Err(Error::InvalidSchedule(format!(
                    "({}, {}) follows ({}, {}) but is not a relaxation",
                    pair[1].concordance, pair[1].discordance, pair[0].concordance, pair[0].discordance
                )));
            }
        }
        Ok(ThresholdSchedule { levels })
    }

    pub fn single(concordance: f64, discordance: f64) -> Result<Self> {
        Self::new(vec![ThresholdLevel::new(concordance, discordance)])
    }

    pub fn levels(&self) -> &[ThresholdLevel] {
        &self.levels
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutrankingRelation {
    pub alternatives: Vec<String>,
    pub level: ThresholdLevel,
    pub edges: Vec<Edge>,
    pub incomparable: Vec<(String, String)>,
    #[serde(skip)]
    adjacency: Vec<Vec<bool>>,
}

impl OutrankingRelation {
    pub fn outranks(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }
}

pub fn outranking_at(
    concordance: &ConcordanceMatrix,
    discordance: &DiscordanceMatrix,
    concordance_level: f64,
    discordance_level: f64,
) -> Result<OutrankingRelation> {
    for x in [concordance_level, discordance_level] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidThreshold(x));
        }
    }
    let c = &concordance.0;
    let d = &discordance.matrix;
    if c.alternatives != d.alternatives {
        return Err(Error::InvalidMatrix(
            "concordance and discordance cover different alternatives".into(),
        ));
    }
    let n = c.len();
    let adjacency: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    a != b
                        && c.get(a, b) >= concordance_level - THRESHOLD_TOLERANCE
                        && d.get(a, b) <= discordance_level + THRESHOLD_TOLERANCE
                })
                .collect()
        })
        .collect();
    let names = &c.alternatives;
    let mut edges = Vec::new();
    let mut incomparable = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if adjacency[a][b] {
                edges.push(Edge {
                    from: names[a].clone(),
                    to: names[b].clone(),
                });
            }
            if a < b && !adjacency[a][b] && !adjacency[b][a] {
                incomparable.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    Ok(OutrankingRelation {
        alternatives: names.clone(),
        level: ThresholdLevel::new(concordance_level, discordance_level),
        edges,
        incomparable,
        adjacency,
    })
}

/// Why an alternative left the survivor set: `outranked_by` (a survivor)
/// outranks `via`, which is the alternative itself or a member of its
/// equivalence group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub alternative: String,
    pub outranked_by: String,
    pub via: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelStep {
    pub level: ThresholdLevel,
    pub candidates: Vec<String>,
    pub edges: Vec<Edge>,
    /// Equivalence groups (outranking cycles) with more than one member.
    pub tied_groups: Vec<Vec<String>>,
    pub survivors: Vec<String>,
    pub removed: Vec<Removal>,
}

/// `(alternative, survivor, via)` for one removed alternative.
pub type Witness = (usize, usize, usize);

/// Kernel of `relation` restricted to `candidates` (alternative indices).
///
/// Returns survivor indices in ascending order, the equivalence groups found
/// and, for each removed alternative, a witness `(survivor, via)`.
pub fn kernel(relation: &OutrankingRelation, candidates: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>, Vec<Witness>) {
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = candidates.iter().map(|&a| graph.add_node(a)).collect();
    for (i, &a) in candidates.iter().enumerate() {
        for (j, &b) in candidates.iter().enumerate() {
            if relation.outranks(a, b) {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }

    // tarjan_scc yields components in reverse topological order
    let mut groups: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut members: Vec<usize> = comp.into_iter().map(|n| graph[n]).collect();
            members.sort_unstable();
            members
        })
        .collect();
    groups.reverse();

    let mut survivors: Vec<usize> = Vec::new();
    for group in &groups {
        let beaten = survivors
            .iter()
            .any(|&s| group.iter().any(|&g| relation.outranks(s, g)));
        if !beaten {
            survivors.extend(group.iter().copied());
        }
    }
    survivors.sort_unstable();

    let mut removed = Vec::new();
    for group in &groups {
        if survivors.contains(&group[0]) {
            continue;
        }
        for &member in group {
            let witness = std::iter::once(member)
                .chain(group.iter().copied())
                .find_map(|via| {
                    survivors
                        .iter()
                        .find(|&&s| relation.outranks(s, via))
                        .map(|&s| (s, via))
                })
                .expect("a removed group is outranked by a survivor");
            removed.push((member, witness.0, witness.1));
        }
    }
    removed.sort_unstable();

    let mut tied: Vec<Vec<usize>> = groups.into_iter().filter(|g| g.len() > 1).collect();
    tied.sort();
    (survivors, tied, removed)
}

/// Applies the schedule, shrinking the survivor set step by step. Stops
/// early once a single alternative survives.
pub fn select_kernels(
    concordance: &ConcordanceMatrix,
    discordance: &DiscordanceMatrix,
    schedule: &ThresholdSchedule,
) -> Result<Vec<KernelStep>> {
    let names = concordance.0.alternatives().to_vec();
    let mut candidates: Vec<usize> = (0..names.len()).collect();
    let mut steps = Vec::new();
    for level in schedule.levels() {
        let relation = outranking_at(concordance, discordance, level.concordance, level.discordance)?;
        let (survivors, tied, removed) = kernel(&relation, &candidates);
        let name = |i: usize| names[i].clone();
        steps.push(KernelStep {
            level: *level,
            candidates: candidates.iter().map(|&i| name(i)).collect(),
            edges: candidates
                .iter()
                .flat_map(|&a| candidates.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| relation.outranks(a, b))
                .map(|(a, b)| Edge {
                    from: name(a),
                    to: name(b),
                })
                .collect(),
            tied_groups: tied.iter().map(|g| g.iter().map(|&i| name(i)).collect()).collect(),
            survivors: survivors.iter().map(|&i| name(i)).collect(),
            removed: removed
                .iter()
                .map(|&(alt, by, via)| Removal {
                    alternative: name(alt),
                    outranked_by: name(by),
                    via: name(via),
                })
                .collect(),
        });
        candidates = survivors;
        if candidates.len() == 1 {
            break;
        }
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectreOutcome {
    pub concordance: ConcordanceMatrix,
    pub discordance: DiscordanceMatrix,
    pub steps: Vec<KernelStep>,
}

impl ElectreOutcome {
    pub fn final_kernel(&self) -> &[String] {
        self.steps.last().map(|s| s.survivors.as_slice()).unwrap_or_default()
    }
}

pub fn electre_select(
    scores: &ScoreMatrix,
    weights: &WeightVector,
    schedule: &ThresholdSchedule,
) -> Result<ElectreOutcome> {
    let concordance = concordance_matrix(scores, weights)?;
    let discordance = discordance_matrix(scores)?;
    let steps = select_kernels(&concordance, &discordance, schedule)?;
    Ok(ElectreOutcome {
        concordance,
        discordance,
        steps,
    })
}
