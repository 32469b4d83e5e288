#![allow(clippy::needless_range_loop)]
// Independent reference implementation for outranking selection. Works on
// raw integer levels and plain vectors; shares nothing with the library
// beyond the conversion helpers at the bottom.
#![allow(dead_code)]

use chunksel_core::decision::{Direction, ScoreMatrix, ScoredCriterion};
use chunksel_core::prioritization::{ThresholdLevel, ThresholdSchedule};
use chunksel_core::weighting::WeightVector;
use rand::Rng;

pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Instance {
    pub names: Vec<String>,
    pub levels: Vec<u32>,
    /// `cells[a][i]` in `1..=levels[i]` or MISSING.
    pub cells: Vec<Vec<Option<u32>>>,
    pub weights: Vec<f64>,
    pub schedule: Vec<(f64, f64)>,
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m);
    let levels: Vec<u32> = (0..m).map(|_| rng.random_range(2..=5)).collect();
    let cells = (0..n)
        .map(|_| {
            levels
                .iter()
                .map(|&l| (!rng.random_bool(0.08)).then(|| rng.random_range(1..=l)))
                .collect()
        })
        .collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(1..=10) as f64).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let steps = rng.random_range(1..=5);
    let mut c = rng.random_range(10..=20) as f64 * 0.05;
    let mut d = rng.random_range(0..=10) as f64 * 0.05;
    let mut schedule = Vec::new();
    for _ in 0..steps {
        schedule.push((c, d));
        c = (c - rng.random_range(0..=3) as f64 * 0.05).max(0.0);
        d = (d + rng.random_range(0..=3) as f64 * 0.05).min(1.0);
    }
    Instance {
        names: (0..n).map(|i| format!("a{i}")).collect(),
        levels,
        cells,
        weights,
        schedule,
    }
}

pub fn naive_concordance(inst: &Instance) -> Vec<Vec<f64>> {
    let n = inst.names.len();
    let mut c = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for i in 0..inst.levels.len() {
                if let (Some(x), Some(y)) = (inst.cells[a][i], inst.cells[b][i]) {
                    if x >= y {
                        c[a][b] += inst.weights[i];
                    }
                }
            }
        }
    }
    c
}

pub fn naive_discordance(inst: &Instance) -> Vec<Vec<f64>> {
    let n = inst.names.len();
    let mut d = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for i in 0..inst.levels.len() {
                if let (Some(x), Some(y)) = (inst.cells[a][i], inst.cells[b][i]) {
                    if y > x {
                        let gap = (y - x) as f64 / (inst.levels[i] - 1) as f64;
                        d[a][b] = f64::max(d[a][b], gap);
                    }
                }
            }
        }
    }
    d
}

pub fn naive_relation(c: &[Vec<f64>], d: &[Vec<f64>], level: (f64, f64)) -> Vec<Vec<bool>> {
    let n = c.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| a != b && c[a][b] >= level.0 - EPS && d[a][b] <= level.1 + EPS)
                .collect()
        })
        .collect()
}

/// Kernel of `adj` restricted to `candidates`, by exhaustive search over
/// unions of equivalence classes of mutual reachability.
pub fn brute_kernel(adj: &[Vec<bool>], candidates: &[usize]) -> Vec<usize> {
    let k = candidates.len();
    let mut reach = vec![vec![false; k]; k];
    for i in 0..k {
        reach[i][i] = true;
        for j in 0..k {
            if adj[candidates[i]][candidates[j]] {
                reach[i][j] = true;
            }
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if reach[i][m] && reach[m][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut class = vec![usize::MAX; k];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        if class[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..k).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &members {
            class[j] = classes.len();
        }
        classes.push(members);
    }
    let g = classes.len();
    let beats = |x: usize, y: usize| {
        classes[x]
            .iter()
            .any(|&i| classes[y].iter().any(|&j| adj[candidates[i]][candidates[j]]))
    };

    let mut stable = Vec::new();
    for mask in 0u32..(1 << g) {
        let inside: Vec<usize> = (0..g).filter(|x| mask & (1 << x) != 0).collect();
        let internal = inside.iter().all(|&x| inside.iter().all(|&y| x == y || !beats(x, y)));
        let external = (0..g)
            .filter(|x| mask & (1 << x) == 0)
            .all(|y| inside.iter().any(|&x| beats(x, y)));
        if internal && external {
            stable.push(mask);
        }
    }
    assert_eq!(stable.len(), 1, "an acyclic relation has exactly one kernel");
    let mut out: Vec<usize> = (0..g)
        .filter(|x| stable[0] & (1 << x) != 0)
        .flat_map(|x| classes[x].iter().map(|&i| candidates[i]))
        .collect();
    out.sort_unstable();
    out
}

/// Survivor set after each schedule step, stopping at a singleton.
pub fn brute_sequence(inst: &Instance) -> Vec<Vec<usize>> {
    let c = naive_concordance(inst);
    let d = naive_discordance(inst);
    let mut candidates: Vec<usize> = (0..inst.names.len()).collect();
    let mut out = Vec::new();
    for &level in &inst.schedule {
        let adj = naive_relation(&c, &d, level);
        candidates = brute_kernel(&adj, &candidates);
        out.push(candidates.clone());
        if candidates.len() == 1 {
            break;
        }
    }
    out
}

pub fn scores(inst: &Instance) -> ScoreMatrix {
    ScoreMatrix::new(
        inst.names.clone(),
        inst.levels
            .iter()
            .enumerate()
            .map(|(i, &l)| ScoredCriterion::ordinal(format!("c{i}"), Direction::Maximize, l as usize))
            .collect(),
        inst.cells
            .iter()
            .map(|row| row.iter().map(|x| x.map(f64::from)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn weights(inst: &Instance) -> WeightVector {
    WeightVector::normalize(inst.weights.iter().enumerate().map(|(i, w)| (format!("c{i}"), *w))).unwrap()
}

pub fn schedule(inst: &Instance) -> ThresholdSchedule {
    ThresholdSchedule::new(inst.schedule.iter().map(|&(c, d)| ThresholdLevel::new(c, d)).collect()).unwrap()
}
