//! Pareto dominance, non-dominated sorting and crowding distance for two
//! minimized objectives.

use crate::encodings::Genotype;

/// `a` is no worse than `b` in every objective and differs somewhere.
pub fn dominates(a: [u32; 2], b: [u32; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a != b
}

/// Fast non-dominated sort. Returns fronts of indices into `points`, best
/// front first; indices inside a front are ascending.
pub fn nondominated_sort(points: &[[u32; 2]]) -> Vec<Vec<usize>> {
    let len = points.len();
    let mut dominated_by = vec![0usize; len];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); len];
    for p in 0..len {
        for q in p + 1..len {
            if dominates(points[p], points[q]) {
                dominates_list[p].push(q);
                dominated_by[q] += 1;
            } else if dominates(points[q], points[p]) {
                dominates_list[q].push(p);
                dominated_by[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..len).filter(|&p| dominated_by[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominates_list[p] {
                dominated_by[q] -= 1;
                if dominated_by[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each point within one front. Extremes of every
/// objective are infinite; interior points sum the normalized gap between
/// their neighbours.
pub fn crowding_distance(front: &[[u32; 2]]) -> Vec<f64> {
    let len = front.len();
    let mut dist = vec![0.0; len];
    if len <= 2 {
        return vec![f64::INFINITY; len];
    }
    for m in [0, 1] {
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&i| front[i][m]);
        let lo = front[order[0]][m];
        let hi = front[order[len - 1]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[len - 1]] = f64::INFINITY;
        if hi == lo {
            continue;
        }
        let range = f64::from(hi - lo);
        for k in 1..len - 1 {
            let gap = f64::from(front[order[k + 1]][m] - front[order[k - 1]][m]);
            dist[order[k]] += gap / range;
        }
    }
    dist
}

/// A balanced or penalized point of a final front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontPoint {
    pub beta: u32,
    pub delta: u32,
    pub genotype: Genotype,
}

impl FrontPoint {
    pub fn objectives(&self) -> [u32; 2] {
        [self.beta, self.delta]
    }
}

/// First non-dominated front, one representative genotype per objective
/// vector, sorted by `(β, δ)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    pub fn from_candidates(candidates: impl IntoIterator<Item = FrontPoint>) -> Self {
        let mut all: Vec<FrontPoint> = candidates.into_iter().collect();
        let objectives: Vec<[u32; 2]> = all.iter().map(FrontPoint::objectives).collect();
        let first = nondominated_sort(&objectives).into_iter().next().unwrap_or_default();
        let mut keep = vec![false; all.len()];
        first.into_iter().for_each(|i| keep[i] = true);
        let mut idx = 0;
        all.retain(|_| {
            idx += 1;
            keep[idx - 1]
        });
        all.sort_by_key(FrontPoint::objectives);
        all.dedup_by_key(|p| p.objectives());
        Self { points: all }
    }

    pub fn objectives(&self) -> Vec<[u32; 2]> {
        self.points.iter().map(FrontPoint::objectives).collect()
    }

    pub fn contains(&self, point: [u32; 2]) -> bool {
        self.points.iter().any(|p| p.objectives() == point)
    }

    /// No member dominates another.
    pub fn is_mutually_nondominated(&self) -> bool {
        let o = self.objectives();
        o.iter().all(|&a| o.iter().all(|&b| !dominates(a, b)))
    }
}
