use num_integer::Integer;

use super::{lex_less, IPInstance, IPSolution, IntSystem, SolveStatus};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ratmat::Rat;

/// Step lengths beyond this along an improving ray count as unbounded.
const UNBOUNDED_STEP: i64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StartSearch {
    Found(Vec<i64>),
    /// The box is finite and holds no solution of `Ax = b`.
    Infeasible,
    /// Nothing found inside the window placed on unbounded variables.
    NotFound,
}

/// Lexicographically first solution of `Ax = b` in the box, by depth-first
/// search with interval propagation on every row. Unbounded variables are
/// confined to a window of half-width `limits.start_radius`.
pub fn find_feasible_start(inst: &IPInstance, limits: &Limits) -> Result<StartSearch> {
    inst.validate()?;
    let n = inst.n();
    let r = limits.start_radius;
    let mut windowed = false;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let (l, u) = match (inst.lower[i], inst.upper[i]) {
            (Some(l), Some(u)) => (l, u),
            (Some(l), None) => (l, l.max(0) + r),
            (None, Some(u)) => (u.min(0) - r, u),
            (None, None) => (-r, r),
        };
        windowed |= inst.lower[i].is_none() || inst.upper[i].is_none();
        lo.push(l);
        hi.push(u);
    }
    let system = IntSystem::from_rational(&inst.a, &inst.b)?;

    // Suffix bounds of each row's remaining contribution.
    let m = system.rows.len();
    let mut suf_min = vec![vec![0i128; n + 1]; m];
    let mut suf_max = vec![vec![0i128; n + 1]; m];
    for (i, row) in system.rows.iter().enumerate() {
        for j in (0..n).rev() {
            let a = row[j] as i128;
            let (p, q) = (a * lo[j] as i128, a * hi[j] as i128);
            suf_min[i][j] = suf_min[i][j + 1] + p.min(q);
            suf_max[i][j] = suf_max[i][j + 1] + p.max(q);
        }
    }

    let mut x = vec![0i64; n];
    let mut partial = vec![0i128; m];
    let found = dfs(0, &system, &lo, &hi, &suf_min, &suf_max, &mut x, &mut partial);
    Ok(if found {
        StartSearch::Found(x)
    } else if windowed {
        StartSearch::NotFound
    } else {
        StartSearch::Infeasible
    })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    j: usize,
    system: &IntSystem,
    lo: &[i64],
    hi: &[i64],
    suf_min: &[Vec<i128>],
    suf_max: &[Vec<i128>],
    x: &mut [i64],
    partial: &mut [i128],
) -> bool {
    let reachable = (0..partial.len()).all(|i| {
        let b = system.rhs[i] as i128;
        partial[i] + suf_min[i][j] <= b && b <= partial[i] + suf_max[i][j]
    });
    if !reachable {
        return false;
    }
    if j == x.len() {
        return true;
    }
    for v in lo[j]..=hi[j] {
        x[j] = v;
        for (i, row) in system.rows.iter().enumerate() {
            partial[i] += row[j] as i128 * v as i128;
        }
        if dfs(j + 1, system, lo, hi, suf_min, suf_max, x, partial) {
            return true;
        }
        for (i, row) in system.rows.iter().enumerate() {
            partial[i] -= row[j] as i128 * v as i128;
        }
    }
    false
}

/// Primitive integer kernel vectors `g` of the system with `|g_j| ≤ caps[j]`,
/// in lexicographic order.
pub(crate) fn kernel_directions(system: &IntSystem, caps: &[i64]) -> Vec<Vec<i64>> {
    let n = caps.len();
    let m = system.rows.len();
    let mut rest = vec![vec![0i128; n + 1]; m];
    for (i, row) in system.rows.iter().enumerate() {
        for j in (0..n).rev() {
            rest[i][j] = rest[i][j + 1] + (row[j] as i128).abs() * caps[j] as i128;
        }
    }
    let mut out = Vec::new();
    let mut g = vec![0i64; n];
    let mut partial = vec![0i128; m];
    collect_directions(0, system, caps, &rest, &mut g, &mut partial, &mut out);
    out
}

fn collect_directions(
    j: usize,
    system: &IntSystem,
    caps: &[i64],
    rest: &[Vec<i128>],
    g: &mut [i64],
    partial: &mut [i128],
    out: &mut Vec<Vec<i64>>,
) {
    if (0..partial.len()).any(|i| partial[i].abs() > rest[i][j]) {
        return;
    }
    if j == g.len() {
        let gcd = g.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if gcd == 1 {
            out.push(g.to_vec());
        }
        return;
    }
    for v in -caps[j]..=caps[j] {
        g[j] = v;
        for (i, row) in system.rows.iter().enumerate() {
            partial[i] += row[j] as i128 * v as i128;
        }
        collect_directions(j + 1, system, caps, rest, g, partial, out);
        for (i, row) in system.rows.iter().enumerate() {
            partial[i] -= row[j] as i128 * v as i128;
        }
    }
    g[j] = 0;
}

enum Step {
    Improve { lambda: i64, gain: Rat },
    Unbounded,
    None,
}

struct Line<'a> {
    inst: &'a IPInstance,
    x: &'a [i64],
    g: &'a [i64],
}

impl Line<'_> {
    /// `f(x + λg) − f(x)`.
    fn delta(&self, lambda: i64) -> Rat {
        let mut d = Rat::from_integer(0.into());
        for (j, &gj) in self.g.iter().enumerate() {
            if gj != 0 {
                let t = &self.inst.objective[j];
                d += t.value(self.x[j] + lambda * gj) - t.value(self.x[j]);
            }
        }
        d
    }

    /// Largest step keeping `x + λg` in the box; `None` if unlimited.
    fn max_step(&self) -> Option<i64> {
        let mut best: Option<i64> = None;
        for (j, &gj) in self.g.iter().enumerate() {
            let room = if gj > 0 {
                self.inst.upper[j].map(|u| (u - self.x[j]) / gj)
            } else if gj < 0 {
                self.inst.lower[j].map(|l| (self.x[j] - l) / -gj)
            } else {
                None
            };
            if let Some(r) = room {
                best = Some(best.map_or(r, |b| b.min(r)));
            }
        }
        best
    }

    /// Best step length along a convex line, found by galloping and
    /// bisection on the forward difference.
    fn best_step(&self) -> Step {
        let cap = self.max_step();
        if cap.is_some_and(|c| c < 1) {
            return Step::None;
        }
        let d1 = self.delta(1);
        if d1 >= Rat::from_integer(0.into()) {
            return Step::None;
        }
        let rising = |l: i64| self.delta(l + 1) >= self.delta(l);
        let (mut lo, mut hi) = (1i64, match cap {
            Some(c) => c,
            None => {
                let mut h = 1i64;
                while !rising(h) {
                    h *= 2;
                    if h > UNBOUNDED_STEP {
                        return Step::Unbounded;
                    }
                }
                h
            }
        });
        // Smallest λ in [lo, hi] with a non-negative forward difference, or hi.
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if rising(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Step::Improve {
            lambda: lo,
            gain: -self.delta(lo),
        }
    }
}

/// Improves a feasible `start` along primitive kernel directions, growing
/// the ∞-norm bound from `limits.aug_initial_norm`. On a finite box the bound
/// grows to the box width, which certifies optimality; the lexicographically
/// smallest optimum is then returned. Unbounded variables cap the bound at
/// `limits.aug_max_norm` and yield [`SolveStatus::Limit`].
pub fn solve_augmentation(inst: &IPInstance, start: &[i64], limits: &Limits) -> Result<IPSolution> {
    inst.validate()?;
    if !inst.is_feasible(start) {
        return Err(Error::NoFeasibleStart);
    }
    let system = IntSystem::from_rational(&inst.a, &inst.b)?;
    let n = inst.n();
    let widths: Vec<Option<i64>> = (0..n)
        .map(|j| match (inst.lower[j], inst.upper[j]) {
            (Some(l), Some(u)) => Some(u - l),
            _ => None,
        })
        .collect();
    let finite = widths.iter().all(Option::is_some);
    let target = if finite {
        widths.iter().flatten().copied().max().unwrap_or(0)
    } else {
        limits.aug_max_norm
    };

    let mut x = start.to_vec();
    let mut steps = 0usize;
    let mut norm = limits.aug_initial_norm.min(target);
    let pool = loop {
        let caps: Vec<i64> = widths.iter().map(|w| w.map_or(norm, |w| w.min(norm))).collect();
        let pool = kernel_directions(&system, &caps);
        loop {
            let mut best: Option<(usize, i64, Rat)> = None;
            for (k, g) in pool.iter().enumerate() {
                match (Line { inst, x: &x, g }).best_step() {
                    Step::Unbounded => {
                        return Ok(IPSolution {
                            steps,
                            ..IPSolution::without_point(SolveStatus::Unbounded)
                        })
                    }
                    Step::Improve { lambda, gain } => {
                        if best.as_ref().is_none_or(|(_, _, b)| gain > *b) {
                            best = Some((k, lambda, gain));
                        }
                    }
                    Step::None => {}
                }
            }
            let Some((k, lambda, _)) = best else { break };
            for (xj, gj) in x.iter_mut().zip(&pool[k]) {
                *xj += lambda * gj;
            }
            steps += 1;
            if steps >= limits.aug_step_budget {
                return Ok(finish(inst, x, steps, SolveStatus::Limit));
            }
        }
        if norm >= target {
            break pool;
        }
        norm += 1;
    };

    if !finite {
        return Ok(finish(inst, x, steps, SolveStatus::Limit));
    }
    // Walk to the lexicographically smallest optimum through equal-value
    // neighbours.
    let value = inst.objective_value(&x);
    loop {
        let next = pool
            .iter()
            .map(|g| x.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<i64>>())
            .filter(|y| lex_less(y, &x) && inst.within_bounds(y) && inst.objective_value(y) == value)
            .min();
        match next {
            Some(y) => x = y,
            None => break,
        }
    }
    Ok(finish(inst, x, steps, SolveStatus::Optimal))
}

fn finish(inst: &IPInstance, x: Vec<i64>, steps: usize, status: SolveStatus) -> IPSolution {
    IPSolution {
        status,
        value: Some(inst.objective_value(&x)),
        x: Some(x),
        steps,
        ..IPSolution::without_point(status)
    }
}
