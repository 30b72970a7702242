//! Standard-form integer programs `min Σ f_i(x_i)` subject to `Ax = b`,
//! `l ≤ x ≤ u`, with separable convex `f_i`.
//!
//! [`solve`] drops dependent rows, optionally replaces the system by its
//! low dual tree-depth form `(BA, Bb)`, scales it to integers and runs an
//! augmentation solver. [`solve_bruteforce`] enumerates the box and serves as
//! the oracle.

mod augment;
mod brute;

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};

pub use augment::{find_feasible_start, solve_augmentation, StartSearch};
pub use brute::solve_bruteforce;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ratmat::{Rat, RatMatrix};
use crate::rowtransform::{integerize, transform_pipeline, PipelineOutcome, Provenance, Strategy};

/// One convex term `f_i` of a separable objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectiveTerm {
    /// `c·x`
    Linear { c: Rat },
    /// `a·x² + c·x` with `a ≥ 0`
    Quadratic { a: Rat, c: Rat },
    /// Linear interpolation through `(x, y)` breakpoints with strictly
    /// increasing integer `x`, extended by the end slopes.
    Pwl { points: Vec<(i64, Rat)> },
}

impl ObjectiveTerm {
    pub fn value(&self, x: i64) -> Rat {
        let xr = Rat::from_integer(x.into());
        match self {
            ObjectiveTerm::Linear { c } => c * &xr,
            ObjectiveTerm::Quadratic { a, c } => a * &xr * &xr + c * &xr,
            ObjectiveTerm::Pwl { points } => {
                if points.len() == 1 {
                    return points[0].1.clone();
                }
                let k = match points.iter().position(|&(px, _)| px >= x) {
                    Some(0) => 1,
                    Some(k) => k,
                    None => points.len() - 1,
                };
                let (x0, y0) = &points[k - 1];
                let (x1, y1) = &points[k];
                let slope = (y1 - y0) / Rat::from_integer((x1 - x0).into());
                y0 + slope * Rat::from_integer((x - x0).into())
            }
        }
    }

    fn check(&self, index: usize) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::NonConvex {
                index,
                reason: reason.to_string(),
            })
        };
        match self {
            ObjectiveTerm::Linear { .. } => Ok(()),
            ObjectiveTerm::Quadratic { a, .. } if a.is_negative() => bad("negative quadratic coefficient"),
            ObjectiveTerm::Quadratic { .. } => Ok(()),
            ObjectiveTerm::Pwl { points } => {
                if points.is_empty() {
                    return bad("no breakpoints");
                }
                if points.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("breakpoints not strictly increasing");
                }
                let slopes: Vec<Rat> = points
                    .windows(2)
                    .map(|w| (&w[1].1 - &w[0].1) / Rat::from_integer((w[1].0 - w[0].0).into()))
                    .collect();
                if slopes.windows(2).any(|s| s[0] > s[1]) {
                    return bad("slopes decrease");
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPInstance {
    pub a: RatMatrix,
    pub b: Vec<Rat>,
    /// `None` is −∞.
    pub lower: Vec<Option<i64>>,
    /// `None` is +∞.
    pub upper: Vec<Option<i64>>,
    pub objective: Vec<ObjectiveTerm>,
}

impl IPInstance {
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Dimensions, bound order and convexity of every term.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.b.len() != self.a.rows() {
            return Err(Error::InvalidInstance(format!(
                "b has {} entries for {} rows",
                self.b.len(),
                self.a.rows()
            )));
        }
        for (what, len) in [
            ("l", self.lower.len()),
            ("u", self.upper.len()),
            ("objective", self.objective.len()),
        ] {
            if len != n {
                return Err(Error::InvalidInstance(format!("{what} has {len} entries for {n} variables")));
            }
        }
        for (i, (l, u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if let (Some(l), Some(u)) = (l, u) {
                if l > u {
                    return Err(Error::InvalidInstance(format!("l > u for variable {i}")));
                }
            }
        }
        for (i, t) in self.objective.iter().enumerate() {
            t.check(i)?;
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[i64]) -> Rat {
        self.objective
            .iter()
            .zip(x)
            .fold(Rat::zero(), |acc, (t, &xi)| acc + t.value(xi))
    }

    pub fn within_bounds(&self, x: &[i64]) -> bool {
        x.len() == self.n()
            && x.iter().enumerate().all(|(i, &xi)| {
                self.lower[i].is_none_or(|l| l <= xi) && self.upper[i].is_none_or(|u| xi <= u)
            })
    }

    /// `Ax = b` and `l ≤ x ≤ u`, checked exactly.
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        if !self.within_bounds(x) {
            return false;
        }
        let xr: Vec<Rat> = x.iter().map(|&v| Rat::from_integer(v.into())).collect();
        self.a.mul_vec(&xr).is_ok_and(|ax| ax == self.b)
    }

    fn with_system(&self, a: RatMatrix, b: Vec<Rat>) -> IPInstance {
        IPInstance {
            a,
            b,
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            objective: self.objective.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// A budget was exhausted or optimality could not be certified; `x`
    /// holds the best feasible point found.
    Limit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Limit => "limit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Transform with a minimum-depth decomposition.
    Exact,
    /// Transform from a dual tree-depth witness.
    Heuristic,
    /// Solve the preprocessed system as given.
    None,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Exact => "exact",
            SolveMode::Heuristic => "heuristic",
            SolveMode::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformInfo {
    pub b: RatMatrix,
    pub depth: usize,
    pub provenance: Provenance,
    pub branch_depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPSolution {
    pub status: SolveStatus,
    pub x: Option<Vec<i64>>,
    pub value: Option<Rat>,
    pub transform: Option<TransformInfo>,
    /// Constraint rows dropped as linearly dependent.
    pub removed_rows: Vec<usize>,
    /// Improving steps taken by the augmentation solver.
    pub steps: usize,
}

impl IPSolution {
    pub(crate) fn without_point(status: SolveStatus) -> Self {
        IPSolution {
            status,
            x: None,
            value: None,
            transform: None,
            removed_rows: Vec::new(),
            steps: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preprocessed {
    Reduced {
        instance: IPInstance,
        removed_rows: Vec<usize>,
    },
    Infeasible,
}

/// Keeps a maximal independent set of rows (greedy in order), or reports
/// infeasibility when `b` is outside the column space of `A`.
pub fn preprocess(inst: &IPInstance) -> Result<Preprocessed> {
    let a = &inst.a;
    if a.augment(&inst.b)?.rank() > a.rank() {
        return Ok(Preprocessed::Infeasible);
    }
    let kept = a.independent_rows();
    let removed_rows = (0..a.rows()).filter(|i| !kept.contains(i)).collect();
    let b = kept.iter().map(|&i| inst.b[i].clone()).collect();
    Ok(Preprocessed::Reduced {
        instance: inst.with_system(a.select_rows(&kept), b),
        removed_rows,
    })
}

/// Integer form of a system: rows scaled to integers, entries in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntSystem {
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
}

impl IntSystem {
    pub fn from_rational(a: &RatMatrix, b: &[Rat]) -> Result<Self> {
        let (ai, bi) = integerize(a, b)?;
        let to_i64 = |r: &Rat| {
            r.to_integer()
                .to_i64()
                .filter(|v| v.unsigned_abs() < 1 << 62)
                .ok_or_else(|| Error::InvalidInstance("scaled constraint data exceeds 62 bits".into()))
        };
        let rows = (0..ai.rows())
            .map(|i| ai.row(i).iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let rhs = bi.iter().map(to_i64).collect::<Result<_>>()?;
        Ok(IntSystem { rows, rhs })
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            row.iter().zip(x).map(|(&a, &v)| a as i128 * v as i128).sum::<i128>() == b as i128
        })
    }
}

/// Lexicographic comparison used for tie-breaking.
pub(crate) fn lex_less(a: &[i64], b: &[i64]) -> bool {
    a.cmp(b) == Ordering::Less
}

/// Solves `inst`, transforming the constraint system first unless `mode` is
/// [`SolveMode::None`]. With a transform, branch-depth above `depth` is
/// reported as [`Error::BranchDepthExceeded`]. The returned point is checked
/// against the original instance.
pub fn solve(inst: &IPInstance, depth: usize, mode: SolveMode, limits: &Limits) -> Result<IPSolution> {
    inst.validate()?;
    let (reduced, removed_rows) = match preprocess(inst)? {
        Preprocessed::Infeasible => return Ok(IPSolution::without_point(SolveStatus::Infeasible)),
        Preprocessed::Reduced { instance, removed_rows } => (instance, removed_rows),
    };

    let (system, transform) = match mode {
        SolveMode::None => (reduced, None),
        SolveMode::Exact | SolveMode::Heuristic => {
            let strategy = if mode == SolveMode::Exact {
                Strategy::Exact
            } else {
                Strategy::Heuristic
            };
            let result = match transform_pipeline(&reduced.a, depth, strategy, limits)? {
                PipelineOutcome::BranchDepthExceeded { branch_depth, .. } => {
                    return Err(Error::BranchDepthExceeded(branch_depth))
                }
                PipelineOutcome::Transformed(r) => r,
            };
            if !result.removed_rows.is_empty() {
                return Err(Error::Internal("preprocessed rows became dependent".into()));
            }
            let b_prime = result.b.mul_vec(&reduced.b)?;
            let info = TransformInfo {
                b: result.b.clone(),
                depth: result.reported_depth,
                provenance: result.provenance,
                branch_depth: result.branch_depth,
            };
            (reduced.with_system(result.a_prime.clone(), b_prime), Some(info))
        }
    };

    let mut solution = match find_feasible_start(&system, limits)? {
        StartSearch::Found(start) => solve_augmentation(&system, &start, limits)?,
        StartSearch::Infeasible => IPSolution::without_point(SolveStatus::Infeasible),
        StartSearch::NotFound => return Err(Error::NoFeasibleStart),
    };
    if let Some(x) = &solution.x {
        if !inst.is_feasible(x) {
            return Err(Error::Internal("solution infeasible for the original instance".into()));
        }
    }
    solution.transform = transform;
    solution.removed_rows = removed_rows;
    Ok(solution)
}
