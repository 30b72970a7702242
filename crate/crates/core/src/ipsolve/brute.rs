use super::{IPInstance, IPSolution, IntSystem, SolveStatus};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ratmat::Rat;

/// Optimum by enumerating the box in lexicographic order; the first optimal
/// point wins ties.
pub fn solve_bruteforce(inst: &IPInstance, limits: &Limits) -> Result<IPSolution> {
    inst.validate()?;
    let n = inst.n();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        match (inst.lower[i], inst.upper[i]) {
            (Some(l), Some(u)) => {
                lo.push(l);
                hi.push(u);
            }
            _ => {
                return Err(Error::InvalidInstance(
                    "enumeration needs finite bounds on every variable".into(),
                ))
            }
        }
    }
    let volume = lo
        .iter()
        .zip(&hi)
        .try_fold(1u128, |acc, (&l, &u)| acc.checked_mul((u - l) as u128 + 1))
        .unwrap_or(u128::MAX);
    if volume > limits.box_cap as u128 {
        return Err(Error::SizeLimit {
            what: "box volume",
            actual: volume.min(usize::MAX as u128) as usize,
            limit: limits.box_cap as usize,
        });
    }
    let system = IntSystem::from_rational(&inst.a, &inst.b)?;

    let mut best: Option<(Rat, Vec<i64>)> = None;
    let mut x = lo.clone();
    loop {
        if system.satisfied_by(&x) {
            let v = inst.objective_value(&x);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, x.clone()));
            }
        }
        // Odometer step, last coordinate fastest.
        let Some(i) = (0..n).rev().find(|&i| x[i] < hi[i]) else {
            break;
        };
        x[i] += 1;
        x[i + 1..].copy_from_slice(&lo[i + 1..]);
    }

    Ok(match best {
        Some((value, x)) => IPSolution {
            status: SolveStatus::Optimal,
            x: Some(x),
            value: Some(value),
            ..IPSolution::without_point(SolveStatus::Optimal)
        },
        None => IPSolution::without_point(SolveStatus::Infeasible),
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::toy;
    use super::super::ObjectiveTerm;
    use super::*;
    use crate::ratmat::{rat, RatMatrix};

    #[test]
    fn toy_value_five() {
        let s = solve_bruteforce(&toy(), &Limits::default()).unwrap();
        assert_eq!(s.value, Some(rat(5)));
        assert_eq!(s.x, Some(vec![1, 2]));
    }

    #[test]
    fn empty_and_single_point() {
        let mut inst = toy();
        inst.b = vec![rat(7)];
        assert_eq!(
            solve_bruteforce(&inst, &Limits::default()).unwrap().status,
            SolveStatus::Infeasible
        );
        inst.b = vec![rat(6)];
        assert_eq!(solve_bruteforce(&inst, &Limits::default()).unwrap().x, Some(vec![3, 3]));
    }

    #[test]
    fn limits() {
        let mut inst = toy();
        inst.upper[0] = None;
        assert!(matches!(
            solve_bruteforce(&inst, &Limits::default()),
            Err(Error::InvalidInstance(_))
        ));
        let big = IPInstance {
            a: RatMatrix::zeros(0, 8),
            b: vec![],
            lower: vec![Some(0); 8],
            upper: vec![Some(9); 8],
            objective: vec![ObjectiveTerm::Linear { c: rat(1) }; 8],
        };
        assert!(matches!(
            solve_bruteforce(&big, &Limits::default()),
            Err(Error::SizeLimit { .. })
        ));
    }
}
