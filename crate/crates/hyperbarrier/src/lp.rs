//! Exact linear programming over the rationals: dense two-phase simplex with
//! Bland's rule, so every run terminates and every answer is exact.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    /// Farkas vector a with a . col >= 0 for every column of A and a . b < 0;
    /// certifies that { x >= 0 : A x = b } is empty.
    Infeasible { farkas: Vec<BigRational> },
    Unbounded,
}

/// Minimize c.x subject to A x = b, x >= 0.
pub fn minimize_eq(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let nv = c.len();
    debug_assert!(a.iter().all(|row| row.len() == nv));
    debug_assert_eq!(b.len(), m);

    // orient every row so its right-hand side is non-negative
    let flip: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    // tableau columns: nv structural, m artificial, then the right-hand side
    let width = nv + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        for j in 0..nv {
            row.push(if flip[i] { -&a[i][j] } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip[i] { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    // phase 1: minimize the sum of artificials
    let mut obj = vec![BigRational::zero(); width];
    for (j, slot) in obj.iter_mut().enumerate().take(nv) {
        *slot = -t.iter().map(|row| &row[j]).sum::<BigRational>();
    }
    obj[width - 1] = -t.iter().map(|row| &row[width - 1]).sum::<BigRational>();
    run_simplex(&mut t, &mut obj, &mut basis, usize::MAX);

    let phase1 = -obj[width - 1].clone();
    if phase1.is_positive() {
        // dual multipliers from the reduced costs of the artificial columns
        let farkas: Vec<BigRational> = (0..m)
            .map(|i| {
                let y = BigRational::one() - &obj[nv + i];
                if flip[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        return LpOutcome::Infeasible { farkas };
    }

    // drive leftover artificials (basic at level zero) out of the basis;
    // rows with no structural entry left are redundant and dropped
    let mut i = 0;
    while i < basis.len() {
        if basis[i] >= nv {
            if let Some(j) = (0..nv).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut obj, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // phase 2: original objective priced out over the current basis;
    // artificial columns are barred from re-entering
    let mut obj2 = vec![BigRational::zero(); width];
    obj2[..nv].clone_from_slice(c);
    for (i, &bi) in basis.iter().enumerate() {
        if !obj2[bi].is_zero() {
            let coeff = obj2[bi].clone();
            for (x, p) in obj2.iter_mut().zip(t[i].iter()) {
                if !p.is_zero() {
                    *x -= &coeff * p;
                }
            }
        }
    }
    if !run_simplex(&mut t, &mut obj2, &mut basis, nv) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); nv];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < nv {
            x[bi] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal { value: -obj2[width - 1].clone(), x }
}

/// Bland-rule simplex loop. Columns at `bar` and beyond never enter the
/// basis. Returns false when the objective is unbounded below.
fn run_simplex(
    t: &mut Vec<Vec<BigRational>>,
    obj: &mut [BigRational],
    basis: &mut Vec<usize>,
    bar: usize,
) -> bool {
    let rhs = obj.len() - 1;
    loop {
        let Some(enter) = (0..rhs).find(|&j| j < bar && obj[j].is_negative()) else {
            return true;
        };
        let mut leave: Option<usize> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    let cur = &t[l][rhs] / &t[l][enter];
                    let cand = &row[rhs] / &row[enter];
                    cand < cur || (cand == cur && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        let Some(leave) = leave else {
            return false;
        };
        pivot(t, obj, basis, leave, enter);
    }
}

/// One full pivot: normalize the leaving row and eliminate the entering
/// column from every other row and from the objective row.
fn pivot(
    t: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    leave: usize,
    enter: usize,
) {
    let p = t[leave][enter].clone();
    for x in t[leave].iter_mut() {
        *x /= &p;
    }
    for i in 0..t.len() {
        if i == leave || t[i][enter].is_zero() {
            continue;
        }
        let factor = t[i][enter].clone();
        let (row_i, row_l) = if i < leave {
            let (lo, hi) = t.split_at_mut(leave);
            (&mut lo[i], &hi[0])
        } else {
            let (lo, hi) = t.split_at_mut(i);
            (&mut hi[0], &lo[leave])
        };
        for (x, p) in row_i.iter_mut().zip(row_l.iter()) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
    }
    if !obj[enter].is_zero() {
        let factor = obj[enter].clone();
        for (x, p) in obj.iter_mut().zip(t[leave].iter()) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
    }
    basis[leave] = enter;
}

#[derive(Debug, Clone)]
pub enum EqFeasibility {
    Feasible(Vec<BigRational>),
    /// a with a . col >= 0 on every column and a . b < 0.
    Infeasible(Vec<BigRational>),
}

/// Decide whether { x >= 0 : A x = b } is non-empty. A feasible point comes
/// from a basic solution, so at most `a.len()` entries are non-zero.
pub fn equality_feasibility(a: &[Vec<BigRational>], b: &[BigRational]) -> EqFeasibility {
    let c = vec![BigRational::zero(); a.first().map_or(0, Vec::len)];
    match minimize_eq(&c, a, b) {
        LpOutcome::Optimal { x, .. } => EqFeasibility::Feasible(x),
        LpOutcome::Infeasible { farkas } => EqFeasibility::Infeasible(farkas),
        LpOutcome::Unbounded => unreachable!("constant objective cannot be unbounded"),
    }
}

/// Maximize c.x subject to A x <= b, x >= 0, for non-negative b.
pub fn maximize_leq(
    c: &[BigRational],
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<(BigRational, Vec<BigRational>)> {
    let m = a.len();
    let nv = c.len();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = a[i].clone();
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        rows.push(row);
    }
    let mut cost: Vec<BigRational> = c.iter().map(|x| -x).collect();
    cost.extend(std::iter::repeat_with(BigRational::zero).take(m));
    match minimize_eq(&cost, &rows, b) {
        LpOutcome::Optimal { value, mut x } => {
            x.truncate(nv);
            Some((-value, x))
        }
        _ => None,
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
