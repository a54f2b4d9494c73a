//! Exact facet enumeration for convex hulls of rational point sets by the
//! double description method, plus the minimal-face subspace at the origin
//! and radius checks for subspace balls inside a hull.
//!
//! The hull of X is encoded by the polar-style cone
//! C = { (a, b) : a.x_j + b >= 0 for all x_j in X } in dimension d+1.
//! Lineality vectors of C give equations valid on all of X, extreme rays give
//! irredundant inequalities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::{self, dot, LpOutcome};
use crate::{Error, Result};

/// Linear description of a hull: `normal . x = rhs` for equations,
/// `normal . x >= rhs` for facets, with primitive integer data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFacets {
    pub dim: usize,
    pub equations: Vec<(Vec<BigInt>, BigInt)>,
    pub facets: Vec<(Vec<BigInt>, BigInt)>,
}

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bits_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

struct Ray {
    v: Vec<BigRational>,
    tight: Bits,
}

fn unit(dim: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::one();
    v
}

/// Smallest integer vector on the same ray (positive scaling only).
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

fn primitive_rat(v: &[BigRational]) -> Vec<BigRational> {
    primitive(v).into_iter().map(BigRational::from_integer).collect()
}

struct DoubleDescription {
    lineality: Vec<Vec<BigRational>>,
    rays: Vec<Ray>,
}

/// Incremental double description of { y : row . y >= 0 for all rows }.
/// Rays are kept extreme modulo the lineality space; adjacency of a positive
/// and a negative ray is decided combinatorially from tight sets, which is
/// exact while every stored ray is extreme.
fn dd_cone(rows: &[Vec<BigRational>]) -> DoubleDescription {
    let dim = rows[0].len();
    let nbits = rows.len();
    let mut lineality: Vec<Vec<BigRational>> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, m) in rows.iter().enumerate() {
        let lvals: Vec<BigRational> = lineality.iter().map(|l| dot(m, l)).collect();
        if let Some(pos0) = lvals.iter().position(|x| !x.is_zero()) {
            // the constraint cuts the lineality space: one direction becomes
            // the unique new extreme ray, everything else is folded flat
            let mut l0 = lineality[pos0].clone();
            let mut m_l0 = lvals[pos0].clone();
            if m_l0.is_negative() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                m_l0 = -m_l0;
            }
            let mut new_lin = Vec::new();
            for (i, l) in lineality.iter().enumerate() {
                if i == pos0 {
                    continue;
                }
                let c = &lvals[i] / &m_l0;
                new_lin.push(
                    l.iter().zip(&l0).map(|(x, y)| x - &c * y).collect::<Vec<_>>(),
                );
            }
            lineality = new_lin;
            for r in rays.iter_mut() {
                let mv = dot(m, &r.v);
                if !mv.is_zero() {
                    let c = &mv / &m_l0;
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                    r.v = primitive_rat(&r.v);
                }
                bits_set(&mut r.tight, idx);
            }
            let mut tight0 = bits_new(nbits);
            for j in 0..idx {
                bits_set(&mut tight0, j);
            }
            rays.push(Ray { v: primitive_rat(&l0), tight: tight0 });
            continue;
        }

        let vals: Vec<BigRational> = rays.iter().map(|r| dot(m, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    bits_set(&mut r.tight, idx);
                }
            }
            continue;
        }

        let mut combos: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = bits_and(&rays[p].tight, &rays[n].tight);
                let adjacent = (0..rays.len())
                    .filter(|&r| r != p && r != n)
                    .all(|r| !bits_subset(&common, &rays[r].tight));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigRational> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(nv, pv)| &vals[p] * nv - &vals[n] * pv)
                    .collect();
                let mut tight = common;
                bits_set(&mut tight, idx);
                combos.push(Ray { v: primitive_rat(&v), tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                kept.push(r);
            } else if vals[i].is_zero() {
                let mut r = r;
                bits_set(&mut r.tight, idx);
                kept.push(r);
            }
        }
        kept.extend(combos);
        rays = kept;
    }

    DoubleDescription { lineality, rays }
}

/// Reduced row echelon form; returns the reduced nonzero rows and the pivot
/// column of each.
fn rref(mut m: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Canonical basis of { x : row . x = 0 for all rows }.
pub fn nullspace_basis(rows: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigRational>> {
    if rows.is_empty() {
        return (0..dim).map(|i| unit(dim, i)).collect();
    }
    let (m, pivots) = rref(rows.to_vec());
    let mut basis = Vec::new();
    for f in 0..dim {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![BigRational::zero(); dim];
        v[f] = BigRational::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        basis.push(primitive_rat(&v));
    }
    basis
}

/// Any exact solution of the augmented system [A | b], free variables zero.
fn solve_linear(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[cols].clone();
    }
    Some(x)
}

/// Orthogonal projection of `a` onto the span of `basis` (not necessarily an
/// orthogonal basis).
pub fn project_onto(basis: &[Vec<BigRational>], a: &[BigRational]) -> Vec<BigRational> {
    if basis.is_empty() {
        return vec![BigRational::zero(); a.len()];
    }
    let gram: Vec<Vec<BigRational>> =
        basis.iter().map(|si| basis.iter().map(|sj| dot(si, sj)).collect()).collect();
    let rhs: Vec<BigRational> = basis.iter().map(|si| dot(si, a)).collect();
    let t = solve_linear(&gram, &rhs).expect("gram system is always consistent");
    let mut c = vec![BigRational::zero(); a.len()];
    for (ti, si) in t.iter().zip(basis) {
        for (x, y) in c.iter_mut().zip(si) {
            *x += ti * y;
        }
    }
    c
}

pub fn norm_sq(v: &[BigRational]) -> BigRational {
    dot(v, v)
}

/// All equations and irredundant facet inequalities of the hull of `points`.
pub fn hull_facets(points: &[Vec<BigRational>]) -> Result<HullFacets> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidInput("points must share a positive dimension".into()));
    }
    let rows: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(BigRational::one());
            r
        })
        .collect();
    let dd = dd_cone(&rows);

    let (lin, _) = rref(dd.lineality);
    let mut equations = Vec::new();
    for row in lin {
        let ints = primitive(&row);
        let (a, b) = ints.split_at(d);
        debug_assert!(a.iter().any(|x| !x.is_zero()));
        equations.push((a.to_vec(), -b[0].clone()));
    }
    equations.sort();

    let mut facets = Vec::new();
    for r in dd.rays {
        let ints = primitive(&r.v);
        let (a, b) = ints.split_at(d);
        if a.iter().all(Zero::is_zero) {
            continue; // the trivial ray: 0 . x >= -1
        }
        facets.push((a.to_vec(), -b[0].clone()));
    }
    facets.sort();
    facets.dedup();

    Ok(HullFacets { dim: d, equations, facets })
}

/// Basis of the linear span of the minimal face of the hull containing the
/// origin. The origin must be one of the points. An empty basis means the
/// origin is a vertex.
pub fn minimum_face_subspace(points: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let Some(zero) = points.iter().position(|p| p.iter().all(Zero::is_zero)) else {
        return Err(Error::InvalidInput("origin is not among the points".into()));
    };
    let d = points[zero].len();
    let hf = hull_facets(points)?;
    let mut normals: Vec<Vec<BigRational>> = Vec::new();
    for (a, rhs) in &hf.equations {
        debug_assert!(rhs.is_zero());
        normals.push(a.iter().map(|x| BigRational::from_integer(x.clone())).collect());
    }
    for (a, rhs) in &hf.facets {
        if rhs.is_zero() {
            normals.push(a.iter().map(|x| BigRational::from_integer(x.clone())).collect());
        }
    }
    Ok(nullspace_basis(&normals, d))
}

/// How a ball check can end. `reach_sq` bounds the squared norm at which the
/// hull is left along `direction`: any point t * direction with
/// reach_sq < t^2 |direction|^2 <= delta^2 lies in the ball but not the hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallVerdict {
    Inside { critical_ratio_sq: Option<BigRational> },
    Outside { direction: Vec<BigRational>, reach_sq: BigRational },
    ProbablyInside { samples: usize },
}

#[derive(Debug, Clone)]
pub struct BallOptions {
    /// Largest ambient dimension handled by exact facet enumeration.
    pub exact_dimension_cap: usize,
    /// Sampled directions in the fallback regime.
    pub probe_samples: usize,
    pub seed: u64,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { exact_dimension_cap: 12, probe_samples: 64, seed: 0x5eed }
    }
}

/// Largest delta^2 such that every point of the subspace ball of that radius
/// lies in the hull; `None` when nothing constrains the subspace (it is {0}).
/// Exact facet enumeration, so subject to the dimension cap by callers.
pub fn critical_radius_sq(
    points: &[Vec<BigRational>],
    s_basis: &[Vec<BigRational>],
) -> Result<Option<BigRational>> {
    Ok(exact_scan(points, s_basis)?.0)
}

/// Shared exact sweep: the critical squared radius together with the
/// direction in S achieving it.
#[allow(clippy::type_complexity)]
fn exact_scan(
    points: &[Vec<BigRational>],
    s_basis: &[Vec<BigRational>],
) -> Result<(Option<BigRational>, Option<Vec<BigRational>>)> {
    let hf = hull_facets(points)?;
    if points.iter().all(|p| p.iter().any(|x| !x.is_zero())) {
        return Err(Error::InvalidInput("origin is not among the points".into()));
    }
    let to_rat =
        |a: &[BigInt]| a.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>();
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    for (a, _) in &hf.equations {
        let c = project_onto(s_basis, &to_rat(a));
        if c.iter().any(|x| !x.is_zero()) {
            let dir: Vec<BigRational> = c.iter().map(|x| -x.clone()).collect();
            return Ok((Some(BigRational::zero()), Some(dir)));
        }
    }
    for (a, rhs) in &hf.facets {
        let c = project_onto(s_basis, &to_rat(a));
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let dir: Vec<BigRational> = c.iter().map(|x| -x.clone()).collect();
        if rhs.is_zero() {
            return Ok((Some(BigRational::zero()), Some(dir)));
        }
        let rhs_rat = BigRational::from_integer(rhs.clone());
        let ratio = &rhs_rat * &rhs_rat / norm_sq(&c);
        if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            best = Some((ratio, dir));
        }
    }
    match best {
        Some((ratio, dir)) => Ok((Some(ratio), Some(dir))),
        None => Ok((None, None)),
    }
}

/// Does every point of the given subspace with norm at most delta lie in the
/// hull of `points`? Exact up to the dimension cap; beyond it, sampled
/// directions give one-sided answers (`Outside` is still exact).
pub fn ball_in_hull(
    points: &[Vec<BigRational>],
    s_basis: &[Vec<BigRational>],
    delta: &BigRational,
    opts: &BallOptions,
) -> Result<BallVerdict> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let d = points[0].len();
    if s_basis.iter().any(|s| s.len() != d) {
        return Err(Error::InvalidInput("subspace basis dimension mismatch".into()));
    }
    if s_basis.is_empty() {
        return Ok(BallVerdict::Inside { critical_ratio_sq: None });
    }
    let delta_sq = delta * delta;

    if d <= opts.exact_dimension_cap {
        let (crit, dir) = exact_scan(points, s_basis)?;
        return Ok(match crit {
            None => BallVerdict::Inside { critical_ratio_sq: None },
            Some(ratio) if delta_sq <= ratio => {
                BallVerdict::Inside { critical_ratio_sq: Some(ratio) }
            }
            Some(ratio) => {
                BallVerdict::Outside { direction: dir.expect("direction set"), reach_sq: ratio }
            }
        });
    }

    if points.iter().all(|p| p.iter().any(|x| !x.is_zero())) {
        return Err(Error::InvalidInput("origin is not among the points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.probe_samples {
        let mut v = vec![BigRational::zero(); d];
        let mut attempts = 0;
        while v.iter().all(Zero::is_zero) {
            attempts += 1;
            if attempts > 100 {
                return Err(Error::InvalidInput("degenerate subspace basis".into()));
            }
            v = vec![BigRational::zero(); d];
            for s in s_basis {
                let c = BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9)));
                for (x, y) in v.iter_mut().zip(s) {
                    *x += &c * y;
                }
            }
        }
        let reach = hull_reach(points, &v)?;
        let reach_sq = &reach * &reach * norm_sq(&v);
        if reach_sq < delta_sq {
            return Ok(BallVerdict::Outside { direction: v, reach_sq });
        }
    }
    Ok(BallVerdict::ProbablyInside { samples: opts.probe_samples })
}

/// max { t >= 0 : t * v in hull(points) }, exact, via one LP.
pub fn hull_reach(points: &[Vec<BigRational>], v: &[BigRational]) -> Result<BigRational> {
    let d = v.len();
    let q = points.len();
    // variables: one weight per point, then t
    let mut a = vec![vec![BigRational::zero(); q + 1]; d + 1];
    let mut b = vec![BigRational::zero(); d + 1];
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[i][j] = p[i].clone();
        }
        a[d][j] = BigRational::one();
    }
    for i in 0..d {
        a[i][q] = -v[i].clone();
    }
    b[d] = BigRational::one();
    let mut c = vec![BigRational::zero(); q + 1];
    c[q] = -BigRational::one();
    match lp::minimize_eq(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        LpOutcome::Infeasible { .. } => {
            Err(Error::InvalidInput("origin is not among the points".into()))
        }
        LpOutcome::Unbounded => {
            Err(Error::InvalidInput("point set is not bounded".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, rational};

    fn pts(raw: &[&[i64]]) -> Vec<Vec<BigRational>> {
        raw.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    fn ints(raw: &[i64]) -> Vec<BigInt> {
        raw.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unit_square_facets() {
        let hf = hull_facets(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(hf.equations.is_empty());
        let expect = vec![
            (ints(&[-1, 0]), BigInt::from(-1)),
            (ints(&[0, -1]), BigInt::from(-1)),
            (ints(&[0, 1]), BigInt::from(0)),
            (ints(&[1, 0]), BigInt::from(0)),
        ];
        assert_eq!(hf.facets, expect);
    }

    #[test]
    fn segment_in_the_plane() {
        let hf = hull_facets(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(hf.equations, vec![(ints(&[0, 1]), BigInt::from(0))]);
        let expect =
            vec![(ints(&[-1, 0]), BigInt::from(-1)), (ints(&[1, 0]), BigInt::from(0))];
        assert_eq!(hf.facets, expect);
    }

    #[test]
    fn vertex_origin_has_trivial_face() {
        // the origin is an endpoint of the segment, so its minimal face is a
        // single point and the face span is the zero subspace
        let basis = minimum_face_subspace(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn interior_origin_spans_the_segment() {
        let basis = minimum_face_subspace(&pts(&[&[0, 0], &[1, 0], &[-1, 0]])).unwrap();
        assert_eq!(basis, vec![vec![int(1), int(0)]]);
    }

    #[test]
    fn point_hull_is_all_equations() {
        let hf = hull_facets(&pts(&[&[0, 0, 0]])).unwrap();
        assert_eq!(hf.equations.len(), 3);
        assert!(hf.facets.is_empty());
        let basis = minimum_face_subspace(&pts(&[&[0, 0, 0]])).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn cross_polytope_critical_radius() {
        let x = pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        let hf = hull_facets(&x).unwrap();
        assert_eq!(hf.facets.len(), 8);
        let s: Vec<Vec<BigRational>> = (0..3).map(|i| {
            let mut v = vec![int(0), int(0), int(0)];
            v[i] = int(1);
            v
        }).collect();
        let crit = critical_radius_sq(&x, &s).unwrap().unwrap();
        assert_eq!(crit, rational(1, 3));

        let inside =
            ball_in_hull(&x, &s, &rational(1, 2), &BallOptions::default()).unwrap();
        assert_eq!(inside, BallVerdict::Inside { critical_ratio_sq: Some(rational(1, 3)) });
        match ball_in_hull(&x, &s, &rational(3, 5), &BallOptions::default()).unwrap() {
            BallVerdict::Outside { direction, reach_sq } => {
                assert_eq!(reach_sq, rational(1, 3));
                assert!(direction.iter().any(|c| !c.is_zero()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_radius_counts_as_inside() {
        let x = pts(&[&[0, 0], &[1, 0], &[-1, 0]]);
        let s = vec![vec![int(1), int(0)]];
        let v = ball_in_hull(&x, &s, &int(1), &BallOptions::default()).unwrap();
        assert_eq!(v, BallVerdict::Inside { critical_ratio_sq: Some(int(1)) });
    }

    #[test]
    fn subspace_leaving_the_affine_hull_fails_immediately() {
        let x = pts(&[&[0, 0], &[1, 0], &[-1, 0]]);
        let s = vec![vec![int(0), int(1)]];
        match ball_in_hull(&x, &s, &rational(1, 10), &BallOptions::default()).unwrap() {
            BallVerdict::Outside { reach_sq, .. } => assert!(reach_sq.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn probing_regime_matches_exact_verdicts() {
        let x = pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        let s: Vec<Vec<BigRational>> = (0..3).map(|i| {
            let mut v = vec![int(0), int(0), int(0)];
            v[i] = int(1);
            v
        }).collect();
        let opts = BallOptions { exact_dimension_cap: 2, probe_samples: 32, seed: 7 };
        match ball_in_hull(&x, &s, &rational(1, 2), &opts).unwrap() {
            BallVerdict::ProbablyInside { samples } => assert_eq!(samples, 32),
            other => panic!("{other:?}"),
        }
        match ball_in_hull(&x, &s, &int(2), &opts).unwrap() {
            BallVerdict::Outside { reach_sq, .. } => assert!(reach_sq < int(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hull_reach_along_axis() {
        let x = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = hull_reach(&x, &[int(1), int(1)]).unwrap();
        assert_eq!(r, int(1));
        let r = hull_reach(&x, &[int(1), int(0)]).unwrap();
        assert_eq!(r, int(2));
    }

    #[test]
    fn degenerate_coplanar_points_dedup_facets() {
        // four collinear points inside a triangle must not add spurious facets
        let x = pts(&[&[0, 0], &[3, 0], &[1, 0], &[2, 0], &[0, 3]]);
        let hf = hull_facets(&x).unwrap();
        assert!(hf.equations.is_empty());
        assert_eq!(hf.facets.len(), 3);
    }

    #[test]
    fn empty_subspace_is_always_inside() {
        let x = pts(&[&[0, 0], &[1, 0]]);
        let v = ball_in_hull(&x, &[], &int(5), &BallOptions::default()).unwrap();
        assert_eq!(v, BallVerdict::Inside { critical_ratio_sq: None });
    }

    #[test]
    fn random_hulls_match_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 25 {
            let points: Vec<Vec<BigRational>> = (0..6)
                .map(|_| (0..3).map(|_| int(rng.gen_range(-2i64..=2))).collect())
                .collect();
            let diffs: Vec<Vec<BigRational>> = points[1..]
                .iter()
                .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
                .collect();
            if crate::geometry::rank(&diffs) < 3 {
                continue; // oracle below only covers full-dimensional hulls
            }
            checked += 1;
            let hf = hull_facets(&points).unwrap();
            assert!(hf.equations.is_empty());
            assert_eq!(hf.facets, brute_force_facets(&points));
        }
    }

    /// Every plane through three affinely independent points that has all
    /// points on one side, deduplicated.
    fn brute_force_facets(points: &[Vec<BigRational>]) -> Vec<(Vec<BigInt>, BigInt)> {
        let n = points.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let d1: Vec<BigRational> =
                        points[j].iter().zip(&points[i]).map(|(a, b)| a - b).collect();
                    let d2: Vec<BigRational> =
                        points[k].iter().zip(&points[i]).map(|(a, b)| a - b).collect();
                    let normal = vec![
                        &d1[1] * &d2[2] - &d1[2] * &d2[1],
                        &d1[2] * &d2[0] - &d1[0] * &d2[2],
                        &d1[0] * &d2[1] - &d1[1] * &d2[0],
                    ];
                    if normal.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let rhs = dot(&normal, &points[i]);
                    let mut normal = normal;
                    let mut rhs = rhs;
                    if points.iter().any(|p| dot(&normal, p) < rhs) {
                        if points.iter().any(|p| dot(&normal, p) > rhs) {
                            continue; // points on both sides: not a facet
                        }
                        for x in normal.iter_mut() {
                            *x = -x.clone();
                        }
                        rhs = -rhs;
                    }
                    let mut joint = normal.clone();
                    joint.push(rhs.clone());
                    let prim = primitive(&joint);
                    out.push((prim[..3].to_vec(), prim[3].clone()));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}
