use num_traits::{One, Zero};

use super::FieldError;
use crate::linalg::Matrix;
use crate::rational::{is_p_integral, pow_p, reduce_mod_pk, unit_part, vp, zeros, Q};

/// A full-rank lattice over the integers localized at `p`, stored by its
/// canonical Hermite normal form: upper-triangular rows, pivots `p^k`, and
/// entries above each pivot reduced to `Z[1/p] ∩ [0, p^k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    p: u64,
    hnf: Matrix,
}

/// Row echelon form over `Z_(p)` on the first `pivot_cols` columns; row
/// operations act on whole rows so trailing columns can carry a transform.
/// Returns the nonzero echelon rows and their pivot columns.
fn echelon(mut rows: Vec<Vec<Q>>, pivot_cols: usize, p: u64) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..pivot_cols {
        // row with the smallest valuation in column c
        let best = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| vp(&r[c], p).map(|v| (v, i)))
            .min();
        let Some((k, i)) = best else { continue };
        let mut piv = rows.swap_remove(i);
        let u = unit_part(&piv[c], p).recip();
        for x in piv.iter_mut() {
            *x *= &u;
        }
        debug_assert_eq!(piv[c], pow_p(p, k));
        for r in rows.iter_mut() {
            if r[c].is_zero() {
                continue;
            }
            let f = &r[c] / &piv[c];
            for (x, y) in r.iter_mut().zip(&piv).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            debug_assert!(r[c].is_zero());
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        out.push(piv);
        pivots.push(c);
    }
    // canonical reduction above the pivots, left to right
    for (r, &c) in pivots.iter().enumerate() {
        let k = vp(&out[r][c], p).expect("pivot is nonzero");
        for i in 0..r {
            let x = out[i][c].clone();
            let rep = reduce_mod_pk(&x, p, k);
            if rep == x {
                continue;
            }
            let f = (&x - &rep) / &out[r][c];
            let (head, tail) = out.split_at_mut(r);
            for (a, b) in head[i].iter_mut().zip(&tail[0]).skip(c) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
    }
    (out, pivots)
}

/// Forward substitution against an upper-triangular basis with the given
/// pivot columns: `y` with `y · rows = v`, or `None` if `v` is outside the span.
fn solve_echelon(rows: &[Vec<Q>], pivots: &[usize], v: &[Q]) -> Option<Vec<Q>> {
    let mut rest = v.to_vec();
    let mut y = zeros(rows.len());
    for (r, &c) in pivots.iter().enumerate() {
        if rest[c].is_zero() {
            continue;
        }
        let f = &rest[c] / &rows[r][c];
        for (x, b) in rest.iter_mut().zip(&rows[r]).skip(c) {
            if !b.is_zero() {
                *x -= &f * b;
            }
        }
        y[r] = f;
    }
    rest.iter().all(Zero::is_zero).then_some(y)
}

/// A `Z_(p)`-combination `c` of `gens` with `c · gens = target`, if one exists.
pub fn p_integral_combination(gens: &[Vec<Q>], target: &[Q], p: u64) -> Option<Vec<Q>> {
    let m = gens.len();
    let width = target.len();
    let rows: Vec<Vec<Q>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut r = g.clone();
            r.extend((0..m).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (ech, pivots) = echelon(rows, width, p);
    let basis: Vec<Vec<Q>> = ech.iter().map(|r| r[..width].to_vec()).collect();
    let y = solve_echelon(&basis, &pivots, target)?;
    if !y.iter().all(|x| is_p_integral(x, p)) {
        return None;
    }
    let mut c = zeros(m);
    for (yi, r) in y.iter().zip(&ech) {
        for (cj, t) in c.iter_mut().zip(&r[width..]) {
            *cj += yi * t;
        }
    }
    Some(c)
}

impl Lattice {
    /// The `Z_(p)`-span of `generators`, which must have full rank.
    pub fn new(generators: Vec<Vec<Q>>, p: u64) -> Result<Self, FieldError> {
        let n = generators.first().map_or(0, Vec::len);
        let (rows, pivots) = echelon(generators, n, p);
        if pivots.len() != n {
            return Err(FieldError::RankDeficient { rank: pivots.len(), dim: n });
        }
        Ok(Lattice { p, hnf: Matrix::from_rows_with_cols(rows, n) })
    }

    pub fn from_matrix(m: &Matrix, p: u64) -> Result<Self, FieldError> {
        if m.nrows() == 0 {
            return Err(FieldError::RankDeficient { rank: 0, dim: m.ncols() });
        }
        Self::new(m.to_rows(), p)
    }

    /// `Z_(p)^n`.
    pub fn standard(n: usize, p: u64) -> Self {
        Lattice { p, hnf: Matrix::identity(n) }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.hnf.ncols()
    }

    pub fn hnf(&self) -> &Matrix {
        &self.hnf
    }

    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.hnf.to_rows()
    }

    fn pivots(&self) -> Vec<usize> {
        (0..self.dim()).collect()
    }

    /// Coordinates of `v` in the HNF basis.
    pub fn coords(&self, v: &[Q]) -> Vec<Q> {
        solve_echelon(&self.hnf.to_rows(), &self.pivots(), v).expect("full-rank lattice spans the space")
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).iter().all(|x| is_p_integral(x, self.p))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.dim()).all(|i| self.contains(other.hnf.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::new(self.basis().into_iter().chain(other.basis()).collect(), self.p)
            .expect("sum of full-rank lattices has full rank")
    }

    pub fn scale(&self, s: &Q) -> Lattice {
        assert!(!s.is_zero(), "scaling a lattice by zero");
        Lattice::new(self.basis().into_iter().map(|r| r.iter().map(|x| x * s).collect()).collect(), self.p)
            .expect("nonzero scaling keeps full rank")
    }

    /// Image under `v ↦ v · m` for an invertible `m`.
    pub fn transform(&self, m: &Matrix) -> Result<Lattice, FieldError> {
        Lattice::from_matrix(&self.hnf.mul(m), self.p)
    }

    /// `v_p` of the covolume: `Σ v_p(pivot)`.
    pub fn covolume_valuation(&self) -> i64 {
        (0..self.dim()).map(|i| vp(&self.hnf[(i, i)], self.p).expect("pivot is nonzero")).sum()
    }

    /// `k` with `[self : sub] = p^k`; `None` unless `sub ⊆ self`.
    pub fn index_of(&self, sub: &Lattice) -> Option<i64> {
        self.contains_lattice(sub).then(|| sub.covolume_valuation() - self.covolume_valuation())
    }

    /// `{ z : z · m ∈ Z_(p)^r }` for an `n × r` matrix `m` of rank `n`.
    pub fn preimage(m: &Matrix, p: u64) -> Result<Lattice, FieldError> {
        let columns = Lattice::from_matrix(&m.transpose(), p)?;
        Ok(columns.dual())
    }

    /// `{ z : z · v ∈ Z_(p) for all v ∈ self }` under the standard pairing.
    pub fn dual(&self) -> Lattice {
        let inv = self.hnf.inverse().expect("HNF basis is invertible");
        Lattice::from_matrix(&inv.transpose(), self.p).expect("dual has full rank")
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.dual().sum(&other.dual()).dual()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn lat(rows: &[&[i64]], p: u64) -> Lattice {
        Lattice::new(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), p).unwrap()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = lat(&[&[2, 3], &[0, 5]], 5);
        let b = lat(&[&[2, 1], &[3, 2]], 5);
        assert_eq!(a.hnf()[(0, 0)], q(1));
        assert_eq!(a.covolume_valuation(), 1);
        assert_eq!(b.covolume_valuation(), 0);
        let c = lat(&[&[1, 0], &[0, 1]], 5);
        assert_eq!(b, c);
    }

    #[test]
    fn membership_and_index() {
        let o = Lattice::standard(3, 5);
        let po = o.scale(&q(5));
        assert_eq!(o.index_of(&po), Some(3));
        assert!(o.contains(&[qf(1, 3), q(2), q(0)]));
        assert!(!o.contains(&[qf(1, 5), q(0), q(0)]));
        assert_eq!(po.index_of(&o), None);
    }

    #[test]
    fn rank_deficient() {
        let r = Lattice::new(vec![vec![q(1), q(2)], vec![q(2), q(4)]], 3);
        assert!(matches!(r, Err(FieldError::RankDeficient { rank: 1, dim: 2 })));
    }

    #[test]
    fn preimage_and_dual() {
        // z·(5 I) integral  <=>  z ∈ (1/5) Z^2
        let m = Matrix::identity(2);
        let five = Lattice::preimage(&Matrix::from_rows(vec![vec![q(5), q(0)], vec![q(0), q(5)]]), 5).unwrap();
        assert_eq!(five, Lattice::standard(2, 5).scale(&qf(1, 5)));
        assert_eq!(Lattice::preimage(&m, 5).unwrap(), Lattice::standard(2, 5));
        let a = lat(&[&[1, 1], &[0, 5]], 5);
        assert_eq!(a.dual().dual(), a);
        let b = lat(&[&[5, 0], &[0, 1]], 5);
        let i = a.intersect(&b);
        assert!(a.contains_lattice(&i) && b.contains_lattice(&i));
        assert_eq!(i, lat(&[&[5, 0], &[0, 5]], 5));
    }

    #[test]
    fn integral_combinations() {
        let gens = vec![vec![q(6)], vec![q(10)]];
        // 6 is a unit at 5; at 2 both generators are even
        let c = p_integral_combination(&gens, &[q(1)], 5).unwrap();
        assert_eq!(&c[0] * q(6) + &c[1] * q(10), q(1));
        assert!(p_integral_combination(&gens, &[q(1)], 2).is_none());
    }
}
