use num_traits::{One, Zero};

use super::{FieldError, Lattice};
use crate::linalg::{is_zero_vec, Matrix};
use crate::rational::{fmt_q, q, unit_vector, zeros, Q};

/// A commutative rational algebra with basis `b_0..b_{n-1}` and structure
/// constants `b_i b_j = Σ_k c[i][j][k] b_k`. Elements are coordinate rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    dim: usize,
    names: Vec<String>,
    sc: Vec<Q>,
    one: Vec<Q>,
}

impl EtaleAlgebra {
    /// Checks commutativity, associativity and the unit on basis triples.
    /// The identity is found by solving `1 · b_j = b_j`.
    pub fn new(names: Vec<String>, structure_constants: Vec<Vec<Vec<Q>>>) -> Result<Self, FieldError> {
        let n = names.len();
        if n == 0 {
            return Err(FieldError::InvalidAlgebra("empty basis".into()));
        }
        if structure_constants.len() != n
            || structure_constants.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n))
        {
            return Err(FieldError::InvalidAlgebra(format!("structure constants must be {n}x{n}x{n}")));
        }
        let sc: Vec<Q> = structure_constants.into_iter().flatten().flatten().collect();
        let mut alg = EtaleAlgebra { dim: n, names, sc, one: zeros(n) };
        for i in 0..n {
            for j in 0..n {
                if alg.basis_product(i, j) != alg.basis_product(j, i) {
                    return Err(FieldError::InvalidAlgebra(format!("b{i} b{j} != b{j} b{i}")));
                }
                for k in 0..n {
                    let left = alg.mul(&alg.basis_product(i, j), &unit_vector(n, k));
                    let right = alg.mul(&unit_vector(n, i), &alg.basis_product(j, k));
                    if left != right {
                        return Err(FieldError::InvalidAlgebra(format!("not associative at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        // 1 · b_j = b_j for all j: solve against the stacked multiplication maps
        let mut system = Matrix::zero(n, n * n);
        let mut target = zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    system[(i, j * n + k)] = alg.sc[(i * n + j) * n + k].clone();
                }
                target[j * n + j] = Q::one();
            }
        }
        alg.one = system
            .solve_left(&target)
            .ok_or_else(|| FieldError::InvalidAlgebra("no multiplicative identity".into()))?;
        Ok(alg)
    }

    /// `Q[x]/(f)` for monic `f = x^n + c_{n-1} x^{n-1} + .. + c_0`, given as
    /// `[c_0, .., c_{n-1}]`, on the power basis.
    pub fn power_basis(coeffs: &[Q], names: Vec<String>) -> Result<Self, FieldError> {
        let n = coeffs.len();
        // x^k for k < 2n - 1 in the power basis
        let mut powers: Vec<Vec<Q>> = (0..n).map(|k| unit_vector(n, k)).collect();
        for k in n..2 * n - 1 {
            let prev = &powers[k - 1];
            let mut next = zeros(n);
            for i in 1..n {
                next[i] = prev[i - 1].clone();
            }
            let top = prev[n - 1].clone();
            for (x, c) in next.iter_mut().zip(coeffs) {
                *x -= &top * c;
            }
            powers.push(next);
        }
        let sc = (0..n).map(|i| (0..n).map(|j| powers[i + j].clone()).collect()).collect();
        Self::new(names, sc)
    }

    /// `A ⊗ B` on the basis `a_i ⊗ b_j` at index `i * dim(B) + j`; names are
    /// concatenated, with `1` factors dropped.
    pub fn tensor(a: &EtaleAlgebra, b: &EtaleAlgebra) -> Result<Self, FieldError> {
        let (na, nb) = (a.dim, b.dim);
        let n = na * nb;
        let name = |i: usize, j: usize| match (a.names[i].as_str(), b.names[j].as_str()) {
            ("1", "1") => "1".to_string(),
            ("1", y) => y.to_string(),
            (x, "1") => x.to_string(),
            (x, y) => format!("{x}{y}"),
        };
        let names = (0..n).map(|x| name(x / nb, x % nb)).collect();
        let mut sc = vec![vec![zeros(n); n]; n];
        for x in 0..n {
            for y in 0..n {
                let pa = a.basis_product(x / nb, y / nb);
                let pb = b.basis_product(x % nb, y % nb);
                for (i, ci) in pa.iter().enumerate() {
                    for (j, cj) in pb.iter().enumerate() {
                        if !ci.is_zero() && !cj.is_zero() {
                            sc[x][y][i * nb + j] += ci * cj;
                        }
                    }
                }
            }
        }
        Self::new(names, sc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn one(&self) -> &[Q] {
        &self.one
    }

    pub fn basis_element(&self, i: usize) -> Vec<Q> {
        unit_vector(self.dim, i)
    }

    pub fn element(&self, name: &str) -> Result<Vec<Q>, FieldError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.basis_element(i))
            .ok_or_else(|| FieldError::UnknownBasisElement(name.to_string()))
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.sc[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Q> {
        let n = self.dim;
        self.sc[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = zeros(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let s = &self.sc[(i * n + j) * n + k];
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Q], mut k: u64) -> Vec<Q> {
        let mut base = x.to_vec();
        let mut acc = self.one.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Rows are `x · b_i`, so `y · M = x y`.
    pub fn mul_matrix(&self, x: &[Q]) -> Matrix {
        Matrix::from_rows((0..self.dim).map(|i| self.mul(x, &self.basis_element(i))).collect())
    }

    pub fn invert(&self, x: &[Q]) -> Result<Vec<Q>, FieldError> {
        self.mul_matrix(x).solve_left(&self.one).ok_or(FieldError::NotInvertible)
    }

    /// Trace of the regular representation.
    pub fn trace(&self, x: &[Q]) -> Q {
        let m = self.mul_matrix(x);
        (0..self.dim).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        self.mul_matrix(x).det()
    }

    /// `det(Tr(w_i w_j))` for the rows `w_i` of `basis`.
    pub fn discriminant(&self, basis: &Matrix) -> Q {
        let n = basis.nrows();
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.trace(&self.mul(basis.row(i), basis.row(j)));
            }
        }
        m.det()
    }

    /// `x · L`.
    pub fn scale_lattice(&self, x: &[Q], l: &Lattice) -> Result<Lattice, FieldError> {
        Lattice::new(l.basis().iter().map(|r| self.mul(x, r)).collect(), l.prime())
    }

    /// The lattice spanned by all products `u v`, `u ∈ a`, `v ∈ b`.
    pub fn lattice_product(&self, a: &Lattice, b: &Lattice) -> Result<Lattice, FieldError> {
        if a.prime() != b.prime() {
            return Err(FieldError::PrimeMismatch(a.prime(), b.prime()));
        }
        let mut gens = Vec::with_capacity(a.dim() * b.dim());
        for u in a.basis() {
            for v in b.basis() {
                gens.push(self.mul(&u, &v));
            }
        }
        Lattice::new(gens, a.prime())
    }

    /// Human-readable form such as `2*a + 1/3*za2`.
    pub fn format(&self, x: &[Q]) -> String {
        if is_zero_vec(x) {
            return "0".into();
        }
        let mut out = String::new();
        for (c, name) in x.iter().zip(&self.names) {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (a == q(1), name.as_str()) {
                (true, n) => out.push_str(n),
                (false, "1") => out.push_str(&fmt_q(&a)),
                (false, n) => out.push_str(&format!("{}*{n}", fmt_q(&a))),
            }
        }
        out
    }
}
