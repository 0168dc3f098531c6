use num_integer::Integer;
use num_traits::Zero;

use super::{lattice::p_integral_combination, EtaleAlgebra, FieldError, Lattice};
use crate::linalg::{scale_vec, Matrix};
use crate::perm_groups::{FiniteGroup, Subgroup};
use crate::rational::{q, rank_mod_p, residue, vp, Q};

/// A prime `P` above `p`, given locally at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeData {
    pub p: u64,
    /// `P ⊗ Z_(p)` in algebra coordinates.
    pub ideal: Lattice,
    pub uniformizer: Vec<Q>,
    pub e: u32,
    pub residue_degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamificationData {
    pub e: u32,
    pub residue_degree: u32,
    pub prime_count: u32,
    pub unramified: bool,
}

/// A Galois algebra `E/Q` with group `G`: the structure-constant algebra,
/// one automorphism matrix per group element, a global integral basis of the
/// ring of integers, and data at the ramified primes of interest.
///
/// Automorphisms act on coordinate rows: `g(x) = x · A_g`, so row `j` of
/// `A_g` is `g(b_j)` and `A_{gh} = A_h A_g`.
#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    pub name: String,
    algebra: EtaleAlgebra,
    group: FiniteGroup,
    autos: Vec<Matrix>,
    integral_basis: Matrix,
    primes: Vec<PrimeData>,
}

impl GaloisAlgebra {
    pub fn new(
        name: impl Into<String>,
        algebra: EtaleAlgebra,
        group: FiniteGroup,
        autos: Vec<Matrix>,
        integral_basis: Matrix,
        primes: Vec<PrimeData>,
    ) -> Result<Self, FieldError> {
        let n = algebra.dim();
        let bad = |msg: String| Err(FieldError::InvalidAutomorphism(msg));
        if group.order() != n {
            return bad(format!("group of order {} on an algebra of dimension {n}", group.order()));
        }
        if autos.len() != n || autos.iter().any(|a| a.nrows() != n || a.ncols() != n) {
            return bad("one n x n matrix per group element is required".into());
        }
        if autos[0] != Matrix::identity(n) {
            return bad(format!("identity element `{}` does not act trivially", group.name(0)));
        }
        for (g, a) in autos.iter().enumerate() {
            let name = group.name(g);
            if a.inverse().is_none() {
                return bad(format!("`{name}` is not invertible"));
            }
            for i in 0..n {
                for j in 0..n {
                    let lhs = algebra.basis_product(i, j);
                    let lhs = a.left_apply(&lhs);
                    let rhs = algebra.mul(a.row(i), a.row(j));
                    if lhs != rhs {
                        return bad(format!("`{name}` is not multiplicative on (b{i}, b{j})"));
                    }
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                if autos[group.mul(g, h)] != autos[h].mul(&autos[g]) {
                    return bad(format!("action is not a homomorphism at ({}, {})", group.name(g), group.name(h)));
                }
            }
        }
        let ext = GaloisAlgebra { name: name.into(), algebra, group, autos, integral_basis, primes: Vec::new() };
        if ext.fixed_space(&Subgroup::from_elements((0..n).collect())).nrows() != 1 {
            return bad("fixed algebra of G is not the rationals".into());
        }
        let ib = &ext.integral_basis;
        if ib.nrows() != n || ib.ncols() != n || ib.inverse().is_none() {
            return Err(FieldError::InvalidIntegralBasis("not a basis".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let c = ext.integral_coords(&ext.algebra.mul(ib.row(i), ib.row(j)));
                if !c.iter().all(|x| x.is_integer()) {
                    return Err(FieldError::InvalidIntegralBasis("not closed under multiplication".into()));
                }
            }
            if !ext.integral_coords(ext.algebra.one()).iter().all(|x| x.is_integer()) {
                return Err(FieldError::InvalidIntegralBasis("does not contain 1".into()));
            }
            for g in 0..n {
                if !ext.integral_coords(&ext.apply(g, ib.row(i))).iter().all(|x| x.is_integer()) {
                    return Err(FieldError::InvalidIntegralBasis(format!(
                        "not stable under `{}`",
                        ext.group.name(g)
                    )));
                }
            }
        }
        let mut ext = ext;
        for pd in primes {
            ext.check_prime_data(&pd)?;
            ext.primes.push(pd);
        }
        Ok(ext)
    }

    fn check_prime_data(&self, pd: &PrimeData) -> Result<(), FieldError> {
        let bad = |msg: &str| Err(FieldError::InvalidPrimeData { p: pd.p, reason: msg.into() });
        let o = self.integral_lattice(pd.p);
        let n = self.dim() as u32;
        if pd.ideal.prime() != pd.p {
            return bad("ideal lattice is localized at a different prime");
        }
        if !o.contains_lattice(&pd.ideal) || !pd.ideal.contains_lattice(&o.scale(&q(pd.p as i64))) {
            return bad("ideal must satisfy pO ⊆ P ⊆ O");
        }
        if o.index_of(&pd.ideal) != Some(pd.residue_degree as i64) {
            return bad("index [O : P] is not p^f");
        }
        if !pd.ideal.contains(&pd.uniformizer) {
            return bad("uniformizer is not in P");
        }
        let g = self.prime_count(pd.p);
        if pd.e * pd.residue_degree * g != n {
            return bad("e * f * (number of primes) differs from the degree");
        }
        if g == 1 {
            let gen = self
                .algebra
                .scale_lattice(&pd.uniformizer, &o)?
                .sum(&o.scale(&q(pd.p as i64)));
            if gen != pd.ideal {
                return bad("P differs from uniformizer·O + p·O");
            }
            // v(p) = e with v(uniformizer) = 1
            let pe = self.algebra.pow(&pd.uniformizer, pd.e as u64);
            let u = self.algebra.invert(&pe).map_err(|_| FieldError::InvalidPrimeData {
                p: pd.p,
                reason: "uniformizer is a zero divisor".into(),
            })?;
            let unit = scale_vec(&q(pd.p as i64), &u);
            let unit_inv = self.algebra.invert(&unit)?;
            if !o.contains(&unit) || !o.contains(&unit_inv) {
                return bad("p / uniformizer^e is not a unit");
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &EtaleAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn automorphism(&self, g: usize) -> &Matrix {
        &self.autos[g]
    }

    pub fn integral_basis(&self) -> &Matrix {
        &self.integral_basis
    }

    pub fn primes(&self) -> &[PrimeData] {
        &self.primes
    }

    pub fn prime_data(&self, p: u64) -> Option<&PrimeData> {
        self.primes.iter().find(|d| d.p == p)
    }

    pub fn apply(&self, g: usize, x: &[Q]) -> Vec<Q> {
        self.autos[g].left_apply(x)
    }

    /// `Σ_{g ∈ H} g(x)`.
    pub fn trace_to_fixed(&self, x: &[Q], h: &Subgroup) -> Vec<Q> {
        let mut out = crate::rational::zeros(self.dim());
        for &g in h.elements() {
            for (o, y) in out.iter_mut().zip(self.apply(g, x)) {
                *o += y;
            }
        }
        out
    }

    pub fn trace(&self, x: &[Q]) -> Q {
        self.algebra.trace(x)
    }

    /// Basis (rows, reduced echelon form) of the subalgebra fixed by `h`.
    pub fn fixed_space(&self, h: &Subgroup) -> Matrix {
        let n = self.dim();
        let gens = self.group.generate(h.elements()).elements().to_vec();
        let mut rows = Vec::new();
        for g in gens {
            let d = self.autos[g].sub(&Matrix::identity(n)).transpose();
            rows.extend(d.to_rows());
        }
        Matrix::from_rows_with_cols(rows, n).kernel()
    }

    /// Coordinates of `x` in the integral basis.
    pub fn integral_coords(&self, x: &[Q]) -> Vec<Q> {
        self.integral_basis.solve_left(x).expect("integral basis spans the algebra")
    }

    /// `O ⊗ Z_(p)`.
    pub fn integral_lattice(&self, p: u64) -> Lattice {
        Lattice::from_matrix(&self.integral_basis, p).expect("integral basis has full rank")
    }

    pub fn discriminant(&self) -> Q {
        self.algebra.discriminant(&self.integral_basis)
    }

    pub fn is_unramified(&self, p: u64) -> bool {
        vp(&self.discriminant(), p) == Some(0)
    }

    /// Number of primes above `p`: the dimension of the kernel of
    /// `Frobenius - 1` on `O/pO`.
    pub fn prime_count(&self, p: u64) -> u32 {
        let n = self.dim();
        let mut frob = Vec::with_capacity(n);
        for i in 0..n {
            let wp = self.algebra.pow(self.integral_basis.row(i), p);
            let c = self.integral_coords(&wp);
            let mut row: Vec<u64> = c.iter().map(|x| residue(x, p)).collect();
            row[i] = (row[i] + p - 1) % p;
            frob.push(row);
        }
        (n - rank_mod_p(&mut frob, p)) as u32
    }

    pub fn ramification_data(&self, p: u64) -> Result<RamificationData, FieldError> {
        let n = self.dim() as u32;
        let g = self.prime_count(p);
        if self.is_unramified(p) {
            return Ok(RamificationData { e: 1, residue_degree: n / g, prime_count: g, unramified: true });
        }
        let pd = self.prime_data(p).ok_or(FieldError::MissingPrimeData { p })?;
        Ok(RamificationData { e: pd.e, residue_degree: pd.residue_degree, prime_count: g, unramified: false })
    }

    /// `G_0 = { g : g(P) = P and g(b) - b ∈ P for all b ∈ O }`.
    pub fn inertia_subgroup(&self, p: u64) -> Result<Subgroup, FieldError> {
        if self.is_unramified(p) {
            return Ok(Subgroup::trivial());
        }
        let pd = self.prime_data(p).ok_or(FieldError::MissingPrimeData { p })?;
        let ib = &self.integral_basis;
        let elements = self
            .group
            .elements()
            .filter(|&g| {
                let stable = pd.ideal.transform(&self.autos[g]).map(|l| l == pd.ideal).unwrap_or(false);
                stable
                    && (0..self.dim()).all(|i| {
                        let b = ib.row(i);
                        let d: Vec<Q> = self.apply(g, b).iter().zip(b).map(|(x, y)| x - y).collect();
                        pd.ideal.contains(&d)
                    })
            })
            .collect();
        Ok(Subgroup::from_elements(elements))
    }

    pub fn is_tame(&self, p: u64) -> Result<bool, FieldError> {
        Ok(!(self.ramification_data(p)?.e as u64).is_multiple_of(p))
    }

    /// An `x ∈ O ⊗ Z_(p)` with `Σ_{g ∈ H} g(x) = 1`. For `H = G` this is an
    /// extended gcd over the traces of the integral basis.
    pub fn trace_one_element(&self, h: &Subgroup, p: u64) -> Result<Vec<Q>, FieldError> {
        let n = self.dim();
        let ib = &self.integral_basis;
        let x = if h.len() == self.group.order() {
            let traces: Vec<num_bigint::BigInt> = (0..n)
                .map(|i| {
                    let t = self.trace(ib.row(i));
                    debug_assert!(t.is_integer());
                    t.to_integer()
                })
                .collect();
            let mut d = num_bigint::BigInt::zero();
            let mut coeffs = vec![num_bigint::BigInt::zero(); n];
            for (i, t) in traces.iter().enumerate() {
                let e = d.extended_gcd(t);
                // new gcd = e.x * d + e.y * t
                for c in coeffs.iter_mut() {
                    *c *= &e.x;
                }
                coeffs[i] += &e.y;
                d = e.gcd;
            }
            if d.is_zero() || (&d % p).is_zero() {
                return Err(FieldError::WildRamification { p });
            }
            let mut x = crate::rational::zeros(n);
            for (c, i) in coeffs.iter().zip(0..n) {
                let s = Q::new(c.clone(), d.clone());
                for (xj, bj) in x.iter_mut().zip(ib.row(i)) {
                    *xj += &s * bj;
                }
            }
            x
        } else {
            // local solve inside the fixed subalgebra
            let w = self.fixed_space(h);
            let gens: Vec<Vec<Q>> = (0..n)
                .map(|i| w.solve_left(&self.trace_to_fixed(ib.row(i), h)).expect("trace lands in the fixed algebra"))
                .collect();
            let one = w.solve_left(self.algebra.one()).expect("1 is fixed");
            let c = p_integral_combination(&gens, &one, p).ok_or(FieldError::WildRamification { p })?;
            let mut x = crate::rational::zeros(n);
            for (ci, i) in c.iter().zip(0..n) {
                for (xj, bj) in x.iter_mut().zip(ib.row(i)) {
                    *xj += ci * bj;
                }
            }
            x
        };
        debug_assert_eq!(self.trace_to_fixed(&x, h), self.algebra.one());
        debug_assert!(self.integral_lattice(p).contains(&x));
        Ok(x)
    }

    /// `g(B) = B` for all `g`.
    pub fn is_ambiguous(&self, b: &Lattice) -> bool {
        self.group
            .generators()
            .into_iter()
            .all(|g| b.transform(&self.autos[g]).map(|l| l == *b).unwrap_or(false))
    }

    /// Global version for a `Z`-lattice given by basis rows.
    pub fn is_ambiguous_global(&self, basis: &Matrix) -> bool {
        let Some(inv) = basis.inverse() else { return false };
        self.group.generators().into_iter().all(|g| {
            let m = basis.mul(&self.autos[g]).mul(&inv);
            (0..m.nrows()).all(|i| m.row(i).iter().all(|x| x.is_integer()))
        })
    }

    /// Uniformizer of the unique prime above `p`: supplied data, or `p`
    /// itself when `p` is inert.
    fn unique_uniformizer(&self, p: u64) -> Result<Vec<Q>, FieldError> {
        if self.prime_count(p) != 1 {
            return Err(FieldError::MultiplePrimes { p });
        }
        match self.prime_data(p) {
            Some(pd) => Ok(pd.uniformizer.clone()),
            None if self.is_unramified(p) => Ok(scale_vec(&q(p as i64), self.algebra.one())),
            None => Err(FieldError::MissingPrimeData { p }),
        }
    }

    /// `v_P(x)` normalized by `v_P(uniformizer) = 1`, for the unique prime
    /// above `p`.
    pub fn valuation(&self, x: &[Q], p: u64) -> Result<i64, FieldError> {
        if x.iter().all(Zero::is_zero) {
            return Err(FieldError::ZeroElement);
        }
        let pi = self.unique_uniformizer(p)?;
        let pi_inv = self.algebra.invert(&pi)?;
        let o = self.integral_lattice(p);
        let mut y = x.to_vec();
        let mut v = 0;
        while !o.contains(&y) {
            y = self.algebra.mul(&y, &pi);
            v -= 1;
        }
        loop {
            let z = self.algebra.mul(&y, &pi_inv);
            if !o.contains(&z) {
                return Ok(v);
            }
            y = z;
            v += 1;
        }
    }

    /// `P^k ⊗ Z_(p) = π^k O` for the unique prime above `p`. At an
    /// unramified `p` without prime data this is `p^k O`, the product of all
    /// primes above `p` to the `k`.
    pub fn ideal_power(&self, p: u64, k: i64) -> Result<Lattice, FieldError> {
        let o = self.integral_lattice(p);
        let pi = match self.unique_uniformizer(p) {
            Ok(pi) => pi,
            Err(FieldError::MultiplePrimes { .. }) if self.is_unramified(p) && self.prime_data(p).is_none() => {
                scale_vec(&q(p as i64), self.algebra.one())
            }
            Err(e) => return Err(e),
        };
        let base = if k >= 0 { pi } else { self.algebra.invert(&pi)? };
        let x = self.algebra.pow(&base, k.unsigned_abs());
        self.algebra.scale_lattice(&x, &o)
    }
}

impl RamificationData {
    pub fn is_tame(&self, p: u64) -> bool {
        !(self.e as u64).is_multiple_of(p)
    }
}
