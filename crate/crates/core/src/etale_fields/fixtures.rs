use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EtaleAlgebra, FieldError, GaloisAlgebra, Lattice, PrimeData};
use crate::linalg::{sub_vec, Matrix};
use crate::perm_groups::{FiniteGroup, GroupFile};
use crate::rational::{fmt_q, is_prime, parse_q, q, Q};

/// `[c_0, .., c_{d-1}]` of the monic cyclotomic polynomial `Φ_n`.
fn cyclotomic_coeffs(n: u64) -> Option<Vec<i64>> {
    Some(match n {
        3 => vec![1, 1],
        4 => vec![1, 0],
        5 => vec![1, 1, 1, 1],
        7 => vec![1, 1, 1, 1, 1, 1],
        9 => vec![1, 0, 0, 1, 0, 0],
        _ => return None,
    })
}

fn prime_of_prime_power(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).expect("n > 1")
}

/// `Q(ζ_n)` on the power basis `1, z, z2, ..`, with group `(Z/n)^×` (element
/// `k` acts by `ζ ↦ ζ^k`, listed in increasing `k`, named `1`, `s2`, `s3`, ..),
/// integral basis `Z[ζ]`, and prime data at the unique ramified prime with
/// uniformizer `1 - ζ`.
pub fn build_cyclotomic(n: u64) -> Result<GaloisAlgebra, FieldError> {
    let coeffs = cyclotomic_coeffs(n).ok_or(FieldError::UnsupportedN(n))?;
    let d = coeffs.len();
    let names: Vec<String> = (0..d)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "z".to_string(),
            _ => format!("z{i}"),
        })
        .collect();
    let alg = EtaleAlgebra::power_basis(&coeffs.iter().map(|&c| q(c)).collect::<Vec<_>>(), names)?;
    let units: Vec<u64> = (1..n).filter(|k| num_integer::gcd(*k, n) == 1).collect();
    let group_names = units.iter().map(|&k| if k == 1 { "1".to_string() } else { format!("s{k}") }).collect();
    let idx = |k: u64| units.iter().position(|&u| u == k % n).expect("unit");
    let mut mul = Vec::with_capacity(d * d);
    for &a in &units {
        for &b in &units {
            mul.push(idx(a * b));
        }
    }
    let group = FiniteGroup::from_table(mul, group_names)?;
    let z = alg.basis_element(1);
    let autos = units
        .iter()
        .map(|&k| {
            let zk = alg.pow(&z, k);
            Matrix::from_rows((0..d as u64).map(|j| alg.pow(&zk, j)).collect())
        })
        .collect();
    let p = prime_of_prime_power(n);
    let pi = sub_vec(alg.one(), &z);
    let o = Lattice::standard(d, p);
    let ideal = alg.scale_lattice(&pi, &o)?.sum(&o.scale(&q(p as i64)));
    let prime = PrimeData { p, ideal, uniformizer: pi, e: d as u32, residue_degree: 1 };
    GaloisAlgebra::new(format!("cyclotomic-{n}"), alg, group, autos, Matrix::identity(d), vec![prime])
}

/// `Q(ζ_3, a)` with `a³ = m` on the basis `ζ^i a^j` (index `3i + j`, names
/// `1, a, a2, z, za, za2`). The group is `D_3 = <s, t>` with `s(a) = ζa`,
/// `s(ζ) = ζ`, `t(a) = a`, `t(ζ) = ζ^{-1}`. The integral basis is
/// `{ζ^i a^j : i = 1, 2; j = 0, 1, 2}`, which is maximal at `m`; the prime
/// data at `m` has uniformizer `a`, `e = 3`, `f = 2`.
pub fn build_kummer_cubic(m: u64) -> Result<GaloisAlgebra, FieldError> {
    if !is_prime(m) || m % 3 != 2 {
        return Err(FieldError::BadM(m));
    }
    let cyc = EtaleAlgebra::power_basis(&[q(1), q(1)], vec!["1".into(), "z".into()])?;
    let rad = EtaleAlgebra::power_basis(&[q(-(m as i64)), q(0), q(0)], vec!["1".into(), "a".into(), "a2".into()])?;
    let alg = EtaleAlgebra::tensor(&cyc, &rad)?;
    let group = FiniteGroup::dihedral3("s", "t");
    let z = alg.element("z")?;
    let a = alg.element("a")?;
    let z2 = alg.mul(&z, &z);
    let autos = (0..6)
        .map(|g| {
            let (u, v) = (g % 3, g / 3);
            // s^u t^v: ζ ↦ ζ^{±1}, a ↦ ζ^u a
            let gz = if v == 1 { z2.clone() } else { z.clone() };
            let ga = alg.mul(&alg.pow(&z, u as u64), &a);
            Matrix::from_rows(
                (0..6)
                    .map(|b| alg.mul(&alg.pow(&gz, (b / 3) as u64), &alg.pow(&ga, (b % 3) as u64)))
                    .collect(),
            )
        })
        .collect();
    let ib = Matrix::from_rows(
        [1u64, 2]
            .iter()
            .flat_map(|&i| (0..3u64).map(move |j| (i, j)))
            .map(|(i, j)| alg.mul(&alg.pow(&z, i), &alg.pow(&a, j)))
            .collect(),
    );
    let o = Lattice::from_matrix(&ib, m)?;
    let ideal = alg.scale_lattice(&a, &o)?.sum(&o.scale(&q(m as i64)));
    let prime = PrimeData { p: m, ideal, uniformizer: a, e: 3, residue_degree: 2 };
    GaloisAlgebra::new(format!("kummer-cubic-{m}"), alg, group, autos, ib, vec![prime])
}

/// On-disk form of a [`GaloisAlgebra`] (TOML or JSON). Rationals are exact
/// strings `"a"` or `"a/b"`; automorphism matrices list the images of the
/// basis elements as rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub group: GroupFile,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub structure_constants: Vec<Vec<Vec<String>>>,
    pub automorphisms: BTreeMap<String, Vec<Vec<String>>>,
    pub integral_basis: Vec<Vec<String>>,
    #[serde(default)]
    pub primes: Vec<PrimeFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PrimeFile {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub uniformizer: Vec<String>,
    pub ideal_basis: Vec<Vec<String>>,
}

fn parse_vec(field: &str, v: &[String]) -> Result<Vec<Q>, FieldError> {
    v.iter()
        .map(|s| parse_q(s).ok_or_else(|| FieldError::Parse(format!("{field}: `{s}` is not a rational"))))
        .collect()
}

fn parse_matrix(field: &str, rows: &[Vec<String>], n: usize) -> Result<Matrix, FieldError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(FieldError::Parse(format!("{field}: expected a {n}x{n} matrix")));
    }
    Ok(Matrix::from_rows(rows.iter().map(|r| parse_vec(field, r)).collect::<Result<_, _>>()?))
}

fn show_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<GaloisAlgebra, FieldError> {
        let n = self.dim;
        if self.basis_names.len() != n {
            return Err(FieldError::Parse(format!("basisNames: expected {n} names")));
        }
        let group = FiniteGroup::from_file(self.group).map_err(|e| FieldError::Parse(format!("group: {e}")))?;
        let sc = self
            .structure_constants
            .iter()
            .map(|r| r.iter().map(|c| parse_vec("structureConstants", c)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let alg = EtaleAlgebra::new(self.basis_names, sc)?;
        let mut autos = Vec::with_capacity(group.order());
        for name in group.names() {
            let rows = self
                .automorphisms
                .get(name)
                .ok_or_else(|| FieldError::Parse(format!("automorphisms: missing `{name}`")))?;
            autos.push(parse_matrix(&format!("automorphisms.{name}"), rows, n)?);
        }
        if let Some(extra) = self.automorphisms.keys().find(|k| !group.names().contains(k)) {
            return Err(FieldError::Parse(format!("automorphisms: `{extra}` is not a group element")));
        }
        let ib = parse_matrix("integralBasis", &self.integral_basis, n)?;
        let mut primes = Vec::new();
        for pf in &self.primes {
            let rows = pf
                .ideal_basis
                .iter()
                .map(|r| parse_vec("primes.idealBasis", r))
                .collect::<Result<Vec<_>, _>>()?;
            primes.push(PrimeData {
                p: pf.p,
                ideal: Lattice::new(rows, pf.p)?,
                uniformizer: parse_vec("primes.uniformizer", &pf.uniformizer)?,
                e: pf.e,
                residue_degree: pf.f,
            });
        }
        GaloisAlgebra::new(self.name, alg, group, autos, ib, primes)
    }

    pub fn from_algebra(ext: &GaloisAlgebra) -> Self {
        let alg = ext.algebra();
        let n = alg.dim();
        let group = ext.group();
        AlgebraFile {
            name: ext.name.clone(),
            group: group.to_file(),
            dim: n,
            basis_names: alg.names().to_vec(),
            structure_constants: (0..n)
                .map(|i| (0..n).map(|j| alg.basis_product(i, j).iter().map(fmt_q).collect()).collect())
                .collect(),
            automorphisms: group
                .elements()
                .map(|g| (group.name(g).to_string(), show_matrix(ext.automorphism(g))))
                .collect(),
            integral_basis: show_matrix(ext.integral_basis()),
            primes: ext
                .primes()
                .iter()
                .map(|pd| PrimeFile {
                    p: pd.p,
                    e: pd.e,
                    f: pd.residue_degree,
                    uniformizer: pd.uniformizer.iter().map(fmt_q).collect(),
                    ideal_basis: show_matrix(pd.ideal.hnf()),
                })
                .collect(),
        }
    }

    pub fn from_toml(s: &str) -> Result<Self, FieldError> {
        toml::from_str(s).map_err(|e| FieldError::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self, FieldError> {
        serde_json::from_str(s).map_err(|e| FieldError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("algebra files serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra files serialize")
    }
}

/// Reads a TOML or JSON algebra file, chosen by extension.
pub fn load_algebra(path: &std::path::Path) -> Result<GaloisAlgebra, FieldError> {
    let text = std::fs::read_to_string(path).map_err(|e| FieldError::Parse(format!("{}: {e}", path.display())))?;
    let file = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => AlgebraFile::from_json(&text)?,
        _ => AlgebraFile::from_toml(&text)?,
    };
    file.into_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_groups::Subgroup;
    use crate::rational::unit_vector;

    #[test]
    fn kummer_relations() {
        let k = build_kummer_cubic(5).unwrap();
        let alg = k.algebra();
        let a = alg.element("a").unwrap();
        assert_eq!(alg.pow(&a, 3), crate::linalg::scale_vec(&q(5), alg.one()));
        let g = k.group();
        let (s, t) = (g.element("s").unwrap(), g.element("t").unwrap());
        let ms = k.automorphism(s);
        let mt = k.automorphism(t);
        assert_eq!(ms.mul(ms).mul(ms), Matrix::identity(6));
        assert_eq!(mt.mul(mt), Matrix::identity(6));
        // tst = s^{-1}; row convention reverses products, the relation is symmetric
        assert_eq!(mt.mul(ms).mul(mt), ms.mul(ms));
        // t(ζ^i a^j) = ζ^{-i} a^j
        let za2 = alg.element("za2").unwrap();
        let z2a2 = alg.mul(&alg.element("z").unwrap(), &za2);
        assert_eq!(k.apply(t, &za2), z2a2);
        // fixed field of <t> is span{1, a, a2}
        let fixed = k.fixed_space(&g.generate(&[t]));
        assert_eq!(fixed, Matrix::from_rows(vec![unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 2)]));
    }

    #[test]
    fn kummer_ramification() {
        let k = build_kummer_cubic(5).unwrap();
        let alg = k.algebra();
        assert_eq!(k.valuation(&alg.element("a").unwrap(), 5), Ok(1));
        assert_eq!(k.valuation(&crate::linalg::scale_vec(&q(5), alg.one()), 5), Ok(3));
        let g0 = k.inertia_subgroup(5).unwrap();
        assert_eq!(g0, k.group().generate(&[k.group().element("s").unwrap()]));
        let r = k.ramification_data(5).unwrap();
        assert_eq!((r.e, r.residue_degree, r.prime_count, r.unramified), (3, 2, 1, false));
        assert!(k.is_tame(5).unwrap());
        let p = k.prime_data(5).unwrap().ideal.clone();
        let p2 = alg.lattice_product(&p, &p).unwrap();
        let p3 = alg.lattice_product(&p, &p2).unwrap();
        assert_eq!(p3, k.integral_lattice(5).scale(&q(5)));
        assert_eq!(p2, k.ideal_power(5, 2).unwrap());
        assert!(k.is_ambiguous(&p));
        assert!(matches!(build_kummer_cubic(7), Err(FieldError::BadM(7))));
    }

    #[test]
    fn non_stable_lattice_is_not_ambiguous() {
        let k = build_kummer_cubic(5).unwrap();
        let alg = k.algebra();
        let gens = ["1", "z", "a", "za", "a2", "za2"]
            .iter()
            .map(|n| {
                let x = alg.element(n).unwrap();
                if *n == "a" {
                    crate::linalg::scale_vec(&q(5), &x)
                } else {
                    x
                }
            })
            .collect();
        let b = Lattice::new(gens, 5).unwrap();
        assert!(!k.is_ambiguous(&b));
        assert!(k.is_ambiguous(&k.integral_lattice(5)));
    }

    #[test]
    fn cyclotomic_family() {
        for (n, d, e) in [(3, 2, 2), (4, 2, 2), (5, 4, 4), (7, 6, 6), (9, 6, 6)] {
            let c = build_cyclotomic(n).unwrap();
            assert_eq!(c.dim(), d);
            let p = c.primes()[0].p;
            let r = c.ramification_data(p).unwrap();
            assert_eq!((r.e, r.residue_degree, r.prime_count), (e, 1, 1));
            assert_eq!(c.inertia_subgroup(p).unwrap().len(), d);
        }
        assert!(matches!(build_cyclotomic(8), Err(FieldError::UnsupportedN(8))));
        let c7 = build_cyclotomic(7).unwrap();
        assert_eq!(c7.group().type_name(), "C_6");
        assert_eq!(build_cyclotomic(5).unwrap().group().type_name(), "C_4");
        assert!(c7.is_tame(7).unwrap());
        assert!(!build_cyclotomic(9).unwrap().is_tame(3).unwrap());
        // v(7) = 6 with uniformizer 1 - ζ
        let seven = crate::linalg::scale_vec(&q(7), c7.algebra().one());
        assert_eq!(c7.valuation(&seven, 7), Ok(6));
        // 2 is unramified in Q(ζ_7) and splits into two primes of degree 3
        let r = c7.ramification_data(2).unwrap();
        assert_eq!((r.e, r.residue_degree, r.prime_count, r.unramified), (1, 3, 2, true));
        assert_eq!(c7.inertia_subgroup(2).unwrap(), Subgroup::trivial());
        assert!(matches!(c7.valuation(&seven, 2), Err(FieldError::MultiplePrimes { p: 2 })));
        assert!(c7.inertia_subgroup(3).is_ok());
        assert!(matches!(c7.valuation(&vec![q(0); 6], 7), Err(FieldError::ZeroElement)));
    }

    #[test]
    fn trace_one() {
        let c3 = build_cyclotomic(3).unwrap();
        let all = Subgroup::from_elements(vec![0, 1]);
        // Tr(ζ) = -1
        assert_eq!(c3.trace(&c3.algebra().element("z").unwrap()), q(-1));
        for p in [2, 3, 5] {
            let x = c3.trace_one_element(&all, p).unwrap();
            assert_eq!(c3.trace(&x), q(1));
            assert!(c3.integral_lattice(p).contains(&x));
        }
        let c9 = build_cyclotomic(9).unwrap();
        let all9 = Subgroup::from_elements((0..6).collect());
        assert_eq!(c9.trace_one_element(&all9, 3), Err(FieldError::WildRamification { p: 3 }));
        // relative trace in the Kummer field down to Q(a)
        let k = build_kummer_cubic(5).unwrap();
        let gl = k.group().generate(&[k.group().element("t").unwrap()]);
        let x = k.trace_one_element(&gl, 5).unwrap();
        assert_eq!(k.trace_to_fixed(&x, &gl), k.algebra().one().to_vec());
    }

    #[test]
    fn files_roundtrip() {
        for ext in [build_kummer_cubic(5).unwrap(), build_cyclotomic(5).unwrap()] {
            let file = AlgebraFile::from_algebra(&ext);
            let back = AlgebraFile::from_toml(&file.to_toml()).unwrap().into_algebra().unwrap();
            assert_eq!(back.algebra(), ext.algebra());
            assert_eq!(back.primes(), ext.primes());
            let back = AlgebraFile::from_json(&file.to_json()).unwrap().into_algebra().unwrap();
            assert_eq!(back.integral_basis(), ext.integral_basis());
        }
    }

    #[test]
    fn file_errors_name_the_field() {
        let mut file = AlgebraFile::from_algebra(&build_cyclotomic(3).unwrap());
        file.automorphisms.remove("s2");
        let err = file.into_algebra().unwrap_err().to_string();
        assert!(err.contains("automorphisms"), "{err}");
    }
}
