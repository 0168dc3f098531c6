//! Exact rationals and the p-local helpers used throughout the crate.
//!
//! Everything is built on [`BigRational`]; the only "p-adic" notion we need is
//! the localization of the integers at a prime `p`, i.e. rationals whose
//! reduced denominator is prime to `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use std::str::FromStr;

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

/// Parses `"a"` or `"a/b"`. Whitespace around the parts is ignored.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Q::from_integer),
    }
}

/// Canonical exact string: `"n"` for integers, `"n/d"` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn big(p: u64) -> BigInt {
    BigInt::from(p)
}

/// Multiplicity of `p` in a nonzero integer.
fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let bp = big(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (d, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return k;
        }
        n = d;
        k += 1;
    }
}

/// p-adic valuation; `None` for zero.
pub fn vp(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
    }
}

pub fn is_p_integral(x: &Q, p: u64) -> bool {
    !(x.denom() % big(p)).is_zero()
}

pub fn pow_p(p: u64, k: i64) -> Q {
    let base = Q::from_integer(big(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Image of a p-integral rational in `F_p`.
pub fn residue(x: &Q, p: u64) -> u64 {
    debug_assert!(is_p_integral(x, p));
    let bp = big(p);
    let n = x.numer().mod_floor(&bp);
    let d = x.denom().mod_floor(&bp);
    let r = (n * mod_inverse(&d, &bp)).mod_floor(&bp);
    r.to_u64().expect("residue fits in u64")
}

/// Canonical representative of `x` modulo `p^k Z_(p)`: the unique element of
/// `Z[1/p]` in `[0, p^k)` congruent to `x`.
pub fn reduce_mod_pk(x: &Q, p: u64, k: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    // Shift so that everything is p-integral, reduce, shift back.
    let m = vp_int(x.denom(), p).max(0);
    let y = x * pow_p(p, m);
    let e = k + m;
    if e <= 0 {
        return Q::zero();
    }
    let modulus = num_traits::pow(big(p), e as usize);
    let n = y.numer().mod_floor(&modulus);
    let d = y.denom().mod_floor(&modulus);
    let r = (n * mod_inverse(&d, &modulus)).mod_floor(&modulus);
    Q::from_integer(r) * pow_p(p, -m)
}

/// `x / p^{v_p(x)}`, a p-adic unit.
pub fn unit_part(x: &Q, p: u64) -> Q {
    let v = vp(x, p).expect("unit part of zero");
    x * pow_p(p, -v)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Splits `n = p^r * m` with `p ∤ m`.
pub fn split_p_part(n: u64, p: u64) -> (u32, u64) {
    let mut m = n;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (r, m)
}

/// Rank of a matrix over `F_p`; destroys its argument.
pub fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p);
        for c in col..ncols {
            rows[rank][c] = rows[rank][c] * inv % p;
        }
        for r in 0..nrows {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in col..ncols {
                    rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let r = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(r.gcd, 1);
    r.x.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp(&qf(50, 3), 5), Some(2));
        assert_eq!(vp(&qf(3, 50), 5), Some(-2));
        assert_eq!(vp(&q(0), 5), None);
        assert!(is_p_integral(&qf(7, 3), 5));
        assert!(!is_p_integral(&qf(7, 10), 5));
    }

    #[test]
    fn residues() {
        assert_eq!(residue(&qf(1, 2), 5), 3);
        assert_eq!(residue(&q(-1), 7), 6);
    }

    #[test]
    fn canonical_reduction() {
        // 1/2 mod 5 -> 3
        assert_eq!(reduce_mod_pk(&qf(1, 2), 5, 1), q(3));
        // 1/5 mod 5: already in [0,5) with p-power denominator
        assert_eq!(reduce_mod_pk(&qf(1, 5), 5, 1), qf(1, 5));
        // 7/5 mod 1 (k = 0) -> 2/5
        assert_eq!(reduce_mod_pk(&qf(7, 5), 5, 0), qf(2, 5));
        // anything mod p^{-1} with integral part only vanishes
        assert_eq!(reduce_mod_pk(&q(4), 5, -1), q(0));
        let r = reduce_mod_pk(&qf(-3, 50), 5, 1);
        assert!(r >= q(0) && r < q(5));
        assert!(is_p_integral(&((qf(-3, 50) - r) / q(5)), 5));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q(" -3/6 "), Some(qf(-1, 2)));
        assert_eq!(fmt_q(&qf(-1, 2)), "-1/2");
        assert_eq!(fmt_q(&q(4)), "4");
        assert_eq!(parse_q("1/0"), None);
    }

    #[test]
    fn rank_over_fp() {
        let mut m = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(rank_mod_p(&mut m, 5), 1);
        let mut m = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(rank_mod_p(&mut m, 3), 1);
        let mut m = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(rank_mod_p(&mut m, 2), 1);
        let mut m = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(rank_mod_p(&mut m, 5), 2);
    }
}
