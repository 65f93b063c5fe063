//! Squarefreeness certificates.
//!
//! For a monic `p ∈ ℤ[x]` and a prime `q` not dividing `deg p`, a constant
//! `gcd(p mod q, p' mod q)` proves `gcd(p, p') = 1` over ℚ: any common factor
//! over ℤ can be taken monic and survives reduction with its degree intact.
//! The exact primitive remainder sequence is the fallback.

use rug::Integer;

use crate::exact_poly::Poly;

const PRIMES: [u64; 4] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847, 1_000_000_007, 998_244_353];

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    acc
}

fn reduce(p: &Poly<Integer>, q: u64) -> Vec<u64> {
    let qi = Integer::from(q);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| Integer::from(c.modulo_ref(&qi)).to_u64().expect("residue fits"))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Degree of `gcd(a, b)` over `𝔽_q`; `None` if both are zero.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Option<usize> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = pow_mod(*b.last().expect("nonzero"), q - 2, q);
        let db = b.len() - 1;
        while a.len() >= b.len() {
            let lead = *a.last().expect("nonzero");
            let f = mul_mod(lead, inv, q);
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                let t = mul_mod(f, *bj, q);
                a[shift + j] = (a[shift + j] + q - t) % q;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        debug_assert!(a.len() <= db);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().checked_sub(1)
}

/// `true` iff `p` has no repeated factor over ℚ. Constants count as squarefree.
pub fn is_squarefree(p: &Poly<Integer>) -> bool {
    let Some(d) = p.degree() else { return false };
    if d <= 1 {
        return true;
    }
    let dp = p.derivative();
    if p.lead().is_some_and(|l| *l == 1 || *l == -1) {
        for q in PRIMES {
            if (d as u64).is_multiple_of(q) {
                continue;
            }
            if gcd_degree_mod(reduce(p, q), reduce(&dp, q), q) == Some(0) {
                return true;
            }
        }
    }
    p.gcd(&dp).is_constant()
}
