//! Exact real-root counting by Sturm sequences over ℤ.

use rug::Integer;

use crate::exact_poly::{ExactPoly, Poly};

/// Divide by the (positive) content, keeping the sign.
fn strip_content(p: Poly<Integer>) -> Poly<Integer> {
    let c = p.content();
    if c <= 1 {
        return p;
    }
    p.map(|x| Integer::from(x.div_exact_ref(&c)))
}

/// Sturm sequence `p, p', −rem(p, p'), …` with every remainder made
/// sign-correct: the pseudo-remainder carries the factor `lc^δ`, whose sign
/// is undone before negation.
pub fn sturm_sequence(p: &Poly<Integer>) -> Vec<Poly<Integer>> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let (a, b) = (&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if b.is_constant() {
            break;
        }
        let delta = a.degree().expect("nonzero") - b.degree().expect("nonzero") + 1;
        let mut r = a.pseudo_rem(b).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        let negative_mult = b.lead().expect("nonzero").cmp0().is_lt() && delta % 2 == 1;
        if !negative_mult {
            r = r.neg();
        }
        seq.push(strip_content(r));
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_infinity(p: &Poly<Integer>, negative: bool) -> i32 {
    let lead = p.lead().map(|l| l.cmp0() as i32).unwrap_or(0);
    let odd = p.degree().unwrap_or(0) % 2 == 1;
    if negative && odd {
        -lead
    } else {
        lead
    }
}

/// Number of distinct real roots of an integer polynomial.
pub fn count_real_roots_poly(p: &Poly<Integer>) -> usize {
    if p.is_zero() {
        return 0;
    }
    let seq = sturm_sequence(p);
    let minus = sign_changes(seq.iter().map(|q| sign_at_infinity(q, true)));
    let plus = sign_changes(seq.iter().map(|q| sign_at_infinity(q, false)));
    minus - plus
}

/// Number of distinct real roots of `p` in its original variable. The scale
/// is real and nonzero, so the count in the stored variable is the same.
pub fn count_real_roots(p: &ExactPoly) -> usize {
    count_real_roots_poly(&p.poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[-2, 0, 1])), 2);
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[2, 0, 1])), 0);
        // (x − 1)(x − 2)(x − 3)
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[-6, 11, -6, 1])), 3);
        // leading coefficient negative: −(x − 1)(x² + 1)
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[1, -1, 1, -1])), 1);
        // repeated root counted once
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[1, -2, 1])), 1);
        assert_eq!(count_real_roots_poly(&Poly::from_i64s(&[3])), 0);
    }
}
