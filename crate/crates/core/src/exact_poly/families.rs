//! Bilinear recursions for `H_{m,n}` and `Q_{m,n}` with a shared memo table.
//!
//! In the scaled variables the recursions read
//!
//! ```text
//! 2m·h[m+1,n]·h[m−1,n] =  4(h h'' − h'²) + 2m·h²
//! 2n·h[m,n+1]·h[m,n−1] = −4(h h'' − h'²) + 2n·h²
//!    q[m+1,n]·q[m−1,n] = 9(q q'' − q'²) + (w² + 3(2m+n−1))·q²
//!    q[m,n+1]·q[m,n−1] = 9(q q'' − q'²) + (w² + 3(1−m−2n))·q²
//! ```
//!
//! with seeds h[0,n] = h[m,0] = 1, h[1,1] = w and q[0,0] = q[1,0] = q[0,1] = 1,
//! q[1,1] = w. The n-direction Okamoto step is sometimes quoted with `+q'²`;
//! that version is not exact (it already gives q[1,2] = (w² − 3)²), whereas
//! the `−q'²` form reproduces both symmetries of the family.
//!
//! Okamoto traversal: rows n = 0 and n = 1 are filled in the m-direction from
//! the seeds (forwards for m ≥ 2, backwards for m ≤ −1); every other entry is
//! reached from its own column (m fixed) in the n-direction, again forwards or
//! backwards. Each divisor is checked to be nonzero before dividing.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::{Integer, Rational};

use super::{okamoto_degree, ExactPoly, Poly, PolyError, PolyFamily, QSqrt2};

/// Default soft cap on `m·n` for Hermite polynomials.
pub const DEFAULT_HERMITE_CAP: i64 = 4000;
/// Default cap on `|m|` and `|n|` for Okamoto polynomials.
pub const DEFAULT_OKAMOTO_CAP: i64 = 40;

/// Order in which the Hermite grid is traversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteOrder {
    /// Walk `H_{k,1}` up to `k = m` in the m-direction, then step in n at fixed m.
    MFirst,
    /// Walk `H_{1,k}` up to `k = n` in the n-direction, then step in m at fixed n.
    NFirst,
}

type Key = (PolyFamily, i64, i64);

/// Memoised table of special polynomials. Readers share a lock; insertions
/// are serialised.
#[derive(Debug)]
pub struct PolyTable {
    entries: RwLock<HashMap<Key, Arc<ExactPoly>>>,
    hermite_cap: i64,
    okamoto_cap: i64,
}

impl Default for PolyTable {
    fn default() -> Self {
        Self::with_caps(DEFAULT_HERMITE_CAP, DEFAULT_OKAMOTO_CAP)
    }
}

/// `H_{m,n}` from the process-wide table.
pub fn gen_hermite(m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
    PolyTable::global().hermite(m, n)
}

/// `Q_{m,n}` from the process-wide table.
pub fn gen_okamoto(m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
    PolyTable::global().okamoto(m, n)
}

fn hermite_scale() -> QSqrt2 {
    QSqrt2::rational(Rational::from((1, 2)))
}

fn okamoto_scale() -> QSqrt2 {
    QSqrt2::new(0, Rational::from((1, 2)))
}

fn wrap(family: PolyFamily, m: i64, n: i64, p: Poly<Integer>) -> Arc<ExactPoly> {
    let scale = match family {
        PolyFamily::Hermite => hermite_scale(),
        PolyFamily::Okamoto => okamoto_scale(),
    };
    Arc::new(ExactPoly::new(p, scale).with_source(family, m, n))
}

/// `p p'' − p'²`.
fn wronskian(p: &Poly<Integer>) -> Poly<Integer> {
    let d1 = p.derivative();
    p.mul(&d1.derivative()).sub(&d1.square())
}

fn checked_div(
    num: &Poly<Integer>,
    den: &Poly<Integer>,
    family: PolyFamily,
    m: i64,
    n: i64,
) -> Result<Poly<Integer>, PolyError> {
    if den.is_zero() {
        return Err(PolyError::ZeroDivisorInRecursion { family, m, n });
    }
    num.exact_div(den)
}

/// Right-hand side of the Hermite m-step at `(m, ·)`: `4(hh''−h'²) + 2m h²`.
fn hermite_m_rhs(h: &Poly<Integer>, m: i64) -> Poly<Integer> {
    let minus = wronskian(h);
    minus.scale_i64(4).add(&h.square().scale_i64(2 * m))
}

/// Right-hand side of the Hermite n-step at `(·, n)`: `−4(hh''−h'²) + 2n h²`.
fn hermite_n_rhs(h: &Poly<Integer>, n: i64) -> Poly<Integer> {
    let minus = wronskian(h);
    minus.scale_i64(-4).add(&h.square().scale_i64(2 * n))
}

fn okamoto_m_rhs(q: &Poly<Integer>, m: i64, n: i64) -> Poly<Integer> {
    let minus = wronskian(q);
    let weight = Poly::from_i64s(&[3 * (2 * m + n - 1), 0, 1]);
    minus.scale_i64(9).add(&weight.mul(&q.square()))
}

fn okamoto_n_rhs(q: &Poly<Integer>, m: i64, n: i64) -> Poly<Integer> {
    let minus = wronskian(q);
    let weight = Poly::from_i64s(&[3 * (1 - m - 2 * n), 0, 1]);
    minus.scale_i64(9).add(&weight.mul(&q.square()))
}

/// Walk a Hermite line from the two seeds `prev = P_0`, `cur = P_1`
/// up to index `target`, returning `[P_0, …, P_target]`.
fn hermite_line(
    target: i64,
    seed1: Poly<Integer>,
    rhs: impl Fn(&Poly<Integer>, i64) -> Poly<Integer>,
    index: impl Fn(i64) -> (i64, i64),
) -> Result<Vec<Poly<Integer>>, PolyError> {
    let mut line = vec![Poly::one(), seed1];
    for k in 1..target {
        let cur = &line[k as usize];
        let prev = &line[k as usize - 1];
        let num = rhs(cur, k);
        let den = prev.scale_i64(2 * k);
        let (m, n) = index(k + 1);
        let next = checked_div(&num, &den, PolyFamily::Hermite, m, n)?;
        line.push(next);
    }
    line.truncate(target.max(0) as usize + 1);
    Ok(line)
}

impl PolyTable {
    pub fn with_caps(hermite_cap: i64, okamoto_cap: i64) -> Self {
        Self { entries: RwLock::new(HashMap::new()), hermite_cap, okamoto_cap }
    }

    pub fn global() -> &'static PolyTable {
        static TABLE: OnceLock<PolyTable> = OnceLock::new();
        TABLE.get_or_init(PolyTable::default)
    }

    fn lookup(&self, key: Key) -> Option<Arc<ExactPoly>> {
        self.entries.read().expect("poly table poisoned").get(&key).cloned()
    }

    fn insert(&self, key: Key, poly: Arc<ExactPoly>) -> Arc<ExactPoly> {
        let mut guard = self.entries.write().expect("poly table poisoned");
        guard.entry(key).or_insert(poly).clone()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("poly table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `H_{m,n}` stored as `h(w) = H_{m,n}(w/2)`.
    pub fn hermite(&self, m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
        self.check_hermite(m, n)?;
        let key = (PolyFamily::Hermite, m, n);
        if let Some(p) = self.lookup(key) {
            return Ok(p);
        }
        let order = if m >= n { HermiteOrder::MFirst } else { HermiteOrder::NFirst };
        let (line, fixed_first) = self.hermite_path(m, n, order)?;
        // cache the final line; everything on it is a valid entry
        let mut result = None;
        for (k, p) in line.into_iter().enumerate() {
            let (mm, nn) = match order {
                HermiteOrder::MFirst => (fixed_first, k as i64),
                HermiteOrder::NFirst => (k as i64, fixed_first),
            };
            let entry = self.insert((PolyFamily::Hermite, mm, nn), wrap(PolyFamily::Hermite, mm, nn, p));
            if (mm, nn) == (m, n) {
                result = Some(entry);
            }
        }
        Ok(result.expect("target lies on the computed line"))
    }

    fn check_hermite(&self, m: i64, n: i64) -> Result<(), PolyError> {
        if m < 0 || n < 0 {
            return Err(PolyError::InvalidIndex { family: PolyFamily::Hermite, m, n });
        }
        if m.saturating_mul(n) > self.hermite_cap {
            return Err(PolyError::CapExceeded { family: PolyFamily::Hermite, m, n });
        }
        Ok(())
    }

    /// `H_{m,n}` computed without the memo table along the given traversal.
    pub fn hermite_uncached(&self, m: i64, n: i64, order: HermiteOrder) -> Result<ExactPoly, PolyError> {
        self.check_hermite(m, n)?;
        let (line, _) = self.hermite_path(m, n, order)?;
        let last = line.into_iter().last().expect("nonempty line");
        Ok(Arc::unwrap_or_clone(wrap(PolyFamily::Hermite, m, n, last)))
    }

    /// Returns the final line of the traversal (indexed by the second
    /// direction) and the fixed index of that line.
    fn hermite_path(&self, m: i64, n: i64, order: HermiteOrder) -> Result<(Vec<Poly<Integer>>, i64), PolyError> {
        let w = Poly::<Integer>::x();
        match order {
            HermiteOrder::MFirst => {
                // H_{k,1}, k = 0..=m, then H_{m,k}, k = 0..=n
                let h_m1 = if m == 0 {
                    Poly::one()
                } else {
                    hermite_line(m, w, hermite_m_rhs, |k| (k, 1))?.pop().expect("nonempty")
                };
                let line = if m == 0 {
                    vec![Poly::one(); n as usize + 1]
                } else {
                    hermite_line(n, h_m1, hermite_n_rhs, |k| (m, k))?
                };
                Ok((line, m))
            }
            HermiteOrder::NFirst => {
                let h_1n = if n == 0 {
                    Poly::one()
                } else {
                    hermite_line(n, w, hermite_n_rhs, |k| (1, k))?.pop().expect("nonempty")
                };
                let line = if n == 0 {
                    vec![Poly::one(); m as usize + 1]
                } else {
                    hermite_line(m, h_1n, hermite_m_rhs, |k| (k, n))?
                };
                Ok((line, n))
            }
        }
    }

    /// `Q_{m,n}` stored as `q(w) = Q_{m,n}(w/√2)`.
    pub fn okamoto(&self, m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
        if m.abs() > self.okamoto_cap || n.abs() > self.okamoto_cap {
            return Err(PolyError::CapExceeded { family: PolyFamily::Okamoto, m, n });
        }
        let key = (PolyFamily::Okamoto, m, n);
        if let Some(p) = self.lookup(key) {
            return Ok(p);
        }
        if n == 0 || n == 1 {
            return self.okamoto_row(m, n);
        }
        // column at fixed m, seeded from rows 0 and 1
        let q0 = self.okamoto(m, 0)?;
        let q1 = self.okamoto(m, 1)?;
        let (mut prev, mut cur) = (q0.poly.clone(), q1.poly.clone());
        let mut result = None;
        if n >= 2 {
            for k in 1..n {
                let next = checked_div(&okamoto_n_rhs(&cur, m, k), &prev, PolyFamily::Okamoto, m, k + 1)?;
                let entry = self.insert((PolyFamily::Okamoto, m, k + 1), wrap(PolyFamily::Okamoto, m, k + 1, next.clone()));
                prev = cur;
                cur = next;
                result = Some(entry);
            }
        } else {
            // walk downwards: q[m,k−1] = rhs(q[m,k]) / q[m,k+1]
            let (mut upper, mut here) = (q1.poly.clone(), q0.poly.clone());
            for k in (n + 1..=0).rev() {
                let next = checked_div(&okamoto_n_rhs(&here, m, k), &upper, PolyFamily::Okamoto, m, k - 1)?;
                let entry = self.insert((PolyFamily::Okamoto, m, k - 1), wrap(PolyFamily::Okamoto, m, k - 1, next.clone()));
                upper = here;
                here = next;
                result = Some(entry);
            }
        }
        Ok(result.expect("|n| ≥ 1 step taken"))
    }

    fn okamoto_row(&self, m: i64, n: i64) -> Result<Arc<ExactPoly>, PolyError> {
        debug_assert!(n == 0 || n == 1);
        let seed = |mm: i64| -> Poly<Integer> {
            if mm == 1 && n == 1 {
                Poly::x()
            } else {
                Poly::one()
            }
        };
        if m == 0 || m == 1 {
            return Ok(self.insert((PolyFamily::Okamoto, m, n), wrap(PolyFamily::Okamoto, m, n, seed(m))));
        }
        let mut result = None;
        if m >= 2 {
            let (mut prev, mut cur) = (seed(0), seed(1));
            for k in 1..m {
                let next = checked_div(&okamoto_m_rhs(&cur, k, n), &prev, PolyFamily::Okamoto, k + 1, n)?;
                let entry = self.insert((PolyFamily::Okamoto, k + 1, n), wrap(PolyFamily::Okamoto, k + 1, n, next.clone()));
                prev = cur;
                cur = next;
                result = Some(entry);
            }
        } else {
            let (mut upper, mut here) = (seed(1), seed(0));
            for k in (m + 1..=0).rev() {
                let next = checked_div(&okamoto_m_rhs(&here, k, n), &upper, PolyFamily::Okamoto, k - 1, n)?;
                let entry = self.insert((PolyFamily::Okamoto, k - 1, n), wrap(PolyFamily::Okamoto, k - 1, n, next.clone()));
                upper = here;
                here = next;
                result = Some(entry);
            }
        }
        Ok(result.expect("row step taken"))
    }
}

/// Expected degree of a family member.
pub fn expected_degree(family: PolyFamily, m: i64, n: i64) -> i64 {
    match family {
        PolyFamily::Hermite => m * n,
        PolyFamily::Okamoto => okamoto_degree(m, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::{poly_gcd, Ring};

    fn z_coeffs(p: &ExactPoly) -> Vec<i64> {
        p.to_integer_poly().unwrap().coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn hermite_seeds_and_small_members() {
        let t = PolyTable::default();
        assert_eq!(z_coeffs(&t.hermite(0, 0).unwrap()), vec![1]);
        assert_eq!(z_coeffs(&t.hermite(1, 1).unwrap()), vec![0, 2]);
        // Rodrigues: H_2(z) = 4z² − 2
        assert_eq!(z_coeffs(&t.hermite(2, 1).unwrap()), vec![-2, 0, 4]);
        // symmetry applied to the previous line: H_{1,2}(z) = 4z² + 2
        assert_eq!(z_coeffs(&t.hermite(1, 2).unwrap()), vec![2, 0, 4]);
        assert_eq!(z_coeffs(&t.hermite(0, 7).unwrap()), vec![1]);
    }

    #[test]
    fn hermite_rows_are_classical_hermite() {
        // H_{m,1} is the physicists' Hermite polynomial; H_5 = 32z⁵ − 160z³ + 120z.
        let t = PolyTable::default();
        assert_eq!(z_coeffs(&t.hermite(5, 1).unwrap()), vec![0, 120, 0, -160, 0, 32]);
    }

    #[test]
    fn hermite_cap_and_negative_indices() {
        let t = PolyTable::with_caps(10, 5);
        assert!(matches!(t.hermite(4, 3), Err(PolyError::CapExceeded { .. })));
        assert!(matches!(t.hermite(-1, 3), Err(PolyError::InvalidIndex { .. })));
        assert!(matches!(t.okamoto(6, 0), Err(PolyError::CapExceeded { .. })));
    }

    #[test]
    fn okamoto_seeds_and_degrees() {
        let t = PolyTable::default();
        assert_eq!(t.okamoto(0, 0).unwrap().poly, Poly::one());
        assert_eq!(t.okamoto(1, 1).unwrap().to_sqrt2_poly(), Poly::new(vec![QSqrt2::zero(), QSqrt2::sqrt2()]));
        assert_eq!(t.okamoto(2, 2).unwrap().degree(), Some(8));
        assert_eq!(t.okamoto(2, 0).unwrap().poly, Poly::from_i64s(&[3, 0, 1]));
        assert_eq!(t.okamoto(-1, 0).unwrap().poly, Poly::from_i64s(&[-3, 0, 1]));
        assert_eq!(t.okamoto(-2, 1).unwrap().poly, t.okamoto(2, -2).unwrap().poly);
    }

    #[test]
    fn memo_table_reuses_entries() {
        let t = PolyTable::default();
        let a = t.hermite(6, 3).unwrap();
        let before = t.len();
        let b = t.hermite(6, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(t.len(), before);
    }

    #[test]
    fn hermite_is_squarefree_small() {
        let t = PolyTable::default();
        let h = t.hermite(3, 2).unwrap();
        let d = ExactPoly::new(h.poly.derivative(), h.scale.clone());
        assert_eq!(poly_gcd(&h, &d).unwrap().poly, Poly::one());
    }

    #[test]
    fn degrees_follow_formula() {
        let t = PolyTable::default();
        for m in -3..=3 {
            for n in -3..=3 {
                let q = t.okamoto(m, n).unwrap();
                assert_eq!(q.degree().unwrap() as i64, expected_degree(PolyFamily::Okamoto, m, n), "Q_{m},{n}");
                assert!(q.poly.is_monic());
            }
        }
    }
}
