//! Projective points, the skew coordinates `nu_m nu_{n-1} - nu_{m-1} nu_n`,
//! Veronese and Segre embeddings, and the check that the skew determinants
//! span all monomials of their degree.

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{normalize_projective, projectively_equal, rat, Rational, RationalMatrix};

use super::poly::{poly_det, Poly};

/// Homogeneous coordinates, not all zero. Equality is projective.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectivePoint(
    #[serde(serialize_with = "crate::exactla::ser::rational_vec")] Vec<Rational>,
);

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Self(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn normalized(&self) -> Vec<Rational> {
        normalize_projective(&self.0).expect("nonzero by construction")
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        projectively_equal(&self.0, &other.0)
    }
}

impl Eq for ProjectivePoint {}

/// `nu_m nu_{n-1} - nu_{m-1} nu_n` for `0 <= m < n <= len`, lexicographic in
/// `(m, n)`, with `nu_{-1} = nu_len = 0`.
pub fn skew_coords(nu: &ProjectivePoint) -> Vec<Rational> {
    let d = nu.len();
    let at = |i: i64| -> Rational {
        if i < 0 || i as usize >= d {
            Rational::zero()
        } else {
            nu.0[i as usize].clone()
        }
    };
    (0..=d as i64)
        .tuple_combinations()
        .map(|(m, n)| at(m) * at(n - 1) - at(m - 1) * at(n))
        .collect()
}

/// All degree-`degree` monomials, multisets of indices in lexicographic
/// order.
pub fn veronese(nu: &ProjectivePoint, degree: usize) -> ProjectivePoint {
    let coords = (0..nu.len())
        .combinations_with_replacement(degree)
        .map(|ix| ix.iter().fold(rat(1), |acc, &i| acc * &nu.0[i]))
        .collect();
    ProjectivePoint::new(coords).expect("a power of a nonzero coordinate survives")
}

/// All products `p_a q_b`, `a` outer.
pub fn segre(p: &ProjectivePoint, q: &ProjectivePoint) -> ProjectivePoint {
    let coords =
        p.0.iter()
            .flat_map(|a| q.0.iter().map(move |b| a * b))
            .collect();
    ProjectivePoint::new(coords).expect("product of two nonzero coordinates survives")
}

/// Outcome of [`monomial_span_check`].
#[derive(Debug, Clone, Serialize)]
pub struct MonomialSpan {
    pub d: usize,
    pub k: usize,
    /// Number of column tuples, one generator each.
    pub generators: usize,
    pub rank: usize,
    /// Dimension of the degree-`2k` forms in `d - k + 1` variables.
    pub expected: usize,
}

impl MonomialSpan {
    pub fn passed(&self) -> bool {
        self.rank == self.expected
    }
}

/// Expands, for every `0 <= m_1 < ... < m_{2k} <= d + k - 1`, the
/// determinant of `(nu_{m_i - j})`, `0 <= i, j < 2k`, in the variables
/// `nu_0, ..., nu_{d-k}` and compares the rank of the coefficient vectors
/// with the number of degree-`2k` monomials.
pub fn monomial_span_check(d: usize, k: usize) -> Result<MonomialSpan> {
    if k == 0 || k > d {
        return Err(Error::BadK { k, min: 1, max: d });
    }
    if d - k > 3 || k > 2 {
        return Err(Error::TooLarge(format!(
            "symbolic expansion limited to d - k <= 3 and k <= 2 (got d = {d}, k = {k})"
        )));
    }
    let nvars = d - k + 1;
    let size = 2 * k;
    let monomials: Vec<Vec<u32>> = (0..nvars)
        .combinations_with_replacement(size)
        .map(|ix| {
            let mut e = vec![0u32; nvars];
            for i in ix {
                e[i] += 1;
            }
            e
        })
        .collect();
    let mut rows = Vec::new();
    for m in (0..d + k).combinations(size) {
        let entries: Vec<Vec<Poly>> = m
            .iter()
            .map(|&mi| {
                (0..size)
                    .map(|j| match mi.checked_sub(j).filter(|&v| v < nvars) {
                        Some(v) => Poly::var(nvars, v),
                        None => Poly::zero(nvars),
                    })
                    .collect()
            })
            .collect();
        let det = poly_det(&entries, nvars);
        rows.push(monomials.iter().map(|e| det.coeff(e)).collect::<Vec<_>>());
    }
    let generators = rows.len();
    let rank = RationalMatrix::from_rows(rows)
        .map(|m| m.rank())
        .unwrap_or(0);
    Ok(MonomialSpan {
        d,
        k,
        generators,
        rank,
        expected: monomials.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64(c).unwrap()
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(
            ProjectivePoint::from_i64(&[0, 0]).unwrap_err(),
            Error::ZeroVector
        );
        assert_eq!(pt(&[1, 2]), pt(&[-2, -4]));
        assert_ne!(pt(&[1, 2]), pt(&[2, 1]));
    }

    #[test]
    fn skew_examples() {
        assert_eq!(skew_coords(&pt(&[1, 0])), vec![rat(1), rat(0), rat(0)]);
        assert_eq!(skew_coords(&pt(&[1])), vec![rat(1)]);
        let nu = pt(&[2, -3, 5]);
        let neg = pt(&[-2, 3, -5]);
        assert_eq!(skew_coords(&nu), skew_coords(&neg));
    }

    #[test]
    fn veronese_and_segre_examples() {
        assert_eq!(
            veronese(&pt(&[1, 0]), 2).coords(),
            &[rat(1), rat(0), rat(0)]
        );
        assert_eq!(
            veronese(&pt(&[1, 1]), 2).coords(),
            &[rat(1), rat(1), rat(1)]
        );
        assert_eq!(veronese(&pt(&[1, 2, 3]), 2).len(), 6);
        assert_eq!(
            segre(&pt(&[1, 0]), &pt(&[0, 1])).coords(),
            &[rat(0), rat(1), rat(0), rat(0)]
        );
    }

    #[test]
    fn span_ranks() {
        for (d, k, rank) in [(2, 1, 3), (3, 1, 6), (4, 1, 10), (3, 2, 5), (4, 2, 15)] {
            let s = monomial_span_check(d, k).unwrap();
            assert_eq!(s.rank, rank, "d = {d}, k = {k}");
            assert!(s.passed());
        }
    }

    #[test]
    fn span_limits() {
        assert!(matches!(monomial_span_check(5, 1), Err(Error::TooLarge(_))));
        assert!(matches!(monomial_span_check(6, 3), Err(Error::TooLarge(_))));
        assert!(matches!(monomial_span_check(2, 3), Err(Error::BadK { .. })));
    }
}
