//! The corner expansion: a `2 x 2` determinant added at the corner of a
//! `6 x 6` minor of `A_3` gives an `8 x 8` determinant that can be rewritten
//! so its first four rows expand into products of two `4 x 4` minors.

use num_traits::Zero;
use serde::Serialize;

use crate::exactla::{Rational, RationalMatrix};
use crate::forms::FormTuple;
use crate::sample::Sampler;

/// Degree and form count used by the seeded check.
pub const CORNER_D: usize = 4;
pub const CORNER_R: usize = 2;

#[derive(Debug, Clone, Serialize)]
pub struct CornerExpansion {
    pub rows: [usize; 6],
    pub m: [usize; 6],
    pub n: [usize; 2],
    /// Block-diagonal `8 x 8` determinant.
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub lhs: Rational,
    /// Rearranged `8 x 8` determinant.
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub rhs: Rational,
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub det6: Rational,
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub det2: Rational,
}

impl CornerExpansion {
    pub fn sides_agree(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn lhs_factors(&self) -> bool {
        self.lhs == &self.det6 * &self.det2
    }

    pub fn passed(&self) -> bool {
        self.sides_agree() && self.lhs_factors()
    }
}

/// Builds both `8 x 8` matrices from a coefficient lookup `s(i, j)` (zero
/// outside `0..=d`) and compares their determinants.
///
/// Rows `rows[0..2]`, `rows[2..4]`, `rows[4..6]` are the form indices taken
/// from blocks 0, 1, 2; `m` are columns of `A_3`, `n` columns of `A_1`.
pub fn corner_expansion<S>(s: S, rows: [usize; 6], m: [usize; 6], n: [usize; 2]) -> CornerExpansion
where
    S: Fn(usize, i64) -> Rational,
{
    let m_i = m.map(|x| x as i64);
    let n_i = n.map(|x| x as i64);
    let top = |a: usize| -> Vec<Rational> {
        let shift = (a / 2) as i64;
        m_i.iter().map(|&c| s(rows[a], c - shift)).collect()
    };
    let zeros = || vec![Rational::zero(); 2];
    let corner =
        |i: usize, shift: i64| -> Vec<Rational> { n_i.iter().map(|&c| s(i, c - shift)).collect() };

    let mut lhs_rows = Vec::with_capacity(8);
    let mut rhs_rows = Vec::with_capacity(8);
    for (a, &row) in rows.iter().enumerate() {
        let left = top(a);
        lhs_rows.push([left.clone(), zeros()].concat());
        let right = if a >= 4 { corner(row, 1) } else { zeros() };
        rhs_rows.push([left, right].concat());
    }
    for (a, &row) in rows.iter().enumerate().take(4).skip(2) {
        lhs_rows.push([vec![Rational::zero(); 6], corner(row, 0)].concat());
        rhs_rows.push([top(a), corner(row, 0)].concat());
    }
    let lhs_m = RationalMatrix::from_rows(lhs_rows).expect("8 rows of 8");
    let rhs_m = RationalMatrix::from_rows(rhs_rows).expect("8 rows of 8");
    let six: Vec<usize> = (0..6).collect();
    let det6 = lhs_m.select(&six, &six).det().expect("square");
    let det2 = lhs_m.select(&[6, 7], &[6, 7]).det().expect("square");
    CornerExpansion {
        rows,
        m,
        n,
        lhs: lhs_m.det().expect("square"),
        rhs: rhs_m.det().expect("square"),
        det6,
        det2,
    }
}

/// [`corner_expansion`] on the coefficients of `t`.
pub fn corner_expansion_for(
    t: &FormTuple,
    rows: [usize; 6],
    m: [usize; 6],
    n: [usize; 2],
) -> CornerExpansion {
    corner_expansion(|i, j| t.coeff(i, j), rows, m, n)
}

/// One seeded instance at `d = 4`, `r = 2`: random rational coefficients,
/// random rows and random increasing columns.
pub fn corner_identity_check(seed: u64) -> CornerExpansion {
    let mut sampler = Sampler::new(seed);
    let forms = (0..=CORNER_R)
        .map(|_| {
            crate::forms::BinaryForm::new((0..=CORNER_D).map(|_| sampler.rational(5)).collect())
        })
        .collect();
    let t = FormTuple::new(forms).unwrap_or_else(|_| {
        FormTuple::new(vec![
            crate::forms::BinaryForm::monomial(CORNER_D, 0);
            CORNER_R + 1
        ])
        .expect("nonzero")
    });
    let rows = [(); 6].map(|_| sampler.below(CORNER_R + 1));
    let m = increasing(&mut sampler, CORNER_D + 3);
    let n = increasing(&mut sampler, CORNER_D + 1);
    corner_expansion_for(&t, rows, m, n)
}

/// Uniform increasing `N`-subset of `0..width`.
fn increasing<const N: usize>(sampler: &mut Sampler, width: usize) -> [usize; N] {
    let mut pool: Vec<usize> = (0..width).collect();
    let mut chosen = Vec::with_capacity(N);
    for _ in 0..N {
        chosen.push(pool.remove(sampler.below(pool.len())));
    }
    chosen.sort_unstable();
    chosen.try_into().expect("N elements")
}
