//! Block minors of `A_s`, the coordinates of the first two blow-ups, and the
//! six-term relations.

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{Rational, RationalMatrix};
use crate::forms::FormTuple;
use crate::sylvester::{build_unchecked, in_stratum};

/// A `2s x 2s` minor of `A_s` with two rows in every block.
///
/// `rows[2b]` and `rows[2b + 1]` are the form indices chosen in block `b`;
/// `cols` are 0-based columns of `A_s`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || !rows.len().is_multiple_of(2) || rows.len() != cols.len() {
            return Err(Error::BadIndexSet(format!(
                "{} rows and {} columns; expected 2s of each",
                rows.len(),
                cols.len()
            )));
        }
        if rows.chunks(2).any(|p| p[0] >= p[1]) {
            return Err(Error::BadIndexSet(format!(
                "rows {rows:?} need i < i' within every block"
            )));
        }
        if cols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndexSet(format!(
                "columns {cols:?} not strictly increasing"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Half-size `s`: the minor is `2s x 2s` and lives in `A_s`.
    pub fn s(&self) -> usize {
        self.rows.len() / 2
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Block of the `a`-th row.
    pub fn block(&self, a: usize) -> usize {
        a / 2
    }

    /// Row positions in `A_s` for a tuple with `r + 1` forms.
    pub fn matrix_rows(&self, r: usize) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .map(|(a, &i)| (a / 2) * (r + 1) + i)
            .collect()
    }

    fn check_bounds(&self, d: usize, r: usize) -> Result<()> {
        if let Some(&i) = self.rows.iter().find(|&&i| i > r) {
            return Err(Error::BadIndexSet(format!(
                "form index {i} exceeds r = {r}"
            )));
        }
        let width = d + self.s();
        if let Some(&m) = self.cols.iter().find(|&&m| m >= width) {
            return Err(Error::BadIndexSet(format!("column {m} outside 0..{width}")));
        }
        Ok(())
    }

    /// The minor's value on `A_s(t)`.
    pub fn value(&self, t: &FormTuple) -> Result<Rational> {
        self.check_bounds(t.degree(), t.r())?;
        let a = build_unchecked(t, self.s());
        a.matrix()
            .select(&self.matrix_rows(t.r()), &self.cols)
            .det()
    }

    /// The same minor read off an already built `A_s`.
    pub(crate) fn value_in(&self, a: &RationalMatrix, r: usize) -> Rational {
        a.select(&self.matrix_rows(r), &self.cols)
            .det()
            .expect("selection is square")
    }
}

/// Row choices `i < i'` for each of `s` blocks, in lexicographic order.
pub fn block_row_choices(s: usize, r: usize) -> Vec<Vec<usize>> {
    let pairs: Vec<(usize, usize)> = (0..=r).tuple_combinations().collect();
    (0..s)
        .map(|_| pairs.iter().copied())
        .multi_cartesian_product()
        .map(|ps| ps.into_iter().flat_map(|(a, b)| [a, b]).collect())
        .collect()
}

/// All minor indices of half-size `s` for degree `d` and `r + 1` forms, rows
/// outer and columns inner, both lexicographic.
pub fn enumerate_minor_indices(d: usize, r: usize, s: usize) -> Vec<MinorIndex> {
    let row_sets = if s == 0 {
        Vec::new()
    } else {
        block_row_choices(s, r)
    };
    let col_sets: Vec<Vec<usize>> = (0..d + s).combinations(2 * s).collect();
    row_sets
        .iter()
        .flat_map(|rows| {
            col_sets.iter().map(move |cols| MinorIndex {
                rows: rows.clone(),
                cols: cols.clone(),
            })
        })
        .collect()
}

/// Coordinates `u_{ij;mn}` of the first blow-up: every `2 x 2` minor of the
/// coefficient matrix, `i < j`, `m < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phi1Coords {
    pub d: usize,
    pub r: usize,
    #[serde(serialize_with = "crate::exactla::ser::rational_vec")]
    pub values: Vec<Rational>,
}

impl Phi1Coords {
    /// Wraps a vector in the `(i, j, m, n)` layout.
    pub fn from_values(d: usize, r: usize, values: Vec<Rational>) -> Result<Self> {
        let expected = (r + 1) * r / 2 * (d + 1) * d / 2;
        if values.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates, expected {expected}",
                values.len()
            )));
        }
        Ok(Self { d, r, values })
    }

    /// `u_{ij;mn}` extended antisymmetrically in `(i, j)` and `(m, n)`;
    /// zero when an index falls outside `0..=r` or `0..=d`.
    pub fn get(&self, i: i64, j: i64, m: i64, n: i64) -> Rational {
        let (r, d) = (self.r as i64, self.d as i64);
        if [i, j].iter().any(|&x| x < 0 || x > r) || [m, n].iter().any(|&x| x < 0 || x > d) {
            return Rational::zero();
        }
        if i == j || m == n {
            return Rational::zero();
        }
        let mut negate = false;
        let (i, j) = if i < j {
            (i, j)
        } else {
            negate = !negate;
            (j, i)
        };
        let (m, n) = if m < n {
            (m, n)
        } else {
            negate = !negate;
            (n, m)
        };
        let v = &self.values[self.position(i as usize, j as usize, m as usize, n as usize)];
        if negate {
            -v.clone()
        } else {
            v.clone()
        }
    }

    fn position(&self, i: usize, j: usize, m: usize, n: usize) -> usize {
        let pair = |a: usize, b: usize, top: usize| {
            // index of (a, b), a < b <= top, in lexicographic order
            a * (2 * top + 1 - a) / 2 + (b - a - 1)
        };
        let n_cols = (self.d + 1) * self.d / 2;
        pair(i, j, self.r) * n_cols + pair(m, n, self.d)
    }
}

/// Every `2 x 2` minor of the coefficient rows, without the indeterminacy
/// check. Used where the vector is wanted even on `R_1`.
pub fn phi1_values(t: &FormTuple) -> Phi1Coords {
    let d = t.degree();
    let r = t.r();
    let mut values = Vec::with_capacity((r + 1) * r / 2 * (d + 1) * d / 2);
    for (i, j) in (0..=r).tuple_combinations() {
        for (m, n) in (0..=d).tuple_combinations() {
            let (m, n) = (m as i64, n as i64);
            values.push(t.coeff(i, m) * t.coeff(j, n) - t.coeff(i, n) * t.coeff(j, m));
        }
    }
    Phi1Coords { d, r, values }
}

/// `phi_1(t)`. Fails on `R_1`, where every coordinate vanishes.
pub fn phi1_coords(t: &FormTuple) -> Result<Phi1Coords> {
    let u = phi1_values(t);
    if u.values.iter().all(Zero::is_zero) {
        return Err(Error::IndeterminacyLocus);
    }
    Ok(u)
}

/// `phi_2(t)`: every `4 x 4` minor of `A_2` with rows `i1 < i2` from the
/// first block and `i3 < i4` from the second, in [`enumerate_minor_indices`]
/// order. Fails on `R_2`.
pub fn phi2_coords(t: &FormTuple) -> Result<Vec<(MinorIndex, Rational)>> {
    if in_stratum_any(t, 2) {
        return Err(Error::IndeterminacyLocus);
    }
    let a = build_unchecked(t, 2);
    Ok(enumerate_minor_indices(t.degree(), t.r(), 2)
        .into_iter()
        .map(|idx| {
            let v = idx.value_in(a.matrix(), t.r());
            (idx, v)
        })
        .collect())
}

/// `rank A_k < 2k`, also for `k > d`, where it always holds.
pub(crate) fn in_stratum_any(t: &FormTuple, k: usize) -> bool {
    if k > t.degree() {
        return true;
    }
    in_stratum(t, k).expect("1 <= k <= d")
}

/// The six-term relation on the first blow-up:
///
/// ```text
///   u_{i1i2;m1m2} u_{i3i4;m3-1,m4-1} - u_{i1i2;m1m3} u_{i3i4;m2-1,m4-1}
/// + u_{i1i2;m1m4} u_{i3i4;m2-1,m3-1} + u_{i1i2;m2m3} u_{i3i4;m1-1,m4-1}
/// - u_{i1i2;m2m4} u_{i3i4;m1-1,m3-1} + u_{i1i2;m3m4} u_{i3i4;m1-1,m2-1}
/// ```
///
/// Coordinates with out-of-range indices read as zero. On `u = phi_1(t)`
/// this is the Laplace expansion, along its first two rows, of the `4 x 4`
/// minor of `A_2(t)` with rows `(i1, i2 | i3, i4)` and columns `m`.
pub fn relation_six_term(u: &Phi1Coords, i: [usize; 4], m: [usize; 4]) -> Rational {
    let [i1, i2, i3, i4] = i.map(|x| x as i64);
    let m = m.map(|x| x as i64);
    let top = |a: usize, b: usize| u.get(i1, i2, m[a], m[b]);
    let bottom = |a: usize, b: usize| u.get(i3, i4, m[a] - 1, m[b] - 1);
    top(0, 1) * bottom(2, 3) - top(0, 2) * bottom(1, 3)
        + top(0, 3) * bottom(1, 2)
        + top(1, 2) * bottom(0, 3)
        - top(1, 3) * bottom(0, 2)
        + top(2, 3) * bottom(0, 1)
}
