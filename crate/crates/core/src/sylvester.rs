//! The block resultant matrix `A_k` of a form tuple and its rank criteria.
//!
//! `A_k` has `(r+1)k` rows and `d+k` columns. Block `b` (rows
//! `b(r+1)..(b+1)(r+1)`) holds the coefficient rows of the forms shifted
//! right by `b` columns, so row `b(r+1)+i`, column `b+j` holds `s_ij`.
//! The tuple has at least `d-k+1` common roots exactly when
//! `rank A_k < 2k`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{check_k, Error, Result};
use crate::exactla::RationalMatrix;
use crate::forms::FormTuple;

/// The coefficient `s_ij`: coefficient `index` of form `form`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coeff {
    pub form: usize,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct ResultantMatrix {
    k: usize,
    d: usize,
    r: usize,
    matrix: RationalMatrix,
    occurrences: BTreeMap<Coeff, Vec<(usize, usize)>>,
}

impl ResultantMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    /// The `k` positions of each coefficient variable.
    pub fn occurrences(&self) -> &BTreeMap<Coeff, Vec<(usize, usize)>> {
        &self.occurrences
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Row of form `i` in block `b`.
    pub fn row_of(&self, block: usize, form: usize) -> usize {
        block * (self.r + 1) + form
    }
}

/// Builds `A_k` for `1 <= k <= d`.
pub fn build_matrix(t: &FormTuple, k: usize) -> Result<ResultantMatrix> {
    let d = t.degree();
    check_k(k, 1, d)?;
    Ok(build_unchecked(t, k))
}

/// `A_k` for any `k >= 1`, without the `k <= d` restriction.
pub(crate) fn build_unchecked(t: &FormTuple, k: usize) -> ResultantMatrix {
    let d = t.degree();
    let r = t.r();
    let mut matrix = RationalMatrix::zeros((r + 1) * k, d + k);
    let mut occurrences: BTreeMap<Coeff, Vec<(usize, usize)>> = BTreeMap::new();
    for b in 0..k {
        for i in 0..=r {
            for j in 0..=d {
                let row = b * (r + 1) + i;
                matrix.set(row, b + j, t.form(i).coeffs()[j].clone());
                occurrences
                    .entry(Coeff { form: i, index: j })
                    .or_default()
                    .push((row, b + j));
            }
        }
    }
    ResultantMatrix {
        k,
        d,
        r,
        matrix,
        occurrences,
    }
}

/// Rank of `A_k`, for `1 <= k <= d`.
pub fn rank_of(t: &FormTuple, k: usize) -> Result<usize> {
    Ok(build_matrix(t, k)?.rank())
}

/// Membership in the stratum `R_k`: `rank A_k < 2k`.
pub fn in_stratum(t: &FormTuple, k: usize) -> Result<bool> {
    Ok(rank_of(t, k)? < 2 * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankIncrement {
    pub rank_prev: usize,
    pub rank: usize,
}

impl RankIncrement {
    pub fn holds(&self) -> bool {
        self.rank == self.rank_prev + 1
    }
}

/// When `rank A_{k-1} < 2(k-1)`, checks `rank A_k = rank A_{k-1} + 1`.
pub fn rank_increment(t: &FormTuple, k: usize) -> Result<RankIncrement> {
    check_k(k, 2, t.degree())?;
    let rank_prev = rank_of(t, k - 1)?;
    if rank_prev >= 2 * (k - 1) {
        return Err(Error::PreconditionNotMet(format!(
            "A_{} has full rank {rank_prev}",
            k - 1
        )));
    }
    Ok(RankIncrement {
        rank_prev,
        rank: rank_of(t, k)?,
    })
}

/// Boolean form of [`rank_increment`].
pub fn rank_increment_check(t: &FormTuple, k: usize) -> Result<bool> {
    rank_increment(t, k).map(|c| c.holds())
}

/// Two rows per block: block `b` contributes forms `pairs[b].0` and `pairs[b].1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BSelection {
    pub pairs: Vec<(usize, usize)>,
}

impl BSelection {
    /// A pair repeats a row, so the submatrix has two equal rows.
    pub fn is_degenerate(&self) -> bool {
        self.pairs.iter().any(|&(a, b)| a == b)
    }

    /// The selected rows of `A_k`, in block order.
    pub fn rows(&self, r: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .enumerate()
            .flat_map(|(b, &(i, j))| [b * (r + 1) + i, b * (r + 1) + j])
            .collect()
    }
}

/// All selections with `i_b <= i'_b` in every block, in lexicographic order.
/// There are `C(r+2, 2)^k` of them.
pub fn enumerate_b_selections(k: usize, r: usize) -> impl Iterator<Item = BSelection> {
    let pairs: Vec<(usize, usize)> = (0..=r).flat_map(|i| (i..=r).map(move |j| (i, j))).collect();
    let base = pairs.len();
    let total = base
        .checked_pow(k as u32)
        .expect("selection count overflows usize");
    (0..total).map(move |mut n| {
        let mut chosen = vec![(0, 0); k];
        for slot in chosen.iter_mut().rev() {
            *slot = pairs[n % base];
            n /= base;
        }
        BSelection { pairs: chosen }
    })
}

/// Both sides of the B-submatrix criterion for one tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BCriterion {
    /// `rank A_k < 2k`.
    pub rank_deficient: bool,
    /// Every selection with distinct rows in each block has rank `< 2k`.
    pub all_distinct_b_deficient: bool,
    /// Same quantifier over all selections, repeated rows included.
    pub all_b_deficient_with_repeats: bool,
    pub selections_checked: usize,
}

impl BCriterion {
    pub fn holds(&self) -> bool {
        self.rank_deficient == self.all_distinct_b_deficient
    }

    pub fn holds_with_repeats(&self) -> bool {
        self.rank_deficient == self.all_b_deficient_with_repeats
    }
}

/// Evaluates `rank A_k < 2k` and the B-submatrix criterion independently.
pub fn b_criterion(t: &FormTuple, k: usize) -> Result<BCriterion> {
    let a = build_matrix(t, k)?;
    let rank_deficient = a.rank() < 2 * k;
    let cols: Vec<usize> = (0..a.matrix().cols()).collect();
    let mut all_distinct = true;
    let mut all_with_repeats = true;
    let mut checked = 0;
    for sel in enumerate_b_selections(k, t.r()) {
        let deficient = a.matrix().select(&sel.rows(t.r()), &cols).rank() < 2 * k;
        checked += 1;
        all_with_repeats &= deficient;
        if !sel.is_degenerate() {
            all_distinct &= deficient;
        }
        if !all_distinct && !all_with_repeats {
            break;
        }
    }
    Ok(BCriterion {
        rank_deficient,
        all_distinct_b_deficient: all_distinct,
        all_b_deficient_with_repeats: all_with_repeats,
        selections_checked: checked,
    })
}

/// Whether the B-submatrix criterion agrees with the rank criterion on `t`.
pub fn check_b_criterion(t: &FormTuple, k: usize) -> Result<bool> {
    b_criterion(t, k).map(|c| c.holds())
}
