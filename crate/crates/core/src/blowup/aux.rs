//! Auxiliary determinants and the coordinates of the higher blow-ups.
//!
//! A `2(k+1) x 2(k+1)` root minor with rows `i_1, ..., i_{2k+2}` receives a
//! corner auxiliary minor on rows `i_3, ..., i_{2k}`; expanding the enlarged
//! determinant along its first `2k` rows produces products of two `2k x 2k`
//! minors, on rows `i_1..i_{2k}` and `i_3..i_{2k+2}`, and each of those
//! receives its own auxiliary minors recursively. Nodes are kept depth-first,
//! corner first.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{Rational, RationalMatrix};
use crate::forms::FormTuple;
use crate::sylvester::build_unchecked;

use super::minors::{
    enumerate_minor_indices, in_stratum_any, phi1_coords, phi2_coords, MinorIndex,
};

/// Largest `k` (root size `2(k+1)`) accepted by [`attach_aux`].
pub const MAX_AUX_K: usize = 16;

/// An auxiliary minor: rows fixed by the root, columns free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxNode {
    /// Form indices, two per block of `A_p` where `2p = rows.len()`.
    pub rows: Vec<usize>,
}

impl AuxNode {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Admissible column sets for degree `d`: increasing `2p`-subsets of
    /// `0..d+p`.
    pub fn column_sets(&self, d: usize) -> Vec<Vec<usize>> {
        let p = self.size() / 2;
        (0..d + p).combinations(2 * p).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxTree {
    pub root: MinorIndex,
    pub nodes: Vec<AuxNode>,
}

impl AuxTree {
    /// Root size plus all auxiliary sizes; equals `2^(k+1)`.
    pub fn total_size(&self) -> usize {
        self.root.size() + self.nodes.iter().map(AuxNode::size).sum::<usize>()
    }
}

/// Attaches the auxiliary minors to a root of size `2(k+1)`, `k >= 2`.
pub fn attach_aux(root: &MinorIndex) -> Result<AuxTree> {
    let k = root.s() - 1;
    if !(2..=MAX_AUX_K).contains(&k) {
        return Err(Error::BadK {
            k,
            min: 2,
            max: MAX_AUX_K,
        });
    }
    Ok(AuxTree {
        root: root.clone(),
        nodes: aux_nodes(&root.rows),
    })
}

fn aux_nodes(rows: &[usize]) -> Vec<AuxNode> {
    let n = rows.len();
    if n <= 4 {
        return Vec::new();
    }
    let mut out = vec![AuxNode {
        rows: rows[2..n - 2].to_vec(),
    }];
    out.extend(aux_nodes(&rows[..n - 2]));
    out.extend(aux_nodes(&rows[2..]));
    out
}

/// `2^(k+1) - 2(k+1) = sum_{j=1}^{k-1} 2^(j-1) * 2(k-j)`, by integer
/// arithmetic.
pub fn aux_count_identity(k: usize) -> bool {
    let two = BigInt::from(2);
    let lhs = two.pow(k as u32 + 1) - BigInt::from(2 * (k + 1));
    let rhs = (1..k).fold(BigInt::zero(), |acc, j| {
        acc + two.pow(j as u32 - 1) * BigInt::from(2 * (k - j))
    });
    lhs == rhs
}

/// A coordinate of `phi_k`: a root minor of `A_k` and one column set per
/// auxiliary node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiKIndex {
    pub root: MinorIndex,
    pub aux_cols: Vec<Vec<usize>>,
}

/// Lazy enumeration of `phi_k(t)`, root minors outer, auxiliary column sets
/// in odometer order (last node fastest).
pub struct PhiKStream {
    d: usize,
    r: usize,
    k: usize,
    roots: std::vec::IntoIter<MinorIndex>,
    a_k: RationalMatrix,
    aux_matrices: Vec<RationalMatrix>,
    current: Option<RootState>,
}

struct RootState {
    root: MinorIndex,
    value: Rational,
    nodes: Vec<Vec<(Vec<usize>, Rational)>>,
    odometer: Vec<usize>,
    done: bool,
}

impl PhiKStream {
    fn start_root(&self, root: MinorIndex) -> RootState {
        let value = root.value_in(&self.a_k, self.r);
        let nodes: Vec<Vec<(Vec<usize>, Rational)>> = aux_nodes(&root.rows)
            .into_iter()
            .map(|node| {
                let p = node.size() / 2;
                let a = &self.aux_matrices[p - 1];
                node.column_sets(self.d)
                    .into_iter()
                    .map(|cols| {
                        let idx = MinorIndex {
                            rows: node.rows.clone(),
                            cols,
                        };
                        let v = idx.value_in(a, self.r);
                        (idx.cols, v)
                    })
                    .collect()
            })
            .collect();
        let done = nodes.iter().any(Vec::is_empty);
        RootState {
            odometer: vec![0; nodes.len()],
            root,
            value,
            nodes,
            done,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Iterator for PhiKStream {
    type Item = (PhiKIndex, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(state) = self.current.as_mut() {
                if !state.done {
                    let mut value = state.value.clone();
                    let mut aux_cols = Vec::with_capacity(state.nodes.len());
                    for (node, &pos) in state.nodes.iter().zip(&state.odometer) {
                        let (cols, v) = &node[pos];
                        value *= v;
                        aux_cols.push(cols.clone());
                    }
                    let item = PhiKIndex {
                        root: state.root.clone(),
                        aux_cols,
                    };
                    state.done = true;
                    for slot in (0..state.odometer.len()).rev() {
                        state.odometer[slot] += 1;
                        if state.odometer[slot] < state.nodes[slot].len() {
                            state.done = false;
                            break;
                        }
                        state.odometer[slot] = 0;
                    }
                    return Some((item, value));
                }
            }
            let root = self.roots.next()?;
            self.current = Some(self.start_root(root));
        }
    }
}

/// Streams `phi_k(t)` for any `k >= 1`. Fails when `t` lies in `R_k`.
pub fn phik_stream(t: &FormTuple, k: usize) -> Result<PhiKStream> {
    if k == 0 {
        return Err(Error::BadK {
            k,
            min: 1,
            max: t.degree(),
        });
    }
    if in_stratum_any(t, k) {
        return Err(Error::IndeterminacyLocus);
    }
    let d = t.degree();
    Ok(PhiKStream {
        d,
        r: t.r(),
        k,
        roots: enumerate_minor_indices(d, t.r(), k).into_iter(),
        a_k: build_unchecked(t, k).matrix().clone(),
        aux_matrices: (1..k.saturating_sub(1))
            .map(|p| build_unchecked(t, p).matrix().clone())
            .collect(),
        current: None,
    })
}

/// Largest `k` for which [`phik_coords`] materializes the vector.
pub const MAX_MATERIALIZED_K: usize = 3;

/// `phi_k(t)` as a vector. `k = 1, 2` use the first two blow-up maps; larger
/// `k` multiply each root minor by its auxiliary minors. `k` above
/// [`MAX_MATERIALIZED_K`] must go through [`phik_stream`].
pub fn phik_coords(t: &FormTuple, k: usize) -> Result<Vec<(PhiKIndex, Rational)>> {
    match k {
        0 => Err(Error::BadK {
            k,
            min: 1,
            max: t.degree(),
        }),
        1 => {
            let u = phi1_coords(t)?;
            let idx = enumerate_minor_indices(t.degree(), t.r(), 1);
            Ok(idx
                .into_iter()
                .zip(u.values)
                .map(|(root, v)| {
                    (
                        PhiKIndex {
                            root,
                            aux_cols: Vec::new(),
                        },
                        v,
                    )
                })
                .collect())
        }
        2 => Ok(phi2_coords(t)?
            .into_iter()
            .map(|(root, v)| {
                (
                    PhiKIndex {
                        root,
                        aux_cols: Vec::new(),
                    },
                    v,
                )
            })
            .collect()),
        k if k <= MAX_MATERIALIZED_K => {
            let coords: Vec<_> = phik_stream(t, k)?.collect();
            if coords.iter().all(|(_, v)| v.is_zero()) {
                return Err(Error::IndeterminacyLocus);
            }
            Ok(coords)
        }
        k => Err(Error::TooLarge(format!(
            "phi_{k} is only available as a stream"
        ))),
    }
}

/// Number of coordinates of `phi_k` for degree `d` and `r + 1` forms.
pub fn phik_len(d: usize, r: usize, k: usize) -> BigInt {
    let binom = |n: usize, m: usize| -> BigInt {
        if m > n {
            return BigInt::zero();
        }
        (0..m).fold(BigInt::one(), |acc, i| {
            acc * BigInt::from(n - i) / BigInt::from(i + 1)
        })
    };
    let pairs = binom(r + 1, 2);
    let mut total = pairs.pow(k as u32) * binom(d + k, 2 * k);
    if k >= 3 {
        for node in aux_nodes(&vec![0; 2 * k]) {
            let p = node.size() / 2;
            total *= binom(d + p, 2 * p);
        }
    }
    total
}
