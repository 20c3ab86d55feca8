//! Parametrization of the strata `R_k`, their dimension, and the Jacobian
//! smooth/singular classification.
//!
//! `R_k` is parametrized by `(g_0, ..., g_r; p) -> (g_0 p, ..., g_r p)` with
//! `deg g_i = k - 1` and `deg p = d - k + 1`. Its projective dimension is
//! `d + kr`, so its codimension in `P^((d+1)(r+1)-1)` is `r(d - k + 1)`.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{check_k, Error, Result};
use crate::exactla::{Rational, RationalMatrix};
use crate::forms::{BinaryForm, FormTuple};
use crate::sample::{derive_seed, Sampler, DEFAULT_BOUND};
use crate::sylvester::{build_matrix, Coeff};

/// Fresh samples tried by [`verify_dimension`] before giving up.
pub const DIMENSION_ATTEMPTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumParam {
    k: usize,
    g: FormTuple,
    p: BinaryForm,
}

impl StratumParam {
    /// `g` must have degree `k - 1` and `p` must be nonzero.
    pub fn new(k: usize, g: FormTuple, p: BinaryForm) -> Result<Self> {
        if k == 0 || g.degree() != k - 1 {
            return Err(Error::ShapeMismatch(format!(
                "cofactor forms have degree {} but k = {k}",
                g.degree()
            )));
        }
        if p.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { k, g, p })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g(&self) -> &FormTuple {
        &self.g
    }

    pub fn p(&self) -> &BinaryForm {
        &self.p
    }

    /// Degree of the image forms.
    pub fn d(&self) -> usize {
        self.g.degree() + self.p.degree()
    }

    /// The tuple `(g_0 p, ..., g_r p)`, a point of `R_k`.
    pub fn image(&self) -> FormTuple {
        self.g
            .times(&self.p)
            .expect("product of a nonzero tuple and a nonzero form is nonzero")
    }
}

/// The multiplication map onto `R_k`.
pub fn phi_k(s: &StratumParam) -> FormTuple {
    s.image()
}

/// Projective dimension `d + kr` of `R_k`.
pub fn stratum_dimension(d: usize, r: usize, k: usize) -> Result<usize> {
    check_k(k, 1, d)?;
    Ok(d + k * r)
}

/// Codimension `r(d - k + 1)` of `R_k` in `P^((d+1)(r+1)-1)`.
pub fn stratum_codimension(d: usize, r: usize, k: usize) -> Result<usize> {
    let dim = stratum_dimension(d, r, k)?;
    Ok((d + 1) * (r + 1) - 1 - dim)
}

/// Jacobian of the affine-cone parametrization `(mu, nu) -> coefficients of g_i p`
/// at `s`.
///
/// Rows are the coefficients `s_ij` (form-major); columns are `mu_ip`
/// (form-major) followed by `nu_q`.
pub fn parametrization_jacobian(s: &StratumParam) -> RationalMatrix {
    let d = s.d();
    let r = s.g.r();
    let k = s.k;
    let np = s.p.degree();
    let n_mu = (r + 1) * k;
    let mut jac = RationalMatrix::zeros((d + 1) * (r + 1), n_mu + np + 1);
    for i in 0..=r {
        for j in 0..=d {
            let row = i * (d + 1) + j;
            // d/d mu_{i,p} of sum_{p+q=j} mu_{i,p} nu_q is nu_{j-p}.
            for p in 0..k {
                if let Some(q) = j.checked_sub(p).filter(|&q| q <= np) {
                    jac.set(row, i * k + p, s.p.coeffs()[q].clone());
                }
            }
            // d/d nu_q is mu_{i,j-q}.
            for q in 0..=np {
                if let Some(p) = j.checked_sub(q).filter(|&p| p < k) {
                    jac.set(row, n_mu + q, s.g.form(i).coeffs()[p].clone());
                }
            }
        }
    }
    jac
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionCheck {
    pub d: usize,
    pub r: usize,
    pub k: usize,
    /// Cone dimension `d + kr + 1`.
    pub expected_rank: usize,
    /// Largest Jacobian rank seen.
    pub rank: usize,
    pub attempts: usize,
}

impl DimensionCheck {
    pub fn passed(&self) -> bool {
        self.rank == self.expected_rank
    }
}

/// Compares the generic Jacobian rank of the parametrization of `R_k` with
/// `d + kr + 1`. A single sample can be non-generic, so up to
/// [`DIMENSION_ATTEMPTS`] samples are drawn.
pub fn verify_dimension(d: usize, r: usize, k: usize, seed: u64) -> Result<DimensionCheck> {
    let expected_rank = stratum_dimension(d, r, k)? + 1;
    let mut best = 0;
    let mut attempts = 0;
    for attempt in 0..DIMENSION_ATTEMPTS {
        attempts += 1;
        let mut sampler = Sampler::with_bound(derive_seed(seed, &[attempt as u64]), DEFAULT_BOUND);
        let s = sampler.stratum_param(d, r, k)?;
        best = best.max(parametrization_jacobian(&s).rank());
        if best == expected_rank {
            break;
        }
    }
    Ok(DimensionCheck {
        d,
        r,
        k,
        expected_rank,
        rank: best,
        attempts,
    })
}

/// Variables `s_ij` in Jacobian column order.
pub fn coefficient_variables(d: usize, r: usize) -> Vec<Coeff> {
    (0..=r)
        .flat_map(|form| (0..=d).map(move |index| Coeff { form, index }))
        .collect()
}

/// Jacobian of all `2k x 2k` minors of `A_k` with respect to the `s_ij`,
/// evaluated at `t`.
///
/// Rows follow the lexicographic order of (row subset, column subset);
/// columns follow [`coefficient_variables`]. Each entry is a sum of
/// cofactors, so no minor is ever expanded symbolically.
pub fn minor_jacobian(t: &FormTuple, k: usize) -> Result<RationalMatrix> {
    let a = build_matrix(t, k)?;
    let d = t.degree();
    let r = t.r();
    let vars = coefficient_variables(d, r);
    let size = 2 * k;
    let row_sets: Vec<Vec<usize>> = (0..a.matrix().rows()).combinations(size).collect();
    let col_sets: Vec<Vec<usize>> = (0..a.matrix().cols()).combinations(size).collect();
    let mut entries = Vec::with_capacity(row_sets.len() * col_sets.len() * vars.len());
    for rows in &row_sets {
        for cols in &col_sets {
            let sub = a.matrix().select(rows, cols);
            let mut occ = std::collections::BTreeMap::<Coeff, Vec<(usize, usize)>>::new();
            for (ai, &row) in rows.iter().enumerate() {
                let block = row / (r + 1);
                let form = row % (r + 1);
                for (bi, &col) in cols.iter().enumerate() {
                    if let Some(index) = col.checked_sub(block).filter(|&j| j <= d) {
                        occ.entry(Coeff { form, index }).or_default().push((ai, bi));
                    }
                }
            }
            let grad = sub.det_gradient(&occ)?;
            entries.extend(vars.iter().map(|v| {
                grad.get(v)
                    .cloned()
                    .unwrap_or_else(|| Rational::from_integer(0.into()))
            }));
        }
    }
    RationalMatrix::new(row_sets.len() * col_sets.len(), vars.len(), entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    NotInStratum,
    SmoothPoint,
    SingularPoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointClassification {
    pub kind: PointKind,
    pub k: usize,
    /// `rank A_k`.
    pub rank: usize,
    /// `rank A_{k-1}`, when `k >= 2`.
    pub rank_prev: Option<usize>,
    /// Rank of the minor Jacobian; absent for points outside `R_k`.
    pub jacobian_rank: Option<usize>,
    pub codimension: usize,
    /// Whether the point lies in `R_{k-1}` (never, for `k = 1`).
    pub in_lower_stratum: bool,
}

impl PointClassification {
    /// Singular exactly on `R_{k-1}`.
    pub fn consistent(&self) -> bool {
        match self.kind {
            PointKind::NotInStratum => true,
            PointKind::SingularPoint => self.in_lower_stratum,
            PointKind::SmoothPoint => !self.in_lower_stratum,
        }
    }
}

/// Classifies `t` relative to `R_k` by the Jacobian criterion on the
/// `2k x 2k` minors of `A_k`.
pub fn classify_point(t: &FormTuple, k: usize) -> Result<PointClassification> {
    let d = t.degree();
    let r = t.r();
    check_k(k, 1, d)?;
    let rank = build_matrix(t, k)?.rank();
    let rank_prev = if k >= 2 {
        Some(build_matrix(t, k - 1)?.rank())
    } else {
        None
    };
    let in_lower_stratum = rank_prev.is_some_and(|rp| rp < 2 * (k - 1));
    let codimension = stratum_codimension(d, r, k)?;
    if rank >= 2 * k {
        return Ok(PointClassification {
            kind: PointKind::NotInStratum,
            k,
            rank,
            rank_prev,
            jacobian_rank: None,
            codimension,
            in_lower_stratum,
        });
    }
    let jacobian_rank = minor_jacobian(t, k)?.rank();
    let kind = if jacobian_rank == codimension {
        PointKind::SmoothPoint
    } else {
        PointKind::SingularPoint
    };
    Ok(PointClassification {
        kind,
        k,
        rank,
        rank_prev,
        jacobian_rank: Some(jacobian_rank),
        codimension,
        in_lower_stratum,
    })
}
