//! The lifted map `F` at level one, and the convolution expansion of minors
//! of a product tuple `g p`.

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{projectively_equal, Rational, RationalMatrix};
use crate::forms::{BinaryForm, FormTuple};

use super::embed::{skew_coords, ProjectivePoint};
use super::minors::{phi1_values, MinorIndex};

/// A point of a product of projective spaces, one coordinate vector per
/// level. Level 0 holds the tuple coefficients, level 1 the `u_{ij;mn}`.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupPoint {
    #[serde(serialize_with = "crate::exactla::ser::rational_vec_vec")]
    pub levels: Vec<Vec<Rational>>,
}

impl BlowupPoint {
    pub fn new(levels: Vec<Vec<Rational>>) -> Result<Self> {
        if levels.iter().any(|v| v.iter().all(Zero::is_zero)) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { levels })
    }

    /// Equality in every projective factor.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| projectively_equal(a, b))
    }
}

/// The form `nu_0 x^(d-1) + ... + nu_{d-1} y^(d-1)`.
pub fn nu_form(nu: &ProjectivePoint) -> BinaryForm {
    BinaryForm::new(nu.coords().to_vec())
}

/// `Phi_2(mu; nu)`: every degree-one form of `mu` times the form of `nu`.
pub fn phi2_product(mu: &FormTuple, nu: &ProjectivePoint) -> FormTuple {
    mu.times(&nu_form(nu)).expect("nonzero times nonzero")
}

/// When the `2 x 2` minors of `mu` all vanish, the rows of `mu` are
/// multiples `c_i w` of one vector; returns `c`.
fn rank_one_direction(mu: &FormTuple) -> Vec<Rational> {
    let w = mu
        .forms()
        .iter()
        .find(|f| !f.is_zero())
        .expect("tuple is nonzero")
        .coeffs()
        .to_vec();
    let pivot = w.iter().position(|x| !x.is_zero()).expect("nonzero row");
    mu.forms()
        .iter()
        .map(|f| &f.coeffs()[pivot] / &w[pivot])
        .collect()
}

/// Checks that `tau` is a limit of `phi_1'` along `mu`.
///
/// Off the stratum `R'_1` this means `tau` is proportional to the `2 x 2`
/// minors of `mu`. On it, `mu = c w^T` and the limits of the minors are the
/// bivectors `c ∧ a`, characterized by `c ∧ tau = 0`.
pub fn check_tau(mu: &FormTuple, tau: &[Rational]) -> Result<()> {
    let r = mu.r();
    if tau.len() != (r + 1) * r / 2 {
        return Err(Error::ShapeMismatch(format!(
            "tau has {} coordinates, expected {}",
            tau.len(),
            (r + 1) * r / 2
        )));
    }
    if tau.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let minors = phi1_values(mu).values;
    if minors.iter().any(|x| !x.is_zero()) {
        if !projectively_equal(&minors, tau) {
            return Err(Error::InconsistentInput(
                "tau is not proportional to the 2x2 minors of mu".into(),
            ));
        }
        return Ok(());
    }
    let c = rank_one_direction(mu);
    let pos = |i: usize, j: usize| i * (2 * r + 1 - i) / 2 + (j - i - 1);
    for (i, j, l) in (0..=r).tuple_combinations() {
        let wedge = &c[i] * &tau[pos(j, l)] - &c[j] * &tau[pos(i, l)] + &c[l] * &tau[pos(i, j)];
        if !wedge.is_zero() {
            return Err(Error::InconsistentInput(format!(
                "tau is not a limit direction at mu: c ∧ tau is nonzero at ({i}, {j}, {l})"
            )));
        }
    }
    Ok(())
}

/// `F(mu, tau, nu)`: level 0 is `Phi_2(mu; nu)`, level 1 has coordinate
/// `(nu_m nu_{n-1} - nu_{m-1} nu_n) tau_ij` at `(i, j; m, n)`.
pub fn f_map_level1(mu: &FormTuple, tau: &[Rational], nu: &ProjectivePoint) -> Result<BlowupPoint> {
    if mu.degree() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "mu must have degree 1, got {}",
            mu.degree()
        )));
    }
    check_tau(mu, tau)?;
    let level0 = phi2_product(mu, nu).flat_coeffs();
    let skew = skew_coords(nu);
    let mut level1 = Vec::with_capacity(tau.len() * skew.len());
    for t in tau {
        for s in &skew {
            level1.push(t * s);
        }
    }
    BlowupPoint::new(vec![level0, level1])
}

/// Both sides of the convolution expansion of one minor of `A_s(g p)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProductExpansion {
    pub index: MinorIndex,
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub direct: Rational,
    #[serde(serialize_with = "crate::exactla::ser::rational")]
    pub expanded: Rational,
    /// Number of `q`-tuples that contributed a determinant.
    pub terms: usize,
}

impl ProductExpansion {
    pub fn passed(&self) -> bool {
        self.direct == self.expanded
    }
}

/// With `f_i = g_i p`, the entry of `A_s(f)` at row `(block b, form i)` and
/// column `m` is `sum_q nu_q mu_{i, m - q - b}`. Expanding each column by
/// multilinearity gives
///
/// ```text
/// |M(f)| = sum_{q_1..q_2s} nu_{q_1} ... nu_{q_2s} det[mu_{i_a, m_c - q_c - b_a}]
/// ```
///
/// The left side is computed on `A_s(g p)` directly, the right side from
/// `g` and `p` alone.
pub fn product_minor_expansion(
    g: &FormTuple,
    p: &BinaryForm,
    idx: &MinorIndex,
) -> Result<ProductExpansion> {
    let s = idx.s();
    if !(1..=2).contains(&s) {
        return Err(Error::BadS(s));
    }
    if p.degree() == 0 {
        return Err(Error::DegenerateFactor);
    }
    if p.is_zero() {
        return Err(Error::ZeroVector);
    }
    let f = g.times(p)?;
    let direct = idx.value(&f)?;
    let size = idx.size();
    let blocks: Vec<i64> = (0..size).map(|a| idx.block(a) as i64).collect();
    let mu = |a: usize, col: i64| g.coeff(idx.rows[a], col - blocks[a]);
    // For each column position, the q with a nonzero nu and a nonzero column.
    let choices: Vec<Vec<(usize, Vec<Rational>)>> = idx
        .cols
        .iter()
        .map(|&m| {
            (0..=p.degree())
                .filter(|&q| !p.coeffs()[q].is_zero())
                .filter_map(|q| {
                    let col: Vec<Rational> =
                        (0..size).map(|a| mu(a, m as i64 - q as i64)).collect();
                    col.iter().any(|x| !x.is_zero()).then_some((q, col))
                })
                .collect()
        })
        .collect();
    let mut expanded = Rational::zero();
    let mut terms = 0;
    for pick in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
        terms += 1;
        let weight = pick
            .iter()
            .fold(Rational::from_integer(1.into()), |acc, (q, _)| {
                acc * &p.coeffs()[*q]
            });
        let mut m = RationalMatrix::zeros(size, size);
        for (c, (_, col)) in pick.iter().enumerate() {
            for (a, v) in col.iter().enumerate() {
                m.set(a, c, v.clone());
            }
        }
        expanded += weight * m.det().expect("square");
    }
    Ok(ProductExpansion {
        index: idx.clone(),
        direct,
        expanded,
        terms,
    })
}

/// Boolean form of [`product_minor_expansion`].
pub fn product_minor_expansion_check(
    g: &FormTuple,
    p: &BinaryForm,
    idx: &MinorIndex,
) -> Result<bool> {
    product_minor_expansion(g, p, idx).map(|e| e.passed())
}
