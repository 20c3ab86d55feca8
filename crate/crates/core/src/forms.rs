//! Binary forms and the gcd-based common-root count.
//!
//! A form of degree `d` stores `d + 1` coefficients; `coeffs[j]` multiplies
//! `x^(d-j) y^j`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{rat, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|x| x.to_string()).collect();
        write!(f, "BinaryForm[{}]", c.join(", "))
    }
}

impl BinaryForm {
    /// Panics if `coeffs` is empty: a form has at least one coefficient.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs degree + 1 coefficients"
        );
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![Rational::zero(); degree + 1])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x^(d-j) y^j`.
    pub fn monomial(degree: usize, j: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[j] = Rational::one();
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^(d-j) y^j`; zero for `j` outside `0..=d`.
    pub fn coeff(&self, j: i64) -> Rational {
        usize::try_from(j)
            .ok()
            .and_then(|j| self.coeffs.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Product of two forms; the degree is the sum of the degrees.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Value at the point `(x, y)`.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let d = self.degree();
        // Homogeneous Horner: sum_j s_j x^(d-j) y^j.
        let mut acc = Rational::zero();
        let mut ypow = Rational::one();
        let mut xpows = Vec::with_capacity(d + 1);
        let mut p = Rational::one();
        for _ in 0..=d {
            xpows.push(p.clone());
            p *= x;
        }
        for (j, s) in self.coeffs.iter().enumerate() {
            acc += s * &xpows[d - j] * &ypow;
            ypow *= y;
        }
        acc
    }

    /// Power of `y` dividing the form, i.e. the multiplicity of the root `[1:0]`.
    /// `None` for the zero form.
    fn y_multiplicity(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `f(x, 1)` as a univariate polynomial.
    fn dehomogenize(&self) -> UniPoly {
        let d = self.degree();
        UniPoly::new((0..=d).map(|e| self.coeffs[d - e].clone()).collect())
    }
}

/// An `(r+1)`-tuple of binary forms of one common degree, not all zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormTuple {
    forms: Vec<BinaryForm>,
}

impl fmt::Debug for FormTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.forms).finish()
    }
}

impl FormTuple {
    pub fn new(forms: Vec<BinaryForm>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::ShapeMismatch(
                "a tuple needs at least one form".into(),
            ));
        };
        let d = first.degree();
        if let Some(bad) = forms.iter().find(|f| f.degree() != d) {
            return Err(Error::ShapeMismatch(format!(
                "forms of degree {d} and {} in one tuple",
                bad.degree()
            )));
        }
        if forms.iter().all(BinaryForm::is_zero) {
            return Err(Error::AllZeroTuple);
        }
        Ok(Self { forms })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| BinaryForm::from_i64(r)).collect())
    }

    pub fn degree(&self) -> usize {
        self.forms[0].degree()
    }

    /// Index bound `r`: the tuple has `r + 1` forms.
    pub fn r(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &BinaryForm {
        &self.forms[i]
    }

    /// `s_ij`: coefficient `j` of form `i`, zero when `j` is out of range.
    pub fn coeff(&self, i: usize, j: i64) -> Rational {
        self.forms[i].coeff(j)
    }

    /// All coefficients, form by form.
    pub fn flat_coeffs(&self) -> Vec<Rational> {
        self.forms
            .iter()
            .flat_map(|f| f.coeffs.iter().cloned())
            .collect()
    }

    /// Homothety: multiply every coefficient by `c`. Panics if `c == 0`.
    pub fn scale(&self, c: &Rational) -> Self {
        assert!(!c.is_zero(), "homothety by zero");
        Self {
            forms: self.forms.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Multiplies every form by `p`.
    pub fn times(&self, p: &BinaryForm) -> Result<Self> {
        Self::new(self.forms.iter().map(|g| g.multiply(p)).collect())
    }

    /// Number of common roots in P^1, counted with multiplicity: the degree of
    /// `gcd(f_0, ..., f_r)`.
    ///
    /// The root `[1:0]` is counted by the common power of `y`; the remaining
    /// roots by the gcd of the dehomogenized polynomials `f_i(x, 1)`. Zero
    /// forms do not constrain the gcd. Gcd degree over Q equals gcd degree over
    /// C, so this counts roots over the algebraic closure.
    pub fn common_root_multiplicity(&self) -> Result<usize> {
        let nonzero: Vec<&BinaryForm> = self.forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::AllZeroTuple);
        }
        let at_infinity = nonzero
            .iter()
            .filter_map(|f| f.y_multiplicity())
            .min()
            .unwrap_or(0);
        let mut g = UniPoly::zero();
        for f in &nonzero {
            g = g.gcd(&f.dehomogenize());
            if g.degree() == Some(0) {
                break;
            }
        }
        Ok(at_infinity + g.degree().unwrap_or(0))
    }
}

/// Dense univariate polynomial, `coeffs[e]` multiplying `x^e`, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => Self {
                coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
            },
        }
    }

    fn rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs.last().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / lead;
            if !q.is_zero() {
                let shift = top - dd;
                for (e, c) in divisor.coeffs.iter().enumerate() {
                    r[shift + e] -= &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }
}
