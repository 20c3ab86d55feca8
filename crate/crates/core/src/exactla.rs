//! Exact rational linear algebra.
//!
//! Rank and determinant go through fraction-free (Bareiss) elimination on an
//! integer image of the matrix: each row is scaled by the lcm of its
//! denominators, which preserves rank and multiplies the determinant by a
//! known factor. Elimination first runs on `i128` with checked arithmetic and
//! restarts on `BigInt` if any step would overflow. Pivoting always takes the
//! first nonzero entry in the current column, so every run is reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| rat(x)))
            .collect();
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Submatrix on the given rows and columns, in the order given. No validation.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let (ints, _) = self.integer_image();
        eliminate(ints, self.rows, self.cols).rank
    }

    /// Exact determinant.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (ints, scale) = self.integer_image();
        let e = eliminate(ints, n, n);
        if e.rank < n {
            return Ok(Rational::zero());
        }
        let mut d = e.last_pivot;
        if e.negate {
            d = -d;
        }
        Ok(Rational::new(d, scale))
    }

    /// Determinant of the submatrix on `rows` x `cols`.
    ///
    /// Both index lists must have the same length, be strictly increasing and
    /// lie in range.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        if rows.len() != cols.len() {
            return Err(Error::BadIndexSet(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        check_index_list("row", rows, self.rows)?;
        check_index_list("column", cols, self.cols)?;
        self.select(rows, cols).det()
    }

    /// Signed cofactor `(-1)^(a+b) * det(M without row a and column b)`.
    pub fn cofactor(&self, a: usize, b: usize) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if a >= self.rows || b >= self.cols {
            return Err(Error::BadIndexSet(format!(
                "position ({a},{b}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != a).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != b).collect();
        let d = self.select(&rows, &cols).det()?;
        Ok(if (a + b).is_multiple_of(2) { d } else { -d })
    }

    /// Partial derivatives of `det(M)` with respect to named variables.
    ///
    /// `occurrences` maps each variable to the positions where it appears.
    /// Since the determinant is multilinear in the entries, the derivative
    /// with respect to `v` is the sum of the cofactors at the positions of `v`.
    /// All positions of one variable must hold the same value, and no position
    /// may belong to two variables.
    pub fn det_gradient<K: Ord + Clone>(
        &self,
        occurrences: &BTreeMap<K, Vec<(usize, usize)>>,
    ) -> Result<BTreeMap<K, Rational>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut seen = vec![false; n * n];
        for positions in occurrences.values() {
            let mut value: Option<&Rational> = None;
            for &(a, b) in positions {
                if a >= n || b >= n {
                    return Err(Error::BadIndexSet(format!(
                        "position ({a},{b}) outside {n}x{n}"
                    )));
                }
                if std::mem::replace(&mut seen[a * n + b], true) {
                    return Err(Error::BadIndexSet(format!(
                        "position ({a},{b}) listed twice"
                    )));
                }
                match value {
                    None => value = Some(self.get(a, b)),
                    Some(v) if v != self.get(a, b) => {
                        return Err(Error::BadIndexSet(format!(
                            "position ({a},{b}) holds {} but the variable has value {v}",
                            self.get(a, b)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }

        // Every (n-1)-minor vanishes when rank <= n-2.
        let all_zero = n >= 2 && self.rank() + 2 <= n;
        let mut out = BTreeMap::new();
        for (var, positions) in occurrences {
            let mut total = Rational::zero();
            if !all_zero {
                for &(a, b) in positions {
                    total += self.cofactor(a, b)?;
                }
            }
            out.insert(var.clone(), total);
        }
        Ok(out)
    }

    /// Integer matrix with the same rank, and the factor by which its
    /// determinant exceeds ours.
    fn integer_image(&self) -> (Vec<BigInt>, BigInt) {
        let mut ints = Vec::with_capacity(self.entries.len());
        let mut scale: BigInt = One::one();
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row
                .iter()
                .fold(<BigInt as One>::one(), |acc, x| acc.lcm(x.denom()));
            for x in row {
                ints.push(x.numer() * (&l / x.denom()));
            }
            scale *= &l;
        }
        (ints, scale)
    }
}

fn check_index_list(what: &str, idx: &[usize], bound: usize) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= bound) {
        return Err(Error::BadIndexSet(format!(
            "{what} index {bad} out of range 0..{bound}"
        )));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadIndexSet(format!(
            "{what} indices {idx:?} are not strictly increasing"
        )));
    }
    Ok(())
}

struct Echelon {
    rank: usize,
    negate: bool,
    last_pivot: BigInt,
}

fn eliminate(ints: Vec<BigInt>, rows: usize, cols: usize) -> Echelon {
    let small: Option<Vec<i128>> = ints.iter().map(|x| x.to_i64().map(i128::from)).collect();
    if let Some(mut a) = small {
        if let Some(e) = bareiss(&mut a, rows, cols) {
            return Echelon {
                rank: e.0,
                negate: e.1,
                last_pivot: BigInt::from(e.2),
            };
        }
    }
    let mut a = ints;
    let (rank, negate, last_pivot) =
        bareiss(&mut a, rows, cols).expect("BigInt elimination cannot overflow");
    Echelon {
        rank,
        negate,
        last_pivot,
    }
}

trait BareissScalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `(pivot * x - lead * y) / prev`, exact. `None` on overflow.
    fn step(pivot: &Self, x: &Self, lead: &Self, y: &Self, prev: &Self) -> Option<Self>;
}

impl BareissScalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn step(pivot: &Self, x: &Self, lead: &Self, y: &Self, prev: &Self) -> Option<Self> {
        let num = pivot.checked_mul(*x)?.checked_sub(lead.checked_mul(*y)?)?;
        debug_assert_eq!(num % prev, 0);
        Some(num / prev)
    }
}

impl BareissScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn step(pivot: &Self, x: &Self, lead: &Self, y: &Self, prev: &Self) -> Option<Self> {
        let num = pivot * x - lead * y;
        if prev.is_one() {
            return Some(num);
        }
        debug_assert!(Zero::is_zero(&(&num % prev)));
        Some(num / prev)
    }
}

/// Fraction-free row echelon reduction in place. Returns
/// `(rank, odd number of row swaps, last pivot)`.
fn bareiss<T: BareissScalar>(a: &mut [T], rows: usize, cols: usize) -> Option<(usize, bool, T)> {
    let mut rank = 0;
    let mut negate = false;
    let mut prev = T::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
            negate = !negate;
        }
        let pivot = a[rank * cols + c].clone();
        for i in rank + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = T::step(&pivot, &a[i * cols + j], &lead, &a[rank * cols + j], &prev)?;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Some((rank, negate, prev))
}

/// `true` if the two vectors are equal as points of projective space: both
/// nonzero and proportional.
pub fn projectively_equal(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(p) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[p].is_zero() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| x * &b[p] == y * &a[p])
}

/// Rescales a nonzero vector so its first nonzero coordinate is 1.
pub fn normalize_projective(v: &[Rational]) -> Option<Vec<Rational>> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    Some(v.iter().map(|x| x / &lead).collect())
}

/// `serialize_with` helpers writing rationals as `"p/q"` strings.
pub mod ser {
    use serde::ser::{SerializeSeq, Serializer};

    use super::Rational;

    pub fn rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn rational_opt<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn rational_vec_vec<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            seq.serialize_element(&row.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        seq.end()
    }
}
