//! Library results against oracles written from the definitions: Laplace
//! determinants, brute-force ranks, forward-difference derivatives,
//! pointwise products and root sets built into the inputs.

use itertools::Itertools;
use mapstrata::blowup::{
    phi1_values, phi2_coords, phik_len, relation_six_term, skew_coords, veronese, ProjectivePoint,
};
use mapstrata::sample::Sampler;
use mapstrata::strata::{minor_jacobian, stratum_codimension, stratum_dimension};
use mapstrata::sylvester::{build_matrix, in_stratum};
use mapstrata::{rat, BinaryForm, FormTuple, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};

type Grid = Vec<Vec<Rational>>;

fn laplace(m: &Grid) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    (0..n)
        .map(|c| {
            let minor: Grid = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * laplace(&minor);
            if c % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Largest size of a nonzero minor.
fn brute_rank(m: &Grid) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (1..=rows.min(cols))
        .rev()
        .find(|&s| {
            (0..rows).combinations(s).any(|rs| {
                (0..cols).combinations(s).any(|cs| {
                    let sub: Grid = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                        .collect();
                    !laplace(&sub).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

fn grid_of(m: &RationalMatrix) -> Grid {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn random_grid(s: &mut Sampler, rows: usize, cols: usize) -> Grid {
    (0..rows).map(|_| s.vector(cols)).collect()
}

/// `A_k` straight from the definition: row `b (r + 1) + i`, column `c`
/// holds `s_{i, c - b}`.
fn resultant_by_definition(t: &FormTuple, k: usize) -> Grid {
    let (d, r) = (t.degree(), t.r());
    (0..k)
        .flat_map(|b| (0..=r).map(move |i| (b, i)))
        .map(|(b, i)| {
            (0..d + k)
                .map(|c| {
                    if c >= b && c - b <= d {
                        t.forms()[i].coeffs()[c - b].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn determinant_matches_laplace() {
    let mut s = Sampler::new(1);
    for n in 0..=5 {
        for _ in 0..20 {
            let g = random_grid(&mut s, n, n);
            let m = RationalMatrix::from_rows(g.clone())
                .unwrap_or_else(|_| RationalMatrix::zeros(0, 0));
            assert_eq!(m.det().unwrap(), laplace(&g), "{g:?}");
        }
    }
}

#[test]
fn rank_matches_largest_nonzero_minor() {
    let mut s = Sampler::with_bound(2, 2);
    for (rows, cols) in [(3, 3), (3, 5), (4, 4), (5, 3), (4, 6)] {
        for _ in 0..15 {
            let mut g = random_grid(&mut s, rows, cols);
            // Force some dependencies so low ranks show up.
            if s.coin() {
                let c = rat(s.int());
                g[rows - 1] = g[0].iter().zip(&g[1]).map(|(a, b)| a * &c + b).collect();
            }
            let m = RationalMatrix::from_rows(g.clone()).unwrap();
            assert_eq!(m.rank(), brute_rank(&g), "{g:?}");
        }
    }
}

#[test]
fn resultant_matrix_matches_definition() {
    let mut s = Sampler::new(3);
    for d in 1..=4 {
        for r in 0..=2 {
            for k in 1..=d {
                let t = s.tuple(d, r);
                let a = build_matrix(&t, k).unwrap();
                assert_eq!(grid_of(a.matrix()), resultant_by_definition(&t, k));
            }
        }
    }
}

/// `f'(0)` for a polynomial `f` of degree at most `n`, from its values at
/// `0, 1, ..., n`: `sum_j (-1)^(j+1) Delta^j f(0) / j`.
fn derivative_at_zero(values: &[Rational]) -> Rational {
    let mut diffs = values.to_vec();
    let mut total = Rational::zero();
    for j in 1..values.len() {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let term = &diffs[0] / rat(j as i64);
        total = if j % 2 == 1 {
            total + term
        } else {
            total - term
        };
    }
    total
}

fn bumped(t: &FormTuple, form: usize, index: usize, h: i64) -> FormTuple {
    let forms = t
        .forms()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut c = f.coeffs().to_vec();
            if i == form {
                c[index] += rat(h);
            }
            BinaryForm::new(c)
        })
        .collect();
    FormTuple::new(forms).unwrap()
}

#[test]
fn minor_jacobian_matches_forward_differences() {
    let mut s = Sampler::with_bound(4, 3);
    for (d, r, k) in [(2, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 2), (3, 2, 1)] {
        let t = s.tuple(d, r);
        let jac = minor_jacobian(&t, k).unwrap();
        let size = 2 * k;
        let rows = (r + 1) * k;
        let row_sets: Vec<Vec<usize>> = (0..rows).combinations(size).collect();
        let col_sets: Vec<Vec<usize>> = (0..d + k).combinations(size).collect();
        let mut line = 0;
        for rs in &row_sets {
            for cs in &col_sets {
                for form in 0..=r {
                    for index in 0..=d {
                        // The minor has degree at most `size` in one coefficient.
                        let values: Vec<Rational> = (0..=size as i64)
                            .map(|h| {
                                let a = resultant_by_definition(&bumped(&t, form, index, h), k);
                                let sub: Grid = rs
                                    .iter()
                                    .map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect())
                                    .collect();
                                laplace(&sub)
                            })
                            .collect();
                        let col = form * (d + 1) + index;
                        assert_eq!(
                            jac.get(line, col),
                            &derivative_at_zero(&values),
                            "d={d} r={r} k={k}"
                        );
                    }
                }
                line += 1;
            }
        }
        assert_eq!(line, jac.rows());
    }
}

#[test]
fn product_matches_pointwise_evaluation() {
    let mut s = Sampler::new(5);
    for _ in 0..50 {
        let (m, n) = (s.below(4), s.below(4));
        let f = s.form(m);
        let g = s.form(n);
        let fg = f.multiply(&g);
        assert_eq!(fg.degree(), m + n);
        // m + n + 1 points of P^1 determine a form of degree m + n.
        for (x, y) in (0..=(m + n) as i64).map(|x| (x, 1)).chain([(1, 0)]) {
            let (x, y) = (rat(x), rat(y));
            assert_eq!(fg.eval(&x, &y), f.eval(&x, &y) * g.eval(&x, &y));
        }
    }
}

/// `prod (b_i x - a_i y)` over roots `(a_i : b_i)`.
fn form_with_roots(roots: &[(i64, i64)]) -> BinaryForm {
    roots
        .iter()
        .fold(BinaryForm::from_i64(&[1]), |acc, &(a, b)| {
            acc.multiply(&BinaryForm::from_i64(&[b, -a]))
        })
}

#[test]
fn multiplicity_matches_planted_roots() {
    // Distinct points of P^1, including the point at infinity (1 : 0).
    let pool = [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 0), (3, 2)];
    let mut s = Sampler::new(6);
    for _ in 0..200 {
        let d = 1 + s.below(4);
        let r = s.below(3);
        let roots: Vec<Vec<(i64, i64)>> = (0..=r)
            .map(|_| (0..d).map(|_| pool[s.below(pool.len())]).collect())
            .collect();
        let mut expected = 0;
        for p in pool {
            let counts = roots
                .iter()
                .map(|rs| rs.iter().filter(|&&q| q == p).count());
            expected += counts.min().unwrap();
        }
        let forms = roots
            .iter()
            .map(|rs| form_with_roots(rs).scale(&rat(s.nonzero_int())))
            .collect();
        let t = FormTuple::new(forms).unwrap();
        assert_eq!(t.common_root_multiplicity().unwrap(), expected, "{roots:?}");
        for k in 1..=d {
            assert_eq!(
                in_stratum(&t, k).unwrap(),
                expected + k > d,
                "{roots:?} k={k}"
            );
        }
    }
}

#[test]
fn dimension_is_parameter_count() {
    // (g, p) has k(r+1) + (d-k+2) coordinates; scaling g against p and the
    // overall projectivization each remove one.
    for d in 1..=6 {
        for r in 0..=3 {
            for k in 1..=d {
                let params = k * (r + 1) + (d - k + 2);
                assert_eq!(stratum_dimension(d, r, k).unwrap(), params - 2);
                let ambient = (d + 1) * (r + 1) - 1;
                assert_eq!(
                    stratum_codimension(d, r, k).unwrap(),
                    ambient - (params - 2)
                );
            }
        }
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

#[test]
fn coordinate_counts_for_small_levels() {
    for d in 1..=6 {
        for r in 1..=3 {
            let pairs = binom(r + 1, 2);
            assert_eq!(phik_len(d, r, 1), &pairs * binom(d + 1, 2));
            assert_eq!(phik_len(d, r, 2), &pairs * &pairs * binom(d + 2, 4));
        }
    }
}

#[test]
fn phi1_and_six_term_match_laplace() {
    let mut s = Sampler::new(8);
    for _ in 0..30 {
        let t = s.generic(3, 2);
        let u = phi1_values(&t);
        for (i, j) in (0..=2).tuple_combinations() {
            for (m, n) in (0..=3).tuple_combinations() {
                let g = vec![
                    vec![t.coeff(i, m), t.coeff(i, n)],
                    vec![t.coeff(j, m), t.coeff(j, n)],
                ];
                assert_eq!(u.get(i as i64, j as i64, m, n), laplace(&g));
            }
        }
        if in_stratum(&t, 2).unwrap() {
            continue;
        }
        let a = resultant_by_definition(&t, 2);
        for (idx, value) in phi2_coords(&t).unwrap() {
            let rows: Vec<usize> = idx
                .rows
                .iter()
                .enumerate()
                .map(|(p, &i)| (p / 2) * 3 + i)
                .collect();
            let sub: Grid = rows
                .iter()
                .map(|&i| idx.cols.iter().map(|&c| a[i][c].clone()).collect())
                .collect();
            assert_eq!(value, laplace(&sub));
            let rel = relation_six_term(
                &u,
                idx.rows.clone().try_into().unwrap(),
                idx.cols.clone().try_into().unwrap(),
            );
            assert_eq!(rel, value);
        }
    }
}

#[test]
fn skew_and_veronese_by_hand() {
    let nu = ProjectivePoint::from_i64(&[2, -1, 3]).unwrap();
    let at = |i: i64| {
        if (0..3).contains(&i) {
            rat([2, -1, 3][i as usize])
        } else {
            rat(0)
        }
    };
    let expected: Vec<Rational> = (0..=3i64)
        .tuple_combinations()
        .map(|(m, n)| at(m) * at(n - 1) - at(m - 1) * at(n))
        .collect();
    assert_eq!(skew_coords(&nu), expected);
    // Degree-2 monomials of (2, -1, 3): 4, -2, 6, 1, -3, 9.
    assert_eq!(
        veronese(&nu, 2).coords(),
        &[rat(4), rat(-2), rat(6), rat(1), rat(-3), rat(9)]
    );
}
