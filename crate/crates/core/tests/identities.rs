use num_traits::{Signed, Zero};
use proptest::prelude::*;
use prym_core::prym::{closed_coefficient, sequences_up_to};
use prym_core::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Sum over perfect matchings of `{0..n}`, sign = (-1)^(crossings).
fn pf_matchings(m: &Matrix) -> Poly {
    fn go(m: &Matrix, left: &[usize], pairs: &mut Vec<(usize, usize)>, acc: &mut Poly) {
        if left.is_empty() {
            let mut crossings = 0;
            for (x, &(a, b)) in pairs.iter().enumerate() {
                for &(c, d) in &pairs[x + 1..] {
                    if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                        crossings += 1;
                    }
                }
            }
            let mut term = Poly::one(m.truncation());
            for &(a, b) in pairs.iter() {
                term = term.try_mul(&m.get(a, b)).unwrap();
            }
            if crossings % 2 == 1 {
                term = term.neg();
            }
            *acc = acc.try_add(&term).unwrap();
            return;
        }
        let first = left[0];
        for k in 1..left.len() {
            let rest: Vec<usize> = left[1..].iter().copied().filter(|&x| x != left[k]).collect();
            pairs.push((first, left[k]));
            go(m, &rest, pairs, acc);
            pairs.pop();
        }
    }
    let idx: Vec<usize> = (0..m.size()).collect();
    let mut acc = Poly::zero(m.truncation());
    go(m, &idx, &mut Vec::new(), &mut acc);
    acc
}

/// Leibniz determinant of a constant matrix.
fn det_leibniz(a: &[Vec<Rational>]) -> Rational {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut p2 = p.clone();
                p2.insert(pos, n - 1);
                out.push(p2);
            }
        }
        out
    }
    let n = a.len();
    let mut total = Rational::zero();
    for p in perms(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term = (0..n).fold(q(1, 1), |acc, i| acc * a[i][p[i]].clone());
        if inversions % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total
}

fn matrix_strategy(max_size: usize) -> impl Strategy<Value = Matrix> {
    (0..=max_size / 2).prop_flat_map(|half| {
        let n = half * 2;
        let cells = n * n.saturating_sub(1) / 2;
        prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), 3), cells).prop_map(
            move |entries| {
                let mut m = Matrix::new(n, 3);
                let mut it = entries.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let coeffs = it.next().unwrap();
                        let p = Poly::from_terms(3, coeffs.into_iter().enumerate().map(|(k, (a, b))| (k, q(a, b))));
                        m.set(i, j, p).unwrap();
                    }
                }
                m
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pfaffian_matches_matching_sum(m in matrix_strategy(6)) {
        prop_assert_eq!(pfaffian(&m).unwrap(), pf_matchings(&m));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn pfaffian_squared_is_determinant(vals in prop::collection::vec((-6i64..=6, 1i64..=4), 6)) {
        let mut m = Matrix::new(4, 1);
        let mut dense = vec![vec![Rational::zero(); 4]; 4];
        let mut it = vals.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let (a, b) = it.next().unwrap();
                m.set(i, j, Poly::constant(q(a, b), 1)).unwrap();
                dense[i][j] = q(a, b);
                dense[j][i] = -q(a, b);
            }
        }
        let pf = pfaffian(&m).unwrap().coeff(0);
        prop_assert_eq!(pf.clone() * pf, det_leibniz(&dense));
    }
}

#[test]
fn exp_series_coefficients() {
    for s in -3i64..=6 {
        let e = exp_scaled_xi::<Rational>(s, 10);
        let mut fact = 1i64;
        for k in 0..10 {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(e.coeff(k), q(s.pow(k as u32), fact), "s={s} k={k}");
        }
    }
}

#[test]
fn pfaffian_route_equals_closed_form() {
    for a in sequences_up_to(12) {
        let w = a.weight();
        for g in [w, w + 1, w + 3] {
            if g < 2 {
                continue;
            }
            let closed = class_b_closed(g, &a).unwrap();
            let pf = class_b_pfaffian(g, &a).unwrap();
            assert_eq!(closed, pf, "g={g} a={a}");
            if g == w {
                assert!(pf.is_zero());
            }
        }
    }
}

#[test]
fn degree_equals_n_a() {
    for a in sequences_up_to(12) {
        let g = (a.weight() + 1).max(2);
        let brute = n_a_bruteforce(&a, DEFAULT_ENUMERATION_BOUND).unwrap();
        assert_eq!(degree_b(g, &a).unwrap(), BigInt::from(brute.clone()), "a={a}");
        assert_eq!(n_a_formula(&a), brute);
    }
}

#[test]
fn exponent_equals_n_a() {
    for a in sequences_up_to(12) {
        let g = a.weight() + 2;
        assert_eq!(beta(g, &a), 1);
        assert_eq!(
            prym_tyurin_exponent(g, &a).unwrap(),
            BigInt::from(n_a_bruteforce(&a, DEFAULT_ENUMERATION_BOUND).unwrap()),
            "a={a}"
        );
    }
}

#[test]
fn class_positive_iff_beta_nonnegative() {
    for a in sequences_up_to(12) {
        let w = a.weight();
        for g in (2..=w + 3).chain([w, w + 1]) {
            if g < 2 {
                continue;
            }
            let c = class_b_closed(g, &a).unwrap();
            assert!(!c.coeff().is_negative());
            assert_eq!(c.coeff().is_positive(), beta(g, &a) >= 0, "g={g} a={a}");
            assert_eq!(c.coeff().is_positive(), general_nonempty(g, &a));
        }
    }
}

#[test]
fn leading_zero_does_not_matter() {
    for a in sequences_up_to(12) {
        if a.values()[0] != 0 {
            continue;
        }
        let Some(p) = a.positive_part() else { continue };
        let g = a.weight() + 1;
        assert_eq!(degree_b(g, &a).unwrap(), degree_b(g, &p).unwrap());
        assert_eq!(n_a_formula(&a), n_a_formula(&p));
        assert_eq!(closed_coefficient::<Rational>(&a), closed_coefficient::<Rational>(&p));
    }
}

#[test]
fn unpointed_staircase_identity() {
    for r in 1..=4 {
        let a = VanishingSequence::unpointed(r);
        let stair = count_syt_staircase(r, DEFAULT_ENUMERATION_BOUND).unwrap();
        assert_eq!(n_a_bruteforce(&a, DEFAULT_ENUMERATION_BOUND).unwrap(), stair);
        assert_eq!(n_a_formula(&a), stair);
    }
    assert_eq!(n_a_formula(&VanishingSequence::unpointed(4)), BigUint::from(768u32));
}

#[test]
fn poincare_degree_of_class_is_point_count() {
    let a: VanishingSequence = "0,1,3".parse().unwrap();
    let c = class_b_closed(5, &a).unwrap();
    let p = Poly::monomial(c.coeff().clone(), c.codim(), 5);
    assert_eq!(poincare_degree(&p, 5), q(8, 1));
}

#[test]
fn fixed_width_scalars_agree_on_small_weights() {
    for a in sequences_up_to(8) {
        let g = a.weight() + 1;
        let big = prym_core::pfaffian::class_b_pfaffian_poly::<Rational>(g, &a).unwrap();
        let wide = prym_core::pfaffian::class_b_pfaffian_poly::<WideRational>(g, &a).unwrap();
        assert_eq!(big.coeff(a.weight()).to_string(), wide.coeff(a.weight()).to_string());
        assert_eq!(
            closed_coefficient::<SmallRational>(&a).to_string(),
            closed_coefficient::<Rational>(&a).to_string()
        );
    }
}
