use gca_core::adjoin::{tau_tilde, AdjoinMode};
use gca_core::fixtures::{fix_a, fix_b, fix_c};
use gca_core::laurent::LaurentPolynomial;
use gca_core::unfold::{build, double_constant_check, hadamard_check};

fn unfolded_fix_a() -> Vec<Vec<i64>> {
    let a = fix_a();
    build(a.matrix(), a.divisors(), AdjoinMode::Total).unwrap().matrix().rows()
}

#[test]
fn modified_matrix_of_fix_a() {
    assert_eq!(fix_a().modified().matrix().rows(), vec![vec![0, 4, -3, 5], vec![-4, 0, -2, 7]]);
}

#[test]
fn unfolded_matrix_of_fix_a() {
    let expected = vec![
        vec![0, 0, 4, 4, 4, -9, 15, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 4, 4, 4, -9, 15, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0],
        vec![-4, -4, 0, 0, 0, -4, 14, 0, 0, 0, 0, 1, 0, 0, -1, 0, 0],
        vec![-4, -4, 0, 0, 0, -4, 14, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0],
        vec![-4, -4, 0, 0, 0, -4, 14, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1],
    ];
    assert_eq!(unfolded_fix_a(), expected);
}

#[test]
fn first_mutation_of_fix_a() {
    let t = fix_a().mutate_data(0).unwrap();
    assert_eq!(t.matrix().rows(), vec![vec![0, -8, 3, -5], vec![12, 0, -38, 7]]);
    assert_eq!(t.modified().matrix().rows(), vec![vec![0, -4, 3, -5], vec![4, 0, -38, 7]]);
}

#[test]
fn first_group_mutation_of_fix_a() {
    let a = fix_a();
    let f = build(a.matrix(), a.divisors(), AdjoinMode::Total).unwrap().group_mutate(0).unwrap();
    let expected = vec![
        vec![0, 0, -4, -4, -4, 9, -15, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, -4, -4, -4, 9, -15, 0, -1, 0, 1, 0, 0, 0, 0, 0, 0],
        vec![4, 4, 0, 0, 0, -76, 14, 0, 0, -4, -4, 1, 0, 0, -1, 0, 0],
        vec![4, 4, 0, 0, 0, -76, 14, 0, 0, -4, -4, 0, 1, 0, 0, -1, 0],
        vec![4, 4, 0, 0, 0, -76, 14, 0, 0, -4, -4, 0, 0, 1, 0, 0, -1],
    ];
    assert_eq!(f.matrix().rows(), expected);
}

#[test]
fn second_mutation_entries_follow_the_definitions() {
    let a = fix_a();
    let b = a.matrix().mutate_sequence(&[0, 1]).unwrap();
    assert_eq!(b.get(0, 2), -301);
    let f = build(a.matrix(), a.divisors(), AdjoinMode::Total)
        .unwrap()
        .group_mutate_sequence(&[0, 1])
        .unwrap();
    assert_eq!((f.get(0, 5), f.get(0, 9), f.get(0, 10)), (-903, -47, -48));
    hadamard_check(&f, &b, a.divisors()).unwrap();
    double_constant_check(&f).unwrap();
}

fn assert_poly(found: &LaurentPolynomial, text: &str) {
    let expected = LaurentPolynomial::parse(text, found.table()).unwrap();
    assert_eq!(found, &expected, "computed {found}, expected {expected}");
}

#[test]
fn exchange_polynomials_of_fix_b() {
    let b = fix_b();
    assert_poly(&b.exchange_polynomial(0).unwrap(), "a^4 + p1x*a^2*y + p2x*a*y^2*b + y^3*b^2");
    assert_poly(&b.exchange_polynomial(1).unwrap(), "b^3*x^2 + p1y*b*x + 1");
    assert_eq!(b.tau_variable(0).unwrap().display(b.table()).to_string(), "y");
    assert_eq!(b.tau_variable(1).unwrap().display(b.table()).to_string(), "x^-1");
}

#[test]
fn adjoined_exchange_polynomials_of_fix_b() {
    let a = tau_tilde(&fix_b(), AdjoinMode::Total).unwrap();
    let t = a.seed();
    assert_poly(&t.exchange_polynomial(0).unwrap(), "A^24 + P1x^6*A^12*y + P2x^6*A^6*y^2*B^6 + y^3*B^12");
    assert_poly(&t.exchange_polynomial(1).unwrap(), "B^18*x^2 + P1y^6*B^6*x + 1");
    let tau = |k| LaurentPolynomial::monomial(t.table(), t.tau_variable(k).unwrap());
    assert_poly(&tau(0), "B^4*y*A^-8");
    assert_poly(&tau(1), "x^-1*B^-9");
}

#[test]
fn adjoined_polynomial_is_the_embedded_base_polynomial() {
    let base = fix_b();
    let a = tau_tilde(&base, AdjoinMode::Total).unwrap();
    for k in 0..2 {
        let image = a.embed(&base.exchange_polynomial(k).unwrap()).unwrap();
        assert_eq!(image, a.seed().exchange_polynomial(k).unwrap());
    }
}

#[test]
fn fix_c_first_mutation() {
    let c = fix_c();
    let t = c.mutate(0).unwrap();
    assert_poly(&t.cluster()[0], "(f^2 + f^-1 + 1)*x^-1");
}
