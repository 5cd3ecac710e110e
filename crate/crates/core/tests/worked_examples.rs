//! Small hand-checkable instances, each cross-checked against the exact LP
//! or algebraic oracles rather than trusted on their own.

mod common;

use common::q;
use pfcone::alternating::{alt_length, bound_check_6_1, exists_infinite, is_m_matrix, AltKind, ZMatrix};
use pfcone::checks::{run, Property};
use pfcone::collatz_wielandt::{cw_numbers, cw_sets, decompose_5_13, decompose_5_4, power_limit_5_6, Upper};
use pfcone::eq_type1::{neumann_partial, solvable1, solvable_set1, solve1};
use pfcone::eq_type2::{
    membership_s, necessary_face, resolvent_sign, solvable2, solvable_face_probe, Certificate, Regime,
};
use pfcone::matrix::{ConeVector, NonnegMatrix};
use pfcone::oracle::eig::eig_all;
use pfcone::oracle::poly::{krylov_local_rho, order_by_rank};
use pfcone::oracle::queries::{nonneg_solution, omega_feasible, rational_matrix};
use pfcone::scalar::{Rational, SpectralPair, Tolerance};
use pfcone::spectral::{local_rho_estimate, Analysis};

fn p(rows: &[&[i64]]) -> NonnegMatrix<Rational> {
    NonnegMatrix::from_ints(rows).unwrap()
}

fn an(rows: &[&[i64]]) -> Analysis<Rational> {
    Analysis::new(&p(rows), &Tolerance::default()).unwrap()
}

fn v(x: &[i64]) -> ConeVector<Rational> {
    ConeVector::from_ints(x).unwrap()
}

fn ints(x: &[i64]) -> Vec<Rational> {
    x.iter().map(|&e| q(e, 1)).collect()
}

const CHAIN: &[&[i64]] = &[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]];
const JORDAN: &[&[i64]] = &[&[1, 1], &[0, 1]];
const SWAP: &[&[i64]] = &[&[0, 1], &[1, 0]];

#[test]
fn diagonal_counterexample() {
    let a = Analysis::new(&NonnegMatrix::diag(&ints(&[0, 1, 2])).unwrap(), &Tolerance::default()).unwrap();
    let b = v(&[0, 0, 1]);
    assert!(!solvable1(&a, &q(1, 1), &b).unwrap());
    assert_eq!(a.local_rho(b.entries()), q(2, 1));
    let m = rational_matrix(&a.matrix().matrix().shift(&q(1, 1)).neg()).unwrap();
    assert!(nonneg_solution(&m, b.entries(), None).unwrap().is_none());
    // the partial sums blow up geometrically in the third coordinate
    assert!(neumann_partial(a.matrix(), &q(1, 1), &b, 40).unwrap().entries()[2] > q(1 << 30, 1));
    let pm = rational_matrix(a.matrix().matrix()).unwrap();
    assert_eq!(krylov_local_rho(&pm, b.entries()), 2.0);
}

#[test]
fn type1_solutions_match_direct_solves() {
    let r = solve1(&an(JORDAN), &q(2, 1), &v(&[1, 1])).unwrap();
    assert_eq!(r.x0.unwrap().entries(), ints(&[2, 1]).as_slice());
    assert!(r.unique);

    let r = solve1(&an(CHAIN), &q(3, 1), &v(&[1, 1, 1])).unwrap();
    assert_eq!(r.x0.unwrap().entries(), &[q(3, 2), q(1, 2), q(1, 2)]);

    let r = solve1(&an(CHAIN), &q(3, 2), &v(&[0, 0, 1])).unwrap();
    assert_eq!(r.x0.unwrap().entries(), ints(&[0, 0, 2]).as_slice());
    assert_eq!(solvable_set1(&an(CHAIN), &q(3, 2)).unwrap().to_vec(), vec![2]);

    let sums = neumann_partial(&p(JORDAN), &q(2, 1), &v(&[1, 1]), 200).unwrap().into_entries();
    assert!((pfcone::scalar::Field::to_f64(&sums[0]) - 2.0).abs() < 1e-12);
}

#[test]
fn type2_regimes() {
    let a = an(&[&[2, 0], &[1, 1]]);
    let r = solvable2(&a, &q(2, 1), &v(&[0, 1])).unwrap();
    assert_eq!(r.regime, Regime::Above);
    assert_eq!(r.certificate, Certificate::Cor42);
    assert_eq!(r.x.unwrap().entries(), ints(&[1, 0]).as_slice());

    let r = solvable2(&an(&[&[1, 0], &[1, 2]]), &q(2, 1), &v(&[1, 0])).unwrap();
    assert!(!r.solvable);

    let r = solvable2(&a, &q(1, 1), &v(&[1, 0])).unwrap();
    assert_eq!(r.regime, Regime::Below);
    assert_eq!(r.certificate, Certificate::Lp);

    assert_eq!(necessary_face(&an(JORDAN), &q(1, 1)).unwrap().to_vec(), vec![0]);
    assert_eq!(necessary_face(&a, &q(2, 1)).unwrap().to_vec(), vec![1]);
    assert_eq!(solvable_face_probe(&p(JORDAN), &q(1, 1)).unwrap().into_iter().collect::<Vec<_>>(), vec![0]);
    assert_eq!(solvable_face_probe(&p(SWAP), &q(1, 2)).unwrap().len(), 2);

    let m = membership_s(&an(JORDAN), &q(1, 1), &v(&[1, 0])).unwrap();
    assert!(m.in_s1 && m.in_s2 && m.in_s3);
    let m = membership_s(&an(JORDAN), &q(1, 1), &v(&[0, 1])).unwrap();
    assert!(!m.in_s1 && !m.in_s2 && !m.in_s3);
}

#[test]
fn resolvent_signs_on_the_swap() {
    let s = resolvent_sign(&p(SWAP), &q(9, 10)).unwrap();
    assert_eq!(s.inverse_positive, Some(true));
    assert!(s.adjugate_positive);
    let s = resolvent_sign(&p(SWAP), &q(11, 10)).unwrap();
    assert_eq!(s.inverse_positive, Some(false));
    let spectrum = eig_all(&p(SWAP).to_f64().into_matrix(), &Tolerance::default()).unwrap();
    let mut re: Vec<f64> = spectrum.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!(re.iter().zip([-1.0, 1.0]).all(|(a, b)| (a - b).abs() < 1e-12), "{re:?}");
}

#[test]
fn collatz_wielandt_examples() {
    let c = cw_numbers(&an(SWAP), &v(&[1, 2])).unwrap();
    assert_eq!((c.r_lower, c.r_upper, c.rho_x), (q(1, 2), Upper::Finite(q(2, 1)), q(1, 1)));
    let c = cw_numbers(&an(JORDAN), &v(&[0, 1])).unwrap();
    assert_eq!((c.r_lower, c.r_upper), (q(1, 1), Upper::Infinite));

    let s = cw_sets(&an(CHAIN)).unwrap();
    assert_eq!((s.sup_omega.clone(), s.inf_sigma1.clone()), (q(2, 1), q(2, 1)));
    assert!(!s.inf_sigma1_attained);
    // sup Ω is attained exactly at ρ and no further
    let pm = rational_matrix(p(CHAIN).matrix()).unwrap();
    assert!(omega_feasible(&pm, &q(2, 1)).unwrap());
    assert!(!omega_feasible(&pm, &q(201, 100)).unwrap());

    let d = an(&[&[2, 0], &[0, 1]]);
    let (x1, x2) = decompose_5_4(&d, &v(&[1, 1])).unwrap();
    assert_eq!((x1.entries(), x2.entries()), (ints(&[1, 0]).as_slice(), ints(&[0, 1]).as_slice()));
    let (x1, x2) = decompose_5_13(&an(&[&[2, 0], &[1, 1]]), &v(&[1, 0])).unwrap();
    assert_eq!((x1.entries(), x2.entries()), (ints(&[1, 1]).as_slice(), ints(&[0, 1]).as_slice()));

    assert!(!power_limit_5_6(&an(SWAP), &v(&[1, 0])).unwrap().exists);
    assert!(!power_limit_5_6(&an(JORDAN), &v(&[0, 1])).unwrap().exists);
    assert!(power_limit_5_6(&an(SWAP), &v(&[1, 1])).unwrap().exists);
}

#[test]
fn alternating_examples() {
    let tol = Tolerance::default();
    let j = p(JORDAN);
    let r = alt_length(&ZMatrix::new(q(1, 1), j.clone()), &v(&[0, 1]), 8, &tol).unwrap();
    assert_eq!(r.kind, AltKind::Finite(2));
    let r = alt_length(&ZMatrix::new(q(2, 1), j), &v(&[1, 0]), 8, &tol).unwrap();
    assert_eq!(r.kind, AltKind::Finite(0));

    let a = an(JORDAN);
    let (inf, w) = exists_infinite(&a, &q(1, 2)).unwrap();
    assert!(inf);
    assert_eq!(w.unwrap().support().into_iter().collect::<Vec<_>>(), vec![0]);
    assert!(is_m_matrix(&a, &q(1, 1)) && !is_m_matrix(&a, &q(1, 2)));

    let b = bound_check_6_1(&a, &v(&[0, 1])).unwrap();
    assert_eq!((b.m_observed, b.ord, b.nu), (2, 2, 2));
    let pm = rational_matrix(a.matrix().matrix()).unwrap();
    assert_eq!(order_by_rank(&pm, &ints(&[0, 1]), &q(1, 1)), 2);
    assert_eq!(a.ord_and_pair(&ints(&[0, 1])), SpectralPair::new(q(1, 1), 2));
}

#[test]
fn estimator_examples() {
    let d = NonnegMatrix::diag(&ints(&[2, 3])).unwrap();
    assert!((local_rho_estimate(&d, &ints(&[1, 1]), 100).unwrap() - 3.0).abs() < 1e-6);
    let e = local_rho_estimate(&p(JORDAN), &ints(&[0, 1]), 5000).unwrap();
    assert!((e - 1.0).abs() < 0.05);
}

#[test]
fn property_suites_on_examples() {
    for rows in [CHAIN, JORDAN, SWAP, &[&[2, 0], &[1, 1]], &[&[1, 0], &[1, 2]]] {
        let a = an(rows);
        for prop in Property::ALL {
            let r = run(prop, &a).unwrap();
            assert!(r.pass, "{prop} on {rows:?}: {}", r.to_json());
        }
    }
}
