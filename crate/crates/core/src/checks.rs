//! Property suites run against a single matrix in rational mode.
//!
//! Each suite sweeps a deterministic family of shifts `λ` and right-hand
//! sides, compares the combinatorial verdicts with the exact oracles, and
//! records every disagreement as a counterexample payload.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::alternating::{alt_length, bound_check_6_1, exists_infinite, is_m_matrix, AltKind, ZMatrix};
use crate::collatz_wielandt::{check_5_11, rho_in_sigma1, rho_in_sigma1_lp, sigma1_faces};
use crate::eq_type1::{conditions_report_3_1, residual1, solvable1};
use crate::eq_type2::{
    cor42_test, necessary_face, solvable_face_probe, solve2_above, subcritical_window, tracedown_witness,
};
use crate::error::{Error, Result};
use crate::matrix::{set_to_json, vec_to_json, ConeVector, IndexSet};
use crate::oracle::poly::order_by_rank;
use crate::oracle::queries::{nonneg_solution, rational_matrix};
use crate::scalar::{Field, Rational, SpectralPair};
use crate::spectral::Analysis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Type1Conditions,
    Type2Above,
    ProbeFaceAtRho,
    ProbeFaceBelowRho,
    RhoInSigma1,
    ThreeWayAtRho,
    AlternatingBounds,
    FaceGap,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Type1Conditions,
        Property::Type2Above,
        Property::ProbeFaceAtRho,
        Property::ProbeFaceBelowRho,
        Property::RhoInSigma1,
        Property::ThreeWayAtRho,
        Property::AlternatingBounds,
        Property::FaceGap,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Type1Conditions => "thm3.1",
            Property::Type2Above => "cor4.2",
            Property::ProbeFaceAtRho => "thm4.13",
            Property::ProbeFaceBelowRho => "cor4.20",
            Property::RhoInSigma1 => "thm5.10",
            Property::ThreeWayAtRho => "thm5.11",
            Property::AlternatingBounds => "cor6.4",
            Property::FaceGap => "cor4.8-gap",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::Input(format!("unknown property `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub property: Property,
    pub pass: bool,
    pub cases: usize,
    pub counterexamples: Vec<Value>,
    pub details: Map<String, Value>,
}

impl CheckReport {
    fn new(property: Property) -> Self {
        CheckReport { property, pass: true, cases: 0, counterexamples: Vec::new(), details: Map::new() }
    }

    fn case(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.pass = false;
            self.counterexamples.push(payload());
        }
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.details.clone();
        out.insert("property".into(), json!(self.property.id()));
        out.insert("pass".into(), json!(self.pass));
        out.insert("cases".into(), json!(self.cases));
        out.insert("counterexamples".into(), Value::Array(self.counterexamples.clone()));
        Value::Object(out)
    }
}

pub fn run(property: Property, an: &Analysis<Rational>) -> Result<CheckReport> {
    match property {
        Property::Type1Conditions => type1_conditions(an),
        Property::Type2Above => type2_above(an),
        Property::ProbeFaceAtRho => probe_face_at_rho(an),
        Property::ProbeFaceBelowRho => probe_face_below_rho(an),
        Property::RhoInSigma1 => rho_in_sigma1_suite(an),
        Property::ThreeWayAtRho => three_way_at_rho(an),
        Property::AlternatingBounds => alternating_bounds(an),
        Property::FaceGap => face_gap(an),
    }
}

fn third() -> Rational {
    Rational::new(1.into(), 3.into())
}

/// Positive shifts: every class radius and the radii `± 1/3`.
pub fn lambda_sweep(an: &Analysis<Rational>) -> Vec<Rational> {
    let mut out: Vec<Rational> = an
        .class_radii()
        .iter()
        .flat_map(|r| [r.clone() - third(), r.clone(), r.clone() + third()])
        .filter(|l| *l > Rational::zero())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Unit vectors, class indicators and the all-ones vector.
pub fn rhs_sweep(an: &Analysis<Rational>) -> Vec<ConeVector<Rational>> {
    let n = an.n();
    let mut out: Vec<Vec<Rational>> = (0..n).map(|i| ConeVector::<Rational>::unit(n, i).into_entries()).collect();
    for class in an.classes().classes() {
        let mut v = vec![Rational::zero(); n];
        class.iter().for_each(|&i| v[i] = Rational::one());
        out.push(v);
    }
    out.push(vec![Rational::one(); n]);
    out.sort();
    out.dedup();
    out.into_iter().map(|v| ConeVector::new(v).expect("nonnegative")).collect()
}

fn lp_solvable(an: &Analysis<Rational>, shift: &Rational, b: &ConeVector<Rational>, sign: i64) -> Result<bool> {
    // sign = 1: (λI − P)x = b; sign = −1: (P − λI)x = b
    let m = an.matrix().matrix().shift(shift);
    let a = if sign > 0 { m.neg() } else { m };
    Ok(nonneg_solution(&rational_matrix(&a)?, b.entries(), None)?.is_some())
}

fn type1_conditions(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::Type1Conditions);
    for lambda in lambda_sweep(an) {
        for b in rhs_sweep(an) {
            let lp = lp_solvable(an, &lambda, &b, 1)?;
            let verdict = solvable1(an, &lambda, &b)?;
            let conditions = conditions_report_3_1(an, &lambda, &b);
            let ok = lp == verdict && conditions.as_ref().is_ok_and(|c| c.a == lp);
            rep.case(ok, || {
                json!({
                    "lambda": lambda.to_json(),
                    "b": b.to_json(),
                    "lp": lp,
                    "solvable1": verdict,
                    "conditions": match &conditions {
                        Ok(c) => c.to_json(),
                        Err(e) => json!(e.to_string()),
                    },
                })
            });
        }
    }
    Ok(rep)
}

fn type2_above(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::Type2Above);
    for lambda in lambda_sweep(an) {
        for b in rhs_sweep(an) {
            if lambda <= an.local_rho(b.entries()) {
                continue;
            }
            let lp = lp_solvable(an, &lambda, &b, -1)?;
            let verdict = cor42_test(an, &lambda, &b);
            let mut built_ok = true;
            if verdict {
                let x = solve2_above(an, &lambda, &b)?;
                let neg_residual = residual1(an.matrix(), &lambda, x.entries(), &b.entries().iter().map(|v| -v.clone()).collect::<Vec<_>>());
                built_ok = neg_residual.is_zero()
                    && an.ord_and_pair(x.entries()) == SpectralPair::new(lambda.clone(), 1);
            }
            rep.case(lp == verdict && built_ok, || {
                json!({ "lambda": lambda.to_json(), "b": b.to_json(), "lp": lp, "cor4_2": verdict, "construction_ok": built_ok })
            });
        }
    }
    Ok(rep)
}

fn probe_face_at_rho(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::ProbeFaceAtRho);
    let rho = an.rho().clone();
    let probe = solvable_face_probe(an.matrix(), &rho)?;
    let generated = an.classes().smallest_initial_superset(&probe);
    let expected = necessary_face(an, &rho)?;
    rep.detail("probe", set_to_json(&probe));
    rep.detail("face", expected.to_json());
    rep.case(generated == expected, || {
        json!({ "probe_face": generated.to_json(), "strict_access_set": expected.to_json() })
    });
    let tax = an.taxonomy();
    let ca = an.classes();
    for alpha in (0..ca.num_classes()).filter(|&c| tax.basic[c] && tax.distinguished_for_transpose[c]) {
        let (x, b) = tracedown_witness(an, alpha)?;
        let lhs: Vec<Rational> = an
            .matrix()
            .apply(x.entries())
            .into_iter()
            .zip(x.entries())
            .map(|(px, xi)| px - rho.clone() * xi.clone())
            .collect();
        let solves = lhs.as_slice() == b.entries();
        let pattern = (0..ca.num_classes()).all(|beta| {
            let b_nonzero = ca.class(beta).iter().any(|&v| !b.entries()[v].is_zero());
            let x_positive = ca.class(beta).iter().all(|&v| x.entries()[v] > Rational::zero());
            let x_zero = ca.class(beta).iter().all(|&v| x.entries()[v].is_zero());
            b_nonzero == ca.strictly_accesses(beta, alpha)
                && if ca.has_access(beta, alpha) { x_positive } else { x_zero }
        });
        rep.case(solves && pattern, || {
            json!({ "alpha": alpha + 1, "x": x.to_json(), "b": b.to_json(), "solves": solves, "support_pattern": pattern })
        });
    }
    Ok(rep)
}

/// Three rational shifts strictly inside `(r, ρ)`, where `r` is the largest
/// real eigenvalue below `ρ` (or `0` when there is none or it is negative).
pub fn subcritical_samples(an: &Analysis<Rational>) -> Result<Vec<Rational>> {
    let r = subcritical_window(an)?.unwrap_or(0.0).max(0.0);
    let lo = Rational::from_f64(r).ok_or_else(|| Error::Numeric("non-finite eigenvalue".into()))?;
    let rho = an.rho().clone();
    if rho <= lo {
        return Ok(Vec::new());
    }
    Ok((1..=3)
        .map(|k| lo.clone() + (rho.clone() - lo.clone()) * Rational::new(k.into(), 4.into()))
        .collect())
}

fn probe_face_below_rho(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::ProbeFaceBelowRho);
    let expected = an.initial_over(&an.taxonomy().basic_classes());
    rep.detail("face", expected.to_json());
    rep.detail("r", json!(subcritical_window(an)?));
    for lambda in subcritical_samples(an)? {
        let probe = solvable_face_probe(an.matrix(), &lambda)?;
        rep.case(&probe == expected.indices(), || {
            json!({ "lambda": lambda.to_json(), "probe": set_to_json(&probe), "expected": expected.to_json() })
        });
    }
    Ok(rep)
}

fn rho_in_sigma1_suite(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::RhoInSigma1);
    let (i1, i2) = sigma1_faces(an);
    let faces_cover = i1.indices().union(i2.indices()).count() == an.n();
    let combinatorial = an.taxonomy().basic_classes().iter().all(|&c| an.taxonomy().final_class[c]);
    let lp = rho_in_sigma1_lp(an)?;
    let verdict = rho_in_sigma1(an);
    rep.detail("rho_in_sigma1", json!(combinatorial));
    rep.detail("lp_agrees", json!(lp == combinatorial));
    rep.detail("faces_agree", json!(faces_cover == combinatorial));
    rep.case(lp == combinatorial && faces_cover == combinatorial && verdict.is_ok(), || {
        json!({ "basic_final": combinatorial, "lp": lp, "i1": i1.to_json(), "i2": i2.to_json() })
    });
    Ok(rep)
}

fn three_way_at_rho(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::ThreeWayAtRho);
    let c = check_5_11(an)?;
    rep.detail("a", json!(c.a));
    rep.detail("b", json!(c.b));
    rep.detail("c", json!(c.c));
    rep.case(c.agree(), || json!({ "a": c.a, "b": c.b, "c": c.c }));
    Ok(rep)
}

fn alternating_bounds(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::AlternatingBounds);
    let p = rational_matrix(an.matrix().matrix())?;
    for x in rhs_sweep(an) {
        let bc = bound_check_6_1(an, &x)?;
        let sp = an.ord_and_pair(x.entries());
        let algebraic = order_by_rank(&p, x.entries(), &sp.rho);
        rep.case(bc.holds() && algebraic == bc.ord, || {
            json!({ "x": x.to_json(), "bound": bc.to_json(), "order_by_rank": algebraic })
        });
    }
    let mut shifts = lambda_sweep(an);
    shifts.push(Rational::zero());
    for s in shifts {
        let z = ZMatrix::new(s.clone(), an.matrix().clone());
        let steps = an.n() + 2;
        let mut certified = false;
        for x in rhs_sweep(an) {
            let run = alt_length(&z, &x, steps, an.tol())?;
            if run.kind == AltKind::InfiniteCertified {
                certified = true;
                // an infinite run needs s below the local radius
                let below = s < an.local_rho(x.entries());
                rep.case(below, || json!({ "s": s.to_json(), "x": x.to_json(), "infinite_with_s_ge_rho_x": true }));
            }
        }
        if let (true, Some(w)) = exists_infinite(an, &s)? {
            certified |= alt_length(&z, &w, steps, an.tol())?.kind == AltKind::InfiniteCertified;
        }
        let m = is_m_matrix(an, &s);
        rep.case(m != certified, || json!({ "s": s.to_json(), "is_m_matrix": m, "infinite_certified": certified }));
    }
    Ok(rep)
}

fn face_gap(an: &Analysis<Rational>) -> Result<CheckReport> {
    let mut rep = CheckReport::new(Property::FaceGap);
    let ca = an.classes();
    let tax = an.taxonomy();
    let rho = an.rho().clone();
    let probe = solvable_face_probe(an.matrix(), &rho)?;
    let lhs = ca.smallest_initial_superset(&probe);
    let j = an.initial_over(&tax.basic_classes());
    let sources: Vec<usize> = tax
        .basic_classes()
        .into_iter()
        .filter(|&c| tax.distinguished_for_transpose[c])
        .collect();
    let l: IndexSet = ca.union_of(&ca.classes_accessed_from(&sources));
    let middle: IndexSet = j.indices().iter().copied().filter(|i| !l.contains(i)).collect();
    let included = lhs.indices().is_subset(&middle);
    rep.detail("image_face", lhs.to_json());
    rep.detail("eigen_dual_face", set_to_json(&middle));
    rep.detail("equal", json!(lhs.indices() == &middle));
    rep.detail("probe", vec_to_json(&probe.iter().map(|&i| Rational::from_int(i as i64 + 1)).collect::<Vec<_>>()));
    rep.case(included, || json!({ "image_face": lhs.to_json(), "eigen_dual_face": set_to_json(&middle) }));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::NonnegMatrix;
    use crate::scalar::Tolerance;

    fn an(rows: &[&[i64]]) -> Analysis<Rational> {
        Analysis::new(&NonnegMatrix::from_ints(rows).unwrap(), &Tolerance::default()).unwrap()
    }

    #[test]
    fn property_ids_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.id().parse::<Property>().unwrap(), p);
        }
        assert!("thm9.9".parse::<Property>().is_err());
    }

    #[test]
    fn all_suites_pass_on_small_examples() {
        let examples: [&[&[i64]]; 4] = [
            &[&[1, 1], &[0, 1]],
            &[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[0, 1], &[1, 0]],
            &[&[1, 1, 0], &[0, 2, 0], &[0, 1, 1]],
        ];
        for rows in examples {
            let a = an(rows);
            for p in Property::ALL {
                let r = run(p, &a).unwrap();
                assert!(r.pass, "{p} failed on {rows:?}: {}", r.to_json());
            }
        }
    }

    #[test]
    fn rho_in_sigma1_suite_report_shape() {
        let r = run(Property::RhoInSigma1, &an(&[&[1, 1], &[0, 1]])).unwrap().to_json();
        assert_eq!(r["pass"], json!(true));
        assert_eq!(r["rho_in_sigma1"], json!(false));
        assert_eq!(r["lp_agrees"], json!(true));
    }
}
