//! Certificate producers behind `verify --suite`.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{default_labels, Certificate};
use crate::algebra::{smith_normal_form, Matrix};
use crate::catalogue::{pi2_to_pi4, pi6_to_pi7, Label};
use crate::cohomology::{
    class_order, cocycle_from_extension, h2_one_relator, relator_pairing, restriction_nonzero, transfer_identity_check,
};
use crate::error::Result;
use crate::geometry::{
    euler_number, freeness_sample, klein_quotient_check, verify_relations_in_rep, FlatAffine, Representation,
};
use crate::invariants::invariant_report;
use crate::towers::{case_data, catalogue_witness, circle_pc, ipi, CASES};
use crate::words::Word;
use crate::{Int, Rat};

/// Cohomology groups of the seven twist cases, in case order.
pub const EXPECTED_H2: [&str; 7] = ["Z_2", "Z_2", "Z", "Z_2", "Z", "Z_2", "Z_2"];

/// `(case, k)` pairs whose catalogue identification is certified.
fn identification_inputs() -> Vec<(u8, i64)> {
    let mut v = vec![(1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (5, 0), (6, 0), (6, 1)];
    for k in -5..=5 {
        v.extend([(3, k), (5, k), (4, k), (7, k)]);
    }
    v.sort_unstable();
    v.dedup();
    v
}

fn check_value(c: &crate::check::Check) -> Value {
    c.witness.clone().map_or(Value::Null, Value::String)
}

pub fn paper_suite() -> Result<Vec<Certificate>> {
    let mut certs = Vec::new();

    for (&(case, _, _), want) in CASES.iter().zip(EXPECTED_H2) {
        let (p, _, phi) = case_data(case)?;
        let got = h2_one_relator(&p, &phi)?.describe();
        certs.push(Certificate::new(
            format!("cohomology.case{case}"),
            json!({ "case": case, "phi": phi.signs(), "expected": want }),
            got == want,
            json!({ "h2": got }),
        ));
    }

    for (case, k) in identification_inputs() {
        let target = ipi(case, k)?;
        let (label, map) = catalogue_witness(case, k)?;
        let check = map.verify(&label.pc()?, &target)?;
        let (fwd, bwd) = map.format(&label.generator_names(), target.names());
        certs.push(Certificate::new(
            format!("identification.case{case}.k{k}"),
            json!({ "case": case, "k": k }),
            check.passed,
            json!({ "catalogue": label.to_string(), "fwd": fwd, "bwd": bwd, "failure": check_value(&check) }),
        ));
    }
    for k in -5..=5 {
        for (from, to, map) in [(2, 4, pi2_to_pi4()), (6, 7, pi6_to_pi7())] {
            let check = map.verify(&ipi(from, k)?, &ipi(to, k)?)?;
            certs.push(Certificate::new(
                format!("identification.pi{from}-pi{to}.k{k}"),
                json!({ "k": k }),
                check.passed,
                check_value(&check),
            ));
        }
    }

    for k in (-5..=5).filter(|&k| k != 0) {
        let label = Label::Gamma(k);
        let check =
            verify_relations_in_rep(&label.pc()?, &label.representation()?)?.and(klein_quotient_check(k, None)?);
        certs.push(Certificate::new(
            format!("heisenberg.gamma.k{k}"),
            json!({ "k": k }),
            check.passed,
            check_value(&check),
        ));
        let label = Label::Delta(k);
        let check = verify_relations_in_rep(&label.pc()?, &label.representation()?)?;
        let euler = euler_number(k)?;
        certs.push(Certificate::new(
            format!("heisenberg.delta.k{k}"),
            json!({ "k": k }),
            check.passed && euler.abs() == k.abs(),
            json!({ "euler_number": euler, "failure": check_value(&check) }),
        ));
    }

    for &(case, _, _) in CASES.iter() {
        let (p, _, phi) = case_data(case)?;
        for k in -5..=5 {
            let finite = class_order(&p, &phi, &Int::from(k))?.is_finite();
            let restricted = restriction_nonzero(&ipi(case, k)?);
            let expect_infinite = (case == 3 || case == 5) && k != 0;
            certs.push(Certificate::new(
                format!("dichotomy.case{case}.k{k}"),
                json!({ "case": case, "k": k }),
                finite != restricted && finite != expect_infinite,
                json!({ "finite_order": finite, "restriction_nonzero": restricted }),
            ));
            if !phi.is_trivial() {
                let check = transfer_identity_check(&p, &phi, k)?;
                certs.push(Certificate::new(
                    format!("transfer.case{case}.k{k}"),
                    json!({ "case": case, "k": k }),
                    check.passed,
                    check_value(&check),
                ));
            }
        }
    }

    for label in Label::FLAT {
        let r = invariant_report(&label)?;
        let name = label.to_string();
        certs.push(Certificate::new(
            format!("holonomy.{name}"),
            json!({ "label": name }),
            r.holonomy_is_elementary_2 && r.holonomy_order.is_power_of_two() && r.holonomy_order <= 8,
            json!({ "order": r.holonomy_order }),
        ));
        let inj = r.injectivity.clone();
        certs.push(Certificate::new(
            format!("torus-rank.{name}"),
            json!({ "label": name }),
            r.torus_rank == r.h1_rank && inj.as_ref().is_some_and(|i| i.passed),
            json!({ "torus_rank": r.torus_rank, "h1_rank": r.h1_rank, "injectivity": inj }),
        ));
        let hc = r.halperin_carlsson.clone();
        let equality = label != Label::T3 || hc.as_ref().is_some_and(|h| h.two_pow_s == 8 && h.betti_sum == 8);
        certs.push(Certificate::new(
            format!("halperin-carlsson.{name}"),
            json!({ "label": name }),
            r.hc_pass && equality,
            serde_json::to_value(&hc).expect("serializable"),
        ));
    }
    Ok(certs)
}

/// Bounded fixed-point search over every default catalogue representation,
/// plus a rotation that must be caught.
pub fn freeness_suite(max_len: u64) -> Result<Vec<Certificate>> {
    let mut certs = Vec::new();
    for label in default_labels() {
        let report = freeness_sample(&label.pc()?, &label.representation()?, max_len)?;
        certs.push(Certificate::new(
            format!("freeness.{label}"),
            json!({ "label": label.to_string(), "max_len": max_len }),
            report.is_free(),
            json!({ "words_checked": report.words_checked, "fixed": report.fixed }),
        ));
    }
    let rotation = FlatAffine::diagonal(&[1, -1, -1], vec![Rat::zero(), Rat::zero(), Rat::zero()])?;
    let report = freeness_sample(&circle_pc(), &Representation::Flat(vec![rotation]), max_len)?;
    certs.push(Certificate::new(
        "freeness.control-rotation",
        json!({ "max_len": max_len }),
        !report.is_free(),
        json!({ "fixed": report.fixed }),
    ));
    Ok(certs)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix<Int> {
    let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let data = (0..r * c).map(|_| Int::from(rng.gen_range(-9..=9))).collect();
    Matrix::new(r, c, data).expect("sizes agree")
}

fn snf_failure(m: &Matrix<Int>) -> Option<String> {
    let s = smith_normal_form(m);
    let mut diag = Matrix::zeros(m.rows(), m.cols());
    for (i, d) in s.d.iter().enumerate() {
        diag[(i, i)] = d.clone();
    }
    let product = s.u.mul(m).and_then(|x| x.mul(&s.v)).ok()?;
    if product != diag {
        return Some(format!("u m v != diag for {m:?}"));
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() {
        return Some(format!("non-unimodular transform for {m:?}"));
    }
    let chain = s.d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) });
    if !chain || s.d.iter().any(Signed::is_negative) {
        return Some(format!("invariant factors {:?} do not form a divisibility chain", s.d));
    }
    None
}

fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_syllables((0..len).map(|_| (rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1 } else { -1 })))
}

/// Seeded random checks: SNF certificates, collection against the faithful
/// models, the cocycle identity and the relator pairing round trip.
pub fn properties_suite(seed: u64) -> Result<Vec<Certificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certs = Vec::new();

    let failures: Vec<String> = (0..500).filter_map(|_| snf_failure(&random_matrix(&mut rng))).collect();
    certs.push(Certificate::new(
        "properties.snf",
        json!({ "seed": seed, "matrices": 500 }),
        failures.is_empty(),
        json!(failures),
    ));

    for label in default_labels() {
        let p = label.pc()?;
        let rep = label.representation()?;
        let mut bad = Vec::new();
        for _ in 0..200 {
            let w = random_word(&mut rng, p.len(), 12);
            if rep.eval(&w)? != rep.eval_nf(&p.collect(&w)?)? {
                bad.push(w.display(p.names()).to_string());
            }
        }
        certs.push(Certificate::new(
            format!("properties.collection.{label}"),
            json!({ "seed": seed, "label": label.to_string(), "words": 200 }),
            bad.is_empty(),
            json!(bad),
        ));
    }

    for &(case, _, _) in CASES.iter() {
        let (p, _, _) = case_data(case)?;
        let relator = &p.relators()[0];
        for k in -2..=2 {
            let f = cocycle_from_extension(&ipi(case, k)?, 2)?;
            let violation = f.cocycle_violation();
            let pairing = relator_pairing(&f, relator)?;
            certs.push(Certificate::new(
                format!("properties.cocycle.case{case}.k{k}"),
                json!({ "case": case, "k": k, "window": 2 }),
                violation.is_none() && pairing == k,
                json!({
                    "pairing": pairing,
                    "violation": violation.map(|t| t.iter().map(|a| a.0.clone()).collect::<Vec<_>>()),
                }),
            ));
        }
    }
    Ok(certs)
}
