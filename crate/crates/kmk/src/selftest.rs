//! Aggregated convention checks: the gate for `--verified` runs.
//!
//! Collects the closed-form rank-one table, the rank-one products, the
//! finite-type duality oracle on A1/A2/B2, and the three cover-coefficient
//! values on affine presets into one pass/fail report.

use crate::bruhat::DEFAULT_ELEMENT_CAP;
use crate::engine::{product_constants, PhiTable};
use crate::gcm::preset;
use crate::pairing::duality_check;
use crate::root_datum::build_realization;
use crate::rt::RTElement;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, outcome: crate::error::Result<()>) {
        match outcome {
            Ok(()) => self.checks.push(Check {
                name: name.to_string(),
                passed: true,
                detail: "ok".to_string(),
            }),
            Err(e) => self.checks.push(Check {
                name: name.to_string(),
                passed: false,
                detail: e.to_string(),
            }),
        }
    }
}

fn rank_one_table() -> crate::error::Result<()> {
    let rd = build_realization(preset("A1")?);
    let t = PhiTable::build(&rd, 1, DEFAULT_ELEMENT_CAP)?;
    let expected = [
        (0usize, 0usize, RTElement::one(1)),
        (0, 1, RTElement::character(vec![-1])),
        (1, 1, RTElement::binomial(1, &[-1])),
    ];
    for (w, x, want) in expected {
        if t.value(w, x) != &want {
            return Err(crate::error::Error::DictionaryPinFailure(format!(
                "rank-one table at ({w},{x})"
            )));
        }
    }
    if !t.value(1, 0).is_zero() {
        return Err(crate::error::Error::DictionaryPinFailure(
            "rank-one table support".into(),
        ));
    }
    Ok(())
}

fn rank_one_products() -> crate::error::Result<()> {
    let rd = build_realization(preset("A1")?);
    let t = PhiTable::build(&rd, 1, DEFAULT_ELEMENT_CAP)?;
    let e = rd.identity();
    let s = rd.simple_reflection(0);
    let fail = |what: &str| {
        Err(crate::error::Error::DictionaryPinFailure(format!(
            "rank-one product {what}"
        )))
    };
    let dss = product_constants(&t, &s, &s)?;
    if dss.entries.len() != 1 || dss.entry(&s) != Some(&RTElement::binomial(1, &[-1])) {
        return fail("[xi^s]^2");
    }
    let des = product_constants(&t, &e, &s)?;
    if des.entries.len() != 1 || des.entry(&s) != Some(&RTElement::character(vec![-1])) {
        return fail("[xi^e][xi^s]");
    }
    let dee = product_constants(&t, &e, &e)?;
    let want_s = RTElement::character(vec![-1]).neg();
    if dee.entries.len() != 2
        || dee.entry(&e) != Some(&RTElement::one(1))
        || dee.entry(&s) != Some(&want_s)
    {
        return fail("[xi^e]^2");
    }
    Ok(())
}

fn example_m_values() -> crate::error::Result<()> {
    let expect = |rd: &crate::root_datum::RootDatum,
                  y: &[usize],
                  w: &str,
                  v: &str,
                  want: i64|
     -> crate::error::Result<()> {
        let we = rd.parse_word(w)?;
        let ve = rd.parse_word(v)?;
        let got = crate::dualizing::m_coefficient(rd, y, &we, &ve)?;
        if got != want {
            return Err(crate::error::Error::DictionaryPinFailure(format!(
                "cover coefficient at ({w}, {v}): got {got}, want {want}"
            )));
        }
        Ok(())
    };
    let rd = build_realization(preset("affine:A1")?);
    expect(&rd, &[1], "e", "s0", 1)?;
    expect(&rd, &[1], "s0", "s1*s0", 0)?;
    expect(&rd, &[1], "s1*s0", "s0*s1*s0", -1)?;
    let rd = build_realization(preset("affine:A2")?);
    expect(&rd, &[1, 2], "e", "s0", 1)?;
    Ok(())
}

/// Runs the complete self-test battery.
pub fn run_selftest() -> SelftestReport {
    let mut report = SelftestReport::default();
    report.push("rank-one closed-form table", rank_one_table());
    report.push("rank-one products", rank_one_products());
    report.push("duality oracle A1", duality_check("A1"));
    report.push("duality oracle A2", duality_check("A2"));
    report.push("duality oracle B2", duality_check("B2"));
    report.push("cover coefficients on affine presets", example_m_values());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let report = run_selftest();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
