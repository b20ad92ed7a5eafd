//! Localized K-classes as functions on the fixed points of an interval.
//!
//! A class is stored as one fraction per interval element. Genuine classes
//! satisfy the divisibility condition along reflection edges: for an edge
//! x -- s_beta x the difference of values is divisible by 1 - e^beta (up to
//! a monomial unit, which the binomial division absorbs).

use crate::bruhat::BruhatInterval;
use crate::error::{Error, Result};
use crate::fraction::RTFraction;
use crate::rt::RTElement;
use crate::weyl::RealRoot;

/// What a function claims to be; only used for labeling and sanity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkmKind {
    /// Ideal-sheaf basis restriction, supported on x >= w.
    IdealSheaf(usize),
    /// Structure sheaf of an opposite Schubert variety (upper-set sum).
    StructureSheaf(usize),
    Generic,
}

/// A finitely-indexed localized class over a frozen interval. Values are
/// aligned with the interval's element order.
#[derive(Debug, Clone)]
pub struct GkmFunction {
    pub kind: GkmKind,
    pub values: Vec<RTFraction>,
}

impl GkmFunction {
    pub fn zero(interval: &BruhatInterval) -> GkmFunction {
        let n = interval.datum().rank();
        GkmFunction {
            kind: GkmKind::Generic,
            values: vec![RTFraction::zero(n); interval.len()],
        }
    }

    pub fn value(&self, idx: usize) -> &RTFraction {
        &self.values[idx]
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GkmFunction) -> GkmFunction {
        GkmFunction {
            kind: GkmKind::Generic,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &GkmFunction) -> GkmFunction {
        GkmFunction {
            kind: GkmKind::Generic,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GkmFunction) -> GkmFunction {
        GkmFunction {
            kind: GkmKind::Generic,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// All reflection edges within an interval: pairs (a, b) with
/// element(b) = s_beta * element(a) and l(b) > l(a), tagged with beta.
pub fn reflection_edges(interval: &BruhatInterval) -> Vec<(usize, usize, RealRoot)> {
    let rd = interval.datum();
    let mut edges = Vec::new();
    for a in 0..interval.len() {
        for b in 0..interval.len() {
            let (wa, wb) = (interval.element(a), interval.element(b));
            if wb.length() <= wa.length() {
                continue;
            }
            let t = rd.multiply(wb, &rd.inverse(wa));
            // cheap pre-filter: reflections are involutions of odd length
            if t.length().is_multiple_of(2) || rd.multiply(&t, &t).length() != 0 {
                continue;
            }
            if let Ok(beta) = rd.reflection_root(&t) {
                edges.push((a, b, beta));
            }
        }
    }
    edges
}

/// Verifies the edge divisibility condition for a function whose values
/// clear to Laurent polynomials.
pub fn check_gkm_divisibility(interval: &BruhatInterval, f: &GkmFunction) -> Result<()> {
    let rd = interval.datum();
    for (a, b, beta) in reflection_edges(interval) {
        let diff = f.values[a].sub(&f.values[b]);
        let Some(p) = diff.as_element() else {
            return Err(Error::ResidueNotPolynomial(format!(
                "edge {} -- {}",
                interval.element(a).display(rd),
                interval.element(b).display(rd)
            )));
        };
        if !p.is_zero() && p.div_exact_binomial(&beta.coords).is_none() {
            return Err(Error::DictionaryPinFailure(format!(
                "GKM divisibility fails on edge {} -- {} (root {})",
                interval.element(a).display(rd),
                interval.element(b).display(rd),
                beta.display(rd)
            )));
        }
    }
    Ok(())
}

/// Convenience: a function with polynomial values from explicit elements.
pub fn from_elements(interval: &BruhatInterval, values: Vec<RTElement>) -> GkmFunction {
    let n = interval.datum().rank();
    GkmFunction {
        kind: GkmKind::Generic,
        values: values
            .into_iter()
            .map(|p| RTFraction::from_element(n, p))
            .collect(),
    }
}
