//! Finite-type localization pairing: the independent duality oracle.
//!
//! Over a finite Weyl group the structure-sheaf classes of the thin
//! Schubert varieties are generated by an ascending divided-difference
//! recursion from the Koszul class of the point, and the global pairing of
//! two localized classes is the weighted fixed-point sum
//! sum_x S(x) F(x) / prod_{beta>0} (1 - e^{x beta}). Neither construction
//! touches the triangular inversion that produces the basis table, which is
//! what makes the delta-pairing test an honest oracle for the engine's
//! conventions.

use crate::bruhat::{enumerate_interval, BruhatInterval, DEFAULT_ELEMENT_CAP};
use crate::engine::PhiTable;
use crate::error::{Error, Result};
use crate::fraction::RTFraction;
use crate::gkm::{GkmFunction, GkmKind};
use crate::root_datum::{build_realization, RootDatum};
use crate::rt::RTElement;
use crate::weyl::{RealRoot, WeylElement};

/// Enumerates the whole Weyl group of a finite-type datum.
pub fn full_group_interval(rd: &RootDatum, element_cap: usize) -> Result<BruhatInterval> {
    if !rd.gcm().is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    // the breadth-first enumeration stops as soon as a length level is
    // empty, and the longest length is below the group order
    enumerate_interval(rd, element_cap, None, element_cap)
}

/// All positive roots of a finite-type datum: the inversion set of the
/// longest element.
pub fn positive_roots(interval: &BruhatInterval) -> Vec<RealRoot> {
    let rd = interval.datum();
    let longest = interval
        .elements()
        .last()
        .expect("intervals contain the identity");
    rd.inversion_set(longest)
}

/// The structure-sheaf classes of all thin Schubert varieties, indexed like
/// the interval: h_e is the Koszul class of the point, and
/// h_{w s_i} = D^_i h_w along ascending covers, with
/// (D^_i h)(x) = h(x)/(1-e^{x a_i}) + h(x s_i)/(1-e^{-x a_i}).
pub fn thin_classes(interval: &BruhatInterval) -> Result<Vec<GkmFunction>> {
    let rd = interval.datum();
    let n = rd.rank();
    let delta_plus = positive_roots(interval);

    let mut koszul = RTElement::one(n);
    for beta in &delta_plus {
        koszul = koszul.mul(&RTElement::binomial(n, &beta.coords));
    }
    let mut base = vec![RTFraction::zero(n); interval.len()];
    base[0] = RTFraction::from_element(n, koszul);

    let mut classes: Vec<Option<Vec<RTFraction>>> = vec![None; interval.len()];
    classes[0] = Some(base);
    for idx in 1..interval.len() {
        let w = interval.element(idx);
        let i = *w.word().last().unwrap();
        let shorter = rd.mul_gen(w, i);
        let prev_idx = interval
            .index_of(&shorter)
            .expect("interval is lower closed");
        let prev = classes[prev_idx]
            .as_ref()
            .expect("enumeration order is ascending in length");
        let mut next = vec![RTFraction::zero(n); interval.len()];
        for x_idx in 0..interval.len() {
            let x = interval.element(x_idx);
            let xs = rd.mul_gen(x, i);
            let xs_idx = interval
                .index_of(&xs)
                .expect("finite group interval is closed under right multiplication");
            let x_alpha = x.image_of_simple(i);
            let neg_x_alpha: Vec<i64> = x_alpha.iter().map(|v| -v).collect();
            let mut a = prev[x_idx].clone();
            a.div_binomial_in_place(&x_alpha);
            let mut b = prev[xs_idx].clone();
            b.div_binomial_in_place(&neg_x_alpha);
            next[x_idx] = a.add(&b);
        }
        classes[idx] = Some(next);
    }
    Ok(classes
        .into_iter()
        .map(|values| GkmFunction {
            kind: GkmKind::Generic,
            values: values.expect("all classes are generated"),
        })
        .collect())
}

/// The structure-sheaf class of one thin Schubert variety.
pub fn thin_structure_sheaf(interval: &BruhatInterval, w: &WeylElement) -> Result<GkmFunction> {
    let idx = interval
        .index_of(w)
        .ok_or_else(|| Error::Usage("element outside the interval".into()))?;
    Ok(thin_classes(interval)?.swap_remove(idx))
}

/// The Euler-characteristic pairing of a cohomology-side class with a
/// homology-side class over a finite group; the denominators must cancel
/// exactly.
pub fn ab_pairing(
    interval: &BruhatInterval,
    s: &GkmFunction,
    f: &GkmFunction,
) -> Result<RTElement> {
    let rd = interval.datum();
    let n = rd.rank();
    let delta_plus = positive_roots(interval);
    let mut total = RTFraction::zero(n);
    for x_idx in 0..interval.len() {
        let x = interval.element(x_idx);
        let mut term = s.values[x_idx].mul(&f.values[x_idx]);
        if term.is_zero() {
            continue;
        }
        for beta in &delta_plus {
            let img = x.apply_root(&beta.coords);
            term.div_binomial_in_place(&img);
        }
        total = total.add(&term);
    }
    total.as_element().ok_or_else(|| {
        Error::ResidueNotPolynomial("fixed-point sum kept a denominator".into())
    })
}

/// Checks the delta-pairing of the basis table against the thin classes.
fn delta_pairing_check(preset_name: &str, interval: &BruhatInterval, table: &PhiTable) -> Result<()> {
    let rd = interval.datum();
    let thin = thin_classes(interval)?;
    let n = rd.rank();
    for u in 0..interval.len() {
        let phi_u = table.function(u);
        for (v, thin_v) in thin.iter().enumerate() {
            let pairing = ab_pairing(interval, &phi_u, thin_v)?;
            let expected = if u == v {
                RTElement::one(n)
            } else {
                RTElement::zero()
            };
            if pairing != expected {
                return Err(Error::DictionaryPinFailure(format!(
                    "duality failed on {preset_name} at ({}, {})",
                    interval.element(u).display(rd),
                    interval.element(v).display(rd)
                )));
            }
        }
    }
    Ok(())
}

/// Gate-time duality check through a supplied table builder (the convention
/// gate passes its internal builder here to avoid re-entering itself).
pub(crate) fn duality_check_with(
    builder: fn(BruhatInterval) -> Result<PhiTable>,
    preset_name: &str,
) -> Result<()> {
    let rd = build_realization(crate::gcm::preset(preset_name)?);
    let interval = full_group_interval(&rd, DEFAULT_ELEMENT_CAP)?;
    let table = builder(interval.clone())?;
    delta_pairing_check(preset_name, &interval, &table)
}

/// Public duality check through gated table construction.
pub fn duality_check(preset_name: &str) -> Result<()> {
    let rd = build_realization(crate::gcm::preset(preset_name)?);
    let interval = full_group_interval(&rd, DEFAULT_ELEMENT_CAP)?;
    let table = PhiTable::build_on(interval.clone())?;
    delta_pairing_check(preset_name, &interval, &table)
}
