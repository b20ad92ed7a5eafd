//! Structure constants over a parabolic quotient, two independent ways.
//!
//! The coset route sums Borel constants over the two cosets,
//! d^w(P) = sum_{u' in uW_P, v' in vW_P} d^w_{u',v'}(B), and is the primary
//! output. The pullback route forms the coset sums of basis rows first,
//! multiplies pointwise and expands in that family by a triangular solve at
//! the minimal representatives, then insists the remainder vanish at every
//! fixed point of the interval; it runs as a verifying shadow. The two
//! tables must agree entry by entry.

use crate::bruhat::{coset, parabolic_subgroup, BruhatInterval};
use crate::engine::{product_constants, ConstantTable, PhiTable, Route};
use crate::error::{Error, Result};
use crate::rt::RTElement;
use crate::weyl::WeylElement;

/// Longest length in the finite parabolic subgroup W_P.
pub fn parabolic_diameter(rd: &crate::root_datum::RootDatum, y: &[usize], cap: usize) -> Result<usize> {
    Ok(parabolic_subgroup(rd, y, cap)?
        .iter()
        .map(|w| w.length())
        .max()
        .unwrap_or(0))
}

/// The Borel interval bound needed to serve a parabolic computation with
/// length cap `bound`: coset elements overshoot by the diameter of W_P.
pub fn required_borel_bound(
    rd: &crate::root_datum::RootDatum,
    y: &[usize],
    bound: usize,
    cap: usize,
) -> Result<usize> {
    Ok(bound + parabolic_diameter(rd, y, cap)?)
}

fn require_min_rep(rd: &crate::root_datum::RootDatum, w: &WeylElement, y: &[usize]) -> Result<()> {
    if y.iter().any(|&i| !w.sends_simple_positive(i)) {
        return Err(Error::Usage(format!(
            "{} is not a minimal coset representative",
            w.display(rd)
        )));
    }
    Ok(())
}

/// Minimal coset representatives inside the interval, in enumeration order.
fn quotient_members(interval: &BruhatInterval, y: &[usize]) -> Vec<usize> {
    (0..interval.len())
        .filter(|&idx| {
            let w = interval.element(idx);
            y.iter().all(|&i| w.sends_simple_positive(i))
        })
        .collect()
}

/// The coset identity: parabolic constants as finite double sums of Borel
/// constants.
pub fn parabolic_constants_cosets(
    table: &PhiTable,
    y: &[usize],
    u: &WeylElement,
    v: &WeylElement,
    bound: usize,
) -> Result<ConstantTable> {
    let interval = table.interval();
    let rd = interval.datum().clone();
    require_min_rep(&rd, u, y)?;
    require_min_rep(&rd, v, y)?;
    let cap = interval.len().max(crate::bruhat::DEFAULT_ELEMENT_CAP);
    let u_coset = coset(&rd, u, y, cap)?;
    let v_coset = coset(&rd, v, y, cap)?;

    let mut sums: Vec<RTElement> = vec![RTElement::zero(); interval.len()];
    for u1 in &u_coset {
        if !interval.contains(u1) {
            // all constants of this summand live above the interval bound
            continue;
        }
        for v1 in &v_coset {
            if !interval.contains(v1) {
                continue;
            }
            let borel = product_constants(table, u1, v1)?;
            for (w, d) in &borel.entries {
                let idx = interval.index_of(w).expect("entries live in the interval");
                sums[idx] = sums[idx].add(d);
            }
        }
    }

    let entries: Vec<(WeylElement, RTElement)> = quotient_members(interval, y)
        .into_iter()
        .filter(|&idx| interval.element(idx).length() <= bound)
        .filter(|&idx| !sums[idx].is_zero())
        .map(|idx| (interval.element(idx).clone(), sums[idx].clone()))
        .collect();
    Ok(ConstantTable {
        u: u.clone(),
        v: v.clone(),
        parabolic: y.to_vec(),
        bound,
        entries,
        route: Route::CosetSum,
    })
}

/// The pullback route: coset sums of basis rows multiplied pointwise and
/// re-expanded in the same family, with a mandatory zero remainder at every
/// interval point.
pub fn parabolic_constants_pullback(
    table: &PhiTable,
    y: &[usize],
    u: &WeylElement,
    v: &WeylElement,
    bound: usize,
) -> Result<ConstantTable> {
    let interval = table.interval();
    let rd = interval.datum().clone();
    require_min_rep(&rd, u, y)?;
    require_min_rep(&rd, v, y)?;
    let members = quotient_members(interval, y);

    // Phi_w(x): the coset sum of basis rows; members of the coset outside
    // the interval vanish on it.
    let cap = interval.len().max(crate::bruhat::DEFAULT_ELEMENT_CAP);
    let mut pulled: Vec<Vec<RTElement>> = Vec::with_capacity(members.len());
    for &w_idx in &members {
        let w = interval.element(w_idx);
        let mut values = vec![RTElement::zero(); interval.len()];
        for member in coset(&rd, w, y, cap)? {
            let Some(m_idx) = interval.index_of(&member) else {
                continue;
            };
            for x in 0..interval.len() {
                let val = table.value(m_idx, x);
                if !val.is_zero() {
                    values[x] = values[x].add(val);
                }
            }
        }
        pulled.push(values);
    }

    let pos = |w: &WeylElement| -> Result<usize> {
        members
            .iter()
            .position(|&idx| interval.element(idx) == w)
            .ok_or_else(|| {
                Error::Usage(format!("{} outside the quotient interval", w.display(&rd)))
            })
    };
    let u_pos = pos(u)?;
    let v_pos = pos(v)?;

    // product values at every fixed point
    let mut residual: Vec<RTElement> = (0..interval.len())
        .map(|x| pulled[u_pos][x].mul(&pulled[v_pos][x]))
        .collect();

    // triangular solve at the minimal representatives, ascending
    let mut constants: Vec<RTElement> = vec![RTElement::zero(); members.len()];
    for (k, &w_idx) in members.iter().enumerate() {
        let rhs = residual[w_idx].clone();
        if rhs.is_zero() {
            continue;
        }
        let mut q = rhs;
        for beta in rd.inversion_set(interval.element(w_idx)) {
            let neg: Vec<i64> = beta.coords.iter().map(|c| -c).collect();
            q = q.div_exact_binomial(&neg).ok_or_else(|| {
                Error::NonClearingEntry(format!(
                    "pullback entry at {}",
                    interval.element(w_idx).display(&rd)
                ))
            })?;
        }
        // subtract d^w * Phi_w everywhere before moving on
        for x in 0..interval.len() {
            if !pulled[k][x].is_zero() {
                residual[x] = residual[x].sub(&q.mul(&pulled[k][x]));
            }
        }
        constants[k] = q;
    }

    if let Some(x) = (0..interval.len()).find(|&x| !residual[x].is_zero()) {
        return Err(Error::NonZeroRemainder(format!(
            "fixed point {}",
            interval.element(x).display(&rd)
        )));
    }

    let entries: Vec<(WeylElement, RTElement)> = members
        .iter()
        .enumerate()
        .filter(|(_, &idx)| interval.element(idx).length() <= bound)
        .filter(|(k, _)| !constants[*k].is_zero())
        .map(|(k, &idx)| (interval.element(idx).clone(), constants[k].clone()))
        .collect();
    Ok(ConstantTable {
        u: u.clone(),
        v: v.clone(),
        parabolic: y.to_vec(),
        bound,
        entries,
        route: Route::Pullback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::DEFAULT_ELEMENT_CAP;
    use crate::gcm::preset;
    use crate::root_datum::build_realization;

    fn phi(name: &str, bound: usize) -> PhiTable {
        let rd = build_realization(preset(name).unwrap());
        PhiTable::build(&rd, bound, DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn empty_parabolic_reduces_to_borel() {
        let t = phi("A2", 3);
        let rd = t.datum().clone();
        let u = rd.parse_word("s1").unwrap();
        let v = rd.parse_word("s2*s1").unwrap();
        let borel = product_constants(&t, &u, &v).unwrap();
        let cosets = parabolic_constants_cosets(&t, &[], &u, &v, 3).unwrap();
        let pullback = parabolic_constants_pullback(&t, &[], &u, &v, 3).unwrap();
        assert!(cosets.agrees_with(&borel));
        assert!(pullback.agrees_with(&borel));
    }

    #[test]
    fn routes_agree_on_a2_maximal_parabolics() {
        let rd = build_realization(preset("A2").unwrap());
        for y in [vec![0usize], vec![1usize]] {
            let bound = 3;
            let widened = required_borel_bound(&rd, &y, bound, DEFAULT_ELEMENT_CAP).unwrap();
            let t = PhiTable::build(&rd, widened, DEFAULT_ELEMENT_CAP).unwrap();
            let quotient = crate::bruhat::enumerate_interval(
                &rd,
                bound,
                Some(&y),
                DEFAULT_ELEMENT_CAP,
            )
            .unwrap();
            for u in quotient.elements() {
                for v in quotient.elements() {
                    let a = parabolic_constants_cosets(&t, &y, u, v, bound).unwrap();
                    let b = parabolic_constants_pullback(&t, &y, u, v, bound).unwrap();
                    assert!(
                        a.agrees_with(&b),
                        "mismatch at ({}, {}), Y={y:?}",
                        u.display(&rd),
                        v.display(&rd)
                    );
                }
            }
        }
    }

    #[test]
    fn affine_coset_route_matches_pullback() {
        let rd = build_realization(preset("affine:A1").unwrap());
        let y = vec![1usize];
        let bound = 3;
        let widened = required_borel_bound(&rd, &y, bound, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(widened, 4);
        let t = PhiTable::build(&rd, widened, DEFAULT_ELEMENT_CAP).unwrap();
        let s0 = rd.parse_word("s0").unwrap();
        let a = parabolic_constants_cosets(&t, &y, &s0, &s0, bound).unwrap();
        let b = parabolic_constants_pullback(&t, &y, &s0, &s0, bound).unwrap();
        assert!(a.agrees_with(&b));
        // d^{s0} picks up only the minimal-representative Borel term
        let borel = product_constants(&t, &s0, &s0).unwrap();
        assert_eq!(a.entry(&s0), borel.entry(&s0));
    }

    #[test]
    fn non_minimal_inputs_are_rejected() {
        let t = phi("A2", 3);
        let rd = t.datum().clone();
        let w = rd.parse_word("s1*s2").unwrap(); // ends with s2: not minimal for Y={2}
        assert!(parabolic_constants_cosets(&t, &[1], &w, &w, 2).is_err());
    }

    #[test]
    fn pullback_identity_value_at_e() {
        // the coset sum for e restricted to the identity point is 1, so the
        // leading constant of [xi^e]^2 is 1
        let rd = build_realization(preset("affine:A1").unwrap());
        let y = vec![1usize];
        let t = PhiTable::build(&rd, 4, DEFAULT_ELEMENT_CAP).unwrap();
        let e = rd.identity();
        let table = parabolic_constants_pullback(&t, &y, &e, &e, 3).unwrap();
        assert_eq!(table.entry(&e).unwrap(), &RTElement::one(2));
        let shadow = parabolic_constants_cosets(&t, &y, &e, &e, 3).unwrap();
        assert!(table.agrees_with(&shadow));
    }
}
