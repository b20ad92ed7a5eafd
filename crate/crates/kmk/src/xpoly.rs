//! Expansion of structure constants in the variables x_i = e^{-alpha_i} - 1.
//!
//! A constant that lies in Z[e^{-alpha_1},...,e^{-alpha_n}] expands exactly
//! through the substitution e^{-alpha_i} = 1 + x_i, and the sign-alternation
//! verdict asks that (-1)^{l(u)+l(v)+l(w)} times the expansion have
//! nonnegative coefficients. Back-substitution is kept separate so round
//! trips can be asserted bit-exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rt::RTElement;

/// A polynomial in the x variables with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct XPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl XPolynomial {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, j: &[u32]) -> BigInt {
        self.terms.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, j: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(j) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn display(&self, rd: &crate::root_datum::RootDatum) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (j, c) in &self.terms {
            let mono: Vec<String> = j
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let label = rd.gcm().label(i);
                    if p == 1 {
                        format!("x{label}")
                    } else {
                        format!("x{label}^{p}")
                    }
                })
                .collect();
            let mag = c.abs();
            if !out.is_empty() || c.is_negative() {
                out.push(if c.is_negative() { '-' } else { '+' });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(j, c)| {
                let key = j.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
                (key, serde_json::Value::String(c.to_string()))
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(j, c)| format!("{c}*x^{j:?}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

// Exponents stay well below 2^16 at desk scale, so for rank <= 4 both
// substitution directions run on u64-packed exponent keys (coordinate i in
// bit field (n-1-i)*16, so packed order is lexicographic order). Larger
// ranks take the generic map path.
const PACK_LIMIT: usize = 4;
const PACK_FIELD: u32 = 16;

fn packable(n: usize, magnitudes: impl Iterator<Item = u32>) -> bool {
    n <= PACK_LIMIT && magnitudes.into_iter().all(|m| m < (1 << PACK_FIELD))
}

fn pack_shift(n: usize, i: usize) -> u32 {
    ((n - 1 - i) as u32) * PACK_FIELD
}

fn unpack(key: u64, n: usize) -> Vec<u32> {
    (0..n)
        .map(|i| ((key >> pack_shift(n, i)) & 0xFFFF) as u32)
        .collect()
}

/// Expands an element of Z[e^{-alpha_i}] in the x variables. Rejects input
/// with any positive exponent coordinate; on engine-produced constants a
/// rejection signals a bug, not a data error.
pub fn to_x_polynomial(d: &RTElement, n: usize) -> Result<XPolynomial> {
    if let Some(bad) = d.in_nonpositive_subring() {
        return Err(Error::NotInPolynomialSubring(format!("{bad:?}")));
    }
    let packed = packable(
        n,
        d.terms()
            .flat_map(|(e, _)| e.iter().map(|&v| v.unsigned_abs() as u32)),
    );
    if packed {
        return Ok(to_x_packed(d, n));
    }
    let mut out = XPolynomial {
        n,
        terms: BTreeMap::new(),
    };
    let mut rows: std::collections::HashMap<u32, Vec<BigInt>> = std::collections::HashMap::new();
    for (lambda, c) in d.terms() {
        debug_assert_eq!(lambda.len(), n);
        // e^lambda = prod_i (1 + x_i)^{m_i} with m_i = -lambda_i >= 0;
        // expand coordinate by coordinate with cached binomial rows
        let mut expansion: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        expansion.insert(vec![0; n], c.clone());
        for (i, &l) in lambda.iter().enumerate() {
            let m = (-l) as u32;
            if m == 0 {
                continue;
            }
            let binoms = rows.entry(m).or_insert_with(|| binomial_row(m));
            let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            for (j, coeff) in &expansion {
                for (p, b) in binoms.iter().enumerate() {
                    let mut jj = j.clone();
                    jj[i] += p as u32;
                    let entry = next.entry(jj).or_insert_with(BigInt::zero);
                    *entry += coeff * b;
                }
            }
            expansion = next;
        }
        for (j, coeff) in expansion {
            out.add_term(j, coeff);
        }
    }
    Ok(out)
}

// The packed forward direction is a nested Horner scheme in the monomials
// y_i = e^{-alpha_i}: grouping the element by the exponent of y_0 and
// substituting y_0 = 1 + x_0 one Horner step at a time keeps the cost
// proportional to the output size times the maximal exponent, independent
// of how many input terms share large exponents.
fn to_x_packed(d: &RTElement, n: usize) -> XPolynomial {
    let mut terms: Vec<(u64, &BigInt)> = d
        .terms()
        .map(|(lambda, c)| {
            let mut key = 0u64;
            for (i, &l) in lambda.iter().enumerate() {
                key |= (((-l) as u64) & 0xFFFF) << pack_shift(n, i);
            }
            (key, c)
        })
        .collect();
    terms.sort_unstable_by_key(|(k, _)| *k);
    let acc = to_x_packed_rec(&terms, 0, n);
    let out: BTreeMap<Vec<u32>, BigInt> = acc
        .into_iter()
        .map(|(k, c)| (unpack(k, n), c))
        .collect();
    XPolynomial { n, terms: out }
}

fn to_x_packed_rec(terms: &[(u64, &BigInt)], coord: usize, n: usize) -> BTreeMap<u64, BigInt> {
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    if terms.is_empty() {
        return acc;
    }
    if coord == n {
        let mut total = BigInt::zero();
        for (_, c) in terms {
            total += *c;
        }
        if !total.is_zero() {
            acc.insert(0, total);
        }
        return acc;
    }
    let shift = pack_shift(n, coord);
    let field = |k: u64| (k >> shift) & 0xFFFF;
    let mut groups: Vec<(u64, &[(u64, &BigInt)])> = Vec::new();
    let mut start = 0usize;
    for idx in 1..=terms.len() {
        if idx == terms.len() || field(terms[idx].0) != field(terms[start].0) {
            groups.push((field(terms[start].0), &terms[start..idx]));
            start = idx;
        }
    }
    let max_power = groups.last().unwrap().0;
    let mut next_group = groups.len();
    for p in (0..=max_power).rev() {
        if p != max_power {
            // multiply by y_coord = 1 + x_coord
            acc = mul_by_one_plus_x_packed(&acc, 1u64 << shift);
        }
        if next_group > 0 && groups[next_group - 1].0 == p {
            next_group -= 1;
            let sub = to_x_packed_rec(groups[next_group].1, coord + 1, n);
            merge_add(&mut acc, sub);
        }
    }
    acc
}

fn merge_add(acc: &mut BTreeMap<u64, BigInt>, other: BTreeMap<u64, BigInt>) {
    use std::collections::btree_map::Entry;
    for (k, v) in other {
        match acc.entry(k) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += v;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(v);
            }
        }
    }
}

// multiply by 1 + x: a sorted merge of the stream with its shift
fn mul_by_one_plus_x_packed(acc: &BTreeMap<u64, BigInt>, delta: u64) -> BTreeMap<u64, BigInt> {
    let mut merged: Vec<(u64, BigInt)> = Vec::with_capacity(acc.len() * 2);
    let mut shifted = acc.iter().map(|(k, v)| (k + delta, v));
    let mut plain = acc.iter().map(|(k, v)| (*k, v));
    let mut a = shifted.next();
    let mut b = plain.next();
    loop {
        match (&a, &b) {
            (None, None) => break,
            (Some((ka, va)), Some((kb, vb))) => {
                if ka < kb {
                    merged.push((*ka, (*va).clone()));
                    a = shifted.next();
                } else if kb < ka {
                    merged.push((*kb, (*vb).clone()));
                    b = plain.next();
                } else {
                    let sum = *va + *vb;
                    if !sum.is_zero() {
                        merged.push((*ka, sum));
                    }
                    a = shifted.next();
                    b = plain.next();
                }
            }
            (Some((ka, va)), None) => {
                merged.push((*ka, (*va).clone()));
                a = shifted.next();
            }
            (None, Some((kb, vb))) => {
                merged.push((*kb, (*vb).clone()));
                b = plain.next();
            }
        }
    }
    merged.into_iter().collect()
}

fn binomial_row(m: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for p in 0..m {
        let next = &row[p as usize] * BigInt::from(m - p) / BigInt::from(p + 1);
        row.push(next);
    }
    row
}

/// Substitutes x_i = e^{-alpha_i} - 1 back into an x polynomial, by nested
/// Horner evaluation (one coordinate at a time), so large exponents stay
/// cheap.
pub fn back_substitute(xp: &XPolynomial, n: usize) -> RTElement {
    if packable(n, xp.terms.keys().flat_map(|j| j.iter().copied())) {
        return back_substitute_packed(xp, n);
    }
    let terms: Vec<(&Vec<u32>, &BigInt)> = xp.terms.iter().collect();
    back_substitute_rec(&terms, 0, n)
}

fn back_substitute_packed(xp: &XPolynomial, n: usize) -> RTElement {
    let terms: Vec<(u64, &BigInt)> = xp
        .terms
        .iter()
        .map(|(j, c)| {
            let mut key = 0u64;
            for (i, &p) in j.iter().enumerate() {
                key |= (p as u64) << pack_shift(n, i);
            }
            (key, c)
        })
        .collect();
    // lexicographic key order equals packed order, so `terms` is sorted
    let acc = back_sub_packed_rec(&terms, 0, n);
    let mut out = RTElement::zero();
    for (key, c) in acc {
        let m = unpack(key, n);
        out.add_term(m.iter().map(|&v| -(v as i64)).collect(), c);
    }
    out
}

// Accumulators hold subring elements with exponents e^{-m}, keyed by the
// packed nonnegative vector m; only fields >= coord are populated at
// recursion level coord.
fn back_sub_packed_rec(terms: &[(u64, &BigInt)], coord: usize, n: usize) -> BTreeMap<u64, BigInt> {
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    if terms.is_empty() {
        return acc;
    }
    if coord == n {
        let mut total = BigInt::zero();
        for (_, c) in terms {
            total += *c;
        }
        if !total.is_zero() {
            acc.insert(0, total);
        }
        return acc;
    }
    let shift = pack_shift(n, coord);
    let field = |k: u64| (k >> shift) & 0xFFFF;
    // contiguous groups by the current coordinate (terms are sorted)
    let mut groups: Vec<(u64, &[(u64, &BigInt)])> = Vec::new();
    let mut start = 0usize;
    for idx in 1..=terms.len() {
        if idx == terms.len() || field(terms[idx].0) != field(terms[start].0) {
            groups.push((field(terms[start].0), &terms[start..idx]));
            start = idx;
        }
    }
    let max_power = groups.last().unwrap().0;
    let mut next_group = groups.len();
    for p in (0..=max_power).rev() {
        if p != max_power {
            acc = mul_by_x_packed(&acc, 1u64 << shift);
        }
        if next_group > 0 && groups[next_group - 1].0 == p {
            next_group -= 1;
            let sub = back_sub_packed_rec(groups[next_group].1, coord + 1, n);
            merge_add(&mut acc, sub);
        }
    }
    acc
}

// multiply by x = e^{-alpha_coord} - 1: a sorted merge of the shifted and
// negated streams
fn mul_by_x_packed(acc: &BTreeMap<u64, BigInt>, delta: u64) -> BTreeMap<u64, BigInt> {
    let mut merged: Vec<(u64, BigInt)> = Vec::with_capacity(acc.len() * 2);
    let mut shifted = acc.iter().map(|(k, v)| (k + delta, v));
    let mut plain = acc.iter().map(|(k, v)| (*k, v));
    let mut a = shifted.next();
    let mut b = plain.next();
    loop {
        match (&a, &b) {
            (None, None) => break,
            (Some((ka, va)), Some((kb, vb))) => {
                if ka < kb {
                    merged.push((*ka, (*va).clone()));
                    a = shifted.next();
                } else if kb < ka {
                    merged.push((*kb, -(*vb).clone()));
                    b = plain.next();
                } else {
                    let sum = *va - *vb;
                    if !sum.is_zero() {
                        merged.push((*ka, sum));
                    }
                    a = shifted.next();
                    b = plain.next();
                }
            }
            (Some((ka, va)), None) => {
                merged.push((*ka, (*va).clone()));
                a = shifted.next();
            }
            (None, Some((kb, vb))) => {
                merged.push((*kb, -(*vb).clone()));
                b = plain.next();
            }
        }
    }
    merged.into_iter().collect()
}

fn back_substitute_rec(terms: &[(&Vec<u32>, &BigInt)], coord: usize, n: usize) -> RTElement {
    if terms.is_empty() {
        return RTElement::zero();
    }
    if coord == n {
        // all exponents consumed: at most one term remains
        let mut out = RTElement::zero();
        for (_, c) in terms {
            out.add_term(vec![0; n], (*c).clone());
        }
        return out;
    }
    // group by the current exponent
    let mut groups: BTreeMap<u32, Vec<(&Vec<u32>, &BigInt)>> = BTreeMap::new();
    for &(j, c) in terms {
        groups.entry(j[coord]).or_default().push((j, c));
    }
    // x_coord = e^{-alpha_coord} - 1
    let mut mu = vec![0i64; n];
    mu[coord] = -1;
    let x = RTElement::binomial(n, &mu).neg();
    let max_power = *groups.keys().next_back().unwrap();
    let mut acc = RTElement::zero();
    for p in (0..=max_power).rev() {
        if p != max_power {
            acc = acc.mul(&x);
        }
        if let Some(group) = groups.get(&p) {
            acc = acc.add(&back_substitute_rec(group, coord + 1, n));
        }
    }
    acc
}

/// Outcome of the sign-alternation test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignVerdict {
    Pass,
    Fail { witness: Vec<u32>, coefficient: BigInt },
}

impl SignVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SignVerdict::Pass)
    }
}

/// Checks that (-1)^parity_exponent * xp has nonnegative coefficients; the
/// exponent is l(u) + l(v) + l(w).
pub fn sign_verdict(xp: &XPolynomial, parity_exponent: usize) -> SignVerdict {
    let want_negative = parity_exponent % 2 == 1;
    for (j, c) in &xp.terms {
        let violates = if want_negative {
            c.is_positive()
        } else {
            c.is_negative()
        };
        if violates {
            return SignVerdict::Fail {
                witness: j.clone(),
                coefficient: c.clone(),
            };
        }
    }
    SignVerdict::Pass
}
