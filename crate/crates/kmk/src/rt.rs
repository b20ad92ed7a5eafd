//! Exact Laurent polynomials over the root lattice: the character ring R(T).
//!
//! A value is a finite map from exponent vectors (coordinates over the
//! simple roots) to arbitrary-precision integer coefficients. Everything the
//! localization algebra divides by is a binomial `1 - e^mu`, so exact
//! division is implemented directly for binomials: group exponents into
//! classes modulo `Z*mu`, then each class is a univariate polynomial in
//! `t = e^mu` and divisibility by `1 - t` is the vanishing of its
//! coefficient sum. The test is associate-invariant: `1 - e^mu` and
//! `1 - e^{-mu}` differ by a monomial unit and produce the same classes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::root_datum::RootDatum;

/// An element of R(T): a Z-linear combination of characters e^lambda.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RTElement {
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl RTElement {
    pub fn zero() -> RTElement {
        RTElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> RTElement {
        RTElement::monomial(vec![0; n], BigInt::one())
    }

    pub fn monomial(exponent: Vec<i64>, coeff: BigInt) -> RTElement {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        RTElement { terms }
    }

    /// e^lambda for a root-lattice vector lambda.
    pub fn character(exponent: Vec<i64>) -> RTElement {
        RTElement::monomial(exponent, BigInt::one())
    }

    /// 1 - e^mu.
    pub fn binomial(n: usize, mu: &[i64]) -> RTElement {
        let mut out = RTElement::one(n);
        out.add_term(mu.to_vec(), -BigInt::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[i64]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The constant coefficient (exponent 0).
    pub fn constant_term(&self, n: usize) -> BigInt {
        self.coeff(&vec![0; n])
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &RTElement) -> RTElement {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RTElement) -> RTElement {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> RTElement {
        RTElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &RTElement) -> RTElement {
        let mut out = RTElement::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    /// Multiplies by the monomial c * e^lambda.
    pub fn mul_monomial(&self, exponent: &[i64], coeff: &BigInt) -> RTElement {
        let mut terms = BTreeMap::new();
        if coeff.is_zero() {
            return RTElement::zero();
        }
        for (e, c) in &self.terms {
            let exp: Vec<i64> = e.iter().zip(exponent).map(|(a, b)| a + b).collect();
            terms.insert(exp, c * coeff);
        }
        RTElement { terms }
    }

    /// Exponent negation e^lambda -> e^{-lambda}, a ring automorphism.
    pub fn iota(&self) -> RTElement {
        RTElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|v| -v).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies a Weyl-group element to every exponent.
    pub fn permute_exponents(&self, w: &crate::weyl::WeylElement) -> RTElement {
        RTElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (w.apply_root(e), c.clone()))
                .collect(),
        }
    }

    /// True when the element is exactly divisible by 1 - e^mu (mu nonzero),
    /// equivalently by any associate of it.
    pub fn divisible_by_binomial(&self, mu: &[i64]) -> bool {
        self.div_exact_binomial(mu).is_some()
    }

    /// Exact division by 1 - e^mu; `None` when the division leaves a
    /// remainder.
    pub fn div_exact_binomial(&self, mu: &[i64]) -> Option<RTElement> {
        assert!(mu.iter().any(|&v| v != 0), "division by 1 - e^0");
        // pivot coordinate for computing positions along mu
        let pivot = mu.iter().position(|&v| v != 0).unwrap();
        // classes: representative exponent -> sorted positions and coeffs
        let mut classes: BTreeMap<Vec<i64>, Vec<(i64, BigInt)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let q = e[pivot].div_euclid(mu[pivot]);
            let rep: Vec<i64> = e.iter().zip(mu).map(|(a, b)| a - q * b).collect();
            classes.entry(rep).or_default().push((q, c.clone()));
        }
        let mut quotient = RTElement::zero();
        for (rep, mut members) in classes {
            members.sort_by_key(|(q, _)| *q);
            // p(t) = sum c_q t^q must satisfy p(1) = 0; quotient of
            // division by (1 - t) has coefficients given by prefix sums.
            let total: BigInt = members.iter().map(|(_, c)| c.clone()).sum();
            if !total.is_zero() {
                return None;
            }
            let mut running = BigInt::zero();
            let q_min = members[0].0;
            let q_max = members[members.len() - 1].0;
            let mut iter = members.iter().peekable();
            for q in q_min..q_max {
                while let Some(&&(mq, ref c)) = iter.peek() {
                    if mq <= q {
                        running += c.clone();
                        iter.next();
                    } else {
                        break;
                    }
                }
                if !running.is_zero() {
                    let exp: Vec<i64> = rep.iter().zip(mu).map(|(r, m)| r + q * m).collect();
                    quotient.add_term(exp, running.clone());
                }
            }
        }
        debug_assert_eq!(
            quotient.mul(&RTElement::binomial(mu.len(), mu)),
            self.clone()
        );
        Some(quotient)
    }

    /// All exponent coordinates nonpositive: membership in the polynomial
    /// subring generated by the e^{-alpha_i}.
    pub fn in_nonpositive_subring(&self) -> Option<&Vec<i64>> {
        self.terms
            .keys()
            .find(|e| e.iter().any(|&v| v > 0))
    }

    /// Renders with the node labels of a datum, e.g. `1-e^{-a1}`
    /// (descending exponent order, so constants lead).
    pub fn display(&self, rd: &RootDatum) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let is_const = e.iter().all(|&v| v == 0);
            let mag = c.abs();
            let sign_str = if c.is_negative() { "-" } else { "+" };
            if !out.is_empty() || c.is_negative() {
                out.push_str(sign_str);
            }
            if is_const {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str("e^{");
                out.push_str(&exponent_string(e, rd));
                out.push('}');
            }
        }
        out
    }

    /// Stable JSON value: `{"-1,0": "3", ...}` under a schema wrapper.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let key = e
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, serde_json::Value::String(c.to_string()))
            })
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value, n: usize) -> Option<RTElement> {
        let obj = value.as_object()?;
        let mut out = RTElement::zero();
        for (k, v) in obj {
            let exps: Vec<i64> = k
                .split(',')
                .map(|s| s.parse::<i64>().ok())
                .collect::<Option<_>>()?;
            if exps.len() != n {
                return None;
            }
            let coeff: BigInt = v.as_str()?.parse().ok()?;
            out.add_term(exps, coeff);
        }
        Some(out)
    }
}

fn exponent_string(e: &[i64], rd: &RootDatum) -> String {
    let mut out = String::new();
    for (i, &v) in e.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let label = rd.gcm().label(i);
        if v > 0 && !out.is_empty() {
            out.push('+');
        }
        match v {
            1 => out.push_str(&format!("a{label}")),
            -1 => out.push_str(&format!("-a{label}")),
            v => out.push_str(&format!("{v}*a{label}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RTElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*e^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i64]) -> RTElement {
        RTElement::character(v.to_vec())
    }

    #[test]
    fn characters_multiply_by_adding_exponents() {
        let a = e(&[1, 0]);
        let b = e(&[-1, 0]);
        assert_eq!(a.mul(&b), RTElement::one(2));
    }

    #[test]
    fn binomial_square_divides_once() {
        // (1-e^{-a})^2 / (1-e^{-a}) = 1-e^{-a}
        let b = RTElement::binomial(1, &[-1]);
        let sq = b.mul(&b);
        let q = sq.div_exact_binomial(&[-1]).unwrap();
        assert_eq!(q, b);
    }

    #[test]
    fn division_is_associate_invariant() {
        // 1 - e^{2mu} is divisible by 1 - e^mu and by 1 - e^{-mu}
        let p = RTElement::binomial(2, &[2, 0]);
        assert!(p.divisible_by_binomial(&[1, 0]));
        assert!(p.divisible_by_binomial(&[-1, 0]));
        let q = p.div_exact_binomial(&[1, 0]).unwrap();
        // quotient is 1 + e^mu
        let mut expected = RTElement::one(2);
        expected.add_term(vec![1, 0], BigInt::one());
        assert_eq!(q, expected);
    }

    #[test]
    fn non_divisible_detected() {
        let p = RTElement::one(1);
        assert!(!p.divisible_by_binomial(&[1]));
        let mut p = RTElement::binomial(1, &[1]);
        p.add_term(vec![5], BigInt::one());
        assert!(!p.divisible_by_binomial(&[1]));
    }

    #[test]
    fn iota_is_an_involution_and_automorphism() {
        let mut p = RTElement::binomial(2, &[1, -2]);
        p.add_term(vec![3, 1], BigInt::from(7));
        assert_eq!(p.iota().iota(), p);
        let q = RTElement::binomial(2, &[0, 1]);
        assert_eq!(p.iota().mul(&q.iota()), p.mul(&q).iota());
    }

    #[test]
    fn subring_membership() {
        let p = RTElement::character(vec![-1, -2]);
        assert!(p.in_nonpositive_subring().is_none());
        let q = RTElement::character(vec![-1, 1]);
        assert!(q.in_nonpositive_subring().is_some());
    }

    #[test]
    fn json_round_trip() {
        let mut p = RTElement::binomial(2, &[1, -2]);
        p.add_term(vec![0, 5], BigInt::from(-12));
        let j = p.to_json();
        let back = RTElement::from_json(&j, 2).unwrap();
        assert_eq!(p, back);
    }
}
