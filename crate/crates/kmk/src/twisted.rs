//! The twisted group algebra Q(T) * W and the Demazure generators.
//!
//! Elements are finite sums sum_x c_x delta_x with c_x in the fraction
//! field, subject to delta_x f = (x f) delta_x. The Demazure generator
//! y_i = delta_e/(1-e^{-a_i}) - e^{-a_i} delta_{s_i}/(1-e^{-a_i}) acts on
//! functions as D_i f = (f - e^{-a_i} s_i f)/(1 - e^{-a_i}); products over
//! reduced words expand into the coefficient matrix that the engine
//! inverts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::fraction::RTFraction;
use crate::root_datum::RootDatum;
use crate::rt::RTElement;
use crate::weyl::WeylElement;

/// A finite sum of twisted group-algebra terms.
#[derive(Debug, Clone)]
pub struct TwistedElement {
    support: HashMap<WeylElement, RTFraction>,
}

impl TwistedElement {
    pub fn zero() -> TwistedElement {
        TwistedElement {
            support: HashMap::new(),
        }
    }

    pub fn delta(w: WeylElement, coeff: RTFraction) -> TwistedElement {
        let mut support = HashMap::new();
        if !coeff.is_zero() {
            support.insert(w, coeff);
        }
        TwistedElement { support }
    }

    pub fn identity(rd: &RootDatum) -> TwistedElement {
        TwistedElement::delta(rd.identity(), RTFraction::one(rd.rank()))
    }

    pub fn support(&self) -> impl Iterator<Item = (&WeylElement, &RTFraction)> {
        self.support.iter()
    }

    pub fn coeff(&self, w: &WeylElement) -> Option<&RTFraction> {
        self.support.get(w)
    }

    fn add_term(&mut self, w: WeylElement, c: RTFraction) {
        if c.is_zero() {
            return;
        }
        match self.support.get_mut(&w) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.support.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.support.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &TwistedElement) -> TwistedElement {
        let mut out = self.clone();
        for (w, c) in &other.support {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TwistedElement) -> TwistedElement {
        let mut out = self.clone();
        for (w, c) in &other.support {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    /// Product in the twisted algebra: delta_x f = (x f) delta_x.
    pub fn mul(&self, rd: &RootDatum, other: &TwistedElement) -> TwistedElement {
        let mut out = TwistedElement::zero();
        for (x, cx) in &self.support {
            for (y, cy) in &other.support {
                let twisted = cy.permute(x);
                out.add_term(rd.multiply(x, y), cx.mul(&twisted));
            }
        }
        out
    }

    /// Applies the element as an operator on the fraction field.
    pub fn apply(&self, f: &RTFraction) -> RTFraction {
        let mut out = RTFraction::zero(f.rank());
        for (x, cx) in &self.support {
            out = out.add(&cx.mul(&f.permute(x)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn equals(&self, other: &TwistedElement) -> bool {
        self.sub(other).is_zero()
    }
}

/// The Demazure generator y_i.
pub fn demazure_generator(rd: &RootDatum, i: usize) -> TwistedElement {
    let n = rd.rank();
    let mut alpha = vec![0i64; n];
    alpha[i] = 1;
    let neg_alpha: Vec<i64> = alpha.iter().map(|v| -v).collect();
    // a_i = 1/(1-e^{-alpha_i})
    let a = RTFraction::inv_binomial(n, &neg_alpha);
    // b_i = -e^{-alpha_i}/(1-e^{-alpha_i})
    let b = RTFraction::inv_binomial(n, &neg_alpha)
        .mul_element(&RTElement::monomial(neg_alpha.clone(), -BigInt::one()));
    let mut out = TwistedElement::delta(rd.identity(), a);
    out.add_term(rd.simple_reflection(i), b);
    out
}

/// y_v along a reduced word of v; the product is word-independent.
pub fn demazure_product(rd: &RootDatum, word: &[usize]) -> TwistedElement {
    let mut out = TwistedElement::identity(rd);
    for &i in word {
        out = out.mul(rd, &demazure_generator(rd, i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::preset;
    use crate::root_datum::build_realization;

    fn datum(name: &str) -> RootDatum {
        build_realization(preset(name).unwrap())
    }

    #[test]
    fn demazure_fixes_constants() {
        let rd = datum("A1");
        let y = demazure_generator(&rd, 0);
        let one = RTFraction::one(1);
        assert!(y.apply(&one).equals(&one));
    }

    #[test]
    fn demazure_is_idempotent() {
        for name in ["A2", "B2", "affine:A1"] {
            let rd = datum(name);
            for i in 0..rd.rank() {
                let y = demazure_generator(&rd, i);
                let yy = y.mul(&rd, &y);
                assert!(yy.equals(&y), "{name}, generator {i}");
            }
        }
    }

    #[test]
    fn braid_relations_hold_symbolically() {
        // A2: y1 y2 y1 = y2 y1 y2
        let rd = datum("A2");
        let a = demazure_product(&rd, &[0, 1, 0]);
        let b = demazure_product(&rd, &[1, 0, 1]);
        assert!(a.equals(&b));

        // B2: order-4 braid
        let rd = datum("B2");
        let a = demazure_product(&rd, &[0, 1, 0, 1]);
        let b = demazure_product(&rd, &[1, 0, 1, 0]);
        assert!(a.equals(&b));
    }

    #[test]
    fn rank_one_coefficients() {
        let rd = datum("A1");
        let y = demazure_generator(&rd, 0);
        let e = rd.identity();
        let s = rd.simple_reflection(0);
        // coefficient of delta_e: 1/(1-e^{-a})
        let a = RTFraction::inv_binomial(1, &[-1]);
        assert!(y.coeff(&e).unwrap().equals(&a));
        // coefficient of delta_s: -e^{-a}/(1-e^{-a}) = 1/(1-e^{a})
        let b = RTFraction::inv_binomial(1, &[1]);
        assert!(y.coeff(&s).unwrap().equals(&b));
    }
}
