//! The fraction field over R(T) with factored binomial denominators.
//!
//! Every denominator the localization algebra produces is a product of
//! binomials `1 - e^mu`, so a fraction keeps its denominator as a multiset
//! of such factors instead of an expanded polynomial. Factors are oriented
//! to a canonical sign (first nonzero coordinate of mu positive), absorbing
//! the unit `-e^mu` into the numerator, and a factor is cancelled exactly
//! when the numerator is divisible by it. Equality is semantic: a - b
//! normalizes to zero iff the fractions agree as rational functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::rt::RTElement;
use crate::weyl::WeylElement;

#[derive(Debug, Clone)]
pub struct RTFraction {
    n: usize,
    num: RTElement,
    /// canonical mu -> multiplicity of the factor (1 - e^mu)
    den: BTreeMap<Vec<i64>, u32>,
}

impl RTFraction {
    pub fn zero(n: usize) -> RTFraction {
        RTFraction {
            n,
            num: RTElement::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> RTFraction {
        RTFraction::from_element(n, RTElement::one(n))
    }

    pub fn from_element(n: usize, num: RTElement) -> RTFraction {
        RTFraction {
            n,
            num,
            den: BTreeMap::new(),
        }
    }

    /// 1 / (1 - e^mu).
    pub fn inv_binomial(n: usize, mu: &[i64]) -> RTFraction {
        let mut out = RTFraction::one(n);
        out.div_binomial_in_place(mu);
        out
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn numerator(&self) -> &RTElement {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Vec<i64>, u32)> {
        self.den.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies in place by 1 / (1 - e^mu), orienting the factor.
    pub fn div_binomial_in_place(&mut self, mu: &[i64]) {
        assert!(mu.iter().any(|&v| v != 0), "division by 1 - e^0");
        if self.num.is_zero() {
            return;
        }
        let lex_positive = mu.iter().find(|&&v| v != 0).map(|&v| v > 0).unwrap();
        if lex_positive {
            *self.den.entry(mu.to_vec()).or_insert(0) += 1;
        } else {
            // 1/(1 - e^mu) = -e^{-mu} / (1 - e^{-mu}) with -mu canonical
            let nu: Vec<i64> = mu.iter().map(|v| -v).collect();
            self.num = self.num.mul_monomial(&nu, &-BigInt::one());
            *self.den.entry(nu).or_insert(0) += 1;
        }
    }

    /// Multiplies in place by the polynomial 1 - e^mu, cancelling against a
    /// matching denominator factor when possible.
    pub fn mul_binomial_in_place(&mut self, mu: &[i64]) {
        let lex_positive = mu.iter().find(|&&v| v != 0).map(|&v| v > 0).unwrap();
        let (canon, unit): (Vec<i64>, Option<Vec<i64>>) = if lex_positive {
            (mu.to_vec(), None)
        } else {
            // 1 - e^mu = -e^mu (1 - e^{-mu})
            (mu.iter().map(|v| -v).collect(), Some(mu.to_vec()))
        };
        if let Some(u) = unit {
            self.num = self.num.mul_monomial(&u, &-BigInt::one());
        }
        match self.den.get_mut(&canon) {
            Some(k) => {
                *k -= 1;
                if *k == 0 {
                    self.den.remove(&canon);
                }
            }
            None => {
                self.num = self.num.mul(&RTElement::binomial(self.n, &canon));
            }
        }
    }

    pub fn add(&self, other: &RTFraction) -> RTFraction {
        assert_eq!(self.n, other.n);
        // common denominator: per-factor maximum of multiplicities
        let mut den: BTreeMap<Vec<i64>, u32> = self.den.clone();
        for (mu, &k) in &other.den {
            let e = den.entry(mu.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let scale = |num: &RTElement, own: &BTreeMap<Vec<i64>, u32>| -> RTElement {
            let mut out = num.clone();
            for (mu, k) in &den {
                let have = own.get(mu).copied().unwrap_or(0);
                for _ in have..*k {
                    out = out.mul(&RTElement::binomial(self.n, mu));
                }
            }
            out
        };
        let num = scale(&self.num, &self.den).add(&scale(&other.num, &other.den));
        let mut out = RTFraction { n: self.n, num, den };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &RTFraction) -> RTFraction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RTFraction {
        RTFraction {
            n: self.n,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RTFraction) -> RTFraction {
        assert_eq!(self.n, other.n);
        let mut den = self.den.clone();
        for (mu, &k) in &other.den {
            *den.entry(mu.clone()).or_insert(0) += k;
        }
        let mut out = RTFraction {
            n: self.n,
            num: self.num.mul(&other.num),
            den,
        };
        out.reduce();
        out
    }

    pub fn mul_element(&self, p: &RTElement) -> RTFraction {
        let mut out = RTFraction {
            n: self.n,
            num: self.num.mul(p),
            den: self.den.clone(),
        };
        out.reduce();
        out
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<Vec<i64>> = self.den.keys().cloned().collect();
        for mu in factors {
            loop {
                let k = self.den.get(&mu).copied().unwrap_or(0);
                if k == 0 {
                    break;
                }
                match self.num.div_exact_binomial(&mu) {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.den.remove(&mu);
                        } else {
                            self.den.insert(mu.clone(), k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// The fraction as a Laurent polynomial, when the reduced denominator is
    /// trivial.
    pub fn as_element(&self) -> Option<RTElement> {
        let mut c = self.clone();
        c.reduce();
        if c.den.is_empty() {
            Some(c.num)
        } else {
            None
        }
    }

    /// Exponent negation, extended to fractions: denominators stay in
    /// canonical orientation with the unit pushed into the numerator.
    pub fn iota(&self) -> RTFraction {
        // 1/(1-e^{-mu}) = -e^mu/(1-e^mu)
        let mut num = self.num.iota();
        for (mu, &k) in &self.den {
            for _ in 0..k {
                num = num.mul_monomial(mu, &-BigInt::one());
            }
        }
        RTFraction {
            n: self.n,
            num,
            den: self.den.clone(),
        }
    }

    /// Applies a Weyl-group element to every exponent (numerator and
    /// denominator factors), re-orienting factors as needed.
    pub fn permute(&self, w: &WeylElement) -> RTFraction {
        let mut out = RTFraction {
            n: self.n,
            num: self.num.permute_exponents(w),
            den: BTreeMap::new(),
        };
        for (mu, &k) in &self.den {
            let img = w.apply_root(mu);
            for _ in 0..k {
                out.div_binomial_in_place(&img);
            }
        }
        out
    }

    /// Semantic equality via subtraction.
    pub fn equals(&self, other: &RTFraction) -> bool {
        self.sub(other).is_zero()
    }

    pub fn display(&self, rd: &crate::root_datum::RootDatum) -> String {
        let num = self.num.display(rd);
        if self.den.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(mu, k)| {
                let root = crate::weyl::RealRoot::from_coords(mu.clone());
                let base = format!("(1-e^{{{}}})", root.display(rd));
                if *k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        format!("({num}) / {}", den.join(""))
    }
}

impl PartialEq for RTFraction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}
impl Eq for RTFraction {}


#[cfg(test)]
mod proptests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    const N: usize = 2;

    fn arb_element() -> impl Strategy<Value = RTElement> {
        proptest::collection::vec(
            (
                proptest::collection::vec(-2i64..=2, N),
                -5i64..=5,
            ),
            0..4,
        )
        .prop_map(|terms| {
            let mut out = RTElement::zero();
            for (e, c) in terms {
                out.add_term(e, BigInt::from(c));
            }
            out
        })
    }

    fn arb_fraction() -> impl Strategy<Value = RTFraction> {
        let denominators = proptest::collection::vec(
            prop_oneof![
                Just(vec![1i64, 0]),
                Just(vec![0i64, 1]),
                Just(vec![1i64, 1]),
                Just(vec![-1i64, 0]),
            ],
            0..3,
        );
        (arb_element(), denominators).prop_map(|(num, dens)| {
            let mut f = RTFraction::from_element(N, num);
            for mu in dens {
                f.div_binomial_in_place(&mu);
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn addition_is_associative(a in arb_fraction(), b in arb_fraction(), c in arb_fraction()) {
            prop_assert!(a.add(&b).add(&c).equals(&a.add(&b.add(&c))));
        }

        #[test]
        fn multiplication_is_associative(a in arb_fraction(), b in arb_fraction(), c in arb_fraction()) {
            prop_assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
        }

        #[test]
        fn multiplication_distributes(a in arb_fraction(), b in arb_fraction(), c in arb_fraction()) {
            prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
        }

        #[test]
        fn operations_commute(a in arb_fraction(), b in arb_fraction()) {
            prop_assert!(a.add(&b).equals(&b.add(&a)));
            prop_assert!(a.mul(&b).equals(&b.mul(&a)));
        }

        #[test]
        fn subtraction_inverts_addition(a in arb_fraction(), b in arb_fraction()) {
            prop_assert!(a.add(&b).sub(&b).equals(&a));
        }

        #[test]
        fn iota_is_a_ring_map(a in arb_fraction(), b in arb_fraction()) {
            prop_assert!(a.iota().iota().equals(&a));
            prop_assert!(a.mul(&b).iota().equals(&a.iota().mul(&b.iota())));
            prop_assert!(a.add(&b).iota().equals(&a.iota().add(&b.iota())));
        }

        #[test]
        fn equality_matches_cleared_cross_product(a in arb_fraction(), b in arb_fraction()) {
            // a == b iff num_a * den_b == num_b * den_a after clearing
            let mut lhs = RTFraction::from_element(N, a.numerator().clone());
            for (mu, k) in b.denominator_factors() {
                for _ in 0..k {
                    lhs.mul_binomial_in_place(mu);
                }
            }
            let mut rhs = RTFraction::from_element(N, b.numerator().clone());
            for (mu, k) in a.denominator_factors() {
                for _ in 0..k {
                    rhs.mul_binomial_in_place(mu);
                }
            }
            prop_assert_eq!(a.equals(&b), lhs.sub(&rhs).is_zero());
        }
    }
}
