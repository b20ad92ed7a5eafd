//! Cover coefficients and dualizing-sheaf descriptors for opposite Schubert
//! varieties in a parabolic quotient.
//!
//! For a cover v = s_beta w in the quotient order, the divisor coefficient
//! is m = 1 - <w rho_Y, beta^vee>, and the pairing with the (possibly long)
//! real root beta is extracted from the reflection identity
//! lambda - s_beta lambda = <lambda, beta^vee> beta, so no coroot for beta
//! is ever constructed. The full descriptor records the twisting character
//! rho - w rho_Y, the divisor list, and the line-bundle weight
//! 2 rho^Y - rho - rho_Y, together with the realization that produced them.

use crate::bruhat::{bruhat_leq, covers_in_quotient, enumerate_interval};
use crate::error::{Error, Result};
use crate::root_datum::{parabolic_type, ParabolicType, RootDatum, Weight};
use crate::weyl::{RealRoot, WeylElement};

/// Divisor data of one boundary component: the cover, its reflection root,
/// and the integer coefficient.
#[derive(Debug, Clone)]
pub struct DivisorTerm {
    pub cover: WeylElement,
    pub root: RealRoot,
    pub coefficient: i64,
}

/// The dualizing-sheaf description of one opposite Schubert variety.
#[derive(Debug, Clone)]
pub struct DualizingDescriptor {
    pub w: WeylElement,
    /// rho - w rho_Y, the character twisting the ideal sheaf.
    pub character: Weight,
    pub divisor: Vec<DivisorTerm>,
    /// 2 rho^Y - rho - rho_Y, the weight of the line-bundle twist.
    pub bundle_weight: Weight,
    /// The realization the weights are written in (rho and the fundamental
    /// weights are convention-dependent).
    pub rho: Weight,
}

/// Extracts <lambda, beta^vee> from lambda - t lambda = c beta, where t is
/// the reflection in beta.
fn pairing_via_reflection(
    rd: &RootDatum,
    lambda: &Weight,
    t: &WeylElement,
    beta: &RealRoot,
) -> Result<i64> {
    let t_lambda = t.apply_weight(rd, lambda);
    let diff: Vec<i64> = lambda.iter().zip(&t_lambda).map(|(a, b)| a - b).collect();
    let beta_weight = rd.root_to_weight(&beta.coords);
    // diff = c * beta_weight for a single integer c
    let Some(k) = beta_weight.iter().position(|&v| v != 0) else {
        return Err(Error::NotAReflection("zero root".into()));
    };
    if diff[k] % beta_weight[k] != 0 {
        return Err(Error::NotACover(
            format!("{:?}", lambda),
            "difference is not an integer multiple of the root".into(),
        ));
    }
    let c = diff[k] / beta_weight[k];
    let consistent = diff
        .iter()
        .zip(&beta_weight)
        .all(|(d, b)| *d == c * b);
    if !consistent {
        return Err(Error::NotACover(
            format!("{:?}", lambda),
            "difference is not proportional to the root".into(),
        ));
    }
    Ok(c)
}

/// The coefficient m = 1 - <w rho_Y, beta^vee> for a cover pair (w, v) in
/// the quotient, where s_beta w = v.
pub fn m_coefficient(
    rd: &RootDatum,
    y: &[usize],
    w: &WeylElement,
    v: &WeylElement,
) -> Result<i64> {
    let p = parabolic_type(rd, y)?;
    m_coefficient_with(rd, &p, w, v)
}

/// Same, with a prebuilt parabolic type (used by the perturbation tests).
pub fn m_coefficient_with(
    rd: &RootDatum,
    parabolic: &ParabolicType,
    w: &WeylElement,
    v: &WeylElement,
) -> Result<i64> {
    let y = parabolic.nodes();
    let minimal = |e: &WeylElement| y.iter().all(|&i| e.sends_simple_positive(i));
    if !minimal(w) || !minimal(v) {
        return Err(Error::NotACover(
            w.display(rd),
            "inputs must be minimal coset representatives".into(),
        ));
    }
    if v.length() != w.length() + 1 || !bruhat_leq(rd, w, v) {
        return Err(Error::NotACover(w.display(rd), v.display(rd)));
    }
    let t = rd.multiply(v, &rd.inverse(w));
    let beta = rd.reflection_root(&t)?;
    let w_rho_y = w.apply_weight(rd, parabolic.rho_y());
    let c = pairing_via_reflection(rd, &w_rho_y, &t, &beta)?;
    Ok(1 - c)
}

/// Assembles the full descriptor for one quotient element.
pub fn dualizing_descriptor(
    rd: &RootDatum,
    y: &[usize],
    w: &WeylElement,
    element_cap: usize,
) -> Result<DualizingDescriptor> {
    let p = parabolic_type(rd, y)?;
    let interval = enumerate_interval(rd, w.length() + 1, Some(p.nodes()), element_cap)?;
    if !interval.contains(w) {
        return Err(Error::Usage(format!(
            "{} is not a minimal coset representative",
            w.display(rd)
        )));
    }
    let mut divisor = Vec::new();
    for (v, beta) in covers_in_quotient(&interval, w)? {
        let coefficient = m_coefficient_with(rd, &p, w, &v)?;
        divisor.push(DivisorTerm {
            cover: v,
            root: beta,
            coefficient,
        });
    }
    let w_rho_y = w.apply_weight(rd, p.rho_y());
    let character: Weight = rd.rho().iter().zip(&w_rho_y).map(|(r, x)| r - x).collect();
    Ok(DualizingDescriptor {
        w: w.clone(),
        character,
        divisor,
        bundle_weight: p.bundle_weight(rd),
        rho: rd.rho().clone(),
    })
}

/// Record of the boundary-weight identities for one element: the inversion
/// sum against rho - w rho, and the four-term twist cancellation.
#[derive(Debug, Clone)]
pub struct BoundaryWeightCheck {
    pub w: WeylElement,
    pub inversion_sum: Weight,
    pub rho_minus_w_rho: Weight,
    pub inversion_sum_matches: bool,
    pub cancellation: Weight,
    pub cancellation_is_zero: bool,
}

impl BoundaryWeightCheck {
    pub fn holds(&self) -> bool {
        self.inversion_sum_matches && self.cancellation_is_zero
    }
}

/// Verifies sum_{beta in Inv(w)} beta = rho - w rho, and the weight
/// cancellation -rho + w rho_Y + (rho - w rho) - w(-rho_hat_Y) = 0,
/// symbolically in the realization.
pub fn boundary_weight_check(
    rd: &RootDatum,
    y: &[usize],
    w: &WeylElement,
) -> Result<BoundaryWeightCheck> {
    let p = parabolic_type(rd, y)?;
    let n = rd.rank();
    let mut sum_coords = vec![0i64; n];
    for beta in rd.inversion_set(w) {
        for (s, c) in sum_coords.iter_mut().zip(&beta.coords) {
            *s += c;
        }
    }
    let inversion_sum = rd.root_to_weight(&sum_coords);
    let w_rho = w.apply_weight(rd, rd.rho());
    let rho_minus_w_rho: Weight = rd.rho().iter().zip(&w_rho).map(|(a, b)| a - b).collect();

    let w_rho_y = w.apply_weight(rd, p.rho_y());
    let neg_rho_hat: Weight = p.rho_hat_y().iter().map(|v| -v).collect();
    let w_neg_rho_hat = w.apply_weight(rd, &neg_rho_hat);
    let cancellation: Weight = (0..rd.dim_h())
        .map(|k| -rd.rho()[k] + w_rho_y[k] + rho_minus_w_rho[k] - w_neg_rho_hat[k])
        .collect();

    Ok(BoundaryWeightCheck {
        w: w.clone(),
        inversion_sum_matches: inversion_sum == rho_minus_w_rho,
        inversion_sum,
        rho_minus_w_rho,
        cancellation_is_zero: cancellation.iter().all(|&v| v == 0),
        cancellation,
    })
}
