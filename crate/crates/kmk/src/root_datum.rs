//! Root data: a GCM together with a minimal realization.
//!
//! The realization places everything in one integer lattice of rank
//! `2n - rank(A)`. Simple coroots are the first `n` standard basis vectors
//! of the dual lattice, so the pairing of a weight with a coroot reads off
//! a coordinate. Simple roots get the columns of the GCM in the first `n`
//! coordinates plus completion coordinates that make them independent;
//! fundamental weights are the first `n` basis vectors of the weight side,
//! and `rho` is their sum. The choice of completion coordinates is a
//! convention; everything downstream that is supposed to be
//! choice-independent is tested against perturbations of it.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gcm::Gcm;

/// Weight-lattice vector, coordinates in the fixed realization basis.
pub type Weight = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    gcm: Gcm,
    dim_h: usize,
    simple_roots: Vec<Weight>,
    simple_coroots: Vec<Weight>,
    fundamental_weights: Vec<Weight>,
    rho: Weight,
}

impl RootDatum {
    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &Weight {
        &self.simple_coroots[i]
    }

    pub fn fundamental_weight(&self, i: usize) -> &Weight {
        &self.fundamental_weights[i]
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Pairing of a weight with the i-th simple coroot (a dot product in the
    /// chosen coordinates, and the coroots are standard basis vectors).
    pub fn pair_with_coroot(&self, lambda: &Weight, i: usize) -> i64 {
        lambda
            .iter()
            .zip(&self.simple_coroots[i])
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Reflection s_i on the weight lattice.
    pub fn reflect_weight(&self, i: usize, lambda: &Weight) -> Weight {
        let c = self.pair_with_coroot(lambda, i);
        lambda
            .iter()
            .zip(&self.simple_roots[i])
            .map(|(l, a)| l - c * a)
            .collect()
    }

    /// Embeds a root-lattice vector (coordinates over the simple roots) into
    /// the weight lattice.
    pub fn root_to_weight(&self, root_coords: &[i64]) -> Weight {
        let mut out = vec![0; self.dim_h];
        for (i, &c) in root_coords.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(&self.simple_roots[i]) {
                *o += c * a;
            }
        }
        out
    }

    /// Replaces the fundamental weights by `w_i + delta_i` where each delta
    /// must pair to zero with every simple coroot; `rho` is rebuilt as the
    /// sum. Used by choice-independence tests.
    pub fn perturb_fundamental_weights(&self, deltas: &[Weight]) -> Result<RootDatum> {
        if deltas.len() != self.rank() {
            return Err(Error::Usage("one delta per fundamental weight".into()));
        }
        let mut fw = self.fundamental_weights.clone();
        for (i, d) in deltas.iter().enumerate() {
            if d.len() != self.dim_h {
                return Err(Error::Usage("delta has wrong dimension".into()));
            }
            for j in 0..self.rank() {
                if self.pair_with_coroot(d, j) != 0 {
                    return Err(Error::Usage(format!(
                        "delta {i} pairs nontrivially with coroot {j}"
                    )));
                }
            }
            for (w, dv) in fw[i].iter_mut().zip(d) {
                *w += dv;
            }
        }
        let mut rho = vec![0; self.dim_h];
        for w in &fw {
            for (r, v) in rho.iter_mut().zip(w) {
                *r += v;
            }
        }
        Ok(RootDatum {
            gcm: self.gcm.clone(),
            dim_h: self.dim_h,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            fundamental_weights: fw,
            rho,
        })
    }
}

/// Builds the canonical minimal realization of a validated GCM.
pub fn build_realization(gcm: Gcm) -> RootDatum {
    let n = gcm.rank();
    let rank_a = matrix_rank(gcm.entries());
    let corank = n - rank_a;
    let dim_h = n + corank;

    // Coroots: first n standard basis vectors of the dual lattice.
    let simple_coroots: Vec<Weight> = (0..n)
        .map(|i| {
            let mut v = vec![0; dim_h];
            v[i] = 1;
            v
        })
        .collect();

    // Roots: column j of the GCM in the first n coordinates; one extra
    // coordinate per non-pivot column makes the roots independent.
    let nonpivot = nonpivot_columns(gcm.entries(), rank_a);
    let simple_roots: Vec<Weight> = (0..n)
        .map(|j| {
            let mut v = vec![0; dim_h];
            for i in 0..n {
                v[i] = gcm.entry(i, j);
            }
            if let Some(k) = nonpivot.iter().position(|&c| c == j) {
                v[n + k] = 1;
            }
            v
        })
        .collect();

    // Fundamental weights: dual to the coroots, zero completion coordinates.
    let fundamental_weights: Vec<Weight> = (0..n)
        .map(|i| {
            let mut v = vec![0; dim_h];
            v[i] = 1;
            v
        })
        .collect();
    let mut rho = vec![0; dim_h];
    for w in &fundamental_weights {
        for (r, v) in rho.iter_mut().zip(w) {
            *r += v;
        }
    }

    RootDatum {
        gcm,
        dim_h,
        simple_roots,
        simple_coroots,
        fundamental_weights,
        rho,
    }
}

fn matrix_rank(a: &[Vec<i64>]) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..n {
            if r != rank && !m[r][col].is_zero() {
                let (a_rc, a_pc) = (m[r][col].clone(), m[rank][col].clone());
                for c in 0..n {
                    m[r][c] = &m[r][c] * &a_pc - &m[rank][c] * &a_rc;
                }
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

/// Column indices outside an echelon pivot set, used for the completion
/// coordinates of the simple roots.
fn nonpivot_columns(a: &[Vec<i64>], rank: usize) -> Vec<usize> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let (a_rc, a_pc) = (m[r][col].clone(), m[row][col].clone());
                for c in 0..n {
                    m[r][c] = &m[r][c] * &a_pc - &m[row][c] * &a_rc;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    debug_assert_eq!(pivots.len(), rank);
    (0..n).filter(|c| !pivots.contains(c)).collect()
}

/// A finite-type parabolic subset with its distinguished weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicType {
    y: Vec<usize>,
    rho_y: Weight,
    rho_hat_y: Weight,
    /// Twice the half-sum of the positive roots of the Levi block (stored
    /// doubled so that it stays integral).
    two_rho_sup_y: Weight,
}

impl ParabolicType {
    pub fn nodes(&self) -> &[usize] {
        &self.y
    }

    pub fn rho_y(&self) -> &Weight {
        &self.rho_y
    }

    pub fn rho_hat_y(&self) -> &Weight {
        &self.rho_hat_y
    }

    pub fn two_rho_sup_y(&self) -> &Weight {
        &self.two_rho_sup_y
    }

    /// Bundle weight 2*rho^Y - rho - rho_Y appearing in the dualizing-sheaf
    /// descriptor.
    pub fn bundle_weight(&self, rd: &RootDatum) -> Weight {
        self.two_rho_sup_y
            .iter()
            .zip(rd.rho())
            .zip(&self.rho_y)
            .map(|((t, r), ry)| t - r - ry)
            .collect()
    }
}

/// Builds the parabolic data for a subset `y` of node indices; the Levi
/// block must be of finite type.
pub fn parabolic_type(rd: &RootDatum, y: &[usize]) -> Result<ParabolicType> {
    let mut nodes: Vec<usize> = y.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&i| i >= rd.rank()) {
        return Err(Error::Usage(format!("parabolic node {bad} out of range")));
    }
    if !rd.gcm().is_finite_type_subset(&nodes) {
        let labels = nodes
            .iter()
            .map(|&i| rd.gcm().label(i).to_string())
            .collect();
        return Err(Error::LeviNotFiniteType(labels));
    }
    let mut rho_y = vec![0; rd.dim_h()];
    for &i in &nodes {
        for (r, v) in rho_y.iter_mut().zip(rd.fundamental_weight(i)) {
            *r += v;
        }
    }
    let rho_hat_y: Weight = rd.rho().iter().zip(&rho_y).map(|(r, y)| r - y).collect();
    let two_rho_sup_y = levi_two_rho(rd, &nodes);
    Ok(ParabolicType {
        y: nodes,
        rho_y,
        rho_hat_y,
        two_rho_sup_y,
    })
}

/// Sum of the positive roots of the finite-type Levi on `nodes` (that is,
/// twice the half-sum), computed by closing the simple roots under the Levi
/// reflections.
fn levi_two_rho(rd: &RootDatum, nodes: &[usize]) -> Weight {
    use std::collections::BTreeSet;
    // positive roots of the Levi in root-lattice coordinates
    let n = rd.rank();
    let mut positive: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = nodes
        .iter()
        .map(|&i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    for r in &frontier {
        positive.insert(r.clone());
    }
    while let Some(beta) = frontier.pop() {
        for &i in nodes {
            // s_i(beta) in root coordinates: beta - <beta, a_i^vee> alpha_i
            let c: i64 = (0..n).map(|j| rd.gcm().entry(i, j) * beta[j]).sum();
            let mut img = beta.clone();
            img[i] -= c;
            if img.iter().all(|&v| v >= 0) && positive.insert(img.clone()) {
                frontier.push(img);
            }
        }
    }
    let mut total = vec![0; rd.dim_h()];
    for beta in &positive {
        let w = rd.root_to_weight(beta);
        for (t, v) in total.iter_mut().zip(&w) {
            *t += v;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::preset;

    #[test]
    fn finite_a1_realization() {
        let rd = build_realization(preset("A1").unwrap());
        assert_eq!(rd.dim_h(), 1);
        assert_eq!(rd.pair_with_coroot(rd.fundamental_weight(0), 0), 1);
        assert_eq!(rd.pair_with_coroot(rd.rho(), 0), 1);
    }

    #[test]
    fn affine_a1_realization() {
        let rd = build_realization(preset("affine:A1").unwrap());
        assert_eq!(rd.dim_h(), 3);
        // fundamental weight of node 1 against both coroots
        assert_eq!(rd.pair_with_coroot(rd.fundamental_weight(1), 0), 0);
        assert_eq!(rd.pair_with_coroot(rd.fundamental_weight(1), 1), 1);
    }

    #[test]
    fn pairing_matrix_reproduces_gcm() {
        for name in ["A2", "B2", "G2", "affine:A1", "affine:A2", "hyperbolic:2,-3,-3,2"] {
            let rd = build_realization(preset(name).unwrap());
            for i in 0..rd.rank() {
                for j in 0..rd.rank() {
                    assert_eq!(
                        rd.pair_with_coroot(rd.simple_root(j), i),
                        rd.gcm().entry(i, j),
                        "{name} at ({i},{j})"
                    );
                }
                assert_eq!(rd.pair_with_coroot(rd.rho(), i), 1, "{name} rho at {i}");
            }
            // simple roots are linearly independent: the matrix with root
            // columns has full column rank
            let cols: Vec<Vec<i64>> = (0..rd.rank())
                .map(|j| rd.simple_root(j).clone())
                .collect();
            let mut rows = vec![vec![0i64; rd.rank()]; rd.dim_h()];
            for (j, c) in cols.iter().enumerate() {
                for (i, &v) in c.iter().enumerate() {
                    rows[i][j] = v;
                }
            }
            // rank via the helper on a padded square matrix
            let k = rd.rank().max(rd.dim_h());
            let mut sq = vec![vec![0i64; k]; k];
            for i in 0..rd.dim_h() {
                for j in 0..rd.rank() {
                    sq[i][j] = rows[i][j];
                }
            }
            assert_eq!(super::matrix_rank(&sq), rd.rank(), "{name} root independence");
        }
    }

    #[test]
    fn parabolic_weights_affine_a1() {
        let rd = build_realization(preset("affine:A1").unwrap());
        // empty parabolic: rho_Y = 0
        let p = parabolic_type(&rd, &[]).unwrap();
        assert!(p.rho_y().iter().all(|&v| v == 0));
        // Y = {node 1}: Levi is the rank-1 block
        let p = parabolic_type(&rd, &[1]).unwrap();
        assert_eq!(p.rho_y(), rd.fundamental_weight(1));
        assert_eq!(rd.pair_with_coroot(p.rho_hat_y(), 1), 0);
        assert_eq!(rd.pair_with_coroot(p.rho_hat_y(), 0), 1);
        // full set is the affine matrix: rejected
        let err = parabolic_type(&rd, &[0, 1]).unwrap_err();
        assert!(matches!(err, Error::LeviNotFiniteType(_)));
    }

    #[test]
    fn rho_hat_pattern_all_subsets_b2() {
        let rd = build_realization(preset("B2").unwrap());
        for y in [vec![], vec![0], vec![1], vec![0, 1]] {
            let p = parabolic_type(&rd, &y).unwrap();
            for i in 0..2 {
                let expected = if y.contains(&i) { 0 } else { 1 };
                assert_eq!(rd.pair_with_coroot(p.rho_hat_y(), i), expected);
            }
        }
    }

    #[test]
    fn levi_half_sum_a2_full() {
        let rd = build_realization(preset("A2").unwrap());
        let p = parabolic_type(&rd, &[0, 1]).unwrap();
        // positive roots a1, a2, a1+a2 sum to 2(a1+a2)
        let expected = {
            let mut v = rd.root_to_weight(&[2, 2]);
            v.iter_mut().for_each(|_| {});
            v
        };
        assert_eq!(p.two_rho_sup_y(), &expected);
    }

    #[test]
    fn perturbation_requires_null_pairing() {
        let rd = build_realization(preset("affine:A1").unwrap());
        // last coordinate is a completion coordinate: pairs to 0
        let ok = vec![vec![0, 0, 3], vec![0, 0, -1]];
        assert!(rd.perturb_fundamental_weights(&ok).is_ok());
        let bad = vec![vec![1, 0, 0], vec![0, 0, 0]];
        assert!(rd.perturb_fundamental_weights(&bad).is_err());
    }
}
