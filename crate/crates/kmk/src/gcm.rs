//! Generalized Cartan matrices: validation, symmetrizability, finite-type
//! detection, and the named presets accepted by the command line.
//!
//! The entry `a[i][j]` of a GCM is the pairing of the j-th simple root with
//! the i-th simple coroot. A matrix qualifies when the diagonal is 2, the
//! off-diagonal entries are nonpositive, and zeros are symmetric; the engine
//! additionally insists on a positive symmetrizer, which it stores as a
//! witness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A validated symmetrizable generalized Cartan matrix.
///
/// Node labels are carried along for parsing and display: finite presets
/// label nodes `1..=n`, affine presets `0..=n-1` with `0` the added node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gcm {
    n: usize,
    entries: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    labels: Vec<String>,
}

impl Gcm {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// `a[i][j]` = pairing of simple root j with simple coroot i.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Positive integer diagonal `d` with `d_i a_ij = d_j a_ji`, scaled to
    /// the smallest such integers.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Maps a node label (as used in words like `s1*s0`) to its index.
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// True when the symmetrized matrix is positive definite, i.e. the Weyl
    /// group is finite.
    pub fn is_finite_type(&self) -> bool {
        let all: Vec<usize> = (0..self.n).collect();
        self.is_finite_type_subset(&all)
    }

    /// Finite-type test for the principal submatrix on `nodes`, by
    /// positive-definiteness of the symmetrized block (exact integer
    /// leading-minor test).
    pub fn is_finite_type_subset(&self, nodes: &[usize]) -> bool {
        let k = nodes.len();
        // Symmetrized block b_ij = d_i * a_ij, an integer symmetric matrix.
        let b: Vec<Vec<BigInt>> = nodes
            .iter()
            .map(|&i| {
                nodes
                    .iter()
                    .map(|&j| BigInt::from(self.symmetrizer[i]) * BigInt::from(self.entries[i][j]))
                    .collect()
            })
            .collect();
        for m in 1..=k {
            if leading_minor(&b, m) <= BigInt::zero() {
                return false;
            }
        }
        true
    }
}

/// Determinant of the leading m x m block, fraction-free Bareiss elimination.
fn leading_minor(b: &[Vec<BigInt>], m: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = (0..m).map(|i| b[i][..m].to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..m {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..m).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
        for i in k + 1..m {
            a[i][k] = BigInt::zero();
        }
    }
    sign * a[m - 1][m - 1].clone()
}

/// Validates a square integer matrix as a symmetrizable GCM.
pub fn validate_gcm(matrix: &[Vec<i64>], labels: Option<Vec<String>>) -> Result<Gcm> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::NotGcm("empty matrix".into()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotGcm(format!(
                "row {i} has length {} in a {n}x{n} matrix",
                row.len()
            )));
        }
    }
    for i in 0..n {
        if matrix[i][i] != 2 {
            return Err(Error::NotGcm(format!("diagonal entry a[{i}][{i}] != 2")));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if matrix[i][j] > 0 {
                return Err(Error::NotGcm(format!(
                    "positive off-diagonal entry a[{i}][{j}] = {}",
                    matrix[i][j]
                )));
            }
            if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                return Err(Error::NotGcm(format!(
                    "a[{i}][{j}] = 0 but a[{j}][{i}] = {}",
                    matrix[j][i]
                )));
            }
        }
    }
    let symmetrizer = find_symmetrizer(matrix)?;
    let labels = match labels {
        Some(l) => {
            if l.len() != n {
                return Err(Error::Usage(format!(
                    "{} labels supplied for a rank-{n} matrix",
                    l.len()
                )));
            }
            l
        }
        None => (1..=n).map(|i| i.to_string()).collect(),
    };
    Ok(Gcm {
        n,
        entries: matrix.to_vec(),
        symmetrizer,
        labels,
    })
}

/// Positive rational symmetrizer by propagation along the Dynkin graph,
/// returned scaled to minimal positive integers.
fn find_symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = a.len();
    // d_i as fractions num/den of BigInt, propagated from an arbitrary root
    // of each connected component; every edge ratio a_ij/a_ji is positive.
    let mut d: Vec<Option<(BigInt, BigInt)>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((BigInt::one(), BigInt::one()));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (ni, di) = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_j = d_i * a_ij / a_ji
                let num = &ni * BigInt::from(a[i][j]);
                let den = &di * BigInt::from(a[j][i]);
                let g = num.gcd(&den);
                let (num, den) = (num / &g, den / g);
                // both a_ij, a_ji < 0 so the ratio is positive
                let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
                match &d[j] {
                    None => {
                        d[j] = Some((num, den));
                        stack.push(j);
                    }
                    Some((nj, dj)) => {
                        if &num * dj != nj * &den {
                            return Err(Error::NotSymmetrizable(format!(
                                "inconsistent cycle through nodes {i} and {j}"
                            )));
                        }
                    }
                }
            }
        }
    }
    // clear denominators, then divide by the common gcd
    let mut lcm = BigInt::one();
    for v in &d {
        let (_, den) = v.as_ref().unwrap();
        lcm = lcm.lcm(den);
    }
    let mut ints: Vec<BigInt> = d
        .iter()
        .map(|v| {
            let (num, den) = v.as_ref().unwrap();
            num * (&lcm / den)
        })
        .collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    for v in &mut ints {
        *v /= &g;
    }
    let mut out = Vec::with_capacity(n);
    for v in ints {
        let (_, digits) = v.to_u64_digits();
        if v.is_negative() || digits.len() > 1 {
            return Err(Error::NotSymmetrizable("symmetrizer out of range".into()));
        }
        out.push(*digits.first().unwrap_or(&1) as i64);
    }
    // verify d_i a_ij = d_j a_ji
    for i in 0..n {
        for j in 0..n {
            if out[i] * a[i][j] != out[j] * a[j][i] {
                return Err(Error::NotSymmetrizable(format!(
                    "witness check failed at ({i},{j})"
                )));
            }
        }
    }
    Ok(out)
}

/// Named presets accepted everywhere a root system is specified.
///
/// `hyperbolic:a,b,c,d` builds the 2x2 matrix `[[a,b],[c,d]]`.
pub fn preset(name: &str) -> Result<Gcm> {
    let finite_labels = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
    let affine_labels = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    match name {
        "A1" => validate_gcm(&[vec![2]], Some(finite_labels(1))),
        "A2" => validate_gcm(&[vec![2, -1], vec![-1, 2]], Some(finite_labels(2))),
        "B2" => validate_gcm(&[vec![2, -1], vec![-2, 2]], Some(finite_labels(2))),
        "G2" => validate_gcm(&[vec![2, -1], vec![-3, 2]], Some(finite_labels(2))),
        "affine:A1" => validate_gcm(&[vec![2, -2], vec![-2, 2]], Some(affine_labels(2))),
        "affine:A2" => validate_gcm(
            &[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]],
            Some(affine_labels(3)),
        ),
        _ => {
            if let Some(rest) = name.strip_prefix("hyperbolic:") {
                let vals: Vec<i64> = rest
                    .split(',')
                    .map(|s| s.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("bad hyperbolic preset: {e}")))?;
                if vals.len() != 4 {
                    return Err(Error::Parse(
                        "hyperbolic preset needs 4 comma-separated entries".into(),
                    ));
                }
                validate_gcm(
                    &[vec![vals[0], vals[1]], vec![vals[2], vals[3]]],
                    Some(finite_labels(2)),
                )
            } else {
                Err(Error::Parse(format!("unknown preset {name:?}")))
            }
        }
    }
}

/// Parses either a preset name or a JSON matrix like `[[2,-1],[-1,2]]`.
pub fn parse_gcm_spec(spec: &str) -> Result<Gcm> {
    let trimmed = spec.trim();
    if trimmed.starts_with('[') {
        let matrix: Vec<Vec<i64>> = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("bad JSON matrix: {e}")))?;
        validate_gcm(&matrix, None)
    } else {
        preset(trimmed)
    }
}

impl fmt::Display for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_is_valid_with_trivial_symmetrizer() {
        let g = validate_gcm(&[vec![2, -1], vec![-1, 2]], None).unwrap();
        assert_eq!(g.symmetrizer(), &[1, 1]);
        assert!(g.is_finite_type());
    }

    #[test]
    fn affine_a1_is_valid_but_not_finite() {
        let g = validate_gcm(&[vec![2, -2], vec![-2, 2]], None).unwrap();
        assert_eq!(g.symmetrizer(), &[1, 1]);
        assert!(!g.is_finite_type());
    }

    #[test]
    fn positive_off_diagonal_is_rejected() {
        let err = validate_gcm(&[vec![2, 1], vec![-1, 2]], None).unwrap_err();
        assert!(matches!(err, Error::NotGcm(_)));
    }

    #[test]
    fn asymmetric_zero_is_rejected() {
        let err = validate_gcm(&[vec![2, 0], vec![-1, 2]], None).unwrap_err();
        assert!(matches!(err, Error::NotGcm(_)));
    }

    #[test]
    fn b2_symmetrizer() {
        let g = preset("B2").unwrap();
        // d_1 a_12 = d_2 a_21 with a_12 = -1, a_21 = -2 forces d = (2, 1)
        assert_eq!(g.symmetrizer(), &[2, 1]);
        assert!(g.is_finite_type());
    }

    #[test]
    fn g2_finite_hyperbolic_not() {
        assert!(preset("G2").unwrap().is_finite_type());
        assert!(!preset("hyperbolic:2,-3,-3,2").unwrap().is_finite_type());
    }

    #[test]
    fn finite_type_subsets_of_affine_a1() {
        let g = preset("affine:A1").unwrap();
        assert!(g.is_finite_type_subset(&[]));
        assert!(g.is_finite_type_subset(&[0]));
        assert!(g.is_finite_type_subset(&[1]));
        assert!(!g.is_finite_type_subset(&[0, 1]));
    }

    #[test]
    fn json_matrix_parses() {
        let g = parse_gcm_spec("[[2,-1],[-1,2]]").unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.labels(), &["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn nonsymmetrizable_rejected() {
        // a_12 a_23 a_31 ratio cycle that cannot be balanced:
        // product of ratios around the cycle must be 1; here it is 8.
        let m = vec![
            vec![2, -1, -2],
            vec![-2, 2, -1],
            vec![-1, -2, 2],
        ];
        let err = validate_gcm(&m, None).unwrap_err();
        assert!(matches!(err, Error::NotSymmetrizable(_)));
    }
}
