//! Weyl-group elements and real roots.
//!
//! An element is identified by its action on the root lattice, which is
//! faithful for every symmetrizable GCM; the stored reduced word is the
//! ShortLex-minimal one, extracted from the matrix by repeatedly peeling the
//! smallest left descent. Keeping the inverse matrix alongside makes descent
//! tests and cover reflections cheap.

use std::fmt;

use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, Weight};

/// Root-lattice vector: coordinates over the simple roots.
pub type RootVec = Vec<i64>;

/// A canonicalized Weyl-group element.
#[derive(Debug, Clone)]
pub struct WeylElement {
    word: Vec<usize>,
    action: Vec<i64>,
    inv_action: Vec<i64>,
    n: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}
impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by (length, ShortLex word): the canonical enumeration order.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl WeylElement {
    /// ShortLex-minimal reduced word, internal node indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Row-major n x n matrix; column j holds the root-lattice coordinates
    /// of the image of the j-th simple root.
    pub fn action(&self) -> &[i64] {
        &self.action
    }

    /// Hashable canonical key.
    pub fn key(&self) -> &[i64] {
        &self.action
    }

    /// Image of a root-lattice vector.
    pub fn apply_root(&self, v: &[i64]) -> RootVec {
        mat_vec(&self.action, v, self.n)
    }

    /// Image of a root-lattice vector under the inverse element.
    pub fn apply_root_inv(&self, v: &[i64]) -> RootVec {
        mat_vec(&self.inv_action, v, self.n)
    }

    /// Image of a weight under the element, computed along the word.
    pub fn apply_weight(&self, rd: &RootDatum, lambda: &Weight) -> Weight {
        let mut out = lambda.clone();
        for &i in self.word.iter().rev() {
            out = rd.reflect_weight(i, &out);
        }
        out
    }

    /// Column j of the action matrix: the image of simple root j.
    pub fn image_of_simple(&self, j: usize) -> RootVec {
        (0..self.n).map(|i| self.action[i * self.n + j]).collect()
    }

    /// Sign of w(alpha_j): true when positive. Real roots have uniformly
    /// signed coordinates.
    pub fn sends_simple_positive(&self, j: usize) -> bool {
        column_positive(&self.action, j, self.n)
    }

    /// Sign of w^{-1}(alpha_j): true when positive. A negative sign means j
    /// is a left descent.
    pub fn inv_sends_simple_positive(&self, j: usize) -> bool {
        column_positive(&self.inv_action, j, self.n)
    }

    /// Render using the node labels of the datum, e.g. `s1*s0` or `e`.
    pub fn display(&self, rd: &RootDatum) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        self.word
            .iter()
            .map(|&i| format!("s{}", rd.gcm().label(i)))
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn mat_vec(m: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn column_positive(m: &[i64], j: usize, n: usize) -> bool {
    for i in 0..n {
        let v = m[i * n + j];
        if v > 0 {
            return true;
        }
        if v < 0 {
            return false;
        }
    }
    // column of a Weyl matrix is a real root, never zero
    unreachable!("zero column in a Weyl-group action matrix")
}

/// A real root with its sign flag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RealRoot {
    pub coords: RootVec,
    pub positive: bool,
}

impl RealRoot {
    pub fn from_coords(coords: RootVec) -> RealRoot {
        let positive = coords
            .iter()
            .find(|&&c| c != 0)
            .map(|&c| c > 0)
            .unwrap_or(true);
        RealRoot { coords, positive }
    }

    pub fn display(&self, rd: &RootDatum) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let label = rd.gcm().label(i);
            let term = match c {
                1 => format!("a{label}"),
                -1 => format!("-a{label}"),
                c => format!("{c}*a{label}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                out.push('-');
                out.push_str(stripped);
            } else {
                out.push('+');
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl RootDatum {
    fn simple_reflection_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank();
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            m[j * n + j] = 1;
        }
        for j in 0..n {
            m[i * n + j] -= self.gcm().entry(i, j);
        }
        m
    }

    pub fn identity(&self) -> WeylElement {
        let n = self.rank();
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            m[j * n + j] = 1;
        }
        WeylElement {
            word: Vec::new(),
            action: m.clone(),
            inv_action: m,
            n,
        }
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        let m = self.simple_reflection_matrix(i);
        WeylElement {
            word: vec![i],
            action: m.clone(),
            inv_action: m,
            n: self.rank(),
        }
    }

    /// w * s_i with the canonical word maintained.
    pub fn mul_gen(&self, w: &WeylElement, i: usize) -> WeylElement {
        let n = self.rank();
        let s = self.simple_reflection_matrix(i);
        let action = mat_mul(&w.action, &s, n);
        let inv_action = mat_mul(&s, &w.inv_action, n);
        let len = if w.sends_simple_positive(i) {
            w.length() + 1
        } else {
            w.length() - 1
        };
        self.element_from_action(action, inv_action, len)
    }

    /// s_i * w with the canonical word maintained.
    pub fn lmul_gen(&self, i: usize, w: &WeylElement) -> WeylElement {
        let n = self.rank();
        let s = self.simple_reflection_matrix(i);
        let action = mat_mul(&s, &w.action, n);
        let inv_action = mat_mul(&w.inv_action, &s, n);
        let len = if w.inv_sends_simple_positive(i) {
            w.length() + 1
        } else {
            w.length() - 1
        };
        self.element_from_action(action, inv_action, len)
    }

    /// Group product w * v.
    pub fn multiply(&self, w: &WeylElement, v: &WeylElement) -> WeylElement {
        let mut out = w.clone();
        for &i in v.word() {
            out = self.mul_gen(&out, i);
        }
        out
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        self.element_from_action(w.inv_action.clone(), w.action.clone(), w.length())
    }

    /// Canonicalizes an arbitrary word (indices in range) into a Weyl
    /// element; idempotent on already-reduced input.
    pub fn canonicalize(&self, word: &[usize]) -> WeylElement {
        let mut out = self.identity();
        for &i in word {
            debug_assert!(i < self.rank(), "generator index out of range");
            out = self.mul_gen(&out, i);
        }
        out
    }

    /// Rebuilds the ShortLex word of an element from its matrices and known
    /// length by peeling smallest left descents.
    fn element_from_action(&self, action: Vec<i64>, inv_action: Vec<i64>, len: usize) -> WeylElement {
        let n = self.rank();
        let mut word = Vec::with_capacity(len);
        let mut m = action.clone();
        let mut mi = inv_action.clone();
        for _ in 0..len {
            let i = (0..n)
                .find(|&i| !column_positive(&mi, i, n))
                .expect("length bookkeeping out of sync with the action matrix");
            word.push(i);
            let s = self.simple_reflection_matrix(i);
            m = mat_mul(&s, &m, n);
            mi = mat_mul(&mi, &s, n);
        }
        debug_assert!((0..n * n).all(|k| m[k] == i64::from(k % n == k / n)));
        WeylElement {
            word,
            action,
            inv_action,
            n,
        }
    }

    /// Parses `e` or `s<label>*s<label>*...` into a canonical element.
    pub fn parse_word(&self, text: &str) -> Result<WeylElement> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(self.identity());
        }
        let mut indices = Vec::new();
        for piece in t.split('*') {
            let p = piece.trim();
            let Some(label) = p.strip_prefix('s') else {
                return Err(Error::Parse(format!("bad generator {p:?} in {text:?}")));
            };
            let Some(idx) = self.gcm().index_of_label(label) else {
                return Err(Error::Parse(format!("unknown node label {label:?}")));
            };
            indices.push(idx);
        }
        Ok(self.canonicalize(&indices))
    }

    /// Inversion set of w: the positive real roots sent negative by w^{-1},
    /// listed along the canonical word. Its size equals the length.
    pub fn inversion_set(&self, w: &WeylElement) -> Vec<RealRoot> {
        let mut prefix = self.identity();
        let mut out = Vec::with_capacity(w.length());
        for &i in w.word() {
            let mut coords = vec![0i64; self.rank()];
            coords[i] = 1;
            out.push(RealRoot::from_coords(prefix.apply_root(&coords)));
            prefix = self.mul_gen(&prefix, i);
        }
        out
    }

    /// The canonical reflection with a given positive real root, by height
    /// descent to a simple root.
    pub fn reflection_of_root(&self, beta: &RealRoot) -> Result<WeylElement> {
        if !beta.positive {
            return Err(Error::NotAReflection(format!(
                "root {:?} is not positive",
                beta.coords
            )));
        }
        let mut chain = Vec::new();
        let mut current = beta.coords.clone();
        loop {
            let nonzero: Vec<usize> = (0..self.rank()).filter(|&i| current[i] != 0).collect();
            if nonzero.len() == 1 && current[nonzero[0]] == 1 {
                let mut t = self.simple_reflection(nonzero[0]);
                for &i in chain.iter().rev() {
                    t = self.lmul_gen(i, &t);
                    t = self.mul_gen(&t, i);
                }
                return Ok(t);
            }
            // some i with <beta, a_i^vee> > 0 strictly lowers the height
            let mut found = None;
            for i in 0..self.rank() {
                let c: i64 = (0..self.rank())
                    .map(|j| self.gcm().entry(i, j) * current[j])
                    .sum();
                if c > 0 && current[i] > 0 {
                    let mut img = current.clone();
                    img[i] -= c;
                    if img.iter().all(|&v| v >= 0) {
                        found = Some((i, img));
                        break;
                    }
                }
            }
            let Some((i, img)) = found else {
                return Err(Error::NotAReflection(format!(
                    "{:?} is not a positive real root",
                    beta.coords
                )));
            };
            chain.push(i);
            current = img;
        }
    }

    /// Extracts the positive real root of a reflection, verifying the
    /// element really is one.
    pub fn reflection_root(&self, t: &WeylElement) -> Result<RealRoot> {
        if t.is_identity() {
            return Err(Error::NotAReflection("e".into()));
        }
        let n = self.rank();
        // first simple root moved by t gives a multiple of the root
        let mut beta: Option<RootVec> = None;
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            let img = t.apply_root(&e);
            let diff: Vec<i64> = e.iter().zip(&img).map(|(a, b)| a - b).collect();
            if diff.iter().any(|&v| v != 0) {
                beta = Some(diff);
                break;
            }
        }
        let Some(mut coords) = beta else {
            return Err(Error::NotAReflection("acts trivially".into()));
        };
        let g = coords
            .iter()
            .fold(0i64, |acc, &v| num_integer::gcd(acc, v.abs()));
        for c in coords.iter_mut() {
            *c /= g;
        }
        if coords.iter().find(|&&c| c != 0).map(|&c| c < 0) == Some(true) {
            for c in coords.iter_mut() {
                *c = -*c;
            }
        }
        let root = RealRoot::from_coords(coords);
        let canon = self.reflection_of_root(&root)?;
        if canon != *t {
            return Err(Error::NotAReflection(
                "element does not match the reflection of its root".into(),
            ));
        }
        Ok(root)
    }
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
    fn squares_cancel() {
        let rd = datum("A2");
        let w = rd.canonicalize(&[0, 0]);
        assert!(w.is_identity());
        assert_eq!(w.length(), 0);
    }

    #[test]
    fn braid_relation_identified() {
        let rd = datum("A2");
        let a = rd.canonicalize(&[0, 1, 0]);
        let b = rd.canonicalize(&[1, 0, 1]);
        assert_eq!(a, b);
        assert_eq!(a.length(), 3);
        // ShortLex picks the lexicographically smaller word
        assert_eq!(a.word(), &[0, 1, 0]);
    }

    #[test]
    fn infinite_dihedral_words_do_not_collapse() {
        let rd = datum("affine:A1");
        let w = rd.canonicalize(&[0, 1, 0]);
        assert_eq!(w.length(), 3);
        let long = rd.canonicalize(&[0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(long.length(), 7);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let rd = datum("B2");
        let w = rd.canonicalize(&[1, 0, 1, 0]);
        let again = rd.canonicalize(w.word());
        assert_eq!(w, again);
        assert_eq!(w.word(), again.word());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let rd = datum("affine:A1");
        let w = rd.parse_word("s1*s0*s1").unwrap();
        assert_eq!(w.display(&rd), "s1*s0*s1");
        assert_eq!(rd.parse_word("e").unwrap().length(), 0);
        assert!(rd.parse_word("s7").is_err());
    }

    #[test]
    fn inversion_sets_match_length() {
        let rd = datum("A2");
        assert!(rd.inversion_set(&rd.identity()).is_empty());
        let s0 = rd.simple_reflection(0);
        let inv = rd.inversion_set(&s0);
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].coords, vec![1, 0]);
        let w = rd.canonicalize(&[0, 1, 0]);
        let inv = rd.inversion_set(&w);
        assert_eq!(inv.len(), 3);
        // all three positive roots of A2
        let coords: std::collections::BTreeSet<_> =
            inv.iter().map(|r| r.coords.clone()).collect();
        assert!(coords.contains(&vec![1, 0]));
        assert!(coords.contains(&vec![0, 1]));
        assert!(coords.contains(&vec![1, 1]));
    }

    #[test]
    fn inversion_sum_is_rho_minus_w_rho() {
        for name in ["A2", "affine:A1"] {
            let rd = datum(name);
            // all words of length <= 4
            let mut words = vec![vec![]];
            for _ in 0..4 {
                let mut next = Vec::new();
                for w in &words {
                    for i in 0..rd.rank() {
                        let mut v = w.clone();
                        v.push(i);
                        next.push(v);
                    }
                }
                words.extend(next);
            }
            for word in words {
                let w = rd.canonicalize(&word);
                let sum_coords = rd.inversion_set(&w).iter().fold(
                    vec![0i64; rd.rank()],
                    |mut acc, r| {
                        for (a, c) in acc.iter_mut().zip(&r.coords) {
                            *a += c;
                        }
                        acc
                    },
                );
                let lhs = rd.root_to_weight(&sum_coords);
                let wrho = w.apply_weight(&rd, rd.rho());
                let rhs: Vec<i64> = rd.rho().iter().zip(&wrho).map(|(a, b)| a - b).collect();
                assert_eq!(lhs, rhs, "{name}, word {:?}", w.word());
            }
        }
    }

    #[test]
    fn reflection_root_round_trip() {
        let rd = datum("affine:A1");
        // t = s0 s1 s0 ... built as v w^{-1} from a cover pair
        let v = rd.parse_word("s0*s1*s0").unwrap();
        let w = rd.parse_word("s1*s0").unwrap();
        let t = rd.multiply(&v, &rd.inverse(&w));
        assert_eq!(t, rd.simple_reflection(0));
        let root = rd.reflection_root(&t).unwrap();
        assert_eq!(root.coords, vec![1, 0]);

        // a longer reflection: s0 s1 s0 itself
        let root = rd.reflection_root(&v).unwrap();
        assert!(root.positive);
        assert_eq!(rd.reflection_of_root(&root).unwrap(), v);

        // non-reflections are rejected
        let err = rd.reflection_root(&rd.parse_word("s0*s1").unwrap());
        assert!(err.is_err());
    }

    #[test]
    fn apply_weight_matches_matrix_on_roots() {
        let rd = datum("B2");
        let w = rd.canonicalize(&[0, 1, 0]);
        let beta = vec![1i64, 1];
        let via_matrix = rd.root_to_weight(&w.apply_root(&beta));
        let via_word = w.apply_weight(&rd, &rd.root_to_weight(&beta));
        assert_eq!(via_matrix, via_word);
    }
}
