//! Bruhat order, length-bounded intervals, and parabolic quotients.
//!
//! Intervals are enumerated by breadth-first search over right
//! multiplication by simple reflections, deduplicating on the canonical
//! action-matrix key, so an interval is exactly the lower set of elements up
//! to the length bound (intersected with the minimal coset representatives
//! when a parabolic subset is given). The order relation is precomputed with
//! the left-descent lifting recursion, which stays polynomial where the
//! subword search would blow up.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::root_datum::RootDatum;
use crate::weyl::{RealRoot, WeylElement};

pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// A lower-closed, length-bounded piece of the Weyl group (or of a
/// parabolic quotient), with its order relation and cover lists frozen.
#[derive(Debug, Clone)]
pub struct BruhatInterval {
    rd: RootDatum,
    bound: usize,
    parabolic: Option<Vec<usize>>,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    /// leq[a] is a bitset row: bit b set when elements[a] <= elements[b].
    leq: Vec<Vec<u64>>,
    covers_up: Vec<Vec<usize>>,
}

impl BruhatInterval {
    pub fn datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn parabolic(&self) -> Option<&[usize]> {
        self.parabolic.as_deref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &WeylElement {
        &self.elements[idx]
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w.key()).copied()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.index.contains_key(w.key())
    }

    /// Bruhat comparison of two interval members by index.
    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.leq[a][b / 64] & (1 << (b % 64)) != 0
    }

    /// Indices of the elements covering `w` inside the interval (within the
    /// quotient when the interval is parabolic).
    pub fn covers_up(&self, idx: usize) -> &[usize] {
        &self.covers_up[idx]
    }
}

/// Enumerates all elements of length at most `bound` (of the quotient W^P
/// when `parabolic` is given), with order and covers precomputed.
pub fn enumerate_interval(
    rd: &RootDatum,
    bound: usize,
    parabolic: Option<&[usize]>,
    element_cap: usize,
) -> Result<BruhatInterval> {
    let in_quotient = |w: &WeylElement, y: &[usize]| y.iter().all(|&i| w.sends_simple_positive(i));

    let y: Option<Vec<usize>> = parabolic.map(|p| {
        let mut v = p.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    });

    let mut elements: Vec<WeylElement> = vec![rd.identity()];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    index.insert(rd.identity().key().to_vec(), 0);
    let mut level: Vec<WeylElement> = vec![rd.identity()];
    for _len in 1..=bound {
        let mut next: Vec<WeylElement> = Vec::new();
        for w in &level {
            for i in 0..rd.rank() {
                // left multiplication: a longer s_i * w of a minimal coset
                // representative is again one, so this reaches all of W^P
                if !w.inv_sends_simple_positive(i) {
                    continue; // length would drop
                }
                let longer = rd.lmul_gen(i, w);
                if let Some(yy) = &y {
                    if !in_quotient(&longer, yy) {
                        continue;
                    }
                }
                if !index.contains_key(longer.key()) {
                    index.insert(longer.key().to_vec(), usize::MAX); // placeholder
                    next.push(longer);
                }
            }
        }
        next.sort();
        for w in next.iter() {
            if elements.len() >= element_cap {
                return Err(Error::IntervalTooLarge(element_cap));
            }
            *index.get_mut(w.key()).unwrap() = elements.len();
            elements.push(w.clone());
        }
        if next.is_empty() {
            break; // group (or quotient) exhausted below the bound
        }
        level = next;
    }

    // Order relation via the lifting recursion, memoized on index pairs.
    // For quotient intervals the recursion walks through W, so memoize on
    // canonical keys instead.
    let n = elements.len();
    let words = n.div_ceil(64);
    let mut leq = vec![vec![0u64; words]; n];
    let mut memo: HashMap<(Vec<i64>, Vec<i64>), bool> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if bruhat_leq_memo(rd, &elements[a], &elements[b], &mut memo) {
                leq[a][b / 64] |= 1 << (b % 64);
            }
        }
    }

    // Covers: length difference one plus comparability.
    let mut covers_up = vec![Vec::new(); n];
    for a in 0..n {
        let la = elements[a].length();
        for b in 0..n {
            if elements[b].length() == la + 1 && leq[a][b / 64] & (1 << (b % 64)) != 0 {
                covers_up[a].push(b);
            }
        }
    }

    Ok(BruhatInterval {
        rd: rd.clone(),
        bound,
        parabolic: y,
        elements,
        index,
        leq,
        covers_up,
    })
}

fn bruhat_leq_memo(
    rd: &RootDatum,
    u: &WeylElement,
    v: &WeylElement,
    memo: &mut HashMap<(Vec<i64>, Vec<i64>), bool>,
) -> bool {
    if u.length() > v.length() {
        return false;
    }
    if u.is_identity() {
        return true;
    }
    let key = (u.key().to_vec(), v.key().to_vec());
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    // the first letter of the ShortLex word is a left descent of v
    let i = v.word()[0];
    let sv = rd.lmul_gen(i, v);
    let su = rd.lmul_gen(i, u);
    let result = if su.length() < u.length() {
        bruhat_leq_memo(rd, &su, &sv, memo)
    } else {
        bruhat_leq_memo(rd, u, &sv, memo)
    };
    memo.insert(key, result);
    result
}

/// Bruhat order on the full group, independent of any interval.
pub fn bruhat_leq(rd: &RootDatum, u: &WeylElement, v: &WeylElement) -> bool {
    let mut memo = HashMap::new();
    bruhat_leq_memo(rd, u, v, &mut memo)
}

/// The unique minimal-length representative of the coset w W_P.
pub fn min_coset_rep(rd: &RootDatum, w: &WeylElement, y: &[usize]) -> WeylElement {
    let mut cur = w.clone();
    loop {
        match y.iter().find(|&&i| !cur.sends_simple_positive(i)) {
            Some(&i) => cur = rd.mul_gen(&cur, i),
            None => return cur,
        }
    }
}

/// Enumerates the finite parabolic subgroup W_P generated by the nodes of
/// `y`, sorted canonically.
pub fn parabolic_subgroup(rd: &RootDatum, y: &[usize], element_cap: usize) -> Result<Vec<WeylElement>> {
    let mut out: Vec<WeylElement> = vec![rd.identity()];
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    seen.insert(rd.identity().key().to_vec(), ());
    let mut frontier = vec![rd.identity()];
    while let Some(w) = frontier.pop() {
        for &i in y {
            let next = rd.mul_gen(&w, i);
            if !seen.contains_key(next.key()) {
                seen.insert(next.key().to_vec(), ());
                if out.len() >= element_cap {
                    return Err(Error::IntervalTooLarge(element_cap));
                }
                out.push(next.clone());
                frontier.push(next);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The full coset u W_P of a minimal representative, sorted canonically.
pub fn coset(rd: &RootDatum, u: &WeylElement, y: &[usize], element_cap: usize) -> Result<Vec<WeylElement>> {
    let wp = parabolic_subgroup(rd, y, element_cap)?;
    let mut out: Vec<WeylElement> = wp.iter().map(|tau| rd.multiply(u, tau)).collect();
    out.sort();
    Ok(out)
}

/// All covers of `w` in the quotient order, each with the positive real
/// root of the reflection connecting the pair.
pub fn covers_in_quotient(
    interval: &BruhatInterval,
    w: &WeylElement,
) -> Result<Vec<(WeylElement, RealRoot)>> {
    let rd = interval.datum();
    let Some(idx) = interval.index_of(w) else {
        return Err(Error::Usage(format!(
            "element {} is outside the interval",
            w.display(rd)
        )));
    };
    let mut out = Vec::new();
    for &vi in interval.covers_up(idx) {
        let v = interval.element(vi);
        let t = rd.multiply(v, &rd.inverse(w));
        let beta = rd.reflection_root(&t)?;
        out.push((v.clone(), beta));
    }
    Ok(out)
}
