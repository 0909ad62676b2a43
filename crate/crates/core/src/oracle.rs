//! A rewriting oracle for Clifford products, independent of the normal-form
//! engine: words in the tensor algebra are rewritten at the rightmost
//! out-of-order position until no rule applies.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::clifford::{render_presentation, AlgebraPresentation};
use crate::conormal::BilinearFormData;
use crate::error::{Error, Result};
use crate::quotient::QuotientRing;
use crate::ring::RingElement;

pub type Word = Vec<usize>;
pub type WordTerms = BTreeMap<Word, RingElement>;

#[derive(Debug, Clone)]
pub struct BruteForceAlgebra {
    /// Irreducible words reached from all tensor words up to the bound.
    pub basis: Vec<Word>,
    /// Product of every ordered pair of basis words.
    pub products: BTreeMap<(Word, Word), WordTerms>,
    pub presentation: AlgebraPresentation,
}

struct Rewriter<'a> {
    k: &'a Arc<QuotientRing>,
    form: &'a BilinearFormData,
    bound: usize,
}

impl Rewriter<'_> {
    fn polar(&self, i: usize, j: usize) -> Result<RingElement> {
        self.k.add(self.form.entry(i, j), self.form.entry(j, i))
    }

    fn normalize(&self, word: Word) -> Result<WordTerms> {
        if word.len() > self.bound {
            return Err(Error::BoundTooSmall(self.bound));
        }
        let mut pending: WordTerms = BTreeMap::from([(word, self.k.one())]);
        let mut done = WordTerms::new();
        // Each step either shortens a word or removes an inversion.
        let mut budget = 1usize << 20;
        while let Some((w, c)) = pending.pop_first() {
            budget = budget.checked_sub(1).ok_or(Error::BoundTooSmall(self.bound))?;
            let Some(t) = (0..w.len().saturating_sub(1)).rev().find(|&t| w[t] >= w[t + 1]) else {
                add_into(self.k, &mut done, w, c)?;
                continue;
            };
            let (i, j) = (w[t], w[t + 1]);
            let mut short = w.clone();
            short.drain(t..t + 2);
            if i == j {
                add_into(self.k, &mut pending, short, self.k.mul(&c, self.form.entry(i, i))?)?;
            } else {
                let mut swapped = w;
                swapped.swap(t, t + 1);
                add_into(self.k, &mut pending, swapped, self.k.neg(&c)?)?;
                add_into(self.k, &mut pending, short, self.k.mul(&c, &self.polar(i, j)?)?)?;
            }
        }
        Ok(done)
    }
}

fn add_into(k: &QuotientRing, map: &mut WordTerms, w: Word, c: RingElement) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    let acc = match map.remove(&w) {
        Some(a) => k.add(&a, &c)?,
        None => c,
    };
    if !acc.is_zero() {
        map.insert(w, acc);
    }
    Ok(())
}

/// Enumerates tensor words of length at most `min(word_bound, n + 1)`,
/// reduces them, and tabulates the products of the irreducible words.
/// Products need words of length `2n`, so `word_bound < 2n` fails.
pub fn brute_force_presentation(
    labels: &[String],
    form: &BilinearFormData,
    word_bound: usize,
) -> Result<BruteForceAlgebra> {
    let n = form.rank();
    if labels.len() != n {
        return Err(Error::DegreeMismatch(format!("{} labels for a rank-{n} form", labels.len())));
    }
    if word_bound < 2 * n {
        return Err(Error::BoundTooSmall(word_bound));
    }
    let k = form.coefficients();
    let rw = Rewriter { k, form, bound: word_bound };
    let mut basis: BTreeSet<Word> = BTreeSet::new();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..=(n + 1).min(word_bound) {
        let mut next = Vec::new();
        for w in frontier {
            basis.extend(rw.normalize(w.clone())?.into_keys());
            if w.len() < (n + 1).min(word_bound) {
                for i in 0..n {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    let mut basis: Vec<Word> = basis.into_iter().collect();
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut products = BTreeMap::new();
    for u in &basis {
        for v in &basis {
            let mut w = u.clone();
            w.extend(v);
            products.insert((u.clone(), v.clone()), rw.normalize(w)?);
        }
    }
    // Constant term of a_i a_j.
    let coefficient = |i: usize, j: usize| -> RingElement {
        products.get(&(vec![i], vec![j])).and_then(|t| t.get(&Vec::new()).cloned()).unwrap_or_else(|| k.zero())
    };
    let q = |i: usize| coefficient(i, i);
    let s = |i: usize, j: usize| k.add(&coefficient(i, j), &coefficient(j, i)).expect("same ring");
    let presentation = render_presentation(&k.to_string(), labels, form.degrees(), &q, &s);
    Ok(BruteForceAlgebra { basis, products, presentation })
}
