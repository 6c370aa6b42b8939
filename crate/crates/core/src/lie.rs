//! Completed free Lie algebras in the Lyndon basis.
//!
//! A Lie element is stored as coefficients on Lyndon words; the word stands
//! for its standard bracketing. Brackets are computed in the free associative
//! algebra and rewritten back: the lexicographically smallest word of a
//! nonzero Lie polynomial is always Lyndon, and the expansion of the
//! bracketing of a Lyndon word `w` is `w` plus larger words, so peeling off
//! the smallest word recovers the coordinates.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{add_term, axpy, SparseVec};
use crate::rational::Rational;

/// A word in generator indices.
pub type Word = Vec<u8>;

/// A graded associative polynomial: entry `d` holds the degree-`d` part.
pub type GradedPoly = Vec<SparseVec<Word>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::invalid("alphabet is empty"));
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::invalid("alphabet too large"));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.degree == 0 {
                return Err(Error::invalid(alloc::format!("generator {} has degree 0", l.name)));
            }
            if letters[..i].iter().any(|m| m.name == l.name) {
                return Err(Error::invalid(alloc::format!("duplicate generator {}", l.name)));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Letters of degree 1 with the given names.
    pub fn uniform(names: &[&str]) -> Result<Self> {
        Alphabet::new(names.iter().map(|n| Letter { name: n.to_string(), degree: 1 }).collect())
    }

    /// The two-letter alphabet `{A, B}` carrying associators.
    pub fn ab() -> Self {
        Alphabet::uniform(&["A", "B"]).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn name(&self, i: u8) -> &str {
        &self.letters[i as usize].name
    }

    pub fn degree(&self, i: u8) -> usize {
        self.letters[i as usize].degree
    }

    pub fn index(&self, name: &str) -> Option<u8> {
        self.letters.iter().position(|l| l.name == name).map(|i| i as u8)
    }

    pub fn word_degree(&self, w: &[u8]) -> usize {
        w.iter().map(|&i| self.degree(i)).sum()
    }

    /// All words of exactly weighted degree `d`, in lexicographic order.
    pub fn words_of_degree(&self, d: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.words_rec(d, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, rem: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..self.len() {
            let g = self.letters[i].degree;
            if g <= rem {
                cur.push(i as u8);
                self.words_rec(rem - g, cur, out);
                cur.pop();
            }
        }
    }
}

/// Nested bracket tree over letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Letter(u8),
    Pair(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn pair(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Pair(Box::new(a), Box::new(b))
    }

    pub fn word(&self) -> Word {
        match self {
            Bracket::Letter(i) => vec![*i],
            Bracket::Pair(a, b) => {
                let mut w = a.word();
                w.extend(b.word());
                w
            }
        }
    }

    /// Associative expansion `[a,b] = ab - ba`.
    pub fn expand(&self) -> SparseVec<Word> {
        match self {
            Bracket::Letter(i) => SparseVec::from([(vec![*i], Rational::one())]),
            Bracket::Pair(a, b) => commutator(&a.expand(), &b.expand()),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> BracketDisplay<'a> {
        BracketDisplay { bracket: self, alphabet }
    }
}

pub struct BracketDisplay<'a> {
    bracket: &'a Bracket,
    alphabet: &'a Alphabet,
}

impl fmt::Display for BracketDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bracket {
            Bracket::Letter(i) => f.write_str(self.alphabet.name(*i)),
            Bracket::Pair(a, b) => {
                write!(f, "[{},{}]", a.display(self.alphabet), b.display(self.alphabet))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonBracket {
    pub word: Word,
    pub bracket: Bracket,
}

/// Strictly smaller than every proper rotation.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().lt(rot)
    })
}

/// `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (Word, Word) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    let k = (1..w.len()).find(|&k| is_lyndon(&w[k..])).expect("length >= 2");
    (w[..k].to_vec(), w[k..].to_vec())
}

pub fn standard_bracketing(w: &[u8]) -> Bracket {
    if w.len() == 1 {
        return Bracket::Letter(w[0]);
    }
    let (u, v) = standard_factorization(w);
    Bracket::pair(standard_bracketing(&u), standard_bracketing(&v))
}

/// Lyndon words over `k` letters of length at most `max_len`, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        out.push(w.iter().map(|&c| c as u8).collect());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

pub fn lyndon_basis(alphabet: &Alphabet, degree: usize) -> Result<Vec<LyndonBracket>> {
    if degree < 1 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let mut words: Vec<Word> =
        lyndon_words(alphabet.len(), degree).into_iter().filter(|w| alphabet.word_degree(w) == degree).collect();
    words.sort();
    Ok(words.into_iter().map(|w| LyndonBracket { bracket: standard_bracketing(&w), word: w }).collect())
}

/// Number of Lyndon words of length `n` over `k` letters, `(1/n) Σ μ(d) k^(n/d)`.
pub fn witt_count(k: u64, n: u64) -> u64 {
    fn mobius(mut m: u64) -> i64 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if m > 1 {
            res = -res;
        }
        res
    }
    let mut total: i64 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(d) * (k.pow((n / d) as u32) as i64);
        }
    }
    (total / n as i64) as u64
}

pub fn word_product(a: &SparseVec<Word>, b: &SparseVec<Word>) -> SparseVec<Word> {
    let mut out = SparseVec::new();
    for (u, c) in a {
        for (v, d) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            add_term(&mut out, w, c * d);
        }
    }
    out
}

pub fn commutator(a: &SparseVec<Word>, b: &SparseVec<Word>) -> SparseVec<Word> {
    let mut out = word_product(a, b);
    axpy(&mut out, &-Rational::one(), &word_product(b, a));
    out
}

/// Truncated product of graded polynomials, result has length `n + 1`.
pub fn graded_product(a: &GradedPoly, b: &GradedPoly, n: usize) -> GradedPoly {
    let mut out = vec![SparseVec::new(); n + 1];
    for (i, p) in a.iter().enumerate() {
        if p.is_empty() {
            continue;
        }
        for (j, q) in b.iter().enumerate() {
            if i + j > n || q.is_empty() {
                continue;
            }
            let prod = word_product(p, q);
            axpy(&mut out[i + j], &Rational::one(), &prod);
        }
    }
    out
}

/// Element of the degree-completed free Lie algebra, truncated at
/// `truncation`, with coefficients on Lyndon words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSeries {
    alphabet: Alphabet,
    truncation: usize,
    terms: Vec<SparseVec<Word>>,
}

impl LieSeries {
    pub fn zero(alphabet: &Alphabet, truncation: usize) -> Self {
        LieSeries { alphabet: alphabet.clone(), truncation, terms: vec![SparseVec::new(); truncation + 1] }
    }

    pub fn generator(alphabet: &Alphabet, name: &str, truncation: usize) -> Result<Self> {
        let i = alphabet.index(name).ok_or_else(|| Error::invalid(alloc::format!("unknown generator {name}")))?;
        let mut s = LieSeries::zero(alphabet, truncation);
        let d = alphabet.degree(i);
        if d <= truncation {
            s.terms[d].insert(vec![i], Rational::one());
        }
        Ok(s)
    }

    /// Builds a series from Lyndon-word coefficients; terms above the
    /// truncation are dropped.
    pub fn from_lyndon_terms(
        alphabet: &Alphabet,
        truncation: usize,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<Self> {
        let mut s = LieSeries::zero(alphabet, truncation);
        for (w, c) in terms {
            if !is_lyndon(&w) || w.iter().any(|&i| i as usize >= alphabet.len()) {
                return Err(Error::invalid("term is not a Lyndon word over the alphabet"));
            }
            let d = alphabet.word_degree(&w);
            if d <= truncation {
                add_term(&mut s.terms[d], w, c);
            }
        }
        Ok(s)
    }

    /// Builds a series from arbitrary bracket trees, rewriting into the
    /// Lyndon basis.
    pub fn from_brackets(
        alphabet: &Alphabet,
        truncation: usize,
        terms: impl IntoIterator<Item = (Bracket, Rational)>,
    ) -> Result<Self> {
        let mut poly = vec![SparseVec::new(); truncation + 1];
        for (b, c) in terms {
            let w = b.word();
            if w.iter().any(|&i| i as usize >= alphabet.len()) {
                return Err(Error::invalid("bracket uses a letter outside the alphabet"));
            }
            let d = alphabet.word_degree(&w);
            if d <= truncation {
                axpy(&mut poly[d], &c, &b.expand());
            }
        }
        LieSeries::from_assoc(alphabet, truncation, &poly)
    }

    /// Rewrites a graded associative polynomial into the Lyndon basis.
    /// Fails if it is not a Lie element or has a constant term.
    pub fn from_assoc(alphabet: &Alphabet, truncation: usize, poly: &GradedPoly) -> Result<Self> {
        let mut s = LieSeries::zero(alphabet, truncation);
        let mut cache: BTreeMap<Word, SparseVec<Word>> = BTreeMap::new();
        for (d, p) in poly.iter().enumerate().take(truncation + 1) {
            let mut p = p.clone();
            while let Some((w, c)) = p.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
                if !is_lyndon(&w) {
                    return Err(Error::invalid("polynomial is not a Lie element"));
                }
                let e = cache.entry(w.clone()).or_insert_with(|| standard_bracketing(&w).expand());
                axpy(&mut p, &-c.clone(), e);
                s.terms[d].insert(w, c);
            }
        }
        Ok(s)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Lyndon-word coefficients of degree `d`.
    pub fn degree_part(&self, d: usize) -> &SparseVec<Word> {
        &self.terms[d]
    }

    pub fn coeff(&self, w: &[u8]) -> Rational {
        let d = self.alphabet.word_degree(w);
        self.terms.get(d).and_then(|t| t.get(w)).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(degree, word, coefficient)` in degree-then-lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Word, &Rational)> {
        self.terms.iter().enumerate().flat_map(|(d, t)| t.iter().map(move |(w, c)| (d, w, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut s = LieSeries::zero(&self.alphabet, n);
        for d in 0..=n.min(self.truncation) {
            s.terms[d] = self.terms[d].clone();
        }
        s
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::invalid("alphabet mismatch"));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, c: &Rational) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.truncation.min(other.truncation);
        let mut s = self.truncate(n);
        for d in 0..=n {
            axpy(&mut s.terms[d], c, &other.terms[d]);
        }
        Ok(s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = self.clone();
        for t in s.terms.iter_mut() {
            *t = crate::linalg::scale(t, c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Associative expansion, one entry per degree.
    pub fn to_assoc(&self) -> GradedPoly {
        self.terms
            .iter()
            .map(|t| {
                let mut out = SparseVec::new();
                for (w, c) in t {
                    axpy(&mut out, c, &standard_bracketing(w).expand());
                }
                out
            })
            .collect()
    }
}

impl fmt::Display for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (_, w, c) in self.iter() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}){}", c, standard_bracketing(w).display(&self.alphabet))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn graded_commutator(a: &GradedPoly, b: &GradedPoly, n: usize) -> GradedPoly {
    let mut out = graded_product(a, b, n);
    let ba = graded_product(b, a, n);
    for d in 0..=n {
        axpy(&mut out[d], &-Rational::one(), &ba[d]);
    }
    out
}

/// Graded Lie bracket truncated at `n`.
pub fn bracket(a: &LieSeries, b: &LieSeries, n: usize) -> Result<LieSeries> {
    a.check_compatible(b)?;
    let n = n.min(a.truncation).min(b.truncation);
    let c = graded_commutator(&a.to_assoc(), &b.to_assoc(), n);
    LieSeries::from_assoc(&a.alphabet, n, &c)
}

/// `Σ_i c_i (ad b)^i (a)` truncated at `n`.
pub fn ad_series(b: &LieSeries, a: &LieSeries, c: &[Rational], n: usize) -> Result<LieSeries> {
    a.check_compatible(b)?;
    let n = n.min(a.truncation).min(b.truncation);
    let bb = b.to_assoc();
    let mut term = a.to_assoc();
    term.truncate(n + 1);
    let mut acc = vec![SparseVec::new(); n + 1];
    for ci in c.iter().take(n + 1) {
        for d in 0..=n {
            axpy(&mut acc[d], ci, &term[d]);
        }
        term = graded_commutator(&bb, &term, n);
        if term.iter().all(|t| t.is_empty()) {
            break;
        }
    }
    LieSeries::from_assoc(&a.alphabet, n, &acc)
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`, from
/// `Σ_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        // binom(m+1, k) built incrementally
        let mut binom = Rational::one();
        let mut sum = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            sum += &(&binom * bk);
            binom = binom * Rational::from_int((m + 1 - k) as i64) / Rational::from_int(k as i64 + 1);
        }
        b.push(-sum / Rational::from_int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("nonempty")
}

/// `B_i / i!` for `i = 0..=n`, the coefficients of `x / (e^x - 1)`.
pub fn bernoulli_over_factorial(n: usize) -> Vec<Rational> {
    let mut fact = Rational::one();
    bernoulli_table(n)
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            if i > 0 {
                fact *= &Rational::from_int(i as i64);
            }
            b / &fact
        })
        .collect()
}

/// `log(exp(a) exp(b))` truncated at `n`, by Dynkin's formula:
/// a sum over words in `{a, b}` of right-nested brackets, each weighted by
/// its segmentations into blocks `a^r b^s`.
pub fn bch(a: &LieSeries, b: &LieSeries, n: usize) -> Result<LieSeries> {
    a.check_compatible(b)?;
    let n = n.min(a.truncation).min(b.truncation);
    let pa = a.to_assoc();
    let pb = b.to_assoc();
    if !pa[0].is_empty() || !pb[0].is_empty() {
        return Err(Error::invalid("bch needs arguments without degree-0 part"));
    }
    let mut fact = vec![Rational::one()];
    for i in 1..=n {
        let f = &fact[i - 1] * &Rational::from_int(i as i64);
        fact.push(f);
    }
    let mut acc: GradedPoly = vec![SparseVec::new(); n + 1];
    // nested[m][mask]: right-nested bracket of the length-m word encoded by
    // mask (bit i set means letter i is b).
    let mut prev: Vec<GradedPoly> = Vec::new();
    for m in 1..=n {
        let mut cur: Vec<GradedPoly> = Vec::with_capacity(1 << m);
        for mask in 0..(1usize << m) {
            let first_is_b = mask & 1 == 1;
            let head = if first_is_b { &pb } else { &pa };
            let nested = if m == 1 {
                head.iter().take(n + 1).cloned().collect::<Vec<_>>()
            } else {
                graded_commutator(head, &prev[mask >> 1], n)
            };
            let coeff = dynkin_coefficient(mask, m, &fact);
            if !coeff.is_zero() {
                for d in 0..=n {
                    if let Some(t) = nested.get(d) {
                        axpy(&mut acc[d], &coeff, t);
                    }
                }
            }
            cur.push(nested);
        }
        prev = cur;
    }
    LieSeries::from_assoc(&a.alphabet, n, &acc)
}

/// `Σ_segmentations (-1)^(k-1) / (k m Π r_i! s_i!)` for the word `mask` of
/// length `m`.
fn dynkin_coefficient(mask: usize, m: usize, fact: &[Rational]) -> Rational {
    let is_b = |i: usize| (mask >> i) & 1 == 1;
    // f[p][k]: weighted count of segmentations of the first p letters into k blocks
    let mut f = vec![vec![Rational::zero(); m + 1]; m + 1];
    f[0][0] = Rational::one();
    for p in 0..m {
        for q in p + 1..=m {
            // block p..q must be a^r b^s
            let block_ok = (p + 1..q).all(|i| !(!is_b(i) && is_b(i - 1)));
            if !block_ok {
                break;
            }
            let r = (p..q).filter(|&i| !is_b(i)).count();
            let s = q - p - r;
            let w = (&fact[r] * &fact[s]).recip();
            for k in 0..m {
                if f[p][k].is_zero() {
                    continue;
                }
                let add = &f[p][k] * &w;
                f[q][k + 1] += &add;
            }
        }
    }
    let mut total = Rational::zero();
    for k in 1..=m {
        if f[m][k].is_zero() {
            continue;
        }
        let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
        total += &(sign * &f[m][k] / Rational::from_int((k * m) as i64));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::ab()
    }

    fn gen(name: &str, n: usize) -> LieSeries {
        LieSeries::generator(&ab(), name, n).unwrap()
    }

    fn br(a: Bracket, b: Bracket) -> Bracket {
        Bracket::pair(a, b)
    }

    #[test]
    fn lyndon_basis_small_degrees() {
        let b1 = lyndon_basis(&ab(), 1).unwrap();
        assert_eq!(b1.iter().map(|l| l.word.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let b2 = lyndon_basis(&ab(), 2).unwrap();
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].bracket, br(Bracket::Letter(0), Bracket::Letter(1)));
        let b3 = lyndon_basis(&ab(), 3).unwrap();
        let shown: Vec<String> = b3.iter().map(|l| l.bracket.display(&ab()).to_string()).collect();
        assert_eq!(shown, vec!["[A,[A,B]]", "[[A,B],B]"]);
        assert!(lyndon_basis(&ab(), 0).is_err());
    }

    #[test]
    fn lyndon_counts_match_witt() {
        for k in 1..=3u64 {
            let alpha = Alphabet::uniform(&["a", "b", "c"][..k as usize]).unwrap();
            for n in 1..=7u64 {
                assert_eq!(lyndon_basis(&alpha, n as usize).unwrap().len() as u64, witt_count(k, n));
            }
        }
    }

    #[test]
    fn lyndon_counts_match_commutator_span() {
        // oracle: dimension of the span of all iterated brackets of letters,
        // computed by elimination in the free associative algebra
        use crate::linalg::Echelon;
        let alpha = ab();
        let mut layers: Vec<Vec<SparseVec<Word>>> = vec![Vec::new()];
        layers.push(vec![Bracket::Letter(0).expand(), Bracket::Letter(1).expand()]);
        for d in 2..=6 {
            let mut ech = Echelon::new();
            let mut basis = Vec::new();
            for g in &layers[1] {
                for p in &layers[d - 1] {
                    let c = commutator(g, p);
                    if ech.insert(c.clone()) {
                        basis.push(c);
                    }
                }
            }
            assert_eq!(ech.rank(), lyndon_basis(&alpha, d).unwrap().len(), "degree {d}");
            layers.push(basis);
        }
    }

    #[test]
    fn bracket_examples() {
        let a = gen("A", 3);
        let b = gen("B", 3);
        assert!(bracket(&a, &a, 3).unwrap().is_zero());
        let ba = bracket(&b, &a, 2).unwrap();
        assert_eq!(ba.coeff(&[0, 1]), Rational::from_int(-1));
        let b_ba = bracket(&b, &bracket(&b, &a, 3).unwrap(), 3).unwrap();
        // brute force: expand both sides in the associative algebra
        let expected = LieSeries::from_brackets(
            &ab(),
            3,
            [(br(Bracket::Letter(1), br(Bracket::Letter(1), Bracket::Letter(0))), Rational::one())],
        )
        .unwrap();
        assert_eq!(b_ba, expected);
        // [B,[B,A]] = -[[B,A],B] = [[A,B],B]
        assert_eq!(b_ba.coeff(&[0, 1, 1]), Rational::one());
        assert_eq!(b_ba.iter().count(), 1);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::new(-1, 2));
        assert_eq!(bernoulli(2), Rational::new(1, 6));
        assert_eq!(bernoulli(3), Rational::zero());
        assert_eq!(bernoulli(12), Rational::new(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_akiyama_tanigawa() {
        // independent oracle; the algorithm yields B_1 = +1/2
        let n = 12;
        let mut a: Vec<Rational> = Vec::new();
        let mut oracle = Vec::new();
        for m in 0..=n {
            a.push(Rational::new(1, m as i64 + 1));
            for j in (1..=m).rev() {
                a[j - 1] = Rational::from_int(j as i64) * (&a[j - 1] - &a[j]);
            }
            oracle.push(a[0].clone());
        }
        oracle[1] = -oracle[1].clone();
        assert_eq!(bernoulli_table(n), oracle);
    }

    #[test]
    fn ad_series_bernoulli_expansion() {
        let a = gen("A", 4);
        let b = gen("B", 4);
        let c = bernoulli_over_factorial(4);
        let at = ad_series(&b, &a, &c, 3).unwrap();
        let one = Bracket::Letter;
        let expected = LieSeries::from_brackets(
            &ab(),
            3,
            [
                (one(0), Rational::one()),
                (br(one(1), one(0)), Rational::new(-1, 2)),
                (br(one(1), br(one(1), one(0))), Rational::new(1, 12)),
            ],
        )
        .unwrap();
        assert_eq!(at, expected);
        let at4 = ad_series(&b, &a, &c, 4).unwrap();
        assert!(at4.degree_part(4).is_empty());
        let id = ad_series(&b, &a, &[Rational::one()], 4).unwrap();
        assert_eq!(id, a);
    }

    #[test]
    fn bch_low_degree() {
        let a = gen("A", 2);
        let b = gen("B", 2);
        let z = bch(&a, &b, 2).unwrap();
        assert_eq!(z.coeff(&[0]), Rational::one());
        assert_eq!(z.coeff(&[1]), Rational::one());
        assert_eq!(z.coeff(&[0, 1]), Rational::new(1, 2));
        assert_eq!(bch(&a, &LieSeries::zero(&ab(), 2), 2).unwrap(), a);
    }

    #[test]
    fn bch_linear_part_is_bernoulli_series() {
        // the part of bch(A, B) of degree one in A equals Σ (B_n/n!) (ad B)^n (A)
        let n = 6;
        let z = bch(&gen("A", n), &gen("B", n), n).unwrap();
        let lin = ad_series(&gen("B", n), &gen("A", n), &bernoulli_over_factorial(n), n).unwrap();
        for d in 2..=n {
            let with_one_a: SparseVec<Word> = z
                .degree_part(d)
                .iter()
                .filter(|(w, _)| w.iter().filter(|&&i| i == 0).count() == 1)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect();
            assert_eq!(&with_one_a, lin.degree_part(d), "degree {d}");
        }
    }

    fn arb_series(n: usize) -> impl Strategy<Value = LieSeries> {
        let basis: Vec<Word> =
            (1..=n).flat_map(|d| lyndon_basis(&Alphabet::ab(), d).unwrap()).map(|l| l.word).collect();
        proptest::collection::vec(-3i64..=3, basis.len()).prop_map(move |cs| {
            LieSeries::from_lyndon_terms(
                &Alphabet::ab(),
                n,
                basis.iter().cloned().zip(cs.into_iter().map(Rational::from_int)),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn bracket_antisymmetric_and_jacobi(a in arb_series(3), b in arb_series(3), c in arb_series(3)) {
            let n = 6;
            let lift = |s: &LieSeries| {
                let mut t = LieSeries::zero(&Alphabet::ab(), n);
                t = t.add(&LieSeries::from_lyndon_terms(&Alphabet::ab(), n, s.iter().map(|(_, w, c)| (w.clone(), c.clone()))).unwrap()).unwrap();
                t
            };
            let (a, b, c) = (lift(&a), lift(&b), lift(&c));
            let ab_ = bracket(&a, &b, n).unwrap();
            let ba = bracket(&b, &a, n).unwrap();
            prop_assert!(ab_.add(&ba).unwrap().is_zero());
            let j1 = bracket(&a, &bracket(&b, &c, n).unwrap(), n).unwrap();
            let j2 = bracket(&b, &bracket(&c, &a, n).unwrap(), n).unwrap();
            let j3 = bracket(&c, &bracket(&a, &b, n).unwrap(), n).unwrap();
            prop_assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
        }

        #[test]
        fn bch_exp_log_round_trip(a in arb_series(3), b in arb_series(3)) {
            let n = 6;
            let free = crate::algebra::TruncatedAlgebra::free(&Alphabet::ab(), n);
            let lift = |s: &LieSeries| LieSeries::from_lyndon_terms(&Alphabet::ab(), n, s.iter().map(|(_, w, c)| (w.clone(), c.clone()))).unwrap();
            let (a, b) = (lift(&a), lift(&b));
            let (ea, eb) = (free.from_lie(&a).unwrap(), free.from_lie(&b).unwrap());
            let z = bch(&a, &b, n).unwrap();
            let prod = free.mul(&free.exp(&ea).unwrap(), &free.exp(&eb).unwrap());
            prop_assert_eq!(free.exp(&free.from_lie(&z).unwrap()).unwrap(), prod.clone());
            prop_assert_eq!(free.to_lie(&free.log(&prod).unwrap()).unwrap(), z);
            prop_assert_eq!(free.log(&free.exp(&ea).unwrap()).unwrap(), ea);
        }
    }
}
