//! Degree-truncated quotients of free associative algebras.
//!
//! A [`TruncatedAlgebra`] stores, per degree, the reduced row echelon form of
//! the degree slice of the two-sided ideal generated by its relations. The
//! pivot of a row is its lexicographically smallest word, so the normal
//! words (the basis of the quotient) are the words that are never pivots.
//! Elements are kept in these coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{commutator, word_product, Alphabet, GradedPoly, Letter, LieSeries, Word};
use crate::linalg::{add_term, axpy, scale, Echelon, SparseVec};
use crate::rational::Rational;

/// The intersection form on `{x, y}`, fixed by the value of `<x, y>`;
/// `<y, x> = -<x, y>` and `<x, x> = <y, y> = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionForm {
    pub xy: i64,
}

impl IntersectionForm {
    /// `<y, x> = 1`, the pairing of the STU-like diagram relation.
    pub const STANDARD: IntersectionForm = IntersectionForm { xy: -1 };
    /// `<x, y> = 1`; with it `x_1 + ... + x_n` and `y_1 + ... + y_n` are
    /// central in `t_{1,n}`.
    pub const CENTRAL: IntersectionForm = IntersectionForm { xy: 1 };

    /// `<v, w>` for labels `'x'` / `'y'`.
    pub fn pair(&self, v: char, w: char) -> i64 {
        match (v, w) {
            ('x', 'y') => self.xy,
            ('y', 'x') => -self.xy,
            _ => 0,
        }
    }
}

/// Generators, aliases and homogeneous relations (as associative
/// polynomials; Lie relations enter through their commutator expansion).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Alphabet,
    pub aliases: Vec<(String, u8)>,
    pub relations: Vec<SparseVec<Word>>,
}

#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    name: String,
    presentation: Presentation,
    truncation: usize,
    ideal: Vec<Echelon<Word>>,
    basis: Vec<Vec<Word>>,
}

/// Element of a truncated algebra: entry `d` maps normal words of degree `d`
/// to coefficients. The algebra is not stored; operations go through it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: Vec<SparseVec<Word>>,
}

impl AlgebraElement {
    pub fn zero(truncation: usize) -> Self {
        AlgebraElement { terms: vec![SparseVec::new(); truncation + 1] }
    }

    pub fn truncation(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn degree_part(&self, d: usize) -> &SparseVec<Word> {
        &self.terms[d]
    }

    pub fn parts(&self) -> &[SparseVec<Word>] {
        &self.terms
    }

    pub fn constant(&self) -> Rational {
        self.terms[0].get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    /// Number of nonzero coordinates in each degree.
    pub fn nonzero_counts(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.len()).collect()
    }

    /// Lowest degree with a nonzero part.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.iter().position(|t| !t.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Word, &Rational)> {
        self.terms.iter().enumerate().flat_map(|(d, t)| t.iter().map(move |(w, c)| (d, w, c)))
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut e = AlgebraElement::zero(n);
        for d in 0..=n.min(self.truncation()) {
            e.terms[d] = self.terms[d].clone();
        }
        e
    }

    fn combine(&self, other: &Self, c: &Rational) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut e = self.truncate(n);
        for d in 0..=n {
            axpy(&mut e.terms[d], c, &other.terms[d]);
        }
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraElement { terms: self.terms.iter().map(|t| scale(t, c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
}

impl TruncatedAlgebra {
    /// Builds the quotient by computing each ideal slice as
    /// `I_d = Σ_g g·I_{d-|g|} + Σ_r r·W_{d-|r|}`.
    pub fn new(name: impl Into<String>, presentation: Presentation, truncation: usize) -> Result<Self> {
        let alphabet = &presentation.generators;
        let mut rel_degrees = Vec::new();
        for r in &presentation.relations {
            let mut degs = r.keys().map(|w| alphabet.word_degree(w));
            let d = degs.next().ok_or_else(|| Error::invalid("empty relation"))?;
            if degs.any(|e| e != d) {
                return Err(Error::invalid("relation is not homogeneous"));
            }
            if d == 0 {
                return Err(Error::invalid("relation of degree 0"));
            }
            rel_degrees.push(d);
        }
        let mut ideal: Vec<Echelon<Word>> = vec![Echelon::new()];
        let mut basis: Vec<Vec<Word>> = vec![vec![Vec::new()]];
        for d in 1..=truncation {
            let mut ech = Echelon::new();
            for g in 0..alphabet.len() {
                let gd = alphabet.degree(g as u8);
                if gd > d {
                    continue;
                }
                for (_, row) in ideal[d - gd].rows() {
                    let shifted: SparseVec<Word> = row
                        .iter()
                        .map(|(w, c)| {
                            let mut v = vec![g as u8];
                            v.extend_from_slice(w);
                            (v, c.clone())
                        })
                        .collect();
                    ech.insert(shifted);
                }
            }
            for (r, &rd) in presentation.relations.iter().zip(&rel_degrees) {
                if rd > d {
                    continue;
                }
                for w in alphabet.words_of_degree(d - rd) {
                    let tail = SparseVec::from([(w, Rational::one())]);
                    ech.insert(word_product(r, &tail));
                }
            }
            ech.fully_reduce();
            let normal: Vec<Word> = alphabet.words_of_degree(d).into_iter().filter(|w| !ech.is_pivot(w)).collect();
            ideal.push(ech);
            basis.push(normal);
        }
        Ok(TruncatedAlgebra { name: name.into(), presentation, truncation, ideal, basis })
    }

    /// Free associative algebra on the alphabet.
    pub fn free(alphabet: &Alphabet, truncation: usize) -> Self {
        let names: Vec<&str> = alphabet.letters().iter().map(|l| l.name.as_str()).collect();
        let name = format!("free({})", names.join(","));
        let pres = Presentation { generators: alphabet.clone(), aliases: Vec::new(), relations: Vec::new() };
        TruncatedAlgebra::new(name, pres, truncation).expect("free algebra has no relations")
    }

    /// `U t_{1,n}` with `<y, x> = 1`, so `[x_i, y_j] = -t_ij` for `i != j`.
    pub fn t1n(n: usize, truncation: usize) -> Result<Self> {
        TruncatedAlgebra::t1n_with_form(n, truncation, IntersectionForm::STANDARD)
    }

    /// `U t_{1,n}`: generators `x_i, y_i` (degree 1) and `t_ij`, `i < j`
    /// (degree 2), in that order, with `t_ji` an alias of `t_ij`.
    /// Relations `[v_i, w_j] = <v,w> t_ij`, `[v_i, t_jk] = 0` for distinct
    /// indices and `[x_i, y_i] = -Σ_{j≠i} t_ij`.
    pub fn t1n_with_form(n: usize, truncation: usize, form: IntersectionForm) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("t1n needs n >= 1"));
        }
        let mut letters = Vec::new();
        for v in ["x", "y"] {
            for i in 1..=n {
                letters.push(Letter { name: format!("{v}{i}"), degree: 1 });
            }
        }
        let mut aliases = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                aliases.push((format!("t{j}{i}"), letters.len() as u8));
                letters.push(Letter { name: format!("t{i}{j}"), degree: 2 });
            }
        }
        let alphabet = Alphabet::new(letters)?;
        let v_idx = |v: char, i: usize| -> u8 {
            if v == 'x' {
                (i - 1) as u8
            } else {
                (n + i - 1) as u8
            }
        };
        let t_idx = |i: usize, j: usize| -> u8 {
            let name = format!("t{}{}", i.min(j), i.max(j));
            alphabet.index(&name).expect("t generator")
        };
        let single = |g: u8| SparseVec::from([(vec![g], Rational::one())]);
        let mut relations = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                for v in ['x', 'y'] {
                    for w in ['x', 'y'] {
                        let mut r = commutator(&single(v_idx(v, i)), &single(v_idx(w, j)));
                        add_term(&mut r, vec![t_idx(i, j)], Rational::from_int(-form.pair(v, w)));
                        if !r.is_empty() {
                            relations.push(r);
                        }
                    }
                }
                for k in j + 1..=n {
                    if k == i {
                        continue;
                    }
                    for v in ['x', 'y'] {
                        relations.push(commutator(&single(v_idx(v, i)), &single(t_idx(j, k))));
                    }
                }
            }
            let mut r = commutator(&single(v_idx('x', i)), &single(v_idx('y', i)));
            for j in 1..=n {
                if j != i {
                    add_term(&mut r, vec![t_idx(i, j)], Rational::one());
                }
            }
            if !r.is_empty() {
                relations.push(r);
            }
        }
        let pres = Presentation { generators: alphabet, aliases, relations };
        TruncatedAlgebra::new(format!("t1n({n})"), pres, truncation)
    }

    /// Drinfeld-Kohno algebra `U t_n`: generators `t_ij`, `i < j`, degree 1,
    /// `[t_ij, t_kl] = 0` for disjoint pairs and `[t_ij, t_ik + t_jk] = 0`.
    pub fn dk(n: usize, truncation: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("Drinfeld-Kohno algebra needs n >= 2"));
        }
        let mut letters = Vec::new();
        let mut aliases = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                aliases.push((format!("t{j}{i}"), letters.len() as u8));
                letters.push(Letter { name: format!("t{i}{j}"), degree: 1 });
            }
        }
        let alphabet = Alphabet::new(letters)?;
        let t = |i: usize, j: usize| -> SparseVec<Word> {
            let g = alphabet.index(&format!("t{}{}", i.min(j), i.max(j))).expect("t generator");
            SparseVec::from([(vec![g], Rational::one())])
        };
        let mut relations = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in 1..=n {
                    for l in k + 1..=n {
                        if [k, l].iter().all(|m| *m != i && *m != j) && (i, j) < (k, l) {
                            relations.push(commutator(&t(i, j), &t(k, l)));
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let mut sum = t(i, k);
                    axpy(&mut sum, &Rational::one(), &t(j, k));
                    let r = commutator(&t(i, j), &sum);
                    if !r.is_empty() {
                        relations.push(r);
                    }
                }
            }
        }
        let pres = Presentation { generators: alphabet, aliases, relations };
        TruncatedAlgebra::new(format!("dk({n})"), pres, truncation)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.presentation.generators
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self, d: usize) -> usize {
        self.basis[d].len()
    }

    /// Normal words of degree `d`, in lexicographic order.
    pub fn basis(&self, d: usize) -> &[Word] {
        &self.basis[d]
    }

    /// Generator index by name or alias.
    pub fn generator_index(&self, name: &str) -> Option<u8> {
        self.alphabet()
            .index(name)
            .or_else(|| self.presentation.aliases.iter().find(|(a, _)| a == name).map(|(_, i)| *i))
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.truncation)
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(Rational::one())
    }

    pub fn scalar(&self, c: Rational) -> AlgebraElement {
        let mut e = self.zero();
        add_term(&mut e.terms[0], Vec::new(), c);
        e
    }

    pub fn generator(&self, name: &str) -> Result<AlgebraElement> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| Error::invalid(format!("unknown generator {name} in {}", self.name)))?;
        Ok(self.word(&[i]))
    }

    /// The reduced image of a raw word.
    pub fn word(&self, w: &[u8]) -> AlgebraElement {
        self.from_terms([(w.to_vec(), Rational::one())])
    }

    /// Reduces a linear combination of raw words; words above the truncation
    /// are dropped.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Word, Rational)>) -> AlgebraElement {
        let mut raw: Vec<SparseVec<Word>> = vec![SparseVec::new(); self.truncation + 1];
        for (w, c) in terms {
            let d = self.alphabet().word_degree(&w);
            if d <= self.truncation {
                add_term(&mut raw[d], w, c);
            }
        }
        self.reduce_graded(raw)
    }

    pub fn reduce_graded(&self, raw: GradedPoly) -> AlgebraElement {
        let mut e = self.zero();
        for (d, p) in raw.into_iter().enumerate().take(self.truncation + 1) {
            e.terms[d] = self.reduce(d, p);
        }
        e
    }

    /// Normal form of a homogeneous degree-`d` polynomial.
    pub fn reduce(&self, d: usize, p: SparseVec<Word>) -> SparseVec<Word> {
        if self.ideal[d].rank() == 0 {
            return p;
        }
        self.ideal[d].reduce(p)
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let n = self.truncation.min(a.truncation()).min(b.truncation());
        let mut raw: GradedPoly = vec![SparseVec::new(); n + 1];
        for (i, p) in a.terms.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            for (j, q) in b.terms.iter().enumerate() {
                if i + j > n || q.is_empty() {
                    continue;
                }
                let prod = word_product(p, q);
                axpy(&mut raw[i + j], &Rational::one(), &prod);
            }
        }
        let mut e = AlgebraElement::zero(n);
        for (d, p) in raw.into_iter().enumerate() {
            e.terms[d] = self.reduce(d, p);
        }
        e
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a AlgebraElement>) -> AlgebraElement {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn commutator(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn exp(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if !a.terms[0].is_empty() {
            return Err(Error::invalid("exp needs an argument without constant term"));
        }
        let n = a.truncation().min(self.truncation);
        let mut acc = self.one().truncate(n);
        let mut term = acc.clone();
        for k in 1..=n {
            term = self.mul(&term, a).scale(&Rational::new(1, k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    fn unipotent_part(&self, g: &AlgebraElement, what: &str) -> Result<AlgebraElement> {
        if !g.constant().is_one() {
            return Err(Error::invalid(format!("{what} needs constant term 1")));
        }
        Ok(g.sub(&self.one()))
    }

    pub fn log(&self, g: &AlgebraElement) -> Result<AlgebraElement> {
        let x = self.unipotent_part(g, "log")?;
        let n = g.truncation().min(self.truncation);
        let mut acc = AlgebraElement::zero(n);
        let mut pow = self.one().truncate(n);
        for k in 1..=n {
            pow = self.mul(&pow, &x);
            if pow.is_zero() {
                break;
            }
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            acc = acc.add(&pow.scale(&c));
        }
        Ok(acc)
    }

    pub fn inverse(&self, g: &AlgebraElement) -> Result<AlgebraElement> {
        let x = self.unipotent_part(g, "inverse")?.neg();
        let n = g.truncation().min(self.truncation);
        let mut acc = self.one().truncate(n);
        let mut pow = acc.clone();
        for _ in 1..=n {
            pow = self.mul(&pow, &x);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc)
    }

    /// Image of `source` (an element of a free algebra whose letter `i` is
    /// sent to `images[i]`) under the induced algebra morphism into `self`.
    pub fn substitute(&self, source: &AlgebraElement, images: &[AlgebraElement]) -> Result<AlgebraElement> {
        if images.iter().any(|im| !im.terms[0].is_empty()) {
            return Err(Error::invalid("substitution images need positive valuation"));
        }
        let n = self.truncation.min(source.truncation());
        let vals: Vec<usize> = images.iter().map(|im| im.valuation().unwrap_or(usize::MAX)).collect();
        let mut memo: BTreeMap<Word, AlgebraElement> = BTreeMap::new();
        memo.insert(Vec::new(), self.one().truncate(n));
        let mut acc = AlgebraElement::zero(n);
        for (_, w, c) in source.iter() {
            if w.iter().any(|&i| i as usize >= images.len()) {
                return Err(Error::invalid("substitution is missing an image"));
            }
            let val: usize = w.iter().fold(0usize, |s, &i| s.saturating_add(vals[i as usize]));
            if val > n {
                continue;
            }
            let img = self.word_image(w, images, &mut memo, n);
            acc = acc.add(&img.scale(c));
        }
        Ok(acc)
    }

    fn word_image(
        &self,
        w: &[u8],
        images: &[AlgebraElement],
        memo: &mut BTreeMap<Word, AlgebraElement>,
        n: usize,
    ) -> AlgebraElement {
        if let Some(e) = memo.get(w) {
            return e.clone();
        }
        let (last, prefix) = w.split_last().expect("empty word is memoized");
        let p = self.word_image(prefix, images, memo, n);
        let e = self.mul(&p, &images[*last as usize].truncate(n));
        memo.insert(w.to_vec(), e.clone());
        e
    }

    /// Embeds a Lie series over this algebra's alphabet (free algebras).
    pub fn from_lie(&self, s: &LieSeries) -> Result<AlgebraElement> {
        if s.alphabet() != self.alphabet() {
            return Err(Error::invalid("alphabet mismatch"));
        }
        let mut poly = s.to_assoc();
        poly.resize(self.truncation + 1, SparseVec::new());
        poly.truncate(self.truncation + 1);
        Ok(self.reduce_graded(poly))
    }

    /// Lie coordinates of an element of a free algebra; fails if it is not
    /// primitive.
    pub fn to_lie(&self, e: &AlgebraElement) -> Result<LieSeries> {
        if !self.presentation.relations.is_empty() {
            return Err(Error::invalid("Lie coordinates need a free algebra"));
        }
        LieSeries::from_assoc(self.alphabet(), e.truncation(), &e.terms)
    }

    /// The span, per degree, of all products of the given generators.
    pub fn subalgebra(&self, generators: &[u8]) -> Subalgebra {
        let mut slices: Vec<Echelon<Word>> = vec![Echelon::new(); self.truncation + 1];
        slices[0].insert(SparseVec::from([(Vec::new(), Rational::one())]));
        let gens: Vec<(u8, usize)> = generators.iter().map(|&g| (g, self.alphabet().degree(g))).collect();
        // spanning sets per degree, extended by right multiplication
        let mut spans: Vec<Vec<SparseVec<Word>>> = vec![Vec::new(); self.truncation + 1];
        spans[0].push(SparseVec::from([(Vec::new(), Rational::one())]));
        for d in 1..=self.truncation {
            let mut ech = Echelon::new();
            let mut span = Vec::new();
            for &(g, gd) in &gens {
                if gd > d {
                    continue;
                }
                let gpoly = SparseVec::from([(vec![g], Rational::one())]);
                for p in &spans[d - gd] {
                    let v = self.reduce(d, word_product(p, &gpoly));
                    if ech.insert(v.clone()) {
                        span.push(v);
                    }
                }
            }
            spans[d] = span;
            slices[d] = ech;
        }
        Subalgebra { spans, slices }
    }

    /// Readable form such as `2 x1 y1 - 1/2 t12`.
    pub fn display(&self, e: &AlgebraElement) -> String {
        let mut out = String::new();
        for (_, w, c) in e.iter() {
            let word: Vec<&str> = w.iter().map(|&i| self.alphabet().name(i)).collect();
            let body = if word.is_empty() { "1".to_string() } else { word.join(" ") };
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if mag.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{mag} {body}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Per-degree span of a subalgebra, in the normal-word coordinates of its
/// ambient algebra.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    spans: Vec<Vec<SparseVec<Word>>>,
    slices: Vec<Echelon<Word>>,
}

impl Subalgebra {
    pub fn dim(&self, d: usize) -> usize {
        self.slices[d].rank()
    }

    /// A basis of the degree-`d` slice made of reduced products.
    pub fn spanning_set(&self, d: usize) -> &[SparseVec<Word>] {
        &self.spans[d]
    }

    pub fn contains(&self, e: &AlgebraElement) -> bool {
        e.parts().iter().enumerate().all(|(d, p)| d < self.slices.len() && self.slices[d].contains(p.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(alg: &TruncatedAlgebra, name: &str) -> AlgebraElement {
        alg.generator(name).unwrap()
    }

    #[test]
    fn t1n_dimensions() {
        let a = TruncatedAlgebra::t1n(2, 2).unwrap();
        assert_eq!(a.dim(1), 4);
        assert_eq!(a.dim(2), 11);
        let b = TruncatedAlgebra::t1n(3, 2).unwrap();
        let r = b.commutator(&t(&b, "x1"), &t(&b, "y1")).add(&t(&b, "t12")).add(&t(&b, "t13"));
        assert!(r.is_zero());
        assert_eq!(t(&b, "t31"), t(&b, "t13"));
    }

    #[test]
    fn t1n_relations_vanish_in_every_position() {
        for form in [IntersectionForm::STANDARD, IntersectionForm::CENTRAL] {
            let a = TruncatedAlgebra::t1n_with_form(3, 4, form).unwrap();
            let alpha = a.alphabet().clone();
            for r in &a.presentation().relations {
                let rd = alpha.word_degree(r.keys().next().unwrap());
                for ld in 0..=(4 - rd) {
                    for u in alpha.words_of_degree(ld) {
                        for v in alpha.words_of_degree(4 - rd - ld).into_iter().take(5) {
                            let mut p = word_product(&SparseVec::from([(u.clone(), Rational::one())]), r);
                            p = word_product(&p, &SparseVec::from([(v, Rational::one())]));
                            assert!(a.reduce(4, p).is_empty());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn t1_2_dims_match_pbw() {
        // oracle: Lie slices of t_{1,2} by brute force (bracket closure of
        // generators in the associative quotient), then the PBW count
        let a = TruncatedAlgebra::t1n(2, 4).unwrap();
        let alpha = a.alphabet().clone();
        let gens: Vec<AlgebraElement> = (0..alpha.len() as u8).map(|i| a.word(&[i])).collect();
        let mut lie: Vec<Vec<AlgebraElement>> = vec![Vec::new(); 5];
        for (i, g) in gens.iter().enumerate() {
            lie[alpha.degree(i as u8)].push(g.clone());
        }
        for d in 2..=4 {
            let mut ech = Echelon::new();
            let mut keep = Vec::new();
            for e in lie[d].clone() {
                if ech.insert(e.degree_part(d).clone()) {
                    keep.push(e);
                }
            }
            for (i, g) in gens.iter().enumerate() {
                let gd = alpha.degree(i as u8);
                if gd >= d {
                    continue;
                }
                for e in lie[d - gd].clone() {
                    let c = a.commutator(g, &e);
                    if ech.insert(c.degree_part(d).clone()) {
                        keep.push(c);
                    }
                }
            }
            lie[d] = keep;
        }
        let lie_dims: Vec<usize> = (0..=4).map(|d| lie[d].len()).collect();
        // PBW: Π_d (1 - q^d)^(-dim L_d) truncated at 4
        let mut series = vec![0u64; 5];
        series[0] = 1;
        for d in 1..=4 {
            for _ in 0..lie_dims[d] {
                for k in d..=4 {
                    series[k] += series[k - d];
                }
            }
        }
        for d in 0..=4 {
            assert_eq!(a.dim(d) as u64, series[d], "degree {d}");
        }
    }

    #[test]
    fn dk_examples() {
        let a = TruncatedAlgebra::dk(3, 2).unwrap();
        assert_eq!(a.dim(1), 3);
        let sum = t(&a, "t12").add(&t(&a, "t13")).add(&t(&a, "t23"));
        assert!(a.commutator(&t(&a, "t12"), &sum).is_zero());
        let b = TruncatedAlgebra::dk(2, 5).unwrap();
        for d in 0..=5 {
            assert_eq!(b.dim(d), 1);
        }
        assert!(TruncatedAlgebra::dk(1, 2).is_err());
        assert!(TruncatedAlgebra::t1n(0, 2).is_err());
    }

    #[test]
    fn free_dims() {
        let f = TruncatedAlgebra::free(&Alphabet::ab(), 3);
        assert_eq!(f.dim(3), 8);
        assert_eq!(f.dim(1), 2);
    }

    #[test]
    fn exp_log_inverse() {
        let a = TruncatedAlgebra::dk(2, 6).unwrap();
        assert_eq!(a.exp(&a.zero()).unwrap(), a.one());
        let t12 = t(&a, "t12");
        let g = a.exp(&t12).unwrap();
        assert_eq!(a.inverse(&g).unwrap(), a.exp(&t12.neg()).unwrap());
        assert!(a.log(&t12).is_err());
        assert!(a.inverse(&a.scalar(Rational::from_int(2))).is_err());

        let f = TruncatedAlgebra::free(&Alphabet::uniform(&["x1", "y1"]).unwrap(), 2);
        let x = t(&f, "x1");
        let y = t(&f, "y1");
        let l = f.log(&f.mul(&f.exp(&x).unwrap(), &f.exp(&y).unwrap())).unwrap();
        let half = Rational::new(1, 2);
        let expected = x.add(&y).add(&f.commutator(&x, &y).scale(&half));
        assert_eq!(l, expected);
    }

    #[test]
    fn substitution_examples() {
        let free = TruncatedAlgebra::free(&Alphabet::ab(), 4);
        let u = TruncatedAlgebra::t1n(2, 4).unwrap();
        let (x1, y1) = (t(&u, "x1"), t(&u, "y1"));
        let ab = free.word(&[0, 1]);
        assert_eq!(u.substitute(&ab, &[x1.clone(), y1.clone()]).unwrap(), u.mul(&x1, &y1));
        let ba = free.commutator(&t(&free, "B"), &t(&free, "A"));
        assert_eq!(u.substitute(&ba, &[x1.clone(), y1.clone()]).unwrap(), t(&u, "t12"));
        assert!(u.substitute(&ba, &[x1.clone(), y1.clone(), x1.clone()]).is_ok());
        assert!(u.substitute(&ba, &[u.one(), y1]).is_err());
        let v = TruncatedAlgebra::t1n(3, 4).unwrap();
        let s = t(&v, "x1").add(&t(&v, "x2"));
        let e = free.exp(&t(&free, "A")).unwrap();
        assert_eq!(v.substitute(&e, &[s.clone(), s.clone()]).unwrap(), v.exp(&s).unwrap());
    }

    #[test]
    fn restricted_subalgebra_of_t12_is_free() {
        let u = TruncatedAlgebra::t1n(2, 4).unwrap();
        let ru = u.subalgebra(&[0, 2]);
        for d in 0..=4 {
            assert_eq!(ru.dim(d), 1 << d);
        }
        assert!(ru.contains(&t(&u, "t12")));
        assert!(!ru.contains(&t(&u, "x2")));
    }

    fn arb_elem(alg: TruncatedAlgebra) -> impl Strategy<Value = AlgebraElement> {
        let words: Vec<Word> = (0..=3).flat_map(|d| alg.basis(d).to_vec()).collect();
        proptest::collection::vec(-2i64..=2, words.len())
            .prop_map(move |cs| alg.from_terms(words.iter().cloned().zip(cs.into_iter().map(Rational::from_int))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn multiply_associative_and_substitution_multiplicative(
            a in arb_elem(TruncatedAlgebra::free(&Alphabet::ab(), 6)),
            b in arb_elem(TruncatedAlgebra::free(&Alphabet::ab(), 6)),
            c in arb_elem(TruncatedAlgebra::free(&Alphabet::ab(), 6)),
        ) {
            let f = TruncatedAlgebra::free(&Alphabet::ab(), 6);
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            let u = TruncatedAlgebra::t1n(2, 4).unwrap();
            let ims = [u.generator("x1").unwrap().add(&u.generator("t12").unwrap()), u.generator("y2").unwrap()];
            let a0 = a.sub(&AlgebraElement::zero(6).add(&f.scalar(a.constant())));
            let b0 = b.sub(&f.scalar(b.constant()));
            let lhs = u.substitute(&f.mul(&a0, &b0), &ims).unwrap();
            let rhs = u.mul(&u.substitute(&a0, &ims).unwrap(), &u.substitute(&b0, &ims).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
