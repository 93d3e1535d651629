//! The universal enveloping algebra `U(R, L)` of a presented Lie-Rinehart
//! algebra.
//!
//! Elements are kept in PBW normal form `sum_w f_w * w`: ring coefficients on
//! the left of nondecreasing generator words. Straightening uses the two
//! rewriting rules
//!
//! ```text
//! D_i * f   ->  f * D_i + D_i(f)
//! D_j * D_i ->  D_i * D_j + sum_k gamma_ji^k * D_k      (j > i)
//! ```
//!
//! together with reduction of coefficients modulo the modulus of `R`. Each
//! step either shortens a word or removes an inversion, so rewriting
//! terminates. For free presentations the sorted words form an `R`-basis and
//! normal forms decide equality; otherwise they are representatives of a
//! spanning set and [`UAlgebra::operator_equal`] is the semantic test.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::derivation::{restrict_to_quotient, LRPresentation};
use crate::display::format_combination;
use crate::polyring::{factorial, Poly, Rational, RingCtx};
use crate::Error;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;
pub const DEFAULT_TRUNCATION: u32 = 12;

/// A product `D_{i_1} ... D_{i_k}` of generators, compared by length and then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn sorted(&self) -> Word {
        let mut v = self.0.clone();
        v.sort_unstable();
        Word(v)
    }

    /// The letters at the positions whose bit is set in `mask`, in order.
    pub fn select(&self, mask: u64) -> Word {
        Word(self.0.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l).collect())
    }

    fn first_descent(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] > w[1])
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let name = names.get(self.0[i]).map(String::as_str).unwrap_or("?");
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_into(map: &mut BTreeMap<Word, Poly>, w: Word, c: Poly) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// An element of `U(R, L)` in PBW normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UElement {
    terms: BTreeMap<Word, Poly>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    /// `f * w` for a word already known to be sorted and `f` reduced.
    pub(crate) fn from_sorted(w: Word, f: Poly) -> Self {
        debug_assert!(w.is_sorted());
        let mut terms = BTreeMap::new();
        add_into(&mut terms, w, f);
        UElement { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Poly> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal word length; 0 for ring elements and for zero.
    pub fn filtration_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_into(&mut terms, w.clone(), c.clone());
        }
        UElement { terms }
    }

    pub fn sub(&self, other: &UElement) -> UElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> UElement {
        if s.is_zero() {
            return UElement::zero();
        }
        UElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.scale(s))).collect() }
    }
}

/// A section of the symmetric algebra `S_R L`: sorted words stand for
/// multisets of generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct STensor {
    terms: BTreeMap<Word, Poly>,
}

impl STensor {
    pub fn zero() -> Self {
        STensor::default()
    }

    /// Sums `f * {i_1, ..., i_k}`; coefficients are reduced in `ring`.
    pub fn from_terms(ring: &RingCtx, terms: impl IntoIterator<Item = (Poly, Vec<usize>)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (c, mut letters) in terms {
            letters.sort_unstable();
            add_into(&mut map, Word(letters), ring.reduce(&c)?);
        }
        Ok(STensor { terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &STensor) -> STensor {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_into(&mut terms, w.clone(), c.clone());
        }
        STensor { terms }
    }

    pub fn scale(&self, s: &Rational) -> STensor {
        if s.is_zero() {
            return STensor::zero();
        }
        STensor { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.scale(s))).collect() }
    }

    /// Product in the symmetric algebra.
    pub fn mul(&self, other: &STensor, ring: &RingCtx) -> Result<STensor, Error> {
        let mut terms = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                add_into(&mut terms, w1.concat(w2).sorted(), ring.mul(c1, c2)?);
            }
        }
        Ok(STensor { terms })
    }

    pub fn display(&self, ring: &RingCtx, names: &[String]) -> String {
        format_combination(ring, self.terms.iter().rev().map(|(w, c)| (w.render(names), c)))
    }
}

/// `U(R, L)` for a presentation that passed [`LRPresentation::check_lr_axioms`].
#[derive(Clone, Debug)]
pub struct UAlgebra {
    pres: LRPresentation,
    free: bool,
    step_limit: usize,
}

impl PartialEq for UAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.pres == other.pres
    }
}

impl UAlgebra {
    pub fn new(pres: LRPresentation) -> Result<Self, Error> {
        let report = pres.check_lr_axioms();
        if let Some(bad) = report.failures().next() {
            return Err(Error::UnverifiedPresentation(format!(
                "{}: {}",
                bad.name,
                bad.witness.clone().unwrap_or_default()
            )));
        }
        let free = pres.is_free();
        Ok(UAlgebra { pres, free, step_limit: DEFAULT_STEP_LIMIT })
    }

    pub fn with_step_limit(mut self, limit: usize) -> Self {
        self.step_limit = limit;
        self
    }

    pub fn presentation(&self) -> &LRPresentation {
        &self.pres
    }

    pub fn ring(&self) -> &RingCtx {
        self.pres.ring()
    }

    pub fn names(&self) -> &[String] {
        self.pres.names()
    }

    pub fn ngens(&self) -> usize {
        self.pres.len()
    }

    /// Whether sorted words form an `R`-basis, making normal forms canonical.
    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn one(&self) -> UElement {
        self.from_poly(&self.ring().one()).expect("one is in the ring")
    }

    pub fn from_poly(&self, p: &Poly) -> Result<UElement, Error> {
        let mut terms = BTreeMap::new();
        add_into(&mut terms, Word::empty(), self.ring().reduce(p)?);
        Ok(UElement { terms })
    }

    pub fn generator(&self, i: usize) -> Result<UElement, Error> {
        if i >= self.ngens() {
            return Err(Error::IndexOutOfRange { index: i, len: self.ngens() });
        }
        Ok(UElement { terms: BTreeMap::from([(Word::letter(i), self.ring().one())]) })
    }

    /// `f * w` for a nondecreasing word, or the normal form otherwise.
    pub fn monomial(&self, f: &Poly, w: Word) -> Result<UElement, Error> {
        self.normal_form(&[(f.clone(), w)])
    }

    fn check_word(&self, w: &Word) -> Result<(), Error> {
        match w.0.iter().find(|&&l| l >= self.ngens()) {
            Some(&l) => Err(Error::IndexOutOfRange { index: l, len: self.ngens() }),
            None => Ok(()),
        }
    }

    /// `w * g` rewritten as `sum h * w'` with `w'` ranging over subwords of
    /// `w`, by pushing `g` leftwards with `D * h = h * D + D(h)`.
    pub(crate) fn word_times_poly(&self, w: &[usize], g: &Poly) -> Result<BTreeMap<Word, Poly>, Error> {
        let ring = self.ring();
        let mut terms: BTreeMap<Word, Poly> = BTreeMap::new();
        add_into(&mut terms, Word::empty(), g.clone());
        for &letter in w.iter().rev() {
            let mut next = BTreeMap::new();
            for (tail, h) in terms {
                let dh = self.pres.generators()[letter].apply(ring, &h)?;
                add_into(&mut next, Word::letter(letter).concat(&tail), h);
                add_into(&mut next, tail, dh);
            }
            terms = next;
        }
        Ok(terms)
    }

    /// Straightens `sum f_i * w_i` (coefficients on the left, arbitrary words).
    pub fn normal_form(&self, raw: &[(Poly, Word)]) -> Result<UElement, Error> {
        let ring = self.ring();
        let mut pending: BTreeMap<Word, Poly> = BTreeMap::new();
        for (c, w) in raw {
            self.check_word(w)?;
            add_into(&mut pending, w.clone(), ring.reduce(c)?);
        }
        self.straighten(pending)
    }

    fn straighten(&self, mut pending: BTreeMap<Word, Poly>) -> Result<UElement, Error> {
        let ring = self.ring();
        let mut done = BTreeMap::new();
        let mut steps = 0usize;
        // Rewrites only produce words that are smaller in length-then-lex
        // order, so popping the largest word finalizes sorted words.
        while let Some((w, c)) = pending.pop_last() {
            let Some(p) = w.first_descent() else {
                done.insert(w, c);
                continue;
            };
            steps += 1;
            if steps > self.step_limit {
                return Err(Error::StepLimit(self.step_limit));
            }
            let (j, i) = (w.0[p], w.0[p + 1]);
            let mut swapped = w.0.clone();
            swapped.swap(p, p + 1);
            add_into(&mut pending, Word(swapped), c.clone());
            let prefix = &w.0[..p];
            let suffix = Word(w.0[p + 2..].to_vec());
            for (k, gamma) in self.pres.gamma(j, i).iter().enumerate() {
                if gamma.is_zero() {
                    continue;
                }
                for (sub, h) in self.word_times_poly(prefix, gamma)? {
                    let word = sub.concat(&Word::letter(k)).concat(&suffix);
                    add_into(&mut pending, word, ring.mul(&c, &h)?);
                }
            }
        }
        Ok(UElement { terms: done })
    }

    pub fn multiply(&self, u: &UElement, v: &UElement) -> Result<UElement, Error> {
        let ring = self.ring();
        let mut pending = BTreeMap::new();
        for (w1, f) in &u.terms {
            for (w2, g) in &v.terms {
                if w1.is_empty() {
                    add_into(&mut pending, w2.clone(), ring.mul(f, g)?);
                    continue;
                }
                for (sub, h) in self.word_times_poly(&w1.0, g)? {
                    add_into(&mut pending, sub.concat(w2), ring.mul(f, &h)?);
                }
            }
        }
        self.straighten(pending)
    }

    pub fn multiply_all(&self, factors: &[&UElement]) -> Result<UElement, Error> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Left multiplication by a ring element.
    pub fn mul_poly(&self, f: &Poly, u: &UElement) -> Result<UElement, Error> {
        let ring = self.ring();
        let mut terms = BTreeMap::new();
        for (w, c) in &u.terms {
            add_into(&mut terms, w.clone(), ring.mul(f, c)?);
        }
        Ok(UElement { terms })
    }

    pub fn pow(&self, u: &UElement, k: u32) -> Result<UElement, Error> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, u)?;
        }
        Ok(acc)
    }

    /// `uv - vu`
    pub fn commutator(&self, u: &UElement, v: &UElement) -> Result<UElement, Error> {
        Ok(self.multiply(u, v)?.sub(&self.multiply(v, u)?))
    }

    pub fn filtration_degree(&self, u: &UElement) -> usize {
        u.filtration_degree()
    }

    /// `f {i_1..i_k} -> (1/k!) f sum_sigma D_{sigma(1)} ... D_{sigma(k)}`.
    pub fn symmetrize(&self, t: &STensor) -> Result<UElement, Error> {
        let mut raw = Vec::new();
        for (w, f) in &t.terms {
            self.check_word(w)?;
            let k = w.len();
            let inv = factorial(k).recip();
            let scaled = f.scale(&inv);
            for perm in permutations(k) {
                raw.push((scaled.clone(), Word(perm.iter().map(|&p| w.0[p]).collect())));
            }
        }
        self.normal_form(&raw)
    }

    /// Image of `u` in `U_(n)/U_(n-1)`, read as a symmetric tensor.
    pub fn symbol(&self, u: &UElement, n: usize) -> Result<STensor, Error> {
        let degree = u.filtration_degree();
        if degree > n {
            return Err(Error::DegreeExceeds { degree, bound: n });
        }
        Ok(STensor { terms: u.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() })
    }

    /// The empty-word coefficient, equal to the action of `u` on `1`.
    pub fn counit(&self, u: &UElement) -> Poly {
        u.terms.get(&Word::empty()).cloned().unwrap_or_else(|| self.ring().zero())
    }

    /// `f * w(p)` summed over terms, each word acting as a composition of
    /// derivations (rightmost letter first).
    pub(crate) fn act(&self, u: &UElement, p: &Poly, limit: Option<u32>) -> Result<Poly, Error> {
        let ring = self.ring();
        let mut out = ring.zero();
        for (w, f) in &u.terms {
            let q = self.apply_word(w, p, limit)?;
            if !q.is_zero() {
                out.add_assign_ref(&ring.mul(f, &q)?);
            }
        }
        if let (Some(n), Some(d)) = (limit, out.degree()) {
            if d > n {
                return Err(Error::TruncationExceeded { degree: d, truncation: n });
            }
        }
        Ok(out)
    }

    pub(crate) fn apply_word(&self, w: &Word, p: &Poly, limit: Option<u32>) -> Result<Poly, Error> {
        let ring = self.ring();
        let mut q = ring.reduce(p)?;
        for &letter in w.0.iter().rev() {
            if q.is_zero() {
                break;
            }
            q = self.pres.generators()[letter].apply(ring, &q)?;
            if let (Some(n), Some(d)) = (limit, q.degree()) {
                if d > n {
                    return Err(Error::TruncationExceeded { degree: d, truncation: n });
                }
            }
        }
        Ok(q)
    }

    /// The differential operator `u` applied to `p`; equals `counit(u * p)`.
    pub fn evaluate_operator(&self, u: &UElement, p: &Poly, truncation: u32) -> Result<Poly, Error> {
        self.ring().check(p)?;
        if let Some(d) = p.degree() {
            if d > truncation {
                return Err(Error::TruncationExceeded { degree: d, truncation });
            }
        }
        self.act(u, p, Some(truncation))
    }

    /// Whether `u` and `v` act identically on every standard monomial of
    /// degree at most `truncation`.
    pub fn operator_equal(&self, u: &UElement, v: &UElement, truncation: u32) -> Result<bool, Error> {
        self.is_zero_operator(&u.sub(v), truncation)
    }

    pub fn is_zero_operator(&self, u: &UElement, truncation: u32) -> Result<bool, Error> {
        for m in self.ring().standard_monomials(truncation) {
            let p = Poly::term(m, Rational::one());
            if !self.act(u, &p, None)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies the quotient map induced by restricting generators to
    /// `target`'s ring: coefficients are reduced and words kept.
    pub fn push_to_quotient(&self, u: &UElement, target: &UAlgebra) -> Result<UElement, Error> {
        if self.ngens() != target.ngens() {
            return Err(Error::GeneratorMismatch(format!("{} vs {} generators", self.ngens(), target.ngens())));
        }
        for (i, (g, h)) in self.pres.generators().iter().zip(target.pres.generators()).enumerate() {
            let restricted = restrict_to_quotient(g, self.ring(), target.ring())?;
            if !restricted.equals_in(h, target.ring())? {
                return Err(Error::GeneratorMismatch(format!("generator {} does not restrict to its image", self.names()[i])));
            }
        }
        let raw: Vec<(Poly, Word)> = u.terms.iter().map(|(w, c)| (c.clone(), w.clone())).collect();
        target.normal_form(&raw)
    }

    /// Splits an element of `U_(1)` as `f + sum_i g_i D_i`.
    pub fn degree_one_split(&self, u: &UElement) -> Result<(Poly, Vec<Poly>), Error> {
        let degree = u.filtration_degree();
        if degree > 1 {
            return Err(Error::DegreeExceeds { degree, bound: 1 });
        }
        let coeffs = (0..self.ngens())
            .map(|i| u.terms.get(&Word::letter(i)).cloned().unwrap_or_else(|| self.ring().zero()))
            .collect();
        Ok((self.counit(u), coeffs))
    }

    pub fn display(&self, u: &UElement) -> String {
        let names = self.names();
        format_combination(self.ring(), u.terms.iter().rev().map(|(w, c)| (w.render(names), c)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All orderings of `0..k` (with `k!` entries).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut current, &mut out);
    out
}

fn heap_permute(n: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..n - 1 {
        heap_permute(n - 1, a, out);
        if n % 2 == 0 {
            a.swap(i, n - 1);
        } else {
            a.swap(0, n - 1);
        }
    }
    heap_permute(n - 1, a, out);
}
