//! Coproduct, counit, primitives, jets and the `R^e` example.
//!
//! Tensors `U ⊗_R ... ⊗_R U` are balanced over the left `R`-action, so
//! `(f u) ⊗ v = u ⊗ (f v)` and every ring coefficient can be collected into
//! one scalar per tuple of PBW words. A [`UTensor`] therefore stores
//! `(w_1, ..., w_k) -> f`. For free presentations these tuples form an
//! `R`-basis and equality of tensors is equality of maps.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::display::format_combination;
use crate::enveloping::{UAlgebra, UElement, Word};
use crate::linalg::Matrix;
use crate::polyring::{Monomial, Poly, Rational, RingCtx};
use crate::report::{Check, CheckReport, Status};
use crate::sample::Sampler;
use crate::Error;

/// `sum f * (w_1 ⊗ ... ⊗ w_k)` with sorted words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UTensor {
    arity: usize,
    terms: BTreeMap<Vec<Word>, Poly>,
}

impl UTensor {
    pub fn zero(arity: usize) -> Self {
        UTensor { arity, terms: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[Word]) -> Option<&Poly> {
        self.terms.get(key)
    }

    fn add_term(&mut self, key: Vec<Word>, c: Poly) {
        debug_assert_eq!(key.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &UTensor) -> UTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UTensor) -> UTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> UTensor {
        let mut out = UTensor::zero(self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(s));
        }
        out
    }

    /// Exchanges the two slots of a binary tensor.
    pub fn swap(&self) -> UTensor {
        let mut out = UTensor::zero(self.arity);
        for (k, c) in &self.terms {
            let mut k = k.clone();
            k.reverse();
            out.add_term(k, c.clone());
        }
        out
    }

    /// Binary tensors grouped as `sum_w w ⊗ u_w` with the coefficient moved
    /// into the right factor.
    pub fn components(&self, alg: &UAlgebra) -> Vec<(Word, UElement)> {
        let mut groups: BTreeMap<Word, UElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            let right = alg.monomial(c, k[self.arity - 1].clone()).expect("sorted word");
            let left = k[0].clone();
            let entry = groups.entry(left).or_default();
            *entry = entry.add(&right);
        }
        groups.into_iter().collect()
    }

    /// Renders `w_1 ⊗ ... ⊗ f*w_k`, with the coefficient on the last slot.
    pub fn display(&self, alg: &UAlgebra) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = alg.names();
        let slot = |w: &Word| if w.is_empty() { "1".to_string() } else { w.render(names) };
        self.terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let mut parts: Vec<String> = k[..k.len() - 1].iter().map(slot).collect();
                parts.push(format_combination(alg.ring(), [(k[k.len() - 1].render(names), c)]));
                parts.join(" ⊗ ")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `sum_S w_S ⊗ w_{S^c}` over subsets of letter positions.
fn word_coproduct(w: &Word) -> Vec<(Word, Word)> {
    let k = w.len();
    assert!(k < 64, "word too long for subset enumeration");
    let full = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    (0..=full).map(|mask| (w.select(mask), w.select(!mask & full))).collect()
}

/// Canonical form of `sum u_i ⊗ v_i`.
pub fn tensor_canonicalize(alg: &UAlgebra, pairs: &[(UElement, UElement)]) -> Result<UTensor, Error> {
    let ring = alg.ring();
    let mut out = UTensor::zero(2);
    for (u, v) in pairs {
        for (a, f) in u.terms() {
            for (b, g) in v.terms() {
                out.add_term(vec![a.clone(), b.clone()], ring.mul(f, g)?);
            }
        }
    }
    Ok(out)
}

/// Multiplicative extension of `Δ(f) = f ⊗ 1`, `Δ(D) = D ⊗ 1 + 1 ⊗ D`.
pub fn coproduct(u: &UElement) -> UTensor {
    let mut out = UTensor::zero(2);
    for (w, f) in u.terms() {
        for (a, b) in word_coproduct(w) {
            out.add_term(vec![a, b], f.clone());
        }
    }
    out
}

/// `Δ(u) - u ⊗ 1 - 1 ⊗ u`
pub fn reduced_coproduct(u: &UElement) -> UTensor {
    let mut out = coproduct(u);
    for (w, f) in u.terms() {
        out.add_term(vec![w.clone(), Word::empty()], -f);
        out.add_term(vec![Word::empty(), w.clone()], -f);
    }
    out
}

/// Applies `Δ̄` to the first slot of every term.
fn reduced_coproduct_first_slot(t: &UTensor) -> UTensor {
    let mut out = UTensor::zero(t.arity + 1);
    for (k, f) in &t.terms {
        let first = UElement::from_sorted(k[0].clone(), f.clone());
        for (k2, g) in reduced_coproduct(&first).terms {
            let mut key = k2;
            key.extend_from_slice(&k[1..]);
            out.add_term(key, g);
        }
    }
    out
}

/// `Δ̄^(n) = (Δ̄ ⊗ id) ∘ Δ̄^(n-1)`, with `Δ̄^(1) = Δ̄`.
pub fn iterated_reduced_coproduct(u: &UElement, n: usize) -> UTensor {
    assert!(n >= 1);
    let mut t = reduced_coproduct(u);
    for _ in 1..n {
        t = reduced_coproduct_first_slot(&t);
    }
    t
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Primitivity {
    Yes,
    No,
    /// The residue is nonzero on words but vanishes as a bi-operator.
    Undecided,
}

impl Primitivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Primitivity::Yes => "yes",
            Primitivity::No => "no",
            Primitivity::Undecided => "undecided",
        }
    }

    pub fn status(self) -> Status {
        match self {
            Primitivity::Yes => Status::Pass,
            Primitivity::No => Status::Fail,
            Primitivity::Undecided => Status::Undecided,
        }
    }
}

impl fmt::Display for Primitivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluates the binary tensor as the bi-operator `(p, q) -> sum f w_1(p) w_2(q)`
/// on pairs of standard monomials of degree at most `truncation`. Returns a
/// witness pair where it is nonzero. The bi-operator is well defined on the
/// balanced tensor, so a nonzero value proves the tensor nonzero.
pub fn bioperator_witness(alg: &UAlgebra, t: &UTensor, truncation: u32) -> Result<Option<(Monomial, Monomial)>, Error> {
    assert_eq!(t.arity, 2);
    let ring = alg.ring();
    let monos = ring.standard_monomials(truncation);
    for p in &monos {
        let pp = Poly::term(p.clone(), Rational::one());
        for q in &monos {
            let qq = Poly::term(q.clone(), Rational::one());
            let mut total = ring.zero();
            for (k, f) in &t.terms {
                let a = alg.apply_word(&k[0], &pp, None)?;
                if a.is_zero() {
                    continue;
                }
                let b = alg.apply_word(&k[1], &qq, None)?;
                if b.is_zero() {
                    continue;
                }
                total.add_assign_ref(&ring.mul(&ring.mul(f, &a)?, &b)?);
            }
            if !ring.reduce(&total)?.is_zero() {
                return Ok(Some((p.clone(), q.clone())));
            }
        }
    }
    Ok(None)
}

/// Decides `Δ̄(u) = 0`: exactly for free presentations, otherwise through the
/// bi-operator oracle up to `truncation`.
pub fn is_primitive(alg: &UAlgebra, u: &UElement, truncation: u32) -> Result<Primitivity, Error> {
    if !alg.counit(u).is_zero() {
        return Err(Error::CounitNonzero);
    }
    let residue = reduced_coproduct(u);
    tensor_zero_status(alg, &residue, truncation)
}

/// Yes if the tensor vanishes on words; for non-free presentations a nonzero
/// word-level tensor is no only if the bi-operator oracle finds a witness.
pub fn tensor_zero_status(alg: &UAlgebra, t: &UTensor, truncation: u32) -> Result<Primitivity, Error> {
    if t.is_zero() {
        return Ok(Primitivity::Yes);
    }
    if alg.is_free() {
        return Ok(Primitivity::No);
    }
    Ok(match bioperator_witness(alg, t, truncation)? {
        Some(_) => Primitivity::No,
        None => Primitivity::Undecided,
    })
}

/// Smallest `n <= max_n` with `Δ̄^(n)(u) = 0`, or `None` if it exceeds `max_n`.
/// The zero element has level 0.
pub fn primitive_filtration_level(alg: &UAlgebra, u: &UElement, max_n: usize) -> Result<Option<usize>, Error> {
    if !alg.counit(u).is_zero() {
        return Err(Error::CounitNonzero);
    }
    if u.is_zero() {
        return Ok(Some(0));
    }
    let mut t = reduced_coproduct(u);
    for n in 1..=max_n {
        if t.is_zero() {
            return Ok(Some(n));
        }
        t = reduced_coproduct_first_slot(&t);
    }
    Ok(None)
}

/// Nondecreasing words over `ngens` letters of length at most `n`, shortest
/// first.
pub fn sorted_words(ngens: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().copied().unwrap_or(0);
            for l in start..ngens {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        layer = next;
    }
    out
}

/// Basis of `{u : Δ̄(u) = 0}` among `sum c_{m,w} m w` with `deg m <= d` and
/// `|w| <= n`.
pub fn solve_primitives(alg: &UAlgebra, d: u32, n: usize) -> Result<Vec<UElement>, Error> {
    if !alg.is_free() {
        return Err(Error::NonFree);
    }
    let ring = alg.ring();
    let monos = ring.standard_monomials(d);
    let words = sorted_words(alg.ngens(), n);
    let mut unknowns: Vec<(Monomial, Word)> = Vec::new();
    for w in &words {
        for m in &monos {
            unknowns.push((m.clone(), w.clone()));
        }
    }
    let mut row_index: BTreeMap<(Vec<Word>, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (m, w) in &unknowns {
        let f = ring.reduce(&Poly::term(m.clone(), Rational::one()))?;
        let residue = reduced_coproduct(&UElement::from_sorted(w.clone(), f));
        let mut col = Vec::new();
        for (key, c) in residue.terms() {
            for (mono, q) in c.terms() {
                let next = row_index.len();
                let r = *row_index.entry((key.clone(), mono.clone())).or_insert(next);
                col.push((r, q.clone()));
            }
        }
        columns.push(col);
    }
    let mut mat = Matrix::zeros(row_index.len(), unknowns.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (r, q) in col {
            mat.set(r, j, q);
        }
    }
    let mut basis = Vec::new();
    for v in mat.nullspace() {
        let mut raw = Vec::new();
        for ((m, w), c) in unknowns.iter().zip(&v) {
            if !c.is_zero() {
                raw.push((Poly::term(m.clone(), c.clone()), w.clone()));
            }
        }
        basis.push(alg.normal_form(&raw)?);
    }
    Ok(basis)
}

/// Product in the Takeuchi subspace: `(sum a_i ⊗ b_i)(sum c_j ⊗ d_j) =
/// sum a_i c_j ⊗ b_i d_j`, where the left operand must lie in it (images of
/// `Δ` do).
pub fn tensor_multiply(alg: &UAlgebra, s: &UTensor, t: &UTensor) -> Result<UTensor, Error> {
    assert_eq!(s.arity, 2);
    assert_eq!(t.arity, 2);
    let ring = alg.ring();
    let mut out = UTensor::zero(2);
    for (k1, f) in &s.terms {
        for (k2, g) in &t.terms {
            let left = alg.multiply(&alg.monomial(f, k1[0].clone())?, &alg.monomial(g, k2[0].clone())?)?;
            let right = alg.multiply(&UElement::from_sorted(k1[1].clone(), ring.one()), &UElement::from_sorted(k2[1].clone(), ring.one()))?;
            for (p, h) in left.terms() {
                for (q, kq) in right.terms() {
                    out.add_term(vec![p.clone(), q.clone()], ring.mul(h, kq)?);
                }
            }
        }
    }
    Ok(out)
}

/// `(Δ ⊗ id)` and `(id ⊗ Δ)` applied to a binary tensor.
fn coproduct_on_slot(t: &UTensor, slot: usize) -> UTensor {
    let mut out = UTensor::zero(t.arity + 1);
    for (k, f) in &t.terms {
        for (a, b) in word_coproduct(&k[slot]) {
            let mut key = k[..slot].to_vec();
            key.push(a);
            key.push(b);
            key.extend_from_slice(&k[slot + 1..]);
            out.add_term(key, f.clone());
        }
    }
    out
}

/// `(ε ⊗ id)`: keeps terms whose first slot is empty.
pub fn left_counit(alg: &UAlgebra, t: &UTensor) -> Result<UElement, Error> {
    let raw: Vec<(Poly, Word)> =
        t.terms.iter().filter(|(k, _)| k[0].is_empty()).map(|(k, f)| (f.clone(), k[1].clone())).collect();
    alg.normal_form(&raw)
}

/// `(id ⊗ ε)`: `a ⊗ b -> ε(b) a` with `ε(b)` acting from the left.
pub fn right_counit(alg: &UAlgebra, t: &UTensor) -> Result<UElement, Error> {
    let raw: Vec<(Poly, Word)> =
        t.terms.iter().filter(|(k, _)| k[1].is_empty()).map(|(k, f)| (f.clone(), k[0].clone())).collect();
    alg.normal_form(&raw)
}

fn compare(alg: &UAlgebra, lhs: &UTensor, rhs: &UTensor, truncation: u32) -> Result<Status, Error> {
    let diff = lhs.sub(rhs);
    if diff.arity == 2 {
        return Ok(tensor_zero_status(alg, &diff, truncation)?.status());
    }
    Ok(if diff.is_zero() {
        Status::Pass
    } else if alg.is_free() {
        Status::Fail
    } else {
        Status::Undecided
    })
}

fn compare_elements(alg: &UAlgebra, u: &UElement, v: &UElement, truncation: u32) -> Result<Status, Error> {
    if u == v {
        return Ok(Status::Pass);
    }
    if alg.is_free() || !alg.operator_equal(u, v, truncation)? {
        return Ok(Status::Fail);
    }
    Ok(Status::Undecided)
}

/// Checks the bialgebra identities on `samples` seeded random pairs of
/// elements of filtration at most `max_len`.
pub fn counit_axioms_check(alg: &UAlgebra, samples: usize, max_len: usize, seed: u64) -> Result<CheckReport, Error> {
    const TRUNC: u32 = 6;
    let names = [
        "unit",
        "coproduct multiplicative",
        "coassociativity",
        "cocommutativity",
        "left counit",
        "right counit",
        "counit multiplicative",
    ];
    let mut worst: BTreeMap<&str, (Status, Option<String>)> = names.iter().map(|n| (*n, (Status::Pass, None))).collect();
    let mut record = |name: &'static str, status: Status, witness: &dyn Fn() -> String| {
        let entry = worst.get_mut(name).expect("known check");
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Undecided => 1,
            _ => 2,
        };
        if rank(status) > rank(entry.0) {
            *entry = (status, Some(witness()));
        }
    };

    let one = alg.one();
    let one_one = tensor_canonicalize(alg, &[(one.clone(), one.clone())])?;
    let unit_ok = coproduct(&one) == one_one && alg.counit(&one) == alg.ring().one();
    record("unit", Status::from_bool(unit_ok), &|| "Δ(1) or ε(1)".to_string());

    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        let a = sampler.uelement(alg, max_len, 2, 3)?;
        let b = sampler.uelement(alg, max_len, 2, 3)?;
        let show = || format!("a = {}, b = {}", alg.display(&a), alg.display(&b));
        let ab = alg.multiply(&a, &b)?;
        let da = coproduct(&a);

        let lhs = coproduct(&ab);
        let rhs = tensor_multiply(alg, &da, &coproduct(&b))?;
        record("coproduct multiplicative", compare(alg, &lhs, &rhs, TRUNC)?, &show);

        let left = coproduct_on_slot(&da, 0);
        let right = coproduct_on_slot(&da, 1);
        record("coassociativity", compare(alg, &left, &right, TRUNC)?, &show);

        record("cocommutativity", compare(alg, &da.swap(), &da, TRUNC)?, &show);
        record("left counit", compare_elements(alg, &left_counit(alg, &da)?, &a, TRUNC)?, &show);
        record("right counit", compare_elements(alg, &right_counit(alg, &da)?, &a, TRUNC)?, &show);

        let eb = alg.from_poly(&alg.counit(&b))?;
        let lhs = alg.counit(&ab);
        let rhs = alg.counit(&alg.multiply(&a, &eb)?);
        record("counit multiplicative", Status::from_bool(lhs == rhs), &show);
    }

    let mut report = CheckReport::default();
    for name in names {
        let (status, witness) = worst.remove(name).expect("known check");
        let mut check = Check::with_status(name, status);
        if let Some(w) = witness {
            check = check.with_witness(w);
        }
        report.push(check);
    }
    Ok(report)
}

/// An element of `J^n = Hom_R(U_(n), R)` given by its values on PBW words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetElement {
    order: usize,
    values: BTreeMap<Word, Poly>,
}

impl JetElement {
    pub fn new(order: usize, values: impl IntoIterator<Item = (Word, Poly)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (w, v) in values {
            if w.len() > order {
                return Err(Error::DegreeExceeds { degree: w.len(), bound: order });
            }
            if !w.is_sorted() {
                return Err(Error::InvalidRing(format!("jet word {w} is not nondecreasing")));
            }
            if !v.is_zero() {
                map.insert(w, v);
            }
        }
        Ok(JetElement { order, values: map })
    }

    /// The unit jet: 1 on the empty word.
    pub fn epsilon(ring: &RingCtx, order: usize) -> Self {
        JetElement { order, values: BTreeMap::from([(Word::empty(), ring.one())]) }
    }

    /// Dual basis element: 1 on `w`, 0 on the other PBW words.
    pub fn delta(ring: &RingCtx, order: usize, w: Word) -> Result<Self, Error> {
        JetElement::new(order, [(w, ring.one())])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self, w: &Word) -> Option<&Poly> {
        self.values.get(w)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.values.iter()
    }
}

/// `φ(sum f_w w) = sum f_w φ(w)`.
pub fn jet_pair(alg: &UAlgebra, phi: &JetElement, u: &UElement) -> Result<Poly, Error> {
    if !alg.is_free() {
        return Err(Error::NonFree);
    }
    let degree = u.filtration_degree();
    if degree > phi.order {
        return Err(Error::DegreeExceeds { degree, bound: phi.order });
    }
    let ring = alg.ring();
    let mut out = ring.zero();
    for (w, f) in u.terms() {
        if let Some(v) = phi.values.get(w) {
            out.add_assign_ref(&ring.mul(f, v)?);
        }
    }
    Ok(out)
}

/// `(φ1 φ2)(w) = sum φ1(w_(1)) φ2(w_(2))` over the coproduct of each word.
pub fn jet_multiply(alg: &UAlgebra, a: &JetElement, b: &JetElement) -> Result<JetElement, Error> {
    if !alg.is_free() {
        return Err(Error::NonFree);
    }
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    let ring = alg.ring();
    let mut values = Vec::new();
    for w in sorted_words(alg.ngens(), a.order) {
        let mut v = ring.zero();
        for (l, r) in word_coproduct(&w) {
            if let (Some(x), Some(y)) = (a.values.get(&l), b.values.get(&r)) {
                v.add_assign_ref(&ring.mul(x, y)?);
            }
        }
        values.push((w, v));
    }
    JetElement::new(a.order, values)
}

/// `sum c * (a ⊗ b)` in `R ⊗_K R^op` with standard monomials on both sides.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct REElement {
    terms: BTreeMap<(Monomial, Monomial), Rational>,
}

/// `sum c * (a ⊗ m ⊗ b)`: the image of `R^e ⊗_R R^e` under
/// `(a ⊗ b) ⊗ (c ⊗ d) -> a ⊗ bc ⊗ d`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RETriple {
    terms: BTreeMap<(Monomial, Monomial, Monomial), Rational>,
}

fn add_rational<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(k).or_insert_with(Rational::zero);
    *e += c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, c| !c.is_zero());
}

impl REElement {
    /// `sum a_i ⊗ b_i` for ring elements, expanded on standard monomials.
    pub fn from_pairs(ring: &RingCtx, pairs: &[(Poly, Poly)]) -> Result<Self, Error> {
        let mut terms = BTreeMap::new();
        for (a, b) in pairs {
            let (a, b) = (ring.reduce(a)?, ring.reduce(b)?);
            for (ma, ca) in a.terms() {
                for (mb, cb) in b.terms() {
                    add_rational(&mut terms, (ma.clone(), mb.clone()), ca * cb);
                }
            }
        }
        prune(&mut terms);
        Ok(REElement { terms })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn display(&self, ring: &RingCtx) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|((a, b), c)| {
                let pa = ring.fmt_poly(&Poly::term(a.clone(), c.clone()));
                let pb = ring.fmt_poly(&Poly::term(b.clone(), Rational::one()));
                format!("{pa} ⊗ {pb}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl RETriple {
    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial, Monomial), &Rational)> {
        self.terms.iter()
    }
}

fn mono_poly(m: &Monomial) -> Poly {
    Poly::term(m.clone(), Rational::one())
}

/// `(a1 ⊗ b1)(a2 ⊗ b2) = a1 a2 ⊗ b2 b1`
pub fn re_multiply(ring: &RingCtx, x: &REElement, y: &REElement) -> Result<REElement, Error> {
    let mut pairs = Vec::new();
    for ((a1, b1), c1) in &x.terms {
        for ((a2, b2), c2) in &y.terms {
            let left = ring.mul(&mono_poly(a1), &mono_poly(a2))?.scale(&(c1 * c2));
            let right = ring.mul(&mono_poly(b2), &mono_poly(b1))?;
            pairs.push((left, right));
        }
    }
    REElement::from_pairs(ring, &pairs)
}

/// `Δ(a ⊗ b) = (a ⊗ 1) ⊗ (1 ⊗ b)`, read in `R ⊗ R ⊗ R`.
pub fn re_coproduct(ring: &RingCtx, x: &REElement) -> RETriple {
    let one = Monomial::one(ring.nvars());
    let mut terms = BTreeMap::new();
    for ((a, b), c) in &x.terms {
        add_rational(&mut terms, (a.clone(), one.clone(), b.clone()), c.clone());
    }
    RETriple { terms }
}

/// `ε(a ⊗ b) = ab`
pub fn re_counit(ring: &RingCtx, x: &REElement) -> Result<Poly, Error> {
    let mut out = ring.zero();
    for ((a, b), c) in &x.terms {
        out.add_scaled(&ring.mul(&mono_poly(a), &mono_poly(b))?, c);
    }
    Ok(out)
}

/// `(ε ⊗ id)(a ⊗ m ⊗ b) = am ⊗ b`.
pub fn re_left_counit(ring: &RingCtx, t: &RETriple) -> Result<REElement, Error> {
    let pairs: Vec<(Poly, Poly)> = t
        .terms
        .iter()
        .map(|((a, m, b), c)| Ok((ring.mul(&mono_poly(a), &mono_poly(m))?.scale(c), mono_poly(b))))
        .collect::<Result<_, Error>>()?;
    REElement::from_pairs(ring, &pairs)
}

/// `(id ⊗ ε)(a ⊗ m ⊗ b) = a ⊗ mb`.
pub fn re_right_counit(ring: &RingCtx, t: &RETriple) -> Result<REElement, Error> {
    let pairs: Vec<(Poly, Poly)> = t
        .terms
        .iter()
        .map(|((a, m, b), c)| Ok((mono_poly(a).scale(c), ring.mul(&mono_poly(m), &mono_poly(b))?)))
        .collect::<Result<_, Error>>()?;
    REElement::from_pairs(ring, &pairs)
}

/// Slotwise product in `R ⊗ R ⊗ R`.
pub fn re_triple_multiply(ring: &RingCtx, s: &RETriple, t: &RETriple) -> Result<RETriple, Error> {
    let mut terms = BTreeMap::new();
    for ((a1, m1, b1), c1) in &s.terms {
        for ((a2, m2, b2), c2) in &t.terms {
            let a = ring.mul(&mono_poly(a1), &mono_poly(a2))?;
            let m = ring.mul(&mono_poly(m1), &mono_poly(m2))?;
            let b = ring.mul(&mono_poly(b1), &mono_poly(b2))?;
            let c = c1 * c2;
            for (ma, ca) in a.terms() {
                for (mm, cm) in m.terms() {
                    for (mb, cb) in b.terms() {
                        add_rational(&mut terms, (ma.clone(), mm.clone(), mb.clone()), &c * ca * cm * cb);
                    }
                }
            }
        }
    }
    prune(&mut terms);
    Ok(RETriple { terms })
}
